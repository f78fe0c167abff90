//! Horizon grids: `start:end:xFactor` (geometric) or `a,b,c`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid grid token '{token}': {reason}")]
pub struct GridError {
    pub token: String,
    pub reason: &'static str,
}

fn err(token: &str, reason: &'static str) -> GridError {
    GridError { token: token.to_string(), reason }
}

fn horizon(tok: &str) -> Result<u64, GridError> {
    let t = tok.trim();
    let n: u64 = t.parse().map_err(|_| err(t, "expected a positive integer"))?;
    if n == 0 {
        return Err(err(t, "horizons must be positive"));
    }
    Ok(n)
}

/// Parses a grid. Geometric grids include `end` only if it is hit exactly.
pub fn parse_grid(s: &str) -> Result<Vec<u64>, GridError> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(err(s, "expected start:end:xFactor"));
        }
        let (start, end) = (horizon(parts[0])?, horizon(parts[1])?);
        let f = parts[2].trim();
        let factor: u64 = f
            .strip_prefix('x')
            .ok_or_else(|| err(f, "factor must look like x2"))?
            .parse()
            .map_err(|_| err(f, "factor must look like x2"))?;
        if factor < 2 {
            return Err(err(f, "factor must be at least 2"));
        }
        if end < start {
            return Err(err(parts[1], "end is below start"));
        }
        let mut out = vec![start];
        let mut t = start;
        while let Some(next) = t.checked_mul(factor).filter(|&n| n <= end) {
            out.push(next);
            t = next;
        }
        return Ok(out);
    }
    let out = s.split(',').map(horizon).collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(err(s, "empty grid"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric() {
        let g = parse_grid("1024:1048576:x2").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 1024);
        assert_eq!(*g.last().unwrap(), 1 << 20);
        assert_eq!(parse_grid("10:1000:x10").unwrap(), vec![10, 100, 1000]);
        assert_eq!(parse_grid("10:999:x10").unwrap(), vec![10, 100]);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_grid("100").unwrap(), vec![100]);
        assert_eq!(parse_grid("100, 2000,5").unwrap(), vec![100, 2000, 5]);
    }

    #[test]
    fn errors_name_the_token() {
        assert_eq!(parse_grid("1:10:3").unwrap_err().token, "3");
        assert_eq!(parse_grid("1:10:x1").unwrap_err().token, "x1");
        assert_eq!(parse_grid("1,abc").unwrap_err().token, "abc");
        assert_eq!(parse_grid("0").unwrap_err().token, "0");
        assert_eq!(parse_grid("1:2").unwrap_err().token, "1:2");
        assert_eq!(parse_grid("100:10:x2").unwrap_err().token, "10");
    }
}
