//! Power-law fits on log-log axes.

use alloc::vec::Vec;

use super::SimError;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerFit {
    /// Slope of `log y` against `log x`.
    pub beta: f64,
    pub intercept: f64,
    pub r2: f64,
    pub used: usize,
    /// Indices dropped because `x` or `y` was not positive.
    pub excluded: Vec<usize>,
}

/// Least squares of `ln y = intercept + beta ln x`.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> Result<PowerFit, SimError> {
    if xs.len() != ys.len() {
        return Err(SimError::Fit("x and y lengths differ"));
    }
    let mut excluded = Vec::new();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
            pts.push((libm::log(x), libm::log(y)));
        } else {
            excluded.push(i);
        }
    }
    if pts.len() < 3 {
        return Err(SimError::Fit("fewer than 3 usable points"));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(SimError::Fit("all x values are equal"));
    }
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let sse: f64 = pts.iter().map(|p| p.1 - intercept - beta * p.0).map(|e| e * e).sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(PowerFit { beta, intercept, r2, used: pts.len(), excluded })
}
