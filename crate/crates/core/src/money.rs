use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

const FRAC_BITS: i32 = 64;
const SCALE: f64 = 18_446_744_073_709_551_616.0; // 2^64

/// Signed fixed-point amount with 64 fractional bits.
///
/// The constraint ledger is kept in this representation so that CCV and
/// Margin are exact: every `f64` in `[2^-11, 1]` converts without loss, sums
/// of such values never round, and replay is bit-identical. Conversions from
/// `f64` round toward negative infinity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i128);

impl Money {
    pub const ZERO: Money = Money(0);
    pub const ONE: Money = Money(1 << FRAC_BITS);

    /// Largest representable amount not above `x`. `x` must be finite.
    pub fn from_f64(x: f64) -> Money {
        debug_assert!(x.is_finite(), "Money::from_f64 on {x}");
        Money(libm::floor(x * SCALE) as i128)
    }

    /// Nearest `f64`.
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE
    }

    /// Largest `f64` not above this amount.
    pub fn to_f64_floor(self) -> f64 {
        let x = self.to_f64();
        if Money::from_f64(x) > self {
            x.next_down()
        } else {
            x
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn raw(self) -> i128 {
        self.0
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}
