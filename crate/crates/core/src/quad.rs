//! Exact arithmetic in `Z[√2]`, enough to order orbit values of irrational
//! rotations and to evaluate `√2`-valued linear functionals.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// `r + s·√2` with integer parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadInt {
    pub r: i128,
    pub s: i128,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { r: 0, s: 0 };

    pub fn new(r: i128, s: i128) -> QuadInt {
        QuadInt { r, s }
    }

    pub fn int(r: i128) -> QuadInt {
        QuadInt { r, s: 0 }
    }

    pub fn checked_add(self, o: QuadInt) -> Result<QuadInt> {
        Ok(QuadInt {
            r: self.r.checked_add(o.r).ok_or(Error::IntegerOverflow)?,
            s: self.s.checked_add(o.s).ok_or(Error::IntegerOverflow)?,
        })
    }

    pub fn checked_sub(self, o: QuadInt) -> Result<QuadInt> {
        Ok(QuadInt {
            r: self.r.checked_sub(o.r).ok_or(Error::IntegerOverflow)?,
            s: self.s.checked_sub(o.s).ok_or(Error::IntegerOverflow)?,
        })
    }

    pub fn checked_scale(self, k: i128) -> Result<QuadInt> {
        Ok(QuadInt {
            r: self.r.checked_mul(k).ok_or(Error::IntegerOverflow)?,
            s: self.s.checked_mul(k).ok_or(Error::IntegerOverflow)?,
        })
    }

    /// Exact sign, comparing `r^2` with `2 s^2` when the parts disagree.
    pub fn signum(self) -> Result<Ordering> {
        let sr = self.r.cmp(&0);
        let ss = self.s.cmp(&0);
        if ss == Ordering::Equal {
            return Ok(sr);
        }
        if sr == Ordering::Equal || sr == ss {
            return Ok(ss);
        }
        let r2 = self.r.checked_mul(self.r).ok_or(Error::IntegerOverflow)?;
        let s2 = self
            .s
            .checked_mul(self.s)
            .and_then(|v| v.checked_mul(2))
            .ok_or(Error::IntegerOverflow)?;
        // r^2 != 2 s^2 for s != 0 since √2 is irrational
        Ok(if r2 > s2 { sr } else { ss })
    }

    pub fn cmp_exact(self, o: QuadInt) -> Result<Ordering> {
        self.checked_sub(o)?.signum()
    }

    pub fn approx(self) -> f64 {
        self.r as f64 + self.s as f64 * std::f64::consts::SQRT_2
    }

    /// `floor((r + s√2) / d)` for `d > 0`.
    pub fn floor_div(self, d: i128) -> Result<i128> {
        debug_assert!(d > 0);
        let mut m = (self.approx() / d as f64).floor() as i128;
        // correct the float guess with exact comparisons
        loop {
            let lo = QuadInt::int(m.checked_mul(d).ok_or(Error::IntegerOverflow)?);
            if self.cmp_exact(lo)? == Ordering::Less {
                m -= 1;
                continue;
            }
            let hi = QuadInt::int((m + 1).checked_mul(d).ok_or(Error::IntegerOverflow)?);
            if self.cmp_exact(hi)? != Ordering::Less {
                m += 1;
                continue;
            }
            return Ok(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn signs() {
        assert_eq!(QuadInt::new(-1, 1).signum().unwrap(), Ordering::Greater);
        assert_eq!(QuadInt::new(2, -1).signum().unwrap(), Ordering::Greater);
        assert_eq!(QuadInt::new(1, -1).signum().unwrap(), Ordering::Less);
        assert_eq!(QuadInt::new(-3, 2).signum().unwrap(), Ordering::Less);
        assert_eq!(QuadInt::ZERO.signum().unwrap(), Ordering::Equal);
        // 1 < √2
        assert_eq!(QuadInt::int(1).cmp_exact(QuadInt::new(0, 1)).unwrap(), Ordering::Less);
    }

    #[test]
    fn floors() {
        assert_eq!(QuadInt::new(0, 1).floor_div(1).unwrap(), 1);
        assert_eq!(QuadInt::new(-1, 1).floor_div(1).unwrap(), 0);
        assert_eq!(QuadInt::new(0, -1).floor_div(1).unwrap(), -2);
        assert_eq!(QuadInt::new(7, 0).floor_div(7).unwrap(), 1);
        assert_eq!(QuadInt::new(-7, 0).floor_div(7).unwrap(), -1);
    }

    #[test]
    fn overflow_is_reported() {
        let big = QuadInt::new(i128::MAX / 2, -(i128::MAX / 4));
        assert!(matches!(big.signum(), Err(Error::IntegerOverflow)));
    }

    proptest! {
        #[test]
        fn sign_agrees_with_float_away_from_zero(r in -1_000_000i128..1_000_000, s in -1_000_000i128..1_000_000) {
            let q = QuadInt::new(r, s);
            let f = q.approx();
            prop_assume!(f.abs() > 1e-6);
            let want = if f > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(q.signum().unwrap(), want);
        }

        #[test]
        fn floor_brackets(r in -10_000_000i128..10_000_000, s in -1_000_000i128..1_000_000, d in 1i128..1000) {
            let q = QuadInt::new(r, s);
            let m = q.floor_div(d).unwrap();
            prop_assert!(q.cmp_exact(QuadInt::int(m * d)).unwrap() != Ordering::Less);
            prop_assert!(q.cmp_exact(QuadInt::int((m + 1) * d)).unwrap() == Ordering::Less);
        }
    }
}
