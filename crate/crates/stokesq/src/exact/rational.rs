//! Arbitrary-precision rationals, always in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number. Denominator is kept positive and the pair coprime,
/// so equality and hashing are structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Build from a numerator/denominator pair, reducing to canonical form.
    ///
    /// Panics on a zero denominator; parsing layers reject "1/0" before
    /// this is reachable.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let mut num = num.into();
        let mut den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        } else {
            den = BigInt::from(1);
        }
        Rational { num, den }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational {
            num: n.into(),
            den: BigInt::from(1),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.den == BigInt::from(1)
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse. Panics on zero; callers guard (pivots are
    /// chosen nonzero, parsed scalars are checked).
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Rational::new(self.den.clone(), self.num.clone())
    }

    pub fn to_f64(&self) -> f64 {
        // Exact when representable; for the tiny values this crate moves
        // around (snapped critical values, frames) it always is close enough.
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(n), Some(d)) if d != 0.0 && n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Fall back through a high-precision quotient for huge parts.
                let scaled = (&self.num * BigInt::from(1u64 << 53)) / &self.den;
                scaled.to_f64().unwrap_or(f64::NAN) / (1u64 << 53) as f64
            }
        }
    }

    /// Best rational approximation of `x` by continued fractions, accepted
    /// only if the denominator stays ≤ `max_den` and the error < `tol`.
    pub fn snap_f64(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let mut frac = x.abs();
        // Convergent recurrence p_k = a_k p_{k-1} + p_{k-2}.
        let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
        let (mut p1, mut q1) = (BigInt::from(frac.floor() as i64), BigInt::from(1));
        frac -= frac.floor();
        let max_den = BigInt::from(max_den);
        for _ in 0..64 {
            let cand = Rational::new(if sign < 0.0 { -p1.clone() } else { p1.clone() }, q1.clone());
            if (cand.to_f64() - x).abs() < tol {
                return Some(cand);
            }
            if frac.abs() < 1e-18 {
                break;
            }
            let inv = 1.0 / frac;
            let a = inv.floor();
            if !a.is_finite() || a >= 9.0e18 {
                break;
            }
            frac = inv - a;
            let a = BigInt::from(a as i64);
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            if q2 > max_den {
                break;
            }
            (p0, q0) = (p1, q1);
            (p1, q1) = (p2, q2);
        }
        None
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::new(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive, so cross-multiplying preserves order.
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts "p" and "p/q" with optional leading sign on p.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num: BigInt = num_s
            .parse()
            .map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
        let den: BigInt = match den_s {
            Some(d) => d
                .parse()
                .map_err(|_| Error::parse(format!("bad rational {s:?}")))?,
            None => BigInt::from(1),
        };
        if den.is_zero() {
            return Err(Error::parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(num, den))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(3, -6), r(-1, 2));
        assert_eq!(r(0, -7), Rational::zero());
        assert_eq!(r(-4, -8).to_string(), "1/2");
    }

    #[test]
    fn field_ops() {
        assert_eq!(&r(1, 2) + &r(1, 3), r(5, 6));
        assert_eq!(&r(1, 2) - &r(1, 3), r(1, 6));
        assert_eq!(&r(2, 3) * &r(9, 4), r(3, 2));
        assert_eq!(&r(2, 3) / &r(4, 9), r(3, 2));
        assert_eq!(r(-3, 7).recip(), r(-7, 3));
    }

    #[test]
    fn ordering_crosses_denominators() {
        assert!(r(1, 3) < r(1, 2));
        assert!(r(-1, 2) < r(-1, 3));
        assert!(r(7, 1) > r(13, 2));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "5", "-5", "1/2", "-3/4", "22/7"] {
            let v: Rational = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        // Non-canonical spellings parse to canonical values.
        assert_eq!("6/4".parse::<Rational>().unwrap().to_string(), "3/2");
        assert_eq!("-6/-4".parse::<Rational>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn snap_recovers_small_rationals() {
        assert_eq!(Rational::snap_f64(0.5, 1_000_000, 1e-9), Some(r(1, 2)));
        assert_eq!(Rational::snap_f64(-2.0, 1_000_000, 1e-9), Some(r(-2, 1)));
        let x = 3.0_f64 / 7.0;
        assert_eq!(Rational::snap_f64(x, 1_000_000, 1e-9), Some(r(3, 7)));
        // The first convergent within tolerance wins, so a perturbation far
        // from 1/2 lands on the exact decimal instead.
        assert_eq!(
            Rational::snap_f64(0.5001, 1_000_000, 1e-9),
            Some(r(5001, 10000))
        );
        // sqrt(2) needs denominators beyond the bound at this tolerance.
        assert_eq!(
            Rational::snap_f64(std::f64::consts::SQRT_2, 1_000_000, 1e-13),
            None
        );
        // A value ~5e-9 off every small rational has no snap at all.
        assert_eq!(Rational::snap_f64(5e-9, 1_000_000, 1e-9), None);
    }

    #[test]
    fn snap_respects_denominator_bound() {
        let x = 1.0 / 1_048_576.0;
        assert_eq!(Rational::snap_f64(x, 1_000_000, 1e-9), None);
        assert_eq!(
            Rational::snap_f64(x, 2_000_000, 1e-12),
            Some(r(1, 1_048_576))
        );
    }
}
