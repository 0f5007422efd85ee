//! The field ℚ(i): Gaussian rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use super::rational::Rational;
use crate::error::Error;

/// Exact element of ℚ(i), stored as real and imaginary rational parts.
/// Hosts singular points, frame vectors, and every matrix entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRational {
            re: Rational::from_int(re),
            im: Rational::from_int(im),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|² = re² + im², an exact rational.
    pub fn norm_sq(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Multiplicative inverse. Panics on zero; callers guard.
    pub fn recip(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero");
        let inv = n.recip();
        GaussRational {
            re: &self.re * &inv,
            im: &(-&self.im) * &inv,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Snap a complex double to ℚ(i), componentwise continued fractions.
    pub fn snap_complex(z: Complex64, max_den: u64, tol: f64) -> Option<Self> {
        let re = Rational::snap_f64(z.re, max_den, tol)?;
        let im = Rational::snap_f64(z.im, max_den, tol)?;
        Some(GaussRational { re, im })
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &GaussRational {
    type Output = GaussRational;
    // Field division is multiplication by the reciprocal.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GaussRational) -> GaussRational {
        self * &rhs.recip()
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        -&self
    }
}

impl fmt::Display for GaussRational {
    /// Human form "a+bi" with the obvious degenerate spellings
    /// ("0", "i", "-3/2i", "1-i"). Documents use ["re","im"] arrays instead.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_mag = self.im.abs();
        let sign = if self.im.is_negative() { "-" } else { "+" };
        let im_part = if im_mag.is_one() {
            "i".to_string()
        } else {
            format!("{im_mag}i")
        };
        if self.re.is_zero() {
            let bare = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{bare}{im_part}")
        } else {
            write!(f, "{}{sign}{im_part}", self.re)
        }
    }
}

impl FromStr for GaussRational {
    type Err = Error;

    /// Parses literals like "0", "7", "-3/4", "i", "-i", "2i", "1+2i",
    /// "1/2-3/4i". Whitespace around terms is tolerated.
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("empty scalar"));
        }
        // Split additively at the last +/- that is not a leading sign and
        // not inside a fraction (digits on both sides keep it atomic only
        // for exponents, which rationals do not have).
        let bytes = compact.as_bytes();
        let mut split_at = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && bytes[idx - 1] != b'/' {
                split_at = Some(idx);
                break;
            }
        }
        let (first, second) = match split_at {
            Some(idx) => (&compact[..idx], Some(&compact[idx..])),
            None => (compact.as_str(), None),
        };
        let parse_term = |t: &str| -> Result<(Rational, bool), Error> {
            if let Some(stripped) = t.strip_suffix(['i', 'I']) {
                let mag = match stripped {
                    "" | "+" => Rational::one(),
                    "-" => -Rational::one(),
                    other => other.parse()?,
                };
                Ok((mag, true))
            } else {
                Ok((t.parse()?, false))
            }
        };
        let (a, a_imag) = parse_term(first)?;
        let (mut re, mut im) = if a_imag {
            (Rational::zero(), a)
        } else {
            (a, Rational::zero())
        };
        if let Some(second) = second {
            let (b, b_imag) = parse_term(second)?;
            if b_imag == a_imag {
                return Err(Error::parse(format!("bad complex scalar {s:?}")));
            }
            if b_imag {
                im = b;
            } else {
                re = b;
            }
        }
        Ok(GaussRational { re, im })
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::from_int(n)
    }
}
