//! Exact Gaussian-rational scalars.
//!
//! Every coefficient in the crate is a pair of arbitrary-precision rationals
//! `re + im·i`. There is no floating point anywhere: residuals are either
//! exactly zero or exactly not.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A Gaussian rational `re + im·i` with exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|² = re² + im²`, an exact nonnegative rational.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Renders a nonnegative-or-signed rational as `num/den` with an explicit
/// denominator, as used inside complex scalar strings.
fn explicit_fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Scalar {
    /// Real scalars render as plain fractions (`0`, `5`, `3/2`); proper
    /// complex scalars render with explicit denominators (`1/1+2/1i`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(
                f,
                "{}{}{}i",
                explicit_fraction(&self.re),
                sign,
                explicit_fraction(&self.im.abs())
            )
        }
    }
}

/// Formats an exact nonnegative rational residual the same way scalars are
/// formatted (`0`, `2`, `3/2`).
pub fn residual_string(r: &BigRational) -> String {
    format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_wire_format() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_ratio(3, 2).to_string(), "3/2");
        assert_eq!(Scalar::from_integer(5).to_string(), "5");
        let z = Scalar::from_integer(1) + Scalar::i() * Scalar::from_integer(2);
        assert_eq!(z.to_string(), "1/1+2/1i");
        let w = Scalar::from_integer(1) - Scalar::i();
        assert_eq!(w.to_string(), "1/1-1/1i");
    }

    #[test]
    fn conjugation_and_modulus() {
        let z = Scalar::from_ratio(1, 2) + Scalar::i() * Scalar::from_ratio(1, 3);
        let zz = z.clone() * z.conj();
        assert!(zz.im.is_zero());
        assert_eq!(zz.re, z.abs_sq());
    }
}
