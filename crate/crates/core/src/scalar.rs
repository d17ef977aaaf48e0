//! Arbitrary-precision rational scalars and the ring/field abstractions the
//! rest of the crate is generic over.

use alloc::string::String;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number. Always stored reduced with a positive
/// denominator; arithmetic never rounds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar(BigRational::from_integer(v))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    pub fn pow(&self, e: i64) -> Option<Scalar> {
        let mag = i32::try_from(e.unsigned_abs().min(1 << 30)).ok()?;
        if e < 0 {
            let inv = self.inv()?;
            Some(Scalar(inv.0.pow(mag)))
        } else {
            Some(Scalar(self.0.pow(mag)))
        }
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    /// Exact integer exponent such that `self == base^e`, when one exists.
    /// Used to read homogeneity weights off evaluated ratios.
    pub fn int_log(&self, base: &Scalar) -> Option<i64> {
        let one = Scalar::one();
        if self.is_zero() || base.is_zero() || base.abs() == one {
            return None;
        }
        let b = base.abs();
        let (b, flipped) = if b < one { (b.inv().unwrap(), true) } else { (b, false) };
        let mut e: i64 = 0;
        let mut cur = self.abs();
        while cur > one {
            cur = cur / b.clone();
            e += 1;
            if e > 1_000_000 {
                return None;
            }
        }
        while cur < one {
            cur = cur * b.clone();
            e -= 1;
            if e < -1_000_000 {
                return None;
            }
        }
        if cur != one {
            return None;
        }
        let e = if flipped { -e } else { e };
        if &base.pow(e)? == self {
            Some(e)
        } else {
            None
        }
    }

    /// Canonical `num/den` rendering, used for hashing step traces.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                Scalar((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        Scalar(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        self.0 *= rhs.0;
    }
}

/// Sign as -1, 0 or 1.
pub fn sign_of(s: &Scalar) -> i32 {
    match s.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `(-1)^e` as a scalar.
pub fn neg_one_pow(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Commutative ring with an action of the rational scalars. Implemented by
/// `Scalar` itself, dual numbers, and expression nodes so that matrix
/// algebra and the R-matrix operators can be written once.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn from_scalar(c: &Scalar) -> Self;
}

/// Ring with (partial) division; `inv` returns `None` on non-invertible
/// elements, which callers treat as a resampling condition.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }
    /// True when the element may be used as an elimination pivot.
    fn is_invertible(&self) -> bool;
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, c: &Scalar) -> Self {
        self * c
    }
    fn from_scalar(c: &Scalar) -> Self {
        c.clone()
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn is_invertible(&self) -> bool {
        !self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form() {
        let s = Scalar::ratio(6, -4);
        assert_eq!(s.to_string(), "-3/2");
        assert_eq!(s.denom(), &BigInt::from(2));
    }

    #[test]
    fn int_log_reads_exponents() {
        let t = Scalar::from_int(2);
        let v = t.pow(7).unwrap();
        assert_eq!(v.int_log(&t), Some(7));
        let v = t.pow(-3).unwrap();
        assert_eq!(v.int_log(&t), Some(-3));
    }
}
