//! A small scalar abstraction so the moment-matrix algorithms can run in
//! hardware double, double-double, or exact rational arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::dd::Dd;

pub trait Field:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_exact_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

impl Field for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn one() -> Self {
        Dd::ONE
    }
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn to_f64(&self) -> f64 {
        Dd::to_f64(*self)
    }
    fn is_exact_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
    fn is_positive(&self) -> bool {
        self.hi > 0.0
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite value")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Complex numbers over any [`Field`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Field> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }
    pub fn real(re: T) -> Self {
        Cx { re, im: T::zero() }
    }
    pub fn zero() -> Self {
        Cx::real(T::zero())
    }
    pub fn one() -> Self {
        Cx::real(T::one())
    }
    pub fn conj(&self) -> Self {
        Cx {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
    pub fn scale(&self, s: &T) -> Self {
        Cx {
            re: self.re.clone() * s.clone(),
            im: self.im.clone() * s.clone(),
        }
    }
    pub fn from_c64(z: Complex64) -> Self {
        Cx {
            re: T::from_f64(z.re),
            im: T::from_f64(z.im),
        }
    }
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<T: Field> Add for Cx<T> {
    type Output = Cx<T>;
    fn add(self, b: Cx<T>) -> Cx<T> {
        Cx {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl<T: Field> Sub for Cx<T> {
    type Output = Cx<T>;
    fn sub(self, b: Cx<T>) -> Cx<T> {
        Cx {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl<T: Field> Mul for Cx<T> {
    type Output = Cx<T>;
    fn mul(self, b: Cx<T>) -> Cx<T> {
        Cx {
            re: self.re.clone() * b.re.clone() - self.im.clone() * b.im.clone(),
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl<T: Field> Div for Cx<T> {
    type Output = Cx<T>;
    fn div(self, b: Cx<T>) -> Cx<T> {
        let d = b.norm_sqr();
        let num = self * b.conj();
        Cx {
            re: num.re / d.clone(),
            im: num.im / d,
        }
    }
}

impl<T: Field> Neg for Cx<T> {
    type Output = Cx<T>;
    fn neg(self) -> Cx<T> {
        Cx {
            re: -self.re,
            im: -self.im,
        }
    }
}
