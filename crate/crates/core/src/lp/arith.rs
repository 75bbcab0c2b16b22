use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{Signed, Zero};

use crate::{Error, Rational, Result};

/// Scalar field the simplex runs over. Sign tests go through the field so
/// the float instance can apply its tolerance.
pub(super) trait Arith {
    type Num: Clone + Debug;

    fn zero(&self) -> Self::Num;
    fn convert(&self, x: &Rational) -> Self::Num;
    fn is_zero(&self, x: &Self::Num) -> bool;
    fn is_positive(&self, x: &Self::Num) -> bool;
    fn is_negative(&self, x: &Self::Num) -> bool;
    fn cmp(&self, a: &Self::Num, b: &Self::Num) -> Ordering;
    fn neg(&self, x: &Self::Num) -> Self::Num;
    fn mul(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn div(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn add_assign(&self, a: &mut Self::Num, b: &Self::Num);
    /// `a -= f * b`
    fn sub_mul_assign(&self, a: &mut Self::Num, f: &Self::Num, b: &Self::Num);
    fn div_assign(&self, a: &mut Self::Num, d: &Self::Num);
    /// Called with the chosen pivot and the largest magnitude in its column.
    fn check_pivot(&self, pivot: &Self::Num, column_max: &Self::Num) -> Result<()>;
    fn abs_max(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn iteration_limit(&self) -> Option<usize>;
}

pub(super) struct Exact;

impl Arith for Exact {
    type Num = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn convert(&self, x: &Rational) -> Rational {
        x.clone()
    }
    fn is_zero(&self, x: &Rational) -> bool {
        x.is_zero()
    }
    fn is_positive(&self, x: &Rational) -> bool {
        x.is_positive()
    }
    fn is_negative(&self, x: &Rational) -> bool {
        x.is_negative()
    }
    fn cmp(&self, a: &Rational, b: &Rational) -> Ordering {
        a.cmp(b)
    }
    fn neg(&self, x: &Rational) -> Rational {
        -x
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn div(&self, a: &Rational, b: &Rational) -> Rational {
        a / b
    }
    fn add_assign(&self, a: &mut Rational, b: &Rational) {
        *a += b;
    }
    fn sub_mul_assign(&self, a: &mut Rational, f: &Rational, b: &Rational) {
        *a -= f * b;
    }
    fn div_assign(&self, a: &mut Rational, d: &Rational) {
        *a /= d;
    }
    fn check_pivot(&self, _: &Rational, _: &Rational) -> Result<()> {
        Ok(())
    }
    fn abs_max(&self, a: &Rational, b: &Rational) -> Rational {
        a.abs().max(b.abs())
    }
    fn iteration_limit(&self) -> Option<usize> {
        None
    }
}

pub(super) struct Float {
    pub tol: f64,
}

impl Arith for Float {
    type Num = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn convert(&self, x: &Rational) -> f64 {
        crate::rational::to_f64(x)
    }
    fn is_zero(&self, x: &f64) -> bool {
        x.abs() <= self.tol
    }
    fn is_positive(&self, x: &f64) -> bool {
        *x > self.tol
    }
    fn is_negative(&self, x: &f64) -> bool {
        *x < -self.tol
    }
    fn cmp(&self, a: &f64, b: &f64) -> Ordering {
        if (a - b).abs() <= self.tol * (1.0 + a.abs().max(b.abs())) {
            Ordering::Equal
        } else {
            a.total_cmp(b)
        }
    }
    fn neg(&self, x: &f64) -> f64 {
        -x
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn div(&self, a: &f64, b: &f64) -> f64 {
        a / b
    }
    fn add_assign(&self, a: &mut f64, b: &f64) {
        *a += b;
    }
    fn sub_mul_assign(&self, a: &mut f64, f: &f64, b: &f64) {
        *a -= f * b;
        if a.abs() <= self.tol * 1e-3 {
            *a = 0.0;
        }
    }
    fn div_assign(&self, a: &mut f64, d: &f64) {
        *a /= d;
    }
    fn check_pivot(&self, pivot: &f64, column_max: &f64) -> Result<()> {
        if pivot.abs() < self.tol * column_max.max(1.0) {
            return Err(Error::NumericallyUnstable(format!(
                "pivot {pivot:e} is tiny relative to its column (max {column_max:e})"
            )));
        }
        Ok(())
    }
    fn abs_max(&self, a: &f64, b: &f64) -> f64 {
        a.abs().max(b.abs())
    }
    fn iteration_limit(&self) -> Option<usize> {
        Some(100_000)
    }
}
