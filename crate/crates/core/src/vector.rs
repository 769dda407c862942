use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Deref, Index};

use crate::error::{Error, Result};
use crate::math;

/// A point in parameter space (θ, ϑ, ν, θ* ...).
///
/// Constructors reject non-finite entries; arithmetic results are not
/// re-checked, callers use [`ParamVector::is_finite`] where divergence matters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("theta", "dimension must be at least 1"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "theta",
                alloc::format!("non-finite entry {bad}"),
            ));
        }
        Ok(ParamVector(values))
    }

    pub fn scalar(value: f64) -> Self {
        ParamVector(vec![value])
    }

    pub fn zeros(dim: usize) -> Self {
        ParamVector(vec![0.0; dim])
    }

    /// Wraps values without validation. Used for results of arithmetic.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        ParamVector(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn check_dim(&self, other: &ParamVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn dot(&self, other: &ParamVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    /// `‖self − other‖²`
    pub fn dist_sq(&self, other: &ParamVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn scale(&self, factor: f64) -> ParamVector {
        ParamVector(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn sub(&self, other: &ParamVector) -> ParamVector {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &ParamVector) -> ParamVector {
        self.zip_with(other, |a, b| a + b)
    }

    /// `self + factor · other`
    pub fn add_scaled(&self, factor: f64, other: &ParamVector) -> ParamVector {
        self.zip_with(other, |a, b| a + factor * b)
    }

    /// `(1 − w)·self + w·other`
    pub fn lerp(&self, other: &ParamVector, w: f64) -> ParamVector {
        self.zip_with(other, |a, b| a - w * (a - b))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ParamVector {
        ParamVector(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &ParamVector, f: impl Fn(f64, f64) -> f64) -> ParamVector {
        debug_assert_eq!(self.dim(), other.dim());
        ParamVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl Deref for ParamVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for ParamVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for ParamVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        ParamVector::new(values)
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(ParamVector::new(vec![]).is_err());
        assert!(ParamVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(ParamVector::new(vec![f64::INFINITY]).is_err());
        assert!(ParamVector::new(vec![0.0, -2.0]).is_ok());
    }

    #[test]
    fn arithmetic() {
        let a = ParamVector::new(vec![1.0, 2.0]).unwrap();
        let b = ParamVector::new(vec![3.0, -1.0]).unwrap();
        assert_eq!(a.dot(&b), 1.0);
        assert_eq!(a.dist_sq(&b), 13.0);
        assert_eq!(a.add_scaled(2.0, &b).as_slice(), &[7.0, 0.0]);
        assert_eq!(a.lerp(&b, 0.5).as_slice(), &[2.0, 0.5]);
        assert!(a.check_dim(&ParamVector::scalar(1.0)).is_err());
    }
}
