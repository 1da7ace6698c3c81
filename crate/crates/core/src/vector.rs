use std::ops::{Deref, Index};

use num_complex::Complex64;

/// Length-N complex array used for channels, steering vectors and codewords.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(values: Vec<Complex64>) -> Self {
        ComplexVector(values)
    }

    pub fn zeros(len: usize) -> Self {
        ComplexVector(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// Hermitian inner product `self^H other`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Plain (non-conjugated) product `self^T other`.
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn conj(&self) -> ComplexVector {
        ComplexVector(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, factor: Complex64) -> ComplexVector {
        ComplexVector(self.0.iter().map(|z| z * factor).collect())
    }

    /// `self += factor * other`, elementwise.
    pub fn add_scaled(&mut self, factor: Complex64, other: &ComplexVector) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += factor * b;
        }
    }
}

impl Deref for ComplexVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        ComplexVector(v)
    }
}

impl FromIterator<Complex64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        ComplexVector(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_conjugates_left_operand() {
        let a = ComplexVector::new(vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
        let b = ComplexVector::new(vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)]);
        assert_eq!(a.inner(&b), Complex64::new(3.0, 0.0));
        assert_eq!(a.dot(&b), Complex64::new(1.0, 0.0));
        assert_eq!(a.norm_sqr(), 2.0);
    }

    #[test]
    fn add_scaled_accumulates() {
        let mut acc = ComplexVector::zeros(2);
        let v = ComplexVector::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        acc.add_scaled(Complex64::new(2.0, 0.0), &v);
        acc.add_scaled(Complex64::new(0.0, 1.0), &v);
        assert_eq!(acc[0], Complex64::new(2.0, 1.0));
        assert_eq!(acc[1], Complex64::new(-1.0, 2.0));
    }
}
