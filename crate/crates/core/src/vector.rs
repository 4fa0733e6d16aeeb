use crate::error::{Error, Result};

/// Dense real vector. Invariant: at least one entry, every entry finite.
///
/// Matrices are carried as row-major flattenings of this type; the owner of
/// the value keeps the `(rows, cols)` shape alongside it.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("vector entry {i}"),
            });
        }
        Ok(Self { data })
    }

    pub fn from_slice(data: &[f64]) -> Result<Self> {
        Self::new(data.to_vec())
    }

    /// All-zero vector of length `n` (`n` must be positive).
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "zero-length vectors are not representable");
        Self { data: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot on mismatched lengths");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `self + t * other`, validated like any other construction.
    pub fn add_scaled(&self, other: &Vector, t: f64) -> Result<Vector> {
        assert_eq!(self.len(), other.len(), "add_scaled on mismatched lengths");
        Vector::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    /// `self - other`, validated like any other construction.
    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        assert_eq!(self.len(), other.len(), "sub on mismatched lengths");
        Vector::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}
