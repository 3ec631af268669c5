//! JSON interchange format for matrices:
//! `{"dim": n, "re": [[...]], "im": [[...]]}` with row-major real and
//! imaginary parts, and an optional `"profile": [...]` for states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, DimensionProfile, HermitianOperator};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<usize>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim: m.rows(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            profile: None,
        }
    }

    pub fn from_operator(m: &HermitianOperator, profile: Option<&DimensionProfile>) -> Self {
        let mut out = Self::from_matrix(m.matrix());
        out.profile = profile.map(|p| p.factors().to_vec());
        out
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        let shape_ok = |v: &Vec<Vec<f64>>| v.len() == n && v.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::InvalidArgument(format!(
                "matrix object does not have {n}x{n} re/im parts"
            )));
        }
        let data = (0..n * n)
            .map(|k| Complex64::new(self.re[k / n][k % n], self.im[k / n][k % n]))
            .collect();
        ComplexMatrix::new(n, n, data)
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?)
    }

    pub fn profile(&self) -> Result<DimensionProfile> {
        let profile = match &self.profile {
            Some(f) => DimensionProfile::new(f.clone())?,
            None => DimensionProfile::single(self.dim),
        };
        profile.check(self.dim)?;
        Ok(profile)
    }
}
