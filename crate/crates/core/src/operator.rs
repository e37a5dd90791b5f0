//! Hermitian operators on `C^d` and their eigendecomposition.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const EIG_MAX_ITER: usize = 10_000;

/// A validated, exactly Hermitian `d x d` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

/// Ascending eigenvalues with the matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl HermitianOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    /// Validates shape and Hermiticity, then stores the Hermitian part so that
    /// downstream arithmetic sees an exactly self-adjoint matrix.
    pub fn with_tolerances(matrix: DMatrix<Complex64>, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 || rows > tol.max_dim {
            return Err(Error::DimensionOutOfRange { dim: rows, max: tol.max_dim });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let adjoint = matrix.adjoint();
        let deviation = (&matrix - &adjoint)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > tol.herm {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = (&matrix + &adjoint).scale(0.5);
        Ok(Self { matrix })
    }

    /// Trusted constructor for matrices built as Hermitian by construction.
    pub(crate) fn from_hermitian_unchecked(matrix: DMatrix<Complex64>) -> Self {
        let adjoint = matrix.adjoint();
        Self { matrix: (&matrix + &adjoint).scale(0.5) }
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(matrix)
    }

    pub fn scaled_identity(dim: usize, value: f64) -> Result<Self> {
        Self::diagonal(&vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// `1 - H`.
    pub fn one_minus(&self) -> Self {
        let n = self.dim();
        Self { matrix: DMatrix::identity(n, n) - &self.matrix }
    }

    /// `U H U†` for a unitary `U` of matching dimension.
    pub fn conjugate_by(&self, unitary: &DMatrix<Complex64>) -> Result<Self> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: unitary.nrows() });
        }
        Ok(Self::from_hermitian_unchecked(unitary * &self.matrix * unitary.adjoint()))
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(Self::from_hermitian_unchecked(
            self.matrix.scale(1.0 - t) + other.matrix.scale(t),
        ))
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        eig_decompose(self, &Tolerances::default())
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson::from(self)
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian operator, sorted ascending and checked
/// for orthonormality and reconstruction.
pub fn eig_decompose(h: &HermitianOperator, tol: &Tolerances) -> Result<EigenDecomposition> {
    let n = h.dim();
    let eigen = SymmetricEigen::try_new(h.matrix.clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or(Error::EigenNoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigen.eigenvalues[i].total_cmp(&eigen.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eigen.eigenvectors[(r, order[c])]);

    let gram = vectors.adjoint() * &vectors;
    let ortho = max_abs_diff(&gram, &DMatrix::identity(n, n));
    if ortho > tol.ortho {
        return Err(Error::Inconsistent(format!("eigenvectors not orthonormal ({ortho:e})")));
    }
    let recon = reconstruct(&values, &vectors);
    let err = max_abs_diff(&recon, &h.matrix);
    if err > tol.recon {
        return Err(Error::Inconsistent(format!("eigen reconstruction error {err:e}")));
    }
    Ok(EigenDecomposition { values, vectors })
}

/// `V diag(λ) V†`.
pub fn reconstruct(values: &[f64], vectors: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        for r in 0..n {
            scaled[(r, c)] *= lambda;
        }
    }
    scaled * vectors.adjoint()
}

/// On-disk operator format: `{"dim": d, "entries": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&HermitianOperator> for OperatorJson {
    fn from(h: &HermitianOperator) -> Self {
        let n = h.dim();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| [h.matrix[(i, j)].re, h.matrix[(i, j)].im]).collect())
            .collect();
        Self { dim: n, entries }
    }
}

impl OperatorJson {
    pub fn to_operator(&self, tol: &Tolerances) -> Result<HermitianOperator> {
        if self.entries.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "expected {} rows, found {}",
                self.dim,
                self.entries.len()
            )));
        }
        if let Some(row) = self.entries.iter().find(|row| row.len() != self.dim) {
            return Err(Error::InvalidInput(format!(
                "expected {} columns, found {}",
                self.dim,
                row.len()
            )));
        }
        let n = self.dim;
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.entries[i][j];
            Complex64::new(re, im)
        });
        HermitianOperator::with_tolerances(matrix, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_is_already_diagonalised() {
        let h = HermitianOperator::diagonal(&[0.8, 0.2]).unwrap();
        let e = h.eig().unwrap();
        assert_eq!(e.values, vec![0.2, 0.8]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_identity_plus_sigma_x() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        let e = HermitianOperator::new(m).unwrap().eig().unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // eigenvector for 1 is (1, 1)/sqrt2 up to phase
        let v = e.vectors.column(1);
        assert!((v[0].norm() - s).abs() < 1e-12 && (v[1].norm() - s).abs() < 1e-12);
        assert!(((v[0] * v[1].conj()).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scalar_operator_dim3() {
        let e = HermitianOperator::scaled_identity(3, 0.3).unwrap().eig().unwrap();
        assert_eq!(e.values, vec![0.3, 0.3, 0.3]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_shape_and_size() {
        let m = DMatrix::from_element(2, 3, c(0.0, 0.0));
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotSquare { .. })));
        let big = DMatrix::from_element(17, 17, c(0.0, 0.0));
        assert!(matches!(
            HermitianOperator::new(big),
            Err(Error::DimensionOutOfRange { dim: 17, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.25, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(0.75, 0.0)]);
        let h = HermitianOperator::new(m).unwrap();
        let text = serde_json::to_string(&h.to_json()).unwrap();
        let back: OperatorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_operator(&Tolerances::default()).unwrap(), h);
    }

    #[test]
    fn json_rejects_ragged_rows() {
        let j = OperatorJson { dim: 2, entries: vec![vec![[1.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]] };
        assert!(matches!(j.to_operator(&Tolerances::default()), Err(Error::InvalidInput(_))));
    }
}
