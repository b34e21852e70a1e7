//! Complex quadrature transfer matrices.
//!
//! A `TransferMatrix` acts on the stacked quadrature vector
//! (X_1, Y_1, ..., X_M, Y_M) at one sideband frequency. Lossless elements
//! satisfy the complex-extended symplectic condition `T J T^H = J`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Symplectic form J: block-diagonal [[0, 1], [-1, 0]] per mode.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        j[(2 * m, 2 * m + 1)] = 1.0;
        j[(2 * m + 1, 2 * m)] = -1.0;
    }
    j
}

/// Linear action of a network element on the quadrature vector at a fixed
/// sideband frequency.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    mat: DMatrix<Complex64>,
}

impl TransferMatrix {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || !mat.nrows().is_multiple_of(2) || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "transfer matrix must be square 2M x 2M, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(TransferMatrix { mat })
    }

    pub fn identity(n_modes: usize) -> Self {
        TransferMatrix {
            mat: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Identity with the given 2x2 blocks overwritten; block (a, b) couples
    /// mode b into mode a.
    pub fn from_blocks(n_modes: usize, blocks: &[(usize, usize, Matrix2<Complex64>)]) -> Self {
        let mut mat = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for &(a, b, sub) in blocks {
            mat.view_mut((2 * a, 2 * b), (2, 2)).copy_from(&sub);
        }
        TransferMatrix { mat }
    }

    pub fn n_modes(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Transfer equivalent to applying `self` first and `next` second.
    pub fn then(&self, next: &TransferMatrix) -> Result<TransferMatrix> {
        if self.n_modes() != next.n_modes() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose transfers over {} and {} modes",
                self.n_modes(),
                next.n_modes()
            )));
        }
        Ok(TransferMatrix {
            mat: &next.mat * &self.mat,
        })
    }

    /// Max-norm deviation from the lossless symplectic condition
    /// `T J T^H = J`. Zero (to tolerance) for couplers, phases and cavity
    /// reflections.
    pub fn symplectic_deviation(&self) -> f64 {
        let j = symplectic_form(self.n_modes()).map(|x| Complex64::new(x, 0.0));
        let lhs = &self.mat * &j * self.mat.adjoint();
        (lhs - j).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
