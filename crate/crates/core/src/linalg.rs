//! Thin wrappers over the LAPACK drivers. Matrices are handed over in
//! column-major order so that no driver has to reinterpret row-major data.

use lax::layout::MatrixLayout;
use lax::{Lapack, NormType, Pivot, Transpose};
use ndarray::Array2;
use ndarray_linalg::error::LinalgError;

use crate::{Error, Result, C64};

fn col_major<T: Clone>(a: &Array2<T>) -> (MatrixLayout, Vec<T>) {
    assert_eq!(a.nrows(), a.ncols(), "square matrix expected");
    let n = a.nrows() as i32;
    let data = a.t().iter().cloned().collect();
    (MatrixLayout::F { col: n, lda: n }, data)
}

fn backend(e: lax::error::Error) -> Error {
    Error::Backend(LinalgError::from(e))
}

/// Eigenvalues of a general real matrix (`dgeev`). Real eigenvalues come back
/// with an exactly zero imaginary part.
pub(crate) fn eigvals_real(a: &Array2<f64>) -> Result<Vec<C64>> {
    let (layout, mut data) = col_major(a);
    let (eigs, _) = f64::eig(false, layout, &mut data).map_err(backend)?;
    Ok(eigs)
}

/// Eigenvalues of a general complex matrix (`zgeev`).
pub(crate) fn eigvals_complex(a: &Array2<C64>) -> Result<Vec<C64>> {
    let (layout, mut data) = col_major(a);
    let (eigs, _) = C64::eig(false, layout, &mut data).map_err(backend)?;
    Ok(eigs)
}

/// Generalized eigenvalues `(α, β)` of the pencil `(a, b)`.
pub(crate) fn pencil_real(a: &Array2<f64>, b: &Array2<f64>) -> Result<(Vec<C64>, Vec<C64>)> {
    let (layout, mut da) = col_major(a);
    let (_, mut db) = col_major(b);
    let out = lax::eig_generalized::EigGeneralizedWork::<f64>::new(false, layout)
        .and_then(|w| w.eval(&mut da, &mut db))
        .map_err(backend)?;
    Ok((out.alpha, out.beta))
}

pub(crate) fn pencil_complex(a: &Array2<C64>, b: &Array2<C64>) -> Result<(Vec<C64>, Vec<C64>)> {
    let (layout, mut da) = col_major(a);
    let (_, mut db) = col_major(b);
    let out = lax::eig_generalized::EigGeneralizedWork::<C64>::new(false, layout)
        .and_then(|w| w.eval(&mut da, &mut db))
        .map_err(backend)?;
    Ok((out.alpha, out.beta))
}

/// LU factorization with partial pivoting, carrying the `1`-norm reciprocal
/// condition estimate of the original matrix.
pub(crate) struct Lu<T: Lapack> {
    layout: MatrixLayout,
    factors: Vec<T>,
    pivot: Pivot,
    pub rcond: T::Real,
}

impl<T: Lapack> Lu<T> {
    /// Returns `Ok(None)` when elimination hits an exactly zero pivot.
    pub fn factorize(a: &Array2<T>) -> Result<Option<Self>> {
        let (layout, mut factors) = col_major(a);
        let anorm = T::opnorm(NormType::One, layout, &factors);
        let pivot = match T::lu(layout, &mut factors) {
            Ok(p) => p,
            Err(lax::error::Error::LapackComputationalFailure { .. }) => return Ok(None),
            Err(e) => return Err(backend(e)),
        };
        let rcond = T::rcond(layout, &factors, anorm).map_err(backend)?;
        Ok(Some(Self {
            layout,
            factors,
            pivot,
            rcond,
        }))
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let mut x = b.to_vec();
        T::solve(self.layout, Transpose::No, &self.factors, &self.pivot, &mut x).map_err(backend)?;
        Ok(x)
    }
}
