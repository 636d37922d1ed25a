//! Spectra of `𝔏ₙ` and `ℳₙ` and the scalar diagnostics derived from them.
//!
//! The reduced path solves the standard `N × N` problem. The generalized path
//! solves the `2N × 2N` pencil
//!
//! ```text
//! ⎡ I      −Aₙ ⎤ ⎡u⎤     ⎡0 0⎤ ⎡u⎤
//! ⎣ Aₙ+Bₙ  Cₙ  ⎦ ⎣h⎦ = μ ⎣0 I⎦ ⎣h⎦
//! ```
//!
//! whose first block row forces `u = Aₙh`, so its finite spectrum is that of
//! `𝔏ₙ`. Real matrices (every `n = 0` operator) go to the real drivers, which
//! return real eigenvalues with exactly zero imaginary part.

use std::cmp::Ordering;

use ndarray::{s, Array2};
use serde::{Deserialize, Serialize};

use crate::grid::{Grid, Params};
use crate::linalg::{self, Lu};
use crate::operators::{assemble_l, ModeBlocks, OperatorKind, OperatorMatrix};
use crate::{Error, Result, C64};

/// Pencil pairs with `|β| ≤ INFINITE_BETA_TOL · max|β|` count as infinite.
pub const INFINITE_BETA_TOL: f64 = 1e-10;

/// Which formulation produced a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralForm {
    Reduced,
    Generalized,
}

impl std::fmt::Display for SpectralForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpectralForm::Reduced => "reduced",
            SpectralForm::Generalized => "generalized",
        })
    }
}

impl std::str::FromStr for SpectralForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(SpectralForm::Reduced),
            "generalized" => Ok(SpectralForm::Generalized),
            other => Err(Error::InvalidParameter(format!("unknown form `{other}`"))),
        }
    }
}

/// The eigenvalue of smallest modulus and its eigenvector, normalized to unit
/// Euclidean norm with the first significant component real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct NearestZero {
    pub value: C64,
    pub vector: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<C64>,
    pub min_real: f64,
    pub second_min_real: f64,
    pub max_abs_imag: f64,
    pub nearest_zero: NearestZero,
    pub form: SpectralForm,
    pub kind: OperatorKind,
    pub params: Params,
}

impl SpectralReport {
    fn build(
        mut eigenvalues: Vec<C64>,
        op: &OperatorMatrix,
        form: SpectralForm,
    ) -> Result<Self> {
        if eigenvalues.len() < 2 {
            return Err(solver_error(&op.params, "fewer than two eigenvalues"));
        }
        if eigenvalues.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(solver_error(&op.params, "non-finite eigenvalue"));
        }
        eigenvalues.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let min_real = eigenvalues[0].re;
        let second = second_min_real(&eigenvalues);
        let max_abs_imag = eigenvalues.iter().fold(0.0, |m, z| f64::max(m, z.im.abs()));
        let value = nearest_zero_value(&eigenvalues);
        let vector = inverse_iteration(op, value)?;
        Ok(Self {
            eigenvalues,
            min_real,
            second_min_real: second,
            max_abs_imag,
            nearest_zero: NearestZero { value, vector },
            form,
            kind: op.kind,
            params: op.params,
        })
    }
}

fn solver_error(params: &Params, reason: impl Into<String>) -> Error {
    Error::Solver {
        params: Box::new(*params),
        reason: reason.into(),
    }
}

fn backend_to_solver(params: &Params) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Backend(b) => solver_error(params, b.to_string()),
        other => other,
    }
}

/// All eigenvalues of the assembled matrix (standard problem).
pub fn eigenvalues(op: &OperatorMatrix) -> Result<Vec<C64>> {
    if op.is_real() {
        linalg::eigvals_real(&op.real_part())
    } else {
        linalg::eigvals_complex(&op.entries)
    }
    .map_err(backend_to_solver(&op.params))
}

/// Spectrum of the reduced `N × N` standard problem.
pub fn spectrum_reduced(op: &OperatorMatrix) -> Result<SpectralReport> {
    let ev = eigenvalues(op)?;
    SpectralReport::build(ev, op, SpectralForm::Reduced)
}

/// Finite eigenvalues of the block pencil; exactly `N` are required.
pub fn pencil_eigenvalues(blocks: &ModeBlocks) -> Result<Vec<C64>> {
    let params = blocks.params();
    let n = blocks.a.dim();
    let one = C64::new(1.0, 0.0);
    let mut lhs = Array2::<C64>::zeros((2 * n, 2 * n));
    let mut mass = Array2::<C64>::zeros((2 * n, 2 * n));
    for i in 0..n {
        lhs[[i, i]] = one;
        mass[[n + i, n + i]] = one;
    }
    lhs.slice_mut(s![..n, n..]).assign(&blocks.a.entries.mapv(|z| -z));
    lhs.slice_mut(s![n.., ..n]).assign(&(&blocks.a.entries + &blocks.b.entries));
    lhs.slice_mut(s![n.., n..]).assign(&blocks.c.entries);

    let real = lhs.iter().all(|z| z.im == 0.0);
    let (alpha, beta) = if real {
        linalg::pencil_real(&lhs.mapv(|z| z.re), &mass.mapv(|z| z.re))
    } else {
        linalg::pencil_complex(&lhs, &mass)
    }
    .map_err(backend_to_solver(params))?;

    let beta_max = beta.iter().fold(0.0, |m, b| f64::max(m, b.norm()));
    let cut = INFINITE_BETA_TOL * beta_max;
    let finite: Vec<C64> = alpha
        .iter()
        .zip(&beta)
        .filter(|(_, b)| b.norm() > cut)
        .map(|(a, b)| a / b)
        .collect();
    if finite.len() != n {
        return Err(Error::InfiniteEigenvalueCount {
            params: Box::new(*params),
            finite: finite.len(),
            expected: n,
        });
    }
    Ok(finite)
}

/// Spectrum of the `2N × 2N` pencil. The eigenvector of the nearest-zero
/// eigenvalue is computed on the reduced matrix `(Aₙ + Bₙ)Aₙ + Cₙ`.
pub fn spectrum_generalized(blocks: &ModeBlocks) -> Result<SpectralReport> {
    let ev = pencil_eigenvalues(blocks)?;
    let a = &blocks.a.entries;
    let l = (a + &blocks.b.entries).dot(a) + &blocks.c.entries;
    let op = OperatorMatrix {
        kind: OperatorKind::L,
        params: *blocks.params(),
        entries: l,
    };
    SpectralReport::build(ev, &op, SpectralForm::Generalized)
}

/// Second smallest real part (no clustering of near-equal values).
pub fn second_min_real(eigenvalues: &[C64]) -> f64 {
    let mut re: Vec<f64> = eigenvalues.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    re[1]
}

/// Eigenvalue of least modulus; ties go to the smaller `|Im|`.
pub fn nearest_zero_value(eigenvalues: &[C64]) -> C64 {
    *eigenvalues
        .iter()
        .min_by(|x, y| {
            x.norm()
                .total_cmp(&y.norm())
                .then(x.im.abs().total_cmp(&y.im.abs()))
        })
        .expect("non-empty spectrum")
}

/// True iff every eigenvalue has `|Im| ≤ tol`.
pub fn realness_audit(report: &SpectralReport, tol: f64) -> bool {
    report.max_abs_imag <= tol
}

/// Inverse iteration for the eigenvector of `op` at the computed eigenvalue
/// `lambda`. A shift of `1e-12` times the largest entry keeps the
/// factorization regular without slowing convergence noticeably.
fn inverse_iteration(op: &OperatorMatrix, lambda: C64) -> Result<Vec<C64>> {
    let n = op.dim();
    let scale = op.entries.iter().fold(0.0, |m, z| f64::max(m, z.norm()));
    let shift = lambda + C64::new(1e-12 * scale.max(1.0), 0.0);
    let start = |i: usize| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7).sin();
    let mut v: Vec<C64> = if op.is_real() && lambda.im == 0.0 {
        let mut m = op.real_part();
        for i in 0..n {
            m[[i, i]] -= shift.re;
        }
        let lu = Lu::factorize(&m)
            .map_err(backend_to_solver(&op.params))?
            .ok_or_else(|| solver_error(&op.params, "inverse iteration hit a zero pivot"))?;
        let mut x: Vec<f64> = (0..n).map(start).collect();
        for _ in 0..3 {
            x = lu.solve(&x).map_err(backend_to_solver(&op.params))?;
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        x.into_iter().map(|v| C64::new(v, 0.0)).collect()
    } else {
        let mut m = op.entries.clone();
        for i in 0..n {
            m[[i, i]] -= shift;
        }
        let lu = Lu::factorize(&m)
            .map_err(backend_to_solver(&op.params))?
            .ok_or_else(|| solver_error(&op.params, "inverse iteration hit a zero pivot"))?;
        let mut x: Vec<C64> = (0..n).map(|i| C64::new(start(i), 0.0)).collect();
        for _ in 0..3 {
            x = lu.solve(&x).map_err(backend_to_solver(&op.params))?;
            let nrm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        x
    };
    normalize_phase(&mut v)?;
    Ok(v)
}

/// Unit eigenvector for a computed eigenvalue `value` of `op`, by inverse
/// iteration, phase-normalized like [`NearestZero::vector`].
pub fn eigenvector(op: &OperatorMatrix, value: C64) -> Result<Vec<C64>> {
    inverse_iteration(op, value)
}

/// How well the discrete mode-zero stream operator reproduces its kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelAlignment {
    /// Eigenvalue of least real part, the discrete stand-in for zero.
    pub value: C64,
    pub cos_unweighted: f64,
    pub cos_sin_weighted: f64,
}

/// Pairs `∂ₐΨ` with the eigenvector of the eigenvalue of least real part.
/// For `a` close to one that eigenvalue is far from zero (about −6·10³ at
/// `a = 1.001`, `N = 640`) and no longer the one of least modulus, yet its
/// eigenvector still carries the kernel.
pub fn kernel_alignment(a: f64, nodes: usize) -> Result<KernelAlignment> {
    let params = Params::mode_zero(a, nodes)?;
    let grid = Grid::for_params(&params);
    let l0 = assemble_l(&params, &grid);
    let value = eigenvalues(&l0)?
        .into_iter()
        .min_by(|x, y| x.re.total_cmp(&y.re))
        .ok_or_else(|| solver_error(&params, "empty spectrum"))?;
    let v = eigenvector(&l0, value)?;
    let psi = grid.d_a_psi(params.a);
    Ok(KernelAlignment {
        value,
        cos_unweighted: cosine_angle_complex(&v, &psi)?,
        cos_sin_weighted: cosine_angle_weighted(&v, &psi, grid.sin())?,
    })
}

/// Unit Euclidean norm, first component above `1e-8` of the peak rotated to
/// the positive real axis.
pub fn normalize_phase(v: &mut [C64]) -> Result<()> {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(nrm > 0.0 && nrm.is_finite()) {
        return Err(Error::ZeroVector);
    }
    let peak = v.iter().fold(0.0, |m, z| f64::max(m, z.norm()));
    let pivot = v
        .iter()
        .find(|z| z.norm() > 1e-8 * peak)
        .copied()
        .ok_or(Error::ZeroVector)?;
    let rot = pivot.conj() / (pivot.norm() * nrm);
    v.iter_mut().for_each(|z| *z *= rot);
    Ok(())
}

/// `|⟨v, w⟩| / (‖v‖ ‖w‖)` with the plain Euclidean product on grid values.
pub fn cosine_angle(v: &[f64], w: &[f64]) -> Result<f64> {
    weighted_cosine(v.iter().map(|&x| C64::new(x, 0.0)), w, None)
}

/// Cosine between a complex grid vector and a real one (Hermitian product).
pub fn cosine_angle_complex(v: &[C64], w: &[f64]) -> Result<f64> {
    weighted_cosine(v.iter().copied(), w, None)
}

/// Cosine in the inner product `Σ v̄ w sin φ_k`.
pub fn cosine_angle_weighted(v: &[C64], w: &[f64], weight: &[f64]) -> Result<f64> {
    weighted_cosine(v.iter().copied(), w, Some(weight))
}

fn weighted_cosine(
    v: impl ExactSizeIterator<Item = C64>,
    w: &[f64],
    weight: Option<&[f64]>,
) -> Result<f64> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: v.len(),
        });
    }
    if let Some(q) = weight {
        if q.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: w.len(),
                found: q.len(),
            });
        }
    }
    let (mut dot, mut vv, mut ww) = (C64::new(0.0, 0.0), 0.0, 0.0);
    for (k, (x, &y)) in v.zip(w).enumerate() {
        let q = weight.map_or(1.0, |q| q[k]);
        dot += x.conj() * y * q;
        vv += x.norm_sqr() * q;
        ww += y * y * q;
    }
    if vv == 0.0 || ww == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot.norm() / (vv.sqrt() * ww.sqrt())).min(1.0))
}

/// Pairs every eigenvalue of `a` with a distinct eigenvalue of `b`, nearest
/// first, and returns the relative gaps `|x − y| / max(|x|, 1)` in the order
/// of `a`. Both lists must have equal length.
pub fn match_spectra(a: &[C64], b: &[C64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal));
    let mut gap = vec![f64::NAN; a.len()];
    let mut used = vec![false; b.len()];
    for (d, i, j) in pairs {
        if gap[i].is_nan() && !used[j] {
            gap[i] = d / a[i].norm().max(1.0);
            used[j] = true;
        }
    }
    gap
}
