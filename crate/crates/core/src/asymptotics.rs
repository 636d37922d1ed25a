//! Small-`σ` expansion of the `𝔏₁` eigenvalue that bifurcates from the kernel
//! of `𝔏₀`.
//!
//! Writing `𝔏₁ = 𝔏₀ + σT₁ + σ²T₂ + …`, `h = ∂ₐΨ + ση₁ + σ²η₂ + …` and
//! `μ = σμ₁ + σ²μ₂ + …`, each order is a bordered system
//!
//! ```text
//! ⎡ 𝔏₀    −∂ₐΨ ⎤ ⎡η⎤   ⎡rhs⎤
//! ⎣ δ∂ₐΨᵀ   0  ⎦ ⎣μ⎦ = ⎣ 0 ⎦
//! ```
//!
//! with `T₁ = i·R₁` purely imaginary. Order one gives `η₁ = i·Im η₁`,
//! `μ₁ = i·Im μ₁` from `rhs = −R₁∂ₐΨ`; the real part of order two reads
//! `rhs = −T₂∂ₐΨ + R₁ Im η₁ − Im μ₁ Im η₁` and yields `Re μ₂`.

use ndarray::Array2;
use serde::Serialize;

use crate::eigensolve::spectrum_reduced;
use crate::grid::{Grid, Params};
use crate::landau::LandauParam;
use crate::linalg::Lu;
use crate::operators::{
    assemble_l, assemble_perturbation_terms, two_a0_plus_b0_d_a_psi, ModeBlocks, OperatorKind,
    OperatorMatrix, RealMode0,
};
use crate::{Error, Result};

/// Bordered matrices with a smaller reciprocal condition estimate (after
/// equilibrating the border) are treated as singular.
pub const MIN_RCOND: f64 = f64::EPSILON;

/// Largest `σ` accepted by [`small_sigma_consistency`].
pub const SMALL_SIGMA_MAX: f64 = 0.1;

/// Solution `(η, μ)` of one bordered system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BorderedSolution {
    pub eta: Vec<f64>,
    pub mu: f64,
    /// Euclidean norm of the full residual, both blocks.
    pub residual_norm: f64,
    /// Euclidean norm of the right-hand side.
    pub rhs_norm: f64,
    /// Reciprocal `1`-norm condition estimate of the bordered matrix.
    pub rcond: f64,
}

impl BorderedSolution {
    /// Residual relative to the right-hand side (absolute if `rhs = 0`).
    pub fn relative_residual(&self) -> f64 {
        if self.rhs_norm > 0.0 {
            self.residual_norm / self.rhs_norm
        } else {
            self.residual_norm
        }
    }

    /// `|⟨∂ₐΨ, η⟩| / (‖∂ₐΨ‖ ‖η‖)`, zero when `η = 0`.
    pub fn orthogonality_defect(&self, d_a_psi: &[f64]) -> f64 {
        let dot: f64 = self.eta.iter().zip(d_a_psi).map(|(e, p)| e * p).sum();
        let ne = norm(&self.eta);
        if ne == 0.0 {
            0.0
        } else {
            dot.abs() / (ne * norm(d_a_psi))
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Factorized `(N + 1) × (N + 1)` bordered matrix. The border is stored as
/// `scale·∂ₐΨ` in both the last column and the last row so that its entries
/// match the size of `𝔏₀`; the last unknown is then `μ / scale`.
struct Bordered {
    params: Params,
    l0: Array2<f64>,
    psi: Vec<f64>,
    delta: f64,
    scale: f64,
    matrix: Array2<f64>,
    lu: Lu<f64>,
}

impl Bordered {
    fn new(params: Params, l0: Array2<f64>, grid: &Grid) -> Result<Self> {
        let n = grid.len();
        let psi = grid.d_a_psi(params.a);
        let delta = grid.delta();
        let l_max = l0.iter().fold(0.0, |m, x| f64::max(m, x.abs()));
        let psi_max = psi.iter().fold(0.0, |m, x| f64::max(m, x.abs()));
        let scale = l_max / psi_max;
        let mut m = Array2::<f64>::zeros((n + 1, n + 1));
        m.slice_mut(ndarray::s![..n, ..n]).assign(&l0);
        for k in 0..n {
            m[[k, n]] = -scale * psi[k];
            m[[n, k]] = scale * psi[k];
        }
        let lu = Lu::factorize(&m)?.ok_or(Error::SingularBordered {
            params: Box::new(params),
            rcond: 0.0,
        })?;
        if lu.rcond.is_nan() || lu.rcond < MIN_RCOND {
            return Err(Error::SingularBordered {
                params: Box::new(params),
                rcond: lu.rcond,
            });
        }
        Ok(Self {
            params,
            l0,
            psi,
            delta,
            scale,
            matrix: m,
            lu,
        })
    }

    fn lu_solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.lu.solve(b).map_err(|e| match e {
            Error::Backend(err) => Error::Solver {
                params: Box::new(self.params),
                reason: err.to_string(),
            },
            other => other,
        })
    }

    fn solve(&self, rhs: &[f64]) -> Result<BorderedSolution> {
        let n = self.psi.len();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut b = rhs.to_vec();
        b.push(0.0);
        let mut x = self.lu_solve(&b)?;
        // one step of iterative refinement
        let r = &ndarray::Array1::from(b) - &self.matrix.dot(&ndarray::ArrayView1::from(&x));
        let dx = self.lu_solve(r.as_slice().expect("contiguous"))?;
        x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
        let mu = x.pop().expect("bordered unknown") * self.scale;
        let eta = x;
        let l_eta = self.l0.dot(&ndarray::ArrayView1::from(&eta));
        let mut res2 = 0.0;
        for k in 0..n {
            let r = l_eta[k] - mu * self.psi[k] - rhs[k];
            res2 += r * r;
        }
        let c: f64 = eta.iter().zip(&self.psi).map(|(e, p)| e * p).sum::<f64>() * self.delta;
        res2 += c * c;
        Ok(BorderedSolution {
            eta,
            mu,
            residual_norm: res2.sqrt(),
            rhs_norm: norm(rhs),
            rcond: self.lu.rcond,
        })
    }
}

fn real_l0(op: &OperatorMatrix) -> Result<Array2<f64>> {
    if op.kind != OperatorKind::L || !op.is_real() {
        return Err(Error::InvalidParameter(format!(
            "bordered solves need the real stream operator at n = 0 (got {} at {})",
            op.kind, op.params
        )));
    }
    Ok(op.real_part())
}

/// Solves `𝔏₀η − μ∂ₐΨ = rhs`, `δ Σ ∂ₐΨ_k η_k = 0` by dense LU.
pub fn solve_bordered(l0: &OperatorMatrix, rhs: &[f64]) -> Result<BorderedSolution> {
    let grid = Grid::for_params(&l0.params);
    Bordered::new(l0.params, real_l0(l0)?, &grid)?.solve(rhs)
}

/// The same system in the first-order block form with unknowns
/// `(A₀η, η, μ)`, i.e. `2N + 1` equations:
///
/// ```text
/// ⎡ I       −A₀    0    ⎤
/// ⎢ A₀+B₀   C₀    −∂ₐΨ  ⎥
/// ⎣ 0       δ∂ₐΨᵀ  0    ⎦
/// ```
pub fn solve_bordered_block_form(blocks: &ModeBlocks, rhs: &[f64]) -> Result<BorderedSolution> {
    let params = *blocks.params();
    let parts = [&blocks.a, &blocks.b, &blocks.c];
    if params.n_sigma() != 0.0 || parts.iter().any(|m| !m.is_real()) {
        return Err(Error::InvalidParameter(format!(
            "block-form bordered solve needs n = 0 blocks (got {params})"
        )));
    }
    let n = blocks.a.dim();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let grid = Grid::for_params(&params);
    let psi = grid.d_a_psi(params.a);
    let (a, b, c) = (blocks.a.real_part(), blocks.b.real_part(), blocks.c.real_part());
    let mut m = Array2::<f64>::zeros((2 * n + 1, 2 * n + 1));
    use ndarray::s;
    for i in 0..n {
        m[[i, i]] = 1.0;
        m[[n + i, 2 * n]] = -psi[i];
        m[[2 * n, n + i]] = psi[i] * grid.delta();
    }
    m.slice_mut(s![..n, n..2 * n]).assign(&a.mapv(|x| -x));
    m.slice_mut(s![n..2 * n, ..n]).assign(&(&a + &b));
    m.slice_mut(s![n..2 * n, n..2 * n]).assign(&c);
    let lu = Lu::factorize(&m)?.ok_or(Error::SingularBordered {
        params: Box::new(params),
        rcond: 0.0,
    })?;
    if lu.rcond.is_nan() || lu.rcond < MIN_RCOND {
        return Err(Error::SingularBordered {
            params: Box::new(params),
            rcond: lu.rcond,
        });
    }
    let mut full = vec![0.0; 2 * n + 1];
    full[n..2 * n].copy_from_slice(rhs);
    let x = lu.solve(&full)?;
    let y = ndarray::Array1::from(x.clone());
    let r = m.dot(&y) - ndarray::Array1::from(full);
    Ok(BorderedSolution {
        eta: x[n..2 * n].to_vec(),
        mu: x[2 * n],
        residual_norm: r.dot(&r).sqrt(),
        rhs_norm: norm(rhs),
        rcond: lu.rcond,
    })
}

/// Every quantity of the order-one and order-two solves for one `(a, N)`.
#[derive(Clone, Debug, Serialize)]
pub struct Mu2Pipeline {
    pub a: f64,
    #[serde(rename = "N")]
    pub nodes: usize,
    /// `(Im η₁, Im μ₁)`.
    pub first_order: BorderedSolution,
    /// `(Re η₂, Re μ₂)`.
    pub second_order: BorderedSolution,
    pub mu2: f64,
}

struct Setup {
    grid: Grid,
    ops: RealMode0,
    bordered: Bordered,
}

fn setup(a: f64, nodes: usize) -> Result<Setup> {
    let params = Params::mode_zero(a, nodes)?;
    let grid = Grid::for_params(&params);
    let ops = RealMode0::assemble(&params, &grid);
    let bordered = Bordered::new(params, ops.l0.to_dense_real(), &grid)?;
    Ok(Setup {
        grid,
        ops,
        bordered,
    })
}

impl Setup {
    fn first_order_rhs(&self) -> Vec<f64> {
        self.ops
            .r1
            .apply_real(&self.bordered.psi)
            .into_iter()
            .map(|v| -v)
            .collect()
    }

    fn second_order_rhs(&self, first: &BorderedSolution) -> Vec<f64> {
        let psi = &self.bordered.psi;
        let closed = two_a0_plus_b0_d_a_psi(self.bordered.params.a, &self.grid);
        let r1_eta = self.ops.r1.apply_real(&first.eta);
        (0..psi.len())
            .map(|k| {
                let t2_psi = closed[k] + (1.0 + self.ops.two_k_w2[k]) * psi[k];
                -t2_psi + r1_eta[k] - first.mu * first.eta[k]
            })
            .collect()
    }
}

/// `(Re η₁, Re μ₁)` from the real part of the order-one equation, whose
/// right-hand side `−Re(T₁∂ₐΨ)` vanishes identically. A sanity check of the
/// scheme: the solution must be zero.
pub fn first_order_real(a: f64, nodes: usize) -> Result<BorderedSolution> {
    let params = Params::mode_zero(a, nodes)?;
    let grid = Grid::for_params(&params);
    let t1 = assemble_perturbation_terms(&params, &grid).t1;
    let psi = grid.d_a_psi(params.a);
    let rhs: Vec<f64> = t1.apply_real(&psi).iter().map(|z| -z.re).collect();
    setup(a, nodes)?.bordered.solve(&rhs)
}

/// `(Im η₁, Im μ₁)` from `rhs = −R₁∂ₐΨ`.
pub fn first_order_imaginary(a: f64, nodes: usize) -> Result<BorderedSolution> {
    let s = setup(a, nodes)?;
    s.bordered.solve(&s.first_order_rhs())
}

/// Both orders with a single factorization of the bordered matrix.
pub fn mu2_pipeline(a: f64, nodes: usize) -> Result<Mu2Pipeline> {
    let s = setup(a, nodes)?;
    let first = s.bordered.solve(&s.first_order_rhs())?;
    let second = s.bordered.solve(&s.second_order_rhs(&first))?;
    Ok(Mu2Pipeline {
        a,
        nodes,
        mu2: second.mu,
        first_order: first,
        second_order: second,
    })
}

/// `Re μ₂` for `(a, N)`.
pub fn second_order_mu2(a: f64, nodes: usize) -> Result<f64> {
    Ok(mu2_pipeline(a, nodes)?.mu2)
}

/// `(min Re σ(𝔏₁), Re μ₂ · σ²)` for side-by-side comparison.
pub fn small_sigma_consistency(a: f64, sigma: f64, nodes: usize) -> Result<(f64, f64)> {
    if !(sigma > 0.0 && sigma <= SMALL_SIGMA_MAX) {
        return Err(Error::InvalidParameter(format!(
            "small-σ comparison needs 0 < σ ≤ {SMALL_SIGMA_MAX} (got {sigma})"
        )));
    }
    let params = Params::new(a, sigma, 1, nodes)?;
    let l1 = assemble_l(&params, &Grid::for_params(&params));
    let min_real = spectrum_reduced(&l1)?.min_real;
    Ok((min_real, second_order_mu2(a, nodes)? * sigma * sigma))
}

/// `∂ₐΨ` at the interior nodes of an `N`-point grid.
pub fn sampled_d_a_psi(a: LandauParam, nodes: usize) -> Result<Vec<f64>> {
    Ok(Grid::new(nodes)?.d_a_psi(a))
}
