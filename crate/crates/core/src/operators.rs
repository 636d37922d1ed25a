//! Dense assembly of the mode operators on the interior grid.
//!
//! With `w = a − cos φ`, `k = a² − 1` and `s = nσ`:
//!
//! ```text
//! Aₙh = (s² − is)h − h″ − cot φ h′ + h/sin²φ
//! Bₙh = 2is(k/w² + 1)h − (2 sin φ/w)h′ + V h,   V = 2 − (4a² + 2a cos φ − 6)/w²
//! Cₙh = −(12k sin φ/w³)h′ + (12is k sin²φ/w⁴)h + (12k(1 − a cos φ)/w⁴)h
//! Eₙg = is(Ũ_τ + 2)g + Ũ_φ g′ + Ũ_φ cot φ g
//! 𝔏ₙ = (Aₙ + Bₙ)Aₙ + Cₙ,   ℳₙ = Aₙ + Eₙ
//! ```
//!
//! Every factor is tridiagonal, so products are formed in banded storage and
//! densified once. Because the imaginary parts all carry the factor `s`,
//! `n = 0` matrices are exactly real, `𝔏₋ₙ = conj 𝔏ₙ` and
//! `𝔏ₙ(σ) = 𝔏₁(nσ)` hold bit for bit.

use std::fmt;
use std::io::{self, Write};

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::band::Band;
use crate::grid::{Grid, Params};
use crate::landau::LandauParam;
use crate::{Error, Result, C64};

/// Which operator a matrix realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    A,
    B,
    C,
    E,
    L,
    M,
    T1,
    T2,
    T3,
    T4,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Dense complex `N × N` matrix tagged with its operator and parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub params: Params,
    pub entries: Array2<C64>,
}

impl OperatorMatrix {
    fn from_band(kind: OperatorKind, params: &Params, band: &Band) -> Self {
        Self {
            kind,
            params: *params,
            entries: band.to_dense(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// True iff every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> Array2<f64> {
        self.entries.mapv(|z| z.re)
    }

    pub fn imag_part(&self) -> Array2<f64> {
        self.entries.mapv(|z| z.im)
    }

    pub fn conj(&self) -> Array2<C64> {
        self.entries.mapv(|z| z.conj())
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.entries.dot(v)
    }

    /// Applies the matrix to a real vector.
    pub fn apply_real(&self, v: &[f64]) -> Array1<C64> {
        let v: Array1<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.entries.dot(&v)
    }

    /// Writes the nonzero entries as `row,col,re,im` lines (0-based indices).
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row,col,re,im")?;
        for ((i, j), z) in self.entries.indexed_iter() {
            if z.re != 0.0 || z.im != 0.0 {
                writeln!(out, "{i},{j},{:.16e},{:.16e}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

/// Coefficient samples shared by every assembly.
struct Coeffs<'g> {
    grid: &'g Grid,
    a: f64,
    k: f64,
    w: Vec<f64>,
    s: f64,
}

impl<'g> Coeffs<'g> {
    fn new(params: &Params, grid: &'g Grid) -> Self {
        assert_eq!(grid.len(), params.nodes, "grid does not match params");
        let a = params.a.get();
        Self {
            grid,
            a,
            k: params.a.k(),
            w: grid.cos().iter().map(|c| a - c).collect(),
            s: params.n_sigma(),
        }
    }

    fn n(&self) -> usize {
        self.grid.len()
    }

    fn map(&self, f: impl Fn(usize) -> f64) -> Vec<f64> {
        (0..self.n()).map(f).collect()
    }

    fn d1(&self) -> Band {
        let c = 0.5 / self.grid.delta();
        Band::stencil(self.n(), -c, 0.0, c)
    }

    fn d2(&self) -> Band {
        let c = 1.0 / (self.grid.delta() * self.grid.delta());
        Band::stencil(self.n(), c, -2.0 * c, c)
    }

    /// `2k/w²`.
    fn two_k_w2(&self) -> Vec<f64> {
        self.map(|i| 2.0 * self.k / (self.w[i] * self.w[i]))
    }

    /// `12k sin²φ/w⁴`.
    fn twelve_k_s2_w4(&self) -> Vec<f64> {
        let sin = self.grid.sin();
        self.map(|i| 12.0 * self.k * sin[i] * sin[i] / self.w[i].powi(4))
    }

    fn a(&self) -> Band {
        let s = self.s;
        let shift = C64::new(s * s, -s);
        let inv_sin2 = self.grid.inv_sin2();
        let diag = Band::diagonal(inv_sin2.iter().map(|&v| shift + v));
        diag.sub(&self.d2()).sub(&self.d1().scale_rows(self.grid.cot()))
    }

    fn b(&self) -> Band {
        let (a, k, s) = (self.a, self.k, self.s);
        let (sin, cos) = (self.grid.sin(), self.grid.cos());
        let diag = Band::diagonal((0..self.n()).map(|i| {
            let w2 = self.w[i] * self.w[i];
            let v = 2.0 - (4.0 * a * a + 2.0 * a * cos[i] - 6.0) / w2;
            C64::new(v, 2.0 * s * (k / w2 + 1.0))
        }));
        let drift = self.map(|i| 2.0 * sin[i] / self.w[i]);
        diag.sub(&self.d1().scale_rows(&drift))
    }

    fn c(&self) -> Band {
        let (a, k, s) = (self.a, self.k, self.s);
        let (sin, cos) = (self.grid.sin(), self.grid.cos());
        let diag = Band::diagonal((0..self.n()).map(|i| {
            let w4 = self.w[i].powi(4);
            C64::new(
                12.0 * k * (1.0 - a * cos[i]) / w4,
                12.0 * s * k * sin[i] * sin[i] / w4,
            )
        }));
        let drift = self.map(|i| 12.0 * k * sin[i] / self.w[i].powi(3));
        diag.sub(&self.d1().scale_rows(&drift))
    }

    fn e(&self, param: LandauParam) -> Band {
        let s = self.s;
        let cot = self.grid.cot();
        let (ut, up): (Vec<f64>, Vec<f64>) = self.grid.angles().map(|p| param.u_tilde(p)).unzip();
        let diag = Band::diagonal((0..self.n()).map(|i| C64::new(up[i] * cot[i], s * (ut[i] + 2.0))));
        diag.add(&self.d1().scale_rows(&up))
    }
}

fn l_band(c: &Coeffs) -> Band {
    let a = c.a();
    a.add(&c.b()).mul(&a).add(&c.c())
}

pub fn assemble_a(params: &Params, grid: &Grid) -> OperatorMatrix {
    OperatorMatrix::from_band(OperatorKind::A, params, &Coeffs::new(params, grid).a())
}

pub fn assemble_b(params: &Params, grid: &Grid) -> OperatorMatrix {
    OperatorMatrix::from_band(OperatorKind::B, params, &Coeffs::new(params, grid).b())
}

pub fn assemble_c(params: &Params, grid: &Grid) -> OperatorMatrix {
    OperatorMatrix::from_band(OperatorKind::C, params, &Coeffs::new(params, grid).c())
}

pub fn assemble_e(params: &Params, grid: &Grid) -> OperatorMatrix {
    let c = Coeffs::new(params, grid);
    OperatorMatrix::from_band(OperatorKind::E, params, &c.e(params.a))
}

/// Stream operator `𝔏ₙ = (Aₙ + Bₙ)Aₙ + Cₙ`.
pub fn assemble_l(params: &Params, grid: &Grid) -> OperatorMatrix {
    OperatorMatrix::from_band(OperatorKind::L, params, &l_band(&Coeffs::new(params, grid)))
}

/// Swirl operator `ℳₙ = Aₙ + Eₙ`.
pub fn assemble_m(params: &Params, grid: &Grid) -> OperatorMatrix {
    let c = Coeffs::new(params, grid);
    OperatorMatrix::from_band(OperatorKind::M, params, &c.a().add(&c.e(params.a)))
}

/// Assembles `kind` (only `A, B, C, E, L, M`; the `T` terms come from
/// [`assemble_perturbation_terms`]).
pub fn assemble(kind: OperatorKind, params: &Params, grid: &Grid) -> Result<OperatorMatrix> {
    Ok(match kind {
        OperatorKind::A => assemble_a(params, grid),
        OperatorKind::B => assemble_b(params, grid),
        OperatorKind::C => assemble_c(params, grid),
        OperatorKind::E => assemble_e(params, grid),
        OperatorKind::L => assemble_l(params, grid),
        OperatorKind::M => assemble_m(params, grid),
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other} is a perturbation term, not a mode operator"
            )))
        }
    })
}

/// The three blocks of the first-order pencil for `𝔏ₙ`.
#[derive(Clone, Debug)]
pub struct ModeBlocks {
    pub a: OperatorMatrix,
    pub b: OperatorMatrix,
    pub c: OperatorMatrix,
}

impl ModeBlocks {
    pub fn assemble(params: &Params, grid: &Grid) -> Self {
        let c = Coeffs::new(params, grid);
        Self {
            a: OperatorMatrix::from_band(OperatorKind::A, params, &c.a()),
            b: OperatorMatrix::from_band(OperatorKind::B, params, &c.b()),
            c: OperatorMatrix::from_band(OperatorKind::C, params, &c.c()),
        }
    }

    pub fn params(&self) -> &Params {
        &self.a.params
    }
}

/// Coefficients of `𝔏₁(σ) − 𝔏₀ = σT₁ + σ²T₂ + σ³T₃ + σ⁴T₄`.
#[derive(Clone, Debug)]
pub struct PerturbationTerms {
    pub t1: OperatorMatrix,
    pub t2: OperatorMatrix,
    pub t3: OperatorMatrix,
    pub t4: OperatorMatrix,
}

/// Builds `T₁..T₄` for the Landau parameter and grid of `params`. The mode and
/// frequency of `params` are ignored; the terms always refer to `𝔏₀`.
pub fn assemble_perturbation_terms(params: &Params, grid: &Grid) -> PerturbationTerms {
    let p0 = params.with_mode(0);
    let c = Coeffs::new(&p0, grid);
    let (a0, b0) = (c.a(), c.b());
    let two_k_w2 = c.two_k_w2();
    let i = C64::new(0.0, 1.0);

    let r1 = a0
        .scale_rows(&two_k_w2)
        .sub(&b0)
        .add(&Band::real_diagonal(&c.twelve_k_s2_w4()));
    let t2 = a0
        .scale(C64::new(2.0, 0.0))
        .add(&b0)
        .add(&Band::real_diagonal(&two_k_w2.iter().map(|v| 1.0 + v).collect::<Vec<_>>()));
    let t3 = Band::diagonal(two_k_w2.iter().map(|&v| C64::new(0.0, v)));
    let t4 = Band::identity(grid.len());

    PerturbationTerms {
        t1: OperatorMatrix::from_band(OperatorKind::T1, &p0, &r1.scale(i)),
        t2: OperatorMatrix::from_band(OperatorKind::T2, &p0, &t2),
        t3: OperatorMatrix::from_band(OperatorKind::T3, &p0, &t3),
        t4: OperatorMatrix::from_band(OperatorKind::T4, &p0, &t4),
    }
}

/// Banded real operators at `n = 0` used by the perturbation pipeline.
pub(crate) struct RealMode0 {
    pub l0: Band,
    /// Real bracket of the first-order term: `T₁ = i·r1`.
    pub r1: Band,
    /// `2k/w²` at the nodes.
    pub two_k_w2: Vec<f64>,
}

impl RealMode0 {
    pub fn assemble(params: &Params, grid: &Grid) -> Self {
        let c = Coeffs::new(&params.with_mode(0), grid);
        let two_k_w2 = c.two_k_w2();
        let r1 = c
            .a()
            .scale_rows(&two_k_w2)
            .sub(&c.b())
            .add(&Band::real_diagonal(&c.twelve_k_s2_w4()));
        Self {
            l0: l_band(&c),
            r1,
            two_k_w2,
        }
    }
}

/// Closed form of `(2A₀ + B₀)∂ₐΨ = −4(a² − 1) sin φ/(a − cos φ)⁴` at the nodes.
pub fn two_a0_plus_b0_d_a_psi(a: LandauParam, grid: &Grid) -> Vec<f64> {
    let k = a.k();
    grid.sin()
        .iter()
        .zip(grid.cos())
        .map(|(s, c)| -4.0 * k * s / (a.get() - c).powi(4))
        .collect()
}

/// `‖𝔏₀∂ₐΨ‖∞ / ‖∂ₐΨ‖∞` at the nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelResidual {
    /// Over every interior node.
    pub all_nodes: f64,
    /// Over the middle 80% of the nodes, away from the one-row boundary layer
    /// left by the Dirichlet elimination.
    pub interior: f64,
}

pub fn kernel_residual(a: f64, nodes: usize) -> Result<KernelResidual> {
    let params = Params::mode_zero(a, nodes)?;
    let grid = Grid::for_params(&params);
    let psi = grid.d_a_psi(params.a);
    let r = assemble_l(&params, &grid).apply_real(&psi);
    let sup = |from: usize, to: usize, v: &dyn Fn(usize) -> f64| {
        (from..to).map(v).fold(0.0, f64::max)
    };
    let scale = sup(0, nodes, &|k| psi[k].abs());
    let lo = nodes / 10;
    Ok(KernelResidual {
        all_nodes: sup(0, nodes, &|k| r[k].norm()) / scale,
        interior: sup(lo, nodes - lo, &|k| r[k].norm()) / scale,
    })
}

/// Fewest interior nodes accepted by [`apply_tilde_l0`].
pub const TILDE_L0_MIN_NODES: usize = 9;

/// Evaluates `𝔏̃₀H = ∂³_z(Q ∂_z(kH))` with `Q = (1 − z²)²/(a − z)²` and
/// `k = (a − z)²/(1 − z²)` on the interior nodes `z_j = cos φ_j` of `grid`.
///
/// Each `∂_z` is a three-point Lagrange derivative on the nonuniform nodes,
/// one-sided at the two ends. Since `𝔏₀h = sin φ · 𝔏̃₀(h sin φ)`, this is an
/// independent discretization of `𝔏₀`.
pub fn apply_tilde_l0(a: LandauParam, grid: &Grid, h_z: &[f64]) -> Result<Vec<f64>> {
    let n = grid.len();
    if n < TILDE_L0_MIN_NODES {
        return Err(Error::InvalidParameter(format!(
            "z-form operator needs at least {TILDE_L0_MIN_NODES} nodes (got {n})"
        )));
    }
    if h_z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h_z.len(),
        });
    }
    let a = a.get();
    let z = grid.cos();
    let s2 = grid.sin().iter().map(|s| s * s);
    let kh: Vec<f64> = s2
        .clone()
        .zip(z)
        .zip(h_z)
        .map(|((s2, z), h)| (a - z).powi(2) / s2 * h)
        .collect();
    let mut g = lagrange_derivative(z, &kh);
    for ((gi, s2), zi) in g.iter_mut().zip(s2).zip(z) {
        *gi *= s2 * s2 / (a - zi).powi(2);
    }
    for _ in 0..3 {
        g = lagrange_derivative(z, &g);
    }
    Ok(g)
}

/// `𝔏₀h` via the `z`-form: `sin φ · 𝔏̃₀(h sin φ)`.
pub fn apply_l0_via_z(a: LandauParam, grid: &Grid, h: &[f64]) -> Result<Vec<f64>> {
    let big_h: Vec<f64> = h.iter().zip(grid.sin()).map(|(h, s)| h * s).collect();
    let out = apply_tilde_l0(a, grid, &big_h)?;
    Ok(out.iter().zip(grid.sin()).map(|(v, s)| v * s).collect())
}

/// First derivative of the interpolating quadratic through three neighbours.
fn lagrange_derivative(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let j = i.clamp(1, n - 2);
            let (x0, x1, x2) = (x[j - 1], x[j], x[j + 1]);
            let (f0, f1, f2) = (f[j - 1], f[j], f[j + 1]);
            let t = x[i];
            f0 * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
                + f1 * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
                + f2 * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
        })
        .collect()
}
