//! Positivity of the swirl operator `ℳₙ = Aₙ + Eₙ` and the weight that makes
//! `ℳ₀` symmetric.
//!
//! In the pairing `⟨g, f⟩ = ∫ g f̄ (a − cos φ)² sin φ dφ` the real part of
//! `⟨ℳₙg, g⟩` is
//!
//! ```text
//! ∫ |∂_φ(g sin φ)|² (a − cos φ)²/sin φ dφ + (nσ)² ∫ |g|² (a − cos φ)² sin φ dφ,
//! ```
//!
//! so `ℳₙ` has no zero or purely imaginary eigenvalue. Integrals are rectangle
//! sums over the interior nodes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eigensolve::spectrum_reduced;
use crate::grid::{Grid, Params};
use crate::landau::LandauParam;
use crate::operators::assemble_m;
use crate::{Error, Result, C64};

/// Highest `sin kφ` mode in random test functions.
pub const TEST_MODES: usize = 6;

/// Real part of the swirl quadratic form (two-term sum) and imaginary part of
/// the full discrete pairing `⟨ℳₙg, g⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadFormResult {
    pub re_part: f64,
    pub im_part: f64,
    pub params: Params,
}

/// `(a − cos φ_k)²`.
fn landau_weight(a: LandauParam, grid: &Grid) -> Vec<f64> {
    grid.cos().iter().map(|c| (a.get() - c).powi(2)).collect()
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `Σ g_k f̄_k ω_k sin φ_k δ`.
fn pairing(g: &[C64], f: &[C64], weight: &[f64], grid: &Grid) -> C64 {
    let d = grid.delta();
    g.iter()
        .zip(f)
        .zip(weight.iter().zip(grid.sin()))
        .map(|((g, f), (w, s))| g * f.conj() * (w * s * d))
        .sum()
}

/// Weighted norm `(Σ |g_k|² ω_k sin φ_k δ)^{1/2}`.
fn weighted_norm(g: &[C64], weight: &[f64], grid: &Grid) -> f64 {
    pairing(g, g, weight, grid).re.sqrt()
}

/// Norm of `g` in the `(a − cos φ)² sin φ` weighted space.
pub fn x0a_norm(g: &[C64], a: LandauParam, grid: &Grid) -> Result<f64> {
    check_len(grid.len(), g.len())?;
    Ok(weighted_norm(g, &landau_weight(a, grid), grid))
}

/// Discrete `⟨ℳₙg, g⟩` in the `(a − cos φ)² sin φ` weight.
pub fn m_pairing(g: &[C64], params: &Params, grid: &Grid) -> Result<C64> {
    check_len(grid.len(), g.len())?;
    let mg = assemble_m(params, grid).apply(&g.iter().copied().collect());
    Ok(pairing(mg.as_slice().expect("contiguous"), g, &landau_weight(params.a, grid), grid))
}

/// Evaluates the swirl quadratic form for `g`. The derivative of `g sin φ` uses
/// the central stencil with zero values beyond both ends.
pub fn m_quadratic_form(g: &[C64], params: &Params, grid: &Grid) -> Result<QuadFormResult> {
    let n = grid.len();
    check_len(n, g.len())?;
    let (sin, d) = (grid.sin(), grid.delta());
    let w = landau_weight(params.a, grid);
    let gs: Vec<C64> = g.iter().zip(sin).map(|(g, s)| g * s).collect();
    let zero = C64::new(0.0, 0.0);
    let mut grad = 0.0;
    for k in 0..n {
        let left = if k > 0 { gs[k - 1] } else { zero };
        let right = if k + 1 < n { gs[k + 1] } else { zero };
        let dgs = (right - left) / (2.0 * d);
        grad += dgs.norm_sqr() * w[k] / sin[k] * d;
    }
    let ns = params.n_sigma();
    let mass = weighted_norm(g, &w, grid).powi(2);
    Ok(QuadFormResult {
        re_part: grad + ns * ns * mass,
        im_part: m_pairing(g, params, grid)?.im,
        params: *params,
    })
}

/// Random smooth grid function `Σ_{k ≤ 6} c_k sin kφ` with complex
/// coefficients uniform in the unit square.
pub fn random_smooth(grid: &Grid, rng: &mut impl Rng) -> Vec<C64> {
    let c: Vec<C64> = (0..TEST_MODES)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    grid.nodes()
        .iter()
        .map(|&p| {
            c.iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * p).sin())
                .sum()
        })
        .collect()
}

/// Candidate weight for the symmetry check of `ℳ₀`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind {
    /// `ω = (a − cos φ)²`.
    Landau,
    /// `ω ≡ 1`.
    Unit,
    /// Arbitrary positive node values.
    Custom(Vec<f64>),
}

/// `max |b[g,f] − conj b[f,g]| / (‖g‖_ω ‖f‖_ω)` over `trials` random smooth
/// pairs, with `b[g,f] = Σ (ℳ₀g) f̄ ω sin φ δ` and the matching `ω`-weighted
/// norms. Pairs are drawn from a ChaCha stream seeded with `seed`, so equal
/// seeds give equal pairs for every weight.
pub fn weight_symmetry_defect(
    kind: &WeightKind,
    a: f64,
    nodes: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let params = Params::mode_zero(a, nodes)?;
    let grid = Grid::for_params(&params);
    let weight = match kind {
        WeightKind::Landau => landau_weight(params.a, &grid),
        WeightKind::Unit => vec![1.0; nodes],
        WeightKind::Custom(w) => {
            check_len(nodes, w.len())?;
            if w.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::InvalidParameter("weights must be positive".into()));
            }
            w.clone()
        }
    };
    let m0 = assemble_m(&params, &grid);
    let apply = |v: &[C64]| m0.apply(&v.iter().copied().collect()).to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g = random_smooth(&grid, &mut rng);
        let f = random_smooth(&grid, &mut rng);
        let bgf = pairing(&apply(&g), &f, &weight, &grid);
        let bfg = pairing(&apply(&f), &g, &weight, &grid);
        let scale = weighted_norm(&g, &weight, &grid) * weighted_norm(&f, &weight, &grid);
        worst = worst.max((bgf - bfg.conj()).norm() / scale);
    }
    Ok(worst)
}

/// Largest entry of `K − Kᵀ` relative to the largest entry of `K`, where
/// `K = S ℳ₀ S⁻¹` and `S = diag((a − cos φ_k) √(sin φ_k δ))`.
pub fn symmetrized_m0_defect(a: f64, nodes: usize) -> Result<f64> {
    let params = Params::mode_zero(a, nodes)?;
    let grid = Grid::for_params(&params);
    let m = assemble_m(&params, &grid).real_part();
    let s: Vec<f64> = grid
        .cos()
        .iter()
        .zip(grid.sin())
        .map(|(c, sn)| (a - c) * (sn * grid.delta()).sqrt())
        .collect();
    let k = ndarray::Array2::from_shape_fn(m.raw_dim(), |(i, j)| s[i] * m[[i, j]] / s[j]);
    let peak = k.iter().fold(0.0, |x, v| f64::max(x, v.abs()));
    let asym = k
        .indexed_iter()
        .fold(0.0, |x, ((i, j), v)| f64::max(x, (v - k[[j, i]]).abs()));
    Ok(asym / peak)
}

/// One tuple of the swirl positivity sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwirlRow {
    pub a: f64,
    pub sigma: f64,
    pub n: i32,
    pub min_real: f64,
    pub min_abs: f64,
}

/// Spectrum extremes of `ℳₙ` for one tuple.
pub fn m_spectrum_extremes(params: &Params) -> Result<SwirlRow> {
    let report = spectrum_reduced(&assemble_m(params, &Grid::for_params(params)))?;
    Ok(SwirlRow {
        a: params.a.get(),
        sigma: params.sigma,
        n: params.n,
        min_real: report.min_real,
        min_abs: report.eigenvalues.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min),
    })
}

/// Spectra of `ℳₙ` over the Cartesian product; both the least real part and
/// the least modulus must be positive. The first violation aborts.
pub fn m_spectrum_positivity_sweep(
    a_list: &[f64],
    sigma_list: &[f64],
    n_list: &[i32],
    nodes: usize,
) -> Result<Vec<SwirlRow>> {
    let mut rows = Vec::new();
    for &a in a_list {
        for &sigma in sigma_list {
            if sigma.is_nan() || sigma <= 0.0 {
                return Err(Error::InvalidParameter(format!("sweep needs σ > 0 (got {sigma})")));
            }
            for &n in n_list {
                let params = Params::new(a, sigma, n, nodes)?;
                let row = m_spectrum_extremes(&params)?;
                if !(row.min_real > 0.0 && row.min_abs > 0.0) {
                    return Err(Error::PositivityViolation {
                        params: Box::new(params),
                        min_real: row.min_real,
                        min_abs: row.min_abs,
                    });
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(a: f64, sigma: f64, n: i32, nodes: usize) -> (Params, Grid) {
        let p = Params::new(a, sigma, n, nodes).unwrap();
        let g = Grid::for_params(&p);
        (p, g)
    }

    #[test]
    fn zero_vector_gives_zero_form() {
        let (p, g) = setup(2.0, 1.0, 1, 30);
        let q = m_quadratic_form(&vec![C64::new(0.0, 0.0); 30], &p, &g).unwrap();
        assert_eq!((q.re_part, q.im_part), (0.0, 0.0));
    }

    #[test]
    fn sin_gives_positive_form() {
        let (p, g) = setup(2.0, 0.0, 0, 100);
        let v: Vec<C64> = g.sin().iter().map(|&s| C64::new(s, 0.0)).collect();
        assert!(m_quadratic_form(&v, &p, &g).unwrap().re_part > 0.0);
    }

    #[test]
    fn form_real_part_tracks_discrete_pairing() {
        let (p, g) = setup(1.5, 0.7, 1, 400);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_smooth(&g, &mut rng);
        let q = m_quadratic_form(&v, &p, &g).unwrap();
        let pair = m_pairing(&v, &p, &g).unwrap();
        assert!(((q.re_part - pair.re) / q.re_part).abs() < 1e-2);
    }

    #[test]
    fn length_mismatch_rejected() {
        let (p, g) = setup(2.0, 1.0, 1, 10);
        assert!(m_quadratic_form(&[C64::new(1.0, 0.0); 9], &p, &g).is_err());
    }

    #[test]
    fn landau_weight_is_scale_free_and_unit_weight_is_not_symmetric() {
        let a = 2.0;
        let grid = Grid::new(160).unwrap();
        let doubled: Vec<f64> = landau_weight(LandauParam::new(a).unwrap(), &grid)
            .iter()
            .map(|w| 2.0 * w)
            .collect();
        let landau = weight_symmetry_defect(&WeightKind::Landau, a, 160, 5, 7).unwrap();
        let scaled = weight_symmetry_defect(&WeightKind::Custom(doubled), a, 160, 5, 7).unwrap();
        let unit = weight_symmetry_defect(&WeightKind::Unit, a, 160, 5, 7).unwrap();
        assert!((landau - scaled).abs() <= 1e-12 * landau.max(1e-300) + 1e-15);
        assert!(landau < 1e-2 && unit > 0.01, "{landau} {unit}");
        assert!(weight_symmetry_defect(&WeightKind::Landau, a, 160, 0, 7).is_err());
        assert!(weight_symmetry_defect(&WeightKind::Custom(vec![1.0; 3]), a, 160, 1, 7).is_err());
    }

    #[test]
    fn sweep_reports_positive_rows() {
        let rows = m_spectrum_positivity_sweep(&[2.0], &[1.0], &[0, 1], 40).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.min_real > 0.0 && r.min_abs > 0.0));
        assert!(m_spectrum_positivity_sweep(&[2.0], &[0.0], &[1], 40).is_err());
    }
}
