//! Problem parameters, the uniform interior grid on `(0, π)` and the
//! second-order difference matrices.
//!
//! Nodes are `φ_k = kδ`, `k = 1..=N`, `δ = π/(N+1)`. The Dirichlet values
//! `h₀ = h_{N+1} = 0` are eliminated, so every operator is exactly `N × N`.

use std::f64::consts::PI;
use std::fmt;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::landau::{LandauParam, PolarAngle};
use crate::{Error, Result};

/// Fewest interior nodes accepted by [`Params::new`].
pub const MIN_NODES: usize = 3;

/// Radial frequency `σ = 2π / ln λ` of a discretely self-similar field with
/// scaling factor `λ > 1`.
pub fn sigma_from_lambda(lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling factor must satisfy λ > 1 (got {lambda})"
        )));
    }
    Ok(2.0 * PI / lambda.ln())
}

/// Parameters of one assembly/solve: Landau parameter, radial frequency,
/// Fourier mode and interior node count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: LandauParam,
    pub sigma: f64,
    pub n: i32,
    #[serde(rename = "N")]
    pub nodes: usize,
}

impl Params {
    /// `σ` must be finite and non-negative; for `n = 0` it never enters an
    /// operator.
    pub fn new(a: f64, sigma: f64, n: i32, nodes: usize) -> Result<Self> {
        let a = LandauParam::new(a)?;
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "σ must be finite and non-negative (got {sigma})"
            )));
        }
        if nodes < MIN_NODES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_NODES} interior nodes (got {nodes})"
            )));
        }
        Ok(Self { a, sigma, n, nodes })
    }

    /// Stream/swirl mode-zero parameters (σ irrelevant).
    pub fn mode_zero(a: f64, nodes: usize) -> Result<Self> {
        Self::new(a, 0.0, 0, nodes)
    }

    /// Grid spacing `δ = π/(N+1)`.
    #[inline]
    pub fn delta(&self) -> f64 {
        PI / (self.nodes + 1) as f64
    }

    /// `nσ`, the only way `n` and `σ` enter the operators.
    #[inline]
    pub fn n_sigma(&self) -> f64 {
        self.n as f64 * self.sigma
    }

    pub fn with_mode(self, n: i32) -> Self {
        Self { n, ..self }
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        Self { sigma, ..self }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={}, sigma={}, n={}, N={}",
            self.a.get(),
            self.sigma,
            self.n,
            self.nodes
        )
    }
}

/// Interior nodes with the trigonometric samples every operator needs.
#[derive(Clone, Debug)]
pub struct Grid {
    delta: f64,
    nodes: Vec<f64>,
    sin: Vec<f64>,
    cos: Vec<f64>,
    cot: Vec<f64>,
    inv_sin2: Vec<f64>,
}

impl Grid {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < MIN_NODES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_NODES} interior nodes (got {nodes})"
            )));
        }
        let delta = PI / (nodes + 1) as f64;
        let phi: Vec<f64> = (1..=nodes).map(|k| k as f64 * delta).collect();
        let (sin, cos): (Vec<f64>, Vec<f64>) = phi.iter().map(|p| p.sin_cos()).unzip();
        let cot = sin.iter().zip(&cos).map(|(s, c)| c / s).collect();
        let inv_sin2 = sin.iter().map(|s| 1.0 / (s * s)).collect();
        Ok(Self {
            delta,
            nodes: phi,
            sin,
            cos,
            cot,
            inv_sin2,
        })
    }

    pub fn for_params(params: &Params) -> Self {
        Self::new(params.nodes).expect("Params already validated the node count")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn sin(&self) -> &[f64] {
        &self.sin
    }

    pub fn cos(&self) -> &[f64] {
        &self.cos
    }

    pub fn cot(&self) -> &[f64] {
        &self.cot
    }

    pub fn inv_sin2(&self) -> &[f64] {
        &self.inv_sin2
    }

    pub fn angles(&self) -> impl Iterator<Item = PolarAngle> + '_ {
        self.nodes
            .iter()
            .map(|&p| PolarAngle::new(p).expect("interior node lies in (0, π)"))
    }

    /// Samples `f(φ_k)` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&p| f(p)).collect()
    }

    /// `∂ₐΨ` sampled at the nodes.
    pub fn d_a_psi(&self, a: LandauParam) -> Vec<f64> {
        self.angles().map(|phi| a.d_a_psi(phi)).collect()
    }
}

/// Central first difference `(h_{k+1} − h_{k−1})/(2δ)` with `h₀ = h_{N+1} = 0`.
pub fn diff1(grid: &Grid) -> Array2<f64> {
    let n = grid.len();
    let c = 0.5 / grid.delta();
    Array2::from_shape_fn((n, n), |(i, j)| {
        if j == i + 1 {
            c
        } else if i == j + 1 {
            -c
        } else {
            0.0
        }
    })
}

/// Second difference `(h_{k+1} − 2h_k + h_{k−1})/δ²` with `h₀ = h_{N+1} = 0`.
pub fn diff2(grid: &Grid) -> Array2<f64> {
    let n = grid.len();
    let c = 1.0 / (grid.delta() * grid.delta());
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            -2.0 * c
        } else if i.abs_diff(j) == 1 {
            c
        } else {
            0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    fn max_err(approx: &Array1<f64>, exact: &[f64]) -> f64 {
        approx
            .iter()
            .zip(exact)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn sigma_from_lambda_examples() {
        assert!((sigma_from_lambda((2.0 * PI).exp()).unwrap() - 1.0).abs() < 1e-14);
        assert!((sigma_from_lambda(PI.exp()).unwrap() - 2.0).abs() < 1e-14);
        assert!(sigma_from_lambda(1.0 + 1e-9).unwrap() > 1e9);
        assert!(sigma_from_lambda(1.0).is_err());
        assert!(sigma_from_lambda(0.5).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0.9, 1.0, 1, 10).is_err());
        assert!(Params::new(2.0, -1.0, 1, 10).is_err());
        assert!(Params::new(2.0, f64::NAN, 1, 10).is_err());
        assert!(Params::new(2.0, 1.0, 1, 2).is_err());
        let p = Params::new(2.0, 1.0, -3, 99).unwrap();
        assert!((p.delta() * 100.0 - PI).abs() < 1e-15);
        assert_eq!(p.n_sigma(), -3.0);
    }

    #[test]
    fn grid_nodes_are_interior_and_uniform() {
        let g = Grid::new(17).unwrap();
        assert_eq!(g.len(), 17);
        for (k, &p) in g.nodes().iter().enumerate() {
            assert!(p > 0.0 && p < PI);
            assert!(g.sin()[k] > 0.0);
            if k > 0 {
                assert!((p - g.nodes()[k - 1] - g.delta()).abs() < 1e-14);
            }
        }
        assert!(Grid::new(2).is_err());
    }

    #[test]
    fn diff1_row_sums_vanish_in_interior() {
        let g = Grid::new(20).unwrap();
        let d = diff1(&g);
        let ones = Array1::from_elem(20, 1.0);
        let r = d.dot(&ones);
        for k in 1..19 {
            assert_eq!(r[k], 0.0);
        }
        assert!(r[0] != 0.0 && r[19] != 0.0);
    }

    #[test]
    fn diff2_is_symmetric() {
        let d = diff2(&Grid::new(31).unwrap());
        assert_eq!(d, d.t());
    }

    // Oracle: analytic derivatives of sin φ and sin 2φ.
    #[test]
    fn derivative_matrices_converge_at_second_order() {
        type F = fn(f64) -> f64;
        let cases: [(F, F, F); 2] = [
            (|p| p.sin(), |p| p.cos(), |p| -p.sin()),
            (|p| (2.0 * p).sin(), |p| 2.0 * (2.0 * p).cos(), |p| -4.0 * (2.0 * p).sin()),
        ];
        for (f, df, d2f) in cases {
            let mut e1 = Vec::new();
            let mut e2 = Vec::new();
            for n in [100, 200, 400] {
                let g = Grid::new(n).unwrap();
                let h = Array1::from(g.sample(f));
                e1.push(max_err(&diff1(&g).dot(&h), &g.sample(df)));
                e2.push(max_err(&diff2(&g).dot(&h), &g.sample(d2f)));
            }
            for w in e1.windows(2).chain(e2.windows(2)) {
                let ratio = w[0] / w[1];
                assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
            }
            let g = Grid::new(400).unwrap();
            assert!(e1[2] < 2.0 * g.delta().powi(2) && e2[2] < 2.0 * g.delta().powi(2));
        }
    }

    #[test]
    fn diff2_spectrum_is_negative() {
        // Tridiagonal Toeplitz: eigenvalues −(4/δ²) sin²(jπ/(2(N+1))).
        let g = Grid::new(12).unwrap();
        let d = diff2(&g);
        use ndarray_linalg::EigVals;
        let ev = d.eigvals().unwrap();
        for e in ev.iter() {
            assert!(e.im.abs() < 1e-10 && e.re < 0.0);
        }
    }
}
