//! Closed-form profile functions of the Landau family `Uᵃ`, `a > 1`.
//!
//! Everything here is a pointwise evaluation in double precision. The
//! coefficient functions that carry `cot φ` or `1/sin² φ` live in
//! [`crate::operators`] and are only evaluated at interior grid nodes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest admissible distance of `a` from 1. Closer values lose all digits in
/// `a − cos φ` near `φ = 0`.
pub const A_MARGIN: f64 = 1e-12;

/// Landau parameter `a > 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LandauParam(f64);

impl LandauParam {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 1.0 + A_MARGIN {
            Ok(Self(a))
        } else {
            Err(Error::InvalidLandauParam { a })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `a² − 1`.
    #[inline]
    pub(crate) fn k(self) -> f64 {
        self.0 * self.0 - 1.0
    }

    /// Stream function profile `Ψ = 2 sin φ / (a − cos φ)`.
    pub fn psi(self, phi: PolarAngle) -> f64 {
        let (s, c) = phi.0.sin_cos();
        2.0 * s / (self.0 - c)
    }

    /// `∂ₐΨ = −2 sin φ / (a − cos φ)²`, the kernel direction of `𝔏₀`.
    pub fn d_a_psi(self, phi: PolarAngle) -> f64 {
        let (s, c) = phi.0.sin_cos();
        let w = self.0 - c;
        -2.0 * s / (w * w)
    }

    /// `Ũ = ρU` as `(Ũ_τ, Ũ_φ)`.
    pub fn u_tilde(self, phi: PolarAngle) -> (f64, f64) {
        let (s, c) = phi.0.sin_cos();
        let w = self.0 - c;
        (2.0 * (self.k() / (w * w) - 1.0), -2.0 * s / w)
    }

    /// `AΨ = 4(a² − 1) sin φ / (a − cos φ)³`.
    pub fn a_psi(self, phi: PolarAngle) -> f64 {
        let (s, c) = phi.0.sin_cos();
        let w = self.0 - c;
        4.0 * self.k() * s / (w * w * w)
    }

    /// Strength of the point force that drives `Uᵃ`:
    /// `β₀ = 16π (a + (a²/2) ln((a−1)/(a+1)) + 4a / (3(a²−1)))`.
    ///
    /// For large `a` the first two terms cancel to `O(1/a)`; there the
    /// logarithm is replaced by its `atanh` series.
    pub fn beta0(self) -> f64 {
        let a = self.0;
        let head = if a > 4.0 {
            // a + (a²/2)·(−2 atanh(1/a)) = −Σ_{j≥1} a^{1−2j}/(2j+1)
            let x = 1.0 / a;
            let x2 = x * x;
            let mut term = x;
            let mut sum = 0.0;
            for j in 1..60 {
                let add = term / (2 * j + 1) as f64;
                sum += add;
                if add.abs() < 1e-18 * sum.abs() {
                    break;
                }
                term *= x2;
            }
            -sum
        } else {
            a + 0.5 * a * a * (-2.0 / (a + 1.0)).ln_1p()
        };
        16.0 * PI * (head + 4.0 * a / (3.0 * self.k()))
    }

    /// `f₀(z) = 2(1 − z²)/(a − z)`, i.e. `Ψ sin φ` in the variable `z = cos φ`.
    pub fn f0(self, z: f64) -> f64 {
        2.0 * (1.0 - z * z) / (self.0 - z)
    }

    /// `H₀(z) = −2(1 − z²)/(a − z)²`, the kernel of the `z`-form operator.
    pub fn h0(self, z: f64) -> f64 {
        let w = self.0 - z;
        -2.0 * (1.0 - z * z) / (w * w)
    }

    /// Derivative of [`Self::h0`] in `z`.
    pub fn h0_prime(self, z: f64) -> f64 {
        let w = self.0 - z;
        // d/dz [−2(1−z²)(a−z)⁻²] = 4z/(a−z)² − 4(1−z²)/(a−z)³
        4.0 * z / (w * w) - 4.0 * (1.0 - z * z) / (w * w * w)
    }
}

impl TryFrom<f64> for LandauParam {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<LandauParam> for f64 {
    fn from(a: LandauParam) -> f64 {
        a.0
    }
}

/// Polar angle `φ ∈ [0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PolarAngle(f64);

impl PolarAngle {
    pub fn new(phi: f64) -> Result<Self> {
        if (0.0..=PI).contains(&phi) {
            Ok(Self(phi))
        } else {
            Err(Error::InvalidAngle { phi })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `z = cos φ`.
    #[inline]
    pub fn z(self) -> f64 {
        self.0.cos()
    }
}
