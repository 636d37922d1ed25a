//! Linearized Navier-Stokes operators around the Landau solutions, restricted
//! to a single Fourier mode in the similarity variable `τ = ln ρ`.
//!
//! The stream operator `𝔏ₙ = (Aₙ + Bₙ)Aₙ + Cₙ` and the swirl operator
//! `ℳₙ = Aₙ + Eₙ` act on functions of the polar angle `φ ∈ (0, π)`. This crate
//! discretizes them with second-order central differences on a uniform interior
//! grid, computes their spectra (standard and block-pencil forms), runs the
//! small-σ perturbation pipeline for the eigenvalue that bifurcates from the
//! kernel of `𝔏₀`, and checks the positivity of the swirl quadratic form.
//!
//! Modules, bottom up:
//!
//! - [`landau`]: closed-form Landau profile functions.
//! - [`grid`]: parameters, interior grid, difference matrices.
//! - [`operators`]: dense assembly of `Aₙ, Bₙ, Cₙ, Eₙ, 𝔏ₙ, ℳₙ` and the
//!   `σ`-expansion terms, plus the `z = cos φ` form of `𝔏₀`.
//! - [`eigensolve`]: spectra and their scalar diagnostics.
//! - [`asymptotics`]: bordered solves and `Re μ₂`.
//! - [`swirl`]: quadratic form and weight-symmetry checks for `ℳₙ`.

#![deny(unsafe_code)]

mod band;
mod error;
mod linalg;

pub mod asymptotics;
pub mod eigensolve;
pub mod grid;
pub mod landau;
pub mod operators;
pub mod swirl;

pub use error::{Error, Result};
pub use grid::{Grid, Params};
pub use landau::{LandauParam, PolarAngle};
pub use num_complex::Complex64;

/// Complex scalar used by every assembled matrix.
pub type C64 = num_complex::Complex64;
