//! Subcommand bodies. Each writes its human-readable summary to `stdout` and
//! returns `Ok` on exit code 0.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use landau_core::asymptotics::{mu2_pipeline, sampled_d_a_psi, BorderedSolution};
use landau_core::eigensolve::kernel_alignment;
use landau_core::operators::kernel_residual;
use landau_core::LandauParam;
use serde_json::json;

use crate::cache::{self, Cache};
use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::reference;
use crate::report::fmt17;
use crate::sweep::{run_sweep, SweepSpec};
use crate::tables::run_table;

/// Residual level above which a bordered solve is flagged in the diagnostics.
pub const RESIDUAL_CERTIFICATE: f64 = 1e-8;

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(CliError::io(path))
}

fn say(stdout: &mut impl Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    stdout.write_fmt(text).map_err(CliError::io("<stdout>"))
}

/// Where `--svg` writes: next to `--out` if given, else `spectrum.svg`.
pub fn svg_path(out: Option<&Path>) -> PathBuf {
    out.map_or_else(|| PathBuf::from("spectrum.svg"), |p| p.with_extension("svg"))
}

pub fn spectrum(config: &RunConfig, cache: Option<&Cache>, stdout: &mut impl Write) -> Result<()> {
    let params = config.params()?;
    let (report, _) = cache::report(cache, config.op, &params, config.form)?;
    say(
        stdout,
        format_args!(
            "min_real = {:.10e}\nsecond_min_real = {:.10e}\nmax_abs_imag = {:.10e}\n",
            report.min_real, report.second_min_real, report.max_abs_imag
        ),
    )?;
    if let Some(out) = &config.out {
        let body = match config.format {
            OutputFormat::Json => report.to_json(),
            OutputFormat::Csv => report.to_csv(),
        };
        write_file(out, &body)?;
    }
    if config.svg {
        write_file(&svg_path(config.out.as_deref()), &report.to_svg())?;
    }
    Ok(())
}

pub fn table(
    id: u8,
    cache: Option<&Cache>,
    jobs: usize,
    format: OutputFormat,
    out: Option<&Path>,
    stdout: &mut impl Write,
) -> Result<()> {
    let t = reference::table(id).ok_or_else(|| CliError::Invalid(format!("no table {id} (expected 1 to 6)")))?;
    let run = run_table(t, cache, jobs)?;
    say(stdout, format_args!("{}", run.render_diff()))?;
    if let Some(out) = out {
        let body = match format {
            OutputFormat::Csv => run.to_csv(),
            OutputFormat::Json => {
                let cells: Vec<_> = run
                    .cells
                    .iter()
                    .map(|c| {
                        json!({
                            "row": c.row,
                            "a": c.column,
                            "reference": c.reference,
                            "computed": c.computed.as_ref().ok(),
                            "verdict": format!("{:?}", c.verdict).to_lowercase(),
                        })
                    })
                    .collect();
                serde_json::to_string_pretty(&json!({"table": id, "cells": cells})).expect("serializes") + "\n"
            }
        };
        write_file(out, &body)?;
    }
    run.outcome()
}

pub fn kernel(a: f64, nodes: usize, format: OutputFormat, out: Option<&Path>, stdout: &mut impl Write) -> Result<()> {
    let residual = kernel_residual(a, nodes)?;
    let k = kernel_alignment(a, nodes)?;
    say(
        stdout,
        format_args!(
            "residual_all_nodes = {:.6e}\nresidual_interior = {:.6e}\nkernel_eigenvalue = {:.10e} {:+.10e}i\ncos_angle_unweighted = {:.10}\ncos_angle_sin_weighted = {:.10}\n",
            residual.all_nodes, residual.interior, k.value.re, k.value.im, k.cos_unweighted, k.cos_sin_weighted
        ),
    )?;
    if let Some(out) = out {
        let body = match format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(&json!({
                    "a": a,
                    "N": nodes,
                    "residual_all_nodes": residual.all_nodes,
                    "residual_interior": residual.interior,
                    "kernel_eigenvalue": [k.value.re, k.value.im],
                    "cos_angle_unweighted": k.cos_unweighted,
                    "cos_angle_sin_weighted": k.cos_sin_weighted,
                }))
                .expect("serializes")
                    + "\n"
            }
            OutputFormat::Csv => format!(
                "a,N,residual_all_nodes,residual_interior,kernel_eigenvalue_re,kernel_eigenvalue_im,cos_angle_unweighted,cos_angle_sin_weighted\n{},{},{},{},{},{},{},{}\n",
                fmt17(a),
                nodes,
                fmt17(residual.all_nodes),
                fmt17(residual.interior),
                fmt17(k.value.re),
                fmt17(k.value.im),
                fmt17(k.cos_unweighted),
                fmt17(k.cos_sin_weighted)
            ),
        };
        write_file(out, &body)?;
    }
    Ok(())
}

fn diagnostics(stdout: &mut impl Write, name: &str, s: &BorderedSolution, psi: &[f64]) -> Result<()> {
    let rel = s.relative_residual();
    let flag = if rel <= RESIDUAL_CERTIFICATE { "" } else { "  (above 1e-8)" };
    say(
        stdout,
        format_args!(
            "{name}: mu = {:.10e}, relative_residual = {:.3e}{flag}, orthogonality = {:.3e}, rcond = {:.3e}\n",
            s.mu,
            rel,
            s.orthogonality_defect(psi),
            s.rcond
        ),
    )
}

pub fn mu2(a: f64, nodes: usize, format: OutputFormat, out: Option<&Path>, stdout: &mut impl Write) -> Result<()> {
    let pipeline = mu2_pipeline(a, nodes)?;
    let psi = sampled_d_a_psi(LandauParam::new(a)?, nodes)?;
    say(stdout, format_args!("re_mu2 = {:.10e}\n", pipeline.mu2))?;
    diagnostics(stdout, "first_order", &pipeline.first_order, &psi)?;
    diagnostics(stdout, "second_order", &pipeline.second_order, &psi)?;
    if let Some(out) = out {
        let body = match format {
            OutputFormat::Json => serde_json::to_string_pretty(&pipeline).expect("serializes") + "\n",
            OutputFormat::Csv => format!("N,{}\n{},{}\n", a, nodes, fmt17(pipeline.mu2)),
        };
        write_file(out, &body)?;
    }
    Ok(())
}

pub fn sweep(
    spec: &SweepSpec,
    cache: &Cache,
    jobs: usize,
    out: Option<&Path>,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> Result<()> {
    let outcome = run_sweep(spec, cache, jobs)?;
    let csv = outcome.to_csv();
    match out {
        Some(path) => write_file(path, &csv)?,
        None => say(stdout, format_args!("{csv}"))?,
    }
    for r in outcome.rows.iter().filter(|r| r.result.is_err()) {
        let _ = writeln!(stderr, "failed {}: {}", r.params, r.result.as_ref().unwrap_err());
    }
    let _ = writeln!(
        stderr,
        "{} tuples: {} solved, {} from cache, {} failed",
        outcome.rows.len(),
        outcome.computed,
        outcome.cached,
        outcome.rows.len() - outcome.succeeded()
    );
    if outcome.succeeded() == 0 {
        return Err(CliError::Solver("every sweep tuple failed".into()));
    }
    Ok(())
}
