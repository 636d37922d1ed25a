//! Recomputes reference tables and diffs them against the printed values.

use std::fmt::Write as _;

use landau_core::asymptotics::mu2_pipeline;
use landau_core::eigensolve::{kernel_alignment, SpectralForm};
use landau_core::Params;
use rayon::prelude::*;

use crate::cache::{self, Cache};
use crate::config::Op;
use crate::error::{CliError, Result};
use crate::reference::{policy, printed_half_unit, Policy, Quantity, ReferenceTable, RowCoords};
use crate::report::fmt17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not gated.
    Info,
    /// The computation itself failed.
    Error,
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Info => "info",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CellResult {
    pub row: &'static str,
    pub column: &'static str,
    pub reference: &'static str,
    pub computed: std::result::Result<f64, String>,
    pub policy: Policy,
    pub verdict: Verdict,
}

impl CellResult {
    pub fn relative_error(&self) -> Option<f64> {
        let r: f64 = self.reference.parse().ok()?;
        let c = self.computed.as_ref().ok()?;
        Some((c - r) / r.abs())
    }
}

#[derive(Debug)]
pub struct TableRun {
    pub table: &'static ReferenceTable,
    pub cells: Vec<CellResult>,
}

/// Value of one table quantity at `(a, row)`, through the cache if given.
pub fn cell_value(quantity: Quantity, a: f64, row: RowCoords, cache: Option<&Cache>) -> Result<f64> {
    match quantity {
        Quantity::Mu2 => return Ok(mu2_pipeline(a, row.nodes)?.mu2),
        Quantity::Cosine => return Ok(kernel_alignment(a, row.nodes)?.cos_unweighted),
        _ => {}
    }
    let params = Params::new(a, row.sigma, row.n, row.nodes)?;
    let (r, _) = cache::report(cache, Op::L, &params, SpectralForm::Reduced)?;
    Ok(match quantity {
        Quantity::MinReal => r.min_real,
        Quantity::SecondMinReal => r.second_min_real,
        Quantity::Cosine | Quantity::Mu2 => unreachable!(),
    })
}

pub fn judge(policy: Policy, reference: &str, computed: f64) -> Verdict {
    let r: f64 = reference.parse().expect("reference values parse");
    match policy {
        Policy::ReportOnly => Verdict::Info,
        Policy::AtLeast(bound) if computed >= bound => Verdict::Pass,
        Policy::Relative(rel) if (computed - r).abs() <= (rel * r.abs()).max(printed_half_unit(reference)) => {
            Verdict::Pass
        }
        _ => Verdict::Fail,
    }
}

/// Every cell of `table`, evaluated on at most `jobs` threads. Cell order
/// follows the table, independent of scheduling.
pub fn run_table(table: &'static ReferenceTable, cache: Option<&Cache>, jobs: usize) -> Result<TableRun> {
    let work: Vec<(usize, usize)> = (0..table.rows.len())
        .flat_map(|i| (0..table.columns.len()).map(move |j| (i, j)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let cells = pool.install(|| {
        work.par_iter()
            .map(|&(i, j)| {
                let row = &table.rows[i];
                let a: f64 = table.columns[j].parse().expect("column labels parse");
                let reference = row.values[j];
                let policy = policy(table, a, row.coords.sigma, reference.parse().expect("reference parses"));
                let computed = cell_value(table.quantity, a, row.coords, cache).map_err(|e| e.to_string());
                let verdict = match &computed {
                    Ok(v) => judge(policy, reference, *v),
                    Err(_) => Verdict::Error,
                };
                CellResult {
                    row: row.label,
                    column: table.columns[j],
                    reference,
                    computed,
                    policy,
                    verdict,
                }
            })
            .collect()
    });
    Ok(TableRun { table, cells })
}

impl TableRun {
    pub fn failures(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn errors(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.verdict == Verdict::Error)
    }

    /// Solver errors first, then tolerance failures.
    pub fn outcome(&self) -> Result<()> {
        if let Some(c) = self.errors().next() {
            return Err(CliError::Solver(format!(
                "table {} cell ({}={}, a={}): {}",
                self.table.id,
                self.table.row_key,
                c.row,
                c.column,
                c.computed.as_ref().err().map_or("", String::as_str)
            )));
        }
        let failing: Vec<String> = self
            .failures()
            .map(|c| format!("({}={}, a={})", self.table.row_key, c.row, c.column))
            .collect();
        if failing.is_empty() {
            Ok(())
        } else {
            Err(CliError::Tolerance(format!(
                "table {}: {} cell(s) outside tolerance: {}",
                self.table.id,
                failing.len(),
                failing.join(", ")
            )))
        }
    }

    pub fn render_diff(&self) -> String {
        let t = self.table;
        let mut out = format!("table {}: {}\n", t.id, t.title);
        let _ = writeln!(
            out,
            "{:<22} {:>6} {:>14} {:>16} {:>10} {:>14} verdict",
            t.row_key, "a", "reference", "computed", "rel_err", "tolerance"
        );
        for c in &self.cells {
            let computed = match &c.computed {
                Ok(v) => format!("{v:.6e}"),
                Err(_) => "-".into(),
            };
            let rel = c.relative_error().map_or("-".into(), |e| format!("{e:+.2e}"));
            let tol = match c.policy {
                Policy::Relative(r) => format!("{}%", r * 100.0),
                Policy::AtLeast(b) => format!(">= {b}"),
                Policy::ReportOnly => "report-only".into(),
            };
            let _ = writeln!(
                out,
                "{:<22} {:>6} {:>14} {:>16} {:>10} {:>14} {}",
                c.row,
                c.column,
                c.reference,
                computed,
                rel,
                tol,
                c.verdict.label()
            );
            if let Err(e) = &c.computed {
                let _ = writeln!(out, "    {e}");
            }
        }
        let count = |v: Verdict| self.cells.iter().filter(|c| c.verdict == v).count();
        let _ = writeln!(
            out,
            "{} pass, {} fail, {} report-only, {} error",
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Info),
            count(Verdict::Error)
        );
        out
    }

    /// Computed values in the printed layout: one line per row, one column per `a`.
    pub fn to_csv(&self) -> String {
        let t = self.table;
        let mut out = format!("{},{}\n", t.row_key, t.columns.join(","));
        for (i, r) in t.rows.iter().enumerate() {
            out.push_str(r.label);
            for c in &self.cells[i * t.columns.len()..(i + 1) * t.columns.len()] {
                out.push(',');
                if let Ok(v) = c.computed {
                    out.push_str(&fmt17(v));
                }
            }
            out.push('\n');
        }
        out
    }
}
