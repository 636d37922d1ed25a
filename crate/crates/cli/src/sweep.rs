//! Cartesian parameter sweeps through the report cache.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use landau_core::eigensolve::SpectralForm;
use landau_core::Params;
use rayon::prelude::*;

use crate::cache::Cache;
use crate::config::{check_form, Op};
use crate::error::{CliError, Result};
use crate::report::fmt17;

pub const CSV_HEADER: &str = "a,sigma,n,N,min_real,second_min_real,max_abs_imag,nearest_zero_abs,status";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub op: Op,
    pub form: SpectralForm,
    pub a: Vec<f64>,
    pub sigma: Vec<f64>,
    pub n: Vec<i32>,
    pub nodes: Vec<usize>,
}

impl SweepSpec {
    /// Every tuple, validated up front so that a bad grid fails before any solve.
    pub fn tuples(&self) -> Result<Vec<Params>> {
        check_form(self.op, self.form)?;
        for (name, len) in [("a", self.a.len()), ("sigma", self.sigma.len()), ("n", self.n.len()), ("N", self.nodes.len())] {
            if len == 0 {
                return Err(CliError::Invalid(format!("sweep needs at least one value of `{name}`")));
            }
        }
        let mut out = Vec::new();
        for &a in &self.a {
            for &sigma in &self.sigma {
                for &n in &self.n {
                    for &nodes in &self.nodes {
                        out.push(Params::new(a, sigma, n, nodes)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub min_real: f64,
    pub second_min_real: f64,
    pub max_abs_imag: f64,
    pub nearest_zero_abs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub params: Params,
    pub result: std::result::Result<Summary, String>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    /// Sorted by `(a, σ, n, N)`.
    pub rows: Vec<SweepRow>,
    /// Tuples that needed an eigensolve.
    pub computed: usize,
    pub cached: usize,
}

pub fn run_sweep(spec: &SweepSpec, cache: &Cache, jobs: usize) -> Result<SweepOutcome> {
    let tuples = spec.tuples()?;
    let computed = AtomicUsize::new(0);
    let cached = AtomicUsize::new(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        tuples
            .par_iter()
            .map(|p| {
                let result = cache
                    .get_or_compute(spec.op, p, spec.form)
                    .map(|(r, hit)| {
                        let counter = if hit { &cached } else { &computed };
                        counter.fetch_add(1, Ordering::Relaxed);
                        Summary {
                            min_real: r.min_real,
                            second_min_real: r.second_min_real,
                            max_abs_imag: r.max_abs_imag,
                            nearest_zero_abs: r.nearest_zero_abs(),
                        }
                    })
                    .map_err(|e| e.to_string());
                SweepRow { params: *p, result }
            })
            .collect()
    });
    rows.sort_by(|x, y| {
        let (p, q) = (&x.params, &y.params);
        p.a.get()
            .total_cmp(&q.a.get())
            .then(p.sigma.total_cmp(&q.sigma))
            .then(p.n.cmp(&q.n))
            .then(p.nodes.cmp(&q.nodes))
    });
    Ok(SweepOutcome {
        rows,
        computed: computed.into_inner(),
        cached: cached.into_inner(),
    })
}

impl SweepOutcome {
    pub fn succeeded(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_ok()).count()
    }

    /// Failed rows keep their coordinates, leave the numbers empty and carry
    /// `failed` in the status column.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            let p = &r.params;
            let _ = write!(out, "{},{},{},{},", fmt17(p.a.get()), fmt17(p.sigma), p.n, p.nodes);
            match &r.result {
                Ok(s) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},ok",
                        fmt17(s.min_real),
                        fmt17(s.second_min_real),
                        fmt17(s.max_abs_imag),
                        fmt17(s.nearest_zero_abs)
                    );
                }
                Err(_) => out.push_str(",,,,failed\n"),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SweepSpec {
        SweepSpec {
            op: Op::L,
            form: SpectralForm::Reduced,
            a: vec![2.0, 1.5],
            sigma: vec![0.5],
            n: vec![1, 0],
            nodes: vec![12],
        }
    }

    #[test]
    fn rows_are_sorted_and_rerun_hits_the_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let first = run_sweep(&spec(), &cache, 2).unwrap();
        assert_eq!((first.computed, first.cached), (4, 0));
        let a: Vec<(f64, i32)> = first.rows.iter().map(|r| (r.params.a.get(), r.params.n)).collect();
        assert_eq!(a, vec![(1.5, 0), (1.5, 1), (2.0, 0), (2.0, 1)]);
        let again = run_sweep(&spec(), &cache, 1).unwrap();
        assert_eq!((again.computed, again.cached), (0, 4));
        assert_eq!(first.to_csv(), again.to_csv());
    }

    #[test]
    fn invalid_grid_is_rejected_before_any_solve() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("never"));
        let mut s = spec();
        s.a.push(0.5);
        assert_eq!(run_sweep(&s, &cache, 1).unwrap_err().exit_code(), 2);
        s.a.clear();
        assert_eq!(run_sweep(&s, &cache, 1).unwrap_err().exit_code(), 2);
        assert!(!cache.dir().exists());
    }

    #[test]
    fn csv_header_and_status() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_sweep(&spec(), &Cache::new(dir.path()), 1).unwrap();
        let csv = out.to_csv();
        assert_eq!(csv.lines().next(), Some(CSV_HEADER));
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",ok") && l.split(',').count() == 9));
    }
}
