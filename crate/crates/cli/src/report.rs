//! Serialized spectral reports: JSON, `re,im` CSV and an SVG scatter.

use std::fmt::Write as _;

use landau_core::eigensolve::{
    cosine_angle_complex, cosine_angle_weighted, spectrum_generalized, spectrum_reduced,
    SpectralForm, SpectralReport,
};
use landau_core::operators::{assemble_l, assemble_m, ModeBlocks};
use landau_core::swirl::SwirlRow;
use landau_core::{Grid, Params};
use serde::{Deserialize, Serialize};

use crate::config::{check_form, Op};
use crate::error::Result;

/// Round-trip formatting: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub a: f64,
    pub sigma: f64,
    pub n: i32,
    #[serde(rename = "N")]
    pub nodes: usize,
    pub form: SpectralForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearestZeroReport {
    pub value: [f64; 2],
    pub cos_angle_unweighted: f64,
    pub cos_angle_sin_weighted: f64,
}

/// One spectrum in the on-disk schema. Cosines compare the nearest-zero
/// eigenvector with the sampled `∂ₐΨ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub params: ReportParams,
    pub eigenvalues: Vec<[f64; 2]>,
    pub min_real: f64,
    pub second_min_real: f64,
    pub max_abs_imag: f64,
    pub nearest_zero: NearestZeroReport,
}

impl JsonReport {
    pub fn compute(op: Op, params: &Params, form: SpectralForm) -> Result<Self> {
        check_form(op, form)?;
        let grid = Grid::for_params(params);
        let spectrum = match (op, form) {
            (Op::L, SpectralForm::Reduced) => spectrum_reduced(&assemble_l(params, &grid))?,
            (Op::L, SpectralForm::Generalized) => {
                spectrum_generalized(&ModeBlocks::assemble(params, &grid))?
            }
            (Op::M, _) => spectrum_reduced(&assemble_m(params, &grid))?,
        };
        Self::from_spectrum(&spectrum, &grid)
    }

    pub fn from_spectrum(s: &SpectralReport, grid: &Grid) -> Result<Self> {
        let psi = grid.d_a_psi(s.params.a);
        let v = &s.nearest_zero.vector;
        Ok(Self {
            params: ReportParams {
                a: s.params.a.get(),
                sigma: s.params.sigma,
                n: s.params.n,
                nodes: s.params.nodes,
                form: s.form,
            },
            eigenvalues: s.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            min_real: s.min_real,
            second_min_real: s.second_min_real,
            max_abs_imag: s.max_abs_imag,
            nearest_zero: NearestZeroReport {
                value: [s.nearest_zero.value.re, s.nearest_zero.value.im],
                cos_angle_unweighted: cosine_angle_complex(v, &psi)?,
                cos_angle_sin_weighted: cosine_angle_weighted(v, &psi, grid.sin())?,
            },
        })
    }

    pub fn nearest_zero_abs(&self) -> f64 {
        let [re, im] = self.nearest_zero.value;
        re.hypot(im)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for [re, im] in &self.eigenvalues {
            let _ = writeln!(out, "{},{}", fmt17(*re), fmt17(*im));
        }
        out
    }

    /// Eigenvalue scatter on `asinh` axes, which keeps clouds spanning many
    /// decades readable; the nearest-zero eigenvalue is drawn in red.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 480.0;
        const PAD: f64 = 48.0;
        let tx = |z: &[f64; 2]| (z[0].asinh(), z[1].asinh());
        let points: Vec<(f64, f64)> = self.eigenvalues.iter().map(tx).collect();
        let span = |f: fn(&(f64, f64)) -> f64| {
            let lo = points.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            if hi - lo < 1e-12 {
                (lo - 1.0, hi + 1.0)
            } else {
                (lo, hi)
            }
        };
        let (x0, x1) = span(|p| p.0);
        let (y0, y1) = span(|p| p.1);
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

        let p = &self.params;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let _ = writeln!(
            svg,
            r#"<text x="{PAD}" y="30" font-family="sans-serif" font-size="14">a={} sigma={} n={} N={} ({})</text>"#,
            p.a, p.sigma, p.n, p.nodes, p.form
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">asinh Re</text>"#,
            W / 2.0,
            H - 12.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">asinh Im</text>"#,
            H / 2.0,
            H / 2.0
        );
        for (x, y) in &points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
                sx(*x),
                sy(*y)
            );
        }
        let (zx, zy) = tx(&self.nearest_zero.value);
        let _ = writeln!(
            svg,
            r#"<circle class="nearest-zero" cx="{:.2}" cy="{:.2}" r="6" fill="none" stroke="red" stroke-width="2"/>"#,
            sx(zx),
            sy(zy)
        );
        svg.push_str("</svg>\n");
        svg
    }
}

/// Swirl positivity sweep rows.
pub fn swirl_csv(rows: &[SwirlRow]) -> String {
    let mut out = String::from("a,sigma,n,min_real,min_abs\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt17(r.a),
            fmt17(r.sigma),
            r.n,
            fmt17(r.min_real),
            fmt17(r.min_abs)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> JsonReport {
        let p = Params::new(2.0, 1.0, 1, 12).unwrap();
        JsonReport::compute(Op::L, &p, SpectralForm::Reduced).unwrap()
    }

    #[test]
    fn json_schema_keys() {
        let v: serde_json::Value = serde_json::from_str(&small().to_json()).unwrap();
        for key in ["params", "eigenvalues", "min_real", "second_min_real", "max_abs_imag", "nearest_zero"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for key in ["a", "sigma", "n", "N", "form"] {
            assert!(v["params"].get(key).is_some(), "{key}");
        }
        for key in ["value", "cos_angle_unweighted", "cos_angle_sin_weighted"] {
            assert!(v["nearest_zero"].get(key).is_some(), "{key}");
        }
        assert_eq!(v["params"]["form"], "reduced");
        assert_eq!(v["eigenvalues"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let r = small();
        let back: JsonReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_has_seventeen_digits() {
        let csv = small().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("re,im"));
        let first = lines.next().unwrap();
        let re = first.split(',').next().unwrap();
        let mantissa = re.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.replace('.', "").len(), 17);
        assert_eq!(csv.lines().count(), 13);
    }

    #[test]
    fn svg_marks_nearest_zero() {
        let svg = small().to_svg();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("class=\"nearest-zero\"").count(), 1);
        assert_eq!(svg.matches("fill=\"steelblue\"").count(), 12);
    }

    #[test]
    fn fmt17_round_trips() {
        for x in [0.1, -1.6395e-4, 6272600.0, f64::MIN_POSITIVE] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }
}
