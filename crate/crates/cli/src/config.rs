//! Run configuration: command-line values layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use landau_core::eigensolve::SpectralForm;
use landau_core::Params;

use crate::error::{CliError, Result};

/// Keys accepted in a config file; they mirror the long flag names.
pub const KNOWN_KEYS: &[&str] = &[
    "op", "n", "a", "sigma", "N", "form", "format", "out", "svg", "jobs", "cache", "id",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// Stream operator.
    L,
    /// Swirl operator.
    M,
}

impl FromStr for Op {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(Op::L),
            "M" => Ok(Op::M),
            other => Err(CliError::Invalid(format!("unknown operator `{other}` (expected L or M)"))),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::L => "L",
            Op::M => "M",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Invalid(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Parsed `key = value` file. Blank lines and lines starting with `#` are
/// skipped; unknown or repeated keys are rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("config line {}: expected `key = value`", i + 1)))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Invalid(format!("config line {}: unknown key `{key}`", i + 1)));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::Invalid(format!("config line {}: repeated key `{key}`", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Loads `path` if given, otherwise an empty file.
    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.raw(key)
            .map(|v| v.split(',').map(|item| parse_value(key, item.trim())).collect())
            .transpose()
    }

    /// The command-line value if present, else the file value.
    pub fn layer<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn layer_list<T: FromStr>(&self, cli: Vec<T>, key: &str) -> Result<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        if !cli.is_empty() {
            return Ok(cli);
        }
        Ok(self.get_list(key)?.unwrap_or_default())
    }

    pub fn layer_flag(&self, cli: bool, key: &str) -> Result<bool> {
        Ok(cli || self.get::<bool>(key)?.unwrap_or(false))
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Invalid(format!("bad value `{value}` for `{key}`: {e}")))
}

pub fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Invalid(format!("missing required value `{key}`")))
}

/// Values for a single-spectrum run, as given on the command line.
#[derive(Clone, Debug, Default)]
pub struct RunOverrides {
    pub op: Option<Op>,
    pub n: Option<i32>,
    pub a: Option<f64>,
    pub sigma: Option<f64>,
    pub nodes: Option<usize>,
    pub form: Option<SpectralForm>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub svg: bool,
}

/// Fully resolved single-spectrum run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub op: Op,
    pub n: i32,
    pub a: f64,
    pub sigma: f64,
    pub nodes: usize,
    pub form: SpectralForm,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub svg: bool,
}

impl RunConfig {
    /// Command-line values win over file values; `a` and `N` have no default.
    pub fn resolve(cli: RunOverrides, file: &ConfigFile) -> Result<Self> {
        let config = Self {
            op: file.layer(cli.op, "op")?.unwrap_or(Op::L),
            n: file.layer(cli.n, "n")?.unwrap_or(0),
            a: required(file.layer(cli.a, "a")?, "a")?,
            sigma: file.layer(cli.sigma, "sigma")?.unwrap_or(0.0),
            nodes: required(file.layer(cli.nodes, "N")?, "N")?,
            form: file.layer(cli.form, "form")?.unwrap_or(SpectralForm::Reduced),
            format: file.layer(cli.format, "format")?.unwrap_or(OutputFormat::Json),
            out: file.layer(cli.out, "out")?,
            svg: file.layer_flag(cli.svg, "svg")?,
        };
        config.params()?;
        Ok(config)
    }

    pub fn params(&self) -> Result<Params> {
        check_form(self.op, self.form)?;
        Ok(Params::new(self.a, self.sigma, self.n, self.nodes)?)
    }
}

/// The pencil formulation exists only for the stream operator.
pub fn check_form(op: Op, form: SpectralForm) -> Result<()> {
    if op == Op::M && form == SpectralForm::Generalized {
        return Err(CliError::Invalid("the generalized form applies to operator L only".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_fill_gaps_and_flags_win() {
        let file = ConfigFile::parse("# run\na = 2\nN = 64\nop = M\nsigma = 1.5\n\nsvg = true\n").unwrap();
        let cli = RunOverrides {
            a: Some(3.0),
            ..Default::default()
        };
        let c = RunConfig::resolve(cli, &file).unwrap();
        assert_eq!((c.a, c.nodes, c.op, c.sigma, c.svg), (3.0, 64, Op::M, 1.5, true));
        assert_eq!(c.form, SpectralForm::Reduced);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(ConfigFile::parse("a 2").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("a = 2\na = 3").is_err());
        let file = ConfigFile::parse("N = many").unwrap();
        assert!(file.get::<usize>("N").is_err());
    }

    #[test]
    fn lists_split_on_commas() {
        let file = ConfigFile::parse("a = 1.1, 2,10").unwrap();
        assert_eq!(file.get_list::<f64>("a").unwrap(), Some(vec![1.1, 2.0, 10.0]));
        assert_eq!(file.layer_list(vec![5.0], "a").unwrap(), vec![5.0]);
    }

    #[test]
    fn invalid_params_are_caught_before_compute() {
        let file = ConfigFile::default();
        let base = RunOverrides {
            a: Some(2.0),
            nodes: Some(10),
            ..Default::default()
        };
        assert!(RunConfig::resolve(base.clone(), &file).is_ok());
        let bad_a = RunOverrides { a: Some(1.0), ..base.clone() };
        assert_eq!(RunConfig::resolve(bad_a, &file).unwrap_err().exit_code(), 2);
        let missing = RunOverrides { nodes: None, ..base.clone() };
        assert_eq!(RunConfig::resolve(missing, &file).unwrap_err().exit_code(), 2);
        let pencil_m = RunOverrides {
            op: Some(Op::M),
            form: Some(SpectralForm::Generalized),
            ..base
        };
        assert_eq!(RunConfig::resolve(pencil_m, &file).unwrap_err().exit_code(), 2);
    }
}
