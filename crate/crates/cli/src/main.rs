use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use landau_cli::cache::Cache;
use landau_cli::config::{required, ConfigFile, Op, OutputFormat, RunConfig, RunOverrides};
use landau_cli::error::exit;
use landau_cli::sweep::SweepSpec;
use landau_cli::{commands, CliError, Result};
use landau_core::eigensolve::SpectralForm;

#[derive(Parser)]
#[command(name = "landau", version, about = "Spectra of the linearized mode operators around Landau solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum of one operator.
    Spectrum(SpectrumArgs),
    /// Recompute a reference table and diff it against the printed values.
    Table(TableArgs),
    /// Kernel residual, kernel eigenvalue and cosines for mode 0.
    Kernel(PointArgs),
    /// Second-order small-sigma coefficient and solve diagnostics.
    Mu2(PointArgs),
    /// Spectra over a Cartesian grid, cached.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Output {
    /// `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cache directory (default `.landau-cache` in the working directory).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    op: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i32>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long = "N")]
    nodes: Option<usize>,
    #[arg(long)]
    form: Option<String>,
    /// Also write an SVG scatter of the eigenvalues.
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    id: Option<u8>,
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long = "N")]
    nodes: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    op: Option<String>,
    /// Comma-separated mode numbers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    n: Vec<i32>,
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
    #[arg(long = "N", value_delimiter = ',')]
    nodes: Vec<usize>,
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    output: Output,
}

fn parse_opt<T: std::str::FromStr<Err = E>, E: Into<CliError>>(s: Option<String>) -> Result<Option<T>> {
    s.map(|v| v.parse().map_err(Into::into)).transpose()
}

struct Common {
    file: ConfigFile,
    format: OutputFormat,
    out: Option<PathBuf>,
    cache: Option<PathBuf>,
}

impl Output {
    fn resolve(self, default_format: OutputFormat) -> Result<Common> {
        let file = ConfigFile::load_optional(self.config.as_deref())?;
        let format = file.layer(parse_opt::<OutputFormat, _>(self.format)?, "format")?;
        Ok(Common {
            format: format.unwrap_or(default_format),
            out: file.layer(self.out, "out")?,
            cache: file.layer(self.cache, "cache")?,
            file,
        })
    }
}

fn jobs(cli: Option<usize>, file: &ConfigFile) -> Result<usize> {
    let j = file.layer(cli, "jobs")?.unwrap_or(1);
    if j == 0 {
        return Err(CliError::Invalid("--jobs must be at least 1".into()));
    }
    Ok(j)
}

fn run(command: Command) -> Result<()> {
    let mut stdout = io::stdout().lock();
    match command {
        Command::Spectrum(args) => {
            let common = args.output.resolve(OutputFormat::Json)?;
            let form = parse_opt::<SpectralForm, landau_core::Error>(args.form)?;
            let overrides = RunOverrides {
                op: parse_opt::<Op, _>(args.op)?,
                n: args.n,
                a: args.a,
                sigma: args.sigma,
                nodes: args.nodes,
                form,
                format: Some(common.format),
                out: common.out,
                svg: args.svg,
            };
            let config = RunConfig::resolve(overrides, &common.file)?;
            let cache = common.cache.map(Cache::new);
            commands::spectrum(&config, cache.as_ref(), &mut stdout)
        }
        Command::Table(args) => {
            let common = args.output.resolve(OutputFormat::Csv)?;
            let id = required(common.file.layer(args.id, "id")?, "id")?;
            let jobs = jobs(args.jobs, &common.file)?;
            let cache = common.cache.map(Cache::new);
            commands::table(id, cache.as_ref(), jobs, common.format, common.out.as_deref(), &mut stdout)
        }
        Command::Kernel(args) => {
            let common = args.output.resolve(OutputFormat::Json)?;
            let a = required(common.file.layer(args.a, "a")?, "a")?;
            let nodes = required(common.file.layer(args.nodes, "N")?, "N")?;
            commands::kernel(a, nodes, common.format, common.out.as_deref(), &mut stdout)
        }
        Command::Mu2(args) => {
            let common = args.output.resolve(OutputFormat::Json)?;
            let a = required(common.file.layer(args.a, "a")?, "a")?;
            let nodes = required(common.file.layer(args.nodes, "N")?, "N")?;
            commands::mu2(a, nodes, common.format, common.out.as_deref(), &mut stdout)
        }
        Command::Sweep(args) => {
            let common = args.output.resolve(OutputFormat::Csv)?;
            if common.format != OutputFormat::Csv {
                return Err(CliError::Invalid("sweeps are written as CSV".into()));
            }
            let file = &common.file;
            let spec = SweepSpec {
                op: file.layer(parse_opt::<Op, _>(args.op)?, "op")?.unwrap_or(Op::L),
                form: file
                    .layer(parse_opt::<SpectralForm, landau_core::Error>(args.form)?, "form")?
                    .unwrap_or(SpectralForm::Reduced),
                a: file.layer_list(args.a, "a")?,
                sigma: {
                    let s = file.layer_list(args.sigma, "sigma")?;
                    if s.is_empty() { vec![0.0] } else { s }
                },
                n: {
                    let n = file.layer_list(args.n, "n")?;
                    if n.is_empty() { vec![0] } else { n }
                },
                nodes: file.layer_list(args.nodes, "N")?,
            };
            let jobs = jobs(args.jobs, file)?;
            let cache = Cache::at_or_default(common.cache)?;
            commands::sweep(&spec, &cache, jobs, common.out.as_deref(), &mut stdout, &mut io::stderr())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
