use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xxchain::ground::{qcp_scan, ScanAxis};
use xxchain::model::{ChainParams, Thermal};
use xxchain::quadrature::QuadSpec;
use xxchain_cli::config::QuadTable;
use xxchain_cli::format::format_g;
use xxchain_cli::quantity::parse_list;
use xxchain_cli::{load_config, run_oracle_compare, run_point, run_sweep, CliError};

/// Thermodynamics, correlations and entanglement of the XX chain with
/// staggered coupling and field.
#[derive(Debug, Parser)]
#[command(name = "xxchain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate quantities at one parameter point.
    Point {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "T", default_value_t = 0.0)]
        temperature: f64,
        /// Comma-separated quantities, e.g. `u,m,c1_even`.
        #[arg(long = "q", value_delimiter = ',', required = true)]
        quantities: Vec<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Run a two-dimensional sweep described by a TOML file.
    Sweep {
        config: PathBuf,
        /// Overrides `sweep.output`; `-` writes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Second differences of the ground energy along one parameter.
    QcpScan {
        #[command(flatten)]
        model: ModelArgs,
        /// One of B, b, j.
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        step: f64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Compare analytic values with exact diagonalization and finite
    /// free-fermion sums.
    OracleCompare {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "T", default_value_t = 0.0)]
        temperature: f64,
        #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
        ed_sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
        ff_sizes: Vec<usize>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Parse and validate a sweep configuration without running it.
    ValidateConfig { config: PathBuf },
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long = "J", default_value_t = 1.0)]
    coupling: f64,
    #[arg(long = "j", default_value_t = 0.0, allow_negative_numbers = true)]
    alt_coupling: f64,
    #[arg(long = "B", default_value_t = 0.0, allow_negative_numbers = true)]
    field: f64,
    #[arg(long = "b", default_value_t = 0.0, allow_negative_numbers = true)]
    alt_field: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<ChainParams, CliError> {
        Ok(ChainParams::new(
            self.coupling,
            self.alt_coupling,
            self.field,
            self.alt_field,
        )?)
    }
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
}

impl QuadArgs {
    fn resolve(&self, base: QuadSpec) -> Result<QuadSpec, CliError> {
        QuadTable {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
        .resolve(base)
    }
}

/// Second differences amplify quadrature noise by `1/step²`.
fn scan_quad() -> QuadSpec {
    QuadSpec::new(1e-13, 1e-13, 200).expect("valid tolerances")
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Point {
            model,
            temperature,
            quantities,
            quad,
        } => {
            let p = model.params()?;
            let t = Thermal::temperature(temperature)?;
            let qs = parse_list(&quantities)?;
            let record = run_point(&p, t, &qs, &quad.resolve(QuadSpec::default())?);
            let mut text = qs.iter().map(|q| q.name()).collect::<Vec<_>>().join(",");
            text.push_str(",err_flags\n");
            let values: Vec<String> = record.values.iter().map(|&v| format_g(v)).collect();
            text.push_str(&values.join(","));
            text.push(',');
            text.push_str(&record.err_flags());
            text.push('\n');
            write_out(None, &text)?;
            if !record.flags.is_empty() {
                return Err(CliError::Numerical(record.err_flags()));
            }
        }
        Command::Sweep {
            config,
            output,
            threads,
        } => {
            let spec = load_config(&config)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let out = pool.install(|| run_sweep(&spec));
            write_out(output.as_ref().or(spec.output.as_ref()), &out.csv)?;
            if out.failed_rows > 0 {
                return Err(CliError::Numerical(format!(
                    "{} of {} rows carry error flags",
                    out.failed_rows,
                    spec.x.steps * spec.y.steps
                )));
            }
        }
        Command::QcpScan {
            model,
            axis,
            start,
            stop,
            step,
            quad,
        } => {
            let p = model.params()?;
            let axis: ScanAxis = axis.parse()?;
            let points = qcp_scan(&p, axis, start, stop, step, &quad.resolve(scan_quad())?)?;
            let mut text = format!("{},energy,d2e,flagged\n", axis.label());
            for pt in points {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    format_g(pt.value),
                    format_g(pt.energy),
                    format_g(pt.d2e),
                    pt.flagged as u8
                ));
            }
            write_out(None, &text)?;
        }
        Command::OracleCompare {
            model,
            temperature,
            ed_sizes,
            ff_sizes,
            quad,
        } => {
            let p = model.params()?;
            let t = Thermal::temperature(temperature)?;
            let report = run_oracle_compare(
                &p,
                t,
                &ed_sizes,
                &ff_sizes,
                &quad.resolve(QuadSpec::default())?,
            )?;
            write_out(None, &report.csv())?;
            let failed: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}:{}", c.source.name(), c.quantity))
                .collect();
            if !failed.is_empty() {
                return Err(CliError::Numerical(format!(
                    "not converging: {}",
                    failed.join(", ")
                )));
            }
        }
        Command::ValidateConfig { config } => {
            let spec = load_config(&config)?;
            println!(
                "ok: {}x{} grid over ({}, {}), {} quantities",
                spec.x.steps,
                spec.y.steps,
                spec.x.param,
                spec.y.param,
                spec.quantities.len()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xxchain: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
