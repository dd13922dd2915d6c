//! Command-line front end: configuration, table-producing subcommands and
//! verification suites.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CommandError, Output};
use config::{ConfigError, Method, Num, RunConfig};
use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "nlosc", version, about = "Spectra, spacing functions and thermal sums of nonlinear oscillators")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the table (or report) here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Quartic coupling, decimal or `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<Num>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Inverse temperatures in units of 1/epsilon0, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub beta: Option<Vec<Num>>,
    /// Energy grid for `lambda` and `fdlie`, comma separated.
    #[arg(long = "e", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub e_grid: Option<Vec<Num>>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<Method>,
    /// Oracle convergence and thermal tail tolerance.
    #[arg(long, global = true)]
    pub tol: Option<Num>,
    /// Let the oracle diagonalize a negative coupling.
    #[arg(long, global = true)]
    pub allow_negative_oracle: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels from each available method.
    Spectrum {
        /// Also write the semiclassical ladder table here.
        #[arg(long, value_name = "PATH")]
        ladder_out: Option<PathBuf>,
    },
    /// Spacing function on the energy grid.
    Lambda,
    /// Partition function, averages and identity residuals per beta.
    Thermal {
        /// Append the classical phase-space partition function.
        #[arg(long)]
        classical: bool,
    },
    /// Converged Fock-basis eigenvalues.
    Oracle,
    /// Finite-difference Lie operator residuals on the energy grid.
    Fdlie,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Lambda => "lambda",
            Command::Thermal { .. } => "thermal",
            Command::Oracle => "oracle",
            Command::Fdlie => "fdlie",
            Command::Verify { .. } => "verify",
        }
    }
}

/// The configuration after applying command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(k) = cli.kappa {
        cfg.oscillator.kappa = k;
    }
    if let Some(n) = cli.n_max {
        cfg.n_max = n;
    }
    if let Some(b) = &cli.beta {
        cfg.beta = b.clone();
    }
    if let Some(e) = &cli.e_grid {
        cfg.e_grid = e.clone();
    }
    if let Some(m) = cli.method {
        cfg.method = m;
    }
    if let Some(t) = cli.tol {
        cfg.tolerances.oracle = t;
        cfg.tolerances.thermal_tail = t;
    }
    if cli.allow_negative_oracle {
        cfg.allow_negative_oracle = true;
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.display().to_string());
    }
    if let Command::Spectrum { ladder_out: Some(p) } = &cli.command {
        cfg.output.ladder = Some(p.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, path: Option<&str>, out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };

    if let Command::Verify { suite } = cli.command {
        let report = verify::run(suite);
        let path = cli.out.as_ref().map(|p| p.display().to_string());
        if let Err(e) = emit(report.text(), path.as_deref(), out) {
            let _ = writeln!(err, "error: cannot write report: {e}");
            return EXIT_COMPUTATION;
        }
        return if report.is_green() { EXIT_OK } else { EXIT_VERIFICATION };
    }

    let cfg = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let result: Result<Output, CommandError> = match &cli.command {
        Command::Spectrum { .. } => commands::spectrum(&cfg),
        Command::Lambda => commands::lambda(&cfg),
        Command::Thermal { classical } => commands::thermal(&cfg, *classical),
        Command::Oracle => commands::oracle(&cfg),
        Command::Fdlie => commands::fdlie(&cfg),
        Command::Verify { .. } => unreachable!("handled above"),
    };
    let o = match result {
        Ok(o) => o,
        Err(e @ CommandError::Config(_)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_COMPUTATION;
        }
    };
    let mut text = output::header(cli.command.name(), &cfg, &o.warnings, &o.notes);
    text.push_str(&o.table.to_csv());
    for (path, contents) in &o.extra {
        if let Err(e) = std::fs::write(path, contents) {
            let _ = writeln!(err, "error: cannot write {path}: {e}");
            return EXIT_COMPUTATION;
        }
    }
    if let Err(e) = emit(&text, cfg.output.path.as_deref(), out) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_COMPUTATION;
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_to_the_config() {
        let cli = Cli::try_parse_from(["nlosc", "--kappa", "-1/20", "--beta", "1,1/2", "--tol", "1e-8", "thermal"]).unwrap();
        let cfg = resolve_config(&cli).unwrap();
        assert_eq!(cfg.kappa(), -0.05);
        assert_eq!(cfg.beta.len(), 2);
        assert_eq!(cfg.tolerances.oracle.value(), 1e-8);
        assert_eq!(cfg.tolerances.thermal_tail.value(), 1e-8);
    }

    #[test]
    fn clap_errors_are_config_errors() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["nlosc", "spectrum", "--n-max", "x"], &mut o, &mut e), EXIT_CONFIG);
        assert!(!e.is_empty());
    }
}
