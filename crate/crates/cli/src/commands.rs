//! The table-producing subcommands.

use nlosc::fdlie::{kernel_residual, lie_apply, lie_commutator, linearity_residual, product_rule_residual, RealFunction};
use nlosc::ladder::{build_spectrum, LadderError, LambdaFunction, Spectrum};
use nlosc::oracle::{converged_levels_with, OracleOptions};
use nlosc::quartic::{e_max_negative, energy_pert, groundstate_pert, lambda_pert, Validity};
use nlosc::semiclassical::{lambda_sc, EnergySurface, QuadratureConfig};
use nlosc::thermal::{
    classical_partition, partition_function, verify_avg_energy_identity, verify_kms_identity, verify_number_identity,
    ThermalError,
};
use nlosc::OscillatorSpec;
use thiserror::Error;

use crate::config::{ConfigError, Method, RunConfig, N_MAX_CAP};
use crate::output::{Cell, Table};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl CommandError {
    fn computation(e: impl std::fmt::Display) -> Self {
        CommandError::Computation(e.to_string())
    }

    fn config(m: impl Into<String>) -> Self {
        CommandError::Config(ConfigError::Invalid(m.into()))
    }
}

/// A table plus the header material and any side files.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub table: Table,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    /// `(path, contents)` written next to the main table.
    pub extra: Vec<(String, String)>,
}

fn quadrature_config(cfg: &RunConfig) -> Result<QuadratureConfig, CommandError> {
    QuadratureConfig::new(cfg.tolerances.quadrature.value(), 40, 1e-12).map_err(CommandError::computation)
}

/// Semiclassical spacing: the quartic closed form unless quadrature is
/// requested or the potential is not quartic.
fn semiclassical_lambda(
    cfg: &RunConfig,
    spec: &OscillatorSpec,
    method: Method,
) -> Result<LambdaFunction, CommandError> {
    let kappa = spec.kappa();
    let lf = if method != Method::ScQuadrature && spec.is_quartic() {
        LambdaFunction::quartic(kappa)
    } else {
        let surface = EnergySurface::from_spec(spec);
        let q = quadrature_config(cfg)?;
        if spec.is_quartic() && kappa < 0.0 {
            LambdaFunction::quadrature_below(surface, q, e_max_negative(kappa).map_err(CommandError::computation)?)
        } else {
            LambdaFunction::quadrature(surface, q)
        }
    };
    lf.map_err(CommandError::computation)
}

/// Builds up to `n_max` steps; a bounded spectrum returns its complete
/// (terminated) ladder.
fn ladder(lf: &LambdaFunction, e_g: f64, n_max: usize) -> Result<Spectrum, CommandError> {
    match build_spectrum(lf, e_g, n_max) {
        Ok(s) => Ok(s),
        Err(LadderError::DomainExhausted { spectrum, .. }) => Ok(*spectrum),
        Err(e) => Err(CommandError::computation(e)),
    }
}

fn oracle_options(cfg: &RunConfig) -> OracleOptions {
    OracleOptions {
        allow_negative: cfg.allow_negative_oracle,
        ..OracleOptions::default()
    }
}

fn oracle_levels(cfg: &RunConfig, spec: &OscillatorSpec, n: usize) -> Result<(Vec<f64>, usize, Vec<f64>), CommandError> {
    let c = converged_levels_with(spec, n, cfg.tolerances.oracle.value(), &oracle_options(cfg))
        .map_err(CommandError::computation)?;
    Ok((c.levels, c.dim, c.residuals))
}

/// `n,e_pert,e_sc,e_oracle,delta_pert_oracle,delta_sc_oracle`.
pub fn spectrum(cfg: &RunConfig) -> Result<Output, CommandError> {
    let spec = cfg.spec()?;
    let kappa = spec.kappa();
    let n_max = cfg.n_max;
    let m = cfg.method;
    let mut out = Output::default();

    let e_pert: Option<Vec<f64>> = (matches!(m, Method::Pert | Method::All) && spec.is_quartic())
        .then(|| (0..=n_max as u64).map(|n| energy_pert(n, kappa)).collect());
    if e_pert.is_some() {
        out.warnings.extend(Validity::Perturbative.warning(kappa, n_max));
    }

    let sc = if matches!(m, Method::ScClosed | Method::ScQuadrature | Method::All) {
        let lf = semiclassical_lambda(cfg, &spec, m)?;
        let bottom = EnergySurface::from_spec(&spec).minimum();
        let s = ladder(&lf, bottom, n_max)?;
        if s.is_terminated() {
            out.warnings.push(format!(
                "bounded spectrum: semiclassical ladder ends at level {} (e = {})",
                s.top(),
                s.levels()[s.top()]
            ));
        }
        out.notes.push(format!("e_sc climbs from e = {bottom} with {}", lf.source()));
        Some(s)
    } else {
        None
    };

    let oracle_possible = spec.polynomial_degree().is_some();
    let oracle = if matches!(m, Method::Oracle | Method::All) && oracle_possible {
        if kappa < 0.0 && !cfg.allow_negative_oracle {
            out.warnings
                .push("oracle column omitted: negative coupling is unbounded below".into());
            None
        } else {
            if kappa < 0.0 {
                out.warnings
                    .push("negative coupling: truncated oracle levels are not physical".into());
            }
            let (levels, dim, _) = oracle_levels(cfg, &spec, n_max + 1)?;
            out.notes.push(format!("oracle basis dimension {dim}"));
            Some(levels)
        }
    } else {
        None
    };

    let mut t = Table::new(["n", "e_pert", "e_sc", "e_oracle", "delta_pert_oracle", "delta_sc_oracle"]);
    for n in 0..=n_max {
        let p = e_pert.as_ref().map(|v| v[n]);
        let s = sc.as_ref().and_then(|s| s.level(n));
        let o = oracle.as_ref().map(|v| v[n]);
        let d = |x: Option<f64>| x.zip(o).map(|(a, b)| a - b);
        t.push(vec![
            Cell::Int(n as u64),
            Cell::opt(p),
            Cell::opt(s),
            Cell::opt(o),
            Cell::opt(d(p)),
            Cell::opt(d(s)),
        ]);
    }
    out.table = t.without_empty_columns();
    if out.table.columns.len() == 1 {
        return Err(CommandError::config(format!(
            "method {} yields no column for this potential",
            m.label()
        )));
    }

    if let (Some(path), Some(s)) = (&cfg.output.ladder, &sc) {
        out.extra.push((path.clone(), ladder_csv(s).to_csv()));
    }
    Ok(out)
}

/// `n,e_n,lambda_at_prev,A_log`.
pub fn ladder_csv(s: &Spectrum) -> Table {
    let mut t = Table::new(["n", "e_n", "lambda_at_prev", "A_log"]);
    for n in 0..s.len() {
        let prev = n.checked_sub(1).and_then(|k| s.lambda_at_level(k));
        t.push(vec![
            Cell::Int(n as u64),
            Cell::Num(s.levels()[n]),
            Cell::opt(prev),
            Cell::Num(s.a_log()[n]),
        ]);
    }
    t
}

/// `e,lambda_closed,lambda_quadrature,lambda_pert` over the energy grid.
pub fn lambda(cfg: &RunConfig) -> Result<Output, CommandError> {
    let spec = cfg.spec()?;
    let kappa = spec.kappa();
    let surface = EnergySurface::from_spec(&spec);
    let q = quadrature_config(cfg)?;
    let closed = if spec.is_quartic() {
        Some(LambdaFunction::quartic(kappa).map_err(CommandError::computation)?)
    } else {
        None
    };
    let mut out = Output::default();
    let mut t = Table::new(["e", "lambda_closed", "lambda_quadrature", "lambda_pert"]);
    for e in &cfg.e_grid {
        let e = e.value();
        let c = closed.as_ref().and_then(|l| l.eval(e).ok());
        let qv = lambda_sc(&surface, e, &q).ok();
        let p = spec.is_quartic().then(|| lambda_pert(e, kappa));
        t.push(vec![Cell::Num(e), Cell::opt(c), Cell::opt(qv), Cell::opt(p)]);
    }
    if spec.is_quartic() {
        let top = cfg.e_grid.iter().map(|e| e.value()).fold(0.0, f64::max);
        if 3.0 * kappa.abs() * top > 0.1 {
            out.warnings.push(format!(
                "lambda_pert outside its small kappa (e - 1/2) regime (3|kappa| e_max = {:.3})",
                3.0 * kappa.abs() * top
            ));
        }
    }
    out.table = t.without_empty_columns();
    Ok(out)
}

/// `beta,Z,avg_energy,avg_number,tail_bound,res_t3,res_t6,res_t10`, with
/// `Z_classical,ratio_quantum_classical` appended on request.
pub fn thermal(cfg: &RunConfig, classical: bool) -> Result<Output, CommandError> {
    let spec = cfg.spec()?;
    let kappa = spec.kappa();
    let (lf, e_g) = match cfg.method {
        Method::Oracle => {
            return Err(CommandError::config(
                "thermal identities need a spacing function: use pert, sc-closed or sc-quadrature",
            ))
        }
        Method::Pert => (
            LambdaFunction::perturbative(kappa).map_err(CommandError::computation)?,
            groundstate_pert(kappa),
        ),
        m => (
            semiclassical_lambda(cfg, &spec, m)?,
            EnergySurface::from_spec(&spec).minimum(),
        ),
    };
    let tol = cfg.tolerances.thermal_tail.value();
    let betas: Vec<f64> = cfg.beta.iter().map(|b| b.value()).collect();
    let mut n = cfg.n_max.max(64);
    let s = loop {
        let s = ladder(&lf, e_g, n)?;
        let short = betas
            .iter()
            .map(|&b| partition_function(&s, b, tol))
            .find_map(|r| r.err());
        match short {
            None => break s,
            Some(ThermalError::TailNotBounded { .. }) if !s.is_terminated() && n < N_MAX_CAP => n = (2 * n).min(N_MAX_CAP),
            Some(e) => return Err(CommandError::computation(e)),
        }
    };
    let mut out = Output::default();
    out.notes.push(format!("ladder of {} levels from e_g = {e_g} with {}", s.len(), lf.source()));
    out.notes
        .push("res_t3 compares <lambda exp(-beta lambda)> with <(H - e_g)(1 - exp(-beta lambda))>".into());
    out.notes
        .push("res_t6 is the larger of the mean-energy and partition-function residuals".into());
    if s.is_terminated() {
        out.warnings
            .push(format!("bounded spectrum: all {} levels summed, no tail", s.len()));
    }
    let mut cols = vec!["beta", "Z", "avg_energy", "avg_number", "tail_bound", "res_t3", "res_t6", "res_t10"];
    if classical {
        cols.extend(["Z_classical", "ratio_quantum_classical"]);
    }
    let q = quadrature_config(cfg)?;
    let mut t = Table::new(cols);
    for &b in &betas {
        let st = partition_function(&s, b, tol).map_err(CommandError::computation)?;
        let t3 = verify_kms_identity(&s, &lf, b).map_err(CommandError::computation)?;
        let t6 = verify_avg_energy_identity(&s, &lf, b).map_err(CommandError::computation)?;
        let t10 = verify_number_identity(&s, &lf, b).map_err(CommandError::computation)?;
        let mut row = vec![
            Cell::Num(b),
            Cell::Num(st.z),
            Cell::Num(st.avg_energy),
            Cell::Num(st.avg_number),
            Cell::Num(st.truncation_bound),
            Cell::Num(t3.residual),
            Cell::Num(t6.residual),
            Cell::Num(t10),
        ];
        if classical {
            let zc = classical_partition(&spec, b, &q).map_err(CommandError::computation)?;
            row.extend([Cell::Num(zc), Cell::Num(st.z / zc)]);
        }
        t.push(row);
    }
    out.table = t;
    Ok(out)
}

/// `n,e_oracle,dim,residual`.
pub fn oracle(cfg: &RunConfig) -> Result<Output, CommandError> {
    let spec = cfg.spec()?;
    if spec.polynomial_degree().is_none() {
        return Err(CommandError::config("the oracle needs a polynomial potential"));
    }
    if spec.kappa() < 0.0 && !cfg.allow_negative_oracle {
        return Err(CommandError::config(format!(
            "oracle refuses negative kappa = {} without --allow-negative-oracle",
            spec.kappa()
        )));
    }
    let mut out = Output::default();
    if spec.kappa() < 0.0 {
        out.warnings
            .push("negative coupling: truncated oracle levels are not physical".into());
    }
    let (levels, dim, residuals) = oracle_levels(cfg, &spec, cfg.n_max + 1)?;
    let mut t = Table::new(["n", "e_oracle", "dim", "residual"]);
    for (n, (e, r)) in levels.iter().zip(&residuals).enumerate() {
        t.push(vec![Cell::Int(n as u64), Cell::Num(*e), Cell::Int(dim as u64), Cell::Num(*r)]);
    }
    out.table = t;
    Ok(out)
}

/// Identity residuals of the finite-difference Lie operator built on the
/// configured spacing, over the energy grid.
pub fn fdlie(cfg: &RunConfig) -> Result<Output, CommandError> {
    let spec = cfg.spec()?;
    let lf = if cfg.method == Method::Pert {
        LambdaFunction::perturbative(spec.kappa()).map_err(CommandError::computation)?
    } else {
        semiclassical_lambda(cfg, &spec, cfg.method)?
    };
    fdlie_with(lf, cfg)
}

fn fdlie_with(lf: LambdaFunction, cfg: &RunConfig) -> Result<Output, CommandError> {
    let (lo, hi) = lf.domain();
    let name = lf.source().to_string();
    let inner = lf.clone();
    let lam = RealFunction::new(name.clone(), lo, hi, move |x| inner.eval(x).unwrap_or(f64::NAN));
    let f = RealFunction::everywhere("sin(x)", f64::sin);
    let g = RealFunction::everywhere("x^2 + 1", |x| x * x + 1.0);
    let unit = RealFunction::constant(1.0);
    let mut out = Output::default();
    out.notes.push(format!(
        "lambda = {name}; f = sin(x); g = x^2 + 1; commutator taken with the unit shift on f"
    ));
    let mut t = Table::new([
        "x",
        "lambda",
        "lie_f",
        "linearity",
        "product_rule",
        "commutator",
        "kernel_residual",
    ]);
    for x in &cfg.e_grid {
        let x = x.value();
        let ok = |r: Result<f64, _>| Cell::opt(r.ok().filter(|v: &f64| v.is_finite()));
        t.push(vec![
            Cell::Num(x),
            ok(lam.eval(x)),
            ok(lie_apply(&lam, &f, x)),
            ok(linearity_residual(&lam, 2.0, &f, -3.0, &g, x)),
            ok(product_rule_residual(&lam, &f, &g, x)),
            ok(lie_commutator(&lam, &unit, &f, x)),
            ok(kernel_residual(&lam, x)),
        ]);
    }
    out.table = t;
    Ok(out)
}
