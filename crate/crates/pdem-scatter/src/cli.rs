//! Command-line front end: resolves a job configuration from presets, an
//! optional key=value config file, and flags (flags win over file values,
//! file values win over the preset), then emits CSV for external plotting.
//!
//! Output layout per job:
//!   profile       z,m,V
//!   wavefunction  z,re_psi,im_psi,abs_psi          (+ oracle columns for --engine both)
//!   sweep         E,T_sq,R_sq,Tc,Rc                (+ oracle columns for --engine both)
//!   verify        E,R_err,T_err,flux_residual
//!
//! Every file starts with a `#` metadata block recording the resolved
//! configuration, so a plot can always be traced back to its inputs.  A job
//! that loses points to per-energy failures still writes the good rows,
//! appends a trailing `# INCOMPLETE` marker, and exits 1; configuration
//! errors exit 2 before any output is produced.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::analytic::InteriorBasis;
use crate::error::Error;
use crate::matcher;
use crate::models::{BarrierModel, Profile, ScatterModel, WellModel};
use crate::oracle::{self, OracleConfig};

/// Agreement thresholds of the `verify` job.
const VERIFY_AMP_TOL: f64 = 1e-6;
const VERIFY_FLUX_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "pdem-scatter",
    about = "Scattering states for a position-dependent-mass double heterojunction",
    version
)]
struct Cli {
    #[command(subcommand)]
    job: JobCmd,
}

#[derive(Subcommand, Debug)]
enum JobCmd {
    /// Emit the mass and potential landscape on a z-grid.
    Profile(JobArgs),
    /// Emit the scattering wavefunction at one energy on a z-grid.
    Wavefunction(JobArgs),
    /// Emit R/T amplitudes and flux coefficients over an energy grid.
    Sweep(JobArgs),
    /// Compare the analytic solution against the integrator and report errors.
    Verify(JobArgs),
}

#[derive(Args, Debug, Default)]
struct JobArgs {
    /// Named parameter set: fig1, fig2, fig3, fig4.
    #[arg(long)]
    preset: Option<String>,
    /// Key=value configuration file (lower precedence than flags).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model kind: well or barrier.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    /// Energy of single-energy jobs (wavefunction, single-point verify).
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Number of energy grid points.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    zmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    zmax: Option<f64>,
    #[arg(long)]
    n_z: Option<usize>,
    /// Computation engine: analytic, oracle, or both.
    #[arg(long)]
    engine: Option<String>,
    /// RK4 steps across the junction span for the oracle engine.
    #[arg(long)]
    oracle_steps: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JobKind {
    Profile,
    Wavefunction,
    Sweep,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Oracle,
    Both,
}

/// Fully resolved job description.
#[derive(Debug)]
pub struct JobConfig {
    pub job: JobKind,
    pub model: ScatterModel,
    pub energy: Option<f64>,
    pub e_grid: Option<(f64, f64, usize)>,
    pub z_grid: (f64, f64, usize),
    pub engine: Engine,
    pub oracle_steps: usize,
    /// True when alpha was filled in by a preset rather than the user.
    pub alpha_from_preset: bool,
    pub out: Option<PathBuf>,
}

/// Unmerged option layer; later layers win field by field.
#[derive(Debug, Default, Clone)]
struct Overrides {
    model: Option<String>,
    beta: Option<f64>,
    mu: Option<f64>,
    a0: Option<f64>,
    m0: Option<f64>,
    v0: Option<f64>,
    alpha: Option<f64>,
    a1: Option<f64>,
    a2: Option<f64>,
    energy: Option<f64>,
    emin: Option<f64>,
    emax: Option<f64>,
    n: Option<usize>,
    zmin: Option<f64>,
    zmax: Option<f64>,
    n_z: Option<usize>,
    engine: Option<String>,
    oracle_steps: Option<usize>,
}

impl Overrides {
    fn layered_under(self, top: &Overrides) -> Overrides {
        macro_rules! pick {
            ($f:ident) => {
                top.$f.clone().or(self.$f)
            };
        }
        Overrides {
            model: pick!(model),
            beta: pick!(beta),
            mu: pick!(mu),
            a0: pick!(a0),
            m0: pick!(m0),
            v0: pick!(v0),
            alpha: pick!(alpha),
            a1: pick!(a1),
            a2: pick!(a2),
            energy: pick!(energy),
            emin: pick!(emin),
            emax: pick!(emax),
            n: pick!(n),
            zmin: pick!(zmin),
            zmax: pick!(zmax),
            n_z: pick!(n_z),
            engine: pick!(engine),
            oracle_steps: pick!(oracle_steps),
        }
    }
}

fn preset_layer(name: &str) -> Result<Overrides, Error> {
    let mut o = Overrides::default();
    match name {
        "fig1" | "fig2" => {
            o.model = Some("well".into());
            o.beta = Some(4.0);
            o.mu = Some(3.0);
            o.a0 = Some(2.0);
            if name == "fig2" {
                o.energy = Some(40.0);
            }
        }
        "fig3" | "fig4" => {
            o.model = Some("barrier".into());
            o.m0 = Some(0.4);
            o.v0 = Some(5.0);
            o.alpha = Some(1.0);
            let a = if name == "fig3" { 0.8 } else { 1.5 };
            o.a1 = Some(-a);
            o.a2 = Some(a);
            o.energy = Some(33.0);
        }
        other => {
            return Err(Error::ParseError {
                place: "--preset".into(),
                detail: format!("unknown preset '{other}' (expected fig1..fig4)"),
            })
        }
    }
    Ok(o)
}

fn parse_config_file(text: &str) -> Result<Overrides, Error> {
    let mut o = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ParseError {
            place: format!("config line {line_no}"),
            detail: format!("expected key = value, got '{line}'"),
        })?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        let bad = |detail: String| Error::ParseError {
            place: format!("config line {line_no} ({key})"),
            detail,
        };
        let as_f64 = |v: &str| {
            v.parse::<f64>()
                .map_err(|e| bad(format!("'{v}' is not a number: {e}")))
        };
        let as_usize = |v: &str| {
            v.parse::<usize>()
                .map_err(|e| bad(format!("'{v}' is not a count: {e}")))
        };
        match key.as_str() {
            "model" => o.model = Some(value.to_string()),
            "beta" => o.beta = Some(as_f64(value)?),
            "mu" => o.mu = Some(as_f64(value)?),
            "a0" => o.a0 = Some(as_f64(value)?),
            "m0" => o.m0 = Some(as_f64(value)?),
            "v0" => o.v0 = Some(as_f64(value)?),
            "alpha" => o.alpha = Some(as_f64(value)?),
            "a1" => o.a1 = Some(as_f64(value)?),
            "a2" => o.a2 = Some(as_f64(value)?),
            "energy" => o.energy = Some(as_f64(value)?),
            "emin" => o.emin = Some(as_f64(value)?),
            "emax" => o.emax = Some(as_f64(value)?),
            "n" => o.n = Some(as_usize(value)?),
            "zmin" => o.zmin = Some(as_f64(value)?),
            "zmax" => o.zmax = Some(as_f64(value)?),
            "n_z" => o.n_z = Some(as_usize(value)?),
            "engine" => o.engine = Some(value.to_string()),
            "oracle_steps" => o.oracle_steps = Some(as_usize(value)?),
            _ => {
                return Err(Error::UnknownKey {
                    key: key.to_string(),
                    line: line_no,
                })
            }
        }
    }
    Ok(o)
}

fn flags_layer(a: &JobArgs) -> Overrides {
    Overrides {
        model: a.model.clone(),
        beta: a.beta,
        mu: a.mu,
        a0: a.a0,
        m0: a.m0,
        v0: a.v0,
        alpha: a.alpha,
        a1: a.a1,
        a2: a.a2,
        energy: a.energy,
        emin: a.emin,
        emax: a.emax,
        n: a.n,
        zmin: a.zmin,
        zmax: a.zmax,
        n_z: a.n_z,
        engine: a.engine.clone(),
        oracle_steps: a.oracle_steps,
    }
}

fn require(v: Option<f64>, key: &str) -> Result<f64, Error> {
    v.ok_or_else(|| Error::MissingRequired(key.to_string()))
}

fn resolve(job: JobKind, args: &JobArgs) -> Result<JobConfig, Error> {
    let mut merged = Overrides::default();
    if let Some(name) = &args.preset {
        merged = preset_layer(name)?;
    }
    let preset_alpha = merged.alpha.is_some();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)?;
        merged = merged.layered_under(&parse_config_file(&text)?);
    }
    let flags = flags_layer(args);
    let alpha_from_preset = preset_alpha && merged.alpha.is_some() && flags.alpha.is_none()
        && merged.alpha == preset_layer(args.preset.as_deref().unwrap_or("fig3"))?.alpha;
    let merged = merged.layered_under(&flags);

    let model = match merged.model.as_deref() {
        Some("well") => ScatterModel::Well(WellModel::new(
            require(merged.beta, "beta")?,
            require(merged.mu, "mu")?,
            require(merged.a0, "a0")?,
        )?),
        Some("barrier") => ScatterModel::Barrier(BarrierModel::new(
            require(merged.m0, "m0")?,
            require(merged.v0, "v0")?,
            require(merged.alpha, "alpha")?,
            require(merged.a1, "a1")?,
            require(merged.a2, "a2")?,
        )?),
        Some(other) => {
            return Err(Error::ParseError {
                place: "model".into(),
                detail: format!("unknown model '{other}' (expected well or barrier)"),
            })
        }
        None => return Err(Error::MissingRequired("model".to_string())),
    };

    let engine = match merged.engine.as_deref() {
        None | Some("analytic") => Engine::Analytic,
        Some("oracle") => Engine::Oracle,
        Some("both") => Engine::Both,
        Some(other) => {
            return Err(Error::ParseError {
                place: "engine".into(),
                detail: format!("unknown engine '{other}' (expected analytic, oracle, both)"),
            })
        }
    };

    // spatial grid: default frames the interior with one span of exterior
    let (a1, a2) = model.junctions();
    let span = a2 - a1;
    let z_grid = (
        merged.zmin.unwrap_or(a1 - span),
        merged.zmax.unwrap_or(a2 + span),
        merged.n_z.unwrap_or(401),
    );
    if z_grid.0.is_nan() || z_grid.1.is_nan() || z_grid.0 >= z_grid.1 || z_grid.2 < 2 {
        return Err(Error::InvalidParameter(format!(
            "z grid needs zmin < zmax and n_z >= 2, got {} .. {} n_z={}",
            z_grid.0, z_grid.1, z_grid.2
        )));
    }

    let e_grid = match (merged.emin, merged.emax) {
        (Some(lo), Some(hi)) => {
            let n = merged.n.unwrap_or(200);
            if lo.is_nan() || hi.is_nan() || lo >= hi || n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "energy grid needs emin < emax and n >= 2, got {lo} .. {hi} n={n}"
                )));
            }
            Some((lo, hi, n))
        }
        (None, None) => None,
        _ => {
            return Err(Error::MissingRequired(
                if merged.emin.is_none() { "emin" } else { "emax" }.to_string(),
            ))
        }
    };

    match job {
        JobKind::Wavefunction => {
            if merged.energy.is_none() {
                return Err(Error::MissingRequired("energy".to_string()));
            }
        }
        JobKind::Sweep => {
            if e_grid.is_none() {
                return Err(Error::MissingRequired("emin".to_string()));
            }
        }
        JobKind::Verify => {
            if merged.energy.is_none() && e_grid.is_none() {
                return Err(Error::MissingRequired("energy (or emin/emax)".to_string()));
            }
        }
        JobKind::Profile => {}
    }

    let oracle_steps = merged.oracle_steps.unwrap_or(10_000);
    if oracle_steps == 0 {
        return Err(Error::InvalidParameter("oracle_steps must be > 0".into()));
    }

    Ok(JobConfig {
        job,
        model,
        energy: merged.energy,
        e_grid,
        z_grid,
        engine,
        oracle_steps,
        alpha_from_preset,
        out: args.out.clone(),
    })
}

/// Parses argv (including the binary name) into a resolved job config.
pub fn parse_cli<I, T>(argv: I) -> Result<JobConfig, Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::ParseError {
        place: "args".into(),
        detail: e.to_string(),
    })?;
    match &cli.job {
        JobCmd::Profile(a) => resolve(JobKind::Profile, a),
        JobCmd::Wavefunction(a) => resolve(JobKind::Wavefunction, a),
        JobCmd::Sweep(a) => resolve(JobKind::Sweep, a),
        JobCmd::Verify(a) => resolve(JobKind::Verify, a),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn job_name(job: JobKind) -> &'static str {
    match job {
        JobKind::Profile => "profile",
        JobKind::Wavefunction => "wavefunction",
        JobKind::Sweep => "sweep",
        JobKind::Verify => "verify",
    }
}

fn metadata_block(cfg: &JobConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# pdem-scatter {}", job_name(cfg.job));
    match &cfg.model {
        ScatterModel::Well(w) => {
            let _ = writeln!(
                s,
                "# model: well beta={} mu={} a0={}",
                w.beta(),
                w.mu(),
                w.a0()
            );
        }
        ScatterModel::Barrier(b) => {
            let _ = writeln!(
                s,
                "# model: barrier m0={} v0={} alpha={} a1={} a2={}",
                b.m0(),
                b.v0(),
                b.alpha(),
                b.a1(),
                b.a2()
            );
            if cfg.alpha_from_preset {
                let _ = writeln!(s, "# alpha: {} (preset default)", b.alpha());
            }
        }
    }
    let _ = writeln!(
        s,
        "# engine: {}",
        match cfg.engine {
            Engine::Analytic => "analytic",
            Engine::Oracle => "oracle",
            Engine::Both => "both",
        }
    );
    if let Some(e) = cfg.energy {
        let _ = writeln!(s, "# energy: {e}");
    }
    if let Some((lo, hi, n)) = cfg.e_grid {
        let _ = writeln!(s, "# e_grid: {lo} .. {hi} n={n}");
    }
    if matches!(cfg.job, JobKind::Profile | JobKind::Wavefunction) {
        let _ = writeln!(
            s,
            "# z_grid: {} .. {} n_z={}",
            cfg.z_grid.0, cfg.z_grid.1, cfg.z_grid.2
        );
    }
    if cfg.engine != Engine::Analytic || cfg.job == JobKind::Verify {
        let _ = writeln!(s, "# oracle_steps: {}", cfg.oracle_steps);
    }
    if cfg.job == JobKind::Verify {
        let _ = writeln!(
            s,
            "# thresholds: amplitude {VERIFY_AMP_TOL:e}, flux {VERIFY_FLUX_TOL:e}"
        );
    }
    s
}

struct JobOutput {
    csv: String,
    exit_code: i32,
    diagnostics: Vec<String>,
}

fn energy_grid(cfg: &JobConfig) -> Vec<f64> {
    match (cfg.energy, cfg.e_grid) {
        (_, Some((lo, hi, n))) => linspace(lo, hi, n),
        (Some(e), None) => vec![e],
        (None, None) => Vec::new(),
    }
}

fn run_profile(cfg: &JobConfig) -> JobOutput {
    let mut csv = metadata_block(cfg);
    csv.push_str("z,m,V\n");
    for z in linspace(cfg.z_grid.0, cfg.z_grid.1, cfg.z_grid.2) {
        let _ = writeln!(
            csv,
            "{},{},{}",
            fmt(z),
            fmt(cfg.model.mass(z)),
            fmt(cfg.model.potential(z))
        );
    }
    JobOutput {
        csv,
        exit_code: 0,
        diagnostics: Vec::new(),
    }
}

fn run_wavefunction(cfg: &JobConfig) -> JobOutput {
    let e = cfg.energy.expect("wavefunction requires energy");
    let zs = linspace(cfg.z_grid.0, cfg.z_grid.1, cfg.z_grid.2);
    let mut csv = metadata_block(cfg);
    let mut diagnostics = Vec::new();
    let header = match cfg.engine {
        Engine::Both => "z,re_psi,im_psi,abs_psi,re_psi_oracle,im_psi_oracle,abs_psi_oracle\n",
        _ => "z,re_psi,im_psi,abs_psi\n",
    };

    // analytic side (also used by `both`)
    let analytic: Result<Vec<Result<Complex64, Error>>, Error> = if cfg.engine == Engine::Oracle {
        Ok(Vec::new())
    } else {
        matcher::solve(&cfg.model, e).and_then(|sol| {
            let basis = InteriorBasis::for_model(&cfg.model, e)?;
            let (a1, a2) = cfg.model.junctions();
            let i = Complex64::i();
            Ok(zs
                .iter()
                .map(|&z| {
                    if z <= a1 {
                        Ok((i * sol.asym.k1 * z).exp() + sol.r * (-i * sol.asym.k1 * z).exp())
                    } else if z >= a2 {
                        Ok(sol.t * (i * sol.asym.k2 * z).exp())
                    } else {
                        basis.eval(z).map(|(b1, b2)| sol.c1 * b1.psi + sol.c2 * b2.psi)
                    }
                })
                .collect())
        })
    };
    let oracle_vals: Result<Vec<Complex64>, Error> = if cfg.engine == Engine::Analytic {
        Ok(Vec::new())
    } else {
        let ocfg = OracleConfig {
            steps: cfg.oracle_steps,
            ..OracleConfig::default()
        };
        oracle::wavefunction(&cfg.model, e, &zs, &ocfg)
    };

    let (analytic, oracle_vals) = match (analytic, oracle_vals) {
        (Ok(a), Ok(o)) => (a, o),
        (a, o) => {
            for err in [a.err(), o.err()].into_iter().flatten() {
                diagnostics.push(format!("E={e}: {err}"));
            }
            csv.push_str(header);
            csv.push_str("# INCOMPLETE\n");
            return JobOutput {
                csv,
                exit_code: 1,
                diagnostics,
            };
        }
    };

    csv.push_str(header);
    let mut incomplete = false;
    for (idx, &z) in zs.iter().enumerate() {
        match cfg.engine {
            Engine::Analytic | Engine::Both => match &analytic[idx] {
                Ok(p) => {
                    let _ = write!(
                        csv,
                        "{},{},{},{}",
                        fmt(z),
                        fmt(p.re),
                        fmt(p.im),
                        fmt(p.norm())
                    );
                    if cfg.engine == Engine::Both {
                        let q = oracle_vals[idx];
                        let _ = write!(csv, ",{},{},{}", fmt(q.re), fmt(q.im), fmt(q.norm()));
                    }
                    csv.push('\n');
                }
                Err(err) => {
                    diagnostics.push(format!("z={z}: {err}"));
                    incomplete = true;
                }
            },
            Engine::Oracle => {
                let q = oracle_vals[idx];
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    fmt(z),
                    fmt(q.re),
                    fmt(q.im),
                    fmt(q.norm())
                );
            }
        }
    }
    if incomplete {
        csv.push_str("# INCOMPLETE\n");
    }
    JobOutput {
        csv,
        exit_code: i32::from(incomplete),
        diagnostics,
    }
}

fn run_sweep(cfg: &JobConfig) -> JobOutput {
    let grid = energy_grid(cfg);
    let mut csv = metadata_block(cfg);
    csv.push_str(match cfg.engine {
        Engine::Both => "E,T_sq,R_sq,Tc,Rc,T_sq_oracle,R_sq_oracle,Tc_oracle,Rc_oracle\n",
        _ => "E,T_sq,R_sq,Tc,Rc\n",
    });
    let mut diagnostics = Vec::new();
    let mut incomplete = false;

    let analytic = if cfg.engine == Engine::Oracle {
        Vec::new()
    } else {
        matcher::sweep(&cfg.model, &grid)
    };
    let ocfg = OracleConfig {
        steps: cfg.oracle_steps,
        ..OracleConfig::default()
    };

    for (idx, &e) in grid.iter().enumerate() {
        let oracle_part = if cfg.engine == Engine::Analytic {
            None
        } else {
            Some(oracle::amplitudes(&cfg.model, e, &ocfg).map(|s| (s.r, s.t)))
        };
        let analytic_part = if cfg.engine == Engine::Oracle {
            None
        } else {
            Some(&analytic[idx].result)
        };

        let mut row = fmt(e);
        let mut ok = true;
        if let Some(res) = analytic_part {
            match res {
                Ok(sol) => {
                    let c = sol.coefficients();
                    let _ = write!(
                        row,
                        ",{},{},{},{}",
                        fmt(c.t_sq),
                        fmt(c.r_sq),
                        fmt(c.tc),
                        fmt(c.rc)
                    );
                }
                Err(err) => {
                    diagnostics.push(format!("E={e}: {err}"));
                    ok = false;
                }
            }
        }
        if ok {
            if let Some(res) = oracle_part {
                match res {
                    Ok((r, t)) => {
                        // flux-normalize with the same channel constants
                        match crate::models::asymptotics(&cfg.model, e) {
                            Ok(asym) => {
                                let ratio = (asym.k2 * asym.m1) / (asym.k1 * asym.m2);
                                let _ = write!(
                                    row,
                                    ",{},{},{},{}",
                                    fmt(t.norm_sqr()),
                                    fmt(r.norm_sqr()),
                                    fmt(ratio * t.norm_sqr()),
                                    fmt(r.norm_sqr())
                                );
                            }
                            Err(err) => {
                                diagnostics.push(format!("E={e}: {err}"));
                                ok = false;
                            }
                        }
                    }
                    Err(err) => {
                        diagnostics.push(format!("E={e}: {err}"));
                        ok = false;
                    }
                }
            }
        }
        if ok {
            csv.push_str(&row);
            csv.push('\n');
        } else {
            incomplete = true;
        }
    }
    if incomplete {
        csv.push_str("# INCOMPLETE\n");
    }
    JobOutput {
        csv,
        exit_code: i32::from(incomplete),
        diagnostics,
    }
}

fn run_verify(cfg: &JobConfig) -> JobOutput {
    let grid = energy_grid(cfg);
    let mut csv = metadata_block(cfg);
    csv.push_str("E,R_err,T_err,flux_residual\n");
    let mut diagnostics = Vec::new();
    let mut incomplete = false;
    let mut threshold_breached = false;
    let ocfg = OracleConfig {
        steps: cfg.oracle_steps,
        ..OracleConfig::default()
    };

    for &e in &grid {
        let pair = matcher::solve(&cfg.model, e)
            .and_then(|sol| Ok((sol, oracle::amplitudes(&cfg.model, e, &ocfg)?)));
        match pair {
            Ok((sol, orc)) => {
                let r_err = (sol.r - orc.r).norm();
                let t_err = (sol.t - orc.t).norm();
                let flux = sol.flux_residual().abs();
                if r_err > VERIFY_AMP_TOL || t_err > VERIFY_AMP_TOL || flux > VERIFY_FLUX_TOL {
                    threshold_breached = true;
                    diagnostics.push(format!(
                        "E={e}: disagreement beyond thresholds (R_err={r_err:.3e}, T_err={t_err:.3e}, flux={flux:.3e})"
                    ));
                }
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    fmt(e),
                    fmt(r_err),
                    fmt(t_err),
                    fmt(flux)
                );
            }
            Err(err) => {
                diagnostics.push(format!("E={e}: {err}"));
                incomplete = true;
            }
        }
    }
    if incomplete {
        csv.push_str("# INCOMPLETE\n");
    }
    JobOutput {
        csv,
        exit_code: i32::from(incomplete || threshold_breached),
        diagnostics,
    }
}

/// Runs the job and writes its CSV to `w`; diagnostics go to stderr.
/// Returns the process exit code.
pub fn run_job(cfg: &JobConfig, w: &mut dyn Write) -> io::Result<i32> {
    let out = match cfg.job {
        JobKind::Profile => run_profile(cfg),
        JobKind::Wavefunction => run_wavefunction(cfg),
        JobKind::Sweep => run_sweep(cfg),
        JobKind::Verify => run_verify(cfg),
    };
    for d in &out.diagnostics {
        eprintln!("pdem-scatter: {d}");
    }
    w.write_all(out.csv.as_bytes())?;
    w.flush()?;
    Ok(out.exit_code)
}

/// Full CLI entry: parse, run, map errors to exit codes (2 = usage/config).
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    // let clap handle --help/--version with a clean zero exit
    match Cli::try_parse_from(argv.iter().cloned()) {
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return 2;
        }
        Err(e) => {
            let _ = e.print();
            return 0;
        }
        Ok(_) => {}
    }
    let cfg = match parse_cli(argv) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("pdem-scatter: {err}");
            return 2;
        }
    };
    let result = match &cfg.out {
        Some(path) => match fs::File::create(path) {
            Ok(mut f) => run_job(&cfg, &mut f),
            Err(e) => Err(e),
        },
        None => run_job(&cfg, &mut io::stdout().lock()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pdem-scatter: output error: {e}");
            2
        }
    }
}
