//! Batch front-end behind the `beltrami` binary.
//!
//! Every subcommand reads a JSON [`Config`], writes its results under
//! `--out` (binary fields, CSV reports, PGM heatmaps, the resolved
//! `config.json` and a `summary.json` of the checked quantities) and prints a
//! one-line JSON summary on stdout. `verify` reloads such a directory and
//! recomputes every checked quantity from the stored fields.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure or failed
//! verification, 3 I/O or file-format error. Errors go to stderr as
//! `{"error": kind, "message": text}`.

mod builtin;
pub mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use builtin::builtin_field;
pub use config::{corpus, Config, FieldSpec};

use crate::beltrami::BeltramiField;
use crate::domain::{DomainSpec, Omega, Region};
use crate::error::{Error, Result};
use crate::exhaustion::exhaustion_solve;
use crate::family::{dbar_residuals, solve_dbar, solve_family, FamilyLaw, FamilySpec};
use crate::field::ComplexField;
use crate::io::{
    fmt_f64, load_field_on, save_field, write_exhaustion_csv, write_family_csv, write_heatmaps,
    write_trace_csv,
};
use crate::solver::{beltrami_residual, solve_immersion};
use crate::transforms::{cauchy_and_beurling, TransformMethod};

/// Largest allowed difference between a stored and a recomputed quantity.
pub const VERIFY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "beltrami",
    version,
    about = "Beltrami and ∂̄ solvers on planar grids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration (not used by `verify`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Overrides `solver.method` from the config.
    #[arg(long, global = true)]
    pub method: Option<TransformMethod>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Homogeneous Beltrami equation: h = z + P(φ), g = ∂_z h.
    SolveBeltrami,
    /// ∂̄ for the structure of `mu` with moving-frame data `u`.
    SolveDbar,
    /// ∂̄ over the family b·mu (or a table) on a parameter grid.
    SweepFamily,
    /// Global ∂̄ by exhaustion with discs.
    Exhaust,
    /// Recompute the checked quantities of an output directory.
    Verify,
    /// Spectral vs. quadrature transforms on the oracle fields.
    OracleCompare,
}

#[derive(Debug, Serialize, Deserialize)]
struct Summary {
    command: Command,
    metrics: BTreeMap<String, f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            report_error("usage", &e.to_string());
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            report_error("invalid_argument", &e.to_string());
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(Outcome {
            passed: true,
            summary,
        }) => {
            println!(
                "{}",
                serde_json::to_string(&summary).expect("summary serializes")
            );
            0
        }
        Ok(Outcome {
            passed: false,
            summary,
        }) => {
            println!(
                "{}",
                serde_json::to_string(&summary).expect("summary serializes")
            );
            report_error(
                "check_failed",
                "one or more checks exceeded their tolerance",
            );
            2
        }
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_solver_error() {
        return 2;
    }
    match e {
        Error::Io(_) | Error::Format(_) => 3,
        _ => 1,
    }
}

fn report_error(kind: &str, message: &str) {
    let line = serde_json::json!({ "error": kind, "message": message.trim() });
    eprintln!("{line}");
}

struct Outcome {
    passed: bool,
    summary: Summary,
}

/// Runs one command with an already-parsed command line.
fn execute(cli: &Cli) -> Result<Outcome> {
    if cli.command == Command::Verify {
        return verify(&cli.out);
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = Config::load(path)?;
    if let Some(m) = cli.method {
        cfg.solver.method = m.to_string();
    }
    execute_config(cli.command, &cfg, &cli.out)
}

/// Runs `command` for `cfg`, writing into `out`.
fn execute_config(command: Command, cfg: &Config, out: &Path) -> Result<Outcome> {
    let domain = cfg.domain.build()?;
    cfg.solver.build()?;
    let mut plan = Plan::new(command, cfg, domain)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("config.json"), cfg.to_json() + "\n")?;
    plan.run(out)?;
    let summary = Summary {
        command,
        metrics: plan.metrics,
    };
    serde_json::to_writer_pretty(File::create(out.join("summary.json"))?, &summary)
        .map_err(|e| Error::Io(e.into()))?;
    write_metrics_csv(&out.join("report.csv"), &summary.metrics)?;
    Ok(Outcome {
        passed: plan.passed,
        summary,
    })
}

/// Runs a command in-process against a config value; the library entry
/// point used by tests and examples.
pub fn run_config(command: Command, cfg: &Config, out: &Path) -> Result<bool> {
    if command == Command::Verify {
        return verify(out).map(|o| o.passed);
    }
    execute_config(command, cfg, out).map(|o| o.passed)
}

fn write_metrics_csv(path: &Path, metrics: &BTreeMap<String, f64>) -> Result<()> {
    let mut text = String::from("metric,value\n");
    for (k, v) in metrics {
        text.push_str(&format!("{k},{}\n", fmt_f64(*v)));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn mu_field(cfg: &Config, domain: DomainSpec) -> Result<BeltramiField> {
    let spec = cfg
        .mu
        .as_ref()
        .ok_or_else(|| Error::Config("`mu` is required".into()))?;
    BeltramiField::new(builtin_field(spec, domain)?)
}

fn u_field(cfg: &Config, domain: DomainSpec) -> Result<ComplexField> {
    let spec = cfg
        .u
        .as_ref()
        .ok_or_else(|| Error::Config("`u` is required".into()))?;
    builtin_field(spec, domain)
}

fn exhaust_domain(cfg: &Config, domain: DomainSpec) -> Result<DomainSpec> {
    let r = *cfg
        .exhaust
        .radii
        .last()
        .ok_or_else(|| Error::Config("exhaust.radii is empty".into()))?;
    domain.with_omega(Omega::Disc {
        center: crate::Complex64::new(0.0, 0.0),
        radius: r,
    })
}

/// Validated inputs of one command; all validation happens before any
/// solve or any write.
struct Plan<'a> {
    command: Command,
    cfg: &'a Config,
    domain: DomainSpec,
    mu: Option<BeltramiField>,
    u: Option<ComplexField>,
    family: Option<FamilySpec>,
    metrics: BTreeMap<String, f64>,
    passed: bool,
}

impl<'a> Plan<'a> {
    fn new(command: Command, cfg: &'a Config, domain: DomainSpec) -> Result<Self> {
        let mut plan = Plan {
            command,
            cfg,
            domain,
            mu: None,
            u: None,
            family: None,
            metrics: BTreeMap::new(),
            passed: true,
        };
        match command {
            Command::SolveBeltrami => plan.mu = Some(mu_field(cfg, domain)?),
            Command::SolveDbar => {
                plan.mu = Some(mu_field(cfg, domain)?);
                plan.u = Some(u_field(cfg, domain)?.tapered());
            }
            Command::SweepFamily => {
                let base = mu_field(cfg, domain)?;
                let grid = cfg.family.parameter_grid()?;
                let law = match &cfg.family.table {
                    None => FamilyLaw::Linear,
                    Some(specs) => FamilyLaw::Table(
                        specs
                            .iter()
                            .map(|s| BeltramiField::new(builtin_field(s, domain)?))
                            .collect::<Result<_>>()?,
                    ),
                };
                plan.family = Some(FamilySpec::new(base, grid, law)?);
                plan.u = Some(u_field(cfg, domain)?.tapered());
            }
            Command::Exhaust => {
                exhaust_domain(cfg, domain)?;
                plan.mu = Some(mu_field(cfg, domain)?);
                plan.u = Some(u_field(cfg, domain)?);
            }
            Command::OracleCompare => {
                for spec in &cfg.oracle.fields {
                    builtin_field(spec, domain)?;
                }
            }
            Command::Verify => unreachable!("verify has no plan"),
        }
        Ok(plan)
    }

    fn run(&mut self, out: &Path) -> Result<()> {
        let solver = self.cfg.solver.build()?;
        let save = |name: &str, f: &ComplexField| -> Result<()> {
            save_field(out.join(format!("{name}.field")), f)?;
            write_heatmaps(out, name, f)?;
            Ok(())
        };
        let m = &mut self.metrics;
        match self.command {
            Command::SolveBeltrami => {
                let mu = self.mu.as_ref().unwrap();
                let r = solve_immersion(mu, &solver)?;
                save("mu", mu.extended())?;
                save("h", &r.h)?;
                save("g", &r.g)?;
                save("phi", &r.phi)?;
                write_trace_csv(File::create(out.join("residual_trace.csv"))?, &r.trace)?;
                m.insert("iterations".into(), r.iterations as f64);
                m.insert("final_residual".into(), r.final_residual);
                m.insert("contraction".into(), r.contraction);
                m.insert("beltrami_residual".into(), r.beltrami_residual);
                m.insert("min_abs_g".into(), r.min_abs_g);
            }
            Command::SolveDbar => {
                let (mu, u) = (self.mu.as_ref().unwrap(), self.u.as_ref().unwrap());
                let sol = solve_dbar(mu, u, &solver)?;
                save("mu", mu.extended())?;
                save("u", u)?;
                save("g", &sol.g)?;
                save("f", &sol.f)?;
                write_trace_csv(
                    File::create(out.join("residual_trace.csv"))?,
                    &sol.diagnostics.trace,
                )?;
                let d = &sol.diagnostics;
                m.insert("iterations".into(), d.iterations as f64);
                m.insert("final_residual".into(), d.final_residual);
                m.insert("contraction".into(), d.contraction);
                m.insert("residual".into(), d.residual);
                m.insert("moving_residual".into(), d.moving_residual);
            }
            Command::SweepFamily => {
                let fam = self.family.as_ref().unwrap();
                let u = self.u.as_ref().unwrap();
                let us = vec![u.clone(); fam.parameter_grid().len()];
                let report = solve_family(fam, &us, &solver)?;
                save("u", u)?;
                write_family_csv(File::create(out.join("family.csv"))?, &report)?;
                for (k, e) in report.entries.iter().enumerate() {
                    m.insert(format!("b[{k}]"), e.b);
                    match &e.solution {
                        Ok(s) => {
                            save(&format!("mu_{k}"), fam.mu_at(k)?.extended())?;
                            save(&format!("g_{k}"), &s.g)?;
                            save(&format!("f_{k}"), &s.f)?;
                            m.insert(format!("iterations[{k}]"), s.diagnostics.iterations as f64);
                            m.insert(format!("residual[{k}]"), s.diagnostics.residual);
                            m.insert(
                                format!("moving_residual[{k}]"),
                                s.diagnostics.moving_residual,
                            );
                        }
                        Err(err) => {
                            report_error(err.kind(), &format!("parameter b = {}: {err}", e.b));
                            self.passed = false;
                        }
                    }
                }
                if let Some(c) = report.lipschitz_constant {
                    m.insert("lipschitz_constant".into(), c);
                }
                if let Some((coarse, fine)) = report.extrapolation_refinement() {
                    m.insert("extrapolation_error_coarse".into(), coarse);
                    m.insert("extrapolation_error_fine".into(), fine);
                }
            }
            Command::Exhaust => {
                let (mu, u) = (self.mu.as_ref().unwrap(), self.u.as_ref().unwrap());
                let ex = &self.cfg.exhaust;
                let r = exhaustion_solve(mu, u, &ex.radii, ex.taylor_degree, &solver)?;
                let (residual, moving) = dbar_residuals(&r.f, &r.mu, &r.g, &r.u)?;
                save("mu", r.mu.extended())?;
                save("u", &r.u)?;
                save("g", &r.g)?;
                save("f", &r.f)?;
                write_exhaustion_csv(File::create(out.join("exhaustion.csv"))?, &r.trace)?;
                for s in &r.trace {
                    m.insert(format!("correction_sup[{}]", s.step), s.correction_sup);
                }
                m.insert("residual".into(), residual);
                m.insert("moving_residual".into(), moving);
            }
            Command::OracleCompare => {
                let (rows, ok) = oracle_rows(self.cfg, self.domain)?;
                let mut csv = String::from("field,cauchy_diff,beurling_diff,pass\n");
                for (label, p, s) in &rows {
                    let pass = p.max(*s) <= self.cfg.oracle.tolerance;
                    csv.push_str(&format!("{label},{},{},{pass}\n", fmt_f64(*p), fmt_f64(*s)));
                    m.insert(format!("cauchy_diff[{label}]"), *p);
                    m.insert(format!("beurling_diff[{label}]"), *s);
                }
                std::fs::write(out.join("oracle.csv"), csv)?;
                self.passed = ok;
            }
            Command::Verify => unreachable!(),
        }
        Ok(())
    }
}

/// `(label, sup_Ω |P_spectral - P_quadrature|, sup_Ω |S_spectral - S_quadrature|)`
/// for each oracle field, and whether all are within tolerance.
fn oracle_rows(cfg: &Config, domain: DomainSpec) -> Result<(Vec<(String, f64, f64)>, bool)> {
    let mut rows = Vec::new();
    for (k, spec) in cfg.oracle.fields.iter().enumerate() {
        let phi = builtin_field(spec, domain)?.tapered();
        let (ps, ss) = cauchy_and_beurling(&phi, TransformMethod::Spectral);
        let (pq, sq) = cauchy_and_beurling(&phi, TransformMethod::Quadrature);
        rows.push((
            format!("{k}:{}", spec.kind),
            ps.max_diff_over(&pq, Region::Omega)?,
            ss.max_diff_over(&sq, Region::Omega)?,
        ));
    }
    let ok = rows
        .iter()
        .all(|(_, p, s)| p.max(*s) <= cfg.oracle.tolerance);
    Ok((rows, ok))
}

/// Reloads an output directory and recomputes every quantity the command
/// records as checkable. Writes `verify.csv`.
fn verify(out: &Path) -> Result<Outcome> {
    let cfg = Config::from_json(&std::fs::read_to_string(out.join("config.json"))?)?;
    let stored: Summary = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json"))?)
        .map_err(|e| Error::Format(format!("summary.json: {e}")))?;
    let domain = cfg.domain.build()?;
    let load = |name: &str, d: DomainSpec| load_field_on(out.join(format!("{name}.field")), d);
    let mut recomputed = BTreeMap::new();
    match stored.command {
        Command::SolveBeltrami => {
            let mu = BeltramiField::from_extension(load("mu", domain)?)?;
            let h = load("h", domain)?;
            let g = load("g", domain)?;
            recomputed.insert(
                "beltrami_residual".to_string(),
                beltrami_residual(&h, &mu, &ComplexField::zeros(domain))?,
            );
            recomputed.insert("min_abs_g".to_string(), g.min_abs_over(Region::Interior));
        }
        Command::SolveDbar | Command::Exhaust => {
            let d = if stored.command == Command::Exhaust {
                exhaust_domain(&cfg, domain)?
            } else {
                domain
            };
            let mu = BeltramiField::from_extension(load("mu", d)?)?;
            let (r, mr) = dbar_residuals(&load("f", d)?, &mu, &load("g", d)?, &load("u", d)?)?;
            recomputed.insert("residual".to_string(), r);
            recomputed.insert("moving_residual".to_string(), mr);
        }
        Command::SweepFamily => {
            let u = load("u", domain)?;
            for key in stored.metrics.keys().filter(|k| k.starts_with("residual[")) {
                let k = &key["residual[".len()..key.len() - 1];
                let mu = BeltramiField::from_extension(load(&format!("mu_{k}"), domain)?)?;
                let f = load(&format!("f_{k}"), domain)?;
                let g = load(&format!("g_{k}"), domain)?;
                let (r, mr) = dbar_residuals(&f, &mu, &g, &u)?;
                recomputed.insert(format!("residual[{k}]"), r);
                recomputed.insert(format!("moving_residual[{k}]"), mr);
            }
        }
        Command::OracleCompare => {
            for (label, p, s) in oracle_rows(&cfg, domain)?.0 {
                recomputed.insert(format!("cauchy_diff[{label}]"), p);
                recomputed.insert(format!("beurling_diff[{label}]"), s);
            }
        }
        Command::Verify => return Err(Error::Format("summary.json names `verify`".into())),
    }
    let mut passed = !recomputed.is_empty();
    let mut csv = String::from("quantity,stored,recomputed,abs_diff,pass\n");
    let mut metrics = BTreeMap::new();
    for (key, value) in &recomputed {
        let Some(&s) = stored.metrics.get(key) else {
            return Err(Error::Format(format!("summary.json lacks `{key}`")));
        };
        let diff = (s - value).abs();
        let ok = diff <= VERIFY_TOL;
        passed &= ok;
        csv.push_str(&format!(
            "{key},{},{},{},{ok}\n",
            fmt_f64(s),
            fmt_f64(*value),
            fmt_f64(diff)
        ));
        metrics.insert(key.clone(), diff);
    }
    std::fs::write(out.join("verify.csv"), csv)?;
    Ok(Outcome {
        passed,
        summary: Summary {
            command: Command::Verify,
            metrics,
        },
    })
}
