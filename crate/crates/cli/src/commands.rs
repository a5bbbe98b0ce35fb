//! Command implementations. Each writes `<command>.csv` and `<command>.json`
//! into the output directory and returns a one-line summary.

use std::fs;
use std::path::{Path, PathBuf};

use jamnet_core::asym::{direct_mmse_cost, residual_names, solve_theorem4, solve_theorem5, SolverConfig};
use jamnet_core::bounds::{ceo_curve, ceo_estimation_distortion, maximal_correlation_discrete};
use jamnet_core::model::AdversaryStrategy;
use jamnet_core::simulate::{run_monte_carlo_chunked, verify_with, CheckMode, GridConfig, ProbeConfig, THREADS_ENV};
use jamnet_core::simulate::{GRID_TOLERANCE, PROBE_TOLERANCE};
use jamnet_core::symmetric::{solve_setting1, solve_setting2, solve_setting3, Setting3Branch};
use jamnet_core::{EquilibriumReport, Error, NetworkScenario, Setting};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{with_param, Command, RunConfig};
use crate::CliError;

/// Maximal-correlation grid: 257 midpoints over plus or minus 5 standard deviations.
pub const MAXCORR_GRID: usize = 257;
pub const MAXCORR_RANGE: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub summary: String,
    pub csv_path: Option<PathBuf>,
    pub json_path: PathBuf,
}

struct Output {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    json: serde_json::Value,
    summary: String,
    exit_code: i32,
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// Equilibrium of the scenario's setting, with the SymIII branch if any.
fn equilibrium(s: &NetworkScenario) -> jamnet_core::Result<(EquilibriumReport, Option<Setting3Branch>)> {
    match s.setting {
        Setting::SymI => Ok((solve_setting1(s)?, None)),
        Setting::SymII => Ok((solve_setting2(s)?, None)),
        Setting::SymIII => {
            let out = solve_setting3(s)?;
            Ok((out.report().clone(), Some(out.branch())))
        }
        Setting::AsymI => Ok((solve_theorem4(s)?, None)),
        Setting::AsymII => Ok((solve_theorem5(s, &SolverConfig::default())?, None)),
    }
}

fn failure_json(command: Command, s: &NetworkScenario, e: &Error) -> serde_json::Value {
    let names = if s.setting == Setting::AsymII {
        residual_names(s.m(), s.k())
    } else {
        Vec::new()
    };
    json!({
        "command": command.name(),
        "status": "solver_failure",
        "error": e.to_string(),
        "residuals": e.residuals(),
        "residual_names": names,
        "scenario": s,
    })
}

/// Writes the result files for `cfg` and returns the process outcome.
/// Solver failures produce exit code 2 and a JSON report with residuals;
/// only configuration and I/O problems are returned as errors.
pub fn run_command(cfg: &RunConfig, out_dir: Option<&Path>, seed: Option<u64>) -> Result<Outcome, CliError> {
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_path.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let s = &cfg.scenario;
    let result = match cfg.command {
        Command::ClosedForm => closed_form(s),
        Command::SolveAsym => solve_asym(s),
        Command::Simulate => simulate(cfg, seed),
        Command::Verify => verify(s, seed),
        Command::CeoCurve => Ok(ceo(cfg)),
        Command::Maxcorr => maxcorr(cfg),
        Command::Sweep => sweep(cfg),
    };
    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let json_path = dir.join(format!("{}.json", cfg.command.name()));
    let output = match result {
        Ok(o) => o,
        Err(CliError::Scenario(e)) if e.is_solver_failure() => {
            write_json(&json_path, &failure_json(cfg.command, s, &e))?;
            return Ok(Outcome {
                exit_code: 2,
                summary: format!("{} failed: {e}", cfg.command.name()),
                csv_path: None,
                json_path,
            });
        }
        Err(e) => return Err(e),
    };
    let csv_path = dir.join(format!("{}.csv", cfg.command.name()));
    write_csv(&csv_path, &output.header, &output.rows)?;
    write_json(&json_path, &output.json)?;
    Ok(Outcome {
        exit_code: output.exit_code,
        summary: output.summary,
        csv_path: Some(csv_path),
        json_path,
    })
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn report_json(
    command: Command,
    s: &NetworkScenario,
    r: &EquilibriumReport,
    branch: Option<Setting3Branch>,
) -> serde_json::Value {
    let mut v = json!({
        "command": command.name(),
        "status": "ok",
        "scenario": s,
        "report": r,
    });
    if let Some(b) = branch {
        v["setting3_branch"] = json!(b);
    }
    v
}

fn closed_form(s: &NetworkScenario) -> Result<Output, CliError> {
    let (r, branch) = equilibrium(s)?;
    let printed = r.closed_form_cost.unwrap_or(r.cost);
    let (alpha, beta, power) = match s.symmetric_params() {
        Some(p) if s.setting.is_symmetric() => (num(p.alpha), num(p.beta), num(p.power)),
        _ => (String::new(), String::new(), num(s.p_t()?)),
    };
    let row = vec![
        s.setting.name().to_string(),
        s.m().to_string(),
        s.k().to_string(),
        alpha,
        beta,
        power,
        num(printed),
        num(r.oracle_cost),
    ];
    Ok(Output {
        header: header(&["setting", "M", "K", "alpha", "beta", "P", "cost_printed", "cost_oracle"]),
        rows: vec![row],
        summary: format!(
            "closed-form {} M={} K={}: cost {} (oracle {})",
            s.setting.name(),
            s.m(),
            s.k(),
            printed,
            r.oracle_cost
        ),
        json: report_json(Command::ClosedForm, s, &r, branch),
        exit_code: 0,
    })
}

/// One number per adversary: the mirror gain for `LinearMirror`, the noise
/// standard deviation for noise strategies.
fn adversary_columns(s: &NetworkScenario, a: &AdversaryStrategy) -> Vec<f64> {
    match a {
        AdversaryStrategy::LinearMirror { coeffs } => coeffs.clone(),
        AdversaryStrategy::IndependentNoise { variances } => variances.iter().map(|v| v.sqrt()).collect(),
        AdversaryStrategy::CoordinatedNoise { variance } => vec![variance.sqrt(); s.k()],
        AdversaryStrategy::PartiallyCoordinatedNoise { variance, .. } => vec![variance.sqrt(); s.k()],
        AdversaryStrategy::GeneralLinearGaussian { terms } => terms.iter().map(|t| t.power().sqrt()).collect(),
    }
}

fn solve_asym(s: &NetworkScenario) -> Result<Output, CliError> {
    let (r, _) = equilibrium(s)?;
    let mut cols = header(&["lambda1", "lambda2", "lambda3", "lambda4"]);
    cols.extend((1..=s.m() + s.k()).map(|i| format!("c_{i}")));
    cols.extend(header(&["cost_oracle", "max_kkt_residual"]));
    let multiplier = |name: &str| r.multipliers.get(name).map(|x| num(*x)).unwrap_or_default();
    // The coordinated game has no lambda3/lambda4; those cells stay empty.
    let mut row: Vec<String> = ["lambda1", "lambda2", "lambda3", "lambda4"]
        .iter()
        .map(|n| multiplier(n))
        .collect();
    row.extend(r.profile.transmit_coeffs.iter().map(|c| num(*c)));
    row.extend(adversary_columns(s, &r.profile.adversary).into_iter().map(num));
    row.push(num(r.oracle_cost));
    row.push(num(r.max_kkt_residual()));
    Ok(Output {
        header: cols,
        rows: vec![row],
        summary: format!(
            "solve-asym {} M={} K={}: cost {} (max KKT residual {:e})",
            s.setting.name(),
            s.m(),
            s.k(),
            r.oracle_cost,
            r.max_kkt_residual()
        ),
        json: report_json(Command::SolveAsym, s, &r, None),
        exit_code: 0,
    })
}

fn simulate(cfg: &RunConfig, seed: Option<u64>) -> Result<Output, CliError> {
    let s = &cfg.scenario;
    let mc = cfg.monte_carlo.expect("checked by parse_config");
    let seed = seed.unwrap_or(mc.seed);
    let (r, branch) = equilibrium(s)?;
    let analytic = direct_mmse_cost(s, &r.profile)?;
    let res = run_monte_carlo_chunked(s, &r.profile, mc.samples, seed, mc.chunks)?;
    let mut json = report_json(Command::Simulate, s, &r, branch);
    json["monte_carlo"] = json!(res);
    json["analytic_mse"] = json!(analytic);
    Ok(Output {
        header: header(&["samples", "seed", "empirical_mse", "standard_error", "analytic_mse"]),
        rows: vec![vec![
            res.samples.to_string(),
            seed.to_string(),
            num(res.empirical_mse),
            num(res.standard_error),
            num(analytic),
        ]],
        summary: format!(
            "simulate {}: empirical {} +/- {} vs analytic {} ({} samples, seed {seed})",
            s.setting.name(),
            res.empirical_mse,
            res.standard_error,
            analytic,
            res.samples
        ),
        json,
        exit_code: 0,
    })
}

fn verify(s: &NetworkScenario, seed: Option<u64>) -> Result<Output, CliError> {
    let (r, branch) = equilibrium(s)?;
    let mut probes = ProbeConfig::default();
    if let Some(seed) = seed {
        probes.seed = seed;
    }
    let mode = CheckMode::for_setting(s.setting);
    let check = verify_with(s, &r.profile, mode, &GridConfig::default(), &probes)?;
    let adversary_tol = match mode {
        CheckMode::Saddle => GRID_TOLERANCE,
        CheckMode::Stackelberg => PROBE_TOLERANCE,
    };
    let row = |side: &str, rep: &jamnet_core::simulate::BestResponseReport, tol: f64, ok: bool| {
        vec![
            side.to_string(),
            format!("{mode:?}"),
            num(rep.base_cost),
            num(rep.best_deviation_cost),
            num(rep.improvement()),
            num(tol),
            ok.to_string(),
            rep.deviation_params.clone(),
        ]
    };
    let rows = vec![
        row("adversary", &check.adversary, adversary_tol, check.adversary_ok),
        row("transmitter", &check.transmitter, PROBE_TOLERANCE, check.transmitter_ok),
    ];
    let mut json = report_json(Command::Verify, s, &r, branch);
    json["check"] = json!(check);
    json["holds"] = json!(check.holds());
    Ok(Output {
        header: header(&[
            "side",
            "mode",
            "base_cost",
            "best_deviation_cost",
            "improvement",
            "tolerance",
            "holds",
            "deviation",
        ]),
        rows,
        summary: format!(
            "verify {} ({mode:?}): {} (adversary best {}, transmitter best {}, base {})",
            s.setting.name(),
            if check.holds() { "holds" } else { "violated" },
            check.adversary.best_deviation_cost,
            check.transmitter.best_deviation_cost,
            check.adversary.base_cost
        ),
        json,
        exit_code: 0,
    })
}

fn ceo(cfg: &RunConfig) -> Output {
    let s = &cfg.scenario;
    let sw = cfg.sweep.as_ref().expect("checked by parse_config");
    let betas: Vec<f64> = s.transmitters.iter().map(|p| p.beta).collect();
    let d_est = ceo_estimation_distortion(&betas, s.source_variance);
    let curve = ceo_curve(sw.from, sw.to, sw.steps, &betas, s.source_variance);
    let rows = curve
        .iter()
        .map(|p| vec![num(p.rate), num(p.distortion), num(d_est), num(p.distortion - d_est)])
        .collect();
    Output {
        header: header(&["rate", "distortion", "estimation_distortion", "compression_distortion"]),
        rows,
        summary: format!(
            "ceo-curve M={}: D({}) = {}, D({}) = {}, floor {d_est}",
            s.m(),
            sw.from,
            curve.first().map_or(f64::NAN, |p| p.distortion),
            sw.to,
            curve.last().map_or(f64::NAN, |p| p.distortion)
        ),
        json: json!({
            "command": Command::CeoCurve.name(),
            "status": "ok",
            "betas": betas,
            "source_variance": s.source_variance,
            "estimation_distortion": d_est,
            "curve": curve,
        }),
        exit_code: 0,
    }
}

fn maxcorr(cfg: &RunConfig) -> Result<Output, CliError> {
    let sw = cfg.sweep.as_ref().expect("checked by parse_config");
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut worst = 0.0f64;
    for rho in sw.values() {
        let v = maximal_correlation_discrete(rho, MAXCORR_GRID, MAXCORR_RANGE)?;
        let err = (v - rho.abs()).abs();
        worst = worst.max(err);
        rows.push(vec![
            num(rho),
            MAXCORR_GRID.to_string(),
            num(MAXCORR_RANGE),
            num(v),
            num(err),
        ]);
        points.push(json!({"rho": rho, "max_correlation": v, "abs_error": err}));
    }
    Ok(Output {
        header: header(&["rho", "grid_n", "range_sigmas", "max_correlation", "abs_error"]),
        rows,
        summary: format!("maxcorr: {} points, worst |rho* - |rho|| = {worst:e}", points.len()),
        json: json!({
            "command": Command::Maxcorr.name(),
            "status": "ok",
            "grid_n": MAXCORR_GRID,
            "range_sigmas": MAXCORR_RANGE,
            "points": points,
        }),
        exit_code: 0,
    })
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    value: f64,
    status: &'static str,
    cost: Option<f64>,
    cost_oracle: Option<f64>,
    error: Option<String>,
    discrepancies: Vec<String>,
}

fn sweep_point(s: &NetworkScenario, param: &str, value: f64) -> SweepRow {
    let row = |status, cost, cost_oracle, error| SweepRow {
        value,
        status,
        cost,
        cost_oracle,
        error,
        discrepancies: Vec::new(),
    };
    let s = match with_param(s, param, value) {
        Ok(s) => s,
        Err(e) => return row("invalid", None, None, Some(e.to_string())),
    };
    match equilibrium(&s) {
        Ok((r, _)) => SweepRow {
            discrepancies: r.discrepancy_notes.clone(),
            ..row("ok", Some(r.cost), Some(r.oracle_cost), None)
        },
        // Nothing reaches the receiver; the estimate is the prior mean.
        Err(Error::AdversaryDominates) => row(
            "adversary_dominates",
            Some(s.source_variance),
            Some(s.source_variance),
            None,
        ),
        Err(e) => row("solver_failure", None, None, Some(e.to_string())),
    }
}

/// Worker pool capped by `JAMNET_THREADS` when set.
fn sweep_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let sw = cfg.sweep.as_ref().expect("checked by parse_config");
    let s = &cfg.scenario;
    let values = sw.values();
    let points: Vec<SweepRow> =
        sweep_pool().install(|| values.par_iter().map(|v| sweep_point(s, &sw.param, *v)).collect());
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let rows = points
        .iter()
        .map(|p| {
            vec![
                sw.param.clone(),
                num(p.value),
                p.status.to_string(),
                opt(p.cost),
                opt(p.cost_oracle),
            ]
        })
        .collect();
    let failed = points.iter().filter(|p| p.status == "solver_failure").count();
    let invalid = points.iter().filter(|p| p.status == "invalid").count();
    Ok(Output {
        header: header(&["param", "value", "status", "cost", "cost_oracle"]),
        rows,
        summary: format!(
            "sweep {} over {} points: {} solver failures, {} invalid",
            sw.param,
            points.len(),
            failed,
            invalid
        ),
        json: json!({
            "command": Command::Sweep.name(),
            "status": if failed == 0 { "ok" } else { "partial" },
            "scenario": s,
            "param": sw.param,
            "rows": points,
        }),
        exit_code: if failed > 0 { 2 } else { 0 },
    })
}
