//! `approximate`, `convergence` and `bounds`.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use monoapprox::bounds::{
    calibrated_upper_constant, choose_params, lb_certificate, lb_curve, n_det_curse, n_ran_upper,
    ub_error, LbParams, McParams, UbError,
};
use monoapprox::grid::{fit_grid, grid_error_bound, grid_size_for};
use monoapprox::metrics::{fit_rate, l1_exact_grid, l1_mc, l1_midpoint, ErrorEstimate};
use monoapprox::rng::replication_seed;
use monoapprox::wavelet::{fit, FitOptions};
use monoapprox::{Budget, FamilySpec, Oracle};

use crate::config::{Algo, ExperimentConfig};
use crate::report::{meta, Cell, Report, Table};
use crate::{CliError, Result};

/// Side of a uniform grid on whose cells every member of `spec` is constant.
pub fn family_grid_side(spec: &FamilySpec) -> Option<u64> {
    match spec {
        FamilySpec::Const { .. } => Some(1),
        FamilySpec::Levelset { .. } => Some(2),
        FamilySpec::Step { m } => Some(*m),
        FamilySpec::Threshold { inner, .. } => family_grid_side(inner),
        FamilySpec::Boxbslash | FamilySpec::Linear => None,
    }
}

const MAX_REFINEMENT: u64 = 64;
const MIN_REFINEMENT: u64 = 8;

/// `||truth - model||_1` for a model constant on cells of side `model_side`:
/// exact when the truth is piecewise constant on a grid and the common
/// refinement fits the budget, a refined midpoint rule when that is cheap,
/// Monte Carlo otherwise.
pub fn measure_error(
    truth: &dyn Oracle,
    model: &dyn Oracle,
    d: usize,
    truth_side: Option<u64>,
    model_side: u64,
    probes: usize,
    seed: u64,
    budget: &Budget,
) -> Result<ErrorEstimate> {
    if let Some(t) = truth_side {
        let side = t.lcm(&model_side);
        if budget.check_power("L1 cells", side, d).is_ok() {
            return Ok(l1_exact_grid(truth, model, d, side, budget)?);
        }
    }
    let per_axis = (budget.cells as f64).powf(1.0 / d as f64).floor() as u64;
    let q = (per_axis / model_side).min(MAX_REFINEMENT);
    if q >= MIN_REFINEMENT && truth_side.is_none() {
        return Ok(l1_midpoint(truth, model, d, model_side * q, budget)?);
    }
    Ok(l1_mc(truth, model, d, probes, seed)?)
}

fn require_family(cfg: &ExperimentConfig) -> Result<FamilySpec> {
    cfg.family
        .clone()
        .ok_or_else(|| CliError::Usage("missing --family".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct Replication {
    pub replication: usize,
    pub seed: u64,
    pub error: ErrorEstimate,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub mean_error: f64,
    /// Standard error of the mean over replications (0 for one replication).
    pub std_error: f64,
}

pub fn summarize(errors: &[f64]) -> Summary {
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let std_error = if errors.len() > 1 {
        let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Summary { mean_error: mean, std_error }
}

/// Parameters the Monte Carlo method runs with.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McPlan {
    pub chosen: McParams,
    pub chosen_bound: UbError,
    pub used: McParams,
    pub used_bound: UbError,
    pub capped: bool,
}

pub fn plan_mc(cfg: &ExperimentConfig, d: usize) -> Result<McPlan> {
    let base = match cfg.eps {
        Some(eps) => choose_params(eps, d)?,
        None => McParams {
            d,
            k: 0,
            r: 0,
            n: 0,
            eps: f64::NAN,
        },
    };
    let missing = |what: &str| CliError::Usage(format!("give --eps or --{what}"));
    let chosen = McParams {
        k: cfg.k.or((base.k > 0).then_some(base.k)).ok_or_else(|| missing("k"))?,
        r: cfg.r.or((base.r > 0).then_some(base.r)).ok_or_else(|| missing("r"))?,
        n: cfg.n.or((base.n > 0).then_some(base.n)).ok_or_else(|| missing("n"))?,
        ..base
    };
    let used = McParams {
        n: chosen.n.min(cfg.max_samples),
        ..chosen
    };
    if used.n < chosen.n {
        log::warn!(
            "sample size {} exceeds the cap {}; running with the cap",
            chosen.n,
            used.n
        );
    }
    Ok(McPlan {
        chosen,
        chosen_bound: ub_error(&chosen)?,
        used,
        used_bound: ub_error(&used)?,
        capped: used.n < chosen.n,
    })
}

/// Fit on the member of `family` picked by `seed` and measure the error.
fn run_det(
    family: &FamilySpec,
    d: usize,
    m: u64,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<ErrorEstimate> {
    let budget = cfg.budget();
    let truth = family.build(d, seed, &budget)?;
    let model = fit_grid(&*truth, m, &budget)?;
    measure_error(&*truth, &model, d, family_grid_side(family), m, cfg.probes, seed, &budget)
}

fn run_mc(
    family: &FamilySpec,
    p: &McParams,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<ErrorEstimate> {
    let budget = cfg.budget();
    let truth = family.build(p.d, seed, &budget)?;
    let options = FitOptions {
        budget,
        coefficient_table: false,
    };
    let model = fit(&*truth, p.k, p.r, p.n as usize, seed, cfg.mode, &options)?;
    let side = 1u64 << p.r;
    measure_error(&*truth, &model, p.d, family_grid_side(family), side, cfg.probes, seed, &budget)
}

fn replicate(
    cfg: &ExperimentConfig,
    run: impl Fn(u64) -> Result<ErrorEstimate> + Sync,
) -> Result<Vec<Replication>> {
    (0..cfg.replications)
        .into_par_iter()
        .map(|i| {
            let seed = replication_seed(cfg.seed, i as u64);
            Ok(Replication {
                replication: i,
                seed,
                error: run(seed)?,
            })
        })
        .collect()
}

const APPROX_HEADER: [&str; 13] = [
    "replication", "seed", "algo", "d", "m", "k", "r", "n", "error", "std_error", "exact", "bound",
    "bound_used",
];

pub fn approximate(cfg: &ExperimentConfig) -> Result<Report> {
    let family = require_family(cfg)?;
    let d = cfg.require_d()?;
    let mut table = Table::new(APPROX_HEADER.to_vec());
    let (reps, bound, bound_used, params_json, param_cells) = match cfg.algo {
        Algo::Det => {
            let m = match (cfg.m, cfg.eps) {
                (Some(m), _) => m,
                (None, Some(eps)) => grid_size_for(d, eps)?,
                (None, None) => return Err(CliError::Usage("give --m or --eps".into())),
            };
            let reps = replicate(cfg, |seed| run_det(&family, d, m, seed, cfg))?;
            let bound = grid_error_bound(d, m);
            let cells = vec![Cell::from(m), Cell::Empty, Cell::Empty, Cell::from((m - 1).saturating_pow(d as u32))];
            (reps, bound, bound, json!({ "m": m, "lattice_points": (m - 1).saturating_pow(d as u32), "bound": bound }), cells)
        }
        Algo::Mc => {
            let plan = plan_mc(cfg, d)?;
            let reps = replicate(cfg, |seed| run_mc(&family, &plan.used, seed, cfg))?;
            let cells = vec![
                Cell::Empty,
                Cell::from(plan.used.k),
                Cell::from(plan.used.r),
                Cell::from(plan.used.n),
            ];
            (
                reps,
                plan.chosen_bound.total,
                plan.used_bound.total,
                serde_json::to_value(plan)?,
                cells,
            )
        }
    };
    let algo = match cfg.algo {
        Algo::Det => "det",
        Algo::Mc => "mc",
    };
    for rep in &reps {
        let mut row = vec![Cell::from(rep.replication), Cell::from(rep.seed), algo.into(), d.into()];
        row.extend(param_cells.iter().cloned());
        row.extend([
            rep.error.value.into(),
            rep.error.std_error.into(),
            rep.error.exact.into(),
            bound.into(),
            bound_used.into(),
        ]);
        table.push(row);
    }
    let errors: Vec<f64> = reps.iter().map(|r| r.error.value).collect();
    let summary = summarize(&errors);
    let mut row = vec![Cell::from("mean"), Cell::Empty, algo.into(), d.into()];
    row.extend(param_cells.iter().cloned());
    row.extend([
        summary.mean_error.into(),
        summary.std_error.into(),
        reps.iter().all(|r| r.error.exact).into(),
        bound.into(),
        bound_used.into(),
    ]);
    table.push(row);
    let json = json!({
        "meta": meta(cfg),
        "algo": algo,
        "params": params_json,
        "replications": reps,
        "summary": summary,
    });
    Ok(Report { table, json })
}

/// Default deterministic sweep; large enough that the rate is asymptotic.
pub fn default_ms(d: usize) -> Vec<u64> {
    match d {
        1 | 2 => vec![16, 32, 64, 128, 256],
        3 => vec![4, 8, 16, 32],
        _ => vec![2, 4, 8],
    }
}

pub const DEFAULT_NS: [u64; 4] = [256, 1024, 4096, 16384];

#[derive(Debug, Clone, Serialize)]
pub struct ConvergencePoint {
    pub m: Option<u64>,
    pub n: u64,
    pub error: f64,
    pub std_error: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub points: Vec<ConvergencePoint>,
    /// Least-squares slope of `log error` against `log n`.
    pub slope: f64,
}

pub fn convergence_points(cfg: &ExperimentConfig) -> Result<Convergence> {
    let d = cfg.require_d()?;
    let mut points = Vec::new();
    match cfg.algo {
        Algo::Det => {
            let family = cfg.family.clone().unwrap_or(FamilySpec::Linear);
            for m in cfg.ms.clone().unwrap_or_else(|| default_ms(d)) {
                if m < 2 {
                    return Err(CliError::Usage("grid sizes must be at least 2".into()));
                }
                let reps = replicate(cfg, |seed| run_det(&family, d, m, seed, cfg))?;
                let s = summarize(&reps.iter().map(|r| r.error.value).collect::<Vec<_>>());
                points.push(ConvergencePoint {
                    m: Some(m),
                    n: (m - 1).saturating_pow(d as u32),
                    error: s.mean_error,
                    std_error: s.std_error,
                    bound: grid_error_bound(d, m),
                });
            }
        }
        Algo::Mc => {
            let family = cfg.family.clone().unwrap_or(FamilySpec::Boxbslash);
            let base = choose_params(cfg.eps.unwrap_or(0.5), d)?;
            let k = cfg.k.unwrap_or(base.k);
            let r = cfg.r.unwrap_or(base.r);
            for n in cfg.ns.clone().unwrap_or_else(|| DEFAULT_NS.to_vec()) {
                let p = McParams { d, k, r, n, eps: base.eps };
                let reps = replicate(cfg, |seed| run_mc(&family, &p, seed, cfg))?;
                let s = summarize(&reps.iter().map(|r| r.error.value).collect::<Vec<_>>());
                points.push(ConvergencePoint {
                    m: None,
                    n,
                    error: s.mean_error,
                    std_error: s.std_error,
                    bound: ub_error(&p)?.total,
                });
            }
        }
    }
    let slope = fit_rate(&points.iter().map(|p| (p.n as f64, p.error)).collect::<Vec<_>>())?;
    Ok(Convergence { points, slope })
}

pub fn convergence(cfg: &ExperimentConfig) -> Result<Report> {
    let c = convergence_points(cfg)?;
    let mut table = Table::new(vec!["kind", "m", "n", "error", "std_error", "bound"]);
    for p in &c.points {
        table.push(vec![
            "point".into(),
            p.m.map_or(Cell::Empty, Cell::from),
            p.n.into(),
            p.error.into(),
            p.std_error.into(),
            p.bound.into(),
        ]);
    }
    table.push(vec![
        "slope".into(),
        Cell::Empty,
        Cell::Empty,
        c.slope.into(),
        Cell::Empty,
        Cell::Empty,
    ]);
    let json = json!({ "meta": meta(cfg), "convergence": c });
    Ok(Report { table, json })
}

pub const DEFAULT_EPS_LIST: [f64; 5] = [0.5, 1.0 / 3.0, 0.1, 1.0 / 15.0, 0.05];
pub const DEFAULT_D_LIST: [usize; 5] = [1, 2, 10, 100, 400];

pub fn bounds(cfg: &ExperimentConfig) -> Result<Report> {
    let eps_list = match (&cfg.eps_list, cfg.eps) {
        (Some(l), _) => l.clone(),
        (None, Some(e)) => vec![e],
        (None, None) => DEFAULT_EPS_LIST.to_vec(),
    };
    let d_list = match (&cfg.d_list, cfg.d) {
        (Some(l), _) => l.clone(),
        (None, Some(d)) => vec![d],
        (None, None) => DEFAULT_D_LIST.to_vec(),
    };
    let lb = LbParams {
        c0: cfg.c0,
        ..LbParams::default()
    };
    let mut table = Table::new(vec![
        "eps",
        "d",
        "upper_constant",
        "det_branch",
        "log_upper_randomized",
        "log_upper_deterministic",
        "n_ran_upper",
        "n_det_curse",
        "lb_valid",
        "lb_regime",
        "n_lower",
        "n_lower_sharp",
    ]);
    let mut rows = Vec::new();
    for &eps in &eps_list {
        for &d in &d_list {
            let up = n_ran_upper(eps, d, cfg.upper_constant, cfg.det_branch)?;
            let curse = n_det_curse(eps, d).ok();
            let low = lb_curve(&lb, eps, d)?;
            let regime = serde_json::to_value(low.regime)?;
            table.push(vec![
                eps.into(),
                d.into(),
                cfg.upper_constant.into(),
                serde_json::to_value(cfg.det_branch)?.as_str().unwrap_or_default().into(),
                up.log_randomized.into(),
                up.log_deterministic.into(),
                up.value.into(),
                curse.into(),
                low.valid.into(),
                regime.as_str().unwrap_or_default().into(),
                low.valid.then_some(low.n_lower).into(),
                low.valid.then_some(low.n_lower_sharp).into(),
            ]);
            rows.push(json!({
                "eps": eps,
                "d": d,
                "upper": up,
                "n_det_curse": curse,
                "lower": low,
            }));
        }
    }
    let json = json!({
        "meta": meta(cfg),
        "calibrated_upper_constant": calibrated_upper_constant(),
        "lower_bound_params": lb,
        "certificate": lb_certificate(&lb)?,
        "rows": rows,
    });
    Ok(Report { table, json })
}
