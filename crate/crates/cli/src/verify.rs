//! Desk-scale property suite behind `monoapprox verify`.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::{json, Value};

use monoapprox::bounds::{lb_certificate, lb_curve, n_det_curse, ub_error, choose_params, LbParams};
use monoapprox::functions::{
    is_monotone_on_grid, level_set_function, sample_u, step_function, unflatten, FnOracle,
};
use monoapprox::grid::fit_grid;
use monoapprox::haar::{enumerate_indices, psi_d};
use monoapprox::metrics::{
    all_coefficients, bakhvalov_brute_force, bakhvalov_step_error, diagonal_split_coefficient,
    exact_coefficient, l1_exact_grid, l2_norm_squared, tail_mass,
};
use monoapprox::rng::{replication_seed, rng_for, stream};
use monoapprox::wavelet::{chi_value, draw_samples, estimate_coefficients, fit, kernel_brute_force, FitOptions, Mode};
use monoapprox::{Budget, FamilySpec, MultiIndex, Oracle};

use crate::commands::convergence_points;
use crate::config::{Algo, ExperimentConfig, RunArgs};

/// Outcome of one property: a short detail line, or a serialized counterexample.
pub type Check = std::result::Result<String, Value>;

pub struct Property {
    pub name: &'static str,
    pub about: &'static str,
    pub run: fn(&Budget, u64) -> Check,
}

#[derive(Debug)]
pub struct PropertyResult {
    pub name: &'static str,
    pub elapsed: Duration,
    pub outcome: Check,
}

fn core(e: monoapprox::Error) -> Value {
    json!({ "error": e.to_string() })
}

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "certificate", about: "lower-bound certificate at d = 100", run: certificate },
        Property { name: "lower_curve", about: "lower-bound curve values", run: lower_curve },
        Property { name: "curse", about: "deterministic curse 2^(d-1)", run: curse },
        Property { name: "chi", about: "kernel table against brute force", run: chi },
        Property { name: "orthonormal", about: "Haar Gram matrix", run: orthonormal },
        Property { name: "monotone", about: "family members are monotone", run: monotone },
        Property { name: "collapse", about: "generalized output equals sign output", run: collapse },
        Property { name: "tail_bound", about: "tail mass bound", run: tail_bound },
        Property { name: "parseval", about: "coefficient energy equals L2 norm", run: parseval },
        Property { name: "estimator", about: "coefficient estimator mean and variance", run: estimator },
        Property { name: "grid", about: "grid error at most d/m", run: grid },
        Property { name: "rates", about: "deterministic convergence slopes", run: rates },
        Property { name: "bakhvalov", about: "average-case step error", run: bakhvalov },
        Property { name: "mc_bound", about: "Monte Carlo error below its bound", run: mc_bound },
    ]
}

/// Run the selected properties in order; `only = None` runs all.
pub fn run(only: Option<&[String]>, budget: &Budget, seed: u64) -> std::result::Result<Vec<PropertyResult>, String> {
    let all = properties();
    if let Some(names) = only {
        if let Some(bad) = names.iter().find(|n| !all.iter().any(|p| p.name == n.as_str())) {
            return Err(format!("unknown property `{bad}`"));
        }
    }
    Ok(all
        .into_iter()
        .filter(|p| only.map_or(true, |o| o.iter().any(|n| n == p.name)))
        .map(|p| {
            let start = Instant::now();
            let outcome = (p.run)(budget, seed);
            PropertyResult { name: p.name, elapsed: start.elapsed(), outcome }
        })
        .collect())
}

fn certificate(_: &Budget, _: u64) -> Check {
    let c = lb_certificate(&LbParams::default()).map_err(core)?;
    let detail = format!(
        "eps_hat={:.10} (target 0.0666667) r0={:.7} r1={:.6} r_B={:.7} q0={:.7} q={:.7} gamma={:.4e} sigma={:.7}",
        c.eps_hat, c.r0, c.r1, c.r_b, c.q0, c.q, c.gamma, c.sigma
    );
    if (c.eps_hat - 0.0666667).abs() < 1e-3 {
        Ok(detail)
    } else {
        Err(json!({ "components": c }))
    }
}

fn lower_curve(_: &Budget, _: u64) -> Check {
    let p = LbParams::default();
    let a = lb_curve(&p, 1.0 / 15.0, 100).map_err(core)?;
    let b = lb_curve(&p, 1.0 / 15.0, 400).map_err(core)?;
    let want = 108.0 * 10f64.exp();
    if a.valid && (a.n_lower - 108.0).abs() < 1e-9 && b.valid && (b.n_lower - want).abs() <= 4.0 * f64::EPSILON * want {
        Ok(format!("n_lower(d=100)={} n_lower(d=400)={}", a.n_lower, b.n_lower))
    } else {
        Err(json!({ "d100": a, "d400": b, "want_d400": want }))
    }
}

fn curse(_: &Budget, _: u64) -> Check {
    for d in 1..=30usize {
        let v = n_det_curse(0.5, d).map_err(core)?;
        if v != (1u64 << (d - 1)) as f64 {
            return Err(json!({ "d": d, "value": v }));
        }
    }
    Ok("d = 1..30".into())
}

/// Points `xs`, `x` whose resolution-`r` cells agree in exactly the first `b` coordinates.
fn pair_with_matches(d: usize, b: usize, r: u32, rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    let side = 1u64 << r;
    let mut xs = Vec::with_capacity(d);
    let mut x = Vec::with_capacity(d);
    for j in 0..d {
        let c = rng.gen_range(0..side);
        let c2 = if j < b { c } else { (c + rng.gen_range(1..side)) % side };
        xs.push((c as f64 + rng.gen::<f64>()) / side as f64);
        x.push((c2 as f64 + rng.gen::<f64>()) / side as f64);
    }
    (xs, x)
}

fn chi(_: &Budget, seed: u64) -> Check {
    let mut rng = rng_for(seed, stream::PROBES);
    let mut cases = 0;
    for d in 1..=3 {
        for r in 1..=2 {
            for k in 0..=d {
                for b in 0..=d {
                    let (xs, x) = pair_with_matches(d, b, r, &mut rng);
                    let brute = kernel_brute_force(&xs, &x, k, r).map_err(core)?;
                    let exact = chi_value(b, d, k, r).map_err(core)?;
                    if (brute - brute.round()).abs() > 1e-9 || brute.round().to_string() != exact.to_string() {
                        return Err(json!({ "d": d, "r": r, "k": k, "b": b, "brute": brute, "chi": exact.to_string() }));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn orthonormal(budget: &Budget, _: u64) -> Check {
    for d in 1..=2 {
        let r = 2;
        let indices: Vec<MultiIndex> = enumerate_indices(d, d, r).map_err(core)?.collect();
        for a in &indices {
            let psi_a = {
                let a = a.clone();
                FnOracle::new(d, move |x: &[f64]| psi_d(&a, x).expect("point in cube"))
            };
            for b in &indices {
                let g = exact_coefficient(&psi_a, b, d, r, budget).map_err(core)?;
                let want = if a == b { 1.0 } else { 0.0 };
                if (g - want).abs() > 1e-12 {
                    return Err(json!({ "a": a, "b": b, "inner_product": g }));
                }
            }
        }
    }
    Ok("d <= 2, r = 2".into())
}

fn monotone(budget: &Budget, seed: u64) -> Check {
    for spec in ["boxbslash", "linear", "step:m=3", "levelset:t=1,b=2,p=0.5"] {
        let family: FamilySpec = spec.parse().map_err(core)?;
        for d in 2..=3 {
            let f = family.build(d, seed, budget).map_err(core)?;
            if !is_monotone_on_grid(&*f, d, 6, budget).map_err(core)? {
                return Err(json!({ "family": spec, "d": d, "seed": seed }));
            }
        }
    }
    Ok("4 families, d in {2,3}".into())
}

fn collapse(budget: &Budget, seed: u64) -> Check {
    let options = FitOptions { budget: *budget, coefficient_table: false };
    let specs = ["boxbslash", "levelset:t=1,b=2,p=0.5"];
    let mut probes = rng_for(seed, stream::PROBES);
    for i in 0..6u64 {
        let spec: FamilySpec = specs[i as usize % 2].parse().map_err(core)?;
        let d = 2 + i as usize % 3;
        let s = replication_seed(seed, i);
        let truth = spec.build(d, s, budget).map_err(core)?;
        let generalized = fit(&*truth, d.min(2), 2, 64, s, Mode::Generalized, &options).map_err(core)?;
        let sign = fit(&*truth, d.min(2), 2, 64, s, Mode::Sign, &options).map_err(core)?;
        for _ in 0..200 {
            let x: Vec<f64> = (0..d).map(|_| probes.gen()).collect();
            let g = generalized.eval_generalized(&x).map_err(core)?;
            let h = sign.eval_sign(&x).map_err(core)?;
            if g != h {
                return Err(json!({ "family": spec.to_string(), "d": d, "seed": s, "x": x, "generalized": g, "sign": h }));
            }
        }
    }
    Ok("6 fits x 200 probes".into())
}

fn random_truths(budget: &Budget, seed: u64, count: u64) -> Result<Vec<(String, usize, u32, Box<dyn Oracle>)>, Value> {
    let mut out: Vec<(String, usize, u32, Box<dyn Oracle>)> = Vec::new();
    for i in 0..count {
        let s = replication_seed(seed, i);
        let d = 2 + (i % 2) as usize;
        if i % 2 == 0 {
            let t = 1 + (i / 2 % d as u64) as u32;
            let u = sample_u(d, t, 0.5, s, budget).map_err(core)?;
            let f = level_set_function(d, t, d as u32, u).map_err(core)?;
            out.push((format!("levelset d={d} t={t} seed={s}"), d, 1, Box::new(f)));
        } else {
            let delta = monoapprox::functions::random_delta(d, 4, s, budget).map_err(core)?;
            let f = step_function(d, 4, delta).map_err(core)?;
            out.push((format!("step d={d} m=4 seed={s}"), d, 2, Box::new(f)));
        }
    }
    Ok(out)
}

fn tail_bound(budget: &Budget, seed: u64) -> Check {
    let mut checked = 0;
    for (label, d, res, f) in random_truths(budget, seed, 20)? {
        for r in res..=2 {
            for k in 0..=d {
                let tail = tail_mass(&*f, d, k, r, budget).map_err(core)?;
                let bound = ((d as f64) * r as f64).sqrt() / (k as f64 + 1.0);
                if tail > bound {
                    return Err(json!({ "function": label, "k": k, "r": r, "tail": tail, "bound": bound }));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (function, r, k) triples"))
}

fn parseval(budget: &Budget, seed: u64) -> Check {
    for (label, d, res, f) in random_truths(budget, seed, 10)? {
        for r in res..=2 {
            let table = all_coefficients(&*f, d, r, budget).map_err(core)?;
            let energy: f64 = table.iter().map(|(_, c)| c * c).sum();
            let norm = l2_norm_squared(&*f, d, r, budget).map_err(core)?;
            if (energy - norm).abs() > 1e-10 {
                return Err(json!({ "function": label, "r": r, "energy": energy, "l2": norm }));
            }
        }
    }
    Ok("10 functions".into())
}

fn estimator(budget: &Budget, seed: u64) -> Check {
    let d = 3;
    let f = monoapprox::functions::boxbslash(d).map_err(core)?;
    let picks = [vec![1, 0, 0], vec![1, 1, 0], vec![2, 0, 3]];
    let indices: Vec<MultiIndex> = picks.iter().map(|a| MultiIndex::new(a.clone()).map_err(core)).collect::<Result<_, _>>()?;
    let n = 256;
    let reps = 100;
    let mut draws = vec![Vec::with_capacity(reps); indices.len()];
    for i in 0..reps as u64 {
        let samples = draw_samples(&f, n, replication_seed(seed, i)).map_err(core)?;
        let table = estimate_coefficients(&samples, 2, 2, budget).map_err(core)?;
        for (slot, m) in draws.iter_mut().zip(&indices) {
            slot.push(table.get(m).unwrap_or(0.0));
        }
    }
    for (m, xs) in indices.iter().zip(&draws) {
        let truth = diagonal_split_coefficient(m);
        let mean = xs.iter().sum::<f64>() / reps as f64;
        let var = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
        let se = (var / reps as f64).sqrt();
        if (mean - truth).abs() > 4.0 * se || var > 1.2 / n as f64 {
            return Err(json!({ "index": m, "mean": mean, "exact": truth, "std_error": se, "variance": var }));
        }
    }
    Ok(format!("{} indices, {reps} replications, n = {n}", indices.len()))
}

fn grid(budget: &Budget, seed: u64) -> Check {
    let mut checked = 0;
    for bits in 0u64..16 {
        let delta: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
        let f = step_function(2, 2, delta).map_err(core)?;
        let g = fit_grid(&f, 2, budget).map_err(core)?;
        let e = l1_exact_grid(&f, &g, 2, 2, budget).map_err(core)?.value;
        if e > 1.0 + 1e-15 {
            return Err(json!({ "delta_bits": bits, "error": e, "bound": 1.0 }));
        }
        checked += 1;
    }
    for i in 0..10u64 {
        let s = replication_seed(seed, i);
        let u = sample_u(3, 1 + (i % 3) as u32, 0.5, s, budget).map_err(core)?;
        let f = level_set_function(3, 1 + (i % 3) as u32, 3, u).map_err(core)?;
        for m in [2u64, 4] {
            let g = fit_grid(&f, m, budget).map_err(core)?;
            let e = l1_exact_grid(&f, &g, 3, m.max(2), budget).map_err(core)?.value;
            if e > 3.0 / m as f64 + 1e-15 {
                return Err(json!({ "seed": s, "m": m, "error": e, "bound": 3.0 / m as f64 }));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} truths"))
}

fn rates(budget: &Budget, _: u64) -> Check {
    let mut detail = Vec::new();
    for (d, lo, hi) in [(1usize, -1.1, -0.9), (2, -0.65, -0.35)] {
        let args = RunArgs { d: Some(d), algo: Some(Algo::Det), budget_cells: Some(budget.cells), ..Default::default() };
        let cfg = ExperimentConfig::resolve("convergence", &args).map_err(|e| json!({ "error": e.to_string() }))?;
        let c = convergence_points(&cfg).map_err(|e| json!({ "error": e.to_string() }))?;
        if !(lo..=hi).contains(&c.slope) {
            return Err(json!({ "d": d, "slope": c.slope, "points": c.points }));
        }
        detail.push(format!("d={d} slope={:.4}", c.slope));
    }
    Ok(detail.join(", "))
}

fn bakhvalov(budget: &Budget, _: u64) -> Check {
    let (d, m) = (2usize, 2u64);
    for mask in 0u64..16 {
        let sampled: HashSet<Vec<u64>> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| unflatten(i, m, d)).collect();
        let j = sampled.len() as f64;
        let formula = (1.0 - j / 4.0) / 3.0;
        let value = bakhvalov_step_error(d, m, &sampled).map_err(core)?;
        let brute = bakhvalov_brute_force(d, m, &sampled, budget).map_err(core)?;
        if (value - formula).abs() > 1e-15 || (brute - formula).abs() > 1e-12 {
            return Err(json!({ "sampled_mask": mask, "value": value, "brute_force": brute, "formula": formula }));
        }
    }
    Ok("all 16 sampled sets".into())
}

fn mc_bound(budget: &Budget, seed: u64) -> Check {
    let p = choose_params(0.5, 2).map_err(core)?;
    let bound = ub_error(&p).map_err(core)?.total;
    let options = FitOptions { budget: *budget, coefficient_table: false };
    let mut total = 0.0;
    let reps = 3;
    for i in 0..reps {
        let s = replication_seed(seed, i);
        let u = sample_u(2, 1, 0.5, s, budget).map_err(core)?;
        let f = level_set_function(2, 1, 2, u).map_err(core)?;
        let model = fit(&f, p.k, p.r, 1 << 14, s, Mode::Sign, &options).map_err(core)?;
        total += l1_exact_grid(&f, &model, 2, 1 << p.r, budget).map_err(core)?.value;
    }
    let mean = total / reps as f64;
    if mean <= bound {
        Ok(format!("mean error {mean:.4} <= bound {bound:.4}"))
    } else {
        Err(json!({ "mean_error": mean, "bound": bound }))
    }
}
