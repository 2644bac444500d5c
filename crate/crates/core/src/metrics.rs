//! `L1` distances, wavelet coefficient oracles and rate fitting.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Error, Result};
use crate::functions::{step_function, unflatten, Oracle};
use crate::haar::{psi_d, Level, MultiIndex, MAX_LEVEL};
use crate::rng::{rng_for, stream};
use crate::sum::CompensatedSum;
use crate::wavelet::CoefficientTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub value: f64,
    pub std_error: f64,
    pub exact: bool,
    pub n_used: u64,
}

impl ErrorEstimate {
    fn exact(value: f64, n_used: u64) -> Self {
        Self {
            value,
            std_error: 0.0,
            exact: true,
            n_used,
        }
    }
}

/// Midpoint of cell `flat` in the uniform grid with `side` cells per axis.
fn cell_midpoint(flat: u64, side: u64, d: usize) -> Vec<f64> {
    unflatten(flat, side, d)
        .into_iter()
        .map(|c| (c as f64 + 0.5) / side as f64)
        .collect()
}

/// Sum of `term(midpoint)` over the uniform grid, deterministic under parallelism.
fn grid_sum(side: u64, d: usize, cells: u64, term: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
    const CHUNK: u64 = 1 << 12;
    let chunks = cells.div_ceil(CHUNK);
    let partials: Vec<CompensatedSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(cells))
                .map(|flat| term(&cell_midpoint(flat, side, d)))
                .collect()
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

const SPOT_CHECKS: usize = 100;

/// Check that `|f - g|` looks constant on cells of the given side length.
fn spot_check_constant<F: Oracle + ?Sized, G: Oracle + ?Sized>(
    f: &F,
    g: &G,
    d: usize,
    side: u64,
) -> Result<()> {
    let mut rng = rng_for(0x5eed, stream::PROBES);
    let cells = (side as f64).powi(d as i32);
    for _ in 0..SPOT_CHECKS {
        let flat = (rng.gen::<f64>() * cells) as u64;
        let cell = unflatten(flat, side, d);
        let mut a = Vec::with_capacity(d);
        let mut b = Vec::with_capacity(d);
        for &c in &cell {
            // stay off cell faces
            let u: f64 = rng.gen_range(0.01..0.99);
            let v: f64 = rng.gen_range(0.01..0.99);
            a.push((c as f64 + u) / side as f64);
            b.push((c as f64 + v) / side as f64);
        }
        if (f.eval(&a) - g.eval(&a)).abs() != (f.eval(&b) - g.eval(&b)).abs() {
            return Err(Error::InputContract(format!(
                "|f - g| is not constant on the resolution cell containing {a:?}"
            )));
        }
    }
    Ok(())
}

/// Exact `L1` distance of two functions constant on the `2^{rd}` dyadic cells.
pub fn l1_exact_dyadic<F: Oracle + ?Sized, G: Oracle + ?Sized>(
    f: &F,
    g: &G,
    d: usize,
    resolution: u32,
    budget: &Budget,
) -> Result<ErrorEstimate> {
    if resolution > MAX_LEVEL {
        return Err(domain("resolution too large"));
    }
    l1_exact_grid(f, g, d, 1u64 << resolution, budget)
}

/// Exact `L1` distance of two functions constant on the cells of the uniform
/// grid with `side` cells per axis.
pub fn l1_exact_grid<F: Oracle + ?Sized, G: Oracle + ?Sized>(
    f: &F,
    g: &G,
    d: usize,
    side: u64,
    budget: &Budget,
) -> Result<ErrorEstimate> {
    if d == 0 || side == 0 {
        return Err(domain("need d >= 1 and at least one cell per axis"));
    }
    let cells = budget.check_power("L1 cells", side, d)?;
    spot_check_constant(f, g, d, side)?;
    let total = grid_sum(side, d, cells, |x| (f.eval(x) - g.eval(x)).abs());
    Ok(ErrorEstimate::exact(total / cells as f64, cells))
}

/// Tensor midpoint rule for `||f - g||_1` with `points_per_axis^d` nodes.
pub fn l1_midpoint<F: Oracle + ?Sized, G: Oracle + ?Sized>(
    f: &F,
    g: &G,
    d: usize,
    points_per_axis: u64,
    budget: &Budget,
) -> Result<ErrorEstimate> {
    if d == 0 || points_per_axis == 0 {
        return Err(domain("need d >= 1 and at least one node per axis"));
    }
    let cells = budget.check_power("quadrature nodes", points_per_axis, d)?;
    let total = grid_sum(points_per_axis, d, cells, |x| (f.eval(x) - g.eval(x)).abs());
    Ok(ErrorEstimate {
        value: total / cells as f64,
        std_error: 0.0,
        exact: false,
        n_used: cells,
    })
}

/// Monte Carlo estimate of `||f - g||_1` from `n_probe` uniform points.
pub fn l1_mc<F: Oracle + ?Sized, G: Oracle + ?Sized>(
    f: &F,
    g: &G,
    d: usize,
    n_probe: usize,
    seed: u64,
) -> Result<ErrorEstimate> {
    if n_probe < 2 {
        return Err(domain("need at least two probe points"));
    }
    let mut rng = rng_for(seed, stream::PROBES);
    let points: Vec<f64> = (0..n_probe * d).map(|_| rng.gen::<f64>()).collect();
    let diffs: Vec<f64> = points
        .par_chunks(d)
        .map(|x| (f.eval(x) - g.eval(x)).abs())
        .collect();
    let n = n_probe as f64;
    let mean = diffs.iter().copied().collect::<CompensatedSum>().value() / n;
    let var = diffs
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .collect::<CompensatedSum>()
        .value()
        / (n - 1.0);
    Ok(ErrorEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
        exact: false,
        n_used: n_probe as u64,
    })
}

fn check_levels(index: &MultiIndex, d: usize, r: u32) -> Result<()> {
    if index.d() != d {
        return Err(domain("index dimension mismatch"));
    }
    if index.max_level().is_some_and(|l| l >= r) {
        return Err(domain(format!("index {index:?} has a level >= r = {r}")));
    }
    Ok(())
}

/// `<psi_alpha, f>` for `f` constant on resolution-`r` cells, summing over
/// the cells inside the support of `psi_alpha`.
pub fn exact_coefficient<F: Oracle + ?Sized>(
    f: &F,
    index: &MultiIndex,
    d: usize,
    r: u32,
    budget: &Budget,
) -> Result<f64> {
    check_levels(index, d, r)?;
    let support = index.support();
    // per axis: number of resolution-r cells inside the support and the first one
    let spans: Vec<(u64, u64)> = support
        .resolution
        .iter()
        .zip(&support.cell_index)
        .map(|(&l, &k)| (1u64 << (r - l), k << (r - l)))
        .collect();
    let count: u128 = spans.iter().map(|s| s.0 as u128).product();
    budget.check("coefficient cells", count)?;
    let side = 1u64 << r;
    let mut acc = CompensatedSum::new();
    let mut offset = vec![0u64; d];
    for _ in 0..count {
        let x: Vec<f64> = spans
            .iter()
            .zip(&offset)
            .map(|(&(_, first), &o)| ((first + o) as f64 + 0.5) / side as f64)
            .collect();
        acc.add(f.eval(&x) * psi_d(index, &x)?);
        for (o, &(len, _)) in offset.iter_mut().zip(&spans) {
            *o += 1;
            if *o < len {
                break;
            }
            *o = 0;
        }
    }
    Ok(acc.value() * (-((r as usize * d) as f64)).exp2())
}

/// Every coefficient with levels below `r` of a function constant on
/// resolution-`r` cells, by a separable fast Haar transform.
pub fn all_coefficients<F: Oracle + ?Sized>(
    f: &F,
    d: usize,
    r: u32,
    budget: &Budget,
) -> Result<CoefficientTable> {
    let side = 1u64 << r;
    let cells = budget.check_power("transform cells", side, d)?;
    let inv = 1.0 / side as f64;
    // values scaled by the cell volume along each transformed axis
    let mut data: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|flat| f.eval(&cell_midpoint(flat, side, d)))
        .collect();
    let n = side as usize;
    let mut line = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut stride = 1usize;
    for _ in 0..d {
        let block = stride * n;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + off + i * stride] * inv;
                }
                haar_1d(&line, &mut out, r);
                for (i, &v) in out.iter().enumerate() {
                    data[base + off + i * stride] = v;
                }
            }
        }
        stride *= n;
    }
    CoefficientTable::from_fn(d, d, r, budget, |m| {
        let flat = m
            .alphas()
            .iter()
            .rev()
            .fold(0usize, |acc, &a| acc * n + a as usize);
        data[flat]
    })
}

/// Coefficients of a step function whose integrals over the `2^r` cells are `cell_mass`.
fn haar_1d(cell_mass: &[f64], out: &mut [f64], r: u32) {
    let mut sums = cell_mass.to_vec();
    for level in (0..r).rev() {
        let half = 1usize << level;
        let amp = (level as f64 / 2.0).exp2();
        let mut coarse = vec![0.0; half];
        for shift in 0..half {
            let lower = sums[2 * shift];
            let upper = sums[2 * shift + 1];
            out[half + shift] = amp * (upper - lower);
            coarse[shift] = lower + upper;
        }
        sums = coarse;
    }
    out[0] = sums[0];
}

/// `sum_{|alpha|_0 > k, lambda < r} <psi_alpha, f>^2`.
pub fn tail_mass<F: Oracle + ?Sized>(
    f: &F,
    d: usize,
    k: usize,
    r: u32,
    budget: &Budget,
) -> Result<f64> {
    if k > d {
        return Err(domain("k exceeds d"));
    }
    let table = all_coefficients(f, d, r, budget)?;
    Ok(table
        .iter()
        .filter(|(m, _)| m.active_count() > k)
        .map(|(_, c)| c * c)
        .collect::<CompensatedSum>()
        .value())
}

/// `||f||_2^2` of a function constant on resolution-`r` cells.
pub fn l2_norm_squared<F: Oracle + ?Sized>(f: &F, d: usize, r: u32, budget: &Budget) -> Result<f64> {
    let side = 1u64 << r;
    let cells = budget.check_power("L2 cells", side, d)?;
    Ok(grid_sum(side, d, cells, |x| f.eval(x).powi(2)) / cells as f64)
}

/// Volume of `{x in box : sum_j x_j <= s}` for the box `prod_j [lo_j, hi_j]`.
pub fn box_volume_below(lo: &[f64], hi: &[f64], s: f64) -> f64 {
    let d = lo.len();
    let mut factorial = 1.0;
    for i in 1..=d {
        factorial *= i as f64;
    }
    let mut acc = CompensatedSum::new();
    for mask in 0u64..1 << d {
        let mut corner = 0.0;
        for j in 0..d {
            corner += if mask >> j & 1 == 1 { hi[j] } else { lo[j] };
        }
        let excess = s - corner;
        if excess > 0.0 {
            let term = excess.powi(d as i32);
            if mask.count_ones() % 2 == 0 {
                acc.add(term);
            } else {
                acc.add(-term);
            }
        }
    }
    acc.value() / factorial
}

/// `<psi_alpha, sgn(sum_j x_j - d/2)>` in closed form.
pub fn diagonal_split_coefficient(index: &MultiIndex) -> f64 {
    let d = index.d();
    let s = d as f64 / 2.0;
    let active: Vec<usize> = (0..d).filter(|&j| index.alphas()[j] > 0).collect();
    let mut acc = CompensatedSum::new();
    for half_mask in 0u64..1 << active.len() {
        let mut lo = vec![0.0; d];
        let mut hi = vec![1.0; d];
        let mut amp = 1.0;
        let mut sign = 1.0;
        for (t, &j) in active.iter().enumerate() {
            let e = index.entry(j);
            let Level::At(level) = e.level else {
                unreachable!()
            };
            let width = (-(level as f64)).exp2();
            let start = e.shift as f64 * width;
            amp *= (level as f64 / 2.0).exp2();
            if half_mask >> t & 1 == 1 {
                lo[j] = start + width / 2.0;
                hi[j] = start + width;
            } else {
                lo[j] = start;
                hi[j] = start + width / 2.0;
                sign = -sign;
            }
        }
        let vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let below = box_volume_below(&lo, &hi, s);
        acc.add(sign * amp * (vol - 2.0 * below));
    }
    acc.value()
}

/// Average error of the best algorithm against the uniformly random step
/// family when the cells in `sampled` are revealed:
/// `(#unrevealed / m^d) / (d(m-1)+1)`.
pub fn bakhvalov_step_error(d: usize, m: u64, sampled: &HashSet<Vec<u64>>) -> Result<f64> {
    if d == 0 || m < 1 {
        return Err(domain("need d >= 1 and m >= 1"));
    }
    let total = (m as f64).powi(d as i32);
    for c in sampled {
        if c.len() != d || c.iter().any(|&v| v >= m) {
            return Err(domain(format!("cell {c:?} outside {{0..{m}-1}}^{d}")));
        }
    }
    let unrevealed = total - sampled.len() as f64;
    Ok(unrevealed / total / (d as f64 * (m - 1) as f64 + 1.0))
}

/// The same average by enumerating all `2^{m^d}` step functions and
/// integrating the optimal output exactly.
pub fn bakhvalov_brute_force(
    d: usize,
    m: u64,
    sampled: &HashSet<Vec<u64>>,
    budget: &Budget,
) -> Result<f64> {
    let cells = budget.check_power("step family cells", m, d)? as usize;
    if cells >= 24 {
        return Err(Error::Budget {
            what: "step family members",
            needed: 1u128 << cells.min(127),
            budget: budget.cells as u128,
        });
    }
    let gap = 2.0 / (d as f64 * (m - 1) as f64 + 1.0);
    let mut acc = CompensatedSum::new();
    for bits in 0u64..1 << cells {
        let delta: Vec<bool> = (0..cells).map(|i| bits >> i & 1 == 1).collect();
        let f = step_function(d, m, delta)?;
        let output: Vec<f64> = (0..cells as u64)
            .map(|flat| {
                let cell = unflatten(flat, m, d);
                if sampled.contains(&cell) {
                    f.cell_value(&cell)
                } else {
                    // midpoint of the two values the cell can take
                    let weight: u64 = cell.iter().sum();
                    2.0 * weight as f64 / (d as f64 * (m - 1) as f64 + 1.0) - 1.0 + gap / 2.0
                }
            })
            .collect();
        let approx = crate::functions::FnOracle::new(d, move |x: &[f64]| {
            let cell: Vec<u64> = x
                .iter()
                .map(|&v| crate::haar::cell_of_point_base(v, m).unwrap_or(0))
                .collect();
            output[crate::functions::flat_index(&cell, m)]
        });
        acc.add(l1_exact_grid(&f, &approx, d, m, budget)?.value);
    }
    Ok(acc.value() / (1u64 << cells) as f64)
}

/// Least-squares slope of `log(error)` against `log(n)`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(domain("rate fitting needs at least three points"));
    }
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
        return Err(domain(format!("nonpositive point {p:?} in rate fit")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, e)| (n.ln(), e.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(domain("rate fitting needs distinct n"));
    }
    Ok(sxy / sxx)
}
