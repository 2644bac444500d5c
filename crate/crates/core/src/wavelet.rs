//! Monte Carlo Haar-wavelet approximators.
//!
//! From `n` uniform samples `(X_i, y_i = f(X_i))` the wavelet coefficients
//! with levels below `r` and at most `k` active variables are estimated by
//! empirical means. Three reconstructions share that information:
//!
//! - [`Mode::Linear`]: `h = sum_alpha h~(alpha) psi_alpha`,
//! - [`Mode::Sign`]: `sgn h` with `sgn(0) = +1`,
//! - [`Mode::Generalized`]: the average over `t in [-1,1]` of the sign
//!   reconstruction of `sgn(f - t)`, evaluated on the value-sorted samples.
//!
//! All three evaluate through the reproducing kernel of the truncated
//! basis. For a sample `X` and a query `x` it depends only on the number
//! `b` of coordinates whose resolution-`r` cells agree:
//! `sum_alpha psi_alpha(X) psi_alpha(x) = chi(b)`, an integer. Hence
//! `n h(x) = sum_b chi(b) T_b(x)` where `T_b(x)` sums the sample values at
//! match count `b`. For moderate `d` the sums `T_b` are read off
//! precomputed per-subset marginal sums by Moebius inversion, which makes
//! evaluation independent of `n`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::combinatorics::{alternating_binomial_sum, binomial};
use crate::error::{domain, Error, Result};
use crate::functions::{sign, Oracle};
use crate::haar::{
    cell_of_point, cell_unchecked, enumerate_indices, index_set_size, psi_d, supporting_terms,
    MultiIndex, MAX_LEVEL,
};
use crate::rng::{rng_for, stream};
use crate::sum::CompensatedSum;

const CHUNK: usize = 4096;

/// Evaluation points with recorded values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    d: usize,
    points: Vec<f64>,
    values: Vec<f64>,
    digit_keys: Option<(u32, Vec<u64>)>,
    sorted: bool,
}

impl SampleSet {
    pub fn new(d: usize, points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(domain("d must be positive"));
        }
        if points.len() != values.len() {
            return Err(domain(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let mut flat = Vec::with_capacity(points.len() * d);
        for p in &points {
            if p.len() != d {
                return Err(domain(format!("point of dimension {} in a d={d} set", p.len())));
            }
            if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(domain(format!("point {p:?} outside the unit cube")));
            }
            flat.extend_from_slice(p);
        }
        check_values(&values)?;
        Ok(Self {
            d,
            points: flat,
            values,
            digit_keys: None,
            sorted: false,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn resolution(&self) -> Option<u32> {
        self.digit_keys.as_ref().map(|(r, _)| *r)
    }

    /// Resolution-`r` cell indices of sample `i`, once computed.
    pub fn keys(&self, i: usize) -> Option<&[u64]> {
        self.digit_keys
            .as_ref()
            .map(|(_, k)| &k[i * self.d..(i + 1) * self.d])
    }

    /// Compute the digit keys `floor(2^r x_j)` (clamped) for every sample.
    pub fn with_resolution(mut self, r: u32) -> Result<Self> {
        if r > MAX_LEVEL {
            return Err(domain(format!("resolution {r} exceeds {MAX_LEVEL}")));
        }
        if self.resolution() != Some(r) {
            let keys = self.points.iter().map(|&x| cell_unchecked(x, r)).collect();
            self.digit_keys = Some((r, keys));
        }
        Ok(self)
    }

    /// Stable sort by value; keys move with their points.
    pub fn sorted_by_value(mut self) -> Self {
        if self.sorted {
            return self;
        }
        let d = self.d;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        let permute = |src: &[f64]| -> Vec<f64> {
            order
                .iter()
                .flat_map(|&i| src[i * d..(i + 1) * d].iter().copied())
                .collect()
        };
        let points = permute(&self.points);
        let values = order.iter().map(|&i| self.values[i]).collect();
        if let Some((r, keys)) = &self.digit_keys {
            let keys = order
                .iter()
                .flat_map(|&i| keys[i * d..(i + 1) * d].iter().copied())
                .collect();
            self.digit_keys = Some((*r, keys));
        }
        self.points = points;
        self.values = values;
        self.sorted = true;
        self
    }
}

fn check_values(values: &[f64]) -> Result<()> {
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(-1.0..=1.0).contains(*v))
    {
        return Err(Error::InputContract(format!(
            "sample {i} has value {v} outside [-1,1]"
        )));
    }
    Ok(())
}

/// `n` i.i.d. uniform points on `[0,1]^d` with their oracle values.
///
/// Points come from stream [`stream::SAMPLES`] of `seed`; oracle calls run
/// in parallel but the result depends only on `seed`.
pub fn draw_samples<F: Oracle + ?Sized>(oracle: &F, n: usize, seed: u64) -> Result<SampleSet> {
    let d = oracle.dim();
    if d == 0 {
        return Err(domain("oracle dimension must be positive"));
    }
    let mut rng = rng_for(seed, stream::SAMPLES);
    let points: Vec<f64> = (0..n * d).map(|_| rng.gen::<f64>()).collect();
    let values: Vec<f64> = points.par_chunks(d).map(|x| oracle.eval(x)).collect();
    check_values(&values)?;
    Ok(SampleSet {
        d,
        points,
        values,
        digit_keys: None,
        sorted: false,
    })
}

/// Estimated wavelet coefficients indexed by [`MultiIndex`].
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    d: usize,
    k: usize,
    r: u32,
    entries: HashMap<MultiIndex, f64>,
}

impl CoefficientTable {
    /// A table over `enumerate_indices(d,k,r)` filled by `value`.
    pub fn from_fn(
        d: usize,
        k: usize,
        r: u32,
        budget: &Budget,
        mut value: impl FnMut(&MultiIndex) -> f64,
    ) -> Result<Self> {
        let size = index_set_size(d, k, r)?;
        budget.check("coefficient table", size.exact.to_u128().unwrap_or(u128::MAX))?;
        let entries = enumerate_indices(d, k, r)?
            .map(|m| {
                let v = value(&m);
                (m, v)
            })
            .collect();
        Ok(Self { d, k, r, entries })
    }

    pub fn params(&self) -> (usize, usize, u32) {
        (self.d, self.k, self.r)
    }

    pub fn get(&self, index: &MultiIndex) -> Option<f64> {
        self.entries.get(index).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// `sum_alpha c(alpha) psi_alpha(x)`, touching only wavelets supported at `x`.
    pub fn reconstruct(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.d {
            return Err(domain("point dimension does not match the table"));
        }
        let cells = x
            .iter()
            .map(|&v| cell_of_point(v, self.r))
            .collect::<Result<Vec<_>>>()?;
        Ok(supporting_terms(&cells, self.k, self.r)
            .map(|(m, psi)| self.entries.get(&m).copied().unwrap_or(0.0) * psi)
            .collect::<CompensatedSum>()
            .value())
    }
}

/// Empirical means `(1/n) sum_i psi_alpha(X_i) y_i` over the truncated index set.
///
/// Each sample only touches the `sum_{l<=k} C(d,l) r^l` wavelets whose
/// support contains it. Chunks are accumulated in parallel and merged in
/// chunk order, so the table is deterministic.
pub fn estimate_coefficients(
    samples: &SampleSet,
    k: usize,
    r: u32,
    budget: &Budget,
) -> Result<CoefficientTable> {
    let d = samples.d();
    if samples.is_empty() {
        return Err(domain("cannot estimate coefficients from zero samples"));
    }
    let mut table = CoefficientTable::from_fn(d, k, r, budget, |_| 0.0)?;
    let n = samples.len();
    let partials: Vec<HashMap<MultiIndex, CompensatedSum>> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc: HashMap<MultiIndex, CompensatedSum> = HashMap::new();
            let mut cells = vec![0u64; d];
            for &i in chunk {
                for (c, &x) in cells.iter_mut().zip(samples.point(i)) {
                    *c = cell_unchecked(x, r);
                }
                let y = samples.values[i];
                for (m, psi) in supporting_terms(&cells, k, r) {
                    acc.entry(m).or_default().add(psi * y);
                }
            }
            acc
        })
        .collect();
    let mut total: HashMap<MultiIndex, CompensatedSum> = HashMap::new();
    for part in &partials {
        for (m, s) in part {
            total.entry(m.clone()).or_default().merge(s);
        }
    }
    for (m, s) in total {
        if let Some(slot) = table.entries.get_mut(&m) {
            *slot = s.value() / n as f64;
        }
    }
    Ok(table)
}

/// Number of coordinates whose resolution-`r` cells agree.
pub fn match_count(x: &[f64], sample_keys: &[u64], r: u32) -> Result<usize> {
    if x.len() != sample_keys.len() {
        return Err(domain("point and key dimensions differ"));
    }
    let mut b = 0;
    for (&xj, &kj) in x.iter().zip(sample_keys) {
        if cell_of_point(xj, r)? == kj {
            b += 1;
        }
    }
    Ok(b)
}

#[inline]
fn match_count_keys(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

/// Kernel value `chi(b) = sum_{l<=b^k} C(b,l)(2^r-1)^l sum_{m<=(d-b)^(k-l)} (-1)^m C(d-b,m)`.
pub fn chi_value(b: usize, d: usize, k: usize, r: u32) -> Result<BigInt> {
    if d == 0 || k > d || b > d {
        return Err(domain(format!("need b <= d and k <= d, got b={b} k={k} d={d}")));
    }
    if r == 0 || r > MAX_LEVEL {
        return Err(domain(format!("resolution {r} out of range")));
    }
    let per_axis = (BigInt::one() << r) - BigInt::one();
    let mut total = BigInt::zero();
    let mut power = BigInt::one();
    for l in 0..=b.min(k) {
        let inner = alternating_binomial_sum((d - b) as u64, (k - l) as u64);
        total += BigInt::from(binomial(b as u64, l as u64)) * &power * inner;
        power *= &per_axis;
    }
    Ok(total)
}

/// `chi(0..=d)` in exact and floating form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiTable {
    exact: Vec<String>,
    #[serde(skip)]
    big: Vec<BigInt>,
    float: Vec<f64>,
    #[serde(skip)]
    small: Option<Vec<i64>>,
}

impl ChiTable {
    pub fn new(d: usize, k: usize, r: u32) -> Result<Self> {
        let big = (0..=d)
            .map(|b| chi_value(b, d, k, r))
            .collect::<Result<Vec<_>>>()?;
        let float = big.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let small = big.iter().map(|v| v.to_i64()).collect::<Option<Vec<_>>>();
        Ok(Self {
            exact: big.iter().map(|v| v.to_string()).collect(),
            big,
            float,
            small,
        })
    }

    pub fn exact(&self, b: usize) -> &BigInt {
        &self.big[b]
    }

    pub fn float(&self, b: usize) -> f64 {
        self.float[b]
    }

    /// The table as `i64`, when every entry fits.
    pub fn as_i64(&self) -> Option<&[i64]> {
        self.small.as_deref()
    }

    /// `w(t) = sum_s C(t,s) (-1)^(t-s) chi(s)`: weight of a sample matching
    /// on at least a given `t`-set, after Moebius inversion.
    fn superset_weights(&self) -> Vec<f64> {
        let d = self.big.len() - 1;
        (0..=d)
            .map(|t| {
                let mut w = BigInt::zero();
                for s in 0..=t {
                    let term = BigInt::from(binomial(t as u64, s as u64)) * &self.big[s];
                    if (t - s) % 2 == 0 {
                        w += term;
                    } else {
                        w -= term;
                    }
                }
                w.to_f64().unwrap_or(f64::NAN)
            })
            .collect()
    }

    fn max_abs(&self) -> BigInt {
        self.big.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

/// Per-subset marginal sums of sample values keyed by projected cells.
#[derive(Debug, Clone)]
struct MarginalSums {
    /// `(subset mask, weight, sorted (key, sum) pairs)` for subsets with nonzero weight.
    subsets: Vec<(u32, f64, Vec<(u128, f64)>)>,
}

const MARGINAL_MAX_D: usize = 16;

impl MarginalSums {
    fn eligible(d: usize, r: u32, n: usize, budget: &Budget) -> bool {
        d <= MARGINAL_MAX_D
            && (r as usize) * d <= 128
            && (n as u128) * (1u128 << d) <= (budget.cells as u128) * 16
    }

    fn build(samples: &SampleSet, r: u32, chi: &ChiTable) -> Self {
        let d = samples.d();
        let weights = chi.superset_weights();
        let n = samples.len();
        let subsets = (0u32..1 << d)
            .into_par_iter()
            .filter(|&mask| weights[mask.count_ones() as usize] != 0.0)
            .map(|mask| {
                let mut pairs: Vec<(u128, f64)> = (0..n)
                    .map(|i| {
                        let key = project(samples.keys(i).expect("keys computed"), mask, r);
                        (key, samples.values[i])
                    })
                    .collect();
                pairs.sort_by_key(|p| p.0);
                let mut merged: Vec<(u128, f64)> = Vec::new();
                let mut acc = CompensatedSum::new();
                for (idx, &(key, y)) in pairs.iter().enumerate() {
                    acc.add(y);
                    if idx + 1 == pairs.len() || pairs[idx + 1].0 != key {
                        merged.push((key, acc.value()));
                        acc = CompensatedSum::new();
                    }
                }
                (mask, weights[mask.count_ones() as usize], merged)
            })
            .collect();
        Self { subsets }
    }

    /// `sum_S w(|S|) U_S(x)`, i.e. `n h(x)`.
    fn scaled_value(&self, cells: &[u64], r: u32) -> f64 {
        let mut acc = CompensatedSum::new();
        for (mask, weight, pairs) in &self.subsets {
            let key = project(cells, *mask, r);
            if let Ok(pos) = pairs.binary_search_by_key(&key, |p| p.0) {
                acc.add(weight * pairs[pos].1);
            }
        }
        acc.value()
    }
}

#[inline]
fn project(cells: &[u64], mask: u32, r: u32) -> u128 {
    let mut key = 0u128;
    for (j, &c) in cells.iter().enumerate() {
        if mask >> j & 1 == 1 {
            key = (key << r) | c as u128;
        }
    }
    key
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Linear,
    Sign,
    Generalized,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Mode::Linear),
            "sign" | "hat" => Ok(Mode::Sign),
            "generalized" | "bar" => Ok(Mode::Generalized),
            other => Err(domain(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub budget: Budget,
    /// Also build the explicit coefficient table (linear and sign modes),
    /// subject to the budget.
    pub coefficient_table: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            budget: Budget::from_env(),
            coefficient_table: false,
        }
    }
}

/// A fitted wavelet approximant.
#[derive(Debug, Clone)]
pub struct WaveletModel {
    d: usize,
    k: usize,
    r: u32,
    mode: Mode,
    samples: SampleSet,
    chi: ChiTable,
    coefficients: Option<CoefficientTable>,
    marginals: Option<MarginalSums>,
    exact_recursion: bool,
}

/// Draw `n` samples from `oracle` and build the requested model.
pub fn fit<F: Oracle + ?Sized>(
    oracle: &F,
    k: usize,
    r: u32,
    n: usize,
    seed: u64,
    mode: Mode,
    options: &FitOptions,
) -> Result<WaveletModel> {
    let samples = draw_samples(oracle, n, seed)?;
    fit_samples(samples, k, r, mode, options)
}

/// Build a model from already collected samples.
pub fn fit_samples(
    samples: SampleSet,
    k: usize,
    r: u32,
    mode: Mode,
    options: &FitOptions,
) -> Result<WaveletModel> {
    let d = samples.d();
    if k > d {
        return Err(domain(format!("k = {k} exceeds d = {d}")));
    }
    let chi = ChiTable::new(d, k, r)?;
    let mut samples = samples.with_resolution(r)?;
    if mode == Mode::Generalized {
        samples = samples.sorted_by_value();
    }
    let coefficients = if options.coefficient_table && mode != Mode::Generalized && !samples.is_empty() {
        Some(estimate_coefficients(&samples, k, r, &options.budget)?)
    } else {
        None
    };
    let marginals = (mode != Mode::Generalized
        && MarginalSums::eligible(d, r, samples.len(), &options.budget))
    .then(|| MarginalSums::build(&samples, r, &chi));
    // n g_i stays an exact integer while 2 n max|chi| fits in i128
    let exact_recursion = chi.as_i64().is_some()
        && (chi.max_abs() * BigInt::from(2 * samples.len() as u64 + 2)).bits() < 126;
    Ok(WaveletModel {
        d,
        k,
        r,
        mode,
        samples,
        chi,
        coefficients,
        marginals,
        exact_recursion,
    })
}

impl WaveletModel {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    pub fn chi_table(&self) -> &ChiTable {
        &self.chi
    }

    pub fn coefficients(&self) -> Option<&CoefficientTable> {
        self.coefficients.as_ref()
    }

    fn cells(&self, x: &[f64]) -> Result<Vec<u64>> {
        if x.len() != self.d {
            return Err(domain(format!(
                "point has dimension {}, model has {}",
                x.len(),
                self.d
            )));
        }
        x.iter().map(|&v| cell_of_point(v, self.r)).collect()
    }

    /// `n h(x)` by scanning the samples.
    fn scaled_linear_scan(&self, cells: &[u64]) -> f64 {
        let mut by_match = vec![CompensatedSum::new(); self.d + 1];
        for i in 0..self.samples.len() {
            let b = match_count_keys(cells, self.samples.keys(i).expect("keys computed"));
            by_match[b].add(self.samples.values[i]);
        }
        by_match
            .iter()
            .enumerate()
            .filter(|(b, _)| self.chi.float(*b) != 0.0)
            .map(|(b, s)| self.chi.float(b) * s.value())
            .collect::<CompensatedSum>()
            .value()
    }

    fn scaled_linear(&self, cells: &[u64]) -> f64 {
        match &self.marginals {
            Some(m) => m.scaled_value(cells, self.r),
            None => self.scaled_linear_scan(cells),
        }
    }

    /// Linear reconstruction `sum_alpha h~(alpha) psi_alpha(x)`.
    pub fn eval_linear(&self, x: &[f64]) -> Result<f64> {
        if self.mode == Mode::Generalized {
            return Err(Error::State("linear evaluation needs a linear or sign model".into()));
        }
        let cells = self.cells(x)?;
        let n = self.samples.len();
        if n == 0 {
            return Ok(0.0);
        }
        Ok(self.scaled_linear(&cells) / n as f64)
    }

    /// Same value as [`Self::eval_linear`], computed from the explicit
    /// coefficient table.
    pub fn eval_linear_from_table(&self, x: &[f64]) -> Result<f64> {
        let table = self
            .coefficients
            .as_ref()
            .ok_or_else(|| Error::State("model was fitted without a coefficient table".into()))?;
        table.reconstruct(x)
    }

    /// Same value as [`Self::eval_linear`] by a full sample scan.
    pub fn eval_linear_scan(&self, x: &[f64]) -> Result<f64> {
        let cells = self.cells(x)?;
        let n = self.samples.len();
        if n == 0 {
            return Ok(0.0);
        }
        Ok(self.scaled_linear_scan(&cells) / n as f64)
    }

    /// `sgn` of the linear reconstruction, `sgn(0) = +1`.
    pub fn eval_sign(&self, x: &[f64]) -> Result<f64> {
        Ok(sign(self.eval_linear(x)?))
    }

    /// Level-set averaged reconstruction on the value-sorted samples.
    pub fn eval_generalized(&self, x: &[f64]) -> Result<f64> {
        if self.mode != Mode::Generalized || !self.samples.is_sorted() {
            return Err(Error::State(
                "generalized evaluation needs a model fitted on sorted samples".into(),
            ));
        }
        let cells = self.cells(x)?;
        let n = self.samples.len();
        let ys = &self.samples.values;
        let y_at = |i: usize| -> f64 {
            if i == 0 {
                -1.0
            } else if i == n + 1 {
                1.0
            } else {
                ys[i - 1]
            }
        };
        let matches: Vec<usize> = (0..n)
            .map(|i| match_count_keys(&cells, self.samples.keys(i).expect("keys computed")))
            .collect();
        let mut out = CompensatedSum::new();
        if self.exact_recursion {
            let chi = self.chi.as_i64().expect("checked at fit");
            let mut g: i128 = matches.iter().map(|&b| chi[b] as i128).sum();
            for i in 0..=n {
                if i > 0 {
                    g -= 2 * chi[matches[i - 1]] as i128;
                }
                let diff = y_at(i + 1) - y_at(i);
                if diff != 0.0 {
                    out.add(if g >= 0 { diff } else { -diff });
                }
            }
        } else {
            let mut g: CompensatedSum = matches.iter().map(|&b| self.chi.float(b)).collect();
            for i in 0..=n {
                if i > 0 {
                    g.add(-2.0 * self.chi.float(matches[i - 1]));
                }
                let diff = y_at(i + 1) - y_at(i);
                if diff != 0.0 {
                    out.add(diff * sign(g.value()));
                }
            }
        }
        Ok((0.5 * out.value()).clamp(-1.0, 1.0))
    }

    /// Evaluate according to the model's mode.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self.mode {
            Mode::Linear => self.eval_linear(x),
            Mode::Sign => self.eval_sign(x),
            Mode::Generalized => self.eval_generalized(x),
        }
    }

    pub fn eval_many(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        points.par_iter().map(|x| self.eval(x)).collect()
    }
}

impl Oracle for WaveletModel {
    fn dim(&self) -> usize {
        self.d
    }

    /// Panics on points outside the unit cube.
    fn eval(&self, x: &[f64]) -> f64 {
        WaveletModel::eval(self, x).expect("evaluation point inside the unit cube")
    }
}

/// Brute-force kernel `sum_alpha psi_alpha(X) psi_alpha(x)` over the
/// truncated index set; reference for [`chi_value`].
pub fn kernel_brute_force(xs: &[f64], x: &[f64], k: usize, r: u32) -> Result<f64> {
    let d = x.len();
    let mut acc = CompensatedSum::new();
    for m in enumerate_indices(d, k, r)? {
        acc.add(psi_d(&m, xs)? * psi_d(&m, x)?);
    }
    Ok(acc.value())
}
