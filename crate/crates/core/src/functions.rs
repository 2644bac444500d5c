//! Monotone test functions on `[0,1]^d`.
//!
//! Every family here is an immutable value implementing [`Oracle`]; the
//! lower-bound constructions (step fooling functions, level-set functions
//! on the half-split cube) and the diagonal split are exactly the inputs
//! used by the error analyses, so the approximators can be run on them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::combinatorics::binomial_u128;
use crate::error::{domain, Error, Result};
use crate::haar::{cell_of_point_base, cell_unchecked};
use crate::rng::{rng_for, stream};

/// A real function on `[0,1]^d`.
pub trait Oracle: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

impl<T: Oracle + ?Sized> Oracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: Oracle + ?Sized> Oracle for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: Oracle + ?Sized> Oracle for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

/// `sgn` with `sgn(0) = +1`.
#[inline]
pub fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Closure-backed oracle.
#[derive(Clone)]
pub struct FnOracle<F> {
    d: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(d: usize, f: F) -> Self {
        Self { d, f }
    }
}

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub d: usize,
    pub value: f64,
}

impl Oracle for Constant {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, _x: &[f64]) -> f64 {
        self.value
    }
}

/// `(2/d) sum_j x_j - 1`.
#[derive(Debug, Clone, Copy)]
pub struct LinearRamp {
    pub d: usize,
}

impl Oracle for LinearRamp {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> f64 {
        2.0 * x.iter().sum::<f64>() / self.d as f64 - 1.0
    }
}

/// Diagonal split `sgn(sum_j x_j - d/2)`.
#[derive(Debug, Clone, Copy)]
pub struct DiagonalSplit {
    pub d: usize,
}

pub fn boxbslash(d: usize) -> Result<DiagonalSplit> {
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    Ok(DiagonalSplit { d })
}

impl Oracle for DiagonalSplit {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> f64 {
        sign(x.iter().sum::<f64>() - self.d as f64 / 2.0)
    }
}

/// Piecewise constant fooling function on the `m^d` subcubes of a uniform
/// grid: cell `i` carries `2(|i|_1 + delta_i)/(d(m-1)+1) - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFamily {
    d: usize,
    m: u64,
    delta: Vec<bool>,
}

impl StepFamily {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn delta(&self) -> &[bool] {
        &self.delta
    }

    /// Gap between consecutive attainable values.
    pub fn level_gap(&self) -> f64 {
        2.0 / (self.d as f64 * (self.m - 1) as f64 + 1.0)
    }

    /// Value on the cell with multi-index `cell` (axis 0 is least significant
    /// in the flat delta layout).
    pub fn cell_value(&self, cell: &[u64]) -> f64 {
        let weight: u64 = cell.iter().sum();
        let flat = flat_index(cell, self.m);
        let bit = u64::from(self.delta[flat]);
        2.0 * (weight + bit) as f64 / (self.d as f64 * (self.m - 1) as f64 + 1.0) - 1.0
    }
}

/// Flat index of a cell of the `m^d` grid, axis 0 least significant.
pub fn flat_index(cell: &[u64], m: u64) -> usize {
    let mut flat = 0u64;
    for &c in cell.iter().rev() {
        flat = flat * m + c;
    }
    flat as usize
}

/// Inverse of [`flat_index`].
pub fn unflatten(mut flat: u64, m: u64, d: usize) -> Vec<u64> {
    (0..d)
        .map(|_| {
            let c = flat % m;
            flat /= m;
            c
        })
        .collect()
}

pub fn step_function(d: usize, m: u64, delta: Vec<bool>) -> Result<StepFamily> {
    if d == 0 || m < 1 {
        return Err(domain("step family needs d >= 1 and m >= 1"));
    }
    let cells = (m as u128).checked_pow(d as u32);
    if cells != Some(delta.len() as u128) {
        return Err(domain(format!(
            "delta has {} entries, expected m^d = {m}^{d}",
            delta.len()
        )));
    }
    Ok(StepFamily { d, m, delta })
}

/// Uniform random `delta` over `{0..m-1}^d`.
pub fn random_delta(d: usize, m: u64, seed: u64, budget: &Budget) -> Result<Vec<bool>> {
    let cells = budget.check_power("step family cells", m, d)?;
    let mut rng = rng_for(seed, stream::FAMILY);
    Ok((0..cells).map(|_| rng.gen::<bool>()).collect())
}

impl Oracle for StepFamily {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> f64 {
        let cell: Vec<u64> = x
            .iter()
            .map(|&xj| cell_of_point_base(xj.clamp(0.0, 1.0), self.m).unwrap_or(0))
            .collect();
        self.cell_value(&cell)
    }
}

/// Sign-valued monotone function on the `2^d` half-split subcubes.
///
/// A point maps to the bit vector of its half-cells; on that vector the
/// value is `-1` iff its weight is at most `b` and no member of `U` lies
/// below it, `+1` otherwise.
#[derive(Debug, Clone)]
pub struct LevelSetFunction {
    d: usize,
    t: u32,
    b: u32,
    members: HashSet<u64>,
}

impl LevelSetFunction {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn members(&self) -> &HashSet<u64> {
        &self.members
    }

    /// Half-cell bit vector of `x`; bit `j` is coordinate `j`.
    pub fn bits_of(x: &[f64]) -> u64 {
        x.iter().enumerate().fold(0u64, |acc, (j, &xj)| {
            acc | (cell_unchecked(xj.clamp(0.0, 1.0), 1) << j)
        })
    }

    /// Value on the Boolean cube.
    pub fn eval_bits(&self, x: u64) -> f64 {
        let w = x.count_ones();
        if w > self.b {
            return 1.0;
        }
        if w < self.t {
            return -1.0;
        }
        if self.has_witness(x, w) {
            1.0
        } else {
            -1.0
        }
    }

    fn has_witness(&self, x: u64, w: u32) -> bool {
        if self.members.is_empty() {
            return false;
        }
        let subsets = binomial_u128(w as u64, self.t as u64).unwrap_or(u128::MAX);
        if subsets < self.members.len() as u128 {
            let positions: Vec<u32> = (0..64).filter(|&j| x >> j & 1 == 1).collect();
            let found = weight_subsets(&positions, self.t as usize).any(|u| self.members.contains(&u));
            found
        } else {
            self.members.iter().any(|&u| u & !x == 0)
        }
    }
}

/// Masks of all `t`-element subsets of `positions`.
fn weight_subsets(positions: &[u32], t: usize) -> impl Iterator<Item = u64> + '_ {
    let n = positions.len();
    let mut idx: Vec<usize> = (0..t).collect();
    let mut done = t > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mask = idx.iter().fold(0u64, |m, &i| m | 1u64 << positions[i]);
        let mut i = t;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - t + i {
                idx[i] += 1;
                for s in i + 1..t {
                    idx[s] = idx[s - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    })
}

/// Every `d`-bit mask of weight `t`, in increasing order.
pub fn weight_class(d: usize, t: u32) -> impl Iterator<Item = u64> {
    let positions: Vec<u32> = (0..d as u32).collect();
    let masks: Vec<u64> = weight_subsets(&positions, t as usize).collect();
    let mut masks = masks;
    masks.sort_unstable();
    masks.into_iter()
}

pub fn level_set_function(
    d: usize,
    t: u32,
    b: u32,
    members: impl IntoIterator<Item = u64>,
) -> Result<LevelSetFunction> {
    if d == 0 || d > 63 {
        return Err(domain("level-set functions need 1 <= d <= 63"));
    }
    if t > b || b as usize > d {
        return Err(domain(format!("need t <= b <= d, got t={t} b={b} d={d}")));
    }
    let members: HashSet<u64> = members.into_iter().collect();
    for &u in &members {
        if u >> d != 0 || u.count_ones() != t {
            return Err(domain(format!("member {u:#b} is not a weight-{t} vector")));
        }
    }
    Ok(LevelSetFunction { d, t, b, members })
}

/// Each weight-`t` vector joins `U` independently with probability `p`.
pub fn sample_u(d: usize, t: u32, p: f64, seed: u64, budget: &Budget) -> Result<Vec<u64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("probability {p} outside [0,1]")));
    }
    if d == 0 || d > 63 || t as usize > d {
        return Err(domain("need 1 <= d <= 63 and t <= d"));
    }
    let size = binomial_u128(d as u64, t as u64).unwrap_or(u128::MAX);
    budget.check("weight class", size)?;
    let mut rng = rng_for(seed, stream::FAMILY);
    Ok(weight_class(d, t).filter(|_| rng.gen::<f64>() < p).collect())
}

impl Oracle for LevelSetFunction {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.eval_bits(Self::bits_of(x))
    }
}

/// `f_t(x) = sgn(f(x) - t)`.
#[derive(Debug, Clone)]
pub struct Threshold<F> {
    inner: F,
    t: f64,
}

pub fn threshold<F: Oracle>(inner: F, t: f64) -> Threshold<F> {
    Threshold { inner, t }
}

impl<F: Oracle> Oracle for Threshold<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        sign(self.inner.eval(x) - self.t)
    }
}

/// First coordinate-successor pair violating monotonicity on the midpoint
/// lattice `{(i + 1/2)/resolution}^d`.
pub fn find_monotonicity_violation<F: Oracle + ?Sized>(
    f: &F,
    d: usize,
    resolution: u64,
    budget: &Budget,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    if resolution == 0 {
        return Err(domain("resolution must be positive"));
    }
    let points = budget.check_power("monotonicity lattice", resolution, d)?;
    let coord = |i: u64| (i as f64 + 0.5) / resolution as f64;
    let values: Vec<f64> = (0..points)
        .map(|flat| {
            let x: Vec<f64> = unflatten(flat, resolution, d).into_iter().map(coord).collect();
            f.eval(&x)
        })
        .collect();
    for flat in 0..points {
        let cell = unflatten(flat, resolution, d);
        let mut stride = 1u64;
        for &cj in &cell {
            if cj + 1 < resolution {
                let succ = flat + stride;
                if values[succ as usize] < values[flat as usize] {
                    let lo: Vec<f64> = cell.iter().map(|&c| coord(c)).collect();
                    let hi: Vec<f64> = unflatten(succ, resolution, d).into_iter().map(coord).collect();
                    return Ok(Some((lo, hi)));
                }
            }
            stride *= resolution;
        }
    }
    Ok(None)
}

pub fn is_monotone_on_grid<F: Oracle + ?Sized>(
    f: &F,
    d: usize,
    resolution: u64,
    budget: &Budget,
) -> Result<bool> {
    Ok(find_monotonicity_violation(f, d, resolution, budget)?.is_none())
}

/// Serializable description of a test family.
///
/// Text form: `boxbslash`, `linear`, `const:c=0.5`, `step:m=3`,
/// `levelset:t=2,b=4,p=0.3`, optionally wrapped as `threshold:t=0.1;<inner>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    Boxbslash,
    Linear,
    Const { c: f64 },
    Step { m: u64 },
    Levelset { t: u32, b: u32, p: f64 },
    Threshold { t: f64, inner: Box<FamilySpec> },
}

impl FamilySpec {
    /// Whether every member is `{-1,+1}`-valued.
    pub fn is_sign_valued(&self) -> bool {
        match self {
            FamilySpec::Boxbslash | FamilySpec::Levelset { .. } | FamilySpec::Threshold { .. } => {
                true
            }
            FamilySpec::Const { c } => c.abs() == 1.0,
            FamilySpec::Linear | FamilySpec::Step { .. } => false,
        }
    }

    /// Dyadic resolution on whose cells every member is constant, if any.
    pub fn dyadic_resolution(&self) -> Option<u32> {
        match self {
            FamilySpec::Const { .. } => Some(0),
            FamilySpec::Levelset { .. } => Some(1),
            FamilySpec::Step { m } if m.is_power_of_two() => Some(m.trailing_zeros()),
            FamilySpec::Threshold { inner, .. } => inner.dyadic_resolution(),
            _ => None,
        }
    }

    /// Instantiate the member selected by `seed` in dimension `d`.
    pub fn build(&self, d: usize, seed: u64, budget: &Budget) -> Result<Arc<dyn Oracle>> {
        if d == 0 {
            return Err(domain("d must be positive"));
        }
        Ok(match self {
            FamilySpec::Boxbslash => Arc::new(boxbslash(d)?),
            FamilySpec::Linear => Arc::new(LinearRamp { d }),
            FamilySpec::Const { c } => {
                if !(-1.0..=1.0).contains(c) {
                    return Err(domain(format!("constant {c} outside [-1,1]")));
                }
                Arc::new(Constant { d, value: *c })
            }
            FamilySpec::Step { m } => {
                Arc::new(step_function(d, *m, random_delta(d, *m, seed, budget)?)?)
            }
            FamilySpec::Levelset { t, b, p } => {
                let members = sample_u(d, *t, *p, seed, budget)?;
                Arc::new(level_set_function(d, *t, *b, members)?)
            }
            FamilySpec::Threshold { t, inner } => {
                Arc::new(threshold(inner.build(d, seed, budget)?, *t))
            }
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Boxbslash => write!(f, "boxbslash"),
            FamilySpec::Linear => write!(f, "linear"),
            FamilySpec::Const { c } => write!(f, "const:c={c}"),
            FamilySpec::Step { m } => write!(f, "step:m={m}"),
            FamilySpec::Levelset { t, b, p } => write!(f, "levelset:t={t},b={b},p={p}"),
            FamilySpec::Threshold { t, inner } => write!(f, "threshold:t={t};{inner}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        if name == "threshold" {
            let (args, inner) = rest
                .split_once(';')
                .ok_or_else(|| domain("threshold needs `threshold:t=<v>;<family>`"))?;
            let kv = parse_kv(args)?;
            return Ok(FamilySpec::Threshold {
                t: get(&kv, "t")?,
                inner: Box::new(inner.parse()?),
            });
        }
        let kv = parse_kv(rest)?;
        let spec = match name {
            "boxbslash" => FamilySpec::Boxbslash,
            "linear" => FamilySpec::Linear,
            "const" => FamilySpec::Const { c: get(&kv, "c")? },
            "step" => FamilySpec::Step { m: get(&kv, "m")? },
            "levelset" => FamilySpec::Levelset {
                t: get(&kv, "t")?,
                b: get(&kv, "b")?,
                p: get(&kv, "p")?,
            },
            other => return Err(domain(format!("unknown family `{other}`"))),
        };
        let known: &[&str] = match name {
            "const" => &["c"],
            "step" => &["m"],
            "levelset" => &["t", "b", "p"],
            _ => &[],
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            return Err(domain(format!("unknown parameter `{k}` for family `{name}`")));
        }
        Ok(spec)
    }
}

fn parse_kv(s: &str) -> Result<Vec<(String, String)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| domain(format!("expected key=value, got `{p}`")))
        })
        .collect()
}

fn get<T: FromStr>(kv: &[(String, String)], key: &str) -> Result<T> {
    let raw = kv
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| domain(format!("missing parameter `{key}`")))?;
    raw.parse()
        .map_err(|_| domain(format!("cannot parse `{key}={raw}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn boxbslash_examples() {
        let f2 = boxbslash(2).unwrap();
        assert_eq!(f2.eval(&[0.9, 0.8]), 1.0);
        assert_eq!(f2.eval(&[0.5, 0.5]), 1.0);
        assert_eq!(boxbslash(3).unwrap().eval(&[0.1, 0.2, 0.3]), -1.0);
        assert!(boxbslash(0).is_err());
    }

    #[test]
    fn step_examples() {
        let f = step_function(1, 2, vec![false, false]).unwrap();
        assert_eq!((f.eval(&[0.2]), f.eval(&[0.7])), (-1.0, 0.0));
        let f = step_function(1, 2, vec![true, true]).unwrap();
        assert_eq!((f.eval(&[0.2]), f.eval(&[1.0])), (0.0, 1.0));
        let f = step_function(2, 2, vec![false; 4]).unwrap();
        assert!((f.eval(&[0.8, 0.9]) - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.level_gap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(step_function(2, 2, vec![false; 3]).is_err());
    }

    #[test]
    fn step_family_values_stay_in_range() {
        for m in 1..5u64 {
            for d in 1..4usize {
                let delta = random_delta(d, m, 11, &budget()).unwrap();
                let f = step_function(d, m, delta).unwrap();
                for flat in 0..m.pow(d as u32) {
                    let v = f.cell_value(&unflatten(flat, m, d));
                    assert!((-1.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn every_step_member_is_monotone_d2_m3() {
        for bits in 0u32..(1 << 9) {
            let delta: Vec<bool> = (0..9).map(|i| bits >> i & 1 == 1).collect();
            let f = step_function(2, 3, delta).unwrap();
            assert!(is_monotone_on_grid(&f, 2, 3, &budget()).unwrap(), "delta={bits:09b}");
        }
    }

    #[test]
    fn level_set_examples() {
        // U empty: pure threshold at weight b
        let f = level_set_function(3, 1, 2, []).unwrap();
        for x in 0u64..8 {
            let want = if x.count_ones() > 2 { 1.0 } else { -1.0 };
            assert_eq!(f.eval_bits(x), want);
        }
        // U = W, b = d: +1 iff weight >= t
        let f = level_set_function(4, 2, 4, weight_class(4, 2)).unwrap();
        for x in 0u64..16 {
            let want = if x.count_ones() >= 2 { 1.0 } else { -1.0 };
            assert_eq!(f.eval_bits(x), want);
        }
        let f = level_set_function(3, 1, 3, [0b001]).unwrap();
        assert_eq!(f.eval(&[0.2, 0.7, 0.9]), -1.0);
        assert_eq!(f.eval(&[0.7, 0.2, 0.1]), 1.0);
        assert!(level_set_function(3, 1, 3, [0b011]).is_err());
        assert!(level_set_function(3, 2, 1, []).is_err());
    }

    #[test]
    fn level_set_monotone_under_bit_flips() {
        for d in 1..=10usize {
            for t in 0..=d as u32 {
                for b in t..=d as u32 {
                    let members = sample_u(d, t, 0.3, (d * 100 + t as usize) as u64, &budget()).unwrap();
                    let f = level_set_function(d, t, b, members).unwrap();
                    for x in 0u64..(1 << d) {
                        let fx = f.eval_bits(x);
                        for j in 0..d {
                            if x >> j & 1 == 0 {
                                assert!(f.eval_bits(x | 1 << j) >= fx);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witness_strategies_agree() {
        // dense U forces subset enumeration, sparse U forces scanning
        for p in [0.05, 0.5, 0.95] {
            let members = sample_u(8, 3, p, 5, &budget()).unwrap();
            let f = level_set_function(8, 3, 8, members.clone()).unwrap();
            for x in 0u64..256 {
                let brute = members.iter().any(|&u| u & !x == 0);
                let want = if x.count_ones() < 3 || !brute { -1.0 } else { 1.0 };
                assert_eq!(f.eval_bits(x), want, "p={p} x={x:08b}");
            }
        }
    }

    #[test]
    fn threshold_examples() {
        let zero = Constant { d: 1, value: 0.0 };
        assert_eq!(threshold(zero, 0.0).eval(&[0.3]), 1.0);
        let ramp = threshold(LinearRamp { d: 1 }, 0.0);
        let split = boxbslash(1).unwrap();
        for i in 0..=20 {
            let x = [i as f64 / 20.0];
            assert_eq!(ramp.eval(&x), split.eval(&x));
        }
        assert_eq!(threshold(LinearRamp { d: 2 }, -2.0).eval(&[0.0, 0.0]), 1.0);
    }

    #[test]
    fn monotonicity_checker() {
        assert!(is_monotone_on_grid(&boxbslash(3).unwrap(), 3, 4, &budget()).unwrap());
        let decreasing = FnOracle::new(1, |x: &[f64]| -x[0]);
        assert!(!is_monotone_on_grid(&decreasing, 1, 4, &budget()).unwrap());
        assert!(matches!(
            is_monotone_on_grid(&decreasing, 30, 4, &budget()),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn family_specs_roundtrip_text() {
        for s in [
            "boxbslash",
            "linear",
            "const:c=0.5",
            "step:m=3",
            "levelset:t=2,b=4,p=0.3",
            "threshold:t=0.1;levelset:t=1,b=2,p=0.5",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("levelset:t=2,b=4".parse::<FamilySpec>().is_err());
        assert!("step:m=3,q=1".parse::<FamilySpec>().is_err());
        assert!("spiral".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn built_members_are_monotone() {
        let specs = ["boxbslash", "linear", "step:m=4", "levelset:t=1,b=2,p=0.5", "const:c=-0.25"];
        for s in specs {
            let spec: FamilySpec = s.parse().unwrap();
            let first = if s.starts_with("levelset") { 2 } else { 1 };
            for d in first..=3 {
                let f = spec.build(d, 3, &budget()).unwrap();
                let res = match spec.dyadic_resolution() {
                    Some(r) => 1u64 << r,
                    None => 6,
                };
                assert!(is_monotone_on_grid(&f, d, res, &budget()).unwrap(), "{s} d={d}");
            }
        }
    }

    proptest! {
        #[test]
        fn threshold_nonincreasing_in_t(x in 0.0f64..=1.0, y in 0.0f64..=1.0, t1 in -1.5f64..1.5, dt in 0.0f64..1.0) {
            let f = LinearRamp { d: 2 };
            let lo = threshold(f, t1).eval(&[x, y]);
            let hi = threshold(f, t1 + dt).eval(&[x, y]);
            prop_assert!(hi <= lo);
        }
    }
}
