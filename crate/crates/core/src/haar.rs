//! Dyadic index arithmetic and the sign-flipped Haar basis on `[0,1]^d`.
//!
//! One-dimensional indices `alpha >= 1` split as `alpha = 2^level + shift`
//! with `0 <= shift < 2^level`; `alpha = 0` is the constant function and
//! carries the [`Level::Bottom`] tag instead of a numeric level. The
//! wavelet `psi_alpha` is `+2^(level/2)` on the upper half of its support
//! interval and `-2^(level/2)` on the lower half, the reverse of the
//! textbook convention, so that monotone functions have nonnegative
//! single-variable coefficients.
//!
//! Intervals are half-open except the last one on each axis, which is
//! closed, so every level partitions the closed unit interval.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{domain, Error, Result};

/// Largest dyadic level accepted by cell arithmetic.
pub const MAX_LEVEL: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    /// The level of the constant function, `-infinity` in the usual notation.
    Bottom,
    At(u32),
}

impl Level {
    /// `max(0, level)` as used in support volumes.
    pub fn positive_part(self) -> u32 {
        match self {
            Level::Bottom => 0,
            Level::At(l) => l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HaarIndex1D {
    pub alpha: u64,
    pub level: Level,
    pub shift: u64,
}

impl HaarIndex1D {
    pub fn new(alpha: u64) -> Self {
        let (level, shift) = split_index(alpha);
        Self {
            alpha,
            level,
            shift,
        }
    }

    pub fn from_parts(level: u32, shift: u64) -> Result<Self> {
        if level > MAX_LEVEL || shift >= 1u64 << level {
            return Err(domain(format!("shift {shift} out of range for level {level}")));
        }
        Ok(Self {
            alpha: (1u64 << level) + shift,
            level: Level::At(level),
            shift,
        })
    }
}

/// Split `alpha` into `(level, shift)`.
pub fn split_index(alpha: u64) -> (Level, u64) {
    if alpha == 0 {
        (Level::Bottom, 0)
    } else {
        let level = 63 - alpha.leading_zeros();
        (Level::At(level), alpha - (1u64 << level))
    }
}

/// Inverse of [`split_index`].
pub fn join_index(level: Level, shift: u64) -> u64 {
    match level {
        Level::Bottom => 0,
        Level::At(l) => (1u64 << l) + shift,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicInterval {
    pub lo: f64,
    pub hi: f64,
    pub closed_right: bool,
}

impl DyadicInterval {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && (x < self.hi || (self.closed_right && x == self.hi))
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `I_{level,shift} = [shift 2^-level, (shift+1) 2^-level)`, closed on the
/// right for the last shift.
pub fn interval_of(level: u32, shift: u64) -> Result<DyadicInterval> {
    if level > MAX_LEVEL {
        return Err(domain(format!("level {level} exceeds {MAX_LEVEL}")));
    }
    let cells = 1u64 << level;
    if shift >= cells {
        return Err(domain(format!("shift {shift} must be below 2^{level}")));
    }
    let width = (-(level as f64)).exp2();
    Ok(DyadicInterval {
        lo: shift as f64 * width,
        hi: (shift + 1) as f64 * width,
        closed_right: shift == cells - 1,
    })
}

/// Index of the level-`level` interval containing `x`:
/// `min(floor(2^level x), 2^level - 1)`.
pub fn cell_of_point(x: f64, level: u32) -> Result<u64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("point {x} outside [0,1]")));
    }
    if level > MAX_LEVEL {
        return Err(domain(format!("level {level} exceeds {MAX_LEVEL}")));
    }
    Ok(cell_unchecked(x, level))
}

#[inline]
pub(crate) fn cell_unchecked(x: f64, level: u32) -> u64 {
    let cells = 1u64 << level;
    // multiplication by a power of two is exact
    let c = (x * cells as f64).floor() as u64;
    c.min(cells - 1)
}

/// Cell index along one axis of a uniform `m`-ary grid; `x = 1` lands in
/// the top cell and `x = i/m` (as computed in `f64`) in cell `i`.
pub fn cell_of_point_base(x: f64, m: u64) -> Result<u64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("point {x} outside [0,1]")));
    }
    if m == 0 {
        return Err(domain("grid base must be positive"));
    }
    let mf = m as f64;
    let mut c = (x * mf).floor() as u64;
    if c >= m {
        return Ok(m - 1);
    }
    if c > 0 && (c as f64) / mf > x {
        c -= 1;
    }
    if c + 1 < m && ((c + 1) as f64) / mf <= x {
        c += 1;
    }
    Ok(c)
}

/// Axis-aligned dyadic box with per-axis resolutions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicCell {
    pub resolution: Vec<u32>,
    pub cell_index: Vec<u64>,
}

impl DyadicCell {
    pub fn new(resolution: Vec<u32>, cell_index: Vec<u64>) -> Result<Self> {
        if resolution.len() != cell_index.len() {
            return Err(domain("resolution and cell index lengths differ"));
        }
        for (&l, &k) in resolution.iter().zip(&cell_index) {
            interval_of(l, k)?;
        }
        Ok(Self {
            resolution,
            cell_index,
        })
    }

    /// The cell at uniform resolution `level` that contains `x`.
    pub fn containing(x: &[f64], level: u32) -> Result<Self> {
        let cell_index = x
            .iter()
            .map(|&xj| cell_of_point(xj, level))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            resolution: vec![level; x.len()],
            cell_index,
        })
    }

    pub fn volume(&self) -> f64 {
        let total: u32 = self.resolution.iter().sum();
        (-(total as f64)).exp2()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.resolution.len()
            && self
                .resolution
                .iter()
                .zip(&self.cell_index)
                .zip(x)
                .all(|((&l, &k), &xj)| {
                    interval_of(l, k)
                        .map(|iv| iv.contains(xj))
                        .unwrap_or(false)
                })
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.resolution
            .iter()
            .zip(&self.cell_index)
            .map(|(&l, &k)| (k as f64 + 0.5) * (-(l as f64)).exp2())
            .collect()
    }
}

/// One-dimensional wavelet `psi_alpha(x)`.
pub fn psi_1d(alpha: u64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("point {x} outside [0,1]")));
    }
    if alpha >> MAX_LEVEL + 1 != 0 {
        return Err(domain(format!("index {alpha} too large")));
    }
    Ok(psi_1d_unchecked(alpha, x))
}

#[inline]
pub(crate) fn psi_1d_unchecked(alpha: u64, x: f64) -> f64 {
    match split_index(alpha) {
        (Level::Bottom, _) => 1.0,
        (Level::At(level), shift) => {
            let fine = cell_unchecked(x, level + 1);
            if fine >> 1 != shift {
                0.0
            } else {
                let amp = (level as f64 / 2.0).exp2();
                if fine & 1 == 1 {
                    amp
                } else {
                    -amp
                }
            }
        }
    }
}

/// Tensor index `alpha in N_0^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    alphas: Vec<u64>,
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.alphas)
    }
}

impl MultiIndex {
    pub fn new(alphas: Vec<u64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(domain("multi-index needs d >= 1"));
        }
        if alphas.iter().any(|&a| a > 0 && 63 - a.leading_zeros() > MAX_LEVEL) {
            return Err(domain("index level too large"));
        }
        Ok(Self { alphas })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            alphas: vec![0; d],
        }
    }

    pub fn d(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[u64] {
        &self.alphas
    }

    pub fn entry(&self, j: usize) -> HaarIndex1D {
        HaarIndex1D::new(self.alphas[j])
    }

    pub fn entries(&self) -> impl Iterator<Item = HaarIndex1D> + '_ {
        self.alphas.iter().map(|&a| HaarIndex1D::new(a))
    }

    /// Number of active variables `|alpha|_0`.
    pub fn active_count(&self) -> usize {
        self.alphas.iter().filter(|&&a| a > 0).count()
    }

    /// `|lambda|_+`.
    pub fn level_sum(&self) -> u32 {
        self.entries().map(|e| e.level.positive_part()).sum()
    }

    /// Largest level among active coordinates, `None` for the constant.
    pub fn max_level(&self) -> Option<u32> {
        self.entries()
            .filter_map(|e| match e.level {
                Level::Bottom => None,
                Level::At(l) => Some(l),
            })
            .max()
    }

    /// Volume `2^{-|lambda|_+}` of the support.
    pub fn support_volume(&self) -> f64 {
        (-(self.level_sum() as f64)).exp2()
    }

    /// The support box of `psi_alpha`.
    pub fn support(&self) -> DyadicCell {
        let (resolution, cell_index) = self
            .entries()
            .map(|e| (e.level.positive_part(), e.shift))
            .unzip();
        DyadicCell {
            resolution,
            cell_index,
        }
    }
}

/// Tensor wavelet `psi_alpha(x) = prod_j psi_{alpha_j}(x_j)`.
pub fn psi_d(index: &MultiIndex, x: &[f64]) -> Result<f64> {
    if index.d() != x.len() {
        return Err(domain(format!(
            "index has dimension {}, point has {}",
            index.d(),
            x.len()
        )));
    }
    let mut v = 1.0;
    for (&a, &xj) in index.alphas.iter().zip(x) {
        v *= psi_1d(a, xj)?;
        if v == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(v)
}

fn check_params(d: usize, k: usize, r: u32) -> Result<()> {
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    if k > d {
        return Err(domain(format!("k = {k} exceeds d = {d}")));
    }
    if r == 0 || r > MAX_LEVEL {
        return Err(domain(format!("resolution r = {r} must lie in 1..={MAX_LEVEL}")));
    }
    Ok(())
}

/// All indices with levels below `r` and at most `k` active variables, in
/// order of increasing active count.
pub fn enumerate_indices(d: usize, k: usize, r: u32) -> Result<IndexStream> {
    check_params(d, k, r)?;
    Ok(IndexStream::new(d, k, r))
}

/// Streaming enumerator behind [`enumerate_indices`].
#[derive(Debug, Clone)]
pub struct IndexStream {
    d: usize,
    k: usize,
    top: u64,
    active: usize,
    combo: Vec<usize>,
    digits: Vec<u64>,
    done: bool,
}

impl IndexStream {
    fn new(d: usize, k: usize, r: u32) -> Self {
        Self {
            d,
            k,
            top: 1u64 << r,
            active: 0,
            combo: Vec::new(),
            digits: Vec::new(),
            done: false,
        }
    }

    fn current(&self) -> MultiIndex {
        let mut alphas = vec![0u64; self.d];
        for (&j, &a) in self.combo.iter().zip(&self.digits) {
            alphas[j] = a;
        }
        MultiIndex { alphas }
    }

    fn advance(&mut self) {
        // odometer over alpha values 1..top on the active coordinates
        for digit in self.digits.iter_mut().rev() {
            if *digit + 1 < self.top {
                *digit += 1;
                return;
            }
            *digit = 1;
        }
        // next combination of active coordinates
        let l = self.active;
        let mut i = l;
        while i > 0 {
            i -= 1;
            if self.combo[i] < self.d - l + i {
                self.combo[i] += 1;
                for t in i + 1..l {
                    self.combo[t] = self.combo[t - 1] + 1;
                }
                return;
            }
        }
        // next active count
        self.active += 1;
        if self.active > self.k {
            self.done = true;
            return;
        }
        self.combo = (0..self.active).collect();
        self.digits = vec![1; self.active];
    }
}

impl Iterator for IndexStream {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexSetSize {
    /// `sum_{l<=k} C(d,l) (2^r - 1)^l`.
    pub exact: BigUint,
    /// `2^{rk} (e d / k)^k`, defined for `k >= 1`.
    pub bound: Option<f64>,
}

impl IndexSetSize {
    pub fn exact_u64(&self) -> Result<u64> {
        self.exact
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("index set size {} exceeds u64", self.exact)))
    }
}

pub fn index_set_size(d: usize, k: usize, r: u32) -> Result<IndexSetSize> {
    check_params(d, k, r)?;
    let per_axis = (BigUint::one() << r) - BigUint::one();
    let mut exact = BigUint::zero();
    let mut power = BigUint::one();
    for l in 0..=k {
        exact += binomial(d as u64, l as u64) * &power;
        power *= &per_axis;
    }
    let bound = (k >= 1).then(|| {
        let kf = k as f64;
        (kf * (r as f64) * std::f64::consts::LN_2 + kf * (std::f64::consts::E * d as f64 / kf).ln())
            .exp()
    });
    Ok(IndexSetSize { exact, bound })
}

/// Wavelets whose support contains a point, given the point's cell indices
/// at resolution `r`.
///
/// Yields `(index, psi_index(x))` for every index with levels below `r`
/// and at most `k` active variables that does not vanish at `x`; there are
/// `sum_{l<=k} C(d,l) r^l` of them.
pub fn supporting_terms(cells: &[u64], k: usize, r: u32) -> SupportStream<'_> {
    SupportStream {
        cells,
        r,
        k: k.min(cells.len()),
        active: 0,
        combo: Vec::new(),
        levels: Vec::new(),
        done: false,
    }
}

#[derive(Debug, Clone)]
pub struct SupportStream<'a> {
    cells: &'a [u64],
    r: u32,
    k: usize,
    active: usize,
    combo: Vec<usize>,
    levels: Vec<u32>,
    done: bool,
}

impl SupportStream<'_> {
    fn current(&self) -> (MultiIndex, f64) {
        let mut alphas = vec![0u64; self.cells.len()];
        let mut value = 1.0;
        for (&j, &level) in self.combo.iter().zip(&self.levels) {
            let cell = self.cells[j];
            let shift = cell >> (self.r - level);
            alphas[j] = (1u64 << level) + shift;
            let upper = (cell >> (self.r - level - 1)) & 1 == 1;
            let amp = (level as f64 / 2.0).exp2();
            value *= if upper { amp } else { -amp };
        }
        (MultiIndex { alphas }, value)
    }

    fn advance(&mut self) {
        for level in self.levels.iter_mut().rev() {
            if *level + 1 < self.r {
                *level += 1;
                return;
            }
            *level = 0;
        }
        let d = self.cells.len();
        let l = self.active;
        let mut i = l;
        while i > 0 {
            i -= 1;
            if self.combo[i] < d - l + i {
                self.combo[i] += 1;
                for t in i + 1..l {
                    self.combo[t] = self.combo[t - 1] + 1;
                }
                return;
            }
        }
        self.active += 1;
        if self.active > self.k {
            self.done = true;
            return;
        }
        self.combo = (0..self.active).collect();
        self.levels = vec![0; self.active];
    }
}

impl Iterator for SupportStream<'_> {
    type Item = (MultiIndex, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}
