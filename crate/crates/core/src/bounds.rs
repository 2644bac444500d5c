//! Closed-form error and complexity bounds.
//!
//! Every evaluator returns its component breakdown so results can be audited
//! term by term.

use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{domain, Result};

/// Parameters of the truncated wavelet Monte Carlo method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub d: usize,
    pub k: usize,
    pub r: u32,
    pub n: u64,
    pub eps: f64,
}

impl McParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.k > self.d {
            return Err(domain(format!("need 1 <= k <= d, got k={} d={}", self.k, self.d)));
        }
        if self.r < 1 {
            return Err(domain("need r >= 1"));
        }
        if self.n < 1 {
            return Err(domain("need n >= 1"));
        }
        Ok(())
    }

    /// `ln` of the analytic index-set bound `2^{rk} (ed/k)^k`.
    pub fn log_index_bound(&self) -> f64 {
        log_index_bound(self.d, self.k, self.r)
    }
}

fn log_index_bound(d: usize, k: usize, r: u32) -> f64 {
    let k = k as f64;
    k * (1.0 + (d as f64 / k).ln() + r as f64 * std::f64::consts::LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UbError {
    /// `5d / 2^r`
    pub resolution_term: f64,
    /// `4 sqrt(dr) / (k+1)`
    pub truncation_term: f64,
    /// `4 exp[k(1 + ln(d/k) + r ln 2)] / n`
    pub sampling_term: f64,
    pub total: f64,
}

/// Error bound of the Monte Carlo method for given parameters.
pub fn ub_error(p: &McParams) -> Result<UbError> {
    p.validate()?;
    let d = p.d as f64;
    let resolution_term = 5.0 * d / (p.r as f64).exp2();
    let truncation_term = 4.0 * (d * p.r as f64).sqrt() / (p.k as f64 + 1.0);
    let sampling_term = 4.0 * (p.log_index_bound() - (p.n as f64).ln()).exp();
    Ok(UbError {
        resolution_term,
        truncation_term,
        sampling_term,
        total: resolution_term + truncation_term + sampling_term,
    })
}

/// `r = ceil(log2(15d/eps))`, `k = min(floor(12 sqrt(dr)/eps), d)`,
/// `n = ceil((12/eps) exp[k(1 + ln(d/k) + r ln 2)])`.
///
/// `n` saturates at `u64::MAX`; see [`choose_params_log_n`] for the raw size.
pub fn choose_params(eps: f64, d: usize) -> Result<McParams> {
    let (r, k, log_n) = choose_params_parts(eps, d)?;
    let n = if log_n >= 64.0 * std::f64::consts::LN_2 {
        u64::MAX
    } else {
        log_n.exp().ceil() as u64
    };
    Ok(McParams { d, k, r, n, eps })
}

/// Natural logarithm of the (unrounded) sample size chosen by [`choose_params`].
pub fn choose_params_log_n(eps: f64, d: usize) -> Result<f64> {
    Ok(choose_params_parts(eps, d)?.2)
}

fn choose_params_parts(eps: f64, d: usize) -> Result<(u32, usize, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("eps must lie in (0,1), got {eps}")));
    }
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    let r = (15.0 * d as f64 / eps).log2().ceil() as u32;
    let k_raw = (12.0 * (d as f64 * r as f64).sqrt() / eps).floor() as usize;
    let k = k_raw.min(d);
    let log_n = (12.0 / eps).ln() + log_index_bound(d, k, r);
    Ok((r, k, log_n))
}

/// Which form of the deterministic branch of the upper bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetBranch {
    /// `exp[d ln(d/(2 eps))]`
    #[default]
    Theorem,
    /// `exp[d ln(d/eps)]`
    Proof,
}

impl std::str::FromStr for DetBranch {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Self::Theorem),
            "proof" => Ok(Self::Proof),
            _ => Err(domain(format!("unknown deterministic branch '{s}'"))),
        }
    }
}

/// Default constant of the randomized branch; at least [`calibrated_upper_constant`].
pub const DEFAULT_UPPER_CONSTANT: f64 = 5.4646;

/// Smallest `C` for which `exp[C sqrt(d)/eps (1 + ln(d/eps))^{3/2}]` is at
/// least the `n` of [`choose_params`] for `d in 1..=10`, `eps in {0.1,..,0.9}`.
pub fn calibrated_upper_constant() -> f64 {
    let mut c: f64 = 0.0;
    for d in 1..=10 {
        for e in 1..=9 {
            let eps = e as f64 / 10.0;
            let p = choose_params(eps, d).expect("calibration grid is valid");
            let log_n = (p.n as f64).ln();
            c = c.max(log_n / randomized_exponent_unit(eps, d));
        }
    }
    c
}

fn randomized_exponent_unit(eps: f64, d: usize) -> f64 {
    let d = d as f64;
    d.sqrt() / eps * (1.0 + (d / eps).ln()).powf(1.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub constant: f64,
    pub det_branch: DetBranch,
    /// `ln` of the randomized branch.
    pub log_randomized: f64,
    /// `ln` of the deterministic branch.
    pub log_deterministic: f64,
    pub value: f64,
}

/// Combined upper bound on the randomized complexity.
pub fn n_ran_upper(eps: f64, d: usize, constant: f64, branch: DetBranch) -> Result<UpperBound> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("eps must lie in (0,1), got {eps}")));
    }
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    let log_randomized = constant * randomized_exponent_unit(eps, d);
    let denom = match branch {
        DetBranch::Theorem => 2.0 * eps,
        DetBranch::Proof => eps,
    };
    let log_deterministic = d as f64 * (d as f64 / denom).ln();
    Ok(UpperBound {
        constant,
        det_branch: branch,
        log_randomized,
        log_deterministic,
        value: log_randomized.min(log_deterministic).exp(),
    })
}

/// Deterministic lower bound `2^{d-1}`, asserted for `eps <= 1/2`.
pub fn n_det_curse(eps: f64, d: usize) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(domain(format!("the bound needs 0 < eps <= 1/2, got {eps}")));
    }
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    Ok(((d - 1) as f64).exp2())
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Berry–Esseen constant bound used by default.
pub const BERRY_ESSEEN_C0: f64 = 0.4748;
/// Smaller Berry–Esseen constant for the identically distributed case.
pub const BERRY_ESSEEN_CE: f64 = 0.409732;

/// Parameters of the lower-bound certificate and its dimension scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbParams {
    pub alpha0: f64,
    pub beta0: f64,
    pub tau0: f64,
    pub lambda_mass: f64,
    /// Information budget at the base point; `nu = n0 2^{-tau0 sqrt(d0)}`.
    pub n0: f64,
    pub rho: f64,
    pub c0: f64,
    pub d0: usize,
    /// Error level certified at `d0`.
    pub eps0: f64,
    /// Rate in the rounded form `n0 exp(sigma0 (sqrt(d) - sqrt(d0)))`; must not exceed `tau0 ln 2`.
    pub sigma0: f64,
}

impl Default for LbParams {
    fn default() -> Self {
        let tau0 = 1.47566;
        Self {
            alpha0: -0.33794,
            beta0: 0.46332,
            tau0,
            lambda_mass: 0.77399,
            n0: 108.0,
            rho: 0.25960,
            c0: BERRY_ESSEEN_C0,
            d0: 100,
            eps0: 1.0 / 15.0,
            sigma0: 1.0,
        }
    }
}

impl LbParams {
    /// Information rate `nu = n0 2^{-tau0 sqrt(d0)}`, so that `n = nu 2^{tau sqrt(d)}`.
    pub fn nu(&self) -> f64 {
        self.n0 * (-self.tau0 * (self.d0 as f64).sqrt()).exp2()
    }

    pub fn validate(&self, d: usize, alpha: f64, beta: f64, tau: f64) -> Result<()> {
        let sd = (d as f64).sqrt();
        let checks = [
            (d >= 1, "d >= 1"),
            (beta - alpha >= 2.0 / sd, "beta - alpha >= 2/sqrt(d)"),
            (alpha - 2.0 * tau >= -sd + 2.0 / sd, "alpha - 2 tau >= -sqrt(d) + 2/sqrt(d)"),
            (self.lambda_mass > 0.0 && self.lambda_mass < 1.0, "0 < lambda < 1"),
            (self.n0 >= 0.0, "n0 >= 0"),
            (self.rho > 0.0, "rho > 0"),
            (beta <= tau, "beta <= tau"),
            (-tau <= alpha && alpha <= 0.0, "-tau <= alpha <= 0"),
        ];
        match checks.iter().find(|c| !c.0) {
            Some((_, what)) => Err(domain(format!("certificate parameters violate {what}"))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbComponents {
    pub c_ab: f64,
    pub r0: f64,
    pub kappa_tau: f64,
    pub c_abt: f64,
    pub c1: f64,
    pub kappa_at: f64,
    pub k_abt: f64,
    pub sigma: f64,
    pub r1: f64,
    pub r_b: f64,
    pub gamma: f64,
    pub kappa_rho_gamma: f64,
    pub q0: f64,
    pub q: f64,
    pub eps_hat: f64,
}

/// Lower error bound `2 r_B q` with every intermediate quantity.
///
/// A nonpositive `r_B` is returned as is; the caller decides what to do.
pub fn lb_epshat(p: &LbParams, d: usize, alpha: f64, beta: f64, tau: f64) -> Result<LbComponents> {
    p.validate(d, alpha, beta, tau)?;
    let df = d as f64;
    let sd = df.sqrt();
    let c_ab = normal_cdf(beta) - normal_cdf(alpha);
    let r0 = c_ab - 2.0 * p.c0 / sd;
    let kappa_tau = (1.0 - tau / sd - 1.0 / df).powf(-0.5);
    let c_abt = normal_cdf(beta - tau) - normal_cdf(alpha - tau);
    let c1 = (2.0 * std::f64::consts::PI).powf(-0.5) + 2.0 * p.c0;
    let kappa_at = 1.0 / (1.0 + (alpha - 2.0 * tau) / sd);
    let k_abt = (beta - alpha) / (sd + alpha - 2.0 * tau);
    let sigma = ((beta - alpha) * tau * kappa_at + k_abt).exp();
    let r1 = (sigma / (1.0 - p.lambda_mass) + 1.0) * (c_abt + c1 / sd) * kappa_tau;
    let r_b = r0 - p.nu() * r1;
    let gamma = ((sd + alpha) / (2.0 * (tau + 1.0 / sd))).powf(tau * sd);
    if p.rho >= gamma {
        return Err(domain(format!("rho = {} must be below gamma = {gamma}", p.rho)));
    }
    let kappa_rho_gamma = 0.5 + 1.0 / (2.0 * (1.0 - p.rho / gamma));
    let q0 = (-p.rho * sigma * kappa_rho_gamma).exp();
    let q = (1.0 - (-p.rho * p.lambda_mass).exp()).min(q0);
    Ok(LbComponents {
        c_ab,
        r0,
        kappa_tau,
        c_abt,
        c1,
        kappa_at,
        k_abt,
        sigma,
        r1,
        r_b,
        gamma,
        kappa_rho_gamma,
        q0,
        q,
        eps_hat: 2.0 * r_b * q,
    })
}

/// The certificate at the base point `(d0, alpha0, beta0, tau0)`.
pub fn lb_certificate(p: &LbParams) -> Result<LbComponents> {
    lb_epshat(p, p.d0, p.alpha0, p.beta0, p.tau0)
}

/// Parameters `(alpha, beta)` paired with `tau` by the dimension scaling.
pub fn scaled_shape(p: &LbParams, tau: f64) -> (f64, f64) {
    (p.alpha0 * p.tau0 / tau, p.beta0 * p.tau0 / tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LbRegime {
    /// `eps0 sqrt(d0/d) <= eps <= eps0`: the scaled certificate applies.
    Scaling,
    /// `eps < eps0 sqrt(d0/d)`: bound inherited from the edge of the scaling regime.
    Fallback,
    /// `d < d0`, `eps > eps0`, or the base certificate does not exceed `eps0`.
    OutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbCurve {
    pub valid: bool,
    pub regime: LbRegime,
    /// Scaled information level `tau`, where defined.
    pub tau: Option<f64>,
    /// `n0 exp(sigma0 (sqrt(d) eps0/eps - sqrt(d0)))`, in the fallback regime
    /// `n0 exp(sigma0 (d/sqrt(d0) - sqrt(d0)))`.
    pub n_lower: f64,
    /// `nu 2^{tau sqrt(d)}` before rounding the rate down to `sigma0`.
    pub n_lower_sharp: f64,
}

/// Lower bound on the randomized complexity at `(eps, d)`.
pub fn lb_curve(p: &LbParams, eps: f64, d: usize) -> Result<LbCurve> {
    if !(eps > 0.0) {
        return Err(domain("eps must be positive"));
    }
    let out = LbCurve {
        valid: false,
        regime: LbRegime::OutOfRange,
        tau: None,
        n_lower: f64::NAN,
        n_lower_sharp: f64::NAN,
    };
    let certified = lb_certificate(p).map(|c| c.eps_hat > p.eps0).unwrap_or(false);
    if !certified || d < p.d0 || eps > p.eps0 {
        return Ok(out);
    }
    let sd = (d as f64).sqrt();
    let sd0 = (p.d0 as f64).sqrt();
    let n0 = p.n0;
    let edge = p.eps0 * sd0 / sd;
    // n_lower is nonincreasing in eps, so below the edge the edge value holds
    let (regime, eff_eps) = if eps >= edge {
        (LbRegime::Scaling, eps)
    } else {
        (LbRegime::Fallback, edge)
    };
    let tau = p.tau0 * p.eps0 / eff_eps;
    Ok(LbCurve {
        valid: true,
        regime,
        tau: Some(tau),
        n_lower: n0 * (p.sigma0 * (sd * p.eps0 / eff_eps - sd0)).exp(),
        n_lower_sharp: p.nu() * (tau * sd).exp2(),
    })
}

/// Best certificate over a grid of `(alpha, beta, tau)`; plumbing only, no
/// optimality claim. Invalid grid points are skipped.
pub fn lb_grid_search(
    p: &LbParams,
    d: usize,
    alphas: &[f64],
    betas: &[f64],
    taus: &[f64],
) -> Option<(f64, f64, f64, LbComponents)> {
    let mut best: Option<(f64, f64, f64, LbComponents)> = None;
    for &a in alphas {
        for &b in betas {
            for &t in taus {
                if let Ok(c) = lb_epshat(p, d, a, b, t) {
                    if best.as_ref().map_or(true, |x| c.eps_hat > x.3.eps_hat) {
                        best = Some((a, b, t, c));
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: usize, k: usize, r: u32, n: u64) -> McParams {
        McParams { d, k, r, n, eps: 0.5 }
    }

    #[test]
    fn ub_error_examples() {
        let u = ub_error(&params(1, 1, 4, u64::MAX)).unwrap();
        assert!((u.total - 4.3125).abs() < 1e-12);
        let a = ub_error(&params(3, 2, 3, 1000)).unwrap();
        let b = ub_error(&params(3, 2, 3, 2000)).unwrap();
        assert!((a.sampling_term / b.sampling_term - 2.0).abs() < 1e-12);
        assert!(ub_error(&params(3, 3, 3, 10)).unwrap().truncation_term > 0.0);
        assert!(ub_error(&params(3, 4, 3, 10)).is_err());
        assert!(ub_error(&params(3, 0, 3, 10)).is_err());
    }

    #[test]
    fn ub_error_monotonicity() {
        for d in 1..6 {
            for r in 1..6 {
                for k in 1..d {
                    let lo = ub_error(&params(d, k, r, 100)).unwrap();
                    let hi = ub_error(&params(d, k + 1, r, 100)).unwrap();
                    assert!(hi.truncation_term < lo.truncation_term);
                }
                let a = ub_error(&params(d, 1, r, 100)).unwrap();
                let b = ub_error(&params(d, 1, r, 101)).unwrap();
                assert!(b.total < a.total);
                let c = ub_error(&params(d, 1, r + 1, 100)).unwrap();
                assert!(c.resolution_term < a.resolution_term);
            }
        }
    }

    #[test]
    fn choose_params_examples() {
        let p = choose_params(1.0 / 3.0, 1).unwrap();
        assert_eq!((p.r, p.k, p.n), (6, 1, 6263));
        let p = choose_params(0.9, 1).unwrap();
        assert_eq!((p.r, p.k, p.n), (5, 1, 1160));
        let p = choose_params(0.5, 2).unwrap();
        assert_eq!((p.r, p.k, p.n), (6, 2, 726374));
        let p = choose_params(0.5, 4).unwrap();
        assert_eq!((p.r, p.k), (7, 4));
        let p = choose_params(0.01, 3).unwrap();
        assert_eq!(p.k, 3);
        assert!(choose_params(1.0, 3).is_err());
        assert!(choose_params(0.0, 3).is_err());
        assert_eq!(choose_params(0.01, 40).unwrap().n, u64::MAX);
    }

    #[test]
    fn upper_bound_examples() {
        let u = n_ran_upper(0.5, 1, DEFAULT_UPPER_CONSTANT, DetBranch::Theorem).unwrap();
        assert_eq!(u.log_deterministic, 0.0);
        assert_eq!(u.value, 1.0);
        let p = n_ran_upper(0.5, 1, DEFAULT_UPPER_CONSTANT, DetBranch::Proof).unwrap();
        assert!((p.log_deterministic - 2f64.ln()).abs() < 1e-15);
        for d in [1, 3, 10, 50] {
            let mut last = f64::INFINITY;
            for e in 1..=19 {
                let v = n_ran_upper(e as f64 / 20.0, d, DEFAULT_UPPER_CONSTANT, DetBranch::Theorem)
                    .unwrap()
                    .value;
                assert!(v <= last);
                last = v;
            }
        }
        let u = n_ran_upper(1.0 / 3.0, 1, DEFAULT_UPPER_CONSTANT, DetBranch::Theorem).unwrap();
        assert!(u.value <= 6263.0_f64.max(1.0));
    }

    #[test]
    fn calibrated_constant_dominates_choice() {
        let c = calibrated_upper_constant();
        assert!(c <= DEFAULT_UPPER_CONSTANT && DEFAULT_UPPER_CONSTANT - c < 1e-3, "{c}");
        for d in 1..=10 {
            for e in 1..=9 {
                let eps = e as f64 / 10.0;
                let n = choose_params(eps, d).unwrap().n as f64;
                let b = n_ran_upper(eps, d, DEFAULT_UPPER_CONSTANT, DetBranch::Theorem).unwrap();
                assert!(b.log_randomized >= n.ln());
            }
        }
    }

    #[test]
    fn curse_examples() {
        assert_eq!(n_det_curse(0.5, 10).unwrap(), 512.0);
        assert_eq!(n_det_curse(0.1, 1).unwrap(), 1.0);
        assert_eq!(n_det_curse(0.3, 20).unwrap(), 524288.0);
        assert!(n_det_curse(0.6, 3).is_err());
    }

    #[test]
    fn normal_cdf_examples() {
        assert_eq!(normal_cdf(0.0), 0.5);
        let err = normal_cdf(1.96) - 0.9750021048517795;
        assert!(err.abs() < 1e-12, "{err:e}");
        for i in 0..100 {
            let x = i as f64 * 0.07;
            assert!((normal_cdf(-x) - (1.0 - normal_cdf(x))).abs() < 1e-14);
        }
    }

    #[test]
    fn default_certificate() {
        let p = LbParams::default();
        let c = lb_certificate(&p).unwrap();
        assert!((c.eps_hat - 0.0666667).abs() < 1e-3, "{}", c.eps_hat);
        assert!((c.eps_hat - 0.0666680338).abs() < 1e-8, "{}", c.eps_hat);
        assert!((p.nu() / (108.0 * (-14.7566f64).exp2()) - 1.0).abs() < 1e-14);
        let e = LbParams { c0: BERRY_ESSEEN_CE, ..p };
        assert!((lb_certificate(&e).unwrap().eps_hat - 0.07201).abs() < 1e-4);
        let free = LbParams { n0: 0.0, ..p };
        let c = lb_certificate(&free).unwrap();
        assert!((c.eps_hat - 2.0 * c.r0 * c.q).abs() < 1e-15);
    }

    #[test]
    fn certificate_nondecreasing_in_d() {
        let p = LbParams::default();
        let mut last = 0.0;
        for d in 100..=400 {
            let e = lb_epshat(&p, d, p.alpha0, p.beta0, p.tau0).unwrap().eps_hat;
            assert!(e >= last - 1e-15, "d={d}");
            last = e;
        }
    }

    #[test]
    fn rho_at_gamma_is_rejected() {
        let p = LbParams { rho: 1e9, ..LbParams::default() };
        assert!(lb_certificate(&p).is_err());
    }

    #[test]
    fn scaling_inequalities_and_gamma() {
        let p = LbParams::default();
        let base_d0 = lb_certificate(&p).unwrap();
        for d in (100..=900).step_by(50) {
            let tmax = p.tau0 * (d as f64 / p.d0 as f64).sqrt();
            for i in 0..=10 {
                let tau = p.tau0 + (tmax - p.tau0) * i as f64 / 10.0;
                let (a, b) = scaled_shape(&p, tau);
                let c = lb_epshat(&p, d, a, b, tau).unwrap();
                assert!(c.sigma <= base_d0.sigma + 1e-12, "sigma d={d} tau={tau}");
                assert!(c.q >= base_d0.q - 1e-12, "q d={d} tau={tau}");
                assert!(c.r_b >= p.tau0 / tau * base_d0.r_b - 1e-12, "r_B d={d} tau={tau}");
                assert!(c.gamma >= 1.0);
            }
        }
    }

    #[test]
    fn lb_curve_examples() {
        let p = LbParams::default();
        let c = lb_curve(&p, 1.0 / 15.0, 100).unwrap();
        assert!(c.valid && (c.n_lower - 108.0).abs() < 1e-9);
        assert!((c.n_lower_sharp - 108.0).abs() < 1e-9);
        let c = lb_curve(&p, 1.0 / 15.0, 400).unwrap();
        let want = 108.0 * 10f64.exp();
        assert!((c.n_lower - want).abs() <= 4.0 * f64::EPSILON * want);
        assert!(c.n_lower_sharp >= c.n_lower);
        let f = lb_curve(&p, 0.01, 400).unwrap();
        assert_eq!(f.regime, LbRegime::Fallback);
        assert!(f.n_lower >= lb_curve(&p, 1.0 / 30.0, 400).unwrap().n_lower);
        assert!(!lb_curve(&p, 0.1, 400).unwrap().valid);
        assert!(!lb_curve(&p, 0.05, 99).unwrap().valid);
    }

    #[test]
    fn upper_never_below_lower() {
        let p = LbParams::default();
        for d in [100, 150, 200, 400, 900] {
            for e in [0.01, 0.02, 0.04, 0.05, 1.0 / 15.0] {
                let lo = lb_curve(&p, e, d).unwrap();
                if !lo.valid {
                    continue;
                }
                for branch in [DetBranch::Theorem, DetBranch::Proof] {
                    let up = n_ran_upper(e, d, DEFAULT_UPPER_CONSTANT, branch).unwrap();
                    let log_up = up.log_randomized.min(up.log_deterministic);
                    assert!(log_up >= lo.n_lower.ln() && log_up >= lo.n_lower_sharp.ln());
                }
            }
        }
    }

    #[test]
    fn grid_search_finds_the_default_point() {
        let p = LbParams::default();
        let best = lb_grid_search(&p, 100, &[p.alpha0, -0.5], &[p.beta0, 0.3], &[p.tau0]).unwrap();
        assert!(best.3.eps_hat >= lb_certificate(&p).unwrap().eps_hat);
    }
}
