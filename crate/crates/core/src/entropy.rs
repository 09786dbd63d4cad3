//! The trace-form entropy built from `ζ_G`, its one-variable generator
//! series, and the formal group law that series defines.
//!
//! With `D = 1 - aζ'(a)` and `y = p^σ`, the per-event term is
//!
//! ```text
//! s(p) = p [ζ(a y) - y + 1 - ζ(a)] / (σ D)
//! ```
//!
//! and `S(P) = Σ s(p_i)`. As `σ → 0`, `s(p) → -p log p`.

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::float;
use crate::params::{ParamWindow, WindowMode};
use crate::series::{
    decimal_rational, BivariateTruncatedSeries, MultiSeries, Rational, TruncatedSeries,
};
use crate::zeta::IharaZeta;

/// Tolerance on `Σ p_i = 1`.
pub const SUM_TOL: f64 = 1e-9;

/// Probabilities `p_1, …, p_W`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probabilities: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("no probabilities".into()));
        }
        if let Some((i, p)) = probabilities
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && (0.0..=1.0).contains(*p)))
        {
            return Err(Error::InvalidDistribution(format!(
                "p_{} = {p} is not in [0, 1]",
                i + 1
            )));
        }
        let total = stable_sum(probabilities.clone());
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1 (use normalization to rescale)"
            )));
        }
        Ok(Self { probabilities })
    }

    /// Rescale nonnegative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total = stable_sum(weights.clone());
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    /// Whitespace-separated decimals.
    pub fn parse(text: &str, normalize: bool) -> Result<Self> {
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::InvalidDistribution(format!("'{tok}' is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if normalize {
            Self::normalized(values)
        } else {
            Self::new(values)
        }
    }

    pub fn uniform(w: usize) -> Self {
        Self {
            probabilities: vec![1.0 / w as f64; w],
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Append a zero-probability event.
    pub fn with_zero(&self) -> Self {
        let mut p = self.probabilities.clone();
        p.push(0.0);
        Self { probabilities: p }
    }

    /// `-Σ p log p`, natural log.
    pub fn shannon(&self) -> f64 {
        stable_sum(
            self.probabilities
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * p.ln())
                .collect(),
        )
    }
}

/// Order-independent sum: drop zeros, sort, then add pairwise.
fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.retain(|t| *t != 0.0);
    terms.sort_by(f64::total_cmp);
    pairwise(&terms)
}

fn pairwise(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        n => pairwise(&terms[..n / 2]) + pairwise(&terms[n / 2..]),
    }
}

/// `(a, σ)` checked against a window, with the constants `s` needs.
#[derive(Debug, Clone)]
pub struct EntropyParams {
    pub a: f64,
    pub sigma: f64,
    pub mode: WindowMode,
    pub l_sigma: f64,
    pub window: ParamWindow,
    zeta_a: f64,
    denom: f64,
}

impl EntropyParams {
    /// `None` picks the window defaults.
    pub fn new(
        z: &IharaZeta,
        window: &ParamWindow,
        a: Option<f64>,
        sigma: Option<f64>,
    ) -> Result<Self> {
        window.require_usable()?;
        let a = a.unwrap_or(window.default_a);
        let l_sigma = window.sigma_limit(z, a)?;
        let sigma = sigma.unwrap_or(0.5 * l_sigma.min(1.0));
        window.check_pair(z, a, sigma)?;
        Self::build(z, window, a, sigma, l_sigma)
    }

    /// Only `a` is checked; used to probe σ values outside `(0, l_σ)`.
    pub fn with_any_sigma(z: &IharaZeta, window: &ParamWindow, a: f64, sigma: f64) -> Result<Self> {
        let l_sigma = window.sigma_limit(z, a)?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::ParamOutOfWindow(format!(
                "sigma = {sigma} must be positive"
            )));
        }
        Self::build(z, window, a, sigma, l_sigma)
    }

    fn build(
        z: &IharaZeta,
        window: &ParamWindow,
        a: f64,
        sigma: f64,
        l_sigma: f64,
    ) -> Result<Self> {
        let d = z.derivatives(a)?;
        Ok(Self {
            a,
            sigma,
            mode: window.mode,
            l_sigma,
            window: window.clone(),
            zeta_a: d.zeta,
            denom: 1.0 - a * d.d1,
        })
    }

    /// `1 - aζ'(a)`.
    pub fn denominator(&self) -> f64 {
        self.denom
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": float(self.a),
            "sigma": float(self.sigma),
            "mode": self.mode,
            "l_sigma": float(self.l_sigma),
        })
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidDistribution(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `s(p)`; exactly 0 at `p = 0` and `p = 1`.
pub fn s_term(z: &IharaZeta, params: &EntropyParams, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let y = p.powf(params.sigma);
    let bracket = (z.eval(params.a * y)? - params.zeta_a) + (1.0 - y);
    Ok(p * bracket / (params.sigma * params.denom))
}

/// `s'(p)`; at `p = 0` this is the right limit `(2 - ζ(a)) / (σD)`.
pub fn s_prime(z: &IharaZeta, params: &EntropyParams, p: f64) -> Result<f64> {
    check_p(p)?;
    let (a, sigma) = (params.a, params.sigma);
    let y = p.powf(sigma);
    let d = z.derivatives(a * y)?;
    let num = a * sigma * y * d.d1 + d.zeta - (1.0 + sigma) * y - params.zeta_a + 1.0;
    Ok(num / (sigma * params.denom))
}

/// `s''(p) = -(1 + σ) p^(σ-1) R(p)` in closed form, `p ∈ (0, 1]`.
pub fn s_second(z: &IharaZeta, params: &EntropyParams, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        return Err(Error::InvalidDistribution(
            "s'' is unbounded at p = 0".into(),
        ));
    }
    let (a, sigma) = (params.a, params.sigma);
    let y = p.powf(sigma);
    let d = z.derivatives(a * y)?;
    let bracket = a * a * (sigma / (sigma + 1.0)) * y * d.d2 + a * d.d1 - 1.0;
    Ok((sigma + 1.0) * p.powf(sigma - 1.0) / params.denom * bracket)
}

/// Central second difference of `s` with step `h`.
pub fn s_second_fd(z: &IharaZeta, params: &EntropyParams, p: f64, h: f64) -> Result<f64> {
    let (lo, mid, hi) = (
        s_term(z, params, p - h)?,
        s_term(z, params, p)?,
        s_term(z, params, p + h)?,
    );
    Ok((hi - 2.0 * mid + lo) / (h * h))
}

/// `S(P) = Σ s(p_i)`, summed in an order that does not depend on `P`'s order.
pub fn ihara_entropy(
    z: &IharaZeta,
    params: &EntropyParams,
    dist: &ProbabilityDistribution,
) -> Result<f64> {
    let terms = dist
        .probabilities()
        .iter()
        .map(|&p| s_term(z, params, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(stable_sum(terms))
}

/// `|S - H|` along a decreasing σ sequence.
#[derive(Debug, Clone, Serialize)]
pub struct ShannonLimitReport {
    pub sigmas: Vec<f64>,
    pub deviations: Vec<f64>,
    /// Deviations never increase, and strictly decrease while positive.
    pub monotone: bool,
    /// Least-squares slope of `log |S - H|` against `log σ`; `None` when
    /// fewer than two deviations are positive.
    pub rate_exponent: Option<f64>,
}

pub fn shannon_limit_check(
    z: &IharaZeta,
    window: &ParamWindow,
    a: f64,
    dist: &ProbabilityDistribution,
    sigmas: &[f64],
) -> Result<ShannonLimitReport> {
    if sigmas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::ParamOutOfWindow("sigma values must decrease".into()));
    }
    let h = dist.shannon();
    let mut deviations = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let params = EntropyParams::new(z, window, Some(a), Some(sigma))?;
        deviations.push((ihara_entropy(z, &params, dist)? - h).abs());
    }
    let monotone = deviations
        .windows(2)
        .all(|w| w[1] <= w[0] && (w[0] == 0.0 || w[1] < w[0]));
    let points: Vec<(f64, f64)> = sigmas
        .iter()
        .zip(&deviations)
        .filter(|(_, d)| **d > 0.0)
        .map(|(s, d)| (s.ln(), d.ln()))
        .collect();
    let rate_exponent = (points.len() >= 2).then(|| {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(ShannonLimitReport {
        sigmas: sigmas.to_vec(),
        deviations,
        monotone,
        rate_exponent,
    })
}

/// Interior maximizer of `s`.
#[derive(Debug, Clone, Serialize)]
pub struct MaxPoint {
    pub p: f64,
    pub value: f64,
    pub s_prime: f64,
    /// Finite-difference `s''`, step 1e-5.
    pub s_second: f64,
}

pub const MAX_RESIDUAL_TOL: f64 = 1e-10;

/// Bisection on `s'`, which decreases from `s'(0⁺)` to `s'(1) = -1`.
pub fn find_max_p(z: &IharaZeta, params: &EntropyParams) -> Result<MaxPoint> {
    let (lo_val, hi_val) = (s_prime(z, params, 0.0)?, s_prime(z, params, 1.0)?);
    if !(lo_val > 0.0 && hi_val < 0.0) {
        return Err(Error::NoInteriorMaximum {
            lo: lo_val,
            hi: hi_val,
        });
    }
    let p = crate::params::bisect_decreasing(
        |p| s_prime(z, params, p),
        0.0,
        1.0,
        1e-14,
        MAX_RESIDUAL_TOL,
    )?;
    let sp = s_prime(z, params, p)?;
    if sp.abs() > MAX_RESIDUAL_TOL {
        return Err(Error::RootNotFound(format!(
            "|s'({p})| = {} above tolerance",
            sp.abs()
        )));
    }
    let h = 1e-5_f64.min(p / 2.0).min((1.0 - p) / 2.0);
    let second = s_second_fd(z, params, p, h)?;
    if second >= 0.0 {
        return Err(Error::Internal(format!(
            "s''({p}) = {second} is not negative"
        )));
    }
    Ok(MaxPoint {
        p,
        value: s_term(z, params, p)?,
        s_prime: sp,
        s_second: second,
    })
}

/// `ζ(c)` and `ζ'(c)` at an exact rational `c`.
fn zeta_and_slope(z: &IharaZeta, c: &Rational) -> (Rational, Rational) {
    let q = z.poly().eval_rational(c);
    let q1 = z.poly().expanded.derivative().eval_rational(c);
    let zeta = q.recip();
    let slope = -q1 / (&q * &q);
    (zeta, slope)
}

/// `G(t) = [ζ(aE) - E + 1 - ζ(a)] / (σ(1 - aζ'(a)))`, `E = e^(-σt)`, exact.
///
/// `a` and `σ` are first rounded to 12 decimals so the coefficients stay
/// exact rationals.
pub fn generator_series(
    z: &IharaZeta,
    a: f64,
    sigma: f64,
    order: usize,
) -> Result<TruncatedSeries> {
    if order < 2 {
        return Err(Error::OrderTooLarge {
            requested: order,
            available: 2,
        });
    }
    let (ar, sr) = (decimal_rational(a, 12), decimal_rational(sigma, 12));
    if sr.is_zero() || ar.is_zero() {
        return Err(Error::ParamOutOfWindow(
            "a and sigma must be nonzero".into(),
        ));
    }
    generator_series_exact(z, &ar, &sr, order)
}

pub fn generator_series_exact(
    z: &IharaZeta,
    a: &Rational,
    sigma: &Rational,
    order: usize,
) -> Result<TruncatedSeries> {
    // E(t) = exp(-σ t)
    let mut e = vec![Rational::one(); order + 1];
    for k in 1..=order {
        e[k] = &e[k - 1] * (-sigma) / Rational::from_integer((k as i64).into());
    }
    let e = TruncatedSeries::new(e);
    let inner = e.scale(a);
    // Q(aE) by Horner over the polynomial, then its reciprocal
    let mut q = TruncatedSeries::zero(order);
    for c in z.poly().expanded.coefficients().iter().rev() {
        q = q.mul(&inner);
        q = q.add(&TruncatedSeries::constant(
            Rational::from_integer(c.clone()),
            order,
        ));
    }
    let zeta_of = q.reciprocal()?;
    let (zeta_a, slope_a) = zeta_and_slope(z, a);
    let denom = sigma * (Rational::one() - a * slope_a);
    if denom.is_zero() {
        return Err(Error::ParamOutOfWindow("1 - a·ζ'(a) vanishes".into()));
    }
    let shift = TruncatedSeries::constant(Rational::one() - zeta_a, order);
    let g = zeta_of.sub(&e).add(&shift);
    Ok(g.scale(&denom.recip()))
}

/// `Φ(s₁, s₂) = G(F(s₁) + F(s₂))` with `F` the compositional inverse of `G`.
pub fn lazard_law(g: &TruncatedSeries, order: usize) -> Result<BivariateTruncatedSeries> {
    let g = g.truncate(order.min(g.order()));
    let f = g.revert()?;
    let sum = MultiSeries::from_univariate(&f, 2, 0).add(&MultiSeries::from_univariate(&f, 2, 1));
    Ok(BivariateTruncatedSeries::from_multi(
        sum.substitute_into(&g)?,
    ))
}

/// Outcome of the formal-group checks at the law's own order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormalGroupAxioms {
    pub unit: bool,
    pub commutative: bool,
    pub associative: bool,
}

impl FormalGroupAxioms {
    pub fn all(&self) -> bool {
        self.unit && self.commutative && self.associative
    }
}

pub fn check_formal_group(phi: &BivariateTruncatedSeries) -> Result<FormalGroupAxioms> {
    let n = phi.order();
    let m = phi.as_multi();
    let s = |which| MultiSeries::variable(2, n, which);
    let unit = m.set_zero(1) == s(0) && m.set_zero(0) == s(1);
    let commutative = m.terms().all(|(e, c)| phi.coeff(e[1], e[0]) == *c);
    let v = |which| MultiSeries::variable(3, n, which);
    let left_inner = phi.substitute(&v(0), &v(1))?;
    let right_inner = phi.substitute(&v(1), &v(2))?;
    let left = phi.substitute(&left_inner, &v(2))?;
    let right = phi.substitute(&v(0), &right_inner)?;
    Ok(FormalGroupAxioms {
        unit,
        commutative,
        associative: left == right,
    })
}
