//! Thresholds `x₀` (root of `h`) and `x₁` (root of `ζ = 2`), the σ limit,
//! the admissibility functional `R`, and the inequality audit.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::float;
use crate::series::first_below;
use crate::zeta::IharaZeta;

/// Absolute tolerance on `x` for every bisection.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Residual certified for `h(x₀)` and `ζ(x₁) - 2`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Which interval `a` may come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowMode {
    /// `a ∈ (x₁, x₀)`.
    Strict,
    /// `a ∈ (0, x₀)`.
    Relaxed,
}

impl fmt::Display for WindowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowMode::Strict => "strict",
            WindowMode::Relaxed => "relaxed",
        })
    }
}

impl FromStr for WindowMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strict" => Ok(WindowMode::Strict),
            "relaxed" => Ok(WindowMode::Relaxed),
            other => Err(format!(
                "unknown mode '{other}' (expected strict or relaxed)"
            )),
        }
    }
}

/// Bisection for a decreasing function with `f(lo) > 0 > f(hi)`.
///
/// Stops once the bracket is below `xtol` and the residual is below `ftol`,
/// or when the bracket cannot shrink further in `f64`.
pub fn bisect_decreasing<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64, ftol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::RootNotFound(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm > 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if hi - lo <= xtol && flo.abs().min(fhi.abs()) <= ftol {
            break;
        }
    }
    Ok(if flo.abs() <= fhi.abs() { lo } else { hi })
}

/// Largest point `(1 - ε)·radius`, ε = 10⁻¹, 10⁻², …, where `f` is negative.
fn negative_bracket<F>(z: &IharaZeta, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = z.radius();
    for j in 1..=15 {
        let x = r * (1.0 - 10f64.powi(-j));
        if f(x)? < 0.0 {
            return Ok(x);
        }
    }
    Err(Error::RootNotFound(format!(
        "function stays nonnegative up to (1 - 1e-15)·{r}"
    )))
}

/// Root of `h(x) = 1 - xζ'(x)` in `(0, 1/λ)`.
pub fn solve_x0(z: &IharaZeta, xtol: f64) -> Result<f64> {
    let h = |x: f64| z.h(x);
    let hi = negative_bracket(z, h)?;
    let x0 = bisect_decreasing(h, 0.0, hi, xtol, RESIDUAL_TOL)?;
    check_h_monotone(z, x0, hi)?;
    Ok(x0)
}

/// Uniqueness of `x₀` rests on `h` decreasing; confirm the sign pattern.
fn check_h_monotone(z: &IharaZeta, x0: f64, hi: f64) -> Result<()> {
    const SAMPLES: usize = 50;
    for i in 0..SAMPLES {
        let below = x0 * i as f64 / SAMPLES as f64;
        let above = x0 + (hi - x0) * (i + 1) as f64 / SAMPLES as f64;
        let (hb, ha) = (z.h(below)?, z.h(above)?);
        if hb < -RESIDUAL_TOL || ha > RESIDUAL_TOL {
            return Err(Error::Internal(format!(
                "h sign pattern violated around x0 = {x0}: h({below}) = {hb}, h({above}) = {ha}"
            )));
        }
    }
    Ok(())
}

/// Root of `ζ(x) = 2` in `(0, 1/λ)`.
pub fn solve_x1(z: &IharaZeta, xtol: f64) -> Result<f64> {
    let f = |x: f64| z.eval(x).map(|v| 2.0 - v);
    let hi = negative_bracket(z, f)?;
    bisect_decreasing(f, 0.0, hi, xtol, RESIDUAL_TOL)
}

/// `min(1, (1 - aζ'(a)) / (a²ζ''(a) + aζ'(a) - 1))`, or 1 when the
/// denominator is not positive. No window check.
pub fn sigma_limit_unchecked(z: &IharaZeta, a: f64) -> Result<f64> {
    let d = z.derivatives(a)?;
    let num = 1.0 - a * d.d1;
    let den = a * a * d.d2 + a * d.d1 - 1.0;
    Ok(if den <= 0.0 {
        1.0
    } else {
        (num / den).min(1.0)
    })
}

/// Unclamped ratio `(1 - aζ'(a)) / (a²ζ''(a) + aζ'(a) - 1)`; infinite when
/// the denominator is not positive.
pub fn sigma_ratio(z: &IharaZeta, a: f64) -> Result<f64> {
    let d = z.derivatives(a)?;
    let den = a * a * d.d2 + a * d.d1 - 1.0;
    Ok(if den <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 - a * d.d1) / den
    })
}

/// `R(x)` for the pair `(a, σ)`, `x ∈ [0, 1]`.
pub fn admissibility_r(z: &IharaZeta, a: f64, sigma: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParamOutOfWindow(format!("x = {x} outside [0, 1]")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::ParamOutOfWindow(format!(
            "sigma = {sigma} must be positive"
        )));
    }
    let y = x.powf(sigma);
    let at = z.derivatives(a * y)?;
    let base = z.derivatives(a)?;
    let denom = 1.0 - a * base.d1;
    let num = 1.0 - a * at.d1 - a * a * y * sigma / (1.0 + sigma) * at.d2;
    Ok(num / denom)
}

/// `R` sampled on `x = 0, 1/n, …, 1`.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityCertificate {
    pub a: f64,
    pub sigma: f64,
    pub l_sigma: f64,
    pub sigma_within_limit: bool,
    pub min_r: f64,
    pub all_positive: bool,
}

pub fn admissibility_certificate(
    window: &ParamWindow,
    z: &IharaZeta,
    a: f64,
    sigma: f64,
    samples: usize,
) -> Result<AdmissibilityCertificate> {
    let l_sigma = window.sigma_limit(z, a)?;
    let mut min_r = f64::INFINITY;
    for i in 0..=samples {
        let r = admissibility_r(z, a, sigma, i as f64 / samples as f64)?;
        min_r = min_r.min(r);
    }
    Ok(AdmissibilityCertificate {
        a,
        sigma,
        l_sigma,
        sigma_within_limit: sigma < l_sigma,
        min_r,
        all_positive: min_r > 0.0,
    })
}

/// Thresholds and default parameters for one graph.
#[derive(Debug, Clone, Serialize)]
pub struct ParamWindow {
    pub lambda: f64,
    pub x0: f64,
    pub x1: f64,
    pub inverse_2m_lambda: f64,
    /// σ limit at the default `a`.
    pub l_sigma: f64,
    pub strict_window_nonempty: bool,
    /// `0 < x₁ < 1/(2mλ) < x₀ < 1/λ < 1`.
    pub chain_holds: bool,
    pub mode: WindowMode,
    pub a_range: (f64, f64),
    pub default_a: f64,
    pub default_sigma: f64,
}

impl ParamWindow {
    pub fn compute(z: &IharaZeta, mode: WindowMode) -> Result<Self> {
        Self::compute_with_tol(z, mode, DEFAULT_ROOT_TOL)
    }

    pub fn compute_with_tol(z: &IharaZeta, mode: WindowMode, xtol: f64) -> Result<Self> {
        let lambda = z.lambda();
        let x0 = solve_x0(z, xtol)?;
        let x1 = solve_x1(z, xtol)?;
        let inv2ml = 1.0 / (2.0 * z.edge_count() as f64 * lambda);
        let inv_l = 1.0 / lambda;
        let chain_holds = 0.0 < x1 && x1 < inv2ml && inv2ml < x0 && x0 < inv_l && inv_l < 1.0;
        let strict_window_nonempty = x1 < x0;
        let a_range = match mode {
            WindowMode::Strict => (x1, x0),
            WindowMode::Relaxed => (0.0, x0),
        };
        let (default_a, l_sigma, default_sigma) = if a_range.0 < a_range.1 {
            let a = 0.5 * (a_range.0 + a_range.1);
            let l = sigma_limit_unchecked(z, a)?;
            (a, l, 0.5 * l.min(1.0))
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };
        Ok(Self {
            lambda,
            x0,
            x1,
            inverse_2m_lambda: inv2ml,
            l_sigma,
            strict_window_nonempty,
            chain_holds,
            mode,
            a_range,
            default_a,
            default_sigma,
        })
    }

    /// Error unless the active mode admits some `a`.
    pub fn require_usable(&self) -> Result<()> {
        if self.mode == WindowMode::Strict && !self.strict_window_nonempty {
            return Err(Error::EmptyStrictWindow {
                x0: self.x0,
                x1: self.x1,
            });
        }
        Ok(())
    }

    pub fn check_a(&self, a: f64) -> Result<()> {
        self.require_usable()?;
        let (lo, hi) = self.a_range;
        if !(a > lo && a < hi) {
            return Err(Error::ParamOutOfWindow(format!(
                "a = {a} outside ({lo}, {hi}) for {} mode",
                self.mode
            )));
        }
        Ok(())
    }

    /// σ limit at `a`, after checking `a` against the active window.
    pub fn sigma_limit(&self, z: &IharaZeta, a: f64) -> Result<f64> {
        self.check_a(a)?;
        sigma_limit_unchecked(z, a)
    }

    /// Error unless `a` is in the window and `0 < σ < l_σ(a)`.
    pub fn check_pair(&self, z: &IharaZeta, a: f64, sigma: f64) -> Result<f64> {
        let l = self.sigma_limit(z, a)?;
        if !(sigma > 0.0 && sigma < l) {
            return Err(Error::ParamOutOfWindow(format!(
                "sigma = {sigma} outside (0, {l}) at a = {a}"
            )));
        }
        Ok(l)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": float(self.lambda),
            "x0": float(self.x0),
            "x1": float(self.x1),
            "inverse_2m_lambda": float(self.inverse_2m_lambda),
            "l_sigma": float(self.l_sigma),
            "strict_window_nonempty": self.strict_window_nonempty,
            "chain_holds": self.chain_holds,
            "mode": self.mode,
            "a_range": [float(self.a_range.0), float(self.a_range.1)],
            "default_a": float(self.default_a),
            "default_sigma": float(self.default_sigma),
        })
    }
}

/// One measured claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub claim_id: String,
    /// The claimed relation, written out.
    pub paper_location: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn get(&self, claim_id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.claim_id == claim_id)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "claim_id": e.claim_id,
                        "paper_location": e.paper_location,
                        "lhs": float(e.lhs),
                        "rhs": float(e.rhs),
                        "holds": e.holds,
                        "note": e.note,
                    })
                })
                .collect(),
        )
    }
}

/// `f(x) = x^x / (e (x-1)^(x+1))`, evaluated in logs.
pub fn f_bound(x: f64) -> f64 {
    (x * x.ln() - 1.0 - (x + 1.0) * (x - 1.0).ln()).exp()
}

/// Largest even power checked in the trace-versus-λ^k claim.
const EVEN_TRACE_MAX: usize = 8;
/// Truncation error allowed in the normalized trace sum.
const TRACE_SUM_TAIL: f64 = 1e-12;

/// Measure every inequality used to place `x₀`, `x₁` and `1/(2mλ)`.
///
/// Failures are data: the report is produced whatever the outcome, and its
/// order is fixed.
pub fn audit_inequalities(z: &IharaZeta, window: &ParamWindow) -> Result<AuditReport> {
    let g = z.graph();
    let m = g.edge_count() as f64;
    let two_m = 2.0 * m;
    let lambda = z.lambda();
    let stats = g.degree_stats();
    let (d_min, d_max) = (stats.min_endpoint_sum as f64, stats.max_endpoint_sum as f64);
    let at = window.inverse_2m_lambda;
    let mut out = Vec::new();
    let mut push = |id: &str, loc: &str, lhs: f64, rhs: f64, holds: bool, note: String| {
        out.push(AuditEntry {
            claim_id: id.into(),
            paper_location: loc.into(),
            lhs,
            rhs,
            holds,
            note,
        })
    };

    let t = z.matrix();
    let formula: usize = g
        .edges()
        .iter()
        .map(|&(u, v)| g.degree(u) + g.degree(v) - 2)
        .sum::<usize>()
        * 2;
    push(
        "line_graph_degree_sum",
        "oriented line graph has 2·Σ_(u,v) (d_u + d_v - 2) edges",
        t.degree_sum() as f64,
        formula as f64,
        t.degree_sum() == formula,
        format!(
            "lhs is in-degree plus out-degree summed over T; T has {} arcs, half the formula",
            t.arc_count()
        ),
    );

    let lower = 2.0 * (d_min - 2.0) / m;
    push(
        "eigenvalue_lower_bound",
        "λ >= 2(d - 2)/m, d = min over edges of d_u + d_v",
        lower,
        lambda,
        lower <= lambda,
        format!("d = {d_min}, m = {m}"),
    );
    push(
        "eigenvalue_upper_bound",
        "λ <= D - 2, D = max over edges of d_u + d_v",
        lambda,
        d_max - 2.0,
        lambda <= d_max - 2.0,
        format!("D = {d_max}"),
    );
    let avg = 2.0 / m * formula as f64 / 2.0;
    push(
        "eigenvalue_average_degree_step",
        "λ >= (2/m)·Σ_(u,v) (d_u + d_v - 2)",
        avg,
        lambda,
        avg <= lambda,
        format!(
            "intermediate step of the lower bound; mean out-degree of T is {}",
            t.arc_count() as f64 / two_m
        ),
    );
    push(
        "hashimoto_symmetric",
        "T is a symmetric matrix of order 2m",
        if t.is_symmetric() { 1.0 } else { 0.0 },
        1.0,
        t.is_symmetric(),
        "1 = symmetric; T is a directed adjacency matrix, its transpose is J·T·J with J the orientation swap".into(),
    );

    let traces = z.traces(EVEN_TRACE_MAX);
    for k in (2..=EVEN_TRACE_MAX).step_by(2) {
        let tr = traces[k - 1].to_f64().unwrap_or(f64::INFINITY);
        let lk = lambda.powi(k as i32);
        push(
            &format!("even_trace_at_least_lambda_power_k{k}"),
            "tr(T^k) >= λ^k for even k",
            tr,
            lk,
            tr >= lk,
            format!("k = {k}"),
        );
    }

    let r = z.radius();
    let near: Vec<f64> = [2, 4, 6, 8]
        .iter()
        .map(|&j| z.eval(r * (1.0 - 10f64.powi(-j))))
        .collect::<Result<_>>()?;
    let increasing = near.windows(2).all(|w| w[1] > w[0]);
    push(
        "zeta_diverges_at_inverse_lambda",
        "ζ(1/λ) diverges",
        near[3],
        100.0 * near[0],
        increasing && near[3] > 100.0 * near[0],
        format!(
            "ζ at (1 - 10^-j)/λ for j = 2, 4, 6, 8: {:?}; a sample can show growth, not divergence",
            near
        ),
    );

    const MONO_SAMPLES: usize = 50;
    let xs: Vec<f64> = (0..=MONO_SAMPLES)
        .map(|i| 0.99 * r * i as f64 / MONO_SAMPLES as f64)
        .collect();
    let ds = xs
        .iter()
        .map(|&x| z.derivatives(x))
        .collect::<Result<Vec<_>>>()?;
    let min_step = ds
        .windows(2)
        .map(|w| {
            (w[1].zeta - w[0].zeta)
                .min(w[1].d1 - w[0].d1)
                .min(w[1].d2 - w[0].d2)
        })
        .fold(f64::INFINITY, f64::min);
    push(
        "zeta_and_derivatives_increasing",
        "ζ, ζ', ζ'' are monotone increasing on [0, 1/λ)",
        min_step,
        0.0,
        min_step >= 0.0,
        format!("smallest increment over {MONO_SAMPLES} steps on [0, 0.99/λ]"),
    );
    let hs = xs.iter().map(|&x| z.h(x)).collect::<Result<Vec<_>>>()?;
    let max_step = hs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "h_decreasing",
        "h(x) = 1 - xζ'(x) is monotone decreasing",
        max_step,
        0.0,
        max_step <= 0.0,
        format!("largest increment over {MONO_SAMPLES} steps on [0, 0.99/λ]"),
    );

    let zeta_at = z.eval(at)?;
    let zeta_bound = (two_m * (two_m / (two_m - 1.0)).ln() - 1.0).exp();
    push(
        "zeta_at_inverse_2m_lambda_upper_bound",
        "ζ(1/(2mλ)) <= (2m)^(2m) / (e (2m - 1)^(2m))",
        zeta_at,
        zeta_bound,
        zeta_at <= zeta_bound,
        format!("2m = {two_m}; the bound is below 2 for every m >= 1"),
    );

    let fx: Vec<f64> = (2..=(two_m as usize + 4))
        .map(|x| f_bound(x as f64))
        .collect();
    let f_step = fx
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    push(
        "f_decreasing",
        "f(x) = x^x / (e (x - 1)^(x + 1)) is monotone decreasing",
        f_step,
        0.0,
        f_step < 0.0,
        format!(
            "integer samples x = 2..{}; f(4) = {}",
            two_m as usize + 4,
            f_bound(4.0)
        ),
    );
    let f2m = f_bound(two_m);
    push(
        "f_at_2m_below_one",
        "(2m)^(2m) / (e (2m - 1)^(2m + 1)) < 1",
        f2m,
        1.0,
        f2m < 1.0,
        "final step of the bound on h(1/(2mλ))".into(),
    );

    // tail of Σ_{k>K} tr(T^k)/(2mλ)^k is at most 2m / ((2m)^K (2m - 1))
    let tail = |k: usize| two_m / (two_m.powi(k as i32) * (two_m - 1.0));
    let cutoff = first_below(tail, TRACE_SUM_TAIL, 400);
    let traces = z.traces(cutoff);
    let scale = two_m * lambda;
    let partial: f64 = (2..=cutoff)
        .map(|k| traces[k - 1].to_f64().unwrap_or(f64::INFINITY) / scale.powi(k as i32))
        .sum();
    let trace_sum = partial + tail(cutoff);
    push(
        "normalized_trace_sum_bound",
        "Σ_{k>=2} tr(T^k)/(2mλ)^k <= 1/(2m - 1)",
        trace_sum,
        1.0 / (two_m - 1.0),
        trace_sum <= 1.0 / (two_m - 1.0),
        format!("K = {cutoff} terms plus tail bound {:.3e}", tail(cutoff)),
    );

    let h_at = z.h(at)?;
    push(
        "h_at_inverse_2m_lambda_positive",
        "h(1/(2mλ)) > 0",
        h_at,
        0.0,
        h_at > 0.0,
        format!("1/(2mλ) = {at}"),
    );
    push(
        "zeta_at_inverse_2m_lambda_exceeds_two",
        "ζ(1/(2mλ)) > 2",
        zeta_at,
        2.0,
        zeta_at > 2.0,
        format!("contradicts the upper bound {zeta_bound} whenever that bound is below 2"),
    );

    let (x0, x1) = (window.x0, window.x1);
    let inv_l = 1.0 / lambda;
    let chain = [
        ("chain_x1_positive", "0 < x1", 0.0, x1),
        ("chain_x1_below_inverse_2m_lambda", "x1 < 1/(2mλ)", x1, at),
        ("chain_inverse_2m_lambda_below_x0", "1/(2mλ) < x0", at, x0),
        ("chain_x0_below_inverse_lambda", "x0 < 1/λ", x0, inv_l),
        ("chain_inverse_lambda_below_one", "1/λ < 1", inv_l, 1.0),
    ];
    for (id, loc, lhs, rhs) in chain {
        push(id, loc, lhs, rhs, lhs < rhs, String::new());
    }
    push(
        "chain_all",
        "0 < x1 < 1/(2mλ) < x0 < 1/λ < 1",
        x1,
        x0,
        window.chain_holds,
        "lhs = x1, rhs = x0".into(),
    );
    push(
        "x1_below_x0",
        "a ∈ (x1, x0) is a nonempty interval",
        x1,
        x0,
        x1 < x0,
        "xζ'(x) >= 2ζ(x)·log ζ(x), so xζ'(x) >= 4 log 2 > 1 where ζ = 2 and x0 < x1".into(),
    );

    Ok(AuditReport { entries: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::*;
    use crate::graph::Graph;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn window(g: &Graph) -> (IharaZeta, ParamWindow) {
        let z = IharaZeta::new(g).unwrap();
        let w = ParamWindow::compute(&z, WindowMode::Relaxed).unwrap();
        (z, w)
    }

    #[test]
    fn k4_thresholds() {
        let (z, w) = window(&complete(4));
        assert!(w.x0 > 0.0 && w.x0 < 0.5);
        assert!(z.h(w.x0).unwrap().abs() <= RESIDUAL_TOL);
        assert!(w.x1 > 0.35 && w.x1 < 0.45, "x1 = {}", w.x1);
        assert!((z.eval(w.x1).unwrap() - 2.0).abs() <= RESIDUAL_TOL);
        assert!(z.h(w.x0 * (1.0 + 1e-6)).unwrap() < 0.0);
        assert_eq!(z.h(0.0).unwrap(), 1.0);
        assert!(!w.strict_window_nonempty);
        assert!(!w.chain_holds);
    }

    #[test]
    fn strict_mode_is_empty() {
        for g in [complete(4), billiard(), complete_bipartite(2, 3)] {
            let z = IharaZeta::new(&g).unwrap();
            let w = ParamWindow::compute(&z, WindowMode::Strict).unwrap();
            assert!(w.x0 < w.x1);
            assert!(matches!(
                w.require_usable(),
                Err(Error::EmptyStrictWindow { .. })
            ));
            assert!(matches!(
                w.sigma_limit(&z, w.x0 * 0.5),
                Err(Error::EmptyStrictWindow { .. })
            ));
        }
    }

    #[test]
    fn sigma_limit_cases() {
        let (z, w) = window(&complete(4));
        let l = w.sigma_limit(&z, w.x0 / 2.0).unwrap();
        assert!(l > 0.0 && l <= 1.0);
        assert_eq!(w.sigma_limit(&z, 1e-6).unwrap(), 1.0);
        assert!(matches!(
            w.sigma_limit(&z, w.x0 * 1.01),
            Err(Error::ParamOutOfWindow(_))
        ));
        assert!(matches!(
            w.sigma_limit(&z, 0.0),
            Err(Error::ParamOutOfWindow(_))
        ));
    }

    #[test]
    fn r_positive_below_limit_and_unity_at_zero() {
        for g in [complete(4), billiard()] {
            let (z, w) = window(&g);
            let a = w.default_a;
            let sigma = w.default_sigma;
            let d = z.derivatives(a).unwrap();
            let r0 = admissibility_r(&z, a, sigma, 0.0).unwrap();
            assert!((r0 - 1.0 / (1.0 - a * d.d1)).abs() < 1e-12);
            let cert = admissibility_certificate(&w, &z, a, sigma, 10).unwrap();
            assert!(cert.all_positive && cert.sigma_within_limit);
        }
    }

    #[test]
    fn r_goes_nonpositive_above_limit() {
        let (z, w) = window(&complete(4));
        let a = 0.95 * w.x0;
        let ratio = sigma_ratio(&z, a).unwrap();
        assert!(ratio.is_finite() && ratio < 1.0);
        assert!(admissibility_r(&z, a, 0.5 * ratio, 1.0).unwrap() > 0.0);
        assert!(admissibility_r(&z, a, 2.0 * ratio, 1.0).unwrap() <= 0.0);
        let cert = admissibility_certificate(&w, &z, a, 2.0 * ratio, 10).unwrap();
        assert!(!cert.sigma_within_limit && !cert.all_positive);
    }

    #[test]
    fn denominator_positive_in_relaxed_window() {
        let (z, w) = window(&billiard());
        for i in 1..100 {
            let a = w.x0 * i as f64 / 100.0;
            assert!(1.0 - a * z.derivatives(a).unwrap().d1 > 0.0);
        }
    }

    #[test]
    fn h_decreasing_on_samples() {
        for g in [complete(4), billiard(), complete_bipartite(2, 3)] {
            let z = IharaZeta::new(&g).unwrap();
            let hs: Vec<f64> = (0..100)
                .map(|i| z.h(z.radius() * i as f64 / 100.0).unwrap())
                .collect();
            assert!(hs.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn thresholds_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [billiard(), complete(5), complete_bipartite(3, 3)] {
            let (_, w) = window(&g);
            let n = g.vertex_count();
            for _ in 0..3 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                let mut edges: Vec<(usize, usize)> =
                    g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
                edges.shuffle(&mut rng);
                let (_, w2) = window(&Graph::from_edges(n, &edges).unwrap());
                assert!((w.x0 - w2.x0).abs() <= 1e-9);
                assert!((w.x1 - w2.x1).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn f_bound_value() {
        assert!((f_bound(4.0) - 0.38756).abs() < 5e-6);
    }

    #[test]
    fn audit_k4_expected_outcomes() {
        let (z, w) = window(&complete(4));
        let report = audit_inequalities(&z, &w).unwrap();
        let holds = |id: &str| report.get(id).unwrap_or_else(|| panic!("{id}")).holds;
        assert!(!holds("even_trace_at_least_lambda_power_k2"));
        assert!(holds("even_trace_at_least_lambda_power_k4"));
        assert!(holds("eigenvalue_lower_bound"));
        assert!(holds("eigenvalue_upper_bound"));
        assert!(!holds("eigenvalue_average_degree_step"));
        assert!(holds("line_graph_degree_sum"));
        assert!(!holds("hashimoto_symmetric"));
        assert!(holds("zeta_at_inverse_2m_lambda_upper_bound"));
        assert!(!holds("zeta_at_inverse_2m_lambda_exceeds_two"));
        assert!(holds("normalized_trace_sum_bound"));
        assert!(holds("h_at_inverse_2m_lambda_positive"));
        assert!(holds("f_decreasing"));
        assert!(holds("zeta_and_derivatives_increasing"));
        assert!(holds("h_decreasing"));
        assert!(holds("zeta_diverges_at_inverse_lambda"));
        assert!(!holds("x1_below_x0"));
        assert!(!holds("chain_all"));
    }

    #[test]
    fn audit_is_deterministic() {
        let (z, w) = window(&billiard());
        let a = audit_inequalities(&z, &w).unwrap().to_json().to_string();
        let (z2, w2) = window(&billiard());
        let b = audit_inequalities(&z2, &w2).unwrap().to_json().to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("strict".parse::<WindowMode>().unwrap(), WindowMode::Strict);
        assert!("loose".parse::<WindowMode>().is_err());
    }
}
