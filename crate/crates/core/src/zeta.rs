//! The Ihara zeta function of a graph.
//!
//! Three routes produce the same object:
//!
//! * the determinant formula `1/ζ(x) = (1 - x²)^(m-n) det(I - Ax + (D - I)x²)`,
//!   computed exactly by evaluating the integer matrix polynomial at `2n + 1`
//!   integer points and interpolating;
//! * the exponential of the trace series `Σ tr(T^k) x^k / k`;
//! * the Euler product over prime cycles (see [`crate::symbolic`]).
//!
//! Numerical values of `ζ`, `ζ'` and `ζ''` always come from the polynomial,
//! evaluated in exact rational arithmetic and rounded once.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::line_graph::{HashimotoMatrix, OrientedEdgeAlphabet};
use crate::poly::{bareiss_determinant, interpolate_integer, IntPoly};
use crate::series::{
    bigint_json, int, rational_from_f64, rational_to_f64, Rational, TruncatedSeries,
};

/// `Q(x) = 1/ζ(x)` as an exact integer polynomial, with its two factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocalZetaPolynomial {
    /// `det(I - Ax + (D - I)x²)`, degree at most `2n`.
    pub det_part: IntPoly,
    /// `m - n`, the power of `(1 - x²)`.
    pub cycle_exponent: usize,
    /// The product, degree at most `2m`.
    pub expanded: IntPoly,
}

impl ReciprocalZetaPolynomial {
    pub fn coefficients(&self) -> &[BigInt] {
        self.expanded.coefficients()
    }

    pub fn degree(&self) -> usize {
        self.expanded.degree()
    }

    /// Power series of `ζ = 1/Q` by exact long division.
    pub fn zeta_expansion(&self, order: usize) -> TruncatedSeries {
        self.expanded.reciprocal_series(order)
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.expanded.eval_rational(x)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients().iter().map(bigint_json).collect::<Vec<_>>(),
            "det_part": self.det_part.coefficients().iter().map(bigint_json).collect::<Vec<_>>(),
            "cycle_exponent": self.cycle_exponent,
        })
    }
}

/// Exact reciprocal zeta polynomial via evaluation and interpolation.
pub fn reciprocal_poly(g: &Graph) -> ReciprocalZetaPolynomial {
    let n = g.vertex_count();
    let m = g.edge_count();
    let adj = g.adjacency();
    let deg = g.degrees();

    let xs: Vec<i64> = (0..=(2 * n) as i64).collect();
    let values: Vec<BigInt> = xs
        .iter()
        .map(|&x| {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let matrix: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut v = -BigInt::from(adj[i][j]) * &x;
                            if i == j {
                                v += BigInt::one() + BigInt::from(deg[i] as i64 - 1) * &x2;
                            }
                            v
                        })
                        .collect()
                })
                .collect();
            bareiss_determinant(&matrix)
        })
        .collect();
    let det_part = interpolate_integer(&xs, &values)
        .expect("determinant of an integer matrix polynomial is integral");
    let cycle_exponent = m - n;
    let expanded = IntPoly::from_i64(&[1, 0, -1])
        .pow(cycle_exponent)
        .mul(&det_part);
    ReciprocalZetaPolynomial {
        det_part,
        cycle_exponent,
        expanded,
    }
}

/// `exp(Σ_{k>=1} tr(T^k) x^k / k)` to `order`, from exact traces.
pub fn zeta_series_from_traces(traces: &[BigInt], order: usize) -> Result<TruncatedSeries> {
    if traces.len() < order {
        return Err(Error::OrderTooLarge {
            requested: order,
            available: traces.len(),
        });
    }
    let mut log = vec![Rational::zero(); order + 1];
    for k in 1..=order {
        log[k] = Rational::new(traces[k - 1].clone(), BigInt::from(k));
    }
    let series = TruncatedSeries::new(log).exp()?;
    if !series.is_integral() {
        return Err(Error::Internal(
            "zeta series has non-integer coefficients".into(),
        ));
    }
    Ok(series)
}

pub fn zeta_series(g: &Graph, order: usize) -> Result<TruncatedSeries> {
    let alph = OrientedEdgeAlphabet::new(g);
    let t = HashimotoMatrix::new(&alph);
    zeta_series_from_traces(&t.trace_powers(order), order)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData {
    /// Perron root of `T` (polynomial route).
    pub lambda: f64,
    /// Perron root from shifted power iteration.
    pub lambda_power: f64,
    pub power_iterations: usize,
    /// Collatz-Wielandt bracket on `λ` from the last iterate.
    pub power_bracket: (f64, f64),
    /// `2(d - 2)/m`.
    pub lower_bound: f64,
    /// `D - 2`.
    pub upper_bound: f64,
    /// Smallest positive root of `Q`, rounded down: `Q > 0` on `[0, radius)`.
    pub radius: f64,
}

pub const PERRON_REL_TOL: f64 = 1e-9;
const POWER_DRIFT: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;
const SCAN_STEPS: usize = 20_000;
/// Absolute bisection tolerance on the smallest root of `Q`.
pub const ROOT_BISECT_TOL: f64 = 1e-12;

/// Power iteration on `T + I`; the shift removes the period-`h` rotation
/// of the peripheral spectrum.
pub fn perron_by_power_iteration(t: &HashimotoMatrix) -> (f64, usize, (f64, f64)) {
    let n = t.size();
    let mut v = vec![1.0f64; n];
    let mut estimate = f64::NAN;
    let mut bracket = (f64::NAN, f64::NAN);
    for iter in 1..=POWER_MAX_ITER {
        let w: Vec<f64> = (0..n)
            .map(|e| v[e] + t.successors(e).iter().map(|&f| v[f]).sum::<f64>())
            .collect();
        let next = w.iter().sum::<f64>() / v.iter().sum::<f64>();
        let ratios = w.iter().zip(&v).map(|(a, b)| a / b);
        let lo = ratios.clone().fold(f64::INFINITY, f64::min);
        let hi = ratios.fold(f64::NEG_INFINITY, f64::max);
        bracket = (lo - 1.0, hi - 1.0);
        let scale = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / scale).collect();
        let drift = (next - estimate).abs();
        estimate = next;
        if drift <= POWER_DRIFT * next {
            return (estimate - 1.0, iter, bracket);
        }
    }
    (estimate - 1.0, POWER_MAX_ITER, bracket)
}

fn exact_sign(p: &IntPoly, x: f64) -> i32 {
    let v = p.eval_rational(&rational_from_f64(x));
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Smallest positive real root of `p` (with `p(0) > 0`) by a float scan of
/// `(0, 1)` followed by bisection on exact signs. Returns the bracket
/// `(lo, hi)` with `p(lo) > 0 >= p(hi)` and `hi - lo <= tol` (or float
/// resolution, whichever is coarser).
pub fn smallest_positive_root(p: &IntPoly, tol: f64) -> Result<(f64, f64)> {
    let step = 1.0 / SCAN_STEPS as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=SCAN_STEPS {
        let x = i as f64 * step;
        if p.eval_f64(x) <= 0.0 && exact_sign(p, x) <= 0 {
            hi = Some(x);
            break;
        }
        lo = x;
    }
    let mut hi = hi.ok_or_else(|| Error::RootNotFound("no sign change of Q on (0, 1)".into()))?;
    if exact_sign(p, hi) == 0 {
        // exact root on the grid; keep an open bracket just below it
        let below = f64::from_bits(hi.to_bits() - 1);
        return Ok((below, hi));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match exact_sign(p, mid) {
            1 => lo = mid,
            0 => {
                return Ok((f64::from_bits(mid.to_bits() - 1), mid));
            }
            _ => hi = mid,
        }
    }
    Ok((lo, hi))
}

/// The Perron root of `T` two ways, plus the eigenvalue bounds.
pub fn perron_root(g: &Graph) -> Result<SpectralData> {
    let alph = OrientedEdgeAlphabet::new(g);
    let t = HashimotoMatrix::new(&alph);
    let q = reciprocal_poly(g);
    spectral_data(g, &t, &q)
}

fn spectral_data(
    g: &Graph,
    t: &HashimotoMatrix,
    q: &ReciprocalZetaPolynomial,
) -> Result<SpectralData> {
    let (lambda_power, power_iterations, power_bracket) = perron_by_power_iteration(t);
    let (lo, hi) = smallest_positive_root(&q.det_part, ROOT_BISECT_TOL)?;
    let lambda = 2.0 / (lo + hi);
    if (lambda - lambda_power).abs() > PERRON_REL_TOL * lambda {
        return Err(Error::PerronDisagreement {
            power: lambda_power,
            poly: lambda,
        });
    }
    let stats = g.degree_stats();
    Ok(SpectralData {
        lambda,
        lambda_power,
        power_iterations,
        power_bracket,
        lower_bound: 2.0 * (stats.min_endpoint_sum as f64 - 2.0) / g.edge_count() as f64,
        upper_bound: stats.max_endpoint_sum as f64 - 2.0,
        radius: lo,
    })
}

/// `(ζ, ζ', ζ'')` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaDerivatives {
    pub zeta: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Everything needed to evaluate `ζ_G` on `[0, 1/λ)`.
#[derive(Debug, Clone)]
pub struct IharaZeta {
    graph: Graph,
    alphabet: OrientedEdgeAlphabet,
    matrix: HashimotoMatrix,
    poly: ReciprocalZetaPolynomial,
    q1: IntPoly,
    q2: IntPoly,
    spectral: SpectralData,
}

impl IharaZeta {
    pub fn new(g: &Graph) -> Result<Self> {
        g.require_valid()?;
        let alphabet = OrientedEdgeAlphabet::new(g);
        let matrix = HashimotoMatrix::new(&alphabet);
        let poly = reciprocal_poly(g);
        let spectral = spectral_data(g, &matrix, &poly)?;
        let q1 = poly.expanded.derivative();
        let q2 = q1.derivative();
        Ok(Self {
            graph: g.clone(),
            alphabet,
            matrix,
            poly,
            q1,
            q2,
            spectral,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn alphabet(&self) -> &OrientedEdgeAlphabet {
        &self.alphabet
    }

    pub fn matrix(&self) -> &HashimotoMatrix {
        &self.matrix
    }

    pub fn poly(&self) -> &ReciprocalZetaPolynomial {
        &self.poly
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    pub fn lambda(&self) -> f64 {
        self.spectral.lambda
    }

    pub fn radius(&self) -> f64 {
        self.spectral.radius
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn check_domain(&self, x: f64) -> Result<Rational> {
        if !(x.is_finite() && x >= 0.0 && x < self.spectral.radius) {
            return Err(Error::Domain {
                x,
                radius: self.spectral.radius,
            });
        }
        Ok(rational_from_f64(x))
    }

    /// `ζ(x)` as an exact rational, for oracles and exact comparisons.
    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.poly.eval_rational(x).recip()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = self.check_domain(x)?;
        Ok(rational_to_f64(&self.eval_exact(&x)))
    }

    pub fn derivatives(&self, x: f64) -> Result<ZetaDerivatives> {
        let x = self.check_domain(x)?;
        let q = self.poly.eval_rational(&x);
        let q1 = self.q1.eval_rational(&x);
        let q2 = self.q2.eval_rational(&x);
        let zeta = q.recip();
        let d1 = -&q1 / (&q * &q);
        let d2 = (int(2) * &q1 * &q1 - &q * &q2) / (&q * &q * &q);
        Ok(ZetaDerivatives {
            zeta: rational_to_f64(&zeta),
            d1: rational_to_f64(&d1),
            d2: rational_to_f64(&d2),
        })
    }

    /// `h(x) = 1 - x ζ'(x)`.
    pub fn h(&self, x: f64) -> Result<f64> {
        let xr = self.check_domain(x)?;
        let q = self.poly.eval_rational(&xr);
        let q1 = self.q1.eval_rational(&xr);
        // 1 + x Q'/Q², rounded once
        let v = Rational::one() + &xr * q1 / (&q * &q);
        Ok(rational_to_f64(&v))
    }

    pub fn traces(&self, max_power: usize) -> Vec<BigInt> {
        self.matrix.trace_powers(max_power)
    }

    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        zeta_series_from_traces(&self.traces(order), order)
    }

    /// Truncated exp-trace evaluation with a bound on the neglected part of
    /// the exponent, `Σ_{k>K} 2m (xλ)^k / k`.
    pub fn series_value(&self, x: f64, terms: usize) -> (f64, f64) {
        let traces = self.traces(terms);
        let exponent: f64 = traces
            .iter()
            .enumerate()
            .map(|(i, tr)| {
                let k = (i + 1) as i32;
                tr.to_f64().unwrap_or(f64::INFINITY) * x.powi(k) / k as f64
            })
            .sum();
        let two_m = 2.0 * self.edge_count() as f64;
        let r = x * self.lambda();
        let mut tail = 0.0;
        let mut k = terms + 1;
        loop {
            let term = two_m * r.powi(k as i32) / k as f64;
            tail += term;
            if term < 1e-18 * tail.max(1e-300) || k > terms + 100_000 {
                break;
            }
            k += 1;
        }
        if r >= 1.0 {
            tail = f64::INFINITY;
        }
        (exponent.exp(), tail)
    }
}

pub fn zeta_eval(z: &IharaZeta, x: f64) -> Result<f64> {
    z.eval(x)
}

pub fn zeta_derivatives(z: &IharaZeta, x: f64) -> Result<ZetaDerivatives> {
    z.derivatives(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::*;

    fn paper_billiard_q() -> IntPoly {
        let factor = IntPoly::from_i64(&[1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48]);
        IntPoly::from_i64(&[1, 0, -1]).pow(3).mul(&factor)
    }

    #[test]
    fn billiard_polynomial_is_exact() {
        let q = reciprocal_poly(&billiard());
        assert_eq!(q.cycle_exponent, 3);
        assert_eq!(
            q.det_part,
            IntPoly::from_i64(&[1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48])
        );
        assert_eq!(q.expanded, paper_billiard_q());
    }

    #[test]
    fn constant_term_is_one() {
        for g in [
            complete(4),
            complete(5),
            billiard(),
            complete_bipartite(2, 3),
        ] {
            let q = reciprocal_poly(&g);
            assert!(q.coefficients()[0].is_one());
            assert!(q.degree() <= 2 * g.edge_count());
        }
    }

    #[test]
    fn k4_cross_route() {
        let g = complete(4);
        let q = reciprocal_poly(&g);
        assert_eq!(q.zeta_expansion(12), zeta_series(&g, 12).unwrap());
    }

    #[test]
    fn series_low_coefficients() {
        let s = zeta_series(&complete(4), 4).unwrap();
        assert!(s.coeff(1).unwrap().is_zero());
        assert!(s.coeff(2).unwrap().is_zero());
        assert_eq!(s.coeff(3).unwrap(), &int(8));
        let tr4 = HashimotoMatrix::new(&OrientedEdgeAlphabet::new(&complete(4))).trace_powers(4)[3]
            .clone();
        assert_eq!(s.coeff(4).unwrap(), &Rational::new(tr4, BigInt::from(4)));
    }

    #[test]
    fn k4_perron_root_is_two() {
        let s = perron_root(&complete(4)).unwrap();
        assert!((s.lambda - 2.0).abs() < 1e-12);
        assert!((s.lambda_power - 2.0).abs() < 1e-9);
    }

    #[test]
    fn billiard_perron_root() {
        let s = perron_root(&billiard()).unwrap();
        assert!(s.lambda > 2.0 && s.lambda < 2.5);
        let factor = IntPoly::from_i64(&[1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48]);
        assert!(factor.eval_f64(0.4) > 0.0 && factor.eval_f64(0.5) < 0.0);
        assert!(factor.eval_f64(1.0 / s.lambda).abs() < 1e-9);
    }

    #[test]
    fn bipartite_needs_shift() {
        let g = complete_bipartite(2, 3);
        let t = HashimotoMatrix::new(&OrientedEdgeAlphabet::new(&g));
        // unshifted iteration from the all-ones vector alternates between
        // two Rayleigh-like ratios instead of settling
        let n = t.size();
        let mut v = vec![1.0f64; n];
        let mut ratios = Vec::new();
        for _ in 0..6 {
            let w: Vec<f64> = (0..n)
                .map(|e| t.successors(e).iter().map(|&f| v[f]).sum())
                .collect();
            ratios.push(w.iter().sum::<f64>() / v.iter().sum::<f64>());
            v = w;
        }
        assert!((ratios[4] - ratios[5]).abs() > 1e-3);
        let s = perron_root(&g).unwrap();
        assert!((s.lambda - 2f64.sqrt()).abs() < 1e-10);
        assert!((s.lambda_power - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn eval_at_zero_and_domain() {
        let z = IharaZeta::new(&billiard()).unwrap();
        assert_eq!(z.eval(0.0).unwrap(), 1.0);
        let d = z.derivatives(0.0).unwrap();
        assert_eq!((d.zeta, d.d1, d.d2), (1.0, 0.0, 0.0));
        assert!(matches!(
            z.eval(1.0 / z.lambda()),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(z.eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn billiard_eval_quarter() {
        let z = IharaZeta::new(&billiard()).unwrap();
        let q = paper_billiard_q().eval_rational(&Rational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(z.eval(0.25).unwrap(), rational_to_f64(&q.recip()));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for g in [complete(4), billiard(), complete_bipartite(2, 3)] {
            let z = IharaZeta::new(&g).unwrap();
            let x = 0.3 / z.lambda();
            let h = 1e-6 * z.radius();
            let d = z.derivatives(x).unwrap();
            let fd1 = (z.eval(x + h).unwrap() - z.eval(x - h).unwrap()) / (2.0 * h);
            assert!((d.d1 - fd1).abs() <= 1e-6 * d.d1.abs());
        }
    }

    #[test]
    fn monotone_and_nonnegative() {
        let z = IharaZeta::new(&billiard()).unwrap();
        let mut prev = z.derivatives(0.0).unwrap();
        for i in 1..100 {
            let x = 0.95 * z.radius() * i as f64 / 99.0;
            let d = z.derivatives(x).unwrap();
            assert!(d.d2 >= 0.0);
            assert!(d.zeta >= prev.zeta && d.d1 >= prev.d1 && d.d2 >= prev.d2);
            prev = d;
        }
    }

    #[test]
    fn growth_toward_radius() {
        let z = IharaZeta::new(&complete(4)).unwrap();
        let vals: Vec<f64> = (1..=6)
            .map(|k| z.eval((1.0 - 10f64.powi(-k)) / z.lambda()).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        assert!(vals[5] > 1e4);
    }

    #[test]
    fn series_value_with_tail() {
        let z = IharaZeta::new(&billiard()).unwrap();
        let x = 0.2 / z.lambda();
        let (approx, tail) = z.series_value(x, 30);
        let exact = z.eval(x).unwrap();
        assert!(tail < 1e-15);
        assert!((approx - exact).abs() <= exact * (tail.exp() - 1.0) + 1e-14);
    }

    #[test]
    fn rejects_invalid_graph() {
        assert!(matches!(
            IharaZeta::new(&cycle(5)),
            Err(Error::InvalidGraph(_))
        ));
    }
}
