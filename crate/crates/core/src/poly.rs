//! Integer polynomials, fraction-free determinants, and exact interpolation.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::series::{Rational, TruncatedSeries};

/// Dense integer polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coefficients: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(BigInt::zero());
        }
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, exp: usize) -> Self {
        (0..exp).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        if self.coefficients.len() == 1 {
            return Self::from_i64(&[0]);
        }
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        // homogenized Horner on p/q: Σ c_k p^k q^(d-k), then one reduction
        let (p, q) = (x.numer(), x.denom());
        let mut num = BigInt::zero();
        let mut q_pow = BigInt::one();
        for c in self.coefficients.iter().rev() {
            num = num * p + c * &q_pow;
            q_pow *= q;
        }
        // q_pow is now q^(d+1); one factor of q was not used by num
        Rational::new(num * q, q_pow)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Horner in floating point; for scanning only, never for final values.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Power series of `1 / self` to `order`; requires constant term `±1`
    /// for the result to be integral, but any nonzero constant works.
    pub fn reciprocal_series(&self, order: usize) -> TruncatedSeries {
        let mut c: Vec<Rational> = self
            .coefficients
            .iter()
            .take(order + 1)
            .map(|v| Rational::from_integer(v.clone()))
            .collect();
        c.resize(order + 1, Rational::zero());
        TruncatedSeries::new(c)
            .reciprocal()
            .expect("nonzero constant term")
    }

    /// Human-readable form, highest degree first, e.g. `48x^10 + 3x^2 + 1`.
    pub fn pretty(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coef = if mag.is_one() && k > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if parts.is_empty() {
                let lead = if c.is_negative() { "-" } else { "" };
                parts.push(format!("{lead}{coef}{mono}"));
            } else {
                parts.push(format!("{sign} {coef}{mono}"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Interpolate the unique polynomial of degree `< xs.len()` through the
/// given integer points; returns `None` when the result is not integral.
pub fn interpolate_integer(xs: &[i64], ys: &[BigInt]) -> Option<IntPoly> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    // Newton divided differences, exact
    let mut coef: Vec<Rational> = ys
        .iter()
        .map(|y| Rational::from_integer(y.clone()))
        .collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = Rational::from_integer(BigInt::from(xs[i] - xs[i - j]));
            coef[i] = num / den;
        }
    }
    // expand Newton form into monomials
    let mut poly = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let mut next = vec![Rational::zero(); n];
        let shift = Rational::from_integer(BigInt::from(xs[i]));
        for k in 0..n {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * &shift;
        }
        next[0] += &coef[i];
        poly = next;
    }
    if !poly.iter().all(Rational::is_integer) {
        return None;
    }
    Some(IntPoly::new(
        poly.into_iter().map(|c| c.to_integer()).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    // Leibniz expansion; independent of elimination
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod: BigInt = (0..n).map(|i| m[i][p[i]].clone()).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(
            bareiss_determinant(&mat(&[&[2, 1], &[1, 3]])),
            BigInt::from(5)
        );
        assert_eq!(
            bareiss_determinant(&mat(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])),
            BigInt::from(-2)
        );
        assert!(bareiss_determinant(&mat(&[&[1, 2], &[2, 4]])).is_zero());
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let m = mat(&[
            &[3, -1, 0, 2, 5],
            &[0, 0, 4, -2, 1],
            &[7, 1, -3, 0, 0],
            &[1, 1, 1, 1, 1],
            &[-2, 6, 0, 3, -1],
        ]);
        assert_eq!(bareiss_determinant(&m), leibniz(&m));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = IntPoly::from_i64(&[1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48]);
        let xs: Vec<i64> = (0..11).collect();
        let ys: Vec<BigInt> = xs.iter().map(|&x| p.eval_int(&BigInt::from(x))).collect();
        assert_eq!(interpolate_integer(&xs, &ys).unwrap(), p);
    }

    #[test]
    fn pow_and_derivative() {
        let one_minus_x2 = IntPoly::from_i64(&[1, 0, -1]);
        assert_eq!(one_minus_x2.pow(2), IntPoly::from_i64(&[1, 0, -2, 0, 1]));
        assert_eq!(
            one_minus_x2.pow(2).derivative(),
            IntPoly::from_i64(&[0, -4, 0, 4])
        );
    }

    #[test]
    fn pretty_form() {
        let p = IntPoly::from_i64(&[1, 0, 3, -8]);
        assert_eq!(p.pretty(), "-8x^3 + 3x^2 + 1");
    }
}
