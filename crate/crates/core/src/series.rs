//! Exact truncated formal power series over the rationals.
//!
//! A [`TruncatedSeries`] of order `N` knows the coefficients of `t^0..=t^N`
//! and nothing beyond. Binary operations truncate to the smaller order of
//! their operands, so an answer is never reported to more terms than its
//! inputs justify.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Nearest rational with denominator `10^digits`.
pub fn decimal_rational(x: f64, digits: u32) -> Rational {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = rational_from_f64(x) * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn bigint_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

pub fn rational_json(q: &Rational) -> Value {
    json!([bigint_json(q.numer()), bigint_json(q.denom())])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coefficients: Vec<Rational>,
}

impl TruncatedSeries {
    /// Series from explicit coefficients; the order is `len - 1`.
    pub fn new(coefficients: Vec<Rational>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "series needs at least one coefficient"
        );
        Self { coefficients }
    }

    pub fn from_integers(coefficients: &[i64], order: usize) -> Self {
        let mut c: Vec<Rational> = coefficients.iter().map(|&v| int(v)).collect();
        c.resize(order + 1, Rational::zero());
        c.truncate(order + 1);
        Self::new(c)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rational::zero(); order + 1])
    }

    pub fn constant(value: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `t`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coefficients[1] = Rational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Coefficient of `t^k`, or `None` beyond the known order.
    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coefficients.get(k)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self::new(self.coefficients[..=keep].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            (0..=n)
                .map(|k| &self.coefficients[k] + &other.coefficients[k])
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            (0..=n)
                .map(|k| &self.coefficients[k] - &other.coefficients[k])
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// `1 / self`; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coefficients[0];
        if c0.is_zero() {
            return Err(Error::Internal(
                "reciprocal of series with zero constant term".into(),
            ));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coefficients[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(out))
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            (1..=self.order())
                .map(|k| &self.coefficients[k] * int(k as i64))
                .collect(),
        )
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coefficients[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        // n e_n = sum_{k=1}^{n} k u_k e_{n-k}
        let mut e: Vec<Rational> = Vec::with_capacity(n + 1);
        e.push(Rational::one());
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                let u = &self.coefficients[k];
                if !u.is_zero() {
                    acc += u * int(k as i64) * &e[m - k];
                }
            }
            e.push(acc / int(m as i64));
        }
        Ok(Self::new(e))
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coefficients[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coefficients[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coefficients[0] += &self.coefficients[k];
        }
        Ok(acc)
    }

    /// Compositional inverse `F` with `F(self(t)) = t` through the order.
    pub fn revert(&self) -> Result<Self> {
        if !self.coefficients[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let g1 = self.coefficients[1].clone();
        if g1.is_zero() {
            return Err(Error::ZeroLinearCoefficient);
        }
        // powers[k] = self^k truncated to order n
        let mut powers = vec![Self::one(n)];
        for k in 1..=n {
            let next = powers[k - 1].mul(self);
            powers.push(next);
        }
        let mut f = vec![Rational::zero(); n + 1];
        f[1] = g1.recip();
        for m in 2..=n {
            // [t^m] sum_{k<m} f_k g^k + f_m g1^m = 0
            let mut acc = Rational::zero();
            for (k, fk) in f.iter().enumerate().take(m).skip(1) {
                if !fk.is_zero() {
                    acc += fk * &powers[k].coefficients[m];
                }
            }
            f[m] = -acc / &powers[m].coefficients[m];
        }
        Ok(Self::new(f))
    }

    /// True iff every known coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coefficients.iter().map(|c| c.to_integer()).collect())
    }

    /// Float evaluation of the truncated polynomial.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + rational_to_f64(c))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coefficients": self.coefficients.iter().map(rational_json).collect::<Vec<_>>(),
        })
    }
}

/// Series in several variables truncated at a total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    vars: usize,
    order: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl MultiSeries {
    pub fn zero(vars: usize, order: usize) -> Self {
        Self {
            vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, order: usize, value: Rational) -> Self {
        let mut s = Self::zero(vars, order);
        s.insert(vec![0; vars], value);
        s
    }

    pub fn variable(vars: usize, order: usize, which: usize) -> Self {
        let mut exps = vec![0; vars];
        exps[which] = 1;
        let mut s = Self::zero(vars, order);
        if order >= 1 {
            s.insert(exps, Rational::one());
        }
        s
    }

    /// Embed a univariate series as a function of variable `which`.
    pub fn from_univariate(f: &TruncatedSeries, vars: usize, which: usize) -> Self {
        let mut s = Self::zero(vars, f.order());
        for (k, c) in f.coefficients().iter().enumerate() {
            let mut exps = vec![0; vars];
            exps[which] = k;
            s.insert(exps, c.clone());
        }
        s
    }

    fn insert(&mut self, exps: Vec<usize>, value: Rational) {
        if value.is_zero() || exps.iter().sum::<usize>() > self.order {
            return;
        }
        let vanished = {
            let entry = self
                .terms
                .entry(exps.clone())
                .or_insert_with(Rational::zero);
            *entry += value;
            entry.is_zero()
        };
        if vanished {
            self.terms.remove(&exps);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, exps: &[usize]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars, self.order.min(other.order));
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars, self.order.min(other.order));
        for (ea, ca) in &self.terms {
            let da: usize = ea.iter().sum();
            for (eb, cb) in &other.terms {
                if da + eb.iter().sum::<usize>() > out.order {
                    continue;
                }
                let e: Vec<usize> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn has_zero_constant(&self) -> bool {
        self.coeff(&vec![0; self.vars]).is_zero()
    }

    /// `f(self)` for a univariate `f`; `self` must vanish at the origin.
    pub fn substitute_into(&self, f: &TruncatedSeries) -> Result<Self> {
        if !self.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order.min(f.order());
        let mut acc = Self::constant(self.vars, order, f.coefficients()[order].clone());
        for k in (0..order).rev() {
            acc = acc.mul(self);
            acc.insert(vec![0; self.vars], f.coefficients()[k].clone());
        }
        Ok(acc)
    }

    /// Set every occurrence of variable `which` to zero.
    pub fn set_zero(&self, which: usize) -> Self {
        let mut out = Self::zero(self.vars, self.order);
        for (e, c) in &self.terms {
            if e[which] == 0 {
                out.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::zero(self.vars, order.min(self.order));
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

/// A two-variable truncated series, `Φ(s₁, s₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateTruncatedSeries {
    inner: MultiSeries,
}

impl BivariateTruncatedSeries {
    pub fn from_multi(inner: MultiSeries) -> Self {
        assert_eq!(inner.vars(), 2);
        Self { inner }
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.inner.coeff(&[i, j])
    }

    pub fn as_multi(&self) -> &MultiSeries {
        &self.inner
    }

    /// `Φ(x, y)` where `x` and `y` are series in any number of variables.
    pub fn substitute(&self, x: &MultiSeries, y: &MultiSeries) -> Result<MultiSeries> {
        if !x.has_zero_constant() || !y.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(x.order()).min(y.order());
        let vars = x.vars();
        let mut xp = vec![MultiSeries::constant(vars, order, Rational::one())];
        let mut yp = vec![MultiSeries::constant(vars, order, Rational::one())];
        for k in 1..=order {
            xp.push(xp[k - 1].mul(x));
            yp.push(yp[k - 1].mul(y));
        }
        let mut out = MultiSeries::zero(vars, order);
        for (e, c) in self.inner.terms() {
            let (i, j) = (e[0], e[1]);
            let mut term = xp[i].mul(&yp[j]);
            term = term.mul(&MultiSeries::constant(vars, order, c.clone()));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `(i, j) -> [num, den]` triples, sorted by exponent.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .inner
            .terms()
            .map(|(e, c)| json!([e[0], e[1], rational_json(c)]))
            .collect();
        json!({"order": self.order(), "terms": terms})
    }
}

/// Smallest integer `K >= 1` with `bound(K) < eps`, used for tail cutoffs.
pub(crate) fn first_below<F: Fn(usize) -> f64>(bound: F, eps: f64, cap: usize) -> usize {
    (1..=cap).find(|&k| bound(k) < eps).unwrap_or(cap)
}
