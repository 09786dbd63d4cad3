//! The shift of finite type on oriented edges: blocks, forbidden words,
//! prime cycles, and the Euler product they define.
//!
//! A word over the alphabet is admissible when consecutive symbols compose
//! (`t(e) = i(f)`) and no factor `e e⁻¹` occurs. Prime cycles are the
//! rotation classes of primitive admissible closed words, including the
//! wrap-around step.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::line_graph::{HashimotoMatrix, OrientedEdgeAlphabet};
use crate::series::TruncatedSeries;

/// A finite word over the oriented-edge alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Block {
    pub symbols: Vec<usize>,
}

impl Block {
    pub fn new(symbols: Vec<usize>) -> Self {
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn concat(&self, other: &Block) -> Block {
        let mut s = self.symbols.clone();
        s.extend_from_slice(&other.symbols);
        Block::new(s)
    }

    pub fn power(&self, times: usize) -> Block {
        Block::new(self.symbols.repeat(times))
    }
}

/// The `2m` forbidden two-symbol blocks `e e⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    pub blocks: Vec<[usize; 2]>,
}

impl ForbiddenSet {
    pub fn new(alph: &OrientedEdgeAlphabet) -> Self {
        Self {
            blocks: (0..alph.len()).map(|e| [e, alph.inverse(e)]).collect(),
        }
    }

    pub fn contains(&self, pair: [usize; 2]) -> bool {
        self.blocks.contains(&pair)
    }
}

/// True iff consecutive symbols compose and no forbidden factor occurs.
pub fn is_admissible(block: &Block, alph: &OrientedEdgeAlphabet) -> Result<bool> {
    for &e in &block.symbols {
        alph.check(e)?;
    }
    let forbidden = ForbiddenSet::new(alph);
    Ok(block
        .symbols
        .windows(2)
        .all(|w| alph.terminal(w[0]) == alph.initial(w[1]) && !forbidden.contains([w[0], w[1]])))
}

/// A prime cycle in canonical form: the lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimeCycle {
    pub symbols: Vec<usize>,
}

impl PrimeCycle {
    pub fn length(&self) -> usize {
        self.symbols.len()
    }

    pub fn as_block(&self) -> Block {
        Block::new(self.symbols.clone())
    }
}

/// Least rotation of a word (naive, words here are short).
pub fn canonical_rotation(word: &[usize]) -> Vec<usize> {
    let n = word.len();
    (0..n)
        .map(|r| {
            let mut w = word[r..].to_vec();
            w.extend_from_slice(&word[..r]);
            w
        })
        .min()
        .unwrap_or_default()
}

/// Primitive and strictly smaller than each of its proper rotations.
fn is_lyndon(word: &[usize]) -> bool {
    let n = word.len();
    (1..n).all(|r| {
        let rotated = word[r..].iter().chain(&word[..r]);
        word.iter().cmp(rotated) == std::cmp::Ordering::Less
    })
}

/// Closed admissible word including the wrap step.
pub fn is_closed_cycle(word: &[usize], alph: &OrientedEdgeAlphabet) -> bool {
    match (word.first(), word.last()) {
        (Some(&first), Some(&last)) => {
            word.windows(2).all(|w| alph.follows(w[0], w[1])) && alph.follows(last, first)
        }
        _ => false,
    }
}

/// Canonicalize a closed word into a prime, or `None` if it is not a
/// primitive non-backtracking cycle.
pub fn to_prime(word: &[usize], alph: &OrientedEdgeAlphabet) -> Option<PrimeCycle> {
    if !is_closed_cycle(word, alph) {
        return None;
    }
    let canon = canonical_rotation(word);
    is_lyndon(&canon).then_some(PrimeCycle { symbols: canon })
}

pub const PRIME_GUARD: f64 = 5.0e7;

/// All prime cycles of length `<= max_len`, each once, sorted by
/// `(length, symbols)`.
///
/// Depth-first search over the oriented line graph starting from each
/// symbol `s`, restricted to symbols `>= s`; a closed word is kept only if
/// it is a Lyndon word, which selects exactly one representative per class.
pub fn enumerate_primes(g: &Graph, max_len: usize) -> Result<Vec<PrimeCycle>> {
    let alph = OrientedEdgeAlphabet::new(g);
    let t = HashimotoMatrix::new(&alph);
    enumerate_primes_with(&alph, &t, max_len)
}

pub fn enumerate_primes_with(
    alph: &OrientedEdgeAlphabet,
    t: &HashimotoMatrix,
    max_len: usize,
) -> Result<Vec<PrimeCycle>> {
    let size = t.size();
    let branching = (0..size).map(|e| t.row_sum(e)).max().unwrap_or(0) as f64;
    let estimate = size as f64 * branching.powi(max_len.saturating_sub(1) as i32);
    if estimate > PRIME_GUARD {
        return Err(Error::GuardExceeded {
            estimate,
            limit: PRIME_GUARD,
        });
    }

    struct Search<'a> {
        t: &'a HashimotoMatrix,
        max_len: usize,
        path: Vec<usize>,
        found: Vec<PrimeCycle>,
    }

    impl Search<'_> {
        fn walk(&mut self) {
            let start = self.path[0];
            let last = *self.path.last().expect("nonempty path");
            if self.path.len() >= 2 && self.t.entry(last, start) == 1 && is_lyndon(&self.path) {
                self.found.push(PrimeCycle {
                    symbols: self.path.clone(),
                });
            }
            if self.path.len() == self.max_len {
                return;
            }
            for &f in self.t.successors(last) {
                // a Lyndon word starts with its least symbol
                if f < start {
                    continue;
                }
                self.path.push(f);
                self.walk();
                self.path.pop();
            }
        }
    }

    let mut search = Search {
        t,
        max_len,
        path: Vec::with_capacity(max_len),
        found: Vec::new(),
    };
    for s in 0..alph.len() {
        search.path.clear();
        search.path.push(s);
        search.walk();
    }
    let mut primes = search.found;
    primes.sort_by(|a, b| {
        a.length()
            .cmp(&b.length())
            .then_with(|| a.symbols.cmp(&b.symbols))
    });
    Ok(primes)
}

/// `Π (1 - x^γ(P))⁻¹` over the given primes, truncated at `order`.
///
/// `complete_to` is the largest length for which `primes` is known to be
/// complete; asking for more is an error.
pub fn euler_product_series(
    primes: &[PrimeCycle],
    complete_to: usize,
    order: usize,
) -> Result<TruncatedSeries> {
    if order > complete_to {
        return Err(Error::OrderTooLarge {
            requested: order,
            available: complete_to,
        });
    }
    let mut product = vec![BigInt::zero(); order + 1];
    product[0] = BigInt::from(1);
    for p in primes {
        let len = p.length();
        if len == 0 || len > order {
            continue;
        }
        // multiply by 1/(1 - x^len): running sum with stride len
        for k in len..=order {
            let prev = product[k - len].clone();
            product[k] += prev;
        }
    }
    Ok(TruncatedSeries::new(
        product.into_iter().map(BigRational::from_integer).collect(),
    ))
}

/// Number of primes of each length `1..=max_len`, derived from traces by
/// divisor inversion: `ℓ·π(ℓ) = Σ_{d | ℓ} μ(d) tr(T^{ℓ/d})`.
///
/// This relation is an internal oracle for [`enumerate_primes`]; it plays
/// no role in the other zeta routes.
pub fn prime_counts_from_traces(g: &Graph, max_len: usize) -> BTreeMap<usize, BigInt> {
    let alph = OrientedEdgeAlphabet::new(g);
    let t = HashimotoMatrix::new(&alph);
    prime_counts_from_trace_list(&t.trace_powers(max_len))
}

pub fn prime_counts_from_trace_list(traces: &[BigInt]) -> BTreeMap<usize, BigInt> {
    let mut counts = BTreeMap::new();
    for len in 1..=traces.len() {
        let mut acc = BigInt::zero();
        for d in 1..=len {
            if len % d != 0 {
                continue;
            }
            let mu = mobius(d);
            if mu != 0 {
                acc += BigInt::from(mu) * &traces[len / d - 1];
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(len));
        debug_assert!(r.is_zero(), "divisor inversion must be exact");
        counts.insert(len, q);
    }
    counts
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Count of primes per length from an enumeration.
pub fn count_by_length(primes: &[PrimeCycle], max_len: usize) -> BTreeMap<usize, BigInt> {
    let mut counts: BTreeMap<usize, BigInt> = (1..=max_len).map(|l| (l, BigInt::zero())).collect();
    for p in primes {
        if let Some(c) = counts.get_mut(&p.length()) {
            *c += 1;
        }
    }
    counts
}

pub fn counts_to_u64(counts: &BTreeMap<usize, BigInt>) -> BTreeMap<usize, u64> {
    counts
        .iter()
        .map(|(k, v)| (*k, v.to_u64().unwrap_or(u64::MAX)))
        .collect()
}
