//! The straightened algebra `C<x_1..x_l> / ([x_i, x_j] - C_ij)` and bounded
//! membership in two-sided ideals of it.
//!
//! Standard monomials have weakly increasing generator indices. The rule
//! `x_j x_i -> x_i x_j - C_ij` (for `i < j`) lowers the weighted degree of
//! the correction, so straightening terminates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::Echelon;
use crate::scalar::Scalar;

use super::ncpoly::{MonoKey, Monomial, NCPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZhuAlgebra {
    weights: Vec<i64>,
    /// `[x_i, x_j]` for `i < j`.
    brackets: BTreeMap<(usize, usize), NCPoly>,
}

fn inversions(m: &[usize]) -> usize {
    let mut n = 0;
    for p in 0..m.len() {
        for q in p + 1..m.len() {
            if m[p] > m[q] {
                n += 1;
            }
        }
    }
    n
}

impl ZhuAlgebra {
    pub fn new(weights: Vec<i64>, brackets: BTreeMap<(usize, usize), NCPoly>) -> Self {
        ZhuAlgebra { weights, brackets }
    }

    /// The commutative polynomial algebra on generators of these weights.
    pub fn commutative(weights: Vec<i64>) -> Self {
        ZhuAlgebra::new(weights, BTreeMap::new())
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `[x_i, x_j]` for any pair.
    pub fn bracket(&self, i: usize, j: usize) -> NCPoly {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => -&self.bracket(j, i),
            Equal => NCPoly::zero(),
        }
    }

    pub fn wdeg(&self, m: &[usize]) -> i64 {
        m.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn is_standard(m: &[usize]) -> bool {
        m.windows(2).all(|p| p[0] <= p[1])
    }

    /// Rewrites every monomial into standard form.
    pub fn straighten(&self, p: &NCPoly) -> NCPoly {
        type Key = (i64, usize, Monomial);
        let mut pending: BTreeMap<Key, Scalar> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<Key, Scalar>, m: Monomial, c: Scalar| {
            if c.is_zero() {
                return;
            }
            let key = (self.wdeg(&m), inversions(&m), m);
            let e = pending.entry(key.clone()).or_insert_with(Scalar::zero);
            *e += &c;
            if e.is_zero() {
                pending.remove(&key);
            }
        };
        for (m, c) in p.iter() {
            push(&mut pending, m.clone(), c.clone());
        }
        let mut out = NCPoly::zero();
        while let Some(((_, _, m), c)) = pending.pop_last() {
            let Some(pos) = (0..m.len().saturating_sub(1)).find(|&q| m[q] > m[q + 1]) else {
                out.add_term(m, &c);
                continue;
            };
            let (j, i) = (m[pos], m[pos + 1]);
            let mut swapped = m.clone();
            swapped.swap(pos, pos + 1);
            push(&mut pending, swapped, c.clone());
            for (t, d) in self.bracket(i, j).iter() {
                let mut w = m[..pos].to_vec();
                w.extend_from_slice(t);
                w.extend_from_slice(&m[pos + 2..]);
                push(&mut pending, w, -(&c * d));
            }
        }
        out
    }

    /// Product followed by straightening.
    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        self.straighten(&(a * b))
    }

    /// Differences between the two ways of straightening `x_k x_j x_i` for
    /// `i < j < k`. They vanish when the brackets satisfy the Jacobi
    /// identity; otherwise they are relations of the quotient.
    pub fn overlap_defects(&self) -> Vec<((usize, usize, usize), NCPoly)> {
        let l = self.weights.len();
        let mut out = Vec::new();
        for i in 0..l {
            for j in i + 1..l {
                for k in j + 1..l {
                    let (xi, xk) = (NCPoly::var(i), NCPoly::var(k));
                    let kj = self.straighten(&(&xk * &NCPoly::var(j)));
                    let ji = self.straighten(&(&NCPoly::var(j) * &xi));
                    let left = self.mul(&kj, &xi);
                    let right = self.mul(&xk, &ji);
                    let d = &left - &right;
                    if !d.is_zero() {
                        out.push(((i, j, k), d));
                    }
                }
            }
        }
        out
    }

    /// Standard monomials of the given weighted degree, in [`MonoKey`] order.
    pub fn standard_monomials(&self, wdeg: i64) -> Vec<Monomial> {
        fn go(w: &[i64], from: usize, left: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in from..w.len() {
                if w[i] <= left {
                    cur.push(i);
                    go(w, i, left - w[i], cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&self.weights, 0, wdeg, &mut Vec::new(), &mut out);
        out.sort_by_cached_key(|m| MonoKey::new(&self.weights, m.clone()));
        out
    }
}

/// The part of a two-sided ideal spanned by products of its generators of
/// weighted degree at most `bound`.
#[derive(Clone, Debug)]
pub struct IdealSpan {
    bound: i64,
    echelon: Echelon<MonoKey>,
}

impl IdealSpan {
    pub fn build(alg: &ZhuAlgebra, relations: &[NCPoly], bound: i64) -> IdealSpan {
        let weights = alg.weights();
        let mut echelon = Echelon::new();
        let mut queue = std::collections::VecDeque::new();
        let offer = |p: NCPoly, echelon: &mut Echelon<MonoKey>, queue: &mut std::collections::VecDeque<NCPoly>| {
            if p.is_zero() || p.weighted_degree(weights) > bound {
                return;
            }
            if echelon.insert(&p.to_keyed(weights)).is_some() {
                queue.push_back(p);
            }
        };
        for r in relations {
            offer(alg.straighten(r), &mut echelon, &mut queue);
        }
        while let Some(p) = queue.pop_front() {
            for i in 0..alg.len() {
                let x = NCPoly::var(i);
                offer(alg.mul(&x, &p), &mut echelon, &mut queue);
                offer(alg.mul(&p, &x), &mut echelon, &mut queue);
            }
        }
        IdealSpan { bound, echelon }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn dimension(&self) -> usize {
        self.echelon.rank()
    }

    /// Remainder of a straightened polynomial modulo the span.
    pub fn remainder(&self, weights: &[i64], q: &NCPoly) -> NCPoly {
        NCPoly::from_keyed(&self.echelon.reduce(&q.to_keyed(weights)))
    }

    pub fn is_pivot(&self, k: &MonoKey) -> bool {
        self.echelon.is_pivot(k)
    }

    fn pivots_up_to(&self, wdeg: i64) -> usize {
        self.echelon.pivots().filter(|k| k.wdeg <= wdeg).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Zero,
    Nonzero,
    Inconclusive,
}

/// Bounded membership of `q` in the ideal generated by `relations`.
///
/// `zero` is certain. `nonzero` means the remainder is nonzero and raising
/// the bound by one added nothing at or below the degree of `q`; anything
/// else is `inconclusive`.
pub fn reduces_to_zero(alg: &ZhuAlgebra, q: &NCPoly, relations: &[NCPoly], bound: i64) -> Membership {
    let mut m = IdealMembership::new(alg.clone(), relations.to_vec(), bound);
    m.test(q)
}

/// Membership tests against a fixed relation set, caching spans.
#[derive(Clone, Debug)]
pub struct IdealMembership {
    alg: ZhuAlgebra,
    relations: Vec<NCPoly>,
    bound: i64,
    spans: BTreeMap<i64, IdealSpan>,
}

impl IdealMembership {
    pub fn new(alg: ZhuAlgebra, relations: Vec<NCPoly>, bound: i64) -> Self {
        IdealMembership {
            alg,
            relations,
            bound,
            spans: BTreeMap::new(),
        }
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.relations
    }

    pub fn push_relation(&mut self, r: NCPoly) {
        self.relations.push(r);
        self.spans.clear();
    }

    fn span(&mut self, bound: i64) -> &IdealSpan {
        let (alg, rels) = (&self.alg, &self.relations);
        self.spans
            .entry(bound)
            .or_insert_with(|| IdealSpan::build(alg, rels, bound))
    }

    /// Remainder of `q` at the working bound (raised to the degree of `q`).
    pub fn remainder(&mut self, q: &NCPoly) -> NCPoly {
        let q = self.alg.straighten(q);
        let weights = self.alg.weights().to_vec();
        let e = self.bound.max(q.weighted_degree(&weights));
        self.span(e).remainder(&weights, &q)
    }

    pub fn test(&mut self, q: &NCPoly) -> Membership {
        let q = self.alg.straighten(q);
        if q.is_zero() {
            return Membership::Zero;
        }
        let weights = self.alg.weights().to_vec();
        let wq = q.weighted_degree(&weights);
        let e = self.bound.max(wq);
        if self.span(e).remainder(&weights, &q).is_zero() {
            return Membership::Zero;
        }
        if wq < e {
            let upper = self.span(e).pivots_up_to(wq);
            let lower = self.span(e - 1).pivots_up_to(wq);
            if upper == lower {
                return Membership::Nonzero;
            }
        }
        Membership::Inconclusive
    }
}
