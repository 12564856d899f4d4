//! Noncommutative polynomials in the Zhu generators `x_i = o(u^i)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::terms::Signature;

/// A monomial `x_{i1} x_{i2} ... x_{ir}`; the empty monomial is 1.
pub type Monomial = Vec<usize>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

/// Sort key of a monomial: weighted degree, then length, then the word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonoKey {
    pub wdeg: i64,
    pub len: usize,
    pub word: Monomial,
}

impl MonoKey {
    pub fn new(weights: &[i64], word: Monomial) -> Self {
        MonoKey {
            wdeg: word.iter().map(|&i| weights[i]).sum(),
            len: word.len(),
            word,
        }
    }
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        NCPoly::term(Vec::new(), c)
    }

    pub fn var(i: usize) -> Self {
        NCPoly::term(vec![i], Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(m, &c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[usize]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &NCPoly) {
        for (m, d) in other.iter() {
            self.add_term(m.clone(), &(c * d));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(c, self);
        out
    }

    /// Maximal word length; 0 for constants and for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Maximal weighted degree, `sum wt u^i` over a monomial.
    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&i| weights[i]).sum())
            .max()
            .unwrap_or(0)
    }

    /// The coefficient vector keyed by [`MonoKey`].
    pub fn to_keyed(&self, weights: &[i64]) -> BTreeMap<MonoKey, Scalar> {
        self.terms
            .iter()
            .map(|(m, c)| (MonoKey::new(weights, m.clone()), c.clone()))
            .collect()
    }

    pub fn from_keyed(v: &BTreeMap<MonoKey, Scalar>) -> NCPoly {
        let mut p = NCPoly::zero();
        for (k, c) in v {
            p.add_term(k.word.clone(), c);
        }
        p
    }

    /// Leading coefficient under the [`MonoKey`] order.
    pub fn leading(&self, weights: &[i64]) -> Option<(MonoKey, Scalar)> {
        self.to_keyed(weights).into_iter().next_back()
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self, weights: &[i64]) -> NCPoly {
        match self.leading(weights) {
            Some((_, c)) => self.scaled(&c.recip()),
            None => NCPoly::zero(),
        }
    }

    /// Renders with `o(sym)` factors and `^` for repeated letters, highest
    /// terms first.
    pub fn display(&self, sig: &Signature) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let weights: Vec<i64> = (0..sig.len()).map(|i| sig.weight(i)).collect();
        let mut out = String::new();
        for (n, (k, c)) in self.to_keyed(&weights).iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if k.word.is_empty() {
                let _ = write!(out, "{mag}");
                continue;
            }
            if !mag.is_one() {
                let _ = write!(out, "{mag} ");
            }
            out.push_str(&display_monomial(sig, &k.word));
        }
        out
    }

    pub fn to_doc(&self, sig: &Signature) -> Vec<PolyTermDoc> {
        let weights: Vec<i64> = (0..sig.len()).map(|i| sig.weight(i)).collect();
        self.to_keyed(&weights)
            .into_iter()
            .rev()
            .map(|(k, c)| PolyTermDoc {
                coeff: c,
                monomial: k.word.iter().map(|&i| sig.symbol(i).to_string()).collect(),
            })
            .collect()
    }

    pub fn from_doc(sig: &Signature, doc: &[PolyTermDoc]) -> Option<NCPoly> {
        let mut p = NCPoly::zero();
        for t in doc {
            let m = t
                .monomial
                .iter()
                .map(|s| sig.index_of(s))
                .collect::<Option<Vec<_>>>()?;
            p.add_term(m, &t.coeff);
        }
        Some(p)
    }
}

pub fn display_monomial(sig: &Signature, m: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut p = 0;
    while p < m.len() {
        let mut q = p;
        while q < m.len() && m[q] == m[p] {
            q += 1;
        }
        let base = format!("o({})", sig.symbol(m[p]));
        parts.push(if q - p == 1 { base } else { format!("{base}^{}", q - p) });
        p = q;
    }
    parts.join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermDoc {
    pub coeff: Scalar,
    pub monomial: Vec<String>,
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(), rhs);
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(&Scalar::from_int(-1), rhs);
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scaled(&Scalar::from_int(-1))
    }
}

/// Free (unstraightened) product.
impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, c) in self.iter() {
            for (b, d) in rhs.iter() {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, &(c * d));
            }
        }
        out
    }
}

impl FromIterator<(Monomial, Scalar)> for NCPoly {
    fn from_iter<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut p = NCPoly::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let sig = Signature::new(&[("w".into(), 2), ("v".into(), 3)]);
        let v = sig.index_of("v").unwrap();
        let w = sig.index_of("w").unwrap();
        let xv = NCPoly::var(v);
        let xw = NCPoly::var(w);
        let p = &(&xv * &xv).scaled(&Scalar::new(3, 2)) - &(&xw * &xw);
        assert_eq!(p.display(&sig), "3/2 o(v)^2 - o(w)^2");
        assert_eq!(p.degree(), 2);
        assert_eq!(p.weighted_degree(&[3, 2]), 6);
        assert!((&p - &p).is_zero());
        let back = NCPoly::from_doc(&sig, &p.to_doc(&sig)).unwrap();
        assert_eq!(back, p);
        assert_eq!(NCPoly::one().display(&sig), "1");
    }
}
