//! Generators, mode operators, words on the vacuum and formal sums of words.
//!
//! A [`Word`] lists its [`ModeOp`]s in application order read right to left:
//! `u_{n1} ... u_{nr} 1` is stored as `[u_{n1}, ..., u_{nr}]`, so the last
//! entry acts first. The empty word is the vacuum.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::scalar::Scalar;

/// A C1-generator. `index` is the internal position (generators are kept
/// sorted by weakly decreasing weight); `user_index` is the position in the
/// input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub index: usize,
    pub user_index: usize,
    pub symbol: String,
    pub weight: i64,
}

/// The ordered generator set shared by every computation on a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    gens: Vec<Generator>,
}

impl Signature {
    /// Builds a signature from `(symbol, weight)` pairs in user order.
    /// Generators are re-indexed by a stable sort on decreasing weight.
    pub fn new(user_gens: &[(String, i64)]) -> Self {
        let mut order: Vec<usize> = (0..user_gens.len()).collect();
        order.sort_by_key(|&u| std::cmp::Reverse(user_gens[u].1));
        let gens = order
            .iter()
            .enumerate()
            .map(|(index, &u)| Generator {
                index,
                user_index: u,
                symbol: user_gens[u].0.clone(),
                weight: user_gens[u].1,
            })
            .collect();
        Signature { gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, index: usize) -> &Generator {
        &self.gens[index]
    }

    pub fn weight(&self, index: usize) -> i64 {
        self.gens[index].weight
    }

    pub fn max_weight(&self) -> i64 {
        self.gens.iter().map(|g| g.weight).max().unwrap_or(0)
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.gens[index].symbol
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.symbol == symbol)
    }

    /// Internal index of the generator at position `user` in the input.
    pub fn from_user_index(&self, user: usize) -> Option<usize> {
        self.gens.iter().position(|g| g.user_index == user)
    }

    /// Internal indices listed in user order.
    pub fn user_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.gens.len()).collect();
        idx.sort_by_key(|&i| self.gens[i].user_index);
        idx
    }

    /// `wt u - m - 1`.
    pub fn op_weight(&self, op: ModeOp) -> i64 {
        weight_of_mode(self.weight(op.gen), op.mode)
    }

    /// The mode of `u^i` acting with weight zero, `wt u^i - 1`.
    pub fn zero_mode(&self, gen: usize) -> ModeOp {
        ModeOp::new(gen, self.weight(gen) - 1)
    }

    pub fn word_weight(&self, w: &[ModeOp]) -> i64 {
        w.iter().map(|&op| self.op_weight(op)).sum()
    }

    pub fn formal_length(&self, w: &[ModeOp]) -> i64 {
        w.iter().map(|op| self.weight(op.gen)).sum()
    }

    /// Weight of a state when it is homogeneous; `None` for zero or mixed
    /// states.
    pub fn state_weight(&self, s: &State) -> Option<i64> {
        let mut it = s.words().map(|w| self.word_weight(w.ops()));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    /// Maximal formal length over the support; 0 for the zero state.
    pub fn state_formal_length(&self, s: &State) -> i64 {
        s.words().map(|w| self.formal_length(w.ops())).max().unwrap_or(0)
    }

    /// Splits a state into homogeneous parts, ascending by weight.
    pub fn homogeneous_parts(&self, s: &State) -> Vec<(i64, State)> {
        let mut parts: BTreeMap<i64, State> = BTreeMap::new();
        for (w, c) in s.iter() {
            parts
                .entry(self.word_weight(w.ops()))
                .or_default()
                .add_term(w.clone(), c);
        }
        parts.into_iter().collect()
    }

    fn display_key(&self, w: &Word) -> (i64, i64, usize, Vec<(i64, usize)>) {
        (
            self.word_weight(w.ops()),
            self.formal_length(w.ops()),
            w.len(),
            w.ops().iter().map(|op| (op.mode, op.gen)).collect(),
        )
    }

    /// Terms of `s` in canonical display order: by weight, formal length,
    /// word length, then lexicographically on `(mode, generator)`.
    pub fn canonical_terms<'a>(&self, s: &'a State) -> Vec<(&'a Word, &'a Scalar)> {
        let mut terms: Vec<_> = s.iter().collect();
        terms.sort_by_cached_key(|(w, _)| self.display_key(w));
        terms
    }

    /// Renders a word as `w(-2) w(-1)`; the vacuum renders as `1`.
    pub fn display_word(&self, w: &Word) -> String {
        if w.is_vacuum() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .ops()
            .iter()
            .map(|op| format!("{}({})", self.symbol(op.gen), op.mode))
            .collect();
        parts.join(" ")
    }

    /// Renders a state in the inline syntax accepted by
    /// [`crate::syntax::parse_state`].
    pub fn display_state(&self, s: &State) -> String {
        if s.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (w, c)) in self.canonical_terms(s).into_iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if n == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            if w.is_vacuum() {
                let _ = write!(out, "{mag}");
            } else if mag.is_one() {
                out.push_str(&self.display_word(w));
            } else {
                let _ = write!(out, "{mag} {}", self.display_word(w));
            }
        }
        out
    }
}

/// `wt u - m - 1` for a generator of weight `wt` and mode `m`.
pub fn weight_of_mode(wt: i64, mode: i64) -> i64 {
    wt - mode - 1
}

/// The operator `u^gen_mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeOp {
    pub gen: usize,
    pub mode: i64,
}

impl ModeOp {
    pub fn new(gen: usize, mode: i64) -> Self {
        ModeOp { gen, mode }
    }
}

/// A sequence of mode operators applied to the vacuum (or, inside the Zhu
/// computation, to an abstract top-level vector).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<ModeOp>);

impl Word {
    pub fn vacuum() -> Self {
        Word(Vec::new())
    }

    pub fn new(ops: Vec<ModeOp>) -> Self {
        Word(ops)
    }

    pub fn ops(&self) -> &[ModeOp] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    /// `op` followed by this word, i.e. `op` applied last.
    pub fn prepend(&self, op: ModeOp) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(op);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(prefix: &[ModeOp], rest: &[ModeOp]) -> Word {
        let mut v = Vec::with_capacity(prefix.len() + rest.len());
        v.extend_from_slice(prefix);
        v.extend_from_slice(rest);
        Word(v)
    }

    pub fn into_ops(self) -> Vec<ModeOp> {
        self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, op) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "u{}({})", op.gen, op.mode)?;
        }
        Ok(())
    }
}

impl From<Vec<ModeOp>> for Word {
    fn from(v: Vec<ModeOp>) -> Self {
        Word(v)
    }
}

/// A finite formal sum of words with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct State {
    terms: BTreeMap<Word, Scalar>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::from_word(Word::vacuum())
    }

    pub fn from_word(w: Word) -> Self {
        State::term(w, Scalar::one())
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut s = State::zero();
        s.add_term(w, &c);
        s
    }

    /// The generator state `u^gen_{-1} 1`.
    pub fn generator(gen: usize) -> Self {
        State::from_word(Word::new(vec![ModeOp::new(gen, -1)]))
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

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &State) {
        if c.is_zero() {
            return;
        }
        for (w, d) in other.iter() {
            self.add_term(w.clone(), &(c * d));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> State {
        if c.is_zero() {
            return State::zero();
        }
        State {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect(),
        }
    }

    /// `self - other`.
    pub fn minus(&self, other: &State) -> State {
        combine(self, &Scalar::from_int(-1), other)
    }

    /// `self + other`.
    pub fn plus(&self, other: &State) -> State {
        combine(self, &Scalar::one(), other)
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[{w:?}]")?;
        }
        Ok(())
    }
}

impl FromIterator<(Word, Scalar)> for State {
    fn from_iter<I: IntoIterator<Item = (Word, Scalar)>>(iter: I) -> Self {
        let mut s = State::zero();
        for (w, c) in iter {
            s.add_term(w, &c);
        }
        s
    }
}

/// `a + c * b`, pruning zero coefficients.
pub fn combine(a: &State, c: &Scalar, b: &State) -> State {
    let mut out = a.clone();
    out.add_scaled(c, b);
    out
}

/// Formal length of a word: the sum of its generator weights.
pub fn formal_length(sig: &Signature, w: &Word) -> i64 {
    sig.formal_length(w.ops())
}
