//! The reduction system on words: the total order on mode operators, the
//! rewriting engine that brings any word to PBW normal form, and the Jacobi
//! defects (C1-singular elements) that measure failure of confluence.
//!
//! A reducible adjacent pair `u^i_m u^j_n` is rewritten to
//! `u^j_n u^i_m + sum_k C(m,k) R(i,j,k)_{m+n-k}`, where the element mode is
//! expanded with the iterate formula against the suffix of the word. Words
//! that vanish modulo the truncation submodule are dropped as soon as they
//! appear:
//!
//! * any suffix of negative weight kills the word;
//! * on the vacuum, a rightmost operator with nonnegative mode kills it.
//!
//! On the abstract top-level vector used for Zhu images only the first rule
//! applies.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::linalg::Echelon;
use crate::parallel::{map_ordered, Parallelism};
use crate::presentation::{state_to_doc, FullTable, TermDoc};
use crate::scalar::Scalar;
use crate::terms::{ModeOp, Signature, State, Word};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionStrategy {
    /// Rewrite the leftmost reducible pair first.
    #[default]
    #[serde(alias = "leftmost")]
    LeftmostFirst,
    /// Rewrite the rightmost reducible pair first.
    #[serde(alias = "rightmost")]
    RightmostFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrder {
    Ordered,
    Reducible,
}

/// What the operators of a word are applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ground {
    /// The vacuum of the vertex algebra.
    Vacuum,
    /// A weight-zero generating vector of the induced module; nonnegative
    /// modes of weight zero act on it freely.
    Top,
}

/// Rank of a mode operator in the total order. A pair `(a, b)` is reducible
/// exactly when `rank(a) < rank(b)`; irreducible words are weakly decreasing.
fn rank(sig: &Signature, op: ModeOp) -> (u8, i64, i64) {
    if op.mode < 0 {
        (1, -op.mode, -(op.gen as i64))
    } else {
        (0, sig.op_weight(op), -(op.gen as i64))
    }
}

/// Classifies the adjacent pair `a b` (read left to right).
pub fn mode_order(sig: &Signature, a: ModeOp, b: ModeOp) -> PairOrder {
    if rank(sig, a) < rank(sig, b) {
        PairOrder::Reducible
    } else {
        PairOrder::Ordered
    }
}

/// Number of reducible (not necessarily adjacent) pairs in a word.
pub fn misorderings(sig: &Signature, ops: &[ModeOp]) -> usize {
    let ranks: Vec<_> = ops.iter().map(|&op| rank(sig, op)).collect();
    let mut n = 0;
    for p in 0..ranks.len() {
        for q in p + 1..ranks.len() {
            if ranks[p] < ranks[q] {
                n += 1;
            }
        }
    }
    n
}

/// True when the word is zero modulo the truncation submodule.
pub fn vanishes(sig: &Signature, ops: &[ModeOp], ground: Ground) -> bool {
    if ground == Ground::Vacuum {
        if let Some(last) = ops.last() {
            if last.mode >= 0 {
                return true;
            }
        }
    }
    let mut wt = 0;
    for &op in ops.iter().rev() {
        wt += sig.op_weight(op);
        if wt < 0 {
            return true;
        }
    }
    false
}

/// Whether a word on the vacuum is a PBW word: all modes negative, modes
/// weakly increasing, ties broken by weakly increasing generator index.
pub fn is_pbw_word(sig: &Signature, w: &Word) -> bool {
    let ops = w.ops();
    ops.iter().all(|op| op.mode < 0)
        && ops
            .windows(2)
            .all(|p| mode_order(sig, p[0], p[1]) == PairOrder::Ordered)
}

/// Priority key of a pending word. Every rewrite produces strictly smaller
/// keys: swaps keep the formal length and remove one misordering, commutator
/// terms lower the formal length.
type Key = (i64, usize, Word);

/// The rewriting engine for one presentation.
///
/// Caches single-word normal forms; the cache is shared safely between
/// threads.
pub struct Engine {
    sig: Arc<Signature>,
    table: Arc<FullTable>,
    strategy: ReductionStrategy,
    vac_cache: DashMap<Word, State>,
    top_cache: DashMap<Word, State>,
}

impl Engine {
    pub fn new(sig: Arc<Signature>, table: Arc<FullTable>, strategy: ReductionStrategy) -> Self {
        Engine {
            sig,
            table,
            strategy,
            vac_cache: DashMap::new(),
            top_cache: DashMap::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> Arc<Signature> {
        self.sig.clone()
    }

    pub fn table(&self) -> &FullTable {
        &self.table
    }

    pub fn table_arc(&self) -> Arc<FullTable> {
        self.table.clone()
    }

    pub fn strategy(&self) -> ReductionStrategy {
        self.strategy
    }

    /// A fresh engine on the same presentation with another strategy.
    pub fn with_strategy(&self, strategy: ReductionStrategy) -> Engine {
        Engine::new(self.sig.clone(), self.table.clone(), strategy)
    }

    fn cache(&self, ground: Ground) -> &DashMap<Word, State> {
        match ground {
            Ground::Vacuum => &self.vac_cache,
            Ground::Top => &self.top_cache,
        }
    }

    fn key(&self, w: Word) -> Key {
        (
            self.sig.formal_length(w.ops()),
            misorderings(&self.sig, w.ops()),
            w,
        )
    }

    /// Position of the pair the strategy rewrites next, if any.
    pub fn reducible_position(&self, ops: &[ModeOp]) -> Option<usize> {
        let reducible =
            |p: usize| mode_order(&self.sig, ops[p], ops[p + 1]) == PairOrder::Reducible;
        let n = ops.len();
        if n < 2 {
            return None;
        }
        match self.strategy {
            ReductionStrategy::LeftmostFirst => (0..n - 1).find(|&p| reducible(p)),
            ReductionStrategy::RightmostFirst => (0..n - 1).rev().find(|&p| reducible(p)),
        }
    }

    /// One rewriting step on `w`, or `None` when `w` is irreducible.
    /// Returned words may vanish; callers filter them.
    pub fn rewrite_once(&self, w: &Word, ground: Ground) -> Option<Vec<(Word, Scalar)>> {
        let ops = w.ops();
        let p = self.reducible_position(ops)?;
        let (a, b) = (ops[p], ops[p + 1]);
        let mut out = Vec::new();
        let mut swapped = ops.to_vec();
        swapped.swap(p, p + 1);
        out.push((Word::new(swapped), Scalar::one()));
        let suffix = &ops[p + 2..];
        let kmax = self.sig.weight(a.gen) + self.sig.weight(b.gen) - 1;
        for k in 0..=kmax {
            let c = Scalar::binomial(a.mode, k);
            if c.is_zero() {
                continue;
            }
            let Some(r) = self.table.get(a.gen, b.gen, k) else {
                continue;
            };
            let mut prefix = ops[..p].to_vec();
            self.expand_element_into(r, a.mode + b.mode - k, suffix, ground, &c, &mut prefix, &mut |word, coef| {
                out.push((word, coef))
            });
        }
        Some(out)
    }

    /// Reduces a formal sum of arbitrary words to irreducible words.
    pub fn reduce_sum<I>(&self, words: I, ground: Ground) -> State
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut pending: BTreeMap<Key, Scalar> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<Key, Scalar>, w: Word, c: Scalar| {
            if c.is_zero() || vanishes(&self.sig, w.ops(), ground) {
                return;
            }
            let key = self.key(w);
            match pending.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += &c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        };
        for (w, c) in words {
            push(&mut pending, w, c);
        }
        let cache = self.cache(ground);
        let mut out = State::zero();
        while let Some(((_, _, w), c)) = pending.pop_last() {
            if let Some(hit) = cache.get(&w) {
                out.add_scaled(&c, &hit);
                continue;
            }
            match self.rewrite_once(&w, ground) {
                None => out.add_term(w, &c),
                Some(next) => {
                    for (nw, nc) in next {
                        push(&mut pending, nw, &c * &nc);
                    }
                }
            }
        }
        out
    }

    /// Normal form of a single word, memoized.
    pub fn reduce_word(&self, w: &Word, ground: Ground) -> State {
        let cache = self.cache(ground);
        if let Some(hit) = cache.get(w) {
            return hit.clone();
        }
        let nf = self.reduce_sum([(w.clone(), Scalar::one())], ground);
        cache.insert(w.clone(), nf.clone());
        nf
    }

    /// Normal form in the vertex algebra.
    pub fn normal_form(&self, s: &State) -> State {
        self.reduce_in(s, Ground::Vacuum)
    }

    pub fn reduce_in(&self, s: &State, ground: Ground) -> State {
        let mut out = State::zero();
        for (w, c) in s.iter() {
            out.add_scaled(c, &self.reduce_word(w, ground));
        }
        out
    }

    /// PBW words of exactly the given weight, in a fixed order.
    pub fn pbw_words(&self, weight: i64) -> Vec<Word> {
        let sig = &self.sig;
        let mut ops = Vec::new();
        for g in 0..sig.len() {
            let mut m = -1;
            while sig.op_weight(ModeOp::new(g, m)) <= weight {
                ops.push(ModeOp::new(g, m));
                m -= 1;
            }
        }
        ops.sort_by_key(|&op| std::cmp::Reverse(rank(sig, op)));
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(
            sig: &Signature,
            ops: &[ModeOp],
            from: usize,
            left: i64,
            cur: &mut Vec<ModeOp>,
            out: &mut Vec<Word>,
        ) {
            if left == 0 {
                out.push(Word::new(cur.clone()));
                return;
            }
            for (p, &op) in ops.iter().enumerate().skip(from) {
                let w = sig.op_weight(op);
                if w <= left {
                    cur.push(op);
                    go(sig, ops, p, left - w, cur, out);
                    cur.pop();
                }
            }
        }
        go(sig, &ops, 0, weight, &mut cur, &mut out);
        out
    }

    /// The span at `weight` of all `P D^(s) g` with `g` among `gens` and
    /// `P` a PBW word: the part of the ideal generated by `gens` that
    /// contributes nothing new to the Zhu algebra.
    pub fn descendant_span(&self, gens: &[State], weight: i64) -> Echelon<Word> {
        let mut span = Echelon::new();
        for g in gens {
            self.add_descendants(&mut span, g, weight);
        }
        span
    }

    /// Inserts the weight-`weight` descendants `P D^(s) g` into `span`.
    pub fn add_descendants(&self, span: &mut Echelon<Word>, g: &State, weight: i64) {
        let Some(wg) = self.sig.state_weight(g) else {
            return;
        };
        let mut d = g.clone();
        for s in 0..=(weight - wg) {
            if s > 0 {
                d = self.apply_D(&d).scaled(&Scalar::new(1, s));
            }
            if d.is_zero() {
                break;
            }
            for p in self.pbw_words(weight - wg - s) {
                let v = self.apply_word(p.ops(), &d);
                span.insert(&v.into_terms());
            }
        }
    }

    /// Every nonzero Jacobi defect over all generator triples. Pairs of
    /// modes are taken in their reducible order, so each unordered pair
    /// `{u^i_s, u^j_m}` is visited once.
    pub fn all_jacobi_defects(&self, mode: Parallelism) -> Vec<JacobiDefect> {
        let sig = &self.sig;
        let l = sig.len();
        let mut tuples = Vec::new();
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    let total = sig.weight(i) + sig.weight(j) + sig.weight(k) - 2;
                    for s in 0..=total {
                        for m in 0..=(total - s) {
                            let a = ModeOp::new(i, s);
                            let b = ModeOp::new(j, m);
                            if mode_order(sig, a, b) == PairOrder::Reducible {
                                tuples.push((i, s, j, m, k));
                            }
                        }
                    }
                }
            }
        }
        let values = map_ordered(mode, &tuples, |&(i, s, j, m, k)| self.jacobi_defect(i, s, j, m, k));
        tuples
            .into_iter()
            .zip(values)
            .filter(|(_, (v, _))| !v.is_zero())
            .map(|((i, s, j, m, k), (value, plus_bracket))| JacobiDefect {
                i,
                s,
                j,
                m,
                k,
                value,
                plus_bracket,
            })
            .collect()
    }

    /// The nonzero Jacobi defects, keeping only those not already spanned by
    /// descendants `P D^(s) g` of earlier kept defects. The ideal they
    /// generate is the same as for [`Engine::all_jacobi_defects`].
    pub fn c1_singular_elements(&self, mode: Parallelism) -> Vec<JacobiDefect> {
        let mut kept: Vec<JacobiDefect> = Vec::new();
        for d in self.all_jacobi_defects(mode) {
            let gens: Vec<State> = kept.iter().map(|k| k.value.clone()).collect();
            let w = d.weight(&self.sig);
            if !self.descendant_span(&gens, w).contains(&d.value.clone().into_terms()) {
                kept.push(d);
            }
        }
        kept
    }

    /// `u^i_s u^j_m u^k - u^j_m u^i_s u^k - [u^i_s, u^j_m] u^k` together with
    /// the variant that adds the bracket instead.
    pub fn jacobi_defect(&self, i: usize, s: i64, j: usize, m: i64, k: usize) -> (State, State) {
        let target = State::generator(k);
        let a = ModeOp::new(i, s);
        let b = ModeOp::new(j, m);
        let ab = self.apply_mode(a, &self.apply_mode(b, &target));
        let ba = self.apply_mode(b, &self.apply_mode(a, &target));
        let br = self.commutator(a, b).evaluate(self, &target);
        let diff = ab.minus(&ba);
        (diff.minus(&br), diff.plus(&br))
    }

    /// Jacobi defects, empty exactly for non-degenerate presentations.
    pub fn is_nondegenerate(&self, mode: Parallelism) -> (bool, Vec<JacobiDefect>) {
        let w = self.c1_singular_elements(mode);
        (w.is_empty(), w)
    }
}

/// A nonzero C1-singular element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDefect {
    pub i: usize,
    pub s: i64,
    pub j: usize,
    pub m: i64,
    pub k: usize,
    /// `AB u - BA u - [A,B] u` with `A = u^i_s`, `B = u^j_m`, `u = u^k`.
    pub value: State,
    /// `AB u - BA u + [A,B] u`, the opposite sign convention for the bracket.
    pub plus_bracket: State,
}

impl JacobiDefect {
    pub fn weight(&self, sig: &Signature) -> i64 {
        sig.weight(self.i) + sig.weight(self.j) + sig.weight(self.k) - self.s - self.m - 2
    }
}

/// A defect as it appears in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectDoc {
    pub left: String,
    pub s: i64,
    pub right: String,
    pub m: i64,
    pub target: String,
    pub weight: i64,
    pub value: Vec<TermDoc>,
    pub text: String,
    /// The same defect with the bracket added rather than subtracted.
    pub plus_bracket: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularReport {
    pub name: String,
    pub nondegenerate: bool,
    pub defects: Vec<DefectDoc>,
}

impl JacobiDefect {
    /// Short label such as `ep_1 ep_0 em`.
    pub fn label(&self, sig: &Signature) -> String {
        format!(
            "{}_{} {}_{} {}",
            sig.symbol(self.i),
            self.s,
            sig.symbol(self.j),
            self.m,
            sig.symbol(self.k)
        )
    }

    pub fn to_doc(&self, sig: &Signature) -> DefectDoc {
        DefectDoc {
            left: sig.symbol(self.i).to_string(),
            s: self.s,
            right: sig.symbol(self.j).to_string(),
            m: self.m,
            target: sig.symbol(self.k).to_string(),
            weight: self.weight(sig),
            value: state_to_doc(sig, &self.value),
            text: sig.display_state(&self.value),
            plus_bracket: sig.display_state(&self.plus_bracket),
        }
    }
}

impl SingularReport {
    pub fn new(name: &str, sig: &Signature, defects: &[JacobiDefect]) -> Self {
        SingularReport {
            name: name.to_string(),
            nondegenerate: defects.is_empty(),
            defects: defects.iter().map(|d| d.to_doc(sig)).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.name,
            if self.nondegenerate { "non-degenerate" } else { "degenerate" }
        );
        for d in &self.defects {
            out.push_str(&format!(
                "  {}_{} {}_{} {} (weight {}): {}\n",
                d.left, d.s, d.right, d.m, d.target, d.weight, d.text
            ));
        }
        out
    }
}
