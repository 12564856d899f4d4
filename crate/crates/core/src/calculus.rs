//! Mode actions of arbitrary states, the translation operator and operator
//! commutators.
//!
//! The mode `(x)_t` of a word `x = u_n x'` acting on `y` is unfolded with the
//! iterate formula
//!
//! ```text
//! (u_n x')_t y = sum_r (-1)^r C(n,r) [ u_{n-r} x'_{t+r} y - (-1)^n x'_{n+t-r} u_r y ]
//! ```
//!
//! down to `1_t y = delta_{t,-1} y`. The result is a sum of words that the
//! engine then normal-orders.

use crate::reduction::{vanishes, Engine, Ground};
use crate::scalar::Scalar;
use crate::terms::{ModeOp, State, Word};

/// `[a, b] = sum_k C(m,k) (u^i_k u^j)_{m+n-k}` for `a = u^i_m`, `b = u^j_n`,
/// kept as a list of element modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpExpansion {
    pub terms: Vec<(Scalar, State, i64)>,
}

impl OpExpansion {
    /// Applies the expansion to `target`, returning a normal form.
    pub fn evaluate(&self, engine: &Engine, target: &State) -> State {
        self.evaluate_in(engine, target, Ground::Vacuum)
    }

    pub fn evaluate_in(&self, engine: &Engine, target: &State, ground: Ground) -> State {
        let mut words: Vec<(Word, Scalar)> = Vec::new();
        for (c, r, mode) in &self.terms {
            for (yw, yc) in target.iter() {
                let scale = c * yc;
                let mut prefix = Vec::new();
                engine.expand_element_into(r, *mode, yw.ops(), ground, &scale, &mut prefix, &mut |w, k| {
                    words.push((w, k))
                });
            }
        }
        engine.reduce_sum(words, ground)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, r, _)| c.is_zero() || r.is_zero())
    }
}

impl Engine {
    /// Emits `prefix . coeff * (r)_t (suffix . ground)` as raw words.
    #[allow(clippy::too_many_arguments)]
    pub fn expand_element_into(
        &self,
        r: &State,
        t: i64,
        suffix: &[ModeOp],
        ground: Ground,
        coeff: &Scalar,
        prefix: &mut Vec<ModeOp>,
        out: &mut dyn FnMut(Word, Scalar),
    ) {
        for (w, c) in r.iter() {
            let scale = coeff * c;
            self.expand_word(w.ops(), t, suffix, ground, &scale, prefix, out);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn expand_word(
        &self,
        ops: &[ModeOp],
        t: i64,
        y: &[ModeOp],
        ground: Ground,
        coeff: &Scalar,
        prefix: &mut Vec<ModeOp>,
        out: &mut dyn FnMut(Word, Scalar),
    ) {
        let sig = self.signature();
        let Some((&u, rest)) = ops.split_first() else {
            if t == -1 {
                out(Word::concat(prefix, y), coeff.clone());
            }
            return;
        };
        let n = u.mode;
        let wt_rest = sig.word_weight(rest);
        let wt_y = sig.word_weight(y);
        let in_range = |r: i64| n < 0 || r <= n;

        let mut r = 0;
        while in_range(r) && wt_rest + wt_y - (t + r) > 0 {
            let c = Scalar::binomial(n, r) * Scalar::sign_power(r);
            prefix.push(ModeOp::new(u.gen, n - r));
            self.expand_word(rest, t + r, y, ground, &(coeff * &c), prefix, out);
            prefix.pop();
            r += 1;
        }

        let mut r = 0;
        while in_range(r) && sig.weight(u.gen) - r - 1 + wt_y >= 0 {
            let mut ny = Vec::with_capacity(y.len() + 1);
            ny.push(ModeOp::new(u.gen, r));
            ny.extend_from_slice(y);
            if !vanishes(sig, &ny, ground) {
                let c = -(Scalar::binomial(n, r) * Scalar::sign_power(n + r));
                self.expand_word(rest, n + t - r, &ny, ground, &(coeff * &c), prefix, out);
            }
            r += 1;
        }
    }

    /// `v_t s` in normal form.
    pub fn element_mode(&self, v: &State, t: i64, s: &State) -> State {
        self.element_mode_in(v, t, s, Ground::Vacuum)
    }

    pub fn element_mode_in(&self, v: &State, t: i64, s: &State, ground: Ground) -> State {
        let mut words: Vec<(Word, Scalar)> = Vec::new();
        for (yw, yc) in s.iter() {
            let mut prefix = Vec::new();
            self.expand_element_into(v, t, yw.ops(), ground, yc, &mut prefix, &mut |w, c| {
                words.push((w, c))
            });
        }
        self.reduce_sum(words, ground)
    }

    /// `op s` in normal form.
    pub fn apply_mode(&self, op: ModeOp, s: &State) -> State {
        self.reduce_sum(s.iter().map(|(w, c)| (w.prepend(op), c.clone())), Ground::Vacuum)
    }

    /// Applies a word of operators (rightmost first) and normal-orders.
    pub fn apply_word(&self, ops: &[ModeOp], s: &State) -> State {
        self.reduce_sum(
            s.iter().map(|(w, c)| (Word::concat(ops, w.ops()), c.clone())),
            Ground::Vacuum,
        )
    }

    /// The translation operator, `[D, u_n] = -n u_{n-1}`, `D 1 = 0`.
    #[allow(non_snake_case)]
    pub fn apply_D(&self, s: &State) -> State {
        let mut words = Vec::new();
        for (w, c) in s.iter() {
            for p in 0..w.len() {
                let op = w.ops()[p];
                if op.mode == 0 {
                    continue;
                }
                let mut ops = w.ops().to_vec();
                ops[p] = ModeOp::new(op.gen, op.mode - 1);
                words.push((Word::new(ops), c * &Scalar::from_int(-op.mode)));
            }
        }
        self.reduce_sum(words, Ground::Vacuum)
    }

    /// The divided power `D^t / t!`.
    #[allow(non_snake_case)]
    pub fn apply_divided_D(&self, t: i64, s: &State) -> State {
        let mut cur = s.clone();
        for _ in 0..t {
            cur = self.apply_D(&cur);
        }
        cur.scaled(&Scalar::factorial(t).recip())
    }

    /// `[a, b]` as element modes.
    pub fn commutator(&self, a: ModeOp, b: ModeOp) -> OpExpansion {
        let sig = self.signature();
        let kmax = sig.weight(a.gen) + sig.weight(b.gen) - 1;
        let mut terms = Vec::new();
        for k in 0..=kmax {
            let c = Scalar::binomial(a.mode, k);
            if c.is_zero() {
                continue;
            }
            if let Some(r) = self.table().get(a.gen, b.gen, k) {
                if !r.is_zero() {
                    terms.push((c, r.clone(), a.mode + b.mode - k));
                }
            }
        }
        OpExpansion { terms }
    }
}
