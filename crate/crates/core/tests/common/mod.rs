#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use zhuforge::presentation::{parse_presentation, Presentation};
use zhuforge::reduction::{Engine, ReductionStrategy};
use zhuforge::syntax::parse_state;
use zhuforge::zhu::NCPoly;
use zhuforge::{ModeOp, Scalar, State, Word};

pub fn presentation_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../presentations")
        .join(format!("{name}.json"))
}

pub struct Fixture {
    pub p: Presentation,
    pub e: Engine,
}

impl Fixture {
    pub fn load(name: &str) -> Fixture {
        let src = std::fs::read_to_string(presentation_path(name)).unwrap();
        let p = parse_presentation(&src).unwrap();
        let e = p.engine(ReductionStrategy::LeftmostFirst);
        Fixture { p, e }
    }

    pub fn gen(&self, sym: &str) -> usize {
        self.p.signature().index_of(sym).unwrap()
    }

    pub fn op(&self, sym: &str, n: i64) -> ModeOp {
        ModeOp::new(self.gen(sym), n)
    }

    /// Normal form of an inline expression.
    pub fn nf(&self, src: &str) -> State {
        self.e.normal_form(&parse_state(self.p.signature(), src).unwrap())
    }

    /// `sym_n s`.
    pub fn act(&self, sym: &str, n: i64, s: &State) -> State {
        self.e.apply_mode(self.op(sym, n), s)
    }

    pub fn show(&self, s: &State) -> String {
        self.p.signature().display_state(s)
    }

    /// Polynomial in the zero modes from `(numer, denom, symbols)` terms.
    pub fn poly(&self, terms: &[(i64, i64, &[&str])]) -> NCPoly {
        let mut out = NCPoly::zero();
        for &(a, b, m) in terms {
            let mono: Vec<usize> = m.iter().map(|s| self.gen(s)).collect();
            out.add_term(mono, &Scalar::new(a, b));
        }
        out
    }
}

pub fn q(a: i64, b: i64) -> Scalar {
    Scalar::new(a, b)
}

/// A random word made of at most `max_len` operators with modes in
/// `lo..=hi`. It may be reducible or vanish.
pub fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize, lo: i64, hi: i64) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::new(
        (0..len)
            .map(|_| ModeOp::new(rng.gen_range(0..gens), rng.gen_range(lo..=hi)))
            .collect(),
    )
}

pub fn random_coeff(rng: &mut ChaCha8Rng) -> Scalar {
    let mut n = rng.gen_range(-9..=9);
    if n == 0 {
        n = 1;
    }
    Scalar::new(n, rng.gen_range(1..=4))
}

/// A raw (not normal-ordered) state with a few random terms of weight at
/// most `max_weight`.
pub fn random_state(f: &Fixture, rng: &mut ChaCha8Rng, max_weight: i64) -> State {
    let sig = f.p.signature();
    let mut s = State::zero();
    let terms = rng.gen_range(1..=4);
    while s.len() < terms {
        let w = random_word(rng, sig.len(), 4, -4, 2);
        let wt = sig.word_weight(w.ops());
        if wt >= 0 && wt <= max_weight {
            s.add_term(w, &random_coeff(rng));
        }
    }
    s
}

/// A nonzero homogeneous state of the given weight: a random combination
/// of one to three PBW words. Panics if the weight space is empty.
pub fn random_homogeneous(f: &Fixture, rng: &mut ChaCha8Rng, weight: i64) -> State {
    let basis = f.e.pbw_words(weight);
    assert!(!basis.is_empty(), "no states of weight {weight}");
    let mut s = State::zero();
    let terms = rng.gen_range(1..=3.min(basis.len()));
    while s.len() < terms {
        let w = &basis[rng.gen_range(0..basis.len())];
        if s.coeff(w).is_zero() {
            s.add_term(w.clone(), &random_coeff(rng));
        }
    }
    s
}

/// A weight in `lo..=hi` with a nonzero weight space.
pub fn random_weight(f: &Fixture, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    let ok: Vec<i64> = (lo..=hi).filter(|&w| !f.e.pbw_words(w).is_empty()).collect();
    ok[rng.gen_range(0..ok.len())]
}

/// The Virasoro vacuum module spanned by `L(-a_1) ... L(-a_k)|0>` with
/// `a_1 >= ... >= a_k >= 2`, with `L(n)` acting through
/// `[L(m), L(n)] = (m-n) L(m+n) + c/12 (m^3 - m) delta_{m+n,0}`.
pub mod virasoro {
    use super::*;

    pub type VState = BTreeMap<Vec<i64>, Scalar>;

    fn add(out: &mut VState, k: Vec<i64>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = out.entry(k.clone()).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            out.remove(&k);
        }
    }

    pub fn apply(n: i64, s: &VState, central: &Scalar) -> VState {
        let mut out = VState::new();
        for (m, c) in s {
            for (k, d) in apply_mono(n, m, central) {
                add(&mut out, k, c * &d);
            }
        }
        out
    }

    fn apply_mono(n: i64, mono: &[i64], central: &Scalar) -> VState {
        let mut out = VState::new();
        let Some((&a, rest)) = mono.split_first() else {
            if n <= -2 {
                out.insert(vec![-n], Scalar::one());
            }
            return out;
        };
        if -n >= a {
            let mut k = vec![-n];
            k.extend_from_slice(mono);
            out.insert(k, Scalar::one());
            return out;
        }
        let rest_state: VState = [(rest.to_vec(), Scalar::one())].into_iter().collect();
        // L(n) L(-a) = L(-a) L(n) + (n + a) L(n - a) + c/12 (n^3 - n) delta_{n,a}
        let swapped = apply(-a, &apply(n, &rest_state, central), central);
        for (k, c) in swapped {
            add(&mut out, k, c);
        }
        for (k, c) in apply(n - a, &rest_state, central) {
            add(&mut out, k, c * &Scalar::from_int(n + a));
        }
        if n == a {
            let z = central * &Scalar::new(n * n * n - n, 12);
            add(&mut out, rest.to_vec(), z);
        }
        out
    }

    /// Reads an engine state with `w_m = L(m - 1)`.
    pub fn from_engine(s: &State, central: &Scalar) -> VState {
        let mut out = VState::new();
        for (w, c) in s.iter() {
            let mut v: VState = [(Vec::new(), Scalar::one())].into_iter().collect();
            for op in w.ops().iter().rev() {
                v = apply(op.mode - 1, &v, central);
            }
            for (k, d) in v {
                add(&mut out, k, c * &d);
            }
        }
        out
    }
}
