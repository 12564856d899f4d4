//! The projection `o(s) = s_{wt s - 1}` onto the top level, and the two
//! Zhu products.

use std::collections::BTreeMap;

use crate::reduction::{Engine, Ground};
use crate::scalar::Scalar;
use crate::terms::State;

use super::algebra::ZhuAlgebra;
use super::ncpoly::NCPoly;

/// `o(s)` as a polynomial in the zero modes `x_i = u^i_{wt u^i - 1}`.
///
/// Each homogeneous part of weight `w` contributes its mode `w - 1` acting
/// on an abstract top-level vector. After reduction only words of
/// zero-weight modes survive, in standard order.
pub fn zhu_image(engine: &Engine, s: &State) -> NCPoly {
    let sig = engine.signature();
    let mut out = NCPoly::zero();
    for (w, part) in sig.homogeneous_parts(s) {
        let top = engine.element_mode_in(&part, w - 1, &State::vacuum(), Ground::Top);
        for (word, c) in top.iter() {
            let mono: Vec<usize> = word
                .ops()
                .iter()
                .map(|op| {
                    debug_assert_eq!(sig.op_weight(*op), 0);
                    op.gen
                })
                .collect();
            out.add_term(mono, c);
        }
    }
    out
}

fn residue_product(engine: &Engine, u: &State, v: &State, shift: i64) -> State {
    let sig = engine.signature();
    let mut out = State::zero();
    for (w, part) in sig.homogeneous_parts(u) {
        for j in 0..=w {
            let c = Scalar::binomial(w, j);
            let term = engine.element_mode(&part, j - shift, v);
            out.add_scaled(&c, &term);
        }
    }
    out
}

/// `u * v = sum_j C(wt u, j) u_{j-1} v`.
pub fn star(engine: &Engine, u: &State, v: &State) -> State {
    residue_product(engine, u, v, 1)
}

/// `u o v = sum_j C(wt u, j) u_{j-2} v`.
pub fn circ(engine: &Engine, u: &State, v: &State) -> State {
    residue_product(engine, u, v, 2)
}

/// `[x_i, x_j] = sum_k C(wt u^i - 1, k) o(R(i,j,k))` for every `i < j`.
pub fn bracket_table(engine: &Engine) -> BTreeMap<(usize, usize), NCPoly> {
    let sig = engine.signature();
    let mut out = BTreeMap::new();
    for i in 0..sig.len() {
        for j in i + 1..sig.len() {
            let mut c = NCPoly::zero();
            for k in 0..sig.weight(i) + sig.weight(j) {
                let r = engine.table().value(i, j, k);
                if r.is_zero() {
                    continue;
                }
                let b = Scalar::binomial(sig.weight(i) - 1, k);
                c.add_scaled(&b, &zhu_image(engine, &r));
            }
            out.insert((i, j), c);
        }
    }
    out
}

/// The straightened algebra of a presentation, before extra relations.
pub fn zhu_algebra(engine: &Engine) -> ZhuAlgebra {
    let sig = engine.signature();
    let weights = (0..sig.len()).map(|i| sig.weight(i)).collect();
    let brackets = bracket_table(engine);
    // Brackets come back straightened by the top-level reduction already.
    ZhuAlgebra::new(weights, brackets)
}

/// One relation `x_i x_j - x_j x_i - C_ij` per pair, pairs in user order.
pub fn zhu_commutators(engine: &Engine) -> Vec<CommutatorRelation> {
    let sig = engine.signature();
    let table = bracket_table(engine);
    let order = sig.user_order();
    let mut out = Vec::new();
    for (p, &i) in order.iter().enumerate() {
        for &j in &order[p + 1..] {
            let bracket = if i < j {
                table[&(i, j)].clone()
            } else {
                -&table[&(j, i)]
            };
            let (xi, xj) = (NCPoly::var(i), NCPoly::var(j));
            let relation = &(&(&xi * &xj) - &(&xj * &xi)) - &bracket;
            out.push(CommutatorRelation {
                left: i,
                right: j,
                bracket,
                relation,
            });
        }
    }
    out
}

/// `[x_left, x_right] = bracket`, also stored as `relation = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorRelation {
    pub left: usize,
    pub right: usize,
    pub bracket: NCPoly,
    pub relation: NCPoly,
}
