//! Finite-dimensional quotients of a Zhu presentation: a monomial basis,
//! left-multiplication matrices, and checks of matrix models against the
//! relations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::zhu::algebra::IdealSpan;
use crate::zhu::ncpoly::{display_monomial, MonoKey, Monomial, NCPoly};
use crate::zhu::ZhuPresentation;

/// A dense square matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            data: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows; fails unless the rows form a square.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::MatrixShape(format!("expected {n} columns in every row")));
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[Scalar]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Matrix) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += &(c * y);
        }
    }
}

/// Evaluates `p` at the given matrices, indexed by internal generator.
pub fn evaluate(p: &NCPoly, matrices: &[Matrix], n: usize) -> Matrix {
    let mut out = Matrix::zero(n);
    for (m, c) in p.iter() {
        let mut prod = Matrix::identity(n);
        for &g in m {
            prod = prod.mul(&matrices[g]);
        }
        out.add_scaled(c, &prod);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientModel {
    /// Standard monomials, ascending.
    pub basis: Vec<Monomial>,
    /// First weighted degree of the empty window.
    pub stabilized_at: i64,
    /// Left multiplication by each generator (internal order) on the basis,
    /// acting on column vectors.
    pub matrices: Vec<Matrix>,
}

impl QuotientModel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotStabilized {
    pub degree_bound: i64,
    /// Number of new basis monomials in each weighted degree up to the bound.
    pub new_per_degree: Vec<usize>,
}

/// Finds a monomial basis of the quotient degree by degree.
///
/// Stabilization is declared once `max(2, max weight)` consecutive weighted
/// degrees contribute nothing; beyond that, every monomial is a product of a
/// generator with a monomial already reducible.
pub fn quotient_basis(
    zp: &ZhuPresentation,
    degree_bound: i64,
) -> std::result::Result<QuotientModel, NotStabilized> {
    let alg = &zp.algebra;
    let weights = alg.weights().to_vec();
    let window = weights.iter().copied().max().unwrap_or(1).max(2);
    let span = IdealSpan::build(alg, &zp.extra_polys(), degree_bound);

    let mut new_per_degree = Vec::new();
    let mut basis: Vec<Monomial> = Vec::new();
    let mut empty_run = 0;
    let mut stabilized_at = None;
    for d in 0..=degree_bound {
        let fresh: Vec<Monomial> = alg
            .standard_monomials(d)
            .into_iter()
            .filter(|m| !span.is_pivot(&MonoKey::new(&weights, m.clone())))
            .collect();
        new_per_degree.push(fresh.len());
        if fresh.is_empty() {
            empty_run += 1;
            if empty_run == window {
                stabilized_at = Some(d + 1 - window);
                break;
            }
        } else {
            empty_run = 0;
            basis.extend(fresh);
        }
    }
    let Some(stabilized_at) = stabilized_at else {
        return Err(NotStabilized {
            degree_bound,
            new_per_degree,
        });
    };
    let top = stabilized_at + weights.iter().copied().max().unwrap_or(0);
    if top > degree_bound {
        return Err(NotStabilized {
            degree_bound,
            new_per_degree,
        });
    }

    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(n, m)| (m, n)).collect();
    let dim = basis.len();
    let mut matrices = Vec::with_capacity(weights.len());
    for g in 0..weights.len() {
        let mut mat = Matrix::zero(dim);
        for (col, b) in basis.iter().enumerate() {
            let prod = alg.mul(&NCPoly::var(g), &NCPoly::term(b.clone(), Scalar::one()));
            let rem = span.remainder(&weights, &prod);
            for (m, c) in rem.iter() {
                let Some(&row) = index.get(m) else {
                    return Err(NotStabilized {
                        degree_bound,
                        new_per_degree,
                    });
                };
                mat.set(row, col, c.clone());
            }
        }
        matrices.push(mat);
    }
    Ok(QuotientModel {
        basis,
        stabilized_at,
        matrices,
    })
}

/// A relation that a matrix model fails to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedRelation {
    pub label: String,
    pub relation: String,
}

/// Substitutes the matrices (keyed by generator symbol) into every relation
/// of `zp`. Returns the relations that do not vanish.
pub fn check_matrix_model(
    zp: &ZhuPresentation,
    matrices: &BTreeMap<String, Matrix>,
) -> Result<Vec<FailedRelation>> {
    let sig = &zp.signature;
    let mut ordered = Vec::with_capacity(sig.len());
    for g in 0..sig.len() {
        let m = matrices
            .get(sig.symbol(g))
            .ok_or_else(|| Error::MatrixShape(format!("no matrix for {}", sig.symbol(g))))?;
        ordered.push(m.clone());
    }
    if let Some(extra) = matrices.keys().find(|k| sig.index_of(k).is_none()) {
        return Err(Error::MatrixShape(format!("unknown generator {extra}")));
    }
    let n = ordered[0].size();
    if ordered.iter().any(|m| m.size() != n) {
        return Err(Error::MatrixShape("matrices differ in size".into()));
    }
    let mut failed = Vec::new();
    for c in &zp.commutators {
        if !evaluate(&c.relation, &ordered, n).is_zero() {
            failed.push(FailedRelation {
                label: format!("[o({}), o({})]", sig.symbol(c.left), sig.symbol(c.right)),
                relation: c.relation.display(sig),
            });
        }
    }
    for (k, r) in zp.extra.iter().enumerate() {
        if !evaluate(&r.poly, &ordered, n).is_zero() {
            failed.push(FailedRelation {
                label: format!("extra relation {}", k + 1),
                relation: r.poly.display(sig),
            });
        }
    }
    Ok(failed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "kebab-case")]
pub enum QuotientStatus {
    Stabilized { degree: i64 },
    NotStabilized { degree_bound: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDoc {
    pub name: String,
    pub basis: Vec<String>,
    pub dimension: Option<usize>,
    pub matrices: BTreeMap<String, Vec<Vec<Scalar>>>,
    pub new_per_degree: Vec<usize>,
    pub status: QuotientStatus,
}

impl QuotientDoc {
    pub fn new(zp: &ZhuPresentation, outcome: &std::result::Result<QuotientModel, NotStabilized>) -> Self {
        let sig = &zp.signature;
        match outcome {
            Ok(model) => {
                let mut new_per_degree = vec![0; model.stabilized_at as usize];
                for b in &model.basis {
                    new_per_degree[zp.algebra.wdeg(b) as usize] += 1;
                }
                QuotientDoc {
                    name: zp.name.clone(),
                    basis: model
                        .basis
                        .iter()
                        .map(|m| if m.is_empty() { "1".to_string() } else { display_monomial(sig, m) })
                        .collect(),
                    dimension: Some(model.dimension()),
                    matrices: model
                        .matrices
                        .iter()
                        .enumerate()
                        .map(|(g, m)| (sig.symbol(g).to_string(), m.rows()))
                        .collect(),
                    new_per_degree,
                    status: QuotientStatus::Stabilized {
                        degree: model.stabilized_at,
                    },
                }
            }
            Err(ns) => QuotientDoc {
                name: zp.name.clone(),
                basis: Vec::new(),
                dimension: None,
                matrices: BTreeMap::new(),
                new_per_degree: ns.new_per_degree.clone(),
                status: QuotientStatus::NotStabilized {
                    degree_bound: ns.degree_bound,
                },
            },
        }
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "quotient of {}", self.name);
        match &self.status {
            QuotientStatus::Stabilized { degree } => {
                let _ = writeln!(
                    out,
                    "dimension {} (stabilized at degree {degree})",
                    self.dimension.unwrap_or(0)
                );
                let _ = writeln!(out, "basis: {}", self.basis.join(", "));
                for (sym, rows) in &self.matrices {
                    let _ = writeln!(out, "o({sym}):");
                    for r in rows {
                        let cells: Vec<String> = r.iter().map(|c| format!("{:>5}", c.to_string())).collect();
                        let _ = writeln!(out, "  [{}]", cells.join(" "));
                    }
                }
            }
            QuotientStatus::NotStabilized { degree_bound } => {
                let _ = writeln!(out, "not stabilized up to weighted degree {degree_bound}");
                let _ = writeln!(out, "new basis monomials per degree: {:?}", self.new_per_degree);
            }
        }
        out
    }
}
