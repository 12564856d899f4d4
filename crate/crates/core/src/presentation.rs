//! Presentations: the input document, validation, and completion of the
//! relation table by skew symmetry.
//!
//! Relation indices in the document follow the user's generator order. The
//! stored domain is `i < j` with any `k >= 0`, or `i == j` with odd `k`;
//! everything else is derived.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduction::{is_pbw_word, Engine, ReductionStrategy};
use crate::scalar::Scalar;
use crate::terms::{ModeOp, Signature, State, Word};

/// One term of a state in documents: a coefficient and a word given as
/// `[symbol, mode]` pairs. The empty word is the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: Scalar,
    pub word: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub symbol: String,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub i: usize,
    pub j: usize,
    pub k: i64,
    pub value: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularDoc {
    pub name: String,
    pub value: Vec<TermDoc>,
}

/// Optional bounds stored with a presentation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_mode_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership_degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_new_generators: Option<u32>,
}

/// The presentation document as it appears on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub name: String,
    pub generators: Vec<GeneratorDoc>,
    pub relations: Vec<RelationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_vectors: Vec<SingularDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

/// A stored relation `u^i_k u^j = value`, with internal indices `i`, `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationEntry {
    pub i: usize,
    pub j: usize,
    pub k: i64,
    pub value: State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularVector {
    pub name: String,
    pub value: State,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub signature: Arc<Signature>,
    pub relations: Vec<RelationEntry>,
    pub singular_vectors: Vec<SingularVector>,
    pub options: Options,
}

fn valid_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Converts a state to its document form, terms in canonical order.
pub fn state_to_doc(sig: &Signature, s: &State) -> Vec<TermDoc> {
    sig.canonical_terms(s)
        .into_iter()
        .map(|(w, c)| TermDoc {
            coeff: c.clone(),
            word: w
                .ops()
                .iter()
                .map(|op| (sig.symbol(op.gen).to_string(), op.mode))
                .collect(),
        })
        .collect()
}

/// Reads a state from its document form; `path` names it in errors.
pub fn state_from_doc(sig: &Signature, terms: &[TermDoc], path: &str) -> Result<State> {
    let mut s = State::zero();
    for (t, term) in terms.iter().enumerate() {
        let mut ops = Vec::with_capacity(term.word.len());
        for (p, (sym, mode)) in term.word.iter().enumerate() {
            let gen = sig.index_of(sym).ok_or_else(|| {
                Error::parse(
                    format!("{path}[{t}].word[{p}]"),
                    format!("unknown generator symbol {sym:?}"),
                )
            })?;
            ops.push(ModeOp::new(gen, *mode));
        }
        s.add_term(Word::new(ops), &term.coeff);
    }
    Ok(s)
}

/// Parses a presentation document. Errors name the offending path.
pub fn parse_presentation(src: &str) -> Result<Presentation> {
    let de = &mut serde_json::Deserializer::from_str(src);
    let doc: PresentationDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::parse(path, e.into_inner().to_string())
    })?;
    Presentation::from_doc(&doc)
}

impl Presentation {
    pub fn from_doc(doc: &PresentationDoc) -> Result<Presentation> {
        if doc.generators.is_empty() {
            return Err(Error::parse("generators", "at least one generator is required"));
        }
        let mut seen = BTreeSet::new();
        for (n, g) in doc.generators.iter().enumerate() {
            if !valid_symbol(&g.symbol) {
                return Err(Error::parse(
                    format!("generators[{n}].symbol"),
                    format!("invalid symbol {:?}", g.symbol),
                ));
            }
            if !seen.insert(g.symbol.as_str()) {
                return Err(Error::parse(
                    format!("generators[{n}].symbol"),
                    format!("duplicate symbol {:?}", g.symbol),
                ));
            }
            if g.weight < 1 {
                return Err(Error::parse(
                    format!("generators[{n}].weight"),
                    "weights must be positive integers",
                ));
            }
        }
        let pairs: Vec<(String, i64)> = doc
            .generators
            .iter()
            .map(|g| (g.symbol.clone(), g.weight))
            .collect();
        let sig = Signature::new(&pairs);
        let l = doc.generators.len();
        let mut relations = Vec::with_capacity(doc.relations.len());
        for (n, r) in doc.relations.iter().enumerate() {
            if r.i >= l {
                return Err(Error::parse(format!("relations[{n}].i"), "generator index out of range"));
            }
            if r.j >= l {
                return Err(Error::parse(format!("relations[{n}].j"), "generator index out of range"));
            }
            if r.k < 0 {
                return Err(Error::parse(format!("relations[{n}].k"), "k must be nonnegative"));
            }
            let value = state_from_doc(&sig, &r.value, &format!("relations[{n}].value"))?;
            relations.push(RelationEntry {
                i: sig.from_user_index(r.i).expect("in range"),
                j: sig.from_user_index(r.j).expect("in range"),
                k: r.k,
                value,
            });
        }
        let mut singular_vectors = Vec::new();
        for (n, sv) in doc.singular_vectors.iter().enumerate() {
            let value = state_from_doc(&sig, &sv.value, &format!("singular_vectors[{n}].value"))?;
            singular_vectors.push(SingularVector {
                name: sv.name.clone(),
                value,
            });
        }
        Ok(Presentation {
            name: doc.name.clone(),
            signature: Arc::new(sig),
            relations,
            singular_vectors,
            options: doc.options.clone().unwrap_or_default(),
        })
    }

    pub fn to_doc(&self) -> PresentationDoc {
        let sig = &self.signature;
        let generators = sig
            .user_order()
            .into_iter()
            .map(|g| GeneratorDoc {
                symbol: sig.symbol(g).to_string(),
                weight: sig.weight(g),
            })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|r| RelationDoc {
                i: sig.generator(r.i).user_index,
                j: sig.generator(r.j).user_index,
                k: r.k,
                value: state_to_doc(sig, &r.value),
            })
            .collect();
        let singular_vectors = self
            .singular_vectors
            .iter()
            .map(|s| SingularDoc {
                name: s.name.clone(),
                value: state_to_doc(sig, &s.value),
            })
            .collect();
        let options = (self.options != Options::default()).then(|| self.options.clone());
        PresentationDoc {
            name: self.name.clone(),
            generators,
            relations,
            singular_vectors,
            options,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Completes the table and builds a reduction engine on it.
    pub fn engine(&self, strategy: ReductionStrategy) -> Engine {
        let table = complete_table(self);
        Engine::new(self.signature.clone(), Arc::new(table), strategy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    Inhomogeneous,
    Weight,
    NormalOrder,
    Domain,
    Duplicate,
    SingularInhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    /// Document path of the offending entry, e.g. `relations[3]`.
    pub location: String,
    pub kind: IssueKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks every stored relation and singular vector.
pub fn validate(p: &Presentation) -> ValidationReport {
    let sig = p.signature();
    let mut issues = Vec::new();
    let mut slots: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
    for (n, r) in p.relations.iter().enumerate() {
        let location = format!("relations[{n}]");
        let ui = sig.generator(r.i).user_index;
        let uj = sig.generator(r.j).user_index;
        let label = format!("{}_{} {}", sig.symbol(r.i), r.k, sig.symbol(r.j));
        let mut issue = |kind, message: String| {
            issues.push(ValidationIssue {
                location: location.clone(),
                kind,
                message,
            })
        };
        if ui > uj || (ui == uj && r.k % 2 == 0) {
            issue(
                IssueKind::Domain,
                format!("{label}: stored relations need i < j, or i = j with odd k"),
            );
        }
        if let Some(first) = slots.insert((ui, uj, r.k), n) {
            issue(IssueKind::Duplicate, format!("{label}: already given at relations[{first}]"));
        }
        let expected = sig.weight(r.i) + sig.weight(r.j) - r.k - 1;
        if expected < 0 {
            issue(IssueKind::Weight, format!("{label}: slot has negative weight {expected}"));
        }
        if !r.value.is_zero() {
            match sig.state_weight(&r.value) {
                None => issue(IssueKind::Inhomogeneous, format!("{label}: value is not homogeneous")),
                Some(w) if w != expected => issue(
                    IssueKind::Weight,
                    format!("{label}: expected weight {expected}, got {w}"),
                ),
                Some(_) => {}
            }
        }
        for w in r.value.words() {
            if !is_pbw_word(sig, w) {
                issue(
                    IssueKind::NormalOrder,
                    format!("{label}: word {} is not in PBW order", sig.display_word(w)),
                );
            }
        }
    }
    for (n, s) in p.singular_vectors.iter().enumerate() {
        if !s.value.is_zero() && sig.state_weight(&s.value).is_none() {
            issues.push(ValidationIssue {
                location: format!("singular_vectors[{n}]"),
                kind: IssueKind::SingularInhomogeneous,
                message: format!("{}: value is not homogeneous", s.name),
            });
        }
    }
    ValidationReport {
        valid: issues.is_empty(),
        issues,
    }
}

/// All products `u^i_k u^j` for `0 <= k < wt u^i + wt u^j`, internal indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FullTable {
    entries: BTreeMap<(usize, usize, i64), State>,
}

impl FullTable {
    pub fn new() -> Self {
        FullTable::default()
    }

    pub fn get(&self, i: usize, j: usize, k: i64) -> Option<&State> {
        self.entries.get(&(i, j, k))
    }

    /// `u^i_k u^j`, zero when absent.
    pub fn value(&self, i: usize, j: usize, k: i64) -> State {
        self.get(i, j, k).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, i: usize, j: usize, k: i64, value: State) {
        self.entries.insert((i, j, k), value);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize, i64), &State)> {
        self.entries.iter()
    }

    /// Entries in user generator order.
    pub fn to_doc(&self, sig: &Signature) -> TableDoc {
        let order = sig.user_order();
        let mut entries = Vec::new();
        for &i in &order {
            for &j in &order {
                for k in 0..sig.weight(i) + sig.weight(j) {
                    if let Some(v) = self.get(i, j, k) {
                        entries.push(TableEntryDoc {
                            left: sig.symbol(i).to_string(),
                            k,
                            right: sig.symbol(j).to_string(),
                            value: state_to_doc(sig, v),
                            text: sig.display_state(v),
                        });
                    }
                }
            }
        }
        TableDoc { entries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntryDoc {
    pub left: String,
    pub k: i64,
    pub right: String,
    pub value: Vec<TermDoc>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub entries: Vec<TableEntryDoc>,
}

/// Fills in every admissible product from the stored relations.
///
/// Pairs are completed in increasing order of `wt u^i + wt u^j`; products of
/// a pair only involve words of smaller formal length, so each stage reduces
/// with the table built so far.
pub fn complete_table(p: &Presentation) -> FullTable {
    let sig = p.signature.clone();
    let l = sig.len();
    let given: BTreeMap<(usize, usize, i64), &State> =
        p.relations.iter().map(|r| ((r.i, r.j, r.k), &r.value)).collect();

    let mut stages: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..l {
        for b in a..l {
            stages.entry(sig.weight(a) + sig.weight(b)).or_default().push((a, b));
        }
    }

    let mut table = FullTable::new();
    for (total, pairs) in stages {
        let engine = Engine::new(sig.clone(), Arc::new(table.clone()), ReductionStrategy::default());
        for (a, b) in pairs {
            let stored = |i: usize, j: usize, k: i64| {
                given
                    .get(&(i, j, k))
                    .map(|s| engine.normal_form(s))
                    .unwrap_or_default()
            };
            if a == b {
                for k in (0..total).rev() {
                    let value = if k % 2 == 1 {
                        stored(a, a, k)
                    } else {
                        let mut acc = State::zero();
                        for t in 1..total - k {
                            let prev = table.value(a, a, k + t);
                            let d = engine.apply_divided_D(t, &prev);
                            acc.add_scaled(&Scalar::sign_power(k + t + 1), &d);
                        }
                        acc.scaled(&Scalar::new(1, 2))
                    };
                    table.insert(a, a, k, value);
                }
            } else {
                // Stored direction follows the user order.
                let (i, j) = if sig.generator(a).user_index < sig.generator(b).user_index {
                    (a, b)
                } else {
                    (b, a)
                };
                for k in 0..total {
                    table.insert(i, j, k, stored(i, j, k));
                }
                for k in 0..total {
                    let mut acc = State::zero();
                    for t in 0..total - k {
                        let d = engine.apply_divided_D(t, &table.value(i, j, k + t));
                        acc.add_scaled(&Scalar::sign_power(k + t + 1), &d);
                    }
                    table.insert(j, i, k, acc);
                }
            }
        }
    }
    table
}
