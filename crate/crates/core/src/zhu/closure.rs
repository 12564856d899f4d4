//! Relation closure: images of the ideal generated by the seeds.
//!
//! Starting from the seeds, every state `g` found so far is hit with the
//! nonnegative modes `u^i_n` that keep its weight nonnegative. A result that
//! lies in the span of descendants `P D^(s) g'` of known states is skipped,
//! since its image is a consequence of theirs. Otherwise it becomes a known
//! state and its image is added as a relation unless the relations found so
//! far already imply it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::Echelon;
use crate::parallel::{map_ordered, Parallelism};
use crate::presentation::{state_to_doc, GeneratorDoc, Options, Presentation, TermDoc};
use crate::reduction::Engine;
use crate::terms::{ModeOp, Signature, State, Word};

use super::algebra::{IdealMembership, Membership, ZhuAlgebra};
use super::image::{zhu_algebra, zhu_commutators, zhu_image, CommutatorRelation};
use super::ncpoly::{NCPoly, PolyTermDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBounds {
    pub max_mode_depth: u32,
    pub membership_degree_bound: u32,
    pub max_new_generators: u32,
}

impl Default for ClosureBounds {
    fn default() -> Self {
        ClosureBounds {
            max_mode_depth: 6,
            membership_degree_bound: 8,
            max_new_generators: 64,
        }
    }
}

impl ClosureBounds {
    /// Defaults overridden by whatever the presentation's options set.
    pub fn from_options(o: &Options) -> Self {
        let d = ClosureBounds::default();
        ClosureBounds {
            max_mode_depth: o.closure_mode_bound.unwrap_or(d.max_mode_depth),
            membership_degree_bound: o.membership_degree_bound.unwrap_or(d.membership_degree_bound),
            max_new_generators: o.max_new_generators.unwrap_or(d.max_new_generators),
        }
    }
}

/// Which states start the closure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedSelection {
    SingularOnly,
    C1Only,
    #[default]
    Both,
}

/// Singular vectors first, then the C1-singular defects.
pub fn collect_seeds(
    p: &Presentation,
    engine: &Engine,
    which: SeedSelection,
    mode: Parallelism,
) -> Vec<Seed> {
    let mut seeds = Vec::new();
    if which != SeedSelection::C1Only {
        for sv in &p.singular_vectors {
            seeds.push(Seed {
                label: sv.name.clone(),
                value: sv.value.clone(),
            });
        }
    }
    if which != SeedSelection::SingularOnly {
        for d in engine.c1_singular_elements(mode) {
            seeds.push(Seed {
                label: format!("defect({})", d.label(engine.signature())),
                value: d.value,
            });
        }
    }
    seeds
}

/// A seed state with a label used in provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub label: String,
    pub value: State,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum ClosureStatus {
    Complete,
    Partial { bound: String },
}

/// A state reached by the closure: `chain` applied to the seed `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explored {
    pub source: String,
    /// Operators applied to the seed; the last entry acts first.
    pub chain: Vec<ModeOp>,
    pub state: State,
    pub image: NCPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraRelation {
    pub poly: NCPoly,
    pub source: String,
    pub chain: Vec<ModeOp>,
    /// Membership verdict against the relations found before this one.
    pub verdict: Membership,
}

#[derive(Clone, Debug)]
pub struct ZhuPresentation {
    pub name: String,
    pub signature: Arc<Signature>,
    pub algebra: ZhuAlgebra,
    pub commutators: Vec<CommutatorRelation>,
    pub extra: Vec<ExtraRelation>,
    pub explored: Vec<Explored>,
    pub status: ClosureStatus,
}

impl ZhuPresentation {
    pub fn extra_polys(&self) -> Vec<NCPoly> {
        self.extra.iter().map(|r| r.poly.clone()).collect()
    }

    /// Commutator relations followed by the extra relations.
    pub fn all_relations(&self) -> Vec<NCPoly> {
        self.commutators
            .iter()
            .map(|c| c.relation.clone())
            .chain(self.extra_polys())
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClosureStatus::Complete
    }

    fn chain_doc(&self, chain: &[ModeOp]) -> Vec<(String, i64)> {
        chain
            .iter()
            .map(|op| (self.signature.symbol(op.gen).to_string(), op.mode))
            .collect()
    }

    pub fn to_doc(&self) -> ZhuDoc {
        let sig = &self.signature;
        ZhuDoc {
            name: self.name.clone(),
            generators: sig
                .user_order()
                .into_iter()
                .map(|g| GeneratorDoc {
                    symbol: sig.symbol(g).to_string(),
                    weight: sig.weight(g),
                })
                .collect(),
            commutator_relations: self
                .commutators
                .iter()
                .map(|c| CommutatorDoc {
                    left: sig.symbol(c.left).to_string(),
                    right: sig.symbol(c.right).to_string(),
                    bracket: c.bracket.to_doc(sig),
                    text: format!(
                        "[o({}), o({})] = {}",
                        sig.symbol(c.left),
                        sig.symbol(c.right),
                        c.bracket.display(sig)
                    ),
                })
                .collect(),
            extra_relations: self
                .extra
                .iter()
                .map(|r| ExtraDoc {
                    relation: r.poly.to_doc(sig),
                    text: r.poly.display(sig),
                    source: r.source.clone(),
                    chain: self.chain_doc(&r.chain),
                    verdict: r.verdict,
                })
                .collect(),
            provenance: self
                .explored
                .iter()
                .map(|e| ExploredDoc {
                    source: e.source.clone(),
                    chain: self.chain_doc(&e.chain),
                    state: state_to_doc(sig, &e.state),
                    image: e.image.display(sig),
                })
                .collect(),
            status: self.status.clone(),
        }
    }

    /// Plain-text rendering in `o(.)` notation.
    pub fn to_text(&self) -> String {
        let sig = &self.signature;
        let mut out = String::new();
        let gens: Vec<String> = sig
            .user_order()
            .into_iter()
            .map(|g| format!("o({})", sig.symbol(g)))
            .collect();
        let _ = writeln!(out, "Zhu algebra of {}", self.name);
        let _ = writeln!(out, "generators: {}", gens.join(", "));
        let _ = writeln!(out, "commutators:");
        for c in &self.commutators {
            let _ = writeln!(
                out,
                "  [o({}), o({})] = {}",
                sig.symbol(c.left),
                sig.symbol(c.right),
                c.bracket.display(sig)
            );
        }
        let _ = writeln!(out, "extra relations:");
        if self.extra.is_empty() {
            let _ = writeln!(out, "  none");
        }
        for (n, r) in self.extra.iter().enumerate() {
            let chain = if r.chain.is_empty() {
                r.source.clone()
            } else {
                format!("{} {}", sig.display_word(&Word::new(r.chain.clone())), r.source)
            };
            let _ = writeln!(out, "  ({}) {}    [from {chain}]", n + 1, r.poly.display(sig));
        }
        let status = match &self.status {
            ClosureStatus::Complete => "complete".to_string(),
            ClosureStatus::Partial { bound } => format!("partial ({bound} reached)"),
        };
        let _ = writeln!(out, "status: {status}");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorDoc {
    pub left: String,
    pub right: String,
    pub bracket: Vec<PolyTermDoc>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraDoc {
    pub relation: Vec<PolyTermDoc>,
    pub text: String,
    pub source: String,
    pub chain: Vec<(String, i64)>,
    pub verdict: Membership,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploredDoc {
    pub source: String,
    pub chain: Vec<(String, i64)>,
    pub state: Vec<TermDoc>,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZhuDoc {
    pub name: String,
    pub generators: Vec<GeneratorDoc>,
    pub commutator_relations: Vec<CommutatorDoc>,
    pub extra_relations: Vec<ExtraDoc>,
    pub provenance: Vec<ExploredDoc>,
    pub status: ClosureStatus,
}

/// Spans of descendants of the known states, one per weight, grown lazily.
struct Known<'a> {
    engine: &'a Engine,
    states: Vec<State>,
    spans: BTreeMap<i64, (usize, Echelon<Word>)>,
}

impl<'a> Known<'a> {
    fn new(engine: &'a Engine) -> Self {
        Known {
            engine,
            states: Vec::new(),
            spans: BTreeMap::new(),
        }
    }

    fn push(&mut self, s: State) {
        self.states.push(s);
    }

    fn contains(&mut self, h: &State) -> bool {
        let Some(w) = self.engine.signature().state_weight(h) else {
            return false;
        };
        let (done, span) = self.spans.entry(w).or_insert_with(|| (0, Echelon::new()));
        for g in &self.states[*done..] {
            self.engine.add_descendants(span, g, w);
        }
        *done = self.states.len();
        span.contains(&h.clone().into_terms())
    }
}

/// Runs the closure over `seeds` and assembles the Zhu presentation.
pub fn relation_closure(
    engine: &Engine,
    name: &str,
    seeds: &[Seed],
    bounds: &ClosureBounds,
    mode: Parallelism,
) -> ZhuPresentation {
    let sig = engine.signature();
    let algebra = zhu_algebra(engine);
    let commutators = zhu_commutators(engine);
    let mut membership =
        IdealMembership::new(algebra.clone(), Vec::new(), bounds.membership_degree_bound as i64);
    let mut extra = Vec::new();
    let mut status = ClosureStatus::Complete;

    let offer = |poly: NCPoly,
                     source: &str,
                     chain: &[ModeOp],
                     membership: &mut IdealMembership,
                     extra: &mut Vec<ExtraRelation>| {
        let verdict = membership.test(&poly);
        if verdict != Membership::Zero {
            let poly = algebra.straighten(&poly);
            membership.push_relation(poly.clone());
            extra.push(ExtraRelation {
                poly,
                source: source.to_string(),
                chain: chain.to_vec(),
                verdict,
            });
        }
    };

    for ((i, j, k), d) in algebra.overlap_defects() {
        let label = format!("overlap({}, {}, {})", sig.symbol(i), sig.symbol(j), sig.symbol(k));
        offer(d, &label, &[], &mut membership, &mut extra);
    }

    let mut known = Known::new(engine);
    let mut explored: Vec<Explored> = Vec::new();
    let mut depth: Vec<u32> = Vec::new();
    let mut work = VecDeque::new();
    for seed in seeds {
        let v = engine.normal_form(&seed.value);
        if v.is_zero() || known.contains(&v) {
            continue;
        }
        known.push(v.clone());
        let image = zhu_image(engine, &v);
        offer(image.clone(), &seed.label, &[], &mut membership, &mut extra);
        work.push_back(explored.len());
        depth.push(0);
        explored.push(Explored {
            source: seed.label.clone(),
            chain: Vec::new(),
            state: v,
            image,
        });
    }

    let mut new_states = 0u32;
    'outer: while let Some(idx) = work.pop_front() {
        let g = explored[idx].clone();
        let Some(wg) = sig.state_weight(&g.state) else {
            continue;
        };
        let mut cands = Vec::new();
        for i in 0..sig.len() {
            for n in 0..=(wg + sig.weight(i) - 1) {
                let op = ModeOp::new(i, n);
                cands.push((wg + sig.op_weight(op), i, n));
            }
        }
        cands.sort();
        let results = map_ordered(mode, &cands, |&(_, i, n)| {
            engine.apply_mode(ModeOp::new(i, n), &g.state)
        });
        for (&(_, i, n), h) in cands.iter().zip(results) {
            if h.is_zero() || known.contains(&h) {
                continue;
            }
            if depth[idx] >= bounds.max_mode_depth {
                status = ClosureStatus::Partial {
                    bound: "max_mode_depth".into(),
                };
                continue;
            }
            if new_states >= bounds.max_new_generators {
                status = ClosureStatus::Partial {
                    bound: "max_new_generators".into(),
                };
                break 'outer;
            }
            new_states += 1;
            let mut chain = vec![ModeOp::new(i, n)];
            chain.extend_from_slice(&g.chain);
            known.push(h.clone());
            let image = zhu_image(engine, &h);
            log::debug!(
                "closure: new state {} {} -> {}",
                sig.display_word(&Word::new(chain.clone())),
                g.source,
                image.display(sig)
            );
            offer(image.clone(), &g.source, &chain, &mut membership, &mut extra);
            work.push_back(explored.len());
            depth.push(depth[idx] + 1);
            explored.push(Explored {
                source: g.source.clone(),
                chain,
                state: h,
                image,
            });
        }
    }

    ZhuPresentation {
        name: name.to_string(),
        signature: engine.signature_arc(),
        algebra,
        commutators,
        extra,
        explored,
        status,
    }
}
