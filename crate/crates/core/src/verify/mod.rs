//! Desk-scale verification campaigns. Each campaign walks a corpus of small
//! graphs, records a verdict per graph and keeps a certificate for every
//! counterexample. Certificates consist of facts that are re-checked from
//! scratch by [`Certificate::revalidate`].

mod campaigns;
mod corpus;
mod figure2;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

pub use campaigns::{
    campaign_class_random, campaign_class_recolorable, campaign_conjecture, campaign_hereditary_reduction,
    campaign_sibling, campaign_skeleton_equivalence, campaign_structure, conjecture_evidence, ConjectureEvidence,
    SideOutcome, StructureStatement, BLOWUP_VERTEX_CAP,
};
pub use corpus::{
    class_corpora, class_corpus, exhaustive_corpus, hereditary_levels, random_class_corpus, random_proper_coloring,
    Corpus, CorpusSource, CorpusSummary, CLASS_LIMIT, EXHAUSTIVE_LIMIT,
};
pub use figure2::{figure2_reproduction, FIGURE2_MULTIPLICITIES};

use crate::coloring::{is_proper, Color, Coloring};
use crate::error::Result;
use crate::graph::Graph;
use crate::io::emit_graph6;
use crate::lifting::sibling_lift;
use crate::modules::is_module;
use crate::reconfig::{find_path_with_budget, is_frozen, state_budget, Census};
use crate::schedule::RecoloringSchedule;
use crate::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Counterexample,
    /// Disagreement in a part of the campaign that is not asserted.
    Discrepancy,
    /// A hypothesis of the checked statement failed.
    Excluded,
    /// A resource guard tripped.
    Skipped,
    /// The statement says nothing about this graph.
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    /// graph6 encoding.
    pub graph: String,
    pub n: usize,
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    pub fn new(g: &Graph, status: Status, detail: impl Into<String>) -> Self {
        Verdict {
            graph: emit_graph6(g),
            n: g.n(),
            status,
            detail: detail.into(),
        }
    }
}

/// Why `R_ℓ(G)` is disconnected.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// A frozen coloring is isolated, and with two or more colors it is not
    /// the only coloring.
    Frozen(Coloring),
    /// Two colorings with no walk between them.
    Pair(Coloring, Coloring),
}

/// One independently checkable claim.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    Disconnected {
        graph: Graph,
        ell: Color,
        witness: Separation,
    },
    Connected {
        graph: Graph,
        ell: Color,
    },
    /// `module` is a module with at least two vertices and not all of them.
    NontrivialModule {
        graph: Graph,
        module: Vec<usize>,
    },
    /// A proper coloring in which `vertex` may move to `color`.
    Movable {
        graph: Graph,
        coloring: Coloring,
        vertex: usize,
        color: Color,
    },
    /// The graph meets the premise of `statement` and not its conclusion.
    StructureFails {
        graph: Graph,
        statement: StructureStatement,
    },
    /// Whether `a` and `b` (colorings of the sibling) are joined by a walk,
    /// and whether their restrictions to the base graph are.
    SiblingPaths {
        base: Graph,
        k: Color,
        a: Coloring,
        b: Coloring,
        base_path: bool,
        sibling_path: bool,
    },
    /// Lifting `path` to the sibling from `start` towards `target` does not
    /// give a valid schedule ending at `target`.
    LiftRejected {
        base: Graph,
        k: Color,
        path: RecoloringSchedule,
        start: Coloring,
        target: Coloring,
        error: String,
    },
    /// No prime induced subgraph is non-mixing for any `ℓ'` between its
    /// chromatic number plus one and `ell_max`.
    NoFailingPrimeSubgraph {
        graph: Graph,
        ell_max: Color,
    },
}

fn reaches(g: &Graph, k: Color, a: &Coloring, b: &Coloring) -> Result<bool> {
    Ok(find_path_with_budget(g, k, a, b, state_budget())?.is_some())
}

impl Fact {
    /// Re-checks the claim without reusing any campaign state.
    pub fn revalidate(&self) -> Result<bool> {
        match self {
            Fact::Disconnected { graph, ell, witness } => match witness {
                Separation::Frozen(c) => Ok(*ell >= 2
                    && graph.n() > 0
                    && c.k() == *ell
                    && is_proper(graph, c)?
                    && is_frozen(graph, c)),
                Separation::Pair(a, b) => Ok(!reaches(graph, *ell, a, b)?),
            },
            Fact::Connected { graph, ell } => Ok(Census::run(graph, *ell)?.connected()),
            Fact::NontrivialModule { graph, module } => {
                let m: VertexSet = module.iter().copied().collect();
                Ok(m.len() >= 2 && m.len() < graph.n() && is_module(graph, &m)?)
            }
            Fact::Movable {
                graph,
                coloring,
                vertex,
                color,
            } => {
                let ok = is_proper(graph, coloring)?
                    && *vertex < graph.n()
                    && (1..=coloring.k()).contains(color)
                    && coloring.get(*vertex) != *color
                    && graph.neighbors(*vertex).iter().all(|u| coloring.get(u) != *color);
                Ok(ok)
            }
            Fact::StructureFails { graph, statement } => Ok(statement.premise(graph) && !statement.conclusion(graph)),
            Fact::SiblingPaths {
                base,
                k,
                a,
                b,
                base_path,
                sibling_path,
            } => {
                let n = base.n();
                let restrict = |c: &Coloring| Coloring::new(c.as_slice()[..n].to_vec(), *k);
                let on_base = reaches(base, *k, &restrict(a)?, &restrict(b)?)?;
                let on_sibling = reaches(&base.sibling(), *k, a, b)?;
                Ok(on_base == *base_path && on_sibling == *sibling_path)
            }
            Fact::LiftRejected {
                base,
                k,
                path,
                start,
                target,
                ..
            } => Ok(match sibling_lift(base, *k, path, start, Some(target)) {
                Err(_) => true,
                Ok(s) => s.validate(&base.sibling(), target).is_err(),
            }),
            Fact::NoFailingPrimeSubgraph { graph, ell_max } => {
                Ok(campaigns::failing_prime_subgraph(graph, *ell_max as usize)?.is_none())
            }
        }
    }
}

/// A counterexample: a plain statement plus the facts that establish it.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub summary: String,
    pub facts: Vec<Fact>,
}

impl Certificate {
    pub fn revalidate(&self) -> Result<bool> {
        for f in &self.facts {
            if !f.revalidate()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A named check with expected and observed values.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl Assertion {
    pub fn eq<T: PartialEq + std::fmt::Debug>(name: &str, expected: T, observed: T) -> Self {
        Assertion {
            name: name.into(),
            pass: expected == observed,
            expected: format!("{expected:?}"),
            observed: format!("{observed:?}"),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Counts {
    pub checked: usize,
    pub ok: usize,
    pub counterexamples: usize,
    pub discrepancies: usize,
    pub excluded: usize,
    pub skipped: usize,
    pub vacuous: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub campaign: String,
    /// The statement checked, in words.
    pub statement: String,
    /// A failure here is a gate failure rather than evidence.
    pub must_pass: bool,
    pub parameters: BTreeMap<String, String>,
    pub corpus: CorpusSummary,
    pub counts: Counts,
    pub verdicts: Vec<Verdict>,
    pub counterexamples: Vec<Certificate>,
    /// Findings in parts of the campaign that are reported but not asserted.
    pub discrepancies: Vec<Certificate>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CampaignReport {
    pub(crate) fn new(campaign: &str, statement: &str, must_pass: bool) -> Self {
        CampaignReport {
            campaign: campaign.into(),
            statement: statement.into(),
            must_pass,
            parameters: BTreeMap::new(),
            corpus: CorpusSummary::default(),
            counts: Counts::default(),
            verdicts: Vec::new(),
            counterexamples: Vec::new(),
            discrepancies: Vec::new(),
            assertions: Vec::new(),
            passed: true,
            elapsed: Duration::ZERO,
        }
    }

    pub(crate) fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    /// Records a verdict and the certificates that go with it.
    pub(crate) fn record(&mut self, verdict: Verdict, certs: Vec<Certificate>) {
        let c = &mut self.counts;
        c.checked += 1;
        match verdict.status {
            Status::Ok => c.ok += 1,
            Status::Counterexample => c.counterexamples += 1,
            Status::Discrepancy => c.discrepancies += 1,
            Status::Excluded => c.excluded += 1,
            Status::Skipped => c.skipped += 1,
            Status::Vacuous => c.vacuous += 1,
        }
        if verdict.status == Status::Counterexample {
            self.counterexamples.extend(certs);
        } else {
            self.discrepancies.extend(certs);
        }
        self.verdicts.push(verdict);
    }

    /// Sorts verdicts canonically and settles `passed`.
    pub(crate) fn finish(mut self, elapsed: Duration) -> Self {
        self.verdicts.sort_by(|a, b| (a.n, &a.graph).cmp(&(b.n, &b.graph)));
        self.passed = self.counterexamples.is_empty() && self.assertions.iter().all(|a| a.pass);
        self.elapsed = elapsed;
        self
    }

    /// True when this is a gate and it failed.
    pub fn gate_failed(&self) -> bool {
        self.must_pass && !self.passed
    }

    /// Re-checks every certificate in the report.
    pub fn revalidate(&self) -> Result<bool> {
        for c in self.counterexamples.iter().chain(&self.discrepancies) {
            if !c.revalidate()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
