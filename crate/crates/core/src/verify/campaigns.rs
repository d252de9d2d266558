use std::collections::HashMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::corpus::{class_corpora, hereditary_levels, random_class_corpus, Corpus, CorpusSource};
use super::{CampaignReport, Certificate, Fact, Separation, Status, Verdict};
use crate::bitset::VertexSet;
use crate::coloring::{chi, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{are_isomorphic, invariant_hash, Graph};
use crate::io::emit_graph6;
use crate::lifting::sibling_lift;
use crate::modules::{all_nontrivial_modules, clique_skeleton, is_prime};
use crate::named;
use crate::patterns::{
    check_p5free_bipartite_staircase, contains_induced, has_universal_vertex, in_class, is_bipartite,
    is_co_bipartite, is_matched_co_bipartite, is_thin_spider, ClassSpec, PatternName,
};
use crate::reconfig::{find_path, Census, MAX_K};

/// Blowups with more vertices than this are skipped by the conjecture search
/// unless given as hints.
pub const BLOWUP_VERTEX_CAP: usize = 10;
const SKELETON_LIMIT: usize = 6;
const SIBLING_LIMIT: usize = 5;
const HEREDITARY_LIMIT: usize = 6;
const STRUCTURE_LIMIT: usize = 8;
const CONJECTURE_PRIME_LIMIT: usize = 6;
const CONJECTURE_MULT_LIMIT: usize = 3;
/// Walks per graph that the sibling campaign lifts and replays.
const LIFT_SAMPLES: usize = 8;

fn too_large(what: &'static str, got: usize, limit: usize) -> Error {
    Error::TooLarge { what, got, limit }
}

pub(crate) enum Mix {
    Mixing,
    Split(Separation),
    Guard(String),
}

/// Census verdict for `R_ℓ(g)`; a tripped guard is a value, not an error.
pub(crate) fn mixing(g: &Graph, ell: usize) -> Result<Mix> {
    if ell > MAX_K {
        return Ok(Mix::Guard(format!("palette {ell} exceeds {MAX_K}")));
    }
    match Census::run(g, ell as Color) {
        Ok(c) if c.connected() => Ok(Mix::Mixing),
        Ok(c) => {
            let r = c.report(Duration::ZERO);
            Ok(Mix::Split(match r.frozen.into_iter().next() {
                Some(f) => Separation::Frozen(f),
                None => {
                    let (a, b) = r.separated_pair.expect("disconnected");
                    Separation::Pair(a, b)
                }
            }))
        }
        Err(e @ (Error::StateSpaceTooLarge { .. } | Error::TooLarge { .. })) => Ok(Mix::Guard(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Shared memo of mixing verdicts keyed by graph6 and palette.
#[derive(Default)]
struct MixCache(Mutex<HashMap<(String, usize), Option<bool>>>);

impl MixCache {
    /// `None` when the guard tripped.
    fn get(&self, g: &Graph, ell: usize) -> Result<Option<bool>> {
        let key = (emit_graph6(g), ell);
        if let Some(&v) = self.0.lock().expect("poisoned").get(&key) {
            return Ok(v);
        }
        let v = match mixing(g, ell)? {
            Mix::Mixing => Some(true),
            Mix::Split(_) => Some(false),
            Mix::Guard(_) => None,
        };
        self.0.lock().expect("poisoned").insert(key, v);
        Ok(v)
    }
}

fn subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (1..1u64 << n).map(VertexSet::from_mask)
}

fn induced(g: &Graph, s: &VertexSet) -> Graph {
    g.induced_subgraph(s).expect("subset of V").0
}

fn set_label(s: &VertexSet) -> String {
    format!("{:?}", s.to_vec())
}

/// Keeps one graph per isomorphism class.
#[derive(Default)]
struct Seen(HashMap<u64, Vec<Graph>>);

impl Seen {
    fn fresh(&mut self, g: &Graph) -> bool {
        let b = self.0.entry(invariant_hash(g)).or_default();
        if b.iter().any(|h| are_isomorphic(h, g)) {
            return false;
        }
        b.push(g.clone());
        true
    }
}

fn theorem_class(spec: &ClassSpec) -> bool {
    [
        ClassSpec::p5_diamond_free(),
        ClassSpec::p5_house_bull_free(),
        ClassSpec::semi_p4_sparse(),
    ]
    .iter()
    .any(|t| t.forbidden.iter().all(|p| spec.forbidden.contains(p)))
}

fn not_mixing_cert(g: &Graph, ell: usize, witness: Separation, what: &str) -> Certificate {
    Certificate {
        summary: format!("{what}: R_{ell} of {} is disconnected", emit_graph6(g)),
        facts: vec![Fact::Disconnected {
            graph: g.clone(),
            ell: ell as Color,
            witness,
        }],
    }
}

type Item = (Verdict, Vec<Certificate>);

fn collect(report: &mut CampaignReport, items: Vec<Item>) {
    for (v, c) in items {
        report.record(v, c);
    }
}

fn class_item(g: &Graph, ell_extra: usize) -> Result<Item> {
    let x = chi(g);
    let mut certs = Vec::new();
    let mut notes = Vec::new();
    let mut guarded = false;
    for ell in x + 1..=x + ell_extra {
        match mixing(g, ell)? {
            Mix::Mixing => notes.push(format!("{ell}: mixing")),
            Mix::Split(w) => {
                notes.push(format!("{ell}: disconnected"));
                certs.push(not_mixing_cert(g, ell, w, "not recolorable"));
            }
            Mix::Guard(e) => {
                notes.push(format!("{ell}: skipped ({e})"));
                guarded = true;
            }
        }
    }
    let status = if !certs.is_empty() {
        Status::Counterexample
    } else if guarded {
        Status::Skipped
    } else {
        Status::Ok
    };
    Ok((Verdict::new(g, status, format!("chi {x}; {}", notes.join(", "))), certs))
}

fn run_class(spec: &ClassSpec, corpora: &[Corpus], ell_extra: usize, t: Instant) -> Result<CampaignReport> {
    let must = theorem_class(spec);
    let mut r = CampaignReport::new(
        "class-recolorable",
        &format!(
            "every {} graph is l-mixing for chi+1 <= l <= chi+{ell_extra}",
            spec.label()
        ),
        must,
    );
    r.param("class", spec.label());
    r.param("ell_extra", ell_extra);
    for c in corpora {
        r.corpus.add(c);
        let items = c
            .graphs
            .par_iter()
            .map(|g| class_item(g, ell_extra))
            .collect::<Result<Vec<_>>>()?;
        collect(&mut r, items);
    }
    Ok(r.finish(t.elapsed()))
}

/// Every graph of the class up to `n_max` vertices (exhaustive, `n_max <= 7`)
/// is `ℓ`-mixing for every `ℓ` from `χ+1` to `χ+ell_extra`. A gate when the
/// class lies inside one of the classes known to be recolorable.
pub fn campaign_class_recolorable(spec: &ClassSpec, n_max: usize, ell_extra: usize) -> Result<CampaignReport> {
    let t = Instant::now();
    if n_max > super::EXHAUSTIVE_LIMIT {
        return Err(too_large("exhaustive campaign order", n_max, super::EXHAUSTIVE_LIMIT));
    }
    let corpora = class_corpora(spec, n_max)?;
    let mut r = run_class(spec, &corpora[1..], ell_extra, t)?;
    r.param("n_max", n_max);
    Ok(r)
}

/// The same check on `count` seeded random members of the class on `n`
/// vertices.
pub fn campaign_class_random(
    spec: &ClassSpec,
    n: usize,
    count: usize,
    seed: u64,
    ell_extra: usize,
) -> Result<CampaignReport> {
    let t = Instant::now();
    let corpus = random_class_corpus(spec, n, count, seed)?;
    let mut r = run_class(spec, std::slice::from_ref(&corpus), ell_extra, t)?;
    r.param("n", n);
    r.param("count", count);
    r.param("seed", seed);
    Ok(r)
}

/// Finds a nonempty proper subset whose induced subgraph is not mixing at
/// some tested palette at most `ell`.
fn hypothesis_failure(g: &Graph, ell: usize, cache: &MixCache) -> Result<Option<(VertexSet, usize)>> {
    let full = (1u64 << g.n()) - 1;
    for s in subsets(g.n()).filter(|s| s.mask64() != full) {
        let sub = induced(g, &s);
        for l in chi(&sub) + 1..=ell {
            if cache.get(&sub, l)? != Some(true) {
                return Ok(Some((s, l)));
            }
        }
    }
    Ok(None)
}

fn connectivity_fact(g: &Graph, ell: usize, m: Mix) -> Fact {
    match m {
        Mix::Split(w) => Fact::Disconnected {
            graph: g.clone(),
            ell: ell as Color,
            witness: w,
        },
        _ => Fact::Connected {
            graph: g.clone(),
            ell: ell as Color,
        },
    }
}

fn skeleton_item(g: &Graph, ell_extra: usize, cache: &MixCache) -> Result<Item> {
    if !g.is_connected() || !g.complement().is_connected() {
        return Ok((Verdict::new(g, Status::Vacuous, "disconnected or a join"), vec![]));
    }
    if is_prime(g) {
        return Ok((Verdict::new(g, Status::Vacuous, "prime, so H = G"), vec![]));
    }
    let host = clique_skeleton(g)?.host;
    let x = chi(g);
    let mut notes = Vec::new();
    let mut certs = Vec::new();
    let mut tested = 0;
    for ell in x + 1..=x + ell_extra {
        if let Some((s, l)) = hypothesis_failure(g, ell, cache)? {
            notes.push(format!("{ell}: excluded, G[{}] not {l}-mixing", set_label(&s)));
            continue;
        }
        let (mg, mh) = (mixing(g, ell)?, mixing(&host, ell)?);
        if matches!(mg, Mix::Guard(_)) || matches!(mh, Mix::Guard(_)) {
            notes.push(format!("{ell}: guard"));
            continue;
        }
        tested += 1;
        let (cg, ch) = (matches!(mg, Mix::Mixing), matches!(mh, Mix::Mixing));
        notes.push(format!("{ell}: G {cg}, H {ch}"));
        if cg != ch {
            certs.push(Certificate {
                summary: format!("R_{ell}(G) connected = {cg} but R_{ell}(H) connected = {ch}"),
                facts: vec![connectivity_fact(g, ell, mg), connectivity_fact(&host, ell, mh)],
            });
        }
    }
    let status = if !certs.is_empty() {
        Status::Counterexample
    } else if tested > 0 {
        Status::Ok
    } else if notes.iter().any(|n| n.ends_with("guard")) {
        Status::Skipped
    } else {
        Status::Excluded
    };
    Ok((Verdict::new(g, status, format!("chi {x}; {}", notes.join("; "))), certs))
}

/// For connected, co-connected, non-prime graphs on at most `n_max <= 6`
/// vertices: `R_ℓ(G)` is connected iff `R_ℓ(H)` is, where `H` is the clique
/// skeleton host. A palette is excluded for a graph when some proper induced
/// subgraph fails to mix at some palette between its chromatic number plus
/// one and `ℓ`.
pub fn campaign_skeleton_equivalence(n_max: usize, ell_extra: usize) -> Result<CampaignReport> {
    let t = Instant::now();
    if n_max > SKELETON_LIMIT {
        return Err(too_large("skeleton campaign order", n_max, SKELETON_LIMIT));
    }
    let mut r = CampaignReport::new(
        "skeleton-equivalence",
        "R_l(G) is connected iff R_l(H) is connected, H the clique skeleton host, \
         when every proper induced subgraph mixes at the palettes tested",
        true,
    );
    r.param("n_max", n_max);
    r.param("ell_extra", ell_extra);
    let cache = MixCache::default();
    let levels = hereditary_levels(n_max, |_| true);
    for (n, graphs) in levels.into_iter().enumerate().skip(1) {
        let c = Corpus {
            source: CorpusSource::Exhaustive { n },
            graphs,
        };
        r.corpus.add(&c);
        let items = c
            .graphs
            .par_iter()
            .map(|g| skeleton_item(g, ell_extra, &cache))
            .collect::<Result<Vec<_>>>()?;
        collect(&mut r, items);
    }
    Ok(r.finish(t.elapsed()))
}

fn pendant_colors(base: &[Color], k: Color, pick_high: bool, rng: &mut ChaCha8Rng) -> Vec<Color> {
    base.iter()
        .map(|&x| {
            if pick_high {
                let c = rng.gen_range(1..k);
                if c >= x {
                    c + 1
                } else {
                    c
                }
            } else if x == 1 {
                2
            } else {
                1
            }
        })
        .collect()
}

fn sibling_item(g: &Graph, k: Color, seed: u64) -> Result<Item> {
    let n = g.n();
    let sib = g.sibling();
    let mut certs = Vec::new();
    let mut notes = Vec::new();
    if !is_prime(&sib) {
        let module = all_nontrivial_modules(&sib)?.into_iter().next().expect("not prime");
        certs.push(Certificate {
            summary: "sibling is not prime".into(),
            facts: vec![Fact::NontrivialModule {
                graph: sib.clone(),
                module: module.to_vec(),
            }],
        });
    }
    let (cg, ch) = match (Census::run(g, k), Census::run(&sib, k)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            let status = if certs.is_empty() {
                Status::Skipped
            } else {
                Status::Counterexample
            };
            return Ok((Verdict::new(g, status, format!("census skipped: {e}")), certs));
        }
    };
    // Each sibling component must restrict into one base component, and
    // distinct sibling components must restrict into distinct ones.
    let mut h_to_g: Vec<Option<(u32, usize)>> = vec![None; ch.num_components];
    let mut g_to_h: Vec<Option<(u32, usize)>> = vec![None; cg.num_components];
    let mut mismatches = Vec::new();
    for i in 0..ch.space.len() {
        let cs = ch.space.colors(i);
        let gc = cg.component_of(&cs[..n]).expect("restriction is proper");
        let hc = ch.component[i];
        match h_to_g[hc as usize] {
            None => h_to_g[hc as usize] = Some((gc, i)),
            Some((other, j)) if other != gc => mismatches.push((j, i, false, true)),
            _ => {}
        }
        match g_to_h[gc as usize] {
            None => g_to_h[gc as usize] = Some((hc, i)),
            Some((other, j)) if other != hc => mismatches.push((j, i, true, false)),
            _ => {}
        }
    }
    notes.push(format!(
        "{} base and {} sibling components",
        cg.num_components, ch.num_components
    ));
    let mut discrepancy = Vec::new();
    for &(i, j, base_path, sibling_path) in mismatches.iter().take(4) {
        let cert = Certificate {
            summary: format!("path on base = {base_path}, path on sibling = {sibling_path}"),
            facts: vec![Fact::SiblingPaths {
                base: g.clone(),
                k,
                a: ch.space.coloring(i),
                b: ch.space.coloring(j),
                base_path,
                sibling_path,
            }],
        };
        if k >= 4 {
            certs.push(cert);
        } else {
            discrepancy.push(cert);
        }
    }
    let total = cg.space.len();
    if k >= 4 && total > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ invariant_hash(g));
        let mut lifted = 0;
        for _ in 0..LIFT_SAMPLES {
            let i = rng.gen_range(0..total);
            let same: Vec<usize> = (0..total).filter(|&j| cg.component[j] == cg.component[i]).collect();
            let j = same[rng.gen_range(0..same.len())];
            let (a, b) = (cg.space.coloring(i), cg.space.coloring(j));
            let path = find_path(g, k, &a, &b)?.expect("same component");
            let mut start = a.as_slice().to_vec();
            start.extend(pendant_colors(a.as_slice(), k, false, &mut rng));
            let mut target = b.as_slice().to_vec();
            target.extend(pendant_colors(b.as_slice(), k, true, &mut rng));
            let (start, target) = (Coloring::new(start, k)?, Coloring::new(target, k)?);
            let outcome = sibling_lift(g, k, &path, &start, Some(&target))
                .and_then(|s| s.validate(&sib, &target).map(|_| s.len()));
            match outcome {
                Ok(_) => lifted += 1,
                Err(e) => certs.push(Certificate {
                    summary: "lifted schedule rejected".into(),
                    facts: vec![Fact::LiftRejected {
                        base: g.clone(),
                        k,
                        path,
                        start,
                        target,
                        error: e.to_string(),
                    }],
                }),
            }
        }
        notes.push(format!("{lifted} lifts replayed"));
    }
    let status = if !certs.is_empty() {
        Status::Counterexample
    } else if !discrepancy.is_empty() {
        Status::Discrepancy
    } else {
        Status::Ok
    };
    certs.extend(discrepancy);
    Ok((Verdict::new(g, status, notes.join("; ")), certs))
}

/// For connected graphs on at most `n_max <= 5` vertices: the sibling is
/// prime; a walk joins two sibling colorings in `R_k` iff one joins their
/// restrictions (checked on all pairs through component labels); sampled
/// walks lift to schedules that replay. Asserted only for `k >= 4`.
pub fn campaign_sibling(n_max: usize, k: Color, seed: u64) -> Result<CampaignReport> {
    let t = Instant::now();
    if n_max > SIBLING_LIMIT {
        return Err(too_large("sibling campaign order", n_max, SIBLING_LIMIT));
    }
    let mut r = CampaignReport::new(
        "sibling",
        "the sibling of a connected graph is prime, and R_k(G) and R_k(sibling) agree on path existence",
        k >= 4,
    );
    r.param("n_max", n_max);
    r.param("k", k);
    r.param("seed", seed);
    let levels = hereditary_levels(n_max, |_| true);
    for (n, graphs) in levels.into_iter().enumerate().skip(1) {
        let c = Corpus {
            source: CorpusSource::Exhaustive { n },
            graphs: graphs.into_iter().filter(Graph::is_connected).collect(),
        };
        r.corpus.add(&c);
        let items = c
            .graphs
            .par_iter()
            .map(|g| sibling_item(g, k, seed))
            .collect::<Result<Vec<_>>>()?;
        collect(&mut r, items);
    }
    Ok(r.finish(t.elapsed()))
}

/// A prime induced subgraph (possibly `g` itself) that is not `ℓ'`-mixing
/// for some `ℓ'` from its chromatic number plus one up to `ell_max`.
pub(crate) fn failing_prime_subgraph(g: &Graph, ell_max: usize) -> Result<Option<(VertexSet, usize)>> {
    if g.n() > 20 {
        return Err(too_large("vertex count for subset scan", g.n(), 20));
    }
    for s in subsets(g.n()) {
        let sub = induced(g, &s);
        if !is_prime(&sub) {
            continue;
        }
        for l in chi(&sub) + 1..=ell_max {
            if let Mix::Split(_) = mixing(&sub, l)? {
                return Ok(Some((s, l)));
            }
        }
    }
    Ok(None)
}

fn hereditary_item(g: &Graph, ell_extra: usize, asserted: bool) -> Result<Item> {
    let x = chi(g);
    let mut failing = None;
    for ell in x + 1..=x + ell_extra {
        if let Mix::Split(w) = mixing(g, ell)? {
            failing = Some((ell, w));
            break;
        }
    }
    let Some((ell, w)) = failing else {
        return Ok((Verdict::new(g, Status::Ok, "mixing at every tested palette"), vec![]));
    };
    let ell_max = x + ell_extra;
    match failing_prime_subgraph(g, ell_max)? {
        Some((s, l)) => Ok((
            Verdict::new(
                g,
                Status::Ok,
                format!("not {ell}-mixing; prime G[{}] not {l}-mixing", set_label(&s)),
            ),
            vec![],
        )),
        None => {
            let status = if asserted {
                Status::Counterexample
            } else {
                Status::Discrepancy
            };
            let cert = Certificate {
                summary: format!("not {ell}-mixing, yet every prime induced subgraph mixes up to {ell_max}"),
                facts: vec![
                    Fact::Disconnected {
                        graph: g.clone(),
                        ell: ell as Color,
                        witness: w,
                    },
                    Fact::NoFailingPrimeSubgraph {
                        graph: g.clone(),
                        ell_max: ell_max as Color,
                    },
                ],
            };
            Ok((Verdict::new(g, status, cert.summary.clone()), vec![cert]))
        }
    }
}

/// Within the 2K2-free and the diamond-free graphs on at most `n_max <= 6`
/// vertices: a graph that fails to mix at a tested palette has a prime
/// induced subgraph that fails to mix at a tested palette. All graphs are
/// also run, for information only.
pub fn campaign_hereditary_reduction(n_max: usize, ell_extra: usize) -> Result<CampaignReport> {
    let t = Instant::now();
    if n_max > HEREDITARY_LIMIT {
        return Err(too_large("hereditary campaign order", n_max, HEREDITARY_LIMIT));
    }
    let mut r = CampaignReport::new(
        "hereditary-reduction",
        "in the 2K2-free and the diamond-free classes, a non-mixing graph has a non-mixing prime induced subgraph",
        true,
    );
    r.param("n_max", n_max);
    r.param("ell_extra", ell_extra);
    for (spec, asserted) in [
        (ClassSpec::two_k2_free(), true),
        (ClassSpec::diamond_free(), true),
        (ClassSpec::all_graphs(), false),
    ] {
        for c in &class_corpora(&spec, n_max)?[1..] {
            r.corpus.add(c);
            let items = c
                .graphs
                .par_iter()
                .map(|g| hereditary_item(g, ell_extra, asserted))
                .collect::<Result<Vec<_>>>()?;
            collect(&mut r, items);
        }
    }
    Ok(r.finish(t.elapsed()))
}

/// Result of one side of the bounded conjecture comparison.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SideOutcome {
    /// Every tested graph mixed at every tested palette.
    Pass { tested: usize, skipped: usize },
    Fail {
        tested: usize,
        skipped: usize,
        /// Multiplicities or vertex subset that produced the witness.
        at: Vec<usize>,
        certificate: Certificate,
    },
}

impl SideOutcome {
    pub fn failed(&self) -> bool {
        matches!(self, SideOutcome::Fail { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureEvidence {
    pub graph: Graph,
    pub blowups: SideOutcome,
    pub induced_subgraphs: SideOutcome,
    /// Both sides pass or both fail. Evidence only: both are bounded.
    pub consistent: bool,
}

/// Searches `candidates` for a graph that fails to mix at some palette from
/// its chromatic number plus one to plus `ell_extra`.
fn search_side(
    candidates: impl Iterator<Item = (Vec<usize>, Option<Graph>)>,
    ell_extra: usize,
    what: &str,
) -> Result<SideOutcome> {
    let (mut tested, mut skipped) = (0, 0);
    let mut seen = Seen::default();
    for (at, g) in candidates {
        let Some(g) = g else {
            skipped += 1;
            continue;
        };
        if !seen.fresh(&g) {
            continue;
        }
        tested += 1;
        let x = chi(&g);
        for ell in x + 1..=x + ell_extra {
            match mixing(&g, ell)? {
                Mix::Mixing => {}
                Mix::Split(w) => {
                    let certificate = not_mixing_cert(&g, ell, w, what);
                    return Ok(SideOutcome::Fail {
                        tested,
                        skipped,
                        at,
                        certificate,
                    });
                }
                Mix::Guard(_) => {
                    skipped += 1;
                    break;
                }
            }
        }
    }
    Ok(SideOutcome::Pass { tested, skipped })
}

/// Bounded comparison for one graph: blowups with multiplicities at most
/// `mult_max` (the `hints` first, then by total size, skipping those above
/// [`BLOWUP_VERTEX_CAP`]) against all induced subgraphs.
pub fn conjecture_evidence(
    g: &Graph,
    mult_max: usize,
    ell_extra: usize,
    hints: &[Vec<usize>],
) -> Result<ConjectureEvidence> {
    let n = g.n();
    if n > CONJECTURE_PRIME_LIMIT + 1 {
        return Err(too_large("conjecture graph order", n, CONJECTURE_PRIME_LIMIT + 1));
    }
    for h in hints {
        if h.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: h.len(),
            });
        }
    }
    let mut vectors: Vec<Vec<usize>> = (0..mult_max.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let m = code % mult_max + 1;
                    code /= mult_max;
                    m
                })
                .collect()
        })
        .collect();
    vectors.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    let hinted = hints.iter().map(|h| (h.clone(), true));
    let blowups = hinted
        .chain(vectors.into_iter().map(|v| (v, false)))
        .map(|(v, hint)| {
            let total: usize = v.iter().sum();
            let b = (hint || total <= BLOWUP_VERTEX_CAP)
                .then(|| g.blowup(&v))
                .transpose()?;
            Ok((v, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let left = search_side(blowups.into_iter(), ell_extra, "blowup not recolorable")?;
    let subs = subsets(n).map(|s| (s.to_vec(), Some(induced(g, &s))));
    let right = search_side(subs, ell_extra, "induced subgraph not recolorable")?;
    Ok(ConjectureEvidence {
        graph: g.clone(),
        consistent: left.failed() == right.failed(),
        blowups: left,
        induced_subgraphs: right,
    })
}

/// Evidence only: for each prime graph on at most `n_prime_max <= 6`
/// vertices, compares bounded recolorability of its blowups (multiplicities
/// at most `mult_max <= 3`) with that of its induced subgraphs.
pub fn campaign_conjecture(n_prime_max: usize, mult_max: usize, ell_extra: usize) -> Result<CampaignReport> {
    let t = Instant::now();
    if n_prime_max > CONJECTURE_PRIME_LIMIT {
        return Err(too_large("prime order for conjecture search", n_prime_max, CONJECTURE_PRIME_LIMIT));
    }
    if mult_max > CONJECTURE_MULT_LIMIT || mult_max == 0 {
        return Err(too_large("blowup multiplicity", mult_max, CONJECTURE_MULT_LIMIT));
    }
    let mut r = CampaignReport::new(
        "conjecture",
        "EVIDENCE ONLY: all bounded blowups mix iff all induced subgraphs mix, for prime graphs",
        false,
    );
    r.param("n_prime_max", n_prime_max);
    r.param("mult_max", mult_max);
    r.param("ell_extra", ell_extra);
    r.param("blowup_vertex_cap", BLOWUP_VERTEX_CAP);
    let levels = hereditary_levels(n_prime_max, |_| true);
    for (n, graphs) in levels.into_iter().enumerate().skip(1) {
        let c = Corpus {
            source: CorpusSource::Exhaustive { n },
            graphs: graphs.into_iter().filter(is_prime).collect(),
        };
        r.corpus.add(&c);
        let items = c
            .graphs
            .par_iter()
            .map(|g| {
                let ev = conjecture_evidence(g, mult_max, ell_extra, &[])?;
                let describe = |s: &SideOutcome| match s {
                    SideOutcome::Pass { tested, skipped } => format!("pass ({tested} tested, {skipped} skipped)"),
                    SideOutcome::Fail { at, .. } => format!("fail at {at:?}"),
                };
                let detail = format!(
                    "blowups {}; induced subgraphs {}",
                    describe(&ev.blowups),
                    describe(&ev.induced_subgraphs)
                );
                if ev.consistent {
                    return Ok((Verdict::new(g, Status::Ok, detail), vec![]));
                }
                let certs = [ev.blowups, ev.induced_subgraphs]
                    .into_iter()
                    .filter_map(|s| match s {
                        SideOutcome::Fail { certificate, .. } => Some(certificate),
                        SideOutcome::Pass { .. } => None,
                    })
                    .collect();
                Ok((Verdict::new(g, Status::Discrepancy, detail), certs))
            })
            .collect::<Result<Vec<_>>>()?;
        collect(&mut r, items);
    }
    Ok(r.finish(t.elapsed()))
}

/// Structure statements for prime graphs in the small classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureStatement {
    /// Prime (P5, diamond)-free with an induced 2K2: matched co-bipartite.
    MatchedCoBipartite,
    /// Prime (P5, house, bull)-free, at least six vertices, no universal
    /// vertex: bipartite or co-bipartite.
    BipartiteOrCoBipartite,
    /// Prime (P5, house)-free: C5 itself or C5-free.
    C5OrC5Free,
    /// Prime (P5, C5, co-fork)-free: it or its complement is bipartite or a
    /// thin spider.
    BipartiteOrThinSpider,
    /// Prime P5-free bipartite: the staircase shape.
    Staircase,
}

impl StructureStatement {
    pub const ALL: [StructureStatement; 5] = [
        StructureStatement::MatchedCoBipartite,
        StructureStatement::BipartiteOrCoBipartite,
        StructureStatement::C5OrC5Free,
        StructureStatement::BipartiteOrThinSpider,
        StructureStatement::Staircase,
    ];

    pub fn class(self) -> ClassSpec {
        match self {
            Self::MatchedCoBipartite => ClassSpec::p5_diamond_free(),
            Self::BipartiteOrCoBipartite => ClassSpec::p5_house_bull_free(),
            Self::C5OrC5Free => ClassSpec::p5_house_free(),
            Self::BipartiteOrThinSpider => ClassSpec::semi_p4_sparse(),
            Self::Staircase => ClassSpec::p5_free(),
        }
    }

    /// Prime on at least three vertices, in the class, plus the extra
    /// conditions of the statement.
    pub fn premise(self, g: &Graph) -> bool {
        let extra = match self {
            Self::MatchedCoBipartite => matches!(contains_induced(g, &named::two_k2()), Ok(Some(_))),
            Self::BipartiteOrCoBipartite => g.n() >= 6 && has_universal_vertex(g).is_none(),
            Self::Staircase => is_bipartite(g).is_some(),
            Self::C5OrC5Free | Self::BipartiteOrThinSpider => true,
        };
        g.n() >= 3 && extra && in_class(g, &self.class()) && is_prime(g)
    }

    pub fn conclusion(self, g: &Graph) -> bool {
        match self {
            Self::MatchedCoBipartite => is_matched_co_bipartite(g).unwrap_or(false),
            Self::BipartiteOrCoBipartite => is_bipartite(g).is_some() || is_co_bipartite(g),
            Self::C5OrC5Free => {
                let c5 = PatternName::C5.graph();
                are_isomorphic(g, &c5) || matches!(contains_induced(g, &c5), Ok(None))
            }
            Self::BipartiteOrThinSpider => [g.clone(), g.complement()]
                .iter()
                .any(|h| is_bipartite(h).is_some() || is_thin_spider(h).unwrap_or(false)),
            Self::Staircase => check_p5free_bipartite_staircase(g).unwrap_or(false),
        }
    }
}

fn structure_items(stmt: StructureStatement, graphs: &[Graph]) -> Vec<Option<Item>> {
    graphs
        .par_iter()
        .map(|g| {
            if !stmt.premise(g) {
                return None;
            }
            let tag = format!("{stmt:?}");
            Some(if stmt.conclusion(g) {
                (Verdict::new(g, Status::Ok, tag), vec![])
            } else {
                let cert = Certificate {
                    summary: format!("{tag} fails"),
                    facts: vec![Fact::StructureFails {
                        graph: g.clone(),
                        statement: stmt,
                    }],
                };
                (Verdict::new(g, Status::Counterexample, tag), vec![cert])
            })
        })
        .collect()
}

/// Checks the structure statements on every prime class member with at most
/// `n_max <= 8` vertices, and the staircase shape on prime P5-free bipartite
/// graphs with at most `staircase_n_max <= 10` vertices. Graphs outside a
/// statement's premise count as vacuous and get no verdict line.
pub fn campaign_structure(n_max: usize, staircase_n_max: usize) -> Result<CampaignReport> {
    let t = Instant::now();
    if n_max > STRUCTURE_LIMIT {
        return Err(too_large("structure campaign order", n_max, STRUCTURE_LIMIT));
    }
    if staircase_n_max > super::CLASS_LIMIT {
        return Err(too_large("staircase campaign order", staircase_n_max, super::CLASS_LIMIT));
    }
    let mut r = CampaignReport::new(
        "structure",
        "prime graphs of the small classes have the stated structure",
        true,
    );
    r.param("n_max", n_max);
    r.param("staircase_n_max", staircase_n_max);
    for stmt in StructureStatement::ALL {
        let corpora = if stmt == StructureStatement::Staircase {
            let p5 = ClassSpec::p5_free();
            hereditary_levels(staircase_n_max, |g| is_bipartite(g).is_some() && in_class(g, &p5))
                .into_iter()
                .enumerate()
                .map(|(n, graphs)| Corpus {
                    source: CorpusSource::Class {
                        class: "P5-free bipartite".into(),
                        n,
                    },
                    graphs,
                })
                .collect()
        } else {
            class_corpora(&stmt.class(), n_max)?
        };
        for c in &corpora[1..] {
            r.corpus.add(c);
            for item in structure_items(stmt, &c.graphs) {
                match item {
                    Some((v, certs)) => r.record(v, certs),
                    None => r.counts.vacuous += 1,
                }
            }
        }
    }
    Ok(r.finish(t.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_gate_small() {
        let r = campaign_class_recolorable(&ClassSpec::p5_diamond_free(), 5, 1).unwrap();
        assert!(r.must_pass && r.passed, "{:?}", r.counterexamples);
        assert!(r.counts.ok > 0);
    }

    #[test]
    fn all_graphs_have_counterexamples() {
        // nothing on five vertices fails at chi + 1; the hexagon is the first
        let r = campaign_class_recolorable(&ClassSpec::all_graphs(), 6, 1).unwrap();
        assert!(!r.must_pass);
        let c6 = named::cycle(6);
        assert!(r.counterexamples.iter().any(|c| match &c.facts[0] {
            Fact::Disconnected { graph, ell, .. } => *ell == 3 && are_isomorphic(graph, &c6),
            _ => false,
        }));
        assert!(r.revalidate().unwrap());
        assert!(r.revalidate().unwrap());
    }

    #[test]
    fn structure_small() {
        let r = campaign_structure(6, 6).unwrap();
        assert!(r.revalidate().unwrap());
        // the two statements whose wording admits small exceptions
        for c in &r.counterexamples {
            let Fact::StructureFails { statement, .. } = c.facts[0] else {
                panic!("unexpected fact")
            };
            assert!(matches!(
                statement,
                StructureStatement::MatchedCoBipartite | StructureStatement::BipartiteOrThinSpider
            ));
        }
        assert!(r.counts.ok > 0);
    }

    #[test]
    fn conjecture_bounds() {
        assert!(matches!(campaign_conjecture(7, 2, 1), Err(Error::TooLarge { .. })));
        assert!(matches!(campaign_conjecture(4, 4, 1), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn five_cycle_evidence_is_consistent() {
        let ev = conjecture_evidence(&named::cycle(5), 2, 1, &[]).unwrap();
        assert!(!ev.blowups.failed() && !ev.induced_subgraphs.failed());
        assert!(ev.consistent);
    }
}
