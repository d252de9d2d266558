//! Small-graph corpora: every isomorphism class of a hereditary family up to
//! a given order, or seeded random members of a pattern class.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{find_k_coloring, is_proper_slice, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{are_isomorphic, invariant_hash, Graph};
use crate::patterns::{in_class, ClassSpec};

/// Largest order for exhaustive enumeration of all graphs.
pub const EXHAUSTIVE_LIMIT: usize = 7;
/// Largest order for class-restricted enumeration.
pub const CLASS_LIMIT: usize = 10;

/// Consecutive rejected vertex proposals before a random graph is restarted.
const RESTART_AFTER: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CorpusSource {
    Exhaustive {
        n: usize,
    },
    /// Every isomorphism class on `n` vertices inside a hereditary family.
    Class {
        class: String,
        n: usize,
    },
    Random {
        class: String,
        n: usize,
        count: usize,
        seed: u64,
        /// Accepted vertex proposals over all proposals.
        acceptance_rate: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub source: CorpusSource,
    pub graphs: Vec<Graph>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn summary(&self) -> CorpusSummary {
        CorpusSummary {
            sources: vec![self.source.clone()],
            size: self.len(),
        }
    }
}

/// What a campaign ran over.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub sources: Vec<CorpusSource>,
    pub size: usize,
}

impl CorpusSummary {
    pub fn add(&mut self, c: &Corpus) {
        self.sources.push(c.source.clone());
        self.size += c.len();
    }
}

/// Keeps one graph per isomorphism class, in first-seen order.
#[derive(Default)]
struct Dedup {
    graphs: Vec<Graph>,
    buckets: HashMap<u64, Vec<usize>>,
}

impl Dedup {
    fn offer(&mut self, g: Graph) {
        let h = invariant_hash(&g);
        let bucket = self.buckets.entry(h).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&self.graphs[i], &g)) {
            return;
        }
        bucket.push(self.graphs.len());
        self.graphs.push(g);
    }
}

fn add_vertex(g: &Graph, mask: u64) -> Graph {
    let n = g.n();
    let mut h = g.disjoint_union(&Graph::empty(1));
    for u in 0..n {
        if mask >> u & 1 == 1 {
            h.add_edge(u, n);
        }
    }
    h
}

/// Isomorphism classes of orders `0..=n_max` satisfying `keep`, which must be
/// closed under vertex deletion: each member extends a smaller member by one
/// vertex, so the levels are built by extension and deduplication.
pub fn hereditary_levels<F>(n_max: usize, keep: F) -> Vec<Vec<Graph>>
where
    F: Fn(&Graph) -> bool + Sync,
{
    let mut levels = vec![vec![Graph::empty(0)]];
    for n in 1..=n_max {
        let prev = &levels[n - 1];
        let candidates: Vec<Graph> = prev
            .par_iter()
            .flat_map_iter(|g| (0..1u64 << (n - 1)).map(move |m| add_vertex(g, m)))
            .filter(|h| keep(h))
            .collect();
        let mut d = Dedup::default();
        for h in candidates {
            d.offer(h);
        }
        levels.push(d.graphs);
    }
    levels
}

/// Every graph on `n` vertices up to isomorphism.
pub fn exhaustive_corpus(n: usize) -> Result<Corpus> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive corpus order",
            got: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut levels = hereditary_levels(n, |_| true);
    Ok(Corpus {
        source: CorpusSource::Exhaustive { n },
        graphs: levels.swap_remove(n),
    })
}

/// Every member of `spec` on `n` vertices up to isomorphism.
pub fn class_corpus(spec: &ClassSpec, n: usize) -> Result<Corpus> {
    Ok(class_corpora(spec, n)?.swap_remove(n))
}

/// Class corpora for every order `0..=n_max`.
pub fn class_corpora(spec: &ClassSpec, n_max: usize) -> Result<Vec<Corpus>> {
    let limit = if spec.forbidden.is_empty() {
        EXHAUSTIVE_LIMIT
    } else {
        CLASS_LIMIT
    };
    if n_max > limit {
        return Err(Error::TooLarge {
            what: "class corpus order",
            got: n_max,
            limit,
        });
    }
    let levels = hereditary_levels(n_max, |g| in_class(g, spec));
    Ok(levels
        .into_iter()
        .enumerate()
        .map(|(n, graphs)| Corpus {
            source: CorpusSource::Class {
                class: spec.label(),
                n,
            },
            graphs,
        })
        .collect())
}

/// `count` seeded random members of `spec` on `n` vertices. Vertices are
/// added one at a time with a random neighbourhood; a proposal that leaves
/// the class is rejected and redrawn. Each graph uses its own edge density.
pub fn random_class_corpus(spec: &ClassSpec, n: usize, count: usize, seed: u64) -> Result<Corpus> {
    if n > 64 {
        return Err(Error::TooLarge {
            what: "random corpus order",
            got: n,
            limit: 64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut proposed, mut accepted) = (0u64, 0u64);
    let mut graphs = Vec::with_capacity(count);
    let give_up = 4096 * (count as u64 + 1) * (n as u64 + 1);
    while graphs.len() < count {
        if proposed > give_up {
            return Err(Error::InvalidArgument(format!(
                "found {} of {count} members of {} on {n} vertices after {proposed} proposals \
                 (acceptance rate {:.4}); the class may be empty at this order",
                graphs.len(),
                spec.label(),
                accepted as f64 / proposed as f64
            )));
        }
        let p: f64 = rng.gen_range(0.15..0.85);
        let mut g = Graph::empty(0);
        let mut misses = 0;
        while g.n() < n && misses < RESTART_AFTER {
            let mask = (0..g.n()).fold(0u64, |m, u| m | (rng.gen_bool(p) as u64) << u);
            let h = add_vertex(&g, mask);
            proposed += 1;
            if in_class(&h, spec) {
                accepted += 1;
                g = h;
                misses = 0;
            } else {
                misses += 1;
            }
        }
        if g.n() == n {
            graphs.push(g);
        }
    }
    Ok(Corpus {
        source: CorpusSource::Random {
            class: spec.label(),
            n,
            count,
            seed,
            acceptance_rate: if proposed == 0 {
                1.0
            } else {
                accepted as f64 / proposed as f64
            },
        },
        graphs,
    })
}

/// A random proper `k`-coloring: randomized greedy over a shuffled vertex
/// order, falling back to a random walk from an exact coloring.
pub fn random_proper_coloring<R: Rng>(g: &Graph, k: Color, rng: &mut R) -> Option<Coloring> {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..64 {
        order.shuffle(rng);
        let mut c = vec![0 as Color; n];
        let ok = order.iter().all(|&v| {
            let free: Vec<Color> = (1..=k)
                .filter(|&x| g.neighbors(v).iter().all(|u| c[u] != x))
                .collect();
            match free.choose(rng) {
                Some(&x) => {
                    c[v] = x;
                    true
                }
                None => false,
            }
        });
        if ok {
            debug_assert!(is_proper_slice(g, &c));
            return Some(Coloring::new_unchecked(c, k));
        }
    }
    let mut c = find_k_coloring(g, k as usize)?.with_palette(k).ok()?.into_vec();
    for _ in 0..4 * n * n {
        let v = rng.gen_range(0..n);
        let x = rng.gen_range(1..=k);
        if g.neighbors(v).iter().all(|u| c[u] != x) {
            c[v] = x;
        }
    }
    Some(Coloring::new_unchecked(c, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_counts() {
        let levels = hereditary_levels(6, |_| true);
        let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn exhaustive_limits() {
        assert_eq!(exhaustive_corpus(1).unwrap().len(), 1);
        assert!(matches!(exhaustive_corpus(8), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn class_corpus_filters() {
        let c = class_corpus(&ClassSpec::two_k2_free(), 4).unwrap();
        // of the 11 graphs on four vertices only 2K2 itself is excluded
        assert_eq!(c.len(), 10);
        assert!(c.graphs.iter().all(|g| g.n() == 4));
    }

    #[test]
    fn random_members_are_in_class() {
        let spec = ClassSpec::p5_diamond_free();
        let c = random_class_corpus(&spec, 9, 12, 7).unwrap();
        assert_eq!(c.len(), 12);
        assert!(c.graphs.iter().all(|g| g.n() == 9 && in_class(g, &spec)));
        let again = random_class_corpus(&spec, 9, 12, 7).unwrap();
        assert_eq!(c.graphs, again.graphs);
        match c.source {
            CorpusSource::Random { acceptance_rate, .. } => assert!(acceptance_rate > 0.0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn random_colorings_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = crate::named::cycle(7);
        for _ in 0..20 {
            let c = random_proper_coloring(&g, 3, &mut rng).unwrap();
            assert!(is_proper_slice(&g, c.as_slice()));
        }
        assert!(random_proper_coloring(&g, 2, &mut rng).is_none());
    }
}
