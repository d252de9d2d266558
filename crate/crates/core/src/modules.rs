//! Modules, the maximal-module partition, primality and the two skeletons.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::{chromatic_number, Coloring};
use crate::error::{Error, Result};
use crate::graph::{blowup_ranges, Graph};

/// Largest `n` accepted by the exhaustive subset scan.
pub const SUBSET_SCAN_LIMIT: usize = 20;

pub fn is_module(g: &Graph, s: &VertexSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(module_check(g, s))
}

fn module_check(g: &Graph, s: &VertexSet) -> bool {
    let size = s.len();
    (0..g.n()).filter(|&v| !s.contains(v)).all(|v| {
        let hits = g.neighbors(v).intersection_len(s);
        hits == 0 || hits == size
    })
}

/// Every proper subset with at least two vertices that is a module, by
/// exhaustive subset scan. This is the reference oracle for the partition
/// algorithm and only runs for `n <= 20`.
pub fn all_nontrivial_modules(g: &Graph) -> Result<Vec<VertexSet>> {
    let n = g.n();
    if n > SUBSET_SCAN_LIMIT {
        return Err(Error::TooLarge {
            what: "vertex count for subset scan",
            got: n,
            limit: SUBSET_SCAN_LIMIT,
        });
    }
    let full = (1u64 << n) - 1;
    let rows: Vec<u64> = (0..n).map(|v| g.neighbors(v).mask64()).collect();
    let mut out = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        let ok = (0..n).filter(|&v| mask & (1 << v) == 0).all(|v| {
            let hit = rows[v] & mask;
            hit == 0 || hit == mask
        });
        if ok {
            out.push(VertexSet::from_mask(mask));
        }
    }
    Ok(out)
}

/// Smallest module containing `seed`: repeatedly absorb every outside vertex
/// that sees some but not all of the current set.
pub fn module_closure(g: &Graph, seed: &VertexSet) -> VertexSet {
    let mut s = seed.clone();
    loop {
        let size = s.len();
        let splitters: VertexSet = (0..g.n())
            .filter(|&v| !s.contains(v))
            .filter(|&v| {
                let hits = g.neighbors(v).intersection_len(&s);
                hits != 0 && hits != size
            })
            .collect();
        if splitters.is_empty() {
            return s;
        }
        s = s.union(&splitters);
    }
}

/// Partition of `V(G)` into maximal modules, blocks ordered by minimum vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulePartition {
    pub blocks: Vec<VertexSet>,
}

impl ModulePartition {
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every vertex.
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (p, b) in self.blocks.iter().enumerate() {
            for v in b {
                out[v] = p;
            }
        }
        out
    }

    /// Minimum vertex of each block.
    pub fn representatives(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| b.first().expect("blocks are nonempty"))
            .collect()
    }
}

pub(crate) fn is_join(g: &Graph) -> bool {
    !g.complement().is_connected()
}

/// Requires `g` connected and co-connected. Two vertices share a block iff the
/// smallest module containing both is proper; in a graph whose quotient is
/// prime every proper module lies inside a single maximal module, so this
/// relation is exactly "same maximal module".
pub fn maximal_module_partition(g: &Graph) -> Result<ModulePartition> {
    let n = g.n();
    if n == 0 || !g.is_connected() || is_join(g) {
        return Err(Error::NotPrimeEligible);
    }
    let full = g.vertices();
    let mut assigned = vec![false; n];
    let mut blocks = Vec::new();
    for u in 0..n {
        if assigned[u] {
            continue;
        }
        let mut block = VertexSet::singleton(u);
        for v in (u + 1)..n {
            if assigned[v] {
                continue;
            }
            let pair: VertexSet = [u, v].into_iter().collect();
            if module_closure(g, &pair) != full {
                block.insert(v);
            }
        }
        for v in &block {
            assigned[v] = true;
        }
        blocks.push(block);
    }
    let part = ModulePartition { blocks };
    debug_assert!(part.blocks.iter().all(|b| module_check(g, b)));
    Ok(part)
}

/// Partition assembled from the subset-scan oracle: inclusion-maximal
/// nontrivial modules, plus singletons for uncovered vertices.
pub fn oracle_partition(g: &Graph) -> Result<ModulePartition> {
    let mods = all_nontrivial_modules(g)?;
    let mut blocks: Vec<VertexSet> = mods
        .iter()
        .filter(|m| !mods.iter().any(|o| o != *m && m.is_subset(o)))
        .cloned()
        .collect();
    let covered = blocks.iter().fold(VertexSet::new(), |acc, b| acc.union(b));
    blocks.extend((0..g.n()).filter(|&v| !covered.contains(v)).map(VertexSet::singleton));
    blocks.sort_by_key(|b| b.first());
    Ok(ModulePartition { blocks })
}

/// Graphs on at most two vertices are prime (no proper subset has two
/// vertices). Otherwise a disconnected graph or a join always has a
/// nontrivial module.
pub fn is_prime(g: &Graph) -> bool {
    if g.n() <= 2 {
        return true;
    }
    match maximal_module_partition(g) {
        Ok(p) => p.m() == g.n(),
        Err(_) => false,
    }
}

/// The skeleton: the subgraph induced by the minimum vertex of each maximal
/// module. Skeleton vertex `p` stands for block `p`.
pub fn skeleton(g: &Graph) -> Result<(Graph, ModulePartition)> {
    let part = maximal_module_partition(g)?;
    let reps: VertexSet = part.representatives().into_iter().collect();
    let (sk, _) = g.induced(&reps);
    Ok((sk, part))
}

/// The clique skeleton together with its correspondence to `G`.
#[derive(Debug, Clone, Serialize)]
pub struct CliqueSkeletonMap {
    pub host: Graph,
    /// `Q_p` as vertex sets of `host`; consecutive ranges in block order.
    pub cliques: Vec<VertexSet>,
    /// `k_p = χ(G[S_p])`.
    pub sizes: Vec<usize>,
    pub source_blocks: ModulePartition,
    pub skeleton: Graph,
    /// An optimal coloring of each `G[S_p]` (colors `1..=k_p`, indexed by the
    /// block's vertices in increasing order).
    #[serde(skip)]
    pub block_colorings: Vec<Coloring>,
}

pub fn clique_skeleton(g: &Graph) -> Result<CliqueSkeletonMap> {
    let (sk, part) = skeleton(g)?;
    let mut sizes = Vec::with_capacity(part.m());
    let mut block_colorings = Vec::with_capacity(part.m());
    for b in &part.blocks {
        let (sub, _) = g.induced(b);
        let (k, c) = chromatic_number(&sub)?;
        sizes.push(k);
        block_colorings.push(c);
    }
    let host = sk.blowup(&sizes)?;
    let cliques = blowup_ranges(&sizes)
        .into_iter()
        .map(|r| r.collect())
        .collect();
    Ok(CliqueSkeletonMap {
        host,
        cliques,
        sizes,
        source_blocks: part,
        skeleton: sk,
        block_colorings,
    })
}
