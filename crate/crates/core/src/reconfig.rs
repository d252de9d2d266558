//! Exhaustive analysis of `R_k(G)`.
//!
//! All proper `k`-colorings are enumerated in lexicographic order into a flat
//! arena of packed keys. Vertex 0 occupies the most significant field, so the
//! arena is sorted and neighbours are located by binary search. Components
//! come from a union-find over single-vertex moves; the root of every
//! component is its smallest index, which makes labels independent of the
//! order in which moves are processed and therefore of the worker count.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{
    chi, count_colorings, for_each_coloring, for_each_coloring_with_prefix, is_proper, Color,
    ColorSet, Coloring,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::schedule::RecoloringSchedule;

pub const MAX_K: usize = 16;
pub const MAX_N: usize = 64;
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 27;
pub const DEFAULT_PATH_BUDGET: u64 = 1 << 24;
pub const BUDGET_ENV: &str = "RECOLOR_MEM_BUDGET";
/// Frozen colorings listed in a report; the count is always exact.
pub const FROZEN_LISTED: usize = 1024;

/// The census guard: `RECOLOR_MEM_BUDGET` if set and parseable, else 2^27.
pub fn state_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_STATE_BUDGET)
}

fn check_limits(g: &Graph, k: usize) -> Result<()> {
    if g.n() > MAX_N {
        return Err(Error::TooLarge {
            what: "vertex count for reconfiguration search",
            got: g.n(),
            limit: MAX_N,
        });
    }
    if k > MAX_K {
        return Err(Error::TooLarge {
            what: "palette for reconfiguration search",
            got: k,
            limit: MAX_K,
        });
    }
    Ok(())
}

/// Bit layout of packed colorings.
#[derive(Debug, Clone, Copy)]
struct Layout {
    n: usize,
    bits: usize,
    words: usize,
}

impl Layout {
    fn new(n: usize, k: usize) -> Self {
        let bits = (usize::BITS - k.saturating_sub(1).leading_zeros()).max(1) as usize;
        let words = (n * bits).div_ceil(64).max(1);
        Layout { n, bits, words }
    }

    fn mask(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    fn get(&self, key: &[u64], v: usize) -> Color {
        let o = v * self.bits;
        let (i, s) = (o / 64, o % 64);
        let raw = if s + self.bits <= 64 {
            key[i] >> (64 - s - self.bits)
        } else {
            let lo = s + self.bits - 64;
            (key[i] << lo) | (key[i + 1] >> (64 - lo))
        };
        (raw & self.mask()) as Color + 1
    }

    fn set(&self, key: &mut [u64], v: usize, c: Color) {
        let val = (c - 1) as u64;
        let o = v * self.bits;
        let (i, s) = (o / 64, o % 64);
        if s + self.bits <= 64 {
            let sh = 64 - s - self.bits;
            key[i] = (key[i] & !(self.mask() << sh)) | (val << sh);
        } else {
            let lo = s + self.bits - 64;
            let hi = self.bits - lo;
            key[i] = (key[i] & !((1u64 << hi) - 1)) | (val >> lo);
            let sh = 64 - lo;
            key[i + 1] = (key[i + 1] & !(((1u64 << lo) - 1) << sh)) | ((val & ((1 << lo) - 1)) << sh);
        }
    }

    fn encode_into(&self, colors: &[Color], out: &mut Vec<u64>) {
        let base = out.len();
        out.resize(base + self.words, 0);
        for (v, &c) in colors.iter().enumerate() {
            self.set(&mut out[base..], v, c);
        }
    }
}

/// Every proper `k`-coloring of a graph, packed and sorted.
#[derive(Debug, Clone)]
pub struct StateSpace {
    layout: Layout,
    k: Color,
    data: Vec<u64>,
}

impl StateSpace {
    /// Enumerates with the default guard.
    pub fn build(g: &Graph, k: Color) -> Result<Self> {
        Self::build_with_budget(g, k, state_budget())
    }

    pub fn build_with_budget(g: &Graph, k: Color, budget: u64) -> Result<Self> {
        check_limits(g, k as usize)?;
        // Counting pass first so nothing is stored when the space is too big.
        if count_colorings(g, k, budget).is_none() {
            return Err(Error::StateSpaceTooLarge {
                count: budget + 1,
                budget,
            });
        }
        let layout = Layout::new(g.n(), k as usize);
        let prefixes = shard_prefixes(g, k);
        let shards: Vec<Vec<u64>> = prefixes
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                for_each_coloring_with_prefix(g, k, p, |c| {
                    layout.encode_into(c, &mut out);
                    true
                });
                out
            })
            .collect();
        let data = shards.concat();
        Ok(StateSpace { layout, k, data })
    }

    pub fn k(&self) -> Color {
        self.k
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.layout.words
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(&self, i: usize) -> &[u64] {
        let w = self.layout.words;
        &self.data[i * w..(i + 1) * w]
    }

    pub fn colors(&self, i: usize) -> Vec<Color> {
        let key = self.key(i);
        (0..self.layout.n).map(|v| self.layout.get(key, v)).collect()
    }

    pub fn coloring(&self, i: usize) -> Coloring {
        Coloring::new_unchecked(self.colors(i), self.k)
    }

    fn find_key(&self, key: &[u64]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.key(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Index of a coloring, if it is stored.
    pub fn index_of(&self, colors: &[Color]) -> Option<usize> {
        if colors.len() != self.layout.n || colors.iter().any(|&c| c == 0 || c > self.k) {
            return None;
        }
        let mut key = Vec::with_capacity(self.layout.words);
        self.layout.encode_into(colors, &mut key);
        self.find_key(&key)
    }
}

/// Prefixes of the first few vertices, enough to keep every worker busy.
fn shard_prefixes(g: &Graph, k: Color) -> Vec<Vec<Color>> {
    let want = 4 * rayon::current_num_threads().max(1);
    let mut prefixes: Vec<Vec<Color>> = vec![Vec::new()];
    let mut depth = 0;
    while prefixes.len() < want && depth < g.n().min(4) {
        let mut next = Vec::new();
        for p in &prefixes {
            for c in 1..=k {
                let v = p.len();
                if g.neighbors(v).iter().any(|u| u < v && p[u] == c) {
                    continue;
                }
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        prefixes = next;
        depth += 1;
    }
    prefixes
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// A state space with component labels.
#[derive(Debug, Clone)]
pub struct Census {
    pub space: StateSpace,
    /// Component id of every stored coloring, numbered by first appearance.
    pub component: Vec<u32>,
    pub num_components: usize,
    pub component_sizes: Vec<u64>,
    /// Indices of frozen colorings, ascending.
    pub frozen: Vec<usize>,
}

impl Census {
    pub fn run(g: &Graph, k: Color) -> Result<Self> {
        Self::run_with_budget(g, k, state_budget())
    }

    pub fn run_with_budget(g: &Graph, k: Color, budget: u64) -> Result<Self> {
        let space = StateSpace::build_with_budget(g, k, budget)?;
        let total = space.len();
        if total > u32::MAX as usize {
            return Err(Error::StateSpaceTooLarge {
                count: total as u64,
                budget,
            });
        }
        let mut parent: Vec<u32> = (0..total as u32).collect();
        let mut frozen = Vec::new();
        const WINDOW: usize = 1 << 18;
        const CHUNK: usize = 1 << 11;
        for w in (0..total).step_by(WINDOW) {
            let end = (w + WINDOW).min(total);
            let parts: Vec<(Vec<(u32, u32)>, Vec<usize>)> = (w..end)
                .step_by(CHUNK)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&s| moves_in_range(g, &space, s, (s + CHUNK).min(end)))
                .collect();
            for (edges, fz) in parts {
                for (a, b) in edges {
                    union(&mut parent, a, b);
                }
                frozen.extend(fz);
            }
        }
        let mut component = vec![0u32; total];
        let mut id_of_root: HashMap<u32, u32> = HashMap::new();
        let mut sizes = Vec::new();
        for i in 0..total {
            let r = find(&mut parent, i as u32);
            let next = id_of_root.len() as u32;
            let id = *id_of_root.entry(r).or_insert(next);
            if id as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[id as usize] += 1;
            component[i] = id;
        }
        Ok(Census {
            space,
            component,
            num_components: sizes.len(),
            component_sizes: sizes,
            frozen,
        })
    }

    pub fn connected(&self) -> bool {
        self.num_components <= 1
    }

    /// Component id of a coloring, if it is a stored proper coloring.
    pub fn component_of(&self, colors: &[Color]) -> Option<u32> {
        self.space.index_of(colors).map(|i| self.component[i])
    }

    pub fn same_component(&self, a: &[Color], b: &[Color]) -> Option<bool> {
        Some(self.component_of(a)? == self.component_of(b)?)
    }

    /// Number of components up to renaming colors. Relabelling maps
    /// components onto components, so the smallest canonical form over a
    /// component's members names its whole orbit.
    pub fn components_up_to_color_permutation(&self) -> usize {
        let mut best: Vec<Option<Vec<Color>>> = vec![None; self.num_components];
        for i in 0..self.space.len() {
            let canon = canonical_relabel(&self.space.colors(i));
            let slot = &mut best[self.component[i] as usize];
            if slot.as_ref().is_none_or(|b| canon < *b) {
                *slot = Some(canon);
            }
        }
        let mut reps: Vec<_> = best.into_iter().flatten().collect();
        reps.sort();
        reps.dedup();
        reps.len()
    }

    pub fn report(&self, elapsed: Duration) -> MixingReport {
        let k = self.space.k();
        let frozen = self
            .frozen
            .iter()
            .take(FROZEN_LISTED)
            .map(|&i| self.space.coloring(i))
            .collect();
        let separated_pair = (self.num_components > 1).then(|| {
            let other = self.component.iter().position(|&c| c != 0).expect("two components");
            (self.space.coloring(0), self.space.coloring(other))
        });
        MixingReport {
            k,
            num_colorings: self.space.len() as u64,
            num_components: self.num_components,
            connected: self.connected(),
            frozen_count: self.frozen.len(),
            frozen,
            largest_component: self.component_sizes.iter().copied().max().unwrap_or(0),
            separated_pair,
            elapsed,
        }
    }
}

fn canonical_relabel(colors: &[Color]) -> Vec<Color> {
    let mut rename = [0 as Color; MAX_K + 1];
    let mut next = 0;
    colors
        .iter()
        .map(|&c| {
            if rename[c as usize] == 0 {
                next += 1;
                rename[c as usize] = next;
            }
            rename[c as usize]
        })
        .collect()
}

/// Moves to larger colors from colorings `s..e`, plus the frozen ones.
fn moves_in_range(g: &Graph, space: &StateSpace, s: usize, e: usize) -> (Vec<(u32, u32)>, Vec<usize>) {
    let lay = space.layout;
    let palette = ColorSet::palette(space.k);
    let mut edges = Vec::new();
    let mut frozen = Vec::new();
    let mut key = vec![0u64; lay.words];
    for i in s..e {
        let colors = space.colors(i);
        let mut any = false;
        for v in 0..lay.n {
            let own = colors[v];
            let blocked: ColorSet = g.neighbors(v).iter().map(|u| colors[u]).collect();
            let mut free = palette.difference(blocked);
            free.remove(own);
            if free.is_empty() {
                continue;
            }
            any = true;
            for c in free.iter().filter(|&c| c > own) {
                key.copy_from_slice(space.key(i));
                lay.set(&mut key, v, c);
                let j = space.find_key(&key).expect("proper neighbour is stored");
                edges.push((i as u32, j as u32));
            }
        }
        if !any {
            frozen.push(i);
        }
    }
    (edges, frozen)
}

/// Per-`k` census summary.
#[derive(Debug, Clone, Serialize)]
pub struct MixingReport {
    pub k: Color,
    pub num_colorings: u64,
    pub num_components: usize,
    pub connected: bool,
    /// Exact number of frozen colorings.
    pub frozen_count: usize,
    /// The first frozen colorings in lexicographic order (at most 1024).
    pub frozen: Vec<Coloring>,
    pub largest_component: u64,
    /// Two colorings in different components, when disconnected.
    pub separated_pair: Option<(Coloring, Coloring)>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn census(g: &Graph, k: Color) -> Result<MixingReport> {
    let t = Instant::now();
    let c = Census::run(g, k)?;
    Ok(c.report(t.elapsed()))
}

pub fn is_k_mixing(g: &Graph, k: Color) -> Result<bool> {
    Ok(Census::run(g, k)?.connected())
}

/// Bounded recolorability: verdicts for `ℓ = χ+1 ..= ell_max`.
#[derive(Debug, Clone, Serialize)]
pub struct RecolorabilityReport {
    pub chi: usize,
    pub ell_max: usize,
    pub verdicts: Vec<(usize, bool)>,
    /// True iff every tested `ℓ` is mixing. Says nothing beyond `ell_max`.
    pub recolorable_up_to_ell_max: bool,
}

pub fn recolorable_up_to(g: &Graph, ell_max: usize) -> Result<RecolorabilityReport> {
    let chi = chi(g);
    let mut verdicts = Vec::new();
    for ell in chi + 1..=ell_max {
        check_limits(g, ell)?;
        verdicts.push((ell, is_k_mixing(g, ell as Color)?));
    }
    Ok(RecolorabilityReport {
        chi,
        ell_max,
        recolorable_up_to_ell_max: verdicts.iter().all(|&(_, ok)| ok),
        verdicts,
    })
}

/// True iff no vertex can change color.
pub fn is_frozen(g: &Graph, c: &Coloring) -> bool {
    let full = ColorSet::palette(c.k());
    (0..g.n()).all(|v| {
        let mut seen: ColorSet = g.neighbors(v).iter().map(|u| c.get(u)).collect();
        seen.insert(c.get(v));
        seen == full
    })
}

pub fn frozen_colorings(g: &Graph, k: Color) -> Result<Vec<Coloring>> {
    check_limits(g, k as usize)?;
    let budget = state_budget();
    if count_colorings(g, k, budget).is_none() {
        return Err(Error::StateSpaceTooLarge {
            count: budget + 1,
            budget,
        });
    }
    let mut out = Vec::new();
    for_each_coloring(g, k, |c| {
        let col = Coloring::new_unchecked(c.to_vec(), k);
        if is_frozen(g, &col) {
            out.push(col);
        }
        true
    });
    Ok(out)
}

fn check_endpoint(g: &Graph, k: Color, c: &Coloring) -> Result<()> {
    if let Some(&x) = c.as_slice().iter().find(|&&x| x == 0 || x > k) {
        return Err(Error::ColorOutOfRange { color: x, k });
    }
    if !is_proper(g, c)? {
        return Err(Error::ImproperEndpoint);
    }
    Ok(())
}

/// Shortest path by breadth-first search with the default budget.
pub fn find_path(g: &Graph, k: Color, a: &Coloring, b: &Coloring) -> Result<Option<RecoloringSchedule>> {
    find_path_with_budget(g, k, a, b, DEFAULT_PATH_BUDGET)
}

/// `Ok(None)` means the component of `a` was exhausted without meeting `b`.
/// Neighbours are generated vertex-ascending then color-ascending, so the
/// path is reproducible.
pub fn find_path_with_budget(
    g: &Graph,
    k: Color,
    a: &Coloring,
    b: &Coloring,
    budget: u64,
) -> Result<Option<RecoloringSchedule>> {
    check_limits(g, k as usize)?;
    check_endpoint(g, k, a)?;
    check_endpoint(g, k, b)?;
    let start = Coloring::new_unchecked(a.as_slice().to_vec(), k);
    if a.as_slice() == b.as_slice() {
        return Ok(Some(RecoloringSchedule::new(start)));
    }
    // Four bits per vertex fit a u128 key up to 32 vertices.
    let steps = if g.n() <= 32 {
        bfs(
            g,
            k,
            a.as_slice(),
            b.as_slice(),
            budget,
            |c: &[Color]| c.iter().enumerate().fold(0u128, |acc, (v, &x)| acc | (x as u128) << (4 * v)),
            |key: &u128, out: &mut [Color]| {
                for (v, x) in out.iter_mut().enumerate() {
                    *x = ((key >> (4 * v)) & 0xf) as Color;
                }
            },
        )?
    } else {
        bfs(
            g,
            k,
            a.as_slice(),
            b.as_slice(),
            budget,
            |c: &[Color]| c.to_vec(),
            |key: &Vec<Color>, out: &mut [Color]| out.copy_from_slice(key),
        )?
    };
    let Some(steps) = steps else {
        return Ok(None);
    };
    let sched = RecoloringSchedule { start, steps };
    sched.validate(g, b)?;
    Ok(Some(sched))
}

fn bfs<K: std::hash::Hash + Eq + Clone>(
    g: &Graph,
    k: Color,
    a: &[Color],
    b: &[Color],
    budget: u64,
    enc: impl Fn(&[Color]) -> K,
    dec: impl Fn(&K, &mut [Color]),
) -> Result<Option<Vec<(usize, Color)>>> {
    let palette = ColorSet::palette(k);
    let goal = enc(b);
    let mut nodes: Vec<K> = vec![enc(a)];
    let mut parent: Vec<(u32, u8, Color)> = vec![(u32::MAX, 0, 0)];
    let mut seen: HashSet<K> = HashSet::from([nodes[0].clone()]);
    let mut cur = vec![0 as Color; g.n()];
    let mut head = 0;
    while head < nodes.len() {
        dec(&nodes[head], &mut cur);
        for v in 0..g.n() {
            let blocked: ColorSet = g.neighbors(v).iter().map(|u| cur[u]).collect();
            let own = cur[v];
            for c in palette.difference(blocked).iter() {
                if c == own {
                    continue;
                }
                cur[v] = c;
                let key = enc(&cur);
                cur[v] = own;
                if seen.contains(&key) {
                    continue;
                }
                let id = nodes.len() as u32;
                if id as u64 >= budget {
                    return Err(Error::BudgetExhausted(budget));
                }
                let done = key == goal;
                seen.insert(key.clone());
                nodes.push(key);
                parent.push((head as u32, v as u8, c));
                if done {
                    let mut steps = Vec::new();
                    let mut at = id;
                    while at != 0 {
                        let (p, v, c) = parent[at as usize];
                        steps.push((v as usize, c));
                        at = p;
                    }
                    steps.reverse();
                    return Ok(Some(steps));
                }
            }
        }
        head += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn col(v: &[Color], k: Color) -> Coloring {
        Coloring::new(v.to_vec(), k).unwrap()
    }

    #[test]
    fn packing_round_trips_across_word_boundaries() {
        let lay = Layout::new(30, 6);
        assert_eq!((lay.bits, lay.words), (3, 2));
        let colors: Vec<Color> = (0..30).map(|i| (i % 6 + 1) as Color).collect();
        let mut key = Vec::new();
        lay.encode_into(&colors, &mut key);
        let back: Vec<Color> = (0..30).map(|v| lay.get(&key, v)).collect();
        assert_eq!(back, colors);
        assert_eq!(Layout::new(5, 1).bits, 1);
        assert_eq!(Layout::new(5, 2).bits, 1);
        assert_eq!(Layout::new(5, 16).bits, 4);
        assert_eq!(Layout::new(5, 9).bits, 4);
    }

    #[test]
    fn store_is_sorted() {
        let g = named::cycle(5);
        let s = StateSpace::build(&g, 4).unwrap();
        let all: Vec<_> = (0..s.len()).map(|i| s.colors(i)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(s.index_of(&all[17]), Some(17));
    }

    #[test]
    fn six_cycle_at_three_colors() {
        let r = census(&named::cycle(6), 3).unwrap();
        assert!(!r.connected);
        assert!(r.frozen.contains(&col(&[1, 2, 3, 1, 2, 3], 3)));
        assert!(!is_k_mixing(&named::cycle(6), 3).unwrap());
    }

    #[test]
    fn small_mixing_examples() {
        assert!(census(&named::complete(3), 4).unwrap().connected);
        assert!(is_k_mixing(&named::complete(2), 3).unwrap());
        assert_eq!(census(&named::complete(2), 3).unwrap().num_colorings, 6);
        assert!(frozen_colorings(&named::complete(3), 4).unwrap().is_empty());
        assert!(frozen_colorings(&named::cycle(6), 3)
            .unwrap()
            .contains(&col(&[1, 2, 3, 1, 2, 3], 3)));
        // K3 at 3 colors: six isolated colorings
        let r = census(&named::complete(3), 3).unwrap();
        assert_eq!((r.num_components, r.frozen_count), (6, 6));
        let c = Census::run(&named::complete(3), 3).unwrap();
        assert_eq!(c.components_up_to_color_permutation(), 1);
    }

    #[test]
    fn no_colorings_means_connected() {
        let r = census(&named::complete(3), 2).unwrap();
        assert_eq!((r.num_colorings, r.num_components), (0, 0));
        assert!(r.connected);
    }

    #[test]
    fn recolorability_verdicts() {
        let r = recolorable_up_to(&named::cycle(6), 4).unwrap();
        assert_eq!(r.verdicts[0], (3, false));
        assert!(!r.recolorable_up_to_ell_max);
        for t in 1..=4 {
            assert!(recolorable_up_to(&named::complete(t), t + 2).unwrap().recolorable_up_to_ell_max);
        }
    }

    #[test]
    fn paths() {
        let g = named::complete(2);
        let a = col(&[1, 2], 3);
        let b = col(&[2, 1], 3);
        let p = find_path(&g, 3, &a, &b).unwrap().unwrap();
        assert_eq!(p.len(), 3);
        assert!(find_path(&g, 3, &a, &a).unwrap().unwrap().is_empty());
        assert_eq!(find_path(&g, 2, &a, &b).unwrap(), None);
        assert_eq!(find_path(&g, 3, &a, &col(&[1, 1], 3)), Err(Error::ImproperEndpoint));
        let g = named::path(8);
        let a = col(&[1, 2, 1, 2, 1, 2, 1, 2], 3);
        let b = col(&[2, 1, 2, 1, 2, 1, 2, 1], 3);
        assert_eq!(find_path_with_budget(&g, 3, &a, &b, 10), Err(Error::BudgetExhausted(10)));
    }

    #[test]
    fn guard_trips() {
        let e = Census::run_with_budget(&Graph::empty(6), 3, 100).unwrap_err();
        assert_eq!(e, Error::StateSpaceTooLarge { count: 101, budget: 100 });
    }
}
