//! Simple undirected graphs on vertices `0..n` and the standard constructions
//! on them.

use std::collections::VecDeque;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![VertexSet::new(); n],
        }
    }

    /// Builds a graph from an edge list. Loops and duplicates are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            let location = format!("edge {i}");
            if u >= n || v >= n {
                return Err(Error::Parse {
                    location,
                    message: format!("endpoint out of range for n = {n}"),
                });
            }
            if u == v {
                return Err(Error::LoopRejected {
                    vertex: u,
                    location,
                });
            }
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge {
                    u: u.min(v),
                    v: u.max(v),
                    location,
                });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    #[cfg(test)]
    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Union of the neighbourhoods of `s`, minus `s`.
    pub fn external_neighbors(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s {
            out = out.union(&self.adj[v]);
        }
        out.difference(s)
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter()
            .all(|v| s.difference(&VertexSet::singleton(v)).is_subset(&self.adj[v]))
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.adj[v].is_disjoint(s))
    }

    /// `a` is complete to `b`.
    pub fn is_complete_to(&self, a: &VertexSet, b: &VertexSet) -> bool {
        a.iter().all(|v| b.is_subset(&self.adj[v]))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let full = VertexSet::full(n);
        let adj = (0..n)
            .map(|v| {
                let mut row = full.difference(&self.adj[v]);
                row.remove(v);
                row
            })
            .collect();
        Graph { adj }
    }

    /// `self + other`; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut g = Graph::empty(shift + other.n());
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + shift, v + shift);
        }
        g
    }

    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        for u in 0..self.n() {
            for v in 0..other.n() {
                g.add_edge(u, self.n() + v);
            }
        }
        g
    }

    /// `G[s]`, with vertices renumbered in increasing order. The returned
    /// vector maps new indices to old ones.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if !s.within(self.n()) {
            return Err(Error::InvalidArgument(format!(
                "vertex set {s:?} not inside 0..{}",
                self.n()
            )));
        }
        Ok(self.induced(s))
    }

    /// Infallible variant used internally on sets already known to be valid.
    /// Accepts the empty set.
    pub(crate) fn induced(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| self.adj[v].intersection(s).iter().map(|u| index[u]).collect())
            .collect();
        (Graph { adj }, map)
    }

    /// `G - v`.
    pub fn delete_vertex(&self, v: usize) -> (Graph, Vec<usize>) {
        let mut keep = self.vertices();
        keep.remove(v);
        self.induced(&keep)
    }

    /// Substitutes `h` for the vertex set `s`: the result is `G - s` (vertices
    /// in their original order) followed by a copy of `h`, where every vertex
    /// of `h` is adjacent to every external neighbour of `s`.
    pub fn substitute(&self, s: &VertexSet, h: &Graph) -> Result<Graph> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let rest = self.vertices().difference(s);
        let ext = self.external_neighbors(s);
        let (base, map) = self.induced(&rest);
        let mut g = base.disjoint_union(h);
        let shift = base.n();
        for (i, &old) in map.iter().enumerate() {
            if ext.contains(old) {
                for x in 0..h.n() {
                    g.add_edge(i, shift + x);
                }
            }
        }
        Ok(g)
    }

    /// Replaces each vertex `v` by a clique of `sizes[v]` vertices. The copies
    /// of `v` occupy a contiguous range, in vertex order.
    pub fn blowup(&self, sizes: &[usize]) -> Result<Graph> {
        if sizes.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: sizes.len(),
            });
        }
        if let Some(v) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::ZeroMultiplicity { vertex: v });
        }
        let ranges = blowup_ranges(sizes);
        let mut g = Graph::empty(sizes.iter().sum());
        for v in 0..self.n() {
            for a in ranges[v].clone() {
                for b in ranges[v].clone().filter(|&b| b > a) {
                    g.add_edge(a, b);
                }
            }
        }
        for (u, v) in self.edges() {
            for a in ranges[u].clone() {
                for b in ranges[v].clone() {
                    g.add_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    /// Attaches a private pendant `n + x` to every vertex `x`.
    pub fn sibling(&self) -> Graph {
        let n = self.n();
        let mut g = self.disjoint_union(&Graph::empty(n));
        for x in 0..n {
            g.add_edge(x, n + x);
        }
        g
    }

    /// Connected components, each sorted by their minimum vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([root]);
            seen[root] = true;
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Canonical edge-list text for echoing graphs back in reports.
    pub fn to_edge_list(&self) -> String {
        crate::io::emit_edge_list(self)
    }
}

pub(crate) fn blowup_ranges(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect()
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Wire form of a graph in JSON reports.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges(),
        }
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

/// Adjacency-preserving bijection test by backtracking. Vertices are matched
/// in order of decreasing degree; candidates must agree on degree and on
/// adjacency to every vertex already mapped.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Like [`are_isomorphic`], returning the map `g -> h` when one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    if g.degree_sequence() != h.degree_sequence() {
        return None;
    }
    let gc = refined_classes(g);
    let hc = refined_classes(h);
    let mut gs = gc.clone();
    let mut hs = hc.clone();
    gs.sort_unstable();
    hs.sort_unstable();
    if gs != hs {
        return None;
    }
    iso_with_classes(g, h, &gc, &hc)
}

/// Backtracking isomorphism search restricted to maps preserving the given
/// vertex classes.
pub(crate) fn iso_with_classes(
    g: &Graph,
    h: &Graph,
    gclass: &[u64],
    hclass: &[u64],
) -> Option<Vec<usize>> {
    let n = g.n();
    // Rarest classes first, then BFS-ish by connectivity to placed vertices.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let class_size = |c: u64| gclass.iter().filter(|&&x| x == c).count();
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&u| g.has_edge(u, v)).count();
                (links, usize::MAX - class_size(gclass[v]), g.degree(v), usize::MAX - v)
            })
            .expect("vertex left");
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if iso_extend(g, h, gclass, hclass, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    g: &Graph,
    h: &Graph,
    gclass: &[u64],
    hclass: &[u64],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.n() {
        if used[w] || hclass[w] != gclass[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if iso_extend(g, h, gclass, hclass, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
    }
    map[v] = usize::MAX;
    false
}

/// Colour refinement (1-dimensional Weisfeiler-Leman) starting from degrees.
/// Isomorphic graphs receive equal class multisets, and any isomorphism maps
/// each vertex to one of the same class.
pub(crate) fn refined_classes(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut class: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    for _ in 0..n.min(6) {
        let next: Vec<u64> = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = g.neighbors(v).iter().map(|u| class[u]).collect();
                nb.sort_unstable();
                let mut h = mix(class[v]);
                for c in nb {
                    h = mix(h ^ c);
                }
                h
            })
            .collect();
        let distinct = |c: &[u64]| {
            let mut s = c.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        let stable = distinct(&next) == distinct(&class);
        class = next;
        if stable {
            break;
        }
    }
    class
}

/// Isomorphism-invariant 64-bit fingerprint (used to bucket graphs before
/// exact comparison).
pub fn invariant_hash(g: &Graph) -> u64 {
    let mut c = refined_classes(g);
    c.sort_unstable();
    let mut h = mix(g.n() as u64 ^ ((g.edge_count() as u64) << 32));
    for x in c {
        h = mix(h ^ x);
    }
    h
}

fn mix(mut x: u64) -> u64 {
    // splitmix64 finaliser
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn complement_examples() {
        let c5 = named::cycle(5);
        let co = c5.complement();
        // 0,2,4,1,3 is a cycle in the complement
        let order = [0, 2, 4, 1, 3];
        for i in 0..5 {
            assert!(co.has_edge(order[i], order[(i + 1) % 5]));
        }
        assert_eq!(named::complete(4).complement(), Graph::empty(4));
        assert_eq!(c5.complement().complement(), c5);
    }

    #[test]
    fn union_and_join() {
        let k1 = Graph::empty(1);
        assert_eq!(k1.disjoint_union(&k1), Graph::empty(2));
        let two_k2 = named::complete(2).disjoint_union(&named::complete(2));
        assert_eq!(two_k2.components().len(), 2);
        let w = k1.join(&named::cycle(4));
        assert_eq!(w.degree(0), 4);
        let c4 = Graph::empty(2).join(&Graph::empty(2));
        assert!(are_isomorphic(&c4, &named::cycle(4)));
    }

    #[test]
    fn induced_subgraph_examples() {
        let c5 = named::cycle(5);
        let s: VertexSet = [1, 2, 3, 4].into_iter().collect();
        let (p, map) = c5.induced_subgraph(&s).unwrap();
        assert_eq!(map, vec![1, 2, 3, 4]);
        assert!(are_isomorphic(&p, &named::path(4)));
        assert_eq!(c5.induced_subgraph(&c5.vertices()).unwrap().0, c5);
        assert_eq!(c5.induced_subgraph(&VertexSet::new()), Err(Error::EmptySet));
    }

    #[test]
    fn substitute_examples() {
        let p3 = named::path(3);
        let d = p3.substitute(&VertexSet::singleton(1), &named::complete(2)).unwrap();
        assert!(are_isomorphic(&d, &named::diamond()));
        let same = p3.substitute(&VertexSet::singleton(0), &Graph::empty(1)).unwrap();
        assert!(are_isomorphic(&same, &p3));
        assert_eq!(
            p3.substitute(&VertexSet::new(), &p3),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn blowup_examples() {
        let g = named::cycle(5);
        assert_eq!(g.blowup(&[1; 5]).unwrap(), g);
        assert_eq!(
            g.blowup(&[1, 0, 1, 1, 1]),
            Err(Error::ZeroMultiplicity { vertex: 1 })
        );
        let b = g.blowup(&[2, 1, 1, 1, 3]).unwrap();
        assert_eq!(b.n(), 8);
    }

    #[test]
    fn sibling_examples() {
        assert!(are_isomorphic(&named::complete(2).sibling(), &named::path(4)));
        assert_eq!(Graph::empty(1).sibling(), named::complete(2));
        let s = named::cycle(4).sibling();
        for x in 0..4 {
            assert_eq!(s.neighbors(4 + x).to_vec(), vec![x]);
        }
    }

    #[test]
    fn isomorphism_examples() {
        let c5 = named::cycle(5);
        assert!(are_isomorphic(&c5, &c5.complement()));
        assert!(!are_isomorphic(&named::path(4), &named::star(3)));
        let perm = [3, 0, 4, 1, 2];
        assert!(are_isomorphic(&named::house(), &named::house().permute(&perm)));
        assert!(!are_isomorphic(&named::house(), &named::bull()));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 0)]),
            Err(Error::LoopRejected { vertex: 0, .. })
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge { u: 0, v: 1, .. })
        ));
    }
}
