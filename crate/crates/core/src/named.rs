//! Named graphs: the forbidden patterns and the worked examples.

use crate::coloring::Coloring;
use crate::graph::Graph;

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("static edge list is valid")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n - 1));
    build(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    Graph::empty(n).complement()
}

/// `K_{p,q}`: part one is `0..p`, part two `p..p+q`.
pub fn complete_bipartite(p: usize, q: usize) -> Graph {
    Graph::empty(p).join(&Graph::empty(q))
}

/// `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

pub fn two_k2() -> Graph {
    build(4, &[(0, 1), (2, 3)])
}

pub fn three_k1() -> Graph {
    Graph::empty(3)
}

/// `K_4` minus the edge 0-3.
pub fn diamond() -> Graph {
    build(4, &[(0, 1), (0, 2), (1, 2), (3, 1), (3, 2)])
}

/// Square 0-1-2-3 with roof 4 on 1 and 2.
pub fn house() -> Graph {
    build(5, &[(1, 0), (0, 3), (2, 3), (1, 2), (4, 2), (1, 4)])
}

/// Triangle 0, 3, 4 with horns 1 (at 0) and 2 (at 3).
pub fn bull() -> Graph {
    build(5, &[(1, 0), (0, 3), (2, 3), (4, 0), (3, 4)])
}

/// Triangle 0, 1, 2; vertex 3 on 1 and 2; pendant 4 on 3.
pub fn co_fork() -> Graph {
    build(5, &[(1, 0), (0, 2), (2, 3), (1, 2), (1, 3), (3, 4)])
}

/// The bipartite staircase on `2h` vertices: `b_i = i - 1` for `i = 1..=h`,
/// `w_j = h + j - 1`, and `b_i` is adjacent to `w_1, .., w_{h-i+1}`.
pub fn staircase(h: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 1..=h {
        for j in 1..=h - i + 1 {
            edges.push((i - 1, h + j - 1));
        }
    }
    build(2 * h, &edges)
}

/// Thin spider with clique `0..k` and independent legs `k..k+s`, leg `k+i`
/// attached to clique vertex `i`. Requires `k == s` or `k == s + 1`.
pub fn thin_spider(k: usize, s: usize) -> Graph {
    assert!(k == s || k == s + 1);
    let mut g = complete(k).disjoint_union(&Graph::empty(s));
    for i in 0..s {
        g.add_edge(i, k + i);
    }
    g
}

/// Labels of the worked modular-decomposition example, in vertex order.
pub const FIGURE3_LABELS: [&str; 11] = [
    "a1", "a2", "b1", "b2", "c1", "d1", "e1", "e2", "e3", "e4", "e5",
];

/// The graph whose maximal modules are `A = {a1, a2}`, `B = {b1, b2}`,
/// `C = {c1}`, `D = {d1}` and `E = {e1, .., e5}` (a five-cycle).
pub fn figure3() -> Graph {
    let (a1, a2, b1, b2, c1, d1) = (0, 1, 2, 3, 4, 5);
    let e = |i: usize| 5 + i;
    let mut edges = vec![
        (a1, a2),
        (a1, b1),
        (a1, b2),
        (a2, b1),
        (a2, b2),
        (c1, b1),
        (b2, c1),
        (d1, b1),
        (d1, b2),
        (c1, d1),
    ];
    for i in 1..=5 {
        edges.push((e(i), d1));
    }
    edges.extend([(e(5), e(4)), (e(4), e(3)), (e(3), e(2)), (e(2), e(1)), (e(5), e(1))]);
    build(11, &edges)
}

/// Prime, 3-chromatic graph: hexagon `0..6` (figure labels 1..6) plus vertex
/// 6 (label 7) adjacent to hexagon vertices 1 and 2 (labels 2 and 3).
pub fn figure2_base() -> Graph {
    let mut edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    edges.extend([(1, 6), (2, 6)]);
    build(7, &edges)
}

/// The 13-vertex blowup of [`figure2_base`] exactly as drawn: outer hexagon
/// `0..6`, the triangle apex 6, inner hexagon `7..13`, where inner vertex
/// `7 + i` is the clique twin of outer vertex `i`.
pub fn figure2_blowup() -> Graph {
    let outer = |i: usize| i % 6;
    let inner = |i: usize| 7 + i % 6;
    let mut edges = Vec::new();
    for i in 0..6 {
        edges.push((outer(i), outer(i + 1)));
        edges.push((inner(i), inner(i + 1)));
        // twin edge and the two cross edges to the neighbouring outer vertices
        edges.push((inner(i), outer(i)));
        edges.push((inner(i), outer(i + 1)));
        edges.push((inner(i), outer(i + 5)));
    }
    edges.extend([(1, 6), (2, 6), (inner(1), 6), (inner(2), 6)]);
    build(13, &edges)
}

/// The 6-coloring printed on the blowup: outer 1,3,5,1,3,5, apex 1, inner
/// 2,4,6,2,4,6.
pub fn figure2_labeling() -> Coloring {
    Coloring::new(vec![1, 3, 5, 1, 3, 5, 1, 2, 4, 6, 2, 4, 6], 6).expect("labels within 1..=6")
}
