//! Induced-pattern detection, hereditary class specs and the structural
//! recognisers for the P5-free subclasses.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modules::is_prime;
use crate::named;

/// Largest pattern `contains_induced` accepts.
pub const MAX_PATTERN: usize = 8;
/// Largest host for the exponential recognisers.
pub const RECOGNIZER_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PatternName {
    P3,
    P4,
    P5,
    C4,
    C5,
    C6,
    #[serde(rename = "2K2")]
    TwoK2,
    #[serde(rename = "3K1")]
    ThreeK1,
    #[serde(rename = "diamond")]
    Diamond,
    #[serde(rename = "house")]
    House,
    #[serde(rename = "bull")]
    Bull,
    #[serde(rename = "co-fork")]
    CoFork,
}

impl PatternName {
    pub const ALL: [PatternName; 12] = [
        PatternName::P3,
        PatternName::P4,
        PatternName::P5,
        PatternName::C4,
        PatternName::C5,
        PatternName::C6,
        PatternName::TwoK2,
        PatternName::ThreeK1,
        PatternName::Diamond,
        PatternName::House,
        PatternName::Bull,
        PatternName::CoFork,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternName::P3 => "P3",
            PatternName::P4 => "P4",
            PatternName::P5 => "P5",
            PatternName::C4 => "C4",
            PatternName::C5 => "C5",
            PatternName::C6 => "C6",
            PatternName::TwoK2 => "2K2",
            PatternName::ThreeK1 => "3K1",
            PatternName::Diamond => "diamond",
            PatternName::House => "house",
            PatternName::Bull => "bull",
            PatternName::CoFork => "co-fork",
        }
    }

    pub fn graph(self) -> Graph {
        match self {
            PatternName::P3 => named::path(3),
            PatternName::P4 => named::path(4),
            PatternName::P5 => named::path(5),
            PatternName::C4 => named::cycle(4),
            PatternName::C5 => named::cycle(5),
            PatternName::C6 => named::cycle(6),
            PatternName::TwoK2 => named::two_k2(),
            PatternName::ThreeK1 => named::three_k1(),
            PatternName::Diamond => named::diamond(),
            PatternName::House => named::house(),
            PatternName::Bull => named::bull(),
            PatternName::CoFork => named::co_fork(),
        }
    }
}

impl fmt::Display for PatternName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        PatternName::ALL
            .into_iter()
            .find(|p| p.as_str().to_ascii_lowercase() == key)
            .or(match key.as_str() {
                "cofork" => Some(PatternName::CoFork),
                "2k_2" => Some(PatternName::TwoK2),
                "3k_1" => Some(PatternName::ThreeK1),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pattern `{s}`")))
    }
}

/// The named forbidden patterns, built once.
#[derive(Debug, Clone)]
pub struct PatternLibrary {
    patterns: Vec<(PatternName, Graph)>,
}

impl Default for PatternLibrary {
    fn default() -> Self {
        Self::new()
    }
}

impl PatternLibrary {
    pub fn new() -> Self {
        PatternLibrary {
            patterns: PatternName::ALL.iter().map(|&p| (p, p.graph())).collect(),
        }
    }

    pub fn get(&self, name: PatternName) -> &Graph {
        &self
            .patterns
            .iter()
            .find(|(p, _)| *p == name)
            .expect("every name is in the library")
            .1
    }

    pub fn k_pq(p: usize, q: usize) -> Graph {
        named::complete_bipartite(p, q)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PatternName, &Graph)> {
        self.patterns.iter().map(|(p, g)| (*p, g))
    }
}

/// A hereditary class given by forbidden induced patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassSpec {
    pub forbidden: Vec<PatternName>,
}

impl ClassSpec {
    pub fn new(forbidden: Vec<PatternName>) -> Result<Self> {
        if forbidden.is_empty() {
            return Err(Error::InvalidArgument(
                "a class needs at least one forbidden pattern; use ClassSpec::all_graphs".into(),
            ));
        }
        let mut forbidden = forbidden;
        forbidden.sort();
        forbidden.dedup();
        Ok(ClassSpec { forbidden })
    }

    /// The unrestricted class.
    pub fn all_graphs() -> Self {
        ClassSpec { forbidden: Vec::new() }
    }

    fn of(names: &[PatternName]) -> Self {
        Self::new(names.to_vec()).expect("nonempty")
    }

    pub fn p5_diamond_free() -> Self {
        Self::of(&[PatternName::P5, PatternName::Diamond])
    }

    pub fn p5_house_bull_free() -> Self {
        Self::of(&[PatternName::P5, PatternName::House, PatternName::Bull])
    }

    /// (P5, C5, co-fork)-free.
    pub fn semi_p4_sparse() -> Self {
        Self::of(&[PatternName::P5, PatternName::C5, PatternName::CoFork])
    }

    pub fn p5_house_free() -> Self {
        Self::of(&[PatternName::P5, PatternName::House])
    }

    pub fn p5_house_c5_free() -> Self {
        Self::of(&[PatternName::P5, PatternName::House, PatternName::C5])
    }

    pub fn two_k2_free() -> Self {
        Self::of(&[PatternName::TwoK2])
    }

    pub fn diamond_free() -> Self {
        Self::of(&[PatternName::Diamond])
    }

    pub fn p5_free() -> Self {
        Self::of(&[PatternName::P5])
    }

    /// Parses `"P5,diamond"`; `"all"` or the empty string is the unrestricted
    /// class. A few named classes are also accepted.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "" | "all" => Ok(Self::all_graphs()),
            "semi-p4-sparse" => Ok(Self::semi_p4_sparse()),
            list => Self::new(
                list.split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<PatternName>>>()?,
            ),
        }
    }

    pub fn label(&self) -> String {
        if self.forbidden.is_empty() {
            return "all graphs".into();
        }
        let names: Vec<_> = self.forbidden.iter().map(|p| p.as_str()).collect();
        format!("({})-free", names.join(", "))
    }
}

/// Finds an induced copy of `pattern` in `g`. The returned map sends pattern
/// vertex `i` to `map[i]`.
pub fn contains_induced(g: &Graph, pattern: &Graph) -> Result<Option<Vec<usize>>> {
    let p = pattern.n();
    if p > MAX_PATTERN {
        return Err(Error::PatternTooLarge(p));
    }
    if p > g.n() {
        return Ok(None);
    }
    if p == 0 {
        return Ok(Some(Vec::new()));
    }
    // Place pattern vertices in BFS order so most have an earlier anchor.
    let order = bfs_order(pattern);
    let anchor: Vec<Option<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| order[..i].iter().position(|&u| pattern.has_edge(u, v)))
        .collect();
    let mut image = vec![usize::MAX; p];
    let mut used = VertexSet::new();
    let found = embed(g, pattern, &order, &anchor, 0, &mut image, &mut used);
    Ok(found.then_some(image))
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut roots: Vec<usize> = (0..g.n()).collect();
    roots.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut q = VecDeque::from([r]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
    }
    order
}

fn embed(
    g: &Graph,
    pattern: &Graph,
    order: &[usize],
    anchor: &[Option<usize>],
    depth: usize,
    image: &mut [usize],
    used: &mut VertexSet,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let pv = order[depth];
    let candidates: Vec<usize> = match anchor[depth] {
        Some(a) => g.neighbors(image[order[a]]).difference(used).to_vec(),
        None => (0..g.n()).filter(|&v| !used.contains(v)).collect(),
    };
    for gv in candidates {
        if g.degree(gv) < pattern.degree(pv) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&pu| pattern.has_edge(pu, pv) == g.has_edge(image[pu], gv));
        if !consistent {
            continue;
        }
        image[pv] = gv;
        used.insert(gv);
        if embed(g, pattern, order, anchor, depth + 1, image, used) {
            return true;
        }
        used.remove(gv);
    }
    false
}

pub fn in_class(g: &Graph, spec: &ClassSpec) -> bool {
    spec.forbidden.iter().all(|p| {
        contains_induced(g, &p.graph())
            .expect("library patterns are small")
            .is_none()
    })
}

/// One witness embedding (or none) for every forbidden pattern of `spec`.
pub fn forbidden_witnesses(g: &Graph, spec: &ClassSpec) -> Vec<(PatternName, Option<Vec<usize>>)> {
    spec.forbidden
        .iter()
        .map(|&p| (p, contains_induced(g, &p.graph()).expect("library patterns are small")))
        .collect()
}

/// Two-coloring by BFS layering; the component minimum goes to the first
/// side.
pub fn is_bipartite(g: &Graph) -> Option<(VertexSet, VertexSet)> {
    let n = g.n();
    let mut side = vec![u8::MAX; n];
    for r in 0..n {
        if side[r] != u8::MAX {
            continue;
        }
        side[r] = 0;
        let mut q = VecDeque::from([r]);
        while let Some(v) = q.pop_front() {
            for u in g.neighbors(v) {
                if side[u] == u8::MAX {
                    side[u] = 1 - side[v];
                    q.push_back(u);
                } else if side[u] == side[v] {
                    return None;
                }
            }
        }
    }
    let left = (0..n).filter(|&v| side[v] == 0).collect();
    let right = (0..n).filter(|&v| side[v] == 1).collect();
    Some((left, right))
}

pub fn is_co_bipartite(g: &Graph) -> bool {
    is_bipartite(&g.complement()).is_some()
}

fn guard(g: &Graph, what: &'static str) -> Result<()> {
    if g.n() > RECOGNIZER_LIMIT {
        return Err(Error::TooLarge {
            what,
            got: g.n(),
            limit: RECOGNIZER_LIMIT,
        });
    }
    Ok(())
}

/// Complement of `K_{p,q}` minus a maximum matching, `p, q >= 1`.
pub fn is_matched_co_bipartite(g: &Graph) -> Result<bool> {
    guard(g, "vertex count for matched co-bipartite recognition")?;
    let h = g.complement();
    let n = h.n();
    if n < 2 {
        return Ok(false);
    }
    let comps = h.components();
    let mut sides = Vec::with_capacity(comps.len());
    for c in &comps {
        let (sub, map) = h.induced(c);
        let Some((l, _)) = is_bipartite(&sub) else {
            return Ok(false);
        };
        let left: VertexSet = l.iter().map(|i| map[i]).collect();
        sides.push((left.clone(), c.difference(&left)));
    }
    // Flipping every component at once gives the mirror assignment, so the
    // first component stays fixed.
    let flips = 1u64 << (comps.len() - 1);
    for mask in 0..flips {
        let mut x = VertexSet::new();
        for (i, (l, r)) in sides.iter().enumerate() {
            let flip = i > 0 && mask & (1 << (i - 1)) != 0;
            x = x.union(if flip { r } else { l });
        }
        let y = h.vertices().difference(&x);
        if x.is_empty() || y.is_empty() {
            continue;
        }
        if cross_nonedges_form_max_matching(&h, &x, &y) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn cross_nonedges_form_max_matching(h: &Graph, x: &VertexSet, y: &VertexSet) -> bool {
    let mut missing = 0;
    for (a, b) in [(x, y), (y, x)] {
        for v in a {
            let gaps = b.len() - h.neighbors(v).intersection_len(b);
            if gaps > 1 {
                return false;
            }
            missing += gaps;
        }
    }
    // each missing pair was counted from both ends
    missing / 2 == x.len().min(y.len())
}

/// Maximum cardinality search followed by a perfect-elimination check.
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = VertexSet::new();
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited.contains(v))
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited vertex remains");
        // Earlier-visited neighbours must already form a clique.
        let earlier = g.neighbors(v).intersection(&visited);
        if !g.is_clique(&earlier) {
            return false;
        }
        visited.insert(v);
        for u in g.neighbors(v) {
            weight[u] += 1;
        }
    }
    true
}

/// A clique `K` and an independent set `S` whose cross edges form a matching
/// saturating `S`, with `|K| = |S|` or `|K| = |S| + 1`.
pub fn is_thin_spider(g: &Graph) -> Result<bool> {
    guard(g, "vertex count for thin spider recognition")?;
    Ok(thin_spider_legs(g).is_some())
}

/// The leg set `S` of a thin-spider decomposition, if one exists.
pub fn thin_spider_legs(g: &Graph) -> Option<VertexSet> {
    let n = g.n();
    if n <= 4 {
        // Small cases: a clique vertex may itself have degree one.
        return (0..1u64 << n)
            .map(VertexSet::from_mask)
            .find(|s| spider_split_ok(g, s));
    }
    // With five or more vertices |K| >= 3, so clique vertices have degree at
    // least two and legs are exactly the degree-one vertices.
    let legs: VertexSet = (0..n).filter(|&v| g.degree(v) == 1).collect();
    spider_split_ok(g, &legs).then_some(legs)
}

fn spider_split_ok(g: &Graph, s: &VertexSet) -> bool {
    let k = g.vertices().difference(s);
    if !(k.len() == s.len() || k.len() == s.len() + 1) {
        return false;
    }
    if !g.is_clique(&k) || !g.is_independent(s) {
        return false;
    }
    let mut hit = VertexSet::new();
    for v in s {
        let nb = g.neighbors(v);
        if nb.len() != 1 {
            return false;
        }
        let u = nb.first().expect("one neighbour");
        if hit.contains(u) {
            return false;
        }
        hit.insert(u);
    }
    true
}

/// For a prime graph: is it bipartite with halves `b_1..b_h`, `w_1..w_h`
/// where `N(b_i) = {w_1, .., w_{h-i+1}}`?
pub fn check_p5free_bipartite_staircase(g: &Graph) -> Result<bool> {
    if !is_prime(g) {
        return Err(Error::NotPrime);
    }
    let n = g.n();
    if n == 0 || n % 2 == 1 || !g.is_connected() {
        return Ok(false);
    }
    let Some((l, r)) = is_bipartite(g) else {
        return Ok(false);
    };
    Ok(staircase_side(g, &l, &r) || staircase_side(g, &r, &l))
}

fn staircase_side(g: &Graph, b: &VertexSet, w: &VertexSet) -> bool {
    let h = b.len();
    if w.len() != h {
        return false;
    }
    let mut bs = b.to_vec();
    bs.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    // degrees h, h-1, .., 1 with nested neighbourhoods
    for (i, pair) in bs.windows(2).enumerate() {
        let (hi, lo) = (g.neighbors(pair[0]), g.neighbors(pair[1]));
        if !lo.is_subset(hi) || g.degree(pair[0]) != h - i || g.degree(pair[1]) != h - i - 1 {
            return false;
        }
    }
    bs.first().is_some_and(|&top| g.degree(top) == h)
}

pub fn is_tight_clique_cutset(g: &Graph, q: &VertexSet) -> bool {
    if q.is_empty() || !g.is_clique(q) {
        return false;
    }
    let rest = g.vertices().difference(q);
    if rest.is_empty() {
        return false;
    }
    let (sub, map) = g.induced(&rest);
    let comps = sub.components();
    if comps.len() <= g.components().len() {
        return false;
    }
    comps.iter().any(|c| {
        let c: VertexSet = c.iter().map(|i| map[i]).collect();
        g.is_complete_to(&c, q)
    })
}

/// Smallest (then lexicographically first) tight clique cutset.
pub fn find_tight_clique_cutset(g: &Graph) -> Result<Option<VertexSet>> {
    guard(g, "vertex count for clique cutset search")?;
    let mut cliques = Vec::new();
    let mut cur = Vec::new();
    collect_cliques(g, &g.vertices(), &mut cur, &mut cliques);
    cliques.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(cliques
        .into_iter()
        .map(|c| c.into_iter().collect::<VertexSet>())
        .find(|q| is_tight_clique_cutset(g, q)))
}

fn collect_cliques(g: &Graph, cand: &VertexSet, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    for v in cand {
        cur.push(v);
        out.push(cur.clone());
        let next: VertexSet = g.neighbors(v).intersection(cand).iter().filter(|&u| u > v).collect();
        collect_cliques(g, &next, cur, out);
        cur.pop();
    }
}

/// Any vertex adjacent to all others; `K1` counts.
pub fn has_universal_vertex(g: &Graph) -> Option<usize> {
    let n = g.n();
    (0..n).find(|&v| g.degree(v) + 1 == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::*;

    fn has(g: &Graph, p: &Graph) -> bool {
        contains_induced(g, p).unwrap().is_some()
    }

    #[test]
    fn embeddings() {
        assert!(has(&house(), &cycle(4)));
        assert!(!has(&cycle(5), &path(5)));
        assert!(has(&figure2_base(), &cycle(6)));
        let map = contains_induced(&house(), &cycle(4)).unwrap().unwrap();
        let img: VertexSet = map.iter().copied().collect();
        let (sub, _) = house().induced(&img);
        assert!(crate::graph::are_isomorphic(&sub, &cycle(4)));
        assert_eq!(contains_induced(&path(3), &Graph::empty(9)), Err(Error::PatternTooLarge(9)));
    }

    #[test]
    fn classes() {
        assert!(in_class(&cycle(5), &ClassSpec::p5_diamond_free()));
        assert!(!in_class(&house(), &ClassSpec::new(vec![PatternName::House]).unwrap()));
        assert!(ClassSpec::new(vec![]).is_err());
        assert!(in_class(&path(7), &ClassSpec::all_graphs()));
        assert_eq!(ClassSpec::parse("diamond,P5").unwrap(), ClassSpec::p5_diamond_free());
        assert_eq!("co-fork".parse::<PatternName>().unwrap(), PatternName::CoFork);
    }

    #[test]
    fn bipartition() {
        assert!(is_bipartite(&complete_bipartite(2, 3)).is_some());
        assert!(is_bipartite(&cycle(5)).is_none());
        assert!(is_bipartite(&path(4).sibling()).is_some());
        assert!(is_co_bipartite(&complete(5)));
        assert!(!is_co_bipartite(&cycle(5)));
    }

    #[test]
    fn matched_co_bipartite() {
        // K_{3,3} minus a perfect matching is C6
        let kpq = complete_bipartite(3, 3);
        let mut h = kpq.clone();
        for i in 0..3 {
            h.remove_edge(i, 3 + i);
        }
        assert!(is_matched_co_bipartite(&h.complement()).unwrap());
        assert!(!is_matched_co_bipartite(&complete(4)).unwrap());
        // p != q: K_{2,3} minus two matching edges
        let mut h = complete_bipartite(2, 3);
        h.remove_edge(0, 2);
        h.remove_edge(1, 3);
        assert!(is_matched_co_bipartite(&h.complement()).unwrap());
        // a non-maximum matching removed does not count
        let mut h = complete_bipartite(2, 3);
        h.remove_edge(0, 2);
        assert!(!is_matched_co_bipartite(&h.complement()).unwrap());
    }

    #[test]
    fn chordality() {
        assert!(is_chordal(&path(6)));
        assert!(is_chordal(&star(4)));
        assert!(!is_chordal(&cycle(4)));
        assert!(!is_chordal(&cycle(6)));
        assert!(is_chordal(&diamond()));
        for (k, s) in [(1, 0), (1, 1), (2, 1), (3, 3), (4, 3), (6, 6)] {
            assert!(is_chordal(&thin_spider(k, s)));
            assert!(is_chordal(&thin_spider(k, s).complement()));
        }
    }

    #[test]
    fn thin_spiders() {
        assert!(is_thin_spider(&path(4)).unwrap());
        assert!(!is_thin_spider(&cycle(5)).unwrap());
        assert!(is_thin_spider(&thin_spider(4, 3)).unwrap());
        assert!(!is_thin_spider(&star(3)).unwrap());
        assert!(is_thin_spider(&Graph::empty(21)).is_err());
    }

    #[test]
    fn staircases() {
        assert!(check_p5free_bipartite_staircase(&staircase(3)).unwrap());
        assert!(!check_p5free_bipartite_staircase(&cycle(6)).unwrap());
        assert_eq!(check_p5free_bipartite_staircase(&complete(3)), Err(Error::NotPrime));
        let g = staircase(3);
        assert!((0..6).any(|v| g.degree(v) == 1));
    }

    #[test]
    fn cutsets() {
        assert_eq!(find_tight_clique_cutset(&path(3)).unwrap(), Some(VertexSet::singleton(1)));
        assert_eq!(find_tight_clique_cutset(&cycle(5)).unwrap(), None);
        let g = staircase(3);
        let leaf = (0..6).find(|&v| g.degree(v) == 1).unwrap();
        let nb = g.neighbors(leaf).clone();
        assert!(is_tight_clique_cutset(&g, &nb));
        assert!(find_tight_clique_cutset(&g).unwrap().is_some());
    }

    #[test]
    fn universal_vertices() {
        assert!(has_universal_vertex(&Graph::empty(1).join(&cycle(4))).is_some());
        assert_eq!(has_universal_vertex(&cycle(5)), None);
        assert_eq!(has_universal_vertex(&Graph::empty(1)), Some(0));
    }
}
