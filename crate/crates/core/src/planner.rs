//! Recursive recoloring planner.
//!
//! Rules are tried in a fixed order: components, join, dominated non-adjacent
//! twin, low-degree vertex, maximal modules via the clique skeleton, and a
//! breadth-first leaf. Every rule works inside an explicit palette (a set of
//! actual colors) so sub-plans can be confined to colors that are safe for
//! the rest of the graph. A join or module rule that fails hands the level to
//! the breadth-first leaf; failures of the deletion rules are exact because a
//! walk on `G` restricts to a walk on any induced subgraph.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coloring::{chi, chromatic_number, is_proper, Color, ColorSet, Coloring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lifting::{clique_route, retarget_blocks, LiftContext};
use crate::modules::{clique_skeleton, maximal_module_partition};
use crate::patterns::find_tight_clique_cutset;
use crate::reconfig::{find_path_with_budget, state_budget, Census, DEFAULT_PATH_BUDGET};
use crate::schedule::RecoloringSchedule;

/// Planner limits.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Stored colorings allowed in each breadth-first leaf.
    pub bfs_states: u64,
    /// On a top-level `NoPath`, confirm it with a census of `R_ℓ(G)`.
    pub certify: bool,
    /// Look for tight clique cutsets (recognition only) on graphs this small.
    pub cutset_scan_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            bfs_states: DEFAULT_PATH_BUDGET,
            certify: true,
            cutset_scan_limit: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Rule {
    Trivial,
    Components { count: usize },
    Join { side: Vec<usize> },
    DominatedTwin { removed: usize, twin: usize },
    LowDegree { removed: usize, degree: usize },
    ModuleReduction { blocks: Vec<Vec<usize>>, sizes: Vec<usize> },
    CliqueRoute,
    BfsLeaf { fallback_from: Option<String> },
}

/// Which rule produced each part of a schedule.
#[derive(Debug, Clone, Serialize)]
pub struct PlanTrace {
    pub rule: Rule,
    pub vertices: usize,
    pub palette: Vec<Color>,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight_clique_cutset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<PlanTrace>,
}

type Steps = Vec<(usize, Color)>;

pub struct Planner {
    budget: Budget,
}

impl Planner {
    pub fn new(budget: Budget) -> Self {
        Planner { budget }
    }

    fn node(&self, g: &Graph, pal: ColorSet, rule: Rule, steps: usize, children: Vec<PlanTrace>) -> PlanTrace {
        let tight_clique_cutset = (g.n() >= 3 && g.n() <= self.budget.cutset_scan_limit)
            .then(|| find_tight_clique_cutset(g).ok().flatten())
            .flatten()
            .map(|q| q.to_vec());
        PlanTrace {
            rule,
            vertices: g.n(),
            palette: pal.to_vec(),
            steps,
            tight_clique_cutset,
            children,
        }
    }

    /// Plans from `a` to `b` on `g` using only colors of `pal`.
    pub(crate) fn plan_in(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color]) -> Result<(Steps, PlanTrace)> {
        debug_assert!(a.iter().chain(b).all(|&c| pal.contains(c)));
        if a == b {
            return Ok((Vec::new(), self.node(g, pal, Rule::Trivial, 0, Vec::new())));
        }
        let comps = g.components();
        if comps.len() > 1 {
            return self.by_components(g, pal, a, b, &comps);
        }
        if g.n() >= 2 && !g.complement().is_connected() {
            match self.by_join(g, pal, a, b) {
                Ok(r) => return Ok(r),
                Err(Error::BudgetExhausted(x)) => return Err(Error::BudgetExhausted(x)),
                Err(e) => return self.bfs(g, pal, a, b, Some(format!("join: {e}"))),
            }
        }
        if let Some((u, v)) = dominated_twin(g) {
            return self.by_twin(g, pal, a, b, u, v);
        }
        if let Some(v) = (0..g.n()).find(|&v| g.degree(v) + 2 <= pal.len()) {
            return self.by_low_degree(g, pal, a, b, v);
        }
        if g.n() >= 3 {
            if let Ok(part) = maximal_module_partition(g) {
                if part.m() < g.n() {
                    match self.by_modules(g, pal, a, b) {
                        Ok(Some(r)) => return Ok(r),
                        Ok(None) => {}
                        Err(Error::BudgetExhausted(x)) => return Err(Error::BudgetExhausted(x)),
                        Err(e) => return self.bfs(g, pal, a, b, Some(format!("modules: {e}"))),
                    }
                }
            }
        }
        if g.is_clique(&g.vertices()) {
            let mut cur = a.to_vec();
            let mut steps = Vec::new();
            let members: Vec<usize> = (0..g.n()).collect();
            if clique_route(&members, &mut cur, b, pal, &mut steps).is_ok() {
                let n = steps.len();
                return Ok((steps, self.node(g, pal, Rule::CliqueRoute, n, Vec::new())));
            }
        }
        self.bfs(g, pal, a, b, None)
    }

    fn bfs(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color], fallback: Option<String>) -> Result<(Steps, PlanTrace)> {
        let colors = pal.to_vec();
        let idx = |c: Color| colors.iter().position(|&x| x == c).expect("in palette") as Color + 1;
        let k = colors.len() as Color;
        let ca = Coloring::new_unchecked(a.iter().map(|&c| idx(c)).collect(), k);
        let cb = Coloring::new_unchecked(b.iter().map(|&c| idx(c)).collect(), k);
        match find_path_with_budget(g, k, &ca, &cb, self.budget.bfs_states)? {
            Some(p) => {
                let steps: Steps = p.steps.iter().map(|&(v, c)| (v, colors[c as usize - 1])).collect();
                let n = steps.len();
                Ok((steps, self.node(g, pal, Rule::BfsLeaf { fallback_from: fallback }, n, Vec::new())))
            }
            None => Err(Error::NoPath(format!(
                "exhaustive search on {} vertices with palette {:?}",
                g.n(),
                colors
            ))),
        }
    }

    fn by_components(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color], comps: &[VertexSet]) -> Result<(Steps, PlanTrace)> {
        let mut steps = Vec::new();
        let mut children = Vec::new();
        for c in comps {
            let (sub, map) = g.induced(c);
            let sa: Vec<Color> = map.iter().map(|&v| a[v]).collect();
            let sb: Vec<Color> = map.iter().map(|&v| b[v]).collect();
            let (s, t) = self.plan_in(&sub, pal, &sa, &sb)?;
            steps.extend(s.into_iter().map(|(v, c)| (map[v], c)));
            children.push(t);
        }
        let n = steps.len();
        let rule = Rule::Components { count: comps.len() };
        Ok((steps, self.node(g, pal, rule, n, children)))
    }

    /// Plans on the subgraph induced by `side`, inside `pal`, and writes the
    /// moves back into `cur`.
    fn sub_plan(
        &self,
        g: &Graph,
        side: &VertexSet,
        pal: ColorSet,
        cur: &mut [Color],
        target: &[Color],
        steps: &mut Steps,
        children: &mut Vec<PlanTrace>,
    ) -> Result<()> {
        let (sub, map) = g.induced(side);
        let sa: Vec<Color> = map.iter().map(|&v| cur[v]).collect();
        let sb: Vec<Color> = map.iter().map(|&v| target[v]).collect();
        let (s, t) = self.plan_in(&sub, pal, &sa, &sb)?;
        for (v, c) in s {
            cur[map[v]] = c;
            steps.push((map[v], c));
        }
        children.push(t);
        Ok(())
    }

    /// Join `G1 * G2`: the two sides never share a color. Each endpoint is
    /// first reduced to use exactly `χ(G_i)` colors per side, then color
    /// classes are relabelled through a free color until the side color sets
    /// agree, and finally each side is planned inside its own colors.
    fn by_join(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color]) -> Result<(Steps, PlanTrace)> {
        let co = g.complement().components();
        let s1 = co[0].clone();
        let s2 = g.vertices().difference(&s1);
        let sides = [s1, s2];
        let chis: Vec<(usize, Coloring)> = sides
            .iter()
            .map(|s| chromatic_number(&g.induced(s).0))
            .collect::<Result<_>>()?;
        if pal.len() < chis[0].0 + chis[1].0 + 1 {
            return Err(Error::PaletteTooSmall(pal.len() as Color));
        }
        let mut children = Vec::new();
        let (phi, from_a) = self.join_reduce(g, pal, a, &sides, &chis, &mut children)?;
        let (psi, from_b) = self.join_reduce(g, pal, b, &sides, &chis, &mut children)?;
        let mut cur = phi;
        let mut steps = from_a;
        let want: Vec<ColorSet> = sides.iter().map(|s| s.iter().map(|v| psi[v]).collect()).collect();
        relabel_sides(g, pal, &sides, &want, &mut cur, &mut steps)?;
        for i in 0..2 {
            let side_pal = pal.difference(want[1 - i]);
            self.sub_plan(g, &sides[i], side_pal, &mut cur, &psi, &mut steps, &mut children)?;
        }
        debug_assert_eq!(cur, psi);
        steps.extend(reverse_steps(b, &from_b));
        let n = steps.len();
        let rule = Rule::Join { side: sides[0].to_vec() };
        Ok((steps, self.node(g, pal, rule, n, children)))
    }

    /// Reduces `start` until side `i` uses exactly `χ(G_i)` colors. Returns
    /// the reduced coloring and the moves.
    fn join_reduce(
        &self,
        g: &Graph,
        pal: ColorSet,
        start: &[Color],
        sides: &[VertexSet; 2],
        chis: &[(usize, Coloring)],
        children: &mut Vec<PlanTrace>,
    ) -> Result<(Vec<Color>, Steps)> {
        let mut cur = start.to_vec();
        let mut steps = Vec::new();
        let used = |cur: &[Color], s: &VertexSet| -> ColorSet { s.iter().map(|v| cur[v]).collect() };
        // The side already at χ colors stays put while the other shrinks;
        // otherwise side 0 goes first.
        let order = if used(&cur, &sides[0]).len() == chis[0].0 { [1, 0] } else { [0, 1] };
        for i in order {
            let mine = used(&cur, &sides[i]);
            let (k, opt) = &chis[i];
            if mine.len() == *k {
                continue;
            }
            let colors = mine.to_vec();
            let mut target = cur.clone();
            for (j, v) in sides[i].iter().enumerate() {
                target[v] = colors[opt.get(j) as usize - 1];
            }
            let side_pal = pal.difference(used(&cur, &sides[1 - i]));
            self.sub_plan(g, &sides[i], side_pal, &mut cur, &target, &mut steps, children)?;
        }
        Ok((cur, steps))
    }

    /// `N(u) ⊆ N(v)`, `u` and `v` non-adjacent: plan without `u`, with `u`
    /// shadowing `v`.
    fn by_twin(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color], u: usize, v: usize) -> Result<(Steps, PlanTrace)> {
        let (sub, map) = g.delete_vertex(u);
        let pos_v = map.iter().position(|&x| x == v).expect("v kept");
        let sa: Vec<Color> = map.iter().map(|&x| a[x]).collect();
        let sb: Vec<Color> = map.iter().map(|&x| b[x]).collect();
        let (sub_steps, t) = self.plan_in(&sub, pal, &sa, &sb)?;
        let mut steps = Vec::new();
        if a[u] != a[v] {
            steps.push((u, a[v]));
        }
        for (x, c) in sub_steps {
            if x == pos_v {
                steps.push((u, c));
            }
            steps.push((map[x], c));
        }
        if b[u] != b[v] {
            steps.push((u, b[u]));
        }
        let n = steps.len();
        let rule = Rule::DominatedTwin { removed: u, twin: v };
        Ok((steps, self.node(g, pal, rule, n, vec![t])))
    }

    /// A vertex of degree at most `|pal| - 2` always has a spare color: plan
    /// without it and dodge neighbours as they arrive.
    fn by_low_degree(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color], v: usize) -> Result<(Steps, PlanTrace)> {
        let (sub, map) = g.delete_vertex(v);
        let sa: Vec<Color> = map.iter().map(|&x| a[x]).collect();
        let sb: Vec<Color> = map.iter().map(|&x| b[x]).collect();
        let (sub_steps, t) = self.plan_in(&sub, pal, &sa, &sb)?;
        let mut cur = a.to_vec();
        let mut steps = Vec::new();
        for (x, c) in sub_steps {
            let w = map[x];
            if g.has_edge(v, w) && cur[v] == c {
                let blocked: ColorSet = g.neighbors(v).iter().map(|y| cur[y]).collect();
                let mut free = pal.difference(blocked);
                free.remove(c);
                let d = free.min().expect("low degree leaves a spare color");
                cur[v] = d;
                steps.push((v, d));
            }
            cur[w] = c;
            steps.push((w, c));
        }
        if cur[v] != b[v] {
            steps.push((v, b[v]));
        }
        let n = steps.len();
        let rule = Rule::LowDegree { removed: v, degree: g.degree(v) };
        Ok((steps, self.node(g, pal, rule, n, vec![t])))
    }

    /// Maximal modules: shrink every block to `χ(G[S_p])` colors, walk on the
    /// clique skeleton to a fixed optimal coloring, expand back, and meet in
    /// the middle with a within-module retarget. `Ok(None)` means the rule
    /// does not apply (the skeleton is no smaller).
    fn by_modules(&self, g: &Graph, pal: ColorSet, a: &[Color], b: &[Color]) -> Result<Option<(Steps, PlanTrace)>> {
        let map = clique_skeleton(g)?;
        if map.host.n() >= g.n() {
            return Ok(None);
        }
        let ctx = LiftContext {
            base: g.clone(),
            partition: map.source_blocks.clone(),
            block_of: map.source_blocks.block_of(g.n()),
            host_block_of: {
                let mut hb = vec![0; map.host.n()];
                for (p, q) in map.cliques.iter().enumerate() {
                    for x in q {
                        hb[x] = p;
                    }
                }
                hb
            },
            chi: chi(&map.host),
            palette: pal.to_vec().last().copied().unwrap_or(0),
            skeleton_map: map,
        };
        let (_, psi_h) = chromatic_number(ctx.host())?;
        let hcolors = pal.to_vec();
        let psi_h: Vec<Color> = psi_h.as_slice().iter().map(|&c| hcolors[c as usize - 1]).collect();
        let mut children = Vec::new();
        let to_a = self.module_descend(&ctx, pal, a, &psi_h, &mut children)?;
        let to_b = self.module_descend(&ctx, pal, b, &psi_h, &mut children)?;
        let end_a = apply(a, &to_a);
        let end_b = apply(b, &to_b);
        let (mid, traces) = retarget_blocks(self, g, ctx.blocks(), pal, &end_a, &end_b)?;
        children.extend(traces);
        let mut steps = to_a;
        steps.extend(mid);
        steps.extend(reverse_steps(b, &to_b));
        let n = steps.len();
        let rule = Rule::ModuleReduction {
            blocks: ctx.blocks().iter().map(|s| s.to_vec()).collect(),
            sizes: ctx.skeleton_map.sizes.clone(),
        };
        Ok(Some((steps, self.node(g, pal, rule, n, children))))
    }

    /// From `start`, reduce every block to `k_p` colors, then follow a
    /// skeleton walk to `psi_h` and expand it. The end coloring uses exactly
    /// `psi_h(Q_p)` on each `S_p`.
    fn module_descend(
        &self,
        ctx: &LiftContext,
        pal: ColorSet,
        start: &[Color],
        psi_h: &[Color],
        children: &mut Vec<PlanTrace>,
    ) -> Result<Steps> {
        let g = &ctx.base;
        let mut cur = start.to_vec();
        let mut steps = Vec::new();
        for (p, s) in ctx.blocks().iter().enumerate() {
            let mine: ColorSet = s.iter().map(|v| cur[v]).collect();
            let k = ctx.skeleton_map.sizes[p];
            if mine.len() == k {
                continue;
            }
            let outside: ColorSet = g.external_neighbors(s).iter().map(|v| cur[v]).collect();
            let colors = mine.to_vec();
            let local = &ctx.skeleton_map.block_colorings[p];
            let mut target = cur.clone();
            for (i, v) in s.iter().enumerate() {
                target[v] = colors[local.get(i) as usize - 1];
            }
            self.sub_plan(g, s, pal.difference(outside), &mut cur, &target, &mut steps, children)?;
        }
        // Every block now uses exactly k_p colors, so the transfer is exact.
        let k = pal.to_vec().last().copied().unwrap_or(1);
        let alpha = Coloring::new_unchecked(cur.clone(), k);
        let h_start = crate::lifting::transfer_to_skeleton(ctx, &alpha)?;
        let (h_steps, t) = self.plan_in(ctx.host(), pal, h_start.as_slice(), psi_h)?;
        children.push(t);
        let h_walk = RecoloringSchedule {
            start: h_start,
            steps: h_steps,
        };
        let lifted = crate::lifting::lift_path_from_skeleton(ctx, &h_walk, &alpha)?;
        steps.extend(lifted.steps);
        Ok(steps)
    }
}

/// The moves that undo `steps` applied from `start`, in order.
fn reverse_steps(start: &[Color], steps: &Steps) -> Steps {
    let mut cur = start.to_vec();
    let mut undo = Vec::with_capacity(steps.len());
    for &(v, c) in steps {
        undo.push((v, cur[v]));
        cur[v] = c;
    }
    undo.reverse();
    undo
}

fn apply(start: &[Color], steps: &Steps) -> Vec<Color> {
    let mut c = start.to_vec();
    for &(v, x) in steps {
        c[v] = x;
    }
    c
}

/// Moves whole color classes through free colors until side `i` uses
/// exactly the colors `want[i]`. Sides never share colors, and a class can
/// move to any color unused in the whole graph.
fn relabel_sides(
    g: &Graph,
    pal: ColorSet,
    sides: &[VertexSet; 2],
    want: &[ColorSet],
    cur: &mut [Color],
    steps: &mut Steps,
) -> Result<()> {
    let _ = g;
    let side_colors = |cur: &[Color], i: usize| -> ColorSet { sides[i].iter().map(|v| cur[v]).collect() };
    let move_class = |cur: &mut [Color], steps: &mut Steps, i: usize, from: Color, to: Color| {
        for v in sides[i].iter() {
            if cur[v] == from {
                cur[v] = to;
                steps.push((v, to));
            }
        }
    };
    loop {
        let misplaced = (0..2).find_map(|i| {
            side_colors(cur, i)
                .difference(want[i])
                .min()
                .map(|x| (i, x))
        });
        let Some((i, x)) = misplaced else {
            return Ok(());
        };
        let all: ColorSet = cur.iter().copied().collect();
        let open = want[i].difference(side_colors(cur, i));
        let y = match open.difference(all).min() {
            Some(y) => y,
            None => {
                // Every open target is held by the other side; move that
                // class out of the way first.
                let y = open.min().expect("side has a missing target color");
                let j = 1 - i;
                let free = pal.difference(all);
                let z = free
                    .intersection(want[j])
                    .min()
                    .or(free.min())
                    .ok_or_else(|| Error::PreconditionViolated("no free color for relabelling".into()))?;
                move_class(cur, steps, j, y, z);
                y
            }
        };
        move_class(cur, steps, i, x, y);
    }
}

/// Some `u` with a non-adjacent `v` such that `N(u) ⊆ N(v)`; smallest `u`,
/// then smallest `v`.
fn dominated_twin(g: &Graph) -> Option<(usize, usize)> {
    (0..g.n()).find_map(|u| {
        (0..g.n())
            .find(|&v| v != u && !g.has_edge(u, v) && g.neighbors(u).is_subset(g.neighbors(v)))
            .map(|v| (u, v))
    })
}

/// Plans a walk from `a` to `b` in `R_ℓ(G)`. Requires `ℓ >= χ(G) + 1`.
/// A `NoPath` error carries the census certificate when one was computed.
pub fn plan_recoloring(
    g: &Graph,
    ell: Color,
    a: &Coloring,
    b: &Coloring,
    budget: Budget,
) -> Result<(RecoloringSchedule, PlanTrace)> {
    for c in [a, b] {
        if let Some(&x) = c.as_slice().iter().find(|&&x| x == 0 || x > ell) {
            return Err(Error::ColorOutOfRange { color: x, k: ell });
        }
        if !is_proper(g, c)? {
            return Err(Error::ImproperEndpoint);
        }
    }
    let chi = chi(g);
    if (ell as usize) < chi + 1 {
        return Err(Error::PaletteTooSmall(ell));
    }
    let planner = Planner::new(budget);
    match planner.plan_in(g, ColorSet::palette(ell), a.as_slice(), b.as_slice()) {
        Ok((steps, trace)) => {
            let sched = RecoloringSchedule {
                start: Coloring::new_unchecked(a.as_slice().to_vec(), ell),
                steps,
            };
            sched.validate(g, b)?;
            Ok((sched, trace))
        }
        Err(Error::NoPath(why)) if budget.certify => Err(Error::NoPath(certify(g, ell, a, b, why))),
        Err(e) => Err(e),
    }
}

fn certify(g: &Graph, ell: Color, a: &Coloring, b: &Coloring, why: String) -> String {
    match Census::run_with_budget(g, ell, state_budget()) {
        Ok(c) => match (c.component_of(a.as_slice()), c.component_of(b.as_slice())) {
            (Some(x), Some(y)) if x != y => format!(
                "{why}; certified by census: endpoints lie in components {x} and {y} of {}",
                c.num_components
            ),
            _ => format!("{why}; census did NOT confirm separation"),
        },
        Err(e) => format!("{why}; census certificate unavailable ({e})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn col(v: &[Color], k: Color) -> Coloring {
        Coloring::new(v.to_vec(), k).unwrap()
    }

    fn check(g: &Graph, ell: Color, a: &Coloring, b: &Coloring) -> PlanTrace {
        let (s, t) = plan_recoloring(g, ell, a, b, Budget::default()).unwrap();
        s.validate(g, b).unwrap();
        t
    }

    #[test]
    fn identical_endpoints() {
        let g = named::cycle(5);
        let a = col(&[1, 2, 1, 2, 3], 4);
        let t = check(&g, 4, &a, &a);
        assert_eq!(t.rule, Rule::Trivial);
    }

    #[test]
    fn joins_and_modules() {
        // K_{2,3}: a join of two independent sets
        let g = named::complete_bipartite(2, 3);
        let a = col(&[1, 1, 2, 2, 2], 3);
        let b = col(&[2, 3, 1, 1, 1], 3);
        let t = check(&g, 3, &a, &b);
        assert!(matches!(t.rule, Rule::Join { .. } | Rule::DominatedTwin { .. }));
        let g = named::figure3();
        let (_, opt) = chromatic_number(&g).unwrap();
        let a = opt.with_palette(5).unwrap();
        let mut b = a.clone();
        for v in 0..g.n() {
            b.set(v, 6 - a.get(v));
        }
        check(&g, 5, &a, &b);
    }

    #[test]
    fn figure2_blowup_has_no_path_from_its_labelling() {
        let g = named::figure2_blowup();
        let a = named::figure2_labeling();
        let (_, opt) = chromatic_number(&g).unwrap();
        let b = opt.with_palette(6).unwrap();
        match plan_recoloring(&g, 6, &a, &b, Budget::default()) {
            Err(Error::NoPath(msg)) => assert!(msg.contains("certified by census"), "{msg}"),
            other => panic!("expected NoPath, got {other:?}"),
        }
    }

    #[test]
    fn six_cycle_is_stuck_at_three() {
        let g = named::cycle(6);
        let a = col(&[1, 2, 3, 1, 2, 3], 3);
        let b = col(&[1, 2, 1, 2, 1, 2], 3);
        assert!(matches!(
            plan_recoloring(&g, 3, &a, &b, Budget::default()),
            Err(Error::NoPath(_))
        ));
    }
}
