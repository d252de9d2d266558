//! Schedule transformations between a graph and its clique skeleton, the
//! within-module retarget, and the pendant lift for siblings.

use crate::bitset::VertexSet;
use crate::coloring::{chi, is_proper, Color, ColorSet, Coloring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modules::{clique_skeleton, CliqueSkeletonMap, ModulePartition};
use crate::planner::{Budget, PlanTrace, Planner};
use crate::schedule::RecoloringSchedule;

/// `G`, its maximal modules, its clique skeleton `H` and the palette `ℓ`.
#[derive(Debug, Clone)]
pub struct LiftContext {
    pub base: Graph,
    pub partition: ModulePartition,
    pub skeleton_map: CliqueSkeletonMap,
    pub palette: Color,
    pub chi: usize,
    /// Block of every vertex of `G`.
    pub block_of: Vec<usize>,
    /// Block of every vertex of `H`.
    pub host_block_of: Vec<usize>,
}

impl LiftContext {
    /// Requires `g` connected and co-connected and `ℓ >= χ(g) + 1`.
    pub fn new(g: &Graph, ell: Color) -> Result<Self> {
        let map = clique_skeleton(g)?;
        let chi = chi(g);
        if (ell as usize) < chi + 1 {
            return Err(Error::PaletteTooSmall(ell));
        }
        let partition = map.source_blocks.clone();
        let block_of = partition.block_of(g.n());
        let mut host_block_of = vec![0; map.host.n()];
        for (p, q) in map.cliques.iter().enumerate() {
            for v in q {
                host_block_of[v] = p;
            }
        }
        Ok(LiftContext {
            base: g.clone(),
            partition,
            skeleton_map: map,
            palette: ell,
            chi,
            block_of,
            host_block_of,
        })
    }

    pub fn host(&self) -> &Graph {
        &self.skeleton_map.host
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.partition.blocks
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.skeleton_map.cliques
    }
}

fn require_proper(g: &Graph, c: &Coloring) -> Result<()> {
    if !is_proper(g, c)? {
        return Err(Error::ImproperEndpoint);
    }
    Ok(())
}

/// Colors each `Q_p` with the `k_p` smallest colors of `a(S_p)`, ascending
/// along the clique's vertices.
pub fn transfer_to_skeleton(ctx: &LiftContext, a: &Coloring) -> Result<Coloring> {
    require_proper(&ctx.base, a)?;
    let mut out = vec![0 as Color; ctx.host().n()];
    for (s, q) in ctx.blocks().iter().zip(ctx.cliques()) {
        let avail = a.colors_on(s);
        assert!(avail.len() >= q.len(), "a proper coloring uses at least χ colors per block");
        for (v, c) in q.iter().zip(avail.iter()) {
            out[v] = c;
        }
    }
    let h = Coloring::new_unchecked(out, a.k());
    debug_assert!(is_proper(ctx.host(), &h).unwrap());
    Ok(h)
}

/// Colors each `G[S_p]` optimally with exactly the colors of `b(Q_p)`.
pub fn transfer_from_skeleton(ctx: &LiftContext, b: &Coloring) -> Result<Coloring> {
    require_proper(ctx.host(), b)?;
    let mut out = vec![0 as Color; ctx.base.n()];
    for (p, (s, q)) in ctx.blocks().iter().zip(ctx.cliques()).enumerate() {
        let pal = b.colors_on(q).to_vec();
        let local = &ctx.skeleton_map.block_colorings[p];
        for (i, v) in s.iter().enumerate() {
            out[v] = pal[local.get(i) as usize - 1];
        }
    }
    let g = Coloring::new_unchecked(out, b.k());
    debug_assert!(is_proper(&ctx.base, &g).unwrap());
    Ok(g)
}

/// Moves a clique from its current injective coloring to `target`, using
/// colors of `palette` that are not currently on the clique as buffers.
/// The caller guarantees nothing outside the clique conflicts with
/// `palette`.
pub(crate) fn clique_route(
    clique: &[usize],
    cur: &mut [Color],
    target: &[Color],
    palette: ColorSet,
    out: &mut Vec<(usize, Color)>,
) -> Result<()> {
    loop {
        let held: ColorSet = clique.iter().map(|&v| cur[v]).collect();
        let Some(&x) = clique.iter().find(|&&v| cur[v] != target[v]) else {
            return Ok(());
        };
        let want = target[x];
        if !held.contains(want) {
            cur[x] = want;
            out.push((x, want));
            continue;
        }
        // The holder of `want` steps aside to a buffer color.
        let y = *clique.iter().find(|&&v| cur[v] == want).expect("held");
        let free = palette
            .difference(held)
            .iter()
            .find(|&c| !clique.iter().any(|&v| target[v] == c))
            .or_else(|| palette.difference(held).min())
            .ok_or_else(|| Error::PreconditionViolated("clique has no buffer color".into()))?;
        cur[y] = free;
        out.push((y, free));
        cur[x] = want;
        out.push((x, want));
    }
}

/// Recolors module by module from `a` to `b` with a spare color absent
/// from both. Requires `a(S_p) ⊆ b(S_p)` for every block; each block then
/// works inside `b(S_p) ∪ {spare}`, which no outside neighbour ever uses.
pub(crate) fn retarget_blocks(
    planner: &Planner,
    g: &Graph,
    blocks: &[VertexSet],
    palette: ColorSet,
    a: &[Color],
    b: &[Color],
) -> Result<(Vec<(usize, Color)>, Vec<PlanTrace>)> {
    let used: ColorSet = a.iter().chain(b).copied().collect();
    let spare = palette.difference(used).min().ok_or_else(|| {
        Error::PreconditionViolated("no color is free under both colorings".into())
    })?;
    for s in blocks {
        let (ca, cb): (ColorSet, ColorSet) = (
            s.iter().map(|v| a[v]).collect(),
            s.iter().map(|v| b[v]).collect(),
        );
        if !ca.is_subset(cb) {
            return Err(Error::PreconditionViolated(format!(
                "block {:?} uses {:?} under the start but {:?} under the target",
                s.to_vec(),
                ca.to_vec(),
                cb.to_vec()
            )));
        }
    }
    let mut cur = a.to_vec();
    let mut steps = Vec::new();
    let mut traces = Vec::new();
    for s in blocks {
        if s.iter().all(|v| cur[v] == b[v]) {
            continue;
        }
        let mut local_pal: ColorSet = s.iter().map(|v| b[v]).collect();
        local_pal.insert(spare);
        let members = s.to_vec();
        if g.is_clique(s) {
            clique_route(&members, &mut cur, b, local_pal, &mut steps)?;
            continue;
        }
        let (sub, map) = g.induced(s);
        let sa: Vec<Color> = map.iter().map(|&v| cur[v]).collect();
        let sb: Vec<Color> = map.iter().map(|&v| b[v]).collect();
        match planner.plan_in(&sub, local_pal, &sa, &sb) {
            Ok((sub_steps, trace)) => {
                for (v, c) in sub_steps {
                    cur[map[v]] = c;
                    steps.push((map[v], c));
                }
                traces.push(trace);
            }
            Err(Error::BudgetExhausted(x)) => return Err(Error::BudgetExhausted(x)),
            Err(_) => {
                return Err(Error::SubgraphNotMixing {
                    vertices: members,
                    palette: local_pal.to_vec(),
                })
            }
        }
    }
    Ok((steps, traces))
}

/// Within-module retarget between two colorings of `G` whose block color
/// sets satisfy `a(S_p) ⊆ b(S_p)`.
pub fn retarget_within_modules(ctx: &LiftContext, a: &Coloring, b: &Coloring) -> Result<RecoloringSchedule> {
    require_proper(&ctx.base, a)?;
    require_proper(&ctx.base, b)?;
    let planner = Planner::new(Budget::default());
    let (steps, _) = retarget_blocks(
        &planner,
        &ctx.base,
        ctx.blocks(),
        ColorSet::palette(ctx.palette),
        a.as_slice(),
        b.as_slice(),
    )?;
    let sched = RecoloringSchedule {
        start: Coloring::new_unchecked(a.as_slice().to_vec(), ctx.palette),
        steps,
    };
    sched.validate(&ctx.base, b)?;
    Ok(sched)
}

/// Follows a walk on `G` with a walk on `H`, keeping `β(Q_p) ⊆ α(S_p)`.
///
/// A `G`-step on `v ∈ S_j` from `old` to `new` triggers an `H`-step only when
/// `old` leaves `S_j` while some vertex of `Q_j` still holds it; that vertex
/// moves to `new` if `new` is not already on `Q_j`, else to the smallest color
/// of `S_j` missing from `Q_j`. With `target` given, the walk ends with a
/// within-clique retarget to it.
pub fn lift_path_to_skeleton(
    ctx: &LiftContext,
    path: &RecoloringSchedule,
    a_h: &Coloring,
    target: Option<&Coloring>,
) -> Result<RecoloringSchedule> {
    let g = &ctx.base;
    let h = ctx.host();
    let g_end = path
        .replay(g)
        .map_err(|e| Error::PreconditionViolated(format!("base walk is invalid: {e}")))?;
    require_proper(h, a_h)?;
    let mut alpha = path.start.as_slice().to_vec();
    let mut beta = a_h.as_slice().to_vec();
    let block_colors = |col: &[Color], s: &VertexSet| -> ColorSet { s.iter().map(|v| col[v]).collect() };
    for (s, q) in ctx.blocks().iter().zip(ctx.cliques()) {
        if !block_colors(&beta, q).is_subset(block_colors(&alpha, s)) {
            return Err(Error::PreconditionViolated(
                "start skeleton coloring is not contained block-wise in the base start".into(),
            ));
        }
    }
    let k = path.k().max(a_h.k());
    let mut steps = Vec::new();
    for &(v, new) in &path.steps {
        let old = alpha[v];
        alpha[v] = new;
        let j = ctx.block_of[v];
        let s = &ctx.blocks()[j];
        let q = &ctx.cliques()[j];
        let now = block_colors(&alpha, s);
        if now.contains(old) {
            continue;
        }
        let Some(x) = q.iter().find(|&x| beta[x] == old) else {
            continue;
        };
        let on_q = block_colors(&beta, q);
        let to = if !on_q.contains(new) {
            new
        } else {
            now.difference(on_q).min().expect("S_j has more colors than Q_j")
        };
        beta[x] = to;
        steps.push((x, to));
        debug_assert!(block_colors(&beta, q).is_subset(block_colors(&alpha, s)));
    }
    let mut sched = RecoloringSchedule {
        start: Coloring::new_unchecked(a_h.as_slice().to_vec(), k),
        steps,
    };
    if let Some(t) = target {
        require_proper(h, t)?;
        let tail = retarget_cliques(ctx, &beta, t.as_slice(), g_end.as_slice(), k)?;
        sched.steps.extend(tail);
    }
    sched
        .replay(h)
        .map_err(|e| Error::PreconditionViolated(format!("lifted walk failed replay: {e}")))?;
    Ok(sched)
}

/// Moves every clique from `cur` to `target`, both contained block-wise in
/// `base` colors; the buffer is a color unused by `base`.
fn retarget_cliques(
    ctx: &LiftContext,
    cur: &[Color],
    target: &[Color],
    base: &[Color],
    k: Color,
) -> Result<Vec<(usize, Color)>> {
    let base_used: ColorSet = base.iter().copied().collect();
    let spare = ColorSet::palette(k).difference(base_used).min().ok_or_else(|| {
        Error::PreconditionViolated("the base endpoint uses every color; no spare for the retarget".into())
    })?;
    let mut cur = cur.to_vec();
    let mut out = Vec::new();
    for (s, q) in ctx.blocks().iter().zip(ctx.cliques()) {
        let mut pal: ColorSet = s.iter().map(|v| base[v]).collect();
        let want: ColorSet = q.iter().map(|v| target[v]).collect();
        if !want.is_subset(pal) {
            return Err(Error::PreconditionViolated(
                "target skeleton coloring is not contained block-wise in the base endpoint".into(),
            ));
        }
        pal.insert(spare);
        clique_route(&q.to_vec(), &mut cur, target, pal, &mut out)?;
    }
    Ok(out)
}

/// Expands each `H`-step on `Q_j` (`old` to `new`) into recoloring every
/// vertex of `S_j` colored `old`, keeping `α(S_p) = β(Q_p)`.
pub fn lift_path_from_skeleton(ctx: &LiftContext, path: &RecoloringSchedule, a: &Coloring) -> Result<RecoloringSchedule> {
    let g = &ctx.base;
    let h = ctx.host();
    path.replay(h)
        .map_err(|e| Error::PreconditionViolated(format!("skeleton walk is invalid: {e}")))?;
    require_proper(g, a)?;
    let mut alpha = a.as_slice().to_vec();
    let mut beta = path.start.as_slice().to_vec();
    for (s, q) in ctx.blocks().iter().zip(ctx.cliques()) {
        let cs: ColorSet = s.iter().map(|v| alpha[v]).collect();
        let cq: ColorSet = q.iter().map(|v| beta[v]).collect();
        if cs != cq {
            return Err(Error::PreconditionViolated(
                "base start must use exactly the skeleton colors on every block".into(),
            ));
        }
    }
    let mut steps = Vec::new();
    for &(x, new) in &path.steps {
        let old = beta[x];
        beta[x] = new;
        let s = &ctx.blocks()[ctx.host_block_of[x]];
        for v in s {
            if alpha[v] == old {
                alpha[v] = new;
                steps.push((v, new));
            }
        }
    }
    let sched = RecoloringSchedule {
        start: Coloring::new_unchecked(a.as_slice().to_vec(), path.k().max(a.k())),
        steps,
    };
    sched
        .replay(g)
        .map_err(|e| Error::PreconditionViolated(format!("lifted walk failed replay: {e}")))?;
    Ok(sched)
}

/// Lifts a walk on `g` to its sibling. Before a step recolors `y` to `new`,
/// the pendant `y'` leaves `new` if it holds it; afterwards pendants move to
/// the colors of `target` when one is given.
pub fn sibling_lift(
    g: &Graph,
    k: Color,
    path: &RecoloringSchedule,
    a_sib: &Coloring,
    target: Option<&Coloring>,
) -> Result<RecoloringSchedule> {
    if k <= 3 {
        return Err(Error::PaletteTooSmall(k));
    }
    let n = g.n();
    let sib = g.sibling();
    require_proper(&sib, a_sib)?;
    if a_sib.as_slice()[..n] != *path.start.as_slice() {
        return Err(Error::PreconditionViolated(
            "sibling start must agree with the base walk on the original vertices".into(),
        ));
    }
    let end = path
        .replay(g)
        .map_err(|e| Error::PreconditionViolated(format!("base walk is invalid: {e}")))?;
    let mut cur = a_sib.as_slice().to_vec();
    let mut steps = Vec::new();
    for &(y, new) in &path.steps {
        let old = cur[y];
        if cur[n + y] == new {
            let c = (1..=k).find(|&c| c != old && c != new).expect("k >= 4");
            cur[n + y] = c;
            steps.push((n + y, c));
        }
        cur[y] = new;
        steps.push((y, new));
    }
    if let Some(t) = target {
        require_proper(&sib, t)?;
        if t.as_slice()[..n] != *end.as_slice() {
            return Err(Error::PreconditionViolated(
                "sibling target must agree with the base walk's end on the original vertices".into(),
            ));
        }
        for x in 0..n {
            let want = t.get(n + x);
            if cur[n + x] != want {
                cur[n + x] = want;
                steps.push((n + x, want));
            }
        }
    }
    let sched = RecoloringSchedule {
        start: Coloring::new_unchecked(a_sib.as_slice().to_vec(), k),
        steps,
    };
    sched.replay(&sib)?;
    Ok(sched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{chromatic_number, enumerate_colorings};
    use crate::named;
    use crate::reconfig::find_path;

    fn col(v: &[Color], k: Color) -> Coloring {
        Coloring::new(v.to_vec(), k).unwrap()
    }

    #[test]
    fn prime_graphs_transfer_and_lift_identically() {
        let g = named::house();
        let ctx = LiftContext::new(&g, 4).unwrap();
        let a = col(&[1, 2, 1, 3, 3], 4);
        assert!(is_proper(&g, &a).unwrap());
        assert_eq!(transfer_to_skeleton(&ctx, &a).unwrap(), a);
        assert_eq!(transfer_from_skeleton(&ctx, &a).unwrap(), a);
        let b = col(&[2, 1, 2, 3, 4], 4);
        let p = find_path(&g, 4, &a, &b).unwrap().unwrap();
        assert_eq!(lift_path_to_skeleton(&ctx, &p, &a, None).unwrap(), p);
        assert_eq!(lift_path_from_skeleton(&ctx, &p, &a).unwrap(), p);
    }

    #[test]
    fn figure3_round_trip() {
        let g = named::figure3();
        let ctx = LiftContext::new(&g, 5).unwrap();
        let (_, a) = chromatic_number(&g).unwrap();
        let a = a.with_palette(5).unwrap();
        let h = transfer_to_skeleton(&ctx, &a).unwrap();
        let back = transfer_from_skeleton(&ctx, &h).unwrap();
        for (s, q) in ctx.blocks().iter().zip(ctx.cliques()) {
            assert_eq!(back.colors_on(s), h.colors_on(q));
        }
        let again = transfer_to_skeleton(&ctx, &back).unwrap();
        assert_eq!(again, h);
    }

    #[test]
    fn expansion_recolors_every_holder() {
        let g = named::figure3();
        let ctx = LiftContext::new(&g, 5).unwrap();
        // E = 6..=10 colored 2,3,2,3,4; color 1 is only on B, which E misses
        let a = col(&[2, 3, 1, 1, 4, 5, 2, 3, 2, 3, 4], 5);
        assert!(is_proper(&g, &a).unwrap());
        let h = transfer_to_skeleton(&ctx, &a).unwrap();
        let x = ctx.cliques()[4].iter().find(|&x| h.get(x) == 2).unwrap();
        let walk = RecoloringSchedule {
            start: h,
            steps: vec![(x, 1)],
        };
        let lifted = lift_path_from_skeleton(&ctx, &walk, &a).unwrap();
        assert_eq!(lifted.steps, vec![(6, 1), (8, 1)]);
    }

    #[test]
    fn sibling_lift_small() {
        let g = named::complete(3);
        let a = col(&[1, 2, 3], 4);
        let b = col(&[4, 2, 1], 4);
        let p = find_path(&g, 4, &a, &b).unwrap().unwrap();
        let a_sib = col(&[1, 2, 3, 4, 4, 4], 4);
        let t = col(&[4, 2, 1, 1, 1, 2], 4);
        let s = sibling_lift(&g, 4, &p, &a_sib, Some(&t)).unwrap();
        s.validate(&g.sibling(), &t).unwrap();
        assert!(s.len() <= 2 * p.len() + 3);
        assert_eq!(sibling_lift(&g, 3, &p, &a_sib, None), Err(Error::PaletteTooSmall(3)));
    }

    #[test]
    fn retarget_examples() {
        let g = named::figure3();
        let ctx = LiftContext::new(&g, 5).unwrap();
        let all = enumerate_colorings(&g, 4);
        let a = all[0].with_palette(5).unwrap();
        assert!(retarget_within_modules(&ctx, &a, &a).unwrap().is_empty());
        let blocks = ctx.blocks();
        let same_sets = |x: &Coloring, y: &Coloring| {
            blocks.iter().all(|s| x.colors_on(s).is_subset(y.colors_on(s)))
        };
        let mut checked = 0;
        for b in all.iter().skip(1).take(400) {
            let b = b.with_palette(5).unwrap();
            if same_sets(&a, &b) {
                let s = retarget_within_modules(&ctx, &a, &b).unwrap();
                s.validate(&g, &b).unwrap();
                let spare_ok = s.steps.iter().all(|&(v, c)| c == 5 || b.colors_on(&blocks[ctx.block_of[v]]).contains(c));
                assert!(spare_ok);
                checked += 1;
            } else {
                assert!(matches!(
                    retarget_within_modules(&ctx, &a, &b),
                    Err(Error::PreconditionViolated(_))
                ));
            }
        }
        assert!(checked > 0);
    }
}
