//! Property tests over random small graphs, checked against brute force.

use std::collections::{HashMap, VecDeque};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use recolor_core::coloring::{chi, is_proper, Color, Coloring};
use recolor_core::graph::{are_isomorphic, Graph};
use recolor_core::io::{emit_graph6, parse_edge_list, parse_graph6};
use recolor_core::lifting::{lift_path_to_skeleton, sibling_lift, transfer_from_skeleton, transfer_to_skeleton, LiftContext};
use recolor_core::modules::maximal_module_partition;
use recolor_core::planner::{plan_recoloring, Budget};
use recolor_core::reconfig::find_path;
use recolor_core::schedule::RecoloringSchedule;
use recolor_core::verify::random_proper_coloring;
use recolor_core::Error;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn proper(g: &Graph, c: &[Color]) -> bool {
    g.edges().iter().all(|&(u, v)| c[u] != c[v])
}

/// Component label of every proper coloring, by breadth-first search.
fn brute_components(g: &Graph, k: usize) -> HashMap<Vec<Color>, usize> {
    let n = g.n();
    let mut label = HashMap::new();
    let mut next = 0;
    for code in 0..k.pow(n as u32) {
        let s: Vec<Color> = (0..n).map(|v| (code / k.pow(v as u32) % k + 1) as Color).collect();
        if !proper(g, &s) || label.contains_key(&s) {
            continue;
        }
        label.insert(s.clone(), next);
        let mut q = VecDeque::from([s]);
        while let Some(c) = q.pop_front() {
            for v in 0..n {
                for x in 1..=k as Color {
                    let mut d = c.clone();
                    d[v] = x;
                    if proper(g, &d) && !label.contains_key(&d) {
                        label.insert(d.clone(), next);
                        q.push_back(d);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

/// Maximal proper modules by subset enumeration.
fn brute_blocks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let is_module = |m: u64| {
        let inside: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
        (0..n)
            .filter(|&x| m >> x & 1 == 0)
            .all(|x| inside.iter().all(|&v| g.has_edge(x, v) == g.has_edge(x, inside[0])))
    };
    let full = (1u64 << n) - 1;
    let mods: Vec<u64> = (1..full).filter(|&m| is_module(m)).collect();
    let mut out: Vec<Vec<usize>> = mods
        .iter()
        .filter(|&&m| !mods.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

fn co_connected(g: &Graph) -> bool {
    g.n() >= 2 && g.is_connected() && g.complement().is_connected()
}

fn two_colorings(g: &Graph, k: Color, seed: u64) -> (Coloring, Coloring) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_proper_coloring(g, k, &mut rng).unwrap();
    let b = random_proper_coloring(g, k, &mut rng).unwrap();
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn graph6_round_trip(g in graph(12)) {
        let back = parse_graph6(&emit_graph6(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn edge_list_round_trip(g in graph(10)) {
        let back = parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn permuted_graphs_are_isomorphic(g in graph(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(are_isomorphic(&g, &g.permute(&perm)));
    }

    #[test]
    fn module_partition_matches_subset_search(g in graph(8)) {
        prop_assume!(co_connected(&g));
        let p = maximal_module_partition(&g).unwrap();
        let mut got: Vec<Vec<usize>> = p.blocks.iter().map(|b| b.to_vec()).collect();
        got.sort();
        prop_assert_eq!(got, brute_blocks(&g));
    }

    #[test]
    fn blowup_shape(g in graph(6), sizes in proptest::collection::vec(1usize..=3, 6)) {
        let sizes = &sizes[..g.n()];
        let b = g.blowup(sizes).unwrap();
        prop_assert_eq!(b.n(), sizes.iter().sum::<usize>());
        let mut owner = Vec::new();
        for (v, &s) in sizes.iter().enumerate() {
            owner.extend(std::iter::repeat(v).take(s));
        }
        for x in 0..b.n() {
            for y in x + 1..b.n() {
                // each vertex becomes a clique
                let want = owner[x] == owner[y] || g.has_edge(owner[x], owner[y]);
                prop_assert_eq!(b.has_edge(x, y), want);
            }
        }
        prop_assert!(are_isomorphic(&g.blowup(&vec![1; g.n()]).unwrap(), &g));
    }

    #[test]
    fn sibling_shape(g in graph(8)) {
        let s = g.sibling();
        let n = g.n();
        prop_assert_eq!(s.n(), 2 * n);
        prop_assert_eq!(s.edge_count(), g.edge_count() + n);
        for x in 0..n {
            prop_assert_eq!(s.neighbors(n + x).to_vec(), vec![x]);
        }
    }

    #[test]
    fn paths_agree_with_brute_force(g in graph(5), extra in 1u8..=2, seed in any::<u64>()) {
        let k = chi(&g) as Color + extra;
        let (a, b) = two_colorings(&g, k, seed);
        let labels = brute_components(&g, k as usize);
        let same = labels[a.as_slice()] == labels[b.as_slice()];
        match find_path(&g, k, &a, &b).unwrap() {
            Some(p) => {
                prop_assert!(same);
                p.validate(&g, &b).unwrap();
                p.reversed().validate(&g, &a).unwrap();
            }
            None => prop_assert!(!same),
        }
    }

    #[test]
    fn schedules_concatenate(g in graph(6), seed in any::<u64>()) {
        let k = chi(&g) as Color + 2;
        let (a, b) = two_colorings(&g, k, seed);
        if let Some(p) = find_path(&g, k, &a, &b).unwrap() {
            let round = p.clone().concat(&p.reversed()).unwrap();
            round.validate(&g, &a).unwrap();
            prop_assert_eq!(round.len(), 2 * p.len());
        }
    }

    #[test]
    fn planner_agrees_with_brute_force(g in graph(6), seed in any::<u64>()) {
        let k = chi(&g) as Color + 1;
        let (a, b) = two_colorings(&g, k, seed);
        let labels = brute_components(&g, k as usize);
        let same = labels[a.as_slice()] == labels[b.as_slice()];
        match plan_recoloring(&g, k, &a, &b, Budget::default()) {
            Ok((s, _)) => {
                prop_assert!(same);
                s.validate(&g, &b).unwrap();
            }
            Err(Error::NoPath(_)) => prop_assert!(!same),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn skeleton_transfer_and_lift(g in graph(7), seed in any::<u64>()) {
        prop_assume!(co_connected(&g));
        let ell = chi(&g) as Color + 1;
        prop_assume!(ell <= 5);
        let ctx = LiftContext::new(&g, ell).unwrap();
        let (a, b) = two_colorings(&g, ell, seed);
        let ah = transfer_to_skeleton(&ctx, &a).unwrap();
        prop_assert!(is_proper(ctx.host(), &ah).unwrap());
        let back = transfer_from_skeleton(&ctx, &ah).unwrap();
        prop_assert!(is_proper(&g, &back).unwrap());
        if let Some(p) = find_path(&g, ell, &a, &b).unwrap() {
            let lifted = lift_path_to_skeleton(&ctx, &p, &ah, None).unwrap();
            prop_assert_eq!(lifted.start.as_slice(), ah.as_slice());
            prop_assert!(is_proper(ctx.host(), &lifted.replay(ctx.host()).unwrap()).unwrap());
            // the final retarget needs a color that b leaves unused
            if b.used_colors().len() < ell as usize {
                let bh = transfer_to_skeleton(&ctx, &b).unwrap();
                lift_path_to_skeleton(&ctx, &p, &ah, Some(&bh)).unwrap().validate(ctx.host(), &bh).unwrap();
            }
        }
    }

    #[test]
    fn sibling_lift_follows_the_base(g in graph(5), seed in any::<u64>()) {
        let k = (chi(&g) as Color + 1).max(4);
        let (a, b) = two_colorings(&g, k, seed);
        if let Some(p) = find_path(&g, k, &a, &b).unwrap() {
            let sib = g.sibling();
            let (sa, sb) = two_colorings(&sib, k, seed ^ 1);
            let mut start = a.as_slice().to_vec();
            let mut target = b.as_slice().to_vec();
            let n = g.n();
            for x in 0..n {
                // any pendant color differing from its anchor works
                start.push(if sa.get(n + x) != a.get(x) { sa.get(n + x) } else { a.get(x) % k + 1 });
                target.push(if sb.get(n + x) != b.get(x) { sb.get(n + x) } else { b.get(x) % k + 1 });
            }
            let start = Coloring::new(start, k).unwrap();
            let target = Coloring::new(target, k).unwrap();
            let lifted: RecoloringSchedule = sibling_lift(&g, k, &p, &start, Some(&target)).unwrap();
            lifted.validate(&sib, &target).unwrap();
        }
    }
}
