//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any failure that is not one of the documented defects below.
//!
//! Two criteria cannot pass as stated, and their lines read FAIL:
//! - The drawn labeling of the 13-vertex blowup is not frozen. Its apex can
//!   move, and the labeling sits in a component of size two.
//! - Two of the structure statements have small exceptions under the
//!   definitions given (matched co-bipartite, semi-P4-sparse). Every such
//!   exception carries a certificate that revalidates.
//!
//! The process fails if either of these changes shape in any way.

use std::collections::{HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recolor_core::coloring::{chi, Color};
use recolor_core::graph::Graph;
use recolor_core::modules::{clique_skeleton, maximal_module_partition};
use recolor_core::named;
use recolor_core::patterns::ClassSpec;
use recolor_core::planner::{plan_recoloring, Budget};
use recolor_core::reconfig::Census;
use recolor_core::verify::{self, Fact, StructureStatement};

struct Outcome {
    pass: bool,
    /// The failure is the documented one.
    known: bool,
    detail: String,
}

fn check(ok: bool, detail: String) -> Outcome {
    Outcome {
        pass: ok,
        known: false,
        detail,
    }
}

fn graphs_up_to(n_max: usize) -> Vec<Graph> {
    verify::hereditary_levels(n_max, |_| true)
        .into_iter()
        .skip(1)
        .flatten()
        .collect()
}

fn co_connected(g: &Graph) -> bool {
    g.is_connected() && g.complement().is_connected()
}

fn figure2() -> Outcome {
    let r = verify::figure2_reproduction().expect("figure2 runs");
    let failed: Vec<&str> = r.assertions.iter().filter(|a| !a.pass).map(|a| a.name.as_str()).collect();
    let detail = format!(
        "{} of {} assertions hold; failing: {:?}; {:.1}s",
        r.assertions.len() - failed.len(),
        r.assertions.len(),
        failed,
        r.elapsed.as_secs_f64()
    );
    let only_frozen = failed == ["labeling frozen"]
        && r.counterexamples.len() == 1
        && r.revalidate().expect("revalidates")
        && r.elapsed < Duration::from_secs(600);
    Outcome {
        pass: failed.is_empty(),
        known: only_frozen,
        detail,
    }
}

fn hexagon() -> Outcome {
    let t = Instant::now();
    let c = Census::run(&named::cycle(6), 3).expect("census");
    let report = c.report(t.elapsed());
    let found = report.frozen.iter().any(|f| f.as_slice() == [1, 2, 3, 1, 2, 3]);
    let dt = t.elapsed();
    check(
        !report.connected && found && dt < Duration::from_secs(1),
        format!(
            "{} components, {} frozen, (1,2,3,1,2,3) frozen: {found}, {:?}",
            report.num_components, report.frozen_count, dt
        ),
    )
}

fn class_gates() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for spec in [
        ClassSpec::p5_diamond_free(),
        ClassSpec::p5_house_bull_free(),
        ClassSpec::semi_p4_sparse(),
    ] {
        let r = verify::campaign_class_recolorable(&spec, 6, 2).expect("campaign");
        ok &= r.must_pass && r.passed && r.counts.skipped == 0;
        notes.push(format!(
            "{}: {} graphs, {} failures",
            spec.label(),
            r.counts.checked,
            r.counterexamples.len()
        ));
    }
    ok &= t.elapsed() < Duration::from_secs(900);
    check(ok, format!("{}; {:.1}s", notes.join("; "), t.elapsed().as_secs_f64()))
}

fn skeleton_gate() -> Outcome {
    let r = verify::campaign_skeleton_equivalence(6, 2).expect("campaign");
    check(
        r.passed && r.counts.ok > 0 && r.elapsed < Duration::from_secs(900),
        format!(
            "{} eligible graphs tested, {} excluded, {} violations; {:.1}s",
            r.counts.ok,
            r.counts.excluded,
            r.counterexamples.len(),
            r.elapsed.as_secs_f64()
        ),
    )
}

fn sibling_gate() -> Outcome {
    let r = verify::campaign_sibling(5, 4, 11).expect("campaign");
    check(
        r.must_pass && r.passed && r.counts.skipped == 0 && r.elapsed < Duration::from_secs(600),
        format!(
            "{} connected graphs, {} failures; {:.1}s",
            r.counts.checked,
            r.counterexamples.len(),
            r.elapsed.as_secs_f64()
        ),
    )
}

/// Maximal proper modules by brute force over the adjacency matrix.
fn oracle_blocks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let adj = |u: usize, v: usize| g.has_edge(u, v);
    let is_module = |mask: u64| {
        (0..n).filter(|&x| mask >> x & 1 == 0).all(|x| {
            let inside: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            inside.iter().all(|&v| adj(x, v) == adj(x, inside[0]))
        })
    };
    let full = (1u64 << n) - 1;
    let modules: Vec<u64> = (1..full).filter(|&m| is_module(m)).collect();
    let maximal: Vec<u64> = modules
        .iter()
        .copied()
        .filter(|&m| !modules.iter().any(|&o| o != m && o & m == m))
        .collect();
    let mut blocks: Vec<Vec<usize>> = maximal
        .iter()
        .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    blocks.sort();
    blocks
}

/// Smallest `k` admitting a proper assignment among all `k^n`.
fn brute_chi(g: &Graph) -> usize {
    let n = g.n();
    (1..=n.max(1))
        .find(|&k| {
            (0..k.pow(n as u32)).any(|code| {
                let c: Vec<usize> = (0..n).map(|v| code / k.pow(v as u32) % k).collect();
                g.edges().iter().all(|&(u, v)| c[u] != c[v])
            })
        })
        .unwrap_or(0)
}

/// Component label of every proper coloring, found by breadth-first search
/// over all assignments.
fn brute_components(g: &Graph, k: usize) -> HashMap<Vec<Color>, usize> {
    let n = g.n();
    let proper = |c: &[Color]| g.edges().iter().all(|&(u, v)| c[u] != c[v]);
    let mut label: HashMap<Vec<Color>, usize> = HashMap::new();
    let all: Vec<Vec<Color>> = (0..k.pow(n as u32))
        .map(|code| (0..n).map(|v| (code / k.pow(v as u32) % k + 1) as Color).collect())
        .filter(|c: &Vec<Color>| proper(c))
        .collect();
    let mut next = 0;
    for s in &all {
        if label.contains_key(s) {
            continue;
        }
        label.insert(s.clone(), next);
        let mut q = VecDeque::from([s.clone()]);
        while let Some(c) = q.pop_front() {
            for v in 0..n {
                for x in 1..=k as Color {
                    let mut d = c.clone();
                    d[v] = x;
                    if x != c[v] && proper(&d) && !label.contains_key(&d) {
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

fn oracles() -> Outcome {
    let t = Instant::now();
    let graphs = graphs_up_to(7);
    let mut mismatches = Vec::new();
    let mut checked = [0usize; 3];
    for g in graphs.iter().filter(|g| co_connected(g) && g.n() >= 2) {
        checked[0] += 1;
        let mut ours: Vec<Vec<usize>> = maximal_module_partition(g)
            .expect("eligible")
            .blocks
            .iter()
            .map(|b| b.to_vec())
            .collect();
        ours.sort();
        if ours != oracle_blocks(g) {
            mismatches.push(format!("partition {:?}", g.edges()));
        }
    }
    for g in graphs.iter().filter(|g| g.n() <= 6) {
        checked[1] += 1;
        if chi(g) != brute_chi(g) {
            mismatches.push(format!("chi {:?}", g.edges()));
        }
    }
    for g in graphs.iter().filter(|g| g.n() <= 5) {
        for k in 1..=4usize {
            checked[2] += 1;
            let brute = brute_components(g, k);
            let c = Census::run(g, k as Color).expect("census");
            let mut pairing: HashMap<u32, usize> = HashMap::new();
            let mut reverse: HashMap<usize, u32> = HashMap::new();
            let mut same = c.space.len() == brute.len();
            for i in 0..c.space.len() {
                let Some(&b) = brute.get(&c.space.colors(i)) else {
                    same = false;
                    break;
                };
                let a = c.component[i];
                same &= *pairing.entry(a).or_insert(b) == b && *reverse.entry(b).or_insert(a) == a;
            }
            if !same {
                mismatches.push(format!("census k={k} {:?}", g.edges()));
            }
        }
    }
    check(
        mismatches.is_empty(),
        format!(
            "{} partitions, {} chromatic numbers, {} censuses; mismatches {:?}; {:.1}s",
            checked[0],
            checked[1],
            checked[2],
            mismatches,
            t.elapsed().as_secs_f64()
        ),
    )
}

fn structure_gate() -> Outcome {
    let r = verify::campaign_structure(8, 10).expect("campaign");
    let mut failing: HashMap<String, usize> = HashMap::new();
    for c in &r.counterexamples {
        if let Fact::StructureFails { statement, .. } = &c.facts[0] {
            *failing.entry(format!("{statement:?}")).or_default() += 1;
        }
    }
    let mut held: HashMap<String, usize> = HashMap::new();
    for v in r.verdicts.iter().filter(|v| v.status == verify::Status::Ok) {
        *held.entry(v.detail.clone()).or_default() += 1;
    }
    let documented = [StructureStatement::MatchedCoBipartite, StructureStatement::BipartiteOrThinSpider]
        .map(|s| format!("{s:?}"));
    let known = failing.keys().all(|k| documented.contains(k))
        && r.revalidate().expect("revalidates")
        && ["BipartiteOrCoBipartite", "C5OrC5Free", "Staircase"]
            .iter()
            .all(|s| held.get(*s).copied().unwrap_or(0) > 0)
        && r.elapsed < Duration::from_secs(1200);
    let mut fail_list: Vec<_> = failing.into_iter().collect();
    fail_list.sort();
    let mut held_list: Vec<_> = held.into_iter().collect();
    held_list.sort();
    Outcome {
        pass: r.passed,
        known,
        detail: format!(
            "holds on {held_list:?}; exceptions {fail_list:?}; {:.1}s",
            r.elapsed.as_secs_f64()
        ),
    }
}

fn planner_gate() -> Outcome {
    let t = Instant::now();
    let spec = ClassSpec::p5_diamond_free();
    let mut rng = ChaCha8Rng::seed_from_u64(20240607);
    let mut failures = Vec::new();
    let mut total_steps = 0;
    for i in 0..200 {
        let n = rng.gen_range(5..=12);
        let g = verify::random_class_corpus(&spec, n, 1, rng.gen())
            .expect("class is nonempty")
            .graphs
            .remove(0);
        let ell = (chi(&g) + 1) as Color;
        let a = verify::random_proper_coloring(&g, ell, &mut rng).expect("colorable");
        let b = verify::random_proper_coloring(&g, ell, &mut rng).expect("colorable");
        match plan_recoloring(&g, ell, &a, &b, Budget::default()) {
            Ok((s, _)) => match s.validate(&g, &b) {
                Ok(()) => total_steps += s.len(),
                Err(e) => failures.push(format!("#{i}: replay {e}")),
            },
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    check(
        failures.is_empty() && t.elapsed() < Duration::from_secs(600),
        format!(
            "200 instances, {total_steps} steps in total, failures {failures:?}; {:.1}s",
            t.elapsed().as_secs_f64()
        ),
    )
}

fn chi_preserved() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for g in graphs_up_to(7).iter().filter(|g| co_connected(g)) {
        count += 1;
        let host = clique_skeleton(g).expect("eligible").host;
        if chi(g) != chi(&host) {
            bad.push(g.edges());
        }
    }
    check(bad.is_empty(), format!("{count} eligible graphs, mismatches {bad:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("prime graph with a non-recolorable blowup", figure2),
        ("C6 is not 3-mixing", hexagon),
        ("class gates, n <= 6", class_gates),
        ("skeleton equivalence, n <= 6", skeleton_gate),
        ("sibling gates", sibling_gate),
        ("oracle equivalences", oracles),
        ("structure statements", structure_gate),
        ("planner soundness", planner_gate),
        ("chromatic number preserved by the clique skeleton", chi_preserved),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && o.known { " [documented defect]" } else { "" };
        println!("{tag} criterion {}: {name}{note} -- {}", i + 1, o.detail);
        if !o.pass && !o.known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
