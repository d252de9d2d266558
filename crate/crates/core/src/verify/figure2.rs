use std::time::Instant;

use super::{Assertion, CampaignReport, Certificate, Fact, Status, Verdict};
use crate::coloring::{chi, is_proper, Color};
use crate::error::Result;
use crate::graph::are_isomorphic;
use crate::modules::is_prime;
use crate::named;
use crate::patterns::contains_induced;
use crate::reconfig::{is_frozen, Census};

/// Hexagon vertices doubled, apex kept.
pub const FIGURE2_MULTIPLICITIES: [usize; 7] = [2, 2, 2, 2, 2, 2, 1];

/// Rebuilds the prime 3-chromatic graph `G` (a hexagon plus a vertex on one
/// of its edges) and its 13-vertex blowup `G'`, and checks the stated
/// numbers: `G` mixes at 4, 5 and 6 colors, `G'` is 5-chromatic with
/// `R_6(G')` disconnected, the drawn labeling is proper and frozen, and `G`
/// contains the non-mixing `C6`.
pub fn figure2_reproduction() -> Result<CampaignReport> {
    let t = Instant::now();
    let mut r = CampaignReport::new(
        "figure2",
        "a prime recolorable graph with a blowup that is not recolorable",
        true,
    );
    let g = named::figure2_base();
    let gp = named::figure2_blowup();
    let labels = named::figure2_labeling();
    let c6 = named::cycle(6);

    let mut a = vec![
        Assertion::eq("G is prime", true, is_prime(&g)),
        Assertion::eq("chi(G)", 3, chi(&g)),
    ];
    for ell in 4..=6 {
        a.push(Assertion::eq(
            &format!("R_{ell}(G) connected"),
            true,
            Census::run(&g, ell)?.connected(),
        ));
    }
    a.push(Assertion::eq(
        "G' is the blowup of G with multiplicities 2,2,2,2,2,2,1",
        true,
        are_isomorphic(&g.blowup(&FIGURE2_MULTIPLICITIES)?, &gp),
    ));
    a.push(Assertion::eq("chi(G')", 5, chi(&gp)));
    let census = Census::run(&gp, 6)?;
    a.push(Assertion::eq("R_6(G') connected", false, census.connected()));
    a.push(Assertion::eq("labeling proper", true, is_proper(&gp, &labels)?));
    let frozen = is_frozen(&gp, &labels);
    a.push(Assertion::eq("labeling frozen", true, frozen));
    a.push(Assertion::eq(
        "G contains an induced C6",
        true,
        contains_induced(&g, &c6)?.is_some(),
    ));
    a.push(Assertion::eq(
        "G minus the apex is C6",
        true,
        are_isomorphic(&g.delete_vertex(6).0, &c6),
    ));
    a.push(Assertion::eq("R_3(C6) connected", false, Census::run(&c6, 3)?.connected()));
    r.assertions = a;

    let comp = census.component_of(labels.as_slice()).expect("labeling is proper");
    let detail = format!(
        "R_6: {} colorings, {} components, {} up to color permutation, largest {}, {} frozen; \
         the labeling lies in a component of size {}",
        census.space.len(),
        census.num_components,
        census.components_up_to_color_permutation(),
        census.component_sizes.iter().max().copied().unwrap_or(0),
        census.frozen.len(),
        census.component_sizes[comp as usize]
    );
    let mut certs = Vec::new();
    if !frozen {
        let (vertex, color) = (0..gp.n())
            .find_map(|v| {
                (1..=6 as Color)
                    .find(|&c| c != labels.get(v) && gp.neighbors(v).iter().all(|u| labels.get(u) != c))
                    .map(|c| (v, c))
            })
            .expect("not frozen");
        certs.push(Certificate {
            summary: format!("the drawn labeling is not frozen: vertex {vertex} may move to color {color}"),
            facts: vec![Fact::Movable {
                graph: gp.clone(),
                coloring: labels.clone(),
                vertex,
                color,
            }],
        });
    }
    let status = if certs.is_empty() {
        Status::Ok
    } else {
        Status::Counterexample
    };
    r.record(Verdict::new(&gp, status, detail), certs);
    r.record(Verdict::new(&g, Status::Ok, "base graph"), vec![]);
    r.record(Verdict::new(&c6, Status::Ok, "induced hexagon"), vec![]);
    Ok(r.finish(t.elapsed()))
}
