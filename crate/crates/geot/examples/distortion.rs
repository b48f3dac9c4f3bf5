// Coarse distortion between a graph and a spanning subgraph, and an
// approximate isomorphism check.
use geot::constructions::{gen_standard, StandardKind};
use geot::cost::{
    coarse_distortion, max_short_cycle_free_subgraph, verify_approx_iso, DEFAULT_ALL_PAIRS_CAP,
};

pub fn run() -> geot::Result<()> {
    let x = gen_standard(StandardKind::Petersen, 10)?;
    let y = max_short_cycle_free_subgraph(&x, 6, 3)?;
    let w = coarse_distortion(&x, &y, DEFAULT_ALL_PAIRS_CAP)?;
    println!(
        "{} of {} edges kept, L = {} at {:?}",
        y.edge_count(),
        x.edge_count(),
        w.l,
        w.worst_pair
    );

    // The outer 5-cycle of the Petersen graph is a copy of C_5.
    let c5 = gen_standard(StandardKind::Cycle, 5)?;
    let map: Vec<_> = (0..5).map(|i| (i, i)).collect();
    let iso = verify_approx_iso(&x, &c5, &map)?;
    println!(
        "outer cycle covers {:.2} of X's vertices, {:.2} of its edges",
        iso.vertex_ratio_x, iso.edge_ratio_x
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
