// Short cycles, the rank of the short-cycle space and bridges.
use geot::constructions::{gen_standard, girth, StandardKind};
use geot::cycles::{bridges, cycle_space_dim, short_cycle_rank, CycleOptions};
use geot::Graph;

pub fn run() -> geot::Result<()> {
    let petersen = gen_standard(StandardKind::Petersen, 10)?;
    println!(
        "petersen girth {:?}, dim Z = {}",
        girth(&petersen),
        cycle_space_dim(&petersen)
    );
    for r in [4, 5, 6, 9] {
        let set = short_cycle_rank(&petersen, r, CycleOptions::default())?;
        println!(
            "R = {r}: {} cycles, dim Z_R = {:?}",
            set.cycles.len(),
            set.rank
        );
    }

    // A triangle with a pendant path: two bridges.
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])?;
    let report = bridges(&g);
    let ids: Vec<_> = (0..g.edge_count())
        .filter(|&e| report.is_bridge(e))
        .map(|e| g.edge(e))
        .collect();
    println!("bridges {ids:?}, {} non-bridges", report.non_bridge_count);
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
