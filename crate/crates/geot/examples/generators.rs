// Standard families, random regular graphs and the Margulis construction.
use geot::constructions::{gen_margulis, gen_random_regular, gen_standard, girth, StandardKind};
use geot::graph::{is_connected, max_degree};

pub fn run() -> geot::Result<()> {
    for kind in [
        StandardKind::Cycle,
        StandardKind::Path,
        StandardKind::Complete,
    ] {
        let g = gen_standard(kind, 8)?;
        println!("{kind}_8: {} edges, girth {:?}", g.edge_count(), girth(&g));
    }
    let g = gen_random_regular(100, 3, 42)?;
    println!(
        "cubic_100: connected {}, girth {:?}",
        is_connected(&g),
        girth(&g)
    );

    let m = gen_margulis(7)?;
    println!(
        "margulis Z/7: {} vertices, max degree {}, dropped {} loops and {} repeated edges, gap {:?}",
        m.graph.vertex_count(),
        max_degree(&m.graph),
        m.dropped_loops,
        m.dropped_multi_edges,
        m.gap
    );
    print!(
        "{}",
        gen_standard(StandardKind::Petersen, 10)?.to_edge_list(&["petersen".into()])
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
