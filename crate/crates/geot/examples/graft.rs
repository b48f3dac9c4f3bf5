// Grafting a binary tree onto K_10 and checking expansion and the ball.
use geot::constructions::{gen_standard, graft_tree, StandardKind};
use geot::expansion::{cheeger_exact, graft_expansion_bound, CheegerMode};
use geot::graph::ball;

pub fn run() -> geot::Result<()> {
    let y = gen_standard(StandardKind::Complete, 10)?;
    let h = cheeger_exact(&y, CheegerMode::MidRange, 24)?.minimum_ratio;
    for r in [1, 2] {
        let x = graft_tree(&y, r)?;
        let b = ball(&x.graph, x.root, r)?;
        let half = cheeger_exact(&x.graph, CheegerMode::Half, 24)?.minimum_ratio;
        println!(
            "R = {r}: {} vertices, ball of {} vertices with {} edges, expansion {half:.4} >= {:.4}",
            x.graph.vertex_count(),
            b.graph.vertex_count(),
            b.graph.edge_count(),
            graft_expansion_bound(h)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
