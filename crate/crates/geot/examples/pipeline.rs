// select_B, a nice cycle vector on X \ B, and the phase function rho.
use geot::cycles::{extend_rho, nice_cycle_vector, select_b, solve_rho, CycleOptions};
use geot::Graph;

// The 6 x 6 torus: the squares span Z_4, the two long directions do not.
fn torus(k: usize) -> geot::Result<Graph> {
    let id = |i: usize, j: usize| (i % k) * k + j % k;
    let edges = (0..k).flat_map(|i| {
        (0..k).flat_map(move |j| [(id(i, j), id(i + 1, j)), (id(i, j), id(i, j + 1))])
    });
    Graph::from_edges(k * k, edges)
}

pub fn run() -> geot::Result<()> {
    let g = torus(6)?;
    let r = 4;
    let b = select_b(&g, r, CycleOptions::default())?;
    println!("|B| = {} for R = {r}: {:?}", b.len(), b.edges);

    let rest = b.remainder(&g);
    let v = nice_cycle_vector(&rest, 1, 64)?;
    println!(
        "v supported on {} of {} edges of X \\ B",
        v.support_size(),
        rest.edge_count()
    );

    let rho = solve_rho(&g, r, &v, &b)?;
    let worst = b
        .cycles
        .cycles
        .iter()
        .map(|c| rho.circulation(c).map(f64::abs))
        .try_fold(0.0f64, |m, x| x.map(|x| m.max(x)))?;
    println!(
        "max |<rho, z>| over {} short cycles: {worst:e}",
        b.cycles.cycles.len()
    );
    let off: Vec<f64> = b
        .edge_ids
        .iter()
        .take(6)
        .map(|&id| rho.0.edge_value(id))
        .collect();
    println!("first values of rho on B: {off:?}");
    println!(
        "rho along shortest paths from 0: {:?}",
        extend_rho(&g, &rho, &[(0, 7), (0, 21)])?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
