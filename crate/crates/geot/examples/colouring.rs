// Writing the Laplacian as a sum of I - tau over matching involutions.
use geot::constructions::{gen_standard, StandardKind};
use geot::graph::max_degree;
use geot::spectral::{edge_colouring_decomposition, laplacian};

pub fn run() -> geot::Result<()> {
    let g = gen_standard(StandardKind::Petersen, 10)?;
    let dec = edge_colouring_decomposition(&g)?;
    println!(
        "{} colour classes for max degree {}",
        dec.len(),
        max_degree(&g)
    );
    for (i, class) in dec.colour_classes.iter().enumerate() {
        println!("  class {i}: {class:?}");
    }
    let lap = laplacian(&g);
    let mismatches = (0..10)
        .flat_map(|x| (0..10).map(move |y| (x, y)))
        .filter(|&(x, y)| dec.sum_entry(x, y) != lap.entry(x, y))
        .count();
    println!("entries differing from the Laplacian: {mismatches}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
