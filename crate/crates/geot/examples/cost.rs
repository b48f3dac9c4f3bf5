// Edge bound for maximal short-cycle-free subgraphs over a small family.
use geot::constructions::{gen_random_regular, gen_standard, StandardKind};
use geot::cost::{cost_upper_bound, CostOptions};
use geot::GraphFamily;

pub fn run() -> geot::Result<()> {
    let mut family = GraphFamily::new();
    family.push("K_4", gen_standard(StandardKind::Complete, 4)?);
    for n in [12, 24, 48] {
        family.push(format!("cubic_{n}"), gen_random_regular(n, 3, n as u64)?);
    }
    family.push("path", gen_standard(StandardKind::Path, 10)?);
    let report = cost_upper_bound(&family, 3, 0.5, 3, &CostOptions::default())?;
    print!("{}", report.to_csv()?);
    println!(
        "liminf |E|/|V|: X {:?}, Y {:?}",
        report.ratio_x, report.ratio_y
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
