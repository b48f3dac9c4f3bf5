// Multiplicativity of the twist T -> (exp(i rho(x,y)) T(x,y)) on operators of
// small propagation.
use geot::constructions::{gen_standard, StandardKind};
use geot::cycles::{nice_cycle_vector, select_b, solve_rho, CycleOptions};
use geot::witnesses::check_r_representation;

pub fn run() -> geot::Result<()> {
    for (name, g) in [
        ("petersen", gen_standard(StandardKind::Petersen, 10)?),
        ("C_20", gen_standard(StandardKind::Cycle, 20)?),
    ] {
        let r = 9;
        let b = select_b(&g, r, CycleOptions::default())?;
        let v = nice_cycle_vector(&b.remainder(&g), 0, 64)?;
        let rho = solve_rho(&g, r, &v, &b)?;
        let check = check_r_representation(&g, &rho, r, 100, 1)?;
        println!(
            "{name}: {} pairs ({} resampled), product residual {:.1e}, adjoint residual {:.1e}, passed {}",
            check.trials, check.resampled, check.max_product_residual, check.max_adjoint_residual, check.passed
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
