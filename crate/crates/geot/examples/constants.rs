// The constant chain for a few degrees, with the exact inequality checks.
use geot::witnesses::derive_constants;

pub fn run() -> geot::Result<()> {
    for (d, gamma) in [(3, 1.0), (4, 0.5), (8, 2.0)] {
        let b = derive_constants(d, gamma)?;
        println!(
            "d = {d}, gamma = {gamma}: h {:.3e} c1 {:.3e} c2 {:.3e} c3 {:.3e} t {:.3e} eps {:.3e}",
            b.h, b.c1, b.c2, b.c3, b.t, b.epsilon
        );
        for c in &b.checks {
            println!(
                "  {:<24} {:.3e} vs {:.3e} {}",
                c.name, c.lhs, c.rhs, c.holds
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
