// Exact Cheeger constants by subset enumeration, and the spectral surrogate.
use geot::constructions::{gen_standard, StandardKind};
use geot::expansion::{cheeger_certificate, cheeger_exact, edge_boundary, CheegerMode};

pub fn run() -> geot::Result<()> {
    let petersen = gen_standard(StandardKind::Petersen, 10)?;
    for mode in [CheegerMode::Half, CheegerMode::MidRange] {
        let cert = cheeger_exact(&petersen, mode, 24)?;
        println!(
            "petersen {mode:?}: {} via {:?} ({} boundary edges)",
            cert.minimum_ratio, cert.witness_subset, cert.witness_boundary
        );
    }
    let outer = edge_boundary(&petersen, &[0, 1, 2, 3, 4])?;
    println!("outer 5-cycle: {:?}", outer.ratio);

    // Above the cap the certificate falls back to gap / 2.
    let c40 = gen_standard(StandardKind::Cycle, 40)?;
    let cert = cheeger_certificate(&c40, CheegerMode::Half, 24)?;
    println!("C_40: {:.5} (exact: {})", cert.minimum_ratio, cert.exact);
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
