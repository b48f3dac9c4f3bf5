// Laplacian spectra of a few standard graphs, and the twisted Laplacian of
// an Eulerian orientation.
use geot::constructions::{gen_random_regular, gen_standard, StandardKind};
use geot::cycles::{eulerian_orientation, PhaseFunction};
use geot::spectral::{
    constant_vector_residual, laplacian, spectral_gap, spectrum, twisted_laplacian, SpectrumOptions,
};

pub fn run() -> geot::Result<()> {
    let opts = SpectrumOptions::default();
    for (name, g) in [
        ("petersen", gen_standard(StandardKind::Petersen, 10)?),
        ("K_6", gen_standard(StandardKind::Complete, 6)?),
        ("C_12", gen_standard(StandardKind::Cycle, 12)?),
    ] {
        let report = spectrum(&laplacian(&g), &opts)?;
        println!(
            "{name}: gap {:?}, zero multiplicity {}",
            report.gap, report.zero_multiplicity
        );
    }

    // On a 4-regular graph the unit circulation of an Eulerian circuit makes
    // the constant vector an eigenvector with eigenvalue d(1 - cos t).
    let g = gen_random_regular(30, 4, 7)?;
    let rho = PhaseFunction::from_cycle_vector(&eulerian_orientation(&g)?);
    for t in [0.1, 0.5, 1.0] {
        let m = twisted_laplacian(&g, &rho, t)?;
        let lambda = 4.0 * (1.0 - f64::cos(t));
        println!(
            "t = {t}: residual {:.2e}",
            constant_vector_residual(&m, lambda)
        );
    }
    println!("random 4-regular gap: {:?}", spectral_gap(&g, &opts)?.gap);
    Ok(())
}

#[allow(dead_code)]
fn main() -> geot::Result<()> {
    run()
}
