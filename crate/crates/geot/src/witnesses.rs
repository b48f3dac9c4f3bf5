//! The twisted-Laplacian witness pipeline and its constants.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycles::{
    bridges, eulerian_orientation, extend_rho_all, nice_cycle_vector, select_b, short_cycle_rank,
    solve_rho, CycleOptions, CycleVector, EdgeSelection, PairPhases, PhaseFunction,
    DEFAULT_MAX_RETRIES,
};
use crate::error::{Error, Result};
use crate::exact::{f64_to_rational, rational_to_f64};
use crate::expansion::{cheeger_certificate, CheegerMode, DEFAULT_BRUTE_FORCE_CAP};
use crate::graph::{component_labels, max_degree, Graph, UNREACHABLE};
use crate::spectral::{
    constant_vector_defect, spectrum, twisted_laplacian, Propagation, SpectrumOptions, DENSE_LIMIT,
};

/// One inequality of the constants chain, evaluated exactly on the stored
/// floating-point values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Constants `h, c1, c2, c3, t, ε` for degree bound `d` and gap `γ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsBundle {
    pub d: usize,
    pub gamma: f64,
    /// `γ² / (8d)`.
    pub h: f64,
    /// `γ² / (4d)`, the boundary constant attached to a gap `γ`.
    pub boundary_constant: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub t: f64,
    pub epsilon: f64,
    pub checks: Vec<InequalityCheck>,
}

fn q(x: f64) -> BigRational {
    f64_to_rational(x)
}

fn qi(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `¼d² - (1 - c1/2d)(½d + c2 d)² - (c1/2d)(½d + c2 d - ½)²`, exactly.
pub fn c3_expression(d: usize, c1: &BigRational, c2: &BigRational) -> BigRational {
    let d = qi(d);
    let a = c1 / (&d * BigInt::from(2));
    let m = &d * half() + c2 * &d;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let m_low = &m - half();
    &quarter * &d * &d - (BigRational::one() - &a) * &m * &m - &a * &m_low * &m_low
}

/// `|e^{it} - 1 - it + ½t²|`, accurate for small `t`.
pub fn taylor_remainder(t: f64) -> f64 {
    if t.abs() >= 0.5 {
        let z = Complex64::from_polar(1.0, t) - Complex64::new(1.0 - 0.5 * t * t, t);
        return z.norm();
    }
    // cos t - 1 + t²/2 and sin t - t by their alternating series.
    let t2 = t * t;
    let (mut re, mut term) = (0.0, t2 * t2 / 24.0);
    for k in 0.. {
        re += term;
        term *= -t2 / (((2 * k + 5) * (2 * k + 6)) as f64);
        if term.abs() < 1e-40 {
            break;
        }
    }
    let (mut im, mut term) = (0.0, -t2 * t / 6.0);
    for k in 0.. {
        im += term;
        term *= -t2 / (((2 * k + 4) * (2 * k + 5)) as f64);
        if term.abs() < 1e-40 {
            break;
        }
    }
    re.hypot(im)
}

fn round_down_until(mut x: f64, ok: impl Fn(f64) -> bool) -> f64 {
    while !ok(x) {
        x = x.next_down();
    }
    x
}

/// The constants chain, with every quantity rounded down until its
/// defining inequality holds exactly for the stored value.
pub fn derive_constants(d: usize, gamma: f64) -> Result<ConstantsBundle> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("degree bound {d} < 2")));
    }
    if !(gamma > 0.0 && gamma <= 2.0 * d as f64) {
        return Err(Error::InvalidParameter(format!(
            "gamma {gamma} outside (0, 2d]"
        )));
    }
    let df = d as f64;
    let (dq, gq) = (qi(d), q(gamma));
    let h_exact = &gq * &gq / (&dq * BigInt::from(8));
    let h = round_down_until(rational_to_f64(&h_exact), |x| q(x) <= h_exact);
    let boundary_constant = gamma * gamma / (4.0 * df);
    let c1_exact = q(h) / (&dq * &dq * BigInt::from(8));
    let c1 = round_down_until(rational_to_f64(&c1_exact), |x| q(x) <= c1_exact && x > 0.0);
    let c1q = q(c1);
    let c3_zero = c3_expression(d, &c1q, &BigRational::zero());
    let target = &c3_zero * half();
    let mut k = 0;
    while c3_expression(d, &c1q, &q((-k as f64).exp2())) < target {
        k += 1;
        if k > 1074 {
            return Err(Error::Invariant("no admissible power of 1/2 for c2".into()));
        }
    }
    let c2 = (-k as f64).exp2();
    let c3_exact = c3_expression(d, &c1q, &q(c2));
    let c3 = round_down_until(rational_to_f64(&c3_exact), |x| q(x) <= c3_exact);
    let six_c2 = 6.0 * c2;
    let t = round_down_until((gamma / (2.0 * df)).sqrt().min(six_c2), |x| {
        x <= six_c2 && &dq * q(x) * q(x) < gq
    });
    let (c3q, tq, hq) = (q(c3), q(t), q(h));
    let t4 = &tq * &tq * &tq * &tq;
    let e4 = &c3q * &t4 / (&dq * &dq * BigInt::from(16));
    let e5 = &c1q / (&dq * BigInt::from(4));
    let e6 = &hq / BigInt::from(4);
    let bound = e4.clone().min(e5.clone()).min(e6.clone());
    let epsilon = round_down_until(rational_to_f64(&bound), |x| q(x) <= bound);
    let mut bundle = ConstantsBundle {
        d,
        gamma,
        h,
        boundary_constant,
        c1,
        c2,
        c3,
        t,
        epsilon,
        checks: Vec::new(),
    };
    bundle.checks = bundle.verify();
    let positive = [h, c1, c2, c3, t, epsilon].iter().all(|&x| x > 0.0);
    if !positive || bundle.checks.iter().any(|c| !c.holds) {
        return Err(Error::Invariant(format!(
            "constants chain failed for d = {d}, gamma = {gamma}"
        )));
    }
    Ok(bundle)
}

impl ConstantsBundle {
    /// Evaluates the six inequalities exactly on the stored values.
    pub fn verify(&self) -> Vec<InequalityCheck> {
        let d = self.d;
        let (dq, gq) = (qi(d), q(self.gamma));
        let (c1, c2, c3, t, eps, h) = (
            q(self.c1),
            q(self.c2),
            q(self.c3),
            q(self.t),
            q(self.epsilon),
            q(self.h),
        );
        let check = |name, lhs: BigRational, rhs: BigRational, strict: bool| InequalityCheck {
            name,
            lhs: rational_to_f64(&lhs),
            rhs: rational_to_f64(&rhs),
            holds: if strict { lhs < rhs } else { lhs <= rhs },
        };
        let c3_expr = c3_expression(d, &c1, &c2);
        let c3_ok = c3.is_positive() && c3 <= c3_expr;
        let t2 = &t * &t;
        // The Taylor remainder of e^{it} after the quadratic term is at most
        // |t|³/6, so t <= 6 c2 is sufficient and checked exactly.
        let taylor_rigorous = t <= &c2 * BigInt::from(6);
        let taylor_numeric = taylor_remainder(self.t) <= self.c2 * self.t * self.t;
        let t4 = &t2 * &t2;
        vec![
            InequalityCheck {
                name: "c3_positive",
                lhs: 0.0,
                rhs: self.c3,
                holds: c3_ok,
            },
            check("d_t_squared_below_gamma", &dq * &t2, gq, true),
            InequalityCheck {
                name: "taylor_remainder",
                lhs: taylor_remainder(self.t),
                rhs: self.c2 * self.t * self.t,
                holds: taylor_rigorous && taylor_numeric,
            },
            check(
                "epsilon_vs_c3",
                &eps * BigInt::from(8) * &dq * &dq,
                &c3 * &t4 * half(),
                false,
            ),
            check(
                "epsilon_vs_c1",
                &eps * BigInt::from(2),
                &c1 / (&dq * BigInt::from(2)),
                false,
            ),
            check("epsilon_vs_h", &eps * BigInt::from(4), h, false),
        ]
    }

    /// `(1 - 2c3/d²)^½`.
    pub fn defect_factor(&self) -> f64 {
        let d2 = (self.d * self.d) as f64;
        (1.0 - 2.0 * self.c3 / d2).sqrt()
    }

    /// `½ d t²`.
    pub fn target_eigenvalue(&self) -> f64 {
        0.5 * self.d as f64 * self.t * self.t
    }
}

/// `h / (4d²)`: guaranteed fraction of non-bridge edges in a graph whose
/// mid-range expansion is at least `h`, once `|V| >= 8d / h`.
pub fn non_bridge_constant(h: f64, d: usize) -> f64 {
    h / (4.0 * (d * d) as f64)
}

/// `8d / h`, the size from which [`non_bridge_constant`] applies.
pub fn large_graph_threshold(h: f64, d: usize) -> f64 {
    8.0 * d as f64 / h
}

/// Outcome of an R-representation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepresentationCheck {
    pub trials: usize,
    /// Sampled pairs whose product exceeded propagation `R` and were redrawn.
    pub resampled: usize,
    /// Largest Frobenius norm of `π(TS) - π(T)π(S)`.
    pub max_product_residual: f64,
    /// Largest Frobenius norm of `π(T*) - π(T)*`.
    pub max_adjoint_residual: f64,
    pub passed: bool,
}

/// Tolerance on `‖π(TS) - π(T)π(S)‖`.
pub const MULTIPLICATIVITY_TOLERANCE: f64 = 1e-8;

/// `π_ρ(T)_{xy} = T_{xy} exp(i ρ(x, y))` with `ρ` extended along shortest paths.
pub fn twist_operator(t: &DMatrix<Complex64>, phases: &PairPhases) -> Result<DMatrix<Complex64>> {
    let n = phases.vertex_count();
    let mut out = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let v = t[(x, y)];
            if v == Complex64::default() {
                continue;
            }
            let p = phases.get(x, y).ok_or_else(|| {
                Error::InvalidParameter(format!("entry ({x}, {y}) couples two components"))
            })?;
            out[(x, y)] = v * Complex64::from_polar(1.0, p);
        }
    }
    Ok(out)
}

fn pair_propagation(m: &DMatrix<Complex64>, phases: &PairPhases) -> Propagation {
    let n = phases.vertex_count();
    let mut worst = 0;
    for x in 0..n {
        for y in 0..n {
            if m[(x, y)] != Complex64::default() {
                let d = phases.distance(x, y);
                if d == UNREACHABLE {
                    return Propagation::Infinite;
                }
                worst = worst.max(d);
            }
        }
    }
    Propagation::Finite(worst)
}

/// Random operator with entries on pairs at distance at most `radius`.
pub fn random_sparse_operator(
    phases: &PairPhases,
    radius: usize,
    density: f64,
    rng: &mut impl Rng,
) -> DMatrix<Complex64> {
    let n = phases.vertex_count();
    let mut m = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            if phases.distance(x, y) <= radius && rng.gen_bool(density) {
                m[(x, y)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    m
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Samples `trials` pairs `T, S` of propagation at most `R / 3` and checks
/// multiplicativity and adjoint compatibility of `π_ρ`.
pub fn check_r_representation(
    g: &Graph,
    rho: &PhaseFunction,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<RepresentationCheck> {
    let phases = extend_rho_all(g, rho)?;
    let radius = r / 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resampled = 0;
    let mut max_product_residual: f64 = 0.0;
    let mut max_adjoint_residual: f64 = 0.0;
    let mut done = 0;
    while done < trials {
        let density = rng.gen_range(0.05..0.5);
        let t = random_sparse_operator(&phases, radius, density, &mut rng);
        let s = random_sparse_operator(&phases, radius, density, &mut rng);
        let ts = &t * &s;
        match pair_propagation(&ts, &phases) {
            Propagation::Finite(p) if p <= r => {}
            _ => {
                resampled += 1;
                if resampled > 100 * trials.max(1) {
                    return Err(Error::Invariant(
                        "products keep exceeding propagation R".into(),
                    ));
                }
                continue;
            }
        }
        let pt = twist_operator(&t, &phases)?;
        let ps = twist_operator(&s, &phases)?;
        let pts = twist_operator(&ts, &phases)?;
        max_product_residual = max_product_residual.max(frobenius(&(&pts - &pt * &ps)));
        let adj = twist_operator(&t.adjoint(), &phases)?;
        max_adjoint_residual = max_adjoint_residual.max(frobenius(&(adj - pt.adjoint())));
        done += 1;
    }
    Ok(RepresentationCheck {
        trials,
        resampled,
        max_product_residual,
        max_adjoint_residual,
        passed: max_product_residual <= MULTIPLICATIVITY_TOLERANCE && max_adjoint_residual == 0.0,
    })
}

/// `A3` touches `B`; `A1` touches the support of `v`; `A2` is the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    pub a3: Vec<usize>,
}

pub fn partition_a123(g: &Graph, v: &CycleVector, b: &EdgeSelection) -> Result<VertexPartition> {
    let v = if v.0.is_on(g) {
        v.clone()
    } else {
        v.lift_to(g)?
    };
    let n = g.vertex_count();
    let mut class = vec![2u8; n];
    for &(x, y) in &b.edges {
        class[x] = 3;
        class[y] = 3;
    }
    for (id, &(x, y)) in g.edges().iter().enumerate() {
        if v.0.edge_value(id) != 0 {
            for z in [x, y] {
                if class[z] == 2 {
                    class[z] = 1;
                }
            }
        }
    }
    let pick = |c| (0..n).filter(|&x| class[x] == c).collect();
    Ok(VertexPartition {
        a1: pick(1),
        a2: pick(2),
        a3: pick(3),
    })
}

/// Rank of `Z_R` against the threshold `ε|V|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCheck {
    pub r: usize,
    pub rank: usize,
    pub threshold: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn cycle_density_check(
    g: &Graph,
    r: usize,
    epsilon: f64,
    opts: CycleOptions,
) -> Result<DensityCheck> {
    let rank = short_cycle_rank(g, r, opts)?.rank.unwrap_or(0);
    Ok(density_from_rank(g, r, rank, epsilon))
}

fn density_from_rank(g: &Graph, r: usize, rank: usize, epsilon: f64) -> DensityCheck {
    let threshold = epsilon * g.vertex_count() as f64;
    DensityCheck {
        r,
        rank,
        threshold,
        margin: rank as f64 - threshold,
        holds: rank as f64 >= threshold,
    }
}

/// Where the divergence-free vector on `X \ B` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleVectorSource {
    /// Random covering-cycle construction.
    Nice,
    /// Eulerian orientation; requires even degrees.
    Eulerian,
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessOptions {
    pub seed: u64,
    pub max_retries: usize,
    pub cycles: CycleOptions,
    pub brute_force_cap: usize,
    /// Relative zero threshold for the twisted spectrum.
    pub zero_threshold: f64,
    pub source: CycleVectorSource,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            seed: 0,
            max_retries: DEFAULT_MAX_RETRIES,
            cycles: CycleOptions::default(),
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
            zero_threshold: 1e-13,
            source: CycleVectorSource::Nice,
        }
    }
}

/// Mid-range expansion of `X \ B` against `h`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionCheck {
    /// `exact`, `spectral` or `unavailable`.
    pub method: &'static str,
    pub ratio: Option<f64>,
    pub h: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub r: usize,
    pub vertices: usize,
    pub edges: usize,
    pub seed: u64,
    pub dim_z_r: usize,
    pub epsilon_times_v: f64,
    /// `dim Z_R < ε|V|`.
    pub regime: bool,
    pub b_size: usize,
    pub b_edges: Vec<(usize, usize)>,
    pub expansion: ExpansionCheck,
    /// The defect inequality is asserted only in the regime with expansion.
    pub asserting: bool,
    pub cycle_vector_source: CycleVectorSource,
    pub cycle_vector_support: usize,
    pub non_bridges: usize,
    pub max_orthogonality_residual: f64,
    pub max_agreement_error: f64,
    pub partition_sizes: [usize; 3],
    pub t: f64,
    pub rayleigh: f64,
    pub defect_norm: f64,
    /// `(1 - 2c3/d²)^½ · ½dt²`.
    pub bound: f64,
    pub defect_holds: bool,
    pub spectrum_window: [f64; 2],
    /// Smallest eigenvalue of `Δ_t` above the zero threshold.
    pub low_eigenvalue: Option<f64>,
    pub window_hit: bool,
    /// Distance from `½dt²` to the spectrum; at most `defect_norm`.
    pub target_distance: Option<f64>,
    pub stages: Vec<String>,
}

impl WitnessReport {
    /// Asserting and the defect or window check failed.
    pub fn violated(&self) -> bool {
        self.asserting && (!self.defect_holds || !self.window_hit)
    }
}

/// Runs `select_B`, the expansion check on `X \ B`, the cycle vector on
/// `X \ B`, `solve_rho` and the twisted Laplacian at `t = bundle.t`.
pub fn spectral_witness(
    g: &Graph,
    r: usize,
    bundle: &ConstantsBundle,
    opts: &WitnessOptions,
) -> Result<WitnessReport> {
    let mut stages = Vec::new();
    let components = component_labels(g).1;
    if components != 1 {
        return Err(Error::at("input")(Error::Disconnected { components }));
    }
    if max_degree(g) > bundle.d {
        return Err(Error::at("input")(Error::InvalidParameter(format!(
            "max degree {} exceeds d = {}",
            max_degree(g),
            bundle.d
        ))));
    }
    stages.push(format!(
        "input: {} vertices, {} edges",
        g.vertex_count(),
        g.edge_count()
    ));

    let b = select_b(g, r, opts.cycles).map_err(Error::at("select_b"))?;
    let density = density_from_rank(g, r, b.len(), bundle.epsilon);
    let regime = !density.holds;
    stages.push(format!(
        "select_b: |B| = {}, {} short cycles",
        b.len(),
        b.cycles.cycles.len()
    ));

    let rest = b.remainder(g);
    let expansion = match cheeger_certificate(&rest, CheegerMode::MidRange, opts.brute_force_cap) {
        Ok(cert) => ExpansionCheck {
            method: if cert.exact { "exact" } else { "spectral" },
            ratio: Some(cert.minimum_ratio),
            h: bundle.h,
            holds: cert.minimum_ratio >= bundle.h,
        },
        Err(Error::EmptyRange { .. }) => ExpansionCheck {
            method: "unavailable",
            ratio: None,
            h: bundle.h,
            holds: false,
        },
        Err(e) => return Err(Error::at("expansion")(e)),
    };
    stages.push(format!(
        "expansion: {} ratio {:?} vs h = {:e}",
        expansion.method, expansion.ratio, bundle.h
    ));

    let v = match opts.source {
        CycleVectorSource::Nice => nice_cycle_vector(&rest, opts.seed, opts.max_retries),
        CycleVectorSource::Eulerian => eulerian_orientation(&rest),
    }
    .map_err(Error::at("cycle_vector"))?;
    let non_bridges = bridges(&rest).non_bridge_count;
    stages.push(format!(
        "cycle_vector: support {} of {} non-bridges",
        v.support_size(),
        non_bridges
    ));

    let rho = solve_rho(g, r, &v, &b).map_err(Error::at("solve_rho"))?;
    let v_full = v.lift_to(g).map_err(Error::at("solve_rho"))?;
    let mut max_orthogonality_residual: f64 = 0.0;
    for c in &b.cycles.cycles {
        max_orthogonality_residual = max_orthogonality_residual.max(rho.circulation(c)?.abs());
    }
    let max_agreement_error = (0..g.edge_count())
        .filter(|id| !b.contains(*id))
        .map(|id| (rho.0.edge_value(id) - v_full.0.edge_value(id) as f64).abs())
        .fold(0.0, f64::max);
    stages.push(format!(
        "solve_rho: orthogonality residual {max_orthogonality_residual:e}"
    ));

    let partition = partition_a123(g, &v_full, &b)?;
    let t = bundle.t;
    let defect = constant_vector_defect(g, &rho, t, bundle.d).map_err(Error::at("defect"))?;
    let target = bundle.target_eigenvalue();
    let factor = bundle.defect_factor();
    let bound = factor * target;
    let window = [target * (1.0 - factor), target * (1.0 + factor)];
    stages.push(format!(
        "defect: {:e} vs bound {bound:e}",
        defect.defect_norm
    ));

    let (low_eigenvalue, window_hit, target_distance) = if g.vertex_count() <= DENSE_LIMIT {
        let m = twisted_laplacian(g, &rho, t).map_err(Error::at("twisted_laplacian"))?;
        let spec_opts = SpectrumOptions {
            zero_threshold: opts.zero_threshold,
            ..SpectrumOptions::default()
        };
        stages.push(format!(
            "twisted_laplacian: t = {t:e}, dimension {}",
            m.dimension()
        ));
        let s = spectrum(&m, &spec_opts).map_err(Error::at("spectrum"))?;
        let hit = s
            .eigenvalues
            .iter()
            .any(|&l| l >= window[0] && l <= window[1]);
        let dist = s
            .eigenvalues
            .iter()
            .map(|&l| (l - target).abs())
            .fold(f64::INFINITY, f64::min);
        (s.gap, hit, Some(dist))
    } else {
        stages.push(format!(
            "twisted_laplacian: skipped above {DENSE_LIMIT} vertices"
        ));
        (None, false, None)
    };
    stages.push(format!(
        "spectrum: low eigenvalue {low_eigenvalue:?}, window hit {window_hit}"
    ));

    Ok(WitnessReport {
        r,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        seed: opts.seed,
        dim_z_r: b.len(),
        epsilon_times_v: density.threshold,
        regime,
        b_size: b.len(),
        b_edges: b.edges.clone(),
        asserting: regime && expansion.holds,
        expansion,
        cycle_vector_source: opts.source,
        cycle_vector_support: v.support_size(),
        non_bridges,
        max_orthogonality_residual,
        max_agreement_error,
        partition_sizes: [partition.a1.len(), partition.a2.len(), partition.a3.len()],
        t,
        rayleigh: defect.rayleigh,
        defect_norm: defect.defect_norm,
        bound,
        defect_holds: defect.defect_norm <= bound,
        spectrum_window: window,
        low_eigenvalue,
        window_hit,
        target_distance,
        stages,
    })
}
