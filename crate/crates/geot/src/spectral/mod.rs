//! Laplacians, twisted (magnetic) Laplacians, their spectra, propagation of
//! finite operators, and the matching decomposition `Δ = Σ (1 - τ_i)`.

mod colouring;
mod lanczos;

pub use colouring::{edge_colouring_decomposition, MatchingDecomposition};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cycles::PhaseFunction;
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, component_labels, Graph, UNREACHABLE};

/// Graphs up to this size use dense eigensolvers.
pub const DENSE_LIMIT: usize = 4000;
/// Relative zero threshold for eigenvalues.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-8;

/// Graph Laplacian with exact integer entries, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianMatrix {
    dimension: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl LaplacianMatrix {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Nonzero entries of row `x`, sorted by column.
    pub fn row(&self, x: usize) -> &[(usize, i64)] {
        &self.rows[x]
    }

    pub fn entry(&self, x: usize, y: usize) -> i64 {
        self.rows[x]
            .binary_search_by_key(&y, |&(c, _)| c)
            .map(|i| self.rows[x][i].1)
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, v) in row {
                m[(x, y)] = v as f64;
            }
        }
        m
    }

    pub fn apply(&self, xs: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(y, v)| v as f64 * xs[y]).sum())
            .collect()
    }
}

/// `Δ_{xx} = deg(x)`, `Δ_{xy} = -1` for `x ~ y`.
pub fn laplacian(g: &Graph) -> LaplacianMatrix {
    let rows = (0..g.vertex_count())
        .map(|x| {
            let mut row: Vec<(usize, i64)> = g.neighbors(x).iter().map(|&y| (y, -1)).collect();
            row.push((x, g.degree(x) as i64));
            row.sort_unstable();
            row
        })
        .collect();
    LaplacianMatrix {
        dimension: g.vertex_count(),
        rows,
    }
}

/// `π_{tρ}(Δ)`: off-diagonal entries `-exp(i t ρ(x, y))` on edges.
#[derive(Clone, Debug)]
pub struct TwistedLaplacian {
    dimension: usize,
    phase_scale: f64,
    phases: PhaseFunction,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl TwistedLaplacian {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn phase_scale(&self) -> f64 {
        self.phase_scale
    }

    pub fn phases(&self) -> &PhaseFunction {
        &self.phases
    }

    pub fn entry(&self, x: usize, y: usize) -> Complex64 {
        self.rows[x]
            .binary_search_by_key(&y, |&(c, _)| c)
            .map(|i| self.rows[x][i].1)
            .unwrap_or_default()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, v) in row {
                m[(x, y)] = v;
            }
        }
        m
    }

    pub fn apply(&self, xs: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(y, v)| v * xs[y]).sum())
            .collect()
    }
}

pub fn twisted_laplacian(g: &Graph, rho: &PhaseFunction, t: f64) -> Result<TwistedLaplacian> {
    let vals = rho.0.on_graph(g)?;
    let rows = (0..g.vertex_count())
        .map(|x| {
            let mut row: Vec<(usize, Complex64)> = g
                .neighbors(x)
                .iter()
                .zip(g.incident_edges(x))
                .map(|(&y, &id)| {
                    let r = if x < y { vals[id] } else { -vals[id] };
                    (y, -Complex64::from_polar(1.0, t * r))
                })
                .collect();
            row.push((x, Complex64::new(g.degree(x) as f64, 0.0)));
            row.sort_unstable_by_key(|&(c, _)| c);
            row
        })
        .collect();
    Ok(TwistedLaplacian {
        dimension: g.vertex_count(),
        phase_scale: t,
        phases: rho.clone(),
        rows,
    })
}

/// Eigenvalue summary of a Hermitian operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_multiplicity: usize,
    /// Smallest eigenvalue above the zero threshold.
    pub gap: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    /// Eigenvalues at most `zero_threshold * max(λ_max, 1)` count as zero.
    pub zero_threshold: f64,
    pub max_iterations: usize,
    pub hermitian_tolerance: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
            max_iterations: 0,
            hermitian_tolerance: 1e-12,
        }
    }
}

/// Operators whose full spectrum can be computed densely.
pub trait HermitianMatrix {
    fn dimension(&self) -> usize;
    fn eigenvalues(&self, opts: &SpectrumOptions) -> Result<Vec<f64>>;
}

fn eigen_failure(n: usize, opts: &SpectrumOptions) -> Error {
    Error::Eigen(format!(
        "no convergence on {n}x{n} matrix within {} sweeps",
        opts.max_iterations
    ))
}

impl HermitianMatrix for LaplacianMatrix {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eigenvalues(&self, opts: &SpectrumOptions) -> Result<Vec<f64>> {
        let m = self.to_dense();
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, opts.max_iterations)
            .ok_or_else(|| eigen_failure(self.dimension, opts))?;
        Ok(eig.eigenvalues.iter().copied().collect())
    }
}

impl HermitianMatrix for TwistedLaplacian {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eigenvalues(&self, opts: &SpectrumOptions) -> Result<Vec<f64>> {
        let m = self.to_dense();
        let skew = (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if skew > opts.hermitian_tolerance {
            return Err(Error::InvalidParameter(format!(
                "matrix is not Hermitian (deviation {skew:e})"
            )));
        }
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, opts.max_iterations)
            .ok_or_else(|| eigen_failure(self.dimension, opts))?;
        Ok(eig.eigenvalues.iter().copied().collect())
    }
}

/// Full spectrum, sorted, with zero multiplicity and gap.
pub fn spectrum<M: HermitianMatrix + ?Sized>(
    m: &M,
    opts: &SpectrumOptions,
) -> Result<SpectrumReport> {
    let mut eigenvalues = m.eigenvalues(opts)?;
    eigenvalues.sort_by(f64::total_cmp);
    Ok(summarize(eigenvalues, opts.zero_threshold))
}

pub(crate) fn summarize(eigenvalues: Vec<f64>, zero_threshold: f64) -> SpectrumReport {
    let top = eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    let cutoff = zero_threshold * top;
    let zero_multiplicity = eigenvalues.iter().filter(|&&l| l <= cutoff).count();
    let gap = eigenvalues.iter().copied().find(|&l| l > cutoff);
    SpectrumReport {
        eigenvalues,
        zero_multiplicity,
        gap,
    }
}

/// Spectral gap of the graph Laplacian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapEstimate {
    pub gap: Option<f64>,
    pub zero_multiplicity: usize,
    /// `false` when computed by the iterative solver.
    pub dense: bool,
}

/// Smallest positive Laplacian eigenvalue: dense up to [`DENSE_LIMIT`],
/// otherwise Lanczos with the per-component constants deflated.
pub fn spectral_gap(g: &Graph, opts: &SpectrumOptions) -> Result<GapEstimate> {
    let lap = laplacian(g);
    if g.vertex_count() <= DENSE_LIMIT {
        let report = spectrum(&lap, opts)?;
        return Ok(GapEstimate {
            gap: report.gap,
            zero_multiplicity: report.zero_multiplicity,
            dense: true,
        });
    }
    let (labels, components) = component_labels(g);
    let gap = lanczos::lowest_deflated(&lap, &labels, components, 300, 0x5eed);
    Ok(GapEstimate {
        gap: Some(gap),
        zero_multiplicity: components,
        dense: false,
    })
}

/// Rayleigh quotient of the unit constant vector and its distance from
/// `½ d t²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantDefect {
    pub rayleigh: f64,
    pub defect_norm: f64,
}

/// `(Δ_t ξ)(x) = Σ_{y~x} (1 - exp(i t ρ(x,y)))` for the all-ones `ξ`.
///
/// Uses `1 - cos θ = 2 sin²(θ/2)` so small phases keep full precision.
pub fn twisted_constant_image(g: &Graph, rho: &PhaseFunction, t: f64) -> Result<Vec<Complex64>> {
    let vals = rho.0.on_graph(g)?;
    Ok((0..g.vertex_count())
        .map(|x| {
            g.neighbors(x)
                .iter()
                .zip(g.incident_edges(x))
                .map(|(&y, &id)| {
                    let theta = t * if x < y { vals[id] } else { -vals[id] };
                    let half = (theta / 2.0).sin();
                    Complex64::new(2.0 * half * half, -theta.sin())
                })
                .sum()
        })
        .collect())
}

pub fn constant_vector_defect(
    g: &Graph,
    rho: &PhaseFunction,
    t: f64,
    d: usize,
) -> Result<ConstantDefect> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(ConstantDefect {
            rayleigh: 0.0,
            defect_norm: 0.0,
        });
    }
    let image = twisted_constant_image(g, rho, t)?;
    let target = 0.5 * d as f64 * t * t;
    let inv_n = 1.0 / n as f64;
    let rayleigh = image.iter().map(|z| z.re).sum::<f64>() * inv_n;
    let defect_sq: f64 = image
        .iter()
        .map(|z| (z - Complex64::new(target, 0.0)).norm_sqr())
        .sum::<f64>()
        * inv_n;
    Ok(ConstantDefect {
        rayleigh,
        defect_norm: defect_sq.sqrt(),
    })
}

/// Residual `‖Δ_t ξ - λ ξ‖` for the constant unit vector, via the assembled matrix.
pub fn constant_vector_residual(m: &TwistedLaplacian, lambda: f64) -> f64 {
    let n = m.dimension();
    if n == 0 {
        return 0.0;
    }
    let c = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let xi = vec![c; n];
    m.apply(&xi)
        .iter()
        .map(|z| (z - c * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// A complex matrix indexed by the vertices of one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePropagationOperator {
    pub matrix: DMatrix<Complex64>,
}

impl FinitePropagationOperator {
    pub fn identity(n: usize) -> Self {
        FinitePropagationOperator {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn from_laplacian(l: &LaplacianMatrix) -> Self {
        FinitePropagationOperator {
            matrix: l.to_dense().map(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn compose(&self, other: &Self) -> Self {
        FinitePropagationOperator {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn adjoint(&self) -> Self {
        FinitePropagationOperator {
            matrix: self.matrix.adjoint(),
        }
    }
}

/// Propagation of an operator: finite, or infinite when it couples components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Propagation {
    Finite(usize),
    Infinite,
}

/// `sup { d(x, y) : T_{xy} != 0 }`.
pub fn propagation(op: &FinitePropagationOperator, g: &Graph) -> Result<Propagation> {
    let n = g.vertex_count();
    if op.matrix.nrows() != n || op.matrix.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "operator is {}x{}, graph has {n} vertices",
            op.matrix.nrows(),
            op.matrix.ncols()
        )));
    }
    let mut worst = 0;
    for x in 0..n {
        let row_nonzero: Vec<usize> = (0..n)
            .filter(|&y| op.matrix[(x, y)] != Complex64::default())
            .collect();
        if row_nonzero.iter().all(|&y| y == x) {
            continue;
        }
        let dist = bfs_distances(g, x)?;
        for y in row_nonzero {
            if dist[y] == UNREACHABLE {
                return Ok(Propagation::Infinite);
            }
            worst = worst.max(dist[y]);
        }
    }
    Ok(Propagation::Finite(worst))
}

/// Smallest and largest eigenvalue of a real symmetric matrix, for checks.
#[cfg(test)]
pub(crate) fn real_extremes(m: DMatrix<f64>) -> (f64, f64) {
    let eig = SymmetricEigen::new(m);
    let v: nalgebra::DVector<f64> = eig.eigenvalues;
    (v.min(), v.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_random_regular, gen_standard, StandardKind};
    use crate::cycles::eulerian_orientation;
    use std::f64::consts::PI;

    fn opts() -> SpectrumOptions {
        SpectrumOptions::default()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn single_edge_laplacian() {
        let g = gen_standard(StandardKind::Path, 2).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.entry(0, 0), 1);
        assert_eq!(l.entry(0, 1), -1);
        assert_eq!(l.entry(1, 0), -1);
        assert_eq!(l.entry(1, 1), 1);
    }

    #[test]
    fn closed_form_spectra() {
        // 2 - 2cos(2πk/4) for k = 0..3.
        let c4 = gen_standard(StandardKind::Cycle, 4).unwrap();
        let mut expected: Vec<f64> = (0..4)
            .map(|k| 2.0 - 2.0 * (2.0 * PI * k as f64 / 4.0).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        let s = spectrum(&laplacian(&c4), &opts()).unwrap();
        assert!(close(&s.eigenvalues, &expected, 1e-12));
        assert!(close(&s.eigenvalues, &[0.0, 2.0, 2.0, 4.0], 1e-12));

        let k4 = gen_standard(StandardKind::Complete, 4).unwrap();
        let s = spectrum(&laplacian(&k4), &opts()).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 4.0, 4.0, 4.0], 1e-12));
        assert!((s.gap.unwrap() - 4.0).abs() < 1e-12);

        // Characteristic polynomial of the 3-path: λ(λ-1)(λ-3).
        let p3 = gen_standard(StandardKind::Path, 3).unwrap();
        let s = spectrum(&laplacian(&p3), &opts()).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 1.0, 3.0], 1e-12));
        assert_eq!(s.zero_multiplicity, 1);
    }

    #[test]
    fn zero_multiplicity_counts_components() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let s = spectrum(&laplacian(&g), &opts()).unwrap();
        assert_eq!(s.zero_multiplicity, 2);
        assert!((s.gap.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_with_expected_keys() {
        let g = gen_standard(StandardKind::Path, 2).unwrap();
        let s = spectrum(&laplacian(&g), &opts()).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert!(json.get("eigenvalues").unwrap().is_array());
        assert_eq!(json["zero_multiplicity"], 1);
        assert!((json["gap"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn untwisted_matches_laplacian() {
        let g = gen_standard(StandardKind::Petersen, 10).unwrap();
        let rho =
            PhaseFunction::from_values(&g, (0..15).map(|i| i as f64 * 0.3).collect()).unwrap();
        let t0 = twisted_laplacian(&g, &rho, 0.0).unwrap();
        let l = laplacian(&g);
        for x in 0..10 {
            for y in 0..10 {
                assert_eq!(t0.entry(x, y), Complex64::new(l.entry(x, y) as f64, 0.0));
            }
        }
    }

    #[test]
    fn single_edge_at_pi() {
        let g = gen_standard(StandardKind::Path, 2).unwrap();
        let rho = PhaseFunction::from_values(&g, vec![1.0]).unwrap();
        let m = twisted_laplacian(&g, &rho, PI).unwrap();
        assert!((m.entry(0, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let s = spectrum(&m, &opts()).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 2.0], 1e-12));
    }

    #[test]
    fn cycle_twist_eigenvector() {
        let c4 = gen_standard(StandardKind::Cycle, 4).unwrap();
        let rho = PhaseFunction::from_cycle_vector(&eulerian_orientation(&c4).unwrap());
        for t in [0.1, 0.7, 2.0] {
            let m = twisted_laplacian(&c4, &rho, t).unwrap();
            assert!(constant_vector_residual(&m, 2.0 * (1.0 - t.cos())) < 1e-12);
        }
    }

    #[test]
    fn defect_examples() {
        let g = gen_standard(StandardKind::Petersen, 10).unwrap();
        let rho = PhaseFunction::from_values(&g, vec![1.0; 15]).unwrap();
        let d0 = constant_vector_defect(&g, &rho, 0.0, 3).unwrap();
        assert_eq!(d0.rayleigh, 0.0);
        assert_eq!(d0.defect_norm, 0.0);

        let g = gen_random_regular(20, 4, 3).unwrap();
        let rho = PhaseFunction::from_cycle_vector(&eulerian_orientation(&g).unwrap());
        for t in [0.05, 0.3, 1.2] {
            let d = constant_vector_defect(&g, &rho, t, 4).unwrap();
            let exact = 4.0 * (1.0 - t.cos());
            assert!((d.rayleigh - exact).abs() < 1e-12);
            assert!((d.defect_norm - (exact - 2.0 * t * t).abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn propagation_examples() {
        let p5 = gen_standard(StandardKind::Path, 5).unwrap();
        assert_eq!(
            propagation(&FinitePropagationOperator::identity(5), &p5).unwrap(),
            Propagation::Finite(0)
        );
        let l = FinitePropagationOperator::from_laplacian(&laplacian(&p5));
        assert_eq!(propagation(&l, &p5).unwrap(), Propagation::Finite(1));
        assert_eq!(
            propagation(&l.compose(&l), &p5).unwrap(),
            Propagation::Finite(2)
        );
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let mut op = FinitePropagationOperator::identity(4);
        op.matrix[(0, 3)] = Complex64::new(1.0, 0.0);
        assert_eq!(propagation(&op, &two).unwrap(), Propagation::Infinite);
        assert!(propagation(&op, &p5).is_err());
    }

    #[test]
    fn lanczos_agrees_with_dense_gap() {
        let g = gen_random_regular(60, 3, 9).unwrap();
        let lap = laplacian(&g);
        let dense = spectrum(&lap, &opts()).unwrap().gap.unwrap();
        let (labels, count) = component_labels(&g);
        let it = lanczos::lowest_deflated(&lap, &labels, count, 60, 1);
        assert!((it - dense).abs() < 1e-6, "{it} vs {dense}");
    }

    #[test]
    fn laplacian_is_psd_by_extremes() {
        let g = gen_random_regular(16, 3, 2).unwrap();
        let (lo, hi) = real_extremes(laplacian(&g).to_dense());
        assert!(lo > -1e-12);
        assert!(hi <= 6.0 + 1e-12);
    }
}
