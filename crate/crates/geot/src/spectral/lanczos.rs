use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LaplacianMatrix;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

// Removes the component of `x` along each component's indicator vector.
fn deflate(x: &mut [f64], labels: &[usize], components: usize) {
    let mut sums = vec![0.0; components];
    let mut sizes = vec![0usize; components];
    for (v, &c) in x.iter().zip(labels) {
        sums[c] += v;
        sizes[c] += 1;
    }
    for (v, &c) in x.iter_mut().zip(labels) {
        *v -= sums[c] / sizes[c] as f64;
    }
}

/// Smallest eigenvalue of `lap` on the complement of the locally constant
/// vectors, by Lanczos with full reorthogonalization.
pub(crate) fn lowest_deflated(
    lap: &LaplacianMatrix,
    labels: &[usize],
    components: usize,
    steps: usize,
    seed: u64,
) -> f64 {
    let n = lap.dimension();
    let steps = steps.min(n.saturating_sub(components)).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut q, labels, components);
    let norm = dot(&q, &q).sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    q.iter_mut().for_each(|x| *x /= norm);
    let scale = (0..n).map(|x| lap.entry(x, x) as f64).fold(1.0, f64::max);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for j in 0..steps {
        let mut w = lap.apply(&basis[j]);
        deflate(&mut w, labels, components);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        // Two passes of Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                axpy(-c, b, &mut w);
            }
        }
        deflate(&mut w, labels, components);
        let b = dot(&w, &w).sqrt();
        if j + 1 == steps || b < 1e-10 * scale {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    SymmetricEigen::new(t).eigenvalues.min()
}
