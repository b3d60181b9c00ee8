//! Untrusted floating-point layer: maximises the smallest eigenvalue of an
//! affine family of Hermitian matrices by seeded projected subgradient ascent.
//! Everything it returns is re-checked exactly by the caller.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::exterior::HermitianMatrix;
use crate::scalars::rational_to_f64;

/// Real symmetric `2n × 2n` form `[[A, −B], [B, A]]` of `H = A + iB`. Its
/// spectrum is that of `H`, with every eigenvalue doubled.
pub(crate) fn embed(h: &HermitianMatrix) -> DMatrix<f64> {
    let n = h.n();
    let c = DMatrix::from_fn(n, n, |j, k| {
        let e = &h.entries[j][k];
        Complex::new(rational_to_f64(&e.re), rational_to_f64(&e.im))
    });
    embed_complex(&c)
}

pub(crate) fn embed_complex(c: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let n = c.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |a, b| {
        let (j, k) = (a % n, b % n);
        let z = c[(j, k)];
        match (a < n, b < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Smallest eigenvalue and a unit eigenvector.
pub(crate) fn min_eig(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(idx).into_owned())
}

#[derive(Debug, Clone)]
pub(crate) struct Maximum {
    pub z: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

fn value_at(base: &DMatrix<f64>, dirs: &[DMatrix<f64>], z: &[f64]) -> (f64, DVector<f64>) {
    let mut m = base.clone();
    for (d, zi) in dirs.iter().zip(z) {
        m += d * *zi;
    }
    min_eig(&m)
}

/// One ascent run of `iters` steps from `start`.
fn ascend(base: &DMatrix<f64>, dirs: &[DMatrix<f64>], start: Vec<f64>, iters: usize, step0: f64) -> Maximum {
    let mut z = start;
    let (mut value, mut v) = value_at(base, dirs, &z);
    let mut best = Maximum { z: z.clone(), value, iterations: 0 };
    let mut stale = 0;
    for t in 0..iters {
        best.iterations = t + 1;
        let g: Vec<f64> = dirs.iter().map(|d| v.dot(&(d * &v))).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-14 {
            break;
        }
        let step = step0 / ((t + 1) as f64).sqrt();
        for (zi, gi) in z.iter_mut().zip(&g) {
            *zi += step * gi / norm;
        }
        (value, v) = value_at(base, dirs, &z);
        if value > best.value + 1e-13 {
            best.value = value;
            best.z.clone_from(&z);
            stale = 0;
        } else {
            stale += 1;
            if stale > 400 {
                break;
            }
        }
    }
    best
}

/// Restarted ascent on `λ_min(base + Σ z_j dirs_j)`. `accept` is consulted
/// after every restart; a `true` answer stops the search there. With
/// `restarts` runs sharing `budget` iterations, the first run starts at the
/// origin and the rest at seeded random points.
pub(crate) fn maximize_min_eig(
    base: &DMatrix<f64>,
    dirs: &[DMatrix<f64>],
    budget: usize,
    restarts: usize,
    rng: &mut ChaCha8Rng,
    mut accept: impl FnMut(&Maximum) -> bool,
) -> Maximum {
    let scale = dirs.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let step0 = if scale > 0.0 { 0.5 / scale } else { 0.0 };
    let restarts = restarts.max(1);
    let per_run = (budget / restarts).max(1);
    let mut best: Option<Maximum> = None;
    let mut used = 0;
    for run in 0..restarts {
        let start: Vec<f64> = if run == 0 {
            vec![0.0; dirs.len()]
        } else {
            (0..dirs.len()).map(|_| rng.random_range(-1.0..1.0) * 4.0 * step0).collect()
        };
        let r = if dirs.is_empty() {
            let (value, _) = value_at(base, dirs, &start);
            Maximum { z: start, value, iterations: 1 }
        } else {
            ascend(base, dirs, start, per_run, step0)
        };
        used += r.iterations;
        let improved = best.as_ref().is_none_or(|b| r.value > b.value);
        if improved {
            best = Some(r);
        }
        let b = best.as_mut().expect("set above");
        b.iterations = used;
        if improved && accept(b) {
            break;
        }
        if dirs.is_empty() {
            break;
        }
    }
    best.expect("at least one run")
}

/// Reduced row-echelon basis of the span of complex vectors, with pivot
/// tolerance `tol`.
pub(crate) fn numeric_rref(mut rows: Vec<Vec<Complex<f64>>>, tol: f64) -> Vec<Vec<Complex<f64>>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let (p, mag) = (r..rows.len())
            .map(|i| (i, rows[i][c].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("rows remain");
        if mag < tol {
            continue;
        }
        rows.swap(r, p);
        let inv = Complex::new(1.0, 0.0) / rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Complex eigenvectors of the Hermitian matrix behind `embedded` whose
/// eigenvalues are below `threshold`.
pub(crate) fn near_kernel(embedded: &DMatrix<f64>, threshold: f64) -> Vec<Vec<Complex<f64>>> {
    let n = embedded.nrows() / 2;
    let eig = SymmetricEigen::new(embedded.clone());
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l < threshold)
        .map(|(i, _)| {
            let col = eig.eigenvectors.column(i);
            (0..n).map(|j| Complex::new(col[j], col[n + j])).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::GaussRational;
    use rand::SeedableRng;

    #[test]
    fn embedding_preserves_spectrum() {
        let mut h = HermitianMatrix::identity(2);
        h.entries[0][1] = GaussRational::i();
        h.entries[1][0] = -GaussRational::i();
        // eigenvalues 0 and 2
        let (l, _) = min_eig(&embed(&h));
        assert!(l.abs() < 1e-12);
    }

    #[test]
    fn ascent_finds_balanced_centre() {
        // diag(1,0) + z·diag(-1,1): optimum λ = 1/2 at z = 1/2.
        let base = embed(&HermitianMatrix::unit(2, 0));
        let mut d = HermitianMatrix::zero(2);
        d.entries[0][0] = GaussRational::int(-1);
        d.entries[1][1] = GaussRational::int(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = maximize_min_eig(&base, &[embed(&d)], 2000, 2, &mut rng, |_| false);
        assert!((m.value - 0.5).abs() < 1e-3, "{m:?}");
        assert!((m.z[0] - 0.5).abs() < 1e-3);
    }
}
