//! Internal spectral projection used by the superpixel stage and the patch
//! featurizer. Not part of the public API.
//!
//! Computes the leading eigenvectors of the band covariance matrix by plain
//! power iteration with deflation. Everything is fixed-iteration and seeded
//! from a constant, so the basis is a pure function of the cube.

use crate::hsicore::{HsiCube, SeededRng};

const POWER_ITERATIONS: usize = 100;
const START_SEED: u64 = 0x0BA5_15ED;

/// Leading `k` eigenvectors (rows, length `bands`) of the band covariance,
/// ordered by decreasing eigenvalue. Each vector is unit length with its
/// first coordinate of magnitude above 1e-9 made positive, so the sign is
/// deterministic. Directions with (numerically) zero variance come back as
/// zero vectors.
pub(crate) fn principal_basis(cube: &HsiCube, k: usize) -> Vec<Vec<f64>> {
    let bands = cube.bands();
    let n = cube.num_pixels();
    let mut mean = vec![0.0f64; bands];
    for p in 0..n {
        for (m, &v) in mean.iter_mut().zip(cube.spectrum_at(p)) {
            *m += v as f64;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }

    // Band covariance, accumulated in f64.
    let mut cov = vec![0.0f64; bands * bands];
    let mut centered = vec![0.0f64; bands];
    for p in 0..n {
        for (c, (&v, &m)) in centered.iter_mut().zip(cube.spectrum_at(p).iter().zip(&mean)) {
            *c = v as f64 - m;
        }
        for i in 0..bands {
            let ci = centered[i];
            for j in i..bands {
                cov[i * bands + j] += ci * centered[j];
            }
        }
    }
    for i in 0..bands {
        for j in i..bands {
            let v = cov[i * bands + j] / n as f64;
            cov[i * bands + j] = v;
            cov[j * bands + i] = v;
        }
    }

    let trace: f64 = (0..bands).map(|i| cov[i * bands + i]).sum();
    let negligible = trace.max(1e-300) * 1e-12;

    let mut rng = SeededRng::new(START_SEED);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v: Vec<f64> = (0..bands).map(|_| rng.next_f64() - 0.5).collect();
        orthogonalize(&mut v, &basis);
        normalize(&mut v);
        let mut lambda = 0.0;
        for _ in 0..POWER_ITERATIONS {
            let mut w = mat_vec(&cov, &v, bands);
            // Keep the iterate inside the orthogonal complement of the
            // vectors already found; deflation alone leaves a residual when
            // eigenvalues are close and the iteration count is fixed.
            orthogonalize(&mut w, &basis);
            lambda = norm(&w);
            if lambda <= negligible {
                break;
            }
            for x in &mut w {
                *x /= lambda;
            }
            v = w;
        }
        if lambda <= negligible {
            basis.push(vec![0.0; bands]);
            continue;
        }
        fix_sign(&mut v);
        // Deflate so the next round finds the following eigenvector.
        for i in 0..bands {
            for j in 0..bands {
                cov[i * bands + j] -= lambda * v[i] * v[j];
            }
        }
        basis.push(v);
    }
    basis
}

/// Projects one spectrum onto a basis produced by [`principal_basis`].
pub(crate) fn project(basis: &[Vec<f64>], spectrum: &[f32]) -> Vec<f64> {
    basis
        .iter()
        .map(|row| {
            row.iter()
                .zip(spectrum)
                .map(|(&b, &s)| b * s as f64)
                .sum()
        })
        .collect()
}

fn mat_vec(m: &[f64], v: &[f64], n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        for x in v {
            *x /= n;
        }
    }
}

/// Subtracts the projection of `v` onto every vector in `basis`.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        for (x, y) in v.iter_mut().zip(b) {
            *x -= dot * y;
        }
    }
}

fn fix_sign(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|x| x.abs() > 1e-9) {
        if first < 0.0 {
            for x in v {
                *x = -*x;
            }
        }
    }
}
