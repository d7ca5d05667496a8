//! Deterministic eigenvalue solver for small Hermitian matrices.
//!
//! Dimension 2 uses the closed form of the characteristic polynomial. Larger
//! matrices are embedded as the real symmetric matrix `[[A, -B], [B, A]]` for
//! `H = A + iB`, whose spectrum is that of `H` with every eigenvalue doubled,
//! and diagonalized with cyclic Jacobi sweeps.

use super::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the Hermitian part of `h` is used.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    assert!(h.is_square(), "eigenvalues need a square matrix");
    let n = h.rows();
    match n {
        1 => vec![h[(0, 0)].re],
        2 => {
            let a = h[(0, 0)].re;
            let d = h[(1, 1)].re;
            let b = (h[(0, 1)] + h[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - disc, mean + disc]
        }
        _ => {
            let m = 2 * n;
            let mut s = vec![0.0; m * m];
            for r in 0..n {
                for c in 0..n {
                    // Hermitian part, entrywise.
                    let z = (h[(r, c)] + h[(c, r)].conj()) * 0.5;
                    s[r * m + c] = z.re;
                    s[(r + n) * m + (c + n)] = z.re;
                    s[r * m + (c + n)] = -z.im;
                    s[(r + n) * m + c] = z.im;
                }
            }
            let mut ev = jacobi_symmetric(&mut s, m);
            ev.sort_by(f64::total_cmp);
            ev.into_iter().step_by(2).collect()
        }
    }
}

/// Cyclic Jacobi on a real symmetric `m × m` matrix stored row-major.
/// Returns the (unsorted) diagonal after convergence.
fn jacobi_symmetric(a: &mut [f64], m: usize) -> Vec<f64> {
    let scale = a.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..m)
            .flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * m + q] * a[p * m + q])
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}
