//! Self-contained dense/tridiagonal symmetric eigensolvers.
//!
//! Jacobi sweeps cover the small Hermitian checks (RDM positivity, dense
//! test oracles); Sturm bisection plus inverse iteration extracts the lowest
//! Ritz pair from the Lanczos tridiagonal in O(m) per call.

use num_complex::Complex64;

/// Eigenvalues of a real symmetric matrix (row-major, dim x dim) by cyclic
/// Jacobi. Returns eigenvalues in ascending order.
pub fn symmetric_eigenvalues(a: &[f64], dim: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut off: f64 = off_diag_norm(&m, dim);
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let mut sweeps = 0;
    while off > 1e-28 * scale && sweeps < 100 {
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = m[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * dim + p];
                let aqq = m[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = m[k * dim + p];
                    let akq = m[k * dim + q];
                    m[k * dim + p] = c * akp - s * akq;
                    m[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = m[p * dim + k];
                    let aqk = m[q * dim + k];
                    m[p * dim + k] = c * apk - s * aqk;
                    m[q * dim + k] = s * apk + c * aqk;
                }
            }
        }
        off = off_diag_norm(&m, dim);
        sweeps += 1;
    }
    let mut ev: Vec<f64> = (0..dim).map(|i| m[i * dim + i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

fn off_diag_norm(m: &[f64], dim: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                s += m[i * dim + j] * m[i * dim + j];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a complex Hermitian matrix via the real embedding
/// [[A, -B], [B, A]]; each eigenvalue of H appears twice in the embedding.
pub fn hermitian_eigenvalues(h: &[Complex64], dim: usize) -> Vec<f64> {
    let n2 = 2 * dim;
    let mut m = vec![0.0; n2 * n2];
    for i in 0..dim {
        for j in 0..dim {
            let z = h[i * dim + j];
            m[i * n2 + j] = z.re;
            m[(i + dim) * n2 + (j + dim)] = z.re;
            m[i * n2 + (j + dim)] = -z.im;
            m[(i + dim) * n2 + j] = z.im;
        }
    }
    let ev = symmetric_eigenvalues(&m, n2);
    // doubled spectrum: take every second entry
    (0..dim).map(|i| ev[2 * i]).collect()
}

/// Lowest eigenvalue of a symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (len m-1), by Sturm-count bisection.
pub fn tridiag_lowest_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let m = d.len();
    if m == 1 {
        return d[0];
    }
    // Gershgorin bracket
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i == 0 {
            e[0].abs()
        } else if i == m - 1 {
            e[m - 2].abs()
        } else {
            e[i - 1].abs() + e[i].abs()
        };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let count_below = |x: f64| -> usize {
        // number of eigenvalues < x via the Sturm LDL^T recurrence
        let mut count = 0;
        let mut q = d[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..m {
            let denom = if q.abs() < 1e-300 {
                1e-300_f64.copysign(if q == 0.0 { 1.0 } else { q })
            } else {
                q
            };
            q = d[i] - x - e[i - 1] * e[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector of the tridiagonal for an isolated eigenvalue `theta`, by two
/// rounds of inverse iteration with a pivoted tridiagonal solve.
pub fn tridiag_eigenvector(d: &[f64], e: &[f64], theta: f64) -> Vec<f64> {
    let m = d.len();
    if m == 1 {
        return vec![1.0];
    }
    let scale: f64 = d.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
        + e.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let shift = theta + 1e-13 * scale.max(1.0);
    // deterministic start
    let mut v: Vec<f64> = (0..m)
        .map(|i| 0.5 + ((i * 2654435761) % 1024) as f64 / 1024.0)
        .collect();
    normalize(&mut v);
    for _ in 0..3 {
        v = solve_shifted_tridiag(d, e, shift, &v);
        normalize(&mut v);
    }
    v
}

/// Solve (T - shift) x = b with partial pivoting (band LU, bandwidth 2).
fn solve_shifted_tridiag(d: &[f64], e: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let m = d.len();
    let mut diag: Vec<f64> = d.iter().map(|&x| x - shift).collect();
    let mut du = vec![0.0; m]; // first superdiagonal
    let mut du2 = vec![0.0; m]; // second superdiagonal (fill-in from pivoting)
    for i in 0..m - 1 {
        du[i] = e[i];
    }
    let mut x = b.to_vec();
    for i in 0..m - 1 {
        let dl = e[i]; // subdiagonal entry (i+1, i); untouched by earlier steps
        if dl.abs() <= diag[i].abs() {
            let denom = if diag[i].abs() < 1e-300 {
                1e-300
            } else {
                diag[i]
            };
            let f = dl / denom;
            diag[i + 1] -= f * du[i];
            // du2[i] stays 0, du[i+1] unchanged
            x[i + 1] -= f * x[i];
        } else {
            // swap rows i and i+1, then eliminate
            let f = diag[i] / dl;
            let old_du_i = du[i];
            let old_d_i1 = diag[i + 1];
            let old_du_i1 = if i + 1 < m - 1 { du[i + 1] } else { 0.0 };
            diag[i] = dl;
            du[i] = old_d_i1;
            du2[i] = old_du_i1;
            diag[i + 1] = old_du_i - f * old_d_i1;
            if i + 1 < m - 1 {
                du[i + 1] = -f * old_du_i1;
            }
            x.swap(i, i + 1);
            x[i + 1] -= f * x[i];
        }
    }
    // back substitution
    let mut out = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = x[i];
        if i + 1 < m {
            s -= du[i] * out[i + 1];
        }
        if i + 2 < m {
            s -= du2[i] * out[i + 2];
        }
        let denom = if diag[i].abs() < 1e-300 {
            1e-300
        } else {
            diag[i]
        };
        out[i] = s / denom;
    }
    out
}

fn normalize(v: &mut [f64]) {
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn jacobi_on_known_2x2() {
        // [[2, 1], [1, 2]] -> {1, 3}
        let ev = symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2);
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_pauli_y() {
        let h = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let ev = hermitian_eigenvalues(&h, 2);
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tridiag_lowest_matches_jacobi() {
        let d = [1.0, -0.5, 2.0, 0.3, -1.2];
        let e = [0.7, 0.2, -0.4, 0.9];
        let m = 5;
        let mut dense = vec![0.0; m * m];
        for i in 0..m {
            dense[i * m + i] = d[i];
        }
        for i in 0..m - 1 {
            dense[i * m + i + 1] = e[i];
            dense[(i + 1) * m + i] = e[i];
        }
        let ev = symmetric_eigenvalues(&dense, m);
        let lo = tridiag_lowest_eigenvalue(&d, &e);
        assert_abs_diff_eq!(lo, ev[0], epsilon = 1e-10);
        // eigenvector residual
        let v = tridiag_eigenvector(&d, &e, lo);
        let mut res = 0.0f64;
        for i in 0..m {
            let mut s = d[i] * v[i] - lo * v[i];
            if i > 0 {
                s += e[i - 1] * v[i - 1];
            }
            if i + 1 < m {
                s += e[i] * v[i + 1];
            }
            res += s * s;
        }
        assert!(res.sqrt() < 1e-8, "residual {}", res.sqrt());
    }
}
