//! Shared helpers for the integration suites. The dense eigensolver here is
//! deliberately independent of the library internals: it is the oracle the
//! Lanczos path is checked against.

use num_complex::Complex64;
use srechain::hamiltonian::HamiltonianOperator;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi, ascending.
/// Oracle-grade: simple, slow, obviously correct.
pub fn jacobi_eigenvalues(a: &[f64], dim: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _ in 0..200 {
        let mut off = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    off += m[i * dim + j] * m[i * dim + j];
                }
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = m[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * dim + q] - m[p * dim + p]) / (2.0 * apq);
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
    }
    let mut ev: Vec<f64> = (0..dim).map(|i| m[i * dim + i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Materialize the dense matrix of a term-list Hamiltonian.
pub fn dense_hamiltonian(h: &HamiltonianOperator) -> Vec<f64> {
    let dim = h.dimension();
    let mut dense = vec![0.0f64; dim * dim];
    for (c, w) in h.terms() {
        for s in 0..dim {
            let (t, phase) = w.apply_basis(s);
            dense[t * dim + s] += c * phase.re;
        }
    }
    dense
}

/// Conjugate a dense density matrix by a unitary: U rho U^dag.
pub fn conjugate(rho: &[Complex64], u: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut ur = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += u[i * dim + k] * rho[k * dim + j];
            }
            ur[i * dim + j] = acc;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += ur[i * dim + k] * u[j * dim + k].conj();
            }
            out[i * dim + j] = acc;
        }
    }
    out
}

/// Two-qubit product operator in the crate convention (qubit 0 = bit 0):
/// entry (r0 + 2 r1, c0 + 2 c1) = a[r0][c0] * b[r1][c1].
pub fn kron2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); 16];
    for r0 in 0..2 {
        for r1 in 0..2 {
            for c0 in 0..2 {
                for c1 in 0..2 {
                    u[(r0 + 2 * r1) * 4 + (c0 + 2 * c1)] = a[r0][c0] * b[r1][c1];
                }
            }
        }
    }
    u
}

/// SplitMix64 for deterministic test data without extra dependencies.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

/// Random density matrix rho = A A^dag / Tr on n qubits.
pub fn random_density_matrix(n: usize, rng: &mut TestRng) -> Vec<Complex64> {
    let dim = 1usize << n;
    let a: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.uniform(), rng.uniform()))
        .collect();
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += a[i * dim + k] * a[j * dim + k].conj();
            }
            rho[i * dim + j] = acc;
        }
    }
    let tr: f64 = (0..dim).map(|i| rho[i * dim + i].re).sum();
    rho.iter_mut().for_each(|z| *z /= tr);
    rho
}

/// The 24 single-qubit Clifford unitaries from the {H, S} closure, with a
/// canonical global phase.
pub fn one_qubit_cliffords() -> Vec<[[Complex64; 2]; 2]> {
    let h = {
        let s = 1.0 / 2.0f64.sqrt();
        [
            [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        ]
    };
    let s_gate = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
    ];
    let mul = |a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]| {
        let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    };
    let canon = |u: &[[Complex64; 2]; 2]| {
        // divide out the phase of the first entry with modulus > 1/2
        let flat = [u[0][0], u[0][1], u[1][0], u[1][1]];
        let z = flat.iter().find(|z| z.norm() > 0.5).copied().unwrap();
        let ph = z.conj() / z.norm();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        let mut key = [0i64; 8];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = u[i][j] * ph;
                key[4 * i + 2 * j] = (out[i][j].re * 1e6).round() as i64;
                key[4 * i + 2 * j + 1] = (out[i][j].im * 1e6).round() as i64;
            }
        }
        (out, key)
    };
    let mut seen = std::collections::HashSet::new();
    let mut group = Vec::new();
    let mut frontier = vec![[
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]];
    let (c0, k0) = canon(&frontier[0]);
    seen.insert(k0);
    group.push(c0);
    while let Some(u) = frontier.pop() {
        for g in [&h, &s_gate] {
            let v = mul(g, &u);
            let (cv, key) = canon(&v);
            if seen.insert(key) {
                group.push(cv);
                frontier.push(v);
            }
        }
    }
    assert_eq!(group.len(), 24, "single-qubit Clifford group size");
    group
}
