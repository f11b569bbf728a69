//! One- and two-qubit reduced density matrices by exact partial trace.
//!
//! The matrix and its Pauli-coefficient vector are kept together; the
//! coefficients are Tr(rho P) in group enumeration order, so downstream
//! entropy code is a single pass over them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{enumerate_pauli_group, pauli_expectation, PauliString};
use crate::smalleig::hermitian_eigenvalues;

/// Trace / hermiticity tolerance from the type contract.
pub const RDM_TOL: f64 = 1e-10;
/// Eigenvalues may dip this far below zero before the state is rejected.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// A validated 2x2 or 4x4 density matrix with its Pauli expansion.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    n_qubits: usize,
    /// Row-major 2^n x 2^n matrix.
    matrix: Vec<Complex64>,
    /// Tr(rho P) for every word, in enumeration order.
    pauli_coeffs: Vec<f64>,
    /// Chain sites this block came from (empty for synthetic states).
    source_sites: Vec<usize>,
}

impl ReducedDensityMatrix {
    /// Validate and wrap a dense matrix.
    pub fn from_matrix(
        matrix: Vec<Complex64>,
        n_qubits: usize,
        source_sites: Vec<usize>,
    ) -> Result<Self> {
        Self::from_matrix_with_tol(matrix, n_qubits, source_sites, POSITIVITY_TOL)
    }

    /// Same, with a caller-chosen positivity tolerance.
    pub fn from_matrix_with_tol(
        matrix: Vec<Complex64>,
        n_qubits: usize,
        source_sites: Vec<usize>,
        positivity_tol: f64,
    ) -> Result<Self> {
        if n_qubits != 1 && n_qubits != 2 {
            return Err(Error::invalid(format!(
                "reduced blocks are 1 or 2 qubits, got {n_qubits}"
            )));
        }
        let dim = 1usize << n_qubits;
        if matrix.len() != dim * dim {
            return Err(Error::invalid(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                dim * dim
            )));
        }
        let trace: Complex64 = (0..dim).map(|i| matrix[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > RDM_TOL || trace.im.abs() > RDM_TOL {
            return Err(Error::numerical(format!(
                "trace = {trace} is not 1 within {RDM_TOL:.0e}"
            )));
        }
        for i in 0..dim {
            for j in 0..dim {
                let delta = matrix[i * dim + j] - matrix[j * dim + i].conj();
                if delta.norm() > RDM_TOL {
                    return Err(Error::numerical(format!(
                        "hermiticity violated by {:.3e} at ({i},{j})",
                        delta.norm()
                    )));
                }
            }
        }
        let eigs = hermitian_eigenvalues(&matrix, dim);
        if eigs[0] < -positivity_tol {
            return Err(Error::numerical(format!(
                "negative eigenvalue {:.3e} below -{positivity_tol:.0e}",
                eigs[0]
            )));
        }
        let words = enumerate_pauli_group(n_qubits)?;
        let pauli_coeffs = words
            .iter()
            .map(|w| pauli_expectation(&matrix, n_qubits, w))
            .collect::<Result<Vec<f64>>>()?;
        Ok(ReducedDensityMatrix {
            n_qubits,
            matrix,
            pauli_coeffs,
            source_sites,
        })
    }

    /// Build rho = (1/2^n) sum_P c_P P from a coefficient vector.
    pub fn from_pauli_coeffs(
        coeffs: &[f64],
        n_qubits: usize,
        source_sites: Vec<usize>,
        positivity_tol: f64,
    ) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let words = enumerate_pauli_group(n_qubits)?;
        if coeffs.len() != words.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} words",
                coeffs.len(),
                words.len()
            )));
        }
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        let norm = 1.0 / dim as f64;
        for (c, w) in coeffs.iter().zip(&words) {
            if *c == 0.0 {
                continue;
            }
            let m = w.dense_matrix();
            for (slot, entry) in matrix.iter_mut().zip(&m) {
                *slot += norm * c * entry;
            }
        }
        Self::from_matrix_with_tol(matrix, n_qubits, source_sites, positivity_tol)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn pauli_coeffs(&self) -> &[f64] {
        &self.pauli_coeffs
    }

    pub fn source_sites(&self) -> &[usize] {
        &self.source_sites
    }

    /// Tr(rho^2), computed from the Pauli coefficients.
    pub fn purity(&self) -> f64 {
        self.pauli_coeffs.iter().map(|c| c * c).sum::<f64>() / self.dim() as f64
    }

    /// Coefficient for a specific word.
    pub fn coeff(&self, word: &PauliString) -> Result<f64> {
        if word.n() != self.n_qubits {
            return Err(Error::invalid("word length mismatch"));
        }
        Ok(self.pauli_coeffs[word.enumeration_index()])
    }

    /// Trace out the second qubit of a two-qubit block.
    pub fn trace_out_second(&self) -> Result<ReducedDensityMatrix> {
        if self.n_qubits != 2 {
            return Err(Error::invalid("trace_out_second requires a 2-qubit block"));
        }
        // local index = q0 + 2 q1 with q0 the first listed site
        let mut m = vec![Complex64::new(0.0, 0.0); 4];
        for q0 in 0..2 {
            for q0p in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for q1 in 0..2 {
                    acc += self.matrix[(q1 * 2 + q0) * 4 + (q1 * 2 + q0p)];
                }
                m[q0 * 2 + q0p] = acc;
            }
        }
        let site = self.source_sites.first().copied().into_iter().collect();
        ReducedDensityMatrix::from_matrix(m, 1, site)
    }
}

fn check_state(psi: &[f64], n_sites: usize) -> Result<()> {
    let dim = 1usize << n_sites;
    if psi.len() != dim {
        return Err(Error::invalid(format!(
            "state has dimension {}, expected 2^{n_sites}",
            psi.len()
        )));
    }
    let norm: f64 = psi.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::invalid(format!(
            "state is not normalized: |psi|^2 = {norm}"
        )));
    }
    Ok(())
}

/// Accumulate the partial-trace block of `psi` over `sites` into `acc`
/// (row-major, first listed site = most significant local bit).
fn accumulate_block(psi: &[f64], n_sites: usize, sites: &[usize], acc: &mut [Complex64]) {
    let k = sites.len();
    let ldim = 1usize << k;
    let env_bits = n_sites - k;
    // positions not in `sites`, ascending
    let mut env_pos = Vec::with_capacity(env_bits);
    for p in 0..n_sites {
        if !sites.contains(&p) {
            env_pos.push(p);
        }
    }
    let spread = |env: usize, local: usize| -> usize {
        let mut b = 0usize;
        for (i, &p) in env_pos.iter().enumerate() {
            b |= ((env >> i) & 1) << p;
        }
        for (i, &p) in sites.iter().enumerate() {
            // first listed site carries the least significant local bit,
            // matching the chain convention qubit j <-> bit j
            b |= ((local >> i) & 1) << p;
        }
        b
    };
    for env in 0..(1usize << env_bits) {
        let mut amps = [0.0f64; 4];
        for (a, slot) in amps.iter_mut().enumerate().take(ldim) {
            *slot = psi[spread(env, a)];
        }
        for a in 0..ldim {
            for b in 0..ldim {
                acc[a * ldim + b] += Complex64::new(amps[a] * amps[b], 0.0);
            }
        }
    }
}

/// Exact partial trace of a pure state onto one or two sites.
pub fn reduce_to_sites(
    psi: &[f64],
    n_sites: usize,
    sites: &[usize],
) -> Result<ReducedDensityMatrix> {
    check_state(psi, n_sites)?;
    if sites.is_empty() || sites.len() > 2 {
        return Err(Error::invalid("sites must list one or two positions"));
    }
    let mut seen = std::collections::HashSet::new();
    for &s in sites {
        if s >= n_sites {
            return Err(Error::invalid(format!(
                "site {s} out of range for chain of {n_sites}"
            )));
        }
        if !seen.insert(s) {
            return Err(Error::invalid(format!("duplicate site {s}")));
        }
    }
    let ldim = 1usize << sites.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); ldim * ldim];
    accumulate_block(psi, n_sites, sites, &mut acc);
    ReducedDensityMatrix::from_matrix(acc, sites.len(), sites.to_vec())
}

/// Translation-averaged two-site block: (1/N) sum_i rho(i, i + separation).
pub fn average_pair_rdm(
    psi: &[f64],
    n_sites: usize,
    separation: usize,
) -> Result<ReducedDensityMatrix> {
    check_state(psi, n_sites)?;
    if separation != 1 && separation != 2 {
        return Err(Error::invalid(format!(
            "separation must be 1 or 2, got {separation}"
        )));
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); 16];
    for i in 0..n_sites {
        let pair = [i, (i + separation) % n_sites];
        accumulate_block(psi, n_sites, &pair, &mut acc);
    }
    let w = 1.0 / n_sites as f64;
    acc.iter_mut().for_each(|z| *z *= w);
    ReducedDensityMatrix::from_matrix(acc, 2, vec![0, separation])
}

/// Translation-averaged one-site block.
pub fn average_site_rdm(psi: &[f64], n_sites: usize) -> Result<ReducedDensityMatrix> {
    check_state(psi, n_sites)?;
    let mut acc = vec![Complex64::new(0.0, 0.0); 4];
    for i in 0..n_sites {
        accumulate_block(psi, n_sites, &[i], &mut acc);
    }
    let w = 1.0 / n_sites as f64;
    acc.iter_mut().for_each(|z| *z *= w);
    ReducedDensityMatrix::from_matrix(acc, 1, vec![0])
}
