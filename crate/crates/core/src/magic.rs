//! Stabilizer Rényi entropy of reduced density matrices.
//!
//! M2 = -log2( (1/2^n) sum_P Tr(rho P)^4 ) measures the non-flatness of the
//! Pauli spectrum; subtracting the second Rényi entropy S2 = -log2 Tr(rho^2)
//! compares against states of equal purity. Both come from one pass over the
//! stored Pauli coefficients, which makes m2_tilde = m2 - s2 exact by
//! construction.

use crate::error::{Error, Result};
use crate::rdm::ReducedDensityMatrix;

/// m2 may dip this far below zero from roundoff before it is an error.
pub const NEGATIVE_M2_TOL: f64 = 1e-8;

/// All second-order entropy quantities of one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagicReport {
    pub m2: f64,
    pub s2: f64,
    pub m2_tilde: f64,
    pub purity: f64,
}

/// Full report from a single traversal of the Pauli coefficients.
pub fn magic_report(rho: &ReducedDensityMatrix) -> Result<MagicReport> {
    let n = rho.n_qubits();
    let dim = (1usize << n) as f64;
    let mut sum2 = 0.0;
    let mut sum4 = 0.0;
    for &c in rho.pauli_coeffs() {
        let c2 = c * c;
        sum2 += c2;
        sum4 += c2 * c2;
    }
    let purity = sum2 / dim;
    if !(purity > 0.0) || purity > 1.0 + 1e-10 {
        return Err(Error::numerical(format!(
            "purity {purity} outside (0, 1]; corrupted input"
        )));
    }
    let arg = sum4 / dim;
    if !(arg > 0.0) {
        return Err(Error::numerical(format!(
            "fourth-moment sum {arg} is not positive; corrupted input"
        )));
    }
    let m2 = -arg.log2();
    if m2 < -NEGATIVE_M2_TOL {
        return Err(Error::numerical(format!(
            "m2 = {m2:.3e} below -{NEGATIVE_M2_TOL:.0e}; upstream state is corrupted"
        )));
    }
    let s2 = -purity.log2();
    Ok(MagicReport {
        m2,
        s2,
        m2_tilde: m2 - s2,
        purity,
    })
}

/// Stabilizer Rényi entropy alone.
pub fn m2(rho: &ReducedDensityMatrix) -> Result<f64> {
    Ok(magic_report(rho)?.m2)
}

/// Second-order Rényi entropy alone.
pub fn renyi2(rho: &ReducedDensityMatrix) -> Result<f64> {
    Ok(magic_report(rho)?.s2)
}

/// Purity-corrected stabilizer Rényi entropy with the full report.
pub fn m2_tilde(rho: &ReducedDensityMatrix) -> Result<MagicReport> {
    magic_report(rho)
}
