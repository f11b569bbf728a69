//! Reference stabilizer states: the fixed points of the stabilizer Rényi
//! entropy. Used by the self-test command and the validation suites.

use crate::error::{Error, Result};
use crate::pauli::{enumerate_pauli_group, PauliString};
use crate::rdm::ReducedDensityMatrix;

/// The 6 single-qubit pure stabilizer states: eigenstates of +-X, +-Y, +-Z.
pub fn one_qubit_stabilizer_states() -> Result<Vec<ReducedDensityMatrix>> {
    let mut out = Vec::with_capacity(6);
    for axis in 1..4 {
        for sign in [1.0, -1.0] {
            let mut c = [0.0; 4];
            c[0] = 1.0;
            c[axis] = sign;
            out.push(ReducedDensityMatrix::from_pauli_coeffs(&c, 1, vec![], 1e-10)?);
        }
    }
    Ok(out)
}

/// The 60 two-qubit pure stabilizer states, enumerated as rank-one
/// projectors (1/4)(I + s1 P1 + s2 P2 + s1 s2 sigma P1P2) over commuting
/// independent word pairs, deduplicated by their integer coefficient
/// vectors.
pub fn two_qubit_stabilizer_states() -> Result<Vec<ReducedDensityMatrix>> {
    let words = enumerate_pauli_group(2)?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for a in 1..16 {
        for b in (a + 1)..16 {
            let p1: &PauliString = &words[a];
            let p2 = &words[b];
            if !p1.commutes_with(p2) {
                continue;
            }
            let (w3, phase) = p1.product(p2)?;
            if w3.is_identity() {
                continue;
            }
            if phase.im.abs() > 1e-12 {
                return Err(Error::numerical(
                    "commuting word product must have a real sign",
                ));
            }
            let sigma = phase.re;
            for s1 in [1.0f64, -1.0] {
                for s2 in [1.0f64, -1.0] {
                    let mut c = vec![0.0f64; 16];
                    c[0] = 1.0;
                    c[p1.enumeration_index()] = s1;
                    c[p2.enumeration_index()] = s2;
                    c[w3.enumeration_index()] = s1 * s2 * sigma;
                    let key: Vec<i8> = c.iter().map(|x| *x as i8).collect();
                    if seen.insert(key) {
                        out.push(ReducedDensityMatrix::from_pauli_coeffs(
                            &c,
                            2,
                            vec![],
                            1e-10,
                        )?);
                    }
                }
            }
        }
    }
    Ok(out)
}
