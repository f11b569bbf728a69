//! Matrix-free spin-chain Hamiltonians with periodic boundary conditions.
//!
//! All models used here (transverse ANNNI, transverse-field Ising, spin-form
//! compass chain) contain only X- and Z-type words, so the operator is real
//! in the computational basis and state vectors stay `f64`. Site 0 is the
//! least-significant bit of the basis index; spin-up is bit value 0.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliString};

/// Parameters of the transverse axial next-nearest-neighbor Ising chain:
/// H = -j1 * sum Z_i Z_{i+1} + j2 * sum Z_i Z_{i+2} - gamma * sum X_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TannniParams {
    pub n_sites: usize,
    pub j1: f64,
    pub j2: f64,
    pub gamma: f64,
}

impl TannniParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 4 || self.n_sites % 2 != 0 {
            return Err(Error::invalid(format!(
                "n_sites must be even and >= 4, got {}",
                self.n_sites
            )));
        }
        if self.n_sites > crate::pauli::MAX_SITES {
            return Err(Error::invalid(format!(
                "n_sites {} exceeds supported cap {}",
                self.n_sites,
                crate::pauli::MAX_SITES
            )));
        }
        if !(self.j1 > 0.0) {
            return Err(Error::invalid(format!("j1 must be > 0, got {}", self.j1)));
        }
        if !self.j2.is_finite() || !self.gamma.is_finite() {
            return Err(Error::invalid("couplings must be finite"));
        }
        Ok(())
    }
}

/// Parameters of the spin-form one-dimensional quantum compass chain:
/// H = -sum_i (jx * X_{2i} X_{2i+1} + jz * Z_{2i+1} Z_{2i+2}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcmParams {
    pub n_sites: usize,
    pub jx: f64,
    pub jz: f64,
}

impl QcmParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 4 || self.n_sites % 4 != 0 {
            return Err(Error::invalid(format!(
                "n_sites must be a positive multiple of 4, got {}",
                self.n_sites
            )));
        }
        if self.n_sites > crate::pauli::MAX_SITES {
            return Err(Error::invalid(format!(
                "n_sites {} exceeds supported cap {}",
                self.n_sites,
                crate::pauli::MAX_SITES
            )));
        }
        if !(self.jz > 0.0) {
            return Err(Error::invalid(format!("jz must be > 0, got {}", self.jz)));
        }
        if !self.jx.is_finite() {
            return Err(Error::invalid("jx must be finite"));
        }
        Ok(())
    }
}

/// One off-diagonal term in gather form: coefficient, flip mask, sign mask.
#[derive(Debug, Clone, Copy)]
struct FlipTerm {
    coeff: f64,
    x_mask: usize,
    sign_mask: u32,
}

/// A Hermitian sum of real-coefficient unsigned Pauli words, stored both as
/// the term list and in a form ready for bitwise matvec.
#[derive(Debug, Clone)]
pub struct HamiltonianOperator {
    n_sites: usize,
    terms: Vec<(f64, PauliString)>,
    diag: Vec<f64>,
    flips: Vec<FlipTerm>,
}

impl HamiltonianOperator {
    /// Assemble an operator from weighted words.
    ///
    /// Words with an odd number of Y letters would make the matrix complex
    /// in the computational basis and are rejected.
    pub fn from_terms(n_sites: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if n_sites == 0 || n_sites > crate::pauli::MAX_SITES {
            return Err(Error::invalid(format!(
                "n_sites {} outside 1..={}",
                n_sites,
                crate::pauli::MAX_SITES
            )));
        }
        let dim = 1usize << n_sites;
        for (c, w) in &terms {
            if w.n() != n_sites {
                return Err(Error::invalid(format!(
                    "term {w} has length {}, expected {n_sites}",
                    w.n()
                )));
            }
            if !c.is_finite() {
                return Err(Error::invalid("non-finite coefficient"));
            }
            if w.y_count() % 2 == 1 {
                return Err(Error::invalid(format!(
                    "term {w} has an odd number of Y letters; operator would not be real"
                )));
            }
        }
        let mut diag = vec![0.0f64; dim];
        let mut flips = Vec::new();
        for (c, w) in &terms {
            let y_sign = if w.y_count() % 4 == 2 { -1.0 } else { 1.0 };
            if w.x_mask() == 0 {
                let z = w.z_mask();
                if z == 0 {
                    // identity shift
                    diag.iter_mut().for_each(|d| *d += c);
                } else {
                    for (b, d) in diag.iter_mut().enumerate() {
                        let sign = if (b as u32 & z).count_ones() % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        *d += c * sign;
                    }
                }
            } else {
                flips.push(FlipTerm {
                    coeff: c * y_sign,
                    x_mask: w.x_mask() as usize,
                    sign_mask: w.z_mask(),
                });
            }
        }
        Ok(HamiltonianOperator {
            n_sites,
            terms,
            diag,
            flips,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dimension(&self) -> usize {
        1usize << self.n_sites
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// True when every term commutes with the global spin flip prod_i X_i,
    /// i.e. has even Z+Y weight.
    pub fn commutes_with_global_flip(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, w)| w.z_mask().count_ones() % 2 == 0)
    }

    /// out = H v, gather form, parallel over basis indices.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let dim = self.dimension();
        if v.len() != dim || out.len() != dim {
            return Err(Error::invalid(format!(
                "state dimension {} does not match 2^{} = {}",
                v.len(),
                self.n_sites,
                dim
            )));
        }
        let diag = &self.diag;
        let flips = &self.flips;
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(chunk_idx, chunk)| {
                let base = chunk_idx * CHUNK;
                for (off, slot) in chunk.iter_mut().enumerate() {
                    let b = base + off;
                    let mut acc = diag[b] * v[b];
                    for t in flips {
                        let s = b ^ t.x_mask;
                        let val = t.coeff * v[s];
                        // short-circuit skips the popcount for pure-X terms
                        if t.sign_mask == 0 || (s as u32 & t.sign_mask).count_ones() % 2 == 0 {
                            acc += val;
                        } else {
                            acc -= val;
                        }
                    }
                    *slot = acc;
                }
            });
        Ok(())
    }

    /// Allocating wrapper around [`apply_into`](Self::apply_into).
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dimension()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// <v|H|v> for a real vector.
    pub fn expectation(&self, v: &[f64]) -> Result<f64> {
        let hv = self.apply(v)?;
        Ok(dot(v, &hv))
    }
}

/// Fixed chunk size keeps parallel reductions bit-for-bit reproducible
/// regardless of thread count.
pub(crate) const CHUNK: usize = 4096;

/// Deterministic chunked dot product.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum::<f64>())
        .collect();
    partials.iter().sum()
}

/// H_TANNNI, Eq-for-eq: N nearest-neighbor ZZ terms with coefficient -j1,
/// N next-nearest ZZ with +j2, N single-site X with -gamma. Indices wrap
/// modulo N.
pub fn build_tannni(params: &TannniParams) -> Result<HamiltonianOperator> {
    params.validate()?;
    let n = params.n_sites;
    let mut terms = Vec::with_capacity(3 * n);
    for i in 0..n {
        terms.push((
            -params.j1,
            PauliString::two_site(n, (i, PauliLetter::Z), ((i + 1) % n, PauliLetter::Z))?,
        ));
    }
    for i in 0..n {
        terms.push((
            params.j2,
            PauliString::two_site(n, (i, PauliLetter::Z), ((i + 2) % n, PauliLetter::Z))?,
        ));
    }
    for i in 0..n {
        terms.push((-params.gamma, PauliString::single(n, i, PauliLetter::X)?));
    }
    HamiltonianOperator::from_terms(n, terms)
}

/// Transverse-field Ising chain: the j2 = 0 special case.
pub fn build_tfim(n_sites: usize, j1: f64, gamma: f64) -> Result<HamiltonianOperator> {
    build_tannni(&TannniParams {
        n_sites,
        j1,
        j2: 0.0,
        gamma,
    })
}

/// Spin-form compass chain: N/2 XX terms on odd bonds (-jx) and N/2 ZZ terms
/// on even bonds (-jz), wrapped periodically.
pub fn build_qcm_spin(params: &QcmParams) -> Result<HamiltonianOperator> {
    params.validate()?;
    let n = params.n_sites;
    let mut terms = Vec::with_capacity(n);
    for i in 0..n / 2 {
        terms.push((
            -params.jx,
            PauliString::two_site(n, (2 * i, PauliLetter::X), (2 * i + 1, PauliLetter::X))?,
        ));
    }
    for i in 0..n / 2 {
        terms.push((
            -params.jz,
            PauliString::two_site(
                n,
                (2 * i + 1, PauliLetter::Z),
                ((2 * i + 2) % n, PauliLetter::Z),
            )?,
        ));
    }
    HamiltonianOperator::from_terms(n, terms)
}
