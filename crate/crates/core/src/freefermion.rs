//! Free-fermion pipeline for the transverse-field Ising chain and the
//! one-dimensional quantum compass model.
//!
//! Momentum grid -> 2x2 BdG block per mode -> momentum correlators
//! (occupation |v_k|^2, pairing u_k v_k) -> real-space G/F rows -> 4x4
//! sub-correlation matrix of a mode pair -> Majorana covariance -> Pauli
//! correlators by Wick's theorem -> one-/two-qubit RDM reconstruction.
//!
//! Two grids ("sectors") exist per model: integer momenta k = 2 pi m / N'
//! and half-integer momenta k = 2 pi (m + 1/2) / N'. They correspond to the
//! two fermion-parity boundary conditions; the physical ground state lives
//! in whichever has the lower energy, so the high-level entry points select
//! by explicit energy comparison. Real-space correlators from the
//! half-integer grid are antiperiodic in the site difference, so lookups go
//! through signed differences rather than reduction mod N'.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rdm::ReducedDensityMatrix;

/// Which momentum grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Integer,
    HalfInteger,
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sector::Integer => write!(f, "integer"),
            Sector::HalfInteger => write!(f, "half_integer"),
        }
    }
}

/// Model seen by the fermionic pipeline. Couplings are ratios: the TFIM has
/// J1 = 1, the compass chain Jz = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreeFermionModel {
    /// Transverse-field Ising chain at field ratio gamma.
    Tfim { gamma: f64 },
    /// Compass chain at coupling ratio jx (= Jx/Jz).
    Qcm { jx: f64 },
}

impl FreeFermionModel {
    /// Number of fermionic modes for a chain of n_sites spins.
    pub fn n_modes(&self, n_sites: usize) -> usize {
        match self {
            FreeFermionModel::Tfim { .. } => n_sites,
            FreeFermionModel::Qcm { .. } => n_sites / 2,
        }
    }

    fn validate_sites(&self, n_sites: usize) -> Result<()> {
        match self {
            FreeFermionModel::Tfim { .. } => {
                if n_sites < 2 || n_sites % 2 != 0 {
                    return Err(Error::invalid(format!(
                        "TFIM needs an even chain, got {n_sites}"
                    )));
                }
            }
            FreeFermionModel::Qcm { .. } => {
                if n_sites < 4 || n_sites % 4 != 0 {
                    return Err(Error::invalid(format!(
                        "compass chain needs n_sites divisible by 4, got {n_sites}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One momentum mode: minimum-branch eigenvector components and energy.
#[derive(Debug, Clone, Copy)]
pub struct BdGMode {
    pub k: f64,
    pub u: Complex64,
    pub v: Complex64,
    /// Minimum eigenvalue of the 2x2 block; <= 0 for every mode here.
    pub energy: f64,
    /// Set when the block vanishes and the eigenvector is a convention.
    pub degenerate: bool,
}

/// Real-space correlators G_ij = <c_i^dag c_j> and F_ij = <c_i c_j>, stored
/// as first rows of the (anti)circulant matrices. `g_row[r]` is G_{i, i-r}
/// = (1/N') sum_k e^{ikr} |v_k|^2; likewise for F with u_k v_k.
#[derive(Debug, Clone)]
pub struct CorrelationData {
    n_modes: usize,
    sector: Sector,
    g_row: Vec<Complex64>,
    f_row: Vec<Complex64>,
}

impl CorrelationData {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// G_ij via the signed difference i - j; negative differences use
    /// hermiticity G(-r) = conj G(r).
    pub fn g(&self, i: usize, j: usize) -> Complex64 {
        let r = i as isize - j as isize;
        if r >= 0 {
            self.g_row[r as usize]
        } else {
            self.g_row[(-r) as usize].conj()
        }
    }

    /// F_ij via the signed difference; antisymmetry F(-r) = -F(r).
    pub fn f(&self, i: usize, j: usize) -> Complex64 {
        let r = i as isize - j as isize;
        if r >= 0 {
            self.f_row[r as usize]
        } else {
            -self.f_row[(-r) as usize]
        }
    }
}

/// 4x4 real antisymmetric Majorana covariance of a mode pair, in per-site
/// interleaved ordering (x_i, p_i, x_j, p_j).
#[derive(Debug, Clone)]
pub struct MajoranaCovariance {
    pub gamma: [[f64; 4]; 4],
    pub site_pair: (usize, usize),
}

/// The non-vanishing pair correlators of a parity-even Gaussian state, in
/// spin language. All parity-odd words are identically zero.
#[derive(Debug, Clone, Copy)]
pub struct PairCorrelators {
    pub z1: f64,
    pub z2: f64,
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
    pub yx: f64,
    pub zz: f64,
}

/// Momentum grid of one sector.
///
/// Integer: k = 2 pi m / N', listed as 0, +a, -a, ..., pi for the compass
/// chain and ascending m for the TFIM. Half-integer: k = 2 pi (m + 1/2) / N'.
pub fn momentum_grid(model: &FreeFermionModel, n_sites: usize, sector: Sector) -> Result<Vec<f64>> {
    model.validate_sites(n_sites)?;
    let np = model.n_modes(n_sites);
    let a = 2.0 * std::f64::consts::PI / np as f64;
    let grid = match (model, sector) {
        (FreeFermionModel::Tfim { .. }, Sector::Integer) => {
            (0..np).map(|m| a * m as f64).collect()
        }
        (FreeFermionModel::Tfim { .. }, Sector::HalfInteger) => {
            (0..np).map(|m| a * (m as f64 + 0.5)).collect()
        }
        (FreeFermionModel::Qcm { .. }, Sector::Integer) => {
            let mut ks = vec![0.0];
            for j in 1..np / 2 {
                ks.push(a * j as f64);
                ks.push(-a * j as f64);
            }
            ks.push(std::f64::consts::PI);
            ks
        }
        (FreeFermionModel::Qcm { .. }, Sector::HalfInteger) => {
            let mut ks = Vec::with_capacity(np);
            for j in 0..np / 2 {
                let k = a * (j as f64 + 0.5);
                ks.push(k);
                ks.push(-k);
            }
            ks
        }
    };
    Ok(grid)
}

/// 2x2 Hermitian BdG block at momentum k.
///
/// TFIM: diagonal +-2(gamma - cos k), off-diagonal +-2i sin k.
/// Compass chain: diagonal +-2(jx - cos k), off-diagonal +-i sin k (the
/// quadratic fermionic form with Jz = 1; the gap then closes at jx = 1 and
/// k = 0, which carries the first-order transition).
pub fn bdg_block(model: &FreeFermionModel, k: f64) -> [[Complex64; 2]; 2] {
    let (a, b) = match model {
        FreeFermionModel::Tfim { gamma } => (
            2.0 * (gamma - k.cos()),
            Complex64::new(0.0, 2.0 * k.sin()),
        ),
        FreeFermionModel::Qcm { jx } => {
            (2.0 * (jx - k.cos()), Complex64::new(0.0, k.sin()))
        }
    };
    [
        [Complex64::new(a, 0.0), b],
        [-b, Complex64::new(-a, 0.0)],
    ]
}

/// Minimum-eigenvalue eigenvector of a traceless Hermitian block, with the
/// phase fixed so u is real and >= 0 (v real >= 0 when u vanishes).
pub fn bdg_ground_mode(block: &[[Complex64; 2]; 2], k: f64) -> Result<BdGMode> {
    let a = block[0][0];
    let d = block[1][1];
    let b = block[0][1];
    if a.im.abs() > 1e-12 || d.im.abs() > 1e-12 || (a.re + d.re).abs() > 1e-12 {
        return Err(Error::invalid("BdG block must be traceless Hermitian"));
    }
    if (block[1][0] - b.conj()).norm() > 1e-12 {
        return Err(Error::invalid("BdG block must be Hermitian"));
    }
    let a = a.re;
    let lambda = (a * a + b.norm_sqr()).sqrt();
    if lambda < 1e-14 {
        // vanishing block: flag and fall back to the empty-mode convention
        return Ok(BdGMode {
            k,
            u: Complex64::new(1.0, 0.0),
            v: Complex64::new(0.0, 0.0),
            energy: 0.0,
            degenerate: true,
        });
    }
    let (mut u, mut v) = if b.norm() < 1e-15 {
        if a > 0.0 {
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
        } else {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        }
    } else {
        // (-b, a + lambda) spans the minimum-eigenvalue direction
        let u0 = -b;
        let v0 = Complex64::new(a + lambda, 0.0);
        let n = (u0.norm_sqr() + v0.norm_sqr()).sqrt();
        (u0 / n, v0 / n)
    };
    // phase convention
    if u.norm() > 1e-15 {
        let phase = u.conj() / u.norm();
        u *= phase;
        v *= phase;
        u = Complex64::new(u.re.abs(), 0.0);
    } else if v.norm() > 1e-15 {
        let phase = v.conj() / v.norm();
        v *= phase;
        u = Complex64::new(0.0, 0.0);
        v = Complex64::new(v.re.abs(), 0.0);
    }
    Ok(BdGMode {
        k,
        u,
        v,
        energy: -lambda,
        degenerate: false,
    })
}

/// All modes of one sector.
pub fn sector_modes(
    model: &FreeFermionModel,
    n_sites: usize,
    sector: Sector,
) -> Result<Vec<BdGMode>> {
    momentum_grid(model, n_sites, sector)?
        .into_iter()
        .map(|k| bdg_ground_mode(&bdg_block(model, k), k))
        .collect()
}

/// Ground-state energy of one sector: half the sum of the negative BdG
/// branch energies (the Nambu constant cancels for both models here).
pub fn sector_energy(model: &FreeFermionModel, n_sites: usize, sector: Sector) -> Result<f64> {
    Ok(0.5 * sector_modes(model, n_sites, sector)?
        .iter()
        .map(|m| m.energy)
        .sum::<f64>())
}

/// Evaluate both sectors and return the lower-energy one. Away from the
/// transition the two energies agree to machine precision, so anything
/// within roundoff of a tie breaks toward the half-integer grid.
pub fn sector_select(model: &FreeFermionModel, n_sites: usize) -> Result<(Sector, f64, f64)> {
    let e_int = sector_energy(model, n_sites, Sector::Integer)?;
    let e_half = sector_energy(model, n_sites, Sector::HalfInteger)?;
    let tie = 1e-12 * (1.0 + e_int.abs().max(e_half.abs()));
    let sector = if e_half <= e_int + tie {
        Sector::HalfInteger
    } else {
        Sector::Integer
    };
    Ok((sector, e_int, e_half))
}

/// Fourier-transform the momentum correlators to real-space rows.
pub fn correlation_matrices(modes: &[BdGMode], n_modes: usize) -> Result<CorrelationData> {
    if modes.len() != n_modes {
        return Err(Error::invalid(format!(
            "{} modes for {} grid points",
            modes.len(),
            n_modes
        )));
    }
    let np = n_modes as f64;
    let mut g_row = vec![Complex64::new(0.0, 0.0); n_modes];
    let mut f_row = vec![Complex64::new(0.0, 0.0); n_modes];
    for (r, (g, f)) in g_row.iter_mut().zip(f_row.iter_mut()).enumerate() {
        let mut acc_g = Complex64::new(0.0, 0.0);
        let mut acc_f = Complex64::new(0.0, 0.0);
        for m in modes {
            let phase = Complex64::from_polar(1.0, m.k * r as f64);
            acc_g += phase * m.v.norm_sqr();
            acc_f += phase * m.u * m.v;
        }
        *g = acc_g / np;
        *f = acc_f / np;
    }
    // the grid decides whether rows close periodically or antiperiodically;
    // detect from e^{ikN'} of the first mode
    let closure = modes
        .first()
        .map(|m| (m.k * np).cos())
        .unwrap_or(1.0);
    let sector = if closure > 0.0 {
        Sector::Integer
    } else {
        Sector::HalfInteger
    };

    // invariants: G hermitian (g_row[0] real, diagonal in [0,1]),
    // F antisymmetric (f_row[0] = 0)
    if g_row[0].im.abs() > 1e-8 {
        return Err(Error::numerical(format!(
            "occupation has imaginary part {:.3e}",
            g_row[0].im
        )));
    }
    if g_row[0].re < -1e-8 || g_row[0].re > 1.0 + 1e-8 {
        return Err(Error::numerical(format!(
            "occupation {} outside [0, 1]",
            g_row[0].re
        )));
    }
    if f_row[0].norm() > 1e-8 {
        return Err(Error::numerical(format!(
            "F diagonal = {:.3e}, expected 0",
            f_row[0].norm()
        )));
    }
    Ok(CorrelationData {
        n_modes,
        sector,
        g_row,
        f_row,
    })
}

/// Build the 4x4 sub-correlation matrix of modes (i, j), rotate to the
/// Majorana basis, and return the antisymmetric covariance in interleaved
/// ordering.
pub fn majorana_covariance(
    corr: &CorrelationData,
    site_pair: (usize, usize),
) -> Result<MajoranaCovariance> {
    let (i, j) = site_pair;
    if i == j || i >= corr.n_modes() || j >= corr.n_modes() {
        return Err(Error::invalid(format!(
            "mode pair ({i}, {j}) invalid for {} modes",
            corr.n_modes()
        )));
    }
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let g2 = [[corr.g(i, i), corr.g(i, j)], [corr.g(j, i), corr.g(j, j)]];
    let f2 = [[corr.f(i, i), corr.f(i, j)], [corr.f(j, i), corr.f(j, j)]];

    // C = [[G, F^dag], [F, I - G^T]]
    let mut c = [[z; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            c[a][b] = g2[a][b];
            c[a][b + 2] = f2[b][a].conj();
            c[a + 2][b] = f2[a][b];
            c[a + 2][b + 2] = (if a == b { one } else { z }) - g2[b][a];
        }
    }
    // W = [[I, I], [-iI, iI]]
    let mi = Complex64::new(0.0, -1.0);
    let pi_ = Complex64::new(0.0, 1.0);
    let mut w = [[z; 4]; 4];
    for a in 0..2 {
        w[a][a] = one;
        w[a][a + 2] = one;
        w[a + 2][a] = mi;
        w[a + 2][a + 2] = pi_;
    }
    // M = W C W^dag
    let mut wc = [[z; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = z;
            for l in 0..4 {
                acc += w[a][l] * c[l][b];
            }
            wc[a][b] = acc;
        }
    }
    let mut m = [[z; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = z;
            for l in 0..4 {
                acc += wc[a][l] * w[b][l].conj();
            }
            m[a][b] = acc;
        }
    }
    // Gamma = (i/2)(M - M^T), then permute block ordering (x_i, x_j, p_i, p_j)
    // to interleaved (x_i, p_i, x_j, p_j)
    let half_i = Complex64::new(0.0, 0.5);
    let perm = [0usize, 2, 1, 3];
    let mut gamma = [[0.0f64; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let gab = half_i * (m[perm[a]][perm[b]] - m[perm[b]][perm[a]]);
            if gab.im.abs() > 1e-8 {
                return Err(Error::numerical(format!(
                    "Majorana covariance has imaginary residual {:.3e}",
                    gab.im
                )));
            }
            gamma[a][b] = gab.re;
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            if (gamma[a][b] + gamma[b][a]).abs() > 1e-10 {
                return Err(Error::numerical("covariance is not antisymmetric"));
            }
            if gamma[a][b].abs() > 1.0 + 1e-8 {
                return Err(Error::numerical(format!(
                    "covariance entry {:.6} outside [-1, 1]",
                    gamma[a][b]
                )));
            }
        }
    }
    Ok(MajoranaCovariance {
        gamma,
        site_pair,
    })
}

/// Read the spin-pair correlators off the covariance.
///
/// The index dictionary and the overall Wick sign are anchored to the
/// exact-diagonalization oracle: on a fully occupied pair Gamma_12 =
/// Gamma_34 = -1 and <ZZ> = <Z1><Z2> = +1.
pub fn pauli_correlators(cov: &MajoranaCovariance) -> PairCorrelators {
    let g = &cov.gamma;
    PairCorrelators {
        z1: g[0][1],
        z2: g[2][3],
        xx: g[1][2],
        yy: -g[0][3],
        xy: -g[1][3],
        yx: g[0][2],
        zz: g[0][1] * g[2][3] - g[0][2] * g[1][3] + g[0][3] * g[1][2],
    }
}

/// Assemble the RDM from the correlator set. One-qubit blocks use <Z> only;
/// <X> and <Y> vanish by fermion-parity symmetry.
pub fn reconstruct_rdm(corr: &PairCorrelators, n_qubits: usize) -> Result<ReducedDensityMatrix> {
    let coeffs: Vec<f64> = match n_qubits {
        1 => vec![1.0, 0.0, 0.0, corr.z1],
        2 => {
            // enumeration order II, IX, IY, IZ, XI, XX, XY, XZ, YI, YX, YY,
            // YZ, ZI, ZX, ZY, ZZ; first letter acts on mode i
            let mut c = vec![0.0; 16];
            c[0] = 1.0;
            c[3] = corr.z2; // IZ
            c[5] = corr.xx; // XX
            c[6] = corr.xy; // XY
            c[9] = corr.yx; // YX
            c[10] = corr.yy; // YY
            c[12] = corr.z1; // ZI
            c[15] = corr.zz; // ZZ
            c
        }
        _ => {
            return Err(Error::invalid(format!(
                "reconstruction supports 1 or 2 qubits, got {n_qubits}"
            )))
        }
    };
    ReducedDensityMatrix::from_pauli_coeffs(&coeffs, n_qubits, vec![], 1e-6).map_err(|e| match e {
        Error::Numerical(msg) => Error::Reconstruction(msg),
        other => other,
    })
}

/// Resolved sector choice for the high-level entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorChoice {
    /// Energy comparison between the two grids.
    Auto,
    Fixed(Sector),
}

/// One- and two-qubit RDMs of adjacent fermionic modes in the ground state.
pub fn ground_pair_rdms(
    model: &FreeFermionModel,
    n_sites: usize,
    choice: SectorChoice,
) -> Result<(ReducedDensityMatrix, ReducedDensityMatrix, Sector)> {
    let sector = match choice {
        SectorChoice::Fixed(s) => s,
        SectorChoice::Auto => sector_select(model, n_sites)?.0,
    };
    let modes = sector_modes(model, n_sites, sector)?;
    let corr = correlation_matrices(&modes, model.n_modes(n_sites))?;
    let cov = majorana_covariance(&corr, (0, 1))?;
    let pc = pauli_correlators(&cov);
    let rho1 = reconstruct_rdm(&pc, 1)?;
    let rho2 = reconstruct_rdm(&pc, 2)?;
    Ok((rho1, rho2, sector))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn tfim_grid_matches_stated_momenta() {
        let g = momentum_grid(&FreeFermionModel::Tfim { gamma: 1.0 }, 4, Sector::Integer).unwrap();
        let want = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        assert_eq!(g.len(), 4);
        for (a, b) in g.iter().zip(&want) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn qcm_grids_match_stated_momenta() {
        let m = FreeFermionModel::Qcm { jx: 1.0 };
        let gi = momentum_grid(&m, 8, Sector::Integer).unwrap();
        assert_eq!(gi.len(), 4);
        assert_abs_diff_eq!(gi[0], 0.0);
        assert_abs_diff_eq!(gi[1], PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gi[2], -PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gi[3], PI, epsilon = 1e-14);

        let gh = momentum_grid(&m, 8, Sector::HalfInteger).unwrap();
        let mut sorted: Vec<f64> = gh.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [-3.0 * PI / 4.0, -PI / 4.0, PI / 4.0, 3.0 * PI / 4.0];
        for (a, b) in sorted.iter().zip(&want) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(momentum_grid(&FreeFermionModel::Tfim { gamma: 1.0 }, 5, Sector::Integer).is_err());
        assert!(momentum_grid(&FreeFermionModel::Qcm { jx: 1.0 }, 6, Sector::Integer).is_err());
    }

    #[test]
    fn tfim_block_values() {
        let m = FreeFermionModel::Tfim { gamma: 2.0 };
        let b = bdg_block(&m, 0.0);
        assert_abs_diff_eq!(b[0][0].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b[1][1].re, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b[0][1].norm(), 0.0, epsilon = 1e-14);

        let m = FreeFermionModel::Tfim { gamma: 1.0 };
        let b = bdg_block(&m, PI / 2.0);
        assert_abs_diff_eq!(b[0][0].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[0][1].im, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[1][0].im, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[1][1].re, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn qcm_block_gap_closes_at_unit_ratio() {
        // diagonal 2(jx - cos k): zero at k = 0 only when jx = 1
        let b = bdg_block(&FreeFermionModel::Qcm { jx: 1.0 }, 0.0);
        assert_abs_diff_eq!(b[0][0].re, 0.0, epsilon = 1e-14);
        let b = bdg_block(&FreeFermionModel::Qcm { jx: 1.0 }, PI);
        assert_abs_diff_eq!(b[0][0].re, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn ground_mode_conventions() {
        // diag(2, -2): occupied
        let m = bdg_ground_mode(&bdg_block(&FreeFermionModel::Tfim { gamma: 2.0 }, 0.0), 0.0)
            .unwrap();
        assert_abs_diff_eq!(m.u.norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.v.norm_sqr(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.energy, -2.0, epsilon = 1e-14);

        // diag(-2, 2): empty
        let m = bdg_ground_mode(&bdg_block(&FreeFermionModel::Tfim { gamma: 0.0 }, 0.0), 0.0)
            .unwrap();
        assert_abs_diff_eq!(m.u.norm_sqr(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.v.norm(), 0.0, epsilon = 1e-14);

        // [[0, 2i], [-2i, 0]]: energy -2, half occupation, u real
        let m = bdg_ground_mode(
            &bdg_block(&FreeFermionModel::Tfim { gamma: 0.0 }, PI / 2.0),
            PI / 2.0,
        )
        .unwrap();
        assert_abs_diff_eq!(m.energy, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.v.norm_sqr(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m.u.im, 0.0, epsilon = 1e-14);
        assert!(m.u.re >= 0.0);

        // normalization invariant
        assert_abs_diff_eq!(m.u.norm_sqr() + m.v.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_site_fully_occupied_limit() {
        // TFIM N=2, gamma=2, integer grid: both modes occupied, G = I, F = 0
        let model = FreeFermionModel::Tfim { gamma: 2.0 };
        let modes = sector_modes(&model, 2, Sector::Integer).unwrap();
        let corr = correlation_matrices(&modes, 2).unwrap();
        assert_abs_diff_eq!(corr.g(0, 0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(corr.g(0, 1).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(corr.f(0, 1).norm(), 0.0, epsilon = 1e-12);

        // occupied modes: Gamma_12 = Gamma_34 = -1, <Z> = -1
        let cov = majorana_covariance(&corr, (0, 1)).unwrap();
        assert_abs_diff_eq!(cov.gamma[0][1], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cov.gamma[2][3], -1.0, epsilon = 1e-12);
        let pc = pauli_correlators(&cov);
        assert_abs_diff_eq!(pc.z1, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pc.zz, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_covariance() {
        // gamma = 0 at k = 0 gives an empty mode; a fictitious two-mode
        // vacuum has Gamma_12 = Gamma_34 = +1 and <ZZ> = +1
        let modes = vec![
            BdGMode {
                k: 0.0,
                u: Complex64::new(1.0, 0.0),
                v: Complex64::new(0.0, 0.0),
                energy: -1.0,
                degenerate: false,
            },
            BdGMode {
                k: PI,
                u: Complex64::new(1.0, 0.0),
                v: Complex64::new(0.0, 0.0),
                energy: -1.0,
                degenerate: false,
            },
        ];
        let corr = correlation_matrices(&modes, 2).unwrap();
        let cov = majorana_covariance(&corr, (0, 1)).unwrap();
        assert_abs_diff_eq!(cov.gamma[0][1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cov.gamma[2][3], 1.0, epsilon = 1e-12);
        let pc = pauli_correlators(&cov);
        assert_abs_diff_eq!(pc.z1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pc.zz, 1.0, epsilon = 1e-12);
        // product state: <ZZ> factorizes
        assert_abs_diff_eq!(pc.zz, pc.z1 * pc.z2, epsilon = 1e-12);
    }

    #[test]
    fn covariance_antisymmetry_generic_point() {
        let model = FreeFermionModel::Tfim { gamma: 1.3 };
        let modes = sector_modes(&model, 12, Sector::HalfInteger).unwrap();
        let corr = correlation_matrices(&modes, 12).unwrap();
        let cov = majorana_covariance(&corr, (0, 1)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_abs_diff_eq!(cov.gamma[a][b], -cov.gamma[b][a], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn correlator_dictionary_direct_readoff() {
        // Gamma with only the (2,3) entry (1-based) populated
        let mut gamma = [[0.0; 4]; 4];
        gamma[1][2] = 0.37;
        gamma[2][1] = -0.37;
        let cov = MajoranaCovariance {
            gamma,
            site_pair: (0, 1),
        };
        let pc = pauli_correlators(&cov);
        assert_abs_diff_eq!(pc.xx, 0.37, epsilon = 1e-15);
        assert_abs_diff_eq!(pc.yy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pc.xy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pc.yx, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn reconstruction_basic_states() {
        // identity only -> maximally mixed
        let pc = PairCorrelators {
            z1: 0.0,
            z2: 0.0,
            xx: 0.0,
            yy: 0.0,
            xy: 0.0,
            yx: 0.0,
            zz: 0.0,
        };
        let r = reconstruct_rdm(&pc, 2).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(r.matrix()[i * 4 + i].re, 0.25, epsilon = 1e-14);
        }

        // <Z1> = <Z2> = <ZZ> = 1 -> |up up>
        let pc = PairCorrelators {
            z1: 1.0,
            z2: 1.0,
            xx: 0.0,
            yy: 0.0,
            xy: 0.0,
            yx: 0.0,
            zz: 1.0,
        };
        let r = reconstruct_rdm(&pc, 2).unwrap();
        assert_abs_diff_eq!(r.matrix()[0].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn sector_selection_prefers_lower_energy() {
        // TFIM gamma > 0: the half-integer grid carries the ground state
        let model = FreeFermionModel::Tfim { gamma: 1.3 };
        let (sector, e_int, e_half) = sector_select(&model, 12).unwrap();
        assert_eq!(sector, Sector::HalfInteger);
        assert!(e_half <= e_int);

        // compass chain near the transition: half-integer as well
        let model = FreeFermionModel::Qcm { jx: 1.0 };
        let (sector, e_int, e_half) = sector_select(&model, 400).unwrap();
        assert_eq!(sector, Sector::HalfInteger);
        assert!(e_half < e_int);
    }

    #[test]
    fn qcm_selection_stable_under_doubling() {
        let model = FreeFermionModel::Qcm { jx: 1.5 };
        let (s400, _, _) = sector_select(&model, 400).unwrap();
        let (s800, _, _) = sector_select(&model, 800).unwrap();
        assert_eq!(s400, s800);
        // the selected sector is no worse than the other
        let e_sel = sector_energy(&model, 400, s400).unwrap();
        let other = match s400 {
            Sector::Integer => Sector::HalfInteger,
            Sector::HalfInteger => Sector::Integer,
        };
        let e_other = sector_energy(&model, 400, other).unwrap();
        assert!(e_sel <= e_other + 1e-12);
    }

    #[test]
    fn purity_bounds_on_reconstructed_blocks() {
        for &gamma in &[0.4, 1.0, 1.7] {
            let model = FreeFermionModel::Tfim { gamma };
            let (r1, r2, _) = ground_pair_rdms(&model, 64, SectorChoice::Auto).unwrap();
            assert!(r1.purity() >= 0.5 - 1e-10 && r1.purity() <= 1.0 + 1e-10);
            assert!(r2.purity() >= 0.25 - 1e-10 && r2.purity() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn thermodynamic_stability_away_from_criticality() {
        use crate::magic::magic_report;
        for &gamma in &[0.5, 1.5, 2.0] {
            let model = FreeFermionModel::Tfim { gamma };
            let (_, r2a, _) = ground_pair_rdms(&model, 400, SectorChoice::Auto).unwrap();
            let (_, r2b, _) = ground_pair_rdms(&model, 800, SectorChoice::Auto).unwrap();
            let ma = magic_report(&r2a).unwrap().m2_tilde;
            let mb = magic_report(&r2b).unwrap().m2_tilde;
            assert!(
                (ma - mb).abs() < 1e-8,
                "gamma = {gamma}: {ma} vs {mb}"
            );
        }
    }

    #[test]
    fn gamma_singular_values_bounded() {
        let model = FreeFermionModel::Qcm { jx: 0.9 };
        let modes = sector_modes(&model, 40, Sector::HalfInteger).unwrap();
        let corr = correlation_matrices(&modes, 20).unwrap();
        let cov = majorana_covariance(&corr, (0, 1)).unwrap();
        // singular values of antisymmetric Gamma = sqrt of eigenvalues of
        // Gamma^T Gamma
        let g = &cov.gamma;
        let mut gtg = [[0.0f64; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for l in 0..4 {
                    gtg[a][b] += g[l][a] * g[l][b];
                }
            }
        }
        let flat: Vec<f64> = gtg.iter().flatten().copied().collect();
        let eigs = crate::smalleig::symmetric_eigenvalues(&flat, 4);
        for e in eigs {
            assert!(e.sqrt() <= 1.0 + 1e-8);
        }
    }
}
