//! Cross-validation of the two ground-state pipelines.
//!
//! The exact-diagonalization route (matrix-free Hamiltonian, Lanczos,
//! partial trace) and the free-fermion route (BdG blocks, correlation
//! matrices, Majorana covariance, Wick reconstruction) are algebraically
//! independent; their agreement on the transverse-field Ising chain pins
//! every sign convention in the fermionic pipeline.

mod common;

use common::{dense_hamiltonian, jacobi_eigenvalues, kron2};
use num_complex::Complex64;
use srechain::eigensolver::{lanczos_ground_state, LanczosOptions};
use srechain::freefermion::{
    ground_pair_rdms, sector_energy, FreeFermionModel, Sector, SectorChoice,
};
use srechain::hamiltonian::{build_qcm_spin, build_tannni, QcmParams, TannniParams};
use srechain::magic::magic_report;
use srechain::rdm::{average_pair_rdm, average_site_rdm};

fn tfim_ground(n: usize, gamma: f64) -> Vec<f64> {
    let h = build_tannni(&TannniParams {
        n_sites: n,
        j1: 1.0,
        j2: 0.0,
        gamma,
    })
    .unwrap();
    lanczos_ground_state(&h, &LanczosOptions::default())
        .unwrap()
        .vector
}

#[test]
fn master_oracle_m2tilde_agreement() {
    // ED and free fermions must agree within 1e-3 everywhere and 1e-6 in
    // the strongly gapped regime; the energy-selected sector tracks the
    // physical ground state, so the observed agreement is near machine
    // precision.
    for &n in &[8usize, 10, 12] {
        for &gamma in &[0.5, 1.0, 1.5, 2.0] {
            let psi = tfim_ground(n, gamma);
            let ed1 = magic_report(&average_site_rdm(&psi, n).unwrap()).unwrap();
            let ed2 = magic_report(&average_pair_rdm(&psi, n, 1).unwrap()).unwrap();

            let model = FreeFermionModel::Tfim { gamma };
            let (ff1, ff2, sector) = ground_pair_rdms(&model, n, SectorChoice::Auto).unwrap();
            assert_eq!(sector, Sector::HalfInteger);
            let f1 = magic_report(&ff1).unwrap();
            let f2 = magic_report(&ff2).unwrap();

            let d1 = (ed1.m2_tilde - f1.m2_tilde).abs();
            let d2 = (ed2.m2_tilde - f2.m2_tilde).abs();
            let tol = if gamma == 2.0 { 1e-6 } else { 1e-3 };
            assert!(d1 <= tol, "N={n} gamma={gamma}: one-site mismatch {d1:.3e}");
            assert!(d2 <= tol, "N={n} gamma={gamma}: two-site mismatch {d2:.3e}");
        }
    }
}

#[test]
fn entrywise_rdm_match_in_the_fermionic_frame() {
    // The fermionic pipeline reconstructs the pair state in the
    // Jordan-Wigner frame; one fixed product Clifford maps the spin RDM
    // onto it at every coupling.
    let s = 1.0 / 2.0f64.sqrt();
    let v1 = [
        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
    ];
    let v2 = [
        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(-s, 0.0), Complex64::new(-s, 0.0)],
    ];
    let u = kron2(&v1, &v2);
    let n = 12;
    for &(gamma, tol) in &[(0.5, 1e-9), (1.0, 1e-9), (2.0, 1e-6)] {
        let psi = tfim_ground(n, gamma);
        let ed2 = average_pair_rdm(&psi, n, 1).unwrap();
        let rotated = common::conjugate(ed2.matrix(), &u, 4);
        let model = FreeFermionModel::Tfim { gamma };
        let (_, ff2, _) = ground_pair_rdms(&model, n, SectorChoice::Auto).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in rotated.iter().zip(ff2.matrix()) {
            worst = worst.max((a - b).norm());
        }
        assert!(
            worst <= tol,
            "gamma={gamma}: entrywise mismatch {worst:.3e}"
        );
    }
}

#[test]
fn selected_sector_energy_equals_ed_ground_energy() {
    for &(n, gamma) in &[(8usize, 0.7), (12, 0.7), (12, 1.6)] {
        let h = build_tannni(&TannniParams {
            n_sites: n,
            j1: 1.0,
            j2: 0.0,
            gamma,
        })
        .unwrap();
        let gs = lanczos_ground_state(&h, &LanczosOptions::default()).unwrap();
        let model = FreeFermionModel::Tfim { gamma };
        let e_half = sector_energy(&model, n, Sector::HalfInteger).unwrap();
        assert!(
            (gs.energy - e_half).abs() < 1e-8,
            "N={n} gamma={gamma}: ED {} vs BdG {}",
            gs.energy,
            e_half
        );
    }
}

#[test]
fn qcm_spin_ground_energy_matches_dense_oracle() {
    let h = build_qcm_spin(&QcmParams {
        n_sites: 8,
        jx: 1.0,
        jz: 1.0,
    })
    .unwrap();
    let dense = dense_hamiltonian(&h);
    let ev = jacobi_eigenvalues(&dense, h.dimension());
    let gs = lanczos_ground_state(&h, &LanczosOptions::default()).unwrap();
    assert!(
        (gs.energy - ev[0]).abs() < 1e-9,
        "lanczos {} vs dense {}",
        gs.energy,
        ev[0]
    );
    // x <-> z duality: swapping the couplings leaves the spectrum invariant
    let swapped = build_qcm_spin(&QcmParams {
        n_sites: 8,
        jx: 0.4,
        jz: 1.0,
    })
    .unwrap();
    let gs_a = lanczos_ground_state(&swapped, &LanczosOptions::default()).unwrap();
    let scaled = build_qcm_spin(&QcmParams {
        n_sites: 8,
        jx: 2.5,
        jz: 1.0,
    })
    .unwrap();
    let gs_b = lanczos_ground_state(&scaled, &LanczosOptions::default()).unwrap();
    // H(jx, 1) and H(1, jx) = jx * H(1/jx, 1) share spectra up to scale
    assert!(
        (gs_b.energy - 2.5 * gs_a.energy / 1.0).abs() < 1e-8 * 2.5_f64,
        "duality: {} vs {}",
        gs_b.energy,
        2.5 * gs_a.energy
    );
}

#[test]
fn tannni_ed_matches_dense_oracle_at_generic_couplings() {
    let h = build_tannni(&TannniParams {
        n_sites: 8,
        j1: 1.0,
        j2: 0.6,
        gamma: 0.35,
    })
    .unwrap();
    let dense = dense_hamiltonian(&h);
    let ev = jacobi_eigenvalues(&dense, h.dimension());
    let gs = lanczos_ground_state(&h, &LanczosOptions::default()).unwrap();
    assert!((gs.energy - ev[0]).abs() < 1e-9);
}
