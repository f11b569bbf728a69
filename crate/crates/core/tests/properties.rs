//! Property tests for the algebraic invariants.

mod common;

use common::{random_density_matrix, TestRng};
use proptest::prelude::*;
use srechain::magic::magic_report;
use srechain::pauli::enumerate_pauli_group;
use srechain::rdm::{average_pair_rdm, reduce_to_sites, ReducedDensityMatrix};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Parseval: (1/2^n) sum_P Tr(rho P)^2 = Tr(rho^2) on random states.
    #[test]
    fn pauli_parseval_identity(seed in any::<u64>(), n in 1usize..3) {
        let mut rng = TestRng(seed);
        let rho = random_density_matrix(n, &mut rng);
        let r = ReducedDensityMatrix::from_matrix(rho.clone(), n, vec![]).unwrap();
        let dim = 1usize << n;
        let sum2: f64 = r.pauli_coeffs().iter().map(|c| c * c).sum();
        let mut tr2 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                tr2 += (rho[i * dim + j] * rho[j * dim + i]).re;
            }
        }
        prop_assert!((sum2 / dim as f64 - tr2).abs() < 1e-10);
    }

    /// The two algebraic routes to the purity-corrected entropy coincide.
    #[test]
    fn m2_tilde_two_route_equality(seed in any::<u64>(), n in 1usize..3) {
        let mut rng = TestRng(seed);
        let rho = random_density_matrix(n, &mut rng);
        let r = ReducedDensityMatrix::from_matrix(rho, n, vec![]).unwrap();
        let rep = magic_report(&r).unwrap();
        let dim = (1usize << n) as f64;
        let sum4: f64 = r.pauli_coeffs().iter().map(|c| c.powi(4)).sum();
        let direct = -(sum4 / (dim * rep.purity)).log2();
        prop_assert!((rep.m2_tilde - direct).abs() < 1e-12);
    }

    /// Entropies are invariant under relabeling the enumeration order.
    #[test]
    fn enumeration_order_independence(seed in any::<u64>()) {
        let mut rng = TestRng(seed);
        let rho = random_density_matrix(2, &mut rng);
        let r = ReducedDensityMatrix::from_matrix(rho, 2, vec![]).unwrap();
        let rep = magic_report(&r).unwrap();
        // recompute the sums over a shuffled word order
        let mut words = enumerate_pauli_group(2).unwrap();
        words.reverse();
        let mut sum4 = 0.0;
        let mut sum2 = 0.0;
        for w in &words {
            let c = r.coeff(w).unwrap();
            sum2 += c * c;
            sum4 += c.powi(4);
        }
        let m2 = -(sum4 / 4.0).log2();
        let s2 = -(sum2 / 4.0).log2();
        prop_assert!((rep.m2 - m2).abs() < 1e-12);
        prop_assert!((rep.s2 - s2).abs() < 1e-12);
    }

    /// Partial-trace consistency on random real pure states.
    #[test]
    fn pair_block_marginals_match(seed in any::<u64>()) {
        let n = 5usize;
        let dim = 1usize << n;
        let mut rng = TestRng(seed);
        let mut psi: Vec<f64> = (0..dim).map(|_| rng.uniform()).collect();
        let norm: f64 = psi.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        psi.iter_mut().for_each(|a| *a /= norm);

        let pair = reduce_to_sites(&psi, n, &[1, 2]).unwrap();
        let single = reduce_to_sites(&psi, n, &[1]).unwrap();
        let via_pair = pair.trace_out_second().unwrap();
        for k in 0..4 {
            prop_assert!((via_pair.matrix()[k] - single.matrix()[k]).norm() < 1e-10);
        }

        let avg = average_pair_rdm(&psi, n, 1).unwrap();
        let p = avg.purity();
        prop_assert!(p >= 0.25 - 1e-10 && p <= 1.0 + 1e-10);
    }
}
