//! Built-in invariant suite: stabilizer zeros, log-base canary, Parseval,
//! the ED vs free-fermion cross check, and synthetic scaling recovery.

use num_complex::Complex64;
use srechain::criticality::{
    sweep, Engine, GridSpec, Measure, ObservableSpec, SectorRequest, Sites, SweepModel, SweepSpec,
};
use srechain::magic::magic_report;
use srechain::rdm::ReducedDensityMatrix;
use srechain::stabilizers;

struct Check {
    name: &'static str,
    outcome: Result<String, String>,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Check {
    Check {
        name,
        outcome: f(),
    }
}

/// SplitMix64; good enough for test matrices and fully deterministic.
struct Rng(u64);

impl Rng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

fn random_density_matrix(n: usize, rng: &mut Rng) -> ReducedDensityMatrix {
    let dim = 1usize << n;
    // rho = A A^dag / tr
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
    ReducedDensityMatrix::from_matrix(rho, n, vec![]).expect("random state is valid")
}

fn stabilizer_zero() -> Result<String, String> {
    let mut worst = 0.0f64;
    let one = stabilizers::one_qubit_stabilizer_states().map_err(|e| e.to_string())?;
    let two = stabilizers::two_qubit_stabilizer_states().map_err(|e| e.to_string())?;
    if one.len() != 6 || two.len() != 60 {
        return Err(format!("state counts {} / {}, want 6 / 60", one.len(), two.len()));
    }
    for s in one.iter().chain(two.iter()) {
        let m2 = magic_report(s).map_err(|e| e.to_string())?.m2;
        worst = worst.max(m2.abs());
    }
    if worst < 1e-10 {
        Ok(format!("66 states, max |M2| = {worst:.2e}"))
    } else {
        Err(format!("max |M2| = {worst:.2e} exceeds 1e-10"))
    }
}

fn maximally_mixed() -> Result<String, String> {
    let r = ReducedDensityMatrix::from_pauli_coeffs(&[1.0, 0.0, 0.0, 0.0], 1, vec![], 1e-10)
        .map_err(|e| e.to_string())?;
    let rep = magic_report(&r).map_err(|e| e.to_string())?;
    if (rep.m2 - 1.0).abs() < 1e-12 && rep.m2_tilde.abs() < 1e-12 {
        Ok(format!("M2 = {:.12}, M2~ = {:.2e}", rep.m2, rep.m2_tilde))
    } else {
        Err(format!(
            "M2 = {} (want 1), M2~ = {} (want 0); check the log base",
            rep.m2, rep.m2_tilde
        ))
    }
}

fn parseval() -> Result<String, String> {
    let mut rng = Rng(0x5eed);
    let mut worst = 0.0f64;
    for n in [1usize, 2] {
        for _ in 0..100 {
            let r = random_density_matrix(n, &mut rng);
            let sum2: f64 = r.pauli_coeffs().iter().map(|c| c * c).sum();
            let dim = 1usize << n;
            let mut tr2 = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    tr2 += r.matrix()[i * dim + j] * r.matrix()[j * dim + i];
                }
            }
            worst = worst.max((sum2 / dim as f64 - tr2.re).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("200 matrices, max deviation {worst:.2e}"))
    } else {
        Err(format!("Parseval deviation {worst:.2e} exceeds 1e-10"))
    }
}

fn ed_freefermion_oracle() -> Result<String, String> {
    let obs = ObservableSpec {
        measure: Measure::M2Tilde,
        sites: Sites::Two,
    };
    let grid = GridSpec::new(0.5, 2.0, 10).map_err(|e| e.to_string())?;
    let mk = |engine| SweepSpec {
        engine,
        ..SweepSpec::new(SweepModel::Tfim { j1: 1.0 }, 8)
    };
    let ed = sweep(&mk(Engine::Ed), &grid, obs).map_err(|e| e.to_string())?;
    let ff = sweep(
        &SweepSpec {
            sector: SectorRequest::Auto,
            ..mk(Engine::FreeFermion)
        },
        &grid,
        obs,
    )
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut at_2 = 0.0f64;
    for ((x, a), (_, b)) in ed.points().zip(ff.points()) {
        let d = (a - b).abs();
        worst = worst.max(d);
        if (x - 2.0).abs() < 1e-12 {
            at_2 = d;
        }
    }
    if worst < 1e-3 && at_2 < 1e-6 {
        Ok(format!("max |dM2~| = {worst:.2e}, at gamma=2: {at_2:.2e}"))
    } else {
        Err(format!(
            "ED vs free-fermion mismatch {worst:.2e} (at gamma=2: {at_2:.2e}); check Wick signs"
        ))
    }
}

fn synthetic_fss() -> Result<String, String> {
    let points: Vec<(usize, f64)> = [8usize, 10, 12, 14, 16]
        .iter()
        .map(|&n| (n, 0.3 + 1.7 * (n as f64).powf(-1.2)))
        .collect();
    let fit = srechain::criticality::fss_fit(&points, None).map_err(|e| e.to_string())?;
    if (fit.c_star - 0.3).abs() < 1e-3 {
        Ok(format!("c* = {:.6} (generator 0.3)", fit.c_star))
    } else {
        Err(format!("c* = {} misses the generator 0.3", fit.c_star))
    }
}

/// Run every check, print the table, return the exit code.
pub fn run() -> i32 {
    let checks = vec![
        check("stabilizer-zero", stabilizer_zero),
        check("maximally-mixed-entropies", maximally_mixed),
        check("pauli-parseval", parseval),
        check("ed-freefermion-oracle", ed_freefermion_oracle),
        check("synthetic-fss-recovery", synthetic_fss),
    ];
    let mut failures = 0;
    for c in &checks {
        match &c.outcome {
            Ok(msg) => println!("PASS  {:<28} {msg}", c.name),
            Err(msg) => {
                println!("FAIL  {:<28} {msg}", c.name);
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("selftest: all {} checks passed", checks.len());
        0
    } else {
        println!("selftest: {failures} of {} checks failed", checks.len());
        1
    }
}
