//! Unsigned Pauli words and their expectation values.
//!
//! A word is stored as two bitmasks (X part, Z part); letter `Y` sets both
//! bits. Phases are deliberately excluded: every expectation here enters an
//! even power, so the four phase copies of a word would contribute
//! identically.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest chain the bitmask representation supports.
pub const MAX_SITES: usize = 24;

/// Cap on full group enumeration (4^n words).
pub const MAX_ENUMERATION_SITES: usize = 10;

/// Tolerance on the imaginary residual of Tr(rho P).
pub const IMAG_TOL: f64 = 1e-10;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    /// Enumeration digit, ordered I < X < Y < Z.
    pub fn index(self) -> usize {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            0 => Some(PauliLetter::I),
            1 => Some(PauliLetter::X),
            2 => Some(PauliLetter::Y),
            3 => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    /// Dense 2x2 matrix.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliLetter::I => [[l, o], [o, l]],
            PauliLetter::X => [[o, l], [l, o]],
            PauliLetter::Y => [[o, -i], [i, o]],
            PauliLetter::Z => [[l, o], [o, -l]],
        }
    }
}

/// An n-qubit unsigned Pauli word.
///
/// Qubit 0 carries the first letter of the display string; in chain basis
/// indices qubit j is bit j (site 0 = least-significant bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_mask: u32,
    z_mask: u32,
}

impl PauliString {
    pub fn new(letters: &[PauliLetter]) -> Result<Self> {
        let n = letters.len();
        if n == 0 || n > MAX_SITES {
            return Err(Error::invalid(format!(
                "pauli word length {n} outside 1..={MAX_SITES}"
            )));
        }
        let mut x_mask = 0u32;
        let mut z_mask = 0u32;
        for (j, &l) in letters.iter().enumerate() {
            match l {
                PauliLetter::I => {}
                PauliLetter::X => x_mask |= 1 << j,
                PauliLetter::Y => {
                    x_mask |= 1 << j;
                    z_mask |= 1 << j;
                }
                PauliLetter::Z => z_mask |= 1 << j,
            }
        }
        Ok(PauliString { n, x_mask, z_mask })
    }

    /// The identity word on n qubits.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::invalid(format!(
                "pauli word length {n} outside 1..={MAX_SITES}"
            )));
        }
        Ok(PauliString { n, x_mask: 0, z_mask: 0 })
    }

    /// Word with a single non-identity letter at `site`.
    pub fn single(n: usize, site: usize, letter: PauliLetter) -> Result<Self> {
        let mut letters = vec![PauliLetter::I; n];
        *letters
            .get_mut(site)
            .ok_or_else(|| Error::invalid(format!("site {site} out of range for n = {n}")))? =
            letter;
        Self::new(&letters)
    }

    /// Word with two non-identity letters.
    pub fn two_site(
        n: usize,
        a: (usize, PauliLetter),
        b: (usize, PauliLetter),
    ) -> Result<Self> {
        if a.0 == b.0 {
            return Err(Error::invalid("two-site word with coincident sites"));
        }
        let mut letters = vec![PauliLetter::I; n];
        *letters
            .get_mut(a.0)
            .ok_or_else(|| Error::invalid(format!("site {} out of range", a.0)))? = a.1;
        *letters
            .get_mut(b.0)
            .ok_or_else(|| Error::invalid(format!("site {} out of range", b.0)))? = b.1;
        Self::new(&letters)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters: Option<Vec<_>> = s.chars().map(PauliLetter::from_char).collect();
        let letters =
            letters.ok_or_else(|| Error::invalid(format!("invalid pauli string {s:?}")))?;
        Self::new(&letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u32 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u32 {
        self.z_mask
    }

    pub fn letter(&self, j: usize) -> PauliLetter {
        let x = (self.x_mask >> j) & 1 == 1;
        let z = (self.z_mask >> j) & 1 == 1;
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.n).map(|j| self.letter(j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Number of Y letters.
    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Word from its position in the lexicographic enumeration.
    pub fn from_enumeration_index(n: usize, w: usize) -> Result<Self> {
        let letters: Vec<PauliLetter> = (0..n)
            .map(|j| PauliLetter::from_index((w >> (2 * (n - 1 - j))) & 3).unwrap())
            .collect();
        Self::new(&letters)
    }

    /// Position in the lexicographic enumeration (identity = 0).
    pub fn enumeration_index(&self) -> usize {
        (0..self.n).fold(0, |acc, j| acc * 4 + self.letter(j).index())
    }

    /// True when the symplectic form vanishes.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let s = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        s % 2 == 0
    }

    /// Letterwise product: self * other = phase * word.
    pub fn product(&self, other: &PauliString) -> Result<(PauliString, Complex64)> {
        if self.n != other.n {
            return Err(Error::invalid("product of words with different lengths"));
        }
        let mut phase = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let mut letters = Vec::with_capacity(self.n);
        for j in 0..self.n {
            use PauliLetter::*;
            let (l, p) = match (self.letter(j), other.letter(j)) {
                (I, b) => (b, Complex64::new(1.0, 0.0)),
                (a, I) => (a, Complex64::new(1.0, 0.0)),
                (a, b) if a == b => (I, Complex64::new(1.0, 0.0)),
                (X, Y) => (Z, i),
                (Y, X) => (Z, -i),
                (Y, Z) => (X, i),
                (Z, Y) => (X, -i),
                (Z, X) => (Y, i),
                (X, Z) => (Y, -i),
                _ => unreachable!(),
            };
            letters.push(l);
            phase *= p;
        }
        Ok((PauliString::new(&letters)?, phase))
    }

    /// Dense 2^n x 2^n matrix (row-major). Intended for small n.
    pub fn dense_matrix(&self) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for s in 0..dim {
            let (t, phase) = self.apply_basis(s);
            m[t * dim + s] = phase;
        }
        m
    }

    /// P|s> = phase * |t>.
    pub fn apply_basis(&self, s: usize) -> (usize, Complex64) {
        let t = s ^ self.x_mask as usize;
        let sign = if ((s as u32 & self.z_mask).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let phase = match self.y_count() % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        };
        (t, phase)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.n {
            write!(f, "{}", self.letter(j).as_char())?;
        }
        Ok(())
    }
}

/// All 4^n words in lexicographic order, identity first.
pub fn enumerate_pauli_group(n: usize) -> Result<Vec<PauliString>> {
    if n == 0 || n > MAX_ENUMERATION_SITES {
        return Err(Error::invalid(format!(
            "group enumeration supports 1..={MAX_ENUMERATION_SITES} qubits, got {n}"
        )));
    }
    (0..4usize.pow(n as u32))
        .map(|w| PauliString::from_enumeration_index(n, w))
        .collect()
}

/// Re Tr(rho P) for a dense row-major density matrix.
///
/// Fails if the imaginary residual exceeds [`IMAG_TOL`], which signals a
/// non-Hermitian input.
pub fn pauli_expectation(rho: &[Complex64], n: usize, word: &PauliString) -> Result<f64> {
    let dim = 1usize << n;
    if word.n() != n {
        return Err(Error::invalid(format!(
            "word length {} does not match qubit count {}",
            word.n(),
            n
        )));
    }
    if rho.len() != dim * dim {
        return Err(Error::invalid(format!(
            "density matrix has {} entries, expected {}",
            rho.len(),
            dim * dim
        )));
    }
    // Tr(rho P) = sum_s phase(s) rho[s, s ^ x]
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..dim {
        let (t, phase) = word.apply_basis(s);
        acc += phase * rho[s * dim + t];
    }
    if acc.im.abs() > IMAG_TOL {
        return Err(Error::numerical(format!(
            "Tr(rho P) has imaginary residual {:.3e} for P = {}",
            acc.im, word
        )));
    }
    Ok(acc.re)
}

/// <psi|P|psi> for a real state vector on n qubits.
///
/// Words with an odd number of Y letters have purely imaginary matrix
/// elements between real vectors; their expectation is exactly zero.
pub fn pauli_expectation_state(psi: &[f64], n: usize, word: &PauliString) -> Result<f64> {
    let dim = 1usize << n;
    if word.n() != n {
        return Err(Error::invalid(format!(
            "word length {} does not match qubit count {}",
            word.n(),
            n
        )));
    }
    if psi.len() != dim {
        return Err(Error::invalid(format!(
            "state vector has dimension {}, expected {}",
            psi.len(),
            dim
        )));
    }
    if word.y_count() % 2 == 1 {
        return Ok(0.0);
    }
    let real_sign = if word.y_count() % 4 == 2 { -1.0 } else { 1.0 };
    let x = word.x_mask() as usize;
    let z = word.z_mask();
    let mut acc = 0.0;
    for s in 0..dim {
        let sign = if (s as u32 & z).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        acc += sign * psi[s ^ x] * psi[s];
    }
    Ok(real_sign * acc)
}
