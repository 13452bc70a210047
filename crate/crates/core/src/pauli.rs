//! Pauli strings in symplectic form and real-weighted sums of them.
//!
//! Qubit 0 is the leftmost label character and the most significant bit of
//! both masks, so `from_label("XIZ")` has `x = 0b100`, `z = 0b001`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_QUBITS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    x: u64,
    z: u64,
}

/// Power of `i`: 0 → +1, 1 → +i, 2 → −1, 3 → −i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex<S: Scalar>(self) -> Complex<S> {
        match self.0 {
            0 => Complex::new(S::one(), S::zero()),
            1 => Complex::new(S::zero(), S::one()),
            2 => Complex::new(-S::one(), S::zero()),
            _ => Complex::new(S::zero(), -S::one()),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_masks(n, 0, 0)
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Scale { what: "PauliString", n, cap: MAX_QUBITS });
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::Domain(format!("masks exceed {n} qubits")));
        }
        Ok(PauliString { n: n as u8, x, z })
    }

    pub(crate) fn from_masks_unchecked(n: usize, x: u64, z: u64) -> Self {
        debug_assert!((1..=MAX_QUBITS).contains(&n) && (x | z) & !mask(n) == 0);
        PauliString { n: n as u8, x, z }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Label(label.to_string()));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for c in label.chars() {
            x <<= 1;
            z <<= 1;
            match c {
                'I' => {}
                'X' => x |= 1,
                'Y' => {
                    x |= 1;
                    z |= 1
                }
                'Z' => z |= 1,
                _ => return Err(Error::Label(label.to_string())),
            }
        }
        Ok(PauliString { n: n as u8, x, z })
    }

    /// Single-letter string `letter` on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self> {
        if q >= n {
            return Err(Error::Index { index: q + 1, size: n });
        }
        let mut label: Vec<char> = vec!['I'; n];
        label[q] = letter;
        Self::from_label(&label.into_iter().collect::<String>())
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    fn bit(&self, q: usize) -> u32 {
        (self.n as usize - 1 - q) as u32
    }

    /// Letter on qubit `q` (0-based from the left).
    pub fn letter(&self, q: usize) -> char {
        let b = self.bit(q);
        match ((self.x >> b) & 1, (self.z >> b) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    pub fn to_label(&self) -> String {
        (0..self.n_qubits()).map(|q| self.letter(q)).collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x | self.z == 0
    }

    /// Qubits (0-based from the left) carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits()).filter(|&q| (self.x | self.z) >> self.bit(q) & 1 == 1).collect()
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n as usize, got: other.n as usize });
        }
        Ok(())
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// `self · other = phase · product`.
    pub fn multiply(&self, other: &Self) -> Result<(Phase, PauliString)> {
        self.check_size(other)?;
        let (ax, az, bx, bz) = (self.x, self.z, other.x, other.z);
        let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
        let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        let plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
        let minus = (a_y & b_x) | (a_z & b_y) | (a_x & b_z);
        let k = plus.count_ones() as i64 - minus.count_ones() as i64;
        Ok((
            Phase::from_exponent(k),
            PauliString { n: self.n, x: ax ^ bx, z: az ^ bz },
        ))
    }

    /// `P|basis⟩ = phase · |target⟩`.
    pub fn apply_to_basis(&self, basis: u64) -> (Phase, u64) {
        let k = (self.x & self.z).count_ones() as i64 + 2 * (self.z & basis).count_ones() as i64;
        (Phase::from_exponent(k), basis ^ self.x)
    }

    /// Matrix element `⟨row|P|col⟩`.
    pub fn matrix_element(&self, row: u64, col: u64) -> Option<Phase> {
        let (ph, target) = self.apply_to_basis(col);
        (target == row).then_some(ph)
    }

    /// Packs the letters as 2-bit codes (I<X<Y<Z) from the left, for ordering.
    fn sort_key(&self) -> u128 {
        let mut key = 0u128;
        for q in 0..self.n_qubits() {
            let b = self.bit(q);
            let code = match ((self.x >> b) & 1, (self.z >> b) & 1) {
                (0, 0) => 0,
                (1, 0) => 1,
                (1, 1) => 2,
                _ => 3,
            };
            key = (key << 2) | code;
        }
        key
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_label())
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_label(s)
    }
}

/// Real linear combination of Pauli strings, always free of cancelled terms.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<S = f64> {
    n: usize,
    terms: BTreeMap<PauliString, S>,
}

impl<S: Scalar> PauliSum<S> {
    pub fn new(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, S)>,
    {
        let mut acc = Accumulator::new(n);
        for (p, c) in terms {
            if p.n_qubits() != n {
                return Err(Error::Dimension { expected: n, got: p.n_qubits() });
            }
            acc.add(p, c);
        }
        Ok(acc.finish())
    }

    /// Parses `[(label, coeff)]`.
    pub fn from_labels(terms: &[(&str, S)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Label(String::new()))?;
        let n = first.0.len();
        let parsed = terms
            .iter()
            .map(|(l, c)| Ok((PauliString::from_label(l)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, parsed)
    }

    pub(crate) fn from_map_unchecked(n: usize, terms: BTreeMap<PauliString, S>) -> Self {
        PauliSum { n, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &S)> {
        self.terms.iter()
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.keys()
    }

    pub fn coeff(&self, p: &PauliString) -> S {
        self.terms.get(p).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff_of(&self, label: &str) -> Result<S> {
        Ok(self.coeff(&PauliString::from_label(label)?))
    }

    pub fn scaled(&self, factor: &S) -> Self {
        let mut acc = Accumulator::new(self.n);
        for (p, c) in &self.terms {
            acc.add(*p, c.clone() * factor.clone());
        }
        acc.finish()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, got: other.n });
        }
        let mut acc = Accumulator::new(self.n);
        acc.extend(self);
        acc.extend(other);
        Ok(acc.finish())
    }

    /// True when every pair of stored strings commutes.
    pub fn is_commuting(&self) -> bool {
        let keys: Vec<&PauliString> = self.terms.keys().collect();
        keys.iter()
            .enumerate()
            .all(|(i, a)| keys[i + 1..].iter().all(|b| a.commutes_unchecked(b)))
    }

    /// Largest coefficientwise difference, in f64.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for p in self.terms.keys().chain(other.terms.keys()) {
            let d = (self.coeff(p).to_f64_lossy() - other.coeff(p).to_f64_lossy()).abs();
            worst = worst.max(d);
        }
        worst
    }

    pub fn to_f64(&self) -> PauliSum<f64> {
        let mut acc = Accumulator::new(self.n);
        for (p, c) in &self.terms {
            acc.add(*p, c.to_f64_lossy());
        }
        acc.finish()
    }

    pub fn to_json(&self) -> PauliSumJson {
        PauliSumJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| TermJson { label: p.to_label(), coeff: c.to_f64_lossy() })
                .collect(),
        }
    }
}

impl PauliSum<f64> {
    pub fn from_json(j: &PauliSumJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((PauliString::from_label(&t.label)?, t.coeff)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(j.n, terms)
    }
}

/// Wire form: `{n, terms: [{label, coeff}]}` sorted by label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliSumJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub label: String,
    pub coeff: f64,
}

/// Mask-keyed accumulation with a single pruning pass at the end.
#[derive(Clone, Debug)]
pub struct Accumulator<S> {
    n: usize,
    terms: HashMap<PauliString, S>,
}

impl<S: Scalar> Accumulator<S> {
    pub fn new(n: usize) -> Self {
        Accumulator { n, terms: HashMap::new() }
    }

    pub fn add(&mut self, p: PauliString, c: S) {
        let slot = self.terms.entry(p).or_insert_with(S::zero);
        *slot = slot.clone() + c;
    }

    pub fn extend(&mut self, s: &PauliSum<S>) {
        for (p, c) in s.iter() {
            self.add(*p, c.clone());
        }
    }

    pub fn finish(self) -> PauliSum<S> {
        let terms = self.terms.into_iter().filter(|(_, c)| !c.is_negligible()).collect();
        PauliSum { n: self.n, terms }
    }
}

/// Complex-valued accumulation; `finish_real` keeps the real parts.
#[derive(Clone, Debug)]
pub struct ComplexAccumulator<S> {
    n: usize,
    terms: HashMap<PauliString, Complex<S>>,
}

impl<S: Scalar> ComplexAccumulator<S> {
    pub fn new(n: usize) -> Self {
        ComplexAccumulator { n, terms: HashMap::new() }
    }

    pub fn add(&mut self, p: PauliString, c: Complex<S>) {
        let slot = self.terms.entry(p).or_insert_with(|| Complex::new(S::zero(), S::zero()));
        *slot = slot.clone() + c;
    }

    /// Largest surviving imaginary part, in f64.
    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.to_f64_lossy().abs()).fold(0.0, f64::max)
    }

    pub fn finish_real(self) -> PauliSum<S> {
        let terms = self
            .terms
            .into_iter()
            .filter(|(_, c)| !c.re.is_negligible())
            .map(|(p, c)| (p, c.re))
            .collect();
        PauliSum { n: self.n, terms }
    }
}
