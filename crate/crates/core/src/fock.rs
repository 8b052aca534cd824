//! Occupation-number basis and its mapping onto qubit space.
//!
//! A Fock basis state `|n_1 n_2 ... n_{2L}>` is identified with the qubit
//! product state `|n_1> ⊗ ... ⊗ |n_{2L}>`. Its integer label is the bitstring
//! read as a binary number with `n_1` as the most significant bit, so for four
//! modes `|1100>` has label 12 and `|0011>` has label 3.
//!
//! Ladder operators act with the string phase `(-1)^{n_{i+1} + ... + n_{2L}}`,
//! which makes the mapped operators obey the canonical anticommutation
//! relations.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest mode count supported by the dense amplitude storage.
pub const MAX_MODES: usize = 24;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalization tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

fn check_modes(modes: usize) -> Result<()> {
    if modes == 0 || modes > MAX_MODES {
        return Err(Error::Domain(format!(
            "mode count must be in 1..={MAX_MODES}, got {modes}"
        )));
    }
    Ok(())
}

/// A single occupation-number basis state over `modes` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState {
    label: u64,
    modes: usize,
}

impl OccupationState {
    /// Decodes an integer label; mode 1 is the most significant bit.
    pub fn from_label(label: u64, modes: usize) -> Result<Self> {
        check_modes(modes)?;
        if label >> modes != 0 {
            return Err(Error::Domain(format!(
                "label {label} out of range for {modes} modes"
            )));
        }
        Ok(Self { label, modes })
    }

    /// Builds a state from occupations `n_1 ... n_{2L}` (each 0 or 1).
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_modes(bits.len())?;
        let mut label = 0u64;
        for &b in bits {
            if b > 1 {
                return Err(Error::Domain(format!("occupation must be 0 or 1, got {b}")));
            }
            label = (label << 1) | u64::from(b);
        }
        Ok(Self { label, modes: bits.len() })
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Occupation of the 1-based mode `i`.
    pub fn occupation(&self, i: usize) -> u8 {
        debug_assert!(i >= 1 && i <= self.modes);
        ((self.label >> (self.modes - i)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.modes).map(|i| self.occupation(i)).collect()
    }

    pub fn particle_number(&self) -> usize {
        self.label.count_ones() as usize
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for OccupationState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Invalid(format!("bad occupation character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

/// The fixed-particle-number subspace spanned by states with exactly `N` ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    modes: usize,
    particles: usize,
    states: Vec<OccupationState>,
}

/// Enumerates the `N`-particle sector of a `modes`-mode system, ascending by label.
pub fn enumerate_sector(modes: usize, particles: usize) -> Result<SectorBasis> {
    check_modes(modes)?;
    if particles > modes {
        return Err(Error::Domain(format!(
            "particle number {particles} exceeds mode count {modes}"
        )));
    }
    let states = (0u64..1u64 << modes)
        .filter(|k| k.count_ones() as usize == particles)
        .map(|label| OccupationState { label, modes })
        .collect();
    Ok(SectorBasis { modes, particles, states })
}

impl SectorBasis {
    /// A basis made of an arbitrary subset of one sector's states (kept in ascending order).
    pub fn from_states(modes: usize, particles: usize, mut states: Vec<OccupationState>) -> Result<Self> {
        check_modes(modes)?;
        for s in &states {
            if s.modes != modes || s.particle_number() != particles {
                return Err(Error::Invalid(format!(
                    "state {s} does not belong to the ({modes}, {particles}) sector"
                )));
            }
        }
        states.sort();
        states.dedup();
        Ok(Self { modes, particles, states })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn states(&self) -> &[OccupationState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn labels(&self) -> Vec<u64> {
        self.states.iter().map(|s| s.label).collect()
    }

    /// Position of `label` within the basis.
    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.states.binary_search_by_key(&label, |s| s.label).ok()
    }

    /// Keeps only the states accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&OccupationState) -> bool) -> Self {
        Self {
            modes: self.modes,
            particles: self.particles,
            states: self.states.iter().copied().filter(|s| keep(s)).collect(),
        }
    }
}

/// Dense complex amplitudes over all `2^modes` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    modes: usize,
    amps: Vec<Complex64>,
    sector: Option<usize>,
}

impl StateVector {
    pub fn zeros(modes: usize) -> Result<Self> {
        check_modes(modes)?;
        Ok(Self { modes, amps: vec![ZERO; 1 << modes], sector: None })
    }

    pub fn basis(state: OccupationState) -> Self {
        let mut amps = vec![ZERO; 1 << state.modes];
        amps[state.label as usize] = Complex64::new(1.0, 0.0);
        Self { modes: state.modes, amps, sector: Some(state.particle_number()) }
    }

    pub fn from_amplitudes(modes: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_modes(modes)?;
        if amps.len() != 1 << modes {
            return Err(Error::Invalid(format!(
                "expected {} amplitudes for {modes} modes, got {}",
                1usize << modes,
                amps.len()
            )));
        }
        Ok(Self { modes, amps, sector: None })
    }

    /// Builds a state from `(label, amplitude)` pairs; repeated labels accumulate.
    pub fn from_terms(modes: usize, terms: &[(u64, Complex64)]) -> Result<Self> {
        let mut v = Self::zeros(modes)?;
        for &(label, c) in terms {
            OccupationState::from_label(label, modes)?;
            v.amps[label as usize] += c;
        }
        Ok(v)
    }

    /// Embeds sector coefficients (ordered as `basis`) into the full space.
    pub fn from_sector(basis: &SectorBasis, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::Invalid(format!(
                "expected {} sector coefficients, got {}",
                basis.len(),
                coeffs.len()
            )));
        }
        let mut v = Self::zeros(basis.modes)?;
        for (s, &c) in basis.states.iter().zip(coeffs) {
            v.amps[s.label as usize] = c;
        }
        v.sector = Some(basis.particles);
        Ok(v)
    }

    /// Coefficients on the states of `basis`; amplitude outside the basis is dropped.
    pub fn sector_coefficients(&self, basis: &SectorBasis) -> Vec<Complex64> {
        basis.states.iter().map(|s| self.amps[s.label as usize]).collect()
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, label: u64) -> Complex64 {
        self.amps[label as usize]
    }

    /// Particle-number tag, if the state is known to live in one sector.
    pub fn sector(&self) -> Option<usize> {
        self.sector
    }

    /// Tags the state with its particle number if the support has a single popcount.
    pub fn with_detected_sector(mut self) -> Self {
        self.sector = self.detect_sector();
        self
    }

    pub fn detect_sector(&self) -> Option<usize> {
        let mut found = None;
        for (k, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                let n = k.count_ones() as usize;
                match found {
                    None => found = Some(n),
                    Some(m) if m != n => return None,
                    _ => {}
                }
            }
        }
        found
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            modes: self.modes,
            amps: self.amps.iter().map(|a| a * c).collect(),
            sector: self.sector,
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Labels with nonzero amplitude, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(k, _)| k as u64)
            .collect()
    }

    /// Multiplies by a global phase so the first amplitude above `tol` is real and positive.
    pub fn gauge_fixed(&self, tol: f64) -> Self {
        match self.amps.iter().position(|a| a.norm() > tol) {
            Some(k) => {
                let a = self.amps[k];
                let mut out = self.scale(a.conj() / a.norm());
                out.amps[k] = Complex64::new(a.norm(), 0.0);
                out
            }
            None => self.clone(),
        }
    }
}

impl Add for &StateVector {
    type Output = StateVector;

    fn add(self, rhs: &StateVector) -> StateVector {
        assert_eq!(self.modes, rhs.modes, "mode count mismatch");
        StateVector {
            modes: self.modes,
            amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a + b).collect(),
            sector: if self.sector == rhs.sector { self.sector } else { None },
        }
    }
}

impl Sub for &StateVector {
    type Output = StateVector;

    fn sub(self, rhs: &StateVector) -> StateVector {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<&StateVector> for Complex64 {
    type Output = StateVector;

    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scale(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LadderKind {
    Annihilate,
    Create,
}

/// `a_i` or `a_i^†` on the 1-based mode `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderOp {
    pub fn annihilate(mode: usize) -> Self {
        Self { mode, kind: LadderKind::Annihilate }
    }

    pub fn create(mode: usize) -> Self {
        Self { mode, kind: LadderKind::Create }
    }

    pub fn adjoint(self) -> Self {
        let kind = match self.kind {
            LadderKind::Annihilate => LadderKind::Create,
            LadderKind::Create => LadderKind::Annihilate,
        };
        Self { mode: self.mode, kind }
    }

    /// Action on a single basis label: the new label and its sign, or `None` if annihilated.
    pub fn act_on_label(self, label: u64, modes: usize) -> Option<(u64, f64)> {
        let shift = modes - self.mode;
        let bit = 1u64 << shift;
        let occupied = label & bit != 0;
        let target = match (self.kind, occupied) {
            (LadderKind::Annihilate, true) | (LadderKind::Create, false) => label ^ bit,
            _ => return None,
        };
        // modes j > i sit below bit position `shift`
        let string = (label & (bit - 1)).count_ones();
        let sign = if string.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((target, sign))
    }
}

/// Applies a ladder operator with its string phase. The result is generally unnormalized.
pub fn apply_ladder(op: LadderOp, v: &StateVector) -> Result<StateVector> {
    if op.mode == 0 || op.mode > v.modes {
        return Err(Error::Domain(format!(
            "mode index {} out of range 1..={}",
            op.mode, v.modes
        )));
    }
    let mut out = vec![ZERO; v.amps.len()];
    for (k, &a) in v.amps.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        if let Some((target, sign)) = op.act_on_label(k as u64, v.modes) {
            out[target as usize] += a * sign;
        }
    }
    let sector = v.sector.and_then(|n| match op.kind {
        LadderKind::Annihilate => n.checked_sub(1),
        LadderKind::Create => Some(n + 1).filter(|&m| m <= v.modes),
    });
    Ok(StateVector { modes: v.modes, amps: out, sector })
}

/// Eigenvalue of `Π_i (1 - 2 n_i)`, i.e. `(-1)^N` for a state of definite parity.
pub fn parity(v: &StateVector) -> Result<i8> {
    let mut found: Option<i8> = None;
    for (k, a) in v.amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let p = if k.count_ones() % 2 == 0 { 1 } else { -1 };
        match found {
            None => found = Some(p),
            Some(q) if q != p => return Err(Error::NotParityEigenstate),
            _ => {}
        }
    }
    found.ok_or_else(|| Error::Domain("parity of the zero vector".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(s: &str) -> StateVector {
        StateVector::basis(s.parse().unwrap())
    }

    #[test]
    fn four_mode_half_filling_labels() {
        let b = enumerate_sector(4, 2).unwrap();
        assert_eq!(b.labels(), vec![3, 5, 6, 9, 10, 12]);
    }

    #[test]
    fn six_mode_three_particle_labels() {
        let b = enumerate_sector(6, 3).unwrap();
        assert_eq!(
            b.labels(),
            vec![7, 11, 13, 14, 19, 21, 22, 25, 26, 28, 35, 37, 38, 41, 42, 44, 49, 50, 52, 56]
        );
    }

    #[test]
    fn vacuum_sector() {
        let b = enumerate_sector(4, 0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.states()[0].to_string(), "0000");
    }

    #[test]
    fn sector_rejects_too_many_particles() {
        assert!(matches!(enumerate_sector(4, 5), Err(Error::Domain(_))));
        assert!(enumerate_sector(0, 0).is_err());
    }

    #[test]
    fn sector_sizes_sum_to_full_space() {
        for modes in 1..=10 {
            let total: usize = (0..=modes).map(|n| enumerate_sector(modes, n).unwrap().len()).sum();
            assert_eq!(total, 1 << modes);
        }
    }

    #[test]
    fn label_codec_msb_is_mode_one() {
        assert_eq!(OccupationState::from_label(3, 4).unwrap().bits(), vec![0, 0, 1, 1]);
        assert_eq!(OccupationState::from_label(12, 4).unwrap().to_string(), "1100");
        assert!(OccupationState::from_label(16, 4).is_err());
        for k in 0..64 {
            let s = OccupationState::from_label(k, 6).unwrap();
            assert_eq!(OccupationState::from_bits(&s.bits()).unwrap().label(), k);
            assert_eq!(s.to_string().parse::<OccupationState>().unwrap(), s);
        }
    }

    #[test]
    fn annihilate_first_mode_picks_up_string_sign() {
        let out = apply_ladder(LadderOp::annihilate(1), &ket("1100")).unwrap();
        assert_eq!(out, ket("0100").scale(Complex64::new(-1.0, 0.0)));
        assert_eq!(out.sector(), Some(1));
    }

    #[test]
    fn create_last_mode_has_no_string() {
        let out = apply_ladder(LadderOp::create(4), &ket("1100")).unwrap();
        assert_eq!(out.amplitudes(), ket("1101").amplitudes());
    }

    #[test]
    fn annihilate_empty_mode_gives_zero() {
        let out = apply_ladder(LadderOp::annihilate(2), &ket("1001")).unwrap();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn ladder_rejects_bad_mode() {
        assert!(apply_ladder(LadderOp::create(5), &ket("1100")).is_err());
        assert!(apply_ladder(LadderOp::create(0), &ket("1100")).is_err());
    }

    #[test]
    fn parity_values() {
        assert_eq!(parity(&ket("1100")).unwrap(), 1);
        assert_eq!(parity(&ket("0100")).unwrap(), -1);
        let mixed = (&ket("1100") + &ket("0100")).scale(Complex64::new(0.5f64.sqrt(), 0.0));
        assert_eq!(parity(&mixed), Err(Error::NotParityEigenstate));
    }

    #[test]
    fn gauge_fix_makes_first_amplitude_positive() {
        let v = StateVector::from_terms(2, &[(1, Complex64::new(0.0, -0.6)), (2, Complex64::new(0.8, 0.0))]).unwrap();
        let g = v.gauge_fixed(1e-12);
        assert!((g.amplitude(1) - Complex64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((g.amplitude(2) - Complex64::new(0.0, 0.8)).norm() < 1e-15);
    }
}
