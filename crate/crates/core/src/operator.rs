//! Second-quantized operators built from ladder products, and their matrices
//! on fixed-particle-number sectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{apply_ladder, LadderOp, SectorBasis, StateVector, ZERO};

/// One term `coeff · op_1 op_2 ... op_k`; the rightmost operator acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub coeff: Complex64,
    pub ops: Vec<LadderOp>,
}

/// A linear combination of ladder-operator products on `modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    modes: usize,
    terms: Vec<OperatorTerm>,
}

impl FermionOperator {
    pub fn zero(modes: usize) -> Self {
        Self { modes, terms: Vec::new() }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn add_term(&mut self, coeff: impl Into<Complex64>, ops: Vec<LadderOp>) -> Result<()> {
        for op in &ops {
            if op.mode == 0 || op.mode > self.modes {
                return Err(Error::Domain(format!(
                    "mode index {} out of range 1..={}",
                    op.mode, self.modes
                )));
            }
        }
        self.terms.push(OperatorTerm { coeff: coeff.into(), ops });
        Ok(())
    }

    /// `coeff · a_i^† a_j`.
    pub fn add_hop(&mut self, coeff: impl Into<Complex64>, i: usize, j: usize) -> Result<()> {
        self.add_term(coeff, vec![LadderOp::create(i), LadderOp::annihilate(j)])
    }

    /// `coeff · (a_i^† a_j + a_j^† a_i)` for real `coeff`.
    pub fn add_hop_hc(&mut self, coeff: f64, i: usize, j: usize) -> Result<()> {
        self.add_hop(coeff, i, j)?;
        self.add_hop(coeff, j, i)
    }

    /// `coeff · n_i`.
    pub fn add_number(&mut self, coeff: impl Into<Complex64>, i: usize) -> Result<()> {
        self.add_hop(coeff, i, i)
    }

    /// `coeff · n_i n_j`.
    pub fn add_density_density(&mut self, coeff: impl Into<Complex64>, i: usize, j: usize) -> Result<()> {
        self.add_term(
            coeff,
            vec![
                LadderOp::create(i),
                LadderOp::annihilate(i),
                LadderOp::create(j),
                LadderOp::annihilate(j),
            ],
        )
    }

    pub fn extend(&mut self, other: &FermionOperator) {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn scaled(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self {
            modes: self.modes,
            terms: self
                .terms
                .iter()
                .map(|t| OperatorTerm { coeff: t.coeff * c, ops: t.ops.clone() })
                .collect(),
        }
    }

    /// Operator product `self · other`.
    pub fn product(&self, other: &FermionOperator) -> Self {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut ops = a.ops.clone();
                ops.extend_from_slice(&b.ops);
                terms.push(OperatorTerm { coeff: a.coeff * b.coeff, ops });
            }
        }
        Self { modes: self.modes, terms }
    }

    /// Applies the operator to a full state vector through successive ladder actions.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.modes() != self.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: v.modes() });
        }
        let mut acc = StateVector::zeros(self.modes)?;
        for term in &self.terms {
            let mut w = v.clone();
            for &op in term.ops.iter().rev() {
                w = apply_ladder(op, &w)?;
            }
            acc = &acc + &w.scale(term.coeff);
        }
        Ok(acc)
    }

    /// Images of one basis label: `(label', amplitude)` pairs, possibly repeated.
    fn act_on_label(&self, label: u64) -> Vec<(u64, Complex64)> {
        let mut out = Vec::new();
        'terms: for term in &self.terms {
            let mut cur = label;
            let mut sign = 1.0;
            for &op in term.ops.iter().rev() {
                match op.act_on_label(cur, self.modes) {
                    Some((next, s)) => {
                        cur = next;
                        sign *= s;
                    }
                    None => continue 'terms,
                }
            }
            out.push((cur, term.coeff * sign));
        }
        out
    }

    /// Matrix elements `<b_r| O |b_c>` on `basis`. Amplitude leaving the basis is an error
    /// unless `allow_leak` is set, in which case it is dropped.
    pub fn sector_matrix(&self, basis: &SectorBasis, allow_leak: bool) -> Result<SectorMatrix> {
        if basis.modes() != self.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: basis.modes() });
        }
        let n = basis.len();
        let mut m = DMatrix::from_element(n, n, ZERO);
        for (c, s) in basis.states().iter().enumerate() {
            for (label, amp) in self.act_on_label(s.label()) {
                match basis.index_of(label) {
                    Some(r) => m[(r, c)] += amp,
                    None if allow_leak || amp == ZERO => {}
                    None => {
                        return Err(Error::Invalid(format!(
                            "operator maps basis state {s} outside the basis"
                        )))
                    }
                }
            }
        }
        Ok(SectorMatrix { basis: basis.clone(), matrix: m })
    }
}

/// Matrix of the fermionic mode relabelling `c_m^† -> c_{perm(m)}^†` on `basis`.
///
/// `perm[m - 1]` is the image of mode `m`. Each basis state is read as the
/// ordered product `c_{m_1}^† ... c_{m_N}^† |0>` (ascending modes, with the
/// string sign it carries under the qubit mapping), relabelled, and mapped
/// back through the same ladder actions, so reordering signs are exact.
pub fn mode_permutation_matrix(basis: &SectorBasis, perm: &[usize]) -> Result<SectorMatrix> {
    let modes = basis.modes();
    if perm.len() != modes {
        return Err(Error::Invalid(format!("permutation has {} entries, expected {modes}", perm.len())));
    }
    let mut seen = vec![false; modes + 1];
    for &m in perm {
        if m == 0 || m > modes || seen[m] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation of 1..={modes}")));
        }
        seen[m] = true;
    }
    let build = |occupied: &[usize]| -> (u64, f64) {
        let mut label = 0u64;
        let mut sign = 1.0;
        for &m in occupied.iter().rev() {
            let (next, s) = LadderOp::create(m)
                .act_on_label(label, modes)
                .expect("modes are distinct");
            label = next;
            sign *= s;
        }
        (label, sign)
    };
    let n = basis.len();
    let mut m = DMatrix::from_element(n, n, ZERO);
    for (c, s) in basis.states().iter().enumerate() {
        let occupied: Vec<usize> = (1..=modes).filter(|&i| s.occupation(i) == 1).collect();
        let (_, own_sign) = build(&occupied);
        let image: Vec<usize> = occupied.iter().map(|&i| perm[i - 1]).collect();
        let (label, sign) = build(&image);
        let r = basis
            .index_of(label)
            .ok_or_else(|| Error::Invalid(format!("permutation maps {s} outside the basis")))?;
        m[(r, c)] = Complex64::new(own_sign * sign, 0.0);
    }
    Ok(SectorMatrix { basis: basis.clone(), matrix: m })
}

/// A complex matrix expressed in a sector basis. Hamiltonians and other
/// observables on a fixed-`N` sector use this type.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMatrix {
    pub basis: SectorBasis,
    pub matrix: DMatrix<Complex64>,
}

pub type HamiltonianMatrix = SectorMatrix;

impl SectorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.matrix.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn apply_coeffs(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let x = DVector::from_column_slice(coeffs);
        (&self.matrix * x).iter().copied().collect()
    }

    /// Applies the matrix to a full-space state, reading and writing only basis labels.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.modes() != self.basis.modes() {
            return Err(Error::ModeMismatch { expected: self.basis.modes(), found: v.modes() });
        }
        let out = self.apply_coeffs(&v.sector_coefficients(&self.basis));
        StateVector::from_sector(&self.basis, &out)
    }

    /// Restricts to a sub-basis; entries coupling to removed states are discarded.
    pub fn restrict(&self, sub: &SectorBasis) -> Result<SectorMatrix> {
        let idx = sub
            .states()
            .iter()
            .map(|s| {
                self.basis
                    .index_of(s.label())
                    .ok_or_else(|| Error::Invalid(format!("state {s} is not in the parent basis")))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = idx.len();
        let matrix = DMatrix::from_fn(n, n, |r, c| self.matrix[(idx[r], idx[c])]);
        Ok(SectorMatrix { basis: sub.clone(), matrix })
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &SectorMatrix) -> f64 {
        let c = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        c.norm()
    }

    /// Largest absolute entry of `[self, other]`.
    pub fn commutator_max_abs(&self, other: &SectorMatrix) -> f64 {
        let c = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{enumerate_sector, OccupationState};

    fn ket(s: &str) -> StateVector {
        StateVector::basis(s.parse::<OccupationState>().unwrap())
    }

    #[test]
    fn number_operator_is_diagonal() {
        let b = enumerate_sector(4, 2).unwrap();
        for i in 1..=4 {
            let mut op = FermionOperator::zero(4);
            op.add_number(1.0, i).unwrap();
            let m = op.sector_matrix(&b, false).unwrap();
            for (r, s) in b.states().iter().enumerate() {
                for c in 0..b.len() {
                    let expected = if r == c { f64::from(s.occupation(i)) } else { 0.0 };
                    assert_eq!(m.matrix[(r, c)], Complex64::new(expected, 0.0));
                }
            }
        }
    }

    #[test]
    fn sector_matrix_matches_state_application() {
        let b = enumerate_sector(4, 2).unwrap();
        let mut op = FermionOperator::zero(4);
        op.add_hop_hc(0.7, 1, 4).unwrap();
        op.add_density_density(1.3, 1, 2).unwrap();
        op.add_hop(Complex64::new(0.0, 0.4), 2, 3).unwrap();
        let m = op.sector_matrix(&b, false).unwrap();
        for (c, s) in b.states().iter().enumerate() {
            let direct = op.apply(&StateVector::basis(*s)).unwrap();
            for (r, t) in b.states().iter().enumerate() {
                assert!((direct.amplitude(t.label()) - m.matrix[(r, c)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hop_across_occupied_mode_carries_sign() {
        // a_4^† a_1 |1100> : a_1 sees n_2 = 1, a_4^† then sees no modes after it
        let mut op = FermionOperator::zero(4);
        op.add_hop(1.0, 4, 1).unwrap();
        let out = op.apply(&ket("1100")).unwrap();
        assert_eq!(out.amplitude(0b0101), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn leaking_operator_is_rejected() {
        let b = enumerate_sector(4, 2).unwrap();
        let mut op = FermionOperator::zero(4);
        op.add_term(1.0, vec![LadderOp::create(1)]).unwrap();
        assert!(op.sector_matrix(&b, false).is_err());
        assert!(op.add_term(1.0, vec![LadderOp::create(7)]).is_err());
    }
}
