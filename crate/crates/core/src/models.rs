//! Hubbard dimer and trimer on fixed-particle-number sectors.
//!
//! Modes are ordered site by site, spin up before spin down:
//! `(A↑ A↓ B↑ B↓ ...)`, so site `s` (0-based) owns modes `2s + 1` and `2s + 2`.
//! Hamiltonians are assembled from ladder-operator products, which puts the
//! string signs on every bond (including the periodic trimer bond) without
//! hand-written matrix elements.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{enumerate_sector, OccupationState, SectorBasis, StateVector};
use crate::linalg::hermitian_eigen;
use crate::measure::{geometric_entanglement, von_neumann};
use crate::operator::{mode_permutation_matrix, FermionOperator, HamiltonianMatrix, SectorMatrix};
use crate::partition::Partition;

/// Default relative degeneracy tolerance (fraction of the spectral range).
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Mode index of `(site, spin)`; spin 0 is up, 1 is down.
pub fn mode_of(site: usize, spin: usize) -> usize {
    2 * site + spin + 1
}

/// Hubbard dimer parameters: hopping `t > 0`, on-site repulsion `u >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimerParams {
    pub t: f64,
    pub u: f64,
}

impl DimerParams {
    pub fn new(t: f64, u: f64) -> Result<Self> {
        if !(t > 0.0) || !(u >= 0.0) || !t.is_finite() || !u.is_finite() {
            return Err(Error::Domain(format!("dimer needs t > 0 and U >= 0, got t={t}, U={u}")));
        }
        Ok(Self { t, u })
    }

    /// Parameters with `t = 1` whose ground-state mixing equals `alpha >= 1`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
        }
        let x = (alpha - 1.0 / alpha) / 2.0;
        Self::new(1.0, 4.0 * x)
    }

    /// `x = U / 4t`.
    pub fn x(&self) -> f64 {
        self.u / (4.0 * self.t)
    }

    /// `α = x + sqrt(1 + x²)`.
    pub fn alpha(&self) -> f64 {
        let x = self.x();
        x + (1.0 + x * x).sqrt()
    }

    /// Exact ground energy `U/2 - sqrt((U/2)² + 4t²)`.
    pub fn ground_energy(&self) -> f64 {
        let h = self.u / 2.0;
        h - (h * h + 4.0 * self.t * self.t).sqrt()
    }
}

/// Hubbard trimer parameters: hopping `t > 0`, `beta = U / t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrimerParams {
    pub t: f64,
    pub beta: f64,
}

impl TrimerParams {
    pub fn new(t: f64, beta: f64) -> Result<Self> {
        if !(t > 0.0) || !(beta >= 0.0) || !t.is_finite() || !beta.is_finite() {
            return Err(Error::Domain(format!("trimer needs t > 0 and beta >= 0, got t={t}, beta={beta}")));
        }
        Ok(Self { t, beta })
    }
}

/// Hubbard ring/chain Hamiltonian on `sites` sites with the given bonds.
fn hubbard_operator(sites: usize, bonds: &[(usize, usize)], t: f64, u: f64) -> Result<FermionOperator> {
    let mut h = FermionOperator::zero(2 * sites);
    for &(i, j) in bonds {
        for spin in 0..2 {
            h.add_hop_hc(-t, mode_of(i, spin), mode_of(j, spin))?;
        }
    }
    if u != 0.0 {
        for s in 0..sites {
            h.add_density_density(u, mode_of(s, 0), mode_of(s, 1))?;
        }
    }
    Ok(h)
}

/// 6×6 dimer Hamiltonian on the four-mode, two-particle sector.
pub fn dimer_hamiltonian(params: DimerParams) -> Result<HamiltonianMatrix> {
    let basis = enumerate_sector(4, 2)?;
    hubbard_operator(2, &[(0, 1)], params.t, params.u)?.sector_matrix(&basis, false)
}

/// Closed-form dimer ground state
/// `-(|1100> + |0011> + α|1001> - α|0110>) / sqrt(2 (1 + α²))`.
pub fn dimer_ground_state(alpha: f64) -> Result<StateVector> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let n = -1.0 / (2.0 * (1.0 + alpha * alpha)).sqrt();
    let c = |x: f64| Complex64::new(n * x, 0.0);
    Ok(StateVector::from_terms(
        4,
        &[(0b1100, c(1.0)), (0b0011, c(1.0)), (0b1001, c(alpha)), (0b0110, c(-alpha))],
    )?
    .with_detected_sector())
}

pub fn dimer_ground_state_analytic(params: DimerParams) -> Result<StateVector> {
    dimer_ground_state(params.alpha())
}

/// Closed-form dimer entanglement curves as functions of `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimerCurves {
    /// four single-mode subsets
    pub e_g: f64,
    /// site bipartition, geometric measure
    pub e_s: f64,
    /// site bipartition, von Neumann entropy (bits)
    pub e_vn: f64,
}

pub fn dimer_curves(alpha: f64) -> Result<DimerCurves> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let a2 = alpha * alpha;
    let e_g = 3.0 / (1.0 + a2) * (1.0 + 2.0 * a2 / 9.0 + a2 * a2).sqrt() - 1.0;
    let e_s = 2.0 / (1.0 + a2) * (13.0 * a2 * a2 + 34.0 * a2 + 13.0).sqrt() - 6.0;
    let e_vn = ((2.0 * (1.0 + a2)).log2() - a2 * (a2 / (2.0 * (1.0 + a2))).log2()) / (1.0 + a2);
    Ok(DimerCurves { e_g, e_s, e_vn })
}

/// 20×20 trimer Hamiltonian on the six-mode, three-particle sector,
/// `H = -t Σ_j Σ_σ (c†_{jσ} c_{j+1,σ} + h.c.) + tβ Σ_j n_{j↑} n_{j↓}`
/// with the periodic `C -> A` bond.
pub fn trimer_hamiltonian(params: TrimerParams) -> Result<HamiltonianMatrix> {
    let basis = enumerate_sector(6, 3)?;
    trimer_operator(params)?.sector_matrix(&basis, false)
}

pub fn trimer_operator(params: TrimerParams) -> Result<FermionOperator> {
    hubbard_operator(3, &[(0, 1), (1, 2), (2, 0)], params.t, params.t * params.beta)
}

/// Total-spin operators `S²` and `S_z` on a sector basis.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub s2: SectorMatrix,
    pub sz: SectorMatrix,
}

pub fn total_spin_ops(basis: &SectorBasis) -> Result<SpinOperators> {
    let modes = basis.modes();
    if !modes.is_multiple_of(2) {
        return Err(Error::Domain(format!("spin operators need an even mode count, got {modes}")));
    }
    let sites = modes / 2;
    let mut s_plus = FermionOperator::zero(modes);
    let mut s_minus = FermionOperator::zero(modes);
    let mut sz = FermionOperator::zero(modes);
    for s in 0..sites {
        let (up, dn) = (mode_of(s, 0), mode_of(s, 1));
        s_plus.add_hop(1.0, up, dn)?;
        s_minus.add_hop(1.0, dn, up)?;
        sz.add_number(0.5, up)?;
        sz.add_number(-0.5, dn)?;
    }
    let mut s2 = s_minus.product(&s_plus);
    s2.extend(&sz);
    s2.extend(&sz.product(&sz));
    Ok(SpinOperators {
        s2: s2.sector_matrix(basis, false)?,
        sz: sz.sector_matrix(basis, false)?,
    })
}

/// Twice the `S_z` eigenvalue of a basis state (site-paired modes).
pub fn twice_sz(s: &OccupationState) -> i32 {
    (1..=s.modes())
        .map(|m| i32::from(s.occupation(m)) * if m % 2 == 1 { 1 } else { -1 })
        .sum()
}

/// The states of `basis` with `2 S_z = twice`.
pub fn sz_block(basis: &SectorBasis, twice: i32) -> SectorBasis {
    basis.filter(|s| twice_sz(s) == twice)
}

/// Full spectrum of a Hermitian sector matrix.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub basis: SectorBasis,
    /// ascending
    pub values: Vec<f64>,
    /// eigenvectors as columns, each gauge-fixed
    pub vectors: DMatrix<Complex64>,
    pub ground_degeneracy: usize,
}

/// Diagonalizes `h`. Levels within `degeneracy_tol × (spectral range)` of the
/// lowest eigenvalue form the ground multiplet, whose vectors are replaced by
/// a canonical basis: the projections of basis states onto the multiplet, taken
/// in ascending label order and orthonormalized.
pub fn diagonalize(h: &HamiltonianMatrix, degeneracy_tol: f64) -> Result<EigenSolution> {
    let (values, mut vectors) = hermitian_eigen(&h.matrix, 1e-10)?;
    let n = values.len();
    if n == 0 {
        return Err(Error::Invalid("empty matrix".into()));
    }
    let range = (values[n - 1] - values[0]).abs().max(1.0);
    let cutoff = degeneracy_tol * range;
    let ground_degeneracy = values.iter().take_while(|&&e| e - values[0] <= cutoff).count();

    let canonical = canonical_multiplet_basis(&vectors.columns(0, ground_degeneracy).into_owned());
    for (c, v) in canonical.iter().enumerate() {
        vectors.set_column(c, v);
    }
    for c in 0..n {
        let col = gauge_fix_column(&vectors.column(c).into_owned());
        vectors.set_column(c, &col);
    }
    Ok(EigenSolution { basis: h.basis.clone(), values, vectors, ground_degeneracy })
}

fn gauge_fix_column(v: &nalgebra::DVector<Complex64>) -> nalgebra::DVector<Complex64> {
    match v.iter().find(|z| z.norm() > 1e-12) {
        Some(z) => v * (z.conj() / z.norm()),
        None => v.clone(),
    }
}

fn canonical_multiplet_basis(span: &DMatrix<Complex64>) -> Vec<nalgebra::DVector<Complex64>> {
    let (n, k) = span.shape();
    let mut chosen: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(k);
    for e in 0..n {
        if chosen.len() == k {
            break;
        }
        // projection of e_e onto the multiplet: span · (row e of span)^†
        let mut w = nalgebra::DVector::from_fn(n, |r, _| {
            (0..k).map(|j| span[(r, j)] * span[(e, j)].conj()).sum::<Complex64>()
        });
        for u in &chosen {
            let overlap = u.dotc(&w);
            w -= u * overlap;
        }
        let norm = w.norm();
        if norm > 1e-6 {
            chosen.push(w / Complex64::new(norm, 0.0));
        }
    }
    chosen
}

impl EigenSolution {
    pub fn ground_energy(&self) -> f64 {
        self.values[0]
    }

    pub fn state(&self, i: usize) -> StateVector {
        let coeffs: Vec<Complex64> = self.vectors.column(i).iter().copied().collect();
        StateVector::from_sector(&self.basis, &coeffs).expect("basis and vector agree")
    }

    /// Canonical representative of the ground multiplet.
    pub fn ground_state(&self) -> StateVector {
        self.state(0)
    }

    pub fn ground_states(&self) -> Vec<StateVector> {
        (0..self.ground_degeneracy).map(|i| self.state(i)).collect()
    }

    /// Largest `||H v - E v||` over all pairs.
    pub fn max_residual(&self, h: &HamiltonianMatrix) -> f64 {
        (0..self.values.len())
            .map(|i| {
                let v = self.vectors.column(i);
                (&h.matrix * v - v * Complex64::new(self.values[i], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Translation `A -> B -> C -> A` of the trimer as a sector matrix.
pub fn trimer_translation(basis: &SectorBasis) -> Result<SectorMatrix> {
    mode_permutation_matrix(basis, &[3, 4, 5, 6, 1, 2])
}

/// The degenerate trimer ground pair in one `S_z` block, resolved by the
/// ring translation into its two chiral partners.
#[derive(Debug, Clone)]
pub struct TrimerGround {
    pub energy: f64,
    /// degeneracy of the lowest level inside the block
    pub degeneracy: usize,
    /// ground states ordered by ascending `Im` of their translation eigenvalue
    pub states: Vec<StateVector>,
    /// translation eigenvalues of `states`
    pub translation_eigenvalues: Vec<Complex64>,
}

pub fn trimer_ground_states(params: TrimerParams, twice_sz: i32) -> Result<TrimerGround> {
    let full = trimer_hamiltonian(params)?;
    let block = sz_block(&full.basis, twice_sz);
    if block.is_empty() {
        return Err(Error::Domain(format!("no states with 2Sz = {twice_sz}")));
    }
    let h = full.restrict(&block)?;
    let sol = diagonalize(&h, DEGENERACY_TOL)?;
    let k = sol.ground_degeneracy;
    let span = sol.vectors.columns(0, k).into_owned();
    let t = trimer_translation(&block)?;
    let reduced = span.adjoint() * &t.matrix * &span;
    // the translation is unitary; its anti-Hermitian part separates e^{±2πi/3}
    let skew = (&reduced - reduced.adjoint()) * Complex64::new(0.0, -0.5);
    let (_, mix) = hermitian_eigen(&skew, 1e-9)?;
    let rotated = &span * mix;
    let mut states = Vec::with_capacity(k);
    let mut eigs = Vec::with_capacity(k);
    for c in 0..k {
        let col = gauge_fix_column(&rotated.column(c).into_owned());
        let lambda = col.dotc(&(&t.matrix * &col));
        eigs.push(lambda);
        let coeffs: Vec<Complex64> = col.iter().copied().collect();
        states.push(StateVector::from_sector(&block, &coeffs)?);
    }
    Ok(TrimerGround { energy: sol.ground_energy(), degeneracy: k, states, translation_eigenvalues: eigs })
}

/// Trimer entanglement values for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrimerPoint {
    pub beta: f64,
    /// six single-mode subsets
    pub e_6: f64,
    /// three sites
    pub e_site3: f64,
    /// site A against sites BC
    pub e_bi_a_bc: f64,
    /// von Neumann entropy of site A against BC
    pub e_vn_a_bc: f64,
}

pub fn trimer_partitions() -> Result<(Partition, Partition, Partition)> {
    Ok((
        Partition::single_modes(6)?,
        Partition::sites(6)?,
        Partition::parse("1,2|3,4,5,6", 6)?,
    ))
}

pub fn trimer_point(beta: f64, state: &StateVector) -> Result<TrimerPoint> {
    let (six, sites, a_bc) = trimer_partitions()?;
    Ok(TrimerPoint {
        beta,
        e_6: geometric_entanglement(state, &six)?.entanglement,
        e_site3: geometric_entanglement(state, &sites)?.entanglement,
        e_bi_a_bc: geometric_entanglement(state, &a_bc)?.entanglement,
        e_vn_a_bc: von_neumann(state, &a_bc)?,
    })
}

/// Uniform grid of `points` values on `[start, stop]`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points)
            .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Which member of the degenerate trimer ground level to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroundChoice {
    /// `k`-th vector of the canonical multiplet basis from [`diagonalize`]
    Canonical(usize),
    /// `k`-th chiral partner from [`trimer_ground_states`]
    Chiral(usize),
}

impl Default for GroundChoice {
    fn default() -> Self {
        GroundChoice::Canonical(0)
    }
}

/// One ground state of the trimer in the `2S_z = twice_sz` block.
pub fn trimer_ground_state(params: TrimerParams, twice_sz: i32, choice: GroundChoice) -> Result<StateVector> {
    let (states, k) = match choice {
        GroundChoice::Canonical(k) => {
            let full = trimer_hamiltonian(params)?;
            let block = sz_block(&full.basis, twice_sz);
            if block.is_empty() {
                return Err(Error::Domain(format!("no states with 2Sz = {twice_sz}")));
            }
            (diagonalize(&full.restrict(&block)?, DEGENERACY_TOL)?.ground_states(), k)
        }
        GroundChoice::Chiral(k) => (trimer_ground_states(params, twice_sz)?.states, k),
    };
    let n = states.len();
    states
        .into_iter()
        .nth(k)
        .ok_or_else(|| Error::Domain(format!("ground multiplet has {n} states, asked for {k}")))
}

/// Entanglement of the chosen ground state in the `2S_z = twice_sz` block
/// across a β grid (t = 1).
pub fn trimer_sweep(betas: &[f64], twice_sz: i32, choice: GroundChoice) -> Result<Vec<TrimerPoint>> {
    betas
        .iter()
        .map(|&beta| trimer_point(beta, &trimer_ground_state(TrimerParams::new(1.0, beta)?, twice_sz, choice)?))
        .collect()
}

/// Numeric dimer entanglement of the closed-form ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimerPoint {
    pub alpha: f64,
    pub e_g: f64,
    pub e_s: f64,
    pub e_vn: f64,
    /// `1|2,3,4` bipartition
    pub e_13: f64,
}

pub fn dimer_point(alpha: f64) -> Result<DimerPoint> {
    let v = dimer_ground_state(alpha)?;
    let sites = Partition::sites(4)?;
    Ok(DimerPoint {
        alpha,
        e_g: geometric_entanglement(&v, &Partition::single_modes(4)?)?.entanglement,
        e_s: geometric_entanglement(&v, &sites)?.entanglement,
        e_vn: von_neumann(&v, &sites)?,
        e_13: geometric_entanglement(&v, &Partition::parse("1|2,3,4", 4)?)?.entanglement,
    })
}
