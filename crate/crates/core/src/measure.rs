//! Bloch correlation tensors and the geometric entanglement measure.
//!
//! For a pure state on qudits of dimensions `d_1 ... d_m`, the full-weight
//! correlation tensor is
//!
//! ```text
//! t_{α_1 ... α_m} = Π_k (d_k / 2) · <ψ| λ_{α_1} ⊗ ... ⊗ λ_{α_m} |ψ>
//! ```
//!
//! and the measure is `E = ||t|| - Π_k sqrt(d_k (d_k - 1) / 2)`, the second
//! term being the norm attained by every product state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{SectorBasis, StateVector, ZERO};
use crate::partition::{apply_axis_sparse, group_state, reduced_density, split_matrix, DensityMatrix, GroupedState, Partition};
use crate::sugen::{generators, GeneratorSet};

/// Allowed deviation of the input norm from one.
pub const INPUT_NORM_TOL: f64 = 1e-9;
/// Largest tolerated imaginary part of an expectation value of a Hermitian product.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Entries of a correlation tensor over a chosen set of qudits, row-major in
/// the listed axis order with generator indices `0 .. d_k² - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    pub axes: Vec<usize>,
    pub shape: Vec<usize>,
    pub entries: Vec<f64>,
}

impl CorrelationTensor {
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|t| t * t).sum::<f64>().sqrt()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at generator multi-index `alpha` (0-based, one per axis).
    pub fn get(&self, alpha: &[usize]) -> f64 {
        let flat = alpha.iter().zip(&self.shape).fold(0, |acc, (a, n)| acc * n + a);
        self.entries[flat]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureResult {
    pub tensor_norm: f64,
    pub sep_norm: f64,
    pub entanglement: f64,
}

impl MeasureResult {
    fn new(tensor_norm: f64, sep_norm: f64) -> Self {
        Self { tensor_norm, sep_norm, entanglement: tensor_norm - sep_norm }
    }
}

fn check_normalized(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

fn generator_sets(dims: &[usize]) -> Vec<GeneratorSet> {
    dims.iter().map(|&d| generators(d).expect("qudit dimension is at least 2")).collect()
}

/// Correlation tensor over the qudits at 0-based positions `axes`, with the
/// remaining qudits carrying the identity. Prefactor `Π_{k in axes} d_k / 2`.
pub fn subset_tensor(g: &GroupedState, axes: &[usize]) -> Result<CorrelationTensor> {
    check_normalized(g.norm())?;
    let dims = g.partition().dims().to_vec();
    let gens = generator_sets(&dims);
    subset_tensor_with(g, axes, &dims, &gens)
}

fn subset_tensor_with(
    g: &GroupedState,
    axes: &[usize],
    dims: &[usize],
    gens: &[GeneratorSet],
) -> Result<CorrelationTensor> {
    for &a in axes {
        if a >= dims.len() {
            return Err(Error::Invalid(format!("axis {a} out of range")));
        }
    }
    let shape: Vec<usize> = axes.iter().map(|&k| dims[k] * dims[k] - 1).collect();
    let prefactor: f64 = axes.iter().map(|&k| dims[k] as f64 / 2.0).product();
    let psi = g.amplitudes();
    let mut entries = Vec::with_capacity(shape.iter().product());
    let mut buffers: Vec<Vec<Complex64>> = vec![vec![ZERO; psi.len()]; axes.len()];
    contract(psi, psi, axes, dims, gens, &mut buffers, prefactor, &mut entries)?;
    Ok(CorrelationTensor { axes: axes.to_vec(), shape, entries })
}

// Depth-first over the listed axes; buffers[0] holds this level's λ_{α} applied state.
#[allow(clippy::too_many_arguments)]
fn contract(
    psi: &[Complex64],
    current: &[Complex64],
    axes: &[usize],
    dims: &[usize],
    gens: &[GeneratorSet],
    buffers: &mut [Vec<Complex64>],
    prefactor: f64,
    out: &mut Vec<f64>,
) -> Result<()> {
    let Some((&axis, deeper)) = axes.split_first() else {
        let ev: Complex64 = psi.iter().zip(current).map(|(a, b)| a.conj() * b).sum();
        if ev.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::Numeric(format!(
                "expectation value has imaginary part {:e}",
                ev.im
            )));
        }
        out.push(prefactor * ev.re);
        return Ok(());
    };
    let (buf, rest) = buffers.split_first_mut().expect("one buffer per axis");
    for a in 0..gens[axis].len() {
        apply_axis_sparse(current, buf, dims, axis, gens[axis].sparse(a));
        contract(psi, buf, deeper, dims, gens, rest, prefactor, out)?;
    }
    Ok(())
}

/// The full-weight tensor `t_{α_1 ... α_m}` of `v` for partition `p`.
pub fn correlation_tensor(v: &StateVector, p: &Partition) -> Result<CorrelationTensor> {
    let g = group_state(v, p)?;
    correlation_tensor_grouped(&g)
}

pub fn correlation_tensor_grouped(g: &GroupedState) -> Result<CorrelationTensor> {
    let axes: Vec<usize> = (0..g.partition().len()).collect();
    subset_tensor(g, &axes)
}

/// Tensor norm of a product state: `Π_k sqrt(d_k (d_k - 1) / 2)`.
pub fn sep_norm(p: &Partition) -> f64 {
    sep_norm_dims(p.dims())
}

pub fn sep_norm_dims(dims: &[usize]) -> f64 {
    dims.iter().map(|&d| ((d * (d - 1)) as f64 / 2.0).sqrt()).product()
}

/// `E = ||t|| - ||t||_sep`, reported without clamping.
pub fn geometric_entanglement(v: &StateVector, p: &Partition) -> Result<MeasureResult> {
    let g = group_state(v, p)?;
    geometric_entanglement_grouped(&g)
}

pub fn geometric_entanglement_grouped(g: &GroupedState) -> Result<MeasureResult> {
    let t = correlation_tensor_grouped(g)?;
    Ok(MeasureResult::new(t.norm(), sep_norm(g.partition())))
}

/// Same measure evaluated through subsystem purities instead of explicit
/// tensor entries.
///
/// Summing the generator completeness relation
/// `Σ_a λ_a ⊗ λ_a = 2 SWAP - (2/d) I` over every qudit gives
/// `||t||² = Σ_S Π_{k∈S} (d_k²/2) Π_{k∉S} (-d_k/2) Tr(ρ_S²)`
/// over all subsets `S` of qudits, with `Tr(ρ_∅²) = 1`.
pub fn geometric_entanglement_by_purities(v: &StateVector, p: &Partition) -> Result<MeasureResult> {
    let g = group_state(v, p)?;
    check_normalized(g.norm())?;
    let m = p.len();
    let dims = p.dims();
    let mut sq = 0.0;
    for mask in 0u32..(1 << m) {
        let coeff = subset_coefficient(dims, mask);
        let purity = if mask == 0 || mask == (1 << m) - 1 {
            1.0
        } else {
            let keep: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
            let rest: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 0).collect();
            gram_purity(&split_matrix(&g, &keep, &rest))
        };
        sq += coeff * purity;
    }
    Ok(MeasureResult::new(sq.max(0.0).sqrt(), sep_norm(p)))
}

fn subset_coefficient(dims: &[usize], mask: u32) -> f64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| {
            let d = d as f64;
            if mask >> k & 1 == 1 {
                d * d / 2.0
            } else {
                -d / 2.0
            }
        })
        .product()
}

fn gram_purity(a: &DMatrix<Complex64>) -> f64 {
    let gram = if a.nrows() <= a.ncols() { a * a.adjoint() } else { a.adjoint() * a };
    gram.iter().map(|z| z.norm_sqr()).sum()
}

/// Precomputed evaluator of `||t||` for states restricted to one sector.
///
/// Holds, for each proper subsystem subset, where every sector basis state
/// lands in the reshaped amplitude matrix, so evaluating the norm needs only
/// the sector coefficients.
#[derive(Debug, Clone)]
pub struct SectorNormPlan {
    dim: usize,
    sep: f64,
    constant: f64,
    terms: Vec<PlanTerm>,
}

#[derive(Debug, Clone)]
struct PlanTerm {
    coeff: f64,
    rows: usize,
    // (row, col) per sector basis state, with rows <= cols
    placement: Vec<(usize, usize)>,
    // basis-state indices grouped by column
    by_col: Vec<Vec<usize>>,
}

impl SectorNormPlan {
    pub fn new(p: &Partition, basis: &SectorBasis) -> Result<Self> {
        if p.modes() != basis.modes() {
            return Err(Error::ModeMismatch { expected: p.modes(), found: basis.modes() });
        }
        let m = p.len();
        let dims = p.dims();
        let strides = p.strides();
        let full = (1u32 << m) - 1;
        let constant = subset_coefficient(dims, 0) + subset_coefficient(dims, full);
        let mut terms = Vec::new();
        for mask in 1..full {
            // Tr(ρ_S²) = Tr(ρ_{S^c}²): fold each complementary pair into one term
            let comp = full ^ mask;
            if comp < mask {
                continue;
            }
            let coeff = subset_coefficient(dims, mask) + subset_coefficient(dims, comp);
            if coeff == 0.0 {
                continue;
            }
            let (a, b): (Vec<usize>, Vec<usize>) = (0..m).partition(|k| mask >> k & 1 == 1);
            let da: usize = a.iter().map(|&k| dims[k]).product();
            let db: usize = b.iter().map(|&k| dims[k]).product();
            let (keep, rest, rows, cols) = if da <= db { (a, b, da, db) } else { (b, a, db, da) };
            let mut placement = Vec::with_capacity(basis.len());
            let mut by_col = vec![Vec::new(); cols];
            for (i, s) in basis.states().iter().enumerate() {
                let mut flat = p.grouped_index(s.label());
                let mut idx = vec![0usize; m];
                for k in 0..m {
                    idx[k] = flat / strides[k];
                    flat %= strides[k];
                }
                let r = keep.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
                let c = rest.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
                placement.push((r, c));
                by_col[c].push(i);
            }
            by_col.retain(|v| !v.is_empty());
            terms.push(PlanTerm { coeff, rows, placement, by_col });
        }
        Ok(Self { dim: basis.len(), sep: sep_norm(p), constant, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sep_norm(&self) -> f64 {
        self.sep
    }

    /// `||t||` for normalized sector coefficients.
    pub fn tensor_norm(&self, coeffs: &[Complex64]) -> f64 {
        debug_assert_eq!(coeffs.len(), self.dim);
        let mut sq = self.constant;
        let mut gram = Vec::new();
        for term in &self.terms {
            gram.clear();
            gram.resize(term.rows * term.rows, ZERO);
            for col in &term.by_col {
                for &i in col {
                    let (ri, _) = term.placement[i];
                    let ci = coeffs[i];
                    for &j in col {
                        let (rj, _) = term.placement[j];
                        gram[ri * term.rows + rj] += ci * coeffs[j].conj();
                    }
                }
            }
            let purity: f64 = gram.iter().map(|z| z.norm_sqr()).sum();
            sq += term.coeff * purity;
        }
        sq.max(0.0).sqrt()
    }

    pub fn entanglement(&self, coeffs: &[Complex64]) -> f64 {
        self.tensor_norm(coeffs) - self.sep
    }
}

/// Von Neumann entropy (base 2) of the first subsystem of a bipartition.
pub fn von_neumann(v: &StateVector, p: &Partition) -> Result<f64> {
    if p.len() != 2 {
        return Err(Error::Invalid(format!(
            "von Neumann entropy needs a bipartition, got {} subsets",
            p.len()
        )));
    }
    let g = group_state(v, p)?;
    check_normalized(g.norm())?;
    Ok(reduced_density(&g, &[0])?.entropy())
}

/// Reassembles `ρ = |ψ><ψ|` from its full Bloch expansion (identity term,
/// every Bloch vector, and every correlation tensor), expressed in the
/// qubit-space label basis.
pub fn reconstruct_density(v: &StateVector, p: &Partition) -> Result<DensityMatrix> {
    let g = group_state(v, p)?;
    check_normalized(g.norm())?;
    let m = p.len();
    let dims = p.dims().to_vec();
    let gens = generator_sets(&dims);
    let total = p.total_dim();
    let mut rho_grouped = DMatrix::from_element(total, total, ZERO);

    for mask in 0u32..(1 << m) {
        let axes: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        let tensor = if axes.is_empty() {
            None
        } else {
            Some(subset_tensor_with(&g, &axes, &dims, &gens)?)
        };
        let shape: Vec<usize> = axes.iter().map(|&k| gens[k].len()).collect();
        let count: usize = shape.iter().product();
        let mut alpha = vec![0usize; axes.len()];
        for flat in 0..count {
            let mut f = flat;
            for j in (0..axes.len()).rev() {
                alpha[j] = f % shape[j];
                f /= shape[j];
            }
            let coeff = tensor.as_ref().map_or(1.0, |t| t.entries[flat]);
            if coeff == 0.0 {
                continue;
            }
            let mut op = DMatrix::from_element(1, 1, Complex64::new(coeff, 0.0));
            for (k, &d) in dims.iter().enumerate() {
                let factor = match axes.iter().position(|&a| a == k) {
                    Some(j) => gens[k].get(alpha[j]).clone(),
                    None => DMatrix::identity(d, d),
                };
                op = op.kronecker(&factor);
            }
            rho_grouped += op;
        }
    }
    rho_grouped /= Complex64::new(total as f64, 0.0);

    // back to label ordering
    let idx: Vec<usize> = (0..total as u64).map(|l| p.grouped_index(l)).collect();
    let rho = DMatrix::from_fn(total, total, |r, c| rho_grouped[(idx[r], idx[c])]);
    DensityMatrix::new(rho, 1e-9)
}

/// Outer product `|v><v|` in the label basis.
pub fn pure_density(v: &StateVector) -> DMatrix<Complex64> {
    let a = v.amplitudes();
    DMatrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj())
}
