//! Mode partitions, the qudit view of a state, and reduced density matrices.
//!
//! A partition splits the modes `1..=2L` into ordered, disjoint, nonempty
//! subsets. Subset `k` with `n_k` modes is a qudit of dimension `d_k = 2^{n_k}`
//! whose local index is the subset's occupation bits read in ascending mode
//! order (lowest mode most significant). Non-contiguous subsets are gathered by
//! permuting qubit factors; no fermionic reordering signs are introduced.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{StateVector, ZERO};

/// Tolerance on negative eigenvalues accepted as roundoff in a density matrix.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    modes: usize,
    subsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
    /// flat grouped index for every qubit-space label
    grouped_index: Vec<usize>,
}

impl Partition {
    /// Validates `subsets` (1-based mode indices) as a partition of `1..=modes`.
    pub fn new(modes: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if modes == 0 || modes > crate::fock::MAX_MODES {
            return Err(Error::Invalid(format!("unsupported mode count {modes}")));
        }
        if subsets.len() < 2 {
            return Err(Error::Invalid(format!(
                "a partition needs at least two subsets, got {}",
                subsets.len()
            )));
        }
        let mut seen = vec![false; modes + 1];
        let mut sorted = Vec::with_capacity(subsets.len());
        for (k, subset) in subsets.into_iter().enumerate() {
            if subset.is_empty() {
                return Err(Error::Invalid(format!("subset {} is empty", k + 1)));
            }
            let mut s = subset;
            s.sort_unstable();
            for &m in &s {
                if m == 0 || m > modes {
                    return Err(Error::Invalid(format!(
                        "mode {m} in subset {} is outside 1..={modes}",
                        k + 1
                    )));
                }
                if seen[m] {
                    return Err(Error::Invalid(format!("mode {m} appears in more than one subset")));
                }
                seen[m] = true;
            }
            sorted.push(s);
        }
        if let Some(gap) = (1..=modes).find(|&m| !seen[m]) {
            return Err(Error::Invalid(format!("mode {gap} is not covered by any subset")));
        }
        let dims: Vec<usize> = sorted.iter().map(|s| 1usize << s.len()).collect();

        let strides = strides(&dims);
        let grouped_index = (0u64..1u64 << modes)
            .map(|label| {
                sorted
                    .iter()
                    .zip(&strides)
                    .map(|(subset, stride)| {
                        let local = subset.iter().fold(0usize, |acc, &m| {
                            (acc << 1) | ((label >> (modes - m)) & 1) as usize
                        });
                        local * stride
                    })
                    .sum()
            })
            .collect();
        Ok(Self { modes, subsets: sorted, dims, grouped_index })
    }

    /// Parses the `"1,2|3,4"` grammar: comma-separated 1-based modes, subsets split by `|`.
    pub fn parse(spec: &str, modes: usize) -> Result<Self> {
        let subsets = spec
            .split('|')
            .map(|part| {
                part.split(',')
                    .map(|tok| {
                        let tok = tok.trim();
                        tok.parse::<usize>()
                            .map_err(|_| Error::Invalid(format!("bad mode index {tok:?} in {spec:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(modes, subsets)
    }

    /// Every mode in its own subset.
    pub fn single_modes(modes: usize) -> Result<Self> {
        Self::new(modes, (1..=modes).map(|m| vec![m]).collect())
    }

    /// Consecutive pairs of modes, one subset per site.
    pub fn sites(modes: usize) -> Result<Self> {
        if !modes.is_multiple_of(2) {
            return Err(Error::Invalid(format!("site partition needs an even mode count, got {modes}")));
        }
        Self::new(modes, (0..modes / 2).map(|s| vec![2 * s + 1, 2 * s + 2]).collect())
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of subsets `m`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        1 << self.modes
    }

    pub fn grouped_index(&self, label: u64) -> usize {
        self.grouped_index[label as usize]
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .subsets
            .iter()
            .map(|s| s.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// A state written as an `m`-index tensor over the qudits of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedState {
    partition: Partition,
    amps: Vec<Complex64>,
}

/// Regroups a qubit-space state into the qudit tensor of `p`.
pub fn group_state(v: &StateVector, p: &Partition) -> Result<GroupedState> {
    if v.modes() != p.modes {
        return Err(Error::ModeMismatch { expected: p.modes, found: v.modes() });
    }
    let mut amps = vec![ZERO; p.total_dim()];
    for (label, &a) in v.amplitudes().iter().enumerate() {
        amps[p.grouped_index[label]] = a;
    }
    Ok(GroupedState { partition: p.clone(), amps })
}

impl GroupedState {
    pub fn from_amplitudes(partition: &Partition, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != partition.total_dim() {
            return Err(Error::Invalid(format!(
                "expected {} amplitudes, got {}",
                partition.total_dim(),
                amps.len()
            )));
        }
        Ok(Self { partition: partition.clone(), amps })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude at the multi-index `(i_1, ..., i_m)`.
    pub fn at(&self, index: &[usize]) -> Complex64 {
        let strides = self.partition.strides();
        let flat: usize = index.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.amps[flat]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &GroupedState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Back to the qubit-space labelling.
    pub fn to_state_vector(&self) -> StateVector {
        let mut out = vec![ZERO; self.amps.len()];
        for (label, slot) in out.iter_mut().enumerate() {
            *slot = self.amps[self.partition.grouped_index[label]];
        }
        StateVector::from_amplitudes(self.partition.modes, out)
            .expect("partition mode count is valid")
    }

    /// Applies a `d_k × d_k` operator to qudit `axis` (0-based).
    pub fn apply_on_axis(&self, axis: usize, op: &DMatrix<Complex64>) -> GroupedState {
        let d = self.partition.dims[axis];
        assert_eq!(op.nrows(), d, "operator dimension mismatch");
        let mut out = vec![ZERO; self.amps.len()];
        apply_axis_dense(&self.amps, &mut out, &self.partition.dims, axis, op);
        GroupedState { partition: self.partition.clone(), amps: out }
    }
}

pub(crate) fn apply_axis_dense(
    src: &[Complex64],
    dst: &mut [Complex64],
    dims: &[usize],
    axis: usize,
    op: &DMatrix<Complex64>,
) {
    let d = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer = src.len() / (d * inner);
    for o in 0..outer {
        for i in 0..inner {
            let base = o * d * inner + i;
            for r in 0..d {
                let mut acc = ZERO;
                for c in 0..d {
                    let w = op[(r, c)];
                    if w != ZERO {
                        acc += w * src[base + c * inner];
                    }
                }
                dst[base + r * inner] = acc;
            }
        }
    }
}

/// Sparse variant used by tensor contraction: `dst = op ⊗ I` on `axis`.
pub(crate) fn apply_axis_sparse(
    src: &[Complex64],
    dst: &mut [Complex64],
    dims: &[usize],
    axis: usize,
    entries: &[(usize, usize, Complex64)],
) {
    let d = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer = src.len() / (d * inner);
    dst.iter_mut().for_each(|x| *x = ZERO);
    for o in 0..outer {
        let block = o * d * inner;
        for &(r, c, w) in entries {
            let (ro, co) = (block + r * inner, block + c * inner);
            for i in 0..inner {
                dst[ro + i] += w * src[co + i];
            }
        }
    }
}

/// A density matrix on one or more qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness.
    pub fn new(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Invalid("density matrix must be square".into()));
        }
        let rho = Self { matrix };
        let herm = rho.hermiticity_error();
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::Numeric(format!("trace {tr} differs from 1")));
        }
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::Numeric(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `-Tr(ρ log₂ ρ)`, ignoring eigenvalues below `1e-14`.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&p| p > 1e-14)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DMatrix<Complex64>) -> f64 {
        self.matrix.iter().zip(other.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Partial trace of `|ψ><ψ|` keeping the qudits at 0-based positions `keep`
/// (in the listed order) and tracing out the rest.
pub fn reduced_density(g: &GroupedState, keep: &[usize]) -> Result<DensityMatrix> {
    let p = &g.partition;
    let m = p.len();
    if keep.is_empty() {
        return Err(Error::Invalid("no subsystem kept".into()));
    }
    let mut kept = vec![false; m];
    for &k in keep {
        if k >= m {
            return Err(Error::Invalid(format!("subsystem position {k} out of range 0..{m}")));
        }
        if kept[k] {
            return Err(Error::Invalid(format!("subsystem position {k} listed twice")));
        }
        kept[k] = true;
    }
    let rest: Vec<usize> = (0..m).filter(|k| !kept[*k]).collect();
    let a = split_matrix(g, keep, &rest);
    let rho = &a * a.adjoint();
    DensityMatrix::new(rho, 1e-9)
}

/// Reshapes the grouped amplitudes into a `(Π_keep d) × (Π_rest d)` matrix.
pub(crate) fn split_matrix(g: &GroupedState, keep: &[usize], rest: &[usize]) -> DMatrix<Complex64> {
    let dims = g.partition.dims();
    let strides = g.partition.strides();
    let rows: usize = keep.iter().map(|&k| dims[k]).product();
    let cols: usize = rest.iter().map(|&k| dims[k]).product();
    let mut a = DMatrix::from_element(rows, cols, ZERO);
    let mut idx = vec![0usize; dims.len()];
    for (flat, &amp) in g.amps.iter().enumerate() {
        let mut f = flat;
        for k in 0..dims.len() {
            idx[k] = f / strides[k];
            f %= strides[k];
        }
        let r = keep.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
        let c = rest.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
        a[(r, c)] = amp;
    }
    a
}
