//! Four-mode test state, a number-conserving perturbation, and the response
//! of the entanglement to a short evolution under it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{enumerate_sector, StateVector};
use crate::linalg::unitary_propagator;
use crate::measure::geometric_entanglement;
use crate::operator::{FermionOperator, HamiltonianMatrix};
use crate::partition::Partition;

/// Default central-difference step for [`entanglement_derivative`].
pub const DEFAULT_STEP: f64 = 1e-4;
/// Tolerance on `α² + β² = 2`.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Real `(α, β)` with `α² + β² = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestStateParams {
    pub alpha: f64,
    pub beta: f64,
}

impl TestStateParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let r = alpha * alpha + beta * beta - 2.0;
        if !r.is_finite() || r.abs() > CONSTRAINT_TOL {
            return Err(Error::Domain(format!(
                "alpha^2 + beta^2 must equal 2 (got {})",
                alpha * alpha + beta * beta
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Point on the constraint circle at angle `theta`: `α = √2 cos θ`, `β = √2 sin θ`.
    pub fn on_circle(theta: f64) -> Self {
        let r = std::f64::consts::SQRT_2;
        Self { alpha: r * theta.cos(), beta: r * theta.sin() }
    }
}

impl Default for TestStateParams {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }
}

/// `(iα|1100> + |1001> + |0110> + |0011> + β|0101> + |1010>) / √6`.
pub fn test_state(p: TestStateParams) -> Result<StateVector> {
    TestStateParams::new(p.alpha, p.beta)?;
    let s = 1.0 / 6f64.sqrt();
    let r = |x: f64| Complex64::new(s * x, 0.0);
    let terms = [
        (0b1100, Complex64::new(0.0, s * p.alpha)),
        (0b1001, r(1.0)),
        (0b0110, r(1.0)),
        (0b0011, r(1.0)),
        (0b0101, r(p.beta)),
        (0b1010, r(1.0)),
    ];
    Ok(StateVector::from_terms(4, &terms)?.with_detected_sector())
}

/// Couplings of `f(a†1 a4 + h.c.) + q n1 n2 + Γ n1 + γ n3 + η(a†1 a2 + h.c.)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PerturbationParams {
    /// hop between modes 1 and 4 (different sites)
    pub f: f64,
    /// density-density on modes 1, 2
    pub q: f64,
    /// potential on mode 1 (Γ)
    pub big_gamma: f64,
    /// potential on mode 3 (γ)
    pub gamma: f64,
    /// hop between modes 1 and 2 (same site)
    pub eta: f64,
}

impl PerturbationParams {
    pub fn only_f(f: f64) -> Self {
        Self { f, ..Self::default() }
    }

    /// Names and values in the fixed order `f, q, Gamma, gamma, eta`.
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [("f", self.f), ("q", self.q), ("Gamma", self.big_gamma), ("gamma", self.gamma), ("eta", self.eta)]
    }

    /// Unit coupling on the `k`-th parameter of [`Self::named`].
    pub fn unit(k: usize) -> Self {
        let mut p = Self::default();
        match k {
            0 => p.f = 1.0,
            1 => p.q = 1.0,
            2 => p.big_gamma = 1.0,
            3 => p.gamma = 1.0,
            _ => p.eta = 1.0,
        }
        p
    }
}

pub fn perturbation_operator(p: PerturbationParams) -> Result<FermionOperator> {
    let mut h = FermionOperator::zero(4);
    h.add_hop_hc(p.f, 1, 4)?;
    h.add_density_density(p.q, 1, 2)?;
    h.add_number(p.big_gamma, 1)?;
    h.add_number(p.gamma, 3)?;
    h.add_hop_hc(p.eta, 1, 2)?;
    Ok(h)
}

/// The perturbation on the four-mode, two-particle sector.
pub fn perturbation_hamiltonian(p: PerturbationParams) -> Result<HamiltonianMatrix> {
    perturbation_operator(p)?.sector_matrix(&enumerate_sector(4, 2)?, false)
}

/// `|ψ> - iεH|ψ>`, renormalized.
pub fn first_order_evolve(v: &StateVector, h: &HamiltonianMatrix, eps: f64) -> Result<StateVector> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("epsilon must be >= 0, got {eps}")));
    }
    let hv = h.apply(v)?;
    (v + &(Complex64::new(0.0, -eps) * &hv)).normalized()
}

/// `exp(-iεH)|ψ>` on the sector of `h`.
pub fn exact_evolve(v: &StateVector, h: &HamiltonianMatrix, eps: f64) -> Result<StateVector> {
    let u = unitary_propagator(&h.matrix, eps)?;
    let c = v.sector_coefficients(&h.basis);
    let out: Vec<Complex64> =
        (0..c.len()).map(|r| (0..c.len()).map(|k| u[(r, k)] * c[k]).sum()).collect();
    StateVector::from_sector(&h.basis, &out)
}

/// Central-difference `dE/dε` at `ε = 0` under exact evolution.
pub fn entanglement_derivative(v: &StateVector, h: &HamiltonianMatrix, p: &Partition, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be > 0, got {step}")));
    }
    let e = |eps: f64| -> Result<f64> { Ok(geometric_entanglement(&exact_evolve(v, h, eps)?, p)?.entanglement) };
    Ok((e(step)? - e(-step)?) / (2.0 * step))
}

/// Zeroth and first-order coefficients `(E0, E1)` of an expansion `E0 + E1 ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expansion {
    pub e0: f64,
    pub e1: f64,
}

impl Expansion {
    pub fn at(&self, eps: f64) -> f64 {
        self.e0 + self.e1 * eps
    }
}

/// Closed-form first-order expansion of the four single-mode entanglement of
/// the evolved test state.
pub fn expansion_oracle_eg(s: TestStateParams, h: PerturbationParams) -> Expansion {
    let (a, b) = (s.alpha, s.beta);
    let (a2, b2) = (a * a, b * b);
    let root = (88.0 + 64.0 * a2 + 32.0 * b + 64.0 * b2 + 10.0 * a2 * b2 + b2 * b2).sqrt();
    let num = 4.0 * h.f * a - 2.0 * h.q * a * (1.0 + b) + h.f * a * b * (a2 - b2) + 4.0 * a * h.eta * (1.0 + b);
    Expansion { e0: (root - 6.0) / 6.0, e1: -4.0 * num / (root - 6.0) }
}

/// Closed-form first-order expansion of the site-partition entanglement of
/// the evolved test state.
pub fn expansion_oracle_es(s: TestStateParams, h: PerturbationParams) -> Expansion {
    let (a, b) = (s.alpha, s.beta);
    let (a2, b2) = (a * a, b * b);
    let root = (208.0 + 136.0 * a2 + 9.0 * a2 * a2 - 32.0 * b + 104.0 * b2 + 34.0 * a2 * b2 + 9.0 * b2 * b2).sqrt();
    let num = -h.f * a + h.f * a * b * (a2 - b2 - 2.0);
    Expansion { e0: (root - 18.0) / 3.0, e1: -16.0 * num / (3.0 * root) }
}
