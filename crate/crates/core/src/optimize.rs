//! Multi-start maximization of the entanglement over one particle-number sector.
//!
//! Each restart draws a random normalized state and runs a Hooke–Jeeves
//! direct search on the real and imaginary parts of the sector coefficients.
//! Iterates are renormalized and the global phase is pinned on the largest
//! coefficient after every accepted move. The random stream of restart `k`
//! is the ChaCha stream `k` of the master seed, so serial and parallel runs
//! agree exactly.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{enumerate_sector, SectorBasis, StateVector};
use crate::linalg::random_unit_vector;
use crate::measure::SectorNormPlan;
use crate::partition::Partition;

#[derive(Debug, Clone)]
pub struct OptProblem {
    basis: SectorBasis,
    partition: Partition,
}

impl OptProblem {
    pub fn new(modes: usize, particles: usize, partition: Partition) -> Result<Self> {
        if partition.modes() != modes {
            return Err(Error::ModeMismatch { expected: modes, found: partition.modes() });
        }
        let basis = enumerate_sector(modes, particles)?;
        if basis.len() < 2 {
            return Err(Error::Domain(format!("sector ({modes}, {particles}) has dimension {}", basis.len())));
        }
        Ok(Self { basis, partition })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptConfig {
    pub restarts: usize,
    /// pattern-search iterations per restart
    pub max_iter: usize,
    /// stop when a full sweep improves E by less than this at the smallest step
    pub tol: f64,
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
    pub parallel: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self { restarts: 200, max_iter: 2000, tol: 1e-10, seed: 0, initial_step: 0.25, min_step: 1e-7, parallel: true }
    }
}

impl OptConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartRecord {
    pub index: usize,
    pub initial_e: f64,
    pub final_e: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_e: f64,
    pub best_restart: usize,
    pub best_state: StateVector,
    pub records: Vec<RestartRecord>,
}

impl OptResult {
    /// Best value after the first `k` restarts, for each `k`.
    pub fn best_so_far(&self) -> Vec<f64> {
        self.records
            .iter()
            .scan(f64::NEG_INFINITY, |best, r| {
                *best = best.max(r.final_e);
                Some(*best)
            })
            .collect()
    }

    pub fn converged_count(&self) -> usize {
        self.records.iter().filter(|r| r.converged).count()
    }
}

struct Search<'a> {
    plan: &'a SectorNormPlan,
    n: usize,
    evaluations: usize,
    scratch: Vec<Complex64>,
}

impl Search<'_> {
    fn value(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        for k in 0..self.n {
            self.scratch[k] = Complex64::new(x[2 * k] / norm, x[2 * k + 1] / norm);
        }
        self.plan.entanglement(&self.scratch)
    }

    /// Renormalizes and rotates the global phase so the largest coefficient is
    /// real positive; returns its index.
    fn canonicalize(&self, x: &mut [f64]) -> usize {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let pin = (0..self.n)
            .max_by(|&a, &b| {
                let ma = x[2 * a].hypot(x[2 * a + 1]);
                let mb = x[2 * b].hypot(x[2 * b + 1]);
                ma.total_cmp(&mb).then(b.cmp(&a))
            })
            .unwrap_or(0);
        let z = Complex64::new(x[2 * pin], x[2 * pin + 1]);
        let rot = z.conj() / (z.norm() * norm);
        for k in 0..self.n {
            let c = Complex64::new(x[2 * k], x[2 * k + 1]) * rot;
            x[2 * k] = c.re;
            x[2 * k + 1] = c.im;
        }
        x[2 * pin + 1] = 0.0;
        pin
    }

    /// Coordinate exploration around `x` (in place); returns the new value.
    fn explore(&mut self, x: &mut [f64], mut fx: f64, step: f64, pin: usize) -> f64 {
        for i in 0..x.len() {
            if i == 2 * pin + 1 {
                continue;
            }
            let orig = x[i];
            x[i] = orig + step;
            let up = self.value(x);
            if up > fx {
                fx = up;
                continue;
            }
            x[i] = orig - step;
            let down = self.value(x);
            if down > fx {
                fx = down;
                continue;
            }
            x[i] = orig;
        }
        fx
    }

    fn run(&mut self, start: Vec<f64>, index: usize, cfg: &OptConfig) -> (RestartRecord, Vec<f64>) {
        let mut base = start;
        let mut pin = self.canonicalize(&mut base);
        let mut f_base = self.value(&base);
        let initial_e = f_base;
        let mut step = cfg.initial_step;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.max_iter {
            iterations += 1;
            let mut trial = base.clone();
            let f_trial = self.explore(&mut trial, f_base, step, pin);
            if f_trial > f_base {
                // pattern moves along the successful direction while they keep paying off
                let mut prev = base;
                let mut cur = trial;
                let mut f_cur = f_trial;
                while iterations < cfg.max_iter {
                    iterations += 1;
                    let mut jump: Vec<f64> = cur.iter().zip(&prev).map(|(c, p)| 2.0 * c - p).collect();
                    let f_jump = self.value(&jump);
                    let f_next = self.explore(&mut jump, f_jump, step, pin);
                    if f_next > f_cur {
                        prev = cur;
                        cur = jump;
                        f_cur = f_next;
                    } else {
                        break;
                    }
                }
                let gain = f_cur - f_base;
                base = cur;
                pin = self.canonicalize(&mut base);
                f_base = self.value(&base);
                if step <= cfg.min_step && gain < cfg.tol {
                    converged = true;
                    break;
                }
            } else if step <= cfg.min_step {
                converged = true;
                break;
            } else {
                step = (step * 0.5).max(cfg.min_step);
            }
        }
        let rec = RestartRecord { index, initial_e, final_e: f_base, iterations, evaluations: self.evaluations, converged };
        (rec, base)
    }
}

fn start_point(n: usize, seed: u64, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    random_unit_vector(n, &mut rng).into_iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Multi-start maximization of the entanglement of `problem` over normalized
/// states of its sector.
pub fn maximize_entanglement(problem: &OptProblem, config: &OptConfig) -> Result<OptResult> {
    if config.restarts == 0 {
        return Err(Error::Invalid("restarts must be >= 1".into()));
    }
    if !(config.initial_step > 0.0 && config.min_step > 0.0 && config.min_step <= config.initial_step) {
        return Err(Error::Invalid("need 0 < min_step <= initial_step".into()));
    }
    let plan = SectorNormPlan::new(&problem.partition, &problem.basis)?;
    let n = problem.basis.len();
    let one = |index: usize| {
        let mut s = Search { plan: &plan, n, evaluations: 0, scratch: vec![Complex64::new(0.0, 0.0); n] };
        s.run(start_point(n, config.seed, index), index, config)
    };
    let runs: Vec<(RestartRecord, Vec<f64>)> = if config.parallel {
        (0..config.restarts).into_par_iter().map(one).collect()
    } else {
        (0..config.restarts).map(one).collect()
    };
    let mut best = 0;
    for (i, (r, _)) in runs.iter().enumerate() {
        if r.final_e > runs[best].0.final_e {
            best = i;
        }
    }
    let x = &runs[best].1;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let coeffs: Vec<Complex64> = (0..n).map(|k| Complex64::new(x[2 * k] / norm, x[2 * k + 1] / norm)).collect();
    let best_state = StateVector::from_sector(&problem.basis, &coeffs)?.gauge_fixed(1e-12);
    let best_e = plan.entanglement(&best_state.sector_coefficients(&problem.basis));
    let records = runs.into_iter().map(|(r, _)| r).collect();
    Ok(OptResult { best_e, best_restart: best, best_state, records })
}
