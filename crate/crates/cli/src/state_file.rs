//! JSON state files: `{"modes": M, "amplitudes": [{"basis": "0110", "re": x, "im": y}, ...]}`.
//! The leftmost bitstring character is mode 1.

use std::collections::BTreeSet;
use std::path::Path;

use fermient::fock::{MAX_MODES, NORM_TOL};
use fermient::measure::INPUT_NORM_TOL;
use fermient::{Complex64, StateVector};
use serde::{Deserialize, Serialize};

use crate::failure::{Failure, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub modes: usize,
    pub amplitudes: Vec<Amplitude>,
}

impl StateFile {
    pub fn read(path: &Path) -> Outcome<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Outcome<Self> {
        serde_json::from_str(text).map_err(|e| Failure::parse(format!("malformed state file: {e}")))
    }

    /// Nonzero amplitudes of `v` in ascending label order.
    pub fn from_state(v: &StateVector) -> Self {
        let m = v.modes();
        let amplitudes = v
            .support()
            .into_iter()
            .map(|label| {
                let z = v.amplitude(label);
                Amplitude { basis: format!("{label:0m$b}"), re: z.re, im: z.im }
            })
            .collect();
        Self { modes: m, amplitudes }
    }

    /// Builds the state, rejecting it if its norm is off by more than the
    /// input tolerance unless `normalize` is set.
    pub fn to_state(&self, normalize: bool) -> Outcome<StateVector> {
        let m = self.modes;
        if m == 0 || m > MAX_MODES {
            return Err(Failure::validation(format!("mode count must be in 1..={MAX_MODES}, got {m}")));
        }
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(self.amplitudes.len());
        for a in &self.amplitudes {
            if !a.basis.chars().all(|c| c == '0' || c == '1') || a.basis.is_empty() {
                return Err(Failure::parse(format!("basis {:?} is not a bitstring", a.basis)));
            }
            if a.basis.len() != m {
                return Err(Failure::validation(format!(
                    "basis {:?} has {} characters, expected {m}",
                    a.basis,
                    a.basis.len()
                )));
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Failure::validation(format!("non-finite amplitude on {:?}", a.basis)));
            }
            let label = u64::from_str_radix(&a.basis, 2).expect("checked bitstring");
            if !seen.insert(label) {
                return Err(Failure::validation(format!("basis {:?} listed twice", a.basis)));
            }
            terms.push((label, Complex64::new(a.re, a.im)));
        }
        let v = StateVector::from_terms(m, &terms)?;
        let norm = v.norm();
        if normalize {
            if norm <= NORM_TOL {
                return Err(Failure::validation("cannot normalize a zero state"));
            }
            Ok(v.normalized()?.with_detected_sector())
        } else if (norm - 1.0).abs() > INPUT_NORM_TOL {
            Err(Failure::validation(format!("state has norm {norm}; pass --normalize to rescale it")))
        } else {
            Ok(v.with_detected_sector())
        }
    }
}
