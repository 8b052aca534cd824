use fermient::fock::MAX_MODES;
use fermient::models::{dimer_point, linspace, trimer_sweep, GroundChoice};
use fermient::*;
use serde::Serialize;

use crate::args::{Command, Common, Format, Ground};
use crate::failure::{Failure, Outcome};
use crate::state_file::StateFile;

/// Derivatives at or below this magnitude are reported as vanishing.
pub const VANISH_TOL: f64 = 1e-8;

/// Rendered report of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    /// seconds spent computing, for stderr only
    pub wall_time: Option<f64>,
}

pub fn run(command: &Command, common: &Common) -> Outcome<Report> {
    let plain = |body| Ok(Report { body, wall_time: None });
    match command {
        Command::Measure { state, partition } => {
            plain(measure(&StateFile::read(state)?, partition, common.normalize, fmt(common, Format::Json))?)
        }
        Command::SweepDimer { start, stop, points } => {
            plain(sweep_dimer(*start, *stop, *points, fmt(common, Format::Csv))?)
        }
        Command::SweepTrimer { start, stop, points, twice_sz, ground } => {
            plain(sweep_trimer(*start, *stop, *points, *twice_sz, *ground, fmt(common, Format::Csv))?)
        }
        Command::Maximize { modes, particles, partition, restarts, max_iter } => {
            let clock = std::time::Instant::now();
            let config = OptConfig { restarts: *restarts, max_iter: *max_iter, seed: common.seed, ..OptConfig::default() };
            let body = maximize(*modes, *particles, partition, &config, fmt(common, Format::Json))?;
            Ok(Report { body, wall_time: Some(clock.elapsed().as_secs_f64()) })
        }
        Command::Perturb { alpha, beta, f, q, big_gamma, gamma, eta, partition, step } => {
            let params = PerturbationParams { f: *f, q: *q, big_gamma: *big_gamma, gamma: *gamma, eta: *eta };
            plain(perturb(*alpha, *beta, params, partition, *step, fmt(common, Format::Json))?)
        }
        Command::SectorDims { modes, particles } => plain(sector_dims(*modes, *particles, fmt(common, Format::Csv))?),
    }
}

fn fmt(common: &Common, default: Format) -> Format {
    common.format.unwrap_or(default)
}

/// Twelve significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn csv<R: AsRef<[String]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> Outcome<String> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    let io = |e: ::csv::Error| Failure::io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r.as_ref()).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json<T: Serialize>(value: &T) -> Outcome<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `"1,2|3,4"` rendering of a partition.
pub fn partition_label(p: &Partition) -> String {
    p.subsets()
        .iter()
        .map(|s| s.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

fn check_grid(start: f64, stop: f64, points: usize) -> Outcome<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite()) || start > stop {
        return Err(Failure::validation(format!("need finite start <= stop, got [{start}, {stop}]")));
    }
    if points < 2 {
        return Err(Failure::validation(format!("need at least 2 grid points, got {points}")));
    }
    Ok(linspace(start, stop, points))
}

#[derive(Debug, Serialize)]
struct MeasureReport {
    modes: usize,
    partition: String,
    dims: Vec<usize>,
    tensor_norm: f64,
    sep_norm: f64,
    entanglement: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    von_neumann: Option<f64>,
}

pub fn measure(file: &StateFile, spec: &str, normalize: bool, format: Format) -> Outcome<String> {
    let v = file.to_state(normalize)?;
    let p = Partition::parse(spec, v.modes())?;
    let m = geometric_entanglement(&v, &p)?;
    let vn = if p.len() == 2 { Some(von_neumann(&v, &p)?) } else { None };
    let r = MeasureReport {
        modes: v.modes(),
        partition: partition_label(&p),
        dims: p.dims().to_vec(),
        tensor_norm: m.tensor_norm,
        sep_norm: m.sep_norm,
        entanglement: m.entanglement,
        von_neumann: vn,
    };
    match format {
        Format::Json => json(&r),
        Format::Csv => {
            let vn = r.von_neumann.map(num).unwrap_or_default();
            csv(
                &["partition", "tensor_norm", "sep_norm", "E", "S_vn"],
                [[r.partition.clone(), num(r.tensor_norm), num(r.sep_norm), num(r.entanglement), vn]],
            )
        }
    }
}

pub fn sweep_dimer(start: f64, stop: f64, points: usize, format: Format) -> Outcome<String> {
    let grid = check_grid(start, stop, points)?;
    if start < 1.0 {
        return Err(Failure::validation(format!("alpha must be >= 1, got {start}")));
    }
    let rows = grid.iter().map(|&a| dimer_point(a)).collect::<fermient::Result<Vec<_>>>()?;
    match format {
        Format::Json => json(&rows),
        Format::Csv => csv(
            &["alpha", "E_g", "E_s", "E_vn", "E_13"],
            rows.iter().map(|r| [num(r.alpha), num(r.e_g), num(r.e_s), num(r.e_vn), num(r.e_13)]),
        ),
    }
}

fn ground_choice(g: Ground) -> GroundChoice {
    match g {
        Ground::Canonical => GroundChoice::Canonical(0),
        Ground::Partner => GroundChoice::Canonical(1),
        Ground::ChiralMinus => GroundChoice::Chiral(0),
        Ground::ChiralPlus => GroundChoice::Chiral(1),
    }
}

pub fn sweep_trimer(start: f64, stop: f64, points: usize, twice_sz: i32, ground: Ground, format: Format) -> Outcome<String> {
    let grid = check_grid(start, stop, points)?;
    if start < 0.0 {
        return Err(Failure::validation(format!("beta must be >= 0, got {start}")));
    }
    if twice_sz.abs() != 1 {
        return Err(Failure::validation(format!("--twice-sz must be 1 or -1, got {twice_sz}")));
    }
    let rows = trimer_sweep(&grid, twice_sz, ground_choice(ground))?;
    match format {
        Format::Json => json(&rows),
        Format::Csv => csv(
            &["beta", "E_6", "E_site3", "E_bi_A_BC", "E_vn_A_BC"],
            rows.iter().map(|r| [num(r.beta), num(r.e_6), num(r.e_site3), num(r.e_bi_a_bc), num(r.e_vn_a_bc)]),
        ),
    }
}

#[derive(Debug, Serialize)]
struct MaximizeReport<'a> {
    modes: usize,
    particles: usize,
    partition: String,
    dims: Vec<usize>,
    config: &'a OptConfig,
    best_e: f64,
    best_restart: usize,
    converged_restarts: usize,
    state: StateFile,
    restarts: &'a [fermient::optimize::RestartRecord],
}

pub fn maximize(modes: usize, particles: usize, spec: &str, config: &OptConfig, format: Format) -> Outcome<String> {
    let p = Partition::parse(spec, modes)?;
    let problem = OptProblem::new(modes, particles, p)?;
    let r = maximize_entanglement(&problem, config)?;
    match format {
        Format::Json => json(&MaximizeReport {
            modes,
            particles,
            partition: partition_label(problem.partition()),
            dims: problem.partition().dims().to_vec(),
            config,
            best_e: r.best_e,
            best_restart: r.best_restart,
            converged_restarts: r.converged_count(),
            state: StateFile::from_state(&r.best_state),
            restarts: &r.records,
        }),
        Format::Csv => csv(
            &["restart", "initial_E", "final_E", "iterations", "evaluations", "converged"],
            r.records.iter().map(|x| {
                [
                    x.index.to_string(),
                    num(x.initial_e),
                    num(x.final_e),
                    x.iterations.to_string(),
                    x.evaluations.to_string(),
                    x.converged.to_string(),
                ]
            }),
        ),
    }
}

#[derive(Debug, Serialize)]
struct Derivative {
    parameter: &'static str,
    value: f64,
    vanishes: bool,
}

#[derive(Debug, Serialize)]
struct PerturbReport {
    alpha: f64,
    beta: f64,
    params: PerturbationParams,
    partition: String,
    e0: f64,
    de_deps: f64,
    /// derivative of dE/dε with respect to each coupling
    derivatives: Vec<Derivative>,
}

pub fn perturb(alpha: f64, beta: f64, params: PerturbationParams, spec: &str, step: f64, format: Format) -> Outcome<String> {
    let s = TestStateParams::new(alpha, beta)?;
    let v = test_state(s)?;
    let p = Partition::parse(spec, 4)?;
    let d = |h: PerturbationParams| -> Outcome<f64> {
        Ok(entanglement_derivative(&v, &perturbation_hamiltonian(h)?, &p, step)?)
    };
    // dE/dε is linear in the couplings, so each partial is the response to a unit coupling
    let derivatives = PerturbationParams::default()
        .named()
        .iter()
        .enumerate()
        .map(|(k, (name, _))| {
            let value = d(PerturbationParams::unit(k))?;
            Ok(Derivative { parameter: name, value, vanishes: value.abs() <= VANISH_TOL })
        })
        .collect::<Outcome<Vec<_>>>()?;
    let r = PerturbReport {
        alpha,
        beta,
        params,
        partition: partition_label(&p),
        e0: geometric_entanglement(&v, &p)?.entanglement,
        de_deps: d(params)?,
        derivatives,
    };
    match format {
        Format::Json => json(&r),
        Format::Csv => {
            let total = ["dE/deps".to_string(), num(r.de_deps), (r.de_deps.abs() <= VANISH_TOL).to_string()];
            let rows = std::iter::once(total)
                .chain(r.derivatives.iter().map(|x| [x.parameter.to_string(), num(x.value), x.vanishes.to_string()]));
            csv(&["quantity", "value", "vanishes"], rows)
        }
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[derive(Debug, Serialize)]
struct SectorDim {
    modes: usize,
    particles: usize,
    dim: u64,
}

pub fn sector_dims(modes: usize, particles: Option<usize>, format: Format) -> Outcome<String> {
    if modes == 0 || modes > MAX_MODES {
        return Err(Failure::validation(format!("mode count must be in 1..={MAX_MODES}, got {modes}")));
    }
    let ns: Vec<usize> = match particles {
        Some(n) if n > modes => {
            return Err(Failure::validation(format!("{n} particles do not fit in {modes} modes")))
        }
        Some(n) => vec![n],
        None => (0..=modes).collect(),
    };
    let rows: Vec<SectorDim> = ns.into_iter().map(|n| SectorDim { modes, particles: n, dim: binomial(modes, n) }).collect();
    match format {
        Format::Json => json(&rows),
        Format::Csv => csv(
            &["modes", "particles", "dim"],
            rows.iter().map(|r| [r.modes.to_string(), r.particles.to_string(), r.dim.to_string()]),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
    }

    #[test]
    fn numbers_carry_twelve_significant_digits() {
        assert_eq!(num(5f64.sqrt() - 1.0), "1.23606797750e0");
        assert_eq!(num(-0.000123), "-1.23000000000e-4");
    }

    #[test]
    fn partition_round_trip() {
        let p = Partition::parse("3, 1|2,4", 4).unwrap();
        assert_eq!(partition_label(&p), "1,3|2,4");
    }
}
