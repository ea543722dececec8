//! Worked examples and the depolarizing-chain sweeps over (p, η).

use crate::channel::QuantumChannel;
use crate::entropy::{hermitian_entropy, mutual_information};
use crate::error::{Error, Result};
use crate::linalg::{re, ComplexMatrix};
use crate::pdm::{multi_time_pdm, star_product, Pdm};
use crate::state::DensityMatrix;

pub const EXAMPLE_NAMES: [&str; 8] = [
    "dual-state",
    "qubit-two-times",
    "discard-prepare",
    "decoherence",
    "multi-time-a",
    "multi-time-b",
    "multi-time-c",
    "multi-time-d",
];

/// The entangled two-qubit state that is also a two-time PDM.
pub fn dual_state_matrix() -> ComplexMatrix {
    let (a, b, c, d) = (13.0 / 24.0, 5.0 / 24.0, -1.0 / 6.0, 1.0 / 24.0);
    ComplexMatrix::from_real(
        4,
        4,
        &[a, 0.0, 0.0, 0.0, 0.0, b, c, 0.0, 0.0, c, b, 0.0, 0.0, 0.0, 0.0, d],
    )
    .expect("4x4")
}

/// One channel position in a sweep: fixed, or depolarizing with the swept η.
#[derive(Clone, Debug)]
pub enum SweepSlot {
    Fixed(QuantumChannel),
    Depolarizing,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub slots: Vec<SweepSlot>,
    /// Number of leading time slots on the first side of the cut.
    pub cut: usize,
}

impl SweepConfig {
    pub fn channels(&self, eta: f64) -> Result<Vec<QuantumChannel>> {
        self.slots
            .iter()
            .map(|s| match s {
                SweepSlot::Fixed(ch) => Ok(ch.clone()),
                SweepSlot::Depolarizing => QuantumChannel::depolarizing(eta),
            })
            .collect()
    }

    /// I across the cut for the initial state diag(p, 1−p).
    pub fn information(&self, p: f64, eta: f64) -> Result<f64> {
        let rho = DensityMatrix::diagonal(&[p, 1.0 - p])?;
        mutual_information(&multi_time_pdm(&rho, &self.channels(eta)?)?, self.cut)
    }
}

/// The four depolarizing-chain configurations, labelled a–d:
/// (a) 𝓔_η, 𝓔_η with cut 1; (b) 𝓔_η, id with cut 1;
/// (c) id, 𝓔_η, id with cut 2; (d) 𝓔_η, id, 𝓔_η with cut 2.
pub fn figure_config(label: char) -> Result<SweepConfig> {
    use SweepSlot::{Depolarizing as E, Fixed};
    let id = || Fixed(QuantumChannel::identity(1));
    let (slots, cut) = match label {
        'a' => (vec![E, E], 1),
        'b' => (vec![E, id()], 1),
        'c' => (vec![id(), E, id()], 2),
        'd' => (vec![E, id(), E], 2),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown sweep configuration '{other}' (expected a, b, c or d)"
            )))
        }
    };
    Ok(SweepConfig { slots, cut })
}

/// n equally spaced points on [0, 1].
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

pub const DEFAULT_GRID_POINTS: usize = 51;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub p: f64,
    pub eta: f64,
    pub mi: f64,
}

/// Rows ordered with p outer and η inner.
pub fn sweep(config: &SweepConfig, p_grid: &[f64], eta_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if p_grid.is_empty() || eta_grid.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be non-empty".into()));
    }
    if let Some(x) = p_grid.iter().chain(eta_grid).find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidParameter(format!("grid value {x} outside [0, 1]")));
    }
    let mut out = Vec::with_capacity(p_grid.len() * eta_grid.len());
    for &p in p_grid {
        for &eta in eta_grid {
            out.push(SweepPoint {
                p,
                eta,
                mi: config.information(p, eta)?,
            });
        }
    }
    Ok(out)
}

/// The extremal claims for a sweep: the maximum sits at (p, η) = (½, 1)
/// and the information vanishes along η = 0.
#[derive(Clone, Debug)]
pub struct ExtremaCheck {
    pub max: SweepPoint,
    /// Value at (½, 1), if that point is on the grid.
    pub value_at_center: Option<f64>,
    /// Largest |I| along η = 0.
    pub eta0_max_abs: f64,
}

impl ExtremaCheck {
    /// Ties with the grid maximum (within 1e-9) count as the maximum.
    pub fn max_at_center(&self) -> bool {
        self.value_at_center.is_some_and(|v| v >= self.max.mi - 1e-9)
    }

    pub fn zero_at_eta0(&self) -> bool {
        self.eta0_max_abs <= 1e-9
    }
}

pub fn check_extrema(points: &[SweepPoint]) -> ExtremaCheck {
    let max = *points
        .iter()
        .max_by(|a, b| a.mi.total_cmp(&b.mi))
        .expect("non-empty sweep");
    let value_at_center = points
        .iter()
        .find(|pt| (pt.p - 0.5).abs() < 1e-12 && (pt.eta - 1.0).abs() < 1e-12)
        .map(|pt| pt.mi);
    let eta0_max_abs = points
        .iter()
        .filter(|pt| pt.eta.abs() < 1e-12)
        .map(|pt| pt.mi.abs())
        .fold(0.0, f64::max);
    ExtremaCheck {
        max,
        value_at_center,
        eta0_max_abs,
    }
}

#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub name: String,
    pub spectrum: Vec<f64>,
    /// Entropies of the two sides of the cut.
    pub marginal_entropies: (f64, f64),
    pub mutual_information: f64,
    /// Reference value and tolerance, when the example has one.
    pub expected: Option<(f64, f64)>,
    /// Additional named checks with their outcome.
    pub checks: Vec<(String, bool)>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        let value_ok = self
            .expected
            .is_none_or(|(v, tol)| (self.mutual_information - v).abs() <= tol);
        value_ok && self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn report(name: &str, r: &Pdm, cut: usize, expected: Option<(f64, f64)>) -> Result<ExampleReport> {
    let n = r.slots();
    let first: Vec<usize> = (0..cut).collect();
    let second: Vec<usize> = (cut..n).collect();
    Ok(ExampleReport {
        name: name.to_string(),
        spectrum: r.eigenvalues(),
        marginal_entropies: (
            hermitian_entropy(r.marginal(&first)?.operator()),
            hermitian_entropy(r.marginal(&second)?.operator()),
        ),
        mutual_information: mutual_information(r, cut)?,
        expected,
        checks: Vec::new(),
    })
}

fn spectrum_check(label: &str, got: &[f64], want: &[f64]) -> (String, bool) {
    let ok = crate::theorems::multiset_distance(got, want) <= 1e-10;
    (label.to_string(), ok)
}

/// Reproduce a named example. Multi-time examples report the PDM at
/// (p, η) = (½, 1) and check the extremal claims over a `grid_points`² grid.
pub fn run_example(name: &str, grid_points: usize) -> Result<ExampleReport> {
    let minus = || {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[re(s), re(-s)])
    };
    match name {
        "dual-state" => {
            let r = Pdm::new(vec![2, 2], dual_state_matrix())?;
            let mut rep = report(name, &r, 1, Some((0.2315, 1e-3)))?;
            rep.checks.push(("dual state (positive)".into(), r.is_dual_state()));
            Ok(rep)
        }
        "qubit-two-times" => {
            let r = star_product(&QuantumChannel::identity(1), &DensityMatrix::maximally_mixed(2))?;
            let mut rep = report(name, &r, 1, Some((1.0, 1e-9)))?;
            rep.checks.push(spectrum_check("spectrum (1/2, 1/2, 1/2, -1/2)", &rep.spectrum, &[0.5, 0.5, 0.5, -0.5]));
            Ok(rep)
        }
        "discard-prepare" => {
            let rho = DensityMatrix::from_bloch([0.3, -0.2, 0.5])?;
            let sigma = DensityMatrix::from_bloch([-0.1, 0.4, 0.2])?;
            let r = star_product(&QuantumChannel::discard_prepare(&sigma), &rho)?;
            let mut rep = report(name, &r, 1, Some((0.0, 1e-9)))?;
            let product = r.matrix().max_abs_diff(&rho.matrix().kron(sigma.matrix())) <= 1e-12;
            rep.checks.push(("R = rho (x) sigma".into(), product));
            rep.checks.push(("dual state (positive)".into(), r.is_dual_state()));
            Ok(rep)
        }
        "decoherence" => {
            let r = star_product(&QuantumChannel::decoherence(), &minus()?)?;
            let mut rep = report(name, &r, 1, Some((0.79824, 1e-4)))?;
            let (hi, lo) = ((1.0 + 2f64.sqrt()) / 4.0, (1.0 - 2f64.sqrt()) / 4.0);
            rep.checks.push(spectrum_check("spectrum ((1±√2)/4, each twice)", &rep.spectrum, &[hi, hi, lo, lo]));
            Ok(rep)
        }
        _ => {
            let label = name
                .strip_prefix("multi-time-")
                .and_then(|s| s.chars().next().filter(|_| s.len() == 1))
                .ok_or_else(|| unknown_example(name))?;
            let config = figure_config(label).map_err(|_| unknown_example(name))?;
            let rho = DensityMatrix::diagonal(&[0.5, 0.5])?;
            let r = multi_time_pdm(&rho, &config.channels(1.0)?)?;
            let mut rep = report(name, &r, config.cut, None)?;
            let grid = uniform_grid(grid_points);
            let check = check_extrema(&sweep(&config, &grid, &grid)?);
            rep.checks.push(("grid maximum at p = 0.5, eta = 1".into(), check.max_at_center()));
            rep.checks.push(("I = 0 along eta = 0".into(), check.zero_at_eta0()));
            Ok(rep)
        }
    }
}

fn unknown_example(name: &str) -> Error {
    Error::InvalidParameter(format!(
        "unknown example '{name}'; valid names: {}",
        EXAMPLE_NAMES.join(", ")
    ))
}
