//! Seeded verification suites behind `pdmi verify`.

use anyhow::Result;
use clap::ValueEnum;
use pdmi::bayes::verify_time_symmetry;
use pdmi::holevo::{check_sequential_holevo, theorem3_mi, CqEnsemble, Povm};
use pdmi::random::{
    random_channel, random_povm_effects, random_probability, random_state, random_unital_channel, random_unitary,
    seeded, SeededRng,
};
use pdmi::theorems::{conjecture_scan, verify_theorem1, verify_theorem2};
use pdmi::QuantumChannel;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Bayes,
    Holevo,
    ConjectureScan,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    /// Extra summary lines (extrema, worst residuals).
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Extrema {
    lo: f64,
    hi: f64,
}

impl Extrema {
    fn new() -> Self {
        Self {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, x: f64) {
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
    }
}

fn ensemble(rng: &mut SeededRng) -> Result<CqEnsemble> {
    let n = rng.random_range(2..=4);
    let states = (0..n).map(|_| random_state(rng, 2)).collect();
    Ok(CqEnsemble::new(random_probability(rng, n), states)?)
}

fn unitary(rng: &mut SeededRng, dim: usize) -> Result<QuantumChannel> {
    Ok(QuantumChannel::unitary(random_unitary(rng, dim))?)
}

/// Run `suite` for `trials` trials. The theorem2 suite runs `trials` unital
/// and `trials` rank-2 channels.
pub fn run(suite: Suite, trials: usize, seed: u64) -> Result<SuiteReport> {
    anyhow::ensure!(trials >= 1, "trials must be at least 1");
    let mut rng = seeded(seed);
    let mut failures = 0;
    let mut notes = Vec::new();
    let mut total = trials;
    match suite {
        Suite::Theorem1 => {
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let rho = random_state(&mut rng, 2);
                let rep = verify_theorem1(&rho, &unitary(&mut rng, 2)?)?;
                worst = worst.max(rep.mi_error()).max(rep.spectrum_error);
                failures += usize::from(!rep.passed());
            }
            notes.push(format!("worst residual: {worst:.3e}"));
        }
        Suite::Theorem2 => {
            total = 2 * trials;
            let mut ext = Extrema::new();
            for k in 0..total {
                let ch = if k < trials {
                    let count = rng.random_range(1..=4);
                    random_unital_channel(&mut rng, 2, count)
                } else {
                    random_channel(&mut rng, 2, 2)
                };
                let rep = verify_theorem2(&ch)?;
                ext.push(rep.mutual_information);
                failures += usize::from(!rep.precondition_met || !rep.passed());
            }
            notes.push(format!("I range: [{:.6}, {:.6}]", ext.lo, ext.hi));
        }
        Suite::Theorem3 => {
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let ens = ensemble(&mut rng)?;
                let rank = rng.random_range(1..=4);
                let (lhs, rhs) = theorem3_mi(&ens, &random_channel(&mut rng, 2, rank))?;
                worst = worst.max((lhs - rhs).abs());
                failures += usize::from((lhs - rhs).abs() > 1e-8);
            }
            notes.push(format!("max |lhs - rhs|: {worst:.3e}"));
        }
        Suite::Bayes => {
            let mut worst: f64 = 0.0;
            for k in 0..trials {
                let rho = random_state(&mut rng, 2);
                let ch = if k % 2 == 0 {
                    unitary(&mut rng, 2)?
                } else {
                    QuantumChannel::discard_prepare(&random_state(&mut rng, 2))
                };
                match verify_time_symmetry(&ch, &rho) {
                    Ok(rep) => {
                        worst = worst.max((rep.mi_forward - rep.mi_backward).abs());
                        failures += usize::from(!rep.passed());
                    }
                    Err(_) => failures += 1,
                }
            }
            notes.push(format!("max |I_forward - I_backward|: {worst:.3e}"));
        }
        Suite::Holevo => {
            let mut slack = f64::INFINITY;
            for _ in 0..trials {
                let ens = ensemble(&mut rng)?;
                let (jm, kn) = (rng.random_range(1..=3), rng.random_range(1..=3));
                let m = Povm::new(random_povm_effects(&mut rng, 2, jm))?;
                let n = Povm::new(random_povm_effects(&mut rng, 2, kn))?;
                let rep = check_sequential_holevo(&ens, &m, &n, &unitary(&mut rng, 2)?)?;
                slack = slack.min(rep.chi.min(rep.temporal_mi) - rep.classical_mi);
                failures += usize::from(!rep.passed());
            }
            notes.push(format!("smallest slack: {slack:.3e}"));
        }
        Suite::ConjectureScan => {
            let scan = conjecture_scan(&mut rng, trials);
            notes.push(format!("I range: [{:.6}, {:.6}]", scan.min, scan.max));
            notes.push(format!("outside [0, 1]: {}", scan.flagged.len()));
        }
    }
    Ok(SuiteReport {
        suite,
        seed,
        trials: total,
        failures,
        notes,
    })
}
