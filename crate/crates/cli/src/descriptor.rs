//! JSON descriptors for states, channels, sweeps and PDMs.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major lists of
//! rows.

use anyhow::{bail, ensure, Context, Result};
use num_complex::Complex64;
use pdmi::reproduce::{uniform_grid, SweepConfig, SweepSlot, DEFAULT_GRID_POINTS};
use pdmi::{ComplexMatrix, DensityMatrix, Pdm, QuantumChannel};
use serde::{Deserialize, Serialize};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum StateDescriptor {
    Matrix { matrix: JsonMatrix },
    Bloch { bloch: [f64; 3] },
    Pure { pure: Vec<[f64; 2]> },
}

impl StateDescriptor {
    pub fn build(&self) -> Result<DensityMatrix> {
        Ok(match self {
            Self::Matrix { matrix } => DensityMatrix::new(matrix_from_json(matrix)?)?,
            Self::Bloch { bloch } => DensityMatrix::from_bloch(*bloch)?,
            Self::Pure { pure } => {
                let psi: Vec<Complex64> = pure.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                DensityMatrix::pure(&psi)?
            }
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelDescriptor {
    Identity {
        #[serde(default = "one")]
        qubits: usize,
    },
    Unitary {
        matrix: JsonMatrix,
    },
    Depolarizing {
        /// Only optional for swept slots, where the grid supplies it.
        #[serde(default)]
        eta: Option<f64>,
    },
    Decoherence,
    DiscardPrepare {
        state: StateDescriptor,
    },
    Pauli {
        p: [f64; 4],
    },
    Rank2 {
        u: f64,
        v: f64,
    },
    Kraus {
        operators: Vec<JsonMatrix>,
    },
}

fn one() -> usize {
    1
}

impl ChannelDescriptor {
    pub fn build(&self) -> Result<QuantumChannel> {
        Ok(match self {
            Self::Identity { qubits } => QuantumChannel::identity(*qubits),
            Self::Unitary { matrix } => QuantumChannel::unitary(matrix_from_json(matrix)?)?,
            Self::Depolarizing { eta } => {
                QuantumChannel::depolarizing(eta.context("depolarizing channel needs \"eta\"")?)?
            }
            Self::Decoherence => QuantumChannel::decoherence(),
            Self::DiscardPrepare { state } => QuantumChannel::discard_prepare(&state.build()?),
            Self::Pauli { p } => QuantumChannel::pauli_channel(*p)?,
            Self::Rank2 { u, v } => QuantumChannel::rank2_channel(*u, *v)?,
            Self::Kraus { operators } => {
                let ks = operators.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                QuantumChannel::new(ks)?
            }
        })
    }
}

pub fn build_chain(descs: &[ChannelDescriptor]) -> Result<Vec<QuantumChannel>> {
    descs
        .iter()
        .enumerate()
        .map(|(k, d)| d.build().with_context(|| format!("channel {k}")))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepChannel {
    #[serde(flatten)]
    pub channel: ChannelDescriptor,
    #[serde(default)]
    pub sweep: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Number of time slots; must equal `channels.len() + 1` when given.
    #[serde(default)]
    pub n_times: Option<usize>,
    pub channels: Vec<SweepChannel>,
    #[serde(default)]
    pub p_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub eta_grid: Option<Vec<f64>>,
    pub cut: usize,
}

impl SweepSpec {
    /// Swept slots must be depolarizing channels; they all share η.
    pub fn config(&self) -> Result<SweepConfig> {
        if let Some(n) = self.n_times {
            ensure!(
                n == self.channels.len() + 1,
                "n_times is {n} but {} channels give {} time slots",
                self.channels.len(),
                self.channels.len() + 1
            );
        }
        ensure!(
            (1..=self.channels.len()).contains(&self.cut),
            "cut {} must lie in 1..={}",
            self.cut,
            self.channels.len()
        );
        let mut slots = Vec::with_capacity(self.channels.len());
        for (k, c) in self.channels.iter().enumerate() {
            slots.push(match (&c.channel, c.sweep) {
                (ChannelDescriptor::Depolarizing { .. }, true) => SweepSlot::Depolarizing,
                (_, true) => bail!("channel {k}: only depolarizing channels can be swept"),
                (d, false) => SweepSlot::Fixed(d.build().with_context(|| format!("channel {k}"))?),
            });
        }
        ensure!(
            slots.iter().any(|s| matches!(s, SweepSlot::Depolarizing)),
            "no channel is marked \"sweep\": true"
        );
        Ok(SweepConfig { slots, cut: self.cut })
    }

    pub fn grids(&self) -> (Vec<f64>, Vec<f64>) {
        let default = || uniform_grid(DEFAULT_GRID_POINTS);
        (
            self.p_grid.clone().unwrap_or_else(default),
            self.eta_grid.clone().unwrap_or_else(default),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PdmJson {
    pub dims: Vec<usize>,
    pub matrix: JsonMatrix,
}

impl PdmJson {
    pub fn of(p: &Pdm) -> Self {
        Self {
            dims: p.dims().to_vec(),
            matrix: matrix_to_json(p.matrix()),
        }
    }

    pub fn build(&self) -> Result<Pdm> {
        Ok(Pdm::new(self.dims.clone(), matrix_from_json(&self.matrix)?)?)
    }
}
