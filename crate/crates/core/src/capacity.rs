//! Supremum of the two-time mutual information over qubit input states.

use crate::channel::QuantumChannel;
use crate::entropy::mutual_information;
use crate::error::{Error, Result};
use crate::nelder_mead::{minimize, NelderMeadOptions};
use crate::pdm::star_product;
use crate::state::DensityMatrix;

const GRID_STEP: f64 = 0.1;
const STARTS: usize = 5;
pub const MIN_BUDGET: usize = 100;

#[derive(Clone, Debug)]
pub struct CapacityResult {
    pub value: f64,
    pub argmax_state: DensityMatrix,
    pub argmax_bloch: [f64; 3],
    pub evaluations: usize,
    /// Best iterate (Bloch vector, value) after the grid and after each
    /// simplex iteration of each refinement.
    pub trace: Vec<([f64; 3], f64)>,
}

/// Points outside the unit ball are pulled back to its surface.
fn project(x: &[f64]) -> [f64; 3] {
    let r = [x[0], x[1], x[2]];
    let n = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 1.0 {
        r.map(|v| v / n)
    } else {
        r
    }
}

/// I(A:B) of 𝒩 ⋆ ½(𝟙 + r·σ).
pub fn information_at(ch: &QuantumChannel, bloch: [f64; 3]) -> Result<f64> {
    let rho = DensityMatrix::from_bloch(bloch)?;
    mutual_information(&star_product(ch, &rho)?, 1)
}

/// Grid search over the Bloch ball (step 0.1) followed by Nelder–Mead from
/// the five best grid points, each refinement allowed `budget` evaluations.
pub fn temporal_capacity(ch: &QuantumChannel, budget: usize) -> Result<CapacityResult> {
    if ch.dim_in() != 2 {
        return Err(Error::Precondition(format!(
            "capacity search needs a qubit input, channel has input dimension {}",
            ch.dim_in()
        )));
    }
    if budget < MIN_BUDGET {
        return Err(Error::InvalidParameter(format!("budget {budget} is below {MIN_BUDGET}")));
    }
    let eval = |x: &[f64]| information_at(ch, project(x)).expect("qubit channel");

    let steps = (2.0 / GRID_STEP).round() as i32;
    let mut grid: Vec<([f64; 3], f64)> = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            for k in 0..=steps {
                let r = [i, j, k].map(|v| v as f64 * GRID_STEP - 1.0);
                if r.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12 {
                    let r = project(&r);
                    grid.push((r, eval(&r)));
                }
            }
        }
    }
    let mut evaluations = grid.len();
    // Stable sort keeps grid order among ties, so the result is deterministic.
    let mut ranked = grid.clone();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut best = ranked[0];
    let mut trace = vec![best];

    let opts = NelderMeadOptions {
        initial_step: 0.05,
        diameter_tol: 1e-6,
        max_evaluations: budget,
    };
    for (start, _) in ranked.iter().take(STARTS) {
        let run = minimize(|x| -eval(x), start, &opts);
        evaluations += run.evaluations;
        for (x, v) in &run.trace {
            let cand = (project(x), -v);
            if cand.1 > best.1 {
                best = cand;
            }
            trace.push(best);
        }
    }
    Ok(CapacityResult {
        value: best.1,
        argmax_state: DensityMatrix::from_bloch(best.0)?,
        argmax_bloch: best.0,
        evaluations,
        trace,
    })
}
