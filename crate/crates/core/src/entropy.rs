//! Hermitian and Shannon entropies, mutual information across a time cut,
//! and majorization.

use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::pdm::Pdm;

/// Eigenvalues with |λ| at or below this contribute nothing to the entropy.
pub const ZERO_CUTOFF: f64 = 1e-12;
const SUM_TOL: f64 = 1e-12;

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Rejects negative weights beyond −1e-12 (smaller ones are clamped to 0)
    /// and sums further than 1e-12 from one.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProbabilities("empty probability vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -SUM_TOL) {
            return Err(Error::InvalidProbabilities(format!("weight {w} is negative or not finite")));
        }
        let weights: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("weights sum to {total}")));
        }
        Ok(Self(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// −Σ λ log₂|λ| over the given eigenvalues.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|l| l.abs() > ZERO_CUTOFF)
        .map(|&l| l * l.abs().log2())
        .sum::<f64>()
}

/// S(X) = −Tr[X log₂|X|].
pub fn hermitian_entropy(x: &HermitianOperator) -> f64 {
    entropy_of_spectrum(&x.eigenvalues())
}

/// H(p) in bits.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    shannon_of_weights(p.weights())
}

pub(crate) fn shannon_of_weights(w: &[f64]) -> f64 {
    -w.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// I = S(R_{1..k}) + S(R_{k+1..n}) − S(R) for a cut after `cut` slots.
pub fn mutual_information(p: &Pdm, cut: usize) -> Result<f64> {
    let n = p.slots();
    if cut == 0 || cut >= n {
        return Err(Error::InvalidParameter(format!(
            "cut {cut} out of range for a PDM with {n} slots (need 1 ≤ cut < {n})"
        )));
    }
    let first: Vec<usize> = (0..cut).collect();
    let second: Vec<usize> = (cut..n).collect();
    let s_first = hermitian_entropy(p.marginal(&first)?.operator());
    let s_second = hermitian_entropy(p.marginal(&second)?.operator());
    Ok(s_first + s_second - hermitian_entropy(p.operator()))
}

/// Whether `y` majorizes `x`: sorted prefix sums of y dominate those of x and
/// totals agree within 1e-10.
pub fn majorizes(y: &[f64], x: &[f64]) -> Result<bool> {
    const TOL: f64 = 1e-10;
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "majorization needs equal lengths, got {} and {}",
            y.len(),
            x.len()
        )));
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (ys, xs) = (sorted(y), sorted(x));
    let (mut sy, mut sx) = (0.0, 0.0);
    for k in 0..ys.len() {
        sy += ys[k];
        sx += xs[k];
        if k + 1 < ys.len() && sy < sx - TOL {
            return Ok(false);
        }
    }
    Ok((sy - sx).abs() <= TOL)
}
