//! Numerical checks of the structural results on two-time mutual
//! information: unitary evolution, unital and low-Choi-rank qubit channels,
//! the bound conjectured for general qubit channels, and the possible
//! increase of information when a middle time is traced out.

use rand::Rng;

use crate::channel::QuantumChannel;
use crate::entropy::{entropy_of_spectrum, hermitian_entropy, mutual_information};
use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::pdm::{multi_time_pdm, star_product};
use crate::random::{random_channel, random_state};
use crate::state::DensityMatrix;

/// Tolerance for the unitary-evolution identities.
pub const THEOREM1_TOL: f64 = 1e-8;
/// Tolerance for the qubit-channel bounds and closed-form spectra.
pub const THEOREM2_TOL: f64 = 1e-9;

/// Largest pairwise gap between two multisets after sorting.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    sorted(a)
        .iter()
        .zip(sorted(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub mutual_information: f64,
    pub entropy: f64,
    /// Distance between mspec(𝒰 ⋆ ρ) and mspec(ρ) ∪ {±(λ_i+λ_j)/2 : i<j}.
    pub spectrum_error: f64,
}

impl Theorem1Report {
    pub fn mi_error(&self) -> f64 {
        (self.mutual_information - self.entropy).abs()
    }

    pub fn passed(&self) -> bool {
        self.mi_error() <= THEOREM1_TOL && self.spectrum_error <= THEOREM1_TOL
    }
}

/// I(A:B) of 𝒰 ⋆ ρ against S(ρ), plus the spectrum of 𝒰 ⋆ ρ.
pub fn verify_theorem1(rho: &DensityMatrix, u: &QuantumChannel) -> Result<Theorem1Report> {
    if !u.is_unitary() {
        return Err(Error::Precondition(format!(
            "channel is not unitary (Choi rank {})",
            u.choi_rank()
        )));
    }
    let r = star_product(u, rho)?;
    let mi = mutual_information(&r, 1)?;
    let lambda = rho.as_hermitian().eigenvalues();
    let mut expected = lambda.clone();
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            let s = (lambda[i] + lambda[j]) / 2.0;
            expected.push(s);
            expected.push(-s);
        }
    }
    Ok(Theorem1Report {
        mutual_information: mi,
        entropy: entropy_of_spectrum(&lambda),
        spectrum_error: multiset_distance(&r.eigenvalues(), &expected),
    })
}

#[derive(Clone, Debug)]
pub struct Theorem2Report {
    pub mutual_information: f64,
    pub unital: bool,
    pub choi_rank: usize,
    /// Unital or Choi rank ≤ 2.
    pub precondition_met: bool,
    /// Spectrum of ½𝒥[𝒩] against {1/2 − p_i} of the reduced Pauli channel.
    pub pauli_spectrum_error: Option<f64>,
    /// Spectrum of ½𝒥[𝒩] against (1/2, 1/2, ±c/2), c = √|det T|.
    pub rank2_spectrum_error: Option<f64>,
    /// Worst of the low-rank structure relations: |t|² = (1−λ₁²)(1−λ₂²),
    /// |λ₃| = |λ₁λ₂| and I = S(𝒩(𝟙/2)).
    pub rank2_structure_error: Option<f64>,
}

impl Theorem2Report {
    pub fn in_range(&self) -> bool {
        self.mutual_information >= -THEOREM2_TOL && self.mutual_information <= 1.0 + THEOREM2_TOL
    }

    /// Channels outside the theorem's hypotheses pass vacuously.
    pub fn passed(&self) -> bool {
        if !self.precondition_met {
            return true;
        }
        let ok = |e: Option<f64>| e.is_none_or(|x| x <= THEOREM2_TOL);
        self.in_range()
            && ok(self.pauli_spectrum_error)
            && ok(self.rank2_spectrum_error)
            && ok(self.rank2_structure_error)
    }
}

/// Pauli weights (p₀, p₁, p₂, p₃) of the Pauli channel with T = diag(λ).
pub fn pauli_weights_from_lambda(l: [f64; 3]) -> [f64; 4] {
    [
        (1.0 + l[0] + l[1] + l[2]) / 4.0,
        (1.0 + l[0] - l[1] - l[2]) / 4.0,
        (1.0 - l[0] + l[1] - l[2]) / 4.0,
        (1.0 - l[0] - l[1] + l[2]) / 4.0,
    ]
}

/// Bounds and closed-form spectra for a qubit channel at ρ = 𝟙/2.
pub fn verify_theorem2(ch: &QuantumChannel) -> Result<Theorem2Report> {
    let cf = ch.canonical_form()?;
    let mixed = DensityMatrix::maximally_mixed(2);
    let r = star_product(ch, &mixed)?;
    let mi = mutual_information(&r, 1)?;
    let spectrum = r.eigenvalues();
    let unital = ch.is_unital();
    let choi_rank = ch.choi_rank();
    let lambda = cf.lambda();

    let pauli_spectrum_error = unital.then(|| {
        let p = pauli_weights_from_lambda(lambda);
        multiset_distance(&spectrum, &p.map(|x| 0.5 - x))
    });

    let (rank2_spectrum_error, rank2_structure_error) = if choi_rank <= 2 {
        let c = (lambda[0] * lambda[1] * lambda[2]).abs().sqrt();
        let spec_err = multiset_distance(&spectrum, &[0.5, 0.5, c / 2.0, -c / 2.0]);
        // The two largest |λ| play the roles of cos u, cos v.
        let mut mags = lambda.map(f64::abs);
        mags.sort_by(|a, b| b.total_cmp(a));
        let t2: f64 = cf.n_d.t.iter().map(|x| x * x).sum();
        let t_err = (t2 - (1.0 - mags[0] * mags[0]) * (1.0 - mags[1] * mags[1])).abs();
        let l3_err = (mags[2] - mags[0] * mags[1]).abs();
        let out = HermitianOperator::from_hermitian_part(&ch.apply(mixed.matrix())?);
        let mi_err = (mi - hermitian_entropy(&out)).abs();
        (Some(spec_err), Some(t_err.max(l3_err).max(mi_err)))
    } else {
        (None, None)
    };

    Ok(Theorem2Report {
        mutual_information: mi,
        unital,
        choi_rank,
        precondition_met: unital || choi_rank <= 2,
        pauli_spectrum_error,
        rank2_spectrum_error,
        rank2_structure_error,
    })
}

/// Extremes of I(A:B) over random qubit channels of Choi rank 3 or 4 and
/// random input states. Values outside [0, 1] are recorded, never failed.
#[derive(Clone, Debug)]
pub struct ConjectureScan {
    pub trials: usize,
    pub min: f64,
    pub max: f64,
    pub flagged: Vec<(usize, f64)>,
}

pub fn conjecture_scan<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> ConjectureScan {
    let mut scan = ConjectureScan {
        trials,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        flagged: Vec::new(),
    };
    for trial in 0..trials {
        let rank = rng.random_range(3..=4);
        let ch = random_channel(rng, 2, rank);
        let rho = random_state(rng, 2);
        let r = star_product(&ch, &rho).expect("qubit dims");
        let mi = mutual_information(&r, 1).expect("two slots");
        scan.min = scan.min.min(mi);
        scan.max = scan.max.max(mi);
        if !(-THEOREM2_TOL..=1.0 + THEOREM2_TOL).contains(&mi) {
            scan.flagged.push((trial, mi));
        }
    }
    scan
}

/// A three-time PDM whose outer-slot information exceeds the information
/// between the first slot and the later two.
#[derive(Clone, Debug)]
pub struct NonMonotonicityWitness {
    pub trial: usize,
    pub rho: DensityMatrix,
    pub channels: [QuantumChannel; 2],
    /// I(A₁:A₃) of Tr₂ R₁₂₃.
    pub outer: f64,
    /// I(A₁:A₂A₃).
    pub full: f64,
}

pub fn outer_and_full_information(rho: &DensityMatrix, channels: &[QuantumChannel; 2]) -> Result<(f64, f64)> {
    let r = multi_time_pdm(rho, channels)?;
    let full = mutual_information(&r, 1)?;
    let outer = mutual_information(&r.marginal(&[0, 2])?, 1)?;
    Ok((outer, full))
}

/// Random search over qubit states and channels; returns the first instance
/// whose gap exceeds `margin`.
pub fn find_non_monotonicity_witness<R: Rng + ?Sized>(
    rng: &mut R,
    trials: usize,
    margin: f64,
) -> Option<NonMonotonicityWitness> {
    for trial in 0..trials {
        let rho = random_state(rng, 2);
        let r1 = rng.random_range(1..=4);
        let r2 = rng.random_range(1..=4);
        let channels = [random_channel(rng, 2, r1), random_channel(rng, 2, r2)];
        let (outer, full) = outer_and_full_information(&rho, &channels).expect("qubit chain");
        if outer > full + margin {
            return Some(NonMonotonicityWitness {
                trial,
                rho,
                channels,
                outer,
                full,
            });
        }
    }
    None
}
