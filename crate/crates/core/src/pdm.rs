//! Pseudo-density matrices over time slots.

use crate::channel::{jamiolkowski_of_map, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{anticommutator, partial_trace, ComplexMatrix, HermitianOperator};
use crate::pauli::PauliString;
use crate::state::{DensityMatrix, PSD_TOL, TRACE_TOL};

/// Unit-trace Hermitian operator on a tensor product of time slots, slot 0
/// being the earliest.
#[derive(Clone, Debug)]
pub struct Pdm {
    dims: Vec<usize>,
    op: HermitianOperator,
}

impl Pdm {
    /// Checks Hermiticity, unit trace and positivity of every single-slot
    /// marginal.
    pub fn new(dims: Vec<usize>, m: ComplexMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || !m.is_square() || m.rows() != total {
            return Err(Error::DimensionMismatch(format!(
                "slot dims {dims:?} do not match a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let op = HermitianOperator::new(m)?;
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let pdm = Self { dims, op };
        if pdm.slots() > 1 {
            for slot in 0..pdm.slots() {
                let reduced = partial_trace(pdm.op.matrix(), &pdm.dims, &[slot])?;
                let min_eigenvalue = HermitianOperator::from_hermitian_part(&reduced).min_eigenvalue();
                if min_eigenvalue < -PSD_TOL {
                    return Err(Error::NotPositive { min_eigenvalue });
                }
            }
        }
        Ok(pdm)
    }

    /// Single-slot PDM holding a state.
    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self {
            dims: vec![rho.dim()],
            op: rho.as_hermitian().clone(),
        }
    }

    fn from_anticommutator(dims: Vec<usize>, m: ComplexMatrix) -> Result<Self> {
        Self::new(dims, m.hermitian_part())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn slots(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.op.eigenvalues()
    }

    /// Reduced PDM on the slots in `keep` (0-based).
    pub fn marginal(&self, keep: &[usize]) -> Result<Pdm> {
        if keep.is_empty() {
            return Err(Error::InvalidParameter("marginal needs at least one slot".into()));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let m = partial_trace(self.op.matrix(), &self.dims, &kept)?;
        let dims = kept.iter().map(|&s| self.dims[s]).collect();
        Ok(Pdm {
            dims,
            op: HermitianOperator::from_hermitian_part(&m),
        })
    }

    /// Positive semidefinite within −1e-9.
    pub fn is_dual_state(&self) -> bool {
        self.op.min_eigenvalue() >= -PSD_TOL
    }
}

/// ⟨σ_α, σ_β⟩ = Tr[𝒩(Π⁺_α ρ Π⁺_α)σ_β] − Tr[𝒩(Π⁻_α ρ Π⁻_α)σ_β].
pub fn two_time_expectation(
    rho: &DensityMatrix,
    ch: &QuantumChannel,
    alpha: &PauliString,
    beta: &PauliString,
) -> Result<f64> {
    let (da, db) = (1usize << alpha.qubits(), 1usize << beta.qubits());
    if rho.dim() != da || ch.dim_in() != da || ch.dim_out() != db {
        return Err(Error::DimensionMismatch(format!(
            "state dim {}, channel {}->{}, Pauli strings on {} and {} qubits",
            rho.dim(),
            ch.dim_in(),
            ch.dim_out(),
            alpha.qubits(),
            beta.qubits()
        )));
    }
    let sigma_b = beta.operator();
    let branch = |positive: bool| -> Result<f64> {
        let proj = alpha.projector(positive);
        let post = &(&proj * rho.matrix()) * &proj;
        Ok((&ch.apply(&post)? * &sigma_b).trace().re)
    };
    Ok(branch(true)? - branch(false)?)
}

/// R = 4^{-m} Σ_{α,β} ⟨σ_α, σ_β⟩ σ_α ⊗ σ_β for m-qubit slots, m ≤ 2.
pub fn pdm_from_expectations(rho: &DensityMatrix, ch: &QuantumChannel) -> Result<Pdm> {
    let d = rho.dim();
    let m = d.trailing_zeros() as usize;
    if !d.is_power_of_two() || m == 0 || m > 2 || ch.dim_in() != d || ch.dim_out() != d {
        return Err(Error::Precondition(format!(
            "expectation-value construction needs 1 or 2 qubits per slot and a {d}->{d} channel"
        )));
    }
    let mut r = ComplexMatrix::zeros(d * d, d * d);
    for alpha in PauliString::all(m) {
        let sa = alpha.operator();
        for beta in PauliString::all(m) {
            let coeff = two_time_expectation(rho, ch, &alpha, &beta)?;
            if coeff != 0.0 {
                r = &r + &sa.kron(&beta.operator()).scale_real(coeff);
            }
        }
    }
    Pdm::new(vec![d, d], r.scale_real(1.0 / (d * d) as f64))
}

/// 𝒩 ⋆ ρ = ½{ρ ⊗ 𝟙, 𝒥[𝒩]}.
pub fn star_product(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<Pdm> {
    if rho.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} but channel input dimension {}",
            rho.dim(),
            ch.dim_in()
        )));
    }
    let m = star_operator(ch.jamiolkowski().matrix(), rho.matrix(), ch.dim_out())?;
    Pdm::from_anticommutator(vec![ch.dim_in(), ch.dim_out()], m)
}

/// ½{X ⊗ 𝟙_{dim_out}, J} for any operator X.
pub(crate) fn star_operator(j: &ComplexMatrix, x: &ComplexMatrix, dim_out: usize) -> Result<ComplexMatrix> {
    let lifted = x.kron(&ComplexMatrix::identity(dim_out));
    Ok(anticommutator(&lifted, j)?.scale_real(0.5))
}

/// Jamiołkowski matrix of 𝒩 ∘ Tr_{all but last slot}, as a map from the
/// full multi-slot space.
pub fn composite_jamiolkowski(dims: &[usize], ch: &QuantumChannel) -> Result<ComplexMatrix> {
    let last = dims.len().checked_sub(1).ok_or_else(|| {
        Error::DimensionMismatch("composite map needs at least one slot".into())
    })?;
    if dims[last] != ch.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "last slot has dimension {} but channel input dimension is {}",
            dims[last],
            ch.dim_in()
        )));
    }
    let total: usize = dims.iter().product();
    Ok(jamiolkowski_of_map(total, ch.dim_out(), |x| {
        let reduced = partial_trace(x, dims, &[last]).expect("dims checked");
        ch.apply(&reduced).expect("dims checked")
    }))
}

/// R_{1..n} built recursively: R_{1..k+1} = (𝒩_k ∘ Tr_{1..k−1}) ⋆ R_{1..k},
/// starting from 𝒩_1 ⋆ ρ.
pub fn multi_time_pdm(rho: &DensityMatrix, chs: &[QuantumChannel]) -> Result<Pdm> {
    let (first, rest) = chs
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("need at least one channel".into()))?;
    let mut r = star_product(first, rho)?;
    for (link, ch) in rest.iter().enumerate() {
        let j = composite_jamiolkowski(r.dims(), ch).map_err(|e| match e {
            Error::DimensionMismatch(msg) => Error::DimensionMismatch(format!("channel {}: {msg}", link + 2)),
            other => other,
        })?;
        let m = star_operator(&j, r.matrix(), ch.dim_out())?;
        let mut dims = r.dims.clone();
        dims.push(ch.dim_out());
        r = Pdm::from_anticommutator(dims, m)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    fn half_swap() -> ComplexMatrix {
        ComplexMatrix::from_real(
            4,
            4,
            &[0.5, 0., 0., 0., 0., 0., 0.5, 0., 0., 0.5, 0., 0., 0., 0., 0., 0.5],
        )
        .unwrap()
    }

    fn minus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[re(s), re(-s)]).unwrap()
    }

    #[test]
    fn two_time_expectation_examples() {
        let mixed = DensityMatrix::maximally_mixed(2);
        let id = QuantumChannel::identity(1);
        let p = |k| PauliString::new(vec![k]).unwrap();
        assert!((two_time_expectation(&mixed, &id, &p(0), &p(0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((two_time_expectation(&mixed, &id, &p(3), &p(3)).unwrap() - 1.0).abs() < 1e-15);
        assert!(two_time_expectation(&mixed, &id, &p(3), &p(1)).unwrap().abs() < 1e-15);
        let two = PauliString::new(vec![0, 0]).unwrap();
        assert!(two_time_expectation(&mixed, &id, &two, &p(0)).is_err());
    }

    #[test]
    fn expectation_and_star_agree_on_examples() {
        let sigma = DensityMatrix::from_bloch([0.1, 0.7, -0.2]).unwrap();
        let rho = DensityMatrix::from_bloch([-0.4, 0.3, 0.5]).unwrap();
        let cases = [
            (DensityMatrix::maximally_mixed(2), QuantumChannel::identity(1)),
            (rho.clone(), QuantumChannel::discard_prepare(&sigma)),
            (minus(), QuantumChannel::decoherence()),
        ];
        for (state, ch) in &cases {
            let a = pdm_from_expectations(state, ch).unwrap();
            let b = star_product(ch, state).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
        let r = star_product(&cases[0].1, &cases[0].0).unwrap();
        assert!(r.matrix().max_abs_diff(&half_swap()) < 1e-15);
        let r = star_product(&cases[1].1, &cases[1].0).unwrap();
        assert!(r.matrix().max_abs_diff(&rho.matrix().kron(sigma.matrix())) < 1e-14);
    }

    #[test]
    fn decoherence_spectrum() {
        let r = star_product(&QuantumChannel::decoherence(), &minus()).unwrap();
        let ev = r.eigenvalues();
        let (hi, lo) = ((1.0 + 2f64.sqrt()) / 4.0, (1.0 - 2f64.sqrt()) / 4.0);
        for (got, want) in ev.iter().zip([hi, hi, lo, lo]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_input_gives_half_jamiolkowski() {
        let ch = QuantumChannel::rank2_channel(0.9, 2.1).unwrap();
        let r = star_product(&ch, &DensityMatrix::maximally_mixed(2)).unwrap();
        let half_j = ch.jamiolkowski().matrix().scale_real(0.5);
        assert!(r.matrix().max_abs_diff(&half_j) < 1e-15);
    }

    #[test]
    fn marginal_and_dual_state() {
        let r = Pdm::new(vec![2, 2], half_swap()).unwrap();
        assert!(!r.is_dual_state());
        let half_id = ComplexMatrix::diag(&[0.5, 0.5]);
        assert!(r.marginal(&[1]).unwrap().matrix().max_abs_diff(&half_id) < 1e-15);
        assert!(r.marginal(&[0]).unwrap().matrix().max_abs_diff(&half_id) < 1e-15);
        assert_eq!(r.marginal(&[0, 1]).unwrap().matrix(), r.matrix());
        assert!(r.marginal(&[]).is_err());

        let prod = Pdm::new(vec![2, 2], ComplexMatrix::diag(&[0.3, 0.2, 0.3, 0.2])).unwrap();
        assert!(prod.is_dual_state());
    }

    #[test]
    fn rejects_bad_pdms() {
        assert!(Pdm::new(vec![2, 2], ComplexMatrix::identity(4)).is_err());
        assert!(Pdm::new(vec![2, 3], ComplexMatrix::identity(4)).is_err());
        // Unit trace but a negative single-slot marginal.
        let bad = ComplexMatrix::diag(&[1.0, 0.2, -0.1, -0.1]);
        assert!(matches!(Pdm::new(vec![2, 2], bad), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn composite_map_is_identity_tensor_jamiolkowski() {
        let ch = QuantumChannel::rank2_channel(2.4, 0.6).unwrap();
        let j = composite_jamiolkowski(&[2, 2], &ch).unwrap();
        let expected = ComplexMatrix::identity(2).kron(ch.jamiolkowski().matrix());
        assert!(j.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn three_time_identity_chain() {
        let id = QuantumChannel::identity(1);
        let r = multi_time_pdm(&DensityMatrix::maximally_mixed(2), &[id.clone(), id]).unwrap();
        assert_eq!(r.dims(), &[2, 2, 2]);
        for keep in [[0, 1], [1, 2]] {
            assert!(r.marginal(&keep).unwrap().matrix().max_abs_diff(&half_swap()) < 1e-14);
        }
    }

    #[test]
    fn discard_decouples_first_slot() {
        let rho = DensityMatrix::from_bloch([0.3, 0.0, 0.4]).unwrap();
        let sigma = DensityMatrix::from_bloch([0.0, -0.6, 0.2]).unwrap();
        let ch2 = QuantumChannel::rank2_channel(1.0, 0.5).unwrap();
        let r = multi_time_pdm(&rho, &[QuantumChannel::discard_prepare(&sigma), ch2.clone()]).unwrap();
        let expected = rho.matrix().kron(star_product(&ch2, &sigma).unwrap().matrix());
        assert!(r.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn chain_dimension_errors() {
        let rho = DensityMatrix::maximally_mixed(2);
        let three = QuantumChannel::identity_dim(3);
        let err = multi_time_pdm(&rho, &[QuantumChannel::identity(1), three]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
        assert!(star_product(&QuantumChannel::identity(2), &rho).is_err());
    }
}
