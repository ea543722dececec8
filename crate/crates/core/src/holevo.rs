//! Classical–quantum temporal PDMs, the Holevo quantity, and sequential
//! measurement statistics.

use crate::channel::QuantumChannel;
use crate::entropy::{hermitian_entropy, mutual_information, shannon_of_weights, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix, HermitianOperator};
use crate::pdm::{star_product, Pdm};
use crate::state::DensityMatrix;

/// Tolerance for the Holevo-type inequalities.
pub const HOLEVO_TOL: f64 = 1e-9;

/// Preparation ensemble {(p_i, ρ^i)}.
#[derive(Clone, Debug)]
pub struct CqEnsemble {
    probs: ProbabilityVector,
    states: Vec<DensityMatrix>,
}

impl CqEnsemble {
    pub fn new(probs: ProbabilityVector, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch("ensemble states differ in dimension".into()));
        }
        Ok(Self { probs, states })
    }

    pub fn probs(&self) -> &ProbabilityVector {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Σ p_i ρ^i.
    pub fn average(&self) -> DensityMatrix {
        let mut avg = ComplexMatrix::zeros(self.dim(), self.dim());
        for (p, s) in self.probs.weights().iter().zip(&self.states) {
            avg = &avg + &s.matrix().scale_real(*p);
        }
        DensityMatrix::new(avg.hermitian_part()).expect("convex combination of states")
    }

    /// Σ p_i |i⟩⟨i| on the label register.
    pub fn label_state(&self) -> DensityMatrix {
        DensityMatrix::diagonal(self.probs.weights()).expect("probabilities")
    }
}

/// Effects M_j ≥ 0 with Σ M_j = 𝟙.
#[derive(Clone, Debug)]
pub struct Povm {
    effects: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidParameter("POVM needs at least one effect".into()))?;
        let d = first.dim();
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &effects {
            if e.dim() != d {
                return Err(Error::DimensionMismatch("POVM effects differ in dimension".into()));
            }
            let min_eigenvalue = e.min_eigenvalue();
            if min_eigenvalue < -1e-9 {
                return Err(Error::NotPositive { min_eigenvalue });
            }
            sum = &sum + e.matrix();
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "POVM effects sum to identity only within {dev:.3e}"
            )));
        }
        Ok(Self { effects })
    }

    /// The one-outcome POVM {𝟙}.
    pub fn trivial(dim: usize) -> Self {
        Self {
            effects: vec![HermitianOperator::from_hermitian_part(&ComplexMatrix::identity(dim))],
        }
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        Self {
            effects: (0..dim)
                .map(|k| HermitianOperator::from_hermitian_part(&ComplexMatrix::unit(dim, k, k)))
                .collect(),
        }
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    fn sqrt_effects(&self) -> Result<Vec<ComplexMatrix>> {
        self.effects.iter().map(psd_sqrt).collect()
    }
}

/// p(i, j, k) over preparation label i and outcomes j, k.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution3 {
    shape: [usize; 3],
    p: Vec<f64>,
}

impl JointDistribution3 {
    pub fn new(shape: [usize; 3], p: Vec<f64>) -> Result<Self> {
        if p.len() != shape.iter().product::<usize>() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for shape {shape:?}",
                p.len()
            )));
        }
        if let Some(x) = p.iter().find(|&&x| x < -1e-12) {
            return Err(Error::InvalidProbabilities(format!("negative entry {x}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
        }
        Ok(Self {
            shape,
            p: p.into_iter().map(|x| x.max(0.0)).collect(),
        })
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let [_, nj, nk] = self.shape;
        self.p[(i * nj + j) * nk + k]
    }

    /// p(i).
    pub fn marginal_x(&self) -> Vec<f64> {
        let [ni, nj, nk] = self.shape;
        (0..ni).map(|i| (0..nj * nk).map(|r| self.p[i * nj * nk + r]).sum()).collect()
    }

    /// p(j, k) flattened as j·nk + k.
    pub fn marginal_y1y2(&self) -> Vec<f64> {
        let [ni, nj, nk] = self.shape;
        (0..nj * nk).map(|r| (0..ni).map(|i| self.p[i * nj * nk + r]).sum()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
}

/// R_{AB₁B₂} = Σ_i p_i |i⟩⟨i| ⊗ (𝒩 ⋆ ρ^i).
pub fn cq_pdm(ens: &CqEnsemble, ch: &QuantumChannel) -> Result<Pdm> {
    let n = ens.len();
    let blocks = conditional_pdms(ens, ch)?;
    let inner = blocks[0].dim();
    let mut m = ComplexMatrix::zeros(n * inner, n * inner);
    for (i, (p, r)) in ens.probs.weights().iter().zip(&blocks).enumerate() {
        let block = r.matrix().scale_real(*p);
        for a in 0..inner {
            for b in 0..inner {
                m[(i * inner + a, i * inner + b)] = block[(a, b)];
            }
        }
    }
    Pdm::new(vec![n, ch.dim_in(), ch.dim_out()], m)
}

fn conditional_pdms(ens: &CqEnsemble, ch: &QuantumChannel) -> Result<Vec<Pdm>> {
    ens.states.iter().map(|s| star_product(ch, s)).collect()
}

/// (I(A:B₁B₂) of the cq PDM, S(Σ p_i R^i) − Σ p_i S(R^i)).
pub fn theorem3_mi(ens: &CqEnsemble, ch: &QuantumChannel) -> Result<(f64, f64)> {
    let lhs = mutual_information(&cq_pdm(ens, ch)?, 1)?;
    let blocks = conditional_pdms(ens, ch)?;
    let d = blocks[0].dim();
    let mut avg = ComplexMatrix::zeros(d, d);
    let mut mean_entropy = 0.0;
    for (p, r) in ens.probs.weights().iter().zip(&blocks) {
        avg = &avg + &r.matrix().scale_real(*p);
        mean_entropy += p * hermitian_entropy(r.operator());
    }
    let rhs = hermitian_entropy(&HermitianOperator::from_hermitian_part(&avg)) - mean_entropy;
    Ok((lhs, rhs))
}

/// |S(R_{AB₁B₂}) − H(p) − Σ p_i S(R^i)|.
pub fn orthogonal_convexity_gap(ens: &CqEnsemble, ch: &QuantumChannel) -> Result<f64> {
    let total = hermitian_entropy(cq_pdm(ens, ch)?.operator());
    let blocks = conditional_pdms(ens, ch)?;
    let weights = ens.probs.weights();
    let mixed: f64 = weights.iter().zip(&blocks).map(|(p, r)| p * hermitian_entropy(r.operator())).sum();
    Ok((total - shannon_of_weights(weights) - mixed).abs())
}

/// χ = S(Σ p_i ρ^i) − Σ p_i S(ρ^i).
pub fn holevo_chi(ens: &CqEnsemble) -> f64 {
    let mean: f64 = ens
        .probs
        .weights()
        .iter()
        .zip(&ens.states)
        .map(|(p, s)| p * hermitian_entropy(s.as_hermitian()))
        .sum();
    hermitian_entropy(ens.average().as_hermitian()) - mean
}

fn require_unitary(u: &QuantumChannel) -> Result<()> {
    if !u.is_unitary() {
        return Err(Error::Precondition("intermediate evolution must be unitary".into()));
    }
    Ok(())
}

/// p_ijk = p_i Tr[U√M_j ρ^i √M_j U† N_k].
pub fn sequential_distribution(
    ens: &CqEnsemble,
    m: &Povm,
    n: &Povm,
    u: &QuantumChannel,
) -> Result<JointDistribution3> {
    require_unitary(u)?;
    let d = ens.dim();
    if m.dim() != d || n.dim() != d || u.dim_in() != d {
        return Err(Error::DimensionMismatch(format!(
            "ensemble dim {d}, POVM dims {} and {}, evolution dim {}",
            m.dim(),
            n.dim(),
            u.dim_in()
        )));
    }
    let sqrt_m = m.sqrt_effects()?;
    let mut p = Vec::with_capacity(ens.len() * m.len() * n.len());
    for (pi, rho) in ens.probs.weights().iter().zip(&ens.states) {
        for sm in &sqrt_m {
            let updated = u.apply(&(&(sm * rho.matrix()) * sm))?;
            for nk in &n.effects {
                p.push(pi * (&updated * nk.matrix()).trace().re);
            }
        }
    }
    JointDistribution3::new([ens.len(), m.len(), n.len()], p)
}

/// H(X) + H(Y₁Y₂) − H(X, Y₁, Y₂) in bits.
pub fn classical_mi_x_y1y2(d: &JointDistribution3) -> f64 {
    shannon_of_weights(&d.marginal_x()) + shannon_of_weights(&d.marginal_y1y2()) - shannon_of_weights(d.as_slice())
}

/// ρ ↦ Σ_{j,k} Tr[U√M_j ρ √M_j U† N_k] |j,k⟩⟨j,k|, with Kraus operators
/// |j,k⟩⟨l| √N_k U √M_j.
pub fn instrument_channel(m: &Povm, u: &QuantumChannel, n: &Povm) -> Result<QuantumChannel> {
    let umat = u
        .unitary_matrix()
        .ok_or_else(|| Error::Precondition("intermediate evolution must be unitary".into()))?;
    let d = umat.rows();
    if m.dim() != d || n.dim() != d {
        return Err(Error::DimensionMismatch("POVM and evolution dimensions differ".into()));
    }
    let (nj, nk) = (m.len(), n.len());
    let out = nj * nk;
    let sqrt_m = m.sqrt_effects()?;
    let sqrt_n = n.sqrt_effects()?;
    let mut kraus = Vec::with_capacity(out * d);
    for (j, sm) in sqrt_m.iter().enumerate() {
        for (k, sn) in sqrt_n.iter().enumerate() {
            let core = &(sn * &umat) * sm;
            for l in 0..d {
                let mut op = ComplexMatrix::zeros(out, d);
                for col in 0..d {
                    op[(j * nk + k, col)] = core[(l, col)];
                }
                kraus.push(op);
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// |i⟩⟨i| ↦ ρ^i: prepares the ensemble state selected by a classical label.
pub fn preparation_channel(ens: &CqEnsemble) -> QuantumChannel {
    let (n, d) = (ens.len(), ens.dim());
    let mut kraus = Vec::new();
    for (i, rho) in ens.states.iter().enumerate() {
        let spec = rho.as_hermitian().eig();
        for (k, &mu) in spec.eigenvalues.iter().enumerate() {
            if mu <= 1e-14 {
                continue;
            }
            let mut op = ComplexMatrix::zeros(d, n);
            for a in 0..d {
                op[(a, i)] = spec.eigenvectors[(a, k)] * mu.sqrt();
            }
            kraus.push(op);
        }
    }
    QuantumChannel::with_tolerance(kraus, 1e-9).expect("eigen-decomposition of unit-trace states")
}

#[derive(Clone, Debug)]
pub struct SequentialHolevoReport {
    /// I(X:Y₁Y₂) of the sequential outcome statistics.
    pub classical_mi: f64,
    pub chi: f64,
    /// I(A:B₁B₂) of the cq PDM with the unitary evolution.
    pub temporal_mi: f64,
    /// max |Tr[|j,k⟩⟨j,k| 𝓘(ρ^i)] − p_{jk|i}| for the instrument channel 𝓘.
    pub instrument_mismatch: f64,
}

impl SequentialHolevoReport {
    pub fn passed(&self) -> bool {
        self.classical_mi <= self.chi + HOLEVO_TOL
            && self.classical_mi <= self.temporal_mi + HOLEVO_TOL
            && self.instrument_mismatch <= HOLEVO_TOL
    }
}

pub fn check_sequential_holevo(
    ens: &CqEnsemble,
    m: &Povm,
    n: &Povm,
    u: &QuantumChannel,
) -> Result<SequentialHolevoReport> {
    let dist = sequential_distribution(ens, m, n, u)?;
    let instrument = instrument_channel(m, u, n)?;
    let mut mismatch: f64 = 0.0;
    for (i, (pi, rho)) in ens.probs.weights().iter().zip(&ens.states).enumerate() {
        let out = instrument.apply(rho.matrix())?;
        for j in 0..m.len() {
            for k in 0..n.len() {
                let r = j * n.len() + k;
                mismatch = mismatch.max((pi * out[(r, r)].re - dist.get(i, j, k)).abs());
            }
        }
    }
    let (temporal_mi, _) = theorem3_mi(ens, u)?;
    Ok(SequentialHolevoReport {
        classical_mi: classical_mi_x_y1y2(&dist),
        chi: holevo_chi(ens),
        temporal_mi,
        instrument_mismatch: mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::hadamard;
    use crate::linalg::re;
    use crate::pdm::multi_time_pdm;

    fn basis_ensemble() -> CqEnsemble {
        CqEnsemble::new(
            ProbabilityVector::uniform(2),
            vec![
                DensityMatrix::diagonal(&[1.0, 0.0]).unwrap(),
                DensityMatrix::diagonal(&[0.0, 1.0]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[re(s), re(s)]).unwrap()
    }

    #[test]
    fn holevo_examples() {
        assert!((holevo_chi(&basis_ensemble()) - 1.0).abs() < 1e-12);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let ens = CqEnsemble::new(ProbabilityVector::uniform(2), vec![zero.clone(), plus()]).unwrap();
        let q = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let h2 = -(q * q.log2() + (1.0 - q) * (1.0 - q).log2());
        assert!((holevo_chi(&ens) - h2).abs() < 1e-12);
        assert!((holevo_chi(&ens) - 0.6009).abs() < 1e-4);
        let single = CqEnsemble::new(ProbabilityVector::uniform(1), vec![plus()]).unwrap();
        assert!(holevo_chi(&single).abs() < 1e-12);
    }

    #[test]
    fn cq_pdm_structure() {
        let id = QuantumChannel::identity(1);
        let ens = basis_ensemble();
        let r = cq_pdm(&ens, &id).unwrap();
        assert_eq!(r.dims(), &[2, 2, 2]);
        let mut expected = ComplexMatrix::zeros(8, 8);
        for (i, s) in ens.states().iter().enumerate() {
            let term = ComplexMatrix::unit(2, i, i).kron(star_product(&id, s).unwrap().matrix());
            expected = &expected + &term.scale_real(0.5);
        }
        assert!(r.matrix().max_abs_diff(&expected) < 1e-15);
        let labels = r.marginal(&[0]).unwrap();
        assert!(labels.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5])) < 1e-15);

        let single = CqEnsemble::new(ProbabilityVector::uniform(1), vec![plus()]).unwrap();
        let r = cq_pdm(&single, &id).unwrap();
        assert!(r.matrix().max_abs_diff(star_product(&id, &plus()).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn cq_pdm_matches_preparation_chain() {
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let probs = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        let ens = CqEnsemble::new(probs, vec![zero, DensityMatrix::from_bloch([0.2, 0.3, 0.1]).unwrap()]).unwrap();
        let ch = QuantumChannel::rank2_channel(0.4, 1.3).unwrap();
        let chain = multi_time_pdm(&ens.label_state(), &[preparation_channel(&ens), ch.clone()]).unwrap();
        assert!(chain.matrix().max_abs_diff(cq_pdm(&ens, &ch).unwrap().matrix()) < 1e-14);
    }

    #[test]
    fn theorem3_examples() {
        let (lhs, rhs) = theorem3_mi(&basis_ensemble(), &QuantumChannel::identity(1)).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
        assert!((lhs - 1.0).abs() < 1e-10);

        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let ens = CqEnsemble::new(ProbabilityVector::uniform(2), vec![zero.clone(), plus()]).unwrap();
        let h = QuantumChannel::unitary(hadamard()).unwrap();
        let (lhs, rhs) = theorem3_mi(&ens, &h).unwrap();
        assert!((lhs - holevo_chi(&ens)).abs() < 1e-10 && (rhs - lhs).abs() < 1e-10);

        let same = CqEnsemble::new(ProbabilityVector::uniform(2), vec![zero.clone(), zero]).unwrap();
        let (lhs, rhs) = theorem3_mi(&same, &QuantumChannel::decoherence()).unwrap();
        assert!(lhs.abs() < 1e-10 && rhs.abs() < 1e-10);
        assert!(orthogonal_convexity_gap(&ens, &QuantumChannel::decoherence()).unwrap() < 1e-10);
    }

    #[test]
    fn sequential_examples() {
        let z = Povm::computational(2);
        let id = QuantumChannel::identity(1);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let single = CqEnsemble::new(ProbabilityVector::uniform(1), vec![zero.clone()]).unwrap();
        let d = sequential_distribution(&single, &z, &z, &id).unwrap();
        assert!((d.get(0, 0, 0) - 1.0).abs() < 1e-15);

        // Trivial first measurement reproduces Born statistics of Uρ U†.
        let h = QuantumChannel::unitary(hadamard()).unwrap();
        let rho = DensityMatrix::from_bloch([0.1, 0.4, 0.5]).unwrap();
        let ens = CqEnsemble::new(ProbabilityVector::uniform(1), vec![rho.clone()]).unwrap();
        let d = sequential_distribution(&ens, &Povm::trivial(2), &z, &h).unwrap();
        let evolved = h.apply(rho.matrix()).unwrap();
        for k in 0..2 {
            assert!((d.get(0, 0, k) - evolved[(k, k)].re).abs() < 1e-14);
        }

        let d = sequential_distribution(&single, &z, &z, &h).unwrap();
        assert!((d.get(0, 0, 0) - 0.5).abs() < 1e-14 && (d.get(0, 0, 1) - 0.5).abs() < 1e-14);
        assert!(classical_mi_x_y1y2(&d).abs() < 1e-14);

        assert!(sequential_distribution(&single, &z, &z, &QuantumChannel::decoherence()).is_err());
    }

    #[test]
    fn classical_mi_examples() {
        let prod = JointDistribution3::new([2, 1, 2], vec![0.3 * 0.4, 0.3 * 0.6, 0.7 * 0.4, 0.7 * 0.6]).unwrap();
        assert!(classical_mi_x_y1y2(&prod).abs() < 1e-14);
        // i ↔ (j, k) one-to-one.
        let mut p = vec![0.0; 4 * 4];
        let w = [0.1, 0.2, 0.3, 0.4];
        for i in 0..4 {
            p[i * 4 + i] = w[i];
        }
        let d = JointDistribution3::new([4, 2, 2], p).unwrap();
        assert!((classical_mi_x_y1y2(&d) - shannon_of_weights(&w)).abs() < 1e-14);
        assert!(JointDistribution3::new([1, 1, 2], vec![0.5, 0.6]).is_err());
    }

    #[test]
    fn sequential_bound_is_tight_for_distinguishable_states() {
        let z = Povm::computational(2);
        let rep = check_sequential_holevo(&basis_ensemble(), &z, &z, &QuantumChannel::identity(1)).unwrap();
        assert!((rep.classical_mi - 1.0).abs() < 1e-12 && (rep.chi - 1.0).abs() < 1e-12);
        assert!(rep.passed());

        let t = Povm::trivial(2);
        let rep = check_sequential_holevo(&basis_ensemble(), &t, &t, &QuantumChannel::identity(1)).unwrap();
        assert!(rep.classical_mi.abs() < 1e-14 && rep.passed());
    }

    #[test]
    fn povm_validation() {
        let half = HermitianOperator::from_hermitian_part(&ComplexMatrix::diag(&[0.5, 0.5]));
        assert!(Povm::new(vec![half.clone()]).is_err());
        assert!(Povm::new(vec![half.clone(), half]).is_ok());
        let neg = HermitianOperator::from_hermitian_part(&ComplexMatrix::diag(&[1.5, 1.0]));
        let comp = HermitianOperator::from_hermitian_part(&ComplexMatrix::diag(&[-0.5, 0.0]));
        assert!(matches!(Povm::new(vec![neg, comp]), Err(Error::NotPositive { .. })));
    }
}
