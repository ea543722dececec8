//! Seeded samplers for states, unitaries, channels and POVMs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channel::QuantumChannel;
use crate::entropy::ProbabilityVector;
use crate::linalg::{c, ComplexMatrix, HermitianOperator, C64};
use crate::state::DensityMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("sized")
}

/// `rows × cols` matrix with orthonormal columns (rows ≥ cols), by
/// Gram–Schmidt on a Ginibre matrix.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols);
    let g = ginibre(rng, rows, cols);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.column(j);
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for u in &q {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in q.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    random_isometry(rng, dim, dim)
}

/// Channel with `rank` Kraus operators cut from a random isometry
/// ℂ^d → ℂ^{d·rank}.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> QuantumChannel {
    let v = random_isometry(rng, dim * rank, dim);
    let kraus = (0..rank)
        .map(|k| {
            let mut op = ComplexMatrix::zeros(dim, dim);
            for a in 0..dim {
                for i in 0..dim {
                    op[(a, i)] = v[(k * dim + a, i)];
                }
            }
            op
        })
        .collect();
    QuantumChannel::new(kraus).expect("isometry blocks are trace preserving")
}

/// Mixture of `count` random unitaries with flat-Dirichlet weights.
pub fn random_unital_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> QuantumChannel {
    let p = random_probability(rng, count);
    let kraus = p
        .weights()
        .iter()
        .map(|&w| random_unitary(rng, dim).scale_real(w.sqrt()))
        .collect();
    QuantumChannel::new(kraus).expect("unitary mixture")
}

/// Flat Dirichlet sample.
pub fn random_probability<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbabilityVector {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    ProbabilityVector::new(raw.into_iter().map(|x| x / total).collect()).expect("normalized")
}

/// Full-rank mixed state GG†/Tr[GG†].
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, dim);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).expect("Wishart state")
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    DensityMatrix::pure(&ginibre(rng, dim, 1).column(0)).expect("nonzero")
}

/// Random Hermitian operator with unit trace (generally indefinite).
pub fn random_unit_trace_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    let g = ginibre(rng, dim, dim);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    let shift = (h.trace().re - 1.0) / dim as f64;
    let m = &h - &ComplexMatrix::identity(dim).scale_real(shift);
    HermitianOperator::from_hermitian_part(&m)
}

/// POVM S^{-1/2} G_j S^{-1/2} with S = Σ G_j for Wishart G_j.
pub fn random_povm_effects<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Vec<HermitianOperator> {
    let raw: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre(rng, dim, dim);
            (&g * &g.adjoint()).hermitian_part()
        })
        .collect();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for m in &raw {
        sum = &sum + m;
    }
    let inv_sqrt = HermitianOperator::from_hermitian_part(&sum).eig().map(|x| 1.0 / x.sqrt());
    raw.iter()
        .map(|m| HermitianOperator::from_hermitian_part(&(&(&inv_sqrt * m) * &inv_sqrt)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometries_and_channels_are_valid() {
        let mut rng = seeded(7);
        let u = random_unitary(&mut rng, 4);
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
        for rank in 1..=4 {
            let ch = random_channel(&mut rng, 2, rank);
            assert!(ch.tp_residual() < 1e-13);
            assert_eq!(ch.choi_rank(), rank);
        }
        assert!(random_unital_channel(&mut rng, 2, 3).is_unital());
    }

    #[test]
    fn povms_sum_to_identity() {
        let mut rng = seeded(3);
        let effects = random_povm_effects(&mut rng, 2, 3);
        let mut sum = ComplexMatrix::zeros(2, 2);
        for e in &effects {
            assert!(e.min_eigenvalue() > -1e-12);
            sum = &sum + e.matrix();
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = random_state(&mut seeded(11), 2);
        let b = random_state(&mut seeded(11), 2);
        assert_eq!(a, b);
        let h = random_unit_trace_hermitian(&mut seeded(1), 3);
        assert!((h.trace() - 1.0).abs() < 1e-12);
    }
}
