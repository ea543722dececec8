//! Bayesian inverses: channels ℳ with 𝒮(𝒩 ⋆ ρ) = ℳ ⋆ 𝒩(ρ), where 𝒮 swaps
//! the two time slots.
//!
//! The unknown 𝒥[ℳ] is expanded in an orthonormal basis of Hermitian
//! matrices, which makes the swap relation and trace preservation a real
//! linear system. Complete positivity is then sought on the affine solution
//! set by alternating projections against the PSD cone of the Choi matrix.

use crate::channel::QuantumChannel;
use crate::entropy::mutual_information;
use crate::error::{Error, Result};
use crate::linalg::{c, partial_trace, partial_transpose_first, swap_bipartite, ComplexMatrix, HermitianOperator};
use crate::pdm::{star_operator, star_product};
use crate::state::DensityMatrix;
use crate::svd::{svd, RealMatrix};
use crate::theorems::multiset_distance;

/// Tolerance on the linear-system residual and the returned representative.
pub const BAYES_TOL: f64 = 1e-7;
const MAX_ITERATIONS: usize = 10_000;
const SVD_RELATIVE_CUTOFF: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    None,
    Unique,
    Family,
}

#[derive(Clone, Debug)]
pub struct BayesSolution {
    pub kind: SolutionKind,
    pub representative: Option<QuantumChannel>,
    /// Euclidean residual of the least-squares solution of the linear system.
    pub residual: f64,
    /// Dimension of the affine solution space.
    pub null_dimension: usize,
    /// Smallest Choi eigenvalue at the final iterate.
    pub min_choi_eigenvalue: f64,
    pub iterations: usize,
    point: Vec<f64>,
    null_space: Vec<Vec<f64>>,
    dim_in: usize,
    dim_out: usize,
}

impl BayesSolution {
    /// Another CP member of a family, found by stepping from the
    /// representative along a null direction of the linear system.
    pub fn other_member(&self) -> Option<QuantumChannel> {
        if self.kind != SolutionKind::Family {
            return None;
        }
        let basis = HermitianBasis::new(self.dim_in * self.dim_out);
        for n in &self.null_space {
            for sign in [1.0, -1.0] {
                let mut step = 0.25;
                while step > 1e-4 {
                    let x: Vec<f64> = self.point.iter().zip(n).map(|(p, d)| p + sign * step * d).collect();
                    let choi = choi_of(&basis.matrix(&x), self.dim_in, self.dim_out);
                    if choi.min_eigenvalue() >= -1e-12 {
                        return channel_from_choi(&choi, self.dim_in, self.dim_out).ok();
                    }
                    step /= 2.0;
                }
            }
        }
        None
    }
}

/// Orthonormal Hermitian basis E_kk, (E_kl+E_lk)/√2, i(E_kl−E_lk)/√2.
struct HermitianBasis {
    dim: usize,
}

impl HermitianBasis {
    fn new(dim: usize) -> Self {
        Self { dim }
    }

    fn len(&self) -> usize {
        self.dim * self.dim
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim).flat_map(move |k| (k + 1..self.dim).map(move |l| (k, l)))
    }

    fn element(&self, index: usize) -> ComplexMatrix {
        let d = self.dim;
        let mut m = ComplexMatrix::zeros(d, d);
        if index < d {
            m[(index, index)] = c(1.0, 0.0);
            return m;
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rest = index - d;
        let (k, l) = self.pairs().nth(rest / 2).expect("index in range");
        if rest.is_multiple_of(2) {
            m[(k, l)] = c(s, 0.0);
            m[(l, k)] = c(s, 0.0);
        } else {
            m[(k, l)] = c(0.0, s);
            m[(l, k)] = c(0.0, -s);
        }
        m
    }

    fn matrix(&self, x: &[f64]) -> ComplexMatrix {
        let d = self.dim;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            m[(k, k)] = c(x[k], 0.0);
        }
        for (n, (k, l)) in self.pairs().enumerate() {
            let (a, b) = (x[d + 2 * n] * s, x[d + 2 * n + 1] * s);
            m[(k, l)] = c(a, b);
            m[(l, k)] = c(a, -b);
        }
        m
    }

    fn coefficients(&self, m: &ComplexMatrix) -> Vec<f64> {
        let d = self.dim;
        let s = std::f64::consts::SQRT_2;
        let mut x = vec![0.0; self.len()];
        for k in 0..d {
            x[k] = m[(k, k)].re;
        }
        for (n, (k, l)) in self.pairs().enumerate() {
            let z = (m[(k, l)] + m[(l, k)].conj()) * 0.5;
            x[d + 2 * n] = z.re * s;
            x[d + 2 * n + 1] = z.im * s;
        }
        x
    }
}

fn choi_of(j: &ComplexMatrix, dim_in: usize, dim_out: usize) -> HermitianOperator {
    HermitianOperator::from_hermitian_part(&partial_transpose_first(j, dim_in, dim_out).expect("dims"))
}

/// Kraus operators from the clamped Choi matrix, renormalized to be exactly
/// trace preserving.
fn channel_from_choi(choi: &HermitianOperator, dim_in: usize, dim_out: usize) -> Result<QuantumChannel> {
    let spec = choi.eig();
    let mut kraus = Vec::new();
    for (k, &mu) in spec.eigenvalues.iter().enumerate() {
        if mu <= 1e-14 {
            continue;
        }
        let s = mu.sqrt();
        let mut op = ComplexMatrix::zeros(dim_out, dim_in);
        for b in 0..dim_in {
            for a in 0..dim_out {
                op[(a, b)] = spec.eigenvectors[(b * dim_out + a, k)] * s;
            }
        }
        kraus.push(op);
    }
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for k in &kraus {
        sum = &sum + &(&k.adjoint() * k);
    }
    let inv_sqrt = HermitianOperator::from_hermitian_part(&sum)
        .eig()
        .map(|x| if x > 1e-12 { 1.0 / x.sqrt() } else { 0.0 });
    let kraus = kraus.iter().map(|k| k * &inv_sqrt).collect();
    QuantumChannel::with_tolerance(kraus, BAYES_TOL)
}

fn push_complex(rows: &mut [Vec<f64>], m: &ComplexMatrix, offset: usize) {
    for (idx, z) in m.as_slice().iter().enumerate() {
        rows[offset + 2 * idx].push(z.re);
        rows[offset + 2 * idx + 1].push(z.im);
    }
}

/// Solve for the Bayesian inverse of `ch` with respect to `rho`.
pub fn bayesian_inverse(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<BayesSolution> {
    let (da, db) = (ch.dim_in(), ch.dim_out());
    let sigma = DensityMatrix::new(ch.apply(rho.matrix())?.hermitian_part())?;
    let forward = star_product(ch, rho)?;
    let target = swap_bipartite(forward.matrix(), da, db)?;

    // ℳ maps B → A, so 𝒥[ℳ] lives on B ⊗ A.
    let dim = db * da;
    let basis = HermitianBasis::new(dim);
    let n_unknowns = basis.len();
    let n_rows = 2 * dim * dim + 2 * db * db;
    let mut rows: Vec<Vec<f64>> = vec![Vec::with_capacity(n_unknowns); n_rows];
    for m in 0..n_unknowns {
        let e = basis.element(m);
        let star = star_operator(&e, sigma.matrix(), da)?;
        push_complex(&mut rows, &star, 0);
        let tr = partial_trace(&e, &[db, da], &[0])?;
        push_complex(&mut rows, &tr, 2 * dim * dim);
    }
    let a = RealMatrix::from_rows(&rows);
    let mut rhs = Vec::with_capacity(n_rows);
    for z in target.as_slice() {
        rhs.extend([z.re, z.im]);
    }
    for z in ComplexMatrix::identity(db).as_slice() {
        rhs.extend([z.re, z.im]);
    }

    let dec = svd(&a);
    let cutoff = SVD_RELATIVE_CUTOFF * dec.singular_values[0].max(1.0);
    let x_star = dec.solve(&rhs, cutoff);
    let fitted = a.mul_vec(&x_star);
    let residual = fitted.iter().zip(&rhs).map(|(f, b)| (f - b).powi(2)).sum::<f64>().sqrt();
    let null_space = dec.null_space(cutoff);

    let mut solution = BayesSolution {
        kind: SolutionKind::None,
        representative: None,
        residual,
        null_dimension: null_space.len(),
        min_choi_eigenvalue: f64::NAN,
        iterations: 0,
        point: x_star.clone(),
        null_space,
        dim_in: db,
        dim_out: da,
    };
    if residual > BAYES_TOL {
        return Ok(solution);
    }

    // Alternate between the affine solution set and the PSD Choi cone.
    let project_affine = |y: &[f64]| -> Vec<f64> {
        let mut x = x_star.clone();
        for n in &solution.null_space {
            let coeff: f64 = n.iter().zip(y).zip(&x_star).map(|((a, b), s)| a * (b - s)).sum();
            for (xi, ni) in x.iter_mut().zip(n) {
                *xi += coeff * ni;
            }
        }
        x
    };
    let mut x = x_star.clone();
    let mut min_eig = choi_of(&basis.matrix(&x), db, da).min_eigenvalue();
    let mut iterations = 0;
    if !solution.null_space.is_empty() {
        while min_eig < -1e-10 && iterations < MAX_ITERATIONS {
            let choi = choi_of(&basis.matrix(&x), db, da);
            let clamped = choi.eig().map(|v| v.max(0.0));
            let j = partial_transpose_first(&clamped, db, da)?;
            let next = project_affine(&basis.coefficients(&j));
            let moved = next.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            x = next;
            iterations += 1;
            min_eig = choi_of(&basis.matrix(&x), db, da).min_eigenvalue();
            if moved < 1e-14 {
                break;
            }
        }
    }
    solution.iterations = iterations;
    solution.min_choi_eigenvalue = min_eig;
    solution.point = x.clone();

    if min_eig >= -BAYES_TOL {
        let choi = choi_of(&basis.matrix(&x), db, da);
        if let Ok(rep) = channel_from_choi(&choi, db, da) {
            solution.kind = if solution.null_dimension == 0 {
                SolutionKind::Unique
            } else {
                SolutionKind::Family
            };
            solution.representative = Some(rep);
        }
    }
    Ok(solution)
}

/// Forward and backward two-time information for a channel and its
/// Bayesian inverse.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub kind: SolutionKind,
    pub mi_forward: f64,
    pub mi_backward: f64,
    /// Distance between the spectra of 𝒩 ⋆ ρ and ℳ ⋆ σ.
    pub spectrum_error: f64,
    /// max |ℳ(σ) − ρ|.
    pub inversion_error: f64,
    /// max |𝒮(𝒩 ⋆ ρ) − ℳ ⋆ σ|.
    pub swap_residual: f64,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        (self.mi_forward - self.mi_backward).abs() <= BAYES_TOL
            && self.spectrum_error <= BAYES_TOL
            && self.inversion_error <= BAYES_TOL
            && self.swap_residual <= BAYES_TOL
    }
}

pub fn verify_time_symmetry(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<SymmetryReport> {
    let sol = bayesian_inverse(ch, rho)?;
    let inverse = sol.representative.as_ref().ok_or_else(|| {
        Error::Precondition(format!(
            "no Bayesian inverse found (residual {:.3e}, min Choi eigenvalue {:.3e})",
            sol.residual, sol.min_choi_eigenvalue
        ))
    })?;
    let sigma = DensityMatrix::new(ch.apply(rho.matrix())?.hermitian_part())?;
    let forward = star_product(ch, rho)?;
    let backward = star_product(inverse, &sigma)?;
    let swapped = swap_bipartite(forward.matrix(), ch.dim_in(), ch.dim_out())?;
    Ok(SymmetryReport {
        kind: sol.kind,
        mi_forward: mutual_information(&forward, 1)?,
        mi_backward: mutual_information(&backward, 1)?,
        spectrum_error: multiset_distance(&forward.eigenvalues(), &backward.eigenvalues()),
        inversion_error: inverse.apply(sigma.matrix())?.max_abs_diff(rho.matrix()),
        swap_residual: swapped.max_abs_diff(backward.matrix()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_state, random_unitary, seeded};

    fn same_map(a: &QuantumChannel, b: &QuantumChannel) -> f64 {
        a.jamiolkowski().matrix().max_abs_diff(b.jamiolkowski().matrix())
    }

    #[test]
    fn basis_round_trip() {
        let basis = HermitianBasis::new(3);
        let x: Vec<f64> = (0..9).map(|i| i as f64 * 0.3 - 1.0).collect();
        let m = basis.matrix(&x);
        assert!(m.hermiticity_deviation() < 1e-15);
        let back = basis.coefficients(&m);
        assert!(x.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-14));
        for k in 0..9 {
            let e = basis.element(k);
            let mut unit = vec![0.0; 9];
            unit[k] = 1.0;
            assert!(e.max_abs_diff(&basis.matrix(&unit)) < 1e-15);
        }
    }

    #[test]
    fn unitary_inverse_is_adjoint() {
        let mut rng = seeded(9);
        let u = random_unitary(&mut rng, 2);
        let ch = QuantumChannel::unitary(u.clone()).unwrap();
        let rho = random_state(&mut rng, 2);
        let sol = bayesian_inverse(&ch, &rho).unwrap();
        assert_eq!(sol.kind, SolutionKind::Unique);
        let expected = QuantumChannel::unitary(u.adjoint()).unwrap();
        assert!(same_map(sol.representative.as_ref().unwrap(), &expected) < 1e-8);
    }

    #[test]
    fn discard_prepare_inverse() {
        let mut rng = seeded(10);
        let rho = random_state(&mut rng, 2);
        let sigma0 = random_state(&mut rng, 2);
        let sol = bayesian_inverse(&QuantumChannel::discard_prepare(&sigma0), &rho).unwrap();
        assert_eq!(sol.kind, SolutionKind::Unique);
        let expected = QuantumChannel::discard_prepare(&rho);
        assert!(same_map(sol.representative.as_ref().unwrap(), &expected) < 1e-8);
    }

    #[test]
    fn depolarizing_pure_input_inverse_prepares_input() {
        let rho = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let sol = bayesian_inverse(&QuantumChannel::depolarizing(0.0).unwrap(), &rho).unwrap();
        assert_eq!(sol.kind, SolutionKind::Unique);
        let expected = QuantumChannel::discard_prepare(&rho);
        assert!(same_map(sol.representative.as_ref().unwrap(), &expected) < 1e-8);
    }

    #[test]
    fn pure_output_gives_family_with_well_defined_backward_pdm() {
        let sigma0 = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let rho = DensityMatrix::from_bloch([0.2, 0.1, -0.3]).unwrap();
        let ch = QuantumChannel::discard_prepare(&sigma0);
        let sol = bayesian_inverse(&ch, &rho).unwrap();
        assert_eq!(sol.kind, SolutionKind::Family);
        assert!(sol.null_dimension > 0);
        let rep = sol.representative.as_ref().unwrap();
        let other = sol.other_member().expect("second member");
        assert!(same_map(rep, &other) > 1e-6);
        let a = star_product(rep, &sigma0).unwrap();
        let b = star_product(&other, &sigma0).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-7);
    }

    #[test]
    fn symmetry_examples() {
        let u = QuantumChannel::unitary(random_unitary(&mut seeded(4), 2)).unwrap();
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let rep = verify_time_symmetry(&u, &rho).unwrap();
        assert!(rep.passed());
        let h2 = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((rep.mi_forward - h2).abs() < 1e-9);

        let sigma = DensityMatrix::from_bloch([0.0, 0.5, 0.5]).unwrap();
        let rep = verify_time_symmetry(&QuantumChannel::discard_prepare(&sigma), &rho).unwrap();
        assert!(rep.passed());
        assert!(rep.mi_forward.abs() < 1e-9 && rep.mi_backward.abs() < 1e-9);

        let pauli = QuantumChannel::pauli_channel([0.7, 0.1, 0.1, 0.1]).unwrap();
        let rep = verify_time_symmetry(&pauli, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(rep.passed());
    }
}
