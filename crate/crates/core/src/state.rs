use crate::error::{Error, Result};
use crate::linalg::{c, re, ComplexMatrix, HermitianOperator, C64};

/// Trace tolerance for states and PDMs.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianOperator);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::from_hermitian(HermitianOperator::new(m)?)
    }

    pub fn from_hermitian(h: HermitianOperator) -> Result<Self> {
        let trace = h.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let min_eigenvalue = h.min_eigenvalue();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self(h))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianOperator::from_hermitian_part(
            &ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        ))
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 {
            return Err(Error::InvalidParameter("pure state vector is zero".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(HermitianOperator::from_hermitian_part(&ComplexMatrix::outer(&unit))))
    }

    /// Computational-basis diagonal state diag(p).
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(p))
    }

    /// Qubit state ½(I + r·σ) with |r| ≤ 1.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!("Bloch vector length {len} exceeds 1")));
        }
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                re(0.5 * (1.0 + r[2])),
                c(0.5 * r[0], -0.5 * r[1]),
                c(0.5 * r[0], 0.5 * r[1]),
                re(0.5 * (1.0 - r[2])),
            ],
        )?;
        Ok(Self(HermitianOperator::from_hermitian_part(&m)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn as_hermitian(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianOperator {
        self.0
    }

    /// Bloch vector (x, y, z) of a qubit state.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let m = self.matrix();
        Some([2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re])
    }
}
