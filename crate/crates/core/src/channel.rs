//! Quantum channels held as Kraus families, their Jamiołkowski and Choi
//! matrices, the qubit Pauli-transfer representation and its canonical
//! diagonal form.

use std::f64::consts::{PI, TAU};

use crate::entropy::ProbabilityVector;
use crate::error::{Error, Result};
use crate::linalg::{c, re, ComplexMatrix, HermitianOperator};
use crate::pauli::pauli;
use crate::state::DensityMatrix;
use crate::svd::{svd, RealMatrix};

/// Tolerance on the trace-preservation residual and on negative Choi eigenvalues.
pub const CPTP_TOL: f64 = 1e-9;
/// Choi eigenvalues above this count towards the Choi rank.
pub const CHOI_RANK_CUTOFF: f64 = 1e-9;

/// A completely positive trace-preserving map given by Kraus operators
/// (each `dim_out × dim_in`).
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, CPTP_TOL)
    }

    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus family".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::DimensionMismatch("zero-sized Kraus operator".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.rows() != dim_out || k.cols() != dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators of shapes {dim_out}x{dim_in} and {}x{}",
                k.rows(),
                k.cols()
            )));
        }
        let ch = Self {
            dim_in,
            dim_out,
            kraus,
        };
        let residual = ch.tp_residual();
        if residual > tol {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// max |Σ K†K − I|.
    pub fn tp_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    /// Σ_k K ρ K†.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !rho.is_square() || rho.rows() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dimension {} but operator is {}x{}",
                self.dim_in,
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(self.apply_unchecked(rho))
    }

    fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        out
    }

    /// 𝒥[𝒩] = Σ_{i,j} |i⟩⟨j| ⊗ 𝒩(|j⟩⟨i|), input system first.
    pub fn jamiolkowski(&self) -> HermitianOperator {
        let j = jamiolkowski_of_map(self.dim_in, self.dim_out, |e| self.apply_unchecked(e));
        HermitianOperator::from_hermitian_part(&j)
    }

    /// Positive Choi matrix Σ_{i,j} |i⟩⟨j| ⊗ 𝒩(|i⟩⟨j|).
    pub fn choi(&self) -> HermitianOperator {
        let (din, dout) = (self.dim_in, self.dim_out);
        let mut out = ComplexMatrix::zeros(din * dout, din * dout);
        for i in 0..din {
            for j in 0..din {
                let block = self.apply_unchecked(&ComplexMatrix::unit(din, i, j));
                for a in 0..dout {
                    for b in 0..dout {
                        out[(i * dout + a, j * dout + b)] = block[(a, b)];
                    }
                }
            }
        }
        HermitianOperator::from_hermitian_part(&out)
    }

    pub fn choi_rank(&self) -> usize {
        self.choi()
            .eigenvalues()
            .into_iter()
            .filter(|&x| x > CHOI_RANK_CUTOFF)
            .count()
    }

    /// 𝒩(I) = I within [`CPTP_TOL`].
    pub fn is_unital(&self) -> bool {
        self.dim_in == self.dim_out
            && self
                .apply_unchecked(&ComplexMatrix::identity(self.dim_in))
                .max_abs_diff(&ComplexMatrix::identity(self.dim_out))
                <= CPTP_TOL
    }

    pub fn is_unitary(&self) -> bool {
        self.dim_in == self.dim_out && self.choi_rank() == 1
    }

    /// A unitary U with 𝒩(ρ) = UρU†, if the channel is unitary.
    pub fn unitary_matrix(&self) -> Option<ComplexMatrix> {
        if !self.is_unitary() {
            return None;
        }
        let spec = self.choi().eig();
        let d = self.dim_in;
        let scale = spec.eigenvalues[0].max(0.0).sqrt();
        let mut u = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for a in 0..d {
                u[(a, i)] = spec.eigenvectors[(i * d + a, 0)] * scale;
            }
        }
        Some(u)
    }

    /// Rebuild a channel from a positive Choi matrix (input system first).
    pub fn from_choi(choi: &HermitianOperator, dim_in: usize, dim_out: usize) -> Result<Self> {
        if choi.dim() != dim_in * dim_out {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix of dimension {} for a {dim_in}->{dim_out} channel",
                choi.dim()
            )));
        }
        let spec = choi.eig();
        let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -CPTP_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let mut kraus = Vec::new();
        for (k, &mu) in spec.eigenvalues.iter().enumerate() {
            if mu <= 1e-14 {
                continue;
            }
            let s = mu.sqrt();
            let mut op = ComplexMatrix::zeros(dim_out, dim_in);
            for i in 0..dim_in {
                for a in 0..dim_out {
                    op[(a, i)] = spec.eigenvectors[(i * dim_out + a, k)] * s;
                }
            }
            kraus.push(op);
        }
        if kraus.is_empty() {
            return Err(Error::InvalidParameter("Choi matrix is zero".into()));
        }
        Self::new(kraus)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<QuantumChannel> {
        if first.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: inner output {} vs outer input {}",
                first.dim_out, self.dim_in
            )));
        }
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| first.kraus.iter().map(move |b| a * b))
            .collect();
        Ok(QuantumChannel {
            dim_in: first.dim_in,
            dim_out: self.dim_out,
            kraus,
        })
    }

    pub fn pauli_transfer(&self) -> Result<PauliTransfer> {
        PauliTransfer::of(self)
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        CanonicalForm::of(self)
    }

    // Constructors

    /// Identity channel on `qubits` qubits.
    pub fn identity(qubits: usize) -> Self {
        Self::identity_dim(1 << qubits)
    }

    pub fn identity_dim(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// ρ ↦ UρU†.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        let err = (&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(u.rows()));
        if err > CPTP_TOL {
            return Err(Error::InvalidParameter(format!(
                "matrix is not unitary (|U†U − I| = {err:.3e})"
            )));
        }
        Self::new(vec![u])
    }

    /// 𝓔_η(ρ) = ηρ + (1−η)Tr[ρ] I/2 as the Pauli mixture with weights
    /// (1+3η)/4, (1−η)/4, (1−η)/4, (1−η)/4.
    pub fn depolarizing(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!("depolarizing η = {eta} not in [0, 1]")));
        }
        let w = (1.0 - eta) / 4.0;
        Self::pauli_channel([(1.0 + 3.0 * eta) / 4.0, w, w, w])
    }

    /// Qubit dephasing map that zeroes the off-diagonal entries.
    pub fn decoherence() -> Self {
        Self {
            dim_in: 2,
            dim_out: 2,
            kraus: vec![ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::diag(&[0.0, 1.0])],
        }
    }

    /// ρ ↦ Tr[ρ]σ on a system of the same dimension as σ.
    pub fn discard_prepare(sigma: &DensityMatrix) -> Self {
        Self::discard_prepare_from(sigma.dim(), sigma)
    }

    /// ρ ↦ Tr[ρ]σ for inputs of dimension `dim_in`.
    pub fn discard_prepare_from(dim_in: usize, sigma: &DensityMatrix) -> Self {
        let spec = sigma.as_hermitian().eig();
        let dim_out = sigma.dim();
        let mut kraus = Vec::new();
        for (k, &mu) in spec.eigenvalues.iter().enumerate() {
            if mu <= 1e-14 {
                continue;
            }
            let s = mu.sqrt();
            for l in 0..dim_in {
                let mut op = ComplexMatrix::zeros(dim_out, dim_in);
                for a in 0..dim_out {
                    op[(a, l)] = spec.eigenvectors[(a, k)] * s;
                }
                kraus.push(op);
            }
        }
        Self {
            dim_in,
            dim_out,
            kraus,
        }
    }

    /// ρ ↦ Σ p_i σ_i ρ σ_i.
    pub fn pauli_channel(p: [f64; 4]) -> Result<Self> {
        let p = ProbabilityVector::new(p.to_vec())?;
        let kraus = p
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| pauli(i as u8).scale_real(w.sqrt()))
            .collect();
        Self::new(kraus)
    }

    /// Choi-rank-2 qubit channel with diagonal Pauli-transfer form
    /// T = diag(cos u, cos v, cos u·cos v), t = (0, 0, sin u·sin v).
    pub fn rank2_channel(u: f64, v: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&u) || !(0.0..PI).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "rank-2 parameters need u ∈ [0, 2π), v ∈ [0, π); got u = {u}, v = {v}"
            )));
        }
        let (a, b) = ((v - u) / 2.0, (v + u) / 2.0);
        let k_plus = ComplexMatrix::diag(&[a.cos(), b.cos()]);
        let k_minus = ComplexMatrix::from_real(2, 2, &[0.0, b.sin(), a.sin(), 0.0])?;
        Self::new(vec![k_plus, k_minus])
    }
}

/// J[f] = Σ_{i,j} |i⟩⟨j| ⊗ f(|j⟩⟨i|) for a linear map f from `dim_in` to
/// `dim_out` square matrices.
pub fn jamiolkowski_of_map(
    dim_in: usize,
    dim_out: usize,
    f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
    for i in 0..dim_in {
        for j in 0..dim_in {
            let block = f(&ComplexMatrix::unit(dim_in, j, i));
            assert_eq!(block.rows(), dim_out, "map output has wrong dimension");
            for a in 0..dim_out {
                for b in 0..dim_out {
                    out[(i * dim_out + a, j * dim_out + b)] = block[(a, b)];
                }
            }
        }
    }
    out
}

/// Qubit channel in the Pauli basis: 𝒩(½(I + r·σ)) = ½(I + (t + T r)·σ).
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTransfer {
    pub t: [f64; 3],
    pub t_matrix: [[f64; 3]; 3],
}

impl PauliTransfer {
    pub fn of(ch: &QuantumChannel) -> Result<Self> {
        if ch.dim_in != 2 || ch.dim_out != 2 {
            return Err(Error::Precondition(format!(
                "Pauli-transfer form needs a qubit channel, got {}->{}",
                ch.dim_in, ch.dim_out
            )));
        }
        let half_tr = |a: &ComplexMatrix, b: &ComplexMatrix| 0.5 * (a * b).trace().re;
        let img_id = ch.apply_unchecked(&ComplexMatrix::identity(2));
        let mut t = [0.0; 3];
        let mut t_matrix = [[0.0; 3]; 3];
        for i in 0..3 {
            let s_i = pauli(i as u8 + 1);
            t[i] = half_tr(&s_i, &img_id);
            for j in 0..3 {
                let img = ch.apply_unchecked(&pauli(j as u8 + 1));
                t_matrix[i][j] = half_tr(&s_i, &img);
            }
        }
        Ok(Self { t, t_matrix })
    }

    /// The 4×4 Pauli-basis matrix with first row (1, 0, 0, 0).
    pub fn to_matrix4(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        for i in 0..3 {
            m[i + 1][0] = self.t[i];
            for j in 0..3 {
                m[i + 1][j + 1] = self.t_matrix[i][j];
            }
        }
        m
    }

    /// Diagonal of T.
    pub fn diagonal(&self) -> [f64; 3] {
        [self.t_matrix[0][0], self.t_matrix[1][1], self.t_matrix[2][2]]
    }
}

fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// 𝒩 = 𝒱 ∘ 𝒩_d ∘ 𝒰 with unitary 𝒰, 𝒱 and 𝒩_d having diagonal T.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub u_pre: QuantumChannel,
    pub n_d: PauliTransfer,
    pub v_post: QuantumChannel,
    diagonal: QuantumChannel,
}

impl CanonicalForm {
    /// Signed SVD of T with both orthogonal factors forced into SO(3); any
    /// reflection is absorbed into the sign of λ₃.
    pub fn of(ch: &QuantumChannel) -> Result<Self> {
        let ptm = ch.pauli_transfer()?;
        let tm = RealMatrix::from_rows(&ptm.t_matrix.map(|r| r.to_vec()));
        let dec = svd(&tm);

        let mut v: [[f64; 3]; 3] = [[0.0; 3]; 3]; // columns v[k]
        for (k, col) in v.iter_mut().enumerate() {
            col.copy_from_slice(&dec.v.column(k));
        }
        if det3_cols(&v) < 0.0 {
            v[2] = v[2].map(|x| -x);
        }

        let apply_t = |x: &[f64; 3]| -> [f64; 3] {
            let y = tm.mul_vec(x);
            [y[0], y[1], y[2]]
        };
        const TINY: f64 = 1e-14;
        let u1 = normalize(apply_t(&v[0])).unwrap_or([1.0, 0.0, 0.0]);
        let w2 = apply_t(&v[1]);
        let u2 = normalize(sub(w2, scaled(u1, dot(u1, w2))))
            .filter(|_| dot(w2, w2).sqrt() > TINY)
            .unwrap_or_else(|| any_orthogonal(u1));
        let u3 = cross(u1, u2);
        let u = [u1, u2, u3];

        let lambda = [0, 1, 2].map(|k| dot(u[k], apply_t(&v[k])));
        // t' = O_Vᵀ t where O_V has columns u_k.
        let t_prime = [0, 1, 2].map(|k| dot(u[k], ptm.t));

        // O_U = Vᵀ (rows are v_k), O_V = U (columns are u_k).
        let o_u = [v[0], v[1], v[2]];
        let o_v = [0, 1, 2].map(|i| [u[0][i], u[1][i], u[2][i]]);
        let u_mat = su2_lift(&o_u);
        let v_mat = su2_lift(&o_v);
        let u_pre = QuantumChannel::unitary(u_mat.clone())?;
        let v_post = QuantumChannel::unitary(v_mat.clone())?;

        let kraus = ch
            .kraus
            .iter()
            .map(|k| &(&v_mat.adjoint() * k) * &u_mat.adjoint())
            .collect();
        let diagonal = QuantumChannel {
            dim_in: 2,
            dim_out: 2,
            kraus,
        };

        let mut t_matrix = [[0.0; 3]; 3];
        for k in 0..3 {
            t_matrix[k][k] = lambda[k];
        }
        Ok(Self {
            u_pre,
            n_d: PauliTransfer {
                t: t_prime,
                t_matrix,
            },
            v_post,
            diagonal,
        })
    }

    pub fn lambda(&self) -> [f64; 3] {
        self.n_d.diagonal()
    }

    /// 𝒩_d as a channel, 𝒱⁻¹ ∘ 𝒩 ∘ 𝒰⁻¹.
    pub fn diagonal_channel(&self) -> &QuantumChannel {
        &self.diagonal
    }

    /// Largest deviation between the Pauli-basis action of 𝒱 ∘ 𝒩_d ∘ 𝒰
    /// (built from the diagonal form) and that of `original`.
    pub fn recomposition_error(&self, original: &QuantumChannel) -> Result<f64> {
        let u = self.u_pre.pauli_transfer()?.to_matrix4();
        let v = self.v_post.pauli_transfer()?.to_matrix4();
        let composed = mat4_mul(&v, &mat4_mul(&self.n_d.to_matrix4(), &u));
        let target = original.pauli_transfer()?.to_matrix4();
        let mut err: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                err = err.max((composed[i][j] - target[i][j]).abs());
            }
        }
        Ok(err)
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scaled(a: [f64; 3], s: f64) -> [f64; 3] {
    a.map(|x| x * s)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = dot(a, a).sqrt();
    (n > 1e-300).then(|| scaled(a, 1.0 / n))
}

fn any_orthogonal(a: [f64; 3]) -> [f64; 3] {
    let trial = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    normalize(sub(trial, scaled(a, dot(a, trial)))).expect("nonzero")
}

fn det3_cols(cols: &[[f64; 3]; 3]) -> f64 {
    dot(cols[0], cross(cols[1], cols[2]))
}

/// A unitary U with U(r·σ)U† = (R r)·σ for a rotation R ∈ SO(3), via the
/// unit quaternion (w, x, y, z) of R: U = wI − i(xX + yY + zZ).
pub fn su2_lift(r: &[[f64; 3]; 3]) -> ComplexMatrix {
    let tr = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if tr > 0.0 {
        let s = 2.0 * (tr + 1.0).sqrt();
        w = 0.25 * s;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = 2.0 * (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt();
        w = (r[2][1] - r[1][2]) / s;
        x = 0.25 * s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] > r[2][2] {
        let s = 2.0 * (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt();
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = 0.25 * s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = 2.0 * (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt();
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = 0.25 * s;
    }
    let n = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / n, x / n, y / n, z / n);
    // wI − i(xX + yY + zZ)
    ComplexMatrix::new(2, 2, vec![c(w, -z), c(-y, -x), c(y, -x), c(w, z)]).expect("2x2")
}

/// Hadamard gate.
pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::new(2, 2, vec![re(s), re(s), re(s), re(-s)]).expect("2x2")
}
