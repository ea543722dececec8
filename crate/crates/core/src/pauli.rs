//! Pauli matrices and multi-qubit Pauli strings.

use crate::error::{Error, Result};
use crate::linalg::{c, re, tensor_all, ComplexMatrix};

/// σ_0 = I, σ_1 = X, σ_2 = Y, σ_3 = Z.
pub fn pauli(index: u8) -> ComplexMatrix {
    let z = re(0.0);
    let one = re(1.0);
    let data = match index {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
        3 => vec![one, z, z, re(-1.0)],
        _ => panic!("Pauli index {index} out of range"),
    };
    ComplexMatrix::new(2, 2, data).expect("2x2")
}

/// σ_α = σ_{α1} ⊗ ··· ⊗ σ_{αm}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<u8>);

impl PauliString {
    pub fn new(components: Vec<u8>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("empty Pauli string".into()));
        }
        if let Some(bad) = components.iter().find(|&&k| k > 3) {
            return Err(Error::InvalidParameter(format!("Pauli index {bad} not in 0..=3")));
        }
        Ok(Self(components))
    }

    pub fn identity(qubits: usize) -> Self {
        Self(vec![0; qubits])
    }

    pub fn components(&self) -> &[u8] {
        &self.0
    }

    pub fn qubits(&self) -> usize {
        self.0.len()
    }

    pub fn operator(&self) -> ComplexMatrix {
        let factors: Vec<ComplexMatrix> = self.0.iter().map(|&k| pauli(k)).collect();
        tensor_all(&factors)
    }

    /// Π^± = (I ± σ_α)/2, the projector onto the ±1 eigenspace.
    pub fn projector(&self, positive: bool) -> ComplexMatrix {
        let dim = 1usize << self.qubits();
        let sign = if positive { 1.0 } else { -1.0 };
        (&ComplexMatrix::identity(dim) + &self.operator().scale_real(sign)).scale_real(0.5)
    }

    /// All 4^m strings on m qubits in lexicographic order.
    pub fn all(qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..4usize.pow(qubits as u32)).map(move |mut code| {
            let mut comps = vec![0u8; qubits];
            for slot in (0..qubits).rev() {
                comps[slot] = (code % 4) as u8;
                code /= 4;
            }
            PauliString(comps)
        })
    }
}
