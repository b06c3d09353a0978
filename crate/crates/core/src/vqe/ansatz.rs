//! Hardware-efficient ansatz: layers of per-qubit RY rotations, each
//! followed by a linear chain of CZ gates, closed by a final RY layer.

use crate::error::{Error, Result};
use crate::statevec::{GateMatrix2, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub layers: usize,
}

impl Default for AnsatzSpec {
    fn default() -> Self {
        AnsatzSpec { layers: 3 }
    }
}

impl AnsatzSpec {
    pub fn num_params(&self, n: usize) -> usize {
        n * (self.layers + 1)
    }
}

pub fn ansatz_state(theta: &[f64], spec: &AnsatzSpec, n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::arg("ansatz needs at least one qubit"));
    }
    if theta.len() != spec.num_params(n) {
        return Err(Error::arg(format!(
            "ansatz with {} layers on {n} qubits takes {} parameters, got {}",
            spec.layers,
            spec.num_params(n),
            theta.len()
        )));
    }
    let mut state = StateVector::zero_state(n);
    for (layer, angles) in theta.chunks_exact(n).enumerate() {
        for (q, &t) in angles.iter().enumerate() {
            state.apply_gate_1q(q, &GateMatrix2::ry(t))?;
        }
        if layer < spec.layers {
            for q in 0..n.saturating_sub(1) {
                state.apply_cz(q, q + 1)?;
            }
        }
    }
    Ok(state)
}
