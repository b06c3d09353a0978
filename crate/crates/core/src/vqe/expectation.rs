//! `⟨ψ|𝓗|ψ⟩` evaluated three ways: a dense reference, the context-aware
//! circuit per rewritten term, and a simulated swap test.

use num_complex::Complex64;

use crate::block::Matrix;
use crate::circuit::{dense_apply, run_and_extract};
use crate::encoding::EncodedMemory;
use crate::error::{Error, Result};
use crate::exec::{map_collect, Parallelism};
use crate::statevec::{inner_product, GateMatrix2, Register, StateVector};
use crate::vqe::pauli::{Hamiltonian, RewrittenTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Dense matrix built straight from the Pauli letters.
    Exact,
    /// Context-aware circuit per rewritten term.
    #[default]
    Circuit,
    /// Circuit output compared with `ψ` through a swap test.
    Swap,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EvalMode::Exact),
            "circuit" => Ok(EvalMode::Circuit),
            "swap" => Ok(EvalMode::Swap),
            _ => Err(Error::arg(format!("unknown evaluation mode `{s}`"))),
        }
    }
}

/// A Hamiltonian with everything each evaluation mode needs precomputed.
#[derive(Debug, Clone)]
pub struct Observable {
    n: usize,
    rewritten: Vec<RewrittenTerm>,
    memories: Vec<EncodedMemory>,
    dense: Matrix,
}

impl Observable {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        let rewritten = h.rewritten();
        let memories = rewritten
            .iter()
            .map(RewrittenTerm::to_memory)
            .collect::<Result<_>>()?;
        Ok(Observable {
            n: h.n(),
            rewritten,
            memories,
            dense: h.to_dense(),
        })
    }

    /// From rewritten terms alone; the dense reference is `Σ c·H·P`.
    pub fn from_rewritten(terms: Vec<RewrittenTerm>) -> Result<Self> {
        let n = terms.first().ok_or_else(|| Error::arg("no terms"))?.n();
        if terms.iter().any(|t| t.n() != n) {
            return Err(Error::arg("rewritten terms disagree on qubit count"));
        }
        let dim = 1 << n;
        let mut dense = Matrix::zeros(dim, dim);
        for t in &terms {
            dense += t.diag_matrix() * t.perm_matrix() * t.c;
        }
        let memories = terms
            .iter()
            .map(RewrittenTerm::to_memory)
            .collect::<Result<_>>()?;
        Ok(Observable {
            n,
            rewritten: terms,
            memories,
            dense,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dense(&self) -> &Matrix {
        &self.dense
    }

    pub fn rewritten(&self) -> &[RewrittenTerm] {
        &self.rewritten
    }

    /// Smallest eigenvalue of the dense Hamiltonian.
    pub fn ground_energy(&self) -> f64 {
        ground_energy(&self.dense)
    }

    pub fn expectation(&self, psi: &StateVector, mode: EvalMode) -> Result<f64> {
        self.expectation_with(psi, mode, Parallelism::Sequential)
    }

    /// Like [`Observable::expectation`], fanning out over terms when asked.
    pub fn expectation_with(
        &self,
        psi: &StateVector,
        mode: EvalMode,
        par: Parallelism,
    ) -> Result<f64> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n,
                actual: psi.len(),
            });
        }
        let total: Complex64 = match mode {
            EvalMode::Exact => {
                let h_psi = dense_apply(&self.dense, psi.amplitudes());
                inner_product(psi.amplitudes(), &h_psi)?
            }
            EvalMode::Circuit | EvalMode::Swap => {
                let idx: Vec<usize> = (0..self.rewritten.len()).collect();
                let parts = map_collect(&idx, par, |&t| self.term_value(t, psi, mode));
                let mut sum = Complex64::new(0.0, 0.0);
                for p in parts {
                    sum += p?;
                }
                sum
            }
        };
        let scale = self
            .rewritten
            .iter()
            .map(|t| t.c.norm())
            .sum::<f64>()
            .max(1.0);
        if total.im.abs() > 1e-9 * scale {
            return Err(Error::NonHermitian { imag: total.im });
        }
        Ok(total.re)
    }

    fn term_value(&self, t: usize, psi: &StateVector, mode: EvalMode) -> Result<Complex64> {
        let term = &self.rewritten[t];
        let result = run_and_extract(&self.memories[t], psi)?;
        let hp_psi = result.unscaled();
        let overlap = inner_product(psi.amplitudes(), &hp_psi)?;
        let value = match mode {
            EvalMode::Swap => {
                let norm = hp_psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 || overlap.norm() == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let phi =
                        StateVector::from_amplitudes(hp_psi.iter().map(|a| a / norm).collect())?;
                    let fidelity = swap_test(psi, &phi)?;
                    // the swap test only sees |⟨ψ|φ⟩|²; the phase comes from the overlap
                    overlap / overlap.norm() * (norm * fidelity.sqrt())
                }
            }
            _ => overlap,
        };
        Ok(term.c * value)
    }
}

/// Simulated swap test on `|0⟩|a⟩|b⟩`; returns `|⟨a|b⟩|²` from the ancilla
/// probability `P(0) = (1 + |⟨a|b⟩|²)/2`.
pub fn swap_test(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.num_qubits();
    let mut state = StateVector::zero_state(1).tensor(a).tensor(b);
    let h = GateMatrix2::hadamard();
    state.apply_gate_1q(0, &h)?;
    for q in 0..n {
        state.apply_controlled_swap(0, 1 + q, 1 + n + q)?;
    }
    state.apply_gate_1q(0, &h)?;
    let (_, p0) = state.project_register(Register::new(0, 1), 0)?;
    Ok((2.0 * p0 - 1.0).max(0.0))
}

pub fn ground_energy(h: &Matrix) -> f64 {
    h.clone().symmetric_eigenvalues().min()
}
