//! Classical simulation of context-aware circuits that apply a matrix held
//! in a gate-encoded quantum memory to a state.
//!
//! The pipeline is:
//!
//! 1. [`block`] splits `H` into `Σᵢ HᵢPᵢ` (2×2 blocks keyed by shift `i` and
//!    block row `k`).
//! 2. [`encoding`] turns each block into amplitudes over the gate bank
//!    `[X, Z, -Z, XZ, ZX, -I, I, I]` and stores them with the norm `ζ`.
//! 3. [`circuit`] loads the memory next to `|ψ⟩`, runs the controlled
//!    permutation / gate bank / Hadamard circuit on a dense [`statevec`]
//!    engine and post-selects, giving `H|ψ⟩/(ζ·2^{(r+3)/2})`.
//! 4. [`vqe`] rewrites Pauli Hamiltonians term by term as `cᵢHᵢPᵢ` and
//!    minimizes energies through the same circuit.

pub mod block;
pub mod circuit;
pub mod encoding;
pub mod error;
pub mod exec;
pub mod numfmt;
pub mod statevec;
pub mod vqe;

pub use block::{permutation_for, Block2, BlockDecomposition, Matrix, MatrixSource};
pub use circuit::{
    prepare_input, run_and_extract, success_probability_bound_check, ApplyResult, Circuit,
    RegisterLayout,
};
pub use encoding::{
    decode_gatevector, encode_block, encode_memory, EncodedMemory, GateLabel, GateVector,
};
pub use error::{Error, Result};
pub use exec::Parallelism;
pub use statevec::{GateBank, GateMatrix2, Register, StateVector};
