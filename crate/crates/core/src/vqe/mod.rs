//! Variational eigensolver driven by the context-aware circuit.
//!
//! Each Pauli term `h·𝓗ᵢ` is rewritten as `cᵢHᵢPᵢ`, `HᵢPᵢ` is stored as a
//! gate memory, and the energy `Σ cᵢ⟨ψ(θ)|HᵢPᵢ|ψ(θ)⟩` is minimized over the
//! ansatz angles with seeded Nelder–Mead restarts.

pub mod ansatz;
pub mod curve;
pub mod expectation;
pub mod optimizer;
pub mod pauli;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{map_range, Parallelism};

pub use ansatz::{ansatz_state, AnsatzSpec};
pub use curve::{energy_curve, read_manifest, write_csv, CurvePoint, CurveRow};
pub use expectation::{ground_energy, swap_test, EvalMode, Observable};
pub use optimizer::{Minimum, NelderMead};
pub use pauli::{
    pauli_matrix, rewrite_term, Hamiltonian, LastGate, Pauli, PauliTerm, RewrittenTerm,
};

#[derive(Debug, Clone, PartialEq)]
pub struct VqeConfig {
    /// Nelder–Mead iteration budget per restart.
    pub max_iter: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Convergence threshold on simplex value spread.
    pub tolerance: f64,
    pub mode: EvalMode,
    pub parallelism: Parallelism,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig {
            max_iter: 2000,
            seed: 7,
            restarts: 5,
            tolerance: 1e-10,
            mode: EvalMode::Circuit,
            parallelism: Parallelism::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub theta: Vec<f64>,
    pub energy: f64,
    /// Best-so-far energy per iteration of the winning restart.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    /// Whether the winning restart stopped on tolerance rather than the budget.
    pub converged: bool,
    /// Final energy of every restart, in restart order.
    pub restart_energies: Vec<f64>,
}

/// Minimizes `⟨ψ(θ)|𝓗|ψ(θ)⟩` over the ansatz angles.
pub fn vqe_minimize(h: &Hamiltonian, spec: &AnsatzSpec, config: &VqeConfig) -> Result<VqeResult> {
    let obs = Observable::new(h)?;
    minimize_observable(&obs, spec, config)
}

pub fn minimize_observable(
    obs: &Observable,
    spec: &AnsatzSpec,
    config: &VqeConfig,
) -> Result<VqeResult> {
    if config.restarts == 0 {
        return Err(Error::arg("at least one restart is required"));
    }
    let n = obs.n();
    let dim = spec.num_params(n);
    let energy = |theta: &[f64]| -> Result<f64> {
        let psi = ansatz_state(theta, spec, n)?;
        obs.expectation(&psi, config.mode)
    };
    // surface evaluation errors (e.g. non-Hermitian input) before optimizing
    energy(&vec![0.0; dim])?;

    let nm = NelderMead {
        max_iter: config.max_iter,
        ftol: config.tolerance,
        initial_step: 0.5,
    };
    let runs: Vec<Result<Minimum>> = map_range(config.restarts, config.parallelism, |restart| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
        let x0: Vec<f64> = (0..dim)
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let mut failure = None;
        let min = nm.minimize(
            |theta| match energy(theta) {
                Ok(e) => e,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            &x0,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(min),
        }
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let restart_energies: Vec<f64> = runs.iter().map(|m| m.fx).collect();
    let best = runs
        .into_iter()
        .min_by(|a, b| a.fx.total_cmp(&b.fx))
        .expect("restarts > 0");
    Ok(VqeResult {
        theta: best.x,
        energy: best.fx,
        trace: best.trace,
        iterations: best.iterations,
        evaluations: best.evaluations,
        converged: best.converged,
        restart_energies,
    })
}
