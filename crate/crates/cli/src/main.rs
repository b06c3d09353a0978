//! `ctxsim` — encode matrices as gate memories, apply them to states, and run
//! the context-aware VQE.
//!
//! Exit codes: 0 success, 1 internal error, 2 input error, 3 verification
//! failure, 4 optimizer did not converge (results are still written).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ctxsim::circuit::{format_state, parse_state};
use ctxsim::numfmt::fmt_g17;
use ctxsim::vqe::{
    energy_curve, minimize_observable, read_manifest, write_csv, AnsatzSpec, EvalMode, Hamiltonian,
    Observable, VqeConfig,
};
use ctxsim::{run_and_extract, EncodedMemory, MatrixSource, Parallelism, StateVector};

const VERIFY_TOL: f64 = 1e-9;

const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ctxsim",
    version,
    about = "Context-aware gate-memory simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a matrix file as a gate memory (.qgm).
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Apply a stored memory to a state and post-select the result.
    Apply {
        #[arg(long)]
        memory: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Compare against the dense product and fail above 1e-9.
        #[arg(long)]
        verify: bool,
        /// Where to write the recovered H|ψ⟩.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the energy of one Hamiltonian file.
    Vqe {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[command(flatten)]
        opts: VqeOpts,
    },
    /// Run VQE over every Hamiltonian listed in a `distance path` manifest.
    Curve {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        opts: VqeOpts,
    },
}

#[derive(Args)]
struct VqeOpts {
    #[arg(long, default_value_t = 3)]
    layers: usize,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// exact | circuit | swap
    #[arg(long, default_value = "circuit")]
    mode: EvalMode,
    /// Run restarts and curve points one at a time.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: PathBuf,
}

impl VqeOpts {
    fn config(&self) -> (AnsatzSpec, VqeConfig) {
        let config = VqeConfig {
            max_iter: self.max_iter,
            seed: self.seed,
            restarts: self.restarts,
            mode: self.mode,
            parallelism: if self.sequential {
                Parallelism::Sequential
            } else {
                Parallelism::Parallel
            },
            ..VqeConfig::default()
        };
        (
            AnsatzSpec {
                layers: self.layers,
            },
            config,
        )
    }
}

/// A failure carrying its exit code.
struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        let code = match e.downcast_ref::<ctxsim::Error>() {
            Some(ctxsim::Error::Numerical(_)) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure(code, e)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes via a temp file in the target directory, then renames over `path`.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn encode(input: &Path, output: &Path) -> Result<u8, Failure> {
    let source =
        MatrixSource::parse(&read(input)?).with_context(|| format!("in {}", input.display()))?;
    let mem = ctxsim::encode_memory(&source.decompose()?)?;
    write_atomic(output, &mem.serialize())?;
    println!("n {}", mem.n());
    println!("zeta {}", fmt_g17(mem.zeta()));
    println!("records {}", mem.len());
    println!("r {}", mem.r());
    Ok(0)
}

fn apply(memory: &Path, state: &Path, verify: bool, out: Option<&Path>) -> Result<u8, Failure> {
    let mem =
        EncodedMemory::parse(&read(memory)?).with_context(|| format!("in {}", memory.display()))?;
    let amps = parse_state(&read(state)?).with_context(|| format!("in {}", state.display()))?;
    let psi = StateVector::from_amplitudes(amps)?;
    let result = run_and_extract(&mem, &psi)?;

    println!(
        "success_probability {}",
        fmt_g17(result.success_probability)
    );
    println!("scale {}", fmt_g17(result.scale));
    if result.success_probability == 0.0 {
        eprintln!("warning: success probability is zero (H|ψ⟩ = 0); the output is all zeros");
    }
    if let Some(out) = out {
        let body = format!(
            "# success_probability {}\n# scale {}\n{}",
            fmt_g17(result.success_probability),
            fmt_g17(result.scale),
            format_state(&result.unscaled())
        );
        write_atomic(out, &body)?;
    }
    if verify {
        let err = result.max_abs_error(&mem.to_dense(), &psi);
        println!("max_abs_error {}", fmt_g17(err));
        if err.is_nan() || err > VERIFY_TOL {
            eprintln!("verification failed: error above {VERIFY_TOL:e}");
            return Ok(EXIT_VERIFY);
        }
        println!("verify ok");
    }
    Ok(0)
}

fn vqe(path: &Path, opts: &VqeOpts) -> Result<u8, Failure> {
    let h = Hamiltonian::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let obs = Observable::new(&h)?;
    let (spec, config) = opts.config();
    let result = minimize_observable(&obs, &spec, &config)?;
    let exact = obs.ground_energy();
    let csv = format!(
        "vqe_energy,exact_energy,iterations,converged\n{},{},{},{}\n",
        fmt_g17(result.energy),
        fmt_g17(exact),
        result.iterations,
        result.converged
    );
    write_atomic(&opts.out, &csv)?;
    println!("vqe_energy {}", fmt_g17(result.energy));
    println!("exact_energy {}", fmt_g17(exact));
    println!("iterations {}", result.iterations);
    if !result.converged {
        eprintln!("warning: optimizer hit --max-iter before converging");
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

fn curve(manifest: &Path, opts: &VqeOpts) -> Result<u8, Failure> {
    let points = read_manifest(manifest).with_context(|| format!("in {}", manifest.display()))?;
    for p in &points {
        if !p.path.is_file() {
            return Err(anyhow::anyhow!(
                "{} lists missing file {}",
                manifest.display(),
                p.path.display()
            )
            .into());
        }
    }
    let (spec, config) = opts.config();
    let rows = energy_curve(&points, &spec, &config);
    write_atomic(&opts.out, &write_csv(&rows))?;
    for row in &rows {
        if let Some(err) = &row.error {
            eprintln!("warning: distance {}: {err}", fmt_g17(row.distance));
        }
    }
    println!("rows {}", rows.len());
    if rows.iter().any(|r| !r.converged) {
        eprintln!("warning: some points did not converge");
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Encode { input, output } => encode(input, output),
        Command::Apply {
            memory,
            state,
            verify,
            out,
        } => apply(memory, state, *verify, out.as_deref()),
        Command::Vqe { hamiltonian, opts } => vqe(hamiltonian, opts),
        Command::Curve { manifest, opts } => curve(manifest, opts),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
