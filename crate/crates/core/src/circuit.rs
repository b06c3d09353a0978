//! The context-aware circuit: load `|g⟩ ⊗ |ψ⟩`, permute the system by the
//! shift register, apply the gate bank selected by the gate register, then
//! Hadamard the shift and gate registers and post-select them on zero.
//!
//! Register order, most significant first: shift (`r` qubits), gate (3),
//! block row (`n-1`), system (`n`).

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::block::{permutation_for, Matrix};
use crate::encoding::EncodedMemory;
use crate::error::{Error, Result};
use crate::numfmt::{fmt_complex, parse_complex};
use crate::statevec::{GateBank, Register, StateVector};

/// Width of the gate-type register.
pub const GATE_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    pub r: usize,
    pub n: usize,
}

impl RegisterLayout {
    pub fn for_memory(mem: &EncodedMemory) -> Self {
        RegisterLayout {
            r: mem.r(),
            n: mem.n(),
        }
    }

    pub fn total_qubits(&self) -> usize {
        self.r + GATE_QUBITS + (self.n - 1) + self.n
    }

    pub fn shift_register(&self) -> Register {
        Register::new(0, self.r)
    }

    pub fn gate_register(&self) -> Register {
        Register::new(self.r, GATE_QUBITS)
    }

    pub fn row_register(&self) -> Register {
        Register::new(self.r + GATE_QUBITS, self.n - 1)
    }

    pub fn system_register(&self) -> Register {
        Register::new(self.r + GATE_QUBITS + self.n - 1, self.n)
    }

    /// Shift and gate registers together; both are Hadamarded and post-selected.
    pub fn ancilla_register(&self) -> Register {
        Register::new(0, self.r + GATE_QUBITS)
    }

    pub fn last_system_qubit(&self) -> usize {
        self.total_qubits() - 1
    }

    /// Basis index of `|shift⟩|gate⟩|row⟩|system⟩`.
    pub fn index(&self, shift: usize, gate: usize, row: usize, system: usize) -> usize {
        let mut idx = shift;
        idx = (idx << GATE_QUBITS) | gate;
        idx = (idx << (self.n - 1)) | row;
        (idx << self.n) | system
    }

    /// Basis index carrying output component `s` (all ancillas zero, row `s/2`).
    pub fn chosen_index(&self, s: usize) -> usize {
        self.index(0, 0, s >> 1, s)
    }

    /// `1/(ζ·2^{(r+3)/2})`.
    pub fn scale(&self, zeta: f64) -> f64 {
        1.0 / (zeta * ((self.r + GATE_QUBITS) as f64).exp2().sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    /// XOR the system register with `masks[m]` on shift-register value `m`.
    ControlledXMask {
        ctrl: Register,
        masks: Vec<usize>,
        system: Register,
    },
    /// Apply `bank[g]` to `target` on gate-register value `g`.
    ControlledBank {
        ctrl: Register,
        target: usize,
    },
    Hadamards(Register),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn build(mem: &EncodedMemory) -> Circuit {
        let layout = RegisterLayout::for_memory(mem);
        let mut ops = Vec::with_capacity(3);
        if mem.i_table().iter().any(|&i| i != 0) {
            let masks = mem
                .i_table()
                .iter()
                .map(|&i| permutation_for(i, mem.n()).expect("shift validated by memory"))
                .collect();
            ops.push(CircuitOp::ControlledXMask {
                ctrl: layout.shift_register(),
                masks,
                system: layout.system_register(),
            });
        }
        ops.push(CircuitOp::ControlledBank {
            ctrl: layout.gate_register(),
            target: layout.last_system_qubit(),
        });
        ops.push(CircuitOp::Hadamards(layout.ancilla_register()));
        Circuit { layout, ops }
    }

    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        let bank = GateBank::canonical();
        for op in &self.ops {
            match op {
                CircuitOp::ControlledXMask {
                    ctrl,
                    masks,
                    system,
                } => state.apply_controlled_xmask(*ctrl, masks, *system)?,
                CircuitOp::ControlledBank { ctrl, target } => {
                    state.apply_controlled_bank(*ctrl, *target, &bank)?
                }
                CircuitOp::Hadamards(reg) => state.apply_hadamards(*reg)?,
            }
        }
        Ok(())
    }

    /// Elementary gate count: one controlled X per distinct flipped system
    /// qubit, eight controlled bank gates, one H per ancilla qubit.
    pub fn gate_count(&self) -> usize {
        self.ops
            .iter()
            .map(|op| match op {
                CircuitOp::ControlledXMask { masks, .. } => {
                    masks.iter().fold(0, |acc, m| acc | m).count_ones() as usize
                }
                CircuitOp::ControlledBank { .. } => 8,
                CircuitOp::Hadamards(reg) => reg.width,
            })
            .sum()
    }
}

fn check_psi(mem: &EncodedMemory, psi: &StateVector) -> Result<()> {
    if psi.num_qubits() != mem.n() {
        return Err(Error::DimensionMismatch {
            expected: 1 << mem.n(),
            actual: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::arg(format!(
            "input state has norm {norm}, expected 1"
        )));
    }
    Ok(())
}

/// `|g⟩ ⊗ |ψ⟩` over the full register layout.
pub fn prepare_input(mem: &EncodedMemory, psi: &StateVector) -> Result<StateVector> {
    check_psi(mem, psi)?;
    let layout = RegisterLayout::for_memory(mem);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.total_qubits()];
    let inv_zeta = 1.0 / mem.zeta();
    for ((i, k), v) in mem.records() {
        let m = mem.position_of(i).expect("i_table covers every record");
        for (slot, raw) in v.0.iter().enumerate() {
            if raw.norm_sqr() == 0.0 {
                continue;
            }
            let base = layout.index(m, slot, k, 0);
            for (s, p) in psi.amplitudes().iter().enumerate() {
                amps[base | s] = raw * inv_zeta * p;
            }
        }
    }
    let state = StateVector::from_amplitudes(amps)?;
    let drift = (state.norm() - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::Numerical(format!(
            "prepared state norm drift {drift:e}"
        )));
    }
    Ok(state)
}

/// Full final state of the circuit before post-selection.
pub fn simulate(mem: &EncodedMemory, psi: &StateVector) -> Result<StateVector> {
    let mut state = prepare_input(mem, psi)?;
    Circuit::build(mem).run(&mut state)?;
    let drift = (state.norm() - 1.0).abs();
    if drift > 1e-9 {
        return Err(Error::Numerical(format!(
            "final state norm drift {drift:e}"
        )));
    }
    Ok(state)
}

/// Post-selected output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ApplyResult {
    /// `scale · H|ψ⟩`, read from the chosen basis states.
    pub output: Vec<Complex64>,
    pub success_probability: f64,
    pub scale: f64,
    pub layout: RegisterLayout,
}

impl ApplyResult {
    /// `output / scale`, i.e. the recovered `H|ψ⟩`.
    pub fn unscaled(&self) -> Vec<Complex64> {
        self.output.iter().map(|a| a / self.scale).collect()
    }

    /// Largest deviation of `output/scale` from the dense product `h·ψ`.
    pub fn max_abs_error(&self, h: &Matrix, psi: &StateVector) -> f64 {
        let expected = dense_apply(h, psi.amplitudes());
        self.unscaled()
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Reads the chosen basis states out of a final circuit state.
pub fn extract(layout: RegisterLayout, zeta: f64, state: &StateVector) -> ApplyResult {
    let amps = state.amplitudes();
    let output: Vec<Complex64> = (0..1usize << layout.n)
        .map(|s| amps[layout.chosen_index(s)])
        .collect();
    let success_probability = output.iter().map(|a| a.norm_sqr()).sum();
    ApplyResult {
        output,
        success_probability,
        scale: layout.scale(zeta),
        layout,
    }
}

/// Simulates the circuit and extracts `scale·H|ψ⟩` with its success probability.
pub fn run_and_extract(mem: &EncodedMemory, psi: &StateVector) -> Result<ApplyResult> {
    let state = simulate(mem, psi)?;
    Ok(extract(RegisterLayout::for_memory(mem), mem.zeta(), &state))
}

pub fn dense_apply(h: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..h.nrows())
        .map(|row| (0..h.ncols()).map(|col| h[(row, col)] * v[col]).sum())
        .collect()
}

/// Measured versus predicted success probability for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityReport {
    pub measured: f64,
    pub predicted: f64,
    pub zeta_sq: f64,
    pub r: usize,
    pub h_psi_norm_sq: f64,
}

impl ProbabilityReport {
    pub fn abs_error(&self) -> f64 {
        (self.measured - self.predicted).abs()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.abs_error() <= tol && self.measured <= 1.0 + tol
    }
}

/// Compares the post-selected probability with `‖Hψ‖²/(ζ²·2^{r+3})`.
pub fn success_probability_bound_check(
    mem: &EncodedMemory,
    psi: &StateVector,
) -> Result<ProbabilityReport> {
    let result = run_and_extract(mem, psi)?;
    let h_psi = dense_apply(&mem.to_dense(), psi.amplitudes());
    let h_psi_norm_sq: f64 = h_psi.iter().map(|a| a.norm_sqr()).sum();
    let zeta_sq = mem.zeta() * mem.zeta();
    let r = mem.r();
    Ok(ProbabilityReport {
        measured: result.success_probability,
        predicted: h_psi_norm_sq / (zeta_sq * ((r + GATE_QUBITS) as f64).exp2()),
        zeta_sq,
        r,
        h_psi_norm_sq,
    })
}

/// Writes a state file: `n <qubits>` then one amplitude per line.
pub fn format_state(amps: &[Complex64]) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", amps.len().trailing_zeros()).unwrap();
    for a in amps {
        writeln!(out, "{}", fmt_complex(*a)).unwrap();
    }
    out
}

/// Reads a state file; the amplitudes are returned as written (not normalized).
pub fn parse_state(text: &str) -> Result<Vec<Complex64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (no, head) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty state file"))?;
    let n: usize = head
        .strip_prefix('n')
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .filter(|&n| n <= 30)
        .ok_or_else(|| Error::parse(no, format!("expected `n <qubits>`, got `{head}`")))?;
    let mut amps = Vec::with_capacity(1 << n);
    let mut last = no;
    for (no, line) in lines {
        last = no;
        if amps.len() == 1 << n {
            return Err(Error::parse(no, format!("more than {} amplitudes", 1 << n)));
        }
        amps.push(
            parse_complex(line)
                .ok_or_else(|| Error::parse(no, format!("bad amplitude `{line}`")))?,
        );
    }
    if amps.len() != 1 << n {
        return Err(Error::parse(
            last,
            format!("expected {} amplitudes, found {}", 1 << n, amps.len()),
        ));
    }
    Ok(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::BlockDecomposition;
    use crate::encoding::{encode_memory, GateLabel};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn state(values: &[f64]) -> StateVector {
        StateVector::from_amplitudes(values.iter().map(|&v| re(v)).collect())
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn layout_widths() {
        let l = RegisterLayout { r: 0, n: 2 };
        assert_eq!(l.total_qubits(), 6);
        assert_eq!(l.total_qubits(), 2 * l.n + 2);
        let l = RegisterLayout { r: 2, n: 3 };
        assert_eq!(l.total_qubits(), 2 + 3 + 2 + 3);
        assert_eq!(l.index(1, 5, 2, 3), 0b01_1011_0011);
        assert_eq!(l.chosen_index(0b110), 0b00_0001_1110);
    }

    #[test]
    fn prepare_z_x_memory() {
        let mem =
            EncodedMemory::from_labels(2, &[(0, 0, GateLabel::Z), (0, 1, GateLabel::X)]).unwrap();
        let psi = state(&[1.0, 2.0, 3.0, 4.0]);
        let prepared = prepare_input(&mem, &psi).unwrap();
        let layout = RegisterLayout::for_memory(&mem);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for s in 0..4 {
            let p = psi.amplitudes()[s];
            assert!((prepared.amplitudes()[layout.index(0, 1, 0, s)] - p * h).norm() < 1e-15);
            assert!((prepared.amplitudes()[layout.index(0, 0, 1, s)] - p * h).norm() < 1e-15);
        }
        assert!((prepared.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prepare_single_record_is_product() {
        let mem = EncodedMemory::from_labels(2, &[(0, 1, GateLabel::XZ)]).unwrap();
        let psi = state(&[0.3, -0.1, 0.5, 0.2]);
        let prepared = prepare_input(&mem, &psi).unwrap();
        let layout = RegisterLayout::for_memory(&mem);
        let expected = StateVector::basis(4, 0b0111).unwrap().tensor(&psi);
        assert_eq!(layout.index(0, 3, 1, 0) >> 2, 0b0111);
        for (a, b) in prepared.amplitudes().iter().zip(expected.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn prepare_rejects_bad_psi() {
        let mem = EncodedMemory::from_labels(2, &[(0, 0, GateLabel::I)]).unwrap();
        assert!(matches!(
            prepare_input(&mem, &StateVector::zero_state(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let unnormalized = StateVector::from_amplitudes(vec![re(1.0); 4]).unwrap();
        assert!(prepare_input(&mem, &unnormalized).is_err());
    }

    #[test]
    fn circuit_shapes() {
        let mem = EncodedMemory::from_labels(2, &[(0, 0, GateLabel::Z)]).unwrap();
        let c = Circuit::build(&mem);
        assert_eq!(c.ops.len(), 2);
        assert_eq!(c.ops[1], CircuitOp::Hadamards(Register::new(0, 3)));

        let mem =
            EncodedMemory::from_labels(2, &[(0, 0, GateLabel::Z), (1, 0, GateLabel::X)]).unwrap();
        let c = Circuit::build(&mem);
        assert_eq!(c.layout.r, 1);
        assert!(
            matches!(&c.ops[0], CircuitOp::ControlledXMask { masks, .. } if masks == &vec![0, 2])
        );
        assert_eq!(c.ops[2], CircuitOp::Hadamards(Register::new(0, 4)));

        // one nonzero shift: r = 0, permutation applied unconditionally
        let mem = EncodedMemory::from_labels(3, &[(3, 1, GateLabel::I)]).unwrap();
        let c = Circuit::build(&mem);
        assert_eq!(c.layout.r, 0);
        assert!(
            matches!(&c.ops[0], CircuitOp::ControlledXMask { ctrl, masks, .. }
            if ctrl.width == 0 && masks == &vec![0b110])
        );
    }

    #[test]
    fn identity_memory_output() {
        let dec = BlockDecomposition::split(&Matrix::identity(4, 4)).unwrap();
        let mem = encode_memory(&dec).unwrap();
        let psi = state(&[1.0, 1.0, 1.0, 1.0]);
        let res = run_and_extract(&mem, &psi).unwrap();
        for (o, p) in res.unscaled().iter().zip(psi.amplitudes()) {
            assert!((o - p).norm() < 1e-12);
        }
        assert!((res.success_probability - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn single_entry_output() {
        let dec = BlockDecomposition::from_triplets(2, [(0, 0, re(1.0))]).unwrap();
        let mem = encode_memory(&dec).unwrap();
        let psi = state(&[0.5, 0.5, 0.5, 0.5]);
        let res = run_and_extract(&mem, &psi).unwrap();
        let un = res.unscaled();
        assert!((un[0] - re(0.5)).norm() < 1e-12);
        for v in &un[1..] {
            assert!(v.norm() < 1e-12);
        }
        assert!((res.success_probability - 0.25 / (0.5 * 8.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_overlap_gives_zero_probability() {
        let dec = BlockDecomposition::from_triplets(2, [(0, 0, re(1.0))]).unwrap();
        let mem = encode_memory(&dec).unwrap();
        let psi = StateVector::basis(2, 3).unwrap();
        let res = run_and_extract(&mem, &psi).unwrap();
        assert!(res.success_probability < 1e-24);
    }

    #[test]
    fn probability_report_for_unitary_memory() {
        let mem =
            EncodedMemory::from_labels(2, &[(0, 0, GateLabel::Z), (0, 1, GateLabel::XZ)]).unwrap();
        let psi = state(&[0.1, 0.7, -0.3, 0.2]);
        let report = success_probability_bound_check(&mem, &psi).unwrap();
        assert!((report.measured - 1.0 / 16.0).abs() < 1e-12);
        assert!(report.holds(1e-12));
        assert_eq!(report.r, 0);
        assert!((report.zeta_sq - 2.0).abs() < 1e-15);
    }

    #[test]
    fn state_file_round_trip() {
        let amps = vec![
            re(0.5),
            Complex64::new(0.25, -0.5),
            re(0.0),
            Complex64::new(0.0, 1e-3),
        ];
        let text = format_state(&amps);
        assert!(text.starts_with("n 2\n"));
        assert_eq!(parse_state(&text).unwrap(), amps);
        assert!(matches!(
            parse_state("n 1\n1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_state("n 1\n1\n0\n0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_state("q 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
