//! Dense complex statevector engine.
//!
//! Qubit ordering is big-endian throughout the crate: qubit 0 is the most
//! significant bit of a basis index, so a register `[start, start + width)`
//! reads as an ordinary binary number from left to right.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix stored row-major. Need not be unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateMatrix2(pub [Complex64; 4]);

impl GateMatrix2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        GateMatrix2([a, b, c, d])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        GateMatrix2([a.into(), b.into(), c.into(), d.into()])
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }
    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }
    pub fn x() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }
    pub fn z() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }
    pub fn y() -> Self {
        GateMatrix2([
            ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            ZERO,
        ])
    }
    pub fn hadamard() -> Self {
        Self::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    }

    /// Y rotation: `[[cos(θ/2), -sin(θ/2)], [sin(θ/2), cos(θ/2)]]`.
    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::real(c, -s, s, c)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        GateMatrix2(self.0.map(|v| v * k))
    }

    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.0;
        GateMatrix2([a, c, b, d])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == ZERO)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    #[inline]
    pub fn apply(&self, v0: Complex64, v1: Complex64) -> (Complex64, Complex64) {
        let [a, b, c, d] = self.0;
        (a * v0 + b * v1, c * v0 + d * v1)
    }
}

impl Mul for GateMatrix2 {
    type Output = GateMatrix2;
    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        GateMatrix2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Add for GateMatrix2 {
    type Output = GateMatrix2;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        GateMatrix2(out)
    }
}

/// Number of entries in the controlled gate bank.
pub const BANK_SIZE: usize = 8;

/// Eight gates addressed by a 3-qubit control register.
#[derive(Debug, Clone, PartialEq)]
pub struct GateBank(pub [GateMatrix2; BANK_SIZE]);

impl GateBank {
    /// `[X, Z, -Z, XZ, ZX, -I, I, I]`. Slot 7 is filler and never encoded.
    pub fn canonical() -> Self {
        let x = GateMatrix2::x();
        let z = GateMatrix2::z();
        let i = GateMatrix2::identity();
        let neg = Complex64::new(-1.0, 0.0);
        GateBank([x, z, z.scale(neg), x * z, z * x, i.scale(neg), i, i])
    }

    pub fn get(&self, slot: usize) -> &GateMatrix2 {
        &self.0[slot]
    }
}

/// A contiguous range of qubits `[start, start + width)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub start: usize,
    pub width: usize,
}

impl Register {
    pub const fn new(start: usize, width: usize) -> Self {
        Register { start, width }
    }

    pub fn end(&self) -> usize {
        self.start + self.width
    }

    pub fn contains(&self, qubit: usize) -> bool {
        qubit >= self.start && qubit < self.end()
    }

    pub fn overlaps(&self, other: &Register) -> bool {
        self.width > 0 && other.width > 0 && self.start < other.end() && other.start < self.end()
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    /// Bit offset of the register's least significant qubit inside a basis index.
    fn shift(&self, num_qubits: usize) -> usize {
        num_qubits - self.end()
    }

    fn mask(&self) -> usize {
        (1 << self.width) - 1
    }

    /// Value held by this register in basis index `idx`.
    #[inline]
    pub fn value_of(&self, idx: usize, num_qubits: usize) -> usize {
        (idx >> self.shift(num_qubits)) & self.mask()
    }

    /// `idx` with this register overwritten by `value`.
    #[inline]
    pub fn with_value(&self, idx: usize, value: usize, num_qubits: usize) -> usize {
        let shift = self.shift(num_qubits);
        (idx & !(self.mask() << shift)) | (value << shift)
    }
}

/// Dense amplitude vector of length `2^num_qubits`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero_state(num_qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[0] = ONE;
        StateVector { num_qubits, amps }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << num_qubits {
            return Err(Error::arg(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        Ok(StateVector { num_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::arg(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::arg("amplitudes must be finite"));
        }
        Ok(StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::arg("cannot normalize the zero vector"));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(self)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        inner_product(&self.amps, &other.amps)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn check_register(&self, reg: Register) -> Result<()> {
        if reg.end() > self.num_qubits {
            Err(Error::QubitOutOfRange {
                qubit: reg.end() - 1,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies `g` to `qubit`, identity elsewhere.
    pub fn apply_gate_1q(&mut self, qubit: usize, g: &GateMatrix2) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = 1 << (self.num_qubits - 1 - qubit);
        for chunk in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (v0, v1) = g.apply(*a0, *a1);
                *a0 = v0;
                *a1 = v1;
            }
        }
        Ok(())
    }

    pub fn apply_hadamards(&mut self, register: Register) -> Result<()> {
        self.check_register(register)?;
        let h = GateMatrix2::hadamard();
        for q in register.start..register.end() {
            self.apply_gate_1q(q, &h)?;
        }
        Ok(())
    }

    /// For every value `v` of `ctrl`, applies `bank[v]` to `target` on the
    /// amplitudes where `ctrl` holds `v`.
    pub fn apply_controlled_bank(
        &mut self,
        ctrl: Register,
        target: usize,
        bank: &GateBank,
    ) -> Result<()> {
        self.check_register(ctrl)?;
        self.check_qubit(target)?;
        if ctrl.contains(target) {
            return Err(Error::arg(format!(
                "target qubit {target} lies inside the control register"
            )));
        }
        if ctrl.dim() > BANK_SIZE {
            return Err(Error::arg(format!(
                "control register of width {} addresses more than {BANK_SIZE} gates",
                ctrl.width
            )));
        }
        let n = self.num_qubits;
        let tbit = 1 << (n - 1 - target);
        for idx in 0..self.amps.len() {
            if idx & tbit != 0 {
                continue;
            }
            let g = bank.get(ctrl.value_of(idx, n));
            let (v0, v1) = g.apply(self.amps[idx], self.amps[idx | tbit]);
            self.amps[idx] = v0;
            self.amps[idx | tbit] = v1;
        }
        Ok(())
    }

    /// For control value `m`, XORs the `system` register value with
    /// `table[m]` (missing entries act as 0). Masks must leave the last system
    /// qubit alone.
    pub fn apply_controlled_xmask(
        &mut self,
        ctrl: Register,
        table: &[usize],
        system: Register,
    ) -> Result<()> {
        self.check_register(ctrl)?;
        self.check_register(system)?;
        if ctrl.overlaps(&system) {
            return Err(Error::arg("control and system registers overlap"));
        }
        if table.len() > ctrl.dim() {
            return Err(Error::arg(format!(
                "{} masks for a control register with {} values",
                table.len(),
                ctrl.dim()
            )));
        }
        for &mask in table {
            if mask >= system.dim() {
                return Err(Error::arg(format!(
                    "mask {mask:#b} wider than the system register"
                )));
            }
            if mask & 1 != 0 {
                return Err(Error::arg(format!(
                    "mask {mask:#b} touches the last system qubit"
                )));
            }
        }
        if table.iter().all(|&m| m == 0) {
            return Ok(());
        }
        let n = self.num_qubits;
        let sys_shift = n - system.end();
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, amp) in self.amps.iter().enumerate() {
            let mask = table.get(ctrl.value_of(idx, n)).copied().unwrap_or(0);
            out[idx ^ (mask << sys_shift)] = *amp;
        }
        self.amps = out;
        Ok(())
    }

    /// Controlled-Z between two qubits.
    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::arg("CZ needs two distinct qubits"));
        }
        let n = self.num_qubits;
        let both = (1 << (n - 1 - a)) | (1 << (n - 1 - b));
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            if idx & both == both {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// Swaps qubits `a` and `b` on the branch where `ctrl` is 1.
    pub fn apply_controlled_swap(&mut self, ctrl: usize, a: usize, b: usize) -> Result<()> {
        for q in [ctrl, a, b] {
            self.check_qubit(q)?;
        }
        if ctrl == a || ctrl == b || a == b {
            return Err(Error::arg("controlled swap needs three distinct qubits"));
        }
        let n = self.num_qubits;
        let (cbit, abit, bbit) = (1 << (n - 1 - ctrl), 1 << (n - 1 - a), 1 << (n - 1 - b));
        for idx in 0..self.amps.len() {
            // visit each swapped pair once, from the (a=1, b=0) side
            if idx & cbit != 0 && idx & abit != 0 && idx & bbit == 0 {
                self.amps.swap(idx, idx ^ abit ^ bbit);
            }
        }
        Ok(())
    }

    /// Keeps only the branch where `register` holds `value`; returns the
    /// unnormalized full-length state and the branch probability.
    pub fn project_register(&self, register: Register, value: usize) -> Result<(StateVector, f64)> {
        self.check_register(register)?;
        if value >= register.dim() {
            return Err(Error::arg(format!(
                "value {value} does not fit a {}-qubit register",
                register.width
            )));
        }
        let n = self.num_qubits;
        let amps: Vec<Complex64> = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                if register.value_of(idx, n) == value {
                    *a
                } else {
                    ZERO
                }
            })
            .collect();
        let projected = StateVector {
            num_qubits: n,
            amps,
        };
        let p = projected.norm_sqr();
        Ok((projected, p))
    }

    /// Tensor product `self ⊗ other` (self on the leading qubits).
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }
}

pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

pub fn ry(theta: f64) -> GateMatrix2 {
    GateMatrix2::ry(theta)
}
