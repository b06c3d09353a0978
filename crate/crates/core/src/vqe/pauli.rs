//! Pauli-string Hamiltonians and their `c·H·P` rewrite.
//!
//! Every Pauli string factors as a phase, a block-diagonal part and an X-type
//! permutation. On qubits `0..n-1` the letters map as
//!
//! ```text
//! I → (I, no flip)   X → (I, flip)   Z → (Z, no flip)   Y → (Z, flip) · (-i)
//! ```
//!
//! and the last qubit keeps its own 2×2 gate (`Y = -i·ZX`). For example
//! `XYYZ = -(IZZZ)(XXXI)`.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::block::Matrix;
use crate::encoding::{EncodedMemory, GateVector, SLOT_I, SLOT_X, SLOT_XZ, SLOT_Z, SLOT_ZX};
use crate::error::{Error, Result};
use crate::numfmt::fmt_g17;
use crate::statevec::GateMatrix2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> GateMatrix2 {
        match self {
            Pauli::I => GateMatrix2::identity(),
            Pauli::X => GateMatrix2::x(),
            Pauli::Y => GateMatrix2::y(),
            Pauli::Z => GateMatrix2::z(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub letters: Vec<Pauli>,
}

impl PauliTerm {
    pub fn new(coeff: f64, letters: &str) -> Result<Self> {
        let letters = letters
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::arg(format!("bad Pauli letter `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::arg("empty Pauli string"));
        }
        if !coeff.is_finite() {
            return Err(Error::arg("coefficient must be finite"));
        }
        Ok(PauliTerm { coeff, letters })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }

    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&p| p == Pauli::Y).count()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", fmt_g17(self.coeff), self.label())
    }
}

/// Dense tensor product of single-qubit Pauli matrices (qubit 0 leftmost).
pub fn pauli_matrix(letters: &[Pauli]) -> Matrix {
    kron_all(letters.iter().map(|p| p.matrix()))
}

pub(crate) fn kron_all(factors: impl IntoIterator<Item = GateMatrix2>) -> Matrix {
    let mut acc = Matrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for g in factors {
        let g = Matrix::from_row_slice(2, 2, &g.0);
        acc = acc.kronecker(&g);
    }
    acc
}

/// A sum of Pauli terms on `n` qubits, merged and kept in letter order.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    pub fn from_terms(terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut n = None;
        let mut merged: BTreeMap<Vec<Pauli>, f64> = BTreeMap::new();
        for t in terms {
            match n {
                None => n = Some(t.n()),
                Some(n) if n != t.n() => {
                    return Err(Error::arg(format!(
                        "term {} has {} qubits, expected {n}",
                        t.label(),
                        t.n()
                    )))
                }
                _ => {}
            }
            *merged.entry(t.letters).or_insert(0.0) += t.coeff;
        }
        let n = n.ok_or_else(|| Error::arg("Hamiltonian has no terms"))?;
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(letters, coeff)| PauliTerm { coeff, letters })
            .collect();
        Ok(Hamiltonian { n, terms })
    }

    /// Parses lines of `coeff letters`; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let no = no + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [coeff, letters] = fields[..] else {
                return Err(Error::parse(
                    no,
                    format!("expected `coeff letters`, got `{line}`"),
                ));
            };
            let coeff: f64 = coeff
                .parse()
                .ok()
                .filter(|c: &f64| c.is_finite())
                .ok_or_else(|| Error::parse(no, format!("bad coefficient `{coeff}`")))?;
            let term =
                PauliTerm::new(coeff, letters).map_err(|e| Error::parse(no, e.to_string()))?;
            match n {
                None => n = Some(term.n()),
                Some(n) if n != term.n() => {
                    return Err(Error::parse(
                        no,
                        format!("`{letters}` has {} letters, expected {n}", term.n()),
                    ))
                }
                _ => {}
            }
            terms.push(term);
        }
        if terms.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "no Pauli terms"));
        }
        Self::from_terms(terms)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            writeln!(out, "{t}").unwrap();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// `Σ coeff·(Pauli matrix)`, built directly from the letters.
    pub fn to_dense(&self) -> Matrix {
        let dim = 1 << self.n;
        let mut m = Matrix::zeros(dim, dim);
        for t in &self.terms {
            m += pauli_matrix(&t.letters) * Complex64::new(t.coeff, 0.0);
        }
        m
    }

    pub fn rewritten(&self) -> Vec<RewrittenTerm> {
        self.terms.iter().map(rewrite_term).collect()
    }
}

/// The 2×2 gate a rewritten term applies to the last qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LastGate {
    I,
    Z,
    X,
    ZX,
    XZ,
}

impl LastGate {
    pub fn slot(self) -> usize {
        match self {
            LastGate::I => SLOT_I,
            LastGate::Z => SLOT_Z,
            LastGate::X => SLOT_X,
            LastGate::ZX => SLOT_ZX,
            LastGate::XZ => SLOT_XZ,
        }
    }

    pub fn matrix(self) -> GateMatrix2 {
        match self {
            LastGate::I => GateMatrix2::identity(),
            LastGate::Z => GateMatrix2::z(),
            LastGate::X => GateMatrix2::x(),
            LastGate::ZX => GateMatrix2::z() * GateMatrix2::x(),
            LastGate::XZ => GateMatrix2::x() * GateMatrix2::z(),
        }
    }
}

/// `c · Hᵢ · Pᵢ` with `Hᵢ = (⊗ⱼ Z^{diag[j]}) ⊗ last` and `Pᵢ` the X flips in `xmask`.
#[derive(Debug, Clone, PartialEq)]
pub struct RewrittenTerm {
    pub c: Complex64,
    /// Z (true) or I (false) on qubits `0..n-1`.
    pub diag: Vec<bool>,
    pub last: LastGate,
    /// Shift index: bit `n-2-j` set when qubit `j` is flipped.
    pub xmask: usize,
}

pub fn rewrite_term(t: &PauliTerm) -> RewrittenTerm {
    let n = t.n();
    let mut diag = Vec::with_capacity(n - 1);
    let mut xmask = 0usize;
    for &p in &t.letters[..n - 1] {
        xmask <<= 1;
        match p {
            Pauli::I => diag.push(false),
            Pauli::Z => diag.push(true),
            Pauli::X => {
                diag.push(false);
                xmask |= 1;
            }
            Pauli::Y => {
                diag.push(true);
                xmask |= 1;
            }
        }
    }
    let last = match t.letters[n - 1] {
        Pauli::I => LastGate::I,
        Pauli::Z => LastGate::Z,
        Pauli::X => LastGate::X,
        Pauli::Y => LastGate::ZX,
    };
    let phase = match t.y_count() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    RewrittenTerm {
        c: phase * t.coeff,
        diag,
        last,
        xmask,
    }
}

impl RewrittenTerm {
    pub fn n(&self) -> usize {
        self.diag.len() + 1
    }

    /// Letters of the block-diagonal part, e.g. `IZZZ`.
    pub fn diag_label(&self) -> String {
        let mut s: String = self
            .diag
            .iter()
            .map(|&z| if z { 'Z' } else { 'I' })
            .collect();
        s.push_str(match self.last {
            LastGate::I => "I",
            LastGate::Z => "Z",
            LastGate::X => "X",
            LastGate::ZX => "(ZX)",
            LastGate::XZ => "(XZ)",
        });
        s
    }

    /// Letters of the permutation part, e.g. `XXXI`.
    pub fn perm_label(&self) -> String {
        let n = self.n();
        let mut s: String = (0..n - 1)
            .map(|j| {
                if self.xmask >> (n - 2 - j) & 1 == 1 {
                    'X'
                } else {
                    'I'
                }
            })
            .collect();
        s.push('I');
        s
    }

    pub fn diag_matrix(&self) -> Matrix {
        kron_all(
            self.diag
                .iter()
                .map(|&z| {
                    if z {
                        GateMatrix2::z()
                    } else {
                        GateMatrix2::identity()
                    }
                })
                .chain(std::iter::once(self.last.matrix())),
        )
    }

    pub fn perm_matrix(&self) -> Matrix {
        let n = self.n();
        kron_all((0..n).map(|j| {
            if j < n - 1 && self.xmask >> (n - 2 - j) & 1 == 1 {
                GateMatrix2::x()
            } else {
                GateMatrix2::identity()
            }
        }))
    }

    /// Gate memory of `HᵢPᵢ`: one signed bank slot per block row.
    pub fn to_memory(&self) -> Result<EncodedMemory> {
        let n = self.n();
        let rows = 1usize << (n - 1);
        let slot = self.last.slot();
        let records = (0..rows).map(|k| {
            let flips = self
                .diag
                .iter()
                .enumerate()
                .filter(|&(j, &z)| z && (k >> (n - 2 - j)) & 1 == 1)
                .count();
            let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
            (
                (self.xmask, k),
                GateVector::single(slot, Complex64::new(sign, 0.0)),
            )
        });
        EncodedMemory::from_records(n, records)
    }
}
