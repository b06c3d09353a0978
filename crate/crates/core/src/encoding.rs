//! Gate-amplitude encoding of 2×2 blocks and the quantum gate memory file.
//!
//! A block `[[a, b], [c, d]]` is written over the canonical bank as
//!
//! ```text
//! I: (a+d)/2   Z: (a-d)/2   X: (b+c)/2   ZX: b/2   XZ: c/2
//! ```
//!
//! which follows from `G₀ = (I+Z)/2`, `G₁ = (X+XZ)/2`, `G₂ = (X+ZX)/2` and
//! `G₃ = (I-Z)/2`. Slots `-Z`, `-I` and the filler slot 7 stay empty; `-Z` and
//! `-I` are only reachable through hand-labelled memories.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::block::{Block2, BlockDecomposition, Matrix};
use crate::error::{Error, Result};
use crate::numfmt::{fmt_complex, fmt_g17, parse_complex};
use crate::statevec::{GateBank, BANK_SIZE};

pub const SLOT_X: usize = 0;
pub const SLOT_Z: usize = 1;
pub const SLOT_NEG_Z: usize = 2;
pub const SLOT_XZ: usize = 3;
pub const SLOT_ZX: usize = 4;
pub const SLOT_NEG_I: usize = 5;
pub const SLOT_I: usize = 6;
pub const SLOT_FILLER: usize = 7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Gate labels usable in hand-written memories, in bank order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateLabel {
    X,
    Z,
    NegZ,
    XZ,
    ZX,
    NegI,
    I,
}

impl GateLabel {
    pub fn slot(self) -> usize {
        match self {
            GateLabel::X => SLOT_X,
            GateLabel::Z => SLOT_Z,
            GateLabel::NegZ => SLOT_NEG_Z,
            GateLabel::XZ => SLOT_XZ,
            GateLabel::ZX => SLOT_ZX,
            GateLabel::NegI => SLOT_NEG_I,
            GateLabel::I => SLOT_I,
        }
    }
}

/// Eight amplitudes aligned with the canonical gate bank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateVector(pub [Complex64; BANK_SIZE]);

impl GateVector {
    pub fn zero() -> Self {
        GateVector([ZERO; BANK_SIZE])
    }

    /// Single amplitude `amp` at `slot`.
    pub fn single(slot: usize, amp: Complex64) -> Self {
        let mut v = Self::zero();
        v.0[slot] = amp;
        v
    }

    /// Unit amplitude on the slot of `label`.
    pub fn from_label(label: GateLabel) -> Self {
        Self::single(label.slot(), Complex64::new(1.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| *a == ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Amplitudes whose weighted bank sum reproduces `b`.
pub fn encode_block(b: &Block2) -> GateVector {
    let [a, bb, c, d] = b.0;
    let mut v = GateVector::zero();
    v.0[SLOT_I] = (a + d) * 0.5;
    v.0[SLOT_Z] = (a - d) * 0.5;
    v.0[SLOT_X] = (bb + c) * 0.5;
    v.0[SLOT_ZX] = bb * 0.5;
    v.0[SLOT_XZ] = c * 0.5;
    v
}

/// `Σ v[j]·bank[j]` over the canonical bank.
pub fn decode_gatevector(v: &GateVector) -> Block2 {
    let bank = GateBank::canonical();
    v.0.iter()
        .zip(bank.0.iter())
        .fold(Block2::zero(), |acc, (amp, g)| acc + g.scale(*amp))
}

/// Contents of the quantum memory: raw gate amplitudes per `(i, k)` plus
/// the normalization `ζ` and the compacted table of shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedMemory {
    n: usize,
    i_table: Vec<usize>,
    records: BTreeMap<(usize, usize), GateVector>,
    zeta: f64,
}

fn validate_record(
    n: usize,
    i: usize,
    k: usize,
    v: &GateVector,
) -> std::result::Result<(), String> {
    let half = 1usize << (n - 1);
    if i >= half || k >= half {
        return Err(format!("record (i={i}, k={k}) outside 0..{half}"));
    }
    if v.is_zero() {
        return Err(format!("record (i={i}, k={k}) has no nonzero amplitude"));
    }
    if v.0[SLOT_FILLER] != ZERO {
        return Err(format!("record (i={i}, k={k}) uses the unused slot 7"));
    }
    if v.0.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(format!("record (i={i}, k={k}) has a non-finite amplitude"));
    }
    Ok(())
}

impl EncodedMemory {
    /// Builds a memory from raw records; computes `ζ` and the shift table.
    pub fn from_records<I>(n: usize, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), GateVector)>,
    {
        if n == 0 || n > 30 {
            return Err(Error::arg(format!("unsupported system size n={n}")));
        }
        let mut map = BTreeMap::new();
        for ((i, k), v) in records {
            validate_record(n, i, k, &v).map_err(Error::InvalidArgument)?;
            if map.insert((i, k), v).is_some() {
                return Err(Error::arg(format!("duplicate record (i={i}, k={k})")));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyMemory);
        }
        Ok(Self::assemble(n, map))
    }

    fn assemble(n: usize, records: BTreeMap<(usize, usize), GateVector>) -> Self {
        let mut i_table: Vec<usize> = records.keys().map(|(i, _)| *i).collect();
        i_table.dedup();
        let zeta = records
            .values()
            .map(GateVector::norm_sqr)
            .sum::<f64>()
            .sqrt();
        EncodedMemory {
            n,
            i_table,
            records,
            zeta,
        }
    }

    /// Hand-labelled memory: one bank gate per `(i, k)`.
    pub fn from_labels(n: usize, labels: &[(usize, usize, GateLabel)]) -> Result<Self> {
        Self::from_records(
            n,
            labels
                .iter()
                .map(|&(i, k, g)| ((i, k), GateVector::from_label(g))),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn i_table(&self) -> &[usize] {
        &self.i_table
    }

    /// Width of the shift register.
    pub fn r(&self) -> usize {
        let len = self.i_table.len().max(1);
        len.next_power_of_two().trailing_zeros() as usize
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, i: usize, k: usize) -> Option<&GateVector> {
        self.records.get(&(i, k))
    }

    pub fn records(&self) -> impl Iterator<Item = ((usize, usize), &GateVector)> {
        self.records.iter().map(|(key, v)| (*key, v))
    }

    /// Position of shift `i` in the compacted table.
    pub fn position_of(&self, i: usize) -> Option<usize> {
        self.i_table.binary_search(&i).ok()
    }

    /// Decodes every record back to a block decomposition.
    pub fn decompose(&self) -> BlockDecomposition {
        let mut dec = BlockDecomposition::empty(self.n).expect("n validated at construction");
        for ((i, k), v) in &self.records {
            dec.insert(*i, *k, decode_gatevector(v))
                .expect("indices validated at construction");
        }
        dec
    }

    /// Dense matrix the memory represents.
    pub fn to_dense(&self) -> Matrix {
        self.decompose().reconstruct()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let itable: Vec<String> = self.i_table.iter().map(usize::to_string).collect();
        writeln!(out, "QGM 1").unwrap();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "zeta {}", fmt_g17(self.zeta)).unwrap();
        writeln!(out, "itable {}", itable.join(",")).unwrap();
        for ((i, k), v) in &self.records {
            write!(out, "entry {i} {k}").unwrap();
            for a in &v.0 {
                write!(out, " {}", fmt_complex(*a)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut header = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing `{key}` line")))?;
            match line.split_once(char::is_whitespace) {
                Some((k, rest)) if k == key => Ok((no, rest.trim().to_string())),
                _ => Err(Error::parse(
                    no,
                    format!("expected `{key} …`, got `{line}`"),
                )),
            }
        };

        let (no, version) = header("QGM")?;
        if version != "1" {
            return Err(Error::parse(
                no,
                format!("unsupported QGM version `{version}`"),
            ));
        }
        let (no, n) = header("n")?;
        let n: usize = n
            .parse()
            .ok()
            .filter(|&n| (1..=30).contains(&n))
            .ok_or_else(|| Error::parse(no, format!("bad qubit count `{n}`")))?;
        let (zeta_line, zeta) = header("zeta")?;
        let zeta: f64 = zeta
            .parse()
            .map_err(|_| Error::parse(zeta_line, format!("bad zeta `{zeta}`")))?;
        let (itable_line, itable) = header("itable")?;
        let itable: Vec<usize> = itable
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(itable_line, format!("bad itable `{itable}`")))?;

        let mut records = BTreeMap::new();
        let mut last_line = itable_line;
        for (no, line) in lines {
            last_line = no;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.first() != Some(&"entry") {
                return Err(Error::parse(no, format!("expected `entry`, got `{line}`")));
            }
            if fields.len() != 3 + BANK_SIZE {
                return Err(Error::parse(
                    no,
                    format!("entry needs i, k and {BANK_SIZE} amplitudes"),
                ));
            }
            let index = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(no, format!("bad index `{s}`")))
            };
            let (i, k) = (index(fields[1])?, index(fields[2])?);
            let mut v = GateVector::zero();
            for (slot, s) in fields[3..].iter().enumerate() {
                v.0[slot] = parse_complex(s)
                    .ok_or_else(|| Error::parse(no, format!("bad amplitude `{s}`")))?;
            }
            validate_record(n, i, k, &v).map_err(|m| Error::parse(no, m))?;
            if records.insert((i, k), v).is_some() {
                return Err(Error::parse(no, format!("duplicate entry (i={i}, k={k})")));
            }
        }
        if records.is_empty() {
            return Err(Error::parse(last_line, "memory has no entries"));
        }
        let mem = Self::assemble(n, records);
        if mem.i_table != itable {
            return Err(Error::parse(
                itable_line,
                format!(
                    "itable {:?} does not match entries {:?}",
                    itable, mem.i_table
                ),
            ));
        }
        if (mem.zeta - zeta).abs() > 1e-12 * mem.zeta.max(1.0) {
            return Err(Error::parse(
                zeta_line,
                format!(
                    "zeta {zeta} does not match stored amplitudes ({})",
                    mem.zeta
                ),
            ));
        }
        Ok(mem)
    }
}

/// Encodes every stored block; fails on an empty decomposition.
pub fn encode_memory(dec: &BlockDecomposition) -> Result<EncodedMemory> {
    if dec.is_empty() {
        return Err(Error::EmptyMemory);
    }
    EncodedMemory::from_records(dec.n(), dec.iter().map(|(key, b)| (key, encode_block(b))))
}
