//! Splitting an `N×N` matrix into `Σᵢ HᵢPᵢ`.
//!
//! The 2×2 submatrix at block-row `r`, block-column `c` belongs to shift
//! `i = r ⊕ c` and block row `k = r`. `Hᵢ` is the block diagonal
//! `⊕ₖ H_{ik}` and `Pᵢ` flips the block index by `i`, i.e. XORs basis indices
//! with `2·i`, leaving the last qubit alone.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numfmt::parse_complex;
use crate::statevec::GateMatrix2;

pub type Block2 = GateMatrix2;
pub type Matrix = DMatrix<Complex64>;

/// Sparse collection of nonzero 2×2 blocks keyed by `(i, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    n: usize,
    entries: BTreeMap<(usize, usize), Block2>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::arg("matrix must be at least 2×2"));
    }
    if n >= usize::BITS as usize - 1 {
        return Err(Error::arg(format!("{n} qubits is too many")));
    }
    Ok(())
}

/// `log2(dim)` when `dim` is a power of two ≥ 2.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::arg(format!(
            "matrix size {dim} is not a power of two ≥ 2"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl BlockDecomposition {
    pub fn empty(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(BlockDecomposition {
            n,
            entries: BTreeMap::new(),
        })
    }

    /// Splits a dense square matrix.
    pub fn split(h: &Matrix) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::arg(format!(
                "matrix is {}×{}, not square",
                h.nrows(),
                h.ncols()
            )));
        }
        let n = qubits_for_dim(h.nrows())?;
        let triplets =
            (0..h.nrows()).flat_map(|row| (0..h.ncols()).map(move |col| (row, col, h[(row, col)])));
        Self::from_triplets(n, triplets)
    }

    /// Builds from `(row, col, value)` triplets; repeated positions add up.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut entries: BTreeMap<(usize, usize), Block2> = BTreeMap::new();
        for (row, col, value) in triplets {
            if row >= dim || col >= dim {
                return Err(Error::arg(format!(
                    "entry ({row}, {col}) outside a {dim}×{dim} matrix"
                )));
            }
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::arg(format!("entry ({row}, {col}) is not finite")));
            }
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (r, c) = (row >> 1, col >> 1);
            let slot = 2 * (row & 1) + (col & 1);
            entries.entry((r ^ c, r)).or_insert_with(Block2::zero).0[slot] += value;
        }
        entries.retain(|_, b| !b.is_zero());
        Ok(BlockDecomposition { n, entries })
    }

    /// Inserts a block at `(i, k)`; zero blocks remove the entry.
    pub fn insert(&mut self, i: usize, k: usize, block: Block2) -> Result<()> {
        let half = self.half_dim();
        if i >= half || k >= half {
            return Err(Error::arg(format!(
                "block index (i={i}, k={k}) outside 0..{half}"
            )));
        }
        if block.is_zero() {
            self.entries.remove(&(i, k));
        } else {
            self.entries.insert((i, k), block);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn half_dim(&self) -> usize {
        1 << (self.n - 1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, k: usize) -> Option<&Block2> {
        self.entries.get(&(i, k))
    }

    /// Blocks in `(i, k)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Block2)> {
        self.entries.iter().map(|(key, b)| (*key, b))
    }

    /// Distinct shifts with at least one stored block, ascending.
    pub fn shifts(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.entries.keys().map(|(i, _)| *i).collect();
        out.dedup();
        out
    }

    /// Dense `Hᵢ = ⊕ₖ H_{ik}`.
    pub fn block_diagonal(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for ((_, k), b) in self.entries.range((i, 0)..(i + 1, 0)) {
            for (slot, v) in b.0.iter().enumerate() {
                m[(2 * k + slot / 2, 2 * k + slot % 2)] = *v;
            }
        }
        m
    }

    /// Dense `HᵢPᵢ`.
    pub fn hi_times_pi(&self, i: usize) -> Result<Matrix> {
        Ok(self.block_diagonal(i) * permutation_matrix(i, self.n)?)
    }

    /// Dense `Σᵢ HᵢPᵢ`.
    pub fn reconstruct(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for ((i, k), b) in &self.entries {
            let col_block = k ^ i;
            for (slot, v) in b.0.iter().enumerate() {
                m[(2 * k + slot / 2, 2 * col_block + slot % 2)] += *v;
            }
        }
        m
    }
}

/// XOR mask that `Pᵢ` applies to system basis indices (`2·i`).
pub fn permutation_for(i: usize, n: usize) -> Result<usize> {
    check_qubits(n)?;
    if i >= 1 << (n - 1) {
        return Err(Error::arg(format!(
            "shift {i} out of range for {n} system qubits"
        )));
    }
    Ok(i << 1)
}

/// Dense permutation matrix `Pᵢ`.
pub fn permutation_matrix(i: usize, n: usize) -> Result<Matrix> {
    let mask = permutation_for(i, n)?;
    let dim = 1 << n;
    let mut m = Matrix::zeros(dim, dim);
    for idx in 0..dim {
        m[(idx ^ mask, idx)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// Matrix input as read from the text format.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSource {
    pub dim: usize,
    pub triplets: Vec<(usize, usize, Complex64)>,
}

impl MatrixSource {
    /// Parses `N` followed by `dense` rows or `sparse` triplets.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (no, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty matrix file"))?;
        let dim: usize = first
            .parse()
            .map_err(|_| Error::parse(no, format!("expected matrix size, got `{first}`")))?;
        qubits_for_dim(dim).map_err(|e| Error::parse(no, e.to_string()))?;

        let (no, kind) = lines
            .next()
            .ok_or_else(|| Error::parse(no, "missing `dense` or `sparse` keyword"))?;
        let mut triplets = Vec::new();
        match kind {
            "dense" => {
                let mut row = 0;
                for (no, line) in lines {
                    if row == dim {
                        return Err(Error::parse(no, format!("more than {dim} rows")));
                    }
                    let values: Vec<&str> = line.split_whitespace().collect();
                    if values.len() != dim {
                        return Err(Error::parse(
                            no,
                            format!("expected {dim} values, found {}", values.len()),
                        ));
                    }
                    for (col, v) in values.iter().enumerate() {
                        let z = parse_complex(v)
                            .ok_or_else(|| Error::parse(no, format!("bad number `{v}`")))?;
                        if z != Complex64::new(0.0, 0.0) {
                            triplets.push((row, col, z));
                        }
                    }
                    row += 1;
                }
                if row != dim {
                    return Err(Error::parse(
                        no,
                        format!("expected {dim} rows, found {row}"),
                    ));
                }
            }
            "sparse" => {
                for (no, line) in lines {
                    let fields: Vec<&str> = line.split_whitespace().collect();
                    let [r, c, v] = fields[..] else {
                        return Err(Error::parse(no, "expected `row col value`"));
                    };
                    let index = |s: &str| -> Result<usize> {
                        let x: usize = s
                            .parse()
                            .map_err(|_| Error::parse(no, format!("bad index `{s}`")))?;
                        if x >= dim {
                            return Err(Error::parse(no, format!("index {x} ≥ {dim}")));
                        }
                        Ok(x)
                    };
                    let z = parse_complex(v)
                        .ok_or_else(|| Error::parse(no, format!("bad number `{v}`")))?;
                    triplets.push((index(r)?, index(c)?, z));
                }
            }
            other => {
                return Err(Error::parse(
                    no,
                    format!("expected `dense` or `sparse`, got `{other}`"),
                ))
            }
        }
        Ok(MatrixSource { dim, triplets })
    }

    pub fn decompose(&self) -> Result<BlockDecomposition> {
        BlockDecomposition::from_triplets(qubits_for_dim(self.dim)?, self.triplets.iter().copied())
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.triplets {
            m[(r, c)] += v;
        }
        m
    }
}
