//! Random inputs and dense reference operators shared by the integration tests.
//! Nothing here goes through the statevector engine or the circuit code.

#![allow(dead_code)]

use ctxsim::{GateMatrix2, Matrix, StateVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(s) = StateVector::from_amplitudes(amps).and_then(|s| s.normalized()) {
            return s;
        }
    }
}

pub fn random_real_state(rng: &mut impl Rng, n: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| c(rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(s) = StateVector::from_amplitudes(amps).and_then(|s| s.normalized()) {
            return s;
        }
    }
}

/// Random `2^n × 2^n` matrix with roughly `density` of its entries set by `value`.
/// Always has at least one nonzero entry.
pub fn random_sparse(
    rng: &mut impl Rng,
    n: usize,
    density: f64,
    mut value: impl FnMut(&mut dyn rand::RngCore) -> f64,
) -> Matrix {
    let dim = 1 << n;
    let mut m = Matrix::zeros(dim, dim);
    for r in 0..dim {
        for col in 0..dim {
            if rng.random::<f64>() < density {
                let mut v = value(rng);
                while v == 0.0 {
                    v = value(rng);
                }
                m[(r, col)] = c(v);
            }
        }
    }
    if m.iter().all(|v| v.norm() == 0.0) {
        let (r, col) = (rng.random_range(0..dim), rng.random_range(0..dim));
        m[(r, col)] = c(1.0);
    }
    m
}

pub fn random_01(rng: &mut impl Rng, n: usize, density: f64) -> Matrix {
    random_sparse(rng, n, density, |_| 1.0)
}

pub fn random_small_int(rng: &mut impl Rng, n: usize, density: f64) -> Matrix {
    random_sparse(rng, n, density, |r| r.random_range(-3i32..=3) as f64)
}

/// Dyadic value `m / 2^e` with small numerator.
pub fn dyadic(rng: &mut impl Rng) -> f64 {
    rng.random_range(-64i32..=64) as f64 / (1u32 << rng.random_range(0..6)) as f64
}

pub fn mat2(g: &GateMatrix2) -> Matrix {
    Matrix::from_row_slice(2, 2, &g.0)
}

/// `I ⊗ … ⊗ g ⊗ … ⊗ I` with `g` on `qubit` (qubit 0 leftmost).
pub fn embed(g: &GateMatrix2, qubit: usize, num_qubits: usize) -> Matrix {
    let mut acc = Matrix::from_element(1, 1, c(1.0));
    for q in 0..num_qubits {
        let f = if q == qubit {
            mat2(g)
        } else {
            Matrix::identity(2, 2)
        };
        acc = acc.kronecker(&f);
    }
    acc
}

/// Block-diagonal `⊕_v (I ⊗ bank[v])` for a 3-qubit control register on
/// qubits 0..3 and the target on the last qubit.
pub fn dense_bank_operator(bank: &[GateMatrix2; 8], num_qubits: usize) -> Matrix {
    let rest = num_qubits - 3;
    let block_dim = 1 << rest;
    let dim = 1 << num_qubits;
    let mut m = Matrix::zeros(dim, dim);
    for (v, g) in bank.iter().enumerate() {
        let block = embed(g, rest - 1, rest);
        m.view_mut((v * block_dim, v * block_dim), (block_dim, block_dim))
            .copy_from(&block);
    }
    m
}

pub fn mat_vec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    let col = nalgebra::DVector::from_column_slice(v);
    (m * col).iter().copied().collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_mat(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Hermitian eigenvalues by Jacobi rotations on the real `2N×2N` embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is the Hermitian spectrum doubled.
pub fn jacobi_min_eigenvalue(h: &Matrix) -> f64 {
    let n = h.nrows();
    let dim = 2 * n;
    let mut a = vec![vec![0.0f64; dim]; dim];
    for r in 0..n {
        for col in 0..n {
            let z = h[(r, col)];
            a[r][col] = z.re;
            a[r + n][col + n] = z.re;
            a[r][col + n] = -z.im;
            a[r + n][col] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..dim)
            .flat_map(|p| (0..dim).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = cs * akp - sn * akq;
                    row[q] = sn * akp + cs * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (apk, aqk) = (*x, *y);
                    *x = cs * apk - sn * aqk;
                    *y = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..dim).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}
