//! Small self-contained linear algebra: a cyclic Jacobi eigensolver for real
//! symmetric matrices, exact characteristic polynomials of integer matrices
//! via the Faddeev–LeVerrier recurrence, Kronecker products, and tolerant
//! multiset comparison.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense real symmetric matrix. Both triangles are stored; constructors
/// take the upper triangle as authoritative.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            data: vec![0.0; order * order],
        }
    }

    /// Builds from `f(i, j)` evaluated on `i <= j` only.
    pub fn from_upper(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                m.data[i * order + j] = v;
                m.data[j * order + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds from full rows, rejecting anything that is not exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: order,
                });
            }
            for j in 0..i {
                if row[j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Self::from_upper(order, |i, j| rows[i][j])
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.data[i * order + i] = 1.0;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.order.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            order: self.order,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Largest elementwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.order != other.order {
            return Err(Error::LengthMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Tuning for [`sym_eigenvalues_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// Relative stopping threshold on the off-diagonal Frobenius norm.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_sweeps: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues, non-increasing.
    pub values: Vec<f64>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at exit.
    pub off_diag_norm: f64,
}

pub fn sym_eigenvalues(m: &SymMatrix, tol: f64) -> Result<EigenResult> {
    sym_eigenvalues_with(
        m,
        JacobiOptions {
            tol,
            ..JacobiOptions::default()
        },
    )
}

/// Cyclic Jacobi: sweep the upper triangle row by row, annihilating each
/// off-diagonal entry with a plane rotation, until the off-diagonal mass
/// drops below `tol * ||m||_F`.
pub fn sym_eigenvalues_with(m: &SymMatrix, opts: JacobiOptions) -> Result<EigenResult> {
    let n = m.order;
    let mut a = m.data.clone();
    let threshold = opts.tol * m.frobenius_norm();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    let mut residual = off(&a);
    while residual > threshold {
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                // theta overflows to infinity when apq is negligible; t is then 0.
                let t = if t.is_finite() { t } else { 0.0 };
                if t == 0.0 {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        residual = off(&a);
    }

    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(EigenResult {
        values,
        sweeps,
        off_diag_norm: residual,
    })
}

/// Kronecker product with the block convention `a[0][0] * b` top-left.
pub fn kron(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    let (na, nb) = (a.order, b.order);
    let order = na * nb;
    let mut data = vec![0.0; order * order];
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            for k in 0..nb {
                for l in 0..nb {
                    data[(i * nb + k) * order + (j * nb + l)] = aij * b.get(k, l);
                }
            }
        }
    }
    SymMatrix { order, data }
}

/// Sorts both sequences and compares them pairwise within `tol`.
pub fn multiset_close(xs: &[f64], ys: &[f64], tol: f64) -> Result<bool> {
    Ok(multiset_max_diff(xs, ys)? <= tol)
}

/// Largest pairwise difference after sorting both sequences.
pub fn multiset_max_diff(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    Ok(xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    order: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                data.push(f(i, j));
            }
        }
        Self { order, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let order = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != order) {
            return Err(Error::LengthMismatch {
                left: r.len(),
                right: order,
            });
        }
        Ok(Self::from_fn(order, |i, j| rows[i][j]))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.order + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.order.max(1))
            .map(<[i64]>::to_vec)
            .collect()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.data
            .chunks(self.order.max(1))
            .map(|r| r.iter().sum())
            .collect()
    }
}

/// Polynomial with arbitrary-width integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// From `i64` coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sum of coefficient magnitudes times `max(1, |x|)^degree`, a scale for
    /// judging whether `eval(x)` is zero up to rounding.
    pub fn eval_scale(&self, x: f64) -> f64 {
        let r = x.abs().max(1.0);
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum::<f64>()
            * r.powi(self.degree() as i32)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(first && power == 0) {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag == BigInt::from(1);
            match power {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{power}")?,
                _ => write!(f, "{mag}x^{power}")?,
            }
        }
        Ok(())
    }
}

/// Exact monic characteristic polynomial `det(xI - m)`.
///
/// Faddeev–LeVerrier: with `M_0 = 0` and `c_n = 1`,
/// `M_k = m M_(k-1) + c_(n-k+1) I` and `c_(n-k) = -tr(m M_k) / k`.
/// Every division is exact over the integers.
pub fn char_poly_exact(m: &IntMatrix) -> IntPoly {
    let n = m.order;
    let a: Vec<BigInt> = m.data.iter().map(|&x| BigInt::from(x)).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut mk = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        // M_k = A * M_(k-1) + c_(n-k+1) I
        let mut next = matmul(&a, &mk, n);
        for i in 0..n {
            next[i * n + i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = matmul(&a, &mk, n);
        let trace: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
        let k_big = BigInt::from(k);
        debug_assert!((&trace % &k_big).is_zero());
        coeffs[n - k] = -(trace / k_big);
    }
    IntPoly::new(coeffs)
}

fn matmul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k * n + j];
                if !bkj.is_zero() {
                    out[i * n + j] += aik * bkj;
                }
            }
        }
    }
    out
}
