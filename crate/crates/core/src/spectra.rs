//! Quotient matrices of the divisor-class partition and the spectra built on
//! them.
//!
//! Indexing follows the canonical divisor tuple `(d_1 = 1, d_2, ..., d_(2^r))`
//! and `s_i = |[d_i]|` (so `s_1 = phi(n)` and `a_i = s_(i+1)`):
//!
//! * `T^A(i, j) = s_j [gcd(d_i, d_j) = 1] - [i = j = 1]` is the adjacency quotient,
//! * `Q~(i, j) = sqrt(s_i s_j) [gcd(d_i, d_j) = 1]` and `Q = Q~ - e_1 e_1^T`,
//!   which is similar to `T^A` through `P = diag(sqrt(s_i))`,
//! * `M = diag(deg d_i) - T^A` is the Laplacian quotient,
//! * `L_Q = D_L - Q~` with `D_L = diag(n, deg d_2, ..., deg d_(2^r))`.
//!
//! Entries involving square roots are kept as [`Surd`]s so that identities
//! such as `Q~(n) = (n / n0) Q~(n0)` can be checked exactly.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, IntPoly, JacobiOptions, SymMatrix};
use crate::numth::{self, FactoredInt};
use crate::oracle;
use crate::partition::{self, class_degree};

/// Largest supported quotient order is `2^MAX_OMEGA`.
pub const MAX_OMEGA: u32 = 6;

const QUOTIENT_JACOBI: JacobiOptions = JacobiOptions {
    tol: 1e-15,
    max_sweeps: 100,
};

/// `sign * sqrt(square)`, with the square held exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    pub negative: bool,
    pub square: u128,
}

impl std::ops::Neg for Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        Surd {
            negative: !self.negative && self.square != 0,
            square: self.square,
        }
    }
}

impl Surd {
    pub const ZERO: Surd = Surd {
        negative: false,
        square: 0,
    };

    pub fn sqrt_of(square: u128) -> Self {
        Self {
            negative: false,
            square,
        }
    }

    pub fn integer(v: i128) -> Self {
        Self {
            negative: v < 0,
            square: v.unsigned_abs() * v.unsigned_abs(),
        }
    }

    pub fn value(self) -> f64 {
        let v = (self.square as f64).sqrt();
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// Exact test for `self = factor * other`.
    pub fn is_multiple_of(self, other: Surd, factor: u64) -> bool {
        let f2 = u128::from(factor) * u128::from(factor);
        other.square.checked_mul(f2) == Some(self.square)
            && (self.square == 0 || self.negative == other.negative)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        let root = (self.square as f64).sqrt().round() as u128;
        if root * root == self.square {
            write!(f, "{sign}{root}")
        } else {
            write!(f, "{sign}sqrt({})", self.square)
        }
    }
}

/// Square matrix of [`Surd`] entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurdMatrix {
    order: usize,
    entries: Vec<Surd>,
}

impl SurdMatrix {
    fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Surd) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> Surd {
        self.entries[i * self.order + j]
    }

    pub fn to_sym(&self) -> SymMatrix {
        SymMatrix::from_upper(self.order, |i, j| self.get(i, j).value())
            .expect("surd entries are finite")
    }

    /// Exact elementwise test for `self = factor * other`.
    pub fn is_multiple_of(&self, other: &SurdMatrix, factor: u64) -> bool {
        self.order == other.order
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.is_multiple_of(*b, factor))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// All quotient-level matrices for one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMatrices {
    n: FactoredInt,
    divisors: Vec<u64>,
    sizes: Vec<u64>,
    degrees: Vec<u64>,
    ta: IntMatrix,
    qn: SurdMatrix,
    qtilde: SurdMatrix,
    m: IntMatrix,
    lq: SurdMatrix,
    mhat: IntMatrix,
}

impl QuotientMatrices {
    pub fn n(&self) -> &FactoredInt {
        &self.n
    }

    pub fn order(&self) -> usize {
        self.divisors.len()
    }

    /// Canonical divisor tuple of `n0`.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Class sizes `(phi(n), a_1, ..., a_(2^r - 1))`.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Vertex degree of the members of each class.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn ta(&self) -> &IntMatrix {
        &self.ta
    }

    pub fn qn(&self) -> &SurdMatrix {
        &self.qn
    }

    pub fn qtilde(&self) -> &SurdMatrix {
        &self.qtilde
    }

    pub fn m(&self) -> &IntMatrix {
        &self.m
    }

    pub fn lq(&self) -> &SurdMatrix {
        &self.lq
    }

    /// Quotient of `M` over the cells `{[1]}`, `{[d] : d != 1, n0}`, `{[n0]}`.
    pub fn mhat(&self) -> &IntMatrix {
        &self.mhat
    }

    /// `P T^A P^-1` evaluated in floating point, with `P = diag(sqrt(s_i))`.
    pub fn similarity_transform(&self) -> Vec<Vec<f64>> {
        let m = self.order();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let pi = (self.sizes[i] as f64).sqrt();
                        let pj = (self.sizes[j] as f64).sqrt();
                        pi * self.ta.get(i, j) as f64 / pj
                    })
                    .collect()
            })
            .collect()
    }
}

fn check_quotient_domain(n: &FactoredInt) -> Result<()> {
    if n.value() < 2 {
        return Err(Error::Domain("quotient matrices need n >= 2".into()));
    }
    if n.omega() > MAX_OMEGA {
        return Err(Error::QuotientTooLarge { omega: n.omega() });
    }
    Ok(())
}

pub fn build_quotients(n: &FactoredInt) -> Result<QuotientMatrices> {
    check_quotient_domain(n)?;
    let part = partition::build_partition(n, false)?;
    let divisors = part.tuple().entries().to_vec();
    let sizes: Vec<u64> = part.sizes().collect();
    let degrees: Vec<u64> = divisors.iter().map(|&d| class_degree(n, d)).collect();
    let order = divisors.len();
    let joined = |i: usize, j: usize| numth::gcd(divisors[i], divisors[j]) == 1;
    let nv = n.value();
    let phi = n.phi();

    let ta = IntMatrix::from_fn(order, |i, j| {
        let base = if joined(i, j) { sizes[j] as i64 } else { 0 };
        base - i64::from(i == 0 && j == 0)
    });
    let qtilde = SurdMatrix::from_fn(order, |i, j| {
        if joined(i, j) {
            Surd::sqrt_of(u128::from(sizes[i]) * u128::from(sizes[j]))
        } else {
            Surd::ZERO
        }
    });
    let qn = SurdMatrix::from_fn(order, |i, j| {
        if i == 0 && j == 0 {
            Surd::integer(i128::from(phi) - 1)
        } else {
            qtilde.get(i, j)
        }
    });
    let m = IntMatrix::from_fn(order, |i, j| {
        let diag = if i == j { degrees[i] as i64 } else { 0 };
        diag - ta.get(i, j)
    });
    let lq = SurdMatrix::from_fn(order, |i, j| {
        if i == j {
            // D_L(1) = n, and n - phi(n) after subtracting Q~(1, 1) = phi(n).
            let dl = if i == 0 { nv } else { degrees[i] };
            Surd::integer(i128::from(dl) - qtilde.get(i, j).value().round() as i128)
        } else {
            -qtilde.get(i, j)
        }
    });
    let cof = n.cofactor() as i64;
    let (nv, phi) = (nv as i64, phi as i64);
    let mhat = IntMatrix::from_rows(&[
        vec![nv - phi, -(nv - phi - cof), -cof],
        vec![-phi, phi, 0],
        vec![-phi, 0, phi],
    ])?;

    Ok(QuotientMatrices {
        n: n.clone(),
        divisors,
        sizes,
        degrees,
        ta,
        qn,
        qtilde,
        m,
        lq,
        mhat,
    })
}

/// `Q~(n0) = sqrt(phi(n0)) (U_1 ⊗ ... ⊗ U_r)` with
/// `U_i = [[sqrt(phi(p_(r+1-i))), 1], [1, 0]]`: the outermost factor carries
/// the largest prime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorFactorization {
    pub n0: u64,
    pub scale: f64,
    /// Prime carried by each factor, outermost first.
    pub primes: Vec<u64>,
    pub factors: Vec<[[f64; 2]; 2]>,
}

impl TensorFactorization {
    /// `scale * (U_1 ⊗ ... ⊗ U_r)`.
    pub fn reconstruct(&self) -> SymMatrix {
        self.factors
            .iter()
            .map(|u| SymMatrix::from_upper(2, |i, j| u[i][j]).expect("finite"))
            .fold(SymMatrix::identity(1), |acc, u| linalg::kron(&acc, &u))
            .scaled(self.scale)
    }

    /// Eigenvalue pair `(u_(i,1), u_(i,2))` of each factor.
    pub fn factor_eigenvalues(&self) -> Vec<(f64, f64)> {
        self.primes
            .iter()
            .map(|&p| {
                let s = ((p - 1) as f64).sqrt();
                let disc = ((p + 3) as f64).sqrt();
                ((s + disc) / 2.0, (s - disc) / 2.0)
            })
            .collect()
    }
}

pub fn tensor_factorize(n0: u64) -> Result<TensorFactorization> {
    let f = numth::factorize(n0)?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(n0));
    }
    let mut primes: Vec<u64> = f.primes().collect();
    primes.reverse();
    let factors = primes
        .iter()
        .map(|&p| [[((p - 1) as f64).sqrt(), 1.0], [1.0, 0.0]])
        .collect();
    Ok(TensorFactorization {
        n0,
        scale: (f.phi() as f64).sqrt(),
        primes,
        factors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    Quotient,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::Quotient => "quotient",
        })
    }
}

/// Where an eigenvalue came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Numeric,
}

/// Named closed forms that eigenvalues are tagged with.
pub mod formula {
    /// `-1` with multiplicity `phi(n) - 1`, from the clique on `[1]`.
    pub const UNIT_CLIQUE_ADJ: &str = "unit-clique: -1 x (phi(n)-1)";
    /// `0` with multiplicity `sum(a_i - 1)`, from the independent classes.
    pub const EMPTY_CLASSES_ADJ: &str = "empty-classes: 0 x sum(a_i-1)";
    /// `n` with multiplicity `phi(n) - 1`.
    pub const UNIT_CLIQUE_LAP: &str = "unit-clique: n x (phi(n)-1)";
    /// `deg(d_j)` with multiplicity `a_(j-1) - 1`.
    pub const EMPTY_CLASS_LAP: &str = "empty-class: deg(d_j) x (a_(j-1)-1)";
    /// `0, phi(n), n` as eigenvalues of the three-cell quotient of `M`.
    pub const THREE_CELL: &str = "three-cell quotient: {0, phi(n), n}";
    /// `(n/n0) sqrt(phi(n0)) prod u_(i,l)`.
    pub const TENSOR: &str = "tensor: (n/n0) sqrt(phi(n0)) prod u_(i,l)";
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpair {
    pub value: f64,
    pub multiplicity: u64,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<&'static str>,
}

/// One Weyl interval `lo <= numeric <= hi` at (1-based) index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub j: usize,
    pub lo: f64,
    pub hi: f64,
    pub numeric: f64,
}

impl Bound {
    pub fn contains(&self, slack: f64) -> bool {
        self.lo - slack <= self.numeric && self.numeric <= self.hi + slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: u64,
    pub matrix: MatrixKind,
    pub eigen: Vec<Eigenpair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<Bound>>,
    /// Largest deviation from the dense eigensolve, in full mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl SpectrumReport {
    fn new(n: u64, matrix: MatrixKind, mut eigen: Vec<Eigenpair>) -> Self {
        eigen.retain(|e| e.multiplicity > 0);
        eigen.sort_by(|a, b| b.value.total_cmp(&a.value));
        let mut merged: Vec<Eigenpair> = Vec::with_capacity(eigen.len());
        for e in eigen {
            match merged.last_mut() {
                Some(last)
                    if last.provenance == e.provenance
                        && last.formula == e.formula
                        && (last.value - e.value).abs() <= 1e-9 * last.value.abs().max(1.0) =>
                {
                    last.multiplicity += e.multiplicity;
                }
                _ => merged.push(e),
            }
        }
        Self {
            n,
            matrix,
            eigen: merged,
            bounds: None,
            residual: None,
        }
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.eigen.iter().map(|e| e.multiplicity).sum()
    }

    /// The full multiset, non-increasing.
    pub fn values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .eigen
            .iter()
            .flat_map(|e| std::iter::repeat(e.value).take(e.multiplicity as usize))
            .collect();
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    QuotientOnly,
    /// Also eigensolve the dense matrix and record the deviation.
    Full {
        dense_limit: u64,
    },
}

fn closed(value: f64, multiplicity: u64, formula: &'static str) -> Eigenpair {
    Eigenpair {
        value,
        multiplicity,
        provenance: Provenance::ClosedForm,
        formula: Some(formula),
    }
}

fn numeric(value: f64) -> Eigenpair {
    Eigenpair {
        value,
        multiplicity: 1,
        provenance: Provenance::Numeric,
        formula: None,
    }
}

fn sym_values(m: &SymMatrix) -> Result<Vec<f64>> {
    linalg::sym_eigenvalues_with(m, QUOTIENT_JACOBI).map(|r| r.values)
}

/// Closed-form eigenvalues of `Q~_n`, non-increasing.
pub fn qtilde_values(n: &FactoredInt) -> Result<Vec<f64>> {
    check_quotient_domain(n)?;
    let t = tensor_factorize(n.radical())?;
    let pairs = t.factor_eigenvalues();
    let scale = n.cofactor() as f64 * t.scale;
    let mut out: Vec<f64> = (0..1usize << pairs.len())
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(hi, lo))| if mask >> i & 1 == 0 { hi } else { lo })
                .product::<f64>()
                * scale
        })
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

pub fn qtilde_eigenvalues(n: &FactoredInt) -> Result<SpectrumReport> {
    let eigen = qtilde_values(n)?
        .into_iter()
        .map(|v| closed(v, 1, formula::TENSOR))
        .collect();
    Ok(SpectrumReport::new(n.value(), MatrixKind::Quotient, eigen))
}

/// Numeric eigenvalues of `Q_n`, non-increasing.
pub fn qn_values(q: &QuotientMatrices) -> Result<Vec<f64>> {
    sym_values(&q.qn.to_sym())
}

/// Numeric eigenvalues of `L_Q`, non-increasing.
pub fn lq_values(q: &QuotientMatrices) -> Result<Vec<f64>> {
    sym_values(&q.lq.to_sym())
}

/// Numeric eigenvalues of `T^A`, computed on `P T^A P^-1` evaluated in
/// floating point from the integer matrix.
pub fn ta_values(q: &QuotientMatrices) -> Result<Vec<f64>> {
    let b = q.similarity_transform();
    let m = q.order();
    // The transform is symmetric up to rounding; average the two triangles.
    let sym = SymMatrix::from_upper(m, |i, j| 0.5 * (b[i][j] + b[j][i]))?;
    sym_values(&sym)
}

/// Eigenvalues of the three-cell quotient `M^`, non-increasing.
///
/// `M^` is symmetrized entrywise as `sign * sqrt(M^_ij M^_ji)`. With cell
/// sizes `c` this is the similarity `diag(sqrt c) M^ diag(sqrt c)^-1`; when
/// the middle cell is empty (`r = 1`) its row and column decouple and `phi(n)`
/// sits on the diagonal either way.
pub fn mhat_values(q: &QuotientMatrices) -> Result<Vec<f64>> {
    let h = &q.mhat;
    let sym = SymMatrix::from_upper(3, |i, j| {
        if i == j {
            h.get(i, i) as f64
        } else {
            let prod = h.get(i, j) * h.get(j, i);
            let mag = (prod as f64).sqrt();
            if h.get(i, j) < 0 || h.get(j, i) < 0 {
                -mag
            } else {
                mag
            }
        }
    })?;
    sym_values(&sym)
}

fn dense_residual(
    n: &FactoredInt,
    kind: oracle::DenseKind,
    limit: u64,
    assembled: &[f64],
) -> Result<f64> {
    let dense = oracle::dense_matrix_with_limit(n.value(), kind, limit)?;
    let values = oracle::dense_eigenvalues(&dense)?;
    linalg::multiset_max_diff(assembled, &values)
}

pub fn adjacency_spectrum(n: &FactoredInt, mode: SpectrumMode) -> Result<SpectrumReport> {
    let q = build_quotients(n)?;
    let phi = n.phi();
    let zero_mult: u64 = q.sizes[1..].iter().map(|a| a - 1).sum();
    let mut eigen: Vec<Eigenpair> = qn_values(&q)?.into_iter().map(numeric).collect();
    eigen.push(closed(-1.0, phi - 1, formula::UNIT_CLIQUE_ADJ));
    eigen.push(closed(0.0, zero_mult, formula::EMPTY_CLASSES_ADJ));
    let mut report = SpectrumReport::new(n.value(), MatrixKind::Adjacency, eigen);
    if let SpectrumMode::Full { dense_limit } = mode {
        report.residual = Some(dense_residual(
            n,
            oracle::DenseKind::Adjacency,
            dense_limit,
            &report.values(),
        )?);
    }
    Ok(report)
}

pub fn laplacian_spectrum(n: &FactoredInt, mode: SpectrumMode) -> Result<SpectrumReport> {
    let q = build_quotients(n)?;
    let (nv, phi) = (n.value(), n.phi());
    let mut eigen = vec![closed(nv as f64, phi - 1, formula::UNIT_CLIQUE_LAP)];
    for j in 1..q.order() {
        eigen.push(closed(
            q.degrees[j] as f64,
            q.sizes[j] - 1,
            formula::EMPTY_CLASS_LAP,
        ));
    }

    // Tag the eigenvalues of L_Q that coincide with the three-cell quotient's.
    let mut values = lq_values(&q)?;
    let tol = 1e-9 * nv as f64;
    for target in [nv as f64, phi as f64, 0.0] {
        if let Some(pos) = values
            .iter()
            .enumerate()
            .filter(|(_, v)| (**v - target).abs() <= tol)
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
            .map(|(i, _)| i)
        {
            values.remove(pos);
            eigen.push(closed(target, 1, formula::THREE_CELL));
        }
    }
    eigen.extend(values.into_iter().map(numeric));

    let mut report = SpectrumReport::new(nv, MatrixKind::Laplacian, eigen);
    if let SpectrumMode::Full { dense_limit } = mode {
        report.residual = Some(dense_residual(
            n,
            oracle::DenseKind::Laplacian,
            dense_limit,
            &report.values(),
        )?);
    }
    Ok(report)
}

/// `lambda_j(Q~) - 1 <= lambda_j(Q_n) <= lambda_j(Q~)` for every `j`.
pub fn weyl_bounds_adjacency(n: &FactoredInt) -> Result<Vec<Bound>> {
    let q = build_quotients(n)?;
    let tilde = qtilde_values(n)?;
    let exact = qn_values(&q)?;
    Ok(tilde
        .iter()
        .zip(exact)
        .enumerate()
        .map(|(j, (&t, numeric))| Bound {
            j: j + 1,
            lo: t - 1.0,
            hi: t,
            numeric,
        })
        .collect())
}

/// `lambda_j(-Q~) + phi(n) <= lambda_j(L_Q) <= lambda_j(-Q~) + n`.
pub fn weyl_bounds_laplacian(n: &FactoredInt) -> Result<Vec<Bound>> {
    let q = build_quotients(n)?;
    let neg_tilde: Vec<f64> = qtilde_values(n)?.iter().rev().map(|v| -v).collect();
    let exact = lq_values(&q)?;
    let (nv, phi) = (n.value() as f64, n.phi() as f64);
    Ok(neg_tilde
        .iter()
        .zip(exact)
        .enumerate()
        .map(|(j, (&t, numeric))| Bound {
            j: j + 1,
            lo: t + phi,
            hi: t + nv,
            numeric,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuotientKind {
    Adjacency,
    Laplacian,
}

/// Exact characteristic polynomial of `T^A` or `M`.
pub fn char_poly_quotient(n: &FactoredInt, which: QuotientKind) -> Result<IntPoly> {
    let q = build_quotients(n)?;
    Ok(linalg::char_poly_exact(match which {
        QuotientKind::Adjacency => &q.ta,
        QuotientKind::Laplacian => &q.m,
    }))
}

/// The full adjacency characteristic polynomial
/// `phi_(T^A)(x) (x + 1)^(phi(n) - 1) x^(sum(a_i - 1))`.
pub fn adjacency_char_poly(n: &FactoredInt) -> Result<IntPoly> {
    let q = build_quotients(n)?;
    let base = linalg::char_poly_exact(&q.ta);
    let zeros: u64 = q.sizes[1..].iter().map(|a| a - 1).sum();
    let x_plus_one = IntPoly::from_descending(&[1, 1]);
    let x = IntPoly::from_descending(&[1, 0]);
    let mut out = base;
    for _ in 1..n.phi() {
        out = out.mul(&x_plus_one);
    }
    for _ in 0..zeros {
        out = out.mul(&x);
    }
    Ok(out)
}
