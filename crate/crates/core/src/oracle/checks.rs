//! Sweeps comparing closed forms with the brute-force oracles.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::gensets;
use crate::graph::{self, DEFAULT_DENSE_LIMIT};
use crate::linalg;
use crate::numth;
use crate::spectra::{self, QuotientKind, SpectrumMode};

use super::brute::{self, DenseKind};
use super::{planar, search};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Gensets,
    Edges,
    Degrees,
    Diameter,
    Eulerian,
    Hamiltonian,
    Regularity,
    Clique,
    Chromatic,
    Independence,
    Planarity,
    HJoin,
    AdjSpectrum,
    LapSpectrum,
    LapKnown,
    Mhat,
    Similarity,
    Tensor,
    Scaling,
    LapDistinctScaling,
    Weyl,
    CharPoly,
}

impl Check {
    pub const ALL: [Check; 22] = [
        Check::Gensets,
        Check::Edges,
        Check::Degrees,
        Check::Diameter,
        Check::Eulerian,
        Check::Hamiltonian,
        Check::Regularity,
        Check::Clique,
        Check::Chromatic,
        Check::Independence,
        Check::Planarity,
        Check::HJoin,
        Check::AdjSpectrum,
        Check::LapSpectrum,
        Check::LapKnown,
        Check::Mhat,
        Check::Similarity,
        Check::Tensor,
        Check::Scaling,
        Check::LapDistinctScaling,
        Check::Weyl,
        Check::CharPoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Gensets => "gensets",
            Check::Edges => "edges",
            Check::Degrees => "degrees",
            Check::Diameter => "diameter",
            Check::Eulerian => "eulerian",
            Check::Hamiltonian => "hamiltonian",
            Check::Regularity => "regularity",
            Check::Clique => "clique",
            Check::Chromatic => "chromatic",
            Check::Independence => "independence",
            Check::Planarity => "planarity",
            Check::HJoin => "h-join",
            Check::AdjSpectrum => "adj-spectrum",
            Check::LapSpectrum => "lap-spectrum",
            Check::LapKnown => "lap-known",
            Check::Mhat => "mhat",
            Check::Similarity => "similarity",
            Check::Tensor => "tensor",
            Check::Scaling => "scaling",
            Check::LapDistinctScaling => "lap-distinct-scaling",
            Check::Weyl => "weyl",
            Check::CharPoly => "char-poly",
        }
    }

    /// Largest `n` the check evaluates; ranges are clamped to it.
    pub fn cap(self, dense_limit: u64) -> u64 {
        match self {
            Check::Gensets => brute::GENSETS_MAX_N,
            Check::Edges | Check::Eulerian | Check::Hamiltonian => brute::EDGES_MAX_N,
            Check::Degrees | Check::Diameter | Check::Regularity => brute::DIAMETER_MAX_N,
            Check::Clique | Check::Chromatic => 40,
            Check::Independence | Check::Planarity => brute::PROPS_MAX_N,
            Check::HJoin => dense_limit.min(300),
            Check::AdjSpectrum
            | Check::LapSpectrum
            | Check::LapDistinctScaling
            | Check::CharPoly => dense_limit.min(brute::DENSE_MAX_N),
            Check::LapKnown
            | Check::Mhat
            | Check::Similarity
            | Check::Tensor
            | Check::Scaling
            | Check::Weyl => u64::MAX,
        }
    }

    /// Parses a comma-separated list; `all` selects every check.
    pub fn parse_list(s: &str) -> std::result::Result<Vec<Check>, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err("no checks selected".into());
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                format!(
                    "unknown check `{s}` (expected one of: all, {})",
                    names.join(", ")
                )
            })
    }
}

/// Comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Sorted-multiset agreement of assembled and dense spectra.
    pub spectrum: f64,
    /// `{0, phi(n), n}` against the quotient eigenvalues.
    pub known: f64,
    /// Eigenvalues of `T^A` against those of `Q_n`.
    pub similarity: f64,
    /// Tensor reconstruction, elementwise.
    pub tensor: f64,
    /// Distinct Laplacian eigenvalues under scaling.
    pub distinct: f64,
    /// Slack on Weyl interval endpoints, relative to `n`.
    pub weyl: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spectrum: 1e-6,
            known: 1e-9,
            similarity: 1e-8,
            tensor: 1e-12,
            distinct: 1e-6,
            weyl: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub tol: Tolerances,
    pub dense_limit: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: u64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub check: Check,
    pub lo: u64,
    pub hi: u64,
    pub evaluated: u64,
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: u64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs one check over `lo..=hi` (clamped to `n >= 2` and the check's cap),
/// in parallel over `n`.
pub fn run_check(check: Check, lo: u64, hi: u64, cfg: &CheckConfig) -> OracleReport {
    let start = Instant::now();
    let lo = lo.max(2);
    let hi = hi.min(check.cap(cfg.dense_limit));
    let mut mismatches: Vec<Mismatch> = if lo <= hi {
        (lo..=hi)
            .into_par_iter()
            .flat_map_iter(|n| {
                check_one(check, n, cfg).unwrap_or_else(|e| {
                    vec![Mismatch {
                        n,
                        expected: "a result".into(),
                        actual: format!("error: {e}"),
                    }]
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    mismatches.sort_by_key(|m| m.n);
    OracleReport {
        check,
        lo,
        hi,
        evaluated: if lo <= hi { hi - lo + 1 } else { 0 },
        passed: mismatches.is_empty(),
        mismatches,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run_checks(checks: &[Check], lo: u64, hi: u64, cfg: &CheckConfig) -> Vec<OracleReport> {
    checks.iter().map(|&c| run_check(c, lo, hi, cfg)).collect()
}

fn mismatch(n: u64, expected: impl fmt::Debug, actual: impl fmt::Debug) -> Vec<Mismatch> {
    vec![Mismatch {
        n,
        expected: shown(&expected),
        actual: shown(&actual),
    }]
}

/// Debug form, minus the quotes a bare string would get.
fn shown(v: &impl fmt::Debug) -> String {
    let s = format!("{v:?}");
    match s.strip_prefix('"').and_then(|t| t.strip_suffix('"')) {
        Some(inner) if !inner.contains('"') => inner.to_string(),
        _ => s,
    }
}

fn compare<T: PartialEq + fmt::Debug>(n: u64, expected: T, actual: T) -> Vec<Mismatch> {
    if expected == actual {
        Vec::new()
    } else {
        mismatch(n, expected, actual)
    }
}

fn distinct(values: &[f64], tol: f64) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
    v
}

fn check_one(check: Check, n: u64, cfg: &CheckConfig) -> Result<Vec<Mismatch>> {
    let f = numth::factorize(n)?;
    let tol = &cfg.tol;
    Ok(match check {
        Check::Gensets => {
            let mut out = Vec::new();
            for k in 1..=brute::GENSETS_MAX_K {
                let fam = gensets::enumerate_gk(&f, k, true)?;
                let sets = fam.sets.unwrap_or_default();
                let oracle = brute::brute_gensets(n, k)?;
                if u64::try_from(&fam.count).ok() != Some(oracle.len() as u64) {
                    out.extend(mismatch(n, (k, oracle.len()), (k, fam.count.to_string())));
                } else if sets != oracle {
                    out.extend(mismatch(n, (k, "brute sets"), (k, "different sets")));
                }
            }
            out
        }
        Check::Edges => compare(n, u128::from(brute::brute_edges(n)?), graph::edge_count(&f)),
        Check::Degrees => {
            let degrees = brute::brute_degrees(n)?;
            let mut out = Vec::new();
            for (a, &d) in degrees.iter().enumerate() {
                let class = numth::gcd(a as u64, f.radical());
                let formula = graph::degree_of_class(class, &f)?;
                if formula != d {
                    out.extend(mismatch(n, (a, d), (a, formula)));
                }
            }
            out
        }
        Check::Diameter => compare(
            n,
            brute::brute_diameter(n)?,
            Some(graph::compute_props(&f)?.diameter),
        ),
        Check::Eulerian => {
            let even = brute::brute_degrees(n)?.iter().all(|d| d % 2 == 0);
            compare(n, even, graph::compute_props(&f)?.is_eulerian)
        }
        Check::Hamiltonian => {
            let w = graph::compute_props(&f)?.hamiltonian_cycle;
            match (n > 2, w) {
                (true, Some(w)) if brute::is_hamiltonian_cycle(n, w.vertices()) => Vec::new(),
                (false, None) => Vec::new(),
                (_, w) => mismatch(n, "a valid Hamiltonian cycle for n > 2, none otherwise", w),
            }
        }
        Check::Regularity => {
            let degrees = brute::brute_degrees(n)?;
            let regular = degrees.iter().all(|&d| d == degrees[0]);
            let bipartite = brute::brute_bipartite(n)?;
            let p = graph::compute_props(&f)?;
            compare(n, (regular, bipartite), (p.is_regular, p.is_bipartite))
        }
        Check::Clique => compare(
            n,
            search::max_clique(&brute::adjacency_masks(n)),
            graph::compute_props(&f)?.clique_number,
        ),
        Check::Chromatic => compare(
            n,
            search::chromatic_number(&brute::adjacency_masks(n)),
            graph::compute_props(&f)?.chromatic_number,
        ),
        Check::Independence => compare(
            n,
            search::independence_number(&brute::adjacency_masks(n)),
            graph::compute_props(&f)?.independence_number,
        ),
        Check::Planarity => {
            let claimed = graph::compute_props(&f)?.is_planar;
            let k5 = planar::k5_witness(n);
            let drawn = planar::fixture_embedding_ok(n) == Some(true);
            match (claimed, k5, drawn) {
                (true, None, true) | (false, Some(_), _) => Vec::new(),
                (claimed, k5, drawn) => {
                    mismatch(n, ("K5 witness", k5, "fixture drawing", drawn), claimed)
                }
            }
        }
        Check::HJoin => {
            let g = graph::build_graph_with_limit(&f, cfg.dense_limit)?;
            let h = graph::build_h_graph(&f)?;
            let joined = h.join_rows(g.partition());
            let oracle = brute::adjacency_lists(n);
            let from_rows = |rows: &[fixedbitset::FixedBitSet]| -> Vec<Vec<u64>> {
                rows.iter()
                    .map(|r| r.ones().map(|b| b as u64).collect())
                    .collect()
            };
            let mut out = compare(n, &oracle, &from_rows(&joined));
            out.extend(compare(n, &oracle, &from_rows(g.rows())));
            out.truncate(1);
            out
        }
        Check::AdjSpectrum | Check::LapSpectrum => {
            let (kind, report) = if check == Check::AdjSpectrum {
                (
                    DenseKind::Adjacency,
                    spectra::adjacency_spectrum(&f, SpectrumMode::QuotientOnly)?,
                )
            } else {
                (
                    DenseKind::Laplacian,
                    spectra::laplacian_spectrum(&f, SpectrumMode::QuotientOnly)?,
                )
            };
            let assembled = report.values();
            let dense = brute::dense_eigenvalues(&brute::dense_matrix_with_limit(
                n,
                kind,
                cfg.dense_limit,
            )?)?;
            match linalg::multiset_max_diff(&assembled, &dense) {
                Ok(d) if d <= tol.spectrum => Vec::new(),
                Ok(d) => mismatch(n, dense, format!("{assembled:?} (max deviation {d:e})")),
                Err(e) => mismatch(n, dense.len(), e.to_string()),
            }
        }
        Check::LapKnown => {
            let q = spectra::build_quotients(&f)?;
            let values = spectra::lq_values(&q)?;
            let missing: Vec<u64> = [0, f.phi(), n]
                .into_iter()
                .filter(|&t| !values.iter().any(|v| (v - t as f64).abs() <= tol.known))
                .collect();
            if missing.is_empty() {
                Vec::new()
            } else {
                mismatch(
                    n,
                    format!("{{0, {}, {n}}} within eig(L_Q)", f.phi()),
                    format!("{values:?} lacks {missing:?}"),
                )
            }
        }
        Check::Mhat => {
            let q = spectra::build_quotients(&f)?;
            let values = spectra::mhat_values(&q)?;
            let mut want = vec![n as f64, f.phi() as f64, 0.0];
            want.sort_by(|a, b| b.total_cmp(a));
            let mut out = Vec::new();
            if linalg::multiset_max_diff(&values, &want)? > tol.known {
                out.extend(mismatch(n, want, values));
            }
            let sums = q.m().row_sums();
            if sums.iter().any(|&s| s != 0) {
                out.extend(mismatch(n, "zero row sums of M", sums));
            }
            out
        }
        Check::Similarity => {
            let q = spectra::build_quotients(&f)?;
            let ta = spectra::ta_values(&q)?;
            let qn = spectra::qn_values(&q)?;
            let mut out = Vec::new();
            if linalg::multiset_max_diff(&ta, &qn)? > tol.similarity {
                out.extend(mismatch(n, qn, ta));
            }
            let transformed = q.similarity_transform();
            let target = q.qn().to_sym();
            let scale = target.frobenius_norm().max(1.0);
            let dev = (0..q.order())
                .flat_map(|i| (0..q.order()).map(move |j| (i, j)))
                .map(|(i, j)| (transformed[i][j] - target.get(i, j)).abs())
                .fold(0.0, f64::max);
            if dev > tol.similarity * scale {
                out.extend(mismatch(
                    n,
                    "P T^A P^-1 = Q_n",
                    format!("max deviation {dev:e}"),
                ));
            }
            out
        }
        Check::Tensor => {
            if !f.is_squarefree() {
                return Ok(Vec::new());
            }
            let rebuilt = spectra::tensor_factorize(n)?.reconstruct();
            let direct = spectra::build_quotients(&f)?.qtilde().to_sym();
            let dev = rebuilt.max_abs_diff(&direct)?;
            if dev < tol.tensor {
                Vec::new()
            } else {
                mismatch(n, format!("deviation < {:e}", tol.tensor), dev)
            }
        }
        Check::Scaling => {
            if f.is_squarefree() {
                return Ok(Vec::new());
            }
            let base = numth::factorize(f.radical())?;
            let q = spectra::build_quotients(&f)?;
            let q0 = spectra::build_quotients(&base)?;
            let c = f.cofactor();
            compare(
                n,
                (true, true),
                (
                    q.qtilde().is_multiple_of(q0.qtilde(), c),
                    q.lq().is_multiple_of(q0.lq(), c),
                ),
            )
        }
        Check::LapDistinctScaling => {
            let lap = |m: u64| -> Result<Vec<f64>> {
                brute::dense_eigenvalues(&brute::dense_matrix_with_limit(
                    m,
                    DenseKind::Laplacian,
                    cfg.dense_limit,
                )?)
            };
            let c = f.cofactor() as f64;
            let ours = distinct(&lap(n)?, tol.distinct);
            let scaled: Vec<f64> = distinct(&lap(f.radical())?, tol.distinct)
                .iter()
                .map(|v| c * v)
                .collect();
            let same = ours.len() == scaled.len()
                && ours
                    .iter()
                    .zip(&scaled)
                    .all(|(a, b)| (a - b).abs() <= tol.distinct);
            if same {
                Vec::new()
            } else {
                mismatch(n, scaled, ours)
            }
        }
        Check::Weyl => {
            let slack = tol.weyl * n as f64;
            let mut out = Vec::new();
            for (label, bounds) in [
                ("Q_n", spectra::weyl_bounds_adjacency(&f)?),
                ("L_Q", spectra::weyl_bounds_laplacian(&f)?),
            ] {
                if let Some(b) = bounds.iter().find(|b| !b.contains(slack)) {
                    out.extend(mismatch(n, (label, b.j, b.lo, b.hi), b.numeric));
                }
            }
            out
        }
        Check::CharPoly => {
            let q = spectra::build_quotients(&f)?;
            let poly = spectra::char_poly_quotient(&f, QuotientKind::Adjacency)?;
            let roots = spectra::qn_values(&q)?;
            let dense = brute::dense_eigenvalues(&brute::dense_matrix_with_limit(
                n,
                DenseKind::Adjacency,
                cfg.dense_limit,
            )?)?;
            let mut out = Vec::new();
            for &r in &roots {
                if poly.eval(r).abs() > 1e-9 * poly.eval_scale(r) {
                    out.extend(mismatch(n, format!("root {r} of {poly}"), poly.eval(r)));
                }
                let nearest = dense
                    .iter()
                    .map(|d| (d - r).abs())
                    .fold(f64::INFINITY, f64::min);
                if nearest > tol.spectrum {
                    out.extend(mismatch(
                        n,
                        format!("{r} in the adjacency spectrum"),
                        nearest,
                    ));
                }
            }
            out
        }
    })
}
