//! Exhaustive implementations built from the gcd adjacency rule alone.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CycleWitness, GraphProps};
use crate::linalg::{self, JacobiOptions, SymMatrix};
use crate::numth::gcd;

use super::search;

pub const GENSETS_MAX_N: u64 = 120;
pub const GENSETS_MAX_K: usize = 3;
pub const EDGES_MAX_N: u64 = 1000;
pub const PROPS_MAX_N: u64 = 60;
pub const DIAMETER_MAX_N: u64 = 500;
pub const DENSE_MAX_N: u64 = 5000;

fn cap(check: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OracleCap {
            check,
            detail: detail(),
        })
    }
}

pub fn adjacent(a: u64, b: u64, n: u64) -> bool {
    a != b && gcd(gcd(a, b), n) == 1
}

fn degree(a: u64, n: u64) -> u64 {
    (0..n).filter(|&b| adjacent(a, b, n)).count() as u64
}

/// Adjacency lists from the gcd rule.
pub fn adjacency_lists(n: u64) -> Vec<Vec<u64>> {
    (0..n)
        .map(|a| (0..n).filter(|&b| adjacent(a, b, n)).collect())
        .collect()
}

/// Adjacency as one bitmask per vertex, for `n <= 64`.
pub fn adjacency_masks(n: u64) -> Vec<u64> {
    assert!(n <= 64, "mask adjacency needs n <= 64");
    (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| adjacent(a, b, n))
                .fold(0u64, |m, b| m | 1 << b)
        })
        .collect()
}

/// Every minimal generating `k`-subset of `Z_n`, each ascending, in
/// lexicographic order.
pub fn brute_gensets(n: u64, k: usize) -> Result<Vec<Vec<u64>>> {
    cap("gensets", n <= GENSETS_MAX_N && k <= GENSETS_MAX_K, || {
        format!("n = {n}, k = {k} exceeds n <= {GENSETS_MAX_N}, k <= {GENSETS_MAX_K}")
    })?;
    if k == 0 || n < 2 {
        return Err(Error::Domain(
            "brute_gensets needs n >= 2 and k >= 1".into(),
        ));
    }
    let generates = |set: &[u64]| set.iter().fold(n, |g, &x| gcd(g, x)) == 1;
    let mut out = Vec::new();
    let mut set = Vec::with_capacity(k);
    subsets(n, k, 0, &mut set, &mut |s| {
        let minimal = (0..s.len()).all(|skip| {
            let rest: Vec<u64> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &x)| x)
                .collect();
            !generates(&rest)
        });
        if generates(s) && minimal {
            out.push(s.to_vec());
        }
    });
    Ok(out)
}

fn subsets(n: u64, k: usize, start: u64, set: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if set.len() == k {
        f(set);
        return;
    }
    for x in start..n {
        set.push(x);
        subsets(n, k, x + 1, set, f);
        set.pop();
    }
}

/// Number of unordered adjacent pairs.
pub fn brute_edges(n: u64) -> Result<u64> {
    cap("edges", n <= EDGES_MAX_N, || {
        format!("n = {n} exceeds {EDGES_MAX_N}")
    })?;
    Ok((0..n)
        .map(|a| ((a + 1)..n).filter(|&b| adjacent(a, b, n)).count() as u64)
        .sum())
}

/// Degree of every vertex, by counting.
pub fn brute_degrees(n: u64) -> Result<Vec<u64>> {
    cap("degrees", n <= EDGES_MAX_N, || {
        format!("n = {n} exceeds {EDGES_MAX_N}")
    })?;
    Ok((0..n).map(|a| degree(a, n)).collect())
}

/// Largest BFS eccentricity, or `None` if disconnected.
pub fn brute_diameter(n: u64) -> Result<Option<u32>> {
    cap("diameter", n <= DIAMETER_MAX_N, || {
        format!("n = {n} exceeds {DIAMETER_MAX_N}")
    })?;
    let adj = adjacency_lists(n);
    let mut diameter = 0;
    for s in 0..n as usize {
        let mut dist = vec![u32::MAX; n as usize];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let ecc = *dist.iter().max().expect("n >= 1");
        if ecc == u32::MAX {
            return Ok(None);
        }
        diameter = diameter.max(ecc);
    }
    Ok(Some(diameter))
}

fn is_bipartite(adj: &[Vec<u64>]) -> bool {
    let mut side = vec![None; adj.len()];
    for s in 0..adj.len() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].expect("visited");
            for &w in &adj[u] {
                match side[w as usize] {
                    None => {
                        side[w as usize] = Some(!su);
                        queue.push_back(w as usize);
                    }
                    Some(sw) if sw == su => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Two-colorability of `E_n`, by BFS.
pub fn brute_bipartite(n: u64) -> Result<bool> {
    cap("bipartite", n <= DIAMETER_MAX_N, || {
        format!("n = {n} exceeds {DIAMETER_MAX_N}")
    })?;
    Ok(is_bipartite(&adjacency_lists(n)))
}

/// True when consecutive entries (cyclically) are adjacent and every vertex
/// of `Z_n` appears exactly once.
pub fn is_hamiltonian_cycle(n: u64, cycle: impl IntoIterator<Item = u64>) -> bool {
    let v: Vec<u64> = cycle.into_iter().collect();
    if n < 3 || v.len() as u64 != n {
        return false;
    }
    let mut seen = vec![false; n as usize];
    for &x in &v {
        if x >= n || std::mem::replace(&mut seen[x as usize], true) {
            return false;
        }
    }
    (0..v.len()).all(|i| adjacent(v[i], v[(i + 1) % v.len()], n))
}

/// Every invariant by exhaustive search. Limited to `n <= 60`.
pub fn brute_props(n: u64) -> Result<GraphProps> {
    cap("props", n <= PROPS_MAX_N, || {
        format!("n = {n} exceeds {PROPS_MAX_N}")
    })?;
    if n < 2 {
        return Err(Error::Domain("brute_props needs n >= 2".into()));
    }
    let adj = adjacency_lists(n);
    let masks = adjacency_masks(n);
    let degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
    let diameter =
        brute_diameter(n)?.ok_or_else(|| Error::Domain(format!("E_{n} is disconnected")))?;
    let cycle = search::hamiltonian_cycle(&masks).map(|vertices| CycleWitness::Explicit {
        vertices: vertices.into_iter().map(|v| v as u64).collect(),
    });
    let is_planar = match super::planar::k5_witness(n) {
        Some(_) => false,
        None => super::planar::fixture_embedding_ok(n).ok_or_else(|| Error::OracleCap {
            check: "planarity",
            detail: format!("no K5 and no fixture embedding for n = {n}"),
        })?,
    };
    Ok(GraphProps {
        n,
        diameter,
        is_regular: degrees.iter().all(|&d| d == degrees[0]),
        is_bipartite: is_bipartite(&adj),
        hamiltonian_cycle: cycle,
        is_eulerian: degrees.iter().all(|d| d % 2 == 0),
        is_planar,
        clique_number: search::max_clique(&masks),
        chromatic_number: search::chromatic_number(&masks),
        independence_number: search::independence_number(&masks),
        edge_count: u128::from(brute_edges(n)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DenseKind {
    Adjacency,
    Laplacian,
}

pub fn dense_matrix(n: u64, kind: DenseKind) -> Result<SymMatrix> {
    dense_matrix_with_limit(n, kind, DENSE_MAX_N)
}

pub fn dense_matrix_with_limit(n: u64, kind: DenseKind, limit: u64) -> Result<SymMatrix> {
    if n > limit {
        return Err(Error::DenseLimit { n, limit });
    }
    let degrees: Vec<f64> = (0..n).map(|a| degree(a, n) as f64).collect();
    SymMatrix::from_upper(n as usize, |i, j| {
        let (a, b) = (i as u64, j as u64);
        match kind {
            DenseKind::Adjacency => f64::from(u8::from(adjacent(a, b, n))),
            DenseKind::Laplacian if i == j => degrees[i],
            DenseKind::Laplacian => -f64::from(u8::from(adjacent(a, b, n))),
        }
    })
}

/// Eigenvalues of a dense oracle matrix, non-increasing.
pub fn dense_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    let opts = JacobiOptions {
        tol: 1e-12,
        max_sweeps: 200,
    };
    linalg::sym_eigenvalues_with(m, opts).map(|r| r.values)
}
