//! The generating graph `E_n`: vertices `Z_n`, with `a ~ b` iff
//! `gcd(a, b, n) = 1`, and its H-join structure over the divisor classes.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numth::{self, FactoredInt};
use crate::partition::{self, ClassPartition};

pub const DEFAULT_DENSE_LIMIT: u64 = 5000;

/// Dense materialization of `E_n`, one bitset row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingGraph {
    n: FactoredInt,
    rows: Vec<FixedBitSet>,
    partition: ClassPartition,
}

impl GeneratingGraph {
    pub fn n(&self) -> &FactoredInt {
        &self.n
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn partition(&self) -> &ClassPartition {
        &self.partition
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        self.rows[a as usize].contains(b as usize)
    }

    pub fn neighbors(&self, a: u64) -> impl Iterator<Item = u64> + '_ {
        self.rows[a as usize].ones().map(|b| b as u64)
    }

    pub fn degree(&self, a: u64) -> u64 {
        self.rows[a as usize].count_ones(..) as u64
    }

    pub fn edge_count(&self) -> u64 {
        self.rows
            .iter()
            .map(|r| r.count_ones(..) as u64)
            .sum::<u64>()
            / 2
    }

    /// DOT rendering with vertices colored by class.
    pub fn to_dot(&self) -> String {
        let mut out = format!("graph E{} {{\n  node [style=filled];\n", self.n.value());
        for (idx, class) in self.partition.classes().iter().enumerate() {
            for a in class.members.iter().flatten() {
                let _ = writeln!(
                    out,
                    "  {a} [fillcolor=\"{}\", class=\"{}\"];",
                    palette(idx),
                    class.divisor
                );
            }
        }
        for a in 0..self.order() {
            for b in self.rows[a].ones().filter(|&b| b > a) {
                let _ = writeln!(out, "  {a} -- {b};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn palette(i: usize) -> &'static str {
    const COLORS: [&str; 12] = [
        "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
        "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
    ];
    COLORS[i % COLORS.len()]
}

pub fn build_graph(n: &FactoredInt) -> Result<GeneratingGraph> {
    build_graph_with_limit(n, DEFAULT_DENSE_LIMIT)
}

pub fn build_graph_with_limit(n: &FactoredInt, limit: u64) -> Result<GeneratingGraph> {
    let nv = n.value();
    if nv < 2 {
        return Err(Error::Domain("the generating graph needs n >= 2".into()));
    }
    if nv > limit {
        return Err(Error::DenseLimit { n: nv, limit });
    }
    let partition = partition::build_partition(n, true)?;
    let size = nv as usize;
    let mut rows = vec![FixedBitSet::with_capacity(size); size];
    for a in 0..nv {
        // gcd(a, b, n) = gcd(gcd(a, n), b)
        let g = numth::gcd(a, nv);
        for b in (a + 1)..nv {
            if numth::gcd(g, b) == 1 {
                rows[a as usize].insert(b as usize);
                rows[b as usize].insert(a as usize);
            }
        }
    }
    Ok(GeneratingGraph {
        n: n.clone(),
        rows,
        partition,
    })
}

/// The coprimality graph on the divisors of `n0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HGraph {
    pub vertices: Vec<u64>,
    pub edges: Vec<(u64, u64)>,
}

impl HGraph {
    pub fn adjacent(&self, d: u64, e: u64) -> bool {
        d != e && numth::gcd(d, e) == 1 && self.vertices.contains(&d) && self.vertices.contains(&e)
    }

    /// BFS diameter over the divisor vertices.
    pub fn diameter(&self) -> u32 {
        let m = self.vertices.len();
        let idx = |d: u64| self.vertices.iter().position(|&v| v == d).expect("vertex");
        let mut adj = vec![Vec::new(); m];
        for &(d, e) in &self.edges {
            adj[idx(d)].push(idx(e));
            adj[idx(e)].push(idx(d));
        }
        let mut diameter = 0;
        for s in 0..m {
            let mut dist = vec![u32::MAX; m];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            diameter = diameter.max(dist.into_iter().max().unwrap_or(0));
        }
        diameter
    }

    /// Adjacency rows of the H-join `H[K_phi, empty, ..., empty]`: two
    /// residues are adjacent iff their classes are adjacent in `H`, or both
    /// lie in the clique `[1]`.
    pub fn join_rows(&self, partition: &ClassPartition) -> Vec<FixedBitSet> {
        let n = partition.n().value() as usize;
        let classes = partition.classes();
        let masks: Vec<FixedBitSet> = classes
            .iter()
            .map(|c| {
                let mut bits = FixedBitSet::with_capacity(n);
                for &a in c.members.as_deref().expect("materialized partition") {
                    bits.insert(a as usize);
                }
                bits
            })
            .collect();
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for (i, ci) in classes.iter().enumerate() {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, cj) in classes.iter().enumerate() {
                if self.adjacent(ci.divisor, cj.divisor) || (i == j && ci.divisor == 1) {
                    row.union_with(&masks[j]);
                }
            }
            for &a in ci.members.as_deref().expect("materialized partition") {
                let mut r = row.clone();
                r.set(a as usize, false);
                rows[a as usize] = r;
            }
        }
        rows
    }

    pub fn to_dot(&self, partition: &ClassPartition) -> String {
        let mut out = String::from("graph H {\n  node [style=filled];\n");
        for (i, &d) in self.vertices.iter().enumerate() {
            let size = partition.class(d).map_or(0, |c| c.size);
            let _ = writeln!(
                out,
                "  \"{d}\" [label=\"[{d}] ({size})\", fillcolor=\"{}\"];",
                palette(i)
            );
        }
        for (d, e) in &self.edges {
            let _ = writeln!(out, "  \"{d}\" -- \"{e}\";");
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_h_graph(n: &FactoredInt) -> Result<HGraph> {
    if n.value() < 2 {
        return Err(Error::Domain("the H graph needs n >= 2".into()));
    }
    let vertices = numth::tuple_from_primes(n.primes().collect())
        .entries()
        .to_vec();
    let mut edges = Vec::new();
    for (i, &d) in vertices.iter().enumerate() {
        for &e in &vertices[i + 1..] {
            if numth::gcd(d, e) == 1 {
                edges.push((d, e));
            }
        }
    }
    Ok(HGraph { vertices, edges })
}

/// Degree of every vertex in `[d]`.
pub fn degree_of_class(d: u64, n: &FactoredInt) -> Result<u64> {
    let n0 = n.radical();
    if d == 0 || n0 % d != 0 {
        return Err(Error::NotRadicalDivisor { d, radical: n0 });
    }
    Ok(partition::class_degree(n, d))
}

/// `|E| = phi(n) / 2 * ((n / n0) sigma(n0) - 1)`.
pub fn edge_count(n: &FactoredInt) -> u128 {
    let twice = u128::from(n.phi()) * (u128::from(n.cofactor()) * n.sigma_radical() - 1);
    twice / 2
}

/// `|E| / C(n, 2)`: the chance that two distinct uniformly chosen residues
/// generate `Z_n`.
pub fn gen_probability(n: &FactoredInt) -> Result<Ratio<u128>> {
    let pairs = pair_count(n)?;
    Ok(Ratio::new(edge_count(n), pairs))
}

/// `2|E| / C(n, 2)`, counting ordered generating pairs against unordered
/// ones. Exceeds 1 for primes; provided only for comparison.
pub fn gen_probability_ordered(n: &FactoredInt) -> Result<Ratio<u128>> {
    let pairs = pair_count(n)?;
    Ok(Ratio::new(2 * edge_count(n), pairs))
}

fn pair_count(n: &FactoredInt) -> Result<u128> {
    let nv = u128::from(n.value());
    if nv < 2 {
        return Err(Error::Domain("the pair probability needs n >= 2".into()));
    }
    Ok(nv * (nv - 1) / 2)
}

/// A Hamiltonian cycle, closed back to its first vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CycleWitness {
    /// `0, 1, ..., length - 1, 0`.
    Consecutive {
        length: u64,
    },
    Explicit {
        vertices: Vec<u64>,
    },
}

impl CycleWitness {
    pub fn len(&self) -> u64 {
        match self {
            CycleWitness::Consecutive { length } => *length,
            CycleWitness::Explicit { vertices } => vertices.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cycle vertices without the closing repeat.
    pub fn vertices(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            CycleWitness::Consecutive { length } => Box::new(0..*length),
            CycleWitness::Explicit { vertices } => Box::new(vertices.iter().copied()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphProps {
    pub n: u64,
    pub diameter: u32,
    pub is_regular: bool,
    pub is_bipartite: bool,
    pub hamiltonian_cycle: Option<CycleWitness>,
    pub is_eulerian: bool,
    pub is_planar: bool,
    pub clique_number: u64,
    pub chromatic_number: u64,
    pub independence_number: u64,
    pub edge_count: u128,
}

pub fn compute_props(n: &FactoredInt) -> Result<GraphProps> {
    let nv = n.value();
    if nv < 2 {
        return Err(Error::Domain("graph properties need n >= 2".into()));
    }
    let prime = n.is_prime();
    let clique = n.phi() + u64::from(n.omega());
    Ok(GraphProps {
        n: nv,
        diameter: if prime { 1 } else { 2 },
        is_regular: prime,
        is_bipartite: nv == 2,
        hamiltonian_cycle: (nv > 2).then_some(CycleWitness::Consecutive { length: nv }),
        is_eulerian: nv % 2 == 1,
        is_planar: matches!(nv, 2 | 3 | 4 | 6),
        clique_number: clique,
        chromatic_number: clique,
        independence_number: nv / n.smallest_prime().expect("n >= 2"),
        edge_count: edge_count(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::factorize;

    fn fi(n: u64) -> FactoredInt {
        factorize(n).unwrap()
    }

    fn gcd3(a: u64, b: u64, n: u64) -> u64 {
        numth::gcd(numth::gcd(a, b), n)
    }

    #[test]
    fn small_graphs() {
        let g = build_graph(&fi(3)).unwrap();
        assert_eq!(g.edge_count(), 3);
        let g = build_graph(&fi(2)).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.adjacent(0, 1));
        let g = build_graph(&fi(8)).unwrap();
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![1, 3, 5, 7]);
    }

    #[test]
    fn adjacency_matches_gcd_rule() {
        for n in 2..=150u64 {
            let g = build_graph(&fi(n)).unwrap();
            for a in 0..n {
                assert!(!g.adjacent(a, a));
                for b in 0..n {
                    if a != b {
                        assert_eq!(g.adjacent(a, b), gcd3(a, b, n) == 1, "n={n} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn dense_limit_enforced() {
        assert_eq!(
            build_graph_with_limit(&fi(6000), 5000),
            Err(Error::DenseLimit {
                n: 6000,
                limit: 5000
            })
        );
        assert!(build_graph(&fi(1)).is_err());
    }

    #[test]
    fn class_structure() {
        let g = build_graph(&fi(60)).unwrap();
        for c in g.partition().classes() {
            let members = c.members.as_ref().unwrap();
            for &a in members {
                for &b in members {
                    if a != b {
                        assert_eq!(g.adjacent(a, b), c.divisor == 1);
                    }
                }
            }
            // Identical neighborhoods outside the class.
            let outside =
                |a: u64| -> Vec<u64> { g.neighbors(a).filter(|b| !members.contains(b)).collect() };
            let first = outside(members[0]);
            assert!(members.iter().all(|&a| outside(a) == first));
        }
    }

    #[test]
    fn degree_examples() {
        let n = fi(30);
        assert_eq!(degree_of_class(6, &n).unwrap(), 10);
        assert_eq!(degree_of_class(1, &n).unwrap(), 29);
        assert_eq!(degree_of_class(15, &n).unwrap(), 16);
        assert_eq!(
            degree_of_class(4, &fi(12)),
            Err(Error::NotRadicalDivisor { d: 4, radical: 6 })
        );
    }

    #[test]
    fn degrees_match_materialized() {
        for n in 2..=300u64 {
            let f = fi(n);
            let g = build_graph(&f).unwrap();
            for c in g.partition().classes() {
                let expected = degree_of_class(c.divisor, &f).unwrap();
                for &a in c.members.as_ref().unwrap() {
                    assert_eq!(g.degree(a), expected, "n={n} a={a}");
                }
            }
        }
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(edge_count(&fi(30)), 284);
        assert_eq!(edge_count(&fi(12)), 46);
        for p in [2u64, 3, 7, 97] {
            assert_eq!(edge_count(&fi(p)), u128::from(p * (p - 1) / 2));
        }
        for n in 2..=400u64 {
            assert_eq!(
                edge_count(&fi(n)),
                u128::from(build_graph(&fi(n)).unwrap().edge_count())
            );
        }
    }

    #[test]
    fn h_graph_examples() {
        let h = build_h_graph(&fi(30)).unwrap();
        assert_eq!(h.vertices.len(), 8);
        for (d, e) in [(2, 3), (2, 5), (2, 15), (3, 5), (3, 10), (5, 6)] {
            assert!(h.adjacent(d, e) && h.adjacent(e, d));
        }
        assert!(h.vertices[1..].iter().all(|&d| h.adjacent(1, d)));
        assert!(!h.adjacent(6, 10));
        assert!(h.diameter() <= 2);

        let h = build_h_graph(&fi(49)).unwrap();
        assert_eq!(h.vertices, vec![1, 7]);
        assert_eq!(h.edges, vec![(1, 7)]);

        let h = build_h_graph(&fi(12)).unwrap();
        assert_eq!(h.vertices, vec![1, 2, 3, 6]);
        assert_eq!(h.edges, vec![(1, 2), (1, 3), (1, 6), (2, 3)]);
    }

    #[test]
    fn props_examples() {
        let p = compute_props(&fi(30)).unwrap();
        assert_eq!(p.diameter, 2);
        assert!(!p.is_eulerian && !p.is_planar && !p.is_regular);
        assert_eq!(p.clique_number, 11);
        assert_eq!(p.chromatic_number, 11);
        assert_eq!(p.independence_number, 15);
        assert_eq!(p.edge_count, 284);

        let p = compute_props(&fi(7)).unwrap();
        assert_eq!((p.diameter, p.is_regular, p.clique_number), (1, true, 7));
        assert!(p.is_eulerian);

        let p = compute_props(&fi(6)).unwrap();
        assert!(p.is_planar);
        assert_eq!(p.clique_number, 4);

        let p = compute_props(&fi(2)).unwrap();
        assert!(p.is_bipartite && p.hamiltonian_cycle.is_none());
        assert!(compute_props(&fi(1)).is_err());
    }

    #[test]
    fn consecutive_witness_is_a_cycle() {
        for n in 3..=500u64 {
            let w = compute_props(&fi(n)).unwrap().hamiltonian_cycle.unwrap();
            let v: Vec<u64> = w.vertices().collect();
            assert_eq!(v.len() as u64, n);
            for i in 0..v.len() {
                assert_eq!(gcd3(v[i], v[(i + 1) % v.len()], n), 1);
            }
        }
    }

    #[test]
    fn h_join_reconstruction() {
        for n in 2..=120u64 {
            let g = build_graph(&fi(n)).unwrap();
            let h = build_h_graph(&fi(n)).unwrap();
            assert_eq!(h.join_rows(g.partition()), g.rows(), "n = {n}");
        }
    }

    #[test]
    fn probability() {
        assert_eq!(gen_probability(&fi(30)).unwrap(), Ratio::new(284, 435));
        assert_eq!(gen_probability(&fi(4)).unwrap(), Ratio::new(5, 6));
        assert_eq!(gen_probability(&fi(13)).unwrap(), Ratio::from_integer(1));
        assert_eq!(
            gen_probability_ordered(&fi(13)).unwrap(),
            Ratio::from_integer(2)
        );
        assert!(gen_probability(&fi(1)).is_err());
    }

    #[test]
    fn large_n_props() {
        let n = fi(1 << 40);
        let p = compute_props(&n).unwrap();
        assert_eq!(p.edge_count, (1u128 << 38) * (3 * (1u128 << 39) - 1));
        assert_eq!(p.independence_number, 1 << 39);
        assert_eq!(p.hamiltonian_cycle.unwrap().len(), 1 << 40);
    }

    #[test]
    fn dot_output() {
        let g = build_graph(&fi(6)).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph E6 {"));
        assert_eq!(dot.matches(" -- ").count(), 11);
        let h = build_h_graph(&fi(6)).unwrap();
        let dot = h.to_dot(g.partition());
        assert!(dot.contains("\"1\" -- \"6\""));
        assert!(dot.contains("[6] (1)"));
    }
}
