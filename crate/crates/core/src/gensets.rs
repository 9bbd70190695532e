//! Minimal generating sets of `Z_n`.
//!
//! A subset `S` generates `Z_n` iff `gcd(S ∪ {n}) = 1`, and membership of an
//! element in a minimal set only depends on its class `[d]`. So the family
//! `G_k` is decided on `k`-subsets of the `2^r` divisors of `n0` and only then
//! expanded to residues: a divisor combination `(d_1, ..., d_k)` qualifies iff
//! `gcd(d_1, ..., d_k) = 1` while every `(k-1)`-subcombination has a common
//! factor. Members of the same class never both occur in a minimal set of
//! size `k >= 2`, so each combination contributes the product of its class
//! sizes.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numth::{self, FactoredInt};
use crate::partition::{self, ClassPartition};

/// `G_k` for one `n` and `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenSetFamily {
    #[serde(serialize_with = "serialize_factored_value")]
    pub n: FactoredInt,
    pub k: usize,
    /// Divisor combinations, each sorted ascending, listed in lexicographic
    /// order of their canonical-tuple indices.
    #[serde(rename = "combos")]
    pub class_combos: Vec<Vec<u64>>,
    #[serde(serialize_with = "serialize_big")]
    pub count: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<u64>>>,
}

fn serialize_factored_value<S: Serializer>(
    n: &FactoredInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(n.value())
}

/// Counts that fit in 64 bits are emitted as JSON numbers, larger ones as
/// decimal strings.
fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn check_candidate(set: &[u64], n: u64) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&a) = set.iter().find(|&&a| a >= n) {
        return Err(Error::ResidueOutOfRange { a, n });
    }
    Ok(())
}

fn gcd_all(items: impl IntoIterator<Item = u64>, seed: u64) -> u64 {
    items.into_iter().fold(seed, numth::gcd)
}

/// `true` iff the residues generate `Z_n`.
pub fn is_generating_set(set: &[u64], n: u64) -> Result<bool> {
    check_candidate(set, n)?;
    Ok(gcd_all(set.iter().copied(), n) == 1)
}

/// `true` iff the residues generate `Z_n` and no proper subset does.
///
/// Dropping elements only enlarges the gcd, so it suffices to check the
/// subsets that omit exactly one element. Repeated residues are treated as a
/// multiset, so `{1, 1}` is not minimal.
pub fn is_minimal_generating_set(set: &[u64], n: u64) -> Result<bool> {
    if !is_generating_set(set, n)? {
        return Ok(false);
    }
    if set.len() == 1 {
        return Ok(true);
    }
    Ok((0..set.len()).all(|skip| {
        let g = set
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(n, |acc, (_, &a)| numth::gcd(acc, a));
        g != 1
    }))
}

/// The largest possible size of a minimal generating set, `r = omega(n)`.
pub fn max_minimal_size(n: &FactoredInt) -> Result<u32> {
    if n.value() < 2 {
        return Err(Error::Domain("Z_1 is trivial".into()));
    }
    Ok(n.omega())
}

/// Divisors of the classes `[1], [p_1], ..., [p_r], [n0]`, in canonical order.
///
/// Listed for reference only: the gcd criterion already rules out `[1]` and
/// `[n0]` for `k >= 2`, and classes `[p_i]` do take part in `G_k` for `k < r`.
pub fn exclusion_set(n: &FactoredInt) -> Vec<u64> {
    let mut out = vec![1];
    out.extend(n.primes());
    if n.omega() > 1 {
        out.push(n.radical());
    }
    out
}

/// Divisor combinations for `G_k`, `k >= 2`, as index sets into the tuple.
fn qualifying_combos(entries: &[u64], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo = Vec::with_capacity(k);
    extend_combos(entries, k, 0, &mut combo, &mut out);
    out
}

fn extend_combos(
    entries: &[u64],
    k: usize,
    start: usize,
    combo: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if combo.len() == k {
        let ds: Vec<u64> = combo.iter().map(|&i| entries[i]).collect();
        if gcd_all(ds.iter().copied(), 0) != 1 {
            return;
        }
        let every_drop_fails = (0..k).all(|skip| {
            let g = ds
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0, |acc, (_, &d)| numth::gcd(acc, d));
            g != 1
        });
        if every_drop_fails {
            out.push(combo.clone());
        }
        return;
    }
    for i in start..entries.len() {
        combo.push(i);
        extend_combos(entries, k, i + 1, combo, out);
        combo.pop();
    }
}

pub fn enumerate_gk(n: &FactoredInt, k: usize, expand: bool) -> Result<GenSetFamily> {
    let partition = partition::build_partition(n, expand)?;
    enumerate_gk_in(&partition, k, expand)
}

/// As [`enumerate_gk`] on an existing partition. Expansion requires a
/// materialized partition.
pub fn enumerate_gk_in(partition: &ClassPartition, k: usize, expand: bool) -> Result<GenSetFamily> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if expand && !partition.is_materialized() {
        return Err(Error::Domain(
            "expansion needs a materialized partition".into(),
        ));
    }
    let n = partition.n().clone();
    let entries = partition.tuple().entries();
    let classes = partition.classes();

    let index_combos: Vec<Vec<usize>> = if k == 1 {
        // G_1 is U(n) = [1].
        vec![vec![0]]
    } else if k > n.omega() as usize {
        Vec::new()
    } else {
        qualifying_combos(entries, k)
    };

    let count = index_combos
        .iter()
        .map(|c| {
            c.iter()
                .map(|&i| BigUint::from(classes[i].size))
                .fold(BigUint::one(), |acc, s| acc * s)
        })
        .sum();

    let sets = expand.then(|| {
        let mut sets = Vec::new();
        for combo in &index_combos {
            let lists: Vec<&[u64]> = combo
                .iter()
                .map(|&i| classes[i].members.as_deref().expect("materialized"))
                .collect();
            if k == 1 {
                sets.extend(lists[0].iter().map(|&a| vec![a]));
            } else {
                cartesian(&lists, &mut Vec::with_capacity(k), &mut sets);
            }
        }
        for s in &mut sets {
            s.sort_unstable();
        }
        sets.sort_unstable();
        sets
    });

    let class_combos = index_combos
        .iter()
        .map(|c| {
            let mut ds: Vec<u64> = c.iter().map(|&i| entries[i]).collect();
            ds.sort_unstable();
            ds
        })
        .collect();

    Ok(GenSetFamily {
        n,
        k,
        class_combos,
        count,
        sets,
    })
}

fn cartesian(lists: &[&[u64]], current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    match lists.split_first() {
        None => out.push(current.clone()),
        Some((head, tail)) => {
            for &a in head.iter() {
                current.push(a);
                cartesian(tail, current, out);
                current.pop();
            }
        }
    }
}
