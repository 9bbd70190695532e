//! The relation `a ~ b  <=>  gcd(a, n0) = gcd(b, n0)` on `Z_n` and its
//! `2^r` classes `[d]`, one per divisor `d` of the radical.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numth::{self, DivisorTuple, FactoredInt};

/// One class `[d] = { a in Z_n : gcd(a, n0) = d }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    pub divisor: u64,
    pub size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<u64>>,
}

/// The full family of classes of `Z_n`, aligned with the canonical divisor
/// tuple of `n0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    n: FactoredInt,
    tuple: DivisorTuple,
    classes: Vec<DivisorClass>,
}

impl ClassPartition {
    pub fn n(&self) -> &FactoredInt {
        &self.n
    }

    pub fn tuple(&self) -> &DivisorTuple {
        &self.tuple
    }

    pub fn classes(&self) -> &[DivisorClass] {
        &self.classes
    }

    pub fn class(&self, d: u64) -> Option<&DivisorClass> {
        self.tuple.position(d).map(|i| &self.classes[i])
    }

    pub fn sizes(&self) -> impl Iterator<Item = u64> + '_ {
        self.classes.iter().map(|c| c.size)
    }

    /// `(a_1, ..., a_(2^r - 1))`, the sizes of every class except `[1]`.
    pub fn a(&self) -> Vec<u64> {
        self.classes[1..].iter().map(|c| c.size).collect()
    }

    pub fn is_materialized(&self) -> bool {
        self.classes.iter().all(|c| c.members.is_some())
    }

    /// Rows for the class table: divisor, binary label, size, and members
    /// when materialized.
    pub fn table(&self) -> Vec<ClassRow> {
        self.classes
            .iter()
            .map(|c| ClassRow {
                divisor: c.divisor,
                binary: self.tuple.binary_label(c.divisor),
                size: c.size,
                degree: class_degree(&self.n, c.divisor),
                neighbors: self
                    .tuple
                    .entries()
                    .iter()
                    .copied()
                    .filter(|&e| numth::gcd(e, c.divisor) == 1)
                    .collect(),
                members: c.members.clone(),
            })
            .collect()
    }
}

/// One row of the class table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub divisor: u64,
    pub binary: String,
    pub size: u64,
    pub degree: u64,
    /// Classes whose members are adjacent to every member of this class.
    /// `[1]` lists itself because it induces a clique.
    pub neighbors: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<u64>>,
}

// Kept here rather than in `graph` so the class table stays self-contained;
// `graph::degree_of_class` validates and then defers to this.
pub(crate) fn class_degree(n: &FactoredInt, d: u64) -> u64 {
    if d == 1 {
        n.value() - 1
    } else {
        n.value() / d * numth::euler_phi(d).expect("divisor is positive")
    }
}

/// The class of residue `a`, i.e. `gcd(a, n0)`.
pub fn class_of(a: u64, n: &FactoredInt) -> Result<u64> {
    if a >= n.value() {
        return Err(Error::ResidueOutOfRange { a, n: n.value() });
    }
    Ok(numth::gcd(a, n.radical()))
}

/// Size of `[d]`: `(n / n0) * phi(n0 / d)`. For `d = 1` this is `phi(n)`.
pub fn class_size(n: &FactoredInt, d: u64) -> Result<u64> {
    let n0 = n.radical();
    if d == 0 || n0 % d != 0 {
        return Err(Error::NotRadicalDivisor { d, radical: n0 });
    }
    Ok(n.cofactor() * numth::euler_phi(n0 / d)?)
}

pub fn build_partition(n: &FactoredInt, materialize: bool) -> Result<ClassPartition> {
    if n.value() < 2 {
        return Err(Error::Domain("the partition needs n >= 2".into()));
    }
    let tuple = numth::tuple_from_primes(n.primes().collect());
    let mut classes: Vec<DivisorClass> = tuple
        .entries()
        .iter()
        .map(|&d| DivisorClass {
            divisor: d,
            size: class_size(n, d).expect("tuple entries divide n0"),
            members: None,
        })
        .collect();

    if materialize {
        let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); classes.len()];
        for a in 0..n.value() {
            let d = class_of(a, n)?;
            let idx = tuple.position(d).expect("gcd with n0 divides n0");
            buckets[idx].push(a);
        }
        for (class, members) in classes.iter_mut().zip(buckets) {
            debug_assert_eq!(class.size as usize, members.len());
            class.members = Some(members);
        }
    }

    Ok(ClassPartition {
        n: n.clone(),
        tuple,
        classes,
    })
}

/// Materialized members of `[d]` without building the whole partition.
pub fn class_members(n: &FactoredInt, d: u64) -> Result<Vec<u64>> {
    let n0 = n.radical();
    if d == 0 || n0 % d != 0 {
        return Err(Error::NotRadicalDivisor { d, radical: n0 });
    }
    // Every member is a multiple of d.
    Ok((0..n.value())
        .step_by(d as usize)
        .filter(|&a| numth::gcd(a, n0) == d)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::factorize;
    use proptest::prelude::*;

    fn fi(n: u64) -> FactoredInt {
        factorize(n).unwrap()
    }

    #[test]
    fn class_of_examples() {
        assert_eq!(class_of(9, &fi(24)).unwrap(), 3);
        assert_eq!(class_of(0, &fi(24)).unwrap(), 6);
        assert_eq!(class_of(7, &fi(30)).unwrap(), 1);
        assert_eq!(
            class_of(30, &fi(30)),
            Err(Error::ResidueOutOfRange { a: 30, n: 30 })
        );
    }

    #[test]
    fn sizes_for_thirty() {
        let p = build_partition(&fi(30), false).unwrap();
        let divs: Vec<u64> = p.classes().iter().map(|c| c.divisor).collect();
        assert_eq!(divs, vec![1, 2, 3, 6, 5, 10, 15, 30]);
        assert_eq!(p.sizes().collect::<Vec<_>>(), vec![8, 8, 4, 4, 2, 2, 1, 1]);
        assert_eq!(p.a(), vec![8, 4, 4, 2, 2, 1, 1]);
    }

    #[test]
    fn sizes_for_thirty_two() {
        let p = build_partition(&fi(32), true).unwrap();
        assert_eq!(p.sizes().collect::<Vec<_>>(), vec![16, 16]);
        let odd: Vec<u64> = (1..32).step_by(2).collect();
        let even: Vec<u64> = (0..32).step_by(2).collect();
        assert_eq!(p.classes()[0].members.as_deref(), Some(&odd[..]));
        assert_eq!(p.classes()[1].members.as_deref(), Some(&even[..]));
    }

    #[test]
    fn members_for_twenty_four() {
        let p = build_partition(&fi(24), true).unwrap();
        let six = p.class(6).unwrap();
        assert_eq!(six.members.as_deref(), Some(&[0, 6, 12, 18][..]));
        assert_eq!(six.size, 4);
        assert_eq!(
            p.class(3).unwrap().members.as_deref(),
            Some(&[3, 9, 15, 21][..])
        );
        assert_eq!(class_members(&fi(24), 6).unwrap(), vec![0, 6, 12, 18]);
    }

    #[test]
    fn partition_needs_two() {
        assert!(build_partition(&fi(1), false).is_err());
        assert!(class_size(&fi(12), 4).is_err());
    }

    #[test]
    fn table_for_thirty() {
        let rows = build_partition(&fi(30), true).unwrap().table();
        let r = rows.iter().find(|r| r.divisor == 6).unwrap();
        assert_eq!(r.binary, "110");
        assert_eq!(r.neighbors, vec![1, 5]);
        assert_eq!(r.degree, 10);
        assert_eq!(r.members.as_deref(), Some(&[6, 12, 18, 24][..]));
        let one = &rows[0];
        assert_eq!(one.neighbors, vec![1, 2, 3, 6, 5, 10, 15, 30]);
        assert_eq!(one.degree, 29);
    }

    #[test]
    fn closed_form_sizes_match_materialized_counts() {
        for n in 2..=5000u64 {
            let f = fi(n);
            let p = build_partition(&f, true).unwrap();
            let mut total = 0;
            for c in p.classes() {
                let members = c.members.as_ref().unwrap();
                assert_eq!(c.size as usize, members.len(), "n = {n}, d = {}", c.divisor);
                assert!(members
                    .iter()
                    .all(|&a| class_of(a, &f).unwrap() == c.divisor));
                total += c.size;
            }
            assert_eq!(total, n);
            assert_eq!(p.classes()[0].size + p.a().iter().sum::<u64>(), n);
            assert_eq!(*p.a().last().unwrap(), f.cofactor());
        }
    }

    #[test]
    fn squarefree_sizes() {
        for n0 in [2u64, 6, 30, 105, 210, 2310] {
            let p = build_partition(&fi(n0), false).unwrap();
            for c in p.classes() {
                let expected = if c.divisor == 1 {
                    fi(n0).phi()
                } else {
                    numth::euler_phi(n0 / c.divisor).unwrap()
                };
                assert_eq!(c.size, expected);
            }
        }
    }

    proptest! {
        #[test]
        fn negation_preserves_class(n in 2u64..5000, a in 1u64..5000) {
            let f = fi(n);
            let a = a % n;
            let neg = (n - a) % n;
            prop_assert_eq!(class_of(a, &f).unwrap(), class_of(neg, &f).unwrap());
        }
    }
}
