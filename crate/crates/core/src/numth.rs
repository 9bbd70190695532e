//! Factorization and the arithmetic functions every closed form consumes.
//!
//! Factorization is plain trial division against a table of small primes,
//! which is ample for the `n <= 10^7` range the rest of the crate works in.

use std::sync::OnceLock;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Primes below this bound are tabulated once; `sqrt(10^7) < 3163`.
const SMALL_PRIME_BOUND: u64 = 3163;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let bound = SMALL_PRIME_BOUND as usize;
        let mut composite = vec![false; bound + 1];
        let mut primes = Vec::new();
        for i in 2..=bound {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= bound {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// A positive integer together with its factorization and the derived
/// quantities used throughout: the radical `n0`, `omega = r`, `phi(n)`,
/// `sigma(n0)` and `tau(n0) = 2^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FactoredInt {
    value: u64,
    factors: Vec<(u64, u32)>,
    radical: u64,
    omega: u32,
    phi: u64,
    sigma_radical: u128,
    tau_radical: u64,
}

impl FactoredInt {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The squarefree part `n0 = p1 p2 ... pr`.
    pub fn radical(&self) -> u64 {
        self.radical
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn sigma_radical(&self) -> u128 {
        self.sigma_radical
    }

    pub fn tau_radical(&self) -> u64 {
        self.tau_radical
    }

    /// `n / n0`, the factor every class size and quotient entry scales by.
    pub fn cofactor(&self) -> u64 {
        self.value / self.radical
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.value == self.radical
    }
}

impl TryFrom<i64> for FactoredInt {
    type Error = Error;

    fn try_from(n: i64) -> Result<Self> {
        if n < 0 {
            return Err(Error::Domain(format!("negative input {n}")));
        }
        factorize(n as u64)
    }
}

/// Factorizes `n >= 1`. `n = 1` yields the empty factorization.
pub fn factorize(n: u64) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::Domain("0 has no factorization".into()));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        push_power(&mut rest, p, &mut factors);
    }
    // Inputs beyond the tabulated range fall back to odd trial division.
    let mut p = SMALL_PRIME_BOUND + 2;
    while p.checked_mul(p).is_some_and(|sq| sq <= rest) {
        push_power(&mut rest, p, &mut factors);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }

    let radical: u64 = factors.iter().map(|&(p, _)| p).product();
    let phi = factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product();
    let sigma_radical = factors.iter().map(|&(p, _)| u128::from(p) + 1).product();
    let omega = factors.len() as u32;
    Ok(FactoredInt {
        value: n,
        factors,
        radical,
        omega,
        phi,
        sigma_radical,
        tau_radical: 1u64 << omega,
    })
}

fn push_power(rest: &mut u64, p: u64, factors: &mut Vec<(u64, u32)>) {
    let mut e = 0;
    while *rest % p == 0 {
        *rest /= p;
        e += 1;
    }
    if e > 0 {
        factors.push((p, e));
    }
}

fn require_positive(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("expected a positive integer".into()))
    } else {
        Ok(())
    }
}

pub fn euler_phi(n: u64) -> Result<u64> {
    factorize(n).map(|f| f.phi)
}

/// Sum of all positive divisors.
pub fn sigma(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(f.factors
        .iter()
        .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product())
}

/// All positive divisors in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    require_positive(n)?;
    let f = factorize(n)?;
    let mut out = vec![1u64];
    for &(p, e) in &f.factors {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// The divisors of a squarefree `n0` in the canonical order used to index
/// every class table and quotient matrix.
///
/// The order is built one prime at a time: the tuple for `p1 ... pr` is the
/// tuple for `p1 ... p(r-1)` followed by that same tuple multiplied by `pr`.
/// Consequently `d_i * d_(2^r + 1 - i) = n0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorTuple {
    n0: u64,
    primes: Vec<u64>,
    entries: Vec<u64>,
}

impl DivisorTuple {
    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, d: u64) -> Option<usize> {
        // Entry i has bit j set iff p_(j+1) divides it.
        if d == 0 || self.n0 % d != 0 {
            return None;
        }
        let idx = self
            .primes
            .iter()
            .enumerate()
            .filter(|&(_, &p)| d % p == 0)
            .fold(0usize, |acc, (j, _)| acc | (1 << j));
        Some(idx)
    }

    /// Binary-sequence label of `d`: character `i` is `1` iff `p_(i+1) | d`.
    pub fn binary_label(&self, d: u64) -> String {
        self.primes
            .iter()
            .map(|&p| if d % p == 0 { '1' } else { '0' })
            .collect()
    }
}

pub fn divisor_tuple(n0: u64) -> Result<DivisorTuple> {
    let f = factorize(n0)?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(n0));
    }
    Ok(tuple_from_primes(f.primes().collect()))
}

pub(crate) fn tuple_from_primes(primes: Vec<u64>) -> DivisorTuple {
    let mut entries = Vec::with_capacity(1 << primes.len());
    entries.push(1u64);
    for &p in &primes {
        let half = entries.len();
        for i in 0..half {
            entries.push(entries[i] * p);
        }
    }
    DivisorTuple {
        n0: primes.iter().product(),
        primes,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        let f = factorize(24).unwrap();
        assert_eq!(f.factors(), &[(2, 3), (3, 1)]);
        assert_eq!(f.radical(), 6);
        assert_eq!(f.phi(), 8);

        let f = factorize(32).unwrap();
        assert_eq!(f.factors(), &[(2, 5)]);
        assert_eq!(f.radical(), 2);

        let f = factorize(1).unwrap();
        assert!(f.factors().is_empty());
        assert_eq!(
            (f.radical(), f.phi(), f.omega(), f.tau_radical()),
            (1, 1, 0, 1)
        );
    }

    #[test]
    fn rejects_zero_and_negative() {
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
        assert!(matches!(FactoredInt::try_from(-6), Err(Error::Domain(_))));
        assert_eq!(FactoredInt::try_from(6).unwrap().radical(), 6);
    }

    #[test]
    fn large_prime_and_semiprime() {
        let f = factorize(9_999_991).unwrap();
        assert!(f.is_prime());
        // 3163 and 3167 are both beyond the table.
        let f = factorize(3163 * 3167).unwrap();
        assert_eq!(f.factors(), &[(3163, 1), (3167, 1)]);
        let f = factorize(u64::MAX).unwrap();
        assert_eq!(
            f.factors().iter().map(|&(p, e)| p.pow(e)).product::<u64>(),
            u64::MAX
        );
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(30).unwrap(), 8);
        // 1 + 2 + 3 + 6
        assert_eq!(sigma(6).unwrap(), [1, 2, 3, 6].iter().sum::<u64>());
        assert_eq!(sigma(12).unwrap(), 28);
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(divisors(0).is_err());
        let f = factorize(30).unwrap();
        assert_eq!((f.sigma_radical(), f.tau_radical(), f.omega()), (72, 8, 3));
    }

    #[test]
    fn canonical_tuples() {
        assert_eq!(divisor_tuple(6).unwrap().entries(), &[1, 2, 3, 6]);
        assert_eq!(
            divisor_tuple(30).unwrap().entries(),
            &[1, 2, 3, 6, 5, 10, 15, 30]
        );
        assert_eq!(divisor_tuple(7).unwrap().entries(), &[1, 7]);
        assert_eq!(divisor_tuple(1).unwrap().entries(), &[1]);
        assert_eq!(divisor_tuple(12), Err(Error::NotSquarefree(12)));
    }

    #[test]
    fn tuple_positions_and_labels() {
        let t = divisor_tuple(30).unwrap();
        for (i, &d) in t.entries().iter().enumerate() {
            assert_eq!(t.position(d), Some(i));
        }
        assert_eq!(t.position(4), None);
        assert_eq!(t.binary_label(1), "000");
        assert_eq!(t.binary_label(6), "110");
        assert_eq!(t.binary_label(15), "011");
    }

    #[test]
    fn phi_matches_coprime_count() {
        for n in 1..=2000u64 {
            let brute = (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn mirror_identity_for_squarefree_up_to_30030() {
        for n0 in 1..=30030u64 {
            let Ok(t) = divisor_tuple(n0) else { continue };
            let e = t.entries();
            let m = e.len();
            assert_eq!(e[0], 1);
            assert_eq!(e[m - 1], n0);
            for i in 0..m {
                assert_eq!(e[i] * e[m - 1 - i], n0, "n0 = {n0}");
                assert_eq!(n0 % e[i], 0);
            }
            let mut sorted = e.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), m);
            if let Some(&pr) = t.primes().last() {
                let lower = divisor_tuple(n0 / pr).unwrap();
                assert_eq!(&e[..m / 2], lower.entries());
                for i in 0..m / 2 {
                    assert_eq!(e[m / 2 + i], e[i] * pr);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn phi_is_multiplicative(m in 1u64..100_000, n in 1u64..100_000) {
            prop_assume!(gcd(m, n) == 1);
            prop_assert_eq!(euler_phi(m * n).unwrap(), euler_phi(m).unwrap() * euler_phi(n).unwrap());
        }

        #[test]
        fn factored_invariants(n in 1u64..10_000_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.factors().iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert_eq!(f.radical(), f.primes().product::<u64>());
            prop_assert_eq!(f.omega() as usize, f.factors().len());
            prop_assert_eq!(f.tau_radical(), 1u64 << f.omega());
            let rad = factorize(f.radical()).unwrap();
            prop_assert_eq!(f.phi(), f.cofactor() * rad.phi());
            prop_assert_eq!(f.sigma_radical(), u128::from(sigma(f.radical()).unwrap()));
        }
    }
}
