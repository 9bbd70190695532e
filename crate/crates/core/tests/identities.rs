use proptest::prelude::*;
use zn::gensets::enumerate_gk;
use zn::graph::{compute_props, degree_of_class, edge_count, gen_probability};
use zn::linalg::{self, IntPoly};
use zn::numth::factorize;
use zn::oracle::{self, DenseKind};
use zn::partition::build_partition;
use zn::spectra::{self, QuotientKind, SpectrumMode};

fn distinct(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-6);
    v
}

fn dense_laplacian(n: u64) -> Vec<f64> {
    oracle::dense_eigenvalues(&oracle::dense_matrix(n, DenseKind::Laplacian).unwrap()).unwrap()
}

#[test]
fn known_laplacian_values_with_two_or_more_primes() {
    for n in (2..=3000u64).filter(|&n| factorize(n).unwrap().omega() >= 2) {
        let f = factorize(n).unwrap();
        let q = spectra::build_quotients(&f).unwrap();
        let values = spectra::lq_values(&q).unwrap();
        for t in [0.0, f.phi() as f64, n as f64] {
            assert!(
                values.iter().any(|v| (v - t).abs() <= 1e-9),
                "n = {n}, missing {t}"
            );
        }
    }
}

#[test]
fn prime_power_laplacian_quotient_is_zero_and_n() {
    for n in [2u64, 4, 8, 9, 25, 27, 49, 125, 1024] {
        let q = spectra::build_quotients(&factorize(n).unwrap()).unwrap();
        let v = spectra::lq_values(&q).unwrap();
        assert!(
            (v[0] - n as f64).abs() < 1e-9 && v[1].abs() < 1e-9,
            "n = {n}: {v:?}"
        );
    }
}

#[test]
fn scaled_distinct_laplacian_values_are_contained() {
    // Scaling the radical's distinct values lands inside the distinct values
    // of E_n, though E_n may have more (for example deg([1]) = n - 1).
    for n in 2..=120u64 {
        let f = factorize(n).unwrap();
        if f.is_squarefree() {
            continue;
        }
        let ours = distinct(&dense_laplacian(n));
        let c = f.cofactor() as f64;
        for v in distinct(&dense_laplacian(f.radical())) {
            assert!(
                ours.iter().any(|w| (w - c * v).abs() <= 1e-6),
                "n = {n}, value {}",
                c * v
            );
        }
    }
}

#[test]
fn four_breaks_literal_distinct_scaling() {
    // E_4: Laplacian {4, 4, 2, 0}; E_2: {2, 0}, scaled {4, 0}.
    let rounded = |v: Vec<f64>| -> Vec<f64> { v.iter().map(|x| x.round()).collect() };
    assert_eq!(rounded(distinct(&dense_laplacian(4))), vec![4.0, 2.0, 0.0]);
    let scaled = rounded(
        distinct(&dense_laplacian(2))
            .iter()
            .map(|v| 2.0 * v)
            .collect(),
    );
    assert_eq!(scaled, vec![4.0, 0.0]);
}

#[test]
fn quartic_pattern_for_two_primes() {
    for n in [6u64, 10, 12, 15, 18, 20, 36, 45, 100, 147] {
        let f = factorize(n).unwrap();
        if f.omega() != 2 {
            continue;
        }
        let (phi, n0) = (f.phi() as i64, f.radical() as i64);
        let c = f.cofactor() as i64;
        let phi0 = zn::numth::euler_phi(n0 as u64).unwrap() as i64;
        let want = IntPoly::from_descending(&[
            1,
            -(phi - 1),
            -c * phi * (n0 - phi0 + 1),
            -c * phi * (phi + 1),
            (c * phi) * (c * phi),
        ]);
        let got = spectra::char_poly_quotient(&f, QuotientKind::Adjacency).unwrap();
        assert_eq!(got, want, "n = {n}");
    }
}

#[test]
fn full_adjacency_char_poly_vanishes_on_dense_spectrum() {
    for n in [6u64, 8, 12, 15] {
        let f = factorize(n).unwrap();
        let poly = spectra::adjacency_char_poly(&f).unwrap();
        assert_eq!(poly.degree() as u64, n);
        let dense =
            oracle::dense_eigenvalues(&oracle::dense_matrix(n, DenseKind::Adjacency).unwrap())
                .unwrap();
        for x in dense {
            assert!(
                poly.eval(x).abs() <= 1e-6 * poly.eval_scale(x),
                "n = {n}, x = {x}"
            );
        }
    }
}

#[test]
fn full_mode_residuals_are_small() {
    for n in [12u64, 30, 64, 90] {
        let f = factorize(n).unwrap();
        let mode = SpectrumMode::Full { dense_limit: 5000 };
        assert!(
            spectra::adjacency_spectrum(&f, mode)
                .unwrap()
                .residual
                .unwrap()
                < 1e-8
        );
        assert!(
            spectra::laplacian_spectrum(&f, mode)
                .unwrap()
                .residual
                .unwrap()
                < 1e-8
        );
    }
}

#[test]
fn brute_props_agree_with_closed_forms() {
    for n in 2..=36u64 {
        let f = factorize(n).unwrap();
        let closed = compute_props(&f).unwrap();
        let brute = oracle::brute_props(n).unwrap();
        assert_eq!(brute.diameter, closed.diameter, "n = {n}");
        assert_eq!(brute.is_regular, closed.is_regular);
        assert_eq!(brute.is_bipartite, closed.is_bipartite);
        assert_eq!(brute.is_eulerian, closed.is_eulerian);
        assert_eq!(brute.is_planar, closed.is_planar);
        assert_eq!(brute.clique_number, closed.clique_number);
        assert_eq!(brute.chromatic_number, closed.chromatic_number);
        assert_eq!(brute.independence_number, closed.independence_number);
        assert_eq!(brute.edge_count, closed.edge_count);
        assert_eq!(
            brute.hamiltonian_cycle.is_some(),
            closed.hamiltonian_cycle.is_some()
        );
    }
}

#[test]
fn generating_pair_counts() {
    // Ordered generating pairs of distinct residues equal twice the edges.
    for n in 2..=200u64 {
        let f = factorize(n).unwrap();
        let fam = enumerate_gk(&f, 2, false).unwrap();
        let units = f.phi();
        let pairs_with_unit = units * (n - units) + units * (units - 1) / 2;
        let e = edge_count(&f);
        assert_eq!(
            e,
            u128::from(pairs_with_unit) + u128::try_from(&fam.count).unwrap(),
            "n = {n}"
        );
    }
    assert_eq!(
        gen_probability(&factorize(30).unwrap())
            .unwrap()
            .to_string(),
        "284/435"
    );
}

proptest! {
    #[test]
    fn degree_sum_is_twice_edges(n in 2u64..2_000_000) {
        let f = factorize(n).unwrap();
        let p = build_partition(&f, false).unwrap();
        let sum: u128 = p
            .classes()
            .iter()
            .map(|c| u128::from(c.size) * u128::from(degree_of_class(c.divisor, &f).unwrap()))
            .sum();
        prop_assert_eq!(sum, 2 * edge_count(&f));
    }

    #[test]
    fn weyl_sandwich(n in 2u64..20_000) {
        let f = factorize(n).unwrap();
        for b in spectra::weyl_bounds_adjacency(&f).unwrap() {
            prop_assert!(b.contains(1e-9 * n as f64), "{:?}", b);
        }
        for b in spectra::weyl_bounds_laplacian(&f).unwrap() {
            prop_assert!(b.contains(1e-9 * n as f64), "{:?}", b);
        }
    }

    #[test]
    fn qtilde_closed_form_matches_eigensolve(n in 2u64..100_000) {
        let f = factorize(n).unwrap();
        let q = spectra::build_quotients(&f).unwrap();
        let numeric = linalg::sym_eigenvalues(&q.qtilde().to_sym(), 1e-14).unwrap().values;
        let closed = spectra::qtilde_values(&f).unwrap();
        prop_assert!(linalg::multiset_close(&numeric, &closed, 1e-8 * n as f64).unwrap());
    }

    #[test]
    fn class_sizes_sum_to_n(n in 2u64..10_000_000) {
        let f = factorize(n).unwrap();
        let p = build_partition(&f, false).unwrap();
        prop_assert_eq!(p.sizes().sum::<u64>(), n);
        prop_assert_eq!(p.classes().len() as u64, 1u64 << f.omega());
    }
}
