//! Cross-module examples: mutation, pointing, peeling and the triangular
//! recursion checked against each other.

use qgreedy_core::bases::{check_triangular_support_conjecture, expand_in_standard_basis, greedy_to_standard_q, strictly_below, triangular_r_coeffs, Algebra, BasisTag};
use qgreedy_core::clusters::{cluster_variable, quantum_cluster_monomial, standard_monomial, ClusterCache};
use qgreedy_core::greedy::{check_divisibility_axiom, check_support_axiom, quantum_greedy};
use qgreedy_core::laurent::{quantum_number, LaurentV};
use qgreedy_core::qtorus::{expand_in_cluster, pointed_monomial, to_pointed};
use qgreedy_core::scan::{scan, Check, ScanOptions};
use qgreedy_core::{ClusterIndex, PointedElement, TorusElement};

fn lv(terms: &[(i64, i64)]) -> LaurentV {
    LaurentV::from_terms(terms.iter().copied())
}

#[test]
fn greedy_x11_for_a2_is_a_cluster_monomial_in_cluster_3() {
    let x = quantum_greedy(1, 1, 1, 1).unwrap().to_torus();
    assert_eq!(x, cluster_variable(1, 1, 4).unwrap());
    let there = expand_in_cluster(&x, ClusterIndex(3), 1, 1).unwrap();
    assert_eq!(there.num_terms(), 1);
    // X4 is the second variable of the cluster {X3, X4}.
    assert_eq!(there, TorusElement::x2());
}

#[test]
fn x3_for_2_3_is_pointed_at_1_0() {
    let x3 = cluster_variable(2, 3, 3).unwrap();
    // X3 = (v^3 X2^3 + 1) X1^{-1}, normalized.
    let by_hand = TorusElement::from_terms([((-1, 3), LaurentV::v_pow(3 - 6)), ((-1, 0), LaurentV::one())]);
    assert_eq!(x3, by_hand);
    let p = to_pointed(&x3, 2, 3).unwrap();
    assert_eq!((p.a1, p.a2), (1, 0));
    assert_eq!(p.grid.len(), 2);
    assert!(p.get(0, 0).is_one() && p.get(0, 1).is_one());
}

#[test]
fn cluster_variable_zero_for_a2() {
    let x0 = cluster_variable(1, 1, 0).unwrap();
    let by_hand = TorusElement::from_terms([((1, -1), LaurentV::v_pow(-1)), ((0, -1), LaurentV::one())]);
    assert_eq!(x0, by_hand);
    assert_eq!(cluster_variable(1, 1, 6).unwrap(), cluster_variable(1, 1, 1).unwrap());
}

#[test]
fn cluster_monomial_x3_is_pointed_at_1_1() {
    let mono = quantum_cluster_monomial(1, 1, 3, 1, 0).unwrap();
    assert_eq!(mono, cluster_variable(1, 1, 3).unwrap());
    let p = to_pointed(&mono, 1, 1).unwrap();
    assert_eq!((p.a1, p.a2), (1, 0));
    let x4 = quantum_cluster_monomial(1, 1, 3, 0, 1).unwrap();
    let p4 = to_pointed(&x4, 1, 1).unwrap();
    assert_eq!((p4.a1, p4.a2), (1, 1));
    assert_eq!(x4, quantum_greedy(1, 1, 1, 1).unwrap().to_torus());
}

#[test]
fn standard_monomials_are_pointed_at_their_index() {
    for (b, c) in [(1, 1), (2, 3), (3, 2)] {
        for a1 in -6..=6 {
            for a2 in -6..=6 {
                let m = standard_monomial(b, c, a1, a2).unwrap();
                let p = to_pointed(&m, b, c).unwrap();
                assert_eq!((p.a1, p.a2), (a1, a2), "(b,c)=({b},{c})");
                assert!(p.get(0, 0).is_one());
            }
        }
    }
}

#[test]
fn peeling_examples() {
    let e = expand_in_standard_basis(&standard_monomial(2, 3, 3, -2).unwrap(), 2, 3).unwrap();
    assert_eq!(e.coeffs.len(), 1);
    assert!(e.get((3, -2)).is_one());

    let x10 = quantum_greedy(2, 3, 1, 0).unwrap().to_torus();
    assert_eq!(x10, cluster_variable(2, 3, 3).unwrap());
    let e = expand_in_standard_basis(&x10, 2, 3).unwrap();
    assert_eq!(e.coeffs.len(), 1);
    assert!(e.get((1, 0)).is_one());
}

#[test]
fn q_table_of_worked_example_is_unitriangular_and_resums() {
    let q = greedy_to_standard_q(2, 3, 3, 4).unwrap();
    assert_eq!(q.target, BasisTag::Standard);
    assert!(q.get((3, 4)).is_one());
    for (idx, _) in q.off_diagonal() {
        assert!(strictly_below(idx, (3, 4)), "{idx:?}");
    }
    let mut resum = TorusElement::zero();
    for (&(a1, a2), coeff) in &q.coeffs {
        resum += &standard_monomial(2, 3, a1, a2).unwrap().scale(coeff);
    }
    assert_eq!(resum, quantum_greedy(2, 3, 3, 4).unwrap().to_torus());
}

#[test]
fn q_tables_of_trivial_vectors() {
    for a in [(0, 0), (-1, -1)] {
        let q = greedy_to_standard_q(2, 3, a.0, a.1).unwrap();
        assert_eq!(q.coeffs.len(), 1);
        assert!(q.get(a).is_one());
    }
}

#[test]
fn affine_r_table_is_bar_invariant() {
    let r = triangular_r_coeffs(2, 2, 1, 1).unwrap();
    assert!(r.get((1, 1)).is_one());
    for (_, coeff) in &r.coeffs {
        assert!(coeff.is_bar_invariant());
    }
}

#[test]
fn triangular_elements_examples() {
    let cache = ClusterCache::in_memory();
    let mut a11 = Algebra::new(1, 1, &cache).unwrap();
    assert_eq!(a11.triangular_element((1, 1)).unwrap(), quantum_greedy(1, 1, 1, 1).unwrap().to_torus());
    assert_eq!(a11.triangular_element((-2, -3)).unwrap(), pointed_monomial(2, 3));

    let mut a22 = Algebra::new(2, 2, &cache).unwrap();
    let (c, _, m) = a22.triangular_with_expansions((1, 1)).unwrap();
    assert!(c.is_bar_invariant());
    assert!(m.get((1, 1)).is_one());
    for (_, coeff) in m.off_diagonal() {
        assert!(coeff.in_v_positive_lattice(), "{coeff}");
    }
}

#[test]
fn affine_support_conjecture_example() {
    // 2p^2 + 4pq + 2q^2 <= 2q + 2p holds exactly on (0,0), (1,0), (0,1).
    let cmp = check_triangular_support_conjecture(2, 2, 1, 1).unwrap();
    assert!(cmp.consistent(), "{cmp:?}");
    assert!(check_triangular_support_conjecture(1, 1, 1, 1).is_err());
}

#[test]
fn divisibility_row_one_of_worked_example() {
    let x = quantum_greedy(2, 3, 3, 4).unwrap();
    // Row q = 1 has divisor (1 + t); evaluate at t = -1.
    let mut at_minus_one = LaurentV::zero();
    for p in 0..=4 {
        let term = x.get(p, 1);
        at_minus_one = if p % 2 == 0 { &at_minus_one + &term } else { &at_minus_one - &term };
    }
    assert!(at_minus_one.is_zero());
    let expected_sum = &(&quantum_number(3, 3) - &quantum_number(4, 2)) + &lv(&[(2, 1), (0, -1), (-2, 1)]);
    assert!(expected_sum.is_zero());
    assert!(check_divisibility_axiom(&x).unwrap().pass);
}

#[test]
fn perturbed_grids_fail_the_axioms() {
    let x = quantum_greedy(2, 3, 3, 4).unwrap();
    let mut grid = x.grid.clone();
    grid.insert((5, 0), LaurentV::one());
    let bad = PointedElement::new(2, 3, 3, 4, grid).unwrap();
    let v = check_support_axiom(&bad).unwrap();
    assert!(!v.pass);
    let w = v.witness.unwrap();
    assert_eq!((w.p, w.q), (Some(5), Some(0)));

    let mut grid = x.grid.clone();
    let e01 = grid[&(0, 1)].clone();
    grid.insert((0, 1), &e01 + &LaurentV::one());
    let bad = PointedElement::new(2, 3, 3, 4, grid).unwrap();
    assert!(!check_divisibility_axiom(&bad).unwrap().pass);
}

#[test]
fn scan_examples() {
    let cache = ClusterCache::in_memory();
    let opts = |b, c, bound| ScanOptions {
        b,
        c,
        bound,
        checks: vec![Check::GreedyPositivity],
        cluster_radius: None,
        threads: Some(1),
    };
    let r = scan(&opts(2, 3, 8), &cache).unwrap();
    let fails = r.failures(Check::GreedyPositivity);
    for a in [(3, 4), (3, 5), (5, 4), (5, 7), (5, 8), (7, 5)] {
        assert!(fails.contains(&a), "{a:?} should fail");
    }
    assert!(scan(&opts(3, 3, 8), &cache).unwrap().all_pass());
}
