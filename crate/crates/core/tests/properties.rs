use num_bigint::BigInt;
use proptest::prelude::*;
use qgreedy_core::greedy::quantum_greedy;
use qgreedy_core::laurent::{quantum_binomial, LaurentV};
use qgreedy_core::qtorus::{exact_divide, exact_divide_left, pointed_monomial, te_bar, te_mul, to_pointed};
use qgreedy_core::{PointedElement, TorusElement};

fn laurent() -> impl Strategy<Value = LaurentV> {
    prop::collection::vec((-6i64..=6, -5i64..=5), 0..5).prop_map(LaurentV::from_terms)
}

fn torus() -> impl Strategy<Value = TorusElement> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), laurent()), 0..4).prop_map(TorusElement::from_terms)
}

fn nonzero_torus() -> impl Strategy<Value = TorusElement> {
    torus().prop_filter("nonzero", |t| !t.is_zero())
}

// Generalized binomial n(n-1)...(n-k+1)/k!, valid for negative n.
fn binomial(n: i64, k: i64) -> BigInt {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

proptest! {
    #[test]
    fn laurent_bar_is_an_involutive_ring_map(f in laurent(), g in laurent()) {
        prop_assert_eq!(f.bar().bar(), f.clone());
        prop_assert_eq!((&f * &g).bar(), &f.bar() * &g.bar());
        prop_assert_eq!((&f + &g).bar(), &f.bar() + &g.bar());
    }

    #[test]
    fn symmetrize_inverts_nonpositive_part(g in laurent()) {
        let f = &g + &g.bar();
        prop_assert_eq!(f.nonpositive_part().symmetrize_from_nonpositive().unwrap(), f);
    }

    #[test]
    fn laurent_division_round_trip(f in laurent(), g in laurent()) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!((&f * &g).div_exact(&g), Some(f));
    }

    #[test]
    fn q_pascal(n in -6i64..=10, k in 1i64..=5, d in 1i64..=3) {
        let w = |e: i64| LaurentV::v_pow(d * e);
        let lhs = quantum_binomial(n, k, d);
        let rhs = &w(k) * &quantum_binomial(n - 1, k, d) + &w(k - n) * &quantum_binomial(n - 1, k - 1, d);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomial_at_one_is_classical(n in -8i64..=12, k in 0i64..=6, d in 1i64..=3) {
        let q = quantum_binomial(n, k, d);
        prop_assert!(q.is_bar_invariant());
        prop_assert_eq!(q.eval_at_one(), binomial(n, k));
    }

    #[test]
    fn torus_product_is_associative(f in torus(), g in torus(), h in torus()) {
        prop_assert_eq!(te_mul(&te_mul(&f, &g), &h), te_mul(&f, &te_mul(&g, &h)));
    }

    #[test]
    fn torus_bar_is_an_anti_automorphism(f in torus(), g in torus()) {
        prop_assert_eq!(te_bar(&te_bar(&f)), f.clone());
        prop_assert_eq!(te_bar(&te_mul(&f, &g)), te_mul(&te_bar(&g), &te_bar(&f)));
    }

    #[test]
    fn exact_division_round_trip(q in torus(), g in nonzero_torus()) {
        prop_assert_eq!(exact_divide(&te_mul(&q, &g), &g).unwrap(), q.clone());
        prop_assert_eq!(exact_divide_left(&te_mul(&g, &q), &g).unwrap(), q);
    }

    #[test]
    fn pointed_monomial_product(a1 in -3i64..=3, a2 in -3i64..=3, b1 in -3i64..=3, b2 in -3i64..=3) {
        let lhs = te_mul(&pointed_monomial(a1, a2), &pointed_monomial(b1, b2));
        let rhs = pointed_monomial(a1 + b1, a2 + b2).scale(&LaurentV::v_pow(a2 * b1 - a1 * b2));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(pointed_monomial(a1, a2).is_bar_invariant());
    }

    #[test]
    fn laurent_json_round_trip(f in laurent()) {
        let s = serde_json::to_string(&f).unwrap();
        let back: LaurentV = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn torus_json_round_trip(f in torus()) {
        let s = serde_json::to_string(&f).unwrap();
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Tie-line consistency is enforced inside the recurrence; any Err here
    // would be an InternalInconsistency.
    #[test]
    fn greedy_is_well_defined_pointed_and_bar_invariant(
        b in 1i64..=4, c in 1i64..=4, a1 in -3i64..=6, a2 in -3i64..=6,
    ) {
        let x = quantum_greedy(b, c, a1, a2).unwrap();
        let t = x.to_torus();
        prop_assert!(t.is_bar_invariant());
        let back = to_pointed(&t, b, c).unwrap();
        prop_assert_eq!(&back, &x);
        let s = serde_json::to_string(&x).unwrap();
        let parsed: PointedElement = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(serde_json::to_string(&parsed).unwrap(), s);
    }
}
