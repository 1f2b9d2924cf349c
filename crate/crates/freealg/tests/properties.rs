//! Property suites for the algebraic laws the core types promise.

use proptest::prelude::*;

use freealg::field::{Field, PrimeField, Rationals};
use freealg::parse::parse_poly;
use freealg::poly::{Degree, Polynomial};
use freealg::series::GroupWord;
use freealg::word::Word;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 0..=max_len).prop_map(Word::from_letters)
}

fn qpoly_strategy() -> impl Strategy<Value = Polynomial<Rationals>> {
    prop::collection::vec((word_strategy(4), -4i64..=4), 0..4).prop_map(|terms| {
        let mut p = Polynomial::zero(Rationals, 2);
        for (w, c) in terms {
            p.add_term(w, Rationals.from_integer(c));
        }
        p
    })
}

fn f5poly_strategy() -> impl Strategy<Value = Polynomial<PrimeField>> {
    let f5 = PrimeField::new(5).unwrap();
    prop::collection::vec((word_strategy(4), 0u64..5), 0..4).prop_map(move |terms| {
        let mut p = Polynomial::zero(f5, 2);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    })
}

fn group_word_strategy() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..=8)
        .prop_map(GroupWord::from_codes)
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in qpoly_strategy(), b in qpoly_strategy(), c in qpoly_strategy()) {
        let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_distributes(a in f5poly_strategy(), b in f5poly_strategy(), c in f5poly_strategy()) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_is_additive_for_nonzero(a in qpoly_strategy(), b in qpoly_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let prod = a.mul(&b).unwrap();
        prop_assert_eq!(prod.degree(), a.degree().plus(b.degree()));
    }

    #[test]
    fn weighted_degree_is_additive_for_nonzero(a in qpoly_strategy(), b in qpoly_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let weights = [2i64, 3];
        let wa = a.weighted_degree(&weights).unwrap().finite().unwrap();
        let wb = b.weighted_degree(&weights).unwrap().finite().unwrap();
        let wab = a.mul(&b).unwrap().weighted_degree(&weights).unwrap().finite().unwrap();
        prop_assert_eq!(wab, wa + wb);
    }

    #[test]
    fn weighted_degree_collapses_to_degree_at_unit_weights(a in qpoly_strategy()) {
        prop_assert_eq!(a.weighted_degree(&[1, 1]).unwrap(), a.degree());
    }

    #[test]
    fn commutator_laws(a in f5poly_strategy(), b in f5poly_strategy()) {
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert_eq!(ab.clone(), ba.neg());
        prop_assert!(a.commutator(&a).unwrap().is_zero());
        prop_assert!(ab.degree() <= a.degree().plus(b.degree()));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(
        a in qpoly_strategy(),
        b in qpoly_strategy(),
        f in qpoly_strategy(),
        g in qpoly_strategy(),
    ) {
        let images = [f, g];
        let add_lhs = a.add(&b).unwrap().substitute(&images).unwrap();
        let add_rhs = a.substitute(&images).unwrap().add(&b.substitute(&images).unwrap()).unwrap();
        prop_assert_eq!(add_lhs, add_rhs);
        let mul_lhs = a.mul(&b).unwrap().substitute(&images).unwrap();
        let mul_rhs = a.substitute(&images).unwrap().mul(&b.substitute(&images).unwrap()).unwrap();
        prop_assert_eq!(mul_lhs, mul_rhs);
    }

    #[test]
    fn substitution_at_commutator_is_commutator(f in qpoly_strategy(), g in qpoly_strategy()) {
        let x = Polynomial::var(Rationals, 2, 0);
        let y = Polynomial::var(Rationals, 2, 1);
        let comm = x.commutator(&y).unwrap();
        let images = [f.clone(), g.clone()];
        prop_assert_eq!(comm.substitute(&images).unwrap(), f.commutator(&g).unwrap());
    }

    #[test]
    fn print_parse_round_trip(p in qpoly_strategy()) {
        let reparsed = parse_poly(&p.to_string(), &Rationals, 2).unwrap();
        prop_assert_eq!(reparsed, p);
    }

    #[test]
    fn print_parse_round_trip_prime_field(p in f5poly_strategy()) {
        let f5 = PrimeField::new(5).unwrap();
        let reparsed = parse_poly(&p.to_string(), &f5, 2).unwrap();
        prop_assert_eq!(reparsed, p);
    }

    #[test]
    fn leading_form_is_homogeneous_and_multiplicative(a in qpoly_strategy(), b in qpoly_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let lf = a.leading_form().unwrap();
        for (w, _) in lf.poly().terms() {
            prop_assert_eq!(w.len(), lf.degree());
        }
        let prod_lf = a.mul(&b).unwrap().leading_form().unwrap();
        let piece = lf.poly().mul(b.leading_form().unwrap().poly()).unwrap();
        prop_assert_eq!(prod_lf.into_poly(), piece);
    }

    #[test]
    fn group_multiplication_degree_additive(a in group_word_strategy(), b in group_word_strategy()) {
        prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
    }

    #[test]
    fn group_multiplication_associative(
        a in group_word_strategy(),
        b in group_word_strategy(),
        c in group_word_strategy(),
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn group_inverse_cancels(a in group_word_strategy()) {
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert!(a.inverse().mul(&a).is_empty());
    }

    #[test]
    fn zero_degree_sits_below_everything(a in qpoly_strategy()) {
        prop_assert!(Degree::NegInf <= a.degree());
    }
}
