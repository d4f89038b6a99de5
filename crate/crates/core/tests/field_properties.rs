use proptest::prelude::*;

use ternary_steiner::gf::{Field, SquareClass};

fn field(n: usize) -> Field {
    Field::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(n in prop::sample::select(vec![3usize, 5, 7]), a in 0u32..2187, b in 0u32..2187, c in 0u32..2187) {
        let f = field(n);
        let q = f.q();
        let (a, b, c) = (f.from_index(a % q), f.from_index(b % q), f.from_index(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.add(f.add(a, a), a), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.div(f.mul(a, b), a).unwrap(), b);
        } else {
            prop_assert!(f.inv(a).is_none());
        }
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant(n in prop::sample::select(vec![3usize, 5, 7]), a in 0u32..2187, b in 0u32..2187, c in 0u8..3) {
        let f = field(n);
        let q = f.q();
        let (a, b) = (f.from_index(a % q), f.from_index(b % q));
        let lhs = f.trace(f.add(f.mul(f.from_trit(c), a), b));
        let rhs = (c * f.trace(a) + f.trace(b)) % 3;
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.trace(f.pow(a, 3)), f.trace(a));
        prop_assert_eq!(f.trace(a), f.trace_by_definition(a));
    }

    #[test]
    fn power_laws(a in 1u32..243, e1 in 0u64..1000, e2 in 0u64..1000) {
        let f = field(5);
        let a = f.from_index(a);
        prop_assert_eq!(f.mul(f.pow(a, e1), f.pow(a, e2)), f.pow(a, e1 + e2));
        prop_assert_eq!(f.pow(f.pow(a, e1), e2), f.pow(a, e1 * e2));
        prop_assert_eq!(f.pow(a, f.order() as u64), f.one());
    }

    #[test]
    fn square_classes_multiply(a in 1u32..2187, b in 1u32..2187) {
        let f = field(7);
        let (a, b) = (f.from_index(a), f.from_index(b));
        prop_assert_eq!(f.square_class(f.mul(a, b)), f.square_class(a).mul(f.square_class(b)));
        // Euler's criterion
        let euler = f.pow(a, f.order() as u64 / 2);
        let expect = if f.square_class(a) == SquareClass::Square { f.one() } else { f.neg(f.one()) };
        prop_assert_eq!(euler, expect);
    }

    #[test]
    fn coefficient_round_trip(idx in 0u32..2187) {
        let f = field(7);
        let x = f.from_index(idx);
        prop_assert_eq!(f.from_coeffs(&f.coeffs(x)), x);
        prop_assert_eq!(x.index(), idx);
    }
}

#[test]
fn decimation_exponents_for_every_supported_odd_degree() {
    for n in (3..=13).step_by(2) {
        let f = field(n);
        let order = f.order() as u128;
        assert_eq!(f.d(), 2 * 3u64.pow(f.m() as u32) + 1);
        assert_eq!((f.d() as u128 * f.d0() as u128) % order, order - 1, "n = {n}");
    }
}

#[test]
fn alpha_generates_the_multiplicative_group() {
    for n in [3, 5, 7] {
        let f = field(n);
        let seen: std::collections::HashSet<_> = f.nonzero_elements().collect();
        assert_eq!(seen.len() as u32, f.order());
        assert_eq!(f.alpha_pow(f.order() as u64), f.one());
    }
}
