mod common;

use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use common::*;
use twochar_core::cohomology::are_cohomologous;
use twochar_core::files::{parse_cocycle, parse_two_rep, write_cocycle, write_two_rep};
use twochar_core::{euler_phi, Cocycle, CycNumber, FiniteGroup};

const LEVELS: &[u32] = &[1, 2, 3, 4, 5, 6, 8, 12];

fn cyc() -> impl Strategy<Value = CycNumber> {
    prop::sample::select(LEVELS).prop_flat_map(|level| {
        prop::collection::vec((-6i64..=6, 1i64..=4), euler_phi(level)).prop_map(move |cs| {
            let coeffs = cs.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect();
            CycNumber::from_coeffs(level, coeffs).unwrap()
        })
    })
}

/// Three numbers lifted to a common level.
fn triple() -> impl Strategy<Value = (CycNumber, CycNumber, CycNumber)> {
    (cyc(), cyc(), cyc()).prop_map(|(a, b, c)| {
        let l = [a.level(), b.level(), c.level()].into_iter().fold(1, num_integer::lcm);
        (a.embed(l).unwrap(), b.embed(l).unwrap(), c.embed(l).unwrap())
    })
}

fn small_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
    prop::sample::select(SMALL_GROUPS).prop_map(|name| Arc::new(FiniteGroup::builtin(name).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        let ab = a.checked_add(&b).unwrap();
        prop_assert_eq!(ab.checked_add(&c).unwrap(), a.checked_add(&b.checked_add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.checked_sub(&a).unwrap().is_zero());
        if !a.is_zero() {
            prop_assert!(a.checked_mul(&a.checked_inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn embedding_is_a_ring_map((a, b, _) in triple(), k in 1u32..=3) {
        let m = a.level() * k;
        let prod = a.checked_mul(&b).unwrap().embed(m).unwrap();
        prop_assert_eq!(prod, a.embed(m).unwrap().checked_mul(&b.embed(m).unwrap()).unwrap());
    }

    #[test]
    fn literal_and_json_round_trip(a in cyc()) {
        let back = CycNumber::parse_literal(&a.to_literal()).unwrap();
        prop_assert_eq!(&back, &a);
        let json = serde_json::to_string(&a).unwrap();
        let back: CycNumber = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn coboundaries_are_cohomologous_to_zero(g in small_group(), m in 1u32..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let b: Vec<u32> = (0..g.order()).map(|_| rand::Rng::gen_range(&mut r, 0..m)).collect();
        let c = Cocycle::coboundary(g.clone(), m, &b).unwrap();
        prop_assert!(c.check().is_none());
        prop_assert!(are_cohomologous(&c, &Cocycle::zero(g, m)).unwrap().is_some());
    }

    #[test]
    fn normalizing_keeps_the_class(g in small_group(), m in 1u32..=4, seed in any::<u64>()) {
        let c = random_cocycle(&mut rng(seed), &g, m);
        let n = c.normalize();
        prop_assert!(n.is_normalized());
        let b = are_cohomologous(&c, &n).unwrap();
        prop_assert!(b.is_some());
        let b = b.unwrap();
        let shifted = n.add(&Cocycle::coboundary(g, m, &b).unwrap()).unwrap();
        prop_assert_eq!(shifted, c.clone());
        let text = write_cocycle(&c);
        prop_assert_eq!(parse_cocycle(&text, "t", c.group()).unwrap(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_two_reps(name in prop::sample::select(&["C4", "C2xC2", "S3", "D4", "Q8"][..]), seed in any::<u64>()) {
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        let mut r = rng(seed);
        let factory = RepFactory::new(g.clone());
        let rho = factory.random(&mut r, 6);
        prop_assert!(rho.check().is_none());
        let chi = rho.two_character().unwrap();
        prop_assert!(chi.check_invariance().is_ok());

        // gauge changes and basis relabelling leave the 2-character alone
        let lambda: Vec<CycNumber> = (0..g.order() * rho.n()).map(|_| random_unit(&mut r)).collect();
        let moved = gauge(&rho, &lambda);
        prop_assert!(moved.check().is_none());
        prop_assert!(moved.two_character().unwrap() == chi);
        let mut perm: Vec<usize> = (0..rho.n()).collect();
        perm.reverse();
        prop_assert!(relabel(&rho, &perm).two_character().unwrap() == chi);

        // ψ(1) is the identity and ψ composes
        let e = g.identity();
        for x in g.elements() {
            let p = rho.psi(x, e);
            prop_assert!(p == twochar_core::Matrix::identity(p.rows(), &CycNumber::one(rho.level())));
        }
        prop_assert!(rho.trace_rep().check_functor().is_ok());

        // direct sums add characters
        let sum = rho.direct_sum(&moved).unwrap();
        prop_assert!(sum.two_character().unwrap() == chi.add(&chi).unwrap());

        // the file format round-trips
        let back = parse_two_rep(&write_two_rep(&rho), "t", &g).unwrap();
        prop_assert_eq!(back.coh_table(), rho.coh_table());
        prop_assert_eq!(back.unit_table(), rho.unit_table());

        let parts = rho.decompose().unwrap();
        prop_assert_eq!(parts.iter().map(|p| p.orbit.len()).sum::<usize>(), rho.n());
    }
}
