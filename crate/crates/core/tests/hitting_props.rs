mod common;

use common::*;
use pitkit_core::hitting::{
    circuit_blackbox_test, grid_zero_count, hitting_set, hitting_set_size, lift_field, schwartz_zippel_test,
    whitebox_test, CircuitOracle, HittingSet, Oracle,
};
use pitkit_core::reduce::ReductionMap;
use pitkit_core::{Field, FieldElement, MultiplicationTerm};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn size_law() {
    let f = Field::rational();
    for (k, d, n, want) in [(1, 1, 1, 4u128), (2, 3, 4, 784), (3, 4, 5, 22_625), (2, 2, 3, 225)] {
        assert_eq!(hitting_set(k, d, n, &f).unwrap().count() as u128, want);
        assert_eq!(hitting_set_size(k, d, n).unwrap(), want);
    }
}

#[test]
fn streams_are_deterministic() {
    let f = Field::prime(101).unwrap();
    let (g, _) = lift_field(&f, 2, 3, 4).unwrap();
    let a: Vec<_> = hitting_set(2, 3, 4, &g).unwrap().collect();
    let b: Vec<_> = hitting_set(2, 3, 4, &g).unwrap().collect();
    assert_eq!(a, b);
}

#[test]
fn factorization_identity_per_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = Field::prime(101).unwrap();
    let c = rand_circuit(&f, 2, 2, 3, &mut rng);
    let mut maps: Vec<Option<(FieldElement, pitkit_core::Circuit)>> = Vec::new();
    maps.resize(25, None);
    for p in hitting_set(2, 2, 3, &f).unwrap() {
        let b = (p.index / 9) as usize;
        if maps[b].is_none() {
            let psi = ReductionMap::new(&f, p.beta.clone(), 3, 2).unwrap();
            maps[b] = Some((p.beta.clone(), psi.apply_circuit(&c).unwrap()));
        }
        let (_, image) = maps[b].as_ref().unwrap();
        assert_eq!(c.evaluate(&p.delta).unwrap(), image.evaluate(&p.gamma).unwrap());
    }
}

#[test]
fn y1y2_zero_fraction() {
    let f = Field::prime(101).unwrap();
    let g = f.clone();
    let oracle = move |p: &[FieldElement]| Ok(g.mul(&p[0], &p[1]));
    let (zeros, total) = grid_zero_count(&oracle, 2, &f.first_elements(3).unwrap()).unwrap();
    assert_eq!((zeros, total), (5, 9));
    assert!(zeros * 3 <= 2 * total);
}

#[test]
fn schwartz_zippel_bound_on_random_polynomials() {
    let f = Field::prime(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut tested = 0;
    while tested < 50 {
        let (k, d, n) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
        let c = clustered_circuit(&f, k, d, n, &mut rng);
        if c.expand().unwrap().is_zero() {
            continue;
        }
        let t = f.first_elements(rng.random_range(d as u128 + 1..=d as u128 + 3)).unwrap();
        let oracle = CircuitOracle::new(c);
        let (zeros, total) = grid_zero_count(&oracle, n, &t).unwrap();
        assert!(zeros * t.len() as u128 <= d as u128 * total);
        tested += 1;
    }
}

#[test]
fn random_tester_reproducible() {
    let f = Field::prime(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let c = rand_circuit(&f, 2, 3, 3, &mut rng);
    let oracle = CircuitOracle::new(c);
    let a = schwartz_zippel_test(&oracle, &f, 3, 3, 6, 40, 99).unwrap();
    assert!(a.is_nonzero());
    assert_eq!(a, schwartz_zippel_test(&oracle, &f, 3, 3, 6, 40, 99).unwrap());
    let w = a.witness().unwrap();
    assert_eq!(oracle.evaluate(&w.point).unwrap(), w.value);
}

#[test]
fn beta_slices_partition_the_stream() {
    let f = Field::prime(101).unwrap();
    let all: Vec<_> = hitting_set(2, 2, 2, &f).unwrap().collect();
    let mut joined = Vec::new();
    for r in [0..5u128, 5..6, 6..17] {
        joined.extend(HittingSet::with_beta_range(2, 2, 2, &f, r).unwrap());
    }
    assert_eq!(all, joined);
}

fn f2_family(scalar_field: &Field) -> pitkit_core::Circuit {
    let x = form(scalar_field, &[1, 0]);
    let y = form(scalar_field, &[0, 1]);
    let xy = form(scalar_field, &[1, 1]);
    let one = scalar_field.one();
    let terms = vec![
        MultiplicationTerm::new(one.clone(), vec![x.clone(), y]).unwrap(),
        MultiplicationTerm::new(one.clone(), vec![x.clone(), xy]).unwrap(),
        MultiplicationTerm::new(one, vec![x.clone(), x]).unwrap(),
    ];
    pitkit_core::Circuit::new(scalar_field, 2, 2, 3, terms).unwrap()
}

#[test]
fn f2_identity_in_extensions() {
    for f in [Field::prime(2).unwrap(), Field::extension(2, 3, None).unwrap()] {
        let c = f2_family(&f);
        assert!(c.expand().unwrap().is_zero());
        assert!(circuit_blackbox_test(&c, 1).unwrap().is_zero());
        assert!(whitebox_test(&c).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn verdicts_agree_with_expansion(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fields = [Field::prime(101).unwrap(), Field::extension(2, 2, None).unwrap(), Field::rational()];
        let f = &fields[(seed % 3) as usize];
        let (k, d, n) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
        let c = if rng.random_bool(0.5) { clustered_circuit(f, k, d, n, &mut rng) } else { rand_circuit(f, k, d, n, &mut rng) };
        let zero = c.expand().unwrap().is_zero();
        let black = circuit_blackbox_test(&c, 1).unwrap();
        let white = whitebox_test(&c).unwrap();
        prop_assert_eq!(black.is_zero(), zero);
        prop_assert_eq!(&white, &black);
        if let Some(w) = black.witness() {
            let (big, e) = lift_field(c.field(), k, d, n).unwrap();
            prop_assert_eq!(&big, &black.field);
            let lifted = c.embed(&e).unwrap();
            prop_assert_eq!(lifted.evaluate(&w.point.delta).unwrap(), w.value.clone());
            prop_assert_eq!(naive_eval(&lifted, &w.point.delta), w.value.clone());
        }
    }
}
