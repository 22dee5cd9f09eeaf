mod common;

use common::*;
use pitkit_core::circuit::DEFAULT_EXPAND_CAP;
use pitkit_core::ideals::{
    enumerate_paths, find_certificate, membership, membership_witness, nodes, radsp, strip_radsp_factors,
    term_membership, verify_certificate, IdealGens, DEFAULT_PATH_CAP,
};
use pitkit_core::reduce::{rank, ReductionMap};
use pitkit_core::{Circuit, Field, LinearForm, MultiplicationTerm, SparsePoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn expand(t: &MultiplicationTerm, f: &Field, n: usize) -> SparsePoly {
    t.expand(f, n, DEFAULT_EXPAND_CAP).unwrap()
}

fn term_from(f: &Field, basis: &[LinearForm], deg: usize, rng: &mut ChaCha8Rng) -> MultiplicationTerm {
    let forms = (0..deg).map(|_| form_in_span(f, basis, rng)).collect();
    MultiplicationTerm::new(f.random_nonzero(rng), forms).unwrap()
}

/// Generators built from a low-rank pool of forms, so that radsp is a proper subspace.
fn low_rank_ideal(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> (IdealGens, Vec<LinearForm>) {
    let r = rng.random_range(1..n);
    let basis: Vec<LinearForm> = (0..r).map(|_| rand_form(f, n, rng)).collect();
    let count = rng.random_range(1..=2);
    let gens = (0..count).map(|_| term_from(f, &basis, rng.random_range(1..=2), rng)).collect();
    (IdealGens::new(f, n, gens).unwrap(), basis)
}

/// A homogeneous polynomial of degree `deg` that lies in the ideal about half the time.
fn maybe_member(f: &Field, gens: &IdealGens, deg: usize, rng: &mut ChaCha8Rng) -> SparsePoly {
    let n = gens.n();
    let mut g = SparsePoly::zero(f, n);
    if rng.random_bool(0.5) {
        for gen in gens.generators() {
            if gen.degree() <= deg {
                let q = rand_term(f, n, deg - gen.degree(), rng);
                g = g.add(&expand(&q, f, n).mul(&expand(gen, f, n)));
            }
        }
    }
    if g.is_zero() || rng.random_bool(0.3) {
        g = g.add(&expand(&rand_term(f, n, deg, rng), f, n));
    }
    g
}

#[test]
fn membership_cancels_outside_forms() {
    let f = Field::prime(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut instances, mut members) = (0, 0);
    while instances < 200 {
        let n = 3;
        let (gens, _) = low_rank_ideal(&f, n, &mut rng);
        let span = radsp(&gens);
        let l = rand_form(&f, n, &mut rng);
        let mut with_l = span.clone();
        with_l.push(l.clone());
        if rank(&f, &with_l).unwrap() == span.len() {
            continue;
        }
        let g = maybe_member(&f, &gens, rng.random_range(2..=3), &mut rng);
        if g.is_zero() {
            continue;
        }
        let lg = SparsePoly::from_form(&f, &l).mul(&g);
        let a = membership(&lg, &gens).unwrap();
        assert_eq!(a, membership(&g, &gens).unwrap());
        members += usize::from(a);
        instances += 1;
    }
    assert!(members > 20 && members < 180, "both outcomes are exercised: {members}");
}

#[test]
fn membership_preserved_by_good_beta() {
    let f = f101();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut instances, mut members) = (0, 0);
    while instances < 200 {
        let (n, k) = (4, rng.random_range(2..=3));
        let r = rng.random_range(1..=k);
        let basis: Vec<LinearForm> = (0..r).map(|_| rand_form(&f, n, &mut rng)).collect();
        let gens: Vec<MultiplicationTerm> =
            (0..rng.random_range(1..=2)).map(|_| term_from(&f, &basis, rng.random_range(1..=2), &mut rng)).collect();
        let ideal = IdealGens::new(&f, n, gens.clone()).unwrap();
        let deg = 3;
        let target = if rng.random_bool(0.5) {
            let g = &gens[rng.random_range(0..gens.len())];
            let mut forms = g.forms().to_vec();
            while forms.len() < deg {
                forms.push(form_in_span(&f, &basis, &mut rng));
            }
            MultiplicationTerm::new(f.random_nonzero(&mut rng), forms).unwrap()
        } else {
            term_from(&f, &basis, deg, &mut rng)
        };
        let mut all_forms: Vec<LinearForm> = target.forms().to_vec();
        all_forms.extend(radsp(&ideal));
        let rk = rank(&f, &all_forms).unwrap();
        assert!(rk <= k);
        let psi = ReductionMap::new(&f, f.random(&mut rng), n, k).unwrap();
        let images: Vec<LinearForm> = all_forms.iter().map(|l| psi.apply_form(l).unwrap()).collect();
        if rank(&f, &images).unwrap() < rk {
            continue;
        }
        let before = term_membership(&target, &ideal).unwrap();
        let reduced_ideal = ideal.apply_reduction(&psi).unwrap();
        let after = term_membership(&psi.apply_term(&target).unwrap(), &reduced_ideal).unwrap();
        assert_eq!(before, after);
        members += usize::from(before);
        instances += 1;
    }
    assert!(members > 20 && members < 180, "both outcomes are exercised: {members}");
}

#[test]
fn membership_witnesses_recombine() {
    let f = Field::prime(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (gens, _) = low_rank_ideal(&f, 3, &mut rng);
        let target = maybe_member(&f, &gens, 3, &mut rng);
        let is_member = membership(&target, &gens).unwrap();
        match membership_witness(&target, &gens).unwrap() {
            Some(q) => {
                assert!(is_member);
                let mut back = SparsePoly::zero(&f, 3);
                for (qj, g) in q.iter().zip(gens.generators()) {
                    back = back.add(&qj.mul(&expand(g, &f, 3)));
                }
                assert_eq!(back, target);
            }
            None => assert!(!is_member),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn node_product_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in [f101(), Field::prime(3).unwrap(), Field::rational()] {
            let (gens, basis) = low_rank_ideal(&f, 3, &mut rng);
            let mut forms: Vec<LinearForm> = (0..3).map(|_| form_in_span(&f, &basis, &mut rng)).collect();
            forms.extend((0..2).map(|_| rand_form(&f, 3, &mut rng)));
            let t = MultiplicationTerm::new(f.random_nonzero(&mut rng), forms).unwrap();
            let ns = nodes(&t, &gens);
            let product =
                ns.iter().fold(SparsePoly::constant(&f, 3, t.scalar().clone()), |acc, v| acc.mul(&expand(v, &f, 3)));
            prop_assert_eq!(product, expand(&t, &f, 3));
            prop_assert_eq!(ns.iter().map(MultiplicationTerm::degree).sum::<usize>(), t.degree());
        }
    }
}

fn small_corpus(count: usize, seed: u64) -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [f101(), Field::prime(3).unwrap(), Field::rational()];
    (0..count)
        .map(|i| {
            let f = &fields[i % fields.len()];
            let (k, d, n) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=4));
            if rng.random_bool(0.5) {
                clustered_circuit(f, k, d, n, &mut rng)
            } else {
                rand_circuit(f, k, d, n, &mut rng)
            }
        })
        .collect()
}

#[test]
fn certificates_exist_and_verify() {
    let mut nonzero = 0;
    for c in small_corpus(150, 6) {
        if c.expand().unwrap().is_zero() {
            continue;
        }
        nonzero += 1;
        let cert = find_certificate(&c).unwrap();
        assert!(verify_certificate(&c, &cert).unwrap());
        assert!(cert.path.radsp_rank() <= cert.i);
        assert!(cert.i < c.k());
        let g = strip_radsp_factors(&c.terms()[cert.i], &cert.path);
        assert!(!term_membership(&g, &cert.path.ideal()).unwrap());
    }
    assert!(nonzero >= 100);
}

#[test]
fn path_rank_law() {
    for c in small_corpus(60, 9) {
        let base = IdealGens::zero(c.field(), c.n());
        for i in 0..=c.terms().len() {
            for p in enumerate_paths(&c, i, &base, DEFAULT_PATH_CAP).unwrap() {
                assert_eq!(p.len(), i);
                assert!(p.radsp_rank() <= i);
            }
        }
    }
}

/// For β outside the bad set of the certificate's forms, `Ψ_β(g) ∉ ⟨Ψ_β(p̄)⟩` and therefore
/// `Ψ_β(C) ≠ 0`; a vanishing image would force membership.
#[test]
fn good_beta_keeps_certified_circuit_nonzero() {
    let mut checked = 0;
    for c in small_corpus(90, 12) {
        if c.expand().unwrap().is_zero() {
            continue;
        }
        let f = c.field().clone();
        if !f.has_more_than(c.d() as u128 * c.n() as u128 * (c.k() * c.k()) as u128) {
            continue;
        }
        let cert = find_certificate(&c).unwrap();
        let ideal = cert.path.ideal();
        let span = radsp(&ideal);
        let t = &c.terms()[cert.i];
        let g = strip_radsp_factors(t, &cert.path);
        let family = f.first_elements(c.d() as u128 * c.n() as u128 * (c.k() * c.k()) as u128 + 1).unwrap();
        for beta in family {
            let psi = ReductionMap::new(&f, beta, c.n(), c.k()).unwrap();
            let preserved = |forms: &[LinearForm]| {
                let images: Vec<_> = forms.iter().map(|l| psi.apply_form(l).unwrap()).collect();
                rank(&f, forms).unwrap() == rank(&f, &images).unwrap()
            };
            let mut good = preserved(&span);
            for l in t.forms() {
                let mut with_l = span.clone();
                with_l.push(l.clone());
                good &= preserved(&with_l);
            }
            if !good {
                continue;
            }
            let image_zero = psi.apply_circuit(&c).unwrap().expand().unwrap().is_zero();
            let reduced = ideal.apply_reduction(&psi).unwrap();
            let g_member = term_membership(&psi.apply_term(&g).unwrap(), &reduced).unwrap();
            assert!(!image_zero || g_member);
            assert!(!image_zero, "Ψ_β(C) = 0 for a good β on a nonzero circuit");
            assert!(!g_member);
            checked += 1;
        }
    }
    assert!(checked > 0);
}
