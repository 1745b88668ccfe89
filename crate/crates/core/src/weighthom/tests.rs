use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dgcore::{build_dgchain_instance, ChainObject};
use crate::samples::{random_additive_twisted, random_chain_category, random_chain_twisted, random_twisted_morphism};
use crate::twisted::{
    cone, cone_triangle, geq_triangle, leq_triangle, shift, totalize, truncation, truncation_triangle,
};

const RANKS: [usize; 3] = [1, 2, 3];

fn additive() -> (NegDgCategory, AdditiveFunctor) {
    (NegDgCategory::additive_free_modules(&RANKS), matrix_functor(&RANKS, Coefficient::Integers))
}

#[test]
fn matrix_functor_is_valid() {
    let (j, g) = additive();
    assert!(g.validate(&j).is_valid());
    let g5 = matrix_functor(&RANKS, Coefficient::modulo(5).unwrap());
    assert!(g5.validate(&j).is_valid());
}

#[test]
fn one_slot_complex_lives_in_degree_zero() {
    let (_, g) = additive();
    let p = TwistedComplex::single(1, 0);
    for n in -3..=3 {
        let want = if n == 0 { FgAbGroup::free(2) } else { FgAbGroup::zero() };
        assert_eq!(evaluate(&g, &p, n).unwrap(), want);
    }
}

#[test]
fn cone_of_identity_is_acyclic() {
    let (j, g) = additive();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let p = random_additive_twisted(&mut rng, &RANKS, 4, 6);
        let c = cone(&j, &TwistedMorphism::identity(&j, &p)).unwrap().cone;
        for n in -4..=5 {
            assert!(evaluate(&g, &c, n).unwrap().is_zero());
        }
    }
}

#[test]
fn h0_matches_totalization_on_small_instance() {
    // Z/3 in slot 0 mapping by 1 to Z/3 in slot 1, then the slot-0 object alone.
    let three = ChainObject::new(-1, vec![1, 1], vec![IntMatrix::from_i64(&[&[3]])]).unwrap();
    let cc = build_dgchain_instance(vec!["T".into()], vec![three]).unwrap();
    let g = h0_functor(&cc);
    assert!(g.validate(&cc.category).is_valid());
    assert_eq!(g.object(0).group(), FgAbGroup::cyclic(3));
    let p = TwistedComplex::single(0, 0);
    let tot = totalize(&cc, &p).unwrap();
    assert_eq!(evaluate(&g, &p, 0).unwrap(), tot.homology(0));
    assert_eq!(evaluate(&g, &p, 0).unwrap(), FgAbGroup::cyclic(3));
}

#[test]
fn identity_induces_identity() {
    let (j, g) = additive();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = random_additive_twisted(&mut rng, &RANKS, 4, 6);
    for n in -3..=3 {
        let m = induced_map(&j, &g, &TwistedMorphism::identity(&j, &p), n).unwrap();
        let id =
            SubquotientMap::new(m.source.clone(), m.target.clone(), IntMatrix::identity(m.source.ambient())).unwrap();
        assert!(m.eq_mod(&id));
    }
}

#[test]
fn inclusion_of_upper_truncation_is_onto_in_its_first_degree() {
    let (j, g) = additive();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let p = random_additive_twisted(&mut rng, &RANKS, 5, 6);
        let t = truncation(&j, &p, 0);
        assert!(induced_map(&j, &g, &t.iota, 0).unwrap().is_surjective());
    }
}

#[test]
fn functoriality_on_random_maps() {
    let (j, g) = additive();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let p = random_additive_twisted(&mut rng, &RANKS, 3, 5);
        let pp = random_additive_twisted(&mut rng, &RANKS, 3, 5);
        let f = random_twisted_morphism(&mut rng, &j, &p, &pp);
        let h = random_twisted_morphism(&mut rng, &j, &pp, &p);
        let hf = TwistedMorphism::compose(&j, &h, &f).unwrap();
        for n in -3..=3 {
            let lhs = induced_map(&j, &g, &hf, n).unwrap();
            let rhs = induced_map(&j, &g, &f, n).unwrap().then(&induced_map(&j, &g, &h, n).unwrap());
            assert!(lhs.eq_mod(&rhs));
        }
    }
}

#[test]
fn non_closed_map_is_rejected() {
    let (j, g) = additive();
    let p = TwistedComplex::single(0, 0);
    let f = TwistedMorphism::identity(&j, &p);
    let bad = TwistedMorphism::zero(-1, &p, &p);
    assert!(induced_map(&j, &g, &f, 0).is_ok());
    assert!(matches!(induced_map(&j, &g, &bad, 0), Err(WeightError::NotATwistedMorphism(_))));
}

#[test]
fn gamma_a_single_component() {
    let j = NegDgCategory::additive_free_modules(&[1]);
    let g = gamma_a(&j, &[1], Coefficient::Integers, vec![vec![IntMatrix::identity(1)]]).unwrap();
    assert_eq!(g.object(0).group(), FgAbGroup::free(1));
    let bad = gamma_a(&j, &[1], Coefficient::Integers, vec![vec![IntMatrix::from_i64(&[&[2]])]]);
    match bad {
        Err(WeightError::FunctorInvalid(rep)) => assert!(rep.has(ViolationKind::Functor)),
        other => panic!("expected an invalid functor, got {other:?}"),
    }
}

#[test]
fn triangles_give_long_exact_sequences() {
    let (j, g) = additive();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let p = random_additive_twisted(&mut rng, &RANKS, 5, 6);
        for n in -2..=3 {
            for t in [truncation_triangle(&j, &p, n), geq_triangle(&j, &p, n), leq_triangle(&j, &p, n)] {
                assert!(t.is_well_formed(&j));
                let rep = long_exact_check(&j, &g, &t, None).unwrap();
                assert!(rep.is_exact(), "{:?}", rep.failures);
            }
        }
        let pp = random_additive_twisted(&mut rng, &RANKS, 5, 6);
        let f = random_twisted_morphism(&mut rng, &j, &p, &pp);
        let rep = long_exact_check(&j, &g, &cone_triangle(&j, &f).unwrap(), None).unwrap();
        assert!(rep.is_exact(), "{:?}", rep.failures);
    }
}

#[test]
fn chain_instances_agree_with_totalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..5 {
        let cc = random_chain_category(&mut rng, 3, true);
        let g = h0_functor(&cc);
        let p = random_chain_twisted(&mut rng, &cc, 5, 6);
        for n in -4..=5 {
            let tot = totalize(&cc, &shift(&p, n)).unwrap();
            assert_eq!(evaluate(&g, &p, n).unwrap(), tot.homology(0), "n = {n}");
        }
    }
}
