use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dgcore::{build_dgchain_instance, ChainCategory, ChainObject};
use crate::exactlinalg::IntMatrix;
use crate::samples::{additive_block, random_additive_twisted, random_chain_category, random_chain_twisted};

fn z(v: i64) -> Int {
    Int::from(v)
}

/// `Z^1 -(2 1)^T-> Z^2 -(1 -2)-> Z^1` on slots 0, 1, 2 in the additive encoding.
fn additive_complex(second: &[&[i64]]) -> (NegDgCategory, TwistedComplex) {
    let ranks = [1, 2];
    let j = NegDgCategory::additive_free_modules(&ranks);
    let slots = BTreeMap::from([(0, vec![0]), (1, vec![1]), (2, vec![0])]);
    let q = BTreeMap::from([
        ((0, 1), additive_block(&ranks, &[0], &[1], &IntMatrix::from_i64(&[&[2], &[1]]))),
        ((1, 2), additive_block(&ranks, &[1], &[0], &IntMatrix::from_i64(second))),
    ]);
    let p = TwistedComplex::new(&j, slots, q).unwrap();
    (j, p)
}

#[test]
fn ordinary_complex_is_twisted() {
    let (j, p) = additive_complex(&[&[1, -2]]);
    assert!(validate_twisted(&j, &p).is_valid());
}

#[test]
fn non_composing_differentials_fail_at_distance_two() {
    let (j, p) = additive_complex(&[&[1, 1]]);
    let rep = validate_twisted(&j, &p);
    assert_eq!(rep.violations.len(), 1);
    assert_eq!(rep.violations[0].kind, ViolationKind::MaurerCartan);
    assert!(rep.violations[0].message.contains("(0, 2)"));
}

/// `Z --1--> Z --2--> (Z -2-> Z)`: the composite is null-homotopic, so a
/// degree `-1` component `q_02` repairs the square.
fn correction_instance() -> (ChainCategory, BTreeMap<i64, Vec<ObjId>>, BlockMap, BlockMap) {
    let two = ChainObject::new(-1, vec![1, 1], vec![IntMatrix::from_i64(&[&[2]])]).unwrap();
    let cc = build_dgchain_instance(vec!["Z".into(), "C".into()], vec![ChainObject::concentrated(1), two]).unwrap();
    let j = &cc.category;
    let slots = BTreeMap::from([(0, vec![0]), (1, vec![0]), (2, vec![1])]);
    let q01 = BlockMap::from_element(&j.identity(0));
    let deg0 = |g: &BTreeMap<i64, IntMatrix>| g.get(&0).cloned();
    let gen = j.generator(0, 1, 0, 0);
    // The generator of chain maps Z -> C is +-1 in degree 0; scale it to 2.
    let unit = deg0(&cc.graded(&gen)).unwrap().get(0, 0).clone();
    let q12 = BlockMap::from_element(&gen.scale(&(z(2) * &unit)));
    (cc, slots, q01, q12)
}

#[test]
fn degree_minus_one_component_corrects_square() {
    let (cc, slots, q01, q12) = correction_instance();
    let j = &cc.category;
    let q = BTreeMap::from([((0, 1), q01.clone()), ((1, 2), q12.clone())]);
    let bare = TwistedComplex::new(j, slots.clone(), q).unwrap();
    let rep = validate_twisted(j, &bare);
    assert!(rep.has(ViolationKind::MaurerCartan));

    // d q_02 = -q_12 q_01 solved by linear algebra.
    let rhs = j.compose(&q12.entry(0, 0), &q01.entry(0, 0)).unwrap().neg();
    let d = j.hom(0, 1).differential(-1);
    let sol = crate::exactlinalg::solve_integer(&d, &rhs.coords).expect("the composite is null-homotopic");
    assert_eq!(sol.len(), 1);
    assert_eq!(sol[0].clone() * &sol[0], z(1));
    let q02 = BlockMap { degree: -1, source: vec![0], target: vec![1], entries: vec![sol] };
    let q = BTreeMap::from([((0, 1), q01), ((1, 2), q12), ((0, 2), q02)]);
    let p = TwistedComplex::new(j, slots, q).unwrap();
    assert!(validate_twisted(j, &p).is_valid());
    let tot = totalize(&cc, &p).unwrap();
    // On H^0 the slot complex reads Z -1-> Z -0-> Z/2.
    for (k, g) in tot.all_homology() {
        let want = if k == 2 { crate::FgAbGroup::cyclic(2) } else { crate::FgAbGroup::zero() };
        assert_eq!(g, want, "degree {k}");
    }
}

#[test]
fn identity_and_structural_maps_are_closed() {
    let (j, p) = additive_complex(&[&[1, -2]]);
    assert!(morphism_differential(&j, &TwistedMorphism::identity(&j, &p)).is_zero());
    for n in -1..=3 {
        let t = truncation(&j, &p, n);
        for m in [&t.iota, &t.pi, &t.delta] {
            assert!(m.is_twisted(&j));
        }
    }
}

#[test]
fn diagonal_map_is_closed_iff_squares_commute() {
    let ranks = [1];
    let j = NegDgCategory::additive_free_modules(&ranks);
    let one = |v: i64| additive_block(&ranks, &[0], &[0], &IntMatrix::from_i64(&[&[v]]));
    let slots = BTreeMap::from([(0, vec![0]), (1, vec![0])]);
    let p = TwistedComplex::new(&j, slots.clone(), BTreeMap::from([((0, 1), one(3))])).unwrap();
    let pp = TwistedComplex::new(&j, slots, BTreeMap::from([((0, 1), one(6))])).unwrap();
    let f = |a: i64, b: i64| {
        TwistedMorphism::new(&j, 0, p.clone(), pp.clone(), BTreeMap::from([((0, 0), one(a)), ((1, 1), one(b))]))
            .unwrap()
    };
    // 6a = 3b commutes.
    assert!(f(1, 2).is_twisted(&j));
    assert!(!f(1, 1).is_twisted(&j));
    let df = morphism_differential(&j, &f(1, 1));
    // (df)_{01} = q' f_00 - f_11 q = 6 - 3.
    assert_eq!(df.component(0, 1).unwrap().entries, vec![vec![z(3)]]);
}

#[test]
fn shift_by_zero_and_back() {
    let (_, p) = additive_complex(&[&[1, -2]]);
    assert_eq!(shift(&p, 0), p);
    assert_eq!(shift(&shift(&p, 1), -1), p);
    assert_eq!(shift(&p, 2).slot(-2), p.slot(0));
}

#[test]
fn cone_of_zero_is_sum() {
    let (j, p) = additive_complex(&[&[1, -2]]);
    let zero = TwistedMorphism::zero(0, &p, &p);
    let c = cone(&j, &zero).unwrap().cone;
    assert_eq!(c, TwistedComplex::direct_sum(&j, &shift(&p, 1), &p));
}

#[test]
fn cone_rejects_non_closed_maps() {
    let (j, p) = additive_complex(&[&[1, -2]]);
    // Doubling only slot 0 breaks the square into slot 1.
    let extra = BTreeMap::from([((0, 0), BlockMap::identity(&j, &[0]))]);
    let bad =
        TwistedMorphism::identity(&j, &p).add(&j, &TwistedMorphism::new(&j, 0, p.clone(), p.clone(), extra).unwrap());
    assert!(matches!(cone(&j, &bad), Err(TwistedError::NotATwistedMorphism(_))));
}

#[test]
fn cone_of_shifted_delta_is_the_complex() {
    let (j, p) = additive_complex(&[&[1, -2]]);
    for n in -1..=3 {
        let t = truncation(&j, &p, n);
        let c = cone(&j, &shift_morphism(&t.delta, -1)).unwrap();
        assert_eq!(c.cone, p, "n = {n}");
    }
}

#[test]
fn single_object_totalizes_to_itself() {
    let x = ChainObject::new(-1, vec![1, 2], vec![IntMatrix::from_i64(&[&[1], &[3]])]).unwrap();
    let cc = build_dgchain_instance(vec!["X".into()], vec![x]).unwrap();
    let t = totalize(&cc, &TwistedComplex::single(0, 2)).unwrap();
    assert_eq!(t.lowest(), 1);
    // Slot 2 carries the sign (+1) on the internal differential.
    assert_eq!(t.map(1), IntMatrix::from_i64(&[&[1], &[3]]));
    let t = totalize(&cc, &TwistedComplex::single(0, 1)).unwrap();
    assert_eq!(t.map(0), IntMatrix::from_i64(&[&[-1], &[-3]]));
}

#[test]
fn two_slot_complex_of_complexes_is_classical_total() {
    // (Z -2-> Z) --id--> (Z -2-> Z) on slots 0, 1.
    let two = ChainObject::new(-1, vec![1, 1], vec![IntMatrix::from_i64(&[&[2]])]).unwrap();
    let cc = build_dgchain_instance(vec!["T".into()], vec![two]).unwrap();
    let j = &cc.category;
    let slots = BTreeMap::from([(0, vec![0]), (1, vec![0])]);
    let p = TwistedComplex::new(j, slots, BTreeMap::from([((0, 1), BlockMap::identity(j, &[0]))])).unwrap();
    let t = totalize(&cc, &p).unwrap();
    assert_eq!((t.lowest(), t.highest()), (-1, 1));
    // Degree 0 is T^0 (slot 0) ⊕ T^{-1} (slot 1).
    assert_eq!(t.map(-1), IntMatrix::from_i64(&[&[2], &[1]]));
    assert_eq!(t.map(0), IntMatrix::from_i64(&[&[1, -2]]));
    assert!(t.all_homology().values().all(|g| g.is_zero()));
}

#[test]
fn random_complexes_satisfy_lemma_items() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ranks = [1, 2, 3];
    let j = NegDgCategory::additive_free_modules(&ranks);
    for _ in 0..20 {
        let p = random_additive_twisted(&mut rng, &ranks, 5, 6);
        assert!(validate_twisted(&j, &p).is_valid());
        for n in -3..=4 {
            assert!(validate_twisted(&j, &shift(&p, n)).is_valid());
            assert_eq!(cone(&j, &shift_morphism(&truncation(&j, &p, n).delta, -1)).unwrap().cone, p);
            let piece = shift(&truncate_leq(&truncate_geq(&p, n), n), n);
            assert_eq!(piece, TwistedComplex::concentrated(p.slot(n).to_vec(), 0));
        }
    }
    let cc = random_chain_category(&mut rng, 3, false);
    for _ in 0..10 {
        let p = random_chain_twisted(&mut rng, &cc, 5, 6);
        assert!(validate_twisted(&cc.category, &p).is_valid());
        totalize(&cc, &p).unwrap();
    }
}
