use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

fn z5() -> Coefficient {
    Coefficient::modulo(5).unwrap()
}

/// `B = Z^r` in degree 0 with endomorphism `phi` and nothing over the base.
fn closure_only(coeff: Coefficient, phi: IntMatrix) -> KsInput {
    let r = phi.rows();
    KsInput::new(coeff, FreeChain::zero(), FreeChain::concentrated(r, 0), BTreeMap::from([(0, phi)]), BTreeMap::new())
        .unwrap()
}

fn point() -> KsInput {
    let one = BTreeMap::from([(0, m(&[&[1]]))]);
    KsInput::new(Coefficient::Integers, FreeChain::concentrated(1, 0), FreeChain::concentrated(1, 0), one.clone(), one)
        .unwrap()
}

#[test]
fn point_expands_by_hand() {
    let p = point();
    let t = ks_total(&p);
    // KS_2 = C_0 -ρ-> KS_1 = B_0 -(1-φ)-> KS_0 = B_0.
    assert_eq!((t.lowest(), t.highest()), (-2, 0));
    assert_eq!(t.map(-2), m(&[&[1]]));
    assert_eq!(t.map(-1), m(&[&[0]]));
    let r = ks_homology(&p);
    assert_eq!(r.ks, BTreeMap::from([(0, FgAbGroup::free(1))]));
    assert_eq!(r.ar, BTreeMap::from([(0, FgAbGroup::free(1)), (1, FgAbGroup::free(1))]));
    assert_eq!(r.base, BTreeMap::from([(0, FgAbGroup::free(1))]));
    assert!(r.sequence_report.is_exact());
    assert!(r.cone_report.is_exact());
}

#[test]
fn empty_base_gives_arithmetic_column() {
    let input = closure_only(Coefficient::Integers, m(&[&[2, 1], &[0, 3]]));
    assert_eq!(ks_total(&input), ar_total(&input));
    let r = ks_homology(&input);
    assert_eq!(r.ks, r.ar);
}

#[test]
fn multiplication_by_six_mod_five() {
    let r = ks_homology(&closure_only(z5(), m(&[&[6]])));
    assert_eq!(r.ar, BTreeMap::from([(0, FgAbGroup::cyclic(5)), (1, FgAbGroup::cyclic(5))]));
    let seq = &r.sequence_report;
    assert!(seq.is_exact());
    let d0 = seq.degrees.iter().find(|d| d.degree == 0).unwrap();
    let d1 = seq.degrees.iter().find(|d| d.degree == 1).unwrap();
    assert_eq!((d0.coinvariants.clone(), d0.invariants.clone()), (FgAbGroup::cyclic(5), FgAbGroup::zero()));
    assert_eq!((d1.coinvariants.clone(), d1.invariants.clone()), (FgAbGroup::zero(), FgAbGroup::cyclic(5)));
}

#[test]
fn identity_splits_into_neighbouring_degrees() {
    // B: Z -3-> Z in degrees 1, 0; φ = 1, so Ar_m carries H_m(B) and H_{m-1}(B).
    let b = FreeChain::new(0, vec![1, 1], vec![m(&[&[3]])]).unwrap();
    let phi = BTreeMap::from([(0, m(&[&[1]])), (1, m(&[&[1]]))]);
    let input = KsInput::new(Coefficient::Integers, FreeChain::zero(), b, phi, BTreeMap::new()).unwrap();
    let r = ks_homology(&input);
    assert_eq!(r.ar, BTreeMap::from([(0, FgAbGroup::cyclic(3)), (1, FgAbGroup::cyclic(3))]));
    assert!(r.sequence_report.is_exact());
}

#[test]
fn nilpotent_frobenius_kills_arithmetic_homology() {
    let r = ks_homology(&closure_only(Coefficient::Integers, m(&[&[0, 1], &[0, 0]])));
    assert!(r.ar.is_empty());
    // Nilpotent only after reduction mod 5.
    let r = ks_homology(&closure_only(z5(), m(&[&[5, 1], &[0, 10]])));
    assert!(r.ar.is_empty());
    assert!(r.sequence_report.is_exact());
}

#[test]
fn swap_of_two_summands() {
    // 1 - swap = [[1, -1], [-1, 1]] has Smith form diag(1, 0).
    let r = ks_homology(&closure_only(Coefficient::Integers, m(&[&[0, 1], &[1, 0]])));
    assert_eq!(r.ar, BTreeMap::from([(0, FgAbGroup::free(1)), (1, FgAbGroup::free(1))]));
    // Over Z/2 the negated swap acts like the swap.
    let r = ks_homology(&closure_only(Coefficient::modulo(2).unwrap(), m(&[&[0, -1], &[-1, 0]])));
    assert_eq!(r.ar, BTreeMap::from([(0, FgAbGroup::cyclic(2)), (1, FgAbGroup::cyclic(2))]));
}

#[test]
fn invalid_inputs_are_rejected() {
    let b = FreeChain::new(0, vec![1, 1], vec![m(&[&[2]])]).unwrap();
    // φ = 1 in degree 1 and 0 in degree 0 does not commute with d = 2.
    let phi = BTreeMap::from([(1, m(&[&[1]]))]);
    let err = KsInput::new(Coefficient::Integers, FreeChain::zero(), b.clone(), phi, BTreeMap::new());
    assert!(matches!(err, Err(KsError::NotChainMap(_))));
    // Over Z/2 the same data commutes.
    let phi = BTreeMap::from([(1, m(&[&[1]]))]);
    assert!(KsInput::new(Coefficient::modulo(2).unwrap(), FreeChain::zero(), b, phi, BTreeMap::new()).is_ok());
    // ρ into a part moved by φ.
    let c = FreeChain::concentrated(1, 0);
    let bb = FreeChain::concentrated(1, 0);
    let err = KsInput::new(
        Coefficient::Integers,
        c,
        bb,
        BTreeMap::from([(0, m(&[&[2]]))]),
        BTreeMap::from([(0, m(&[&[1]]))]),
    );
    assert!(matches!(err, Err(KsError::NotChainMap(_))));
    assert!(matches!(FreeChain::new(0, vec![1, 2], vec![m(&[&[1]])]), Err(KsError::Invalid(_))));
}

#[test]
fn random_inputs_satisfy_both_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for coeff in [Coefficient::Integers, z5(), Coefficient::modulo(4).unwrap()] {
        for _ in 0..15 {
            let input = random_ks_input(&mut rng, coeff);
            let r = ks_homology(&input);
            assert!(r.sequence_report.is_exact(), "{:?}", r.sequence_report);
            assert!(r.cone_report.is_exact(), "{:?}", r.cone_report.failures);
        }
    }
}

#[test]
fn cone_check_sees_a_broken_first_map() {
    let p = point();
    let mut tri = ks_triangle(&p);
    tri.u = DegreeMaps::new(0);
    assert!(!tri.long_exact_check().is_exact());
}
