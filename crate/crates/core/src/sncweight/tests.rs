// The i128 oracles index matrices by row and column on purpose.
#![allow(clippy::needless_range_loop)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exactlinalg::Lattice;
use crate::weighthom::evaluate;

fn cfg(n: usize, strata: &[(&[usize], usize)]) -> Result<SncConfiguration, SncError> {
    SncConfiguration::from_strata(n, strata.iter().map(|(t, c)| (t.to_vec(), *c)).collect())
}

fn triangle() -> SncConfiguration {
    cfg(3, &[(&[0], 1), (&[1], 1), (&[2], 1), (&[0, 1], 1), (&[0, 2], 1), (&[1, 2], 1)]).unwrap()
}

fn z5() -> Coefficient {
    Coefficient::modulo(5).unwrap()
}

/// Homology of a chain complex with small entries, via a direct i128 Smith
/// reduction: the free rank and the nonunit invariant factors per degree.
mod oracle {
    fn smith_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut diag = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pr, pc)) = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| m[r][c] != 0)
                .min_by_key(|&(r, c)| m[r][c].abs())
            else {
                break;
            };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            let mut clean = true;
            for r in t + 1..rows {
                let q = m[r][t] / m[t][t];
                for c in t..cols {
                    m[r][c] -= q * m[t][c];
                }
                clean &= m[r][t] == 0;
            }
            for c in t + 1..cols {
                let q = m[t][c] / m[t][t];
                for r in t..rows {
                    m[r][c] -= q * m[r][t];
                }
                clean &= m[t][c] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a non-multiple from the rest into the pivot row.
            let p = m[t][t];
            if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % p != 0)) {
                for c in t..cols {
                    m[t][c] += m[r][c];
                }
                continue;
            }
            diag.push(p.abs());
            t += 1;
        }
        diag
    }

    /// `(free rank, torsion)` of `H_a` for `ranks[a]` and `boundaries[a]: C_{a+1} -> C_a`.
    pub fn integral(ranks: &[usize], boundaries: &[Vec<Vec<i128>>]) -> Vec<(usize, Vec<i128>)> {
        let diags: Vec<Vec<i128>> = boundaries.iter().map(|b| smith_diagonal(b.clone())).collect();
        (0..ranks.len())
            .map(|a| {
                let out_rank = if a == 0 { 0 } else { diags[a - 1].len() };
                let in_diag = diags.get(a).cloned().unwrap_or_default();
                let free = ranks[a] - out_rank - in_diag.len();
                (free, in_diag.into_iter().filter(|&d| d != 1).collect())
            })
            .collect()
    }

    /// Dimensions of `H_a` over the prime field `F_p`.
    pub fn mod_prime(ranks: &[usize], boundaries: &[Vec<Vec<i128>>], p: i128) -> Vec<usize> {
        let rank = |b: &Vec<Vec<i128>>| {
            let reduced: Vec<Vec<i128>> = b.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
            let mut m = reduced;
            let (rows, cols) = (m.len(), m.first().map_or(0, |r| r.len()));
            let mut rk = 0;
            for c in 0..cols {
                let Some(r) = (rk..rows).find(|&r| m[r][c] % p != 0) else { continue };
                m.swap(rk, r);
                let inv = (1..p).find(|&x| (x * m[rk][c]).rem_euclid(p) == 1).unwrap();
                for cc in 0..cols {
                    m[rk][cc] = (m[rk][cc] * inv).rem_euclid(p);
                }
                for rr in 0..rows {
                    if rr != rk && m[rr][c] != 0 {
                        let f = m[rr][c];
                        for cc in 0..cols {
                            m[rr][cc] = (m[rr][cc] - f * m[rk][cc]).rem_euclid(p);
                        }
                    }
                }
                rk += 1;
            }
            rk
        };
        let rk: Vec<usize> = boundaries.iter().map(rank).collect();
        (0..ranks.len())
            .map(|a| ranks[a] - if a == 0 { 0 } else { rk[a - 1] } - rk.get(a).copied().unwrap_or(0))
            .collect()
    }

    /// Ordered simplicial chain complex of a simplicial complex given by its faces.
    pub fn simplicial(faces: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<Vec<i128>>>) {
        let top = faces.iter().map(|f| f.len()).max().unwrap_or(0);
        let level = |k: usize| -> Vec<&Vec<usize>> {
            let mut v: Vec<&Vec<usize>> = faces.iter().filter(|f| f.len() == k).collect();
            v.sort();
            v
        };
        let ranks: Vec<usize> = (1..=top).map(|k| level(k).len()).collect();
        let mut boundaries = Vec::new();
        for k in 2..=top {
            let (hi, lo) = (level(k), level(k - 1));
            let mut m = vec![vec![0i128; hi.len()]; lo.len()];
            for (c, s) in hi.iter().enumerate() {
                for drop in 0..k {
                    let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &x)| x).collect();
                    let r = lo.iter().position(|g| **g == f).unwrap();
                    m[r][c] += if drop % 2 == 0 { 1 } else { -1 };
                }
            }
            boundaries.push(m);
        }
        (ranks, boundaries)
    }
}

fn group_of(free: usize, torsion: &[i128]) -> FgAbGroup {
    let mut g = FgAbGroup::free(free);
    for &t in torsion {
        g = g.direct_sum(&FgAbGroup::cyclic(Int::from(t)));
    }
    g
}

#[test]
fn triangle_has_a_loop() {
    let e = triangle();
    let h = snc_weight_homology(&e, Coefficient::Integers);
    assert_eq!(h.get(0), FgAbGroup::free(1));
    assert_eq!(h.get(1), FgAbGroup::free(1));
    let h5 = snc_weight_homology(&e, z5());
    assert_eq!(h5.get(0), FgAbGroup::cyclic(5));
    assert_eq!(h5.get(1), FgAbGroup::cyclic(5));
}

#[test]
fn triangle_boundary_matrix() {
    // Columns {0,1}, {0,2}, {1,2}; rows 0, 1, 2.
    assert_eq!(triangle().boundary(1), IntMatrix::from_i64(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]));
}

#[test]
fn small_configurations() {
    let single = cfg(1, &[(&[0], 1)]).unwrap();
    assert_eq!(snc_weight_homology(&single, Coefficient::Integers).groups, BTreeMap::from([(0, FgAbGroup::free(1))]));

    let disjoint = cfg(2, &[(&[0], 1), (&[1], 1)]).unwrap();
    assert_eq!(snc_weight_homology(&disjoint, Coefficient::Integers).get(0), FgAbGroup::free(2));

    let edge = cfg(2, &[(&[0], 1), (&[1], 1), (&[0, 1], 1)]).unwrap();
    let h = snc_weight_homology(&edge, Coefficient::Integers);
    assert_eq!((h.get(0), h.get(1)), (FgAbGroup::free(1), FgAbGroup::zero()));

    // Two curves meeting in two points.
    let two_points = cfg(2, &[(&[0], 1), (&[1], 1), (&[0, 1], 2)]).unwrap();
    let h = snc_weight_homology(&two_points, Coefficient::Integers);
    assert_eq!((h.get(0), h.get(1)), (FgAbGroup::free(1), FgAbGroup::free(1)));

    // Three planes through a common point.
    let mut full: Vec<(&[usize], usize)> =
        vec![(&[0], 1), (&[1], 1), (&[2], 1), (&[0, 1], 1), (&[0, 2], 1), (&[1, 2], 1)];
    full.push((&[0, 1, 2], 1));
    let h = snc_weight_homology(&cfg(3, &full).unwrap(), Coefficient::Integers);
    assert_eq!(
        h.groups.values().cloned().collect::<Vec<_>>(),
        vec![FgAbGroup::free(1), FgAbGroup::zero(), FgAbGroup::zero()]
    );
}

#[test]
fn malformed_configurations_are_rejected() {
    assert!(matches!(cfg(2, &[(&[0], 0)]), Err(SncError::Invalid(_))));
    assert!(matches!(cfg(2, &[(&[0], 1), (&[0, 1], 1)]), Err(SncError::Invalid(_))));
    assert!(matches!(cfg(2, &[(&[1, 0], 1)]), Err(SncError::Invalid(_))));
    assert!(matches!(cfg(1, &[(&[3], 1)]), Err(SncError::Invalid(_))));
    // A face with two components needs an explicit map.
    assert!(matches!(cfg(2, &[(&[0], 2), (&[1], 1), (&[0, 1], 1)]), Err(SncError::InconsistentIncidence(_))));
    // A map of the wrong length.
    let strata = BTreeMap::from([(vec![0], 2), (vec![1], 1), (vec![0, 1], 1)]);
    let bad = BTreeMap::from([((vec![0, 1], vec![0]), vec![0, 1])]);
    assert!(matches!(SncConfiguration::new(2, strata.clone(), bad), Err(SncError::InconsistentIncidence(_))));
    let good = BTreeMap::from([((vec![0, 1], vec![0]), vec![1])]);
    assert!(SncConfiguration::new(2, strata, good).is_ok());
}

#[test]
fn non_commuting_faces_are_rejected() {
    let mut strata = BTreeMap::new();
    for t in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
        strata.insert(t, 1);
    }
    strata.insert(vec![0], 2);
    // Through {0,1} the point lands on component 0 of E_0, through {0,2} on component 1.
    let incidence = BTreeMap::from([((vec![0, 1], vec![0]), vec![0]), ((vec![0, 2], vec![0]), vec![1])]);
    assert!(matches!(SncConfiguration::new(3, strata, incidence), Err(SncError::InconsistentIncidence(_))));
}

#[test]
fn euler_characteristic_matches_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..30 {
        let n = rng.gen_range(1..=6);
        let e = random_configuration(&mut rng, n, false);
        let h = snc_weight_homology(&e, Coefficient::Integers);
        let top = e.dimension().unwrap();
        let chi_h: i64 = (0..=top).map(|a| (-1i64).pow(a as u32) * h.get(a as i64).rank() as i64).sum();
        let chi_c: i64 = (0..=top).map(|a| (-1i64).pow(a as u32) * e.count(a) as i64).sum();
        assert_eq!(chi_h, chi_c);
    }
}

#[test]
fn connected_strata_match_simplicial_homology() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..30 {
        let n = rng.gen_range(1..=6);
        let e = random_configuration(&mut rng, n, true);
        let faces: Vec<Vec<usize>> = e.strata().keys().cloned().collect();
        let (ranks, boundaries) = oracle::simplicial(&faces);
        let want = oracle::integral(&ranks, &boundaries);
        let h = snc_weight_homology(&e, Coefficient::Integers);
        for (a, (free, torsion)) in want.iter().enumerate() {
            assert_eq!(h.get(a as i64), group_of(*free, torsion), "H_{a} of {faces:?}");
        }
        let dims = oracle::mod_prime(&ranks, &boundaries, 5);
        let h5 = snc_weight_homology(&e, z5());
        for (a, &d) in dims.iter().enumerate() {
            assert_eq!(h5.get(a as i64), FgAbGroup::from_orders(vec![Int::from(5); d]));
        }
    }
}

#[test]
fn oracle_sees_torsion() {
    // Boundary of multiplication by 2 on a single generator.
    let got = oracle::integral(&[1, 1], &[vec![vec![2]]]);
    assert_eq!(got, vec![(0, vec![2]), (0, vec![])]);
}

#[test]
fn twisted_encoding_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..10 {
        let n = rng.gen_range(1..=5);
        let e = random_configuration(&mut rng, n, false);
        for coeff in [Coefficient::Integers, z5()] {
            let (j, p, g) = as_twisted(&e, coeff).unwrap();
            assert!(crate::twisted::validate_twisted(&j, &p).is_valid());
            let h = snc_weight_homology(&e, coeff);
            for a in 0..=e.dimension().unwrap() as i64 {
                assert_eq!(evaluate(&g, &p, -a).unwrap(), h.get(a));
            }
        }
    }
}

fn triangle_blowup() -> BlowupData {
    BlowupData::new(triangle(), 1, 1, vec![0, 0, 0], vec![0, 0, 0]).unwrap()
}

#[test]
fn blowup_of_triangle_over_integers_and_mod_five() {
    let d = triangle_blowup();
    for coeff in [Coefficient::Integers, z5()] {
        let lambda = |k: usize| match coeff.modulus() {
            None => FgAbGroup::free(k),
            Some(n) => FgAbGroup::from_orders(vec![n; k]),
        };
        let r = blowup_weight_homology(&d, coeff, -1..=4);
        assert_eq!(r.groups[&1], lambda(2));
        assert_eq!(r.groups[&2], lambda(1));
        assert_eq!(r.groups[&3], FgAbGroup::zero());
        assert_eq!(r.out_of_range, vec![-1, 0]);
    }
    // ker(Z^3 -> Z^2, e_k -> (1, 1)) is spanned by differences.
    let r = blowup_weight_homology(&d, Coefficient::Integers, 1..=1);
    let want = Lattice::from_generators(
        3,
        [vec![Int::from(1), Int::from(-1), Int::from(0)], vec![Int::from(0), Int::from(1), Int::from(-1)]],
    );
    assert_eq!(Lattice::column_span(&r.wh1_kernel), want);
}

#[test]
fn blowup_rejects_partial_incidence() {
    assert!(matches!(
        BlowupData::new(triangle(), 1, 1, vec![0, 0], vec![0, 0, 0]),
        Err(SncError::InconsistentIncidence(_))
    ));
    assert!(matches!(
        BlowupData::new(triangle(), 1, 1, vec![0, 0, 1], vec![0, 0, 0]),
        Err(SncError::InconsistentIncidence(_))
    ));
}
