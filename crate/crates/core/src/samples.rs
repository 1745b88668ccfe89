//! Random generators for valid categories, twisted complexes and twisted
//! morphisms. Used by the property suites, the acceptance run and the benches.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::dgcore::{build_dgchain_instance, ChainCategory, ChainObject, NegDgCategory, ObjId};
use crate::exactlinalg::{kernel_basis, solve_integer, Int, IntMatrix, Lattice};
use crate::twisted::{morphism_differential, BlockMap, TwistedComplex, TwistedMorphism};

/// Entries drawn uniformly from `-bound..=bound`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries = (0..rows * cols).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, entries).expect("sized by construction")
}

fn random_vec<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Int> {
    (0..len).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect()
}

/// A random integer combination of the given lattice basis.
fn random_combination<R: Rng>(rng: &mut R, basis: &[Vec<Int>], ambient: usize, bound: i64) -> Vec<Int> {
    let mut v = vec![Int::zero(); ambient];
    for b in basis {
        let c = Int::from(rng.gen_range(-bound..=bound));
        if c.is_zero() {
            continue;
        }
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += &c * bi;
        }
    }
    v
}

/// The block map of an additive encoding whose full matrix over the
/// concatenated ranks of `source` and `target` is `m`.
pub fn additive_block(ranks: &[usize], source: &[ObjId], target: &[ObjId], m: &IntMatrix) -> BlockMap {
    let mut entries = Vec::with_capacity(source.len() * target.len());
    let mut r0 = 0;
    for &y in target {
        let mut c0 = 0;
        for &x in source {
            entries.push(m.block(r0, c0, ranks[y], ranks[x]).entries().to_vec());
            c0 += ranks[x];
        }
        r0 += ranks[y];
    }
    BlockMap { degree: 0, source: source.to_vec(), target: target.to_vec(), entries }
}

/// Inverse of [`additive_block`].
pub fn additive_matrix(ranks: &[usize], b: &BlockMap) -> IntMatrix {
    let rows: usize = b.target.iter().map(|&y| ranks[y]).sum();
    let cols: usize = b.source.iter().map(|&x| ranks[x]).sum();
    let mut m = IntMatrix::zeros(rows, cols);
    let ns = b.source.len();
    let mut r0 = 0;
    for (t, &y) in b.target.iter().enumerate() {
        let mut c0 = 0;
        for (s, &x) in b.source.iter().enumerate() {
            let e = &b.entries[t * ns + s];
            if !e.is_empty() {
                m.paste(r0, c0, &IntMatrix::new(ranks[y], ranks[x], e.clone()).expect("entry size"));
            }
            c0 += ranks[x];
        }
        r0 += ranks[y];
    }
    m
}

/// An ordinary bounded complex of free modules in the additive encoding
/// `NegDgCategory::additive_free_modules(ranks)`, on at most `max_slots`
/// consecutive slots with total rank at most `max_total_rank`.
pub fn random_additive_twisted<R: Rng>(
    rng: &mut R,
    ranks: &[usize],
    max_slots: usize,
    max_total_rank: usize,
) -> TwistedComplex {
    let count = if max_slots > 1 && rng.gen_bool(0.85) { rng.gen_range(2..=max_slots) } else { 1 };
    let start = rng.gen_range(-2..=1);
    let mut slots: BTreeMap<i64, Vec<ObjId>> = BTreeMap::new();
    let mut budget = max_total_rank;
    for s in 0..count as i64 {
        let mut objs = Vec::new();
        let want = if rng.gen_bool(0.3) { 2 } else { 1 };
        for _ in 0..want {
            let fits: Vec<ObjId> = (0..ranks.len()).filter(|&x| ranks[x] <= budget).collect();
            if fits.is_empty() {
                break;
            }
            let (a, b) = (fits[rng.gen_range(0..fits.len())], fits[rng.gen_range(0..fits.len())]);
            let x = if ranks[b] < ranks[a] { b } else { a };
            budget -= ranks[x];
            objs.push(x);
        }
        if objs.is_empty() {
            break;
        }
        slots.insert(start + s, objs);
    }
    let keys: Vec<i64> = slots.keys().copied().collect();
    let dim = |s: &[ObjId]| s.iter().map(|&x| ranks[x]).sum::<usize>();
    let mut q = BTreeMap::new();
    let mut prev: Option<IntMatrix> = None;
    for w in keys.windows(2) {
        let (src, tgt) = (&slots[&w[0]], &slots[&w[1]]);
        let (c, r) = (dim(src), dim(tgt));
        let m = match &prev {
            None => random_matrix(rng, r, c, 2),
            Some(p) => {
                // Rows of the next map lie in the left kernel of the previous one.
                let k = kernel_basis(&p.transpose());
                let coeffs = random_matrix(rng, r, k.cols(), 2);
                &coeffs * &k.transpose()
            }
        };
        q.insert((w[0], w[1]), additive_block(ranks, src, tgt, &m));
        prev = Some(m);
    }
    TwistedComplex::new(&NegDgCategory::additive_free_modules(ranks), slots, q).expect("consistent shapes")
}

/// A random bounded complex of free groups. With `degree_zero_homology`
/// the complex has cohomology concentrated in degree 0.
pub fn random_chain_object<R: Rng>(rng: &mut R, degree_zero_homology: bool) -> ChainObject {
    let kind = rng.gen_range(0..if degree_zero_homology { 4 } else { 6 });
    let z = |v: i64| Int::from(v);
    match kind {
        0 => ChainObject::concentrated(rng.gen_range(1..=2)),
        1 => {
            let m = rng.gen_range(2..=4);
            ChainObject::new(-1, vec![1, 1], vec![IntMatrix::from_i64(&[&[m]])]).unwrap()
        }
        2 => {
            let (a, b) = (rng.gen_range(1..=3), rng.gen_range(-2..=2));
            ChainObject::new(-1, vec![1, 2], vec![IntMatrix::new(2, 1, vec![z(a), z(b)]).unwrap()]).unwrap()
        }
        3 => {
            // Exact except in degree 0, where the cokernel is Z.
            ChainObject::new(
                -2,
                vec![1, 2, 2],
                vec![IntMatrix::from_i64(&[&[1], &[1]]), IntMatrix::from_i64(&[&[1, -1], &[0, 0]])],
            )
            .unwrap()
        }
        4 => {
            let m = random_matrix(rng, 1, 2, 2);
            ChainObject::new(0, vec![2, 1], vec![m]).unwrap()
        }
        _ => {
            let m = random_matrix(rng, 2, 1, 3);
            ChainObject::new(-1, vec![1, 2], vec![m]).unwrap()
        }
    }
}

/// A chain category on `objects` random complexes (2 or 3 keep composition
/// tables small).
pub fn random_chain_category<R: Rng>(rng: &mut R, objects: usize, degree_zero_homology: bool) -> ChainCategory {
    let objs: Vec<ChainObject> = (0..objects).map(|_| random_chain_object(rng, degree_zero_homology)).collect();
    let names = (0..objects).map(|i| format!("X{i}")).collect();
    build_dgchain_instance(names, objs).expect("random objects are complexes")
}

/// A twisted complex over a chain category with one object per slot, on
/// consecutive slots, total rank at most `max_total_rank`. Higher `q_ij`
/// are obtained by solving the Maurer-Cartan equation column by column;
/// when that is impossible the new differential is replaced by zero.
pub fn random_chain_twisted<R: Rng>(
    rng: &mut R,
    cc: &ChainCategory,
    max_slots: usize,
    max_total_rank: usize,
) -> TwistedComplex {
    let j = &cc.category;
    let n = j.object_count();
    let count = if max_slots > 1 && rng.gen_bool(0.85) { rng.gen_range(2..=max_slots) } else { 1 };
    let start = rng.gen_range(-2..=1);
    let mut objs: Vec<ObjId> = Vec::new();
    let mut budget = max_total_rank;
    for _ in 0..count {
        let fits: Vec<ObjId> = (0..n).filter(|&x| cc.object(x).total_rank() <= budget).collect();
        if fits.is_empty() {
            break;
        }
        // The smaller of two draws, so that more slots fit in the budget.
        let (a, b) = (fits[rng.gen_range(0..fits.len())], fits[rng.gen_range(0..fits.len())]);
        let x = if cc.object(b).total_rank() < cc.object(a).total_rank() { b } else { a };
        budget -= cc.object(x).total_rank();
        objs.push(x);
    }
    let slot = |k: usize| start + k as i64;
    let mut q: BTreeMap<(i64, i64), BlockMap> = BTreeMap::new();
    for k in 1..objs.len() {
        let mut column = None;
        for _attempt in 0..6 {
            if let Some(c) = try_column(rng, j, &objs, &q, k, start) {
                column = Some(c);
                break;
            }
        }
        for (i, b) in column.unwrap_or_default() {
            q.insert((slot(i), slot(k)), b);
        }
    }
    let slots = objs.iter().enumerate().map(|(k, &x)| (slot(k), vec![x])).collect();
    TwistedComplex::new(j, slots, q).expect("consistent shapes")
}

fn element_block(x: ObjId, y: ObjId, degree: i64, coords: Vec<Int>) -> BlockMap {
    BlockMap { degree, source: vec![x], target: vec![y], entries: vec![coords] }
}

/// Chooses `q_{k-1,k}` and solves for `q_{i,k}`, `i < k - 1`; indices are
/// positions in `objs`.
fn try_column<R: Rng>(
    rng: &mut R,
    j: &NegDgCategory,
    objs: &[ObjId],
    q: &BTreeMap<(i64, i64), BlockMap>,
    k: usize,
    start: i64,
) -> Option<Vec<(usize, BlockMap)>> {
    let slot = |i: usize| start + i as i64;
    let (xp, xk) = (objs[k - 1], objs[k]);
    let r = j.rank(xp, xk, 0);
    let basis: Vec<Vec<Int>> = if k >= 2 {
        // Closed maps c with c ∘ q_{k-2,k-1} a boundary.
        let x2 = objs[k - 2];
        let prev = q.get(&(slot(k - 2), slot(k - 1))).map(|b| b.entry(0, 0)).unwrap_or_else(|| j.zero(x2, xp, 0));
        let cols: Vec<Vec<Int>> =
            (0..r).map(|a| j.compose_unchecked(&j.generator(xp, xk, 0, a), &prev).coords).collect();
        let m = IntMatrix::from_columns(j.rank(x2, xk, 0), &cols);
        let bnd = Lattice::column_span(&j.hom(x2, xk).differential(-1));
        Lattice::full(r).preimage(&m, &bnd).basis().to_vec()
    } else {
        Lattice::full(r).basis().to_vec()
    };
    let mut col: BTreeMap<usize, BlockMap> = BTreeMap::new();
    col.insert(k - 1, element_block(xp, xk, 0, random_combination(rng, &basis, r, 2)));
    let sk = slot(k);
    for i in (0..k - 1).rev() {
        let (xi, deg) = (objs[i], slot(i) - sk + 1);
        // Σ_m q_mk q_im over i < m < k.
        let mut rhs = j.zero(xi, xk, deg + 1);
        for m in i + 1..k {
            let qmk = col.get(&m);
            let qim = q.get(&(slot(i), slot(m)));
            if let (Some(a), Some(b)) = (qmk, qim) {
                rhs.add_assign(&j.compose_unchecked(&a.entry(0, 0), &b.entry(0, 0)));
            }
        }
        // (-1)^k D q_ik = -rhs.
        let target = if sk.rem_euclid(2) == 0 { rhs.neg() } else { rhs };
        let d = j.hom(xi, xk).differential(deg);
        let mut x = solve_integer(&d, &target.coords)?;
        if rng.gen_bool(0.5) && j.rank(xi, xk, deg - 1) > 0 {
            let h = random_vec(rng, j.rank(xi, xk, deg - 1), 1);
            let dh = j.hom(xi, xk).differential(deg - 1).mul_vec(&h);
            for (a, b) in x.iter_mut().zip(dh) {
                *a += b;
            }
        }
        col.insert(i, element_block(xi, xk, deg, x));
    }
    Some(col.into_iter().collect())
}

type Shape = Vec<((i64, i64), BlockMap)>;

/// Zero blocks for every component `(a, b)` of a degree-`degree` morphism
/// `p -> pp` that is allowed by negativity and satisfies `b - a <= max_gap`.
fn component_shape(j: &NegDgCategory, p: &TwistedComplex, pp: &TwistedComplex, degree: i64, max_gap: i64) -> Shape {
    let mut out = Vec::new();
    for a in p.support() {
        for b in pp.support() {
            let deg = degree + a - b;
            if deg <= 0 && b - a <= max_gap {
                out.push(((a, b), BlockMap::zero(j, deg, p.slot(a), pp.slot(b))));
            }
        }
    }
    out
}

fn shape_dim(shape: &Shape) -> usize {
    shape.iter().map(|(_, b)| b.entries.iter().map(Vec::len).sum::<usize>()).sum()
}

fn morphism_from_coords(
    p: &TwistedComplex,
    pp: &TwistedComplex,
    degree: i64,
    shape: &Shape,
    v: &[Int],
) -> TwistedMorphism {
    let mut pos = 0;
    let mut comps = BTreeMap::new();
    for (key, zero) in shape {
        let mut b = zero.clone();
        for e in b.entries.iter_mut() {
            for c in e.iter_mut() {
                *c = v[pos].clone();
                pos += 1;
            }
        }
        comps.insert(*key, b);
    }
    TwistedMorphism::from_parts(degree, p.clone(), pp.clone(), comps)
}

fn flatten_morphism(f: &TwistedMorphism, shape: &Shape) -> Vec<Int> {
    let mut v = Vec::new();
    for ((a, b), zero) in shape {
        let blk = f.component(*a, *b).unwrap_or(zero);
        v.extend(blk.entries.iter().flatten().cloned());
    }
    v
}

/// A random morphism `p -> pp` of the given degree with small entries,
/// not necessarily closed.
pub fn random_morphism<R: Rng>(
    rng: &mut R,
    j: &NegDgCategory,
    p: &TwistedComplex,
    pp: &TwistedComplex,
    degree: i64,
) -> TwistedMorphism {
    let shape = component_shape(j, p, pp, degree, i64::MAX);
    let v = random_vec(rng, shape_dim(&shape), 2);
    morphism_from_coords(p, pp, degree, &shape, &v)
}

/// A random twisted morphism `p -> pp` whose components `(a, b)` satisfy
/// `b - a <= 1`, drawn from the kernel of the morphism differential.
pub fn random_twisted_morphism<R: Rng>(
    rng: &mut R,
    j: &NegDgCategory,
    p: &TwistedComplex,
    pp: &TwistedComplex,
) -> TwistedMorphism {
    let shape = component_shape(j, p, pp, 0, 1);
    let dim = shape_dim(&shape);
    if dim == 0 {
        return TwistedMorphism::zero(0, p, pp);
    }
    let dshape = component_shape(j, p, pp, 1, i64::MAX);
    let rows = shape_dim(&dshape);
    let cols: Vec<Vec<Int>> = (0..dim)
        .map(|k| {
            let mut e = vec![Int::zero(); dim];
            e[k] = Int::from(1);
            let f = morphism_from_coords(p, pp, 0, &shape, &e);
            flatten_morphism(&morphism_differential(j, &f), &dshape)
        })
        .collect();
    let ker = kernel_basis(&IntMatrix::from_columns(rows, &cols));
    let v = random_combination(rng, &ker.columns(), dim, 2);
    morphism_from_coords(p, pp, 0, &shape, &v)
}

/// `Z --a--> Z --b--> T_m` on slots 0, 1, 2 with `T_m = (Z --m--> Z)` in
/// degrees -1, 0. When `m` divides `ab` the composite is null-homotopic and
/// a degree -1 component `q_02` is solved for; otherwise `None`.
pub fn corrected_chain_example(a: i64, b: i64, m: i64) -> Option<(ChainCategory, TwistedComplex)> {
    let t = ChainObject::new(-1, vec![1, 1], vec![IntMatrix::from_i64(&[&[m]])]).ok()?;
    let cc = build_dgchain_instance(vec!["Z".into(), "T".into()], vec![ChainObject::concentrated(1), t]).ok()?;
    let j = &cc.category;
    let q01 = j.identity(0).scale(&Int::from(a));
    let q12 = j.generator(0, 1, 0, 0).scale(&Int::from(b));
    let rhs = j.compose(&q12, &q01).ok()?.neg();
    let q02 = solve_integer(&j.hom(0, 1).differential(-1), &rhs.coords)?;
    let slots = BTreeMap::from([(0, vec![0]), (1, vec![0]), (2, vec![1])]);
    let q = BTreeMap::from([
        ((0, 1), BlockMap::from_element(&q01)),
        ((1, 2), BlockMap::from_element(&q12)),
        ((0, 2), element_block(0, 1, -1, q02)),
    ]);
    let p = TwistedComplex::new(j, slots, q).ok()?;
    Some((cc, p))
}
