use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::{CompositionKey, DgError, HomComplex, HomElement, NegDgCategory, ObjId};
use crate::exactlinalg::{Int, IntMatrix, Lattice};

/// A bounded cochain complex of finite free abelian groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainObject {
    lowest: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` maps degree `lowest + k` to `lowest + k + 1`.
    diffs: Vec<IntMatrix>,
}

impl ChainObject {
    pub fn new(lowest: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, DgError> {
        if diffs.len() != ranks.len().saturating_sub(1) {
            return Err(DgError::NotAComplex(format!(
                "{} terms need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, m) in diffs.iter().enumerate() {
            if m.rows() != ranks[k + 1] || m.cols() != ranks[k] {
                return Err(DgError::NotAComplex(format!(
                    "differential in degree {} has shape {}x{}, expected {}x{}",
                    lowest + k as i64,
                    m.rows(),
                    m.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        for k in 1..diffs.len() {
            if !(&diffs[k] * &diffs[k - 1]).is_zero() {
                return Err(DgError::NotAComplex(format!("d∘d ≠ 0 starting in degree {}", lowest + k as i64 - 1)));
            }
        }
        let diffs = diffs.into_iter().map(|m| m.lift()).collect();
        Ok(ChainObject { lowest, ranks, diffs })
    }

    /// `Z^rank` in degree 0.
    pub fn concentrated(rank: usize) -> Self {
        ChainObject { lowest: 0, ranks: vec![rank], diffs: Vec::new() }
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.ranks.len() as i64 - 1
    }

    pub fn rank_at(&self, p: i64) -> usize {
        let i = p - self.lowest;
        if i < 0 || i as usize >= self.ranks.len() {
            0
        } else {
            self.ranks[i as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Differential out of degree `p`.
    pub fn d(&self, p: i64) -> IntMatrix {
        let i = p - self.lowest;
        if i >= 0 && (i as usize) < self.diffs.len() {
            self.diffs[i as usize].clone()
        } else {
            IntMatrix::zeros(self.rank_at(p + 1), self.rank_at(p))
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lowest..=self.highest()
    }
}

/// A degree-`d` graded map `X -> Y` as blocks `X^p -> Y^{p+d}` keyed by `p`.
pub type GradedMap = BTreeMap<i64, IntMatrix>;

#[derive(Clone, Debug)]
struct Layout {
    /// `(p, rows, cols, offset)` for each nonzero block.
    blocks: Vec<(i64, usize, usize, usize)>,
    dim: usize,
}

fn layout(x: &ChainObject, y: &ChainObject, d: i64) -> Layout {
    let mut blocks = Vec::new();
    let mut off = 0;
    for p in x.degrees() {
        let (r, c) = (y.rank_at(p + d), x.rank_at(p));
        if r * c > 0 {
            blocks.push((p, r, c, off));
            off += r * c;
        }
    }
    Layout { blocks, dim: off }
}

fn unpack(l: &Layout, v: &[Int]) -> GradedMap {
    let mut out = BTreeMap::new();
    for &(p, r, c, off) in &l.blocks {
        let m = IntMatrix::new(r, c, v[off..off + r * c].to_vec()).expect("block size");
        if !m.is_zero() {
            out.insert(p, m);
        }
    }
    out
}

fn pack(l: &Layout, g: &GradedMap) -> Vec<Int> {
    let mut v = vec![Int::zero(); l.dim];
    for &(p, r, c, off) in &l.blocks {
        if let Some(m) = g.get(&p) {
            debug_assert_eq!((m.rows(), m.cols()), (r, c));
            v[off..off + r * c].clone_from_slice(m.entries());
        }
    }
    v
}

fn add_block(g: &mut GradedMap, p: i64, m: IntMatrix) {
    if m.is_zero() {
        return;
    }
    match g.remove(&p) {
        Some(old) => {
            let s = &old + &m;
            if !s.is_zero() {
                g.insert(p, s);
            }
        }
        None => {
            g.insert(p, m);
        }
    }
}

/// `D f = d_Y f - (-1)^d f d_X` for a degree-`d` graded map.
pub fn graded_differential(x: &ChainObject, y: &ChainObject, d: i64, f: &GradedMap) -> GradedMap {
    let mut out = GradedMap::new();
    let neg = d.rem_euclid(2) == 0;
    for (&p, fp) in f {
        // d_Y^{p+d} f_p lands in the block at p.
        let dy = y.d(p + d);
        if dy.rows() > 0 {
            add_block(&mut out, p, &dy * fp);
        }
        // f_p d_X^{p-1} lands in the block at p - 1.
        let dx = x.d(p - 1);
        if dx.cols() > 0 {
            let t = fp * &dx;
            add_block(&mut out, p - 1, if neg { -&t } else { t });
        }
    }
    out
}

/// `(g ∘ f)_p = g_{p+d} f_p` for `f` of degree `d`.
pub fn graded_compose(g: &GradedMap, f: &GradedMap, d: i64) -> GradedMap {
    let mut out = GradedMap::new();
    for (&p, fp) in f {
        if let Some(gp) = g.get(&(p + d)) {
            add_block(&mut out, p, gp * fp);
        }
    }
    out
}

/// A dg-category of bounded complexes together with the data needed to
/// realize its hom elements as graded maps.
#[derive(Clone, Debug)]
pub struct ChainCategory {
    pub category: NegDgCategory,
    objects: Vec<ChainObject>,
    /// Chain-map lattice in degree-0 graded coordinates, per ordered pair.
    cycles: Vec<Lattice>,
}

impl ChainCategory {
    pub fn objects(&self) -> &[ChainObject] {
        &self.objects
    }

    pub fn object(&self, x: ObjId) -> &ChainObject {
        &self.objects[x]
    }

    fn pair(&self, x: ObjId, y: ObjId) -> usize {
        x * self.objects.len() + y
    }

    /// The graded map represented by a hom element.
    pub fn graded(&self, f: &HomElement) -> GradedMap {
        let (x, y) = (&self.objects[f.source], &self.objects[f.target]);
        let l = layout(x, y, f.degree);
        if f.degree < 0 {
            return unpack(&l, &f.coords);
        }
        if f.degree > 0 {
            return GradedMap::new();
        }
        let lat = &self.cycles[self.pair(f.source, f.target)];
        let mut v = vec![Int::zero(); l.dim];
        for (c, b) in f.coords.iter().zip(lat.basis()) {
            if c.is_zero() {
                continue;
            }
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += c * bi;
            }
        }
        unpack(&l, &v)
    }

    /// Expresses a graded map as a hom element; `None` for a non-closed degree-0 map.
    pub fn element(&self, x: ObjId, y: ObjId, d: i64, g: &GradedMap) -> Option<HomElement> {
        if d > 0 {
            return g.is_empty().then(|| self.category.zero(x, y, d));
        }
        let l = layout(&self.objects[x], &self.objects[y], d);
        let v = pack(&l, g);
        let coords = if d < 0 { v } else { self.cycles[self.pair(x, y)].coordinates(&v)? };
        Some(HomElement { source: x, target: y, degree: d, coords })
    }
}

/// Builds the negative dg-category whose objects are the given complexes,
/// with `hom^d` the graded maps of degree `d < 0` and `hom^0` the chain maps.
///
/// Generators of `hom^d`, `d < 0`, are matrix units ordered by source degree
/// and then row-major; generators of `hom^0` are the Hermite basis of the
/// chain-map lattice.
pub fn build_dgchain_instance(names: Vec<String>, objects: Vec<ChainObject>) -> Result<ChainCategory, DgError> {
    let n = objects.len();
    if names.len() != n {
        return Err(DgError::Malformed(format!("{} names for {n} objects", names.len())));
    }
    let mut homs = Vec::with_capacity(n * n);
    let mut cycles = Vec::with_capacity(n * n);
    // Graded representatives of every generator, keyed by (pair, degree).
    let mut gens: HashMap<(usize, i64), Vec<GradedMap>> = HashMap::new();
    for xi in 0..n {
        for yi in 0..n {
            let (x, y) = (&objects[xi], &objects[yi]);
            let pair = xi * n + yi;
            let min_d = y.lowest() - x.highest();
            let mut ranks = BTreeMap::new();
            let mut diffs = BTreeMap::new();
            let l0 = layout(x, y, 0);
            let l1 = layout(x, y, 1);
            let d0_cols: Vec<Vec<Int>> = (0..l0.dim)
                .map(|k| {
                    let mut e = vec![Int::zero(); l0.dim];
                    e[k] = Int::from(1);
                    pack(&l1, &graded_differential(x, y, 0, &unpack(&l0, &e)))
                })
                .collect();
            let d0 = IntMatrix::from_columns(l1.dim, &d0_cols);
            let z0 = Lattice::full(l0.dim).preimage(&d0, &Lattice::zero(l1.dim));
            ranks.insert(0, z0.rank());
            gens.insert((pair, 0), z0.basis().iter().map(|b| unpack(&l0, b)).collect());
            for d in min_d..0 {
                let l = layout(x, y, d);
                if l.dim == 0 {
                    continue;
                }
                ranks.insert(d, l.dim);
                let lt = layout(x, y, d + 1);
                let mut elems = Vec::with_capacity(l.dim);
                let mut cols = Vec::with_capacity(l.dim);
                for k in 0..l.dim {
                    let mut e = vec![Int::zero(); l.dim];
                    e[k] = Int::from(1);
                    let g = unpack(&l, &e);
                    let dg = graded_differential(x, y, d, &g);
                    let v = pack(&lt, &dg);
                    let col = if d + 1 == 0 { z0.coordinates(&v).expect("boundaries are chain maps") } else { v };
                    cols.push(col);
                    elems.push(g);
                }
                let target_rank = if d + 1 == 0 { z0.rank() } else { lt.dim };
                diffs.insert(d, IntMatrix::from_columns(target_rank, &cols));
                gens.insert((pair, d), elems);
            }
            homs.push(HomComplex::new(ranks, diffs)?);
            cycles.push(z0);
        }
    }
    let mut composition = HashMap::new();
    for xi in 0..n {
        for yi in 0..n {
            for zi in 0..n {
                let (pf, pg, pt) = (xi * n + yi, yi * n + zi, xi * n + zi);
                let hf = &homs[pf];
                let hg = &homs[pg];
                for e in hg.degrees().collect::<Vec<_>>() {
                    for d in hf.degrees().collect::<Vec<_>>() {
                        let rt = homs[pt].rank(e + d);
                        if rt == 0 {
                            continue;
                        }
                        let (gs, fs) = (&gens[&(pg, e)], &gens[&(pf, d)]);
                        let lt = layout(&objects[xi], &objects[zi], e + d);
                        let mut cols = Vec::with_capacity(gs.len() * fs.len());
                        for g in gs {
                            for f in fs {
                                let v = pack(&lt, &graded_compose(g, f, d));
                                let col = if e + d == 0 {
                                    cycles[pt].coordinates(&v).expect("composites of chain maps are chain maps")
                                } else {
                                    v
                                };
                                cols.push(col);
                            }
                        }
                        let t = IntMatrix::from_columns(rt, &cols);
                        if !t.is_zero() {
                            composition.insert(CompositionKey { x: xi, y: yi, z: zi, e, d }, t);
                        }
                    }
                }
            }
        }
    }
    let identities = (0..n)
        .map(|xi| {
            let x = &objects[xi];
            let id: GradedMap =
                x.degrees().filter(|&p| x.rank_at(p) > 0).map(|p| (p, IntMatrix::identity(x.rank_at(p)))).collect();
            let l0 = layout(x, x, 0);
            cycles[xi * n + xi].coordinates(&pack(&l0, &id)).expect("identity is a chain map")
        })
        .collect();
    let category = NegDgCategory::from_parts_unchecked(names, homs, composition, identities)?;
    Ok(ChainCategory { category, objects, cycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::validate_category;

    fn two_term() -> ChainObject {
        ChainObject::new(-1, vec![1, 1], vec![IntMatrix::from_i64(&[&[2]])]).unwrap()
    }

    #[test]
    fn single_integer_object() {
        let cc = build_dgchain_instance(vec!["Z".into()], vec![ChainObject::concentrated(1)]).unwrap();
        let j = &cc.category;
        assert_eq!(j.hom(0, 0).ranks(), &BTreeMap::from([(0, 1)]));
        assert_eq!(j.identity(0).coords, vec![Int::from(1)]);
    }

    #[test]
    fn two_term_against_integer() {
        let cc = build_dgchain_instance(vec!["A".into(), "B".into()], vec![two_term(), ChainObject::concentrated(1)])
            .unwrap();
        let j = &cc.category;
        // Chain maps A -> B must kill the image of 2, so there are none.
        assert_eq!(j.rank(0, 1, 0), 0);
        // B -> A: chain maps Z -> Z in degree 0, and one map B^0 -> A^{-1}.
        assert_eq!(j.rank(1, 0, 0), 1);
        assert_eq!(j.rank(1, 0, -1), 1);
        let h = j.generator(1, 0, -1, 0);
        assert_eq!(j.differential(&h).coords, vec![Int::from(2)]);
        assert!(validate_category(j).is_valid());
    }

    #[test]
    fn composite_of_chain_maps_is_product() {
        let x = ChainObject::new(-1, vec![1, 2], vec![IntMatrix::from_i64(&[&[1], &[1]])]).unwrap();
        let cc = build_dgchain_instance(vec!["X".into()], vec![x]).unwrap();
        let j = &cc.category;
        let r = j.rank(0, 0, 0);
        assert!(r >= 2);
        for a in 0..r {
            for b in 0..r {
                let (g, f) = (j.generator(0, 0, 0, a), j.generator(0, 0, 0, b));
                let gf = cc.graded(&j.compose(&g, &f).unwrap());
                let (gg, ff) = (cc.graded(&g), cc.graded(&f));
                for p in [-1, 0] {
                    let expect = match (gg.get(&p), ff.get(&p)) {
                        (Some(a), Some(b)) => a * b,
                        _ => IntMatrix::zeros(x_rank(p), x_rank(p)),
                    };
                    let got = gf.get(&p).cloned().unwrap_or_else(|| IntMatrix::zeros(x_rank(p), x_rank(p)));
                    assert_eq!(got, expect);
                }
            }
        }
        fn x_rank(p: i64) -> usize {
            if p == -1 {
                1
            } else {
                2
            }
        }
    }

    #[test]
    fn rejects_non_complex() {
        let bad = ChainObject::new(-2, vec![1, 1, 1], vec![IntMatrix::from_i64(&[&[1]]), IntMatrix::from_i64(&[&[1]])]);
        assert!(matches!(bad, Err(DgError::NotAComplex(_))));
    }
}
