use std::collections::BTreeMap;

use super::{sign, BlockMap, TwistedComplex, TwistedError, TwistedMorphism};
use crate::dgcore::{ChainCategory, ObjId};
use crate::exactlinalg::{Coefficient, Complex, DegreeMaps, IntMatrix, LinalgError};

/// Position of every summand `X^p` (object `x` in slot `i`) of the total
/// complex: `(total degree, offset)` keyed by `(slot, index in slot, p)`.
struct TotLayout {
    lowest: i64,
    ranks: Vec<usize>,
    offsets: BTreeMap<(i64, usize, i64), usize>,
}

impl TotLayout {
    fn new(cc: &ChainCategory, p: &TwistedComplex) -> Self {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (&i, s) in p.slots() {
            for &x in s {
                let o = cc.object(x);
                lo = lo.min(i + o.lowest());
                hi = hi.max(i + o.highest());
            }
        }
        if lo > hi {
            return TotLayout { lowest: 0, ranks: Vec::new(), offsets: BTreeMap::new() };
        }
        let mut ranks = vec![0; (hi - lo + 1) as usize];
        let mut offsets = BTreeMap::new();
        for (&i, s) in p.slots() {
            for (k, &x) in s.iter().enumerate() {
                let o = cc.object(x);
                for q in o.degrees() {
                    let n = (i + q - lo) as usize;
                    offsets.insert((i, k, q), ranks[n]);
                    ranks[n] += o.rank_at(q);
                }
            }
        }
        TotLayout { lowest: lo, ranks, offsets }
    }

    fn rank(&self, n: i64) -> usize {
        let k = n - self.lowest;
        if k < 0 || k as usize >= self.ranks.len() {
            0
        } else {
            self.ranks[k as usize]
        }
    }

    fn offset(&self, i: i64, k: usize, q: i64) -> Option<usize> {
        self.offsets.get(&(i, k, q)).copied()
    }
}

/// Pastes the graded maps of `b` (from slot `a` of the source to slot `c`
/// of the target) into the total matrices, scaled by `s`.
fn paste_block(
    cc: &ChainCategory,
    b: &BlockMap,
    (a, c): (i64, i64),
    (src, tgt): (&TotLayout, &TotLayout),
    s: &crate::exactlinalg::Int,
    out: &mut BTreeMap<i64, IntMatrix>,
) {
    let ns = b.source.len();
    for t in 0..b.target.len() {
        for k in 0..ns {
            let e = b.entry(t, k);
            if e.is_zero() {
                continue;
            }
            for (q, m) in cc.graded(&e) {
                let n = a + q;
                let (Some(co), Some(ro)) = (src.offset(a, k, q), tgt.offset(c, t, q + b.degree)) else {
                    continue;
                };
                let mat = out.get_mut(&n).expect("degree inside the layout");
                let cur = mat.block(ro, co, m.rows(), m.cols());
                mat.paste(ro, co, &(&cur + &m.scale(s)));
            }
        }
    }
}

fn slot_objects(p: &TwistedComplex) -> impl Iterator<Item = (i64, usize, ObjId)> + '_ {
    p.slots().iter().flat_map(|(&i, s)| s.iter().enumerate().map(move |(k, &x)| (i, k, x)))
}

/// The total complex of a twisted complex over a category of chain
/// complexes: `Tot(P)^n = ⊕_i (P^i)^{n-i}` with differential
/// `Σ_i (-1)^i d_{P^i} + Σ q_ij`. Summands are ordered by slot, then by
/// position in the slot, then by internal degree.
pub fn totalize(cc: &ChainCategory, p: &TwistedComplex) -> Result<Complex, TwistedError> {
    let l = TotLayout::new(cc, p);
    let hi = l.lowest + l.ranks.len() as i64 - 1;
    let mut maps: BTreeMap<i64, IntMatrix> =
        (l.lowest..hi).map(|n| (n, IntMatrix::zeros(l.rank(n + 1), l.rank(n)))).collect();
    for (i, k, x) in slot_objects(p) {
        let o = cc.object(x);
        let s = sign(i);
        for q in o.degrees() {
            let d = o.d(q);
            if d.rows() == 0 || d.cols() == 0 {
                continue;
            }
            let (co, ro) = (l.offset(i, k, q).unwrap(), l.offset(i, k, q + 1).unwrap());
            maps.get_mut(&(i + q)).expect("degree inside the layout").paste(ro, co, &d.scale(&s));
        }
    }
    let one = crate::exactlinalg::Int::from(1);
    for (&(i, k), b) in p.q_blocks() {
        paste_block(cc, b, (i, k), (&l, &l), &one, &mut maps);
    }
    Complex::free(Coefficient::Integers, l.lowest, &l.ranks, maps.into_values().collect()).map_err(|e| match e {
        LinalgError::CompositionNotZero(n) => {
            TwistedError::SignInconsistency(format!("D∘D ≠ 0 starting in total degree {n}"))
        }
        other => TwistedError::SignInconsistency(other.to_string()),
    })
}

/// The degreewise matrices of `Tot(f)`, a map `Tot(P)^n -> Tot(P')^{n+l}`
/// for `f` of degree `l`; a chain map whenever `f` is twisted.
pub fn totalize_morphism(cc: &ChainCategory, f: &TwistedMorphism) -> DegreeMaps {
    let (ls, lt) = (TotLayout::new(cc, &f.source), TotLayout::new(cc, &f.target));
    let hi = ls.lowest + ls.ranks.len() as i64 - 1;
    let mut maps: BTreeMap<i64, IntMatrix> =
        (ls.lowest..=hi).map(|n| (n, IntMatrix::zeros(lt.rank(n + f.degree), ls.rank(n)))).collect();
    let one = crate::exactlinalg::Int::from(1);
    for (&(a, b), blk) in f.components() {
        paste_block(cc, blk, (a, b), (&ls, &lt), &one, &mut maps);
    }
    let mut out = DegreeMaps::new(f.degree);
    for (n, m) in maps {
        out.insert(n, m);
    }
    out
}
