//! Conversion of parsed payloads into engine objects.

use std::collections::{BTreeMap, HashMap, HashSet};

use dgweight_core::dgcore::{
    build_dgchain_instance, validate_category, ChainCategory, ChainObject, CompositionKey, HomComplex,
};
use dgweight_core::exactlinalg::{Complex, Subquotient};
use dgweight_core::kshom::{FreeChain, KsInput};
use dgweight_core::samples::additive_block;
use dgweight_core::sncweight::{BlowupData, SncConfiguration};
use dgweight_core::twisted::{validate_twisted, BlockMap};
use dgweight_core::weighthom::{h0_functor, matrix_functor, AdditiveFunctor, WeightError};
use dgweight_core::{Coefficient, Int, IntMatrix, NegDgCategory, ObjId, TwistedComplex};

use crate::schema::{
    BlowupPayload, CategorySpec, ChainSpec, CoefficientSpec, ComplexPayload, FunctorSpec, KsPayload, Matrix,
    SncPayload, TwistedPayload,
};

/// A rejected input together with the reasons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invalid(pub Vec<String>);

impl Invalid {
    pub fn one(msg: impl Into<String>) -> Self {
        Invalid(vec![msg.into()])
    }
}

pub type Built<T> = Result<T, Invalid>;

pub fn coefficient(spec: CoefficientSpec) -> Built<Coefficient> {
    match spec {
        CoefficientSpec::Z => Ok(Coefficient::Integers),
        CoefficientSpec::Zmod { n } => {
            Coefficient::modulo(n).map_err(|_| Invalid::one(format!("coefficient modulus must be at least 2, got {n}")))
        }
    }
}

/// An integer matrix of the given shape. An empty list is accepted for any
/// shape with no entries.
pub fn matrix(m: &Matrix, rows: usize, cols: usize, what: &str) -> Built<IntMatrix> {
    if m.is_empty() && rows * cols == 0 {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let got_cols = m.first().map_or(0, Vec::len);
        return Err(Invalid::one(format!("{what} is {}x{got_cols}, expected {rows}x{cols}", m.len())));
    }
    let rows_big = m.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
    Ok(IntMatrix::from_rows(rows_big, cols).expect("shape checked"))
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// A category from one of the three encodings, keeping the extra structure
/// of the first two.
#[derive(Clone, Debug)]
pub enum Category {
    Additive { ranks: Vec<usize>, category: NegDgCategory },
    Chain(ChainCategory),
    Explicit(NegDgCategory),
}

impl Category {
    pub fn dg(&self) -> &NegDgCategory {
        match self {
            Category::Additive { category, .. } | Category::Explicit(category) => category,
            Category::Chain(cc) => &cc.category,
        }
    }

    /// Objects of an additive encoding are named by their index.
    fn object(&self, name: &str) -> Built<ObjId> {
        let found = match self {
            Category::Additive { ranks, .. } => name.parse::<usize>().ok().filter(|&i| i < ranks.len()),
            _ => self.dg().object_id(name),
        };
        found.ok_or_else(|| Invalid::one(format!("unknown object \"{name}\"")))
    }
}

fn unique_names<'a>(names: impl IntoIterator<Item = &'a String>) -> Built<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Invalid::one(format!("object \"{n}\" is declared twice")));
        }
    }
    Ok(())
}

/// Builds and validates a category; axiom failures are reported one per line.
pub fn category(spec: &CategorySpec) -> Built<Category> {
    let cat = match spec {
        CategorySpec::Additive { ranks } => {
            let category = NegDgCategory::additive_free_modules(ranks);
            Category::Additive { ranks: ranks.clone(), category }
        }
        CategorySpec::Chain { objects } => {
            unique_names(objects.iter().map(|o| &o.name))?;
            let mut built = Vec::with_capacity(objects.len());
            for o in objects {
                if o.differentials.len() != o.ranks.len().saturating_sub(1) {
                    return Err(Invalid::one(format!(
                        "object \"{}\": {} terms need {} differentials, got {}",
                        o.name,
                        o.ranks.len(),
                        o.ranks.len().saturating_sub(1),
                        o.differentials.len()
                    )));
                }
                let mut diffs = Vec::with_capacity(o.differentials.len());
                for (k, m) in o.differentials.iter().enumerate() {
                    let what = format!("differential from degree {} of \"{}\"", o.lowest + k as i64, o.name);
                    diffs.push(matrix(m, o.ranks[k + 1], o.ranks[k], &what)?);
                }
                let obj = ChainObject::new(o.lowest, o.ranks.clone(), diffs)
                    .map_err(|e| Invalid::one(format!("object \"{}\": {e}", o.name)))?;
                built.push(obj);
            }
            let names = objects.iter().map(|o| o.name.clone()).collect();
            Category::Chain(build_dgchain_instance(names, built).map_err(|e| Invalid::one(e.to_string()))?)
        }
        CategorySpec::Explicit { objects, homs, compositions, identities } => {
            unique_names(objects)?;
            let n = objects.len();
            let id = |name: &str| {
                objects.iter().position(|o| o == name).ok_or_else(|| Invalid::one(format!("unknown object \"{name}\"")))
            };
            let mut hom_list = vec![HomComplex::default(); n * n];
            let mut given = HashSet::new();
            for h in homs {
                let (x, y) = (id(&h.source)?, id(&h.target)?);
                if !given.insert((x, y)) {
                    return Err(Invalid::one(format!("hom({}, {}) is given twice", h.source, h.target)));
                }
                let rank = |d: i64| h.ranks.get(&d).copied().unwrap_or(0);
                let mut diffs = BTreeMap::new();
                for (&d, m) in &h.differentials {
                    let what = format!("differential of hom({}, {}) from degree {d}", h.source, h.target);
                    diffs.insert(d, matrix(m, rank(d + 1), rank(d), &what)?);
                }
                hom_list[x * n + y] =
                    HomComplex::new(h.ranks.clone(), diffs).map_err(|e| Invalid::one(e.to_string()))?;
            }
            let mut table = HashMap::new();
            for c in compositions {
                let key = CompositionKey {
                    x: id(&c.first)?,
                    y: id(&c.middle)?,
                    z: id(&c.last)?,
                    e: c.degree_second,
                    d: c.degree_first,
                };
                let rows = hom_list[key.x * n + key.z].rank(key.e + key.d);
                let cols = hom_list[key.y * n + key.z].rank(key.e) * hom_list[key.x * n + key.y].rank(key.d);
                let what = format!("composition table {} -> {} -> {}", c.first, c.middle, c.last);
                if table.insert(key, matrix(&c.table, rows, cols, &what)?).is_some() {
                    return Err(Invalid::one(format!("{what} in degrees ({}, {}) is given twice", key.d, key.e)));
                }
            }
            let mut ids = Vec::with_capacity(n);
            for name in objects {
                let v = identities.get(name).ok_or_else(|| Invalid::one(format!("no identity for \"{name}\"")))?;
                ids.push(ints(v));
            }
            if let Some(extra) = identities.keys().find(|k| !objects.contains(k)) {
                return Err(Invalid::one(format!("identity given for unknown object \"{extra}\"")));
            }
            let category = NegDgCategory::from_parts_unchecked(objects.clone(), hom_list, table, ids)
                .map_err(|e| Invalid::one(e.to_string()))?;
            Category::Explicit(category)
        }
    };
    let report = validate_category(cat.dg());
    if !report.is_valid() {
        return Err(Invalid(report.violations.iter().map(|v| v.to_string()).collect()));
    }
    Ok(cat)
}

/// A validated twisted complex together with its category and functor.
pub struct Twisted {
    pub category: Category,
    pub complex: TwistedComplex,
    pub functor: AdditiveFunctor,
}

pub fn twisted(p: &TwistedPayload, coeff: Coefficient) -> Built<Twisted> {
    let cat = category(&p.category)?;
    let j = cat.dg();
    let mut slots: BTreeMap<i64, Vec<ObjId>> = BTreeMap::new();
    for (&i, names) in &p.slots {
        let ids = names.iter().map(|n| cat.object(n)).collect::<Built<Vec<_>>>()?;
        slots.insert(i, ids);
    }
    let empty = Vec::new();
    let mut q = BTreeMap::new();
    for spec in &p.q {
        let (i, k) = (spec.from, spec.to);
        let (src, tgt) = (slots.get(&i).unwrap_or(&empty), slots.get(&k).unwrap_or(&empty));
        let degree = i - k + 1;
        let block = match (&spec.matrix, &cat) {
            (Some(_), _) if !spec.components.is_empty() => {
                return Err(Invalid::one(format!("q_({i},{k}) has both a matrix and components")));
            }
            (Some(m), Category::Additive { ranks, .. }) => {
                if degree != 0 {
                    return Err(Invalid::one(format!(
                        "q_({i},{k}) has degree {degree}, but an additive category only has degree 0 maps"
                    )));
                }
                let rows = tgt.iter().map(|&y| ranks[y]).sum();
                let cols = src.iter().map(|&x| ranks[x]).sum();
                additive_block(ranks, src, tgt, &matrix(m, rows, cols, &format!("q_({i},{k})"))?)
            }
            (Some(_), _) => {
                return Err(Invalid::one(format!(
                    "q_({i},{k}): a single matrix is only accepted for additive categories"
                )));
            }
            (None, _) => {
                let mut b = BlockMap::zero(j, degree, src, tgt);
                for c in &spec.components {
                    if c.source >= src.len() || c.target >= tgt.len() {
                        return Err(Invalid::one(format!(
                            "q_({i},{k}) has a component at ({}, {}) outside the {}x{} slot block",
                            c.source,
                            c.target,
                            src.len(),
                            tgt.len()
                        )));
                    }
                    let (x, y) = (src[c.source], tgt[c.target]);
                    let r = j.rank(x, y, degree);
                    if c.coords.len() != r {
                        return Err(Invalid::one(format!(
                            "q_({i},{k}) component {} -> {} has {} coordinates, hom^{degree}({}, {}) has rank {r}",
                            c.source,
                            c.target,
                            c.coords.len(),
                            j.name(x),
                            j.name(y)
                        )));
                    }
                    b.entries[c.target * src.len() + c.source] = ints(&c.coords);
                }
                b
            }
        };
        if q.insert((i, k), block).is_some() {
            return Err(Invalid::one(format!("q_({i},{k}) is given twice")));
        }
    }
    let complex = TwistedComplex::new(j, slots, q).map_err(|e| Invalid::one(e.to_string()))?;
    let report = validate_twisted(j, &complex);
    if !report.is_valid() {
        return Err(Invalid(report.violations.iter().map(|v| v.to_string()).collect()));
    }
    let functor = functor(&cat, p.functor.as_ref(), coeff)?;
    Ok(Twisted { category: cat, complex, functor })
}

fn functor_error(e: WeightError) -> Invalid {
    match e {
        WeightError::FunctorInvalid(rep) => Invalid(rep.violations.iter().map(|v| v.to_string()).collect()),
        other => Invalid::one(other.to_string()),
    }
}

/// The explicit functor if given, otherwise the default for the encoding.
/// Explicit values are tensored with the coefficient ring.
pub fn functor(cat: &Category, spec: Option<&FunctorSpec>, coeff: Coefficient) -> Built<AdditiveFunctor> {
    let j = cat.dg();
    let Some(spec) = spec else {
        return match cat {
            Category::Additive { ranks, .. } => Ok(matrix_functor(ranks, coeff)),
            Category::Chain(cc) if coeff == Coefficient::Integers => {
                let f = h0_functor(cc);
                let rep = f.validate(j);
                if rep.is_valid() {
                    Ok(f)
                } else {
                    Err(Invalid(rep.violations.iter().map(|v| v.to_string()).collect()))
                }
            }
            Category::Chain(_) => {
                Err(Invalid::one("the default H^0 functor is only available over Z; supply an explicit functor"))
            }
            Category::Explicit(_) => Err(Invalid::one("an explicit category needs an explicit functor")),
        };
    };
    let n = j.object_count();
    let mut objects = Vec::with_capacity(n);
    let mut values = vec![None; n];
    for (name, g) in &spec.objects {
        values[cat.object(name)?] = Some((name.as_str(), g));
    }
    for (x, value) in values.into_iter().enumerate() {
        let (name, g) = value.ok_or_else(|| Invalid::one(format!("no functor value for \"{}\"", j.name(x))))?;
        let mut columns = Vec::with_capacity(g.relations.len() + g.generators);
        for (k, r) in g.relations.iter().enumerate() {
            if r.len() != g.generators {
                return Err(Invalid::one(format!(
                    "relation {k} of \"{name}\" has length {}, expected {}",
                    r.len(),
                    g.generators
                )));
            }
            columns.push(ints(r));
        }
        if let Some(m) = coeff.modulus() {
            for i in 0..g.generators {
                let mut col = vec![Int::from(0); g.generators];
                col[i] = m.clone();
                columns.push(col);
            }
        }
        objects.push(Subquotient::presented(&IntMatrix::from_columns(g.generators, &columns)));
    }
    let mut images: Vec<Vec<IntMatrix>> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (r, c) = (objects[y].ambient(), objects[x].ambient());
            images.push(vec![IntMatrix::zeros(r, c); j.rank(x, y, 0)]);
        }
    }
    let mut seen = HashSet::new();
    for im in &spec.images {
        let (x, y) = (cat.object(&im.source)?, cat.object(&im.target)?);
        let what = format!("image of generator {} of hom^0({}, {})", im.generator, im.source, im.target);
        if im.generator >= j.rank(x, y, 0) {
            return Err(Invalid::one(format!("{what}: hom^0 has rank {}", j.rank(x, y, 0))));
        }
        if !seen.insert((x, y, im.generator)) {
            return Err(Invalid::one(format!("{what} is given twice")));
        }
        images[x * n + y][im.generator] = matrix(&im.matrix, objects[y].ambient(), objects[x].ambient(), &what)?;
    }
    AdditiveFunctor::new(j, objects, images).map_err(functor_error)
}

pub fn complex(p: &ComplexPayload, coeff: Coefficient) -> Built<Complex> {
    if p.differentials.len() != p.ranks.len().saturating_sub(1) {
        return Err(Invalid::one(format!(
            "{} terms need {} differentials, got {}",
            p.ranks.len(),
            p.ranks.len().saturating_sub(1),
            p.differentials.len()
        )));
    }
    let mut maps = Vec::with_capacity(p.differentials.len());
    for (k, m) in p.differentials.iter().enumerate() {
        let what = format!("differential from degree {}", p.lowest + k as i64);
        maps.push(matrix(m, p.ranks[k + 1], p.ranks[k], &what)?.over(coeff));
    }
    Complex::free(coeff, p.lowest, &p.ranks, maps).map_err(|e| Invalid::one(e.to_string()))
}

pub fn snc(p: &SncPayload) -> Built<SncConfiguration> {
    let mut strata = BTreeMap::new();
    for s in &p.strata {
        if strata.insert(s.tuple.clone(), s.count).is_some() {
            return Err(Invalid::one(format!("stratum {:?} is given twice", s.tuple)));
        }
    }
    let mut incidence = BTreeMap::new();
    for i in &p.incidence {
        if incidence.insert((i.stratum.clone(), i.face.clone()), i.map.clone()).is_some() {
            return Err(Invalid::one(format!("incidence {:?} -> {:?} is given twice", i.stratum, i.face)));
        }
    }
    SncConfiguration::new(p.components, strata, incidence).map_err(|e| Invalid::one(e.to_string()))
}

pub fn blowup(p: &BlowupPayload) -> Built<BlowupData> {
    let e = snc(&p.exceptional)?;
    BlowupData::new(
        e,
        p.center_components,
        p.center_preimage_components,
        p.to_center.clone(),
        p.to_center_preimage.clone(),
    )
    .map_err(|e| Invalid::one(e.to_string()))
}

fn chain(spec: &ChainSpec, what: &str) -> Built<FreeChain> {
    let mut boundaries = Vec::with_capacity(spec.boundaries.len());
    for (i, m) in spec.boundaries.iter().enumerate() {
        let (r, c) = (spec.ranks.get(i).copied().unwrap_or(0), spec.ranks.get(i + 1).copied().unwrap_or(0));
        let deg = spec.lowest + i as i64 + 1;
        boundaries.push(matrix(m, r, c, &format!("{what} boundary out of degree {deg}"))?);
    }
    FreeChain::new(spec.lowest, spec.ranks.clone(), boundaries).map_err(|e| Invalid::one(format!("{what}: {e}")))
}

pub fn ks(p: &KsPayload, coeff: Coefficient) -> Built<KsInput> {
    let base = chain(&p.base, "base")?;
    let closure = chain(&p.closure, "closure")?;
    let mut phi = BTreeMap::new();
    for (&i, m) in &p.phi {
        phi.insert(i, matrix(m, closure.rank(i), closure.rank(i), &format!("phi in degree {i}"))?);
    }
    let mut rho = BTreeMap::new();
    for (&i, m) in &p.rho {
        rho.insert(i, matrix(m, closure.rank(i), base.rank(i), &format!("rho in degree {i}"))?);
    }
    KsInput::new(coeff, base, closure, phi, rho).map_err(|e| Invalid::one(e.to_string()))
}
