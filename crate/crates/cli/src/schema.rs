//! Problem files: a versioned envelope around a kind-specific payload.
//!
//! Degrees used as object keys are decimal strings (`"-1"`, `"0"`); matrices
//! are lists of rows.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const VERSION: &str = "1";

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: String,
    pub kind: Kind,
    pub coefficient: CoefficientSpec,
    pub payload: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Category,
    TwistedComplex,
    Complex,
    Snc,
    Blowup,
    Ks,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Category => "category",
            Kind::TwistedComplex => "twisted_complex",
            Kind::Complex => "complex",
            Kind::Snc => "snc",
            Kind::Blowup => "blowup",
            Kind::Ks => "ks",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum CoefficientSpec {
    Z,
    Zmod { n: u64 },
}

/// A negative dg-category in one of three encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "encoding", rename_all = "snake_case", deny_unknown_fields)]
pub enum CategorySpec {
    /// Free abelian groups `Z^r`; hom generators are row-major matrix units.
    Additive { ranks: Vec<usize> },
    /// Bounded complexes of free groups with their hom complexes.
    Chain { objects: Vec<ChainObjectSpec> },
    /// Hom complexes, composition tables and identities given directly.
    Explicit {
        objects: Vec<String>,
        homs: Vec<HomSpec>,
        #[serde(default)]
        compositions: Vec<CompositionSpec>,
        identities: BTreeMap<String, Vec<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainObjectSpec {
    pub name: String,
    /// Cohomological degree of the first term.
    pub lowest: i64,
    pub ranks: Vec<usize>,
    /// `differentials[i]` maps degree `lowest + i` to `lowest + i + 1`.
    #[serde(default)]
    pub differentials: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub source: String,
    pub target: String,
    #[serde(with = "degree_keys")]
    pub ranks: BTreeMap<i64, usize>,
    /// `differentials[d]` maps degree `d` to `d + 1`.
    #[serde(default, with = "degree_keys")]
    pub differentials: BTreeMap<i64, Matrix>,
}

/// Structure constants of `g ∘ f` for `f: first -> middle` of degree
/// `degree_first` and `g: middle -> last` of degree `degree_second`. Column
/// `a * rank(f) + b` holds the product of generator `a` of `g` with
/// generator `b` of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionSpec {
    pub first: String,
    pub middle: String,
    pub last: String,
    pub degree_first: i64,
    pub degree_second: i64,
    pub table: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryPayload {
    pub category: CategorySpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedPayload {
    pub category: CategorySpec,
    /// Object names in each slot.
    #[serde(with = "degree_keys")]
    pub slots: BTreeMap<i64, Vec<String>>,
    #[serde(default)]
    pub q: Vec<QSpec>,
    /// Required for explicit categories; additive categories default to
    /// `Z^r ↦ A^r` and chain categories to `H^0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<FunctorSpec>,
}

/// The component `q_{from,to}`, of degree `from - to + 1`, either as one
/// matrix (additive categories) or by hom coordinates per pair of positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QSpec {
    pub from: i64,
    pub to: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    /// Position in the source slot.
    pub source: usize,
    /// Position in the target slot.
    pub target: usize,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    /// Each object's value as `Z^generators` modulo the relation columns.
    pub objects: BTreeMap<String, PresentedGroup>,
    /// Images of degree-0 hom generators; missing ones are zero.
    #[serde(default)]
    pub images: Vec<ImageSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentedGroup {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSpec {
    pub source: String,
    pub target: String,
    pub generator: usize,
    pub matrix: Matrix,
}

/// An ordinary cochain complex of free modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexPayload {
    pub lowest: i64,
    pub ranks: Vec<usize>,
    /// `differentials[i]` maps degree `lowest + i` to `lowest + i + 1`.
    #[serde(default)]
    pub differentials: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncPayload {
    pub components: usize,
    pub strata: Vec<StratumSpec>,
    #[serde(default)]
    pub incidence: Vec<IncidenceSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub tuple: Vec<usize>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceSpec {
    pub stratum: Vec<usize>,
    pub face: Vec<usize>,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupPayload {
    pub exceptional: SncPayload,
    pub center_components: usize,
    pub center_preimage_components: usize,
    pub to_center: Vec<usize>,
    pub to_center_preimage: Vec<usize>,
}

/// A complex in homological indexing: `boundaries[i]` maps degree
/// `lowest + i + 1` to `lowest + i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub lowest: i64,
    pub ranks: Vec<usize>,
    #[serde(default)]
    pub boundaries: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsPayload {
    pub base: ChainSpec,
    pub closure: ChainSpec,
    #[serde(default, with = "degree_keys")]
    pub phi: BTreeMap<i64, Matrix>,
    #[serde(default, with = "degree_keys")]
    pub rho: BTreeMap<i64, Matrix>,
}

/// Maps keyed by degree, written with decimal string keys. Parsing the keys
/// by hand keeps them working inside internally tagged enums.
mod degree_keys {
    use std::collections::BTreeMap;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: Serialize, S: Serializer>(map: &BTreeMap<i64, T>, s: S) -> Result<S::Ok, S::Error> {
        map.serialize(s)
    }

    pub fn deserialize<'de, T: Deserialize<'de>, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, T>, D::Error> {
        let raw = BTreeMap::<String, T>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| match k.parse::<i64>() {
                Ok(i) if i.to_string() == k => Ok((i, v)),
                _ => Err(D::Error::custom(format!("degree key \"{k}\" is not a canonical integer"))),
            })
            .collect()
    }
}

/// Canonical rendering: sorted keys, two-space indentation, trailing newline.
pub fn canonical_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

/// The canonical text of a parsed problem file.
pub fn canonicalize(file: &ProblemFile) -> String {
    canonical_json(&serde_json::to_value(file).expect("problem files always serialize"))
}
