//! JSON instance files: group, endomorphism, elements, optional chain and
//! transcript. Integers may be JSON numbers below `2^63` or decimal strings.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Result, SdlpError};
use crate::ff::{Fq, Matrix, PrimeField};
use crate::groups::{
    Backend, Element, Endo, Group, HeisenbergTop, Hom, IdentityHom, LinearHom, MatrixAuto, Projection, SdlpInstance,
    TrivialHom,
};
use crate::oracles::factor_integer;
use crate::protocol::{ExchangeTranscript, Secrets};
use crate::solvers::{CaseTag, ChainLevel, NormalChain};

const NUMBER_LIMIT: u128 = 1 << 63;

/// A non-negative integer read from a number or a decimal string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub u128);

impl Int {
    fn small(self) -> Result<u64> {
        u64::try_from(self.0).map_err(|_| SdlpError::malformed(format!("{} does not fit in 64 bits", self.0)))
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 < NUMBER_LIMIT {
            s.serialize_u64(self.0 as u64)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer below 2^63 or a decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                if (v as u128) < NUMBER_LIMIT {
                    Ok(Int(v as u128))
                } else {
                    Err(E::custom("numbers of 2^63 or more must be written as strings"))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                u64::try_from(v).map_err(|_| E::custom("negative integer")).and_then(|v| self.visit_u64(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(E::custom(format!("not a decimal integer: {v:?}")));
                }
                v.parse().map(Int).map_err(|_| E::custom(format!("integer out of range: {v}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// Converts a `u128` for output: a number below `2^63`, else a string.
pub fn int_value(x: u128) -> Value {
    serde_json::to_value(Int(x)).expect("integer serializes")
}

/// A matrix as rows, or a flat code-word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Flat(Vec<Int>),
    Rows(Vec<Vec<Int>>),
}

impl ElemSpec {
    pub fn from_element(e: &Element) -> Self {
        ElemSpec::Flat(e.0.iter().map(|x| Int(*x as u128)).collect())
    }

    pub fn element(&self) -> Result<Element> {
        let flat: Vec<Int> = match self {
            ElemSpec::Flat(v) => v.clone(),
            ElemSpec::Rows(rows) => rows.iter().flatten().copied().collect(),
        };
        Ok(Element(flat.into_iter().map(Int::small).collect::<Result<_>>()?))
    }

    pub fn square_matrix(&self) -> Result<Matrix<u64>> {
        let e = self.element()?;
        let n = e.0.len();
        let d = (n as f64).sqrt().round() as usize;
        if d == 0 || d * d != n {
            return Err(SdlpError::malformed("matrix must be square and non-empty"));
        }
        Ok(Matrix::new(d, d, e.0))
    }

    fn matrix(&self) -> Result<Matrix<u64>> {
        match self {
            ElemSpec::Rows(rows) => {
                let r: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|row| row.iter().copied().map(Int::small).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                let c = r.first().map_or(0, Vec::len);
                if r.is_empty() || r.iter().any(|row| row.len() != c) {
                    return Err(SdlpError::malformed("ragged or empty matrix"));
                }
                Ok(Matrix::from_rows(r))
            }
            ElemSpec::Flat(_) => self.square_matrix(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<ElemSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<GroupSpec>>,
}

fn need<T: Copy>(v: Option<T>, what: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| SdlpError::malformed(format!("group family {family} needs {what}")))
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        let fam = self.family.as_str();
        let group = match fam {
            "cyclic" => Group::cyclic(need(self.n, "n", fam)?.small()?)?,
            "vector" => Group::vector(
                need(self.p, "p", fam)?.small()?,
                need(self.d, "d", fam)?.small()? as usize,
            )?,
            "heisenberg" => Group::heisenberg(need(self.p, "p", fam)?.small()?)?,
            "matrix" => {
                let q = need(self.q.or(self.p), "q", fam)?.small()?;
                let d = need(self.d, "d", fam)?.small()? as usize;
                let gens = self
                    .generators
                    .as_ref()
                    .ok_or_else(|| SdlpError::malformed("matrix group needs generators"))?;
                let mats = gens.iter().map(ElemSpec::matrix).collect::<Result<_>>()?;
                return Group::matrix(Fq::new(q)?, d, mats);
            }
            "product" => {
                let parts = self
                    .factors
                    .as_ref()
                    .ok_or_else(|| SdlpError::malformed("product group needs factors"))?;
                Group::product(parts.iter().map(GroupSpec::build).collect::<Result<_>>()?)?
            }
            other => return Err(SdlpError::malformed(format!("unknown group family {other}"))),
        };
        match &self.generators {
            Some(gens) => {
                let elems: Vec<Element> = gens.iter().map(ElemSpec::element).collect::<Result<_>>()?;
                for e in &elems {
                    check_codeword(&group, e)?;
                }
                Ok(group.subgroup(elems))
            }
            None => Ok(group),
        }
    }
}

/// Rejects code-words of the wrong width or out-of-range entries.
pub fn check_codeword(group: &Group, e: &Element) -> Result<()> {
    if e.0.len() != group.width() {
        return Err(SdlpError::malformed(format!(
            "element {e} has {} entries, expected {}",
            e.0.len(),
            group.width()
        )));
    }
    if !group.contains(e) {
        return Err(SdlpError::malformed(format!("element {e} is not a valid group element")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Int>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixAutoData {
    conjugator: ElemSpec,
    #[serde(default)]
    frobenius: u32,
    #[serde(default)]
    inverse_transpose: bool,
}

fn data<T: for<'de> Deserialize<'de>>(spec: &SigmaSpec) -> Result<T> {
    let v = spec
        .data
        .clone()
        .ok_or_else(|| SdlpError::malformed(format!("sigma kind {} needs data", spec.kind)))?;
    serde_json::from_value(v).map_err(|e| SdlpError::malformed(format!("sigma data: {e}")))
}

fn field_of(group: &Group) -> Result<Fq> {
    match group.backend() {
        Backend::Vector { field, .. } | Backend::Heisenberg { field } => Fq::new(field.p()),
        Backend::Matrix { fq, .. } => Ok(fq.clone()),
        _ => Err(SdlpError::malformed("this sigma kind needs a vector or matrix group")),
    }
}

impl SigmaSpec {
    pub fn build(&self, group: &Group) -> Result<Endo> {
        let sigma = self.build_rep(group)?;
        Ok(match self.order {
            Some(o) if o.0 == 0 => return Err(SdlpError::malformed("declared order must be positive")),
            Some(o) => sigma.with_order(factor_integer(o.0, 0)),
            None => sigma,
        })
    }

    fn build_rep(&self, group: &Group) -> Result<Endo> {
        match self.kind.as_str() {
            "identity" => Ok(Endo::identity()),
            "power" => {
                let k: Int = data(self)?;
                let modulus = match group.backend() {
                    Backend::Cyclic { n, .. } => *n,
                    Backend::Vector { field, .. } => field.p(),
                    _ => return Err(SdlpError::malformed("power maps need an abelian group")),
                };
                Ok(Endo::power((k.0 % modulus as u128) as u64, modulus))
            }
            "linear" => {
                let m = data::<ElemSpec>(self)?.matrix()?;
                let Backend::Vector { field, d } = group.backend() else {
                    return Err(SdlpError::malformed("linear maps need a vector group"));
                };
                if m.rows() != *d || m.cols() != *d {
                    return Err(SdlpError::malformed("linear map has wrong dimensions"));
                }
                Endo::linear(*field, m)
            }
            "conjugation" => {
                let fq = field_of(group)?;
                Endo::conjugation(fq, data::<ElemSpec>(self)?.matrix()?)
            }
            "matrix-auto" => {
                let fq = field_of(group)?;
                let d: MatrixAutoData = data(self)?;
                Ok(Endo::matrix_auto(MatrixAuto::new(fq, d.conjugator.matrix()?, d.frobenius, d.inverse_transpose)?))
            }
            "table" => {
                let pairs: Vec<(ElemSpec, ElemSpec)> = data(self)?;
                let mut map = HashMap::new();
                for (x, y) in pairs {
                    let (x, y) = (x.element()?, y.element()?);
                    check_codeword(group, &x)?;
                    check_codeword(group, &y)?;
                    map.insert(x.0, y);
                }
                let elems = group.enumerate(crate::groups::TABLE_LIMIT)?;
                if elems.iter().any(|x| !map.contains_key(&x.0)) {
                    return Err(SdlpError::malformed("table does not cover the group"));
                }
                Ok(Endo::from_table(map))
            }
            "product" => {
                let parts: Vec<SigmaSpec> = data(self)?;
                let factors = group
                    .factors()
                    .ok_or_else(|| SdlpError::malformed("product sigma needs a product group"))?;
                if parts.len() != factors.len() {
                    return Err(SdlpError::malformed("product sigma has the wrong number of parts"));
                }
                let parts = parts.iter().zip(factors).map(|(s, f)| s.build(f)).collect::<Result<_>>()?;
                Ok(Endo::product(parts))
            }
            other => Err(SdlpError::malformed(format!("unknown sigma kind {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ElemSpec>,
}

impl PsiSpec {
    pub fn build(&self, group: &Group) -> Result<Arc<dyn Hom>> {
        Ok(match self.kind.as_str() {
            "identity" => Arc::new(IdentityHom::new(group.clone())),
            "trivial" => Arc::new(TrivialHom::default()),
            "projection" => {
                let keep = self.keep.clone().ok_or_else(|| SdlpError::malformed("projection needs keep"))?;
                Arc::new(Projection::new(group, keep)?)
            }
            "heisenberg-top" => {
                let Backend::Heisenberg { field } = group.backend() else {
                    return Err(SdlpError::malformed("heisenberg-top needs a Heisenberg group"));
                };
                Arc::new(HeisenbergTop::new(field.p())?)
            }
            "linear" => {
                let Backend::Vector { field, d } = group.backend() else {
                    return Err(SdlpError::malformed("linear psi needs a vector group"));
                };
                let m = self.matrix.as_ref().ok_or_else(|| SdlpError::malformed("linear psi needs matrix"))?.matrix()?;
                if m.cols() != *d {
                    return Err(SdlpError::malformed("linear psi has wrong width"));
                }
                Arc::new(LinearHom::new(PrimeField::new(field.p())?, m)?)
            }
            other => return Err(SdlpError::malformed(format!("unknown psi kind {other}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    /// Generators of `M_i`; omitted for the whole group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<ElemSpec>>,
    pub psi: PsiSpec,
    pub tag: String,
}

/// Either `"builtin"` or an explicit list of levels, bottom first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainSpec {
    Named(String),
    Levels(Vec<LevelSpec>),
}

impl ChainSpec {
    pub fn build(&self, group: &Group) -> Result<NormalChain> {
        match self {
            ChainSpec::Named(s) if s == "builtin" => {
                NormalChain::builtin(group).ok_or_else(|| SdlpError::NotApplicable("no built-in chain".into()))
            }
            ChainSpec::Named(s) => Err(SdlpError::malformed(format!("unknown chain {s}"))),
            ChainSpec::Levels(levels) => {
                let mut out = Vec::new();
                for l in levels {
                    let subgroup = match &l.subgroup {
                        Some(gens) => {
                            let elems: Vec<Element> = gens.iter().map(ElemSpec::element).collect::<Result<_>>()?;
                            for e in &elems {
                                check_codeword(group, e)?;
                            }
                            group.subgroup(elems)
                        }
                        None => group.clone(),
                    };
                    out.push(ChainLevel { subgroup, psi: l.psi.build(group)?, tag: l.tag.parse::<CaseTag>()? });
                }
                NormalChain::new(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecretsSpec {
    pub x: Int,
    pub y: Int,
    pub key: ElemSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptSpec {
    pub a: ElemSpec,
    pub b: ElemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secrets: Option<SecretsSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub group: GroupSpec,
    pub sigma: SigmaSpec,
    pub g: ElemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<ElemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSpec>,
    /// Composition data for the solvable solver, in the chain format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<ChainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<TranscriptSpec>,
}

/// The objects described by an instance file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub group: Group,
    pub sigma: Endo,
    pub g: Element,
    pub h: Option<Element>,
    pub chain: Option<NormalChain>,
    pub series: Option<NormalChain>,
    pub transcript: Option<ExchangeTranscript>,
}

impl Loaded {
    pub fn instance(&self) -> Result<SdlpInstance> {
        let h = self.h.clone().ok_or_else(|| SdlpError::malformed("instance needs h"))?;
        Ok(SdlpInstance::new(self.group.clone(), self.sigma.clone(), self.g.clone(), h))
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| SdlpError::malformed(format!("instance file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn load(&self) -> Result<Loaded> {
        if self.chain.is_some() && self.series.is_some() {
            return Err(SdlpError::malformed("give either chain or series, not both"));
        }
        let group = self.group.build()?;
        let sigma = self.sigma.build(&group)?;
        let elem = |e: &ElemSpec| -> Result<Element> {
            let x = e.element()?;
            check_codeword(&group, &x)?;
            Ok(x)
        };
        let g = elem(&self.g)?;
        let h = self.h.as_ref().map(elem).transpose()?;
        let chain = self.chain.as_ref().map(|c| c.build(&group)).transpose()?;
        let series = self.series.as_ref().map(|c| c.build(&group)).transpose()?;
        let transcript = match &self.transcript {
            None => None,
            Some(t) => {
                let a = elem(&t.a)?;
                let b = elem(&t.b)?;
                let (secrets, key) = match &t.secrets {
                    Some(s) => (Some(Secrets { x: s.x.0, y: s.y.0 }), elem(&s.key)?),
                    None => (None, group.identity()),
                };
                Some(ExchangeTranscript {
                    group: group.clone(),
                    sigma: sigma.clone(),
                    g: g.clone(),
                    a,
                    b,
                    secrets,
                    k_a: key.clone(),
                    k_b: key,
                })
            }
        };
        Ok(Loaded { group, sigma, g, h, chain, series, transcript })
    }

    /// This document with `h` dropped and the transcript attached.
    pub fn with_transcript(&self, t: &ExchangeTranscript, with_secrets: bool) -> Self {
        let secrets = match (with_secrets, t.secrets) {
            (true, Some(s)) => Some(SecretsSpec { x: Int(s.x), y: Int(s.y), key: ElemSpec::from_element(&t.k_a) }),
            _ => None,
        };
        Self {
            h: None,
            transcript: Some(TranscriptSpec {
                a: ElemSpec::from_element(&t.a),
                b: ElemSpec::from_element(&t.b),
                secrets,
            }),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_as_numbers_or_strings() {
        let a: Int = serde_json::from_str("42").unwrap();
        let b: Int = serde_json::from_str("\"42\"").unwrap();
        assert_eq!(a, b);
        let big: Int = serde_json::from_str("\"340282366920938463463374607431768211455\"").unwrap();
        assert_eq!(big.0, u128::MAX);
        assert!(serde_json::from_str::<Int>("9223372036854775808").is_err());
        assert!(serde_json::from_str::<Int>("-1").is_err());
        assert!(serde_json::from_str::<Int>("1.5").is_err());
        assert!(serde_json::from_str::<Int>("\"0x10\"").is_err());
        assert_eq!(int_value(1 << 63), Value::String("9223372036854775808".into()));
        assert_eq!(int_value(7), Value::from(7u64));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let doc = r#"{"group":{"family":"cyclic","n":8},"sigma":{"kind":"identity"},"g":[1],"h":[3],"extra":1}"#;
        assert!(InstanceFile::parse(doc).is_err());
        let doc = r#"{"group":{"family":"cyclic","n":8,"colour":1},"sigma":{"kind":"identity"},"g":[1]}"#;
        assert!(InstanceFile::parse(doc).is_err());
    }

    #[test]
    fn round_trip() {
        let doc = r#"{"group":{"family":"vector","p":5,"d":2},
            "sigma":{"kind":"linear","data":[[0,4],[1,4]],"order":"3"},
            "g":[1,0],"h":[1,1],"chain":"builtin"}"#;
        let f = InstanceFile::parse(doc).unwrap();
        let again = InstanceFile::parse(&f.to_json()).unwrap();
        assert_eq!(f, again);
        let loaded = f.load().unwrap();
        assert_eq!(loaded.instance().unwrap().h, Element(vec![1, 1]));
        assert!(loaded.chain.is_some());
    }

    #[test]
    fn bad_elements_are_malformed() {
        let doc = r#"{"group":{"family":"vector","p":5,"d":2},"sigma":{"kind":"identity"},"g":[1,7],"h":[0,0]}"#;
        assert!(matches!(InstanceFile::parse(doc).unwrap().load(), Err(SdlpError::Malformed(_))));
        let doc = r#"{"group":{"family":"vector","p":5,"d":2},"sigma":{"kind":"identity"},"g":[1],"h":[0,0]}"#;
        assert!(matches!(InstanceFile::parse(doc).unwrap().load(), Err(SdlpError::Malformed(_))));
    }
}
