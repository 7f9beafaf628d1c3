//! JSON documents for torus actions and Type K data, with validation that names the
//! offending field.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::classify::{type_k_preset, ClassifyError, Existence, TypeKSpec, TYPE_K_PRESETS};
use crate::cyclotomic::Rational;
use crate::groups::{build_group, GroupSpec};
use crate::presets::{lattice_extension, type_a_preset, TYPE_A_PRESETS};
use crate::torus::{ActionSpec, AffineAut, EllipticFactor, IntMatrix, ModelKind, Period, TorusError, TorusModel};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
}

fn field(path: impl Into<String>, message: impl ToString) -> SchemaError {
    SchemaError::Field { path: path.into(), message: message.to_string() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDoc {
    Preset(String),
    Cm { conductor: u32, copies: usize, holomorphic_type: Vec<u32> },
    Product(Vec<FactorDoc>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub period: Period,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub family: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    pub linear: Vec<Vec<i64>>,
    /// Exact rationals such as `"1/2"`.
    pub translation: Vec<String>,
}

/// A torus action. `lattice_extension` enlarges the lattice of `model` first; the
/// generators are then written in the Hermite basis of the enlarged lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub model: ModelDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattice_extension: Vec<Vec<String>>,
    pub group: GroupDoc,
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedCountDoc {
    pub element: String,
    pub count: u64,
}

/// Type K data: the action on the elliptic curve and, optionally, fixed counts on the
/// K3 side that override the symplectic defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeKDoc {
    pub name: String,
    pub group: GroupDoc,
    pub elliptic: Vec<GeneratorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_counts: Vec<FixedCountDoc>,
    pub existence: Existence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecDoc {
    TypeA(ActionDoc),
    TypeK(TypeKDoc),
}

#[derive(Clone, Debug)]
pub enum LoadedSpec {
    TypeA(ActionSpec),
    TypeK(TypeKSpec),
}

fn parse_rational(path: &str, s: &str) -> Result<Rational, SchemaError> {
    let parsed = match s.split_once('/') {
        Some((n, d)) => n.trim().parse::<i64>().ok().zip(d.trim().parse::<i64>().ok()).filter(|(_, d)| *d != 0),
        None => s.trim().parse::<i64>().ok().map(|n| (n, 1)),
    };
    let (n, d) = parsed.ok_or_else(|| field(path, format!("cannot parse rational {s:?}")))?;
    Ok(Rational::new(n.into(), d.into()))
}

fn render_rational(q: &Rational) -> String {
    q.to_string()
}

fn group_of(doc: &GroupDoc, path: &str) -> Result<Arc<crate::groups::FiniteGroup>, SchemaError> {
    let spec: GroupSpec = doc.family.parse().map_err(|e| field(format!("{path}.family"), e))?;
    Ok(Arc::new(build_group(&spec).map_err(|e| field(format!("{path}.family"), e))?))
}

fn model_of(doc: &ModelDoc) -> Result<TorusModel, SchemaError> {
    Ok(match doc {
        ModelDoc::Preset(name) => TorusModel::preset(name).map_err(|e| field("model.preset", e))?,
        ModelDoc::Cm { conductor, copies, holomorphic_type } => {
            TorusModel::cm(format!("Z[z{conductor}]^{copies}"), *conductor, *copies, holomorphic_type.clone()).map_err(|e| field("model.cm", e))?
        }
        ModelDoc::Product(factors) => {
            let fs = factors
                .iter()
                .enumerate()
                .map(|(i, f)| EllipticFactor::new(f.period, f.curve.clone().unwrap_or_else(|| format!("E{}", i + 1))))
                .collect();
            TorusModel::product("product", fs).map_err(|e| field("model.product", e))?
        }
    })
}

fn generators_of(docs: &[GeneratorDoc], rank: usize, names: &[String], path: &str) -> Result<Vec<AffineAut>, SchemaError> {
    if docs.len() != names.len() {
        return Err(field(path, format!("expected {} generators ({}), found {}", names.len(), names.join(", "), docs.len())));
    }
    let mut out = Vec::new();
    for (i, (g, expect)) in docs.iter().zip(names).enumerate() {
        let here = format!("{path}[{i}]");
        if &g.name != expect {
            return Err(field(format!("{here}.name"), format!("expected generator {expect}, found {}", g.name)));
        }
        if g.linear.len() != rank || g.linear.iter().any(|r| r.len() != rank) {
            return Err(field(format!("{here}.linear"), format!("generator {}: expected a {rank} x {rank} matrix", g.name)));
        }
        let m = IntMatrix::from_rows(&g.linear);
        if !m.is_unimodular() {
            return Err(field(format!("{here}.linear"), format!("generator {} is not unimodular (determinant {})", g.name, m.det())));
        }
        if g.translation.len() != rank {
            return Err(field(format!("{here}.translation"), format!("generator {}: expected {rank} entries", g.name)));
        }
        let t = g
            .translation
            .iter()
            .enumerate()
            .map(|(j, s)| parse_rational(&format!("{here}.translation[{j}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(AffineAut::new(m, t).map_err(|e| field(&here, e))?);
    }
    Ok(out)
}

pub fn load_action(doc: &ActionDoc) -> Result<ActionSpec, SchemaError> {
    let mut model = model_of(&doc.model)?;
    if !doc.lattice_extension.is_empty() {
        let taus = doc
            .lattice_extension
            .iter()
            .enumerate()
            .map(|(i, t)| t.iter().enumerate().map(|(j, s)| parse_rational(&format!("lattice_extension[{i}][{j}]"), s)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        model = model.extended(&taus).map_err(|e| field("lattice_extension", e))?;
    }
    let group = group_of(&doc.group, "group")?;
    let gens = generators_of(&doc.generators, model.rank(), group.generator_names(), "generators")?;
    Ok(ActionSpec::new(model, group, gens)?)
}

pub fn load_type_k(doc: &TypeKDoc) -> Result<TypeKSpec, SchemaError> {
    let spec: GroupSpec = doc.group.family.parse().map_err(|e| field("group.family", e))?;
    let group = group_of(&doc.group, "group")?;
    let gens = generators_of(&doc.elliptic, 2, group.generator_names(), "elliptic")?;
    let mut k = TypeKSpec::new(doc.name.clone(), &spec, gens, doc.existence)?;
    if !doc.fixed_counts.is_empty() {
        let mut counts = k.fixed_counts.clone();
        for (i, fc) in doc.fixed_counts.iter().enumerate() {
            let x = k.group().element(&fc.element).map_err(|e| field(format!("fixed_counts[{i}].element"), e))?;
            counts[x] = fc.count;
        }
        k = k.with_fixed_counts(counts);
    }
    Ok(k)
}

pub fn load_document(doc: &SpecDoc) -> Result<LoadedSpec, SchemaError> {
    Ok(match doc {
        SpecDoc::TypeA(a) => LoadedSpec::TypeA(load_action(a)?),
        SpecDoc::TypeK(k) => LoadedSpec::TypeK(load_type_k(k)?),
    })
}

pub fn parse_document(json: &str) -> Result<SpecDoc, SchemaError> {
    Ok(serde_json::from_str(json)?)
}

/// A preset name or a path to a JSON document.
pub fn load_spec(name_or_path: &str) -> Result<LoadedSpec, SchemaError> {
    if TYPE_A_PRESETS.contains(&name_or_path) {
        return Ok(LoadedSpec::TypeA(type_a_preset(name_or_path)?));
    }
    if TYPE_K_PRESETS.contains(&name_or_path) {
        return Ok(LoadedSpec::TypeK(type_k_preset(name_or_path)?));
    }
    let text = std::fs::read_to_string(name_or_path).map_err(|e| SchemaError::Io(name_or_path.to_string(), e))?;
    load_document(&parse_document(&text)?)
}

fn generator_docs(names: &[String], gens: &[AffineAut]) -> Vec<GeneratorDoc> {
    names
        .iter()
        .zip(gens)
        .map(|(n, g)| GeneratorDoc {
            name: n.clone(),
            linear: g.linear().to_rows(),
            translation: g.translation().iter().map(render_rational).collect(),
        })
        .collect()
}

fn model_doc(model: &TorusModel) -> Result<ModelDoc, SchemaError> {
    if TorusModel::preset(model.name()).is_ok() {
        return Ok(ModelDoc::Preset(model.name().to_string()));
    }
    match model.kind() {
        ModelKind::Cm { conductor, copies, holomorphic_type } => {
            Ok(ModelDoc::Cm { conductor: *conductor, copies: *copies, holomorphic_type: holomorphic_type.clone() })
        }
        ModelKind::Product(fs) => Ok(ModelDoc::Product(fs.iter().map(|f| FactorDoc { period: f.period, curve: Some(f.curve.clone()) }).collect())),
        ModelKind::Derived(name) => Err(field("model", format!("{name} has no document form"))),
    }
}

/// The JSON document of a named preset.
pub fn preset_document(name: &str) -> Result<SpecDoc, SchemaError> {
    if TYPE_A_PRESETS.contains(&name) {
        let spec = type_a_preset(name)?;
        let (model, lattice_extension) = match lattice_extension(name) {
            Some((base, taus)) => {
                (ModelDoc::Preset(base.to_string()), taus.iter().map(|t| t.iter().map(render_rational).collect()).collect())
            }
            None => (model_doc(spec.model())?, Vec::new()),
        };
        let family = spec.group().spec().map(|s| s.to_string()).unwrap_or_else(|| spec.group().name().to_string());
        return Ok(SpecDoc::TypeA(ActionDoc {
            model,
            lattice_extension,
            group: GroupDoc { family },
            generators: generator_docs(spec.group().generator_names(), spec.generators()),
        }));
    }
    if TYPE_K_PRESETS.contains(&name) {
        let k = type_k_preset(name)?;
        let g = k.group();
        let family = g.spec().map(|s| s.to_string()).unwrap_or_else(|| g.name().to_string());
        return Ok(SpecDoc::TypeK(TypeKDoc {
            name: k.name.clone(),
            group: GroupDoc { family },
            elliptic: generator_docs(g.generator_names(), k.elliptic.generators()),
            fixed_counts: Vec::new(),
            existence: k.existence,
        }));
    }
    Err(SchemaError::UnknownPreset(name.to_string()))
}

/// Pretty JSON with keys in sorted order, so equal values print identically.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String, SchemaError> {
    let v: Value = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in TYPE_A_PRESETS {
            let doc = preset_document(name).unwrap();
            let text = canonical_json(&doc).unwrap();
            assert_eq!(parse_document(&text).unwrap(), doc, "{name}");
            let LoadedSpec::TypeA(spec) = load_document(&doc).unwrap() else { panic!("{name}") };
            let preset = type_a_preset(name).unwrap();
            assert_eq!(spec.generators(), preset.generators(), "{name}");
            assert_eq!(spec.group().order(), preset.group().order());
        }
        for name in TYPE_K_PRESETS {
            let doc = preset_document(name).unwrap();
            let LoadedSpec::TypeK(k) = load_document(&parse_document(&canonical_json(&doc).unwrap()).unwrap()).unwrap() else { panic!() };
            assert_eq!(k.fixed_counts, type_k_preset(name).unwrap().fixed_counts);
        }
    }

    #[test]
    fn igusa_document() {
        let LoadedSpec::TypeA(spec) = load_spec("igusa").unwrap() else { panic!() };
        assert_eq!(spec.group().spec().unwrap().to_string(), "C2^2");
        let SpecDoc::TypeK(d8) = preset_document("typek-d8").unwrap() else { panic!() };
        let k = load_type_k(&d8).unwrap();
        let a = k.group().generator("a").unwrap();
        assert_eq!(k.fixed_counts[a], 4);
        assert_eq!(k.fixed_counts[k.group().element("a^2").unwrap()], 8);
    }

    #[test]
    fn field_addressed_errors() {
        let SpecDoc::TypeA(mut doc) = preset_document("igusa").unwrap() else { panic!() };
        doc.generators[1].linear[0][0] = 2;
        let err = load_action(&doc).unwrap_err().to_string();
        assert!(err.starts_with("generators[1].linear: generator b is not unimodular"), "{err}");
        let SpecDoc::TypeA(mut doc) = preset_document("igusa").unwrap() else { panic!() };
        doc.generators[0].translation[2] = "x/2".into();
        assert_eq!(load_action(&doc).unwrap_err().to_string(), "generators[0].translation[2]: cannot parse rational \"x/2\"");
        assert!(matches!(parse_document("{\"type_a\": {}}"), Err(SchemaError::Json(_))));
    }
}
