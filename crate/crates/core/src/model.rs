//! Model files: finite algebraic models written as TOML.
//!
//! ```toml
//! schema = 1
//! name = "s2"
//! field = "Q"
//! grading = "cohomological"
//!
//! [caps]
//! degree = 8
//!
//! [algebra]
//! generators = [["1", 0], ["x", 2]]
//! unit = "1"
//! ```
//!
//! Linear combinations are written `"2*a - 1/2*b + c"`; product keys are
//! `"a*b"`, action keys `"a*m"`, coproduct values use `"l|r"` atoms.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cobar::{cobar, Cobar};
use crate::dg::{ChainComplex, DGAlgebra, DGCoalgebra, DGModule, DefectReport};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedBasis, Grading, MultiMap};
use crate::linalg::{Field, Scalar};

pub const SCHEMA: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA
}

fn default_field() -> String {
    "Q".into()
}

fn default_grading() -> String {
    "homological".into()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<(String, i32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub product: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraSection {
    pub generators: Vec<(String, i32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coproduct: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<(String, i32)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistingSection {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub universal: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cochain: BTreeMap<String, String>,
}

/// The raw contents of a model file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default = "default_grading")]
    pub grading: String,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalgebra: Option<CoalgebraSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisting: Option<TwistingSection>,
}

impl Default for ModelFile {
    fn default() -> Self {
        ModelFile {
            schema: SCHEMA,
            name: String::new(),
            field: default_field(),
            grading: default_grading(),
            caps: Caps::default(),
            algebra: None,
            coalgebra: None,
            module: None,
            twisting: None,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        let file: ModelFile = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(0, |s| line_of(text, s.start)),
            msg: e.message().to_string(),
        })?;
        if file.schema != SCHEMA {
            return Err(Error::Parse { line: 1, msg: format!("unsupported schema {}", file.schema) });
        }
        Ok(file)
    }

    /// Canonical TOML text; tables are emitted in sorted key order.
    pub fn emit(&self) -> String {
        toml::to_string(self).expect("model files always serialize")
    }
}

/// Parses a linear combination such as `"2*a - 1/2*b"` into `(coefficient, atom)` pairs.
pub fn parse_lincomb(field: Field, s: &str) -> Result<Vec<(Scalar, String)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() || compact == "0" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    let mut bounds = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        if (b == b'+' || b == b'-') && i > 0 && !matches!(bytes[i - 1], b'+' | b'-' | b'*' | b'/') {
            bounds.push((start, i));
            start = i;
        }
    }
    bounds.push((start, compact.len()));
    for (a, b) in bounds {
        let mut term = &compact[a..b];
        let mut negative = false;
        while let Some(c @ ('+' | '-')) = term.chars().next() {
            negative ^= c == '-';
            term = &term[1..];
        }
        let (coef, atom) = match term.split_once('*') {
            Some((c, at)) => (Scalar::parse(field, c)?, at),
            None => (field.one(), term),
        };
        if atom.is_empty() {
            return Err(Error::Validation(format!("empty term in \"{s}\"")));
        }
        out.push((if negative { -coef } else { coef }, atom.to_string()));
    }
    Ok(out)
}

fn element_from(field: Field, basis: &GradedBasis, s: &str, what: &str) -> Result<Option<Element>> {
    let terms = parse_lincomb(field, s)?;
    let mut e: Option<Element> = None;
    for (c, name) in terms {
        let g = basis
            .index_of(&name)
            .ok_or_else(|| Error::UnknownName(format!("{name} (in {what})")))?;
        let deg = basis.degree(g);
        let el = e.get_or_insert_with(|| Element::zero(deg));
        if el.degree() != deg {
            return Err(Error::Validation(format!("{what} is not homogeneous")));
        }
        el.add_term(g, c);
    }
    Ok(e)
}

fn set_linear(map: &mut MultiMap, field: Field, key: &str, value: &str, what: &str) -> Result<()> {
    let src = map.sources()[0].clone();
    let tgt = map.target().clone();
    let g = src.index_of(key).ok_or_else(|| Error::UnknownName(format!("{key} (in {what})")))?;
    let out_deg = src.degree(g) + map.shift();
    let e = element_from(field, &tgt, value, &format!("{what} of {key}"))?.unwrap_or(Element::zero(out_deg));
    map.set(vec![g], e).map_err(|err| Error::Validation(format!("{what} of {key}: {err}")))
}

fn set_bilinear(map: &mut MultiMap, field: Field, key: &str, value: &str, what: &str) -> Result<()> {
    let (l, r) = key
        .split_once('*')
        .ok_or_else(|| Error::Validation(format!("{what} key \"{key}\" must have the form a*b")))?;
    let (sl, sr) = (map.sources()[0].clone(), map.sources()[1].clone());
    let a = sl.index_of(l.trim()).ok_or_else(|| Error::UnknownName(format!("{l} (in {what})")))?;
    let b = sr.index_of(r.trim()).ok_or_else(|| Error::UnknownName(format!("{r} (in {what})")))?;
    let out_deg = sl.degree(a) + sr.degree(b);
    let e = element_from(field, map.target(), value, &format!("{what} {key}"))?.unwrap_or(Element::zero(out_deg));
    map.set(vec![a, b], e).map_err(|err| Error::Validation(format!("{what} {key}: {err}")))
}

fn basis_of(gens: &[(String, i32)]) -> Result<Arc<GradedBasis>> {
    Ok(Arc::new(GradedBasis::new(gens.iter().cloned(), false)?))
}

fn ensure_clean(report: DefectReport, what: &str) -> Result<()> {
    if report.is_empty() {
        return Ok(());
    }
    let first = &report.defects[0];
    Err(Error::Validation(format!(
        "{what}: {} fails on {} ({} defect(s))",
        first.identity,
        first.witness,
        report.defects.len()
    )))
}

/// A loaded and validated model.
#[derive(Clone, Debug)]
pub struct Model {
    pub file: ModelFile,
    pub field: Field,
    pub grading: Grading,
    pub degree_cap: Option<i32>,
    pub algebra: Option<Arc<DGAlgebra>>,
    pub cobar: Option<Arc<Cobar>>,
    pub coalgebra: Option<Arc<DGCoalgebra>>,
    pub module: Option<Arc<DGModule>>,
    /// `φ : K → Ā` into the augmentation ideal of the algebra.
    pub twisting: Option<MultiMap>,
}

fn build_algebra(sec: &AlgebraSection, field: Field, grading: Grading) -> Result<DGAlgebra> {
    let basis = basis_of(&sec.generators)?;
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
    for (k, v) in &sec.differential {
        set_linear(&mut d, field, k, v, "differential")?;
    }
    let mut p = MultiMap::new(vec![basis.clone(), basis.clone()], basis.clone(), 0);
    let unit = sec.unit.as_deref().map(|u| basis.lookup(u)).transpose()?;
    if let Some(u) = unit {
        for g in 0..basis.len() {
            let e = Element::generator(&basis, g, field);
            p.set(vec![u, g], e.clone())?;
            p.set(vec![g, u], e)?;
        }
    }
    for (k, v) in &sec.product {
        set_bilinear(&mut p, field, k, v, "product")?;
    }
    let complex = ChainComplex::new(grading, field, basis, d, None)?;
    DGAlgebra::new(complex, p, unit)
}

fn build_coalgebra(sec: &CoalgebraSection, field: Field, grading: Grading) -> Result<DGCoalgebra> {
    let basis = basis_of(&sec.generators)?;
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
    for (k, v) in &sec.differential {
        set_linear(&mut d, field, k, v, "differential")?;
    }
    let counit = sec.counit.as_deref().map(|u| basis.lookup(u)).transpose()?;
    let mut coproduct = BTreeMap::new();
    for (k, v) in &sec.coproduct {
        let g = basis.index_of(k).ok_or_else(|| Error::UnknownName(format!("{k} (in coproduct)")))?;
        let mut parts = Vec::new();
        for (c, atom) in parse_lincomb(field, v)? {
            let (l, r) = atom
                .split_once('|')
                .ok_or_else(|| Error::Validation(format!("coproduct term \"{atom}\" must have the form l|r")))?;
            let li = basis.index_of(l).ok_or_else(|| Error::UnknownName(format!("{l} (in coproduct of {k})")))?;
            let ri = basis.index_of(r).ok_or_else(|| Error::UnknownName(format!("{r} (in coproduct of {k})")))?;
            parts.push((li, ri, c));
        }
        coproduct.insert(g, parts);
    }
    DGCoalgebra::new(grading, field, basis, d, coproduct, counit)
}

fn build_module(sec: &ModuleSection, algebra: &Arc<DGAlgebra>, field: Field, grading: Grading) -> Result<DGModule> {
    if sec.construction.as_deref() == Some("algebra") {
        return Ok(DGModule::regular(algebra.clone()));
    }
    if let Some(c) = &sec.construction {
        return Err(Error::Validation(format!("unknown module construction \"{c}\"")));
    }
    let basis = basis_of(&sec.generators)?;
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
    for (k, v) in &sec.differential {
        set_linear(&mut d, field, k, v, "module differential")?;
    }
    let mut act = MultiMap::new(vec![algebra.basis().clone(), basis.clone()], basis.clone(), 0);
    if let Some(u) = algebra.unit {
        for g in 0..basis.len() {
            act.set(vec![u, g], Element::generator(&basis, g, field))?;
        }
    }
    for (k, v) in &sec.action {
        set_bilinear(&mut act, field, k, v, "action")?;
    }
    let complex = ChainComplex::new(grading, field, basis, d, None)?;
    DGModule::new(algebra.clone(), complex, act)
}

impl Model {
    pub fn load(text: &str) -> Result<Model> {
        Model::from_file(ModelFile::parse(text)?)
    }

    pub fn load_path(path: &std::path::Path) -> Result<Model> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
        Model::load(&text)
    }

    pub fn from_file(file: ModelFile) -> Result<Model> {
        let field = Field::parse(&file.field)?;
        let grading = Grading::parse(&file.grading)?;
        let cap = file.caps.degree;
        let check_cap = cap.unwrap_or(16);
        let coalgebra = match &file.coalgebra {
            Some(sec) => {
                let k = build_coalgebra(sec, field, grading)?;
                ensure_clean(k.check(check_cap), "coalgebra")?;
                Some(Arc::new(k))
            }
            None => None,
        };
        let mut cobar_data = None;
        let algebra = match &file.algebra {
            Some(sec) if sec.construction.as_deref() == Some("cobar") => {
                let k = coalgebra
                    .as_ref()
                    .ok_or_else(|| Error::Validation("the cobar construction needs a [coalgebra] section".into()))?;
                let c = cobar(k, check_cap + 2)?;
                let a = c.algebra.clone();
                cobar_data = Some(Arc::new(c));
                Some(a)
            }
            Some(sec) => {
                if let Some(c) = &sec.construction {
                    return Err(Error::Validation(format!("unknown algebra construction \"{c}\"")));
                }
                let a = build_algebra(sec, field, grading)?;
                ensure_clean(a.check(check_cap), "algebra")?;
                Some(Arc::new(a))
            }
            None => None,
        };
        let module = match (&file.module, &algebra) {
            (Some(sec), Some(a)) => {
                let m = build_module(sec, a, field, grading)?;
                ensure_clean(m.check(check_cap), "module")?;
                Some(Arc::new(m))
            }
            (Some(_), None) => return Err(Error::Validation("a [module] section needs an [algebra] section".into())),
            _ => None,
        };
        let twisting = match &file.twisting {
            Some(sec) => {
                let (Some(k), Some(a)) = (&coalgebra, &algebra) else {
                    return Err(Error::Validation("a [twisting] section needs [coalgebra] and [algebra]".into()));
                };
                if sec.universal {
                    let c = cobar_data
                        .as_ref()
                        .ok_or_else(|| Error::Validation("universal twisting needs algebra.construction = \"cobar\"".into()))?;
                    Some(c.universal.clone())
                } else {
                    let reduced = a.reduced()?;
                    let mut phi = MultiMap::linear(k.basis.clone(), reduced.basis().clone(), grading.d());
                    for (key, v) in &sec.cochain {
                        set_linear(&mut phi, field, key, v, "twisting cochain")?;
                    }
                    Some(phi)
                }
            }
            None => None,
        };
        Ok(Model { file, field, grading, degree_cap: cap, algebra, cobar: cobar_data, coalgebra, module, twisting })
    }
}

/// The bundled example models, by name.
pub const CORPUS: &[(&str, &str)] = &[
    ("cp2", include_str!("../models/cp2.toml")),
    ("heisenberg", include_str!("../models/heisenberg.toml")),
    ("hopf", include_str!("../models/hopf.toml")),
    ("s2", include_str!("../models/s2.toml")),
    ("s3", include_str!("../models/s3.toml")),
    ("wedge", include_str!("../models/wedge.toml")),
];

/// Loads a bundled model by name.
pub fn corpus_model(name: &str) -> Result<Model> {
    let (_, text) = CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownName(format!("no bundled model named {name}")))?;
    Model::load(text)
}
