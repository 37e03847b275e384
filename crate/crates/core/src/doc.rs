//! Instance documents: the JSON exchange format for lattices, modules,
//! frames, homomorphism maps, subalgebra carriers and congruences.
//!
//! Serialization is canonical: object keys sorted, arrays in index order,
//! integers only. Emitting any parsed document reproduces it byte for byte.

use crate::congruence::FidlCongruence;
use crate::frame::{validate_frame, FiFrame, FrameError};
use crate::lattice::{validate_lattice, FiniteLattice, LatticeError};
use crate::module::{validate_module, FidlModule, ModuleError};
use crate::partition::Partition;
use crate::poset::{Poset, PosetError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed document: {0}")]
    Shape(String),
    #[error("lattice does not validate: {0}")]
    Lattice(#[from] LatticeError),
    #[error("poset does not validate: {0}")]
    Poset(#[from] PosetError),
    #[error("module does not validate: {0}")]
    Module(#[from] ModuleError),
    #[error("frame does not validate: {0}")]
    Frame(#[from] FrameError),
}

impl DocError {
    /// Malformed input (true) versus a failed mathematical property (false).
    pub fn is_malformed(&self) -> bool {
        matches!(self, DocError::Json(_) | DocError::Shape(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Lattice,
    Module,
    Frame,
    Hom,
    Subalgebra,
    Congruence,
}

impl std::fmt::Display for DocKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DocKind::Lattice => "lattice",
            DocKind::Module => "module",
            DocKind::Frame => "frame",
            DocKind::Hom => "hom",
            DocKind::Subalgebra => "subalgebra",
            DocKind::Congruence => "congruence",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocMeta {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub kind: DocKind,
    pub payload: Value,
    #[serde(default)]
    pub meta: DocMeta,
}

impl InstanceDocument {
    pub fn new(kind: DocKind, payload: Value, name: &str) -> Self {
        InstanceDocument {
            kind,
            payload,
            meta: DocMeta {
                name: name.to_string(),
                seed: None,
                generator: None,
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_canonical_string(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("documents serialize"))
    }
}

/// Canonical text form of a JSON value: sorted keys (the default map is a
/// B-tree), two-space indentation, trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Payload builders.
// ---------------------------------------------------------------------------

pub fn poset_payload(p: &Poset) -> Value {
    let n = p.len();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| p.leq(a, b)).collect())
        .collect();
    json!({ "elements": p.labels(), "leq": leq })
}

pub fn lattice_payload(l: &FiniteLattice) -> Value {
    poset_payload(l.poset())
}

/// Lattice payload extended with the derived tables and bounds.
pub fn lattice_payload_derived(l: &FiniteLattice) -> Value {
    let n = l.len();
    let meet: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| l.meet(a, b)).collect())
        .collect();
    let join: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| l.join(a, b)).collect())
        .collect();
    let mut v = poset_payload(l.poset());
    let obj = v.as_object_mut().unwrap();
    obj.insert("meet".into(), json!(meet));
    obj.insert("join".into(), json!(join));
    obj.insert("bottom".into(), json!(l.bottom()));
    obj.insert("top".into(), json!(l.top()));
    v
}

pub fn module_payload(m: &FidlModule) -> Value {
    json!({
        "A": lattice_payload(m.lattice_a()),
        "B": lattice_payload(m.lattice_b()),
        "f": m.fusion_rows(),
        "i": m.implication_rows(),
    })
}

pub fn frame_payload(f: &FiFrame) -> Value {
    json!({
        "X": poset_payload(f.x()),
        "Y": poset_payload(f.y()),
        "R": f.r().triples(),
        "T": f.t().triples(),
    })
}

pub fn hom_payload(alpha: &[usize], gamma: &[usize]) -> Value {
    json!({ "alpha": alpha, "gamma": gamma })
}

pub fn subalgebra_payload(carrier_a: &[usize], carrier_b: &[usize]) -> Value {
    json!({ "carrierA": carrier_a, "carrierB": carrier_b })
}

pub fn congruence_payload(c: &FidlCongruence) -> Value {
    json!({
        "thetaA": c.theta_a.blocks(),
        "thetaB": c.theta_b.blocks(),
    })
}

pub fn closed_pair_payload(p: &crate::congruence::ClosedPair) -> Value {
    json!([p.z1.indices(), p.z2.indices()])
}

// ---------------------------------------------------------------------------
// Payload parsers.
// ---------------------------------------------------------------------------

fn field<'v>(v: &'v Value, name: &str) -> Result<&'v Value, DocError> {
    v.get(name)
        .ok_or_else(|| DocError::Shape(format!("missing field {name:?}")))
}

fn parse_labels(v: &Value) -> Result<Vec<String>, DocError> {
    Ok(serde_json::from_value(field(v, "elements")?.clone())?)
}

fn parse_bool_table(v: &Value) -> Result<Vec<Vec<bool>>, DocError> {
    Ok(serde_json::from_value(field(v, "leq")?.clone())?)
}

pub fn parse_poset(v: &Value) -> Result<Poset, DocError> {
    Ok(Poset::new(parse_labels(v)?, &parse_bool_table(v)?)?)
}

/// Parse and validate a lattice payload. Supplied derived fields, when
/// present, are cross-checked against the order.
pub fn parse_lattice(v: &Value) -> Result<FiniteLattice, DocError> {
    let labels = parse_labels(v)?;
    let leq = parse_bool_table(v)?;
    let has_tables = v.get("meet").is_some() || v.get("join").is_some();
    if !has_tables {
        if let (Some(b), Some(t)) = (v.get("bottom"), v.get("top")) {
            let lattice = validate_lattice(labels, &leq)?;
            let bottom: usize = serde_json::from_value(b.clone())?;
            let top: usize = serde_json::from_value(t.clone())?;
            if bottom != lattice.bottom() {
                return Err(LatticeError::NotBounded {
                    kind: crate::lattice::BoundKind::Bottom,
                    index: bottom,
                }
                .into());
            }
            if top != lattice.top() {
                return Err(LatticeError::NotBounded {
                    kind: crate::lattice::BoundKind::Top,
                    index: top,
                }
                .into());
            }
            return Ok(lattice);
        }
        return Ok(validate_lattice(labels, &leq)?);
    }
    let meet: Vec<Vec<usize>> = serde_json::from_value(field(v, "meet")?.clone())?;
    let join: Vec<Vec<usize>> = serde_json::from_value(field(v, "join")?.clone())?;
    let bottom: usize = serde_json::from_value(field(v, "bottom")?.clone())?;
    let top: usize = serde_json::from_value(field(v, "top")?.clone())?;
    let poset = Poset::new(labels, &leq)?;
    Ok(FiniteLattice::from_parts(poset, &meet, &join, bottom, top)?)
}

pub fn parse_module(v: &Value) -> Result<FidlModule, DocError> {
    let a = parse_lattice(field(v, "A")?)?;
    let b = parse_lattice(field(v, "B")?)?;
    let f: Vec<Vec<usize>> = serde_json::from_value(field(v, "f")?.clone())?;
    let i: Vec<Vec<usize>> = serde_json::from_value(field(v, "i")?.clone())?;
    Ok(validate_module(a, b, &f, &i)?)
}

pub fn parse_frame(v: &Value) -> Result<FiFrame, DocError> {
    let x = parse_poset(field(v, "X")?)?;
    let y = parse_poset(field(v, "Y")?)?;
    let r: Vec<[usize; 3]> = serde_json::from_value(field(v, "R")?.clone())?;
    let t: Vec<[usize; 3]> = serde_json::from_value(field(v, "T")?.clone())?;
    Ok(validate_frame(x, y, &r, &t)?)
}

pub fn parse_hom_maps(v: &Value) -> Result<(Vec<usize>, Vec<usize>), DocError> {
    let alpha: Vec<usize> = serde_json::from_value(field(v, "alpha")?.clone())?;
    let gamma: Vec<usize> = serde_json::from_value(field(v, "gamma")?.clone())?;
    Ok((alpha, gamma))
}

pub fn parse_subalgebra_carriers(v: &Value) -> Result<(Vec<usize>, Vec<usize>), DocError> {
    let a: Vec<usize> = serde_json::from_value(field(v, "carrierA")?.clone())?;
    let b: Vec<usize> = serde_json::from_value(field(v, "carrierB")?.clone())?;
    Ok((a, b))
}

pub fn parse_congruence_blocks(
    v: &Value,
    na: usize,
    nb: usize,
) -> Result<FidlCongruence, DocError> {
    let blocks_a: Vec<Vec<usize>> = serde_json::from_value(field(v, "thetaA")?.clone())?;
    let blocks_b: Vec<Vec<usize>> = serde_json::from_value(field(v, "thetaB")?.clone())?;
    let to_partition = |blocks: &[Vec<usize>], n: usize| -> Result<Partition, DocError> {
        let mut class_of = vec![usize::MAX; n];
        for (ci, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(DocError::Shape(format!("block element {e} out of range")));
                }
                if class_of[e] != usize::MAX {
                    return Err(DocError::Shape(format!("element {e} in two blocks")));
                }
                class_of[e] = ci;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(DocError::Shape("blocks do not cover the carrier".into()));
        }
        Ok(Partition::from_class_of(&class_of))
    };
    Ok(FidlCongruence {
        theta_a: to_partition(&blocks_a, na)?,
        theta_b: to_partition(&blocks_b, nb)?,
    })
}

/// A fully validated payload, for the kinds that validate standalone.
/// Homomorphism, subalgebra and congruence documents carry maps relative to
/// modules supplied elsewhere, so standalone checking stops at the shape.
pub enum CheckedPayload {
    Lattice(FiniteLattice),
    Module(Box<FidlModule>),
    Frame(FiFrame),
    HomMaps(Vec<usize>, Vec<usize>),
    SubalgebraCarriers(Vec<usize>, Vec<usize>),
    CongruenceBlocks(Vec<Vec<usize>>, Vec<Vec<usize>>),
}

pub fn check_document(doc: &InstanceDocument) -> Result<CheckedPayload, DocError> {
    match doc.kind {
        DocKind::Lattice => Ok(CheckedPayload::Lattice(parse_lattice(&doc.payload)?)),
        DocKind::Module => Ok(CheckedPayload::Module(Box::new(parse_module(
            &doc.payload,
        )?))),
        DocKind::Frame => Ok(CheckedPayload::Frame(parse_frame(&doc.payload)?)),
        DocKind::Hom => {
            let (a, g) = parse_hom_maps(&doc.payload)?;
            Ok(CheckedPayload::HomMaps(a, g))
        }
        DocKind::Subalgebra => {
            let (a, b) = parse_subalgebra_carriers(&doc.payload)?;
            Ok(CheckedPayload::SubalgebraCarriers(a, b))
        }
        DocKind::Congruence => {
            let blocks_a: Vec<Vec<usize>> =
                serde_json::from_value(field(&doc.payload, "thetaA")?.clone())?;
            let blocks_b: Vec<Vec<usize>> =
                serde_json::from_value(field(&doc.payload, "thetaB")?.clone())?;
            Ok(CheckedPayload::CongruenceBlocks(blocks_a, blocks_b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lattice_roundtrip_is_byte_exact() {
        let l = fixtures::bool4();
        let doc = InstanceDocument::new(DocKind::Lattice, lattice_payload(&l), "bool4");
        let text = doc.to_canonical_string();
        let reparsed = InstanceDocument::parse(&text).unwrap();
        assert_eq!(reparsed.to_canonical_string(), text);
        match check_document(&reparsed).unwrap() {
            CheckedPayload::Lattice(l2) => assert!(l2.equal_structure(&l)),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn module_roundtrip() {
        let m = fixtures::modal_bool4();
        let doc = InstanceDocument::new(DocKind::Module, module_payload(&m), "modal-bool4");
        let text = doc.to_canonical_string();
        let reparsed = InstanceDocument::parse(&text).unwrap();
        assert_eq!(reparsed.to_canonical_string(), text);
        let m2 = parse_module(&reparsed.payload).unwrap();
        assert_eq!(m2.fusion_rows(), m.fusion_rows());
        assert_eq!(m2.implication_rows(), m.implication_rows());
    }

    #[test]
    fn frame_roundtrip() {
        let f = fixtures::ptframe();
        let doc = InstanceDocument::new(DocKind::Frame, frame_payload(&f), "ptframe");
        let text = doc.to_canonical_string();
        let reparsed = InstanceDocument::parse(&text).unwrap();
        assert_eq!(reparsed.to_canonical_string(), text);
        let f2 = parse_frame(&reparsed.payload).unwrap();
        assert_eq!(f2.r().triples(), f.r().triples());
    }

    #[test]
    fn derived_fields_are_cross_checked() {
        let l = fixtures::chain(2);
        let good = lattice_payload_derived(&l);
        assert!(parse_lattice(&good).is_ok());
        let mut bad = good.clone();
        bad["meet"][1][1] = serde_json::json!(0);
        assert!(matches!(
            parse_lattice(&bad),
            Err(DocError::Lattice(LatticeError::TableMismatch { .. }))
        ));
        let mut bad_bottom = good;
        bad_bottom["bottom"] = serde_json::json!(1);
        assert!(matches!(
            parse_lattice(&bad_bottom),
            Err(DocError::Lattice(LatticeError::NotBounded { .. }))
        ));
    }

    #[test]
    fn congruence_blocks_parse() {
        let v = json!({ "thetaA": [[0, 1]], "thetaB": [[0], [1]] });
        let c = parse_congruence_blocks(&v, 2, 2).unwrap();
        assert!(c.theta_a.is_total());
        assert!(c.theta_b.is_identity());
        let bad = json!({ "thetaA": [[0]], "thetaB": [[0], [1]] });
        assert!(parse_congruence_blocks(&bad, 2, 2).is_err());
    }

    #[test]
    fn keys_are_sorted_in_canonical_output() {
        let m = fixtures::mod2();
        let text = canonical_json(&module_payload(&m));
        let pos_a = text.find("\"A\"").unwrap();
        let pos_b = text.find("\"B\"").unwrap();
        let pos_f = text.find("\"f\"").unwrap();
        let pos_i = text.find("\"i\"").unwrap();
        assert!(pos_a < pos_b && pos_b < pos_f && pos_f < pos_i);
    }
}
