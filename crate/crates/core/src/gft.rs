//! Field-theory assignments: leaf values on a hyperstructure, globalized
//! level by level.
//!
//! An [`Assignment`] gives every level-0 element a value in a recipient
//! carrier (a verified table monoid, multisets, or tensor states). The
//! globalizer walks the levels upward: each bond's value is the combine of
//! its support's values in canonical member order. Gluing is checked by
//! recomputing every bond's value a second way, from its deduplicated
//! descendant leaves; elements covered twice by overlapping supports make the
//! two routes disagree and land in the glue report, which blocks the global
//! value. Tunnelling edits leaf values and re-globalizes, leaving the
//! original assignment untouched.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::entangle::{tensor_product, EntangleError, TensorState};
use crate::monoid::{multiset_union, FiniteMonoid, MonoidError, Multiset};
use crate::structure::{ElementId, Hyperstructure};
use crate::tables::OpTable;

/// Tensor values match when their amplitudes agree within this 2-norm.
pub const TENSOR_VALUE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GftError {
    #[error("level-0 element {0:?} has no assigned value")]
    MissingLeaf(String),
    #[error("{0:?} is not a level-0 element of the source")]
    UnknownLeaf(String),
    #[error("source structure fails validation with {violations} violations")]
    UnvalidatedSource { violations: usize },
    #[error("expected a unique top element, found {count}")]
    NoTop { count: usize },
    #[error("level {level} is out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("value for {element:?} has kind {got}, recipient expects {expected}")]
    ValueKind {
        element: String,
        expected: &'static str,
        got: &'static str,
    },
    #[error("globalization produced no global value ({issues} gluing issues)")]
    NotGlobal { issues: usize },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Tensor(#[from] EntangleError),
    #[error("invalid assignment file: {0}")]
    BadFile(String),
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
}

/// The carrier values are combined in.
#[derive(Debug, Clone)]
pub enum Recipient {
    /// A finite commutative monoid; values are element names.
    Monoid(FiniteMonoid),
    /// Free multisets under union.
    Multiset,
    /// Tensor states under the Kronecker product, in canonical member order.
    Tensor,
}

impl Recipient {
    pub fn kind(&self) -> &'static str {
        match self {
            Recipient::Monoid(_) => "monoid",
            Recipient::Multiset => "multiset",
            Recipient::Tensor => "tensor",
        }
    }
}

/// A single carrier value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Element(String),
    Multiset(Multiset),
    Tensor(TensorState),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Element(_) => "monoid",
            Value::Multiset(_) => "multiset",
            Value::Tensor(_) => "tensor",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Element(name) => write!(f, "{name}"),
            Value::Multiset(m) => {
                write!(f, "{{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                write!(f, "}}")
            }
            Value::Tensor(t) => write!(f, "{}", t.to_json()),
        }
    }
}

impl Recipient {
    fn check_value(&self, element: &str, value: &Value) -> Result<(), GftError> {
        let ok = matches!(
            (self, value),
            (Recipient::Monoid(_), Value::Element(_))
                | (Recipient::Multiset, Value::Multiset(_))
                | (Recipient::Tensor, Value::Tensor(_))
        );
        if !ok {
            return Err(GftError::ValueKind {
                element: element.to_string(),
                expected: self.kind(),
                got: value.kind(),
            });
        }
        if let (Recipient::Monoid(monoid), Value::Element(name)) = (self, value) {
            monoid.index_of(name)?;
        }
        Ok(())
    }

    /// Folds the values in the given order; non-empty by construction here.
    fn combine(&self, values: &[&Value]) -> Result<Value, GftError> {
        match self {
            Recipient::Monoid(monoid) => {
                let names: Vec<&str> = values
                    .iter()
                    .map(|v| match v {
                        Value::Element(name) => Ok(name.as_str()),
                        other => Err(GftError::ValueKind {
                            element: "combined value".into(),
                            expected: "monoid",
                            got: other.kind(),
                        }),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::Element(monoid.combine(names)?))
            }
            Recipient::Multiset => {
                let parts: Vec<&Multiset> = values
                    .iter()
                    .map(|v| match v {
                        Value::Multiset(m) => Ok(m),
                        other => Err(GftError::ValueKind {
                            element: "combined value".into(),
                            expected: "multiset",
                            got: other.kind(),
                        }),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::Multiset(multiset_union(parts)))
            }
            Recipient::Tensor => {
                let states: Vec<TensorState> = values
                    .iter()
                    .map(|v| match v {
                        Value::Tensor(t) => Ok(t.clone()),
                        other => Err(GftError::ValueKind {
                            element: "combined value".into(),
                            expected: "tensor",
                            got: other.kind(),
                        }),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::Tensor(tensor_product(&states)?))
            }
        }
    }

    fn values_equal(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Tensor(x), Value::Tensor(y)) => x.approx_eq(y, TENSOR_VALUE_TOL),
            _ => a == b,
        }
    }
}

/// One gluing inconsistency found during globalization.
#[derive(Debug, Clone, PartialEq)]
pub enum GlueIssue {
    /// A bond whose member carries no value (a valueless non-bond element or
    /// a cascade from an earlier issue).
    MissingMemberValue { bond: ElementId, member: ElementId },
    /// A bond whose support-combined value differs from the value combined
    /// directly over its deduplicated descendant leaves.
    PathMismatch {
        element: ElementId,
        via_bonds: Value,
        via_leaves: Value,
    },
    /// The unique top element never received a value.
    ValuelessTop { element: ElementId },
}

impl fmt::Display for GlueIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlueIssue::MissingMemberValue { bond, member } => {
                write!(f, "bond {bond} needs a value for {member}, which has none")
            }
            GlueIssue::PathMismatch {
                element,
                via_bonds,
                via_leaves,
            } => write!(
                f,
                "gluing fails at {element}: bond route gives {via_bonds}, leaf route gives {via_leaves}"
            ),
            GlueIssue::ValuelessTop { element } => {
                write!(f, "top element {element} has no value")
            }
        }
    }
}

/// The delta-chain outputs: per-level value maps, the glue report, and the
/// global value (present only when a unique valued top exists and the report
/// is empty).
#[derive(Debug, Clone)]
pub struct GlobalizeResult {
    per_level: Vec<BTreeMap<String, Value>>,
    glue_report: Vec<GlueIssue>,
    global: Option<Value>,
}

impl GlobalizeResult {
    pub fn global(&self) -> Option<&Value> {
        self.global.as_ref()
    }

    pub fn glue_report(&self) -> &[GlueIssue] {
        &self.glue_report
    }

    /// The computed values at one level, keyed by element key.
    pub fn level_values(&self, level: usize) -> Result<&BTreeMap<String, Value>, GftError> {
        self.per_level.get(level).ok_or(GftError::LevelOutOfRange {
            level,
            depth: self.per_level.len() - 1,
        })
    }

    pub fn depth(&self) -> usize {
        self.per_level.len() - 1
    }
}

/// Leaf values on a hyperstructure, against a recipient carrier.
#[derive(Debug, Clone)]
pub struct Assignment {
    source: Hyperstructure,
    recipient: Recipient,
    leaves: BTreeMap<String, Value>,
}

/// Stores `leaves` as the level-0 values of `source`; every level-0 element
/// must be covered and every value must fit the recipient.
pub fn assign(
    source: &Hyperstructure,
    recipient: Recipient,
    leaves: BTreeMap<String, Value>,
) -> Result<Assignment, GftError> {
    let ground = source
        .level(0)
        .expect("level 0 always exists");
    for key in leaves.keys() {
        if !ground.contains(key) {
            return Err(GftError::UnknownLeaf(key.clone()));
        }
    }
    for key in ground {
        match leaves.get(key) {
            None => return Err(GftError::MissingLeaf(key.clone())),
            Some(value) => recipient.check_value(key, value)?,
        }
    }
    Ok(Assignment {
        source: source.clone(),
        recipient,
        leaves,
    })
}

impl Assignment {
    pub fn source(&self) -> &Hyperstructure {
        &self.source
    }

    pub fn recipient(&self) -> &Recipient {
        &self.recipient
    }

    pub fn leaves(&self) -> &BTreeMap<String, Value> {
        &self.leaves
    }

    /// Returns a copy with the given leaf edits applied.
    pub fn with_edits(&self, edits: &BTreeMap<String, Value>) -> Result<Assignment, GftError> {
        let mut leaves = self.leaves.clone();
        for (key, value) in edits {
            if !leaves.contains_key(key) {
                return Err(GftError::UnknownLeaf(key.clone()));
            }
            self.recipient.check_value(key, value)?;
            leaves.insert(key.clone(), value.clone());
        }
        Ok(Assignment {
            source: self.source.clone(),
            recipient: self.recipient.clone(),
            leaves,
        })
    }

    /// Runs the delta chain: level by level upward, every bond combines its
    /// support members' values in canonical order. Each bond value is
    /// cross-checked against the combine of its deduplicated descendant
    /// leaves (in first-visit order); disagreements and missing member values
    /// are collected in the glue report. The source must validate cleanly and
    /// have a unique top element.
    pub fn globalize(&self) -> Result<GlobalizeResult, GftError> {
        let report = self.source.validate();
        if !report.is_empty() {
            return Err(GftError::UnvalidatedSource {
                violations: report.violations().len(),
            });
        }
        let depth = self.source.depth();
        let top = self.source.level(depth).expect("top level exists");
        if top.len() != 1 {
            return Err(GftError::NoTop { count: top.len() });
        }
        let top_key = top.iter().next().expect("unique top").clone();

        let mut per_level: Vec<BTreeMap<String, Value>> = vec![BTreeMap::new(); depth + 1];
        per_level[0] = self.leaves.clone();
        // In-order deduplicated descendant leaf keys per valued element.
        let mut leaf_seq: BTreeMap<ElementId, Vec<String>> = BTreeMap::new();
        for key in self.source.level(0).expect("level 0 exists") {
            leaf_seq.insert(ElementId::new(0, key.clone()), vec![key.clone()]);
        }
        let mut glue_report = Vec::new();

        for level in 1..=depth {
            for key in self.source.level(level).expect("level in range") {
                let id = ElementId::new(level, key.clone());
                let Some(bond) = self.source.bond(&id) else {
                    continue; // plain element, no value of its own
                };
                let mut member_values = Vec::new();
                let mut seq = Vec::new();
                let mut missing = false;
                for member in bond.support().member_ids() {
                    match per_level[level - 1].get(&member.key) {
                        Some(value) => member_values.push(value),
                        None => {
                            glue_report.push(GlueIssue::MissingMemberValue {
                                bond: id.clone(),
                                member: member.clone(),
                            });
                            missing = true;
                        }
                    }
                    if let Some(leaves) = leaf_seq.get(&member) {
                        seq.extend(leaves.iter().cloned());
                    }
                }
                if missing {
                    continue;
                }
                let value = self.recipient.combine(&member_values)?;
                let mut deduped = Vec::new();
                for leaf in seq {
                    if !deduped.contains(&leaf) {
                        deduped.push(leaf);
                    }
                }
                let leaf_values: Vec<&Value> = deduped
                    .iter()
                    .map(|k| &self.leaves[k])
                    .collect();
                let via_leaves = self.recipient.combine(&leaf_values)?;
                if !self.recipient.values_equal(&value, &via_leaves) {
                    glue_report.push(GlueIssue::PathMismatch {
                        element: id.clone(),
                        via_bonds: value.clone(),
                        via_leaves,
                    });
                }
                leaf_seq.insert(id.clone(), deduped);
                per_level[level].insert(key.clone(), value);
            }
        }

        let top_value = per_level[depth].get(&top_key).cloned();
        if top_value.is_none() {
            glue_report.push(GlueIssue::ValuelessTop {
                element: ElementId::new(depth, top_key),
            });
        }
        let global = if glue_report.is_empty() { top_value } else { None };
        Ok(GlobalizeResult {
            per_level,
            glue_report,
            global,
        })
    }

    /// Abstract tunnelling: globalizes, applies the leaf edits to a copy,
    /// re-globalizes, and returns both global values.
    pub fn tunnel(&self, edits: &BTreeMap<String, Value>) -> Result<(Value, Value), GftError> {
        let before = self.globalize()?;
        let old = before.global().cloned().ok_or(GftError::NotGlobal {
            issues: before.glue_report().len(),
        })?;
        let after = self.with_edits(edits)?.globalize()?;
        let new = after.global().cloned().ok_or(GftError::NotGlobal {
            issues: after.glue_report().len(),
        })?;
        Ok((old, new))
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct RecipientFile {
    kind: String,
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    elements: Option<Vec<String>>,
    #[serde(default)]
    op: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    unit: Option<usize>,
}

#[derive(Deserialize)]
struct AssignmentFile {
    recipient: RecipientFile,
    leaves: BTreeMap<String, serde_json::Value>,
}

fn parse_recipient(file: RecipientFile) -> Result<Recipient, GftError> {
    match file.kind.as_str() {
        "multiset" => Ok(Recipient::Multiset),
        "tensor" => Ok(Recipient::Tensor),
        "monoid" => {
            if let Some(builtin) = file.builtin {
                let (name, n) = builtin
                    .split_once(':')
                    .ok_or_else(|| GftError::BadFile(format!("bad builtin {builtin:?}")))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| GftError::BadFile(format!("bad builtin modulus in {builtin:?}")))?;
                return match name {
                    "zn-add" => Ok(Recipient::Monoid(FiniteMonoid::zn_add(n))),
                    "zn-mul" => Ok(Recipient::Monoid(FiniteMonoid::zn_mul(n))),
                    other => Err(GftError::BadFile(format!("unknown builtin {other:?}"))),
                };
            }
            let elements = file
                .elements
                .ok_or_else(|| GftError::BadFile("monoid recipient needs elements".into()))?;
            let op = file
                .op
                .ok_or_else(|| GftError::BadFile("monoid recipient needs an op table".into()))?;
            let unit = file
                .unit
                .ok_or_else(|| GftError::BadFile("monoid recipient needs a unit index".into()))?;
            let table = OpTable::new(op).map_err(|e| GftError::BadFile(e.to_string()))?;
            Ok(Recipient::Monoid(FiniteMonoid::new(elements, table, unit)?))
        }
        other => Err(GftError::BadFile(format!("unknown recipient kind {other:?}"))),
    }
}

/// Parses one leaf value according to the recipient kind: a bare element name
/// for monoids, `{"item": count}` for multisets, a state object for tensors.
pub fn parse_value(recipient: &Recipient, raw: &serde_json::Value) -> Result<Value, GftError> {
    match recipient {
        Recipient::Monoid(_) => match raw {
            serde_json::Value::String(name) => Ok(Value::Element(name.clone())),
            other => Ok(Value::Element(other.to_string())),
        },
        Recipient::Multiset => {
            let object = raw
                .as_object()
                .ok_or_else(|| GftError::BadFile(format!("multiset value must be an object, got {raw}")))?;
            let mut m = Multiset::new();
            for (k, v) in object {
                let count = v
                    .as_u64()
                    .ok_or_else(|| GftError::BadFile(format!("multiset count for {k:?} must be a non-negative integer")))?;
                m.insert(k.clone(), count);
            }
            Ok(Value::Multiset(m))
        }
        Recipient::Tensor => Ok(Value::Tensor(TensorState::from_json(&raw.to_string())?)),
    }
}

/// Parses the assignment file `{"recipient": {...}, "leaves": {...}}`.
pub fn assignment_from_json(text: &str) -> Result<(Recipient, BTreeMap<String, Value>), GftError> {
    let file: AssignmentFile = serde_json::from_str(text)?;
    let recipient = parse_recipient(file.recipient)?;
    let mut leaves = BTreeMap::new();
    for (key, raw) in file.leaves {
        leaves.insert(key, parse_value(&recipient, &raw)?);
    }
    Ok((recipient, leaves))
}
