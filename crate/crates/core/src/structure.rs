//! The generic leveled bond structure.
//!
//! A [`Hyperstructure`] of depth `n` has element sets at levels `0..=n`. A
//! [`Bond`] is an element of level `i + 1` together with the [`Support`] it
//! binds: a non-empty property-tagged set of level-`i` elements. The boundary
//! map sends a bond id back to its support; identity bonds bind singletons and
//! satisfy `boundary(I(x)) = ({x}, w)`.
//!
//! Everything is a value: operations never mutate, they return fresh
//! structures. Internal storage is canonically ordered (`BTreeSet` levels,
//! sorted bond records), so equality is structural and serialization is
//! byte-deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("unknown element {0}")]
    UnknownElement(ElementId),
    #[error("bond level {level} exceeds structure depth {depth}")]
    LevelOverflow { level: usize, depth: usize },
    #[error("bond id {id} is already bound to a different support")]
    BondClash { id: ElementId },
    #[error("identity bond must bind exactly one element, got {got}")]
    IdentityArity { got: usize },
    #[error("element key must be non-empty")]
    EmptyKey,
    #[error("support must be non-empty")]
    EmptySupport,
    #[error("property tag must be non-empty")]
    EmptyPropertyTag,
    #[error("element {0} already exists")]
    DuplicateElement(ElementId),
    #[error("hyperoperation value for ({x}, {y}) is empty")]
    EmptyValue { x: String, y: String },
    #[error("renaming is not injective: {0} collides")]
    RenameCollision(ElementId),
    #[error("level {level} is out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
}

/// An element: a level together with a key unique within that level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId {
    pub level: usize,
    pub key: String,
}

impl ElementId {
    pub fn new(level: usize, key: impl Into<String>) -> Self {
        ElementId {
            level,
            key: key.into(),
        }
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.level, self.key)
    }
}

/// An observed property: a tag with optional free-form payload.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Property {
    pub tag: String,
    pub payload: Option<String>,
}

impl Property {
    pub fn tag(tag: impl Into<String>) -> Self {
        Property {
            tag: tag.into(),
            payload: None,
        }
    }

    pub fn with_payload(tag: impl Into<String>, payload: impl Into<String>) -> Self {
        Property {
            tag: tag.into(),
            payload: Some(payload.into()),
        }
    }
}

/// A property-tagged set of same-level elements, the thing a bond binds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Support {
    level: usize,
    members: BTreeSet<String>,
    property: Property,
}

impl Support {
    pub fn new(
        level: usize,
        members: impl IntoIterator<Item = String>,
        property: Property,
    ) -> Result<Self, StructureError> {
        let members: BTreeSet<String> = members.into_iter().collect();
        if members.is_empty() {
            return Err(StructureError::EmptySupport);
        }
        if members.iter().any(|k| k.is_empty()) {
            return Err(StructureError::EmptyKey);
        }
        if property.tag.is_empty() {
            return Err(StructureError::EmptyPropertyTag);
        }
        Ok(Support {
            level,
            members,
            property,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn member_ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.members
            .iter()
            .map(move |k| ElementId::new(self.level, k.clone()))
    }

    pub fn property(&self) -> &Property {
        &self.property
    }
}

/// One binding: an element of level `i + 1` over a support at level `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bond {
    id: ElementId,
    support: Support,
    identity: bool,
}

impl Bond {
    pub fn new(id: ElementId, support: Support, identity: bool) -> Self {
        Bond {
            id,
            support,
            identity,
        }
    }

    pub fn id(&self) -> &ElementId {
        &self.id
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }
}

/// A law violation found by [`Hyperstructure::validate`]. Violations are data,
/// not errors: hand-built or deserialized structures may carry any number of
/// them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// A bond id that does not appear in its level's element set.
    MissingBondElement { id: ElementId },
    /// A support member absent from the level below the bond.
    MissingSupportMember { id: ElementId, member: ElementId },
    /// One id bound to two or more distinct supports.
    Disjointness { id: ElementId },
    /// An identity bond whose support is not a singleton.
    IdentityArity { id: ElementId, arity: usize },
    /// A bond whose id level is not its support level plus one.
    LevelMismatch { id: ElementId, support_level: usize },
    /// An element with an empty key.
    EmptyKey { level: usize },
    /// A bond with an empty property tag.
    EmptyPropertyTag { id: ElementId },
}

impl Violation {
    /// The element the violation is reported against, for ordering.
    fn anchor(&self) -> ElementId {
        match self {
            Violation::MissingBondElement { id }
            | Violation::MissingSupportMember { id, .. }
            | Violation::Disjointness { id }
            | Violation::IdentityArity { id, .. }
            | Violation::LevelMismatch { id, .. }
            | Violation::EmptyPropertyTag { id } => id.clone(),
            Violation::EmptyKey { level } => ElementId::new(*level, ""),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingBondElement { id } => {
                write!(f, "bond id {id} is not an element of its level")
            }
            Violation::MissingSupportMember { id, member } => {
                write!(f, "bond {id} binds missing element {member}")
            }
            Violation::Disjointness { id } => {
                write!(f, "bond id {id} is bound to more than one support")
            }
            Violation::IdentityArity { id, arity } => {
                write!(f, "identity bond {id} binds {arity} elements instead of 1")
            }
            Violation::LevelMismatch { id, support_level } => write!(
                f,
                "bond {id} binds a support at level {support_level}, expected one level below"
            ),
            Violation::EmptyKey { level } => write!(f, "level {level} contains an empty key"),
            Violation::EmptyPropertyTag { id } => {
                write!(f, "bond {id} carries an empty property tag")
            }
        }
    }
}

/// All violations of a structure, in deterministic (level, key) order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "valid: no violations")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// The leveled bond structure. See the module docs for the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperstructure {
    levels: Vec<BTreeSet<String>>,
    bonds: Vec<Bond>,
    obs: BTreeMap<ElementId, BTreeSet<Property>>,
}

impl Hyperstructure {
    /// An empty structure with levels `0..=depth`.
    pub fn new(depth: usize) -> Self {
        Hyperstructure {
            levels: vec![BTreeSet::new(); depth + 1],
            bonds: Vec::new(),
            obs: BTreeMap::new(),
        }
    }

    /// Assembles a structure from raw parts without validation; pair with
    /// [`Hyperstructure::validate`] when the parts are untrusted. Bond records
    /// are canonically sorted and exact duplicates dropped.
    pub fn from_parts(levels: Vec<BTreeSet<String>>, bonds: Vec<Bond>) -> Self {
        let levels = if levels.is_empty() {
            vec![BTreeSet::new()]
        } else {
            levels
        };
        let mut h = Hyperstructure {
            levels,
            bonds,
            obs: BTreeMap::new(),
        };
        h.canonicalize_bonds();
        h
    }

    fn canonicalize_bonds(&mut self) {
        self.bonds.sort();
        self.bonds.dedup();
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> Result<&BTreeSet<String>, StructureError> {
        self.levels.get(i).ok_or(StructureError::LevelOutOfRange {
            level: i,
            depth: self.depth(),
        })
    }

    pub fn levels(&self) -> &[BTreeSet<String>] {
        &self.levels
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn contains(&self, id: &ElementId) -> bool {
        self.levels
            .get(id.level)
            .is_some_and(|l| l.contains(&id.key))
    }

    pub fn element_count(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().map(move |k| ElementId::new(i, k.clone())))
    }

    /// Bond record for `id`, if `id` is a bond.
    pub fn bond(&self, id: &ElementId) -> Option<&Bond> {
        self.bonds.iter().find(|b| b.id() == id)
    }

    /// Returns a copy with `key` inserted at `level`.
    pub fn with_element(&self, level: usize, key: &str) -> Result<Self, StructureError> {
        if key.is_empty() {
            return Err(StructureError::EmptyKey);
        }
        if level > self.depth() {
            return Err(StructureError::LevelOutOfRange {
                level,
                depth: self.depth(),
            });
        }
        let id = ElementId::new(level, key);
        if self.contains(&id) {
            return Err(StructureError::DuplicateElement(id));
        }
        let mut next = self.clone();
        next.levels[level].insert(key.to_string());
        Ok(next)
    }

    /// Attaches an observed property to an existing element.
    pub fn with_obs(&self, id: &ElementId, property: Property) -> Result<Self, StructureError> {
        if !self.contains(id) {
            return Err(StructureError::UnknownElement(id.clone()));
        }
        if property.tag.is_empty() {
            return Err(StructureError::EmptyPropertyTag);
        }
        let mut next = self.clone();
        next.obs.entry(id.clone()).or_default().insert(property);
        Ok(next)
    }

    /// Observed properties of an element (empty when none were attached).
    pub fn obs(&self, id: &ElementId) -> BTreeSet<Property> {
        self.obs.get(id).cloned().unwrap_or_default()
    }

    /// Adds a bond with the given support; the bond id is inserted at the
    /// level above the support. Re-adding an identical bond is a no-op;
    /// claiming an id already bound to a different support is a clash.
    pub fn add_bond(
        &self,
        support: Support,
        id_key: &str,
        identity: bool,
    ) -> Result<Self, StructureError> {
        if id_key.is_empty() {
            return Err(StructureError::EmptyKey);
        }
        if identity && support.members().len() != 1 {
            return Err(StructureError::IdentityArity {
                got: support.members().len(),
            });
        }
        let bond_level = support.level() + 1;
        if bond_level > self.depth() {
            return Err(StructureError::LevelOverflow {
                level: bond_level,
                depth: self.depth(),
            });
        }
        for member in support.member_ids() {
            if !self.contains(&member) {
                return Err(StructureError::UnknownElement(member));
            }
        }
        let id = ElementId::new(bond_level, id_key);
        if let Some(existing) = self.bond(&id) {
            if *existing.support() == support && existing.is_identity() == identity {
                return Ok(self.clone());
            }
            return Err(StructureError::BondClash { id });
        }
        let mut next = self.clone();
        next.levels[bond_level].insert(id_key.to_string());
        next.bonds.push(Bond::new(id, support, identity));
        next.canonicalize_bonds();
        Ok(next)
    }

    /// The support bound by bond `id`.
    pub fn boundary(&self, id: &ElementId) -> Result<&Support, StructureError> {
        self.bond(id)
            .map(Bond::support)
            .ok_or_else(|| StructureError::UnknownElement(id.clone()))
    }

    /// Checks every law and reports all violations in (level, key) order.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (level, keys) in self.levels.iter().enumerate() {
            if keys.contains("") {
                violations.push(Violation::EmptyKey { level });
            }
        }
        for bond in &self.bonds {
            let id = bond.id().clone();
            if !self.contains(&id) {
                violations.push(Violation::MissingBondElement { id: id.clone() });
            }
            if bond.support().level() + 1 != id.level {
                violations.push(Violation::LevelMismatch {
                    id: id.clone(),
                    support_level: bond.support().level(),
                });
            }
            for member in bond.support().member_ids() {
                if !self.contains(&member) {
                    violations.push(Violation::MissingSupportMember {
                        id: id.clone(),
                        member,
                    });
                }
            }
            if bond.is_identity() && bond.support().members().len() != 1 {
                violations.push(Violation::IdentityArity {
                    id: id.clone(),
                    arity: bond.support().members().len(),
                });
            }
            if bond.support().property().tag.is_empty() {
                violations.push(Violation::EmptyPropertyTag { id });
            }
        }
        // Disjointness: one id may carry at most one bond record.
        let mut by_id: BTreeMap<&ElementId, usize> = BTreeMap::new();
        for bond in &self.bonds {
            *by_id.entry(bond.id()).or_insert(0) += 1;
        }
        for (id, records) in by_id {
            if records > 1 {
                violations.push(Violation::Disjointness { id: id.clone() });
            }
        }
        violations.sort_by_key(|v| (v.anchor(), format!("{v:?}")));
        violations.dedup();
        ValidationReport { violations }
    }

    /// Relabels every element through `f(level, key)`; fails if `f` is not
    /// injective per level.
    pub fn rename(&self, f: impl Fn(usize, &str) -> String) -> Result<Self, StructureError> {
        let mut levels = Vec::with_capacity(self.levels.len());
        for (i, keys) in self.levels.iter().enumerate() {
            let mut renamed = BTreeSet::new();
            for key in keys {
                let new = f(i, key);
                if new.is_empty() {
                    return Err(StructureError::EmptyKey);
                }
                if !renamed.insert(new.clone()) {
                    return Err(StructureError::RenameCollision(ElementId::new(i, new)));
                }
            }
            levels.push(renamed);
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| {
                let support = Support::new(
                    b.support().level(),
                    b.support()
                        .members()
                        .iter()
                        .map(|k| f(b.support().level(), k)),
                    b.support().property().clone(),
                )?;
                Ok(Bond::new(
                    ElementId::new(b.id().level, f(b.id().level, &b.id().key)),
                    support,
                    b.is_identity(),
                ))
            })
            .collect::<Result<Vec<_>, StructureError>>()?;
        let mut obs = BTreeMap::new();
        for (id, props) in &self.obs {
            obs.insert(
                ElementId::new(id.level, f(id.level, &id.key)),
                props.clone(),
            );
        }
        let mut out = Hyperstructure {
            levels,
            bonds,
            obs,
        };
        out.canonicalize_bonds();
        Ok(out)
    }

    /// Transports the structure onto a new ground set through `phi`: the
    /// result has level 0 = domain of `phi`, higher levels copied. A level-1
    /// bond over support `S` induces a bond over the full preimage of `S`
    /// exactly when the preimage's image is all of `S`; identity flags drop
    /// unless the preimage stays a singleton.
    pub fn push_forward(
        &self,
        phi: &BTreeMap<String, String>,
    ) -> Result<Self, StructureError> {
        let ground = self.level(0)?;
        for (x, image) in phi {
            if x.is_empty() {
                return Err(StructureError::EmptyKey);
            }
            if !ground.contains(image) {
                return Err(StructureError::UnknownElement(ElementId::new(
                    0,
                    image.clone(),
                )));
            }
        }
        let mut levels = self.levels.clone();
        levels[0] = phi.keys().cloned().collect();
        let mut bonds = Vec::new();
        for bond in &self.bonds {
            if bond.support().level() > 0 {
                bonds.push(bond.clone());
                continue;
            }
            let target = bond.support().members();
            let preimage: BTreeSet<String> = phi
                .iter()
                .filter(|(_, image)| target.contains(*image))
                .map(|(x, _)| x.clone())
                .collect();
            let image: BTreeSet<&String> = preimage.iter().map(|x| &phi[x]).collect();
            if image.len() != target.len() || preimage.is_empty() {
                continue; // some bound element has no preimage
            }
            let identity = bond.is_identity() && preimage.len() == 1;
            let support = Support::new(0, preimage, bond.support().property().clone())?;
            bonds.push(Bond::new(bond.id().clone(), support, identity));
        }
        Ok(Hyperstructure::from_parts(levels, bonds))
    }

    /// Level-wise disjoint union, left keys prefixed `L:` and right keys
    /// `R:`. Depths are equalized by padding with empty top levels. With
    /// `add_top`, a new top level holds one bond binding every element that
    /// was at the previous top level.
    pub fn fuse(&self, other: &Self, add_top: bool) -> Self {
        let depth = self.depth().max(other.depth());
        let mut levels: Vec<BTreeSet<String>> = vec![BTreeSet::new(); depth + 1];
        for (i, keys) in self.levels.iter().enumerate() {
            levels[i].extend(keys.iter().map(|k| format!("L:{k}")));
        }
        for (i, keys) in other.levels.iter().enumerate() {
            levels[i].extend(keys.iter().map(|k| format!("R:{k}")));
        }
        let mut bonds = Vec::new();
        for (prefix, source) in [("L", self), ("R", other)] {
            for bond in &source.bonds {
                let support = Support::new(
                    bond.support().level(),
                    bond.support()
                        .members()
                        .iter()
                        .map(|k| format!("{prefix}:{k}")),
                    bond.support().property().clone(),
                )
                .expect("prefixing preserves support well-formedness");
                bonds.push(Bond::new(
                    ElementId::new(bond.id().level, format!("{prefix}:{}", bond.id().key)),
                    support,
                    bond.is_identity(),
                ));
            }
        }
        let mut fused = Hyperstructure::from_parts(levels, bonds);
        if add_top {
            let top_members = fused.levels[depth].clone();
            fused.levels.push(BTreeSet::new());
            if !top_members.is_empty() {
                let support = Support::new(depth, top_members, Property::tag("fuse"))
                    .expect("non-empty top support");
                fused = fused
                    .add_bond(support, "top", false)
                    .expect("fresh top level cannot clash");
            }
        }
        fused
    }

    /// Multiset of support sizes over all bonds, a cheap structural
    /// invariant for distinguishing non-isomorphic structures.
    pub fn support_size_multiset(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for bond in &self.bonds {
            *out.entry(bond.support().members().len()).or_insert(0) += 1;
        }
        out
    }

    /// Deterministic DOT rendering: one cluster per non-empty level, an edge
    /// from each bond down to each member it binds, identity bonds dashed.
    pub fn export_dot(&self) -> String {
        fn escape(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("digraph hyperstructure {\n  rankdir=BT;\n");
        for (i, keys) in self.levels.iter().enumerate() {
            if keys.is_empty() {
                continue;
            }
            out.push_str(&format!(
                "  subgraph cluster_level_{i} {{\n    label=\"level {i}\";\n"
            ));
            for key in keys {
                out.push_str(&format!(
                    "    \"{}:{}\" [label=\"{}\"];\n",
                    i,
                    escape(key),
                    escape(key)
                ));
            }
            out.push_str("  }\n");
        }
        for bond in &self.bonds {
            let style = if bond.is_identity() {
                " [style=dashed]"
            } else {
                ""
            };
            for member in bond.support().members() {
                out.push_str(&format!(
                    "  \"{}:{}\" -> \"{}:{}\"{};\n",
                    bond.id().level,
                    escape(&bond.id().key),
                    bond.support().level(),
                    escape(member),
                    style
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the depth-1 structure of a hyperoperation `star` on `elements`:
/// level 0 is the ground set, and every `z` in `x * y` becomes a bond with id
/// `"x,y->z"` over `({x, y}, tag "x,y")`. A pair whose value set is empty is
/// an error, as is a value outside the ground set.
pub fn from_hyperoperation(
    elements: &BTreeSet<String>,
    mut star: impl FnMut(&str, &str) -> BTreeSet<String>,
) -> Result<Hyperstructure, StructureError> {
    let mut h = Hyperstructure::new(1);
    for x in elements {
        h = h.with_element(0, x)?;
    }
    for x in elements {
        for y in elements {
            let values = star(x, y);
            if values.is_empty() {
                return Err(StructureError::EmptyValue {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
            for z in values {
                if !elements.contains(&z) {
                    return Err(StructureError::UnknownElement(ElementId::new(0, z)));
                }
                let support = Support::new(
                    0,
                    [x.clone(), y.clone()],
                    Property::tag(format!("{x},{y}")),
                )?;
                h = h.add_bond(support, &format!("{x},{y}->{z}"), false)?;
            }
        }
    }
    Ok(h)
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("levels array has {got} entries but depth is {depth}")]
    DepthMismatch { depth: usize, got: usize },
    #[error("bond {id:?} has level {level}, valid range is 1..={depth}")]
    BondLevelOutOfRange {
        id: String,
        level: usize,
        depth: usize,
    },
    #[error("bond {id:?} is malformed: {reason}")]
    BadBond { id: String, reason: String },
}

#[derive(Serialize, Deserialize)]
struct BondRecordFile {
    id: String,
    level: usize,
    members: Vec<String>,
    property: Property,
    identity: bool,
}

#[derive(Serialize, Deserialize)]
struct HyperstructureFile {
    depth: usize,
    levels: Vec<Vec<String>>,
    bonds: Vec<BondRecordFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    obs: BTreeMap<String, Vec<Property>>,
}

impl Hyperstructure {
    /// Canonical single-line JSON. Level arrays, member arrays and the bond
    /// list are all sorted, so equal structures serialize byte-identically.
    pub fn to_json(&self) -> String {
        let file = HyperstructureFile {
            depth: self.depth(),
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().cloned().collect())
                .collect(),
            bonds: self
                .bonds
                .iter()
                .map(|b| BondRecordFile {
                    id: b.id().key.clone(),
                    level: b.id().level,
                    members: b.support().members().iter().cloned().collect(),
                    property: b.support().property().clone(),
                    identity: b.is_identity(),
                })
                .collect(),
            obs: self
                .obs
                .iter()
                .map(|(id, props)| (id.to_string(), props.iter().cloned().collect()))
                .collect(),
        };
        serde_json::to_string(&file).expect("hyperstructure serializes")
    }

    /// Parses the wire format. Law violations (clashing ids, missing members,
    /// identity arity) are preserved for [`Hyperstructure::validate`] to
    /// report; only structurally unusable input (bad JSON, bond levels
    /// outside the declared level range) is rejected here.
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        let file: HyperstructureFile = serde_json::from_str(text)?;
        if file.levels.len() != file.depth + 1 {
            return Err(FileError::DepthMismatch {
                depth: file.depth,
                got: file.levels.len(),
            });
        }
        let levels: Vec<BTreeSet<String>> = file
            .levels
            .into_iter()
            .map(|l| l.into_iter().collect())
            .collect();
        let mut bonds = Vec::new();
        for record in file.bonds {
            if record.level == 0 || record.level > file.depth {
                return Err(FileError::BondLevelOutOfRange {
                    id: record.id,
                    level: record.level,
                    depth: file.depth,
                });
            }
            let support = Support::new(record.level - 1, record.members, record.property)
                .map_err(|e| FileError::BadBond {
                    id: record.id.clone(),
                    reason: e.to_string(),
                })?;
            bonds.push(Bond::new(
                ElementId::new(record.level, record.id),
                support,
                record.identity,
            ));
        }
        let mut h = Hyperstructure::from_parts(levels, bonds);
        for (id, props) in file.obs {
            let (level, key) = id.split_once(':').ok_or_else(|| FileError::BadBond {
                id: id.clone(),
                reason: "obs key must be level:key".into(),
            })?;
            let level: usize = level.parse().map_err(|_| FileError::BadBond {
                id: id.clone(),
                reason: "obs level must be an integer".into(),
            })?;
            h.obs
                .insert(ElementId::new(level, key), props.into_iter().collect());
        }
        Ok(h)
    }
}
