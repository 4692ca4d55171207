//! Nested open sets of a finite topology as a hyperstructure.
//!
//! A nest family assigns open sets to index words `U(i_1,...,i_k)` so that
//! dropping any index can only enlarge the set. Building the hyperstructure
//! puts the longest words at level 0 and each word binds its one-step
//! extensions, so the larger open sets are bonds of the smaller.
//!
//! The prefactorization check takes a two-stage nesting (disjoint inner opens
//! inside disjoint mid opens inside one outer open) and compares the two
//! composite values a monoid assignment produces for it: the fold of the
//! inner values against the fold of the mid values. For the free multiset
//! assignment the mid values are the unions of their inner groups, so the
//! composites agree on every admissible nesting; a table assignment commits
//! to independent values and can disagree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monoid::{multiset_union, FiniteMonoid, MonoidError, Multiset};
use crate::structure::{Hyperstructure, Property, StructureError, Support};

pub type PointSet = BTreeSet<String>;

#[derive(Debug, Error)]
pub enum NestError {
    #[error("point {0:?} is not a point of the space")]
    UnknownPoint(String),
    #[error("the empty set is missing from the open family")]
    MissingEmpty,
    #[error("the full point set is missing from the open family")]
    MissingFull,
    #[error("opens are not closed under union: {0} and {1}")]
    NotClosedUnderUnion(String, String),
    #[error("opens are not closed under intersection: {0} and {1}")]
    NotClosedUnderIntersection(String, String),
    #[error("word {word} has length {len}, family depth is {depth}")]
    WordTooLong { word: String, len: usize, depth: usize },
    #[error("word {word} uses index 0; indices are 1-based")]
    ZeroIndex { word: String },
    #[error("assigned set of {word} is not open: {set}")]
    NotOpen { word: String, set: String },
    #[error("{word} is not contained in {parent} obtained by dropping position {position}")]
    NotNested {
        word: String,
        parent: String,
        position: usize,
    },
    #[error("no defined word fills the hole in {0}")]
    UnknownWord(String),
    #[error("pattern must contain exactly one hole, found {0}")]
    BadPattern(usize),
    #[error("{what} opens {a} and {b} overlap")]
    NotDisjoint { what: &'static str, a: String, b: String },
    #[error("{set} is contained in {count} mid opens, expected exactly one")]
    AmbiguousContainment { set: String, count: usize },
    #[error("{set} is not contained in {container}")]
    NotContained { set: String, container: String },
    #[error("no value assigned to open {0}")]
    MissingValue(String),
    #[error("value for {open} has the wrong kind for this carrier")]
    ValueKind { open: String },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
}

fn set_label(s: &PointSet) -> String {
    let mut out = String::from("{");
    for (i, p) in s.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(p);
    }
    out.push('}');
    out
}

/// A finite topological space given by its full open-set family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    points: PointSet,
    opens: BTreeSet<PointSet>,
}

impl FiniteTopology {
    /// Checks the axioms: the family must contain the empty and full sets and
    /// be closed under pairwise union and intersection.
    pub fn new(
        points: PointSet,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, NestError> {
        let opens: BTreeSet<PointSet> = opens.into_iter().collect();
        for open in &opens {
            if let Some(p) = open.iter().find(|p| !points.contains(*p)) {
                return Err(NestError::UnknownPoint(p.clone()));
            }
        }
        if !opens.contains(&PointSet::new()) {
            return Err(NestError::MissingEmpty);
        }
        if !opens.contains(&points) {
            return Err(NestError::MissingFull);
        }
        let list: Vec<&PointSet> = opens.iter().collect();
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                let union: PointSet = a.union(b).cloned().collect();
                if !opens.contains(&union) {
                    return Err(NestError::NotClosedUnderUnion(set_label(a), set_label(b)));
                }
                let inter: PointSet = a.intersection(b).cloned().collect();
                if !opens.contains(&inter) {
                    return Err(NestError::NotClosedUnderIntersection(
                        set_label(a),
                        set_label(b),
                    ));
                }
            }
        }
        Ok(FiniteTopology { points, opens })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn opens(&self) -> &BTreeSet<PointSet> {
        &self.opens
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        self.opens.contains(s)
    }

    /// The openness observation: errors on points outside the space, then
    /// answers by membership in the open family.
    pub fn check_openness(&self, s: &PointSet) -> Result<bool, NestError> {
        if let Some(p) = s.iter().find(|p| !self.points.contains(*p)) {
            return Err(NestError::UnknownPoint(p.clone()));
        }
        Ok(self.is_open(s))
    }
}

/// An index word `U(i_1,...,i_k)` with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NestWord(pub Vec<u32>);

impl NestWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with position `j` (0-based) removed.
    pub fn drop_position(&self, j: usize) -> NestWord {
        let mut indices = self.0.clone();
        indices.remove(j);
        NestWord(indices)
    }

    pub fn child(&self, index: u32) -> NestWord {
        let mut indices = self.0.clone();
        indices.push(index);
        NestWord(indices)
    }

    /// Parses a comma-joined index key; the empty string is the root word.
    pub fn parse(key: &str) -> Result<Self, NestError> {
        if key.is_empty() {
            return Ok(NestWord::default());
        }
        let indices = key
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| NestError::UnknownWord(format!("U({key})")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NestWord(indices))
    }
}

impl fmt::Display for NestWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U(")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, ")")
    }
}

/// A partial assignment of open sets to words of length at most `depth`.
/// Missing words are simply undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestFamily {
    depth: usize,
    words: BTreeMap<NestWord, PointSet>,
}

impl NestFamily {
    pub fn new(
        depth: usize,
        words: BTreeMap<NestWord, PointSet>,
    ) -> Result<Self, NestError> {
        for word in words.keys() {
            if word.len() > depth {
                return Err(NestError::WordTooLong {
                    word: word.to_string(),
                    len: word.len(),
                    depth,
                });
            }
            if word.0.contains(&0) {
                return Err(NestError::ZeroIndex {
                    word: word.to_string(),
                });
            }
        }
        Ok(NestFamily { depth, words })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &BTreeMap<NestWord, PointSet> {
        &self.words
    }

    pub fn get(&self, word: &NestWord) -> Option<&PointSet> {
        self.words.get(word)
    }

    /// Verifies every assigned set is open and every defined drop-inclusion
    /// holds: `U(w)` must lie inside `U(w with any one position removed)`
    /// whenever the shorter word is also defined.
    pub fn check(&self, topology: &FiniteTopology) -> Result<(), NestError> {
        for (word, set) in &self.words {
            if !topology.is_open(set) {
                return Err(NestError::NotOpen {
                    word: word.to_string(),
                    set: set_label(set),
                });
            }
            for j in 0..word.len() {
                let parent = word.drop_position(j);
                if let Some(parent_set) = self.words.get(&parent) {
                    if !set.is_subset(parent_set) {
                        return Err(NestError::NotNested {
                            word: word.to_string(),
                            parent: parent.to_string(),
                            position: j + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the nest hyperstructure: level `j` holds the defined words of
/// length `depth - j` (so the innermost sets sit at level 0), and every word
/// with defined one-step extensions binds them under the tag `open`.
pub fn build_nest(
    topology: &FiniteTopology,
    family: &NestFamily,
) -> Result<Hyperstructure, NestError> {
    family.check(topology)?;
    let depth = family.depth();
    let mut h = Hyperstructure::new(depth);
    for word in family.words().keys() {
        h = h.with_element(depth - word.len(), &word.to_string())?;
    }
    for word in family.words().keys() {
        if word.len() == depth {
            continue;
        }
        let children: Vec<String> = family
            .words()
            .keys()
            .filter(|w| w.len() == word.len() + 1 && w.0[..word.len()] == word.0[..])
            .map(|w| w.to_string())
            .collect();
        if children.is_empty() {
            continue;
        }
        let level = depth - word.len();
        let support = Support::new(level - 1, children, Property::tag("open"))?;
        h = h.add_bond(support, &word.to_string(), false)?;
    }
    Ok(h)
}

/// The boundary of a word with one hole: all defined words that match the
/// pattern, where exactly one position is `None`.
pub fn nest_boundary(
    family: &NestFamily,
    pattern: &[Option<u32>],
) -> Result<BTreeSet<NestWord>, NestError> {
    let holes = pattern.iter().filter(|p| p.is_none()).count();
    if holes != 1 {
        return Err(NestError::BadPattern(holes));
    }
    let matches: BTreeSet<NestWord> = family
        .words()
        .keys()
        .filter(|word| {
            word.len() == pattern.len()
                && word
                    .0
                    .iter()
                    .zip(pattern)
                    .all(|(&i, p)| p.is_none() || *p == Some(i))
        })
        .cloned()
        .collect();
    if matches.is_empty() {
        let shown: Vec<String> = pattern
            .iter()
            .map(|p| p.map_or("_".to_string(), |i| i.to_string()))
            .collect();
        return Err(NestError::UnknownWord(format!("U({})", shown.join(","))));
    }
    Ok(matches)
}

// ---------------------------------------------------------------------------
// Prefactorization compatibility
// ---------------------------------------------------------------------------

/// Value carrier for open-set assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestCarrier {
    /// A verified finite commutative monoid; values are element names.
    Table(FiniteMonoid),
    /// The free commutative monoid of multisets under union.
    Multiset,
}

/// A value in one of the carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestValue {
    Element(String),
    Multiset(Multiset),
}

impl fmt::Display for NestValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NestValue::Element(name) => write!(f, "{name}"),
            NestValue::Multiset(m) => {
                write!(f, "{{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// An assignment of carrier values to open sets, folded by the carrier's
/// combine.
#[derive(Debug, Clone)]
pub struct MonoidAssignment {
    carrier: NestCarrier,
    values: BTreeMap<PointSet, NestValue>,
}

impl MonoidAssignment {
    pub fn new(carrier: NestCarrier, values: BTreeMap<PointSet, NestValue>) -> Self {
        MonoidAssignment { carrier, values }
    }

    pub fn carrier(&self) -> &NestCarrier {
        &self.carrier
    }

    pub fn value(&self, open: &PointSet) -> Option<&NestValue> {
        self.values.get(open)
    }

    /// The free multiset assignment over a nesting: each inner open becomes
    /// its own generator, each mid open the union of the generators of the
    /// inner opens it contains, the outer open the union of all of them.
    pub fn free_multiset(inner: &[PointSet], mid: &[PointSet], outer: &PointSet) -> Self {
        let mut values = BTreeMap::new();
        let generator = |s: &PointSet| {
            let mut m = Multiset::new();
            m.insert(set_label(s), 1);
            m
        };
        for open in inner {
            values.insert(open.clone(), NestValue::Multiset(generator(open)));
        }
        for v in mid {
            let group: Vec<Multiset> = inner
                .iter()
                .filter(|u| u.is_subset(v))
                .map(&generator)
                .collect();
            values.insert(
                v.clone(),
                NestValue::Multiset(multiset_union(group.iter())),
            );
        }
        let all: Vec<Multiset> = inner.iter().map(generator).collect();
        values.insert(
            outer.clone(),
            NestValue::Multiset(multiset_union(all.iter())),
        );
        MonoidAssignment::new(NestCarrier::Multiset, values)
    }

    fn combine(&self, opens: &[PointSet]) -> Result<NestValue, NestError> {
        match &self.carrier {
            NestCarrier::Table(monoid) => {
                let mut names = Vec::with_capacity(opens.len());
                for open in opens {
                    match self.values.get(open) {
                        Some(NestValue::Element(name)) => names.push(name.as_str()),
                        Some(_) => {
                            return Err(NestError::ValueKind {
                                open: set_label(open),
                            })
                        }
                        None => return Err(NestError::MissingValue(set_label(open))),
                    }
                }
                Ok(NestValue::Element(monoid.combine(names)?))
            }
            NestCarrier::Multiset => {
                let mut parts = Vec::with_capacity(opens.len());
                for open in opens {
                    match self.values.get(open) {
                        Some(NestValue::Multiset(m)) => parts.push(m),
                        Some(_) => {
                            return Err(NestError::ValueKind {
                                open: set_label(open),
                            })
                        }
                        None => return Err(NestError::MissingValue(set_label(open))),
                    }
                }
                Ok(NestValue::Multiset(multiset_union(parts)))
            }
        }
    }
}

/// Outcome of the prefactorization compatibility check: the composite value
/// of the inner decomposition, the composite of the mid decomposition, and
/// whether they agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefactorizationCheck {
    pub commutes: bool,
    pub via_inner: NestValue,
    pub via_mid: NestValue,
}

/// Checks the two-stage nesting `inner -> mid -> outer`: all listed sets must
/// be open, each list pairwise disjoint, every inner open inside exactly one
/// mid open and every mid open inside the outer. The check then compares the
/// composite of the inner values with the composite of the mid values.
pub fn check_prefactorization(
    topology: &FiniteTopology,
    assignment: &MonoidAssignment,
    inner: &[PointSet],
    mid: &[PointSet],
    outer: &PointSet,
) -> Result<PrefactorizationCheck, NestError> {
    for open in inner.iter().chain(mid).chain([outer]) {
        if !topology.is_open(open) {
            return Err(NestError::NotOpen {
                word: "listed open".into(),
                set: set_label(open),
            });
        }
    }
    for (what, list) in [("inner", inner), ("mid", mid)] {
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                if a.intersection(b).next().is_some() {
                    return Err(NestError::NotDisjoint {
                        what,
                        a: set_label(a),
                        b: set_label(b),
                    });
                }
            }
        }
    }
    for u in inner {
        let containers = mid.iter().filter(|v| u.is_subset(v)).count();
        if containers != 1 {
            return Err(NestError::AmbiguousContainment {
                set: set_label(u),
                count: containers,
            });
        }
    }
    for v in mid {
        if !v.is_subset(outer) {
            return Err(NestError::NotContained {
                set: set_label(v),
                container: set_label(outer),
            });
        }
    }
    let via_inner = assignment.combine(inner)?;
    let via_mid = assignment.combine(mid)?;
    Ok(PrefactorizationCheck {
        commutes: via_inner == via_mid,
        via_inner,
        via_mid,
    })
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TopologyFile {
    points: Vec<String>,
    opens: Vec<Vec<String>>,
}

impl FiniteTopology {
    pub fn from_json(text: &str) -> Result<Self, NestError> {
        let file: TopologyFile = serde_json::from_str(text)?;
        FiniteTopology::new(
            file.points.into_iter().collect(),
            file.opens
                .into_iter()
                .map(|o| o.into_iter().collect::<PointSet>()),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TopologyFile {
            points: self.points.iter().cloned().collect(),
            opens: self
                .opens
                .iter()
                .map(|o| o.iter().cloned().collect())
                .collect(),
        })
        .expect("topology serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    depth: usize,
    words: BTreeMap<String, Vec<String>>,
}

impl NestFamily {
    /// Parses `{"depth": n, "words": {"1,2": ["a","b"], ...}}`; the empty key
    /// is the root word.
    pub fn from_json(text: &str) -> Result<Self, NestError> {
        let file: FamilyFile = serde_json::from_str(text)?;
        let mut words = BTreeMap::new();
        for (key, points) in file.words {
            words.insert(NestWord::parse(&key)?, points.into_iter().collect());
        }
        NestFamily::new(file.depth, words)
    }

    pub fn to_json(&self) -> String {
        let words: BTreeMap<String, Vec<String>> = self
            .words
            .iter()
            .map(|(word, set)| {
                let key = word
                    .0
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, set.iter().cloned().collect())
            })
            .collect();
        serde_json::to_string(&FamilyFile {
            depth: self.depth,
            words,
        })
        .expect("family serializes")
    }
}
