//! Multimodules over finite rings.
//!
//! A parametrized family of rings acts on a finite abelian group through an
//! explicit action table indexed by action parameter, family position, ring
//! element and module element. All structures are finite tables, so the
//! module axioms (additivity in the module, additivity and compatibility in
//! the ring, unitality, and optional pairwise commutativity across family
//! positions) are verified by full enumeration with concrete witnesses.
//! Action levels stack into a hyperstructure whose boundary map returns each
//! object's acting family.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structure::{Hyperstructure, Property, StructureError, Support};
use crate::tables::{OpTable, TableError};

/// Violation cap for [`ActionSystem::verify`] reports.
const MAX_REPORTED: usize = 10;

#[derive(Debug, Error)]
pub enum MultimodError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{structure} addition is not an abelian group: {reason}")]
    NotAbelian { structure: String, reason: String },
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    MulNotAssociative { a: String, b: String, c: String },
    #[error("{one} is not a multiplicative unit: fails on {witness}")]
    MulNotUnital { one: String, witness: String },
    #[error("distributivity fails at ({a}, {b}, {c})")]
    NotDistributive { a: String, b: String, c: String },
    #[error("element count {elements} does not match table size {table}")]
    SizeMismatch { elements: usize, table: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateElement(String),
    #[error("action table shape is wrong: {0}")]
    BadActionShape(String),
    #[error("index out of range: {what} = {got}, bound {bound}")]
    IndexOutOfRange {
        what: &'static str,
        got: usize,
        bound: usize,
    },
    #[error("module axioms fail for {name:?}:\n{report}")]
    AxiomFailure { name: String, report: AxiomReport },
    #[error("level {level} object {name:?} acts from {got} objects, expected {want}")]
    ActingArity {
        level: usize,
        name: String,
        want: usize,
        got: usize,
    },
    #[error("level {level} object {name:?} names unknown acting object {acting:?}")]
    UnknownActing {
        level: usize,
        name: String,
        acting: String,
    },
    #[error("level 1 object {name:?}: acting ring {acting:?} differs from the named level-0 ring")]
    RingMismatch { name: String, acting: String },
    #[error("duplicate object name {0:?} in the level stack")]
    DuplicateObject(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} must be prime and small (2..=7)")]
    BadPrime(usize),
}

fn check_abelian(
    structure: &str,
    table: &OpTable,
    zero: usize,
    names: &[String],
) -> Result<(), MultimodError> {
    let fail = |reason: String| MultimodError::NotAbelian {
        structure: structure.to_string(),
        reason,
    };
    if let Some((a, b, c)) = table.associativity_witness() {
        return Err(fail(format!(
            "({} + {}) + {} != {} + ({} + {})",
            names[a], names[b], names[c], names[a], names[b], names[c]
        )));
    }
    if let Some((a, b)) = table.commutativity_witness() {
        return Err(fail(format!("{} + {} != {} + {}", names[a], names[b], names[b], names[a])));
    }
    if zero >= table.size() {
        return Err(MultimodError::Table(TableError::BadDesignated {
            index: zero,
            n: table.size(),
        }));
    }
    if let Some(w) = table.unit_witness(zero) {
        return Err(fail(format!("{} is not a zero for {}", names[zero], names[w])));
    }
    if let Some(w) = table.inverse_witness(zero) {
        return Err(fail(format!("{} has no additive inverse", names[w])));
    }
    Ok(())
}

fn check_names(elements: &[String], table_size: usize) -> Result<(), MultimodError> {
    if elements.len() != table_size {
        return Err(MultimodError::SizeMismatch {
            elements: elements.len(),
            table: table_size,
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for name in elements {
        if !seen.insert(name) {
            return Err(MultimodError::DuplicateElement(name.clone()));
        }
    }
    Ok(())
}

/// A finite unital ring as explicit addition and multiplication tables,
/// law-checked exhaustively at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    elements: Vec<String>,
    add: OpTable,
    mul: OpTable,
    zero: usize,
    one: usize,
}

impl FiniteRing {
    pub fn new(
        elements: Vec<String>,
        add: OpTable,
        mul: OpTable,
        zero: usize,
        one: usize,
    ) -> Result<Self, MultimodError> {
        check_names(&elements, add.size())?;
        if mul.size() != add.size() {
            return Err(MultimodError::SizeMismatch {
                elements: add.size(),
                table: mul.size(),
            });
        }
        check_abelian("ring", &add, zero, &elements)?;
        if let Some((a, b, c)) = mul.associativity_witness() {
            return Err(MultimodError::MulNotAssociative {
                a: elements[a].clone(),
                b: elements[b].clone(),
                c: elements[c].clone(),
            });
        }
        if one >= elements.len() {
            return Err(MultimodError::Table(TableError::BadDesignated {
                index: one,
                n: elements.len(),
            }));
        }
        if let Some(w) = mul.unit_witness(one) {
            return Err(MultimodError::MulNotUnital {
                one: elements[one].clone(),
                witness: elements[w].clone(),
            });
        }
        let n = elements.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = mul.op(a, add.op(b, c));
                    let right = add.op(mul.op(a, b), mul.op(a, c));
                    let left2 = mul.op(add.op(a, b), c);
                    let right2 = add.op(mul.op(a, c), mul.op(b, c));
                    if left != right || left2 != right2 {
                        return Err(MultimodError::NotDistributive {
                            a: elements[a].clone(),
                            b: elements[b].clone(),
                            c: elements[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(FiniteRing {
            elements,
            add,
            mul,
            zero,
            one,
        })
    }

    /// `Z_n` with the usual residue arithmetic.
    pub fn zn(n: usize) -> Self {
        assert!(n >= 1, "Z_n needs n >= 1");
        let add = OpTable::new(
            (0..n)
                .map(|i| (0..n).map(|j| (i + j) % n).collect())
                .collect(),
        )
        .expect("square residue table");
        let mul = OpTable::new(
            (0..n)
                .map(|i| (0..n).map(|j| (i * j) % n).collect())
                .collect(),
        )
        .expect("square residue table");
        FiniteRing::new(
            (0..n).map(|i| i.to_string()).collect(),
            add,
            mul,
            0,
            1 % n,
        )
        .expect("residue rings satisfy the ring laws")
    }

    /// 2x2 matrices over `Z_p` for a small prime `p`.
    pub fn m2_zp(p: usize) -> Result<Self, MultimodError> {
        if !(2..=7).contains(&p) || [4, 6].contains(&p) {
            return Err(MultimodError::BadPrime(p));
        }
        let count = p * p * p * p;
        let unpack = |i: usize| {
            let d = i % p;
            let c = (i / p) % p;
            let b = (i / (p * p)) % p;
            let a = i / (p * p * p);
            [a, b, c, d]
        };
        let pack = |m: [usize; 4]| ((m[0] * p + m[1]) * p + m[2]) * p + m[3];
        let add = OpTable::new(
            (0..count)
                .map(|i| {
                    (0..count)
                        .map(|j| {
                            let (x, y) = (unpack(i), unpack(j));
                            pack([
                                (x[0] + y[0]) % p,
                                (x[1] + y[1]) % p,
                                (x[2] + y[2]) % p,
                                (x[3] + y[3]) % p,
                            ])
                        })
                        .collect()
                })
                .collect(),
        )?;
        let mul = OpTable::new(
            (0..count)
                .map(|i| {
                    (0..count)
                        .map(|j| {
                            let (x, y) = (unpack(i), unpack(j));
                            pack([
                                (x[0] * y[0] + x[1] * y[2]) % p,
                                (x[0] * y[1] + x[1] * y[3]) % p,
                                (x[2] * y[0] + x[3] * y[2]) % p,
                                (x[2] * y[1] + x[3] * y[3]) % p,
                            ])
                        })
                        .collect()
                })
                .collect(),
        )?;
        let elements = (0..count)
            .map(|i| {
                let m = unpack(i);
                format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])
            })
            .collect();
        FiniteRing::new(elements, add, mul, 0, pack([1, 0, 0, 1]))
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.op(a, b)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul.op(a, b)
    }
}

/// A finite abelian group as an explicit addition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    elements: Vec<String>,
    add: OpTable,
    zero: usize,
}

impl FiniteModule {
    pub fn new(elements: Vec<String>, add: OpTable, zero: usize) -> Result<Self, MultimodError> {
        check_names(&elements, add.size())?;
        check_abelian("module", &add, zero, &elements)?;
        Ok(FiniteModule {
            elements,
            add,
            zero,
        })
    }

    /// The additive group of `Z_n`.
    pub fn zn(n: usize) -> Self {
        let ring = FiniteRing::zn(n);
        FiniteModule::new(ring.elements.clone(), ring.add.clone(), ring.zero)
            .expect("ring addition is abelian")
    }

    /// The additive group underlying a ring (the ring acting on itself).
    pub fn from_ring(ring: &FiniteRing) -> Self {
        FiniteModule::new(ring.elements.clone(), ring.add.clone(), ring.zero)
            .expect("ring addition is abelian")
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.op(a, b)
    }
}

/// One failed axiom instance with its full witness, element names resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `r.(m + m') != r.m + r.m'`
    Additivity {
        w: usize,
        t: usize,
        r: String,
        m: String,
        m2: String,
        lhs: String,
        rhs: String,
    },
    /// `(r + s).m != r.m + s.m`
    AddCompatibility {
        w: usize,
        t: usize,
        r: String,
        s: String,
        m: String,
        lhs: String,
        rhs: String,
    },
    /// `(r s).m != r.(s.m)`
    MulCompatibility {
        w: usize,
        t: usize,
        r: String,
        s: String,
        m: String,
        lhs: String,
        rhs: String,
    },
    /// `1.m != m`
    Unit {
        w: usize,
        t: usize,
        m: String,
        got: String,
    },
    /// `r_t.(r_u.m) != r_u.(r_t.m)` for distinct family positions
    Commutativity {
        w: usize,
        t: usize,
        u: usize,
        r: String,
        s: String,
        m: String,
        lhs: String,
        rhs: String,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Additivity {
                w,
                t,
                r,
                m,
                m2,
                lhs,
                rhs,
            } => write!(
                f,
                "additivity [w={w} t={t}]: {r}.({m} + {m2}) = {lhs} but {r}.{m} + {r}.{m2} = {rhs}"
            ),
            AxiomViolation::AddCompatibility {
                w,
                t,
                r,
                s,
                m,
                lhs,
                rhs,
            } => write!(
                f,
                "ring additivity [w={w} t={t}]: ({r} + {s}).{m} = {lhs} but {r}.{m} + {s}.{m} = {rhs}"
            ),
            AxiomViolation::MulCompatibility {
                w,
                t,
                r,
                s,
                m,
                lhs,
                rhs,
            } => write!(
                f,
                "compatibility [w={w} t={t}]: ({r}{s}).{m} = {lhs} but {r}.({s}.{m}) = {rhs}"
            ),
            AxiomViolation::Unit { w, t, m, got } => {
                write!(f, "unit [w={w} t={t}]: 1.{m} = {got}, expected {m}")
            }
            AxiomViolation::Commutativity {
                w,
                t,
                u,
                r,
                s,
                m,
                lhs,
                rhs,
            } => write!(
                f,
                "commutativity [w={w}]: positions {t} and {u} disagree on {r}, {s} acting on {m}: {lhs} vs {rhs}"
            ),
        }
    }
}

/// Result of exhaustive axiom verification; at most ten violations are kept.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    violations: Vec<AxiomViolation>,
    truncated: bool,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[AxiomViolation] {
        &self.violations
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Records a violation; returns whether enumeration should continue.
    fn push(&mut self, v: AxiomViolation) -> bool {
        self.violations.push(v);
        if self.violations.len() >= MAX_REPORTED {
            self.truncated = true;
            return false;
        }
        true
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "all module axioms hold");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        if self.truncated {
            writeln!(f, "... search stopped at {MAX_REPORTED} violations")?;
        }
        Ok(())
    }
}

/// A family of rings acting on one module through parametrized action tables
/// `act[w][t][r][m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSystem {
    rings: Vec<FiniteRing>,
    module: FiniteModule,
    act: Vec<Vec<Vec<Vec<usize>>>>,
    commuting: bool,
}

impl ActionSystem {
    /// Shape-checks the table: `act[w][t]` must be `|R_t| x |M|` with entries
    /// below `|M|`, for every action parameter `w`.
    pub fn new(
        rings: Vec<FiniteRing>,
        module: FiniteModule,
        act: Vec<Vec<Vec<Vec<usize>>>>,
        commuting: bool,
    ) -> Result<Self, MultimodError> {
        let bad = |msg: String| Err(MultimodError::BadActionShape(msg));
        if rings.is_empty() {
            return bad("ring family is empty".into());
        }
        if act.is_empty() {
            return bad("no action parameters".into());
        }
        for (w, per_t) in act.iter().enumerate() {
            if per_t.len() != rings.len() {
                return bad(format!(
                    "act[{w}] covers {} family positions, ring family has {}",
                    per_t.len(),
                    rings.len()
                ));
            }
            for (t, per_r) in per_t.iter().enumerate() {
                if per_r.len() != rings[t].size() {
                    return bad(format!(
                        "act[{w}][{t}] has {} ring rows, ring has {} elements",
                        per_r.len(),
                        rings[t].size()
                    ));
                }
                for (r, per_m) in per_r.iter().enumerate() {
                    if per_m.len() != module.size() {
                        return bad(format!(
                            "act[{w}][{t}][{r}] has {} module entries, module has {}",
                            per_m.len(),
                            module.size()
                        ));
                    }
                    if let Some(&v) = per_m.iter().find(|&&v| v >= module.size()) {
                        return bad(format!("act[{w}][{t}][{r}] maps into {v}, out of range"));
                    }
                }
            }
        }
        Ok(ActionSystem {
            rings,
            module,
            act,
            commuting,
        })
    }

    pub fn rings(&self) -> &[FiniteRing] {
        &self.rings
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn params(&self) -> usize {
        self.act.len()
    }

    pub fn commuting(&self) -> bool {
        self.commuting
    }

    /// Table lookup `act[w][t][r][m]` with range checks.
    pub fn act(&self, w: usize, t: usize, r: usize, m: usize) -> Result<usize, MultimodError> {
        let range = |what, got, bound| MultimodError::IndexOutOfRange { what, got, bound };
        if w >= self.act.len() {
            return Err(range("action parameter", w, self.act.len()));
        }
        if t >= self.rings.len() {
            return Err(range("family position", t, self.rings.len()));
        }
        if r >= self.rings[t].size() {
            return Err(range("ring element", r, self.rings[t].size()));
        }
        if m >= self.module.size() {
            return Err(range("module element", m, self.module.size()));
        }
        Ok(self.act[w][t][r][m])
    }

    /// Applies one ring element per family position, in ascending position
    /// order. When pairwise commutativity holds the order is immaterial.
    pub fn family_act(&self, w: usize, tuple: &[usize], m: usize) -> Result<usize, MultimodError> {
        if tuple.len() != self.rings.len() {
            return Err(MultimodError::IndexOutOfRange {
                what: "family tuple length",
                got: tuple.len(),
                bound: self.rings.len(),
            });
        }
        let mut acc = m;
        for (t, &r) in tuple.iter().enumerate() {
            acc = self.act(w, t, r, acc)?;
        }
        Ok(acc)
    }

    /// Exhaustively checks every module axiom over the full domain, stopping
    /// after ten violations. With `commuting` set, actions at distinct family
    /// positions must commute pairwise for every shared parameter.
    pub fn verify(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        let module = &self.module;
        let mname = |i: usize| module.name(i).to_string();
        'outer: for w in 0..self.act.len() {
            for (t, ring) in self.rings.iter().enumerate() {
                let rname = |i: usize| ring.name(i).to_string();
                let a = &self.act[w][t];
                for (m, &got) in a[ring.one()].iter().enumerate() {
                    if got != m
                        && !report.push(AxiomViolation::Unit {
                            w,
                            t,
                            m: mname(m),
                            got: mname(got),
                        })
                    {
                        break 'outer;
                    }
                }
                for r in 0..ring.size() {
                    for m in 0..module.size() {
                        for m2 in 0..module.size() {
                            let lhs = a[r][module.add(m, m2)];
                            let rhs = module.add(a[r][m], a[r][m2]);
                            if lhs != rhs
                                && !report.push(AxiomViolation::Additivity {
                                    w,
                                    t,
                                    r: rname(r),
                                    m: mname(m),
                                    m2: mname(m2),
                                    lhs: mname(lhs),
                                    rhs: mname(rhs),
                                })
                            {
                                break 'outer;
                            }
                        }
                    }
                    for s in 0..ring.size() {
                        for m in 0..module.size() {
                            let lhs = a[ring.add(r, s)][m];
                            let rhs = module.add(a[r][m], a[s][m]);
                            if lhs != rhs
                                && !report.push(AxiomViolation::AddCompatibility {
                                    w,
                                    t,
                                    r: rname(r),
                                    s: rname(s),
                                    m: mname(m),
                                    lhs: mname(lhs),
                                    rhs: mname(rhs),
                                })
                            {
                                break 'outer;
                            }
                            let lhs = a[ring.mul(r, s)][m];
                            let rhs = a[r][a[s][m]];
                            if lhs != rhs
                                && !report.push(AxiomViolation::MulCompatibility {
                                    w,
                                    t,
                                    r: rname(r),
                                    s: rname(s),
                                    m: mname(m),
                                    lhs: mname(lhs),
                                    rhs: mname(rhs),
                                })
                            {
                                break 'outer;
                            }
                        }
                    }
                }
            }
            if self.commuting {
                for t in 0..self.rings.len() {
                    for u in (t + 1)..self.rings.len() {
                        for r in 0..self.rings[t].size() {
                            for s in 0..self.rings[u].size() {
                                for m in 0..module.size() {
                                    let lhs = self.act[w][t][r][self.act[w][u][s][m]];
                                    let rhs = self.act[w][u][s][self.act[w][t][r][m]];
                                    if lhs != rhs
                                        && !report.push(AxiomViolation::Commutativity {
                                            w,
                                            t,
                                            u,
                                            r: self.rings[t].name(r).to_string(),
                                            s: self.rings[u].name(s).to_string(),
                                            m: mname(m),
                                            lhs: mname(lhs),
                                            rhs: mname(rhs),
                                        })
                                    {
                                        break 'outer;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }
}

/// One object of an action level: a named system acting from named objects of
/// the level below.
#[derive(Debug, Clone)]
pub struct LevelObject {
    pub name: String,
    pub acting: Vec<String>,
    pub system: ActionSystem,
}

/// A stack of action levels over a named ring family.
#[derive(Debug, Clone)]
pub struct MultimoduleLevels {
    pub rings: Vec<(String, FiniteRing)>,
    pub levels: Vec<Vec<LevelObject>>,
}

/// Assembles the level stack into a hyperstructure: level 0 holds the ring
/// names, level `k` the level-`k` object names, and each object binds its
/// acting family one level down under the tag `acts-on`. Every system must
/// pass [`ActionSystem::verify`] first.
pub fn build_multimodule_hyperstructure(
    levels: &MultimoduleLevels,
) -> Result<Hyperstructure, MultimodError> {
    let depth = levels.levels.len();
    let mut h = Hyperstructure::new(depth);
    let mut seen = std::collections::BTreeSet::new();
    for (name, _) in &levels.rings {
        if !seen.insert(name.clone()) {
            return Err(MultimodError::DuplicateObject(name.clone()));
        }
        h = h.with_element(0, name)?;
    }
    for (k, objects) in levels.levels.iter().enumerate() {
        let level = k + 1;
        let below: Vec<String> = if k == 0 {
            levels.rings.iter().map(|(n, _)| n.clone()).collect()
        } else {
            levels.levels[k - 1].iter().map(|o| o.name.clone()).collect()
        };
        for object in objects {
            if !seen.insert(object.name.clone()) {
                return Err(MultimodError::DuplicateObject(object.name.clone()));
            }
            if object.acting.len() != object.system.rings().len() {
                return Err(MultimodError::ActingArity {
                    level,
                    name: object.name.clone(),
                    want: object.system.rings().len(),
                    got: object.acting.len(),
                });
            }
            for (t, acting) in object.acting.iter().enumerate() {
                if !below.contains(acting) {
                    return Err(MultimodError::UnknownActing {
                        level,
                        name: object.name.clone(),
                        acting: acting.clone(),
                    });
                }
                if k == 0 {
                    let named = &levels
                        .rings
                        .iter()
                        .find(|(n, _)| n == acting)
                        .expect("membership checked above")
                        .1;
                    if named != &object.system.rings()[t] {
                        return Err(MultimodError::RingMismatch {
                            name: object.name.clone(),
                            acting: acting.clone(),
                        });
                    }
                }
            }
            let report = object.system.verify();
            if !report.is_empty() {
                return Err(MultimodError::AxiomFailure {
                    name: object.name.clone(),
                    report,
                });
            }
            let support = Support::new(
                level - 1,
                object.acting.iter().cloned(),
                Property::tag("acts-on"),
            )?;
            h = h.add_bond(support, &object.name, false)?;
        }
    }
    Ok(h)
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RingFile {
    elements: Vec<String>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    one: usize,
    zero: usize,
}

#[derive(Serialize, Deserialize)]
struct ModuleFile {
    elements: Vec<String>,
    add: Vec<Vec<usize>>,
    zero: usize,
}

impl FiniteRing {
    pub fn from_json(text: &str) -> Result<Self, MultimodError> {
        let file: RingFile = serde_json::from_str(text)?;
        FiniteRing::new(
            file.elements,
            OpTable::new(file.add)?,
            OpTable::new(file.mul)?,
            file.zero,
            file.one,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RingFile {
            elements: self.elements.clone(),
            add: self.add.rows().to_vec(),
            mul: self.mul.rows().to_vec(),
            one: self.one,
            zero: self.zero,
        })
        .expect("ring serializes")
    }
}

impl FiniteModule {
    pub fn from_json(text: &str) -> Result<Self, MultimodError> {
        let file: ModuleFile = serde_json::from_str(text)?;
        FiniteModule::new(file.elements, OpTable::new(file.add)?, file.zero)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModuleFile {
            elements: self.elements.clone(),
            add: self.add.rows().to_vec(),
            zero: self.zero,
        })
        .expect("module serializes")
    }
}

/// Parses the raw `[w][t][r][m]` nested-array action file.
pub fn action_table_from_json(text: &str) -> Result<Vec<Vec<Vec<Vec<usize>>>>, MultimodError> {
    Ok(serde_json::from_str(text)?)
}
