//! Finite commutative monoids with named elements, plus free multisets.
//!
//! Both serve as recipient carriers for value assignments: table monoids are
//! verified exhaustively at construction, multisets form the free commutative
//! monoid over strings under union.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tables::{OpTable, TableError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("duplicate element name {0:?}")]
    DuplicateElement(String),
    #[error("element count {elements} does not match table size {table}")]
    SizeMismatch { elements: usize, table: usize },
    #[error("not associative: ({a} . {b}) . {c} != {a} . ({b} . {c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("not commutative: {a} . {b} != {b} . {a}")]
    NotCommutative { a: String, b: String },
    #[error("{unit} is not a unit: fails on {witness}")]
    NotUnital { unit: String, witness: String },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
}

/// A finite commutative monoid on named elements, law-checked exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    table: OpTable,
    unit: usize,
}

impl FiniteMonoid {
    pub fn new(elements: Vec<String>, table: OpTable, unit: usize) -> Result<Self, MonoidError> {
        if elements.len() != table.size() {
            return Err(MonoidError::SizeMismatch {
                elements: elements.len(),
                table: table.size(),
            });
        }
        if unit >= elements.len() {
            return Err(MonoidError::Table(TableError::BadDesignated {
                index: unit,
                n: elements.len(),
            }));
        }
        let mut index = BTreeMap::new();
        for (i, name) in elements.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(MonoidError::DuplicateElement(name.clone()));
            }
        }
        let name = |i: usize| elements[i].clone();
        if let Some((a, b, c)) = table.associativity_witness() {
            return Err(MonoidError::NotAssociative {
                a: name(a),
                b: name(b),
                c: name(c),
            });
        }
        if let Some((a, b)) = table.commutativity_witness() {
            return Err(MonoidError::NotCommutative {
                a: name(a),
                b: name(b),
            });
        }
        if let Some(w) = table.unit_witness(unit) {
            return Err(MonoidError::NotUnital {
                unit: name(unit),
                witness: name(w),
            });
        }
        Ok(FiniteMonoid {
            elements,
            index,
            table,
            unit,
        })
    }

    /// `(Z_n, +)` with elements named `"0".."n-1"`.
    pub fn zn_add(n: usize) -> Self {
        let table = OpTable::new(
            (0..n)
                .map(|i| (0..n).map(|j| (i + j) % n).collect())
                .collect(),
        )
        .expect("residue table is square");
        FiniteMonoid::new((0..n).map(|i| i.to_string()).collect(), table, 0)
            .expect("modular addition is a commutative monoid")
    }

    /// `(Z_n, *)` with elements named `"0".."n-1"`.
    pub fn zn_mul(n: usize) -> Self {
        let table = OpTable::new(
            (0..n)
                .map(|i| (0..n).map(|j| (i * j) % n).collect())
                .collect(),
        )
        .expect("residue table is square");
        FiniteMonoid::new((0..n).map(|i| i.to_string()).collect(), table, 1 % n)
            .expect("modular multiplication is a commutative monoid")
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn unit_name(&self) -> &str {
        &self.elements[self.unit]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize, MonoidError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| MonoidError::UnknownElement(name.to_string()))
    }

    /// Folds a sequence of element names; the empty fold is the unit.
    pub fn combine<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<String, MonoidError> {
        let mut acc = self.unit;
        for name in names {
            acc = self.table.op(acc, self.index_of(name)?);
        }
        Ok(self.elements[acc].clone())
    }
}

/// A finite multiset of strings; the free commutative monoid under union.
pub type Multiset = BTreeMap<String, u64>;

/// Singleton multiset.
pub fn multiset_of(item: &str) -> Multiset {
    let mut m = Multiset::new();
    m.insert(item.to_string(), 1);
    m
}

/// Count-wise union of multisets; the empty map is the unit.
pub fn multiset_union<'a>(parts: impl IntoIterator<Item = &'a Multiset>) -> Multiset {
    let mut out = Multiset::new();
    for part in parts {
        for (k, &v) in part {
            *out.entry(k.clone()).or_insert(0) += v;
        }
    }
    out
}
