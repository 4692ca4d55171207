//! Leveled bond structures ("hyperstructures") and their instances.
//!
//! A hyperstructure is a stack of levels: level 0 holds basic elements, and
//! every element of level `i + 1` is a *bond* binding a property-tagged set of
//! level-`i` elements. Boundary maps send a bond back to the support it binds;
//! identity bonds bind singletons. On top of the generic model this crate
//! ships three concrete instances and a field-theory layer:
//!
//! - [`structure`] — the generic model: elements, properties, supports, bonds,
//!   law validation, hyperoperation import, push-forward, fusion, DOT export.
//! - [`nest`] — nested open sets of a finite topology as a hyperstructure,
//!   with the hole-filling boundary formula and a prefactorization
//!   compatibility check for monoid assignments.
//! - [`multimod`] — multimodules: finite rings acting in parametrized
//!   families on finite modules, exhaustive axiom verification, and assembly
//!   of action levels into a hyperstructure.
//! - [`entangle`] — higher entanglement over dense tensor states: rank-1
//!   factorization tests, level-`k` bond construction, order classification
//!   against a partition tree, and bond dissolution.
//! - [`gft`] — assignments from a hyperstructure into a recipient monoid
//!   (table, multiset, or tensor), level-wise globalization with gluing
//!   checks, and leaf-edit tunnelling.
//!
//! All types are immutable after construction and all operations are pure:
//! they take structures by reference and return new ones.

pub mod entangle;
pub mod gft;
pub mod linalg;
pub mod monoid;
pub mod multimod;
pub mod nest;
pub mod structure;
pub mod tables;

pub use structure::{
    Bond, ElementId, Hyperstructure, Property, Support, ValidationReport, Violation,
};
