//! Higher entanglement over dense tensor-product states.
//!
//! States live in a product of finite-dimensional factors and are kept in a
//! canonical form: unit 2-norm, first non-negligible amplitude real and
//! positive. Level-`k` bonds superpose rows of block states, carrying their
//! construction as provenance so they can be dissolved back into the exact
//! constituents. Classification against a partition tree assigns each state
//! the height of the highest node at which factorization across the node's
//! children fails.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{svd, CMat};

/// Unit-norm tolerance for canonical states.
pub const NORM_TOL: f64 = 1e-12;
/// A state is rank-1 across a cut when `sigma_2 / sigma_1` is below this.
pub const RANK_RATIO_TOL: f64 = 1e-9;
/// Provenance must reconstruct its state within this 2-norm distance.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Extracted factors must reproduce the state within this 2-norm distance.
pub const FACTOR_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum EntangleError {
    #[error("factor dimensions must each be at least 2, got {0}")]
    BadDimension(usize),
    #[error("amplitude vector has length {got}, dims require {want}")]
    AmplitudeLength { want: usize, got: usize },
    #[error("state has vanishing norm")]
    ZeroState,
    #[error("rows disagree in shape: {0}")]
    DimMismatch(String),
    #[error("bond level must be at least 1")]
    BadLevel,
    #[error("bond result is a pure product of its blocks, excluded by the purity observation")]
    ObsRejection,
    #[error("cut position {position} is outside 1..{factors}")]
    BadCut { position: usize, factors: usize },
    #[error("partition tree is invalid: {0}")]
    BadTree(String),
    #[error("state carries no bond provenance")]
    NoProvenance,
    #[error("provenance does not reconstruct the state (distance {distance:.3e})")]
    CorruptProvenance { distance: f64 },
    #[error("named state {name:?} needs at least 2 factors, got {n}")]
    BadArity { name: String, n: usize },
    #[error("unknown named state {0:?}")]
    UnknownName(String),
}

/// How a state was bonded: `sum_j alpha_j (x) q_{i,j}` over per-row blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BondRecord {
    pub level: usize,
    pub coefficients: Vec<Complex64>,
    pub constituents: Vec<Vec<TensorState>>,
}

/// A normalized, phase-fixed state over factors `dims`, amplitudes row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
    provenance: Option<Box<BondRecord>>,
}

impl TensorState {
    /// Canonicalizes raw amplitudes: normalizes and rotates the global phase
    /// so the first amplitude with modulus above [`NORM_TOL`] is real
    /// positive.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self, EntangleError> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(EntangleError::BadDimension(d));
        }
        let want: usize = dims.iter().product();
        if amps.len() != want {
            return Err(EntangleError::AmplitudeLength {
                want,
                got: amps.len(),
            });
        }
        let mut state = TensorState {
            dims,
            amps,
            provenance: None,
        };
        state.canonicalize()?;
        Ok(state)
    }

    fn canonicalize(&mut self) -> Result<(), EntangleError> {
        let norm = self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < NORM_TOL {
            return Err(EntangleError::ZeroState);
        }
        let lead = self
            .amps
            .iter()
            .find(|a| a.norm() / norm > NORM_TOL)
            .copied()
            .ok_or(EntangleError::ZeroState)?;
        let factor = lead.conj() / (lead.norm() * norm);
        for a in &mut self.amps {
            *a *= factor;
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn provenance(&self) -> Option<&BondRecord> {
        self.provenance.as_deref()
    }

    /// Basis state `|index>` over `dims`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self, EntangleError> {
        let len: usize = dims.iter().product();
        if index >= len {
            return Err(EntangleError::AmplitudeLength {
                want: len,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        TensorState::new(dims, amps)
    }

    /// Single qubit `|0>` or `|1>`.
    pub fn qubit(bit: usize) -> Self {
        TensorState::basis(vec![2], bit).expect("qubit basis index in range")
    }

    pub fn norm_distance(&self, other: &TensorState) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &TensorState, tol: f64) -> bool {
        self.norm_distance(other) <= tol
    }

    /// Matricization across the contiguous cut before factor `position`
    /// (1-based block boundary): rows range over the first `position`
    /// factors.
    pub fn matricize(&self, position: usize) -> Result<CMat, EntangleError> {
        if position == 0 || position >= self.dims.len() {
            return Err(EntangleError::BadCut {
                position,
                factors: self.dims.len(),
            });
        }
        let rows: usize = self.dims[..position].iter().product();
        let cols: usize = self.dims[position..].iter().product();
        Ok(CMat::from_vec(rows, cols, self.amps.clone()))
    }
}

/// Kronecker product of the given states; dims concatenate.
pub fn tensor_product(states: &[TensorState]) -> Result<TensorState, EntangleError> {
    let mut iter = states.iter();
    let first = iter
        .next()
        .ok_or(EntangleError::DimMismatch("empty state list".into()))?;
    let mut dims = first.dims.clone();
    let mut amps = first.amps.clone();
    for s in iter {
        dims.extend_from_slice(&s.dims);
        let mut next = Vec::with_capacity(amps.len() * s.amps.len());
        for a in &amps {
            for b in &s.amps {
                next.push(a * b);
            }
        }
        amps = next;
    }
    TensorState::new(dims, amps)
}

/// Tests whether the state factorizes across the contiguous cut at
/// `position`. On success returns the normalized left and right factors from
/// the dominant singular pair.
#[allow(clippy::type_complexity)]
pub fn is_product(
    state: &TensorState,
    position: usize,
) -> Result<(bool, Option<(TensorState, TensorState)>), EntangleError> {
    let m = state.matricize(position)?;
    let decomposition = svd(&m);
    let s1 = decomposition.sigma[0];
    let s2 = decomposition.sigma.get(1).copied().unwrap_or(0.0);
    if s1 <= 0.0 || s2 / s1 >= RANK_RATIO_TOL {
        return Ok((false, None));
    }
    let left = TensorState::new(state.dims[..position].to_vec(), decomposition.u.column(0))?;
    let right_amps: Vec<Complex64> = decomposition
        .v
        .column(0)
        .iter()
        .map(|z| z.conj())
        .collect();
    let right = TensorState::new(state.dims[position..].to_vec(), right_amps)?;
    Ok((true, Some((left, right))))
}

/// Peels the state left to right at the given block boundaries (factor
/// counts); returns the per-block factors or the 0-based index of the first
/// failing cut.
fn peel_blocks(
    state: &TensorState,
    block_sizes: &[usize],
) -> Result<Result<Vec<TensorState>, usize>, EntangleError> {
    debug_assert_eq!(block_sizes.iter().sum::<usize>(), state.factor_count());
    if block_sizes.len() == 1 {
        return Ok(Ok(vec![state.clone()]));
    }
    let mut factors = Vec::with_capacity(block_sizes.len());
    let mut rest = state.clone();
    for (i, &size) in block_sizes[..block_sizes.len() - 1].iter().enumerate() {
        let (ok, pair) = is_product(&rest, size)?;
        if !ok {
            return Ok(Err(i));
        }
        let (left, right) = pair.expect("factors accompany a positive product test");
        factors.push(left);
        rest = right;
    }
    factors.push(rest);
    Ok(Ok(factors))
}

/// Builds the level-`k` bond `sum_j alpha_j (x)_i blocks[j][i]`, canonicalized
/// and carrying its construction as provenance. A result that factorizes
/// across every block boundary is excluded by the purity observation.
pub fn bond_k(
    level: usize,
    blocks: &[Vec<TensorState>],
    coefficients: &[Complex64],
) -> Result<TensorState, EntangleError> {
    if level == 0 {
        return Err(EntangleError::BadLevel);
    }
    if blocks.is_empty() {
        return Err(EntangleError::DimMismatch("no rows given".into()));
    }
    if blocks.len() != coefficients.len() {
        return Err(EntangleError::DimMismatch(format!(
            "{} rows but {} coefficients",
            blocks.len(),
            coefficients.len()
        )));
    }
    let positions = blocks[0].len();
    if positions == 0 {
        return Err(EntangleError::DimMismatch("empty row".into()));
    }
    for (j, row) in blocks.iter().enumerate() {
        if row.len() != positions {
            return Err(EntangleError::DimMismatch(format!(
                "row {j} has {} blocks, row 0 has {positions}",
                row.len()
            )));
        }
        for (i, q) in row.iter().enumerate() {
            if q.dims() != blocks[0][i].dims() {
                return Err(EntangleError::DimMismatch(format!(
                    "block [{j}][{i}] dims {:?} differ from row 0 dims {:?}",
                    q.dims(),
                    blocks[0][i].dims()
                )));
            }
        }
    }
    let row_products: Vec<TensorState> = blocks
        .iter()
        .map(|row| tensor_product(row))
        .collect::<Result<_, _>>()?;
    let raw = bond_sum(coefficients, &row_products);
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < NORM_TOL {
        return Err(EntangleError::ZeroState);
    }
    let mut state = TensorState::new(row_products[0].dims().to_vec(), raw.clone())?;
    // Coefficients are rescaled by the same canonicalization factor so the
    // stored record reconstructs the canonical amplitudes exactly.
    let scale = canonical_scale(&raw, state.amps());
    let adjusted: Vec<Complex64> = coefficients.iter().map(|a| a * scale).collect();

    let block_sizes: Vec<usize> = blocks[0].iter().map(|q| q.factor_count()).collect();
    if peel_blocks(&state, &block_sizes)?.is_ok() {
        return Err(EntangleError::ObsRejection);
    }
    state.provenance = Some(Box::new(BondRecord {
        level,
        coefficients: adjusted,
        constituents: blocks.to_vec(),
    }));
    Ok(state)
}

fn bond_sum(coefficients: &[Complex64], rows: &[TensorState]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); rows[0].amps().len()];
    for (alpha, row) in coefficients.iter().zip(rows) {
        for (a, b) in amps.iter_mut().zip(row.amps()) {
            *a += alpha * b;
        }
    }
    amps
}

/// The scalar mapping `raw` onto the canonical `target` (least squares over
/// one complex unknown, exact here by construction).
fn canonical_scale(raw: &[Complex64], target: &[Complex64]) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (r, t) in raw.iter().zip(target) {
        num += r.conj() * t;
        den += r.norm_sqr();
    }
    num / den
}

/// Returns the stored constituent rows of a bonded state after re-checking
/// that they still reconstruct it.
pub fn dissolve(state: &TensorState) -> Result<Vec<Vec<TensorState>>, EntangleError> {
    let record = state.provenance().ok_or(EntangleError::NoProvenance)?;
    let rows: Vec<TensorState> = record
        .constituents
        .iter()
        .map(|row| tensor_product(row))
        .collect::<Result<_, _>>()?;
    let amps = bond_sum(&record.coefficients, &rows);
    let distance = amps
        .iter()
        .zip(state.amps())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if distance > RECONSTRUCTION_TOL {
        return Err(EntangleError::CorruptProvenance { distance });
    }
    Ok(record.constituents.clone())
}

// ---------------------------------------------------------------------------
// Partition trees and order classification
// ---------------------------------------------------------------------------

/// A grouping of the factors `1..=m` into nested contiguous blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(usize),
    Block(Vec<TreeNode>),
}

impl TreeNode {
    pub fn height(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Block(children) => {
                1 + children.iter().map(TreeNode::height).max().unwrap_or(0)
            }
        }
    }

    fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 1,
            TreeNode::Block(children) => children.iter().map(TreeNode::leaf_count).sum(),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            TreeNode::Leaf(i) => out.push(*i),
            TreeNode::Block(children) => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTree {
    root: TreeNode,
    leaves: usize,
}

impl PartitionTree {
    /// Validates that the in-order leaves are exactly `1..=m`.
    pub fn new(root: TreeNode) -> Result<Self, EntangleError> {
        let mut leaves = Vec::new();
        root.collect_leaves(&mut leaves);
        if leaves.is_empty() {
            return Err(EntangleError::BadTree("tree has no leaves".into()));
        }
        for (i, &leaf) in leaves.iter().enumerate() {
            if leaf != i + 1 {
                return Err(EntangleError::BadTree(format!(
                    "leaves must read 1..={} in order, found {leaf} at slot {}",
                    leaves.len(),
                    i + 1
                )));
            }
        }
        Ok(PartitionTree {
            leaves: leaves.len(),
            root,
        })
    }

    /// Parses nested arrays of 1-based leaf indices, e.g. `[[1,2],[3,4]]`.
    pub fn from_json(text: &str) -> Result<Self, EntangleError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| EntangleError::BadTree(format!("invalid json: {e}")))?;
        PartitionTree::new(node_from_value(&value)?)
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn height(&self) -> usize {
        self.root.height()
    }
}

fn node_from_value(value: &serde_json::Value) -> Result<TreeNode, EntangleError> {
    match value {
        serde_json::Value::Number(n) => {
            let i = n
                .as_u64()
                .ok_or_else(|| EntangleError::BadTree(format!("bad leaf index {n}")))?;
            Ok(TreeNode::Leaf(i as usize))
        }
        serde_json::Value::Array(items) if !items.is_empty() => Ok(TreeNode::Block(
            items
                .iter()
                .map(node_from_value)
                .collect::<Result<_, _>>()?,
        )),
        other => Err(EntangleError::BadTree(format!(
            "expected leaf index or non-empty array, found {other}"
        ))),
    }
}

/// Path from the root, child indices per step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root")?;
        for i in &self.0 {
            write!(f, "[{i}]")?;
        }
        Ok(())
    }
}

/// Outcome of order classification.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderResult {
    /// Height of the highest node whose factorization fails; 0 for full
    /// products.
    pub order: usize,
    /// The failing node, absent when the state factorizes all the way down.
    pub witness_node: Option<NodePath>,
    /// Per-child block factors at the root when its factorization succeeds.
    pub factors: Option<Vec<TensorState>>,
}

/// Classifies a state against a partition tree: at each node the children are
/// peeled left to right with rank-1 cuts; a failed peel scores the node's
/// height, a successful one recurses and takes the maximum child order.
pub fn entanglement_order(
    state: &TensorState,
    tree: &PartitionTree,
) -> Result<OrderResult, EntangleError> {
    if tree.leaf_count() != state.factor_count() {
        return Err(EntangleError::BadTree(format!(
            "tree has {} leaves, state has {} factors",
            tree.leaf_count(),
            state.factor_count()
        )));
    }
    let mut root_factors = None;
    let (order, witness) = order_rec(state, tree.root(), &mut NodePath::default(), &mut root_factors)?;
    Ok(OrderResult {
        order,
        witness_node: witness,
        factors: root_factors,
    })
}

fn order_rec(
    state: &TensorState,
    node: &TreeNode,
    path: &mut NodePath,
    root_factors: &mut Option<Vec<TensorState>>,
) -> Result<(usize, Option<NodePath>), EntangleError> {
    let children = match node {
        TreeNode::Leaf(_) => return Ok((0, None)),
        TreeNode::Block(children) => children,
    };
    let block_sizes: Vec<usize> = children.iter().map(TreeNode::leaf_count).collect();
    match peel_blocks(state, &block_sizes)? {
        Err(_) => Ok((node.height(), Some(path.clone()))),
        Ok(factors) => {
            if path.0.is_empty() {
                *root_factors = Some(factors.clone());
            }
            let mut best = (0, None);
            for (i, (factor, child)) in factors.iter().zip(children).enumerate() {
                path.0.push(i);
                let (order, witness) = order_rec(factor, child, path, root_factors)?;
                path.0.pop();
                if order > best.0 {
                    best = (order, witness);
                }
            }
            Ok(best)
        }
    }
}

// ---------------------------------------------------------------------------
// Named states
// ---------------------------------------------------------------------------

/// `ghz` is `(|0...0> + |1...1>)/sqrt(2)`; `w` the symmetric one-excitation
/// state. Both need at least two qubits.
pub fn make_named(name: &str, n: usize) -> Result<TensorState, EntangleError> {
    if n < 2 {
        return Err(EntangleError::BadArity {
            name: name.to_string(),
            n,
        });
    }
    let len = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); len];
    match name {
        "ghz" => {
            amps[0] = Complex64::new(1.0, 0.0);
            amps[len - 1] = Complex64::new(1.0, 0.0);
        }
        "w" => {
            for bit in 0..n {
                amps[1 << bit] = Complex64::new(1.0, 0.0);
            }
        }
        other => return Err(EntangleError::UnknownName(other.to_string())),
    }
    TensorState::new(vec![2; n], amps)
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    amps: Vec<[f64; 2]>,
}

impl TensorState {
    pub fn to_json(&self) -> String {
        let file = StateFile {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string(&file).expect("state serializes")
    }

    /// Parses `{"dims":[...],"amps":[[re,im],...]}`; the amplitudes are
    /// canonicalized on load.
    pub fn from_json(text: &str) -> Result<Self, EntangleError> {
        let file: StateFile = serde_json::from_str(text)
            .map_err(|e| EntangleError::DimMismatch(format!("invalid json: {e}")))?;
        TensorState::new(
            file.dims,
            file.amps
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}
