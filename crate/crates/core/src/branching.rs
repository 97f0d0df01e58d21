//! Premeasurement interactions, Schmidt-basis branching and the entropy ledger.
//!
//! A [`BranchTree`] holds one node per world. Interacting a leaf applies a
//! unitary to its state and decomposes the result across a caller-chosen
//! split; a Schmidt rank above one turns the leaf into a parent whose children
//! carry the factorized pair states φ_n ⊗ χ_n, renormalized to unit weight.

use std::collections::BTreeMap;

use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::hilbert::{haar_unitary_from, BipartiteSplit, SeededRng, StateVector, UnitaryOperator};
use crate::schmidt::{entropy_across, schmidt_decompose};
use crate::scalar::{entropy_term, Real, C};

pub type NodeId = usize;

pub const DEFAULT_MAX_LEAVES: usize = 4096;

/// Unitary evolution of a whole branch state.
pub trait Interaction<T: Real> {
    fn dim(&self) -> usize;
    fn evolve(&self, psi: &StateVector<T>) -> Result<StateVector<T>>;
}

impl<T: Real> Interaction<T> for UnitaryOperator<T> {
    fn dim(&self) -> usize {
        UnitaryOperator::dim(self)
    }

    fn evolve(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        self.apply(psi)
    }
}

/// Generalized CNOT on object ⊗ device: |i⟩|j⟩ ↦ |i⟩|(j + i) mod device_dim⟩.
pub fn premeasurement_unitary<T: Real>(
    n_outcomes: usize,
    device_dim: usize,
) -> Result<UnitaryOperator<T>> {
    if n_outcomes == 0 {
        return Err(Error::InvalidParameter("at least one outcome is required".into()));
    }
    if device_dim < n_outcomes {
        return Err(Error::PointerOverflow {
            n_outcomes,
            device_dim,
        });
    }
    let total = n_outcomes.saturating_mul(device_dim);
    UnitaryOperator::permutation(total, |k| {
        let (i, j) = (k / device_dim, k % device_dim);
        i * device_dim + (j + i) % device_dim
    })
}

/// Object register followed by device registers; an optional unitary acts on
/// the object, then device `device` records the object index by a cyclic
/// shift. Applied without forming the full matrix.
#[derive(Debug, Clone)]
pub struct RegisterPremeasurement<T> {
    object_dim: usize,
    device_dims: Vec<usize>,
    device: usize,
    object_unitary: Option<UnitaryOperator<T>>,
}

impl<T: Real> RegisterPremeasurement<T> {
    pub fn new(
        object_dim: usize,
        device_dims: Vec<usize>,
        device: usize,
        object_unitary: Option<UnitaryOperator<T>>,
    ) -> Result<Self> {
        let &device_dim = device_dims.get(device).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "device {device} out of range for {} devices",
                device_dims.len()
            ))
        })?;
        if device_dim < object_dim {
            return Err(Error::PointerOverflow {
                n_outcomes: object_dim,
                device_dim,
            });
        }
        if let Some(u) = &object_unitary {
            if u.dim() != object_dim {
                return Err(Error::DimensionMismatch {
                    expected: object_dim,
                    actual: u.dim(),
                });
            }
        }
        Ok(Self {
            object_dim,
            device_dims,
            device,
            object_unitary,
        })
    }
}

impl<T: Real> Interaction<T> for RegisterPremeasurement<T> {
    fn dim(&self) -> usize {
        self.object_dim * self.device_dims.iter().product::<usize>()
    }

    fn evolve(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        let total = Interaction::dim(self);
        if psi.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                actual: psi.dim(),
            });
        }
        let rest = total / self.object_dim;
        let a = psi.amplitudes();
        let local: Vec<C<T>> = match &self.object_unitary {
            None => a.to_vec(),
            Some(u) => {
                let m = u.entries();
                let mut out = vec![C::<T>::default(); total];
                for i in 0..self.object_dim {
                    for k in 0..self.object_dim {
                        let uik = m[[i, k]];
                        for r in 0..rest {
                            out[i * rest + r] += uik * a[k * rest + r];
                        }
                    }
                }
                out
            }
        };
        let d = self.device_dims[self.device];
        let stride: usize = self.device_dims[self.device + 1..].iter().product();
        let mut out = vec![C::<T>::default(); total];
        for (idx, amp) in local.into_iter().enumerate() {
            let obj = idx / rest;
            let digit = (idx / stride) % d;
            let shifted = (digit + obj) % d;
            out[idx - digit * stride + shifted * stride] = amp;
        }
        StateVector::new(out, psi.dims().to_vec())
    }
}

/// One world: a leaf of the tree, or an interior node that has branched.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchNode<T> {
    id: NodeId,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    weight: T,
    cumulative_weight: T,
    state: StateVector<T>,
    relative_entropy: T,
    rescaled_entropy: T,
    birth_step: usize,
    // (step, state) since birth: the birth state, then every post-interaction state
    history: Vec<(usize, StateVector<T>)>,
}

impl<T: Real> BranchNode<T> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn parent_id(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Weight λ relative to the parent.
    pub fn weight(&self) -> T {
        self.weight
    }

    /// Product of weights along the path from the root.
    pub fn cumulative_weight(&self) -> T {
        self.cumulative_weight
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    /// S_i = −λ ln λ for this node's weight relative to its parent.
    pub fn relative_entropy(&self) -> T {
        self.relative_entropy
    }

    /// In-branch entanglement entropy after the latest interaction; zero at birth.
    pub fn rescaled_entropy(&self) -> T {
        self.rescaled_entropy
    }

    pub fn birth_step(&self) -> usize {
        self.birth_step
    }
}

/// −λ ln λ of a node's weight.
pub fn branch_entropy<T: Real>(node: &BranchNode<T>) -> T {
    entropy_term(node.weight)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRecord<T> {
    pub step: usize,
    /// Accumulated by the grouping rule S ← S + w_parent · H(children).
    pub total_entropy: T,
    /// −w ln w for every current leaf, in id order.
    pub branch_entropies: Vec<T>,
}

impl<T: Real> LedgerRecord<T> {
    pub fn branch_sum(&self) -> T {
        self.branch_entropies.iter().copied().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntropyLedger<T> {
    pub records: Vec<LedgerRecord<T>>,
}

impl<T: Real> EntropyLedger<T> {
    /// max over records of |total − Σ branch entropies|.
    pub fn max_identity_error(&self) -> T {
        self.records
            .iter()
            .map(|r| (r.total_entropy - r.branch_sum()).abs())
            .fold(T::zero(), T::max)
    }

    pub fn totals(&self) -> Vec<T> {
        self.records.iter().map(|r| r.total_entropy).collect()
    }
}

#[derive(Debug, Clone)]
pub struct BranchTree<T> {
    nodes: BTreeMap<NodeId, BranchNode<T>>,
    root: NodeId,
    step: usize,
    max_leaves: usize,
    ledger: EntropyLedger<T>,
    running_entropy: T,
}

impl<T: Real> BranchTree<T> {
    pub fn new(root_state: StateVector<T>) -> Self {
        Self::with_max_leaves(root_state, DEFAULT_MAX_LEAVES).expect("default cap is positive")
    }

    pub fn with_max_leaves(root_state: StateVector<T>, max_leaves: usize) -> Result<Self> {
        if max_leaves == 0 {
            return Err(Error::InvalidParameter("leaf cap must be positive".into()));
        }
        let root = BranchNode {
            id: 0,
            parent: None,
            children: Vec::new(),
            weight: T::one(),
            cumulative_weight: T::one(),
            state: root_state.clone(),
            relative_entropy: T::zero(),
            rescaled_entropy: T::zero(),
            birth_step: 0,
            history: vec![(0, root_state)],
        };
        let mut tree = Self {
            nodes: BTreeMap::from([(0, root)]),
            root: 0,
            step: 0,
            max_leaves,
            ledger: EntropyLedger::default(),
            running_entropy: T::zero(),
        };
        tree.record();
        Ok(tree)
    }

    pub fn root_id(&self) -> NodeId {
        self.root
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn max_leaves(&self) -> usize {
        self.max_leaves
    }

    pub fn ledger(&self) -> &EntropyLedger<T> {
        &self.ledger
    }

    pub fn node(&self, id: NodeId) -> Result<&BranchNode<T>> {
        self.nodes.get(&id).ok_or(Error::UnknownNode(id))
    }

    pub fn nodes(&self) -> impl Iterator<Item = &BranchNode<T>> {
        self.nodes.values()
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.nodes
            .values()
            .filter(|n| n.is_leaf())
            .map(|n| n.id)
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.values().filter(|n| n.is_leaf()).count()
    }

    pub fn leaf_weight_sum(&self) -> T {
        self.nodes
            .values()
            .filter(|n| n.is_leaf())
            .map(|n| n.cumulative_weight)
            .sum()
    }

    /// −Σ_leaves w ln w over cumulative leaf weights.
    pub fn total_entropy(&self) -> T {
        self.nodes
            .values()
            .filter(|n| n.is_leaf())
            .map(|n| entropy_term(n.cumulative_weight))
            .sum()
    }

    fn record(&mut self) {
        let branch_entropies = self
            .nodes
            .values()
            .filter(|n| n.is_leaf())
            .map(|n| entropy_term(n.cumulative_weight))
            .collect();
        self.ledger.records.push(LedgerRecord {
            step: self.step,
            total_entropy: self.running_entropy,
            branch_entropies,
        });
    }

    /// Evolves leaf `leaf` and splits it along the Schmidt basis of `split`.
    /// Returns the new leaf ids, or an empty list when the evolved state is
    /// still a product state.
    pub fn interact_and_branch<I: Interaction<T> + ?Sized>(
        &mut self,
        leaf: NodeId,
        interaction: &I,
        split: BipartiteSplit,
    ) -> Result<Vec<NodeId>> {
        let node = self.node(leaf)?;
        if !node.is_leaf() {
            return Err(Error::NotALeaf(leaf));
        }
        if interaction.dim() != node.state.dim() {
            return Err(Error::DimensionMismatch {
                expected: node.state.dim(),
                actual: interaction.dim(),
            });
        }
        split.check(node.state.dim())?;
        let evolved = interaction.evolve(&node.state)?;
        let dec = schmidt_decompose(&evolved, split)?;
        let rank = dec.rank();
        if rank > 1 {
            let requested = self.leaf_count() - 1 + rank;
            if requested > self.max_leaves {
                return Err(Error::TreeCap {
                    requested,
                    cap: self.max_leaves,
                });
            }
        }
        let children_states = (0..rank)
            .map(|n| dec.branch_state(n))
            .collect::<Result<Vec<_>>>()?;

        let parent_weight = node.cumulative_weight;
        self.step += 1;
        let step = self.step;
        let first_id = self.nodes.keys().next_back().map_or(0, |k| k + 1);
        let node = self.nodes.get_mut(&leaf).expect("checked above");
        node.history.push((step, evolved.clone()));
        node.rescaled_entropy = dec.entanglement_entropy();
        node.state = evolved;
        if rank == 1 {
            self.record();
            return Ok(Vec::new());
        }

        let mut ids = Vec::with_capacity(rank);
        let mut mixing = T::zero();
        for (n, (&lambda, state)) in dec.lambdas().iter().zip(children_states).enumerate() {
            let id = first_id + n;
            mixing += entropy_term(lambda);
            self.nodes.insert(
                id,
                BranchNode {
                    id,
                    parent: Some(leaf),
                    children: Vec::new(),
                    weight: lambda,
                    cumulative_weight: parent_weight * lambda,
                    state: state.clone(),
                    relative_entropy: entropy_term(lambda),
                    rescaled_entropy: T::zero(),
                    birth_step: step,
                    history: vec![(step, state)],
                },
            );
            ids.push(id);
        }
        self.nodes.get_mut(&leaf).expect("checked above").children = ids.clone();
        self.running_entropy += parent_weight * mixing;
        self.record();
        Ok(ids)
    }

    /// (step, S^R) for node `id` from its birth onwards: the entanglement
    /// entropy across `split` of every in-branch state, with S^R = 0 at birth.
    pub fn rescaled_entropy_trace(&self, id: NodeId, split: BipartiteSplit) -> Result<Vec<(usize, T)>> {
        let node = self.node(id)?;
        node.history
            .iter()
            .enumerate()
            .map(|(k, (step, state))| {
                if k == 0 {
                    Ok((*step, T::zero()))
                } else {
                    Ok((*step, entropy_across(state, split)?))
                }
            })
            .collect()
    }
}

pub fn total_entropy<T: Real>(tree: &BranchTree<T>) -> T {
    tree.total_entropy()
}

pub fn interact_and_branch<T: Real, I: Interaction<T> + ?Sized>(
    tree: &mut BranchTree<T>,
    leaf: NodeId,
    interaction: &I,
    split: BipartiteSplit,
) -> Result<Vec<NodeId>> {
    tree.interact_and_branch(leaf, interaction, split)
}

pub fn rescaled_entropy_trace<T: Real>(
    tree: &BranchTree<T>,
    id: NodeId,
    split: BipartiteSplit,
) -> Result<Vec<(usize, T)>> {
    tree.rescaled_entropy_trace(id, split)
}

/// Object transformation applied before every device after the first.
#[derive(Debug, Clone)]
pub enum Repreparation<T> {
    None,
    /// Real rotation in the plane of object states |0⟩ and |1⟩.
    Rotation(T),
    Unitary(UnitaryOperator<T>),
    /// A fresh Haar-random object unitary per step, drawn from the protocol seed.
    HaarRandom,
}

/// An object coupled in turn to `n_devices` fresh devices in the ready state
/// |0⟩, each of the object's dimension.
#[derive(Debug, Clone)]
pub struct ChainProtocol<T> {
    pub object_dim: usize,
    pub n_devices: usize,
    pub amplitudes: Vec<C<T>>,
    pub repreparation: Repreparation<T>,
    pub seed: u64,
    pub max_leaves: usize,
}

#[derive(Debug, Clone)]
pub struct ChainRun<T> {
    pub tree: BranchTree<T>,
    /// Branch followed after each step (highest weight, lowest index on ties).
    pub followed: Vec<NodeId>,
    /// Object | devices split used for every interaction.
    pub split: BipartiteSplit,
}

impl<T: Real> ChainRun<T> {
    pub fn ledger(&self) -> &EntropyLedger<T> {
        self.tree.ledger()
    }
}

impl<T: Real> ChainProtocol<T> {
    pub fn new(object_dim: usize, n_devices: usize, amplitudes: Vec<C<T>>, seed: u64) -> Self {
        Self {
            object_dim,
            n_devices,
            amplitudes,
            repreparation: Repreparation::None,
            seed,
            max_leaves: DEFAULT_MAX_LEAVES,
        }
    }

    pub fn with_repreparation(mut self, repreparation: Repreparation<T>) -> Self {
        self.repreparation = repreparation;
        self
    }

    pub fn run(&self) -> Result<ChainRun<T>> {
        if self.n_devices == 0 {
            return Err(Error::InvalidParameter("at least one device is required".into()));
        }
        if self.object_dim == 0 || self.amplitudes.len() != self.object_dim {
            return Err(Error::Shape(format!(
                "{} amplitudes for an object of dimension {}",
                self.amplitudes.len(),
                self.object_dim
            )));
        }
        let device_dims = vec![self.object_dim; self.n_devices];
        let mut dims = vec![self.object_dim];
        dims.extend_from_slice(&device_dims);
        let object = StateVector::new(self.amplitudes.clone(), vec![self.object_dim])?;
        let ready = StateVector::basis(0, device_dims.clone())?;
        let initial = object.tensor(&ready)?;
        let split = BipartiteSplit::new(self.object_dim, initial.dim() / self.object_dim)?;
        let fixed = match &self.repreparation {
            Repreparation::Rotation(angle) => {
                Some(UnitaryOperator::plane_rotation(self.object_dim, *angle)?)
            }
            Repreparation::Unitary(u) => Some(u.clone()),
            Repreparation::None | Repreparation::HaarRandom => None,
        };
        let mut rng = SeededRng::seed_from_u64(self.seed);

        let mut tree = BranchTree::with_max_leaves(initial, self.max_leaves)?;
        let mut current = tree.root_id();
        let mut followed = Vec::with_capacity(self.n_devices);
        for device in 0..self.n_devices {
            let local = if device == 0 {
                None
            } else if matches!(self.repreparation, Repreparation::HaarRandom) {
                Some(haar_unitary_from(self.object_dim, &mut rng)?)
            } else {
                fixed.clone()
            };
            let step = RegisterPremeasurement::new(self.object_dim, device_dims.clone(), device, local)?;
            let children = tree.interact_and_branch(current, &step, split)?;
            if let Some(next) = heaviest(&tree, &children) {
                current = next;
            }
            followed.push(current);
        }
        Ok(ChainRun {
            tree,
            followed,
            split,
        })
    }
}

fn heaviest<T: Real>(tree: &BranchTree<T>, ids: &[NodeId]) -> Option<NodeId> {
    let mut best: Option<(NodeId, T)> = None;
    for &id in ids {
        let w = tree.nodes[&id].weight;
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((id, w));
        }
    }
    best.map(|(id, _)| id)
}

pub fn run_chain_protocol<T: Real>(protocol: &ChainProtocol<T>) -> Result<ChainRun<T>> {
    protocol.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use std::f64::consts::LN_2;

    fn split22() -> BipartiteSplit {
        BipartiteSplit::new(2, 2).unwrap()
    }

    #[test]
    fn two_outcome_premeasurement_is_cnot() {
        let u = premeasurement_unitary::<f64>(2, 2).unwrap();
        let table = [(0, 0), (1, 1), (2, 3), (3, 2)];
        for (input, output) in table {
            let out = u.apply(&StateVector::basis(input, vec![2, 2]).unwrap()).unwrap();
            assert_eq!(out, StateVector::basis(output, vec![2, 2]).unwrap());
        }
    }

    #[test]
    fn premeasurement_records_each_outcome() {
        for (n, d) in [(3, 3), (3, 5), (4, 4)] {
            let u = premeasurement_unitary::<f64>(n, d).unwrap();
            for i in 0..n {
                let out = u.apply(&StateVector::basis(i * d, vec![n, d]).unwrap()).unwrap();
                assert_eq!(out, StateVector::basis(i * d + i, vec![n, d]).unwrap());
            }
        }
    }

    #[test]
    fn pointer_overflow() {
        assert_eq!(
            premeasurement_unitary::<f64>(3, 2).unwrap_err(),
            Error::PointerOverflow {
                n_outcomes: 3,
                device_dim: 2
            }
        );
    }

    #[test]
    fn register_premeasurement_matches_dense_operator() {
        let u = premeasurement_unitary::<f64>(3, 3).unwrap();
        let reg = RegisterPremeasurement::<f64>::new(3, vec![3], 0, None).unwrap();
        let psi = crate::hilbert::haar_random_state::<f64>(9, 5).unwrap().reshaped(vec![3, 3]).unwrap();
        let a = u.apply(&psi).unwrap();
        let b = reg.evolve(&psi).unwrap();
        assert!(a.distance_up_to_phase(&b).unwrap() < 1e-14);
    }

    #[test]
    fn equal_superposition_branches_in_two() {
        let psi = StateVector::<f64>::new(
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![2, 2],
        )
        .unwrap();
        let mut tree = BranchTree::new(psi);
        let cnot = premeasurement_unitary(2, 2).unwrap();
        let kids = tree.interact_and_branch(0, &cnot, split22()).unwrap();
        assert_eq!(kids.len(), 2);
        for &k in &kids {
            let n = tree.node(k).unwrap();
            assert!((n.weight() - 0.5).abs() < 1e-15);
            assert_eq!(n.rescaled_entropy(), 0.0);
            assert_eq!(n.birth_step(), 1);
            assert_eq!(n.parent_id(), Some(0));
            assert!((branch_entropy(n) - LN_2 / 2.0).abs() < 1e-15);
        }
        assert!((total_entropy(&tree) - LN_2).abs() < 1e-12);
        assert!(tree.ledger().max_identity_error() < 1e-15);
        assert!(matches!(
            tree.interact_and_branch(0, &cnot, split22()),
            Err(Error::NotALeaf(0))
        ));
    }

    #[test]
    fn definite_input_does_not_branch() {
        let mut tree = BranchTree::new(StateVector::<f64>::basis(0, vec![2, 2]).unwrap());
        let cnot = premeasurement_unitary(2, 2).unwrap();
        assert!(tree.interact_and_branch(0, &cnot, split22()).unwrap().is_empty());
        assert_eq!(tree.leaf_count(), 1);
        assert_eq!(tree.step(), 1);
        assert_eq!(tree.total_entropy(), 0.0);
        assert_eq!(tree.ledger().records.len(), 2);
    }

    #[test]
    fn branch_entropy_values() {
        assert_eq!(entropy_term(1.0f64), 0.0);
        assert!((entropy_term(0.5f64) - 0.346_573_590_279_972_6).abs() < 1e-15);
    }

    #[test]
    fn tree_cap_is_an_error() {
        let psi = StateVector::<f64>::from_real(&[1.0, 0.0, 1.0, 0.0]).unwrap().reshaped(vec![2, 2]).unwrap();
        let mut tree = BranchTree::with_max_leaves(psi, 1).unwrap();
        let cnot = premeasurement_unitary(2, 2).unwrap();
        assert_eq!(
            tree.interact_and_branch(0, &cnot, split22()).unwrap_err(),
            Error::TreeCap { requested: 2, cap: 1 }
        );
        // nothing mutated
        assert_eq!(tree.step(), 0);
        assert_eq!(tree.leaf_count(), 1);
    }

    #[test]
    fn unknown_node_and_mismatch() {
        let mut tree = BranchTree::new(StateVector::<f64>::basis(0, vec![2, 2]).unwrap());
        assert_eq!(tree.node(9).unwrap_err(), Error::UnknownNode(9));
        let u = premeasurement_unitary::<f64>(2, 3).unwrap();
        assert!(matches!(
            tree.interact_and_branch(0, &u, split22()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(tree.rescaled_entropy_trace(3, split22()).is_err());
    }

    #[test]
    fn chain_with_definite_object_never_branches() {
        let run = ChainProtocol::<f64>::new(2, 4, vec![c(1.0, 0.0), c(0.0, 0.0)], 0)
            .run()
            .unwrap();
        assert!(run.ledger().totals().iter().all(|&s| s == 0.0));
        assert_eq!(run.tree.leaf_count(), 1);
    }

    #[test]
    fn chain_single_device_equal_superposition() {
        let run = ChainProtocol::<f64>::new(2, 1, vec![c(1.0, 0.0), c(1.0, 0.0)], 0)
            .run()
            .unwrap();
        let last = run.ledger().records.last().unwrap().total_entropy;
        assert!((last - LN_2).abs() < 1e-12);
    }

    #[test]
    fn chain_dimension_cap() {
        let r = ChainProtocol::<f64>::new(2, 14, vec![c(1.0, 0.0), c(1.0, 0.0)], 0).run();
        assert!(matches!(r, Err(Error::DimensionCap { .. })));
    }
}
