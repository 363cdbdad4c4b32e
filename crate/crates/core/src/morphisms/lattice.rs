//! The lattice of decompositions of a surjective morphism.
//!
//! For a surjective `η: Γ → Δ`, decompositions `Γ ↠ Σ → Δ` are the valid
//! partitions of `V(Γ)` that refine the fibre partition of `η`. Ordered by
//! refinement they form a finite poset whose bottom is the discrete partition
//! (the identity of `Γ`) and whose top is the fibre partition (`η` itself).
//! For `A ≤ B` the interval `[A, B]` is exactly the decomposition set of the
//! induced morphism `Γ/A → Γ/B`, so every quantity defined by recursion over
//! decompositions of sub-morphisms can be computed by recursion over
//! intervals of this single poset.
//!
//! Besides the order, the lattice records the "single merge" relation: `A → B`
//! when `B` is obtained from `A` by gluing two of its blocks and folding. The
//! B-norm of `Γ/A → Γ/B` is the length of a shortest merge path, and a merge
//! path whose every step lowers the Euler characteristic by exactly one
//! witnesses freeness. This gives exact local tests for freeness and
//! algebraicity of every interval.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use super::{closure_of, enumerate_valid_partitions, GraphMorphism, PartitionSearch, ValidPartition, VertexPartition};
use crate::error::{Error, Result};
use crate::graphs::MultiCoreGraph;

/// A decomposition `Γ ↠ Σ → Δ` of a surjective morphism.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub partition: VertexPartition,
    /// `η₁: Γ ↠ Σ`, the direct quotient by `partition`.
    pub first: GraphMorphism,
    /// `η₂: Σ → Δ`.
    pub second: GraphMorphism,
}

impl Decomposition {
    pub fn middle(&self) -> &MultiCoreGraph {
        self.first.codomain()
    }
}

/// Vertex and edge fibre sizes of the induced morphism between two quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProfile {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Decompositions of a surjective morphism, ordered by refinement.
#[derive(Debug)]
pub struct QuotientLattice {
    morphism: GraphMorphism,
    elements: Vec<ValidPartition>,
    index: HashMap<VertexPartition, usize>,
    below: OnceLock<Vec<FixedBitSet>>,
    merges: OnceLock<Vec<Vec<(u32, i32)>>>,
}

impl QuotientLattice {
    /// Enumerates the decompositions of a surjective `η`.
    pub fn new(eta: &GraphMorphism, options: &PartitionSearch) -> Result<Self> {
        if !eta.is_surjective() {
            return Err(Error::invalid("decompositions are defined for surjective morphisms"));
        }
        let fibers = eta.fiber_partition();
        let mut elements = enumerate_valid_partitions(eta.domain(), Some(&fibers), options)?;
        elements.sort_by(|a, b| b.num_blocks.cmp(&a.num_blocks).then_with(|| a.partition.cmp(&b.partition)));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.partition.clone(), i))
            .collect();
        let lattice = QuotientLattice {
            morphism: eta.clone(),
            elements,
            index,
            below: OnceLock::new(),
            merges: OnceLock::new(),
        };
        debug_assert_eq!(lattice.elements[lattice.top()].partition, fibers);
        Ok(lattice)
    }

    pub fn morphism(&self) -> &GraphMorphism {
        &self.morphism
    }

    pub fn graph(&self) -> &MultiCoreGraph {
        self.morphism.domain()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The discrete partition.
    pub fn bottom(&self) -> usize {
        0
    }

    /// The fibre partition of the morphism.
    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn element(&self, i: usize) -> &ValidPartition {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[ValidPartition] {
        &self.elements
    }

    pub fn position(&self, p: &VertexPartition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn chi(&self, i: usize) -> i64 {
        self.elements[i].chi()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match self.below.get() {
            Some(below) => below[b].contains(a),
            None => self.elements[a].partition.refines(&self.elements[b].partition),
        }
    }

    /// For each element `b`, the set of elements `a ≤ b`.
    pub fn below_sets(&self) -> &[FixedBitSet] {
        self.below.get_or_init(|| {
            let n = self.len();
            let mut below = vec![FixedBitSet::with_capacity(n); n];
            for (b, set) in below.iter_mut().enumerate() {
                // Finer partitions have at least as many blocks, hence smaller indices.
                for a in 0..=b {
                    if self.elements[a].partition.refines(&self.elements[b].partition) {
                        set.insert(a);
                    }
                }
            }
            below
        })
    }

    /// The quotient map `Γ ↠ Γ/P_i`.
    pub fn quotient(&self, i: usize) -> GraphMorphism {
        GraphMorphism::quotient(self.graph(), &self.elements[i].partition).expect("lattice elements are valid")
    }

    /// The induced morphism `Γ/P_a → Γ/P_b` for `a ≤ b`.
    pub fn between(&self, a: usize, b: usize) -> Result<GraphMorphism> {
        if !self.leq(a, b) {
            return Err(Error::invalid("the first partition must refine the second"));
        }
        let qa = self.quotient(a);
        let qb = self.quotient(b);
        let mut map = vec![0; qa.codomain().num_vertices()];
        for v in 0..self.graph().num_vertices() {
            map[qa.vertex_map()[v]] = qb.vertex_map()[v];
        }
        GraphMorphism::new(qa.codomain().clone(), qb.codomain().clone(), map)
    }

    /// The decomposition through element `i`, with second leg into the
    /// codomain of the morphism.
    pub fn decomposition(&self, i: usize) -> Decomposition {
        let first = self.quotient(i);
        let mut map = vec![0; first.codomain().num_vertices()];
        for v in 0..self.graph().num_vertices() {
            map[first.vertex_map()[v]] = self.morphism.vertex_map()[v];
        }
        let second = GraphMorphism::new(first.codomain().clone(), self.morphism.codomain().clone(), map)
            .expect("decompositions factor the morphism");
        Decomposition {
            partition: self.elements[i].partition.clone(),
            first,
            second,
        }
    }

    /// Fibre sizes of `Γ/P_a → Γ/P_b` over every vertex and edge of `Γ/P_b`.
    /// Requires `a ≤ b`.
    pub fn fiber_profile(&self, a: usize, b: usize) -> FiberProfile {
        let pa = &self.elements[a].partition;
        let pb = &self.elements[b].partition;
        let mut vertices = vec![0; pb.num_blocks()];
        for target in pa.block_map(pb) {
            vertices[target] += 1;
        }
        // An edge of a folded quotient is determined by its tail block and label.
        let mut keys: Vec<(usize, usize, usize)> = self
            .graph()
            .edges()
            .iter()
            .map(|e| (pb.block_of(e.tail), e.label, pa.block_of(e.tail)))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let mut edges = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let j = keys[i..].iter().take_while(|k| (k.0, k.1) == (keys[i].0, keys[i].1)).count();
            edges.push(j);
            i += j;
        }
        FiberProfile { vertices, edges }
    }

    /// Single merges: for every element, the elements reached by gluing two of
    /// its blocks (inside one fibre) and folding, with the resulting drop of
    /// the Euler characteristic.
    pub fn merges(&self) -> &[Vec<(u32, i32)>] {
        self.merges.get_or_init(|| {
            let g = self.graph();
            let fibers = &self.elements[self.top()].partition;
            (0..self.len())
                .map(|a| {
                    let pa = &self.elements[a].partition;
                    let base = closure_of(g, pa);
                    let reps: Vec<usize> = pa.members().iter().map(|m| m[0]).collect();
                    let mut out = Vec::new();
                    for i in 0..reps.len() {
                        for j in i + 1..reps.len() {
                            if fibers.block_of(reps[i]) != fibers.block_of(reps[j]) {
                                continue;
                            }
                            let mut c = base.clone();
                            c.union(reps[i], reps[j]);
                            let p = VertexPartition::from_rgs(c.blocks());
                            let b = self.index[&p];
                            out.push((b as u32, (self.chi(a) - self.chi(b)) as i32));
                        }
                    }
                    out.sort_unstable();
                    out.dedup();
                    out
                })
                .collect()
        })
    }

    /// Length of a shortest merge path from `a` to `b`, i.e. the B-norm of
    /// `Γ/P_a → Γ/P_b`; `None` unless `a ≤ b`.
    pub fn b_norm(&self, a: usize, b: usize) -> Option<usize> {
        let merges = self.merges();
        let mut dist = vec![usize::MAX; self.len()];
        dist[a] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                return Some(dist[x]);
            }
            for &(y, _) in &merges[x] {
                let y = y as usize;
                if dist[y] == usize::MAX && self.leq(y, b) {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Whether `Γ/P_a → Γ/P_b` is free: some merge path from `a` to `b` lowers
    /// the Euler characteristic by exactly one at every step.
    pub fn is_free(&self, a: usize, b: usize) -> bool {
        self.b_norm_is_tight(a, b)
    }

    fn b_norm_is_tight(&self, a: usize, b: usize) -> bool {
        let merges = self.merges();
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![a];
        seen.insert(a);
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for &(y, drop) in &merges[x] {
                let y = y as usize;
                if drop == 1 && !seen.contains(y) && self.leq(y, b) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        false
    }

    /// For every element `b`, the elements `r` with a merge `r → b` that lowers
    /// the Euler characteristic by exactly one.
    fn tight_predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (r, out) in self.merges().iter().enumerate() {
            for &(b, drop) in out {
                if drop == 1 {
                    pred[b as usize].push(r);
                }
            }
        }
        pred
    }

    /// Whether `Γ/P_a → Γ/P_b` is algebraic.
    ///
    /// A surjective morphism fails to be algebraic exactly when it factors
    /// with a free, non-isomorphic second leg; shortening a tight merge path
    /// of that leg to its last step shows this happens iff some `r` with
    /// `a ≤ r` has a tight merge `r → b`.
    pub fn is_algebraic(&self, a: usize, b: usize) -> bool {
        if !self.leq(a, b) {
            return false;
        }
        let pa = &self.elements[a].partition;
        !self.merges().iter().enumerate().any(|(r, out)| {
            out.iter().any(|&(t, drop)| t as usize == b && drop == 1)
                && pa.refines(&self.elements[r].partition)
        })
    }

    /// `is_algebraic(bottom, b)` for every `b`.
    pub fn algebraic_from_bottom(&self) -> Vec<bool> {
        self.tight_predecessors().iter().map(|p| p.is_empty()).collect()
    }

    /// `is_free(a, top)` for every `a`.
    pub fn free_to_top(&self) -> Vec<bool> {
        let pred = self.tight_predecessors();
        let mut free = vec![false; self.len()];
        let top = self.top();
        free[top] = true;
        let mut stack = vec![top];
        while let Some(b) = stack.pop() {
            for &r in &pred[b] {
                if !free[r] {
                    free[r] = true;
                    stack.push(r);
                }
            }
        }
        free
    }

    /// Algebraicity of every interval, as bitsets: `result[b]` holds the `a`
    /// with `[a, b]` algebraic.
    pub fn algebraic_intervals(&self) -> Vec<FixedBitSet> {
        let below = self.below_sets();
        let pred = self.tight_predecessors();
        (0..self.len())
            .map(|b| {
                let mut bad = FixedBitSet::with_capacity(self.len());
                for &r in &pred[b] {
                    bad.union_with(&below[r]);
                }
                let mut good = below[b].clone();
                good.difference_with(&bad);
                good
            })
            .collect()
    }
}

/// All decompositions of a surjective morphism (one per valid partition
/// refining its fibres).
pub fn enumerate_decomp_b(eta: &GraphMorphism, options: &PartitionSearch) -> Result<Vec<Decomposition>> {
    let lattice = QuotientLattice::new(eta, options)?;
    Ok((0..lattice.len()).map(|i| lattice.decomposition(i)).collect())
}

/// All chains `P₁ ≤ P₂` of decompositions, i.e. factorisations into three
/// surjective morphisms.
pub fn enumerate_decomp_b3(
    eta: &GraphMorphism,
    options: &PartitionSearch,
) -> Result<Vec<(VertexPartition, VertexPartition)>> {
    let lattice = QuotientLattice::new(eta, options)?;
    let below = lattice.below_sets();
    let mut out = Vec::new();
    for b in 0..lattice.len() {
        for a in below[b].ones() {
            out.push((lattice.element(a).partition.clone(), lattice.element(b).partition.clone()));
        }
    }
    Ok(out)
}
