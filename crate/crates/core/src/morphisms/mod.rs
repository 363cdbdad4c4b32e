//! Morphisms of multi core graphs.
//!
//! A morphism is a label- and orientation-preserving map between multi core
//! graphs. Because codomains are folded, it is determined by its action on
//! vertices. Surjective morphisms out of a graph `Γ` correspond to partitions
//! of `V(Γ)` whose direct quotient is folded, and most computations here work
//! on those partitions: decompositions, norms, freeness and algebraicity,
//! critical quotients.

mod immediate;
mod lattice;
mod norm;
mod partition;

pub use immediate::{immediate_morphism_norm_oracle, OracleBudget};
pub use lattice::{enumerate_decomp_b, enumerate_decomp_b3, Decomposition, FiberProfile, QuotientLattice};
pub use norm::{
    alg_free_decomposition, b_norm, chi_max_and_crit, is_algebraic, is_algebraic_by_search,
    is_free, norm, AlgFreeDecomposition, CriticalReport,
};
pub use partition::{enumerate_valid_partitions, PartitionSearch, ValidPartition, VertexPartition};

pub(crate) use partition::{base_closure, closure_of};

use crate::error::{Error, Result};
use crate::graphs::{prune, quotient_graph, LabeledGraph, MultiCoreGraph};

/// A morphism `domain → codomain` given by its vertex map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    domain: MultiCoreGraph,
    codomain: MultiCoreGraph,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
    surjective: bool,
    injective: bool,
}

/// `η = ι ∘ η̄` with `η̄` onto the image and `ι` the inclusion.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    pub image: MultiCoreGraph,
    pub surjection: GraphMorphism,
    pub inclusion: GraphMorphism,
}

/// The pullback `Λ` of two morphisms with a common codomain.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub graph: MultiCoreGraph,
    pub first: GraphMorphism,
    pub second: GraphMorphism,
    /// For each vertex of `Λ`, the pair of vertices it projects to.
    pub pairs: Vec<(usize, usize)>,
}

impl GraphMorphism {
    /// Validates that every domain edge has an image edge.
    pub fn new(domain: MultiCoreGraph, codomain: MultiCoreGraph, vertex_map: Vec<usize>) -> Result<Self> {
        if domain.rank() != codomain.rank() {
            return Err(Error::invalid("domain and codomain have different ranks"));
        }
        if vertex_map.len() != domain.num_vertices() {
            return Err(Error::invalid("vertex map must be total on the domain"));
        }
        if vertex_map.iter().any(|&v| v >= codomain.num_vertices()) {
            return Err(Error::invalid("vertex map leaves the codomain"));
        }
        let mut edge_map = Vec::with_capacity(domain.num_edges());
        for e in domain.edges() {
            let image = codomain
                .find_edge(vertex_map[e.tail], vertex_map[e.head], e.label)
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "edge {} -> {} (label {}) has no image",
                        e.tail, e.head, e.label
                    ))
                })?;
            edge_map.push(image);
        }
        let mut hit_v = vec![0usize; codomain.num_vertices()];
        vertex_map.iter().for_each(|&v| hit_v[v] += 1);
        let mut hit_e = vec![false; codomain.num_edges()];
        edge_map.iter().for_each(|&e| hit_e[e] = true);
        let surjective = hit_v.iter().all(|&c| c > 0) && hit_e.iter().all(|&h| h);
        let injective = hit_v.iter().all(|&c| c <= 1);
        Ok(GraphMorphism {
            domain,
            codomain,
            vertex_map,
            edge_map,
            surjective,
            injective,
        })
    }

    pub fn identity(g: &MultiCoreGraph) -> Self {
        Self::new(g.clone(), g.clone(), (0..g.num_vertices()).collect()).expect("identity is a morphism")
    }

    /// The immersion of `g` into the bouquet of its rank.
    pub fn to_bouquet(g: &MultiCoreGraph) -> Self {
        Self::new(g.clone(), MultiCoreGraph::bouquet(g.rank()), vec![0; g.num_vertices()])
            .expect("every graph immerses in the bouquet")
    }

    pub fn domain(&self) -> &MultiCoreGraph {
        &self.domain
    }

    pub fn codomain(&self) -> &MultiCoreGraph {
        &self.codomain
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    /// Bijective on vertices and edges.
    pub fn is_isomorphism(&self) -> bool {
        self.surjective && self.injective
    }

    /// `second ∘ first`.
    pub fn compose(second: &GraphMorphism, first: &GraphMorphism) -> Result<GraphMorphism> {
        if first.codomain != second.domain {
            return Err(Error::invalid("composition across different graphs"));
        }
        let map = first.vertex_map.iter().map(|&v| second.vertex_map[v]).collect();
        GraphMorphism::new(first.domain.clone(), second.codomain.clone(), map)
    }

    /// The partition of the domain into fibres over codomain vertices.
    pub fn fiber_partition(&self) -> VertexPartition {
        VertexPartition::from_labels(&self.vertex_map)
    }

    /// Image factorisation `Γ ↠ Σ ↪ Δ`.
    pub fn image(&self) -> ImageFactorization {
        let mut vertices: Vec<usize> = self.vertex_map.clone();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges: Vec<usize> = self.edge_map.clone();
        edges.sort_unstable();
        edges.dedup();
        let mut index = vec![usize::MAX; self.codomain.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let image_edges = edges
            .iter()
            .map(|&e| {
                let e = self.codomain.edges()[e];
                crate::graphs::Edge {
                    tail: index[e.tail],
                    head: index[e.head],
                    label: e.label,
                }
            })
            .collect();
        let image = MultiCoreGraph::from_parts(self.codomain.rank(), vertices.len(), image_edges)
            .expect("images of core graphs are core graphs");
        let surjection = GraphMorphism::new(
            self.domain.clone(),
            image.clone(),
            self.vertex_map.iter().map(|&v| index[v]).collect(),
        )
        .expect("corestriction is a morphism");
        let inclusion = GraphMorphism::new(image.clone(), self.codomain.clone(), vertices)
            .expect("inclusion is a morphism");
        ImageFactorization {
            image,
            surjection,
            inclusion,
        }
    }

    /// Quotient `Γ ↠ Γ/P` (glue the blocks, then fold).
    pub fn quotient(g: &MultiCoreGraph, p: &VertexPartition) -> Result<GraphMorphism> {
        if p.len() != g.num_vertices() {
            return Err(Error::invalid("partition does not match the graph"));
        }
        let closure = closure_of(g, p);
        let folded = quotient_graph(g.rank(), g.edges().iter().copied(), &closure);
        let sigma = MultiCoreGraph::from_parts(g.rank(), folded.graph.num_vertices(), folded.graph.edges().to_vec())?;
        GraphMorphism::new(g.clone(), sigma, folded.trace)
    }

    /// Fibre product over the common codomain, pruned to its core.
    pub fn pullback(first: &GraphMorphism, second: &GraphMorphism) -> Result<Pullback> {
        if first.codomain != second.codomain {
            return Err(Error::invalid("pullback needs a common codomain"));
        }
        let (a, b) = (&first.domain, &second.domain);
        let mut pairs = Vec::new();
        let mut index = vec![usize::MAX; a.num_vertices() * b.num_vertices()];
        for u in 0..a.num_vertices() {
            for v in 0..b.num_vertices() {
                if first.vertex_map[u] == second.vertex_map[v] {
                    index[u * b.num_vertices() + v] = pairs.len();
                    pairs.push((u, v));
                }
            }
        }
        let mut draft = LabeledGraph::new(a.rank(), pairs.len());
        for ea in a.edges() {
            for eb in b.edges().iter().filter(|eb| eb.label == ea.label) {
                let t = index[ea.tail * b.num_vertices() + eb.tail];
                let h = index[ea.head * b.num_vertices() + eb.head];
                if t != usize::MAX && h != usize::MAX {
                    draft.add_edge(t, h, ea.label)?;
                }
            }
        }
        let (graph, map) = prune(&draft)?;
        let mut kept = vec![(0, 0); graph.num_vertices()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                kept[*new] = pairs[old];
            }
        }
        let first_proj = GraphMorphism::new(graph.clone(), a.clone(), kept.iter().map(|p| p.0).collect())?;
        let second_proj = GraphMorphism::new(graph.clone(), b.clone(), kept.iter().map(|p| p.1).collect())?;
        Ok(Pullback {
            graph,
            first: first_proj,
            second: second_proj,
            pairs: kept,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::CyclicWord;

    fn cycle(s: &str, r: usize) -> MultiCoreGraph {
        MultiCoreGraph::cycle(&CyclicWord::parse(s, r).unwrap())
    }

    #[test]
    fn construction_examples() {
        let c = cycle("xyXY", 2);
        assert!(GraphMorphism::identity(&c).is_isomorphism());
        let to_b = GraphMorphism::to_bouquet(&c);
        assert!(to_b.is_surjective() && !to_b.is_injective());
        assert!(GraphMorphism::new(c.clone(), cycle("xxyy", 2), vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn image_examples() {
        let c = cycle("xyXY", 2);
        let id = GraphMorphism::identity(&c).image();
        assert_eq!(id.image, c);
        let f = GraphMorphism::to_bouquet(&cycle("x", 2)).image();
        assert_eq!((f.image.num_vertices(), f.image.num_edges()), (1, 1));
        assert!(f.inclusion.is_injective() && f.surjection.is_surjective());
        // cycle(x^6) -> cycle(x^2) is onto.
        let m = GraphMorphism::new(cycle("x^6", 1), cycle("xx", 1), vec![0, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(m.image().image, cycle("xx", 1));
        let comp = GraphMorphism::compose(&GraphMorphism::to_bouquet(&cycle("xx", 1)), &m).unwrap();
        assert_eq!(comp.codomain(), &MultiCoreGraph::bouquet(1));
    }

    #[test]
    fn quotient_examples() {
        let c = cycle("xy", 2);
        let q = GraphMorphism::quotient(&c, &VertexPartition::discrete(2)).unwrap();
        assert!(q.is_isomorphism());
        let q = GraphMorphism::quotient(&c, &VertexPartition::indiscrete(2)).unwrap();
        assert_eq!(q.codomain(), &MultiCoreGraph::bouquet(2));
        let q = GraphMorphism::quotient(&cycle("xyXY", 2), &VertexPartition::indiscrete(4)).unwrap();
        assert_eq!(q.codomain(), &MultiCoreGraph::bouquet(2));
        // Gluing two opposite vertices of x^4 folds to the cycle x^2.
        let q = GraphMorphism::quotient(&cycle("x^4", 1), &VertexPartition::from_labels(&[0, 1, 0, 3])).unwrap();
        assert_eq!(q.codomain().num_vertices(), 2);
    }

    #[test]
    fn pullback_examples() {
        let loop_x = MultiCoreGraph::bouquet(1);
        let a = GraphMorphism::to_bouquet(&cycle("xx", 1));
        let b = GraphMorphism::to_bouquet(&cycle("xxx", 1));
        let pb = GraphMorphism::pullback(&a, &b).unwrap();
        assert!(pb.graph.isomorphism(&cycle("x^6", 1)).is_some());
        assert_eq!(a.codomain(), &loop_x);

        let c = cycle("xyXY", 2);
        let eta = GraphMorphism::to_bouquet(&c);
        let id = GraphMorphism::identity(eta.codomain());
        let pb = GraphMorphism::pullback(&id, &eta).unwrap();
        assert!(pb.graph.isomorphism(&c).is_some());

        let x = GraphMorphism::to_bouquet(&cycle("x", 2));
        let y = GraphMorphism::to_bouquet(&cycle("y", 2));
        assert!(GraphMorphism::pullback(&x, &y).unwrap().graph.is_empty());
    }
}
