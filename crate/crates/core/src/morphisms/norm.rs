//! Norms, freeness, algebraicity and critical quotients.

use std::collections::{HashSet, VecDeque};

use super::lattice::{Decomposition, QuotientLattice};
use super::{base_closure, GraphMorphism, PartitionSearch, VertexPartition};
use crate::error::{Error, Result};
use crate::graphs::MultiCoreGraph;

/// The B-norm of a surjective morphism: the least number of "glue two
/// vertices, then fold" steps that turn the domain into the codomain.
///
/// Breadth-first search over the folded quotients of the domain that refine
/// the fibres; `options.max_partitions` bounds the number of visited states.
pub fn b_norm(eta: &GraphMorphism, options: &PartitionSearch) -> Result<usize> {
    if !eta.is_surjective() {
        return Err(Error::invalid("the B-norm is defined for surjective morphisms"));
    }
    let g = eta.domain();
    if g.num_vertices() > options.max_vertices {
        return Err(Error::budget("vertices in B-norm search", options.max_vertices));
    }
    let fibers = eta.fiber_partition();
    let start = base_closure(g);
    let target = fibers.blocks().to_vec();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.blocks());
    queue.push_back((start, 0usize));
    while let Some((c, d)) = queue.pop_front() {
        let blocks = c.blocks();
        if blocks == target {
            return Ok(d);
        }
        let mut reps: Vec<usize> = Vec::new();
        let mut seen_block = vec![false; blocks.len()];
        for (v, &b) in blocks.iter().enumerate() {
            if !seen_block[b as usize] {
                seen_block[b as usize] = true;
                reps.push(v);
            }
        }
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if fibers.block_of(reps[i]) != fibers.block_of(reps[j]) {
                    continue;
                }
                let mut next = c.clone();
                next.union(reps[i], reps[j]);
                if seen.insert(next.blocks()) {
                    if seen.len() > options.max_partitions {
                        return Err(Error::budget("B-norm search states", options.max_partitions));
                    }
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    Err(Error::invariant("the fibre partition is unreachable by merges"))
}

/// The basis-independent norm: `‖η̄‖_B + χ(Im η) − χ(Δ)`, where `η̄` is the
/// corestriction onto the image. For an empty domain this is `−χ(Δ)`.
pub fn norm(eta: &GraphMorphism, options: &PartitionSearch) -> Result<usize> {
    let image = eta.image();
    let b = b_norm(&image.surjection, options)? as i64;
    let n = b + image.image.chi() - eta.codomain().chi();
    usize::try_from(n).map_err(|_| Error::invariant("negative norm"))
}

/// Free morphisms are exactly those with `‖η‖ = χ(Γ) − χ(Δ)`.
pub fn is_free(eta: &GraphMorphism, options: &PartitionSearch) -> Result<bool> {
    Ok(norm(eta, options)? as i64 == eta.domain().chi() - eta.codomain().chi())
}

/// Whether `η` is algebraic: surjective, and no decomposition has a free
/// second leg other than an isomorphism. Decided by the single-merge
/// criterion on the decomposition lattice.
pub fn is_algebraic(eta: &GraphMorphism, options: &PartitionSearch) -> Result<bool> {
    if !eta.is_surjective() {
        return Ok(false);
    }
    let lattice = QuotientLattice::new(eta, options)?;
    Ok(lattice.is_algebraic(lattice.bottom(), lattice.top()))
}

/// Algebraicity decided literally: every decomposition `Γ ↠ Σ → Δ` with `Σ`
/// not the whole of `η` has its second leg tested with [`is_free`].
pub fn is_algebraic_by_search(eta: &GraphMorphism, options: &PartitionSearch) -> Result<bool> {
    if !eta.is_surjective() {
        return Ok(false);
    }
    let lattice = QuotientLattice::new(eta, options)?;
    for i in 0..lattice.top() {
        if is_free(&lattice.decomposition(i).second, options)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `η = ψ ∘ φ` with `φ` algebraic and `ψ` free.
#[derive(Clone, Debug)]
pub struct AlgFreeDecomposition {
    /// The partition of `V(Γ)` defining `φ`.
    pub partition: VertexPartition,
    pub algebraic: GraphMorphism,
    pub free: GraphMorphism,
}

impl AlgFreeDecomposition {
    pub fn middle(&self) -> &MultiCoreGraph {
        self.algebraic.codomain()
    }
}

/// The algebraic–free decomposition of an arbitrary morphism.
///
/// Its middle is the unique quotient `Σ` of `Γ` with `Γ ↠ Σ` algebraic and
/// `Σ → Δ` free; uniqueness, refinement of every other free second leg and
/// maximality of `χ(Σ)` are all checked and reported as invariant violations.
pub fn alg_free_decomposition(eta: &GraphMorphism, options: &PartitionSearch) -> Result<AlgFreeDecomposition> {
    let image = eta.image();
    let lattice = QuotientLattice::new(&image.surjection, options)?;
    let algebraic = lattice.algebraic_from_bottom();
    let free = lattice.free_to_top();
    let candidates: Vec<usize> = (0..lattice.len()).filter(|&i| algebraic[i] && free[i]).collect();
    let &[q] = candidates.as_slice() else {
        return Err(Error::invariant(format!(
            "expected one algebraic-free decomposition, found {}",
            candidates.len()
        )));
    };
    for i in (0..lattice.len()).filter(|&i| free[i]) {
        if !lattice.leq(q, i) || lattice.chi(i) > lattice.chi(q) {
            return Err(Error::invariant("algebraic-free middle is not the finest free factor"));
        }
    }
    let d = lattice.decomposition(q);
    let free_map = d.second.vertex_map().iter().map(|&v| image.inclusion.vertex_map()[v]).collect();
    let free = GraphMorphism::new(d.middle().clone(), eta.codomain().clone(), free_map)?;
    Ok(AlgFreeDecomposition {
        partition: d.partition,
        algebraic: d.first,
        free,
    })
}

/// `χ^max(η)` and the critical decompositions `Crit(η)`.
#[derive(Clone, Debug)]
pub struct CriticalReport {
    /// Largest `χ(Σ)` over decompositions with algebraic, non-isomorphic
    /// first leg; `None` when there is no such decomposition.
    pub chi_max: Option<i64>,
    pub critical: Vec<Decomposition>,
}

/// Scans the decompositions of `η` (through its image when `η` is not
/// surjective) for algebraic first legs that are not isomorphisms.
pub fn chi_max_and_crit(eta: &GraphMorphism, options: &PartitionSearch) -> Result<CriticalReport> {
    let image = eta.image();
    let lattice = QuotientLattice::new(&image.surjection, options)?;
    let algebraic = lattice.algebraic_from_bottom();
    let candidates: Vec<usize> = (1..lattice.len()).filter(|&i| algebraic[i]).collect();
    let chi_max = candidates.iter().map(|&i| lattice.chi(i)).max();
    let critical = candidates
        .into_iter()
        .filter(|&i| Some(lattice.chi(i)) == chi_max)
        .map(|i| {
            let mut d = lattice.decomposition(i);
            let map = d.second.vertex_map().iter().map(|&v| image.inclusion.vertex_map()[v]).collect();
            d.second = GraphMorphism::new(d.middle().clone(), eta.codomain().clone(), map)
                .expect("decompositions factor the morphism");
            d
        })
        .collect();
    Ok(CriticalReport { chi_max, critical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::CyclicWord;

    fn cycle(s: &str, r: usize) -> MultiCoreGraph {
        MultiCoreGraph::cycle(&CyclicWord::parse(s, r).unwrap())
    }

    fn opts() -> PartitionSearch {
        PartitionSearch::default()
    }

    #[test]
    fn b_norm_examples() {
        let c = cycle("xyXY", 2);
        assert_eq!(b_norm(&GraphMorphism::identity(&c), &opts()).unwrap(), 0);
        assert_eq!(b_norm(&GraphMorphism::to_bouquet(&c), &opts()).unwrap(), 2);
        assert_eq!(b_norm(&GraphMorphism::to_bouquet(&cycle("xx", 1)), &opts()).unwrap(), 1);
        assert!(b_norm(&GraphMorphism::to_bouquet(&cycle("x", 2)), &opts()).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&GraphMorphism::to_bouquet(&cycle("x", 2)), &opts()).unwrap(), 1);
        assert_eq!(norm(&GraphMorphism::to_bouquet(&cycle("xyXY", 2)), &opts()).unwrap(), 2);
        let empty = GraphMorphism::new(MultiCoreGraph::empty(2), MultiCoreGraph::bouquet(2), vec![]).unwrap();
        assert_eq!(norm(&empty, &opts()).unwrap(), 1);
    }

    #[test]
    fn freeness_examples() {
        assert!(is_free(&GraphMorphism::to_bouquet(&cycle("x", 2)), &opts()).unwrap());
        assert!(!is_free(&GraphMorphism::to_bouquet(&cycle("xyXY", 2)), &opts()).unwrap());
        let (xy, _) = MultiCoreGraph::disjoint_union(&[cycle("x", 2), cycle("y", 2)]);
        assert!(is_free(&GraphMorphism::to_bouquet(&xy), &opts()).unwrap());
        let (xx, _) = MultiCoreGraph::disjoint_union(&[cycle("x", 2), cycle("x", 2)]);
        assert!(!is_free(&GraphMorphism::to_bouquet(&xx), &opts()).unwrap());
    }

    #[test]
    fn algebraicity_examples() {
        let cases = [
            (GraphMorphism::identity(&cycle("xyXY", 2)), true),
            (GraphMorphism::new(cycle("x^6", 1), cycle("xx", 1), vec![0, 1, 0, 1, 0, 1]).unwrap(), true),
            (GraphMorphism::to_bouquet(&cycle("xy", 2)), false),
            (GraphMorphism::to_bouquet(&cycle("xyXY", 2)), true),
            (GraphMorphism::to_bouquet(&cycle("x", 2)), false),
        ];
        for (eta, expected) in cases {
            assert_eq!(is_algebraic(&eta, &opts()).unwrap(), expected);
            assert_eq!(is_algebraic_by_search(&eta, &opts()).unwrap(), expected);
        }
    }

    #[test]
    fn alg_free_examples() {
        let eta = GraphMorphism::to_bouquet(&cycle("xyXY", 2));
        let d = alg_free_decomposition(&eta, &opts()).unwrap();
        assert_eq!(d.middle(), &MultiCoreGraph::bouquet(2));
        assert!(d.free.is_isomorphism());

        let inj = GraphMorphism::to_bouquet(&cycle("x", 2));
        let d = alg_free_decomposition(&inj, &opts()).unwrap();
        assert!(d.algebraic.is_isomorphism());

        let (xx, _) = MultiCoreGraph::disjoint_union(&[cycle("x", 2), cycle("x", 2)]);
        let d = alg_free_decomposition(&GraphMorphism::to_bouquet(&xx), &opts()).unwrap();
        assert_eq!(d.middle().num_vertices(), 1);
        assert_eq!(d.middle().num_edges(), 1);
        assert!(is_algebraic(&d.algebraic, &opts()).unwrap());
        assert!(is_free(&d.free, &opts()).unwrap());
    }

    #[test]
    fn critical_examples() {
        let r = chi_max_and_crit(&GraphMorphism::to_bouquet(&cycle("xyXY", 2)), &opts()).unwrap();
        assert_eq!((r.chi_max, r.critical.len()), (Some(-1), 1));
        let r = chi_max_and_crit(&GraphMorphism::to_bouquet(&cycle("xx", 1)), &opts()).unwrap();
        assert_eq!((r.chi_max, r.critical.len()), (Some(0), 1));
        assert_eq!(r.critical[0].middle(), &cycle("x", 1));
        let r = chi_max_and_crit(&GraphMorphism::identity(&cycle("xy", 2)), &opts()).unwrap();
        assert_eq!((r.chi_max, r.critical.len()), (None, 0));
        let r = chi_max_and_crit(&GraphMorphism::to_bouquet(&cycle("x^6", 1)), &opts()).unwrap();
        assert_eq!((r.chi_max, r.critical.len()), (Some(0), 3));
    }
}
