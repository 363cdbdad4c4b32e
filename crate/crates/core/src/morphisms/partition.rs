//! Vertex partitions and the search for partitions whose quotient is folded.
//!
//! A partition of the vertices of a folded graph can be glued without any
//! further folding exactly when it is a congruence: whenever two vertices in
//! one block both have an outgoing (incoming) edge with the same label, the
//! heads (tails) of those edges share a block as well. Such partitions are
//! enumerated by a backtracking search in vertex order. At each vertex that is
//! not yet forced into an earlier block, the search either opens a new block
//! or glues the vertex to one of the open blocks and closes the relation under
//! folding; a branch dies as soon as the closure merges two distinct blocks.
//! Every congruence is produced exactly once, in restricted-growth form.

use crate::error::{Error, Result};
use crate::graphs::{Closure, MultiCoreGraph};

/// A partition of `{0, …, n−1}` in restricted-growth form: vertex 0 lies in
/// block 0 and every new block index is one more than the largest so far.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    blocks: Vec<u32>,
}

impl VertexPartition {
    /// Canonicalises arbitrary block labels.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        VertexPartition { blocks }
    }

    /// Every vertex in its own block.
    pub fn discrete(n: usize) -> Self {
        VertexPartition {
            blocks: (0..n as u32).collect(),
        }
    }

    /// All vertices in one block.
    pub fn indiscrete(n: usize) -> Self {
        VertexPartition { blocks: vec![0; n] }
    }

    pub(crate) fn from_rgs(blocks: Vec<u32>) -> Self {
        debug_assert!(is_rgs(&blocks));
        VertexPartition { blocks }
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.blocks[v] as usize
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Vertices of every block.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (v, &b) in self.blocks.iter().enumerate() {
            out[b as usize].push(v);
        }
        out
    }

    /// The number of identifications `Σ (|block| − 1)`.
    pub fn norm(&self) -> usize {
        self.len() - self.num_blocks()
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &VertexPartition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (&b, &c) in self.blocks.iter().zip(&coarser.blocks) {
            let slot = &mut image[b as usize];
            if *slot == u32::MAX {
                *slot = c;
            } else if *slot != c {
                return false;
            }
        }
        true
    }

    /// For each block of `self`, the block of `coarser` containing it.
    /// Requires `self.refines(coarser)`.
    pub fn block_map(&self, coarser: &VertexPartition) -> Vec<usize> {
        let mut image = vec![0; self.num_blocks()];
        for (&b, &c) in self.blocks.iter().zip(&coarser.blocks) {
            image[b as usize] = c as usize;
        }
        image
    }

    /// Whether the direct quotient of `g` by this partition is folded.
    pub fn is_valid_for(&self, g: &MultiCoreGraph) -> bool {
        let r = g.rank();
        let k = self.num_blocks();
        let mut out = vec![u32::MAX; k * r];
        let mut inc = vec![u32::MAX; k * r];
        for e in g.edges() {
            let (t, h) = (self.blocks[e.tail], self.blocks[e.head]);
            for (table, from, to) in [(&mut out, t, h), (&mut inc, h, t)] {
                let slot = &mut table[from as usize * r + e.label];
                if *slot == u32::MAX {
                    *slot = to;
                } else if *slot != to {
                    return false;
                }
            }
        }
        true
    }
}

fn is_rgs(blocks: &[u32]) -> bool {
    let mut next = 0;
    blocks.iter().all(|&b| {
        if b == next {
            next += 1;
            true
        } else {
            b < next
        }
    })
}

/// Resource limits and filters for [`enumerate_valid_partitions`].
#[derive(Clone, Debug)]
pub struct PartitionSearch {
    /// Refuse graphs with more vertices than this.
    pub max_vertices: usize,
    /// Refuse to produce more partitions than this.
    pub max_partitions: usize,
    /// Drop branches in which some quotient vertex has more half-edges.
    pub max_quotient_degree: Option<usize>,
}

impl Default for PartitionSearch {
    fn default() -> Self {
        PartitionSearch {
            max_vertices: 14,
            max_partitions: 5_000_000,
            max_quotient_degree: None,
        }
    }
}

/// A partition whose quotient needs no folding, with quotient statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidPartition {
    pub partition: VertexPartition,
    /// Vertices of the quotient.
    pub num_blocks: usize,
    /// Edges of the quotient.
    pub num_edges: usize,
}

impl ValidPartition {
    /// Euler characteristic of the quotient.
    pub fn chi(&self) -> i64 {
        self.num_blocks as i64 - self.num_edges as i64
    }
}

/// Closure of `g`'s edges with nothing glued yet.
pub(crate) fn base_closure(g: &MultiCoreGraph) -> Closure {
    let mut c = Closure::new(g.num_vertices(), g.rank());
    for e in g.edges() {
        c.add_edge(e.tail, e.head, e.label);
    }
    c.settle();
    c
}

/// Closure of `g` with the blocks of `p` glued.
pub(crate) fn closure_of(g: &MultiCoreGraph, p: &VertexPartition) -> Closure {
    let mut c = base_closure(g);
    let mut first = vec![usize::MAX; p.num_blocks()];
    for v in 0..p.len() {
        let b = p.block_of(v);
        if first[b] == usize::MAX {
            first[b] = v;
        } else {
            c.union(first[b], v);
        }
    }
    c
}

/// All partitions of `V(g)` with a folded direct quotient that refine the
/// partition `coarsest` (which must itself be valid), in the search order.
pub fn enumerate_valid_partitions(
    g: &MultiCoreGraph,
    coarsest: Option<&VertexPartition>,
    options: &PartitionSearch,
) -> Result<Vec<ValidPartition>> {
    let n = g.num_vertices();
    if n > options.max_vertices {
        return Err(Error::budget("vertices in partition search", options.max_vertices));
    }
    if let Some(c) = coarsest {
        if c.len() != n || !c.is_valid_for(g) {
            return Err(Error::invalid("the coarsest partition must be a valid partition of the graph"));
        }
    }
    let mut search = Search {
        fibers: coarsest.map(|c| c.blocks().to_vec()),
        max_degree: options.max_quotient_degree,
        limit: options.max_partitions,
        reps: Vec::with_capacity(n),
        out: Vec::new(),
    };
    let start = base_closure(g);
    if search.admissible(&start) {
        search.run(start, 0)?;
    }
    Ok(search.out)
}

struct Search {
    fibers: Option<Vec<u32>>,
    max_degree: Option<usize>,
    limit: usize,
    reps: Vec<usize>,
    out: Vec<ValidPartition>,
}

impl Search {
    fn admissible(&self, c: &Closure) -> bool {
        // Class roots are class minima, so an open block that lost its root
        // status has been merged into another open block.
        if self.reps.iter().any(|&r| c.root(r) != r) {
            return false;
        }
        match self.max_degree {
            Some(d) => (0..c.len()).all(|v| c.root(v) != v || c.class_degree(v) <= d),
            None => true,
        }
    }

    fn run(&mut self, mut c: Closure, mut i: usize) -> Result<()> {
        let n = c.len();
        while i < n && c.find(i) < i {
            i += 1;
        }
        if i == n {
            if self.out.len() >= self.limit {
                return Err(Error::budget("valid partitions", self.limit));
            }
            let num_edges = c.quotient_edges();
            self.out.push(ValidPartition {
                num_blocks: c.classes(),
                num_edges,
                partition: VertexPartition::from_rgs(c.blocks()),
            });
            return Ok(());
        }
        // Vertex i opens a new block.
        self.reps.push(i);
        self.run(c.clone(), i + 1)?;
        self.reps.pop();
        // Vertex i joins an open block of the same fiber.
        for k in 0..self.reps.len() {
            let r = self.reps[k];
            if let Some(f) = &self.fibers {
                if f[r] != f[i] {
                    continue;
                }
            }
            let mut next = c.clone();
            next.union(r, i);
            if self.admissible(&next) {
                self.run(next, i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::CyclicWord;

    fn cycle(s: &str, r: usize) -> MultiCoreGraph {
        MultiCoreGraph::cycle(&CyclicWord::parse(s, r).unwrap())
    }

    /// Brute force: every set partition, filtered by validity.
    fn brute_force(g: &MultiCoreGraph) -> Vec<VertexPartition> {
        fn rec(i: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == n {
                out.push(cur.clone());
                return;
            }
            let max = cur.iter().max().map_or(0, |&m| m + 1);
            for b in 0..=max {
                cur.push(b);
                rec(i + 1, n, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        rec(0, g.num_vertices(), &mut Vec::new(), &mut all);
        all.into_iter()
            .map(VertexPartition::from_rgs)
            .filter(|p| p.is_valid_for(g))
            .collect()
    }

    fn sorted(v: Vec<ValidPartition>) -> Vec<VertexPartition> {
        let mut p: Vec<_> = v.into_iter().map(|v| v.partition).collect();
        p.sort();
        p
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        for (w, r) in [("xyXY", 2), ("xxyy", 2), ("x^6", 1), ("xyxY", 2), ("xxY", 2)] {
            let g = cycle(w, r);
            let fast = sorted(enumerate_valid_partitions(&g, None, &PartitionSearch::default()).unwrap());
            let mut slow = brute_force(&g);
            slow.sort();
            assert_eq!(fast, slow, "word {w}");
        }
        let (g, _) = MultiCoreGraph::disjoint_union(&[cycle("xy", 2), cycle("xY", 2), cycle("x", 2)]);
        let fast = sorted(enumerate_valid_partitions(&g, None, &PartitionSearch::default()).unwrap());
        let mut slow = brute_force(&g);
        slow.sort();
        assert_eq!(fast, slow);
    }

    #[test]
    fn cycle_of_power_has_divisor_many_partitions() {
        // Congruences of the cycle x^m are the rotation subgroups.
        for (m, tau) in [(1, 1), (2, 2), (4, 3), (6, 4), (12, 6)] {
            let g = cycle(&format!("x^{m}"), 1);
            let all = enumerate_valid_partitions(&g, None, &PartitionSearch::default()).unwrap();
            assert_eq!(all.len(), tau, "m = {m}");
        }
    }

    #[test]
    fn fibers_and_budgets_are_respected() {
        let g = cycle("xx", 1);
        let discrete = VertexPartition::discrete(2);
        let only = enumerate_valid_partitions(&g, Some(&discrete), &PartitionSearch::default()).unwrap();
        assert_eq!(only.len(), 1);
        let big = cycle("x^20", 1);
        assert!(matches!(
            enumerate_valid_partitions(&big, None, &PartitionSearch::default()),
            Err(Error::Budget { .. })
        ));
        let tight = PartitionSearch {
            max_partitions: 1,
            ..PartitionSearch::default()
        };
        assert!(enumerate_valid_partitions(&g, None, &tight).is_err());
    }

    #[test]
    fn partition_helpers() {
        let p = VertexPartition::from_labels(&[7, 7, 3, 7]);
        assert_eq!(p.blocks(), &[0, 0, 1, 0]);
        assert_eq!(p.norm(), 2);
        assert!(VertexPartition::discrete(4).refines(&p));
        assert!(!p.refines(&VertexPartition::discrete(4)));
        assert!(p.refines(&VertexPartition::indiscrete(4)));
        assert_eq!(p.members(), vec![vec![0, 1, 3], vec![2]]);
    }
}
