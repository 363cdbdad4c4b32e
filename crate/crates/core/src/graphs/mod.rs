//! Labeled multi core graphs.
//!
//! A [`LabeledGraph`] is an arbitrary directed graph whose edges carry a
//! generator index. Folding it (identifying equally labeled edges that share
//! a tail or a head) and pruning leaves yields a [`MultiCoreGraph`]: a finite
//! disjoint union of core graphs, each describing the conjugacy class of a
//! finitely generated subgroup of the free group. A cycle spelling a
//! cyclically reduced word describes the class of the cyclic subgroup the
//! word generates.

mod canon;
pub(crate) mod closure;

use std::collections::VecDeque;
use std::fmt::Write as _;

pub use canon::CanonicalForm;
pub(crate) use closure::Closure;

use crate::error::{Error, Result};
use crate::words::{CyclicWord, Letter, Word};

const NONE: u32 = u32::MAX;

/// A directed labeled edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub label: usize,
}

/// A labeled graph with no structural invariants (a draft).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    rank: usize,
    num_vertices: usize,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    pub fn new(rank: usize, num_vertices: usize) -> Self {
        LabeledGraph {
            rank,
            num_vertices,
            edges: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    pub fn add_edge(&mut self, tail: usize, head: usize, label: usize) -> Result<()> {
        if tail >= self.num_vertices || head >= self.num_vertices {
            return Err(Error::invalid("edge endpoint does not exist"));
        }
        if label >= self.rank {
            return Err(Error::invalid(format!(
                "edge label {label} is outside rank {}",
                self.rank
            )));
        }
        self.edges.push(Edge { tail, head, label });
        Ok(())
    }

    /// Adds a path spelling `letters` from `from` to `to`, creating the
    /// interior vertices. An empty spelling glues nothing and adds nothing.
    pub fn add_path(&mut self, from: usize, to: usize, letters: &[Letter]) -> Result<Vec<usize>> {
        let mut vertices = vec![from];
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                to
            } else {
                self.add_vertex()
            };
            let cur = *vertices.last().unwrap();
            if l.inverse {
                self.add_edge(next, cur, l.generator)?;
            } else {
                self.add_edge(cur, next, l.generator)?;
            }
            vertices.push(next);
        }
        Ok(vertices)
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    /// Whether no two equally labeled edges share a tail or a head.
    pub fn is_folded(&self) -> bool {
        let mut out = vec![false; self.num_vertices * self.rank];
        let mut inc = vec![false; self.num_vertices * self.rank];
        for e in &self.edges {
            let (o, i) = (e.tail * self.rank + e.label, e.head * self.rank + e.label);
            if out[o] || inc[i] {
                return false;
            }
            out[o] = true;
            inc[i] = true;
        }
        true
    }
}

/// Output of [`fold`]: the folded graph and the vertex map into it.
#[derive(Clone, Debug)]
pub struct FoldResult {
    pub graph: LabeledGraph,
    /// `trace[v]` is the folded vertex that original vertex `v` became.
    pub trace: Vec<usize>,
}

/// Stallings folding. Leaves are kept; see [`prune`].
pub fn fold(draft: &LabeledGraph) -> FoldResult {
    let mut closure = Closure::new(draft.num_vertices, draft.rank);
    for e in &draft.edges {
        closure.add_edge(e.tail, e.head, e.label);
    }
    closure.settle();
    quotient_graph(draft.rank, draft.edges.iter().copied(), &closure)
}

/// The graph obtained from `edges` by identifying vertices as in `closure`
/// and merging coinciding edges.
pub(crate) fn quotient_graph(
    rank: usize,
    edges: impl Iterator<Item = Edge>,
    closure: &Closure,
) -> FoldResult {
    let trace: Vec<usize> = closure.blocks().into_iter().map(|b| b as usize).collect();
    let num_vertices = closure.classes();
    let mut edges: Vec<Edge> = edges
        .map(|e| Edge {
            tail: trace[e.tail],
            head: trace[e.head],
            label: e.label,
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    FoldResult {
        graph: LabeledGraph {
            rank,
            num_vertices,
            edges,
        },
        trace,
    }
}

/// Iteratively deletes vertices of degree at most one (loops count twice).
///
/// The input must be folded. Returns the resulting multi core graph and, for
/// every input vertex, its index in the result if it survived.
pub fn prune(draft: &LabeledGraph) -> Result<(MultiCoreGraph, Vec<Option<usize>>)> {
    let mut deg = draft.degrees();
    let mut alive = vec![true; draft.num_vertices];
    let mut edge_alive = vec![true; draft.edges.len()];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); draft.num_vertices];
    for (i, e) in draft.edges.iter().enumerate() {
        incident[e.tail].push(i);
        if e.head != e.tail {
            incident[e.head].push(i);
        }
    }
    let mut queue: Vec<usize> = (0..draft.num_vertices).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &i in &incident[v] {
            if !edge_alive[i] {
                continue;
            }
            edge_alive[i] = false;
            let e = draft.edges[i];
            let other = if e.tail == v { e.head } else { e.tail };
            deg[other] -= 1;
            if alive[other] && deg[other] <= 1 {
                queue.push(other);
            }
        }
    }
    let mut map = vec![None; draft.num_vertices];
    let mut next = 0;
    for v in 0..draft.num_vertices {
        if alive[v] {
            map[v] = Some(next);
            next += 1;
        }
    }
    let edges = draft
        .edges
        .iter()
        .zip(&edge_alive)
        .filter(|(_, &a)| a)
        .map(|(e, _)| Edge {
            tail: map[e.tail].unwrap(),
            head: map[e.head].unwrap(),
            label: e.label,
        });
    let graph = MultiCoreGraph::from_parts(draft.rank, next, edges.collect())?;
    Ok((graph, map))
}

/// Folds and prunes, returning the composite vertex map.
pub fn fold_and_prune(draft: &LabeledGraph) -> Result<(MultiCoreGraph, Vec<Option<usize>>)> {
    let folded = fold(draft);
    let (graph, map) = prune(&folded.graph)?;
    let trace = folded.trace.iter().map(|&v| map[v]).collect();
    Ok((graph, trace))
}

/// Euler characteristic, component count and rank of a multi core graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInvariants {
    pub chi: i64,
    pub components: usize,
    pub rank: i64,
    pub component_chi: Vec<i64>,
}

/// A folded labeled graph in which every vertex has degree at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiCoreGraph {
    rank: usize,
    num_vertices: usize,
    /// Sorted by `(tail, head, label)`.
    edges: Vec<Edge>,
    /// `out[v * rank + label]`: index of the edge leaving `v` with `label`.
    out: Vec<u32>,
    /// `inc[v * rank + label]`: index of the edge entering `v` with `label`.
    inc: Vec<u32>,
}

impl MultiCoreGraph {
    /// Validates folding and the degree condition.
    pub fn from_parts(rank: usize, num_vertices: usize, mut edges: Vec<Edge>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("rank must be positive"));
        }
        edges.sort_unstable();
        let mut out = vec![NONE; num_vertices * rank];
        let mut inc = vec![NONE; num_vertices * rank];
        let mut deg = vec![0usize; num_vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= num_vertices || e.head >= num_vertices || e.label >= rank {
                return Err(Error::invalid("edge refers to a missing vertex or label"));
            }
            let (o, n) = (e.tail * rank + e.label, e.head * rank + e.label);
            if out[o] != NONE || inc[n] != NONE {
                return Err(Error::invalid("graph is not folded"));
            }
            out[o] = i as u32;
            inc[n] = i as u32;
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        if let Some(v) = deg.iter().position(|&d| d < 2) {
            return Err(Error::invalid(format!("vertex {v} has degree below two")));
        }
        Ok(MultiCoreGraph {
            rank,
            num_vertices,
            edges,
            out,
            inc,
        })
    }

    /// Folds and prunes a draft.
    pub fn from_draft(draft: &LabeledGraph) -> Result<Self> {
        Ok(fold_and_prune(draft)?.0)
    }

    /// The empty multiset.
    pub fn empty(rank: usize) -> Self {
        MultiCoreGraph {
            rank,
            num_vertices: 0,
            edges: Vec::new(),
            out: Vec::new(),
            inc: Vec::new(),
        }
    }

    /// One vertex with a loop for every generator.
    pub fn bouquet(rank: usize) -> Self {
        let edges = (0..rank)
            .map(|label| Edge {
                tail: 0,
                head: 0,
                label,
            })
            .collect();
        Self::from_parts(rank, 1, edges).expect("a bouquet is a core graph")
    }

    /// The cycle spelling a cyclically reduced word: vertex `i` sits before
    /// the `i`-th letter.
    pub fn cycle(w: &CyclicWord) -> Self {
        let n = w.len();
        let edges = w
            .letters()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let (a, b) = (i, (i + 1) % n);
                let (tail, head) = if l.inverse { (b, a) } else { (a, b) };
                Edge {
                    tail,
                    head,
                    label: l.generator,
                }
            })
            .collect();
        Self::from_parts(w.rank(), n, edges).expect("a cyclically reduced word spells a folded cycle")
    }

    /// Disjoint union of `alpha[i-1]` cycles spelling `w^i` for each `i`.
    pub fn powers(w: &CyclicWord, alpha: &[usize]) -> Result<Self> {
        if alpha.iter().all(|&a| a == 0) {
            return Err(Error::invalid("at least one exponent must be positive"));
        }
        let mut parts = Vec::new();
        for (i, &count) in alpha.iter().enumerate() {
            let c = Self::cycle(&w.pow(i + 1));
            parts.extend(std::iter::repeat_n(c, count));
        }
        Ok(Self::disjoint_union(&parts).0)
    }

    /// Core graph of the subgroup generated by `generators`, together with
    /// the base vertex if it lies on the core.
    pub fn subgroup(generators: &[Word]) -> Result<(Self, Option<usize>)> {
        let rank = generators
            .first()
            .map(Word::rank)
            .ok_or_else(|| Error::invalid("no generators given"))?;
        if generators.iter().all(Word::is_identity) {
            return Err(Error::invalid("all generators are trivial"));
        }
        let mut draft = LabeledGraph::new(rank, 1);
        for g in generators.iter().filter(|g| !g.is_identity()) {
            if g.rank() != rank {
                return Err(Error::invalid("generators have different ranks"));
            }
            draft.add_path(0, 0, g.letters())?;
        }
        let (graph, map) = fold_and_prune(&draft)?;
        Ok((graph, map[0]))
    }

    /// Disjoint union; also returns the vertex offset of every part.
    pub fn disjoint_union(parts: &[MultiCoreGraph]) -> (Self, Vec<usize>) {
        let rank = parts.first().map_or(1, |p| p.rank);
        let mut offsets = Vec::with_capacity(parts.len());
        let mut edges = Vec::new();
        let mut n = 0;
        for p in parts {
            offsets.push(n);
            edges.extend(p.edges.iter().map(|e| Edge {
                tail: e.tail + n,
                head: e.head + n,
                label: e.label,
            }));
            n += p.num_vertices;
        }
        let g = Self::from_parts(rank, n, edges).expect("a union of core graphs is a core graph");
        (g, offsets)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.num_vertices == 0
    }

    /// Index of the edge leaving `v` with `label`.
    pub fn out_edge(&self, v: usize, label: usize) -> Option<usize> {
        match self.out[v * self.rank + label] {
            NONE => None,
            e => Some(e as usize),
        }
    }

    /// Index of the edge entering `v` with `label`.
    pub fn in_edge(&self, v: usize, label: usize) -> Option<usize> {
        match self.inc[v * self.rank + label] {
            NONE => None,
            e => Some(e as usize),
        }
    }

    /// The vertex reached from `v` by reading `letter`, if any.
    pub fn step(&self, v: usize, letter: Letter) -> Option<usize> {
        if letter.inverse {
            self.in_edge(v, letter.generator).map(|e| self.edges[e].tail)
        } else {
            self.out_edge(v, letter.generator).map(|e| self.edges[e].head)
        }
    }

    /// Index of the edge `tail --label--> head`, if present.
    pub fn find_edge(&self, tail: usize, head: usize, label: usize) -> Option<usize> {
        self.out_edge(tail, label).filter(|&e| self.edges[e].head == head)
    }

    /// Edges leaving or entering `v`, each as `(edge index, letter read when
    /// traversing it away from v)`.
    pub fn half_edges(&self, v: usize) -> impl Iterator<Item = (usize, Letter)> + '_ {
        (0..self.rank).flat_map(move |label| {
            let o = self.out_edge(v, label).map(|e| (e, Letter::new(label, false)));
            let i = self.in_edge(v, label).map(|e| (e, Letter::new(label, true)));
            o.into_iter().chain(i)
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.half_edges(v).count()
    }

    /// Euler characteristic `|V| − |E|`.
    pub fn chi(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64
    }

    /// Component index of every vertex (components numbered by least vertex).
    pub fn component_labels(&self) -> Vec<usize> {
        let mut closure = Closure::new(self.num_vertices, 0);
        for e in &self.edges {
            closure.union(e.tail, e.head);
        }
        closure.blocks().into_iter().map(|b| b as usize).collect()
    }

    /// Vertex lists of the connected components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let labels = self.component_labels();
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut comps = vec![Vec::new(); count];
        for (v, &c) in labels.iter().enumerate() {
            comps[c].push(v);
        }
        comps
    }

    pub fn num_components(&self) -> usize {
        self.component_labels().iter().max().map_or(0, |m| m + 1)
    }

    /// `χ`, number of components `c`, and `rk = c − χ`.
    pub fn invariants(&self) -> GraphInvariants {
        let labels = self.component_labels();
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut component_chi = vec![0i64; count];
        for &c in &labels {
            component_chi[c] += 1;
        }
        for e in &self.edges {
            component_chi[labels[e.tail]] -= 1;
        }
        GraphInvariants {
            chi: self.chi(),
            components: count,
            rank: count as i64 - self.chi(),
            component_chi,
        }
    }

    /// Subgraph spanned by the given vertices (with every edge between them),
    /// relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut index = vec![NONE; self.num_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.tail] != NONE && index[e.head] != NONE)
            .map(|e| Edge {
                tail: index[e.tail] as usize,
                head: index[e.head] as usize,
                label: e.label,
            })
            .collect();
        Self::from_parts(self.rank, vertices.len(), edges)
    }

    /// Graph with vertices renumbered: new index of `v` is `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                tail: perm[e.tail],
                head: perm[e.head],
                label: e.label,
            })
            .collect();
        Self::from_parts(self.rank, self.num_vertices, edges).expect("relabelling preserves validity")
    }

    /// The graph as a draft.
    pub fn to_draft(&self) -> LabeledGraph {
        LabeledGraph {
            rank: self.rank,
            num_vertices: self.num_vertices,
            edges: self.edges.clone(),
        }
    }

    /// Free basis of `π₁(component, base)` read off a breadth-first spanning
    /// tree: one reduced word per edge outside the tree.
    pub fn pi1_basis(&self, base: usize) -> Result<Vec<Word>> {
        if base >= self.num_vertices {
            return Err(Error::invalid("base vertex does not exist"));
        }
        let mut path: Vec<Option<Word>> = vec![None; self.num_vertices];
        let mut tree_edge = vec![false; self.edges.len()];
        path[base] = Some(Word::identity(self.rank));
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            let pv = path[v].clone().unwrap();
            for (e, letter) in self.half_edges(v) {
                let u = self.step(v, letter).unwrap();
                if path[u].is_none() {
                    tree_edge[e] = true;
                    path[u] = Some(pv.multiply(&Word::new(self.rank, [letter])?)?);
                    queue.push_back(u);
                }
            }
        }
        let mut basis = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if tree_edge[i] {
                continue;
            }
            if let (Some(pt), Some(ph)) = (&path[e.tail], &path[e.head]) {
                let step = Word::new(self.rank, [Letter::new(e.label, false)])?;
                basis.push(pt.multiply(&step)?.multiply(&ph.inverse())?);
            }
        }
        Ok(basis)
    }

    /// Canonical encoding: equal exactly for isomorphic graphs.
    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self, None)
    }

    /// Canonical encoding of the graph with vertex colours.
    pub fn canonical_form_colored(&self, colors: &[u32]) -> CanonicalForm {
        canon::canonical_form(self, Some(colors))
    }

    /// A label-preserving isomorphism `self → other` as a vertex map.
    pub fn isomorphism(&self, other: &MultiCoreGraph) -> Option<Vec<usize>> {
        canon::isomorphism(self, other)
    }

    /// Graphviz rendering; `fibers` optionally colours vertices by class.
    pub fn to_dot(&self, fibers: Option<&[usize]>) -> String {
        const PALETTE: [&str; 8] = [
            "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
        ];
        let mut s = String::from("digraph G {\n  node [shape=circle];\n");
        for v in 0..self.num_vertices {
            match fibers {
                Some(f) => {
                    let _ = writeln!(
                        s,
                        "  {v} [style=filled, fillcolor=\"{}\", xlabel=\"{}\"];",
                        PALETTE[f[v] % PALETTE.len()],
                        f[v]
                    );
                }
                None => {
                    let _ = writeln!(s, "  {v};");
                }
            }
        }
        for e in &self.edges {
            let _ = writeln!(s, "  {} -> {} [label=\"b_{}\"];", e.tail, e.head, e.label + 1);
        }
        s.push_str("}\n");
        s
    }
}
