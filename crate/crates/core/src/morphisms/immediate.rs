//! An independent, brute-force oracle for the norm of a morphism.
//!
//! The norm counts the fewest "immediate" steps that build the codomain out
//! of the domain: adjoining an element of the target subgroup to one
//! subgroup, or merging two subgroups after conjugating one of them.
//! Geometrically both steps attach a path of the codomain to the current
//! graph (between two vertices of one component, or of two components) and
//! fold, or glue two vertices lying over the same codomain vertex and fold.
//! This module searches over such steps directly, with every intermediate
//! graph carrying its map to the codomain as a vertex colouring. It shares
//! nothing with the partition machinery beyond folding and is meant only for
//! tiny instances.

use std::collections::HashMap;

use super::GraphMorphism;
use crate::graphs::{fold, quotient_graph, CanonicalForm, Closure, MultiCoreGraph};
use crate::words::Letter;

/// Limits for [`immediate_morphism_norm_oracle`].
#[derive(Clone, Debug)]
pub struct OracleBudget {
    /// Longest sequence of steps tried.
    pub max_depth: usize,
    /// Longest codomain path attached in one step.
    pub max_path_length: usize,
    /// Total number of intermediate graphs examined.
    pub max_states: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_depth: 6,
            max_path_length: 3,
            max_states: 200_000,
        }
    }
}

/// A graph together with its colouring by codomain vertices.
#[derive(Clone)]
struct State {
    graph: MultiCoreGraph,
    colors: Vec<usize>,
}

/// A non-backtracking walk in the codomain: its letters and visited vertices
/// (the start excluded).
struct Walk {
    letters: Vec<Letter>,
    vertices: Vec<usize>,
}

struct Search<'a> {
    delta: &'a MultiCoreGraph,
    target_vertices: usize,
    target_edges: usize,
    target_chi: i64,
    target_components: usize,
    walks: Vec<Vec<Walk>>,
    budget: &'a OracleBudget,
    states: usize,
    best_depth: HashMap<CanonicalForm, usize>,
}

/// The norm of `η` found by searching sequences of immediate steps, or `None`
/// when the budget is exhausted first.
pub fn immediate_morphism_norm_oracle(eta: &GraphMorphism, budget: &OracleBudget) -> Option<usize> {
    let delta = eta.codomain();
    let labels = delta.component_labels();
    let inv = delta.invariants();
    let mut met = vec![false; inv.components];
    for &v in eta.vertex_map() {
        met[labels[v]] = true;
    }
    // Components never reached contribute their rank minus one.
    let unmet: i64 = (0..inv.components).filter(|&c| !met[c]).map(|c| -inv.component_chi[c]).sum();
    let met_vertices = labels.iter().filter(|&&c| met[c]).count();
    let met_edges = delta.edges().iter().filter(|e| met[labels[e.tail]]).count();
    let walks = (0..delta.num_vertices())
        .map(|x| walks_from(delta, x, budget.max_path_length))
        .collect();
    let mut search = Search {
        delta,
        target_vertices: met_vertices,
        target_edges: met_edges,
        target_chi: met_vertices as i64 - met_edges as i64,
        target_components: met.iter().filter(|&&m| m).count(),
        walks,
        budget,
        states: 0,
        best_depth: HashMap::new(),
    };
    let start = State {
        graph: eta.domain().clone(),
        colors: eta.vertex_map().to_vec(),
    };
    let lower = search.lower_bound(&start);
    for bound in lower..=budget.max_depth {
        search.best_depth.clear();
        match search.dfs(&start, 0, bound) {
            Some(true) => return Some(bound + unmet as usize),
            Some(false) => continue,
            None => return None,
        }
    }
    None
}

fn walks_from(delta: &MultiCoreGraph, start: usize, max_len: usize) -> Vec<Walk> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Letter>, Vec<usize>)> = vec![(Vec::new(), Vec::new())];
    while let Some((letters, vertices)) = stack.pop() {
        if letters.len() == max_len {
            continue;
        }
        let at = vertices.last().copied().unwrap_or(start);
        for generator in 0..delta.rank() {
            for inverse in [false, true] {
                let l = Letter::new(generator, inverse);
                if letters.last().is_some_and(|p| *p == l.inv()) {
                    continue;
                }
                if let Some(next) = delta.step(at, l) {
                    let mut ls = letters.clone();
                    ls.push(l);
                    let mut vs = vertices.clone();
                    vs.push(next);
                    out.push(Walk {
                        letters: ls.clone(),
                        vertices: vs.clone(),
                    });
                    stack.push((ls, vs));
                }
            }
        }
    }
    out
}

impl Search<'_> {
    fn is_target(&self, s: &State) -> bool {
        if s.graph.num_vertices() != self.target_vertices || s.graph.num_edges() != self.target_edges {
            return false;
        }
        let mut hit = vec![false; self.delta.num_vertices()];
        s.colors.iter().all(|&c| !std::mem::replace(&mut hit[c], true))
    }

    /// Every step lowers `χ` and the number of components by at most one.
    fn lower_bound(&self, s: &State) -> usize {
        let chi_gap = (s.graph.chi() - self.target_chi).max(0) as usize;
        let comp_gap = s.graph.num_components().saturating_sub(self.target_components);
        let gap = chi_gap.max(comp_gap);
        if gap == 0 && !self.is_target(s) {
            1
        } else {
            gap
        }
    }

    /// Depth-first search with an iterative-deepening bound. `Some(found)`, or
    /// `None` when the state budget runs out.
    fn dfs(&mut self, s: &State, depth: usize, bound: usize) -> Option<bool> {
        if self.is_target(s) {
            return Some(true);
        }
        if depth + self.lower_bound(s) > bound {
            return Some(false);
        }
        for next in self.successors(s) {
            let key = next.graph.canonical_form_colored(&next.colors.iter().map(|&c| c as u32).collect::<Vec<_>>());
            match self.best_depth.get(&key) {
                Some(&d) if d <= depth + 1 => continue,
                _ => {}
            }
            self.best_depth.insert(key, depth + 1);
            self.states += 1;
            if self.states > self.budget.max_states {
                return None;
            }
            if self.dfs(&next, depth + 1, bound)? {
                return Some(true);
            }
        }
        Some(false)
    }

    fn successors(&self, s: &State) -> Vec<State> {
        let n = s.graph.num_vertices();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if s.colors[u] == s.colors[v] {
                    out.push(merge(s, u, v));
                }
            }
        }
        for u in 0..n {
            for v in u..n {
                for walk in &self.walks[s.colors[u]] {
                    if walk.vertices.last() == Some(&s.colors[v]) {
                        out.push(attach(s, u, v, walk));
                    }
                }
            }
        }
        out
    }
}

fn merge(s: &State, u: usize, v: usize) -> State {
    let g = &s.graph;
    let mut c = Closure::new(g.num_vertices(), g.rank());
    for e in g.edges() {
        c.add_edge(e.tail, e.head, e.label);
    }
    c.union(u, v);
    let folded = quotient_graph(g.rank(), g.edges().iter().copied(), &c);
    finish(s, folded.graph.num_vertices(), folded.graph.edges().to_vec(), &folded.trace, &[])
}

fn attach(s: &State, u: usize, v: usize, walk: &Walk) -> State {
    let mut draft = s.graph.to_draft();
    let path = draft.add_path(u, v, &walk.letters).expect("walk letters are in range");
    // Interior vertices are coloured by the codomain vertices the walk visits.
    let interior: Vec<usize> = walk.vertices[..walk.vertices.len() - 1].to_vec();
    debug_assert_eq!(path.len(), walk.letters.len() + 1);
    let folded = fold(&draft);
    finish(s, folded.graph.num_vertices(), folded.graph.edges().to_vec(), &folded.trace, &interior)
}

fn finish(s: &State, n: usize, edges: Vec<crate::graphs::Edge>, trace: &[usize], interior: &[usize]) -> State {
    let mut colors = vec![0; n];
    for (v, &c) in s.colors.iter().chain(interior).enumerate() {
        colors[trace[v]] = c;
    }
    let graph = MultiCoreGraph::from_parts(s.graph.rank(), n, edges).expect("attaching paths to a core graph keeps it a core graph");
    State { graph, colors }
}
