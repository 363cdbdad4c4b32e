//! Canonical forms and isomorphisms of multi core graphs.
//!
//! A folded graph is a deterministic transition system: a start vertex and a
//! fixed exploration order (labels ascending, outgoing before incoming) visit
//! every vertex of its component in a determined order. The sequence of
//! discovery indices along that walk encodes the component rooted at the
//! start; minimising over start vertices removes the root.

use std::collections::VecDeque;

use super::MultiCoreGraph;
use crate::words::Letter;

/// Sorted multiset of per-component encodings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<Vec<u32>>);

const ABSENT: u32 = 0;

/// Encoding of the component of `start` and the discovery order it induces.
fn encode_from(g: &MultiCoreGraph, start: usize, colors: Option<&[u32]>) -> (Vec<u32>, Vec<usize>) {
    let mut index = vec![u32::MAX; g.num_vertices()];
    let mut order = vec![start];
    index[start] = 0;
    let mut code = Vec::with_capacity(g.num_vertices() * (2 * g.rank() + 1));
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if let Some(c) = colors {
            code.push(c[v]);
        }
        for label in 0..g.rank() {
            for inverse in [false, true] {
                match g.step(v, Letter::new(label, inverse)) {
                    None => code.push(ABSENT),
                    Some(u) => {
                        if index[u] == u32::MAX {
                            index[u] = order.len() as u32;
                            order.push(u);
                            queue.push_back(u);
                        }
                        code.push(index[u] + 1);
                    }
                }
            }
        }
    }
    (code, order)
}

/// Minimal encoding of every component, with the matching vertex order.
fn component_codes(g: &MultiCoreGraph, colors: Option<&[u32]>) -> Vec<(Vec<u32>, Vec<usize>)> {
    let mut codes: Vec<(Vec<u32>, Vec<usize>)> = g
        .components()
        .into_iter()
        .map(|comp| {
            comp.iter()
                .map(|&s| encode_from(g, s, colors))
                .min()
                .expect("components are nonempty")
        })
        .collect();
    codes.sort();
    codes
}

pub(super) fn canonical_form(g: &MultiCoreGraph, colors: Option<&[u32]>) -> CanonicalForm {
    let mut form: Vec<Vec<u32>> = component_codes(g, colors).into_iter().map(|(c, _)| c).collect();
    // Distinguish ranks: graphs over different bases are never isomorphic.
    form.insert(0, vec![g.rank() as u32]);
    CanonicalForm(form)
}

pub(super) fn isomorphism(a: &MultiCoreGraph, b: &MultiCoreGraph) -> Option<Vec<usize>> {
    if a.rank() != b.rank() || a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return None;
    }
    let ca = component_codes(a, None);
    let cb = component_codes(b, None);
    if ca.iter().map(|c| &c.0).ne(cb.iter().map(|c| &c.0)) {
        return None;
    }
    let mut map = vec![0; a.num_vertices()];
    for ((_, oa), (_, ob)) in ca.iter().zip(&cb) {
        for (&u, &v) in oa.iter().zip(ob) {
            map[u] = v;
        }
    }
    Some(map)
}
