//! Union–find with label-indexed successor tables.
//!
//! Gluing two vertices of a labeled graph and then folding is the same as
//! taking the smallest equivalence relation that contains the glued pair and
//! is closed under "same-label edges out of (or into) equivalent vertices end
//! (or start) at equivalent vertices". This structure maintains that closure
//! incrementally; it drives Stallings folding, quotients and the partition
//! searches in the morphism layer.

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Closure {
    parent: Vec<u32>,
    labels: usize,
    /// For each class root and label: some vertex reached by an outgoing
    /// edge with that label, or `NONE`.
    out: Vec<u32>,
    /// Same for incoming edges.
    inc: Vec<u32>,
    classes: usize,
    pending: Vec<(u32, u32)>,
}

impl Closure {
    pub(crate) fn new(vertices: usize, labels: usize) -> Self {
        Closure {
            parent: (0..vertices as u32).collect(),
            labels,
            out: vec![NONE; vertices * labels],
            inc: vec![NONE; vertices * labels],
            classes: vertices,
            pending: Vec::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.parent.len()
    }

    pub(crate) fn classes(&self) -> usize {
        self.classes
    }

    pub(crate) fn find(&mut self, v: usize) -> usize {
        let mut root = v as u32;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = v as u32;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root as usize
    }

    /// Root lookup without path compression.
    pub(crate) fn root(&self, v: usize) -> usize {
        let mut root = v as u32;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        root as usize
    }

    /// Records an edge `tail --label--> head`, scheduling the merges it forces.
    pub(crate) fn add_edge(&mut self, tail: usize, head: usize, label: usize) {
        let t = self.find(tail);
        let h = self.find(head);
        let slot = t * self.labels + label;
        if self.out[slot] == NONE {
            self.out[slot] = head as u32;
        } else {
            self.pending.push((self.out[slot], head as u32));
        }
        let slot = h * self.labels + label;
        if self.inc[slot] == NONE {
            self.inc[slot] = tail as u32;
        } else {
            self.pending.push((self.inc[slot], tail as u32));
        }
    }

    /// Glues two vertices and folds until the relation is closed again.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        self.pending.push((a as u32, b as u32));
        self.settle();
    }

    /// Processes scheduled merges.
    pub(crate) fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let ra = self.find(a as usize);
            let rb = self.find(b as usize);
            if ra == rb {
                continue;
            }
            let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[gone] = keep as u32;
            self.classes -= 1;
            for label in 0..self.labels {
                for table in [&mut self.out, &mut self.inc] {
                    let g = table[gone * self.labels + label];
                    if g == NONE {
                        continue;
                    }
                    let k = &mut table[keep * self.labels + label];
                    if *k == NONE {
                        *k = g;
                    } else {
                        self.pending.push((*k, g));
                    }
                }
            }
        }
    }

    /// Number of labeled half-edges at the class of `v` in the folded quotient
    /// (a loop contributes two).
    pub(crate) fn class_degree(&self, v: usize) -> usize {
        let r = self.root(v);
        let base = r * self.labels;
        (0..self.labels)
            .map(|l| (self.out[base + l] != NONE) as usize + (self.inc[base + l] != NONE) as usize)
            .sum()
    }

    /// Outgoing neighbour class of the class of `v` along `label`.
    #[cfg(test)]
    pub(crate) fn class_out(&self, v: usize, label: usize) -> Option<usize> {
        let r = self.root(v);
        match self.out[r * self.labels + label] {
            NONE => None,
            t => Some(self.root(t as usize)),
        }
    }

    /// Number of edges of the folded quotient.
    pub(crate) fn quotient_edges(&self) -> usize {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v as u32)
            .map(|v| {
                (0..self.labels)
                    .filter(|&l| self.out[v * self.labels + l] != NONE)
                    .count()
            })
            .sum()
    }

    /// Restricted-growth labelling of the classes: the class of vertex 0 is
    /// block 0, the next new class in vertex order is block 1, and so on.
    pub(crate) fn blocks(&self) -> Vec<u32> {
        let mut label = vec![NONE; self.parent.len()];
        let mut next = 0;
        (0..self.parent.len())
            .map(|v| {
                let r = self.root(v);
                if label[r] == NONE {
                    label[r] = next;
                    next += 1;
                }
                label[r]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gluing_propagates_along_labels() {
        // Two x-paths 0->1->2 and 3->4->5; gluing 0 and 3 folds both paths.
        let mut c = Closure::new(6, 1);
        for (t, h) in [(0, 1), (1, 2), (3, 4), (4, 5)] {
            c.add_edge(t, h, 0);
        }
        c.settle();
        assert_eq!(c.classes(), 6);
        c.union(0, 3);
        assert_eq!(c.blocks(), vec![0, 1, 2, 0, 1, 2]);
        assert_eq!(c.quotient_edges(), 2);
        assert_eq!(c.class_degree(1), 2);
        assert_eq!(c.class_out(0, 0), Some(1));
    }

    #[test]
    fn parallel_edges_fold_immediately() {
        let mut c = Closure::new(3, 1);
        c.add_edge(0, 1, 0);
        c.add_edge(0, 2, 0);
        c.settle();
        assert_eq!(c.blocks(), vec![0, 1, 1]);
    }
}
