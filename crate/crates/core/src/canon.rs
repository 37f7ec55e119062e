//! Canonical labelling of vertex- and edge-labelled directed multigraphs by
//! colour refinement and individualization.
//!
//! The canonical order is the one whose encoding (vertex labels in order,
//! then sorted relabelled edges) is lexicographically least among all
//! leaves of the search tree, so two graphs are isomorphic exactly when
//! their encodings agree.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Encoding<V, E> {
    pub vertices: Vec<V>,
    pub edges: Vec<(usize, E, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafCapExceeded(pub usize);

pub struct Graph<V, E> {
    labels: Vec<V>,
    edges: Vec<(usize, E, usize)>,
    out: Vec<Vec<(usize, usize)>>,
    inc: Vec<Vec<(usize, usize)>>,
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

impl<V: Ord + Clone, E: Ord + Clone> Graph<V, E> {
    pub fn new(labels: Vec<V>, edges: Vec<(usize, E, usize)>) -> Self {
        let n = labels.len();
        let edge_rank = rank(&edges.iter().map(|e| e.1.clone()).collect::<Vec<_>>());
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, (a, _, b)) in edges.iter().enumerate() {
            out[*a].push((edge_rank[i], *b));
            inc[*b].push((edge_rank[i], *a));
        }
        Graph { labels, edges, out, inc }
    }

    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            let keys: Vec<(usize, Vec<(usize, usize)>, Vec<(usize, usize)>)> = (0..colors.len())
                .map(|v| {
                    let mut o: Vec<(usize, usize)> = self.out[v].iter().map(|&(l, u)| (l, colors[u])).collect();
                    let mut i: Vec<(usize, usize)> = self.inc[v].iter().map(|&(l, u)| (l, colors[u])).collect();
                    o.sort_unstable();
                    i.sort_unstable();
                    (colors[v], o, i)
                })
                .collect();
            let next = rank(&keys);
            if class_count(&next) == class_count(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn encode(&self, colors: &[usize]) -> Encoding<V, E> {
        let mut order = vec![0; colors.len()];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let vertices = order.iter().map(|&v| self.labels[v].clone()).collect();
        let mut edges: Vec<(usize, E, usize)> =
            self.edges.iter().map(|(a, l, b)| (colors[*a], l.clone(), colors[*b])).collect();
        edges.sort();
        Encoding { vertices, edges }
    }

    /// Returns the least encoding and the position of every vertex in it.
    pub fn canonical(&self, leaf_cap: usize) -> Result<(Encoding<V, E>, Vec<usize>), LeafCapExceeded> {
        let initial = rank(&self.labels);
        let mut best: Option<(Encoding<V, E>, Vec<usize>)> = None;
        let mut leaves = 0;
        self.search(self.refine(initial), &mut best, &mut leaves, leaf_cap)?;
        Ok(best.unwrap_or_else(|| (Encoding { vertices: Vec::new(), edges: Vec::new() }, Vec::new())))
    }

    fn search(
        &self,
        colors: Vec<usize>,
        best: &mut Option<(Encoding<V, E>, Vec<usize>)>,
        leaves: &mut usize,
        cap: usize,
    ) -> Result<(), LeafCapExceeded> {
        let n = colors.len();
        if class_count(&colors) == n {
            *leaves += 1;
            if *leaves > cap {
                return Err(LeafCapExceeded(cap));
            }
            let enc = self.encode(&colors);
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                *best = Some((enc, colors));
            }
            return Ok(());
        }
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &colors {
            *sizes.entry(c).or_default() += 1;
        }
        let target = *sizes.iter().find(|(_, &s)| s > 1).unwrap().0;
        for v in (0..n).filter(|&v| colors[v] == target) {
            let keys: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
            self.search(self.refine(rank(&keys)), best, leaves, cap)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(n: usize, start: usize) -> Graph<u8, u8> {
        let edges = (0..n).map(|i| ((i + start) % n, 0, (i + start + 1) % n)).collect();
        Graph::new(vec![0; n], edges)
    }

    #[test]
    fn rotations_share_an_encoding() {
        let a = cycle(5, 0).canonical(1000).unwrap().0;
        let b = cycle(5, 3).canonical(1000).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn labels_matter() {
        let a = Graph::new(vec!["x", "y"], vec![(0, 1, 1)]).canonical(10).unwrap().0;
        let b = Graph::new(vec!["x", "y"], vec![(1, 1, 0)]).canonical(10).unwrap().0;
        assert_ne!(a, b);
        let empty: Graph<u8, u8> = Graph::new(vec![], vec![]);
        assert_eq!(empty.canonical(1).unwrap().0.vertices.len(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let g: Graph<u8, u8> = Graph::new(vec![0; 6], vec![]);
        assert_eq!(g.canonical(10).unwrap_err(), LeafCapExceeded(10));
    }

    proptest! {
        #[test]
        fn permuted_graphs_agree(
            n in 1usize..7,
            raw in prop::collection::vec((0usize..7, 0u8..3, 0usize..7), 0..12),
            labels in prop::collection::vec(0u8..2, 7),
            perm_seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let edges: Vec<(usize, u8, usize)> = raw.into_iter().map(|(a, l, b)| (a % n, l, b % n)).collect();
            let labels: Vec<u8> = labels[..n].to_vec();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let mut plabels = vec![0; n];
            for v in 0..n {
                plabels[perm[v]] = labels[v];
            }
            let pedges = edges.iter().map(|&(a, l, b)| (perm[a], l, perm[b])).collect();
            let a = Graph::new(labels, edges).canonical(100_000).unwrap().0;
            let b = Graph::new(plabels, pedges).canonical(100_000).unwrap().0;
            prop_assert_eq!(a, b);
        }
    }
}
