//! Undirected simple graphs over labelled nodes.

use std::collections::VecDeque;

use crate::ledger::AgentId;

/// Undirected graph without self-loops or parallel edges. Adjacency lists
/// are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    labels: Vec<AgentId>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Self-loops are dropped and duplicate edges collapsed.
    pub fn from_edges<I>(labels: Vec<AgentId>, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { labels, adj }
    }

    /// Nodes labelled `n0000`, `n0001`, ... so label order matches index order.
    pub fn unlabeled<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..n).map(|i| AgentId::new(format!("n{i:06}"))).collect();
        Self::from_edges(labels, edges)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn labels(&self) -> &[AgentId] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest component; among equally large ones, the one holding the
    /// smallest label.
    pub fn largest_component(&self) -> Vec<usize> {
        self.components()
            .into_iter()
            .max_by(|a, b| {
                a.len().cmp(&b.len()).then_with(|| {
                    let min_label = |c: &[usize]| c.iter().map(|&v| &self.labels[v]).min().cloned();
                    min_label(b).cmp(&min_label(a))
                })
            })
            .unwrap_or_default()
    }

    /// Breadth-first distances from `source`; unreachable nodes get `u32::MAX`.
    pub fn bfs_into(&self, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
        dist.fill(u32::MAX);
        dist[source] = 0;
        queue.clear();
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v] + 1;
            for &w in &self.adj[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dv;
                    queue.push_back(w);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_and_duplicates_dropped() {
        let g = SimpleGraph::unlabeled(3, [(0, 1), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let again = SimpleGraph::from_edges(g.labels().to_vec(), g.edges());
        assert_eq!(again, g);
    }

    #[test]
    fn largest_component_tie_break_by_label() {
        let labels = ["z", "y", "x", "b", "c", "a"].map(AgentId::new).to_vec();
        let g = SimpleGraph::from_edges(labels, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert_eq!(g.largest_component(), vec![3, 4, 5]);
        assert_eq!(g.components().len(), 2);
    }
}
