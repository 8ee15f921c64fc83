//! Small undirected adjacency structure shared by the tree checks, the
//! centrality computation and the embedding search.

use std::collections::VecDeque;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Adjacency {
    adj: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorts every neighbor list so traversal order only depends on indices.
    pub fn sort_neighbors(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    /// Vertices grouped by BFS distance from `start`.
    pub fn bfs_layers(&self, start: usize) -> Vec<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut layers: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            if layers.len() <= d {
                layers.push(Vec::new());
            }
            layers[d].push(v);
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        layers
    }

    pub fn reachable_count(&self, start: usize) -> usize {
        self.bfs_layers(start).iter().map(Vec::len).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.reachable_count(0) == self.len()
    }

    pub fn has_self_loop(&self) -> bool {
        self.adj.iter().enumerate().any(|(v, list)| list.contains(&v))
    }

    pub fn has_multi_edge(&self) -> bool {
        self.adj.iter().any(|list| {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.windows(2).any(|w| w[0] == w[1])
        })
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty()
            && !self.has_self_loop()
            && !self.has_multi_edge()
            && self.edge_count() + 1 == self.len()
            && self.is_connected()
    }
}
