use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Simple undirected graph with 0-based vertices and sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Build from an edge list; rejects loops, duplicates, and bad endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::Parameter(format!(
                "edge ({u},{v}) out of range for {n} vertices"
            )));
        }
        if u == v {
            return Err(Error::Parameter(format!("loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::Parameter(format!("duplicate edge ({u},{v})")));
        }
        let pos_u = self.adj[u].partition_point(|&w| w < v);
        self.adj[u].insert(pos_u, v);
        let pos_v = self.adj[v].partition_point(|&w| w < u);
        self.adj[v].insert(pos_v, u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|nb| nb.len()).sum::<usize>() / 2
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        if (0..self.vertex_count()).all(|u| self.degree(u) == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// Two-coloring of the vertices, or None if some component has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count();
        let mut color = vec![u8::MAX; n];
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.vertex_count();
        DMatrix::from_fn(n, n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }
}

/// All arcs of a graph in lexicographic (tail, head) order, fixing the
/// row/column order of every coined-walk matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcTable {
    arcs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    reverse: Vec<usize>,
}

impl ArcTable {
    pub fn from_graph(g: &Graph) -> Self {
        let mut arcs = Vec::with_capacity(2 * g.edge_count());
        for u in 0..g.vertex_count() {
            for &v in g.neighbors(u) {
                arcs.push((u, v));
            }
        }
        let index: HashMap<_, _> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let reverse = arcs.iter().map(|&(u, v)| index[&(v, u)]).collect();
        ArcTable { arcs, index, reverse }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, i: usize) -> (usize, usize) {
        self.arcs[i]
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn index_of(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    /// Index of the opposite arc.
    pub fn reversal(&self, i: usize) -> usize {
        self.reverse[i]
    }

    pub fn label(&self, i: usize) -> String {
        let (u, v) = self.arcs[i];
        format!("({u},{v})")
    }
}

/// The tensor-style double cover K2 x G: vertices {u, u'} with u ~ v' iff u ~ v.
pub fn bipartite_double_cover(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut cover = Graph::empty(2 * n);
    for (u, v) in g.edges() {
        cover.add_edge(u, n + v).expect("cover edge");
        cover.add_edge(v, n + u).expect("cover edge");
    }
    cover
}
