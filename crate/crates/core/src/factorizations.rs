use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::permutations;

/// A decomposition A(X) = P_1 + ... + P_d of the adjacency matrix into
/// vertex permutations that each move every vertex to one of its neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuntDecomposition {
    shunts: Vec<Vec<usize>>,
}

impl ShuntDecomposition {
    /// Validate that the given permutations cover every arc of `g` exactly
    /// once. The shunt order is preserved.
    pub fn new(g: &Graph, shunts: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.vertex_count();
        if shunts.is_empty() {
            return Err(Error::Parameter("a decomposition needs at least one shunt".into()));
        }
        let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (j, p) in shunts.iter().enumerate() {
            if p.len() != n {
                return Err(Error::Parameter(format!(
                    "shunt {j} has length {}, expected {n}",
                    p.len()
                )));
            }
            let mut hit = vec![false; n];
            for (u, &v) in p.iter().enumerate() {
                if v >= n || !g.has_edge(u, v) {
                    return Err(Error::Parameter(format!(
                        "shunt {j} moves vertex {u} to non-neighbor {v}"
                    )));
                }
                if hit[v] {
                    return Err(Error::Parameter(format!("shunt {j} is not a permutation")));
                }
                hit[v] = true;
                if !covered.insert((u, v)) {
                    return Err(Error::Parameter(format!(
                        "arc ({u},{v}) is used by two shunts"
                    )));
                }
            }
        }
        if covered.len() != 2 * g.edge_count() {
            return Err(Error::Parameter(
                "shunts do not sum to the adjacency matrix".into(),
            ));
        }
        Ok(ShuntDecomposition { shunts })
    }

    pub fn shunt_count(&self) -> usize {
        self.shunts.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.shunts[0].len()
    }

    pub fn shunt(&self, j: usize) -> &[usize] {
        &self.shunts[j]
    }

    pub fn shunts(&self) -> &[Vec<usize>] {
        &self.shunts
    }

    /// Disjoint cycles of shunt `j`, each starting at its smallest element,
    /// sorted by that element.
    pub fn cycles(&self, j: usize) -> Vec<Vec<usize>> {
        let p = &self.shunts[j];
        let mut seen = vec![false; p.len()];
        let mut cycles = Vec::new();
        for start in 0..p.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut u = start;
            while !seen[u] {
                seen[u] = true;
                cycle.push(u);
                u = p[u];
            }
            cycles.push(cycle);
        }
        cycles
    }
}

/// Every unordered decomposition of a regular graph into shunts, in
/// lexicographic order of the sorted shunt lists.
pub fn enumerate_shunt_decompositions(g: &Graph) -> Result<Vec<ShuntDecomposition>> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::ModelPrecondition("graph must be regular".into()))?;
    let n = g.vertex_count();
    if n == 0 || d == 0 {
        return Err(Error::ModelPrecondition("graph must have edges".into()));
    }
    let mut found: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut shunts = vec![vec![usize::MAX; n]; d];
    let mut used = vec![vec![false; n]; d];
    extend(g, 0, &mut shunts, &mut used, &mut found);
    found
        .into_iter()
        .map(|s| ShuntDecomposition::new(g, s))
        .collect()
}

fn extend(
    g: &Graph,
    u: usize,
    shunts: &mut [Vec<usize>],
    used: &mut [Vec<bool>],
    found: &mut BTreeSet<Vec<Vec<usize>>>,
) {
    if u == g.vertex_count() {
        let mut sorted = shunts.to_vec();
        sorted.sort();
        found.insert(sorted);
        return;
    }
    for assignment in permutations(g.neighbors(u)) {
        if assignment.iter().zip(used.iter()).any(|(&v, used_j)| used_j[v]) {
            continue;
        }
        for (j, &v) in assignment.iter().enumerate() {
            shunts[j][u] = v;
            used[j][v] = true;
        }
        extend(g, u + 1, shunts, used, found);
        for (j, &v) in assignment.iter().enumerate() {
            shunts[j][u] = usize::MAX;
            used[j][v] = false;
        }
    }
}

/// True iff every shunt is its own inverse.
pub fn is_symmetric(dec: &ShuntDecomposition) -> bool {
    dec.shunts()
        .iter()
        .all(|p| p.iter().enumerate().all(|(u, &v)| p[v] == u))
}

/// Sorted multiset of per-shunt cycle types, e.g. "[2,2]|[4]|[4]".
pub fn cycle_signature(dec: &ShuntDecomposition) -> String {
    let mut types: Vec<Vec<usize>> = (0..dec.shunt_count())
        .map(|j| {
            let mut lengths: Vec<usize> =
                dec.cycles(j).iter().map(|c| c.len()).collect();
            lengths.sort_unstable();
            lengths
        })
        .collect();
    types.sort();
    types
        .iter()
        .map(|lengths| {
            let inner = lengths
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("[{inner}]")
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// The decomposition in cycle notation, e.g. "{(0,1)(2,3), (0,2)(1,3), (0,3)(1,2)}".
pub fn cycle_notation(dec: &ShuntDecomposition) -> String {
    let shunts = (0..dec.shunt_count())
        .map(|j| {
            dec.cycles(j)
                .iter()
                .map(|cycle| {
                    let inner = cycle
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    format!("({inner})")
                })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{shunts}}}")
}

/// A linear order f_u on the neighbors of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrders {
    f: Vec<Vec<usize>>,
}

impl LinearOrders {
    /// Validate that `f[u]` lists exactly the neighbors of `u`.
    pub fn new(g: &Graph, f: Vec<Vec<usize>>) -> Result<Self> {
        if f.len() != g.vertex_count() {
            return Err(Error::Parameter(format!(
                "orders list {} vertices, graph has {}",
                f.len(),
                g.vertex_count()
            )));
        }
        for (u, order) in f.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(u) {
                return Err(Error::Parameter(format!(
                    "order at vertex {u} is not a bijection onto its neighbors"
                )));
            }
        }
        Ok(LinearOrders { f })
    }

    pub fn vertex_count(&self) -> usize {
        self.f.len()
    }

    /// The neighbor of `u` carrying label `j` (0-based).
    pub fn neighbor(&self, u: usize, j: usize) -> usize {
        self.f[u][j]
    }

    pub fn order(&self, u: usize) -> &[usize] {
        &self.f[u]
    }

    /// The label `u` assigns to its neighbor `v` (0-based).
    pub fn label_of(&self, u: usize, v: usize) -> usize {
        self.f[u]
            .iter()
            .position(|&w| w == v)
            .expect("v must be a neighbor of u")
    }
}

/// Build the shunts P_j(u) = f_u(j) from linear orders on a regular graph;
/// fails when some vertex receives one label from two in-arcs.
pub fn validate_linear_orders_for_shunt_model(
    g: &Graph,
    lo: &LinearOrders,
) -> Result<ShuntDecomposition> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::ModelPrecondition("graph must be regular".into()))?;
    let n = g.vertex_count();
    if lo.vertex_count() != n {
        return Err(Error::Parameter("orders do not match the graph".into()));
    }
    let mut shunts = vec![vec![usize::MAX; n]; d];
    for (j, shunt) in shunts.iter_mut().enumerate() {
        let mut source = vec![usize::MAX; n];
        for (u, slot) in shunt.iter_mut().enumerate() {
            let v = lo.neighbor(u, j);
            if source[v] != usize::MAX {
                return Err(Error::InvalidOrders { vertex: v, label: j + 1 });
            }
            source[v] = u;
            *slot = v;
        }
    }
    ShuntDecomposition::new(g, shunts)
}
