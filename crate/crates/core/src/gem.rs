use crate::embeddings::{facial_walks, RotationSystem};
use crate::error::{Error, Result};
use crate::factorizations::ShuntDecomposition;
use crate::graph::{ArcTable, Graph};

/// Graph-encoded map: flags with three pairwise-linking involutions that
/// form a cubic, properly 3-edge-colored graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gem {
    flags: Vec<(usize, usize, usize)>,
    tau: [Vec<usize>; 3],
    as_graph: Graph,
}

impl Gem {
    /// Validate the map axioms: each tau_i is a fixed-point-free involution,
    /// the three images of every flag are distinct, and tau_0 tau_2 is a
    /// fixed-point-free involution commuting with its factors.
    pub fn from_parts(
        flags: Vec<(usize, usize, usize)>,
        tau: [Vec<usize>; 3],
    ) -> Result<Gem> {
        let n = flags.len();
        if n == 0 {
            return Err(Error::Parameter("a gem needs at least one flag".into()));
        }
        for (i, t) in tau.iter().enumerate() {
            if t.len() != n {
                return Err(Error::Parameter(format!(
                    "tau_{i} acts on {} flags, expected {n}",
                    t.len()
                )));
            }
            for (phi, &img) in t.iter().enumerate() {
                if img >= n || img == phi || t[img] != phi {
                    return Err(Error::Parameter(format!(
                        "tau_{i} is not a fixed-point-free involution at flag {phi}"
                    )));
                }
            }
        }
        #[allow(clippy::needless_range_loop)]
        for phi in 0..n {
            let images = [tau[0][phi], tau[1][phi], tau[2][phi]];
            if images[0] == images[1] || images[0] == images[2] || images[1] == images[2] {
                return Err(Error::Parameter(format!(
                    "flag {phi} has coinciding tau images"
                )));
            }
        }
        for phi in 0..n {
            let a = tau[0][tau[2][phi]];
            if a != tau[2][tau[0][phi]] {
                return Err(Error::Parameter(
                    "tau_0 and tau_2 do not commute".into(),
                ));
            }
            if a == phi {
                return Err(Error::Parameter(
                    "tau_0 tau_2 has a fixed point".into(),
                ));
            }
        }
        let mut as_graph = Graph::empty(n);
        for t in &tau {
            for (phi, &img) in t.iter().enumerate() {
                if phi < img {
                    as_graph.add_edge(phi, img)?;
                }
            }
        }
        Ok(Gem { flags, tau, as_graph })
    }

    pub fn flag_count(&self) -> usize {
        self.flags.len()
    }

    /// The (vertex, edge, face) triple of a flag.
    pub fn flag(&self, phi: usize) -> (usize, usize, usize) {
        self.flags[phi]
    }

    pub fn flags(&self) -> &[(usize, usize, usize)] {
        &self.flags
    }

    pub fn tau(&self, i: usize) -> &[usize] {
        &self.tau[i]
    }

    /// The cubic flag graph; edge colors are recovered through `tau`.
    pub fn as_graph(&self) -> &Graph {
        &self.as_graph
    }
}

/// Build the gem of the embedding given by `rot`. Vertices of degree less
/// than two would collapse two flag links into one, so they are rejected.
pub fn build_gem(g: &Graph, rot: &RotationSystem) -> Result<Gem> {
    if (0..g.vertex_count()).any(|u| g.degree(u) < 2) {
        return Err(Error::ModelPrecondition(
            "gem construction needs minimum degree 2".into(),
        ));
    }
    let arcs = ArcTable::from_graph(g);
    let walks = facial_walks(g, rot);
    let edge_index: std::collections::HashMap<(usize, usize), usize> = g
        .edges()
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let m = arcs.arc_count();
    let mut flags = Vec::with_capacity(2 * m);
    for a in 0..m {
        let (u, v) = arcs.arc(a);
        let edge = edge_index[&(u.min(v), u.max(v))];
        for side in 0..2 {
            let face = if side == 0 {
                walks.face_of(a)
            } else {
                walks.face_of(arcs.reversal(a))
            };
            flags.push((u, edge, face));
        }
    }
    let mut tau0 = vec![0; 2 * m];
    let mut tau1 = vec![0; 2 * m];
    let mut tau2 = vec![0; 2 * m];
    for a in 0..m {
        let rev = arcs.reversal(a);
        for side in 0..2 {
            let phi = 2 * a + side;
            tau0[phi] = 2 * rev + (1 - side);
            tau2[phi] = 2 * a + (1 - side);
        }
        tau1[2 * a] = 2 * arcs.reversal(walks.predecessor(a)) + 1;
        tau1[2 * a + 1] = 2 * walks.successor(rev);
    }
    Gem::from_parts(flags, [tau0, tau1, tau2])
}

/// True iff the flag graph is bipartite (Vince's criterion).
pub fn is_orientable(gem: &Gem) -> bool {
    gem.as_graph().bipartition().is_some()
}

/// All quotients of a bipartite gem by a class-swapping, fixed-point-free
/// involutive automorphism alpha that permutes the three edge colors and
/// never maps a flag next to itself. Each quotient carries the shunts read
/// off the edge colors, one per color.
pub fn gem_quotient(gem: &Gem) -> Result<Vec<(Graph, ShuntDecomposition)>> {
    let flag_graph = gem.as_graph();
    if !flag_graph.is_connected() {
        return Err(Error::ModelPrecondition("gem must be connected".into()));
    }
    let classes = flag_graph
        .bipartition()
        .ok_or_else(|| Error::ModelPrecondition("gem must be bipartite".into()))?;
    let n = gem.flag_count();
    let mut out = Vec::new();
    for psi in (0..n).filter(|&phi| classes[phi] == 1) {
        for sigma in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [2, 1, 0]] {
            if let Some(alpha) = propagate(gem, psi, sigma) {
                if !is_admissible(gem, &classes, &alpha) {
                    continue;
                }
                out.push(quotient_by(gem, &classes, &alpha)?);
            }
        }
    }
    Ok(out)
}

/// Extend alpha(0) = psi over the connected flag graph by the color rule
/// alpha(tau_i(phi)) = tau_{sigma(i)}(alpha(phi)); None on any conflict.
fn propagate(gem: &Gem, psi: usize, sigma: [usize; 3]) -> Option<Vec<usize>> {
    let n = gem.flag_count();
    let mut alpha = vec![usize::MAX; n];
    alpha[0] = psi;
    let mut stack = vec![0];
    while let Some(phi) = stack.pop() {
        for (i, &si) in sigma.iter().enumerate() {
            let source = gem.tau(i)[phi];
            let image = gem.tau(si)[alpha[phi]];
            if alpha[source] == usize::MAX {
                alpha[source] = image;
                stack.push(source);
            } else if alpha[source] != image {
                return None;
            }
        }
    }
    Some(alpha)
}

fn is_admissible(gem: &Gem, classes: &[u8], alpha: &[usize]) -> bool {
    alpha.iter().enumerate().all(|(phi, &img)| {
        alpha[img] == phi
            && img != phi
            && classes[img] != classes[phi]
            && (0..3).all(|i| gem.tau(i)[phi] != img)
    })
}

fn quotient_by(
    gem: &Gem,
    classes: &[u8],
    alpha: &[usize],
) -> Result<(Graph, ShuntDecomposition)> {
    let n = gem.flag_count();
    let mut orbit_of = vec![usize::MAX; n];
    let mut reps = Vec::with_capacity(n / 2);
    for phi in (0..n).filter(|&phi| classes[phi] == 0) {
        orbit_of[phi] = reps.len();
        orbit_of[alpha[phi]] = reps.len();
        reps.push(phi);
    }
    let mut y = Graph::empty(reps.len());
    let mut shunts = vec![vec![usize::MAX; reps.len()]; 3];
    for (v, &phi) in reps.iter().enumerate() {
        for (i, shunt) in shunts.iter_mut().enumerate() {
            let w = orbit_of[gem.tau(i)[phi]];
            shunt[v] = w;
            if !y.has_edge(v, w) {
                y.add_edge(v, w)
                    .map_err(|e| Error::Internal(format!("quotient is not simple: {e}")))?;
            }
        }
    }
    let dec = ShuntDecomposition::new(&y, shunts)
        .map_err(|e| Error::Internal(format!("quotient shunts are invalid: {e}")))?;
    Ok((y, dec))
}
