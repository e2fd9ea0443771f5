use crate::error::{Error, Result};
use crate::graph::{ArcTable, Graph};
use crate::util::permutations;

/// Cyclic order of the neighbors at every vertex; encodes an orientable
/// embedding. Stored with the smallest neighbor first in each cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    pi: Vec<Vec<usize>>,
}

impl RotationSystem {
    /// Validate that `pi[u]` is a cyclic order of exactly the neighbors of `u`
    /// and store it in canonical form (rotated so the smallest neighbor leads).
    pub fn new(g: &Graph, pi: Vec<Vec<usize>>) -> Result<Self> {
        if pi.len() != g.vertex_count() {
            return Err(Error::Parameter(format!(
                "rotation lists {} vertices, graph has {}",
                pi.len(),
                g.vertex_count()
            )));
        }
        let mut canonical = Vec::with_capacity(pi.len());
        for (u, cycle) in pi.into_iter().enumerate() {
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(u) {
                return Err(Error::Parameter(format!(
                    "cycle at vertex {u} is not an order of its neighbors"
                )));
            }
            canonical.push(rotate_to_min(cycle));
        }
        Ok(RotationSystem { pi: canonical })
    }

    pub fn vertex_count(&self) -> usize {
        self.pi.len()
    }

    /// The stored cyclic order at `u`, smallest neighbor first.
    pub fn cycle(&self, u: usize) -> &[usize] {
        &self.pi[u]
    }

    /// The successor of neighbor `w` in the cyclic order at `u`.
    pub fn next_after(&self, u: usize, w: usize) -> usize {
        let cycle = &self.pi[u];
        let pos = cycle
            .iter()
            .position(|&x| x == w)
            .expect("w must be a neighbor of u");
        cycle[(pos + 1) % cycle.len()]
    }

    /// One line per vertex in the form `u: (a, b, c)`.
    pub fn display_lines(&self) -> String {
        self.pi
            .iter()
            .enumerate()
            .map(|(u, cycle)| {
                let inner = cycle
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                format!("{u}: ({inner})")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn rotate_to_min(mut cycle: Vec<usize>) -> Vec<usize> {
    if cycle.is_empty() {
        return cycle;
    }
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    cycle.rotate_left(min_pos);
    cycle
}

/// Iterator over all rotation systems of a graph in odometer order: the
/// smallest neighbor is fixed first at every vertex and the remaining
/// neighbors run through their permutations lexicographically, with the
/// highest-numbered vertex advancing fastest.
pub struct RotationSystems {
    choices: Vec<Vec<Vec<usize>>>,
    counters: Vec<usize>,
    done: bool,
}

pub fn enumerate_rotation_systems(g: &Graph) -> RotationSystems {
    let choices: Vec<Vec<Vec<usize>>> = (0..g.vertex_count())
        .map(|u| {
            let nb = g.neighbors(u);
            if nb.is_empty() {
                return vec![Vec::new()];
            }
            let head = nb[0];
            let mut cycles = Vec::new();
            for tail in permutations(&nb[1..]) {
                let mut cycle = Vec::with_capacity(nb.len());
                cycle.push(head);
                cycle.extend(tail);
                cycles.push(cycle);
            }
            cycles
        })
        .collect();
    let counters = vec![0; choices.len()];
    RotationSystems { choices, counters, done: false }
}

impl Iterator for RotationSystems {
    type Item = RotationSystem;

    fn next(&mut self) -> Option<RotationSystem> {
        if self.done {
            return None;
        }
        let pi = self
            .choices
            .iter()
            .zip(&self.counters)
            .map(|(cycles, &c)| cycles[c].clone())
            .collect();
        let mut pos = self.counters.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.counters[pos] += 1;
            if self.counters[pos] < self.choices[pos].len() {
                break;
            }
            self.counters[pos] = 0;
        }
        Some(RotationSystem { pi })
    }
}

/// The faces traced by a rotation system: closed arc walks partitioning
/// all arcs of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacialWalks {
    faces: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    position_of: Vec<usize>,
}

impl FacialWalks {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Arc indices of face `f` in walk order.
    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, arc: usize) -> usize {
        self.face_of[arc]
    }

    /// Arc preceding `arc` in its facial walk.
    pub fn predecessor(&self, arc: usize) -> usize {
        let face = &self.faces[self.face_of[arc]];
        let pos = self.position_of[arc];
        face[(pos + face.len() - 1) % face.len()]
    }

    /// Arc following `arc` in its facial walk.
    pub fn successor(&self, arc: usize) -> usize {
        let face = &self.faces[self.face_of[arc]];
        let pos = self.position_of[arc];
        face[(pos + 1) % face.len()]
    }
}

/// Trace every facial walk of the embedding: from arc (a, b) the walk
/// continues with (b, pi_b(a)). Faces start at the least unused arc index.
pub fn facial_walks(g: &Graph, rot: &RotationSystem) -> FacialWalks {
    let arcs = ArcTable::from_graph(g);
    let m = arcs.arc_count();
    let mut face_of = vec![usize::MAX; m];
    let mut position_of = vec![0; m];
    let mut faces = Vec::new();
    for start in 0..m {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            face_of[cur] = id;
            position_of[cur] = walk.len();
            walk.push(cur);
            let (a, b) = arcs.arc(cur);
            let next_head = rot.next_after(b, a);
            cur = arcs.index_of(b, next_head).expect("rotation stays on neighbors");
            if cur == start {
                break;
            }
        }
        faces.push(walk);
    }
    FacialWalks { faces, face_of, position_of }
}

/// Genus of the embedding via Euler's formula n - |E| + F = 2 - 2g.
pub fn genus(g: &Graph, faces: &FacialWalks) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Parameter("genus requires a connected graph".into()));
    }
    let numerator =
        2 + g.edge_count() as i64 - g.vertex_count() as i64 - faces.face_count() as i64;
    if numerator % 2 != 0 || numerator < 0 {
        return Err(Error::Internal(format!(
            "Euler numerator {numerator} is not an even non-negative integer"
        )));
    }
    Ok((numerator / 2) as usize)
}

/// A rotation system together with its traced faces and genus.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub rotation: RotationSystem,
    pub faces: FacialWalks,
    pub genus: usize,
}

impl Embedding {
    pub fn new(g: &Graph, rotation: RotationSystem) -> Result<Self> {
        let faces = facial_walks(g, &rotation);
        let genus = genus(g, &faces)?;
        Ok(Embedding { rotation, faces, genus })
    }
}

/// Parse rotation-system lines of the form `u: (a, b, c)`, one vertex per
/// line, returning both the graph they define and the rotation system.
pub fn parse_rotation_lines(text: &str) -> Result<(Graph, RotationSystem)> {
    let mut cycles: Vec<(usize, Vec<usize>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim().trim_end_matches(',');
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| {
            Error::Parameter(format!("rotation line {}: {reason}: {raw:?}", lineno + 1))
        };
        let (vertex_part, cycle_part) =
            line.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let vertex: usize = vertex_part
            .trim()
            .parse()
            .map_err(|_| bad("vertex is not a number"))?;
        let inner = cycle_part
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| bad("cycle is not parenthesized"))?;
        let mut cycle = Vec::new();
        for token in inner.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            cycle.push(token.parse().map_err(|_| bad("neighbor is not a number"))?);
        }
        cycles.push((vertex, cycle));
    }
    if cycles.is_empty() {
        return Err(Error::Parameter("no rotation lines found".into()));
    }
    let n = 1 + cycles.iter().map(|&(u, _)| u).max().unwrap();
    let mut pi = vec![None; n];
    for (u, cycle) in cycles {
        if u >= n || pi[u].is_some() {
            return Err(Error::Parameter(format!("vertex {u} listed twice")));
        }
        pi[u] = Some(cycle);
    }
    let pi: Vec<Vec<usize>> = pi
        .into_iter()
        .enumerate()
        .map(|(u, c)| c.ok_or_else(|| Error::Parameter(format!("vertex {u} has no line"))))
        .collect::<Result<_>>()?;

    let mut g = Graph::empty(n);
    for (u, cycle) in pi.iter().enumerate() {
        for &v in cycle {
            if v >= n {
                return Err(Error::Parameter(format!(
                    "vertex {u} lists unknown neighbor {v}"
                )));
            }
            if !g.has_edge(u, v) {
                g.add_edge(u, v)?;
            }
        }
    }
    let rot = RotationSystem::new(&g, pi)?;
    Ok((g, rot))
}
