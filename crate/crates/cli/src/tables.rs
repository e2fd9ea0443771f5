use qwalk_core::{
    arc_reversal_from_rotation, average_mixing_matrix, concurrent_hitting, cycle_notation,
    cycle_signature, default_k_max, enumerate_rotation_systems, enumerate_shunt_decompositions,
    expected_hitting, facial_walks, genus, is_symmetric, make_coin, max_norm, one_shot_hitting,
    simple_random_walk, spectral_decomposition, szegedy_unitary, time_averaged_mixing,
    trace_lower_bound, ArcTable, Basis, CVector, CoinKind, Error, Graph, ReflectionOrder,
    Result, RotationSystem, ShuntDecomposition, TransitionUnitary, DEFAULT_TAIL_TOL,
};
use rayon::prelude::*;
use serde::Serialize;

/// One rotation system of the input graph with its walk statistics.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingRow {
    pub index: usize,
    pub rotation: String,
    pub genus: usize,
    pub trace: f64,
    pub total_entropy: f64,
}

/// Rows collapsed by (genus, trace printed at six decimals).
#[derive(Debug, Clone, Serialize)]
pub struct GroupedEmbeddingRow {
    pub genus: usize,
    pub trace: f64,
    pub count: usize,
}

fn rotation_compact(rot: &RotationSystem) -> String {
    rot.display_lines().replace('\n', "; ")
}

/// One row per rotation system: rotation, genus, trace, entropy.
pub fn embeddings_table(g: &Graph, kind: CoinKind) -> Result<Vec<EmbeddingRow>> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::ModelPrecondition("rotation walks need a regular graph".into()))?;
    if kind == CoinKind::Circulant7 && (d != 3 || !g.is_connected()) {
        return Err(Error::Parameter(
            "the circulant7 table is defined for connected cubic graphs".into(),
        ));
    }
    let coin = make_coin(kind, d)?;
    let systems: Vec<RotationSystem> = enumerate_rotation_systems(g).collect();
    systems
        .par_iter()
        .enumerate()
        .map(|(index, rot)| {
            let u = arc_reversal_from_rotation(g, rot, &coin)?;
            let sd = spectral_decomposition(&u);
            let amm = average_mixing_matrix(&sd);
            let walks = facial_walks(g, rot);
            Ok(EmbeddingRow {
                index,
                rotation: rotation_compact(rot),
                genus: genus(g, &walks)?,
                trace: amm.trace,
                total_entropy: amm.total_entropy,
            })
        })
        .collect()
}

/// Trace rounded half-even at six decimals, as a value.
pub fn rounded6(x: f64) -> f64 {
    let r = (x * 1e6).round_ties_even() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Collapse rows by (genus, rounded trace), sorted by genus ascending and
/// trace descending, counts preserved.
pub fn group_embeddings(rows: &[EmbeddingRow]) -> Vec<GroupedEmbeddingRow> {
    let mut keyed: Vec<(usize, i64)> = rows
        .iter()
        .map(|r| (r.genus, (r.trace * 1e6).round_ties_even() as i64))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut out: Vec<GroupedEmbeddingRow> = Vec::new();
    for (genus, micro) in keyed {
        match out.last_mut() {
            Some(last)
                if last.genus == genus && (last.trace * 1e6).round_ties_even() as i64 == micro =>
            {
                last.count += 1;
            }
            _ => out.push(GroupedEmbeddingRow {
                genus,
                trace: micro as f64 / 1e6,
                count: 1,
            }),
        }
    }
    out
}

/// One shunt decomposition of the input graph with its walk statistics.
#[derive(Debug, Clone, Serialize)]
pub struct ShuntRow {
    pub index: usize,
    pub cycles: String,
    pub signature: String,
    pub symmetric: bool,
    pub trace: f64,
    pub total_entropy: f64,
}

/// Rows collapsed by cycle signature with the trace range over the class.
#[derive(Debug, Clone, Serialize)]
pub struct GroupedShuntRow {
    pub signature: String,
    pub symmetric: bool,
    pub count: usize,
    pub trace_min: f64,
    pub trace_max: f64,
}

/// One row per shunt decomposition: cycle notation, signature, symmetry, trace.
pub fn shunts_table(g: &Graph, kind: CoinKind) -> Result<Vec<ShuntRow>> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::ModelPrecondition("shunt walks need a regular graph".into()))?;
    let coin = make_coin(kind, d)?;
    let decs = enumerate_shunt_decompositions(g)?;
    decs.par_iter()
        .enumerate()
        .map(|(index, dec)| {
            let u = qwalk_core::shunt_unitary(g, dec, &coin)?;
            let sd = spectral_decomposition(&u);
            let amm = average_mixing_matrix(&sd);
            Ok(ShuntRow {
                index,
                cycles: cycle_notation(dec),
                signature: cycle_signature(dec),
                symmetric: is_symmetric(dec),
                trace: amm.trace,
                total_entropy: amm.total_entropy,
            })
        })
        .collect()
}

/// Collapse shunt rows by signature, sorted by signature.
pub fn group_shunts(rows: &[ShuntRow]) -> Vec<GroupedShuntRow> {
    let mut sorted: Vec<&ShuntRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.signature.cmp(&b.signature));
    let mut out: Vec<GroupedShuntRow> = Vec::new();
    for row in sorted {
        match out.last_mut() {
            Some(last) if last.signature == row.signature => {
                last.count += 1;
                last.trace_min = last.trace_min.min(row.trace);
                last.trace_max = last.trace_max.max(row.trace);
            }
            _ => out.push(GroupedShuntRow {
                signature: row.signature.clone(),
                symmetric: row.symmetric,
                count: 1,
                trace_min: row.trace,
                trace_max: row.trace,
            }),
        }
    }
    out
}

/// Which walk a mix or hit command works on.
#[derive(Debug, Clone)]
pub enum WalkChoice {
    Arc { kind: CoinKind, index: usize },
    Shunt { kind: CoinKind, index: usize },
    Szegedy,
}

/// Build the chosen walk, returning the unitary and a structure identifier.
pub fn build_walk(g: &Graph, choice: &WalkChoice) -> Result<(TransitionUnitary, String)> {
    match choice {
        WalkChoice::Arc { kind, index } => {
            let d = g.regular_degree().ok_or_else(|| {
                Error::ModelPrecondition("rotation walks need a regular graph".into())
            })?;
            let coin = make_coin(*kind, d)?;
            let rot = enumerate_rotation_systems(g).nth(*index).ok_or_else(|| {
                Error::Parameter(format!("rotation system index {index} out of range"))
            })?;
            let u = arc_reversal_from_rotation(g, &rot, &coin)?;
            Ok((u, rotation_compact(&rot)))
        }
        WalkChoice::Shunt { kind, index } => {
            let d = g.regular_degree().ok_or_else(|| {
                Error::ModelPrecondition("shunt walks need a regular graph".into())
            })?;
            let coin = make_coin(*kind, d)?;
            let decs = enumerate_shunt_decompositions(g)?;
            let dec: &ShuntDecomposition = decs.get(*index).ok_or_else(|| {
                Error::Parameter(format!("shunt decomposition index {index} out of range"))
            })?;
            let u = qwalk_core::shunt_unitary(g, dec, &coin)?;
            Ok((u, cycle_notation(dec)))
        }
        WalkChoice::Szegedy => {
            let mc = simple_random_walk(g)?;
            let u = szegedy_unitary(&mc, ReflectionOrder::Q2First)?;
            Ok((u, "simple-random-walk".into()))
        }
    }
}

fn model_name(choice: &WalkChoice) -> &'static str {
    match choice {
        WalkChoice::Arc { .. } => "arc-reversal",
        WalkChoice::Shunt { .. } => "shunt",
        WalkChoice::Szegedy => "szegedy",
    }
}

/// Average-mixing statistics of one walk, with an optional finite-horizon
/// comparison against the exact matrix.
#[derive(Debug, Clone, Serialize)]
pub struct MixReport {
    pub model: String,
    pub graph6: String,
    pub structure: String,
    pub dim: usize,
    pub eigenvalue_groups: usize,
    pub trace: f64,
    pub trace_lower_bound: f64,
    pub total_entropy: f64,
    pub walk_regular: bool,
    pub uniform: bool,
    pub horizon: Option<usize>,
    pub time_average_deviation: Option<f64>,
    pub average_mixing_matrix: Vec<Vec<f64>>,
}

pub fn mix_report(
    g: &Graph,
    graph6: &str,
    choice: &WalkChoice,
    horizon: Option<usize>,
) -> Result<MixReport> {
    let (u, structure) = build_walk(g, choice)?;
    let sd = spectral_decomposition(&u);
    let amm = average_mixing_matrix(&sd);
    let deviation = match horizon {
        Some(h) => {
            let avg = time_averaged_mixing(&u, h)?;
            Some(
                (&avg - &amm.matrix)
                    .iter()
                    .map(|x| x.abs())
                    .fold(0.0f64, f64::max),
            )
        }
        None => None,
    };
    let dim = u.dim();
    let matrix = (0..dim)
        .map(|i| (0..dim).map(|j| amm.matrix[(i, j)]).collect())
        .collect();
    Ok(MixReport {
        model: model_name(choice).into(),
        graph6: graph6.into(),
        structure,
        dim,
        eigenvalue_groups: sd.groups().len(),
        trace: amm.trace,
        trace_lower_bound: trace_lower_bound(&sd),
        total_entropy: amm.total_entropy,
        walk_regular: amm.walk_regular,
        uniform: amm.uniform,
        horizon,
        time_average_deviation: deviation,
        average_mixing_matrix: matrix,
    })
}

/// Hitting-time summary for one walk and one (x, y) pair of basis states.
#[derive(Debug, Clone, Serialize)]
pub struct HitReport {
    pub model: String,
    pub graph6: String,
    pub structure: String,
    pub x: String,
    pub y: String,
    pub eps: f64,
    pub k_max: usize,
    pub one_shot: Option<usize>,
    pub concurrent: Option<usize>,
    pub expected_value: f64,
    pub unaccounted_mass: f64,
    pub converged: bool,
}

/// Look up a basis state labeled by a vertex pair in the walk's basis.
pub fn pair_state(u: &TransitionUnitary, pair: (usize, usize)) -> Result<(usize, CVector)> {
    let idx = match u.basis() {
        Basis::Arcs(arcs) => arcs
            .iter()
            .position(|&a| a == pair)
            .ok_or_else(|| Error::Parameter(format!("({}, {}) is not an arc", pair.0, pair.1)))?,
        Basis::Pairs { n } => {
            if pair.0 >= *n || pair.1 >= *n {
                return Err(Error::Parameter(format!(
                    "pair ({}, {}) out of range for {n} vertices",
                    pair.0, pair.1
                )));
            }
            pair.0 * n + pair.1
        }
        Basis::VertexLabel { n, d } => {
            if pair.0 >= *n || pair.1 >= *d {
                return Err(Error::Parameter(format!(
                    "state ({}; {}) out of range for {n} vertices with {d} labels",
                    pair.0, pair.1
                )));
            }
            pair.0 * d + pair.1
        }
        Basis::Plain(l) => {
            if pair.1 != 0 || pair.0 >= *l {
                return Err(Error::Parameter(format!(
                    "state {} out of range for dimension {l}",
                    pair.0
                )));
            }
            pair.0
        }
    };
    let mut v = CVector::zeros(u.dim());
    v[idx] = 1.0.into();
    Ok((idx, v))
}

pub fn hit_report(
    g: &Graph,
    graph6: &str,
    choice: &WalkChoice,
    from: (usize, usize),
    to: (usize, usize),
    eps: f64,
    k_max: Option<usize>,
) -> Result<HitReport> {
    let (u, structure) = build_walk(g, choice)?;
    let (xi, x) = pair_state(&u, from)?;
    let (yi, y) = pair_state(&u, to)?;
    let k_max = k_max.unwrap_or_else(|| default_k_max(u.dim()));
    let one = one_shot_hitting(&u, &x, &y, eps, k_max)?;
    let conc = concurrent_hitting(&u, &x, &y, eps, k_max)?;
    let exp = expected_hitting(&u, &x, &y, DEFAULT_TAIL_TOL, k_max)?;
    Ok(HitReport {
        model: model_name(choice).into(),
        graph6: graph6.into(),
        structure,
        x: u.label(xi),
        y: u.label(yi),
        eps,
        k_max,
        one_shot: one,
        concurrent: conc,
        expected_value: exp.value,
        unaccounted_mass: exp.unaccounted_mass,
        converged: exp.converged,
    })
}

/// End-to-end summary of the two-reflection walk of a graph's simple random
/// walk: unitary shape, mixing statistics, and the three hitting times.
#[derive(Debug, Clone, Serialize)]
pub struct SzegedyReport {
    pub model: String,
    pub graph6: String,
    pub vertices: usize,
    pub dim: usize,
    pub support: usize,
    pub unitarity_defect: f64,
    pub x: String,
    pub y: String,
    pub eps: f64,
    pub trace: f64,
    pub total_entropy: f64,
    pub walk_regular: bool,
    pub uniform: bool,
    pub eigenvalue_groups: usize,
    pub one_shot: Option<usize>,
    pub concurrent: Option<usize>,
    pub expected_value: f64,
    pub unaccounted_mass: f64,
    pub converged: bool,
}

pub fn szegedy_report(
    g: &Graph,
    graph6: &str,
    from: (usize, usize),
    to: (usize, usize),
    eps: f64,
) -> Result<SzegedyReport> {
    let arcs = ArcTable::from_graph(g);
    for pair in [from, to] {
        if arcs.index_of(pair.0, pair.1).is_none() {
            return Err(Error::Parameter(format!(
                "({}, {}) is not an arc of the graph",
                pair.0, pair.1
            )));
        }
    }
    let mc = simple_random_walk(g)?;
    let u = szegedy_unitary(&mc, ReflectionOrder::Q2First)?;
    let sd = spectral_decomposition(&u);
    let amm = average_mixing_matrix(&sd);
    let (xi, x) = pair_state(&u, from)?;
    let (yi, y) = pair_state(&u, to)?;
    let k_max = default_k_max(u.dim());
    let one = one_shot_hitting(&u, &x, &y, eps, k_max)?;
    let conc = concurrent_hitting(&u, &x, &y, eps, k_max)?;
    let exp = expected_hitting(&u, &x, &y, DEFAULT_TAIL_TOL, k_max)?;
    let gram = u.matrix().adjoint() * u.matrix();
    let defect = max_norm(&(gram - qwalk_core::CMatrix::identity(u.dim(), u.dim())));
    Ok(SzegedyReport {
        model: "szegedy".into(),
        graph6: graph6.into(),
        vertices: g.vertex_count(),
        dim: u.dim(),
        support: arcs.arc_count(),
        unitarity_defect: defect,
        x: u.label(xi),
        y: u.label(yi),
        eps,
        trace: amm.trace,
        total_entropy: amm.total_entropy,
        walk_regular: amm.walk_regular,
        uniform: amm.uniform,
        eigenvalue_groups: sd.groups().len(),
        one_shot: one,
        concurrent: conc,
        expected_value: exp.value,
        unaccounted_mass: exp.unaccounted_mass,
        converged: exp.converged,
    })
}
