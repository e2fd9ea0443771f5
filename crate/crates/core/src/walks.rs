use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorizations::{LinearOrders, ShuntDecomposition};
use crate::graph::{ArcTable, Graph};
use crate::linalg::{max_norm, unitarity_defect, CMatrix};

const UNITARY_TOL: f64 = 1e-12;
const COIN_EIGENVALUE_TOL: f64 = 1e-9;

/// The named coin families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinKind {
    Grover,
    Fourier,
    Circulant7,
    Gauss,
}

impl CoinKind {
    pub fn name(self) -> &'static str {
        match self {
            CoinKind::Grover => "grover",
            CoinKind::Fourier => "fourier",
            CoinKind::Circulant7 => "circulant7",
            CoinKind::Gauss => "gauss",
        }
    }
}

impl std::str::FromStr for CoinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<CoinKind> {
        match s {
            "grover" => Ok(CoinKind::Grover),
            "fourier" => Ok(CoinKind::Fourier),
            "circulant7" => Ok(CoinKind::Circulant7),
            "gauss" => Ok(CoinKind::Gauss),
            other => Err(Error::Parameter(format!("unknown coin kind {other:?}"))),
        }
    }
}

/// A d-dimensional unitary coin.
#[derive(Debug, Clone, PartialEq)]
pub struct Coin {
    matrix: CMatrix,
}

impl Coin {
    pub fn new(matrix: CMatrix) -> Result<Coin> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::Parameter("coin must be square and non-empty".into()));
        }
        let defect = unitarity_defect(&matrix);
        if defect > UNITARY_TOL {
            return Err(Error::Parameter(format!(
                "coin is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Coin { matrix })
    }

    pub fn identity(d: usize) -> Coin {
        Coin { matrix: CMatrix::identity(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Construct one of the named coins.
pub fn make_coin(kind: CoinKind, d: usize) -> Result<Coin> {
    if d == 0 {
        return Err(Error::Parameter("coin dimension must be positive".into()));
    }
    let matrix = match kind {
        CoinKind::Grover => CMatrix::from_fn(d, d, |j, k| {
            let jj = 2.0 / d as f64;
            Complex64::new(if j == k { jj - 1.0 } else { jj }, 0.0)
        }),
        CoinKind::Fourier => {
            let scale = 1.0 / (d as f64).sqrt();
            CMatrix::from_fn(d, d, |j, k| {
                let angle = 2.0 * PI * (j * k) as f64 / d as f64;
                Complex64::from_polar(scale, angle)
            })
        }
        CoinKind::Circulant7 => {
            if d != 3 {
                return Err(Error::Parameter(format!(
                    "circulant7 coin is 3-dimensional, got d={d}"
                )));
            }
            let col = [-2.0 / 7.0, 6.0 / 7.0, 3.0 / 7.0];
            CMatrix::from_fn(3, 3, |j, k| {
                Complex64::new(col[(3 + j - k) % 3], 0.0)
            })
        }
        CoinKind::Gauss => {
            if d.is_multiple_of(2) {
                return Err(Error::Parameter(format!(
                    "gauss coin needs odd dimension, got d={d}"
                )));
            }
            let scale = 1.0 / (d as f64).sqrt();
            CMatrix::from_fn(d, d, |j, k| {
                let diff = j as f64 - k as f64;
                let angle = 2.0 * diff * diff * PI / d as f64;
                Complex64::from_polar(scale, angle)
            })
        }
    };
    Coin::new(matrix)
}

/// One coin per vertex, dimensions matching the degrees.
#[derive(Debug, Clone)]
pub struct VertexCoins {
    coins: Vec<Coin>,
}

impl VertexCoins {
    pub fn uniform(g: &Graph, coin: Coin) -> Result<VertexCoins> {
        for u in 0..g.vertex_count() {
            if g.degree(u) != coin.dim() {
                return Err(Error::Parameter(format!(
                    "coin dimension {} does not match degree {} of vertex {u}",
                    coin.dim(),
                    g.degree(u)
                )));
            }
        }
        Ok(VertexCoins { coins: vec![coin; g.vertex_count()] })
    }

    pub fn per_vertex(g: &Graph, coins: Vec<Coin>) -> Result<VertexCoins> {
        if coins.len() != g.vertex_count() {
            return Err(Error::Parameter(format!(
                "{} coins for {} vertices",
                coins.len(),
                g.vertex_count()
            )));
        }
        for (u, coin) in coins.iter().enumerate() {
            if g.degree(u) != coin.dim() {
                return Err(Error::Parameter(format!(
                    "coin dimension {} does not match degree {} of vertex {u}",
                    coin.dim(),
                    g.degree(u)
                )));
            }
        }
        Ok(VertexCoins { coins })
    }

    pub fn coin(&self, u: usize) -> &Coin {
        &self.coins[u]
    }
}

/// Basis labeling of a transition unitary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basis {
    /// Arcs in canonical order; state i is the arc `arcs[i]`.
    Arcs(Vec<(usize, usize)>),
    /// Vertex-label pairs (u, j), indexed u*d + j.
    VertexLabel { n: usize, d: usize },
    /// Ordered vertex pairs (a, b), indexed a*n + b.
    Pairs { n: usize },
    /// Anonymous states 0..dim.
    Plain(usize),
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Arcs(arcs) => arcs.len(),
            Basis::VertexLabel { n, d } => n * d,
            Basis::Pairs { n } => n * n,
            Basis::Plain(dim) => *dim,
        }
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            Basis::Arcs(arcs) => {
                let (u, v) = arcs[i];
                format!("({u},{v})")
            }
            Basis::VertexLabel { d, .. } => format!("({};{})", i / d, i % d),
            Basis::Pairs { n } => format!("({},{})", i / n, i % n),
            Basis::Plain(_) => i.to_string(),
        }
    }
}

/// A walk transition matrix with its basis labels.
#[derive(Debug, Clone)]
pub struct TransitionUnitary {
    matrix: CMatrix,
    basis: Basis,
}

impl TransitionUnitary {
    pub fn new(matrix: CMatrix, basis: Basis) -> Result<TransitionUnitary> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != basis.dim() {
            return Err(Error::Parameter(format!(
                "matrix is {}x{} but the basis has {} states",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            )));
        }
        let defect = unitarity_defect(&matrix);
        if defect > UNITARY_TOL {
            return Err(Error::Parameter(format!(
                "matrix is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(TransitionUnitary { matrix, basis })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn label(&self, i: usize) -> String {
        self.basis.label(i)
    }
}

/// Arc-reversal walk U = RC: per-vertex coins in the label basis given by
/// the linear orders, then every arc is reversed.
pub fn arc_reversal_unitary(
    g: &Graph,
    lo: &LinearOrders,
    coins: &VertexCoins,
) -> Result<TransitionUnitary> {
    if lo.vertex_count() != g.vertex_count() {
        return Err(Error::Parameter("orders do not match the graph".into()));
    }
    let arcs = ArcTable::from_graph(g);
    let m = arcs.arc_count();
    let mut u_mat = CMatrix::zeros(m, m);
    for v in 0..g.vertex_count() {
        let coin = coins.coin(v).matrix();
        if coin.nrows() != g.degree(v) {
            return Err(Error::Parameter(format!(
                "coin dimension {} does not match degree {} of vertex {v}",
                coin.nrows(),
                g.degree(v)
            )));
        }
        for k in 0..coin.nrows() {
            let out = arcs
                .index_of(v, lo.neighbor(v, k))
                .expect("linear orders list neighbors");
            let row = arcs.reversal(out);
            for j in 0..coin.ncols() {
                let col = arcs
                    .index_of(v, lo.neighbor(v, j))
                    .expect("linear orders list neighbors");
                u_mat[(row, col)] = coin[(k, j)];
            }
        }
    }
    TransitionUnitary::new(u_mat, Basis::Arcs(arcs.arcs().to_vec()))
}

/// Arc-reversal walk from a rotation system. The coin must be circulant with
/// simple eigenvalues, which makes the walk independent of where each cyclic
/// order is cut into a linear order.
pub fn arc_reversal_from_rotation(
    g: &Graph,
    rot: &crate::embeddings::RotationSystem,
    coin: &Coin,
) -> Result<TransitionUnitary> {
    let d = match g.regular_degree() {
        Some(d) if d == coin.dim() => d,
        Some(d) => {
            return Err(Error::Parameter(format!(
                "coin dimension {} does not match degree {d}",
                coin.dim()
            )))
        }
        None => return Err(Error::ModelPrecondition("graph must be regular".into())),
    };
    check_circulant_simple(coin)?;
    let orders: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|u| rot.cycle(u).to_vec())
        .collect();
    let lo = LinearOrders::new(g, orders)?;
    let coins = VertexCoins::uniform(g, coin.clone())?;
    debug_assert_eq!(coin.dim(), d);
    arc_reversal_unitary(g, &lo, &coins)
}

fn check_circulant_simple(coin: &Coin) -> Result<()> {
    let d = coin.dim();
    let m = coin.matrix();
    let mut deviation: f64 = 0.0;
    for j in 0..d {
        for k in 0..d {
            let first_col = m[((j + d - k) % d, 0)];
            deviation = deviation.max((m[(j, k)] - first_col).norm());
        }
    }
    if deviation > COIN_EIGENVALUE_TOL {
        return Err(Error::CoinIncompatible(format!(
            "coin is not circulant (deviation {deviation:.3e})"
        )));
    }
    let eigenvalues: Vec<Complex64> = (0..d)
        .map(|t| {
            (0..d)
                .map(|s| {
                    let angle = -2.0 * PI * (s * t) as f64 / d as f64;
                    m[(s, 0)] * Complex64::from_polar(1.0, angle)
                })
                .sum()
        })
        .collect();
    for a in 0..d {
        for b in a + 1..d {
            let gap = (eigenvalues[a] - eigenvalues[b]).norm();
            if gap <= COIN_EIGENVALUE_TOL {
                return Err(Error::CoinIncompatible(format!(
                    "coin eigenvalues {a} and {b} coincide (gap {gap:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// Shunt-decomposition walk U = SC on the basis (u, j) with index u*d + j.
pub fn shunt_unitary(
    g: &Graph,
    dec: &ShuntDecomposition,
    coin: &Coin,
) -> Result<TransitionUnitary> {
    let n = g.vertex_count();
    let d = dec.shunt_count();
    if dec.vertex_count() != n {
        return Err(Error::Parameter("decomposition does not match the graph".into()));
    }
    if coin.dim() != d {
        return Err(Error::Parameter(format!(
            "coin dimension {} does not match {d} shunts",
            coin.dim()
        )));
    }
    let c = coin.matrix();
    let mut u_mat = CMatrix::zeros(n * d, n * d);
    for u in 0..n {
        for k in 0..d {
            let row = dec.shunt(k)[u] * d + k;
            for j in 0..d {
                u_mat[(row, u * d + j)] = c[(k, j)];
            }
        }
    }
    TransitionUnitary::new(u_mat, Basis::VertexLabel { n, d })
}

/// A doubly stochastic Markov chain.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    matrix: DMatrix<f64>,
}

impl MarkovChain {
    pub fn new(matrix: DMatrix<f64>) -> Result<MarkovChain> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::Parameter("chain matrix must be square".into()));
        }
        if matrix.iter().any(|&x| x < 0.0) {
            return Err(Error::ModelPrecondition("chain has negative entries".into()));
        }
        for i in 0..n {
            let row: f64 = matrix.row(i).iter().sum();
            let col: f64 = matrix.column(i).iter().sum();
            if (row - 1.0).abs() > UNITARY_TOL || (col - 1.0).abs() > UNITARY_TOL {
                return Err(Error::ModelPrecondition(format!(
                    "chain is not doubly stochastic at index {i}"
                )));
            }
        }
        Ok(MarkovChain { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Transition matrix of the simple random walk on a regular graph.
pub fn simple_random_walk(g: &Graph) -> Result<MarkovChain> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::ModelPrecondition("graph must be regular".into()))?;
    if d == 0 {
        return Err(Error::ModelPrecondition("graph must have edges".into()));
    }
    MarkovChain::new(g.adjacency_matrix() / d as f64)
}

/// Which reflection acts on the state first in the two-reflection walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReflectionOrder {
    /// U = (2Q1Q1* - I)(2Q2Q2* - I).
    #[default]
    Q2First,
    /// U = (2Q2Q2* - I)(2Q1Q1* - I).
    Q1First,
}

/// Szegedy walk of a doubly stochastic chain on the n^2 pair states.
pub fn szegedy_unitary(mc: &MarkovChain, order: ReflectionOrder) -> Result<TransitionUnitary> {
    let n = mc.dim();
    let m = mc.matrix();
    let sqrt = DMatrix::from_fn(n, n, |i, j| m[(i, j)].sqrt());
    let mut q1 = CMatrix::zeros(n * n, n);
    let mut q2 = CMatrix::zeros(n * n, n);
    for j in 0..n {
        for b in 0..n {
            q1[(j * n + b, j)] = Complex64::new(sqrt[(b, j)], 0.0);
            q2[(b * n + j, j)] = Complex64::new(sqrt[(j, b)], 0.0);
        }
    }
    let u = two_reflection_product(&q1, &q2, order)?;
    TransitionUnitary::new(u, Basis::Pairs { n })
}

/// The isometries Q1, Q2 of the Szegedy construction, for inspection.
pub fn szegedy_isometries(mc: &MarkovChain) -> (CMatrix, CMatrix) {
    let n = mc.dim();
    let m = mc.matrix();
    let sqrt = DMatrix::from_fn(n, n, |i, j| m[(i, j)].sqrt());
    let mut q1 = CMatrix::zeros(n * n, n);
    let mut q2 = CMatrix::zeros(n * n, n);
    for j in 0..n {
        for b in 0..n {
            q1[(j * n + b, j)] = Complex64::new(sqrt[(b, j)], 0.0);
            q2[(b * n + j, j)] = Complex64::new(sqrt[(j, b)], 0.0);
        }
    }
    (q1, q2)
}

/// Two-reflection walk about the column spaces of two isometries.
pub fn generalized_two_reflection(
    q1: &CMatrix,
    q2: &CMatrix,
    order: ReflectionOrder,
) -> Result<TransitionUnitary> {
    let u = two_reflection_product(q1, q2, order)?;
    let dim = u.nrows();
    TransitionUnitary::new(u, Basis::Plain(dim))
}

fn two_reflection_product(
    q1: &CMatrix,
    q2: &CMatrix,
    order: ReflectionOrder,
) -> Result<CMatrix> {
    if q1.nrows() != q2.nrows() {
        return Err(Error::Parameter("isometries act on different spaces".into()));
    }
    for (name, q) in [("Q1", q1), ("Q2", q2)] {
        let gram = q.adjoint() * q;
        let defect = max_norm(&(gram - CMatrix::identity(q.ncols(), q.ncols())));
        if defect > UNITARY_TOL {
            return Err(Error::Parameter(format!(
                "{name} is not an isometry (defect {defect:.3e})"
            )));
        }
    }
    let l = q1.nrows();
    let r1 = (q1 * q1.adjoint()) * Complex64::new(2.0, 0.0) - CMatrix::identity(l, l);
    let r2 = (q2 * q2.adjoint()) * Complex64::new(2.0, 0.0) - CMatrix::identity(l, l);
    Ok(match order {
        ReflectionOrder::Q2First => r1 * r2,
        ReflectionOrder::Q1First => r2 * r1,
    })
}

#[cfg(test)]
#[allow(clippy::erasing_op, clippy::identity_op)]
mod tests {
    use super::*;
    use crate::factorizations::validate_linear_orders_for_shunt_model;

    fn k3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn named_coins_match_their_formulas() {
        let g = make_coin(CoinKind::Grover, 3).unwrap();
        assert!((g.matrix()[(0, 0)] - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((g.matrix()[(0, 1)] - c(2.0 / 3.0, 0.0)).norm() < 1e-15);

        let f = make_coin(CoinKind::Fourier, 2).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((f.matrix()[(1, 1)] - c(-s, 0.0)).norm() < 1e-15);
        assert!((f.matrix()[(0, 1)] - c(s, 0.0)).norm() < 1e-15);

        let c7 = make_coin(CoinKind::Circulant7, 3).unwrap();
        assert!((c7.matrix()[(0, 0)] - c(-2.0 / 7.0, 0.0)).norm() < 1e-15);
        assert!((c7.matrix()[(1, 0)] - c(6.0 / 7.0, 0.0)).norm() < 1e-15);
        assert!((c7.matrix()[(2, 0)] - c(3.0 / 7.0, 0.0)).norm() < 1e-15);
        assert!((c7.matrix()[(0, 1)] - c(3.0 / 7.0, 0.0)).norm() < 1e-15);

        let b = make_coin(CoinKind::Gauss, 3).unwrap();
        assert!(unitarity_defect(b.matrix()) < 1e-12);

        assert!(make_coin(CoinKind::Circulant7, 4).is_err());
        assert!(make_coin(CoinKind::Gauss, 4).is_err());
    }

    #[test]
    fn worked_one_step_state_on_k3() {
        let g = k3();
        let lo = LinearOrders::new(&g, vec![vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        let coins = VertexCoins::uniform(&g, make_coin(CoinKind::Fourier, 2).unwrap()).unwrap();
        let u = arc_reversal_unitary(&g, &lo, &coins).unwrap();
        let arcs = ArcTable::from_graph(&g);
        let input = arcs.index_of(0, 2).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        let col = u.matrix().column(input);
        for i in 0..6 {
            let expected = if i == arcs.index_of(1, 0).unwrap() {
                c(s, 0.0)
            } else if i == arcs.index_of(2, 0).unwrap() {
                c(-s, 0.0)
            } else {
                c(0.0, 0.0)
            };
            assert!((col[i] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_coins_give_pure_reversal() {
        let g = k3();
        let lo = LinearOrders::new(&g, vec![vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        let coins = VertexCoins::uniform(&g, Coin::identity(2)).unwrap();
        let u = arc_reversal_unitary(&g, &lo, &coins).unwrap();
        let sq = u.matrix() * u.matrix();
        assert!(max_norm(&(sq - CMatrix::identity(6, 6))) < 1e-12);
        let arcs = ArcTable::from_graph(&g);
        for a in 0..6 {
            assert!((u.matrix()[(arcs.reversal(a), a)] - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rotation_walk_ignores_the_cut_point() {
        let g = k3();
        let coin = make_coin(CoinKind::Circulant7, 3).unwrap();
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let rot = crate::embeddings::enumerate_rotation_systems(&k4).next().unwrap();
        let u = arc_reversal_from_rotation(&k4, &rot, &coin).unwrap();
        let coins = VertexCoins::uniform(&k4, coin.clone()).unwrap();
        for rotated in [
            vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]],
            vec![vec![2, 3, 1], vec![2, 3, 0], vec![1, 3, 0], vec![1, 2, 0]],
            vec![vec![3, 1, 2], vec![3, 0, 2], vec![3, 0, 1], vec![2, 0, 1]],
        ] {
            let lo = LinearOrders::new(&k4, rotated).unwrap();
            let v = arc_reversal_unitary(&k4, &lo, &coins).unwrap();
            assert!(max_norm(&(u.matrix() - v.matrix())) < 1e-12);
        }
        assert!(arc_reversal_from_rotation(&g, &rot, &coin).is_err());
    }

    #[test]
    fn incompatible_coins_are_rejected_for_rotation_walks() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let rot = crate::embeddings::enumerate_rotation_systems(&k4).next().unwrap();
        let grover = make_coin(CoinKind::Grover, 3).unwrap();
        assert!(matches!(
            arc_reversal_from_rotation(&k4, &rot, &grover),
            Err(Error::CoinIncompatible(_))
        ));
        let fourier = make_coin(CoinKind::Fourier, 3).unwrap();
        assert!(matches!(
            arc_reversal_from_rotation(&k4, &rot, &fourier),
            Err(Error::CoinIncompatible(_))
        ));
        let gauss = make_coin(CoinKind::Gauss, 3).unwrap();
        assert!(matches!(
            arc_reversal_from_rotation(&k4, &rot, &gauss),
            Err(Error::CoinIncompatible(_))
        ));
    }

    #[test]
    fn shunt_walk_advances_labels() {
        let g = k3();
        let lo = LinearOrders::new(&g, vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        let dec = validate_linear_orders_for_shunt_model(&g, &lo).unwrap();
        let u = shunt_unitary(&g, &dec, &Coin::identity(2)).unwrap();
        let from_0_0 = 0 * 2 + 0;
        let to_1_0 = 1 * 2 + 0;
        assert!((u.matrix()[(to_1_0, from_0_0)] - c(1.0, 0.0)).norm() < 1e-15);
        let from_1_1 = 1 * 2 + 1;
        let to_0_1 = 0 * 2 + 1;
        assert!((u.matrix()[(to_0_1, from_1_1)] - c(1.0, 0.0)).norm() < 1e-15);
        for i in 0..6 {
            let ones = (0..6)
                .filter(|&r| (u.matrix()[(r, i)] - c(1.0, 0.0)).norm() < 1e-15)
                .count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn szegedy_reflections_match_the_worked_example() {
        let mc = simple_random_walk(&k3()).unwrap();
        let (q1, q2) = szegedy_isometries(&mc);
        assert!(max_norm(&(q1.adjoint() * &q1 - CMatrix::identity(3, 3))) < 1e-12);
        assert!(max_norm(&(q2.adjoint() * &q2 - CMatrix::identity(3, 3))) < 1e-12);
        let l = 9;
        let r1 = (&q1 * q1.adjoint()) * c(2.0, 0.0) - CMatrix::identity(l, l);
        let r2 = (&q2 * q2.adjoint()) * c(2.0, 0.0) - CMatrix::identity(l, l);
        let e12 = CMatrix::identity(l, l).column(0 * 3 + 1).into_owned();
        let after_r1 = &r1 * &e12;
        for i in 0..l {
            let expected = if i == 0 * 3 + 2 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((after_r1[i] - expected).norm() < 1e-12);
        }
        let e13 = CMatrix::identity(l, l).column(0 * 3 + 2).into_owned();
        let after_r2 = &r2 * &e13;
        for i in 0..l {
            let expected = if i == 1 * 3 + 2 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((after_r2[i] - expected).norm() < 1e-12);
        }
        let u = szegedy_unitary(&mc, ReflectionOrder::Q2First).unwrap();
        let applied = u.matrix() * &e13;
        let direct = &r1 * (&r2 * &e13);
        assert!(max_norm(&CMatrix::from_fn(l, 1, |i, _| applied[i] - direct[i])) < 1e-12);
    }

    #[test]
    fn reflection_orders_are_transposes() {
        let mc = simple_random_walk(&k3()).unwrap();
        let a = szegedy_unitary(&mc, ReflectionOrder::Q2First).unwrap();
        let b = szegedy_unitary(&mc, ReflectionOrder::Q1First).unwrap();
        assert!(max_norm(&(a.matrix() - b.matrix().transpose())) < 1e-12);
    }

    #[test]
    fn generalized_reflection_with_equal_isometries_is_identity() {
        let mc = simple_random_walk(&k3()).unwrap();
        let (q1, _) = szegedy_isometries(&mc);
        let u = generalized_two_reflection(&q1, &q1, ReflectionOrder::Q2First).unwrap();
        assert!(max_norm(&(u.matrix() - CMatrix::identity(9, 9))) < 1e-12);
        let bad = &q1 * c(2.0, 0.0);
        assert!(generalized_two_reflection(&bad, &q1, ReflectionOrder::Q2First).is_err());
    }

    #[test]
    fn markov_chain_requires_doubly_stochastic() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.9, 0.1, 0.3, 0.7]);
        assert!(MarkovChain::new(bad).is_err());
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(simple_random_walk(&path).is_err());
        let ok = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(MarkovChain::new(ok).is_ok());
    }
}
