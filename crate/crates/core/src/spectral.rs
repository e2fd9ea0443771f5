use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, max_norm, orthonormalize, CMatrix, CVector, SplitMat};
use crate::walks::TransitionUnitary;

pub const DEFAULT_ANGLE_TOL: f64 = 1e-9;
const DIAGONAL_FLATNESS_TOL: f64 = 1e-6;
const UNIFORM_TOL: f64 = 1e-6;
const ENTROPY_ZERO_TOL: f64 = 1e-14;

/// One eigenvalue e^{i theta} of a unitary with its spectral projector.
#[derive(Debug, Clone)]
pub struct EigenGroup {
    theta: f64,
    multiplicity: usize,
    projector: CMatrix,
}

impl EigenGroup {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }
}

/// Two eigenvalue groups separated by less than ten times the clustering
/// tolerance; kept apart, but flagged as numerically delicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterWarning {
    pub theta_a: f64,
    pub theta_b: f64,
    pub gap: f64,
}

/// The spectral decomposition U = sum_r e^{i theta_r} F_r.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    groups: Vec<EigenGroup>,
    warnings: Vec<ClusterWarning>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    pub fn group(&self, r: usize) -> &EigenGroup {
        &self.groups[r]
    }

    pub fn warnings(&self) -> &[ClusterWarning] {
        &self.warnings
    }

    /// Rebuild sum_r e^{i theta_r} F_r, which should reproduce U.
    pub fn reconstruction(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for g in &self.groups {
            m += &g.projector * Complex64::from_polar(1.0, g.theta);
        }
        m
    }
}

/// Spectral decomposition with the default angular tolerance.
pub fn spectral_decomposition(u: &TransitionUnitary) -> SpectralDecomposition {
    spectral_decomposition_with_tol(u, DEFAULT_ANGLE_TOL)
}

/// Eigenvalues of U clustered by angular distance at the given tolerance.
///
/// Works on the commuting Hermitian pair A = (U+U*)/2 and B = (U-U*)/(2i):
/// eigenspaces of A are clustered first, then split by the eigenvalues of B
/// compressed to each cluster, which separates conjugate angle pairs.
pub fn spectral_decomposition_with_tol(
    u: &TransitionUnitary,
    angle_tol: f64,
) -> SpectralDecomposition {
    let m = u.matrix();
    let l = m.nrows();
    let adj = m.adjoint();
    let a = (m + &adj).map(|z| z * Complex64::new(0.5, 0.0));
    let b = (m - &adj).map(|z| z * Complex64::new(0.0, -0.5));

    let (cos_vals, cos_vecs) = hermitian_eigen(&a);
    let mut raw: Vec<(f64, usize, CMatrix)> = Vec::new();
    for (start, end) in cluster_ranges(&cos_vals, angle_tol) {
        let v_c = cos_vecs.columns(start, end - start).into_owned();
        let b_c = v_c.adjoint() * &b * &v_c;
        let (sin_vals, sin_vecs) = hermitian_eigen(&b_c);
        for (s0, s1) in cluster_ranges(&sin_vals, angle_tol) {
            let z = orthonormalize(&(&v_c * sin_vecs.columns(s0, s1 - s0)));
            let rayleigh: Complex64 = (z.adjoint() * m * &z).diagonal().iter().sum();
            let theta = normalize_angle(rayleigh.im.atan2(rayleigh.re));
            raw.push((theta, s1 - s0, &z * z.adjoint()));
        }
    }
    raw.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut merged: Vec<(f64, usize, CMatrix)> = Vec::new();
    for (theta, mult, proj) in raw {
        match merged.last_mut() {
            Some(last) if theta - last.0 <= angle_tol => {
                last.1 += mult;
                last.2 += proj;
                last.0 = group_theta(m, &last.2, last.1);
            }
            _ => merged.push((theta, mult, proj)),
        }
    }
    if merged.len() > 1 {
        let wrap_gap = (merged[0].0 + 2.0 * PI) - merged.last().unwrap().0;
        if wrap_gap <= angle_tol {
            let (_, mult, proj) = merged.pop().unwrap();
            merged[0].1 += mult;
            merged[0].2 += proj;
            merged[0].0 = group_theta(m, &merged[0].2, merged[0].1);
        }
    }

    let mut warnings = Vec::new();
    for w in merged.windows(2) {
        let gap = w[1].0 - w[0].0;
        if gap <= 10.0 * angle_tol {
            warnings.push(ClusterWarning { theta_a: w[0].0, theta_b: w[1].0, gap });
        }
    }
    if merged.len() > 1 {
        let gap = (merged[0].0 + 2.0 * PI) - merged.last().unwrap().0;
        if gap <= 10.0 * angle_tol {
            warnings.push(ClusterWarning {
                theta_a: merged.last().unwrap().0,
                theta_b: merged[0].0,
                gap,
            });
        }
    }

    let groups = merged
        .into_iter()
        .map(|(theta, multiplicity, projector)| EigenGroup { theta, multiplicity, projector })
        .collect();
    SpectralDecomposition { dim: l, groups, warnings }
}

fn cluster_ranges(sorted: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            ranges.push((start, i));
            start = i;
        }
    }
    ranges
}

fn group_theta(u: &CMatrix, projector: &CMatrix, multiplicity: usize) -> f64 {
    let traced: Complex64 = (u * projector).diagonal().iter().sum();
    let mean = traced / multiplicity as f64;
    normalize_angle(mean.im.atan2(mean.re))
}

fn normalize_angle(theta: f64) -> f64 {
    if theta <= -PI + 1e-12 {
        theta + 2.0 * PI
    } else {
        theta
    }
}

/// The average mixing matrix with its summary statistics.
#[derive(Debug, Clone)]
pub struct AverageMixingMatrix {
    pub matrix: DMatrix<f64>,
    pub trace: f64,
    pub column_entropies: Vec<f64>,
    pub total_entropy: f64,
    pub walk_regular: bool,
    pub uniform: bool,
}

/// M-hat = sum_r F_r entrywise-squared, with statistics.
pub fn average_mixing_matrix(sd: &SpectralDecomposition) -> AverageMixingMatrix {
    let l = sd.dim();
    let mut matrix = DMatrix::zeros(l, l);
    for g in sd.groups() {
        for i in 0..l {
            for j in 0..l {
                matrix[(i, j)] += g.projector()[(i, j)].norm_sqr();
            }
        }
    }
    let trace = matrix.diagonal().sum();
    let (column_entropies, total_entropy) = entropy_stats(&matrix);
    let walk_regular = sd.groups().iter().all(|g| {
        let diag = g.projector().diagonal();
        let spread = diag.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
            - diag.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        spread <= DIAGONAL_FLATNESS_TOL
    });
    let flat = 1.0 / l as f64;
    let uniform = matrix.iter().all(|&x| (x - flat).abs() <= UNIFORM_TOL);
    AverageMixingMatrix { matrix, trace, column_entropies, total_entropy, walk_regular, uniform }
}

/// Finite Cesaro average (1/K) sum_{k=0}^{K-1} of the entrywise squared
/// moduli of U^k.
pub fn time_averaged_mixing(u: &TransitionUnitary, horizon: usize) -> Result<DMatrix<f64>> {
    if horizon == 0 {
        return Err(Error::Parameter("averaging horizon must be at least 1".into()));
    }
    let n = u.dim();
    let step = SplitMat::from_matrix(u.matrix());
    let mut power = SplitMat::identity(n);
    let mut next = SplitMat::identity(n);
    let mut acc = vec![0.0; n * n];
    for _ in 0..horizon {
        power.accumulate_abs2(&mut acc);
        step.mul_into(&power, &mut next);
        std::mem::swap(&mut power, &mut next);
    }
    let scale = 1.0 / horizon as f64;
    Ok(DMatrix::from_fn(n, n, |i, j| acc[i * n + j] * scale))
}

/// Average probability of finding the walk on the states S, started from x.
pub fn limiting_probability(
    sd: &SpectralDecomposition,
    x: &CVector,
    s: &[usize],
) -> Result<f64> {
    let l = sd.dim();
    if x.len() != l {
        return Err(Error::Parameter(format!(
            "state has dimension {} but the walk has {l}",
            x.len()
        )));
    }
    if (x.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter("state must be a unit vector".into()));
    }
    let mut mask = vec![false; l];
    for &i in s {
        if i >= l {
            return Err(Error::Parameter(format!("state index {i} out of range {l}")));
        }
        mask[i] = true;
    }
    let mut p = 0.0;
    for g in sd.groups() {
        let fx = g.projector() * x;
        for (i, included) in mask.iter().enumerate() {
            if *included {
                p += fx[i].norm_sqr();
            }
        }
    }
    if (-1e-12..0.0).contains(&p) {
        p = 0.0;
    }
    if (1.0..=1.0 + 1e-12).contains(&p) {
        p = 1.0;
    }
    Ok(p)
}

/// The idempotent quantum channel rho -> sum_r F_r rho F_r.
pub fn apply_channel(sd: &SpectralDecomposition, rho: &CMatrix) -> Result<CMatrix> {
    let l = sd.dim();
    if rho.nrows() != l || rho.ncols() != l {
        return Err(Error::Parameter("density matrix has the wrong dimension".into()));
    }
    if max_norm(&(rho - rho.adjoint())) > 1e-9 {
        return Err(Error::Parameter("density matrix must be Hermitian".into()));
    }
    let trace: Complex64 = rho.diagonal().iter().sum();
    if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::Parameter("density matrix must have trace 1".into()));
    }
    let (eigs, _) = hermitian_eigen(rho);
    if eigs.iter().any(|&e| e < -1e-9) {
        return Err(Error::Parameter("density matrix must be positive semidefinite".into()));
    }
    let mut out = CMatrix::zeros(l, l);
    for g in sd.groups() {
        out += g.projector() * rho * g.projector();
    }
    Ok(out)
}

/// Per-column Shannon entropies (natural log) and their sum. Entries below
/// 1e-14 count as exact zeros.
pub fn entropy_stats(matrix: &DMatrix<f64>) -> (Vec<f64>, f64) {
    let cols = (0..matrix.ncols())
        .map(|j| {
            -matrix
                .column(j)
                .iter()
                .filter(|&&x| x >= ENTROPY_ZERO_TOL)
                .map(|&x| x * x.ln())
                .sum::<f64>()
        })
        .collect::<Vec<_>>();
    let total = cols.iter().sum();
    (cols, total)
}

/// The bound tr(M-hat) >= (1/l) sum_r m_r^2.
pub fn trace_lower_bound(sd: &SpectralDecomposition) -> f64 {
    let l = sd.dim() as f64;
    sd.groups().iter().map(|g| (g.multiplicity() * g.multiplicity()) as f64).sum::<f64>() / l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorizations::LinearOrders;
    use crate::graph::Graph;
    use crate::walks::{
        arc_reversal_unitary, make_coin, Basis, CoinKind, TransitionUnitary, VertexCoins,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_unitary(phases: &[f64]) -> TransitionUnitary {
        let n = phases.len();
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, phases[i])
            } else {
                c(0.0, 0.0)
            }
        });
        TransitionUnitary::new(m, Basis::Plain(n)).unwrap()
    }

    fn k3_walk() -> TransitionUnitary {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let lo = LinearOrders::new(&g, vec![vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        let coins =
            VertexCoins::uniform(&g, make_coin(CoinKind::Fourier, 2).unwrap()).unwrap();
        arc_reversal_unitary(&g, &lo, &coins).unwrap()
    }

    #[test]
    fn identity_has_one_full_group() {
        let u = diag_unitary(&[0.0; 4]);
        let sd = spectral_decomposition(&u);
        assert_eq!(sd.groups().len(), 1);
        assert_eq!(sd.group(0).multiplicity(), 4);
        assert!(sd.group(0).theta().abs() < 1e-12);
        assert!(max_norm(&(sd.group(0).projector() - CMatrix::identity(4, 4))) < 1e-9);
        let m = average_mixing_matrix(&sd);
        assert!((m.trace - 4.0).abs() < 1e-9);
        assert!(m.column_entropies.iter().all(|&h| h.abs() < 1e-12));
        assert!(m.walk_regular);
        assert!(!m.uniform);
        assert!((trace_lower_bound(&sd) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn plus_minus_one_splits_into_two_groups() {
        let u = diag_unitary(&[0.0, PI]);
        let sd = spectral_decomposition(&u);
        assert_eq!(sd.groups().len(), 2);
        assert!(sd.group(0).theta().abs() < 1e-12);
        assert!((sd.group(1).theta() - PI).abs() < 1e-12);
        for (r, idx) in [(0usize, 0usize), (1, 1)] {
            let f = sd.group(r).projector();
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if i == idx && j == idx { 1.0 } else { 0.0 };
                    assert!((f[(i, j)] - c(expected, 0.0)).norm() < 1e-9);
                }
            }
        }
        assert!((trace_lower_bound(&sd) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_degenerate_angles_warn_but_stay_apart() {
        let gap = 5e-9;
        let sd = spectral_decomposition(&diag_unitary(&[0.0, gap]));
        assert_eq!(sd.groups().len(), 2);
        assert_eq!(sd.warnings().len(), 1);
        assert!((sd.warnings()[0].gap - gap).abs() < 1e-12);

        let tight = spectral_decomposition(&diag_unitary(&[0.0, 5e-10]));
        assert_eq!(tight.groups().len(), 1);
        assert_eq!(tight.group(0).multiplicity(), 2);
        assert!(tight.warnings().is_empty());
    }

    #[test]
    fn conjugate_angles_near_the_cut_are_separated() {
        let u = diag_unitary(&[PI - 1e-3, -(PI - 1e-3), PI - 1e-3]);
        let sd = spectral_decomposition(&u);
        assert_eq!(sd.groups().len(), 2);
        let mults: Vec<_> = sd.groups().iter().map(|g| g.multiplicity()).collect();
        assert!(mults.contains(&2) && mults.contains(&1));
        assert!(max_norm(&(sd.reconstruction() - u.matrix())) < 1e-9);
    }

    #[test]
    fn walk_decomposition_satisfies_projector_axioms() {
        let u = k3_walk();
        let sd = spectral_decomposition(&u);
        let l = 6;
        assert_eq!(sd.groups().iter().map(|g| g.multiplicity()).sum::<usize>(), l);
        let mut sum = CMatrix::zeros(l, l);
        for g in sd.groups() {
            let f = g.projector();
            assert!(max_norm(&(f - f.adjoint())) < 1e-9);
            assert!(max_norm(&(f * f - f)) < 1e-9);
            sum += f;
        }
        assert!(max_norm(&(sum - CMatrix::identity(l, l))) < 1e-9);
        for r in 0..sd.groups().len() {
            for s in 0..sd.groups().len() {
                if r != s {
                    let prod = sd.group(r).projector() * sd.group(s).projector();
                    assert!(max_norm(&prod) < 1e-9);
                }
            }
        }
        assert!(max_norm(&(sd.reconstruction() - u.matrix())) < 1e-9);
        let thetas: Vec<_> = sd.groups().iter().map(|g| g.theta()).collect();
        assert!(thetas.windows(2).all(|w| w[0] < w[1]));
        assert!(thetas.iter().all(|&t| t > -PI && t <= PI));
    }

    #[test]
    fn mixing_matrix_is_doubly_stochastic_and_bounded() {
        let u = k3_walk();
        let sd = spectral_decomposition(&u);
        let m = average_mixing_matrix(&sd);
        let l = 6;
        for i in 0..l {
            let row: f64 = m.matrix.row(i).iter().sum();
            let col: f64 = m.matrix.column(i).iter().sum();
            assert!((row - 1.0).abs() < 1e-9);
            assert!((col - 1.0).abs() < 1e-9);
        }
        assert!(m.matrix.iter().all(|&x| x >= -1e-12));
        for i in 0..l {
            for j in 0..l {
                assert!((m.matrix[(i, j)] - m.matrix[(j, i)]).abs() < 1e-9);
            }
        }
        assert!(m.trace >= 1.0 - 1e-9);
        assert!(m.trace >= trace_lower_bound(&sd) - 1e-9);
    }

    #[test]
    fn time_average_approaches_the_limit() {
        let u = k3_walk();
        let sd = spectral_decomposition(&u);
        let m = average_mixing_matrix(&sd);
        let one = time_averaged_mixing(&u, 1).unwrap();
        assert!((&one - DMatrix::<f64>::identity(6, 6)).abs().max() < 1e-12);
        let errs: Vec<f64> = [100, 1000, 10000]
            .iter()
            .map(|&k| {
                let avg = time_averaged_mixing(&u, k).unwrap();
                (&avg - &m.matrix).abs().max()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 1e-2);
        assert!(time_averaged_mixing(&u, 0).is_err());
    }

    #[test]
    fn limiting_probability_matches_the_mixing_matrix() {
        let u = k3_walk();
        let sd = spectral_decomposition(&u);
        let m = average_mixing_matrix(&sd);
        let l = 6;
        let all: Vec<usize> = (0..l).collect();
        for j in 0..l {
            let mut x = CVector::zeros(l);
            x[j] = c(1.0, 0.0);
            assert!((limiting_probability(&sd, &x, &all).unwrap() - 1.0).abs() < 1e-9);
            for i in 0..l {
                let p = limiting_probability(&sd, &x, &[i]).unwrap();
                assert!((p - m.matrix[(i, j)]).abs() < 1e-9);
            }
        }
        let mut x = CVector::zeros(l);
        x[0] = c(2.0, 0.0);
        assert!(limiting_probability(&sd, &x, &[0]).is_err());
        x[0] = c(1.0, 0.0);
        assert!(limiting_probability(&sd, &x, &[7]).is_err());
    }

    #[test]
    fn channel_fixes_mixed_states_and_reports_probabilities() {
        let u = k3_walk();
        let sd = spectral_decomposition(&u);
        let l = 6;
        let mixed = CMatrix::identity(l, l) * c(1.0 / l as f64, 0.0);
        let out = apply_channel(&sd, &mixed).unwrap();
        assert!(max_norm(&(&out - &mixed)) < 1e-9);
        let again = apply_channel(&sd, &out).unwrap();
        assert!(max_norm(&(again - out)) < 1e-9);

        let s = [0usize, 2, 4];
        let mut d_s = CMatrix::zeros(l, l);
        for &i in &s {
            d_s[(i, i)] = c(1.0 / s.len() as f64, 0.0);
        }
        let channeled = apply_channel(&sd, &d_s).unwrap();
        let mut x = CVector::zeros(l);
        x[1] = c(1.0, 0.0);
        let quadratic = (x.adjoint() * &channeled * &x)[(0, 0)].re * s.len() as f64;
        let direct = limiting_probability(&sd, &x, &s).unwrap();
        assert!((quadratic - direct).abs() < 1e-9);

        let not_density = CMatrix::identity(l, l);
        assert!(apply_channel(&sd, &not_density).is_err());
    }

    #[test]
    fn entropy_handles_uniform_and_pure_columns() {
        let j4 = DMatrix::from_element(4, 4, 0.25);
        let (cols, total) = entropy_stats(&j4);
        assert!(cols.iter().all(|&h| (h - 4.0f64.ln()).abs() < 1e-12));
        assert!((total - 4.0 * 4.0f64.ln()).abs() < 1e-12);
        let id = DMatrix::<f64>::identity(4, 4);
        let (cols, total) = entropy_stats(&id);
        assert!(cols.iter().all(|&h| h.abs() < 1e-15));
        assert!(total.abs() < 1e-15);
    }
}
