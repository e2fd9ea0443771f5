use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::spectral::SpectralDecomposition;
use crate::walks::TransitionUnitary;

pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Default truncation horizon for hitting-time sums on an l-dimensional walk.
pub fn default_k_max(l: usize) -> usize {
    10 * l * l
}

fn check_unit(name: &str, v: &CVector, dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::Parameter(format!(
            "{name} has dimension {} but the walk has {dim}",
            v.len()
        )));
    }
    if (v.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("{name} must be a unit vector")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("eps must lie in (0,1), got {eps}")));
    }
    Ok(())
}

/// Smallest k <= k_max with |y* U^k x|^2 >= 1 - eps, if any.
pub fn one_shot_hitting(
    u: &TransitionUnitary,
    x: &CVector,
    y: &CVector,
    eps: f64,
    k_max: usize,
) -> Result<Option<usize>> {
    check_unit("x", x, u.dim())?;
    check_unit("y", y, u.dim())?;
    check_eps(eps)?;
    let mut state = x.clone();
    for k in 0..=k_max {
        if k > 0 {
            state = u.matrix() * state;
        }
        let amp = y.dotc(&state);
        if amp.norm_sqr() >= 1.0 - eps {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Smallest K <= k_max at which the measured walk's cumulative
/// stop-probability reaches 1 - eps, if any.
pub fn concurrent_hitting(
    u: &TransitionUnitary,
    x: &CVector,
    y: &CVector,
    eps: f64,
    k_max: usize,
) -> Result<Option<usize>> {
    check_unit("x", x, u.dim())?;
    check_unit("y", y, u.dim())?;
    check_eps(eps)?;
    let mut cumulative = 0.0;
    for (k, p) in MeasuredWalk::new(u, x, y).take(k_max).enumerate() {
        cumulative += p;
        if cumulative >= 1.0 - eps {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}

/// Expected hitting time of the measured walk, truncated at k_max.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedHitting {
    pub value: f64,
    pub unaccounted_mass: f64,
    pub converged: bool,
}

/// Truncation of h = sum_k k |y* U ((I-yy*)U)^{k-1} x|^2 at k_max, reporting
/// the stop-mass the truncation leaves unaccounted.
pub fn expected_hitting(
    u: &TransitionUnitary,
    x: &CVector,
    y: &CVector,
    tail_tol: f64,
    k_max: usize,
) -> Result<ExpectedHitting> {
    check_unit("x", x, u.dim())?;
    check_unit("y", y, u.dim())?;
    if tail_tol < 0.0 {
        return Err(Error::Parameter(format!("tail_tol must be nonnegative, got {tail_tol}")));
    }
    let mut value = 0.0;
    let mut mass = 0.0;
    for (k, p) in MeasuredWalk::new(u, x, y).take(k_max).enumerate() {
        value += (k + 1) as f64 * p;
        mass += p;
    }
    let unaccounted_mass = 1.0 - mass;
    Ok(ExpectedHitting { value, unaccounted_mass, converged: unaccounted_mass <= tail_tol })
}

/// Stop-probabilities p_k = |y* U ((I-yy*)U)^{k-1} x|^2 for k = 1, 2, ...
struct MeasuredWalk<'a> {
    u: &'a TransitionUnitary,
    y: &'a CVector,
    state: CVector,
}

impl<'a> MeasuredWalk<'a> {
    fn new(u: &'a TransitionUnitary, x: &CVector, y: &'a CVector) -> Self {
        MeasuredWalk { u, y, state: x.clone() }
    }
}

impl Iterator for MeasuredWalk<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let moved = self.u.matrix() * &self.state;
        let amp = self.y.dotc(&moved);
        self.state = moved - self.y * amp;
        Some(amp.norm_sqr())
    }
}

/// Mixing-time bound (2l/eps) sum_{r != s} 1/|lambda_r - lambda_s| over
/// ordered pairs of eigenvalue groups.
pub fn mixing_time_bound_coarse(sd: &SpectralDecomposition, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let sum = pair_sum(sd, |_, _| 1.0);
    Ok(2.0 * sd.dim() as f64 / eps * sum)
}

/// Mixing-time bound (2/eps) sum_{r != s} sum_j
/// sqrt((F_r)_jj (F_s)_jj) / |lambda_r - lambda_s| over ordered pairs.
pub fn mixing_time_bound_fine(sd: &SpectralDecomposition, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let l = sd.dim();
    let diags: Vec<Vec<f64>> = sd
        .groups()
        .iter()
        .map(|g| (0..l).map(|j| g.projector()[(j, j)].re.max(0.0)).collect())
        .collect();
    let sum = pair_sum(sd, |r, s| {
        (0..l).map(|j| (diags[r][j] * diags[s][j]).sqrt()).sum::<f64>()
    });
    Ok(2.0 / eps * sum)
}

fn pair_sum(sd: &SpectralDecomposition, numerator: impl Fn(usize, usize) -> f64) -> f64 {
    let groups = sd.groups();
    let mut sum = 0.0;
    for r in 0..groups.len() {
        for s in 0..groups.len() {
            if r == s {
                continue;
            }
            let lr = Complex64::from_polar(1.0, groups[r].theta());
            let ls = Complex64::from_polar(1.0, groups[s].theta());
            sum += numerator(r, s) / (lr - ls).norm();
        }
    }
    sum
}
