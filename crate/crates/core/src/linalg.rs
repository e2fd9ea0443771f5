use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest entry magnitude of `m`.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deviation of `m` from unitarity, as the max-norm of m*m - I.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let gram = m.adjoint() * m;
    max_norm(&(gram - CMatrix::identity(n, n)))
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns of a
/// Hermitian matrix, computed by cyclic Jacobi rotations.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigen needs a square matrix");
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let tol = a.norm() * 1e-14;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// One Jacobi step: a unitary plane rotation on coordinates (p, q) that zeroes
/// a[(p, q)], applied as a <- J^H a J and accumulated into v <- v J.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let gamma = a[(p, q)];
    let r = gamma.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = gamma / r;
    let tau = (a[(p, p)].re - a[(q, q)].re) / (2.0 * r);
    let t = -tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = phase * (t * c);
    let n = a.nrows();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s.conj() + aqk * c;
    }
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s.conj();
        a[(k, q)] = akp * s + akq * c;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s.conj();
        v[(k, q)] = vkp * s + vkq * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Orthonormal basis of the column span of `m`, via a thin QR factorization.
pub fn orthonormalize(m: &CMatrix) -> CMatrix {
    let qr = m.clone().qr();
    let q = qr.q();
    q.columns(0, m.ncols().min(m.nrows())).into_owned()
}

/// Dense complex matrix stored as separate real and imaginary planes,
/// row-major. Repeated multiplication this way is several times faster than
/// general complex matmul, which matters for long power iterations.
#[derive(Debug, Clone)]
pub struct SplitMat {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl SplitMat {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols(), "SplitMat is for square matrices");
        let mut re = vec![0.0; n * n];
        let mut im = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                re[i * n + j] = m[(i, j)].re;
                im[i * n + j] = m[(i, j)].im;
            }
        }
        SplitMat { n, re, im }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = SplitMat { n, re: vec![0.0; n * n], im: vec![0.0; n * n] };
        for i in 0..n {
            s.re[i * n + i] = 1.0;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// out = self * rhs.
    pub fn mul_into(&self, rhs: &SplitMat, out: &mut SplitMat) {
        let n = self.n;
        assert!(rhs.n == n && out.n == n);
        out.re.fill(0.0);
        out.im.fill(0.0);
        for i in 0..n {
            for k in 0..n {
                let ar = self.re[i * n + k];
                let ai = self.im[i * n + k];
                let brow_re = &rhs.re[k * n..(k + 1) * n];
                let brow_im = &rhs.im[k * n..(k + 1) * n];
                let crow_re = &mut out.re[i * n..(i + 1) * n];
                for (c, (&br, &bi)) in crow_re.iter_mut().zip(brow_re.iter().zip(brow_im)) {
                    *c += ar * br - ai * bi;
                }
                let crow_im = &mut out.im[i * n..(i + 1) * n];
                for (c, (&br, &bi)) in crow_im.iter_mut().zip(brow_re.iter().zip(brow_im)) {
                    *c += ar * bi + ai * br;
                }
            }
        }
    }

    /// acc[i*n+j] += |self[i,j]|^2.
    pub fn accumulate_abs2(&self, acc: &mut [f64]) {
        for ((a, &r), &i) in acc.iter_mut().zip(&self.re).zip(&self.im) {
            *a += r * r + i * i;
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |i, j| {
            Complex64::new(self.re[i * self.n + j], self.im[i * self.n + j])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unitarity_defect_detects_non_unitary() {
        let id = CMatrix::identity(3, 3);
        assert!(unitarity_defect(&id) < 1e-15);
        let double = &id * c(2.0, 0.0);
        assert!(unitarity_defect(&double) > 1.0);
    }

    #[test]
    fn hermitian_eigen_sorts_and_diagonalizes() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(2.0, 0.0)],
        );
        let (values, vectors) = hermitian_eigen(&m);
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] - 3.0).abs() < 1e-12);
        let recon = &vectors
            * CMatrix::from_diagonal(&CVector::from_iterator(
                2,
                values.iter().map(|&v| c(v, 0.0)),
            ))
            * vectors.adjoint();
        assert!(max_norm(&(recon - m)) < 1e-12);
    }

    #[test]
    fn hermitian_eigen_handles_clustered_spectra() {
        let n = 12;
        let skew = CMatrix::from_fn(n, n, |i, j| {
            c(((3 * i + 7 * j) as f64).sin(), ((i * j + 5) as f64).cos())
        });
        let basis = orthonormalize(&(skew + CMatrix::identity(n, n) * c(4.0, 0.0)));
        let mut target: Vec<f64> = (0..n).map(|i| (i / 3) as f64).collect();
        target[4] += 3e-9;
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            target.iter().map(|&v| c(v, 0.0)),
        ));
        let m = &basis * diag * basis.adjoint();
        let (values, vectors) = hermitian_eigen(&m);
        target.sort_by(f64::total_cmp);
        for (got, want) in values.iter().zip(&target) {
            assert!((got - want).abs() < 1e-12);
        }
        let lam = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            values.iter().map(|&v| c(v, 0.0)),
        ));
        assert!(max_norm(&(&m * &vectors - &vectors * lam)) < 1e-13);
        let gram = vectors.adjoint() * &vectors;
        assert!(max_norm(&(gram - CMatrix::identity(n, n))) < 1e-13);
    }

    #[test]
    fn orthonormalize_fixes_skewed_columns() {
        let m = CMatrix::from_row_slice(
            3,
            2,
            &[
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 1e-8),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        let q = orthonormalize(&m);
        let gram = q.adjoint() * &q;
        assert!(max_norm(&(gram - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn split_multiplication_matches_nalgebra() {
        let a = CMatrix::from_fn(5, 5, |i, j| c(((i * j) as f64).sin(), (i + j) as f64));
        let b = CMatrix::from_fn(5, 5, |i, j| c((i + 2 * j) as f64, (i as f64) - 1.0));
        let sa = SplitMat::from_matrix(&a);
        let sb = SplitMat::from_matrix(&b);
        let mut out = SplitMat::identity(5);
        sa.mul_into(&sb, &mut out);
        assert!(max_norm(&(out.to_matrix() - &a * &b)) < 1e-10);
        let mut acc = vec![0.0; 25];
        sa.accumulate_abs2(&mut acc);
        assert!((acc[7] - a[(1, 2)].norm_sqr()).abs() < 1e-12);
    }
}
