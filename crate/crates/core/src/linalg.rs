//! Dense complex matrix plumbing shared by the physics modules.
//!
//! Matrices are plain `ndarray` arrays; the spins handled here stay small
//! enough (dim ≤ 401) that dense storage and O(n³) kernels are the right
//! tool. The one nontrivial kernel is a cyclic Jacobi eigensolver for
//! Hermitian matrices, which backs both the spin rotations and the
//! eigenphase extraction from monodromy matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Square complex matrix.
pub type CMat = Array2<C64>;
/// Complex vector.
pub type CVec = Array1<C64>;
/// Square real matrix.
pub type RMat = Array2<f64>;

/// n×n identity.
pub fn identity(n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    })
}

/// Conjugate transpose.
pub fn adjoint(a: &CMat) -> CMat {
    let (n, m) = a.dim();
    Array2::from_shape_fn((m, n), |(i, j)| a[[j, i]].conj())
}

/// Largest elementwise modulus.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Deviation of `u` from unitarity, ‖u†u − 1‖_max.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs_diff(&adjoint(u).dot(u), &identity(n))
}

/// Compensated (Kahan) sum.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary matrix whose
/// columns are the matching eigenvectors, so `a = v · diag(λ) · v†`.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen: matrix must be square");
    let mut m = a.clone();
    let mut v = identity(n);
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[[p, q]].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let r = apq.norm();
                if r <= tol * 1e-2 {
                    continue;
                }
                let phase = apq / r;
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let y = phase * s; // rotation block [[c, y], [-y̅, c]]

                // right multiplication: columns p, q of m and v
                for i in 0..n {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = mip * c - miq * y.conj();
                    m[[i, q]] = mip * y + miq * c;
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * c - viq * y.conj();
                    v[[i, q]] = vip * y + viq * c;
                }
                // left multiplication by the adjoint rotation: rows p, q of m
                for j in 0..n {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = mpj * c - mqj * y;
                    m[[q, j]] = mpj * y.conj() + mqj * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig[i]).collect();
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| v[[i, order[j]]]);
    (eigenvalues, vectors)
}

/// `exp(-i t h)` for Hermitian `h`, via its eigendecomposition.
pub fn exp_i_hermitian(h: &CMat, t: f64) -> CMat {
    let (eig, v) = hermitian_eigen(h);
    let n = h.nrows();
    let mut w = v.clone();
    for (j, lam) in eig.iter().enumerate() {
        let ph = C64::from_polar(1.0, -t * lam);
        for i in 0..n {
            w[[i, j]] *= ph;
        }
    }
    w.dot(&adjoint(&v))
}

/// Null vector of a real n×n matrix of rank n−1, from a column-pivoted
/// Householder QR factorization. The returned vector has unit Euclidean norm;
/// the overall sign is unspecified.
pub fn nullvector_qr_cp(a: &RMat) -> Array1<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "nullvector_qr_cp: matrix must be square");
    let mut r = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // pivot on the column with the largest remaining norm
        let mut best = k;
        let mut best_norm = -1.0f64;
        for j in k..n {
            let nj: f64 = (k..n).map(|i| r[[i, j]] * r[[i, j]]).sum();
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best != k {
            for i in 0..n {
                r.swap([i, k], [i, best]);
            }
            perm.swap(k, best);
        }
        // Householder reflector annihilating below the diagonal of column k
        let alpha: f64 = (k..n).map(|i| r[[i, k]] * r[[i, k]]).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let alpha = if r[[k, k]] > 0.0 { -alpha } else { alpha };
        let mut vv: Vec<f64> = (k..n).map(|i| r[[i, k]]).collect();
        vv[0] -= alpha;
        let vnorm2: f64 = vv.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let dot: f64 = (k..n).map(|i| vv[i - k] * r[[i, j]]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                r[[i, j]] -= f * vv[i - k];
            }
        }
        r[[k, k]] = alpha;
    }

    // rank n−1: last pivot ~ 0, back-substitute R[0..n-1,0..n-1] x = -R[.., n-1]
    let mut x = vec![0.0f64; n];
    x[n - 1] = 1.0;
    for i in (0..n - 1).rev() {
        let mut s = -r[[i, n - 1]];
        for j in (i + 1)..(n - 1) {
            s -= r[[i, j]] * x[j];
        }
        x[i] = s / r[[i, i]];
    }
    let mut out = Array1::zeros(n);
    for (k, &col) in perm.iter().enumerate() {
        out[col] = x[k];
    }
    let norm = out.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
    out.mapv_into(|v| v / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // diag(3, -1, 2) conjugated by a fixed unitary
        let d = Array2::from_shape_fn((3, 3), |(i, j)| {
            if i == j {
                c([3.0, -1.0, 2.0][i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let h = Array2::from_shape_fn((3, 3), |(i, j)| {
            c(0.3 * (i as f64 - j as f64), 0.7 * (i as f64 + j as f64))
        });
        let herm = &h + &adjoint(&h);
        let u = exp_i_hermitian(&herm, 0.43);
        let a = u.dot(&d).dot(&adjoint(&u));
        let (eig, v) = hermitian_eigen(&a);
        assert!((eig[0] + 1.0).abs() < 1e-12);
        assert!((eig[1] - 2.0).abs() < 1e-12);
        assert!((eig[2] - 3.0).abs() < 1e-12);
        assert!(unitarity_defect(&v) < 1e-13);
        // residual A v = v Λ
        let av = a.dot(&v);
        let vd = Array2::from_shape_fn((3, 3), |(i, j)| v[[i, j]] * eig[j]);
        assert!(max_abs_diff(&av, &vd) < 1e-12);
    }

    #[test]
    fn nullvector_of_singular_matrix() {
        // rows sum against known null vector (1, 2, 3)/norm
        let a = ndarray::arr2(&[[2.0, -1.0, 0.0], [4.0, 1.0, -2.0], [6.0, -3.0, 0.0]]);
        // construct singular matrix with null vector n by subtracting projection
        let nvec = [1.0, 2.0, 3.0];
        let mut b = a.clone();
        for i in 0..3 {
            let dot: f64 = (0..3).map(|j| a[[i, j]] * nvec[j]).sum();
            let nn: f64 = nvec.iter().map(|x| x * x).sum();
            for j in 0..3 {
                b[[i, j]] -= dot * nvec[j] / nn;
            }
        }
        let v = nullvector_qr_cp(&b);
        let scale = v[0] / nvec[0];
        for j in 0..3 {
            assert!((v[j] - scale * nvec[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn kahan_handles_cancellation() {
        let xs = vec![1e16, 1.0, -1e16];
        assert_eq!(kahan_sum(xs), 1.0);
    }
}
