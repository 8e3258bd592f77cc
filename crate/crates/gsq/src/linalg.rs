//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here operates on `ndarray::Array2<Complex64>`. The sizes involved
//! are small (at most a few hundred), so robustness and reproducibility matter
//! more than asymptotics: the eigensolver is a cyclic Jacobi sweep, the
//! exponential is scaling-and-squaring with the degree-13 Pade approximant, and
//! linear systems go through partial-pivot elimination.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::{Error, Result};

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Identity matrix of size n.
pub fn eye(n: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<Complex64>) -> Array2<Complex64> {
    let (n, m) = a.dim();
    Array2::from_shape_fn((m, n), |(i, j)| a[[j, i]].conj())
}

/// tr(A).
pub fn trace(a: &Array2<Complex64>) -> Complex64 {
    let n = a.nrows().min(a.ncols());
    (0..n).map(|i| a[[i, i]]).sum()
}

/// Frobenius norm.
pub fn fro_norm(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute row sum (operator 1-norm of the transpose; standard expm scale control).
pub fn one_norm(a: &Array2<Complex64>) -> f64 {
    let (n, m) = a.dim();
    let mut best = 0.0f64;
    for j in 0..m {
        let mut s = 0.0;
        for i in 0..n {
            s += a[[i, j]].norm();
        }
        best = best.max(s);
    }
    best
}

/// Hermitian deviation ||A - A^dag||_F.
pub fn herm_defect(a: &Array2<Complex64>) -> f64 {
    fro_norm(&(a - &dagger(a)))
}

/// Matrix exponential by scaling-and-squaring with the degree-13 Pade approximant.
///
/// For the matrices this crate produces (norms up to a few tens after scaling)
/// the result is accurate to about 1e-12 relative error, which the tests pin.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    // Degree-13 Pade coefficients.
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    // theta_13 for double precision.
    const THETA13: f64 = 5.371920351148152;
    let norm = one_norm(a);
    let mut s = 0u32;
    let mut scaled = a.clone();
    if norm > THETA13 {
        s = ((norm / THETA13).log2().ceil()).max(0.0) as u32;
        let factor = Complex64::new((0.5f64).powi(s as i32), 0.0);
        scaled = a.mapv(|z| z * factor);
    }
    let a2 = scaled.dot(&scaled);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let id = eye(n);
    // u = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = a6.mapv(|z| z * B[13]) + &a4.mapv(|z| z * B[11]) + &a2.mapv(|z| z * B[9]);
    let w2 = a6.mapv(|z| z * B[7])
        + &a4.mapv(|z| z * B[5])
        + &a2.mapv(|z| z * B[3])
        + &id.mapv(|z| z * B[1]);
    let u = scaled.dot(&(a6.dot(&w1) + &w2));
    // v = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let z1 = a6.mapv(|z| z * B[12]) + &a4.mapv(|z| z * B[10]) + &a2.mapv(|z| z * B[8]);
    let z2 = a6.mapv(|z| z * B[6])
        + &a4.mapv(|z| z * B[4])
        + &a2.mapv(|z| z * B[2])
        + &id.mapv(|z| z * B[0]);
    let v = a6.dot(&z1) + &z2;
    // (v - u) r = (v + u)
    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut r = solve(&lhs, &rhs).expect("Pade denominator is singular");
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

/// Solve A X = B by partial-pivot Gaussian elimination.
pub fn solve(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::ShapeMismatch(format!(
            "solve: a is {}x{}, b has {} rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    let m = b.ncols();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        // Pivot on the largest remaining entry in column k.
        let mut p = k;
        let mut best = lu[[k, k]].norm();
        for i in (k + 1)..n {
            let v = lu[[i, k]].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(Error::DimensionMismatch("solve: singular matrix".into()));
        }
        if p != k {
            for j in 0..n {
                let t = lu[[k, j]];
                lu[[k, j]] = lu[[p, j]];
                lu[[p, j]] = t;
            }
            for j in 0..m {
                let t = x[[k, j]];
                x[[k, j]] = x[[p, j]];
                x[[p, j]] = t;
            }
        }
        let piv = lu[[k, k]];
        for i in (k + 1)..n {
            let f = lu[[i, k]] / piv;
            if f.norm() == 0.0 {
                continue;
            }
            lu[[i, k]] = f;
            for j in (k + 1)..n {
                let lkj = lu[[k, j]];
                lu[[i, j]] = lu[[i, j]] - f * lkj;
            }
            for j in 0..m {
                let t = x[[k, j]];
                x[[i, j]] = x[[i, j]] - f * t;
            }
        }
    }
    // Back substitution.
    for j in 0..m {
        for i in (0..n).rev() {
            let mut s = x[[i, j]];
            for k2 in (i + 1)..n {
                s -= lu[[i, k2]] * x[[k2, j]];
            }
            x[[i, j]] = s / lu[[i, i]];
        }
    }
    Ok(x)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues ascending and the unitary V with A = V diag(w) V^dag.
pub fn eigh(a: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch("eigh: not square".into()));
    }
    let defect = herm_defect(a);
    let scale = fro_norm(a).max(1.0);
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian(format!("defect {defect:.3e}")));
    }
    let mut m = a.clone();
    // Symmetrize to kill roundoff-level drift before iterating.
    let md = dagger(&m);
    m = (&m + &md).mapv(|z| z * 0.5);
    let mut v = eye(n);
    let tol = 1e-14 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                // Phase that makes the pivot real, then a real Jacobi rotation.
                let phase = apq / apq.norm();
                let g = apq.norm();
                let theta = 0.5 * (2.0 * g).atan2(aqq - app);
                let (sn, cs) = theta.sin_cos();
                // Columns of the rotation acting on (p, q):
                // new_p = cs * p - sn * conj(phase) * q ; new_q = sn * phase * p + cs * q
                let cpq = phase.conj();
                for i in 0..n {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = mip * cs - miq * cpq * sn;
                    m[[i, q]] = mip * phase * sn + miq * cs;
                }
                for j in 0..n {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = mpj * cs - mqj * phase * sn;
                    m[[q, j]] = mpj * cpq * sn + mqj * cs;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * cs - viq * cpq * sn;
                    v[[i, q]] = vip * phase * sn + viq * cs;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let w: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
    let ws = Array1::from_iter(order.iter().map(|&i| w[i]));
    let vs = Array2::from_shape_fn((n, n), |(i, j)| v[[i, order[j]]]);
    Ok((ws, vs))
}

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on P_n from the Chebyshev-based initial guess; exact for
/// polynomials of degree <= 2n - 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for k in 0..(n + 1) / 2 {
        // Initial guess (Tricomi-style).
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by upward recurrence.
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

/// Commutator [A, B].
pub fn comm(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) - b.dot(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64, scale: f64) -> Array2<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * scale
        })
    }

    fn random_hermitian(n: usize, seed: u64) -> Array2<Complex64> {
        let a = random_matrix(n, seed, 1.0);
        (&a + &dagger(&a)).mapv(|z| z * 0.5)
    }

    #[test]
    fn expm_matches_series_small_norm() {
        let a = random_matrix(5, 7, 0.05);
        // Plain Taylor series converges fast at this norm.
        let mut term = eye(5);
        let mut sum = eye(5);
        for k in 1..40 {
            term = term.dot(&a).mapv(|z| z / k as f64);
            sum = sum + &term;
        }
        let e = expm(&a);
        assert!(fro_norm(&(&e - &sum)) < 1e-13);
    }

    #[test]
    fn expm_block_diagonal_2x2() {
        // exp of [[0, t], [-t, 0]] is a rotation; check against cos/sin.
        let t = 1.3f64;
        let a = array![
            [c(0.0, 0.0), c(t, 0.0)],
            [c(-t, 0.0), c(0.0, 0.0)]
        ];
        let e = expm(&a);
        assert_abs_diff_eq!(e[[0, 0]].re, t.cos(), epsilon = 1e-13);
        assert_abs_diff_eq!(e[[0, 1]].re, t.sin(), epsilon = 1e-13);
        assert_abs_diff_eq!(e[[1, 0]].re, -t.sin(), epsilon = 1e-13);
        assert!(e[[0, 0]].im.abs() < 1e-14);
    }

    #[test]
    fn expm_group_law_large_norm() {
        // exp((s+t)A) = exp(sA) exp(tA) exercises the squaring phase.
        let a = random_matrix(8, 21, 2.0);
        let e1 = expm(&a.mapv(|z| z * 1.7));
        let e2 = expm(&a.mapv(|z| z * 2.3));
        let e3 = expm(&a.mapv(|z| z * 4.0));
        let rel = fro_norm(&(&e1.dot(&e2) - &e3)) / fro_norm(&e3);
        assert!(rel < 1e-12, "relative error {rel:.3e}");
    }

    #[test]
    fn expm_skew_hermitian_is_unitary() {
        let h = random_hermitian(6, 3);
        let a = h.mapv(|z| z * Complex64::new(0.0, -1.0) * 8.0);
        let u = expm(&a);
        let id = u.dot(&dagger(&u));
        assert!(fro_norm(&(&id - &eye(6))) < 1e-12);
    }

    #[test]
    fn solve_roundtrip() {
        let a = random_matrix(9, 11, 1.0) + &eye(9).mapv(|z| z * 3.0);
        let b = random_matrix(9, 12, 1.0);
        let x = solve(&a, &b).unwrap();
        assert!(fro_norm(&(&a.dot(&x) - &b)) < 1e-11);
    }

    #[test]
    fn eigh_reconstructs_and_is_unitary() {
        for seed in [1u64, 2, 5] {
            let a = random_hermitian(12, seed);
            let (w, v) = eigh(&a).unwrap();
            let d = Array2::from_shape_fn((12, 12), |(i, j)| {
                if i == j {
                    c(w[i], 0.0)
                } else {
                    c(0.0, 0.0)
                }
            });
            let rec = v.dot(&d).dot(&dagger(&v));
            assert!(fro_norm(&(&rec - &a)) < 1e-12);
            assert!(fro_norm(&(&v.dot(&dagger(&v)) - &eye(12))) < 1e-12);
            for i in 1..12 {
                assert!(w[i] >= w[i - 1]);
            }
        }
    }

    #[test]
    fn eigh_known_spectrum() {
        // Pauli-like matrix with eigenvalues -1, 1.
        let a = array![
            [c(0.0, 0.0), c(0.0, -1.0)],
            [c(0.0, 1.0), c(0.0, 0.0)]
        ];
        let (w, _) = eigh(&a).unwrap();
        assert_abs_diff_eq!(w[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let a = random_matrix(4, 9, 1.0);
        assert!(eigh(&a).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 3, 5, 8, 16] {
            let (x, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
            // Monomial moments up to degree 2n-1: int_{-1}^1 x^k dx.
            for k in 0..(2 * n) {
                let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert_abs_diff_eq!(num, exact, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn gauss_legendre_smooth_function() {
        let (x, w) = gauss_legendre(24);
        let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.cos()).sum();
        assert_abs_diff_eq!(num, 2.0 * (1.0f64).sin(), epsilon = 1e-14);
    }
}
