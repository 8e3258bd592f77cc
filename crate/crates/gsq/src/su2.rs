//! Closed-form kernels for the defining representation of SU(2).
//!
//! The Killing-orthonormal basis is X_k = -i sigma_k / (2 sqrt(2)), so a
//! coordinate vector w gives the rotation exp(sum_k w_k X_k) by the angle
//! |w| / (2 sqrt(2)) about w-hat. These closed forms keep group sampling and
//! coherent-state evaluation free of general matrix exponentials.

use ndarray::Array2;
use num_complex::Complex64;

use crate::linalg::{c, dagger, eye, fro_norm};
use crate::{Error, Result};

/// |w| -> rotation angle conversion factor for the orthonormal basis.
pub fn rotation_angle(wnorm: f64) -> f64 {
    wnorm / (2.0 * 2.0f64.sqrt())
}

/// Coordinates of the central element -I: exp of this equals -identity.
pub fn minus_identity_coords() -> Vec<f64> {
    vec![0.0, 0.0, 2.0 * 2.0f64.sqrt() * std::f64::consts::PI]
}

/// exp(sum_k w_k X_k) in closed form.
pub fn exp_coords(w: &[f64]) -> Array2<Complex64> {
    assert_eq!(w.len(), 3);
    let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    if n < 1e-300 {
        return eye(2);
    }
    let theta = rotation_angle(n);
    let (s, co) = theta.sin_cos();
    let f = s / n;
    let (x, y, z) = (w[0] * f, w[1] * f, w[2] * f);
    // cos(theta) I - i sin(theta) (w-hat . sigma)
    ndarray::array![
        [c(co, -z), c(-y, -x)],
        [c(y, -x), c(co, z)]
    ]
}

/// Exponential factorization of an SU(2) element: u = prod_i exp_coords(f_i).
///
/// One factor in general; near the center a leading -I factor keeps the
/// remaining logarithm well conditioned.
pub fn defining_log(u: &Array2<Complex64>) -> Result<Vec<Vec<f64>>> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(Error::LogFailure("expected a 2x2 matrix".into()));
    }
    let unitary_defect = fro_norm(&(&u.dot(&dagger(u)) - &eye(2)));
    let det = u[[0, 0]] * u[[1, 1]] - u[[0, 1]] * u[[1, 0]];
    if unitary_defect > 1e-8 || (det - 1.0).norm() > 1e-8 {
        return Err(Error::LogFailure(format!(
            "not special unitary (defect {unitary_defect:.2e}, det {det})"
        )));
    }
    let t = 0.5 * (u[[0, 0]] + u[[1, 1]]).re;
    let flip = t < -0.9;
    let v = if flip { u.mapv(|z| -z) } else { u.clone() };
    let tv = (0.5 * (v[[0, 0]] + v[[1, 1]]).re).clamp(-1.0, 1.0);
    let theta = tv.acos();
    // (v - v^dag)/2 = -i sin(theta) (n-hat . sigma)
    let a01 = 0.5 * (v[[0, 1]] - v[[1, 0]].conj());
    let a00 = 0.5 * (v[[0, 0]] - v[[0, 0]].conj());
    let sn = [-a01.im, -a01.re, -a00.im];
    let s = theta.sin();
    let factor = if s > 1e-12 { theta / s } else { 1.0 };
    let scale = 2.0 * 2.0f64.sqrt() * factor;
    let w = vec![scale * sn[0], scale * sn[1], scale * sn[2]];
    let rebuilt = exp_coords(&w);
    let rebuilt = if flip { rebuilt.mapv(|z| -z) } else { rebuilt };
    if fro_norm(&(&rebuilt - u)) > 1e-8 {
        return Err(Error::LogFailure("closed-form log failed to reproduce input".into()));
    }
    if flip {
        Ok(vec![minus_identity_coords(), w])
    } else {
        Ok(vec![w])
    }
}

/// Monomial evaluator for pi_j(g) applied to the highest-weight vector:
/// entry k of the coherent column is sqrt(C(2j,k)) a0^{2j-k} a1^k where
/// (a0, a1) is the first column of the defining matrix.
#[derive(Debug, Clone)]
pub struct CoherentKernel {
    pub dim: usize,
    sqrt_binom: Vec<f64>,
}

impl CoherentKernel {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        let n = dim - 1;
        let mut binom = vec![1.0f64; dim];
        for k in 0..n {
            binom[k + 1] = binom[k] * (n - k) as f64 / (k + 1) as f64;
        }
        CoherentKernel {
            dim,
            sqrt_binom: binom.iter().map(|b| b.sqrt()).collect(),
        }
    }

    pub fn column_into(&self, a0: Complex64, a1: Complex64, out: &mut [Complex64]) {
        assert_eq!(out.len(), self.dim);
        let n = (self.dim - 1) as u32;
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.sqrt_binom[k] * a0.powu(n - k as u32) * a1.powu(k as u32);
        }
    }

    pub fn column(&self, a0: Complex64, a1: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.dim];
        self.column_into(a0, a1, &mut out);
        out
    }
}
