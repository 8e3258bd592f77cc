//! Haar quadrature on SU(2), orbit functions, the quantization map, and
//! unitary evolution.
//!
//! The quadrature is an Euler-angle product rule: uniform grids in the two
//! circle angles and Gauss-Legendre in the polar cosine. With K1 = order+1
//! azimuthal points, K2 = 2*order+1 fiber points, and ceil((order+1)/2) polar
//! nodes, every matrix coefficient of a block j <= order integrates exactly:
//! the fiber grid kills all nonzero column weights (every half-integer block
//! dies there), the azimuthal grid kills nonzero row weights, and the
//! surviving d^j_00 = P_j(cos theta) is Gauss-exact.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::harmonic;
use crate::lie::Weight;
use crate::linalg::{c, dagger, eigh, expm, fro_norm, gauss_legendre, herm_defect};
use crate::repr::{coherent_column, tilde_function, GroupElement, Irrep};
use crate::su2;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct HaarQuadrature {
    pub order: usize,
    pub nodes: Vec<GroupElement>,
    /// Positive, summing to one.
    pub weights: Vec<f64>,
    /// Euler angles (phi, theta, psi) per node.
    pub angles: Vec<[f64; 3]>,
    /// Distinct polar angles, for callers that cache per-theta work.
    pub theta_values: Vec<f64>,
    /// Node index -> index into theta_values.
    pub theta_index: Vec<usize>,
}

/// Product-rule Haar quadrature, exact on matrix coefficients of blocks
/// j <= order.
pub fn haar_quadrature(order: usize) -> HaarQuadrature {
    assert!(order >= 1);
    let k1 = order + 1;
    let k2 = 2 * order + 1;
    let n_gl = (order + 2) / 2;
    let (xs, ws) = gauss_legendre(n_gl);
    let theta_values: Vec<f64> = xs.iter().map(|x| x.acos()).collect();
    let sqrt2 = 2.0f64.sqrt();
    let mut nodes = Vec::with_capacity(k1 * n_gl * k2);
    let mut weights = Vec::with_capacity(k1 * n_gl * k2);
    let mut angles = Vec::with_capacity(k1 * n_gl * k2);
    let mut theta_index = Vec::with_capacity(k1 * n_gl * k2);
    for a in 0..k1 {
        let phi = 2.0 * std::f64::consts::PI * a as f64 / k1 as f64;
        let u_phi = su2::exp_coords(&[0.0, 0.0, phi * sqrt2]);
        for (i, &theta) in theta_values.iter().enumerate() {
            let u_phi_theta = u_phi.dot(&su2::exp_coords(&[0.0, theta * sqrt2, 0.0]));
            for b in 0..k2 {
                let psi = 4.0 * std::f64::consts::PI * b as f64 / k2 as f64;
                let u = u_phi_theta.dot(&su2::exp_coords(&[0.0, 0.0, psi * sqrt2]));
                let factors = vec![
                    vec![0.0, 0.0, phi * sqrt2],
                    vec![0.0, theta * sqrt2, 0.0],
                    vec![0.0, 0.0, psi * sqrt2],
                ];
                nodes.push(GroupElement { u, factors: Some(factors) });
                weights.push(ws[i] / (2.0 * (k1 * k2) as f64));
                angles.push([phi, theta, psi]);
                theta_index.push(i);
            }
        }
    }
    HaarQuadrature { order, nodes, weights, angles, theta_values, theta_index }
}

impl HaarQuadrature {
    /// Quadrature integral of a scalar function given per-node.
    pub fn integrate<F: FnMut(&GroupElement) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut s = Complex64::default();
        for (g, w) in self.nodes.iter().zip(&self.weights) {
            s += f(g) * *w;
        }
        s
    }
}

/// A real function on the coherent orbit, specified through its lift
/// h-hat(g) = h(g . E_lambda), evaluated from the coherent column.
#[derive(Debug, Clone)]
pub enum OrbitFunction {
    Zero,
    Constant(f64),
    /// h(P) = tr(A P) with A Hermitian.
    Linear(Array2<Complex64>),
    /// h(P) = tr(B P)^2 with B Hermitian.
    Quadratic(Array2<Complex64>),
}

impl OrbitFunction {
    /// h-hat from the coherent column w = pi(g) v_lambda.
    pub fn eval_column(&self, w: &[Complex64]) -> f64 {
        match self {
            OrbitFunction::Zero => 0.0,
            OrbitFunction::Constant(v) => *v,
            OrbitFunction::Linear(a) => quadratic_form(a, w),
            OrbitFunction::Quadratic(b) => {
                let t = quadratic_form(b, w);
                t * t
            }
        }
    }

    pub fn eval(&self, r: &Irrep, g: &GroupElement) -> Result<f64> {
        match self {
            OrbitFunction::Zero => Ok(0.0),
            OrbitFunction::Constant(v) => Ok(*v),
            _ => {
                let col = coherent_column(r, g)?;
                Ok(self.eval_column(col.as_slice().unwrap()))
            }
        }
    }

    /// Largest block the lift can touch: products of coherent columns of spin
    /// j decompose into blocks up to 2j (4j for the squared variant).
    pub fn band(&self, r: &Irrep) -> usize {
        let two_j = r.dim - 1;
        match self {
            OrbitFunction::Zero | OrbitFunction::Constant(_) => 0,
            OrbitFunction::Linear(_) => two_j,
            OrbitFunction::Quadratic(_) => 2 * two_j,
        }
    }

    /// Sup norm of the lift over the orbit. Exact for constants and for
    /// spin-1/2 linear lifts (coherent states exhaust the unit sphere there);
    /// otherwise a dense sphere sample with a safety-free honest label.
    pub fn sup_norm(&self, r: &Irrep) -> f64 {
        match self {
            OrbitFunction::Zero => 0.0,
            OrbitFunction::Constant(v) => v.abs(),
            OrbitFunction::Linear(a) if r.dim == 2 => {
                let (w, _) = eigh(a).expect("orbit matrix must be Hermitian");
                w[0].abs().max(w[w.len() - 1].abs())
            }
            OrbitFunction::Linear(_) | OrbitFunction::Quadratic(_) => self.sphere_sup(r),
        }
    }

    fn sphere_sup(&self, r: &Irrep) -> f64 {
        // Coherent states of SU(2) are parametrized by the sphere; sample it.
        let kernel = su2::CoherentKernel::new(r.dim);
        let mut best = 0.0f64;
        let n_t = 181;
        let n_p = 256;
        let mut col = vec![Complex64::default(); r.dim];
        for it in 0..n_t {
            let theta = std::f64::consts::PI * it as f64 / (n_t - 1) as f64;
            let (s, co) = (0.5 * theta).sin_cos();
            for ip in 0..n_p {
                let phi = 2.0 * std::f64::consts::PI * ip as f64 / n_p as f64;
                let a0 = c(co, 0.0);
                let a1 = c(s * phi.cos(), s * phi.sin());
                kernel.column_into(a0, a1, &mut col);
                best = best.max(self.eval_column(&col).abs());
            }
        }
        best
    }
}

fn quadratic_form(a: &Array2<Complex64>, w: &[Complex64]) -> f64 {
    let n = w.len();
    let mut s = Complex64::default();
    for i in 0..n {
        for j in 0..n {
            s += w[i].conj() * a[[i, j]] * w[j];
        }
    }
    s.re
}

/// Random Hermitian matrix with entries of the given scale, for test h's.
pub fn random_hermitian(dim: usize, rng: &mut impl rand::Rng, scale: f64) -> Array2<Complex64> {
    let mut a = Array2::default((dim, dim));
    for i in 0..dim {
        a[[i, i]] = c((rng.gen::<f64>() - 0.5) * 2.0 * scale, 0.0);
        for j in (i + 1)..dim {
            let z = c(
                (rng.gen::<f64>() - 0.5) * scale,
                (rng.gen::<f64>() - 0.5) * scale,
            );
            a[[i, j]] = z;
            a[[j, i]] = z.conj();
        }
    }
    a
}

/// Q(h) = d_lambda * integral of h-hat(g) (g . E_lambda) dg.
pub fn gs_quantize(r: &Irrep, h: &OrbitFunction, quad: &HaarQuadrature) -> Array2<Complex64> {
    let kernel = su2::CoherentKernel::new(r.dim);
    let mut q: Array2<Complex64> = Array2::default((r.dim, r.dim));
    let mut col = vec![Complex64::default(); r.dim];
    for (g, w) in quad.nodes.iter().zip(&quad.weights) {
        kernel.column_into(g.u[[0, 0]], g.u[[1, 0]], &mut col);
        let hv = h.eval_column(&col);
        let f = hv * w * r.dim as f64;
        for i in 0..r.dim {
            for j in 0..r.dim {
                q[[i, j]] += col[i] * col[j].conj() * f;
            }
        }
    }
    q
}

/// E_lambda(f) = integral of f(g) |g.v_lambda><g.v_lambda| dg for a scalar
/// function on the group.
pub fn elambda_of_f<F: FnMut(&GroupElement) -> Complex64>(
    r: &Irrep,
    mut f: F,
    quad: &HaarQuadrature,
) -> Array2<Complex64> {
    let kernel = su2::CoherentKernel::new(r.dim);
    let mut q: Array2<Complex64> = Array2::default((r.dim, r.dim));
    let mut col = vec![Complex64::default(); r.dim];
    for (g, w) in quad.nodes.iter().zip(&quad.weights) {
        kernel.column_into(g.u[[0, 0]], g.u[[1, 0]], &mut col);
        let fv = f(g) * *w;
        for i in 0..r.dim {
            for j in 0..r.dim {
                q[[i, j]] += col[i] * col[j].conj() * fv;
            }
        }
    }
    q
}

/// The canonical intertwiner from an irrep into the truncation: column k
/// holds the coefficients of the function g -> sqrt(d) <pi(g) v_lambda|e_k>.
/// Exact when the quadrature resolves products of the cutoff with the block.
pub fn tilde_embedding(
    pw: &harmonic::PeterWeylTruncation,
    lambda: &Weight,
    quad: &HaarQuadrature,
    table: &harmonic::BasisTable,
) -> Result<Array2<Complex64>> {
    let r = &pw.blocks[pw.block_of_weight(lambda)?];
    let mut w: Array2<Complex64> = Array2::default((pw.total_dim, r.dim));
    for k in 0..r.dim {
        let mut v: Array1<Complex64> = Array1::default(r.dim);
        v[k] = c(1.0, 0.0);
        let vals: Vec<Complex64> = quad
            .nodes
            .iter()
            .map(|g| tilde_function(r, &v, g))
            .collect::<Result<_>>()?;
        let mut it = vals.into_iter();
        let coeffs = harmonic::project_function(pw, quad, table, |_| it.next().unwrap())?;
        for i in 0..pw.total_dim {
            w[[i, k]] = coeffs[i];
        }
    }
    Ok(w)
}

pub struct ProjectedQuantization {
    pub matrix: Array2<Complex64>,
    /// Set when the lift's band pushes products of ground functions past the
    /// cutoff, so the multiplication operator truncates part of them.
    pub truncated: bool,
}

/// Q(h) as the compression of the multiplication operator by h-hat to the
/// embedded copy of the irrep inside the truncation, written in the tilde
/// basis so it compares entry by entry with gs_quantize. The quadrature
/// should have order at least exact_mult_order(cutoff, band of h).
pub fn project_quantize(
    pw: &harmonic::PeterWeylTruncation,
    lambda: &Weight,
    h: &OrbitFunction,
    quad: &HaarQuadrature,
    table: &harmonic::BasisTable,
) -> Result<ProjectedQuantization> {
    let bi = pw.block_of_weight(lambda)?;
    let r = pw.blocks[bi].clone();
    let w = tilde_embedding(pw, lambda, quad, table)?;
    let band = h.band(&r);
    let hv: Vec<f64> = quad
        .nodes
        .iter()
        .map(|g| h.eval(&r, g))
        .collect::<Result<_>>()?;
    let mut it = hv.into_iter();
    let mult = harmonic::multiplication_operator(
        pw,
        quad,
        table,
        |_| c(it.next().unwrap(), 0.0),
        Some(band),
    )?;
    let full = mult.op.to_full(pw);
    let matrix = dagger(&w).dot(&full).dot(&w);
    let two_j = r.dim - 1;
    let truncated = two_j + 2 * band > pw.cutoff_two_j;
    Ok(ProjectedQuantization { matrix, truncated })
}

/// e^{itQ} for Hermitian Q.
pub fn unitary_evolve(q: &Array2<Complex64>, t: f64) -> Result<Array2<Complex64>> {
    let defect = herm_defect(q);
    if defect > 1e-10 * fro_norm(q).max(1.0) {
        return Err(Error::NotHermitian(format!("defect {defect:.3e}")));
    }
    Ok(expm(&q.mapv(|z| z * c(0.0, t))))
}

/// <u| e^{itQ} |v>, the matrix-exponential oracle used by the path-integral
/// experiments.
pub fn evolved_matrix_element(
    q: &Array2<Complex64>,
    t: f64,
    u: &Array1<Complex64>,
    v: &Array1<Complex64>,
) -> Result<Complex64> {
    let ev = unitary_evolve(q, t)?.dot(v);
    Ok(u.iter().zip(ev.iter()).map(|(a, b)| a.conj() * b).sum())
}
