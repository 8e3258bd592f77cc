//! Irreducible unitary highest-weight representations and coherent states.
//!
//! The irrep is built on a weight basis by ladder operators whose squared
//! entries telescope out of the root pairing, then every orthonormal-basis
//! generator is expanded over (T_1, E_alpha, E_{-alpha}) by Killing pairings.
//! With that construction the spin-1/2 representation reproduces the defining
//! matrices exactly, which downstream fast kernels rely on.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::lie::{dual_pairing, AlgebraModel, CartanRootData, Weight};
use crate::linalg::{c, dagger, expm, eye};
use crate::su2;
use crate::{Error, Result};

/// A group element in the defining representation, with an optional
/// exponential factorization used for lifting into irreps.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub u: Array2<Complex64>,
    /// u = prod_i exp(sum_k factors[i][k] X_k) when present.
    pub factors: Option<Vec<Vec<f64>>>,
}

impl GroupElement {
    pub fn identity(nu: usize) -> Self {
        GroupElement { u: eye(nu), factors: Some(Vec::new()) }
    }

    pub fn from_matrix(u: Array2<Complex64>) -> Self {
        GroupElement { u, factors: None }
    }

    pub fn from_factors(algebra: &AlgebraModel, factors: Vec<Vec<f64>>) -> Self {
        let mut u = eye(algebra.matrix_dim);
        for f in &factors {
            u = u.dot(&expm(&real_combination(algebra, f)));
        }
        GroupElement { u, factors: Some(factors) }
    }

    pub fn product(&self, other: &GroupElement) -> GroupElement {
        let factors = match (&self.factors, &other.factors) {
            (Some(a), Some(b)) => {
                let mut f = a.clone();
                f.extend(b.iter().cloned());
                Some(f)
            }
            _ => None,
        };
        GroupElement { u: self.u.dot(&other.u), factors }
    }

    pub fn inverse(&self) -> GroupElement {
        let factors = self.factors.as_ref().map(|fs| {
            fs.iter()
                .rev()
                .map(|f| f.iter().map(|x| -x).collect())
                .collect()
        });
        GroupElement { u: dagger(&self.u), factors }
    }
}

fn real_combination(algebra: &AlgebraModel, w: &[f64]) -> Array2<Complex64> {
    let coords: Vec<Complex64> = w.iter().map(|&x| c(x, 0.0)).collect();
    algebra.from_coords(&coords)
}

/// An irreducible unitary highest-weight representation.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub lambda: Weight,
    pub dim: usize,
    /// d_pi(X_k), one per orthonormal-basis element; anti-Hermitian.
    pub generators: Vec<Array2<Complex64>>,
    /// d_pi(T_i); Hermitian diagonal in the weight basis.
    pub cartan_action: Vec<Array2<Complex64>>,
    /// d_pi(E_alpha) (raising toward the highest weight).
    pub ladder_plus: Array2<Complex64>,
    /// d_pi(E_{-alpha}) = -ladder_plus^dagger.
    pub ladder_minus: Array2<Complex64>,
    /// d_pi(E_alpha^*) = ladder_plus^dagger.
    pub ladder_star: Array2<Complex64>,
    /// Basis vector 0: the highest-weight vector.
    pub hw_vector: Array1<Complex64>,
    /// Weight of basis vector k (lambda - k*alpha).
    pub weights: Vec<Weight>,
    /// (lambda+rho, lambda+rho) - (rho, rho); the Casimir eigenvalue.
    pub casimir_scalar: f64,
    algebra: AlgebraModel,
}

/// Build the irrep with highest weight lambda by the ladder construction.
pub fn build_irrep(
    lambda: &Weight,
    algebra: &AlgebraModel,
    cartan: &CartanRootData,
) -> Result<Irrep> {
    if cartan.rank != 1 {
        return Err(Error::UnsupportedRank(format!("rank {}", cartan.rank)));
    }
    let alpha = &cartan.positive_roots[0];
    let aa = dual_pairing(alpha, alpha, cartan);
    let la = dual_pairing(lambda, alpha, cartan);
    let dynkin = 2.0 * la / aa;
    let rounded = dynkin.round();
    if rounded < -0.5 || (dynkin - rounded).abs() > 1e-9 {
        return Err(Error::NonDominantWeight(format!(
            "pairing with the coroot is {dynkin}, not a nonnegative integer"
        )));
    }
    let dim = rounded as usize + 1;
    let weights: Vec<Weight> = (0..dim)
        .map(|k| lambda.plus(&alpha.scaled(-(k as f64))))
        .collect();
    let cartan_action: Vec<Array2<Complex64>> = (0..cartan.rank)
        .map(|i| {
            Array2::from_shape_fn((dim, dim), |(p, q)| {
                if p == q {
                    c(weights[p].coords[i], 0.0)
                } else {
                    Complex64::default()
                }
            })
        })
        .collect();
    let wv = &cartan.weyl_vectors[0];
    let kpm = algebra.killing(&wv.e_plus, &wv.e_minus).re;
    // Squared ladder entries telescope: |a_{k+1}|^2 = |a_k|^2 - kpm*(mu_k, alpha).
    let mut a2 = vec![0.0f64; dim + 1];
    for k in 0..dim {
        a2[k + 1] = a2[k] - kpm * dual_pairing(&weights[k], alpha, cartan);
    }
    // The ladder closes exactly at the lowest weight.
    assert!(
        a2[dim].abs() < 1e-9,
        "ladder failed to close: residual {}",
        a2[dim]
    );
    let mut ladder_plus: Array2<Complex64> = Array2::default((dim, dim));
    for k in 1..dim {
        ladder_plus[[k - 1, k]] = c(a2[k].max(0.0).sqrt(), 0.0);
    }
    let ladder_star = dagger(&ladder_plus);
    let ladder_minus = ladder_star.mapv(|z| -z);
    // Expand each orthonormal generator over (T_1, E_alpha, E_{-alpha}).
    let torus_norm = algebra
        .killing(&cartan.torus_basis[0], &cartan.torus_basis[0])
        .re;
    let generators: Vec<Array2<Complex64>> = algebra
        .ortho_basis
        .iter()
        .map(|x| {
            let ct = algebra.killing(x, &cartan.torus_basis[0]) / torus_norm;
            let cp = algebra.killing(x, &wv.e_minus) / kpm;
            let cm = algebra.killing(x, &wv.e_plus) / kpm;
            &cartan_action[0].mapv(|z| z * ct)
                + &ladder_plus.mapv(|z| z * cp)
                + &ladder_minus.mapv(|z| z * cm)
        })
        .collect();
    let mut hw_vector = Array1::default(dim);
    hw_vector[0] = c(1.0, 0.0);
    let lr = lambda.plus(&cartan.rho);
    let casimir_scalar = dual_pairing(&lr, &lr, cartan) - dual_pairing(&cartan.rho, &cartan.rho, cartan);
    Ok(Irrep {
        lambda: lambda.clone(),
        dim,
        generators,
        cartan_action,
        ladder_plus,
        ladder_minus,
        ladder_star,
        hw_vector,
        weights,
        casimir_scalar,
        algebra: algebra.clone(),
    })
}

impl Irrep {
    /// d_pi of an element of the complexified algebra given as a matrix.
    pub fn d_pi(&self, z: &Array2<Complex64>) -> Array2<Complex64> {
        let coords = self.algebra.coords_of(z);
        let mut out: Array2<Complex64> = Array2::default((self.dim, self.dim));
        for (k, ck) in coords.iter().enumerate() {
            out = out + &self.generators[k].mapv(|x| x * ck);
        }
        out
    }

    /// d_pi of real coordinates in the orthonormal basis.
    pub fn d_pi_coords(&self, w: &[f64]) -> Array2<Complex64> {
        let mut out: Array2<Complex64> = Array2::default((self.dim, self.dim));
        for (k, &wk) in w.iter().enumerate() {
            out = out + &self.generators[k].mapv(|x| x * wk);
        }
        out
    }

    /// pi_lambda(exp Z) for an algebra element Z.
    pub fn exp_lift(&self, z: &Array2<Complex64>) -> Array2<Complex64> {
        expm(&self.d_pi(z))
    }

    /// pi_lambda(g). Uses the stored factorization when present; otherwise the
    /// element is logged in the defining representation (SU(2) closed form).
    pub fn group_eval(&self, g: &GroupElement) -> Result<Array2<Complex64>> {
        let owned;
        let factors: &Vec<Vec<f64>> = match &g.factors {
            Some(f) => f,
            None => {
                if self.algebra.matrix_dim != 2 {
                    return Err(Error::LogFailure(
                        "no factorization supplied and no closed-form log for this group".into(),
                    ));
                }
                owned = su2::defining_log(&g.u)?;
                &owned
            }
        };
        let mut out = eye(self.dim);
        for f in factors {
            out = out.dot(&expm(&self.d_pi_coords(f)));
        }
        Ok(out)
    }
}

/// <u | pi(g) v>.
pub fn matrix_coefficient(
    r: &Irrep,
    u: &Array1<Complex64>,
    v: &Array1<Complex64>,
    g: &GroupElement,
) -> Result<Complex64> {
    if u.len() != r.dim || v.len() != r.dim {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {}, {} in a dim-{} irrep",
            u.len(),
            v.len(),
            r.dim
        )));
    }
    let pv = r.group_eval(g)?.dot(v);
    Ok(u.iter().zip(pv.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// phi_lambda(g) = <v_lambda | pi(g) v_lambda>.
pub fn phi_lambda(r: &Irrep, g: &GroupElement) -> Result<Complex64> {
    matrix_coefficient(r, &r.hw_vector, &r.hw_vector, g)
}

/// The isometric embedding v -> v-tilde evaluated at g:
/// v_tilde(g) = d_lambda^{1/2} <pi(g) v_lambda | v>.
pub fn tilde_function(r: &Irrep, v: &Array1<Complex64>, g: &GroupElement) -> Result<Complex64> {
    if v.len() != r.dim {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in a dim-{} irrep",
            v.len(),
            r.dim
        )));
    }
    let col = coherent_column(r, g)?;
    let inner: Complex64 = col.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(inner * (r.dim as f64).sqrt())
}

/// The coherent column pi(g) v_lambda.
pub fn coherent_column(r: &Irrep, g: &GroupElement) -> Result<Array1<Complex64>> {
    if r.algebra.matrix_dim == 2 && g.factors.is_none() {
        // Closed form: monomials in the first column of the defining matrix.
        let kernel = su2::CoherentKernel::new(r.dim);
        let col = kernel.column(g.u[[0, 0]], g.u[[1, 0]]);
        return Ok(Array1::from_vec(col));
    }
    Ok(r.group_eval(g)?.dot(&r.hw_vector))
}

/// g . E_lambda = pi(g) E_lambda pi(g)^{-1}, a rank-1 projector.
pub fn coherent_projector(r: &Irrep, g: &GroupElement) -> Result<Array2<Complex64>> {
    let w = coherent_column(r, g)?;
    Ok(Array2::from_shape_fn((r.dim, r.dim), |(i, j)| {
        w[i] * w[j].conj()
    }))
}
