//! Structure theory of the compact group: Killing-orthonormal basis, Cartan
//! torus, roots, Weyl vectors, and the induced pairing on weights.
//!
//! Everything downstream (representations, Laplacians, magnetic potentials) is
//! normalized against the Killing form computed here from the adjoint
//! representation, so the constants that appear in spectra are basis-free.

use ndarray::{Array2, Array3};
use num_complex::Complex64;

use crate::linalg::{c, comm, dagger, eigh, fro_norm, solve};
use crate::{Error, Result};

/// A weight: real coordinates in the basis dual to the torus basis {T_i}.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pub coords: Vec<f64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![0.0; rank] }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Weight { coords: self.coords.iter().map(|x| x * s).collect() }
    }

    pub fn plus(&self, other: &Weight) -> Self {
        assert_eq!(self.coords.len(), other.coords.len());
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// A compact Lie algebra in a fixed defining representation, with a basis
/// orthonormal for <X|Y> = -kappa(X,Y).
#[derive(Debug, Clone)]
pub struct AlgebraModel {
    pub name: String,
    /// Size of the defining representation.
    pub matrix_dim: usize,
    pub rank: usize,
    /// Anti-Hermitian traceless matrices X_k with -kappa(X_k, X_l) = delta_kl.
    pub ortho_basis: Vec<Array2<Complex64>>,
    /// f[[a,b,k]] with [X_a, X_b] = sum_k f[[a,b,k]] X_k.
    pub structure_constants: Array3<f64>,
    /// kappa(X_a, X_b) recomputed from the adjoint representation; audit copy.
    pub killing_gram: Array2<f64>,
    /// Hilbert-Schmidt Gram of the basis, cached for coordinate solves.
    hs_gram: Array2<Complex64>,
}

impl AlgebraModel {
    pub fn dim(&self) -> usize {
        self.ortho_basis.len()
    }

    /// Coordinates of Z in the orthonormal basis, allowing complex coefficients
    /// (so Z may live in the complexification).
    pub fn coords_of(&self, z: &Array2<Complex64>) -> Vec<Complex64> {
        let n = self.dim();
        let rhs = Array2::from_shape_fn((n, 1), |(k, _)| {
            let mut s = Complex64::default();
            for i in 0..self.matrix_dim {
                for j in 0..self.matrix_dim {
                    s += self.ortho_basis[k][[j, i]].conj() * z[[j, i]];
                }
            }
            s
        });
        let sol = solve(&self.hs_gram, &rhs).expect("basis Gram is invertible");
        (0..n).map(|k| sol[[k, 0]]).collect()
    }

    pub fn from_coords(&self, coords: &[Complex64]) -> Array2<Complex64> {
        let mut z = Array2::default((self.matrix_dim, self.matrix_dim));
        for (k, ck) in coords.iter().enumerate() {
            z = z + &self.ortho_basis[k].mapv(|x| x * ck);
        }
        z
    }

    /// Killing form extended complex-bilinearly to the complexification.
    pub fn killing(&self, z: &Array2<Complex64>, w: &Array2<Complex64>) -> Complex64 {
        let zc = self.coords_of(z);
        let wc = self.coords_of(w);
        let mut s = Complex64::default();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                s += zc[a] * wc[b] * self.killing_gram[[a, b]];
            }
        }
        s
    }
}

/// Raising/lowering vectors attached to one positive root.
#[derive(Debug, Clone)]
pub struct WeylVectors {
    /// E_alpha, phase-fixed and scaled so kappa(E_alpha, E_alpha^*) = 1.
    pub e_plus: Array2<Complex64>,
    /// E_alpha^* (conjugate transpose of e_plus).
    pub e_star: Array2<Complex64>,
    /// E_{-alpha} = -E_alpha^*.
    pub e_minus: Array2<Complex64>,
}

#[derive(Debug, Clone)]
pub struct CartanRootData {
    pub rank: usize,
    /// T_i in i*g (Hermitian matrices) with kappa(T_i, T_j) = delta_ij.
    pub torus_basis: Vec<Array2<Complex64>>,
    pub positive_roots: Vec<Weight>,
    pub simple_roots: Vec<Weight>,
    /// Half the sum of the positive roots.
    pub rho: Weight,
    pub weyl_vectors: Vec<WeylVectors>,
    /// Gram matrix of ( , ) in dual-torus coordinates.
    pub dual_gram: Array2<f64>,
    /// kappa(T_i, T_j), kept for nu_inverse solves.
    torus_gram: Array2<f64>,
}

impl CartanRootData {
    /// The torus element nu^{-1}(w) with kappa(nu^{-1}(w), T_i) = w(T_i).
    pub fn nu_inverse(&self, w: &Weight) -> Array2<Complex64> {
        assert_eq!(w.coords.len(), self.rank);
        let rhs = Array2::from_shape_fn((self.rank, 1), |(i, _)| c(w.coords[i], 0.0));
        let gram = Array2::from_shape_fn((self.rank, self.rank), |(i, j)| {
            c(self.torus_gram[[i, j]], 0.0)
        });
        let coef = solve(&gram, &rhs).expect("torus Gram is invertible");
        let d = self.torus_basis[0].nrows();
        let mut z = Array2::default((d, d));
        for i in 0..self.rank {
            z = z + &self.torus_basis[i].mapv(|x| x * coef[[i, 0]]);
        }
        z
    }
}

/// The bilinear pairing (a, b) = kappa(nu^{-1}(a), nu^{-1}(b)) in dual coordinates.
pub fn dual_pairing(a: &Weight, b: &Weight, d: &CartanRootData) -> f64 {
    assert_eq!(a.coords.len(), d.rank);
    assert_eq!(b.coords.len(), d.rank);
    let mut s = 0.0;
    for i in 0..d.rank {
        for j in 0..d.rank {
            s += a.coords[i] * d.dual_gram[[i, j]] * b.coords[j];
        }
    }
    s
}

fn pauli() -> [Array2<Complex64>; 3] {
    [
        ndarray::array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        ndarray::array![[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        ndarray::array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
    ]
}

/// Structure constants of a basis: [B_a, B_b] = sum_k f[[a,b,k]] B_k.
/// Returns the real array and the largest imaginary residue seen in the solve.
fn structure_constants_of(
    basis: &[Array2<Complex64>],
    hs_gram: &Array2<Complex64>,
) -> (Array3<f64>, f64) {
    let n = basis.len();
    let nu = basis[0].nrows();
    let mut f = Array3::zeros((n, n, n));
    let mut worst_im = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let br = comm(&basis[a], &basis[b]);
            let rhs = Array2::from_shape_fn((n, 1), |(k, _)| {
                let mut s = Complex64::default();
                for i in 0..nu {
                    for j in 0..nu {
                        s += basis[k][[j, i]].conj() * br[[j, i]];
                    }
                }
                s
            });
            let sol = solve(hs_gram, &rhs).expect("basis Gram is invertible");
            for k in 0..n {
                f[[a, b, k]] = sol[[k, 0]].re;
                worst_im = worst_im.max(sol[[k, 0]].im.abs());
            }
        }
    }
    (f, worst_im)
}

/// kappa(B_a, B_b) = trace(ad_a ad_b) from structure constants.
fn killing_from_structure(f: &Array3<f64>) -> Array2<f64> {
    let n = f.shape()[0];
    Array2::from_shape_fn((n, n), |(a, b)| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                // (ad_a)_{qp} = f[[a,p,q]]; trace of ad_a ad_b.
                s += f[[a, p, q]] * f[[b, q, p]];
            }
        }
        s
    })
}

fn hs_gram_of(basis: &[Array2<Complex64>]) -> Array2<Complex64> {
    let n = basis.len();
    Array2::from_shape_fn((n, n), |(a, b)| {
        let mut s = Complex64::default();
        for (x, y) in basis[a].iter().zip(basis[b].iter()) {
            s += x.conj() * y;
        }
        s
    })
}

fn build_from_seed(
    name: &str,
    matrix_dim: usize,
    rank: usize,
    seed: Vec<Array2<Complex64>>,
) -> AlgebraModel {
    let n = seed.len();
    let hs_seed = hs_gram_of(&seed);
    let (f_seed, _) = structure_constants_of(&seed, &hs_seed);
    let kappa_seed = killing_from_structure(&f_seed);
    // Gram-Schmidt of coordinate vectors under the positive form B = -kappa.
    let bform = |u: &[f64], v: &[f64]| -> f64 {
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s -= u[a] * kappa_seed[[a, b]] * v[b];
            }
        }
        s
    };
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for u in &coeffs {
            let proj = bform(u, &v);
            for i in 0..n {
                v[i] -= proj * u[i];
            }
        }
        let norm = bform(&v, &v).sqrt();
        for x in &mut v {
            *x /= norm;
        }
        coeffs.push(v);
    }
    let ortho_basis: Vec<Array2<Complex64>> = coeffs
        .iter()
        .map(|cv| {
            let mut z = Array2::default((matrix_dim, matrix_dim));
            for (i, &ci) in cv.iter().enumerate() {
                z = z + &seed[i].mapv(|x| x * ci);
            }
            z
        })
        .collect();
    let hs_gram = hs_gram_of(&ortho_basis);
    let (structure_constants, _) = structure_constants_of(&ortho_basis, &hs_gram);
    let killing_gram = killing_from_structure(&structure_constants);
    AlgebraModel {
        name: name.to_string(),
        matrix_dim,
        rank,
        ortho_basis,
        structure_constants,
        killing_gram,
        hs_gram,
    }
}

/// Build the algebra for a named group. "SU2" is the concrete instantiation.
pub fn build_algebra(name: &str) -> Result<AlgebraModel> {
    match name {
        "SU2" => {
            let p = pauli();
            // Seed basis -i sigma_k / 2; orthonormalization rescales it.
            let seed = p
                .iter()
                .map(|s| s.mapv(|z| z * c(0.0, -0.5)))
                .collect();
            Ok(build_from_seed("SU2", 2, 1, seed))
        }
        other => Err(Error::UnsupportedGroup(other.to_string())),
    }
}

/// Cartan torus, roots, and Weyl vectors by diagonalizing ad(T_1).
pub fn build_cartan_root_data(algebra: &AlgebraModel) -> Result<CartanRootData> {
    if algebra.rank != 1 {
        return Err(Error::UnsupportedRank(format!(
            "rank {} (only rank 1 is implemented)",
            algebra.rank
        )));
    }
    let n = algebra.dim();
    // T_1 = i X_n is Hermitian with kappa(T_1, T_1) = -kappa(X_n, X_n) = 1.
    let t1 = algebra.ortho_basis[n - 1].mapv(|z| z * c(0.0, 1.0));
    // ad(T_1) in orthonormal coordinates is Hermitian; its nonzero eigenvalues
    // are the roots evaluated at T_1 and eigenvectors are root vectors.
    let ad_t1 = Array2::from_shape_fn((n, n), |(p, q)| {
        algebra.coords_of(&comm(&t1, &algebra.ortho_basis[q]))[p]
    });
    let (evals, evecs) = eigh(&ad_t1)?;
    let tol = 1e-8;
    let mut positives: Vec<(f64, usize)> = Vec::new();
    for i in 0..n {
        if evals[i] > tol {
            positives.push((evals[i], i));
        }
    }
    if positives.len() != 1 {
        return Err(Error::RootSpaceDegeneracy(format!(
            "expected one positive root for rank 1, found {}",
            positives.len()
        )));
    }
    let (alpha_t1, col) = positives[0];
    let mut e_raw = {
        let coords: Vec<Complex64> = (0..n).map(|i| evecs[[i, col]]).collect();
        algebra.from_coords(&coords)
    };
    // Deterministic phase: first nonzero entry (row-major) made positive real.
    'outer: for i in 0..algebra.matrix_dim {
        for j in 0..algebra.matrix_dim {
            let z = e_raw[[i, j]];
            if z.norm() > tol {
                let phase = z / z.norm();
                e_raw = e_raw.mapv(|x| x / phase);
                break 'outer;
            }
        }
    }
    // Scale so kappa(E_alpha, E_alpha^*) = 1.
    let scale = algebra.killing(&e_raw, &dagger(&e_raw)).re;
    assert!(scale > 0.0, "kappa(E, E^*) must be positive on a root vector");
    let e_plus = e_raw.mapv(|z| z / scale.sqrt());
    let e_star = dagger(&e_plus);
    let e_minus = e_star.mapv(|z| -z);
    let alpha = Weight { coords: vec![alpha_t1] };
    let rho = alpha.scaled(0.5);
    let torus_gram = {
        let k = algebra.killing(&t1, &t1).re;
        Array2::from_shape_fn((1, 1), |_| k)
    };
    // Dual Gram = inverse of the torus Gram; rank 1 so a scalar reciprocal.
    let dual_gram = Array2::from_shape_fn((1, 1), |_| 1.0 / torus_gram[[0, 0]]);
    Ok(CartanRootData {
        rank: 1,
        torus_basis: vec![t1],
        positive_roots: vec![alpha.clone()],
        simple_roots: vec![alpha],
        rho,
        weyl_vectors: vec![WeylVectors { e_plus, e_star, e_minus }],
        dual_gram,
        torus_gram,
    })
}

/// Convenience: residual of the claim [T_i, E] = w(T_i) E for every torus element.
pub fn root_relation_residual(d: &CartanRootData, e: &Array2<Complex64>, w: &Weight) -> f64 {
    let mut worst = 0.0f64;
    for (i, t) in d.torus_basis.iter().enumerate() {
        let lhs = comm(t, e);
        let rhs = e.mapv(|z| z * w.coords[i]);
        worst = worst.max(fro_norm(&(&lhs - &rhs)));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn su2() -> (AlgebraModel, CartanRootData) {
        let a = build_algebra("SU2").unwrap();
        let d = build_cartan_root_data(&a).unwrap();
        (a, d)
    }

    #[test]
    fn unsupported_group_is_an_error() {
        assert!(build_algebra("G2").is_err());
    }

    #[test]
    fn su2_basic_shape() {
        let (a, _) = su2();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.rank, 1);
        assert_eq!(a.matrix_dim, 2);
    }

    #[test]
    fn basis_is_anti_hermitian_traceless() {
        let (a, _) = su2();
        for x in &a.ortho_basis {
            assert!(fro_norm(&(&dagger(x) + x)) < 1e-14);
            assert!(crate::linalg::trace(x).norm() < 1e-14);
        }
    }

    #[test]
    fn killing_gram_is_minus_identity() {
        let (a, _) = su2();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { -1.0 } else { 0.0 };
                assert_abs_diff_eq!(a.killing_gram[[i, j]], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn structure_constants_antisymmetric_and_jacobi() {
        let (a, _) = su2();
        let f = &a.structure_constants;
        let n = a.dim();
        for p in 0..n {
            for q in 0..n {
                for k in 0..n {
                    assert_abs_diff_eq!(f[[p, q, k]], -f[[q, p, k]], epsilon = 1e-12);
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let mut j = 0.0;
                        for e in 0..n {
                            j += f[[p, q, e]] * f[[e, r, s]]
                                + f[[q, r, e]] * f[[e, p, s]]
                                + f[[r, p, e]] * f[[e, q, s]];
                        }
                        assert!(j.abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn structure_constants_reproduce_commutators() {
        let (a, _) = su2();
        for p in 0..3 {
            for q in 0..3 {
                let lhs = comm(&a.ortho_basis[p], &a.ortho_basis[q]);
                let mut rhs: Array2<Complex64> = Array2::default((2, 2));
                for k in 0..3 {
                    rhs = rhs + &a.ortho_basis[k].mapv(|z| z * a.structure_constants[[p, q, k]]);
                }
                assert!(fro_norm(&(&lhs - &rhs)) < 1e-13);
            }
        }
    }

    #[test]
    fn torus_is_hermitian_and_normalized() {
        let (a, d) = su2();
        let t = &d.torus_basis[0];
        assert!(fro_norm(&(&dagger(t) - t)) < 1e-14);
        assert_abs_diff_eq!(a.killing(t, t).re, 1.0, epsilon = 1e-12);
        assert!(a.killing(t, t).im.abs() < 1e-14);
    }

    #[test]
    fn exactly_one_positive_root_and_rho() {
        let (_, d) = su2();
        assert_eq!(d.positive_roots.len(), 1);
        let alpha = &d.positive_roots[0];
        assert_abs_diff_eq!(d.rho.coords[0], alpha.coords[0] / 2.0, epsilon = 1e-14);
        // Killing normalization pins alpha(T_1) = 1/sqrt(2).
        assert_abs_diff_eq!(alpha.coords[0], 1.0 / 2.0f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn root_vectors_satisfy_eigen_relation() {
        let (_, d) = su2();
        let wv = &d.weyl_vectors[0];
        let alpha = &d.positive_roots[0];
        assert!(root_relation_residual(&d, &wv.e_plus, alpha) < 1e-10);
        assert!(root_relation_residual(&d, &wv.e_minus, &alpha.scaled(-1.0)) < 1e-10);
    }

    #[test]
    fn weyl_normalization() {
        let (a, d) = su2();
        let wv = &d.weyl_vectors[0];
        let k = a.killing(&wv.e_plus, &wv.e_star);
        assert_abs_diff_eq!(k.re, 1.0, epsilon = 1e-12);
        assert!(k.im.abs() < 1e-12);
        // Root vectors are kappa-isotropic.
        assert!(a.killing(&wv.e_plus, &wv.e_plus).norm() < 1e-12);
        assert!(fro_norm(&(&wv.e_minus + &wv.e_star)) < 1e-14);
    }

    #[test]
    fn bracket_of_opposite_root_vectors_hits_the_coroot() {
        let (a, d) = su2();
        let wv = &d.weyl_vectors[0];
        let lhs = comm(&wv.e_plus, &wv.e_minus);
        let k = a.killing(&wv.e_plus, &wv.e_minus);
        let rhs = d.nu_inverse(&d.positive_roots[0]).mapv(|z| z * k);
        assert!(fro_norm(&(&lhs - &rhs)) < 1e-12);
        assert_abs_diff_eq!(k.re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn pairing_constants_for_su2() {
        let (_, d) = su2();
        let alpha = &d.positive_roots[0];
        assert_abs_diff_eq!(dual_pairing(alpha, alpha, &d), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dual_pairing(&d.rho, &d.rho, &d), 0.125, epsilon = 1e-12);
        let zero = Weight::zero(1);
        assert_abs_diff_eq!(dual_pairing(&zero, alpha, &d), 0.0, epsilon = 1e-15);
        // Ground levels (2*lambda + rho, rho) = j/2 + 1/8 for spin j = lambda/alpha.
        for (j, want) in [
            (0.0, 0.125),
            (0.5, 0.375),
            (1.0, 0.625),
            (1.5, 0.875),
            (2.0, 1.125),
        ] {
            let lambda = alpha.scaled(j);
            let arg = lambda.scaled(2.0).plus(&d.rho);
            assert_abs_diff_eq!(dual_pairing(&arg, &d.rho, &d), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn pairing_matches_direct_killing_evaluation() {
        let (a, d) = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let wa = Weight { coords: vec![rng.gen::<f64>() * 4.0 - 2.0] };
            let wb = Weight { coords: vec![rng.gen::<f64>() * 4.0 - 2.0] };
            let direct = a.killing(&d.nu_inverse(&wa), &d.nu_inverse(&wb));
            assert_abs_diff_eq!(dual_pairing(&wa, &wb, &d), direct.re, epsilon = 1e-12);
            assert!(direct.im.abs() < 1e-13);
            assert_abs_diff_eq!(
                dual_pairing(&wa, &wb, &d),
                dual_pairing(&wb, &wa, &d),
                epsilon = 1e-13
            );
        }
    }
}
