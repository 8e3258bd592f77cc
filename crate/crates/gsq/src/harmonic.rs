//! A finite model of square-integrable functions on the group: matrix
//! coefficients up to a block cutoff, right-action operators, magnetic
//! Laplacians and their ground spaces, multiplication operators, and the
//! damped semigroup whose large-r limit is the compressed evolution.
//!
//! Basis convention: block two_j contributes the d^2 rescaled coefficients
//! sqrt(d) * <e_a | pi(g) e_b>, laid out row-major in (a, b). Right-invariant
//! differential operators act on the b (column) slot only, so they are block
//! diagonal and identical on every row index a.

use std::collections::HashMap;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::lie::{dual_pairing, AlgebraModel, CartanRootData, Weight};
use crate::linalg::{c, dagger, eigh, expm, eye, fro_norm, herm_defect};
use crate::quantization::HaarQuadrature;
use crate::repr::{build_irrep, GroupElement, Irrep};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct PeterWeylTruncation {
    /// Blocks two_j = 0..=cutoff_two_j are included.
    pub cutoff_two_j: usize,
    pub blocks: Vec<Irrep>,
    /// Start of each block's coefficient range.
    pub offsets: Vec<usize>,
    pub total_dim: usize,
    pub algebra: AlgebraModel,
    pub cartan: CartanRootData,
}

/// All blocks with two_j <= cutoff_two_j, in ascending order.
pub fn peter_weyl_truncation(
    algebra: &AlgebraModel,
    cartan: &CartanRootData,
    cutoff_two_j: usize,
) -> Result<PeterWeylTruncation> {
    if cartan.rank != 1 {
        return Err(Error::UnsupportedRank(format!("rank {}", cartan.rank)));
    }
    let alpha = &cartan.positive_roots[0];
    let mut blocks = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    for two_j in 0..=cutoff_two_j {
        let lambda = alpha.scaled(two_j as f64 / 2.0);
        let r = build_irrep(&lambda, algebra, cartan)?;
        offsets.push(total);
        total += r.dim * r.dim;
        blocks.push(r);
    }
    Ok(PeterWeylTruncation {
        cutoff_two_j,
        blocks,
        offsets,
        total_dim: total,
        algebra: algebra.clone(),
        cartan: cartan.clone(),
    })
}

impl PeterWeylTruncation {
    /// Index of the block carrying highest weight `lambda`.
    pub fn block_of_weight(&self, lambda: &Weight) -> Result<usize> {
        let alpha = &self.cartan.positive_roots[0];
        let dynkin = 2.0 * dual_pairing(lambda, alpha, &self.cartan)
            / dual_pairing(alpha, alpha, &self.cartan);
        let rounded = dynkin.round();
        if rounded < -0.5 || (dynkin - rounded).abs() > 1e-9 {
            return Err(Error::NonDominantWeight(format!(
                "pairing with the coroot is {dynkin}"
            )));
        }
        let two_j = rounded as usize;
        if two_j > self.cutoff_two_j {
            return Err(Error::CutoffTooSmall(format!(
                "block {two_j} exceeds cutoff {}",
                self.cutoff_two_j
            )));
        }
        Ok(two_j)
    }

    /// The basis functions evaluated at g, flattened across blocks.
    pub fn basis_values(&self, g: &GroupElement) -> Result<Array1<Complex64>> {
        let mut out = Array1::default(self.total_dim);
        for (bi, block) in self.blocks.iter().enumerate() {
            let pi = block.group_eval(g)?;
            let scale = (block.dim as f64).sqrt();
            let off = self.offsets[bi];
            for a in 0..block.dim {
                for b in 0..block.dim {
                    out[off + a * block.dim + b] = pi[[a, b]] * scale;
                }
            }
        }
        Ok(out)
    }

    /// Evaluate a coefficient vector as a function on the group.
    pub fn evaluate(&self, coeffs: &Array1<Complex64>, g: &GroupElement) -> Result<Complex64> {
        if coeffs.len() != self.total_dim {
            return Err(Error::DimensionMismatch(format!(
                "coefficient vector of length {}, truncation dimension {}",
                coeffs.len(),
                self.total_dim
            )));
        }
        let vals = self.basis_values(g)?;
        Ok(coeffs.iter().zip(vals.iter()).map(|(x, e)| x * e).sum())
    }
}

/// Basis values at every node of a quadrature, built once. Factor lifts are
/// memoized per block, so only a handful of small matrix exponentials occur.
pub struct BasisTable {
    pub values: Vec<Array1<Complex64>>,
}

pub fn basis_table(pw: &PeterWeylTruncation, quad: &HaarQuadrature) -> Result<BasisTable> {
    let mut caches: Vec<HashMap<Vec<u64>, Array2<Complex64>>> =
        vec![HashMap::new(); pw.blocks.len()];
    let mut values = Vec::with_capacity(quad.nodes.len());
    for g in &quad.nodes {
        let factors = g
            .factors
            .as_ref()
            .ok_or_else(|| Error::LogFailure("quadrature node without factorization".into()))?;
        let mut row = Array1::default(pw.total_dim);
        for (bi, block) in pw.blocks.iter().enumerate() {
            let mut pi = eye(block.dim);
            for f in factors {
                let key: Vec<u64> = f.iter().map(|x| x.to_bits()).collect();
                let lift = caches[bi]
                    .entry(key)
                    .or_insert_with(|| expm(&block.d_pi_coords(f)));
                pi = pi.dot(lift);
            }
            let scale = (block.dim as f64).sqrt();
            let off = pw.offsets[bi];
            for a in 0..block.dim {
                for b in 0..block.dim {
                    row[off + a * block.dim + b] = pi[[a, b]] * scale;
                }
            }
        }
        values.push(row);
    }
    Ok(BasisTable { values })
}

/// Coefficients of a function by quadrature projection onto the basis.
/// `f` is invoked exactly once per node, in node order.
pub fn project_function<F: FnMut(&GroupElement) -> Complex64>(
    pw: &PeterWeylTruncation,
    quad: &HaarQuadrature,
    table: &BasisTable,
    mut f: F,
) -> Result<Array1<Complex64>> {
    if table.values.len() != quad.nodes.len() {
        return Err(Error::GridMismatch(
            "basis table built on a different quadrature".into(),
        ));
    }
    let mut coeffs: Array1<Complex64> = Array1::default(pw.total_dim);
    for ((g, &w), vals) in quad.nodes.iter().zip(&quad.weights).zip(&table.values) {
        let fv = f(g) * w;
        for (ci, ei) in coeffs.iter_mut().zip(vals.iter()) {
            *ci += ei.conj() * fv;
        }
    }
    Ok(coeffs)
}

/// Gram matrix of the basis under the quadrature inner product.
pub fn quadrature_gram(
    pw: &PeterWeylTruncation,
    quad: &HaarQuadrature,
    table: &BasisTable,
) -> Result<Array2<Complex64>> {
    if table.values.len() != quad.nodes.len() {
        return Err(Error::GridMismatch(
            "basis table built on a different quadrature".into(),
        ));
    }
    let n = pw.total_dim;
    let mut gram: Array2<Complex64> = Array2::default((n, n));
    for (&w, vals) in quad.weights.iter().zip(&table.values) {
        for i in 0..n {
            let vi = vals[i].conj() * w;
            for j in 0..n {
                gram[[i, j]] += vi * vals[j];
            }
        }
    }
    Ok(gram)
}

/// An operator on the truncation.
#[derive(Debug, Clone)]
pub enum BlockForm {
    /// Block diagonal, acting on the column slot of each block.
    RightSlot(Vec<Array2<Complex64>>),
    /// Dense on the whole truncation.
    Full(Array2<Complex64>),
}

#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub form: BlockForm,
    pub hermitian: bool,
    /// Assembly route, recorded for audit.
    pub provenance: String,
}

fn slot_hermitian(blocks: &[Array2<Complex64>]) -> bool {
    blocks.iter().all(|b| {
        let scale = fro_norm(b).max(1.0);
        herm_defect(b) < 1e-11 * scale
    })
}

impl BlockOperator {
    pub fn right_slot(blocks: Vec<Array2<Complex64>>, provenance: &str) -> Self {
        let hermitian = slot_hermitian(&blocks);
        BlockOperator {
            form: BlockForm::RightSlot(blocks),
            hermitian,
            provenance: provenance.to_string(),
        }
    }

    pub fn full(matrix: Array2<Complex64>, provenance: &str) -> Self {
        let scale = fro_norm(&matrix).max(1.0);
        let hermitian = herm_defect(&matrix) < 1e-11 * scale;
        BlockOperator {
            form: BlockForm::Full(matrix),
            hermitian,
            provenance: provenance.to_string(),
        }
    }

    pub fn to_full(&self, pw: &PeterWeylTruncation) -> Array2<Complex64> {
        match &self.form {
            BlockForm::Full(m) => m.clone(),
            BlockForm::RightSlot(blocks) => {
                let n = pw.total_dim;
                let mut out: Array2<Complex64> = Array2::default((n, n));
                for (bi, bm) in blocks.iter().enumerate() {
                    let d = pw.blocks[bi].dim;
                    let off = pw.offsets[bi];
                    for a in 0..d {
                        for b in 0..d {
                            for cidx in 0..d {
                                out[[off + a * d + b, off + a * d + cidx]] = bm[[b, cidx]];
                            }
                        }
                    }
                }
                out
            }
        }
    }

    pub fn apply(&self, pw: &PeterWeylTruncation, x: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        if x.len() != pw.total_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {}, truncation dimension {}",
                x.len(),
                pw.total_dim
            )));
        }
        match &self.form {
            BlockForm::Full(m) => Ok(m.dot(x)),
            BlockForm::RightSlot(blocks) => {
                let mut out = Array1::default(pw.total_dim);
                for (bi, bm) in blocks.iter().enumerate() {
                    let d = pw.blocks[bi].dim;
                    let off = pw.offsets[bi];
                    for a in 0..d {
                        for b in 0..d {
                            let mut s = Complex64::default();
                            for cidx in 0..d {
                                s += bm[[b, cidx]] * x[off + a * d + cidx];
                            }
                            out[off + a * d + b] = s;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// a*self + b*other, staying in slot form when both sides have it.
    pub fn combine(
        &self,
        a: Complex64,
        other: &BlockOperator,
        b: Complex64,
        pw: &PeterWeylTruncation,
        provenance: &str,
    ) -> BlockOperator {
        match (&self.form, &other.form) {
            (BlockForm::RightSlot(x), BlockForm::RightSlot(y)) => {
                let blocks: Vec<Array2<Complex64>> = x
                    .iter()
                    .zip(y.iter())
                    .map(|(p, q)| p.mapv(|z| z * a) + q.mapv(|z| z * b))
                    .collect();
                BlockOperator::right_slot(blocks, provenance)
            }
            _ => {
                let m = self.to_full(pw).mapv(|z| z * a) + other.to_full(pw).mapv(|z| z * b);
                BlockOperator::full(m, provenance)
            }
        }
    }

    /// self + s*identity.
    pub fn shift(&self, s: f64, provenance: &str) -> BlockOperator {
        match &self.form {
            BlockForm::RightSlot(blocks) => {
                let shifted: Vec<Array2<Complex64>> = blocks
                    .iter()
                    .map(|bm| bm + &eye(bm.nrows()).mapv(|z| z * s))
                    .collect();
                BlockOperator::right_slot(shifted, provenance)
            }
            BlockForm::Full(m) => {
                BlockOperator::full(m + &eye(m.nrows()).mapv(|z| z * s), provenance)
            }
        }
    }
}

/// The right-invariant differential operator of an algebra element given by
/// complex coordinates in the orthonormal basis; it acts on the column slot
/// of each block by the block's generator combination.
pub fn build_right_action(pw: &PeterWeylTruncation, coords: &[Complex64]) -> BlockOperator {
    let blocks: Vec<Array2<Complex64>> = pw
        .blocks
        .iter()
        .map(|block| {
            let mut m: Array2<Complex64> = Array2::default((block.dim, block.dim));
            for (k, ck) in coords.iter().enumerate() {
                m = m + &block.generators[k].mapv(|z| z * ck);
            }
            m
        })
        .collect();
    BlockOperator::right_slot(blocks, "column-slot action of an algebra element")
}

/// Same, for an algebra element given as a matrix in the defining model.
pub fn right_action_of_matrix(pw: &PeterWeylTruncation, z: &Array2<Complex64>) -> BlockOperator {
    let coords = pw.algebra.coords_of(z);
    build_right_action(pw, &coords)
}

/// The Laplacian family attached to a dominant weight.
pub struct LaplacianSet {
    pub lambda: Weight,
    /// Minus the sum of squared right generators; blockwise the Casimir scalar.
    pub delta: BlockOperator,
    /// The magnetic Laplacian twisted by minus (lambda + rho), assembled from
    /// shifted squared generators.
    pub delta_magnetic: BlockOperator,
    /// Torus part twisted by minus lambda.
    pub delta_torus: BlockOperator,
    /// Raising element times its adjoint, acting on the column slot.
    pub c_plus: BlockOperator,
    /// delta_magnetic shifted down by the ground level.
    pub underline: BlockOperator,
    /// (2 lambda + rho, rho): the bottom of the magnetic spectrum.
    pub ground_level: f64,
    /// Max block distance between the shifted-squares route and the
    /// Casimir-shift route for delta_magnetic.
    pub route_residual: f64,
    /// Max block distance in
    /// delta_magnetic = delta_torus + 2 c_plus + ground_level.
    pub decomposition_residual: f64,
}

pub fn assemble_laplacians(pw: &PeterWeylTruncation, lambda: &Weight) -> Result<LaplacianSet> {
    pw.block_of_weight(lambda)?;
    let cartan = &pw.cartan;
    let algebra = &pw.algebra;
    let alpha = lambda.plus(&cartan.rho).scaled(-1.0);

    // Coordinates of alpha on the orthonormal basis: alpha(X_k) through the
    // torus component of X_k; a_k = i * alpha(X_k) is real for i t^* weights.
    let torus_norm = algebra
        .killing(&cartan.torus_basis[0], &cartan.torus_basis[0])
        .re;
    let a_coeffs: Vec<f64> = algebra
        .ortho_basis
        .iter()
        .map(|x| {
            let ct = algebra.killing(x, &cartan.torus_basis[0]) / torus_norm;
            let val = ct * alpha.coords[0] * c(0.0, 1.0);
            debug_assert!(val.im.abs() < 1e-12);
            val.re
        })
        .collect();

    let nu_alpha = cartan.nu_inverse(&alpha);
    let alpha_norm2 = dual_pairing(&alpha, &alpha, cartan);
    let ground_level = dual_pairing(&lambda.scaled(2.0).plus(&cartan.rho), &cartan.rho, cartan);

    let mut delta_blocks = Vec::new();
    let mut magnetic_blocks = Vec::new();
    let mut shift_blocks = Vec::new();
    let mut torus_blocks = Vec::new();
    let mut cplus_blocks = Vec::new();
    for block in &pw.blocks {
        let d = block.dim;
        let id = eye(d);

        let mut delta: Array2<Complex64> = Array2::default((d, d));
        for gk in &block.generators {
            delta = delta - gk.dot(gk);
        }

        let mut magnetic: Array2<Complex64> = Array2::default((d, d));
        for (gk, &ak) in block.generators.iter().zip(&a_coeffs) {
            let m = gk + &id.mapv(|z| z * c(0.0, ak));
            magnetic = magnetic - m.dot(&m);
        }

        let shift = &delta - &block.d_pi(&nu_alpha).mapv(|z| z * 2.0)
            + id.mapv(|z| z * alpha_norm2);

        let mut torus: Array2<Complex64> = Array2::default((d, d));
        for (i, ti) in block.cartan_action.iter().enumerate() {
            let m = ti + &id.mapv(|z| z * lambda.coords[i]);
            torus = torus + m.dot(&m);
        }

        let cplus = block.ladder_plus.dot(&block.ladder_star);

        delta_blocks.push(delta);
        magnetic_blocks.push(magnetic);
        shift_blocks.push(shift);
        torus_blocks.push(torus);
        cplus_blocks.push(cplus);
    }

    let route_residual = magnetic_blocks
        .iter()
        .zip(&shift_blocks)
        .map(|(m, s)| fro_norm(&(m - s)))
        .fold(0.0f64, f64::max);
    let decomposition_residual = magnetic_blocks
        .iter()
        .zip(&torus_blocks)
        .zip(&cplus_blocks)
        .map(|((m, t), cp)| {
            let rhs = t + &cp.mapv(|z| z * 2.0) + eye(t.nrows()).mapv(|z| z * ground_level);
            fro_norm(&(m - &rhs))
        })
        .fold(0.0f64, f64::max);

    let delta_magnetic =
        BlockOperator::right_slot(magnetic_blocks, "minus the sum of squared shifted generators");
    let underline = delta_magnetic.shift(-ground_level, "magnetic minus the ground level");
    Ok(LaplacianSet {
        lambda: lambda.clone(),
        delta: BlockOperator::right_slot(delta_blocks, "minus the sum of squared generators"),
        delta_magnetic,
        delta_torus: BlockOperator::right_slot(torus_blocks, "squared shifted torus generators"),
        c_plus: BlockOperator::right_slot(cplus_blocks, "raising element times its adjoint"),
        underline,
        ground_level,
        route_residual,
        decomposition_residual,
    })
}

/// Per-block spectrum of a column-slot operator, with full multiplicities.
pub fn block_spectrum(
    pw: &PeterWeylTruncation,
    op: &BlockOperator,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let blocks = match &op.form {
        BlockForm::RightSlot(b) => b,
        BlockForm::Full(_) => {
            return Err(Error::ShapeMismatch(
                "dense operators have no per-block spectrum".into(),
            ))
        }
    };
    if !op.hermitian {
        return Err(Error::NotHermitian(op.provenance.clone()));
    }
    let mut out = Vec::new();
    for (bi, bm) in blocks.iter().enumerate() {
        let d = pw.blocks[bi].dim;
        let (vals, _) = eigh(bm)?;
        let mut evs = Vec::with_capacity(d * d);
        for v in vals.iter() {
            for _ in 0..d {
                evs.push(*v);
            }
        }
        evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out.push((bi as f64 / 2.0, evs));
    }
    Ok(out)
}

/// CSV report: block, eigenvalue_index, eigenvalue.
pub fn spectrum_csv(pw: &PeterWeylTruncation, op: &BlockOperator) -> Result<String> {
    let spectra = block_spectrum(pw, op)?;
    let mut s = String::from("block,eigenvalue_index,eigenvalue\n");
    for (j, evs) in &spectra {
        for (i, ev) in evs.iter().enumerate() {
            s.push_str(&format!("{j},{i},{ev:.12e}\n"));
        }
    }
    Ok(s)
}

/// Smallest eigenvalue larger than cluster_tol across all blocks.
pub fn spectral_gap(
    pw: &PeterWeylTruncation,
    op: &BlockOperator,
    cluster_tol: f64,
) -> Result<f64> {
    let spectra = block_spectrum(pw, op)?;
    spectra
        .iter()
        .flat_map(|(_, evs)| evs.iter())
        .filter(|&&v| v > cluster_tol)
        .fold(None, |acc: Option<f64>, &v| {
            Some(acc.map_or(v, |a| a.min(v)))
        })
        .ok_or(Error::EmptyEigenspace {
            level: f64::INFINITY,
            tol: cluster_tol,
        })
}

/// Orthonormal basis of the eigenspace of `op` at `level` within `tol`,
/// returned as columns. Column-slot operators are diagonalized per block.
pub fn ground_space(
    pw: &PeterWeylTruncation,
    op: &BlockOperator,
    level: f64,
    tol: f64,
) -> Result<Array2<Complex64>> {
    if !op.hermitian {
        return Err(Error::NotHermitian(op.provenance.clone()));
    }
    let n = pw.total_dim;
    let mut cols: Vec<Array1<Complex64>> = Vec::new();
    match &op.form {
        BlockForm::RightSlot(blocks) => {
            for (bi, bm) in blocks.iter().enumerate() {
                let d = pw.blocks[bi].dim;
                let off = pw.offsets[bi];
                let (vals, vecs) = eigh(bm)?;
                for (k, &v) in vals.iter().enumerate() {
                    if (v - level).abs() <= tol {
                        for a in 0..d {
                            let mut col = Array1::default(n);
                            for b in 0..d {
                                col[off + a * d + b] = vecs[[b, k]];
                            }
                            cols.push(col);
                        }
                    }
                }
            }
        }
        BlockForm::Full(m) => {
            let (vals, vecs) = eigh(m)?;
            for (k, &v) in vals.iter().enumerate() {
                if (v - level).abs() <= tol {
                    let mut col = Array1::default(n);
                    for i in 0..n {
                        col[i] = vecs[[i, k]];
                    }
                    cols.push(col);
                }
            }
        }
    }
    if cols.is_empty() {
        return Err(Error::EmptyEigenspace { level, tol });
    }
    let mut out = Array2::default((n, cols.len()));
    for (k, col) in cols.iter().enumerate() {
        for i in 0..n {
            out[[i, k]] = col[i];
        }
    }
    Ok(out)
}

/// A function acting by pointwise multiplication, compressed to the
/// truncation by quadrature.
pub struct MultiplicationOperator {
    pub op: BlockOperator,
    /// Blocks with two_j at most this are multiplied without truncation
    /// error; None when the band is unknown or exceeds the cutoff. A factor
    /// of band b couples block spins at distance at most b, so the safe
    /// region loses 2b in two_j units.
    pub exact_below_two_j: Option<usize>,
}

/// `band` is the largest spin in the factor's coefficient expansion, an
/// integer because lifts of orbit functions have whole-spin content.
/// `f` is invoked exactly once per node, in node order.
pub fn multiplication_operator<F: FnMut(&GroupElement) -> Complex64>(
    pw: &PeterWeylTruncation,
    quad: &HaarQuadrature,
    table: &BasisTable,
    mut f: F,
    band: Option<usize>,
) -> Result<MultiplicationOperator> {
    if table.values.len() != quad.nodes.len() {
        return Err(Error::GridMismatch(
            "basis table built on a different quadrature".into(),
        ));
    }
    let n = pw.total_dim;
    let mut m: Array2<Complex64> = Array2::default((n, n));
    for ((g, &w), vals) in quad.nodes.iter().zip(&quad.weights).zip(&table.values) {
        let fv = f(g) * w;
        for i in 0..n {
            let vi = vals[i].conj() * fv;
            for j in 0..n {
                m[[i, j]] += vi * vals[j];
            }
        }
    }
    let exact_below_two_j = band.and_then(|b| {
        if 2 * b <= pw.cutoff_two_j {
            Some(pw.cutoff_two_j - 2 * b)
        } else {
            None
        }
    });
    Ok(MultiplicationOperator {
        op: BlockOperator::full(m, "quadrature compression of pointwise multiplication"),
        exact_below_two_j,
    })
}

/// Quadrature order that makes every entry of a multiplication operator
/// exact: a conjugated basis pair reaches spin cutoff_two_j and the factor
/// adds its band on top.
pub fn exact_mult_order(cutoff_two_j: usize, band: usize) -> usize {
    cutoff_two_j + band
}

/// e^{-t (r * underline + i V)} f: the damped semigroup driven by the shifted
/// magnetic Laplacian, with the multiplication operator as generator phase.
pub fn semigroup_propagate(
    pw: &PeterWeylTruncation,
    lap: &LaplacianSet,
    mult: &MultiplicationOperator,
    r: f64,
    t: f64,
    f: &Array1<Complex64>,
) -> Result<Array1<Complex64>> {
    if f.len() != pw.total_dim {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {}, truncation dimension {}",
            f.len(),
            pw.total_dim
        )));
    }
    assert!(r > 0.0 && t >= 0.0);
    let vm = match &mult.op.form {
        BlockForm::Full(m) => m,
        _ => {
            return Err(Error::ShapeMismatch(
                "multiplication operators are dense".into(),
            ))
        }
    };
    let generator =
        lap.underline.to_full(pw).mapv(|z| z * (-t * r)) + vm.mapv(|z| z * c(0.0, -t));
    Ok(expm(&generator).dot(f))
}

/// The large-r limit of the damped semigroup: evolve by the compression of
/// the multiplication operator to the ground space. `ground` holds
/// orthonormal columns spanning that space.
pub fn compressed_propagate(
    pw: &PeterWeylTruncation,
    ground: &Array2<Complex64>,
    mult: &MultiplicationOperator,
    t: f64,
    f: &Array1<Complex64>,
) -> Result<Array1<Complex64>> {
    if f.len() != pw.total_dim || ground.nrows() != pw.total_dim {
        return Err(Error::DimensionMismatch(
            "ground basis and vector must live on the truncation".into(),
        ));
    }
    let vm = match &mult.op.form {
        BlockForm::Full(m) => m,
        _ => {
            return Err(Error::ShapeMismatch(
                "multiplication operators are dense".into(),
            ))
        }
    };
    let qd = dagger(ground);
    let compressed = qd.dot(vm).dot(ground);
    let inside = qd.dot(f);
    let evolved_inside = expm(&compressed.mapv(|z| z * c(0.0, -t))).dot(&inside);
    let projected = ground.dot(&qd.dot(f));
    let outside = f - &projected;
    Ok(ground.dot(&evolved_inside) + outside)
}
