// SPDX-License-Identifier: Apache-2.0

//! Small dense complex linear algebra on top of nalgebra.

use crate::{Mat, C64};
use nalgebra::DVector;

pub fn identity(r: usize) -> Mat {
    Mat::identity(r, r)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm of `a - b`.
pub fn diff_norm(a: &Mat, b: &Mat) -> f64 {
    (a - b).norm()
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let inv = m.clone().try_inverse()?;
    if inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(inv)
    } else {
        None
    }
}

/// `(m + m*)/2`.
pub fn hermitian_part(m: &Mat) -> Mat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Mat) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitian_part(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigenvalues of a general complex matrix, sorted by real part then
/// imaginary part.
pub fn eigenvalues(m: &Mat) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let ev = m.clone().schur().eigenvalues().expect("complex Schur form is triangular");
    let mut v: Vec<C64> = ev.iter().copied().collect();
    sort_spectrum(&mut v);
    v
}

pub fn sort_spectrum(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Largest pairwise distance between two sorted spectra, or infinity when
/// their lengths differ.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `m^{-1/2}` for a Hermitian positive definite matrix.
pub fn hermitian_inv_sqrt(m: &Mat) -> Option<Mat> {
    let eig = hermitian_part(m).symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    if eig.eigenvalues.iter().any(|&l| l <= 1e-14 * top.max(f64::MIN_POSITIVE)) {
        return None;
    }
    let d = Mat::from_diagonal(&DVector::from_iterator(m.nrows(), eig.eigenvalues.iter().map(|&l| C64::new(1.0 / l.sqrt(), 0.0))));
    Some(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

/// Orthonormal basis of the (numerical) null space of `m`, as columns.
///
/// A right singular vector counts as null when its singular value is below
/// `rel_tol` times the largest singular value (or below `rel_tol` when `m`
/// is zero).
pub fn null_space(m: &Mat, rel_tol: f64) -> Mat {
    let cols = m.ncols();
    if cols == 0 {
        return Mat::zeros(0, 0);
    }
    // Pad to at least square so the SVD returns a full right basis.
    let rows = m.nrows().max(cols);
    let mut padded = Mat::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^t");
    let top = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let cutoff = if top > 0.0 { rel_tol * top } else { rel_tol };
    let picked: Vec<DVector<C64>> = svd.singular_values.iter().enumerate().filter(|(_, &s)| s <= cutoff).map(|(k, _)| v_t.row(k).adjoint()).collect();
    if picked.is_empty() {
        return Mat::zeros(cols, 0);
    }
    Mat::from_columns(&picked)
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &Mat) -> f64 {
    let sv = m.clone().singular_values();
    let hi = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let lo = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Row-block of the linear map `A ↦ A·x − y·A` acting on column-major
/// `vec(A)`.
pub fn intertwiner_rows(x: &Mat, y: &Mat) -> Mat {
    let r = x.nrows();
    let id = identity(r);
    x.transpose().kronecker(&id) - id.kronecker(y)
}

/// Reassemble an `r×r` matrix from a column-major vector.
pub fn unvec(v: &[C64], r: usize) -> Mat {
    Mat::from_column_slice(r, r, v)
}

/// Stack equally wide matrices vertically.
pub fn vstack(blocks: &[Mat]) -> Mat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// `m^k` by repeated multiplication.
pub fn power(m: &Mat, k: usize) -> Mat {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Group nearly equal complex numbers. Returns `(representative, members)`
/// pairs where each member index lies within `tol` of some other member.
pub fn cluster(values: &[C64], tol: f64) -> Vec<(C64, Vec<usize>)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re).then(values[a].im.total_cmp(&values[b].im)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let hit = groups.iter_mut().find(|g| g.iter().any(|&j| (values[i] - values[j]).norm() <= tol));
        match hit {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&i| values[i]).sum::<C64>() / g.len() as f64;
            (mean, g)
        })
        .collect()
}
