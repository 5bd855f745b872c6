// SPDX-License-Identifier: Apache-2.0

//! Curvature `𝒦^{ij}(w) = ∂_i [K(w,w)^{-1} ∂̄_j K(w,w)]` by finite
//! differences on the holomorphic slots of `G(z, u) = K(z, ū)`.
//!
//! Both derivatives are central differences with one Richardson step
//! (`h` and `h/2`), taken along real increments of a holomorphic variable,
//! so each is exact to `O(h⁴)`.

use crate::cocycles::{Cocycle, CocycleError};
use crate::kernels::{find_congruence, sample_pairs, Congruence, KernelError, MatrixKernel};
use crate::linalg::{eigenvalues, inverse, power, sort_spectrum, spectrum_distance};
use crate::mobius::{MobiusError, MobiusTuple};
use crate::{Mat, C64};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_STEP: f64 = 1e-3;
/// Beyond this modulus the difference scheme loses its accuracy budget.
pub const WARRANTY_RADIUS: f64 = 0.95;
/// Spectra closer than this count as equal.
pub const SPECTRUM_TOL: f64 = 1e-6;
const NILPOTENT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error("K(w,w) is singular at the basepoint")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureTensor {
    pub n: usize,
    pub r: usize,
    #[serde(serialize_with = "crate::spec::ser_point")]
    pub basepoint: Vec<C64>,
    /// `blocks[i][j] = 𝒦^{ij}(w)`.
    #[serde(serialize_with = "crate::spec::ser_matrix_grid")]
    pub blocks: Vec<Vec<Mat>>,
    pub warnings: Vec<String>,
}

impl CurvatureTensor {
    pub fn block(&self, i: usize, j: usize) -> &Mat {
        &self.blocks[i][j]
    }

    /// The `(nr)×(nr)` matrix with block `(i, j)` equal to `𝒦^{ij}`.
    pub fn assembled(&self) -> Mat {
        let (n, r) = (self.n, self.r);
        let mut m = Mat::zeros(n * r, n * r);
        for i in 0..n {
            for j in 0..n {
                m.view_mut((i * r, j * r), (r, r)).copy_from(&self.blocks[i][j]);
            }
        }
        m
    }

    fn from_assembled(m: &Mat, n: usize, r: usize, basepoint: Vec<C64>, warnings: Vec<String>) -> Self {
        let blocks = (0..n).map(|i| (0..n).map(|j| m.view((i * r, j * r), (r, r)).into_owned()).collect()).collect();
        Self { n, r, basepoint, blocks, warnings }
    }

    /// Sorted spectrum of `𝒦^{ii}`.
    pub fn diagonal_spectrum(&self, i: usize) -> Vec<C64> {
        let mut ev = eigenvalues(&self.blocks[i][i]);
        sort_spectrum(&mut ev);
        ev
    }

    /// Largest entrywise distance to another tensor.
    pub fn distance(&self, other: &Self) -> f64 {
        crate::linalg::max_abs(&(self.assembled() - other.assembled()))
    }
}

fn warnings_for(w: &[C64]) -> Vec<String> {
    w.iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > WARRANTY_RADIUS)
        .map(|(i, c)| format!("|w_{}| = {:.4} exceeds {WARRANTY_RADIUS}; finite differences lose accuracy", i + 1, c.norm()))
        .collect()
}

/// Richardson-extrapolated central difference of `f` along a real step.
fn richardson<F>(f: F, h: f64) -> Result<Mat, KernelError>
where
    F: Fn(f64) -> Result<Mat, KernelError>,
{
    let d = |s: f64| -> Result<Mat, KernelError> { Ok((f(s)? - f(-s)?) / C64::new(2.0 * s, 0.0)) };
    let coarse = d(h)?;
    let fine = d(h / 2.0)?;
    Ok((fine * C64::new(4.0, 0.0) - coarse) / C64::new(3.0, 0.0))
}

fn shifted(p: &[C64], i: usize, s: f64) -> Vec<C64> {
    let mut q = p.to_vec();
    q[i] += s;
    q
}

/// `H_j(z) = G(z,u)^{-1} ∂_{u_j} G(z,u)` for every `j`.
fn connection_forms(k: &MatrixKernel, z: &[C64], u: &[C64], h: f64) -> Result<Vec<Mat>, KernelError> {
    let g = k.eval_holo(z, u)?;
    let gi = inverse(&g).ok_or_else(|| KernelError::Singular("K(w,w)".into()))?;
    (0..k.dim()).map(|j| Ok(&gi * richardson(|s| k.eval_holo(z, &shifted(u, j, s)), h)?)).collect()
}

/// Curvature at `w` with step `h` (the finer Richardson level is `h/2`).
pub fn curvature_with_step(k: &MatrixKernel, w: &[C64], h: f64) -> Result<CurvatureTensor, CurvatureError> {
    let n = k.dim();
    if w.len() != n {
        return Err(CurvatureError::DimensionMismatch(format!("basepoint has {} coordinates, kernel n = {n}", w.len())));
    }
    if !crate::mobius::in_polydisc(w) {
        return Err(KernelError::OutsideDisc.into());
    }
    let u: Vec<C64> = w.iter().map(|c| c.conj()).collect();
    let g0 = k.eval_holo(w, &u)?;
    if inverse(&g0).is_none() {
        return Err(CurvatureError::Singular);
    }
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            // ∂_{z_i} of every H_j at once: four evaluations of the forms.
            let at = |s: f64| connection_forms(k, &shifted(w, i, s), &u, h);
            let (p1, m1, p2, m2) = (at(h)?, at(-h)?, at(h / 2.0)?, at(-h / 2.0)?);
            Ok((0..n)
                .map(|j| {
                    let coarse = (&p1[j] - &m1[j]) / C64::new(2.0 * h, 0.0);
                    let fine = (&p2[j] - &m2[j]) / C64::new(h, 0.0);
                    (fine * C64::new(4.0, 0.0) - coarse) / C64::new(3.0, 0.0)
                })
                .collect::<Vec<Mat>>())
        })
        .collect::<Result<Vec<_>, KernelError>>()?;
    Ok(CurvatureTensor { n, r: k.rank(), basepoint: w.to_vec(), blocks: rows, warnings: warnings_for(w) })
}

pub fn curvature(k: &MatrixKernel, w: &[C64]) -> Result<CurvatureTensor, CurvatureError> {
    curvature_with_step(k, w, DEFAULT_STEP)
}

fn diag_c(v: &[C64]) -> Mat {
    Mat::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

/// `𝒦(w)` from `𝒦(g(w))`: `(Dg(w) ⊗ (J*)^{-1}) 𝒦(g(w)) (conj Dg(w) ⊗ J*)`.
pub fn transport(at_image: &CurvatureTensor, j: &Cocycle, g: &MobiusTuple, w: &[C64]) -> Result<CurvatureTensor, CurvatureError> {
    let dg = g.derivatives(w)?;
    let js = j.eval(g, w)?.adjoint();
    let js_inv = inverse(&js).ok_or(CurvatureError::Singular)?;
    let d = diag_c(&dg);
    let left = d.kronecker(&js_inv);
    let right = d.map(|c| c.conj()).kronecker(&js);
    let m = left * at_image.assembled() * right;
    Ok(CurvatureTensor::from_assembled(&m, at_image.n, at_image.r, w.to_vec(), warnings_for(w)))
}

/// Residual of the transformation rule at `w` for the pair `(K, J)`.
pub fn verify_transformation_rule(k: &MatrixKernel, j: &Cocycle, g: &MobiusTuple, w: &[C64]) -> Result<f64, CurvatureError> {
    let direct = curvature(k, w)?;
    let image = curvature(k, &g.act(w)?)?;
    let moved = transport(&image, j, g, w)?;
    Ok((direct.assembled() - moved.assembled()).norm())
}

/// `𝒦(w)` from `𝒦(0)` through the tuple sending `w` to the origin.
pub fn curvature_from_origin(k: &MatrixKernel, j: &Cocycle, w: &[C64]) -> Result<CurvatureTensor, CurvatureError> {
    let g = MobiusTuple::point_killer(w)?;
    let origin = curvature(k, &vec![C64::new(0.0, 0.0); k.dim()])?;
    transport(&origin, j, &g, w)
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub offdiag_nilpotent: bool,
    pub diag_similar: bool,
    #[serde(serialize_with = "crate::spec::ser_points")]
    pub diag_spectra: Vec<Vec<C64>>,
    /// `‖(𝒦^{ij}(0))^r‖` for `i ≠ j`, as `(i, j, norm)` with 0-based indices.
    pub offdiag_power_norms: Vec<(usize, usize, f64)>,
    pub warnings: Vec<String>,
}

/// Necessary conditions for homogeneity read off `𝒦(0)`: off-diagonal
/// blocks nilpotent, diagonal blocks mutually similar.
pub fn aut_obstruction_report(k: &MatrixKernel) -> Result<ObstructionReport, CurvatureError> {
    let t = curvature(k, &vec![C64::new(0.0, 0.0); k.dim()])?;
    Ok(obstructions_of(&t))
}

pub fn obstructions_of(t: &CurvatureTensor) -> ObstructionReport {
    let mut norms = Vec::new();
    for i in 0..t.n {
        for j in 0..t.n {
            if i != j {
                norms.push((i, j, power(&t.blocks[i][j], t.r).norm()));
            }
        }
    }
    let spectra: Vec<Vec<C64>> = (0..t.n).map(|i| t.diagonal_spectrum(i)).collect();
    let diag_similar = spectra.windows(2).all(|p| spectrum_distance(&p[0], &p[1]) < SPECTRUM_TOL);
    ObstructionReport {
        offdiag_nilpotent: norms.iter().all(|x| x.2 < NILPOTENT_TOL),
        diag_similar,
        diag_spectra: spectra,
        offdiag_power_norms: norms,
        warnings: t.warnings.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockInvariants {
    /// 0-based block index `i` of `𝒦^{ii}(0)`.
    pub index: usize,
    #[serde(serialize_with = "crate::spec::ser_point")]
    pub spectrum: Vec<C64>,
    #[serde(serialize_with = "crate::spec::ser_c64")]
    pub trace: C64,
    #[serde(serialize_with = "crate::spec::ser_c64")]
    pub det: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fingerprint {
    pub n: usize,
    pub r: usize,
    pub blocks: Vec<BlockInvariants>,
}

/// Traces, determinants and sorted spectra of the diagonal blocks of `𝒦(0)`.
pub fn equivalence_invariants(k: &MatrixKernel) -> Result<Fingerprint, CurvatureError> {
    let t = curvature(k, &vec![C64::new(0.0, 0.0); k.dim()])?;
    Ok(fingerprint_of(&t))
}

pub fn fingerprint_of(t: &CurvatureTensor) -> Fingerprint {
    let blocks = (0..t.n)
        .map(|i| {
            let b = &t.blocks[i][i];
            BlockInvariants { index: i, spectrum: t.diagonal_spectrum(i), trace: b.trace(), det: b.determinant() }
        })
        .collect();
    Fingerprint { n: t.n, r: t.r, blocks }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantDifference {
    pub block: usize,
    /// `trace`, `det` or `spectrum`.
    pub invariant: &'static str,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceDecision {
    /// False when curvature at the origin separates the kernels.
    pub equivalent_possible: bool,
    pub differences: Vec<InvariantDifference>,
    /// Human-readable summary of the first difference.
    pub witness: Option<String>,
    /// A constant `A` with `K₂ = A K₁ A*` at the samples, when one exists.
    pub congruence: Option<Congruence>,
}

fn fmt_c(z: C64) -> String {
    crate::spec::format_c64(z)
}

/// Compare two fingerprints; every differing invariant is listed in the
/// order trace, det, spectrum within each block.
pub fn compare_fingerprints(a: &Fingerprint, b: &Fingerprint) -> Vec<InvariantDifference> {
    let mut out = Vec::new();
    for (x, y) in a.blocks.iter().zip(&b.blocks) {
        let scale = |p: C64, q: C64| p.norm().max(q.norm()).max(1.0);
        if (x.trace - y.trace).norm() > SPECTRUM_TOL * scale(x.trace, y.trace) {
            out.push(InvariantDifference { block: x.index, invariant: "trace", left: fmt_c(x.trace), right: fmt_c(y.trace) });
        }
        if (x.det - y.det).norm() > SPECTRUM_TOL * scale(x.det, y.det) {
            out.push(InvariantDifference { block: x.index, invariant: "det", left: fmt_c(x.det), right: fmt_c(y.det) });
        }
        if spectrum_distance(&x.spectrum, &y.spectrum) > SPECTRUM_TOL {
            let show = |s: &[C64]| format!("[{}]", s.iter().map(|&c| fmt_c(c)).collect::<Vec<_>>().join(", "));
            out.push(InvariantDifference { block: x.index, invariant: "spectrum", left: show(&x.spectrum), right: show(&y.spectrum) });
        }
    }
    out
}

/// Curvature-based test of local equivalence, plus a search for a constant
/// congruence when the curvature does not separate the kernels.
pub fn decide_equivalence(k1: &MatrixKernel, k2: &MatrixKernel) -> Result<EquivalenceDecision, CurvatureError> {
    if k1.dim() != k2.dim() || k1.rank() != k2.rank() {
        return Err(CurvatureError::DimensionMismatch(format!("(n, r) = ({}, {}) vs ({}, {})", k1.dim(), k1.rank(), k2.dim(), k2.rank())));
    }
    let differences = compare_fingerprints(&equivalence_invariants(k1)?, &equivalence_invariants(k2)?);
    if let Some(d) = differences.first() {
        let witness = format!("{} of K^{{{}{}}}(0): {} vs {}", d.invariant, d.block + 1, d.block + 1, d.left, d.right);
        return Ok(EquivalenceDecision { equivalent_possible: false, differences, witness: Some(witness), congruence: None });
    }
    let r = k1.rank();
    let pairs = sample_pairs(k1.dim(), (r * r).max(24), 0xE9);
    let congruence = find_congruence(k1, k2, &pairs)?;
    Ok(EquivalenceDecision { equivalent_possible: true, differences, witness: None, congruence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn line_bundle_curvature() {
        let k = MatrixKernel::rank1(vec![1.5, 2.5]).unwrap();
        let w = vec![c64(0.3, -0.2), c64(0.0, 0.5)];
        let t = curvature(&k, &w).unwrap();
        for (i, l) in [1.5, 2.5].iter().enumerate() {
            let expect = l / (1.0 - w[i].norm_sqr()).powi(2);
            assert!((t.block(i, i)[(0, 0)] - expect).norm() < 1e-7);
        }
        assert!(t.block(0, 1)[(0, 0)].norm() < 1e-7);
    }
}
