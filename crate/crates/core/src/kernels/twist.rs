// SPDX-License-Identifier: Apache-2.0

//! Normalization, commutants and constant congruences between kernels.

use super::{KernelError, MatrixKernel};
use crate::linalg::{hermitian_inv_sqrt, intertwiner_rows, inverse, null_space, unvec, vstack};
use crate::sampling::{polydisc_point, rng};
use crate::{Mat, C64};
use nalgebra::DVector;
use serde::Serialize;

/// Relative singular-value cutoff for the sampled linear systems.
const NULL_TOL: f64 = 1e-8;
/// Relative residual under which a congruence counts as verified.
const CONGRUENCE_TOL: f64 = 1e-8;

/// Kernel normalized at the origin: `K̂₀(z,0) = K̂₀(0,w) = I`.
pub fn normalize(k: &MatrixKernel) -> Result<MatrixKernel, KernelError> {
    let zero = vec![C64::new(0.0, 0.0); k.dim()];
    let k00 = k.evaluate(&zero, &zero)?;
    let s = hermitian_inv_sqrt(&k00).ok_or_else(|| KernelError::Singular("K(0,0)".into()))?;
    Ok(MatrixKernel::normalized_from(k.clone(), s))
}

/// `count` seeded pairs of points with coordinates of modulus at most 0.7.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vec<C64>, Vec<C64>)> {
    let mut g = rng(seed);
    (0..count).map(|_| (polydisc_point(&mut g, n, 0.7), polydisc_point(&mut g, n, 0.7))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Commutant {
    pub dimension: usize,
    #[serde(serialize_with = "crate::spec::ser_matrices")]
    pub basis: Vec<Mat>,
}

/// Constant matrices commuting with the normalized kernel at every sample.
pub fn commutant_projections(k: &MatrixKernel, pairs: &[(Vec<C64>, Vec<C64>)]) -> Result<Commutant, KernelError> {
    let r = k.rank();
    if pairs.len() < r * r {
        return Err(KernelError::InsufficientSamples { needed: r * r, got: pairs.len() });
    }
    let kn = normalize(k)?;
    let blocks = pairs
        .iter()
        .map(|(z, w)| {
            let x = kn.evaluate(z, w)?;
            let scale = x.norm().max(1e-300);
            Ok(intertwiner_rows(&x, &x) / C64::new(scale, 0.0))
        })
        .collect::<Result<Vec<_>, KernelError>>()?;
    let ns = null_space(&vstack(&blocks), NULL_TOL);
    let basis = ns
        .column_iter()
        .map(|c| {
            let m = unvec(c.as_slice(), r);
            phase_normalized(&m)
        })
        .collect::<Vec<_>>();
    Ok(Commutant { dimension: basis.len(), basis })
}

#[derive(Debug, Clone, Serialize)]
pub struct Congruence {
    #[serde(serialize_with = "crate::spec::ser_matrix")]
    pub a: Mat,
    /// Largest relative residual `‖K₂ − A K₁ A*‖ / ‖K₂‖` over the samples.
    pub residual: f64,
}

/// Rotate `m` by a unit scalar so its largest entry (first in row-major
/// order, up to rounding) is real and positive.
fn phase_normalized(m: &Mat) -> Mat {
    let top = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if top == 0.0 {
        return m.clone();
    }
    let mut pick = C64::new(1.0, 0.0);
    'outer: for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].norm() >= top * (1.0 - 1e-9) {
                pick = m[(i, j)];
                break 'outer;
            }
        }
    }
    m * (pick.norm() / pick)
}

/// Find constant `A` with `K₂(z,w) = A K₁(z,w) A*` at the sampled pairs.
///
/// With `X(z,w) = K(z,w) K(0,w)^{-1}` the relation becomes linear,
/// `A X₁ = X₂ A`; its solution space is scanned for an element whose
/// rescaling matches `K₂(0,0)` and which passes the full quadratic check.
pub fn find_congruence(k1: &MatrixKernel, k2: &MatrixKernel, pairs: &[(Vec<C64>, Vec<C64>)]) -> Result<Option<Congruence>, KernelError> {
    if k1.dim() != k2.dim() || k1.rank() != k2.rank() {
        return Err(KernelError::DimensionMismatch { expected: k1.rank(), got: k2.rank() });
    }
    let r = k1.rank();
    let zero = vec![C64::new(0.0, 0.0); k1.dim()];
    let mut blocks = Vec::with_capacity(pairs.len());
    for (z, w) in pairs {
        let x1 = k1.evaluate(z, w)? * inverse(&k1.evaluate(&zero, w)?).ok_or_else(|| KernelError::Singular("K₁(0,w)".into()))?;
        let x2 = k2.evaluate(z, w)? * inverse(&k2.evaluate(&zero, w)?).ok_or_else(|| KernelError::Singular("K₂(0,w)".into()))?;
        let scale = (x1.norm() + x2.norm()).max(1e-300);
        blocks.push(intertwiner_rows(&x1, &x2) / C64::new(scale, 0.0));
    }
    let ns = null_space(&vstack(&blocks), NULL_TOL);
    if ns.ncols() == 0 {
        return Ok(None);
    }
    let mut candidates: Vec<DVector<C64>> = ns.column_iter().map(|c| c.into_owned()).collect();
    if ns.ncols() > 1 {
        let weights: Vec<C64> = (0..ns.ncols()).map(|k| C64::new(1.0 + 0.37 * k as f64, 0.11 * k as f64)).collect();
        candidates.push(&ns * DVector::from_vec(weights));
    }
    let t = k2.evaluate(&zero, &zero)?;
    let k1_00 = k1.evaluate(&zero, &zero)?;
    let mut best: Option<Congruence> = None;
    for v in candidates {
        let a0 = unvec(v.as_slice(), r);
        let m = &a0 * &k1_00 * a0.adjoint();
        let s = t.trace() / m.trace();
        if s.re.is_nan() || s.re <= 0.0 || s.im.abs() > 1e-8 * s.re {
            continue;
        }
        let a = phase_normalized(&(a0 * C64::new(s.re.sqrt(), 0.0)));
        let mut residual: f64 = 0.0;
        for (z, w) in pairs.iter().chain(std::iter::once(&(zero.clone(), zero.clone()))) {
            let lhs = k2.evaluate(z, w)?;
            let rhs = &a * k1.evaluate(z, w)? * a.adjoint();
            residual = residual.max((&lhs - rhs).norm() / lhs.norm().max(1e-300));
        }
        if residual < CONGRUENCE_TOL && best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(Congruence { a, residual });
        }
    }
    Ok(best)
}

/// `A` with `K(σz, σw) = A K(z,w) A*`, searched on 24 seeded pairs.
pub fn permutation_twist_equivalent(k: &MatrixKernel, sigma: &[usize]) -> Result<Option<Congruence>, KernelError> {
    permutation_twist_with_pairs(k, sigma, &sample_pairs(k.dim(), 24, 0x5157))
}

pub fn permutation_twist_with_pairs(k: &MatrixKernel, sigma: &[usize], pairs: &[(Vec<C64>, Vec<C64>)]) -> Result<Option<Congruence>, KernelError> {
    let twisted = MatrixKernel::permuted(k.clone(), sigma.to_vec())?;
    find_congruence(k, &twisted, pairs)
}
