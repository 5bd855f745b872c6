// SPDX-License-Identifier: Apache-2.0

use super::{KernelError, MatrixKernel};
use crate::linalg::hermitian_eigenvalues;
use crate::{Mat, C64};
use rayon::prelude::*;
use serde::Serialize;

const VERDICT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

impl Verdict {
    pub fn from_extremes(min: f64, max: f64) -> Self {
        let scale = max.abs().max(f64::MIN_POSITIVE);
        if min > VERDICT_TOL * scale {
            Verdict::PositiveDefinite
        } else if min >= -VERDICT_TOL * scale {
            Verdict::PositiveSemidefinite
        } else {
            Verdict::Indefinite
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::PositiveDefinite => "positive-definite",
            Verdict::PositiveSemidefinite => "positive-semidefinite",
            Verdict::Indefinite => "indefinite",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    #[serde(serialize_with = "crate::spec::ser_points")]
    pub points: Vec<Vec<C64>>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub verdict: Verdict,
}

/// Block Gram matrix `[K(z_i, z_j)]`, optionally weighted by a scalar
/// kernel `φ(z_i, z_j)`.
fn weighted_gram(k: &MatrixKernel, points: &[Vec<C64>], weight: &(dyn Fn(&[C64], &[C64]) -> C64 + Sync)) -> Result<Mat, KernelError> {
    let r = k.rank();
    let m = points.len();
    let rows: Vec<Vec<Mat>> = points
        .par_iter()
        .map(|zi| points.iter().map(|zj| k.evaluate(zi, zj).map(|b| b * weight(zi, zj))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let mut g = Mat::zeros(r * m, r * m);
    for (i, row) in rows.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            g.view_mut((i * r, j * r), (r, r)).copy_from(b);
        }
    }
    Ok(g)
}

pub fn gram_matrix(k: &MatrixKernel, points: &[Vec<C64>]) -> Result<Mat, KernelError> {
    weighted_gram(k, points, &|_, _| C64::new(1.0, 0.0))
}

fn report(g: &Mat, points: &[Vec<C64>]) -> GramReport {
    let ev = hermitian_eigenvalues(g);
    let min = ev.first().copied().unwrap_or(0.0);
    let max = ev.last().copied().unwrap_or(0.0);
    GramReport { points: points.to_vec(), min_eigenvalue: min, max_eigenvalue: max, verdict: Verdict::from_extremes(min, max) }
}

/// Classify the block Gram matrix by its extreme eigenvalues.
pub fn gram_check(k: &MatrixKernel, points: &[Vec<C64>]) -> Result<GramReport, KernelError> {
    if points.len() < 2 {
        return Err(KernelError::InsufficientSamples { needed: 2, got: points.len() });
    }
    Ok(report(&gram_matrix(k, points)?, points))
}

/// Gram test for `(c² − z_j w̄_j) K(z, w)`: semidefinite is consistent with
/// `‖M_{z_j}‖ ≤ c`, indefinite proves the bound fails. `j` is 0-based.
pub fn bounded_multiplier_test(k: &MatrixKernel, j: usize, c: f64, points: &[Vec<C64>]) -> Result<GramReport, KernelError> {
    if j >= k.dim() {
        return Err(KernelError::DimensionMismatch { expected: k.dim(), got: j + 1 });
    }
    if points.len() < 2 {
        return Err(KernelError::InsufficientSamples { needed: 2, got: points.len() });
    }
    let c2 = c * c;
    let g = weighted_gram(k, points, &|z, w| c2 - z[j] * w[j].conj())?;
    Ok(report(&g, points))
}

/// Search the two-point configurations `{0, r·e_j}` for an indefinite
/// weighted Gram matrix.
pub fn bounded_witness_search(k: &MatrixKernel, j: usize, c: f64, radii: &[f64]) -> Result<Option<GramReport>, KernelError> {
    let zero = vec![C64::new(0.0, 0.0); k.dim()];
    for &r in radii {
        let mut p = zero.clone();
        p[j] = C64::new(r, 0.0);
        let rep = bounded_multiplier_test(k, j, c, &[zero.clone(), p])?;
        if rep.verdict == Verdict::Indefinite {
            return Ok(Some(rep));
        }
    }
    Ok(None)
}
