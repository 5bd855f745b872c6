// SPDX-License-Identifier: Apache-2.0

//! Matrix-valued kernels `K(z, w)` on `Dⁿ × Dⁿ`.
//!
//! Every family is written as `K(z, w) = G(z, w̄)` with `G` holomorphic in
//! both slots; [`MatrixKernel::eval_holo`] exposes `G` directly, which is
//! what the curvature engine differentiates.

mod gram;
mod twist;

pub use gram::{bounded_multiplier_test, bounded_witness_search, gram_check, gram_matrix, GramReport, Verdict};
pub use twist::{
    commutant_projections, find_congruence, normalize, permutation_twist_equivalent, permutation_twist_with_pairs, sample_pairs, Commutant, Congruence,
};

use crate::{Mat, C64};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tensor-product kernel has no single-variable factor")]
    MissingFactor,
    #[error("expected a point of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not inside the polydisc")]
    OutsideDisc,
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("need at least {needed} sample pairs, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
}

/// A user-supplied kernel given by its sesqui-holomorphic form `G(z, u)`,
/// `u = w̄`.
pub trait HoloKernel: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn rank(&self) -> usize;
    fn eval_holo(&self, z: &[C64], u: &[C64]) -> Mat;
}

/// Single-variable factor of a tensor-product kernel.
#[derive(Debug, Clone)]
pub enum DiscFactor {
    /// Rank-three homogeneous kernel on the disc whose multiplier is the
    /// one-variable rank-three cocycle; see [`homogeneous3`].
    Homogeneous3 { lambda: f64, mu1: f64, mu2: f64 },
    /// Any kernel with `n = 1`.
    Kernel(Box<MatrixKernel>),
}

impl DiscFactor {
    pub fn rank(&self) -> usize {
        match self {
            DiscFactor::Homogeneous3 { .. } => 3,
            DiscFactor::Kernel(k) => k.rank(),
        }
    }

    fn eval_holo(&self, z: C64, u: C64) -> Mat {
        match self {
            DiscFactor::Homogeneous3 { lambda, mu1, mu2 } => homogeneous3(*lambda, *mu1, *mu2, z, u),
            DiscFactor::Kernel(k) => k.eval_holo_unchecked(&[z], &[u]),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    Rank1Product {
        lambda: Vec<f64>,
    },
    Rank2 {
        lambda: Vec<f64>,
        mu: f64,
    },
    Rank3TypeI {
        lambda: Vec<f64>,
        mu1: f64,
        mu2: f64,
    },
    Rank3TypeII {
        alpha: Vec<f64>,
        beta1: f64,
        beta2: f64,
    },
    /// `F(z₁, w₁) · ∏_{i≥2} (1 − z_i w̄_i)^{−λ_i}`; `lambda` holds `λ₂..λₙ`.
    TensorProduct {
        factor: Option<DiscFactor>,
        lambda: Vec<f64>,
    },
    /// `A K(z, w) A*`.
    Twisted {
        base: Box<MatrixKernel>,
        a: Mat,
    },
    /// `K(σz, σw)` with `(σz)_i = z_{σ(i)}`.
    Permuted {
        base: Box<MatrixKernel>,
        sigma: Vec<usize>,
    },
    /// Block-diagonal sum.
    DirectSum {
        parts: Vec<MatrixKernel>,
    },
    /// The same Hermitian matrix at every pair of points.
    Constant {
        matrix: Mat,
    },
    /// `K₀(z,0)^{-1} K₀(z,w) K₀(0,w)^{-1}` with `K₀ = S K S`, `S = K(0,0)^{-1/2}`.
    Normalized {
        base: Box<MatrixKernel>,
        s: Mat,
    },
    Custom(Arc<dyn HoloKernel>),
}

#[derive(Debug, Clone)]
pub struct MatrixKernel {
    n: usize,
    rank: usize,
    family: Family,
}

fn positive(name: &str, v: f64) -> Result<(), KernelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(KernelError::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<(), KernelError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(KernelError::InvalidParameter(format!("{name} must be non-negative, got {v}")))
    }
}

fn all_positive(name: &str, v: &[f64]) -> Result<(), KernelError> {
    v.iter().try_for_each(|&x| positive(name, x))
}

fn at_least(name: &str, v: &[f64], n: usize) -> Result<(), KernelError> {
    if v.len() < n {
        return Err(KernelError::InvalidParameter(format!("{name} needs at least {n} entries, got {}", v.len())));
    }
    Ok(())
}

impl MatrixKernel {
    pub fn rank1(lambda: Vec<f64>) -> Result<Self, KernelError> {
        at_least("lambda", &lambda, 1)?;
        all_positive("lambda", &lambda)?;
        Ok(Self { n: lambda.len(), rank: 1, family: Family::Rank1Product { lambda } })
    }

    pub fn rank2(lambda: Vec<f64>, mu: f64) -> Result<Self, KernelError> {
        at_least("lambda", &lambda, 1)?;
        all_positive("lambda", &lambda)?;
        nonnegative("mu", mu)?;
        Ok(Self { n: lambda.len(), rank: 2, family: Family::Rank2 { lambda, mu } })
    }

    pub fn type_i(lambda: Vec<f64>, mu1: f64, mu2: f64) -> Result<Self, KernelError> {
        at_least("lambda", &lambda, 2)?;
        all_positive("lambda", &lambda)?;
        nonnegative("mu1", mu1)?;
        nonnegative("mu2", mu2)?;
        Ok(Self { n: lambda.len(), rank: 3, family: Family::Rank3TypeI { lambda, mu1, mu2 } })
    }

    pub fn type_ii(alpha: Vec<f64>, beta1: f64, beta2: f64) -> Result<Self, KernelError> {
        at_least("alpha", &alpha, 2)?;
        all_positive("alpha", &alpha)?;
        positive("beta1", beta1)?;
        nonnegative("beta2", beta2)?;
        Ok(Self { n: alpha.len(), rank: 3, family: Family::Rank3TypeII { alpha, beta1, beta2 } })
    }

    /// Tensor product of a disc factor with line factors `λ₂..λₙ`.
    /// `factor = None` builds a kernel that refuses to evaluate; its rank is
    /// taken to be 3.
    pub fn tensor_product(factor: Option<DiscFactor>, lambda: Vec<f64>) -> Result<Self, KernelError> {
        all_positive("lambda", &lambda)?;
        let rank = match &factor {
            Some(DiscFactor::Homogeneous3 { lambda: l, mu1, mu2 }) => {
                positive("factor lambda", *l)?;
                nonnegative("factor mu1", *mu1)?;
                nonnegative("factor mu2", *mu2)?;
                3
            }
            Some(DiscFactor::Kernel(k)) => {
                if k.dim() != 1 {
                    return Err(KernelError::InvalidParameter("factor kernel must have n = 1".into()));
                }
                k.rank()
            }
            None => 3,
        };
        Ok(Self { n: lambda.len() + 1, rank, family: Family::TensorProduct { factor, lambda } })
    }

    pub fn twisted(base: MatrixKernel, a: Mat) -> Result<Self, KernelError> {
        if a.nrows() != base.rank || a.ncols() != base.rank {
            return Err(KernelError::InvalidParameter("twist matrix has the wrong size".into()));
        }
        if crate::linalg::condition_number(&a) > 1e12 {
            return Err(KernelError::Singular("twist matrix".into()));
        }
        Ok(Self { n: base.n, rank: base.rank, family: Family::Twisted { base: Box::new(base), a } })
    }

    pub fn permuted(base: MatrixKernel, sigma: Vec<usize>) -> Result<Self, KernelError> {
        let mut seen = vec![false; base.n];
        if sigma.len() != base.n || sigma.iter().any(|&s| s >= base.n || std::mem::replace(&mut seen[s], true)) {
            return Err(KernelError::InvalidParameter(format!("{sigma:?} is not a permutation of 0..{}", base.n)));
        }
        Ok(Self { n: base.n, rank: base.rank, family: Family::Permuted { base: Box::new(base), sigma } })
    }

    pub fn direct_sum(parts: Vec<MatrixKernel>) -> Result<Self, KernelError> {
        let n = parts.first().map(|p| p.n).ok_or_else(|| KernelError::InvalidParameter("empty direct sum".into()))?;
        if parts.iter().any(|p| p.n != n) {
            return Err(KernelError::InvalidParameter("direct-sum parts live on different polydiscs".into()));
        }
        let rank = parts.iter().map(|p| p.rank).sum();
        Ok(Self { n, rank, family: Family::DirectSum { parts } })
    }

    pub fn constant(n: usize, matrix: Mat) -> Result<Self, KernelError> {
        if matrix.nrows() != matrix.ncols() || (&matrix - matrix.adjoint()).norm() > 1e-12 * matrix.norm().max(1.0) {
            return Err(KernelError::InvalidParameter("constant kernel must be a Hermitian matrix".into()));
        }
        Ok(Self { n, rank: matrix.nrows(), family: Family::Constant { matrix } })
    }

    pub fn custom(k: Arc<dyn HoloKernel>) -> Self {
        Self { n: k.dim(), rank: k.rank(), family: Family::Custom(k) }
    }

    pub(crate) fn normalized_from(base: MatrixKernel, s: Mat) -> Self {
        Self { n: base.n, rank: base.rank, family: Family::Normalized { base: Box::new(base), s } }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Short family name as used in JSON documents.
    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Rank1Product { .. } => "rank1_product",
            Family::Rank2 { .. } => "rank2",
            Family::Rank3TypeI { .. } => "rank3_type_i",
            Family::Rank3TypeII { .. } => "rank3_type_ii",
            Family::TensorProduct { .. } => "tensor_product",
            Family::Twisted { .. } => "twisted",
            Family::Permuted { .. } => "permuted",
            Family::DirectSum { .. } => "direct_sum",
            Family::Constant { .. } => "constant",
            Family::Normalized { .. } => "normalized",
            Family::Custom(_) => "custom",
        }
    }

    fn check_ready(&self) -> Result<(), KernelError> {
        match &self.family {
            Family::TensorProduct { factor: None, .. } => Err(KernelError::MissingFactor),
            Family::TensorProduct { factor: Some(DiscFactor::Kernel(k)), .. } => k.check_ready(),
            Family::Twisted { base, .. } | Family::Permuted { base, .. } | Family::Normalized { base, .. } => base.check_ready(),
            Family::DirectSum { parts } => parts.iter().try_for_each(|p| p.check_ready()),
            _ => Ok(()),
        }
    }

    /// `K(z, w)`.
    pub fn evaluate(&self, z: &[C64], w: &[C64]) -> Result<Mat, KernelError> {
        for p in [z, w] {
            if p.len() != self.n {
                return Err(KernelError::DimensionMismatch { expected: self.n, got: p.len() });
            }
            if !crate::mobius::in_polydisc(p) {
                return Err(KernelError::OutsideDisc);
            }
        }
        let u: Vec<C64> = w.iter().map(|c| c.conj()).collect();
        self.eval_holo(z, &u)
    }

    /// `G(z, u)` with `K(z, w) = G(z, w̄)`. The slots are not required to
    /// be conjugate, which is what lets the curvature engine differentiate
    /// each of them separately.
    pub fn eval_holo(&self, z: &[C64], u: &[C64]) -> Result<Mat, KernelError> {
        for p in [z, u] {
            if p.len() != self.n {
                return Err(KernelError::DimensionMismatch { expected: self.n, got: p.len() });
            }
        }
        self.check_ready()?;
        Ok(self.eval_holo_unchecked(z, u))
    }

    fn eval_holo_unchecked(&self, z: &[C64], u: &[C64]) -> Mat {
        match &self.family {
            Family::Rank1Product { lambda } => Mat::from_element(1, 1, line_product(lambda, z, u)),
            Family::Rank2 { lambda, mu } => {
                let l1 = lambda[0];
                let x = one_minus(z[0], u[0]);
                let d = 1.0 / l1 + mu;
                let p0 = cpow(x, -l1);
                let p1 = cpow(x, -l1 - 1.0);
                let p2 = cpow(x, -l1 - 2.0);
                let m = Mat::from_row_slice(2, 2, &[p0, z[0] * p1, u[0] * p1, (d + z[0] * u[0]) * p2]);
                m * line_product(&lambda[1..], &z[1..], &u[1..])
            }
            Family::Rank3TypeI { lambda, mu1, mu2 } => type_i(lambda, *mu1, *mu2, z, u),
            Family::Rank3TypeII { alpha, beta1, beta2 } => type_ii(alpha, *beta1, *beta2, z, u),
            Family::TensorProduct { factor, lambda } => {
                let f = factor.as_ref().expect("checked by check_ready");
                f.eval_holo(z[0], u[0]) * line_product(lambda, &z[1..], &u[1..])
            }
            Family::Twisted { base, a } => a * base.eval_holo_unchecked(z, u) * a.adjoint(),
            Family::Permuted { base, sigma } => {
                let zs: Vec<C64> = sigma.iter().map(|&s| z[s]).collect();
                let us: Vec<C64> = sigma.iter().map(|&s| u[s]).collect();
                base.eval_holo_unchecked(&zs, &us)
            }
            Family::DirectSum { parts } => {
                let mut out = Mat::zeros(self.rank, self.rank);
                let mut at = 0;
                for p in parts {
                    let b = p.eval_holo_unchecked(z, u);
                    out.view_mut((at, at), (p.rank, p.rank)).copy_from(&b);
                    at += p.rank;
                }
                out
            }
            Family::Constant { matrix } => matrix.clone(),
            Family::Normalized { base, s } => {
                let zero = vec![C64::new(0.0, 0.0); self.n];
                let k0 = |a: &[C64], b: &[C64]| s * base.eval_holo_unchecked(a, b) * s;
                let left = k0(z, &zero);
                let right = k0(&zero, u);
                let mid = k0(z, u);
                let li = left.try_inverse().unwrap_or_else(|| Mat::from_element(self.rank, self.rank, C64::new(f64::NAN, 0.0)));
                let ri = right.try_inverse().unwrap_or_else(|| Mat::from_element(self.rank, self.rank, C64::new(f64::NAN, 0.0)));
                li * mid * ri
            }
            Family::Custom(k) => k.eval_holo(z, u),
        }
    }
}

#[inline]
fn one_minus(z: C64, u: C64) -> C64 {
    1.0 - z * u
}

/// Principal power `x^p`; on the polydisc `Re(1 − z w̄) > 0`, away from the cut.
#[inline]
pub(crate) fn cpow(x: C64, p: f64) -> C64 {
    (x.ln() * p).exp()
}

fn line_product(lambda: &[f64], z: &[C64], u: &[C64]) -> C64 {
    lambda.iter().zip(z.iter().zip(u)).fold(C64::new(1.0, 0.0), |acc, (&l, (&zi, &ui))| acc * cpow(one_minus(zi, ui), -l))
}

fn type_i(lambda: &[f64], mu1: f64, mu2: f64, z: &[C64], u: &[C64]) -> Mat {
    let a1 = 1.0 / lambda[0] + mu1 * mu1;
    let a2 = 1.0 / lambda[1] + mu2 * mu2;
    let (x1, x2) = (one_minus(z[0], u[0]), one_minus(z[1], u[1]));
    let (p1, p2) = (z[0] * u[0], z[1] * u[1]);
    let d = [x1 * x2, x2, x1];
    let one = C64::new(1.0, 0.0);
    let m = [[one, z[0], z[1]], [u[0], a1 + p1, u[0] * z[1]], [u[1], z[0] * u[1], a2 + p2]];
    let scalar = cpow(x1, -lambda[0] - 2.0) * cpow(x2, -lambda[1] - 2.0) * line_product(&lambda[2..], &z[2..], &u[2..]);
    Mat::from_fn(3, 3, |i, j| d[i] * m[i][j] * d[j] * scalar)
}

fn type_ii(alpha: &[f64], beta1: f64, beta2: f64, z: &[C64], u: &[C64]) -> Mat {
    let b1 = beta1 * beta1;
    let (x1, x2) = (one_minus(z[0], u[0]), one_minus(z[1], u[1]));
    let d = [x1, x2, C64::new(1.0, 0.0)];
    let zero = C64::new(0.0, 0.0);
    let corner = z[0] * u[0] + b1 * z[1] * u[1] + 1.0 / alpha[0] + b1 / alpha[1] + beta2 * beta2;
    let m = [[C64::new(1.0, 0.0), zero, z[0]], [zero, C64::new(b1, 0.0), b1 * z[1]], [u[0], b1 * u[1], corner]];
    let scalar = cpow(x1, -alpha[0] - 2.0) * cpow(x2, -alpha[1] - 2.0) * line_product(&alpha[2..], &z[2..], &u[2..]);
    Mat::from_fn(3, 3, |i, j| d[i] * m[i][j] * d[j] * scalar)
}

/// `∂_z^a ∂_u^b (1 − zu)^{−λ}`.
pub fn mixed_derivative(a: usize, b: usize, lambda: f64, z: C64, u: C64) -> C64 {
    let x = one_minus(z, u);
    let rising = |base: f64, k: usize| (0..k).fold(1.0, |acc, i| acc * (base + i as f64));
    let falling = |top: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (top - i) as f64);
    let binom = |top: usize, k: usize| falling(top, k) / falling(k, k);
    let head = rising(lambda, b);
    (0..=a.min(b))
        .map(|k| {
            let coeff = binom(a, k) * falling(b, k) * head * rising(lambda + b as f64, a - k);
            z.powi((b - k) as i32) * u.powi((a - k) as i32) * cpow(x, -lambda - (b + a - k) as f64) * coeff
        })
        .sum()
}

/// Rank-three homogeneous kernel on the disc.
///
/// Built from weights `λ, λ+2, λ+4` glued by derivatives:
/// `K = Σ_k μ_k² Γ_k k_{λ+2k} Γ_k*`, where `Γ₀ f = (f, p f', q f'')`,
/// `Γ₁ f = (0, f, s f')`, `Γ₂ f = (0, 0, f)`, with `p = 2/λ`,
/// `q = 3/(λ(λ+1))`, `s = 3/(λ+2)` and `μ₀ = 1`. These constants make its
/// multiplier exactly the closed-form one-variable rank-three cocycle.
pub fn homogeneous3(lambda: f64, mu1: f64, mu2: f64, z: C64, u: C64) -> Mat {
    let p = 2.0 / lambda;
    let q = 3.0 / (lambda * (lambda + 1.0));
    let s = 3.0 / (lambda + 2.0);
    let c0 = [1.0, p, q];
    let c1 = [1.0, s];
    let mut k = Mat::from_fn(3, 3, |i, j| mixed_derivative(i, j, lambda, z, u) * (c0[i] * c0[j]));
    for i in 0..2 {
        for j in 0..2 {
            k[(i + 1, j + 1)] += mixed_derivative(i, j, lambda + 2.0, z, u) * (mu1 * mu1 * c1[i] * c1[j]);
        }
    }
    k[(2, 2)] += mixed_derivative(0, 0, lambda + 4.0, z, u) * (mu2 * mu2);
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn mixed_derivative_matches_series_at_origin() {
        // ∂_z^a ∂_u^a (1−zu)^{−λ} at 0 is a!·(λ)_a.
        let l = 1.7;
        let z0 = c64(0.0, 0.0);
        assert!((mixed_derivative(1, 1, l, z0, z0) - l).norm() < 1e-14);
        assert!((mixed_derivative(2, 2, l, z0, z0) - 2.0 * l * (l + 1.0)).norm() < 1e-13);
        assert!(mixed_derivative(1, 2, l, z0, z0).norm() < 1e-14);
    }

    #[test]
    fn homogeneous3_origin_is_diagonal() {
        let l = 1.7;
        let k = homogeneous3(l, 0.5, 0.8, c64(0.0, 0.0), c64(0.0, 0.0));
        let d1 = 4.0 / l + 0.25;
        let d2 = 18.0 / (l * (l + 1.0)) + 0.25 * 9.0 / (l + 2.0) + 0.64;
        assert!((k[(1, 1)].re - d1).abs() < 1e-13);
        assert!((k[(2, 2)].re - d2).abs() < 1e-13);
        assert!(k[(0, 1)].norm() + k[(1, 2)].norm() + k[(0, 2)].norm() < 1e-14);
    }
}
