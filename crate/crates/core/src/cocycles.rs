// SPDX-License-Identifier: Apache-2.0

//! Multipliers `J(g, z)` for the action of the covering group on the
//! polydisc, and the checks that tie them to kernels.
//!
//! Throughout, `u_i = g_i'(z_i)^{1/2} = (b̄_i z_i + ā_i)^{-1}` on the chosen
//! lift and `c_i = b̄_i`. Parameters are the kernel's (`λ` for the weight
//! `(1 − z w̄)^{−λ}`); the half powers are applied here.

use crate::kernels::{KernelError, MatrixKernel};
use crate::linalg::{identity, intertwiner_rows, inverse, null_space, vstack};
use crate::mobius::{MobiusError, MobiusTuple};
use crate::representations::{catalog, LieRep, RepError};
use crate::sampling::{polydisc_point, trial_rng, u0_tuple};
use crate::{Mat, C64};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid cocycle parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CocycleSource {
    /// `∏ u_i^{λ_i}`.
    ClosedRank1 { lambda: Vec<f64> },
    /// Rank two in the first variable, line factors in the rest.
    ClosedRank2 { lambda: Vec<f64> },
    /// Rank three in the first variable (one unbroken weight string).
    ClosedRank3A { lambda: Vec<f64> },
    /// Rank three over the first two variables, arrows out of the top weight.
    ClosedRank3B { lambda: Vec<f64> },
    /// Rank three over the first two variables, arrows into the bottom weight.
    ClosedRank3C { alpha: Vec<f64> },
    /// `∏ g_i'^{α_i} · ∏ exp(t_i Y_i) · exp(2 log(b̄_i z_i + ā_i) H_i)` with
    /// `t_i = −c_i/(c_i z_i + ā_i)`; here `α_i` is the exponent itself.
    FromRep { rep: LieRep, alpha: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    n: usize,
    r: usize,
    source: CocycleSource,
}

fn check_params(name: &str, v: &[f64], min_len: usize) -> Result<(), CocycleError> {
    if v.len() < min_len {
        return Err(CocycleError::InvalidParameter(format!("{name} needs at least {min_len} entries, got {}", v.len())));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite() || **x <= 0.0) {
        return Err(CocycleError::InvalidParameter(format!("{name} entries must be positive, got {x}")));
    }
    Ok(())
}

impl Cocycle {
    pub fn new(source: CocycleSource) -> Result<Self, CocycleError> {
        let (n, r) = match &source {
            CocycleSource::ClosedRank1 { lambda } => {
                check_params("lambda", lambda, 1)?;
                (lambda.len(), 1)
            }
            CocycleSource::ClosedRank2 { lambda } => {
                check_params("lambda", lambda, 1)?;
                (lambda.len(), 2)
            }
            CocycleSource::ClosedRank3A { lambda } => {
                check_params("lambda", lambda, 1)?;
                (lambda.len(), 3)
            }
            CocycleSource::ClosedRank3B { lambda } => {
                check_params("lambda", lambda, 2)?;
                (lambda.len(), 3)
            }
            CocycleSource::ClosedRank3C { alpha } => {
                check_params("alpha", alpha, 2)?;
                (alpha.len(), 3)
            }
            CocycleSource::FromRep { rep, alpha } => {
                if alpha.len() != rep.n() || alpha.iter().any(|a| !a.is_finite()) {
                    return Err(CocycleError::InvalidParameter(format!("need {} finite exponents, got {}", rep.n(), alpha.len())));
                }
                rep.diagonal_form()?;
                (rep.n(), rep.r())
            }
        };
        Ok(Self { n, r, source })
    }

    pub fn closed_rank1(lambda: Vec<f64>) -> Result<Self, CocycleError> {
        Self::new(CocycleSource::ClosedRank1 { lambda })
    }
    pub fn closed_rank2(lambda: Vec<f64>) -> Result<Self, CocycleError> {
        Self::new(CocycleSource::ClosedRank2 { lambda })
    }
    pub fn closed_rank3a(lambda: Vec<f64>) -> Result<Self, CocycleError> {
        Self::new(CocycleSource::ClosedRank3A { lambda })
    }
    pub fn closed_rank3b(lambda: Vec<f64>) -> Result<Self, CocycleError> {
        Self::new(CocycleSource::ClosedRank3B { lambda })
    }
    pub fn closed_rank3c(alpha: Vec<f64>) -> Result<Self, CocycleError> {
        Self::new(CocycleSource::ClosedRank3C { alpha })
    }
    pub fn from_rep(rep: LieRep, alpha: Vec<f64>) -> Result<Self, CocycleError> {
        Self::new(CocycleSource::FromRep { rep, alpha })
    }

    /// The closed form rewritten as a representation-built cocycle.
    pub fn as_from_rep(&self) -> Result<Cocycle, CocycleError> {
        let half = |v: &[f64]| v.iter().map(|x| x / 2.0).collect::<Vec<_>>();
        let (rep, lambda) = match &self.source {
            CocycleSource::ClosedRank1 { lambda } => (LieRep::new(vec![Mat::zeros(1, 1)], vec![Mat::zeros(1, 1)])?, lambda),
            CocycleSource::ClosedRank2 { lambda } => (catalog::rank2_top_zero(), lambda),
            CocycleSource::ClosedRank3A { lambda } => (catalog::rank3a_top_zero(), lambda),
            CocycleSource::ClosedRank3B { lambda } => (catalog::rank3b_top_zero(), lambda),
            CocycleSource::ClosedRank3C { alpha } => (catalog::rank3c_top_zero(), alpha),
            CocycleSource::FromRep { .. } => return Ok(self.clone()),
        };
        let r = rep.r();
        let k = rep.n();
        let mut h = rep.h().to_vec();
        let mut y = rep.y().to_vec();
        for _ in k..self.n {
            h.push(Mat::zeros(r, r));
            y.push(Mat::zeros(r, r));
        }
        Cocycle::from_rep(LieRep::new(h, y)?, half(lambda))
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn source(&self) -> &CocycleSource {
        &self.source
    }

    pub fn source_name(&self) -> &'static str {
        match &self.source {
            CocycleSource::ClosedRank1 { .. } => "closed_rank1",
            CocycleSource::ClosedRank2 { .. } => "closed_rank2",
            CocycleSource::ClosedRank3A { .. } => "closed_rank3a",
            CocycleSource::ClosedRank3B { .. } => "closed_rank3b",
            CocycleSource::ClosedRank3C { .. } => "closed_rank3c",
            CocycleSource::FromRep { .. } => "from_rep",
        }
    }

    /// `J(g, z)`.
    pub fn eval(&self, g: &MobiusTuple, z: &[C64]) -> Result<Mat, CocycleError> {
        if g.len() != self.n || z.len() != self.n {
            return Err(CocycleError::DimensionMismatch(format!("cocycle on n = {}, got a {}-tuple and a {}-point", self.n, g.len(), z.len())));
        }
        // u_i^p = g_i'(z_i)^{p/2}
        let upow = |i: usize, p: f64| g.get(i).derivative_power(z[i], p / 2.0);
        let lines =
            |from: usize, lambda: &[f64]| -> Result<C64, MobiusError> { (from..self.n).try_fold(C64::new(1.0, 0.0), |acc, i| Ok(acc * upow(i, lambda[i])?)) };
        let zero = C64::new(0.0, 0.0);
        let c = |i: usize| g.get(i).c();
        let m = match &self.source {
            CocycleSource::ClosedRank1 { lambda } => Mat::from_element(1, 1, lines(0, lambda)?),
            CocycleSource::ClosedRank2 { lambda } => {
                let l = lambda[0];
                let m = Mat::from_row_slice(2, 2, &[upow(0, l)?, zero, -c(0) * upow(0, l + 1.0)?, upow(0, l + 2.0)?]);
                m * lines(1, lambda)?
            }
            CocycleSource::ClosedRank3A { lambda } => {
                let l = lambda[0];
                let c0 = c(0);
                #[rustfmt::skip]
                let m = Mat::from_row_slice(3, 3, &[
                    upow(0, l)?, zero, zero,
                    -2.0 * c0 * upow(0, l + 1.0)?, upow(0, l + 2.0)?, zero,
                    3.0 * c0 * c0 * upow(0, l + 2.0)?, -3.0 * c0 * upow(0, l + 3.0)?, upow(0, l + 4.0)?,
                ]);
                m * lines(1, lambda)?
            }
            CocycleSource::ClosedRank3B { lambda } => {
                let (u1, u2) = (upow(0, 1.0)?, upow(1, 1.0)?);
                let one = C64::new(1.0, 0.0);
                #[rustfmt::skip]
                let m = Mat::from_row_slice(3, 3, &[
                    one, zero, zero,
                    -c(0) * u1, u1 * u1, zero,
                    -c(1) * u2, zero, u2 * u2,
                ]);
                m * lines(0, lambda)?
            }
            CocycleSource::ClosedRank3C { alpha } => {
                let (u1, u2) = (upow(0, 1.0)?, upow(1, 1.0)?);
                let (g1, g2) = (u1 * u1, u2 * u2);
                #[rustfmt::skip]
                let m = Mat::from_row_slice(3, 3, &[
                    g2, zero, zero,
                    zero, g1, zero,
                    -c(0) * u1 * g2, -c(1) * u2 * g1, g1 * g2,
                ]);
                m * lines(0, alpha)?
            }
            CocycleSource::FromRep { rep, alpha } => {
                let d = rep.diagonal_form()?;
                let mut scalar = C64::new(1.0, 0.0);
                let mut nil = identity(self.r);
                let mut exps = vec![C64::new(0.0, 0.0); self.r];
                for i in 0..self.n {
                    let gi = g.get(i);
                    scalar *= gi.derivative_power(z[i], alpha[i])?;
                    let denom = gi.c() * z[i] + gi.a().conj();
                    let t = -gi.c() / denom;
                    nil *= exp_nilpotent(&rep.y()[i], t);
                    let two_log = 2.0 * gi.log_denominator(z[i]);
                    for (k, w) in d.weights.iter().enumerate() {
                        exps[k] += two_log * w[i];
                    }
                }
                let diag = Mat::from_diagonal(&nalgebra::DVector::from_iterator(self.r, exps.iter().map(|e| e.exp())));
                nil * (&d.basis * diag * &d.basis_inv) * scalar
            }
        };
        Ok(m)
    }

    /// `exp(Σ g_i''/(2g_i') Y_i) · exp(Σ −log g_i' (H_i − α_i))`, the same
    /// multiplier written through the derivatives of `g`.
    pub fn exponential_form(&self, g: &MobiusTuple, z: &[C64]) -> Result<Mat, CocycleError> {
        let CocycleSource::FromRep { rep, alpha } = &self.as_from_rep()?.source else { unreachable!("as_from_rep returns a representation cocycle") };
        if g.len() != self.n || z.len() != self.n {
            return Err(CocycleError::DimensionMismatch("tuple or point length".into()));
        }
        let d = rep.diagonal_form()?;
        let mut ysum = Mat::zeros(self.r, self.r);
        let mut exps = vec![C64::new(0.0, 0.0); self.r];
        for i in 0..self.n {
            let gi = g.get(i);
            ysum += &rep.y()[i] * (gi.second_derivative(z[i]) / (2.0 * gi.derivative(z[i])));
            let lg = gi.log_derivative(z[i]);
            for (k, w) in d.weights.iter().enumerate() {
                exps[k] += -lg * (w[i] - alpha[i]);
            }
        }
        let diag = Mat::from_diagonal(&nalgebra::DVector::from_iterator(self.r, exps.iter().map(|e| e.exp())));
        Ok(exp_nilpotent(&ysum, C64::new(1.0, 0.0)) * (&d.basis * diag * &d.basis_inv))
    }
}

/// `exp(t·Y)` for nilpotent `Y`, summed to the `r`-th term.
fn exp_nilpotent(y: &Mat, t: C64) -> Mat {
    let r = y.nrows();
    let mut out = identity(r);
    let mut term = identity(r);
    for k in 1..r {
        term = term * y * (t / k as f64);
        out += &term;
    }
    out
}

/// Largest `‖J(hg, z) − J(g, z) J(h, g z)‖` over seeded trials with `g, h`
/// in the base neighbourhood.
pub fn verify_cocycle_identity(j: &Cocycle, trials: usize, seed: u64) -> Result<f64, CocycleError> {
    let residuals = (0..trials.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k as u64);
            let g = u0_tuple(&mut rng, j.dim());
            let h = u0_tuple(&mut rng, j.dim());
            let z = polydisc_point(&mut rng, j.dim(), 0.8);
            let lhs = j.eval(&h.compose(&g)?, &z)?;
            let rhs = j.eval(&g, &z)? * j.eval(&h, &g.act(&z)?)?;
            Ok((lhs - rhs).norm())
        })
        .collect::<Result<Vec<f64>, CocycleError>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Largest `‖K(z,w) − J(g,z) K(gz,gw) J(g,w)*‖` over seeded trials.
pub fn verify_quasi_invariance(k: &MatrixKernel, j: &Cocycle, trials: usize, seed: u64) -> Result<f64, CocycleError> {
    if k.dim() != j.dim() || k.rank() != j.rank() {
        return Err(CocycleError::DimensionMismatch(format!("kernel (n={}, r={}) vs cocycle (n={}, r={})", k.dim(), k.rank(), j.dim(), j.rank())));
    }
    let residuals = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let g = u0_tuple(&mut rng, j.dim());
            let z = polydisc_point(&mut rng, j.dim(), 0.7);
            let w = polydisc_point(&mut rng, j.dim(), 0.7);
            let lhs = k.evaluate(&z, &w)?;
            let rhs = j.eval(&g, &z)? * k.evaluate(&g.act(&z)?, &g.act(&w)?)? * j.eval(&g, &w)?.adjoint();
            Ok((lhs - rhs).norm())
        })
        .collect::<Result<Vec<f64>, CocycleError>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Largest `‖J₁(g,z) − J₂(g,z)‖` over seeded trials.
pub fn max_difference(j1: &Cocycle, j2: &Cocycle, trials: usize, seed: u64) -> Result<f64, CocycleError> {
    if j1.dim() != j2.dim() || j1.rank() != j2.rank() {
        return Err(CocycleError::DimensionMismatch("cocycles differ in shape".into()));
    }
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let g = u0_tuple(&mut rng, j1.dim());
        let z = polydisc_point(&mut rng, j1.dim(), 0.8);
        worst = worst.max((j1.eval(&g, &z)? - j2.eval(&g, &z)?).norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginConstraint {
    /// Diagonal slot of `K(0,0) = diag(1, d₁, …)`, 1-based as in `d_i`.
    pub slot: usize,
    /// `d_slot` must exceed this.
    pub lower_bound: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OriginCone {
    /// Dimension of the commutant of `{J(k, 0) : k a rotation tuple}`.
    pub commutant_dimension: usize,
    /// Whether the commutant is exactly the diagonal matrices.
    pub diagonal: bool,
    pub constraints: Vec<OriginConstraint>,
    pub informational: bool,
}

const ROTATION_ANGLES: [f64; 3] = [0.7, 1.9, -2.3];

/// `K(0,0)` candidates: Hermitian matrices commuting with `J(k, 0)` for all
/// rotation tuples `k`, plus the strict bounds needed for boundedness.
pub fn admissible_origin_matrices(j: &Cocycle) -> Result<OriginCone, CocycleError> {
    let r = j.rank();
    let mut blocks = Vec::new();
    for s in 0..ROTATION_ANGLES.len() {
        let thetas: Vec<f64> = (0..j.dim()).map(|i| ROTATION_ANGLES[(s + i) % ROTATION_ANGLES.len()] * (1.0 + 0.37 * i as f64)).collect();
        let m = j.eval(&MobiusTuple::rotations(&thetas), &vec![C64::new(0.0, 0.0); j.dim()])?;
        blocks.push(intertwiner_rows(&m, &m));
    }
    let ns = null_space(&vstack(&blocks), 1e-9);
    let dimension = ns.ncols();
    let diagonal = dimension == r
        && ns.column_iter().all(|c| {
            let m = crate::linalg::unvec(c.as_slice(), r);
            (0..r).all(|a| (0..r).all(|b| a == b || m[(a, b)].norm() < 1e-9))
        });
    let bound = |slot: usize, v: f64, note: &str| OriginConstraint { slot, lower_bound: 1.0 / v, note: note.to_string() };
    let (constraints, informational) = match &j.source {
        CocycleSource::ClosedRank2 { lambda } => (vec![bound(1, lambda[0], "d1 > 1/lambda1")], false),
        CocycleSource::ClosedRank3B { lambda } => (vec![bound(1, lambda[0], "d1 > 1/lambda1"), bound(2, lambda[1], "d2 > 1/lambda2")], false),
        CocycleSource::ClosedRank3C { alpha } => (vec![bound(2, alpha[0], "d2 > 1/alpha1")], false),
        CocycleSource::ClosedRank3A { .. } => (Vec::new(), true),
        CocycleSource::ClosedRank1 { .. } | CocycleSource::FromRep { .. } => (Vec::new(), false),
    };
    Ok(OriginCone { commutant_dimension: dimension, diagonal, constraints, informational })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileWitness {
    /// `det_Q` or `det_Q_C`.
    pub profile: &'static str,
    pub lambda: f64,
    /// `d` for `det_Q`, `C` for `det_Q_C`.
    pub parameter: f64,
    pub r: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OriginCheck {
    pub admissible: bool,
    pub violations: Vec<String>,
    pub witnesses: Vec<ProfileWitness>,
}

/// Sample radii `|z|²` clustered near 0, where the profiles first dip.
pub fn profile_radii() -> Vec<f64> {
    (0..80).map(|k| 10f64.powf(-6.0 + 6.0 * k as f64 / 79.0) * 0.99).collect()
}

/// Check `K(0,0) = diag(1, d₁, …)` against the cone of `j`. `d` lists
/// `d₁, d₂, …`.
pub fn check_origin_matrix(j: &Cocycle, d: &[f64]) -> Result<OriginCheck, CocycleError> {
    let cone = admissible_origin_matrices(j)?;
    if d.len() + 1 != j.rank() {
        return Err(CocycleError::DimensionMismatch(format!("need {} diagonal entries after the leading 1", j.rank() - 1)));
    }
    let mut violations = Vec::new();
    let mut witnesses = Vec::new();
    if let Some(x) = d.iter().find(|x| x.is_nan() || **x <= 0.0) {
        violations.push(format!("diagonal entry {x} is not positive"));
    }
    for c in &cone.constraints {
        let di = d[c.slot - 1];
        if di > c.lower_bound * (1.0 + 1e-12) {
            continue;
        }
        violations.push(format!("{} fails: d{} = {di}, bound {}", c.note, c.slot, c.lower_bound));
        let lambda = 1.0 / c.lower_bound;
        let radii = profile_radii();
        let witness = if di < c.lower_bound * (1.0 - 1e-12) {
            let vals = det_q_profile(lambda, di, &radii);
            first_negative(&radii, &vals).map(|(r, v)| ProfileWitness { profile: "det_Q", lambda, parameter: di, r, value: v })
        } else {
            let vals = det_q_c_profile(lambda, 1.0, &radii);
            first_negative(&radii, &vals).map(|(r, v)| ProfileWitness { profile: "det_Q_C", lambda, parameter: 1.0, r, value: v })
        };
        witnesses.extend(witness);
    }
    Ok(OriginCheck { admissible: violations.is_empty(), violations, witnesses })
}

fn first_negative(r: &[f64], v: &[f64]) -> Option<(f64, f64)> {
    r.iter().zip(v).find(|(_, &x)| x < 0.0).map(|(&a, &b)| (a, b))
}

/// `f(r) = d(1−r)^{−λ} − r − d`.
pub fn det_q_profile(lambda: f64, d: f64, radii: &[f64]) -> Vec<f64> {
    radii.iter().map(|&r| d * (1.0 - r).powf(-lambda) - r - d).collect()
}

/// `f_C(r) = (C²/λ)(C − r)(1−r)^{−λ} − C³ r − C³/λ`, the profile at `d = 1/λ`
/// after weighting by `C − z₁ w̄₁`.
pub fn det_q_c_profile(lambda: f64, c: f64, radii: &[f64]) -> Vec<f64> {
    radii.iter().map(|&r| (c * c / lambda) * (c - r) * (1.0 - r).powf(-lambda) - c * c * c * r - c * c * c / lambda).collect()
}

/// `J(k, 0)` for the rotation tuple with the given angles; handy for
/// checking `K(0,0) = J(k,0) K(0,0) J(k,0)*`.
pub fn rotation_multiplier(j: &Cocycle, thetas: &[f64]) -> Result<Mat, CocycleError> {
    j.eval(&MobiusTuple::rotations(thetas), &vec![C64::new(0.0, 0.0); j.dim()])
}

/// `‖K(0,0) − J(k,0) K(0,0) J(k,0)*‖` for one rotation tuple.
pub fn origin_invariance_residual(k: &MatrixKernel, j: &Cocycle, thetas: &[f64]) -> Result<f64, CocycleError> {
    let zero = vec![C64::new(0.0, 0.0); k.dim()];
    let k00 = k.evaluate(&zero, &zero)?;
    let m = rotation_multiplier(j, thetas)?;
    let _ = inverse(&m).ok_or_else(|| CocycleError::InvalidParameter("J(k,0) singular".into()))?;
    Ok((&k00 - &m * &k00 * m.adjoint()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_identity() {
        let j = Cocycle::closed_rank3b(vec![1.2, 0.7]).unwrap();
        let z = vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.4)];
        let m = j.eval(&MobiusTuple::identity(2), &z).unwrap();
        assert!((m - identity(3)).norm() < 1e-15);
    }

    #[test]
    fn profile_arithmetic() {
        assert_eq!(det_q_profile(1.0, 2.0, &[0.0])[0], 0.0);
        assert!((det_q_profile(1.0, 2.0, &[0.5])[0] - 1.5).abs() < 1e-15);
    }
}
