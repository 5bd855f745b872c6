// SPDX-License-Identifier: Apache-2.0

//! `SU(1,1)^n` acting on the polydisc by fractional linear maps.
//!
//! An element is stored as `(a, b)` with `|a|² − |b|² = 1` together with a
//! continuous lift of `arg a`. The lift is what the covering group adds: it
//! fixes `log(b̄z + ā)` and hence every fractional power `g'(z)^α`. The
//! integer `branch_index` is the number of full turns the lift is away from
//! the principal argument.

use crate::C64;
use std::f64::consts::PI;
use thiserror::Error;

const GROUP_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobiusError {
    #[error("|a|^2 - |b|^2 = {0}, expected 1")]
    NotInGroup(f64),
    #[error("denominator |b̄z + ā| = {0:e} is degenerate")]
    Degenerate(f64),
    #[error("point {0} is not in the open unit disc")]
    OutsideDisc(C64),
    #[error("principal lift of arg a is ambiguous for a = {0}; give the branch explicitly")]
    BranchDomain(C64),
    #[error("tuple lengths differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// One element of the double cover `SU(1,1)` with an argument lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElement {
    a: C64,
    b: C64,
    branch_index: i64,
}

impl MobiusElement {
    /// Element with the principal lift of `arg a`.
    pub fn new(a: C64, b: C64) -> Result<Self, MobiusError> {
        check_group(a, b)?;
        if a.re < 0.0 && a.im.abs() <= 1e-12 * a.norm() {
            return Err(MobiusError::BranchDomain(a));
        }
        Ok(Self { a, b, branch_index: 0 })
    }

    /// Element with an explicit winding count.
    pub fn with_branch(a: C64, b: C64, branch_index: i64) -> Result<Self, MobiusError> {
        check_group(a, b)?;
        Ok(Self { a, b, branch_index })
    }

    /// Strict constructor for the base neighbourhood `|a−1| < 1/2, |b| < 1/2`.
    pub fn in_u0(a: C64, b: C64) -> Result<Self, MobiusError> {
        let g = Self::new(a, b)?;
        if !g.in_base_neighborhood() {
            return Err(MobiusError::BranchDomain(a));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        Self { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0), branch_index: 0 }
    }

    /// Rotation `z ↦ e^{iθ} z`, written `a = e^{iθ/2}`, `b = 0`, lifted
    /// continuously in `θ`.
    pub fn rotation(theta: f64) -> Self {
        let half = theta / 2.0;
        let a = C64::from_polar(1.0, half);
        let branch_index = ((half - a.arg()) / (2.0 * PI)).round() as i64;
        Self { a, b: C64::new(0.0, 0.0), branch_index }
    }

    /// The element with the given `b` and real positive `a`.
    pub fn from_b(b: C64) -> Self {
        Self { a: C64::new((1.0 + b.norm_sqr()).sqrt(), 0.0), b, branch_index: 0 }
    }

    pub fn a(&self) -> C64 {
        self.a
    }
    pub fn b(&self) -> C64 {
        self.b
    }
    pub fn branch_index(&self) -> i64 {
        self.branch_index
    }

    /// Continuous lift of `arg a`.
    pub fn arg_lift(&self) -> f64 {
        self.a.arg() + 2.0 * PI * self.branch_index as f64
    }

    pub fn in_base_neighborhood(&self) -> bool {
        (self.a - 1.0).norm() < 0.5 && self.b.norm() < 0.5 && self.branch_index == 0
    }

    fn denominator(&self, z: C64) -> C64 {
        self.b.conj() * z + self.a.conj()
    }

    /// `g(z) = (az + b)/(b̄z + ā)`.
    pub fn act(&self, z: C64) -> Result<C64, MobiusError> {
        let d = self.denominator(z);
        if d.norm() < 1e-14 {
            return Err(MobiusError::Degenerate(d.norm()));
        }
        Ok((self.a * z + self.b) / d)
    }

    /// `g'(z) = (b̄z + ā)^{-2}`.
    pub fn derivative(&self, z: C64) -> C64 {
        let d = self.denominator(z);
        1.0 / (d * d)
    }

    /// `g''(z) = −2b̄(b̄z + ā)^{-3}`.
    pub fn second_derivative(&self, z: C64) -> C64 {
        let d = self.denominator(z);
        -2.0 * self.b.conj() / (d * d * d)
    }

    /// Lifted `log(b̄z + ā) = log ā + Log(1 + b̄z/ā)`.
    ///
    /// `|b̄z/ā| < 1` on the disc, so the principal logarithm of the second
    /// factor never meets its cut; all winding sits in `log ā`.
    pub fn log_denominator(&self, z: C64) -> C64 {
        let log_abar = C64::new(self.a.norm().ln(), -self.arg_lift());
        log_abar + (1.0 + self.b.conj() * z / self.a.conj()).ln()
    }

    /// Lifted `log g'(z)`.
    pub fn log_derivative(&self, z: C64) -> C64 {
        -2.0 * self.log_denominator(z)
    }

    /// `g'(z)^α` on the covering group.
    pub fn derivative_power(&self, z: C64, alpha: f64) -> Result<C64, MobiusError> {
        if z.norm() >= 1.0 {
            return Err(MobiusError::OutsideDisc(z));
        }
        Ok((self.log_derivative(z) * alpha).exp())
    }

    /// The constant `c_g` with `g'' = −2 c_g (g')^{3/2}`; equal to `b̄`.
    pub fn c(&self) -> C64 {
        self.b.conj()
    }

    /// `self ∘ other`, with the argument lift carried along.
    pub fn compose(&self, other: &Self) -> Self {
        let (a1, b1, a2, b2) = (self.a, self.b, other.a, other.b);
        let a = a1 * a2 + b1 * b2.conj();
        let b = a1 * b2 + b1 * a2.conj();
        // |b1 b̄2 / (a1 a2)| < 1, so the principal argument is continuous here.
        let lift = self.arg_lift() + other.arg_lift() + (1.0 + b1 * b2.conj() / (a1 * a2)).arg();
        let branch_index = ((lift - a.arg()) / (2.0 * PI)).round() as i64;
        Self { a, b, branch_index }
    }

    pub fn inverse(&self) -> Self {
        let a = self.a.conj();
        let lift = -self.arg_lift();
        let branch_index = ((lift - a.arg()) / (2.0 * PI)).round() as i64;
        Self { a, b: -self.b, branch_index }
    }
}

fn check_group(a: C64, b: C64) -> Result<(), MobiusError> {
    let det = a.norm_sqr() - b.norm_sqr();
    if !det.is_finite() || (det - 1.0).abs() > GROUP_TOL * a.norm_sqr().max(1.0) {
        return Err(MobiusError::NotInGroup(det));
    }
    Ok(())
}

/// A point of the open polydisc.
pub type PolydiscPoint = Vec<C64>;

pub fn in_polydisc(z: &[C64]) -> bool {
    z.iter().all(|c| c.norm() < 1.0)
}

/// An element of `SU(1,1)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusTuple {
    elements: Vec<MobiusElement>,
}

impl MobiusTuple {
    pub fn new(elements: Vec<MobiusElement>) -> Self {
        assert!(!elements.is_empty(), "a Möbius tuple needs at least one component");
        Self { elements }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![MobiusElement::identity(); n])
    }

    pub fn rotations(thetas: &[f64]) -> Self {
        Self::new(thetas.iter().map(|&t| MobiusElement::rotation(t)).collect())
    }

    /// A tuple sending `z` to the origin: `w ↦ (w − z)/(1 − z̄w)` in each slot.
    pub fn point_killer(z: &[C64]) -> Result<Self, MobiusError> {
        let mut out = Vec::with_capacity(z.len());
        for &zi in z {
            let m = 1.0 - zi.norm_sqr();
            if m <= 0.0 {
                return Err(MobiusError::OutsideDisc(zi));
            }
            let s = 1.0 / m.sqrt();
            out.push(MobiusElement { a: C64::new(s, 0.0), b: -zi * s, branch_index: 0 });
        }
        Ok(Self::new(out))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[MobiusElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &MobiusElement {
        &self.elements[i]
    }

    pub fn act(&self, z: &[C64]) -> Result<PolydiscPoint, MobiusError> {
        self.check_len(z.len())?;
        self.elements.iter().zip(z).map(|(g, &zi)| g.act(zi)).collect()
    }

    /// Diagonal entries of `Dg(z)`.
    pub fn derivatives(&self, z: &[C64]) -> Result<Vec<C64>, MobiusError> {
        self.check_len(z.len())?;
        Ok(self.elements.iter().zip(z).map(|(g, &zi)| g.derivative(zi)).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self, MobiusError> {
        self.check_len(other.len())?;
        Ok(Self::new(self.elements.iter().zip(&other.elements).map(|(g, h)| g.compose(h)).collect()))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.elements.iter().map(|g| g.inverse()).collect())
    }

    fn check_len(&self, n: usize) -> Result<(), MobiusError> {
        if n != self.elements.len() {
            return Err(MobiusError::DimensionMismatch(self.elements.len(), n));
        }
        Ok(())
    }
}
