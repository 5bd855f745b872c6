// SPDX-License-Identifier: Apache-2.0

//! Representations of `bⁿ`, the direct sum of `n` copies of the solvable
//! algebra spanned by `h, y` with `[h, y] = −y`.
//!
//! A [`LieRep`] holds the matrices `H_i = ρ(h_i)`, `Y_i = ρ(y_i)` as given.
//! Everything structural is computed in the basis where all `H_i` are
//! diagonal ([`DiagonalForm`]), obtained once and cached.

pub mod catalog;
mod lattice;

pub use lattice::{check_properties, is_indecomposable_mf, joint_lattice, Edge, JointLattice, Properties};

use crate::linalg::{cluster, condition_number, eigenvalues, identity, intertwiner_rows, inverse, null_space, unvec, vstack};
use crate::{Mat, C64};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

const BRACKET_TOL: f64 = 1e-10;
/// Joint eigenvalues closer than this are the same eigenvalue.
const CLUSTER_TOL: f64 = 1e-8;
/// Multiplicity-free needs joint eigenvalues at least this far apart.
const MF_GAP: f64 = 1e-6;
const COND_LIMIT: f64 = 1e8;
/// Relative size below which a matrix entry or image counts as zero.
pub(crate) const EDGE_TOL: f64 = 1e-9;
const BRUTE_FORCE_MAX: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("representation is not valid: {0}")]
    Invalid(String),
    #[error("representation is not multiplicity-free")]
    NotMultiplicityFree,
    #[error("brute force supports r ≤ {BRUTE_FORCE_MAX}, got {0}")]
    Capacity(usize),
    #[error("classification supports r ≤ 3, got {0}")]
    UnsupportedRank(usize),
    #[error(
        "eigenvalues {upper} and {lower} of H_{} are consecutive but not one apart; basis vectors {part:?} span a complementary invariant summand",
        coordinate + 1
    )]
    SpectralGap { coordinate: usize, upper: C64, lower: C64, part: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Violation {
    /// `[H_i, H_j] ≠ 0`.
    HH {
        i: usize,
        j: usize,
        residual: f64,
    },
    /// `[H_i, Y_j] ≠ 0` for `i ≠ j`.
    HY {
        i: usize,
        j: usize,
        residual: f64,
    },
    /// `[Y_i, Y_j] ≠ 0`.
    YY {
        i: usize,
        j: usize,
        residual: f64,
    },
    /// `[H_i, Y_i] ≠ −Y_i`.
    Weight {
        i: usize,
        residual: f64,
    },
    NotDiagonalizable {
        i: usize,
    },
    IllConditioned {
        condition: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HH { i, j, residual } => write!(f, "[H{}, H{}] = 0 fails (residual {residual:.3e})", i + 1, j + 1),
            Violation::HY { i, j, residual } => write!(f, "[H{}, Y{}] = 0 fails (residual {residual:.3e})", i + 1, j + 1),
            Violation::YY { i, j, residual } => write!(f, "[Y{}, Y{}] = 0 fails (residual {residual:.3e})", i + 1, j + 1),
            Violation::Weight { i, residual } => write!(f, "[H{0}, Y{0}] = -Y{0} fails (residual {residual:.3e})", i + 1),
            Violation::NotDiagonalizable { i } => write!(f, "H{} is not diagonalizable", i + 1),
            Violation::IllConditioned { condition } => {
                write!(f, "joint eigenvector matrix has condition number {condition:.3e}")
            }
        }
    }
}

/// The representation in a joint eigenbasis of `H₁..Hₙ`.
#[derive(Debug, Clone)]
pub struct DiagonalForm {
    /// `weights[k][i]`: eigenvalue of `H_i` on basis vector `k`.
    pub weights: Vec<Vec<C64>>,
    /// Columns are the joint eigenvectors, unit length.
    pub basis: Mat,
    pub basis_inv: Mat,
    /// `Y_i` in the joint eigenbasis.
    pub y: Vec<Mat>,
}

#[derive(Debug, Clone)]
pub struct LieRep {
    n: usize,
    r: usize,
    h: Vec<Mat>,
    y: Vec<Mat>,
    diag: OnceLock<Result<DiagonalForm, Vec<Violation>>>,
}

impl PartialEq for LieRep {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.h == other.h && self.y == other.y
    }
}

impl LieRep {
    pub fn new(h: Vec<Mat>, y: Vec<Mat>) -> Result<Self, RepError> {
        let n = h.len();
        if n == 0 || y.len() != n {
            return Err(RepError::Dimension(format!("{} H matrices and {} Y matrices", h.len(), y.len())));
        }
        let r = h[0].nrows();
        if r == 0 || h.iter().chain(&y).any(|m| m.nrows() != r || m.ncols() != r) {
            return Err(RepError::Dimension("all matrices must be r×r with the same r ≥ 1".into()));
        }
        Ok(Self { n, r, h, y, diag: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn h(&self) -> &[Mat] {
        &self.h
    }
    pub fn y(&self) -> &[Mat] {
        &self.y
    }

    /// `P⁻¹ ρ P`.
    pub fn conjugated(&self, p: &Mat) -> Result<Self, RepError> {
        let pi = inverse(p).ok_or_else(|| RepError::Invalid("conjugating matrix is singular".into()))?;
        let h = self.h.iter().map(|m| &pi * m * p).collect();
        let y = self.y.iter().map(|m| &pi * m * p).collect();
        Self::new(h, y)
    }

    /// The representation restricted to the listed coordinates, in order.
    pub fn select(&self, coords: &[usize]) -> Result<Self, RepError> {
        if coords.is_empty() || coords.iter().any(|&c| c >= self.n) {
            return Err(RepError::Dimension(format!("coordinates {coords:?} out of range for n = {}", self.n)));
        }
        Self::new(coords.iter().map(|&c| self.h[c].clone()).collect(), coords.iter().map(|&c| self.y[c].clone()).collect())
    }

    /// Restriction to the first `k` factors.
    pub fn restrict(&self, k: usize) -> Result<Self, RepError> {
        self.select(&(0..k).collect::<Vec<_>>())
    }

    /// Violated relations; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let tol = |a: &Mat, b: &Mat| BRACKET_TOL * (a.norm() * b.norm()).max(1.0);
        let br = |a: &Mat, b: &Mat| a * b - b * a;
        for i in 0..self.n {
            let w = (br(&self.h[i], &self.y[i]) + &self.y[i]).norm();
            if w > tol(&self.h[i], &self.y[i]) {
                out.push(Violation::Weight { i, residual: w });
            }
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let hy = br(&self.h[i], &self.y[j]).norm();
                if hy > tol(&self.h[i], &self.y[j]) {
                    out.push(Violation::HY { i, j, residual: hy });
                }
                if i < j {
                    let hh = br(&self.h[i], &self.h[j]).norm();
                    if hh > tol(&self.h[i], &self.h[j]) {
                        out.push(Violation::HH { i, j, residual: hh });
                    }
                    let yy = br(&self.y[i], &self.y[j]).norm();
                    if yy > tol(&self.y[i], &self.y[j]) {
                        out.push(Violation::YY { i, j, residual: yy });
                    }
                }
            }
        }
        if let Err(v) = self.diagonal_form_inner() {
            out.extend(v.iter().cloned());
        }
        out
    }

    fn diagonal_form_inner(&self) -> &Result<DiagonalForm, Vec<Violation>> {
        self.diag.get_or_init(|| diagonalize(&self.h, &self.y))
    }

    /// Joint eigenbasis of the `H_i`; fails when some `H_i` is not
    /// diagonalizable or the `H_i` do not commute.
    pub fn diagonal_form(&self) -> Result<&DiagonalForm, RepError> {
        self.diagonal_form_inner().as_ref().map_err(|v| RepError::Invalid(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
    }

    fn require_valid(&self) -> Result<&DiagonalForm, RepError> {
        let v = self.validate();
        if !v.is_empty() {
            return Err(RepError::Invalid(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")));
        }
        self.diagonal_form()
    }

    /// True iff every joint eigenspace of `(H₁..Hₙ)` is a line.
    pub fn is_multiplicity_free(&self) -> Result<bool, RepError> {
        let d = self.require_valid()?;
        Ok(min_joint_distance(&d.weights) > MF_GAP)
    }

    /// Indices `i` with `Y_i ≠ 0`.
    pub fn active_indices(&self) -> Vec<usize> {
        let scale = self.h.iter().map(|m| m.norm()).fold(1.0f64, f64::max);
        (0..self.n).filter(|&i| self.y[i].norm() > EDGE_TOL * scale).collect()
    }
}

fn min_joint_distance(weights: &[Vec<C64>]) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..weights.len() {
        for b in a + 1..weights.len() {
            let d = weights[a].iter().zip(&weights[b]).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
            best = best.min(d);
        }
    }
    best
}

/// Null space with an absolute cutoff scaled by `max(1, ‖m‖)`.
fn null_space_abs(m: &Mat, tol: f64) -> Mat {
    let scale = m.norm().max(1.0);
    let top = m.clone().singular_values().iter().fold(0.0f64, |a, &b| a.max(b));
    if top <= tol * scale {
        return identity(m.ncols());
    }
    null_space(m, tol * scale / top)
}

/// Split `C^r` into joint eigenspaces by refining one `H_i` at a time.
fn diagonalize(h: &[Mat], y: &[Mat]) -> Result<DiagonalForm, Vec<Violation>> {
    let r = h[0].nrows();
    // Each block: (basis columns, joint eigenvalues so far).
    let mut blocks: Vec<(Mat, Vec<C64>)> = vec![(identity(r), Vec::new())];
    for (i, hi) in h.iter().enumerate() {
        let mut next = Vec::new();
        for (v, w) in blocks {
            let gram_inv = inverse(&(v.adjoint() * &v)).ok_or_else(|| vec![Violation::NotDiagonalizable { i }])?;
            let m = gram_inv * v.adjoint() * hi * &v;
            let ev = eigenvalues(&m);
            let scale = m.norm().max(1.0);
            for (lambda, members) in cluster(&ev, CLUSTER_TOL * scale) {
                let shifted = &m - identity(m.nrows()) * lambda;
                let ns = null_space_abs(&shifted, 1e-7);
                if ns.ncols() != members.len() {
                    return Err(vec![Violation::NotDiagonalizable { i }]);
                }
                let mut cols = &v * ns;
                for mut c in cols.column_iter_mut() {
                    let nrm = c.norm();
                    c /= C64::new(nrm, 0.0);
                }
                let mut w2 = w.clone();
                w2.push(lambda);
                next.push((cols, w2));
            }
        }
        blocks = next;
    }
    // Deterministic order: weights descending, coordinate by coordinate.
    blocks.sort_by(|a, b| {
        for (x, y) in a.1.iter().zip(&b.1) {
            let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
    let mut cols = Vec::with_capacity(r);
    let mut weights = Vec::with_capacity(r);
    for (v, w) in &blocks {
        for c in v.column_iter() {
            cols.push(c.into_owned());
            weights.push(w.clone());
        }
    }
    let basis = Mat::from_columns(&cols);
    let cond = condition_number(&basis);
    if cond >= COND_LIMIT {
        return Err(vec![Violation::IllConditioned { condition: cond }]);
    }
    let basis_inv = inverse(&basis).ok_or_else(|| vec![Violation::IllConditioned { condition: f64::INFINITY }])?;
    let y = y.iter().map(|m| &basis_inv * m * &basis).collect();
    Ok(DiagonalForm { weights, basis, basis_inv, y })
}

/// Exhaustive search for a splitting into two invariant coordinate
/// subspaces of the joint eigenbasis.
pub fn brute_force_indecomposable(rho: &LieRep) -> Result<bool, RepError> {
    if rho.r() > BRUTE_FORCE_MAX {
        return Err(RepError::Capacity(rho.r()));
    }
    if !rho.is_multiplicity_free()? {
        return Err(RepError::NotMultiplicityFree);
    }
    let d = rho.diagonal_form()?;
    let r = rho.r();
    if r == 1 {
        return Ok(true);
    }
    // coupled[a] has bit b set when some Y_i moves e_b to e_a or e_a to e_b.
    let mut coupled = vec![0u32; r];
    for y in &d.y {
        let cutoff = EDGE_TOL * y.norm().max(f64::MIN_POSITIVE);
        for a in 0..r {
            for b in 0..r {
                if a != b && y[(a, b)].norm() > cutoff {
                    coupled[a] |= 1 << b;
                    coupled[b] |= 1 << a;
                }
            }
        }
    }
    let full: u32 = if r == 32 { u32::MAX } else { (1u32 << r) - 1 };
    let splits = (1..full).into_par_iter().any(|s| (0..r).all(|a| s & (1 << a) == 0 || coupled[a] & (full & !s) == 0));
    Ok(!splits)
}

/// Decomposability via the commutant: a generic element of
/// `{X : [X, H_i] = [X, Y_i] = 0}` has several eigenvalues exactly when the
/// commutant holds a nontrivial idempotent.
pub fn is_decomposable_by_commutant(rho: &LieRep) -> Result<bool, RepError> {
    rho.require_valid()?;
    let r = rho.r();
    let blocks: Vec<Mat> = rho
        .h
        .iter()
        .chain(&rho.y)
        .map(|a| {
            let s = a.norm().max(1.0);
            intertwiner_rows(a, a) / C64::new(s, 0.0)
        })
        .collect();
    let ns = null_space(&vstack(&blocks), 1e-9);
    let mut generic = Mat::zeros(r, r);
    for (k, c) in ns.column_iter().enumerate() {
        let w = C64::new(1.0 + (k as f64 * 0.754_877_666).fract(), (k as f64 * 0.569_840_291).fract());
        generic += unvec(c.as_slice(), r) * w;
    }
    let ev = eigenvalues(&generic);
    let scale = generic.norm().max(f64::MIN_POSITIVE);
    Ok(cluster(&ev, 1e-6 * scale).len() > 1)
}

/// Indecomposability for any valid representation: brute force when
/// multiplicity-free, the commutant test otherwise.
pub fn is_indecomposable(rho: &LieRep) -> Result<bool, RepError> {
    if rho.is_multiplicity_free()? && rho.r() <= BRUTE_FORCE_MAX {
        brute_force_indecomposable(rho)
    } else {
        Ok(!is_decomposable_by_commutant(rho)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionVerdict {
    pub applicable: bool,
    pub verdict: Option<bool>,
}

/// Indecomposability read off the restriction to `b^k` when that
/// restriction is multiplicity-free.
pub fn restriction_criterion(rho: &LieRep, k: usize) -> Result<RestrictionVerdict, RepError> {
    if k == 0 || k > rho.n() {
        return Err(RepError::Dimension(format!("k = {k} outside 1..={}", rho.n())));
    }
    let res = rho.restrict(k)?;
    if !res.is_multiplicity_free()? {
        return Ok(RestrictionVerdict { applicable: false, verdict: None });
    }
    let verdict = match k {
        1 => string_criterion(&res)?,
        2 => match is_indecomposable_mf(&res) {
            Ok(b) => b,
            Err(RepError::SpectralGap { .. }) => false,
            Err(e) => return Err(e),
        },
        _ => brute_force_indecomposable(&res)?,
    };
    Ok(RestrictionVerdict { applicable: true, verdict: Some(verdict) })
}

/// One variable, multiplicity-free: indecomposable iff the spectrum of `H₁`
/// is an unbroken unit string and `Y₁` links every consecutive pair.
fn string_criterion(rho: &LieRep) -> Result<bool, RepError> {
    let d = rho.diagonal_form()?;
    let r = rho.r();
    // Basis is sorted by descending weight.
    for k in 0..r.saturating_sub(1) {
        let step = d.weights[k][0] - d.weights[k + 1][0];
        if (step - 1.0).norm() > MF_GAP {
            return Ok(false);
        }
        let y = &d.y[0];
        if y[(k + 1, k)].norm() <= EDGE_TOL * y.norm().max(f64::MIN_POSITIVE) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case")]
pub enum ClassificationTag {
    /// One-dimensional: a character, `H_i = weights_i`.
    Dim1 {
        #[serde(serialize_with = "crate::spec::ser_point")]
        weights: Vec<C64>,
    },
    /// `H_index = diag(−λ, −λ−1)`, `Y_index ≠ 0`, the rest scalar.
    Dim2Standard {
        index: usize,
        lambda: f64,
        #[serde(serialize_with = "crate::spec::ser_point")]
        scalars: Vec<C64>,
    },
    /// Three-dimensional, `ρ|b^{index}` indecomposable, the rest scalar.
    Dim3CaseI {
        index: usize,
    },
    /// Lattice `{(0,0), (1,0), (0,1)}` on the coordinate pair.
    Dim3CaseII {
        indices: (usize, usize),
    },
    /// Lattice `{(1,0), (0,1), (1,1)}` on the coordinate pair.
    Dim3CaseIII {
        indices: (usize, usize),
    },
    Decomposable,
    Unclassified,
}

impl ClassificationTag {
    pub fn name(&self) -> &'static str {
        match self {
            ClassificationTag::Dim1 { .. } => "Dim1",
            ClassificationTag::Dim2Standard { .. } => "Dim2Standard",
            ClassificationTag::Dim3CaseI { .. } => "Dim3CaseI",
            ClassificationTag::Dim3CaseII { .. } => "Dim3CaseII",
            ClassificationTag::Dim3CaseIII { .. } => "Dim3CaseIII",
            ClassificationTag::Decomposable => "Decomposable",
            ClassificationTag::Unclassified => "Unclassified",
        }
    }
}

/// Case of an indecomposable representation of dimension at most three.
pub fn classify(rho: &LieRep) -> Result<ClassificationTag, RepError> {
    let r = rho.r();
    if r > 3 {
        return Err(RepError::UnsupportedRank(r));
    }
    let d = rho.require_valid()?;
    if r == 1 {
        return Ok(ClassificationTag::Dim1 { weights: d.weights[0].clone() });
    }
    if !is_indecomposable(rho)? {
        return Ok(ClassificationTag::Decomposable);
    }
    let active = rho.active_indices();
    match (r, active.as_slice()) {
        (2, &[i]) => {
            let top = d.weights[0][i];
            let scalars = (0..rho.n()).filter(|&j| j != i).map(|j| d.weights[0][j]).collect();
            Ok(ClassificationTag::Dim2Standard { index: i, lambda: -top.re, scalars })
        }
        (3, &[i]) => Ok(ClassificationTag::Dim3CaseI { index: i }),
        (3, &[i, j]) => {
            let pair = rho.select(&[i, j])?;
            let lat = match joint_lattice(&pair) {
                Ok(l) => l,
                Err(_) => return Ok(ClassificationTag::Unclassified),
            };
            let mut v = lat.vertices.clone();
            v.sort();
            if v == [(0, 0), (0, 1), (1, 0)] {
                Ok(ClassificationTag::Dim3CaseII { indices: (i, j) })
            } else if v == [(0, 1), (1, 0), (1, 1)] {
                Ok(ClassificationTag::Dim3CaseIII { indices: (i, j) })
            } else {
                Ok(ClassificationTag::Unclassified)
            }
        }
        _ => Ok(ClassificationTag::Unclassified),
    }
}
