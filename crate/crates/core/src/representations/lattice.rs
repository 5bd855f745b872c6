// SPDX-License-Identifier: Apache-2.0

//! Joint-eigenvalue lattice of a multiplicity-free representation of `b²`.
//!
//! Vertex `θ = (θ₁, θ₂)` stands for the joint eigenvalue `(λ₁−θ₁, λ₂−θ₂)`,
//! where `λ_i` is the top eigenvalue of `H_i`. `Y_j` moves `V_θ` into
//! `V_{θ+ε_j}`; an edge records whether it does so nontrivially.

use super::{LieRep, RepError, EDGE_TOL};
use crate::C64;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

const STEP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: (usize, usize),
    /// 1 or 2.
    pub direction: usize,
    pub present: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct JointLattice {
    pub top: (f64, f64),
    pub vertices: Vec<(usize, usize)>,
    /// One entry per vertex and direction.
    pub edges: Vec<Edge>,
    /// Joint eigenvector spanning each `V_θ`, in the order of `vertices`.
    #[serde(skip)]
    pub eigvecs: Vec<Vec<C64>>,
}

impl JointLattice {
    /// Lattice from bare data; all edges between adjacent vertices present
    /// unless listed in `missing`.
    pub fn from_shape(vertices: &[(usize, usize)], missing: &[((usize, usize), usize)]) -> Self {
        let set: BTreeSet<_> = vertices.iter().copied().collect();
        let mut edges = Vec::new();
        for &v in &set {
            for dir in 1..=2 {
                let to = step(v, dir);
                edges.push(Edge { from: v, direction: dir, present: set.contains(&to) && !missing.contains(&(v, dir)) });
            }
        }
        Self { top: (0.0, 0.0), vertices: set.into_iter().collect(), edges, eigvecs: Vec::new() }
    }

    pub fn has_edge(&self, from: (usize, usize), direction: usize) -> bool {
        self.edges.iter().any(|e| e.from == from && e.direction == direction && e.present)
    }

    /// Column `c` (fixed `θ₁ = c`) as the interval `[j, j+m]` of `θ₂`, if it is one.
    pub fn column_interval(&self, c: usize) -> Option<(usize, usize)> {
        interval(self.vertices.iter().filter(|v| v.0 == c).map(|v| v.1))
    }

    /// For consecutive columns `[j₁, j₁+m₁]`, `[j₂, j₂+m₂]`:
    /// `j₂ ≤ j₁` and `j₂+m₂ ≤ j₁+m₁`.
    pub fn satisfies_column_shape(&self) -> bool {
        let cols = self.vertices.iter().map(|v| v.0).max().map_or(0, |m| m + 1);
        (0..cols.saturating_sub(1)).all(|c| match (self.column_interval(c), self.column_interval(c + 1)) {
            (Some((j1, m1)), Some((j2, m2))) => j2 <= j1 && j2 + m2 <= j1 + m1,
            _ => false,
        })
    }
}

fn step(v: (usize, usize), dir: usize) -> (usize, usize) {
    if dir == 1 {
        (v.0 + 1, v.1)
    } else {
        (v.0, v.1 + 1)
    }
}

/// `(start, length − 1)` when the values form a contiguous run.
fn interval(values: impl Iterator<Item = usize>) -> Option<(usize, usize)> {
    let set: BTreeSet<usize> = values.collect();
    let lo = *set.iter().next()?;
    let hi = *set.iter().next_back()?;
    (hi - lo + 1 == set.len()).then_some((lo, hi - lo))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct Properties {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub p4: bool,
}

impl Properties {
    pub fn all(&self) -> bool {
        self.p1 && self.p2 && self.p3 && self.p4
    }
}

pub fn check_properties(l: &JointLattice) -> Properties {
    let mut cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &l.vertices {
        cols.entry(a).or_default().push(b);
        rows.entry(b).or_default().push(a);
    }
    let p1 = cols.values().all(|c| interval(c.iter().copied()).is_some());
    let p2 = rows.values().all(|r| interval(r.iter().copied()).is_some());
    let p3 = match (cols.keys().next(), cols.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo..hi).all(|c| match (cols.get(&c), cols.get(&(c + 1))) {
            (Some(x), Some(y)) => x.iter().any(|t| y.contains(t)),
            _ => false,
        }),
        _ => true,
    };
    let set: BTreeSet<_> = l.vertices.iter().copied().collect();
    let p4 = set.iter().all(|&v| (1..=2).all(|d| !set.contains(&step(v, d)) || l.has_edge(v, d)));
    Properties { p1, p2, p3, p4 }
}

/// Offsets `θ_i = round(top − w)` for one coordinate, or a gap error
/// naming a complementary invariant summand.
fn offsets(rho: &LieRep, coord: usize) -> Result<(f64, Vec<usize>), RepError> {
    let d = rho.diagonal_form()?;
    let w: Vec<C64> = d.weights.iter().map(|wk| wk[coord]).collect();
    let mut distinct: Vec<C64> = Vec::new();
    for x in &w {
        if !distinct.iter().any(|y| (x - y).norm() < STEP_TOL) {
            distinct.push(*x);
        }
    }
    distinct.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    for pair in distinct.windows(2) {
        let gap = pair[0] - pair[1];
        if (gap - 1.0).norm() > STEP_TOL {
            // Same class mod 1: cut the string at the gap. Otherwise the
            // class of the upper value is itself invariant.
            let integral = gap.im.abs() < STEP_TOL && (gap.re - gap.re.round()).abs() < STEP_TOL;
            let part = (0..w.len())
                .filter(|&k| {
                    if integral {
                        w[k].re > pair[1].re + 0.5
                    } else {
                        let t = pair[0] - w[k];
                        t.im.abs() < STEP_TOL && (t.re - t.re.round()).abs() < STEP_TOL
                    }
                })
                .collect();
            return Err(RepError::SpectralGap { coordinate: coord, upper: pair[0], lower: pair[1], part });
        }
    }
    let top = distinct[0];
    Ok((top.re, w.iter().map(|x| (top - x).re.round() as usize).collect()))
}

/// Lattice of a multiplicity-free `b²` representation with unit-step spectra.
pub fn joint_lattice(rho: &LieRep) -> Result<JointLattice, RepError> {
    if rho.n() != 2 {
        return Err(RepError::Dimension(format!("the lattice needs n = 2, got {}", rho.n())));
    }
    if !rho.is_multiplicity_free()? {
        return Err(RepError::NotMultiplicityFree);
    }
    let (t1, th1) = offsets(rho, 0)?;
    let (t2, th2) = offsets(rho, 1)?;
    let d = rho.diagonal_form()?;
    let vertices: Vec<(usize, usize)> = th1.iter().zip(&th2).map(|(&a, &b)| (a, b)).collect();
    let mut edges = Vec::new();
    for (k, &v) in vertices.iter().enumerate() {
        let col = d.basis.column(k);
        for dir in 1..=2 {
            let y = &rho.y()[dir - 1];
            let image = (y * col).norm();
            edges.push(Edge { from: v, direction: dir, present: image > EDGE_TOL * y.norm() * col.norm() });
        }
    }
    let eigvecs = (0..vertices.len()).map(|k| d.basis.column(k).iter().copied().collect()).collect();
    // Present in the representation's vertex order; sort for a stable view.
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&k| vertices[k]);
    let eigvecs: Vec<Vec<C64>> = {
        let ev: Vec<Vec<C64>> = eigvecs;
        order.iter().map(|&k| ev[k].clone()).collect()
    };
    let vertices = order.iter().map(|&k| vertices[k]).collect();
    edges.sort_by_key(|e| (e.from, e.direction));
    Ok(JointLattice { top: (t1, t2), vertices, edges, eigvecs })
}

/// Indecomposability of a multiplicity-free `b²` representation from P1–P4.
pub fn is_indecomposable_mf(rho: &LieRep) -> Result<bool, RepError> {
    Ok(check_properties(&joint_lattice(rho)?).all())
}
