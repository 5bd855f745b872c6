// SPDX-License-Identifier: Apache-2.0

//! Oracles and generators shared by the integration tests. Nothing here
//! calls the code paths it is used to check.

#![allow(dead_code)]

use homoker::representations::LieRep;
use homoker::sampling::{rng, well_conditioned};
use homoker::{c64, Mat, C64};
use rand::Rng;
use std::collections::BTreeSet;

pub fn zeros(n: usize) -> Vec<C64> {
    vec![c64(0.0, 0.0); n]
}

pub fn real_diag(v: &[f64]) -> Mat {
    Mat::from_fn(v.len(), v.len(), |i, j| if i == j { c64(v[i], 0.0) } else { c64(0.0, 0.0) })
}

/// Sorted real parts.
pub fn sorted_re(v: &[C64]) -> Vec<f64> {
    let mut out: Vec<f64> = v.iter().map(|z| z.re).collect();
    out.sort_by(f64::total_cmp);
    out
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Line-bundle curvature `λ/(1 − |w|²)²`.
pub fn line_curvature(lambda: f64, w: C64) -> f64 {
    lambda / (1.0 - w.norm_sqr()).powi(2)
}

/// Curvature at the origin from second-order Taylor data of `G(z, u)` in
/// one variable: `G₀⁻¹ G_{zu} − G₀⁻¹ G_z G₀⁻¹ G_u`.
pub fn curvature_from_series(g0: &Mat, gz: &Mat, gu: &Mat, gzu: &Mat) -> Mat {
    let inv = g0.clone().try_inverse().expect("invertible G₀");
    &inv * gzu - &inv * gz * &inv * gu
}

/// Taylor data of the rank-two kernel
/// `(1−zu)^{−λ} [[1, z/(1−zu)], [u/(1−zu), (d + zu)/(1−zu)²]]` at 0,
/// worked out by hand: `G₀ = diag(1, d)`, `G_z = E₁₂`, `G_u = E₂₁`,
/// `G_{zu} = diag(λ, 1 + d(λ+2))`.
pub fn rank2_series(lambda: f64, mu: f64) -> (Mat, Mat, Mat, Mat) {
    let d = 1.0 / lambda + mu;
    let mut gz = Mat::zeros(2, 2);
    gz[(0, 1)] = c64(1.0, 0.0);
    let mut gu = Mat::zeros(2, 2);
    gu[(1, 0)] = c64(1.0, 0.0);
    (real_diag(&[1.0, d]), gz, gu, real_diag(&[lambda, 1.0 + d * (lambda + 2.0)]))
}

/// Type I kernel typed out afresh: `D M D · (1−z₁w̄₁)^{−λ₁−2}(1−z₂w̄₂)^{−λ₂−2}`.
pub fn type_i_direct(l1: f64, l2: f64, mu1: f64, mu2: f64, z: [C64; 2], w: [C64; 2]) -> Mat {
    let (a1, a2) = (1.0 / l1 + mu1 * mu1, 1.0 / l2 + mu2 * mu2);
    let x1 = 1.0 - z[0] * w[0].conj();
    let x2 = 1.0 - z[1] * w[1].conj();
    let s = (x1.ln() * (-l1 - 2.0)).exp() * (x2.ln() * (-l2 - 2.0)).exp();
    let (wb1, wb2) = (w[0].conj(), w[1].conj());
    let m = Mat::from_row_slice(
        3,
        3,
        &[
            x1 * x1 * x2 * x2,
            z[0] * x1 * x2 * x2,
            z[1] * x1 * x1 * x2,
            wb1 * x1 * x2 * x2,
            (a1 + z[0] * wb1) * x2 * x2,
            wb1 * z[1] * x1 * x2,
            wb2 * x1 * x1 * x2,
            z[0] * wb2 * x1 * x2,
            (a2 + z[1] * wb2) * x1 * x1,
        ],
    );
    m * s
}

/// Normalization computed directly from the definition with explicit
/// inverses and an eigen-decomposition square root.
pub fn normalized_direct(k: &dyn Fn(&[C64], &[C64]) -> Mat, n: usize, z: &[C64], w: &[C64]) -> Mat {
    let o = zeros(n);
    let k00 = k(&o, &o);
    let eig = k00.clone().symmetric_eigen();
    let d = Mat::from_fn(k00.nrows(), k00.nrows(), |i, j| if i == j { c64(1.0 / eig.eigenvalues[i].sqrt(), 0.0) } else { c64(0.0, 0.0) });
    let s = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
    let k0 = |a: &[C64], b: &[C64]| &s * k(a, b) * &s;
    k0(z, &o).try_inverse().unwrap() * k0(z, w) * k0(&o, w).try_inverse().unwrap()
}

// ---- representations ----------------------------------------------------------

/// Representation of `b²` on the vertices of a lattice shape: `H_i`
/// diagonal with weights `top_i − θ_i`, `Y_j e_θ = c e_{θ+ε_j}` for each
/// listed edge, with coefficients from a vertex gauge so paths agree.
pub fn lattice_rep(vertices: &[(usize, usize)], edges: &BTreeSet<((usize, usize), usize)>, top: (f64, f64), gauge: &[f64]) -> LieRep {
    let r = vertices.len();
    let idx = |v: (usize, usize)| vertices.iter().position(|&u| u == v);
    let h1 = real_diag(&vertices.iter().map(|v| top.0 - v.0 as f64).collect::<Vec<_>>());
    let h2 = real_diag(&vertices.iter().map(|v| top.1 - v.1 as f64).collect::<Vec<_>>());
    let mut y = [Mat::zeros(r, r), Mat::zeros(r, r)];
    for &(from, dir) in edges {
        let to = if dir == 1 { (from.0 + 1, from.1) } else { (from.0, from.1 + 1) };
        if let (Some(a), Some(b)) = (idx(from), idx(to)) {
            y[dir - 1][(b, a)] = c64(gauge[b] / gauge[a], 0.0);
        }
    }
    LieRep::new(vec![h1, h2], y.to_vec()).unwrap()
}

/// Block-diagonal sum of two representations.
pub fn direct_sum(a: &LieRep, b: &LieRep) -> LieRep {
    let (ra, rb) = (a.r(), b.r());
    let glue = |x: &Mat, y: &Mat| {
        let mut m = Mat::zeros(ra + rb, ra + rb);
        m.view_mut((0, 0), (ra, ra)).copy_from(x);
        m.view_mut((ra, ra), (rb, rb)).copy_from(y);
        m
    };
    LieRep::new(a.h().iter().zip(b.h()).map(|(x, y)| glue(x, y)).collect(), a.y().iter().zip(b.y()).map(|(x, y)| glue(x, y)).collect()).unwrap()
}

fn random_shape<R: Rng>(g: &mut R, size: usize) -> Vec<(usize, usize)> {
    let mut box_side = 2 + g.gen_range(0..3);
    while box_side * box_side < size {
        box_side += 1;
    }
    let mut cells: Vec<(usize, usize)> = (0..box_side).flat_map(|a| (0..box_side).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    while out.len() < size && !cells.is_empty() {
        let k = g.gen_range(0..cells.len());
        out.push(cells.swap_remove(k));
    }
    // Anchor the top weights at θ = 0.
    let m0 = out.iter().map(|v| v.0).min().unwrap();
    let m1 = out.iter().map(|v| v.1).min().unwrap();
    out.iter_mut().for_each(|v| *v = (v.0 - m0, v.1 - m1));
    out.sort();
    out
}

fn random_piece<R: Rng>(g: &mut R, size: usize, drop_rate: f64) -> LieRep {
    loop {
        let vertices = random_shape(g, size);
        let set: BTreeSet<_> = vertices.iter().copied().collect();
        let mut edges = BTreeSet::new();
        for &v in &vertices {
            for dir in 1..=2 {
                let to = if dir == 1 { (v.0 + 1, v.1) } else { (v.0, v.1 + 1) };
                if set.contains(&to) && g.gen::<f64>() >= drop_rate {
                    edges.insert((v, dir));
                }
            }
        }
        let gauge: Vec<f64> = (0..vertices.len()).map(|_| g.gen_range(0.5..2.0)).collect();
        let rho = lattice_rep(&vertices, &edges, (g.gen_range(-2.0..2.0), g.gen_range(-2.0..2.0)), &gauge);
        if rho.validate().is_empty() {
            return rho;
        }
    }
}

/// Multiplicity-free representations of `b²` of dimension 2..=8: single
/// connected-or-not lattice pieces and direct sums, each conjugated by a
/// random well-conditioned matrix.
pub fn generated_mf_reps(count: usize, seed: u64) -> Vec<LieRep> {
    let mut g = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let rho = if g.gen_bool(0.7) {
            let size = g.gen_range(2..=8);
            let drop = if g.gen_bool(0.5) { 0.0 } else { 0.2 };
            random_piece(&mut g, size, drop)
        } else {
            let s1 = g.gen_range(1..=4);
            let s2 = g.gen_range(1..=(8 - s1));
            let a = random_piece(&mut g, s1, 0.0);
            let b = random_piece(&mut g, s2, 0.0);
            // Shift the second piece by integers (sometimes by a half) so
            // the spectra interleave or separate.
            let shift = (g.gen_range(-2..=2) as f64 + if g.gen_bool(0.2) { 0.5 } else { 0.0 }, g.gen_range(-2..=2) as f64);
            let s2 = b.r();
            let b =
                LieRep::new(vec![&b.h()[0] + Mat::identity(s2, s2) * c64(shift.0, 0.0), &b.h()[1] + Mat::identity(s2, s2) * c64(shift.1, 0.0)], b.y().to_vec())
                    .unwrap();
            direct_sum(&a, &b)
        };
        if !rho.is_multiplicity_free().unwrap_or(false) || rho.r() < 2 {
            continue;
        }
        let p = well_conditioned(&mut g, rho.r());
        let conj = rho.conjugated(&p).unwrap();
        if conj.validate().is_empty() {
            out.push(conj);
        }
    }
    out
}

/// True when the span of the listed diagonal-basis vectors and of its
/// complement are both invariant: a certificate of decomposability.
pub fn split_is_invariant(rho: &LieRep, part: &[usize]) -> bool {
    let d = rho.diagonal_form().unwrap();
    let r = rho.r();
    let inside: BTreeSet<usize> = part.iter().copied().collect();
    if inside.is_empty() || inside.len() == r {
        return false;
    }
    d.y.iter().all(|y| {
        let tol = 1e-9 * y.norm().max(1e-300);
        (0..r).all(|a| (0..r).all(|b| inside.contains(&a) == inside.contains(&b) || y[(a, b)].norm() <= tol))
    })
}
