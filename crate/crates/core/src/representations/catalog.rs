// SPDX-License-Identifier: Apache-2.0

//! Standard representations of dimension two and three.
//!
//! The `*_top_zero` forms have largest eigenvalue `0` in every active
//! coordinate; they feed the cocycle construction, which adds the scalar
//! part separately.

use super::LieRep;
use crate::{Mat, C64};

fn diag(v: &[f64]) -> Mat {
    Mat::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0))))
}

/// Matrix unit `E_{ij}`, 1-based indices.
fn unit(r: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(r, r);
    m[(i - 1, j - 1)] = C64::new(1.0, 0.0);
    m
}

fn with_scalars(mut h: Vec<Mat>, mut y: Vec<Mat>, r: usize, scalars: &[f64]) -> LieRep {
    for &s in scalars {
        h.push(Mat::identity(r, r) * C64::new(s, 0.0));
        y.push(Mat::zeros(r, r));
    }
    LieRep::new(h, y).expect("catalog shapes are consistent")
}

/// `H₁ = diag(−λ, −λ−1)`, `Y₁ = E₂₁`, then `H_j = s_j I` for each scalar.
pub fn standard_dim2(lambda: f64, scalars: &[f64]) -> LieRep {
    with_scalars(vec![diag(&[-lambda, -lambda - 1.0])], vec![unit(2, 2, 1)], 2, scalars)
}

/// One unbroken string `top, top−1, top−2` in the first coordinate.
pub fn case_i(top: f64, scalars: &[f64]) -> LieRep {
    let y = unit(3, 2, 1) * C64::new(2.0, 0.0) + unit(3, 3, 2) * C64::new(3.0, 0.0);
    with_scalars(vec![diag(&[top, top - 1.0, top - 2.0])], vec![y], 3, scalars)
}

/// Two arrows out of the top vertex: lattice `{(0,0), (1,0), (0,1)}`.
pub fn case_ii(l1: f64, l2: f64, scalars: &[f64]) -> LieRep {
    with_scalars(vec![diag(&[l1, l1 - 1.0, l1]), diag(&[l2, l2, l2 - 1.0])], vec![unit(3, 2, 1), unit(3, 3, 1)], 3, scalars)
}

/// Two arrows into the bottom vertex: lattice `{(1,0), (0,1), (1,1)}`.
pub fn case_iii(a1: f64, a2: f64, scalars: &[f64]) -> LieRep {
    with_scalars(vec![diag(&[a1 - 1.0, a1, a1 - 1.0]), diag(&[a2, a2 - 1.0, a2 - 1.0])], vec![unit(3, 3, 2), unit(3, 3, 1)], 3, scalars)
}

pub fn rank2_top_zero() -> LieRep {
    standard_dim2(0.0, &[])
}

pub fn rank3a_top_zero() -> LieRep {
    case_i(0.0, &[])
}

pub fn rank3b_top_zero() -> LieRep {
    case_ii(0.0, 0.0, &[])
}

/// Case (iii) with the first two basis vectors swapped, so the sink of
/// both arrows stays last and the two sources come first.
pub fn rank3c_top_zero() -> LieRep {
    LieRep::new(vec![diag(&[0.0, -1.0, -1.0]), diag(&[-1.0, 0.0, -1.0])], vec![unit(3, 3, 1), unit(3, 3, 2)]).expect("catalog shapes are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid() {
        for rho in [standard_dim2(1.5, &[0.3, 2.0]), case_i(-1.0, &[0.5]), case_ii(-2.0, -3.0, &[1.0]), case_iii(-1.0, -0.5, &[]), rank3c_top_zero()] {
            assert!(rho.validate().is_empty(), "{:?}", rho.validate());
        }
    }
}
