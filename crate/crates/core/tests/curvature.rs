// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use homoker::cocycles::Cocycle;
use homoker::curvature::{self, CurvatureError};
use homoker::kernels::MatrixKernel;
use homoker::mobius::{MobiusElement, MobiusTuple};
use homoker::sampling::{polydisc_point, rng, u0_tuple};
use homoker::{c64, Mat};

fn type_i(l1: f64, l2: f64, m1: f64, m2: f64) -> MatrixKernel {
    MatrixKernel::type_i(vec![l1, l2], m1, m2).unwrap()
}

#[test]
fn line_bundles_away_from_the_origin() {
    let lambda = [0.8, 3.0, 1.25];
    let k = MatrixKernel::rank1(lambda.to_vec()).unwrap();
    let w = vec![c64(0.6, 0.2), c64(-0.5, -0.5), c64(0.0, 0.75)];
    let t = curvature::curvature(&k, &w).unwrap();
    for i in 0..3 {
        let rel = (t.block(i, i)[(0, 0)].re - line_curvature(lambda[i], w[i])).abs() / line_curvature(lambda[i], w[i]);
        assert!(rel < 1e-6, "slot {i}: {rel:e}");
        for j in 0..3 {
            if i != j {
                assert!(t.block(i, j).norm() < 1e-6);
            }
        }
    }
}

#[test]
fn type_i_spectrum_at_origin() {
    let (l1, l2, m1, m2) = (1.2, 1.7, 0.5, 0.8);
    let a1 = 1.0 / l1 + m1 * m1;
    let t = curvature::curvature(&type_i(l1, l2, m1, m2), &zeros(2)).unwrap();
    let got = sorted_re(&t.diagonal_spectrum(0));
    assert!(max_gap(&got, &[l1 - 1.0 / a1, l1, l1 + 1.0 / a1 + 2.0]) < 1e-6, "{got:?}");
}

#[test]
fn rank2_block_matches_series() {
    for (lambda, mu) in [(0.5, 0.0), (1.3, 0.4), (3.0, 2.0)] {
        let t = curvature::curvature(&MatrixKernel::rank2(vec![lambda, 1.0], mu).unwrap(), &zeros(2)).unwrap();
        let (g0, gz, gu, gzu) = rank2_series(lambda, mu);
        let series = curvature_from_series(&g0, &gz, &gu, &gzu);
        assert!((t.block(0, 0) - series).norm() < 1e-6);
    }
}

#[test]
fn transformation_rule_for_matched_pairs() {
    let pairs = [
        (type_i(1.2, 1.7, 0.5, 0.8), Cocycle::closed_rank3b(vec![1.2, 1.7]).unwrap()),
        (MatrixKernel::type_ii(vec![1.4, 0.9], 0.7, 0.5).unwrap(), Cocycle::closed_rank3c(vec![1.4, 0.9]).unwrap()),
        (MatrixKernel::rank2(vec![1.3, 2.0], 0.4).unwrap(), Cocycle::closed_rank2(vec![1.3, 2.0]).unwrap()),
    ];
    let mut g = rng(17);
    for (k, j) in &pairs {
        for _ in 0..3 {
            let h = u0_tuple(&mut g, 2);
            let w = polydisc_point(&mut g, 2, 0.5);
            let r = curvature::verify_transformation_rule(k, j, &h, &w).unwrap();
            assert!(r < 1e-5, "{}: {r:e}", k.family_name());
        }
    }
}

#[test]
fn transport_from_the_origin() {
    let k = type_i(1.2, 1.7, 0.5, 0.8);
    let j = Cocycle::closed_rank3b(vec![1.2, 1.7]).unwrap();
    let w = vec![c64(0.3, -0.2), c64(-0.1, 0.45)];
    let direct = curvature::curvature(&k, &w).unwrap();
    let moved = curvature::curvature_from_origin(&k, &j, &w).unwrap();
    assert!(direct.distance(&moved) < 1e-5 * direct.assembled().norm());
}

#[test]
fn the_rule_sees_matrix_structure_but_not_scalar_factors() {
    let k = type_i(1.2, 1.7, 0.5, 0.8);
    let h = MobiusTuple::new(vec![MobiusElement::from_b(c64(0.3, 0.1)), MobiusElement::from_b(c64(-0.2, 0.2))]);
    let w = [c64(0.1, 0.0), c64(0.0, 0.2)];
    // Changing λ₂ only rescales J, which cancels against J*.
    let rescaled = Cocycle::closed_rank3b(vec![1.2, 2.7]).unwrap();
    assert!(curvature::verify_transformation_rule(&k, &rescaled, &h, &w).unwrap() < 1e-5);
    let other = Cocycle::closed_rank3c(vec![1.2, 1.7]).unwrap();
    assert!(curvature::verify_transformation_rule(&k, &other, &h, &w).unwrap() > 1e-2);
}

#[test]
fn step_size_refinement_converges() {
    let k = type_i(1.2, 1.7, 0.5, 0.8);
    let w = vec![c64(0.2, 0.1), c64(0.0, -0.3)];
    let fine = curvature::curvature_with_step(&k, &w, 1e-3).unwrap();
    let coarse = curvature::curvature_with_step(&k, &w, 1e-2).unwrap();
    assert!(fine.distance(&coarse) < 1e-6 * fine.assembled().norm());
}

#[test]
fn equivalence_separates_by_det_when_traces_agree() {
    // The trace of K¹¹(0) does not see μ₁, the determinant does.
    let d = curvature::decide_equivalence(&type_i(1.2, 1.7, 0.5, 0.8), &type_i(1.2, 1.7, 0.9, 0.8)).unwrap();
    assert!(!d.equivalent_possible);
    let kinds: Vec<_> = d.differences.iter().map(|x| (x.block, x.invariant)).collect();
    assert_eq!(kinds, vec![(0, "det"), (0, "spectrum")]);
    assert!(d.witness.unwrap().starts_with("det of K^{11}(0)"));
}

#[test]
fn equivalence_finds_a_constant_congruence() {
    let base = type_i(1.2, 1.7, 0.5, 0.8);
    let a = Mat::from_row_slice(
        3,
        3,
        &[c64(2.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)],
    );
    let twisted = MatrixKernel::twisted(base.clone(), a).unwrap();
    let d = curvature::decide_equivalence(&base, &twisted).unwrap();
    assert!(d.equivalent_possible && d.differences.is_empty());
    assert!(d.congruence.expect("congruence").residual < 1e-8);
    assert!(matches!(curvature::decide_equivalence(&base, &MatrixKernel::rank1(vec![1.0, 1.0]).unwrap()), Err(CurvatureError::DimensionMismatch(_))));
}

#[test]
fn type_ii_obstruction_sweep() {
    for (a1, a2, b1, similar) in [(1.0, 1.0, 1.0, true), (1.0, 1.0, 0.5, false), (2.0, 1.0, 1.0, false)] {
        let r = curvature::aut_obstruction_report(&MatrixKernel::type_ii(vec![a1, a2], b1, 0.3).unwrap()).unwrap();
        assert_eq!(r.diag_similar, similar, "{a1} {a2} {b1}");
        assert!(r.offdiag_nilpotent);
    }
}
