// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use homoker::kernels::{self, DiscFactor, KernelError, MatrixKernel};
use homoker::sampling::{polydisc_point, rng};
use homoker::{c64, Mat};

fn type_i() -> MatrixKernel {
    MatrixKernel::type_i(vec![1.2, 1.7], 0.5, 0.8).unwrap()
}

#[test]
fn type_i_matches_hand_expansion() {
    let k = type_i();
    let mut g = rng(5);
    for _ in 0..40 {
        let (z, w) = (polydisc_point(&mut g, 2, 0.9), polydisc_point(&mut g, 2, 0.9));
        let direct = type_i_direct(1.2, 1.7, 0.5, 0.8, [z[0], z[1]], [w[0], w[1]]);
        let got = k.evaluate(&z, &w).unwrap();
        assert!((&got - &direct).norm() < 1e-11 * direct.norm());
    }
}

#[test]
fn rank1_is_a_product_of_powers() {
    let k = MatrixKernel::rank1(vec![0.7, 2.5, 1.0]).unwrap();
    let z = [c64(0.3, 0.2), c64(-0.5, 0.1), c64(0.0, 0.6)];
    let w = [c64(0.1, -0.4), c64(0.2, 0.2), c64(-0.3, 0.0)];
    let expect = [0.7, 2.5, 1.0].iter().zip(z.iter().zip(&w)).map(|(l, (a, b))| (1.0 - a * b.conj()).powf(-l)).product::<homoker::C64>();
    assert!((k.evaluate(&z, &w).unwrap()[(0, 0)] - expect).norm() < 1e-13);
}

#[test]
fn kernels_are_hermitian_symmetric() {
    let all = [
        type_i(),
        MatrixKernel::type_ii(vec![1.4, 0.9], 0.7, 0.5).unwrap(),
        MatrixKernel::rank2(vec![1.3, 2.0], 0.4).unwrap(),
        MatrixKernel::tensor_product(Some(DiscFactor::Homogeneous3 { lambda: 1.6, mu1: 0.6, mu2: 0.9 }), vec![2.2]).unwrap(),
    ];
    let mut g = rng(8);
    for k in &all {
        let (z, w) = (polydisc_point(&mut g, 2, 0.8), polydisc_point(&mut g, 2, 0.8));
        let a = k.evaluate(&z, &w).unwrap();
        let b = k.evaluate(&w, &z).unwrap().adjoint();
        assert!((&a - &b).norm() < 1e-12 * a.norm(), "{}", k.family_name());
    }
}

#[test]
fn normalized_kernel_matches_direct_construction() {
    let k = type_i();
    let nk = kernels::normalize(&k).unwrap();
    let z = vec![c64(0.4, -0.1), c64(0.2, 0.3)];
    let w = vec![c64(-0.3, 0.2), c64(0.5, 0.0)];
    let direct = normalized_direct(&|a, b| type_i_direct(1.2, 1.7, 0.5, 0.8, [a[0], a[1]], [b[0], b[1]]), 2, &z, &w);
    assert!((nk.evaluate(&z, &w).unwrap() - &direct).norm() < 1e-10);
    let id = Mat::identity(3, 3);
    assert!((nk.evaluate(&z, &zeros(2)).unwrap() - &id).norm() < 1e-12);
    assert!((nk.evaluate(&zeros(2), &w).unwrap() - &id).norm() < 1e-12);
}

#[test]
fn normalized_type_i_coupling_entry() {
    // The (3,2) entry of the normalized kernel at z = (x, 0), w = (0, x)
    // is x²/√(α₁α₂).
    let (l1, l2, m1, m2): (f64, f64, f64, f64) = (1.2, 1.7, 0.5, 0.8);
    let (a1, a2) = (1.0 / l1 + m1 * m1, 1.0 / l2 + m2 * m2);
    let nk = kernels::normalize(&type_i()).unwrap();
    for x in [0.2, 0.6, 0.9] {
        let v = nk.evaluate(&[c64(x, 0.0), c64(0.0, 0.0)], &[c64(0.0, 0.0), c64(x, 0.0)]).unwrap();
        assert!((v[(2, 1)] - c64(x * x / (a1 * a2).sqrt(), 0.0)).norm() < 1e-12);
        let mut rest = v.clone();
        rest[(2, 1)] = c64(0.0, 0.0);
        assert!((rest - Mat::identity(3, 3)).norm() < 1e-12);
    }
}

#[test]
fn gram_verdicts() {
    let pts: Vec<_> = {
        let mut g = rng(1);
        (0..6).map(|_| polydisc_point(&mut g, 2, 0.7)).collect()
    };
    assert_eq!(kernels::gram_check(&type_i(), &pts).unwrap().verdict, kernels::Verdict::PositiveDefinite);
    let indefinite = MatrixKernel::constant(2, Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]))).unwrap();
    assert_eq!(kernels::gram_check(&indefinite, &pts[..2]).unwrap().verdict, kernels::Verdict::Indefinite);
    assert!(matches!(kernels::gram_check(&type_i(), &pts[..1]), Err(KernelError::InsufficientSamples { .. })));
}

#[test]
fn multiplier_bound_on_line_bundles() {
    // For λ ≥ 1 the coordinate multiplier is a contraction; for λ < 1 the
    // two-point test at {0, r} already breaks c = 1 as r → 1.
    let radii: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
    let big = MatrixKernel::rank1(vec![1.5]).unwrap();
    assert!(kernels::bounded_witness_search(&big, 0, 1.0, &radii).unwrap().is_none());
    let small = MatrixKernel::rank1(vec![0.5]).unwrap();
    let hit = kernels::bounded_witness_search(&small, 0, 1.0, &radii).unwrap().expect("witness");
    assert_eq!(hit.verdict, kernels::Verdict::Indefinite);
}

#[test]
fn commutant_of_a_direct_sum_with_equal_parts() {
    let part = MatrixKernel::rank1(vec![1.0, 2.0]).unwrap();
    let sum = MatrixKernel::direct_sum(vec![part.clone(), part]).unwrap();
    let c = kernels::commutant_projections(&sum, &kernels::sample_pairs(2, 30, 4)).unwrap();
    assert_eq!(c.dimension, 4);
}

#[test]
fn twisted_kernel_is_congruent_to_its_base() {
    let a = Mat::from_row_slice(
        3,
        3,
        &[c64(1.0, 0.0), c64(0.2, 0.1), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.8, 0.0), c64(0.3, -0.2), c64(0.1, 0.0), c64(0.0, 0.0), c64(1.3, 0.0)],
    );
    let t = MatrixKernel::twisted(type_i(), a).unwrap();
    let found = kernels::find_congruence(&type_i(), &t, &kernels::sample_pairs(2, 24, 9)).unwrap().expect("congruence");
    assert!(found.residual < 1e-8);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(matches!(MatrixKernel::rank1(vec![]), Err(KernelError::InvalidParameter(_))));
    assert!(matches!(MatrixKernel::rank1(vec![-1.0]), Err(KernelError::InvalidParameter(_))));
    assert!(matches!(MatrixKernel::type_i(vec![1.0], 0.5, 0.5), Err(KernelError::InvalidParameter(_))));
    assert!(matches!(MatrixKernel::permuted(type_i(), vec![0, 0]), Err(KernelError::InvalidParameter(_))));
    assert!(type_i().evaluate(&[c64(0.0, 0.0)], &zeros(2)).is_err());
    assert!(matches!(type_i().evaluate(&[c64(1.0, 0.0), c64(0.0, 0.0)], &zeros(2)), Err(KernelError::OutsideDisc)));
}
