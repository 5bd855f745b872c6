// SPDX-License-Identifier: Apache-2.0

//! Curvature at the origin and its transport to other points.

use homoker::cocycles::Cocycle;
use homoker::curvature;
use homoker::kernels::MatrixKernel;
use homoker::{c64, C64};

fn re(v: &[C64]) -> Vec<f64> {
    v.iter().map(|z| (z.re * 1e8).round() / 1e8).collect()
}

fn main() {
    let zero = [c64(0.0, 0.0); 2];

    let (lambda, mu) = (1.3, 0.4);
    let d = 1.0 / lambda + mu;
    let t = curvature::curvature(&MatrixKernel::rank2(vec![lambda, 2.0], mu).unwrap(), &zero).unwrap();
    println!("rank 2, K^11(0) spectrum {:?}", re(&t.diagonal_spectrum(0)));
    println!("            closed form [{:.8}, {:.8}]", lambda - 1.0 / d, lambda + 2.0 + 1.0 / d);

    let (l1, m1) = (1.2, 0.5);
    let a1 = 1.0 / l1 + m1 * m1;
    let k = MatrixKernel::type_i(vec![l1, 1.7], m1, 0.8).unwrap();
    let t = curvature::curvature(&k, &zero).unwrap();
    println!("\ntype I, K^11(0) spectrum {:?}", re(&t.diagonal_spectrum(0)));
    println!("            closed form [{:.8}, {:.8}, {:.8}]", l1 - 1.0 / a1, l1, l1 + 1.0 / a1 + 2.0);

    // Homogeneity lets the origin determine every other point.
    let j = Cocycle::closed_rank3b(vec![l1, 1.7]).unwrap();
    let w = [c64(0.4, -0.2), c64(0.1, 0.5)];
    let direct = curvature::curvature(&k, &w).unwrap();
    let moved = curvature::curvature_from_origin(&k, &j, &w).unwrap();
    println!("\nat w = (0.4-0.2i, 0.1+0.5i): direct vs transported from 0 differ by {:.2e}", direct.distance(&moved));

    let rep = curvature::aut_obstruction_report(&MatrixKernel::type_ii(vec![1.4, 0.9], 1.0, 0.5).unwrap()).unwrap();
    println!("type II: diagonal blocks similar {}, off-diagonal nilpotent {}", rep.diag_similar, rep.offdiag_nilpotent);
}
