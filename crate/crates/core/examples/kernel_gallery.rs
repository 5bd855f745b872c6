// SPDX-License-Identifier: Apache-2.0

//! Evaluate each kernel family at one pair of points and run a Gram test.

use homoker::c64;
use homoker::kernels::{self, DiscFactor, MatrixKernel};
use homoker::sampling::{polydisc_point, rng};

fn main() {
    let family = vec![
        MatrixKernel::rank1(vec![1.5, 2.5]).unwrap(),
        MatrixKernel::rank2(vec![1.3, 2.0], 0.4).unwrap(),
        MatrixKernel::type_i(vec![1.2, 1.7], 0.5, 0.8).unwrap(),
        MatrixKernel::type_ii(vec![1.4, 0.9], 0.7, 0.5).unwrap(),
        MatrixKernel::tensor_product(Some(DiscFactor::Homogeneous3 { lambda: 1.6, mu1: 0.6, mu2: 0.9 }), vec![2.2]).unwrap(),
    ];
    let z = [c64(0.3, 0.1), c64(-0.2, 0.4)];
    let w = [c64(0.1, -0.5), c64(0.25, 0.0)];
    let mut g = rng(7);
    let points: Vec<_> = (0..10).map(|_| polydisc_point(&mut g, 2, 0.8)).collect();

    for k in &family {
        let m = k.evaluate(&z, &w).unwrap();
        let gram = kernels::gram_check(k, &points).unwrap();
        println!(
            "{:<16} rank {}  |K(z,w)| = {:>9.5}  Gram min eig {:>10.3e}  {}",
            k.family_name(),
            k.rank(),
            m.norm(),
            gram.min_eigenvalue,
            gram.verdict.as_str()
        );
    }

    // Normalizing at the origin makes K(z,0) = K(0,w) = I.
    let nk = kernels::normalize(&family[2]).unwrap();
    println!("\nnormalized type I at (z, w):\n{:.6}", nk.evaluate(&z, &w).unwrap());
}
