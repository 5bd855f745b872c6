// SPDX-License-Identifier: Apache-2.0

//! Multipliers in closed form and from a representation: the cocycle
//! identity and quasi-invariance of the matching kernels.

use homoker::cocycles::{self, Cocycle};
use homoker::kernels::MatrixKernel;
use homoker::representations::catalog;

fn main() {
    let pairs = [
        (MatrixKernel::rank2(vec![1.3, 2.0], 0.4).unwrap(), Cocycle::closed_rank2(vec![1.3, 2.0]).unwrap()),
        (MatrixKernel::type_i(vec![1.2, 1.7], 0.5, 0.8).unwrap(), Cocycle::closed_rank3b(vec![1.2, 1.7]).unwrap()),
        (MatrixKernel::type_ii(vec![1.4, 0.9], 0.7, 0.5).unwrap(), Cocycle::closed_rank3c(vec![1.4, 0.9]).unwrap()),
    ];
    println!("{:<14} {:<16} {:>12} {:>12} {:>12}", "cocycle", "kernel", "identity", "invariance", "vs from_rep");
    for (k, j) in &pairs {
        let id = cocycles::verify_cocycle_identity(j, 200, 1).unwrap();
        let qi = cocycles::verify_quasi_invariance(k, j, 200, 2).unwrap();
        let agree = cocycles::max_difference(j, &j.as_from_rep().unwrap(), 50, 3).unwrap();
        println!("{:<14} {:<16} {id:>12.2e} {qi:>12.2e} {agree:>12.2e}", j.source_name(), k.family_name());
    }

    // Any representation gives a multiplier; the identity holds for all exponents.
    let j = Cocycle::from_rep(catalog::case_iii(0.0, 0.0, &[0.0]), vec![0.3, 1.1, 2.0]).unwrap();
    println!("\ncase iii on D³: identity residual {:.2e}", cocycles::verify_cocycle_identity(&j, 100, 4).unwrap());
}
