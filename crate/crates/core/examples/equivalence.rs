// SPDX-License-Identifier: Apache-2.0

//! Telling kernels apart by curvature, and finding constant congruences
//! when curvature cannot.

use homoker::curvature;
use homoker::kernels::{self, MatrixKernel};

fn main() {
    let a = MatrixKernel::type_i(vec![1.2, 1.7], 0.5, 0.8).unwrap();
    let b = MatrixKernel::type_i(vec![1.2, 1.7], 0.9, 0.8).unwrap();
    let d = curvature::decide_equivalence(&a, &b).unwrap();
    println!("μ₁ = 0.5 vs 0.9: {}", d.witness.as_deref().unwrap_or("not distinguished"));
    for x in &d.differences {
        println!("  block {} {:<8} {} vs {}", x.block + 1, x.invariant, x.left, x.right);
    }

    let sym = MatrixKernel::type_i(vec![1.5, 1.5], 0.5, 0.5).unwrap();
    match kernels::permutation_twist_equivalent(&sym, &[1, 0]).unwrap() {
        Some(c) => {
            // Entries are 0 or 1 up to rounding.
            let a = c.a.map(|z| (z.re * 1e9).round() / 1e9 + 0.0);
            println!("\nswapping the variables of the symmetric kernel: A ={a}residual {:.1e}", c.residual)
        }
        None => println!("\nno twist for the symmetric kernel"),
    }
    let bent = MatrixKernel::type_i(vec![1.5, 1.6], 0.5, 0.5).unwrap();
    println!("with λ₂ = 1.6 the twist is {}", if kernels::permutation_twist_equivalent(&bent, &[1, 0]).unwrap().is_some() { "present" } else { "absent" });
}
