// SPDX-License-Identifier: Apache-2.0

//! Admissible values of `K(0,0)` and bounded coordinate multipliers.

use homoker::cocycles::{self, Cocycle};
use homoker::kernels::{self, MatrixKernel};

fn main() {
    let j = Cocycle::closed_rank3b(vec![2.0, 4.0]).unwrap();
    let cone = cocycles::admissible_origin_matrices(&j).unwrap();
    println!("commutant dimension {}, diagonal {}", cone.commutant_dimension, cone.diagonal);
    for c in &cone.constraints {
        println!("  {} (bound {})", c.note, c.lower_bound);
    }
    for d in [[0.6, 0.3], [0.4, 0.3], [0.5, 0.3]] {
        let check = cocycles::check_origin_matrix(&j, &d).unwrap();
        print!("d = {d:?}: admissible {}", check.admissible);
        for w in &check.witnesses {
            print!(", {} < 0 at r = {:.3e} ({:.3e})", w.profile, w.r, w.value);
        }
        println!();
    }

    // On the boundary d = 1/λ the weighted profile still dips below zero.
    let radii: Vec<f64> = (1..=5).map(|k| 0.01 * k as f64).collect();
    let f: Vec<String> = cocycles::det_q_c_profile(1.0, 2.0, &radii).iter().map(|v| format!("{v:.3e}")).collect();
    println!("\nf_C(r) at λ = 1, C = 2, r = 0.01..0.05: [{}]", f.join(", "));

    let radii: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
    for lambda in [0.5, 1.0, 1.5] {
        let k = MatrixKernel::rank1(vec![lambda]).unwrap();
        let hit = kernels::bounded_witness_search(&k, 0, 1.0, &radii).unwrap();
        println!(
            "λ = {lambda}: ‖M_z‖ ≤ 1 {}",
            match hit {
                Some(w) => format!("fails, two-point witness min eigenvalue {:.3e}", w.min_eigenvalue),
                None => "not contradicted".into(),
            }
        );
    }
}
