// SPDX-License-Identifier: Apache-2.0

//! Classify small representations of `b²` and compare the lattice
//! criterion with a brute-force search for invariant splittings.

use homoker::representations::{self as reps, catalog, LieRep};
use homoker::sampling::{rng, well_conditioned};

fn report(name: &str, rho: &LieRep) {
    let tag = reps::classify(rho).map(|t| t.name()).unwrap_or("(rank too large)");
    let line = match reps::joint_lattice(rho) {
        Ok(l) => {
            let p = reps::check_properties(&l);
            format!("vertices {:?}, P1..P4 = {} {} {} {}", l.vertices, p.p1, p.p2, p.p3, p.p4)
        }
        Err(e) => format!("no lattice: {e}"),
    };
    let brute = reps::brute_force_indecomposable(rho).unwrap();
    println!("{name:<14} {tag:<13} brute force indecomposable: {brute:<5} {line}");
}

fn main() {
    let mut g = rng(1);
    let cases = [("case ii", catalog::case_ii(0.5, 1.0, &[])), ("case iii", catalog::case_iii(0.0, 0.0, &[])), ("rank3c basis", catalog::rank3c_top_zero())];
    for (name, rho) in &cases {
        // Classification works in any basis.
        let p = well_conditioned(&mut g, rho.r());
        report(name, &rho.conjugated(&p).unwrap());
    }

    let dim2 = catalog::standard_dim2(1.5, &[0.25]);
    println!("\nstandard dim 2: {}", serde_json::to_string(&reps::classify(&dim2).unwrap()).unwrap());
    println!("restriction to b¹: {:?}", reps::restriction_criterion(&catalog::case_i(0.0, &[2.0]), 1).unwrap());
}
