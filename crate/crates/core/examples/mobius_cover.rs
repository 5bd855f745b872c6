// SPDX-License-Identifier: Apache-2.0

//! Fractional powers of `g'` on the covering group.
//!
//! Composing six rotations by π/3 gives the identity map, yet `g'^{1/4}`
//! comes back as `i`: the lift remembers the winding.

use homoker::c64;
use homoker::mobius::{MobiusElement, MobiusTuple};
use homoker::spec::format_c64;
use std::f64::consts::PI;

fn main() {
    let z = c64(0.3, 0.1);
    let step = MobiusElement::rotation(PI / 3.0);
    let mut g = MobiusElement::identity();
    for k in 1..=6 {
        g = g.compose(&step);
        println!("after {k} steps: g(z) = {:.6}, branch {}, g'(z)^(1/4) = {:.6}", g.act(z).unwrap(), g.branch_index(), g.derivative_power(z, 0.25).unwrap());
    }

    let p = MobiusElement::from_b(c64(0.4, -0.3));
    let h = 1e-6;
    let fd = (p.act(z + h).unwrap() - p.act(z - h).unwrap()) / (2.0 * h);
    println!("\ng'(z) = {:.10}, central difference {:.10}", p.derivative(z), fd);

    let w = vec![c64(0.5, 0.2), c64(-0.3, 0.6)];
    let killer = MobiusTuple::point_killer(&w).unwrap();
    let show = |p: &[homoker::C64]| p.iter().map(|&c| format_c64(c)).collect::<Vec<_>>().join(", ");
    println!("point killer sends ({}) to ({})", show(&w), show(&killer.act(&w).unwrap()));
}
