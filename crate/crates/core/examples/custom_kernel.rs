// SPDX-License-Identifier: Apache-2.0

//! Plugging a user kernel into the curvature engine.
//!
//! `G(z, u) = (1 − z u)^{−λ} · diag(1, 1 + z u)` is positive definite on the
//! disc but not homogeneous; its curvature spectrum moves with the point.

use homoker::curvature;
use homoker::kernels::{HoloKernel, MatrixKernel};
use homoker::{c64, Mat, C64};
use std::sync::Arc;

#[derive(Debug)]
struct Stretched {
    lambda: f64,
}

impl HoloKernel for Stretched {
    fn dim(&self) -> usize {
        1
    }
    fn rank(&self) -> usize {
        2
    }
    fn eval_holo(&self, z: &[C64], u: &[C64]) -> Mat {
        let x = z[0] * u[0];
        let s = (1.0 - x).powf(-self.lambda);
        Mat::from_row_slice(2, 2, &[s, c64(0.0, 0.0), c64(0.0, 0.0), s * (1.0 + x)])
    }
}

fn main() {
    let k = MatrixKernel::custom(Arc::new(Stretched { lambda: 2.0 }));
    for r in [0.0, 0.3, 0.6] {
        let t = curvature::curvature(&k, &[c64(r, 0.0)]).unwrap();
        let s: Vec<String> = t.diagonal_spectrum(0).iter().map(|z| format!("{:.6}", z.re)).collect();
        println!("w = {r}: spectrum [{}]", s.join(", "));
    }
}
