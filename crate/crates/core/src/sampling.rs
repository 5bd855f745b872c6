// SPDX-License-Identifier: Apache-2.0

//! Seeded sampling. Every random draw in the crate goes through ChaCha20,
//! a counter-based generator: trial `k` of a run seeded with `s` reads
//! stream `k` of key `s`, so results do not depend on scheduling.

use crate::mobius::{MobiusElement, MobiusTuple};
use crate::{Mat, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type Rng64 = ChaCha20Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Independent generator for trial `index` of a run.
pub fn trial_rng(seed: u64, index: u64) -> Rng64 {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

/// Uniform point of the closed disc `|z| ≤ radius`.
pub fn disc_point<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, 2.0 * std::f64::consts::PI * rng.gen::<f64>())
}

pub fn polydisc_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<C64> {
    (0..n).map(|_| disc_point(rng, radius)).collect()
}

/// Element of `U₀`: `(a, b)` drawn uniformly from `|a−1| < 1/2`, `|b| < 1/2`,
/// rescaled onto the group, redrawn until it lands back inside `U₀`.
pub fn u0_element<R: Rng>(rng: &mut R) -> MobiusElement {
    loop {
        let a = 1.0 + disc_point(rng, 0.5);
        let b = disc_point(rng, 0.5);
        let det = a.norm_sqr() - b.norm_sqr();
        if det <= 0.0 {
            continue;
        }
        let s = 1.0 / det.sqrt();
        if let Ok(g) = MobiusElement::in_u0(a * s, b * s) {
            return g;
        }
    }
}

pub fn u0_tuple<R: Rng>(rng: &mut R, n: usize) -> MobiusTuple {
    MobiusTuple::new((0..n).map(|_| u0_element(rng)).collect())
}

/// Complex Gaussian-ish matrix with entries uniform in the unit square.
pub fn complex_matrix<R: Rng>(rng: &mut R, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random matrix with condition number bounded by construction:
/// identity plus a perturbation of spectral norm at most 1/2.
pub fn well_conditioned<R: Rng>(rng: &mut R, r: usize) -> Mat {
    let p = complex_matrix(rng, r, r);
    let scale = 0.5 / p.norm().max(1e-12);
    Mat::identity(r, r) + p.scale(scale)
}
