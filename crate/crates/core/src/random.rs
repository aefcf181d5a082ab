//! Seeded generators for test data. Every randomized run in the crate and
//! the CLI goes through [`rng`], so a seed fixes the whole run.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::{CycField, CycNum};
use crate::localfield::{GfElem, KElem, LocalField};
use crate::stepspace::{StepFn, Window};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Σ_i (a_i/den) ζ^i` with `a_i ∈ [-range, range]`.
pub fn random_cyc(field: CycField, rng: &mut impl Rng, range: i64, den: i64) -> CycNum {
    let mut acc = field.zero();
    for i in 0..field.p().saturating_sub(1).max(1) {
        let a = rng.gen_range(-range..=range);
        if a != 0 {
            acc += &field.from_ratio(a, den).mul_root(i as i64);
        }
    }
    acc
}

/// Random element of `𝔓^lo` truncated below `t^hi` (digits uniform).
pub fn random_kelem(field: &LocalField, rng: &mut impl Rng, lo: i64, hi: i64) -> KElem {
    let digits = (lo..hi)
        .map(|_| GfElem::from_code(rng.gen_range(0..field.q())))
        .collect();
    KElem::from_digits(lo, digits)
}

/// Random step function on `window`; about a third of the cells are zero.
pub fn random_step(field: &LocalField, rng: &mut impl Rng, window: Window) -> StepFn {
    let cyc = field.cyc();
    StepFn::from_fn(field, window, |_| {
        if rng.gen_ratio(1, 3) {
            cyc.zero()
        } else {
            random_cyc(cyc, rng, 3, 2)
        }
    })
}

/// Random window with `J ≤ max_outer`, `k ≤ max_fine`.
pub fn random_window(rng: &mut impl Rng, max_outer: u32, max_fine: u32) -> Window {
    Window::new(rng.gen_range(0..=max_outer), rng.gen_range(0..=max_fine))
}

/// A multiple of `1/16` in `[-1/4, 1/4]`, zero with probability one half.
pub fn small_perturbation(field: CycField, rng: &mut impl Rng) -> CycNum {
    if rng.gen_bool(0.5) {
        field.zero()
    } else {
        field.from_ratio(rng.gen_range(-4..=4), 16)
    }
}
