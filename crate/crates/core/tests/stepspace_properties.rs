use localwave::random::{random_kelem, random_step, random_window, rng};
use localwave::stepspace::{bracket, orthonormality_criterion};
use localwave::{LocalField, StepFn, Window};
use proptest::prelude::*;

fn field(name: &str) -> LocalField {
    LocalField::preset(name).unwrap()
}

/// Window limits keeping tables at a few hundred cells.
fn limits(f: &LocalField) -> (u32, u32) {
    match f.q() {
        2 => (3, 4),
        3 | 4 => (2, 2),
        _ => (1, 2),
    }
}

fn random_fn(f: &LocalField, seed: u64) -> StepFn {
    let mut r = rng(seed);
    let (a, b) = limits(f);
    let w = random_window(&mut r, a, b);
    random_step(f, &mut r, w)
}

#[test]
fn character_gram_is_identity() {
    for (name, max_j) in [("q2", 6), ("q3", 4), ("q4", 3), ("q5", 2)] {
        let f = field(name);
        for j in 0..=max_j {
            let n = f.q_pow(j);
            let chars: Vec<StepFn> = (0..n).map(|m| StepFn::character(&f, m)).collect();
            for a in 0..n as usize {
                for b in 0..n as usize {
                    let v = chars[a].inner_product(&chars[b]).unwrap();
                    assert_eq!(v.is_one(), a == b);
                    assert!(a == b || v.is_zero(), "{name}: ⟨χ_{a}, χ_{b}⟩ = {v}");
                }
            }
        }
    }
}

#[test]
fn fast_transform_matches_character_sum() {
    for name in ["q2", "q3", "q4", "q5", "q9"] {
        let f = field(name);
        for seed in 0..20 {
            let g = random_fn(&f, seed);
            assert_eq!(g.fourier(), g.fourier_naive(), "{name} seed {seed}");
            assert_eq!(g.inverse_fourier(), g.inverse_fourier_naive());
        }
    }
}

#[test]
fn spec_examples() {
    let f = field("q2");
    let z = StepFn::new(&f, Window::new(1, 1), vec![f.cyc().zero(); 4]).unwrap();
    assert!(z.is_zero());
    let d = StepFn::indicator_ideal(&f, 0);
    assert!(orthonormality_criterion(&d).orthonormal);
    let twice = d.scale(&f.cyc().from_int(2));
    let report = orthonormality_criterion(&twice);
    assert_eq!(report.witness, Some(localwave::KElem::zero()));
    assert_eq!(report.witness_value, Some(f.cyc().from_int(4)));
    assert!(!orthonormality_criterion(&StepFn::indicator_ideal(&f, -1)).orthonormal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plancherel_and_round_trip(name in prop::sample::select(vec!["q2", "q3", "q4", "q5"]), seed in any::<u64>()) {
        let f = field(name);
        let g = random_fn(&f, seed);
        let h = random_fn(&f, seed ^ 0x5555);
        let (gh, hh) = (g.fourier(), h.fourier());
        prop_assert_eq!(g.inner_product(&h).unwrap(), gh.inner_product(&hh).unwrap());
        prop_assert_eq!(gh.inverse_fourier(), g);
    }

    #[test]
    fn integral_is_translation_invariant(seed in any::<u64>(), k in 0u64..64) {
        let f = field("q3");
        let g = random_fn(&f, seed);
        prop_assert_eq!(g.translate(k).integral(), g.integral());
    }

    #[test]
    fn dilation_preserves_norm_and_composes(seed in any::<u64>(), j in -2i64..3, j2 in -2i64..3, k in 0u64..9) {
        let f = field("q2");
        let g = random_fn(&f, seed);
        prop_assert_eq!(g.dilate_translate(j, k).norm_sq(), g.norm_sq());
        prop_assert_eq!(g.dilate_translate(j, 0).dilate_translate(j2, 0), g.dilate_translate(j + j2, 0));
    }

    #[test]
    fn linear_ops_agree_pointwise(seed in any::<u64>()) {
        let f = field("q4");
        let (g, h) = (random_fn(&f, seed), random_fn(&f, !seed));
        let sum = &g + &h;
        let mut r = rng(seed);
        for _ in 0..20 {
            let x = random_kelem(&f, &mut r, -3, 3);
            prop_assert_eq!(sum.eval(&x), &g.eval(&x) + &h.eval(&x));
        }
        prop_assert!((&sum - &h) == g);
    }

    #[test]
    fn translate_inner_products_match_direct(seed in any::<u64>()) {
        let f = field("q3");
        let (g, h) = (random_fn(&f, seed), random_fn(&f, seed.wrapping_add(1)));
        let fast = g.translate_inner_products(&h, 9).unwrap();
        for (k, v) in fast.iter().enumerate() {
            prop_assert_eq!(v, &g.inner_product(&h.translate(k as u64)).unwrap());
        }
        let bound = g.translate_bound(&h);
        for k in bound..bound + 3 {
            prop_assert!(g.inner_product(&h.translate(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn bracket_is_periodic_and_nonnegative(seed in any::<u64>(), m in 0u64..4) {
        let f = field("q2");
        let (g, h) = (random_fn(&f, seed), random_fn(&f, seed ^ 77));
        let xi = random_kelem(&f, &mut rng(seed), -2, 3);
        let big = 1 << 12;
        let (a, _) = bracket(&g, &h, &xi, big).unwrap();
        let (b, _) = bracket(&g, &h, &f.add(&xi, &f.u(m)), big).unwrap();
        prop_assert_eq!(a, b);
        let (gg, _) = bracket(&g, &g, &xi, big).unwrap();
        let r = gg.as_rational();
        prop_assert!(r.is_some_and(|r| r >= localwave::Rational::from_integer(0.into())));
    }

    #[test]
    fn json_round_trip(name in prop::sample::select(vec!["q2", "q3", "q4", "q5", "q9"]), seed in any::<u64>()) {
        let f = field(name);
        let g = random_fn(&f, seed);
        prop_assert_eq!(StepFn::from_json(&g.to_json().unwrap()).unwrap(), g);
    }
}
