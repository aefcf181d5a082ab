use localwave::frames::{char_sum_delta, e_matrix, FrameBounds};
use localwave::matrix::hermitian_eigenvalues;
use localwave::random::{random_kelem, rng};
use localwave::{
    FrameFilterSet, FramePacketSystem, GeneratorSet, LocalField, PacketSystem, Window,
};

fn field(name: &str) -> LocalField {
    LocalField::preset(name).unwrap()
}

#[test]
fn e_matrix_is_unitary_on_both_sides() {
    for name in ["q2", "q3", "q4", "q5"] {
        let f = field(name);
        let mut r = rng(21);
        let mut points: Vec<_> = f.coset_reps(0, 2).collect();
        points.extend((0..5).map(|_| random_kelem(&f, &mut r, -2, 3)));
        for n in 1..=3 {
            for xi in &points {
                let e = e_matrix(&f, n, xi);
                assert!(e.unitarity_defect().is_zero());
                assert!(e.adjoint().unitarity_defect().is_zero());
            }
        }
    }
}

#[test]
fn character_sums_are_kronecker_deltas() {
    for name in ["q2", "q3", "q4", "q5", "q7", "q8", "q9"] {
        let f = field(name);
        let q = f.q() as u64;
        for r in 0..q {
            for s in 0..q {
                let want = localwave::Rational::from_integer(((r == s) as i64).into());
                assert_eq!(char_sum_delta(&f, r, s).unwrap(), want);
            }
        }
    }
}

#[test]
fn factorization_and_similar_spectra_on_random_sets() {
    let mut r = rng(22);
    for trial in 0..40 {
        let name = if trial % 2 == 0 { "q2" } else { "q3" };
        let f = field(name);
        let ffs =
            FrameFilterSet::random_perturbed(&f, 1 + trial % 2, 1 + (trial as u32 / 2) % 2, &mut r);
        assert!(ffs.check_factorization().passed());
        for xi in ffs.sample_points() {
            let h = ffs.h_matrix(&xi);
            let p = ffs.p_matrix(&xi.shift(-1));
            let a = hermitian_eigenvalues(&h.adjoint().mul(&h).unwrap().to_complex()).unwrap();
            let b = hermitian_eigenvalues(&p.adjoint().mul(&p).unwrap().to_complex()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
            }
        }
    }
}

#[test]
fn bounds_scale_quadratically() {
    let f = field("q3");
    let ffs = FrameFilterSet::random_perturbed(&f, 2, 1, &mut rng(23));
    let b = ffs.frame_bounds().unwrap();
    let scaled = ffs
        .scaled(&f.cyc().from_ratio(3, 2))
        .frame_bounds()
        .unwrap();
    assert!((scaled.lambda - 2.25 * b.lambda).abs() <= 1e-9 * (1.0 + b.lambda));
    assert!((scaled.big_lambda - 2.25 * b.big_lambda).abs() <= 1e-9 * (1.0 + b.big_lambda));
    let zeroed = ffs.without_output(1).frame_bounds().unwrap();
    assert!(zeroed.lambda.abs() < 1e-10);
}

#[test]
fn frame_machinery_degenerates_to_packets() {
    for name in ["q2", "q3"] {
        let f = field(name);
        let sys = PacketSystem::haar(&f);
        let gens = GeneratorSet::new(vec![sys.phi().clone()]).unwrap();
        let fp = FramePacketSystem::new(FrameFilterSet::haar_derived(&f, 1), gens).unwrap();
        let q2 = f.q_pow(2);
        for n in 0..q2 {
            assert_eq!(fp.packet(n, 2).unwrap()[0], sys.packet(n));
        }
    }
}

#[test]
fn packet_windows_grow_one_level_per_split() {
    let f = field("q2");
    let ffs = FrameFilterSet::random_perturbed(&f, 1, 1, &mut rng(24));
    let gens = GeneratorSet::cells(&f, 1).unwrap();
    let base = gens.functions()[0].window();
    let fp = FramePacketSystem::new(ffs, gens).unwrap();
    for level in 0..=3 {
        for n in 0..f.q_pow(level) {
            for psi in fp.packet(n, level).unwrap() {
                assert!(psi.window().fine <= base.fine + level);
                assert!(psi.window().outer <= base.outer.max(1));
            }
        }
    }
    let w = fp.packet(2, 2).unwrap()[0].window();
    assert_eq!(w.fine, base.fine + 2);
}

fn sandwich(
    name: &str,
    n: usize,
    s: u32,
    seed: u64,
    level: u32,
    trials: usize,
) -> (FrameBounds, localwave::frames::FrameTestReport) {
    let f = field(name);
    let ffs = FrameFilterSet::random_perturbed(&f, n, s, &mut rng(seed));
    let bounds = ffs.frame_bounds().unwrap();
    let fp = FramePacketSystem::new(ffs, GeneratorSet::cells(&f, n).unwrap()).unwrap();
    let report = fp
        .frame_inequality_test(
            &bounds,
            level,
            trials,
            Window::new(1, level + 1),
            &mut rng(seed + 1),
        )
        .unwrap();
    (bounds, report)
}

#[test]
fn level_one_sandwich_holds() {
    for (name, n, s) in [("q2", 1, 1), ("q2", 2, 2), ("q3", 2, 1)] {
        let (bounds, report) = sandwich(name, n, s, 31, 1, 30);
        assert!(bounds.lambda <= bounds.big_lambda);
        assert!(
            report.violations.is_empty(),
            "{name}: {:?}",
            report.violations
        );
        assert!(report.worst_ratio <= 1.0 + 1e-9);
    }
}
