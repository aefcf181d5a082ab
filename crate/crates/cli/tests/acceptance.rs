//! End-to-end acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs with `harness = false` so the report is printed even when the test
//! passes.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use localwave::frames::{char_sum_delta, e_matrix};
use localwave::matrix::hermitian_eigenvalues;
use localwave::packets::{gram, Check};
use localwave::random::{random_cyc, random_kelem, random_step, random_window, rng};
use localwave::{
    CycMatrix, FilterBank, FrameFilterSet, FramePacketSystem, GeneratorSet, LocalField,
    PacketSystem, Rational, StepFn, Window,
};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn field(name: &str) -> LocalField {
    LocalField::preset(name).unwrap()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn translates(fs: &[StepFn], count: u64) -> Vec<StepFn> {
    fs.iter()
        .flat_map(|f| (0..count).map(move |k| f.translate(k)))
        .collect()
}

fn off_diagonal_nonzero(g: &CycMatrix) -> Option<(usize, usize)> {
    let n = g.rows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && !g.get(i, j).is_zero())
}

fn character_completeness() -> Outcome {
    let mut checked = Vec::new();
    for (name, max_j) in [("q2", 6), ("q3", 4), ("q4", 3), ("q5", 2)] {
        let f = field(name);
        for j in 0..=max_j {
            let chars: Vec<StepFn> = (0..f.q_pow(j)).map(|n| StepFn::character(&f, n)).collect();
            ensure!(
                gram(&chars).unwrap().is_identity(),
                "{name}: Gram of χ_n, n < q^{j}, is not the identity"
            );
        }
        checked.push(format!("{name} up to q^{max_j}={}", f.q_pow(max_j)));
    }
    Ok(checked.join(", "))
}

fn plancherel() -> Outcome {
    const PAIRS: usize = 1000;
    for (i, name) in ["q2", "q3", "q4", "q5"].iter().enumerate() {
        let f = field(name);
        let mut r = rng(1000 + i as u64);
        for pair in 0..PAIRS {
            let wa = random_window(&mut r, 2, 2);
            let a = random_step(&f, &mut r, wa);
            let wb = random_window(&mut r, 2, 2);
            let b = random_step(&f, &mut r, wb);
            let (fa, fb) = (a.fourier(), b.fourier());
            ensure!(
                a.inner_product(&b).unwrap() == fa.inner_product(&fb).unwrap(),
                "{name} pair {pair}: ⟨f,g⟩ ≠ ⟨f̂,ĝ⟩"
            );
            ensure!(
                fa.inverse_fourier() == a,
                "{name} pair {pair}: inverse transform round trip"
            );
            ensure!(
                fb.inverse_fourier() == b,
                "{name} pair {pair}: inverse transform round trip"
            );
        }
    }
    Ok(format!(
        "{PAIRS} pairs each on q2 q3 q4 q5, round trips exact"
    ))
}

fn u_identity() -> Outcome {
    let mut total = 0u64;
    for name in ["q2", "q3", "q4", "q5", "q7", "q8", "q9"] {
        let f = field(name);
        let q = f.q() as u64;
        for r in 0..q * q {
            let ur = f.u(r);
            for k in 0..=3u32 {
                let scaled = f.mul(&ur, &f.prime_power(-(k as i64)));
                let qk = f.q_pow(k);
                for s in 0..qk {
                    ensure!(
                        f.u(r * qk + s) == f.add(&scaled, &f.u(s)),
                        "{name}: u({r}·q^{k}+{s}) ≠ u({r})𝔭^-{k}+u({s})"
                    );
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} identities over all presets"))
}

fn splitting_lemma() -> Outcome {
    for name in ["q2", "q3", "q4"] {
        let f = field(name);
        let q = f.q() as u64;
        let phi = StepFn::indicator_ideal(&f, 0);
        let haar = FilterBank::haar(&f);
        ensure!(
            haar.check_unitary().passed(),
            "{name}: Haar bank not unitary"
        );
        let family = translates(&haar.split(&phi).unwrap(), q * q);
        ensure!(
            gram(&family).unwrap().is_identity(),
            "{name}: Haar split Gram ≠ I"
        );

        let mut h = haar.filters().to_vec();
        h[1][0] = &h[1][0] + &f.cyc().from_ratio(1, 4);
        let bad = FilterBank::new(&f, 1, h).unwrap();
        let Check::Fail { xi, defect } = bad.check_unitary() else {
            return Err(format!("{name}: corrupted bank passed check_unitary"));
        };
        ensure!(!defect.is_zero(), "{name}: witness carries a zero defect");
        let family = translates(&bad.split(&phi).unwrap(), q * q);
        let g = gram(&family).unwrap();
        let Some((i, j)) = off_diagonal_nonzero(&g) else {
            return Err(format!(
                "{name}: corrupted family has a diagonal Gram matrix"
            ));
        };
        if name == "q4" {
            return Ok(format!(
                "q2 q3 q4; corrupted q4 witness ξ={}, Gram[{i}][{j}]={}",
                f.format_kelem(&xi),
                g.get(i, j)
            ));
        }
    }
    unreachable!()
}

fn window_scale_theorem() -> Outcome {
    for name in ["q2", "q3", "q4"] {
        let f = field(name);
        let sys = PacketSystem::haar(&f);
        for j in 0..=3u32 {
            let n = f.q_pow(j);
            let low: Vec<StepFn> = (0..n).map(|m| sys.packet(m)).collect();
            ensure!(
                gram(&low).unwrap().is_identity(),
                "{name} j={j}: ω_n not orthonormal"
            );
            for m in 0..n {
                let target = sys.phi().dilate_translate(j as i64, m);
                let coeffs: Vec<_> = low
                    .iter()
                    .map(|w| target.inner_product(w).unwrap())
                    .collect();
                let rebuilt = StepFn::linear_combination(&f, coeffs.into_iter().zip(&low)).unwrap();
                ensure!(
                    rebuilt == target,
                    "{name} j={j}: φ_(j,{m}) is not in the span"
                );
            }
            for m in n..n * f.q() as u64 {
                let w = sys.packet(m);
                for a in &low {
                    ensure!(
                        a.inner_product(&w).unwrap().is_zero(),
                        "{name} j={j}: ω_{m} not orthogonal to the window space"
                    );
                }
            }
        }
    }
    Ok("q2 q3 q4, j = 0..3: orthonormal, spanning, orthogonal complement".into())
}

fn product_formula() -> Outcome {
    let mut systems = Vec::new();
    for name in ["q2", "q3", "q4"] {
        systems.push((format!("{name} haar"), PacketSystem::haar(&field(name))));
    }
    for (i, name) in ["q2", "q3"].iter().enumerate() {
        let f = field(name);
        let mut r = rng(600 + i as u64);
        let len = f.q_pow(2) as usize;
        let h = (0..f.q())
            .map(|_| {
                (0..len)
                    .map(|_| random_cyc(f.cyc(), &mut r, 2, 3))
                    .collect()
            })
            .collect();
        let bank = FilterBank::new(&f, 2, h).unwrap();
        let phi = random_step(&f, &mut r, Window::new(1, 1));
        systems.push((
            format!("{name} random s=2"),
            PacketSystem::new(bank, phi).unwrap(),
        ));
    }
    let mut points = 0usize;
    for (label, sys) in &systems {
        let f = sys.field();
        for n in 0..f.q_pow(3) {
            let hat = sys.packet(n).fourier();
            let w = hat.window();
            for (i, v) in hat.values().iter().enumerate() {
                let xi = w.cell_rep(f, i);
                ensure!(
                    v == &sys.packet_fourier_product(n, &xi),
                    "{label}: ω̂_{n} disagrees at ξ={}",
                    f.format_kelem(&xi)
                );
                points += 1;
            }
        }
    }
    Ok(format!(
        "{} systems, n < q³, {points} coset representatives",
        systems.len()
    ))
}

fn walsh_identity() -> Outcome {
    for (name, count) in [("q2", 32), ("q3", 27)] {
        let f = field(name);
        let sys = PacketSystem::haar(&f);
        let ring = Window::new(0, 0);
        for n in 0..count {
            let w = sys.packet(n);
            let restricted = StepFn::from_fn(&f, ring.join(w.window()), |x| {
                if x.in_ideal(0) {
                    w.eval(x)
                } else {
                    f.cyc().zero()
                }
            });
            ensure!(
                restricted == StepFn::character(&f, n),
                "{name}: ω_{n} ≠ χ_{n} on 𝔇"
            );
        }
    }
    Ok("q2 n < 32, q3 n < 27".into())
}

fn lemma_char_sums_and_e() -> Outcome {
    for name in ["q2", "q3", "q4", "q5", "q7", "q8", "q9"] {
        let f = field(name);
        let q = f.q() as u64;
        for r in 0..q {
            for s in 0..q {
                let want = Rational::from_integer(((r == s) as i64).into());
                ensure!(
                    char_sum_delta(&f, r, s).unwrap() == want,
                    "{name}: char sum ({r},{s})"
                );
            }
        }
    }
    let mut count = 0;
    for (i, name) in ["q2", "q3", "q4"].iter().enumerate() {
        let f = field(name);
        let mut r = rng(800 + i as u64);
        let mut points: Vec<_> = f.coset_reps(-1, 2).collect();
        points.extend((0..20).map(|_| random_kelem(&f, &mut r, -3, 3)));
        for n in 1..=3 {
            for xi in &points {
                let e = e_matrix(&f, n, xi);
                ensure!(
                    e.unitarity_defect().is_zero() && e.adjoint().unitarity_defect().is_zero(),
                    "{name} N={n}: E(ξ) not unitary at ξ={}",
                    f.format_kelem(xi)
                );
                count += 1;
            }
        }
    }
    Ok(format!(
        "char sums on all presets; {count} E(ξ) matrices unitary"
    ))
}

fn polyphase_factorization() -> Outcome {
    let mut r = rng(900);
    let mut worst: f64 = 0.0;
    for trial in 0..100u32 {
        let name = if trial % 2 == 0 { "q2" } else { "q3" };
        let f = field(name);
        let n = 1 + (trial as usize / 2) % 2;
        let s = 1 + (trial / 4) % 2;
        let ffs = FrameFilterSet::random_perturbed(&f, n, s, &mut r);
        if let Check::Fail { xi, .. } = ffs.check_factorization() {
            return Err(format!(
                "trial {trial} ({name}, N={n}, s={s}): fails at ξ={}",
                f.format_kelem(&xi)
            ));
        }
        for xi in ffs.sample_points() {
            let h = ffs.h_matrix(&xi);
            let p = ffs.p_matrix(&xi.shift(-1));
            let a = hermitian_eigenvalues(&h.adjoint().mul(&h).unwrap().to_complex()).unwrap();
            let b = hermitian_eigenvalues(&p.adjoint().mul(&p).unwrap().to_complex()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    let within = worst <= 1e-9;
    ensure!(within, "spectra of H*H and P*P differ by {worst:e}");
    Ok(format!(
        "100 random sets, exact at all samples, max spectral gap {worst:.1e}"
    ))
}

fn frame_inequality() -> Outcome {
    let mut detail = Vec::new();
    for (i, (name, n, s)) in [("q2", 1, 1), ("q2", 2, 2), ("q3", 2, 1)]
        .into_iter()
        .enumerate()
    {
        let f = field(name);
        let ffs = FrameFilterSet::random_perturbed(&f, n, s, &mut rng(1100 + i as u64));
        let bounds = ffs.frame_bounds().unwrap();
        let fp = FramePacketSystem::new(ffs, GeneratorSet::cells(&f, n).unwrap()).unwrap();
        for level in [1, 2] {
            let window = Window::new(1, level + s);
            let report = fp
                .frame_inequality_test(&bounds, level, 100, window, &mut rng(1200 + i as u64))
                .unwrap();
            ensure!(
                report.violations.is_empty(),
                "{name} N={n} s={s} j={level}: {} violations, first {:?}",
                report.violations.len(),
                report.violations[0]
            );
            detail.push(format!(
                "{name}/N{n}/s{s}/j{level} worst {:.3}",
                report.worst_ratio
            ));
        }
    }
    for name in ["q2", "q3"] {
        let f = field(name);
        let ffs = FrameFilterSet::haar_derived(&f, 1);
        let bounds = ffs.frame_bounds().unwrap();
        ensure!(
            bounds.lambda == 1.0 && bounds.big_lambda == 1.0,
            "{name}: unitary bounds {:?}",
            bounds
        );
        let gens = GeneratorSet::new(vec![StepFn::indicator_ideal(&f, 0)]).unwrap();
        let fp = FramePacketSystem::new(ffs, gens).unwrap();
        for level in [1, 2] {
            let report = fp
                .frame_inequality_test(
                    &bounds,
                    level,
                    100,
                    Window::new(1, level + 1),
                    &mut rng(1300),
                )
                .unwrap();
            ensure!(
                report.exact_equal && report.violations.is_empty(),
                "{name} j={level}: unitary case is not an exact equality"
            );
        }
    }
    Ok(format!("{}; unitary q2 q3 exact", detail.join(", ")))
}

fn localwave(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_localwave"))
        .args(args)
        .output()
        .expect("run localwave");
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn cli_contract() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let base = tmp.path();
    let omega = base.join("packets-a/omega_5.json");
    let runs: Vec<Vec<String>> = vec![
        vec![
            "--field",
            "q3",
            "check",
            "--frame",
            "random",
            "--generators",
            "2",
            "--seed",
            "7",
        ],
        vec![
            "--field",
            "q2",
            "frame-bounds",
            "--frame",
            "random",
            "--generators",
            "2",
            "--support",
            "2",
            "--trials",
            "25",
            "--seed",
            "3",
        ],
        vec!["--field", "q3", "--out", "{dir}", "packets", "--n-max", "9"],
        vec![
            "--field",
            "q3",
            "--out",
            "{dir}",
            "decompose",
            "--input",
            omega.to_str().unwrap(),
            "--level",
            "2",
        ],
        vec![
            "--field", "q2", "--format", "csv", "--out", "{dir}", "packets", "--n-max", "4",
        ],
        vec!["info"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    let names = ["packets", "decompose", "csv"];
    let mut slot = 0;
    for run in &runs {
        let label = run.join(" ");
        let uses_dir = run.iter().any(|a| a == "{dir}");
        let (dir_a, dir_b) = if uses_dir {
            let stem = names[slot];
            slot += 1;
            (
                base.join(format!("{stem}-a")),
                base.join(format!("{stem}-b")),
            )
        } else {
            (base.to_path_buf(), base.to_path_buf())
        };
        let mut outputs = Vec::new();
        for dir in [&dir_a, &dir_b] {
            let args: Vec<String> = run
                .iter()
                .map(|a| a.replace("{dir}", dir.to_str().unwrap()))
                .collect();
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, stdout, stderr) = localwave(&args);
            ensure!(code == 0, "`{label}` exited {code}: {stderr}");
            let files = if uses_dir { dir_bytes(dir) } else { Vec::new() };
            outputs.push((stdout, files));
        }
        ensure!(
            outputs[0] == outputs[1],
            "`{label}` is not byte-identical across reruns"
        );
    }

    let f = field("q3");
    let mut h = FilterBank::haar(&f).filters().to_vec();
    h[2][1] = &h[2][1] + &f.cyc().from_ratio(1, 4);
    let bad = base.join("bad_bank.json");
    std::fs::write(&bad, FilterBank::new(&f, 1, h).unwrap().to_json().unwrap()).unwrap();
    let (code, stdout, _) = localwave(&["check", "--bank", bad.to_str().unwrap()]);
    ensure!(code == 1, "corrupted bank exited {code}, expected 1");
    let report: Value =
        serde_json::from_slice(&stdout).map_err(|e| format!("report is not JSON: {e}"))?;
    let witness = &report["checks"][0]["witness"];
    ensure!(
        report["passed"] == Value::Bool(false)
            && witness["xi"].is_string()
            && witness["defect"].is_array(),
        "fault report lacks a witness: {report}"
    );

    let (code, _, stderr) = localwave(&[
        "--field",
        "q3",
        "decompose",
        "--input",
        omega.to_str().unwrap(),
        "--level",
        "2",
        "--translates",
        "0",
    ]);
    ensure!(
        code == 2 && stderr.contains("required bound"),
        "undersized translate bound exited {code}"
    );
    let (code, _, _) = localwave(&["--field", "nope", "info"]);
    ensure!(code == 2, "unknown preset exited {code}");

    Ok(format!(
        "{} commands byte-identical; fault injection exit 1 with witness ξ={}",
        runs.len(),
        witness["xi"].as_str().unwrap_or("?")
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("character completeness", character_completeness),
        ("Plancherel and inverse round trip", plancherel),
        ("u-identity", u_identity),
        ("splitting lemma", splitting_lemma),
        ("packet basis at window scale", window_scale_theorem),
        ("recursion vs product formula", product_formula),
        ("Walsh identity", walsh_identity),
        ("character sums and E unitarity", lemma_char_sums_and_e),
        ("polyphase factorization", polyphase_factorization),
        ("frame inequality", frame_inequality),
        ("CLI determinism and exit codes", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2}: {name} — {detail} [{secs:.1}s]",
                i + 1
            ),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {name} — {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
