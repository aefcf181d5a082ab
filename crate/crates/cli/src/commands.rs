use localwave::frames::{char_sum_delta, e_matrix, CosetSpectrum, Violation};
use localwave::packets::{gram, Check};
use localwave::random::rng;
use localwave::{
    CycMatrix, FieldParams, FramePacketSystem, GeneratorSet, LocalField, PacketSystem, StepFn,
    Window,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::{
    field_or_default, input, load_bank, load_frame, load_step, write_file, CliError, CliResult,
};
use crate::{
    CheckArgs, Cli, Command, DecomposeArgs, Exit, Format, FrameBoundsArgs, Global, PacketsArgs,
    What,
};

/// What a successful command run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub exit: Exit,
    pub stdout: String,
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Check(a) => check(g, a),
        Command::Packets(a) => packets(g, a),
        Command::Decompose(a) => decompose(g, a),
        Command::FrameBounds(a) => frame_bounds(g, a),
        Command::Info => info(g),
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Prints the report and, with `--out`, stores it as `report.json`.
fn emit(g: &Global, value: &impl Serialize, exit: Exit) -> CliResult<Report> {
    let text = to_json(value);
    if let Some(dir) = &g.out {
        write_file(dir, "report.json", text.as_bytes())?;
    }
    Ok(Report { exit, stdout: text })
}

#[derive(Serialize)]
struct Witness {
    xi: String,
    defect: Value,
    defect_max_abs: f64,
}

#[derive(Serialize)]
struct CheckEntry {
    name: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
}

#[derive(Serialize)]
struct CheckReport {
    object: &'static str,
    params: FieldParams,
    passed: bool,
    checks: Vec<CheckEntry>,
}

fn matrix_witness(field: &LocalField, xi: &localwave::KElem, defect: &CycMatrix) -> Witness {
    Witness {
        xi: field.format_kelem(xi),
        defect: json!(defect.to_text()),
        defect_max_abs: defect.max_abs(),
    }
}

fn entry_from(name: &'static str, field: &LocalField, check: Check) -> CheckEntry {
    match check {
        Check::Pass => CheckEntry {
            name,
            passed: true,
            witness: None,
        },
        Check::Fail { xi, defect } => CheckEntry {
            name,
            passed: false,
            witness: Some(matrix_witness(field, &xi, &defect)),
        },
    }
}

fn check(g: &Global, a: &CheckArgs) -> CliResult<Report> {
    let (object, params, checks) = if let Some(spec) = &a.bank {
        if !matches!(a.what, What::Unitary | What::All) {
            return input("filter banks support --what unitary (or all)");
        }
        let bank = load_bank(spec, g)?;
        let entry = entry_from("unitary", bank.field(), bank.check_unitary());
        ("bank", bank.field().params().clone(), vec![entry])
    } else {
        let spec = a.frame.as_deref().expect("clap requires --bank or --frame");
        if a.what == What::Unitary {
            return input(
                "frame filter sets support --what factorization, e-unitary, char-sum or all",
            );
        }
        let ffs = load_frame(spec, g, a.random)?;
        let field = ffs.field();
        let mut checks = Vec::new();
        if matches!(a.what, What::Factorization | What::All) {
            checks.push(entry_from(
                "factorization",
                field,
                ffs.check_factorization(),
            ));
        }
        if matches!(a.what, What::EUnitary | What::All) {
            checks.push(e_unitary(field, ffs.generators(), &ffs.sample_points()));
        }
        if matches!(a.what, What::CharSum | What::All) {
            checks.push(char_sums(field)?);
        }
        ("frame", field.params().clone(), checks)
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = CheckReport {
        object,
        params,
        passed,
        checks,
    };
    emit(
        g,
        &report,
        if passed {
            Exit::Pass
        } else {
            Exit::CheckFailed
        },
    )
}

fn e_unitary(field: &LocalField, n: usize, points: &[localwave::KElem]) -> CheckEntry {
    for xi in points {
        let e = e_matrix(field, n, xi);
        for defect in [e.unitarity_defect(), e.adjoint().unitarity_defect()] {
            if !defect.is_zero() {
                return CheckEntry {
                    name: "e-unitary",
                    passed: false,
                    witness: Some(matrix_witness(field, xi, &defect)),
                };
            }
        }
    }
    CheckEntry {
        name: "e-unitary",
        passed: true,
        witness: None,
    }
}

fn char_sums(field: &LocalField) -> CliResult<CheckEntry> {
    let q = field.q() as u64;
    for r in 0..q {
        for s in 0..q {
            let v = char_sum_delta(field, r, s)?;
            let want = localwave::Rational::from_integer(((r == s) as i64).into());
            if v != want {
                return Ok(CheckEntry {
                    name: "char-sum",
                    passed: false,
                    witness: Some(Witness {
                        xi: format!("r={r},s={s}"),
                        defect: json!((v - want).to_string()),
                        defect_max_abs: f64::NAN,
                    }),
                });
            }
        }
    }
    Ok(CheckEntry {
        name: "char-sum",
        passed: true,
        witness: None,
    })
}

fn scaling_function(field: &LocalField, phi: &Option<std::path::PathBuf>) -> CliResult<StepFn> {
    match phi {
        Some(path) => load_step(path, field),
        None => Ok(StepFn::indicator_ideal(field, 0)),
    }
}

fn table_bytes(f: &StepFn, format: Format) -> CliResult<Vec<u8>> {
    Ok(match format {
        Format::Json => {
            let mut s = f.to_json()?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut buf = Vec::new();
            f.write_csv(&mut buf)?;
            buf
        }
    })
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

/// The restriction `f·1_𝔇`.
fn on_ring(f: &StepFn) -> StepFn {
    let w = Window::new(0, f.window().fine);
    StepFn::from_fn(f.field(), w, |x| f.eval(x))
}

#[derive(Serialize)]
struct PacketsReport {
    params: FieldParams,
    n_max: u64,
    files: Vec<String>,
    bank_unitary: bool,
    refinement_holds: bool,
    gram_is_identity: bool,
    gram: Vec<Vec<String>>,
    product_formula_agrees: bool,
    product_formula_mismatch: Option<Value>,
    walsh_identity: bool,
}

fn packets(g: &Global, a: &PacketsArgs) -> CliResult<Report> {
    let bank = load_bank(&a.bank, g)?;
    let field = bank.field().clone();
    let phi = scaling_function(&field, &a.phi)?;
    let bank_unitary = bank.check_unitary().passed();
    let sys = PacketSystem::new(bank, phi)?;
    let ws: Vec<StepFn> = (0..=a.n_max).map(|n| sys.packet(n)).collect();

    let mut files = Vec::new();
    if let Some(dir) = &g.out {
        for (n, w) in ws.iter().enumerate() {
            let name = format!("omega_{n}.{}", extension(g.format));
            write_file(dir, &name, &table_bytes(w, g.format)?)?;
            files.push(name);
        }
    }

    let gram = gram(&ws)?;
    let mut mismatch = None;
    'outer: for (n, w) in ws.iter().enumerate().skip(1) {
        let hat = w.fourier();
        let win = hat.window();
        for (i, v) in hat.values().iter().enumerate() {
            let xi = win.cell_rep(&field, i);
            let product = sys.packet_fourier_product(n as u64, &xi);
            if &product != v {
                mismatch = Some(json!({
                    "n": n,
                    "xi": field.format_kelem(&xi),
                    "recursion": v.to_string(),
                    "product": product.to_string(),
                }));
                break 'outer;
            }
        }
    }
    let walsh = ws
        .iter()
        .enumerate()
        .all(|(n, w)| on_ring(w) == StepFn::character(&field, n as u64));

    let report = PacketsReport {
        params: field.params().clone(),
        n_max: a.n_max,
        files,
        bank_unitary,
        refinement_holds: sys.refinement_holds(),
        gram_is_identity: gram.is_identity(),
        gram: gram.to_text(),
        product_formula_agrees: mismatch.is_none(),
        product_formula_mismatch: mismatch.clone(),
        walsh_identity: walsh,
    };
    let exit = if mismatch.is_none() {
        Exit::Pass
    } else {
        Exit::CheckFailed
    };
    emit(g, &report, exit)
}

#[derive(Serialize)]
struct DecomposeReport {
    params: FieldParams,
    level: u32,
    translates: u64,
    required_translates: u64,
    nonzero_coefficients: usize,
    exact_reconstruction: bool,
    norm_sq: String,
    coefficient_energy: String,
    parseval_exact: bool,
    parseval_ratio: Option<f64>,
}

fn decompose(g: &Global, a: &DecomposeArgs) -> CliResult<Report> {
    let bank = load_bank(&a.bank, g)?;
    let field = bank.field().clone();
    let phi = scaling_function(&field, &a.phi)?;
    let sys = PacketSystem::new(bank, phi)?;
    let f = load_step(&a.input, &field)?;
    let need = sys.required_translates(&f, a.level);
    let translates = a.translates.unwrap_or(need);
    if translates < need {
        return Err(CliError::Input(format!(
            "translate bound {translates} is too small for this input; required bound is {need}"
        )));
    }
    let analysis = sys.analyze(&f, a.level, translates)?;
    let rec = sys.synthesize(&analysis);

    let mut rows = csv_rows();
    let mut nonzero = 0;
    for (n, row) in analysis.coeffs.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            if !c.is_zero() {
                nonzero += 1;
                let z = c.to_complex();
                rows.push(format!("{n},{k},{c},{},{}\n", z.re, z.im));
            }
        }
    }
    if let Some(dir) = &g.out {
        write_file(dir, "coefficients.csv", rows.concat().as_bytes())?;
    }

    let energy = analysis.energy();
    let norm = f.norm_sq();
    let ratio = if norm.is_zero() {
        None
    } else {
        Some(energy.to_complex().re / norm.to_complex().re)
    };
    let report = DecomposeReport {
        params: field.params().clone(),
        level: a.level,
        translates,
        required_translates: need,
        nonzero_coefficients: nonzero,
        exact_reconstruction: rec == f,
        norm_sq: norm.to_string(),
        coefficient_energy: energy.to_string(),
        parseval_exact: energy == norm,
        parseval_ratio: ratio,
    };
    emit(g, &report, Exit::Pass)
}

fn csv_rows() -> Vec<String> {
    vec!["n,k,value,re,im\n".to_string()]
}

#[derive(Serialize)]
struct FrameBoundsReport {
    params: FieldParams,
    generators: usize,
    s: u32,
    lambda: f64,
    #[serde(rename = "Lambda")]
    big_lambda: f64,
    level: u32,
    trials: usize,
    seed: u64,
    g_window: Window,
    #[serde(rename = "C1")]
    c1: f64,
    #[serde(rename = "C2")]
    c2: f64,
    /// `λ^j C1` and `Λ^j C2`.
    packet_frame_bounds: [f64; 2],
    violations: Vec<Violation>,
    ratio_min: f64,
    ratio_max: f64,
    worst_ratio: f64,
    exact_equal: bool,
    per_coset: Vec<CosetSpectrum>,
}

fn frame_bounds(g: &Global, a: &FrameBoundsArgs) -> CliResult<Report> {
    if a.trials == 0 {
        return input("--trials must be at least 1");
    }
    let ffs = load_frame(&a.frame, g, a.random)?;
    let field = ffs.field().clone();
    let gens = if a.gens.is_empty() {
        if ffs.generators() > field.q() as usize {
            return input(format!(
                "default generators need N ≤ q; pass {} --gens files",
                ffs.generators()
            ));
        }
        GeneratorSet::cells(&field, ffs.generators())?
    } else {
        let fs = a
            .gens
            .iter()
            .map(|p| load_step(p, &field))
            .collect::<CliResult<Vec<_>>>()?;
        GeneratorSet::new(fs)?
    };
    let bounds = ffs.frame_bounds()?;
    let window = Window::new(a.g_outer, a.g_fine.unwrap_or(a.level + ffs.s()));
    let s = ffs.s();
    let n = ffs.generators();
    let (c1, c2) = (gens.c1(), gens.c2());
    let fp = FramePacketSystem::new(ffs, gens)?;
    let test = fp.frame_inequality_test(&bounds, a.level, a.trials, window, &mut rng(g.seed))?;
    let j = a.level as i32;
    let failed = !test.violations.is_empty();
    let report = FrameBoundsReport {
        params: field.params().clone(),
        generators: n,
        s,
        lambda: bounds.lambda,
        big_lambda: bounds.big_lambda,
        level: a.level,
        trials: a.trials,
        seed: g.seed,
        g_window: window,
        c1,
        c2,
        packet_frame_bounds: [bounds.lambda.powi(j) * c1, bounds.big_lambda.powi(j) * c2],
        violations: test.violations,
        ratio_min: test.ratio_min,
        ratio_max: test.ratio_max,
        worst_ratio: test.worst_ratio,
        exact_equal: test.exact_equal,
        per_coset: bounds.per_coset,
    };
    emit(
        g,
        &report,
        if failed {
            Exit::CheckFailed
        } else {
            Exit::Pass
        },
    )
}

fn info(g: &Global) -> CliResult<Report> {
    let field = field_or_default(g)?;
    let cyc = field.cyc();
    let epsilon: Vec<Value> = (0..field.c())
        .map(|j| {
            let e = field.epsilon(j);
            let x = localwave::KElem::monomial(e, -1);
            json!({
                "j": j,
                "code": e.code(),
                "chi_of_epsilon_over_prime": field.chi(&x).to_string(),
            })
        })
        .collect();
    let value = json!({
        "params": field.params(),
        "q": field.q(),
        "value_field": {
            "p": cyc.p(),
            "sqrt_p_adjoined": cyc.has_surd(),
            "sqrt_q": cyc.q_pow_half(1).to_string(),
        },
        "epsilon": epsilon,
        "u": (0..field.q().min(8) as u64 * 2)
            .map(|n| json!({"n": n, "u": field.format_kelem(&field.u(n))}))
            .collect::<Vec<_>>(),
        "presets": ["q2", "q3", "q4", "q5", "q7", "q8", "q9"],
    });
    emit(g, &value, Exit::Pass)
}
