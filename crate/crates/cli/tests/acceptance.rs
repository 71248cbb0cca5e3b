//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::fs;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use toda_core::bipoly::{BiPoly, BiRat, GaussCoeff, Var};
use toda_core::curve::{
    exponential_lifting, gram_norms, make_unit_pair, rational_normal_lift, scale_lifting, superfactorial,
    wronskian_squared, RMatrix,
};
use toda_core::frames::{frame_sequence, kernel_basis_wronskian, p_kernel_check, verify_dbar_identity};
use toda_core::samples;
use toda_core::toda::{printed_numerator_matches, shift_constants, solution_from_norms, verify_shift_identity};
use toda_core::verify::{
    cross_check_reduced, fd_convergence, fd_laplacian_residual, plucker_check, plucker_negative_control, GridSpec,
    Status, ORDER_RATIO_RANGE,
};

const PAIRS_WRONSKIAN: usize = 20;
const MAX_N_WRONSKIAN: usize = 5;
const SCALING_TRIALS: usize = 20;
const MAX_N_SCALING: usize = 3;
const MAX_N_EXPONENTIAL: usize = 4;
const PAIRS_PLUCKER: usize = 20;
const MAX_N_PLUCKER: usize = 4;
const MAX_N_SHIFT: usize = 50;
const PAIRS_FRAMES: usize = 10;
const MAX_N_FRAMES: usize = 2;
const PAIRS_KERNEL: usize = 10;
const MAX_N_KERNEL: usize = 3;
const REDUCED_TRIALS: usize = 25;
const MAX_N_REDUCED: usize = 3;
const FD_TOLERANCE: f64 = 1e-3;
const FD_SPACING: f64 = 0.01;
const CONTROL_MIN: f64 = 0.5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn first_failure<I: IntoIterator<Item = (bool, String)>>(it: I, total: &str) -> Outcome {
    for (ok, what) in it {
        if !ok {
            return outcome(false, format!("failed at {what}"));
        }
    }
    outcome(true, total.to_string())
}

fn criterion_1() -> Outcome {
    let mut rng = samples::rng(101);
    let pairs: Vec<_> = (0..PAIRS_WRONSKIAN).map(|_| samples::unit_pair(&mut rng)).collect();
    first_failure(
        pairs.iter().enumerate().flat_map(|(p, pair)| {
            (1..=MAX_N_WRONSKIAN).map(move |n| (wronskian_squared(&rational_normal_lift(pair, n)).is_one(), format!("pair {p}, n = {n}")))
        }),
        &format!("W² = 1 exactly for {PAIRS_WRONSKIAN} pairs, n = 1..={MAX_N_WRONSKIAN}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = samples::rng(202);
    let mut cases = Vec::new();
    for t in 0..SCALING_TRIALS {
        let n = 1 + t % MAX_N_SCALING;
        let lift = samples::lifting(&mut rng, n);
        let g = samples::holomorphic_factor(&mut rng);
        let lhs = wronskian_squared(&scale_lifting(&lift, &g).expect("nonzero g"));
        let rhs = &g.pow(2 * (n as i32 + 1)) * &wronskian_squared(&lift);
        cases.push((lhs == rhs, format!("scaling trial {t}, n = {n}")));
    }
    for n in 1..=MAX_N_EXPONENTIAL {
        let v = samples::holomorphic_factor(&mut rng);
        let det = exponential_lifting(&v, n).expect("valid lifting").det_m();
        let expect = v.derive(Var::Z).pow((n * (n + 1)) as i32);
        cases.push((&det * &det == expect, format!("exponential lifting, n = {n}")));
    }
    first_failure(
        cases,
        &format!("scaling law for {SCALING_TRIALS} (g, L) with n ≤ {MAX_N_SCALING}; det M² = (v′)^(n(n+1)) for n ≤ {MAX_N_EXPONENTIAL}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = samples::rng(303);
    let pairs: Vec<_> = (0..PAIRS_PLUCKER).map(|_| samples::unit_pair(&mut rng)).collect();
    let mut controls = 0;
    for (p, pair) in pairs.iter().enumerate() {
        for n in 1..=MAX_N_PLUCKER {
            let tower = gram_norms(&rational_normal_lift(pair, n)).expect("nonzero norms");
            let report = plucker_check(&tower);
            if let Some(c) = report.failures().next() {
                return outcome(false, format!("pair {p}, n = {n}: {c}"));
            }
            if n == 2 {
                let control = plucker_negative_control(&tower);
                if control.status != Status::Pass {
                    return outcome(false, format!("negative control accepted tampered tower (pair {p})"));
                }
                controls += 1;
            }
        }
    }
    outcome(
        true,
        format!("bilinear identity exact for {PAIRS_PLUCKER} pairs, n = 1..={MAX_N_PLUCKER}; {controls} tampered towers rejected"),
    )
}

fn criterion_4() -> Outcome {
    first_failure(
        (1..=MAX_N_SHIFT).map(|n| (verify_shift_identity(n), format!("n = {n}"))),
        &format!("Σ_j a_ij·j(n+1−j) = 2 for every row, n = 1..={MAX_N_SHIFT}"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = samples::rng(505);
    let pairs: Vec<_> = (0..PAIRS_FRAMES).map(|_| samples::unit_pair(&mut rng)).collect();
    let mut cases = Vec::new();
    for (p, pair) in pairs.iter().enumerate() {
        for n in 1..=MAX_N_FRAMES {
            let ok = match frame_sequence(&rational_normal_lift(pair, n), pair) {
                Ok(seq) => verify_dbar_identity(&seq, &shift_constants(n)),
                Err(_) => false,
            };
            cases.push((ok, format!("pair {p}, n = {n}")));
        }
    }
    let standard = make_unit_pair(&BiPoly::one()).expect("valid");
    for n in 1..=MAX_N_FRAMES {
        let seq = frame_sequence(&rational_normal_lift(&standard, n), &standard).expect("terminates");
        cases.push((seq.inner(0, 1).is_zero(), format!("⟨f̂_0, f̂_1⟩ for (1, z), n = {n}")));
    }
    first_failure(
        cases,
        &format!("f̂_(n+1) = 0 and ∂̄-identity for {PAIRS_FRAMES} pairs, n ≤ {MAX_N_FRAMES}; ⟨f̂_0, f̂_1⟩ = 0 for (1, z)"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = samples::rng(606);
    let pairs: Vec<_> = (0..PAIRS_KERNEL).map(|_| samples::unit_pair(&mut rng)).collect();
    let mut cases = Vec::new();
    for (p, pair) in pairs.iter().enumerate() {
        for n in 1..=MAX_N_KERNEL {
            for k in 0..=n {
                cases.push((p_kernel_check(pair, n, k), format!("pair {p}, n = {n}, k = {k}")));
            }
            let expect = BiRat::constant(GaussCoeff::real(BigRational::from_integer(superfactorial(n))));
            cases.push((kernel_basis_wronskian(pair, n) == expect, format!("kernel Wronskian, pair {p}, n = {n}")));
        }
    }
    first_failure(cases, &format!("kernel and Π k! Wronskian for {PAIRS_KERNEL} pairs, n ≤ {MAX_N_KERNEL}"))
}

fn criterion_7() -> Outcome {
    let mut rng = samples::rng(707);
    for t in 0..REDUCED_TRIALS {
        let n = 1 + t % MAX_N_REDUCED;
        let f = samples::function(&mut rng);
        let r = samples::normalized_r(&mut rng, n);
        let report = match cross_check_reduced(&f, &r, n) {
            Ok(rep) => rep,
            Err(e) => return outcome(false, format!("trial {t}: {e}")),
        };
        let c = report.get("reduced.pipeline-vs-closed-form").expect("present");
        if c.status != Status::Pass {
            return outcome(false, format!("trial {t}, n = {n}: {c}"));
        }
    }
    let printed = printed_numerator_matches(&BiRat::z(), &RMatrix::identity(1)).expect("valid input");
    outcome(
        true,
        format!(
            "pipeline = closed form for {REDUCED_TRIALS} random (f, R), n ≤ {MAX_N_REDUCED}; printed numerator at n = 1, R = I, f = z: {}",
            if printed { "matches" } else { "mismatch" }
        ),
    )
}

fn criterion_8() -> Outcome {
    let grid = GridSpec::new(num_complex::Complex64::new(0.0, 0.0), 1.0, (2.0 / FD_SPACING) as usize + 1, None).expect("valid grid");
    let pair = make_unit_pair(&BiPoly::one()).expect("valid");
    let mut parts = Vec::new();
    for n in 1..=3 {
        let lift = rational_normal_lift(&pair, n);
        let sol = solution_from_norms(&gram_norms(&lift).expect("norms")).expect("solution");
        let c = match fd_convergence(&sol, &grid) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("n = {n}: {e}")),
        };
        let ok = c.coarse.max_residual <= FD_TOLERANCE && c.ratio >= ORDER_RATIO_RANGE.0 && c.ratio <= ORDER_RATIO_RANGE.1;
        parts.push(format!("n={n}: {:.3e}, ratio {:.3}", c.coarse.max_residual, c.ratio));
        if !ok {
            return outcome(false, parts.join("; "));
        }
        let constant = toda_core::toda::TodaSolution::constant(n, BigRational::from_integer(BigInt::from(1)));
        let r = fd_laplacian_residual(&constant, &grid).expect("nonempty grid");
        if r.max_residual <= CONTROL_MIN {
            return outcome(false, format!("constant control residual {} at n = {n}", r.max_residual));
        }
    }
    outcome(true, format!("{}; constant control > {CONTROL_MIN}", parts.join("; ")))
}

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("toda-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("temp dir");
    let cfg = dir.join("config.json");
    fs::write(
        &cfg,
        r#"{"n": 2, "input_kind": "pair", "pair": {"v0": ["1"], "v1": ["0", "1"]},
            "grid": {"half_width": 1.0, "points_per_side": 201}, "suites": "all"}"#,
    )
    .expect("write config");
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let report = dir.join(format!("report-{threads}.json"));
        let csv = dir.join(format!("samples-{threads}.csv"));
        let run = |args: &[&str]| {
            Command::new(env!("CARGO_BIN_EXE_toda"))
                .args(args)
                .env("TODA_THREADS", threads)
                .output()
                .expect("binary runs")
        };
        let v = run(&["verify", "--config", cfg.to_str().unwrap(), "--report", report.to_str().unwrap()]);
        let s = run(&["sample", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
        if v.status.code() != Some(0) || s.status.code() != Some(0) {
            return outcome(false, format!("run with TODA_THREADS={threads} exited {:?}/{:?}", v.status.code(), s.status.code()));
        }
        outputs.push((fs::read(&report).expect("report"), fs::read(&csv).expect("csv")));
    }
    let _ = fs::remove_dir_all(&dir);
    let same = outputs[0] == outputs[1];
    outcome(
        same,
        format!(
            "report ({} bytes) and CSV ({} bytes) {} for TODA_THREADS = 1, 4",
            outputs[0].0.len(),
            outputs[0].1.len(),
            if same { "byte-identical" } else { "differ" }
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (k, run) in criteria {
        let start = Instant::now();
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {k}: {verdict} {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
