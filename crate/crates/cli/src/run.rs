//! Suite orchestration, report and CSV output.

use std::io::Write;

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;
use toda_core::bipoly::{BiRat, GaussCoeff, Var};
use toda_core::curve::{
    exponential_lifting, gram_norms, ms_lifting, rational_normal_lift, scale_lifting, superfactorial,
    wronskian_squared, CurveError, NormTower, UnitWronskianPair,
};
use toda_core::frames::{
    chain_consistency, frame_sequence, kernel_basis_wronskian, p_kernel_check, recursion_forms_agree, verify_dbar_identity,
};
use toda_core::toda::{cartan_matrix, shift_constants, solution_from_norms, TodaError, TodaSolution};
use toda_core::verify::{
    constant_control, cross_check_reduced, liouville_check, numeric_check, plucker_check, plucker_negative_control, refs,
    sample_grid, toda_exact_check, Check, GridSpec, Status, VerificationReport, VerifyError,
};

use crate::config::{Input, RunConfig, Suite};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Toda(#[from] TodaError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Config(String),
}

/// Threshold above which the constant non-solution counts as detected.
pub const CONTROL_THRESHOLD: f64 = 0.5;

/// The solution of the configured input with its norm tower: the rational
/// normal lift of the pair, or the R-matrix lifting of the function.
pub fn solution(cfg: &RunConfig) -> Result<(NormTower, TodaSolution), RunError> {
    match &cfg.input {
        Input::Pair(pair) => {
            let lift = rational_normal_lift(pair, cfg.n);
            let tower = gram_norms(&lift)?;
            let sol = solution_from_norms(&tower)?.with_exceptional(lift.exceptional_factors());
            Ok((tower, sol))
        }
        Input::Function(f) => {
            let lift = ms_lifting(f, &cfg.r_or_default())?;
            let tower = gram_norms(&lift)?;
            let sol = solution_from_norms(&tower)?.with_exceptional(lift.exceptional_factors());
            Ok((tower, sol))
        }
    }
}

fn grid_or_default(cfg: &RunConfig) -> GridSpec {
    cfg.grid.unwrap_or_else(GridSpec::unit_square)
}

fn wronskian_suite(pair: &UnitWronskianPair, n: usize) -> Result<VerificationReport, RunError> {
    let mut r = VerificationReport::new();
    let lift = rational_normal_lift(pair, n);
    let w2 = wronskian_squared(&lift);
    r.push(Check::verdict("wronskian.unit", refs::WRONSKIAN, w2.is_one(), || format!("W² = {}", w2.summary())));
    let v = pair.ratio();
    let det = exponential_lifting(&v, n)?.det_m();
    let expect = v.derive(Var::Z).pow((n * (n + 1)) as i32);
    let lhs = &det * &det;
    r.push(Check::verdict("wronskian.exponential-lifting", refs::EXPONENTIAL, lhs == expect, || {
        format!("det M² − (v′)^(n(n+1)) = {}", (&lhs - &expect).summary())
    }));
    let g = pair.v0().clone();
    let scaled = wronskian_squared(&scale_lifting(&lift, &g)?);
    let expect = &g.pow(2 * (n as i32 + 1)) * &w2;
    r.push(Check::verdict("wronskian.scaling", refs::SCALING, scaled == expect, || {
        format!("W²(g·L) − g^(2(n+1))·W²(L) = {}", (&scaled - &expect).summary())
    }));
    Ok(r)
}

fn plucker_suite(cfg: &RunConfig, tower: &NormTower, sol: &TodaSolution) -> VerificationReport {
    let mut r = plucker_check(tower);
    r.push(plucker_negative_control(tower));
    r.extend(toda_exact_check(sol));
    if let (Input::Pair(pair), 1) = (&cfg.input, cfg.n) {
        let expect = pair.normsq().pow(-2);
        let got = sol.exp_u()[0].to_plain();
        r.push(Check::verdict("solution.n1-inverse-norm-fourth", refs::SOLUTION, got.as_ref() == Some(&expect), || {
            format!("e^u = {}", sol.exp_u()[0].summary())
        }));
    }
    r
}

fn frames_suite(pair: &UnitWronskianPair, n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    let seq = match frame_sequence(&rational_normal_lift(pair, n), pair) {
        Ok(seq) => {
            r.push(Check::pass("frames.termination", refs::FRAMES));
            seq
        }
        Err(e) => {
            r.push(Check::fail("frames.termination", refs::FRAMES, e.to_string()));
            return r;
        }
    };
    r.push(Check::verdict("frames.dbar-identity", refs::DBAR, verify_dbar_identity(&seq, &shift_constants(n)), || {
        "∂̄f̂_k + (e^(c_k)/‖v‖⁴)f̂_(k−1) is not identically zero".into()
    }));
    r.push(Check::verdict("frames.recursion-forms", refs::FRAMES, recursion_forms_agree(&seq), || {
        "the two forms of the recursion differ".into()
    }));
    r.push(Check::verdict("frames.chain", refs::KERNEL, chain_consistency(&seq), || {
        "‖v‖^(2(2k−2−n))f̂_k is not a P-chain".into()
    }));
    let ip = seq.inner(0, 1);
    r.push(Check::verdict("frames.orthogonality[0,1]", refs::FRAMES, ip.is_zero(), || {
        format!("⟨f̂_0, f̂_1⟩ = {}", ip.summary())
    }));
    r
}

fn kernel_suite(pair: &UnitWronskianPair, n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    for k in 0..=n {
        r.push(Check::verdict(format!("kernel[k={k}]"), refs::KERNEL, p_kernel_check(pair, n, k), || {
            format!("P^(n+1) does not annihilate ‖v‖^(−2(n+2))·v0^{k}·v1^{}", n - k)
        }));
    }
    let w = kernel_basis_wronskian(pair, n);
    let expect = BiRat::constant(GaussCoeff::real(BigRational::from_integer(superfactorial(n))));
    r.push(Check::verdict("kernel.wronskian", refs::KERNEL, w == expect, || {
        format!("W = {} instead of {}", w.summary(), superfactorial(n))
    }));
    r
}

/// For a pair, `f = v1/v0` has `f′ = 1/v0²`, so `(−f′)^{−1/2}(f, 1) = ±(i·v1, i·v0)`.
/// That pair must have unit Wronskian and give the same fields, and the
/// function pipeline with the rational normal matrix must agree with the
/// pair pipeline.
fn convention_checks(cfg: &RunConfig, pair: &UnitWronskianPair, sol: &TodaSolution) -> Result<VerificationReport, RunError> {
    let mut r = VerificationReport::new();
    let i = GaussCoeff::i();
    let swapped = UnitWronskianPair::new(pair.v1().scale(&i), pair.v0().scale(&i));
    let check = match swapped {
        Ok(p) => {
            let other = solution_from_norms(&gram_norms(&rational_normal_lift(&p, cfg.n))?)?;
            Check::verdict("reduced.if-convention", refs::CONVENTION, other.exp_u() == sol.exp_u(), || {
                "(i·v1, i·v0) gives different fields".into()
            })
            .with_detail("(−f′)^(−1/2)(f, 1) = (i·v1, i·v0) has unit Wronskian and reproduces every field")
        }
        Err(e) => Check::fail("reduced.if-convention", refs::CONVENTION, e.to_string()),
    };
    r.push(check);
    let plain = UnitWronskianPair::new(pair.v1().clone(), pair.v0().clone()).is_ok();
    r.push(Check::info(
        "reduced.if-convention.unsigned",
        refs::CONVENTION,
        if plain {
            "(f′)^(−1/2)(f, 1) also has unit Wronskian"
        } else {
            "(f′)^(−1/2)(f, 1) = (v1, v0) has Wronskian −1; the sign under the root is needed"
        },
    ));
    let f = pair.ratio();
    let lift = ms_lifting(&f, &cfg.r_or_default())?;
    let via_f = solution_from_norms(&gram_norms(&lift)?)?;
    r.push(Check::verdict("reduced.pair-vs-function", refs::REDUCED, via_f.exp_u() == sol.exp_u(), || {
        "fields from f = v1/v0 differ from those of the pair".into()
    }));
    Ok(r)
}

fn reduced_suite(cfg: &RunConfig, sol: &TodaSolution) -> Result<VerificationReport, RunError> {
    let r = cfg.r_or_default();
    match &cfg.input {
        Input::Function(f) => Ok(cross_check_reduced(f, &r, cfg.n)?),
        Input::Pair(pair) => {
            let mut out = cross_check_reduced(&pair.ratio(), &r, cfg.n)?;
            if cfg.r.is_none() {
                out.extend(convention_checks(cfg, pair, sol)?);
            }
            Ok(out)
        }
    }
}

fn numeric_suite(cfg: &RunConfig, sol: &TodaSolution, exact_passed: bool) -> Result<VerificationReport, RunError> {
    let grid = grid_or_default(cfg);
    let mut r = VerificationReport::new();
    r.push(numeric_check("numeric.order", sol, &grid, exact_passed));
    r.push(constant_control(cfg.n, &grid, CONTROL_THRESHOLD));
    if let (Input::Pair(pair), 1) = (&cfg.input, cfg.n) {
        r.extend(liouville_check(pair, &grid)?);
    }
    Ok(r)
}

/// Runs the configured suites in fixed order. Suites that do not apply to
/// the input are reported as skipped.
pub fn run_verify(cfg: &RunConfig) -> Result<VerificationReport, RunError> {
    let (tower, sol) = solution(cfg)?;
    let mut report = VerificationReport::new();
    let mut exact_passed = false;
    for &suite in &cfg.suites {
        if !cfg.applicable(suite) {
            report.push(Check::skipped(suite.name(), "suite selection", "needs a pair input"));
            continue;
        }
        let part = match (suite, &cfg.input) {
            (Suite::Wronskian, Input::Pair(p)) => wronskian_suite(p, cfg.n)?,
            (Suite::Plucker, _) => {
                let r = plucker_suite(cfg, &tower, &sol);
                exact_passed = r.passed();
                r
            }
            (Suite::Frames, Input::Pair(p)) => frames_suite(p, cfg.n),
            (Suite::Kernel, Input::Pair(p)) => kernel_suite(p, cfg.n),
            (Suite::Reduced, _) => reduced_suite(cfg, &sol)?,
            (Suite::Numeric, _) => numeric_suite(cfg, &sol, exact_passed)?,
            _ => unreachable!("applicability checked above"),
        };
        report.extend(part);
    }
    Ok(report)
}

/// `0` when no check failed, `1` otherwise.
pub fn exit_code(report: &VerificationReport) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

pub fn config_digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    version: &'static str,
    config_digest: &'a str,
    checks: &'a [Check],
}

pub fn report_json(report: &VerificationReport, digest: &str) -> String {
    let doc = ReportDocument { version: "1", config_digest: digest, checks: &report.checks };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// One line per check.
pub fn summary(report: &VerificationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    let count = |s: Status| report.checks.iter().filter(|c| c.status == s).count();
    out.push_str(&format!(
        "{} passed, {} failed, {} skipped, {} informational\n",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped),
        count(Status::Info)
    ));
    out
}

/// `x,y,u_1,…,u_n,masked`, rows in row-major order.
pub fn write_samples<W: Write>(cfg: &RunConfig, out: W) -> Result<(), RunError> {
    let grid = cfg.grid.ok_or_else(|| RunError::Config("sampling needs a grid".into()))?;
    let (_, sol) = solution(cfg)?;
    let samples = sample_grid(&sol, &grid);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string(), "y".to_string()];
    header.extend((1..=cfg.n).map(|i| format!("u_{i}")));
    header.push("masked".into());
    w.write_record(&header).map_err(csv_err)?;
    for s in &samples {
        let mut row = vec![s.x.to_string(), s.y.to_string()];
        match &s.u {
            Some(u) => {
                row.extend(u.iter().map(|v| v.to_string()));
                row.push("0".into());
            }
            None => {
                row.extend(std::iter::repeat_n(String::new(), cfg.n));
                row.push("1".into());
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| RunError::Config(e.to_string()))?;
    Ok(())
}

fn csv_err(e: csv::Error) -> RunError {
    RunError::Config(e.to_string())
}

/// The parsed problem in human-readable form.
pub fn info_text(cfg: &RunConfig) -> Result<String, RunError> {
    let mut s = String::new();
    s.push_str(&format!("n = {}\n", cfg.n));
    match &cfg.input {
        Input::Pair(p) => s.push_str(&format!("pair: v0 = {}, v1 = {}\n", p.v0(), p.v1())),
        Input::Function(f) => {
            s.push_str(&format!("function: f = {f}\n"));
            let r = cfg.r_or_default();
            let origin = if cfg.r.is_some() { "given" } else { "rational normal" };
            s.push_str(&format!("R ({origin}), rational part:\n"));
            for i in 0..=r.n() {
                let row: Vec<String> = (0..=r.n()).map(|j| r.entry(i, j).to_string()).collect();
                s.push_str(&format!("  [{}] * sqrt({})\n", row.join(", "), r.sq_weight(i)));
            }
        }
    }
    s.push_str("Cartan matrix:\n");
    s.push_str(&cartan_matrix(cfg.n).to_string());
    let c = shift_constants(cfg.n);
    let exp: Vec<String> = c.exp_c.iter().map(|e| e.to_string()).collect();
    s.push_str(&format!("shift constants e^c_i: [{}]\n", exp.join(", ")));
    let (_, sol) = solution(cfg)?;
    s.push_str("exceptional set: zeros of\n");
    if sol.exceptional().is_empty() {
        s.push_str("  (none)\n");
    }
    for p in sol.exceptional() {
        s.push_str(&format!("  {p}\n"));
    }
    Ok(s)
}
