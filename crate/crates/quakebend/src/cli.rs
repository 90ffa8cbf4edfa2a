//! Command-line front end: the bending experiments as reproducible, scriptable
//! runs.  Exit codes: 0 pass, 1 configuration error, 2 invariant violation,
//! 3 numerical non-convergence.

use crate::bend::{c2_experiment, c2_f, truncation_table, BendError, C2Row, TruncationReport};
use crate::isom3::{product_perturbation_gap, Mat2};
use crate::parse::{parse_shear_row, parse_slope, parse_trace_row, parse_word};
use crate::ptorus::{fuchsian_orthogonal, symmetric_length, Slope};
use crate::shearbend::{
    chart_jacobian, cusp_predicate, cusp_residual, fit_shears_to_representation,
    holonomy_from_shears, ComplexShears, ShearError,
};
use crate::tangent::{one_sided_derivative, second_one_sided_difference, StepSchedule};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "quakebend",
    version,
    about = "Bending experiments for punctured-torus groups",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the boundary-length function F along a bending family and
    /// report its one-sided derivatives at t = 0
    C2(C2Config),
    /// Convergence table for depth-truncated rotation products
    Converge(ConvergeConfig),
    /// Seeded property-test corpus: product perturbation bounds plus trace
    /// and cusp invariants
    Fuzz(FuzzConfig),
    /// Shear-bend coordinate tools
    Shear(ShearConfig),
}

#[derive(Args, Debug)]
pub struct C2Config {
    /// Translation length of the bending curve in the base group
    #[arg(long, default_value_t = symmetric_length())]
    pub l_gamma: f64,
    #[arg(long, default_value_t = -1.5, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.5)]
    pub t_max: f64,
    /// Grid size; must be odd and at least 3
    #[arg(long, default_value_t = 61)]
    pub t_count: usize,
    /// Write the CSV table here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConvergeConfig {
    #[arg(long, default_value_t = symmetric_length())]
    pub l_gamma: f64,
    /// Bending slope as p/q
    #[arg(long, default_value = "0")]
    pub slope: String,
    /// Word evaluated through the truncated products (letters X, x, Y, y)
    #[arg(long, default_value = "YXY")]
    pub xi: String,
    /// Bending mass
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 3)]
    pub r_min: usize,
    #[arg(long, default_value_t = 11)]
    pub r_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FuzzConfig {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of product-perturbation instances
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Inject a known-bad instance to exercise the failure path
    #[arg(long, default_value_t = false)]
    pub adversarial: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ShearConfig {
    #[command(subcommand)]
    pub action: ShearAction,
}

#[derive(Subcommand, Debug)]
pub enum ShearAction {
    /// Holonomy traces of a shear triple (CSV row re1,im1,re2,im2,re3,im3)
    Forward {
        #[arg(long, allow_hyphen_values = true)]
        shears: String,
    },
    /// Invert the chart: shears whose holonomy has the target traces
    /// (CSV row x_re,x_im,y_re,y_im,z_re,z_im), Newton-seeded
    Fit {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        seed_shears: String,
    },
    /// Directional derivatives of the trace chart: Cauchy-Riemann residual
    /// and the P + iP Gram determinant
    Jacobian {
        #[arg(long, allow_hyphen_values = true)]
        shears: String,
    },
}

/// Everything a run produces; the binary writes `csv` to the config's output
/// path (or standard output) and `summary` to standard output.
#[derive(Debug)]
pub struct CmdOutput {
    pub exit_code: i32,
    pub summary: String,
    pub csv: Option<String>,
    pub out_path: Option<PathBuf>,
}

impl CmdOutput {
    fn fail(exit_code: i32, msg: String) -> Self {
        CmdOutput { exit_code, summary: msg, csv: None, out_path: None }
    }
}

fn bend_exit(e: &BendError) -> i32 {
    match e {
        BendError::NotStabilized(_) => EXIT_NONCONVERGENCE,
        BendError::BadDepth(_) | BendError::BadRadius(_) => EXIT_CONFIG,
        _ => EXIT_INVARIANT,
    }
}

fn shear_exit(e: &ShearError) -> i32 {
    match e {
        ShearError::NoConvergence(..) | ShearError::Singular => EXIT_NONCONVERGENCE,
        _ => EXIT_INVARIANT,
    }
}

fn t_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>, String> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(format!("need t-min < t-max, got [{min}, {max}]"));
    }
    if count < 3 || count % 2 == 0 {
        return Err(format!("t-count must be odd and at least 3, got {count}"));
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = min + i as f64 * step;
            if t.abs() <= step * 1e-9 {
                0.0
            } else {
                t
            }
        })
        .collect())
}

pub fn execute(command: &Command) -> CmdOutput {
    match command {
        Command::C2(cfg) => cmd_c2(cfg),
        Command::Converge(cfg) => cmd_converge(cfg),
        Command::Fuzz(cfg) => cmd_fuzz(cfg),
        Command::Shear(cfg) => cmd_shear(&cfg.action),
    }
}

pub fn cmd_c2(cfg: &C2Config) -> CmdOutput {
    let ts = match t_grid(cfg.t_min, cfg.t_max, cfg.t_count) {
        Ok(ts) => ts,
        Err(msg) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {msg}")),
    };
    if !ts.contains(&0.0) {
        return CmdOutput::fail(
            EXIT_CONFIG,
            "config error: the t grid must contain t = 0 (one-sided derivatives are taken there)"
                .into(),
        );
    }
    let rows = match c2_experiment(cfg.l_gamma, &ts) {
        Ok(rows) => rows,
        Err(e) => return CmdOutput::fail(bend_exit(&e), format!("c2 failed: {e}")),
    };
    let mut csv = String::from(C2Row::csv_header());
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv_row());
        csv.push('\n');
    }
    let f = match c2_f(cfg.l_gamma) {
        Ok(f) => f,
        Err(e) => return CmdOutput::fail(bend_exit(&e), format!("c2 failed: {e}")),
    };
    let sched = StepSchedule::default_schedule();
    let g = |t: f64| vec![f(t)];
    let d_plus = match one_sided_derivative(g, 0.0, 1.0, &sched) {
        Ok(d) => d,
        Err(e) => return CmdOutput::fail(EXIT_NONCONVERGENCE, format!("c2 derivative: {e}")),
    };
    let d_minus = match one_sided_derivative(g, 0.0, -1.0, &sched) {
        Ok(d) => d,
        Err(e) => return CmdOutput::fail(EXIT_NONCONVERGENCE, format!("c2 derivative: {e}")),
    };
    let second = match second_one_sided_difference(&f, 0.0, &sched) {
        Ok(s) => s,
        Err(e) => return CmdOutput::fail(EXIT_NONCONVERGENCE, format!("c2 second diff: {e}")),
    };
    // the derivative along direction -1 is the negative of F'(0-)
    let fp_minus = -d_minus.value[0];
    let fp_plus = d_plus.value[0];
    let summary = format!(
        "c2 l_gamma={:.14e}: F'(0-)={:.14e} F'(0+)={:.14e} F''(0-)={:.14e} F''(0+)={:.14e} gap={:.14e}",
        cfg.l_gamma, fp_minus, fp_plus, second.left, second.right, second.gap
    );
    let pass = fp_minus.abs() <= 1e-3 && fp_plus.abs() <= 1e-3 && second.gap >= 0.1;
    CmdOutput {
        exit_code: if pass { EXIT_PASS } else { EXIT_INVARIANT },
        summary,
        csv: Some(csv),
        out_path: cfg.out.clone(),
    }
}

/// Errors at or below this level are dominated by float roundoff in the
/// SL2-distance, so decay-ratio checks stop there.
const DECAY_NOISE_FLOOR: f64 = 1e-13;

pub fn cmd_converge(cfg: &ConvergeConfig) -> CmdOutput {
    let slope = match parse_slope(&cfg.slope) {
        Ok(s) => s,
        Err(e) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {e}")),
    };
    let xi = match parse_word(&cfg.xi) {
        Ok(w) => w,
        Err(e) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {e}")),
    };
    if cfg.r_min < 1 || cfg.r_min > cfg.r_max {
        return CmdOutput::fail(
            EXIT_CONFIG,
            format!("config error: need 1 <= r-min <= r-max, got [{}, {}]", cfg.r_min, cfg.r_max),
        );
    }
    let base = match fuchsian_orthogonal(cfg.l_gamma) {
        Ok(b) => b,
        Err(e) => return CmdOutput::fail(EXIT_INVARIANT, format!("base group: {e}")),
    };
    let rs: Vec<usize> = (cfg.r_min..=cfg.r_max).collect();
    let reports = match truncation_table(&base, slope, cfg.t, &xi, &rs) {
        Ok(r) => r,
        Err(e) => return CmdOutput::fail(bend_exit(&e), format!("truncation failed: {e}")),
    };
    let mut csv = String::from(TruncationReport::csv_header());
    csv.push('\n');
    for rep in &reports {
        csv.push_str(&rep.to_csv_row());
        csv.push('\n');
    }
    let mut pass = true;
    let mut note = String::new();
    for pair in reports.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if lo.r < 3 || lo.r > 10 || lo.error <= DECAY_NOISE_FLOOR {
            continue;
        }
        if hi.error > 0.9 * lo.error {
            pass = false;
            let _ = write!(note, " decay broken at r={}", hi.r);
            break;
        }
    }
    let ref_norm = reports
        .iter()
        .find(|r| r.r == 3)
        .unwrap_or(&reports[0])
        .max_prefix_norm;
    if reports.iter().any(|r| r.max_prefix_norm > 10.0 * ref_norm) {
        pass = false;
        note.push_str(" prefix norms unbounded");
    }
    let summary = format!(
        "converge slope={} xi={} t={:.14e}: r=[{},{}] final_error={:.14e}{}{}",
        slope,
        xi,
        cfg.t,
        cfg.r_min,
        cfg.r_max,
        reports.last().map(|r| r.error).unwrap_or(0.0),
        if pass { " pass" } else { " FAIL" },
        note
    );
    CmdOutput {
        exit_code: if pass { EXIT_PASS } else { EXIT_INVARIANT },
        summary,
        csv: Some(csv),
        out_path: cfg.out.clone(),
    }
}

fn random_mat(rng: &mut ChaCha8Rng, scale: f64) -> Mat2 {
    let mut e = || Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
    Mat2::new(e(), e(), e(), e())
}

pub fn cmd_fuzz(cfg: &FuzzConfig) -> CmdOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut lines = Vec::new();
    let mut failures: Vec<String> = Vec::new();
    // 1. the subsequence-product perturbation bound on random instances
    let mut tightest: Option<(f64, String)> = None;
    for k in 0..cfg.count {
        let n = rng.gen_range(1..=8);
        let a: Vec<Mat2> = (0..n).map(|_| random_mat(&mut rng, 1.5)).collect();
        let eps_scale = 10.0_f64.powf(-rng.gen_range(1.0..4.0));
        let eps: Vec<Mat2> = (0..n).map(|_| random_mat(&mut rng, eps_scale)).collect();
        let (lhs, rhs) = product_perturbation_gap(&a, &eps).expect("matched lengths");
        let margin = rhs - lhs;
        let desc = format!("instance {k}: n={n} lhs={lhs:.14e} rhs={rhs:.14e}");
        if margin < 0.0 {
            failures.push(format!("product bound violated: {desc} A={a:?} eps={eps:?}"));
        }
        if tightest.as_ref().map_or(true, |(m, _)| margin < *m) {
            tightest = Some((margin, desc));
        }
    }
    let (margin, desc) = tightest.expect("count >= 1");
    lines.push(format!("fuzz product bound: {} instances, tightest margin {margin:.14e} ({desc})", cfg.count));
    // exact equality of both sides at zero perturbation
    {
        let a: Vec<Mat2> = (0..4).map(|_| random_mat(&mut rng, 1.5)).collect();
        let zeros = vec![Mat2::zero(); 4];
        let (lhs, rhs) = product_perturbation_gap(&a, &zeros).expect("matched lengths");
        if lhs != 0.0 || rhs != 0.0 {
            failures.push(format!("zero-perturbation case not exact: lhs={lhs:.3e} rhs={rhs:.3e}"));
        }
    }
    // 2. cusp + Markov invariants on random admissible complex shears
    let mut worst_markov = 0.0_f64;
    let mut worst_cusp = 0.0_f64;
    for _ in 0..100 {
        let mut c = || Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.4..0.4));
        let (a, b) = (c(), c());
        let s = ComplexShears::new(a, b, -a - b);
        let cusp = cusp_residual(&s);
        worst_cusp = worst_cusp.max(cusp).max(cusp_predicate(&s));
        match holonomy_from_shears(&s) {
            Ok(g) => {
                let markov = g.trace_triple().markov_residual();
                worst_markov = worst_markov.max(markov);
                if markov > 1e-8 {
                    failures.push(format!("Markov residual {markov:.3e} at shears {}", s.to_csv_row()));
                }
            }
            Err(e) => failures.push(format!("admissible shears rejected: {e} at {}", s.to_csv_row())),
        }
    }
    lines.push(format!(
        "fuzz shear invariants: 100 instances, worst Markov {worst_markov:.14e}, worst cusp {worst_cusp:.14e}"
    ));
    // 3. quakebend families keep the Markov and commutator invariants
    let slopes = [Slope::zero(), Slope::infinity(), Slope::new(1, 1).unwrap(), Slope::new(1, 2).unwrap()];
    let mut worst_qb = 0.0_f64;
    for _ in 0..25 {
        let l = rng.gen_range(1.0..2.8);
        let slope = slopes[rng.gen_range(0..slopes.len())];
        let t = rng.gen_range(-1.0..1.0);
        let fam = crate::bend::QuakebendFamily {
            base: match fuchsian_orthogonal(l) {
                Ok(b) => b,
                Err(e) => {
                    failures.push(format!("base group at l={l}: {e}"));
                    continue;
                }
            },
            slope,
            t,
        };
        match crate::bend::quakebend_by_marking(&fam) {
            Ok(g) => {
                let triple = g.trace_triple();
                let markov = triple.markov_residual();
                let comm = (crate::isom3::normalize_trace(g.commutator().trace())
                    - Complex64::new(2.0, 0.0))
                .norm();
                worst_qb = worst_qb.max(markov).max(comm);
                if markov > 1e-8 || comm > 1e-9 {
                    failures.push(format!(
                        "quakebend invariants broken at l={l} slope={slope} t={t}: markov={markov:.3e} commutator={comm:.3e}"
                    ));
                }
            }
            Err(e) => failures.push(format!("quakebend at l={l} slope={slope} t={t}: {e}")),
        }
    }
    lines.push(format!("fuzz quakebend invariants: 25 instances, worst residual {worst_qb:.14e}"));
    // 4. optional self-test of the failure path: a near-tight instance
    // (identity factors, aligned perturbations) whose recorded bound is
    // artificially halved, so the checker must flag it
    if cfg.adversarial {
        let a = vec![Mat2::identity(); 4];
        let eps = vec![Mat2::identity().scale(Complex64::new(0.3, 0.0)); 4];
        let (lhs, rhs) = product_perturbation_gap(&a, &eps).expect("matched lengths");
        let rhs = rhs / 2.0; // sabotage the bound
        if lhs > rhs {
            failures.push(format!(
                "adversarial instance: lhs={lhs:.14e} rhs={rhs:.14e} A={a:?} eps={eps:?}"
            ));
        } else {
            lines.push("adversarial instance did not trip; halved bound still held".into());
        }
    }
    let pass = failures.is_empty();
    let mut summary = lines.join("\n");
    if !pass {
        summary.push('\n');
        summary.push_str(&failures.join("\n"));
        summary.push_str("\nfuzz: FAIL");
    } else {
        summary.push_str("\nfuzz: pass");
    }
    CmdOutput {
        exit_code: if pass { EXIT_PASS } else { EXIT_INVARIANT },
        summary,
        csv: None,
        out_path: cfg.out.clone(),
    }
}

pub fn cmd_shear(action: &ShearAction) -> CmdOutput {
    match action {
        ShearAction::Forward { shears } => {
            let s = match parse_shear_row(shears) {
                Ok(s) => s,
                Err(e) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {e}")),
            };
            match holonomy_from_shears(&s) {
                Ok(g) => {
                    let t = g.trace_triple();
                    CmdOutput {
                        exit_code: EXIT_PASS,
                        summary: format!(
                            "forward traces={} cusp_residual={:.14e}",
                            t.to_csv_row(),
                            cusp_residual(&s)
                        ),
                        csv: None,
                        out_path: None,
                    }
                }
                Err(e) => CmdOutput::fail(shear_exit(&e), format!("forward failed: {e}")),
            }
        }
        ShearAction::Fit { target, seed_shears } => {
            let target = match parse_trace_row(target) {
                Ok(t) => t,
                Err(e) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {e}")),
            };
            let seed = match parse_shear_row(seed_shears) {
                Ok(s) => s,
                Err(e) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {e}")),
            };
            match fit_shears_to_representation(&target, &seed) {
                Ok(fitted) => CmdOutput {
                    exit_code: EXIT_PASS,
                    summary: format!("fit shears={}", fitted.to_csv_row()),
                    csv: None,
                    out_path: None,
                },
                Err(e) => CmdOutput::fail(shear_exit(&e), format!("fit failed: {e}")),
            }
        }
        ShearAction::Jacobian { shears } => {
            let s = match parse_shear_row(shears) {
                Ok(s) => s,
                Err(e) => return CmdOutput::fail(EXIT_CONFIG, format!("config error: {e}")),
            };
            match chart_jacobian(&s) {
                Ok(jac) => CmdOutput {
                    exit_code: EXIT_PASS,
                    summary: format!(
                        "jacobian cauchy_riemann={:.14e} gram_det={:.14e}",
                        jac.cauchy_riemann_residual, jac.gram_det
                    ),
                    csv: None,
                    out_path: None,
                },
                Err(e) => CmdOutput::fail(shear_exit(&e), format!("jacobian failed: {e}")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(t_grid(-1.0, 1.0, 5).is_ok());
        assert!(t_grid(-1.0, 1.0, 4).is_err());
        assert!(t_grid(-1.0, 1.0, 1).is_err());
        assert!(t_grid(1.0, -1.0, 5).is_err());
        let ts = t_grid(-1.5, 1.5, 61).unwrap();
        assert_eq!(ts.len(), 61);
        assert_eq!(ts[30], 0.0);
    }

    #[test]
    fn c2_defaults_pass() {
        let cfg = C2Config {
            l_gamma: symmetric_length(),
            t_min: -1.5,
            t_max: 1.5,
            t_count: 61,
            out: None,
        };
        let out = cmd_c2(&cfg);
        assert_eq!(out.exit_code, EXIT_PASS, "{}", out.summary);
        let csv = out.csv.unwrap();
        assert!(csv.starts_with(C2Row::csv_header()));
        assert_eq!(csv.lines().count(), 62);
        // the reported gap is 1/4 at the symmetric point
        let gap: f64 = out.summary.rsplit("gap=").next().unwrap().trim().parse().unwrap();
        assert!((gap - 0.25).abs() <= 5e-3, "gap {gap}");
    }

    #[test]
    fn c2_off_symmetric_still_passes() {
        let cfg = C2Config {
            l_gamma: 2.4,
            t_min: -1.5,
            t_max: 1.5,
            t_count: 61,
            out: None,
        };
        let out = cmd_c2(&cfg);
        assert_eq!(out.exit_code, EXIT_PASS, "{}", out.summary);
        let gap: f64 = out.summary.rsplit("gap=").next().unwrap().trim().parse().unwrap();
        assert!(gap >= 0.1 && (gap - 0.25).abs() > 1e-3, "gap {gap}");
    }

    #[test]
    fn c2_grid_without_zero_is_config_error() {
        let cfg = C2Config {
            l_gamma: symmetric_length(),
            t_min: 0.1,
            t_max: 1.5,
            t_count: 5,
            out: None,
        };
        assert_eq!(cmd_c2(&cfg).exit_code, EXIT_CONFIG);
        let cfg = C2Config {
            l_gamma: symmetric_length(),
            t_min: -1.5,
            t_max: 1.5,
            t_count: 60,
            out: None,
        };
        assert_eq!(cmd_c2(&cfg).exit_code, EXIT_CONFIG);
    }

    fn converge_defaults() -> ConvergeConfig {
        ConvergeConfig {
            l_gamma: symmetric_length(),
            slope: "0".into(),
            xi: "YXY".into(),
            t: 0.5,
            r_min: 3,
            r_max: 11,
            out: None,
        }
    }

    #[test]
    fn converge_defaults_pass_and_deterministic() {
        let out1 = cmd_converge(&converge_defaults());
        assert_eq!(out1.exit_code, EXIT_PASS, "{}", out1.summary);
        let out2 = cmd_converge(&converge_defaults());
        assert_eq!(out1.csv, out2.csv);
        assert_eq!(out1.summary, out2.summary);
        assert!(out1.csv.as_deref().unwrap().starts_with("r,error,gap,max_prefix_norm"));
    }

    #[test]
    fn converge_zero_t_all_errors_zero() {
        let mut cfg = converge_defaults();
        cfg.t = 0.0;
        cfg.r_max = 5;
        let out = cmd_converge(&cfg);
        assert_eq!(out.exit_code, EXIT_PASS, "{}", out.summary);
        for line in out.csv.unwrap().lines().skip(1) {
            let err: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(err <= 1e-12, "{line}");
        }
    }

    #[test]
    fn converge_bad_flags_are_config_errors() {
        let mut cfg = converge_defaults();
        cfg.slope = "0/0".into();
        assert_eq!(cmd_converge(&cfg).exit_code, EXIT_CONFIG);
        let mut cfg = converge_defaults();
        cfg.xi = "XQ".into();
        assert_eq!(cmd_converge(&cfg).exit_code, EXIT_CONFIG);
        let mut cfg = converge_defaults();
        cfg.r_min = 0;
        assert_eq!(cmd_converge(&cfg).exit_code, EXIT_CONFIG);
    }

    #[test]
    fn fuzz_seed_zero_passes() {
        let cfg = FuzzConfig { seed: 0, count: 1000, adversarial: false, out: None };
        let out = cmd_fuzz(&cfg);
        assert_eq!(out.exit_code, EXIT_PASS, "{}", out.summary);
        assert!(out.summary.contains("tightest margin"));
        assert!(out.summary.ends_with("fuzz: pass"));
    }

    #[test]
    fn fuzz_deterministic_per_seed_and_seed_sensitive() {
        let cfg = FuzzConfig { seed: 7, count: 200, adversarial: false, out: None };
        let a = cmd_fuzz(&cfg);
        let b = cmd_fuzz(&cfg);
        assert_eq!(a.summary, b.summary);
        let other = cmd_fuzz(&FuzzConfig { seed: 8, count: 200, adversarial: false, out: None });
        assert_eq!(other.exit_code, EXIT_PASS);
        assert_ne!(a.summary, other.summary, "different seed must pick a different tightest instance");
    }

    #[test]
    fn fuzz_adversarial_trips_failure_path() {
        let cfg = FuzzConfig { seed: 0, count: 10, adversarial: true, out: None };
        let out = cmd_fuzz(&cfg);
        assert_eq!(out.exit_code, EXIT_INVARIANT, "{}", out.summary);
        assert!(out.summary.contains("adversarial instance"), "{}", out.summary);
        assert!(out.summary.ends_with("fuzz: FAIL"), "{}", out.summary);
    }

    #[test]
    fn shear_subcommands_roundtrip() {
        let row = ComplexShears::symmetric().to_csv_row();
        let fwd = cmd_shear(&ShearAction::Forward { shears: row.clone() });
        assert_eq!(fwd.exit_code, EXIT_PASS, "{}", fwd.summary);
        assert!(fwd.summary.contains("cusp_residual"));
        let jac = cmd_shear(&ShearAction::Jacobian { shears: ComplexShears::real(0.3, -0.5, 0.2).to_csv_row() });
        assert_eq!(jac.exit_code, EXIT_PASS, "{}", jac.summary);
        let bad = cmd_shear(&ShearAction::Forward { shears: "1,2,3".into() });
        assert_eq!(bad.exit_code, EXIT_CONFIG);
        let inadmissible = cmd_shear(&ShearAction::Forward {
            shears: ComplexShears::real(0.5, 0.0, 0.0).to_csv_row(),
        });
        assert_eq!(inadmissible.exit_code, EXIT_INVARIANT);
        // fit back the traces of a perturbed admissible triple
        let truth = ComplexShears::real(0.35, -0.55, 0.2);
        let t = holonomy_from_shears(&truth).unwrap().trace_triple();
        let fit = cmd_shear(&ShearAction::Fit {
            target: t.to_csv_row(),
            seed_shears: ComplexShears::real(0.3, -0.5, 0.2).to_csv_row(),
        });
        assert_eq!(fit.exit_code, EXIT_PASS, "{}", fit.summary);
    }

    #[test]
    fn cli_parses_spec_flags() {
        let cli = Cli::try_parse_from([
            "quakebend", "c2", "--l-gamma", "2.4", "--t-min", "-1", "--t-max", "1", "--t-count",
            "21", "--out", "/tmp/x.csv",
        ])
        .unwrap();
        match cli.command {
            Command::C2(cfg) => {
                assert_eq!(cfg.l_gamma, 2.4);
                assert_eq!(cfg.t_count, 21);
                assert!(cfg.out.is_some());
            }
            other => panic!("wrong subcommand {other:?}"),
        }
        let cli = Cli::try_parse_from([
            "quakebend", "converge", "--slope", "2/3", "--xi", "XY", "--r-min", "3", "--r-max",
            "8", "--seed-less-flag",
        ]);
        assert!(cli.is_err(), "unknown flags must be rejected");
        let cli = Cli::try_parse_from(["quakebend", "fuzz", "--seed", "5"]).unwrap();
        match cli.command {
            Command::Fuzz(cfg) => assert_eq!(cfg.seed, 5),
            other => panic!("wrong subcommand {other:?}"),
        }
    }
}
