//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line (run with `cargo test --test acceptance -- --nocapture` to
//! see the lines for passing criteria too).

use num_complex::Complex64;
use quakebend::bend::{
    c2_f, quakebend_by_marking, truncation_table, QuakebendFamily,
};
use quakebend::cli::{cmd_c2, C2Config, EXIT_PASS};
use quakebend::isom3::{normalize_trace, product_perturbation_gap, Mat2};
use quakebend::parse::parse_word;
use quakebend::ptorus::{
    fuchsian_orthogonal, length_of_slope, symmetric_length, Slope, TraceTriple,
};
use quakebend::shearbend::{
    chart_jacobian, cusp_residual, fit_shears_to_representation, holonomy_from_shears,
    project_and_invert, ComplexShears, RepresentationTangent,
};
use quakebend::tangent::{inverse_tangent_check, one_sided_derivative, StepSchedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn check(name: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("acceptance {name}: pass"),
        Err(msg) => {
            println!("acceptance {name}: FAIL ({msg})");
            panic!("{name}: {msg}");
        }
    }
}

fn err(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn grid_61() -> Vec<f64> {
    (0..61).map(|i| -1.5 + i as f64 * 0.05).collect()
}

/// A real admissible shear triple away from the chart's branch locus
/// (the calibrated symmetric point itself sits on 2z = xy, where the
/// trace-pair chart degenerates).
fn generic_shears() -> ComplexShears {
    ComplexShears::real(0.3, -0.5, 0.2)
}

#[test]
fn c01_boundary_length_kink() {
    check("01 boundary-length kink", (|| {
        let f = c2_f(symmetric_length()).map_err(|e| e.to_string())?;
        let sched = StepSchedule::default_schedule();
        let g = |t: f64| vec![f(t)];
        let fp_plus = one_sided_derivative(&g, 0.0, 1.0, &sched)
            .map_err(|e| e.to_string())?
            .value[0];
        let fp_minus = -one_sided_derivative(&g, 0.0, -1.0, &sched)
            .map_err(|e| e.to_string())?
            .value[0];
        let second = quakebend::tangent::second_one_sided_difference(&f, 0.0, &sched)
            .map_err(|e| e.to_string())?;
        err(fp_minus.abs() <= 1e-3, format!("F'(0-) = {fp_minus:.3e}"))?;
        err(fp_plus.abs() <= 1e-3, format!("F'(0+) = {fp_plus:.3e}"))?;
        err(second.right.abs() <= 5e-3, format!("F''(0+) = {:.3e}", second.right))?;
        err((second.left + 0.25).abs() <= 5e-3, format!("F''(0-) = {:.3e}", second.left))?;
        err((second.gap - 0.25).abs() <= 5e-3, format!("gap = {:.3e}", second.gap))?;
        let out = cmd_c2(&C2Config {
            l_gamma: symmetric_length(),
            t_min: -1.5,
            t_max: 1.5,
            t_count: 61,
            out: None,
        });
        err(out.exit_code == EXIT_PASS, format!("cmd_c2 exit {} ({})", out.exit_code, out.summary))
    })());
}

#[test]
fn c02_orthogonal_fuchsian_relations() {
    check("02 orthogonal Fuchsian relations", (|| {
        for k in 0..20 {
            let l = 0.5 + 2.5 * k as f64 / 19.0;
            let base = fuchsian_orthogonal(l).map_err(|e| e.to_string())?;
            let comm = (normalize_trace(base.commutator().trace()) - Complex64::new(2.0, 0.0))
                .norm();
            err(comm <= 1e-10, format!("l={l}: commutator residual {comm:.3e}"))?;
            let l_delta = length_of_slope(&base, Slope::infinity())
                .map_err(|e| e.to_string())?
                .length;
            let product = (l / 2.0).cosh() * (l_delta / 2.0).tanh();
            err(
                (product - 1.0).abs() <= 1e-10,
                format!("l={l}: cosh*tanh = {product}"),
            )?;
        }
        Ok(())
    })());
}

#[test]
fn c03_dual_oracle_agreement() {
    check("03 dual-oracle bending agreement", (|| {
        let base = fuchsian_orthogonal(symmetric_length()).map_err(|e| e.to_string())?;
        let slopes = ["0", "inf", "1", "1/2", "2/3"];
        // lengths 1, 2, 4, 6; the length-6 entry is kept commutator-like so
        // its trace stays O(1) and the absolute tolerance is meaningful
        let words = ["Y", "Xy", "XYxy", "XXYxxy"];
        let ts = [0.2, -0.2, PI / 6.0, -PI / 6.0, PI / 3.0, -PI / 3.0];
        for slope_text in slopes {
            let slope = quakebend::parse::parse_slope(slope_text).map_err(|e| e.to_string())?;
            for word_text in words {
                let xi = parse_word(word_text).map_err(|e| e.to_string())?;
                let crossings =
                    quakebend::bend::enumerate_crossings(&base, slope, &xi, quakebend::bend::DEFAULT_RADIUS)
                        .map_err(|e| e.to_string())?;
                for t in ts {
                    let fam = QuakebendFamily { base, slope, t };
                    let marked = quakebend_by_marking(&fam).map_err(|e| e.to_string())?;
                    let a = normalize_trace(marked.eval(&xi).trace());
                    let b = normalize_trace(
                        quakebend::bend::rotation_product(&base, &crossings, t, &xi).trace(),
                    );
                    err(
                        (a - b).norm() <= 1e-9,
                        format!("slope {slope}, xi {xi}, t {t}: {a} vs {b}"),
                    )?;
                }
            }
        }
        Ok(())
    })());
}

#[test]
fn c04_conservation_on_grid() {
    check("04 conservation laws on the bending grid", (|| {
        let base = fuchsian_orthogonal(symmetric_length()).map_err(|e| e.to_string())?;
        let bend_trace_0 = base.trace_triple().x;
        for t in grid_61() {
            let fam = QuakebendFamily { base, slope: Slope::zero(), t };
            let g = quakebend_by_marking(&fam).map_err(|e| e.to_string())?;
            let triple = g.trace_triple();
            let markov = triple.markov_residual();
            err(markov <= 1e-8, format!("t={t}: Markov residual {markov:.3e}"))?;
            let comm = (normalize_trace(g.commutator().trace()) - Complex64::new(2.0, 0.0)).norm();
            err(comm <= 1e-9, format!("t={t}: commutator residual {comm:.3e}"))?;
            // the bending word itself is slope 0, i.e. the X generator
            let drift = (normalize_trace(g.x.trace()) - bend_trace_0).norm();
            err(drift <= 1e-12, format!("t={t}: bending trace drift {drift:.3e}"))?;
        }
        Ok(())
    })());
}

#[test]
fn c05_closed_form_trace_law() {
    check("05 closed-form bent trace law", (|| {
        let base = fuchsian_orthogonal(symmetric_length()).map_err(|e| e.to_string())?;
        let amp = 8.0_f64.sqrt();
        for t in grid_61() {
            let fam = QuakebendFamily { base, slope: Slope::zero(), t };
            let g = quakebend_by_marking(&fam).map_err(|e| e.to_string())?;
            let predicted = Complex64::new(amp * (t / 2.0).cos(), 0.0);
            let gap = (normalize_trace(g.y.trace()) - normalize_trace(predicted)).norm();
            err(gap <= 1e-10, format!("t={t}: |tr - 2*sqrt(2)cos(t/2)| = {gap:.3e}"))?;
        }
        Ok(())
    })());
}

#[test]
fn c06_product_perturbation_bound() {
    check("06 product perturbation bound", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rand_mat = |rng: &mut ChaCha8Rng, scale: f64| {
            let mut e =
                || Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            Mat2::new(e(), e(), e(), e())
        };
        for k in 0..1000 {
            let n = rng.gen_range(1..=8);
            let a: Vec<Mat2> = (0..n).map(|_| rand_mat(&mut rng, 1.5)).collect();
            let scale = 10.0_f64.powf(-rng.gen_range(1.0..4.0));
            let eps: Vec<Mat2> = (0..n).map(|_| rand_mat(&mut rng, scale)).collect();
            let (lhs, rhs) = product_perturbation_gap(&a, &eps).map_err(|e| e.to_string())?;
            err(lhs <= rhs, format!("instance {k}: lhs {lhs:.6e} > rhs {rhs:.6e}"))?;
        }
        // equality case: zero perturbation makes both sides exactly zero
        let a: Vec<Mat2> = (0..5).map(|_| rand_mat(&mut rng, 1.5)).collect();
        let (lhs, rhs) =
            product_perturbation_gap(&a, &vec![Mat2::zero(); 5]).map_err(|e| e.to_string())?;
        err(lhs == 0.0 && rhs == 0.0, format!("E=0 case: lhs {lhs:.3e} rhs {rhs:.3e}"))
    })());
}

#[test]
fn c07_truncated_products_decay() {
    check("07 truncated rotation products decay", (|| {
        let base = fuchsian_orthogonal(symmetric_length()).map_err(|e| e.to_string())?;
        let slope = Slope::zero();
        for word_text in ["YXY", "YY"] {
            let xi = parse_word(word_text).map_err(|e| e.to_string())?;
            let rs: Vec<usize> = (3..=11).chain([20]).collect();
            let reports =
                truncation_table(&base, slope, 0.5, &xi, &rs).map_err(|e| e.to_string())?;
            for pair in reports.windows(2) {
                let (lo, hi) = (&pair[0], &pair[1]);
                if lo.r > 10 {
                    continue;
                }
                err(
                    hi.error <= 0.9 * lo.error,
                    format!("{word_text}: error({}) = {:.3e} vs 0.9*error({}) = {:.3e}",
                        hi.r, hi.error, lo.r, 0.9 * lo.error),
                )?;
            }
            let last = reports.last().unwrap();
            err(last.error <= 1e-8, format!("{word_text}: error(20) = {:.3e}", last.error))?;
            let r3 = reports[0].max_prefix_norm;
            for rep in &reports {
                err(
                    rep.max_prefix_norm <= 10.0 * r3,
                    format!("{word_text}: prefix norm at r={} is {:.3e}", rep.r, rep.max_prefix_norm),
                )?;
            }
        }
        Ok(())
    })());
}

#[test]
fn c08_shear_chart() {
    check("08 shear-bend chart", (|| {
        // cusp residual vanishes on a seeded sample of the admissible locus
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let mut c =
                || Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.4..0.4));
            let (a, b) = (c(), c());
            let s = ComplexShears::new(a, b, -a - b);
            let residual = cusp_residual(&s);
            err(residual <= 1e-9, format!("cusp residual {residual:.3e} at {}", s.to_csv_row()))?;
        }
        // holomorphy of the chart at the calibration point and a generic one
        for s in [ComplexShears::symmetric(), generic_shears()] {
            let jac = chart_jacobian(&s).map_err(|e| e.to_string())?;
            err(
                jac.cauchy_riemann_residual <= 1e-6,
                format!("Cauchy-Riemann residual {:.3e}", jac.cauchy_riemann_residual),
            )?;
        }
        // roundtrip near the symmetric point
        let truth = ComplexShears::new(
            Complex64::new(0.04, 0.08),
            Complex64::new(-2.0_f64.ln() + 0.09, -0.05),
            Complex64::new(2.0_f64.ln() - 0.13, -0.03),
        );
        let target = holonomy_from_shears(&truth).map_err(|e| e.to_string())?.trace_triple();
        let mut seed = truth;
        seed.s[0] += Complex64::new(0.01, -0.008);
        seed.s[1] -= Complex64::new(0.007, 0.004);
        seed.s[2] = -seed.s[0] - seed.s[1];
        let fitted = fit_shears_to_representation(&target, &seed).map_err(|e| e.to_string())?;
        let back = holonomy_from_shears(&fitted).map_err(|e| e.to_string())?.trace_triple();
        let round = (back.x - target.x).norm().max((back.y - target.y).norm());
        err(round <= 1e-10, format!("roundtrip trace error {round:.3e}"))?;
        // P + iP spans the tangent space at a nondegenerate Fuchsian point
        let jac = chart_jacobian(&generic_shears()).map_err(|e| e.to_string())?;
        err(jac.gram_det.abs() > 1e-6, format!("Gram determinant {:.3e}", jac.gram_det))
    })());
}

#[test]
fn c09_projection_kills_bending_tangent() {
    check("09 bending tangent projects to zero", (|| {
        let s = generic_shears();
        let base = holonomy_from_shears(&s).map_err(|e| e.to_string())?;
        let sched = StepSchedule::default_schedule();
        let path = |t: f64| -> Vec<f64> {
            let fam = QuakebendFamily { base: base.clone(), slope: Slope::zero(), t };
            let tr = quakebend_by_marking(&fam).expect("bending stays admissible").trace_triple();
            vec![tr.x.re, tr.x.im, tr.y.re, tr.y.im]
        };
        let d = one_sided_derivative(path, 0.0, 1.0, &sched).map_err(|e| e.to_string())?;
        let v = RepresentationTangent {
            dx: Complex64::new(d.value[0], d.value[1]),
            dy: Complex64::new(d.value[2], d.value[3]),
        };
        let (p, _) = project_and_invert(&v, &s).map_err(|e| e.to_string())?;
        err(p.norm() <= 5e-5, format!("p-component norm {:.3e}", p.norm()))
    })());
}

#[test]
fn c10_tangent_toolkit() {
    check("10 tangent toolkit", (|| {
        let sched = StepSchedule::default_schedule();
        // |.| at 0 has the exact tangent map v -> |v|
        for v in [1.0, -1.0, 0.25, -3.0] {
            let f = move |t: f64| vec![(t * v).abs()];
            let d = one_sided_derivative(f, 0.0, 1.0, &sched).map_err(|e| e.to_string())?;
            err(
                (d.value[0] - v.abs()).abs() <= 1e-8,
                format!("tangent of |.| along {v}: {}", d.value[0]),
            )?;
        }
        // chart and its Newton inverse have mutually inverse tangent maps
        let s0 = generic_shears();
        let d1 = [1.0, -1.0, 0.0];
        let d2 = [0.0, 1.0, -1.0];
        let at = move |a: &[f64]| -> ComplexShears {
            let a1 = Complex64::new(a[0], a[1]);
            let a2 = Complex64::new(a[2], a[3]);
            let mut s = s0;
            for j in 0..3 {
                s.s[j] += a1 * d1[j] + a2 * d2[j];
            }
            s
        };
        let phi = move |a: &[f64]| -> Vec<f64> {
            let t = holonomy_from_shears(&at(a)).expect("cusp sum preserved").trace_triple();
            vec![t.x.re, t.x.im, t.y.re, t.y.im]
        };
        let phi_inv = move |y: &[f64]| -> Vec<f64> {
            // z is eliminated by the chart, so the fit ignores it
            let target = TraceTriple {
                x: Complex64::new(y[0], y[1]),
                y: Complex64::new(y[2], y[3]),
                z: Complex64::default(),
            };
            let fitted = fit_shears_to_representation(&target, &s0).expect("near the base point");
            let delta1 = fitted.s[0] - s0.s[0];
            let delta3 = fitted.s[2] - s0.s[2];
            vec![delta1.re, delta1.im, -delta3.re, -delta3.im]
        };
        let directions = vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.3, -0.2, 0.5, 0.1],
        ];
        let residual = inverse_tangent_check(phi, phi_inv, &[0.0; 4], &directions, &sched)
            .map_err(|e| e.to_string())?;
        err(residual <= 1e-4, format!("inverse tangent residual {residual:.3e}"))
    })());
}
