//! Complex shear-bend coordinates on the two-triangle ideal triangulation of
//! the once-punctured torus.
//!
//! Each of the three edges carries a complex weight sigma (real part: shear,
//! imaginary part: bending angle), defined modulo 2*pi*i.  The holonomy of
//! the marked generators is an ordered product of per-edge matrices and fixed
//! ideal-triangle turning matrices:
//!
//! ```text
//!   E(s) = [[0, e^{s/2}], [-e^{-s/2}, 0]]     (cross edge with weight s)
//!   L    = [[1, 1], [-1, 0]]                  (turn left in a triangle)
//!   R    = [[0, 1], [-1, -1]]                 (turn right)
//!   X    = E(s1) L E(s2) R,   Y = E(s1) R E(s3) L
//! ```
//!
//! The convention is frozen by calibration: the real triple (0, -ln 2, ln 2)
//! maps to the symmetric-point traces (2*sqrt(2), 2*sqrt(2), 4) exactly.  The
//! puncture is parabolic exactly when s1 + s2 + s3 = 0 modulo 2*pi*i, which
//! the commutator-trace residual confirms numerically.

use crate::isom3::{normalize_trace, Isometry, Mat2};
use crate::ptorus::{MarkedGroup, TraceTriple};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

pub const ADMISSIBLE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ShearError {
    #[error("shears are not admissible: cusp residual {0:.3e}")]
    Inadmissible(f64),
    #[error("Newton iteration failed to converge in {0} steps (residual {1:.3e})")]
    NoConvergence(usize, f64),
    #[error("chart is degenerate at this point: {0}")]
    Degenerate(String),
    #[error("linear system is singular")]
    Singular,
}

/// Complex edge weights (sigma1, sigma2, sigma3), each modulo 2*pi*i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexShears {
    pub s: [Complex64; 3],
}

impl ComplexShears {
    pub fn new(s1: Complex64, s2: Complex64, s3: Complex64) -> Self {
        ComplexShears { s: [s1, s2, s3] }
    }

    pub fn real(s1: f64, s2: f64, s3: f64) -> Self {
        ComplexShears::new(s1.into(), s2.into(), s3.into())
    }

    /// The calibration point: real shears mapping to the symmetric-point
    /// traces (2*sqrt(2), 2*sqrt(2), 4).
    pub fn symmetric() -> Self {
        let l2 = 2.0_f64.ln();
        ComplexShears::real(0.0, -l2, l2)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.s.iter().all(|v| v.im.abs() <= tol)
    }

    /// CSV row re1,im1,re2,im2,re3,im3 with 15 significant digits.
    pub fn to_csv_row(&self) -> String {
        self.s
            .iter()
            .map(|v| format!("{:.14e},{:.14e}", v.re, v.im))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn edge(s: Complex64) -> Mat2 {
    let h = (s / 2.0).exp();
    Mat2::new(0.0.into(), h, -h.inv(), 0.0.into())
}

fn turn_left() -> Mat2 {
    Mat2::from_reals(1.0, 1.0, -1.0, 0.0)
}

fn turn_right() -> Mat2 {
    Mat2::from_reals(0.0, 1.0, -1.0, -1.0)
}

/// Raw generator matrices, before any admissibility check.
fn generator_mats(s: &ComplexShears) -> (Mat2, Mat2) {
    let e1 = edge(s.s[0]);
    let x = e1.mul(&turn_left()).mul(&edge(s.s[1])).mul(&turn_right());
    let y = e1.mul(&turn_right()).mul(&edge(s.s[2])).mul(&turn_left());
    (x, y)
}

/// |tr[X, Y] + 2| for the holonomy built from the shears, computed directly.
pub fn cusp_residual(s: &ComplexShears) -> f64 {
    let (xm, ym) = generator_mats(s);
    let x = Isometry::from_mat(xm).expect("edge and turn matrices are unimodular");
    let y = Isometry::from_mat(ym).expect("edge and turn matrices are unimodular");
    let comm = x.compose(&y).compose(&x.inverse()).compose(&y.inverse());
    (normalize_trace(comm.trace()) - Complex64::new(2.0, 0.0)).norm()
}

/// Fast syntactic form of the cusp condition: distance of s1 + s2 + s3 from
/// the lattice 2*pi*i*Z.  Vanishes exactly when `cusp_residual` does.
pub fn cusp_predicate(s: &ComplexShears) -> f64 {
    let sum: Complex64 = s.s.iter().sum();
    let im = sum.im.rem_euclid(TAU);
    let im = if im > PI { im - TAU } else { im };
    sum.re.hypot(im)
}

/// The marked holonomy of an admissible shear triple.
pub fn holonomy_from_shears(s: &ComplexShears) -> Result<MarkedGroup, ShearError> {
    let residual = cusp_residual(s);
    if residual > ADMISSIBLE_TOL {
        return Err(ShearError::Inadmissible(residual));
    }
    let (xm, ym) = generator_mats(s);
    let x = Isometry::from_mat(xm).expect("unimodular");
    let y = Isometry::from_mat(ym).expect("unimodular");
    MarkedGroup::new_allow_degenerate(x, y)
        .map_err(|_| ShearError::Inadmissible(residual))
}

/// Trace pair (tr X, tr Y) of the raw construction, sign-free.
fn trace_pair_raw(s: &ComplexShears) -> (Complex64, Complex64) {
    let (xm, ym) = generator_mats(s);
    (xm.trace(), ym.trace())
}

// ---------------------------------------------------------------------------
// small dense linear solvers
// ---------------------------------------------------------------------------

fn solve3_complex(a: [[Complex64; 3]; 3], b: [Complex64; 3]) -> Result<[Complex64; 3], ShearError> {
    let mut m = [[Complex64::default(); 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[piv][col].norm() < 1e-14 {
            return Err(ShearError::Singular);
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    let sub = f * m[col][k];
                    m[row][k] -= sub;
                }
            }
        }
    }
    Ok([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

fn solve4_real(a: [[f64; 4]; 4], b: [f64; 4]) -> Result<[f64; 4], ShearError> {
    let mut m = [[0.0f64; 5]; 4];
    for i in 0..4 {
        m[i][..4].copy_from_slice(&a[i]);
        m[i][4] = b[i];
    }
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-14 {
            return Err(ShearError::Singular);
        }
        m.swap(col, piv);
        for row in 0..4 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..5 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    Ok([m[0][4] / m[0][0], m[1][4] / m[1][1], m[2][4] / m[2][2], m[3][4] / m[3][3]])
}

fn det4(a: [[f64; 4]; 4]) -> f64 {
    let mut m = a;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-300 {
            return 0.0;
        }
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= m[col][col];
        for row in (col + 1)..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// Fitting the chart to a target representation
// ---------------------------------------------------------------------------

/// Newton inversion of the chart: finds admissible shears whose holonomy has
/// the target trace pair, starting from a nearby admissible seed.
pub fn fit_shears_to_representation(
    target: &TraceTriple,
    seed: &ComplexShears,
) -> Result<ComplexShears, ShearError> {
    const MAX_STEPS: usize = 50;
    // freeze the SL2 lift signs at the seed so the equations are holomorphic
    let (x0, y0) = trace_pair_raw(seed);
    let sx = if (x0 - target.x).norm() <= (x0 + target.x).norm() { 1.0 } else { -1.0 };
    let sy = if (y0 - target.y).norm() <= (y0 + target.y).norm() { 1.0 } else { -1.0 };
    // pick the 2*pi*i branch of the cusp sum nearest the seed
    let sum0: Complex64 = seed.s.iter().sum();
    let branch = Complex64::new(0.0, TAU * (sum0.im / TAU).round());
    let f = |s: &ComplexShears| -> [Complex64; 3] {
        let (tx, ty) = trace_pair_raw(s);
        let sum: Complex64 = s.s.iter().sum();
        [sx * tx - target.x, sy * ty - target.y, sum - branch]
    };
    let mut cur = *seed;
    let mut last_res = f64::INFINITY;
    for _ in 0..MAX_STEPS {
        let r = f(&cur);
        last_res = r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if last_res <= 1e-12 {
            return Ok(cur);
        }
        // holomorphic Jacobian by central differences
        let h = 1e-6;
        let mut jac = [[Complex64::default(); 3]; 3];
        for j in 0..3 {
            let mut plus = cur;
            let mut minus = cur;
            plus.s[j] += Complex64::new(h, 0.0);
            minus.s[j] -= Complex64::new(h, 0.0);
            let (fp, fm) = (f(&plus), f(&minus));
            for i in 0..3 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let step = solve3_complex(jac, r)?;
        for j in 0..3 {
            cur.s[j] -= step[j];
        }
    }
    Err(ShearError::NoConvergence(MAX_STEPS, last_res))
}

// ---------------------------------------------------------------------------
// Tangent chart: directional derivatives along the admissible locus
// ---------------------------------------------------------------------------

/// Derivative of the trace-pair chart along one tangent direction.
#[derive(Debug, Clone, Copy)]
pub struct RepresentationTangent {
    pub dx: Complex64,
    pub dy: Complex64,
}

impl RepresentationTangent {
    pub fn scaled_i(&self) -> RepresentationTangent {
        RepresentationTangent { dx: Complex64::i() * self.dx, dy: Complex64::i() * self.dy }
    }

    fn as_reals(&self) -> [f64; 4] {
        [self.dx.re, self.dx.im, self.dy.re, self.dy.im]
    }

    pub fn norm(&self) -> f64 {
        (self.dx.norm_sqr() + self.dy.norm_sqr()).sqrt()
    }
}

/// Directional derivatives of (tr X, tr Y) at sigma: two real-shear
/// directions spanning P (d1 = (1,-1,0), d2 = (0,1,-1), both preserving the
/// cusp sum), their bending counterparts spanning iP, and the verified
/// Cauchy-Riemann residual between them.
#[derive(Debug, Clone, Copy)]
pub struct ChartJacobian {
    pub real_dirs: [RepresentationTangent; 2],
    pub imag_dirs: [RepresentationTangent; 2],
    pub cauchy_riemann_residual: f64,
    pub gram_det: f64,
}

/// Tangent directions of the admissible locus used for the chart.
pub const CHART_DIRECTIONS: [[f64; 3]; 2] = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]];

fn directional_derivative(
    s: &ComplexShears,
    dir: [Complex64; 3],
    signs: (f64, f64),
) -> RepresentationTangent {
    // central difference with one Richardson level (h and h/2)
    let h = 1e-4;
    let eval = |step: f64| -> (Complex64, Complex64) {
        let mut q = *s;
        for j in 0..3 {
            q.s[j] += step * dir[j];
        }
        let (x, y) = trace_pair_raw(&q);
        (signs.0 * x, signs.1 * y)
    };
    let diff = |h: f64| -> (Complex64, Complex64) {
        let (xp, yp) = eval(h);
        let (xm, ym) = eval(-h);
        ((xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h))
    };
    let (dx1, dy1) = diff(h);
    let (dx2, dy2) = diff(h / 2.0);
    RepresentationTangent {
        dx: (4.0 * dx2 - dx1) / 3.0,
        dy: (4.0 * dy2 - dy1) / 3.0,
    }
}

pub fn chart_jacobian(s: &ComplexShears) -> Result<ChartJacobian, ShearError> {
    let residual = cusp_residual(s);
    if residual > ADMISSIBLE_TOL {
        return Err(ShearError::Inadmissible(residual));
    }
    let (x0, y0) = trace_pair_raw(s);
    let signs = (
        if x0.re >= 0.0 { 1.0 } else { -1.0 },
        if y0.re >= 0.0 { 1.0 } else { -1.0 },
    );
    let lift = |d: [f64; 3], imag: bool| -> [Complex64; 3] {
        let unit = if imag { Complex64::i() } else { Complex64::new(1.0, 0.0) };
        [unit * d[0], unit * d[1], unit * d[2]]
    };
    let real_dirs = [
        directional_derivative(s, lift(CHART_DIRECTIONS[0], false), signs),
        directional_derivative(s, lift(CHART_DIRECTIONS[1], false), signs),
    ];
    let imag_dirs = [
        directional_derivative(s, lift(CHART_DIRECTIONS[0], true), signs),
        directional_derivative(s, lift(CHART_DIRECTIONS[1], true), signs),
    ];
    let mut cr = 0.0_f64;
    for k in 0..2 {
        let want = real_dirs[k].scaled_i();
        cr = cr
            .max((imag_dirs[k].dx - want.dx).norm())
            .max((imag_dirs[k].dy - want.dy).norm());
    }
    let vs = [
        real_dirs[0].as_reals(),
        real_dirs[1].as_reals(),
        imag_dirs[0].as_reals(),
        imag_dirs[1].as_reals(),
    ];
    let mut gram = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = (0..4).map(|k| vs[i][k] * vs[j][k]).sum();
        }
    }
    Ok(ChartJacobian {
        real_dirs,
        imag_dirs,
        cauchy_riemann_residual: cr,
        gram_det: det4(gram),
    })
}

/// Decomposition v = p + i q with p, q in the real-shear span P: returns the
/// p-component and its preimage (a1, a2) in the chart directions, i.e. the
/// shear variation whose derivative is p.
pub fn project_and_invert(
    v: &RepresentationTangent,
    s: &ComplexShears,
) -> Result<(RepresentationTangent, [f64; 2]), ShearError> {
    let jac = chart_jacobian(s)?;
    if jac.gram_det.abs() <= 1e-6 {
        return Err(ShearError::Degenerate(format!(
            "Gram determinant {:.3e} too small",
            jac.gram_det
        )));
    }
    let v1 = jac.real_dirs[0];
    let v2 = jac.real_dirs[1];
    let iv1 = v1.scaled_i();
    let iv2 = v2.scaled_i();
    let cols = [v1.as_reals(), v2.as_reals(), iv1.as_reals(), iv2.as_reals()];
    let mut a = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = cols[j][i];
        }
    }
    let coef = solve4_real(a, v.as_reals())?;
    let p = RepresentationTangent {
        dx: coef[0] * v1.dx + coef[1] * v2.dx,
        dy: coef[0] * v1.dy + coef[1] * v2.dy,
    };
    Ok((p, [coef[0], coef[1]]))
}
