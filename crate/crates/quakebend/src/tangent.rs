//! One-sided numerical differentiation: directional derivative estimates with
//! Richardson extrapolation, one-sided second differences, and checks for the
//! defining properties of tangent maps (positive homogeneity, inverse relation).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TangentError {
    #[error("invalid step schedule: {0}")]
    BadSchedule(String),
    #[error("function returned a non-finite value at t = {0}")]
    NonFinite(f64),
}

/// Geometric step schedule h0, h0*rho, ..., h0*rho^(k-1).
#[derive(Debug, Clone, Copy)]
pub struct StepSchedule {
    pub h0: f64,
    pub shrink: f64,
    pub levels: usize,
}

impl StepSchedule {
    pub fn new(h0: f64, shrink: f64, levels: usize) -> Result<Self, TangentError> {
        if !(h0 > 0.0) {
            return Err(TangentError::BadSchedule(format!("h0 = {h0} must be positive")));
        }
        if !(shrink > 0.0 && shrink < 1.0) {
            return Err(TangentError::BadSchedule(format!("shrink = {shrink} must lie in (0,1)")));
        }
        if levels < 3 {
            return Err(TangentError::BadSchedule(format!("levels = {levels} must be >= 3")));
        }
        let finest = h0 * shrink.powi(levels as i32);
        if finest <= 1e-12 {
            return Err(TangentError::BadSchedule(format!(
                "finest step {finest:.3e} is below the noise floor"
            )));
        }
        Ok(StepSchedule { h0, shrink, levels })
    }

    /// Default: h0 = 1e-2, rho = 1/2, 8 levels.
    pub fn default_schedule() -> Self {
        StepSchedule { h0: 1e-2, shrink: 0.5, levels: 8 }
    }

    pub fn steps(&self) -> Vec<f64> {
        (0..self.levels).map(|j| self.h0 * self.shrink.powi(j as i32)).collect()
    }

    pub fn halved(&self) -> Self {
        StepSchedule { h0: self.h0 / 2.0, ..*self }
    }
}

/// One-sided directional derivative estimate.
#[derive(Debug, Clone)]
pub struct OneSidedDerivative {
    /// Raw finest-level difference quotient.
    pub raw: Vec<f64>,
    /// Two-term Richardson extrapolation at the finest level; the reported value.
    pub value: Vec<f64>,
    /// Max distance among the extrapolated estimates at the finest three levels.
    pub dispersion: f64,
}

fn vec_sub_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Estimates lim_{t->0+} (f(x + t*dir) - f(x))/t by one-sided differences with
/// two-term Richardson extrapolation over the schedule. `direction` is +-1 (or
/// any nonzero scale; the estimate is the derivative along that signed step).
pub fn one_sided_derivative<F>(
    f: F,
    x: f64,
    direction: f64,
    schedule: &StepSchedule,
) -> Result<OneSidedDerivative, TangentError>
where
    F: Fn(f64) -> Vec<f64>,
{
    let f0 = f(x);
    if f0.iter().any(|v| !v.is_finite()) {
        return Err(TangentError::NonFinite(x));
    }
    let dim = f0.len();
    let rho = schedule.shrink;
    let mut quotients: Vec<Vec<f64>> = Vec::with_capacity(schedule.levels);
    for h in schedule.steps() {
        let xt = x + h * direction;
        let ft = f(xt);
        if ft.len() != dim || ft.iter().any(|v| !v.is_finite()) {
            return Err(TangentError::NonFinite(xt));
        }
        let q: Vec<f64> = ft.iter().zip(&f0).map(|(a, b)| (a - b) / h).collect();
        quotients.push(q);
    }
    // Richardson: the error of the one-sided quotient expands in powers of h.
    // One pass kills the O(h) term, the second the O(h^2) term.
    let extrapolate = |table: &[Vec<f64>], order: i32| -> Vec<Vec<f64>> {
        let w = rho.powi(order);
        table
            .windows(2)
            .map(|pair| {
                pair[1]
                    .iter()
                    .zip(&pair[0])
                    .map(|(fine, coarse)| (fine - w * coarse) / (1.0 - w))
                    .collect()
            })
            .collect()
    };
    let first = extrapolate(&quotients, 1);
    let second = extrapolate(&first, 2);
    let value = second.last().expect("levels >= 3").clone();
    let tail = &second[second.len().saturating_sub(3)..];
    let mut dispersion = 0.0_f64;
    for i in 0..tail.len() {
        for j in (i + 1)..tail.len() {
            dispersion = dispersion.max(vec_sub_norm(&tail[i], &tail[j]));
        }
    }
    Ok(OneSidedDerivative {
        raw: quotients.last().unwrap().clone(),
        value,
        dispersion,
    })
}

/// One-sided second differences from both sides, and their gap.
#[derive(Debug, Clone, Copy)]
pub struct SecondDifferenceReport {
    pub right: f64,
    pub left: f64,
    pub gap: f64,
    pub dispersion: f64,
}

/// One-sided second difference quotients 2(f(x +- h) - f(x) -+ h f'(x+-))/h^2,
/// Richardson-extrapolated over the schedule.
pub fn second_one_sided_difference<F>(
    f: F,
    x: f64,
    schedule: &StepSchedule,
) -> Result<SecondDifferenceReport, TangentError>
where
    F: Fn(f64) -> f64,
{
    let g = |t: f64| vec![f(t)];
    let d_right = one_sided_derivative(&g, x, 1.0, schedule)?.value[0];
    let d_left = -one_sided_derivative(&g, x, -1.0, schedule)?.value[0];
    let f0 = f(x);
    if !f0.is_finite() {
        return Err(TangentError::NonFinite(x));
    }
    let rho = schedule.shrink;
    let one_side = |sign: f64, deriv: f64| -> Result<(f64, f64), TangentError> {
        let mut quotients = Vec::with_capacity(schedule.levels);
        for h in schedule.steps() {
            let xt = x + sign * h;
            let ft = f(xt);
            if !ft.is_finite() {
                return Err(TangentError::NonFinite(xt));
            }
            quotients.push(2.0 * (ft - f0 - sign * h * deriv) / (h * h));
        }
        // leading error term of the one-sided second difference is O(h)
        let extrap = |tbl: &[f64], order: i32| -> Vec<f64> {
            let w = rho.powi(order);
            tbl.windows(2).map(|p| (p[1] - w * p[0]) / (1.0 - w)).collect()
        };
        let t1 = extrap(&quotients, 1);
        let t2 = extrap(&t1, 2);
        let val = *t2.last().unwrap();
        let tail = &t2[t2.len().saturating_sub(3)..];
        let disp = tail
            .iter()
            .flat_map(|a| tail.iter().map(move |b| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        Ok((val, disp))
    };
    let (right, dr) = one_side(1.0, d_right)?;
    let (left, dl) = one_side(-1.0, d_left)?;
    Ok(SecondDifferenceReport {
        right,
        left,
        gap: (right - left).abs(),
        dispersion: dr.max(dl),
    })
}

/// Max over the samples of ||T(a v) - a T(v)||: degree-1 positive homogeneity.
pub fn homogeneity_check<T>(tangent: T, directions: &[Vec<f64>], scales: &[f64]) -> f64
where
    T: Fn(&[f64]) -> Vec<f64>,
{
    let mut worst = 0.0_f64;
    for v in directions {
        let tv = tangent(v);
        for &a in scales {
            assert!(a >= 0.0, "homogeneity only holds for nonnegative scales");
            let av: Vec<f64> = v.iter().map(|x| a * x).collect();
            let tav = tangent(&av);
            let atv: Vec<f64> = tv.iter().map(|x| a * x).collect();
            worst = worst.max(vec_sub_norm(&tav, &atv));
        }
    }
    worst
}

/// Estimates the tangent maps of a homeomorphism and its inverse by one-sided
/// differences and reports max ||T phi^{-1}(T phi(v)) - v|| over the directions.
pub fn inverse_tangent_check<F, G>(
    phi: F,
    phi_inv: G,
    x: &[f64],
    directions: &[Vec<f64>],
    schedule: &StepSchedule,
) -> Result<f64, TangentError>
where
    F: Fn(&[f64]) -> Vec<f64>,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let fx = phi(x);
    let mut worst = 0.0_f64;
    for v in directions {
        let along = |t: f64| -> Vec<f64> {
            let p: Vec<f64> = x.iter().zip(v).map(|(xi, vi)| xi + t * vi).collect();
            phi(&p)
        };
        let tv = one_sided_derivative(along, 0.0, 1.0, schedule)?.value;
        let back = |t: f64| -> Vec<f64> {
            let p: Vec<f64> = fx.iter().zip(&tv).map(|(yi, wi)| yi + t * wi).collect();
            phi_inv(&p)
        };
        let w = one_sided_derivative(back, 0.0, 1.0, schedule)?.value;
        worst = worst.max(vec_sub_norm(&w, v));
    }
    Ok(worst)
}
