//! Quakebend (bending) deformations along weighted simple closed geodesics.
//!
//! A Fuchsian punctured-torus group is bent along the slope-p/q geodesic with
//! a signed Dirac mass t.  Two independent constructions are implemented and
//! serve as oracles for each other:
//!
//! * by marking: remark so the bending curve is the generator X, insert one
//!   rotation of angle t about its axis in front of Y, and remark back;
//! * by crossings: enumerate the lifts of the bending geodesic crossing the
//!   arc from a base point p0 to xi(p0), and left-multiply the base holonomy
//!   of xi by one rotation per crossing, ordered from p0 outward.
//!
//! Truncated rotation products with corridor-approximated axes quantify the
//! exponential-decay mechanism behind the convergence of such products, and
//! `c2_experiment` produces the bent-length table showing that the boundary
//! length function is C^1 but not C^2 at t = 0.

use crate::isom3::{rotation_about, Boundary, Isometry, OrientedGeodesic};
use crate::ptorus::{
    length_of_slope, marking_change, matrix_with_x_class, MarkedGroup, PtorusError, Slope,
    TraceTriple, Word,
};
use num_complex::Complex64;
use thiserror::Error;

/// Sign convention for the crossing rotations, frozen by calibrating the two
/// quakebend implementations against each other at (slope 0, xi = Y, t = 0.1).
pub const CROSSING_SIGN: f64 = 1.0;

/// Default search radius for crossing enumeration; stabilization at D + 2 is
/// always checked.
pub const DEFAULT_RADIUS: f64 = 12.0;

/// Generic offset of the base point off the generator axes, along the
/// bisector direction (1 + i)/sqrt(2).
pub const BASE_JITTER: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum BendError {
    #[error(transparent)]
    Ptorus(#[from] PtorusError),
    #[error("crossing set not stabilized at search radius {0}; retry with a larger radius")]
    NotStabilized(f64),
    #[error("base group is not Fuchsian: matrix entry has imaginary part {0:.3e}")]
    NotFuchsian(f64),
    #[error("generator axes do not intersect; cannot place the base point")]
    NoBasePoint,
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("truncation depth {0} must be >= 1")]
    BadDepth(usize),
    #[error("search radius {0} must be positive")]
    BadRadius(f64),
}

/// A bending family: Fuchsian base, bending slope, and the signed Dirac mass.
#[derive(Debug, Clone, Copy)]
pub struct QuakebendFamily {
    pub base: MarkedGroup,
    pub slope: Slope,
    pub t: f64,
}

// ---------------------------------------------------------------------------
// Quakebend by marking
// ---------------------------------------------------------------------------

/// Bends by remarking: conjugate the marking so the bending curve is X, set
/// rho_t(X) = X and rho_t(Y) = R_t Y with R_t the rotation of angle t about
/// axis(X), and express the original generators through the inverse marking.
pub fn quakebend_by_marking(fam: &QuakebendFamily) -> Result<MarkedGroup, BendError> {
    if fam.t == 0.0 {
        return Ok(fam.base);
    }
    let mc = marking_change(matrix_with_x_class(fam.slope)).expect("unimodular by construction");
    let xp = fam.base.eval(&mc.forward.0);
    let yp = fam.base.eval(&mc.forward.1);
    let axis = xp.axis().map_err(|_| {
        BendError::Genericity("bending curve image has no axis".into())
    })?;
    let rot = rotation_about(&axis, fam.t);
    let deformed = (xp, rot.compose(&yp));
    let eval_in = |w: &Word| -> Isometry {
        let mut out = Isometry::identity();
        for &l in w.letters() {
            let g = match l {
                1 => deformed.0,
                -1 => deformed.0.inverse(),
                2 => deformed.1,
                _ => deformed.1.inverse(),
            };
            out = out.compose(&g);
        }
        out
    };
    Ok(MarkedGroup::new_allow_degenerate(
        eval_in(&mc.inverse.0),
        eval_in(&mc.inverse.1),
    )?)
}

// ---------------------------------------------------------------------------
// Half-plane geometry helpers (the base group is Fuchsian: real entries)
// ---------------------------------------------------------------------------

fn hyp_dist(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).acosh()
}

/// Boundary point of a Fuchsian geodesic as a real number or None = infinity.
fn real_endpoint(b: Boundary) -> Result<Option<f64>, BendError> {
    match b {
        Boundary::Infinity => Ok(None),
        Boundary::Finite(z) => {
            if z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
                return Err(BendError::NotFuchsian(z.im));
            }
            Ok(Some(z.re))
        }
    }
}

/// Signed side of z relative to the geodesic with ideal endpoints (a, b):
/// positive outside the semicircle / right of the vertical line.
fn side_of(a: Option<f64>, b: Option<f64>, z: Complex64) -> f64 {
    match (a, b) {
        (Some(a), Some(b)) => {
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a).abs();
            (z - Complex64::new(c, 0.0)).norm_sqr() - r * r
        }
        (Some(u), None) | (None, Some(u)) => z.re - u,
        (None, None) => unreachable!("geodesic endpoints are distinct"),
    }
}

/// Unit-free tangent direction at z of the geodesic (a, b), pointing toward b.
fn geodesic_tangent_toward(a: Option<f64>, b: Option<f64>, z: Complex64) -> Complex64 {
    match (a, b) {
        (Some(a), Some(b)) => {
            let c = Complex64::new(0.5 * (a + b), 0.0);
            // dz/dtheta = i(z - c); theta decreases toward the right endpoint
            if b > a {
                -Complex64::i() * (z - c)
            } else {
                Complex64::i() * (z - c)
            }
        }
        (Some(_), None) => Complex64::i(),
        (None, Some(_)) => -Complex64::i(),
        (None, None) => unreachable!(),
    }
}

/// Geodesic arc between two interior points of the upper half-plane.
struct GeoArc {
    z0: Complex64,
    z1: Complex64,
    /// None: vertical segment; Some((c, r, th0, th1)): circular arc.
    circle: Option<(f64, f64, f64, f64)>,
}

impl GeoArc {
    fn new(z0: Complex64, z1: Complex64) -> GeoArc {
        if (z0.re - z1.re).abs() < 1e-12 {
            return GeoArc { z0, z1, circle: None };
        }
        let c = (z1.norm_sqr() - z0.norm_sqr()) / (2.0 * (z1.re - z0.re));
        let r = (z0 - Complex64::new(c, 0.0)).norm();
        let th0 = (z0 - Complex64::new(c, 0.0)).arg();
        let th1 = (z1 - Complex64::new(c, 0.0)).arg();
        GeoArc { z0, z1, circle: Some((c, r, th0, th1)) }
    }

    fn point(&self, s: f64) -> Complex64 {
        match self.circle {
            None => {
                // constant-x geodesic: interpolate log-height
                let y = self.z0.im * (self.z1.im / self.z0.im).powf(s);
                Complex64::new(self.z0.re, y)
            }
            Some((c, r, th0, th1)) => {
                let th = th0 + s * (th1 - th0);
                Complex64::new(c, 0.0) + Complex64::from_polar(r, th)
            }
        }
    }

    /// Travel direction (from z0 toward z1) at the point with parameter s.
    fn tangent(&self, s: f64) -> Complex64 {
        match self.circle {
            None => Complex64::new(0.0, (self.z1.im - self.z0.im).signum()),
            Some((c, _, th0, th1)) => {
                let z = self.point(s);
                Complex64::i() * (z - Complex64::new(c, 0.0)) * (th1 - th0).signum()
            }
        }
    }

    /// Ideal endpoints of the full geodesic containing the arc.
    fn ideal_endpoints(&self) -> (Boundary, Boundary) {
        match self.circle {
            None => (Boundary::real(self.z0.re), Boundary::Infinity),
            Some((c, r, _, _)) => (Boundary::real(c - r), Boundary::real(c + r)),
        }
    }
}

/// Intersection point of two crossing Fuchsian geodesics.
fn geodesic_intersection(
    g1: &OrientedGeodesic,
    g2: &OrientedGeodesic,
) -> Result<Complex64, BendError> {
    let (a1, b1) = (real_endpoint(g1.attracting)?, real_endpoint(g1.repelling)?);
    let (a2, b2) = (real_endpoint(g2.attracting)?, real_endpoint(g2.repelling)?);
    let circle = |a: Option<f64>, b: Option<f64>| -> Option<(f64, f64)> {
        match (a, b) {
            (Some(a), Some(b)) => Some((0.5 * (a + b), 0.5 * (b - a).abs())),
            _ => None,
        }
    };
    let line_x = |a: Option<f64>, b: Option<f64>| -> Option<f64> {
        match (a, b) {
            (Some(u), None) | (None, Some(u)) => Some(u),
            _ => None,
        }
    };
    match (circle(a1, b1), circle(a2, b2)) {
        (Some((c1, r1)), Some((c2, r2))) => {
            if (c1 - c2).abs() < 1e-13 {
                return Err(BendError::NoBasePoint);
            }
            let x = (r1 * r1 - r2 * r2 - c1 * c1 + c2 * c2) / (2.0 * (c2 - c1));
            let y2 = r1 * r1 - (x - c1) * (x - c1);
            if y2 <= 0.0 {
                return Err(BendError::NoBasePoint);
            }
            Ok(Complex64::new(x, y2.sqrt()))
        }
        (Some((c, r)), None) | (None, Some((c, r))) => {
            let x = line_x(a1, b1).or(line_x(a2, b2)).unwrap();
            let y2 = r * r - (x - c) * (x - c);
            if y2 <= 0.0 {
                return Err(BendError::NoBasePoint);
            }
            Ok(Complex64::new(x, y2.sqrt()))
        }
        (None, None) => Err(BendError::NoBasePoint),
    }
}

/// The generic base point: intersection of the generator axes, jittered.
fn base_point(base: &MarkedGroup, jitter: f64) -> Result<Complex64, BendError> {
    let ax = base.x.axis().map_err(|_| BendError::NoBasePoint)?;
    let ay = base.y.axis().map_err(|_| BendError::NoBasePoint)?;
    let p = geodesic_intersection(&ax, &ay)?;
    Ok(p + jitter * Complex64::new(1.0, 1.0) / 2.0_f64.sqrt())
}

// ---------------------------------------------------------------------------
// Crossing enumeration
// ---------------------------------------------------------------------------

/// One lift of the bending geodesic crossing the base arc.
#[derive(Debug, Clone)]
pub struct CrossingLift {
    /// Group element w naming the lift w . axis(beta).
    pub word: Word,
    /// The conjugated bending holonomy w rho0(beta) w^{-1}; its axis is the
    /// crossing geodesic.
    pub conj: Isometry,
    /// The crossing geodesic, oriented to the left as seen from the base
    /// point (positive cross product with the arc direction).
    pub geodesic: OrientedGeodesic,
    /// Crossing parameter along the arc, in (0, 1), strictly increasing from
    /// the base point.
    pub position: f64,
}

/// Orbit ball: all reduced words moving the base point at most `radius`.
fn enumerate_ball(
    base: &MarkedGroup,
    p0: Complex64,
    radius: f64,
) -> Vec<(Word, Isometry, f64)> {
    let gens: [(i8, Isometry); 4] = [
        (1, base.x),
        (-1, base.x.inverse()),
        (2, base.y),
        (-2, base.y.inverse()),
    ];
    let mut out: Vec<(Word, Isometry, f64)> = vec![(Word::identity(), Isometry::identity(), 0.0)];
    let mut frontier: Vec<(Vec<i8>, Isometry)> = vec![(Vec::new(), Isometry::identity())];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (letters, mat) in frontier {
            for &(l, g) in &gens {
                if letters.last() == Some(&-l) {
                    continue; // stay reduced
                }
                let m = mat.compose(&g);
                let d = hyp_dist(p0, m.apply_halfplane(p0));
                if d > radius {
                    continue;
                }
                let mut w = letters.clone();
                w.push(l);
                out.push((Word::new(w.clone()), m, d));
                next.push((w, m));
            }
        }
        frontier = next;
    }
    out
}

fn crossings_from_ball(
    ball: &[(Word, Isometry, f64)],
    radius: f64,
    beta_axis: &OrientedGeodesic,
    beta: &Isometry,
    arc: &GeoArc,
) -> Result<Vec<CrossingLift>, BendError> {
    let mut found: Vec<CrossingLift> = Vec::new();
    for (w, m, d) in ball {
        if *d > radius {
            continue;
        }
        let att = m.apply(beta_axis.attracting);
        let rep = m.apply(beta_axis.repelling);
        let (ea, er) = (real_endpoint(att)?, real_endpoint(rep)?);
        let s0 = side_of(ea, er, arc.z0);
        let s1 = side_of(ea, er, arc.z1);
        if s0 == 0.0 || s1 == 0.0 {
            return Err(BendError::Genericity(format!(
                "arc endpoint lies on lift {w}; adjust the jitter"
            )));
        }
        if s0.signum() == s1.signum() {
            continue;
        }
        // dedupe translates sharing the geodesic (cosets of the bending curve)
        let dup = found.iter().any(|c| {
            (c.geodesic.attracting.chordal(&att) <= 1e-7
                && c.geodesic.repelling.chordal(&rep) <= 1e-7)
                || (c.geodesic.attracting.chordal(&rep) <= 1e-7
                    && c.geodesic.repelling.chordal(&att) <= 1e-7)
        });
        if dup {
            continue;
        }
        // bisection for the crossing parameter
        let (mut lo, mut hi, flo) = (0.0_f64, 1.0_f64, s0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let sm = side_of(ea, er, arc.point(mid));
            if sm.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let zc = arc.point(s);
        // orient to the left as seen from the base point
        let arc_tan = arc.tangent(s);
        let geo_tan = geodesic_tangent_toward(er, ea, zc);
        let cross = arc_tan.re * geo_tan.im - arc_tan.im * geo_tan.re;
        if cross.abs() < 1e-13 {
            return Err(BendError::Genericity(format!(
                "tangential incidence of lift {w} with the arc"
            )));
        }
        let (gatt, grep) = if cross > 0.0 { (att, rep) } else { (rep, att) };
        let geodesic = OrientedGeodesic::new(gatt, grep)
            .map_err(|_| BendError::Genericity("degenerate lift geodesic".into()))?;
        found.push(CrossingLift {
            word: w.clone(),
            conj: m.compose(beta).compose(&m.inverse()),
            geodesic,
            position: s,
        });
    }
    found.sort_by(|a, b| a.position.total_cmp(&b.position));
    for pair in found.windows(2) {
        if (pair[1].position - pair[0].position).abs() <= 1e-12 {
            return Err(BendError::Genericity(
                "two lifts cross the arc at the same position".into(),
            ));
        }
    }
    Ok(found)
}

fn crossing_sets_agree(a: &[CrossingLift], b: &[CrossingLift]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.geodesic.attracting.chordal(&y.geodesic.attracting) <= 1e-7
                && x.geodesic.repelling.chordal(&y.geodesic.repelling) <= 1e-7
                && (x.position - y.position).abs() <= 1e-7
        })
}

/// Enumerates the lifts of the bending geodesic crossing the arc from the
/// base point to xi(base point), ordered by crossing position.  The result is
/// recomputed at radius + 2 and must agree (stabilization contract).
pub fn enumerate_crossings(
    base: &MarkedGroup,
    slope: Slope,
    xi: &Word,
    radius: f64,
) -> Result<Vec<CrossingLift>, BendError> {
    enumerate_crossings_jittered(base, slope, xi, radius, BASE_JITTER)
}

/// Same with an explicit base-point jitter (used to verify that the rotation
/// product does not depend on the generic choice).
pub fn enumerate_crossings_jittered(
    base: &MarkedGroup,
    slope: Slope,
    xi: &Word,
    radius: f64,
    jitter: f64,
) -> Result<Vec<CrossingLift>, BendError> {
    if !(radius > 0.0) {
        return Err(BendError::BadRadius(radius));
    }
    let p0 = base_point(base, jitter)?;
    if xi.is_empty() {
        return Ok(Vec::new());
    }
    let beta_word = crate::ptorus::slope_word(slope);
    let beta = base.eval(&beta_word);
    let beta_axis = beta
        .axis()
        .map_err(|_| BendError::Genericity("bending curve image has no axis".into()))?;
    let z1 = {
        let z = base.eval(xi).apply_halfplane(p0);
        if !(z.im > 0.0) {
            return Err(BendError::NotFuchsian(z.im));
        }
        z
    };
    let arc = GeoArc::new(p0, z1);
    let ball = enumerate_ball(base, p0, radius + 2.0);
    let at_r = crossings_from_ball(&ball, radius, &beta_axis, &beta, &arc)?;
    let at_r2 = crossings_from_ball(&ball, radius + 2.0, &beta_axis, &beta, &arc)?;
    if !crossing_sets_agree(&at_r, &at_r2) {
        return Err(BendError::NotStabilized(radius));
    }
    Ok(at_r2)
}

// ---------------------------------------------------------------------------
// Quakebend by crossings
// ---------------------------------------------------------------------------

/// The bent holonomy of xi as the ordered rotation product
/// R_{g_1}^t ... R_{g_p}^t rho_0(xi), g_1 the crossing closest to the base
/// point.
pub fn quakebend_by_crossings(
    base: &MarkedGroup,
    slope: Slope,
    t: f64,
    xi: &Word,
) -> Result<Isometry, BendError> {
    let crossings = enumerate_crossings(base, slope, xi, DEFAULT_RADIUS)?;
    Ok(rotation_product(base, &crossings, t, xi))
}

/// Applies the rotation product for an already-enumerated crossing list.
pub fn rotation_product(
    base: &MarkedGroup,
    crossings: &[CrossingLift],
    t: f64,
    xi: &Word,
) -> Isometry {
    let mut out = Isometry::identity();
    for c in crossings {
        out = out.compose(&rotation_about(&c.geodesic, CROSSING_SIGN * t));
    }
    out.compose(&base.eval(xi))
}

// ---------------------------------------------------------------------------
// Truncated products with corridor-approximated axes
// ---------------------------------------------------------------------------

/// Diagnostics for one truncation depth.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub r: usize,
    pub truncated: Isometry,
    pub exact: Isometry,
    /// Frobenius distance to the exact product, up to the SL2 sign.
    pub error: f64,
    /// || A_{r+1} - A_r ||.
    pub gap: f64,
    /// Max Frobenius norm over the partial rotation products.
    pub max_prefix_norm: f64,
}

fn disk_angle(b: Boundary) -> f64 {
    // Cayley transform z -> (z - i)/(z + i) sends the real line to the circle
    match b {
        Boundary::Infinity => 0.0,
        Boundary::Finite(z) => ((z - Complex64::i()) / (z + Complex64::i())).arg(),
    }
}

fn from_disk_angle(a: f64) -> Boundary {
    let w = Complex64::from_polar(1.0, a);
    let denom = 1.0 - w;
    if denom.norm() < 1e-9 {
        return Boundary::Infinity;
    }
    let z = Complex64::i() * (1.0 + w) / denom;
    Boundary::real(z.re)
}

fn angular_midpoint(a1: f64, a2: f64) -> f64 {
    a1 + 0.5 * crate::isom3::wrap_angle(a2 - a1)
}

/// Approximate endpoint of the crossing geodesic after developing the lift's
/// periodic word r steps: the angular midpoint of the r-fold images of the
/// corridor's two boundary seeds.  The map is applied point by point (not as
/// a matrix power, whose normalization breaks down at large r).
fn corridor_endpoint(step: &Isometry, r: usize, seed1: Boundary, seed2: Boundary) -> Boundary {
    let mut z1 = seed1;
    let mut z2 = seed2;
    for _ in 0..r {
        z1 = step.apply(z1);
        z2 = step.apply(z2);
    }
    from_disk_angle(angular_midpoint(disk_angle(z1), disk_angle(z2)))
}

fn truncated_product(
    base: &MarkedGroup,
    crossings: &[CrossingLift],
    seeds: (Boundary, Boundary),
    t: f64,
    xi: &Word,
    r: usize,
) -> (Isometry, f64) {
    let mut out = Isometry::identity();
    let mut max_norm = out.frobenius();
    for c in crossings {
        let exact_axis = c.conj.axis().expect("crossing element is loxodromic");
        let to_att = corridor_endpoint(&c.conj, r, seeds.0, seeds.1);
        let to_rep = corridor_endpoint(&c.conj.inverse(), r, seeds.0, seeds.1);
        // match the approximants to the left-oriented exact geodesic
        let (att, rep) = if c.geodesic.attracting.chordal(&exact_axis.attracting) <= 1e-6 {
            (to_att, to_rep)
        } else {
            (to_rep, to_att)
        };
        let approx = OrientedGeodesic::new(att, rep)
            .expect("corridor endpoints separate for loxodromic lifts");
        out = out.compose(&rotation_about(&approx, CROSSING_SIGN * t));
        max_norm = max_norm.max(out.frobenius());
    }
    out = out.compose(&base.eval(xi));
    max_norm = max_norm.max(out.frobenius());
    (out, max_norm)
}

fn sl2_distance(a: &Isometry, b: &Isometry) -> f64 {
    let d1 = a.mat().sub(b.mat()).frobenius();
    let d2 = a.mat().add(b.mat()).frobenius();
    d1.min(d2)
}

/// Rebuilds the rotation product with depth-r corridor approximants for the
/// crossing axes and reports its distance to the exact product.
pub fn truncated_holonomy(
    base: &MarkedGroup,
    slope: Slope,
    t: f64,
    xi: &Word,
    r: usize,
) -> Result<TruncationReport, BendError> {
    let mut reports = truncation_table(base, slope, t, xi, &[r])?;
    Ok(reports.pop().expect("one depth requested"))
}

/// `truncated_holonomy` over a batch of depths, enumerating the crossing set
/// only once.
pub fn truncation_table(
    base: &MarkedGroup,
    slope: Slope,
    t: f64,
    xi: &Word,
    rs: &[usize],
) -> Result<Vec<TruncationReport>, BendError> {
    if let Some(&r) = rs.iter().find(|&&r| r < 1) {
        return Err(BendError::BadDepth(r));
    }
    let crossings = enumerate_crossings(base, slope, xi, DEFAULT_RADIUS)?;
    let p0 = base_point(base, BASE_JITTER)?;
    let arc = GeoArc::new(p0, base.eval(xi).apply_halfplane(p0));
    let seeds = arc.ideal_endpoints();
    let exact = rotation_product(base, &crossings, t, xi);
    let mut out = Vec::with_capacity(rs.len());
    for &r in rs {
        let (a_r, max_prefix_norm) = truncated_product(base, &crossings, seeds, t, xi, r);
        let (a_r1, _) = truncated_product(base, &crossings, seeds, t, xi, r + 1);
        out.push(TruncationReport {
            r,
            truncated: a_r,
            exact,
            error: sl2_distance(&a_r, &exact),
            gap: sl2_distance(&a_r1, &a_r),
            max_prefix_norm,
        });
    }
    Ok(out)
}

impl TruncationReport {
    pub fn csv_header() -> &'static str {
        "r,error,gap,max_prefix_norm"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:.14e},{:.14e},{:.14e}",
            self.r, self.error, self.gap, self.max_prefix_norm
        )
    }
}

// ---------------------------------------------------------------------------
// The C^1-not-C^2 experiment
// ---------------------------------------------------------------------------

/// One grid row of the bent-length table.
#[derive(Debug, Clone)]
pub struct C2Row {
    pub t: f64,
    pub triple: TraceTriple,
    /// Real translation length of rho_t(Y).
    pub l: f64,
    /// Boundary length observable: tanh^2(l/2) on the bent side (t <= 0),
    /// constant on the totally geodesic side (t >= 0).
    pub f: f64,
    /// Set when rho_t(Y) degenerates to an elliptic (|tr| <= 2).
    pub flagged: bool,
}

impl C2Row {
    pub fn csv_header() -> &'static str {
        "t,x_re,x_im,y_re,y_im,z_re,z_im,L,F"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.14e},{},{:.14e},{:.14e}",
            self.t,
            self.triple.to_csv_row(),
            self.l,
            self.f
        )
    }
}

/// Bends the orthogonal Fuchsian group of X-length l_gamma along slope 0 and
/// tabulates traces, the translation length of rho_t(Y), and the boundary
/// length function F.
pub fn c2_experiment(l_gamma: f64, ts: &[f64]) -> Result<Vec<C2Row>, BendError> {
    let base = crate::ptorus::fuchsian_orthogonal(l_gamma)?;
    let f0 = {
        let l0 = length_of_slope(&base, Slope::infinity())?.length;
        (l0 / 2.0).tanh().powi(2)
    };
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let fam = QuakebendFamily { base, slope: Slope::zero(), t };
        let g = quakebend_by_marking(&fam)?;
        let triple = g.trace_triple();
        let flagged = triple.y.im.abs() <= 1e-9 && triple.y.re.abs() <= 2.0;
        let l = match g.y.complex_length() {
            Ok(cl) => cl.length,
            Err(_) => 0.0, // parabolic degeneration: zero translation length
        };
        let f = if t <= 0.0 { (l / 2.0).tanh().powi(2) } else { f0 };
        rows.push(C2Row { t, triple, l, f, flagged });
    }
    Ok(rows)
}

/// The boundary length function F(t) as a scalar callback for the one-sided
/// differentiation toolkit.
pub fn c2_f(l_gamma: f64) -> Result<impl Fn(f64) -> f64, BendError> {
    let base = crate::ptorus::fuchsian_orthogonal(l_gamma)?;
    let f0 = {
        let l0 = length_of_slope(&base, Slope::infinity())?.length;
        (l0 / 2.0).tanh().powi(2)
    };
    Ok(move |t: f64| {
        if t >= 0.0 {
            return f0;
        }
        let fam = QuakebendFamily { base, slope: Slope::zero(), t };
        let g = quakebend_by_marking(&fam).expect("bending preserves the puncture");
        let l = g.y.complex_length().map(|cl| cl.length).unwrap_or(0.0);
        (l / 2.0).tanh().powi(2)
    })
}
