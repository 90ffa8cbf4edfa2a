//! Orientation-preserving isometries of hyperbolic 3-space as unit-determinant
//! 2x2 complex matrices, with rotations about oriented geodesics, complex
//! translation lengths, and the subsequence-product perturbation bound.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

pub const DET_TOL: f64 = 1e-12;
pub const PARABOLIC_TOL: f64 = 1e-9;
pub const ENDPOINT_SEP_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum IsomError {
    #[error("matrix determinant {0} too close to zero")]
    SingularMatrix(f64),
    #[error("geodesic endpoints too close (chordal separation {0:.3e})")]
    DegenerateGeodesic(f64),
    #[error("operation undefined for {0:?} isometry")]
    BadClass(ClassKind),
    #[error("perturbation list length {0} does not match matrix list length {1}")]
    LengthMismatch(usize, usize),
}

/// Plain 2x2 complex matrix, not necessarily unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(1.0.into(), 0.0.into(), 0.0.into(), 1.0.into())
    }

    pub fn zero() -> Self {
        Mat2::new(0.0.into(), 0.0.into(), 0.0.into(), 0.0.into())
    }

    pub fn from_reals(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn scale(&self, k: Complex64) -> Mat2 {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn neg(&self) -> Mat2 {
        self.scale((-1.0).into())
    }

    /// Frobenius norm. Submultiplicative, which is all Lemma-8-style bounds need.
    pub fn frobenius(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }
}

/// Boundary point of hyperbolic 3-space: the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Finite(Complex64),
    Infinity,
}

impl Boundary {
    pub fn finite(re: f64, im: f64) -> Self {
        Boundary::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        Boundary::finite(x, 0.0)
    }

    /// Chordal distance on the Riemann sphere.
    pub fn chordal(&self, other: &Boundary) -> f64 {
        match (self, other) {
            (Boundary::Infinity, Boundary::Infinity) => 0.0,
            (Boundary::Finite(z), Boundary::Infinity) | (Boundary::Infinity, Boundary::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (Boundary::Finite(z), Boundary::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }
}

/// Orientation-preserving isometry of H^3, stored as a unit-determinant matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: Mat2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Classification of an isometry by tr^2, with the distance of tr^2 from the
/// parabolic boundary value 4 as a margin.
#[derive(Debug, Clone, Copy)]
pub struct IsometryClass {
    pub kind: ClassKind,
    pub margin: f64,
}

/// Oriented geodesic of H^3, named by its ideal endpoints.
#[derive(Debug, Clone, Copy)]
pub struct OrientedGeodesic {
    pub attracting: Boundary,
    pub repelling: Boundary,
}

impl OrientedGeodesic {
    pub fn new(attracting: Boundary, repelling: Boundary) -> Result<Self, IsomError> {
        let sep = attracting.chordal(&repelling);
        if sep < ENDPOINT_SEP_TOL {
            return Err(IsomError::DegenerateGeodesic(sep));
        }
        Ok(OrientedGeodesic { attracting, repelling })
    }

    pub fn reversed(&self) -> OrientedGeodesic {
        OrientedGeodesic {
            attracting: self.repelling,
            repelling: self.attracting,
        }
    }

    /// An isometry sending (attracting, repelling) to (0, infinity).
    pub fn to_standard(&self) -> Isometry {
        // z -> (z - att)/(z - rep), scaled to unit determinant.
        let m = match (self.attracting, self.repelling) {
            (Boundary::Finite(p), Boundary::Finite(q)) => {
                Mat2::new(1.0.into(), -p, 1.0.into(), -q)
            }
            (Boundary::Finite(p), Boundary::Infinity) => {
                Mat2::new(1.0.into(), -p, 0.0.into(), 1.0.into())
            }
            (Boundary::Infinity, Boundary::Finite(q)) => {
                Mat2::new(0.0.into(), 1.0.into(), 1.0.into(), -q)
            }
            (Boundary::Infinity, Boundary::Infinity) => unreachable!("validated distinct"),
        };
        Isometry::from_mat(m).expect("endpoint separation keeps this nonsingular")
    }
}

/// Complex translation length: real length plus rotation angle.
#[derive(Debug, Clone, Copy)]
pub struct ComplexLength {
    pub length: f64,
    pub angle: f64,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: Mat2::identity() }
    }

    /// Normalizes to unit determinant; errors on (near-)singular input.
    pub fn from_mat(m: Mat2) -> Result<Self, IsomError> {
        let det = m.det();
        if det.norm() < 1e-100 {
            return Err(IsomError::SingularMatrix(det.norm()));
        }
        let s = det.sqrt();
        let mut m = m.scale(s.inv());
        // second pass: with entries of very different magnitudes (geodesics
        // with one endpoint near infinity) a single normalization can drift
        m = m.scale(m.det().sqrt().inv());
        let f = m.frobenius();
        debug_assert!(
            (m.det() - Complex64::new(1.0, 0.0)).norm() <= 1e-10 + 1e-14 * f * f,
            "determinant drift for matrix of norm {f}"
        );
        Ok(Isometry { m })
    }

    pub fn from_reals(a: f64, b: f64, c: f64, d: f64) -> Result<Self, IsomError> {
        Isometry::from_mat(Mat2::from_reals(a, b, c, d))
    }

    pub fn diagonal(lam: Complex64) -> Self {
        Isometry {
            m: Mat2::new(lam, 0.0.into(), 0.0.into(), lam.inv()),
        }
    }

    pub fn mat(&self) -> &Mat2 {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Trace normalized to the SL2 representative with Re >= 0, ties broken by Im >= 0.
    pub fn trace_normalized(&self) -> Complex64 {
        normalize_trace(self.m.trace())
    }

    pub fn inverse(&self) -> Isometry {
        // unit determinant: inverse is the adjugate
        Isometry {
            m: Mat2::new(self.m.d, -self.m.b, -self.m.c, self.m.a),
        }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        let m = self.m.mul(&other.m);
        // renormalize against rounding drift in long products
        let s = m.det().sqrt();
        Isometry { m: m.scale(s.inv()) }
    }

    /// Moebius action on the boundary sphere.
    pub fn apply(&self, z: Boundary) -> Boundary {
        let Mat2 { a, b, c, d } = self.m;
        match z {
            Boundary::Infinity => {
                if c.norm() < 1e-14 {
                    Boundary::Infinity
                } else {
                    Boundary::Finite(a / c)
                }
            }
            Boundary::Finite(z) => {
                let den = c * z + d;
                if den.norm() < 1e-14 {
                    Boundary::Infinity
                } else {
                    Boundary::Finite((a * z + b) / den)
                }
            }
        }
    }

    /// Action on the upper half-plane, valid for real-entry (Fuchsian) isometries.
    pub fn apply_halfplane(&self, z: Complex64) -> Complex64 {
        let Mat2 { a, b, c, d } = self.m;
        (a * z + b) / (c * z + d)
    }

    pub fn frobenius(&self) -> f64 {
        self.m.frobenius()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let i = Mat2::identity();
        self.m.sub(&i).frobenius() <= tol || self.m.add(&i).frobenius() <= tol
    }

    pub fn classify(&self) -> IsometryClass {
        let t2 = self.trace() * self.trace();
        // margin: distance of tr^2 from the decision point 4 on the real axis
        let margin = (t2 - Complex64::new(4.0, 0.0)).norm();
        if self.is_identity(PARABOLIC_TOL) {
            return IsometryClass { kind: ClassKind::Identity, margin };
        }
        if margin <= PARABOLIC_TOL {
            return IsometryClass { kind: ClassKind::Parabolic, margin };
        }
        if t2.im.abs() <= PARABOLIC_TOL && t2.re >= 0.0 && t2.re < 4.0 {
            return IsometryClass { kind: ClassKind::Elliptic, margin };
        }
        IsometryClass { kind: ClassKind::Loxodromic, margin }
    }

    /// Boundary fixed points of a non-parabolic, non-identity isometry, oriented
    /// toward the attracting endpoint (elliptics: the endpoint about which the
    /// boundary derivative has argument in (0, pi]).
    pub fn axis(&self) -> Result<OrientedGeodesic, IsomError> {
        let class = self.classify();
        match class.kind {
            ClassKind::Identity | ClassKind::Parabolic => return Err(IsomError::BadClass(class.kind)),
            _ => {}
        }
        let Mat2 { a, b, c, d } = self.m;
        let elliptic = class.kind == ClassKind::Elliptic;
        let (p1, p2, attracting_first) = if c.norm() < 1e-13 {
            // fixed points: infinity and b/(d-a)
            if (d - a).norm() < 1e-13 {
                return Err(IsomError::BadClass(ClassKind::Parabolic));
            }
            let fin = Boundary::Finite(b / (d - a));
            // boundary derivative at infinity (chart w = 1/z) is a^{-2}
            let first = if elliptic { true } else { a.norm() > 1.0 };
            (Boundary::Infinity, fin, first)
        } else {
            // c z^2 + (d-a) z - b = 0
            let disc = ((d - a) * (d - a) + 4.0 * c * b).sqrt();
            let z1 = ((a - d) + disc) / (2.0 * c);
            let z2 = ((a - d) - disc) / (2.0 * c);
            // boundary derivative at z is (cz+d)^{-2}; attracting where it contracts.
            // Elliptics have unit multipliers; take the principal root deterministically
            // so the reported rotation angle is reproducible.
            let first = if elliptic { true } else { (c * z1 + d).norm() > 1.0 };
            (Boundary::Finite(z1), Boundary::Finite(z2), first)
        };
        let (att, rep) = if attracting_first { (p1, p2) } else { (p2, p1) };
        OrientedGeodesic::new(att, rep)
    }

    /// Complex translation length (l, theta) with 2 cosh((l + i theta)/2) = +-tr,
    /// l >= 0, theta in (-pi, pi]. The angle sign is read off the diagonalization
    /// against the oriented axis, so pure rotations report their signed angle.
    pub fn complex_length(&self) -> Result<ComplexLength, IsomError> {
        let axis = self.axis()?;
        let std = axis.to_standard();
        let diag = std.compose(self).compose(&std.inverse());
        // conjugated matrix fixes 0 and infinity: diag(lam, 1/lam) with the
        // attracting endpoint at 0, so |lam| <= 1 for loxodromics and the
        // translation toward the attracting endpoint has length -2 ln|lam|.
        let lam = diag.m.a;
        let l = -2.0 * lam.norm().ln();
        let theta = wrap_angle(-2.0 * lam.arg());
        Ok(ComplexLength {
            length: l.max(0.0),
            angle: theta,
        })
    }
}

/// Wrap an angle to (-pi, pi].
pub fn wrap_angle(t: f64) -> f64 {
    let mut t = t % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Sign-normalize an SL2 trace: Re >= 0, ties broken by Im >= 0.
pub fn normalize_trace(t: Complex64) -> Complex64 {
    if t.re > 0.0 || (t.re == 0.0 && t.im >= 0.0) {
        t
    } else {
        -t
    }
}

/// Rotation of the given angle about an oriented geodesic; fixes the geodesic
/// pointwise and satisfies rotation_about((0, inf), b) = diag(e^{ib/2}, e^{-ib/2}).
pub fn rotation_about(g: &OrientedGeodesic, angle: f64) -> Isometry {
    let std = g.to_standard();
    let half = Complex64::new(0.0, angle / 2.0).exp();
    let d = Isometry::diagonal(half);
    std.inverse().compose(&d).compose(&std)
}

/// Spectral norm (largest singular value): the submultiplicative unital norm
/// used by the product perturbation bound.  For a 2x2 matrix the singular
/// values come from the closed-form eigenvalues of A*A.
pub fn spectral_norm(m: &Mat2) -> f64 {
    // sigma1^2 + sigma2^2, summed without a sqrt round-trip
    let t = m.a.norm_sqr() + m.b.norm_sqr() + m.c.norm_sqr() + m.d.norm_sqr();
    let d = m.det().norm(); // sigma1 * sigma2
    (0.5 * (t + (t * t - 4.0 * d * d).max(0.0).sqrt())).sqrt()
}

/// Spectral norm of an isometry.
pub fn operator_norm(f: &Isometry) -> f64 {
    spectral_norm(f.mat())
}

/// Left-hand and right-hand sides of the subsequence-product perturbation bound:
/// lhs = ||prod(A_i + eps_i) - prod(A_i)||, rhs = R(e^{nRE} - 1) with R the max
/// spectral norm over all strictly increasing subsequence products (empty
/// product included, so R >= 1) and E = max_i ||eps_i||.
pub fn product_perturbation_gap(a: &[Mat2], eps: &[Mat2]) -> Result<(f64, f64), IsomError> {
    if a.len() != eps.len() {
        return Err(IsomError::LengthMismatch(eps.len(), a.len()));
    }
    let n = a.len();
    assert!(n >= 1 && n <= 20, "subsequence exhaustion needs 1 <= n <= 20");
    let mut exact = Mat2::identity();
    let mut perturbed = Mat2::identity();
    for i in 0..n {
        exact = exact.mul(&a[i]);
        perturbed = perturbed.mul(&a[i].add(&eps[i]));
    }
    let lhs = spectral_norm(&perturbed.sub(&exact));

    let mut r: f64 = 1.0; // empty product
    for mask in 1u32..(1u32 << n) {
        let mut p = Mat2::identity();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                p = p.mul(&a[i]);
            }
        }
        r = r.max(spectral_norm(&p));
    }
    let e = eps.iter().map(spectral_norm).fold(0.0_f64, f64::max);
    let rhs = r * (n as f64 * r * e).exp_m1();
    Ok((lhs, rhs))
}
