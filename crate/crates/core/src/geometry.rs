//! Planar geometry of an ellipse and its confocal family.
//!
//! The boundary ellipse is `x²/a + y²/b = 1` with `a > b > 0`, and the confocal
//! family is `C_λ : x²/(a−λ) + y²/(b−λ) = 1`. Every length-squared quantity is
//! kept in the units of the input `(a, b)`; nothing is normalised to `a = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used to classify a family parameter as degenerate.
pub const DEGENERATE_REL_TOL: f64 = 1e-9;

/// Relative tolerance for "this point lies on that conic".
pub const ON_CONIC_REL_TOL: f64 = 1e-8;

/// Forward-ray escape distance, in units of `√a`.
pub const RAY_ESCAPE_REL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid confocal family: need a > b > 0, got a = {a}, b = {b}")]
    InvalidFamily { a: f64, b: f64 },
    #[error("elliptic coordinates are undefined at the centre")]
    CenterDegenerate,
    #[error("point ({x}, {y}) lies outside the boundary ellipse")]
    OutsideBoundary { x: f64, y: f64 },
    #[error(
        "point ({x}, {y}) is not on the conic with parameter {lambda} (residual {residual:e})"
    )]
    NotOnConic {
        x: f64,
        y: f64,
        lambda: f64,
        residual: f64,
    },
    #[error("ray from ({x}, {y}) has no forward intersection with the conic {lambda}")]
    NoForwardHit { x: f64, y: f64, lambda: f64 },
    #[error("conic parameter {lambda} is outside the ellipse range (λ < b)")]
    NotAnEllipse { lambda: f64 },
    #[error("zero direction vector")]
    ZeroDirection,
}

/// A point or a vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(Self::new(self.x / n, self.y / n))
        } else {
            None
        }
    }

    /// Unsigned angle to `other`, in `[0, π]`.
    pub fn angle_to(self, other: Self) -> f64 {
        self.cross(other).abs().atan2(self.dot(other))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The boundary ellipse `x²/a + y²/b = 1` together with its confocal family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfocalFamily {
    a: f64,
    b: f64,
}

impl ConfocalFamily {
    pub fn new(a: f64, b: f64) -> Result<Self, GeometryError> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a > b) {
            return Err(GeometryError::InvalidFamily { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a.sqrt(), self.b.sqrt())
    }

    /// Distance from the centre to either focus.
    pub fn focal_distance(&self) -> f64 {
        (self.a - self.b).sqrt()
    }

    pub fn foci(&self) -> [Vec2; 2] {
        let c = self.focal_distance();
        [Vec2::new(-c, 0.0), Vec2::new(c, 0.0)]
    }

    /// Absolute tolerance for degenerate-parameter classification.
    pub fn degenerate_tol(&self) -> f64 {
        DEGENERATE_REL_TOL * self.a
    }

    /// `x²/(a−λ) + y²/(b−λ) − 1`, a dimensionless residual.
    pub fn conic_residual(&self, lambda: f64, p: Vec2) -> f64 {
        p.x * p.x / (self.a - lambda) + p.y * p.y / (self.b - lambda) - 1.0
    }

    pub fn classify(&self, lambda: f64) -> CausticKind {
        let tol = self.degenerate_tol();
        if lambda.abs() < tol || lambda < 0.0 {
            CausticKind::DegenerateBoundary
        } else if (lambda - self.b).abs() < tol {
            CausticKind::DegenerateFocal
        } else if (lambda - self.a).abs() < tol || lambda > self.a {
            CausticKind::DegenerateShortAxis
        } else if lambda < self.b {
            CausticKind::Ellipse
        } else {
            CausticKind::Hyperbola
        }
    }

    pub fn caustic(&self, lambda: f64) -> CausticId {
        CausticId {
            lambda,
            kind: self.classify(lambda),
        }
    }

    /// Point of the boundary ellipse at eccentric-anomaly parameter `theta`.
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        let (sa, sb) = self.semi_axes();
        Vec2::new(sa * theta.cos(), sb * theta.sin())
    }

    /// Point of the confocal ellipse `C_λ` (λ < b) at parameter `theta`.
    pub fn conic_point(&self, lambda: f64, theta: f64) -> Vec2 {
        Vec2::new(
            (self.a - lambda).sqrt() * theta.cos(),
            (self.b - lambda).sqrt() * theta.sin(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausticKind {
    Ellipse,
    Hyperbola,
    DegenerateBoundary,
    DegenerateFocal,
    DegenerateShortAxis,
}

impl CausticKind {
    pub fn is_regular(self) -> bool {
        matches!(self, CausticKind::Ellipse | CausticKind::Hyperbola)
    }
}

/// A caustic parameter with its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausticId {
    pub lambda: f64,
    pub kind: CausticKind,
}

/// Elliptic coordinates `λ1 ≤ b ≤ λ2 ≤ a` of a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticCoords {
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Sign pair lost by the passage to elliptic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrant {
    pub x_negative: bool,
    pub y_negative: bool,
}

impl Quadrant {
    pub fn of(p: Vec2) -> Self {
        Self {
            x_negative: p.x.is_sign_negative(),
            y_negative: p.y.is_sign_negative(),
        }
    }
}

/// Which side of a conic a normal should face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Facing {
    /// Towards the region enclosed by the conic (outer table wall).
    Interior,
    /// Away from the enclosed region (inner annulus wall).
    Exterior,
}

pub fn to_elliptic(fam: &ConfocalFamily, p: Vec2) -> Result<EllipticCoords, GeometryError> {
    if p.norm() < 1e-12 {
        return Err(GeometryError::CenterDegenerate);
    }
    let (a, b) = (fam.a, fam.b);
    let (x2, y2) = (p.x * p.x, p.y * p.y);
    // λ² − sλ + q = 0 with a non-negative discriminant written as a sum of squares
    let s = a + b - x2 - y2;
    let q = a * b - b * x2 - a * y2;
    let d = a - b - x2 + y2;
    let disc = d * d + 4.0 * x2 * y2;
    let lambda2 = 0.5 * (s + disc.sqrt());
    let lambda1 = if lambda2 > 0.0 {
        q / lambda2
    } else {
        0.5 * (s - disc.sqrt())
    };
    if lambda1 < -fam.degenerate_tol() {
        return Err(GeometryError::OutsideBoundary { x: p.x, y: p.y });
    }
    Ok(EllipticCoords { lambda1, lambda2 })
}

pub fn from_elliptic(fam: &ConfocalFamily, c: EllipticCoords, quadrant: Quadrant) -> Vec2 {
    let (a, b) = (fam.a, fam.b);
    let x2 = ((a - c.lambda1) * (a - c.lambda2) / (a - b)).max(0.0);
    let y2 = ((b - c.lambda1) * (c.lambda2 - b) / (a - b)).max(0.0);
    let x = if quadrant.x_negative {
        -x2.sqrt()
    } else {
        x2.sqrt()
    };
    let y = if quadrant.y_negative {
        -y2.sqrt()
    } else {
        y2.sqrt()
    };
    Vec2::new(x, y)
}

/// Parameter λ of the confocal conic tangent to the line through `p` along `v`.
///
/// Uses `λ = a·v_y² + b·v_x² − (p × v)²` for unit `v`, which covers vertical
/// lines (`λ = a − c²`) without a slope.
pub fn caustic_of_line(fam: &ConfocalFamily, p: Vec2, v: Vec2) -> Result<CausticId, GeometryError> {
    let u = v.normalized().ok_or(GeometryError::ZeroDirection)?;
    let m = p.cross(u);
    let lambda = fam.a * u.y * u.y + fam.b * u.x * u.x - m * m;
    Ok(fam.caustic(lambda))
}

/// Outcome of intersecting a forward ray with a conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RayHit {
    Miss,
    Hit { t: f64, disc: f64 },
}

/// Which side of the conic the ray travels on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RaySide {
    /// Starts inside or on the conic; the exit point is the far root.
    Inside,
    /// Starts outside or on the conic; the entry point is the near root.
    Outside,
}

/// Ray parameter of the hit of `p + t·v` with `C_λ`, restricted to `t > t_min`.
///
/// `disc` is the discriminant of the quadratic in the dimensionless time
/// `t/√a`, so grazing tests can use a scale-free threshold.
pub(crate) fn ray_conic_param(
    fam: &ConfocalFamily,
    lambda: f64,
    p: Vec2,
    v: Vec2,
    side: RaySide,
) -> RayHit {
    let (al, bl) = (fam.a - lambda, fam.b - lambda);
    let qa = v.x * v.x / al + v.y * v.y / bl;
    let qb = p.x * v.x / al + p.y * v.y / bl;
    let qc = p.x * p.x / al + p.y * p.y / bl - 1.0;
    let disc = qb * qb - qa * qc;
    if disc < 0.0 || qa <= 0.0 {
        return RayHit::Miss;
    }
    let root = disc.sqrt();
    // stable pair of roots of qa t² + 2 qb t + qc = 0
    let q = -(qb + root.copysign(qb));
    let (t1, t2) = if q != 0.0 {
        (q / qa, qc / q)
    } else {
        (0.0, 0.0)
    };
    let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let t_min = RAY_ESCAPE_REL * fam.a.sqrt();
    let disc = disc * fam.a;
    let t = match side {
        RaySide::Inside => hi,
        RaySide::Outside => lo,
    };
    if t > t_min {
        RayHit::Hit { t, disc }
    } else {
        RayHit::Miss
    }
}

/// Exit point of the ray `p + t·v` (`t > 1e-10·√a`) from the ellipse `C_λ`, for `p` inside or on it.
pub fn ray_boundary_hit(
    fam: &ConfocalFamily,
    lambda_conic: f64,
    p: Vec2,
    v: Vec2,
) -> Result<Vec2, GeometryError> {
    if lambda_conic >= fam.b {
        return Err(GeometryError::NotAnEllipse {
            lambda: lambda_conic,
        });
    }
    let u = v.normalized().ok_or(GeometryError::ZeroDirection)?;
    match ray_conic_param(fam, lambda_conic, p, u, RaySide::Inside) {
        RayHit::Hit { t, .. } => Ok(p + u * t),
        RayHit::Miss => Err(GeometryError::NoForwardHit {
            x: p.x,
            y: p.y,
            lambda: lambda_conic,
        }),
    }
}

/// Unit normal to `C_λ` at `p`, facing the requested side.
pub fn normal_at(
    fam: &ConfocalFamily,
    lambda_conic: f64,
    p: Vec2,
    facing: Facing,
) -> Result<Vec2, GeometryError> {
    check_on_conic(fam, lambda_conic, p)?;
    let grad = Vec2::new(p.x / (fam.a - lambda_conic), p.y / (fam.b - lambda_conic));
    let outward = grad.normalized().ok_or(GeometryError::CenterDegenerate)?;
    Ok(match facing {
        Facing::Interior => -outward,
        Facing::Exterior => outward,
    })
}

pub(crate) fn check_on_conic(
    fam: &ConfocalFamily,
    lambda: f64,
    p: Vec2,
) -> Result<(), GeometryError> {
    let residual = fam.conic_residual(lambda, p);
    if residual.abs() > ON_CONIC_REL_TOL || !residual.is_finite() {
        return Err(GeometryError::NotOnConic {
            x: p.x,
            y: p.y,
            lambda,
            residual,
        });
    }
    Ok(())
}

/// Unit directions of the two lines through `p` tangent to `C_β`.
///
/// Returns `None` when no real tangent exists (e.g. `p` strictly inside an
/// ellipse caustic, or outside the region between hyperbola branches).
pub fn tangent_directions(fam: &ConfocalFamily, beta: f64, p: Vec2) -> Option<[Vec2; 2]> {
    // null cone of the quadratic form (p × v)² − (a−β)v_y² − (b−β)v_x²
    let m11 = p.y * p.y - (fam.b - beta);
    let m22 = p.x * p.x - (fam.a - beta);
    let m12 = -p.x * p.y;
    let half_tr = 0.5 * (m11 + m22);
    let half_gap = (0.25 * (m11 - m22) * (m11 - m22) + m12 * m12).sqrt();
    let mu1 = half_tr - half_gap;
    let mu2 = half_tr + half_gap;
    if mu1 > 0.0 || mu2 < 0.0 {
        return None;
    }
    let cand1 = Vec2::new(m12, mu1 - m11);
    let cand2 = Vec2::new(mu1 - m22, m12);
    let e1 = if cand1.norm() >= cand2.norm() {
        cand1
    } else {
        cand2
    };
    let e1 = e1.normalized().unwrap_or(Vec2::new(1.0, 0.0));
    let e2 = Vec2::new(-e1.y, e1.x);
    let (s1, s2) = (mu2.max(0.0).sqrt(), (-mu1).max(0.0).sqrt());
    let d1 = (e1 * s1 + e2 * s2).normalized()?;
    let d2 = (e1 * s1 - e2 * s2).normalized()?;
    Some([d1, d2])
}
