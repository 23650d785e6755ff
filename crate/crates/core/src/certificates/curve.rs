//! Chord-tangent group law on `y² = (a−x)(b−x)(β−x)` in double-double precision.
//!
//! Arithmetic runs on the monic model `u = −x`, where the curve reads
//! `y² = u³ + A₂u² + A₄u + A₆` with `A₂ = a+b+β`, `A₄ = ab+aβ+bβ`, `A₆ = abβ`.

use twofloat::TwoFloat;

use super::CertError;
use crate::dynamics::MagicKind;

/// Residual threshold below which `[n]Q` counts as the identity.
pub const TORSION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: TwoFloat, y: TwoFloat },
}

impl CurvePoint {
    pub fn from_f64(x: f64, y: f64) -> Self {
        CurvePoint::Affine {
            x: TwoFloat::from(x),
            y: TwoFloat::from(y),
        }
    }

    pub fn x(&self) -> Option<TwoFloat> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(*x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    a: f64,
    b: f64,
    beta: f64,
    a2: TwoFloat,
    a4: TwoFloat,
}

impl Curve {
    pub fn new(a: f64, b: f64, beta: f64) -> Self {
        let (ta, tb, tc) = (TwoFloat::from(a), TwoFloat::from(b), TwoFloat::from(beta));
        Self {
            a,
            b,
            beta,
            a2: ta + tb + tc,
            a4: ta * tb + ta * tc + tb * tc,
        }
    }

    /// `(a−x)(b−x)(β−x)` evaluated in extended precision.
    pub fn rhs(&self, x: TwoFloat) -> TwoFloat {
        (TwoFloat::from(self.a) - x)
            * (TwoFloat::from(self.b) - x)
            * (TwoFloat::from(self.beta) - x)
    }

    /// Point with abscissa `x` on the upper branch, if real.
    pub fn lift(&self, x: TwoFloat) -> Option<CurvePoint> {
        let r = self.rhs(x);
        (r >= TwoFloat::from(0.0)).then(|| CurvePoint::Affine { x, y: r.sqrt() })
    }

    /// `Q₀ = (0, +√(abβ))`.
    pub fn q0(&self) -> CurvePoint {
        self.lift(TwoFloat::from(0.0))
            .expect("positive constant term")
    }

    /// The 2-torsion point `Q_b = (b, 0)`.
    pub fn qb(&self) -> CurvePoint {
        CurvePoint::Affine {
            x: TwoFloat::from(self.b),
            y: TwoFloat::from(0.0),
        }
    }

    /// Relative membership defect `|y² − f(x)| / (1 + |y²|)`.
    pub fn membership_residual(&self, p: &CurvePoint) -> f64 {
        match p {
            CurvePoint::Infinity => 0.0,
            CurvePoint::Affine { x, y } => {
                let d = *y * *y - self.rhs(*x);
                let scale = 1.0 + (*y * *y).hi().abs();
                d.hi().abs() / scale
            }
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match *p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x, y: -y },
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let zero = TwoFloat::from(0.0);
        let (u1, u2) = (-x1, -x2);
        let slope = if u1 == u2 {
            if y1 + y2 == zero {
                return CurvePoint::Infinity;
            }
            dd_div(
                TwoFloat::from(3.0) * u1 * u1 + TwoFloat::from(2.0) * self.a2 * u1 + self.a4,
                TwoFloat::from(2.0) * y1,
            )
        } else {
            dd_div(y2 - y1, u2 - u1)
        };
        let u3 = slope * slope - self.a2 - u1 - u2;
        let y3 = slope * (u1 - u3) - y1;
        CurvePoint::Affine { x: -u3, y: y3 }
    }

    /// `[n]P` by double-and-add.
    pub fn mul(&self, p: &CurvePoint, n: u64) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        let mut base = *p;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }
}

/// Double-double quotient by long division.
///
/// The crate's own `TwoFloat / TwoFloat` keeps only about 16 digits, so the
/// quotient is built from two f64 corrections on top of exact products.
fn dd_div(x: TwoFloat, y: TwoFloat) -> TwoFloat {
    let q1 = x.hi() / y.hi();
    let r = x - y * q1;
    let q2 = r.hi() / y.hi();
    let r = r - y * q2;
    let q3 = r.hi() / y.hi();
    TwoFloat::from(q1) + TwoFloat::from(q2) + TwoFloat::from(q3)
}

pub fn ec_add(p: &CurvePoint, q: &CurvePoint, a: f64, b: f64, beta: f64) -> CurvePoint {
    Curve::new(a, b, beta).add(p, q)
}

/// Distance-to-identity residual `1/(1+|x|)`; zero at infinity.
pub fn identity_residual(p: &CurvePoint) -> f64 {
    match p.x() {
        None => 0.0,
        Some(x) => 1.0 / (1.0 + x.hi().abs()),
    }
}

/// Torsion condition residual for `system` and period `n` at caustic `β`.
///
/// Even `n` and odd half-turn test `[n]Q₀ = O`; odd long-axis flips test
/// `[n]Q₀ + Q_b = O`, which is `[n](Q₀ − Q_b)` since `Q_b` has order two.
pub fn torsion_check(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    beta: f64,
) -> Result<f64, CertError> {
    if n == 0 {
        return Err(CertError::InvalidPeriod { n });
    }
    let curve = Curve::new(a, b, beta);
    let q0 = curve.q0();
    let point = if n.is_multiple_of(2) {
        curve.mul(&q0, n as u64)
    } else {
        match system {
            MagicKind::HalfTurn => curve.mul(&q0, n as u64),
            MagicKind::FlipLong => curve.add(&curve.mul(&q0, n as u64), &curve.qb()),
            MagicKind::FlipShort | MagicKind::Identity => {
                return Err(CertError::UnsupportedParity { system, n })
            }
        }
    };
    Ok(identity_residual(&point))
}
