//! Discrete magic-billiard dynamics on an ellipse or a confocal annulus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    caustic_of_line, check_on_conic, normal_at, ray_conic_param, tangent_directions, CausticId,
    ConfocalFamily, Facing, GeometryError, RayHit, RaySide, Vec2,
};

/// Scaled discriminant below which an inner-wall intersection counts as a graze.
pub const GRAZE_DISC: f64 = 1e-12;

/// Default closure tolerance, in units of `√a`.
pub const CLOSURE_REL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("annulus inner parameter must lie in (0, b = {b}), got {lambda}")]
    InvalidInner { lambda: f64, b: f64 },
    #[error("velocity at ({x}, {y}) does not point into the table")]
    NotInward { x: f64, y: f64 },
    #[error("velocity is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("trajectory length must be at least 1")]
    EmptyTrajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MagicKind {
    Identity,
    FlipLong,
    FlipShort,
    HalfTurn,
}

impl MagicKind {
    pub const ALL: [MagicKind; 4] = [
        MagicKind::Identity,
        MagicKind::FlipLong,
        MagicKind::FlipShort,
        MagicKind::HalfTurn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MagicKind::Identity => "identity",
            MagicKind::FlipLong => "flip-long",
            MagicKind::FlipShort => "flip-short",
            MagicKind::HalfTurn => "half-turn",
        }
    }

    /// Sign pattern `(sx, sy)` applied to both position and velocity.
    fn signs(self) -> (f64, f64) {
        match self {
            MagicKind::Identity => (1.0, 1.0),
            MagicKind::FlipLong => (1.0, -1.0),
            MagicKind::FlipShort => (-1.0, 1.0),
            MagicKind::HalfTurn => (-1.0, -1.0),
        }
    }
}

impl std::str::FromStr for MagicKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MagicKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown system '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "shape")]
pub enum TableShape {
    Ellipse,
    Annulus { lambda_inner: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub fam: ConfocalFamily,
    pub shape: TableShape,
    pub outer_map: MagicKind,
}

impl TableSpec {
    pub fn ellipse(fam: ConfocalFamily, outer_map: MagicKind) -> Self {
        Self {
            fam,
            shape: TableShape::Ellipse,
            outer_map,
        }
    }

    pub fn annulus(
        fam: ConfocalFamily,
        lambda_inner: f64,
        outer_map: MagicKind,
    ) -> Result<Self, DynamicsError> {
        if !(lambda_inner > 0.0 && lambda_inner < fam.b()) {
            return Err(DynamicsError::InvalidInner {
                lambda: lambda_inner,
                b: fam.b(),
            });
        }
        Ok(Self {
            fam,
            shape: TableShape::Annulus { lambda_inner },
            outer_map,
        })
    }

    pub fn inner_lambda(&self) -> Option<f64> {
        match self.shape {
            TableShape::Ellipse => None,
            TableShape::Annulus { lambda_inner } => Some(lambda_inner),
        }
    }

    pub fn is_annulus(&self) -> bool {
        self.inner_lambda().is_some()
    }

    /// Family parameter of the conic carrying `component`.
    pub fn conic_of(&self, component: Component) -> f64 {
        match component {
            Component::Outer => 0.0,
            Component::Inner => self.inner_lambda().unwrap_or(0.0),
        }
    }

    /// Unit normal at `p` pointing into the table.
    pub fn inward_normal(&self, component: Component, p: Vec2) -> Result<Vec2, GeometryError> {
        let facing = match component {
            Component::Outer => Facing::Interior,
            Component::Inner => Facing::Exterior,
        };
        normal_at(&self.fam, self.conic_of(component), p, facing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Outer,
    Inner,
}

/// Impact point with outgoing velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPhase {
    pub at: Vec2,
    pub v: Vec2,
    pub component: Component,
}

impl BoundaryPhase {
    pub fn outer(at: Vec2, v: Vec2) -> Self {
        Self {
            at,
            v,
            component: Component::Outer,
        }
    }
}

/// One free flight: from a state's point to the next wall hit, before any magic relocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: Vec2,
    pub to: Vec2,
    pub v: Vec2,
    pub hit: Component,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Crossings {
    pub long_axis: usize,
    pub short_axis: usize,
    pub flips: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `n + 1` states, starting with the initial one.
    pub states: Vec<BoundaryPhase>,
    pub segments: Vec<Segment>,
    pub caustic: CausticId,
    pub crossings: Crossings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub period: usize,
    pub residual: f64,
    pub winding: Option<i64>,
}

/// Result of one step, keeping the intermediate wall hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDetail {
    pub segment: Segment,
    pub next: BoundaryPhase,
}

pub fn reflect_standard(
    fam: &ConfocalFamily,
    lambda_conic: f64,
    p: Vec2,
    v_in: Vec2,
) -> Result<Vec2, GeometryError> {
    let n = normal_at(fam, lambda_conic, p, Facing::Interior)?;
    let w = v_in - n * (2.0 * v_in.dot(n));
    Ok(w.normalized().unwrap_or(w))
}

pub fn apply_magic(kind: MagicKind, p: Vec2, v: Vec2) -> (Vec2, Vec2) {
    let (sx, sy) = kind.signs();
    (Vec2::new(sx * p.x, sy * p.y), Vec2::new(sx * v.x, sy * v.y))
}

/// First wall hit of the ray `p + t v` among the table's active components.
fn first_hit(table: &TableSpec, p: Vec2, v: Vec2) -> Result<(f64, Component), GeometryError> {
    let fam = &table.fam;
    let mut best = match ray_conic_param(fam, 0.0, p, v, RaySide::Inside) {
        RayHit::Hit { t, .. } => Some((t, Component::Outer)),
        RayHit::Miss => None,
    };
    if let Some(li) = table.inner_lambda() {
        if let RayHit::Hit { t, disc } = ray_conic_param(fam, li, p, v, RaySide::Outside) {
            let grazes = disc < GRAZE_DISC;
            if !grazes && best.is_none_or(|(tb, _)| t < tb) {
                best = Some((t, Component::Inner));
            }
        }
    }
    best.ok_or(GeometryError::NoForwardHit {
        x: p.x,
        y: p.y,
        lambda: 0.0,
    })
}

/// Checks that `s` is a valid phase of `table`.
pub fn validate_phase(table: &TableSpec, s: &BoundaryPhase) -> Result<(), DynamicsError> {
    let norm = s.v.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(DynamicsError::NotUnit { norm });
    }
    check_on_conic(&table.fam, table.conic_of(s.component), s.at)?;
    let n = table.inward_normal(s.component, s.at)?;
    if s.v.dot(n) <= 1e-12 {
        return Err(DynamicsError::NotInward {
            x: s.at.x,
            y: s.at.y,
        });
    }
    Ok(())
}

pub fn step_detailed(table: &TableSpec, s: &BoundaryPhase) -> Result<StepDetail, DynamicsError> {
    let (t, comp) = first_hit(table, s.at, s.v)?;
    let q = s.at + s.v * t;
    let w = reflect_standard(&table.fam, table.conic_of(comp), q, s.v)?;
    let (at, v) = match comp {
        Component::Outer => apply_magic(table.outer_map, q, w),
        Component::Inner => (q, w),
    };
    Ok(StepDetail {
        segment: Segment {
            from: s.at,
            to: q,
            v: s.v,
            hit: comp,
        },
        next: BoundaryPhase {
            at,
            v,
            component: comp,
        },
    })
}

pub fn step(table: &TableSpec, s: &BoundaryPhase) -> Result<BoundaryPhase, DynamicsError> {
    Ok(step_detailed(table, s)?.next)
}

/// Inverse of [`step`].
pub fn step_back(table: &TableSpec, s: &BoundaryPhase) -> Result<BoundaryPhase, DynamicsError> {
    let (q, w) = match s.component {
        Component::Outer => apply_magic(table.outer_map, s.at, s.v),
        Component::Inner => (s.at, s.v),
    };
    let v_in = reflect_standard(&table.fam, table.conic_of(s.component), q, w)?;
    let (t, comp) = first_hit(table, q, -v_in)?;
    Ok(BoundaryPhase {
        at: q - v_in * t,
        v: v_in,
        component: comp,
    })
}

fn count_crossings(seg: &Segment, table: &TableSpec, c: &mut Crossings) {
    if seg.from.y * seg.to.y < 0.0 {
        c.long_axis += 1;
    }
    if seg.from.x * seg.to.x < 0.0 {
        c.short_axis += 1;
    }
    if seg.hit == Component::Outer && table.outer_map != MagicKind::Identity {
        c.flips += 1;
    }
}

pub fn trajectory(
    table: &TableSpec,
    s0: BoundaryPhase,
    n: usize,
) -> Result<Trajectory, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::EmptyTrajectory);
    }
    let caustic = caustic_of_line(&table.fam, s0.at, s0.v)?;
    let mut states = Vec::with_capacity(n + 1);
    let mut segments = Vec::with_capacity(n);
    let mut crossings = Crossings::default();
    states.push(s0);
    let mut s = s0;
    for _ in 0..n {
        let d = step_detailed(table, &s)?;
        count_crossings(&d.segment, table, &mut crossings);
        segments.push(d.segment);
        states.push(d.next);
        s = d.next;
    }
    Ok(Trajectory {
        states,
        segments,
        caustic,
        crossings,
    })
}

/// Phase-space distance: position offset over `√a` plus the angle between velocities.
pub fn phase_distance(fam: &ConfocalFamily, s: &BoundaryPhase, t: &BoundaryPhase) -> f64 {
    if s.component != t.component {
        return f64::INFINITY;
    }
    (s.at - t.at).norm() / fam.a().sqrt() + s.v.angle_to(t.v)
}

pub fn default_closure_tol(fam: &ConfocalFamily) -> f64 {
    CLOSURE_REL_TOL * fam.a().sqrt()
}

/// Smallest `n ≤ n_max` returning to `s0` within `tol`.
pub fn detect_closure(
    table: &TableSpec,
    s0: BoundaryPhase,
    n_max: usize,
    tol: f64,
) -> Option<ClosureReport> {
    let mut s = s0;
    let mut turn = 0.0;
    for k in 1..=n_max {
        let d = step_detailed(table, &s).ok()?;
        turn += polar_increment(d.segment.from, d.segment.to);
        s = d.next;
        let residual = phase_distance(&table.fam, &s, &s0);
        if residual < tol {
            let winding = winding_number(table, &s0, turn);
            return Some(ClosureReport {
                period: k,
                residual,
                winding,
            });
        }
    }
    None
}

/// Phase distance between `s0` and its image after exactly `n` steps.
pub fn closure_residual(
    table: &TableSpec,
    s0: BoundaryPhase,
    n: usize,
) -> Result<f64, DynamicsError> {
    let mut s = s0;
    for _ in 0..n {
        s = step(table, &s)?;
    }
    Ok(phase_distance(&table.fam, &s, &s0))
}

/// Signed polar-angle increment along the straight segment `p → q`.
pub fn polar_increment(p: Vec2, q: Vec2) -> f64 {
    p.cross(q).atan2(p.dot(q))
}

fn winding_number(table: &TableSpec, s0: &BoundaryPhase, turn: f64) -> Option<i64> {
    let c = caustic_of_line(&table.fam, s0.at, s0.v).ok()?;
    if c.kind != crate::geometry::CausticKind::Ellipse {
        return None;
    }
    let w = turn / std::f64::consts::TAU;
    let r = w.round();
    ((w - r).abs() < 0.01).then_some(r as i64)
}

/// Outer-boundary phase at eccentric parameter `theta` tangent to `C_β`.
///
/// `branch` picks one of the two tangent lines; the direction is oriented
/// into the table. Returns `None` when no tangent exists at that point.
pub fn launch(table: &TableSpec, beta: f64, theta: f64, branch: usize) -> Option<BoundaryPhase> {
    let fam = &table.fam;
    let p = fam.boundary_point(theta);
    let dirs = tangent_directions(fam, beta, p)?;
    let n = table.inward_normal(Component::Outer, p).ok()?;
    let d = dirs[branch % 2];
    let d = if d.dot(n) < 0.0 { -d } else { d };
    (d.dot(n) > 1e-12).then_some(BoundaryPhase::outer(p, d))
}

/// Eccentric parameter of an outer-boundary point on some trajectory tangent to `C_β`.
///
/// For a hyperbolic caustic the point is chosen where `λ₂ = (β + a)/2`, well
/// inside the admissible arc.
pub fn admissible_theta(fam: &ConfocalFamily, beta: f64) -> f64 {
    if beta > fam.b() {
        let l2 = 0.5 * (beta + fam.a());
        ((l2 - fam.b()) / (fam.a() - fam.b())).sqrt().asin()
    } else {
        0.7
    }
}

/// A generic phase tangent to `C_β`, launched from the outer boundary.
pub fn launch_tangent(table: &TableSpec, beta: f64) -> Option<BoundaryPhase> {
    launch(table, beta, admissible_theta(&table.fam, beta), 0)
}
