//! Closed orbits, separatrices and atoms on the three singular levels.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::classify::classify_level;
use super::labels::{micro_label, MicroLabel};
use super::TopologyError;
use crate::dynamics::{
    phase_distance, step, step_back, step_detailed, BoundaryPhase, Component, TableSpec,
};
use crate::geometry::{ray_boundary_hit, Vec2};

/// Angular offset of focal seeds from the long axis.
pub const FOCAL_OFFSET: f64 = 1e-4;
/// Maximum steps while waiting for a focal trajectory to settle.
pub const SEPARATRIX_STEPS: usize = 1000;
/// Phase distance at which a trajectory counts as arrived at a closed orbit.
const ARRIVAL_TOL: f64 = 1e-6;
/// Trailing segments summarised in an asymptotic label.
const TAIL: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SingularLevel {
    /// `λ = 0`, the boundary itself.
    #[serde(rename = "0")]
    Boundary,
    /// `λ = b`, lines through the foci.
    #[serde(rename = "b")]
    Focal,
    /// `λ = a`, the short axis.
    #[serde(rename = "a")]
    ShortAxis,
}

impl SingularLevel {
    pub const ALL: [SingularLevel; 3] = [
        SingularLevel::Boundary,
        SingularLevel::Focal,
        SingularLevel::ShortAxis,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SingularLevel::Boundary => "0",
            SingularLevel::Focal => "b",
            SingularLevel::ShortAxis => "a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomType {
    A,
    B,
    #[serde(rename = "A**")]
    AStarStar,
    #[serde(rename = "C2")]
    C2,
}

impl AtomType {
    /// Atom with the given numbers of closed orbits and separatrices.
    pub fn lookup(closed: usize, separatrices: usize) -> Option<AtomType> {
        match (closed, separatrices) {
            (1, 0) => Some(AtomType::A),
            (1, 2) => Some(AtomType::B),
            (2, 2) => Some(AtomType::AStarStar),
            (2, 4) => Some(AtomType::C2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularReport {
    pub level: SingularLevel,
    pub closed_orbits: usize,
    pub separatrices: usize,
    /// One atom per connected singular fibre.
    pub atoms: Vec<AtomType>,
}

fn canonical_states(table: &TableSpec, level: SingularLevel) -> Vec<BoundaryPhase> {
    let fam = &table.fam;
    let (sa, sb) = fam.semi_axes();
    let phase = |x: f64, y: f64, vx: f64, vy: f64, c: Component| BoundaryPhase {
        at: Vec2::new(x, y),
        v: Vec2::new(vx, vy),
        component: c,
    };
    let inner = table.inner_lambda();
    match level {
        SingularLevel::ShortAxis => {
            let mut v = vec![
                phase(0.0, sb, 0.0, -1.0, Component::Outer),
                phase(0.0, -sb, 0.0, 1.0, Component::Outer),
            ];
            if let Some(li) = inner {
                let si = (fam.b() - li).sqrt();
                v.push(phase(0.0, si, 0.0, 1.0, Component::Inner));
                v.push(phase(0.0, -si, 0.0, -1.0, Component::Inner));
            }
            v
        }
        SingularLevel::Focal | SingularLevel::Boundary => {
            let mut v = vec![
                phase(-sa, 0.0, 1.0, 0.0, Component::Outer),
                phase(sa, 0.0, -1.0, 0.0, Component::Outer),
            ];
            if let Some(li) = inner {
                let si = (fam.a() - li).sqrt();
                v.push(phase(si, 0.0, 1.0, 0.0, Component::Inner));
                v.push(phase(-si, 0.0, -1.0, 0.0, Component::Inner));
            }
            v
        }
    }
}

/// Cycle id of every canonical state: states mapped onto each other share an id.
fn cycle_ids(table: &TableSpec, states: &[BoundaryPhase]) -> Result<Vec<usize>, TopologyError> {
    let mut ids: Vec<usize> = (0..states.len()).collect();
    fn root(ids: &[usize], mut i: usize) -> usize {
        while ids[i] != i {
            i = ids[i];
        }
        i
    }
    for (i, s) in states.iter().enumerate() {
        let next = step(table, s)?;
        for (j, t) in states.iter().enumerate() {
            if phase_distance(&table.fam, &next, t) < 1e-9 {
                let (ri, rj) = (root(&ids, i), root(&ids, j));
                ids[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    Ok((0..states.len()).map(|i| root(&ids, i)).collect())
}

/// Asymptotic label: the closed orbit reached and the tail of micro-labels.
type Asymptote = Option<(usize, BTreeSet<MicroLabel>)>;

fn asymptote(
    table: &TableSpec,
    states: &[BoundaryPhase],
    ids: &[usize],
    s0: BoundaryPhase,
    forward: bool,
) -> Result<Asymptote, TopologyError> {
    let mut history: Vec<BoundaryPhase> = Vec::new();
    let mut s = s0;
    for it in 0..SEPARATRIX_STEPS {
        if forward {
            history.push(s);
            s = step(table, &s)?;
        } else {
            s = step_back(table, &s)?;
            history.push(s);
        }
        if it == 0 {
            continue;
        }
        let nearest = states
            .iter()
            .enumerate()
            .map(|(k, c)| (k, phase_distance(&table.fam, &s, c)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        if let Some((k, d)) = nearest {
            if d < ARRIVAL_TOL {
                let tail = history[history.len().saturating_sub(TAIL)..]
                    .iter()
                    .map(|h| step_detailed(table, h).map(|d| micro_label(&d.segment)))
                    .collect::<Result<BTreeSet<_>, _>>()?;
                return Ok(Some((ids[k], tail)));
            }
        }
    }
    Ok(None)
}

/// Number of distinct (forward, backward) asymptote pairs of focal trajectories.
fn count_separatrices(
    table: &TableSpec,
    states: &[BoundaryPhase],
    ids: &[usize],
) -> Result<usize, TopologyError> {
    let fam = &table.fam;
    let mut pairs = BTreeSet::new();
    for focus in fam.foci() {
        for angle in [
            FOCAL_OFFSET,
            -FOCAL_OFFSET,
            std::f64::consts::PI + FOCAL_OFFSET,
            std::f64::consts::PI - FOCAL_OFFSET,
        ] {
            let u = Vec2::new(angle.cos(), angle.sin());
            let at = ray_boundary_hit(fam, 0.0, focus, -u)?;
            let s0 = BoundaryPhase::outer(at, u);
            let fwd = asymptote(table, states, ids, s0, true)?;
            let bwd = asymptote(table, states, ids, s0, false)?;
            pairs.insert((fwd, bwd));
        }
    }
    Ok(pairs.len())
}

/// Closed orbits, separatrices and atoms on a singular level.
pub fn singular_level_report(
    table: &TableSpec,
    level: SingularLevel,
) -> Result<SingularReport, TopologyError> {
    match level {
        SingularLevel::Boundary => {
            let glancing = 1e-4 * table.fam.b();
            let r = classify_level(table, glancing, 32, 0)?;
            Ok(SingularReport {
                level,
                closed_orbits: r.component_count,
                separatrices: 0,
                atoms: vec![AtomType::A; r.component_count],
            })
        }
        SingularLevel::ShortAxis => {
            let states = canonical_states(table, level);
            let ids = cycle_ids(table, &states)?;
            let closed = ids.iter().copied().collect::<BTreeSet<_>>().len();
            Ok(SingularReport {
                level,
                closed_orbits: closed,
                separatrices: 0,
                atoms: vec![AtomType::A; closed],
            })
        }
        SingularLevel::Focal => {
            let states = canonical_states(table, level);
            let ids = cycle_ids(table, &states)?;
            let closed = ids.iter().copied().collect::<BTreeSet<_>>().len();
            let separatrices = count_separatrices(table, &states, &ids)?;
            let atoms = AtomType::lookup(closed, separatrices).into_iter().collect();
            Ok(SingularReport {
                level,
                closed_orbits: closed,
                separatrices,
                atoms,
            })
        }
    }
}
