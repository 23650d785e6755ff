//! Discrete per-segment labels used to separate Liouville tori.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dynamics::{step_detailed, BoundaryPhase, DynamicsError, Segment, TableSpec};
use crate::geometry::{CausticKind, Vec2};

/// Angular momentum below this (relative to `a`) gives no winding label.
const WINDING_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    /// Counter-clockwise around the centre (ellipse caustic).
    Ccw,
    /// Clockwise around the centre (ellipse caustic).
    Cw,
    UpUpper,
    UpLower,
    UpStraddle,
    DownUpper,
    DownLower,
    DownStraddle,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::Ccw => "ccw",
            Label::Cw => "cw",
            Label::UpUpper => "up-upper",
            Label::UpLower => "up-lower",
            Label::UpStraddle => "up-straddle",
            Label::DownUpper => "down-upper",
            Label::DownLower => "down-lower",
            Label::DownStraddle => "down-straddle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Half {
    Upper,
    Lower,
    Straddle,
}

fn half_of(from: Vec2, to: Vec2) -> Half {
    if from.y > 0.0 && to.y > 0.0 {
        Half::Upper
    } else if from.y < 0.0 && to.y < 0.0 {
        Half::Lower
    } else {
        Half::Straddle
    }
}

/// Label of one segment, `None` when it carries no reliable information.
pub fn segment_label(kind: CausticKind, seg: &Segment, a: f64) -> Option<Label> {
    match kind {
        CausticKind::Ellipse => {
            let l = seg.from.cross(seg.v);
            if l.abs() < WINDING_EPS * a {
                None
            } else if l > 0.0 {
                Some(Label::Ccw)
            } else {
                Some(Label::Cw)
            }
        }
        CausticKind::Hyperbola => {
            if seg.v.y == 0.0 {
                return None;
            }
            let up = seg.v.y > 0.0;
            Some(match (up, half_of(seg.from, seg.to)) {
                (true, Half::Upper) => Label::UpUpper,
                (true, Half::Lower) => Label::UpLower,
                (true, Half::Straddle) => Label::UpStraddle,
                (false, Half::Upper) => Label::DownUpper,
                (false, Half::Lower) => Label::DownLower,
                (false, Half::Straddle) => Label::DownStraddle,
            })
        }
        _ => None,
    }
}

/// Set of labels over segments `skip .. skip + len` of the trajectory from `s0`.
pub fn signature(
    table: &TableSpec,
    kind: CausticKind,
    s0: BoundaryPhase,
    skip: usize,
    len: usize,
) -> Result<BTreeSet<Label>, DynamicsError> {
    let mut s = s0;
    let mut out = BTreeSet::new();
    for i in 0..skip + len {
        let d = step_detailed(table, &s)?;
        if i >= skip {
            if let Some(l) = segment_label(kind, &d.segment, table.fam.a()) {
                out.insert(l);
            }
        }
        s = d.next;
    }
    Ok(out)
}

/// Coarse label of a segment on a singular level: vertical sense and the
/// sides of both axes it occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MicroLabel {
    pub up: bool,
    /// -1 left of the short axis, 1 right, 0 crossing it.
    pub side: i8,
    /// -1 below the long axis, 1 above, 0 crossing it.
    pub half: i8,
}

fn sign_band(u: f64, v: f64) -> i8 {
    if u > 0.0 && v > 0.0 {
        1
    } else if u < 0.0 && v < 0.0 {
        -1
    } else {
        0
    }
}

pub fn micro_label(seg: &Segment) -> MicroLabel {
    MicroLabel {
        up: seg.v.y > 0.0,
        side: sign_band(seg.from.x, seg.to.x),
        half: sign_band(seg.from.y, seg.to.y),
    }
}
