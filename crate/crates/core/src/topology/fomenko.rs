//! Fomenko graphs of the six studied systems, checked against numerics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::classify::classify_level;
use super::singular::{singular_level_report, AtomType, SingularLevel};
use super::TopologyError;
use crate::dynamics::{MagicKind, TableSpec};

/// Seed used by the construction-time cross-check.
const CHECK_SEED: u64 = 0;
const CHECK_SAMPLES: usize = 64;

/// Rational mark `r`, or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RMark {
    Rational(i64, i64),
    Infinity,
}

impl Serialize for RMark {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            RMark::Rational(p, 1) => s.serialize_str(&p.to_string()),
            RMark::Rational(p, q) => s.serialize_str(&format!("{p}/{q}")),
            RMark::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for RMark {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(RMark::Infinity);
        }
        let (p, q) = s.split_once('/').unwrap_or((&s, "1"));
        match (p.parse(), q.parse()) {
            (Ok(p), Ok(q)) => Ok(RMark::Rational(p, q)),
            _ => Err(serde::de::Error::custom(format!("bad r mark '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub id: String,
    #[serde(rename = "type")]
    pub atom_type: AtomType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub r: Option<RMark>,
    pub eps: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FomenkoGraph {
    pub system: String,
    pub atoms: Vec<Atom>,
    pub edges: Vec<Edge>,
    pub n: Option<i64>,
    pub provenance: String,
    pub singular_levels: BTreeMap<SingularLevel, Vec<String>>,
    pub marks_available: bool,
}

impl FomenkoGraph {
    fn atoms_at(&self, level: SingularLevel) -> Vec<AtomType> {
        let ids = self
            .singular_levels
            .get(&level)
            .cloned()
            .unwrap_or_default();
        ids.iter()
            .filter_map(|id| self.atoms.iter().find(|a| &a.id == id).map(|a| a.atom_type))
            .collect()
    }

    pub fn atom_multiset(&self) -> Vec<AtomType> {
        let mut v: Vec<AtomType> = self.atoms.iter().map(|a| a.atom_type).collect();
        v.sort();
        v
    }
}

/// Name of a studied system as used in graph documents.
pub fn system_name(table: &TableSpec) -> String {
    let shape = if table.is_annulus() {
        "annulus"
    } else {
        "ellipse"
    };
    format!("{shape}-{}", table.outer_map.name())
}

/// `(r, ε)` marks on the edges of one singular level.
type Marks = Vec<(RMark, i8)>;

struct Layout {
    boundary: Vec<AtomType>,
    focal: AtomType,
    short_axis: Vec<AtomType>,
    /// Marks on edges to the boundary atoms, then to the short-axis atoms.
    marks: Option<(Marks, Marks)>,
    /// Edges point from the leaves to the central atom.
    inward: bool,
    n: Option<i64>,
    provenance: &'static str,
}

fn layout(table: &TableSpec) -> Result<Layout, TopologyError> {
    use AtomType::*;
    let half = RMark::Rational(1, 2);
    let zero = RMark::Rational(0, 1);
    let l = match (table.is_annulus(), table.outer_map) {
        (false, MagicKind::FlipLong) => Layout {
            boundary: vec![A],
            focal: B,
            short_axis: vec![A, A],
            marks: Some((vec![(zero, 1)], vec![(half, 1), (half, 1)])),
            inward: false,
            n: Some(-2),
            provenance: "Fig. 7",
        },
        (false, MagicKind::FlipShort) => Layout {
            boundary: vec![A],
            focal: AStarStar,
            short_axis: vec![A],
            marks: Some((vec![(zero, 1)], vec![(zero, 1)])),
            inward: false,
            n: Some(0),
            provenance: "Fig. 9",
        },
        (false, MagicKind::HalfTurn) => Layout {
            boundary: vec![A, A],
            focal: C2,
            short_axis: vec![A, A],
            marks: Some((vec![(zero, 1); 2], vec![(zero, 1); 2])),
            inward: true,
            n: Some(-4),
            provenance: "Fig. 11",
        },
        (true, MagicKind::HalfTurn) => Layout {
            boundary: vec![A, A],
            focal: B,
            short_axis: vec![A],
            marks: Some((vec![(half, 1), (half, 1)], vec![(RMark::Infinity, 1)])),
            inward: false,
            n: None,
            provenance: "Fig. 13",
        },
        (true, MagicKind::FlipLong) => Layout {
            boundary: vec![A],
            focal: AStarStar,
            short_axis: vec![A],
            marks: None,
            inward: false,
            n: None,
            provenance: "marks unavailable",
        },
        (true, MagicKind::FlipShort) => Layout {
            boundary: vec![A],
            focal: B,
            short_axis: vec![A, A],
            marks: None,
            inward: false,
            n: None,
            provenance: "marks unavailable",
        },
        (_, MagicKind::Identity) => {
            return Err(TopologyError::UnknownSystem {
                system: system_name(table),
            })
        }
    };
    Ok(l)
}

fn build(table: &TableSpec, l: &Layout) -> FomenkoGraph {
    let mut atoms = Vec::new();
    let mut counts: BTreeMap<AtomType, usize> = BTreeMap::new();
    let mut add = |t: AtomType, atoms: &mut Vec<Atom>| {
        let c = counts.entry(t).or_insert(0);
        *c += 1;
        let prefix = match t {
            AtomType::A => "A",
            AtomType::B => "B",
            AtomType::AStarStar => "A**",
            AtomType::C2 => "C2",
        };
        let id = format!("{prefix}#{c}");
        atoms.push(Atom {
            id: id.clone(),
            atom_type: t,
        });
        id
    };
    let boundary: Vec<String> = l.boundary.iter().map(|&t| add(t, &mut atoms)).collect();
    let centre = add(l.focal, &mut atoms);
    let short: Vec<String> = l.short_axis.iter().map(|&t| add(t, &mut atoms)).collect();
    let (mb, ms) = match &l.marks {
        Some((mb, ms)) => (
            mb.iter().map(|&m| Some(m)).collect(),
            ms.iter().map(|&m| Some(m)).collect(),
        ),
        None => (vec![None; boundary.len()], vec![None; short.len()]),
    };
    let edges = boundary
        .iter()
        .zip(mb)
        .chain(short.iter().zip(ms))
        .map(|(leaf, mark): (&String, Option<(RMark, i8)>)| {
            let (from, to) = if l.inward {
                (leaf.clone(), centre.clone())
            } else {
                (centre.clone(), leaf.clone())
            };
            Edge {
                from,
                to,
                r: mark.map(|m| m.0),
                eps: mark.map(|m| m.1),
            }
        })
        .collect();
    let singular_levels = BTreeMap::from([
        (SingularLevel::Boundary, boundary),
        (SingularLevel::Focal, vec![centre]),
        (SingularLevel::ShortAxis, short),
    ]);
    FomenkoGraph {
        system: system_name(table),
        atoms,
        edges,
        n: l.n,
        provenance: l.provenance.to_string(),
        singular_levels,
        marks_available: l.marks.is_some(),
    }
}

/// Graph data for `table`, without the numerical cross-check.
pub fn fomenko_graph_static(table: &TableSpec) -> Result<FomenkoGraph, TopologyError> {
    Ok(build(table, &layout(table)?))
}

/// Graph data for `table`, verified against level-set and singular-level numerics.
pub fn fomenko_graph(table: &TableSpec) -> Result<FomenkoGraph, TopologyError> {
    let graph = fomenko_graph_static(table)?;
    let fam = &table.fam;
    let mismatch = |detail: String| TopologyError::TopologyMismatch {
        system: graph.system.clone(),
        detail,
    };

    let beta_e = 0.625 * fam.b();
    let beta_h = fam.b() + 0.4 * (fam.a() - fam.b());
    let bound = graph.atoms_at(SingularLevel::Boundary);
    let short = graph.atoms_at(SingularLevel::ShortAxis);
    let e = classify_level(table, beta_e, CHECK_SAMPLES, CHECK_SEED)?;
    if e.component_count != bound.len() {
        return Err(mismatch(format!(
            "{} tori at β = {beta_e}, graph has {}",
            e.component_count,
            bound.len()
        )));
    }
    let h = classify_level(table, beta_h, CHECK_SAMPLES, CHECK_SEED)?;
    if h.component_count != short.len() {
        return Err(mismatch(format!(
            "{} tori at β = {beta_h}, graph has {}",
            h.component_count,
            short.len()
        )));
    }
    for level in SingularLevel::ALL {
        let r = singular_level_report(table, level)?;
        let mut want = graph.atoms_at(level);
        let mut got = r.atoms.clone();
        want.sort();
        got.sort();
        if want != got {
            return Err(mismatch(format!(
                "level λ = {}: measured {got:?}, graph has {want:?}",
                level.key()
            )));
        }
    }
    Ok(graph)
}
