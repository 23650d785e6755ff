//! Component counts of regular level sets.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::labels::{signature, Label};
use super::TopologyError;
use crate::dynamics::{launch, TableSpec};
use crate::geometry::{CausticKind, ConfocalFamily};
use std::f64::consts::{PI, TAU};

/// Reflections simulated per seed.
pub const CLASSIFY_STEPS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetReport {
    pub beta: f64,
    pub kind: CausticKind,
    pub component_count: usize,
    pub sample_count: usize,
    pub labels: Vec<Label>,
    /// Label pairs seen together on a single trajectory.
    pub merge_evidence: Vec<(Label, Label)>,
}

/// Eccentric parameter for a fraction `u ∈ [0, 1)` of the admissible boundary.
fn admissible_theta(fam: &ConfocalFamily, beta: f64, u: f64) -> f64 {
    if beta < fam.b() {
        return TAU * u;
    }
    let theta0 = ((beta - fam.b()) / (fam.a() - fam.b())).sqrt().asin();
    let arc = PI - 2.0 * theta0;
    let s = 2.0 * arc * u;
    if s < arc {
        theta0 + s
    } else {
        PI + theta0 + (s - arc)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            let (lo, hi) = (ri.min(rj), ri.max(rj));
            self.0[hi] = lo;
        }
    }
}

/// Counts Liouville tori on the level `β` by merging labels that co-occur.
pub fn classify_level(
    table: &TableSpec,
    beta: f64,
    samples: usize,
    seed: u64,
) -> Result<LevelSetReport, TopologyError> {
    let fam = &table.fam;
    let kind = fam.classify(beta);
    if !kind.is_regular() {
        return Err(TopologyError::DegenerateLevel { beta });
    }
    if samples < 16 {
        return Err(TopologyError::TooFewSamples { samples });
    }
    let positions = samples / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<(f64, usize)> = (0..positions)
        .flat_map(|i| {
            let u = (i as f64 + rng.gen_range(0.1..0.9)) / positions as f64;
            let theta = admissible_theta(fam, beta, u);
            [(theta, 0usize), (theta, 1usize)]
        })
        .collect();
    let signatures: Vec<BTreeSet<Label>> = seeds
        .par_iter()
        .filter_map(|&(theta, branch)| launch(table, beta, theta, branch))
        .map(|s0| signature(table, kind, s0, 0, CLASSIFY_STEPS))
        .collect::<Result<Vec<_>, _>>()?;

    let labels: Vec<Label> = signatures
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |l: &Label| labels.binary_search(l).expect("label observed");
    let mut uf = UnionFind((0..labels.len()).collect());
    let mut evidence = BTreeSet::new();
    for sig in &signatures {
        let mut it = sig.iter();
        if let Some(first) = it.next() {
            for other in it {
                uf.union(index(first), index(other));
                evidence.insert((*first, *other));
            }
        }
    }
    let component_count = (0..labels.len()).filter(|&i| uf.find(i) == i).count();
    Ok(LevelSetReport {
        beta,
        kind,
        component_count,
        sample_count: signatures.len(),
        labels,
        merge_evidence: evidence.into_iter().collect(),
    })
}
