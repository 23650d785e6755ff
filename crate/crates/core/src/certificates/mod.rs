//! Algebraic periodicity certificates and their cross-validation.

pub mod cayley;
pub mod curve;
pub mod pell;
pub mod rotation;
pub mod series;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{closure_residual, launch_tangent, DynamicsError, MagicKind, TableSpec};
use crate::geometry::ConfocalFamily;

pub use cayley::{cayley_det, CayleyValue};
pub use curve::{ec_add, torsion_check, CurvePoint, TORSION_TOL};
pub use pell::{pell_problem, pell_solve, PellPair, PELL_TOL};
pub use rotation::rotation_number;
pub use series::{series_divide_linear, series_sqrt_cubic, PowerSeries};

/// Simulated closure residual accepted by a verified bundle.
pub const CLOSURE_TOL: f64 = 1e-6;

/// Width of the excluded neighborhoods of `{0, b, a}`, relative to `a`.
pub const DEGENERATE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error("cubic is degenerate: a = {a}, b = {b}, β = {beta} must be positive and distinct")]
    DegenerateCubic { a: f64, b: f64, beta: f64 },
    #[error("no {} condition exists for odd period {n}", system.name())]
    UnsupportedParity { system: MagicKind, n: usize },
    #[error("period {n} has no certificate")]
    InvalidPeriod { n: usize },
    #[error("inadmissible interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("grid of {grid} points is too coarse (need at least 64)")]
    GridTooCoarse { grid: usize },
    #[error("caustic β = {beta} is the focal level")]
    DegenerateFocal { beta: f64 },
    #[error("β = {beta} is not a regular caustic")]
    InvalidCaustic { beta: f64 },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// One periodic caustic with every certificate evaluated there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub system: MagicKind,
    pub n: usize,
    pub beta: f64,
    pub cayley_value: f64,
    pub torsion_residual: f64,
    pub pell_residual: Option<f64>,
    pub closure_residual: f64,
    pub verified: bool,
}

/// Whether any certificate search is meaningful for this system and parity.
pub fn search_excluded(system: MagicKind, n: usize) -> bool {
    n % 2 == 1 && system == MagicKind::FlipShort
}

/// Admissible sub-intervals of `[lo, hi]`, split at `b` with margins cut out.
pub fn admissible_pieces(a: f64, b: f64, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>, CertError> {
    if !(lo < hi && lo >= 0.0 && hi <= a) {
        return Err(CertError::InvalidInterval { lo, hi });
    }
    let m = DEGENERATE_MARGIN * a;
    Ok([(m, b - m), (b + m, a - m)]
        .into_iter()
        .map(|(l, h)| (l.max(lo), h.min(hi)))
        .filter(|(l, h)| l < h)
        .collect())
}

fn det_value(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    beta: f64,
) -> Result<Option<f64>, CertError> {
    Ok(cayley_det(system, n, a, b, beta)?.value())
}

fn bisect(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    mut lo: f64,
    mut hi: f64,
    flo: f64,
) -> Result<f64, CertError> {
    let mut flo = flo;
    while hi - lo > 1e-12 * a {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = det_value(system, n, a, b, mid)?.unwrap_or(0.0);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Roots of the Cayley condition on `interval`, found by sign changes on a grid.
pub fn cayley_roots(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    interval: (f64, f64),
    grid: usize,
) -> Result<Vec<f64>, CertError> {
    if grid < 64 {
        return Err(CertError::GridTooCoarse { grid });
    }
    let pieces = admissible_pieces(a, b, interval.0, interval.1)?;
    let mut roots = Vec::new();
    for (lo, hi) in pieces {
        let xs: Vec<f64> = (0..grid)
            .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
            .collect();
        let vals = xs
            .par_iter()
            .map(|&x| det_value(system, n, a, b, x))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.iter().any(Option::is_none) {
            continue;
        }
        let vals: Vec<f64> = vals.into_iter().flatten().collect();
        let brackets: Vec<(f64, f64, f64)> = (0..grid - 1)
            .filter_map(|i| {
                let (u, v) = (vals[i], vals[i + 1]);
                if u == 0.0 {
                    Some((xs[i], xs[i], u))
                } else if u * v < 0.0 {
                    Some((xs[i], xs[i + 1], u))
                } else {
                    None
                }
            })
            .collect();
        let found = brackets
            .par_iter()
            .map(|&(l, h, fl)| {
                if l == h {
                    Ok(l)
                } else {
                    bisect(system, n, a, b, l, h, fl)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        roots.extend(found);
        if vals[grid - 1] == 0.0 {
            roots.push(xs[grid - 1]);
        }
    }
    Ok(roots)
}

/// Evaluates every certificate at `beta`.
pub fn certify(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    beta: f64,
) -> Result<CertificateBundle, CertError> {
    let fam = ConfocalFamily::new(a, b).map_err(|e| CertError::Dynamics(e.into()))?;
    let cayley_value = det_value(system, n, a, b, beta)?.unwrap_or(f64::NAN);
    let torsion_residual = torsion_check(system, n, a, b, beta)?;
    let pell_defined = pell_problem(system, n, a, b, beta).is_some();
    let pell_residual = pell_solve(system, n, a, b, beta).map(|p| p.residual);
    let table = TableSpec::ellipse(fam, system);
    let closure = match launch_tangent(&table, beta) {
        Some(s0) => closure_residual(&table, s0, n)?,
        None => f64::INFINITY,
    };
    let verified = torsion_residual < TORSION_TOL
        && closure < CLOSURE_TOL
        && (!pell_defined || pell_residual.is_some());
    Ok(CertificateBundle {
        system,
        n,
        beta,
        cayley_value,
        torsion_residual,
        pell_residual,
        closure_residual: closure,
        verified,
    })
}

/// Caustics on `interval` for which `system` has `n`-periodic trajectories.
///
/// Odd periods of the short-axis flip cannot occur and give an empty list.
pub fn find_periodic_caustics(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    interval: (f64, f64),
    grid: usize,
) -> Result<Vec<CertificateBundle>, CertError> {
    if search_excluded(system, n) {
        admissible_pieces(a, b, interval.0, interval.1)?;
        return Ok(Vec::new());
    }
    let roots = cayley_roots(system, n, a, b, interval, grid)?;
    roots
        .par_iter()
        .map(|&beta| certify(system, n, a, b, beta))
        .collect()
}
