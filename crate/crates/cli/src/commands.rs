use magic_billiards::certificates::{
    find_periodic_caustics, search_excluded, CertError, CertificateBundle,
};
use magic_billiards::dynamics::{trajectory, validate_phase};
use magic_billiards::topology::{classify_level, fomenko_graph, TopologyError};
use magic_billiards::{BoundaryPhase, ConfocalFamily, MagicKind, Vec2};
use serde::Serialize;

use crate::config::{PeriodicArgs, RunConfig, SimulateArgs, TopologyArgs};
use crate::output::{to_json, trajectory_csv, write_atomic};
use crate::{svg, CliError};

/// Grid resolution of the Cayley root scan.
pub const ROOT_GRID: usize = 512;
/// Seeds per level set in `topology --beta`.
pub const LEVEL_SAMPLES: usize = 64;
/// Largest relative distance from the boundary accepted for a start point.
const START_REL_TOL: f64 = 1e-6;

/// Projects `(x, y)` radially onto the outer ellipse if it lies close enough.
pub fn start_point(fam: &ConfocalFamily, x: f64, y: f64) -> Result<Vec2, CliError> {
    let p = Vec2::new(x, y);
    let r = (x * x / fam.a() + y * y / fam.b()).sqrt();
    if !(r.is_finite() && r > 0.0) {
        return Err(CliError::Usage(format!(
            "start point ({x}, {y}) is not on the boundary"
        )));
    }
    let q = p * (1.0 / r);
    let dist = (p - q).norm() / fam.a().sqrt();
    if dist > START_REL_TOL {
        return Err(CliError::Usage(format!(
            "start point ({x}, {y}) is off the outer boundary by {dist:.3e} (relative)"
        )));
    }
    Ok(q)
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(&args.common)?;
    let fam = &cfg.table.fam;
    if args.bounces == 0 {
        return Err(CliError::Usage("--bounces must be positive".into()));
    }
    let at = start_point(fam, args.x0, args.y0)?;
    let v = Vec2::new(args.dx, args.dy)
        .normalized()
        .ok_or_else(|| CliError::Usage("direction (dx, dy) must be nonzero".into()))?;
    let s0 = BoundaryPhase::outer(at, v);
    validate_phase(&cfg.table, &s0).map_err(|e| CliError::Usage(e.to_string()))?;
    let traj =
        trajectory(&cfg.table, s0, args.bounces).map_err(|e| CliError::Numerical(e.to_string()))?;
    write_atomic(&args.common.out, &trajectory_csv(fam, &traj)?)?;
    if let Some(path) = &args.svg {
        write_atomic(path, &svg::render(&cfg.table, &traj))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmptyReason {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicReport {
    pub system: MagicKind,
    pub n: usize,
    pub interval: (f64, f64),
    pub bundles: Vec<CertificateBundle>,
    /// Set when the list is empty for a structural reason rather than by search.
    pub reason: Option<EmptyReason>,
}

fn cert_error(e: CertError) -> CliError {
    match e {
        CertError::UnsupportedParity { .. }
        | CertError::InvalidInterval { .. }
        | CertError::InvalidPeriod { .. }
        | CertError::GridTooCoarse { .. } => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

pub fn periodic_report(
    cfg: &RunConfig,
    n: usize,
    interval: (f64, f64),
) -> Result<PeriodicReport, CliError> {
    let (a, b) = (cfg.table.fam.a(), cfg.table.fam.b());
    let system = cfg.table.outer_map;
    if n < 2 {
        return Err(CliError::Usage(format!(
            "period must be at least 2, got {n}"
        )));
    }
    if cfg.table.is_annulus() {
        return Err(CliError::Usage(
            "periodicity certificates apply to the ellipse table".into(),
        ));
    }
    if !(interval.0 < interval.1 && interval.0 >= 0.0 && interval.1 <= a) {
        return Err(cert_error(CertError::InvalidInterval {
            lo: interval.0,
            hi: interval.1,
        }));
    }
    let report = |bundles, reason| PeriodicReport {
        system,
        n,
        interval,
        bundles,
        reason,
    };
    if n == 2 {
        let reason = EmptyReason {
            code: "period-two-degenerate",
            message: "2-periodic trajectories only exist on the degenerate levels".into(),
        };
        return Ok(report(Vec::new(), Some(reason)));
    }
    if search_excluded(system, n) {
        let reason = EmptyReason {
            code: "odd-period-excluded",
            message: format!(
                "odd periods excluded: the {} map only admits even periods",
                system.name()
            ),
        };
        return Ok(report(Vec::new(), Some(reason)));
    }
    let bundles =
        find_periodic_caustics(system, n, a, b, interval, ROOT_GRID).map_err(cert_error)?;
    Ok(report(bundles, None))
}

pub fn periodic(args: &PeriodicArgs) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(&args.common)?;
    let interval = args.interval.unwrap_or((0.0, cfg.table.fam.a()));
    let report = periodic_report(&cfg, args.n, interval)?;
    write_atomic(&args.common.out, &to_json(&report)?)
}

fn topology_error(e: TopologyError) -> CliError {
    match e {
        TopologyError::DegenerateLevel { .. }
        | TopologyError::TooFewSamples { .. }
        | TopologyError::UnknownSystem { .. } => CliError::Usage(e.to_string()),
        TopologyError::TopologyMismatch { .. } | TopologyError::Dynamics(_) => {
            CliError::Numerical(e.to_string())
        }
    }
}

pub fn topology_json(cfg: &RunConfig, beta: Option<f64>) -> Result<String, CliError> {
    match beta {
        Some(beta) => {
            let fam = &cfg.table.fam;
            if !(beta > 0.0 && beta < fam.a()) {
                return Err(CliError::Usage(format!("β = {beta} is outside (0, a)")));
            }
            to_json(
                &classify_level(&cfg.table, beta, LEVEL_SAMPLES, cfg.seed)
                    .map_err(topology_error)?,
            )
        }
        None => to_json(&fomenko_graph(&cfg.table).map_err(topology_error)?),
    }
}

pub fn topology(args: &TopologyArgs) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(&args.common)?;
    write_atomic(&args.common.out, &topology_json(&cfg, args.beta)?)
}
