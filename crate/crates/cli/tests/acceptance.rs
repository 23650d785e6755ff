//! Acceptance suite at (a, b) = (9, 4). Prints one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use magic_billiards::certificates::curve::Curve;
use magic_billiards::certificates::{
    cayley_roots, ec_add, find_periodic_caustics, CertificateBundle, CurvePoint,
};
use magic_billiards::dynamics::{closure_residual, launch_tangent, trajectory};
use magic_billiards::geometry::{caustic_of_line, normal_at, Facing};
use magic_billiards::topology::{
    classify_level, fomenko_graph, singular_level_report, AtomType, SingularLevel,
};
use magic_billiards::{BoundaryPhase, ConfocalFamily, MagicKind, TableSpec, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

const A: f64 = 9.0;
const B: f64 = 4.0;
const MAGIC: [MagicKind; 3] = [
    MagicKind::FlipLong,
    MagicKind::FlipShort,
    MagicKind::HalfTurn,
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fam() -> ConfocalFamily {
    ConfocalFamily::new(A, B).unwrap()
}

fn ellipse(k: MagicKind) -> TableSpec {
    TableSpec::ellipse(fam(), k)
}

fn annulus(k: MagicKind) -> TableSpec {
    TableSpec::annulus(fam(), 0.75 * B, k).unwrap()
}

fn random_phase(rng: &mut ChaCha8Rng) -> BoundaryPhase {
    let f = fam();
    let p = f.boundary_point(rng.gen_range(0.0..std::f64::consts::TAU));
    let n = normal_at(&f, 0.0, p, Facing::Interior).unwrap();
    let tan = Vec2::new(-n.y, n.x);
    let alpha: f64 = rng.gen_range(1e-3..std::f64::consts::PI - 1e-3);
    BoundaryPhase::outer(p, tan * alpha.cos() + n * alpha.sin())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn caustic_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let starts: Vec<BoundaryPhase> = (0..100).map(|_| random_phase(&mut rng)).collect();
    let mut worst = 0.0f64;
    for k in MagicKind::ALL {
        for table in [ellipse(k), annulus(k)] {
            for &s0 in &starts {
                let t = trajectory(&table, s0, 1000).map_err(|e| format!("{k:?}: {e}"))?;
                let l0 = t.caustic.lambda;
                for seg in &t.segments {
                    let l = caustic_of_line(&table.fam, seg.from, seg.v).unwrap().lambda;
                    worst = worst.max((l - l0).abs());
                }
            }
        }
    }
    check(
        worst < 1e-8 * A,
        format!("max drift {worst:.2e}, bound {:.1e}", 1e-8 * A),
    )
}

fn even_segments() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s0 = random_phase(&mut rng);
        let plain =
            trajectory(&ellipse(MagicKind::Identity), s0, 200).map_err(|e| e.to_string())?;
        for k in MAGIC {
            let magic = trajectory(&ellipse(k), s0, 200).map_err(|e| e.to_string())?;
            for (m, p) in magic.segments.iter().zip(&plain.segments).step_by(2) {
                worst = worst
                    .max((m.from - p.from).norm())
                    .max((m.to - p.to).norm());
            }
        }
    }
    check(
        worst < 1e-9,
        format!("max pointwise gap {worst:.2e}, bound 1e-9"),
    )
}

fn even_universality() -> Outcome {
    let mut worst_gap = 0.0f64;
    let mut worst_closure = 0.0f64;
    let mut count = 0;
    for n in [4, 6] {
        let base =
            cayley_roots(MagicKind::Identity, n, A, B, (0.0, A), 512).map_err(|e| e.to_string())?;
        if base.is_empty() {
            return Err(format!("no roots for n = {n}"));
        }
        for k in MagicKind::ALL {
            let roots = cayley_roots(k, n, A, B, (0.0, A), 512).map_err(|e| e.to_string())?;
            if roots.len() != base.len() {
                return Err(format!(
                    "{k:?} n={n}: {} roots vs {}",
                    roots.len(),
                    base.len()
                ));
            }
            for (r, s) in roots.iter().zip(&base) {
                worst_gap = worst_gap.max((r - s).abs());
                let table = ellipse(k);
                let s0 = launch_tangent(&table, *r).ok_or("no launch")?;
                worst_closure =
                    worst_closure.max(closure_residual(&table, s0, n).map_err(|e| e.to_string())?);
                count += 1;
            }
        }
    }
    check(
        worst_gap < 1e-10 && worst_closure < 1e-6,
        format!("{count} roots, max root gap {worst_gap:.2e} (1e-10), max closure {worst_closure:.2e} (1e-6)"),
    )
}

fn bundle_ok(c: &CertificateBundle) -> bool {
    c.torsion_residual < 1e-8
        && c.pell_residual.is_some_and(|p| p < 1e-8)
        && c.closure_residual < 1e-6
}

fn odd_certificates() -> Outcome {
    let fl = find_periodic_caustics(MagicKind::FlipLong, 3, A, B, (B, A), 512)
        .map_err(|e| e.to_string())?;
    let ht = find_periodic_caustics(MagicKind::HalfTurn, 3, A, B, (0.0, A), 512)
        .map_err(|e| e.to_string())?;
    let mut empty = true;
    for n in [3, 5, 7] {
        empty &= find_periodic_caustics(MagicKind::FlipShort, n, A, B, (0.0, A), 512)
            .map_err(|e| e.to_string())?
            .is_empty();
    }
    let fl_ok = fl.len() == 1 && bundle_ok(&fl[0]);
    let ht_ok = !ht.is_empty() && ht.iter().all(bundle_ok);
    let describe = |v: &[CertificateBundle]| {
        v.iter()
            .map(|c| {
                format!(
                    "β={:.10} tor {:.1e} pell {:.1e} clo {:.1e}",
                    c.beta,
                    c.torsion_residual,
                    c.pell_residual.unwrap_or(f64::NAN),
                    c.closure_residual
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    check(
        fl_ok && ht_ok && empty,
        format!(
            "flip-long [{}], half-turn [{}], flip-short odd empty: {empty}",
            describe(&fl),
            describe(&ht)
        ),
    )
}

fn off_root_divergence() -> Outcome {
    let mut cases: Vec<(MagicKind, usize, f64)> = Vec::new();
    for (k, n) in [(MagicKind::FlipLong, 3), (MagicKind::HalfTurn, 3)] {
        for c in find_periodic_caustics(k, n, A, B, (0.0, A), 512).map_err(|e| e.to_string())? {
            cases.push((k, n, c.beta));
        }
    }
    for n in [4, 6] {
        for k in MagicKind::ALL {
            for r in cayley_roots(k, n, A, B, (0.0, A), 512).map_err(|e| e.to_string())? {
                cases.push((k, n, r));
            }
        }
    }
    let mut least = f64::INFINITY;
    let mut tried = 0;
    for (k, n, beta) in cases {
        for shifted in [beta - 1e-3 * A, beta + 1e-3 * A] {
            let kind = fam().classify(shifted);
            if !kind.is_regular() || shifted <= 0.0 || shifted >= A {
                continue;
            }
            let table = ellipse(k);
            let s0 = launch_tangent(&table, shifted).ok_or("no launch")?;
            least = least.min(closure_residual(&table, s0, n).map_err(|e| e.to_string())?);
            tried += 1;
        }
    }
    check(
        least > 1e-3,
        format!("{tried} perturbed caustics, min closure {least:.2e} (> 1e-3)"),
    )
}

fn lift(curve: &Curve, x: f64) -> Option<CurvePoint> {
    curve.lift(TwoFloat::from(x))
}

fn gap(p: &CurvePoint, q: &CurvePoint) -> f64 {
    match (p, q) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => 0.0,
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
            let s = 1.0 + x1.hi().abs() + y1.hi().abs();
            ((*x1 - *x2).hi().abs() + (*y1 - *y2).hi().abs()) / s
        }
        _ => f64::INFINITY,
    }
}

fn group_law() -> Outcome {
    let beta = 2.5;
    let curve = Curve::new(A, B, beta);
    let add = |p: &CurvePoint, q: &CurvePoint| ec_add(p, q, A, B, beta);
    let q0 = curve.q0();
    let two_torsion = [
        CurvePoint::from_f64(A, 0.0),
        curve.qb(),
        CurvePoint::from_f64(beta, 0.0),
    ];
    let exact = add(&q0, &CurvePoint::Infinity) == q0
        && add(&CurvePoint::Infinity, &q0) == q0
        && add(&q0, &curve.neg(&q0)) == CurvePoint::Infinity
        && two_torsion
            .iter()
            .all(|t| add(t, t) == CurvePoint::Infinity);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut triples = 0;
    while triples < 1000 {
        let beta: f64 = rng.gen_range(0.2..8.8);
        if (beta - B).abs() < 0.1 {
            continue;
        }
        let c = Curve::new(A, B, beta);
        let hi = beta.min(B) - 0.1;
        let pts: Vec<CurvePoint> = (0..3)
            .filter_map(|_| lift(&c, rng.gen_range(-8.0..hi)))
            .collect();
        let [p, q, r] = pts[..] else { continue };
        let left = c.add(&c.add(&p, &q), &r);
        let right = c.add(&p, &c.add(&q, &r));
        worst = worst.max(gap(&left, &right));
        triples += 1;
    }
    check(exact && worst < 1e-20, format!("exact cases: {exact}, associativity max gap {worst:.2e} over {triples} triples (1e-20)"))
}

fn studied() -> Vec<(&'static str, TableSpec, (usize, usize), AtomType)> {
    vec![
        (
            "flip-long",
            ellipse(MagicKind::FlipLong),
            (1, 2),
            AtomType::B,
        ),
        (
            "flip-short",
            ellipse(MagicKind::FlipShort),
            (1, 1),
            AtomType::AStarStar,
        ),
        (
            "half-turn",
            ellipse(MagicKind::HalfTurn),
            (2, 2),
            AtomType::C2,
        ),
        (
            "annulus flip-long",
            annulus(MagicKind::FlipLong),
            (1, 1),
            AtomType::AStarStar,
        ),
        (
            "annulus flip-short",
            annulus(MagicKind::FlipShort),
            (1, 2),
            AtomType::B,
        ),
        (
            "annulus half-turn",
            annulus(MagicKind::HalfTurn),
            (2, 1),
            AtomType::B,
        ),
    ]
}

fn topology_table() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, table, want, _) in studied() {
        let e = classify_level(&table, 2.5, 64, 0)
            .map_err(|e| e.to_string())?
            .component_count;
        let h = classify_level(&table, 6.0, 64, 0)
            .map_err(|e| e.to_string())?
            .component_count;
        ok &= (e, h) == want;
        lines.push(format!("{name} ({e},{h})"));
    }
    check(ok, lines.join(", "))
}

fn atoms() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, table, _, want) in studied() {
        let r = singular_level_report(&table, SingularLevel::Focal).map_err(|e| e.to_string())?;
        ok &= r.atoms == vec![want];
        let graph = match fomenko_graph(&table) {
            Ok(g) => format!("graph with {} atoms", g.atoms.len()),
            Err(e) => {
                ok = false;
                e.to_string()
            }
        };
        lines.push(format!("{name} {:?}, {graph}", r.atoms));
    }
    check(ok, lines.join("; "))
}

fn run_cli(args: &[&str], dir: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_magicbilliards"))
        .args(args)
        .current_dir(dir)
        .status()
        .map_err(|e| e.to_string())?;
    if status.success() {
        Ok(())
    } else {
        Err(format!("{args:?} exited with {status}"))
    }
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &[
            "simulate",
            "--system",
            "flip-long",
            "--x0",
            "0",
            "--y0",
            "2",
            "--dx",
            "0.6",
            "--dy",
            "-1",
            "--bounces",
            "200",
            "--out",
            "OUT.csv",
            "--svg",
            "OUT.svg",
        ],
        &[
            "simulate",
            "--system",
            "half-turn",
            "--table",
            "annulus",
            "--x0",
            "3",
            "--y0",
            "0",
            "--dx",
            "-1",
            "--dy",
            "0.9",
            "--bounces",
            "200",
            "--out",
            "OUT.csv",
        ],
        &[
            "periodic",
            "--system",
            "flip-long",
            "--n",
            "3",
            "--interval",
            "4:9",
            "--out",
            "OUT.json",
        ],
        &[
            "topology",
            "--system",
            "flip-short",
            "--table",
            "annulus",
            "--beta",
            "6",
            "--seed",
            "11",
            "--out",
            "OUT.json",
        ],
        &["topology", "--system", "half-turn", "--out", "OUT.json"],
    ];
    let mut compared = 0;
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            run_cli(args, dir.path())?;
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
                .map_err(|e| e.to_string())?
                .map(|e| {
                    let e = e.unwrap();
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(format!("command {i} run {rep} wrote nothing"));
            }
            outputs.push(files);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("command {i} differs between runs"));
        }
        compared += outputs[0].len();
    }
    check(
        true,
        format!("{compared} output files byte-identical across two runs"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("caustic conservation", caustic_conservation),
        ("every-second-segment coincidence", even_segments),
        ("even-period universality", even_universality),
        ("odd-period certificates", odd_certificates),
        ("off-root divergence", off_root_divergence),
        ("elliptic-curve law", group_law),
        ("topology table", topology_table),
        ("atom identification", atoms),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {}. {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {}. {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
