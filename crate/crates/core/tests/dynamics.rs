use magic_billiards::dynamics::{
    apply_magic, closure_residual, detect_closure, launch, launch_tangent, phase_distance, step,
    step_back, step_detailed, trajectory, validate_phase, Component,
};
use magic_billiards::geometry::{caustic_of_line, normal_at, Facing};
use magic_billiards::{BoundaryPhase, ConfocalFamily, MagicKind, TableSpec, Vec2};
use proptest::prelude::*;

const A: f64 = 9.0;
const B: f64 = 4.0;

fn fam() -> ConfocalFamily {
    ConfocalFamily::new(A, B).unwrap()
}

fn tables() -> Vec<TableSpec> {
    MagicKind::ALL
        .iter()
        .flat_map(|&k| {
            [
                TableSpec::ellipse(fam(), k),
                TableSpec::annulus(fam(), 3.0, k).unwrap(),
            ]
        })
        .collect()
}

/// Outer phase at eccentric angle `t`, leaving at angle `alpha` from the tangent.
fn phase(t: f64, alpha: f64) -> BoundaryPhase {
    let f = fam();
    let p = f.boundary_point(t);
    let n = normal_at(&f, 0.0, p, Facing::Interior).unwrap();
    let tan = Vec2::new(-n.y, n.x);
    BoundaryPhase::outer(p, tan * alpha.cos() + n * alpha.sin())
}

fn start() -> impl Strategy<Value = BoundaryPhase> {
    (
        0.0..std::f64::consts::TAU,
        0.05..(std::f64::consts::PI - 0.05),
    )
        .prop_map(|(t, a)| phase(t, a))
}

fn kind() -> impl Strategy<Value = MagicKind> {
    prop::sample::select(MagicKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn magic_maps_are_involutions(k in kind(), x in -3.0..3.0f64, y in -2.0..2.0f64, vx in -1.0..1.0f64, vy in -1.0..1.0f64) {
        let (p, v) = (Vec2::new(x, y), Vec2::new(vx, vy));
        let (p1, v1) = apply_magic(k, p, v);
        prop_assert_eq!(apply_magic(k, p1, v1), (p, v));
    }

    #[test]
    fn reflection_keeps_caustic(s in start(), k in kind()) {
        let table = TableSpec::ellipse(fam(), k);
        let l0 = caustic_of_line(&table.fam, s.at, s.v).unwrap().lambda;
        let traj = trajectory(&table, s, 50).unwrap();
        for st in &traj.states {
            let l = caustic_of_line(&table.fam, st.at, st.v).unwrap().lambda;
            prop_assert!((l - l0).abs() < 1e-9 * A, "{l} vs {l0}");
            validate_phase(&table, st).unwrap();
        }
    }

    #[test]
    fn annulus_keeps_caustic(s in start(), k in kind()) {
        let table = TableSpec::annulus(fam(), 3.0, k).unwrap();
        let l0 = caustic_of_line(&table.fam, s.at, s.v).unwrap().lambda;
        let traj = trajectory(&table, s, 50).unwrap();
        for seg in &traj.segments {
            prop_assert!((caustic_of_line(&table.fam, seg.from, seg.v).unwrap().lambda - l0).abs() < 1e-9 * A);
        }
    }

    #[test]
    fn even_segments_match_identity(s in start(), k in kind()) {
        let magic = trajectory(&TableSpec::ellipse(fam(), k), s, 40).unwrap();
        let plain = trajectory(&TableSpec::ellipse(fam(), MagicKind::Identity), s, 40).unwrap();
        for (m, p) in magic.segments.iter().zip(&plain.segments).step_by(2) {
            prop_assert!((m.from - p.from).norm() < 1e-9 && (m.to - p.to).norm() < 1e-9);
        }
        // odd segments are the mirror images
        for (i, (m, p)) in magic.segments.iter().zip(&plain.segments).enumerate().skip(1).step_by(2) {
            let (q, _) = apply_magic(k, p.from, p.v);
            prop_assert!((m.from - q).norm() < 1e-9, "segment {i}");
        }
    }

    #[test]
    fn step_back_inverts_step(s in start(), k in kind(), annulus in any::<bool>()) {
        let table = if annulus { TableSpec::annulus(fam(), 3.0, k).unwrap() } else { TableSpec::ellipse(fam(), k) };
        let mut cur = s;
        for _ in 0..10 {
            let next = step(&table, &cur).unwrap();
            let back = step_back(&table, &next).unwrap();
            prop_assert!(phase_distance(&table.fam, &back, &cur) < 1e-9);
            cur = next;
        }
    }
}

#[test]
fn flip_long_parity_on_closed_orbits() {
    // odd periods need an odd number of long-axis crossings plus flips
    let table = TableSpec::ellipse(fam(), MagicKind::FlipLong);
    let beta = 4.277_359_246_06;
    let s0 = launch(&table, beta, 1.0, 0).unwrap();
    let closure = detect_closure(&table, s0, 10, 1e-6).unwrap();
    assert_eq!(closure.period, 3);
    let t = trajectory(&table, s0, 3).unwrap();
    assert_eq!(t.crossings.flips, 3);
    assert_eq!((t.crossings.long_axis + t.crossings.flips) % 2, 0);
}

#[test]
fn four_periodic_in_every_system() {
    for table in tables().into_iter().filter(|t| !t.is_annulus()) {
        for beta in [36.0 / 13.0, 7.2] {
            let s0 = launch_tangent(&table, beta).unwrap();
            assert!(
                closure_residual(&table, s0, 4).unwrap() < 1e-9,
                "{table:?} β={beta}"
            );
        }
    }
}

#[test]
fn inner_wall_reflects_without_magic() {
    let table = TableSpec::annulus(fam(), 3.0, MagicKind::HalfTurn).unwrap();
    let s = BoundaryPhase::outer(Vec2::new(0.0, 2.0), Vec2::new(0.0, -1.0));
    let d = step_detailed(&table, &s).unwrap();
    assert_eq!(d.segment.hit, Component::Inner);
    assert!((d.next.at - Vec2::new(0.0, 1.0)).norm() < 1e-12);
    assert!((d.next.v - Vec2::new(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn rejects_bad_phases() {
    let table = TableSpec::ellipse(fam(), MagicKind::FlipLong);
    let off = BoundaryPhase::outer(Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0));
    assert!(validate_phase(&table, &off).is_err());
    let outward = BoundaryPhase::outer(Vec2::new(3.0, 0.0), Vec2::new(1.0, 0.0));
    assert!(validate_phase(&table, &outward).is_err());
    assert!(trajectory(&table, phase(0.3, 1.0), 0).is_err());
    assert!(TableSpec::annulus(fam(), 4.5, MagicKind::FlipLong).is_err());
}
