//! Rotation number of the standard billiard, measured by simulation.

use super::CertError;
use crate::dynamics::{launch_tangent, polar_increment, step_detailed, MagicKind, TableSpec};
use crate::geometry::{CausticKind, ConfocalFamily};

/// Reflections simulated per measurement.
pub const ROTATION_STEPS: usize = 10_000;

/// Long-run rotation number of the standard billiard with caustic `β`.
///
/// For an ellipse caustic this is the polar winding per reflection. For a
/// hyperbolic caustic it is half the number of short-axis crossings per
/// reflection, i.e. librations between the hyperbola branches per reflection.
pub fn rotation_number(a: f64, b: f64, beta: f64) -> Result<f64, CertError> {
    let fam = ConfocalFamily::new(a, b).map_err(|e| CertError::Dynamics(e.into()))?;
    match fam.classify(beta) {
        CausticKind::DegenerateFocal => return Err(CertError::DegenerateFocal { beta }),
        CausticKind::Ellipse | CausticKind::Hyperbola => {}
        _ => return Err(CertError::InvalidCaustic { beta }),
    }
    let table = TableSpec::ellipse(fam, MagicKind::Identity);
    let mut s = launch_tangent(&table, beta).ok_or(CertError::InvalidCaustic { beta })?;
    let mut turn = 0.0;
    let mut crossings = 0usize;
    for _ in 0..ROTATION_STEPS {
        let d = step_detailed(&table, &s)?;
        turn += polar_increment(d.segment.from, d.segment.to);
        if d.segment.from.x * d.segment.to.x < 0.0 {
            crossings += 1;
        }
        s = d.next;
    }
    let n = ROTATION_STEPS as f64;
    Ok(if beta < b {
        turn.abs() / (std::f64::consts::TAU * n)
    } else {
        crossings as f64 / (2.0 * n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn simpson(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut s = g(lo) + g(hi);
        for i in 1..n {
            s += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    // K1/(2 K2) with K1 = ∫_0^{c1} dx/√|f|, K2 = ∫_{c2}^a dx/√|f|.
    fn quadrature(a: f64, b: f64, beta: f64) -> f64 {
        let (c1, c2) = (b.min(beta), b.max(beta));
        let k1 = simpson(
            |t| {
                let x = c1 - t * t;
                2.0 / ((a - x) * (c2 - x)).sqrt()
            },
            0.0,
            c1.sqrt(),
            2000,
        );
        let k2 = simpson(
            |phi| {
                let x = c2 + (a - c2) * phi.sin().powi(2);
                2.0 / (x - c1).sqrt()
            },
            0.0,
            FRAC_PI_2,
            2000,
        );
        k1 / (2.0 * k2)
    }

    #[test]
    fn matches_quadrature() {
        for beta in [0.5, 2.5, 3.5, 5.0, 6.0, 8.0] {
            let sim = rotation_number(9.0, 4.0, beta).unwrap();
            let q = quadrature(9.0, 4.0, beta);
            assert!((sim - q).abs() < 2e-4, "β={beta}: {sim} vs {q}");
        }
    }

    #[test]
    fn quarter_at_four_periodic_caustic() {
        let beta = 36.0 / 13.0;
        assert!((quadrature(9.0, 4.0, beta) - 0.25).abs() < 1e-9);
        assert!((rotation_number(9.0, 4.0, beta).unwrap() - 0.25).abs() < 1e-4);
    }

    #[test]
    fn small_near_boundary() {
        let r1 = rotation_number(9.0, 4.0, 0.01).unwrap();
        let r2 = rotation_number(9.0, 4.0, 0.1).unwrap();
        assert!(r1 > 0.0 && r1 < r2 && r2 < 0.1);
    }

    #[test]
    fn focal_level_rejected() {
        assert!(matches!(
            rotation_number(9.0, 4.0, 4.0),
            Err(CertError::DegenerateFocal { .. })
        ));
    }
}
