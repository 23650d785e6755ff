//! SVG rendering of a trajectory: walls, dashed caustic, segments, numbered impacts.

use std::fmt::Write as _;

use magic_billiards::dynamics::Trajectory;
use magic_billiards::{CausticKind, TableSpec};

const SAMPLES: usize = 64;

struct Frame {
    /// Drawing units per model unit.
    scale: f64,
}

impl Frame {
    /// Model point to SVG coordinates, with y pointing up.
    fn pt(&self, x: f64, y: f64) -> (f64, f64) {
        (x * self.scale, -y * self.scale)
    }
}

fn ellipse(out: &mut String, f: &Frame, rx: f64, ry: f64, class: &str) {
    let _ = writeln!(
        out,
        r#"  <ellipse class="{class}" cx="0" cy="0" rx="{:.6}" ry="{:.6}"/>"#,
        rx * f.scale,
        ry * f.scale
    );
}

/// Both branches of the hyperbola `C_β`, clipped to the outer ellipse.
fn hyperbola(out: &mut String, f: &Frame, a: f64, b: f64, beta: f64) {
    for sign in [1.0, -1.0] {
        let pts: Vec<String> = (0..=2 * SAMPLES)
            .map(|k| {
                // λ₁ runs 0 → b → 0 along the branch, so the points stay inside the table
                let t = k as f64 / SAMPLES as f64 - 1.0;
                let l1 = b * (1.0 - t * t);
                let x = sign * ((a - l1) * (a - beta) / (a - b)).max(0.0).sqrt();
                let y = t.signum() * ((b - l1) * (beta - b) / (a - b)).max(0.0).sqrt();
                let (px, py) = f.pt(x, y);
                format!("{px:.6},{py:.6}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"  <polyline class="caustic" points="{}"/>"#,
            pts.join(" ")
        );
    }
}

pub fn render(table: &TableSpec, traj: &Trajectory) -> String {
    let fam = &table.fam;
    let (sa, sb) = fam.semi_axes();
    let f = Frame { scale: 100.0 };
    let (w, h) = (2.1 * sa * f.scale, 2.1 * sb * f.scale);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="{:.6} {:.6} {w:.6} {h:.6}">"#,
        -w / 2.0,
        -h / 2.0
    );
    out.push_str(
        "  <style>\n    .wall { fill: none; stroke: black; stroke-width: 2; }\n    \
         .caustic { fill: none; stroke: #1f77b4; stroke-width: 1.5; stroke-dasharray: 6 4; }\n    \
         .segment { fill: none; stroke: #d62728; stroke-width: 1.2; }\n    \
         .impact { fill: black; }\n    .start { fill: #2ca02c; }\n    \
         text { font-family: sans-serif; font-size: 14px; }\n  </style>\n",
    );
    ellipse(&mut out, &f, sa, sb, "wall");
    if let Some(li) = table.inner_lambda() {
        ellipse(
            &mut out,
            &f,
            (fam.a() - li).sqrt(),
            (fam.b() - li).sqrt(),
            "wall",
        );
    }
    let beta = traj.caustic.lambda;
    match traj.caustic.kind {
        CausticKind::Ellipse => ellipse(
            &mut out,
            &f,
            (fam.a() - beta).sqrt(),
            (fam.b() - beta).sqrt(),
            "caustic",
        ),
        CausticKind::Hyperbola => hyperbola(&mut out, &f, fam.a(), fam.b(), beta),
        _ => {}
    }
    for seg in &traj.segments {
        let (x0, y0) = f.pt(seg.from.x, seg.from.y);
        let (x1, y1) = f.pt(seg.to.x, seg.to.y);
        let _ = writeln!(
            out,
            r#"  <path class="segment" d="M {x0:.6} {y0:.6} L {x1:.6} {y1:.6}"/>"#
        );
    }
    let s0 = traj.states[0].at;
    let (x, y) = f.pt(s0.x, s0.y);
    let _ = writeln!(
        out,
        r#"  <rect class="start" x="{:.6}" y="{:.6}" width="8" height="8"/>"#,
        x - 4.0,
        y - 4.0
    );
    for (i, s) in traj.states.iter().enumerate().skip(1) {
        let (x, y) = f.pt(s.at.x, s.at.y);
        let _ = writeln!(
            out,
            r#"  <circle class="impact" cx="{x:.6}" cy="{y:.6}" r="3"/>"#
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.6}" y="{:.6}">{i}</text>"#,
            x + 5.0,
            y - 5.0
        );
    }
    out.push_str("</svg>\n");
    out
}
