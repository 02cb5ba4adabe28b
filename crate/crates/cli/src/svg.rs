//! Drawing of 3-dimensional polytopes on the trace plane, projected onto the
//! standard simplex by `x ↦ x / 𝕖ᵀx` in barycentric coordinates.

use std::fmt::Write;

use dmajor_core::arith::to_f64;
use dmajor_core::{Permutation, RVec, Rational};
use num_traits::Zero;

/// Canvas positions of `e₁`, `e₂`, `e₃`: an equilateral triangle.
pub const CORNERS: [(f64, f64); 3] = [(200.0, 20.0), (20.0, 331.769), (380.0, 331.769)];

const MARGIN: f64 = 30.0;

/// Barycentric image of `x / trace`. A zero trace leaves `x` unscaled.
pub fn project(x: &RVec, trace: &Rational) -> (f64, f64) {
    let t = if trace.is_zero() { 1.0 } else { to_f64(trace) };
    let w: Vec<f64> = x.iter().map(|v| to_f64(v) / t).collect();
    let px = w.iter().zip(CORNERS.iter()).map(|(a, c)| a * c.0).sum();
    let py = w.iter().zip(CORNERS.iter()).map(|(a, c)| a * c.1).sum();
    (px, py)
}

fn polygon(points: &[(f64, f64)]) -> String {
    points.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect::<Vec<_>>().join(" ")
}

/// Orders the points counterclockwise around their centroid.
fn around_centroid(mut points: Vec<((f64, f64), String)>) -> Vec<((f64, f64), String)> {
    let k = points.len() as f64;
    let cx = points.iter().map(|p| p.0 .0).sum::<f64>() / k;
    let cy = points.iter().map(|p| p.0 .1).sum::<f64>() / k;
    points.sort_by(|a, b| {
        let ta = (a.0 .1 - cy).atan2(a.0 .0 - cx);
        let tb = (b.0 .1 - cy).atan2(b.0 .0 - cx);
        ta.total_cmp(&tb)
    });
    points
}

/// The simplex outline, the polytope polygon with `σ`-labelled vertices, and
/// a marker at the generator `y`.
pub fn render(vertices: &[(RVec, Permutation)], y: &RVec, trace: &Rational) -> String {
    let placed: Vec<((f64, f64), String)> = vertices
        .iter()
        .map(|(v, sigma)| (project(v, trace), format!("σ = {sigma}")))
        .collect();
    let placed = around_centroid(placed);
    let gen = project(y, trace);
    let all = CORNERS.iter().copied().chain(placed.iter().map(|p| p.0)).chain([gen]);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (x, y) in all {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let (w, h) = (x1 - x0 + 2.0 * MARGIN, y1 - y0 + 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {w:.3} {h:.3}" width="{w:.0}" height="{h:.0}">"#,
        x0 - MARGIN,
        y0 - MARGIN
    );
    let _ = writeln!(
        out,
        r##"  <polygon points="{}" fill="none" stroke="#888" stroke-width="1"/>"##,
        polygon(&CORNERS)
    );
    for (k, (cx, cy)) in CORNERS.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"  <text x="{cx:.3}" y="{:.3}" font-size="12" text-anchor="middle" fill="#888">e{}</text>"##,
            if k == 0 { cy - 6.0 } else { cy + 16.0 },
            k + 1
        );
    }
    let shape: Vec<(f64, f64)> = placed.iter().map(|p| p.0).collect();
    let _ = writeln!(
        out,
        r##"  <polygon points="{}" fill="#9cc3e6" fill-opacity="0.6" stroke="#1f5a96" stroke-width="1.5"/>"##,
        polygon(&shape)
    );
    for ((x, y), label) in &placed {
        let _ = writeln!(out, r##"  <circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#1f5a96"/>"##);
        let _ = writeln!(out, r#"  <text x="{:.3}" y="{:.3}" font-size="10">{label}</text>"#, x + 5.0, y - 5.0);
    }
    let _ = writeln!(
        out,
        r##"  <circle cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
        gen.0, gen.1
    );
    out.push_str("</svg>\n");
    out
}
