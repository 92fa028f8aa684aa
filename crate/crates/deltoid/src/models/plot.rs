//! SVG pictures of the deltoid domain.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;

use super::deltoid::{deltoid_curve, membership_deltoid, Membership};

const SIZE: f64 = 600.0;
const EXTENT: f64 = 1.2;

fn to_px(z: Complex64) -> (f64, f64) {
    let s = SIZE / (2.0 * EXTENT);
    ((z.re + EXTENT) * s, (EXTENT - z.im) * s)
}

/// Overlays drawn under the boundary curve.
#[derive(Default)]
pub struct PlotLayers<'a> {
    /// Function sampled on a square grid of cells; only cells centred in the domain are drawn.
    pub field: Option<(&'a dyn Fn(Complex64) -> f64, usize)>,
    /// Extra points, e.g. images Z(theta) of a theta grid.
    pub points: Vec<Complex64>,
}

fn diverging(t: f64) -> String {
    // t in [-1, 1]: blue to white to red
    let t = t.clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        (255.0 * (1.0 + t), 255.0 * (1.0 + t), 255.0)
    };
    format!("rgb({},{},{})", r as u8, g as u8, b as u8)
}

pub fn deltoid_svg(layers: &PlotLayers) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    if let Some((f, n)) = layers.field {
        let h = 2.0 * EXTENT / n as f64;
        let mut cells = Vec::new();
        let mut scale: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let c = Complex64::new(-EXTENT + (a as f64 + 0.5) * h, -EXTENT + (b as f64 + 0.5) * h);
                if membership_deltoid(c) == Membership::Interior {
                    let v = f(c);
                    scale = scale.max(v.abs());
                    cells.push((c, v));
                }
            }
        }
        let px = SIZE * h / (2.0 * EXTENT);
        for (c, v) in cells {
            let (x, y) = to_px(c);
            let t = if scale > 0.0 { v / scale } else { 0.0 };
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x - px / 2.0,
                y - px / 2.0,
                px,
                px,
                diverging(t)
            );
        }
    }
    for p in &layers.points {
        let (x, y) = to_px(*p);
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="1" fill="#555"/>"##);
    }
    let pts: Vec<String> = (0..=720)
        .map(|k| {
            let (x, y) = to_px(deltoid_curve(2.0 * PI * k as f64 / 720.0));
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(s, r#"<polyline fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
    for k in 0..3 {
        let (x, y) = to_px(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="red"/>"#);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_passes_through_cusps() {
        assert!((deltoid_curve(0.0) - 1.0).norm() < 1e-15);
        let svg = deltoid_svg(&PlotLayers::default());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("fill=\"red\"").count(), 3);
    }
}
