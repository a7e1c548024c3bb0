//! Poincaré disk pictures of the polygons from [`crate::hyperbolic`].

use std::f64::consts::PI;
use std::fmt::Write;

use crate::hyperbolic::{HyperbolicError, PairingWord, PolygonMetrics, PolygonSpec};

const SIZE: f64 = 640.0;
const DISK: f64 = 300.0;

fn screen(p: (f64, f64)) -> (f64, f64) {
    (SIZE / 2.0 + DISK * p.0, SIZE / 2.0 - DISK * p.1)
}

/// Circle through `a`, `b` and `c`, or `None` when they are collinear.
fn circumcircle(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<((f64, f64), f64)> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-12 {
        return None;
    }
    let sq = |p: (f64, f64)| p.0 * p.0 + p.1 * p.1;
    let ux = (sq(a) * (b.1 - c.1) + sq(b) * (c.1 - a.1) + sq(c) * (a.1 - b.1)) / d;
    let uy = (sq(a) * (c.0 - b.0) + sq(b) * (a.0 - c.0) + sq(c) * (b.0 - a.0)) / d;
    let r = ((a.0 - ux).powi(2) + (a.1 - uy).powi(2)).sqrt();
    Some(((ux, uy), r))
}

/// SVG path data for the geodesic from `p` to `q` inside the unit disk.
fn geodesic(p: (f64, f64), q: (f64, f64)) -> String {
    let (sp, sq) = (screen(p), screen(q));
    let norm = p.0 * p.0 + p.1 * p.1;
    let inverse = (p.0 / norm, p.1 / norm);
    match circumcircle(p, q, inverse) {
        Some((_, r)) if r < 1e6 => {
            // the arc bows towards the origin; y is flipped on screen
            let cross = p.0 * q.1 - p.1 * q.0;
            let sweep = if cross > 0.0 { 1 } else { 0 };
            format!(
                "M {:.4} {:.4} A {:.4} {:.4} 0 0 {sweep} {:.4} {:.4}",
                sp.0,
                sp.1,
                r * DISK,
                r * DISK,
                sq.0,
                sq.1
            )
        }
        _ => format!("M {:.4} {:.4} L {:.4} {:.4}", sp.0, sp.1, sq.0, sq.1),
    }
}

fn color(pair: usize, pairs: usize) -> String {
    format!("hsl({:.1}, 70%, 42%)", 360.0 * pair as f64 / pairs.max(1) as f64)
}

/// Draws the polygon with paired sides sharing a color and a letter.
pub fn render_svg(spec: &PolygonSpec, metrics: &PolygonMetrics, word: &PairingWord) -> Result<String, HyperbolicError> {
    let k = spec.sides;
    if metrics.sides != k || word.sides != k || metrics.vertex_radii.len() != k {
        return Err(HyperbolicError::Mismatch(format!(
            "spec has {k} sides, metrics {}, word {}",
            metrics.sides, word.sides
        )));
    }
    let vertices: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let r = (metrics.vertex_radii[i] / 2.0).tanh();
            let phi = 2.0 * PI * i as f64 / k as f64;
            (r * phi.cos(), r * phi.sin())
        })
        .collect();

    let labels = word.labels();
    let mut pair_of = vec![0; k];
    let mut next = 0;
    for i in 0..k {
        let j = word.partner[i] - 1;
        if i < j {
            pair_of[i] = next;
            pair_of[j] = next;
            next += 1;
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r##"<circle class="boundary" cx="{c}" cy="{c}" r="{DISK}" fill="#f7f7f2" stroke="#999" stroke-width="1"/>"##,
        c = SIZE / 2.0
    );
    for i in 0..k {
        let (p, q) = (vertices[i], vertices[(i + 1) % k]);
        let _ = writeln!(
            out,
            r#"<path class="side" data-side="{}" d="{}" fill="none" stroke="{}" stroke-width="2.5"/>"#,
            i + 1,
            geodesic(p, q),
            color(pair_of[i], next)
        );
    }
    for i in 0..k {
        let (p, q) = (vertices[i], vertices[(i + 1) % k]);
        let mid = screen(((p.0 + q.0) * 0.45, (p.1 + q.1) * 0.45));
        let (name, inverse) = match labels[i].strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (labels[i].as_str(), false),
        };
        let sup = if inverse {
            r#"<tspan baseline-shift="super" font-size="9">-1</tspan>"#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<text class="label" x="{:.4}" y="{:.4}" fill="{}" font-family="serif" font-size="14" text-anchor="middle">{name}{sup}</text>"#,
            mid.0,
            mid.1,
            color(pair_of[i], next)
        );
    }
    for (i, &v) in vertices.iter().enumerate() {
        let s = screen(v);
        if spec.rotation_steps == 2 && i % 2 == 1 {
            let _ = writeln!(
                out,
                r##"<rect class="vertex" x="{:.4}" y="{:.4}" width="7" height="7" fill="#333"/>"##,
                s.0 - 3.5,
                s.1 - 3.5
            );
        } else {
            let _ = writeln!(
                out,
                r##"<circle class="vertex" cx="{:.4}" cy="{:.4}" r="3.5" fill="#333"/>"##,
                s.0, s.1
            );
        }
    }
    let c = SIZE / 2.0;
    let _ = writeln!(out, r##"<circle class="center" cx="{c}" cy="{c}" r="3" fill="#c00"/>"##);
    let _ = writeln!(
        out,
        r##"<text x="{:.1}" y="{:.1}" font-family="serif" font-size="13" fill="#c00">O</text>"##,
        c + 6.0,
        c - 6.0
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DataSet;
    use crate::hyperbolic::{pairing_word, polygon_spec, solve_metrics};
    use std::collections::BTreeSet;

    fn render(n: i64, pairs: &[(i64, i64)]) -> String {
        let d = DataSet::with_pairs(n, 0, pairs).unwrap();
        let spec = polygon_spec(&d).unwrap();
        let metrics = solve_metrics(&spec).unwrap();
        render_svg(&spec, &metrics, &pairing_word(&d).unwrap()).unwrap()
    }

    #[test]
    fn fourteen_gon_picture() {
        let svg = render(14, &[(1, 2), (1, 7), (5, 14)]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches(r#"class="side""#).count(), 14);
        let letters: BTreeSet<&str> = svg.split(r#"text-anchor="middle">"#).skip(1).map(|s| &s[..1]).collect();
        assert_eq!(letters.len(), 7);
        assert!(svg.contains(r#"class="center""#));
        assert_eq!(svg, render(14, &[(1, 2), (1, 7), (5, 14)]));
    }

    #[test]
    fn alternating_markers() {
        let svg = render(6, &[(2, 3), (1, 6), (1, 6)]);
        assert_eq!(svg.matches("<rect").count(), 6);
        assert_eq!(svg.matches(r#"<circle class="vertex""#).count(), 6);
    }

    #[test]
    fn mismatched_inputs() {
        let d = DataSet::with_pairs(7, 0, &[(1, 7), (2, 7), (4, 7)]).unwrap();
        let spec = polygon_spec(&d).unwrap();
        let mut metrics = solve_metrics(&spec).unwrap();
        metrics.sides = 3;
        assert!(render_svg(&spec, &metrics, &pairing_word(&d).unwrap()).is_err());
    }

    #[test]
    fn geodesic_bows_inward() {
        let c = circumcircle((0.5, 0.0), (0.0, 0.5), (2.0, 0.0)).unwrap();
        // orthogonal to the unit circle: |center|^2 = r^2 + 1
        let (cx, cy) = c.0;
        assert!((cx * cx + cy * cy - c.1 * c.1 - 1.0).abs() < 1e-9);
    }
}
