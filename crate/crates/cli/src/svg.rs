//! Skeleton drawings over the fundamental domain `[0,1]^n` for `n <= 2`.

use std::fmt::Write;

use ccc_core::fan::{SkeletonCell, StackyFan};
use ccc_core::linalg::Rat;
use num::ToPrimitive;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const GLYPH: f64 = 18.0;

fn f(r: &Rat) -> f64 {
    r.to_f64().expect("finite")
}

/// Screen coordinates of a point of the unit square (y up).
fn screen(x: f64, y: f64) -> (f64, f64) {
    (MARGIN + x * (SIZE - 2.0 * MARGIN), SIZE - MARGIN - y * (SIZE - 2.0 * MARGIN))
}

fn unit(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Pieces of the line `<v, x> = c + k` inside the unit square, over all integers `k`.
fn clipped_lines(v: &[f64], c: f64) -> Vec<((f64, f64), (f64, f64))> {
    let lo: f64 = v.iter().map(|x| x.min(0.0)).sum();
    let hi: f64 = v.iter().map(|x| x.max(0.0)).sum();
    let mut out = Vec::new();
    let first = (lo - c).ceil() as i64;
    let last = (hi - c).floor() as i64;
    for k in first..=last {
        let level = c + k as f64;
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for t in [0.0, 1.0] {
            if v[1] != 0.0 {
                let y = (level - v[0] * t) / v[1];
                if (-1e-9..=1.0 + 1e-9).contains(&y) {
                    pts.push((t, y.clamp(0.0, 1.0)));
                }
            }
            if v[0] != 0.0 {
                let x = (level - v[1] * t) / v[0];
                if (-1e-9..=1.0 + 1e-9).contains(&x) {
                    pts.push((x.clamp(0.0, 1.0), t));
                }
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
        if pts.len() >= 2 {
            out.push((pts[0], pts[pts.len() - 1]));
        }
    }
    out
}

fn arrow(out: &mut String, at: (f64, f64), dir: &[f64]) {
    let d = unit(dir);
    let (x, y) = screen(at.0, at.1);
    let (ex, ey) = (x + GLYPH * d[0], y - GLYPH * d.get(1).copied().unwrap_or(0.0));
    writeln!(out, r##"  <line x1="{x:.2}" y1="{y:.2}" x2="{ex:.2}" y2="{ey:.2}" stroke="#c0392b" stroke-width="2"/>"##).unwrap();
    writeln!(out, r##"  <circle cx="{ex:.2}" cy="{ey:.2}" r="2.5" fill="#c0392b"/>"##).unwrap();
}

fn wedge(out: &mut String, at: (f64, f64), dirs: &[Vec<f64>]) {
    let (x, y) = screen(at.0, at.1);
    let mut d = String::new();
    write!(d, "M {x:.2} {y:.2}").unwrap();
    for v in dirs {
        let u = unit(v);
        write!(d, " L {:.2} {:.2}", x + GLYPH * u[0], y - GLYPH * u[1]).unwrap();
    }
    d.push_str(" Z");
    writeln!(out, r##"  <path d="{d}" fill="#c0392b" fill-opacity="0.35" stroke="#c0392b"/>"##).unwrap();
    writeln!(out, r##"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#2c3e50"/>"##).unwrap();
}

/// Deterministic SVG of the skeleton, or `None` when the rank exceeds two.
pub fn skeleton_svg(sf: &StackyFan, cells: &[SkeletonCell]) -> Option<String> {
    let n = sf.n_rank();
    if n > 2 {
        return None;
    }
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r##"  <rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##).unwrap();
    let (x0, y0) = screen(0.0, 0.0);
    let (x1, y1) = screen(1.0, 1.0);
    if n == 2 {
        writeln!(
            out,
            r##"  <rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="#ecf0f1" stroke="#7f8c8d"/>"##,
            x1 - x0,
            y0 - y1
        )
        .unwrap();
    } else {
        let ym = SIZE / 2.0;
        writeln!(out, r##"  <line x1="{x0:.2}" y1="{ym:.2}" x2="{x1:.2}" y2="{ym:.2}" stroke="#7f8c8d" stroke-width="3"/>"##).unwrap();
    }
    // the 1-dimensional picture sits on the horizontal midline
    let lift = |x: f64| if n == 1 { (x, 0.5) } else { (x, 0.0) };
    for c in cells {
        let rays: Vec<Vec<f64>> = sf.fan().cone(c.cone).rays.iter().map(|&r| sf.fan().rays()[r].iter().map(|x| x.to_f64().unwrap()).collect()).collect();
        let neg: Vec<Vec<f64>> = rays.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let chi: Vec<f64> = c.chi.iter().map(f).collect();
        match (n, rays.len()) {
            (_, 0) => {}
            (1, _) => {
                let at = lift(chi[0].rem_euclid(1.0));
                wedge(&mut out, at, &[]);
                arrow(&mut out, at, &neg[0]);
            }
            (2, 1) => {
                let v = &rays[0];
                let c0 = v[0] * chi[0] + v[1] * chi[1];
                for (a, b) in clipped_lines(v, c0) {
                    let (ax, ay) = screen(a.0, a.1);
                    let (bx, by) = screen(b.0, b.1);
                    writeln!(out, r##"  <line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="#2c3e50" stroke-width="2"/>"##).unwrap();
                    arrow(&mut out, ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), &neg[0]);
                }
            }
            _ => {
                let at = (chi[0].rem_euclid(1.0), chi[1].rem_euclid(1.0));
                wedge(&mut out, at, &neg);
            }
        }
    }
    out.push_str("</svg>\n");
    Some(out)
}
