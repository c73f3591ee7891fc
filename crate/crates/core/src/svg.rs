//! Deterministic SVG figures: curvature heatmap, level polylines from
//! marching squares, and critical-point markers.

use std::fmt::Write;

use num_complex::Complex64;

use crate::curvature::{CurvatureGrid, Lattice};

pub const CANVAS: f64 = 800.0;
const SHADES: usize = 64;
const LIGHT: [f64; 3] = [247.0, 251.0, 255.0];
const DARK: [f64; 3] = [8.0, 48.0, 107.0];

/// A straight piece of a level line.
pub type Segment = (Complex64, Complex64);

/// Shade index in `0..SHADES`; 0 is `K = 0`, `SHADES - 1` the grid minimum.
fn shade(k: f64, min_value: f64) -> usize {
    if min_value >= 0.0 {
        return 0;
    }
    let t = (k / min_value).clamp(0.0, 1.0);
    (t * (SHADES - 1) as f64).round() as usize
}

fn color(shade: usize) -> String {
    let t = shade as f64 / (SHADES - 1) as f64;
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(LIGHT[0], DARK[0]),
        mix(LIGHT[1], DARK[1]),
        mix(LIGHT[2], DARK[2])
    )
}

/// Level-`c` segments over the dual lattice whose corners are cell centres.
/// The two ambiguous saddle configurations are split according to the sign
/// of `w` at the middle of the dual square, evaluated by `center`.
pub fn marching_squares<F>(values: &[f64], lattice: &Lattice, level: f64, center: F) -> Vec<Segment>
where
    F: Fn(Complex64) -> f64,
{
    let (nx, ny) = (lattice.nx, lattice.ny);
    let mut out = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            // corners counterclockwise from bottom-left
            let idx = [j * nx + i, j * nx + i + 1, (j + 1) * nx + i + 1, (j + 1) * nx + i];
            let pos = [
                Complex64::new(lattice.x(i), lattice.y(j)),
                Complex64::new(lattice.x(i + 1), lattice.y(j)),
                Complex64::new(lattice.x(i + 1), lattice.y(j + 1)),
                Complex64::new(lattice.x(i), lattice.y(j + 1)),
            ];
            let w: [f64; 4] = idx.map(|k| values[k] - level);
            let above: [bool; 4] = w.map(|v| v > 0.0);
            let crossing = |e: usize| {
                let (a, b) = (e, (e + 1) % 4);
                let t = w[a] / (w[a] - w[b]);
                pos[a] + (pos[b] - pos[a]) * t
            };
            let edges: Vec<usize> = (0..4).filter(|&e| above[e] != above[(e + 1) % 4]).collect();
            match edges.len() {
                2 => out.push((crossing(edges[0]), crossing(edges[1]))),
                4 => {
                    let mid = (pos[0] + pos[2]) * 0.5;
                    let mid_above = center(mid) - level > 0.0;
                    // Join the edges around the corners that differ from the centre.
                    if mid_above == above[0] {
                        out.push((crossing(0), crossing(1)));
                        out.push((crossing(2), crossing(3)));
                    } else {
                        out.push((crossing(3), crossing(0)));
                        out.push((crossing(1), crossing(2)));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

struct Frame {
    lattice: Lattice,
}

impl Frame {
    fn px(&self, z: Complex64) -> (f64, f64) {
        let d = &self.lattice.domain;
        (
            (z.re - d.xmin) / d.width() * CANVAS,
            (d.ymax - z.im) / d.height() * CANVAS,
        )
    }
}

/// Full figure: heatmap of `grid`, optional level polylines, and markers.
pub fn render_svg(grid: &CurvatureGrid, levels: &[Vec<Segment>], markers: &[Complex64]) -> String {
    let lattice = grid.lattice();
    let frame = Frame { lattice };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );

    let cw = CANVAS / grid.nx as f64;
    let ch = CANVAS / grid.ny as f64;
    for j in 0..grid.ny {
        // row j = lowest y first, drawn from the bottom of the canvas
        let top = CANVAS - (j + 1) as f64 * ch;
        let mut i = 0;
        while i < grid.nx {
            let sh = shade(grid.values[j * grid.nx + i], grid.min_value);
            let start = i;
            while i < grid.nx && shade(grid.values[j * grid.nx + i], grid.min_value) == sh {
                i += 1;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                start as f64 * cw,
                top,
                (i - start) as f64 * cw,
                ch,
                color(sh)
            );
        }
    }

    for segs in levels {
        if segs.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (a, b) in segs {
            let (ax, ay) = frame.px(*a);
            let (bx, by) = frame.px(*b);
            let _ = write!(d, "M{ax:.3} {ay:.3}L{bx:.3} {by:.3}");
        }
        let _ = writeln!(s, r##"<path d="{d}" fill="none" stroke="#d95f02" stroke-width="1.5"/>"##);
    }

    for &z in markers {
        let (x, y) = frame.px(z);
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="#e7298a" stroke="#000000" stroke-width="1"/>"##
        );
    }
    s.push_str("</svg>\n");
    s
}
