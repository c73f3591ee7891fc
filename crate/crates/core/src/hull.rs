//! Planar convex hulls (monotone chain) and slack-aware containment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hull vertices in counterclockwise order. One vertex is a point hull, two
/// a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexHull2D {
    pub vertices: Vec<Complex64>,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

pub fn convex_hull(points: &[Complex64]) -> Result<ConvexHull2D> {
    convex_hull_with(points, 1e-12)
}

/// `collinearity` is relative: a turn counts only if
/// `|cross| > collinearity * scale^2`, with `scale` the bounding-box diagonal.
pub fn convex_hull_with(points: &[Complex64], collinearity: f64) -> Result<ConvexHull2D> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(ConvexHull2D { vertices: pts });
    }

    let (lo, hi) = pts.iter().fold(
        (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| {
            (
                Complex64::new(lo.re.min(p.re), lo.im.min(p.im)),
                Complex64::new(hi.re.max(p.re), hi.im.max(p.im)),
            )
        },
    );
    let eps = collinearity * (hi - lo).norm_sqr();

    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    Ok(ConvexHull2D { vertices: hull })
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

impl ConvexHull2D {
    /// Distance from `p` to the hull; zero inside.
    pub fn distance(&self, p: Complex64) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => (p - v[0]).norm(),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|k| cross(v[k], v[(k + 1) % n], p) >= 0.0);
                if inside {
                    0.0
                } else {
                    (0..n)
                        .map(|k| segment_distance(p, v[k], v[(k + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }
}

pub fn point_in_hull(p: Complex64, hull: &ConvexHull2D, slack: f64) -> bool {
    hull.distance(p) <= slack
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn collinear_roots_give_segment() {
        let s3 = 3f64.sqrt();
        let h = convex_hull(&[c(0.0, 0.0), c(s3, 0.0), c(-s3, 0.0)]).unwrap();
        assert_eq!(h.vertices, vec![c(-s3, 0.0), c(s3, 0.0)]);
        assert!(point_in_hull(c(1.0, 0.0), &h, 1e-8));
        assert!(!point_in_hull(c(0.0, 2.0), &h, 1e-8));
        assert!((h.distance(c(0.0, 2.0)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_point() {
        let h = convex_hull(&[c(1.0, 0.0)]).unwrap();
        assert_eq!(h.vertices, vec![c(1.0, 0.0)]);
        let h = convex_hull(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(h.vertices.len(), 1);
        assert!(point_in_hull(c(1.0, 0.0), &h, 0.0));
    }

    #[test]
    fn square_drops_interior() {
        let h = convex_hull(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(h.vertices.len(), 4);
        for v in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)] {
            assert!(h.vertices.contains(&v));
            assert!(point_in_hull(v, &h, 0.0));
        }
        // counterclockwise
        let n = h.vertices.len();
        for k in 0..n {
            assert!(cross(h.vertices[k], h.vertices[(k + 1) % n], h.vertices[(k + 2) % n]) > 0.0);
        }
        assert!(point_in_hull(c(0.2, 0.2), &h, 0.0));
        assert!(!point_in_hull(c(0.6, 0.6), &h, 1e-3));
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(convex_hull(&[]), Err(Error::EmptyPointSet));
    }

    #[test]
    fn nearly_collinear_middle_point_dropped() {
        let h = convex_hull(&[c(-1.0, 0.0), c(0.0, 1e-15), c(1.0, 0.0)]).unwrap();
        assert_eq!(h.vertices.len(), 2);
    }
}
