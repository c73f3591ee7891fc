//! Critical points of the harmonic parts, Gauss–Lucas containment and the
//! flat-set cardinality bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::flat_points_with;
use crate::error::{Error, Result};
use crate::hull::{convex_hull_with, ConvexHull2D};
use crate::poly::ComplexPoly;
use crate::roots::{cluster_radius, roots_with};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalKind {
    NonDegenerateSaddle,
    Degenerate,
}

/// A zero of `f'`. It is critical for `u`, `v` and every `Re(e^{it} f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Complex64,
    pub u_value: f64,
    pub v_value: f64,
    pub kind: CriticalKind,
    pub fpp: Complex64,
    /// Multiplicity as a root of `f'`.
    pub multiplicity: usize,
}

impl CriticalPoint {
    /// `u_xx u_yy - u_xy^2`, which equals `-|f''|^2` for harmonic `u`.
    pub fn hessian_det(&self) -> f64 {
        let (uxx, uxy) = (self.fpp.re, -self.fpp.im);
        -uxx * uxx - uxy * uxy
    }
}

pub fn degeneracy_threshold(p: &ComplexPoly, tol: &Tolerances) -> f64 {
    let d2 = p.derivative().derivative();
    tol.degeneracy * (1.0 + d2.max_coeff_norm())
}

pub fn critical_points(p: &ComplexPoly) -> Result<Vec<CriticalPoint>> {
    critical_points_with(p, &Tolerances::default())
}

pub fn critical_points_with(p: &ComplexPoly, tol: &Tolerances) -> Result<Vec<CriticalPoint>> {
    if p.degree() <= 1 {
        return Ok(Vec::new());
    }
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let threshold = degeneracy_threshold(p, tol);
    let set = roots_with(&d1, tol)?;
    Ok(set
        .roots
        .iter()
        .map(|r| {
            let z = r.location;
            let f = p.value_at(z);
            let fpp = d2.value_at(z);
            // A repeated zero of f' is a zero of f'' as well.
            let kind = if r.multiplicity > 1 || fpp.norm() <= threshold {
                CriticalKind::Degenerate
            } else {
                CriticalKind::NonDegenerateSaddle
            };
            CriticalPoint {
                location: z,
                u_value: f.re,
                v_value: f.im,
                kind,
                fpp,
                multiplicity: r.multiplicity,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussLucasReport {
    pub hull_of_f_roots: ConvexHull2D,
    pub hull_of_fprime_roots: ConvexHull2D,
    pub fprime_roots_contained: bool,
    pub fsecond_roots_contained_in_delta: bool,
    pub max_violation_distance: f64,
}

pub fn gauss_lucas_report(p: &ComplexPoly) -> Result<GaussLucasReport> {
    gauss_lucas_report_with(p, &Tolerances::default())
}

/// Checks roots of `P'` against the hull of roots of `P`, and roots of `P''`
/// against the hull of roots of `P'`.
pub fn gauss_lucas_report_with(p: &ComplexPoly, tol: &Tolerances) -> Result<GaussLucasReport> {
    if p.degree() < 2 {
        return Err(Error::InsufficientDegree {
            needed: 2,
            got: p.degree(),
        });
    }
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let r0 = roots_with(p, tol)?.locations();
    let r1 = roots_with(&d1, tol)?.locations();
    let r2 = if d2.degree() >= 1 {
        roots_with(&d2, tol)?.locations()
    } else {
        Vec::new()
    };
    let outer = convex_hull_with(&r0, tol.collinearity)?;
    let inner = convex_hull_with(&r1, tol.collinearity)?;
    let worst = |hull: &ConvexHull2D, pts: &[Complex64]| pts.iter().map(|&z| hull.distance(z)).fold(0.0, f64::max);
    let v1 = worst(&outer, &r1);
    let v2 = worst(&inner, &r2);
    Ok(GaussLucasReport {
        hull_of_f_roots: outer,
        hull_of_fprime_roots: inner,
        fprime_roots_contained: v1 <= tol.containment_slack,
        fsecond_roots_contained_in_delta: v2 <= tol.containment_slack,
        max_violation_distance: v1.max(v2),
    })
}

/// Distinct flat points number at most `deg P - 2`.
pub fn flat_set_bound_check(p: &ComplexPoly) -> Result<bool> {
    flat_set_bound_check_with(p, &Tolerances::default())
}

pub fn flat_set_bound_check_with(p: &ComplexPoly, tol: &Tolerances) -> Result<bool> {
    if p.degree() < 2 {
        return Err(Error::InsufficientDegree {
            needed: 2,
            got: p.degree(),
        });
    }
    Ok(flat_points_with(p, tol)?.len() <= p.degree() - 2)
}

/// Whether a critical point sits on a flat point (within the clustering radius of `P''`).
pub fn is_on_flat_set(p: &ComplexPoly, cp: &CriticalPoint, tol: &Tolerances) -> Result<bool> {
    let flats = match flat_points_with(p, tol) {
        Ok(f) => f,
        Err(Error::IdenticallyFlat) => return Ok(true),
        Err(e) => return Err(e),
    };
    let d2 = p.derivative().derivative();
    let radius = cluster_radius(&d2, tol).max(cluster_radius(&p.derivative(), tol));
    Ok(flats.nearest(cp.location).is_some_and(|(_, d)| d <= radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic() -> ComplexPoly {
        ComplexPoly::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn cubic_has_two_saddles() {
        let cps = critical_points(&cubic()).unwrap();
        assert_eq!(cps.len(), 2);
        for cp in &cps {
            assert_eq!(cp.kind, CriticalKind::NonDegenerateSaddle);
            let s = cp.location.re.signum();
            assert!((cp.location - c(s, 0.0)).norm() < 1e-12);
            assert!((cp.u_value + 2.0 * s).abs() < 1e-12);
            assert!(cp.v_value.abs() < 1e-12);
            assert!((cp.fpp - c(6.0 * s, 0.0)).norm() < 1e-10);
            assert!(cp.hessian_det() < 0.0);
        }
    }

    #[test]
    fn square_and_cube() {
        let cps = critical_points(&ComplexPoly::monomial(2)).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].kind, CriticalKind::NonDegenerateSaddle);
        let cps = critical_points(&ComplexPoly::monomial(3)).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].kind, CriticalKind::Degenerate);
        assert!(is_on_flat_set(&ComplexPoly::monomial(3), &cps[0], &Tolerances::default()).unwrap());
        assert!(critical_points(&ComplexPoly::monomial(1)).unwrap().is_empty());
        assert!(critical_points(&ComplexPoly::zero()).unwrap().is_empty());
    }

    #[test]
    fn gauss_lucas_examples() {
        let r = gauss_lucas_report(&cubic()).unwrap();
        assert!(r.fprime_roots_contained && r.fsecond_roots_contained_in_delta);
        assert!(r.max_violation_distance <= 1e-10);
        assert_eq!(r.hull_of_f_roots.vertices.len(), 2);
        for n in 2..=6 {
            let r = gauss_lucas_report(&ComplexPoly::monomial(n)).unwrap();
            assert_eq!(r.hull_of_f_roots.vertices.len(), 1, "z^{n}");
            assert_eq!(r.hull_of_fprime_roots.vertices.len(), 1);
            assert!(r.fprime_roots_contained && r.fsecond_roots_contained_in_delta);
        }
        assert!(matches!(
            gauss_lucas_report(&ComplexPoly::monomial(1)),
            Err(Error::InsufficientDegree { .. })
        ));
    }

    #[test]
    fn unit_circle_roots_contained() {
        let roots: Vec<_> = [0.3, 1.1, 2.0, 2.9, 4.4, 5.5]
            .iter()
            .map(|&a: &f64| Complex64::from_polar(1.0, a))
            .collect();
        let p = ComplexPoly::from_roots(&roots, c(1.0, 0.0)).unwrap();
        let r = gauss_lucas_report(&p).unwrap();
        assert!(r.fprime_roots_contained && r.fsecond_roots_contained_in_delta);
        assert!(r.max_violation_distance <= 1e-8);
    }

    #[test]
    fn flat_bound_examples() {
        assert!(flat_set_bound_check(&cubic()).unwrap());
        assert!(flat_set_bound_check(&ComplexPoly::monomial(2)).unwrap());
        assert!(flat_set_bound_check(&ComplexPoly::monomial(5)).unwrap());
        assert_eq!(crate::curvature::flat_points(&ComplexPoly::monomial(5)).unwrap().len(), 1);
        assert!(flat_set_bound_check(&ComplexPoly::monomial(1)).is_err());
    }
}
