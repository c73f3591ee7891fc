//! Gaussian curvature of the graph `w = Re f(x + iy)`.
//!
//! Two independent routes are provided: the holomorphic form
//! `K = -|f''|^2 / (1 + |f'|^2)^2` and the Hessian form
//! `K = (u_xx u_yy - u_xy^2) / (1 + u_x^2 + u_y^2)^2` built from partials.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, HarmonicJet, Part};
use crate::roots::{roots_with, RootSet};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain2D {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Domain2D {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        if ![xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidDomain("bounds must be finite".into()));
        }
        if !(xmin < xmax && ymin < ymax) {
            return Err(Error::InvalidDomain(format!(
                "need xmin < xmax and ymin < ymax, got [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        Ok(Self { xmin, xmax, ymin, ymax })
    }

    pub fn square(half: f64) -> Self {
        Self::new(-half, half, -half, half).expect("positive half-width")
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.xmin..=self.xmax).contains(&z.re) && (self.ymin..=self.ymax).contains(&z.im)
    }

    /// Smallest box holding both.
    pub fn union(&self, other: &Domain2D) -> Domain2D {
        Domain2D {
            xmin: self.xmin.min(other.xmin),
            xmax: self.xmax.max(other.xmax),
            ymin: self.ymin.min(other.ymin),
            ymax: self.ymax.max(other.ymax),
        }
    }
}

/// Cell-centre lattice shared by every grid-based analysis.
///
/// Cell `(i, j)` has index `j * nx + i` and centre
/// `(xmin + (i + 1/2) dx, ymin + (j + 1/2) dy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub domain: Domain2D,
    pub nx: usize,
    pub ny: usize,
}

impl Lattice {
    pub fn new(domain: Domain2D, nx: usize, ny: usize, cap: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid {
                nx,
                ny,
                reason: "need at least 2 cells per axis",
            });
        }
        let cells = nx.saturating_mul(ny);
        if cells > cap {
            return Err(Error::GridTooLarge { cells, cap });
        }
        Ok(Self { domain, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.domain.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.domain.height() / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.domain.xmin + (i as f64 + 0.5) * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.domain.ymin + (j as f64 + 0.5) * self.dy()
    }

    pub fn center(&self, index: usize) -> Complex64 {
        Complex64::new(self.x(index % self.nx), self.y(index / self.nx))
    }

    /// Cell containing `z`, if inside the domain.
    pub fn cell_of(&self, z: Complex64) -> Option<usize> {
        if !self.domain.contains(z) {
            return None;
        }
        let i = (((z.re - self.domain.xmin) / self.dx()) as usize).min(self.nx - 1);
        let j = (((z.im - self.domain.ymin) / self.dy()) as usize).min(self.ny - 1);
        Some(j * self.nx + i)
    }

    /// Samples `f` at every cell centre, row-major. Rows run in parallel;
    /// the output is identical to a serial sweep.
    pub fn sample<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let mut out = vec![0.0; self.len()];
        out.par_chunks_mut(self.nx).enumerate().for_each(|(j, row)| {
            let y = self.y(j);
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = f(Complex64::new(self.x(i), y));
            }
        });
        out
    }
}

/// `P` together with its first two derivatives, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CurvatureField {
    pub poly: ComplexPoly,
    pub d1: ComplexPoly,
    pub d2: ComplexPoly,
}

impl CurvatureField {
    pub fn new(poly: &ComplexPoly) -> Self {
        let d1 = poly.derivative();
        let d2 = d1.derivative();
        Self {
            poly: poly.clone(),
            d1,
            d2,
        }
    }

    #[inline]
    pub fn at(&self, z: Complex64) -> f64 {
        let num = self.d2.value_at(z).norm_sqr();
        let den = 1.0 + self.d1.value_at(z).norm_sqr();
        -num / (den * den)
    }

    pub fn jet(&self, x: f64, y: f64) -> HarmonicJet {
        HarmonicJet::from_derivatives(&self.poly, &self.d1, &self.d2, x, y)
    }

    pub fn hessian_at(&self, x: f64, y: f64) -> f64 {
        let j = self.jet(x, y);
        let den = 1.0 + j.ux * j.ux + j.uy * j.uy;
        j.hessian_det() / (den * den)
    }

    /// Hessian-route curvature of the graph of `v = Im f`.
    pub fn hessian_of_imag_at(&self, x: f64, y: f64) -> f64 {
        let j = self.jet(x, y);
        let (vx, vy) = j.v_gradient();
        let (vxx, vxy, vyy) = j.v_hessian();
        let den = 1.0 + vx * vx + vy * vy;
        (vxx * vyy - vxy * vxy) / (den * den)
    }
}

pub fn curvature_at(p: &ComplexPoly, z: Complex64) -> f64 {
    CurvatureField::new(p).at(z)
}

pub fn curvature_hessian_at(p: &ComplexPoly, x: f64, y: f64) -> f64 {
    CurvatureField::new(p).hessian_at(x, y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureGrid {
    pub domain: Domain2D,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub min_value: f64,
    pub max_value: f64,
}

impl CurvatureGrid {
    pub fn lattice(&self) -> Lattice {
        Lattice {
            domain: self.domain,
            nx: self.nx,
            ny: self.ny,
        }
    }

    /// Index of the largest sample; ties go to the smallest index.
    pub fn argmax(&self) -> usize {
        first_extreme(&self.values, |a, b| a > b)
    }

    pub fn argmin(&self) -> usize {
        first_extreme(&self.values, |a, b| a < b)
    }
}

pub(crate) fn first_extreme(values: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if better(v, values[best]) {
            best = k;
        }
    }
    best
}

pub fn curvature_grid(p: &ComplexPoly, domain: Domain2D, nx: usize, ny: usize) -> Result<CurvatureGrid> {
    curvature_grid_with(p, domain, nx, ny, &Tolerances::default())
}

pub fn curvature_grid_with(
    p: &ComplexPoly,
    domain: Domain2D,
    nx: usize,
    ny: usize,
    tol: &Tolerances,
) -> Result<CurvatureGrid> {
    let lattice = Lattice::new(domain, nx, ny, tol.grid_cap)?;
    let field = CurvatureField::new(p);
    let values = lattice.sample(|z| field.at(z));
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max_value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(CurvatureGrid {
        domain,
        nx,
        ny,
        values,
        min_value,
        max_value,
    })
}

/// Zeros of `P''`: the points where the curvature vanishes.
pub fn flat_points(p: &ComplexPoly) -> Result<RootSet> {
    flat_points_with(p, &Tolerances::default())
}

pub fn flat_points_with(p: &ComplexPoly, tol: &Tolerances) -> Result<RootSet> {
    if p.degree() <= 1 {
        return Err(Error::IdenticallyFlat);
    }
    let d2 = p.derivative().derivative();
    if d2.degree() == 0 {
        return Ok(RootSet::empty());
    }
    roots_with(&d2, tol)
}

/// Coefficients of the first fundamental form of a graph surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FirstForm {
    pub E: f64,
    pub F: f64,
    pub G: f64,
}

impl FirstForm {
    pub fn from_gradient(wx: f64, wy: f64) -> Self {
        Self {
            E: 1.0 + wx * wx,
            F: wx * wy,
            G: 1.0 + wy * wy,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.E * self.G - self.F * self.F
    }
}

pub fn first_form_at(p: &ComplexPoly, part: Part, x: f64, y: f64) -> FirstForm {
    let j = part.apply(p).harmonic_jet(x, y);
    FirstForm::from_gradient(j.ux, j.uy)
}

/// Bounding box of the roots of `P`, `P'`, `P''`, grown on every side by
/// half its diagonal plus one.
pub fn default_domain(p: &ComplexPoly) -> Result<Domain2D> {
    default_domain_with(p, &Tolerances::default())
}

pub fn default_domain_with(p: &ComplexPoly, tol: &Tolerances) -> Result<Domain2D> {
    let mut points = Vec::new();
    let mut q = p.clone();
    for _ in 0..3 {
        if q.degree() >= 1 {
            points.extend(roots_with(&q, tol)?.locations());
        }
        q = q.derivative();
    }
    if points.is_empty() {
        points.push(Complex64::new(0.0, 0.0));
    }
    let xmin = points.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let xmax = points.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let ymin = points.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let ymax = points.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    let margin = 0.5 * (xmax - xmin).hypot(ymax - ymin) + 1.0;
    Domain2D::new(xmin - margin, xmax + margin, ymin - margin, ymax + margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> ComplexPoly {
        ComplexPoly::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn holomorphic_examples() {
        assert_eq!(curvature_at(&cubic(), c(1.0, 0.0)), -36.0);
        assert_eq!(curvature_at(&cubic(), c(0.0, 0.0)), 0.0);
        assert_eq!(curvature_at(&ComplexPoly::monomial(2), c(0.0, 0.0)), -4.0);
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(curvature_hessian_at(&cubic(), 1.0, 0.0), -36.0);
        assert_eq!(curvature_hessian_at(&ComplexPoly::monomial(1), 0.7, -2.0), 0.0);
        let k = curvature_hessian_at(&ComplexPoly::monomial(2), 1.0, 1.0);
        assert!((k - (-4.0 / 81.0)).abs() < 1e-15);
        assert!((curvature_at(&ComplexPoly::monomial(2), c(1.0, 1.0)) - k).abs() < 1e-15);
    }

    #[test]
    fn grid_examples() {
        let plane = curvature_grid(&ComplexPoly::monomial(1), Domain2D::square(3.0), 4, 4).unwrap();
        assert!(plane.values.iter().all(|&v| v == 0.0));

        let g = curvature_grid(&ComplexPoly::monomial(2), Domain2D::square(1.0), 3, 3).unwrap();
        assert_eq!(g.values[4], -4.0);
        // hand oracle: f' = 2z, f'' = 2 at centres {-2/3, 0, 2/3}^2
        for (k, &v) in g.values.iter().enumerate() {
            let z = g.lattice().center(k);
            let expect = -4.0 / (1.0 + 4.0 * z.norm_sqr()).powi(2);
            assert!((v - expect).abs() < 1e-15);
            assert!(v <= 0.0);
        }
        assert!((g.max_value - -4.0 / (1.0_f64 + 16.0 / 9.0 * 2.0).powi(2)).abs() < 1e-15);
        assert_eq!(g.min_value, -4.0);
    }

    #[test]
    fn cubic_grid_flattest_near_origin() {
        // odd lattice: the origin is a cell centre
        let g = curvature_grid(&cubic(), Domain2D::square(2.0), 511, 511).unwrap();
        assert!(g.max_value.abs() <= 1e-9);
        assert_eq!(g.lattice().center(g.argmax()), c(0.0, 0.0));

        // even lattice: the maximum sits on one of the four cells around 0
        let g = curvature_grid(&cubic(), Domain2D::square(2.0), 512, 512).unwrap();
        let z = g.lattice().center(g.argmax());
        let h = 2.0 / 512.0;
        assert!((z.re.abs() - h).abs() < 1e-12 && (z.im.abs() - h).abs() < 1e-12);
        assert!(g.max_value < 0.0 && g.max_value > -2e-5);
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        let d = Domain2D::square(1.0);
        assert!(matches!(curvature_grid(&cubic(), d, 1, 4), Err(Error::InvalidGrid { .. })));
        let tight = Tolerances {
            grid_cap: 100,
            ..Tolerances::default()
        };
        assert!(matches!(
            curvature_grid_with(&cubic(), d, 11, 10, &tight),
            Err(Error::GridTooLarge { cells: 110, cap: 100 })
        ));
        assert!(Domain2D::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Domain2D::new(0.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn flat_point_examples() {
        let set = flat_points(&cubic()).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.roots[0].location.norm() < 1e-15);
        assert!(flat_points(&ComplexPoly::monomial(2)).unwrap().is_empty());
        let z4 = flat_points(&ComplexPoly::monomial(4)).unwrap();
        assert_eq!(z4.len(), 1);
        assert_eq!(z4.roots[0].multiplicity, 2);
        assert_eq!(flat_points(&ComplexPoly::monomial(1)), Err(Error::IdenticallyFlat));
    }

    #[test]
    fn first_form_examples() {
        let u = first_form_at(&cubic(), Part::Real, 1.0, 1.0);
        assert_eq!((u.E, u.F, u.G), (10.0, 18.0, 37.0));
        let v = first_form_at(&cubic(), Part::Imag, 1.0, 1.0);
        assert_eq!((v.E, v.F, v.G), (37.0, -18.0, 10.0));
        let k = ComplexPoly::constant(c(3.0, -1.0)).unwrap();
        for part in [Part::Real, Part::Imag] {
            let f = first_form_at(&k, part, 0.2, 5.0);
            assert_eq!((f.E, f.F, f.G), (1.0, 0.0, 1.0));
        }
        assert_eq!(u.determinant(), 1.0 + 9.0 + 36.0);
    }

    #[test]
    fn default_domain_covers_root_hull() {
        let d = default_domain(&cubic()).unwrap();
        let s3 = 3f64.sqrt();
        let margin = s3 + 1.0;
        assert!((d.xmax - (s3 + margin)).abs() < 1e-9);
        assert!((d.ymax - margin).abs() < 1e-9);
        let d = default_domain(&ComplexPoly::monomial(3)).unwrap();
        assert!((d.xmax - 1.0).abs() < 1e-9 && (d.ymin + 1.0).abs() < 1e-9);
    }
}
