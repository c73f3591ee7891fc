//! Deciding when two polynomial graphs carry the same Gaussian curvature,
//! and scanning the curvature-preserving loop `t -> e^{it} P`.
//!
//! Two graphs have identical curvature exactly when `Q = alpha P + beta`
//! with `|alpha| = 1`. The decider checks that relation on coefficients and,
//! when it fails, produces a point where the two curvatures differ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::critical::critical_points_with;
use crate::curvature::{default_domain_with, first_extreme, CurvatureField, Domain2D, Lattice};
use crate::error::Result;
use crate::poly::{ComplexPoly, Part};
use crate::tolerance::Tolerances;
use crate::topology::{fiber_signature_with, FiberSignature};

const WITNESS_GRID: usize = 64;
const CIRCLE_SAMPLES: usize = 32;
const CIRCLE_BASE_RADIUS: f64 = 10.0;
const CIRCLE_DOUBLINGS: u32 = 4;

/// `Q = alpha P + beta` with `|alpha| = 1`. `residual` is the largest
/// non-constant coefficient of `Q - alpha P`, relative to the largest
/// coefficient of either side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Complex64,
    pub k_p: f64,
    pub k_q: f64,
}

impl Witness {
    fn at(fp: &CurvatureField, fq: &CurvatureField, z: Complex64) -> Self {
        Self {
            point: z,
            k_p: fp.at(z),
            k_q: fq.at(z),
        }
    }

    pub fn gap(&self) -> f64 {
        (self.k_p - self.k_q).abs()
    }

    pub fn relative_gap(&self) -> f64 {
        let scale = self.k_p.abs().max(self.k_q.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.gap() / scale
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    /// Both graphs are planes.
    BothFlat,
    /// Only one graph is a plane.
    OneFlat,
    DegreeMismatch,
    UnitModulusAffine,
    NotUnitModulusAffine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub reason: VerdictReason,
    pub flat_case: bool,
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
}

pub fn decide_equal_curvature(p: &ComplexPoly, q: &ComplexPoly) -> EquivalenceVerdict {
    decide_equal_curvature_with(p, q, &Tolerances::default())
}

pub fn decide_equal_curvature_with(p: &ComplexPoly, q: &ComplexPoly, tol: &Tolerances) -> EquivalenceVerdict {
    let (m, n) = (p.degree(), q.degree());
    let refute = |reason, witness| EquivalenceVerdict {
        equivalent: false,
        reason,
        flat_case: false,
        certificate: None,
        witness: Some(witness),
    };

    if m <= 1 && n <= 1 {
        return EquivalenceVerdict {
            equivalent: true,
            reason: VerdictReason::BothFlat,
            flat_case: true,
            certificate: None,
            witness: None,
        };
    }
    if m <= 1 || n <= 1 {
        return refute(VerdictReason::OneFlat, grid_witness(p, q, tol));
    }
    if m != n {
        let w = circle_witness(p, q, tol).unwrap_or_else(|| grid_witness(p, q, tol));
        return refute(VerdictReason::DegreeMismatch, w);
    }

    match unit_affine_certificate(p, q, tol) {
        Some(cert) => EquivalenceVerdict {
            equivalent: true,
            reason: VerdictReason::UnitModulusAffine,
            flat_case: false,
            certificate: Some(cert),
            witness: None,
        },
        None => refute(VerdictReason::NotUnitModulusAffine, grid_witness(p, q, tol)),
    }
}

/// Matches `Q = alpha P + beta` with `alpha = lead(Q) / lead(P)`.
pub fn unit_affine_certificate(p: &ComplexPoly, q: &ComplexPoly, tol: &Tolerances) -> Option<Certificate> {
    if p.degree() != q.degree() || p.is_zero() {
        return None;
    }
    let alpha = q.leading() / p.leading();
    if (alpha.norm() - 1.0).abs() > tol.unit_modulus {
        return None;
    }
    let scaled = p.affine_map(alpha, Complex64::new(0.0, 0.0));
    let diff = q.sub(&scaled);
    let scale = q.max_coeff_norm().max(scaled.max_coeff_norm());
    let worst = diff.coeffs().iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
    let residual = if scale > 0.0 { worst / scale } else { worst };
    if residual > tol.coefficient_match {
        return None;
    }
    Some(Certificate {
        alpha,
        beta: diff.coeffs()[0],
        residual,
    })
}

/// Union of both default domains (falls back to `[-2, 2]^2` if root finding
/// fails on either side).
pub fn joint_domain(p: &ComplexPoly, q: &ComplexPoly, tol: &Tolerances) -> Domain2D {
    let a = default_domain_with(p, tol);
    let b = default_domain_with(q, tol);
    match (a, b) {
        (Ok(a), Ok(b)) => a.union(&b),
        (Ok(d), Err(_)) | (Err(_), Ok(d)) => d,
        _ => Domain2D::square(2.0),
    }
}

/// Coarse grid search on the joint domain, refined once around the
/// argmax; critical points of both polynomials join as candidates since
/// curvature peaks there.
fn grid_witness(p: &ComplexPoly, q: &ComplexPoly, tol: &Tolerances) -> Witness {
    let fp = CurvatureField::new(p);
    let fq = CurvatureField::new(q);
    let domain = joint_domain(p, q, tol);
    let gap = |z: Complex64| (fp.at(z) - fq.at(z)).abs();

    let coarse = Lattice::new(domain, WITNESS_GRID, WITNESS_GRID, usize::MAX).expect("fixed witness grid");
    let values = coarse.sample(gap);
    let mut best = coarse.center(first_extreme(&values, |a, b| a > b));

    let (hx, hy) = (coarse.dx(), coarse.dy());
    if let Ok(local) = Domain2D::new(best.re - hx, best.re + hx, best.im - hy, best.im + hy) {
        let fine = Lattice::new(local, WITNESS_GRID, WITNESS_GRID, usize::MAX).expect("fixed witness grid");
        let values = fine.sample(gap);
        let z = fine.center(first_extreme(&values, |a, b| a > b));
        if gap(z) > gap(best) {
            best = z;
        }
    }

    for poly in [p, q] {
        if let Ok(cps) = critical_points_with(poly, tol) {
            for cp in cps {
                if gap(cp.location) > gap(best) {
                    best = cp.location;
                }
            }
        }
    }
    Witness::at(&fp, &fq, best)
}

/// First point on circles of radius `10 * 2^j` where the curvatures differ
/// by more than the relative degree-witness threshold.
fn circle_witness(p: &ComplexPoly, q: &ComplexPoly, tol: &Tolerances) -> Option<Witness> {
    let fp = CurvatureField::new(p);
    let fq = CurvatureField::new(q);
    for j in 0..=CIRCLE_DOUBLINGS {
        let radius = CIRCLE_BASE_RADIUS * f64::from(1u32 << j);
        for k in 0..CIRCLE_SAMPLES {
            let angle = std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64;
            let w = Witness::at(&fp, &fq, Complex64::from_polar(radius, angle));
            if w.relative_gap() > tol.degree_witness_relative && w.gap() > tol.witness_threshold {
                return Some(w);
            }
        }
    }
    None
}

/// Mean `|K_P| / mean |K_Q|` over `samples` points of the circle `|z| = radius`.
pub fn curvature_ratio_on_circle(p: &ComplexPoly, q: &ComplexPoly, radius: f64, samples: usize) -> f64 {
    let fp = CurvatureField::new(p);
    let fq = CurvatureField::new(q);
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..samples {
        let z = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / samples as f64);
        sp += fp.at(z).abs();
        sq += fq.at(z).abs();
    }
    sp / sq
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureComparison {
    pub max_diff: f64,
    pub witness: Complex64,
}

/// Largest `|G_P - G_Q|` over an `n x n` cell-centre lattice; ties go to
/// the smallest lattice index.
pub fn numeric_curvature_compare(
    p: &ComplexPoly,
    q: &ComplexPoly,
    domain: Domain2D,
    n: usize,
) -> Result<CurvatureComparison> {
    numeric_curvature_compare_with(p, q, domain, n, &Tolerances::default())
}

pub fn numeric_curvature_compare_with(
    p: &ComplexPoly,
    q: &ComplexPoly,
    domain: Domain2D,
    n: usize,
    tol: &Tolerances,
) -> Result<CurvatureComparison> {
    let lattice = Lattice::new(domain, n, n, tol.grid_cap)?;
    let fp = CurvatureField::new(p);
    let fq = CurvatureField::new(q);
    let diffs = lattice.sample(|z| (fp.at(z) - fq.at(z)).abs());
    let k = first_extreme(&diffs, |a, b| a > b);
    Ok(CurvatureComparison {
        max_diff: diffs[k],
        witness: lattice.center(k),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSample {
    pub t: f64,
    pub poly: ComplexPoly,
    /// Largest lattice difference between the curvature of `e^{it} P` and of `P`.
    pub curvature_deviation: f64,
    /// Fiber signature of `Re(e^{it} P)`.
    pub signature: FiberSignature,
}

pub fn loop_scan(p: &ComplexPoly, num_samples: usize, domain: Domain2D, n: usize) -> Result<Vec<LoopSample>> {
    loop_scan_with(p, num_samples, domain, n, &Tolerances::default())
}

pub fn loop_scan_with(
    p: &ComplexPoly,
    num_samples: usize,
    domain: Domain2D,
    n: usize,
    tol: &Tolerances,
) -> Result<Vec<LoopSample>> {
    if num_samples < 4 {
        return Err(crate::error::Error::InvalidGrid {
            nx: num_samples,
            ny: 1,
            reason: "loop scan needs at least 4 samples",
        });
    }
    if p.degree() < 2 {
        return Err(crate::error::Error::InsufficientDegree {
            needed: 2,
            got: p.degree(),
        });
    }
    let lattice = Lattice::new(domain, n, n, tol.grid_cap)?;
    let base = CurvatureField::new(p);
    let base_values = lattice.sample(|z| base.at(z));

    (0..num_samples)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / num_samples as f64;
            let poly = p.rotate(t);
            let field = CurvatureField::new(&poly);
            let values = lattice.sample(|z| field.at(z));
            let curvature_deviation = values
                .iter()
                .zip(&base_values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let signature = fiber_signature_with(p, Part::Rotated(t), domain, n, tol)?;
            Ok(LoopSample {
                t,
                poly,
                curvature_deviation,
                signature,
            })
        })
        .collect()
}

/// Coefficient-wise distance between `Re(e^{it} P)` at `t = 0, pi/2, pi,
/// 3pi/2` and `u, -v, -u, v` respectively, as bivariate polynomials.
pub fn quarter_turn_deviations(p: &ComplexPoly) -> [f64; 4] {
    let (u, v) = p.bivariate_parts();
    let expected = [u.clone(), v.neg(), u.neg(), v];
    let mut out = [0.0; 4];
    for (k, target) in expected.iter().enumerate() {
        let t = std::f64::consts::TAU * k as f64 / 4.0;
        let (re, _) = p.rotate(t).bivariate_parts();
        out[k] = re.max_abs_diff(target);
    }
    out
}
