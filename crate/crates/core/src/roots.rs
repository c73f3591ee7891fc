//! All-roots solver: Aberth–Ehrlich simultaneous iteration followed by
//! clustering of multiple roots and a short Newton polish.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::tolerance::Tolerances;

/// Phase offset of the starting circle; irrational so that no start lands
/// on a symmetry axis of real or monomial-like inputs.
const START_PHASE: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.location).collect()
    }

    /// Closest root to `z`, with its distance.
    pub fn nearest(&self, z: Complex64) -> Option<(&Root, f64)> {
        self.roots
            .iter()
            .map(|r| (r, (r.location - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Radius under which two computed roots are treated as one multiple root.
pub fn cluster_radius(p: &ComplexPoly, tol: &Tolerances) -> f64 {
    tol.cluster_factor * (1.0 + p.cauchy_bound())
}

/// Roots with the default tolerance record but a custom step tolerance.
pub fn roots(p: &ComplexPoly, tol: f64) -> Result<RootSet> {
    let t = Tolerances {
        root: tol,
        ..Tolerances::default()
    };
    roots_with(p, &t)
}

pub fn roots_with(p: &ComplexPoly, tol: &Tolerances) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::ConstantHasNoRoots);
    }
    let dp = p.derivative();
    let raw = aberth(p, tol)?;
    let clustered = cluster(&raw, cluster_radius(p, tol));

    let scale = 1.0 + p.max_coeff_norm();
    let mut out = Vec::with_capacity(clustered.len());
    for (mut z, m) in clustered {
        z = polish(p, &dp, z, m, tol.newton_polish_steps);
        let residual = p.value_at(z).norm();
        // Below the Horner rounding floor the residual carries no information.
        let floor = 8.0 * f64::EPSILON * p.abs_value_at(z.norm());
        if residual > (tol.root * scale).max(floor) && m == 1 {
            return Err(Error::NoConvergence {
                iterations: tol.root_max_iterations,
                best: z,
                residual,
            });
        }
        out.push(Root {
            location: z,
            multiplicity: m,
            residual,
        });
    }
    out.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(RootSet { roots: out })
}

fn initial_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let n = p.degree();
    let radius = p.cauchy_bound();
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + START_PHASE;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn aberth(p: &ComplexPoly, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 1 {
        let c = p.coeffs();
        return Ok(vec![-c[0] / c[1]]);
    }
    let mut z = initial_guesses(p);
    let mut done = vec![false; n];

    for _ in 0..tol.root_max_iterations {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (value, slope) = p.value_and_slope(z[k]);
            if value == Complex64::new(0.0, 0.0) {
                done[k] = true;
                continue;
            }
            let ratio = value / slope;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                // Zero slope; nudge off the stationary point.
                let nudge = Complex64::new(tol.root, tol.root) * (1.0 + z[k].norm());
                z[k] += nudge;
                all_done = false;
                continue;
            }
            z[k] -= step;
            if step.norm() <= tol.root * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }

    // Iteration budget spent: accept if every iterate already has a small
    // residual (multiple roots converge only linearly), else report the worst.
    let scale = 1.0 + p.max_coeff_norm();
    let radius = cluster_radius(p, tol);
    let (worst, residual) = z
        .iter()
        .map(|&w| (w, p.value_at(w).norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let loose = (tol.root * scale).max(p.abs_value_at(worst.norm()) * radius.powi(2));
    if residual <= loose {
        Ok(z)
    } else {
        Err(Error::NoConvergence {
            iterations: tol.root_max_iterations,
            best: worst,
            residual,
        })
    }
}

/// Single-linkage grouping of iterates closer than `radius`; each group is
/// replaced by its centroid, which is far more accurate than any member for a
/// multiple root.
fn cluster(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += points[i];
                g.2 += 1;
            }
            None => groups.push((r, points[i], 1)),
        }
    }
    groups.into_iter().map(|(_, sum, m)| (sum / m as f64, m)).collect()
}

/// Multiplicity-aware Newton steps; a step is kept only if it does not
/// increase the residual.
fn polish(p: &ComplexPoly, dp: &ComplexPoly, mut z: Complex64, multiplicity: usize, steps: usize) -> Complex64 {
    let mut best = p.value_at(z).norm();
    for _ in 0..steps {
        if best == 0.0 {
            break;
        }
        let slope = dp.value_at(z);
        if slope.norm() == 0.0 {
            break;
        }
        let candidate = z - p.value_at(z) / slope * multiplicity as f64;
        let r = p.value_at(candidate).norm();
        if !(r < best) {
            break;
        }
        z = candidate;
        best = r;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_has(set: &RootSet, z: Complex64, m: usize, eps: f64) {
        let (r, d) = set.nearest(z).expect("non-empty");
        assert!(d < eps, "root {z} missing, nearest {} at {d}", r.location);
        assert_eq!(r.multiplicity, m);
    }

    #[test]
    fn quadratic_critical_points() {
        let p = ComplexPoly::from_real(&[-3.0, 0.0, 3.0]).unwrap();
        let set = roots(&p, 1e-13).unwrap();
        assert_eq!(set.len(), 2);
        assert_has(&set, c(1.0, 0.0), 1, 1e-12);
        assert_has(&set, c(-1.0, 0.0), 1, 1e-12);
    }

    #[test]
    fn cubic_roots_with_residuals() {
        let p = ComplexPoly::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap();
        let set = roots(&p, 1e-13).unwrap();
        assert_eq!(set.len(), 3);
        let s3 = 3f64.sqrt();
        for z in [c(0.0, 0.0), c(s3, 0.0), c(-s3, 0.0)] {
            assert_has(&set, z, 1, 1e-12);
            assert!(p.value_at(set.nearest(z).unwrap().0.location).norm() < 1e-12);
        }
    }

    #[test]
    fn repeated_root_merges() {
        let p = ComplexPoly::from_real(&[1.0, -2.0, 1.0]).unwrap();
        let set = roots(&p, 1e-13).unwrap();
        assert_eq!(set.len(), 1);
        assert_has(&set, c(1.0, 0.0), 2, 1e-7);
    }

    #[test]
    fn monomials_collapse_to_origin() {
        for n in 2..=6 {
            let set = roots(&ComplexPoly::monomial(n), 1e-13).unwrap();
            assert_eq!(set.len(), 1, "z^{n}");
            assert_has(&set, c(0.0, 0.0), n, 1e-10);
        }
    }

    #[test]
    fn constant_rejected() {
        let k = ComplexPoly::constant(c(2.0, 0.0)).unwrap();
        assert_eq!(roots(&k, 1e-13), Err(Error::ConstantHasNoRoots));
    }

    #[test]
    fn linear_is_direct() {
        let p = ComplexPoly::new(vec![c(1.0, 2.0), c(0.0, 1.0)]).unwrap();
        let set = roots(&p, 1e-13).unwrap();
        assert_has(&set, c(-2.0, 1.0), 1, 1e-15);
    }
}
