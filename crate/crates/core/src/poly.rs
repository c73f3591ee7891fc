//! Complex polynomials and the harmonic pair `u = Re f`, `v = Im f`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A polynomial with complex coefficients in ascending powers.
///
/// Trailing zero coefficients are trimmed on construction (exact zeros only),
/// so the stored leading coefficient is nonzero unless the polynomial is
/// identically zero, in which case a single `0` is kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for ComplexPoly {
    type Error = Error;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs)
    }
}

impl From<ComplexPoly> for Vec<Complex64> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs
    }
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if !coeffs.iter().all(|&c| is_finite(c)) {
            return Err(Error::NonFinite("coefficient"));
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    /// Builds from real coefficients, ascending powers.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO] }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `lead * prod (z - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Result<Self> {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `1 + max_k |c_k / c_n|` over the non-leading coefficients; every root
    /// lies strictly inside this radius.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading();
        if lead == ZERO {
            return 1.0;
        }
        let n = self.degree();
        1.0 + self.coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max)
    }

    /// Horner evaluation, rejecting non-finite arguments.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !is_finite(z) {
            return Err(Error::NonFinite("evaluation point"));
        }
        Ok(self.value_at(z))
    }

    /// Horner evaluation without argument checks.
    #[inline]
    pub fn value_at(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the magnitude Horner rounding errors scale with.
    pub(crate) fn abs_value_at(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Value and first derivative in one Horner pass.
    #[inline]
    pub(crate) fn value_and_slope(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k + 1) as f64)
            .collect();
        Self { coeffs }
    }

    /// `alpha * P + beta`, coefficient-wise.
    pub fn affine_map(&self, alpha: Complex64, beta: Complex64) -> ComplexPoly {
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().map(|&c| alpha * c).collect();
        coeffs[0] += beta;
        Self::new(coeffs).expect("finite affine image")
    }

    /// `e^{it} P`; its real part is `cos(t) u - sin(t) v`.
    pub fn rotate(&self, t: f64) -> ComplexPoly {
        let alpha = Complex64::new(t.cos(), t.sin());
        let coeffs = self.coeffs.iter().map(|&c| alpha * c).collect();
        Self::new(coeffs).expect("finite rotation")
    }

    /// `-i P`, whose real part is `Im P`. Exact: only swaps and negates.
    pub fn conjugate_part(&self) -> ComplexPoly {
        let coeffs = self.coeffs.iter().map(|c| Complex64::new(c.im, -c.re)).collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO) - other.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Self::new(coeffs).expect("finite difference")
    }

    pub fn harmonic_jet(&self, x: f64, y: f64) -> HarmonicJet {
        HarmonicJet::from_derivatives(self, &self.derivative(), &self.derivative().derivative(), x, y)
    }

    /// Real and imaginary parts expanded as real polynomials in `x`, `y`.
    pub fn bivariate_parts(&self) -> (BivariatePoly, BivariatePoly) {
        let n = self.degree();
        let mut re = BivariatePoly::zero(n);
        let mut im = BivariatePoly::zero(n);
        // (x + iy)^k = sum_j C(k, j) x^(k-j) (iy)^j
        for (k, &c) in self.coeffs.iter().enumerate() {
            let mut binom = 1.0_f64;
            let mut ipow = Complex64::new(1.0, 0.0);
            for j in 0..=k {
                let term = c * ipow * binom;
                re.add(k - j, j, term.re);
                im.add(k - j, j, term.im);
                binom = binom * (k - j) as f64 / (j + 1) as f64;
                ipow *= Complex64::new(0.0, 1.0);
            }
        }
        (re, im)
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Values and partial derivatives of `u = Re f` at one point.
///
/// Built from `f`, `f'` and `f''` using `f' = u_x - i u_y` and
/// `f'' = u_xx - i u_xy`; `u_yy = -u_xx` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicJet {
    pub u: f64,
    pub v: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uxy: f64,
    pub uyy: f64,
}

impl HarmonicJet {
    pub(crate) fn from_derivatives(
        p: &ComplexPoly,
        dp: &ComplexPoly,
        ddp: &ComplexPoly,
        x: f64,
        y: f64,
    ) -> Self {
        let z = Complex64::new(x, y);
        let f = p.value_at(z);
        let f1 = dp.value_at(z);
        let f2 = ddp.value_at(z);
        Self {
            u: f.re,
            v: f.im,
            ux: f1.re,
            uy: -f1.im,
            uxx: f2.re,
            uxy: -f2.im,
            uyy: -f2.re,
        }
    }

    /// `(v_x, v_y)` from Cauchy–Riemann: `v_x = -u_y`, `v_y = u_x`.
    pub fn v_gradient(&self) -> (f64, f64) {
        (-self.uy, self.ux)
    }

    /// `(v_xx, v_xy, v_yy)`; `v_xx = -u_xy`, `v_xy = u_xx`.
    pub fn v_hessian(&self) -> (f64, f64, f64) {
        (-self.uxy, self.uxx, self.uxy)
    }

    pub fn hessian_det(&self) -> f64 {
        self.uxx * self.uyy - self.uxy * self.uxy
    }
}

/// Which harmonic function of `P` an analysis looks at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Real,
    Imag,
    /// `Re(e^{it} P) = cos(t) u - sin(t) v`.
    Rotated(f64),
}

impl Part {
    /// The polynomial whose real part is the selected function.
    pub fn apply(&self, p: &ComplexPoly) -> ComplexPoly {
        match *self {
            Part::Real => p.clone(),
            Part::Imag => p.conjugate_part(),
            Part::Rotated(t) => p.rotate(t),
        }
    }

    /// The selected function's value given `u` and `v`.
    pub fn select(&self, u: f64, v: f64) -> f64 {
        match *self {
            Part::Real => u,
            Part::Imag => v,
            Part::Rotated(t) => t.cos() * u - t.sin() * v,
        }
    }
}

/// Dense real polynomial in `x`, `y`: `coeffs[i][j]` multiplies `x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly {
    coeffs: Vec<Vec<f64>>,
}

impl BivariatePoly {
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![vec![0.0; degree + 1]; degree + 1],
        }
    }

    /// Builds from `(i, j, c)` terms meaning `c x^i y^j`.
    pub fn from_terms(degree: usize, terms: &[(usize, usize, f64)]) -> Self {
        let mut p = Self::zero(degree);
        for &(i, j, c) in terms {
            p.add(i, j, c);
        }
        p
    }

    fn add(&mut self, i: usize, j: usize, c: f64) {
        let need = i.max(j) + 1;
        if self.coeffs.len() < need {
            for row in &mut self.coeffs {
                row.resize(need, 0.0);
            }
            self.coeffs.resize(need, vec![0.0; need]);
        }
        self.coeffs[i][j] += c;
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    acc += c * x.powi(i as i32) * y.powi(j as i32);
                }
            }
        }
        acc
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|row| row.iter().map(|c| -c).collect()).collect(),
        }
    }

    /// Largest coefficient-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.coeff(i, j) - other.coeff(i, j)).abs());
            }
        }
        worst
    }
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
    fn trims_trailing_zeros() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(ComplexPoly::from_real(&[0.0, 0.0]).unwrap(), ComplexPoly::zero());
        assert_eq!(ComplexPoly::new(vec![]), Err(Error::EmptyCoefficients));
        assert!(ComplexPoly::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn eval_examples() {
        let p = cubic();
        assert_eq!(p.eval(c(2.0, 0.0)).unwrap(), c(2.0, 0.0));
        // term-by-term: i^3 - 3i
        let i = c(0.0, 1.0);
        let direct = i * i * i - 3.0 * i;
        assert_eq!(direct, c(0.0, -4.0));
        assert_eq!(p.eval(i).unwrap(), direct);
        let k = ComplexPoly::constant(c(1.5, -2.0)).unwrap();
        assert_eq!(k.eval(c(123.0, 4.0)).unwrap(), c(1.5, -2.0));
        assert!(p.eval(c(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let d = cubic().derivative();
        assert_eq!(d, ComplexPoly::from_real(&[-3.0, 0.0, 3.0]).unwrap());
        assert_eq!(d.derivative(), ComplexPoly::from_real(&[0.0, 6.0]).unwrap());
        assert_eq!(ComplexPoly::constant(c(4.0, 1.0)).unwrap().derivative(), ComplexPoly::zero());
        assert_eq!(ComplexPoly::zero().derivative().degree(), 0);
    }

    #[test]
    fn affine_examples() {
        let z2 = ComplexPoly::monomial(2);
        assert_eq!(z2.affine_map(c(1.0, 0.0), c(0.0, 0.0)), z2);
        let mapped = cubic().affine_map(c(0.0, 1.0), c(2.0, 1.0));
        assert_eq!(mapped.coeffs(), &[c(2.0, 1.0), c(0.0, -3.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let degenerate = z2.affine_map(c(0.0, 0.0), c(5.0, 0.0));
        assert_eq!(degenerate, ComplexPoly::constant(c(5.0, 0.0)).unwrap());
    }

    #[test]
    fn rotate_examples() {
        let p = cubic();
        assert_eq!(p.rotate(0.0), p);
        let neg = p.rotate(std::f64::consts::PI);
        for (a, b) in neg.coeffs().iter().zip(p.coeffs()) {
            assert!((a + b).norm() < 1e-15);
        }
        // Re(i(z^3 - 3z)) = -v = y^3 - 3x^2 y + 3y
        let (re, _) = p.rotate(std::f64::consts::FRAC_PI_2).bivariate_parts();
        let minus_v = BivariatePoly::from_terms(3, &[(0, 3, 1.0), (2, 1, -3.0), (0, 1, 3.0)]);
        assert!(re.max_abs_diff(&minus_v) < 1e-15);
    }

    #[test]
    fn bivariate_parts_of_cubic() {
        let (u, v) = cubic().bivariate_parts();
        let u_ref = BivariatePoly::from_terms(3, &[(3, 0, 1.0), (1, 2, -3.0), (1, 0, -3.0)]);
        let v_ref = BivariatePoly::from_terms(3, &[(0, 3, -1.0), (2, 1, 3.0), (0, 1, -3.0)]);
        assert_eq!(u.max_abs_diff(&u_ref), 0.0);
        assert_eq!(v.max_abs_diff(&v_ref), 0.0);
    }

    #[test]
    fn jet_examples() {
        let p = cubic();
        let j = p.harmonic_jet(1.0, 0.0);
        assert_eq!((j.u, j.v, j.ux, j.uy), (-2.0, 0.0, 0.0, 0.0));
        let j = p.harmonic_jet(-1.0, 0.0);
        assert_eq!((j.u, j.v), (2.0, 0.0));
        let id = ComplexPoly::monomial(1);
        let j = id.harmonic_jet(0.3, -1.7);
        assert_eq!((j.u, j.v, j.ux, j.uy), (0.3, -1.7, 1.0, 0.0));
        assert_eq!((j.uxx, j.uxy, j.uyy), (0.0, 0.0, 0.0));
    }

    #[test]
    fn part_selection() {
        let p = cubic();
        let j = p.harmonic_jet(0.4, 1.1);
        let jv = Part::Imag.apply(&p).harmonic_jet(0.4, 1.1);
        assert_eq!(jv.u, j.v);
        assert_eq!((jv.ux, jv.uy), j.v_gradient());
        assert_eq!(Part::Imag.select(j.u, j.v), j.v);
        assert_eq!(Part::Rotated(0.0).select(j.u, j.v), j.u);
    }

    #[test]
    fn from_roots_expands() {
        let p = ComplexPoly::from_roots(&[c(1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!(p, ComplexPoly::from_real(&[1.0, -2.0, 1.0]).unwrap());
    }
}
