#![allow(dead_code)]

use harmonic_curvature::{Complex64, ComplexPoly};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the closed unit disk.
pub fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn in_disk(rng: &mut impl Rng, radius: f64) -> Complex64 {
    unit_disk(rng) * radius
}

/// Degree-`n` polynomial with coefficients uniform in the unit disk.
pub fn random_poly(rng: &mut impl Rng, n: usize) -> ComplexPoly {
    loop {
        let coeffs: Vec<Complex64> = (0..=n).map(|_| unit_disk(rng)).collect();
        if coeffs[n].norm() > 1e-3 {
            return ComplexPoly::new(coeffs).unwrap();
        }
    }
}

/// Like `random_poly` but with `|leading| >= 0.5`, keeping the roots inside
/// radius 3 so that large circles are in the asymptotic regime.
pub fn random_poly_tame(rng: &mut impl Rng, n: usize) -> ComplexPoly {
    let mut coeffs: Vec<Complex64> = (0..n).map(|_| unit_disk(rng)).collect();
    coeffs.push(Complex64::from_polar(rng.gen_range(0.5..1.0), rng.gen_range(0.0..std::f64::consts::TAU)));
    ComplexPoly::new(coeffs).unwrap()
}

/// Distinct roots in the disk of radius 1.5 with pairwise separation >= 0.1.
pub fn separated_roots(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    while out.len() < n {
        let z = in_disk(rng, 1.5);
        if out.iter().all(|w| (w - z).norm() >= 0.1) {
            out.push(z);
        }
    }
    out
}

pub fn random_angle(rng: &mut impl Rng) -> f64 {
    rng.gen_range(0.0..std::f64::consts::TAU)
}

pub fn cubic() -> ComplexPoly {
    ComplexPoly::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap()
}

/// `random_poly` with degree uniform in `lo..=hi`.
pub fn random_poly_deg(rng: &mut impl Rng, lo: usize, hi: usize) -> ComplexPoly {
    let n = rng.gen_range(lo..=hi);
    random_poly(rng, n)
}
