//! Level-set components of a harmonic part and the fiber signature.
//!
//! A level line `w = c` is represented on the cell-centre lattice by the band
//! of cells whose sample lies close to `c`; its 4-connected components stand
//! in for fibers. Every connectivity answer is recomputed at twice the
//! resolution and rejected if the two disagree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::critical::{critical_points_with, CriticalKind, CriticalPoint};
use crate::curvature::{Domain2D, Lattice};
use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, Part};
use crate::tolerance::Tolerances;

/// Multiplier on the local 4-neighbour variation used as band half-width.
pub const BAND_FACTOR: f64 = 1.5;
/// Largest fraction of the domain a band may cover.
pub const MAX_BAND_FRACTION: f64 = 0.9;
pub const MIN_TOPOLOGY_GRID: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelComponent {
    pub level: f64,
    /// Sorted cell indices (`j * n + i`).
    pub cells: Vec<usize>,
    /// Indices into the critical-point sequence of the polynomial.
    pub contains_critical: Vec<usize>,
}

/// Band membership and 4-connected labels of one level on one lattice.
struct BandLabels {
    labels: Vec<u32>,
    count: u32,
}

const OUTSIDE: u32 = u32::MAX;

impl BandLabels {
    fn label(&self, cell: usize) -> Option<u32> {
        match self.labels[cell] {
            OUTSIDE => None,
            l => Some(l),
        }
    }
}

fn sample_part(p: &ComplexPoly, part: Part, lattice: &Lattice) -> Vec<f64> {
    let q = part.apply(p);
    lattice.sample(|z| q.value_at(z).re)
}

/// Marks the band `|w - c| <= delta` and labels its 4-connected components
/// in order of their smallest cell index.
///
/// With `delta = None` each cell uses its own half-width, `BAND_FACTOR`
/// times the largest difference to a 4-neighbour. Any two 4-adjacent cells
/// whose samples straddle `c` then both belong to the band.
fn label_band(values: &[f64], lattice: &Lattice, level: f64, delta: Option<f64>) -> Result<BandLabels> {
    let (nx, ny) = (lattice.nx, lattice.ny);
    let in_band: Vec<bool> = (0..values.len())
        .map(|k| {
            let w = values[k];
            let half = match delta {
                Some(d) => d,
                None => {
                    let (i, j) = (k % nx, k / nx);
                    let mut m = 0.0_f64;
                    if i > 0 {
                        m = m.max((w - values[k - 1]).abs());
                    }
                    if i + 1 < nx {
                        m = m.max((w - values[k + 1]).abs());
                    }
                    if j > 0 {
                        m = m.max((w - values[k - nx]).abs());
                    }
                    if j + 1 < ny {
                        m = m.max((w - values[k + nx]).abs());
                    }
                    BAND_FACTOR * m
                }
            };
            (w - level).abs() <= half
        })
        .collect();

    let covered = in_band.iter().filter(|&&b| b).count();
    let fraction = covered as f64 / values.len() as f64;
    if fraction > MAX_BAND_FRACTION {
        return Err(Error::BandTooWide { fraction });
    }

    let mut labels = vec![OUTSIDE; values.len()];
    let mut count = 0u32;
    let mut stack = Vec::new();
    for seed in 0..values.len() {
        if !in_band[seed] || labels[seed] != OUTSIDE {
            continue;
        }
        labels[seed] = count;
        stack.push(seed);
        while let Some(k) = stack.pop() {
            let (i, j) = (k % nx, k / nx);
            let mut visit = |m: usize| {
                if in_band[m] && labels[m] == OUTSIDE {
                    labels[m] = count;
                    stack.push(m);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < nx {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - nx);
            }
            if j + 1 < ny {
                visit(k + nx);
            }
        }
        count += 1;
    }
    Ok(BandLabels { labels, count })
}

fn topology_lattice(domain: Domain2D, n: usize, tol: &Tolerances) -> Result<Lattice> {
    if n < MIN_TOPOLOGY_GRID {
        return Err(Error::InvalidGrid {
            nx: n,
            ny: n,
            reason: "topology grids need n >= 16",
        });
    }
    Lattice::new(domain, n, n, tol.grid_cap)
}

pub fn level_components(
    p: &ComplexPoly,
    part: Part,
    level: f64,
    domain: Domain2D,
    n: usize,
    delta: Option<f64>,
) -> Result<Vec<LevelComponent>> {
    level_components_with(p, part, level, domain, n, delta, &Tolerances::default())
}

pub fn level_components_with(
    p: &ComplexPoly,
    part: Part,
    level: f64,
    domain: Domain2D,
    n: usize,
    delta: Option<f64>,
    tol: &Tolerances,
) -> Result<Vec<LevelComponent>> {
    if let Some(d) = delta {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidBand(d));
        }
    }
    let lattice = topology_lattice(domain, n, tol)?;
    let values = sample_part(p, part, &lattice);
    let band = label_band(&values, &lattice, level, delta)?;
    let cps = critical_points_with(p, tol)?;

    let mut components: Vec<LevelComponent> = (0..band.count)
        .map(|_| LevelComponent {
            level,
            cells: Vec::new(),
            contains_critical: Vec::new(),
        })
        .collect();
    for (k, &l) in band.labels.iter().enumerate() {
        if l != OUTSIDE {
            components[l as usize].cells.push(k);
        }
    }
    for (idx, cp) in cps.iter().enumerate() {
        if let Some(l) = lattice.cell_of(cp.location).and_then(|cell| band.label(cell)) {
            components[l as usize].contains_critical.push(idx);
        }
    }
    Ok(components)
}

/// Answer to a same-fiber query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberRelation {
    SameFiber,
    DifferentFibers,
    /// The two critical values differ; there is no common level line.
    DifferentLevels,
}

pub fn level_tolerance(values: &[f64], tol: &Tolerances) -> f64 {
    tol.level_equality * (1.0 + values.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
}

/// Connectivity of several cells through the band at `level`, checked at
/// `n` and `2n`. Returns, per pair, whether both ends share a component.
fn pairs_connected(
    p: &ComplexPoly,
    part: Part,
    level: f64,
    domain: Domain2D,
    n: usize,
    pairs: &[(CriticalPoint, CriticalPoint)],
    tol: &Tolerances,
) -> Result<Vec<bool>> {
    let mut answers: Vec<Vec<bool>> = Vec::with_capacity(2);
    for m in [n, 2 * n] {
        let lattice = topology_lattice(domain, m, tol)?;
        let values = sample_part(p, part, &lattice);
        let band = label_band(&values, &lattice, level, None)?;
        let mut row = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ca = lattice.cell_of(a.location).ok_or(Error::OutsideDomain(a.location))?;
            let cb = lattice.cell_of(b.location).ok_or(Error::OutsideDomain(b.location))?;
            let same = match (band.label(ca), band.label(cb)) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            };
            row.push(same);
        }
        answers.push(row);
    }
    for (coarse, fine) in answers[0].iter().zip(&answers[1]) {
        if coarse != fine {
            return Err(Error::ResolutionSensitive {
                coarse: n,
                fine: 2 * n,
                coarse_answer: *coarse,
                fine_answer: *fine,
            });
        }
    }
    Ok(answers.swap_remove(0))
}

/// Same-fiber query on the polynomial's default domain at `n = 512`.
pub fn same_fiber(p: &ComplexPoly, part: Part, p1: &CriticalPoint, p2: &CriticalPoint) -> Result<FiberRelation> {
    let domain = crate::curvature::default_domain(p)?;
    same_fiber_on(p, part, p1, p2, domain, 512, &Tolerances::default())
}

pub fn same_fiber_on(
    p: &ComplexPoly,
    part: Part,
    p1: &CriticalPoint,
    p2: &CriticalPoint,
    domain: Domain2D,
    n: usize,
    tol: &Tolerances,
) -> Result<FiberRelation> {
    let a = part.select(p1.u_value, p1.v_value);
    let b = part.select(p2.u_value, p2.v_value);
    if (a - b).abs() > level_tolerance(&[a, b], tol) {
        return Ok(FiberRelation::DifferentLevels);
    }
    let connected = pairs_connected(p, part, 0.5 * (a + b), domain, n, &[(*p1, *p2)], tol)?;
    Ok(if connected[0] {
        FiberRelation::SameFiber
    } else {
        FiberRelation::DifferentFibers
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelClass {
    pub value: f64,
    /// Indices into the critical-point sequence, ascending.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberPair {
    pub a: usize,
    pub b: usize,
    pub same: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSignature {
    pub saddle_count: usize,
    pub degenerate_count: usize,
    pub level_partition: Vec<LevelClass>,
    /// One entry per unordered equal-level pair, stored with `a < b`.
    pub same_fiber: Vec<FiberPair>,
}

impl FiberSignature {
    /// Symmetric lookup; `None` when the pair is not an equal-level pair.
    pub fn same_fiber(&self, a: usize, b: usize) -> Option<bool> {
        let (lo, hi) = (a.min(b), a.max(b));
        self.same_fiber.iter().find(|p| p.a == lo && p.b == hi).map(|p| p.same)
    }

    pub fn has_same_level_pair(&self) -> bool {
        self.level_partition.iter().any(|c| c.members.len() > 1)
    }

    fn class_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.level_partition.iter().map(|c| c.members.len()).collect();
        sizes.sort_unstable();
        sizes
    }

    /// For each level class, the sorted sizes of its fiber groups.
    fn fiber_patterns(&self) -> Vec<Vec<usize>> {
        let mut patterns: Vec<Vec<usize>> = self
            .level_partition
            .iter()
            .map(|class| {
                let m = &class.members;
                let mut group: Vec<usize> = (0..m.len()).collect();
                for x in 0..m.len() {
                    for y in (x + 1)..m.len() {
                        if self.same_fiber(m[x], m[y]) == Some(true) {
                            let (gx, gy) = (group[x], group[y]);
                            for g in group.iter_mut() {
                                if *g == gy {
                                    *g = gx;
                                }
                            }
                        }
                    }
                }
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                for g in group {
                    *counts.entry(g).or_default() += 1;
                }
                let mut sizes: Vec<usize> = counts.into_values().collect();
                sizes.sort_unstable();
                sizes
            })
            .collect();
        patterns.sort();
        patterns
    }
}

pub fn fiber_signature(p: &ComplexPoly, part: Part, domain: Domain2D, n: usize) -> Result<FiberSignature> {
    fiber_signature_with(p, part, domain, n, &Tolerances::default())
}

pub fn fiber_signature_with(
    p: &ComplexPoly,
    part: Part,
    domain: Domain2D,
    n: usize,
    tol: &Tolerances,
) -> Result<FiberSignature> {
    if p.degree() < 2 {
        return Err(Error::InsufficientDegree {
            needed: 2,
            got: p.degree(),
        });
    }
    let cps = critical_points_with(p, tol)?;
    for cp in &cps {
        if !domain.contains(cp.location) {
            return Err(Error::OutsideDomain(cp.location));
        }
    }
    let values: Vec<f64> = cps.iter().map(|cp| part.select(cp.u_value, cp.v_value)).collect();
    let eps = level_tolerance(&values, tol);

    let mut saddles: Vec<usize> = (0..cps.len())
        .filter(|&k| cps[k].kind == CriticalKind::NonDegenerateSaddle)
        .collect();
    let degenerate_count = cps.len() - saddles.len();
    saddles.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut level_partition: Vec<LevelClass> = Vec::new();
    for k in saddles.iter().copied() {
        match level_partition.last_mut() {
            Some(class) if (values[k] - values[*class.members.last().unwrap()]).abs() <= eps => {
                class.members.push(k)
            }
            _ => level_partition.push(LevelClass {
                value: values[k],
                members: vec![k],
            }),
        }
    }
    for class in &mut level_partition {
        class.members.sort_unstable();
        class.value = class.members.iter().map(|&k| values[k]).sum::<f64>() / class.members.len() as f64;
    }

    let mut same_fiber = Vec::new();
    for class in &level_partition {
        let m = &class.members;
        if m.len() < 2 {
            continue;
        }
        let mut index_pairs = Vec::new();
        let mut point_pairs = Vec::new();
        for x in 0..m.len() {
            for y in (x + 1)..m.len() {
                index_pairs.push((m[x], m[y]));
                point_pairs.push((cps[m[x]], cps[m[y]]));
            }
        }
        let connected = pairs_connected(p, part, class.value, domain, n, &point_pairs, tol)?;
        for ((a, b), same) in index_pairs.into_iter().zip(connected) {
            same_fiber.push(FiberPair { a, b, same });
        }
    }

    Ok(FiberSignature {
        saddle_count: saddles.len(),
        degenerate_count,
        level_partition,
        same_fiber,
    })
}

/// Necessary condition for topological equivalence: `false` certifies that
/// the two functions are not equivalent, `true` certifies nothing.
pub fn signatures_equivalent(a: &FiberSignature, b: &FiberSignature) -> bool {
    a.saddle_count == b.saddle_count
        && a.degenerate_count == b.degenerate_count
        && a.class_sizes() == b.class_sizes()
        && a.fiber_patterns() == b.fiber_patterns()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::critical_points;

    fn cubic() -> ComplexPoly {
        ComplexPoly::from_real(&[0.0, -3.0, 0.0, 1.0]).unwrap()
    }

    fn by_x(cps: &[CriticalPoint]) -> (CriticalPoint, CriticalPoint) {
        let right = *cps.iter().find(|c| c.location.re > 0.0).unwrap();
        let left = *cps.iter().find(|c| c.location.re < 0.0).unwrap();
        (right, left)
    }

    #[test]
    fn vertical_line_is_one_component() {
        for n in [16, 33, 100] {
            let comps =
                level_components(&ComplexPoly::monomial(1), Part::Real, 0.0, Domain2D::square(1.0), n, None).unwrap();
            assert_eq!(comps.len(), 1, "n = {n}");
        }
        let comps = level_components(
            &ComplexPoly::monomial(1),
            Part::Real,
            0.0,
            Domain2D::square(1.0),
            64,
            Some(0.05),
        )
        .unwrap();
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn imag_zero_level_joins_both_saddles() {
        let cps = critical_points(&cubic()).unwrap();
        for n in [512, 1024] {
            let comps = level_components(&cubic(), Part::Imag, 0.0, Domain2D::square(3.0), n, None).unwrap();
            let holder = comps.iter().find(|c| !c.contains_critical.is_empty()).unwrap();
            assert_eq!(holder.contains_critical.len(), cps.len());
        }
    }

    #[test]
    fn real_level_minus_two_excludes_left_saddle() {
        let cps = critical_points(&cubic()).unwrap();
        let (right, left) = by_x(&cps);
        let ir = cps.iter().position(|c| *c == right).unwrap();
        let il = cps.iter().position(|c| *c == left).unwrap();
        let comps = level_components(&cubic(), Part::Real, -2.0, Domain2D::square(3.0), 512, None).unwrap();
        let holder = comps.iter().find(|c| c.contains_critical.contains(&ir)).unwrap();
        assert!(!holder.contains_critical.contains(&il));
    }

    #[test]
    fn wide_band_rejected() {
        let err = level_components(&cubic(), Part::Real, 0.0, Domain2D::square(1.0), 32, Some(1e6)).unwrap_err();
        assert!(matches!(err, Error::BandTooWide { .. }));
        assert!(level_components(&cubic(), Part::Real, 0.0, Domain2D::square(1.0), 8, None).is_err());
        assert!(level_components(&cubic(), Part::Real, 0.0, Domain2D::square(1.0), 32, Some(-1.0)).is_err());
    }

    #[test]
    fn same_fiber_examples() {
        let cps = critical_points(&cubic()).unwrap();
        let (right, left) = by_x(&cps);
        assert_eq!(same_fiber(&cubic(), Part::Imag, &right, &left).unwrap(), FiberRelation::SameFiber);
        assert_eq!(same_fiber(&cubic(), Part::Imag, &left, &right).unwrap(), FiberRelation::SameFiber);
        assert_eq!(
            same_fiber(&cubic(), Part::Real, &right, &left).unwrap(),
            FiberRelation::DifferentLevels
        );
        let sq = ComplexPoly::monomial(2);
        let cp = critical_points(&sq).unwrap()[0];
        assert_eq!(same_fiber(&sq, Part::Real, &cp, &cp).unwrap(), FiberRelation::SameFiber);
    }

    #[test]
    fn signature_examples() {
        let d = crate::curvature::default_domain(&cubic()).unwrap();
        let re = fiber_signature(&cubic(), Part::Real, d, 512).unwrap();
        assert_eq!(re.saddle_count, 2);
        assert_eq!(re.level_partition.len(), 2);
        assert!(re.same_fiber.is_empty());
        let im = fiber_signature(&cubic(), Part::Imag, d, 512).unwrap();
        assert_eq!(im.saddle_count, 2);
        assert_eq!(im.level_partition.len(), 1);
        assert_eq!(im.same_fiber.len(), 1);
        assert!(im.same_fiber[0].same);
        assert_eq!(im.same_fiber(1, 0), im.same_fiber(0, 1));
        assert!(!signatures_equivalent(&re, &im));
        assert!(signatures_equivalent(&re, &re));
        assert!(signatures_equivalent(&im, &im));

        let sq = ComplexPoly::monomial(2);
        let d = crate::curvature::default_domain(&sq).unwrap();
        let a = fiber_signature(&sq, Part::Real, d, 128).unwrap();
        let b = fiber_signature(&sq, Part::Imag, d, 128).unwrap();
        assert_eq!(a.saddle_count, 1);
        assert_eq!(a.level_partition.len(), 1);
        assert!(signatures_equivalent(&a, &b));
    }

    #[test]
    fn signature_stable_across_resolutions() {
        let d = crate::curvature::default_domain(&cubic()).unwrap();
        for part in [Part::Real, Part::Imag] {
            let base = fiber_signature(&cubic(), part, d, 256).unwrap();
            for n in [512, 1024] {
                assert_eq!(fiber_signature(&cubic(), part, d, n).unwrap(), base);
            }
        }
    }

    #[test]
    fn degenerate_points_counted_separately() {
        let d = Domain2D::square(2.0);
        let s = fiber_signature(&ComplexPoly::monomial(3), Part::Real, d, 64).unwrap();
        assert_eq!((s.saddle_count, s.degenerate_count), (0, 1));
        assert!(s.level_partition.is_empty());
    }

    #[test]
    fn critical_point_outside_domain_rejected() {
        let d = Domain2D::new(2.0, 3.0, 2.0, 3.0).unwrap();
        assert!(matches!(
            fiber_signature(&cubic(), Part::Real, d, 32),
            Err(Error::OutsideDomain(_))
        ));
    }
}
