//! Bohr sets `Bohr(Gamma, rho) = { x : |gamma(x) - 1| <= rho for all gamma in Gamma }`.
//!
//! Every Bohr set carries the norm `r(x) = max_gamma |gamma(x) - 1|` of each
//! element, shared between rescalings. Sizes at other radii, the regularity
//! predicate and the regular-radius search all work on the sorted norm list:
//! `t -> |B_t|` is a step function, so finitely many comparisons decide them.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::group::is_prime;
use crate::spectral::{convolve, IntFunction};
use crate::structure::Progression;
use crate::{Error, GroupSet, GroupSpec, Result, TOLERANCE};

#[derive(Clone)]
pub struct BohrSet {
    group: GroupSpec,
    frequencies: Vec<usize>,
    radius: f64,
    norms: Arc<Vec<f64>>,
    sorted: Arc<Vec<f64>>,
    members: GroupSet,
}

impl fmt::Debug for BohrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BohrSet")
            .field("group", &self.group)
            .field("frequencies", &self.frequencies)
            .field("radius", &self.radius)
            .field("size", &self.members.len())
            .finish()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "radius {r} must be finite and >= 0"
        )))
    }
}

impl BohrSet {
    /// `Bohr(frequencies, radius)`. Frequencies are deduplicated and sorted;
    /// the rank counts them, including the trivial character if present.
    pub fn new(group: &GroupSpec, frequencies: &[usize], radius: f64) -> Result<Self> {
        check_radius(radius)?;
        let mut freqs = Vec::with_capacity(frequencies.len());
        for &g in frequencies {
            freqs.push(group.check(g)?);
        }
        freqs.sort_unstable();
        freqs.dedup();
        let norms: Vec<f64> = (0..group.order())
            .map(|x| {
                freqs
                    .iter()
                    .map(|&g| group.character_distance(g, x))
                    .fold(0.0, f64::max)
            })
            .collect();
        let mut sorted = norms.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let members = GroupSet::from_predicate(group, |x| norms[x] <= radius + TOLERANCE);
        Ok(BohrSet {
            group: group.clone(),
            frequencies: freqs,
            radius,
            norms: Arc::new(norms),
            sorted: Arc::new(sorted),
            members,
        })
    }

    /// Same frequencies, new radius; the norm vector is shared.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        let norms = &self.norms;
        let members = GroupSet::from_predicate(&self.group, |x| norms[x] <= radius + TOLERANCE);
        Ok(BohrSet {
            group: self.group.clone(),
            frequencies: self.frequencies.clone(),
            radius,
            norms: Arc::clone(&self.norms),
            sorted: Arc::clone(&self.sorted),
            members,
        })
    }

    /// `B_delta = Bohr(Gamma, delta * rho)`.
    pub fn scale(&self, delta: f64) -> Result<Self> {
        check_radius(delta)?;
        self.with_radius(delta * self.radius)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn frequencies(&self) -> &[usize] {
        &self.frequencies
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn rank(&self) -> usize {
        self.frequencies.len()
    }

    pub fn members(&self) -> &GroupSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    /// `r(x) = max_gamma |gamma(x) - 1|`.
    pub fn norm(&self, x: usize) -> f64 {
        self.norms[x]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// `|Bohr(Gamma, t)|` without building the set.
    pub fn size_at_radius(&self, t: f64) -> usize {
        count_le(&self.sorted, t + TOLERANCE)
    }

    /// `|B_delta|`.
    pub fn size_at_scale(&self, delta: f64) -> usize {
        self.size_at_radius(delta * self.radius)
    }

    /// Distinct norm values in ascending order.
    fn distinct_norms(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.sorted.iter().copied().collect();
        v.dedup();
        v
    }

    /// Exact regularity: `1 - 12d|delta| <= |B_{1+delta}|/|B| <= 1 + 12d|delta|`
    /// for all `|delta| <= 1/12d`.
    pub fn is_regular(&self) -> Result<bool> {
        self.require_rank()?;
        Ok(self.is_regular_at(self.radius))
    }

    fn require_rank(&self) -> Result<()> {
        if self.rank() == 0 {
            return Err(Error::Precondition("regularity needs rank >= 1".into()));
        }
        Ok(())
    }

    /// Regularity of `Bohr(Gamma, s)`.
    ///
    /// `|B_t| = #{r <= t + TOL}` jumps at `t = v - TOL` for each norm value `v`.
    /// Above `s` the ratio bound is tightest at the jump itself; below `s`
    /// it is tightest just before a jump, where the count is `#{r < v}`.
    fn is_regular_at(&self, s: f64) -> bool {
        if s == 0.0 {
            return true;
        }
        let c = 12.0 * self.rank() as f64;
        let w = 1.0 / c;
        let sorted = &self.sorted;
        let n = count_le(sorted, s + TOLERANCE) as f64;
        let lo_v = (1.0 - w) * s + TOLERANCE;
        let hi_v = (1.0 + w) * s + TOLERANCE;
        let mut i = count_le(sorted, lo_v);
        while i < sorted.len() {
            let v = sorted[i];
            if v > hi_v {
                break;
            }
            let b = v - TOLERANCE;
            if b <= s {
                let below = i as f64;
                if below < n * (1.0 - c * (1.0 - b / s)) {
                    return false;
                }
            } else {
                let at = count_le(sorted, v) as f64;
                if at > n * (1.0 + c * (b / s - 1.0)) {
                    return false;
                }
            }
            i = count_le(sorted, v);
        }
        true
    }

    /// Largest `delta in [1/2, 1]` found with `B_delta` regular.
    ///
    /// Candidates are `delta = 1` and, for each interval of radii on which
    /// `|B_t|` is constant, the largest and middle radius allowed by the
    /// linear constraints that the jumps within reach impose; every candidate
    /// is confirmed by [`BohrSet::is_regular`] semantics before it is returned.
    pub fn regular_radius(&self) -> Result<f64> {
        self.require_rank()?;
        let rho = self.radius;
        if rho == 0.0 || self.is_regular_at(rho) {
            return Ok(1.0);
        }
        let c = 12.0 * self.rank() as f64;
        let w = 1.0 / c;
        let sorted = &self.sorted;
        let values = self.distinct_norms();
        let jumps: Vec<f64> = values.iter().map(|v| v - TOLERANCE).collect();

        let mut bounds = Vec::new();
        bounds.push(rho / 2.0);
        bounds.extend(jumps.iter().copied().filter(|&b| b > rho / 2.0 && b < rho));
        bounds.push(rho);

        for i in (0..bounds.len() - 1).rev() {
            let (lo, hi) = (bounds[i], bounds[i + 1]);
            let n = count_le(sorted, lo + TOLERANCE) as f64;
            let (mut lower, mut upper) = (lo, hi);
            for (&b, &v) in jumps.iter().zip(&values) {
                if b > lo && b <= (1.0 + w) * hi {
                    let k = count_le(sorted, v) as f64;
                    let e = (k / n - 1.0) / c;
                    upper = upper.min((b / (1.0 + w)).max(b / (1.0 + e)));
                } else if b <= lo && b > (1.0 - w) * lo {
                    let j = count_lt(sorted, v) as f64;
                    lower = lower.max((b / (1.0 - w)).min(c * b / (c - 1.0 + j / n)));
                }
            }
            if lower > upper {
                continue;
            }
            for s in [upper, (lower + upper) / 2.0, lower] {
                if s >= rho / 2.0 && s <= rho && self.is_regular_at(s) {
                    return Ok(s / rho);
                }
            }
        }
        Err(Error::NotFound(format!(
            "no regular rescaling in [1/2, 1] for rank {} radius {rho}",
            self.rank()
        )))
    }

    /// `B_{delta*}` for `delta* = regular_radius()`.
    pub fn regularize(&self) -> Result<(f64, BohrSet)> {
        let delta = self.regular_radius()?;
        Ok((delta, self.scale(delta)?))
    }

    /// `c . B` as a Bohr set over `Z/N`: `Bohr(c^{-1} Gamma, rho)` for `gcd(c, N) = 1`.
    pub fn dilate(&self, c: i64) -> Result<BohrSet> {
        if !self.group.is_cyclic() {
            return Err(Error::Precondition(
                "Bohr-set dilation is implemented for Z/N".into(),
            ));
        }
        let n = self.group.order() as i64;
        let inv = mod_inverse(c.rem_euclid(n), n)
            .ok_or_else(|| Error::InvalidParameter(format!("{c} is not a unit mod {n}")))?;
        let freqs: Vec<usize> = self
            .frequencies
            .iter()
            .map(|&g| self.group.mul(inv, g))
            .collect();
        BohrSet::new(&self.group, &freqs, self.radius)
    }
}

fn count_le(sorted: &[f64], t: f64) -> usize {
    sorted.partition_point(|&r| r <= t)
}

fn count_lt(sorted: &[f64], t: f64) -> usize {
    sorted.partition_point(|&r| r < t)
}

pub(crate) fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// `Bohr(Gamma cup Lambda, rho')`: every character of `Lambda` is within
/// `rho'` of 1 on every member.
pub fn annihilator_bohr(
    group: &GroupSpec,
    base: &[usize],
    lambda: &[usize],
    radius: f64,
) -> Result<BohrSet> {
    let mut freqs = base.to_vec();
    freqs.extend_from_slice(lambda);
    BohrSet::new(group, &freqs, radius)
}

/// `|| mu_B * mu_B' - mu_B ||_1`, computed from the exact convolution.
pub fn convolution_l1_defect(b: &GroupSet, b_prime: &GroupSet) -> Result<f64> {
    if b.is_empty() || b_prime.is_empty() {
        return Err(Error::EmptySet);
    }
    let conv = convolve(&IntFunction::indicator(b), &IntFunction::indicator(b_prime))?;
    let k = b_prime.len() as i128;
    let total: i128 = conv
        .values()
        .iter()
        .enumerate()
        .map(|(x, &v)| (v as i128 - if b.contains(x) { k } else { 0 }).abs())
        .sum();
    Ok(total as f64 / (b.len() as f64 * b_prime.len() as f64))
}

/// `ceil((rho / 2 pi) N^{1/d})`, the guaranteed progression length.
pub fn ap_length_bound(b: &BohrSet) -> usize {
    let n = b.group().order() as f64;
    let d = b.rank().max(1) as f64;
    let v = b.radius().min(2.0) / (2.0 * PI) * libm::pow(n, 1.0 / d);
    libm::ceil(v) as usize
}

/// A progression inside a Bohr set over `Z/N`, `N` prime.
///
/// The step is the nonzero member of least norm (smallest index on ties);
/// the progression is `{-a s, ..., a s}` for the largest `a <= (N-1)/2` with
/// every multiple inside `B`. The result is checked against the length bound.
pub fn ap_in_bohr(b: &BohrSet) -> Result<Progression> {
    let g = b.group();
    if !g.is_cyclic() || !is_prime(g.order() as u64) {
        return Err(Error::Precondition(
            "progressions in Bohr sets need Z/N with N prime".into(),
        ));
    }
    if b.rank() == 0 {
        return Err(Error::Precondition("rank must be >= 1".into()));
    }
    let n = g.order();
    let ap = if b.members().is_full() {
        Progression {
            start: 0,
            step: 1,
            length: n,
        }
    } else {
        let step = (1..n)
            .filter(|&x| b.contains(x))
            .min_by(|&x, &y| b.norm(x).total_cmp(&b.norm(y)).then(x.cmp(&y)));
        match step {
            None => Progression {
                start: 0,
                step: 1,
                length: 1,
            },
            Some(s) => {
                let mut a = 0;
                while a < (n - 1) / 2 && b.contains(g.mul(a as i64 + 1, s)) {
                    a += 1;
                }
                Progression {
                    start: g.mul(-(a as i64), s),
                    step: s,
                    length: 2 * a + 1,
                }
            }
        }
    };
    if !ap.is_contained_in(b.members()) {
        return Err(Error::NotFound("progression left the Bohr set".into()));
    }
    let bound = ap_length_bound(b);
    if ap.length < bound {
        return Err(Error::NotFound(format!(
            "progression length {} below bound {bound}",
            ap.length
        )));
    }
    Ok(ap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn z(n: usize) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    /// Regularity by brute force over a fine grid of `delta` plus the
    /// one-sided limits at every jump.
    fn regular_oracle(b: &BohrSet) -> bool {
        let d = b.rank() as f64;
        let n = b.len() as f64;
        let rho = b.radius();
        let w = 1.0 / (12.0 * d);
        let mut deltas: Vec<f64> = (0..=4000)
            .map(|i| -w + 2.0 * w * i as f64 / 4000.0)
            .collect();
        for &v in b.norms() {
            let t = (v - TOLERANCE) / rho - 1.0;
            for e in [-1e-9, 0.0] {
                if (t + e).abs() <= w {
                    deltas.push(t + e);
                }
            }
        }
        deltas.into_iter().all(|delta| {
            let size = b
                .norms()
                .iter()
                .filter(|&&r| r <= (1.0 + delta) * rho + TOLERANCE)
                .count() as f64;
            let ratio = size / n;
            ratio >= 1.0 - 12.0 * d * delta.abs() - 1e-9
                && ratio <= 1.0 + 12.0 * d * delta.abs() + 1e-9
        })
    }

    #[test]
    fn construction_examples() {
        let g = z(12);
        let b = BohrSet::new(&g, &[0], 0.3).unwrap();
        assert!(b.members().is_full());
        let b = BohrSet::new(&g, &[3], 0.1).unwrap();
        assert_eq!(b.members().to_vec(), vec![0, 4, 8]);
        let b = BohrSet::new(&g, &[3], 0.0).unwrap();
        assert_eq!(b.members().to_vec(), vec![0, 4, 8]);
        let b = BohrSet::new(&g, &[5], 2.0).unwrap();
        assert!(b.members().is_full());

        let f = GroupSpec::vector_space(3, 2).unwrap();
        let b = annihilator_bohr(&f, &[], &[f.index_of(&[1, 0]).unwrap()], 0.1).unwrap();
        let want: Vec<usize> = (0..3).map(|y| f.index_of(&[0, y]).unwrap()).collect();
        assert_eq!(b.members().to_vec(), want);
        assert!(annihilator_bohr(&f, &[1], &[3], 2.0)
            .unwrap()
            .members()
            .is_full());
    }

    #[test]
    fn scaling_examples() {
        let b = BohrSet::new(&z(101), &[7, 30], 1.1).unwrap();
        assert_eq!(b.scale(1.0).unwrap().members(), b.members());
        let k = b.scale(0.0).unwrap();
        assert_eq!(k.members().to_vec(), vec![0]);
        assert!(b
            .scale(0.5)
            .unwrap()
            .members()
            .is_subset(b.members())
            .unwrap());
        assert_eq!(b.size_at_scale(0.5), b.scale(0.5).unwrap().len());
    }

    #[test]
    fn regularity_examples() {
        let whole = BohrSet::new(&z(13), &[0], 1.0).unwrap();
        assert!(whole.is_regular().unwrap());
        assert_eq!(whole.regular_radius().unwrap(), 1.0);

        // Below the least nonzero norm of F_5^2 the size is flat.
        let f = GroupSpec::vector_space(5, 2).unwrap();
        let b = BohrSet::new(&f, &[1, 5], 0.5).unwrap();
        assert!(b.is_regular().unwrap());

        for rho in [0.2, 0.5, 0.9, 1.3, 1.7] {
            let b = BohrSet::new(&z(13), &[1], rho).unwrap();
            assert_eq!(b.is_regular().unwrap(), regular_oracle(&b), "rho = {rho}");
        }
        // A radius sitting exactly on a norm value is never regular.
        let g = z(13);
        let v = g.character_distance(1, 3);
        assert!(!BohrSet::new(&g, &[1], v).unwrap().is_regular().unwrap());
    }

    #[test]
    fn regular_radius_examples() {
        let b = BohrSet::new(&z(101), &[1], 1.0).unwrap();
        let delta = b.regular_radius().unwrap();
        assert!((0.5..=1.0).contains(&delta));
        let s = b.scale(delta).unwrap();
        assert!(s.is_regular().unwrap());
        assert!(regular_oracle(&s));
        for (g, freqs, rho) in [
            (101usize, vec![3usize, 17], 1.2),
            (211, vec![5, 40, 77], 1.9),
            (97, vec![1], 0.05),
        ] {
            let b = BohrSet::new(&z(g), &freqs, rho).unwrap();
            let delta = b.regular_radius().unwrap();
            assert!((0.5..=1.0).contains(&delta));
            assert!(regular_oracle(&b.scale(delta).unwrap()));
        }
    }

    #[test]
    fn progression_examples() {
        let g = z(31);
        let b = BohrSet::new(&g, &[1], 1.0).unwrap();
        let ap = ap_in_bohr(&b).unwrap();
        assert!(ap.length >= 5);
        assert!(ap.is_contained_in(b.members()));

        let whole = BohrSet::new(&g, &[0], 1.0).unwrap();
        assert_eq!(ap_in_bohr(&whole).unwrap().length, 31);
        let kernel = BohrSet::new(&g, &[4], 0.0).unwrap();
        assert_eq!(ap_in_bohr(&kernel).unwrap().length, 1);
        assert!(ap_in_bohr(&BohrSet::new(&z(12), &[1], 1.0).unwrap()).is_err());
    }

    #[test]
    fn dilation_and_defect() {
        let g = z(31);
        let b = BohrSet::new(&g, &[1], 0.9).unwrap();
        let three_b = b.dilate(3).unwrap();
        assert_eq!(three_b.members(), &b.members().dilate(3));
        let full = GroupSet::full(&g);
        assert!(convolution_l1_defect(&full, b.members()).unwrap() < 1e-12);
        let zero = GroupSet::from_indices(&g, [0]).unwrap();
        assert!(convolution_l1_defect(b.members(), &zero).unwrap() < 1e-12);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(mod_inverse(3, 31), Some(21));
        assert_eq!(mod_inverse(4, 12), None);
    }
}
