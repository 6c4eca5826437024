//! Finite abelian groups presented as products of cyclic factors, and dense
//! subsets of them.
//!
//! Elements are addressed by a single index in `[0, order)`. The index of the
//! coordinate vector `(x_1, ..., x_r)` is the little-endian mixed-radix value
//! `x_1 + m_1 * (x_2 + m_2 * (...))`. That encoding is part of every file
//! format and test vector, so it never changes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Ratio, Result};

/// `Z/m_1 x ... x Z/m_r` with every `m_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    /// lcm of the factors; characters take values in the `exponent`-th roots of unity.
    exponent: u64,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec{:?}", self.factors)
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut order: usize = 1;
        let mut exponent: u64 = 1;
        for &m in &factors {
            if m < 2 {
                return Err(Error::InvalidGroup(format!("cyclic factor {m} < 2")));
            }
            strides.push(order);
            order = order
                .checked_mul(m)
                .ok_or_else(|| Error::InvalidGroup("order overflows usize".into()))?;
            let g = gcd(exponent, m as u64);
            exponent = (exponent / g)
                .checked_mul(m as u64)
                .ok_or_else(|| Error::InvalidGroup("exponent overflows u64".into()))?;
        }
        Ok(GroupSpec {
            factors,
            strides,
            order,
            exponent,
        })
    }

    /// `Z/n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `F_q^n` for a prime `q`.
    pub fn vector_space(q: usize, n: usize) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(Error::InvalidGroup(format!("field size {q} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidGroup("dimension must be at least 1".into()));
        }
        Self::new(vec![q; n])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Number of cyclic factors.
    #[inline]
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    #[inline]
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// `Some((q, n))` when the group is `F_q^n` with `q` prime.
    pub fn as_vector_space(&self) -> Option<(usize, usize)> {
        let q = self.factors[0];
        if self.factors.iter().all(|&m| m == q) && is_prime(q as u64) {
            Some((q, self.factors.len()))
        } else {
            None
        }
    }

    pub fn check(&self, x: usize) -> Result<usize> {
        if x < self.order {
            Ok(x)
        } else {
            Err(Error::OutOfRange {
                index: x,
                order: self.order,
            })
        }
    }

    pub fn coords(&self, mut x: usize) -> Vec<usize> {
        self.factors
            .iter()
            .map(|&m| {
                let d = x % m;
                x /= m;
                d
            })
            .collect()
    }

    /// Index of a coordinate vector; every coordinate must be reduced.
    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates, got {}",
                self.factors.len(),
                coords.len()
            )));
        }
        let mut idx = 0;
        for ((&c, &m), &s) in coords.iter().zip(&self.factors).zip(&self.strides) {
            if c >= m {
                return Err(Error::OutOfRange { index: c, order: m });
            }
            idx += c * s;
        }
        Ok(idx)
    }

    /// Index of an arbitrary integer vector, reducing each coordinate.
    pub fn index_of_reduced(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates, got {}",
                self.factors.len(),
                coords.len()
            )));
        }
        Ok(coords
            .iter()
            .zip(&self.factors)
            .zip(&self.strides)
            .map(|((&c, &m), &s)| (c.rem_euclid(m as i64) as usize) * s)
            .sum())
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        if let [m] = self.factors[..] {
            let s = a + b;
            return if s >= m { s - m } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for (&m, &stride) in self.factors.iter().zip(&self.strides) {
            let s = a % m + b % m;
            a /= m;
            b /= m;
            out += if s >= m { s - m } else { s } * stride;
        }
        out
    }

    pub fn checked_add(&self, a: usize, b: usize) -> Result<usize> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        if let [m] = self.factors[..] {
            return if a == 0 { 0 } else { m - a };
        }
        let mut a = a;
        let mut out = 0;
        for (&m, &stride) in self.factors.iter().zip(&self.strides) {
            let d = a % m;
            a /= m;
            out += if d == 0 { 0 } else { m - d } * stride;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `c * x`, with `c` reduced modulo each factor.
    pub fn mul(&self, c: i64, x: usize) -> usize {
        let mut x = x;
        let mut out = 0;
        for (&m, &stride) in self.factors.iter().zip(&self.strides) {
            let d = (x % m) as u128;
            x /= m;
            let cm = c.rem_euclid(m as i64) as u128;
            out += ((d * cm) % m as u128) as usize * stride;
        }
        out
    }

    /// Phase numerator `k` with `gamma(x) = e(k / exponent)`.
    pub fn phase(&self, gamma: usize, x: usize) -> u64 {
        let l = self.exponent;
        let (mut g, mut x) = (gamma, x);
        let mut acc: u64 = 0;
        for &m in &self.factors {
            let gi = (g % m) as u64;
            let xi = (x % m) as u64;
            g /= m;
            x /= m;
            let term = ((gi * xi) % m as u64) * (l / m as u64);
            acc = ((acc as u128 + term as u128) % l as u128) as u64;
        }
        acc
    }

    /// `gamma(x) = exp(2 pi i sum_i gamma_i x_i / m_i)`.
    pub fn character_value(&self, gamma: usize, x: usize) -> Complex64 {
        let k = self.phase(gamma, x);
        let theta = 2.0 * core::f64::consts::PI * (k as f64) / (self.exponent as f64);
        Complex64::new(libm::cos(theta), libm::sin(theta))
    }

    /// `|gamma(x) - 1| = 2 |sin(pi k / L)|`, evaluated on the folded phase so
    /// that equal phases give bit-identical norms.
    pub fn character_distance(&self, gamma: usize, x: usize) -> f64 {
        phase_distance(self.phase(gamma, x), self.exponent)
    }

    /// Direct product `self x other`; coordinates of `self` come first.
    pub fn product(&self, other: &GroupSpec) -> Result<GroupSpec> {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        GroupSpec::new(f)
    }
}

/// `2 |sin(pi k / l)|` on the folded phase `min(k, l - k)`.
pub(crate) fn phase_distance(k: u64, l: u64) -> f64 {
    let folded = k.min(l - k);
    if folded == 0 {
        return 0.0;
    }
    2.0 * libm::sin(core::f64::consts::PI * (folded as f64) / (l as f64))
}

/// `a + b` in `g`, checking both indices.
pub fn add(g: &GroupSpec, a: usize, b: usize) -> Result<usize> {
    g.checked_add(a, b)
}

/// `c . A = { c a : a in A }`.
pub fn dilate(c: i64, a: &GroupSet) -> GroupSet {
    a.dilate(c)
}

/// `A + B`.
pub fn sumset(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.sumset(b)
}

/// `gamma(x)` under the coordinate pairing.
pub fn character_value(g: &GroupSpec, gamma: usize, x: usize) -> Result<Complex64> {
    Ok(g.character_value(g.check(gamma)?, g.check(x)?))
}

/// Dense subset of a [`GroupSpec`], stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSet {
    group: GroupSpec,
    bits: Vec<u64>,
    len: usize,
}

impl fmt::Debug for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupSet")
            .field("group", &self.group)
            .field("members", &self.to_vec())
            .finish()
    }
}

impl GroupSet {
    pub fn empty(group: &GroupSpec) -> Self {
        GroupSet {
            group: group.clone(),
            bits: vec![0; group.order.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(group: &GroupSpec) -> Self {
        let mut s = Self::empty(group);
        for w in s.bits.iter_mut() {
            *w = !0;
        }
        let tail = group.order % 64;
        if tail != 0 {
            *s.bits.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        s.len = group.order;
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(
        group: &GroupSpec,
        items: I,
    ) -> Result<Self> {
        let mut s = Self::empty(group);
        for x in items {
            s.insert(group.check(x)?);
        }
        Ok(s)
    }

    pub fn from_predicate<F: FnMut(usize) -> bool>(group: &GroupSpec, mut pred: F) -> Self {
        let mut s = Self::empty(group);
        for x in 0..group.order {
            if pred(x) {
                s.insert(x);
            }
        }
        s
    }

    #[inline]
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.group.order
    }

    /// `|A| / |G|`.
    pub fn density(&self) -> Ratio {
        Ratio::new(self.len as u64, self.group.order as u64)
    }

    /// `|A ∩ X| / |X|`, the density relative to an ambient set.
    pub fn relative_density(&self, ambient: &GroupSet) -> Result<Ratio> {
        if ambient.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Ratio::new(
            self.intersection(ambient)?.len() as u64,
            ambient.len() as u64,
        ))
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.group.order && (self.bits[x >> 6] >> (x & 63)) & 1 == 1
    }

    /// Returns whether `x` was newly inserted. `x` must be in range.
    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x >> 6, 1u64 << (x & 63));
        let fresh = self.bits[w] & b == 0;
        if fresh {
            self.bits[w] |= b;
            self.len += 1;
        }
        fresh
    }

    #[inline]
    pub fn remove(&mut self, x: usize) -> bool {
        if x >= self.group.order {
            return false;
        }
        let (w, b) = (x >> 6, 1u64 << (x & 63));
        let present = self.bits[w] & b != 0;
        if present {
            self.bits[w] &= !b;
            self.len -= 1;
        }
        present
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn same_group(&self, other: &GroupSet) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn zip_bits(&self, other: &GroupSet, op: impl Fn(u64, u64) -> u64) -> Result<GroupSet> {
        self.same_group(other)?;
        let bits: Vec<u64> = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let len = bits.iter().map(|w| w.count_ones() as usize).sum();
        Ok(GroupSet {
            group: self.group.clone(),
            bits,
            len,
        })
    }

    pub fn union(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_bits(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_bits(other, |a, b| a & b)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_bits(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> GroupSet {
        let full = GroupSet::full(&self.group);
        full.difference(self).expect("same group")
    }

    pub fn intersection_len(&self, other: &GroupSet) -> Result<usize> {
        self.same_group(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum())
    }

    pub fn is_subset(&self, other: &GroupSet) -> Result<bool> {
        self.same_group(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &GroupSet) -> Result<bool> {
        Ok(self.intersection_len(other)? == 0)
    }

    /// `A + t`.
    pub fn translate(&self, t: usize) -> GroupSet {
        let g = &self.group;
        let mut out = GroupSet::empty(g);
        for x in self.iter() {
            out.insert(g.add(x, t));
        }
        out
    }

    /// `-A`.
    pub fn negate(&self) -> GroupSet {
        let g = &self.group;
        let mut out = GroupSet::empty(g);
        for x in self.iter() {
            out.insert(g.neg(x));
        }
        out
    }

    /// `c . A`.
    pub fn dilate(&self, c: i64) -> GroupSet {
        let g = &self.group;
        let mut out = GroupSet::empty(g);
        for x in self.iter() {
            out.insert(g.mul(c, x));
        }
        out
    }

    /// `A + B`.
    pub fn sumset(&self, other: &GroupSet) -> Result<GroupSet> {
        self.same_group(other)?;
        let g = &self.group;
        let (small, large) = if self.len <= other.len {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = GroupSet::empty(g);
        if small.is_empty() {
            return Ok(out);
        }
        let work = small.len as u128 * large.len as u128;
        if g.order >= 2048 && work > 64 * g.order as u128 {
            let conv = crate::spectral::convolve(
                &crate::spectral::DenseFunction::indicator(small),
                &crate::spectral::DenseFunction::indicator(large),
            )?;
            for (x, &v) in conv.values().iter().enumerate() {
                if v > 0 {
                    out.insert(x);
                }
            }
            return Ok(out);
        }
        let large_members = large.to_vec();
        for a in small.iter() {
            for &b in &large_members {
                out.insert(g.add(a, b));
            }
            if out.is_full() {
                break;
            }
        }
        Ok(out)
    }

    /// `A - B`.
    pub fn difference_set(&self, other: &GroupSet) -> Result<GroupSet> {
        self.sumset(&other.negate())
    }

    /// `k A = A + ... + A` (`k >= 1` copies).
    pub fn iterated_sumset(&self, k: usize) -> Result<GroupSet> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "iterated sumset needs k >= 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.sumset(self)?;
        }
        Ok(acc)
    }
}

/// `[N]` placed inside `Z/N'` for the least prime `N'` in a window above `N`,
/// large enough that small integer combinations never wrap around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalEmbedding {
    pub n: u64,
    pub modulus: u64,
    pub group: GroupSpec,
}

impl IntervalEmbedding {
    /// Image of `k` (meaningful for `1 <= k <= n`).
    pub fn embed(&self, k: u64) -> usize {
        (k % self.modulus) as usize
    }

    /// The integer in `[1, n]` mapping to `x`, if any.
    pub fn lift(&self, x: usize) -> Option<u64> {
        let k = x as u64;
        (1..=self.n).contains(&k).then_some(k)
    }

    pub fn embed_set<I: IntoIterator<Item = u64>>(&self, items: I) -> Result<GroupSet> {
        let mut s = GroupSet::empty(&self.group);
        for k in items {
            if !(1..=self.n).contains(&k) {
                return Err(Error::OutOfRange {
                    index: k as usize,
                    order: self.n as usize,
                });
            }
            s.insert(self.embed(k));
        }
        Ok(s)
    }

    /// Image of the whole interval `[1, n]`.
    pub fn interval(&self) -> GroupSet {
        self.embed_set(1..=self.n).expect("interval is in range")
    }

    /// Least prime `p >= lower` with `p >= 6n`; by Bertrand `p <= 12n` when
    /// `lower <= 6n`.
    pub fn with_lower_bound(n: u64, lower: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "interval length must be >= 1".into(),
            ));
        }
        let start = lower.max(6 * n);
        let modulus = (start..)
            .find(|&p| is_prime(p))
            .expect("primes are unbounded");
        let group = GroupSpec::cyclic(
            usize::try_from(modulus).map_err(|_| Error::TooLarge("modulus".into()))?,
        )?;
        Ok(IntervalEmbedding { n, modulus, group })
    }
}

/// `[N] -> Z/N'` with `N'` the least prime in `[6N, 12N]`.
pub fn embed_interval(n: u64) -> Result<IntervalEmbedding> {
    let e = IntervalEmbedding::with_lower_bound(n, 6 * n)?;
    debug_assert!(e.modulus <= 12 * n);
    Ok(e)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: usize) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&z(5), 3, 4).unwrap(), 2);
        let f52 = GroupSpec::vector_space(5, 2).unwrap();
        let a = f52.index_of(&[1, 2]).unwrap();
        let b = f52.index_of(&[4, 4]).unwrap();
        assert_eq!(f52.coords(f52.add(a, b)), vec![0, 1]);
        assert_eq!(f52.add(0, 17), 17);
        assert!(matches!(add(&z(5), 5, 1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn rejects_degenerate_groups() {
        assert!(GroupSpec::new(vec![]).is_err());
        assert!(GroupSpec::new(vec![3, 1]).is_err());
        assert!(GroupSpec::vector_space(4, 2).is_err());
    }

    #[test]
    fn dilate_examples() {
        let a = GroupSet::from_indices(&z(7), [1, 2]).unwrap();
        assert_eq!(a.dilate(3).to_vec(), vec![3, 6]);
        let b = GroupSet::from_indices(&z(5), [1, 2]).unwrap();
        assert_eq!(b.dilate(-1).to_vec(), vec![3, 4]);
        let zero = GroupSet::from_indices(&z(9), [0]).unwrap();
        assert_eq!(zero.dilate(2).to_vec(), vec![0]);
    }

    #[test]
    fn sumset_examples() {
        let g = z(5);
        let a = GroupSet::from_indices(&g, [1, 2]).unwrap();
        let zero = GroupSet::from_indices(&g, [0]).unwrap();
        assert_eq!(a.sumset(&zero).unwrap(), a);
        let b = GroupSet::from_indices(&g, [0, 1]).unwrap();
        assert_eq!(b.sumset(&b).unwrap().to_vec(), vec![0, 1, 2]);
        // F_2^2: {00, 01} + {00, 10}; little-endian index = x_1 + 2 x_2.
        let f22 = GroupSpec::vector_space(2, 2).unwrap();
        let p = GroupSet::from_indices(&f22, [0, 2]).unwrap();
        let q = GroupSet::from_indices(&f22, [0, 1]).unwrap();
        assert!(p.sumset(&q).unwrap().is_full());
        let other = GroupSet::empty(&z(6));
        assert_eq!(a.sumset(&other), Err(Error::GroupMismatch));
    }

    #[test]
    fn embed_interval_examples() {
        assert_eq!(embed_interval(10).unwrap().modulus, 61);
        assert_eq!(embed_interval(1).unwrap().modulus, 7);
        assert_eq!(embed_interval(2).unwrap().modulus, 13);
    }

    #[test]
    fn embed_interval_against_sieve() {
        let limit = 120_001;
        let mut composite = vec![false; limit + 1];
        for i in 2..=limit {
            if !composite[i] {
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        for n in 1..=10_000u64 {
            let p = embed_interval(n).unwrap().modulus as usize;
            assert!(6 * n as usize <= p && p <= 12 * n as usize);
            assert!(!composite[p]);
            assert!((6 * n as usize..p).all(|k| composite[k] || k < 2));
        }
    }

    #[test]
    fn character_examples() {
        let g = z(4);
        for x in 0..4 {
            assert!((g.character_value(0, x) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        assert!((g.character_value(1, 2) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let f32 = GroupSpec::vector_space(3, 2).unwrap();
        let gamma = f32.index_of(&[1, 0]).unwrap();
        let x = f32.index_of(&[2, 1]).unwrap();
        let expected = Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * 2.0 / 3.0);
        assert!((f32.character_value(gamma, x) - expected).norm() < 1e-12);
    }

    #[test]
    fn mixed_radix_round_trip() {
        let g = GroupSpec::new(vec![3, 4, 5]).unwrap();
        for x in 0..g.order() {
            assert_eq!(g.index_of(&g.coords(x)).unwrap(), x);
        }
        assert_eq!(g.coords(1 + 3 * 2 + 12 * 4), vec![1, 2, 4]);
    }

    #[test]
    fn is_prime_small() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert!(is_prime(4_611_615_649_683_210_241));
        assert!(!is_prime(4_611_615_649_683_210_243));
    }

    fn arb_group() -> impl Strategy<Value = GroupSpec> {
        prop_oneof![
            (2usize..60).prop_map(|n| GroupSpec::cyclic(n).unwrap()),
            proptest::collection::vec(2usize..6, 1..4).prop_map(|f| GroupSpec::new(f).unwrap()),
        ]
    }

    fn arb_set_pair() -> impl Strategy<Value = (GroupSet, GroupSet)> {
        arb_group().prop_flat_map(|g| {
            let n = g.order();
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(a, b)| {
                    (
                        GroupSet::from_predicate(&g, |x| a[x]),
                        GroupSet::from_predicate(&g, |x| b[x]),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn sumset_contains_each_translate((a, b) in arb_set_pair()) {
            let s = a.sumset(&b).unwrap();
            for t in b.iter() {
                prop_assert!(a.translate(t).is_subset(&s).unwrap());
            }
            if !a.is_empty() && !b.is_empty() {
                prop_assert!(s.len() >= a.len().max(b.len()));
            }
        }

        #[test]
        fn double_negation_is_identity((a, _b) in arb_set_pair()) {
            prop_assert_eq!(a.dilate(-1).dilate(-1), a);
        }

        #[test]
        fn unit_dilates_preserve_size((a, _b) in arb_set_pair(), c in -20i64..20) {
            if gcd(c.unsigned_abs(), a.group().order() as u64) == 1 {
                prop_assert_eq!(a.dilate(c).len(), a.len());
            }
        }
    }

    #[test]
    fn character_is_homomorphism() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let groups = [
            z(97),
            z(60),
            GroupSpec::vector_space(3, 5).unwrap(),
            GroupSpec::new(vec![4, 6, 10]).unwrap(),
        ];
        for i in 0..1000 {
            let g = &groups[i % groups.len()];
            let (gamma, x, y) = (
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
            );
            let lhs = g.character_value(gamma, x) * g.character_value(gamma, y);
            let rhs = g.character_value(gamma, g.add(x, y));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
