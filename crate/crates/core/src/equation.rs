//! Translation-invariant linear equations `c_1 x_1 + ... + c_k x_k = 0`
//! with `sum c_i = 0`: exact solution counts, trivial solutions, and
//! solution-freeness.
//!
//! A tuple is trivial when some partition of the index set has every block
//! with zero coefficient sum and the tuple constant on each block. All
//! counts are over ordered tuples.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::group::IntervalEmbedding;
use crate::spectral::{convolve_many, IntFunction};
use crate::{Error, GroupSet, Result};

/// Largest `k` for which trivial solutions are counted by partition enumeration.
pub const MAX_VARIABLES: usize = 8;

/// Limit on `|A|^k` for [`brute_force_count`].
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    coefficients: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub total: u64,
    pub trivial: u64,
}

impl SolutionCount {
    pub fn nontrivial(&self) -> u64 {
        self.total - self.trivial
    }
}

impl Equation {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.len() < 3 {
            return Err(Error::InvalidParameter(
                "an equation needs at least 3 variables".into(),
            ));
        }
        if coefficients.contains(&0) {
            return Err(Error::InvalidParameter(
                "coefficients must be nonzero".into(),
            ));
        }
        if coefficients.iter().map(|&c| c as i128).sum::<i128>() != 0 {
            return Err(Error::InvalidParameter(format!(
                "coefficients {coefficients:?} do not sum to 0"
            )));
        }
        Ok(Equation { coefficients })
    }

    /// `x + y + z = 3w`.
    pub fn x_plus_y_plus_z_3w() -> Self {
        Equation {
            coefficients: vec![1, 1, 1, -3],
        }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn variables(&self) -> usize {
        self.coefficients.len()
    }

    /// Sum of the positive coefficients; `|sum c_i x_i| <= height * (N - 1)`
    /// for `x_i in [1, N]`.
    pub fn height(&self) -> u64 {
        self.coefficients
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| c as u64)
            .sum()
    }

    /// `[N]` inside `Z/p` with `p` the least prime `>= 6N` that also exceeds
    /// `height * (N - 1)`, so residue solutions are integer solutions.
    pub fn interval_embedding(&self, n: u64) -> Result<IntervalEmbedding> {
        let lower = self
            .height()
            .checked_mul(n.saturating_sub(1))
            .and_then(|v| v.checked_add(1))
            .ok_or(Error::Overflow)?;
        IntervalEmbedding::with_lower_bound(n, lower)
    }

    /// Set partitions (as block labels) whose blocks all have zero coefficient sum.
    pub fn zero_sum_partitions(&self) -> Result<Vec<Vec<usize>>> {
        let k = self.variables();
        if k > MAX_VARIABLES {
            return Err(Error::TooLarge(format!(
                "{k} variables (limit {MAX_VARIABLES})"
            )));
        }
        let mut out = Vec::new();
        for labels in set_partitions(k) {
            let blocks = labels.iter().max().map_or(0, |&m| m + 1);
            let mut sums = vec![0i128; blocks];
            for (i, &b) in labels.iter().enumerate() {
                sums[b] += self.coefficients[i] as i128;
            }
            if sums.iter().all(|&s| s == 0) {
                out.push(labels);
            }
        }
        Ok(out)
    }

    /// Whether the tuple's equality pattern has zero-sum blocks. A tuple is
    /// constant on the blocks of a zero-sum partition exactly when the
    /// partition into equal-value classes is itself zero-sum.
    fn is_trivial_tuple(&self, tuple: &[usize]) -> bool {
        let mut sums: BTreeMap<usize, i128> = BTreeMap::new();
        for (&x, &c) in tuple.iter().zip(&self.coefficients) {
            *sums.entry(x).or_insert(0) += c as i128;
        }
        sums.values().all(|&s| s == 0)
    }
}

/// All set partitions of `{0..k}` as restricted growth strings.
fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, k: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(i + 1, k, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, &mut Vec::with_capacity(k), 0, &mut out);
    out
}

/// Ordered tuples `(x_1..x_k) in A^k` with `sum c_i x_i = 0`.
///
/// Computed as `(w_1 * ... * w_{k-1})(y) w_k(-y)` summed over `y`, where
/// `w_i(y) = #{a in A : c_i a = y}`; the weights keep the count exact when a
/// coefficient shares a factor with the group order.
pub fn count_solutions(eq: &Equation, a: &GroupSet) -> Result<u64> {
    if a.is_empty() {
        return Ok(0);
    }
    let ws: Vec<IntFunction> = eq
        .coefficients
        .iter()
        .map(|&c| IntFunction::dilated_indicator(a, c))
        .collect();
    let (last, rest) = ws.split_last().expect("k >= 3");
    let refs: Vec<&IntFunction> = rest.iter().collect();
    let head = convolve_many(&refs)?;
    let total = head.inner(&last.reflect())?;
    u64::try_from(total).map_err(|_| Error::Overflow)
}

/// Ordered trivial tuples in `A^k`: `sum over zero-sum partitions p of (|A|)_{|p|}`,
/// the falling factorial counting injective block assignments.
pub fn count_trivial(eq: &Equation, a: &GroupSet) -> Result<u64> {
    let n = a.len() as u128;
    let mut total: u128 = 0;
    for labels in eq.zero_sum_partitions()? {
        let blocks = labels.iter().max().map_or(0, |&m| m + 1) as u128;
        let mut ff: u128 = 1;
        for i in 0..blocks {
            ff = ff.saturating_mul(n.saturating_sub(i));
        }
        total = total.checked_add(ff).ok_or(Error::Overflow)?;
    }
    u64::try_from(total).map_err(|_| Error::Overflow)
}

pub fn solution_count(eq: &Equation, a: &GroupSet) -> Result<SolutionCount> {
    let total = count_solutions(eq, a)?;
    let trivial = count_trivial(eq, a)?;
    if trivial > total {
        return Err(Error::VerificationFailed(format!(
            "trivial count {trivial} exceeds total {total}"
        )));
    }
    Ok(SolutionCount { total, trivial })
}

pub fn has_nontrivial(eq: &Equation, a: &GroupSet) -> Result<bool> {
    Ok(solution_count(eq, a)?.nontrivial() > 0)
}

/// Plain enumeration of `A^k`, classifying each solution against the list
/// of zero-sum partitions. Independent of the convolution and closed-form paths.
pub fn brute_force_count(eq: &Equation, a: &GroupSet) -> Result<SolutionCount> {
    let k = eq.variables();
    let elems = a.to_vec();
    let size = (elems.len() as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!("|A|^k = {size} tuples")));
    }
    if elems.is_empty() {
        return Ok(SolutionCount {
            total: 0,
            trivial: 0,
        });
    }
    let partitions = eq.zero_sum_partitions()?;
    let g = a.group();
    let mut idx = vec![0usize; k];
    let mut tuple = vec![0usize; k];
    let (mut total, mut trivial) = (0u64, 0u64);
    loop {
        for (t, &i) in tuple.iter_mut().zip(&idx) {
            *t = elems[i];
        }
        let sum = tuple
            .iter()
            .zip(&eq.coefficients)
            .fold(0, |acc, (&x, &c)| g.add(acc, g.mul(c, x)));
        if sum == 0 {
            total += 1;
            let constant_on_blocks = |labels: &Vec<usize>| {
                (0..k).all(|i| (0..i).all(|j| labels[i] != labels[j] || tuple[i] == tuple[j]))
            };
            if partitions.iter().any(constant_on_blocks) {
                trivial += 1;
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(SolutionCount { total, trivial });
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Incremental freeness test for searches: does `S cup {e}` contain a
/// nontrivial solution that uses `e`, given that `S` itself has none?
pub struct FreenessChecker<'a> {
    eq: &'a Equation,
    /// For each variable, `y -> sorted elements s of S with c_i s = y`.
    preimages: Vec<BTreeMap<usize, Vec<usize>>>,
    members: Vec<usize>,
}

impl<'a> FreenessChecker<'a> {
    pub fn new(eq: &'a Equation, s: &GroupSet) -> Self {
        let mut chk = FreenessChecker {
            eq,
            preimages: vec![BTreeMap::new(); eq.variables()],
            members: Vec::new(),
        };
        for x in s.iter() {
            chk.push(s.group(), x);
        }
        chk
    }

    fn push(&mut self, g: &crate::GroupSpec, x: usize) {
        self.members.push(x);
        for (map, &c) in self.preimages.iter_mut().zip(&self.eq.coefficients) {
            map.entry(g.mul(c, x)).or_default().push(x);
        }
    }

    /// Add `x` to the tracked set.
    pub fn insert(&mut self, g: &crate::GroupSpec, x: usize) {
        self.push(g, x);
    }

    /// Remove the most recently inserted element.
    pub fn pop(&mut self, g: &crate::GroupSpec) {
        if let Some(x) = self.members.pop() {
            for (map, &c) in self.preimages.iter_mut().zip(&self.eq.coefficients) {
                let key = g.mul(c, x);
                if let Some(v) = map.get_mut(&key) {
                    v.retain(|&y| y != x);
                    if v.is_empty() {
                        map.remove(&key);
                    }
                }
            }
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Whether adding `e` (not yet tracked) creates a nontrivial solution.
    pub fn creates_nontrivial(&self, g: &crate::GroupSpec, e: usize) -> bool {
        let k = self.eq.variables();
        let c = &self.eq.coefficients;
        let mut tuple = vec![0usize; k];
        // Every solution involving e has a nonempty set of positions equal to e.
        for mask in 1u32..(1 << k) {
            if mask == (1 << k) - 1 {
                continue; // the constant tuple is always trivial
            }
            let free: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) == 0).collect();
            let mut base = 0;
            for i in 0..k {
                if mask & (1 << i) != 0 {
                    tuple[i] = e;
                    base = g.add(base, g.mul(c[i], e));
                }
            }
            if self.search_free(g, &free, 0, base, &mut tuple) {
                return true;
            }
        }
        false
    }

    fn search_free(
        &self,
        g: &crate::GroupSpec,
        free: &[usize],
        depth: usize,
        acc: usize,
        tuple: &mut [usize],
    ) -> bool {
        let pos = free[depth];
        if depth + 1 == free.len() {
            let need = g.neg(acc);
            if let Some(cands) = self.preimages[pos].get(&need) {
                for &x in cands {
                    tuple[pos] = x;
                    if !self.eq.is_trivial_tuple(tuple) {
                        return true;
                    }
                }
            }
            return false;
        }
        for &x in &self.members {
            tuple[pos] = x;
            let next = g.add(acc, g.mul(self.eq.coefficients[pos], x));
            if self.search_free(g, free, depth + 1, next, tuple) {
                return true;
            }
        }
        false
    }
}
