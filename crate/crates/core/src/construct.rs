//! Solution-free sets: Behrend-type sphere constructions in `[N]`, Cartesian
//! powers in `F_q^n`, and exact or greedy searches for the largest
//! solution-free subset.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equation::{has_nontrivial, Equation, FreenessChecker};
use crate::group::{embed_interval, IntervalEmbedding};
use crate::{Error, GroupSet, GroupSpec, Result};

/// Largest `m^n` accepted by [`behrend_set`].
pub const BEHREND_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct BehrendSet {
    pub digits: u32,
    pub dimension: u32,
    /// `m = 3d - 2`.
    pub base: u64,
    /// The sphere `sum x_i^2 = level` that was kept.
    pub level: u64,
    /// Members as integers in `[1, m^n)`, ascending.
    pub integers: Vec<u64>,
    pub embedding: IntervalEmbedding,
    pub set: GroupSet,
}

/// Digit vectors in `{0..d-1}^n` on the most populated sphere (smallest
/// level on ties), read as base `3d - 2` integers and embedded into
/// `Z/N'` via [`embed_interval`]. Freeness for `x + y + z = 3w` is
/// verified before returning.
pub fn behrend_set(d: u32, n: u32) -> Result<BehrendSet> {
    if d < 2 || n < 1 {
        return Err(Error::InvalidParameter("need d >= 2 and n >= 1".into()));
    }
    let base = 3 * d as u64 - 2;
    let range = base
        .checked_pow(n)
        .filter(|&r| r <= BEHREND_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{base}^{n} exceeds {BEHREND_LIMIT}")))?;
    let max_level = n as u64 * (d as u64 - 1).pow(2);
    let mut by_level: Vec<Vec<u64>> = vec![Vec::new(); max_level as usize + 1];
    let total = (d as u64).pow(n);
    for code in 0..total {
        let (mut rest, mut value, mut place, mut level) = (code, 0u64, 1u64, 0u64);
        for _ in 0..n {
            let digit = rest % d as u64;
            rest /= d as u64;
            value += digit * place;
            place *= base;
            level += digit * digit;
        }
        by_level[level as usize].push(value);
    }
    let (level, _) =
        by_level
            .iter()
            .enumerate()
            .skip(1)
            .fold((1usize, 0usize), |(bl, bc), (k, v)| {
                if v.len() > bc {
                    (k, v.len())
                } else {
                    (bl, bc)
                }
            });
    let mut integers = core::mem::take(&mut by_level[level]);
    integers.sort_unstable();
    let embedding = embed_interval(range)?;
    let set = embedding.embed_set(integers.iter().copied())?;
    if has_nontrivial(&Equation::x_plus_y_plus_z_3w(), &set)? {
        return Err(Error::VerificationFailed(format!(
            "Behrend set d={d} n={n} has a nontrivial solution"
        )));
    }
    Ok(BehrendSet {
        digits: d,
        dimension: n,
        base,
        level: level as u64,
        integers,
        embedding,
        set,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    /// Exact solution count of the product.
    Exact,
    /// Random tuples of the product checked one by one.
    Sampled { samples: u64 },
}

#[derive(Clone, Debug)]
pub struct ProductConstruction {
    pub set: GroupSet,
    pub verification: Verification,
}

/// Largest product group whose solution count is computed exactly.
pub const PRODUCT_EXACT_LIMIT: usize = 1 << 22;
pub const PRODUCT_SAMPLES: u64 = 1_000_000;

/// `S^k` inside `G^k`. Coordinates of the first factor come first.
pub fn product_construction(
    eq: &Equation,
    s: &GroupSet,
    k: u32,
    seed: u64,
) -> Result<ProductConstruction> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if has_nontrivial(eq, s)? {
        return Err(Error::Precondition("input set is not solution-free".into()));
    }
    let base = s.group();
    let mut group = base.clone();
    for _ in 1..k {
        group = group.product(base)?;
    }
    let elems = s.to_vec();
    let mut members = vec![0usize];
    let mut scale = 1usize;
    for _ in 0..k {
        members = members
            .iter()
            .flat_map(|&m| elems.iter().map(move |&e| m + e * scale))
            .collect();
        scale *= base.order();
    }
    let set = GroupSet::from_indices(&group, members)?;
    let verification = if group.order() <= PRODUCT_EXACT_LIMIT {
        if has_nontrivial(eq, &set)? {
            return Err(Error::VerificationFailed(
                "product has a nontrivial solution".into(),
            ));
        }
        Verification::Exact
    } else {
        sample_check(eq, &set, PRODUCT_SAMPLES, seed)?;
        Verification::Sampled {
            samples: PRODUCT_SAMPLES,
        }
    };
    Ok(ProductConstruction { set, verification })
}

fn sample_check(eq: &Equation, set: &GroupSet, samples: u64, seed: u64) -> Result<()> {
    let elems = set.to_vec();
    if elems.is_empty() {
        return Ok(());
    }
    let g = set.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuple = vec![0usize; eq.variables()];
    for _ in 0..samples {
        for t in tuple.iter_mut() {
            *t = elems[rng.gen_range(0..elems.len())];
        }
        let sum = tuple
            .iter()
            .zip(eq.coefficients())
            .fold(0, |acc, (&x, &c)| g.add(acc, g.mul(c, x)));
        if sum == 0 && !tuple_is_trivial(eq, &tuple) {
            return Err(Error::VerificationFailed(format!(
                "sampled nontrivial solution {tuple:?}"
            )));
        }
    }
    Ok(())
}

fn tuple_is_trivial(eq: &Equation, tuple: &[usize]) -> bool {
    let c = eq.coefficients();
    (0..tuple.len()).all(|i| {
        let s: i128 = (0..tuple.len())
            .filter(|&j| tuple[j] == tuple[i])
            .map(|j| c[j] as i128)
            .sum();
        s == 0
    })
}

/// Elements a search may use, in the order it considers them.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub group: GroupSpec,
    pub candidates: Vec<usize>,
    /// Present when the space is `[N]` embedded in `Z/p`.
    pub embedding: Option<IntervalEmbedding>,
}

impl SearchSpace {
    /// `[N]` embedded so that residue solutions of `eq` are integer solutions.
    pub fn interval(eq: &Equation, n: u64) -> Result<Self> {
        let e = eq.interval_embedding(n)?;
        Ok(SearchSpace {
            group: e.group.clone(),
            candidates: (1..=n).map(|k| e.embed(k)).collect(),
            embedding: Some(e),
        })
    }

    pub fn whole_group(group: &GroupSpec) -> Self {
        SearchSpace {
            group: group.clone(),
            candidates: (0..group.order()).collect(),
            embedding: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub size: usize,
    pub witness: GroupSet,
    /// False when the node budget ran out; `size` is then a lower bound.
    pub complete: bool,
    pub nodes: u64,
}

/// Branch and bound over candidates in order: include before exclude, cut
/// when the remaining candidates cannot beat the incumbent.
pub fn search_extremal_exact(
    eq: &Equation,
    space: &SearchSpace,
    node_budget: u64,
) -> Result<ExtremalResult> {
    struct State<'a> {
        g: &'a GroupSpec,
        cands: &'a [usize],
        chk: FreenessChecker<'a>,
        best: Vec<usize>,
        nodes: u64,
        budget: u64,
        aborted: bool,
    }
    fn dfs(st: &mut State<'_>, i: usize) {
        if st.aborted {
            return;
        }
        st.nodes += 1;
        if st.nodes > st.budget {
            st.aborted = true;
            return;
        }
        let cur = st.chk.members().len();
        if cur > st.best.len() {
            st.best = st.chk.members().to_vec();
        }
        if i == st.cands.len() || cur + (st.cands.len() - i) <= st.best.len() {
            return;
        }
        let x = st.cands[i];
        if !st.chk.creates_nontrivial(st.g, x) {
            st.chk.insert(st.g, x);
            dfs(st, i + 1);
            st.chk.pop(st.g);
        }
        dfs(st, i + 1);
    }
    let empty = GroupSet::empty(&space.group);
    let mut st = State {
        g: &space.group,
        cands: &space.candidates,
        chk: FreenessChecker::new(eq, &empty),
        best: Vec::new(),
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    dfs(&mut st, 0);
    let witness = GroupSet::from_indices(&space.group, st.best.iter().copied())?;
    verify_free(eq, &witness)?;
    Ok(ExtremalResult {
        size: witness.len(),
        witness,
        complete: !st.aborted,
        nodes: st.nodes,
    })
}

/// Randomized greedy insertion with single-removal restarts, best of
/// `restarts` runs. Deterministic for a given seed.
pub fn search_extremal_greedy(
    eq: &Equation,
    space: &SearchSpace,
    seed: u64,
    restarts: u32,
) -> Result<ExtremalResult> {
    let g = &space.group;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    for _ in 0..restarts.max(1) {
        let mut order = space.candidates.clone();
        order.shuffle(&mut rng);
        let mut current = greedy_fill(eq, g, &[], &order, None, &mut nodes);
        // Drop one element (tabu for this pass) and refill; keep strict gains.
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..current.len() {
                let tabu = current[i];
                let kept: Vec<usize> = current.iter().copied().filter(|&x| x != tabu).collect();
                let refilled = greedy_fill(eq, g, &kept, &order, Some(tabu), &mut nodes);
                if refilled.len() > current.len() {
                    current = refilled;
                    improved = true;
                    break;
                }
            }
        }
        if current.len() > best.len() {
            best = current;
        }
    }
    let witness = GroupSet::from_indices(g, best.iter().copied())?;
    verify_free(eq, &witness)?;
    Ok(ExtremalResult {
        size: witness.len(),
        witness,
        complete: false,
        nodes,
    })
}

fn greedy_fill(
    eq: &Equation,
    g: &GroupSpec,
    start: &[usize],
    order: &[usize],
    tabu: Option<usize>,
    nodes: &mut u64,
) -> Vec<usize> {
    let set = GroupSet::from_indices(g, start.iter().copied()).expect("members are group elements");
    let mut chk = FreenessChecker::new(eq, &set);
    for &x in order {
        *nodes += 1;
        if Some(x) == tabu || set.contains(x) || chk.members().contains(&x) {
            continue;
        }
        if !chk.creates_nontrivial(g, x) {
            chk.insert(g, x);
        }
    }
    chk.members().to_vec()
}

fn verify_free(eq: &Equation, set: &GroupSet) -> Result<()> {
    if has_nontrivial(eq, set)? {
        return Err(Error::VerificationFailed(
            "search produced a set with a nontrivial solution".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::brute_force_count;

    #[test]
    fn behrend_examples() {
        let b = behrend_set(2, 2).unwrap();
        assert_eq!(b.base, 4);
        assert_eq!(b.level, 1);
        assert_eq!(b.integers, vec![1, 4]);
        let b = behrend_set(2, 1).unwrap();
        assert_eq!(b.integers, vec![1]);
        let b = behrend_set(3, 2).unwrap();
        assert_eq!(b.base, 7);
        let oracle = brute_force_count(&Equation::x_plus_y_plus_z_3w(), &b.set).unwrap();
        assert_eq!(oracle.nontrivial(), 0);
        assert!(behrend_set(1, 2).is_err());
        assert!(behrend_set(100, 5).is_err());
    }

    #[test]
    fn product_examples() {
        let eq = Equation::x_plus_y_plus_z_3w();
        let f5 = GroupSpec::vector_space(5, 1).unwrap();
        let s = GroupSet::from_indices(&f5, [0, 1]).unwrap();
        let p1 = product_construction(&eq, &s, 1, 0).unwrap();
        assert_eq!(p1.set, s);
        let p2 = product_construction(&eq, &s, 2, 0).unwrap();
        assert_eq!(p2.set.len(), 4);
        assert_eq!(p2.set.group().factors(), &[5, 5]);
        assert_eq!(brute_force_count(&eq, &p2.set).unwrap().nontrivial(), 0);
        let bad = GroupSet::from_indices(&f5, [0, 1, 2, 3]).unwrap();
        assert!(product_construction(&eq, &bad, 2, 0).is_err());
    }

    #[test]
    fn exact_search_small_intervals() {
        let eq = Equation::x_plus_y_plus_z_3w();
        for (n, want) in [(1u64, 1usize), (2, 2), (4, 2)] {
            let space = SearchSpace::interval(&eq, n).unwrap();
            let r = search_extremal_exact(&eq, &space, 1 << 30).unwrap();
            assert!(r.complete);
            assert_eq!(r.size, want, "N = {n}");
        }
        let space = SearchSpace::interval(&eq, 1).unwrap();
        let r = search_extremal_exact(&eq, &space, 1 << 30).unwrap();
        assert_eq!(r.witness.to_vec(), vec![1]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let eq = Equation::x_plus_y_plus_z_3w();
        let space = SearchSpace::interval(&eq, 14).unwrap();
        let r = search_extremal_exact(&eq, &space, 5).unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn greedy_examples() {
        let eq = Equation::x_plus_y_plus_z_3w();
        let space = SearchSpace::interval(&eq, 4).unwrap();
        for seed in 0..20 {
            let r = search_extremal_greedy(&eq, &space, seed, 3).unwrap();
            assert_eq!(r.size, 2);
        }
        let f = GroupSpec::vector_space(5, 2).unwrap();
        let space = SearchSpace::whole_group(&f);
        let a = search_extremal_greedy(&eq, &space, 7, 4).unwrap();
        let b = search_extremal_greedy(&eq, &space, 7, 4).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(brute_force_count(&eq, &a.witness).unwrap().nontrivial(), 0);
    }
}
