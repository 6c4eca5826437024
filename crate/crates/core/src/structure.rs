//! Structures inside three-fold sumsets: longest progressions in `Z/N`,
//! largest affine subspaces in `F_q^n`, and the `X + V` containment form.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::group::is_prime;
use crate::spectral::{convolve, IntFunction};
use crate::{Error, GroupSet, GroupSpec, Result, TOLERANCE};

/// `{start + j step : 0 <= j < length}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
    pub length: usize,
}

impl Progression {
    pub fn elements(&self, g: &GroupSpec) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.length);
        let mut x = self.start;
        for _ in 0..self.length {
            out.push(x);
            x = g.add(x, self.step);
        }
        out
    }

    pub fn is_contained_in(&self, set: &GroupSet) -> bool {
        self.elements(set.group())
            .into_iter()
            .all(|x| set.contains(x))
    }
}

/// `A + B + C`.
pub fn three_fold_sumset(a: &GroupSet, b: &GroupSet, c: &GroupSet) -> Result<GroupSet> {
    a.sumset(b)?.sumset(c)
}

/// Longest progression contained in `S` over `Z/N`, `N` prime.
///
/// Steps range over `1..=(N-1)/2`; for each step the orbit is walked once
/// from a non-member and maximal runs are measured. Ties go to the smallest
/// step, then the smallest start.
pub fn longest_ap(s: &GroupSet) -> Result<Progression> {
    let g = s.group();
    let n = g.order();
    if !g.is_cyclic() || !is_prime(n as u64) {
        return Err(Error::Precondition(
            "longest_ap needs Z/N with N prime".into(),
        ));
    }
    if s.is_empty() {
        return Ok(Progression {
            start: 0,
            step: 1,
            length: 0,
        });
    }
    if s.is_full() {
        return Ok(Progression {
            start: 0,
            step: 1,
            length: n,
        });
    }
    let outside = s.complement().first().expect("set is not full");
    let mut best = Progression {
        start: 0,
        step: 1,
        length: 0,
    };
    for step in 1..=((n - 1) / 2).max(1) {
        let mut x = g.add(outside, step);
        let mut run_start = 0;
        let mut run = 0;
        // n - 1 elements after the non-member, then back to it.
        for _ in 0..n {
            if s.contains(x) {
                if run == 0 {
                    run_start = x;
                }
                run += 1;
            } else if run > 0 {
                let better = run > best.length
                    || (run == best.length && step == best.step && run_start < best.start);
                if better {
                    best = Progression {
                        start: run_start,
                        step,
                        length: run,
                    };
                }
                run = 0;
            }
            x = g.add(x, step);
        }
    }
    Ok(best)
}

/// An affine subspace `shift + span(basis)` of `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub shift: usize,
    pub basis: Vec<usize>,
}

impl AffineSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// All `q^d` points.
    pub fn points(&self, g: &GroupSpec) -> Vec<usize> {
        let q = g.factors()[0];
        let mut pts = vec![self.shift];
        for &u in &self.basis {
            let mut next = Vec::with_capacity(pts.len() * q);
            for &p in &pts {
                for l in 0..q {
                    next.push(g.add(p, g.mul(l as i64, u)));
                }
            }
            pts = next;
        }
        pts
    }
}

#[derive(Clone, Debug)]
pub struct SubspaceSearch {
    pub witness: AffineSubspace,
    /// False when the node budget ran out; the witness is then the best found.
    pub complete: bool,
    pub nodes: u64,
}

/// Largest affine subspace inside `S` over `F_q^n` (prime `q`).
///
/// For each shift `v in S` the admissible directions are the normalised `u`
/// (first nonzero coordinate 1) whose whole line `v + F_q u` lies in `S`;
/// subspaces are grown from these in increasing index order, and a shift is
/// skipped when its direction count cannot support a larger dimension.
pub fn largest_affine_subspace(s: &GroupSet, node_budget: u64) -> Result<SubspaceSearch> {
    let g = s.group();
    let (q, n) = g
        .as_vector_space()
        .filter(|&(q, _)| is_prime(q as u64))
        .ok_or_else(|| {
            Error::Precondition("largest_affine_subspace needs F_q^n with q prime".into())
        })?;
    let first = s.first().ok_or(Error::EmptySet)?;
    if s.is_full() {
        let basis = (0..n).map(|i| q.pow(i as u32)).collect();
        return Ok(SubspaceSearch {
            witness: AffineSubspace { shift: 0, basis },
            complete: true,
            nodes: 0,
        });
    }
    let normalized: Vec<usize> = (1..g.order())
        .filter(|&u| g.coords(u).into_iter().find(|&c| c != 0) == Some(1))
        .collect();
    let mut best = AffineSubspace {
        shift: first,
        basis: Vec::new(),
    };
    let mut nodes = 0u64;
    let mut aborted = false;

    struct Ctx<'a> {
        g: &'a GroupSpec,
        s: &'a GroupSet,
        q: usize,
        v: usize,
        dirs: Vec<usize>,
        max_dim: usize,
    }

    fn max_dim_for(q: usize, count: usize) -> usize {
        let mut e = 0;
        let mut lines = 0usize;
        loop {
            let next = lines * q + 1; // (q^{e+1} - 1)/(q - 1)
            if next > count {
                return e;
            }
            lines = next;
            e += 1;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        ctx: &Ctx<'_>,
        span: &mut GroupSet,
        points: &mut Vec<usize>,
        basis: &mut Vec<usize>,
        from: usize,
        best: &mut AffineSubspace,
        nodes: &mut u64,
        budget: u64,
        aborted: &mut bool,
    ) {
        if *aborted {
            return;
        }
        *nodes += 1;
        if *nodes > budget {
            *aborted = true;
            return;
        }
        if basis.len() > best.dimension() {
            *best = AffineSubspace {
                shift: ctx.v,
                basis: basis.clone(),
            };
        }
        if ctx.max_dim <= best.dimension() {
            return;
        }
        for j in from..ctx.dirs.len() {
            let u = ctx.dirs[j];
            if span.contains(u) {
                continue;
            }
            let old = points.len();
            let mut ok = true;
            'outer: for l in 1..ctx.q {
                let lu = ctx.g.mul(l as i64, u);
                for i in 0..old {
                    let p = ctx.g.add(points[i], lu);
                    if !ctx.s.contains(ctx.g.add(ctx.v, p)) {
                        ok = false;
                        break 'outer;
                    }
                    points.push(p);
                }
            }
            if ok {
                for &p in &points[old..] {
                    span.insert(p);
                }
                basis.push(u);
                dfs(
                    ctx,
                    span,
                    points,
                    basis,
                    j + 1,
                    best,
                    nodes,
                    budget,
                    aborted,
                );
                basis.pop();
                for &p in &points[old..] {
                    span.remove(p);
                }
            }
            points.truncate(old);
            if *aborted || ctx.max_dim <= best.dimension() {
                return;
            }
        }
    }

    for v in s.iter() {
        let dirs: Vec<usize> = normalized
            .iter()
            .copied()
            .filter(|&u| (1..q).all(|l| s.contains(g.add(v, g.mul(l as i64, u)))))
            .collect();
        let max_dim = max_dim_for(q, dirs.len());
        if max_dim <= best.dimension() {
            continue;
        }
        let ctx = Ctx {
            g,
            s,
            q,
            v,
            dirs,
            max_dim,
        };
        let mut span = GroupSet::from_indices(g, [0]).expect("0 is an element");
        let mut points = vec![0usize];
        let mut basis = Vec::new();
        dfs(
            &ctx,
            &mut span,
            &mut points,
            &mut basis,
            0,
            &mut best,
            &mut nodes,
            node_budget,
            &mut aborted,
        );
        if aborted {
            break;
        }
    }
    if !best.points(g).into_iter().all(|p| s.contains(p)) {
        return Err(Error::VerificationFailed(
            "affine subspace witness left the set".into(),
        ));
    }
    Ok(SubspaceSearch {
        witness: best,
        complete: !aborted,
        nodes,
    })
}

#[derive(Clone, Debug)]
pub struct XvWitness {
    /// `t` maximising `|A cap (t - C)|`.
    pub shift: usize,
    /// `X subset B + t` of points whose `V`-translate is `(1 - eta)`-covered.
    pub x: GroupSet,
    pub b_size: usize,
    pub sumset: GroupSet,
    /// `|X| >= 0.99 |B|`.
    pub large: bool,
    /// Present when `eta < 1/|V|`: whether `X + V subset A + B + C` holds.
    pub certified: Option<bool>,
}

/// `X = { x in B + t : |(x + V) cap (A + B + C)| >= (1 - eta)|V| }` with `t`
/// the smallest maximiser of `1_A * 1_C`.
pub fn xv_witness(
    a: &GroupSet,
    b: &GroupSet,
    c: &GroupSet,
    v: &GroupSet,
    eta: f64,
) -> Result<XvWitness> {
    if a.is_empty() || b.is_empty() || c.is_empty() || v.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "eta = {eta} not in [0, 1]"
        )));
    }
    let g = a.group();
    for other in [b, c, v] {
        if other.group() != g {
            return Err(Error::GroupMismatch);
        }
    }
    let ac = convolve(&IntFunction::indicator(a), &IntFunction::indicator(c))?;
    let shift = (0..g.order())
        .max_by(|&x, &y| ac.at(x).cmp(&ac.at(y)).then(y.cmp(&x)))
        .expect("group is nonempty");
    let sumset = three_fold_sumset(a, b, c)?;
    let cover = convolve(
        &IntFunction::indicator(&sumset),
        &IntFunction::indicator(&v.negate()),
    )?;
    let need = (1.0 - eta) * v.len() as f64 - TOLERANCE;
    let bt = b.translate(shift);
    let x = GroupSet::from_predicate(g, |y| bt.contains(y) && cover.at(y) as f64 >= need);
    let large = x.len() as f64 >= 0.99 * b.len() as f64;
    let certified = (eta < 1.0 / v.len() as f64).then(|| {
        x.iter()
            .all(|p| v.iter().all(|w| sumset.contains(g.add(p, w))))
    });
    Ok(XvWitness {
        shift,
        x,
        b_size: b.len(),
        sumset,
        large,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_longest(s: &GroupSet) -> usize {
        let g = s.group();
        let n = g.order();
        let mut best = 0;
        for start in 0..n {
            for step in 1..n {
                let mut len = 0;
                let mut x = start;
                while len < n && s.contains(x) {
                    len += 1;
                    x = g.add(x, step);
                }
                best = best.max(len);
            }
        }
        if n == 1 {
            best = s.len();
        }
        best
    }

    #[test]
    fn sumset_examples() {
        let g = GroupSpec::cyclic(7).unwrap();
        let zero = GroupSet::from_indices(&g, [0]).unwrap();
        assert_eq!(three_fold_sumset(&zero, &zero, &zero).unwrap(), zero);
        let a = GroupSet::from_indices(&g, [0, 1]).unwrap();
        assert_eq!(
            three_fold_sumset(&a, &a, &a).unwrap().to_vec(),
            vec![0, 1, 2, 3]
        );
        let f = GroupSpec::vector_space(3, 2).unwrap();
        let line = GroupSet::from_predicate(&f, |x| f.coords(x)[1] == 0);
        assert_eq!(three_fold_sumset(&line, &line, &line).unwrap(), line);
    }

    #[test]
    fn longest_ap_examples() {
        let g = GroupSpec::cyclic(31).unwrap();
        assert_eq!(longest_ap(&GroupSet::empty(&g)).unwrap().length, 0);
        assert_eq!(longest_ap(&GroupSet::full(&g)).unwrap().length, 31);
        let s = GroupSet::from_indices(&g, [1, 2, 3, 5, 7, 9]).unwrap();
        let ap = longest_ap(&s).unwrap();
        assert_eq!(
            ap,
            Progression {
                start: 1,
                step: 2,
                length: 5
            }
        );
        assert_eq!(ap.length, brute_longest(&s));
        assert!(longest_ap(&GroupSet::full(&GroupSpec::cyclic(12).unwrap())).is_err());
        let g2 = GroupSpec::cyclic(2).unwrap();
        let one = GroupSet::from_indices(&g2, [1]).unwrap();
        assert_eq!(longest_ap(&one).unwrap().length, 1);
    }

    #[test]
    fn subspace_examples() {
        let f = GroupSpec::vector_space(2, 2).unwrap();
        let s = GroupSet::from_indices(&f, [0, 1, 2]).unwrap();
        assert_eq!(
            largest_affine_subspace(&s, u64::MAX)
                .unwrap()
                .witness
                .dimension(),
            1
        );
        assert_eq!(
            largest_affine_subspace(&GroupSet::full(&f), u64::MAX)
                .unwrap()
                .witness
                .dimension(),
            2
        );
        let f3 = GroupSpec::vector_space(3, 3).unwrap();
        let pt = GroupSet::from_indices(&f3, [5]).unwrap();
        let r = largest_affine_subspace(&pt, u64::MAX).unwrap();
        assert_eq!(r.witness.dimension(), 0);
        assert_eq!(r.witness.shift, 5);
        assert!(largest_affine_subspace(&GroupSet::empty(&f3), 10).is_err());
    }

    #[test]
    fn xv_examples() {
        let f = GroupSpec::vector_space(5, 2).unwrap();
        let a = GroupSet::from_indices(&f, [0, 3, 7, 11]).unwrap();
        let b = GroupSet::from_indices(&f, [1, 2, 20]).unwrap();
        let c = GroupSet::from_indices(&f, [4, 9]).unwrap();
        let zero = GroupSet::from_indices(&f, [0]).unwrap();
        let w = xv_witness(&a, &b, &c, &zero, 0.5).unwrap();
        assert_eq!(w.x.len(), b.len());
        assert_eq!(w.certified, Some(true));
        let line = GroupSet::from_predicate(&f, |x| f.coords(x)[1] == 0);
        let w = xv_witness(&a, &b, &c, &line, 1.0).unwrap();
        assert_eq!(w.x, b.translate(w.shift));
        assert_eq!(w.certified, None);
    }
}
