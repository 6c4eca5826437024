//! Almost-period sets by exhaustive scan.
//!
//! For `f = 1_A * 1_L` the `L^p` period set is
//! `{ t in S : ||f(. + t) - f||_p <= eps |A| |L|^{1/p} }`; for
//! `h = 1_A * 1_M * 1_L` the `L^inf` set uses the threshold `eps |A| |M|`.
//! The convolution is computed once and every shift is evaluated from it.
//! [`LpScan`] and [`LinftyScan`] expose the per-shift norm so callers can
//! distribute the scan; [`collect_periods`] turns norms into the result.

use alloc::format;
use alloc::vec::Vec;

use crate::spectral::{convolve, lp_norm_of, IntFunction};
use crate::{Error, GroupSet, Ratio, Result};

/// Relative slack when comparing a norm to its threshold.
const RELATIVE_SLACK: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct PeriodSet {
    pub periods: GroupSet,
    pub threshold: f64,
    /// Largest norm among the accepted shifts.
    pub max_norm_over_t: f64,
    /// `|T| / |S|`.
    pub density: Ratio,
    pub s_size: usize,
}

/// `||f(. + t) - f||_p` for a precomputed integer function `f`.
pub fn shifted_difference_norm(f: &IntFunction, t: usize, p: f64) -> Result<f64> {
    let g = f.group();
    let v = f.values();
    lp_norm_of(
        (0..g.order()).map(|x| (v[g.add(x, t)] - v[x]).unsigned_abs() as f64),
        p,
    )
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 2.0 {
        return Err(Error::InvalidParameter(format!("p = {p} must be >= 2")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} must be positive"
        )));
    }
    Ok(())
}

/// Precomputed `1_A * 1_L` with the `L^p` threshold.
#[derive(Clone, Debug)]
pub struct LpScan {
    pub conv: IntFunction,
    pub p: f64,
    pub threshold: f64,
}

impl LpScan {
    pub fn new(a: &GroupSet, l: &GroupSet, p: f64, eps: f64) -> Result<Self> {
        if a.is_empty() || l.is_empty() {
            return Err(Error::EmptySet);
        }
        check_p(p)?;
        check_eps(eps)?;
        let conv = convolve(&IntFunction::indicator(a), &IntFunction::indicator(l))?;
        let threshold = if p.is_infinite() {
            eps * a.len() as f64
        } else {
            eps * a.len() as f64 * libm::pow(l.len() as f64, 1.0 / p)
        };
        Ok(LpScan { conv, p, threshold })
    }

    pub fn norm_at(&self, t: usize) -> f64 {
        shifted_difference_norm(&self.conv, t, self.p).expect("p validated")
    }
}

/// Precomputed `1_A * 1_M * 1_L` with the `L^inf` threshold.
#[derive(Clone, Debug)]
pub struct LinftyScan {
    pub conv: IntFunction,
    pub threshold: f64,
    /// `|M| > |L|`: outside the regime `eta <= 1` of the three-fold theorems.
    pub eta_exceeds_one: bool,
}

impl LinftyScan {
    pub fn new(a: &GroupSet, m: &GroupSet, l: &GroupSet, eps: f64) -> Result<Self> {
        if a.is_empty() || m.is_empty() || l.is_empty() {
            return Err(Error::EmptySet);
        }
        check_eps(eps)?;
        let am = convolve(&IntFunction::indicator(a), &IntFunction::indicator(m))?;
        let conv = convolve(&am, &IntFunction::indicator(l))?;
        Ok(LinftyScan {
            conv,
            threshold: eps * a.len() as f64 * m.len() as f64,
            eta_exceeds_one: m.len() > l.len(),
        })
    }

    pub fn norm_at(&self, t: usize) -> f64 {
        let g = self.conv.group();
        let v = self.conv.values();
        (0..g.order())
            .map(|x| (v[g.add(x, t)] - v[x]).unsigned_abs())
            .max()
            .unwrap_or(0) as f64
    }
}

/// `T = { t : norm(t) <= threshold }` from `(t, norm)` pairs covering `S`.
pub fn collect_periods(s: &GroupSet, norms: &[(usize, f64)], threshold: f64) -> PeriodSet {
    let limit = threshold * (1.0 + RELATIVE_SLACK);
    let mut periods = GroupSet::empty(s.group());
    let mut max_norm: f64 = 0.0;
    for &(t, norm) in norms {
        if norm <= limit {
            periods.insert(t);
            max_norm = max_norm.max(norm);
        }
    }
    let density = if s.is_empty() {
        Ratio::from_integer(0)
    } else {
        Ratio::new(periods.len() as u64, s.len() as u64)
    };
    PeriodSet {
        periods,
        threshold,
        max_norm_over_t: max_norm,
        density,
        s_size: s.len(),
    }
}

fn check_same_group(sets: &[&GroupSet]) -> Result<()> {
    let g = sets[0].group();
    if sets.iter().any(|s| s.group() != g) {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// `{ t in S : ||1_A*1_L(. + t) - 1_A*1_L||_p <= eps |A| |L|^{1/p} }`.
pub fn lp_almost_periods(
    a: &GroupSet,
    l: &GroupSet,
    p: f64,
    eps: f64,
    s: &GroupSet,
) -> Result<PeriodSet> {
    check_same_group(&[a, l, s])?;
    let scan = LpScan::new(a, l, p, eps)?;
    let norms: Vec<(usize, f64)> = s.iter().map(|t| (t, scan.norm_at(t))).collect();
    Ok(collect_periods(s, &norms, scan.threshold))
}

/// `{ t in S : ||h(. + t) - h||_inf <= eps |A| |M| }` for `h = 1_A*1_M*1_L`.
pub fn linfty_three_fold_periods(
    a: &GroupSet,
    m: &GroupSet,
    l: &GroupSet,
    eps: f64,
    s: &GroupSet,
) -> Result<PeriodSet> {
    check_same_group(&[a, m, l, s])?;
    let scan = LinftyScan::new(a, m, l, eps)?;
    let norms: Vec<(usize, f64)> = s.iter().map(|t| (t, scan.norm_at(t))).collect();
    Ok(collect_periods(s, &norms, scan.threshold))
}

#[derive(Clone, Debug)]
pub struct AlmostPeriodReport {
    /// `K = |A + S| / |A|`.
    pub doubling: Ratio,
    pub periods: PeriodSet,
    pub t_subset_of_s: bool,
    pub k: usize,
    /// `|kT - kT|`.
    pub kt_size: usize,
    /// Largest normalised norm `||f(. + t) - f||_p / (|A||L|^{1/p})` over `t in kT - kT`.
    pub kt_max_ratio: f64,
    /// `kt_max_ratio <= 2 k eps`, the triangle-inequality bound for `2k` shifts.
    pub kt_within_bound: bool,
}

/// Scan-based check of the `L^p` almost-periodicity statement: computes
/// `K`, the period set `T`, and every shift in `kT - kT`. The density of
/// `T` is reported only.
pub fn verify_lp_almost_periodicity(
    a: &GroupSet,
    l: &GroupSet,
    s: &GroupSet,
    p: f64,
    eps: f64,
    k: usize,
) -> Result<AlmostPeriodReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    check_same_group(&[a, l, s])?;
    let scan = LpScan::new(a, l, p, eps)?;
    let norms: Vec<(usize, f64)> = s.iter().map(|t| (t, scan.norm_at(t))).collect();
    let periods = collect_periods(s, &norms, scan.threshold);
    let doubling = Ratio::new(a.sumset(s)?.len() as u64, a.len() as u64);
    let t = &periods.periods;
    let t_subset_of_s = t.is_subset(s)?;
    let kt = t.iterated_sumset(k)?;
    let ktkt = kt.difference_set(&kt)?;
    let scale = scan.threshold / eps;
    let kt_max_ratio = ktkt
        .iter()
        .map(|x| scan.norm_at(x) / scale)
        .fold(0.0, f64::max);
    let kt_within_bound = kt_max_ratio <= 2.0 * k as f64 * eps * (1.0 + RELATIVE_SLACK);
    Ok(AlmostPeriodReport {
        doubling,
        periods,
        t_subset_of_s,
        k,
        kt_size: ktkt.len(),
        kt_max_ratio,
        kt_within_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GroupSpec;

    #[test]
    fn lp_examples() {
        let g = GroupSpec::cyclic(7).unwrap();
        let zero = GroupSet::from_indices(&g, [0]).unwrap();
        let all = GroupSet::full(&g);
        let t = lp_almost_periods(&zero, &zero, 2.0, 0.5, &all).unwrap();
        assert_eq!(t.periods.to_vec(), alloc::vec![0]);
        let t = lp_almost_periods(&all, &all, 2.0, 0.1, &all).unwrap();
        assert_eq!(t.periods, all);
        assert_eq!(t.density, Ratio::from_integer(1));
        assert!(lp_almost_periods(&GroupSet::empty(&g), &all, 2.0, 0.1, &all).is_err());
        assert!(lp_almost_periods(&all, &all, 1.5, 0.1, &all).is_err());
    }

    #[test]
    fn linfty_examples() {
        let g = GroupSpec::cyclic(11).unwrap();
        let all = GroupSet::full(&g);
        assert_eq!(
            linfty_three_fold_periods(&all, &all, &all, 0.01, &all)
                .unwrap()
                .periods,
            all
        );
        let a = GroupSet::from_indices(&g, [0, 1, 3]).unwrap();
        let m = GroupSet::from_indices(&g, [2, 5]).unwrap();
        let l = GroupSet::from_indices(&g, [0, 4, 6, 7]).unwrap();
        let mut prev: Option<GroupSet> = None;
        for eps in [0.05, 0.2, 0.5, 1.0, 2.0] {
            let t = linfty_three_fold_periods(&a, &m, &l, eps, &all).unwrap();
            assert!(t.periods.contains(0));
            if let Some(p) = prev {
                assert!(p.is_subset(&t.periods).unwrap());
            }
            prev = Some(t.periods);
        }
    }

    #[test]
    fn report_on_whole_group() {
        let g = GroupSpec::cyclic(13).unwrap();
        let all = GroupSet::full(&g);
        let r = verify_lp_almost_periodicity(&all, &all, &all, 2.0, 0.5, 1).unwrap();
        assert_eq!(r.periods.density, Ratio::from_integer(1));
        assert_eq!(r.doubling, Ratio::from_integer(1));
        assert!(r.t_subset_of_s && r.kt_within_bound);
    }
}
