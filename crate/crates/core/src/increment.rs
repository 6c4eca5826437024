//! Density increments for solution-free sets and the iteration that chains them.
//!
//! Two engines are provided. Over `F_q^n` the substructures are subspaces
//! annihilated by characters drawn from large spectra; after each step the
//! set is pulled back into a fresh `F_q^{n - codim}`. Over `Z/N` the
//! substructures are Bohr sets obtained by rescaling, a two-scale selection,
//! and annihilator Bohr sets built from large spectra; the set stays inside
//! `Z/N` with the current Bohr set carried alongside.
//!
//! Candidates are enumerated in a fixed order and every translate is scanned
//! exhaustively, so each step is deterministic. Every returned step has its
//! density recounted from the bitsets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bohr::BohrSet;
use crate::equation::{has_nontrivial, Equation};
use crate::group::is_prime;
use crate::linalg::{dot, kernel_basis, rref};
use crate::spectral::{convolve, normalized_transform, IntFunction};
use crate::{Error, GroupSet, GroupSpec, Ratio, Result, TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumsetCase {
    /// `mu(A + A) >= 1/2`.
    Large,
    Small,
}

pub fn classify_case(a: &GroupSet) -> Result<SumsetCase> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let ss = a.sumset(a)?;
    Ok(if 2 * ss.len() >= a.group().order() {
        SumsetCase::Large
    } else {
        SumsetCase::Small
    })
}

/// `1_A * mu_V(x) = |A cap (x - V)| / |V|`.
pub fn recount(a: &GroupSet, v: &GroupSet, x: usize) -> Result<Ratio> {
    if v.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = a.group();
    let hits = v.iter().filter(|&y| a.contains(g.sub(x, y))).count();
    Ok(Ratio::new(hits as u64, v.len() as u64))
}

#[derive(Clone, Debug)]
pub enum Structure {
    /// The subspace annihilated by `annihilator` (rows in reduced echelon form).
    Subspace {
        annihilator: Vec<Vec<u64>>,
    },
    Bohr(BohrSet),
}

impl Structure {
    /// Codimension of a subspace or rank of a Bohr set.
    pub fn rank(&self) -> usize {
        match self {
            Structure::Subspace { annihilator } => annihilator.len(),
            Structure::Bohr(b) => b.rank(),
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            Structure::Subspace { .. } => None,
            Structure::Bohr(b) => Some(b.radius()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IncrementStep {
    pub structure: Structure,
    /// Member set of the structure `V`; contains 0.
    pub members: GroupSet,
    pub translate: usize,
    pub old_density: Ratio,
    /// `|A cap (x - V)| / |V|`, recounted.
    pub new_density: Ratio,
    /// Which candidate family produced the step.
    pub source: String,
    /// Bohr engine only: whether `|B| >= (Cd/alpha)^{3d}` held.
    pub size_hypothesis: Option<bool>,
}

#[allow(clippy::too_many_arguments)]
fn finish_step(
    a: &GroupSet,
    structure: Structure,
    members: GroupSet,
    x: usize,
    old: Ratio,
    need: Ratio,
    source: String,
    size_hypothesis: Option<bool>,
) -> Result<IncrementStep> {
    let new_density = recount(a, &members, x)?;
    if new_density < need {
        return Err(Error::VerificationFailed(format!(
            "recount {new_density} below required {need} for {source}"
        )));
    }
    Ok(IncrementStep {
        structure,
        members,
        translate: x,
        old_density: old,
        new_density,
        source,
        size_hypothesis,
    })
}

fn ratio_from_f64_floor(x: f64) -> String {
    format!("{x:.6}")
}

/// `k`-subsets of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Nonzero characters with `|mu_W^(gamma)| >= delta`, strongest first
/// (ties by index), truncated to `cap`.
fn ranked_spectrum(w: &GroupSet, delta: f64, cap: usize, exclude: &[usize]) -> Result<Vec<usize>> {
    let s = normalized_transform(w)?;
    let threshold = delta * delta - TOLERANCE;
    let mut v: Vec<(usize, f64)> = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|&(g, c)| g != 0 && !exclude.contains(&g) && c.norm_sqr() >= threshold)
        .map(|(g, c)| (g, c.norm_sqr()))
        .collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    v.truncate(cap);
    Ok(v.into_iter().map(|(g, _)| g).collect())
}

const SPECTRUM_DELTAS: [f64; 3] = [0.5, 0.25, 0.125];

/// Search limits for the finite-field step.
#[derive(Clone, Debug)]
pub struct FfParams {
    pub max_codim: usize,
    /// Distinct subspaces examined before giving up.
    pub candidate_budget: usize,
    /// Characters kept from each spectrum.
    pub spectrum_cap: usize,
}

impl Default for FfParams {
    fn default() -> Self {
        FfParams {
            max_codim: 4,
            candidate_budget: 100_000,
            spectrum_cap: 32,
        }
    }
}

fn vector_space(g: &GroupSpec) -> Result<(u64, usize)> {
    let (q, n) = g
        .as_vector_space()
        .filter(|&(q, _)| is_prime(q as u64))
        .ok_or_else(|| {
            Error::Precondition("the subspace engine needs F_q^n with q prime".into())
        })?;
    if q == 3 {
        return Err(Error::Precondition("q must be coprime to 3".into()));
    }
    Ok((q as u64, n))
}

/// One finite-field increment: the first subspace `V` (annihilator of a set
/// `Lambda` of large-spectrum characters of `A`, `A + A` or `-3.A`, at most
/// `max_codim` of them) and smallest translate `x` with
/// `|A cap (x - V)| / |V| >= target * mu(A)`.
///
/// Order: codimension, then spectrum threshold `1/2, 1/4, 1/8`, then source
/// set, then `Lambda` lexicographically in the ranked spectrum; spans
/// already examined are skipped.
pub fn increment_step_ff(a: &GroupSet, target: Ratio, params: &FfParams) -> Result<IncrementStep> {
    let g = a.group();
    let (q, n) = vector_space(g)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let alpha = a.density();
    let need = target * alpha;
    if need > Ratio::from_integer(1) {
        return Err(Error::NotFound(format!(
            "required density {need} exceeds 1"
        )));
    }
    let sources = [
        ("A", a.clone()),
        ("A+A", a.sumset(a)?),
        ("-3.A", a.dilate(-3)),
    ];
    let mut spectra: Vec<Vec<Vec<usize>>> = Vec::new();
    for &delta in &SPECTRUM_DELTAS {
        let mut per_source = Vec::new();
        for (_, w) in &sources {
            per_source.push(ranked_spectrum(w, delta, params.spectrum_cap, &[])?);
        }
        spectra.push(per_source);
    }
    let coords: Vec<Vec<usize>> = (0..g.order()).map(|x| g.coords(x)).collect();
    let mut seen: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let mut examined = 0usize;
    let mut best_seen = Ratio::from_integer(0);
    let mut found: Option<(Vec<Vec<u64>>, usize, String)> = None;
    let mut exhausted = false;

    'search: for codim in 1..=params.max_codim.min(n) {
        for (di, &delta) in SPECTRUM_DELTAS.iter().enumerate() {
            for (si, (name, _)) in sources.iter().enumerate() {
                let spec = &spectra[di][si];
                let mut stop = false;
                for_each_combination(spec.len(), codim, |pick| {
                    let mut rows: Vec<Vec<u64>> = pick
                        .iter()
                        .map(|&i| coords[spec[i]].iter().map(|&c| c as u64).collect())
                        .collect();
                    rref(&mut rows, q);
                    if rows.len() < codim || !seen.insert(rows.clone()) {
                        return true;
                    }
                    examined += 1;
                    if examined > params.candidate_budget {
                        exhausted = true;
                        stop = true;
                        return false;
                    }
                    // Coset label of x is (row . x)_rows in base q.
                    let label = |x: usize| {
                        rows.iter().fold(0usize, |acc, r| {
                            acc * q as usize + dot(r, &coords[x], q) as usize
                        })
                    };
                    let cosets = (q as usize).pow(rows.len() as u32);
                    let mut counts = vec![0u64; cosets];
                    for y in a.iter() {
                        counts[label(y)] += 1;
                    }
                    let v_size = (g.order() / cosets) as u64;
                    let best = *counts.iter().max().unwrap_or(&0);
                    best_seen = best_seen.max(Ratio::new(best, v_size));
                    if Ratio::new(best, v_size) >= need {
                        let x = (0..g.order())
                            .find(|&x| Ratio::new(counts[label(x)], v_size) >= need)
                            .expect("some coset reaches the maximum");
                        found = Some((rows, x, format!("spec_{delta}({name}), codim {codim}")));
                        stop = true;
                        return false;
                    }
                    true
                });
                if stop {
                    break 'search;
                }
            }
        }
    }
    let Some((rows, x, source)) = found else {
        let why = if exhausted {
            "candidate budget exhausted"
        } else {
            "no candidate reached the target"
        };
        return Err(Error::NotFound(format!(
            "{why}; {examined} subspaces examined, best density {best_seen} vs required {need}"
        )));
    };
    let members = GroupSet::from_predicate(g, |y| rows.iter().all(|r| dot(r, &coords[y], q) == 0));
    finish_step(
        a,
        Structure::Subspace { annihilator: rows },
        members,
        x,
        alpha,
        need,
        source,
        None,
    )
}

/// Parameters of the Bohr-set step. `c` is the constant in `delta = alpha / (C d)`.
#[derive(Clone, Debug)]
pub struct BohrParams {
    pub c: f64,
    pub max_extra_rank: usize,
    /// Radii `rho_S 2^{-j}` for `j < radius_steps`.
    pub radius_steps: usize,
    pub spectrum_cap: usize,
    pub candidate_budget: usize,
}

impl Default for BohrParams {
    fn default() -> Self {
        BohrParams {
            c: 100.0,
            max_extra_rank: 2,
            radius_steps: 6,
            spectrum_cap: 16,
            candidate_budget: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoScale {
    /// `x in B` with both `1_A * mu_{B'}(x)` and `1_A * mu_{B''}(x)` at least `7/10 alpha`.
    Case1 {
        x: usize,
        outer: Ratio,
        inner: Ratio,
    },
    /// A translate of `B'` (`inner = false`) or `B''` (`inner = true`) with density `>= 5/4 alpha`.
    Case2 {
        inner: bool,
        x: usize,
        density: Ratio,
    },
}

fn translate_densities(a: &GroupSet, v: &GroupSet) -> Result<Vec<Ratio>> {
    let conv = convolve(&IntFunction::indicator(a), &IntFunction::indicator(v))?;
    Ok(conv
        .values()
        .iter()
        .map(|&c| Ratio::new(c as u64, v.len() as u64))
        .collect())
}

fn check_subset(a: &GroupSet, b: &GroupSet) -> Result<()> {
    if !a.is_subset(b)? {
        return Err(Error::Precondition("A must be a subset of B".into()));
    }
    Ok(())
}

fn case1_witness(b: &GroupSet, alpha: Ratio, d1: &[Ratio], d2: &[Ratio]) -> Option<TwoScale> {
    let bar = Ratio::new(7, 10) * alpha;
    b.iter()
        .find(|&x| d1[x] >= bar && d2[x] >= bar)
        .map(|x| TwoScale::Case1 {
            x,
            outer: d1[x],
            inner: d2[x],
        })
}

/// Case 2 if some translate of `B'` or `B''` carries density `>= 5/4 alpha`
/// (the densest; `B'` first, then smallest `x`), otherwise Case 1 with the
/// smallest qualifying `x in B`; neither is reported as `NotFound`.
pub fn two_scale_select(
    a: &GroupSet,
    b: &GroupSet,
    b1: &GroupSet,
    b2: &GroupSet,
) -> Result<TwoScale> {
    if a.is_empty() || b1.is_empty() || b2.is_empty() {
        return Err(Error::EmptySet);
    }
    check_subset(a, b)?;
    let alpha = Ratio::new(a.len() as u64, b.len() as u64);
    let d1 = translate_densities(a, b1)?;
    let d2 = translate_densities(a, b2)?;
    let mut best: Option<(bool, usize, Ratio)> = None;
    for (inner, d) in [(false, &d1), (true, &d2)] {
        for (x, &v) in d.iter().enumerate() {
            if best.map_or(true, |(_, _, bv)| v > bv) {
                best = Some((inner, x, v));
            }
        }
    }
    let (inner, x, density) = best.expect("group is nonempty");
    if density >= Ratio::new(5, 4) * alpha {
        return Ok(TwoScale::Case2 { inner, x, density });
    }
    case1_witness(b, alpha, &d1, &d2).ok_or_else(|| {
        Error::NotFound(
            "neither two-scale case holds; parameters outside the lemma's regime".into(),
        )
    })
}

/// `|B| >= (C d / alpha)^{3d}`, compared in logarithms.
fn size_hypothesis(b: &BohrSet, alpha: f64, c: f64) -> bool {
    let d = b.rank() as f64;
    libm::log(b.len() as f64) >= 3.0 * d * libm::log(c * d / alpha)
}

/// One Bohr-set increment for `A subset B` over `Z/N`, `N` prime.
///
/// `B' = B_{alpha/Cd}` and `B'' = B'_{1/Cd}`, each moved to a regular
/// rescaling, feed [`two_scale_select`]. Case 2 is used directly when it
/// meets `target * alpha`. Otherwise, with `x` from Case 1,
/// `A' = (A - x) cap B'` and `A'' = (A - x) cap B''`, and the branch on
/// `|A' + A''|` against `|A'| / 2 alpha'` (`alpha' = 7/10 alpha`) selects
/// the spectral sources: `A''`, `A'`, `-A' - A''` with base `B''_{1/Cd}`
/// when small, `-3.A''`, `A'`, `B'_{1+3/Cd} \ (A' + A'')` with base
/// `3.B''_{1/Cd}` when large. Candidates `Bohr(base cup Lambda, rho_S 2^{-j})`
/// are scanned over every translate.
pub fn increment_step_bohr(
    a: &GroupSet,
    b: &BohrSet,
    target: Ratio,
    params: &BohrParams,
) -> Result<IncrementStep> {
    let g = a.group();
    if !g.is_cyclic() || !is_prime(g.order() as u64) || g.order() == 3 {
        return Err(Error::Precondition(
            "the Bohr engine needs Z/N with N prime and N != 3".into(),
        ));
    }
    if b.group() != g {
        return Err(Error::GroupMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if b.rank() == 0 {
        return Err(Error::Precondition("Bohr set must have rank >= 1".into()));
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(Error::InvalidParameter("C must be positive".into()));
    }
    check_subset(a, b.members())?;
    let alpha = Ratio::new(a.len() as u64, b.len() as u64);
    let need = target * alpha;
    if need > Ratio::from_integer(1) {
        return Err(Error::NotFound(format!(
            "required density {need} exceeds 1"
        )));
    }
    let alpha_f = a.len() as f64 / b.len() as f64;
    let d = b.rank() as f64;
    let nu = 1.0 / (params.c * d);
    let hypothesis = Some(size_hypothesis(b, alpha_f, params.c));

    let (_, b1) = b.scale(alpha_f / (params.c * d))?.regularize()?;
    let (_, b2) = b1.scale(nu)?.regularize()?;
    let mut selection = two_scale_select(a, b.members(), b1.members(), b2.members())?;
    if let TwoScale::Case2 { inner, x, density } = selection {
        let chosen = if inner { &b2 } else { &b1 };
        if density >= need {
            let name = if inner {
                "two-scale case 2 (B'')"
            } else {
                "two-scale case 2 (B')"
            };
            return finish_step(
                a,
                Structure::Bohr(chosen.clone()),
                chosen.members().clone(),
                x,
                alpha,
                need,
                name.into(),
                hypothesis,
            );
        }
        let d1 = translate_densities(a, b1.members())?;
        let d2 = translate_densities(a, b2.members())?;
        selection = case1_witness(b.members(), alpha, &d1, &d2).ok_or_else(|| {
            Error::NotFound(format!(
                "case 2 density {density} below target {need} and no case 1 witness"
            ))
        })?;
    }
    let TwoScale::Case1 { x, .. } = selection else {
        unreachable!("case 2 handled above")
    };

    let shifted = a.translate(g.neg(x));
    let a1 = shifted.intersection(b1.members())?;
    let a2 = shifted.intersection(b2.members())?;
    let alpha1 = Ratio::new(7, 10) * alpha;
    let a1a2 = a1.sumset(&a2)?;
    let small = Ratio::from_integer(a1a2.len() as u64) * Ratio::from_integer(2) * alpha1
        <= Ratio::from_integer(a1.len() as u64);

    let s_base = b2.scale(nu)?;
    let (branch, base, sources): (&str, BohrSet, Vec<(&str, GroupSet)>) = if small {
        (
            "small sumset",
            s_base,
            vec![
                ("A''", a2.clone()),
                ("A'", a1.clone()),
                ("-A'-A''", a1a2.negate()),
            ],
        )
    } else {
        let l = b1.scale(1.0 + 3.0 * nu)?.members().difference(&a1a2)?;
        (
            "large sumset",
            s_base.dilate(3)?,
            vec![("-3.A''", a2.dilate(-3)), ("A'", a1.clone()), ("L", l)],
        )
    };

    let mut spectra: Vec<(String, Vec<usize>)> = Vec::new();
    for (name, w) in &sources {
        if w.is_empty() {
            continue;
        }
        for delta in [0.5, 0.25] {
            spectra.push((
                format!("spec_{delta}({name})"),
                ranked_spectrum(w, delta, params.spectrum_cap, base.frequencies())?,
            ));
        }
    }

    let mut examined = 0usize;
    let mut best_seen = Ratio::from_integer(0);
    for j in 0..params.radius_steps {
        let radius = base.radius() / (1u64 << j) as f64;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut candidates: Vec<(String, Vec<usize>)> = vec![(String::from("base"), Vec::new())];
        for (name, spec) in &spectra {
            for size in 1..=params.max_extra_rank {
                for_each_combination(spec.len(), size, |pick| {
                    candidates.push((name.clone(), pick.iter().map(|&i| spec[i]).collect()));
                    true
                });
            }
        }
        for (name, lambda) in candidates {
            let mut key = lambda.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            examined += 1;
            if examined > params.candidate_budget {
                return Err(Error::NotFound(format!(
                    "{branch}: candidate budget exhausted, best density {best_seen} vs required {need}"
                )));
            }
            let t = crate::bohr::annihilator_bohr(g, base.frequencies(), &lambda, radius)?;
            let dens = translate_densities(a, t.members())?;
            let Some((xt, &best)) = dens
                .iter()
                .enumerate()
                .max_by(|p, q| p.1.cmp(q.1).then(q.0.cmp(&p.0)))
            else {
                continue;
            };
            best_seen = best_seen.max(best);
            if best >= need {
                let xt = dens.iter().position(|&v| v >= need).unwrap_or(xt);
                let source = format!("{branch}: {name}, radius {}", ratio_from_f64_floor(radius));
                let members = t.members().clone();
                return finish_step(
                    a,
                    Structure::Bohr(t),
                    members,
                    xt,
                    alpha,
                    need,
                    source,
                    hypothesis,
                );
            }
        }
    }
    Err(Error::NotFound(format!(
        "{branch}: {examined} Bohr sets examined, best density {best_seen} vs required {need}"
    )))
}

#[derive(Clone, Debug)]
pub enum Engine {
    FiniteField(FfParams),
    Bohr(BohrParams),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    DensityCap,
    StructureExhausted,
    StepFailed,
    BudgetExhausted,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::DensityCap => "DENSITY_CAP",
            Termination::StructureExhausted => "STRUCTURE_EXHAUSTED",
            Termination::StepFailed => "STEP_FAILED",
            Termination::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub step: IncrementStep,
    /// Size of the ambient structure the step started from.
    pub ambient_size: usize,
    /// `A_{j+1}`: the pulled-back set for the subspace engine, `(A_j - x) cap B'` for Bohr sets.
    /// `None` when the subspace collapsed to a point.
    pub next_set: Option<GroupSet>,
}

#[derive(Clone, Debug)]
pub struct IncrementTrace {
    pub initial_density: Ratio,
    pub target: Ratio,
    pub steps: Vec<TraceStep>,
    pub termination: Termination,
    pub failure: Option<String>,
}

/// Repeats the engine's step on `(A_j - x_j) cap V_j` until the density
/// exceeds `1/target`, the structure is exhausted, a step fails, or
/// `budget` steps have been taken. Each `A_j` is checked solution-free.
pub fn iterate(
    a: &GroupSet,
    engine: &Engine,
    target: Ratio,
    budget: usize,
) -> Result<IncrementTrace> {
    if target <= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "target {target} must exceed 1"
        )));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let eq = Equation::x_plus_y_plus_z_3w();
    if has_nontrivial(&eq, a)? {
        return Err(Error::Precondition(
            "input set has nontrivial solutions to x+y+z=3w".into(),
        ));
    }
    let mut set = a.clone();
    let mut bohr = match engine {
        Engine::Bohr(_) => Some(BohrSet::new(a.group(), &[1], 2.0)?),
        Engine::FiniteField(_) => {
            vector_space(a.group())?;
            None
        }
    };
    let ambient = |set: &GroupSet, bohr: &Option<BohrSet>| {
        bohr.as_ref().map_or(set.group().order(), |b| b.len())
    };
    let initial_density = Ratio::new(a.len() as u64, ambient(a, &bohr) as u64);
    let mut trace = IncrementTrace {
        initial_density,
        target,
        steps: Vec::new(),
        termination: Termination::DensityCap,
        failure: None,
    };
    loop {
        let size = ambient(&set, &bohr);
        let density = Ratio::new(set.len() as u64, size as u64);
        if target * density > Ratio::from_integer(1) {
            trace.termination = Termination::DensityCap;
            break;
        }
        if size <= 1 {
            trace.termination = Termination::StructureExhausted;
            break;
        }
        if trace.steps.len() >= budget {
            trace.termination = Termination::BudgetExhausted;
            break;
        }
        let result = match (engine, &bohr) {
            (Engine::FiniteField(p), _) => increment_step_ff(&set, target, p),
            (Engine::Bohr(p), Some(b)) => increment_step_bohr(&set, b, target, p),
            (Engine::Bohr(_), None) => unreachable!("Bohr engine carries a Bohr set"),
        };
        let step = match result {
            Ok(s) => s,
            Err(Error::NotFound(msg)) => {
                trace.termination = Termination::StepFailed;
                trace.failure = Some(msg);
                break;
            }
            Err(e) => return Err(e),
        };
        if step.new_density < target * density || step.members.len() >= size {
            return Err(Error::VerificationFailed("trace invariant violated".into()));
        }
        let g = set.group().clone();
        let restricted = set
            .translate(g.neg(step.translate))
            .intersection(&step.members)?;
        let next = match &step.structure {
            Structure::Bohr(t) => {
                bohr = Some(t.clone());
                Some(restricted)
            }
            Structure::Subspace { annihilator } => pull_back(&g, annihilator, &restricted)?,
        };
        if let Some(next_set) = &next {
            if has_nontrivial(&eq, next_set)? {
                return Err(Error::VerificationFailed(format!(
                    "A_{} acquired a nontrivial solution",
                    trace.steps.len() + 2
                )));
            }
        }
        let collapsed = next.is_none();
        trace.steps.push(TraceStep {
            step,
            ambient_size: size,
            next_set: next.clone(),
        });
        match next {
            Some(s) => set = s,
            None => {
                // V = {0}: density 1 on a point.
                trace.termination = if target > Ratio::from_integer(1) {
                    Termination::DensityCap
                } else {
                    Termination::StructureExhausted
                };
                debug_assert!(collapsed);
                break;
            }
        }
    }
    Ok(trace)
}

/// `{ y in F_q^m : sum y_i b_i in R }` for a kernel basis `b` of the
/// annihilator, with `R subset V`.
fn pull_back(
    g: &GroupSpec,
    annihilator: &[Vec<u64>],
    restricted: &GroupSet,
) -> Result<Option<GroupSet>> {
    let (q, n) = vector_space(g)?;
    let pivots: Vec<usize> = annihilator
        .iter()
        .map(|r| r.iter().position(|&v| v != 0).expect("rows are nonzero"))
        .collect();
    let basis = kernel_basis(annihilator, &pivots, n, q);
    let m = basis.len();
    if m == 0 {
        return Ok(None);
    }
    let sub = GroupSpec::vector_space(q as usize, m)?;
    let out = GroupSet::from_predicate(&sub, |y| {
        let yc = sub.coords(y);
        let mut point = vec![0u64; n];
        for (coef, b) in yc.iter().zip(&basis) {
            for (p, &bv) in point.iter_mut().zip(b) {
                *p = (*p + *coef as u64 * bv) % q;
            }
        }
        let coords: Vec<usize> = point.iter().map(|&v| v as usize).collect();
        restricted.contains(g.index_of(&coords).expect("coordinates reduced mod q"))
    });
    if out.len() != restricted.len() {
        return Err(Error::VerificationFailed(
            "pull-back changed the set size".into(),
        ));
    }
    Ok(Some(out))
}
