//! Argument parsing and dispatch for the `addcomb` binary.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 verification failure,
//! 4 budget exhausted or incomplete search (the report is still written).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use addcomb_core::bohr::{ap_in_bohr, ap_length_bound, BohrSet};
use addcomb_core::construct::{
    behrend_set, product_construction, search_extremal_exact, search_extremal_greedy, SearchSpace,
    Verification,
};
use addcomb_core::equation::{brute_force_count, solution_count, Equation};
use addcomb_core::increment::{
    increment_step_bohr, increment_step_ff, iterate, BohrParams, Engine, FfParams, IncrementStep,
    Structure, Termination,
};
use addcomb_core::periodicity::{collect_periods, LinftyScan, LpScan};
use addcomb_core::spectral::{
    convolve_with, dft, large_spectrum, normalized_transform, ConvolutionMethod,
};
use addcomb_core::structure::{largest_affine_subspace, longest_ap, three_fold_sumset, xv_witness};
use addcomb_core::{Error, GroupSet, GroupSpec, Ratio};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::format::{self, FunctionData};
use crate::report::{self, element, elements, float, ratio, Format};

#[derive(Debug, Parser)]
#[command(
    name = "addcomb",
    version,
    about = "Solution-free sets, Bohr sets, almost periods and density increments"
)]
pub struct Cli {
    /// Seed for every randomized routine.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; falls back to ADDCOMB_THREADS, then to the number of cores.
    #[arg(long, global = true, env = "ADDCOMB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count solutions of a translation-invariant equation inside a set.
    Count {
        #[arg(long, default_value = "1,1,1,-3", allow_hyphen_values = true)]
        eq: String,
        #[arg(long)]
        set: PathBuf,
        /// Use direct enumeration instead of convolution.
        #[arg(long)]
        brute_force: bool,
    },
    /// Build a solution-free set for x+y+z=3w.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Largest solution-free subset of [N] or of a whole group.
    Search {
        #[arg(long, default_value = "1,1,1,-3", allow_hyphen_values = true)]
        eq: String,
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long, value_enum, default_value_t = SearchMode::Exact)]
        mode: SearchMode,
        /// Node budget of the exact search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Restarts of the greedy search.
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        /// Write the witness set file here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Build a Bohr set and test its regularity.
    Bohr {
        #[command(flatten)]
        ambient: Ambient,
        /// Frequency as comma-separated coordinates; repeat for each frequency.
        #[arg(long = "freq", required = true)]
        frequencies: Vec<String>,
        #[arg(long)]
        radius: f64,
        /// Also report a regular rescaling in [1/2, 1].
        #[arg(long)]
        regularize: bool,
        /// Also report a progression inside the set (Z/N, N prime).
        #[arg(long)]
        ap: bool,
        /// Write the members as a set file.
        #[arg(long)]
        members_out: Option<PathBuf>,
    },
    /// Almost-period sets of convolutions by exhaustive scan.
    Periods {
        #[arg(long, value_enum)]
        mode: PeriodMode,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "L")]
        l: PathBuf,
        /// Required for `linf3`.
        #[arg(long = "M")]
        m: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        eps: f64,
        /// `all` or a set file.
        #[arg(long = "S", default_value = "all")]
        s: String,
    },
    /// One density-increment step.
    Increment {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        set: PathBuf,
    },
    /// Iterate density increments until a termination condition.
    Iterate {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        set: PathBuf,
        /// Expected group order; checked against the set file.
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, default_value_t = 20)]
        budget: usize,
    },
    /// Structures inside A+B+C.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// Large spectrum of a set, or the transform of a function.
    Spectrum {
        #[arg(
            long,
            conflicts_with = "function",
            required_unless_present = "function"
        )]
        set: Option<PathBuf>,
        #[arg(long)]
        function: Option<PathBuf>,
        /// Threshold for sets: characters with |mu_X^(gamma)| >= delta.
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
    },
    /// Exact convolution of two integer functions.
    Convolve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Write the result as a function file.
        #[arg(long)]
        function_out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Behrend-type sphere construction embedded in Z/N'.
    Behrend {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// k-fold product of a solution-free set.
    Product {
        #[arg(long, default_value = "1,1,1,-3", allow_hyphen_values = true)]
        eq: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum StructureCmd {
    /// Longest arithmetic progression in A+B+C over Z/N.
    Ap {
        #[command(flatten)]
        sets: SumsetArgs,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Largest affine subspace in A+B+C over F_q^n.
    Subspace {
        #[command(flatten)]
        sets: SumsetArgs,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Translates X with X+V almost inside A+B+C.
    Xv {
        #[command(flatten)]
        sets: SumsetArgs,
        #[arg(long = "V")]
        v: PathBuf,
        #[arg(long)]
        eta: f64,
    },
}

/// `B` and `C` default to `A`.
#[derive(Debug, Args)]
pub struct SumsetArgs {
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "B")]
    b: Option<PathBuf>,
    #[arg(long = "C")]
    c: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Ambient {
    /// Interval [N] (search) or Z/N (bohr).
    #[arg(long = "N", conflicts_with = "group")]
    n: Option<u64>,
    /// Cyclic factors, e.g. 5,5,5.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, value_enum)]
    engine: EngineKind,
    /// Required density factor, as p/q or a decimal.
    #[arg(long, default_value = "5/4")]
    target: String,
    #[arg(long, default_value_t = 4)]
    max_codim: usize,
    /// Constant C in delta = alpha / (C d).
    #[arg(long, default_value_t = 100.0)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    max_extra_rank: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SearchMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PeriodMode {
    Lp,
    Linf3,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EngineKind {
    Ff,
    Bohr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Auto,
    Transform,
    Direct,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailed(_) => CliError::Verification(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<format::FormatError> for CliError {
    fn from(e: format::FormatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// A report plus whether a budget ran out.
pub struct Outcome {
    pub report: Value,
    pub incomplete: bool,
}

impl From<Value> for Outcome {
    fn from(report: Value) -> Self {
        Outcome {
            report,
            incomplete: false,
        }
    }
}

type CliResult = Result<Outcome, CliError>;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 2;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    match result {
        Ok(outcome) => {
            let text = report::emit(&outcome.report, cli.format);
            let written = match &cli.out {
                Some(path) => format::write_file(path, &text).map_err(|e| e.to_string()),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if outcome.incomplete {
                4
            } else {
                0
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_equation(text: &str) -> Result<Equation, CliError> {
    let coefficients = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| usage(format!("bad coefficient {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Equation::new(coefficients)?)
}

/// `p/q`, an integer, or a terminating decimal, converted exactly.
pub fn parse_ratio(text: &str) -> Result<Ratio, CliError> {
    let bad = || usage(format!("bad rational {text:?}"));
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let scale = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_v: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let numer = int
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_v))
        .ok_or_else(bad)?;
    Ok(Ratio::new(numer, scale))
}

fn read_set(path: &Path) -> Result<GroupSet, CliError> {
    Ok(format::read_set(path)?)
}

fn write_witness(path: &Option<PathBuf>, set: &GroupSet) -> Result<(), CliError> {
    if let Some(p) = path {
        format::write_file(p, &format::write_set(set))?;
    }
    Ok(())
}

fn ambient_group(a: &Ambient) -> Result<GroupSpec, CliError> {
    match (&a.n, &a.group) {
        (Some(n), None) => Ok(GroupSpec::cyclic(*n as usize)?),
        (None, Some(g)) => format::parse_group(g).map_err(usage),
        _ => Err(usage("give exactly one of --N or --group")),
    }
}

fn same_group(sets: &[&GroupSet]) -> Result<(), CliError> {
    if sets.iter().any(|s| s.group() != sets[0].group()) {
        return Err(usage("input sets live in different groups"));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Count {
            eq,
            set,
            brute_force,
        } => cmd_count(eq, set, *brute_force),
        Command::Construct(c) => cmd_construct(c, cli.seed),
        Command::Search {
            eq,
            ambient,
            mode,
            budget,
            restarts,
            witness,
        } => cmd_search(eq, ambient, *mode, *budget, *restarts, witness, cli.seed),
        Command::Bohr {
            ambient,
            frequencies,
            radius,
            regularize,
            ap,
            members_out,
        } => cmd_bohr(ambient, frequencies, *radius, *regularize, *ap, members_out),
        Command::Periods {
            mode,
            a,
            l,
            m,
            p,
            eps,
            s,
        } => cmd_periods(*mode, a, l, m.as_deref(), *p, *eps, s),
        Command::Increment { engine, set } => cmd_increment(engine, set),
        Command::Iterate {
            engine,
            set,
            n,
            budget,
        } => cmd_iterate(engine, set, *n, *budget),
        Command::Structure(s) => cmd_structure(s),
        Command::Spectrum {
            set,
            function,
            delta,
        } => cmd_spectrum(set.as_deref(), function.as_deref(), *delta),
        Command::Convolve {
            f,
            g,
            method,
            function_out,
        } => cmd_convolve(f, g, *method, function_out),
    }
}

fn cmd_count(eq: &str, set: &Path, brute: bool) -> CliResult {
    let eq = parse_equation(eq)?;
    let a = read_set(set)?;
    let c = if brute {
        brute_force_count(&eq, &a)?
    } else {
        solution_count(&eq, &a)?
    };
    Ok(json!({
        "equation": eq.coefficients(),
        "group": report::group(a.group()),
        "size": a.len(),
        "total": c.total,
        "trivial": c.trivial,
        "nontrivial": c.nontrivial(),
    })
    .into())
}

fn cmd_construct(c: &ConstructCmd, seed: u64) -> CliResult {
    match c {
        ConstructCmd::Behrend { d, n, witness } => {
            let b = behrend_set(*d, *n)?;
            write_witness(witness, &b.set)?;
            let interval = b.base.pow(b.dimension);
            Ok(json!({
                "d": b.digits,
                "n": b.dimension,
                "base": b.base,
                "level": b.level,
                "interval": interval,
                "modulus": b.embedding.modulus,
                "size": b.integers.len(),
                "density": ratio(Ratio::new(b.integers.len() as u64, interval)),
                "verified": true,
                "elements": b.integers,
            })
            .into())
        }
        ConstructCmd::Product {
            eq,
            set,
            k,
            witness,
        } => {
            let eq = parse_equation(eq)?;
            let s = read_set(set)?;
            let p = product_construction(&eq, &s, *k, seed)?;
            write_witness(witness, &p.set)?;
            let (method, samples) = match p.verification {
                Verification::Exact => ("exact", Value::Null),
                Verification::Sampled { samples } => ("sampled", json!(samples)),
            };
            Ok(json!({
                "k": k,
                "group": report::group(p.set.group()),
                "size": p.set.len(),
                "density": ratio(p.set.density()),
                "verified": true,
                "verification": method,
                "samples": samples,
            })
            .into())
        }
    }
}

fn cmd_search(
    eq: &str,
    ambient: &Ambient,
    mode: SearchMode,
    budget: u64,
    restarts: u32,
    witness: &Option<PathBuf>,
    seed: u64,
) -> CliResult {
    let eq = parse_equation(eq)?;
    let space = match (&ambient.n, &ambient.group) {
        (Some(n), None) => SearchSpace::interval(&eq, *n)?,
        (None, Some(_)) => SearchSpace::whole_group(&ambient_group(ambient)?),
        _ => return Err(usage("give exactly one of --N or --group")),
    };
    let r = match mode {
        SearchMode::Exact => search_extremal_exact(&eq, &space, budget)?,
        SearchMode::Greedy => search_extremal_greedy(&eq, &space, seed, restarts)?,
    };
    write_witness(witness, &r.witness)?;
    let members: Value = match &space.embedding {
        Some(e) => {
            let mut ints: Vec<u64> = r.witness.iter().filter_map(|x| e.lift(x)).collect();
            ints.sort_unstable();
            json!(ints)
        }
        None => elements(&r.witness),
    };
    let ambient_size = space.candidates.len() as u64;
    // Greedy results are lower bounds by construction; only an exhausted exact budget is incomplete.
    let incomplete = matches!(mode, SearchMode::Exact) && !r.complete;
    Ok(Outcome {
        report: json!({
            "equation": eq.coefficients(),
            "ambient": match ambient.n { Some(n) => json!(format!("[{n}]")), None => report::group(&space.group) },
            "group": report::group(&space.group),
            "mode": match mode { SearchMode::Exact => "exact", SearchMode::Greedy => "greedy" },
            "size": r.size,
            "density": ratio(Ratio::new(r.size as u64, ambient_size)),
            "complete": r.complete,
            "verified": true,
            "nodes": r.nodes,
            "witness": members,
        }),
        incomplete,
    })
}

fn cmd_bohr(
    ambient: &Ambient,
    frequencies: &[String],
    radius: f64,
    regularize: bool,
    ap: bool,
    members_out: &Option<PathBuf>,
) -> CliResult {
    let g = ambient_group(ambient)?;
    let freqs = frequencies
        .iter()
        .map(|f| format::parse_element(&g, f).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let b = BohrSet::new(&g, &freqs, radius)?;
    write_witness(members_out, b.members())?;
    let mut out = json!({
        "group": report::group(&g),
        "frequencies": b.frequencies().iter().map(|&f| element(&g, f)).collect::<Vec<_>>(),
        "radius": float(b.radius()),
        "rank": b.rank(),
        "size": b.len(),
        "regular": b.is_regular()?,
    });
    let obj = out.as_object_mut().expect("object literal");
    if regularize {
        let (delta, r) = b.regularize()?;
        obj.insert("regular_scale".into(), float(delta));
        obj.insert("regularized_size".into(), json!(r.len()));
    }
    if ap {
        let p = ap_in_bohr(&b)?;
        obj.insert(
            "ap".into(),
            json!({"start": p.start, "step": p.step, "length": p.length, "bound": ap_length_bound(&b)}),
        );
    }
    Ok(out.into())
}

fn cmd_periods(
    mode: PeriodMode,
    a: &Path,
    l: &Path,
    m: Option<&Path>,
    p: f64,
    eps: f64,
    s: &str,
) -> CliResult {
    let a = read_set(a)?;
    let l = read_set(l)?;
    let s = if s == "all" {
        GroupSet::full(a.group())
    } else {
        read_set(Path::new(s))?
    };
    same_group(&[&a, &l, &s])?;
    let ts = s.to_vec();
    let (periods, p_value) = match mode {
        PeriodMode::Lp => {
            let scan = LpScan::new(&a, &l, p, eps)?;
            let norms: Vec<(usize, f64)> = ts.par_iter().map(|&t| (t, scan.norm_at(t))).collect();
            (collect_periods(&s, &norms, scan.threshold), float(p))
        }
        PeriodMode::Linf3 => {
            let m = read_set(m.ok_or_else(|| usage("--M is required for linf3"))?)?;
            same_group(&[&a, &m])?;
            let scan = LinftyScan::new(&a, &m, &l, eps)?;
            let norms: Vec<(usize, f64)> = ts.par_iter().map(|&t| (t, scan.norm_at(t))).collect();
            (
                collect_periods(&s, &norms, scan.threshold),
                Value::from("inf"),
            )
        }
    };
    let k = Ratio::new(a.sumset(&s)?.len() as u64, a.len() as u64);
    Ok(json!({
        "mode": match mode { PeriodMode::Lp => "lp", PeriodMode::Linf3 => "linf3" },
        "p": p_value,
        "eps": float(eps),
        "K": ratio(k),
        "T_size": periods.periods.len(),
        "S_size": periods.s_size,
        "density": ratio(periods.density),
        "threshold": float(periods.threshold),
        "max_norm_over_T": float(periods.max_norm_over_t),
        "T": elements(&periods.periods),
    })
    .into())
}

fn engine_of(args: &EngineArgs) -> Engine {
    match args.engine {
        EngineKind::Ff => Engine::FiniteField(FfParams {
            max_codim: args.max_codim,
            ..FfParams::default()
        }),
        EngineKind::Bohr => Engine::Bohr(BohrParams {
            c: args.c,
            max_extra_rank: args.max_extra_rank,
            ..BohrParams::default()
        }),
    }
}

fn step_json(g: &GroupSpec, s: &IncrementStep) -> Value {
    let (kind, frequencies) = match &s.structure {
        Structure::Subspace { annihilator } => (
            "subspace",
            annihilator.iter().map(|r| json!(r)).collect::<Vec<_>>(),
        ),
        Structure::Bohr(b) => (
            "bohr",
            b.frequencies().iter().map(|&f| element(g, f)).collect(),
        ),
    };
    json!({
        "structure": kind,
        "characters": frequencies,
        "rank": s.structure.rank(),
        "radius": s.structure.radius().map_or(Value::Null, float),
        "size": s.members.len(),
        "translate": element(g, s.translate),
        "old_density": ratio(s.old_density),
        "new_density": ratio(s.new_density),
        "source": s.source,
        "size_hypothesis": s.size_hypothesis,
    })
}

fn cmd_increment(args: &EngineArgs, set: &Path) -> CliResult {
    let a = read_set(set)?;
    let target = parse_ratio(&args.target)?;
    let g = a.group().clone();
    let result = match engine_of(args) {
        Engine::FiniteField(p) => increment_step_ff(&a, target, &p),
        Engine::Bohr(p) => {
            let b = BohrSet::new(&g, &[1], 2.0)?;
            increment_step_bohr(&a, &b, target, &p)
        }
    };
    let engine = match args.engine {
        EngineKind::Ff => "ff",
        EngineKind::Bohr => "bohr",
    };
    match result {
        Ok(step) => Ok(json!({
            "engine": engine,
            "target": ratio(target),
            "found": true,
            "step": step_json(&g, &step),
        })
        .into()),
        Err(Error::NotFound(reason)) => Ok(json!({
            "engine": engine,
            "target": ratio(target),
            "found": false,
            "reason": reason,
        })
        .into()),
        Err(e) => Err(e.into()),
    }
}

fn cmd_iterate(args: &EngineArgs, set: &Path, n: Option<usize>, budget: usize) -> CliResult {
    let a = read_set(set)?;
    if let Some(n) = n {
        if !a.group().is_cyclic() || a.group().order() != n {
            return Err(usage(format!("set file group does not match --N {n}")));
        }
    }
    let target = parse_ratio(&args.target)?;
    let trace = iterate(&a, &engine_of(args), target, budget)?;
    let mut group = a.group().clone();
    let mut steps = Vec::new();
    for (j, t) in trace.steps.iter().enumerate() {
        let mut s = step_json(&group, &t.step);
        let obj = s.as_object_mut().expect("object literal");
        obj.insert("index".into(), json!(j + 1));
        obj.insert("ambient_size".into(), json!(t.ambient_size));
        obj.insert(
            "next_size".into(),
            t.next_set.as_ref().map_or(Value::Null, |n| json!(n.len())),
        );
        steps.push(s);
        if let Some(next) = &t.next_set {
            group = next.group().clone();
        }
    }
    Ok(Outcome {
        report: json!({
            "engine": match args.engine { EngineKind::Ff => "ff", EngineKind::Bohr => "bohr" },
            "target": ratio(target),
            "initial_density": ratio(trace.initial_density),
            "steps": steps,
            "termination": trace.termination.as_str(),
            "failure": trace.failure,
        }),
        incomplete: trace.termination == Termination::BudgetExhausted,
    })
}

fn sumset_inputs(s: &SumsetArgs) -> Result<(GroupSet, GroupSet, GroupSet), CliError> {
    let a = read_set(&s.a)?;
    let b = s.b.as_deref().map_or_else(|| Ok(a.clone()), read_set)?;
    let c = s.c.as_deref().map_or_else(|| Ok(a.clone()), read_set)?;
    same_group(&[&a, &b, &c])?;
    Ok((a, b, c))
}

fn cmd_structure(cmd: &StructureCmd) -> CliResult {
    match cmd {
        StructureCmd::Ap { sets, n } => {
            let (a, b, c) = sumset_inputs(sets)?;
            if let Some(n) = n {
                if !a.group().is_cyclic() || a.group().order() != *n {
                    return Err(usage(format!("set file group does not match --N {n}")));
                }
            }
            let s = three_fold_sumset(&a, &b, &c)?;
            let p = longest_ap(&s)?;
            Ok(json!({
                "kind": "ap",
                "N": a.group().order(),
                "sumset_size": s.len(),
                "start": p.start,
                "step": p.step,
                "length": p.length,
                "verified": p.is_contained_in(&s),
            })
            .into())
        }
        StructureCmd::Subspace { sets, budget } => {
            let (a, b, c) = sumset_inputs(sets)?;
            let s = three_fold_sumset(&a, &b, &c)?;
            let r = largest_affine_subspace(&s, *budget)?;
            let g = s.group();
            Ok(Outcome {
                report: json!({
                    "kind": "affine_subspace",
                    "group": report::group(g),
                    "sumset_size": s.len(),
                    "dimension": r.witness.dimension(),
                    "shift": element(g, r.witness.shift),
                    "basis": r.witness.basis.iter().map(|&u| element(g, u)).collect::<Vec<_>>(),
                    "complete": r.complete,
                    "nodes": r.nodes,
                }),
                incomplete: !r.complete,
            })
        }
        StructureCmd::Xv { sets, v, eta } => {
            let (a, b, c) = sumset_inputs(sets)?;
            let v = read_set(v)?;
            same_group(&[&a, &v])?;
            let w = xv_witness(&a, &b, &c, &v, *eta)?;
            let g = a.group();
            Ok(json!({
                "kind": "xv",
                "group": report::group(g),
                "eta": float(*eta),
                "shift": element(g, w.shift),
                "V_size": v.len(),
                "B_size": w.b_size,
                "X_size": w.x.len(),
                "sumset_size": w.sumset.len(),
                "large": w.large,
                "certified": w.certified,
                "X": elements(&w.x),
            })
            .into())
        }
    }
}

fn cmd_spectrum(set: Option<&Path>, function: Option<&Path>, delta: f64) -> CliResult {
    if let Some(path) = set {
        let x = read_set(path)?;
        let g = x.group().clone();
        let spec = normalized_transform(&x)?;
        let large = large_spectrum(&spec, delta)?;
        return Ok(json!({
            "group": report::group(&g),
            "size": x.len(),
            "delta": float(delta),
            "spectrum_size": large.len(),
            "spectrum": large.iter().map(|&(gamma, m)| json!({"character": element(&g, gamma), "magnitude": float(m)})).collect::<Vec<_>>(),
        })
        .into());
    }
    let path = function.ok_or_else(|| usage("give --set or --function"))?;
    let f = format::read_function(path)?;
    let g = f.group().clone();
    let s = match &f {
        FunctionData::Int(f) => dft(f),
        FunctionData::Complex(f) => dft(f),
    };
    let coeffs: Vec<Value> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(gamma, c)| json!({"character": element(&g, gamma), "re": float(c.re), "im": float(c.im)}))
        .collect();
    Ok(json!({ "group": report::group(&g), "coefficients": coeffs }).into())
}

fn cmd_convolve(f: &Path, g: &Path, method: Method, function_out: &Option<PathBuf>) -> CliResult {
    let (FunctionData::Int(f), FunctionData::Int(g)) =
        (format::read_function(f)?, format::read_function(g)?)
    else {
        return Err(usage("convolve needs integer-valued functions"));
    };
    let method = match method {
        Method::Auto => ConvolutionMethod::Auto,
        Method::Transform => ConvolutionMethod::Transform,
        Method::Direct => ConvolutionMethod::Direct,
    };
    let h = convolve_with(&f, &g, method)?;
    if let Some(p) = function_out {
        format::write_file(p, &format::write_function(&FunctionData::Int(h.clone())))?;
    }
    Ok(json!({
        "group": report::group(h.group()),
        "sum": h.sum().to_string(),
        "l1": h.l1().to_string(),
        "support": h.support_len(),
        "values": h.values(),
    })
    .into())
}
