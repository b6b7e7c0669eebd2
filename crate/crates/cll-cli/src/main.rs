//! Command-line frontend: model/formula ingestion, the `check`, `isolate`,
//! `trace`, and `simulate` subcommands, and machine-readable output.

use std::cmp::Ordering;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use cll::algebra::{AlgPoly, AlgebraicNumber, RationalMatrix};
use cll::QPoly;
use cll::checker::{atom_intervals, model_check, CheckCtx, SymbolicInterval, Verdict};
use cll::ctmc::{
    trajectory_pef, validate, validate_distribution, Atom, Distribution, ProbInterval,
    SymbolizedCTMC, CTMC,
};
use cll::logic::{parse, PathFormula, StateFormula};
use cll::oracle::{grid_check, grid_trajectory};
use cll::pef::{isolate_roots, refine_isolation, PefError, RealPEF, SymbolicTime, PEF};
use cll::rational::{format_rational, parse_rational, rat_to_f64, Rat};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "cll", about = "Exact CTMC trajectory model checker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Args)]
struct CommonOpts {
    /// Model description file (TOML).
    #[arg(long)]
    model: PathBuf,
    /// Target refinement width for reported interval endpoints.
    #[arg(long, default_value = "1/1000000000")]
    epsilon: String,
    /// Initial half-width passed to existence tests.
    #[arg(long, default_value = "1/2")]
    delta: String,
    /// Refinement budget for symbolic comparisons.
    #[arg(long, default_value_t = 64)]
    budget: u32,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the model's trajectory satisfies a path formula.
    Check {
        #[command(flatten)]
        common: CommonOpts,
        /// Path formula text.
        #[arg(long)]
        formula: String,
    },
    /// Isolate real roots of a trajectory coordinate minus a level, or of a
    /// raw polynomial-exponential function.
    Isolate {
        #[command(flatten)]
        common: CommonOpts,
        /// State index (1-based) whose trajectory coordinate is used.
        #[arg(long, conflicts_with = "raw")]
        state: Option<usize>,
        /// Rational level subtracted from the coordinate.
        #[arg(long, default_value = "0")]
        level: String,
        /// Raw PEF: terms `c0[,c1,..]@re[,im]` joined by `;`
        /// (e.g. `1@0,1;1@0,-1` for e^{it}+e^{-it}).
        #[arg(long)]
        raw: Option<String>,
        /// Window lower endpoint.
        #[arg(long, default_value = "0")]
        from: String,
        /// Window upper endpoint.
        #[arg(long)]
        to: String,
    },
    /// Emit the symbolic word of the trajectory: segments between atom
    /// boundary crossings, with the atoms satisfied on each segment.
    Trace {
        #[command(flatten)]
        common: CommonOpts,
        /// Horizon (defaults to the formula's window sum when given).
        #[arg(long)]
        horizon: Option<String>,
        /// Optional formula whose window sum sets the horizon.
        #[arg(long)]
        formula: Option<String>,
        /// Grid step for plot-ready samples.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Cross-check a formula against the dense numeric grid oracle.
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        formula: String,
        /// Grid step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Boundary margin for the robustness flag.
        #[arg(long, default_value_t = 1e-3)]
        margin: f64,
    },
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct ModelFile {
    states: Vec<String>,
    #[serde(rename = "Q")]
    q: Vec<Vec<String>>,
    initial: Vec<String>,
    #[serde(default)]
    intervals: Vec<IntervalFile>,
}

#[derive(Deserialize)]
struct IntervalFile {
    low: String,
    high: String,
    #[serde(default = "default_true")]
    low_closed: bool,
    #[serde(default = "default_true")]
    high_closed: bool,
}

fn default_true() -> bool {
    true
}

fn load_model(path: &PathBuf) -> Result<(SymbolizedCTMC, Distribution), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: ModelFile = toml::from_str(&text).map_err(|e| format!("model file: {e}"))?;
    let n = file.states.len();
    if file.q.len() != n {
        return Err(format!("Q has {} rows for {} states", file.q.len(), n));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, row) in file.q.iter().enumerate() {
        if row.len() != n {
            return Err(format!("Q row {} has {} entries for {} states", i + 1, row.len(), n));
        }
        let mut out = Vec::with_capacity(n);
        for (j, s) in row.iter().enumerate() {
            out.push(
                parse_rational(s)
                    .map_err(|e| format!("Q entry ({}, {}): {e}", i + 1, j + 1))?,
            );
        }
        rows.push(out);
    }
    if file.initial.len() != n {
        return Err(format!(
            "initial distribution has {} entries for {} states",
            file.initial.len(),
            n
        ));
    }
    let probs = file
        .initial
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| format!("initial entry {}: {e}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut intervals = Vec::with_capacity(file.intervals.len());
    for (i, iv) in file.intervals.iter().enumerate() {
        intervals.push(ProbInterval {
            low: parse_rational(&iv.low).map_err(|e| format!("interval {}: {e}", i + 1))?,
            high: parse_rational(&iv.high).map_err(|e| format!("interval {}: {e}", i + 1))?,
            low_closed: iv.low_closed,
            high_closed: iv.high_closed,
        });
    }
    let model = SymbolizedCTMC {
        chain: CTMC { states: file.states, q: RationalMatrix::new(rows) },
        intervals,
    };
    let mu = Distribution { probs };
    let mut diags = validate(&model);
    diags.extend(validate_distribution(&mu, model.chain.q.size()));
    if !diags.is_empty() {
        return Err(diags.join("\n"));
    }
    Ok((model, mu))
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn collect_atoms(phi: &PathFormula, out: &mut Vec<Atom>) {
    fn state_atoms(phi: &StateFormula, out: &mut Vec<Atom>) {
        match phi {
            StateFormula::True => {}
            StateFormula::AtomRef(a) => out.push(a.clone()),
            StateFormula::Not(x) => state_atoms(x, out),
            StateFormula::And(x, y) => {
                state_atoms(x, out);
                state_atoms(y, out);
            }
        }
    }
    match phi {
        PathFormula::True => {}
        PathFormula::UntilChain(head, steps) => {
            state_atoms(head, out);
            for (_, s) in steps {
                state_atoms(s, out);
            }
        }
        PathFormula::Not(x) => collect_atoms(x, out),
        PathFormula::And(x, y) => {
            collect_atoms(x, out);
            collect_atoms(y, out);
        }
    }
}

fn warn_foreign_atoms(model: &SymbolizedCTMC, phi: &PathFormula) {
    let mut atoms = Vec::new();
    collect_atoms(phi, &mut atoms);
    for a in atoms {
        if a.state_index > model.chain.states.len() {
            continue; // reported as a hard error elsewhere
        }
        if !model.intervals.is_empty() && !model.intervals.contains(&a.interval) {
            eprintln!(
                "warning: atom P[{}] in {} uses an interval outside the model's set",
                a.state_index, a.interval
            );
        }
    }
}

fn validate_formula_states(model: &SymbolizedCTMC, phi: &PathFormula) -> Result<(), String> {
    let mut atoms = Vec::new();
    collect_atoms(phi, &mut atoms);
    for a in &atoms {
        if a.state_index == 0 || a.state_index > model.chain.states.len() {
            return Err(format!(
                "atom P[{}] refers to a state outside 1..={}",
                a.state_index,
                model.chain.states.len()
            ));
        }
    }
    Ok(())
}

fn refine_interval(iv: &SymbolicInterval, eps: &Rat) -> SymbolicInterval {
    let mut out = iv.clone();
    out.low.refine(eps);
    out.high.refine(eps);
    out
}

fn interval_json(iv: &SymbolicInterval) -> serde_json::Value {
    let (lo, _) = iv.low.bounds();
    let (_, hi) = iv.high.bounds();
    json!({
        "low": iv.low.to_string(),
        "high": iv.high.to_string(),
        "low_closed": iv.low_closed,
        "high_closed": iv.high_closed,
        "enclosure": [format_rational(&lo), format_rational(&hi)],
    })
}

fn formula_horizon(phi: &PathFormula) -> Rat {
    fn walk(phi: &PathFormula) -> Rat {
        match phi {
            PathFormula::True => Rat::from_integer(0.into()),
            PathFormula::UntilChain(_, steps) => {
                steps.iter().map(|(w, _)| w.high.clone()).sum()
            }
            PathFormula::Not(x) => walk(x),
            PathFormula::And(x, y) => walk(x).max(walk(y)),
        }
    }
    walk(phi)
}

fn pef_error_exit(err: &PefError) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        PefError::Undecided(_) => ExitCode::from(EXIT_UNDECIDED),
        _ => ExitCode::from(EXIT_INVALID),
    }
}

fn parse_raw_pef(spec: &str) -> Result<RealPEF, String> {
    let mut terms = Vec::new();
    for term in spec.split(';') {
        let (coeffs, expo) = term
            .split_once('@')
            .ok_or_else(|| format!("term {term:?} lacks '@'"))?;
        let coeff_list = coeffs
            .split(',')
            .map(|c| parse_rational(c).map(AlgebraicNumber::from_rational))
            .collect::<Result<Vec<_>, _>>()?;
        let mut parts = expo.split(',');
        let re = parse_rational(parts.next().unwrap_or("0"))?;
        let im = match parts.next() {
            Some(s) => parse_rational(s)?,
            None => Rat::from_integer(0.into()),
        };
        if parts.next().is_some() {
            return Err(format!("exponent in {term:?} has more than two parts"));
        }
        let mut lam = AlgebraicNumber::from_rational(re);
        if im != Rat::from_integer(0.into()) {
            let x2_plus_1 = QPoly::new(vec![
                Rat::from_integer(1.into()),
                Rat::from_integer(0.into()),
                Rat::from_integer(1.into()),
            ]);
            let i = AlgebraicNumber::roots_of(&x2_plus_1)
                .into_iter()
                .find(|r| r.im().sign() > 0)
                .expect("x^2 + 1 has a root with positive imaginary part");
            lam = lam.add(&i.scale(&im));
        }
        terms.push((AlgPoly::new(coeff_list), lam));
    }
    let pef = PEF::new(terms);
    RealPEF::new(pef).map_err(|e| format!("{e}"))
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn emit_verdict(verdict: &Verdict, eps: &Rat, format: Format) {
    match format {
        Format::Human => {
            println!("{}", if verdict.satisfied { "SAT" } else { "UNSAT" });
            if let Some(witness) = &verdict.witness {
                for (level, iv) in witness {
                    println!("witness level {level}: {}", refine_interval(iv, eps));
                }
            }
            for d in &verdict.diagnostics {
                println!("note: {d}");
            }
        }
        Format::Structured => {
            println!(
                "{}",
                json!({"verdict": if verdict.satisfied { "SAT" } else { "UNSAT" }})
            );
            if let Some(witness) = &verdict.witness {
                let entries: Vec<_> = witness
                    .iter()
                    .map(|(level, iv)| {
                        json!({"level": level, "interval": interval_json(&refine_interval(iv, eps))})
                    })
                    .collect();
                println!("{}", json!({"witness": entries}));
            }
            println!("{}", json!({"diagnostics": verdict.diagnostics}));
        }
    }
}

fn cmd_check(common: &CommonOpts, formula: &str) -> ExitCode {
    let (model, mu) = match load_model(&common.model) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let phi = match parse(formula) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if let Err(e) = validate_formula_states(&model, &phi) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INVALID);
    }
    warn_foreign_atoms(&model, &phi);
    let eps = match parse_rational(&common.epsilon) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: --epsilon: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match model_check(&model, &mu, &phi, common.budget) {
        Ok(verdict) => {
            emit_verdict(&verdict, &eps, common.format);
            ExitCode::from(EXIT_OK)
        }
        Err(e) => pef_error_exit(&e),
    }
}

fn cmd_isolate(
    common: &CommonOpts,
    state: Option<usize>,
    level: &str,
    raw: Option<&str>,
    from: &str,
    to: &str,
) -> ExitCode {
    let eps = match parse_rational(&common.epsilon) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: --epsilon: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let (lo, hi) = match (parse_rational(from), parse_rational(to)) {
        (Ok(a), Ok(b)) if a < b => (a, b),
        (Ok(_), Ok(_)) => {
            eprintln!("error: --from must be below --to");
            return ExitCode::from(EXIT_INVALID);
        }
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: window: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let f = if let Some(spec) = raw {
        match parse_raw_pef(spec) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: --raw: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        }
    } else {
        let k = match state {
            Some(k) => k,
            None => {
                eprintln!("error: either --state or --raw is required");
                return ExitCode::from(EXIT_INVALID);
            }
        };
        let (model, mu) = match load_model(&common.model) {
            Ok(x) => x,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        };
        if k == 0 || k > model.chain.states.len() {
            eprintln!("error: --state {k} outside 1..={}", model.chain.states.len());
            return ExitCode::from(EXIT_INVALID);
        }
        let c = match parse_rational(level) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: --level: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        };
        trajectory_pef(&model.chain, &mu, k).sub_const(&c)
    };
    let intervals = match isolate_roots(&f, &lo, &hi, common.budget) {
        Ok(ivs) => ivs,
        Err(e) => return pef_error_exit(&e),
    };
    let mut refined = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match refine_isolation(&f, &iv, &eps) {
            Ok(r) => refined.push(r),
            Err(e) => return pef_error_exit(&e),
        }
    }
    match common.format {
        Format::Human => {
            println!("{} isolating interval(s)", refined.len());
            for iv in &refined {
                println!("({}, {})", format_rational(&iv.low), format_rational(&iv.high));
            }
        }
        Format::Structured => {
            let entries: Vec<_> = refined
                .iter()
                .map(|iv| json!([format_rational(&iv.low), format_rational(&iv.high)]))
                .collect();
            println!("{}", json!({"intervals": entries}));
        }
    }
    ExitCode::from(EXIT_OK)
}

fn cmd_trace(
    common: &CommonOpts,
    horizon: Option<&str>,
    formula: Option<&str>,
    step: f64,
) -> ExitCode {
    let (model, mu) = match load_model(&common.model) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let horizon = match (horizon, formula) {
        (Some(h), _) => match parse_rational(h) {
            Ok(h) => h,
            Err(e) => {
                eprintln!("error: --horizon: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        },
        (None, Some(text)) => match parse(text) {
            Ok(phi) => formula_horizon(&phi),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        },
        (None, None) => {
            eprintln!("error: either --horizon or --formula is required");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if horizon <= Rat::from_integer(0.into()) {
        eprintln!("error: horizon must be positive");
        return ExitCode::from(EXIT_INVALID);
    }
    let eps = parse_rational(&common.epsilon).expect("validated default");

    // All symbolization atoms of the model.
    let atoms: Vec<Atom> = (1..=model.chain.states.len())
        .flat_map(|k| {
            model
                .intervals
                .iter()
                .map(move |iv| Atom { state_index: k, interval: iv.clone() })
        })
        .collect();

    let mut ctx = CheckCtx::new(&model.chain, mu.clone(), common.budget);
    let mut sets = Vec::with_capacity(atoms.len());
    for a in &atoms {
        match atom_intervals(&mut ctx, a, &horizon) {
            Ok(set) => sets.push(set),
            Err(e) => return pef_error_exit(&e),
        }
    }

    // Segment boundaries: every distinct interval endpoint, ordered by its
    // refined enclosure.
    let mut cuts: Vec<SymbolicTime> = vec![SymbolicTime::exact(Rat::from_integer(0.into()))];
    for set in &sets {
        for iv in set {
            for t in [&iv.low, &iv.high] {
                let mut t = t.clone();
                t.refine(&eps);
                cuts.push(t);
            }
        }
    }
    cuts.push(SymbolicTime::exact(horizon.clone()));
    cuts.sort_by(|a, b| a.to_f64().partial_cmp(&b.to_f64()).unwrap_or(Ordering::Equal));
    cuts.dedup_by(|a, b| (a.to_f64() - b.to_f64()).abs() <= 2.0 * rat_to_f64(&eps));

    // Exact membership of each atom at a rational sample inside a segment.
    let member = |t: &Rat, a: &Atom| -> bool {
        let f = trajectory_pef(&model.chain, &mu, a.state_index);
        let sa = f.sub_const(&a.interval.low).pef().sign_at(t);
        let sb = f.sub_const(&a.interval.high).pef().sign_at(t);
        (sa > 0 || (sa == 0 && a.interval.low_closed))
            && (sb < 0 || (sb == 0 && a.interval.high_closed))
    };

    for w in cuts.windows(2) {
        let (_, lo_hi) = w[0].bounds();
        let (hi_lo, _) = w[1].bounds();
        let sample = (&lo_hi + &hi_lo) / Rat::from_integer(2.into());
        let satisfied: Vec<String> = atoms
            .iter()
            .filter(|a| member(&sample, a))
            .map(|a| format!("<{}, {}>", a.state_index, a.interval))
            .collect();
        match common.format {
            Format::Human => {
                println!(
                    "segment [{:.6}, {:.6}]: {{{}}}",
                    w[0].to_f64(),
                    w[1].to_f64(),
                    satisfied.join(", ")
                );
            }
            Format::Structured => {
                println!(
                    "{}",
                    json!({
                        "segment": {
                            "from": w[0].to_string(),
                            "to": w[1].to_string(),
                            "atoms": satisfied,
                        }
                    })
                );
            }
        }
    }

    // Plot-ready numeric samples.
    let points = (rat_to_f64(&horizon) / step).ceil() as usize;
    let traj = grid_trajectory(&model.chain, &mu, step, points);
    for (j, p) in traj.iter().enumerate() {
        let t = step * j as f64;
        match common.format {
            Format::Human => {
                let cols: Vec<String> = p.iter().map(|x| format!("{x:.9}")).collect();
                println!("sample t={t:.4} mu=({})", cols.join(", "));
            }
            Format::Structured => {
                println!("{}", json!({"sample": {"t": t, "mu": p}}));
            }
        }
    }
    ExitCode::from(EXIT_OK)
}

fn cmd_simulate(common: &CommonOpts, formula: &str, step: f64, margin: f64) -> ExitCode {
    let (model, mu) = match load_model(&common.model) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let phi = match parse(formula) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if let Err(e) = validate_formula_states(&model, &phi) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INVALID);
    }
    let oracle = grid_check(&model.chain, &mu, &phi, step, margin);
    let exact = model_check(&model, &mu, &phi, common.budget);
    match common.format {
        Format::Human => {
            println!("oracle: {}", if oracle.satisfied { "SAT" } else { "UNSAT" });
            if !oracle.robust {
                println!("margins: inconclusive near boundary (margin <= {margin})");
            }
            match &exact {
                Ok(v) => {
                    println!("checker: {}", if v.satisfied { "SAT" } else { "UNSAT" });
                    println!(
                        "agreement: {}",
                        if v.satisfied == oracle.satisfied { "yes" } else { "no" }
                    );
                }
                Err(e) => println!("checker: undecided ({e})"),
            }
        }
        Format::Structured => {
            println!(
                "{}",
                json!({"verdict": if oracle.satisfied { "SAT" } else { "UNSAT" }})
            );
            println!("{}", json!({"margins": {"robust": oracle.robust, "margin": margin}}));
            match &exact {
                Ok(v) => {
                    println!(
                        "{}",
                        json!({
                            "checker": if v.satisfied { "SAT" } else { "UNSAT" },
                            "agreement": v.satisfied == oracle.satisfied,
                        })
                    );
                }
                Err(e) => println!("{}", json!({"checker": "undecided", "error": e.to_string()})),
            }
        }
    }
    match exact {
        Ok(_) => ExitCode::from(EXIT_OK),
        Err(e) => match e {
            PefError::Undecided(_) => ExitCode::from(EXIT_UNDECIDED),
            _ => ExitCode::from(EXIT_INVALID),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check { common, formula } => cmd_check(common, formula),
        Command::Isolate { common, state, level, raw, from, to } => {
            cmd_isolate(common, *state, level, raw.as_deref(), from, to)
        }
        Command::Trace { common, horizon, formula, step } => {
            cmd_trace(common, horizon.as_deref(), formula.as_deref(), *step)
        }
        Command::Simulate { common, formula, step, margin } => {
            cmd_simulate(common, formula, *step, *margin)
        }
    }
}
