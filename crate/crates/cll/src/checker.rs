//! The decision procedure: maximal satisfaction intervals per atom, a
//! symbolic interval-set algebra, forward propagation of feasible switch
//! times through an until-chain, and verdict assembly over the path-level
//! boolean structure.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::ctmc::{trajectory_pef, Atom, Distribution, ProbInterval, SymbolizedCTMC, CTMC};
use crate::logic::{
    normalize_path, to_cnf, CNFStateFormula, NormalPath, PathFormula, StateFormula, TimeWindow,
};
use crate::pef::{compare_times, isolate_roots, PefError, RealPEF, SymbolicTime};
use crate::rational::{rat_int, Rat};

/// A time interval whose endpoints are exact rationals or isolated roots of
/// polynomial-exponential functions.
#[derive(Clone, Debug)]
pub struct SymbolicInterval {
    pub low: SymbolicTime,
    pub high: SymbolicTime,
    pub low_closed: bool,
    pub high_closed: bool,
}

impl SymbolicInterval {
    pub fn rational(low: Rat, high: Rat, low_closed: bool, high_closed: bool) -> SymbolicInterval {
        SymbolicInterval {
            low: SymbolicTime::exact(low),
            high: SymbolicTime::exact(high),
            low_closed,
            high_closed,
        }
    }

    pub fn point(t: SymbolicTime) -> SymbolicInterval {
        SymbolicInterval { low: t.clone(), high: t, low_closed: true, high_closed: true }
    }

    fn is_nonempty(&self, budget: u32) -> Result<bool, PefError> {
        match compare_times(&self.low, &self.high, &Rat::zero(), budget)? {
            Ordering::Less => Ok(true),
            Ordering::Equal => Ok(self.low_closed && self.high_closed),
            Ordering::Greater => Ok(false),
        }
    }

    /// Rational enclosure `(inf bound, sup bound)` of the whole interval.
    pub fn bounds(&self) -> (Rat, Rat) {
        (self.low.bounds().0, self.high.bounds().1)
    }
}

impl fmt::Display for SymbolicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.low_closed { '[' } else { '(' },
            self.low,
            self.high,
            if self.high_closed { ']' } else { ')' },
        )
    }
}

/// The outcome of a check: satisfaction, an optional witness of chosen
/// feasible switch-time intervals per chain level, and a textual trace.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub satisfied: bool,
    pub witness: Option<Vec<(usize, SymbolicInterval)>>,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    fn plain(satisfied: bool) -> Verdict {
        Verdict { satisfied, witness: None, diagnostics: Vec::new() }
    }
}

/// Shared per-query state: the chain, the initial distribution, the
/// comparison budget, and a cache of trajectory coordinates.
pub struct CheckCtx<'m> {
    model: &'m CTMC,
    mu: Distribution,
    pub budget: u32,
    trajectories: HashMap<usize, RealPEF>,
}

impl<'m> CheckCtx<'m> {
    pub fn new(model: &'m CTMC, mu: Distribution, budget: u32) -> CheckCtx<'m> {
        CheckCtx { model, mu, budget, trajectories: HashMap::new() }
    }

    fn trajectory(&mut self, state_index: usize) -> RealPEF {
        if let Some(f) = self.trajectories.get(&state_index) {
            return f.clone();
        }
        let f = trajectory_pef(self.model, &self.mu, state_index);
        self.trajectories.insert(state_index, f.clone());
        f
    }
}

// ---------------------------------------------------------------------------
// Symbolic interval algebra
// ---------------------------------------------------------------------------

fn cmp_times(a: &SymbolicTime, b: &SymbolicTime, budget: u32) -> Result<Ordering, PefError> {
    compare_times(a, b, &Rat::zero(), budget)
}

/// Intersection of two symbolic intervals, `None` when empty.
fn intersect(
    a: &SymbolicInterval,
    b: &SymbolicInterval,
    budget: u32,
) -> Result<Option<SymbolicInterval>, PefError> {
    let (low, low_closed) = match cmp_times(&a.low, &b.low, budget)? {
        Ordering::Less => (b.low.clone(), b.low_closed),
        Ordering::Greater => (a.low.clone(), a.low_closed),
        Ordering::Equal => (a.low.clone(), a.low_closed && b.low_closed),
    };
    let (high, high_closed) = match cmp_times(&a.high, &b.high, budget)? {
        Ordering::Less => (a.high.clone(), a.high_closed),
        Ordering::Greater => (b.high.clone(), b.high_closed),
        Ordering::Equal => (a.high.clone(), a.high_closed && b.high_closed),
    };
    let out = SymbolicInterval { low, high, low_closed, high_closed };
    if out.is_nonempty(budget)? {
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

/// Sort by lower endpoint and merge overlapping or touching intervals into
/// maximal disjoint ones.
fn normalize_set(
    mut intervals: Vec<SymbolicInterval>,
    budget: u32,
) -> Result<Vec<SymbolicInterval>, PefError> {
    // Insertion sort: the comparator is fallible.
    let mut sorted: Vec<SymbolicInterval> = Vec::with_capacity(intervals.len());
    for iv in intervals.drain(..) {
        let mut at = sorted.len();
        for (i, s) in sorted.iter().enumerate() {
            if cmp_times(&iv.low, &s.low, budget)? == Ordering::Less {
                at = i;
                break;
            }
        }
        sorted.insert(at, iv);
    }
    let mut out: Vec<SymbolicInterval> = Vec::new();
    for iv in sorted {
        if let Some(last) = out.last_mut() {
            // Merge when iv.low <= last.high, or the endpoints touch and at
            // least one side includes the shared point.
            let merge = match cmp_times(&iv.low, &last.high, budget)? {
                Ordering::Less => true,
                Ordering::Equal => iv.low_closed || last.high_closed,
                Ordering::Greater => false,
            };
            if merge {
                match cmp_times(&iv.high, &last.high, budget)? {
                    Ordering::Greater => {
                        last.high = iv.high;
                        last.high_closed = iv.high_closed;
                    }
                    Ordering::Equal => last.high_closed |= iv.high_closed,
                    Ordering::Less => {}
                }
                continue;
            }
        }
        out.push(iv);
    }
    Ok(out)
}

fn union_sets(
    a: Vec<SymbolicInterval>,
    b: Vec<SymbolicInterval>,
    budget: u32,
) -> Result<Vec<SymbolicInterval>, PefError> {
    let mut all = a;
    all.extend(b);
    normalize_set(all, budget)
}

fn intersect_sets(
    a: &[SymbolicInterval],
    b: &[SymbolicInterval],
    budget: u32,
) -> Result<Vec<SymbolicInterval>, PefError> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if let Some(z) = intersect(x, y, budget)? {
                out.push(z);
            }
        }
    }
    normalize_set(out, budget)
}

// ---------------------------------------------------------------------------
// Per-atom maximal satisfaction intervals
// ---------------------------------------------------------------------------

/// Membership of the trajectory value at rational time `t` in the atom's
/// probability interval, by exact sign tests.
fn member_at(f: &RealPEF, interval: &ProbInterval, t: &Rat) -> bool {
    let sa = f.sub_const(&interval.low).pef().sign_at(t);
    let lower_ok = sa > 0 || (sa == 0 && interval.low_closed);
    let sb = f.sub_const(&interval.high).pef().sign_at(t);
    let upper_ok = sb < 0 || (sb == 0 && interval.high_closed);
    lower_ok && upper_ok
}

/// Refine two distinct symbolic times until their rational enclosures are
/// disjoint, and return a rational sample strictly between them.
fn sample_between(
    a: &mut SymbolicTime,
    b: &mut SymbolicTime,
) -> Result<Rat, PefError> {
    let mut width = Rat::new(1.into(), 16.into());
    for _ in 0..256 {
        a.refine(&width);
        b.refine(&width);
        let (_, a_hi) = a.bounds();
        let (b_lo, _) = b.bounds();
        if a_hi < b_lo {
            return Ok((a_hi + b_lo) / rat_int(2));
        }
        width /= rat_int(2);
    }
    Err(PefError::Undecided(
        "could not separate two symbolic instants by refinement".to_string(),
    ))
}

/// Maximal subintervals of `[0, horizon]` on which the trajectory of the
/// atom's state stays inside the atom's probability interval. Endpoints are
/// `0`, `horizon`, or isolated roots of `f - low` / `f - high`.
pub fn atom_intervals(
    ctx: &mut CheckCtx<'_>,
    atom: &Atom,
    horizon: &Rat,
) -> Result<Vec<SymbolicInterval>, PefError> {
    let budget = ctx.budget;
    let f = ctx.trajectory(atom.state_index);
    let interval = &atom.interval;

    // Constant-on-boundary cases: f == low or f == high identically.
    if f.sub_const(&interval.low).is_zero() {
        let inside = interval.low_closed
            && (interval.low < interval.high || interval.high_closed);
        return Ok(if inside {
            vec![SymbolicInterval::rational(Rat::zero(), horizon.clone(), true, true)]
        } else {
            Vec::new()
        });
    }
    if f.sub_const(&interval.high).is_zero() {
        let inside = interval.high_closed
            && (interval.low < interval.high || interval.low_closed);
        return Ok(if inside {
            vec![SymbolicInterval::rational(Rat::zero(), horizon.clone(), true, true)]
        } else {
            Vec::new()
        });
    }

    if horizon.is_zero() {
        return Ok(if member_at(&f, interval, &Rat::zero()) {
            vec![SymbolicInterval::rational(Rat::zero(), Rat::zero(), true, true)]
        } else {
            Vec::new()
        });
    }

    // Critical instants: roots of f - low and f - high inside (0, horizon),
    // tagged with membership at the instant itself.
    let degenerate = interval.low == interval.high;
    let mut crits: Vec<(SymbolicTime, bool)> = Vec::new();
    {
        let g_low = f.sub_const(&interval.low);
        let lower_member = if degenerate {
            interval.low_closed && interval.high_closed
        } else {
            interval.low_closed
        };
        for iv in isolate_roots(&g_low, &Rat::zero(), horizon, budget)? {
            crits.push((SymbolicTime::root(&g_low, iv, Rat::zero())?, lower_member));
        }
        if !degenerate {
            let g_high = f.sub_const(&interval.high);
            let mut uppers = Vec::new();
            for iv in isolate_roots(&g_high, &Rat::zero(), horizon, budget)? {
                uppers.push((SymbolicTime::root(&g_high, iv, Rat::zero())?, interval.high_closed));
            }
            // Merge the two sorted lists; roots of f-low and f-high are
            // necessarily distinct since low < high.
            let mut merged = Vec::with_capacity(crits.len() + uppers.len());
            let (mut i, mut j) = (0, 0);
            while i < crits.len() && j < uppers.len() {
                if cmp_times(&crits[i].0, &uppers[j].0, budget)? == Ordering::Less {
                    merged.push(crits[i].clone());
                    i += 1;
                } else {
                    merged.push(uppers[j].clone());
                    j += 1;
                }
            }
            merged.extend_from_slice(&crits[i..]);
            merged.extend_from_slice(&uppers[j..]);
            crits = merged;
        }
    }

    // Point chain 0, r_1, ..., r_m, horizon with membership at each point
    // and on each open segment between consecutive points.
    let mut points: Vec<(SymbolicTime, bool)> =
        vec![(SymbolicTime::exact(Rat::zero()), member_at(&f, interval, &Rat::zero()))];
    points.extend(crits);
    points.push((SymbolicTime::exact(horizon.clone()), member_at(&f, interval, horizon)));

    let mut segs = Vec::with_capacity(points.len() - 1);
    for i in 0..points.len() - 1 {
        let (left, right) = points.split_at_mut(i + 1);
        let sample = sample_between(&mut left[i].0, &mut right[0].0)?;
        segs.push(member_at(&f, interval, &sample));
    }

    // Sweep: assemble maximal intervals from the point/segment membership
    // alternation.
    let mut out = Vec::new();
    let mut open: Option<(SymbolicTime, bool)> = None;
    for i in 0..points.len() {
        let (t, p) = &points[i];
        let s_next = segs.get(i).copied().unwrap_or(false);
        match open.take() {
            None => {
                if *p && s_next {
                    open = Some((t.clone(), true));
                } else if *p {
                    out.push(SymbolicInterval::point(t.clone()));
                } else if s_next {
                    open = Some((t.clone(), false));
                }
            }
            Some((low, low_closed)) => {
                if *p && s_next {
                    open = Some((low, low_closed));
                } else {
                    out.push(SymbolicInterval {
                        low,
                        high: t.clone(),
                        low_closed,
                        high_closed: *p,
                    });
                    if !*p && s_next {
                        open = Some((t.clone(), false));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Maximal subintervals of `[0, horizon]` satisfying a positive CNF state
/// formula: per-clause unions of atom intervals, intersected across clauses.
pub fn state_intervals(
    ctx: &mut CheckCtx<'_>,
    cnf: &CNFStateFormula,
    horizon: &Rat,
) -> Result<Vec<SymbolicInterval>, PefError> {
    let budget = ctx.budget;
    let whole = vec![SymbolicInterval::rational(Rat::zero(), horizon.clone(), true, true)];
    let mut result = whole;
    for clause in &cnf.clauses {
        let mut clause_set: Vec<SymbolicInterval> = Vec::new();
        for atom in clause {
            let atom_set = atom_intervals(ctx, atom, horizon)?;
            clause_set = union_sets(clause_set, atom_set, budget)?;
        }
        result = intersect_sets(&result, &clause_set, budget)?;
        if result.is_empty() {
            break;
        }
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// Until-chain propagation
// ---------------------------------------------------------------------------

/// The strictly positive part of a time window (the admissible gaps for a
/// non-degenerate stretch), `None` when empty.
fn positive_part(w: &TimeWindow) -> Option<TimeWindow> {
    let mut out = w.clone();
    if out.low.is_zero() {
        out.low_closed = false;
    }
    if out.is_valid() {
        Some(out)
    } else {
        None
    }
}

fn feasible_next(
    prev: &SymbolicInterval,
    hold: &SymbolicInterval,
    window: &TimeWindow,
    budget: u32,
) -> Result<Option<SymbolicInterval>, PefError> {
    let pos = match positive_part(window) {
        Some(p) => p,
        None => return Ok(None),
    };
    // The switch may depart from any instant in prev that also satisfies the
    // running state formula (so the stretch is nonempty and covered).
    let depart = match intersect(prev, hold, budget)? {
        Some(j) => j,
        None => return Ok(None),
    };
    // Minkowski sum of departure instants with the positive window gaps.
    let shifted = SymbolicInterval {
        low: depart.low.plus(&pos.low),
        high: depart.high.plus(&pos.high),
        low_closed: depart.low_closed && pos.low_closed,
        high_closed: depart.high_closed && pos.high_closed,
    };
    // The stretch must stay inside the same maximal interval: arrival is
    // capped at sup(hold) (inclusive: the covered stretch is half-open), and
    // must lie strictly after the departure.
    let mask = SymbolicInterval {
        low: depart.low.clone(),
        high: hold.high.clone(),
        low_closed: false,
        high_closed: true,
    };
    intersect(&shifted, &mask, budget)
}

/// Decide `phi0 U^T1 phi1 ... U^Tn phin` for the context's trajectory.
pub fn check_until_chain(
    ctx: &mut CheckCtx<'_>,
    phi0: &StateFormula,
    steps: &[(TimeWindow, StateFormula)],
) -> Result<Verdict, PefError> {
    let budget = ctx.budget;
    let n = steps.len();
    assert!(n >= 1, "an until chain has at least one window");

    // Horizons: H_k = sum of the first k window suprema.
    let mut horizons = Vec::with_capacity(n + 1);
    let mut acc = Rat::zero();
    horizons.push(acc.clone());
    for (w, _) in steps {
        acc += &w.high;
        horizons.push(acc.clone());
    }

    // Families of maximal satisfaction intervals: level k is governed by
    // the state formula active before the k-th switch.
    let mut families: Vec<Vec<SymbolicInterval>> = Vec::with_capacity(n);
    for k in 1..=n {
        let phi = if k == 1 { phi0 } else { &steps[k - 2].1 };
        families.push(state_intervals(ctx, &to_cnf(phi), &horizons[k])?);
    }
    let final_region = state_intervals(ctx, &to_cnf(&steps[n - 1].1), &horizons[n])?;

    // Forward propagation of feasible switch-time intervals; each candidate
    // remembers the index of its parent at the previous level.
    let mut levels: Vec<Vec<(SymbolicInterval, Option<usize>)>> = Vec::with_capacity(n + 1);
    levels.push(vec![(
        SymbolicInterval::rational(Rat::zero(), Rat::zero(), true, true),
        None,
    )]);
    for k in 1..=n {
        let window = &steps[k - 1].0;
        let jump_ok = window.low.is_zero() && window.low_closed;
        let mut next: Vec<(SymbolicInterval, Option<usize>)> = Vec::new();
        for (pi, (prev, _)) in levels[k - 1].iter().enumerate() {
            if jump_ok {
                next.push((prev.clone(), Some(pi)));
            }
            for hold in &families[k - 1] {
                if let Some(arrival) = feasible_next(prev, hold, window, budget)? {
                    next.push((arrival, Some(pi)));
                }
            }
        }
        levels.push(next);
    }

    // The final switch time must itself satisfy the last state formula.
    let mut diagnostics = Vec::new();
    for (ci, (cand, _)) in levels[n].iter().enumerate() {
        for region in &final_region {
            if let Some(witness_n) = intersect(cand, region, budget)? {
                // Reconstruct the witness chain from the parent links.
                let mut chain = vec![(n, witness_n)];
                let mut at = ci;
                for k in (1..n).rev() {
                    let parent = levels[k + 1][at].1.expect("levels > 0 have parents");
                    chain.push((k, levels[k][parent].0.clone()));
                    at = parent;
                }
                chain.reverse();
                diagnostics.push(format!(
                    "satisfied with final switch interval {}",
                    chain[chain.len() - 1].1
                ));
                return Ok(Verdict { satisfied: true, witness: Some(chain), diagnostics });
            }
        }
    }
    diagnostics.push(format!(
        "no feasible final switch time satisfies the last state formula \
         ({} candidate interval(s) at the last level)",
        levels[n].len()
    ));
    Ok(Verdict { satisfied: false, witness: None, diagnostics })
}

/// Decide a path formula for `model` started at `mu`.
pub fn model_check(
    model: &SymbolizedCTMC,
    mu: &Distribution,
    phi: &PathFormula,
    budget: u32,
) -> Result<Verdict, PefError> {
    let mut ctx = CheckCtx::new(&model.chain, mu.clone(), budget);
    let tree = normalize_path(phi);
    eval_tree(&mut ctx, &tree)
}

fn eval_tree(ctx: &mut CheckCtx<'_>, tree: &NormalPath) -> Result<Verdict, PefError> {
    match tree {
        NormalPath::Const(b) => Ok(Verdict::plain(*b)),
        NormalPath::Leaf { negated, phi0, steps } => {
            let mut v = check_until_chain(ctx, phi0, steps)?;
            if *negated {
                v.satisfied = !v.satisfied;
                v.witness = None;
                v.diagnostics.push("negated chain verdict".to_string());
            }
            Ok(v)
        }
        NormalPath::And(x, y) => {
            let a = eval_tree(ctx, x)?;
            let b = eval_tree(ctx, y)?;
            let satisfied = a.satisfied && b.satisfied;
            let witness = if satisfied { a.witness.or(b.witness) } else { None };
            let mut diagnostics = a.diagnostics;
            diagnostics.extend(b.diagnostics);
            Ok(Verdict { satisfied, witness, diagnostics })
        }
        NormalPath::Or(x, y) => {
            let a = eval_tree(ctx, x)?;
            if a.satisfied {
                return Ok(a);
            }
            let b = eval_tree(ctx, y)?;
            let mut diagnostics = a.diagnostics;
            diagnostics.extend(b.diagnostics);
            Ok(Verdict { satisfied: b.satisfied, witness: b.witness, diagnostics })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RationalMatrix;
    use crate::logic::parse;
    use crate::rational::rat_to_f64;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn two_state() -> CTMC {
        CTMC {
            states: vec!["a".to_string(), "b".to_string()],
            q: RationalMatrix::new(vec![
                vec![rat_int(-1), rat_int(1)],
                vec![rat_int(1), rat_int(-1)],
            ]),
        }
    }

    fn two_state_model() -> SymbolizedCTMC {
        SymbolizedCTMC { chain: two_state(), intervals: Vec::new() }
    }

    fn delta_one(states: usize) -> Distribution {
        let mut probs = vec![Rat::zero(); states];
        probs[0] = Rat::one();
        Distribution { probs }
    }

    fn atom(j: usize, low: Rat, high: Rat) -> Atom {
        Atom { state_index: j, interval: ProbInterval::closed(low, high) }
    }

    #[test]
    fn constant_trajectory_fills_the_window() {
        let chain = CTMC {
            states: vec!["s".to_string()],
            q: RationalMatrix::new(vec![vec![rat_int(0)]]),
        };
        let mut ctx = CheckCtx::new(&chain, delta_one(1), 32);
        let set = atom_intervals(&mut ctx, &atom(1, rat_int(1), rat_int(1)), &rat_int(5)).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].low.as_exact(), Some(rat_int(0)));
        assert_eq!(set[0].high.as_exact(), Some(rat_int(5)));
    }

    #[test]
    fn two_state_crossing_at_half_ln_five() {
        // f(t) = 1/2 + e^{-2t}/2 enters [0, 3/5] at t* = (ln 5)/2.
        let chain = two_state();
        let mut ctx = CheckCtx::new(&chain, delta_one(2), 32);
        let set = atom_intervals(&mut ctx, &atom(1, rat_int(0), rat(3, 5)), &rat_int(3)).unwrap();
        assert_eq!(set.len(), 1);
        let mut low = set[0].low.clone();
        low.refine(&rat(1, 1_000_000));
        let (lo, hi) = low.bounds();
        let t_star = 5.0f64.ln() / 2.0;
        assert!(rat_to_f64(&lo) <= t_star && t_star <= rat_to_f64(&hi));
        assert!(set[0].low_closed);
        assert_eq!(set[0].high.as_exact(), Some(rat_int(3)));
        assert!(set[0].high_closed);
    }

    #[test]
    fn two_state_departure_from_high_band() {
        // f stays in [9/10, 1] until t = (ln 5/4)/2.
        let chain = two_state();
        let mut ctx = CheckCtx::new(&chain, delta_one(2), 32);
        let set = atom_intervals(&mut ctx, &atom(1, rat(9, 10), rat_int(1)), &rat_int(3)).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].low.as_exact(), Some(rat_int(0)));
        let mut high = set[0].high.clone();
        high.refine(&rat(1, 1_000_000));
        let (lo, hi) = high.bounds();
        let t_exit = 1.25f64.ln() / 2.0;
        assert!(rat_to_f64(&lo) <= t_exit && t_exit <= rat_to_f64(&hi));
    }

    #[test]
    fn complementary_atoms_tile_the_window() {
        let chain = two_state();
        let mut ctx = CheckCtx::new(&chain, delta_one(2), 32);
        // !(P[1] in [1/10, 9/10]) -> clause of two complements; union with
        // the original atom covers the whole window.
        let phi = StateFormula::not(StateFormula::AtomRef(atom(1, rat(1, 10), rat(9, 10))));
        let mut cnf = to_cnf(&phi);
        cnf.clauses[0].push(atom(1, rat(1, 10), rat(9, 10)));
        let set = state_intervals(&mut ctx, &cnf, &rat_int(3)).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].low.as_exact(), Some(rat_int(0)));
        assert_eq!(set[0].high.as_exact(), Some(rat_int(3)));
        assert!(set[0].low_closed && set[0].high_closed);
    }

    #[test]
    fn trivial_constant_until_holds() {
        let chain = CTMC {
            states: vec!["s".to_string()],
            q: RationalMatrix::new(vec![vec![rat_int(0)]]),
        };
        let model = SymbolizedCTMC { chain, intervals: Vec::new() };
        let phi = parse("P[1] in [1,1] U[0,1] P[1] in [1,1]").unwrap();
        let v = model_check(&model, &delta_one(1), &phi, 32).unwrap();
        assert!(v.satisfied);
    }

    #[test]
    fn eventually_low_band_is_satisfied_with_root_witness() {
        let model = two_state_model();
        let phi = parse("F[0,3] P[1] in [0,0.6]").unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        assert!(v.satisfied);
        let witness = v.witness.expect("positive verdicts carry a witness");
        let (_, last) = witness.last().unwrap();
        let mut low = last.low.clone();
        low.refine(&rat(1, 1_000_000));
        let (lo, hi) = low.bounds();
        let t_star = 5.0f64.ln() / 2.0;
        assert!(rat_to_f64(&lo) <= t_star && t_star <= rat_to_f64(&hi));
        assert!(rat_to_f64(&hi) - rat_to_f64(&lo) <= 1e-6);
    }

    #[test]
    fn globally_high_band_fails() {
        let model = two_state_model();
        let phi = parse("G[0,1] P[1] in [0.9,1]").unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        assert!(!v.satisfied);
    }

    #[test]
    fn until_with_unreachable_target_fails() {
        let model = two_state_model();
        let phi = parse("P[1] in [0.9,1] U[0,1] P[1] in [0,0.6]").unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        assert!(!v.satisfied);
    }

    #[test]
    fn path_constants_behave() {
        let model = two_state_model();
        let v = model_check(&model, &delta_one(2), &PathFormula::True, 32).unwrap();
        assert!(v.satisfied);
        let v = model_check(
            &model,
            &delta_one(2),
            &PathFormula::not(PathFormula::True),
            32,
        )
        .unwrap();
        assert!(!v.satisfied);
    }

    #[test]
    fn combined_verdicts_from_two_chains() {
        let model = two_state_model();
        let phi = parse("F[0,3] (P[1] in [0,0.6]) & !(G[0,1] P[1] in [0.9,1])").unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        assert!(v.satisfied);
    }

    #[test]
    fn state_query_checks_initial_distribution() {
        let model = two_state_model();
        let phi = parse("P[1] in [1,1]").unwrap();
        assert!(model_check(&model, &delta_one(2), &phi, 32).unwrap().satisfied);
        let phi = parse("P[1] in [0,0.5]").unwrap();
        assert!(!model_check(&model, &delta_one(2), &phi, 32).unwrap().satisfied);
    }

    #[test]
    fn two_step_chain_through_the_midpoint() {
        // Start in the high band, pass through the middle band, end low:
        // feasible on the two-state trajectory with generous windows.
        let model = two_state_model();
        let phi = parse("P[1] in (0.7,1] U[0,1] P[1] in (0.55,0.9] U[0,3] P[1] in [0,0.6]")
            .unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        assert!(v.satisfied, "diagnostics: {:?}", v.diagnostics);
        // Tight middle window that forces the second switch too early.
        let phi = parse("P[1] in (0.7,1] U[0,1] P[1] in (0.55,0.9] U[0,0.1] P[1] in [0,0.6]")
            .unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        assert!(!v.satisfied, "diagnostics: {:?}", v.diagnostics);
    }

    #[test]
    fn witness_levels_are_ordered() {
        let model = two_state_model();
        let phi = parse("P[1] in (0.7,1] U[0,1] P[1] in (0.55,0.9] U[0,3] P[1] in [0,0.6]")
            .unwrap();
        let v = model_check(&model, &delta_one(2), &phi, 32).unwrap();
        let witness = v.witness.unwrap();
        assert_eq!(witness.len(), 2);
        for pair in witness.windows(2) {
            let (ka, ia) = &pair[0];
            let (kb, ib) = &pair[1];
            assert!(ka < kb);
            // Later levels cannot start before earlier ones.
            assert!(ia.bounds().0 <= ib.bounds().1);
        }
    }
}
