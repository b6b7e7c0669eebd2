//! Floating-point cross-check: dense-grid evaluation of path formulas
//! against numerically integrated trajectories, with boundary-margin
//! perturbation to flag instances too close to call.

use num_traits::Zero;

use crate::ctmc::{Distribution, CTMC};
use crate::logic::{normalize_path, NormalPath, PathFormula, StateFormula, TimeWindow};
use crate::rational::rat_to_f64;

/// Matrix exponential `e^{A h}` by scaling and squaring with a Taylor tail.
fn expm(a: &[Vec<f64>], h: f64) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().map(|row| row.iter().map(|x| x * h).collect()).collect();
    let norm: f64 = (0..n)
        .map(|j| (0..n).map(|i| m[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    while norm / f64::powi(2.0, squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scale = f64::powi(2.0, squarings as i32);
    for row in &mut m {
        for x in row.iter_mut() {
            *x /= scale;
        }
    }
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=24 {
        term = mat_mul(&term, &m);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        mat_add(&mut result, &term);
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn mat_add(acc: &mut [Vec<f64>], other: &[Vec<f64>]) {
    for (ra, rb) in acc.iter_mut().zip(other) {
        for (xa, xb) in ra.iter_mut().zip(rb) {
            *xa += *xb;
        }
    }
}

/// Distribution samples `mu_{j * step}` for `j = 0..=points`.
pub fn grid_trajectory(
    chain: &CTMC,
    mu: &Distribution,
    step: f64,
    points: usize,
) -> Vec<Vec<f64>> {
    let n = chain.q.size();
    let qt: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rat_to_f64(chain.q.get(j, i))).collect())
        .collect();
    let e = expm(&qt, step);
    let mut cur: Vec<f64> = mu.probs.iter().map(rat_to_f64).collect();
    let mut out = Vec::with_capacity(points + 1);
    out.push(cur.clone());
    for _ in 0..points {
        let next: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| e[i][j] * cur[j]).sum())
            .collect();
        out.push(next.clone());
        cur = next;
    }
    out
}

/// Evaluate a state formula on a sampled distribution. A positive `bloat`
/// widens every positively-occurring atom interval (and narrows negated
/// ones), so verdicts stable under `±bloat` are robust to boundary noise.
fn eval_state(phi: &StateFormula, probs: &[f64], bloat: f64) -> bool {
    match phi {
        StateFormula::True => true,
        StateFormula::AtomRef(a) => {
            let p = probs[a.state_index - 1];
            // Endpoints at the domain edge are not decision boundaries
            // (probabilities cannot cross 0 or 1), so only interior
            // endpoints are perturbed.
            let low = rat_to_f64(&a.interval.low);
            let high = rat_to_f64(&a.interval.high);
            let low = if low <= 0.0 { f64::NEG_INFINITY } else { low - bloat };
            let high = if high >= 1.0 { f64::INFINITY } else { high + bloat };
            low <= p && p <= high
        }
        StateFormula::Not(x) => !eval_state(x, probs, -bloat),
        StateFormula::And(x, y) => eval_state(x, probs, bloat) && eval_state(y, probs, bloat),
    }
}

/// Index ranges (inclusive) of grid points reachable as the k-th switch
/// time; merged and sorted.
type Ranges = Vec<(usize, usize)>;

fn push_range(ranges: &mut Ranges, lo: usize, hi: usize) {
    if lo > hi {
        return;
    }
    if let Some(last) = ranges.last_mut() {
        if lo <= last.1 + 1 && lo >= last.0 {
            last.1 = last.1.max(hi);
            return;
        }
    }
    ranges.push((lo, hi));
}

fn check_chain_on_grid(
    traj: &[Vec<f64>],
    step: f64,
    phi0: &StateFormula,
    steps: &[(TimeWindow, StateFormula)],
    bloat: f64,
) -> bool {
    let n_pts = traj.len();
    let sat = |phi: &StateFormula| -> Vec<bool> {
        traj.iter().map(|p| eval_state(phi, p, bloat)).collect()
    };
    // first_fail[i]: smallest j >= i with the formula false at j.
    let first_fail = |s: &[bool]| -> Vec<usize> {
        let mut out = vec![n_pts; n_pts + 1];
        for i in (0..n_pts).rev() {
            out[i] = if s[i] { out[i + 1] } else { i };
        }
        out
    };

    let mut reach: Ranges = vec![(0, 0)];
    for (k, (window, _)) in steps.iter().enumerate() {
        let hold = if k == 0 { phi0 } else { &steps[k - 1].1 };
        let s = sat(hold);
        let ff = first_fail(&s);
        let w_lo = (rat_to_f64(&window.low) - bloat).max(0.0);
        let w_hi = rat_to_f64(&window.high) + bloat;
        // A zero-length jump is an exact rational property of the window,
        // not subject to grid or boundary noise.
        let jump = window.low.is_zero() && window.low_closed;
        let g_lo = ((w_lo / step - 1e-9).ceil().max(1.0)) as usize;
        let g_hi = (w_hi / step + 1e-9).floor() as usize;
        let mut next: Ranges = Vec::new();
        for &(a, b) in &reach {
            for i in a..=b.min(n_pts - 1) {
                if jump {
                    push_range(&mut next, i, i);
                }
                if s[i] {
                    let hi = (i + g_hi).min(ff[i]).min(n_pts - 1);
                    push_range(&mut next, i + g_lo, hi);
                }
            }
        }
        reach = next;
        if reach.is_empty() {
            return false;
        }
    }
    let s_final = sat(&steps[steps.len() - 1].1);
    reach
        .iter()
        .any(|&(a, b)| (a..=b.min(n_pts - 1)).any(|j| s_final[j]))
}

fn eval_tree_on_grid(
    traj: &[Vec<f64>],
    step: f64,
    tree: &NormalPath,
    bloat: f64,
) -> bool {
    match tree {
        NormalPath::Const(b) => *b,
        NormalPath::Leaf { negated, phi0, steps } => {
            let inner_bloat = if *negated { -bloat } else { bloat };
            let sat = check_chain_on_grid(traj, step, phi0, steps, inner_bloat);
            sat != *negated
        }
        NormalPath::And(x, y) => {
            eval_tree_on_grid(traj, step, x, bloat) && eval_tree_on_grid(traj, step, y, bloat)
        }
        NormalPath::Or(x, y) => {
            eval_tree_on_grid(traj, step, x, bloat) || eval_tree_on_grid(traj, step, y, bloat)
        }
    }
}

fn formula_horizon(phi: &PathFormula) -> f64 {
    fn leaf_horizon(tree: &NormalPath) -> f64 {
        match tree {
            NormalPath::Const(_) => 0.0,
            NormalPath::Leaf { steps, .. } => {
                steps.iter().map(|(w, _)| rat_to_f64(&w.high)).sum()
            }
            NormalPath::And(x, y) | NormalPath::Or(x, y) => {
                leaf_horizon(x).max(leaf_horizon(y))
            }
        }
    }
    leaf_horizon(&normalize_path(phi))
}

/// A grid-oracle verdict plus a robustness flag: `robust` is false when
/// perturbing all atom intervals and windows by `±margin` flips the verdict,
/// meaning the instance sits too close to a boundary to trust the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub satisfied: bool,
    pub robust: bool,
}

/// Evaluate `phi` on a dense grid of the numeric trajectory.
pub fn grid_check(
    chain: &CTMC,
    mu: &Distribution,
    phi: &PathFormula,
    step: f64,
    margin: f64,
) -> OracleVerdict {
    let horizon = formula_horizon(phi);
    let points = (horizon / step + 1e-9).ceil() as usize;
    let traj = grid_trajectory(chain, mu, step, points);
    let tree = normalize_path(phi);
    let base = eval_tree_on_grid(&traj, step, &tree, 0.0);
    let widened = eval_tree_on_grid(&traj, step, &tree, margin);
    let narrowed = eval_tree_on_grid(&traj, step, &tree, -margin);
    OracleVerdict { satisfied: base, robust: widened == base && narrowed == base }
}
