//! Continuous-time Markov chains over rational rates: validation,
//! symbolization of distributions against a finite interval family, exact
//! trajectory coordinates as real PEFs, and a rigorous numeric oracle.

use crate::algebra::{jordan_decompose, AlgPoly, AlgebraicNumber, RationalMatrix};
use crate::pef::{RealPEF, PEF};
use crate::rational::{factorial, rat_int, Rat};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A CTMC `(S, Q)`: ordered state names and a rational rate matrix whose
/// rows sum to zero with nonnegative off-diagonal entries.
#[derive(Clone, Debug)]
pub struct CTMC {
    pub states: Vec<String>,
    pub q: RationalMatrix,
}

/// A probability distribution over the states.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub probs: Vec<Rat>,
}

/// A rational probability interval with individually open or closed ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbInterval {
    pub low: Rat,
    pub high: Rat,
    pub low_closed: bool,
    pub high_closed: bool,
}

impl ProbInterval {
    pub fn closed(low: Rat, high: Rat) -> ProbInterval {
        ProbInterval { low, high, low_closed: true, high_closed: true }
    }

    /// Nonempty and inside [0,1].
    pub fn is_valid(&self) -> bool {
        if self.low < Rat::zero() || self.high > Rat::one() {
            return false;
        }
        if self.low < self.high {
            true
        } else {
            self.low == self.high && self.low_closed && self.high_closed
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let lo_ok = if self.low_closed { x >= &self.low } else { x > &self.low };
        let hi_ok = if self.high_closed { x <= &self.high } else { x < &self.high };
        lo_ok && hi_ok
    }
}

impl fmt::Display for ProbInterval {
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

/// A symbolized CTMC `(S, Q, 𝕀)`.
#[derive(Clone, Debug)]
pub struct SymbolizedCTMC {
    pub chain: CTMC,
    pub intervals: Vec<ProbInterval>,
}

/// A symbolization atom `⟨j, I⟩`: state `j` (1-based) carries probability
/// inside `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub state_index: usize,
    pub interval: ProbInterval,
}

/// Check all model invariants; an empty list means the model is valid.
pub fn validate(model: &SymbolizedCTMC) -> Vec<String> {
    let mut diags = validate_chain(&model.chain);
    if model.intervals.is_empty() {
        diags.push("interval family is empty".into());
    }
    for (k, iv) in model.intervals.iter().enumerate() {
        if !iv.is_valid() {
            diags.push(format!("interval {} = {iv} is empty or not inside [0, 1]", k + 1));
        }
    }
    diags
}

/// Rate-matrix invariants: square, nonnegative off-diagonal, zero row
/// sums.
pub fn validate_chain(chain: &CTMC) -> Vec<String> {
    let mut diags = Vec::new();
    let d = chain.states.len();
    if chain.q.size() != d {
        diags.push(format!(
            "rate matrix is {}x{} but there are {d} states",
            chain.q.size(),
            chain.q.size()
        ));
        return diags;
    }
    for i in 0..d {
        let mut sum = Rat::zero();
        for j in 0..d {
            let e = chain.q.get(i, j);
            if i != j && e.is_negative() {
                diags.push(format!("entry ({}, {}) = {e} is negative", i + 1, j + 1));
            }
            sum += e;
        }
        if !sum.is_zero() {
            diags.push(format!("row {} sums to {sum}", i + 1));
        }
    }
    diags
}

/// Distribution invariants: entries in [0,1] summing to exactly 1.
pub fn validate_distribution(mu: &Distribution, d: usize) -> Vec<String> {
    let mut diags = Vec::new();
    if mu.probs.len() != d {
        diags.push(format!("distribution has {} entries, expected {d}", mu.probs.len()));
        return diags;
    }
    for (i, p) in mu.probs.iter().enumerate() {
        if p < &Rat::zero() || p > &Rat::one() {
            diags.push(format!("probability {} = {p} is outside [0, 1]", i + 1));
        }
    }
    let sum: Rat = mu.probs.iter().sum();
    if !sum.is_one() {
        diags.push(format!("probabilities sum to {sum}"));
    }
    diags
}

/// 𝕊(μ) = {⟨j, I⟩ : μ(j) ∈ I}, with exact rational endpoint handling.
pub fn symbolize(mu: &Distribution, intervals: &[ProbInterval]) -> Vec<Atom> {
    let mut out = Vec::new();
    for (j, p) in mu.probs.iter().enumerate() {
        for iv in intervals {
            if iv.contains(p) {
                out.push(Atom { state_index: j + 1, interval: iv.clone() });
            }
        }
    }
    out
}

/// The exact trajectory coordinate `f(t) = (μ_t)(i)` for 1-based state
/// `i`, where `μ_t` solves the master equation with `μ_0 = μ`.
///
/// Distributions evolve by the transposed generator (row sums of `Q` are
/// zero, so `1ᵀ Qᵀ = 0` preserves total mass): with `Qᵀ = P J P⁻¹` the
/// block exponential has entries `tᵐ e^{λt} / m!`, giving a PEF whose
/// exponents are eigenvalues of `Q`.
pub fn trajectory_pef(model: &CTMC, mu: &Distribution, i: usize) -> RealPEF {
    let d = model.states.len();
    assert!((1..=d).contains(&i), "state index out of range");
    let dec = jordan_decompose(&model.q.transpose());

    // v = P⁻¹ μ
    let v: Vec<AlgebraicNumber> = (0..d)
        .map(|r| {
            let mut acc = AlgebraicNumber::zero();
            for (c, p) in mu.probs.iter().enumerate() {
                acc = acc.add(&dec.p_inv[r][c].scale(p));
            }
            acc
        })
        .collect();

    // f(t) = Σ_blocks Σ_{r ≤ c} P[i][r] · t^{c-r} e^{λt}/(c-r)! · v[c]
    let mut terms: Vec<(AlgPoly, AlgebraicNumber)> = Vec::new();
    let mut base = 0usize;
    for (lam, size) in &dec.blocks {
        let mut coeffs = vec![AlgebraicNumber::zero(); *size];
        for r in base..base + size {
            for c in r..base + size {
                let m = c - r;
                let inv_fact = Rat::new(1.into(), factorial(m as u32));
                let w = dec.p[i - 1][r].mul(&v[c]).scale(&inv_fact);
                coeffs[m] = coeffs[m].add(&w);
            }
        }
        terms.push((AlgPoly::new(coeffs), lam.clone()));
        base += size;
    }
    RealPEF::new(PEF::new(terms)).expect("trajectory coordinates are real-valued")
}

/// Rigorous numeric oracle: each coordinate of `e^{Qᵀt} μ` within `ε`,
/// via exact rational scaling-and-squaring with an explicit tail bound.
/// The series length is doubled until the total bound meets `ε`.
pub fn numeric_distribution(model: &CTMC, mu: &Distribution, t: &Rat, eps: &Rat) -> Vec<Rat> {
    assert!(t >= &Rat::zero() && eps > &Rat::zero());
    let d = model.states.len();
    if t.is_zero() {
        return mu.probs.clone();
    }
    let m = model.q.transpose().scale(t);

    // scale so the series argument has 1-norm at most 1/2
    let norm = one_norm(&m);
    let mut s = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > Rat::new(1.into(), 2.into()) {
        scaled_norm /= rat_int(2);
        s += 1;
    }
    let a = m.scale(&Rat::new(1.into(), num_bigint::BigInt::one() << s));

    let mut n_terms = 8u32;
    loop {
        // tail of Σ A^k/k! beyond N with ‖A‖ ≤ 1/2: ≤ 2·(1/2)^{N+1}/(N+1)!
        let mut tail = rat_int(2) / Rat::from_integer(factorial(n_terms + 1));
        for _ in 0..=n_terms {
            tail /= rat_int(2);
        }
        // each squaring of B = e^X + E gives error ≤ δ(2 + δ), since the
        // Markov semigroup has 1-norm exactly 1
        let mut total = tail.clone();
        for _ in 0..s {
            total = &total * (rat_int(2) + &total);
        }
        if total <= *eps {
            let mut b = exp_series(&a, n_terms);
            for _ in 0..s {
                b = b.mul(&b);
            }
            return (0..d)
                .map(|i| {
                    let mut acc = Rat::zero();
                    for (j, p) in mu.probs.iter().enumerate() {
                        acc += b.get(i, j) * p;
                    }
                    acc
                })
                .collect();
        }
        n_terms *= 2;
    }
}

/// Max column absolute sum.
fn one_norm(m: &RationalMatrix) -> Rat {
    let d = m.size();
    (0..d)
        .map(|j| (0..d).map(|i| m.get(i, j).abs()).sum::<Rat>())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Truncated exponential series Σ_{k=0}^{n} A^k / k!.
fn exp_series(a: &RationalMatrix, n: u32) -> RationalMatrix {
    let d = a.size();
    let mut sum = RationalMatrix::identity(d);
    let mut term = RationalMatrix::identity(d);
    for k in 1..=n {
        term = term.mul(a).scale(&Rat::new(1.into(), k.into()));
        sum = sum.add(&term);
    }
    sum
}
