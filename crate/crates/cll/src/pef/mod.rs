//! Polynomial-exponential functions (PEFs) over algebraic numbers.
//!
//! A PEF is a finite sum `f(t) = Σ_k f_k(t) e^{λ_k t}` with algebraic
//! polynomial coefficients `f_k` and pairwise distinct algebraic
//! exponents `λ_k`. The module provides exact construction and calculus,
//! rigorous evaluation, exact sign determination at rational points (via
//! the Lindemann–Weierstrass theorem), existence checking on an interval,
//! square-free reduction, real-root isolation on a bounded window, and
//! exact comparison of symbolic time instants.

mod basis;
mod exist;
mod isolate;
mod sqfree;
mod symtime;

pub use basis::integral_basis;
pub use exist::{exist_root, exist_root_traced, ExistOutcome, ExistStep, ExistTrace};
pub use isolate::{isolate_roots, refine_isolation};
pub use sqfree::square_free_part;
pub use symtime::{compare_times, sign_at_symbolic, SymbolicTime, TimeValue};

use crate::algebra::{AlgPoly, AlgebraicNumber, RealAlg};
use crate::rational::{exp_upper, pow2_inv, rat_int, rat_to_f64, CBall, Rat};
use num_traits::{One, Signed, Zero};

/// Errors and diagnostics raised by PEF algorithms.
#[derive(Debug, Clone, thiserror::Error)]
pub enum PefError {
    #[error("the function is identically zero")]
    DegenerateInput,
    #[error("window endpoint {0} is a root of the function")]
    EndpointRoot(String),
    #[error("existence check exhausted its refinement budget: {0}")]
    Undecided(String),
    #[error("unsupported structure: {0}")]
    Unsupported(String),
}

/// An open rational interval isolating exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub low: Rat,
    pub high: Rat,
}

impl IsolatingInterval {
    pub fn new(low: Rat, high: Rat) -> Self {
        assert!(low < high, "degenerate isolating interval");
        IsolatingInterval { low, high }
    }

    pub fn width(&self) -> Rat {
        &self.high - &self.low
    }

    pub fn midpoint(&self) -> Rat {
        (&self.low + &self.high) / rat_int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.low < *x && *x < self.high
    }
}

/// A polynomial-exponential function in normalized form: no zero
/// coefficient polynomials, pairwise distinct exponents, terms sorted by
/// exponent (real part, then imaginary part).
#[derive(Clone, Debug)]
pub struct PEF {
    terms: Vec<(AlgPoly, AlgebraicNumber)>,
}

fn exp_key(e: &AlgebraicNumber) -> (RealAlg, RealAlg) {
    (e.re(), e.im())
}

impl PEF {
    pub fn new(raw: Vec<(AlgPoly, AlgebraicNumber)>) -> Self {
        let mut merged: Vec<(AlgPoly, AlgebraicNumber)> = Vec::new();
        for (p, lam) in raw {
            if p.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(_, mu)| mu.sub(&lam).is_zero()) {
                Some((q, _)) => *q = q.add(&p),
                None => merged.push((p, lam)),
            }
        }
        merged.retain(|(p, _)| !p.is_zero());
        let mut keyed: Vec<((RealAlg, RealAlg), (AlgPoly, AlgebraicNumber))> = merged
            .into_iter()
            .map(|term| (exp_key(&term.1), term))
            .collect();
        keyed.sort_by(|a, b| {
            a.0 .0
                .cmp_alg(&b.0 .0)
                .then_with(|| a.0 .1.cmp_alg(&b.0 .1))
        });
        PEF { terms: keyed.into_iter().map(|(_, t)| t).collect() }
    }

    pub fn zero() -> Self {
        PEF { terms: vec![] }
    }

    /// The constant function `c` (single term with exponent 0).
    pub fn constant(c: AlgebraicNumber) -> Self {
        PEF::new(vec![(AlgPoly::constant(c), AlgebraicNumber::zero())])
    }

    pub fn constant_rat(c: Rat) -> Self {
        PEF::constant(AlgebraicNumber::from_rational(c))
    }

    /// The single term `p(t) e^{λt}`.
    pub fn term(p: AlgPoly, lam: AlgebraicNumber) -> Self {
        PEF::new(vec![(p, lam)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(AlgPoly, AlgebraicNumber)] {
        &self.terms
    }

    /// The set of exponents (`Power(f)` in the isolation procedure).
    pub fn power(&self) -> Vec<&AlgebraicNumber> {
        self.terms.iter().map(|(_, lam)| lam).collect()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(p, _)| p.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PEF) -> PEF {
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        PEF::new(raw)
    }

    pub fn sub(&self, other: &PEF) -> PEF {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PEF {
        PEF { terms: self.terms.iter().map(|(p, l)| (p.neg(), l.clone())).collect() }
    }

    pub fn mul(&self, other: &PEF) -> PEF {
        let mut raw = Vec::new();
        for (p, lp) in &self.terms {
            for (q, lq) in &other.terms {
                raw.push((p.mul(q), lp.add(lq)));
            }
        }
        PEF::new(raw)
    }

    pub fn scale(&self, s: &AlgebraicNumber) -> PEF {
        PEF::new(self.terms.iter().map(|(p, l)| (p.scale(s), l.clone())).collect())
    }

    /// Multiply by the unit `e^{νt}`: shifts every exponent by `ν`.
    /// Preserves the real-root set.
    pub fn mul_exp(&self, nu: &AlgebraicNumber) -> PEF {
        PEF::new(self.terms.iter().map(|(p, l)| (p.clone(), l.add(nu))).collect())
    }

    pub fn derivative(&self) -> PEF {
        PEF::new(
            self.terms
                .iter()
                .map(|(p, l)| (p.derivative().add(&p.scale(l)), l.clone()))
                .collect(),
        )
    }

    /// Complex conjugate function: conjugate coefficients and exponents.
    pub fn conj(&self) -> PEF {
        PEF::new(self.terms.iter().map(|(p, l)| (p.conj(), l.conj())).collect())
    }

    /// True when `f(t)` is real for all real `t` (conjugation symmetry).
    pub fn is_real(&self) -> bool {
        self.sub(&self.conj()).is_zero()
    }

    /// Rigorous complex enclosure of `f(t)` at exact rational `t`.
    pub fn eval_ball(&self, t: &Rat, bits: u32) -> CBall {
        let eps = pow2_inv(bits);
        let mut acc = CBall::zero();
        for (p, lam) in &self.terms {
            let c = p.eval_rat(t).ball(&eps);
            let e = lam.scale(t).ball(&eps).exp(bits);
            acc = acc.add(&c.mul(&e));
        }
        acc
    }

    /// Rigorous enclosure of `f` over the whole interval `[lo, hi]`.
    pub fn eval_ball_range(&self, lo: &Rat, hi: &Rat, bits: u32) -> CBall {
        let eps = pow2_inv(bits);
        let mid = (lo + hi) / rat_int(2);
        let rad = (hi - lo) / rat_int(2);
        let tb = CBall::exact(mid, Rat::zero());
        let tb = CBall { re: tb.re, im: tb.im, rad };
        let mut acc = CBall::zero();
        for (p, lam) in &self.terms {
            let c = p.eval_cball(&tb, &eps);
            let e = lam.ball(&eps).mul(&tb).exp(bits);
            acc = acc.add(&c.mul(&e));
        }
        acc
    }

    /// `q` with `|f(t) − q| < ε`; the function must be real-valued.
    pub fn eval_approx(&self, t: &Rat, eps: &Rat) -> Rat {
        assert!(eps > &Rat::zero());
        let mut bits = 64u32;
        loop {
            let b = self.eval_ball(t, bits);
            if b.rad < *eps {
                return b.re;
            }
            bits *= 2;
        }
    }

    /// Exact sign of `f(t)` at rational `t`; the function must be
    /// real-valued.
    ///
    /// Zero detection is exact: at `t = 0` the value `Σ f_k(0)` is
    /// algebraic; at rational `t ≠ 0` the Lindemann–Weierstrass theorem
    /// forces `f(t) = 0` exactly when every coefficient polynomial
    /// vanishes at `t` (the exponents `λ_k t` are distinct algebraic
    /// numbers). Nonzero values are signed by ball refinement.
    pub fn sign_at(&self, t: &Rat) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if t.is_zero() {
            let mut v = AlgebraicNumber::zero();
            for (p, _) in &self.terms {
                v = v.add(&p.coeff(0));
            }
            return if v.is_zero() { 0 } else { v.sign_real() };
        }
        if self.terms.iter().all(|(p, _)| p.eval_rat(t).is_zero()) {
            return 0;
        }
        let mut bits = 64u32;
        loop {
            let b = self.eval_ball(t, bits);
            if b.re.abs() > b.rad {
                return if b.re.is_positive() { 1 } else { -1 };
            }
            bits *= 2;
        }
    }

    /// Rational upper bound on `sup_{t∈[a,b]} |f(t)|`.
    pub fn magnitude_bound(&self, a: &Rat, b: &Rat) -> Rat {
        assert!(a <= b);
        let eps = Rat::new(1.into(), 16.into());
        let tmax = a.abs().max(b.abs());
        let mut total = Rat::zero();
        for (p, lam) in &self.terms {
            let mut cb = Rat::zero();
            let mut pw = Rat::one();
            for c in p.coeffs() {
                cb += c.ball(&eps).mag_upper() * &pw;
                pw *= &tmax;
            }
            let lb = lam.ball(&eps);
            let re_lo = &lb.re - &lb.rad;
            let re_hi = &lb.re + &lb.rad;
            let corners = [&re_lo * a, &re_lo * b, &re_hi * a, &re_hi * b];
            let m = corners.iter().cloned().reduce(|x, y| x.max(y)).unwrap();
            total += cb * exp_upper(&m);
        }
        total
    }

    /// Floating-point evaluation for diagnostics only.
    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (p, lam) in &self.terms {
            let (lr, li) = lam.to_f64_pair();
            let mut cr = 0.0;
            let mut ci = 0.0;
            for c in p.coeffs().iter().rev() {
                let (a, b) = c.to_f64_pair();
                let nr = cr * t + a;
                let ni = ci * t + b;
                cr = nr;
                ci = ni;
            }
            let m = (lr * t).exp();
            let (s, c) = (li * t).sin_cos();
            acc += m * (cr * c - ci * s);
        }
        acc
    }
}

impl PartialEq for PEF {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl std::fmt::Display for PEF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, lam)| {
                let (lr, li) = lam.to_f64_pair();
                let cs: Vec<String> = p
                    .coeffs()
                    .iter()
                    .map(|c| {
                        let (a, b) = c.to_f64_pair();
                        if b.abs() < 1e-12 {
                            format!("{a:.6}")
                        } else {
                            format!("({a:.6}{b:+.6}i)")
                        }
                    })
                    .collect();
                format!("poly[{}]·e^(({lr:.6}{li:+.6}i)t)", cs.join(", "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A PEF that is real-valued on the real line; checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPEF {
    inner: PEF,
}

impl RealPEF {
    pub fn new(f: PEF) -> Result<RealPEF, PefError> {
        if !f.is_real() {
            return Err(PefError::Unsupported(
                "function is not conjugation-symmetric (not real-valued)".into(),
            ));
        }
        Ok(RealPEF { inner: f })
    }

    /// The zero function is real; convenience constructors.
    pub fn zero() -> RealPEF {
        RealPEF { inner: PEF::zero() }
    }

    pub fn constant_rat(c: Rat) -> RealPEF {
        RealPEF { inner: PEF::constant_rat(c) }
    }

    pub fn pef(&self) -> &PEF {
        &self.inner
    }

    pub fn into_pef(self) -> PEF {
        self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn add(&self, other: &RealPEF) -> RealPEF {
        RealPEF { inner: self.inner.add(&other.inner) }
    }

    pub fn sub(&self, other: &RealPEF) -> RealPEF {
        RealPEF { inner: self.inner.sub(&other.inner) }
    }

    pub fn mul(&self, other: &RealPEF) -> RealPEF {
        RealPEF { inner: self.inner.mul(&other.inner) }
    }

    pub fn neg(&self) -> RealPEF {
        RealPEF { inner: self.inner.neg() }
    }

    pub fn derivative(&self) -> RealPEF {
        RealPEF { inner: self.inner.derivative() }
    }

    pub fn sub_const(&self, c: &Rat) -> RealPEF {
        RealPEF { inner: self.inner.sub(&PEF::constant_rat(c.clone())) }
    }
}

/// `t ↦ base(t + shift)`: evaluation-time shifting keeps coefficients
/// algebraic even though re-expanding `e^{λ(t+g)}` would not.
#[derive(Clone, Debug)]
pub struct ShiftedPEF {
    pub base: RealPEF,
    pub shift: Rat,
}

impl ShiftedPEF {
    pub fn new(base: RealPEF, shift: Rat) -> Self {
        ShiftedPEF { base, shift }
    }
}

/// An exactly evaluable real function on which Algorithm-style existence
/// checking can run: exact signs at rationals, rigorous approximation,
/// and a Lipschitz over-approximation on bounded windows.
pub trait RealFunction {
    fn sign_at(&self, t: &Rat) -> i32;
    fn eval_approx(&self, t: &Rat, eps: &Rat) -> Rat;
    fn lipschitz_bound(&self, a: &Rat, b: &Rat) -> Rat;
}

impl RealFunction for RealPEF {
    fn sign_at(&self, t: &Rat) -> i32 {
        self.inner.sign_at(t)
    }

    fn eval_approx(&self, t: &Rat, eps: &Rat) -> Rat {
        self.inner.eval_approx(t, eps)
    }

    fn lipschitz_bound(&self, a: &Rat, b: &Rat) -> Rat {
        self.inner.derivative().magnitude_bound(a, b)
    }
}

impl RealFunction for ShiftedPEF {
    fn sign_at(&self, t: &Rat) -> i32 {
        self.base.pef().sign_at(&(t + &self.shift))
    }

    fn eval_approx(&self, t: &Rat, eps: &Rat) -> Rat {
        self.base.pef().eval_approx(&(t + &self.shift), eps)
    }

    fn lipschitz_bound(&self, a: &Rat, b: &Rat) -> Rat {
        self.base.lipschitz_bound(&(a + &self.shift), &(b + &self.shift))
    }
}

/// Convenience: `f` with all terms printed through `Display` and an f64
/// rendering of a rational, for diagnostics.
pub(crate) fn fmt_rat(x: &Rat) -> String {
    format!("{}", rat_to_f64(x))
}
