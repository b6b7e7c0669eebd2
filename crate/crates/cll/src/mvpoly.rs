//! Sparse multivariate polynomials over algebraic numbers.
//!
//! Used to rewrite a polynomial-exponential function as a polynomial in
//! `t` and the basis exponentials `e^{a_i t}`, where taking the
//! square-free part becomes an ordinary multivariate gcd computation.
//! Coefficients live in a field, so content computations bottom out at
//! units; gcds use a primitive pseudo-remainder sequence, one variable at
//! a time.

use crate::algebra::AlgebraicNumber;
use std::collections::BTreeMap;

/// A multivariate polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone, Debug)]
pub(crate) struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, AlgebraicNumber>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: AlgebraicNumber) -> Self {
        let mut p = MPoly::zero(nvars);
        p.insert_add(vec![0; nvars], c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &AlgebraicNumber)> {
        self.terms.iter()
    }

    pub fn insert_add(&mut self, exp: Vec<u32>, c: AlgebraicNumber) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_add(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, s: &AlgebraicNumber) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.mul(s));
        }
        out
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            out.insert_add(e2, c.scale(&crate::rational::rat_int(e[v] as i64)));
        }
        out
    }

    /// Minimum exponent of variable `v` over all terms (0 if zero poly).
    pub fn min_exp(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).min().unwrap_or(0)
    }

    /// Divide by the monomial `v^k`; all terms must have exponent >= k.
    pub fn shift_down(&self, v: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            assert!(e2[v] >= k);
            e2[v] -= k;
            out.terms.insert(e2, c.clone());
        }
        out
    }

    fn lex_leading(&self) -> Option<(&Vec<u32>, &AlgebraicNumber)> {
        self.terms.iter().next_back()
    }

    /// Scale so the lex-leading coefficient is 1; canonical up to units.
    pub fn normalize(&self) -> MPoly {
        match self.lex_leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Exact division; panics if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MPoly) -> MPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (de, dc) = {
            let (e, c) = divisor.lex_leading().unwrap();
            (e.clone(), c.clone())
        };
        let dc_inv = dc.inv();
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.lex_leading() {
            let qe: Vec<u32> = re
                .iter()
                .zip(&de)
                .map(|(a, b)| a.checked_sub(*b).expect("inexact multivariate division"))
                .collect();
            let qc = rc.mul(&dc_inv);
            let mut mono = MPoly::zero(self.nvars);
            mono.terms.insert(qe, qc);
            rem = rem.sub(&mono.mul(divisor));
            quot = quot.add(&mono);
        }
        quot
    }

    /// View as a univariate polynomial in `v`: coefficient polys by degree.
    fn as_univariate(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].insert_add(e2, c.clone());
        }
        out
    }

    /// Content in variable `v`: gcd of the `v`-coefficients.
    fn content_in(&self, v: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        for c in self.as_univariate(v) {
            if !c.is_zero() {
                g = mpoly_gcd(&g, &c);
            }
        }
        g
    }

    /// Leading coefficient as a field constant, if the polynomial is one.
    fn as_constant(&self) -> Option<&AlgebraicNumber> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&k| k == 0) {
                return Some(c);
            }
        }
        None
    }

    /// Pseudo-remainder of `self` by `other` in variable `v`.
    fn prem(&self, other: &MPoly, v: usize) -> MPoly {
        let db = other.degree_in(v);
        let ub = other.as_univariate(v);
        let lb = ub.last().unwrap().clone();
        // When the leading coefficient is a field constant, true division
        // applies and avoids the coefficient growth of pseudo-division.
        let lb_inv = lb.as_constant().map(|c| c.inv());
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let ur = r.as_univariate(v);
            let lr = ur.last().unwrap().clone();
            // r <- lb*r - lr*x^(dr-db)*b  kills the leading term in v
            let mut shift = MPoly::zero(self.nvars);
            let mut e = vec![0u32; self.nvars];
            e[v] = dr - db;
            shift.terms.insert(e, AlgebraicNumber::one());
            r = match &lb_inv {
                Some(inv) => r.sub(&lr.scale(inv).mul(&shift).mul(other)),
                None => r.mul(&lb).sub(&lr.mul(&shift).mul(other)),
            };
            if r.degree_in(v) == dr && !r.is_zero() {
                // can only happen when the subtraction failed to cancel,
                // which contradicts the construction
                unreachable!("pseudo-division did not reduce the degree");
            }
        }
        r
    }
}

/// Multivariate gcd, normalized so the lex-leading coefficient is 1.
pub(crate) fn mpoly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.normalize();
    }
    if b.is_zero() {
        return a.normalize();
    }
    let nvars = a.nvars();
    // main variable: the highest one appearing in either operand
    let v = (0..nvars).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0);
    let v = match v {
        // both are field constants
        None => return MPoly::constant(nvars, AlgebraicNumber::one()),
        Some(v) => v,
    };
    if a.degree_in(v) == 0 {
        return mpoly_gcd(a, &b.content_in(v));
    }
    if b.degree_in(v) == 0 {
        return mpoly_gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = mpoly_gcd(&ca, &cb);
    let mut pa = a.exact_div(&ca).normalize();
    let mut pb = b.exact_div(&cb).normalize();
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = pa.prem(&pb, v);
        if r.is_zero() {
            let pp = pb.exact_div(&pb.content_in(v));
            return c.mul(&pp).normalize();
        }
        if r.degree_in(v) == 0 {
            // coprime in v; only the content survives
            return c.normalize();
        }
        pa = pb;
        // Remove content and rescale to monic; units keep the chain exact
        // while bounding coefficient growth.
        pb = r.exact_div(&r.content_in(v)).normalize();
    }
}

/// Square-free part: the product of the distinct irreducible factors.
pub(crate) fn mpoly_squarefree_part(p: &MPoly) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut g = MPoly::zero(p.nvars());
    for v in 0..p.nvars() {
        if p.degree_in(v) > 0 {
            g = mpoly_gcd(&g, &p.partial(v));
        }
    }
    if g.is_zero() {
        // constant polynomial
        return p.clone();
    }
    let g = mpoly_gcd(&g, p);
    p.exact_div(&g)
}
