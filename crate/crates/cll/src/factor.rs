//! Factorization of rational polynomials into monic irreducible factors.
//!
//! Uses complex root isolation plus subset recombination: the exactly
//! isolated roots are refined until every coefficient of a candidate
//! factor is pinned to the unique rational with denominator dividing the
//! leading coefficient, and candidates are verified by exact division.
//! Exponential in the degree in the worst case, which is fine at the
//! degrees arising here.

use crate::croots::{isolate_complex_roots, ComplexRoot};
use crate::qpoly::QPoly;
use crate::rational::{rat_int, CBall, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Factors `f` into monic irreducible polynomials with multiplicities,
/// in some deterministic order. The constant content is dropped.
pub fn factor(f: &QPoly) -> Vec<(QPoly, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    if f.degree() == 0 {
        return vec![];
    }
    let sf = f.squarefree_part();
    let irreducibles = factor_squarefree(&sf);
    irreducibles
        .into_iter()
        .map(|p| {
            let mut mult = 0;
            let mut rest = f.clone();
            loop {
                let (q, r) = rest.divrem(&p);
                if !r.is_zero() {
                    break;
                }
                mult += 1;
                rest = q;
            }
            (p, mult)
        })
        .collect()
}

/// Factors a square-free polynomial into monic irreducibles.
pub fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    let prim = f.primitive_integer();
    if prim.degree() == 0 {
        return vec![];
    }
    if prim.degree() == 1 {
        return vec![prim.monic()];
    }
    let lc = prim.leading();
    let mut roots = isolate_complex_roots(&prim);
    // group roots into conjugation-closed units: real singletons and
    // conjugate pairs (keep the upper-half representative)
    let mut units: Vec<Vec<ComplexRoot>> = Vec::new();
    for r in roots.drain(..) {
        if r.is_real() {
            units.push(vec![r]);
        } else if r.im.sign() > 0 {
            let conj = r.conj();
            units.push(vec![r, conj]);
        }
    }

    let mut factors = Vec::new();
    let mut remaining = prim.monic();
    let mut precision = Rat::new(BigInt::one(), BigInt::one() << 40);
    'outer: while remaining.degree() > 0 {
        let n = remaining.degree();
        let sizes: Vec<usize> = units.iter().map(|u| u.len()).collect();
        for k in 1..=n / 2 {
            for mask in subsets_of_size(&sizes, k) {
                match candidate_factor(&mut units, &mask, &lc, &mut precision) {
                    Some(g) => {
                        let (q, r) = remaining.divrem(&g);
                        if r.is_zero() {
                            factors.push(g);
                            remaining = q.monic();
                            let mut idx = 0;
                            units.retain(|_| {
                                let keep = !mask.contains(&idx);
                                idx += 1;
                                keep
                            });
                            continue 'outer;
                        }
                    }
                    None => continue,
                }
            }
        }
        // no proper factor: what remains is irreducible
        factors.push(remaining.clone());
        break;
    }
    factors.sort_by_key(|p| (p.degree(), format!("{p:?}")));
    factors
}

/// All subsets of unit indices whose sizes sum to `k`.
fn subsets_of_size(sizes: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        sizes: &[usize],
        start: usize,
        left: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..sizes.len() {
            if sizes[i] <= left {
                current.push(i);
                go(sizes, i + 1, left - sizes[i], current, out);
                current.pop();
            }
        }
    }
    go(sizes, 0, k, &mut current, &mut out);
    out
}

/// Builds the monic polynomial with the chosen units as roots, with every
/// coefficient certified to be the unique rational with denominator
/// dividing `lc`. Refines the root enclosures as needed.
fn candidate_factor(
    units: &mut [Vec<ComplexRoot>],
    mask: &[usize],
    lc: &Rat,
    precision: &mut Rat,
) -> Option<QPoly> {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    loop {
        // expand prod (z - alpha) with ball coefficients
        let mut coeffs: Vec<CBall> = vec![CBall::real(Rat::one())];
        for &u in mask {
            for root in &units[u] {
                let b = root.ball();
                let mut next = vec![CBall::zero(); coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(c);
                    next[i] = next[i].sub(&c.mul(&b));
                }
                coeffs = next.into_iter().map(|c| c.round(256)).collect();
            }
        }
        let mut out = Vec::with_capacity(coeffs.len());
        let mut too_wide = false;
        for c in &coeffs {
            let scaled = c.scale(lc);
            if scaled.rad >= half {
                too_wide = true;
                break;
            }
            if scaled.im.abs() > scaled.rad {
                return None; // coefficient is certainly not real
            }
            // nearest integer to the real center; a true coefficient is
            // an integer once scaled by lc
            let m = (&scaled.re + &half).floor().to_integer();
            if (&scaled.re - Rat::from_integer(m.clone())).abs() > scaled.rad {
                return None; // the enclosure excludes every integer
            }
            out.push(Rat::from_integer(m) / lc);
        }
        if !too_wide {
            let g = QPoly::new(out);
            if g.degree() + 1 == coeffs.len() {
                return Some(g);
            }
            return None;
        }
        // refine every involved root and retry
        *precision = precision.clone() / rat_int(2);
        for &u in mask.iter() {
            for root in units[u].iter_mut() {
                root.refine_to(precision);
            }
        }
    }
}
