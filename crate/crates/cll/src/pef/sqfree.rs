//! Square-free reduction of polynomial-exponential functions.
//!
//! The function is rewritten as a Laurent polynomial in `t` and the basis
//! exponentials `e^{a_i t}` over an integral basis of its exponents;
//! negative exponents are cleared by an exponential monomial (a nowhere
//! vanishing unit, so the real-root set is untouched). The multivariate
//! square-free part then has the same root set but only simple roots —
//! except possibly `t = 0`, which the isolation window handling
//! special-cases.

use super::{PefError, PEF};
use crate::algebra::{AlgPoly, AlgebraicNumber};
use crate::mvpoly::{mpoly_squarefree_part, MPoly};
use crate::pef::integral_basis;
use crate::qpoly::QPoly;
use crate::rational::{rat, rat_int};
use num_traits::ToPrimitive;

/// A square-free PEF with the same real-root set as `f`.
///
/// If `f` is real-valued the result is normalized (by a nonvanishing
/// unit `c·e^{νt}`) to be real-valued as well.
pub fn square_free_part(f: &PEF) -> Result<PEF, PefError> {
    if f.is_zero() {
        return Err(PefError::DegenerateInput);
    }
    let lams: Vec<AlgebraicNumber> = f.power().into_iter().cloned().collect();
    let (basis, coords) = integral_basis(&lams);
    let n = basis.len();

    // offsets clearing negative exponents per basis direction
    let mut offset = vec![0i64; n];
    for row in &coords {
        for (i, c) in row.iter().enumerate() {
            let c = c.to_i64().expect("exponent coordinate overflow");
            offset[i] = offset[i].max(-c);
        }
    }

    // rewrite: variable 0 is t, variables 1..=n are e^{a_i t}
    let mut q = MPoly::zero(n + 1);
    for ((p, _), row) in f.terms().iter().zip(&coords) {
        for (j, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0u32; n + 1];
            e[0] = j as u32;
            for (i, ci) in row.iter().enumerate() {
                let ci = ci.to_i64().unwrap();
                e[i + 1] = (ci + offset[i]) as u32;
            }
            q.insert_add(e, c.clone());
        }
    }

    let mut s = mpoly_squarefree_part(&q);
    // strip the exponential monomial content (units); keep powers of t
    for v in 1..=n {
        let m = s.min_exp(v);
        if m > 0 {
            s = s.shift_down(v, m);
        }
    }

    // map back to a PEF, grouping monomials by their exponential part
    let mut groups: Vec<(Vec<u32>, Vec<(usize, AlgebraicNumber)>)> = Vec::new();
    for (e, c) in s.terms() {
        let key: Vec<u32> = e[1..].to_vec();
        let deg = e[0] as usize;
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, list)) => list.push((deg, c.clone())),
            None => groups.push((key, vec![(deg, c.clone())])),
        }
    }
    let mut terms = Vec::new();
    for (key, list) in groups {
        let mut lam = AlgebraicNumber::zero();
        for (i, e) in key.iter().enumerate() {
            if *e != 0 {
                lam = lam.add(&basis[i].scale(&rat_int(*e as i64)));
            }
        }
        let deg = list.iter().map(|(d, _)| *d).max().unwrap();
        let mut cs = vec![AlgebraicNumber::zero(); deg + 1];
        for (d, c) in list {
            cs[d] = cs[d].add(&c);
        }
        terms.push((AlgPoly::new(cs), lam));
    }
    let s = PEF::new(terms);

    if f.is_real() && !s.is_real() {
        return realify(&s);
    }
    Ok(s)
}

/// Normalize a PEF that is real up to a unit factor: find `w·e^{μt}` with
/// `conj(S) = w e^{μt} S`, then multiply by a unit making the result
/// conjugation-symmetric.
fn realify(s: &PEF) -> Result<PEF, PefError> {
    let g = s.conj();
    let st = s.terms();
    let gt = g.terms();
    if st.len() != gt.len() {
        return Err(PefError::Unsupported(
            "square-free part cannot be normalized to a real function".into(),
        ));
    }
    // sorted term order is preserved by the uniform exponent shift μ
    let mu = gt[0].1.sub(&st[0].1);
    let w = gt[0].0.leading().div(&st[0].0.leading());
    let candidate = s.scale(&w).mul_exp(&mu);
    if candidate.sub(&g) != PEF::zero() {
        return Err(PefError::Unsupported(
            "square-free part cannot be normalized to a real function".into(),
        ));
    }
    let vs = if w.add(&AlgebraicNumber::one()).is_zero() {
        // w = -1: use i(w - 1) = -2i
        let i = AlgebraicNumber::roots_of(&QPoly::new(vec![
            rat_int(1),
            rat_int(0),
            rat_int(1),
        ]))
        .into_iter()
        .find(|r| r.im().sign() > 0)
        .unwrap();
        i.mul(&w.sub(&AlgebraicNumber::one()))
    } else {
        AlgebraicNumber::one().add(&w)
    };
    let nu = mu.scale(&rat(1, 2));
    let out = s.scale(&vs).mul_exp(&nu);
    if !out.is_real() {
        return Err(PefError::Unsupported(
            "square-free part cannot be normalized to a real function".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::rational::{rat_to_f64, Rat};
    use num_traits::One;

    fn alg(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_integer(n)
    }

    fn unit_i() -> AlgebraicNumber {
        AlgebraicNumber::roots_of(&QPoly::new(vec![rat_int(1), rat_int(0), rat_int(1)]))
            .into_iter()
            .find(|r| r.im().sign() > 0)
            .unwrap()
    }

    /// Same numeric root set on a grid: sign changes must coincide.
    fn same_roots_on_grid(f: &PEF, g: &PEF, lo: f64, hi: f64) {
        let n = 2000;
        for k in 0..n {
            let t0 = lo + (hi - lo) * (k as f64) / (n as f64);
            let t1 = lo + (hi - lo) * ((k + 1) as f64) / (n as f64);
            let cf = f.eval_f64(t0) * f.eval_f64(t1) < 0.0;
            let cg = g.eval_f64(t0) * g.eval_f64(t1) < 0.0;
            assert_eq!(cf, cg, "sign-change mismatch near t = {t0}");
        }
    }

    #[test]
    fn exp_minus_two_is_already_square_free() {
        let f = PEF::term(AlgPoly::one(), alg(1)).sub(&PEF::constant_rat(rat_int(2)));
        let s = square_free_part(&f).unwrap();
        same_roots_on_grid(&f, &s, 0.0, 2.0);
        assert_eq!(s.terms().len(), 2);
    }

    #[test]
    fn squared_exponential_drops_to_first_order() {
        // (e^t - 1)^2 = e^{2t} - 2e^t + 1: square-free part vanishes to
        // first order at 0
        let base = PEF::term(AlgPoly::one(), alg(1)).sub(&PEF::constant_rat(Rat::one()));
        let f = base.mul(&base);
        let s = square_free_part(&f).unwrap();
        assert_eq!(s.sign_at(&Rat::zero()), 0);
        // derivative of the square vanishes at 0, of the reduction not
        assert_eq!(f.derivative().sign_at(&Rat::zero()), 0);
        assert_ne!(s.derivative().sign_at(&Rat::zero()), 0);
        // away from the (even-order) root at 0 the sign changes coincide
        same_roots_on_grid(&f, &s, 0.1, 2.0);
        same_roots_on_grid(&f, &s, -1.0, -0.1);
    }

    #[test]
    fn squared_monomial_exponential() {
        // (t e^t)^2 = t^2 e^{2t}: square-free part is t e^{ct}
        let f0 = PEF::term(AlgPoly::new(vec![alg(0), alg(1)]), alg(1));
        let f = f0.mul(&f0);
        let s = square_free_part(&f).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].0.degree(), 1);
        assert_eq!(s.sign_at(&Rat::zero()), 0);
    }

    #[test]
    fn complex_pair_square() {
        // (e^{it} + e^{-it})^2 has double roots; reduction must be real
        // with simple roots at the same places
        let i = unit_i();
        let c = PEF::new(vec![(AlgPoly::one(), i.clone()), (AlgPoly::one(), i.neg())]);
        let f = c.mul(&c);
        let s = square_free_part(&f).unwrap();
        assert!(s.is_real(), "reduction must be conjugation-symmetric");
        // at pi/2 both vanish; nearby, f >= 0 while s changes sign
        let near_half_pi = rat(157079632679, 100000000000);
        let left = &near_half_pi - &rat(1, 10);
        let right = &near_half_pi + &rat(1, 10);
        assert!(f.eval_f64(rat_to_f64(&left)) > 0.0);
        assert!(f.eval_f64(rat_to_f64(&right)) > 0.0);
        assert!(
            s.eval_f64(rat_to_f64(&left)) * s.eval_f64(rat_to_f64(&right)) < 0.0,
            "square-free part must change sign across the root"
        );
    }

    #[test]
    fn zero_input_is_degenerate() {
        assert!(matches!(
            square_free_part(&PEF::zero()),
            Err(PefError::DegenerateInput)
        ));
    }
}
