//! Exact rational scalars and rigorous rational ball arithmetic.
//!
//! Everything on the exact path of the checker is built on top of
//! arbitrary-precision rationals. Balls (center + error radius) are used
//! wherever a value only needs to be known to a finite, controllable
//! precision, e.g. when evaluating exponentials.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses "3/40", "-7", "0.125" or "1e-3" style decimal strings into an
/// exact rational. Decimals convert exactly (no binary floating point).
pub fn parse_rational(text: &str) -> Result<Rat, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty rational literal".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    // decimal notation, with optional exponent
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|err| format!("bad exponent {e:?}: {err}"))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!(
        "{}{}",
        if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        },
        frac_part
    );
    let n = BigInt::from_str(&digits).map_err(|e| format!("bad number {s:?}: {e}"))?;
    let shift = frac_part.len() as i64 - exp;
    let base = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::new(n, base.pow(shift as u32))
    } else {
        BigRational::from_integer(n * base.pow((-shift) as u32))
    })
}

/// Renders a rational as `p/q` (or just `p` for integers).
pub fn format_rational(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back through a dyadic rounding for extreme exponents
        let (r, _) = dyadic_round(x, 80);
        r.to_f64().unwrap_or(f64::NAN)
    })
}

/// Rounds `x` to a dyadic rational with denominator `2^bits`, returning the
/// rounded value and a bound on the absolute rounding error.
pub fn dyadic_round(x: &Rat, bits: u32) -> (Rat, Rat) {
    if x.denom().bits() <= bits as u64 {
        return (x.clone(), Rat::zero());
    }
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let rounded = BigRational::new(floor, scale.clone());
    let err = BigRational::new(BigInt::one(), scale);
    (rounded, err)
}

/// 2^-bits as a rational.
pub fn pow2_inv(bits: u32) -> Rat {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Rigorous bounds `lo <= e^x <= hi` for rational `x`.
pub fn exp_bounds(x: &Rat) -> (Rat, Rat) {
    if x.is_zero() {
        return (Rat::one(), Rat::one());
    }
    // e^x = (e^{x/n})^n with |x/n| <= 1/2
    let n = (x.abs() * rat_int(2)).ceil().to_integer().max(BigInt::one());
    let n_u = n.to_u32().unwrap_or(u32::MAX);
    let y = x / BigRational::from_integer(n);
    // 14 series terms: tail for |y| <= 1/2 is below 2^-46
    let mut term = Rat::one();
    let mut sum = Rat::one();
    for k in 1..=14u32 {
        term = &term * &y / rat_int(k as i64);
        sum += &term;
    }
    // |tail| <= |y|^15/15! * 1/(1 - |y|/16) <= 2 * |y|^15 / 15!
    let y_abs = y.abs();
    let mut tail = rat_int(2) / BigRational::from_integer(factorial(15));
    for _ in 0..15 {
        tail = tail * &y_abs;
    }
    let lo1 = (&sum - &tail).max(Rat::zero());
    let hi1 = &sum + &tail;
    let mut lo = Rat::one();
    let mut hi = Rat::one();
    for _ in 0..n_u {
        lo = lo * &lo1;
        hi = hi * &hi1;
        // keep the numbers from blowing up; widen outward
        lo = dyadic_floor(&lo, 96);
        hi = dyadic_ceil(&hi, 96);
    }
    (lo.max(Rat::zero()), hi)
}

pub fn exp_upper(x: &Rat) -> Rat {
    exp_bounds(x).1
}

fn dyadic_floor(x: &Rat, bits: u32) -> Rat {
    if x.denom().bits() <= bits as u64 {
        return x.clone();
    }
    let scale = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(scale.clone())).floor().to_integer(), scale)
}

fn dyadic_ceil(x: &Rat, bits: u32) -> Rat {
    if x.denom().bits() <= bits as u64 {
        return x.clone();
    }
    let scale = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(scale.clone())).ceil().to_integer(), scale)
}

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Complex rational ball: all complex numbers within `rad` of `re + im*i`.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Rat,
    pub im: Rat,
    pub rad: Rat,
}

impl CBall {
    pub fn exact(re: Rat, im: Rat) -> Self {
        CBall { re, im, rad: Rat::zero() }
    }

    pub fn real(re: Rat) -> Self {
        CBall::exact(re, Rat::zero())
    }

    pub fn zero() -> Self {
        CBall::real(Rat::zero())
    }

    /// Upper bound on the magnitude of any point in the ball.
    pub fn mag_upper(&self) -> Rat {
        self.re.abs() + self.im.abs() + &self.rad
    }

    /// True if the ball certainly contains 0.
    pub fn contains_zero(&self) -> bool {
        &self.re * &self.re + &self.im * &self.im <= &self.rad * &self.rad
    }

    /// True if the ball certainly excludes 0 (uses |re|+|im| >= |z|... via
    /// the 1-norm lower bound |z| >= max(|re|,|im|)).
    pub fn excludes_zero(&self) -> bool {
        self.re.abs().max(self.im.abs()) > self.rad
    }

    pub fn add(&self, other: &CBall) -> CBall {
        CBall {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rad: &self.rad + &other.rad,
        }
    }

    pub fn sub(&self, other: &CBall) -> CBall {
        CBall {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            rad: &self.rad + &other.rad,
        }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: -self.re.clone(), im: -self.im.clone(), rad: self.rad.clone() }
    }

    pub fn mul(&self, other: &CBall) -> CBall {
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        let m1 = self.re.abs() + self.im.abs();
        let m2 = other.re.abs() + other.im.abs();
        let rad = &m1 * &other.rad + &m2 * &self.rad + &self.rad * &other.rad;
        CBall { re, im, rad }
    }

    pub fn scale(&self, s: &Rat) -> CBall {
        CBall { re: &self.re * s, im: &self.im * s, rad: self.rad.abs() * s.abs() }
    }

    /// Rounds the center to `bits` dyadic bits, folding the error into rad.
    pub fn round(&self, bits: u32) -> CBall {
        let (re, e1) = dyadic_round(&self.re, bits);
        let (im, e2) = dyadic_round(&self.im, bits);
        let (rad, e3) = dyadic_round(&self.rad, bits);
        CBall { re, im, rad: rad + e1 + e2 + e3 + pow2_inv(bits) }
    }

    /// Rigorous enclosure of `e^z` over the ball.
    pub fn exp(&self, bits: u32) -> CBall {
        // scale so the series argument is small
        let mag = self.re.abs() + self.im.abs();
        let mut n: u32 = 0;
        let mut half = mag.clone();
        while half > rat(1, 2) {
            half = half / rat_int(2);
            n += 1;
        }
        let scale = BigRational::new(BigInt::one(), BigInt::one() << n);
        let w_re = &self.re * &scale;
        let w_im = &self.im * &scale;
        // round the argument once so series multiplications stay dyadic
        let w = CBall::exact(w_re, w_im).round(bits + 16);
        // series with 16 terms; |w| <= 1/2 so tail <= 2*|w|^17/17!
        let mut sum = CBall::real(Rat::one());
        let mut term = CBall::real(Rat::one());
        for k in 1..=16u32 {
            term = term.mul(&w).scale(&(Rat::one() / rat_int(k as i64)));
            term = term.round(bits + 16);
            sum = sum.add(&term);
        }
        let mut tail = rat_int(2) / BigRational::from_integer(factorial(17));
        let w_mag = w.mag_upper();
        for _ in 0..17 {
            tail = tail * &w_mag;
        }
        sum.rad += tail;
        // square n times
        let mut acc = sum;
        for _ in 0..n {
            acc = acc.mul(&acc).round(bits + 16);
        }
        // account for the ball radius of the argument:
        // |e^z - e^c| <= rad * e^{Re c + rad}
        if !self.rad.is_zero() {
            let bound = exp_upper(&(&self.re + &self.rad));
            acc.rad += &self.rad * bound;
        }
        acc.round(bits)
    }
}

/// Sign of a big integer as -1, 0, 1.
pub fn bigint_sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn rat_sign(x: &Rat) -> i32 {
    bigint_sign(x.numer())
}

/// lcm of denominators of a slice of rationals.
pub fn denominator_lcm(xs: &[Rat]) -> BigInt {
    let mut acc = BigInt::one();
    for x in xs {
        acc = acc.lcm(x.denom());
    }
    acc
}
