//! Capped-precision p-adic numbers.
//!
//! A nonzero value is stored as `p^v * u` with `u` a unit known modulo
//! `p^r`; `r` is the relative precision. Zero is stored with an absolute
//! precision only: it means "divisible by `p^a`". Every operation returns the
//! precision its operands justify, so cancellation and division by `p` show
//! up as fewer digits rather than as silently wrong ones.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a unit at p = {1}")]
    NotAUnit(String, u64),
    #[error("{0} is not a square modulo {1}")]
    NonResidue(i64, u64),
    #[error("p = {1} divides {0}")]
    Ramified(i64, u64),
    #[error("seed {0} is not a square root of {1} modulo {2}")]
    SeedNotRoot(u64, i64, u64),
    #[error("division by a p-adic zero")]
    DivisionByZero,
    #[error("no precision left")]
    PrecisionExhausted,
    #[error("p = {0} must be an odd prime")]
    BadPrime(u64),
}

pub type Result<T> = std::result::Result<T, PadicError>;

/// `p^k` as a big integer.
pub fn pow_p(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Valuation of a nonzero big integer, plus the cofactor.
pub(crate) fn split_valuation(p: u64, x: &BigUint) -> (u32, BigUint) {
    debug_assert!(!x.is_zero());
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return (v, y);
        }
        y = q;
        v += 1;
    }
}

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let mi = BigInt::from_biguint(Sign::Plus, m.clone());
    x.mod_floor(&mi).to_biguint().unwrap()
}

/// Result of comparing two p-adic numbers: whether they agree, and modulo
/// which power of `p` the comparison was made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    pub equal: bool,
    pub precision: i64,
}

#[derive(Clone, Debug)]
pub struct PadicNumber {
    p: u64,
    // None means zero.
    val: Option<i64>,
    unit: BigUint,
    // Absolute precision: the value is known modulo p^abs.
    abs: i64,
}

impl PadicNumber {
    /// The zero known modulo `p^abs`.
    pub fn zero(p: u64, abs: i64) -> Self {
        PadicNumber { p, val: None, unit: BigUint::zero(), abs }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_int(p, 1, prec)
    }

    /// Builds `p^val * unit` with `unit` reduced modulo `p^rel`.
    /// `unit` must be prime to `p` and `rel` positive.
    pub fn from_parts(p: u64, val: i64, unit: BigUint, rel: u32) -> Self {
        assert!(rel > 0, "relative precision must be positive");
        let unit = unit % pow_p(p, rel);
        assert!(!(&unit % p).is_zero(), "unit part divisible by p");
        PadicNumber { p, val: Some(val), unit, abs: val + rel as i64 }
    }

    /// An integer with `prec` digits of relative precision. Zero gets
    /// absolute precision `prec`.
    pub fn from_int(p: u64, n: i64, prec: u32) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: u32) -> Self {
        if n.is_zero() {
            return Self::zero(p, prec as i64);
        }
        let (v, u) = split_valuation(p, n.magnitude());
        let m = pow_p(p, prec);
        let u = if n.is_negative() {
            let r = &u % &m;
            (&m - r) % &m
        } else {
            u % &m
        };
        PadicNumber { p, val: Some(v as i64), unit: u, abs: v as i64 + prec as i64 }
    }

    /// A rational with `prec` digits of relative precision.
    pub fn from_rational(p: u64, q: &BigRational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero(p, prec as i64);
        }
        let (vn, un) = split_valuation(p, q.numer().magnitude());
        let (vd, ud) = split_valuation(p, q.denom().magnitude());
        let m = pow_p(p, prec);
        let inv = ud.modinv(&m).expect("denominator unit");
        let mut u = (un % &m) * inv % &m;
        if q.is_negative() {
            u = (&m - u) % &m;
        }
        let val = vn as i64 - vd as i64;
        PadicNumber { p, val: Some(val), unit: u, abs: val + prec as i64 }
    }

    /// Residue `x mod p^abs` read as an element of `Z_p` known to absolute
    /// precision `abs`.
    pub fn from_residue(p: u64, x: &BigUint, abs: u32) -> Self {
        let m = pow_p(p, abs);
        let x = x % &m;
        if x.is_zero() {
            return Self::zero(p, abs as i64);
        }
        let (v, u) = split_valuation(p, &x);
        PadicNumber { p, val: Some(v as i64), unit: u, abs: abs as i64 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    /// `None` is the valuation of zero.
    pub fn valuation(&self) -> Option<i64> {
        self.val
    }

    /// Relative precision; zero has none.
    pub fn precision(&self) -> u32 {
        match self.val {
            Some(v) => (self.abs - v) as u32,
            None => 0,
        }
    }

    pub fn absolute_precision(&self) -> i64 {
        self.abs
    }

    /// The unit part modulo `p^precision`; zero for zero.
    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_unit(&self) -> bool {
        self.val == Some(0)
    }

    /// Drops digits so that the absolute precision is at most `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs {
            return self.clone();
        }
        match self.val {
            Some(v) if v < abs => {
                let rel = (abs - v) as u32;
                PadicNumber {
                    p: self.p,
                    val: Some(v),
                    unit: &self.unit % pow_p(self.p, rel),
                    abs,
                }
            }
            _ => Self::zero(self.p, abs),
        }
    }

    /// Drops digits so that the relative precision is at most `rel`.
    pub fn truncate_rel(&self, rel: u32) -> Self {
        match self.val {
            Some(v) => self.truncate_abs(v + rel as i64),
            None => self.clone(),
        }
    }

    /// Representative in `[0, p^abs)` of an element of `Z_p`.
    /// Returns `None` for negative valuation or negative absolute precision.
    pub fn residue(&self) -> Option<BigUint> {
        if self.abs < 0 {
            return None;
        }
        match self.val {
            None => Some(BigUint::zero()),
            Some(v) if v < 0 => None,
            Some(v) => Some(pow_p(self.p, v as u32) * &self.unit),
        }
    }

    /// The value as a rational number `p^v * u` (with `u` the stored
    /// representative of the unit part).
    pub fn to_rational(&self) -> BigRational {
        match self.val {
            None => BigRational::zero(),
            Some(v) => {
                let u = BigInt::from_biguint(Sign::Plus, self.unit.clone());
                let pv = BigInt::from_biguint(Sign::Plus, pow_p(self.p, v.unsigned_abs() as u32));
                if v >= 0 {
                    BigRational::from_integer(u * pv)
                } else {
                    BigRational::new(u, pv)
                }
            }
        }
    }

    fn check_same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing different primes");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_prime(other);
        let abs = self.abs.min(other.abs);
        let (va, vb) = match (self.val, other.val) {
            (None, None) => return Self::zero(self.p, abs),
            (Some(_), None) => return self.truncate_abs(abs),
            (None, Some(_)) => return other.truncate_abs(abs),
            (Some(a), Some(b)) => (a, b),
        };
        let vmin = va.min(vb);
        if abs <= vmin {
            return Self::zero(self.p, abs);
        }
        let width = (abs - vmin) as u32;
        let m = pow_p(self.p, width);
        let shift = |u: &BigUint, v: i64| -> BigUint {
            let k = (v - vmin) as u32;
            if k >= width {
                BigUint::zero()
            } else {
                u * pow_p(self.p, k)
            }
        };
        let x = (shift(&self.unit, va) + shift(&other.unit, vb)) % &m;
        Self::from_shifted(self.p, vmin, x, abs)
    }

    fn from_shifted(p: u64, vmin: i64, x: BigUint, abs: i64) -> Self {
        if x.is_zero() {
            return Self::zero(p, abs);
        }
        let (k, u) = split_valuation(p, &x);
        PadicNumber { p, val: Some(vmin + k as i64), unit: u, abs }
    }

    pub fn neg(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some(v) => {
                let m = pow_p(self.p, (self.abs - v) as u32);
                PadicNumber { p: self.p, val: self.val, unit: (&m - &self.unit) % &m, abs: self.abs }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_prime(other);
        match (self.val, other.val) {
            (None, None) => Self::zero(self.p, self.abs + other.abs),
            (None, Some(v)) => Self::zero(self.p, self.abs + v),
            (Some(v), None) => Self::zero(self.p, other.abs + v),
            (Some(va), Some(vb)) => {
                let rel = self.precision().min(other.precision());
                let m = pow_p(self.p, rel);
                PadicNumber {
                    p: self.p,
                    val: Some(va + vb),
                    unit: (&self.unit * &other.unit) % m,
                    abs: va + vb + rel as i64,
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let v = self.val.ok_or(PadicError::DivisionByZero)?;
        let rel = self.precision();
        let m = pow_p(self.p, rel);
        let inv = self.unit.modinv(&m).expect("unit is invertible");
        Ok(PadicNumber { p: self.p, val: Some(-v), unit: inv, abs: -v + rel as i64 })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let vb = other.val.ok_or(PadicError::DivisionByZero)?;
        match self.val {
            None => Ok(Self::zero(self.p, self.abs - vb)),
            Some(_) => Ok(self.mul(&other.inverse()?)),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            let prec = self.precision().max(1);
            return Self::one(self.p, prec);
        }
        match self.val {
            None => Self::zero(self.p, self.abs.saturating_mul(e as i64)),
            Some(v) => {
                let rel = self.precision();
                let m = pow_p(self.p, rel);
                PadicNumber {
                    p: self.p,
                    val: Some(v * e as i64),
                    unit: self.unit.modpow(&BigUint::from(e), &m),
                    abs: v * e as i64 + rel as i64,
                }
            }
        }
    }

    /// Multiplies by the integer `k` (exactly known).
    pub fn mul_int(&self, k: i64) -> Self {
        let prec = self.precision().max(1) + 64;
        self.mul(&Self::from_int(self.p, k, prec))
    }

    /// Compares at the shared absolute precision.
    pub fn agrees_with(&self, other: &Self) -> Agreement {
        let d = self.sub(other);
        Agreement { equal: d.is_zero(), precision: d.abs }
    }

    /// True when the two values agree modulo `p^k` and both are known that
    /// far.
    pub fn congruent_mod(&self, other: &Self, k: i64) -> bool {
        let a = self.agrees_with(other);
        a.precision >= k && self.truncate_abs(k).sub(&other.truncate_abs(k)).is_zero()
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None => write!(f, "O({}^{})", self.p, self.abs),
            Some(0) => write!(f, "{} + O({}^{})", self.unit, self.p, self.abs),
            Some(v) => write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, v, self.p, self.abs),
        }
    }
}

/// Teichmüller lift of `a` to precision `p^prec`: the `(p-1)`-st root of
/// unity congruent to `a` mod `p`.
pub fn teichmuller(a: i64, p: u64, prec: u32) -> Result<PadicNumber> {
    if !is_odd_prime(p) {
        return Err(PadicError::BadPrime(p));
    }
    let m = pow_p(p, prec);
    let x0 = mod_signed(&BigInt::from(a), &m);
    if (&x0 % p).is_zero() {
        return Err(PadicError::NotAUnit(a.to_string(), p));
    }
    let pe = BigUint::from(p);
    let mut x = x0;
    loop {
        let y = x.modpow(&pe, &m);
        if y == x {
            return Ok(PadicNumber { p, val: Some(0), unit: x, abs: prec as i64 });
        }
        x = y;
    }
}

/// The Teichmüller lift of the residue of a unit, at the unit's precision.
pub fn teichmuller_of(u: &PadicNumber) -> Result<PadicNumber> {
    if !u.is_unit() {
        return Err(PadicError::NotAUnit(u.to_string(), u.p));
    }
    let r = (u.unit() % u.p).to_i64().unwrap();
    teichmuller(r, u.p, u.precision())
}

/// `u / ω(u)`, the principal-unit part of a unit.
pub fn one_unit_part(u: &PadicNumber) -> Result<PadicNumber> {
    let w = teichmuller_of(u)?;
    u.div(&w)
}

/// `log(1 + x)` for `v(x) >= 1`, by the alternating series with enough
/// guard digits that the division by `k` does not eat into the result.
fn log_one_plus(x: &PadicNumber) -> PadicNumber {
    let p = x.p;
    let target = x.abs;
    let vx = match x.val {
        None => return PadicNumber::zero(p, target),
        Some(v) => v,
    };
    debug_assert!(vx >= 1);
    let mut sum = PadicNumber::zero(p, target);
    let mut power = x.clone();
    let mut k: u64 = 1;
    loop {
        // v(x^k / k) >= k*vx - log_p(k); stop once that clears the target.
        let lp = (k as f64).log(p as f64).floor() as i64;
        if k as i64 * vx - lp >= target {
            break;
        }
        let term = power.div(&PadicNumber::from_int(p, k as i64, (target.max(1) as u32) + 8)).unwrap();
        sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(x);
        k += 1;
    }
    sum.truncate_abs(target)
}

/// p-adic logarithm of a unit. The unit is first sent to the principal unit
/// `u^(p-1)`, whose series converges, and the result is divided by `p - 1`.
/// The returned value is known to the absolute precision of the input.
pub fn plog(u: &PadicNumber) -> Result<PadicNumber> {
    if !u.is_unit() {
        return Err(PadicError::NotAUnit(u.to_string(), u.p));
    }
    let p = u.p;
    let w = u.pow(p - 1);
    let x = w.sub(&PadicNumber::one(p, u.precision()));
    let l = log_one_plus(&x);
    let pm1 = PadicNumber::from_int(p, p as i64 - 1, u.precision());
    Ok(l.div(&pm1).unwrap().truncate_abs(u.abs))
}

/// Logarithm extended to all nonzero elements by `log(p) = 0`.
pub fn plog_iwasawa(x: &PadicNumber) -> Result<PadicNumber> {
    let v = x.val.ok_or(PadicError::DivisionByZero)?;
    let u = PadicNumber { p: x.p, val: Some(0), unit: x.unit.clone(), abs: x.abs - v };
    plog(&u)
}

/// `exp(x)` for `v(x) >= 1`.
pub fn pexp(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.p;
    let target = x.abs;
    let vx = match x.val {
        None => return Ok(PadicNumber::one(p, target.max(1) as u32)),
        Some(v) => v,
    };
    if vx < 1 {
        return Err(PadicError::NotAUnit(format!("exp argument {}", x), p));
    }
    let mut sum = PadicNumber::one(p, target.max(1) as u32);
    let mut term = PadicNumber::one(p, target.max(1) as u32 + 8);
    let mut k: u64 = 1;
    loop {
        // v(x^k/k!) >= k*vx - (k-1)/(p-1)
        let bound = k as i64 * vx - ((k - 1) / (p - 1)) as i64;
        if bound >= target {
            break;
        }
        term = term.mul(x).div(&PadicNumber::from_int(p, k as i64, target as u32 + 8))?;
        sum = sum.add(&term);
        k += 1;
    }
    Ok(sum.truncate_abs(target))
}

/// `(1 + y)^t` for `v(y) >= 1` and `t` in `Z_p`, by the binomial series.
pub fn one_unit_pow(base: &PadicNumber, t: &PadicNumber) -> Result<PadicNumber> {
    let p = base.p;
    if !base.is_unit() {
        return Err(PadicError::NotAUnit(base.to_string(), p));
    }
    if let Some(v) = t.val {
        if v < 0 {
            return Err(PadicError::NotAUnit(format!("exponent {}", t), p));
        }
    }
    let y = base.sub(&PadicNumber::one(p, base.precision()));
    let vy = y.val.unwrap_or(i64::MAX / 4);
    if vy < 1 {
        return Err(PadicError::NotAUnit(format!("{} is not a principal unit", base), p));
    }
    // Error in t of size p^a moves the result by p^(a + vy).
    let target = base.abs.min(t.abs.saturating_add(vy));
    if target <= 0 {
        return Err(PadicError::PrecisionExhausted);
    }
    let work = target as u32 + 4 + (2 * target as u32) / (p as u32 - 1).max(1);
    let t = if t.is_zero() { PadicNumber::zero(p, work as i64) } else { t.truncate_abs(work as i64) };
    let t = pad(&t, work as i64);
    let y = pad(&y, work as i64 + vy);
    let mut sum = PadicNumber::one(p, work);
    let mut coeff = PadicNumber::one(p, work);
    let mut ypow = PadicNumber::one(p, work);
    let mut k: u64 = 1;
    loop {
        // v(C(t,k) y^k) >= k*vy - v(k!) >= k*vy - (k-1)/(p-1)
        let bound = k as i64 * vy - ((k - 1) / (p - 1)) as i64;
        if bound >= target {
            break;
        }
        let tk = t.sub(&PadicNumber::from_int(p, k as i64 - 1, work));
        coeff = coeff.mul(&tk).div(&PadicNumber::from_int(p, k as i64, work))?;
        ypow = ypow.mul(&y);
        sum = sum.add(&coeff.mul(&ypow));
        k += 1;
    }
    Ok(sum.truncate_abs(target))
}

/// Treats digits beyond the stored precision as zero, up to absolute
/// precision `abs`. Only used on exact inputs (integers typed in by the
/// caller) where the stored precision is a convenience, not a limit.
fn pad(x: &PadicNumber, abs: i64) -> PadicNumber {
    match x.val {
        None => PadicNumber::zero(x.p, abs.max(x.abs)),
        Some(_) if abs <= x.abs => x.clone(),
        Some(v) => PadicNumber { p: x.p, val: Some(v), unit: x.unit.clone(), abs },
    }
}

/// Marks a value as exact up to absolute precision `abs` (used for integers
/// that are known exactly).
pub fn exact_to(x: &PadicNumber, abs: i64) -> PadicNumber {
    pad(x, abs).truncate_abs(abs)
}

fn legendre(a: &BigUint, p: u64) -> i32 {
    let r = (a % p).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    let e = BigUint::from((p - 1) / 2);
    if BigUint::from(r).modpow(&e, &BigUint::from(p)).is_one() {
        1
    } else {
        -1
    }
}

/// Square root of `d` in `Z_p` to precision `p^prec`; `seed` picks which of
/// the two roots by its residue mod `p`.
pub fn hensel_sqrt(d: i64, p: u64, prec: u32, seed: u64) -> Result<PadicNumber> {
    if !is_odd_prime(p) {
        return Err(PadicError::BadPrime(p));
    }
    let dm = mod_signed(&BigInt::from(d), &BigUint::from(p));
    if dm.is_zero() {
        return Err(PadicError::Ramified(d, p));
    }
    if legendre(&dm, p) != 1 {
        return Err(PadicError::NonResidue(d, p));
    }
    let s = seed % p;
    if (BigUint::from(s) * s) % p != dm {
        return Err(PadicError::SeedNotRoot(seed, d, p));
    }
    let m = pow_p(p, prec);
    let dd = mod_signed(&BigInt::from(d), &m);
    let mut r = BigUint::from(s);
    let mut k = 1;
    while k < prec {
        k = (2 * k).min(prec);
        let mk = pow_p(p, k);
        // Newton step r <- (r + d/r) / 2
        let inv_r = r.modinv(&mk).unwrap();
        let inv2 = BigUint::from(2u32).modinv(&mk).unwrap();
        r = ((&r + (&dd % &mk) * inv_r) % &mk) * inv2 % &mk;
    }
    Ok(PadicNumber::from_residue(p, &r, prec))
}

/// Both square roots mod `p` of a residue, smallest first.
pub fn sqrt_residues(d: i64, p: u64) -> Vec<u64> {
    let dm = d.rem_euclid(p as i64) as u64;
    (1..p).filter(|r| (r * r) % p == dm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(x: &PadicNumber) -> u64 {
        x.residue().unwrap().to_u64().unwrap()
    }

    #[test]
    fn teichmuller_small() {
        assert_eq!(res(&teichmuller(1, 5, 2).unwrap()), 1);
        assert_eq!(res(&teichmuller(4, 5, 2).unwrap()), 24);
        assert_eq!(res(&teichmuller(2, 5, 2).unwrap()), 7);
        assert_eq!(teichmuller(10, 5, 2).unwrap_err(), PadicError::NotAUnit("10".into(), 5));
    }

    #[test]
    fn log_of_six() {
        let six = PadicNumber::from_int(5, 6, 3);
        let l = plog(&six).unwrap();
        assert_eq!(res(&l), 55);
        assert_eq!(l.absolute_precision(), 3);
        assert_eq!(l.valuation(), Some(1));
    }

    #[test]
    fn log_of_one_is_zero() {
        assert!(plog(&PadicNumber::one(7, 6)).unwrap().is_zero());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(res(&hensel_sqrt(4, 5, 3, 2).unwrap()), 2);
        assert_eq!(res(&hensel_sqrt(-1, 5, 2, 2).unwrap()), 7);
        assert_eq!(hensel_sqrt(2, 5, 2, 1).unwrap_err(), PadicError::NonResidue(2, 5));
        assert_eq!(hensel_sqrt(10, 5, 2, 1).unwrap_err(), PadicError::Ramified(10, 5));
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let a = PadicNumber::from_int(5, 26, 4);
        let b = PadicNumber::from_int(5, 1, 4);
        let d = a.sub(&b);
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.absolute_precision(), 4);
        assert_eq!(d.precision(), 2);
    }

    #[test]
    fn rational_roundtrip() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x = PadicNumber::from_rational(5, &q, 6);
        let three = PadicNumber::from_int(5, 3, 6);
        assert!(x.mul(&three).agrees_with(&PadicNumber::one(5, 6)).equal);
        let r = BigRational::new(BigInt::from(-7), BigInt::from(50));
        let y = PadicNumber::from_rational(5, &r, 4);
        assert_eq!(y.valuation(), Some(-2));
    }

    #[test]
    fn exp_log_inverse() {
        let x = PadicNumber::from_int(7, 14, 8);
        let e = pexp(&x).unwrap();
        let back = plog(&e).unwrap();
        assert!(back.agrees_with(&x).equal);
    }

    #[test]
    fn binomial_power_matches_integer_power() {
        let u = PadicNumber::from_int(5, 6, 8);
        let t = PadicNumber::from_int(5, 3, 8);
        let a = one_unit_pow(&u, &t).unwrap();
        assert!(a.agrees_with(&u.pow(3)).equal);
        let tneg = PadicNumber::from_int(5, -2, 8);
        let b = one_unit_pow(&u, &tneg).unwrap();
        assert!(b.mul(&u.pow(2)).agrees_with(&PadicNumber::one(5, 8)).equal);
    }
}
