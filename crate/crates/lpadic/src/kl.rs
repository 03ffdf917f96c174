//! Kubota–Leopoldt p-adic L-functions: interpolated special values from
//! generalized Bernoulli numbers, and an evaluator at arbitrary `s ∈ Z_p`
//! by the classical convergent sum.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chars::DirichletCharacter;
use crate::cyclotomic::{bernoulli, gen_bernoulli, CyclotomicElement, CyclotomicError, Embedded, Embedding};
use crate::iwasawa::SeriesError;
use crate::padic::{is_odd_prime, one_unit_pow, plog, split_valuation, PadicError, PadicNumber};
use crate::unramified::gcd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlError {
    #[error("character is odd; its Kubota-Leopoldt function vanishes identically")]
    OddCharacter,
    #[error("the trivial character has a pole at s = 1")]
    PoleAtOne,
    #[error("no precision left")]
    PrecisionExhausted,
    #[error("character values of order {0} do not lie in Z_{1}")]
    NotInZp(u64, u64),
    #[error("p^2 divides the conductor {0}")]
    WildConductor(u64),
    #[error("projection vanishes identically for this parity")]
    TrivialProjection,
    #[error("{0} variable changes match the interpolation values; expected exactly one")]
    ConventionMismatch(usize),
    #[error("Stickelberger coefficient at index {0} is not p-integral")]
    NotIntegral(u64),
    #[error("{0} has the wrong parity")]
    ParityViolation(String),
    #[error("p = {0} is not split in Q(sqrt({1}))")]
    NotSplit(u64, i64),
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `χ ω^{-n}` made primitive, with values in the smallest `μ_m`.
pub fn twisted_primitive(chi: &DirichletCharacter, n: i64, p: u64) -> DirichletCharacter {
    chi.mul(&DirichletCharacter::omega_power(p, -n)).primitive().reduced()
}

/// An interpolated value `L_p(χ, 1-n)`, exact and embedded.
#[derive(Clone, Debug)]
pub struct SpecialValue {
    pub exact: CyclotomicElement,
    pub rational: Option<BigRational>,
    pub value: Embedded,
}

impl SpecialValue {
    pub fn padic(&self) -> Option<&PadicNumber> {
        self.value.as_padic()
    }
}

/// `L_p(χ, 1-n) = -(1 - ψ(p) p^{n-1}) B_{n,ψ} / n` with `ψ` the primitive
/// character attached to `χ ω^{-n}`.
pub fn kl_special(chi: &DirichletCharacter, n: u32, p: u64, prec: u32) -> Result<SpecialValue, KlError> {
    if !is_odd_prime(p) {
        return Err(PadicError::BadPrime(p).into());
    }
    if n == 0 {
        return Err(KlError::BadInput("n must be at least 1".into()));
    }
    if !chi.is_even() {
        return Err(KlError::OddCharacter);
    }
    let psi = twisted_primitive(chi, n as i64, p);
    let m = psi.order();
    let b = gen_bernoulli(n as usize, &psi);
    let pn1 = BigRational::from_integer(BigInt::from(p).pow(n - 1));
    let euler = match psi.exponent(p as i64) {
        None => CyclotomicElement::one(m),
        Some(e) => CyclotomicElement::one(m).sub(&CyclotomicElement::zeta_pow(m, e as i64).scale(&pn1)),
    };
    let scale = BigRational::new(BigInt::from(-1), BigInt::from(n));
    let exact = euler.mul(&b).scale(&scale);
    let rational = exact.to_rational();
    let value = match &rational {
        Some(r) => Embedded::Zp(PadicNumber::from_rational(p, r, prec)),
        None => Embedding::new(m, p, prec)?.embed(&exact)?,
    };
    Ok(SpecialValue { exact, rational, value })
}

/// True when `L_p(χ, s)` has a trivial zero at `s = 1 - n`: the Euler
/// factor `1 - χω^{-n}(p) p^{n-1}` vanishes.
pub fn has_trivial_zero(chi: &DirichletCharacter, n: u32, p: u64) -> bool {
    n == 1 && twisted_primitive(chi, n as i64, p).exponent(p as i64) == Some(0)
}

/// Embeds character values into `Z_p` when the order divides `p - 1`.
pub(crate) struct ZpValues {
    emb: Embedding,
    chi: DirichletCharacter,
}

impl ZpValues {
    pub fn new(chi: &DirichletCharacter, p: u64, prec: u32) -> Result<Self, KlError> {
        let chi = chi.reduced();
        if (p - 1) % chi.order() != 0 {
            return Err(KlError::NotInZp(chi.order(), p));
        }
        let emb = Embedding::new(chi.order(), p, prec)?;
        Ok(ZpValues { emb, chi })
    }

    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.chi.exponent(a)
    }

    /// `ζ^e` for the value field's root of unity.
    pub fn root_power(&self, e: u64) -> BigUint {
        self.emb.zeta_pow_residue(e).unwrap().clone()
    }

    pub fn padic(&self, a: i64) -> Option<PadicNumber> {
        self.chi.exponent(a).map(|e| self.emb.zeta_pow_padic(e).unwrap())
    }
}

fn floor_log(p: u64, k: u64) -> i64 {
    let mut r = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        r += 1;
    }
    r
}

/// `L_p(χ, s)` for even `χ` with values in `Z_p`, by
///
/// `L_p(χ, s) = 1/(F (s-1)) Σ_{a ≤ F, p ∤ a} χ(a) ⟨a⟩^{1-s} Σ_j C(1-s, j) (F/a)^j B_j`
///
/// with `F = lcm(f, p)`. The `j = 0` term is expanded in powers of `1-s`
/// so the division by `s - 1` is exact.
pub fn kl_value(chi: &DirichletCharacter, s: &PadicNumber, p: u64, prec: u32) -> Result<PadicNumber, KlError> {
    if !is_odd_prime(p) {
        return Err(PadicError::BadPrime(p).into());
    }
    if !chi.is_even() {
        return Err(KlError::OddCharacter);
    }
    if let Some(v) = s.valuation() {
        if v < 0 {
            return Err(KlError::BadInput("s must lie in Z_p".into()));
        }
    }
    let chi = chi.primitive().reduced();
    let trivial = chi.is_trivial();
    let f = chi.modulus();
    let big_f = lcm(f, p);
    let v_f = split_valuation(p, &BigUint::from(big_f)).0 as i64;
    let guard = 8 + 2 * floor_log(p, 4 * prec as u64 + 16) as u32;
    let w = prec + guard;
    let target = prec as i64 + 2;
    let vals = ZpValues::new(&chi, p, w)?;

    let one = PadicNumber::one(p, w);
    let one_minus_s = one.sub(&s);
    if trivial && one_minus_s.is_zero() {
        return Err(KlError::PoleAtOne);
    }
    let inv_f = PadicNumber::from_int(p, big_f as i64, w).inverse()?;

    struct Term {
        chi_a: PadicNumber,
        log_a: PadicNumber,
        pow_a: PadicNumber,
        inv_a: PadicNumber,
    }
    let mut terms = Vec::new();
    for a in 1..=big_f {
        if a % p == 0 {
            continue;
        }
        let Some(chi_a) = vals.padic(a as i64) else { continue };
        let a_p = PadicNumber::from_int(p, a as i64, w);
        let bracket = crate::padic::one_unit_part(&a_p)?;
        let pow_a = one_unit_pow(&bracket, &one_minus_s)?;
        terms.push(Term { chi_a, log_a: plog(&a_p)?, pow_a, inv_a: a_p.inverse()? });
    }

    // j = 0: -(1/F) Σ_{k≥1} (1-s)^{k-1}/k! S_k, plus S_0/(F(s-1)) when trivial.
    let mut total = PadicNumber::zero(p, w as i64);
    if trivial {
        let s0 = PadicNumber::from_int(p, terms.len() as i64, w);
        let s_minus_1 = s.sub(&one);
        total = total.add(&s0.mul(&inv_f).div(&s_minus_1)?);
    }
    let mut powers: Vec<PadicNumber> = terms.iter().map(|t| t.chi_a.clone()).collect();
    let mut coef = PadicNumber::one(p, w); // (1-s)^{k-1}/k!
    let mut k: u64 = 1;
    loop {
        let bound = k as i64 - ((k - 1) / (p - 1)) as i64 - v_f;
        if bound >= target + 2 {
            break;
        }
        coef = coef.div(&PadicNumber::from_int(p, k as i64, w))?;
        let mut s_k = PadicNumber::zero(p, w as i64 + 4);
        for (pw, t) in powers.iter_mut().zip(&terms) {
            *pw = pw.mul(&t.log_a);
            s_k = s_k.add(pw);
        }
        total = total.sub(&coef.mul(&s_k).mul(&inv_f));
        coef = coef.mul(&one_minus_s);
        k += 1;
    }

    // j ≥ 1: -(1/F)(1/j) C(-s, j-1) B_j Σ_a χ(a) ⟨a⟩^{1-s} (F/a)^j
    let neg_s = s.neg();
    let big_f_p = PadicNumber::from_int(p, big_f as i64, w);
    let mut binom = PadicNumber::one(p, w); // C(-s, j-1)
    let mut weights: Vec<PadicNumber> = terms.iter().map(|t| t.chi_a.mul(&t.pow_a)).collect();
    let mut j: u64 = 1;
    loop {
        let bound = (j as i64 - 1) * v_f - floor_log(p, j) - 1;
        if bound >= target + 2 {
            break;
        }
        if j >= 2 {
            let i = j - 1;
            let factor = neg_s.sub(&PadicNumber::from_int(p, i as i64 - 1, w));
            binom = binom.mul(&factor).div(&PadicNumber::from_int(p, i as i64, w))?;
        }
        let mut sum = PadicNumber::zero(p, w as i64 + 4);
        for (wt, t) in weights.iter_mut().zip(&terms) {
            *wt = wt.mul(&big_f_p).mul(&t.inv_a);
            sum = sum.add(wt);
        }
        let bj = bernoulli(j as usize);
        if !bj.is_zero() {
            let bj = PadicNumber::from_rational(p, &bj, w);
            let scale = bj.div(&PadicNumber::from_int(p, j as i64, w))?.mul(&inv_f);
            total = total.sub(&scale.mul(&binom).mul(&sum));
        }
        j += 1;
    }
    let out_prec = (prec as i64).min(s.absolute_precision());
    if total.absolute_precision() <= total.valuation().unwrap_or(i64::MIN) {
        return Err(KlError::PrecisionExhausted);
    }
    Ok(total.truncate_abs(out_prec.min(total.absolute_precision())))
}

/// Exact power series helpers over `Q` for the Coleman side.
fn series_log_one_plus(h: &[BigRational], len: usize) -> Vec<BigRational> {
    // log(1 + h) with h(0) = 0, truncated at T^len.
    let mut out = vec![BigRational::zero(); len];
    let mut power = vec![BigRational::zero(); len];
    power[0] = BigRational::one();
    for k in 1..len {
        power = series_mul(&power, h, len);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = BigRational::new(BigInt::from(sign), BigInt::from(k));
        for (o, x) in out.iter_mut().zip(&power) {
            *o += &c * x;
        }
    }
    out
}

fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `D^k log g_c (0)` for the Coleman power series
/// `g_c(T) = ((1+T)^c - 1)/T` of a cyclotomic unit, with `D = (1+T) d/dT`;
/// returned exactly and embedded at `p^prec`.
pub fn coates_wiles(c: u64, k: u32, p: u64, prec: u32) -> Result<(BigRational, PadicNumber), KlError> {
    if c < 2 {
        return Err(KlError::BadInput("c must be at least 2".into()));
    }
    if !is_odd_prime(p) {
        return Err(PadicError::BadPrime(p).into());
    }
    if c % p == 0 {
        return Err(PadicError::NotAUnit(c.to_string(), p).into());
    }
    let len = k as usize + 1;
    // g_c(T)/c = Σ_{i≥0} C(c, i+1)/c T^i
    let cq = BigRational::from_integer(BigInt::from(c));
    let mut h = vec![BigRational::zero(); len];
    let mut binom = BigInt::from(c); // C(c, 1)
    for (i, hi) in h.iter_mut().enumerate() {
        if i > 0 {
            *hi = BigRational::from_integer(binom.clone()) / &cq;
        }
        binom = binom * BigInt::from(c as i64 - i as i64 - 1) / BigInt::from(i as i64 + 2);
    }
    let mut series = series_log_one_plus(&h, len);
    for _ in 0..k {
        // (1+T) d/dT: T^i -> i T^{i-1} + i T^i
        let mut next = vec![BigRational::zero(); len];
        for i in 1..len {
            let ci = &series[i] * BigRational::from_integer(BigInt::from(i));
            next[i - 1] += &ci;
            next[i] += ci;
        }
        series = next;
    }
    let value = series[0].clone();
    let embedded = PadicNumber::from_rational(p, &value, prec);
    Ok((value, embedded))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn special_values() {
        let w2 = DirichletCharacter::omega_power(5, 2);
        assert_eq!(kl_special(&w2, 2, 5, 10).unwrap().rational, Some(rat(1, 3)));
        let one = DirichletCharacter::trivial(1);
        assert_eq!(kl_special(&one, 4, 5, 10).unwrap().rational, Some(rat(-31, 30)));
        let w = DirichletCharacter::omega_power(5, 1);
        assert_eq!(kl_special(&w, 2, 5, 10).unwrap_err(), KlError::OddCharacter);
    }

    #[test]
    fn value_matches_special() {
        let w2 = DirichletCharacter::omega_power(5, 2);
        let s = PadicNumber::from_int(5, -1, 30);
        let v = kl_value(&w2, &s, 5, 10).unwrap();
        let e = PadicNumber::from_rational(5, &rat(1, 3), 12);
        assert!(v.congruent_mod(&e, 10), "{} vs {}", v, e);
    }

    #[test]
    fn pole_at_one() {
        let one = DirichletCharacter::trivial(1);
        let s = PadicNumber::from_int(5, 1, 20);
        assert_eq!(kl_value(&one, &s, 5, 8).unwrap_err(), KlError::PoleAtOne);
    }

    #[test]
    fn coates_wiles_examples() {
        assert_eq!(coates_wiles(3, 1, 5, 6).unwrap().0, rat(1, 1));
        assert_eq!(coates_wiles(3, 2, 5, 6).unwrap().0, rat(2, 3));
        assert_eq!(coates_wiles(2, 3, 5, 6).unwrap().0, rat(0, 1));
    }
}
