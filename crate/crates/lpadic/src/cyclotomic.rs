//! Exact arithmetic in `Q(ζ_m)`, Gauss sums, generalized Bernoulli numbers
//! and the p-adic embedding of cyclotomic numbers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chars::DirichletCharacter;
use crate::padic::{pow_p, split_valuation, PadicError, PadicNumber};
use crate::unramified::{cyclotomic_poly, gcd, zeta_in_zp, UnramifiedElement, UnramifiedRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("p = {p} divides the root-of-unity order {m}")]
    RamifiedEmbedding { p: u64, m: u64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn phi_poly(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }
    let v = Arc::new(cyclotomic_poly(m));
    cache.lock().unwrap().insert(m, v.clone());
    v
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of `Q(ζ_m)` on the power basis `1, ζ, …, ζ^{φ(m)-1}`.
#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    m: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    fn degree(m: u64) -> usize {
        phi_poly(m).len() - 1
    }

    /// Reduces a vector indexed by exponents (any length) modulo `x^m - 1`
    /// and then modulo `Φ_m`.
    pub fn from_exponent_vector(m: u64, v: &[BigRational]) -> Self {
        let mut cyc = vec![BigRational::zero(); m as usize];
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                cyc[i % m as usize] += c;
            }
        }
        let phi = phi_poly(m);
        let d = phi.len() - 1;
        for i in (d..cyc.len()).rev() {
            let c = std::mem::take(&mut cyc[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &fj) in phi[..d].iter().enumerate() {
                if fj != 0 {
                    cyc[i - d + j] -= &c * q(fj);
                }
            }
        }
        cyc.truncate(d);
        CyclotomicElement { m, coeffs: cyc }
    }

    pub fn zero(m: u64) -> Self {
        CyclotomicElement { m, coeffs: vec![BigRational::zero(); Self::degree(m)] }
    }

    pub fn from_rational(m: u64, r: BigRational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    /// `ζ_m^k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self::from_exponent_vector(m, &v)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The same number in `Q(ζ_n)` for a multiple `n` of `m`.
    pub fn lift(&self, n: u64) -> Self {
        assert!(n % self.m == 0, "lift target must be a multiple");
        if n == self.m {
            return self.clone();
        }
        let s = (n / self.m) as usize;
        let mut v = vec![BigRational::zero(); self.coeffs.len() * s + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * s] = c.clone();
        }
        Self::from_exponent_vector(n, &v)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = lcm(self.m, other.m);
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicElement { m: a.m, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicElement { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let m = a.m as usize;
        let mut acc = vec![BigRational::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    acc[(i + j) % m] += x * y;
                }
            }
        }
        Self::from_exponent_vector(a.m, &acc)
    }

    /// The automorphism `ζ ↦ ζ^a` for `a` prime to `m`.
    pub fn galois(&self, a: i64) -> Self {
        let m = self.m as i64;
        assert_eq!(gcd(a.rem_euclid(m) as u64, self.m), 1, "not a Galois element");
        let mut v = vec![BigRational::zero(); self.m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(i as i64 * a).rem_euclid(m) as usize] += c;
        }
        Self::from_exponent_vector(self.m, &v)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// `x · conj(x)`.
    pub fn norm_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.m);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                _ => write!(f, "({})*z{}^{}", c, self.m, i)?,
            }
        }
        Ok(())
    }
}

/// `χ(a)` as a cyclotomic number (zero when `a` is not a unit).
pub fn char_value(chi: &DirichletCharacter, a: i64) -> CyclotomicElement {
    match chi.exponent(a) {
        Some(e) => CyclotomicElement::zeta_pow(chi.order(), e as i64),
        None => CyclotomicElement::zero(chi.order()),
    }
}

/// `τ(χ) = Σ_{a mod f} χ(a) ζ_f^a` in `Q(ζ_{lcm(f, m)})`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<CyclotomicElement, CyclotomicError> {
    let f = chi.modulus();
    let conductor = chi.conductor();
    if conductor != f {
        return Err(CyclotomicError::NotPrimitive { modulus: f, conductor });
    }
    let m = chi.order();
    let l = lcm(f, m);
    let mut v = vec![BigRational::zero(); l as usize];
    for a in 0..f {
        if let Some(e) = chi.exponent(a as i64) {
            let idx = (e * (l / m) + a * (l / f)) % l;
            v[idx as usize] += BigRational::one();
        }
    }
    Ok(CyclotomicElement::from_exponent_vector(l, &v))
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        // Σ_{k=0}^{j} C(j+1, k) B_k = 0
        let j = b.len();
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            s += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(j + 1 - k) / BigInt::from(k + 1);
        }
        let next = -s / BigRational::from_integer(BigInt::from(j + 1));
        b.push(next);
    }
    b[..=n].to_vec()
}

pub fn bernoulli(n: usize) -> BigRational {
    bernoulli_numbers(n).pop().unwrap()
}

/// `B_n(x) = Σ_k C(n, k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let b = bernoulli_numbers(n);
    let mut s = BigRational::zero();
    let mut binom = BigInt::one();
    for (k, bk) in b.iter().enumerate() {
        if !bk.is_zero() {
            s += bk * BigRational::from_integer(binom.clone()) * pow_rat(x, (n - k) as u32);
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    s
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

/// `B_{n,χ} = f^{n-1} Σ_{a=1}^{f} χ(a) B_n(a/f)` with `f` the modulus of
/// `χ` as given. The trivial character mod 1 yields `B_1 = +1/2`.
pub fn gen_bernoulli(n: usize, chi: &DirichletCharacter) -> CyclotomicElement {
    let f = chi.modulus();
    let m = chi.order();
    let mut acc = vec![BigRational::zero(); m as usize];
    let fq = BigRational::from_integer(BigInt::from(f));
    for a in 1..=f {
        if let Some(e) = chi.exponent(a as i64) {
            let x = BigRational::from_integer(BigInt::from(a)) / &fq;
            acc[e as usize] += bernoulli_poly(n, &x);
        }
    }
    let scale = pow_rat(&fq, n as u32 - 1);
    for c in acc.iter_mut() {
        *c *= &scale;
    }
    CyclotomicElement::from_exponent_vector(m, &acc)
}

/// A p-adically embedded cyclotomic number.
#[derive(Clone, Debug)]
pub enum Embedded {
    Zp(PadicNumber),
    Unramified(UnramifiedElement),
}

impl Embedded {
    pub fn as_padic(&self) -> Option<&PadicNumber> {
        match self {
            Embedded::Zp(x) => Some(x),
            Embedded::Unramified(_) => None,
        }
    }
}

/// The fixed embedding `Q(ζ_m) → Q_p(ζ_m)` at a working precision.
#[derive(Clone, Debug)]
pub struct Embedding {
    p: u64,
    m: u64,
    prec: u32,
    target: Target,
}

#[derive(Clone, Debug)]
enum Target {
    // Powers of ι(ζ_m) mod p^prec.
    Zp(Vec<BigUint>),
    Ring(Arc<UnramifiedRing>, Vec<UnramifiedElement>),
}

impl Embedding {
    pub fn new(m: u64, p: u64, prec: u32) -> Result<Self, CyclotomicError> {
        if m % p == 0 {
            return Err(CyclotomicError::RamifiedEmbedding { p, m });
        }
        let target = if (p - 1) % m == 0 {
            let z = zeta_in_zp(m, p, prec)?;
            let md = pow_p(p, prec);
            let mut pows = Vec::with_capacity(m as usize);
            let mut x = BigUint::one() % &md;
            for _ in 0..m {
                pows.push(x.clone());
                x = x * &z % &md;
            }
            Target::Zp(pows)
        } else {
            let ring = UnramifiedRing::for_roots_of_unity(m, p, prec)?;
            let z = UnramifiedElement::gen(&ring);
            let mut pows = Vec::with_capacity(m as usize);
            let mut x = UnramifiedElement::one(&ring);
            for _ in 0..m {
                pows.push(x.clone());
                x = x.mul(&z);
            }
            Target::Ring(ring, pows)
        };
        Ok(Embedding { p, m, prec, target })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `ι(ζ_m)^k` as a residue, when the embedding lands in `Z_p`.
    pub fn zeta_pow_residue(&self, k: u64) -> Option<&BigUint> {
        match &self.target {
            Target::Zp(p) => Some(&p[(k % self.m) as usize]),
            Target::Ring(..) => None,
        }
    }

    /// `ι(ζ_m)^k` in `Z_p`, known to absolute precision `prec`.
    pub fn zeta_pow_padic(&self, k: u64) -> Option<PadicNumber> {
        self.zeta_pow_residue(k).map(|r| PadicNumber::from_residue(self.p, r, self.prec))
    }

    /// Embeds `x ∈ Q(ζ_m')` with `m' | m`. Coefficients with `p` in the
    /// denominator reduce the absolute precision of the result.
    pub fn embed(&self, x: &CyclotomicElement) -> Result<Embedded, CyclotomicError> {
        let x = if x.m == self.m { x.clone() } else { x.lift(self.m) };
        let p = self.p;
        let k = x
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| split_valuation(p, c.denom().magnitude()).0)
            .max()
            .unwrap_or(0);
        let md = pow_p(p, self.prec);
        let pk = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, pow_p(p, k)));
        let residues: Vec<BigUint> = x.coeffs.iter().map(|c| rational_residue(&(c * &pk), &md)).collect();
        match &self.target {
            Target::Zp(pows) => {
                let mut s = BigUint::zero();
                for (i, r) in residues.iter().enumerate() {
                    s += r * &pows[i];
                }
                let s = s % &md;
                let v = PadicNumber::from_residue(p, &s, self.prec);
                let shift = PadicNumber::from_parts(p, -(k as i64), BigUint::one(), self.prec + 1);
                Ok(Embedded::Zp(v.mul(&shift).truncate_abs(self.prec as i64 - k as i64)))
            }
            Target::Ring(ring, pows) => {
                let mut s = UnramifiedElement::zero(ring);
                for (i, r) in residues.iter().enumerate() {
                    if !r.is_zero() {
                        s = s.add(&pows[i].mul(&UnramifiedElement::from_residue(ring, r.clone())));
                    }
                }
                let coeffs = s.coeffs().to_vec();
                Ok(Embedded::Unramified(UnramifiedElement::from_coeffs(ring, coeffs, k)))
            }
        }
    }
}

/// `n/d mod M` for `d` prime to `M`.
pub(crate) fn rational_residue(r: &BigRational, md: &BigUint) -> BigUint {
    let mi = BigInt::from_biguint(Sign::Plus, md.clone());
    let n = r.numer().mod_floor(&mi).to_biguint().unwrap();
    let d = r.denom().mod_floor(&mi).to_biguint().unwrap();
    let inv = d.modinv(md).expect("denominator prime to p");
    n * inv % md
}

/// Embeds `x` at precision `p^prec`; rational numbers become elements of
/// `Q_p` with relative precision `prec`.
pub fn embed_padic(x: &CyclotomicElement, p: u64, prec: u32) -> Result<Embedded, CyclotomicError> {
    if let Some(r) = x.to_rational() {
        return Ok(Embedded::Zp(PadicNumber::from_rational(p, &r, prec)));
    }
    Embedding::new(x.m, p, prec)?.embed(x)
}

/// Whether a rational is `p`-integral.
pub fn is_p_integral(r: &BigRational, p: u64) -> bool {
    !r.denom().is_zero() && (r.denom().abs() % BigInt::from(p)) != BigInt::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(7), rat(0, 1));
    }

    #[test]
    fn gauss_sum_quadratic_five() {
        let chi = DirichletCharacter::omega_power(5, 2);
        let tau = gauss_sum(&chi).unwrap();
        // ζ5 - ζ5^2 - ζ5^3 + ζ5^4
        let expect = CyclotomicElement::zeta_pow(5, 1)
            .sub(&CyclotomicElement::zeta_pow(5, 2))
            .sub(&CyclotomicElement::zeta_pow(5, 3))
            .add(&CyclotomicElement::zeta_pow(5, 4));
        assert!(tau == expect);
        assert_eq!(tau.mul(&tau).to_rational(), Some(rat(5, 1)));
    }

    #[test]
    fn gauss_sum_quadratic_three() {
        let chi = DirichletCharacter::omega_power(3, 1);
        let tau = gauss_sum(&chi).unwrap();
        assert_eq!(tau.mul(&tau).to_rational(), Some(rat(-3, 1)));
        assert_eq!(tau.norm_squared().to_rational(), Some(rat(3, 1)));
    }

    #[test]
    fn gauss_sum_rejects_imprimitive() {
        let chi = DirichletCharacter::trivial(4);
        assert!(matches!(gauss_sum(&chi), Err(CyclotomicError::NotPrimitive { .. })));
        assert_eq!(gauss_sum(&DirichletCharacter::trivial(1)).unwrap().to_rational(), Some(rat(1, 1)));
    }

    #[test]
    fn generalized_bernoulli_examples() {
        let chi4 = DirichletCharacter::omega_power(5, 2).induce(5);
        assert_eq!(gen_bernoulli(2, &chi4).to_rational(), Some(rat(4, 5)));
        let odd4 = DirichletCharacter::from_generator_images(4, 2, |_| 1).unwrap();
        assert_eq!(gen_bernoulli(1, &odd4).to_rational(), Some(rat(-1, 2)));
        assert_eq!(gen_bernoulli(1, &DirichletCharacter::trivial(1)).to_rational(), Some(rat(1, 2)));
    }

    #[test]
    fn embed_zeta4() {
        let z = CyclotomicElement::zeta_pow(4, 1);
        let e = embed_padic(&z, 5, 2).unwrap();
        let r = e.as_padic().unwrap().residue().unwrap().to_u64().unwrap();
        assert_eq!(r, 7);
        let tau = gauss_sum(&DirichletCharacter::omega_power(5, 2)).unwrap();
        assert!(matches!(embed_padic(&tau, 5, 3), Err(CyclotomicError::RamifiedEmbedding { .. })));
    }

    #[test]
    fn embed_with_denominator() {
        // (1 + ζ_4)/5 at p = 5: valuation -1.
        let x = CyclotomicElement::one(4).add(&CyclotomicElement::zeta_pow(4, 1)).scale(&rat(1, 5));
        let e = embed_padic(&x, 5, 4).unwrap();
        let v = e.as_padic().unwrap();
        assert_eq!(v.valuation(), Some(-1));
        assert_eq!(v.absolute_precision(), 3);
    }
}
