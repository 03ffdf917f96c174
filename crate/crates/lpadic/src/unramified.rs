//! Unramified extensions of `Q_p` generated by roots of unity of order prime
//! to `p`, and the fixed embedding of `Q(ζ_m)` they realize.
//!
//! The embedding sends `ζ_m` to a root of one irreducible factor of the
//! `m`-th cyclotomic polynomial modulo `p`, lifted to the Teichmüller root
//! of unity. The factor is pinned down in two steps: it must be compatible
//! with the Teichmüller character (`ζ_m^(m/G)` maps to
//! `ω(g)^((p-1)/G)` where `G = gcd(m, p-1)` and `g` is the least primitive
//! root mod `p`), and among the compatible factors the one with the
//! lexicographically least coefficient vector (constant term first) wins.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::padic::{is_odd_prime, pow_p, teichmuller, PadicError, Result};

/// Least primitive root modulo the odd prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .unwrap_or(1)
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mut b128 = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    r as u64
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Multiplicative order of `p` modulo `m`.
pub fn order_mod(p: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = p % m;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * p as u128 % m as u128) as u64;
        k += 1;
    }
    k
}

// Polynomials over F_p, coefficients low degree first, no trailing zeros.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    trim(out.into_iter().map(|x| x as u64).collect())
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = (r[i] as u128 * inv as u128 % p as u128) as u64;
        q[i - db] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let k = i - db + j;
                r[k] = (r[k] + p - (c as u128 * bj as u128 % p as u128) as u64) % p;
            }
        }
    }
    (trim(q), trim(r))
}

fn fp_monic(a: Fp, p: u64) -> Fp {
    let lead = *a.last().unwrap();
    let inv = pow_mod(lead, p - 2, p);
    a.into_iter().map(|x| (x as u128 * inv as u128 % p as u128) as u64).collect()
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        fp_monic(x, p)
    }
}

fn fp_powmod(base: &Fp, e: &BigUint, modulus: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let b = fp_divrem(base, modulus, p).1;
    for i in (0..e.bits()).rev() {
        result = fp_divrem(&fp_mul(&result, &result, p), modulus, p).1;
        if e.bit(i) {
            result = fp_divrem(&fp_mul(&result, &b, p), modulus, p).1;
        }
    }
    result
}

/// The `m`-th cyclotomic polynomial over `Z`, low degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    // Φ_m = Π_{d | m} (x^d - 1)^{μ(m/d)}, done by repeated exact division.
    let mut num: Vec<i64> = vec![-1];
    num.resize(m as usize + 1, 0);
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = int_exact_div(&num, &phi_d);
        }
    }
    num
}

fn int_exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i - db + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Equal-degree factorization of a squarefree product of degree-`d`
/// irreducibles over `F_p` (Cantor–Zassenhaus, fixed seed).
fn equal_degree_factors(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let g = fp_sub(&fp_powmod(&a, &e, f, p), &vec![1], p);
        let h = fp_gcd(f, &g, p);
        if h.len() > 1 && h.len() < f.len() {
            let other = fp_monic(fp_divrem(f, &h, p).0, p);
            let mut out = equal_degree_factors(&h, d, p, rng);
            out.extend(equal_degree_factors(&other, d, p, rng));
            return out;
        }
    }
}

/// Irreducible factors of `Φ_m` mod `p` (all of degree `ord_m(p)`), sorted
/// lexicographically by coefficient vector.
pub fn cyclotomic_factors_mod_p(m: u64, p: u64) -> Vec<Vec<u64>> {
    let phi: Fp = cyclotomic_poly(m).iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    let d = order_mod(p, m) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = equal_degree_factors(&phi, d, p, &mut rng);
    out.sort();
    out
}

/// The chosen factor of `Φ_m` mod `p`; see the module docs.
pub fn chosen_factor(m: u64, p: u64) -> Vec<u64> {
    let g = least_primitive_root(p);
    let big_g = gcd(m, p - 1);
    let target = pow_mod(g, (p - 1) / big_g, p);
    for fac in cyclotomic_factors_mod_p(m, p) {
        let xe = fp_powmod(&vec![0, 1], &BigUint::from(m / big_g), &fac, p);
        if xe == trim(vec![target]) {
            return fac;
        }
    }
    unreachable!("some primitive m-th root satisfies the compatibility condition")
}

/// `Z_p[x]/(F)` modulo `p^prec`, with `F` the monic minimal polynomial of a
/// root of unity of order `m`. Multiplication reduces by `F`.
#[derive(Debug)]
pub struct UnramifiedRing {
    pub p: u64,
    pub m: u64,
    pub degree: usize,
    pub prec: u32,
    modulus: BigUint,
    // F monic of degree `degree`, low degree first; leading 1 omitted.
    poly: Vec<BigUint>,
}

impl UnramifiedRing {
    /// Builds the ring hosting `ζ_m` (as the class of `x`).
    pub fn for_roots_of_unity(m: u64, p: u64, prec: u32) -> Result<Arc<Self>> {
        if !is_odd_prime(p) {
            return Err(PadicError::BadPrime(p));
        }
        assert!(m % p != 0, "roots of unity of order divisible by p are ramified");
        let modulus = pow_p(p, prec);
        let fac = chosen_factor(m, p);
        let d = fac.len() - 1;
        // First work modulo the naive lift of the factor.
        let naive = UnramifiedRing {
            p,
            m,
            degree: d,
            prec,
            poly: fac[..d].iter().map(|&c| BigUint::from(c)).collect(),
            modulus: modulus.clone(),
        };
        let naive = Arc::new(naive);
        let x = UnramifiedElement::gen(&naive);
        // Teichmüller lift of the class of x: iterate Frobenius-power p^d.
        let q = BigUint::from(p).pow(d as u32);
        let mut y = x;
        loop {
            let z = y.pow_big(&q);
            if z == y {
                break;
            }
            y = z;
        }
        // F(X) = Π_i (X - y^(p^i)), coefficients land in Z/p^prec.
        let mut coeffs: Vec<UnramifiedElement> = vec![UnramifiedElement::one(&naive)];
        let mut conj = y.clone();
        for _ in 0..d {
            let mut next = vec![UnramifiedElement::zero(&naive); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(&conj));
            }
            coeffs = next;
            conj = conj.pow_big(&BigUint::from(p));
        }
        let poly = coeffs[..d]
            .iter()
            .map(|c| {
                debug_assert!(c.coeffs[1..].iter().all(|z| z.is_zero()));
                c.coeffs[0].clone()
            })
            .collect();
        Ok(Arc::new(UnramifiedRing { p, m, degree: d, prec, modulus, poly }))
    }

    pub fn modulus_poly(&self) -> Vec<BigUint> {
        let mut v = self.poly.clone();
        v.push(BigUint::one());
        v
    }
}

/// An element `p^(-den_exp) * Σ c_i x^i` of the unramified extension; the
/// coefficients are known modulo `p^prec` of the ring.
#[derive(Clone, Debug)]
pub struct UnramifiedElement {
    ring: Arc<UnramifiedRing>,
    coeffs: Vec<BigUint>,
    den_exp: u32,
}

impl PartialEq for UnramifiedElement {
    fn eq(&self, other: &Self) -> bool {
        let k = self.den_exp.max(other.den_exp);
        self.rescaled(k).coeffs == other.rescaled(k).coeffs
    }
}

impl UnramifiedElement {
    pub fn zero(ring: &Arc<UnramifiedRing>) -> Self {
        UnramifiedElement { ring: ring.clone(), coeffs: vec![BigUint::zero(); ring.degree], den_exp: 0 }
    }

    pub fn one(ring: &Arc<UnramifiedRing>) -> Self {
        Self::from_residue(ring, BigUint::one())
    }

    pub fn from_residue(ring: &Arc<UnramifiedRing>, c: BigUint) -> Self {
        let mut z = Self::zero(ring);
        z.coeffs[0] = c % &ring.modulus;
        z
    }

    /// The class of `x`, i.e. the embedded `ζ_m`.
    pub fn gen(ring: &Arc<UnramifiedRing>) -> Self {
        let mut v = vec![BigUint::zero(); ring.degree.max(2)];
        v[1] = BigUint::one();
        Self::reduce(ring, v, 0)
    }

    /// Builds from coefficients on the power basis, scaled by `p^(-den_exp)`.
    pub fn from_coeffs(ring: &Arc<UnramifiedRing>, coeffs: Vec<BigUint>, den_exp: u32) -> Self {
        Self::reduce(ring, coeffs, den_exp)
    }

    fn reduce(ring: &Arc<UnramifiedRing>, mut v: Vec<BigUint>, den_exp: u32) -> Self {
        let d = ring.degree;
        let m = &ring.modulus;
        for c in v.iter_mut() {
            *c %= m;
        }
        // x^d = -Σ F_i x^i
        for i in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[i]);
            if c.is_zero() {
                continue;
            }
            for (j, f) in ring.poly.iter().enumerate() {
                let t = (&c * f) % m;
                let k = i - d + j;
                v[k] = (&v[k] + m - t) % m;
            }
        }
        v.truncate(d);
        v.resize(d, BigUint::zero());
        UnramifiedElement { ring: ring.clone(), coeffs: v, den_exp }
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    /// Absolute precision of the value: `prec - den_exp`.
    pub fn absolute_precision(&self) -> i64 {
        self.ring.prec as i64 - self.den_exp as i64
    }

    fn rescaled(&self, k: u32) -> Self {
        if k == self.den_exp {
            return self.clone();
        }
        let s = pow_p(self.ring.p, k - self.den_exp);
        let m = &self.ring.modulus;
        UnramifiedElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| (c * &s) % m).collect(),
            den_exp: k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.den_exp.max(other.den_exp);
        let (a, b) = (self.rescaled(k), other.rescaled(k));
        let m = &self.ring.modulus;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % m).collect();
        UnramifiedElement { ring: self.ring.clone(), coeffs, den_exp: k }
    }

    pub fn neg(&self) -> Self {
        let m = &self.ring.modulus;
        let coeffs = self.coeffs.iter().map(|x| (m - x) % m).collect();
        UnramifiedElement { ring: self.ring.clone(), coeffs, den_exp: self.den_exp }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.ring.degree;
        let mut v = vec![BigUint::zero(); 2 * d.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::reduce(&self.ring, v, self.den_exp + other.den_exp)
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut r = Self::one(&self.ring);
        for i in (0..e.bits()).rev() {
            r = r.mul(&r);
            if e.bit(i) {
                r = r.mul(self);
            }
        }
        r
    }

    pub fn pow(&self, e: u64) -> Self {
        self.pow_big(&BigUint::from(e))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as an element of `Z_p` residue when it lies in the base.
    pub fn as_base_residue(&self) -> Option<BigUint> {
        if self.den_exp == 0 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

/// `ι(ζ_m)` as a residue mod `p^prec` when `m | p - 1`.
pub fn zeta_in_zp(m: u64, p: u64, prec: u32) -> Result<BigUint> {
    assert!((p - 1) % m == 0);
    let g = least_primitive_root(p);
    let t = teichmuller(g as i64, p, prec)?;
    let r = t.residue().unwrap();
    Ok(r.modpow(&BigUint::from((p - 1) / m), &pow_p(p, prec)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(least_primitive_root(5), 2);
        assert_eq!(least_primitive_root(7), 3);
        assert_eq!(least_primitive_root(23), 5);
    }

    #[test]
    fn factors_multiply_back() {
        for (m, p) in [(5u64, 7u64), (8, 5), (13, 3), (9, 5), (7, 11)] {
            let facs = cyclotomic_factors_mod_p(m, p);
            let d = order_mod(p, m) as usize;
            let mut prod: Fp = vec![1];
            for f in &facs {
                assert_eq!(f.len(), d + 1);
                prod = fp_mul(&prod, f, p);
            }
            let phi: Fp = cyclotomic_poly(m).iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
            assert_eq!(prod, phi);
        }
    }

    #[test]
    fn zeta_has_order_m() {
        let ring = UnramifiedRing::for_roots_of_unity(5, 7, 6).unwrap();
        assert_eq!(ring.degree, 4);
        let z = UnramifiedElement::gen(&ring);
        assert!(z.pow(5) == UnramifiedElement::one(&ring));
        assert!(z != UnramifiedElement::one(&ring));
        let ring = UnramifiedRing::for_roots_of_unity(8, 5, 4).unwrap();
        let z = UnramifiedElement::gen(&ring);
        // ζ_8^2 is ζ_4 = ω(2) = 7 mod 25 at p = 5.
        let z2 = z.pow(2).as_base_residue().unwrap();
        let t = teichmuller(2, 5, 4).unwrap().residue().unwrap();
        assert_eq!(z2, t);
    }

    #[test]
    fn zeta4_at_five() {
        assert_eq!(zeta_in_zp(4, 5, 2).unwrap(), BigUint::from(7u32));
    }
}
