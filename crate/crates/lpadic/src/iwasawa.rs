//! Truncated power series in `Z_p[[T]]`, modulo `(p^N, T^M)`.
//!
//! The variable is attached to the topological generator `γ` with
//! `⟨χ_cyc⟩(γ) = u = 1 + p`, so evaluating at `T = u^s - 1` is evaluation at
//! the character `γ ↦ u^s`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{is_odd_prime, one_unit_pow, pow_p, split_valuation, PadicError, PadicNumber};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series is zero at the declared precision")]
    ZeroAtPrecision,
    #[error("no precision left after evaluation")]
    PrecisionExhausted,
    #[error("evaluation point must lie in Z_p")]
    NotIntegral,
    #[error("series for different primes or precisions")]
    Mismatch,
    #[error("bad series data: {0}")]
    Parse(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// `Σ c_i T^i` with `c_i` known mod `p^N` and terms from `T^M` on dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaSeries {
    p: u64,
    n: u32,
    coeffs: Vec<BigUint>,
    // Cap on the precision of any evaluation, beyond N and M. Series built
    // from a finite level of a tower only determine values to that level.
    eval_cap: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuLambda {
    pub mu: u32,
    pub lambda: usize,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    p: u64,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "M")]
    m: usize,
    coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eval_precision: Option<u32>,
}

impl IwasawaSeries {
    pub fn from_coeffs(p: u64, n: u32, m: usize, coeffs: Vec<BigUint>) -> Self {
        assert!(is_odd_prime(p), "p must be an odd prime");
        assert!(m >= 1 && n >= 1);
        let md = pow_p(p, n);
        let mut c: Vec<BigUint> = coeffs.into_iter().take(m).map(|x| x % &md).collect();
        c.resize(m, BigUint::zero());
        IwasawaSeries { p, n, coeffs: c, eval_cap: u32::MAX }
    }

    pub fn from_i64(p: u64, n: u32, m: usize, coeffs: &[i64]) -> Self {
        let md = BigInt::from_biguint(Sign::Plus, pow_p(p, n));
        let c = coeffs.iter().map(|&x| BigInt::from(x).mod_floor(&md).to_biguint().unwrap()).collect();
        Self::from_coeffs(p, n, m, c)
    }

    pub fn zero(p: u64, n: u32, m: usize) -> Self {
        Self::from_coeffs(p, n, m, vec![])
    }

    pub fn one(p: u64, n: u32, m: usize) -> Self {
        Self::from_coeffs(p, n, m, vec![BigUint::one()])
    }

    /// The series `T`.
    pub fn t(p: u64, n: u32, m: usize) -> Self {
        Self::from_coeffs(p, n, m, vec![BigUint::zero(), BigUint::one()])
    }

    pub fn with_eval_cap(mut self, cap: u32) -> Self {
        self.eval_cap = self.eval_cap.min(cap);
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Coefficient precision `N`.
    pub fn precision(&self) -> u32 {
        self.n
    }

    /// Truncation order `M`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval_cap(&self) -> u32 {
        self.eval_cap
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Coefficients as signed representatives in `(-p^N/2, p^N/2]`.
    pub fn signed_coeffs(&self) -> Vec<BigInt> {
        let md = pow_p(self.p, self.n);
        let half = &md >> 1;
        self.coeffs
            .iter()
            .map(|c| {
                let ci = BigInt::from_biguint(Sign::Plus, c.clone());
                if c > &half {
                    ci - BigInt::from_biguint(Sign::Plus, md.clone())
                } else {
                    ci
                }
            })
            .collect()
    }

    fn modulus(&self) -> BigUint {
        pow_p(self.p, self.n)
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.p != other.p || self.n != other.n || self.coeffs.len() != other.coeffs.len() {
            return Err(SeriesError::Mismatch);
        }
        Ok(())
    }

    fn same_shape(&self, coeffs: Vec<BigUint>, cap: u32) -> Self {
        IwasawaSeries { p: self.p, n: self.n, coeffs, eval_cap: cap }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let md = self.modulus();
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % &md).collect();
        Ok(self.same_shape(c, self.eval_cap.min(other.eval_cap)))
    }

    pub fn neg(&self) -> Self {
        let md = self.modulus();
        let c = self.coeffs.iter().map(|a| (&md - a) % &md).collect();
        self.same_shape(c, self.eval_cap)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let m = self.coeffs.len();
        let md = self.modulus();
        let mut c = vec![BigUint::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..m - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        for x in c.iter_mut() {
            *x %= &md;
        }
        Ok(self.same_shape(c, self.eval_cap.min(other.eval_cap)))
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        let md = self.modulus();
        let c = self.coeffs.iter().map(|a| a * k % &md).collect();
        self.same_shape(c, self.eval_cap)
    }

    /// `F(A(T))` for a series `A` with `A(0) ≡ 0 mod p` or `A(0) = 0`.
    fn compose(&self, a: &[BigUint]) -> Self {
        let m = self.coeffs.len();
        let md = self.modulus();
        let mut g = vec![BigUint::zero(); m];
        for c in self.coeffs.iter().rev() {
            let mut next = vec![BigUint::zero(); m];
            for (i, gi) in g.iter().enumerate() {
                if gi.is_zero() {
                    continue;
                }
                for (j, aj) in a.iter().enumerate().take(m - i) {
                    next[i + j] += gi * aj;
                }
            }
            next[0] += c;
            for x in next.iter_mut() {
                *x %= &md;
            }
            g = next;
        }
        self.same_shape(g, self.eval_cap)
    }

    fn u_pow_residue(&self, e: i64) -> BigUint {
        let md = self.modulus();
        let u = BigUint::from(self.p + 1);
        if e >= 0 {
            u.modpow(&BigUint::from(e as u64), &md)
        } else {
            u.modinv(&md).unwrap().modpow(&BigUint::from((-e) as u64), &md)
        }
    }

    /// `F(u^e (1 + T) - 1)`. Coefficients of `T^k` are exact modulo
    /// `p^min(N, M-k)`, which keeps every evaluation exact modulo
    /// `p^min(N, M)`.
    pub fn twist_pow(&self, e: i64) -> Self {
        if e == 0 {
            return self.clone();
        }
        let md = self.modulus();
        let ue = self.u_pow_residue(e);
        let a0 = (&ue + &md - BigUint::one()) % &md;
        self.compose(&[a0, ue])
    }

    /// The twist `F(u(1+T) - 1)`.
    pub fn twist(&self) -> Self {
        self.twist_pow(1)
    }

    /// `F((1+T)^{-1} - 1)`, exact modulo `T^M`.
    pub fn involution(&self) -> Self {
        let m = self.coeffs.len();
        let md = self.modulus();
        let a: Vec<BigUint> = (0..m)
            .map(|k| match k {
                0 => BigUint::zero(),
                k if k % 2 == 1 => &md - BigUint::one(),
                _ => BigUint::one(),
            })
            .collect();
        self.compose(&a)
    }

    /// `u^s - 1` together with its absolute precision.
    fn point(&self, s: &PadicNumber, work: u32) -> Result<(BigUint, u32), SeriesError> {
        if let Some(v) = s.valuation() {
            if v < 0 {
                return Err(SeriesError::NotIntegral);
            }
        }
        let u = PadicNumber::from_int(self.p, self.p as i64 + 1, work + 2);
        let us = one_unit_pow(&u, s)?;
        let t = us.sub(&PadicNumber::one(self.p, work + 2));
        let prec = t.absolute_precision().max(0) as u32;
        let t = t.truncate_abs(prec.min(work) as i64);
        Ok((t.residue().unwrap_or_default(), prec.min(work)))
    }

    /// The precision an evaluation at `s` can claim.
    pub fn eval_precision(&self, s: &PadicNumber) -> u32 {
        let from_s = (s.absolute_precision() + 1).max(0).min(u32::MAX as i64) as u32;
        self.n.min(self.coeffs.len() as u32).min(self.eval_cap).min(from_s)
    }

    /// `F(u^s - 1)`.
    pub fn evaluate(&self, s: &PadicNumber) -> Result<PadicNumber, SeriesError> {
        let prec = self.eval_precision(s);
        if prec == 0 {
            return Err(SeriesError::PrecisionExhausted);
        }
        let (t, tp) = self.point(s, prec)?;
        let prec = prec.min(tp);
        if prec == 0 {
            return Err(SeriesError::PrecisionExhausted);
        }
        let md = pow_p(self.p, prec);
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * &t + c) % &md;
        }
        Ok(PadicNumber::from_residue(self.p, &acc, prec))
    }

    /// `μ` and `λ` read off the truncated coefficients.
    pub fn mu_lambda(&self) -> Result<MuLambda, SeriesError> {
        let mut best: Option<(u32, usize)> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = split_valuation(self.p, c).0;
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, i));
            }
        }
        // The readout only sees terms below T^M: a smaller valuation past the
        // truncation would lower μ.
        best.map(|(mu, lambda)| MuLambda { mu, lambda }).ok_or(SeriesError::ZeroAtPrecision)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = SeriesJson {
            p: self.p,
            n: self.n,
            m: self.coeffs.len(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            eval_precision: (self.eval_cap != u32::MAX).then_some(self.eval_cap),
        };
        serde_json::to_value(j).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, SeriesError> {
        let j: SeriesJson = serde_json::from_value(v.clone()).map_err(|e| SeriesError::Parse(e.to_string()))?;
        if !is_odd_prime(j.p) || j.n == 0 || j.m == 0 || j.coeffs.len() > j.m {
            return Err(SeriesError::Parse("p, N, M or coefficient count out of range".into()));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| SeriesError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let md = BigInt::from_biguint(Sign::Plus, pow_p(j.p, j.n));
        let c = coeffs.iter().map(|x| x.mod_floor(&md).to_biguint().unwrap()).collect();
        let mut s = Self::from_coeffs(j.p, j.n, j.m, c);
        if let Some(cap) = j.eval_precision {
            s = s.with_eval_cap(cap);
        }
        Ok(s)
    }
}

impl fmt::Display for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.signed_coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*T", c)?,
                _ => write!(f, "{}*T^{}", c, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{}, T^{})", self.p, self.n, self.coeffs.len())
    }
}

/// Small helper for tests and the CLI: the residue of a value as `u64`.
pub fn small_residue(x: &PadicNumber) -> Option<u64> {
    x.residue().and_then(|r| r.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        let t = IwasawaSeries::t(5, 3, 10);
        let s = PadicNumber::from_int(5, 1, 10);
        assert_eq!(small_residue(&t.evaluate(&s).unwrap()), Some(5));
        let t2 = t.mul(&t).unwrap();
        assert_eq!(small_residue(&t2.evaluate(&s).unwrap()), Some(25));
        let one_plus_t = IwasawaSeries::from_i64(5, 3, 10, &[1, 1]);
        assert_eq!(small_residue(&one_plus_t.evaluate(&s).unwrap()), Some(6));
    }

    #[test]
    fn twist_of_t() {
        let t = IwasawaSeries::t(5, 4, 6);
        assert_eq!(t.twist(), IwasawaSeries::from_i64(5, 4, 6, &[5, 6]));
        let one = IwasawaSeries::one(5, 4, 6);
        assert_eq!(one.twist(), one);
    }

    #[test]
    fn involution_of_t() {
        let t = IwasawaSeries::t(7, 3, 5);
        assert_eq!(t.involution(), IwasawaSeries::from_i64(7, 3, 5, &[0, -1, 1, -1, 1]));
        assert_eq!(t.involution().involution(), t);
    }

    #[test]
    fn mu_lambda_examples() {
        let f = IwasawaSeries::from_i64(5, 4, 6, &[5, 0, 1]);
        assert_eq!(f.mu_lambda().unwrap(), MuLambda { mu: 0, lambda: 2 });
        let g = IwasawaSeries::from_i64(5, 4, 6, &[5, 5]);
        assert_eq!(g.mu_lambda().unwrap(), MuLambda { mu: 1, lambda: 0 });
        let h = IwasawaSeries::from_i64(5, 4, 6, &[3, 7]);
        assert_eq!(h.mu_lambda().unwrap(), MuLambda { mu: 0, lambda: 0 });
        assert_eq!(IwasawaSeries::zero(5, 4, 6).mu_lambda(), Err(SeriesError::ZeroAtPrecision));
    }

    #[test]
    fn json_roundtrip() {
        let f = IwasawaSeries::from_i64(7, 5, 4, &[1, -2, 3]).with_eval_cap(3);
        let back = IwasawaSeries::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }
}
