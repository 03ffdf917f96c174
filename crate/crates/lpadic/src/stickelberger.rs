//! Kubota–Leopoldt power series from the tower of Stickelberger elements,
//! and the product of two such series that appears on the cyclotomic side
//! of the Katz factorization.
//!
//! At level `n` the modulus is `Q = f p^(n+1)` with `f` the prime-to-`p`
//! conductor. Units mod `Q` are written `a = (b, ζ u^j)` with `b` mod `f`,
//! `ζ` a Teichmüller root of unity and `0 ≤ j < p^n`, and the projection of
//! `Σ (a/Q - 1/2) σ_a` by the weight `w = χ ω^{-1}` gives
//!
//! `R(T) = Σ_j c_j (1+T)^j`, `c_j = Q^{-1} Σ_{b, ζ} w(a) a`.
//!
//! The half-integer part drops out because `w` is odd. The variable change
//! linking `R` to `L_p(χ, s)` is calibrated against Bernoulli values.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chars::DirichletCharacter;
use crate::iwasawa::{IwasawaSeries, MuLambda, SeriesError};
use crate::kl::{has_trivial_zero, kl_special, KlError, ZpValues};
use crate::padic::{is_odd_prime, pow_p, teichmuller, PadicNumber};
use crate::quad::QuadField;

/// `T ↦ u^e (1+T)^σ - 1` applied to the raw series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub u_power: i64,
    pub inverted: bool,
}

impl Convention {
    /// Every candidate tried by calibration, in a fixed order.
    pub fn candidates() -> Vec<Convention> {
        let mut out = Vec::new();
        for inverted in [false, true] {
            for u_power in [0, 1, -1] {
                out.push(Convention { u_power, inverted });
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        let base = if self.inverted { "(1+T)^-1" } else { "(1+T)" };
        match self.u_power {
            0 => format!("T -> {} - 1", base),
            1 => format!("T -> u*{} - 1", base),
            e => format!("T -> u^{}*{} - 1", e, base),
        }
    }
}

/// `numerator / denominator` in the fraction field of `Λ`; the denominator
/// is only present for the trivial character, whose function has a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlSeries {
    pub numerator: IwasawaSeries,
    pub denominator: Option<IwasawaSeries>,
}

impl KlSeries {
    fn map(&self, f: impl Fn(&IwasawaSeries) -> IwasawaSeries) -> Self {
        KlSeries { numerator: f(&self.numerator), denominator: self.denominator.as_ref().map(f) }
    }

    pub fn substitute(&self, c: Convention) -> Self {
        self.map(|s| {
            let t = s.twist_pow(c.u_power);
            if c.inverted {
                t.involution()
            } else {
                t
            }
        })
    }

    pub fn twist(&self) -> Self {
        self.map(|s| s.twist())
    }

    pub fn involution(&self) -> Self {
        self.map(|s| s.involution())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let numerator = self.numerator.mul(&other.numerator)?;
        let denominator = match (&self.denominator, &other.denominator) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a.mul(b)?),
        };
        Ok(KlSeries { numerator, denominator })
    }

    /// Value at `T = u^s - 1`. A denominator vanishing to the available
    /// precision is reported as the pole at `s = 1`.
    pub fn evaluate(&self, s: &PadicNumber) -> Result<PadicNumber, KlError> {
        let num = self.numerator.evaluate(s)?;
        match &self.denominator {
            None => Ok(num),
            Some(d) => {
                let den = d.evaluate(s)?;
                if den.is_zero() {
                    return Err(KlError::PoleAtOne);
                }
                Ok(num.div(&den)?)
            }
        }
    }

    pub fn mu_lambda(&self) -> Result<MuLambda, SeriesError> {
        self.numerator.mu_lambda()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.as_ref().map(|d| d.to_json()),
        })
    }
}

/// One calibration comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CalibrationPoint {
    pub n: u32,
    pub matches: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub chosen: Convention,
    pub description: String,
    pub points: Vec<CalibrationPoint>,
    pub skipped_trivial_zeros: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct StickelbergerSeries {
    pub series: KlSeries,
    pub raw: KlSeries,
    pub level: u32,
    pub calibration: Calibration,
}

/// The level-`n` Stickelberger element `Σ_{a ∈ (Z/Q)^×} (a/Q - 1/2) σ_a`,
/// `Q = f p^(n+1)`, kept as exact rationals.
#[derive(Clone, Debug)]
pub struct StickelbergerElement {
    pub f: u64,
    pub p: u64,
    pub level: u32,
    pub modulus: u64,
}

impl StickelbergerElement {
    pub fn new(f: u64, p: u64, level: u32) -> Self {
        let modulus = f * p.pow(level + 1);
        StickelbergerElement { f, p, level, modulus }
    }

    pub fn coefficient(&self, a: u64) -> Option<BigRational> {
        if a.gcd(&self.modulus) != 1 {
            return None;
        }
        let a = a % self.modulus;
        Some(BigRational::new((2 * a).into(), (2 * self.modulus).into()) - BigRational::new(1.into(), 2.into()))
    }

    /// `(a, coefficient)` over the units.
    pub fn coefficients(&self) -> Vec<(u64, BigRational)> {
        (1..self.modulus).filter_map(|a| self.coefficient(a).map(|c| (a, c))).collect()
    }

    /// Image under `(Z/Q_n)^× → (Z/Q_{n-1})^×`.
    pub fn project(&self) -> Vec<(u64, BigRational)> {
        assert!(self.level >= 1);
        let lower = self.modulus / self.p;
        let mut acc = vec![BigRational::zero(); lower as usize];
        for (a, c) in self.coefficients() {
            acc[(a % lower) as usize] += c;
        }
        (1..lower).filter(|a| a.gcd(&lower) == 1).map(|a| (a, acc[a as usize].clone())).collect()
    }
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    a * b % m
}

fn inv_mod(a: u128, m: u128) -> u128 {
    let a = BigUint::from(a);
    a.modinv(&BigUint::from(m)).unwrap().to_u128().unwrap()
}

/// Split of the conductor of a primitive character into prime-to-`p` part
/// and `p`-exponent.
fn tame_part(cond: u64, p: u64) -> Result<u64, KlError> {
    if cond % (p * p) == 0 {
        return Err(KlError::WildConductor(cond));
    }
    Ok(if cond % p == 0 { cond / p } else { cond })
}

/// Raw series `R` (and the regularizing denominator for the trivial
/// character) at level `n = N - 1`.
pub fn raw_series(chi: &DirichletCharacter, p: u64, prec: u32, trunc: usize) -> Result<(KlSeries, u32), KlError> {
    if !is_odd_prime(p) {
        return Err(crate::padic::PadicError::BadPrime(p).into());
    }
    if prec < 2 {
        return Err(KlError::BadInput("precision must be at least 2".into()));
    }
    if !chi.is_even() {
        return Err(KlError::TrivialProjection);
    }
    let chi = chi.primitive().reduced();
    let f = tame_part(chi.modulus(), p)?;
    let trivial = chi.is_trivial();
    let level = prec - 1;
    let pn1 = p.pow(level + 1);
    let q = f as u128 * pn1 as u128;
    let big_r = pow_p(p, prec + level + 1).to_u128().ok_or(KlError::BadInput("precision too large".into()))?;
    if big_r > u64::MAX as u128 {
        return Err(KlError::BadInput("precision too large".into()));
    }

    // w = χ ω^{-1} with values in Z_p.
    let w = chi.mul(&DirichletCharacter::omega_power(p, -1)).reduced();
    let wv = ZpValues::new(&w, p, prec + level + 1)?;
    let wm = w.order();

    // Teichmüller representatives mod p^(n+1).
    let zetas: Vec<u128> = (1..p)
        .map(|r| teichmuller(r as i64, p, level + 1).unwrap().residue().unwrap().to_u128().unwrap())
        .collect();
    let units_f: Vec<u64> = (0..f.max(1)).filter(|b| b.gcd(&f) == 1).collect();
    // CRT idempotents for Q = f * p^(n+1).
    let e_f = if f == 1 { 0 } else { pn1 as u128 * inv_mod(pn1 as u128 % f as u128, f as u128) % q };
    let e_p = f as u128 * inv_mod(f as u128 % pn1 as u128, pn1 as u128) % q;

    // Group (b, ζ) by the exponent of w, which only depends on a mod f p.
    let mut classes: Vec<Vec<(u128, usize)>> = vec![Vec::new(); wm as usize];
    for &b in &units_f {
        for (zi, &z) in zetas.iter().enumerate() {
            let a_small = (b as u128 * e_f + z * e_p) % q;
            let e = wv.exponent(a_small as i64).expect("unit");
            classes[e as usize].push((b as u128 * e_f % q, zi));
        }
    }
    let weights: Vec<u128> = (0..wm).map(|e| wv.root_power(e).to_u128().unwrap()).collect();

    let u = (p + 1) as u128;
    let count = p.pow(level) as usize;
    // u^j mod p^(n+1)
    let mut upow = Vec::with_capacity(count);
    let mut x: u128 = 1;
    for _ in 0..count {
        upow.push(x);
        x = x * u % pn1 as u128;
    }
    let s: Vec<u128> = upow
        .par_iter()
        .map(|&uj| {
            let mut total: u128 = 0;
            for (e, class) in classes.iter().enumerate() {
                if class.is_empty() {
                    continue;
                }
                let mut sum: u128 = 0;
                for &(bpart, zi) in class {
                    let r = zetas[zi] * uj % pn1 as u128;
                    sum += (bpart + r * e_p) % q;
                }
                total = (total + mulmod(sum % big_r, weights[e], big_r)) % big_r;
            }
            total
        })
        .collect();

    let md = pow_p(p, prec).to_u128().unwrap();
    let inv_f = inv_mod(f as u128 % md, md);
    let pn1_128 = pn1 as u128;
    let divide = |x: u128, j: usize| -> Result<u128, KlError> {
        if x % pn1_128 != 0 {
            return Err(KlError::NotIntegral(j as u64));
        }
        Ok(x / pn1_128 % md * inv_f % md)
    };
    let coeffs: Vec<u128> = if trivial {
        // Multiply by 1 - uγ to clear the pole: g_j = c_j - u c_{j-1}.
        (0..count)
            .map(|j| {
                let prev = s[(j + count - 1) % count];
                let g = (s[j] + big_r - u * prev % big_r) % big_r;
                divide(g, j)
            })
            .collect::<Result<_, _>>()?
    } else {
        s.iter().enumerate().map(|(j, &x)| divide(x, j)).collect::<Result<_, _>>()?
    };

    // R(T) = Σ c_j (1+T)^j mod (p^N, T^M), by Horner in (1+T).
    let mut g = vec![0u128; trunc];
    for &c in coeffs.iter().rev() {
        for k in (1..trunc).rev() {
            g[k] = (g[k] + g[k - 1]) % md;
        }
        g[0] = (g[0] + c) % md;
    }
    let numerator = IwasawaSeries::from_coeffs(p, prec, trunc, g.into_iter().map(BigUint::from).collect())
        .with_eval_cap(level + 1)
        .neg();
    let denominator = trivial.then(|| {
        // 1 - u(1+T)
        IwasawaSeries::from_i64(p, prec, trunc, &[1 - (p as i64 + 1), -(p as i64 + 1)])
    });
    Ok((KlSeries { numerator, denominator }, level))
}

/// The Stickelberger series of an even character with tame conductor,
/// calibrated so that `F(u^s - 1) = L_p(χ, s)`.
pub fn stickelberger_series(
    chi: &DirichletCharacter,
    p: u64,
    prec: u32,
    trunc: usize,
) -> Result<StickelbergerSeries, KlError> {
    let (raw, level) = raw_series(chi, p, prec, trunc)?;
    let candidates = Convention::candidates();
    let mut alive = vec![true; candidates.len()];
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for n in [1u32, 2] {
        if has_trivial_zero(chi, n, p) {
            skipped.push(n);
            continue;
        }
        let expect = kl_special(chi, n, p, prec + 4)?;
        let expect = expect.padic().cloned().ok_or(KlError::NotInZp(0, p))?;
        let s = PadicNumber::from_int(p, 1 - n as i64, prec + 8);
        let matches: Vec<bool> = candidates
            .iter()
            .map(|&c| match raw.substitute(c).evaluate(&s) {
                Ok(v) => {
                    let a = v.agrees_with(&expect);
                    a.equal && a.precision >= 1
                }
                Err(_) => false,
            })
            .collect();
        for (al, m) in alive.iter_mut().zip(&matches) {
            *al &= *m;
        }
        points.push(CalibrationPoint { n, matches });
    }
    let hits: Vec<usize> = (0..candidates.len()).filter(|&i| alive[i]).collect();
    if hits.len() != 1 || points.is_empty() {
        return Err(KlError::ConventionMismatch(hits.len()));
    }
    let chosen = candidates[hits[0]];
    Ok(StickelbergerSeries {
        series: raw.substitute(chosen),
        raw,
        level,
        calibration: Calibration {
            chosen,
            description: chosen.describe(),
            points,
            skipped_trivial_zeros: skipped,
        },
    })
}

#[derive(Clone, Debug)]
pub struct GrossRhs {
    pub series: KlSeries,
    pub first: StickelbergerSeries,
    pub second: StickelbergerSeries,
    pub second_character: DirichletCharacter,
}

/// `L_p(χ^{-1}) · Tw(L_p(χ ε_K ω))^ι`, so that the value at `s` is
/// `L_p(χ^{-1}, s) · L_p(χ ε_K ω, 1 - s)`.
pub fn gross_rhs(chi: &DirichletCharacter, disc: i64, p: u64, prec: u32, trunc: usize) -> Result<GrossRhs, KlError> {
    let field = QuadField::new(disc).map_err(|e| KlError::BadInput(e.to_string()))?;
    if field.kronecker(p as i64) != 1 {
        return Err(KlError::NotSplit(p, disc));
    }
    let inv = chi.inverse();
    if !inv.is_even() {
        return Err(KlError::ParityViolation("chi^-1".into()));
    }
    let second = chi.mul(&field.character()).mul(&DirichletCharacter::omega_power(p, 1));
    if !second.is_even() {
        return Err(KlError::ParityViolation("chi eps_K omega".into()));
    }
    let first = stickelberger_series(&inv, p, prec, trunc)?;
    let other = stickelberger_series(&second, p, prec, trunc)?;
    let series = first.series.mul(&other.series.twist().involution())?;
    Ok(GrossRhs { series, first, second: other, second_character: second })
}

/// Reduces a rational mod `p^prec` as an element of `Z_p`.
pub fn rational_to_residue(r: &BigRational, p: u64, prec: u32) -> Option<BigUint> {
    let x = PadicNumber::from_rational(p, r, prec);
    x.residue().map(|v| v % pow_p(p, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_compatible() {
        let lower = StickelbergerElement::new(3, 5, 0);
        let upper = StickelbergerElement::new(3, 5, 1);
        assert_eq!(upper.project(), lower.coefficients());
    }

    #[test]
    fn calibrates_for_omega_squared() {
        let chi = DirichletCharacter::omega_power(5, 2);
        let st = stickelberger_series(&chi, 5, 4, 16).unwrap();
        let s = PadicNumber::from_int(5, -1, 20);
        let v = st.series.evaluate(&s).unwrap();
        let third = PadicNumber::from_rational(5, &BigRational::new(1.into(), 3.into()), 8);
        assert!(v.agrees_with(&third).equal);
    }
}
