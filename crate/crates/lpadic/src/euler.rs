//! Modified Euler factors at `p` as exact rational functions of Hecke
//! parameters, and randomized exact checks of the factorization identities
//! between them.
//!
//! Every factor here is a product of linear forms `1 - c·m` with `m` a
//! Laurent monomial in the six Hecke roots and `p`. Keeping the factors
//! symbolic lets the identity checks report exactly which linear forms
//! fail to cancel.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("alpha is zero")]
    ZeroAlpha,
    #[error("zero denominator in factor {0}")]
    ZeroDenominator(String),
    #[error("alpha is not a p-adic unit")]
    NotOrdinary,
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

type Result<T> = std::result::Result<T, EulerError>;

/// Roots `α_f, β_f, α_g, β_g, α_h, β_h`, in this order.
pub const SYMBOLS: [&str; 6] = ["a_f", "b_f", "a_g", "b_g", "a_h", "b_h"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    F,
    G,
    H,
}

impl Family {
    fn alpha(self) -> usize {
        self as usize * 2
    }
    fn beta(self) -> usize {
        self as usize * 2 + 1
    }
}

/// `1 - sign · Π x_i^{e_i} · p^{pexp}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    pub exps: [i32; 6],
    pub pexp: i64,
    pub sign: i32,
}

impl LinearForm {
    fn new(pairs: &[(usize, i32)], pexp: i64) -> Self {
        let mut exps = [0; 6];
        for &(i, e) in pairs {
            exps[i] += e;
        }
        LinearForm { exps, pexp, sign: 1 }
    }

    fn with_sign(mut self, sign: i32) -> Self {
        self.sign = sign;
        self
    }

    fn monomial(&self, pt: &Point) -> Result<BigRational> {
        let mut v = BigRational::from_integer(BigInt::from(self.sign));
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let x = &pt.roots[i];
            if e < 0 && x.is_zero() {
                return Err(EulerError::ZeroDenominator(self.to_string()));
            }
            v *= rat_pow(x, e);
        }
        Ok(v * rat_pow(&BigRational::from_integer(BigInt::from(pt.p)), self.pexp as i32))
    }

    pub fn value(&self, pt: &Point) -> Result<BigRational> {
        Ok(BigRational::one() - self.monomial(pt)?)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            let s = if e.abs() == 1 { SYMBOLS[i].to_string() } else { format!("{}^{}", SYMBOLS[i], e.abs()) };
            if e > 0 {
                num.push(s);
            } else if e < 0 {
                den.push(s);
            }
        }
        match self.pexp {
            0 => {}
            e if e > 0 => num.push(format!("p^{}", e)),
            e => den.push(format!("p^{}", -e)),
        }
        let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
        let sign = if self.sign < 0 { "+" } else { "-" };
        if den.is_empty() {
            write!(f, "(1 {} {})", sign, num)
        } else {
            write!(f, "(1 {} {}/({}))", sign, num, den.join("*"))
        }
    }
}

fn rat_pow(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// A product of linear forms with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerProduct {
    pub factors: Vec<(LinearForm, u32)>,
}

impl EulerProduct {
    fn squared_forms(forms: Vec<LinearForm>) -> Self {
        EulerProduct { factors: forms.into_iter().map(|l| (l, 2)).collect() }
    }

    fn simple(forms: Vec<LinearForm>) -> Self {
        EulerProduct { factors: forms.into_iter().map(|l| (l, 1)).collect() }
    }

    pub fn value(&self, pt: &Point) -> Result<BigRational> {
        let mut v = BigRational::one();
        for (l, m) in &self.factors {
            v *= num_traits::pow(l.value(pt)?, *m as usize);
        }
        Ok(v)
    }

    pub fn pow(&self, n: u32) -> Self {
        EulerProduct { factors: self.factors.iter().map(|(l, m)| (l.clone(), m * n)).collect() }
    }

    /// Halves every even multiplicity, undoing squares written on the
    /// individual linear forms.
    pub fn inner_unsquared(&self) -> Self {
        EulerProduct {
            factors: self.factors.iter().map(|(l, m)| (l.clone(), if m % 2 == 0 { m / 2 } else { *m })).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        EulerProduct { factors }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    /// Fully multiplied out: monomial `(exps, pexp) ↦ coefficient`.
    pub fn expand(&self) -> BTreeMap<([i32; 6], i64), BigInt> {
        let mut poly: BTreeMap<([i32; 6], i64), BigInt> = BTreeMap::new();
        poly.insert(([0; 6], 0), BigInt::one());
        for (l, m) in &self.factors {
            for _ in 0..*m {
                let mut next: BTreeMap<([i32; 6], i64), BigInt> = BTreeMap::new();
                for ((e, pe), c) in &poly {
                    *next.entry((*e, *pe)).or_insert_with(BigInt::zero) += c;
                    let mut e2 = *e;
                    for i in 0..6 {
                        e2[i] += l.exps[i];
                    }
                    *next.entry((e2, pe + l.pexp)).or_insert_with(BigInt::zero) -= c * BigInt::from(l.sign);
                }
                next.retain(|_, c| !c.is_zero());
                poly = next;
            }
        }
        poly
    }

    /// Evaluates the expanded polynomial.
    pub fn expanded_value(&self, pt: &Point) -> Result<BigRational> {
        let mut v = BigRational::zero();
        for ((e, pe), c) in self.expand() {
            let l = LinearForm { exps: e, pexp: pe, sign: 1 };
            v += l.monomial(pt)? * BigRational::from_integer(c);
        }
        Ok(v)
    }

    fn labelled_values(&self, pt: &Point) -> Result<Vec<(String, BigRational)>> {
        let mut out = Vec::new();
        for (l, m) in &self.factors {
            let v = l.value(pt)?;
            for _ in 0..*m {
                out.push((l.to_string(), v.clone()));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for EulerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{}^{}", l, m) })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Numeric values for the six roots at one prime.
#[derive(Clone, Debug)]
pub struct Point {
    pub p: u64,
    pub roots: [BigRational; 6],
}

fn rat_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut n = x.numer().clone();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    let mut d = x.denom().clone();
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    Some(v)
}

fn parse_rat(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| EulerError::BadParameter(s.to_string()))
}

fn pk(p: u64, e: i64) -> BigRational {
    rat_pow(&BigRational::from_integer(BigInt::from(p)), e as i32)
}

/// Hecke parameters of an eigenform at `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeParams {
    pub p: u64,
    pub k: i64,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub eps_p: BigRational,
    pub arithmetic: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeJson {
    pub p: u64,
    pub k: i64,
    pub alpha: String,
    #[serde(default)]
    pub beta: Option<String>,
    #[serde(default)]
    pub eps_p: Option<String>,
}

impl HeckeParams {
    /// Any nonzero scalars; no relation is imposed.
    pub fn evaluator(p: u64, k: i64, alpha: BigRational, beta: BigRational) -> Self {
        HeckeParams { p, k, alpha, beta, eps_p: BigRational::one(), arithmetic: false }
    }

    /// `β = ε_p p^{k-1} / α` with `α` a `p`-adic unit.
    pub fn arithmetic(p: u64, k: i64, alpha: BigRational, eps_p: BigRational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(EulerError::ZeroAlpha);
        }
        if rat_valuation(&alpha, p) != Some(0) {
            return Err(EulerError::NotOrdinary);
        }
        let beta = &eps_p * pk(p, k - 1) / &alpha;
        Ok(HeckeParams { p, k, alpha, beta, eps_p, arithmetic: true })
    }

    pub fn satisfies_relation(&self) -> bool {
        &self.alpha * &self.beta == &self.eps_p * pk(self.p, self.k - 1)
    }

    pub fn a_p(&self) -> BigRational {
        &self.alpha + &self.beta
    }

    pub fn from_json(j: &HeckeJson) -> Result<Self> {
        let alpha = parse_rat(&j.alpha)?;
        let eps = j.eps_p.as_deref().map(parse_rat).transpose()?.unwrap_or_else(BigRational::one);
        match &j.beta {
            Some(b) => Ok(HeckeParams { eps_p: eps, ..Self::evaluator(j.p, j.k, alpha, parse_rat(b)?) }),
            None => Self::arithmetic(j.p, j.k, alpha, eps),
        }
    }

    pub fn to_json(&self) -> HeckeJson {
        HeckeJson {
            p: self.p,
            k: self.k,
            alpha: self.alpha.to_string(),
            beta: Some(self.beta.to_string()),
            eps_p: Some(self.eps_p.to_string()),
        }
    }
}

/// Values `Ψ(𝔭)`, `Ψ(𝔭^c)` of the Hecke character of a CM form.
#[derive(Clone, Debug, PartialEq)]
pub struct CMParams {
    pub p: u64,
    pub w: i64,
    pub psi_p: BigRational,
    pub psi_pbar: BigRational,
    pub eps_p: BigRational,
    pub arithmetic: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CMJson {
    pub p: u64,
    pub w: i64,
    pub psi_p: String,
    pub psi_pbar: String,
}

impl CMParams {
    /// `Ψ(𝔭) = ε_p p^{w-1} / Ψ(𝔭^c)` with `Ψ(𝔭^c)` a `p`-adic unit.
    pub fn arithmetic(p: u64, w: i64, psi_pbar: BigRational, eps_p: BigRational) -> Result<Self> {
        if rat_valuation(&psi_pbar, p) != Some(0) {
            return Err(EulerError::NotOrdinary);
        }
        let psi_p = &eps_p * pk(p, w - 1) / &psi_pbar;
        Ok(CMParams { p, w, psi_p, psi_pbar, eps_p, arithmetic: true })
    }

    pub fn evaluator(p: u64, w: i64, psi_p: BigRational, psi_pbar: BigRational) -> Self {
        CMParams { p, w, psi_p, psi_pbar, eps_p: BigRational::one(), arithmetic: false }
    }

    pub fn from_json(j: &CMJson) -> Result<Self> {
        Ok(Self::evaluator(j.p, j.w, parse_rat(&j.psi_p)?, parse_rat(&j.psi_pbar)?))
    }

    /// `{α, β} = {Ψ(𝔭), Ψ(𝔭^c)}` with `α` the unit root in arithmetic mode
    /// and `α = Ψ(𝔭)` otherwise.
    pub fn to_hecke(&self) -> HeckeParams {
        let (alpha, beta) = if self.arithmetic && rat_valuation(&self.psi_p, self.p) != Some(0) {
            (self.psi_pbar.clone(), self.psi_p.clone())
        } else {
            (self.psi_p.clone(), self.psi_pbar.clone())
        };
        HeckeParams { p: self.p, k: self.w, alpha, beta, eps_p: self.eps_p.clone(), arithmetic: self.arithmetic }
    }
}

fn point(f: &HeckeParams, g: &HeckeParams, h: &HeckeParams) -> Point {
    Point {
        p: f.p,
        roots: [
            f.alpha.clone(),
            f.beta.clone(),
            g.alpha.clone(),
            g.beta.clone(),
            h.alpha.clone(),
            h.beta.clone(),
        ],
    }
}

/// `(1 - β/α)(1 - β/(pα))`.
pub fn euler_adjoint(f: &HeckeParams) -> Result<BigRational> {
    if f.alpha.is_zero() {
        return Err(EulerError::ZeroAlpha);
    }
    let r = &f.beta / &f.alpha;
    let p = BigRational::from_integer(BigInt::from(f.p));
    Ok((BigRational::one() - &r) * (BigRational::one() - r / p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    F,
    G,
}

/// Four-factor Rankin–Selberg factor at `s = j`, with `x` the dominant
/// family and `y` the other.
pub fn deg4_product(x: Family, y: Family, j: i64) -> EulerProduct {
    let (ax, bx, ay, by) = (x.alpha(), x.beta(), y.alpha(), y.beta());
    EulerProduct::simple(vec![
        LinearForm::new(&[(ax, -1), (ay, -1)], j - 1),
        LinearForm::new(&[(ax, -1), (by, -1)], j - 1),
        LinearForm::new(&[(bx, 1), (ay, 1)], -j),
        LinearForm::new(&[(bx, 1), (by, 1)], -j),
    ])
}

pub fn euler_deg4(f: &HeckeParams, g: &HeckeParams, j: i64, dom: Dominance) -> Result<BigRational> {
    let prod = match dom {
        Dominance::F => deg4_product(Family::F, Family::G, j),
        Dominance::G => deg4_product(Family::G, Family::F, j),
    };
    prod.value(&point(f, g, g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleRegion {
    F,
    G,
    H,
    Bal,
}

/// Triple-product factor at the central point `c`, squares included as
/// displayed. The `g`- and `h`-dominant factors are the `f`-dominant one
/// with the roles exchanged.
pub fn triple_product(region: TripleRegion, c: i64) -> EulerProduct {
    use Family::*;
    let dominant = |x: Family, y: Family, z: Family| {
        let mut forms = Vec::new();
        for yy in [y.alpha(), y.beta()] {
            for zz in [z.alpha(), z.beta()] {
                forms.push(LinearForm::new(&[(x.beta(), 1), (yy, 1), (zz, 1)], -c));
            }
        }
        EulerProduct::squared_forms(forms)
    };
    match region {
        TripleRegion::F => dominant(F, G, H),
        TripleRegion::G => dominant(G, F, H),
        TripleRegion::H => dominant(H, F, G),
        TripleRegion::Bal => EulerProduct::squared_forms(vec![
            LinearForm::new(&[(F.alpha(), 1), (G.beta(), 1), (H.beta(), 1)], -c),
            LinearForm::new(&[(F.beta(), 1), (G.alpha(), 1), (H.beta(), 1)], -c),
            LinearForm::new(&[(F.beta(), 1), (G.beta(), 1), (H.alpha(), 1)], -c),
            LinearForm::new(&[(F.beta(), 1), (G.beta(), 1), (H.beta(), 1)], -c),
        ]),
    }
}

pub fn euler_triple(f: &HeckeParams, g: &HeckeParams, h: &HeckeParams, c: i64, region: TripleRegion) -> Result<BigRational> {
    triple_product(region, c).value(&point(f, g, h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BdpVariant {
    Phi,
    PhiPrime,
}

/// The two BDP factors as displayed; both are written with `p^c`.
pub fn bdp_product(variant: BdpVariant, c: i64) -> EulerProduct {
    use Family::*;
    let first = match variant {
        BdpVariant::PhiPrime => LinearForm::new(&[(F.alpha(), 1), (G.beta(), 1), (H.beta(), 1)], -c),
        BdpVariant::Phi => LinearForm::new(&[(F.beta(), 1), (G.beta(), 1), (H.alpha(), 1)], -c),
    };
    let second = LinearForm::new(&[(F.beta(), 1), (G.beta(), 1), (H.beta(), 1)], -c);
    EulerProduct::squared_forms(vec![first, second])
}

/// The `Φ` factor read off the splitting `g ⊗ h = Ind(Ψ_g Ψ_h) ⊕ Ind(Ψ_g Ψ_h^c)`:
/// its linear forms carry the root `β_g α_h`.
pub fn bdp_phi_from_induction(c: i64) -> EulerProduct {
    use Family::*;
    EulerProduct::squared_forms(vec![
        LinearForm::new(&[(F.alpha(), 1), (G.beta(), 1), (H.alpha(), 1)], -c),
        LinearForm::new(&[(F.beta(), 1), (G.beta(), 1), (H.alpha(), 1)], -c),
    ])
}

pub fn euler_bdp(f: &HeckeParams, g: &CMParams, h: &CMParams, c: i64, variant: BdpVariant) -> Result<BigRational> {
    bdp_product(variant, c).value(&point(f, &g.to_hecke(), &h.to_hecke()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdRegion {
    F,
    Ad,
}

/// Three-factor factor for `f ⊗ ad^0(g)` at `j = k/2`.
pub fn adjoint_product(region: AdRegion, j: i64) -> EulerProduct {
    use Family::*;
    let first = match region {
        AdRegion::F => LinearForm::new(&[(F.beta(), 1), (G.alpha(), 1), (G.beta(), -1)], -j),
        AdRegion::Ad => LinearForm::new(&[(F.alpha(), 1), (G.beta(), 1), (G.alpha(), -1)], -j),
    };
    EulerProduct::simple(vec![
        first,
        LinearForm::new(&[(F.beta(), 1)], -j),
        LinearForm::new(&[(F.beta(), 1), (G.beta(), 1), (G.alpha(), -1)], -j),
    ])
}

pub fn euler_ad(f: &HeckeParams, g: &HeckeParams, j: i64, region: AdRegion) -> Result<BigRational> {
    adjoint_product(region, j).value(&point(f, g, g))
}

/// Candidate factor `(1 - ε p^{j-1}/α_f)(1 - ε β_f/p^j)` for `f ⊗ ε_K`.
pub fn quadratic_twist_candidate(eps: i32, j: i64) -> EulerProduct {
    use Family::*;
    EulerProduct::simple(vec![
        LinearForm::new(&[(F.alpha(), -1)], j - 1).with_sign(eps),
        LinearForm::new(&[(F.beta(), 1)], -j).with_sign(eps),
    ])
}

/// Labels of linear forms that do not cancel between the two sides,
/// matched by value at the given point.
pub fn factor_difference(lhs: &EulerProduct, rhs: &EulerProduct, pt: &Point) -> Result<(Vec<String>, Vec<String>)> {
    let l = lhs.labelled_values(pt)?;
    let mut r = rhs.labelled_values(pt)?;
    let mut only_l = Vec::new();
    for (lab, v) in l {
        if let Some(i) = r.iter().position(|(_, w)| *w == v) {
            r.remove(i);
        } else {
            only_l.push(lab);
        }
    }
    Ok((only_l, r.into_iter().map(|(lab, _)| lab).collect()))
}

fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=60);
        if n != 0 && n % p as i64 != 0 && d % p as i64 != 0 {
            return BigRational::new(n.into(), d.into());
        }
    }
}

const PRIMES: [u64; 4] = [5, 7, 11, 13];

#[derive(Clone, Debug)]
struct CmSample {
    f: HeckeParams,
    g: HeckeParams,
    h: HeckeParams,
    k: i64,
    l: i64,
    m: i64,
}

fn cm_sample(rng: &mut ChaCha8Rng, same: bool) -> CmSample {
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    // The self-dual setting has trivial nebentype at p.
    let sign = |rng: &mut ChaCha8Rng| {
        let s = if same || rng.gen_bool(0.5) { 1 } else { -1 };
        BigRational::from_integer(BigInt::from(s))
    };
    let (k, l, m) = if same {
        // even k with 2l > k
        let k = 2 * rng.gen_range(1..=4);
        let l = rng.gen_range(k / 2 + 1..=k / 2 + 4);
        (k, l, l)
    } else {
        // g-dominant: l >= k + m with k + l + m even
        let k = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let l = k + m + 2 * rng.gen_range(0..=3);
        (k, l, m)
    };
    let f = HeckeParams::arithmetic(p, k, random_unit(rng, p), sign(rng)).unwrap();
    let eg = sign(rng);
    let g = CMParams::arithmetic(p, l, random_unit(rng, p), eg.clone()).unwrap().to_hecke();
    let h = if same { g.clone() } else { CMParams::arithmetic(p, m, random_unit(rng, p), sign(rng)).unwrap().to_hecke() };
    CmSample { f, g, h, k, l, m }
}

/// One reading of an identity and how often it held.
#[derive(Clone, Debug, Serialize)]
pub struct ConventionResult {
    pub name: String,
    pub agreements: usize,
    pub samples: usize,
}

impl ConventionResult {
    pub fn holds(&self) -> bool {
        self.samples > 0 && self.agreements == self.samples
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub samples: usize,
    pub seed: u64,
    /// The reading written in the source display.
    pub literal: String,
    pub literal_holds: bool,
    pub conventions: Vec<ConventionResult>,
    /// First convention that held on every sample.
    pub selected: Option<String>,
    /// Linear forms left over under the literal reading, first sample.
    pub lhs_only: Vec<String>,
    pub rhs_only: Vec<String>,
    /// Readings outside the squaring question, reported for diagnosis only.
    pub diagnostics: Vec<ConventionResult>,
    pub uninformative_resamples: usize,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.selected.is_some()
    }
}

type Reading = (String, EulerProduct, EulerProduct);

fn tally(readings: &[Vec<Reading>], points: &[Point]) -> Vec<ConventionResult> {
    let n = readings[0].len();
    (0..n)
        .map(|i| {
            let agreements = readings
                .iter()
                .zip(points)
                .filter(|(rs, pt)| {
                    let (_, l, r) = &rs[i];
                    matches!((l.value(pt), r.value(pt)), (Ok(a), Ok(b)) if a == b)
                })
                .count();
            ConventionResult { name: readings[0][i].0.clone(), agreements, samples: points.len() }
        })
        .collect()
}

/// `E^g(f⊗g⊗h, c)^2 = E^Φ(c) · E^Φ'(c')` for CM `g`, `h`, under each way
/// of reading the squares on the two sides.
pub fn verify_identity_8_eq_4x4(samples: usize, seed: u64) -> IdentityReport {
    let data: Vec<(Point, i64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let s = cm_sample(&mut rng, false);
            let c = (s.k + s.l + s.m) / 2 - 1;
            (point(&s.f, &s.g, &s.h), c)
        })
        .collect();
    let readings_for = |c: i64, phi: &EulerProduct| -> Vec<Reading> {
        let eg = triple_product(TripleRegion::G, c);
        let rhs = phi.mul(&bdp_product(BdpVariant::PhiPrime, c));
        let mut out = Vec::new();
        for (li, lhs_base) in [("displayed", eg.clone()), ("unsquared", eg.inner_unsquared())] {
            for outer in [2u32, 1] {
                for (ri, r) in [("displayed", rhs.clone()), ("unsquared", rhs.inner_unsquared())] {
                    out.push((
                        format!("E^g inner {} ^{} vs BDP inner {}", li, outer, ri),
                        lhs_base.pow(outer),
                        r.clone(),
                    ));
                }
            }
        }
        out
    };
    let points: Vec<Point> = data.iter().map(|(p, _)| p.clone()).collect();
    let literal: Vec<Vec<Reading>> = data.iter().map(|(_, c)| readings_for(*c, &bdp_product(BdpVariant::Phi, *c))).collect();
    let induced: Vec<Vec<Reading>> = data.iter().map(|(_, c)| readings_for(*c, &bdp_phi_from_induction(*c))).collect();
    let conventions = tally(&literal, &points);
    let diagnostics = tally(&induced, &points)
        .into_iter()
        .map(|r| ConventionResult { name: format!("{} [Phi from induction]", r.name), ..r })
        .collect();
    let (lhs_only, rhs_only) = match data.first() {
        Some((pt, c)) => {
            let lhs = triple_product(TripleRegion::G, *c).pow(2);
            let rhs = bdp_product(BdpVariant::Phi, *c).mul(&bdp_product(BdpVariant::PhiPrime, *c));
            factor_difference(&lhs, &rhs, pt).unwrap_or_default()
        }
        None => (vec![], vec![]),
    };
    finish("E^g(f x g x h, c)^2 = E^Phi(c) * E^Phi'(c')", samples, seed, conventions, diagnostics, lhs_only, rhs_only, 0)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    identity: &str,
    samples: usize,
    seed: u64,
    conventions: Vec<ConventionResult>,
    diagnostics: Vec<ConventionResult>,
    lhs_only: Vec<String>,
    rhs_only: Vec<String>,
    uninformative_resamples: usize,
) -> IdentityReport {
    let literal = conventions[0].name.clone();
    let literal_holds = conventions[0].holds();
    let selected = conventions.iter().find(|c| c.holds()).map(|c| c.name.clone());
    IdentityReport {
        identity: identity.to_string(),
        samples,
        seed,
        literal,
        literal_holds,
        conventions,
        selected,
        lhs_only,
        rhs_only,
        diagnostics,
        uninformative_resamples,
    }
}

/// `E^ad(f ⊗ ad^0 g, k/2) = E^BDP(c) · E(f ⊗ ε_K, k/2)` with `h = g`,
/// `ε_K(p) = 1`, under each reading of the squares and of which BDP
/// factor appears.
pub fn verify_identity_ad_eq_bdp_times_quad(samples: usize, seed: u64) -> IdentityReport {
    let mut uninformative = 0;
    let mut data = Vec::with_capacity(samples);
    let mut i = 0u64;
    while data.len() < samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        i += 1;
        let s = cm_sample(&mut rng, true);
        let j = s.k / 2;
        let c = j + s.l - 1;
        let pt = point(&s.f, &s.g, &s.g);
        let informative = adjoint_product(AdRegion::Ad, j).value(&pt).map(|v| !v.is_zero()).unwrap_or(false)
            && [BdpVariant::Phi, BdpVariant::PhiPrime]
                .iter()
                .all(|&v| bdp_product(v, c).value(&pt).map(|x| !x.is_zero()).unwrap_or(false));
        if !informative {
            uninformative += 1;
            continue;
        }
        data.push((pt, j, c));
    }
    let readings_for = |j: i64, c: i64| -> Vec<Reading> {
        let ad = adjoint_product(AdRegion::Ad, j);
        let cand = quadratic_twist_candidate(1, j);
        let mut out = Vec::new();
        for (vn, v) in [("Phi", BdpVariant::Phi), ("Phi'", BdpVariant::PhiPrime)] {
            for outer in [1u32, 2] {
                for (bi, b) in [("displayed", bdp_product(v, c)), ("unsquared", bdp_product(v, c).inner_unsquared())] {
                    out.push((format!("E^ad ^{} vs E^{} inner {} * candidate", outer, vn, bi), ad.pow(outer), b.mul(&cand)));
                }
            }
        }
        out
    };
    let points: Vec<Point> = data.iter().map(|(p, _, _)| p.clone()).collect();
    let readings: Vec<Vec<Reading>> = data.iter().map(|(_, j, c)| readings_for(*j, *c)).collect();
    let conventions = tally(&readings, &points);
    let (lhs_only, rhs_only) = match data.first() {
        Some((pt, j, c)) => {
            let lhs = adjoint_product(AdRegion::Ad, *j);
            let rhs = bdp_product(BdpVariant::Phi, *c).mul(&quadratic_twist_candidate(1, *j));
            factor_difference(&lhs, &rhs, pt).unwrap_or_default()
        }
        None => (vec![], vec![]),
    };
    finish(
        "E^ad(f x ad0 g, k/2) = E^Phi(c) * E(f x eps_K, k/2)",
        samples,
        seed,
        conventions,
        vec![],
        lhs_only,
        rhs_only,
        uninformative,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn adjoint_examples() {
        let f = HeckeParams::evaluator(7, 2, q(2, 1), q(3, 1));
        assert_eq!(euler_adjoint(&f).unwrap(), q(-11, 28));
        let f = HeckeParams::evaluator(7, 2, q(1, 1), q(0, 1));
        assert_eq!(euler_adjoint(&f).unwrap(), q(1, 1));
        let f = HeckeParams::evaluator(7, 2, q(1, 1), q(7, 1));
        assert_eq!(euler_adjoint(&f).unwrap(), q(0, 1));
        let f = HeckeParams::evaluator(7, 2, q(0, 1), q(7, 1));
        assert_eq!(euler_adjoint(&f), Err(EulerError::ZeroAlpha));
    }

    #[test]
    fn beta_zero_is_a_pole() {
        let f = HeckeParams::evaluator(5, 2, q(1, 1), q(0, 1));
        assert!(matches!(euler_deg4(&f, &f, 2, Dominance::F), Err(EulerError::ZeroDenominator(_))));
    }

    #[test]
    fn triple_all_beta_zero() {
        let f = HeckeParams::evaluator(5, 2, q(3, 1), q(0, 1));
        for r in [TripleRegion::F, TripleRegion::G, TripleRegion::H, TripleRegion::Bal] {
            assert_eq!(euler_triple(&f, &f, &f, 2, r).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn expansion_matches() {
        let pt = Point { p: 5, roots: [q(2, 3), q(-7, 2), q(3, 1), q(1, 4), q(-1, 6), q(5, 7)] };
        for prod in [triple_product(TripleRegion::Bal, 3), bdp_product(BdpVariant::Phi, 2), adjoint_product(AdRegion::F, 1)] {
            assert_eq!(prod.value(&pt).unwrap(), prod.expanded_value(&pt).unwrap());
        }
    }

    #[test]
    fn ad_identity_small() {
        let r = verify_identity_ad_eq_bdp_times_quad(20, 1);
        assert!(!r.literal_holds);
        assert_eq!(r.selected.as_deref(), Some("E^ad ^2 vs E^Phi' inner displayed * candidate"));
    }

    #[test]
    fn four_by_four_small() {
        let r = verify_identity_8_eq_4x4(20, 1);
        assert!(r.selected.is_none());
        assert!(r.diagnostics.iter().any(|d| d.holds()));
        assert_eq!(r.lhs_only.len(), 8);
        assert!(r.rhs_only.is_empty());
    }
}
