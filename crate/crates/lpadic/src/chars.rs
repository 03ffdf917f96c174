//! Dirichlet characters with values in `μ_m`, stored by their images on a
//! canonical set of generators of `(Z/f)^×`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unramified::{gcd, least_primitive_root};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("order must be positive")]
    ZeroOrder,
    #[error("generator {0} is not a unit mod {1}")]
    NotAUnit(u64, u64),
    #[error("exponent images are inconsistent at residue {0}")]
    Inconsistent(u64),
    #[error("generators do not cover (Z/{0})^x")]
    NotGenerating(u64),
    #[error("image of {0} is not compatible with its multiplicative order")]
    BadImage(u64),
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(q, _)| acc / q * (q - 1))
}

fn mult_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % n as u128) as u64;
        k += 1;
    }
    k
}

// CRT: the residue mod n that is `r` mod `q` and 1 mod n/q.
fn crt_one_elsewhere(r: u64, q: u64, n: u64) -> u64 {
    let rest = n / q;
    (0..n).find(|&a| a % q == r % q && a % rest == 1 % rest).unwrap()
}

/// Canonical generators of `(Z/n)^×` with their orders: for each odd prime
/// power the least primitive root, for `2^e` the pair `-1`, `5`; each lifted
/// to be `1` modulo the other prime-power parts.
pub fn unit_generators(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (q, e) in factor(n) {
        let qe = q.pow(e);
        if q == 2 {
            if e >= 2 {
                out.push((crt_one_elsewhere(qe - 1, qe, n), 2));
            }
            if e >= 3 {
                out.push((crt_one_elsewhere(5, qe, n), qe / 4));
            }
        } else {
            let ord = qe / q * (q - 1);
            let mut g = least_primitive_root(q);
            while mult_order(g, qe) != ord {
                g += 1;
            }
            out.push((crt_one_elsewhere(g, qe, n), ord));
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CharacterJson {
    pub modulus: u64,
    pub generator_images: Vec<(u64, u64)>,
    pub order: u64,
}

/// `χ(a) = ζ_order^{e(a)}` on units mod `modulus`, zero elsewhere.
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    // (generator, its multiplicative order, exponent image mod `order`)
    gens: Vec<(u64, u64, u64)>,
    table: OnceLock<Vec<Option<u64>>>,
}

impl Clone for DirichletCharacter {
    fn clone(&self) -> Self {
        DirichletCharacter {
            modulus: self.modulus,
            order: self.order,
            gens: self.gens.clone(),
            table: OnceLock::new(),
        }
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus)
            .field("order", &self.order)
            .field("gens", &self.gens)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    /// Same modulus and same values.
    fn eq(&self, other: &Self) -> bool {
        if self.modulus != other.modulus {
            return false;
        }
        let l = lcm(self.order, other.order);
        self.gens.iter().zip(&other.gens).all(|(a, b)| {
            a.2 * (l / self.order) % l == b.2 * (l / other.order) % l
        })
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    /// Builds from the images of the canonical generators of
    /// `(Z/modulus)^×`, given as a function of the generator.
    pub fn from_generator_images(
        modulus: u64,
        order: u64,
        mut image: impl FnMut(u64) -> u64,
    ) -> Result<Self, CharError> {
        if modulus == 0 {
            return Err(CharError::ZeroModulus);
        }
        if order == 0 {
            return Err(CharError::ZeroOrder);
        }
        let mut gens = Vec::new();
        for (g, ord) in unit_generators(modulus) {
            let e = image(g) % order;
            if (e as u128 * ord as u128) % order as u128 != 0 {
                return Err(CharError::BadImage(g));
            }
            gens.push((g, ord, e));
        }
        Ok(DirichletCharacter { modulus, order, gens, table: OnceLock::new() })
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::from_generator_images(modulus, 1, |_| 0).unwrap()
    }

    /// `ω^k` for the Teichmüller character `ω` mod `p`, which sends the
    /// least primitive root to `ζ_{p-1}`.
    pub fn omega_power(p: u64, k: i64) -> Self {
        let m = p - 1;
        let e = k.rem_euclid(m as i64) as u64;
        Self::from_generator_images(p, m, |_| e).unwrap()
    }

    /// Builds from a value function `a ↦ e(a)` on units (checked for
    /// multiplicativity).
    pub fn from_values(modulus: u64, order: u64, f: impl Fn(u64) -> u64) -> Result<Self, CharError> {
        let chi = Self::from_generator_images(modulus, order, &f)?;
        for a in 1..modulus.max(2) {
            if gcd(a, modulus) == 1 && chi.exponent(a as i64) != Some(f(a) % order) {
                return Err(CharError::Inconsistent(a));
            }
        }
        Ok(chi)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The `m` with values in `μ_m` as stored (not necessarily the exact
    /// order).
    pub fn order(&self) -> u64 {
        self.order
    }

    /// The exact multiplicative order.
    pub fn exact_order(&self) -> u64 {
        self.gens.iter().fold(1, |acc, &(_, _, e)| lcm(acc, self.order / gcd(self.order, e)))
    }

    /// Same character with values recorded in `μ_{exact order}`.
    pub fn reduced(&self) -> Self {
        let o = self.exact_order();
        let s = self.order / o;
        DirichletCharacter {
            modulus: self.modulus,
            order: o,
            gens: self.gens.iter().map(|&(g, k, e)| (g, k, e / s)).collect(),
            table: OnceLock::new(),
        }
    }

    /// Same character with values recorded in `μ_m` for a multiple `m` of
    /// the stored order.
    pub fn with_order(&self, m: u64) -> Self {
        assert!(m % self.order == 0);
        let s = m / self.order;
        DirichletCharacter {
            modulus: self.modulus,
            order: m,
            gens: self.gens.iter().map(|&(g, k, e)| (g, k, e * s)).collect(),
            table: OnceLock::new(),
        }
    }

    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.gens.iter().map(|&(g, _, e)| (g, e)).collect()
    }

    fn table(&self) -> &Vec<Option<u64>> {
        self.table.get_or_init(|| {
            let n = self.modulus as usize;
            let mut t = vec![None; n.max(1)];
            t[1 % n.max(1)] = Some(0);
            if n <= 1 {
                t[0] = Some(0);
                return t;
            }
            // Walk the mixed-radix product of generator powers.
            let mut frontier = vec![(1u64, 0u64)];
            for &(g, ord, e) in &self.gens {
                let mut next = Vec::with_capacity(frontier.len() * ord as usize);
                for &(a, ea) in &frontier {
                    let mut x = a;
                    let mut ex = ea;
                    for _ in 0..ord {
                        next.push((x, ex));
                        x = (x as u128 * g as u128 % n as u128) as u64;
                        ex = (ex + e) % self.order;
                    }
                }
                frontier = next;
            }
            for (a, e) in frontier {
                t[a as usize] = Some(e);
            }
            t
        })
    }

    /// `e(a)` with `χ(a) = ζ_order^{e(a)}`, or `None` when `gcd(a, f) > 1`.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        self.table()[r]
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(|g| g.2 == 0)
    }

    /// `χ(-1) = +1`.
    pub fn is_even(&self) -> bool {
        self.exponent(-1) == Some(0)
    }

    /// `+1` or `-1`.
    pub fn parity(&self) -> i32 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Self {
        DirichletCharacter {
            modulus: self.modulus,
            order: self.order,
            gens: self.gens.iter().map(|&(g, k, e)| (g, k, (self.order - e) % self.order)).collect(),
            table: OnceLock::new(),
        }
    }

    /// Product character modulo `lcm` of the moduli, values in `μ_lcm` of
    /// the orders.
    pub fn mul(&self, other: &Self) -> Self {
        let n = lcm(self.modulus, other.modulus);
        let m = lcm(self.order, other.order);
        let (sa, sb) = (m / self.order, m / other.order);
        Self::from_generator_images(n, m, |g| {
            let ea = self.exponent(g as i64).unwrap();
            let eb = other.exponent(g as i64).unwrap();
            ea * sa + eb * sb
        })
        .unwrap()
    }

    pub fn pow(&self, k: i64) -> Self {
        let kk = k.rem_euclid(self.order as i64) as u64;
        DirichletCharacter {
            modulus: self.modulus,
            order: self.order,
            gens: self.gens.iter().map(|&(g, o, e)| (g, o, e * kk % self.order)).collect(),
            table: OnceLock::new(),
        }
    }

    /// The same character viewed modulo a multiple of the modulus.
    pub fn induce(&self, modulus: u64) -> Self {
        assert!(modulus % self.modulus == 0, "can only induce to a multiple");
        Self::from_generator_images(modulus, self.order, |g| self.exponent(g as i64).unwrap()).unwrap()
    }

    /// Smallest `d | f` through which `χ` factors.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        let mut divisors: Vec<u64> = (1..=f).filter(|d| f % d == 0).collect();
        divisors.sort();
        for d in divisors {
            let ok = (1..f)
                .filter(|&a| gcd(a, f) == 1 && a % d == 1 % d)
                .all(|a| self.exponent(a as i64) == Some(0));
            if ok {
                return d;
            }
        }
        f
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let d = self.conductor();
        if d == self.modulus {
            return self.clone();
        }
        let f = self.modulus;
        Self::from_generator_images(d, self.order, |g| {
            let mut a = g;
            while gcd(a, f) != 1 {
                a += d;
            }
            self.exponent(a as i64).unwrap()
        })
        .unwrap()
    }

    /// Characters are equal after passing to primitive ones.
    pub fn same_primitive(&self, other: &Self) -> bool {
        let (a, b) = (self.primitive(), other.primitive());
        if a.modulus != b.modulus {
            return false;
        }
        let l = lcm(a.order, b.order);
        (1..a.modulus.max(2)).all(|x| {
            match (a.exponent(x as i64), b.exponent(x as i64)) {
                (Some(u), Some(v)) => u * (l / a.order) % l == v * (l / b.order) % l,
                (None, None) => true,
                _ => false,
            }
        })
    }

    pub fn to_json(&self) -> CharacterJson {
        CharacterJson { modulus: self.modulus, generator_images: self.generators(), order: self.order }
    }

    /// Ingests arbitrary generator images; the value table is closed up by
    /// breadth-first search and checked for consistency and coverage.
    pub fn from_json(j: &CharacterJson) -> Result<Self, CharError> {
        let f = j.modulus;
        let m = j.order;
        if f == 0 {
            return Err(CharError::ZeroModulus);
        }
        if m == 0 {
            return Err(CharError::ZeroOrder);
        }
        let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
        seen.insert(1 % f, 0);
        let mut queue = VecDeque::from([1 % f]);
        for &(g, _) in &j.generator_images {
            if gcd(g % f, f) != 1 {
                return Err(CharError::NotAUnit(g, f));
            }
        }
        while let Some(a) = queue.pop_front() {
            let ea = seen[&a];
            for &(g, e) in &j.generator_images {
                let b = (a as u128 * (g % f) as u128 % f as u128) as u64;
                let eb = (ea + e) % m;
                match seen.get(&b) {
                    Some(&x) if x != eb => return Err(CharError::Inconsistent(b)),
                    Some(_) => {}
                    None => {
                        seen.insert(b, eb);
                        queue.push_back(b);
                    }
                }
            }
        }
        if seen.len() as u64 != euler_phi(f) {
            return Err(CharError::NotGenerating(f));
        }
        Self::from_generator_images(f, m, |g| seen[&(g % f)])
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi mod {} of order {} [", self.modulus, self.order)?;
        for (i, (g, e)) in self.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", g, e)?;
        }
        write!(f, "]")
    }
}

/// Every character modulo `f`, with values recorded in `μ_λ` for `λ` the
/// exponent of `(Z/f)^×`.
pub fn all_characters(f: u64) -> Vec<DirichletCharacter> {
    let gens = unit_generators(f);
    let m = gens.iter().fold(1, |acc, &(_, o)| lcm(acc, o));
    let mut out = vec![Vec::<u64>::new()];
    for &(_, o) in &gens {
        let step = m / o;
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..o {
                let mut v = prefix.clone();
                v.push(k * step);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|imgs| {
            let mut it = gens.iter().map(|g| g.0).zip(imgs);
            let map: BTreeMap<u64, u64> = it.by_ref().collect();
            DirichletCharacter::from_generator_images(f, m, |g| map[&g]).unwrap()
        })
        .collect()
}

/// Primitive characters of conductor exactly `f`.
pub fn primitive_characters(f: u64) -> Vec<DirichletCharacter> {
    all_characters(f).into_iter().filter(|c| c.is_primitive()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(unit_generators(5), vec![(2, 4)]);
        assert_eq!(unit_generators(8), vec![(5, 2), (7, 2)]);
        assert_eq!(unit_generators(15), vec![(7, 4), (11, 2)]);
        assert_eq!(unit_generators(1), vec![]);
    }

    #[test]
    fn omega_is_teichmuller_shaped() {
        let w = DirichletCharacter::omega_power(5, 1);
        assert_eq!(w.exponent(2), Some(1));
        assert_eq!(w.exponent(4), Some(2));
        assert!(!w.is_even());
        assert!(DirichletCharacter::omega_power(5, 2).is_even());
        assert_eq!(w.exponent(10), None);
    }

    #[test]
    fn conductor_and_primitive() {
        let chi = DirichletCharacter::omega_power(5, 2).induce(20);
        assert_eq!(chi.conductor(), 5);
        assert!(chi.primitive() == DirichletCharacter::omega_power(5, 2));
        assert_eq!(DirichletCharacter::trivial(12).conductor(), 1);
    }

    #[test]
    fn products_and_inverse() {
        let w = DirichletCharacter::omega_power(7, 1);
        let w2 = w.mul(&w);
        assert!(w2 == DirichletCharacter::omega_power(7, 2));
        assert!(w.mul(&w.inverse()).is_trivial());
    }

    #[test]
    fn json_roundtrip() {
        let chi = DirichletCharacter::omega_power(7, 2);
        let j = chi.to_json();
        assert!(DirichletCharacter::from_json(&j).unwrap() == chi);
        let bad = CharacterJson { modulus: 7, generator_images: vec![(2, 2)], order: 6 };
        assert_eq!(DirichletCharacter::from_json(&bad).unwrap_err(), CharError::NotGenerating(7));
        let clash = CharacterJson { modulus: 5, generator_images: vec![(2, 1), (4, 1)], order: 4 };
        assert!(matches!(DirichletCharacter::from_json(&clash), Err(CharError::Inconsistent(_))));
    }

    #[test]
    fn character_counts() {
        assert_eq!(all_characters(12).len(), 4);
        assert_eq!(primitive_characters(12).len(), 1);
        assert_eq!(primitive_characters(8).len(), 2);
        assert_eq!(primitive_characters(4).len(), 1);
    }
}
