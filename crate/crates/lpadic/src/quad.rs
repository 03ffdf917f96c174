//! Imaginary quadratic fields: the quadratic character, class numbers from
//! reduced forms, and the `p`-adic logarithm of a generator of `𝔭^h`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::chars::DirichletCharacter;
use crate::cyclotomic::gen_bernoulli;
use crate::padic::{hensel_sqrt, is_odd_prime, plog_iwasawa, sqrt_residues, PadicError, PadicNumber};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not split in Q(sqrt({1}))")]
    NotSplit(u64, i64),
    #[error("no element of norm {0}^{1} with coordinates up to {2}")]
    SearchExhausted(u64, u32, i64),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

fn squarefree(n: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => squarefree(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut t = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            t = -t;
        }
    }
    // Jacobi symbol (a / n), n odd positive.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

#[derive(Clone, Debug)]
pub struct QuadField {
    disc: i64,
}

impl QuadField {
    pub fn new(disc: i64) -> Result<Self, QuadError> {
        if !is_fundamental(disc) {
            return Err(QuadError::NotFundamental(disc));
        }
        Ok(QuadField { disc })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// `ε_K(n)`.
    pub fn kronecker(&self, n: i64) -> i32 {
        kronecker(self.disc, n)
    }

    /// `ε_K` as a character mod `|D|`.
    pub fn character(&self) -> DirichletCharacter {
        let disc = self.disc;
        DirichletCharacter::from_generator_images(disc.unsigned_abs(), 2, |g| {
            if kronecker(disc, g as i64) == 1 {
                0
            } else {
                1
            }
        })
        .expect("quadratic character")
    }

    /// Number of roots of unity.
    pub fn unit_count(&self) -> u64 {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    pub fn class_number(&self) -> u64 {
        reduced_forms(self.disc).len() as u64
    }

    pub fn is_split(&self, p: u64) -> bool {
        self.kronecker(p as i64) == 1
    }
}

/// Reduced primitive forms `(a, b, c)` of discriminant `d`.
pub fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b.abs()), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

pub fn class_number(d: i64) -> Result<u64, QuadError> {
    Ok(QuadField::new(d)?.class_number())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassNumberReport {
    pub disc: i64,
    pub class_number: u64,
    pub unit_count: u64,
    pub b1: String,
    pub formula_value: String,
    pub holds: bool,
}

/// Compares the form count with `ω_K |B_{1,ε_K}| / 2`.
pub fn class_number_formula_check(d: i64) -> Result<ClassNumberReport, QuadError> {
    let k = QuadField::new(d)?;
    let b1 = gen_bernoulli(1, &k.character()).to_rational().expect("rational Bernoulli number");
    let formula = BigRational::from_integer(BigInt::from(k.unit_count())) * b1.abs() / BigInt::from(2);
    let h = k.class_number();
    Ok(ClassNumberReport {
        disc: d,
        class_number: h,
        unit_count: k.unit_count(),
        b1: b1.to_string(),
        formula_value: formula.to_string(),
        holds: formula == BigRational::from_integer(BigInt::from(h)),
    })
}

#[derive(Clone, Debug)]
pub struct PiLog {
    /// `u = (a + b sqrt(D)) / 2`.
    pub a: i64,
    pub b: i64,
    pub sqrt_disc: PadicNumber,
    pub image: PadicNumber,
    pub log: PadicNumber,
}

/// Image of `sqrt(D)`: `sqrt(d)` for the squarefree part `d`, taken with
/// the smaller root mod `p` as seed, times 2 when `4 | D`.
pub fn sqrt_disc(d: i64, p: u64, prec: u32) -> Result<PadicNumber, QuadError> {
    let (core, two) = if d.rem_euclid(4) == 0 { (d / 4, true) } else { (d, false) };
    let seed = *sqrt_residues(core, p).first().ok_or(PadicError::NonResidue(core, p))?;
    let r = hensel_sqrt(core, p, prec, seed)?;
    Ok(if two { r.mul_int(2) } else { r })
}

/// Finds `u` with `(u) = 𝔭^h` whose image is a `p`-adic unit and returns
/// its Iwasawa logarithm. Search order is `|b|` ascending, positive `b` first, then `a` ascending.
pub fn pi_log(d: i64, p: u64, prec: u32) -> Result<PiLog, QuadError> {
    let k = QuadField::new(d)?;
    if !is_odd_prime(p) {
        return Err(PadicError::BadPrime(p).into());
    }
    if !k.is_split(p) {
        return Err(QuadError::NotSplit(p, d));
    }
    let h = k.class_number() as u32;
    let target = 4 * (p as i128).pow(h);
    let bound = 4 * (p as i64).pow(h);
    let root = sqrt_disc(d, p, prec)?;
    let half = PadicNumber::from_int(p, 2, prec).inverse()?;
    for babs in 0..=bound {
        let dd = d as i128 * (babs as i128).pow(2);
        let rest = target + dd;
        if rest < 0 {
            break;
        }
        for b in if babs == 0 { vec![0] } else { vec![babs, -babs] } {
            for a in -bound..=bound {
                if (a as i128).pow(2) != rest {
                    continue;
                }
                let image = PadicNumber::from_int(p, a, prec).add(&root.mul_int(b)).mul(&half);
                if image.valuation() != Some(0) {
                    continue;
                }
                let log = plog_iwasawa(&image)?;
                return Ok(PiLog { a, b, sqrt_disc: root, image, log });
            }
        }
    }
    Err(QuadError::SearchExhausted(p, h, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-3).unwrap(), 1);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-20).unwrap(), 2);
        assert!(class_number(-12).is_err());
    }

    #[test]
    fn formula() {
        for d in [-3, -4, -23, -7, -8, -20] {
            assert!(class_number_formula_check(d).unwrap().holds, "{}", d);
        }
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn gaussian_generator() {
        let r = pi_log(-4, 5, 2).unwrap();
        assert_eq!((r.a, r.b), (4, 1));
        assert_eq!(r.image.residue().unwrap().to_u64(), Some(9));
        assert!(matches!(pi_log(-4, 7, 4), Err(QuadError::NotSplit(7, -4))));
    }
}
