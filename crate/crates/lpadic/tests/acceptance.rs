//! One line per acceptance criterion. Oracles here are written independently
//! of the library: Bernoulli numbers by the Akiyama–Tanigawa recurrence, the
//! Kronecker symbol by quadratic reciprocity, and log(1 + p x) by its series.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use lpadic::chars::DirichletCharacter;
use lpadic::euler::{verify_identity_8_eq_4x4, verify_identity_ad_eq_bdp_times_quad};
use lpadic::kl::{coates_wiles, kl_special};
use lpadic::padic::{plog, teichmuller_of, PadicNumber};
use lpadic::quad::{class_number, is_fundamental};
use lpadic::regions::{forced_vanishing, selfdual_table, Region2, Region3};
use lpadic::verify::{fitt_stark_suite, gauss_norm_suite, kl_agreement_suite, stickelberger_suite, VerifyOptions};

// Pinned tolerances.
const KL_PRECISION: u32 = 10;
const KL_SLACK: u32 = 2;
const SERIES_PRECISION: u32 = 7;
const SERIES_TRUNCATION: usize = 64;
const EULER_SAMPLES: usize = 1000;
const RANDOM_CASES: u32 = 500;

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

impl Line {
    fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    fn print(&self) {
        println!(
            "criterion {:>2} {:<14} {} ({}; {:.2?} of {:?})",
            self.id,
            self.name,
            if self.passed && self.within_budget() { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed,
            self.budget,
        );
    }
}

fn timed(id: u32, name: &'static str, budget_secs: u64, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (passed, detail) = f();
    Line { id, name, passed, detail, elapsed: start.elapsed(), budget: Duration::from_secs(budget_secs) }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `B_0..B_n` with `B_1 = -1/2`.
fn bernoulli_oracle(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<BigRational> = Vec::new();
    for m in 0..=n {
        a.push(rat(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = BigRational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        // the recurrence yields B_1 = +1/2
        out.push(if m == 1 { -a[0].clone() } else { a[0].clone() });
    }
    out
}

fn jacobi(mut a: i64, mut n: i64) -> i64 {
    a = a.rem_euclid(n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
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

/// `(D / a)` for a fundamental discriminant `D < 0` and `a > 0`.
fn kronecker_oracle(d: i64, a: i64) -> i64 {
    let mut a = a;
    let mut t = 1;
    while a % 2 == 0 {
        if d % 2 == 0 {
            return 0;
        }
        if d.rem_euclid(8) == 3 || d.rem_euclid(8) == 5 {
            t = -t;
        }
        a /= 2;
    }
    if a == 1 {
        return t;
    }
    t * jacobi(d, a)
}

fn criterion_1() -> Line {
    timed(1, "kl-special", 2, || {
        let b = bernoulli_oracle(4);
        let p = 5i64;
        let mut ok = true;
        let mut parts = Vec::new();
        // ω^2 ω^{-2} and ω^{-4} are both trivial at p = 5: the oracle is -(1 - p^{n-1}) B_n / n.
        for (chi, n) in [(DirichletCharacter::omega_power(5, 2), 2usize), (DirichletCharacter::trivial(1), 4)] {
            let start = Instant::now();
            let expect = -(BigRational::one() - BigRational::from_integer(BigInt::from(p).pow(n as u32 - 1))) * &b[n] / BigInt::from(n);
            let v = kl_special(&chi, n as u32, 5, 10).unwrap();
            let embedded = v.padic().unwrap().agrees_with(&PadicNumber::from_rational(5, &expect, 10));
            let fast = start.elapsed() < Duration::from_secs(1);
            ok &= v.rational.as_ref() == Some(&expect) && embedded.equal && embedded.precision >= 9 && fast;
            parts.push(format!("L(s={}) = {}", 1 - n as i64, v.rational.map(|r| r.to_string()).unwrap_or_default()));
        }
        (ok, parts.join(", "))
    })
}

fn criterion_2(opts: &VerifyOptions) -> Line {
    timed(2, "kl-agreement", 30, || {
        let r = kl_agreement_suite(opts);
        let worst = r.detail.as_array().unwrap().iter().map(|row| row["digits"].as_i64().unwrap()).min().unwrap();
        (r.passed, format!("30 cases, worst agreement p^{} >= p^{}", worst, KL_PRECISION - KL_SLACK))
    })
}

fn criterion_3(opts: &VerifyOptions) -> Line {
    timed(3, "stickelberger", 120, || {
        let r = stickelberger_suite(opts);
        let rows = r.detail.as_array().unwrap();
        let conventions: Vec<&str> = rows.iter().filter_map(|row| row["convention"].as_str()).collect();
        let mut same = conventions.clone();
        same.dedup();
        (
            r.passed && same.len() == 1,
            format!("{} characters, convention {:?}, N = {}, M = {}", rows.len(), same, SERIES_PRECISION, SERIES_TRUNCATION),
        )
    })
}

fn criterion_4() -> Line {
    timed(4, "coates-wiles", 5, || {
        let b = bernoulli_oracle(10);
        let mut bad = 0;
        for c in [2i64, 3, 5] {
            for k in 1..=10u32 {
                let expect = if k == 1 {
                    rat(c - 1, 2)
                } else {
                    (BigRational::from_integer(BigInt::from(c).pow(k)) - BigRational::one()) * &b[k as usize] / BigInt::from(k)
                };
                let (got, _) = coates_wiles(c as u64, k, 7, 10).unwrap();
                if got != expect {
                    bad += 1;
                }
            }
        }
        (bad == 0, format!("30 exact values, {} mismatches", bad))
    })
}

fn criterion_5() -> Line {
    timed(5, "gauss-norm", 60, || {
        let r = gauss_norm_suite();
        (r.passed, r.summary)
    })
}

fn criterion_6() -> Line {
    timed(6, "class-number", 10, || {
        let mut count = 0;
        let mut bad = Vec::new();
        for n in 3..=200i64 {
            let d = -n;
            if !is_fundamental(d) {
                continue;
            }
            count += 1;
            let w = match d {
                -3 => 6,
                -4 => 4,
                _ => 2,
            };
            let sum: i64 = (1..n).map(|a| a * kronecker_oracle(d, a)).sum();
            let b1 = rat(sum, n);
            let predicted = BigRational::from_integer(BigInt::from(w)) * b1.abs() / BigInt::from(2);
            let h = class_number(d).unwrap();
            if predicted != BigRational::from_integer(BigInt::from(h)) {
                bad.push(d);
            }
        }
        (bad.is_empty(), format!("{} discriminants, failures {:?}", count, bad))
    })
}

fn criterion_7(opts: &VerifyOptions) -> Line {
    timed(7, "fitt-stark", 300, || {
        let r = fitt_stark_suite(opts);
        let rows = r.detail.as_array().unwrap();
        let matrices: u64 = rows.iter().map(|row| row["sweep"]["matrices"].as_u64().unwrap()).sum();
        let modules: u64 = rows.iter().map(|row| row["matlis_modules"].as_u64().unwrap()).sum();
        (r.passed, format!("{} presentations over 4 rings, {} Matlis modules", matrices, modules))
    })
}

/// Known failure: no squaring convention makes the eight-factor identity
/// hold as displayed; the adjoint identity holds under the selected one.
fn criterion_8(opts: &VerifyOptions) -> Line {
    timed(8, "euler", 120, || {
        let a = verify_identity_8_eq_4x4(EULER_SAMPLES, opts.seed);
        let b = verify_identity_ad_eq_bdp_times_quad(EULER_SAMPLES, opts.seed);
        let best = a.conventions.iter().map(|c| c.agreements).max().unwrap_or(0);
        let detail = format!(
            "8 = 4x4: none of {} conventions holds (best {}/{}), left-only factors {:?}; ad: {}",
            a.conventions.len(),
            best,
            a.samples,
            a.lhs_only,
            b.selected.clone().unwrap_or_else(|| "no convention".into()),
        );
        (a.holds() && b.holds(), detail)
    })
}

fn criterion_9() -> Line {
    timed(9, "signs", 1, || {
        // rows: (region, ε(f), sign of f⊗g⊗g^c, sign of f⊗ad^0 g)
        let table = [(Region2::Ad, 1, -1, -1), (Region2::Ad, -1, -1, 1), (Region2::F, 1, 1, 1), (Region2::F, -1, 1, -1)];
        let cells = table.iter().all(|&(r, e, t, a)| {
            let s = selfdual_table(r, e).unwrap();
            s.triple == t && s.adjoint == a
        });
        let branches = forced_vanishing(1).unwrap() == vec![Region3::Bal]
            && forced_vanishing(-1).unwrap() == vec![Region3::F, Region3::G, Region3::H];
        (cells && branches, "4 table cells, 2 vanishing branches".into())
    })
}

fn criterion_10() -> Line {
    timed(10, "padic-core", 60, || {
        // log(6) = Σ (-1)^{k+1} 5^k / k, summed far past 5^3
        let mut series = BigRational::zero();
        for k in 1..=12i64 {
            let term = rat(5i64.pow(k as u32), k);
            series += if k % 2 == 1 { term } else { -term };
        }
        let oracle = PadicNumber::from_rational(5, &series, 3);
        let log6 = plog(&PadicNumber::from_int(5, 6, 3)).unwrap();
        let log_ok = log6.congruent_mod(&oracle, 3) && log6.congruent_mod(&PadicNumber::from_int(5, 55, 3), 3);

        let config = Config { cases: RANDOM_CASES, failure_persistence: None, ..Config::default() };
        let primes = [3u64, 5, 7, 11, 13];
        let mut runner = TestRunner::new(config.clone());
        let hom = runner.run(&(0..5usize, 1i64..1_000_000, 1i64..1_000_000, 2u32..15), |(pi, x, y, prec)| {
            let p = primes[pi];
            let fix = |v: i64| if v % p as i64 == 0 { v + 1 } else { v };
            let (a, b) = (PadicNumber::from_int(p, fix(x), prec), PadicNumber::from_int(p, fix(y), prec));
            let lhs = plog(&a.mul(&b)).unwrap();
            let rhs = plog(&a).unwrap().add(&plog(&b).unwrap());
            prop_assert!(lhs.agrees_with(&rhs).equal);
            Ok(())
        });
        let mut runner = TestRunner::new(config);
        let teich = runner.run(&(0..5usize, 1i64..1_000_000, 1u32..15), |(pi, x, prec)| {
            let p = primes[pi];
            let x = if x % p as i64 == 0 { x + 1 } else { x };
            let t = teichmuller_of(&PadicNumber::from_int(p, x, prec)).unwrap();
            prop_assert!(teichmuller_of(&t).unwrap().agrees_with(&t).equal);
            prop_assert!(t.pow(p - 1).agrees_with(&PadicNumber::one(p, prec)).equal);
            Ok(())
        });
        (
            log_ok && hom.is_ok() && teich.is_ok(),
            format!("log 6 = {} mod 5^3; {} cases each: homomorphism {}, idempotence {}", log6, RANDOM_CASES, hom.is_ok(), teich.is_ok()),
        )
    })
}

// Runs without the libtest harness so the criterion lines always reach stdout.
fn main() {
    let opts = VerifyOptions {
        kl_precision: KL_PRECISION,
        slack: KL_SLACK,
        series_precision: SERIES_PRECISION,
        truncation: SERIES_TRUNCATION,
        euler_samples: EULER_SAMPLES,
        ..VerifyOptions::default()
    };
    let lines = vec![
        criterion_1(),
        criterion_2(&opts),
        criterion_3(&opts),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(&opts),
        criterion_8(&opts),
        criterion_9(),
        criterion_10(),
    ];
    for line in &lines {
        line.print();
    }
    for line in &lines {
        if line.id == 8 {
            assert!(!line.passed, "criterion 8 was expected to fail; re-examine the Euler identity analysis");
            continue;
        }
        assert!(line.passed, "criterion {} failed: {}", line.id, line.detail);
        assert!(line.within_budget(), "criterion {} over its time budget: {:?}", line.id, line.elapsed);
    }
}
