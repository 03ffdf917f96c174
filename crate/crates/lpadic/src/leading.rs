//! Leading-term algebra over small Gorenstein rings `(Z/p^a)[x]/(x^b)`:
//! kernels, exterior contractions, the `δ` element of a two-term
//! presentation, Fitting ideals, and Matlis bi-duals, all checked by
//! enumeration.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the number of elements any enumeration may visit.
pub const BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeadingError {
    #[error("enumeration of {0} elements exceeds the budget")]
    BudgetExceeded(u64),
    #[error("{0} is a zero divisor")]
    NotRegular(String),
    #[error("bad ring: {0}")]
    BadRing(String),
    #[error("bad matrix: {0}")]
    BadMatrix(String),
}

type Result<T> = std::result::Result<T, LeadingError>;

/// Ring elements are indices `Σ c_i q^i` with `c_i` the coefficient of `x^i`.
pub type Elem = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRingSpec {
    pub p: u64,
    pub a: u32,
    pub b: u32,
}

#[derive(Debug)]
pub struct ChainRing {
    pub spec: ChainRingSpec,
    q: u64,
    size: u32,
    add: Vec<Elem>,
    mul: Vec<Elem>,
}

impl ChainRing {
    pub fn new(spec: ChainRingSpec) -> Result<Arc<Self>> {
        let ChainRingSpec { p, a, b } = spec;
        if p < 2 || (2..p).any(|d| d * d <= p && p % d == 0) || a == 0 || b == 0 {
            return Err(LeadingError::BadRing(format!("p={} a={} b={}", p, a, b)));
        }
        let q = p.pow(a);
        let size = q.checked_pow(b).filter(|&s| s <= 4096).ok_or_else(|| LeadingError::BadRing("ring too large".into()))?;
        let mut ring = ChainRing { spec, q, size: size as u32, add: vec![], mul: vec![] };
        let n = size as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for x in 0..size as u32 {
            for y in 0..size as u32 {
                add[x as usize * n + y as usize] = ring.add_slow(x, y);
                mul[x as usize * n + y as usize] = ring.mul_slow(x, y);
            }
        }
        ring.add = add;
        ring.mul = mul;
        Ok(Arc::new(ring))
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        let mut x = x as u64;
        (0..self.spec.b)
            .map(|_| {
                let c = x % self.q;
                x /= self.q;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[i64]) -> Elem {
        let mut idx = 0u64;
        for i in (0..self.spec.b as usize).rev() {
            let v = c.get(i).copied().unwrap_or(0).rem_euclid(self.q as i64) as u64;
            idx = idx * self.q + v;
        }
        idx as Elem
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_coeffs(&[n])
    }

    /// The element `x` (zero when `b = 1`).
    pub fn x(&self) -> Elem {
        self.from_coeffs(&[0, 1])
    }

    fn add_slow(&self, x: Elem, y: Elem) -> Elem {
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let c: Vec<i64> = a.iter().zip(&b).map(|(u, v)| ((u + v) % self.q) as i64).collect();
        self.from_coeffs(&c)
    }

    fn mul_slow(&self, x: Elem, y: Elem) -> Elem {
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let n = self.spec.b as usize;
        let mut c = vec![0u64; n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] = (c[i + j] + a[i] * b[j]) % self.q;
            }
        }
        self.from_coeffs(&c.iter().map(|&v| v as i64).collect::<Vec<_>>())
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.add[x as usize * self.size as usize + y as usize]
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x as usize * self.size as usize + y as usize]
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let c: Vec<i64> = self.coeffs(x).iter().map(|&v| -(v as i64)).collect();
        self.from_coeffs(&c)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.coeffs(x)[0] % self.spec.p != 0
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        let one = self.one();
        (0..self.size).find(|&y| self.mul(x, y) == one)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    /// `x = p^v · unit` for `b = 1`.
    fn valuation(&self, x: Elem) -> u32 {
        let mut v = x as u64;
        if v == 0 {
            return self.spec.a;
        }
        let mut k = 0;
        while v % self.spec.p == 0 {
            v /= self.spec.p;
            k += 1;
        }
        k
    }

    pub fn show(&self, x: Elem) -> String {
        let c = self.coeffs(x);
        let mut parts = Vec::new();
        for (i, &v) in c.iter().enumerate() {
            if v == 0 {
                continue;
            }
            parts.push(match (i, v) {
                (0, _) => v.to_string(),
                (1, 1) => "x".into(),
                (1, _) => format!("{}x", v),
                (_, 1) => format!("x^{}", i),
                _ => format!("{}x^{}", v, i),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Parses a JSON integer or coefficient list.
    pub fn parse(&self, v: &serde_json::Value) -> Result<Elem> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(|n| self.from_int(n)).ok_or_else(|| LeadingError::BadMatrix(v.to_string())),
            serde_json::Value::Array(a) => {
                let c: Option<Vec<i64>> = a.iter().map(|x| x.as_i64()).collect();
                c.map(|c| self.from_coeffs(&c)).ok_or_else(|| LeadingError::BadMatrix(v.to_string()))
            }
            _ => Err(LeadingError::BadMatrix(v.to_string())),
        }
    }
}

fn enum_count(ring: &ChainRing, n: usize) -> Result<u64> {
    let mut c: u64 = 1;
    for _ in 0..n {
        c = c.saturating_mul(ring.size as u64);
    }
    if c > BUDGET {
        Err(LeadingError::BudgetExceeded(c))
    } else {
        Ok(c)
    }
}

fn decode(ring: &ChainRing, mut idx: u64, n: usize) -> Vec<Elem> {
    let s = ring.size as u64;
    (0..n)
        .map(|_| {
            let e = (idx % s) as Elem;
            idx /= s;
            e
        })
        .collect()
}

fn encode(ring: &ChainRing, v: &[Elem]) -> u64 {
    v.iter().rev().fold(0u64, |acc, &e| acc * ring.size as u64 + e as u64)
}

/// `φ: S^cols → S^rows` as a row-major matrix.
#[derive(Clone, Debug)]
pub struct FreeMap {
    pub ring: Arc<ChainRing>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Elem>,
}

impl FreeMap {
    pub fn new(ring: &Arc<ChainRing>, rows: usize, cols: usize, entries: Vec<Elem>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        FreeMap { ring: ring.clone(), rows, cols, entries }
    }

    pub fn from_ints(ring: &Arc<ChainRing>, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| ring.from_int(v))).collect();
        Self::new(ring, rows.len(), cols, entries)
    }

    pub fn identity(ring: &Arc<ChainRing>, n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = ring.one();
        }
        Self::new(ring, n, n, e)
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| r.add(acc, r.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn compose(&self, other: &FreeMap) -> FreeMap {
        assert_eq!(self.cols, other.rows);
        let r = &self.ring;
        let mut e = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                e.push((0..self.cols).fold(0, |acc, k| r.add(acc, r.mul(self.get(i, k), other.get(k, j)))));
            }
        }
        FreeMap::new(r, self.rows, other.cols, e)
    }

    pub fn transpose(&self) -> FreeMap {
        let mut e = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                e.push(self.get(i, j));
            }
        }
        FreeMap::new(&self.ring, self.cols, self.rows, e)
    }

    /// Columns given as vectors in `S^rows`.
    pub fn from_columns(ring: &Arc<ChainRing>, rows: usize, cols: &[Vec<Elem>]) -> Self {
        let mut e = vec![0; rows * cols.len()];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                e[i * cols.len() + j] = c[i];
            }
        }
        Self::new(ring, rows, cols.len(), e)
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).collect()).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&e| self.ring.show(e)).collect()).collect()
    }
}

/// Set of indices of the submodule of `S^n` spanned by `gens`.
pub fn span(ring: &ChainRing, n: usize, gens: &[Vec<Elem>]) -> Result<HashSet<u64>> {
    enum_count(ring, n)?;
    let mut set: HashSet<u64> = HashSet::new();
    set.insert(0);
    let mut elems = vec![vec![0; n]];
    for g in gens {
        extend_span(ring, &mut set, &mut elems, g);
    }
    Ok(set)
}

fn extend_span(ring: &ChainRing, set: &mut HashSet<u64>, elems: &mut Vec<Vec<Elem>>, g: &[Elem]) {
    let base = elems.clone();
    for s in ring.elements().skip(1) {
        let sg: Vec<Elem> = g.iter().map(|&x| ring.mul(s, x)).collect();
        for x in &base {
            let y: Vec<Elem> = x.iter().zip(&sg).map(|(&a, &b)| ring.add(a, b)).collect();
            if set.insert(encode(ring, &y)) {
                elems.push(y);
            }
        }
    }
}

/// Generators of `ker f`, by enumeration of `S^cols`.
pub fn kernel_enumerate(f: &FreeMap) -> Result<Vec<Vec<Elem>>> {
    let ring = &f.ring;
    let total = enum_count(ring, f.cols)?;
    let zero = vec![0; f.rows];
    let mut set: HashSet<u64> = HashSet::new();
    set.insert(0);
    let mut elems = vec![vec![0; f.cols]];
    let mut gens = Vec::new();
    for idx in 1..total {
        if set.contains(&idx) {
            continue;
        }
        let v = decode(ring, idx, f.cols);
        if f.apply(&v) == zero {
            extend_span(ring, &mut set, &mut elems, &v);
            gens.push(v);
        }
    }
    Ok(gens)
}

/// Generators of `ker f` for `b = 1` by diagonalizing over `Z/p^a`.
pub fn kernel_diagonal(f: &FreeMap) -> Result<Vec<Vec<Elem>>> {
    let ring = &f.ring;
    if ring.spec.b != 1 {
        return Err(LeadingError::BadRing("diagonal reduction needs b = 1".into()));
    }
    let (n, m) = (f.rows, f.cols);
    let mut a: Vec<Vec<Elem>> = (0..n).map(|i| f.row(i).to_vec()).collect();
    // column operations are mirrored on q so that f ∘ q = (row ops)^{-1} ∘ a
    let mut q: Vec<Vec<Elem>> = FreeMap::identity(ring, m).columns();
    let swap_cols = |a: &mut Vec<Vec<Elem>>, q: &mut Vec<Vec<Elem>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        q.swap(i, j);
    };
    let mut k = 0;
    while k < n.min(m) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..m {
                let v = ring.valuation(a[i][j]);
                if v < ring.spec.a && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(k, pi);
        swap_cols(&mut a, &mut q, k, pj);
        let pivot = a[k][k];
        for i in 0..n {
            if i != k && a[i][k] != 0 {
                let c = divide(ring, a[i][k], pivot);
                let ck: Vec<Elem> = a[k].clone();
                for (x, &y) in a[i].iter_mut().zip(&ck) {
                    *x = ring.sub(*x, ring.mul(c, y));
                }
            }
        }
        for j in 0..m {
            if j != k && a[k][j] != 0 {
                let c = divide(ring, a[k][j], pivot);
                for row in a.iter_mut() {
                    row[j] = ring.sub(row[j], ring.mul(c, row[k]));
                }
                let qk = q[k].clone();
                for (x, &y) in q[j].iter_mut().zip(&qk) {
                    *x = ring.sub(*x, ring.mul(c, y));
                }
            }
        }
        k += 1;
    }
    let pa = ring.q;
    let mut gens = Vec::new();
    for j in 0..m {
        let d = if j < n { a[j][j] } else { 0 };
        let v = ring.valuation(d);
        if v == 0 {
            continue;
        }
        let scale = ring.from_int((pa / ring.spec.p.pow(v)) as i64);
        let g: Vec<Elem> = q[j].iter().map(|&x| ring.mul(scale, x)).collect();
        if g.iter().any(|&x| x != 0) {
            gens.push(g);
        }
    }
    Ok(gens)
}

/// `x / d` when `d = p^v · unit` divides `x` in `Z/p^a`.
fn divide(ring: &ChainRing, x: Elem, d: Elem) -> Elem {
    ring.elements().find(|&c| ring.mul(c, d) == x).expect("pivot divides")
}

pub fn kernel(f: &FreeMap) -> Result<Vec<Vec<Elem>>> {
    if f.ring.spec.b == 1 {
        kernel_diagonal(f)
    } else {
        kernel_enumerate(f)
    }
}

/// `t`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

/// An element of `∧^t S^n` in the lexicographic basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge {
    pub n: usize,
    pub t: usize,
    pub coeffs: Vec<Elem>,
}

impl Wedge {
    pub fn top(ring: &ChainRing, n: usize) -> Self {
        Wedge { n, t: n, coeffs: vec![ring.one()] }
    }

    pub fn basis(&self) -> Vec<Vec<usize>> {
        wedge_basis(self.n, self.t)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// `m_1 ∧ … ∧ m_t ↦ Σ (-1)^{i-1} φ(m_i) m_1 ∧ … m̂_i … ∧ m_t`.
pub fn tilde_phi(ring: &ChainRing, phi: &[Elem], w: &Wedge) -> Wedge {
    assert!(w.t >= 1 && phi.len() == w.n);
    let target = wedge_basis(w.n, w.t - 1);
    let mut coeffs = vec![0; target.len()];
    for (subset, &c) in w.basis().iter().zip(&w.coeffs) {
        if c == 0 {
            continue;
        }
        for (pos, &i) in subset.iter().enumerate() {
            let mut rest = subset.clone();
            rest.remove(pos);
            let idx = target.binary_search(&rest).unwrap();
            let term = ring.mul(phi[i], c);
            coeffs[idx] = if pos % 2 == 0 { ring.add(coeffs[idx], term) } else { ring.sub(coeffs[idx], term) };
        }
    }
    Wedge { n: w.n, t: w.t - 1, coeffs }
}

/// `(φ̃_s ∘ … ∘ φ̃_1)(e_1 ∧ … ∧ e_{s+t})` for `φ: S^{s+t} → S^s`.
pub fn delta_element(phi: &FreeMap) -> Result<Wedge> {
    if phi.rows > phi.cols {
        return Err(LeadingError::BadMatrix("need at least as many columns as rows".into()));
    }
    let ring = &phi.ring;
    let mut w = Wedge::top(ring, phi.cols);
    for i in 0..phi.rows {
        w = tilde_phi(ring, phi.row(i), &w);
    }
    Ok(w)
}

/// True when a further contraction by every row of `φ` kills `δ`.
pub fn in_bidual(phi: &FreeMap, delta: &Wedge) -> bool {
    delta.t == 0 || (0..phi.rows).all(|i| tilde_phi(&phi.ring, phi.row(i), delta).is_zero())
}

/// An ideal of `S` given by generators, with its member set.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub gens: Vec<Elem>,
    members: Vec<bool>,
}

impl Ideal {
    pub fn generated(ring: &ChainRing, gens: &[Elem]) -> Self {
        let mut members = vec![false; ring.size as usize];
        members[0] = true;
        let mut list = vec![0];
        for &g in gens {
            let base = list.clone();
            for s in ring.elements() {
                let sg = ring.mul(s, g);
                for &x in &base {
                    let y = ring.add(x, sg);
                    if !members[y as usize] {
                        members[y as usize] = true;
                        list.push(y);
                    }
                }
            }
        }
        Ideal { gens: gens.to_vec(), members }
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members[x as usize]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// An element in one ideal but not the other.
    pub fn witness(&self, other: &Ideal) -> Option<Elem> {
        (0..self.members.len() as Elem).find(|&x| self.members[x as usize] != other.members[x as usize])
    }

    pub fn product(ring: &ChainRing, a: &Ideal, b: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for x in 0..ring.size {
            if !a.contains(x) {
                continue;
            }
            for y in 0..ring.size {
                if b.contains(y) {
                    gens.push(ring.mul(x, y));
                }
            }
        }
        gens.sort_unstable();
        gens.dedup();
        Ideal::generated(ring, &gens)
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

pub fn determinant(ring: &ChainRing, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0],
        _ => {
            let mut acc = 0;
            for j in 0..n {
                let minor: Vec<Vec<Elem>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = ring.mul(m[0][j], determinant(ring, &minor));
                acc = if j % 2 == 0 { ring.add(acc, term) } else { ring.sub(acc, term) };
            }
            acc
        }
    }
}

/// `Fitt^0(coker A)` for `A: S^m → S^n`: the `n × n` minors.
pub fn fitting0(a: &FreeMap) -> Ideal {
    let ring = &a.ring;
    if a.rows > a.cols {
        return Ideal::generated(ring, &[]);
    }
    let mut gens = Vec::new();
    for cols in wedge_basis(a.cols, a.rows) {
        let sub: Vec<Vec<Elem>> = (0..a.rows).map(|i| cols.iter().map(|&j| a.get(i, j)).collect()).collect();
        gens.push(determinant(ring, &sub));
    }
    gens.sort_unstable();
    gens.dedup();
    Ideal::generated(ring, &gens)
}

#[derive(Clone, Debug, Serialize)]
pub struct FittStarkReport {
    pub delta: Vec<String>,
    pub basis: Vec<Vec<usize>>,
    pub image: Vec<String>,
    pub fitt0: Vec<String>,
    pub equal: bool,
    pub in_bidual: bool,
    pub witness: Option<String>,
}

/// Compares `im(δ)` with `Fitt^0(coker φ)`. The image of `δ` under all
/// functionals on `∧^t S^{s+t}` is the ideal of its coordinates.
pub fn verify_fitt_stark(phi: &FreeMap) -> Result<FittStarkReport> {
    let ring = &phi.ring;
    let delta = delta_element(phi)?;
    let image = Ideal::generated(ring, &delta.coeffs);
    let fitt = fitting0(phi);
    let equal = image == fitt;
    Ok(FittStarkReport {
        delta: delta.coeffs.iter().map(|&c| ring.show(c)).collect(),
        basis: delta.basis(),
        image: {
            let mut g: Vec<Elem> = image.gens.iter().copied().filter(|&g| g != 0).collect();
            g.sort_unstable();
            g.dedup();
            g.iter().map(|&g| ring.show(g)).collect()
        },
        fitt0: fitt.gens.iter().filter(|&&g| g != 0).map(|&g| ring.show(g)).collect(),
        equal,
        in_bidual: in_bidual(phi, &delta),
        witness: image.witness(&fitt).map(|w| ring.show(w)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub ring: ChainRingSpec,
    pub pool: Vec<String>,
    pub matrices: u64,
    pub failures: u64,
    pub bidual_failures: u64,
    pub first_failure: Option<Vec<Vec<String>>>,
}

/// A fixed four-element pool of entries for each ring.
pub fn element_pool(ring: &ChainRing) -> Vec<Elem> {
    let ChainRingSpec { p, a, b } = ring.spec;
    if b == 1 {
        let q = p.pow(a) as i64;
        // 0, 1, p, -1
        vec![ring.from_int(0), ring.from_int(1), ring.from_int(p as i64), ring.from_int(q - 1)]
    } else if a == 1 {
        vec![ring.from_int(0), ring.from_int(1), ring.x(), ring.from_coeffs(&[1, 1])]
    } else {
        vec![ring.from_int(0), ring.from_coeffs(&[1, 1]), ring.from_int(p as i64), ring.x()]
    }
}

/// Every `s × (s+t)` matrix over the pool with `s + t <= max_total`.
pub fn sweep_fitt_stark(ring: &Arc<ChainRing>, max_total: usize) -> SweepReport {
    let pool = element_pool(ring);
    let mut matrices = 0u64;
    let mut failures = 0u64;
    let mut bidual_failures = 0u64;
    let mut first_failure = None;
    for s in 0..=max_total {
        for t in 0..=max_total - s {
            let cells = s * (s + t);
            let count = (pool.len() as u64).pow(cells as u32);
            let results: Vec<(bool, bool, u64)> = (0..count)
                .into_par_iter()
                .map(|mut idx| {
                    let code = idx;
                    let entries: Vec<Elem> = (0..cells)
                        .map(|_| {
                            let e = pool[(idx % pool.len() as u64) as usize];
                            idx /= pool.len() as u64;
                            e
                        })
                        .collect();
                    let phi = FreeMap::new(ring, s, s + t, entries);
                    let rep = verify_fitt_stark(&phi).expect("square or wide");
                    (rep.equal, rep.in_bidual, code)
                })
                .collect();
            for (eq, bid, code) in results {
                matrices += 1;
                if !bid {
                    bidual_failures += 1;
                }
                if !eq {
                    failures += 1;
                    if first_failure.is_none() {
                        let mut idx = code;
                        let entries: Vec<Elem> = (0..cells)
                            .map(|_| {
                                let e = pool[(idx % pool.len() as u64) as usize];
                                idx /= pool.len() as u64;
                                e
                            })
                            .collect();
                        first_failure = Some(FreeMap::new(ring, s, s + t, entries).to_strings());
                    }
                }
            }
        }
    }
    SweepReport {
        ring: ring.spec,
        pool: pool.iter().map(|&e| ring.show(e)).collect(),
        matrices,
        failures,
        bidual_failures,
        first_failure,
    }
}

/// `M = coker(A: S^m → S^n)`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub presentation: FreeMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatlisReport {
    pub module_size: u64,
    pub bidual_size: u64,
    pub injective: bool,
    pub bijective: bool,
}

impl PresentedModule {
    pub fn new(presentation: FreeMap) -> Self {
        PresentedModule { presentation }
    }

    /// `S / (gens)`.
    pub fn cyclic(ring: &Arc<ChainRing>, gens: &[Elem]) -> Self {
        PresentedModule::new(FreeMap::new(ring, 1, gens.len(), gens.to_vec()))
    }

    pub fn size(&self) -> Result<u64> {
        let a = &self.presentation;
        let total = enum_count(&a.ring, a.rows)?;
        let image = span(&a.ring, a.rows, &a.columns())?;
        Ok(total / image.len() as u64)
    }

    /// Generators of `M* = ker(A^T) ⊂ S^n`.
    pub fn dual_generators(&self) -> Result<Vec<Vec<Elem>>> {
        kernel(&self.presentation.transpose())
    }

    /// `M → M**` via the generators `g_i` of `M*`: `x ↦ (g_i · x)_i`.
    pub fn bidual_matlis_check(&self) -> Result<MatlisReport> {
        let a = &self.presentation;
        let ring = &a.ring;
        let n = a.rows;
        let duals = self.dual_generators()?;
        let k = duals.len();
        // M** = Hom(M*, S) = {v ∈ S^k : r · v = 0 for every relation r among the g_i}
        let g = FreeMap::from_columns(ring, n, &duals);
        let relations = if k == 0 { vec![] } else { kernel(&g)? };
        let bidual_size = if k == 0 {
            1
        } else {
            let rel = FreeMap::from_columns(ring, k, &relations).transpose();
            let total = enum_count(ring, k)?;
            let zero = vec![0; rel.rows];
            (0..total).filter(|&i| rel.rows == 0 || rel.apply(&decode(ring, i, k)) == zero).count() as u64
        };
        let module_size = self.size()?;
        let total = enum_count(ring, n)?;
        let image = span(ring, n, &a.columns())?;
        let ev = FreeMap::from_columns(ring, n, &duals).transpose();
        let zero = vec![0; k];
        let killed = (0..total).filter(|&i| k == 0 || ev.apply(&decode(ring, i, n)) == zero).count();
        let injective = killed == image.len();
        Ok(MatlisReport { module_size, bidual_size, injective, bijective: injective && module_size == bidual_size })
    }
}

/// Random presentations small enough to enumerate.
pub fn sample_modules(ring: &Arc<ChainRing>, count: usize, seed: u64) -> Vec<PresentedModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_rows = if ring.size() > 9 { 2 } else { 3 };
    (0..count)
        .map(|_| {
            let rows = rng.gen_range(1..=max_rows);
            let cols = rng.gen_range(1..=3);
            let entries = (0..rows * cols).map(|_| rng.gen_range(0..ring.size())).collect();
            PresentedModule::new(FreeMap::new(ring, rows, cols, entries))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DetReport {
    pub product_ideal_matches: bool,
    pub length_multiplicative: bool,
    pub fitting_multiplicative: bool,
}

impl DetReport {
    pub fn holds(&self) -> bool {
        self.product_ideal_matches && self.length_multiplicative && self.fitting_multiplicative
    }
}

pub fn is_regular(ring: &ChainRing, r: Elem) -> bool {
    ring.elements().filter(|&s| ring.mul(r, s) == 0).count() == 1
}

/// `det(S/r) = (r)` multiplicativity along `0 → S/r_2 → S/r_1 r_2 → S/r_1 → 0`.
pub fn det_cokernel_multiplicative(ring: &Arc<ChainRing>, r1: Elem, r2: Elem) -> Result<DetReport> {
    for r in [r1, r2] {
        if !is_regular(ring, r) {
            return Err(LeadingError::NotRegular(ring.show(r)));
        }
    }
    let r12 = ring.mul(r1, r2);
    let i1 = Ideal::generated(ring, &[r1]);
    let i2 = Ideal::generated(ring, &[r2]);
    let i12 = Ideal::generated(ring, &[r12]);
    let product_ideal_matches = Ideal::product(ring, &i1, &i2) == i12;
    let quotient = |r: Elem| PresentedModule::cyclic(ring, &[r]).size();
    let length_multiplicative = quotient(r12)? == quotient(r1)? * quotient(r2)?;
    let f = |r: Elem| fitting0(&FreeMap::new(ring, 1, 1, vec![r]));
    let fitting_multiplicative = Ideal::product(ring, &f(r1), &f(r2)) == f(r12);
    Ok(DetReport { product_ideal_matches, length_multiplicative, fitting_multiplicative })
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wedge^{} of rank {}: {:?}", self.t, self.n, self.coeffs)
    }
}

/// The four rings used for exhaustive checks.
pub fn standard_rings() -> Vec<Arc<ChainRing>> {
    [(2, 2, 1), (3, 2, 1), (2, 1, 2), (2, 2, 2)]
        .iter()
        .map(|&(p, a, b)| ChainRing::new(ChainRingSpec { p, a, b }).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, a: u32, b: u32) -> Arc<ChainRing> {
        ChainRing::new(ChainRingSpec { p, a, b }).unwrap()
    }

    #[test]
    fn kernels() {
        let r = ring(3, 2, 1);
        let f = FreeMap::from_ints(&r, &[&[3]]);
        let k = kernel(&f).unwrap();
        assert_eq!(span(&r, 1, &k).unwrap(), span(&r, 1, &[vec![3]]).unwrap());
        let s = ring(2, 1, 2);
        let x = s.x();
        let f = FreeMap::new(&s, 1, 2, vec![x, x]);
        let k = kernel(&f).unwrap();
        let expect = span(&s, 2, &[vec![1, 1], vec![x, 0]]).unwrap();
        assert_eq!(span(&s, 2, &k).unwrap(), expect);
        assert!(kernel(&FreeMap::identity(&r, 2)).unwrap().is_empty());
    }

    #[test]
    fn delta_small() {
        let r = ring(2, 2, 1);
        let phi = FreeMap::from_ints(&r, &[&[2, 1]]);
        let d = delta_element(&phi).unwrap();
        // s1 e2 - s2 e1 in the basis (e1, e2)
        assert_eq!(d.coeffs, vec![r.neg(1), 2]);
        let phi = FreeMap::from_ints(&r, &[&[2]]);
        assert_eq!(delta_element(&phi).unwrap().coeffs, vec![2]);
    }

    #[test]
    fn fitting_examples() {
        let r = ring(3, 2, 1);
        assert_eq!(fitting0(&FreeMap::from_ints(&r, &[&[3, 0], &[0, 3]])).len(), 1);
        let z4 = ring(2, 2, 1);
        assert_eq!(fitting0(&FreeMap::from_ints(&z4, &[&[2]])), Ideal::generated(&z4, &[2]));
        let s = ring(2, 1, 2);
        let x = s.x();
        assert_eq!(fitting0(&FreeMap::new(&s, 1, 2, vec![x, x])), Ideal::generated(&s, &[x]));
    }

    #[test]
    fn matlis_examples() {
        let s = ring(2, 1, 2);
        let m = PresentedModule::cyclic(&s, &[s.x()]);
        let rep = m.bidual_matlis_check().unwrap();
        assert!(rep.bijective && rep.module_size == 2);
        let s = ring(2, 2, 2);
        let m = PresentedModule::cyclic(&s, &[2, s.x()]);
        let rep = m.bidual_matlis_check().unwrap();
        assert!(rep.bijective && rep.module_size == 2);
        let m = PresentedModule::new(FreeMap::new(&s, 1, 1, vec![0]));
        let rep = m.bidual_matlis_check().unwrap();
        assert!(rep.bijective && rep.module_size == 16);
    }

    #[test]
    fn det_examples() {
        let z8 = ring(2, 3, 1);
        assert!(det_cokernel_multiplicative(&z8, 3, 3).unwrap().holds());
        let s = ring(2, 2, 2);
        let r = s.from_coeffs(&[1, 1]);
        assert!(det_cokernel_multiplicative(&s, r, r).unwrap().holds());
        assert!(matches!(det_cokernel_multiplicative(&z8, 2, 3), Err(LeadingError::NotRegular(_))));
    }
}
