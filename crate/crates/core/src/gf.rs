//! Finite fields F_{p^m} with an involution.
//!
//! Elements are stored as their index in the canonical order: the
//! little-endian coefficient vector (c_0, ..., c_{m-1}) read as the integer
//! `idx = c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Zero is 0, one is 1, and the
//! derived `Ord` on [`Elem`] is the canonical order.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order (log/exp tables are materialized).
pub const MAX_ORDER: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Involution {
    Identity,
    Frobenius,
}

/// Orthogonal (identity involution) or unitary (Frobenius) geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    O,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareClass {
    Zero,
    Square,
    Nonsquare,
}

impl SquareClass {
    pub fn mul(self, other: SquareClass) -> SquareClass {
        use SquareClass::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (Square, Square) | (Nonsquare, Nonsquare) => Square,
            _ => Nonsquare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
    involution: Involution,
    order: u32,
    one: u32,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
    conj: Vec<u32>,
    nonsquare: Option<u32>,
}

/// Handle to an immutable field description plus arithmetic tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.m == other.0.m
                && self.0.modulus == other.0.modulus
                && self.0.involution == other.0.involution)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{} {:?} {:?}",
            self.0.p, self.0.m, self.0.modulus, self.0.involution
        )
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

// Polynomials over Z_p as little-endian coefficient vectors.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db] as u64, p as u64);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            let t = (f * bc as u64) % p as u64;
            let v = &mut r[shift + i];
            *v = ((*v as u64 + p as u64 - t) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Multiply two reduced residues modulo the monic `modulus`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(m, 0);
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for deg in 1..=m / 2 {
        // all monic polynomials of this degree
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut c = code;
            let mut div = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly_rem(modulus, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `m`.
pub fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut c = code;
        let mut poly = Vec::with_capacity(m as usize + 1);
        for _ in 0..m {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Validate a field description and build its tables.
    pub fn new(p: u64, m: u32, modulus: Option<&[i64]>, involution: Involution) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharTwoRejected);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(order.min(u64::MAX as u128) as u64));
        }
        let p = p as u32;
        if involution == Involution::Frobenius && m % 2 == 1 {
            return Err(Error::InvolutionUnavailable(m));
        }
        let modulus: Vec<u32> = if m == 1 {
            vec![0, 1]
        } else {
            match modulus {
                None => default_modulus(p, m),
                Some(c) => {
                    if c.len() != m as usize + 1 {
                        return Err(Error::InvalidModulus(format!(
                            "expected {} coefficients, got {}",
                            m + 1,
                            c.len()
                        )));
                    }
                    let red: Vec<u32> = c.iter().map(|&v| v.rem_euclid(p as i64) as u32).collect();
                    if red[m as usize] != 1 {
                        return Err(Error::InvalidModulus("modulus must be monic".into()));
                    }
                    if !is_irreducible(&red, p) {
                        return Err(Error::ReduciblePolynomial(p));
                    }
                    red
                }
            }
        };
        Ok(Field(Arc::new(Self::build(p, m, modulus, involution))))
    }

    /// The prime field F_p with the identity involution.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None, Involution::Identity)
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>, involution: Involution) -> Inner {
        let order = p.pow(m);
        let q1 = (order - 1) as u64;
        let md = m as usize;
        let to_idx = |c: &[u32]| -> u32 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
        let from_idx = |mut idx: u32| -> Vec<u32> {
            let mut c = vec![0u32; md];
            for slot in c.iter_mut() {
                *slot = idx % p;
                idx /= p;
            }
            c
        };
        let one_vec = {
            let mut v = vec![0u32; md];
            v[0] = 1;
            v
        };
        let one = to_idx(&one_vec);

        // find a primitive element by testing orders in canonical order
        let factors = prime_factors(q1);
        let poly_pow = |base: &[u32], mut e: u64| -> Vec<u32> {
            let mut r = one_vec.clone();
            let mut b = base.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    r = poly_mulmod(&r, &b, &modulus, p);
                }
                b = poly_mulmod(&b, &b, &modulus, p);
                e >>= 1;
            }
            r
        };
        let mut generator = 0;
        for cand in 1..order {
            let c = from_idx(cand);
            if factors.iter().all(|&r| poly_pow(&c, q1 / r) != one_vec) {
                generator = cand;
                break;
            }
        }
        let gvec = from_idx(generator);
        let mut exp = vec![0u32; q1 as usize];
        let mut log = vec![NONE; order as usize];
        let mut cur = one_vec.clone();
        for k in 0..q1 as usize {
            let idx = to_idx(&cur);
            exp[k] = idx;
            log[idx as usize] = k as u32;
            cur = poly_mulmod(&cur, &gvec, &modulus, p);
        }
        let mut neg = vec![0u32; order as usize];
        for (idx, slot) in neg.iter_mut().enumerate() {
            let c: Vec<u32> = from_idx(idx as u32).iter().map(|&d| (p - d) % p).collect();
            *slot = to_idx(&c);
        }
        let mut zech = vec![NONE; q1 as usize];
        for k in 0..q1 as usize {
            let mut c = from_idx(exp[k]);
            c[0] = (c[0] + 1) % p;
            let idx = to_idx(&c);
            zech[k] = log[idx as usize];
        }
        let mut conj = vec![0u32; order as usize];
        for (idx, slot) in conj.iter_mut().enumerate() {
            *slot = match involution {
                Involution::Identity => idx as u32,
                Involution::Frobenius => {
                    if idx == 0 {
                        0
                    } else {
                        let qh = (p as u64).pow(m / 2);
                        exp[((log[idx] as u64 * qh) % q1) as usize]
                    }
                }
            };
        }
        let nonsquare = match involution {
            Involution::Identity => (1..order).find(|&i| log[i as usize] % 2 == 1),
            Involution::Frobenius => None,
        };
        Inner {
            p,
            m,
            modulus,
            involution,
            order,
            one,
            generator,
            exp,
            log,
            zech,
            neg,
            conj,
            nonsquare,
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn involution(&self) -> Involution {
        self.0.involution
    }

    pub fn case(&self) -> Case {
        match self.0.involution {
            Involution::Identity => Case::O,
            Involution::Frobenius => Case::U,
        }
    }

    /// Order of the fixed field F_0.
    pub fn fixed_order(&self) -> u32 {
        match self.0.involution {
            Involution::Identity => self.0.order,
            Involution::Frobenius => self.0.p.pow(self.0.m / 2),
        }
    }

    pub fn generator(&self) -> Elem {
        Elem(self.0.generator)
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(self.0.one)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index < self.0.order {
            Ok(Elem(index))
        } else {
            Err(Error::InvalidElement(format!("index {index} out of range")))
        }
    }

    /// Image of an integer under Z -> F.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Build an element from little-endian coefficients (at most m of them).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Elem> {
        let m = self.0.m as usize;
        if coeffs.len() > m {
            return Err(Error::InvalidElement(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                m
            )));
        }
        let p = self.0.p;
        let mut idx = 0u32;
        for i in (0..m).rev() {
            let c = coeffs.get(i).copied().unwrap_or(0).rem_euclid(p as i64) as u32;
            idx = idx * p + c;
        }
        Ok(Elem(idx))
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let p = self.0.p;
        let m = self.0.m as usize;
        let mut c = vec![0u32; m];
        let mut idx = x.0;
        for slot in c.iter_mut() {
            *slot = idx % p;
            idx /= p;
        }
        c
    }

    /// Integer representative in [0, p) when `x` lies in the prime field.
    pub fn to_int(&self, x: Elem) -> Option<u32> {
        (x.0 < self.0.p).then_some(x.0)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if self.0.m == 1 {
            return Elem((a.0 + b.0) % self.0.p);
        }
        let q1 = self.0.order - 1;
        let la = self.0.log[a.0 as usize];
        let lb = self.0.log[b.0 as usize];
        let d = (lb + q1 - la) % q1;
        let z = self.0.zech[d as usize];
        if z == NONE {
            Elem(0)
        } else {
            Elem(self.0.exp[((la as u64 + z as u64) % q1 as u64) as usize])
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        let q1 = (self.0.order - 1) as u64;
        let s = self.0.log[a.0 as usize] as u64 + self.0.log[b.0 as usize] as u64;
        Elem(self.0.exp[(s % q1) as usize])
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let q1 = self.0.order - 1;
        let la = self.0.log[a.0 as usize];
        Some(Elem(self.0.exp[((q1 - la) % q1) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return Elem(0);
        }
        let q1 = (self.0.order - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Elem(self.0.exp[((l * (e % q1)) % q1) as usize])
    }

    /// Discrete log relative to [`Field::generator`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        let l = self.0.log[a.0 as usize];
        (l != NONE).then_some(l)
    }

    /// x^σ.
    pub fn involve(&self, x: Elem) -> Elem {
        Elem(self.0.conj[x.0 as usize])
    }

    pub fn is_fixed(&self, x: Elem) -> bool {
        self.involve(x) == x
    }

    /// x^σ x.
    pub fn norm(&self, x: Elem) -> Elem {
        self.mul(self.involve(x), x)
    }

    /// Square class in the hermitian sense (x = y^σ y); plain squares in Case O.
    pub fn square_class(&self, x: Elem) -> SquareClass {
        if x.0 == 0 {
            return SquareClass::Zero;
        }
        match self.case() {
            Case::O => {
                if self.0.log[x.0 as usize].is_multiple_of(2) {
                    SquareClass::Square
                } else {
                    SquareClass::Nonsquare
                }
            }
            Case::U => {
                if self.is_fixed(x) {
                    SquareClass::Square
                } else {
                    SquareClass::Nonsquare
                }
            }
        }
    }

    /// Canonical root y with y^σ y = x, or none.
    pub fn sqrt_or_none(&self, x: Elem) -> Option<Elem> {
        self.norm_solve(x)
    }

    /// Smallest y (canonical order) with y^σ y = x.
    pub fn norm_solve(&self, x: Elem) -> Option<Elem> {
        match self.case() {
            Case::O => self.plain_sqrt(x),
            Case::U => {
                if x.0 == 0 {
                    return Some(Elem(0));
                }
                if !self.is_fixed(x) {
                    return None;
                }
                let q1 = (self.0.order - 1) as u64;
                let qh = self.fixed_order() as u64;
                let lx = self.0.log[x.0 as usize] as u64;
                // y = g^k with k (q+1) = lx mod (q^2 - 1)
                let k0 = lx / (qh + 1);
                (0..=qh)
                    .map(|j| Elem(self.0.exp[((k0 + j * (qh - 1)) % q1) as usize]))
                    .min()
            }
        }
    }

    /// Smallest y with y^2 = x (ordinary square root), or none.
    pub fn plain_sqrt(&self, x: Elem) -> Option<Elem> {
        if x.0 == 0 {
            return Some(Elem(0));
        }
        let lx = self.0.log[x.0 as usize];
        if lx % 2 == 1 {
            return None;
        }
        let y = Elem(self.0.exp[(lx / 2) as usize]);
        Some(y.min(self.neg(y)))
    }

    /// Smallest nonsquare in Case O.
    pub fn canonical_nonsquare(&self) -> Option<Elem> {
        self.0.nonsquare.map(Elem)
    }

    /// Units t with t t^σ = 1, in canonical order.
    pub fn unimodular_units(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&t| self.norm(t) == self.one())
            .collect()
    }

    /// (num·1)(den·1)^{-1}.
    pub fn embed_rational(&self, num: i64, den: i64) -> Result<Elem> {
        let d = self.from_int(den);
        let inv = self.inv(d).ok_or(Error::DenominatorVanishes(self.0.p))?;
        Ok(self.mul(self.from_int(num), inv))
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem(0), |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.one(), |acc, x| self.mul(acc, x))
    }

    /// Human readable form, e.g. `3` or `[1,4]`.
    pub fn format(&self, x: Elem) -> String {
        if self.0.m == 1 {
            x.0.to_string()
        } else {
            let c: Vec<String> = self.coeffs(x).iter().map(|v| v.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }
}
