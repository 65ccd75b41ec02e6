//! Finite fields `F_q`, `q = p^m ≤ 2^24`, with full exp/log tables.
//!
//! Elements are plain codes `Σ d_i p^i` of their coordinates in the basis
//! `1, x, …, x^{m−1}` of `F_p[x]/(f)`; the field owns all the tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::{Error, Result};

pub const TABLE_BOUND: u64 = 1 << 24;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct FqElem(pub u32);

impl FqElem {
    pub fn code(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct FqField {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, low degree first; `x` for prime fields.
    modulus: Vec<u32>,
    generator: FqElem,
    seed: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

// Polynomial helpers over F_p, low degree first.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    poly_rem(r, f, p)
}

fn poly_rem(mut r: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    let lead_inv = arith::inv_mod(f[d], p);
    trim(&mut r);
    while r.len() > d {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for j in 0..=d {
            let idx = top - d + j;
            r[idx] = (r[idx] + p - c * f[j] % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_powmod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base.to_vec(), f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `x^{p^m} ≡ x` and `gcd(x^{p^{m/r}} − x, f) = 1` for primes `r | m`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() as u32 - 1;
    let x = vec![0, 1];
    let pm = (p as u128).pow(m);
    if poly_powmod(&x, pm, f, p) != poly_rem(x.clone(), f, p) {
        return false;
    }
    for r in arith::prime_factors(m as u64) {
        let e = (p as u128).pow(m / r as u32);
        let mut h = poly_powmod(&x, e, f, p);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FqField {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::with_seed(p, m, DEFAULT_SEED)
    }

    /// Build `F_{p^m}`; `seed` drives the random search for the modulus.
    pub fn with_seed(p: u32, m: u32, seed: u64) -> Result<Self> {
        if !arith::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::BadParams("extension degree must be ≥ 1".into()));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > TABLE_BOUND {
            return Err(Error::TooLarge { q });
        }
        let (p64, q) = (p as u64, q as u32);
        let modulus: Vec<u64> = if m == 1 {
            vec![0, 1]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                let mut f: Vec<u64> = (0..m).map(|_| rng.gen_range(0..p64)).collect();
                f.push(1);
                if f[0] != 0 && is_irreducible(&f, p64) {
                    break f;
                }
            }
        };
        let mut field = FqField {
            p,
            m,
            q,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: FqElem(0),
            seed,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        };
        let order = (q - 1) as u64;
        let factors = arith::prime_factors(order);
        let g = (1..q)
            .map(FqElem)
            .find(|&c| {
                let poly = field.to_poly(c);
                factors.iter().all(|&r| {
                    let h = poly_powmod(&poly, (order / r) as u128, &modulus, p64);
                    h != vec![1]
                })
            })
            .expect("F_q^× is cyclic");
        field.generator = g;
        if m == 1 {
            // smallest primitive root
            debug_assert_eq!(arith::pow_mod(g.0 as u64, order, p64), 1);
        }
        let gpoly = field.to_poly(g);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![1u64];
        for k in 0..q - 1 {
            let code = field.from_poly(&cur);
            exp.push(code);
            log[code as usize] = k;
            cur = poly_mulmod(&cur, &gpoly, &modulus, p64);
        }
        field.exp = exp;
        field.log = log;
        let trace = (0..q)
            .map(|c| {
                let x = FqElem(c);
                let mut acc = FqElem(0);
                let mut y = x;
                for _ in 0..m {
                    acc = field.add(acc, y);
                    y = field.pow(y, p as u64);
                }
                debug_assert!(acc.0 < p);
                acc.0
            })
            .collect();
        field.trace = trace;
        Ok(field)
    }

    fn to_poly(&self, x: FqElem) -> Vec<u64> {
        let mut c = x.0 as u64;
        let mut out = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            out.push(c % self.p as u64);
            c /= self.p as u64;
        }
        trim(&mut out);
        out
    }

    fn from_poly(&self, a: &[u64]) -> u32 {
        a.iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d) as u32
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FqElem {
        FqElem(arith::rem(k, self.p as u64) as u32)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.m == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        let p = self.p;
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FqElem(out)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.p;
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        FqElem(out)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % (self.q as u64 - 1);
        FqElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        let l = self.dlog(a).ok_or(Error::DivisionByZero)?;
        Ok(self.exp_of(-(l as i64)))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if a.0 == 0 {
            return if e == 0 { FqElem(1) } else { FqElem(0) };
        }
        let k = self.log[a.0 as usize] as u128 * e as u128 % (self.q as u128 - 1);
        FqElem(self.exp[k as usize])
    }

    /// Discrete log base the generator; `None` at zero.
    pub fn dlog(&self, a: FqElem) -> Option<u32> {
        let l = self.log[a.0 as usize];
        (l != u32::MAX).then_some(l)
    }

    /// `g^k`.
    pub fn exp_of(&self, k: i64) -> FqElem {
        FqElem(self.exp[arith::rem(k, self.q as u64 - 1) as usize])
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to `F_p`, as an integer in `0..p`.
    pub fn trace_to_prime(&self, a: FqElem) -> u32 {
        self.trace[a.0 as usize]
    }

    /// `N_{F_q/F_{p^d}}(x) = x^{(q−1)/(p^d−1)}`, an element of the subfield.
    pub fn norm_to_subfield(&self, a: FqElem, d: u32) -> Result<FqElem> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::BadSubfield { d, m: self.m });
        }
        let sub = (self.p as u64).pow(d) - 1;
        Ok(self.pow(a, (self.q as u64 - 1) / sub))
    }

    pub fn enumerate(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(FqElem)
    }

    pub fn enumerate_units(&self) -> impl Iterator<Item = FqElem> + '_ {
        (1..self.q).map(FqElem)
    }

    /// Exponent table `k ↦ g^k`, `0 ≤ k < q−1`.
    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }
}
