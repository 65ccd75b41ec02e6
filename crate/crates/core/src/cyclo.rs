//! Exact arithmetic in cyclotomic fields `Q(ζ_M)`.
//!
//! Elements are stored densely in the power basis `1, ζ, …, ζ^{φ(M)−1}` with a
//! single common denominator, reduced modulo the `M`-th cyclotomic polynomial.
//! That representation is canonical, so equality is coefficient equality.
//! Operations on elements of different moduli lift both sides to the lcm.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// The quotient ring `Z[x]/Φ_M`, shared between all elements of modulus `M`.
#[derive(Debug)]
pub struct CycloRing {
    m: u32,
    deg: usize,
    /// Monic Φ_M, low degree first, length `deg + 1`.
    phi: Vec<i64>,
}

impl CycloRing {
    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn cyclotomic_poly(&self) -> &[i64] {
        &self.phi
    }
}

fn ring_cache() -> &'static Mutex<HashMap<u32, Arc<CycloRing>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloRing>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached ring for modulus `m`.
pub fn ring(m: u32) -> Arc<CycloRing> {
    assert!(m >= 1, "cyclotomic modulus must be positive");
    if let Some(r) = ring_cache().lock().unwrap().get(&m) {
        return r.clone();
    }
    let phi = cyclotomic_poly(m);
    let built = Arc::new(CycloRing {
        m,
        deg: phi.len() - 1,
        phi,
    });
    ring_cache()
        .lock()
        .unwrap()
        .entry(m)
        .or_insert(built)
        .clone()
}

fn poly_subst_pow(f: &[i64], k: usize) -> Vec<i64> {
    let mut out = vec![0; (f.len() - 1) * k + 1];
    for (i, &c) in f.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

/// Exact division by a monic divisor.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                r[i + j] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Φ_M via Φ_{pm}(x) = Φ_m(x^p) when p | m, and Φ_m(x^p)/Φ_m(x) otherwise.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut f = vec![-1i64, 1];
    let mut cur = 1u64;
    let mut rest = m as u64;
    for p in arith::prime_factors(m as u64) {
        while rest % p == 0 {
            let lifted = poly_subst_pow(&f, p as usize);
            f = if cur % p == 0 {
                lifted
            } else {
                poly_div_exact(&lifted, &f)
            };
            cur *= p;
            rest /= p;
        }
    }
    f
}

fn reduce_big(r: &CycloRing, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let d = r.deg;
    if v.len() > d {
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for j in 0..d {
                if r.phi[j] != 0 {
                    v[i - d + j] -= &c * r.phi[j];
                }
            }
        }
    }
    v.resize(d, BigInt::zero());
    v
}

fn reduce_i128(r: &CycloRing, mut v: Vec<i128>) -> Option<Vec<i128>> {
    let d = r.deg;
    if v.len() > d {
        for i in (d..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            v[i] = 0;
            for j in 0..d {
                let p = r.phi[j] as i128;
                if p != 0 {
                    v[i - d + j] = v[i - d + j].checked_sub(c.checked_mul(p)?)?;
                }
            }
        }
    }
    v.truncate(d);
    v.resize(d, 0);
    Some(v)
}

/// Exact element of `Q(ζ_M)`.
#[derive(Clone)]
pub struct CycloElem {
    ring: Arc<CycloRing>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElem {
    fn from_parts(ring: Arc<CycloRing>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycloElem { ring, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        assert!(!self.den.is_zero());
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.num.iter_mut() {
                *c /= &g;
            }
        }
    }

    pub fn zero(m: u32) -> Self {
        let r = ring(m);
        let d = r.deg;
        CycloElem {
            ring: r,
            num: vec![BigInt::zero(); d],
            den: BigInt::one(),
        }
    }

    pub fn from_int(m: u32, k: i64) -> Self {
        let mut e = Self::zero(m);
        e.num[0] = BigInt::from(k);
        e
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    pub fn from_bigint(m: u32, k: BigInt) -> Self {
        let mut e = Self::zero(m);
        e.num[0] = k;
        e
    }

    pub fn from_rational(m: u32, x: &BigRational) -> Self {
        let mut e = Self::zero(m);
        e.num[0] = x.numer().clone();
        e.den = x.denom().clone();
        e.normalize();
        e
    }

    /// `ζ_M^k`.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        let k = arith::rem(k, m as u64) as usize;
        let mut hist = vec![0i64; m as usize];
        hist[k] = 1;
        Self::from_root_counts(m, &hist)
    }

    /// `Σ_e counts[e]·ζ_M^e` for a histogram of length `M`.
    pub fn from_root_counts(m: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), m as usize);
        let r = ring(m);
        let v = counts.iter().map(|&c| c as i128).collect();
        let red = reduce_i128(&r, v).expect("root counts overflow");
        CycloElem {
            ring: r,
            num: red.into_iter().map(BigInt::from).collect(),
            den: BigInt::one(),
        }
    }

    /// Element with the given rational power-basis coefficients.
    pub fn from_coeffs(m: u32, coeffs: &[BigRational]) -> Self {
        let r = ring(m);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let v: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = reduce_big(&r, v);
        Self::from_parts(r, num, den)
    }

    pub fn modulus(&self) -> u32 {
        self.ring.m
    }

    pub fn degree(&self) -> usize {
        self.ring.deg
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Coefficients lie in `Z`, i.e. the element is in `Z[ζ_M]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Value-preserving inclusion into `Q(ζ_{M'})`.
    pub fn coerce(&self, m2: u32) -> Result<Self> {
        let m = self.ring.m;
        if m2 % m != 0 {
            return Err(Error::NotAMultiple { from: m, to: m2 });
        }
        if m2 == m {
            return Ok(self.clone());
        }
        let step = (m2 / m) as usize;
        let r = ring(m2);
        let mut v = vec![BigInt::zero(); (self.num.len().max(1) - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            v[i * step] = c.clone();
        }
        let num = reduce_big(&r, v);
        Ok(CycloElem {
            ring: r,
            num,
            den: self.den.clone(),
        })
    }

    fn lift_pair(&self, other: &Self) -> (Self, Self) {
        if self.ring.m == other.ring.m {
            return (self.clone(), other.clone());
        }
        let l = arith::lcm(self.ring.m as u64, other.ring.m as u64) as u32;
        (self.coerce(l).unwrap(), other.coerce(l).unwrap())
    }

    /// The automorphism `ζ_M ↦ ζ_M^e`, `gcd(e, M) = 1`.
    pub fn galois(&self, e: i64) -> Self {
        let m = self.ring.m as u64;
        let e = arith::rem(e, m);
        assert_eq!(arith::gcd(e, m), 1, "galois exponent must be a unit");
        if e == 1 {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i as u64 * e % m) as usize] += c;
            }
        }
        let num = reduce_big(&self.ring, v);
        CycloElem {
            ring: self.ring.clone(),
            num,
            den: self.den.clone(),
        }
    }

    /// Complex conjugation `ζ_M ↦ ζ_M^{−1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Self::from_parts(
            self.ring.clone(),
            self.num.iter().map(|c| c * &k).collect(),
            self.den.clone(),
        )
    }

    pub fn scale(&self, x: &BigRational) -> Self {
        Self::from_parts(
            self.ring.clone(),
            self.num.iter().map(|c| c * x.numer()).collect(),
            &self.den * x.denom(),
        )
    }

    fn small_nums(&self) -> Option<Vec<i64>> {
        const LIM: i64 = 1 << 52;
        self.num
            .iter()
            .map(|c| c.to_i64().filter(|x| x.abs() < LIM))
            .collect()
    }

    fn mul_same(&self, other: &Self) -> Self {
        let r = &self.ring;
        let d = r.deg;
        let den = &self.den * &other.den;
        if let (Some(a), Some(b)) = (self.small_nums(), other.small_nums()) {
            if let Some(red) = mul_small(r, &a, &b) {
                let num = red.into_iter().map(BigInt::from).collect();
                return Self::from_parts(r.clone(), num, den);
            }
        }
        let mut v = vec![BigInt::zero(); 2 * d.max(1) - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_parts(r.clone(), reduce_big(r, v), den)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut acc = Self::one(self.ring.m);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse.
    ///
    /// Uses `a⁻¹ = ā/(a·ā)` when `a·ā` is rational (Gauss and Jacobi sums);
    /// otherwise multiplies `a` up to its norm along a generating set of the
    /// Galois group, which costs O(log φ(M)) products.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(x) = self.as_rational() {
            return Ok(Self::from_rational(self.ring.m, &x.recip()));
        }
        let c = self.conjugate();
        let n = self * &c;
        if let Some(x) = n.as_rational() {
            return Ok(c.scale(&x.recip()));
        }
        let mut x = n;
        let mut cof = c;
        for (s, ord) in unit_group_generators(self.ring.m) {
            let y = orbit_cofactor(&x, s, ord);
            x = &x * &y;
            cof = &cof * &y;
        }
        let nrm = x.as_rational().expect("norm must be rational");
        Ok(cof.scale(&nrm.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.invert()?)
    }

    /// Evaluate under `ζ_M ↦ exp(2πi e/M)`.
    pub fn embed_complex(&self, e: i64) -> Complex64 {
        let m = self.ring.m as i64;
        let den = big_to_f64(&self.den);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i as i64 * e).rem_euclid(m);
            let ang = std::f64::consts::TAU * k as f64 / m as f64;
            acc += Complex64::from_polar(big_to_f64(c), ang);
        }
        acc / den
    }

    /// `|σ_e(a)|²` for every unit `e` mod `M`, up to conjugate pairs.
    pub fn abs2_all_embeddings(&self) -> Vec<f64> {
        let m = self.ring.m as u64;
        (1..m.max(2))
            .filter(|&e| arith::gcd(e, m) == 1 && 2 * e <= m.max(2))
            .map(|e| self.embed_complex(e as i64).norm_sqr())
            .collect()
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn mul_small(r: &CycloRing, a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
    let d = r.deg;
    let mut v = vec![0i128; 2 * d.max(1) - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                v[i + j] = v[i + j].checked_add(x as i128 * y as i128)?;
            }
        }
    }
    reduce_i128(r, v)
}

/// Generators of `(Z/M)^×` with their orders, one per prime-power factor
/// (two for `2^k`, `k ≥ 3`).
fn unit_group_generators(m: u32) -> Vec<(u64, u64)> {
    let m = m as u64;
    let mut out = Vec::new();
    for p in arith::prime_factors(m) {
        let mut pk = 1;
        while m % (pk * p) == 0 {
            pk *= p;
        }
        let rest = m / pk;
        let local: Vec<u64> = if p == 2 && pk >= 8 {
            vec![pk - 1, 5]
        } else if pk <= 2 {
            vec![]
        } else {
            let target = arith::euler_phi(pk);
            let g = (2..pk)
                .find(|&g| g % p != 0 && mult_order(g, pk) == target)
                .expect("cyclic group has a generator");
            vec![g]
        };
        for g in local {
            // CRT: ≡ g mod p^k, ≡ 1 mod rest.
            let s = if rest == 1 {
                g
            } else {
                let inv = mod_inverse(rest % pk, pk);
                let t = (g + pk - 1) % pk * inv % pk;
                (1 + rest * t) % m
            };
            out.push((s, mult_order(g, pk)));
        }
    }
    out
}

fn mult_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = x * g % m;
        k += 1;
    }
    k
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i64, m as i64);
    assert_eq!(g, 1);
    x.rem_euclid(m as i64) as u64
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// `∏_{j=1}^{ord−1} σ_s^j(x)` by binary splitting.
fn orbit_cofactor(x: &CycloElem, s: u64, ord: u64) -> CycloElem {
    // prod(k) = ∏_{j=1}^{k} σ^j(x); prod(a+b) = prod(a)·σ^a(prod(b)).
    let m = x.ring.m as u64;
    let k = ord - 1;
    let mut acc = CycloElem::one(x.ring.m);
    let mut acc_len = 0u64;
    let mut block = x.galois(s as i64);
    let mut block_len = 1u64;
    let mut bits = k;
    while bits > 0 {
        if bits & 1 == 1 {
            let shifted = block.galois(arith::pow_mod(s, acc_len, m) as i64);
            acc = &acc * &shifted;
            acc_len += block_len;
        }
        bits >>= 1;
        if bits > 0 {
            let shifted = block.galois(arith::pow_mod(s, block_len, m) as i64);
            block = &block * &shifted;
            block_len *= 2;
        }
    }
    acc
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        if self.ring.m == other.ring.m {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = self.lift_pair(other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycloElem {}

impl<'a> Add<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn add(self, other: &CycloElem) -> CycloElem {
        if self.ring.m != other.ring.m {
            let (a, b) = self.lift_pair(other);
            return &a + &b;
        }
        let num = if self.den == other.den {
            self.num.iter().zip(&other.num).map(|(x, y)| x + y).collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| x * &other.den + y * &self.den)
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        CycloElem::from_parts(self.ring.clone(), num, den)
    }
}

impl<'a> Neg for &'a CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            ring: self.ring.clone(),
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn sub(self, other: &CycloElem) -> CycloElem {
        self + &(-other)
    }
}

impl<'a> Mul<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn mul(self, other: &CycloElem) -> CycloElem {
        if self.ring.m != other.ring.m {
            let (a, b) = self.lift_pair(other);
            return a.mul_same(&b);
        }
        self.mul_same(other)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $f(self, other: CycloElem) -> CycloElem {
                (&self).$f(&other)
            }
        }
        impl<'a> $tr<&'a CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $f(self, other: &CycloElem) -> CycloElem {
                (&self).$f(other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        -&self
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        };
        if self.den.is_one() {
            write!(f, "{body} [z=zeta_{}]", self.ring.m)
        } else {
            write!(f, "({body})/{} [z=zeta_{}]", self.den, self.ring.m)
        }
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CycloElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<[String; 2]> = self
            .coeffs()
            .into_iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        let mut st = s.serialize_struct("CycloElem", 2)?;
        st.serialize_field("M", &self.ring.m)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Integral element with machine-word coefficients, for hot convolution loops.
#[derive(Clone, Debug)]
pub struct IntCyclo {
    ring: Arc<CycloRing>,
    c: Vec<i128>,
}

impl IntCyclo {
    pub fn zero(m: u32) -> Self {
        let r = ring(m);
        let d = r.deg;
        IntCyclo { ring: r, c: vec![0; d] }
    }

    pub fn from_root_counts(m: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), m as usize);
        let r = ring(m);
        let c = reduce_i128(&r, counts.iter().map(|&x| x as i128).collect())
            .expect("root counts overflow");
        IntCyclo { ring: r, c }
    }

    /// `None` if the element has a nontrivial denominator or huge coefficients.
    pub fn from_cyclo(x: &CycloElem) -> Option<Self> {
        if !x.is_integral() {
            return None;
        }
        let c = x.num.iter().map(|v| v.to_i128()).collect::<Option<_>>()?;
        Some(IntCyclo {
            ring: x.ring.clone(),
            c,
        })
    }

    pub fn to_cyclo(&self) -> CycloElem {
        CycloElem {
            ring: self.ring.clone(),
            num: self.c.iter().map(|&v| BigInt::from(v)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn modulus(&self) -> u32 {
        self.ring.m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.ring.deg;
        let mut v = vec![0i128; 2 * d.max(1) - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        let c = reduce_i128(&self.ring, v).expect("IntCyclo overflow");
        IntCyclo {
            ring: self.ring.clone(),
            c,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
    }

    pub fn neg(&self) -> Self {
        IntCyclo {
            ring: self.ring.clone(),
            c: self.c.iter().map(|v| -v).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> CycloElem {
        CycloElem::root_of_unity(m, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() - 1, 48);
        assert_eq!(p105.iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn basic_roots() {
        assert_eq!(z(4, 2), CycloElem::from_int(4, -1));
        assert_eq!(z(3, 1).coeffs()[1], BigRational::one());
        assert_eq!(z(6, 1).numerators(), &[BigInt::zero(), BigInt::one()]);
        assert_eq!(&z(3, 1) * &z(3, 2), CycloElem::one(3));
        assert_eq!(&z(3, 1) + &z(3, 2), CycloElem::from_int(3, -1));
        assert_eq!(z(7, 7), CycloElem::one(7));
    }

    #[test]
    fn invert_rational_and_general() {
        let two = CycloElem::from_int(5, 2);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(two.invert().unwrap(), CycloElem::from_rational(5, &half));
        assert_eq!(CycloElem::zero(5).invert(), Err(Error::DivisionByZero));
        let a = &(&z(15, 1) + &CycloElem::from_int(15, 3)) + &z(15, 4).scale_int(2);
        let inv = a.invert().unwrap();
        assert_eq!(&a * &inv, CycloElem::one(15));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(5, 1).conjugate(), z(5, 4));
        let r = CycloElem::from_rational(5, &BigRational::new(3.into(), 7.into()));
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn coercion() {
        let m1 = CycloElem::from_int(2, -1);
        assert_eq!(m1.coerce(6).unwrap(), CycloElem::from_int(6, -1));
        assert_eq!(z(3, 1).coerce(6).unwrap(), z(6, 2));
        assert_eq!(&z(2, 1) * &z(3, 1), z(6, 5));
        assert_eq!(
            z(3, 1).coerce(7),
            Err(Error::NotAMultiple { from: 3, to: 7 })
        );
        assert_eq!(z(3, 1), z(6, 2));
    }

    #[test]
    fn embedding() {
        let e = CycloElem::from_int(1, -1).embed_complex(1);
        assert!((e - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let i = z(4, 1).embed_complex(1);
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn serialization() {
        let x = z(3, 1).scale(&BigRational::new(1.into(), 2.into()));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"M":3,"coeffs":[["0","1"],["1","2"]]}"#);
    }

    #[test]
    fn intcyclo_roundtrip() {
        let mut h = vec![0i64; 21];
        h[3] = 2;
        h[20] = -1;
        let a = IntCyclo::from_root_counts(21, &h);
        let b = CycloElem::from_root_counts(21, &h);
        assert_eq!(a.to_cyclo(), b);
        assert_eq!(a.mul(&a).to_cyclo(), &b * &b);
    }

    #[test]
    fn unit_generators_span() {
        for m in [8u32, 15, 24, 203, 812] {
            let gens = unit_group_generators(m);
            let total: u64 = gens.iter().map(|g| g.1).product();
            assert_eq!(total, arith::euler_phi(m as u64));
        }
    }
}
