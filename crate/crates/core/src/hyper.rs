//! Trace functions of traditional and canonical hypergeometric sheaves.
//!
//! Three routes to the traditional trace: the defining `2k−1`-variable
//! character sum, iterated multiplicative convolution of rank-one pieces, and
//! a float fast path through the Mellin transform on `F_q^×`. All exact
//! values live in `Q(ζ_M)` with `M = N·q`; `ζ_N^α ζ_q^β = ζ_M^{αq + βN}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::arith;
use crate::chars::{self, AddChar, MultChar};
use crate::cyclo::{CycloElem, IntCyclo};
use crate::error::{Error, Result};
use crate::ff::{FqElem, FqField};
use crate::weights::{self, CharMultiset};

/// Enumeration budget for the naive sum, in terms.
pub const NAIVE_BUDGET: f64 = 1e9;
/// Budget for the Newton oracle, in coefficient multiplications.
pub const NEWTON_BUDGET: f64 = 2e11;

/// Data of `H(ψ; S_χ, S_ρ)`: characters of `μ_N` as residues, paired
/// position by position for the convolution route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperSpec {
    pub q: u32,
    pub n_mod: u32,
    /// Shift `c` of `ψ_c`.
    pub psi: u32,
    pub chi: Vec<u32>,
    pub rho: Vec<u32>,
}

impl HyperSpec {
    pub fn from_pairs(q: u32, n_mod: u32, chi: Vec<u32>, rho: Vec<u32>) -> Result<Self> {
        if !arith::is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        if n_mod == 0 || (q - 1) % n_mod != 0 {
            return Err(Error::BadN {
                n: n_mod,
                q_minus_one: q - 1,
            });
        }
        if chi.len() != rho.len() {
            return Err(Error::SizeMismatch {
                left: chi.len(),
                right: rho.len(),
            });
        }
        if chi.is_empty() {
            return Err(Error::BadParams("hypergeometric data must be nonempty".into()));
        }
        Ok(HyperSpec {
            q,
            n_mod,
            psi: 1,
            chi: chi.into_iter().map(|a| a % n_mod).collect(),
            rho: rho.into_iter().map(|b| b % n_mod).collect(),
        })
    }

    pub fn new(q: u32, s_chi: &CharMultiset, s_rho: &CharMultiset) -> Result<Self> {
        Self::from_pairs(q, s_chi.modulus(), s_chi.elements(), s_rho.elements())
    }

    /// `Cancel`-derived data of the label `v(n, N)`.
    pub fn canonical(q: u32, n: u32, big_n: u32) -> Result<Self> {
        let v = weights::build_v(n, big_n)?;
        let (c, r) = weights::hyper_data(&v);
        Self::new(q, &c, &r)
    }

    /// Random data of rank `k`, optionally with `S_χ ∩ S_ρ = ∅`.
    pub fn random<R: Rng>(q: u32, n_mod: u32, k: usize, disjoint: bool, rng: &mut R) -> Result<Self> {
        loop {
            let chi: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n_mod)).collect();
            let rho: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n_mod)).collect();
            if disjoint && chi.iter().any(|a| rho.contains(a)) {
                continue;
            }
            return Self::from_pairs(q, n_mod, chi, rho);
        }
    }

    pub fn rank(&self) -> usize {
        self.chi.len()
    }

    pub fn s_chi(&self) -> CharMultiset {
        CharMultiset::from_residues(self.n_mod, self.chi.iter().map(|&a| a as i64))
    }

    pub fn s_rho(&self) -> CharMultiset {
        CharMultiset::from_residues(self.n_mod, self.rho.iter().map(|&b| b as i64))
    }

    /// Same data with the pairs reordered.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        HyperSpec {
            chi: perm.iter().map(|&i| self.chi[i]).collect(),
            rho: perm.iter().map(|&i| self.rho[i]).collect(),
            ..self.clone()
        }
    }

    /// Cyclotomic modulus `N·q` of exact values.
    pub fn value_modulus(&self) -> u32 {
        self.n_mod * self.q
    }

    pub fn base_field(&self) -> Result<FqField> {
        FqField::new(self.q, 1)
    }
}

/// `E = F_{q^m}` over the prime field `F_q`, with per-log trace and norm tables.
pub struct HyperField {
    pub base: FqField,
    pub ext: FqField,
    n_mod: u32,
    /// `Tr_{E/F_q}(g_E^j)`
    tr: Vec<u32>,
    /// `dlog_{F_q} N_{E/F_q}(g_E^j)`
    nl: Vec<u32>,
}

impl HyperField {
    pub fn new(spec: &HyperSpec, m: u32) -> Result<Self> {
        let base = FqField::new(spec.q, 1)?;
        let ext = FqField::new(spec.q, m)?;
        let len = ext.order() as usize - 1;
        let (tr, nl) = (0..len)
            .map(|j| {
                let x = ext.exp_of(j as i64);
                let nrm = ext.norm_to_subfield(x, 1).expect("prime subfield");
                (ext.trace_to_prime(x), base.dlog(FqElem(nrm.0)).unwrap())
            })
            .unzip();
        Ok(HyperField {
            base,
            ext,
            n_mod: spec.n_mod,
            tr,
            nl,
        })
    }

    fn units(&self) -> usize {
        self.tr.len()
    }

    fn big_m(&self) -> u32 {
        self.n_mod * self.base.order()
    }

    /// `ζ_N^α ζ_q^β ↦` exponent of `ζ_M`.
    fn combine(&self, alpha: i64, beta: i64) -> usize {
        let (n, p) = (self.n_mod as i64, self.base.order() as i64);
        ((alpha.rem_euclid(n) * p + beta.rem_euclid(p) * n) % (n * p)) as usize
    }

    /// Log of an element of `E^×` given by code.
    fn log_of(&self, t: FqElem) -> Option<usize> {
        self.ext.dlog(t).map(|l| l as usize)
    }

    /// `h(s) = −Σ_{y ≠ 0} ψ((s−1)y) χ(N(sy)) ρ̄(N(y))` for `s = g_E^σ`.
    fn rank_one_trad(&self, psi: u32, a: u32, b: u32, sigma: usize) -> IntCyclo {
        let l = self.units();
        let m = self.big_m();
        let s = self.ext.exp_of(sigma as i64);
        let s1 = self.log_of(self.ext.sub(s, self.ext.one()));
        let mut hist = vec![0i64; m as usize];
        let (a, b, c) = (a as i64, b as i64, psi as i64);
        for j in 0..l {
            let alpha = a * self.nl[(sigma + j) % l] as i64 - b * self.nl[j] as i64;
            let beta = match s1 {
                Some(ell) => c * self.tr[(ell + j) % l] as i64,
                None => 0,
            };
            hist[self.combine(alpha, beta)] -= 1;
        }
        IntCyclo::from_root_counts(m, &hist)
    }

    fn rank_one_table(&self, psi: u32, a: u32, b: u32) -> Vec<IntCyclo> {
        (0..self.units())
            .into_par_iter()
            .map(|s| self.rank_one_trad(psi, a, b, s))
            .collect()
    }
}

/// `F(τ) = σ·Σ_{x y = t} f(x) h(y)` on log-indexed tables.
pub fn convolve(f: &[IntCyclo], h: &[IntCyclo], sign: i32) -> Vec<IntCyclo> {
    let l = f.len();
    assert_eq!(l, h.len());
    (0..l)
        .into_par_iter()
        .map(|tau| convolve_at(f, h, sign, tau))
        .collect()
}

fn convolve_at(f: &[IntCyclo], h: &[IntCyclo], sign: i32, tau: usize) -> IntCyclo {
    let l = f.len();
    let mut acc: Option<IntCyclo> = None;
    for sigma in 0..l {
        let (x, y) = (&f[sigma], &h[(tau + l - sigma) % l]);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let prod = x.mul(y);
        match acc.as_mut() {
            Some(a) => a.add_assign(&prod),
            None => acc = Some(prod),
        }
    }
    let acc = acc.unwrap_or_else(|| IntCyclo::zero(f[0].modulus()));
    if sign < 0 {
        acc.neg()
    } else {
        acc
    }
}

/// Exact values on `E^× ∖ {1}`; `0` and `1` are recorded as absent.
#[derive(Clone, Debug, Serialize)]
pub struct TraceTable {
    pub q: u32,
    pub ext_degree: u32,
    pub modulus: u32,
    pub values: BTreeMap<u32, CycloElem>,
    pub absent: Vec<u32>,
}

#[derive(Serialize)]
pub struct TraceRow<'a> {
    pub t: u32,
    pub value: &'a CycloElem,
    pub abs2: f64,
}

impl TraceTable {
    fn from_log_table(hf: &HyperField, table: Vec<CycloElem>) -> Self {
        let mut values = BTreeMap::new();
        for (j, v) in table.into_iter().enumerate() {
            let t = hf.ext.exp_of(j as i64);
            if t != hf.ext.one() {
                values.insert(t.0, v);
            }
        }
        TraceTable {
            q: hf.base.order(),
            ext_degree: hf.ext.degree(),
            modulus: hf.big_m(),
            values,
            absent: vec![0, 1],
        }
    }

    pub fn get(&self, t: u32) -> Option<&CycloElem> {
        self.values.get(&t)
    }

    pub fn rows(&self) -> Vec<TraceRow<'_>> {
        self.values
            .iter()
            .map(|(&t, v)| TraceRow {
                t,
                value: v,
                abs2: v.embed_complex(1).norm_sqr(),
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(&CycloElem) -> CycloElem + Sync) -> Self {
        TraceTable {
            values: self.values.iter().map(|(&t, v)| (t, f(v))).collect(),
            ..self.clone()
        }
    }
}

/// Complex-valued table from the transform path.
#[derive(Clone, Debug)]
pub struct FloatTable {
    pub q: u32,
    pub values: BTreeMap<u32, Complex64>,
}

fn check_t(field: &FqField, t: FqElem) -> Result<()> {
    if t.0 >= field.order() {
        return Err(Error::BadT(format!("{} is not an element of F_{}", t.0, field.order())));
    }
    if t == field.zero() || t == field.one() {
        return Err(Error::BadT(format!("t = {} lies outside G_m − {{1}}", t.0)));
    }
    Ok(())
}

/// The defining sum `(−1)^{2k−1} Σ_{∏x = t∏y} ψ_E(Σx − Σy) ∏χ_E(x_i) ∏ρ̄_E(y_i)`
/// over `E = F_{q^m}`; `t` is given by its code in `E`.
pub fn trad_trace_naive(spec: &HyperSpec, t: FqElem, m: u32) -> Result<CycloElem> {
    let k = spec.rank();
    let e_order = (spec.q as f64).powi(m as i32);
    let cost = e_order.powi(2 * k as i32 - 1);
    if cost > NAIVE_BUDGET {
        return Err(Error::Infeasible {
            cost,
            budget: NAIVE_BUDGET,
        });
    }
    let hf = HyperField::new(spec, m)?;
    check_t(&hf.ext, t)?;
    let lt = hf.log_of(t).unwrap();
    let l = hf.units();
    let big_m = hf.big_m() as usize;
    let c = spec.psi as i64;
    // Per-variable exponent contributions, indexed by log.
    let contrib = |sign: i64, ch: u32| -> Vec<usize> {
        (0..l)
            .map(|j| hf.combine(sign * ch as i64 * hf.nl[j] as i64, sign * c * hf.tr[j] as i64))
            .collect()
    };
    let xs: Vec<Vec<usize>> = spec.chi.iter().map(|&a| contrib(1, a)).collect();
    let ys: Vec<Vec<usize>> = spec.rho.iter().map(|&b| contrib(-1, b)).collect();
    // Free variables: x_1..x_{k−1}, y_1..y_k; x_k = t ∏y / ∏x.
    let mut free: Vec<(&Vec<usize>, i64)> = Vec::new();
    for x in &xs[..k - 1] {
        free.push((x, -1));
    }
    for y in &ys {
        free.push((y, 1));
    }
    let last = &xs[k - 1];

    fn walk(
        free: &[(&Vec<usize>, i64)],
        last: &[usize],
        l: usize,
        big_m: usize,
        exp: usize,
        log: usize,
        hist: &mut [i64],
    ) {
        match free.split_first() {
            None => hist[(exp + last[log % l]) % big_m] += 1,
            Some(((tab, dir), rest)) => {
                for j in 0..l {
                    let nl = if *dir > 0 { log + j } else { log + l - j };
                    walk(rest, last, l, big_m, (exp + tab[j]) % big_m, nl % l, hist);
                }
            }
        }
    }

    let (first, rest) = free.split_first().unwrap();
    let hist = (0..l)
        .into_par_iter()
        .fold(
            || vec![0i64; big_m],
            |mut hist, j| {
                let log = if first.1 > 0 { lt + j } else { lt + l - j };
                walk(rest, last, l, big_m, first.0[j], log % l, &mut hist);
                hist
            },
        )
        .reduce(
            || vec![0i64; big_m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(-CycloElem::from_root_counts(big_m as u32, &hist))
}

/// Log-indexed traditional table over `E^×` (value at 1 included).
fn trad_log_table(spec: &HyperSpec, hf: &HyperField, sign: i32) -> Vec<IntCyclo> {
    let mut f = hf.rank_one_table(spec.psi, spec.chi[0], spec.rho[0]);
    for i in 1..spec.rank() {
        let h = hf.rank_one_table(spec.psi, spec.chi[i], spec.rho[i]);
        f = convolve(&f, &h, sign);
    }
    f
}

/// Iterated multiplicative convolution of rank-one traditional traces, with
/// per-step sign −1, over `E = F_{q^m}`.
pub fn trad_trace_conv(spec: &HyperSpec, m: u32) -> Result<TraceTable> {
    trad_trace_conv_signed(spec, m, -1)
}

pub fn trad_trace_conv_signed(spec: &HyperSpec, m: u32, sign: i32) -> Result<TraceTable> {
    let hf = HyperField::new(spec, m)?;
    let f = trad_log_table(spec, &hf, sign);
    Ok(TraceTable::from_log_table(
        &hf,
        f.iter().map(IntCyclo::to_cyclo).collect(),
    ))
}

/// Convolution value at a single `t ∈ E`; only the last step is pointwise.
pub fn trad_trace_conv_at(spec: &HyperSpec, t: FqElem, m: u32) -> Result<CycloElem> {
    let hf = HyperField::new(spec, m)?;
    check_t(&hf.ext, t)?;
    let k = spec.rank();
    let lt = hf.log_of(t).unwrap();
    let mut f = hf.rank_one_table(spec.psi, spec.chi[0], spec.rho[0]);
    if k == 1 {
        return Ok(f[lt].to_cyclo());
    }
    for i in 1..k - 1 {
        let h = hf.rank_one_table(spec.psi, spec.chi[i], spec.rho[i]);
        f = convolve(&f, &h, -1);
    }
    let h = hf.rank_one_table(spec.psi, spec.chi[k - 1], spec.rho[k - 1]);
    Ok(convolve_at(&f, &h, -1, lt).to_cyclo())
}

/// Per-step convolution sign under which the convolution route reproduces
/// the defining sum at every `t ∈ F_q ∖ {0,1}`; `None` if neither does.
pub fn adjudicate_conv_sign(spec: &HyperSpec) -> Result<Option<i32>> {
    let naive: Vec<(u32, CycloElem)> = (2..spec.q)
        .map(|t| Ok((t, trad_trace_naive(spec, FqElem(t), 1)?)))
        .collect::<Result<_>>()?;
    for sign in [-1, 1] {
        let table = trad_trace_conv_signed(spec, 1, sign)?;
        if naive.iter().all(|(t, v)| table.get(*t) == Some(v)) {
            return Ok(Some(sign));
        }
    }
    Ok(None)
}

/// Float table through the Mellin transform on `F_q^×`: each rank-one
/// factor transforms to `−G(c−j)·Ḡ(j−r)`, convolution becomes a product.
pub fn mellin_fast(spec: &HyperSpec) -> Result<FloatTable> {
    let field = spec.base_field()?;
    let q = spec.q as usize;
    let l = q - 1;
    let step = l / spec.n_mod as usize;
    let mut planner = FftPlanner::<f64>::new();
    // Positive-exponent unnormalised DFT: X(e) = Σ_d x(d) ω^{ed}.
    let inv = planner.plan_fft_inverse(l);
    let psi_at = |sign: f64, d: usize| {
        let x = field.exp_of(d as i64);
        let e = (spec.psi as u64 * x.0 as u64 % q as u64) as f64;
        Complex64::from_polar(1.0, sign * std::f64::consts::TAU * e / q as f64)
    };
    let mut g: Vec<Complex64> = (0..l).map(|d| psi_at(1.0, d)).collect();
    let mut gbar: Vec<Complex64> = (0..l).map(|d| psi_at(-1.0, d)).collect();
    inv.process(&mut g);
    inv.process(&mut gbar);
    let k = spec.rank();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let mut spectrum: Vec<Complex64> = (0..l)
        .map(|j| {
            let mut acc = Complex64::new(sign, 0.0);
            for (&a, &b) in spec.chi.iter().zip(&spec.rho) {
                let (c, r) = (a as usize * step, b as usize * step);
                acc *= -g[(c + l - j) % l] * gbar[(j + l - r) % l];
            }
            acc
        })
        .collect();
    inv.process(&mut spectrum);
    let mut values = BTreeMap::new();
    for (tau, v) in spectrum.into_iter().enumerate() {
        let t = field.exp_of(tau as i64);
        if t != field.one() {
            values.insert(t.0, v / l as f64);
        }
    }
    Ok(FloatTable {
        q: spec.q,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CanonicalPath {
    /// Convolution of rank-one canonical traces.
    ConvOfCanonical,
    /// Traditional trace divided by `φ`.
    TradOverPhi,
}

fn grossen_product(spec: &HyperSpec, field: &FqField) -> Result<CycloElem> {
    let mut acc = CycloElem::one(spec.n_mod);
    for (&a, &b) in spec.chi.iter().zip(&spec.rho) {
        acc = &acc * &chars::grossen_value(field, spec.n_mod, a as i64, b as i64)?;
    }
    Ok(acc)
}

/// `φ(Frob) = ∏(−g(ψ,χ)) ∏(−g(ψ̄,ρ̄))` for the spec, over the prime field.
pub fn phi_of(spec: &HyperSpec) -> Result<CycloElem> {
    let field = spec.base_field()?;
    chars::phi_value(
        &field,
        &AddChar::new(FqElem(spec.psi)),
        &spec.s_chi(),
        &spec.s_rho(),
        1,
    )
}

/// Trace table of `H^can(S_χ, S_ρ)` over `F_q`.
pub fn canonical_trace(spec: &HyperSpec, path: CanonicalPath) -> Result<TraceTable> {
    match path {
        CanonicalPath::TradOverPhi => {
            let inv = phi_of(spec)?.invert()?;
            Ok(trad_trace_conv(spec, 1)?.map(|v| v * &inv))
        }
        CanonicalPath::ConvOfCanonical => {
            let field = spec.base_field()?;
            let n = spec.n_mod;
            let l = field.order() as usize - 1;
            let one = field.one();
            // Integral part χ(s)·(ρ/χ)(1−s), zero at s = 1.
            let kummer = |a: u32, b: u32| -> Vec<IntCyclo> {
                (0..l)
                    .map(|sigma| {
                        let s = field.exp_of(sigma as i64);
                        let mut hist = vec![0i64; n as usize];
                        if let Some(d) = field.dlog(field.sub(one, s)) {
                            let e = a as i64 * sigma as i64 + (b as i64 - a as i64) * d as i64;
                            hist[arith::rem(e, n as u64) as usize] = 1;
                        }
                        IntCyclo::from_root_counts(n, &hist)
                    })
                    .collect()
            };
            let mut f = kummer(spec.chi[0], spec.rho[0]);
            for i in 1..spec.rank() {
                f = convolve(&f, &kummer(spec.chi[i], spec.rho[i]), -1);
            }
            let inv = grossen_product(spec, &field)?.invert()?;
            let hf = HyperField::new(spec, 1)?;
            Ok(TraceTable::from_log_table(
                &hf,
                f.iter().map(|v| v.to_cyclo() * &inv).collect(),
            ))
        }
    }
}

/// The global sign `s` with path 1 = `s`·path 2 at every `t`, if any.
pub fn compare_paths(spec: &HyperSpec) -> Result<Option<i32>> {
    let a = canonical_trace(spec, CanonicalPath::ConvOfCanonical)?;
    let b = canonical_trace(spec, CanonicalPath::TradOverPhi)?;
    for s in [1i64, -1] {
        if a
            .values
            .iter()
            .all(|(t, v)| b.get(*t).map(|w| w.scale_int(s)) == Some(v.clone()))
        {
            return Ok(Some(s as i32));
        }
    }
    Ok(None)
}

/// Closed-form determinant of Frobenius at `t`:
/// `A·(∏χ)(t)`, times `(∏ρ/∏χ)(1−t)` when the two products differ, with
/// `A = ∏χ((−1)^{k−1}) · q^{k(k−1)/2} · ∏_{χ,ρ}(−g(ψ̄, χ/ρ))`.
pub fn det_trad(spec: &HyperSpec, t: FqElem) -> Result<CycloElem> {
    let field = spec.base_field()?;
    check_t(&field, t)?;
    let k = spec.rank();
    if k > 1 && !spec.s_chi().is_disjoint(&spec.s_rho()) {
        return Err(Error::BadParams(
            "closed-form determinant needs S_chi and S_rho disjoint".into(),
        ));
    }
    let n = spec.n_mod;
    let psibar = AddChar::new(FqElem(spec.psi)).conj(&field);
    let minus_one_pow = if (k - 1) % 2 == 0 {
        field.one()
    } else {
        field.from_int(-1)
    };
    let mut a_val = CycloElem::one(1);
    for &a in &spec.chi {
        a_val = &a_val * &chars::kummer_trace(&field, n, a as i64, minus_one_pow, chars::KummerFlavor::X)?;
    }
    let qpow = BigInt::from(spec.q).pow((k * (k - 1) / 2) as u32);
    a_val = a_val.scale(&BigRational::from_integer(qpow));
    for &a in &spec.chi {
        for &b in &spec.rho {
            let ch = MultChar::of_mu_n(&field, n, a as i64 - b as i64)?;
            a_val = &a_val * &(-chars::gauss_sum(&field, &psibar, &ch)?);
        }
    }
    let pc = spec.s_chi().product() as i64;
    let pr = spec.s_rho().product() as i64;
    let mut val = &a_val * &chars::kummer_trace(&field, n, pc, t, chars::KummerFlavor::X)?;
    if pc != pr {
        val = &val * &chars::kummer_trace(&field, n, pr - pc, t, chars::KummerFlavor::OneMinusX)?;
    }
    Ok(val)
}

/// Determinant from the traces over `F_{q^m}`, `m = 1..k`, via Newton's
/// identities.
pub fn det_via_newton(spec: &HyperSpec, t: FqElem) -> Result<CycloElem> {
    let k = spec.rank();
    if k > 3 {
        return Err(Error::BadParams("Newton oracle supports k ≤ 3".into()));
    }
    let deg = arith::euler_phi(spec.value_modulus() as u64) as f64;
    let cost: f64 = (1..=k as i32)
        .map(|m| {
            // k−2 full convolutions, then one pointwise step.
            let e = (spec.q as f64).powi(m);
            (e * e * (k as f64 - 2.0) + e) * deg * deg
        })
        .sum();
    if cost > NEWTON_BUDGET {
        return Err(Error::Infeasible {
            cost,
            budget: NEWTON_BUDGET,
        });
    }
    let field = spec.base_field()?;
    check_t(&field, t)?;
    let p: Vec<CycloElem> = (1..=k as u32)
        .map(|m| trad_trace_conv_at(spec, t, m))
        .collect::<Result<_>>()?;
    let mut e = vec![CycloElem::one(1)];
    for m in 1..=k {
        let mut acc = CycloElem::zero(1);
        for i in 1..=m {
            let term = &e[m - i] * &p[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&BigRational::new(1.into(), (m as i64).into())));
    }
    Ok(e.pop().unwrap())
}

/// Outcome of the exponent comparison for `det H^can`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjudicationRecord {
    pub n: u32,
    pub big_n: u32,
    pub q: u32,
    pub t: u32,
    pub lhs: CycloElem,
    pub lambda_product: CycloElem,
    /// `∏ λ_i^n · q^{n(n−1)/2}`
    pub rhs_half: CycloElem,
    /// `∏ λ_i^n · q^{n(n−1)}`
    pub rhs_full: CycloElem,
    pub half_matches: bool,
    pub full_matches: bool,
    pub newton_agrees: Option<bool>,
    pub lambdas: Vec<CycloElem>,
}

impl AdjudicationRecord {
    /// `"half"`, `"full"`, `"both"` or `"none"`.
    pub fn verdict(&self) -> &'static str {
        match (self.half_matches, self.full_matches) {
            (true, false) => "half",
            (false, true) => "full",
            (true, true) => "both",
            (false, false) => "none",
        }
    }
}

/// `λ^can({χ}, {1})(Frob) = χ((−1)^{n−1})·(−g(ψ̄,χ)) / ((−g(ψ,χ))·(−g(ψ̄,1)))`.
pub fn lambda_can(field: &FqField, n: u32, big_n: u32, chi: u32) -> Result<CycloElem> {
    let psi = AddChar::standard();
    let psibar = psi.conj(field);
    let ch = MultChar::of_mu_n(field, big_n, chi as i64)?;
    let triv = MultChar::trivial(field);
    let sgn = if (n - 1) % 2 == 0 {
        field.one()
    } else {
        field.from_int(-1)
    };
    let num = &chars::kummer_trace(field, big_n, chi as i64, sgn, chars::KummerFlavor::X)?
        * &(-chars::gauss_sum(field, &psibar, &ch)?);
    let den = &(-chars::gauss_sum(field, &psi, &ch)?) * &(-chars::gauss_sum(field, &psibar, &triv)?);
    num.checked_div(&den)
}

/// Compare `det H^can(Frob)` against `∏λ_i^n · q^e` for both candidate
/// exponents `e ∈ {n(n−1)/2, n(n−1)}`.
pub fn verify_det_hcan(n: u32, big_n: u32, q: u32) -> Result<AdjudicationRecord> {
    let spec = HyperSpec::canonical(q, n, big_n)?;
    let field = spec.base_field()?;
    let mut t = field.pow(field.from_int(2), big_n as u64);
    if t == field.one() || t == field.zero() {
        t = field.generator();
    }
    let phi_n = phi_of(&spec)?.pow(n as i64)?;
    let lhs = det_trad(&spec, t)?.checked_div(&phi_n)?;
    let lambdas: Vec<CycloElem> = spec
        .chi
        .iter()
        .map(|&a| lambda_can(&field, n, big_n, a))
        .collect::<Result<_>>()?;
    let mut lambda_product = CycloElem::one(1);
    for l in &lambdas {
        lambda_product = &lambda_product * &l.pow(n as i64)?;
    }
    let qq = |e: u32| BigRational::from_integer(BigInt::from(q).pow(e));
    let rhs_half = lambda_product.scale(&qq(n * (n - 1) / 2));
    let rhs_full = lambda_product.scale(&qq(n * (n - 1)));
    let newton_agrees = if n == 2 {
        Some(det_via_newton(&spec, t)?.checked_div(&phi_n)? == lhs)
    } else {
        None
    };
    Ok(AdjudicationRecord {
        n,
        big_n,
        q,
        t: t.0,
        half_matches: lhs == rhs_half,
        full_matches: lhs == rhs_full,
        lhs,
        lambda_product,
        rhs_half,
        rhs_full,
        newton_agrees,
        lambdas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_collapse() {
        // χ = ρ: trace is χ(t) for t ≠ 1.
        let spec = HyperSpec::from_pairs(7, 3, vec![1], vec![1]).unwrap();
        let f = spec.base_field().unwrap();
        for t in 2..7 {
            let v = trad_trace_naive(&spec, FqElem(t), 1).unwrap();
            let expect = chars::kummer_trace(&f, 3, 1, FqElem(t), chars::KummerFlavor::X).unwrap();
            assert_eq!(v, expect);
        }
        let triv = HyperSpec::from_pairs(7, 3, vec![0], vec![0]).unwrap();
        assert_eq!(trad_trace_naive(&triv, FqElem(3), 1).unwrap(), CycloElem::one(1));
    }

    #[test]
    fn bad_t_and_budget() {
        let spec = HyperSpec::canonical(29, 2, 7).unwrap();
        assert!(matches!(trad_trace_naive(&spec, FqElem(1), 1), Err(Error::BadT(_))));
        assert!(matches!(trad_trace_naive(&spec, FqElem(0), 1), Err(Error::BadT(_))));
        let big = HyperSpec::from_pairs(113, 7, vec![1, 2, 3, 4], vec![0; 4]).unwrap();
        assert!(matches!(trad_trace_naive(&big, FqElem(2), 1), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn conv_matches_naive_small() {
        let spec = HyperSpec::from_pairs(13, 6, vec![1, 4], vec![0, 3]).unwrap();
        let table = trad_trace_conv(&spec, 1).unwrap();
        for t in 2..13 {
            assert_eq!(table.get(t).unwrap(), &trad_trace_naive(&spec, FqElem(t), 1).unwrap());
        }
        assert_eq!(
            trad_trace_conv_at(&spec, FqElem(5), 1).unwrap(),
            table.get(5).unwrap().clone()
        );
    }

    #[test]
    fn det_rank_one() {
        let spec = HyperSpec::from_pairs(7, 3, vec![2], vec![2]).unwrap();
        let f = spec.base_field().unwrap();
        let d = det_trad(&spec, FqElem(3)).unwrap();
        assert_eq!(d, chars::kummer_trace(&f, 3, 2, FqElem(3), chars::KummerFlavor::X).unwrap());
        assert_eq!(det_via_newton(&spec, FqElem(3)).unwrap(), d);
    }

    #[test]
    fn mellin_rank_one() {
        let spec = HyperSpec::from_pairs(13, 4, vec![1], vec![3]).unwrap();
        let exact = trad_trace_conv(&spec, 1).unwrap();
        let fast = mellin_fast(&spec).unwrap();
        for (t, v) in &exact.values {
            assert!((fast.values[t] - v.embed_complex(1)).norm() < 1e-9);
        }
    }
}
