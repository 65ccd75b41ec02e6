//! The Dwork family `Σ X_i^N = N t ∏ X_i` over `F_q`: point counts,
//! equivariant fixed-point counts at `N = 3`, and the eigenspace traces
//! `T_v(t) = Tr(Frob | Prim_{[v],t})` as stratified character sums.
//!
//! The torus stratum sums over `u ∈ (F_q^×)^{N−1}` (with `u_N = 1`,
//! `s = Σ u_i ≠ 0`, `s^N = (Nt)^N ∏ u_i`) and is evaluated by a histogram
//! over `(Σu, log ∏u, Σ v_i log u_i)`, then keyed by `s^N/∏u`, so that every
//! `t` costs a single lookup. Boundary strata are `t`-independent.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::cyclo::CycloElem;
use crate::error::{Error, Result};
use crate::ff::{FqElem, FqField};
use crate::weights::{self, WeightVector};

/// Enumeration budget for brute-force point counts.
pub const COUNT_BUDGET: f64 = 1e10;
/// Budget for the eigentrace histogram, in table updates.
pub const TRACE_BUDGET: f64 = 1e10;

#[derive(Clone, Debug)]
pub struct DworkFiber {
    pub field: FqField,
    pub n_mod: u32,
    pub t: FqElem,
}

impl DworkFiber {
    pub fn new(q: u32, n_mod: u32, t: u32) -> Result<Self> {
        if n_mod < 3 {
            return Err(Error::UnsupportedN(n_mod));
        }
        let field = FqField::new(q, 1)?;
        if (q - 1) % n_mod != 0 {
            return Err(Error::BadN {
                n: n_mod,
                q_minus_one: q - 1,
            });
        }
        if t >= q {
            return Err(Error::BadT(format!("{t} is not an element of F_{q}")));
        }
        Ok(DworkFiber {
            field,
            n_mod,
            t: FqElem(t),
        })
    }

    /// `t^N ≠ 1`.
    pub fn is_smooth(&self) -> bool {
        self.field.pow(self.t, self.n_mod as u64) != self.field.one()
    }
}

/// `(ζ_1, …, ζ_N)` with `∏ ζ_i = 1`, as exponents of `ω = g^{(q−1)/N}`,
/// normalised modulo the diagonal so that the first exponent is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    n_mod: u32,
    exps: Vec<u32>,
}

impl GroupElement {
    pub fn new(n_mod: u32, exps: &[i64]) -> Result<Self> {
        if exps.len() != n_mod as usize {
            return Err(Error::BadParams("group element needs N exponents".into()));
        }
        let n = n_mod as i64;
        if exps.iter().sum::<i64>().rem_euclid(n) != 0 {
            return Err(Error::BadParams("group element exponents must sum to 0".into()));
        }
        let e0 = exps[0];
        Ok(GroupElement {
            n_mod,
            exps: exps.iter().map(|&e| (e - e0).rem_euclid(n) as u32).collect(),
        })
    }

    pub fn identity(n_mod: u32) -> Self {
        GroupElement {
            n_mod,
            exps: vec![0; n_mod as usize],
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// All `N^{N−2}` elements of `Γ_W/Δ`.
    pub fn all(n_mod: u32) -> Vec<Self> {
        let n = n_mod as usize;
        let free = n.saturating_sub(2);
        let total = (n_mod as usize).pow(free as u32);
        (0..total)
            .map(|mut idx| {
                let mut e = vec![0i64; n];
                for slot in e.iter_mut().skip(1).take(free) {
                    *slot = (idx % n) as i64;
                    idx /= n;
                }
                let s: i64 = e.iter().sum();
                e[n - 1] = (-s).rem_euclid(n_mod as i64);
                GroupElement::new(n_mod, &e).unwrap()
            })
            .collect()
    }

    /// The character value `v(g) = ζ_N^{Σ v_i e_i}` as an exponent.
    pub fn pair(&self, v: &WeightVector) -> u32 {
        let s: u64 = self
            .exps
            .iter()
            .zip(v.entries())
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum();
        (s % self.n_mod as u64) as u32
    }
}

fn dwork_lhs_rhs(field: &FqField, n: u32, nt: FqElem, xs: &[FqElem]) -> bool {
    let mut s = field.zero();
    let mut p = field.one();
    for &x in xs {
        s = field.add(s, field.pow(x, n as u64));
        p = field.mul(p, x);
    }
    s == field.mul(nt, p)
}

/// `#Y_t(F_{q^m})`, each projective point counted once via the standard charts.
pub fn count_points(fiber: &DworkFiber, m: u32) -> Result<u64> {
    let q = fiber.field.order();
    let n = fiber.n_mod;
    let cost = (q as f64).powi((m * (n - 1)) as i32);
    if cost > COUNT_BUDGET {
        return Err(Error::Infeasible {
            cost,
            budget: COUNT_BUDGET,
        });
    }
    let ext = FqField::new(q, m)?;
    let qe = ext.order();
    let nt = ext.mul(ext.from_int(n as i64), fiber.t);
    let pow_n: Vec<FqElem> = ext.enumerate().map(|x| ext.pow(x, n as u64)).collect();
    let mut total = 0u64;
    // Chart i: X_0..X_{i−1} = 0, X_i = 1, the rest free.
    for lead in 0..n as usize {
        let free = n as usize - 1 - lead;
        if lead > 0 {
            // Product vanishes; count Σ_{j>i} X_j^N = −1.
            total += count_power_sum(&ext, &pow_n, free, ext.from_int(-1));
            continue;
        }
        if free == 0 {
            continue;
        }
        total += (0..qe)
            .into_par_iter()
            .map(|x1| {
                let x1 = FqElem(x1);
                let mut cnt = 0u64;
                let mut xs = vec![ext.zero(); free];
                xs[0] = x1;
                count_chart(&ext, &pow_n, nt, &mut xs, 1, &mut cnt);
                cnt
            })
            .sum::<u64>();
    }
    Ok(total)
}

fn count_chart(
    ext: &FqField,
    pow_n: &[FqElem],
    nt: FqElem,
    xs: &mut Vec<FqElem>,
    depth: usize,
    cnt: &mut u64,
) {
    if depth == xs.len() {
        // X_0 = 1.
        let mut s = ext.one();
        let mut p = ext.one();
        for &x in xs.iter() {
            s = ext.add(s, pow_n[x.0 as usize]);
            p = ext.mul(p, x);
        }
        if s == ext.mul(nt, p) {
            *cnt += 1;
        }
        return;
    }
    for x in 0..ext.order() {
        xs[depth] = FqElem(x);
        count_chart(ext, pow_n, nt, xs, depth + 1, cnt);
    }
}

/// `#{x ∈ F^k : Σ x_i^N = c}` by convolving value counts.
fn count_power_sum(ext: &FqField, pow_n: &[FqElem], k: usize, c: FqElem) -> u64 {
    let q = ext.order() as usize;
    let mut single = vec![0u64; q];
    for y in pow_n {
        single[y.0 as usize] += 1;
    }
    let mut dist = vec![0u64; q];
    dist[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; q];
        for (a, &ca) in dist.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in single.iter().enumerate() {
                if cb != 0 {
                    next[ext.add(FqElem(a as u32), FqElem(b as u32)).0 as usize] += ca * cb;
                }
            }
        }
        dist = next;
    }
    dist[c.0 as usize]
}

/// `#{x ∈ Y_t(F̄_q) : g·Frob_q(x) = x}` for `N = 3`, enumerating `P²(F_{q³})`.
pub fn fix_count_bruteforce(fiber: &DworkFiber, g: &GroupElement) -> Result<u64> {
    if fiber.n_mod != 3 {
        return Err(Error::UnsupportedN(fiber.n_mod));
    }
    let q = fiber.field.order();
    let ext = FqField::new(q, 3)?;
    let nt = ext.mul(ext.from_int(3), fiber.t);
    // ω = g_q^{(q−1)/3}, embedded through the prime subfield.
    let omega = FqElem(fiber.field.exp_of(((q - 1) / 3) as i64).0);
    let zeta: Vec<FqElem> = g.exps().iter().map(|&e| ext.pow(omega, e as u64)).collect();
    let qe = ext.order();
    let fixed = |xs: &[FqElem]| -> bool {
        let fr: Vec<FqElem> = xs
            .iter()
            .zip(&zeta)
            .map(|(&x, &z)| ext.mul(z, ext.pow(x, q as u64)))
            .collect();
        (0..3).all(|i| (i + 1..3).all(|j| ext.mul(fr[i], xs[j]) == ext.mul(fr[j], xs[i])))
    };
    let mut total = 0u64;
    let (zero, one) = (ext.zero(), ext.one());
    // Charts (1, y, z), (0, 1, z), (0, 0, 1).
    total += (0..qe)
        .into_par_iter()
        .map(|y| {
            let mut c = 0u64;
            for z in 0..qe {
                let xs = [one, FqElem(y), FqElem(z)];
                if dwork_lhs_rhs(&ext, 3, nt, &xs) && fixed(&xs) {
                    c += 1;
                }
            }
            c
        })
        .sum::<u64>();
    for z in 0..qe {
        let xs = [zero, one, FqElem(z)];
        if dwork_lhs_rhs(&ext, 3, nt, &xs) && fixed(&xs) {
            total += 1;
        }
    }
    let xs = [zero, zero, one];
    if dwork_lhs_rhs(&ext, 3, nt, &xs) && fixed(&xs) {
        total += 1;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumValue {
    pub z: Vec<usize>,
    pub value: CycloElem,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenTrace {
    pub q: u32,
    pub n_mod: u32,
    pub t: u32,
    pub v: Vec<u32>,
    pub value: CycloElem,
    pub torus: CycloElem,
    pub strata: Vec<StratumValue>,
    /// `1 + q + … + q^{N−2}` for the trivial label, else 0.
    pub trivial_term: u64,
}

/// Test hooks that deliberately break the engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct EngineOptions {
    /// `(i, δ)`: use `v_i + δ` in place of `v_i` inside every stratum sum
    /// (torus included), while strata are still selected by the true `v`.
    pub corrupt_weight: Option<(usize, i64)>,
}

/// Precomputed `t`-independent data for one label `v` over one field.
pub struct EigentraceEngine {
    field: FqField,
    n_mod: u32,
    v: WeightVector,
    /// `torus[w][e]`: count of admissible `u` with `s^N/∏u = w`, weight `e`.
    torus: Vec<Vec<i64>>,
    strata: Vec<StratumValue>,
    strata_total: CycloElem,
    trivial_term: u64,
}

impl EigentraceEngine {
    pub fn new(q: u32, v: &WeightVector) -> Result<Self> {
        Self::with_options(q, v, EngineOptions::default())
    }

    pub fn with_options(q: u32, v: &WeightVector, opts: EngineOptions) -> Result<Self> {
        let n = v.modulus();
        let field = FqField::new(q, 1)?;
        if (q - 1) % n != 0 {
            return Err(Error::BadN {
                n,
                q_minus_one: q - 1,
            });
        }
        let cost = (n as f64) * (q as f64).powi(3) * n as f64;
        if cost > TRACE_BUDGET {
            return Err(Error::Infeasible {
                cost,
                budget: TRACE_BUDGET,
            });
        }
        let mut w = v.entries().to_vec();
        if let Some((i, d)) = opts.corrupt_weight {
            w[i] = arith::rem(w[i] as i64 + d, n as u64) as u32;
        }
        let torus = torus_histogram(&field, &w);
        let mut strata = Vec::new();
        let mut strata_total = CycloElem::zero(n);
        for (z, a) in boundary_strata(v) {
            let value = stratum_sum(&field, &w, &z, a, z[0]);
            strata_total = &strata_total + &value;
            strata.push(StratumValue { z, value });
        }
        let trivial_term = if v.is_trivial_class() {
            (0..n - 1).map(|j| (q as u64).pow(j)).sum()
        } else {
            0
        };
        Ok(EigentraceEngine {
            field,
            n_mod: n,
            v: v.clone(),
            torus,
            strata,
            strata_total,
            trivial_term,
        })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn trace_at(&self, t: u32) -> Result<EigenTrace> {
        let f = &self.field;
        let q = f.order();
        if t == 0 || t >= q {
            return Err(Error::BadT(format!("t = {t} must be a nonzero element of F_{q}")));
        }
        let tt = FqElem(t);
        if f.pow(tt, self.n_mod as u64) == f.one() {
            return Err(Error::BadT(format!("t = {t} has t^N = 1 (singular fiber)")));
        }
        let c0 = f.pow(f.mul(f.from_int(self.n_mod as i64), tt), self.n_mod as u64);
        let hist: Vec<i64> = self.torus[c0.0 as usize].iter().map(|&c| -c).collect();
        let torus = CycloElem::from_root_counts(self.n_mod, &hist);
        let value = &(&torus + &self.strata_total)
            + &CycloElem::from_int(self.n_mod, self.trivial_term as i64);
        Ok(EigenTrace {
            q,
            n_mod: self.n_mod,
            t,
            v: self.v.entries().to_vec(),
            value,
            torus,
            strata: self.strata.clone(),
            trivial_term: self.trivial_term,
        })
    }

    /// Traces at every smooth `t ∈ F_q^×`.
    pub fn trace_all(&self) -> Vec<EigenTrace> {
        let q = self.field.order();
        (1..q).filter_map(|t| self.trace_at(t).ok()).collect()
    }
}

/// `hist[w][e]` over `u_1..u_{N−1} ∈ F_q^×` with `u_N = 1`, `s ≠ 0`,
/// `w = s^N / ∏u`, `e = Σ v_i log u_i`.
fn torus_histogram(field: &FqField, w: &[u32]) -> Vec<Vec<i64>> {
    let q = field.order() as usize;
    let l = q - 1;
    let n = w.len();
    // state index: (S, P, e) → (S·l + P)·n + e
    let idx = |s: usize, p: usize, e: usize| (s * l + p) * n + e;
    let mut st = vec![0i64; q * l * n];
    st[idx(1, 0, 0)] = 1;
    for &wi in &w[..n - 2] {
        let wi = wi as usize;
        st = (0..q)
            .into_par_iter()
            .map(|s_new| {
                // Pull form: predecessor S = s_new − u.
                let mut out = vec![0i64; l * n];
                for d in 0..l {
                    let u = field.exp_of(d as i64);
                    let s_old = field.sub(FqElem(s_new as u32), u).0 as usize;
                    for p in 0..l {
                        let base = idx(s_old, p, 0);
                        let np = (p + d) % l;
                        let shift = wi * d % n;
                        for e in 0..n {
                            let c = st[base + e];
                            if c != 0 {
                                out[np * n + (e + shift) % n] += c;
                            }
                        }
                    }
                }
                out
            })
            .flatten()
            .collect();
    }
    // Last free coordinate u_{N−1}, then key by s^N/∏u.
    let wl = w[n - 2] as usize;
    let nn = n as u64;
    let partial: Vec<Vec<i64>> = (0..q)
        .into_par_iter()
        .map(|s_old| {
            let mut out = vec![0i64; q * n];
            for p in 0..l {
                let base = idx(s_old, p, 0);
                if st[base..base + n].iter().all(|&c| c == 0) {
                    continue;
                }
                for d in 0..l {
                    let u = field.exp_of(d as i64);
                    let s = field.add(FqElem(s_old as u32), u);
                    if s.0 == 0 {
                        continue;
                    }
                    let prod = field.exp_of(((p + d) % l) as i64);
                    let key = field.mul(field.pow(s, nn), field.inv(prod).unwrap()).0 as usize;
                    let shift = wl * d % n;
                    for e in 0..n {
                        let c = st[base + e];
                        if c != 0 {
                            out[key * n + (e + shift) % n] += c;
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut flat = vec![0i64; q * n];
    for part in partial {
        for (a, b) in flat.iter_mut().zip(part) {
            *a += b;
        }
    }
    flat.chunks(n).map(|c| c.to_vec()).collect()
}

/// Subsets `Z`, `2 ≤ |Z| ≤ N−1`, with `v` constant (value `a`) off `Z`.
pub fn boundary_strata(v: &WeightVector) -> Vec<(Vec<usize>, u32)> {
    let w = v.entries();
    let n = w.len();
    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &x) in w.iter().enumerate() {
        classes.entry(x).or_default().push(i);
    }
    let mut out = Vec::new();
    for (&a, idxs) in &classes {
        let c = idxs.len();
        for mask in 1u64..(1 << c) {
            let comp: Vec<usize> = (0..c).filter(|b| mask >> b & 1 == 1).map(|b| idxs[b]).collect();
            let zs = n - comp.len();
            if !(2..n).contains(&zs) {
                continue;
            }
            let z: Vec<usize> = (0..n).filter(|i| !comp.contains(i)).collect();
            out.push((z, a));
        }
    }
    out.sort();
    out
}

/// `T_Z = −Σ_{u ∈ (F_q^×)^Z, u_{i0} = 1, Σu = 0} ∏ teich(u_i)^{v_i − a}`.
pub fn stratum_value(field: &FqField, v: &WeightVector, z: &[usize], a: u32, i0: usize) -> CycloElem {
    stratum_sum(field, v.entries(), z, a, i0)
}

fn stratum_sum(field: &FqField, w: &[u32], z: &[usize], a: u32, i0: usize) -> CycloElem {
    let q = field.order() as usize;
    let l = q - 1;
    let n = w.len();
    let mut st = vec![0i64; q * n];
    st[n] = 1; // S = 1 (u_{i0} = 1), e = 0
    for &i in z.iter().filter(|&&i| i != i0) {
        let wi = arith::rem(w[i] as i64 - a as i64, n as u64) as usize;
        let mut next = vec![0i64; q * n];
        for s in 0..q {
            for e in 0..n {
                let c = st[s * n + e];
                if c == 0 {
                    continue;
                }
                for d in 0..l {
                    let u = field.exp_of(d as i64);
                    let s2 = field.add(FqElem(s as u32), u).0 as usize;
                    next[s2 * n + (e + wi * d) % n] += c;
                }
            }
        }
        st = next;
    }
    let hist: Vec<i64> = st[..n].iter().map(|&c| -c).collect();
    CycloElem::from_root_counts(n as u32, &hist)
}

/// One-shot evaluation of `T_v(t)`.
pub fn eigentrace_charsum(v: &WeightVector, fiber: &DworkFiber) -> Result<EigenTrace> {
    if v.modulus() != fiber.n_mod {
        return Err(Error::BadParams("label and fiber have different N".into()));
    }
    EigentraceEngine::new(fiber.field.order(), v)?.trace_at(fiber.t.0)
}

/// `|σ(T)| ≤ rank · q^{(N−2)/2}` at every complex embedding.
pub fn weil_check(trace: &EigenTrace, tol: f64) -> bool {
    let v = WeightVector::new(
        trace.n_mod,
        &trace.v.iter().map(|&x| x as i64).collect::<Vec<_>>(),
    )
    .expect("stored label is valid");
    let rank = weights::rank_of(&v) as f64;
    let bound = rank * rank * (trace.q as f64).powi(trace.n_mod as i32 - 2);
    trace
        .value
        .abs2_all_embeddings()
        .into_iter()
        .all(|a| a <= bound * (1.0 + tol) + tol)
}

/// `T_{[−v]}(t) = conj(T_{[v]}(t))`, and `T_{[−v]} = T_{[v]}` when `−v` is a
/// permutation of a translate of `v`.
pub fn duality_check(v: &WeightVector, fiber: &DworkFiber) -> Result<bool> {
    let tv = eigentrace_charsum(v, fiber)?.value;
    let tn = eigentrace_charsum(&v.neg(), fiber)?.value;
    let conj_ok = tn == tv.conjugate();
    let perm_ok = !weights::is_self_dual(v) || tn == tv;
    Ok(conj_ok && perm_ok)
}
