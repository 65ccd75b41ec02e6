//! Signs of (conjugate) self-dual pairings over `F_l`.
//!
//! Pairings are `⟨v, w⟩ = vᵀ P w`. A representation is given by the images of
//! generators; `c` is the image of the distinguished involution, and `j_c` is
//! conjugation by it.

use crate::arith;
use crate::error::{Error, Result};
use rand::Rng;
use serde::Serialize;

/// Square matrix over `F_l`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FpMatrix {
    l: u32,
    n: usize,
    a: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(l: u32, n: usize) -> Self {
        Self { l, n, a: vec![0; n * n] }
    }

    pub fn identity(l: u32, n: usize) -> Self {
        Self::scalar(l, n, 1)
    }

    pub fn scalar(l: u32, n: usize, s: u32) -> Self {
        let mut m = Self::zero(l, n);
        for i in 0..n {
            m.a[i * n + i] = s % l;
        }
        m
    }

    pub fn from_rows(l: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadParams("matrix must be square".into()));
        }
        let a = rows.iter().flatten().map(|&x| arith::rem(x, l as u64) as u32).collect();
        Ok(Self { l, n, a })
    }

    pub fn random(l: u32, n: usize, rng: &mut impl Rng) -> Self {
        Self { l, n, a: (0..n * n).map(|_| rng.gen_range(0..l)).collect() }
    }

    pub fn random_invertible(l: u32, n: usize, rng: &mut impl Rng) -> Self {
        loop {
            let m = Self::random(l, n, rng);
            if m.det() != 0 {
                return m;
            }
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[FpMatrix]) -> Self {
        let l = blocks[0].l;
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zero(l, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.a[i * self.n + j] = x % self.l;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.l, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[j * self.n + i] = self.get(i, j);
            }
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (n, l) = (self.n, self.l as u64);
        let mut m = Self::zero(self.l, n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k) as u64;
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let c = &mut m.a[i * n + j];
                    *c = ((*c as u64 + x * o.get(k, j) as u64) % l) as u32;
                }
            }
        }
        m
    }

    pub fn scale(&self, s: u32) -> Self {
        let l = self.l as u64;
        Self {
            l: self.l,
            n: self.n,
            a: self.a.iter().map(|&x| (x as u64 * s as u64 % l) as u32).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.l - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    /// Gaussian elimination; returns `(det, inverse)`.
    fn eliminate(&self) -> (u32, Option<Self>) {
        let (n, l) = (self.n, self.l as u64);
        let mut m = self.a.iter().map(|&x| x as u64).collect::<Vec<_>>();
        let mut inv = Self::identity(self.l, n).a.iter().map(|&x| x as u64).collect::<Vec<_>>();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return (0, None);
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
                det = (l - det) % l;
            }
            let p = m[col * n + col];
            det = det * p % l;
            let pinv = arith::inv_mod(p, l);
            for j in 0..n {
                m[col * n + j] = m[col * n + j] * pinv % l;
                inv[col * n + j] = inv[col * n + j] * pinv % l;
            }
            for r in 0..n {
                let f = m[r * n + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    m[r * n + j] = (m[r * n + j] + (l - f) * m[col * n + j]) % l;
                    inv[r * n + j] = (inv[r * n + j] + (l - f) * inv[col * n + j]) % l;
                }
            }
        }
        let a = inv.into_iter().map(|x| x as u32).collect();
        (det as u32, Some(Self { l: self.l, n, a }))
    }

    pub fn det(&self) -> u32 {
        self.eliminate().0
    }

    pub fn inverse(&self) -> Result<Self> {
        self.eliminate().1.ok_or(Error::DivisionByZero)
    }

    /// `s` with `Mᵀ P M = s·P`, if any.
    pub fn similitude_factor(&self, p: &FpMatrix) -> Option<u32> {
        scalar_ratio(&self.transpose().mul(p).mul(self), p)
    }
}

/// `s` with `a = s·b`, for nonzero `b`.
fn scalar_ratio(a: &FpMatrix, b: &FpMatrix) -> Option<u32> {
    let (i, &bx) = b.a.iter().enumerate().find(|(_, &x)| x != 0)?;
    let s = (a.a[i] as u64 * arith::inv_mod(bx as u64, b.l as u64) % b.l as u64) as u32;
    (b.scale(s) == *a).then_some(s)
}

/// `+1` for symmetric, `−1` for antisymmetric.
pub fn symmetry_type(p: &FpMatrix) -> Result<i32> {
    let t = p.transpose();
    if t == *p {
        Ok(1)
    } else if t == p.neg() {
        Ok(-1)
    } else {
        Err(Error::NotSignDefinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// `⟨|r(σ)v, r(σ)w|⟩ = χ(σ)⟨|v, w|⟩`
    SelfDual,
    /// `⟨r(σ)v, r(cσc⁻¹)w⟩ = χ(σ)⟨v, w⟩`
    ConjugateSelfDual,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairedRep {
    pub l: u32,
    pub gens: Vec<FpMatrix>,
    /// Image of the distinguished involution.
    pub c: FpMatrix,
    /// Similitude character on `gens`.
    pub chi: Vec<u32>,
    pub chi_c: u32,
    pub pairing: FpMatrix,
    pub flavor: Flavor,
}

impl PairedRep {
    pub fn dim(&self) -> usize {
        self.pairing.dim()
    }

    /// `j_c(σ) = c σ c⁻¹`.
    pub fn conj_by_c(&self, g: &FpMatrix) -> Result<FpMatrix> {
        Ok(self.c.mul(g).mul(&self.c.inverse()?))
    }

    /// Checks the equivariance of the flavor on all generators and on `c`.
    pub fn is_equivariant(&self) -> bool {
        let p = &self.pairing;
        let all = self.gens.iter().zip(&self.chi).chain(std::iter::once((&self.c, &self.chi_c)));
        for (g, &x) in all {
            let lhs = match self.flavor {
                Flavor::SelfDual => g.transpose().mul(p).mul(g),
                Flavor::ConjugateSelfDual => match self.conj_by_c(g) {
                    Ok(h) => g.transpose().mul(p).mul(&h),
                    Err(_) => return false,
                },
            };
            if lhs != p.scale(x) {
                return false;
            }
        }
        true
    }

    /// `χ(c)` as `±1`.
    pub fn chi_c_sign(&self) -> Result<i32> {
        match self.chi_c {
            1 => Ok(1),
            x if x == self.l - 1 => Ok(-1),
            _ => Err(Error::BadParams("χ(c) must be ±1".into())),
        }
    }
}

fn require(rep: &PairedRep, f: Flavor) -> Result<()> {
    if rep.flavor != f {
        return Err(Error::BadParams(format!("expected a {f:?} pairing")));
    }
    if !rep.is_equivariant() {
        return Err(Error::BadParams("pairing is not equivariant".into()));
    }
    Ok(())
}

pub fn sd_sign(rep: &PairedRep) -> Result<i32> {
    require(rep, Flavor::SelfDual)?;
    symmetry_type(&rep.pairing)
}

pub fn cj_sign(rep: &PairedRep) -> Result<i32> {
    require(rep, Flavor::ConjugateSelfDual)?;
    symmetry_type(&rep.pairing)
}

fn require_involution(rep: &PairedRep) -> Result<()> {
    if rep.c.mul(&rep.c) != FpMatrix::identity(rep.l, rep.dim()) {
        return Err(Error::BadParams("r(c) must be an involution".into()));
    }
    rep.chi_c_sign().map(|_| ())
}

/// `⟨v, w⟩ = ⟨|v, r(c)w|⟩`, i.e. `P' = P·r(c)`.
pub fn convert_pairing(rep: &PairedRep) -> Result<PairedRep> {
    require(rep, Flavor::SelfDual)?;
    require_involution(rep)?;
    Ok(PairedRep {
        pairing: rep.pairing.mul(&rep.c),
        flavor: Flavor::ConjugateSelfDual,
        ..rep.clone()
    })
}

/// Inverse of [`convert_pairing`]: `P = P'·r(c)⁻¹`.
pub fn unconvert_pairing(rep: &PairedRep) -> Result<PairedRep> {
    require(rep, Flavor::ConjugateSelfDual)?;
    require_involution(rep)?;
    Ok(PairedRep {
        pairing: rep.pairing.mul(&rep.c.inverse()?),
        flavor: Flavor::SelfDual,
        ..rep.clone()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum DetClass {
    Square { det: u32, witness: u32 },
    Nonsquare { det: u32 },
}

/// `det P` modulo squares.
pub fn pairing_det_class(p: &FpMatrix) -> Result<DetClass> {
    let l = p.modulus() as u64;
    let det = p.det();
    if det == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(match sqrt_mod(det as u64, l) {
        Some(r) => DetClass::Square { det, witness: r as u32 },
        None => DetClass::Nonsquare { det },
    })
}

/// Tonelli–Shanks; `None` when `a` is a nonsquare mod the odd prime `p`.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if arith::pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| arith::pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = arith::pow_mod(z, q, p);
    let mut t = arith::pow_mod(a, q, p);
    let mut r = arith::pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = arith::pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

/// The standard symplectic form on `F_l²`.
pub fn det_pairing(l: u32) -> FpMatrix {
    FpMatrix::from_rows(l, &[vec![0, 1], vec![-1, 0]]).unwrap()
}

/// Random SD-flavored example of even dimension, built from a standard form
/// (hyperbolic or symplectic planes) by a random change of basis. The sign,
/// `χ(c)` and the extra generators are all chosen at random.
pub fn random_admissible(l: u32, dim: usize, n_gens: usize, rng: &mut impl Rng) -> Result<PairedRep> {
    if dim == 0 || dim % 2 == 1 || l < 5 || !arith::is_prime(l as u64) {
        return Err(Error::BadParams(format!(
            "need even dim ≥ 2 and prime l ≥ 5 (got dim={dim}, l={l})"
        )));
    }
    let k = dim / 2;
    let symmetric = rng.gen_bool(0.5);
    let flip = rng.gen_bool(0.5);
    let plane = if symmetric {
        FpMatrix::from_rows(l, &[vec![0, 1], vec![1, 0]])?
    } else {
        det_pairing(l)
    };
    let p0 = FpMatrix::direct_sum(&vec![plane; k]);
    // diag(1,−1) anti-preserves either plane; ±I or the swap preserves it.
    let c_plane = |rng: &mut dyn rand::RngCore| -> Result<FpMatrix> {
        if flip {
            FpMatrix::from_rows(l, &[vec![1, 0], vec![0, -1]])
        } else if symmetric && rng.gen_bool(0.5) {
            FpMatrix::from_rows(l, &[vec![0, 1], vec![1, 0]])
        } else {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            FpMatrix::from_rows(l, &[vec![s, 0], vec![0, s]])
        }
    };
    let c0 = FpMatrix::direct_sum(&(0..k).map(|_| c_plane(rng)).collect::<Result<Vec<_>>>()?);
    let mut gens0 = Vec::new();
    for _ in 0..n_gens {
        let lam = rng.gen_range(1..l);
        let blocks = (0..k)
            .map(|_| {
                if symmetric {
                    // diag(a, λ/a), optionally composed with the swap.
                    let a = rng.gen_range(1..l) as u64;
                    let b = lam as u64 * arith::inv_mod(a, l as u64) % l as u64;
                    let mut m = FpMatrix::zero(l, 2);
                    if rng.gen_bool(0.5) {
                        m.set(0, 1, a as u32);
                        m.set(1, 0, b as u32);
                    } else {
                        m.set(0, 0, a as u32);
                        m.set(1, 1, b as u32);
                    }
                    m
                } else {
                    // Any 2×2 block of determinant λ: rescale the first row.
                    let mut m = FpMatrix::random_invertible(l, 2, rng);
                    let s = lam as u64 * arith::inv_mod(m.det() as u64, l as u64) % l as u64;
                    for j in 0..2 {
                        m.set(0, j, (m.get(0, j) as u64 * s % l as u64) as u32);
                    }
                    m
                }
            })
            .collect::<Vec<_>>();
        gens0.push(FpMatrix::direct_sum(&blocks));
    }
    let a = FpMatrix::random_invertible(l, dim, rng);
    let ainv = a.inverse()?;
    let conj = |m: &FpMatrix| a.mul(m).mul(&ainv);
    let pairing = ainv.transpose().mul(&p0).mul(&ainv);
    let c = conj(&c0);
    let gens: Vec<FpMatrix> = gens0.iter().map(conj).collect();
    let chi = gens
        .iter()
        .map(|g| g.similitude_factor(&pairing).ok_or(Error::NotSignDefinite))
        .collect::<Result<Vec<_>>>()?;
    let chi_c = c.similitude_factor(&pairing).ok_or(Error::NotSignDefinite)?;
    Ok(PairedRep { l, gens, c, chi, chi_c, pairing, flavor: Flavor::SelfDual })
}

/// The dimension-2 example with the determinant pairing, `χ = det` and `c`
/// of determinant `det_c`.
pub fn det_pairing_example(l: u32, det_c: i64, rng: &mut impl Rng) -> Result<PairedRep> {
    let p = det_pairing(l);
    let c0 = if arith::rem(det_c, l as u64) == 1 {
        FpMatrix::identity(l, 2).neg()
    } else {
        FpMatrix::from_rows(l, &[vec![1, 0], vec![0, -1]])?
    };
    // Any change of basis preserves the determinant pairing up to a scalar.
    let a = FpMatrix::random_invertible(l, 2, rng);
    let c = a.mul(&c0).mul(&a.inverse()?);
    let gens: Vec<FpMatrix> = (0..3).map(|_| FpMatrix::random_invertible(l, 2, rng)).collect();
    let chi = gens.iter().map(|g| g.det()).collect();
    Ok(PairedRep { l, chi_c: c.det(), gens, c, chi, pairing: p, flavor: Flavor::SelfDual })
}

#[derive(Clone, Debug, Serialize)]
pub struct SignRecord {
    pub sd_sign: i32,
    pub chi_c: i32,
    pub cj_sign: i32,
    pub identity_holds: bool,
    pub roundtrip: bool,
    pub det_class: DetClass,
}

/// Runs the full pipeline on one SD-flavored example.
pub fn check_example(rep: &PairedRep) -> Result<SignRecord> {
    let sd = sd_sign(rep)?;
    let chi_c = rep.chi_c_sign()?;
    let cj_rep = convert_pairing(rep)?;
    let cj = cj_sign(&cj_rep)?;
    let back = unconvert_pairing(&cj_rep)?;
    Ok(SignRecord {
        sd_sign: sd,
        chi_c,
        cj_sign: cj,
        identity_holds: cj == sd * chi_c,
        roundtrip: back.pairing == rep.pairing,
        det_class: pairing_det_class(&rep.pairing)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SignCampaign {
    pub l: u32,
    pub dim: usize,
    pub seed: u64,
    pub count: usize,
    pub pass: bool,
    pub det_pairing_sd_sign: i32,
    pub records: Vec<SignRecord>,
}

pub fn run_sign_check(l: u32, dim: usize, seed: u64, count: usize) -> Result<SignCampaign> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        let rep = random_admissible(l, dim, 2, &mut rng)?;
        records.push(check_example(&rep)?);
    }
    let det_ex = det_pairing_example(l, -1, &mut rng)?;
    let det_sd = sd_sign(&det_ex)?;
    let pass = det_sd == -1 && records.iter().all(|r| r.identity_holds && r.roundtrip);
    Ok(SignCampaign { l, dim, seed, count, pass, det_pairing_sd_sign: det_sd, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_inverse_and_det() {
        let m = FpMatrix::from_rows(7, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.det(), 5); // −2 mod 7
        assert_eq!(m.mul(&m.inverse().unwrap()), FpMatrix::identity(7, 2));
    }

    #[test]
    fn det_pairing_is_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for l in [5, 7, 13] {
            let rep = det_pairing_example(l, -1, &mut rng).unwrap();
            assert_eq!(sd_sign(&rep).unwrap(), -1);
        }
    }

    #[test]
    fn det_pairing_cj_sign_tracks_det_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let plus = det_pairing_example(13, -1, &mut rng).unwrap();
        assert_eq!(cj_sign(&convert_pairing(&plus).unwrap()).unwrap(), 1);
        let minus = det_pairing_example(13, 1, &mut rng).unwrap();
        assert_eq!(cj_sign(&convert_pairing(&minus).unwrap()).unwrap(), -1);
    }

    #[test]
    fn identity_pairing() {
        let rep = PairedRep {
            l: 5,
            gens: vec![],
            c: FpMatrix::identity(5, 3),
            chi: vec![],
            chi_c: 1,
            pairing: FpMatrix::identity(5, 3),
            flavor: Flavor::SelfDual,
        };
        assert_eq!(sd_sign(&rep).unwrap(), 1);
        assert!(matches!(pairing_det_class(&rep.pairing).unwrap(), DetClass::Square { .. }));
    }

    #[test]
    fn det_classes() {
        assert!(matches!(
            pairing_det_class(&det_pairing(13)).unwrap(),
            DetClass::Square { det: 1, .. }
        ));
        // 2 is a nonsquare mod 5 and mod 13.
        for l in [5u32, 13] {
            let p = FpMatrix::from_rows(l, &[vec![1, 0], vec![0, 2]]).unwrap();
            assert_eq!(pairing_det_class(&p).unwrap(), DetClass::Nonsquare { det: 2 });
        }
    }

    #[test]
    fn tonelli_shanks() {
        for p in [5u64, 13, 17, 41, 97] {
            for a in 1..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert_eq!(arith::pow_mod(a, (p - 1) / 2, p), p - 1),
                }
            }
        }
    }

    #[test]
    fn neither_symmetric_nor_antisymmetric() {
        let p = FpMatrix::from_rows(5, &[vec![1, 2], vec![0, 1]]).unwrap();
        assert_eq!(symmetry_type(&p), Err(Error::NotSignDefinite));
    }
}
