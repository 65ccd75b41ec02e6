//! Multiplicative and additive characters of `F_q`, Gauss and Jacobi sums,
//! Jacobi-sum grossencharacter values, Kummer traces and the Gauss-sum
//! normalisation `φ`.
//!
//! Conventions: `χ(0) = 0` for every multiplicative character (trivial one
//! included), `g(ψ, χ) = Σ_{x ≠ 0} ψ(x)χ(x)`, and a character of `μ_N` with
//! residue `a` is composed with `x ↦ x^{(q−1)/N}` so that the generator maps
//! to `ζ_N^a`.

use serde::Serialize;

use crate::arith;
use crate::cyclo::CycloElem;
use crate::error::{Error, Result};
use crate::ff::{FqElem, FqField};
use crate::weights::CharMultiset;

/// `χ(g^d) = ζ_{q−1}^{j·d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultChar {
    group_order: u32,
    exp: u32,
}

impl MultChar {
    pub fn new(field: &FqField, j: i64) -> Self {
        let g = field.order() - 1;
        MultChar {
            group_order: g,
            exp: arith::rem(j, g as u64) as u32,
        }
    }

    pub fn trivial(field: &FqField) -> Self {
        Self::new(field, 0)
    }

    /// Character of `μ_N` with residue `a`, composed with `x ↦ x^{(q−1)/N}`.
    pub fn of_mu_n(field: &FqField, n: u32, a: i64) -> Result<Self> {
        let g = field.order() - 1;
        check_n(field, n)?;
        Ok(Self::new(field, arith::rem(a, n as u64) as i64 * (g / n) as i64))
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn order(&self) -> u32 {
        self.group_order / arith::gcd(self.exp as u64, self.group_order as u64) as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.exp == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.group_order, other.group_order);
        MultChar {
            group_order: self.group_order,
            exp: ((self.exp as u64 + other.exp as u64) % self.group_order as u64) as u32,
        }
    }

    pub fn inverse(&self) -> Self {
        MultChar {
            group_order: self.group_order,
            exp: (self.group_order - self.exp) % self.group_order,
        }
    }

    /// `χ(x) = ζ_{ord}^e`; `None` at zero.
    pub fn root_exponent(&self, field: &FqField, x: FqElem) -> Option<u32> {
        let d = field.dlog(x)? as u64;
        let ord = self.order() as u64;
        let step = self.group_order as u64 / ord;
        Some((self.exp as u64 / step * d % ord) as u32)
    }

    pub fn eval(&self, field: &FqField, x: FqElem) -> CycloElem {
        let ord = self.order();
        match self.root_exponent(field, x) {
            Some(e) => CycloElem::root_of_unity(ord, e as i64),
            None => CycloElem::zero(ord),
        }
    }
}

/// `ψ_c(x) = ζ_p^{Tr(cx)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AddChar {
    pub c: FqElem,
}

impl AddChar {
    pub fn new(c: FqElem) -> Self {
        AddChar { c }
    }

    /// `ψ_1`.
    pub fn standard() -> Self {
        AddChar { c: FqElem(1) }
    }

    pub fn is_trivial(&self) -> bool {
        self.c.0 == 0
    }

    /// `ψ̄ = ψ_{−c}`.
    pub fn conj(&self, field: &FqField) -> Self {
        AddChar {
            c: field.neg(self.c),
        }
    }

    pub fn root_exponent(&self, field: &FqField, x: FqElem) -> u32 {
        field.trace_to_prime(field.mul(self.c, x))
    }

    pub fn eval(&self, field: &FqField, x: FqElem) -> CycloElem {
        let p = field.characteristic();
        CycloElem::root_of_unity(p, self.root_exponent(field, x) as i64)
    }
}

fn check_n(field: &FqField, n: u32) -> Result<()> {
    let g = field.order() - 1;
    if n == 0 || g % n != 0 {
        return Err(Error::BadN { n, q_minus_one: g });
    }
    Ok(())
}

/// Image of `u^{(q−1)/N}` in `μ_N ⊂ Q(ζ_N)`: `ζ_N^{dlog u}`.
pub fn teich(field: &FqField, u: FqElem, n: u32) -> Result<CycloElem> {
    check_n(field, n)?;
    let d = field.dlog(u).ok_or(Error::ZeroInput)?;
    Ok(CycloElem::root_of_unity(n, (d % n) as i64))
}

/// `g(ψ, χ) = Σ_{x ≠ 0} ψ(x)χ(x)`, in `Q(ζ_{lcm(ord χ, p)})`.
pub fn gauss_sum(field: &FqField, psi: &AddChar, chi: &MultChar) -> Result<CycloElem> {
    if psi.is_trivial() {
        return Err(Error::TrivialAdditive);
    }
    let p = field.characteristic() as u64;
    let ord = chi.order() as u64;
    let m = arith::lcm(p, ord);
    let mut hist = vec![0i64; m as usize];
    for x in field.enumerate_units() {
        let a = chi.root_exponent(field, x).unwrap() as u64 * (m / ord);
        let b = psi.root_exponent(field, x) as u64 * (m / p);
        hist[((a + b) % m) as usize] += 1;
    }
    Ok(CycloElem::from_root_counts(m as u32, &hist))
}

/// `J(a, b) = Σ_x a(x) b(1−x)` with `χ(0) = 0` throughout.
pub fn jacobi_sum(field: &FqField, a: &MultChar, b: &MultChar) -> CycloElem {
    let (oa, ob) = (a.order() as u64, b.order() as u64);
    let m = arith::lcm(oa, ob);
    let mut hist = vec![0i64; m as usize];
    let one = field.one();
    for x in field.enumerate_units() {
        if x == one {
            continue;
        }
        let y = field.sub(one, x);
        let ea = a.root_exponent(field, x).unwrap() as u64 * (m / oa);
        let eb = b.root_exponent(field, y).unwrap() as u64 * (m / ob);
        hist[((ea + eb) % m) as usize] += 1;
    }
    CycloElem::from_root_counts(m as u32, &hist)
}

/// `Λ_{χ,ρ/χ}(Frob) = −J(χ∘p, (ρ/χ)∘p)` for residues `chi`, `rho` mod `N`.
pub fn grossen_value(field: &FqField, n: u32, chi: i64, rho: i64) -> Result<CycloElem> {
    let a = MultChar::of_mu_n(field, n, chi)?;
    let b = MultChar::of_mu_n(field, n, rho - chi)?;
    Ok(-jacobi_sum(field, &a, &b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KummerFlavor {
    /// `L_{χ(x)}`
    X,
    /// `L_{χ(1−x)}`
    OneMinusX,
}

/// Trace of the Kummer sheaf at `t`, extended by zero.
pub fn kummer_trace(
    field: &FqField,
    n: u32,
    chi: i64,
    t: FqElem,
    flavor: KummerFlavor,
) -> Result<CycloElem> {
    check_n(field, n)?;
    let arg = match flavor {
        KummerFlavor::X => t,
        KummerFlavor::OneMinusX => field.sub(field.one(), t),
    };
    match field.dlog(arg) {
        None => Ok(CycloElem::zero(n)),
        Some(d) => Ok(CycloElem::root_of_unity(
            n,
            arith::rem(chi * d as i64, n as u64) as i64,
        )),
    }
}

/// `(∏_{χ}(−g(ψ,χ)) · ∏_{ρ}(−g(ψ̄,ρ̄)))^{ext_degree}`.
pub fn phi_value(
    field: &FqField,
    psi: &AddChar,
    s_chi: &CharMultiset,
    s_rho: &CharMultiset,
    ext_degree: u32,
) -> Result<CycloElem> {
    if s_chi.len() != s_rho.len() {
        return Err(Error::SizeMismatch {
            left: s_chi.len(),
            right: s_rho.len(),
        });
    }
    let n = s_chi.modulus();
    let psibar = psi.conj(field);
    let mut acc = CycloElem::one(1);
    for a in s_chi.elements() {
        let chi = MultChar::of_mu_n(field, n, a as i64)?;
        acc = &acc * &(-gauss_sum(field, psi, &chi)?);
    }
    for b in s_rho.elements() {
        let rho_bar = MultChar::of_mu_n(field, n, -(b as i64))?;
        acc = &acc * &(-gauss_sum(field, &psibar, &rho_bar)?);
    }
    acc.pow(ext_degree as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teich_examples() {
        let f = FqField::new(29, 1).unwrap();
        assert_eq!(teich(&f, f.one(), 7).unwrap(), CycloElem::one(7));
        let g = f.generator();
        assert_eq!(teich(&f, g, 7).unwrap(), CycloElem::root_of_unity(7, 1));
        assert_eq!(teich(&f, f.pow(g, 7), 7).unwrap(), CycloElem::one(7));
        assert_eq!(teich(&f, f.zero(), 7), Err(Error::ZeroInput));
        assert!(matches!(teich(&f, g, 5), Err(Error::BadN { .. })));
    }

    #[test]
    fn gauss_examples() {
        let f5 = FqField::new(5, 1).unwrap();
        let psi = AddChar::standard();
        let triv = MultChar::trivial(&f5);
        assert_eq!(gauss_sum(&f5, &psi, &triv).unwrap(), CycloElem::from_int(1, -1));
        let quad = MultChar::new(&f5, 2);
        let g = gauss_sum(&f5, &psi, &quad).unwrap();
        assert_eq!(&g * &g, CycloElem::from_int(1, 5));
        assert_eq!(
            gauss_sum(&f5, &AddChar::new(f5.zero()), &quad),
            Err(Error::TrivialAdditive)
        );
    }

    #[test]
    fn gauss_abs_embedding() {
        let f7 = FqField::new(7, 1).unwrap();
        for j in 1..6 {
            let g = gauss_sum(&f7, &AddChar::standard(), &MultChar::new(&f7, j)).unwrap();
            assert!((g.embed_complex(1).norm_sqr() - 7.0).abs() < 1e-9);
        }
    }

    #[test]
    fn jacobi_examples() {
        let f7 = FqField::new(7, 1).unwrap();
        let t = MultChar::trivial(&f7);
        assert_eq!(jacobi_sum(&f7, &t, &t), CycloElem::from_int(1, 5));
        assert_eq!(grossen_value(&f7, 3, 1, 1).unwrap(), CycloElem::one(1));
        let lam = grossen_value(&f7, 3, 1, 2).unwrap();
        assert_eq!(&lam * &lam.conjugate(), CycloElem::from_int(1, 7));
    }

    #[test]
    fn kummer_examples() {
        let f = FqField::new(29, 1).unwrap();
        let one = f.one();
        assert_eq!(kummer_trace(&f, 7, 3, one, KummerFlavor::X).unwrap(), CycloElem::one(7));
        assert!(kummer_trace(&f, 7, 3, one, KummerFlavor::OneMinusX).unwrap().is_zero());
        assert_eq!(
            kummer_trace(&f, 7, 1, f.generator(), KummerFlavor::X).unwrap(),
            CycloElem::root_of_unity(7, 1)
        );
    }

    #[test]
    fn phi_examples() {
        let f = FqField::new(29, 1).unwrap();
        let psi = AddChar::standard();
        let t = CharMultiset::from_residues(7, [0]);
        assert_eq!(phi_value(&f, &psi, &t, &t, 1).unwrap(), CycloElem::one(1));
        let sc = CharMultiset::from_residues(7, [1, 6]);
        let sr = CharMultiset::from_residues(7, [0, 0]);
        let phi = phi_value(&f, &psi, &sc, &sr, 1).unwrap();
        assert_eq!(&phi * &phi.conjugate(), CycloElem::from_int(1, 841));
        assert_eq!(
            phi_value(&f, &psi, &sc, &t, 1),
            Err(Error::SizeMismatch { left: 2, right: 1 })
        );
    }
}
