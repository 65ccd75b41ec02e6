//! Eigenspace labels `v ∈ (Z/N)^N` modulo `W = (1,…,1)`, character
//! multisets, `Cancel`, the rank recipe and self-duality.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct WeightVector {
    n_mod: u32,
    entries: Vec<u32>,
}

impl WeightVector {
    pub fn new(n_mod: u32, entries: &[i64]) -> Result<Self> {
        if n_mod == 0 || entries.len() != n_mod as usize {
            return Err(Error::BadParams(format!(
                "weight vector needs {n_mod} entries, got {}",
                entries.len()
            )));
        }
        let entries: Vec<u32> = entries
            .iter()
            .map(|&e| e.rem_euclid(n_mod as i64) as u32)
            .collect();
        let s: u64 = entries.iter().map(|&e| e as u64).sum();
        if s % n_mod as u64 != 0 {
            return Err(Error::BadParams(format!(
                "weights {entries:?} do not sum to 0 mod {n_mod}"
            )));
        }
        Ok(WeightVector { n_mod, entries })
    }

    pub fn modulus(&self) -> u32 {
        self.n_mod
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn neg(&self) -> Self {
        let n = self.n_mod;
        WeightVector {
            n_mod: n,
            entries: self.entries.iter().map(|&e| (n - e) % n).collect(),
        }
    }

    /// `v + c·W`.
    pub fn translate(&self, c: i64) -> Self {
        let n = self.n_mod as i64;
        WeightVector {
            n_mod: self.n_mod,
            entries: self
                .entries
                .iter()
                .map(|&e| (e as i64 + c).rem_euclid(n) as u32)
                .collect(),
        }
    }

    /// The label lies in `⟨W⟩`, i.e. is the trivial character.
    pub fn is_trivial_class(&self) -> bool {
        self.entries.iter().all(|&e| e == self.entries[0])
    }

    /// Entries as a multiset of residues.
    pub fn multiset(&self) -> CharMultiset {
        CharMultiset::from_residues(self.n_mod, self.entries.iter().map(|&e| e as i64))
    }
}

impl PartialEq for WeightVector {
    fn eq(&self, other: &Self) -> bool {
        if self.n_mod != other.n_mod || self.entries.len() != other.entries.len() {
            return false;
        }
        let n = self.n_mod;
        let c = (other.entries[0] + n - self.entries[0]) % n;
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| (a + c) % n == b)
    }
}

impl Eq for WeightVector {}

/// Multiset of characters of `μ_N`, written additively as residues mod `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharMultiset {
    n_mod: u32,
    counts: BTreeMap<u32, usize>,
}

impl CharMultiset {
    pub fn empty(n_mod: u32) -> Self {
        CharMultiset {
            n_mod,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_residues(n_mod: u32, it: impl IntoIterator<Item = i64>) -> Self {
        let mut s = Self::empty(n_mod);
        for r in it {
            s.insert(r);
        }
        s
    }

    /// Every character of `μ_N` once.
    pub fn all(n_mod: u32) -> Self {
        Self::from_residues(n_mod, 0..n_mod as i64)
    }

    pub fn insert(&mut self, r: i64) {
        let r = r.rem_euclid(self.n_mod as i64) as u32;
        *self.counts.entry(r).or_insert(0) += 1;
    }

    pub fn modulus(&self) -> u32 {
        self.n_mod
    }

    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, r: u32) -> usize {
        self.counts.get(&(r % self.n_mod)).copied().unwrap_or(0)
    }

    /// Elements in increasing order, with repetition.
    pub fn elements(&self) -> Vec<u32> {
        self.counts
            .iter()
            .flat_map(|(&r, &c)| std::iter::repeat(r).take(c))
            .collect()
    }

    /// Additive notation for `∏ χ`.
    pub fn product(&self) -> u32 {
        let s: u64 = self.counts.iter().map(|(&r, &c)| r as u64 * c as u64).sum();
        (s % self.n_mod as u64) as u32
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.counts.keys().all(|k| !other.counts.contains_key(k))
    }

    pub fn negate(&self) -> Self {
        Self::from_residues(self.n_mod, self.elements().into_iter().map(|r| -(r as i64)))
    }

    /// Multiplicative rendering, e.g. `χ^2·χ^3`.
    pub fn render_multiplicative(&self) -> String {
        let parts: Vec<String> = self
            .elements()
            .into_iter()
            .map(|r| if r == 0 { "1".into() } else { format!("χ^{r}") })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl Serialize for CharMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// Componentwise multiplicity subtraction.
pub fn cancel(a: &CharMultiset, b: &CharMultiset) -> (CharMultiset, CharMultiset) {
    assert_eq!(a.n_mod, b.n_mod);
    let mut a2 = CharMultiset::empty(a.n_mod);
    let mut b2 = CharMultiset::empty(a.n_mod);
    for (&r, &c) in &a.counts {
        let d = c.saturating_sub(b.count(r));
        if d > 0 {
            a2.counts.insert(r, d);
        }
    }
    for (&r, &c) in &b.counts {
        let d = c.saturating_sub(a.count(r));
        if d > 0 {
            b2.counts.insert(r, d);
        }
    }
    (a2, b2)
}

/// The explicit label `v(n, N)`.
pub fn build_v(n: u32, big_n: u32) -> Result<WeightVector> {
    if n < 2 || n % 2 != 0 || big_n % 2 == 0 || big_n < n + 5 {
        return Err(Error::BadParams(format!(
            "need n even ≥ 2 and N odd ≥ n+5, got n={n}, N={big_n}"
        )));
    }
    let entries: Vec<i64> = if n == 2 {
        [0, 0, 0].into_iter().chain(2..=big_n as i64 - 2).collect()
    } else {
        let k = n / 2;
        let omitted = |x: u32| {
            x == 1 || x == k + 2 || (3..=k).contains(&x) || (big_n - k - 1..=big_n - 2).contains(&x)
        };
        std::iter::repeat(0)
            .take(n as usize + 1)
            .chain((1..big_n).filter(|&x| !omitted(x)).map(|x| x as i64))
            .collect()
    };
    WeightVector::new(big_n, &entries)
}

/// `Cancel(all characters, −v)`: the hypergeometric data `(S'_χ, S'_ρ)`.
pub fn hyper_data(v: &WeightVector) -> (CharMultiset, CharMultiset) {
    cancel(&CharMultiset::all(v.n_mod), &v.neg().multiset())
}

/// Number of translates `v − yW` without a zero entry, i.e. the number of
/// residue classes absent from `v`.
pub fn rank_of(v: &WeightVector) -> u32 {
    let ms = v.multiset();
    (0..v.n_mod).filter(|&r| ms.count(r) == 0).count() as u32
}

/// `−v` is a permutation of some translate `v + cW`.
pub fn is_self_dual(v: &WeightVector) -> bool {
    let neg = v.neg().multiset();
    (0..v.n_mod as i64).any(|c| v.translate(c).multiset() == neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(n: u32, r: &[i64]) -> CharMultiset {
        CharMultiset::from_residues(n, r.iter().copied())
    }

    #[test]
    fn explicit_vectors() {
        assert_eq!(build_v(4, 9).unwrap().entries(), &[0, 0, 0, 0, 0, 2, 3, 5, 8]);
        assert_eq!(build_v(2, 7).unwrap().entries(), &[0, 0, 0, 2, 3, 4, 5]);
        assert_eq!(
            build_v(6, 11).unwrap().entries(),
            &[0, 0, 0, 0, 0, 0, 0, 2, 4, 6, 10]
        );
        assert!(build_v(4, 8).is_err());
        assert!(build_v(3, 9).is_err());
    }

    #[test]
    fn cancel_examples() {
        let (a, b) = cancel(&ms(5, &[1, 2, 2, 3]), &ms(5, &[2, 3, 3]));
        assert_eq!((a.elements(), b.elements()), (vec![1, 2], vec![3]));
        let x = ms(9, &[0, 0, 0, 0, 0, 1, 4, 6, 7]);
        let (a, b) = cancel(&CharMultiset::all(9), &x);
        assert_eq!((a.elements(), b.elements()), (vec![2, 3, 5, 8], vec![0, 0, 0, 0]));
        let (a, b) = cancel(&x, &x);
        assert!(a.is_empty() && b.is_empty());
    }

    #[test]
    fn hyper_data_examples() {
        let (c, r) = hyper_data(&build_v(2, 7).unwrap());
        assert_eq!((c.elements(), r.elements()), (vec![1, 6], vec![0, 0]));
        let (c, r) = hyper_data(&build_v(4, 9).unwrap());
        assert_eq!((c.elements(), r.elements()), (vec![2, 3, 5, 8], vec![0; 4]));
        let (c, r) = hyper_data(&build_v(6, 11).unwrap());
        assert_eq!(c.len(), 6);
        assert_eq!(r.elements(), vec![0; 6]);
    }

    #[test]
    fn rank_and_duality() {
        let v27 = build_v(2, 7).unwrap();
        let v49 = build_v(4, 9).unwrap();
        let w = WeightVector::new(3, &[0, 1, 2]).unwrap();
        assert_eq!((rank_of(&v49), rank_of(&v27), rank_of(&w)), (4, 2, 0));
        assert!(is_self_dual(&v27));
        assert!(!is_self_dual(&v49));
        assert!(is_self_dual(&w));
    }

    #[test]
    fn equality_mod_w() {
        let v = build_v(2, 7).unwrap();
        assert_eq!(v.translate(3), v);
        assert_ne!(v.neg().translate(1), build_v(2, 9).unwrap());
        assert!(WeightVector::new(3, &[0, 1, 1]).is_err());
    }
}
