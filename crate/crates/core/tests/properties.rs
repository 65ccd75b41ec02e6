use dworkbench::chars::{self, AddChar, MultChar};
use dworkbench::hyper::{self, HyperSpec};
use dworkbench::weights::{self, cancel, CharMultiset};
use dworkbench::{CycloElem, FqElem, FqField};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn elem(m: u32, coeffs: &[i64], den: i64) -> CycloElem {
    let c: Vec<BigRational> = coeffs
        .iter()
        .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(den)))
        .collect();
    CycloElem::from_coeffs(m, &c)
}

fn cyclo_pair() -> impl Strategy<Value = (CycloElem, CycloElem, CycloElem)> {
    (3u32..=60).prop_flat_map(|m| {
        let v = || (prop::collection::vec(-9i64..=9, m as usize), 1i64..=4);
        (v(), v(), v()).prop_map(move |((a, da), (b, db), (c, dc))| {
            (elem(m, &a, da), elem(m, &b, db), elem(m, &c, dc))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((a, b, c) in cyclo_pair()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &a), &CycloElem::zero(a.modulus()));
    }

    #[test]
    fn embedding_is_a_homomorphism((a, b, _c) in cyclo_pair(), e in 1i64..60) {
        let m = a.modulus() as i64;
        prop_assume!(num_integer::gcd(e, m) == 1);
        let za = a.embed_complex(e);
        let zb = b.embed_complex(e);
        let tol = 1e-9 * (1.0 + za.norm() * zb.norm());
        prop_assert!(((&a * &b).embed_complex(e) - za * zb).norm() <= tol);
        prop_assert!(((&a + &b).embed_complex(e) - (za + zb)).norm() <= tol);
        prop_assert!((a.conjugate().embed_complex(1) - a.embed_complex(1).conj()).norm()
            <= 1e-9 * (1.0 + za.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inverse((a, _b, _c) in cyclo_pair()) {
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        prop_assert_eq!(&a * &inv, CycloElem::one(a.modulus()));
    }
}

fn field_strategy() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(vec![(7u32, 1u32), (7, 2), (7, 3), (13, 1), (2, 5), (3, 4), (29, 1), (5, 3)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dlog_is_additive((p, m) in field_strategy(), x in 1u32.., y in 1u32..) {
        let f = FqField::new(p, m).unwrap();
        let q = f.order();
        let (a, b) = (FqElem(1 + x % (q - 1)), FqElem(1 + y % (q - 1)));
        let (da, db) = (f.dlog(a).unwrap(), f.dlog(b).unwrap());
        prop_assert_eq!(f.dlog(f.mul(a, b)).unwrap(), (da + db) % (q - 1));
    }

    #[test]
    fn teich_is_multiplicative((q, n) in prop::sample::select(vec![(7u32, 3u32), (13, 3), (19, 9), (29, 7), (43, 7), (31, 5)]),
                               x in 1u32.., y in 1u32..) {
        let f = FqField::new(q, 1).unwrap();
        let (a, b) = (FqElem(1 + x % (q - 1)), FqElem(1 + y % (q - 1)));
        let lhs = chars::teich(&f, f.mul(a, b), n).unwrap();
        let rhs = &chars::teich(&f, a, n).unwrap() * &chars::teich(&f, b, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn characters_are_multiplicative(q in prop::sample::select(vec![7u32, 13, 29]),
                                     j in 0i64..28, x in 1u32.., y in 1u32..) {
        let f = FqField::new(q, 1).unwrap();
        let chi = MultChar::new(&f, j);
        let (a, b) = (FqElem(1 + x % (q - 1)), FqElem(1 + y % (q - 1)));
        prop_assert_eq!(chi.eval(&f, f.mul(a, b)), &chi.eval(&f, a) * &chi.eval(&f, b));
    }
}

#[test]
fn frobenius_fixes_exactly_the_prime_field() {
    for (p, m) in [(7u32, 3u32), (7, 2), (3, 5), (5, 3), (2, 8)] {
        let f = FqField::new(p, m).unwrap();
        let mut fixed = 0;
        let elems: Vec<FqElem> = f.enumerate().collect();
        for &a in &elems {
            let fa = f.frobenius(a);
            if fa == a {
                fixed += 1;
            }
            for &b in elems.iter().step_by(7) {
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(fa, f.frobenius(b)));
                assert_eq!(f.frobenius(f.add(a, b)), f.add(fa, f.frobenius(b)));
            }
        }
        assert_eq!(fixed, p, "F_{p}^{m}");
    }
}

#[test]
fn gauss_norms_all_characters() {
    for q in [7u32, 13, 29] {
        let f = FqField::new(q, 1).unwrap();
        let psi = AddChar::standard();
        assert_eq!(
            chars::gauss_sum(&f, &psi, &MultChar::trivial(&f)).unwrap(),
            CycloElem::from_int(1, -1)
        );
        for j in 1..q as i64 - 1 {
            let g = chars::gauss_sum(&f, &psi, &MultChar::new(&f, j)).unwrap();
            assert_eq!(&g * &g.conjugate(), CycloElem::from_int(1, q as i64), "q={q} j={j}");
        }
    }
}

#[test]
fn build_v_scan() {
    for big_n in (7u32..=31).step_by(2) {
        for n in (2..=big_n - 5).step_by(2) {
            let v = weights::build_v(n, big_n).unwrap();
            let e = v.entries();
            assert_eq!(e.len(), big_n as usize);
            assert_eq!(e.iter().map(|&x| x as u64).sum::<u64>() % big_n as u64, 0);
            assert_eq!(weights::rank_of(&v), n, "n={n} N={big_n}");
            let zeros = e.iter().filter(|&&x| x == 0).count();
            assert_eq!(zeros, if n == 2 { 3 } else { n as usize + 1 });
            let (c, r) = weights::hyper_data(&v);
            assert_eq!(c.len(), n as usize);
            assert_eq!(r, CharMultiset::from_residues(big_n, vec![0; n as usize]));
            assert_eq!(c.product(), 0, "trivial product, n={n} N={big_n}");
            assert_eq!(weights::is_self_dual(&v), n == 2);
        }
    }
}

proptest! {
    #[test]
    fn cancel_is_idempotent(a in prop::collection::vec(0i64..9, 0..12),
                            b in prop::collection::vec(0i64..9, 0..12)) {
        let (a, b) = (CharMultiset::from_residues(9, a), CharMultiset::from_residues(9, b));
        let (a1, b1) = cancel(&a, &b);
        prop_assert!(a1.is_disjoint(&b1));
        prop_assert_eq!(a.len() - a1.len(), b.len() - b1.len());
        let (a2, b2) = cancel(&a1, &b1);
        prop_assert_eq!((a2, b2), (a1, b1));
    }
}

#[test]
fn trad_weil_bound() {
    for q in [29u32, 43] {
        let spec = HyperSpec::canonical(q, 2, 7).unwrap();
        let k = spec.rank() as f64;
        let bound = k * k * (q as f64).powi(2 * spec.rank() as i32 - 1);
        for v in hyper::trad_trace_conv(&spec, 1).unwrap().values.values() {
            for a in v.abs2_all_embeddings() {
                assert!(a <= bound * (1.0 + 1e-6));
            }
        }
    }
}
