use dworkbench::signs::*;
use dworkbench::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn identity_on_random_examples() {
    for l in [5u32, 13] {
        for dim in [2usize, 4, 6] {
            let c = run_sign_check(l, dim, 17, 100).unwrap();
            assert!(c.pass, "l={l} dim={dim}");
            // Both signs and both values of χ(c) occur.
            assert!(c.records.iter().any(|r| r.sd_sign == 1));
            assert!(c.records.iter().any(|r| r.sd_sign == -1));
            assert!(c.records.iter().any(|r| r.chi_c == 1));
            assert!(c.records.iter().any(|r| r.chi_c == -1));
        }
    }
}

#[test]
fn det_pairing_always_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for l in [5u32, 7, 11, 13] {
        for det_c in [1, -1] {
            let rep = det_pairing_example(l, det_c, &mut rng).unwrap();
            assert_eq!(sd_sign(&rep).unwrap(), -1);
            let cj = cj_sign(&convert_pairing(&rep).unwrap()).unwrap();
            // +1 exactly when det r(c) = −1.
            assert_eq!(cj, -det_c as i32);
        }
    }
}

#[test]
fn wrong_flavor_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rep = random_admissible(5, 2, 1, &mut rng).unwrap();
    assert!(matches!(cj_sign(&rep), Err(Error::BadParams(_))));
    let mut broken = rep.clone();
    broken.pairing.set(0, 1, broken.pairing.get(0, 1) + 1);
    broken.pairing.set(1, 1, broken.pairing.get(1, 1) + 2);
    assert!(sd_sign(&broken).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conversion_roundtrip(seed in any::<u64>(), l in prop::sample::select(vec![5u32, 7, 13]),
                            dim in prop::sample::select(vec![2usize, 4])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_admissible(l, dim, 2, &mut rng).unwrap();
        prop_assert!(rep.is_equivariant());
        let cj = convert_pairing(&rep).unwrap();
        prop_assert!(cj.is_equivariant());
        prop_assert_eq!(unconvert_pairing(&cj).unwrap().pairing, rep.pairing.clone());
        // Matrix-level form of the identity: (P·c)ᵀ = sgn·χ(c)·(P·c).
        let s = symmetry_type(&rep.pairing).unwrap() * rep.chi_c_sign().unwrap();
        let pc = rep.pairing.mul(&rep.c);
        let expected = if s == 1 { pc.clone() } else { pc.neg() };
        prop_assert_eq!(pc.transpose(), expected);
    }

    #[test]
    fn det_class_is_congruence_invariant(seed in any::<u64>(), l in prop::sample::select(vec![5u32, 13])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random_admissible(l, 4, 0, &mut rng).unwrap();
        let a = FpMatrix::random_invertible(l, 4, &mut rng);
        let moved = a.transpose().mul(&rep.pairing).mul(&a);
        let same = |x: &DetClass, y: &DetClass| {
            matches!((x, y), (DetClass::Square { .. }, DetClass::Square { .. })
                | (DetClass::Nonsquare { .. }, DetClass::Nonsquare { .. }))
        };
        prop_assert!(same(&pairing_det_class(&rep.pairing).unwrap(), &pairing_det_class(&moved).unwrap()));
    }
}
