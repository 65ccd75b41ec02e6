use dworkbench::chars;
use dworkbench::hyper::*;
use dworkbench::{CycloElem, Error, FqElem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn conv_equals_naive_canonical_q29() {
    let spec = HyperSpec::canonical(29, 2, 7).unwrap();
    let table = trad_trace_conv(&spec, 1).unwrap();
    for t in 2..29 {
        let naive = trad_trace_naive(&spec, FqElem(t), 1).unwrap();
        assert_eq!(table.get(t).unwrap(), &naive, "t = {t}");
    }
    assert_eq!(table.absent, vec![0, 1]);
}

#[test]
fn pinned_regression_value_t2() {
    // Frozen from the defining sum; the convolution route must reproduce it.
    let spec = HyperSpec::canonical(29, 2, 7).unwrap();
    let v = trad_trace_naive(&spec, FqElem(2), 1).unwrap();
    let mut h = vec![0i64; 7];
    h[0] = 58;
    (h[2], h[3], h[4], h[5]) = (116, -116, -116, 116);
    assert_eq!(v, CycloElem::from_root_counts(7, &h));
    assert_eq!(v, trad_trace_conv_at(&spec, FqElem(2), 1).unwrap());
    assert_eq!(det_trad(&spec, FqElem(2)).unwrap(), CycloElem::from_int(1, 24389));
}

#[test]
fn conv_sign_is_minus_one() {
    let spec = HyperSpec::canonical(29, 2, 7).unwrap();
    assert_eq!(adjudicate_conv_sign(&spec).unwrap(), Some(-1));
}

#[test]
fn conv_order_independent_k3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = HyperSpec::random(29, 7, 3, false, &mut rng).unwrap();
    let base = trad_trace_conv(&spec, 1).unwrap();
    for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
        let other = trad_trace_conv(&spec.permuted(&perm), 1).unwrap();
        assert_eq!(base.values, other.values);
    }
}

#[test]
fn mellin_matches_exact_k2() {
    let spec = HyperSpec::canonical(29, 2, 7).unwrap();
    let exact = trad_trace_conv(&spec, 1).unwrap();
    let fast = mellin_fast(&spec).unwrap();
    for (t, v) in &exact.values {
        let e = v.embed_complex(1);
        assert!((fast.values[t] - e).norm() <= 1e-6 * e.norm().max(1.0));
    }
}

#[test]
fn mellin_k4_q113_fast() {
    let spec = HyperSpec::from_pairs(113, 7, vec![1, 2, 3, 5], vec![0, 0, 4, 6]).unwrap();
    let start = std::time::Instant::now();
    let fast = mellin_fast(&spec).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(fast.values.len(), 111);
    // Weil bound for rank 4, weight 7.
    for v in fast.values.values() {
        assert!(v.norm_sqr() <= 16.0 * 113f64.powi(7) * (1.0 + 1e-9));
    }
}

#[test]
fn extension_naive_matches_conv() {
    let spec = HyperSpec::from_pairs(7, 3, vec![1], vec![2]).unwrap();
    let hf_t = FqElem(10);
    let a = trad_trace_naive(&spec, hf_t, 2).unwrap();
    let b = trad_trace_conv_at(&spec, hf_t, 2).unwrap();
    assert_eq!(a, b);
    let spec2 = HyperSpec::from_pairs(7, 3, vec![1, 0], vec![2, 2]).unwrap();
    assert_eq!(
        trad_trace_naive(&spec2, FqElem(3), 2).unwrap(),
        trad_trace_conv_at(&spec2, FqElem(3), 2).unwrap()
    );
}

#[test]
fn canonical_paths_agree() {
    for q in [29, 43] {
        let spec = HyperSpec::canonical(q, 2, 7).unwrap();
        assert_eq!(compare_paths(&spec).unwrap(), Some(1), "q = {q}");
    }
}

#[test]
fn canonical_rank_one_exact() {
    let spec = HyperSpec::from_pairs(29, 7, vec![3], vec![0]).unwrap();
    assert_eq!(compare_paths(&spec).unwrap(), Some(1));
    let t = canonical_trace(&spec, CanonicalPath::ConvOfCanonical).unwrap();
    for v in t.values.values() {
        if !v.is_zero() {
            for a in v.abs2_all_embeddings() {
                assert!((a - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn canonical_weil_bound() {
    let spec = HyperSpec::canonical(29, 2, 7).unwrap();
    let t = canonical_trace(&spec, CanonicalPath::TradOverPhi).unwrap();
    for v in t.values.values() {
        for a in v.abs2_all_embeddings() {
            assert!(a <= 4.0 * 29.0 * (1.0 + 1e-9));
        }
    }
}

#[test]
fn det_rank_one_is_trace() {
    let spec = HyperSpec::from_pairs(29, 7, vec![2], vec![2]).unwrap();
    let f = spec.base_field().unwrap();
    let d = det_trad(&spec, FqElem(5)).unwrap();
    let chi = chars::kummer_trace(&f, 7, 2, FqElem(5), chars::KummerFlavor::X).unwrap();
    assert_eq!(d, chi);
    assert_eq!(d, trad_trace_naive(&spec, FqElem(5), 1).unwrap());
}

#[test]
fn det_canonical_matches_newton() {
    let spec = HyperSpec::canonical(29, 2, 7).unwrap();
    let d = det_trad(&spec, FqElem(2)).unwrap();
    assert_eq!(d, det_via_newton(&spec, FqElem(2)).unwrap());
    let abs2 = (&d * &d.conjugate()).as_rational().unwrap();
    assert_eq!(abs2, num_rational::BigRational::from_integer(29i64.pow(6).into()));
}

#[test]
fn det_random_specs_both_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut same, mut diff) = (0, 0);
    while same < 2 || diff < 2 {
        let spec = HyperSpec::random(29, 28, 2, true, &mut rng).unwrap();
        let equal_products = spec.s_chi().product() == spec.s_rho().product();
        if (equal_products && same >= 2) || (!equal_products && diff >= 2) {
            continue;
        }
        let t = FqElem(3);
        assert_eq!(det_trad(&spec, t).unwrap(), det_via_newton(&spec, t).unwrap(), "{spec:?}");
        if equal_products {
            same += 1;
        } else {
            diff += 1;
        }
    }
}

#[test]
fn det_rejects_overlapping_data() {
    let spec = HyperSpec::from_pairs(29, 7, vec![1, 2], vec![2, 0]).unwrap();
    assert!(matches!(det_trad(&spec, FqElem(3)), Err(Error::BadParams(_))));
}

#[test]
fn det_hcan_prefers_half_exponent() {
    let rec = verify_det_hcan(2, 7, 29).unwrap();
    assert_eq!(rec.verdict(), "half");
    assert_eq!(rec.newton_agrees, Some(true));
    assert_ne!(rec.lhs, CycloElem::zero(1));
}
