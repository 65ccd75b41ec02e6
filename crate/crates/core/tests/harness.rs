use dworkbench::dwork::EngineOptions;
use dworkbench::harness::*;
use dworkbench::Error;

#[test]
fn katz_q29() {
    let k = katz_check(2, 7, 29, &KatzOptions::default()).unwrap();
    assert!(k.constancy, "{:?}", k.skipped);
    assert!(k.weight_ok, "{:?}", k.lambda_abs2);
    assert!(k.negative_control.as_ref().unwrap().fails_as_expected);
    assert_eq!(k.conv_sign, Some(-1));
    assert_eq!(k.det_hcan_exponent.as_deref(), Some("half"));
    assert!(k.pass());
    // Every t with t^N ≠ 1 either has a row or an explained skip.
    assert_eq!(k.rows.len() + k.skipped.len(), 28);
    let note = psi2_weight_note(&k).unwrap();
    assert!(note.weight_ok, "{:?}", note.psi2_abs2);
}

#[test]
fn psi2_needs_lambda() {
    let mut k = katz_check(
        2,
        7,
        29,
        &KatzOptions {
            negative_control: false,
            adjudicate: false,
            ..KatzOptions::default()
        },
    )
    .unwrap();
    k.lambda = None;
    assert!(matches!(psi2_weight_note(&k), Err(Error::MissingLambda)));
}

#[test]
fn n3_oracle_and_control() {
    assert!(validate_n3(7, EngineOptions::default()).unwrap().pass);
    let bad = EngineOptions {
        corrupt_weight: Some((1, 1)),
    };
    assert!(!validate_n3(7, bad).unwrap().pass);
}

#[test]
fn det_hcan_consistent() {
    let r = check_det_hcan(&[(2, 7, 29), (4, 9, 19)]).unwrap();
    assert!(r.pass, "{:?}", r.rows);
    assert_eq!(r.adjudications.det_hcan_exponent.as_deref(), Some("half"));
}

#[test]
fn small_checks_pass() {
    assert!(check_combinatorics().unwrap().pass);
    assert!(check_gauss(&[7, 13]).unwrap().pass);
    assert!(check_signs(&[5], 2, 20, 3).unwrap().pass);
    assert!(check_signs(&[13], 4, 20, 3).unwrap().pass);
    let d = check_det_trad(29, 2, 5, 7).unwrap();
    assert!(d.pass);
    assert_eq!(d.rows.len(), 5);
}

#[test]
fn config_parsing() {
    let c = CampaignConfig::parse(
        "# campaign\nn = 2\nN = 7\nq = 29, 43\nchecks = validate-n3, signs\nseed = 9\nthreads = 2\n",
    )
    .unwrap();
    assert_eq!(c.qs, vec![29, 43]);
    assert_eq!(c.checks, vec![CheckKind::ValidateN3, CheckKind::Signs]);
    assert!(matches!(CampaignConfig::parse("q = 31"), Err(Error::Config(_))));
    assert!(matches!(CampaignConfig::parse("checks = nope"), Err(Error::Config(_))));
    assert!(matches!(CampaignConfig::parse("bogus"), Err(Error::Config(_))));
    assert!(matches!(CampaignConfig::parse("N = 8"), Err(Error::Config(_))));
}

#[test]
fn campaign_subset_is_deterministic() {
    let text = "q = 29\nchecks = validate-n3, hyper-conv\nn3_q = 7\ntiming = false\n";
    let mut one = CampaignConfig::parse(text).unwrap();
    one.threads = 1;
    let mut many = one.clone();
    many.threads = 4;
    let a = run_campaign(&one).unwrap();
    let b = run_campaign(&many).unwrap();
    assert!(a.pass);
    assert_eq!(a.exit_code(), 0);
    let ja: Vec<String> = a.reports.iter().map(Report::to_json).collect();
    let jb: Vec<String> = b.reports.iter().map(Report::to_json).collect();
    assert_eq!(ja, jb);
}
