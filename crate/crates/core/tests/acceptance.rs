//! Acceptance suite: one line per criterion, each run at its stated
//! tolerance and timed against its budget.

use std::time::{Duration, Instant};

use dworkbench::dwork::{count_points, DworkFiber, EngineOptions};
use dworkbench::harness::*;
use dworkbench::weights;
use dworkbench::Result;

struct Outcome {
    id: &'static str,
    name: &'static str,
    gating: bool,
    pass: bool,
    detail: String,
}

fn run(
    id: &'static str,
    name: &'static str,
    limit: Duration,
    gating: bool,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> Outcome {
    let start = Instant::now();
    let (ok, mut detail) = match f() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    let took = start.elapsed();
    let in_time = took <= limit;
    if !in_time {
        detail.push_str(" [over budget]");
    }
    let pass = ok && in_time;
    println!(
        "criterion {id:>2} {name}: {} ({:.2}s / {}s){}{}",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs(),
        if gating { "" } else { " [non-gating]" },
        if detail.is_empty() { String::new() } else { format!(" — {detail}") },
    );
    Outcome { id, name, gating, pass, detail }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn katz_detail(k: &KatzReport) -> String {
    format!(
        "q={} rows={} skipped={} orientation={:?} |Λ|²={:?} expected={}",
        k.q,
        k.rows.len(),
        k.skipped.len(),
        k.orientation.map(|o| o.as_str()),
        k.lambda_abs2.first(),
        k.expected_abs2
    )
}

fn determinism_config(threads: usize) -> CampaignConfig {
    let mut c = CampaignConfig::parse(
        "n = 2\nN = 7\nq = 29\nchecks = hyper-conv, validate-n3, katz\nn3_q = 7, 13\ntiming = false\n",
    )
    .unwrap();
    c.threads = threads;
    c
}

#[test]
fn acceptance() {
    let mut out = Vec::new();

    out.push(run("1", "combinatorics", secs(1), true, || {
        let r = check_combinatorics()?;
        let v = weights::build_v(4, 9)?;
        Ok((r.pass && v.entries() == [0, 0, 0, 0, 0, 2, 3, 5, 8], format!("v(4,9)={:?}", v.entries())))
    }));

    out.push(run("2", "gauss sums", secs(5), true, || {
        Ok((check_gauss(&[7, 13, 29])?.pass, String::new()))
    }));

    out.push(run("3", "hypergeometric cross-algorithm", secs(30), true, || {
        let r = check_hyper_conv(29, 2, 7, 1e-6)?;
        Ok((r.pass, format!("{} points", r.rows.len())))
    }));

    out.push(run("4", "canonical two-path", secs(60), true, || {
        let r = check_canonical_paths(&[29, 43], 2, 7)?;
        Ok((r.pass, r.notes.join("; ")))
    }));

    out.push(run("5", "det_trad vs newton", secs(120), true, || {
        let r = check_det_trad(29, 2, 6, 1)?;
        let eq = r.rows.iter().filter(|x| x["equal_products"] == true).count();
        let ne = r.rows.len() - eq;
        Ok((r.pass && r.rows.len() >= 5 && eq > 0 && ne > 0, format!("{eq} equal / {ne} different products")))
    }));

    out.push(run("6", "detHcan adjudication", secs(120), true, || {
        let r = check_det_hcan(&[(2, 7, 29), (2, 7, 43), (4, 9, 19)])?;
        Ok((r.pass, format!("exponent {:?}", r.adjudications.det_hcan_exponent)))
    }));

    out.push(run("7", "N=3 layered oracle", secs(60), true, || {
        let mut ok = true;
        for q in [7, 13] {
            ok &= validate_n3(q, EngineOptions::default())?.pass;
        }
        let control = validate_n3(7, EngineOptions { corrupt_weight: Some((1, 1)) })?;
        Ok((ok && !control.pass, "corrupted-weight control fails".into()))
    }));

    out.push(run("7b", "point-count regression", secs(60), true, || {
        let c = count_points(&DworkFiber::new(29, 7, 2)?, 1)?;
        Ok((c == 21_637_959, format!("#Y = {c}")))
    }));

    let mut katz = None;
    for (q, limit) in [(29u32, 180u64), (43, 900)] {
        out.push(run("8", "katz comparison", secs(limit), true, || {
            let k = katz_check(2, 7, q, &KatzOptions::default())?;
            let control = k.negative_control.as_ref().map(|c| c.fails_as_expected) == Some(true);
            let ok = k.constancy && k.weight_ok && control;
            let d = katz_detail(&k);
            if q == 29 {
                katz = Some(k);
            }
            Ok((ok, d))
        }));
    }

    out.push(run("8b", "psi2 weight note", secs(60), true, || match &katz {
        Some(k) => {
            let n = psi2_weight_note(k)?;
            Ok((n.weight_ok, "weight only; det Prim = ψ₂ not asserted".into()))
        }
        None => Ok((false, "no katz report".into())),
    }));

    out.push(run("9", "weil bounds and dualities", secs(120), true, || {
        Ok((check_weil(2, 7, 29, 1e-6)?.pass && check_weil(4, 9, 19, 1e-6)?.pass, String::new()))
    }));

    out.push(run("10", "signs", secs(10), true, || {
        let r = check_signs(&[5, 13], 2, 100, 1)?;
        let n: u64 = r.rows.iter().filter_map(|x| x["examples"].as_u64()).sum();
        let det = r.rows.iter().all(|x| x["det_pairing_sd_sign"] == -1);
        Ok((r.pass && det && n == 200, format!("{n} examples, det-pairing SD sign -1")))
    }));

    out.push(run("11", "determinism", secs(600), true, || {
        let a = run_campaign(&determinism_config(1))?;
        let b = run_campaign(&determinism_config(4))?;
        let ja: Vec<String> = a.reports.iter().map(Report::to_json).collect();
        let jb: Vec<String> = b.reports.iter().map(Report::to_json).collect();
        Ok((!ja.is_empty() && ja == jb, format!("{} reports byte-identical", ja.len())))
    }));

    out.push(run("12", "stretch katz (4,9,19)", secs(900), false, || {
        let k = katz_check(4, 9, 19, &KatzOptions::default())?;
        let mut d = katz_detail(&k);
        if k.distinct_t_n < 2 {
            d.push_str("; every smooth t has t^N = -1, so constancy is vacuous");
        }
        Ok((k.constancy && k.weight_ok, d))
    }));

    let failed: Vec<String> = out
        .iter()
        .filter(|o| o.gating && !o.pass)
        .map(|o| format!("{} {} ({})", o.id, o.name, o.detail))
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
