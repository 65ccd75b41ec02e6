use clap::{Args, Parser, Subcommand, ValueEnum};
use dworkbench::chars::{self, AddChar, MultChar};
use dworkbench::dwork::{self, DworkFiber, EigentraceEngine};
use dworkbench::harness::{self, CampaignConfig, CheckKind, KatzOptions, Report};
use dworkbench::hyper::{self, HyperSpec};
use dworkbench::weights;
use dworkbench::{signs, Error, FqElem, FqField};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dworkbench", version, about = "Exact character-sum workbench for the Dwork family")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct JsonOut {
    /// Emit JSON, to stdout or to the given file.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    json: Option<Option<PathBuf>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Characters and Gauss sums.
    #[command(subcommand)]
    Char(CharCmd),
    /// Weight vectors and hypergeometric data.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Hypergeometric trace tables.
    #[command(subcommand)]
    Hyper(HyperCmd),
    /// Dwork-family eigentraces and point counts.
    #[command(subcommand)]
    Dwork(DworkCmd),
    /// Verification campaigns.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Pairing signs over F_l.
    #[command(subcommand)]
    Signs(SignsCmd),
}

#[derive(Subcommand)]
enum CharCmd {
    /// g(ψ, χ) for χ of order dividing `chi-order`.
    Gauss {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        chi_order: u32,
        #[arg(long, allow_hyphen_values = true)]
        chi_exp: i64,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// The weight vector v(n, N).
    BuildV {
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: u32,
    },
    /// Cancelled character multisets and rank for v(n, N).
    HyperData {
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Naive,
    Conv,
    Mellin,
}

#[derive(Subcommand)]
enum HyperCmd {
    /// Traditional trace over F_{q^E}, by one of three algorithms.
    Trace {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long, value_enum, default_value = "conv")]
        method: Method,
        /// Field element code (in F_{q^E}).
        #[arg(long)]
        t: Option<u32>,
        #[arg(long = "E", default_value_t = 1)]
        ext: u32,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Subcommand)]
enum DworkCmd {
    /// Eigentrace T_v(t) with torus and strata breakdown.
    Trace {
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u32,
        /// `all` or a field element.
        #[arg(long, default_value = "all")]
        t: String,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Brute-force #Y_t over F_{q^ext}.
    Count {
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Closed-form determinant against the Newton oracle on random specs.
    DetTrad {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Exponent adjudication for the canonical determinant.
    DetHcan {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: u32,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Ratio T_v(t) / T_can(t^N): constancy, weight, negative control.
    Katz {
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// N = 3 equivariant Lefschetz oracle.
    N3 {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Full campaign; exits 1 if any gating check fails.
    All {
        /// Flat key = value campaign file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated subset of checks.
        #[arg(long)]
        only: Option<String>,
        /// Directory for report files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write summary.csv.
        #[arg(long)]
        csv: bool,
        /// Write runtime_ms = 0 so reports are byte-comparable.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Subcommand)]
enum SignsCmd {
    /// Sign identity on random admissible examples.
    Check {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        out: JsonOut,
    },
}

enum Failure {
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: &JsonOut, v: &Value, text: impl FnOnce() -> String) -> CmdResult {
    match &out.json {
        None => println!("{}", text()),
        Some(None) => println!("{}", serde_json::to_string_pretty(v).unwrap()),
        Some(Some(path)) => {
            std::fs::write(path, serde_json::to_string_pretty(v).unwrap())
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn verdict(r: &Report, out: &JsonOut) -> CmdResult {
    emit(out, &serde_json::to_value(r).unwrap(), || {
        let mut s = format!("{}: {}", r.check, if r.pass { "PASS" } else { "FAIL" });
        for n in &r.notes {
            s.push_str(&format!("\n  {n}"));
        }
        s
    })?;
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Char(CharCmd::Gauss {
            q,
            chi_order,
            chi_exp,
            out,
        }) => {
            let f = FqField::new(q, 1)?;
            let chi = MultChar::of_mu_n(&f, chi_order, chi_exp)?;
            let g = chars::gauss_sum(&f, &AddChar::standard(), &chi)?;
            let z = g.embed_complex(1);
            let v = json!({"q": q, "chi_order": chi_order, "chi_exp": chi_exp, "value": g,
                           "complex": [z.re, z.im]});
            emit(&out, &v, || format!("{g}\n≈ {:.12} {:+.12}i", z.re, z.im))
        }
        Cmd::Weights(w) => {
            let (n, big_n) = match w {
                WeightsCmd::BuildV { n, big_n } | WeightsCmd::HyperData { n, big_n } => (n, big_n),
            };
            let v = weights::build_v(n, big_n)?;
            let (c, r) = weights::hyper_data(&v);
            let doc = json!({"v": v.entries(), "s_chi": c, "s_rho": r, "rank": weights::rank_of(&v)});
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(())
        }
        Cmd::Hyper(HyperCmd::Trace {
            q,
            n,
            big_n,
            method,
            t,
            ext,
            out,
        }) => {
            let spec = HyperSpec::canonical(q, n, big_n)?;
            let rows: Vec<Value> = match (method, t) {
                (Method::Naive, Some(t)) => {
                    let v = hyper::trad_trace_naive(&spec, FqElem(t), ext)?;
                    vec![json!({"t": t, "value": v, "abs2": v.embed_complex(1).norm_sqr()})]
                }
                (Method::Naive, None) => {
                    let size = (q as u64).pow(ext) as u32;
                    (2..size)
                        .map(|t| {
                            let v = hyper::trad_trace_naive(&spec, FqElem(t), ext)?;
                            Ok(json!({"t": t, "value": v, "abs2": v.embed_complex(1).norm_sqr()}))
                        })
                        .collect::<Result<_, Error>>()?
                }
                (Method::Conv, _) => {
                    let table = hyper::trad_trace_conv(&spec, ext)?;
                    table
                        .rows()
                        .into_iter()
                        .filter(|r| t.map_or(true, |t| t == r.t))
                        .map(|r| serde_json::to_value(r).unwrap())
                        .collect()
                }
                (Method::Mellin, _) => {
                    if ext != 1 {
                        return Err(Failure::Usage("mellin runs over the prime field only".into()));
                    }
                    let table = hyper::mellin_fast(&spec)?;
                    table
                        .values
                        .iter()
                        .filter(|(k, _)| t.map_or(true, |t| t == **k))
                        .map(|(k, z)| json!({"t": k, "value": [z.re, z.im], "abs2": z.norm_sqr()}))
                        .collect()
                }
            };
            let doc = json!({"spec": spec, "E": ext, "rows": rows});
            emit(&out, &doc, || {
                rows.iter()
                    .map(|r| format!("t={} abs2={} value={}", r["t"], r["abs2"], r["value"]))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Cmd::Dwork(DworkCmd::Trace {
            big_n,
            n,
            q,
            t,
            out,
        }) => {
            let v = weights::build_v(n, big_n)?;
            let engine = EigentraceEngine::new(q, &v)?;
            let traces = if t == "all" {
                engine.trace_all()
            } else {
                let t: u32 = t
                    .parse()
                    .map_err(|_| Failure::Usage(format!("--t: expected 'all' or an integer, got '{t}'")))?;
                vec![engine.trace_at(t)?]
            };
            let rows: Vec<Value> = traces
                .iter()
                .map(|tr| {
                    let strata: serde_json::Map<String, Value> = tr
                        .strata
                        .iter()
                        .map(|s| {
                            let key = s.z.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                            (key, serde_json::to_value(&s.value).unwrap())
                        })
                        .collect();
                    json!({"t": tr.t, "value": tr.value, "torus": tr.torus, "strata": strata,
                           "weil_ok": dwork::weil_check(tr, 1e-6)})
                })
                .collect();
            let doc = json!({"n": n, "N": big_n, "q": q, "v": v.entries(), "rows": rows});
            emit(&out, &doc, || {
                traces
                    .iter()
                    .map(|tr| format!("t={} T={}", tr.t, tr.value))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Cmd::Dwork(DworkCmd::Count { big_n, q, t, ext }) => {
            let fiber = DworkFiber::new(q, big_n, t)?;
            let c = dwork::count_points(&fiber, ext)?;
            println!("{c}");
            Ok(())
        }
        Cmd::Verify(VerifyCmd::DetTrad {
            q,
            k,
            seed,
            count,
            out,
        }) => verdict(&harness::check_det_trad(q, k, count, seed)?, &out),
        Cmd::Verify(VerifyCmd::DetHcan { q, n, big_n, out }) => {
            verdict(&harness::check_det_hcan(&[(n, big_n, q)])?, &out)
        }
        Cmd::Verify(VerifyCmd::Katz {
            n,
            big_n,
            q,
            tolerance,
            out,
        }) => {
            let opts = KatzOptions {
                tolerance,
                ..KatzOptions::default()
            };
            let start = std::time::Instant::now();
            let k = harness::katz_check(n, big_n, q, &opts)?;
            let mut r = k.to_report(0);
            r.runtime_ms = start.elapsed().as_millis() as u64;
            verdict(&r, &out)
        }
        Cmd::Verify(VerifyCmd::N3 { q, out }) => {
            verdict(&harness::validate_n3(q, Default::default())?, &out)
        }
        Cmd::Verify(VerifyCmd::All {
            config,
            only,
            out,
            csv,
            no_timing,
        }) => {
            let mut cfg = match config {
                Some(p) => {
                    let text = std::fs::read_to_string(&p)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    CampaignConfig::parse(&text)?
                }
                None => CampaignConfig::default(),
            };
            if let Some(only) = only {
                cfg.checks = only
                    .split(',')
                    .map(|s| s.trim().parse::<CheckKind>())
                    .collect::<Result<_, _>>()?;
            }
            if let Some(t) = cli.threads {
                cfg.threads = t;
            }
            if out.is_some() {
                cfg.out = out;
            }
            cfg.csv |= csv;
            cfg.timing &= !no_timing;
            let res = harness::run_campaign(&cfg)?;
            for r in res.reports.iter() {
                println!(
                    "{:<26} {:<5} {:>8} ms  {}",
                    r.check,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.runtime_ms,
                    serde_json::to_string(&r.params).unwrap()
                );
            }
            for r in &res.informational {
                println!(
                    "{:<26} {:<5} {:>8} ms  (non-gating)",
                    r.check,
                    if r.pass { "pass" } else { "fail" },
                    r.runtime_ms
                );
            }
            if res.pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Cmd::Signs(SignsCmd::Check {
            l,
            dim,
            seed,
            count,
            out,
        }) => {
            let c = signs::run_sign_check(l, dim, seed, count)?;
            let v = serde_json::to_value(&c).unwrap();
            emit(&out, &v, || {
                let holds = c.records.iter().filter(|r| r.identity_holds).count();
                format!(
                    "l={l} dim={dim}: identity holds on {holds}/{count}; det pairing SD sign {}; {}",
                    c.det_pairing_sd_sign,
                    if c.pass { "PASS" } else { "FAIL" }
                )
            })?;
            if c.pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon_pool(t) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn rayon_pool(threads: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}
