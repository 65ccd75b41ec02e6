use super::katz::{katz_check, psi2_weight_note, KatzOptions};
use super::{checks, Report};
use crate::arith;
use crate::dwork::EngineOptions;
use crate::error::{Error, Result};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    Combinatorics,
    Gauss,
    HyperConv,
    CanonicalPaths,
    DetTrad,
    DetHcan,
    ValidateN3,
    Katz,
    Psi2,
    Weil,
    Signs,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Combinatorics,
        CheckKind::Gauss,
        CheckKind::HyperConv,
        CheckKind::CanonicalPaths,
        CheckKind::DetTrad,
        CheckKind::DetHcan,
        CheckKind::ValidateN3,
        CheckKind::Katz,
        CheckKind::Psi2,
        CheckKind::Weil,
        CheckKind::Signs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Combinatorics => "combinatorics",
            CheckKind::Gauss => "gauss",
            CheckKind::HyperConv => "hyper-conv",
            CheckKind::CanonicalPaths => "canonical-paths",
            CheckKind::DetTrad => "det-trad",
            CheckKind::DetHcan => "det-hcan",
            CheckKind::ValidateN3 => "validate-n3",
            CheckKind::Katz => "katz",
            CheckKind::Psi2 => "psi2",
            CheckKind::Weil => "weil",
            CheckKind::Signs => "signs",
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = CheckKind::ALL.iter().map(|c| c.name()).collect();
                Error::Config(format!("unknown check '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub n: u32,
    pub big_n: u32,
    pub qs: Vec<u32>,
    pub checks: Vec<CheckKind>,
    pub seed: u64,
    /// 0 means rayon's default.
    pub threads: usize,
    pub timing: bool,
    pub tolerance: f64,
    pub n3_qs: Vec<u32>,
    pub signs_ls: Vec<u32>,
    pub signs_dim: usize,
    pub signs_count: usize,
    pub det_count: usize,
    /// Additional `(n, N, q)` cases for the det exponent adjudication.
    pub det_hcan_extra: Vec<(u32, u32, u32)>,
    /// Non-gating Katz runs `(n, N, q)`.
    pub stretch: Vec<(u32, u32, u32)>,
    pub out: Option<PathBuf>,
    pub csv: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            n: 2,
            big_n: 7,
            qs: vec![29, 43],
            checks: CheckKind::ALL.to_vec(),
            seed: 1,
            threads: 0,
            timing: true,
            tolerance: 1e-6,
            n3_qs: vec![7, 13],
            signs_ls: vec![5, 13],
            signs_dim: 2,
            signs_count: 100,
            det_count: 6,
            det_hcan_extra: vec![(4, 9, 19)],
            stretch: vec![],
            out: None,
            csv: false,
        }
    }
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("{key}: cannot parse '{s}'")))
        })
        .collect()
}

fn one<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn triples(key: &str, v: &str) -> Result<Vec<(u32, u32, u32)>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let p: Vec<u32> = list(key, &s.replace('/', ","))?;
            match p[..] {
                [a, b, c] => Ok((a, b, c)),
                _ => Err(Error::Config(format!("{key}: expected n/N/q, got '{s}'"))),
            }
        })
        .collect()
}

impl CampaignConfig {
    /// Flat `key = value` text; `#` starts a comment. Lists are comma-separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = CampaignConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "n" => c.n = one(k, v)?,
                "N" => c.big_n = one(k, v)?,
                "q" | "q-list" | "qs" => c.qs = list(k, v)?,
                "checks" | "only" => {
                    c.checks = if v == "all" {
                        CheckKind::ALL.to_vec()
                    } else {
                        list(k, v)?
                    }
                }
                "seed" => c.seed = one(k, v)?,
                "threads" => c.threads = one(k, v)?,
                "timing" => c.timing = one(k, v)?,
                "tolerance" => c.tolerance = one(k, v)?,
                "n3_q" => c.n3_qs = list(k, v)?,
                "signs_l" => c.signs_ls = list(k, v)?,
                "signs_dim" => c.signs_dim = one(k, v)?,
                "signs_count" => c.signs_count = one(k, v)?,
                "det_count" => c.det_count = one(k, v)?,
                "det_hcan_extra" => c.det_hcan_extra = triples(k, v)?,
                "stretch" => c.stretch = triples(k, v)?,
                "out" => c.out = Some(PathBuf::from(v)),
                "csv" => c.csv = one(k, v)?,
                _ => return Err(Error::Config(format!("line {}: unknown key '{k}'", lineno + 1))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, big_n) = (self.n, self.big_n);
        if n < 2 || n % 2 != 0 {
            return Err(Error::Config(format!("n must be even and ≥ 2 (got {n})")));
        }
        if big_n % 2 == 0 || big_n < n + 5 {
            return Err(Error::Config(format!("N must be odd and ≥ n+5 (got N={big_n}, n={n})")));
        }
        if self.qs.is_empty() {
            return Err(Error::Config("q list is empty".into()));
        }
        for &q in &self.qs {
            if !arith::is_prime(q as u64) {
                return Err(Error::Config(format!("q = {q} is not prime")));
            }
            if (q - 1) % big_n != 0 {
                return Err(Error::Config(format!("q = {q} is not ≡ 1 mod N = {big_n}")));
            }
        }
        for &q in &self.n3_qs {
            if !arith::is_prime(q as u64) || (q - 1) % 3 != 0 {
                return Err(Error::Config(format!("n3_q = {q} must be a prime ≡ 1 mod 3")));
            }
        }
        for &l in &self.signs_ls {
            if l < 5 || !arith::is_prime(l as u64) {
                return Err(Error::Config(format!("signs_l = {l} must be a prime ≥ 5")));
            }
        }
        if self.signs_dim == 0 || self.signs_dim % 2 == 1 {
            return Err(Error::Config("signs_dim must be even and positive".into()));
        }
        for &(a, b, q) in self.det_hcan_extra.iter().chain(&self.stretch) {
            if a % 2 != 0 || b % 2 == 0 || b < a + 5 || !arith::is_prime(q as u64) || (q - 1) % b != 0 {
                return Err(Error::Config(format!("invalid case n/N/q = {a}/{b}/{q}")));
            }
        }
        if self.checks.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CampaignOutcome {
    pub reports: Vec<Report>,
    /// Reports that do not affect the verdict.
    pub informational: Vec<Report>,
    pub pass: bool,
}

impl CampaignOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn summary(&self) -> Vec<(String, bool)> {
        self.reports.iter().map(|r| (r.check.clone(), r.pass)).collect()
    }
}

fn timed(cfg: &CampaignConfig, f: impl FnOnce() -> Result<Report>) -> Result<Report> {
    let start = Instant::now();
    let mut r = f()?;
    r.runtime_ms = if cfg.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    if r.seed == 0 {
        r.seed = cfg.seed;
    }
    Ok(r)
}

fn run_inner(cfg: &CampaignConfig) -> Result<CampaignOutcome> {
    let mut reports = Vec::new();
    let mut informational = Vec::new();
    let has = |k| cfg.checks.contains(&k);
    let (n, big_n) = (cfg.n, cfg.big_n);
    if has(CheckKind::Combinatorics) {
        reports.push(timed(cfg, checks::check_combinatorics)?);
    }
    if has(CheckKind::Gauss) {
        reports.push(timed(cfg, || checks::check_gauss(&[7, 13, 29]))?);
    }
    if has(CheckKind::HyperConv) {
        for &q in &cfg.qs {
            reports.push(timed(cfg, || checks::check_hyper_conv(q, n, big_n, cfg.tolerance))?);
        }
    }
    if has(CheckKind::CanonicalPaths) {
        reports.push(timed(cfg, || checks::check_canonical_paths(&cfg.qs, n, big_n))?);
    }
    if has(CheckKind::DetTrad) {
        let q = cfg.qs[0];
        reports.push(timed(cfg, || checks::check_det_trad(q, 2, cfg.det_count, cfg.seed))?);
    }
    if has(CheckKind::DetHcan) {
        let mut cases: Vec<_> = cfg.qs.iter().map(|&q| (n, big_n, q)).collect();
        cases.extend(&cfg.det_hcan_extra);
        reports.push(timed(cfg, || checks::check_det_hcan(&cases))?);
    }
    if has(CheckKind::ValidateN3) {
        for &q in &cfg.n3_qs {
            reports.push(timed(cfg, || checks::validate_n3(q, EngineOptions::default()))?);
            let ctl = timed(cfg, || {
                let corrupt = EngineOptions {
                    corrupt_weight: Some((1, 1)),
                };
                let inner = checks::validate_n3(q, corrupt)?;
                let mut r = Report::new("validate-n3-control").param("q", q);
                r.pass = !inner.pass;
                r.note(format!(
                    "corrupted engine (weight of coordinate 1 shifted by 1): oracle pass = {}",
                    inner.pass
                ));
                Ok(r)
            })?;
            reports.push(ctl);
        }
    }
    let need_katz = has(CheckKind::Katz) || has(CheckKind::Psi2);
    if need_katz {
        let opts = KatzOptions {
            tolerance: cfg.tolerance,
            ..KatzOptions::default()
        };
        let mut adjudications = Vec::new();
        for &q in &cfg.qs {
            let start = Instant::now();
            let k = katz_check(n, big_n, q, &opts)?;
            let ms = if cfg.timing {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            if has(CheckKind::Katz) {
                let mut r = k.to_report(cfg.seed);
                r.runtime_ms = ms;
                adjudications.push(r.adjudications.clone());
                reports.push(r);
            }
            if has(CheckKind::Psi2) {
                reports.push(timed(cfg, || Ok(psi2_weight_note(&k)?.to_report(cfg.seed)))?);
            }
        }
        if adjudications.len() > 1 {
            let mut r = Report::new("adjudication-consistency").param("q", &cfg.qs);
            r.pass = adjudications.windows(2).all(|w| w[0] == w[1]);
            for (q, a) in cfg.qs.iter().zip(&adjudications) {
                r.row(json!({"q": q, "adjudications": a}));
            }
            r.seed = cfg.seed;
            reports.push(r);
        }
        for &(sn, sbig, sq) in &cfg.stretch {
            let start = Instant::now();
            let k = katz_check(sn, sbig, sq, &opts)?;
            let mut r = k.to_report(cfg.seed);
            r.check = "katz-stretch".into();
            r.runtime_ms = if cfg.timing {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            informational.push(r);
        }
    }
    if has(CheckKind::Weil) {
        for &q in &cfg.qs {
            reports.push(timed(cfg, || checks::check_weil(n, big_n, q, cfg.tolerance))?);
        }
    }
    if has(CheckKind::Signs) {
        reports.push(timed(cfg, || {
            checks::check_signs(&cfg.signs_ls, cfg.signs_dim, cfg.signs_count, cfg.seed)
        })?);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(CampaignOutcome {
        reports,
        informational,
        pass,
    })
}

fn write_outputs(cfg: &CampaignConfig, out: &CampaignOutcome) -> Result<()> {
    let Some(dir) = &cfg.out else {
        return Ok(());
    };
    std::fs::create_dir_all(dir)?;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for r in out.reports.iter().chain(&out.informational) {
        let i = seen.entry(r.check.clone()).or_default();
        let name = format!("{}-{}.json", r.check, i);
        *i += 1;
        std::fs::write(dir.join(name), r.to_json())?;
    }
    if cfg.csv {
        let mut w = csv::Writer::from_path(dir.join("summary.csv")).map_err(|e| Error::Io(e.to_string()))?;
        w.write_record(["check", "params", "pass", "runtime_ms"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for r in out.reports.iter().chain(&out.informational) {
            let params = serde_json::to_string(&r.params).expect("params serialize");
            w.write_record([r.check.as_str(), &params, &r.pass.to_string(), &r.runtime_ms.to_string()])
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
    }
    Ok(())
}

/// Runs the selected checks on a bounded worker pool and writes the reports.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let out = pool.install(|| run_inner(cfg))?;
    write_outputs(cfg, &out)?;
    Ok(out)
}
