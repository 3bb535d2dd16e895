//! `ffrt`: exact Frobenius/FFRT computations over affine semigroup rings,
//! batch-oriented with deterministic JSON reports and a content-addressed
//! cache. Exit codes: 0 computed/verified, 2 inconclusive within the
//! declared bounds, 1 hard error.

mod cache;
mod jobs;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cache::Cache;
use ffrt_core::semigroup::RingSpec;
use jobs::Job;

#[derive(Parser)]
#[command(name = "ffrt", version, about = "Frobenius pushforward decompositions, FFRT certificates, unit-module roots and graded local cohomology over affine semigroup rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// ring specification file (JSON: p, n, generators, optional grading_functional)
    #[arg(long)]
    ring: PathBuf,
    /// also write the report to this path
    #[arg(long)]
    out: Option<PathBuf>,
    /// bypass the report cache
    #[arg(long)]
    no_cache: bool,
    /// cache directory (default: $FFRT_CACHE_DIR or ./.ffrt-cache)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose F^e_* R into residue-class summands
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        e: u32,
        /// enlarge the certified λ-cutoff of the generator enumeration
        #[arg(long)]
        cutoff: Option<i64>,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Isomorphism classes of F^e_* R with multiplicities
    Jset {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        e: u32,
    },
    /// Search for (a,b) with J(F^a) = J(F^{a+b}) and verify periodicity
    CertifyFfrt {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Factor summand identities between two pushforwards, both directions
    PairingCheck {
        #[command(flatten)]
        common: Common,
        /// certified levels "i,j"
        #[arg(long)]
        levels: Option<String>,
        /// raw Frobenius exponents "u,v" (no certificate needed)
        #[arg(long)]
        raw_exponents: Option<String>,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Witness-level descent equivalence between levels i and i+s
    DescentCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Verify the root axioms for a presented root
    RootCheck {
        #[command(flatten)]
        common: Common,
        /// localize the ambient at this monomial
        #[arg(long)]
        invert: Option<String>,
        /// root generators (default: the canonical root)
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long = "box")]
        degree_box: Option<String>,
        #[arg(long, default_value_t = 3)]
        e_bound: u32,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Localize the canonical ring root at a monomial and re-verify
    Localize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: String,
        #[arg(long = "box")]
        degree_box: Option<String>,
        #[arg(long, default_value_t = 3)]
        e_bound: u32,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Graded pieces, root, associated primes and support of H^i_I(R)
    Lc {
        #[command(flatten)]
        common: Common,
        /// ideal generators, e.g. "x,y" or "(1,0),(0,1)"
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        i: usize,
        #[arg(long = "box")]
        degree_box: String,
        #[arg(long, default_value_t = 3)]
        e_bound: u32,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// Iterated local cohomology H^{i1}_{I1} ∘ ... (outermost first)
    IteratedLc {
        #[command(flatten)]
        common: Common,
        /// e.g. "y@1;x@1"
        #[arg(long)]
        specs: String,
        #[arg(long = "box")]
        degree_box: String,
    },
    /// Associated primes among face primes, with witnesses
    Ass {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        specs: Option<String>,
        #[arg(long = "box")]
        degree_box: String,
    },
    /// Closed-support verification for H^i_I(R/gR)
    SupportClosed {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        g: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        i: usize,
        #[arg(long = "box")]
        degree_box: String,
    },
    /// Recompute one cache entry and compare bytes
    VerifyCache {
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

fn cache_dir_of(flag: &Option<PathBuf>) -> PathBuf {
    if let Some(d) = flag {
        return d.clone();
    }
    if let Ok(d) = std::env::var("FFRT_CACHE_DIR") {
        return PathBuf::from(d);
    }
    PathBuf::from(".ffrt-cache")
}

fn load_ring(path: &Path) -> Result<RingSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read ring file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed ring file {}: {e}", path.display()))
}

struct Prepared {
    common: Common,
    job: Job,
}

fn prepare(cli: Command) -> Result<Option<Prepared>, String> {
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    let (common, command): (Common, &str) = match cli {
        Command::Decompose { common, e, cutoff, e_max } => {
            params.insert("e".into(), json!(e));
            if let Some(c) = cutoff {
                params.insert("cutoff".into(), json!(c));
            }
            params.insert("e_max".into(), json!(e_max));
            (common, "decompose")
        }
        Command::Jset { common, e } => {
            params.insert("e".into(), json!(e));
            (common, "jset")
        }
        Command::CertifyFfrt { common, e_max } => {
            params.insert("e_max".into(), json!(e_max));
            (common, "certify-ffrt")
        }
        Command::PairingCheck { common, levels, raw_exponents, e_max } => {
            let spec = load_ring(&common.ring)?;
            let _ = spec;
            if let Some(l) = levels {
                let v = parse_u32_pair(&l)?;
                params.insert("levels".into(), json!(v));
            } else if let Some(r) = raw_exponents {
                let v = parse_u32_pair(&r)?;
                params.insert("raw_exponents".into(), json!(v));
            } else {
                return Err("pairing-check needs --levels or --raw-exponents".into());
            }
            params.insert("e_max".into(), json!(e_max));
            (common, "pairing-check")
        }
        Command::DescentCheck { common, i, s, e_max } => {
            params.insert("i".into(), json!(i));
            params.insert("s".into(), json!(s));
            params.insert("e_max".into(), json!(e_max));
            (common, "descent-check")
        }
        Command::RootCheck { common, invert, seeds, degree_box, e_bound, e_max } => {
            let spec = load_ring(&common.ring)?;
            let n = spec.n;
            if let Some(f) = invert {
                let m = jobs::parse_monomial(&f, n).map_err(|e| e.to_string())?;
                params.insert("invert".into(), json!(m));
            }
            if let Some(s) = seeds {
                let pts = jobs::parse_monomial_list(&s, n).map_err(|e| e.to_string())?;
                params.insert("seeds".into(), json!(pts));
            }
            if let Some(b) = degree_box {
                let bx = jobs::parse_box(&b, n).map_err(|e| e.to_string())?;
                params.insert("box".into(), json!(bx));
            }
            params.insert("e_bound".into(), json!(e_bound));
            params.insert("e_max".into(), json!(e_max));
            (common, "root-check")
        }
        Command::Localize { common, f, degree_box, e_bound, e_max } => {
            let spec = load_ring(&common.ring)?;
            let n = spec.n;
            let m = jobs::parse_monomial(&f, n).map_err(|e| e.to_string())?;
            params.insert("invert".into(), json!(m));
            if let Some(b) = degree_box {
                let bx = jobs::parse_box(&b, n).map_err(|e| e.to_string())?;
                params.insert("box".into(), json!(bx));
            }
            params.insert("e_bound".into(), json!(e_bound));
            params.insert("e_max".into(), json!(e_max));
            (common, "localize")
        }
        Command::Lc { common, ideal, i, degree_box, e_bound, e_max } => {
            let spec = load_ring(&common.ring)?;
            let n = spec.n;
            let gens = jobs::parse_monomial_list(&ideal, n).map_err(|e| e.to_string())?;
            let bx = jobs::parse_box(&degree_box, n).map_err(|e| e.to_string())?;
            params.insert("ideal".into(), json!(gens));
            params.insert("i".into(), json!(i));
            params.insert("box".into(), json!(bx));
            params.insert("e_bound".into(), json!(e_bound));
            params.insert("e_max".into(), json!(e_max));
            (common, "lc")
        }
        Command::IteratedLc { common, specs, degree_box } => {
            let spec = load_ring(&common.ring)?;
            let n = spec.n;
            let sp = jobs::parse_specs(&specs, n).map_err(|e| e.to_string())?;
            let bx = jobs::parse_box(&degree_box, n).map_err(|e| e.to_string())?;
            params.insert("specs".into(), json!(sp));
            params.insert("box".into(), json!(bx));
            (common, "iterated-lc")
        }
        Command::Ass { common, ideal, i, specs, degree_box } => {
            let spec = load_ring(&common.ring)?;
            let n = spec.n;
            let bx = jobs::parse_box(&degree_box, n).map_err(|e| e.to_string())?;
            params.insert("box".into(), json!(bx));
            if let Some(sp) = specs {
                let sp = jobs::parse_specs(&sp, n).map_err(|e| e.to_string())?;
                params.insert("specs".into(), json!(sp));
            } else {
                let ideal = ideal.ok_or("ass needs --ideal or --specs")?;
                let i = i.ok_or("ass needs --i with --ideal")?;
                let gens = jobs::parse_monomial_list(&ideal, n).map_err(|e| e.to_string())?;
                params.insert("ideal".into(), json!(gens));
                params.insert("i".into(), json!(i));
            }
            (common, "ass")
        }
        Command::SupportClosed { common, g, ideal, i, degree_box } => {
            let spec = load_ring(&common.ring)?;
            let n = spec.n;
            let gm = jobs::parse_monomial(&g, n).map_err(|e| e.to_string())?;
            let gens = jobs::parse_monomial_list(&ideal, n).map_err(|e| e.to_string())?;
            let bx = jobs::parse_box(&degree_box, n).map_err(|e| e.to_string())?;
            params.insert("g".into(), json!(gm));
            params.insert("ideal".into(), json!(gens));
            params.insert("i".into(), json!(i));
            params.insert("box".into(), json!(bx));
            (common, "support-closed")
        }
        Command::VerifyCache { cache_dir } => {
            return verify_cache(&cache_dir_of(&cache_dir)).map(|_| None);
        }
    };
    let ring = load_ring(&common.ring)?;
    Ok(Some(Prepared {
        common,
        job: Job {
            ring,
            command: command.to_string(),
            params,
        },
    }))
}

fn parse_u32_pair(s: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = s.split(',').map(|x| x.trim()).collect();
    if parts.len() != 2 {
        return Err(format!("`{s}` must be two comma-separated integers"));
    }
    parts
        .iter()
        .map(|x| x.parse::<u32>().map_err(|_| format!("bad integer `{x}`")))
        .collect()
}

fn verify_cache(dir: &Path) -> Result<(), String> {
    let cache = Cache::new(dir).map_err(|e| e.to_string())?;
    let keys = cache.keys();
    if keys.is_empty() {
        println!("{{\"verify_cache\": \"empty\"}}");
        return Ok(());
    }
    // deterministic arbitrary pick: hash of the key list
    let mut acc: u64 = 0;
    for k in &keys {
        for b in k.bytes() {
            acc = acc.wrapping_mul(131).wrapping_add(b as u64);
        }
    }
    let key = &keys[(acc % keys.len() as u64) as usize];
    let stored = cache.get(key).ok_or("selected entry vanished")?;
    let job_text = cache.job_for(key).ok_or("missing job sidecar")?;
    let job: Job = serde_json::from_str(
        serde_json::from_str::<Value>(&job_text)
            .map_err(|e| e.to_string())?
            .to_string()
            .as_str(),
    )
    .or_else(|_| extract_job(&job_text))
    .map_err(|e| format!("cannot parse cached job: {e}"))?;
    let (bytes, _code) = jobs::execute(&job).map_err(|e| e.to_string())?;
    if bytes == stored {
        println!("{{\"verify_cache\": \"ok\", \"key\": \"{key}\"}}");
        Ok(())
    } else {
        Err(format!("cache entry {key} differs from recomputation"))
    }
}

fn extract_job(text: &str) -> Result<Job, serde_json::Error> {
    // the canonical job embeds ring/command/params beside version fields
    #[derive(serde::Deserialize)]
    struct Canonical {
        ring: RingSpec,
        command: String,
        params: BTreeMap<String, Value>,
    }
    let c: Canonical = serde_json::from_str(text)?;
    Ok(Job {
        ring: c.ring,
        command: c.command,
        params: c.params,
    })
}

fn main() -> ExitCode {
    // exit 1 for every operational error, including bad usage; exit 2 is
    // reserved for mathematically inconclusive outcomes
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let prepared = match prepare(cli.command) {
        Ok(Some(p)) => p,
        Ok(None) => return ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let job = &prepared.job;
    let canonical = job.canonical();
    let key = Cache::key_for(&canonical);
    let use_cache = !prepared.common.no_cache;
    let dir = cache_dir_of(&prepared.common.cache_dir);
    let cached: Option<Vec<u8>> = if use_cache {
        Cache::new(&dir).ok().and_then(|c| c.get(&key))
    } else {
        None
    };
    let (bytes, code) = match cached {
        Some(bytes) => {
            let code = exit_code_from_report(&bytes);
            (bytes, code)
        }
        None => match jobs::execute(job) {
            Ok((bytes, code)) => {
                if use_cache {
                    if let Ok(c) = Cache::new(&dir) {
                        let _ = c.put(&key, &bytes, &canonical);
                    }
                }
                (bytes, code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    if let Some(path) = &prepared.common.out {
        if let Err(e) = std::fs::write(path, &bytes) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    print!("{}", String::from_utf8_lossy(&bytes));
    match code {
        0 => ExitCode::SUCCESS,
        c => ExitCode::from(c as u8),
    }
}

fn exit_code_from_report(bytes: &[u8]) -> i32 {
    let Ok(v) = serde_json::from_slice::<Value>(bytes) else {
        return 1;
    };
    match v["result"]["status"].as_str() {
        Some("ok") => 0,
        Some(_) => 2,
        None => 0,
    }
}
