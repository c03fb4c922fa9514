//! `zarex`: extremal counts for forbidden 0-1 submatrices (`ex`) and
//! measure-extremal open grid regions avoiding forbidden planar
//! patterns (`px-search`), with constructions, named verification
//! checks, and a JSON-lines result cache.

mod cache;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zarex_core::record::{CheckReport, ExtremalRecord};
use zarex_core::{
    constructions, grid, matrix::BitMatrix, pattern::Pattern, rat::Rat, solver, verify, Config,
    Error, GridRegion,
};

use cache::{Cache, CachedRecord};

const EXIT_HELP: &str = "Exit codes:
  0  success (for `verify`: every check passed)
  1  one or more verification checks failed
  2  invalid input: malformed JSON, schema mismatch, bad rational, bad parameters
  3  desk-scale guard exceeded (use a heuristic mode or smaller sizes)
  4  unknown check id
  5  I/O error";

#[derive(Parser)]
#[command(name = "zarex", version, about, after_help = EXIT_HELP)]
struct Cli {
    /// Worker threads for independent verification jobs.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Cache directory (default: $ZAREX_CACHE_DIR or ./.zarex).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Disable reading and writing the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Extremal ones count for a forbidden matrix.
    Ex(ExArgs),
    /// Measure-maximizing avoiding region search.
    PxSearch(PxArgs),
    /// Emit one of the explicit constructions as JSON.
    Construct(ConstructArgs),
    /// Run named verification checks.
    Verify(VerifyArgs),
    /// Export cached results.
    Report(ReportArgs),
    /// Inspect or clear the result cache.
    Cache(CacheArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExMode {
    Exact,
    Heuristic,
    RandomDeletion,
}

#[derive(Args)]
struct ExArgs {
    /// Forbidden matrix JSON file (unused by random-deletion).
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    n: u32,
    /// Dimension; defaults to the matrix's own dimension.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, value_enum, default_value_t = ExMode::Exact)]
    mode: ExMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Forbid the r-by-r all-ones block (random-deletion only).
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Sampling probability as a rational like 1/16 (random-deletion).
    #[arg(long)]
    p: Option<String>,
    /// Restrict the exact search to non-increasing rows. Sound only for
    /// patterns invariant under row permutations; recorded on the output.
    #[arg(long)]
    lex_rows: bool,
}

#[derive(Args)]
struct PxArgs {
    /// Forbidden pattern JSON file.
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value = "exact")]
    method: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ConstructArgs {
    /// strip | lshape | from-matrix | grid-pattern | lift
    #[arg(long)]
    kind: String,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    region: Option<PathBuf>,
    /// qr (rational grid in [0,c]^2) or hr (integer grid).
    #[arg(long, default_value = "hr")]
    grid_kind: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// A check id or `all`; see `--list`.
    #[arg(long, default_value = "all")]
    check: String,
    /// Parameter overrides as key=value.
    #[arg(long = "params", value_name = "K=V")]
    params: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Recompute the committed fixtures and write them to --out.
    #[arg(long)]
    regen_fixtures: bool,
    /// Output path for --regen-fixtures.
    #[arg(long, default_value = "fixtures.json")]
    out: PathBuf,
    /// List available check ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct CacheArgs {
    /// clear | list | path
    action: String,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::GuardExceeded(_) => 3,
        Error::UnknownCheck(_) => 4,
        _ => 2,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(&err))
}

fn fail_io(err: std::io::Error) -> ExitCode {
    eprintln!("I/O error: {err}");
    ExitCode::from(5)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(fail_io)?;
    serde_json::from_str(&text).map_err(|e| {
        eprintln!("error: {} is not valid: {e}", path.display());
        ExitCode::from(2)
    })
}

fn parse_rat(s: &str) -> Result<Rat, ExitCode> {
    s.parse::<Rat>().map_err(fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = Cache::resolve(cli.cache_dir.clone(), !cli.no_cache);
    let cfg = Config::default();
    match cli.cmd {
        Cmd::Ex(args) => run_ex(args, &cache, &cfg),
        Cmd::PxSearch(args) => run_px(args, &cache, &cfg),
        Cmd::Construct(args) => run_construct(args),
        Cmd::Verify(args) => run_verify(args, &cache, &cfg, cli.threads),
        Cmd::Report(args) => run_report(args, &cache),
        Cmd::Cache(args) => run_cache(args, &cache),
    }
}

fn emit_record(record: &ExtremalRecord) {
    println!("{}", serde_json::to_string(record).expect("records serialize"));
}

fn run_ex(args: ExArgs, cache: &Cache, cfg: &Config) -> ExitCode {
    let mode_name = match args.mode {
        ExMode::Exact => "exact",
        ExMode::Heuristic => "heuristic",
        ExMode::RandomDeletion => "random-deletion",
    };
    let matrix: Option<BitMatrix> = match &args.matrix {
        Some(path) => match read_json(path) {
            Ok(m) => Some(m),
            Err(code) => return code,
        },
        None => None,
    };
    if args.mode != ExMode::RandomDeletion && matrix.is_none() {
        eprintln!("error: --matrix is required for mode {mode_name}");
        return ExitCode::from(2);
    }
    let p = match &args.p {
        None => None,
        Some(s) => match parse_rat(s) {
            Ok(r) => Some(r),
            Err(code) => return code,
        },
    };
    let key = cache::cache_key(&serde_json::json!({
        "op": "ex",
        "matrix": matrix,
        "n": args.n,
        "d": args.d,
        "mode": mode_name,
        "seed": args.seed,
        "r": args.r,
        "p": p.map(|r| r.to_string()),
        "lex_rows": args.lex_rows,
    }));
    if let Some(CachedRecord::Extremal(rec)) = cache.lookup(&key) {
        emit_record(&rec);
        return ExitCode::SUCCESS;
    }
    let result = match args.mode {
        ExMode::Exact => {
            let m = matrix.expect("checked above");
            let d = args.d.unwrap_or(m.dim() as u32);
            solver::ex_exact_opts(args.n, &m, d, cfg, args.lex_rows)
        }
        ExMode::Heuristic => {
            let m = matrix.expect("checked above");
            let d = args.d.unwrap_or(m.dim() as u32);
            solver::ex_lower_heuristic(args.n, &m, d, args.seed, cfg)
        }
        ExMode::RandomDeletion => {
            solver::ex_lower_random_deletion(args.n, args.r, p, args.seed, cfg)
        }
    };
    match result {
        Ok(rec) => {
            if let Err(e) = cache.append(&key, CachedRecord::Extremal(rec.clone())) {
                eprintln!("warning: cache append failed: {e}");
            }
            emit_record(&rec);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn run_px(args: PxArgs, cache: &Cache, cfg: &Config) -> ExitCode {
    let pattern: Pattern = match read_json(&args.pattern) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let method: grid::SearchMethod = match args.method.parse() {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let key = cache::cache_key(&serde_json::json!({
        "op": "px-search",
        "pattern": pattern,
        "n": args.n,
        "r": args.r,
        "method": args.method,
        "seed": args.seed,
    }));
    if let Some(CachedRecord::Extremal(rec)) = cache.lookup(&key) {
        emit_record(&rec);
        return ExitCode::SUCCESS;
    }
    match grid::px_lower_search(args.n, args.r, &pattern, method, args.seed, cfg) {
        Ok(rec) => {
            if let Err(e) = cache.append(&key, CachedRecord::Extremal(rec.clone())) {
                eprintln!("warning: cache append failed: {e}");
            }
            emit_record(&rec);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn run_construct(args: ConstructArgs) -> ExitCode {
    fn required<T>(v: Option<T>, name: &str) -> Result<T, ExitCode> {
        v.ok_or_else(|| {
            eprintln!("error: --{name} is required for this construction");
            ExitCode::from(2)
        })
    }
    let out: Result<String, ExitCode> = (|| {
        match args.kind.as_str() {
            "strip" => {
                let c = parse_rat(&required(args.c.clone(), "c")?)?;
                let n = parse_rat(&required(args.n.clone(), "n")?)?;
                let r = required(args.r, "r")?;
                let region = constructions::strip(c, n, r).map_err(fail)?;
                Ok(serde_json::to_string(&region).expect("serializes"))
            }
            "lshape" => {
                let a = parse_rat(&required(args.a.clone(), "a")?)?;
                let b = parse_rat(&required(args.b.clone(), "b")?)?;
                let n = parse_rat(&required(args.n.clone(), "n")?)?;
                let r = required(args.r, "r")?;
                let region = constructions::lshape(a, b, n, r).map_err(fail)?;
                Ok(serde_json::to_string(&region).expect("serializes"))
            }
            "from-matrix" => {
                let path = required(args.matrix.clone(), "matrix")?;
                let m: BitMatrix = read_json(&path)?;
                let c = parse_rat(&required(args.c.clone(), "c")?)?;
                let n = parse_rat(&required(args.n.clone(), "n")?)?;
                let region = constructions::region_from_matrix(&m, c, n).map_err(fail)?;
                Ok(serde_json::to_string(&region).expect("serializes"))
            }
            "grid-pattern" => {
                let r = required(args.r, "r")?;
                let pattern = match args.grid_kind.as_str() {
                    "hr" => constructions::grid_pattern_integer(r).map_err(fail)?,
                    "qr" => {
                        let c = parse_rat(&required(args.c.clone(), "c")?)?;
                        constructions::grid_pattern_rational(r, c).map_err(fail)?
                    }
                    other => {
                        eprintln!("error: unknown grid kind {other:?} (hr|qr)");
                        return Err(ExitCode::from(2));
                    }
                };
                Ok(serde_json::to_string(&Pattern::Finite(pattern)).expect("serializes"))
            }
            "lift" => {
                let path = required(args.region.clone(), "region")?;
                let region: GridRegion = read_json(&path)?;
                let lifted = constructions::product_lift(&region).map_err(fail)?;
                Ok(serde_json::to_string(&lifted).expect("serializes"))
            }
            other => {
                eprintln!(
                    "error: unknown construction {other:?} (strip|lshape|from-matrix|grid-pattern|lift)"
                );
                Err(ExitCode::from(2))
            }
        }
    })();
    match out {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(code) => code,
    }
}

fn parse_param_overrides(items: &[String]) -> Result<BTreeMap<String, String>, ExitCode> {
    let mut map = BTreeMap::new();
    for item in items {
        match item.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => {
                eprintln!("error: parameter {item:?} is not of the form key=value");
                return Err(ExitCode::from(2));
            }
        }
    }
    Ok(map)
}

fn run_verify(args: VerifyArgs, cache: &Cache, cfg: &Config, threads: usize) -> ExitCode {
    if args.list {
        for id in verify::CHECK_IDS {
            println!("{id}");
        }
        return ExitCode::SUCCESS;
    }
    if args.regen_fixtures {
        let fixtures = verify::regenerate_fixtures(6);
        let text = verify::fixtures_canonical_json(&fixtures);
        if let Err(e) = std::fs::write(&args.out, text) {
            return fail_io(e);
        }
        eprintln!("fixtures written to {}", args.out.display());
        return ExitCode::SUCCESS;
    }
    let params = match parse_param_overrides(&args.params) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let reports: Result<Vec<CheckReport>, Error> = if args.check == "all" {
        let ids: Vec<&str> = verify::CHECK_IDS.to_vec();
        if threads > 1 {
            // Independent jobs; the output order is the registry order
            // regardless of scheduling.
            let mut slots: Vec<Option<Result<Vec<CheckReport>, Error>>> =
                (0..ids.len()).map(|_| None).collect();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for (i, id) in ids.iter().enumerate() {
                    let params = params.clone();
                    let seed = args.seed;
                    handles.push((
                        i,
                        scope.spawn(move || verify::run_check(id, &params, seed, cfg)),
                    ));
                }
                for (i, handle) in handles {
                    slots[i] = Some(handle.join().expect("check job panicked"));
                }
            });
            slots
                .into_iter()
                .map(|s| s.expect("all jobs joined"))
                .try_fold(Vec::new(), |mut acc, r| {
                    acc.extend(r?);
                    Ok(acc)
                })
        } else {
            verify::run_all(args.seed, cfg)
        }
    } else {
        verify::run_check(&args.check, &params, args.seed, cfg)
    };
    match reports {
        Ok(reports) => {
            println!("{}", serde_json::to_string(&reports).expect("reports serialize"));
            for rep in &reports {
                if let Err(e) = cache.append(
                    &cache::cache_key(&serde_json::json!({
                        "op": "verify",
                        "check_id": rep.check_id,
                        "params": rep.params,
                        "seed": args.seed,
                    })),
                    CachedRecord::Check(rep.clone()),
                ) {
                    eprintln!("warning: cache append failed: {e}");
                }
            }
            if reports.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                for rep in reports.iter().filter(|r| !r.pass) {
                    eprintln!(
                        "FAIL {}: {} {} {}",
                        rep.check_id,
                        rep.lhs,
                        serde_json::to_string(&rep.relation).unwrap_or_default(),
                        rep.rhs
                    );
                }
                ExitCode::from(1)
            }
        }
        Err(e) => fail(e),
    }
}

fn run_report(args: ReportArgs, cache: &Cache) -> ExitCode {
    if args.format != "csv" {
        eprintln!("error: unsupported report format {:?} (csv)", args.format);
        return ExitCode::from(2);
    }
    print!("{}", cache::to_csv(&cache.entries()));
    ExitCode::SUCCESS
}

fn run_cache(args: CacheArgs, cache: &Cache) -> ExitCode {
    match args.action.as_str() {
        "clear" => match cache.clear() {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail_io(e),
        },
        "list" => {
            for entry in cache.entries() {
                let what = match &entry.record {
                    CachedRecord::Extremal(r) => {
                        format!("extremal n={} d={} value={}", r.n, r.d, r.value)
                    }
                    CachedRecord::Check(c) => {
                        format!("check {} pass={}", c.check_id, c.pass)
                    }
                };
                println!("{}  {}  {}", &entry.key[..16], entry.created_at, what);
            }
            ExitCode::SUCCESS
        }
        "path" => {
            println!("{}", cache.file().display());
            ExitCode::SUCCESS
        }
        other => {
            eprintln!("error: unknown cache action {other:?} (clear|list|path)");
            ExitCode::from(2)
        }
    }
}
