//! The `bolforge` command line.
//!
//! Every subcommand is a function from parsed arguments to an exit status;
//! `main` only wires up the process. Exit statuses:
//!
//! | status | meaning |
//! |---|---|
//! | 0 | success (valid loop, no refutations, search finished) |
//! | 1 | a claim was refuted, or a smoke test failed |
//! | 2 | bad input: parse error, invalid spec, unreadable manifest |
//! | 3 | search budget exhausted |
//! | 4 | find: the exhausted search space holds no witness |

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use bolforge_core::harness::{self, ClaimChecker, ClaimId, CorpusManifest};
use bolforge_core::props::{self, PropertyReport, Verdict};
use bolforge_core::search::{
    self, approximate_canonical_form, canonical_form, construct_bruck_from_group, ClassConstraint, Limits,
    SearchError, SearchResult, SearchSpec, Target, MAX_EXACT_ORDER,
};
use bolforge_core::{groups, parse_loop, LoopTable};
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NOT_FOUND: i32 = 4;

pub const BUDGET_ENV: &str = "BOLFORGE_BUDGET_NODES";

#[derive(Debug, Parser)]
#[command(name = "bolforge", version, about = "Finite loop workbench: properties, commutants, Bol loop search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a loop file and print every property verdict.
    Check { file: PathBuf },
    /// Print the full property report as JSON.
    Props { file: PathBuf },
    /// Print the commutant C(L).
    Commutant { file: PathBuf },
    /// Print the center Z(L).
    Center { file: PathBuf },
    /// Check claims over every loop listed in a manifest.
    Verify {
        manifest: PathBuf,
        /// Comma-separated claim ids (default: all).
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all loops of an order up to isomorphism.
    Enumerate(SearchArgs),
    /// Find the first loop satisfying a target predicate.
    Find {
        #[command(flatten)]
        search: SearchArgs,
        /// commutant-not-subloop | conjecture-witness
        #[arg(long, visible_alias = "find")]
        target: String,
    },
    /// Build the odd-order Bol loop x∘y = (x·y²·x)^(1/2) from a group.
    Construct {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        group: Option<PathBuf>,
        /// z<n>, klein4, s3, z7:z3, z<p>:z<q>:<r>
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the canonical form of a loop, or run a randomized smoke test.
    Canon {
        #[arg(required_unless_present = "smoke")]
        file: Option<PathBuf>,
        /// Number of random relabelings to check.
        #[arg(long)]
        smoke: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub order: usize,
    /// none | left-bol | right-bol | moufang | associative
    #[arg(long, default_value = "none")]
    pub class: String,
    /// Drop groups from the results.
    #[arg(long)]
    pub nonassociative: bool,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    #[arg(long)]
    pub max_seconds: Option<u64>,
    #[arg(long)]
    pub no_iso_pruning: bool,
}

/// Output streams and the claim checker used by `verify`.
pub struct Env<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub checker: &'a dyn ClaimChecker,
}

pub fn run(cli: Cli, env: &mut Env<'_>) -> i32 {
    let result = match cli.command {
        Command::Check { file } => cmd_check(&file, env),
        Command::Props { file } => cmd_props(&file, env),
        Command::Commutant { file } => cmd_set(&file, env, props::commutant),
        Command::Center { file } => cmd_set(&file, env, props::center),
        Command::Verify { manifest, claims, out } => cmd_verify(&manifest, &claims, out.as_deref(), env),
        Command::Enumerate(args) => cmd_search(&args, None, env),
        Command::Find { search, target } => cmd_search(&search, Some(&target), env),
        Command::Construct { group, builtin, out } => cmd_construct(group.as_deref(), builtin.as_deref(), out.as_deref(), env),
        Command::Canon { file, smoke, seed } => match smoke {
            Some(count) => cmd_smoke(count, seed, env),
            None => cmd_canon(file.as_deref().expect("clap requires a file"), env),
        },
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(env.stderr, "error: {e:#}");
        EXIT_INVALID
    })
}

type CmdResult = anyhow::Result<i32>;

fn invalid(env: &mut Env<'_>, msg: impl std::fmt::Display) -> CmdResult {
    writeln!(env.stderr, "error: {msg}")?;
    Ok(EXIT_INVALID)
}

/// Reads and parses a loop file; parse failures are reported with the
/// file name and yield `Err(exit status)`.
fn load(path: &Path, env: &mut Env<'_>) -> anyhow::Result<Result<LoopTable, i32>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return invalid(env, format!("{}: {e}", path.display())).map(Err),
    };
    match parse_loop(&text) {
        Ok(l) => Ok(Ok(l)),
        Err(e) => invalid(env, format!("{}: {e}", path.display())).map(Err),
    }
}

fn loop_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_check(file: &Path, env: &mut Env<'_>) -> CmdResult {
    let l = match load(file, env)? {
        Ok(l) => l,
        Err(code) => return Ok(code),
    };
    writeln!(env.stdout, "valid loop: order {}, identity {}", l.order(), l.identity())?;
    let report = PropertyReport::compute(loop_id(file), &l);
    for (name, verdict) in &report.properties {
        match verdict {
            Verdict::Holds => writeln!(env.stdout, "{name}: holds")?,
            Verdict::Fails(ws) => {
                let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                writeln!(env.stdout, "{name}: fails {}", shown.join(" "))?;
            }
        }
    }
    for (name, set) in &report.sets {
        writeln!(env.stdout, "{name}: {set}")?;
    }
    for note in &report.notes {
        writeln!(env.stdout, "note: {note}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_props(file: &Path, env: &mut Env<'_>) -> CmdResult {
    let l = match load(file, env)? {
        Ok(l) => l,
        Err(code) => return Ok(code),
    };
    writeln!(env.stdout, "{}", PropertyReport::compute(loop_id(file), &l).to_json())?;
    Ok(EXIT_OK)
}

fn cmd_set(file: &Path, env: &mut Env<'_>, f: fn(&LoopTable) -> bolforge_core::ElementSubset) -> CmdResult {
    let l = match load(file, env)? {
        Ok(l) => l,
        Err(code) => return Ok(code),
    };
    writeln!(env.stdout, "{}", f(&l))?;
    Ok(EXIT_OK)
}

fn cmd_verify(manifest: &Path, claims: &[String], out: Option<&Path>, env: &mut Env<'_>) -> CmdResult {
    let claims = if claims.is_empty() {
        ClaimId::ALL.to_vec()
    } else {
        let mut ids = Vec::new();
        for c in claims {
            match ClaimId::parse(c) {
                Some(id) => ids.push(id),
                None => return invalid(env, format!("unknown claim `{c}`")),
            }
        }
        ids
    };
    let manifest = match CorpusManifest::load(manifest) {
        Ok(m) => m,
        Err(e) => return invalid(env, e),
    };
    let report = harness::run_corpus(&manifest, &claims, env.checker);
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => writeln!(env.stdout, "{json}")?,
    }
    let c = &report.counts;
    writeln!(
        env.stderr,
        "{} loops: {} verified, {} hypothesis not met, {} refuted, {} unreadable",
        report.loops.len(),
        c.verified,
        c.hypothesis_not_met,
        c.refuted,
        c.parse_errors
    )?;
    for m in &report.mismatches {
        writeln!(env.stderr, "expectation mismatch: {m}")?;
    }
    Ok(report.exit_code())
}

/// Node budget: the flag, else the environment variable, else the default.
fn node_budget(flag: Option<u64>) -> anyhow::Result<u64> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{BUDGET_ENV}={v} is not a node count")),
        Err(_) => Ok(search::DEFAULT_MAX_NODES),
    }
}

fn build_spec(args: &SearchArgs, target: Option<&str>) -> Result<SearchSpec, String> {
    let class = ClassConstraint::parse(&args.class).ok_or_else(|| format!("unknown class `{}`", args.class))?;
    let mut spec = match target {
        None => SearchSpec::enumerate(args.order, class),
        Some(t) => SearchSpec::find(args.order, class, Target::parse(t).ok_or_else(|| format!("unknown target `{t}`"))?),
    };
    if args.nonassociative {
        spec = spec.nonassociative();
    }
    if args.no_iso_pruning {
        spec = spec.without_isomorphism_pruning();
    }
    let workers = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let max_nodes = node_budget(args.max_nodes).map_err(|e| format!("{e:#}"))?;
    let max_wall = args.max_seconds.map_or(search::DEFAULT_MAX_WALL, Duration::from_secs);
    spec = spec.with_workers(workers).with_limits(Limits { max_nodes, max_wall });
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

/// First 16 hex digits of the SHA-256 of the table text.
pub fn file_name(l: &LoopTable) -> String {
    let digest = Sha256::digest(l.to_text().as_bytes());
    format!("{}.loop", &hex::encode(digest)[..16])
}

fn cmd_search(args: &SearchArgs, target: Option<&str>, env: &mut Env<'_>) -> CmdResult {
    let spec = match build_spec(args, target) {
        Ok(s) => s,
        Err(msg) => return invalid(env, msg),
    };
    let started = Instant::now();
    let outcome = if target.is_some() {
        search::find_first(&spec)
    } else {
        search::enumerate(&spec)
    };
    let elapsed = started.elapsed();
    let (code, result) = match outcome {
        Ok(r) => (EXIT_OK, r),
        Err(SearchError::BudgetExhausted { partial }) => (EXIT_BUDGET, *partial),
        Err(SearchError::NotFound { stats }) => (
            EXIT_NOT_FOUND,
            SearchResult {
                representatives: Vec::new(),
                witnesses: Vec::new(),
                stats,
                exhausted: true,
            },
        ),
        Err(e @ SearchError::InvalidSpec(_)) => return invalid(env, e),
        Err(e @ SearchError::VerificationFailed(_)) => anyhow::bail!(e),
    };

    let files = match &args.out {
        Some(dir) => write_results(dir, &spec, &result, code, elapsed)?,
        None => {
            for l in &result.representatives {
                writeln!(env.stdout, "{}", l.to_text())?;
            }
            Vec::new()
        }
    };
    for w in &result.witnesses {
        let tuples: Vec<String> = w.tuples.iter().map(|t| t.to_string()).collect();
        writeln!(env.stdout, "witness {}: {}", file_name(&w.table), tuples.join(" "))?;
    }
    let status = match code {
        EXIT_OK if target.is_some() => "found",
        EXIT_OK => "exhausted",
        EXIT_BUDGET => "budget exhausted",
        _ => "not found (search exhausted)",
    };
    writeln!(
        env.stderr,
        "{status}: {} representatives, {} nodes, {} files",
        result.representatives.len(),
        result.stats.nodes,
        files.len()
    )?;
    Ok(code)
}

fn write_results(
    dir: &Path,
    spec: &SearchSpec,
    result: &SearchResult,
    code: i32,
    elapsed: Duration,
) -> anyhow::Result<Vec<String>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    for l in &result.representatives {
        let name = file_name(l);
        std::fs::write(dir.join(&name), l.to_text()).with_context(|| format!("writing {name}"))?;
        files.push(name);
    }
    let witnesses: Vec<serde_json::Value> = result
        .witnesses
        .iter()
        .map(|w| serde_json::json!({ "file": file_name(&w.table), "tuples": w.tuples }))
        .collect();
    let finished = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
    let stats = serde_json::json!({
        "spec": spec,
        "exit-status": code,
        "exhausted": result.exhausted,
        "representatives": files,
        "witnesses": witnesses,
        "stats": result.stats,
        "elapsed-seconds": elapsed.as_secs_f64(),
        "finished-unix-seconds": finished.as_secs(),
    });
    let text = serde_json::to_string_pretty(&stats)? + "\n";
    std::fs::write(dir.join("stats.json"), text).context("writing stats.json")?;
    Ok(files)
}

fn cmd_construct(group: Option<&Path>, builtin: Option<&str>, out: Option<&Path>, env: &mut Env<'_>) -> CmdResult {
    let g = match (group, builtin) {
        (Some(path), _) => match load(path, env)? {
            Ok(l) => l,
            Err(code) => return Ok(code),
        },
        (None, Some(name)) => match groups::by_name(name) {
            Some(g) => g,
            None => return invalid(env, format!("unknown builtin group `{name}`")),
        },
        (None, None) => return invalid(env, "one of --group or --builtin is required"),
    };
    let l = match construct_bruck_from_group(&g) {
        Ok(l) => l,
        Err(e) => return invalid(env, e),
    };
    match out {
        Some(path) => std::fs::write(path, l.to_text()).with_context(|| format!("writing {}", path.display()))?,
        None => write!(env.stdout, "{}", l.to_text())?,
    }
    Ok(EXIT_OK)
}

fn cmd_canon(file: &Path, env: &mut Env<'_>) -> CmdResult {
    let l = match load(file, env)? {
        Ok(l) => l,
        Err(code) => return Ok(code),
    };
    let form = approximate_canonical_form(&l);
    if !form.exact {
        writeln!(env.stderr, "note: labeling budget reached; form is not guaranteed canonical")?;
    }
    write!(env.stdout, "{}", form.table.to_text())?;
    Ok(EXIT_OK)
}

/// Random relabelings of small builtin groups and Bruck loops must keep
/// their canonical form.
fn cmd_smoke(count: usize, seed: u64, env: &mut Env<'_>) -> CmdResult {
    let mut pool: Vec<LoopTable> = ["z2", "z3", "klein4", "z5", "s3", "z6", "z7", "z9"]
        .iter()
        .filter_map(|name| groups::by_name(name))
        .collect();
    pool.extend(groups::by_name("z3:z3:1").and_then(|g| construct_bruck_from_group(&g).ok()));
    pool.retain(|l| l.order() <= MAX_EXACT_ORDER);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for i in 0..count {
        let l = &pool[rng.gen_range(0..pool.len())];
        let mut perm: Vec<usize> = (0..l.order()).collect();
        perm.shuffle(&mut rng);
        let moved = l.relabel(&perm)?;
        let (a, b) = (canonical_form(l)?, canonical_form(&moved)?);
        if a != b || canonical_form(&a)? != a {
            failures += 1;
            writeln!(env.stderr, "case {i}: relabeling {perm:?} changed the canonical form")?;
        }
    }
    writeln!(env.stdout, "{count} cases, {failures} failures (seed {seed})")?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_REFUTED })
}
