use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperfocus_core::arcs::{self, Arc, FocusKind};
use hyperfocus_core::canon;
use hyperfocus_core::conics;
use hyperfocus_core::construct::{ConstructError, Params, Registry};
use hyperfocus_core::field::parse_modulus;
use hyperfocus_core::{plane, FieldCtx, ProjLine};
use hyperfocus_search::record::ArcRecord;
use hyperfocus_search::{run_search, SearchConfig, SearchError};

mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const CONFIG_MISMATCH: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
    pub const IO: u8 = 74;
    pub const INCOMPLETE: u8 = 75;
}

#[derive(Parser)]
#[command(
    name = "hyperfocus",
    version,
    about = "Search and check hyperfocused arcs in PG(2, 2^s)"
)]
struct Cli {
    /// Extension degree of the field GF(2^s).
    #[arg(long, global = true, default_value_t = 5)]
    s: u32,
    /// Defining polynomial as a hex bitmask, e.g. 0x25.
    #[arg(long, global = true, value_parser = modulus_arg)]
    modulus: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

fn modulus_arg(s: &str) -> Result<u32, String> {
    parse_modulus(s).ok_or_else(|| format!("{s:?} is not a polynomial bitmask"))
}

#[derive(Subcommand)]
enum Command {
    /// Classify hyperfocused k-arcs on Z = 0.
    Search(SearchArgs),
    /// Re-check every arc record in a JSONL file (stdin by default).
    Verify(InputArgs),
    /// Build a known arc and print it as a record.
    Construct(ConstructArgs),
    /// Group arc records into equivalence classes.
    Classify(InputArgs),
    /// Print the power table of the field.
    FieldDump,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, env = "HYPERFOCUS_THREADS")]
    workers: Option<usize>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    max_shards: Option<usize>,
}

#[derive(Args)]
struct InputArgs {
    /// JSONL file, or - for stdin.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Args)]
struct ConstructArgs {
    name: String,
    #[arg(long)]
    gens: Option<String>,
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    i: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    basis: Option<String>,
    /// Also check this many exterior lines, spread over the plane.
    #[arg(long, default_value_t = 0)]
    sample_lines: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn field(cli: &Cli) -> Result<FieldCtx, Failure> {
    let r = match cli.modulus {
        Some(m) => FieldCtx::new(cli.s, m),
        None => FieldCtx::with_default_modulus(cli.s),
    };
    r.map_err(|e| Failure::new(exit::USAGE, e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    let result = match &cli.command {
        Command::Search(a) => cmd_search(&cli, a),
        Command::Verify(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(&cli, a),
        Command::Classify(a) => cmd_classify(a),
        Command::FieldDump => cmd_field_dump(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("hyperfocus: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_search(cli: &Cli, a: &SearchArgs) -> CmdResult {
    if !a.k.is_multiple_of(2) || a.k < 4 {
        return Err(Failure::new(
            exit::USAGE,
            format!(
                "--k {} must be even and at least 4: candidates are built from vertical pairs",
                a.k
            ),
        ));
    }
    let ctx = field(cli)?;
    let workers = a
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let config = SearchConfig {
        workers,
        checkpoint: a.checkpoint.clone(),
        output: a.out.clone(),
        max_shards: a.max_shards,
    };
    log::info!("searching k={} over GF({}) with {} workers", a.k, ctx.q(), workers);
    let report = run_search(&ctx, a.k, &config).map_err(|e| {
        let code = match e {
            SearchError::UnsupportedField(_) | SearchError::UnsupportedTarget(_) => exit::USAGE,
            SearchError::Io { .. } => exit::IO,
            SearchError::ConfigMismatch(_) => exit::CONFIG_MISMATCH,
            SearchError::BadCheckpoint { .. } => exit::DATA,
        };
        Failure::new(code, e.to_string())
    })?;
    let mut out = io::stdout().lock();
    for line in report.summary_lines() {
        let _ = writeln!(out, "{line}");
    }
    for u in &report.unsound {
        eprintln!("unsound: {u}");
    }
    for f in report.found.iter().filter(|f| !f.failures.is_empty()) {
        eprintln!("unverified {:?}: {}", f.arc.indices(&ctx), f.failures.join("; "));
    }
    Ok(if !report.complete {
        exit::INCOMPLETE
    } else if report.verify_failures() > 0 {
        exit::FAILED
    } else {
        exit::OK
    })
}

fn read_input(input: &str) -> Result<Vec<(usize, String)>, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin()
            .lock()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(exit::IO, format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(input).map_err(|e| Failure::new(exit::IO, format!("{input}: {e}")))?
    };
    Ok(io::Cursor::new(text)
        .lines()
        .map_while(Result::ok)
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect())
}

fn malformed(line: usize, e: impl std::fmt::Display) -> Failure {
    Failure::new(exit::DATA, format!("line {line}: {e}"))
}

fn cmd_verify(a: &InputArgs) -> CmdResult {
    let mut flagged = 0;
    let mut total = 0;
    let mut out = io::stdout().lock();
    for (n, line) in read_input(&a.input)? {
        let rec = ArcRecord::parse(&line).map_err(|e| malformed(n, e))?;
        let ctx = rec.field().map_err(|e| malformed(n, e))?;
        let pts = rec.points(&ctx).map_err(|e| malformed(n, e))?;
        let focus_line = rec.focus_line(&ctx).map_err(|e| malformed(n, e))?;
        total += 1;
        let arc = match Arc::new(&ctx, pts) {
            Ok(arc) => arc,
            Err(e) => {
                flagged += 1;
                let _ = writeln!(out, "record={n} is_arc=false reason=\"{e}\"");
                continue;
            }
        };
        let mut fields = vec![format!("record={n}"), "is_arc=true".into(), format!("k={}", arc.k())];
        let mut ok = true;
        match focus_line {
            Some(l) => {
                if !arc.is_exterior(&ctx, &l) {
                    fields.push("exterior=false".into());
                    ok = false;
                } else {
                    let v = arcs::classify_focus(&ctx, &arc, &l).expect("exterior line");
                    fields.push(format!("focus_count={}", v.focus_count));
                    fields.push(format!("verdict={}", v.kind.as_str()));
                    let claimed = rec.verdict.as_deref().unwrap_or(FocusKind::Hyperfocused.as_str());
                    ok &= v.kind.as_str() == claimed;
                    if let Some(d) = &rec.canonical {
                        let got = canon::canonical_digest(&ctx, &arc, &l).expect("exterior line");
                        fields.push(format!("canonical_ok={}", got == *d));
                        ok &= got == *d;
                    }
                }
            }
            None => {
                let lines = arcs::hyperfocused_lines(&ctx, &arc);
                fields.push(format!("hyperfocused_lines={}", lines.len()));
                if let Some(l) = lines.first() {
                    let v = arcs::classify_focus(&ctx, &arc, l).expect("exterior line");
                    fields.push(format!("focus_count={}", v.focus_count));
                    fields.push(format!("verdict={}", v.kind.as_str()));
                    fields.push(format!("line={l}"));
                }
            }
        }
        if arc.k() >= 6 {
            let h = conics::hyperconic_contains(&ctx, &arc).expect("at least six points");
            fields.push(format!("hyperconic={}", h.contained));
            if let Some(claim) = rec.hyperconic {
                ok &= claim == h.contained;
            }
        }
        if !ok {
            flagged += 1;
            fields.push("flagged=true".into());
        }
        let _ = writeln!(out, "{}", fields.join(" "));
    }
    let _ = writeln!(out, "records={total} verified={} flagged={flagged}", total - flagged);
    Ok(if flagged == 0 { exit::OK } else { exit::FAILED })
}

/// Roughly `n` exterior lines, evenly spread through the dense line order.
fn sample_exterior_lines(ctx: &FieldCtx, arc: &Arc, n: usize) -> Vec<ProjLine> {
    let exterior: Vec<ProjLine> = plane::all_lines(ctx).filter(|l| arc.is_exterior(ctx, l)).collect();
    if n == 0 || exterior.is_empty() {
        return Vec::new();
    }
    let step = (exterior.len() / n).max(1);
    exterior.into_iter().step_by(step).take(n).collect()
}

fn cmd_construct(cli: &Cli, a: &ConstructArgs) -> CmdResult {
    let ctx = field(cli)?;
    let mut params = Params::new();
    for (key, value) in [
        ("gens", &a.gens),
        ("point", &a.point),
        ("a", &a.a),
        ("i", &a.i),
        ("d", &a.d),
        ("basis", &a.basis),
    ] {
        if let Some(v) = value {
            params.set(key, v.clone());
        }
    }
    let registry = Registry::with_builtins();
    let built = registry.build(&a.name, &ctx, &params).map_err(|e| {
        let msg = match e {
            ConstructError::Unknown(_) => format!("{e}; known: {}", registry.names().join(", ")),
            _ => e.to_string(),
        };
        Failure::new(exit::USAGE, msg)
    })?;
    let verdict = arcs::classify_focus(&ctx, &built.arc, &built.focus_line)
        .map_err(|e| Failure::new(exit::FAILED, e.to_string()))?;
    let mut rec = ArcRecord::new(&ctx, &built.arc, Some(&built.focus_line));
    rec.verdict = Some(verdict.kind.as_str().to_string());
    rec.focus_count = Some(verdict.focus_count);
    let line = rec.to_line() + "\n";
    match &a.out {
        Some(p) => fs::write(p, &line).map_err(|e| Failure::new(exit::IO, format!("{}: {e}", p.display())))?,
        None => print!("{line}"),
    }
    let sampled = sample_exterior_lines(&ctx, &built.arc, a.sample_lines);
    let hits = sampled
        .iter()
        .filter(|l| arcs::classify_focus(&ctx, &built.arc, l).map(|v| v.kind == FocusKind::Hyperfocused) == Ok(true))
        .count();
    eprintln!(
        "k={} verdict={} focus_count={}",
        built.arc.k(),
        verdict.kind.as_str(),
        verdict.focus_count
    );
    if !sampled.is_empty() {
        eprintln!("sampled_lines={} hyperfocused={hits}", sampled.len());
    }
    let ok = verdict.kind == FocusKind::Hyperfocused && hits == sampled.len();
    Ok(if ok { exit::OK } else { exit::FAILED })
}

fn cmd_classify(a: &InputArgs) -> CmdResult {
    let mut ctx: Option<FieldCtx> = None;
    let mut line: Option<ProjLine> = None;
    let mut seen = BTreeSet::new();
    let mut arcs_in = Vec::new();
    for (n, text) in read_input(&a.input)? {
        let rec = ArcRecord::parse(&text).map_err(|e| malformed(n, e))?;
        let c = rec.field().map_err(|e| malformed(n, e))?;
        if let Some(prev) = &ctx {
            if prev.q() != c.q() || prev.modulus() != c.modulus() {
                return Err(malformed(n, "records are over different fields"));
            }
        }
        let l = rec
            .focus_line(&c)
            .map_err(|e| malformed(n, e))?
            .unwrap_or_else(ProjLine::infinity);
        if line.is_some_and(|prev| prev != l) {
            return Err(malformed(n, "records have different focus lines"));
        }
        let arc = Arc::new(&c, rec.points(&c).map_err(|e| malformed(n, e))?).map_err(|e| malformed(n, e))?;
        if !arc.is_exterior(&c, &l) {
            return Err(malformed(n, "arc meets its focus line"));
        }
        if seen.insert(arc.indices(&c)) {
            arcs_in.push(arc);
        }
        line = Some(l);
        ctx = Some(c);
    }
    let mut out = io::stdout().lock();
    let (Some(ctx), Some(l)) = (ctx, line) else {
        let _ = writeln!(out, "arcs=0 classes=0");
        return Ok(exit::OK);
    };
    let classes =
        canon::equivalence_classes(&ctx, &arcs_in, &l).map_err(|e| Failure::new(exit::DATA, e.to_string()))?;
    let _ = writeln!(out, "arcs={} classes={}", arcs_in.len(), classes.len());
    for (i, c) in classes.iter().enumerate() {
        let _ = writeln!(out, "class={} size={} digest={}", i + 1, c.members.len(), c.digest);
    }
    Ok(exit::OK)
}

fn cmd_field_dump(cli: &Cli) -> CmdResult {
    let ctx = field(cli)?;
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "s={} q={} modulus={:#x}", ctx.s(), ctx.q(), ctx.modulus());
    for i in 0..ctx.q() - 1 {
        let v = ctx.exp(i);
        let _ = writeln!(out, "w^{i}={:#x}", v.0);
    }
    Ok(exit::OK)
}
