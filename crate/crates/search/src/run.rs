//! Sharded, resumable driver for the full classification.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use hyperfocus_core::arcs::{self, Arc, FocusKind};
use hyperfocus_core::canon;
use hyperfocus_core::conics::{self, HyperconicVerdict};
use hyperfocus_core::{plane, Felt, FieldCtx, ProjLine};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::candidates::{FocusBounds, Prepared8};
use crate::extend::extend;
use crate::kernel::{Code, Mask, SearchSpace};
use crate::record::ArcRecord;
use crate::SearchError;

const CHECKPOINT_MAGIC: &str = "hyperfocus-checkpoint 1";

#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Stop after this many shards in this invocation.
    pub max_shards: Option<usize>,
}

/// Work unit: every candidate with a given `a` and first free column `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shard {
    pub a_index: usize,
    pub c: u32,
}

pub fn shards(space: &SearchSpace) -> Vec<Shard> {
    (0..space.a_values().len())
        .flat_map(|a_index| (2..space.q()).map(move |c| Shard { a_index, c }))
        .collect()
}

fn pairs(q: u64) -> u64 {
    q * (q - 1) / 2
}

pub fn shard_size(q: u32, c: u32) -> u64 {
    let q = q as u64;
    pairs(q) * (q - 1 - c as u64) * pairs(q)
}

/// Candidate counts by fate. Each candidate is counted once, under the first
/// test that rejected it or one of its prefixes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counters {
    pub enumerated: u64,
    pub not_arc: u64,
    pub focus_pruned: u64,
    pub too_few_focuses: u64,
    pub prepared: u64,
    pub with_pencils: u64,
    pub extended: u64,
    /// Full 8-arcs by focus count, up to the pruning maximum.
    pub histogram: BTreeMap<u32, u64>,
}

impl Counters {
    pub fn merge(&mut self, other: &Counters) {
        self.enumerated += other.enumerated;
        self.not_arc += other.not_arc;
        self.focus_pruned += other.focus_pruned;
        self.too_few_focuses += other.too_few_focuses;
        self.prepared += other.prepared;
        self.with_pencils += other.with_pencils;
        self.extended += other.extended;
        for (&n, &c) in &other.histogram {
            *self.histogram.entry(n).or_default() += c;
        }
    }

    pub fn hist(&self, n: u32) -> u64 {
        self.histogram.get(&n).copied().unwrap_or(0)
    }

    fn fields(&self) -> [(&'static str, u64); 7] {
        [
            ("enumerated", self.enumerated),
            ("not_arc", self.not_arc),
            ("focus_pruned", self.focus_pruned),
            ("too_few_focuses", self.too_few_focuses),
            ("prepared", self.prepared),
            ("with_pencils", self.with_pencils),
            ("extended", self.extended),
        ]
    }

    fn set(&mut self, name: &str, v: u64) -> bool {
        let slot = match name {
            "enumerated" => &mut self.enumerated,
            "not_arc" => &mut self.not_arc,
            "focus_pruned" => &mut self.focus_pruned,
            "too_few_focuses" => &mut self.too_few_focuses,
            "prepared" => &mut self.prepared,
            "with_pencils" => &mut self.with_pencils,
            "extended" => &mut self.extended,
            _ => return false,
        };
        *slot = v;
        true
    }
}

/// Walks one shard with prefix pruning, calling `visit` on every 8-arc whose
/// focus count lies within `bounds`.
pub fn walk_shard(
    space: &SearchSpace,
    bounds: FocusBounds,
    shard: Shard,
    counters: &mut Counters,
    mut visit: impl FnMut(&Prepared8),
) {
    let q = space.q();
    let (zero, one) = (Felt::ZERO, Felt::ONE);
    let a = space.a_values()[shard.a_index];
    let c = Felt(shard.c);
    let mut pts: Vec<Code> = Vec::with_capacity(8);
    let mut focus: Mask = 0;
    for (x, y) in [(zero, zero), (zero, one), (one, zero), (one, a)] {
        let p = space.code(x, y);
        focus |= space.join(&pts, p).expect("the anchored frame is an arc");
        pts.push(p);
    }
    let max = bounds.max;
    let pq = pairs(q as u64);
    let cols = (q - 1 - shard.c) as u64;
    counters.enumerated += shard_size(q, shard.c);

    for d in 0..q {
        let pd = space.code(c, Felt(d));
        let below_d = (q - 1 - d) as u64 * cols * pq;
        let Some(bd) = space.join(&pts, pd) else {
            counters.not_arc += below_d;
            continue;
        };
        let fd = focus | bd;
        if fd.count_ones() > max {
            counters.focus_pruned += below_d;
            continue;
        }
        pts.push(pd);
        for e in d + 1..q {
            let pe = space.code(c, Felt(e));
            let below_e = cols * pq;
            let Some(be) = space.join(&pts, pe) else {
                counters.not_arc += below_e;
                continue;
            };
            let fe = fd | be;
            if fe.count_ones() > max {
                counters.focus_pruned += below_e;
                continue;
            }
            pts.push(pe);
            for f in shard.c + 1..q {
                let f = Felt(f);
                for g in 0..q {
                    let pg = space.code(f, Felt(g));
                    let below_g = (q - 1 - g) as u64;
                    let Some(bg) = space.join(&pts, pg) else {
                        counters.not_arc += below_g;
                        continue;
                    };
                    let fg = fe | bg;
                    if fg.count_ones() > max {
                        counters.focus_pruned += below_g;
                        continue;
                    }
                    pts.push(pg);
                    for h in g + 1..q {
                        let ph = space.code(f, Felt(h));
                        let Some(bh) = space.join(&pts, ph) else {
                            counters.not_arc += 1;
                            continue;
                        };
                        let fh = fg | bh;
                        let n = fh.count_ones();
                        if n > max {
                            counters.focus_pruned += 1;
                            continue;
                        }
                        *counters.histogram.entry(n).or_default() += 1;
                        if n < bounds.min {
                            counters.too_few_focuses += 1;
                            continue;
                        }
                        counters.prepared += 1;
                        let mut points = [0; 8];
                        points[..7].copy_from_slice(&pts);
                        points[7] = ph;
                        visit(&Prepared8 { points, focus: fh });
                    }
                    pts.pop();
                }
            }
            pts.pop();
        }
        pts.pop();
    }
}

struct ShardResult {
    counters: Counters,
    found: Vec<(Vec<Code>, [Code; 8])>,
}

fn process_shard(space: &SearchSpace, k: usize, shard: Shard) -> ShardResult {
    let bounds = FocusBounds::for_target(k as u32);
    let mut counters = Counters::default();
    let mut found = Vec::new();
    let m = (k - 8) as u32;
    let mut with_pencils = 0;
    let mut extended = 0;
    walk_shard(space, bounds, shard, &mut counters, |p| {
        if crate::extend::pencil_directions(space, p, m).len() >= 2 {
            with_pencils += 1;
        }
        for e in extend(space, p, k) {
            extended += 1;
            found.push((e.points, p.points));
        }
    });
    counters.with_pencils = with_pencils;
    counters.extended = extended;
    ShardResult { counters, found }
}

/// One arc of the final result set.
#[derive(Debug, Clone)]
pub struct FoundArc {
    pub arc: Arc,
    /// The first 8-arc (in shard order) that produced it, moved along with it.
    pub base: Arc,
    /// Power of the Frobenius collineation taking a searched arc to this one.
    pub frobenius: u32,
    pub digest: String,
    pub hyperconic: HyperconicVerdict,
    pub focus_count: usize,
    /// Problems found by the independent re-check; empty when sound.
    pub failures: Vec<String>,
}

impl FoundArc {
    pub fn record(&self, ctx: &FieldCtx) -> ArcRecord {
        let mut r = ArcRecord::new(ctx, &self.arc, Some(&ProjLine::infinity()));
        r.verdict = Some(if self.failures.is_empty() {
            FocusKind::Hyperfocused.as_str().to_string()
        } else {
            "unverified".to_string()
        });
        r.focus_count = Some(self.focus_count);
        r.frobenius = Some(self.frobenius);
        r.canonical = Some(self.digest.clone());
        r.hyperconic = Some(self.hyperconic.contained);
        r.conic = self.hyperconic.conic.map(|c| c.to_array());
        r.nucleus = self.hyperconic.nucleus.map(|p| p.to_array());
        r
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub q: u32,
    pub modulus: u32,
    pub k: usize,
    pub complete: bool,
    /// Shards merged so far, out of `total_shards`.
    pub cursor: usize,
    pub total_shards: usize,
    pub last_shard: Option<Shard>,
    pub counters: Counters,
    /// Distinct arcs hit directly, with `a` restricted to orbit representatives.
    pub searched: usize,
    /// The searched arcs closed under Frobenius: every arc in normal position.
    pub found: Vec<FoundArc>,
    /// Candidates that the pipeline accepted but which are not arcs.
    pub unsound: Vec<String>,
    /// Published count for this configuration, when there is one.
    pub expected: Option<usize>,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn hyperconic_count(&self) -> usize {
        self.found.iter().filter(|f| f.hyperconic.contained).count()
    }

    pub fn verify_failures(&self) -> usize {
        self.found.iter().filter(|f| !f.failures.is_empty()).count() + self.unsound.len()
    }

    pub fn validated(&self) -> bool {
        self.expected.is_some()
    }

    pub fn discrepancy(&self) -> Option<String> {
        let want = self.expected?;
        if !self.complete || self.found.len() == want {
            return None;
        }
        Some(format!(
            "found {} arcs in normal position ({} searched) where {} were expected; the search covers only \
             arcs whose added points form a transversal of two {}-tangent pencils of an 8-subarc, so the gap \
             may lie in that reduction",
            self.found.len(),
            self.searched,
            want,
            self.k - 8
        ))
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let c = &self.counters;
        let mut out = vec![
            format!("q={} modulus={:#x} k={}", self.q, self.modulus, self.k),
            format!(
                "shards={}/{} complete={}",
                self.cursor, self.total_shards, self.complete
            ),
        ];
        for (name, v) in c.fields() {
            out.push(format!("{name}={v}"));
        }
        let hist: Vec<String> = c.histogram.iter().map(|(n, v)| format!("{n}:{v}")).collect();
        out.push(format!("focus_histogram={}", hist.join(",")));
        out.push(format!("focus_9_or_10={}", c.hist(9) + c.hist(10)));
        if self.complete {
            out.push(format!("searched={}", self.searched));
            out.push(format!(
                "found={} hyperconic={}/{}",
                self.found.len(),
                self.hyperconic_count(),
                self.found.len()
            ));
            let n = self.found.len() + self.unsound.len();
            out.push(format!("verified={}/{}", n - self.verify_failures(), n));
            match self.expected {
                Some(n) => out.push(format!("expected={n}")),
                None => out.push("validated=false".to_string()),
            }
            out.push(format!(
                "discrepancy={}",
                self.discrepancy().unwrap_or_else(|| "none".into())
            ));
        }
        out.push(format!("elapsed={:.1}s", self.elapsed.as_secs_f64()));
        out
    }
}

/// Published result sizes over GF(32) with modulus `x^5 + x^2 + 1`.
pub fn expected_count(ctx: &FieldCtx, k: usize) -> Option<usize> {
    if ctx.s() != 5 || ctx.modulus() != 0x25 {
        return None;
    }
    match k {
        12 => Some(60),
        14 => Some(0),
        _ => None,
    }
}

pub fn check_target(ctx: &FieldCtx, k: usize) -> Result<(), SearchError> {
    let top = 16.min(ctx.q() as usize + 2);
    if !k.is_multiple_of(2) || k < 10 || k > top {
        return Err(SearchError::UnsupportedTarget(k));
    }
    Ok(())
}

fn config_text(ctx: &FieldCtx, k: usize) -> String {
    format!("s={};modulus={:#x};k={}", ctx.s(), ctx.modulus(), k)
}

pub fn config_hash(ctx: &FieldCtx, k: usize) -> String {
    hex::encode(Sha256::digest(config_text(ctx, k).as_bytes()))
}

struct State {
    done: usize,
    counters: Counters,
    found: BTreeMap<Vec<Code>, [Code; 8]>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SearchError + '_ {
    move |source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), SearchError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(text.as_bytes()).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn codes(list: &[Code]) -> String {
    list.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn save_checkpoint(path: &Path, ctx: &FieldCtx, k: usize, all: &[Shard], st: &State) -> Result<(), SearchError> {
    let mut s = String::new();
    s.push_str(CHECKPOINT_MAGIC);
    s.push('\n');
    s.push_str(&format!("config {} {}\n", config_hash(ctx, k), config_text(ctx, k)));
    match st.done.checked_sub(1).map(|i| all[i]) {
        Some(last) => s.push_str(&format!(
            "cursor {} {} {} {}\n",
            st.done,
            all.len(),
            last.a_index,
            last.c
        )),
        None => s.push_str(&format!("cursor 0 {}\n", all.len())),
    }
    for (name, v) in st.counters.fields() {
        s.push_str(&format!("counter {name} {v}\n"));
    }
    for (n, v) in &st.counters.histogram {
        s.push_str(&format!("hist {n} {v}\n"));
    }
    for (pts, base) in &st.found {
        s.push_str(&format!("arc {} : {}\n", codes(base), codes(pts)));
    }
    write_atomic(path, &s)
}

fn load_checkpoint(path: &Path, ctx: &FieldCtx, k: usize, total: usize) -> Result<State, SearchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let bad = |line: usize, reason: &str| SearchError::BadCheckpoint {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, CHECKPOINT_MAGIC)) => {}
        _ => return Err(bad(1, "missing header")),
    }
    let mut st = State {
        done: 0,
        counters: Counters::default(),
        found: BTreeMap::new(),
    };
    let mut saw_config = false;
    let num = |n: usize, t: Option<&str>| -> Result<u64, SearchError> {
        t.and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(n, "expected a number"))
    };
    for (n, line) in lines {
        let mut w = line.split_whitespace();
        match w.next() {
            Some("config") => {
                if w.next() != Some(config_hash(ctx, k).as_str()) {
                    return Err(SearchError::ConfigMismatch(path.to_path_buf()));
                }
                saw_config = true;
            }
            Some("cursor") => {
                st.done = num(n, w.next())? as usize;
                if num(n, w.next())? as usize != total || st.done > total {
                    return Err(bad(n, "cursor does not fit the shard list"));
                }
            }
            Some("counter") => {
                let name = w.next().unwrap_or("");
                let v = num(n, w.next())?;
                if !st.counters.set(name, v) {
                    return Err(bad(n, "unknown counter"));
                }
            }
            Some("hist") => {
                let f = num(n, w.next())? as u32;
                st.counters.histogram.insert(f, num(n, w.next())?);
            }
            Some("arc") => {
                let rest: Vec<&str> = w.collect();
                let split = rest
                    .iter()
                    .position(|t| *t == ":")
                    .ok_or_else(|| bad(n, "arc line lacks ':'"))?;
                let parse = |ts: &[&str]| -> Result<Vec<Code>, SearchError> {
                    ts.iter()
                        .map(|t| t.parse::<Code>().map_err(|_| bad(n, "bad point code")))
                        .collect()
                };
                let base: [Code; 8] = parse(&rest[..split])?
                    .try_into()
                    .map_err(|_| bad(n, "base must have 8 points"))?;
                let pts = parse(&rest[split + 1..])?;
                if pts.len() != k {
                    return Err(bad(n, "arc has the wrong size"));
                }
                st.found.insert(pts, base);
            }
            Some(_) => return Err(bad(n, "unknown line")),
            None => {}
        }
    }
    if !saw_config {
        return Err(bad(2, "missing config line"));
    }
    Ok(st)
}

/// Applies `x -> x^(2^i)` to both coordinates of every point.
fn frobenius_codes(space: &SearchSpace, pts: &[Code], i: u32) -> Vec<Code> {
    let ctx = space.ctx();
    let mut out: Vec<Code> = pts
        .iter()
        .map(|&p| space.code(ctx.frobenius(space.x(p), i), ctx.frobenius(space.y(p), i)))
        .collect();
    out.sort_unstable();
    out
}

/// The searched arcs together with their Frobenius images, keyed by point set.
/// The frame and `Z = 0` are fixed by Frobenius, so every image is again in
/// normal position, with `(1, a)` replaced by `(1, a^(2^i))`.
fn frobenius_closure(
    space: &SearchSpace,
    found: &BTreeMap<Vec<Code>, [Code; 8]>,
) -> BTreeMap<Vec<Code>, ([Code; 8], u32)> {
    let mut out = BTreeMap::new();
    for i in 0..space.ctx().s() {
        for (pts, base) in found {
            let b: [Code; 8] = frobenius_codes(space, base, i).try_into().expect("eight points");
            out.entry(frobenius_codes(space, pts, i)).or_insert((b, i));
        }
    }
    out
}

fn finalize(space: &SearchSpace, k: usize, pts: &[Code], base: &[Code; 8], frobenius: u32) -> Result<FoundArc, String> {
    let ctx = space.ctx();
    let z = ProjLine::infinity();
    let to_points = |c: &[Code]| c.iter().map(|&p| space.point(p)).collect::<Vec<_>>();
    let mut failures = Vec::new();
    let arc = Arc::new(ctx, to_points(pts)).map_err(|e| format!("{}: not an arc: {e}", codes(pts)))?;
    let base_arc = Arc::new(ctx, to_points(base)).expect("bases are arcs");
    if !arcs::is_arc(ctx, arc.points()).unwrap_or(false) {
        failures.push("triple test failed".into());
    }
    if !arc.is_exterior(ctx, &z) {
        failures.push("meets the focus line".into());
    }
    let verdict = arcs::classify_focus(ctx, &arc, &z).expect("affine arc");
    if verdict.kind != FocusKind::Hyperfocused || verdict.focus_count != k - 1 {
        failures.push(format!(
            "{} with {} focuses",
            verdict.kind.as_str(),
            verdict.focus_count
        ));
    }
    let new_secants = arcs::secants(ctx, &arc).len() - arcs::secants(ctx, &base_arc).len();
    if new_secants != k * (k - 1) / 2 - 28 {
        failures.push(format!("{new_secants} new secants"));
    }
    let f0 = arcs::focus_set(ctx, &base_arc, &z).expect("affine arc");
    let f = arcs::focus_set(ctx, &arc, &z).expect("affine arc");
    if !f0.points.iter().all(|p| f.contains(p)) {
        failures.push("focus set of the 8-subarc is not contained in the focus set".into());
    }
    let added: Vec<_> = arc.points().iter().filter(|p| !base_arc.contains(p)).copied().collect();
    for (i, u) in added.iter().enumerate() {
        for v in &added[i + 1..] {
            let l = plane::line_through(ctx, u, v).expect("distinct points");
            if base_arc.points().iter().any(|p| plane::incident(ctx, p, &l)) {
                failures.push("two added points share a tangent of the 8-subarc".into());
            }
        }
    }
    let digest = canon::canonical_digest(ctx, &arc, &z).expect("arc is exterior to its focus line");
    let hyperconic = conics::hyperconic_contains(ctx, &arc).expect("arc has at least 6 points");
    Ok(FoundArc {
        arc,
        base: base_arc,
        frobenius,
        digest,
        hyperconic,
        focus_count: verdict.focus_count,
        failures,
    })
}

/// Output bytes for a finished result set.
pub fn render_jsonl(ctx: &FieldCtx, found: &[FoundArc]) -> String {
    let mut s = String::new();
    for f in found {
        s.push_str(&f.record(ctx).to_line());
        s.push('\n');
    }
    s
}

/// Runs (or resumes) the classification of hyperfocused `k`-arcs on `Z = 0`.
pub fn run_search(ctx: &FieldCtx, k: usize, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    let space = SearchSpace::new(ctx)?;
    check_target(ctx, k)?;
    let all = shards(&space);
    let mut st = match &config.checkpoint {
        Some(p) if p.exists() => load_checkpoint(p, ctx, k, all.len())?,
        _ => State {
            done: 0,
            counters: Counters::default(),
            found: BTreeMap::new(),
        },
    };
    if st.done > 0 {
        log::info!("resuming at shard {}/{}", st.done, all.len());
    }
    let workers = config.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let stop = match config.max_shards {
        Some(n) => (st.done + n).min(all.len()),
        None => all.len(),
    };
    let batch = workers * 2;
    while st.done < stop {
        let end = (st.done + batch).min(stop);
        let results: Vec<ShardResult> = pool.install(|| {
            all[st.done..end]
                .par_iter()
                .map(|&s| process_shard(&space, k, s))
                .collect()
        });
        for r in results {
            st.counters.merge(&r.counters);
            for (pts, base) in r.found {
                st.found.entry(pts).or_insert(base);
            }
        }
        st.done = end;
        log::debug!("merged {}/{} shards, {} arcs", st.done, all.len(), st.found.len());
        if let Some(p) = &config.checkpoint {
            save_checkpoint(p, ctx, k, &all, &st)?;
        }
    }
    if let Some(p) = &config.checkpoint {
        if !p.exists() {
            save_checkpoint(p, ctx, k, &all, &st)?;
        }
    }
    let complete = st.done == all.len();
    let mut found = Vec::new();
    let mut unsound = Vec::new();
    if complete {
        let closure = frobenius_closure(&space, &st.found);
        let checked: Vec<Result<FoundArc, String>> = pool.install(|| {
            closure
                .par_iter()
                .map(|(pts, (base, i))| finalize(&space, k, pts, base, *i))
                .collect()
        });
        for r in checked {
            match r {
                Ok(f) => found.push(f),
                Err(e) => unsound.push(e),
            }
        }
        found.sort_by(|a, b| (&a.digest, a.arc.indices(ctx)).cmp(&(&b.digest, b.arc.indices(ctx))));
        if let Some(out) = &config.output {
            write_atomic(out, &render_jsonl(ctx, &found))?;
        }
    }
    Ok(SearchReport {
        q: ctx.q(),
        modulus: ctx.modulus(),
        k,
        complete,
        cursor: st.done,
        total_shards: all.len(),
        last_shard: st.done.checked_sub(1).map(|i| all[i]),
        counters: st.counters,
        searched: st.found.len(),
        found,
        unsound,
        expected: expected_count(ctx, k),
        elapsed: start.elapsed(),
    })
}
