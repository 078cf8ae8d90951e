//! The verification suite: every stated identity re-checked at bounded depth in exact
//! arithmetic, reported as line-delimited records.

mod checks;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use crate::ari_exp::AritVariant;
use crate::exactalg::{RatFun, ZeroTest};
use crate::flexion_ganit::{Ganit, NamedMould};
use crate::gamma::{render_vector, GammaSpec};
use crate::mould::{Convention, Mould};
use crate::symmetry::{random_structured, StructuredKind, SymmetryKind};
use crate::{Error, Result};

pub use checks::check_ids;

/// How residuals are decided to vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Equality {
    #[default]
    Canonical,
    Probabilistic { trials: u32 },
}

impl FromStr for Equality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "canonical" => Ok(Equality::Canonical),
            "probabilistic" => Ok(Equality::Probabilistic { trials: 8 }),
            _ => Err(Error::Parse(format!("unknown equality strategy `{s}`"))),
        }
    }
}

/// Everything a report depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub spec: GammaSpec,
    pub depth: usize,
    pub equality: Equality,
    pub seed: u64,
    pub arit: AritVariant,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            spec: GammaSpec::cyclic(2),
            depth: 4,
            equality: Equality::Canonical,
            seed: 0,
            arit: AritVariant::Standard,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 {
            return Err(Error::Parse("depth must be at least 1".into()));
        }
        if let Equality::Probabilistic { trials: 0 } = self.equality {
            return Err(Error::Parse("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn zero_test(&self) -> ZeroTest {
        match self.equality {
            Equality::Canonical => ZeroTest::Canonical,
            Equality::Probabilistic { trials } => ZeroTest::Probabilistic { trials, seed: self.seed },
        }
    }
}

/// A group of checks selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Examples,
    Dimould,
    Exp,
    Ganit,
    Recurrences,
    Appendix,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Examples,
        Suite::Dimould,
        Suite::Exp,
        Suite::Ganit,
        Suite::Recurrences,
        Suite::Appendix,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Examples => "examples",
            Suite::Dimould => "dimould",
            Suite::Exp => "exp",
            Suite::Ganit => "ganit",
            Suite::Recurrences => "recurrences",
            Suite::Appendix => "appendix",
            Suite::All => "all",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub id: &'static str,
    pub depth: usize,
    pub passed: bool,
    pub witness: Option<String>,
    pub elapsed: Duration,
}

impl Record {
    /// `check=<id> depth=<R> status=<PASS|FAIL>[ time_ms=<t>][ witness=<text>]`.
    pub fn render(&self, timings: bool) -> String {
        let mut out = format!(
            "check={} depth={} status={}",
            self.id,
            self.depth,
            if self.passed { "PASS" } else { "FAIL" }
        );
        if timings {
            out.push_str(&format!(" time_ms={}", self.elapsed.as_millis()));
        }
        if let Some(w) = &self.witness {
            out.push_str(" witness=");
            out.push_str(&w.replace('\n', "; "));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn record(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    /// The report text; without timings it depends only on the config.
    pub fn render(&self, timings: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.render(timings));
            out.push('\n');
        }
        let failed = self.records.iter().filter(|r| !r.passed).count();
        out.push_str(&format!(
            "summary checks={} passed={} failed={}\n",
            self.records.len(),
            self.records.len() - failed,
            failed
        ));
        out
    }
}

/// Execution knobs that do not affect the report content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { threads: 1 }
    }
}

/// Counts moulds pushed through the text format and collects mismatches.
#[derive(Debug, Default)]
struct Tracker {
    count: usize,
    failures: Vec<String>,
}

impl Tracker {
    fn track(&mut self, m: &Mould) {
        self.count += 1;
        let text = m.to_text();
        match Mould::from_text(&text) {
            Ok(back) if back == *m && back.to_text() == text => {}
            Ok(_) => self.failures.push(format!("text round trip changed a {} mould", m.spec())),
            Err(e) => self.failures.push(format!("text round trip failed: {e}")),
        }
    }
}

/// Outcome of a single check.
#[derive(Debug)]
struct Outcome {
    passed: bool,
    depth: usize,
    witness: Option<String>,
}

impl Outcome {
    fn pass(depth: usize) -> Self {
        Outcome {
            passed: true,
            depth,
            witness: None,
        }
    }

    fn fail(depth: usize, witness: String) -> Self {
        Outcome {
            passed: false,
            depth,
            witness: Some(witness),
        }
    }

    /// Passes when `witness` is `None`.
    fn from_witness(depth: usize, witness: Option<String>) -> Self {
        match witness {
            None => Outcome::pass(depth),
            Some(w) => Outcome::fail(depth, w),
        }
    }
}

/// Number of structured samples per symmetry class.
const POOL: usize = 21;

/// Shared, lazily built inputs of the checks; every field is a pure function of the config.
struct Ctx {
    cfg: Config,
    alternal: OnceLock<Vec<Mould>>,
    symmetral: OnceLock<Vec<Mould>>,
    alternil: OnceLock<Vec<Mould>>,
    symmetril: OnceLock<Vec<Mould>>,
    ganit_pic: OnceLock<Ganit>,
    ganit_poc: OnceLock<Ganit>,
}

impl Ctx {
    fn new(cfg: Config) -> Self {
        Ctx {
            cfg,
            alternal: OnceLock::new(),
            symmetral: OnceLock::new(),
            alternil: OnceLock::new(),
            symmetril: OnceLock::new(),
            ganit_pic: OnceLock::new(),
            ganit_poc: OnceLock::new(),
        }
    }

    fn spec(&self) -> &GammaSpec {
        &self.cfg.spec
    }

    fn depth(&self) -> usize {
        self.cfg.depth
    }

    /// A per-purpose seed derived from the configured one.
    fn seed(&self, tag: u64, i: u64) -> u64 {
        let mut z = self
            .cfg
            .seed
            .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add(i.wrapping_mul(0xBF58_476D_1CE4_E5B9));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn alternal(&self) -> &[Mould] {
        self.alternal.get_or_init(|| {
            (0..POOL)
                .map(|i| {
                    random_structured(
                        StructuredKind::Alternal,
                        Convention::V,
                        self.spec(),
                        self.depth(),
                        self.seed(1, i as u64),
                    )
                })
                .collect()
        })
    }

    fn symmetral(&self) -> &[Mould] {
        self.symmetral
            .get_or_init(|| self.alternal().iter().map(|a| a.exp().expect("alternal lies in ARI")).collect())
    }

    fn alternil(&self) -> &[Mould] {
        self.alternil.get_or_init(|| {
            self.alternal()
                .iter()
                .map(|a| self.ganit_pic().apply(a).expect("same specs"))
                .collect()
        })
    }

    fn symmetril(&self) -> &[Mould] {
        self.symmetril.get_or_init(|| {
            self.symmetral()
                .iter()
                .map(|a| self.ganit_pic().apply(a).expect("same specs"))
                .collect()
        })
    }

    fn ganit_pic(&self) -> &Ganit {
        self.ganit_pic.get_or_init(|| {
            Ganit::new(&NamedMould::Pic.tabulate(self.spec(), self.depth())).expect("pic lies in GARI")
        })
    }

    fn ganit_poc(&self) -> &Ganit {
        self.ganit_poc.get_or_init(|| {
            Ganit::new(&NamedMould::Poc.tabulate(self.spec(), self.depth())).expect("poc lies in GARI")
        })
    }

    fn is_zero(&self, f: &RatFun) -> bool {
        f.is_zero_by(self.cfg.zero_test())
    }

    /// `None` when equal, else where they first differ.
    fn mould_diff(&self, a: &Mould, b: &Mould) -> Result<Option<String>> {
        if a.empty_value() != b.empty_value() {
            return Ok(Some(format!("empty values {} and {}", a.empty_value(), b.empty_value())));
        }
        let d = a.sub(b)?;
        for r in 1..=d.depth() {
            for (idx, f) in d.table(r).iter().enumerate() {
                if !self.is_zero(f) {
                    return Ok(Some(format!(
                        "r={} sigma={} difference={}",
                        r,
                        render_vector(&self.spec().vector_at(r, idx)),
                        f.render(a.convention().family())
                    )));
                }
            }
        }
        Ok(None)
    }

    /// `None` when `m` has the symmetry, else the first failing instance.
    fn symmetry_failure(&self, m: &Mould, kind: SymmetryKind) -> Result<Option<String>> {
        let report = crate::symmetry::check_symmetry(m, kind)?;
        Ok(report
            .lines
            .iter()
            .find(|l| !self.is_zero(&l.residual))
            .map(|l| format!("{} {}", kind, l.render(m.convention()))))
    }
}

/// Runs the checks of `suite`, in registry order, on `opts.threads` workers.
pub fn run(suite: Suite, cfg: &Config, opts: RunOptions) -> Result<Report> {
    cfg.validate()?;
    let ctx = Ctx::new(cfg.clone());
    let selected: Vec<&checks::Check> = checks::REGISTRY.iter().filter(|c| suite.includes(c.suite)).collect();
    let slots: Vec<Mutex<Option<(Record, Tracker)>>> = selected.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        let Some(check) = selected.get(i) else { break };
        let mut tracker = Tracker::default();
        let start = Instant::now();
        let outcome = match (check.run)(&ctx, &mut tracker) {
            Ok(o) => o,
            Err(e) => Outcome::fail(ctx.depth(), format!("error: {e}")),
        };
        let record = Record {
            id: check.id,
            depth: outcome.depth,
            passed: outcome.passed,
            witness: outcome.witness,
            elapsed: start.elapsed(),
        };
        *slots[i].lock().expect("no poisoned slots") = Some((record, tracker));
    };
    std::thread::scope(|s| {
        for _ in 1..opts.threads.max(1) {
            s.spawn(worker);
        }
        worker();
    });
    let mut records = Vec::with_capacity(slots.len() + 1);
    let mut total = Tracker::default();
    for slot in slots {
        let (record, tracker) = slot.into_inner().expect("no poisoned slots").expect("every check ran");
        records.push(record);
        total.count += tracker.count;
        total.failures.extend(tracker.failures);
    }
    records.push(Record {
        id: "engineering/serialization-roundtrip",
        depth: cfg.depth,
        passed: total.failures.is_empty(),
        witness: Some(match total.failures.first() {
            None => format!("moulds={}", total.count),
            Some(f) => format!("moulds={} failures={} first={}", total.count, total.failures.len(), f),
        }),
        elapsed: Duration::ZERO,
    });
    Ok(Report { records })
}
