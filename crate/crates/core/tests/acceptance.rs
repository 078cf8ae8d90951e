//! One PASS/FAIL line per acceptance criterion, driven by the full verification run at the
//! default configuration.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mouldkit::verify::{run, Config, Report, RunOptions, Suite};

const TIME_LIMIT: Duration = Duration::from_secs(600);

struct Criterion {
    number: u32,
    title: &'static str,
    /// Record ids, or id prefixes ending in `/`.
    ids: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "named moulds have their symmetries; pic is not symmetral",
        ids: &[
            "examples/A-alternal",
            "examples/paj-symmetral",
            "examples/C-alternil",
            "examples/pic-symmetril",
            "examples/pij-symmetral",
            "examples/pic-not-symmetral",
        ],
    },
    Criterion {
        number: 2,
        title: "pic flexion identities on 100 random letter tuples",
        ids: &["examples/pic-identity-"],
    },
    Criterion {
        number: 3,
        title: "Sh and Sh* are homomorphisms, tensor law, Sh(I) = I(x)I, both symmetry routes agree",
        ids: &["dimould/"],
    },
    Criterion {
        number: 4,
        title: "mu preserves as and is, lu preserves al and il",
        ids: &["closure/"],
    },
    Criterion {
        number: 5,
        title: "exp maps al to as and il to is; log inverts exp",
        ids: &["exp/"],
    },
    Criterion {
        number: 6,
        title: "ganit morphism law, inverse, exp diagram",
        ids: &[
            "ganit/morphism-pic",
            "ganit/morphism-poc",
            "ganit/morphism-random",
            "ganit/inverse",
            "ganit/exp-diagram",
        ],
    },
    Criterion {
        number: 7,
        title: "decompositions, recurrences, intertwining, transfer formula",
        ids: &["recurrences/"],
    },
    Criterion {
        number: 8,
        title: "ganit(pic) maps al to il and as to is; ganit(poc) inverts both",
        ids: &[
            "ganit/alternal-to-alternil",
            "ganit/symmetral-to-symmetril",
            "ganit/alternil-to-alternal",
            "ganit/symmetril-to-symmetral",
        ],
    },
    Criterion {
        number: 9,
        title: "Ex symmetral, C = (sum m)! Ex, C mould-independent, arit laws, expari",
        ids: &["appendix/"],
    },
];

fn matches(id: &str, pattern: &str) -> bool {
    if pattern.ends_with('/') || pattern.ends_with('-') {
        id.starts_with(pattern)
    } else {
        id == pattern
    }
}

/// Whether every record matched by `c` passed, plus the lines to show on failure.
fn judge(report: &Report, c: &Criterion) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut notes = Vec::new();
    for pattern in c.ids {
        let hits: Vec<_> = report.records.iter().filter(|r| matches(r.id, pattern)).collect();
        if hits.is_empty() {
            ok = false;
            notes.push(format!("no record for {pattern}"));
        }
        for r in hits {
            if !r.passed {
                ok = false;
                notes.push(r.render(false));
            }
        }
    }
    if c.number == 1 {
        let residual = report
            .record("examples/pic-not-symmetral")
            .and_then(|r| r.witness.as_deref())
            .is_some_and(|w| w.contains("residual=") && !w.ends_with("residual=0"));
        if !residual {
            ok = false;
            notes.push("negative control reported no residual".into());
        }
    }
    (ok, notes)
}

fn line(ok: bool, number: u32, title: &str) {
    println!("{} criterion {}: {}", if ok { "PASS" } else { "FAIL" }, number, title);
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let start = Instant::now();
    let report = run(Suite::All, &cfg, RunOptions::default()).expect("default config is valid");
    let elapsed = start.elapsed();
    let mut all = true;
    for c in CRITERIA {
        let (ok, notes) = judge(&report, c);
        line(ok, c.number, c.title);
        for n in notes {
            println!("    {n}");
        }
        all &= ok;
    }
    let rerun = run(Suite::All, &cfg, RunOptions::default()).expect("default config is valid");
    let identical = rerun.render(false) == report.render(false);
    let serialization = report
        .record("engineering/serialization-roundtrip")
        .is_some_and(|r| r.passed);
    let fast = elapsed < TIME_LIMIT;
    let ok = identical && serialization && fast && report.passed();
    line(
        ok,
        10,
        &format!(
            "suite all in {:.1}s (limit {}s), rerun identical={}, serialization round trip={}",
            elapsed.as_secs_f64(),
            TIME_LIMIT.as_secs(),
            identical,
            serialization
        ),
    );
    all &= ok;
    if all {
        ExitCode::SUCCESS
    } else {
        print!("{}", report.render(true));
        ExitCode::FAILURE
    }
}
