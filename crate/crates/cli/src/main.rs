//! Command-line front end for mouldkit.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mouldkit::ari_exp::{c_coeff, ex_coeff, expari, expari_expansion, AritVariant, Composition};
use mouldkit::flexion_ganit::{anti, g_expand, ganit_apply, pari, NamedMould, WordFunction};
use mouldkit::gamma::GammaSpec;
use mouldkit::mould::{Convention, Mould};
use mouldkit::symmetry::{check_symmetry, SymmetryKind};
use mouldkit::verify::{self, Config, Equality, RunOptions, Suite};
use mouldkit::words::Word;

#[derive(Parser)]
#[command(name = "mouldkit", version, about = "Exact mould calculus over decorated words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mould at a word literal such as "[(0|v1),(1|v2)]".
    Eval {
        /// A named mould (A, paj, C, pic, pij, poc) or a mould file.
        mould: String,
        word: String,
        #[command(flatten)]
        shape: Shape,
    },
    /// Apply an operation to mould files and print or write the result.
    Op {
        #[command(subcommand)]
        op: Op,
    },
    /// Apply ganit_v(B) to a mould.
    Ganit(GanitArgs),
    /// Compute expari of an ARI mould in the U convention.
    Expari(ExpariArgs),
    /// Check a symmetry, printing one line per (p, q, sigma).
    Check {
        /// A named mould or a mould file.
        mould: String,
        #[arg(long, value_parser = parse_kind)]
        kind: SymmetryKind,
        #[command(flatten)]
        shape: Shape,
    },
    /// Print the word expansion g_B(w).
    Gexpand {
        /// A named mould or a mould file.
        #[arg(long)]
        b: String,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        shape: Shape,
    },
    /// Print the coefficient Ex(m) (or C(m)) of a composition such as 2,1.
    Excoeff {
        composition: String,
        #[arg(long, value_enum, default_value_t = CoeffFamily::Ex)]
        family: CoeffFamily,
    },
    /// Run the verification suite and print its report.
    Verify(VerifyArgs),
}

/// Group and depth used to tabulate named moulds and parse words.
#[derive(Args, Clone)]
struct Shape {
    #[arg(long, default_value = "z2")]
    group: String,
    #[arg(long, default_value_t = 4)]
    depth: usize,
}

#[derive(Subcommand)]
enum Op {
    /// The product A × B.
    Mu(BinaryArgs),
    /// The bracket A × B − B × A.
    Lu(BinaryArgs),
    /// The exponential of an ARI mould.
    Exp(UnaryArgs),
    /// The logarithm of a GARI mould.
    Log(UnaryArgs),
    /// ganit_v(B) applied to the input.
    Ganit(GanitArgs),
    /// expari of the input.
    Expari(ExpariArgs),
    /// Sign (−1)^r at depth r.
    Pari(UnaryArgs),
    /// Reversal of every argument list.
    Anti(UnaryArgs),
}

#[derive(Args)]
struct BinaryArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UnaryArgs {
    /// Mould file; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GanitArgs {
    /// A named mould or a mould file; named moulds take the input's group and depth.
    #[arg(long)]
    b: String,
    #[command(flatten)]
    io: UnaryArgs,
}

#[derive(Args)]
struct ExpariArgs {
    #[arg(long, value_enum, default_value_t = ExpariMethod::Series)]
    method: ExpariMethod,
    #[arg(long, value_enum, default_value_t = AritFlag::Standard)]
    arit_variant: AritFlag,
    #[command(flatten)]
    io: UnaryArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, default_value = "z2")]
    group: String,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = EqualityFlag::Canonical)]
    equality: EqualityFlag,
    /// Sample points per zero test under probabilistic equality.
    #[arg(long, default_value_t = 8)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the sign-flipped arit as a negative control.
    #[arg(long, value_enum, default_value_t = AritFlag::Standard)]
    arit_variant: AritFlag,
    /// Add per-check wall time to each record.
    #[arg(long)]
    timings: bool,
    #[arg(long, env = "MOULDKIT_THREADS", default_value_t = 1)]
    threads: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffFamily {
    Ex,
    C,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpariMethod {
    Series,
    Expansion,
}

#[derive(Clone, Copy, ValueEnum)]
enum AritFlag {
    Standard,
    SignFlipped,
}

impl From<AritFlag> for AritVariant {
    fn from(f: AritFlag) -> Self {
        match f {
            AritFlag::Standard => AritVariant::Standard,
            AritFlag::SignFlipped => AritVariant::SignFlipped,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EqualityFlag {
    Canonical,
    Probabilistic,
}

fn parse_kind(s: &str) -> std::result::Result<SymmetryKind, String> {
    s.parse().map_err(|e: mouldkit::Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: mouldkit::Error| e.to_string())
}

fn parse_group(s: &str) -> Result<GammaSpec> {
    s.parse().with_context(|| format!("bad group `{s}`"))
}

fn read_source(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
            Ok(s)
        }
    }
}

fn load_file(path: Option<&Path>) -> Result<Mould> {
    let text = read_source(path)?;
    let name = path.map_or("<stdin>".to_string(), |p| p.display().to_string());
    Mould::from_text(&text).with_context(|| format!("in mould file {name}"))
}

/// A named mould tabulated on `spec` up to `depth`, or the contents of a mould file.
fn load_mould(arg: &str, spec: &GammaSpec, depth: usize) -> Result<Mould> {
    match arg.parse::<NamedMould>() {
        Ok(n) => Ok(n.tabulate(spec, depth)),
        Err(_) => load_file(Some(Path::new(arg))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run_ganit(args: &GanitArgs) -> Result<()> {
    let a = load_file(args.io.input.as_deref())?;
    let b = load_mould(&args.b, a.spec(), a.depth())?;
    emit(&ganit_apply(&b, &a)?.to_text(), args.io.out.as_deref())
}

fn run_expari(args: &ExpariArgs) -> Result<()> {
    let a = load_file(args.io.input.as_deref())?;
    let variant = args.arit_variant.into();
    let s = match args.method {
        ExpariMethod::Series => expari(&a, variant)?,
        ExpariMethod::Expansion => expari_expansion(&a, variant)?,
    };
    emit(&s.to_text(), args.io.out.as_deref())
}

fn run_unary(args: &UnaryArgs, f: impl FnOnce(&Mould) -> mouldkit::Result<Mould>) -> Result<()> {
    let m = load_file(args.input.as_deref())?;
    emit(&f(&m)?.to_text(), args.out.as_deref())
}

fn run_binary(args: &BinaryArgs, f: impl FnOnce(&Mould, &Mould) -> mouldkit::Result<Mould>) -> Result<()> {
    let a = load_file(Some(&args.a))?;
    let b = load_file(Some(&args.b))?;
    emit(&f(&a, &b)?.to_text(), args.out.as_deref())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval { mould, word, shape } => {
            let spec = parse_group(&shape.group)?;
            let w = Word::parse(&word, &spec).with_context(|| format!("bad word `{word}`"))?;
            let (value, conv) = match mould.parse::<NamedMould>() {
                Ok(n) => (n.eval_word(&w)?, n.convention()),
                Err(_) => {
                    let m = load_file(Some(Path::new(&mould)))?;
                    (m.evaluate(&w)?, m.convention())
                }
            };
            emit(&format!("{}\n", value.render(conv.family())), None)?;
        }
        Command::Op { op } => match op {
            Op::Mu(a) => run_binary(&a, Mould::mu)?,
            Op::Lu(a) => run_binary(&a, Mould::lu)?,
            Op::Exp(a) => run_unary(&a, Mould::exp)?,
            Op::Log(a) => run_unary(&a, Mould::log)?,
            Op::Ganit(a) => run_ganit(&a)?,
            Op::Expari(a) => run_expari(&a)?,
            Op::Pari(a) => run_unary(&a, |m| Ok(pari(m)))?,
            Op::Anti(a) => run_unary(&a, |m| Ok(anti(m)))?,
        },
        Command::Ganit(a) => run_ganit(&a)?,
        Command::Expari(a) => run_expari(&a)?,
        Command::Check { mould, kind, shape } => {
            let spec = parse_group(&shape.group)?;
            let m = load_mould(&mould, &spec, shape.depth)?;
            let report = check_symmetry(&m, kind)?;
            let mut text = String::new();
            for line in &report.lines {
                text.push_str(&line.render(m.convention()));
                text.push('\n');
            }
            emit(&text, None)?;
            return Ok(report.holds());
        }
        Command::Gexpand { b, word, shape } => {
            let spec = parse_group(&shape.group)?;
            let w = Word::parse(&word, &spec).with_context(|| format!("bad word `{word}`"))?;
            let sum = match b.parse::<NamedMould>() {
                Ok(n) => g_expand(&n, &w)?,
                Err(_) => g_expand(&load_file(Some(Path::new(&b)))?, &w)?,
            };
            emit(&format!("{}\n", sum.render(Convention::V.family())), None)?;
        }
        Command::Excoeff { composition, family } => {
            let c: Composition = composition.parse()?;
            let v = match family {
                CoeffFamily::Ex => ex_coeff(&c),
                CoeffFamily::C => c_coeff(&c),
            };
            emit(&format!("{v}\n"), None)?;
        }
        Command::Verify(v) => {
            let cfg = Config {
                spec: parse_group(&v.group)?,
                depth: v.depth,
                equality: match v.equality {
                    EqualityFlag::Canonical => Equality::Canonical,
                    EqualityFlag::Probabilistic => Equality::Probabilistic { trials: v.trials },
                },
                seed: v.seed,
                arit: v.arit_variant.into(),
            };
            if v.threads == 0 {
                bail!("thread count must be at least 1");
            }
            let report = verify::run(v.suite, &cfg, RunOptions { threads: v.threads })?;
            emit(&report.render(v.timings), v.out.as_deref())?;
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
