//! Command-line front end.
//!
//! [`RunConfig`] is the parsed command line; [`run`] executes it and returns
//! the process exit status: `0` when every verdict passes, `1` on a failed
//! verdict, `2` when a hypothesis check refuses to run, `64` on usage errors.

mod commands;
mod render;
mod suites;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use suites::{
    bridge_suite, suite_cases, BridgeCase, BridgeSuiteReport, SuiteName, SuiteReport,
};

use crate::error::Error;
use crate::spaces::{SpanReport, Verdict, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FAILED: i32 = 1;
pub const EXIT_HYPOTHESIS_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// Rows of moduli written `3,4;5,7`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grid(pub Vec<Vec<u64>>);

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<u64>()
                            .map_err(|e| format!("bad modulus {x:?} in grid: {e}"))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.0.iter().map(|r| join(r)).collect();
        f.write_str(&rows.join(";"))
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(
    name = "cmverify",
    version,
    about = "Exact verification of Chowla-Milnor space dimensions"
)]
pub struct RunConfig {
    /// Working precision in bits for numeric checks.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: all available).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Refuse ambient fields Q(zeta_N) with phi(N) above this bound.
    #[arg(long = "max-phi", global = true, default_value_t = 256)]
    pub max_phi: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Args)]
pub struct TheoremArgs {
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    /// Rows of moduli, e.g. `3,4;5,7`.
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Conductor of the coefficient field Q(zeta_m).
    #[arg(long)]
    pub m: Option<u64>,
}

impl TheoremArgs {
    fn to_args(&self, out: &mut Vec<String>) {
        if let Some(k) = self.k {
            out.extend(["--k".into(), k.to_string()]);
        }
        if !self.ks.is_empty() {
            out.extend(["--ks".into(), join(&self.ks)]);
        }
        if !self.q.is_empty() {
            out.extend(["--q".into(), join(&self.q)]);
        }
        if let Some(g) = &self.grid {
            out.extend(["--grid".into(), g.to_string()]);
        }
        if let Some(m) = self.m {
            out.extend(["--m".into(), m.to_string()]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NumericFn {
    /// zeta(k, x) for rational 0 < x <= 1.
    Hurwitz,
    /// L(k, chi) with chi the canonical index mod q.
    DirichletL,
    /// cot^(k-1)(pi a / q).
    Cot,
    /// zeta(k) for even k, by Hurwitz and by the exact normalization.
    Zeta,
    Pi,
    Catalan,
    /// L(k, chi) from the exact coordinates Lambda(k, chi), any k >= 1.
    LCoords,
    /// One bridge residual; pick it with --kind.
    Bridge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BridgeKindArg {
    Reflection,
    Rep,
    LValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact C_k(a, q) by both routes, with a numeric check.
    Cot {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long)]
        q: u64,
    },
    /// Character table mod q with the certified inverse matrix.
    Chars {
        #[arg(long)]
        q: u64,
    },
    /// Generators of V+_k(q), or of a product space with --ks.
    Gens {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        ks: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Drop the index (1, ..., 1) from the product.
        #[arg(long)]
        drop_base: bool,
    },
    /// Rank of V+_k(q_1) + ... + V+_k(q_l), over Q(zeta_m) with --m.
    Rank {
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// Expected rank; defaults to the closed form for coprime moduli.
        #[arg(long, allow_negative_numbers = true)]
        expect: Option<i64>,
    },
    /// Kernel of the sum map, for moduli (--k, --q) or product rows (--ks, --grid).
    Kernel(TheoremArgs),
    /// dim V+_k(q1) cap V+_k(q2).
    Intersect {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q1: u64,
        #[arg(long)]
        q2: u64,
    },
    /// Verify one theorem instance.
    Verify {
        theorem: crate::spaces::TheoremId,
        #[command(flatten)]
        args: TheoremArgs,
    },
    /// Run a desk-scale battery.
    Suite { name: SuiteName },
    /// High-precision evaluation of one special function.
    Numeric {
        func: NumericFn,
        #[arg(long)]
        k: Option<u32>,
        /// Rational argument `p/q` for hurwitz.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        chi: Option<usize>,
        #[arg(long, value_enum)]
        kind: Option<BridgeKindArg>,
    },
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

impl RunConfig {
    /// Parses a full command line (program name first).
    pub fn parse_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        RunConfig::try_parse_from(args)
    }

    /// The canonical textual form; `parse_args(["cmverify", to_args()..])` gives back `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = vec![
            "--precision".to_string(),
            self.precision.to_string(),
            "--format".into(),
            self.format.as_str().into(),
            "--max-phi".into(),
            self.max_phi.to_string(),
        ];
        if let Some(j) = self.jobs {
            out.extend(["--jobs".into(), j.to_string()]);
        }
        let mut b = ArgBuf(out);
        match &self.command {
            Command::Cot { k, a, q } => {
                b.word("cot");
                b.flag("k", k.to_string());
                b.flag("a", a.to_string());
                b.flag("q", q.to_string());
            }
            Command::Chars { q } => {
                b.word("chars");
                b.flag("q", q.to_string());
            }
            Command::Gens {
                k,
                ks,
                q,
                drop_base,
            } => {
                b.word("gens");
                if let Some(k) = k {
                    b.flag("k", k.to_string());
                }
                if !ks.is_empty() {
                    b.flag("ks", join(ks));
                }
                b.flag("q", join(q));
                if *drop_base {
                    b.word("--drop-base");
                }
            }
            Command::Rank { k, q, m, expect } => {
                b.word("rank");
                b.flag("k", k.to_string());
                b.flag("q", join(q));
                if let Some(m) = m {
                    b.flag("m", m.to_string());
                }
                if let Some(e) = expect {
                    b.flag("expect", e.to_string());
                }
            }
            Command::Kernel(args) => {
                b.word("kernel");
                let mut v = Vec::new();
                args.to_args(&mut v);
                b.0.extend(v);
            }
            Command::Intersect { k, q1, q2 } => {
                b.word("intersect");
                b.flag("k", k.to_string());
                b.flag("q1", q1.to_string());
                b.flag("q2", q2.to_string());
            }
            Command::Verify { theorem, args } => {
                b.word("verify");
                b.word(theorem.as_str());
                let mut v = Vec::new();
                args.to_args(&mut v);
                b.0.extend(v);
            }
            Command::Suite { name } => {
                b.word("suite");
                b.word(&value_name(name));
            }
            Command::Numeric {
                func,
                k,
                x,
                a,
                q,
                chi,
                kind,
            } => {
                b.word("numeric");
                b.word(&value_name(func));
                if let Some(k) = k {
                    b.flag("k", k.to_string());
                }
                if let Some(x) = x {
                    b.flag("x", x.clone());
                }
                if let Some(a) = a {
                    b.flag("a", a.to_string());
                }
                if let Some(q) = q {
                    b.flag("q", q.to_string());
                }
                if let Some(c) = chi {
                    b.flag("chi", c.to_string());
                }
                if let Some(kind) = kind {
                    b.flag("kind", value_name(kind));
                }
            }
        }
        b.0
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            max_phi: self.max_phi,
            precision: self.precision,
        }
    }
}

struct ArgBuf(Vec<String>);

impl ArgBuf {
    fn word(&mut self, w: &str) {
        self.0.push(w.to_string());
    }

    fn flag(&mut self, name: &str, v: String) {
        self.0.push(format!("--{name}"));
        self.0.push(v);
    }
}

/// Exit status for a batch of verdicts: hypothesis failures dominate.
pub fn exit_code<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> i32 {
    let mut code = EXIT_OK;
    for v in verdicts {
        match v {
            Verdict::HypothesisFailed => return EXIT_HYPOTHESIS_FAILED,
            Verdict::Fail => code = EXIT_VERDICT_FAILED,
            Verdict::Pass => {}
        }
    }
    code
}

pub fn report_exit_code(reports: &[SpanReport]) -> i32 {
    exit_code(reports.iter().map(|r| &r.verdict))
}

/// Executes `cfg`, writing the report stream to `out` and diagnostics to `err`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
        {
            Ok(pool) => pool.install(|| commands::compute(cfg)),
            Err(e) => Err(Error::Domain(format!("cannot start {n} workers: {e}"))),
        },
        None => commands::compute(cfg),
    };
    let result = result.and_then(|r| commands::write(cfg, &r, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Parses `args` (program name first) and runs; the whole binary in one call.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::parse_args(args) {
        Ok(cfg) => run(&cfg, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> RunConfig {
        RunConfig::parse_args(std::iter::once("cmverify").chain(s.split_whitespace())).unwrap()
    }

    #[test]
    fn round_trip_through_args() {
        for line in [
            "cot --k 2 --a 1 --q 3",
            "cot --k 2 --a -1 --q 5 --format text",
            "chars --q 12",
            "gens --k 2 --q 5",
            "gens --ks 2,3 --q 3,5 --drop-base",
            "rank --k 2 --q 3,4,5 --expect 7 --m 4",
            "kernel --ks 2,2 --grid 3,4;5,7",
            "intersect --k 3 --q1 12 --q2 18 --jobs 2",
            "verify thm9 --ks 2,2 --grid 3,4;5,7 --max-phi 128",
            "verify cor1 --k 2 --q 5 --m 5",
            "suite numerics-bridge --precision 128 --format csv",
            "numeric hurwitz --k 3 --x 1/4",
            "numeric bridge --kind l-value --k 2 --q 5 --chi 2",
        ] {
            let cfg = parse(line);
            let again =
                RunConfig::parse_args(std::iter::once("cmverify".to_string()).chain(cfg.to_args()))
                    .unwrap();
            assert_eq!(cfg, again, "{line}");
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = |s: &str| {
            RunConfig::parse_args(std::iter::once("cmverify").chain(s.split_whitespace())).is_err()
        };
        assert!(bad("verify thm99 --k 2"));
        assert!(bad("cot --k 2 --q 3"));
        assert!(bad("suite everything"));
        assert!(bad("numeric hurwitz --precision 32"));
        assert!(bad("rank --k 2 --q 3 --format xml"));
        assert!(bad("kernel --grid 3,x"));
    }

    #[test]
    fn grid_text_form() {
        let g: Grid = "3,4;5,7".parse().unwrap();
        assert_eq!(g.0, vec![vec![3, 4], vec![5, 7]]);
        assert_eq!(g.to_string(), "3,4;5,7");
    }

    #[test]
    fn exit_code_precedence() {
        use Verdict::*;
        assert_eq!(exit_code(&[Pass, Pass]), 0);
        assert_eq!(exit_code(&[Pass, Fail]), 1);
        assert_eq!(exit_code(&[Fail, HypothesisFailed, Pass]), 2);
    }
}
