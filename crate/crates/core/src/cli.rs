//! Command-line front end.
//!
//! Exit codes: 0 success, 1 cryptographic failure or mismatch (including a
//! bench bound violation), 2 usage error or malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attacks::{attack, AttackPlan};
use crate::bench::{bench_span_closure, summarize, to_csv, Grid};
use crate::error::Error;
use crate::linalg::{Field, VectorF, DEFAULT_MODULUS};
use crate::platform::{
    make_block_fixture, make_polynomial_fixture, FixtureFamily, FixtureFile, ProtocolFixture,
    WordLength,
};
use crate::protocols::{
    run_generic, run_harley, run_kolee, run_wang, HonestResult, ProtocolId, Schedule, Transcript,
};
use crate::wire::{KeyFile, Payload};

#[derive(Debug, Parser)]
#[command(name = "lindecomp", version, about = "Linear decomposition attacks on sandwich key exchanges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate an honest run; writes transcript.json and key.json.
    Run(RunArgs),
    /// Recover the key from a transcript and print it as JSON.
    Attack(AttackArgs),
    /// Attack a transcript and compare with a stored key file.
    Verify(VerifyArgs),
    /// Measure span-closure cost over a grid; writes bench.csv and bench_summary.json.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// wang | kolee | harley | generic
    #[arg(long)]
    pub protocol: ProtocolId,
    #[arg(long, default_value_t = DEFAULT_MODULUS)]
    pub modulus: u64,
    /// Matrix size; block fixtures split it as n − ⌊n/2⌋, ⌊n/2⌋.
    #[arg(long, default_value_t = 4, conflicts_with = "blocks")]
    pub dim: usize,
    /// Block sizes `n1,n2` for block fixtures.
    #[arg(long, value_parser = parse_blocks)]
    pub blocks: Option<(usize, usize)>,
    /// `block`, `polynomial`, or a path to a fixture JSON file.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Generators per side.
    #[arg(long, default_value_t = 2)]
    pub gens: usize,
    /// Word length range for private elements, e.g. `3..8`.
    #[arg(long, default_value = "3..8")]
    pub word_len: WordLength,
    #[arg(long)]
    pub seed: u64,
    /// Harley plaintext: comma-separated entries, `0x` prefix for hex.
    #[arg(long)]
    pub message: Option<String>,
    /// Generic schedule: `wang`, `kolee`, `single` or a JSON file.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    pub transcript: PathBuf,
    /// Attack plan: `wang`, `kolee` or a JSON file. Required for generic transcripts.
    #[arg(long)]
    pub plan: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub transcript: PathBuf,
    pub key: PathBuf,
    #[arg(long)]
    pub plan: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// e.g. `n=2..5;k=1..3;p=1009`; missing keys take the default grid.
    #[arg(long, default_value = "")]
    pub grid: String,
    /// Seeds per grid cell.
    #[arg(long, default_value_t = 3)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: msg.into(),
        }
    }

    fn crypto(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::AttackFailed { .. } | Error::NotInSpan => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse_blocks(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected n1,n2")?;
    let a = a.trim().parse().map_err(|_| "bad n1")?;
    let b = b.trim().parse().map_err(|_| "bad n2")?;
    Ok((a, b))
}

/// Comma-separated entries, hex with a `0x` prefix, decimal otherwise.
pub fn parse_message(field: Field, s: &str) -> crate::Result<VectorF> {
    let mut vals = Vec::new();
    for item in s.split(',').map(str::trim) {
        let v = match item.strip_prefix("0x").or_else(|| item.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => item.parse(),
        }
        .map_err(|_| Error::Malformed(format!("bad message entry {item:?}")))?;
        if v >= field.modulus() {
            return Err(Error::Malformed(format!("message entry {v} not reduced")));
        }
        vals.push(v);
    }
    Ok(VectorF::from_values(field, vals))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_plan(spec: Option<&str>) -> CliResult<Option<AttackPlan>> {
    Ok(match spec {
        None => None,
        Some("wang") => Some(AttackPlan::wang()),
        Some("kolee") => Some(AttackPlan::kolee()),
        Some(path) => Some(AttackPlan::from_json(&read(Path::new(path))?)?),
    })
}

fn load_schedule(spec: Option<&str>) -> CliResult<Schedule> {
    Ok(match spec {
        None | Some("wang") => Schedule::wang(),
        Some("kolee") => Schedule::kolee(),
        Some("single") => Schedule::single(),
        Some(path) => Schedule::from_json(&read(Path::new(path))?)?,
    })
}

fn build_fixture(a: &RunArgs) -> CliResult<ProtocolFixture> {
    let field = Field::new(a.modulus)?;
    let default_family = match a.protocol {
        ProtocolId::Harley => FixtureFamily::Polynomial,
        _ => FixtureFamily::Block,
    };
    let family = match a.fixture.as_deref() {
        None => default_family,
        Some(s) => match s.parse::<FixtureFamily>() {
            Ok(f) => f,
            Err(_) => {
                let file: FixtureFile = serde_json::from_str(&read(Path::new(s))?)
                    .map_err(|e| Failure::usage(format!("{s}: {e}")))?;
                return Ok(file.into_fixture()?);
            }
        },
    };
    if a.gens == 0 {
        return Err(Failure::usage("--gens must be at least 1"));
    }
    let fx = match family {
        FixtureFamily::Block => {
            let (n1, n2) = a.blocks.unwrap_or((a.dim - a.dim / 2, a.dim / 2));
            if n1 == 0 || n2 == 0 {
                return Err(Failure::usage("block sizes must be at least 1"));
            }
            make_block_fixture(n1, n2, a.gens, a.gens, field, a.seed)?
        }
        FixtureFamily::Polynomial => {
            if a.blocks.is_some() {
                return Err(Failure::usage("--blocks applies to block fixtures only"));
            }
            if a.dim == 0 {
                return Err(Failure::usage("--dim must be at least 1"));
            }
            make_polynomial_fixture(a.dim, a.gens, field, a.seed)?
        }
    };
    Ok(fx)
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> CliResult<()> {
    let fx = build_fixture(a)?;
    if a.message.is_some() && a.protocol != ProtocolId::Harley {
        return Err(Failure::usage("--message applies to harley only"));
    }
    if a.schedule.is_some() && a.protocol != ProtocolId::Generic {
        return Err(Failure::usage("--schedule applies to generic only"));
    }
    // Private choices use a stream separate from fixture generation.
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    rng.set_stream(1);
    let res: HonestResult = match a.protocol {
        ProtocolId::Wang => run_wang(&fx, a.word_len, &mut rng)?,
        ProtocolId::Kolee => run_kolee(&fx, a.word_len, &mut rng)?,
        ProtocolId::Harley => {
            let x = match a.message.as_deref() {
                Some(m) => parse_message(fx.field, m)?,
                None => VectorF::random(fx.field, fx.dimension, &mut rng),
            };
            if x.len() != fx.dimension {
                return Err(Failure::usage(format!(
                    "message has {} entries, dimension is {}",
                    x.len(),
                    fx.dimension
                )));
            }
            run_harley(&fx, &x, a.word_len, &mut rng)?
        }
        ProtocolId::Generic => {
            run_generic(&fx, &load_schedule(a.schedule.as_deref())?, a.word_len, &mut rng)?
        }
    };
    if !res.keys_agree() {
        return Err(Failure::crypto("honest parties disagree on the key"));
    }
    fs::create_dir_all(&a.out).map_err(|e| Failure::usage(format!("{}: {e}", a.out.display())))?;
    let key = KeyFile::new(a.protocol.as_str(), fx.dimension, &res.key_alice);
    let tpath = a.out.join("transcript.json");
    let kpath = a.out.join("key.json");
    fs::write(&tpath, res.transcript.to_json() + "\n").map_err(Error::from)?;
    fs::write(&kpath, key.to_json() + "\n").map_err(Error::from)?;
    let _ = writeln!(
        out,
        "{} run: n={} p={} seed={} messages={} -> {}, {}",
        a.protocol,
        fx.dimension,
        fx.field.modulus(),
        a.seed,
        res.transcript.messages().len(),
        tpath.display(),
        kpath.display()
    );
    Ok(())
}

fn recover(transcript: &Path, plan: Option<&str>) -> CliResult<(Transcript, Payload)> {
    let t = Transcript::from_json(&read(transcript)?)?;
    let plan = load_plan(plan)?;
    let key = attack(&t, plan.as_ref())?;
    Ok((t, key))
}

fn cmd_attack(a: &AttackArgs, out: &mut dyn Write) -> CliResult<()> {
    let (t, key) = recover(&a.transcript, a.plan.as_deref())?;
    let kf = KeyFile::new(t.protocol.as_str(), t.public.dimension, &key);
    let _ = writeln!(out, "{}", kf.to_json());
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let stored = KeyFile::from_json(&read(&a.key)?)?;
    let (t, key) = recover(&a.transcript, a.plan.as_deref())?;
    let recovered = KeyFile::new(t.protocol.as_str(), t.public.dimension, &key);
    if recovered != stored {
        return Err(Failure::crypto("recovered key does not match the key file"));
    }
    let _ = writeln!(out, "ok: recovered key matches {}", a.key.display());
    Ok(())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let grid: Grid = a.grid.parse()?;
    if a.seeds == 0 {
        return Err(Failure::usage("--seeds must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let records = bench_span_closure(&grid, a.seeds, &mut rng);
    let summary = summarize(&records);
    fs::create_dir_all(&a.out).map_err(|e| Failure::usage(format!("{}: {e}", a.out.display())))?;
    fs::write(a.out.join("bench.csv"), to_csv(&records)).map_err(Error::from)?;
    let json = serde_json::to_string_pretty(&summary).map_err(Error::from)?;
    fs::write(a.out.join("bench_summary.json"), json + "\n").map_err(Error::from)?;
    for c in &summary.cells {
        let _ = writeln!(
            out,
            "n={} k={} p={}: dim {} lists {} candidates {} ({} µs)",
            c.n, c.k, c.p, c.median_basis_dim, c.median_productive_lists, c.median_candidates, c.median_micros
        );
    }
    let bad: Vec<_> = records.iter().filter(|r| !r.ok()).collect();
    if !bad.is_empty() {
        let detail: Vec<String> = bad
            .iter()
            .map(|r| format!("n={} k={} seed={}: {}", r.n, r.k, r.seed, r.violations.join("; ")))
            .collect();
        return Err(Failure::crypto(format!(
            "{} bound violation(s):\n{}",
            bad.len(),
            detail.join("\n")
        )));
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Attack(a) => cmd_attack(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

/// Parses `std::env::args`, runs, and maps the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn message_parsing() {
        let f = Field::new(1009).unwrap();
        let v = parse_message(f, "0x10, 2,0X3e8,7").unwrap();
        assert_eq!(v.values(), &[16, 2, 1000, 7]);
        assert!(parse_message(f, "1009").is_err());
        assert!(parse_message(f, "0xzz").is_err());
        assert!(parse_message(f, "1,,2").is_err());
    }

    #[test]
    fn blocks_parsing() {
        assert_eq!(parse_blocks("2,3"), Ok((2, 3)));
        assert!(parse_blocks("2").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::NotInSpan).code, 1);
        assert_eq!(Failure::from(Error::Malformed("x".into())).code, 2);
        assert_eq!(Failure::from(Error::InvalidPlan("x".into())).code, 2);
    }
}
