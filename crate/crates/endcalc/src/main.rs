use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use endcalc::corpus::{load_expectations, run_corpus, Expectations};
use endcalc::dsl;
use endcalc::literal::{parse_perm, parse_shift, parse_word};
use endcalc::report::{emit_json, emit_text, ReportOptions};
use endcalc::suites::{chain, check_witness, run_suite, Suite};
use endcalc_core::flux::{
    classify_shift, normalizer, phi, swindle_check, theta_tilde, verify_normalization, CutPosition,
};
use endcalc_core::{classify, Surface, Verdict};

const MISMATCH: u8 = 1;
const BAD_INPUT: u8 = 2;
const VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "endcalc",
    version,
    about = "Classify infinite-type surfaces by their end spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the surface described by a `.surf` file.
    Classify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Include and verify the obstruction witness.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        bounds: bool,
        /// Exit 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<ExpectVerdict>,
    },
    /// Flux computations on the end-space models.
    Flux {
        #[command(subcommand)]
        command: FluxCommand,
    },
    /// Classify every `.surf` file in a directory.
    Corpus {
        dir: PathBuf,
        /// TOML table of expected outcomes keyed by file stem.
        #[arg(long)]
        expectations: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FluxCommand {
    /// Crossing count of a permutation of ℤ at a cut.
    Phi {
        #[arg(long)]
        perm: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        cut: i64,
    },
    /// Flux and parity of a word on `n` rays.
    Theta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Classify a shift and verify its normalizer.
    Shift {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 200)]
        window: i64,
    },
    /// Check that a finitely supported permutation is a product of two shift conjugates.
    Swindle {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 200)]
        window: i64,
    },
    /// Run a seeded randomized suite.
    Check {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, env = "ENDCALC_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectVerdict {
    #[value(name = "YES")]
    Yes,
    #[value(name = "NO")]
    No,
    #[value(name = "UNKNOWN")]
    Unknown,
}

impl From<ExpectVerdict> for Verdict {
    fn from(v: ExpectVerdict) -> Verdict {
        match v {
            ExpectVerdict::Yes => Verdict::Yes,
            ExpectVerdict::No => Verdict::No,
            ExpectVerdict::Unknown => Verdict::Unknown,
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run_classify(
    path: &Path,
    json: bool,
    opts: ReportOptions,
    expect: Option<ExpectVerdict>,
) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(BAD_INPUT, format!("{}: {e}", path.display())),
    };
    let spec = match dsl::parse(&text) {
        Ok(s) => s,
        Err(e) => return fail(BAD_INPUT, format!("{}:{e}", path.display())),
    };
    let report = match classify(&spec) {
        Ok(r) => r,
        Err(diags) => {
            for d in &diags {
                eprintln!("error: {d}");
            }
            return ExitCode::from(BAD_INPUT);
        }
    };
    if json {
        println!("{}", emit_json(&report, opts));
    } else {
        print!("{}", emit_text(&report, opts));
    }
    if let (true, Some(w)) = (opts.witness, &report.tng.witness) {
        let surface = Surface::new(&spec).expect("spec already classified");
        if let Err(e) = check_witness(&surface, w, 200, 0) {
            return fail(VIOLATION, format!("witness check failed: {e}"));
        }
    }
    match expect {
        Some(v) if Verdict::from(v) != report.tng.verdict => fail(
            MISMATCH,
            format!(
                "verdict {} differs from expected {}",
                report.tng.verdict,
                Verdict::from(v)
            ),
        ),
        _ => ExitCode::SUCCESS,
    }
}

fn run_flux(cmd: FluxCommand) -> ExitCode {
    match cmd {
        FluxCommand::Phi { perm, cut } => match parse_perm(&perm) {
            Ok(f) => {
                println!("{}", phi(&f, CutPosition(cut)));
                ExitCode::SUCCESS
            }
            Err(e) => fail(BAD_INPUT, e),
        },
        FluxCommand::Theta { n, word } => {
            if n < 2 {
                return fail(BAD_INPUT, "need at least two rays");
            }
            let f = match parse_word(&word, n) {
                Ok(f) => f,
                Err(e) => return fail(BAD_INPUT, e),
            };
            match theta_tilde(&f, &chain(n)) {
                Ok((flux, parity)) => {
                    println!("({flux}, {parity})");
                    if n >= 3 {
                        eprintln!("note: the flux coordinate is not conjugation invariant for three or more rays");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(BAD_INPUT, e),
            }
        }
        FluxCommand::Shift { spec, window } => {
            let s = match parse_shift(&spec) {
                Ok(s) => s,
                Err(e) => return fail(BAD_INPUT, e),
            };
            println!("kind: {:?}", classify_shift(&s));
            match normalizer(&s) {
                Ok(t) => {
                    if let Some(twists) = t.half_twists() {
                        println!("half twists: {twists:?}");
                    } else {
                        println!("half twists: one block per excluded run");
                    }
                    if verify_normalization(&s, &t, window) {
                        println!("normalized on [-{window}, {window}]");
                        ExitCode::SUCCESS
                    } else {
                        fail(VIOLATION, "normalization check failed")
                    }
                }
                Err(e) => {
                    println!("{e}");
                    ExitCode::SUCCESS
                }
            }
        }
        FluxCommand::Swindle { perm, k, window } => {
            let f = match parse_perm(&perm) {
                Ok(f) => f,
                Err(e) => return fail(BAD_INPUT, e),
            };
            match swindle_check(&f, k, window) {
                Ok(true) => {
                    println!("swindle holds on [-{window}, {window}]");
                    ExitCode::SUCCESS
                }
                Ok(false) => fail(VIOLATION, "swindle check failed"),
                Err(e) => fail(BAD_INPUT, e),
            }
        }
        FluxCommand::Check { suite, n, seed } => {
            println!("seed: {seed}");
            let report = run_suite(suite, n, seed);
            println!("{suite:?}: {report}");
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(VIOLATION)
            }
        }
    }
}

fn run_corpus_cmd(dir: &Path, expectations: Option<&Path>) -> ExitCode {
    let expectations = match expectations.map(load_expectations) {
        None => Expectations::new(),
        Some(Ok(e)) => e,
        Some(Err(e)) => return fail(BAD_INPUT, e),
    };
    match run_corpus(dir, &expectations) {
        Ok(run) => {
            print!("{}", run.table());
            ExitCode::from(run.exit_code() as u8)
        }
        Err(e) => fail(BAD_INPUT, e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Classify {
            path,
            json,
            witness,
            bounds,
            expect,
        } => run_classify(&path, json, ReportOptions { witness, bounds }, expect),
        Command::Flux { command } => run_flux(command),
        Command::Corpus { dir, expectations } => run_corpus_cmd(&dir, expectations.as_deref()),
    }
}
