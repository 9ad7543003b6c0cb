use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lsat::executor::{ScoreMode, SearchLimits};
use lsat::harness::{
    load_dataset, overall_score, run_ar_traced, run_lr_extend, scaled_score, ArOptions, OnFailure, ScoreScale,
};
use lsat::interp::{annotate_positions, TriggerLexicon};
use lsat::program::parse_program_file;

const USAGE: u8 = 1;
const DATA: u8 = 2;
const LIMITS: u8 = 3;

#[derive(Parser)]
#[command(name = "lsat", version, about = "Symbolic solvers for LSAT-style questions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Count,
    Ratio,
}

#[derive(Clone, Copy, ValueEnum)]
enum Failure {
    Abstain,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Solve logic-game records and print an evaluation report.
    SolveAr {
        dataset: PathBuf,
        /// Trigger lexicon file; the bundled one by default.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ratio")]
        mode: Mode,
        /// Search limits as MAX_NODES,MAX_ASSIGNMENTS.
        #[arg(long, value_parser = parse_limits)]
        limits: Option<SearchLimits>,
        /// Seed for option padding and random answers.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "abstain")]
        on_failure: Failure,
        /// Ignore annotated programs and interpret the text instead.
        #[arg(long)]
        interpret: bool,
        /// Write the search tree as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Extend logical-reasoning contexts and print the artifacts.
    ExtendLr {
        dataset: PathBuf,
        /// Directory for artifacts.jsonl and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse a program file and print each program in canonical form.
    ParseProgram { file: PathBuf },
    /// Weighted overall and scaled scores from section percentages.
    Score {
        #[arg(long)]
        ar: f64,
        #[arg(long)]
        lr: f64,
        #[arg(long)]
        rc: f64,
        /// Score scale JSON; the bundled one by default.
        #[arg(long)]
        scale: Option<PathBuf>,
    },
    /// Add line and paragraph marks to a text file.
    MarkPositions { file: PathBuf },
}

fn parse_limits(s: &str) -> Result<SearchLimits, String> {
    let (n, m) = s.split_once(',').ok_or("expected MAX_NODES,MAX_ASSIGNMENTS")?;
    let parse = |t: &str| match t.trim().parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("{t:?} is not a positive integer")),
    };
    Ok(SearchLimits {
        max_nodes: parse(n)?,
        max_assignments: parse(m)?,
    })
}

struct Fail(u8, String);

fn data<E: std::fmt::Display>(e: E) -> Fail {
    Fail(DATA, e.to_string())
}

fn print_json(value: &serde_json::Value) -> Result<(), Fail> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(data)?;
    writeln!(out).map_err(data)
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(DATA, format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.command {
        Command::SolveAr {
            dataset,
            lexicon,
            mode,
            limits,
            seed,
            on_failure,
            interpret,
            trace,
        } => {
            let records = load_dataset(&dataset, seed).map_err(data)?;
            let lex = match lexicon {
                Some(p) => TriggerLexicon::load(p).map_err(data)?,
                None => TriggerLexicon::starter(),
            };
            let opts = ArOptions {
                limits: limits.unwrap_or_default(),
                mode: match mode {
                    Mode::Count => ScoreMode::Count,
                    Mode::Ratio => ScoreMode::Ratio,
                },
                on_failure: match on_failure {
                    Failure::Abstain => OnFailure::Abstain,
                    Failure::Random => OnFailure::Random { seed },
                },
                gold_programs: !interpret,
            };
            let mut sink = match &trace {
                Some(p) => Some(BufWriter::new(
                    fs::File::create(p).map_err(|e| Fail(DATA, format!("{}: {e}", p.display())))?,
                )),
                None => None,
            };
            let mut trace_error = None;
            let report = run_ar_traced(&records, &lex, &opts, |id, event| {
                if let Some(w) = sink.as_mut() {
                    let line = json!({"record": id, "node": event.node, "parent": event.parent, "program": event.program, "verdict": event.verdict});
                    if let Err(e) = writeln!(w, "{line}") {
                        trace_error.get_or_insert(e);
                    }
                }
            });
            if let Some(mut w) = sink {
                w.flush().map_err(data)?;
            }
            if let Some(e) = trace_error {
                return Err(data(e));
            }
            let mut value = serde_json::to_value(&report).map_err(data)?;
            if let Some(stats) = report.interpretation {
                value["coverage"] = json!(stats.coverage());
                value["precision"] = json!(stats.precision());
            }
            value["accuracy"] = json!(lsat::harness::accuracy(&report));
            print_json(&value)?;
            Ok(if report.limits_exceeded > 0 { LIMITS } else { 0 })
        }
        Command::ExtendLr { dataset, out, seed } => {
            let records = load_dataset(&dataset, seed).map_err(data)?;
            let (artifacts, report) = run_lr_extend(&records);
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(data)?;
                    let mut lines = String::new();
                    for a in &artifacts {
                        lines.push_str(&serde_json::to_string(a).map_err(data)?);
                        lines.push('\n');
                    }
                    fs::write(dir.join("artifacts.jsonl"), lines).map_err(data)?;
                    let report = serde_json::to_string_pretty(&report).map_err(data)?;
                    fs::write(dir.join("report.json"), report + "\n").map_err(data)?;
                }
                None => print_json(&json!({"artifacts": artifacts, "report": report}))?,
            }
            Ok(0)
        }
        Command::ParseProgram { file } => {
            let text = read(&file)?;
            let mut failed = false;
            let entries: Vec<serde_json::Value> = parse_program_file(&text)
                .into_iter()
                .map(|(line, result)| match result {
                    Ok(p) => json!({
                        "line": line,
                        "program": p.to_string(),
                        "kinds": p.kinds().iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                    }),
                    Err(e) => {
                        failed = true;
                        json!({"line": line, "error": e.to_string()})
                    }
                })
                .collect();
            print_json(&json!(entries))?;
            Ok(if failed { DATA } else { 0 })
        }
        Command::Score { ar, lr, rc, scale } => {
            for (name, v) in [("ar", ar), ("lr", lr), ("rc", rc)] {
                if !(0.0..=100.0).contains(&v) {
                    return Err(Fail(
                        USAGE,
                        format!("--{name} must be a percentage in [0, 100], got {v}"),
                    ));
                }
            }
            let scale = match scale {
                Some(p) => ScoreScale::load(p).map_err(data)?,
                None => ScoreScale::bundled(),
            };
            let overall = overall_score(ar, lr, rc);
            print_json(&json!({
                "overall": overall,
                "scaled": {
                    "ar": scaled_score(ar, &scale),
                    "lr": scaled_score(lr, &scale),
                    "rc": scaled_score(rc, &scale),
                    "overall": scaled_score(overall, &scale),
                }
            }))?;
            Ok(0)
        }
        Command::MarkPositions { file } => {
            let text = read(&file)?;
            print_json(&json!({"text": annotate_positions(&text)}))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
