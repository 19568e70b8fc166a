use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use orbitrace::report::{self, Kind, Report};

const EXIT_SCHEMA: u8 = 2;
const EXIT_COMPUTE: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

#[derive(Parser)]
#[command(name = "orbitrace", version, about = "Trace invariants of circle and torus actions")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Seifert,
    S1cw,
    T2cw,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Seifert => Kind::Seifert,
            KindArg::S1cw => Kind::S1cw,
            KindArg::T2cw => Kind::T2cw,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute every invariant for one input file.
    Report {
        #[arg(long, value_enum)]
        kind: KindArg,
        file: PathBuf,
    },
    /// Run both pipelines on every `.json` file in a directory.
    Crosscheck { dir: PathBuf },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<orbitrace::Error>().is_some() {
        EXIT_COMPUTE
    } else {
        EXIT_SCHEMA
    }
}

fn load(kind: Kind, path: &Path) -> Result<report::Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(report::parse(kind, &text)?)
}

fn emit(format: Format, json: &serde_json::Value, text: impl FnOnce() -> String) -> Result<()> {
    let out = match format {
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
        Format::Text => text(),
    };
    match io::stdout().write_all(out.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn cmd_report(format: Format, kind: Kind, path: &Path) -> Result<u8> {
    let input = load(kind, path)?;
    let r = report::report(&input)?;
    emit(format, &serde_json::to_value(&r)?, || r.to_text())?;
    Ok(if r.agreement() { 0 } else { EXIT_DISAGREE })
}

#[derive(serde::Serialize)]
struct Entry {
    file: String,
    kind: Option<Kind>,
    status: &'static str,
    #[serde(skip_serializing_if = "String::is_empty")]
    detail: String,
}

#[derive(serde::Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    errors: usize,
    entries: Vec<Entry>,
}

fn check_file(path: &Path) -> (Option<Kind>, Result<Report>) {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return (None, Err(e.into())),
    };
    let kind = match report::detect_kind(&text) {
        Ok(k) => k,
        Err(e) => return (None, Err(e.into())),
    };
    let r = report::parse(kind, &text).map_err(anyhow::Error::from).and_then(|i| Ok(report::report(&i)?));
    (Some(kind), r)
}

fn cmd_crosscheck(format: Format, dir: &Path) -> Result<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut entries = Vec::new();
    let mut worst = 0u8;
    for f in &files {
        let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let (kind, r) = check_file(f);
        let entry = match r {
            Ok(r) if r.agreement() => Entry { file: name, kind, status: "pass", detail: String::new() },
            Ok(r) => {
                worst = worst.max(EXIT_DISAGREE);
                let failed: Vec<String> = r.checks().iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
                Entry { file: name, kind, status: "fail", detail: failed.join(", ") }
            }
            Err(e) => {
                let code = exit_code(&e);
                worst = if worst == EXIT_DISAGREE { worst } else { worst.max(code) };
                Entry { file: name, kind, status: "error", detail: format!("{e:#}") }
            }
        };
        entries.push(entry);
    }
    let count = |s: &str| entries.iter().filter(|e| e.status == s).count();
    let summary =
        Summary { total: entries.len(), passed: count("pass"), failed: count("fail"), errors: count("error"), entries };
    emit(format, &serde_json::to_value(&summary)?, || {
        let mut s = String::new();
        for e in &summary.entries {
            s.push_str(&format!("{:5} {}", e.status, e.file));
            if !e.detail.is_empty() {
                s.push_str(&format!(" ({})", e.detail));
            }
            s.push('\n');
        }
        s.push_str(&format!("{}/{} passed\n", summary.passed, summary.total));
        s
    })?;
    Ok(worst)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Report { kind, file } => cmd_report(cli.format, (*kind).into(), file),
        Command::Crosscheck { dir } => cmd_crosscheck(cli.format, dir),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
