//! `soergel`: exact computations with Soergel diagrammatics and Rouquier complexes.
//!
//! Every command prints a JSON certificate on stdout (or to `--out`). Exit code 0
//! means all exact checks passed, 1 means a check failed, 2 means a usage or
//! configuration error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use soergel_core::certificate::{generate, replay, Certificate, Inputs};
use soergel_core::RealizationConfig;

#[derive(Parser)]
#[command(name = "soergel", version, about = "Certified computations with Soergel bimodules and Rouquier complexes")]
struct Cli {
    /// Realization: a preset name (A1xA1, A2, B2, A3, A1xA2, G2) or a JSON file.
    #[arg(long, global = true, default_value = "A2")]
    system: String,
    /// Write the certificate to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print human-readable tables to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every generating relation as an exact matrix identity.
    Relations,
    /// Print the Rouquier complex of a braid word.
    Complex {
        /// Braid word, e.g. "s s t-".
        #[arg(long)]
        braid: String,
    },
    /// Check d² = 0 for the Rouquier complex of a braid word.
    D2check {
        /// Braid word.
        #[arg(long)]
        braid: String,
    },
    /// Euler characteristic of the Rouquier complex in the Hecke algebra.
    Euler {
        /// Braid word.
        #[arg(long)]
        braid: String,
    },
    /// Solve for the braid-relation map between the two alternating words.
    Gamma {
        /// Generator pair, e.g. "s,t".
        #[arg(long)]
        pair: String,
    },
    /// Certificates for F_s F_s^-1 ≃ 1 ≃ F_s^-1 F_s.
    Inverse {
        /// Generator name.
        #[arg(long = "gen")]
        generator: String,
    },
    /// Hom between the positive lift of w and the negative lift of v.
    RouquierFormula {
        /// Reduced word w.
        #[arg(long)]
        w: String,
        /// Reduced word v.
        #[arg(long)]
        v: String,
        /// Upper end of the polynomial window for the cohomology cross-check.
        #[arg(long)]
        window: Option<i32>,
    },
    /// Windowed cohomology of the Hom complex between two Rouquier complexes.
    Hom {
        /// Source braid word.
        #[arg(long)]
        source: String,
        /// Target braid word.
        #[arg(long)]
        target: String,
        /// Upper end of the polynomial window.
        #[arg(long)]
        window: Option<i32>,
    },
    /// Re-verify a certificate file.
    Replay {
        /// Certificate JSON file.
        file: PathBuf,
    },
}

/// Resolves `--system`: an existing file, then `$SOERGEL_SYSTEM_PATH/<name>.json`, then a built-in preset.
fn load_system(name: &str) -> anyhow::Result<RealizationConfig> {
    let read = |p: &Path| -> anyhow::Result<RealizationConfig> {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        Ok(RealizationConfig::from_json(&text)?)
    };
    let direct = Path::new(name);
    if direct.is_file() {
        return read(direct);
    }
    if let Ok(dir) = std::env::var("SOERGEL_SYSTEM_PATH") {
        let p = Path::new(&dir).join(format!("{name}.json"));
        if p.is_file() {
            return read(&p);
        }
    }
    RealizationConfig::preset(name).ok_or_else(|| anyhow!("unknown system `{name}`: not a file, not in SOERGEL_SYSTEM_PATH, not a preset"))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other.context("writing to stdout"),
        },
    }
}

fn describe(cert: &Certificate) {
    eprintln!("{}: {}", cert.command, cert.verdict);
    for (name, ok) in &cert.checks {
        eprintln!("  [{}] {name}", if *ok { "ok" } else { "FAILED" });
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Command::Replay { file } = &cli.command {
        let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let cert = Certificate::from_json(&text)?;
        let report = replay(&cert)?;
        if cli.verbose {
            describe(&cert);
        }
        emit(&serde_json::to_string_pretty(&report)?, cli.out.as_deref())?;
        if !report.ok() {
            eprintln!("replay failed: {report:?}");
            return Ok(ExitCode::from(1));
        }
        return Ok(ExitCode::SUCCESS);
    }
    let cfg = load_system(&cli.system)?;
    let (name, inputs) = match cli.command {
        Command::Relations => ("relations", Inputs::default()),
        Command::Complex { braid } => ("complex", Inputs { braid: Some(braid), ..Inputs::default() }),
        Command::D2check { braid } => ("d2check", Inputs { braid: Some(braid), ..Inputs::default() }),
        Command::Euler { braid } => ("euler", Inputs { braid: Some(braid), ..Inputs::default() }),
        Command::Gamma { pair } => ("gamma", Inputs { pair: Some(pair), ..Inputs::default() }),
        Command::Inverse { generator } => ("inverse", Inputs { generator: Some(generator), ..Inputs::default() }),
        Command::RouquierFormula { w, v, window } => ("rouquier-formula", Inputs { w: Some(w), v: Some(v), window, ..Inputs::default() }),
        Command::Hom { source, target, window } => ("hom", Inputs { source: Some(source), target: Some(target), window, ..Inputs::default() }),
        Command::Replay { .. } => unreachable!("handled above"),
    };
    let cert = generate(&cfg, name, &inputs)?;
    if cli.verbose {
        describe(&cert);
        if name == "complex" {
            eprintln!("{}", serde_json::to_string_pretty(&cert.witness)?);
        }
    }
    emit(&cert.to_json(), cli.out.as_deref())?;
    if !cert.passed() {
        for (check, ok) in &cert.checks {
            if !ok {
                eprintln!("verification failed: {check}");
            }
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
