//! Front end for coverbench: the script language, the report format and
//! the command line entry point.

pub mod report;
pub mod run;
pub mod script;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use coverbench::selftest::SelftestConfig;
use coverbench::surface::chart::standard_gluing;
use coverbench::surface::complex::{build_surface, double_surface};

use run::{ExitStatus, RunOptions};
use script::{parse_script, Script};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "coverbench", version, about = "Branched covers of the tetrus and their fibered lifts")]
pub struct Args {
    /// Script to run.
    #[arg(long, value_name = "PATH")]
    pub script: Option<PathBuf>,
    /// Append `verify theorem1` to the script (or run it alone).
    #[arg(long)]
    pub verify: bool,
    /// Per-side bound on chords in the spinning-system search.
    #[arg(long, default_value_t = 2, value_name = "N")]
    pub search_bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Run the randomized internal consistency suites.
    #[arg(long)]
    pub selftest: bool,
    #[arg(long, requires = "selftest", value_name = "SEED")]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write the edge lists of the fiber surface and its double.
    #[arg(long, value_name = "PATH")]
    pub edges: Option<PathBuf>,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliResult {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CliResult {
    fn usage(stderr: String) -> CliResult {
        CliResult {
            stdout: String::new(),
            stderr,
            code: ExitStatus::Usage as i32,
        }
    }
}

fn edge_lists() -> Result<String, String> {
    let f = build_surface(&standard_gluing()).map_err(|e| e.to_string())?;
    let d = double_surface(&f).map_err(|e| e.to_string())?;
    Ok(format!("# fiber\n{}# double\n{}", f.to_edge_list(), d.to_edge_list()))
}

/// Parses arguments and runs. Files are read and written here; nothing
/// calls `process::exit`.
pub fn run_cli<I, T>(argv: I) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::Usage as i32 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliResult { stdout: text, stderr: String::new(), code }
            } else {
                CliResult::usage(text)
            };
        }
    };
    if args.script.is_none() && !args.verify && !args.selftest && args.edges.is_none() {
        return CliResult::usage("nothing to do: give --script, --verify, --selftest or --edges\n".into());
    }
    if args.search_bound == 0 {
        return CliResult::usage("--search-bound must be at least 1\n".into());
    }

    let mut script = match &args.script {
        None => Script::default(),
        Some(path) => {
            let src = match std::fs::read_to_string(path) {
                Ok(s) => s,
                Err(e) => return CliResult::usage(format!("{}: {e}\n", path.display())),
            };
            match parse_script(&src) {
                Ok(s) => s,
                Err(diags) => {
                    let mut text = String::new();
                    for d in diags {
                        text.push_str(&format!("{}:{d}\n", path.display()));
                    }
                    return CliResult::usage(text);
                }
            }
        }
    };
    if args.verify {
        script.push_verify();
    }

    let mut stderr = String::new();
    if let Some(path) = &args.edges {
        match edge_lists() {
            Ok(text) => {
                if let Err(e) = std::fs::write(path, text) {
                    return CliResult::usage(format!("{}: {e}\n", path.display()));
                }
            }
            Err(e) => {
                return CliResult {
                    stdout: String::new(),
                    stderr: format!("edge export failed: {e}\n"),
                    code: ExitStatus::Mismatch as i32,
                }
            }
        }
    }

    let opts = RunOptions {
        search_bound: args.search_bound,
        selftest: args.selftest.then(|| SelftestConfig {
            seed: args.seed.unwrap_or(SelftestConfig::default().seed),
            ..SelftestConfig::default()
        }),
        ..RunOptions::default()
    };
    let outcome = run::run(&script, &opts);
    let text = match args.format {
        Format::Text => outcome.report.to_text(),
        Format::Structured => outcome.report.to_json(),
    };
    let mut stdout = String::new();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return CliResult::usage(format!("{}: {e}\n", path.display()));
            }
        }
        None => stdout = text,
    }
    if outcome.status != ExitStatus::Success {
        stderr.push_str("one or more checks failed\n");
    }
    CliResult {
        stdout,
        stderr,
        code: outcome.status as i32,
    }
}
