mod args;
mod commands;
mod error;
mod report;
mod selftest;

use args::{Cli, Common};
use clap::Parser;
use commands::Ctx;
use report::ReportFile;
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

const THREADS_VAR: &str = "REG_LAB_THREADS";

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    if threads == 0 {
        return Err(format!("{THREADS_VAR} must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn fail_usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail_usage(e);
    }
    let name = cli.command.name();
    let outer = cli.common.clone();

    // A selftest swaps in the fixture's arguments and graphs but keeps the output flags.
    let fixture = if outer.selftest { selftest::lookup(name) } else { None };
    let (command, ctx) = match &fixture {
        Some(f) => {
            let argv = std::iter::once("reglab".to_string()).chain(f.argv.iter().cloned());
            let parsed = match Cli::try_parse_from(argv) {
                Ok(p) => p,
                Err(e) => return fail_usage(format!("selftest fixture for {name} does not parse: {e}")),
            };
            let common = Common { expect: outer.expect, timing: outer.timing, report: outer.report.clone(), selftest: true, ..parsed.common };
            let mut ctx = Ctx::new(common);
            ctx.fixtures.extend(f.graphs.iter().cloned());
            (parsed.command, ctx)
        }
        None => (cli.command, Ctx::new(outer.clone())),
    };

    let start = Instant::now();
    let mut outcome = match commands::run(&command, &ctx) {
        Ok(o) => o,
        Err(e) => return fail_usage(e),
    };
    let runtime_ms = if outer.timing { start.elapsed().as_millis() as u64 } else { 0 };

    let mut failed = false;
    if let Some(f) = &fixture {
        outcome.parameters.insert("selftest".into(), json!(true));
        outcome.stdout = None;
        let draft = ReportFile {
            command: name.to_string(),
            parameters: outcome.parameters.clone(),
            verdict: outcome.verdict.as_str().to_string(),
            witness: outcome.witness.clone(),
            audit: outcome.audit.clone(),
            seed: outcome.seed,
            runtime_ms,
        };
        let value = serde_json::to_value(&draft).expect("reports serialise");
        let bad = selftest::failed_checks(&value, &f.checks);
        let passed = bad.is_empty() && draft.verdict == f.expected;
        failed |= !passed;
        outcome = outcome.merge_audit(json!({"selftest": {
            "source": f.source,
            "expected_verdict": f.expected,
            "failed_checks": bad,
            "passed": passed,
        }}));
    }

    let report = ReportFile {
        command: name.to_string(),
        parameters: outcome.parameters,
        verdict: outcome.verdict.as_str().to_string(),
        witness: outcome.witness,
        audit: outcome.audit,
        seed: outcome.seed,
        runtime_ms,
    };
    if let Some(want) = outer.expect {
        failed |= report.verdict != want.as_str();
    }

    let text = report.to_json();
    let written = match (&outer.report, &outcome.stdout) {
        (Some(path), extra) => {
            let mut r = std::fs::write(path, &text);
            if let (Ok(()), Some(extra)) = (&r, extra) {
                r = std::io::stdout().write_all(extra.as_bytes());
            }
            r.map_err(|e| format!("{}: {e}", path.display()))
        }
        (None, Some(extra)) => std::io::stdout().write_all(extra.as_bytes()).map_err(|e| e.to_string()),
        (None, None) => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return fail_usage(e);
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
