//! `qmslab`: JSON on standard output, a one-line JSON run manifest on
//! standard error (or `--manifest PATH`), exit 0 iff every requested check
//! passes, 1 on failed checks or computation errors, 2 on usage errors.

mod args;
mod commands;
mod context;

use std::io::Write;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::Cli;
use commands::Output;
use context::{CliError, Context};

fn manifest(argv: &[String], ctx: Option<&Context>, elapsed: f64, exit_code: i32) -> Value {
    let (params, checks) = match ctx {
        Some(c) => (
            json!(c.params),
            c.checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect(),
        ),
        None => (json!({}), Vec::new()),
    };
    json!({
        "command": argv,
        "parameters": params,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_clock_s": elapsed,
        "checks": checks,
        "exit_code": exit_code,
    })
}

fn emit_manifest(path: Option<&std::path::Path>, m: &Value) {
    let line = m.to_string();
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, line + "\n") {
                eprintln!("{}", json!({"error": "io", "message": format!("cannot write manifest {}: {e}", p.display())}));
            }
        }
        None => eprintln!("{line}"),
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let start = Instant::now();
    let manifest_path = cli.global.manifest.clone();

    let mut ctx = match Context::new(cli.global.clone()) {
        Ok(c) => c,
        Err(e) => finish_with_error(&argv, None, &e, start, manifest_path.as_deref()),
    };
    match commands::run(cli.command, &mut ctx) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = match out {
                Output::Json(v) => writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("json")),
                Output::Text(t) => writeln!(stdout, "{t}"),
            };
            if let Err(e) = written {
                let err = CliError::Io(e.to_string());
                finish_with_error(&argv, Some(&ctx), &err, start, manifest_path.as_deref());
            }
            let code = if ctx.all_pass() { 0 } else { 1 };
            let m = manifest(&argv, Some(&ctx), start.elapsed().as_secs_f64(), code);
            emit_manifest(manifest_path.as_deref(), &m);
            std::process::exit(code);
        }
        Err(e) => finish_with_error(&argv, Some(&ctx), &e, start, manifest_path.as_deref()),
    }
}

fn finish_with_error(
    argv: &[String],
    ctx: Option<&Context>,
    e: &CliError,
    start: Instant,
    manifest_path: Option<&std::path::Path>,
) -> ! {
    let code = e.exit_code();
    eprintln!("{}", e.to_json());
    if code == 2 {
        eprintln!("Try 'qmslab --help' for usage.");
    }
    let m = manifest(argv, ctx, start.elapsed().as_secs_f64(), code);
    emit_manifest(manifest_path, &m);
    std::process::exit(code);
}
