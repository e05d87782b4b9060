// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use pipeprof_service::{serve, AppState};

/// Serve a directory of profile prototypes to the browser editor.
#[derive(Parser)]
#[command(name = "pipeprof-serve", version)]
struct Args {
    /// Directory holding `.pns` prototype files.
    root: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Pipe catalog file.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    if !args.root.is_dir() {
        eprintln!("error: {} is not a directory", args.root.display());
        return ExitCode::from(2);
    }
    println!("serving {} on http://127.0.0.1:{}", args.root.display(), args.port);
    match serve(AppState::new(args.root, args.catalog), args.port).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
