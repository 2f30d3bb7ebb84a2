// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

use supop_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("supop: {e}");
        std::process::exit(e.exit_code());
    }
}
