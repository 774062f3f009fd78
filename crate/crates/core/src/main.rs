// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pilotwave::cli::run_from_args(std::env::args_os()))
}
