//! `influence verify`: invariant suites, or structural checks of a poset file.

use std::fs;
use std::io::{self, Write};

use influence_core::verify::{run_suites, verify_poset_text, SuiteOutcome};

use crate::args::VerifyArgs;
use crate::{CmdResult, Failure, EXIT_OK, EXIT_VERIFY_FAILED};

pub fn run(args: VerifyArgs) -> CmdResult {
    let outcomes = match &args.fixture {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            verify_poset_text(&text)
        }
        None => run_suites(args.suite.as_deref(), args.trials, args.seed).map_err(Failure::from_core)?,
    };
    let stdout = io::stdout();
    write_table(&mut stdout.lock(), &outcomes).map_err(|e| Failure::runtime(e.to_string()))?;
    let failed: Vec<&SuiteOutcome> = outcomes.iter().filter(|o| !o.passed()).collect();
    for f in &failed {
        eprintln!("failed: {}: {}", f.name, f.detail);
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

pub fn write_table<W: Write>(out: &mut W, outcomes: &[SuiteOutcome]) -> io::Result<()> {
    writeln!(
        out,
        "{:<20} {:>9} {:>9} {:>11} {:>11}  result",
        "suite", "trials", "failures", "worst", "tolerance"
    )?;
    for o in outcomes {
        write!(
            out,
            "{:<20} {:>9} {:>9} {:>11.3e} {:>11.1e}  {}",
            o.name,
            o.trials,
            o.failures,
            o.worst,
            o.tolerance,
            if o.passed() { "pass" } else { "FAIL" }
        )?;
        // failure details go to stderr
        if o.passed() && !o.detail.is_empty() {
            write!(out, "  ({})", o.detail)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
