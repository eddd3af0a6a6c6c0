use std::process::ExitCode;

use snumbers::suite::{run_all, DEFAULT_SEED};

fn main() -> ExitCode {
    let outcomes = run_all(DEFAULT_SEED);
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria pass", outcomes.len(), outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
