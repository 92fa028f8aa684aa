//! Run the verification suite and print the summary.
//!
//! `cargo run --release --example verify_suite [quick]`

use deltoid::report::{run_verify, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = match std::env::args().nth(1).as_deref() {
        Some("quick") => Config::quick(),
        _ => Config::default(),
    };
    let report = run_verify(&cfg)?;
    print!("{}", report.summary());
    println!("exit code {}", report.exit_code());
    Ok(())
}
