//! Print the identity manifest of the verification suite, or the model registry.
//!
//! `cargo run --example manifest > docs/identities.json`
//! `cargo run --example manifest models > docs/models.json`

use deltoid::models::registry::registry_json;
use deltoid::report::{manifest_of, run_verify, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    if std::env::args().nth(1).as_deref() == Some("models") {
        println!("{}", registry_json());
        return Ok(());
    }
    let report = run_verify(&Config::quick())?;
    println!("{}", serde_json::to_string_pretty(&manifest_of(&report))?);
    Ok(())
}
