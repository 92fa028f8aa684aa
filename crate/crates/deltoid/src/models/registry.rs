//! Machine-readable list of model constructors.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub name: String,
    pub range: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelEntry {
    pub name: String,
    pub constructor: String,
    pub variables: Vec<String>,
    pub params: Vec<ParamRange>,
}

fn entry(name: &str, ctor: &str, vars: &[&str], params: &[(&str, &str)]) -> ModelEntry {
    ModelEntry {
        name: name.into(),
        constructor: ctor.into(),
        variables: vars.iter().map(|s| s.to_string()).collect(),
        params: params.iter().map(|(n, r)| ParamRange { name: n.to_string(), range: r.to_string() }).collect(),
    }
}

pub fn registry() -> Vec<ModelEntry> {
    vec![
        entry("deltoid", "models::deltoid_model", &["Z", "Zb"], &[("lambda", "lambda > 0")]),
        entry(
            "sixdim",
            "models::sixdim_model",
            &["z1", "z2", "z3", "zb1", "zb2", "zb3"],
            &[("lambda", "lambda > 0; reversible probability measure for lambda > 5/2")],
        ),
        entry("flat-torus", "models::flat_torus_model", &["z1", "z2", "z3", "zb1", "zb2", "zb3"], &[]),
        entry(
            "g2",
            "models::g2_model",
            &["s", "p"],
            &[("alpha1", "alpha1 > -1"), ("alpha2", "alpha2 > -5/6, alpha1 + alpha2 > -4/3")],
        ),
        entry(
            "su3-trace",
            "models::su3_gamma_pointwise",
            &["Z", "Zb"],
            &[("g", "3x3 unitary, det 1, tolerance 1e-10")],
        ),
    ]
}

pub fn registry_json() -> String {
    serde_json::to_string_pretty(&registry()).expect("registry serializes")
}
