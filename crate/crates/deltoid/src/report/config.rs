//! Flat `key = value` configuration for the verification suite.

use std::collections::BTreeMap;
use std::path::Path;

use crate::algebra::{parse_rational, rat, rat_int, Rational};
use crate::error::ReportError;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub seed: u64,
    /// Lambda values for the exact eigen relations.
    pub lambdas: Vec<Rational>,
    pub degree_max: u32,
    pub gram_lambdas: Vec<Rational>,
    pub gram_degree_max: u32,
    pub grid: usize,
    pub selfadjoint_pairs: usize,
    pub torus_samples: usize,
    pub su3_samples: usize,
    pub su3_check_matrices: usize,
    pub omega1_samples: usize,
    pub probe_degree_max: u32,
    pub theta_grid: usize,
    pub scan_degree_max: u32,
    pub cusp_lambdas: Vec<Rational>,
    pub cusp_grid: usize,
    pub surjectivity_cells: usize,
    pub surjectivity_theta: usize,
    pub sigma: f64,
    pub gram_tol: f64,
    pub selfadjoint_tol: f64,
    /// Test fixture: perturb one deltoid metric entry before the exact checks.
    pub fixture_corrupt_gamma: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 20261016,
            lambdas: vec![rat_int(1), rat(5, 2), rat(7, 3), rat_int(4), rat(11, 2)],
            degree_max: 8,
            gram_lambdas: vec![rat_int(1), rat_int(4)],
            gram_degree_max: 5,
            grid: 96,
            selfadjoint_pairs: 20,
            torus_samples: 1_000_000,
            su3_samples: 1_000_000,
            su3_check_matrices: 1000,
            omega1_samples: 200_000,
            probe_degree_max: 4,
            theta_grid: 5,
            scan_degree_max: 5,
            cusp_lambdas: vec![rat_int(4), rat(11, 2)],
            cusp_grid: 400,
            surjectivity_cells: 100,
            surjectivity_theta: 600,
            sigma: 4.0,
            gram_tol: 1e-8,
            selfadjoint_tol: 1e-9,
            fixture_corrupt_gamma: false,
        }
    }
}

fn rationals(v: &str) -> Result<Vec<Rational>, String> {
    v.split(',').map(|t| parse_rational(t.trim()).map_err(|e| e.to_string())).collect()
}

fn show(v: &[Rational]) -> String {
    v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
}

impl Config {
    /// Small sample counts and grids, for smoke tests.
    pub fn quick() -> Self {
        Config {
            degree_max: 4,
            torus_samples: 20_000,
            su3_samples: 20_000,
            su3_check_matrices: 50,
            omega1_samples: 20_000,
            theta_grid: 2,
            cusp_grid: 60,
            surjectivity_cells: 20,
            surjectivity_theta: 200,
            ..Config::default()
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ReportError> {
        let bad = |e: String| ReportError::Config(format!("{key}: {e}"));
        let int = |v: &str| v.parse::<usize>().map_err(|e| bad(e.to_string()));
        let float = |v: &str| v.parse::<f64>().map_err(|e| bad(e.to_string()));
        match key {
            "seed" => self.seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "lambdas" => self.lambdas = rationals(value).map_err(bad)?,
            "degree_max" => self.degree_max = int(value)? as u32,
            "gram_lambdas" => self.gram_lambdas = rationals(value).map_err(bad)?,
            "gram_degree_max" => self.gram_degree_max = int(value)? as u32,
            "grid" => self.grid = int(value)?,
            "selfadjoint_pairs" => self.selfadjoint_pairs = int(value)?,
            "torus_samples" => self.torus_samples = int(value)?,
            "su3_samples" => self.su3_samples = int(value)?,
            "su3_check_matrices" => self.su3_check_matrices = int(value)?,
            "omega1_samples" => self.omega1_samples = int(value)?,
            "probe_degree_max" => self.probe_degree_max = int(value)? as u32,
            "theta_grid" => self.theta_grid = int(value)?,
            "scan_degree_max" => self.scan_degree_max = int(value)? as u32,
            "cusp_lambdas" => self.cusp_lambdas = rationals(value).map_err(bad)?,
            "cusp_grid" => self.cusp_grid = int(value)?,
            "surjectivity_cells" => self.surjectivity_cells = int(value)?,
            "surjectivity_theta" => self.surjectivity_theta = int(value)?,
            "sigma" => self.sigma = float(value)?,
            "gram_tol" => self.gram_tol = float(value)?,
            "selfadjoint_tol" => self.selfadjoint_tol = float(value)?,
            "fixture_corrupt_gamma" => {
                self.fixture_corrupt_gamma = value.parse().map_err(|e: std::str::ParseBoolError| bad(e.to_string()))?
            }
            _ => return Err(ReportError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ReportError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ReportError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ReportError> {
        let mut c = Config::default();
        c.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(ReportError::Config(what.to_string())) };
        need(!self.lambdas.is_empty(), "lambdas must be nonempty")?;
        need(self.lambdas.iter().all(|l| l > &rat_int(0)), "lambdas must be positive")?;
        need(self.gram_lambdas.iter().all(|l| l >= &rat_int(1)), "gram_lambdas must be >= 1")?;
        need(self.cusp_lambdas.iter().all(|l| l > &rat_int(0)), "cusp_lambdas must be positive")?;
        need(self.grid >= 16, "grid must be >= 16")?;
        need(self.torus_samples > 1 && self.su3_samples > 1 && self.omega1_samples > 1, "sample counts must exceed 1")?;
        need(self.theta_grid >= 1 && self.cusp_grid >= 2, "grids must be nonempty")?;
        need(self.sigma > 0.0 && self.gram_tol > 0.0 && self.selfadjoint_tol > 0.0, "tolerances must be positive")
    }

    /// Canonical `key = value` listing.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("seed", self.seed.to_string());
        put("lambdas", show(&self.lambdas));
        put("degree_max", self.degree_max.to_string());
        put("gram_lambdas", show(&self.gram_lambdas));
        put("gram_degree_max", self.gram_degree_max.to_string());
        put("grid", self.grid.to_string());
        put("selfadjoint_pairs", self.selfadjoint_pairs.to_string());
        put("torus_samples", self.torus_samples.to_string());
        put("su3_samples", self.su3_samples.to_string());
        put("su3_check_matrices", self.su3_check_matrices.to_string());
        put("omega1_samples", self.omega1_samples.to_string());
        put("probe_degree_max", self.probe_degree_max.to_string());
        put("theta_grid", self.theta_grid.to_string());
        put("scan_degree_max", self.scan_degree_max.to_string());
        put("cusp_lambdas", show(&self.cusp_lambdas));
        put("cusp_grid", self.cusp_grid.to_string());
        put("surjectivity_cells", self.surjectivity_cells.to_string());
        put("surjectivity_theta", self.surjectivity_theta.to_string());
        put("sigma", self.sigma.to_string());
        put("gram_tol", self.gram_tol.to_string());
        put("selfadjoint_tol", self.selfadjoint_tol.to_string());
        put("fixture_corrupt_gamma", self.fixture_corrupt_gamma.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = Config::default();
        c.apply_text("# comment\nseed = 7\nlambdas = 1, 9/2  # trailing\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.lambdas, vec![rat_int(1), rat(9, 2)]);
        let text: String = c.to_map().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let mut d = Config::default();
        d.apply_text(&text).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let mut c = Config::default();
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("grid = many").is_err());
        assert!(c.apply_text("no equals sign").is_err());
        c.grid = 8;
        assert!(c.validate().is_err());
    }
}
