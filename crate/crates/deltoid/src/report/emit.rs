//! JSON, CSV and SVG writers. All output is deterministic for fixed inputs.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ReportError;
use crate::hypergroup::{MarkovMatrix, Provenance};
use crate::models::plot::{deltoid_svg, PlotLayers};
use crate::models::{z_of_theta, ThetaPair};
use crate::sampling::{Points, SampleBatch};
use crate::spectral::EigenTable;

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub n: u32,
    pub k: u32,
    pub flavor: String,
    pub eigenvalue: String,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenDocument {
    pub lambda: String,
    pub degree_max: u32,
    pub variables: Vec<String>,
    pub records: Vec<EigenRecord>,
}

/// `R`, `P`, `Q` of every block with `n >= k`, plus `R_{k,n}` for `n > k`.
pub fn eigen_document(table: &EigenTable) -> EigenDocument {
    let mut records = Vec::new();
    for b in table.blocks() {
        let ev = b.eigenvalue.to_string();
        let mut rec = |n, k, flavor: &str, poly: String| {
            records.push(EigenRecord { n, k, flavor: flavor.into(), eigenvalue: ev.clone(), poly });
        };
        rec(b.n, b.k, "R", b.r.to_string());
        if b.n != b.k {
            let rk = b.r.conj_swap(&[("Z", "Zb")]).expect("Z and Zb present");
            rec(b.k, b.n, "R", rk.to_string());
        }
        rec(b.n, b.k, "P", b.p.poly.to_string());
        if let Some(q) = &b.q {
            rec(b.n, b.k, "Q", q.poly.to_string());
        }
    }
    EigenDocument {
        lambda: table.lambda.to_string(),
        degree_max: table.degree_max,
        variables: vec!["Z".into(), "Zb".into()],
        records,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramDocument {
    pub lambda: String,
    pub grid: usize,
    /// `"P(n,k)"` or `"Q(n,k)"` per row.
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub max_off_diagonal: f64,
}

pub fn gram_document(lambda: &str, grid: usize, labels: Vec<String>, g: &DMatrix<f64>) -> GramDocument {
    let n = g.nrows();
    let matrix = (0..n).map(|i| (0..n).map(|j| g[(i, j)]).collect()).collect();
    let mut off: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(g[(i, j)].abs());
            }
        }
    }
    GramDocument { lambda: lambda.into(), grid, labels, matrix, max_off_diagonal: off }
}

/// One row of the Markov CSV. Missing entries are empty; a standard error of
/// 0 marks an exact value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovRow {
    pub source: String,
    pub n: u32,
    pub k: u32,
    pub theta1: f64,
    pub theta2: f64,
    pub alpha: f64,
    pub alpha_se: f64,
    pub beta: Option<f64>,
    pub beta_se: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_se: Option<f64>,
    pub delta: Option<f64>,
    pub delta_se: Option<f64>,
}

pub fn markov_row(source: &str, m: &MarkovMatrix) -> MarkovRow {
    let se = |p: Provenance| match p {
        Provenance::Estimated { stderr } => stderr,
        _ => 0.0,
    };
    MarkovRow {
        source: source.into(),
        n: m.n,
        k: m.k,
        theta1: m.theta.t1,
        theta2: m.theta.t2,
        alpha: m.alpha.value,
        alpha_se: se(m.alpha.provenance),
        beta: m.beta.map(|e| e.value),
        beta_se: m.beta.map(|e| se(e.provenance)),
        gamma: m.gamma.map(|e| e.value),
        gamma_se: m.gamma.map(|e| se(e.provenance)),
        delta: m.delta.map(|e| e.value),
        delta_se: m.delta.map(|e| se(e.provenance)),
    }
}

pub fn write_markov_csv(rows: &[MarkovRow], path: &Path) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_markov_csv(path: &Path) -> Result<Vec<MarkovRow>, ReportError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<Vec<MarkovRow>, _>>()?)
}

/// Points of a batch as CSV: torus `t1,t2`; SU(3) the nine entries as
/// `re,im` pairs; `Omega_1` the three coordinates as `re,im` pairs.
pub fn write_batch_csv(batch: &SampleBatch, path: &Path) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_path(path)?;
    let cplx = |z: &Complex64| [format!("{:e}", z.re), format!("{:e}", z.im)];
    match &batch.points {
        Points::Torus(v) => {
            w.write_record(["t1", "t2"])?;
            for (a, b) in v {
                w.write_record([format!("{a:e}"), format!("{b:e}")])?;
            }
        }
        Points::Su3(v) => {
            let mut head = Vec::new();
            for i in 1..=3 {
                for j in 1..=3 {
                    head.push(format!("g{i}{j}_re"));
                    head.push(format!("g{i}{j}_im"));
                }
            }
            w.write_record(&head)?;
            for g in v {
                let row: Vec<String> = (0..3).flat_map(|i| (0..3).flat_map(move |j| cplx(&g[(i, j)]))).collect();
                w.write_record(&row)?;
            }
        }
        Points::Omega1(v) => {
            w.write_record(["z1_re", "z1_im", "z2_re", "z2_im", "z3_re", "z3_im"])?;
            for p in v {
                let row: Vec<String> = p.iter().flat_map(cplx).collect();
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Compact little-endian binary dump of `Omega_1` points, 48 bytes per point.
pub fn write_batch_binary(batch: &SampleBatch, path: &Path) -> Result<(), ReportError> {
    let pts = batch.omega1().ok_or_else(|| ReportError::Config("binary output is for Omega_1 batches".into()))?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(b"OMG1")?;
    f.write_all(&(pts.len() as u64).to_le_bytes())?;
    for p in pts {
        for z in p {
            f.write_all(&z.re.to_le_bytes())?;
            f.write_all(&z.im.to_le_bytes())?;
        }
    }
    f.flush()?;
    Ok(())
}

pub fn read_batch_binary(path: &Path) -> Result<Vec<crate::models::Omega1Point>, ReportError> {
    let bytes = std::fs::read(path)?;
    let bad = || ReportError::Config("not an Omega_1 binary batch".into());
    if bytes.len() < 12 || &bytes[..4] != b"OMG1" {
        return Err(bad());
    }
    let n = u64::from_le_bytes(bytes[4..12].try_into().unwrap()) as usize;
    if bytes.len() != 12 + 48 * n {
        return Err(bad());
    }
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    Ok((0..n)
        .map(|i| {
            let o = 12 + 48 * i;
            [0, 1, 2].map(|c| Complex64::new(f(o + 16 * c), f(o + 16 * c + 8)))
        })
        .collect())
}

pub enum PlotKind<'a> {
    Boundary,
    /// Level map of `Phat_{n,k}` from a table.
    Eigen {
        table: &'a EigenTable,
        n: u32,
        k: u32,
        cells: usize,
    },
    /// Images `Z(theta)` of an `m x m` theta grid.
    Coverage {
        m: usize,
    },
}

pub fn plot_svg(kind: PlotKind<'_>) -> Result<String, ReportError> {
    Ok(match kind {
        PlotKind::Boundary => deltoid_svg(&PlotLayers::default()),
        PlotKind::Eigen { table, n, k, cells } => {
            let b = table
                .block(n.max(k), n.min(k))
                .ok_or_else(|| ReportError::Config(format!("no block ({n},{k}) in the table")))?;
            let f = |z: Complex64| b.p_value(z);
            deltoid_svg(&PlotLayers { field: Some((&f, cells)), points: Vec::new() })
        }
        PlotKind::Coverage { m } => {
            let h = 2.0 * std::f64::consts::PI / m as f64;
            let points = (0..m)
                .flat_map(|a| (0..m).map(move |b| z_of_theta(&ThetaPair::new(a as f64 * h, b as f64 * h))))
                .collect();
            deltoid_svg(&PlotLayers { field: None, points })
        }
    })
}
