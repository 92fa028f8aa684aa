//! Markov matrices of the operators `K_theta` on the eigenblocks `(Phat, Qhat)`.
//!
//! Convention: `K Phat = alpha Phat + beta Qhat`, `K Qhat = gamma Phat + delta Qhat`.
//! Evaluating at the cusp `Z = 1` gives `alpha` and `gamma` exactly. Adjointness
//! (`K_theta^* = K_{-theta}`) gives `beta = -gamma |Phat|^2 / |Qhat|^2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{rat, FieldScalar, Rational};
use crate::error::HypergroupError;
use crate::models::{deltoid_boundary_value, phi_theta, project, z_of_theta, ThetaPair};
use crate::quadrature::TorusGrid;
use crate::sampling::{moment_of, SampleBatch};
use crate::spectral::{EigenBlock, EigenTable};

/// Margin kept from the degenerate lines of the theta torus.
pub const THETA_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    /// Exact formula combined with quadrature norms.
    Quadrature,
    Estimated {
        stderr: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub value: f64,
    pub provenance: Provenance,
}

impl Entry {
    fn exact(value: f64) -> Self {
        Entry { value, provenance: Provenance::Exact }
    }

    pub fn stderr(&self) -> f64 {
        match self.provenance {
            Provenance::Estimated { stderr } => stderr,
            _ => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovMatrix {
    pub n: u32,
    pub k: u32,
    pub theta: ThetaPair,
    pub alpha: Entry,
    pub beta: Option<Entry>,
    pub gamma: Option<Entry>,
    pub delta: Option<Entry>,
}

/// `|Phat|` and `|Qhat|` (absent when `n = k`) under `mu^(lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockNorms {
    pub p: f64,
    pub q: Option<f64>,
}

impl BlockNorms {
    /// `|Phat| / |Qhat|`.
    pub fn ratio(&self) -> Option<f64> {
        self.q.map(|q| self.p / q)
    }
}

pub fn block_norms(table: &EigenTable, grid: &TorusGrid) -> Result<Vec<BlockNorms>, HypergroupError> {
    table
        .blocks()
        .par_iter()
        .map(|b| {
            let p = grid.integrate(|z| b.p_value(z).powi(2)).sqrt();
            let q = b.q.as_ref().map(|_| grid.integrate(|z| b.q_value(z).powi(2)).sqrt());
            if p < 1e-12 || q.is_some_and(|q| q < 1e-12) {
                return Err(HypergroupError::IllConditioned { n: b.n, k: b.k });
            }
            Ok(BlockNorms { p, q })
        })
        .collect()
}

fn check_lambda(lambda: &Rational) -> Result<(), HypergroupError> {
    if lambda < &rat(5, 2) {
        return Err(HypergroupError::Parameter(format!("the probe needs lambda >= 5/2, got {lambda}")));
    }
    Ok(())
}

/// `(alpha, gamma) = (Phat(Z(theta)), Qhat(Z(theta))) / Phat(1)`.
pub fn markov_pair_exact(block: &EigenBlock, theta: &ThetaPair) -> Result<(f64, f64), HypergroupError> {
    let p1 = block.p.poly.eval_exact(&[FieldScalar::one(), FieldScalar::one()]);
    let p1 = p1.as_rational().ok_or(HypergroupError::VanishingDenominator { n: block.n, k: block.k })?;
    if *p1 == rat(0, 1) {
        return Err(HypergroupError::VanishingDenominator { n: block.n, k: block.k });
    }
    let p1 = crate::algebra::rational_to_f64(p1);
    let z = z_of_theta(theta);
    Ok((block.p_value(z) / p1, block.q_value(z) / p1))
}

/// The matrix from the exact pair. `delta = alpha` comes from the rotation
/// relation when `n - k` is not a multiple of 3 and is left open otherwise.
pub fn markov_matrix_exact(
    block: &EigenBlock,
    norms: &BlockNorms,
    theta: &ThetaPair,
) -> Result<MarkovMatrix, HypergroupError> {
    let (a, g) = markov_pair_exact(block, theta)?;
    let (beta, gamma, delta) = match norms.ratio() {
        None => (None, None, None),
        Some(r) => {
            let beta = if block.rotates() {
                Entry::exact(-g)
            } else {
                Entry { value: -g * r * r, provenance: Provenance::Quadrature }
            };
            let delta = block.rotates().then(|| Entry::exact(a));
            (Some(beta), Some(Entry::exact(g)), delta)
        }
    };
    Ok(MarkovMatrix { n: block.n, k: block.k, theta: *theta, alpha: Entry::exact(a), beta, gamma, delta })
}

/// Largest singular value of the block in the orthonormal basis, with a
/// Frobenius bound on its standard error.
pub fn orthonormal_singular_value(m: &MarkovMatrix, norms: &BlockNorms) -> (f64, f64) {
    let Some(r) = norms.ratio() else {
        return (m.alpha.value.abs(), m.alpha.stderr());
    };
    let e = |x: &Option<Entry>| x.map_or((0.0, 0.0), |e| (e.value, e.stderr()));
    let (b, bs) = e(&m.beta);
    let (g, gs) = e(&m.gamma);
    let (d, ds) = e(&m.delta);
    let mat = nalgebra::Matrix2::new(m.alpha.value, b / r, g * r, d);
    let sv = mat.singular_values();
    let err = (m.alpha.stderr().powi(2) + (bs / r).powi(2) + (gs * r).powi(2) + ds.powi(2)).sqrt();
    (sv[0].max(sv[1]), err)
}

/// `(Phat, Qhat)` of one block at one point.
type Values = (f64, f64);

/// `(values at pi(Phi_theta xi), values at pi(xi))` for every sample and block.
pub struct ThetaSample<'a> {
    table: &'a EigenTable,
    theta: ThetaPair,
    chain_len: Option<usize>,
    pairs: Vec<(Vec<Values>, Vec<Values>)>,
}

impl<'a> ThetaSample<'a> {
    pub fn new(table: &'a EigenTable, theta: &ThetaPair, batch: &SampleBatch) -> Result<Self, HypergroupError> {
        check_lambda(&table.lambda)?;
        let pts = batch.omega1().ok_or_else(|| HypergroupError::Parameter("batch is not on Omega_1".into()))?;
        let pairs = pts
            .par_iter()
            .map(|p| (table.eval_all(project(&phi_theta(p, theta))), table.eval_all(project(p))))
            .collect();
        Ok(ThetaSample { table, theta: *theta, chain_len: batch.chain_len, pairs })
    }

    fn moment(&self, f: impl Fn(&(Vec<(f64, f64)>, Vec<(f64, f64)>)) -> f64 + Sync + Send, scale: f64) -> Entry {
        let v: Vec<f64> = self.pairs.par_iter().map(&f).collect();
        let m = moment_of(&v, self.chain_len);
        Entry { value: m.mean / scale, provenance: Provenance::Estimated { stderr: m.stderr / scale } }
    }

    /// Every block of `K_theta` from the correlations `E[u(y) v(x)]`, normalized by the norms.
    pub fn markov_matrices(&self, norms: &[BlockNorms]) -> Vec<MarkovMatrix> {
        let mut out = Vec::new();
        for (bi, b) in self.table.blocks().iter().enumerate() {
            let nm = norms[bi];
            let pp = nm.p * nm.p;
            let alpha = self.moment(|(y, x)| y[bi].0 * x[bi].0, pp);
            let (beta, gamma, delta) = match nm.q {
                None => (None, None, None),
                Some(q) => (
                    Some(self.moment(|(y, x)| y[bi].0 * x[bi].1, q * q)),
                    Some(self.moment(|(y, x)| y[bi].1 * x[bi].0, pp)),
                    Some(self.moment(|(y, x)| y[bi].1 * x[bi].1, q * q)),
                ),
            };
            out.push(MarkovMatrix { n: b.n, k: b.k, theta: self.theta, alpha, beta, gamma, delta });
        }
        out
    }

    /// Correlations between `Phat` of blocks with distinct eigenvalues.
    pub fn cross_correlations(&self, norms: &[BlockNorms]) -> Vec<CrossCorrelation> {
        let blocks = self.table.blocks();
        let mut out = Vec::new();
        for a in 0..blocks.len() {
            for b in 0..blocks.len() {
                if blocks[a].eigenvalue == blocks[b].eigenvalue {
                    continue;
                }
                let e = self.moment(|(y, x)| y[a].0 * x[b].0, norms[a].p * norms[b].p);
                out.push(CrossCorrelation {
                    theta: self.theta,
                    a: (blocks[a].n, blocks[a].k),
                    b: (blocks[b].n, blocks[b].k),
                    value: e.value,
                    stderr: e.stderr(),
                });
            }
        }
        out
    }
}

/// Estimate all blocks of `K_theta` from unconditional correlations
/// `E[u(pi(Phi_theta xi)) v(pi(xi))]` over an `Omega_1` batch.
pub fn estimate_markov_matrices(
    table: &EigenTable,
    norms: &[BlockNorms],
    theta: &ThetaPair,
    batch: &SampleBatch,
) -> Result<Vec<MarkovMatrix>, HypergroupError> {
    Ok(ThetaSample::new(table, theta, batch)?.markov_matrices(norms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCorrelation {
    pub theta: ThetaPair,
    pub a: (u32, u32),
    pub b: (u32, u32),
    /// `E[Phat_a(pi(Phi_theta xi)) Phat_b(pi(xi))] / (|Phat_a| |Phat_b|)`.
    pub value: f64,
    pub stderr: f64,
}

pub fn cross_correlations(
    table: &EigenTable,
    norms: &[BlockNorms],
    theta: &ThetaPair,
    batch: &SampleBatch,
) -> Result<Vec<CrossCorrelation>, HypergroupError> {
    Ok(ThetaSample::new(table, theta, batch)?.cross_correlations(norms))
}

/// `|estimate - target|` in units of the standard error; a zero error counts
/// as agreement when the difference is at rounding level.
pub fn sigma_distance(estimate: f64, target: f64, stderr: f64) -> f64 {
    let d = (estimate - target).abs();
    if stderr > 0.0 {
        d / stderr
    } else if d <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Uniform `m x m` grid `offset + 2 pi (a, b) / m`, dropping points within
/// [`THETA_MARGIN`] of the degenerate lines.
pub fn theta_grid(m: usize, offset: (f64, f64)) -> Vec<ThetaPair> {
    let h = 2.0 * PI / m as f64;
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let t = ThetaPair::new(offset.0 + a as f64 * h, offset.1 + b as f64 * h);
            if t.is_interior_image(THETA_MARGIN) {
                out.push(t);
            }
        }
    }
    out
}

/// Offsets keeping a 5 x 5 grid about 0.4 away from every degenerate line.
pub const DEFAULT_THETA_OFFSET: (f64, f64) = (0.4, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub checked: usize,
    /// Largest `sqrt(alpha^2 + g^2)`, `g = gamma |Phat|/|Qhat|`, over the scan.
    pub max_column_norm: f64,
    pub max_abs_alpha: f64,
    /// `(n, k, theta, value)` above `1 + tol`.
    pub violations: Vec<(u32, u32, ThetaPair, f64)>,
}

/// Contraction check of the exact first column on orthonormalized blocks.
pub fn positivity_scan(
    table: &EigenTable,
    norms: &[BlockNorms],
    thetas: &[ThetaPair],
    tol: f64,
) -> Result<PositivityReport, HypergroupError> {
    check_lambda(&table.lambda)?;
    let mut rep = PositivityReport { checked: 0, max_column_norm: 0.0, max_abs_alpha: 0.0, violations: Vec::new() };
    for t in thetas {
        for (bi, b) in table.blocks().iter().enumerate() {
            let (a, g) = markov_pair_exact(b, t)?;
            let g = norms[bi].ratio().map_or(0.0, |r| g * r);
            let c = (a * a + g * g).sqrt();
            rep.checked += 1;
            rep.max_column_norm = rep.max_column_norm.max(c);
            rep.max_abs_alpha = rep.max_abs_alpha.max(a.abs());
            if c > 1.0 + tol {
                rep.violations.push((b.n, b.k, *t, c));
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationEntry {
    pub n: u32,
    pub k: u32,
    pub a: f64,
    pub b: f64,
    /// `sqrt(a^2 + (b |Phat|/|Qhat|)^2)`.
    pub column_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub entries: Vec<RepresentationEntry>,
    pub contraction: bool,
}

/// `a = int Phat/Phat(1) dnu`, `b = int Qhat/Phat(1) dnu` for a weighted point set,
/// and the contraction test on each orthonormalized block.
pub fn representation_check(
    table: &EigenTable,
    norms: &[BlockNorms],
    nu: &[(Complex64, f64)],
    tol: f64,
) -> Result<RepresentationReport, HypergroupError> {
    let total: f64 = nu.iter().map(|x| x.1).sum();
    if nu.is_empty() || total <= 0.0 {
        return Err(HypergroupError::Parameter("nu needs positive total mass".into()));
    }
    let vals: Vec<Vec<(f64, f64)>> = nu.par_iter().map(|(z, _)| table.eval_all(*z)).collect();
    let one = table.eval_all(Complex64::new(1.0, 0.0));
    let mut entries = Vec::new();
    for (bi, b) in table.blocks().iter().enumerate() {
        if one[bi].0 == 0.0 {
            return Err(HypergroupError::VanishingDenominator { n: b.n, k: b.k });
        }
        let mut sa = 0.0;
        let mut sb = 0.0;
        for (v, (_, w)) in vals.iter().zip(nu) {
            sa += w * v[bi].0;
            sb += w * v[bi].1;
        }
        let a = sa / total / one[bi].0;
        let bb = sb / total / one[bi].0;
        let g = norms[bi].ratio().map_or(0.0, |r| bb * r);
        entries.push(RepresentationEntry { n: b.n, k: b.k, a, b: bb, column_norm: (a * a + g * g).sqrt() });
    }
    let contraction = entries.iter().all(|e| e.column_norm <= 1.0 + tol);
    Ok(RepresentationReport { entries, contraction })
}

/// `epsilon = +1` for `n - k = 1`, `-1` for `n - k = 2 (mod 3)`, `None` otherwise.
pub fn epsilon(n: u32, k: u32) -> Option<i64> {
    match (n as i64 - k as i64).rem_euclid(3) {
        1 => Some(1),
        2 => Some(-1),
        _ => None,
    }
}

/// The basis change toward the cusp `j`, applied to a symmetric block
/// `[[a, b], [b, c]]`; identity when `n - k = 0 (mod 3)`.
pub fn basis_change(m: &[[FieldScalar; 2]; 2], n: u32, k: u32) -> [[FieldScalar; 2]; 2] {
    let Some(eps) = epsilon(n, k) else {
        return m.clone();
    };
    let (a, b, c) = (&m[0][0], &m[0][1], &m[1][1]);
    let e3 = FieldScalar::sqrt3().scale(&rat(eps, 1));
    let q = rat(1, 4);
    let two = rat(2, 1);
    let three = rat(3, 1);
    let d11 = &(&(a + &(&e3 * b).scale(&two)) + &c.scale(&three));
    let off = &(&(&(-&e3) * a) - &b.scale(&two)) + &(&e3 * c);
    let d22 = &(&a.scale(&three) - &(&e3 * b).scale(&two)) + c;
    [[d11.scale(&q), off.scale(&q)], [off.scale(&q), d22.scale(&q)]]
}

pub fn basis_change_f64(m: [[f64; 2]; 2], n: u32, k: u32) -> [[f64; 2]; 2] {
    let Some(eps) = epsilon(n, k) else {
        return m;
    };
    let e3 = eps as f64 * 3f64.sqrt();
    let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
    let off = (-e3 * a - 2.0 * b + e3 * c) / 4.0;
    [[(a + 2.0 * e3 * b + 3.0 * c) / 4.0, off], [off, (3.0 * a - 2.0 * e3 * b + c) / 4.0]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaComparison {
    pub n: u32,
    pub k: u32,
    pub theta: ThetaPair,
    pub estimated: Entry,
    /// `delta = alpha`, from the rotation relation.
    pub rotation: f64,
    /// `cot(2 (n - k) pi / 3) * alpha`, as printed.
    pub cot_form: f64,
}

impl DeltaComparison {
    pub fn z_rotation(&self) -> f64 {
        sigma_distance(self.estimated.value, self.rotation, self.estimated.stderr())
    }

    pub fn z_cot(&self) -> f64 {
        sigma_distance(self.estimated.value, self.cot_form, self.estimated.stderr())
    }
}

pub fn cot_delta(alpha: f64, n: u32, k: u32) -> f64 {
    let x = 2.0 * (n as f64 - k as f64) * PI / 3.0;
    x.cos() / x.sin() * alpha
}

pub fn delta_comparisons(estimated: &[MarkovMatrix], exact: &[MarkovMatrix]) -> Vec<DeltaComparison> {
    estimated
        .iter()
        .zip(exact)
        .filter(|(e, _)| epsilon(e.n, e.k).is_some())
        .filter_map(|(e, x)| {
            Some(DeltaComparison {
                n: e.n,
                k: e.k,
                theta: e.theta,
                estimated: e.delta?,
                rotation: x.alpha.value,
                cot_form: cot_delta(x.alpha.value, e.n, e.k),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub omega_cells: usize,
    pub theta_grid: usize,
    /// Cells whose four corners lie strictly inside the deltoid.
    pub cells_inside: usize,
    pub cells_hit: usize,
    pub missing: Vec<(usize, usize)>,
}

/// Coverage of the interior cells of an `omega_cells^2` grid on the bounding box
/// of the deltoid by `Z(theta)` over a `theta_grid^2` grid of angles.
pub fn surjectivity_check(omega_cells: usize, theta_grid: usize) -> SurjectivityReport {
    let (x0, x1) = (-0.5, 1.0);
    let y1 = 3f64.sqrt() / 2.0;
    let (hx, hy) = ((x1 - x0) / omega_cells as f64, 2.0 * y1 / omega_cells as f64);
    let mut hit = vec![false; omega_cells * omega_cells];
    let h = 2.0 * PI / theta_grid as f64;
    for a in 0..theta_grid {
        for b in 0..theta_grid {
            let z = z_of_theta(&ThetaPair::new(a as f64 * h, b as f64 * h));
            let i = ((z.re - x0) / hx).floor();
            let j = ((z.im + y1) / hy).floor();
            if i >= 0.0 && j >= 0.0 && (i as usize) < omega_cells && (j as usize) < omega_cells {
                hit[i as usize * omega_cells + j as usize] = true;
            }
        }
    }
    let mut rep = SurjectivityReport { omega_cells, theta_grid, cells_inside: 0, cells_hit: 0, missing: Vec::new() };
    for i in 0..omega_cells {
        for j in 0..omega_cells {
            let inside = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().all(|&(di, dj)| {
                let z = Complex64::new(x0 + (i + di) as f64 * hx, -y1 + (j + dj) as f64 * hy);
                deltoid_boundary_value(z) > 0.0
            });
            if inside {
                rep.cells_inside += 1;
                if hit[i * omega_cells + j] {
                    rep.cells_hit += 1;
                } else {
                    rep.missing.push((i, j));
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn setup() -> (EigenTable, Vec<BlockNorms>) {
        let l = rat(11, 2);
        let t = EigenTable::build(&l, 4).unwrap();
        let g = TorusGrid::new(&l, 128).unwrap();
        let n = block_norms(&t, &g).unwrap();
        (t, n)
    }

    #[test]
    fn exact_pair_examples() {
        let (t, _) = setup();
        for b in t.blocks() {
            let (a, g) = markov_pair_exact(b, &ThetaPair::new(0.0, 0.0)).unwrap();
            assert!((a - 1.0).abs() < 1e-12 && g.abs() < 1e-12);
        }
        let (a, g) = markov_pair_exact(t.block(0, 0).unwrap(), &ThetaPair::new(1.0, 2.0)).unwrap();
        assert_eq!((a, g), (1.0, 0.0));
        // Z = j: alpha + i gamma = j^(n-k)
        let tj = ThetaPair::new(2.0 * PI / 3.0, 2.0 * PI / 3.0);
        for b in t.blocks() {
            let (a, g) = markov_pair_exact(b, &tj).unwrap();
            let want = FieldScalar::j_pow(b.n as i64 - b.k as i64).to_complex();
            assert!((Complex64::new(a, g) - want).norm() < 1e-9, "{} {}", b.n, b.k);
        }
    }

    #[test]
    fn parity() {
        let (t, _) = setup();
        let th = ThetaPair::new(0.7, 1.9);
        for b in t.blocks() {
            let (a, g) = markov_pair_exact(b, &th).unwrap();
            let (a2, g2) = markov_pair_exact(b, &th.neg()).unwrap();
            assert!((a - a2).abs() < 1e-12 && (g + g2).abs() < 1e-12);
        }
    }

    #[test]
    fn contraction_away_from_the_cusp() {
        let (t, n) = setup();
        let at_zero = positivity_scan(&t, &n, &[ThetaPair::new(0.0, 0.0)], 1e-9).unwrap();
        assert!((at_zero.max_column_norm - 1.0).abs() < 1e-12);
        let inner = positivity_scan(&t, &n, &[ThetaPair::new(1.0, 2.0)], 1e-9).unwrap();
        assert!(inner.violations.is_empty());
        let strict = t.blocks().iter().zip(&n).filter(|(b, _)| b.n + b.k > 0).all(|(b, nm)| {
            let (a, g) = markov_pair_exact(b, &ThetaPair::new(1.0, 2.0)).unwrap();
            let g = nm.ratio().map_or(0.0, |r| g * r);
            a * a + g * g < 1.0
        });
        assert!(strict);
    }

    #[test]
    fn basis_change_identity_and_order_three() {
        let one = FieldScalar::one();
        let zero = FieldScalar::zero();
        let id = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
        assert_eq!(basis_change(&id, 2, 1), id);
        let m = [
            [FieldScalar::ratio(1, 3), FieldScalar::ratio(-2, 7)],
            [FieldScalar::ratio(-2, 7), FieldScalar::from_int(5)],
        ];
        for (n, k) in [(1, 0), (2, 0), (3, 0)] {
            let once = basis_change(&m, n, k);
            let thrice = basis_change(&basis_change(&once, n, k), n, k);
            assert_eq!(thrice, m);
        }
        let f = basis_change_f64([[0.3, 0.1], [0.1, -0.2]], 1, 0);
        let e = basis_change(
            &[
                [FieldScalar::ratio(3, 10), FieldScalar::ratio(1, 10)],
                [FieldScalar::ratio(1, 10), FieldScalar::ratio(-1, 5)],
            ],
            1,
            0,
        );
        assert!((f[0][1] - e[0][1].to_complex().re).abs() < 1e-15);
    }

    #[test]
    fn representation_examples() {
        let (t, n) = setup();
        let cusp = representation_check(&t, &n, &[(Complex64::new(1.0, 0.0), 1.0)], 1e-9).unwrap();
        assert!(cusp.entries.iter().all(|e| (e.a - 1.0).abs() < 1e-12 && e.b.abs() < 1e-12));
        let g = TorusGrid::new(&rat(11, 2), 128).unwrap();
        let mu: Vec<(Complex64, f64)> = g.nodes().collect();
        let flat = representation_check(&t, &n, &mu, 1e-9).unwrap();
        assert!(flat.entries.iter().skip(1).all(|e| e.a.abs() < 1e-6 && e.b.abs() < 1e-6));
        assert!(flat.contraction);
    }

    #[test]
    fn cot_value_differs_from_rotation() {
        assert!((cot_delta(1.0, 1, 0) + 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(positivity_scan(&EigenTable::build(&rat_int(2), 1).unwrap(), &[], &[], 0.0).is_err());
    }

    #[test]
    fn theta_grid_keeps_clear_of_degenerate_lines() {
        let g = theta_grid(5, DEFAULT_THETA_OFFSET);
        assert_eq!(g.len(), 25);
        assert!(g.iter().all(|t| t.degeneracy_margin() > 0.3));
        let full = theta_grid(6, (0.0, 0.0));
        assert!(full.len() < 36 && !full.contains(&ThetaPair::new(0.0, 0.0)));
        assert!(full.iter().all(|t| t.degeneracy_margin() > THETA_MARGIN));
    }
}
