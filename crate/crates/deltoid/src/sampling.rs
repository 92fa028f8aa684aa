//! Seeded samplers: uniform torus angles, Haar SU(3) matrices, and points of
//! `Omega_1` under `P1^beta`.
//!
//! Every sampler splits its work into chunks of [`CHUNK`] draws. Chunk `c` uses
//! the ChaCha8 stream `c` of the user seed, so a batch does not depend on the
//! number of worker threads.

use nalgebra::Matrix3;
use num::Zero;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{rat, rational_to_f64, Rational};
use crate::error::SamplingError;
use crate::models::{omega1_member, p1_value, project, sixdim_beta, Omega1Point};
use crate::quadrature::{pairwise_sum, torus_z};

pub const CHUNK: usize = 4096;
const MCMC_STREAM_BASE: u64 = 1 << 32;

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn chunked<T: Send>(n: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng, usize) -> Vec<T> + Sync) -> Vec<T> {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(n - c * CHUNK);
            f(&mut stream_rng(seed, c as u64), len)
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rejection,
    Mcmc,
}

impl std::str::FromStr for Method {
    type Err = SamplingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rejection" => Ok(Method::Rejection),
            "mcmc" => Ok(Method::Mcmc),
            _ => Err(SamplingError::Parameter(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Points {
    Torus(Vec<(f64, f64)>),
    Su3(Vec<Matrix3<Complex64>>),
    Omega1(Vec<Omega1Point>),
}

#[derive(Clone, Copy, Debug)]
pub enum SamplePoint<'a> {
    Torus(f64, f64),
    Su3(&'a Matrix3<Complex64>),
    Omega1(&'a Omega1Point),
}

impl SamplePoint<'_> {
    /// The deltoid coordinate: `Z(t)`, `trace(g)/3`, or `(z1 + z2 + z3)/3`.
    pub fn z(&self) -> Complex64 {
        match self {
            SamplePoint::Torus(a, b) => torus_z(*a, *b),
            SamplePoint::Su3(g) => g.trace() / 3.0,
            SamplePoint::Omega1(p) => project(p),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AcceptanceStats {
    pub proposals: u64,
    pub accepted: u64,
    /// Random-walk step after tuning.
    pub step: Option<f64>,
    /// Smallest effective sample size over the monitored statistics.
    pub ess: Option<f64>,
    /// Per-chain acceptance rates after burn-in.
    pub chain_rates: Vec<f64>,
}

impl AcceptanceStats {
    pub fn rate(&self) -> f64 {
        if self.proposals == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: usize,
    pub points: Points,
    pub method: Option<Method>,
    pub stats: AcceptanceStats,
    /// Chain length when the points are consecutive MCMC chains.
    pub chain_len: Option<usize>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn get(&self, i: usize) -> SamplePoint<'_> {
        match &self.points {
            Points::Torus(v) => SamplePoint::Torus(v[i].0, v[i].1),
            Points::Su3(v) => SamplePoint::Su3(&v[i]),
            Points::Omega1(v) => SamplePoint::Omega1(&v[i]),
        }
    }

    pub fn omega1(&self) -> Option<&[Omega1Point]> {
        match &self.points {
            Points::Omega1(v) => Some(v),
            _ => None,
        }
    }

    /// Evaluate `f` on every point, in order.
    pub fn map<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(SamplePoint<'_>) -> f64 + Sync,
    {
        (0..self.count).into_par_iter().map(|i| f(self.get(i))).collect()
    }
}

fn need_points(n: usize) -> Result<(), SamplingError> {
    if n == 0 {
        return Err(SamplingError::Parameter("sample count must be at least 1".into()));
    }
    Ok(())
}

pub fn sample_torus(n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    need_points(n)?;
    let tau = 2.0 * std::f64::consts::PI;
    let pts = chunked(n, seed, |r, len| (0..len).map(|_| (tau * r.gen::<f64>(), tau * r.gen::<f64>())).collect());
    Ok(SampleBatch {
        seed,
        count: n,
        points: Points::Torus(pts),
        method: None,
        stats: AcceptanceStats { proposals: n as u64, accepted: n as u64, ..Default::default() },
        chain_len: None,
    })
}

fn complex_gaussian(r: &mut ChaCha8Rng) -> Complex64 {
    let a: f64 = r.sample(StandardNormal);
    let b: f64 = r.sample(StandardNormal);
    Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

/// Gram-Schmidt on the columns of a complex Gaussian matrix (positive diagonal
/// of the triangular factor), then a central phase to reach determinant 1.
pub fn haar_su3(r: &mut ChaCha8Rng) -> Matrix3<Complex64> {
    let mut m = Matrix3::from_fn(|_, _| complex_gaussian(r));
    for c in 0..3 {
        for p in 0..c {
            let proj: Complex64 = (0..3).map(|i| m[(i, p)].conj() * m[(i, c)]).sum();
            for i in 0..3 {
                let v = m[(i, p)];
                m[(i, c)] -= proj * v;
            }
        }
        let norm = (0..3).map(|i| m[(i, c)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..3 {
            m[(i, c)] /= norm;
        }
    }
    let phase = m.determinant().arg();
    m * Complex64::from_polar(1.0, -phase / 3.0)
}

pub fn sample_su3_haar(n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    need_points(n)?;
    let pts = chunked(n, seed, |r, len| (0..len).map(|_| haar_su3(r)).collect());
    Ok(SampleBatch {
        seed,
        count: n,
        points: Points::Su3(pts),
        method: None,
        stats: AcceptanceStats { proposals: n as u64, accepted: n as u64, ..Default::default() },
        chain_len: None,
    })
}

fn unit_disc(r: &mut ChaCha8Rng) -> Complex64 {
    let rad = r.gen::<f64>().sqrt();
    Complex64::from_polar(rad, 2.0 * std::f64::consts::PI * r.gen::<f64>())
}

#[derive(Clone, Debug)]
pub struct McmcOptions {
    pub chains: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Initial step; tuned during burn-in toward 20-40% acceptance within [0.05, 0.5].
    pub step: f64,
    pub min_ess: f64,
}

impl Default for McmcOptions {
    fn default() -> Self {
        McmcOptions { chains: 8, burn_in: 10_000, thin: 10, step: 0.2, min_ess: 100.0 }
    }
}

fn check_lambda(lambda: &Rational) -> Result<f64, SamplingError> {
    if lambda <= &rat(5, 2) {
        return Err(SamplingError::Parameter(format!("Omega_1 sampling needs lambda > 5/2, got {lambda}")));
    }
    Ok(rational_to_f64(&sixdim_beta(lambda)))
}

/// Draws from `C P1^beta` on `Omega_1`, `beta = (2 lambda - 11)/6`.
pub fn sample_omega1(lambda: &Rational, n: usize, seed: u64, method: Method) -> Result<SampleBatch, SamplingError> {
    match method {
        Method::Rejection => sample_omega1_rejection(lambda, n, seed),
        Method::Mcmc => sample_omega1_mcmc(lambda, n, seed, &McmcOptions::default()),
    }
}

/// Uniform proposals on the unit polydisc. Exact only when `beta = 0`.
pub fn sample_omega1_rejection(lambda: &Rational, n: usize, seed: u64) -> Result<SampleBatch, SamplingError> {
    let beta = check_lambda(lambda)?;
    need_points(n)?;
    if !sixdim_beta(lambda).is_zero() {
        return Err(SamplingError::Parameter(format!(
            "rejection sampling is exact only at lambda = 11/2 (beta = 0); got beta = {beta}, use mcmc"
        )));
    }
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(Vec<Omega1Point>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(n - c * CHUNK);
            let mut r = stream_rng(seed, c as u64);
            let mut out = Vec::with_capacity(len);
            let mut tries = 0u64;
            while out.len() < len {
                tries += 1;
                let p = [unit_disc(&mut r), unit_disc(&mut r), unit_disc(&mut r)];
                if omega1_member(&p) {
                    out.push(p);
                }
            }
            (out, tries)
        })
        .collect();
    let proposals = parts.iter().map(|p| p.1).sum();
    let pts: Vec<Omega1Point> = parts.into_iter().flat_map(|p| p.0).collect();
    Ok(SampleBatch {
        seed,
        count: n,
        points: Points::Omega1(pts),
        method: Some(Method::Rejection),
        stats: AcceptanceStats { proposals, accepted: n as u64, ..Default::default() },
        chain_len: None,
    })
}

struct Chain {
    points: Vec<Omega1Point>,
    step: f64,
    proposals: u64,
    accepted: u64,
}

fn run_chain(beta: f64, len: usize, opts: &McmcOptions, mut r: ChaCha8Rng) -> Chain {
    let log_density = |p: &Omega1Point| if beta == 0.0 { 0.0 } else { beta * p1_value(p).ln() };
    let mut x: Omega1Point = [Complex64::zero(); 3];
    let mut lx = log_density(&x);
    let mut step = opts.step;
    let step_fn = |x: &Omega1Point, lx: f64, step: f64, r: &mut ChaCha8Rng| -> Option<(Omega1Point, f64)> {
        let y =
            [x[0] + complex_gaussian(r) * step, x[1] + complex_gaussian(r) * step, x[2] + complex_gaussian(r) * step];
        let u: f64 = r.gen();
        if !omega1_member(&y) {
            return None;
        }
        let ly = log_density(&y);
        (u.ln() < ly - lx).then_some((y, ly))
    };
    let window = 500;
    let mut acc_window = 0;
    for it in 1..=opts.burn_in {
        if let Some((y, ly)) = step_fn(&x, lx, step, &mut r) {
            x = y;
            lx = ly;
            acc_window += 1;
        }
        if it % window == 0 {
            let rate = acc_window as f64 / window as f64;
            if rate < 0.2 {
                step *= 0.8;
            } else if rate > 0.4 {
                step *= 1.25;
            }
            step = step.clamp(0.05, 0.5);
            acc_window = 0;
        }
    }
    let mut points = Vec::with_capacity(len);
    let (mut proposals, mut accepted) = (0u64, 0u64);
    while points.len() < len {
        for _ in 0..opts.thin {
            proposals += 1;
            if let Some((y, ly)) = step_fn(&x, lx, step, &mut r) {
                x = y;
                lx = ly;
                accepted += 1;
            }
        }
        points.push(x);
    }
    Chain { points, step, proposals, accepted }
}

/// Batch-means variance of the mean of each chain, combined over chains.
/// Returns `(mean, standard error, effective sample size)`.
pub fn batch_means(values: &[f64], chain_len: usize) -> (f64, f64, f64) {
    let n = values.len();
    let mean = pairwise_sum(values) / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n.max(2) - 1) as f64;
    let b = ((chain_len as f64).sqrt().floor() as usize).max(1);
    let mut bm = Vec::new();
    for chain in values.chunks(chain_len) {
        for batch in chain.chunks_exact(b) {
            bm.push(batch.iter().sum::<f64>() / b as f64);
        }
    }
    if bm.len() < 2 || var == 0.0 {
        return (mean, 0.0, n as f64);
    }
    let bvar = bm.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (bm.len() - 1) as f64;
    let sigma2 = (b as f64 * bvar).max(var);
    let ess = n as f64 * var / sigma2;
    (mean, (sigma2 / n as f64).sqrt(), ess)
}

/// Random-walk Metropolis from the origin with per-chain seeded streams.
pub fn sample_omega1_mcmc(
    lambda: &Rational,
    n: usize,
    seed: u64,
    opts: &McmcOptions,
) -> Result<SampleBatch, SamplingError> {
    let beta = check_lambda(lambda)?;
    need_points(n)?;
    if opts.chains == 0 || opts.thin == 0 {
        return Err(SamplingError::Parameter("chains and thinning must be positive".into()));
    }
    let len = n.div_ceil(opts.chains);
    let chains: Vec<Chain> = (0..opts.chains)
        .into_par_iter()
        .map(|c| run_chain(beta, len, opts, stream_rng(seed, MCMC_STREAM_BASE + c as u64)))
        .collect();
    let stats = AcceptanceStats {
        proposals: chains.iter().map(|c| c.proposals).sum(),
        accepted: chains.iter().map(|c| c.accepted).sum(),
        step: Some(chains.iter().map(|c| c.step).sum::<f64>() / chains.len() as f64),
        ess: None,
        chain_rates: chains.iter().map(|c| c.accepted as f64 / c.proposals as f64).collect(),
    };
    let pts: Vec<Omega1Point> = chains.into_iter().flat_map(|c| c.points).collect();
    let count = pts.len();
    let mut batch = SampleBatch {
        seed,
        count,
        points: Points::Omega1(pts),
        method: Some(Method::Mcmc),
        stats,
        chain_len: Some(len),
    };
    let s1 = batch.map(|p| match p {
        SamplePoint::Omega1(z) => z.iter().map(|w| w.norm_sqr()).sum(),
        _ => 0.0,
    });
    let re = batch.map(|p| p.z().re);
    let ess = batch_means(&s1, len).2.min(batch_means(&re, len).2);
    batch.stats.ess = Some(ess);
    if ess < opts.min_ess {
        return Err(SamplingError::LowEss { ess, floor: opts.min_ess });
    }
    Ok(batch)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub mean: f64,
    pub stderr: f64,
}

impl Moment {
    /// `|mean - target| / stderr`, with zero error treated as exact.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if self.stderr == 0.0 {
            if d <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.stderr
        }
    }
}

pub fn moment_of(values: &[f64], chain_len: Option<usize>) -> Moment {
    let n = values.len();
    if let Some(len) = chain_len {
        let (mean, stderr, _) = batch_means(values, len);
        return Moment { mean, stderr };
    }
    let mean = pairwise_sum(values) / n as f64;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    let var = if n > 1 { pairwise_sum(&dev) / (n - 1) as f64 } else { 0.0 };
    Moment { mean, stderr: (var / n as f64).sqrt() }
}

pub type SampleFn<'a> = &'a (dyn Fn(SamplePoint<'_>) -> f64 + Sync);

/// Sample means and standard errors (batch means for MCMC batches).
pub fn estimate_moments(batch: &SampleBatch, functions: &[SampleFn<'_>]) -> Result<Vec<Moment>, SamplingError> {
    if batch.is_empty() {
        return Err(SamplingError::Parameter("empty batch".into()));
    }
    Ok(functions.iter().map(|f| moment_of(&batch.map(f), batch.chain_len)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{p2_value, unitarity_residual};

    #[test]
    fn reproducible() {
        let a = sample_torus(10_000, 7).unwrap();
        let b = sample_torus(10_000, 7).unwrap();
        let (Points::Torus(a), Points::Torus(b)) = (a.points, b.points) else { panic!() };
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| sample_torus(10_000, 7).unwrap());
        let Points::Torus(c) = c.points else { panic!() };
        assert_eq!(a, c);
    }

    #[test]
    fn haar_is_special_unitary() {
        let b = sample_su3_haar(200, 3).unwrap();
        let Points::Su3(v) = &b.points else { panic!() };
        for g in v {
            let (u, d) = unitarity_residual(g);
            assert!(u < 1e-12 && d < 1e-12);
        }
    }

    #[test]
    fn rejection_points_satisfy_the_predicate() {
        let b = sample_omega1_rejection(&rat(11, 2), 2000, 5).unwrap();
        for p in b.omega1().unwrap() {
            assert!(p1_value(p) > 0.0 && p2_value(p) < 0.0 && p.iter().all(|z| z.norm() < 1.0));
        }
        assert!(sample_omega1_rejection(&rat(4, 1), 10, 5).is_err());
        assert!(sample_omega1(&rat(5, 2), 10, 5, Method::Mcmc).is_err());
    }

    #[test]
    fn constant_moment_has_zero_error() {
        let b = sample_torus(100, 1).unwrap();
        let one = |_: SamplePoint<'_>| 1.0;
        let m = estimate_moments(&b, &[&one]).unwrap();
        assert_eq!(m[0], Moment { mean: 1.0, stderr: 0.0 });
    }
}
