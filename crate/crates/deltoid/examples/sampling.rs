//! The three samplers, with eigenfunction means as a sanity check.

use deltoid::algebra::{rat, rat_int};
use deltoid::sampling::{estimate_moments, sample_omega1, sample_su3_haar, sample_torus, Method, SamplePoint};
use deltoid::spectral::EigenTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("torus, lambda 1", rat_int(1), sample_torus(100_000, 1)?),
        ("SU(3) Haar, lambda 4", rat_int(4), sample_su3_haar(100_000, 2)?),
        ("Omega_1 rejection, lambda 11/2", rat(11, 2), sample_omega1(&rat(11, 2), 50_000, 3, Method::Rejection)?),
        ("Omega_1 mcmc, lambda 7", rat_int(7), sample_omega1(&rat_int(7), 50_000, 4, Method::Mcmc)?),
    ];
    for (name, lambda, batch) in &cases {
        let table = EigenTable::build(lambda, 2)?;
        let i = table.blocks().iter().position(|b| (b.n, b.k) == (1, 1)).expect("block (1,1)");
        let f = |p: SamplePoint<'_>| table.eval_all(p.z())[i].0;
        let m = estimate_moments(batch, &[&f])?[0];
        println!(
            "{name}: {} points, acceptance {:.3}, E[Phat_11] = {:+.4} +- {:.4}",
            batch.len(),
            batch.stats.rate(),
            m.mean,
            m.stderr
        );
    }
    Ok(())
}
