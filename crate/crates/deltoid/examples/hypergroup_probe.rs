//! Monte Carlo Markov matrices of K_theta against the exact values.

use deltoid::algebra::rat;
use deltoid::hypergroup::{block_norms, markov_matrix_exact, ThetaSample};
use deltoid::models::{z_of_theta, ThetaPair};
use deltoid::quadrature::TorusGrid;
use deltoid::sampling::sample_omega1_rejection;
use deltoid::spectral::EigenTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = rat(11, 2);
    let table = EigenTable::build(&lambda, 3)?;
    let norms = block_norms(&table, &TorusGrid::new(&lambda, 256)?)?;
    let batch = sample_omega1_rejection(&lambda, 100_000, 7)?;
    let theta = ThetaPair::new(0.9, 0.3);
    println!("theta = (0.9, 0.3), Z(theta) = {:.4}", z_of_theta(&theta));
    let est = ThetaSample::new(&table, &theta, &batch)?.markov_matrices(&norms);
    for ((e, b), nm) in est.iter().zip(table.blocks()).zip(&norms) {
        let x = markov_matrix_exact(b, nm, &theta)?;
        print!(
            "({}, {}): alpha {:+.4} +- {:.4} (exact {:+.4})",
            b.n,
            b.k,
            e.alpha.value,
            e.alpha.stderr(),
            x.alpha.value
        );
        if let (Some(eg), Some(xg)) = (e.gamma, x.gamma) {
            print!(", gamma {:+.4} +- {:.4} (exact {:+.4})", eg.value, eg.stderr(), xg.value);
        }
        println!();
    }
    Ok(())
}
