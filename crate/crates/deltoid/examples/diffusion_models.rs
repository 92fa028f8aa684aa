//! Build the deltoid operator, check its boundary and push it to the G2 chart.

use deltoid::algebra::{det_fraction_free, rat};
use deltoid::diffusion::{boundary_ideal_check, pushforward};
use deltoid::models::{deltoid_boundary, deltoid_model, g2_from_lambda, pi_map, psi_map, sixdim_model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = rat(7, 3);
    let m = deltoid_model(&lambda)?;
    for i in 0..2 {
        for k in 0..2 {
            println!("Gamma({}, {}) = {}", m.vars().names()[i], m.vars().names()[k], m.gamma(i, k));
        }
    }
    println!("L(Z) = {}", m.drift()[0]);
    println!("det = {}", det_fraction_free(m.gamma_matrix())?);
    println!("P = {}", deltoid_boundary());
    let c = boundary_ideal_check(&m, &deltoid_boundary())?;
    println!("Gamma(P, Z) / P = {}", c[0]);

    let g = pushforward(&m, &psi_map(), "psi")?;
    println!("pushed to (s, p): L(s) = {}, L(p) = {}", g.drift()[0], g.drift()[1]);
    println!("matches g2 family: {}", g.first_difference(&g2_from_lambda(&lambda)?).is_none());

    let six = sixdim_model(&lambda)?;
    let down = pushforward(&six, &pi_map(), "pi")?;
    println!("six-dimensional model projects to the deltoid: {}", down.first_difference(&m).is_none());
    Ok(())
}
