//! Eigenpolynomials of the deltoid operator and their rotation under j.

use deltoid::algebra::rat;
use deltoid::models::deltoid_model;
use deltoid::spectral::{eigen_r, verify_rotation, EigenTable};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = rat(5, 2);
    let m = deltoid_model(&lambda)?;
    let r = eigen_r(&m, 2, 1)?;
    println!("R_21 = {}  (eigenvalue -{})", r.poly, r.eigenvalue);
    let rot = verify_rotation(&m, 2, 1)?;
    println!("rotation relation holds: {}", rot.holds());

    let table = EigenTable::build(&lambda, 3)?;
    let z = Complex64::new(0.1, 0.2);
    for (b, (p, q)) in table.blocks().iter().zip(table.eval_all(z)) {
        println!("({}, {}): Phat = {p:+.6}, Qhat = {q:+.6}", b.n, b.k);
    }
    Ok(())
}
