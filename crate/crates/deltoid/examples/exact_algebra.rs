//! Arithmetic in Q(i, sqrt3) and exact polynomial determinants.

use deltoid::algebra::{det_fraction_free, FieldScalar, MPoly, VarList};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let j = FieldScalar::j();
    println!("j = {j}, j^2 = {}, j^3 = {}", j.pow(2), j.pow(3));

    let x: FieldScalar = "1/2+3*i+r3".parse()?;
    let y = x.inv().expect("nonzero");
    println!("({x})^-1 = {y}");

    let v = VarList::new(&["a", "b"]);
    let a = MPoly::var(&v, "a")?;
    let b = MPoly::var(&v, "b")?;
    let m = vec![vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]];
    let det = det_fraction_free(&m)?;
    println!("det [[a, b], [b, a]] = {det}");
    println!("divided by a + b: {}", det.divide_exact(&(&a + &b))?);
    Ok(())
}
