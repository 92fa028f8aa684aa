//! Gram matrix of the Phat, Qhat basis by torus quadrature.

use deltoid::algebra::rat_int;
use deltoid::quadrature::TorusGrid;
use deltoid::spectral::EigenTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = rat_int(4);
    let table = EigenTable::build(&lambda, 3)?;
    let mut basis = Vec::new();
    for b in table.blocks() {
        basis.push(b.p.poly.clone());
        basis.extend(b.q.as_ref().map(|q| q.poly.clone()));
    }
    let grid = TorusGrid::new(&lambda, 96)?;
    let g = grid.gram(&basis);
    println!("{} basis functions, {} nodes", basis.len(), grid.len());
    for i in 0..g.nrows() {
        let row: Vec<String> = (0..g.ncols()).map(|j| format!("{:9.2e}", g[(i, j)])).collect();
        println!("{}", row.join(" "));
    }
    Ok(())
}
