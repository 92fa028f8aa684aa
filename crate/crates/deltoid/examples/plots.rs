//! Write the three SVG plots to the current directory.

use deltoid::algebra::rat_int;
use deltoid::report::{plot_svg, PlotKind};
use deltoid::spectral::EigenTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = EigenTable::build(&rat_int(4), 5)?;
    std::fs::write("deltoid_boundary.svg", plot_svg(PlotKind::Boundary)?)?;
    std::fs::write("deltoid_eigen_3_2.svg", plot_svg(PlotKind::Eigen { table: &table, n: 3, k: 2, cells: 150 })?)?;
    std::fs::write("deltoid_coverage.svg", plot_svg(PlotKind::Coverage { m: 40 })?)?;
    println!("wrote deltoid_boundary.svg, deltoid_eigen_3_2.svg, deltoid_coverage.svg");
    Ok(())
}
