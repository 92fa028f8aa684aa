//! Concrete models, their boundary polynomials, and the geometric maps between them.

mod deltoid;
mod g2;
pub mod plot;
pub mod registry;
mod sixdim;
mod su3;

pub use deltoid::*;
pub use g2::*;
pub use sixdim::*;
pub use su3::*;
