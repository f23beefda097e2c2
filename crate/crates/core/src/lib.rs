pub mod alexpoly;
pub mod brunnian;
pub mod codec;
pub mod diagram;
pub mod grouppres;
pub mod jsjtree;
pub mod satellite;
pub mod surfacecalc;

pub use alexpoly::LaurentPolynomial;
pub use codec::DtCode;
pub use diagram::{Crossing, DiagramError, EdgeId, LinkDiagram};
pub use grouppres::GroupPresentation;
