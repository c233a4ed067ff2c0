pub mod error;
pub mod graph;
pub mod gw;
pub mod lightcone;
pub mod optimize;
pub mod params;
pub mod qaoa;
pub mod report;
pub mod simulator;

pub use error::{Error, Result};
pub use graph::{Cut, EdgeNeighborhood, Graph};
pub use params::QaoaParams;
pub use report::ExpectationReport;
pub use simulator::{MixerSpec, StateVector};

// The guide's chapters run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/tree-parameters.md")]
    mod tree_parameters {}
    #[doc = include_str!("../../../book/src/light-cone.md")]
    mod light_cone {}
    #[doc = include_str!("../../../book/src/warm-start.md")]
    mod warm_start {}
}
