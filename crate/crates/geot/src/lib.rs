//! Finite witnesses for spectral and coarse properties of graph sequences:
//! Laplacian and twisted-Laplacian spectra, Cheeger constants, short-cycle
//! spaces, the phase-function pipeline, cost bounds and tree grafts.

pub mod constructions;
pub mod cost;
pub mod cycles;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod graph;
pub mod spectral;
pub mod witnesses;

pub use error::{Error, Result};
pub use graph::{parse_graph, Graph, GraphFamily};
