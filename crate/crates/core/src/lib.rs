//! Chip firing on Eulerian digraphs: recurrent configurations, the
//! sink-independence bijection and the generalized Tutte polynomial T_G(y).

pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod limits;
pub mod oracles;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod recurrent;
pub mod sink_bijection;
pub mod suites;
pub mod tutte;

pub use dynamics::{Configuration, FiringRecord};
pub use error::{Error, Result};
pub use graph::{Arc, MultiDigraph};
pub use recurrent::RecurrentSet;
pub use poly::LaurentPolynomial;
