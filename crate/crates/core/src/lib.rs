//! Ihara zeta functions of finite graphs, the formal-group entropy built
//! from them, and numerical audits of the inequalities around both.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod json;
pub mod line_graph;
pub mod params;
pub mod poly;
pub mod series;
pub mod symbolic;
pub mod zeta;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, DegreeStats, Graph, ValidationReport};
pub use series::TruncatedSeries;
pub use zeta::{IharaZeta, ReciprocalZetaPolynomial, SpectralData};
