use serde::{Deserialize, Serialize};

use crate::connection::LatticeDomain;

/// The four percolation models: the random connection model on a Poisson
/// process, directed long-range percolation on ℤ^d and on the quadrant, and
/// undirected long-range percolation on ℤ^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Continuous,
    Dlrp,
    Dlrpq,
    Discrete,
}

impl Model {
    pub fn is_lattice(self) -> bool {
        !matches!(self, Model::Continuous)
    }

    /// Shell domain whose counts drive the per-vertex tail of this model.
    pub fn lattice_domain(self) -> Option<LatticeDomain> {
        match self {
            Model::Continuous => None,
            Model::Dlrpq => Some(LatticeDomain::Quadrant),
            Model::Dlrp | Model::Discrete => Some(LatticeDomain::Full),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Continuous => "continuous",
            Model::Dlrp => "dlrp",
            Model::Dlrpq => "dlrpq",
            Model::Discrete => "discrete",
        }
    }
}
