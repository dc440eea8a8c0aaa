//! Exact solver for d-dimensional orthogonal packing problems.
//!
//! Instead of searching over box coordinates, the solver searches for a
//! *packing class*: one graph per axis over the boxes, where an edge means
//! the two boxes' projections onto that axis overlap. A tuple of graphs is a
//! packing class when
//!
//! * every graph is an interval graph,
//! * every stable set of the `i`-th graph fits along axis `i`, and
//! * no pair of boxes is adjacent in all graphs.
//!
//! Every packing class describes at least one packing, and every packing
//! has one, so the search treats whole families of equivalent packings at
//! once. Coordinates are recovered from any transitive orientation of the
//! complement graphs by longest-path layout.
//!
//! Modules, bottom-up: [`model`] (instances, packings, validation),
//! [`graph`] and [`chargraph`] (graph queries, recognition, orientation),
//! [`packing_class`], [`opp`] (the decision search), [`solve`] (knapsack and
//! strip packing), and [`oracle`] (brute-force ground truth for tests).

pub mod bits;
pub mod chargraph;
pub mod error;
pub mod graph;
pub mod model;
pub mod opp;
pub mod oracle;
pub mod packing_class;
pub mod solve;
#[cfg(test)]
mod testkit;

pub use chargraph::{Dag, IntervalWitness};
pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{BoxItem, Instance, Packing, Rational, ValidationReport, Violation};
pub use opp::{solve_opp, Limits, SearchOutcome, SearchStats, Verdict};
pub use packing_class::{ClassReport, Orientation, PackingClass};
pub use solve::{solve_okp, solve_spp, OkpOutcome, OkpSolution, SppOutcome, SppSolution};

pub mod fixtures {
    //! Small instances shared by tests, benches and docs.
    use crate::model::Instance;

    /// Five boxes in a 5 x 5 square: (4,1), (5,1), (1,3), (2,2), (1,2).
    pub fn five_boxes() -> Instance {
        Instance::from_integers(&[5, 5], &[&[4, 1], &[5, 1], &[1, 3], &[2, 2], &[1, 2]])
            .expect("valid instance")
    }
}
