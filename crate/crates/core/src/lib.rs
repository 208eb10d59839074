//! Edge and total colourings from lists that break every small automorphism
//! of a finite graph, i.e. every automorphism mapping some vertex to one of
//! its neighbours.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`format`]: simple graphs, graph6 and edge-list input.
//! * [`automorphism`]: automorphism groups, stabilizers, root orbits.
//! * [`verify`]: certification of colourings against small automorphisms.
//! * [`construct`]: the constructive colourings.
//! * [`index`]: exhaustive oracles and index computations for tiny graphs.

pub mod automorphism;
pub mod colouring;
pub mod construct;
pub mod error;
pub mod format;
pub mod graph;
pub mod index;
pub mod verify;

pub use automorphism::{OrbitPartition, Permutation, SearchLimits};
pub use colouring::{Colour, Colouring, EdgeColouring, ListAssignment, TotalColouring};
pub use construct::{CorrectionBranch, CorrectionTrace};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use index::{IndexBounds, DEFAULT_BUDGET};
pub use verify::VerifierReport;
