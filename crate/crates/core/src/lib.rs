//! Quasi-infinite divisibility of distributions built from atoms or a lattice
//! part and an absolutely continuous part: zero detection, winding index,
//! quasi-Lévy triplets and their reconstruction.

pub mod analysis;
pub mod charfn;
pub mod cli;
pub mod constructions;
pub mod corpus;
pub mod density;
pub mod distribution;
pub mod error;
pub mod grid;
pub mod krein;
pub mod lattice;
pub mod levy;
pub mod numeric;
pub mod report;
pub mod spec;
pub mod topology;
pub mod wiener;
pub mod winding;

pub use analysis::{analyze, AnalysisConfig, Verdict};
pub use density::DensityDescriptor;
pub use distribution::{Atom, Distribution, Lattice};
pub use error::{QidError, Result};
pub use levy::QuasiLevyTriplet;
