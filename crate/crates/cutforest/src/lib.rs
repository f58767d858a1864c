//! Query-efficient spanning-forest learning over hidden weighted graphs.
//!
//! A hidden graph is only reachable through [`oracle::CutOracle`], which
//! answers boundary-weight queries and accounts each one. The learners in
//! [`randomized`] and [`deterministic`] recover a maximal spanning forest
//! from those answers; [`reconstruct`] and [`forest`] hold the shared
//! subroutines, and [`graph`] owns ground truth, generators, and verifiers.

pub mod deterministic;
pub mod graph;
pub mod reconstruct;
pub mod forest;
pub mod num;
pub mod oracle;
pub mod randomized;
