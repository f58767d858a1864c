//! Benchmark harness for the spanning-forest learners: experiment
//! configuration, parallel trial execution with ground-truth verification, a
//! fixed CSV schema, log-log scaling fits, and the executable acceptance
//! suite behind `verify`.

pub mod acceptance;
pub mod config;
pub mod fit;
pub mod report;
pub mod runner;
