//! Files, reports and front ends for the freight TCO engine: dataset
//! loading, the synthetic fleet generator, the CLI and the JSON service.

pub mod cli;
pub mod dataset;
pub mod engine;
pub mod fleetgen;
pub mod report;
pub mod service;
