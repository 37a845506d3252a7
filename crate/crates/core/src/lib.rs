//! Total-cost-of-ownership engine for road freight decarbonization.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure arithmetic:
//! discounting and loan math ([`finance`]), vehicle costing ([`vehicle`]),
//! refueling/charging infrastructure costing ([`infra`]), the depot station
//! minimization solver ([`schedule`]), system-of-systems integration with
//! breakeven and projection ([`system`]), and one-factor sensitivity
//! ([`sensitivity`]). Dataset types live in [`dataset`]; file formats and IO
//! are left to the `freight-tco` companion crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cost;
pub mod dataset;
pub mod error;
pub mod finance;
pub mod fleet;
pub mod infra;
mod math;
pub mod schedule;
pub mod sensitivity;
pub mod system;
pub mod vehicle;

pub use cost::{CostBreakdown, CostComponent, ComponentCosts};
pub use dataset::CostDataset;
pub use error::{Error, Result};
