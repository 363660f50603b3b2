// SPDX-License-Identifier: Apache-2.0

pub mod benchgen;
pub mod clause;
pub mod helpers;
pub mod netlist;
pub mod orchestrator;
pub mod pdr;
pub mod ranker;
pub mod sat;
