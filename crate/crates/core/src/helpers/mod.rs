// SPDX-License-Identifier: Apache-2.0

//! Candidate helper assertions derived from HLS design structure.

mod compile;
mod expr;
mod infer;
mod manifest;
mod rules;

use serde::{Deserialize, Serialize};

pub use compile::{compile_helper, compile_pred, is_shadow_name, Compiled, MONITOR_PREFIX, SHADOW_PREFIX};
pub use expr::{interpret, reset_value, CmpOp, CompileError, Interpreter, Operand, Pred, SignalClass, Signals};
pub use infer::infer_manifest;
pub use manifest::{
    order_cycle, FifoEntry, Flag, FsmEncoding, FsmEntry, FunctionEntry, LoopEntry, Manifest, Order, PipelineEntry,
};
pub use rules::{generate_helpers, Diagnostic, Generated};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    FifoPtrEmpty,
    FifoPtrFull,
    FifoPtrBound,
    FifoMutex,
    FsmOneHot,
    PipelineWindow,
    PipelineFlip,
    LoopOrder,
    FunctionOrder,
    LoopBound,
}

impl Family {
    /// Rank tie-break priority, lower first.
    pub fn priority(self) -> u8 {
        match self {
            Family::LoopBound => 0,
            Family::FsmOneHot => 1,
            Family::FifoPtrEmpty | Family::FifoPtrFull | Family::FifoPtrBound | Family::FifoMutex => 2,
            Family::PipelineWindow | Family::PipelineFlip => 3,
            Family::LoopOrder | Family::FunctionOrder => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::FifoPtrEmpty => "FifoPtrEmpty",
            Family::FifoPtrFull => "FifoPtrFull",
            Family::FifoPtrBound => "FifoPtrBound",
            Family::FifoMutex => "FifoMutex",
            Family::FsmOneHot => "FsmOneHot",
            Family::PipelineWindow => "PipelineWindow",
            Family::PipelineFlip => "PipelineFlip",
            Family::LoopOrder => "LoopOrder",
            Family::FunctionOrder => "FunctionOrder",
            Family::LoopBound => "LoopBound",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Helper {
    pub id: String,
    pub family: Family,
    pub predicate: Pred,
    /// Manifest entries the helper was built from.
    pub provenance: Vec<String>,
}

impl Helper {
    pub fn display(&self) -> String {
        self.predicate.to_string()
    }
}
