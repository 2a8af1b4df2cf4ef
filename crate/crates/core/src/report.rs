//! Run reports: self-contained JSON records of a solver invocation.

use crate::cost::Cost;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub instance: InstanceStats,
    pub parameters: BTreeMap<String, String>,
    pub stages: BTreeMap<String, Value>,
    pub result: ResultBlock,
    pub wall_clock_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct InstanceStats {
    pub n: usize,
    pub m: usize,
    pub links: usize,
    pub k: u64,
    pub delta: Option<Cost>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct ResultBlock {
    pub cost: Option<Cost>,
    pub edges: Vec<u32>,
    /// min-cut or connectivity value certifying feasibility
    pub certificate: Option<u64>,
    pub status: String,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            command,
            ..Default::default()
        }
    }

    pub fn write(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self).expect("report serializes"))
    }
}
