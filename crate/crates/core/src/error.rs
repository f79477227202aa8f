use thiserror::Error;

use crate::array::{HazardViolation, Region};

/// Errors raised by the functional simulator (array, peripheral, sequencer).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("address out of range: bank {bank}, {region}:{row}")]
    AddressOutOfRange { bank: usize, region: Region, row: usize },

    #[error("hazard violation: {0}")]
    Hazard(#[from] HazardViolation),

    #[error("no free dummy row in bank {bank} ({need} needed)")]
    NoFreeDummyRow { bank: usize, need: usize },

    #[error("conflicting lane routes within word group {group}")]
    RouteMismatch { group: usize },

    #[error("{lanes} lanes cannot be segmented into {width}-lane word groups")]
    GeometryMismatch { lanes: usize, width: usize },

    #[error("invalid micro-op: {0}")]
    InvalidOp(String),
}
