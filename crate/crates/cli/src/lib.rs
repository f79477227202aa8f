//! Command-line front end for the bit-parallel in-memory-computing macro
//! model: program assembly, execution with trace and energy output, oracle
//! cross-checking, and the bit-serial baseline sweep.

pub mod asm;
pub mod commands;
