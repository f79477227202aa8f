//! Functional and analytical model of a bit-parallel SRAM in-memory-computing macro.
//!
//! The simulated macro performs logic and arithmetic directly on the bit lines of a
//! 6T SRAM array: activating two wordlines at once lets the single-ended sense
//! amplifiers of each accessed column produce `A AND B` and `NOR(A, B)`, and a
//! per-column peripheral (transmission-gate full adder, write-back multiplexers and
//! a small flip-flop bank) turns those two rails into the full logic-op set, a
//! segmented ripple-carry adder with reconfigurable 2/4/8-bit word width, one-cycle
//! shift and add-and-shift, a two-cycle subtract through a dummy-array intermediate,
//! and an `N+2`-cycle shift-add multiplier.
//!
//! The crate is split along the hardware boundaries:
//!
//! * [`mod@array`]: bit storage, wordline activation semantics, column
//!   interleaving, the bit-line separator and access legality rules.
//! * [`ypath`]: the column peripheral, i.e. logic decode, full-adder
//!   evaluation, the segmented carry chain and write-back routing.
//! * [`sequencer`]: micro-op expansion into per-cycle primitives, the
//!   cycle-level executor, trace emission and energy attribution.
//! * [`perf`]: energy, delay, frequency and TOPS/W models plus the bit-serial
//!   baseline comparison.
//! * [`oracle`]: an independent word-level golden reference used by the
//!   equivalence tests and the `check` command.
//! * [`image`] / [`config`]: the plain-text memory-image and key-value
//!   configuration formats shared with the command-line front end.

pub mod array;
pub mod bits;
pub mod config;
pub mod corpus;
pub mod error;
pub mod image;
pub mod oracle;
pub mod perf;
pub mod sequencer;
pub mod ypath;

pub use array::{hazard_check, CellArray, CycleKind, HazardViolation, Region, RowAddress, SenseResult};
pub use config::{ConfigError, MacroConfig, ModelConfig};
pub use error::SimError;
pub use perf::{
    compare_bitserial, BaselineCycles, DelayModel, EnergyLedger, EnergyTable, FreqVoltageTable,
    ModelError, SweepRow, TopsReport,
};
pub use sequencer::{CycleReport, MicroOp, Opcode, Program, ProgramError, Simulator, Step};
pub use ypath::{carry_chain, decode_logic, fa_eval, route_writeback, LaneRoute, LogicOp, YPathState};
