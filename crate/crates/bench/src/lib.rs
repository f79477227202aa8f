//! Benchmark-only crate; see `benches/sim_benches.rs`.
//!
//! Shared setup helpers for the criterion benchmarks live here so the bench
//! targets stay small.

use imcsim::bits::lanes_from_u64;
use imcsim::config::MacroConfig;
use imcsim::{RowAddress, Simulator};

/// A default-geometry simulator with two operand rows preloaded.
pub fn loaded_simulator(precision: usize) -> (Simulator, RowAddress, RowAddress, RowAddress) {
    let cfg = MacroConfig { precision, ..MacroConfig::default() };
    let mut sim = Simulator::with_macro(cfg).unwrap();
    let a = RowAddress::main(0, 0);
    let b = RowAddress::main(0, 1);
    let d = RowAddress::main(0, 2);
    sim.write_row(&a, &lanes_from_u64(0xa5a5_5a5a, cfg.lanes())).unwrap();
    sim.write_row(&b, &lanes_from_u64(0x0ff0_c33c, cfg.lanes())).unwrap();
    (sim, a, b, d)
}
