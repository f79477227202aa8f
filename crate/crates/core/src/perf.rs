//! Analytical energy, delay, frequency and efficiency models, plus the
//! bit-serial baseline comparison.
//!
//! Defaults describe the reference 28 nm silicon at its nominal operating
//! point. Every number here is a parameter, overridable through
//! [`crate::config::ModelConfig`]; nothing below is derived from device
//! physics at run time.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::config::precision_index;
use crate::sequencer::Opcode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("no table entry for {op} at {precision}-bit")]
    UnknownEntry { op: String, precision: usize },
    #[error("vdd {vdd} V outside the supported {min}-{max} V range")]
    VddOutOfRange { vdd: f64, min: f64, max: f64 },
    #[error("bit line of {bl_size} columns too small: {needed} columns needed per word")]
    GeometryTooSmall { bl_size: usize, needed: usize },
}

/// Per-operation energy in femtojoules, indexed by precision (2/4/8-bit).
///
/// Add has a single column; subtract and multiply carry a dummy-array
/// write-back phase and are therefore priced with and without the bit-line
/// separator. The remaining classes are absent from the reference
/// measurements and default to the same-precision add energy (same access
/// pattern: one or two wordlines plus a write-back).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    pub add: [f64; 3],
    pub sub_without: [f64; 3],
    pub sub_with: [f64; 3],
    pub mult_without: [f64; 3],
    pub mult_with: [f64; 3],
    pub logic: [f64; 3],
    pub shl: [f64; 3],
    pub addsh: [f64; 3],
    pub write: [f64; 3],
    pub copy: [f64; 3],
}

impl Default for EnergyTable {
    fn default() -> Self {
        let add = [68.2, 138.4, 274.8];
        Self {
            add,
            sub_without: [152.3, 307.5, 612.2],
            sub_with: [136.5, 274.9, 545.4],
            mult_without: [357.4, 1167.6, 4186.4],
            mult_with: [296.0, 922.4, 3394.8],
            logic: add,
            shl: add,
            addsh: add,
            write: add,
            copy: add,
        }
    }
}

impl EnergyTable {
    /// Resets the derived classes (logic, shift, add-shift, write, copy) to
    /// the current add energies. Called after add overrides so explicit
    /// per-class overrides can still be layered on top.
    pub fn rederive_defaults(&mut self) {
        self.logic = self.add;
        self.shl = self.add;
        self.addsh = self.add;
        self.write = self.add;
        self.copy = self.add;
    }

    /// Energy of one macro-op invocation in fJ. `with_separator` selects the
    /// separator column for subtract and multiply and is ignored elsewhere.
    pub fn energy_of(&self, op: Opcode, precision: usize, with_separator: bool) -> Result<f64, ModelError> {
        let idx = precision_index(precision)
            .map_err(|_| ModelError::UnknownEntry { op: op.mnemonic().into(), precision })?;
        let v = match op {
            Opcode::Add => self.add[idx],
            Opcode::Sub => {
                if with_separator {
                    self.sub_with[idx]
                } else {
                    self.sub_without[idx]
                }
            }
            Opcode::Mult => {
                if with_separator {
                    self.mult_with[idx]
                } else {
                    self.mult_without[idx]
                }
            }
            Opcode::Shl => self.shl[idx],
            Opcode::AddSh => self.addsh[idx],
            Opcode::Write => self.write[idx],
            Opcode::Copy => self.copy[idx],
            _ => self.logic[idx],
        };
        Ok(v)
    }
}

/// Running energy account over executed macro-ops, keyed by
/// (opcode, precision, separator). Pure bookkeeping over table lookups, so
/// totals do not depend on execution order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyLedger {
    entries: BTreeMap<(Opcode, usize, bool), (u64, f64)>,
    total_fj: f64,
}

impl EnergyLedger {
    pub fn record(&mut self, op: Opcode, precision: usize, with_separator: bool, energy_fj: f64) {
        let e = self.entries.entry((op, precision, with_separator)).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += energy_fj;
        self.total_fj += energy_fj;
    }

    pub fn total_fj(&self) -> f64 {
        self.total_fj
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Summary CSV: one row per (op, precision, separator) plus a TOTAL row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("op,precision,separator,count,energy_fJ\n");
        let mut count = 0u64;
        for ((op, prec, sep), (n, fj)) in &self.entries {
            let sep_tag = if matches!(op, Opcode::Sub | Opcode::Mult) {
                if *sep {
                    "with"
                } else {
                    "without"
                }
            } else {
                "-"
            };
            let _ = writeln!(out, "{},{},{},{},{}", op.mnemonic(), prec, sep_tag, n, fj);
            count += n;
        }
        let _ = writeln!(out, "TOTAL,-,-,{},{}", count, self.total_fj);
        out
    }
}

/// Full energy-table dump, 15 measured entries plus the derived classes.
pub fn energy_csv(t: &EnergyTable) -> String {
    let mut out = String::from("op,precision,separator,fJ\n");
    for (i, n) in [2usize, 4, 8].iter().enumerate() {
        let _ = writeln!(out, "ADD,{n},-,{}", t.add[i]);
    }
    for (i, n) in [2usize, 4, 8].iter().enumerate() {
        let _ = writeln!(out, "SUB,{n},without,{}", t.sub_without[i]);
        let _ = writeln!(out, "SUB,{n},with,{}", t.sub_with[i]);
    }
    for (i, n) in [2usize, 4, 8].iter().enumerate() {
        let _ = writeln!(out, "MULT,{n},without,{}", t.mult_without[i]);
        let _ = writeln!(out, "MULT,{n},with,{}", t.mult_with[i]);
    }
    out
}

/// Clock-period breakdown in picoseconds. The logic-chain component is
/// anchored at the 8-bit figure (a 16-stage carry chain) and scales linearly
/// with the chain length at other precisions. Defaults sum to 444 ps, one
/// 2.25 GHz cycle at 1.0 V.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayModel {
    pub bl_compute_ps: f64,
    pub sense_ps: f64,
    pub logic_chain_8bit_ps: f64,
    pub writeback_ps: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        Self { bl_compute_ps: 130.0, sense_ps: 40.0, logic_chain_8bit_ps: 222.0, writeback_ps: 52.0 }
    }
}

impl DelayModel {
    pub fn logic_chain_ps(&self, precision: usize) -> Result<f64, ModelError> {
        precision_index(precision)
            .map_err(|_| ModelError::UnknownEntry { op: "logic-chain".into(), precision })?;
        Ok(self.logic_chain_8bit_ps * precision as f64 / 8.0)
    }

    /// Derived clock period: the sum of the component delays.
    pub fn clock_period_ps(&self, precision: usize) -> Result<f64, ModelError> {
        Ok(self.bl_compute_ps + self.sense_ps + self.logic_chain_ps(precision)? + self.writeback_ps)
    }
}

/// Maximum operating frequency versus supply voltage: piecewise-linear
/// between measured anchors, with the last segment extrapolated up to the
/// domain limit. Anchored at 372 MHz (0.6 V) and 2.25 GHz (1.0 V) over the
/// 0.6-1.1 V supply range.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqVoltageTable {
    pub anchors: Vec<(f64, f64)>,
    pub vdd_min: f64,
    pub vdd_max: f64,
}

impl Default for FreqVoltageTable {
    fn default() -> Self {
        Self { anchors: vec![(0.6, 372.0e6), (1.0, 2.25e9)], vdd_min: 0.6, vdd_max: 1.1 }
    }
}

impl FreqVoltageTable {
    pub fn max_frequency(&self, vdd: f64) -> Result<f64, ModelError> {
        if !(vdd >= self.vdd_min && vdd <= self.vdd_max) {
            return Err(ModelError::VddOutOfRange { vdd, min: self.vdd_min, max: self.vdd_max });
        }
        let anchors = &self.anchors;
        assert!(anchors.len() >= 2, "frequency table needs at least two anchors");
        let seg = anchors
            .windows(2)
            .find(|w| vdd <= w[1].0)
            .unwrap_or_else(|| &anchors[anchors.len() - 2..]);
        let (v0, f0) = seg[0];
        let (v1, f1) = seg[1];
        Ok(f0 + (f1 - f0) * (vdd - v0) / (v1 - v0))
    }
}

/// Reported efficiency of the reference silicon at 0.6 V / 372 MHz, echoed in
/// efficiency reports for comparison. The two figures are also quoted with
/// the opposite pairing in places; both readings are carried.
pub const REFERENCE_TOPS_PER_WATT_ADD: f64 = 8.09;
pub const REFERENCE_TOPS_PER_WATT_MULT: f64 = 0.68;
pub const REFERENCE_TOPS_VDD: f64 = 0.6;
pub const REFERENCE_TOPS_FREQUENCY_HZ: f64 = 372.0e6;
/// Reported relative bit-line compute delay of the boosted read path versus an
/// under-driven wordline design (worst case).
pub const REFERENCE_BL_COMPUTE_DELAY_RATIO: f64 = 0.22;
/// Reported carry-path speedup range of the transmission-gate adder over a
/// logic-gate adder.
pub const REFERENCE_FA_SPEEDUP_RANGE: (f64, f64) = (1.8, 2.2);

/// One efficiency computation with its inputs, so the counting convention is
/// explicit rather than implied.
#[derive(Debug, Clone, PartialEq)]
pub struct TopsReport {
    pub op: Opcode,
    pub precision: usize,
    pub vdd: f64,
    pub frequency_hz: f64,
    pub cycles: u64,
    pub lanes_active: u64,
    pub words_per_op: u64,
    pub energy_fj: f64,
    pub ops_per_second: f64,
    pub power_watts: f64,
    pub tops_per_watt: f64,
}

impl TopsReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {}-bit at {} V: {:.4} TOPS/W",
            self.op.mnemonic(),
            self.precision,
            self.vdd,
            self.tops_per_watt
        );
        let _ = writeln!(
            s,
            "  words/op = lanes_active / word_lanes = {} / {} = {}",
            self.lanes_active,
            if self.op == Opcode::Mult { 2 * self.precision } else { self.precision },
            self.words_per_op
        );
        let _ = writeln!(
            s,
            "  ops/s = words/op * f / cycles = {} * {:.4e} / {} = {:.4e}",
            self.words_per_op, self.frequency_hz, self.cycles, self.ops_per_second
        );
        let _ = writeln!(
            s,
            "  power = E_op * f / cycles = {} fJ * {:.4e} / {} = {:.4e} W",
            self.energy_fj, self.frequency_hz, self.cycles, self.power_watts
        );
        let _ = writeln!(s, "  TOPS/W = (ops/s) / power / 1e12 = {:.4}", self.tops_per_watt);
        let _ = writeln!(
            s,
            "  reference silicon at {} V / {:.0} MHz: ADD {} TOPS/W, MULT {} TOPS/W \
             (inverse pairing also reported: ADD {}, MULT {})",
            REFERENCE_TOPS_VDD,
            REFERENCE_TOPS_FREQUENCY_HZ / 1e6,
            REFERENCE_TOPS_PER_WATT_ADD,
            REFERENCE_TOPS_PER_WATT_MULT,
            REFERENCE_TOPS_PER_WATT_MULT,
            REFERENCE_TOPS_PER_WATT_ADD,
        );
        s
    }
}

/// Tera-operations per second per watt for one op class, computed from the
/// energy table, the op's cycle count, the frequency at `vdd`, and the number
/// of words processed in parallel (`lanes_active / precision`, or half that
/// for multiply, whose word groups are twice as wide).
pub fn tops_per_watt(
    energy: &EnergyTable,
    freq: &FreqVoltageTable,
    op: Opcode,
    precision: usize,
    with_separator: bool,
    vdd: f64,
    lanes_active: u64,
) -> Result<TopsReport, ModelError> {
    let frequency_hz = freq.max_frequency(vdd)?;
    let energy_fj = energy.energy_of(op, precision, with_separator)?;
    let cycles = op.cycles(precision) as u64;
    let word_lanes = if op == Opcode::Mult { 2 * precision as u64 } else { precision as u64 };
    let words_per_op = lanes_active / word_lanes;
    let ops_per_second = words_per_op as f64 * frequency_hz / cycles as f64;
    let power_watts = energy_fj * 1e-15 * frequency_hz / cycles as f64;
    let tops = if power_watts > 0.0 { ops_per_second / power_watts / 1e12 } else { 0.0 };
    Ok(TopsReport {
        op,
        precision,
        vdd,
        frequency_hz,
        cycles,
        lanes_active,
        words_per_op,
        energy_fj,
        ops_per_second,
        power_watts,
        tops_per_watt: tops,
    })
}

/// Cycle counts of the bit-serial baseline (words stored one per column,
/// processed one bit per cycle): add takes N+1 cycles, multiply N^2.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineCycles {
    pub serial_add: [u64; 3],
    pub serial_mult: [u64; 3],
}

impl Default for BaselineCycles {
    fn default() -> Self {
        Self { serial_add: [3, 5, 9], serial_mult: [4, 16, 64] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchKind {
    BitSerial,
    BitParallel,
}

impl ArchKind {
    pub fn label(self) -> &'static str {
        match self {
            ArchKind::BitSerial => "bit-serial",
            ArchKind::BitParallel => "bit-parallel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpClass {
    Add,
    Mult,
}

impl OpClass {
    pub fn label(self) -> &'static str {
        match self {
            OpClass::Add => "add",
            OpClass::Mult => "mult",
        }
    }
}

/// One scheduling result of the baseline comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub arch: ArchKind,
    pub op: OpClass,
    pub n: usize,
    pub bl_size: usize,
    pub op_count: u64,
    pub batch_words: u64,
    pub cycles_per_batch: u64,
    pub total_cycles: u64,
    pub cycles_per_op: f64,
}

/// Schedules `op_count` N-bit adds and multiplies on both architectures over a
/// `bl_size`-column row and reports total cycles and cycles per op.
///
/// Bit-serial: one word per column, so a batch is `bl_size` words. Bit-parallel:
/// words lie along the row behind a `mux_ratio`:1 column interleave, so a batch
/// is `bl_size / (mux_ratio * N)` words for add and half that for multiply
/// (product groups span 2N lanes).
pub fn compare_bitserial(
    n: usize,
    bl_size: usize,
    op_count: u64,
    mux_ratio: usize,
    baseline: &BaselineCycles,
) -> Result<Vec<SweepRow>, ModelError> {
    let idx = precision_index(n).map_err(|_| ModelError::UnknownEntry { op: "compare".into(), precision: n })?;
    let needed = mux_ratio * 2 * n;
    if bl_size < needed {
        return Err(ModelError::GeometryTooSmall { bl_size, needed });
    }
    let points = [
        (ArchKind::BitSerial, OpClass::Add, bl_size as u64, baseline.serial_add[idx]),
        (ArchKind::BitParallel, OpClass::Add, (bl_size / (mux_ratio * n)) as u64, 1),
        (ArchKind::BitSerial, OpClass::Mult, bl_size as u64, baseline.serial_mult[idx]),
        (ArchKind::BitParallel, OpClass::Mult, (bl_size / (mux_ratio * 2 * n)) as u64, n as u64 + 2),
    ];
    Ok(points
        .into_iter()
        .map(|(arch, op, batch_words, cycles_per_batch)| {
            let batches = op_count.div_ceil(batch_words);
            let total_cycles = batches * cycles_per_batch;
            let cycles_per_op =
                if op_count == 0 { 0.0 } else { total_cycles as f64 / op_count as f64 };
            SweepRow { arch, op, n, bl_size, op_count, batch_words, cycles_per_batch, total_cycles, cycles_per_op }
        })
        .collect())
}

/// Flat CSV for a sweep. The op class is folded into the arch label so the
/// header stays `arch,N,bl_size,op_count,total_cycles,cycles_per_op`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("arch,N,bl_size,op_count,total_cycles,cycles_per_op\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}-{},{},{},{},{},{}",
            r.arch.label(),
            r.op.label(),
            r.n,
            r.bl_size,
            r.op_count,
            r.total_cycles,
            r.cycles_per_op
        );
    }
    out
}

/// Grid for the `bench` command.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub bl_sizes: Vec<usize>,
    pub op_count: u64,
    pub precision: usize,
}

impl Default for BenchGrid {
    fn default() -> Self {
        Self { bl_sizes: vec![128, 256, 512, 1024], op_count: 1024, precision: 8 }
    }
}
