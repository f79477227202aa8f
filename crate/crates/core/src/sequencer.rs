//! Micro-op decode, macro-op expansion into per-cycle primitives, and the
//! cycle-by-cycle executor with trace and energy accounting.
//!
//! Single-cycle ops (logic, shift, add, add-and-shift, write, copy) map to one
//! primitive cycle. Subtract expands to a NOT into a dummy row followed by an
//! add with carry-in 1 (two's complement). Multiply expands to two init cycles
//! (zero the accumulator row and load the multiplier flip-flops, then copy the
//! multiplicand into the dummy array), N-1 multiplier-gated add-and-shift
//! cycles, and one final unshifted add into the destination: N+2 cycles total,
//! with the accumulator following `acc <- (acc + b_i * A) * 2` and the
//! multiplier consumed most-significant-bit first.

use std::fmt;
use std::io;

use serde::Serialize;

use crate::array::{hazard_check, CellArray, CycleKind, Region, RowAddress, SenseResult};
use crate::bits::lanes_to_hex;
use crate::config::{ConfigError, MacroConfig, ModelConfig};
use crate::error::SimError;
use crate::perf::EnergyTable;
use crate::ypath::{carry_chain, route_writeback, LaneRoute, LogicOp, YPathState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Opcode {
    Nand,
    And,
    Nor,
    Or,
    Xnor,
    Xor,
    Not,
    Shl,
    Add,
    AddSh,
    Sub,
    Mult,
    Write,
    Copy,
}

impl Opcode {
    pub const ALL: [Opcode; 14] = [
        Opcode::Nand,
        Opcode::And,
        Opcode::Nor,
        Opcode::Or,
        Opcode::Xnor,
        Opcode::Xor,
        Opcode::Not,
        Opcode::Shl,
        Opcode::Add,
        Opcode::AddSh,
        Opcode::Sub,
        Opcode::Mult,
        Opcode::Write,
        Opcode::Copy,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Nand => "NAND",
            Opcode::And => "AND",
            Opcode::Nor => "NOR",
            Opcode::Or => "OR",
            Opcode::Xnor => "XNOR",
            Opcode::Xor => "XOR",
            Opcode::Not => "NOT",
            Opcode::Shl => "SHL",
            Opcode::Add => "ADD",
            Opcode::AddSh => "ADDSH",
            Opcode::Sub => "SUB",
            Opcode::Mult => "MULT",
            Opcode::Write => "WRITE",
            Opcode::Copy => "COPY",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Opcode> {
        Opcode::ALL.into_iter().find(|op| op.mnemonic().eq_ignore_ascii_case(s))
    }

    /// Source rows required: 0 for WRITE (its operand is an immediate),
    /// 1 for the unary ops, 2 otherwise.
    pub fn src_count(self) -> usize {
        match self {
            Opcode::Write => 0,
            Opcode::Not | Opcode::Shl | Opcode::Copy => 1,
            _ => 2,
        }
    }

    /// Cycles consumed at a given precision.
    pub fn cycles(self, precision: usize) -> usize {
        match self {
            Opcode::Sub => 2,
            Opcode::Mult => precision + 2,
            _ => 1,
        }
    }

    pub fn logic_op(self) -> Option<LogicOp> {
        match self {
            Opcode::Nand => Some(LogicOp::Nand),
            Opcode::And => Some(LogicOp::And),
            Opcode::Nor => Some(LogicOp::Nor),
            Opcode::Or => Some(LogicOp::Or),
            Opcode::Xnor => Some(LogicOp::Xnor),
            Opcode::Xor => Some(LogicOp::Xor),
            Opcode::Not => Some(LogicOp::Not),
            _ => None,
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One decoded unit of work for the sequencer.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroOp {
    pub opcode: Opcode,
    pub bank: usize,
    pub srcs: Vec<RowAddress>,
    pub dest: RowAddress,
    pub precision: usize,
    /// Carry injected at each word group's LSB; only meaningful for ADD.
    pub carry_in: bool,
    /// Use the bit-line separator on dummy-array write-back cycles.
    pub separator: bool,
}

impl MicroOp {
    pub fn new(opcode: Opcode, bank: usize, srcs: Vec<RowAddress>, dest: RowAddress, precision: usize) -> Self {
        Self { opcode, bank, srcs, dest, precision, carry_in: false, separator: true }
    }

    pub fn binary(opcode: Opcode, bank: usize, a: RowAddress, b: RowAddress, dest: RowAddress, precision: usize) -> Self {
        Self::new(opcode, bank, vec![a, b], dest, precision)
    }

    pub fn unary(opcode: Opcode, bank: usize, src: RowAddress, dest: RowAddress, precision: usize) -> Self {
        Self::new(opcode, bank, vec![src], dest, precision)
    }

    pub fn write(bank: usize, dest: RowAddress, precision: usize) -> Self {
        Self::new(Opcode::Write, bank, Vec::new(), dest, precision)
    }

    pub fn with_carry_in(mut self, carry_in: bool) -> Self {
        self.carry_in = carry_in;
        self
    }

    pub fn with_separator(mut self, separator: bool) -> Self {
        self.separator = separator;
        self
    }

    /// Structural validation against a geometry: source arity, precision fit,
    /// bank consistency and address ranges. Hazards are checked per cycle at
    /// execution.
    pub fn validate(&self, cfg: &MacroConfig) -> Result<(), SimError> {
        if self.srcs.len() != self.opcode.src_count() {
            return Err(SimError::InvalidOp(format!(
                "{} takes {} source row(s), got {}",
                self.opcode,
                self.opcode.src_count(),
                self.srcs.len()
            )));
        }
        let lanes = cfg.lanes();
        let group = self.group_width();
        if !crate::config::SUPPORTED_PRECISIONS.contains(&self.precision) || lanes % group != 0 {
            return Err(SimError::GeometryMismatch { lanes, width: group });
        }
        if self.carry_in && self.opcode != Opcode::Add {
            return Err(SimError::InvalidOp(format!("carry-in is only defined for ADD, not {}", self.opcode)));
        }
        for addr in self.srcs.iter().chain([&self.dest]) {
            if addr.bank != self.bank {
                return Err(SimError::InvalidOp(format!(
                    "row {addr} belongs to bank {}, op targets bank {}",
                    addr.bank, self.bank
                )));
            }
            check_range(cfg, addr)?;
        }
        Ok(())
    }

    /// Word-group width in lanes: the precision, except for multiply whose
    /// groups are twice as wide so the full 2N-bit product fits.
    pub fn group_width(&self) -> usize {
        if self.opcode == Opcode::Mult {
            2 * self.precision
        } else {
            self.precision
        }
    }
}

fn check_range(cfg: &MacroConfig, addr: &RowAddress) -> Result<(), SimError> {
    let rows = match addr.region {
        Region::Main => cfg.rows_per_bank,
        Region::Dummy => cfg.dummy_rows,
    };
    if addr.bank >= cfg.banks || addr.row >= rows {
        return Err(SimError::AddressOutOfRange { bank: addr.bank, region: addr.region, row: addr.row });
    }
    Ok(())
}

/// A micro-op plus the immediate lanes a WRITE carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub op: MicroOp,
    pub imm: Option<Vec<bool>>,
}

impl Step {
    pub fn op(op: MicroOp) -> Self {
        Self { op, imm: None }
    }

    pub fn write(op: MicroOp, imm: Vec<bool>) -> Self {
        Self { op, imm: Some(imm) }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub steps: Vec<Step>,
    /// Supply voltage requested by the program, if any; informational.
    pub vdd: Option<f64>,
}

impl Program {
    /// Total cycles the program will consume.
    pub fn cycle_count(&self) -> usize {
        self.steps.iter().map(|s| s.op.opcode.cycles(s.op.precision)).sum()
    }
}

/// What one expanded cycle did: which primitive ran, which rows it activated,
/// where it wrote, the lanes it wrote, and its energy share.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleReport {
    pub cycle: u64,
    pub opcode: Opcode,
    pub bank: usize,
    pub rows: Vec<RowAddress>,
    pub dest: RowAddress,
    pub lanes_written: Vec<bool>,
    pub energy_fj: f64,
    /// Index of the program op this cycle belongs to (not serialized).
    pub op_index: usize,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    cycle: u64,
    opcode: &'a str,
    bank: usize,
    rows: Vec<String>,
    dest: String,
    lanes_written: String,
    #[serde(rename = "energy_fJ")]
    energy_fj: f64,
}

impl CycleReport {
    /// One JSON object per cycle; lane bit 0 of `lanes_written` is the
    /// least-significant hex bit.
    pub fn to_json_line(&self) -> String {
        let line = TraceLine {
            cycle: self.cycle,
            opcode: self.opcode.mnemonic(),
            bank: self.bank,
            rows: self.rows.iter().map(|r| r.to_string()).collect(),
            dest: self.dest.to_string(),
            lanes_written: lanes_to_hex(&self.lanes_written),
            energy_fj: self.energy_fj,
        };
        serde_json::to_string(&line).expect("trace line serialization cannot fail")
    }
}

/// Writes a JSONL trace, one cycle per line.
pub fn write_trace<W: io::Write>(mut w: W, reports: &[CycleReport]) -> io::Result<()> {
    for r in reports {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// One expanded cycle, ready to execute.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveCycle {
    pub opcode: Opcode,
    pub bank: usize,
    pub reads: Vec<RowAddress>,
    pub dest: RowAddress,
    pub action: CycleAction,
    pub precision: usize,
    pub group_width: usize,
    pub separator_open: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CycleAction {
    /// Write immediate lanes; when `load_multiplier` is set the activated row
    /// is sensed into the per-group multiplier flip-flops in the same cycle.
    WriteImm { lanes: Vec<bool>, load_multiplier: bool },
    /// Pass the sensed row through to the destination. `mask_to_low_half`
    /// keeps only the low half of each word group (multiplicand staging).
    Copy { mask_to_low_half: bool },
    Logic(LogicOp),
    Shl,
    Add { carry_in: bool },
    AddShift,
    /// Multiplier-gated add-and-shift (the multiply inner step).
    MultAddShift,
    /// Multiplier-gated plain add (the multiply final step).
    MultFinalAdd,
}

impl CycleAction {
    fn kind(&self) -> CycleKind {
        match self {
            CycleAction::WriteImm { load_multiplier: false, .. } => CycleKind::WriteOnly,
            _ => CycleKind::ReadModifyWrite,
        }
    }
}

/// Picks the `need` lowest-index dummy rows not used by the op itself.
fn alloc_dummy_rows(
    cfg: &MacroConfig,
    bank: usize,
    exclude: &[RowAddress],
    need: usize,
) -> Result<Vec<RowAddress>, SimError> {
    let mut out = Vec::with_capacity(need);
    for row in 0..cfg.dummy_rows {
        let addr = RowAddress::dummy(bank, row);
        if !exclude.contains(&addr) {
            out.push(addr);
            if out.len() == need {
                return Ok(out);
            }
        }
    }
    Err(SimError::NoFreeDummyRow { bank, need })
}

/// Expands a validated micro-op into its primitive cycles. Pure in everything
/// but the immediate: multiplier bits and sensed data are resolved at
/// execution time.
pub fn expand_op(op: &MicroOp, imm: Option<&[bool]>, cfg: &MacroConfig) -> Result<Vec<PrimitiveCycle>, SimError> {
    op.validate(cfg)?;
    let lanes = cfg.lanes();
    let gw = op.group_width();
    let sep = |dest: &RowAddress| op.separator && dest.region == Region::Dummy;
    let cycle = |opcode: Opcode, reads: Vec<RowAddress>, dest: RowAddress, action: CycleAction| PrimitiveCycle {
        opcode,
        bank: op.bank,
        separator_open: sep(&dest),
        reads,
        dest,
        action,
        precision: op.precision,
        group_width: gw,
    };

    match op.opcode {
        Opcode::Write => {
            let lanes_imm = imm
                .ok_or_else(|| SimError::InvalidOp("WRITE requires an immediate".into()))?
                .to_vec();
            if lanes_imm.len() != lanes {
                return Err(SimError::InvalidOp(format!(
                    "WRITE immediate has {} lanes, row has {lanes}",
                    lanes_imm.len()
                )));
            }
            Ok(vec![cycle(
                Opcode::Write,
                Vec::new(),
                op.dest,
                CycleAction::WriteImm { lanes: lanes_imm, load_multiplier: false },
            )])
        }
        Opcode::Copy => Ok(vec![cycle(
            Opcode::Copy,
            op.srcs.clone(),
            op.dest,
            CycleAction::Copy { mask_to_low_half: false },
        )]),
        Opcode::Shl => Ok(vec![cycle(Opcode::Shl, op.srcs.clone(), op.dest, CycleAction::Shl)]),
        Opcode::Add => Ok(vec![cycle(
            Opcode::Add,
            op.srcs.clone(),
            op.dest,
            CycleAction::Add { carry_in: op.carry_in },
        )]),
        Opcode::AddSh => Ok(vec![cycle(Opcode::AddSh, op.srcs.clone(), op.dest, CycleAction::AddShift)]),
        Opcode::Sub => {
            // NOT of the subtrahend into a dummy row, then two's-complement
            // add with an injected carry.
            let mut exclude = op.srcs.clone();
            exclude.push(op.dest);
            let scratch = alloc_dummy_rows(cfg, op.bank, &exclude, 1)?[0];
            Ok(vec![
                cycle(Opcode::Not, vec![op.srcs[1]], scratch, CycleAction::Logic(LogicOp::Not)),
                cycle(Opcode::Add, vec![op.srcs[0], scratch], op.dest, CycleAction::Add { carry_in: true }),
            ])
        }
        Opcode::Mult => {
            let mut exclude = op.srcs.clone();
            exclude.push(op.dest);
            let rows = alloc_dummy_rows(cfg, op.bank, &exclude, 3)?;
            let (zero_row, mcand_row, acc_row) = (rows[0], rows[1], rows[2]);
            let (a_row, b_row) = (op.srcs[0], op.srcs[1]);
            let mut cycles = Vec::with_capacity(op.precision + 2);
            // Init 1: zero the accumulator seed while the multiplier word is
            // sensed into the flip-flop registers.
            cycles.push(cycle(
                Opcode::Write,
                vec![b_row],
                zero_row,
                CycleAction::WriteImm { lanes: vec![false; lanes], load_multiplier: true },
            ));
            // Init 2: stage the multiplicand in the dummy array, keeping only
            // the low half of each product group.
            cycles.push(cycle(
                Opcode::Copy,
                vec![a_row],
                mcand_row,
                CycleAction::Copy { mask_to_low_half: true },
            ));
            // N-1 gated add-and-shift cycles; the accumulator moves from the
            // zero row into its own row on the first one and stays there.
            cycles.push(cycle(Opcode::AddSh, vec![zero_row, mcand_row], acc_row, CycleAction::MultAddShift));
            for _ in 1..op.precision.saturating_sub(1) {
                cycles.push(cycle(Opcode::AddSh, vec![acc_row, mcand_row], acc_row, CycleAction::MultAddShift));
            }
            // Final unshifted add lands the product on the destination.
            cycles.push(cycle(Opcode::Add, vec![acc_row, mcand_row], op.dest, CycleAction::MultFinalAdd));
            Ok(cycles)
        }
        // Binary logic plus NOT
        logic => {
            let lop = logic.logic_op().expect("remaining opcodes are logic ops");
            Ok(vec![cycle(logic, op.srcs.clone(), op.dest, CycleAction::Logic(lop))])
        }
    }
}

/// Aborting error of [`Simulator::run_program`]: the offending op index plus
/// the underlying fault. The failing op leaves the array untouched.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("op {op_index}: {source}")]
pub struct ProgramError {
    pub op_index: usize,
    #[source]
    pub source: SimError,
}

/// Owns a [`CellArray`] and a [`YPathState`] and executes micro-ops cycle by
/// cycle. Strictly sequential; distinct simulators are fully independent.
pub struct Simulator {
    cfg: MacroConfig,
    energy: EnergyTable,
    array: CellArray,
    state: YPathState,
    next_cycle: u64,
}

impl Simulator {
    pub fn new(model: &ModelConfig) -> Result<Self, ConfigError> {
        model.macro_cfg.validate()?;
        Ok(Self {
            cfg: model.macro_cfg,
            energy: model.energy.clone(),
            array: CellArray::new(&model.macro_cfg),
            state: YPathState::new(model.macro_cfg.lanes()),
            next_cycle: 0,
        })
    }

    pub fn with_macro(cfg: MacroConfig) -> Result<Self, ConfigError> {
        let model = ModelConfig { macro_cfg: cfg, ..ModelConfig::default() };
        Self::new(&model)
    }

    pub fn config(&self) -> &MacroConfig {
        &self.cfg
    }

    pub fn array(&self) -> &CellArray {
        &self.array
    }

    pub fn array_mut(&mut self) -> &mut CellArray {
        &mut self.array
    }

    pub fn state(&self) -> &YPathState {
        &self.state
    }

    pub fn write_row(&mut self, addr: &RowAddress, lanes: &[bool]) -> Result<(), SimError> {
        self.array.write_row(addr, lanes)
    }

    pub fn read_lanes(&self, addr: &RowAddress) -> Result<Vec<bool>, SimError> {
        self.array.read_lanes(addr)
    }

    pub fn reset_cycle_counter(&mut self) {
        self.next_cycle = 0;
    }

    /// Executes one macro-op. All cycles are hazard- and range-checked before
    /// the first write, so a rejected op leaves the array untouched.
    pub fn exec_op(&mut self, op: &MicroOp, imm: Option<&[bool]>) -> Result<Vec<CycleReport>, SimError> {
        self.exec_op_observed(op, imm, 0, |_, _| {})
    }

    /// Like [`Self::exec_op`] but invokes `observe` after every cycle with the
    /// cycle report and the array state, for per-cycle checks.
    pub fn exec_op_observed<F>(
        &mut self,
        op: &MicroOp,
        imm: Option<&[bool]>,
        op_index: usize,
        mut observe: F,
    ) -> Result<Vec<CycleReport>, SimError>
    where
        F: FnMut(&CycleReport, &CellArray),
    {
        let cycles = expand_op(op, imm, &self.cfg)?;
        for c in &cycles {
            self.validate_cycle(c)?;
        }
        let total_energy = self
            .energy
            .energy_of(op.opcode, op.precision, op.separator)
            .map_err(|e| SimError::InvalidOp(e.to_string()))?;
        let n = cycles.len();
        let share = total_energy / n as f64;
        self.state.clear_for_op();
        let mut reports = Vec::with_capacity(n);
        let mut spent = 0.0;
        for (i, c) in cycles.iter().enumerate() {
            // last cycle takes the remainder so the shares sum exactly
            let energy = if i + 1 == n { total_energy - spent } else { share };
            spent += energy;
            let report = self.exec_primitive(c, energy, op_index)?;
            observe(&report, &self.array);
            reports.push(report);
        }
        Ok(reports)
    }

    fn validate_cycle(&self, c: &PrimitiveCycle) -> Result<(), SimError> {
        for addr in c.reads.iter().chain([&c.dest]) {
            self.array.check_addr(addr)?;
        }
        // a manually opened bank separator keeps the main bit line
        // disconnected for every cycle, not just this op's dummy write-backs
        let manually_open = !self.array.separator_closed(c.bank)?;
        hazard_check(&c.reads, &c.dest, c.action.kind(), c.separator_open || manually_open)?;
        Ok(())
    }

    fn exec_primitive(&mut self, c: &PrimitiveCycle, energy_fj: f64, op_index: usize) -> Result<CycleReport, SimError> {
        self.state.carry_status.clear();
        let lanes = self.cfg.lanes();
        let writeback = match &c.action {
            CycleAction::WriteImm { lanes: imm, load_multiplier } => {
                if *load_multiplier {
                    let sense = self.array.activate(&c.reads)?;
                    self.state.load_multiplier(&sense.x, c.precision, c.group_width);
                }
                self.state.prop_ff.copy_from_slice(imm);
                imm.clone()
            }
            CycleAction::Copy { mask_to_low_half } => {
                let sense = self.array.activate(&c.reads)?;
                let mut data = sense.x;
                if *mask_to_low_half {
                    for (lane, bit) in data.iter_mut().enumerate() {
                        if lane % c.group_width >= c.precision {
                            *bit = false;
                        }
                    }
                }
                data
            }
            CycleAction::Logic(op) => {
                let sense = self.array.activate(&c.reads)?;
                self.route(&[LaneRoute::LogicOut(*op)], &[], &sense, c.group_width, lanes)?
            }
            CycleAction::Shl => {
                let sense = self.array.activate(&c.reads)?;
                self.route(&[LaneRoute::ShiftPass], &[], &sense, c.group_width, lanes)?
            }
            CycleAction::Add { carry_in } => {
                let sense = self.array.activate(&c.reads)?;
                let (sums, carries) = carry_chain(&sense, c.group_width, *carry_in);
                self.state.carry_status = carries;
                self.route(&[LaneRoute::FASum], &sums, &sense, c.group_width, lanes)?
            }
            CycleAction::AddShift | CycleAction::MultAddShift => {
                let sense = self.array.activate(&c.reads)?;
                let (sums, carries) = carry_chain(&sense, c.group_width, false);
                self.state.carry_status = carries;
                self.route(&[LaneRoute::AddShift], &sums, &sense, c.group_width, lanes)?
            }
            CycleAction::MultFinalAdd => {
                let sense = self.array.activate(&c.reads)?;
                let (sums, carries) = carry_chain(&sense, c.group_width, false);
                self.state.carry_status = carries;
                self.route(&[LaneRoute::FASum], &sums, &sense, c.group_width, lanes)?
            }
        };
        self.array.write_row(&c.dest, &writeback)?;
        let report = CycleReport {
            cycle: self.next_cycle,
            opcode: c.opcode,
            bank: c.bank,
            rows: c.reads.clone(),
            dest: c.dest,
            lanes_written: writeback,
            energy_fj,
            op_index,
        };
        self.next_cycle += 1;
        Ok(report)
    }

    fn route(
        &mut self,
        route: &[LaneRoute],
        sums: &[bool],
        sense: &SenseResult,
        group_width: usize,
        lanes: usize,
    ) -> Result<Vec<bool>, SimError> {
        let routes = vec![route[0]; lanes];
        route_writeback(&routes, sums, sense, &mut self.state, group_width)
    }

    /// Runs a whole program; the first failing op aborts with its index, and
    /// the trace cycle counter restarts at zero.
    pub fn run_program(&mut self, program: &Program) -> Result<Vec<CycleReport>, ProgramError> {
        self.next_cycle = 0;
        let mut trace = Vec::with_capacity(program.cycle_count());
        for (op_index, step) in program.steps.iter().enumerate() {
            let reports = self
                .exec_op_observed(&step.op, step.imm.as_deref(), op_index, |_, _| {})
                .map_err(|source| ProgramError { op_index, source })?;
            trace.extend(reports);
        }
        Ok(trace)
    }

    // Convenience wrappers for the individual op classes.

    pub fn exec_logic(&mut self, opcode: Opcode, bank: usize, srcs: &[RowAddress], dest: RowAddress) -> Result<Vec<CycleReport>, SimError> {
        let op = MicroOp::new(opcode, bank, srcs.to_vec(), dest, self.cfg.precision);
        self.exec_op(&op, None)
    }

    pub fn exec_add(&mut self, bank: usize, a: RowAddress, b: RowAddress, dest: RowAddress, carry_in: bool) -> Result<Vec<CycleReport>, SimError> {
        let op = MicroOp::binary(Opcode::Add, bank, a, b, dest, self.cfg.precision).with_carry_in(carry_in);
        self.exec_op(&op, None)
    }

    pub fn exec_sub(&mut self, bank: usize, a: RowAddress, b: RowAddress, dest: RowAddress) -> Result<Vec<CycleReport>, SimError> {
        let op = MicroOp::binary(Opcode::Sub, bank, a, b, dest, self.cfg.precision);
        self.exec_op(&op, None)
    }

    pub fn exec_mult(&mut self, bank: usize, a: RowAddress, b: RowAddress, dest: RowAddress) -> Result<Vec<CycleReport>, SimError> {
        let op = MicroOp::binary(Opcode::Mult, bank, a, b, dest, self.cfg.precision);
        self.exec_op(&op, None)
    }

    pub fn exec_add_shift(&mut self, bank: usize, a: RowAddress, b: RowAddress, dest: RowAddress) -> Result<Vec<CycleReport>, SimError> {
        let op = MicroOp::binary(Opcode::AddSh, bank, a, b, dest, self.cfg.precision);
        self.exec_op(&op, None)
    }
}
