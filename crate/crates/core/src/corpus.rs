//! Seeded generation of random hazard-legal programs, used by the randomized
//! equivalence and non-disturbance suites and by `check --random`.
//!
//! Generated ops read main-array rows only and write either main rows or
//! dummy rows that no later op reads, so a word-level reference that models
//! destinations (but not the multi-cycle scratch traffic of SUB/MULT) agrees
//! with the simulator on every destination row.

use rand::Rng;

use crate::array::RowAddress;
use crate::config::MacroConfig;
use crate::sequencer::{MicroOp, Opcode, Program, Step};

/// Ops eligible for random programs (WRITE is added separately as data setup).
const COMPUTE_OPS: [Opcode; 13] = [
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
    Opcode::Copy,
];

pub fn random_lanes<R: Rng>(lanes: usize, rng: &mut R) -> Vec<bool> {
    (0..lanes).map(|_| rng.gen_bool(0.5)).collect()
}

/// One random legal program: a few WRITE steps seeding main rows, then
/// `op_count` compute ops over them.
pub fn random_program<R: Rng>(cfg: &MacroConfig, precision: usize, op_count: usize, rng: &mut R) -> Program {
    let lanes = cfg.lanes();
    let mult_ok = cfg.dummy_rows >= 3 && lanes % (2 * precision) == 0;
    let mut steps = Vec::new();

    let seeded_rows = cfg.rows_per_bank.clamp(2, 6);
    for bank in 0..cfg.banks {
        for row in 0..seeded_rows {
            let op = MicroOp::write(bank, RowAddress::main(bank, row), precision);
            steps.push(Step::write(op, random_lanes(lanes, rng)));
        }
    }

    for _ in 0..op_count {
        let bank = rng.gen_range(0..cfg.banks);
        let main_row = |rng: &mut R| RowAddress::main(bank, rng.gen_range(0..cfg.rows_per_bank));
        let opcode = loop {
            let candidate = COMPUTE_OPS[rng.gen_range(0..COMPUTE_OPS.len())];
            if candidate != Opcode::Mult || mult_ok {
                break candidate;
            }
        };
        let srcs: Vec<RowAddress> = (0..opcode.src_count()).map(|_| main_row(rng)).collect();
        // MULT and SUB claim dummy scratch rows; keeping their destinations in
        // the main array leaves the allocator enough free rows.
        let dest = if matches!(opcode, Opcode::Mult | Opcode::Sub) || rng.gen_bool(0.8) {
            main_row(rng)
        } else {
            RowAddress::dummy(bank, rng.gen_range(0..cfg.dummy_rows))
        };
        let op = MicroOp::new(opcode, bank, srcs, dest, precision).with_separator(rng.gen_bool(0.5));
        steps.push(Step::op(op));
    }

    Program { steps, vdd: None }
}
