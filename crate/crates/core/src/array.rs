//! SRAM bank storage and bit-line computing semantics.
//!
//! Each bank is a main array plus a small dummy array sharing the same columns.
//! Columns are interleaved `mux_ratio`:1 onto one peripheral slice; only one
//! column per mux group (the configured offset) is ever accessed, and that
//! accessed position is a *lane*. Activating one wordline senses `A` / `!A`
//! per lane; activating two senses `A AND B` / `NOR(A, B)`. The short-pulse
//! wordline and bit-line boosting of the modelled circuit make multi-row reads
//! disturb-free, so reads never mutate cells here by construction.

use std::fmt;

use thiserror::Error;

use crate::config::MacroConfig;
use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Main,
    Dummy,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Main => "m",
            Region::Dummy => "d",
        })
    }
}

/// A row within one bank, in either the main or the dummy array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowAddress {
    pub bank: usize,
    pub region: Region,
    pub row: usize,
}

impl RowAddress {
    pub fn main(bank: usize, row: usize) -> Self {
        Self { bank, region: Region::Main, row }
    }

    pub fn dummy(bank: usize, row: usize) -> Self {
        Self { bank, region: Region::Dummy, row }
    }
}

impl fmt::Display for RowAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.region, self.row)
    }
}

/// Per-lane sense-amplifier outputs of one activation.
///
/// Dual-row activation: `x = A AND B`, `y = NOR(A, B)` (never both 1).
/// Single-row activation: `x = A`, `y = !A` (exactly one is 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseResult {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

impl SenseResult {
    pub fn lanes(&self) -> usize {
        self.x.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Bank {
    main: Vec<bool>,
    dummy: Vec<bool>,
    separator_closed: bool,
}

/// All cell state of one macro: per-bank main and dummy bit matrices plus the
/// per-bank bit-line separator switch (`true` = main-array bit line connected
/// to the peripheral).
#[derive(Debug, Clone, PartialEq)]
pub struct CellArray {
    cfg: MacroConfig,
    banks: Vec<Bank>,
}

impl CellArray {
    /// Zero-initialised array; separators start closed.
    pub fn new(cfg: &MacroConfig) -> Self {
        let bank = Bank {
            main: vec![false; cfg.rows_per_bank * cfg.cols_per_bank],
            dummy: vec![false; cfg.dummy_rows * cfg.cols_per_bank],
            separator_closed: true,
        };
        Self { cfg: *cfg, banks: vec![bank; cfg.banks] }
    }

    pub fn config(&self) -> &MacroConfig {
        &self.cfg
    }

    pub fn check_addr(&self, addr: &RowAddress) -> Result<(), SimError> {
        let rows = match addr.region {
            Region::Main => self.cfg.rows_per_bank,
            Region::Dummy => self.cfg.dummy_rows,
        };
        if addr.bank >= self.cfg.banks || addr.row >= rows {
            return Err(SimError::AddressOutOfRange {
                bank: addr.bank,
                region: addr.region,
                row: addr.row,
            });
        }
        Ok(())
    }

    fn row_slice(&self, addr: &RowAddress) -> &[bool] {
        let cols = self.cfg.cols_per_bank;
        let base = addr.row * cols;
        match addr.region {
            Region::Main => &self.banks[addr.bank].main[base..base + cols],
            Region::Dummy => &self.banks[addr.bank].dummy[base..base + cols],
        }
    }

    fn row_slice_mut(&mut self, addr: &RowAddress) -> &mut [bool] {
        let cols = self.cfg.cols_per_bank;
        let base = addr.row * cols;
        match addr.region {
            Region::Main => &mut self.banks[addr.bank].main[base..base + cols],
            Region::Dummy => &mut self.banks[addr.bank].dummy[base..base + cols],
        }
    }

    /// Raw cell read, any column (not restricted to accessed lanes).
    pub fn read_cell(&self, addr: &RowAddress, col: usize) -> bool {
        self.row_slice(addr)[col]
    }

    /// Reads the accessed lane of every mux group in one row.
    pub fn read_lanes(&self, addr: &RowAddress) -> Result<Vec<bool>, SimError> {
        self.check_addr(addr)?;
        let row = self.row_slice(addr);
        Ok((0..self.cfg.lanes()).map(|l| row[self.cfg.lane_col(l)]).collect())
    }

    /// Writes one bit per mux group (at the configured column offset); every
    /// other cell in the array is left untouched.
    pub fn write_row(&mut self, addr: &RowAddress, lanes: &[bool]) -> Result<(), SimError> {
        self.check_addr(addr)?;
        if lanes.len() != self.cfg.lanes() {
            return Err(SimError::InvalidOp(format!(
                "write of {} lanes into a {}-lane row",
                lanes.len(),
                self.cfg.lanes()
            )));
        }
        let cfg = self.cfg;
        let row = self.row_slice_mut(addr);
        for (l, &bit) in lanes.iter().enumerate() {
            row[cfg.lane_col(l)] = bit;
        }
        Ok(())
    }

    /// Activates one or two wordlines and returns the per-lane sense rails.
    /// Pure: the array is never modified by a read.
    pub fn activate(&self, rows: &[RowAddress]) -> Result<SenseResult, SimError> {
        if rows.is_empty() || rows.len() > 2 {
            return Err(HazardViolation::RowCount(rows.len()).into());
        }
        if rows.iter().any(|r| r.bank != rows[0].bank) {
            return Err(HazardViolation::SourcesCrossBank.into());
        }
        for r in rows {
            self.check_addr(r)?;
        }
        let lanes = self.cfg.lanes();
        let mut x = Vec::with_capacity(lanes);
        let mut y = Vec::with_capacity(lanes);
        let first = self.row_slice(&rows[0]);
        if rows.len() == 1 {
            for l in 0..lanes {
                let a = first[self.cfg.lane_col(l)];
                x.push(a);
                y.push(!a);
            }
        } else {
            let second = self.row_slice(&rows[1]);
            for l in 0..lanes {
                let col = self.cfg.lane_col(l);
                let (a, b) = (first[col], second[col]);
                x.push(a && b);
                y.push(!(a || b));
            }
        }
        Ok(SenseResult { x, y })
    }

    /// Sets the per-bank bit-line separator switch. Functional results are
    /// unaffected; energy accounting and the write-back legality rule consult
    /// it (a bank whose separator is left open cannot write back into its
    /// main array).
    pub fn set_separator(&mut self, bank: usize, closed: bool) -> Result<(), SimError> {
        let b = self.banks.get_mut(bank).ok_or(SimError::AddressOutOfRange {
            bank,
            region: Region::Main,
            row: 0,
        })?;
        b.separator_closed = closed;
        Ok(())
    }

    pub fn separator_closed(&self, bank: usize) -> Result<bool, SimError> {
        self.banks
            .get(bank)
            .map(|b| b.separator_closed)
            .ok_or(SimError::AddressOutOfRange { bank, region: Region::Main, row: 0 })
    }

    /// Coordinates of every cell whose value differs from `other`. Intended for
    /// non-disturbance checks on small arrays.
    pub fn changed_cells(&self, other: &CellArray) -> Vec<(usize, Region, usize, usize)> {
        assert_eq!(self.cfg, other.cfg, "arrays must share a geometry");
        let cols = self.cfg.cols_per_bank;
        let mut out = Vec::new();
        for bank in 0..self.cfg.banks {
            let scan = |a: &[bool], b: &[bool], region: Region, out: &mut Vec<_>| {
                for (idx, (va, vb)) in a.iter().zip(b).enumerate() {
                    if va != vb {
                        out.push((bank, region, idx / cols, idx % cols));
                    }
                }
            };
            scan(&self.banks[bank].main, &other.banks[bank].main, Region::Main, &mut out);
            scan(&self.banks[bank].dummy, &other.banks[bank].dummy, Region::Dummy, &mut out);
        }
        out
    }
}

/// Whether a cycle writes back in the same cycle it reads (the prime-phase
/// pattern: read phase, then write-back phase, within one access cycle).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    ReadModifyWrite,
    WriteOnly,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum HazardViolation {
    #[error("{0} wordlines activated; the row decoder drives at most 2")]
    RowCount(usize),
    #[error("activated rows span more than one bank")]
    SourcesCrossBank,
    #[error("write-back targets a different bank than the activated rows")]
    WritebackCrossBank,
    #[error("destination aliases a source row outside a read/write-back cycle")]
    DestAliasesSource,
    #[error("bit-line separator is open: write-back must target the dummy array")]
    SeparatorRequiresDummy,
}

/// Access legality for one cycle. Total and deterministic; returns the first
/// violated rule or `Ok`.
///
/// Rules: at most two activated wordlines; all activated rows in one bank;
/// write-back only into the bank being read; a destination may alias a source
/// row only in a read/write-back cycle; and an open separator (main bit line
/// disconnected) forbids writing back into the main array.
pub fn hazard_check(
    rows: &[RowAddress],
    dest: &RowAddress,
    kind: CycleKind,
    separator_open: bool,
) -> Result<(), HazardViolation> {
    if rows.len() > 2 {
        return Err(HazardViolation::RowCount(rows.len()));
    }
    if rows.iter().any(|r| r.bank != rows[0].bank) {
        return Err(HazardViolation::SourcesCrossBank);
    }
    if !rows.is_empty() && dest.bank != rows[0].bank {
        return Err(HazardViolation::WritebackCrossBank);
    }
    if kind != CycleKind::ReadModifyWrite && rows.contains(dest) {
        return Err(HazardViolation::DestAliasesSource);
    }
    if separator_open && dest.region == Region::Main {
        return Err(HazardViolation::SeparatorRequiresDummy);
    }
    Ok(())
}
