//! Plain-text memory image: one `bank:region:row <value>` line per populated
//! row. `region` is `m` (main) or `d` (dummy); the value is the row's accessed
//! lanes as `0x…` hex or `0b…`/bare binary, lane 0 rightmost. All-zero rows
//! are omitted on output and default to zero on input.

use thiserror::Error;

use crate::array::{CellArray, Region, RowAddress};
use crate::bits::{lanes_to_binary, parse_lane_value};
use crate::config::MacroConfig;
use crate::error::SimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImageError {
    #[error("image line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Sim(#[from] SimError),
}

pub fn parse_region(token: &str) -> Option<Region> {
    match token.to_ascii_lowercase().as_str() {
        "m" | "main" => Some(Region::Main),
        "d" | "dummy" => Some(Region::Dummy),
        _ => None,
    }
}

/// Parses image text into (address, lanes) pairs, validated against the geometry.
pub fn parse(text: &str, cfg: &MacroConfig) -> Result<Vec<(RowAddress, Vec<bool>)>, ImageError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ImageError::Parse { line: line_no, msg };
        let (addr_tok, value_tok) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("expected `bank:region:row <value>`, got `{line}`")))?;
        let mut parts = addr_tok.split(':');
        let (bank_s, region_s, row_s) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(b), Some(reg), Some(r), None) => (b, reg, r),
            _ => return Err(err(format!("bad address `{addr_tok}`, expected bank:region:row"))),
        };
        let bank: usize = bank_s.parse().map_err(|_| err(format!("bad bank `{bank_s}`")))?;
        let region = parse_region(region_s).ok_or_else(|| err(format!("bad region `{region_s}` (m or d)")))?;
        let row: usize = row_s.parse().map_err(|_| err(format!("bad row `{row_s}`")))?;
        let addr = RowAddress { bank, region, row };
        let max_rows = match region {
            Region::Main => cfg.rows_per_bank,
            Region::Dummy => cfg.dummy_rows,
        };
        if bank >= cfg.banks || row >= max_rows {
            return Err(err(format!("address `{addr_tok}` outside the {}x{}(+{}) geometry", cfg.banks, cfg.rows_per_bank, cfg.dummy_rows)));
        }
        let lanes = parse_lane_value(value_tok.trim(), cfg.lanes()).map_err(err)?;
        entries.push((addr, lanes));
    }
    Ok(entries)
}

/// Parses and writes an image into the array.
pub fn load(array: &mut CellArray, text: &str) -> Result<(), ImageError> {
    let entries = parse(text, array.config())?;
    for (addr, lanes) in entries {
        array.write_row(&addr, &lanes)?;
    }
    Ok(())
}

/// Dumps every row with at least one set lane, sorted by bank, region
/// (main first) and row. `load(dump(x))` reproduces the lane contents of `x`.
pub fn dump(array: &CellArray) -> String {
    let cfg = *array.config();
    let mut out = String::new();
    for bank in 0..cfg.banks {
        let mut rows: Vec<RowAddress> = (0..cfg.rows_per_bank).map(|r| RowAddress::main(bank, r)).collect();
        rows.extend((0..cfg.dummy_rows).map(|r| RowAddress::dummy(bank, r)));
        for addr in rows {
            let lanes = array.read_lanes(&addr).expect("enumerated addresses are valid");
            if lanes.iter().any(|&b| b) {
                out.push_str(&format!("{}:{} {}\n", addr.bank, addr, lanes_to_binary(&lanes)));
            }
        }
    }
    out
}
