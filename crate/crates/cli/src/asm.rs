//! Assembler and disassembler for the textual micro-op program format.
//!
//! One item per line; `#` starts a comment. Grammar:
//!
//! ```text
//! PREC <2|4|8>                     # required before the first statement
//! VDD <volts>                      # optional, informational
//! SEP <on|off>                     # bit-line separator policy, default on
//! <OP> <bank> <src>[,<src>] -> <dest>
//! WRITE <bank> <dest> <value>
//! ```
//!
//! Addresses are `m:<row>` (main array) or `d:<row>` (dummy array); the bank
//! is given positionally. Values are `0x…` hex or `0b…`/bare binary with lane
//! 0 rightmost.

use thiserror::Error;

use imcsim::bits::{lanes_to_binary, parse_lane_value};
use imcsim::config::MacroConfig;
use imcsim::image::parse_region;
use imcsim::sequencer::{MicroOp, Opcode, Program, Step};
use imcsim::{Region, RowAddress};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsmError {
    #[error("line {line}, col {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    ConfigConflict { line: usize, msg: String },
}

struct Token<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { col: s + 1, text: &line[s..i] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { col: s + 1, text: &line[s..] });
    }
    tokens
}

/// Parses program text into a resolved [`Program`], range-checked against the
/// geometry so accepted programs cannot hit address errors at run time.
pub fn assemble(text: &str, cfg: &MacroConfig) -> Result<Program, AsmError> {
    let mut precision: Option<usize> = None;
    let mut vdd: Option<f64> = None;
    let mut separator = true;
    let mut steps: Vec<Step> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let parse_err = |col: usize, msg: String| AsmError::Parse { line: line_no, col, msg };
        let head = &tokens[0];
        let keyword = head.text.to_ascii_uppercase();

        match keyword.as_str() {
            "PREC" => {
                if !steps.is_empty() {
                    return Err(AsmError::ConfigConflict {
                        line: line_no,
                        msg: "PREC must appear before the first statement".into(),
                    });
                }
                if precision.is_some() {
                    return Err(AsmError::ConfigConflict { line: line_no, msg: "duplicate PREC directive".into() });
                }
                let tok = tokens.get(1).ok_or_else(|| parse_err(head.col, "PREC needs a value".into()))?;
                let p: usize = tok
                    .text
                    .parse()
                    .map_err(|_| parse_err(tok.col, format!("bad precision `{}`", tok.text)))?;
                if ![2, 4, 8].contains(&p) {
                    return Err(parse_err(tok.col, format!("precision must be 2, 4 or 8, got {p}")));
                }
                if cfg.lanes() % p != 0 {
                    return Err(AsmError::ConfigConflict {
                        line: line_no,
                        msg: format!("{} lanes cannot hold {p}-bit words", cfg.lanes()),
                    });
                }
                precision = Some(p);
            }
            "VDD" => {
                if vdd.is_some() {
                    return Err(AsmError::ConfigConflict { line: line_no, msg: "duplicate VDD directive".into() });
                }
                let tok = tokens.get(1).ok_or_else(|| parse_err(head.col, "VDD needs a value".into()))?;
                vdd = Some(
                    tok.text
                        .parse()
                        .map_err(|_| parse_err(tok.col, format!("bad voltage `{}`", tok.text)))?,
                );
            }
            "SEP" => {
                let tok = tokens.get(1).ok_or_else(|| parse_err(head.col, "SEP needs on or off".into()))?;
                separator = match tok.text.to_ascii_lowercase().as_str() {
                    "on" => true,
                    "off" => false,
                    other => return Err(parse_err(tok.col, format!("SEP takes on or off, got `{other}`"))),
                };
            }
            _ => {
                let opcode = Opcode::from_mnemonic(head.text)
                    .ok_or_else(|| parse_err(head.col, format!("unknown mnemonic `{}`", head.text)))?;
                let prec = precision.ok_or_else(|| {
                    parse_err(head.col, "missing PREC directive before the first statement".into())
                })?;
                let step = parse_statement(opcode, &tokens, cfg, prec, separator, line_no)?;
                steps.push(step);
            }
        }
    }
    Ok(Program { steps, vdd })
}

fn parse_statement(
    opcode: Opcode,
    tokens: &[Token<'_>],
    cfg: &MacroConfig,
    precision: usize,
    separator: bool,
    line: usize,
) -> Result<Step, AsmError> {
    let parse_err = |col: usize, msg: String| AsmError::Parse { line, col, msg };
    let bank_tok = tokens
        .get(1)
        .ok_or_else(|| parse_err(tokens[0].col, format!("{opcode} needs a bank")))?;
    let bank: usize = bank_tok
        .text
        .parse()
        .map_err(|_| parse_err(bank_tok.col, format!("bad bank `{}`", bank_tok.text)))?;
    if bank >= cfg.banks {
        return Err(parse_err(bank_tok.col, format!("bank {bank} outside the {}-bank macro", cfg.banks)));
    }

    if opcode == Opcode::Write {
        let dest_tok = tokens
            .get(2)
            .ok_or_else(|| parse_err(bank_tok.col, "WRITE needs a destination".into()))?;
        let dest = parse_addr(dest_tok, bank, cfg, line)?;
        let value_tok = tokens
            .get(3)
            .ok_or_else(|| parse_err(dest_tok.col, "WRITE needs a value".into()))?;
        if tokens.len() > 4 {
            return Err(parse_err(tokens[4].col, "trailing tokens after WRITE value".into()));
        }
        let lanes = parse_lane_value(value_tok.text, cfg.lanes())
            .map_err(|m| parse_err(value_tok.col, m))?;
        let op = MicroOp::write(bank, dest, precision).with_separator(separator);
        return Ok(Step::write(op, lanes));
    }

    // sources up to the arrow, then the destination
    let arrow = tokens
        .iter()
        .position(|t| t.text == "->")
        .ok_or_else(|| parse_err(tokens[0].col, format!("{opcode} needs `-> <dest>`")))?;
    let mut srcs = Vec::new();
    for tok in &tokens[2..arrow] {
        for (offset, piece) in split_list(tok.text) {
            srcs.push(parse_addr(&Token { col: tok.col + offset, text: piece }, bank, cfg, line)?);
        }
    }
    if srcs.len() != opcode.src_count() {
        return Err(parse_err(
            tokens[0].col,
            format!("{opcode} takes {} source row(s), got {}", opcode.src_count(), srcs.len()),
        ));
    }
    let dest_tok = tokens
        .get(arrow + 1)
        .ok_or_else(|| parse_err(tokens[arrow].col, "missing destination after `->`".into()))?;
    if tokens.len() > arrow + 2 {
        return Err(parse_err(tokens[arrow + 2].col, "trailing tokens after destination".into()));
    }
    let dest = parse_addr(dest_tok, bank, cfg, line)?;
    let op = MicroOp::new(opcode, bank, srcs, dest, precision).with_separator(separator);
    op.validate(cfg)
        .map_err(|e| parse_err(tokens[0].col, e.to_string()))?;
    Ok(Step::op(op))
}

fn split_list(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == ',' {
            if i > start {
                out.push((start, &text[start..i]));
            }
            start = i + 1;
        }
    }
    if start < text.len() {
        out.push((start, &text[start..]));
    }
    out
}

fn parse_addr(tok: &Token<'_>, bank: usize, cfg: &MacroConfig, line: usize) -> Result<RowAddress, AsmError> {
    let parse_err = |msg: String| AsmError::Parse { line, col: tok.col, msg };
    let (region_s, row_s) = tok
        .text
        .split_once(':')
        .ok_or_else(|| parse_err(format!("bad address `{}`, expected m:<row> or d:<row>", tok.text)))?;
    let region =
        parse_region(region_s).ok_or_else(|| parse_err(format!("bad region `{region_s}` (m or d)")))?;
    let row: usize =
        row_s.parse().map_err(|_| parse_err(format!("bad row `{row_s}`")))?;
    let limit = match region {
        Region::Main => cfg.rows_per_bank,
        Region::Dummy => cfg.dummy_rows,
    };
    if row >= limit {
        return Err(parse_err(format!("row {row} outside the {limit}-row {region} region", region = match region {
            Region::Main => "main",
            Region::Dummy => "dummy",
        })));
    }
    Ok(RowAddress { bank, region, row })
}

/// Canonical text for a program. `assemble(disassemble(p))` reproduces `p`
/// for any program the assembler can produce (uniform precision, no carry-in).
pub fn disassemble(program: &Program) -> String {
    let mut out = String::new();
    if let Some(step) = program.steps.first() {
        out.push_str(&format!("PREC {}\n", step.op.precision));
    }
    if let Some(vdd) = program.vdd {
        out.push_str(&format!("VDD {vdd}\n"));
    }
    let mut separator = true;
    for step in &program.steps {
        if step.op.separator != separator {
            separator = step.op.separator;
            out.push_str(if separator { "SEP on\n" } else { "SEP off\n" });
        }
        let op = &step.op;
        match op.opcode {
            Opcode::Write => {
                let imm = step.imm.as_deref().unwrap_or(&[]);
                out.push_str(&format!("WRITE {} {} {}\n", op.bank, op.dest, lanes_to_binary(imm)));
            }
            _ => {
                let srcs: Vec<String> = op.srcs.iter().map(|s| s.to_string()).collect();
                out.push_str(&format!("{} {} {} -> {}\n", op.opcode, op.bank, srcs.join(","), op.dest));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_op_program() {
        let cfg = MacroConfig::default();
        let p = assemble("PREC 4\nADD 0 m:3,m:4 -> d:0\n", &cfg).unwrap();
        assert_eq!(p.steps.len(), 1);
        let op = &p.steps[0].op;
        assert_eq!(op.opcode, Opcode::Add);
        assert_eq!(op.srcs, vec![RowAddress::main(0, 3), RowAddress::main(0, 4)]);
        assert_eq!(op.dest, RowAddress::dummy(0, 0));
        assert_eq!(op.precision, 4);
        assert!(op.separator);
    }

    #[test]
    fn unknown_mnemonic_reports_position() {
        let cfg = MacroConfig::default();
        let err = assemble("PREC 4\nMUL 0 m:0,m:1 -> m:2\n", &cfg).unwrap_err();
        assert_eq!(err, AsmError::Parse { line: 2, col: 1, msg: "unknown mnemonic `MUL`".into() });
    }

    #[test]
    fn missing_prec_is_rejected() {
        let cfg = MacroConfig::default();
        let err = assemble("ADD 0 m:0,m:1 -> m:2\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::Parse { line: 1, .. }));
        let err = assemble("ADD 0 m:0,m:1 -> m:2\nPREC 4\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::Parse { line: 1, .. }));
    }

    #[test]
    fn prec_after_statement_conflicts() {
        let cfg = MacroConfig::default();
        let err = assemble("PREC 4\nNOT 0 m:0 -> m:1\nPREC 8\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::ConfigConflict { line: 3, .. }));
        let err = assemble("PREC 4\nPREC 8\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::ConfigConflict { line: 2, .. }));
    }

    #[test]
    fn addresses_are_range_checked() {
        let cfg = MacroConfig::default();
        let err = assemble("PREC 4\nADD 0 m:0,m:200 -> m:2\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::Parse { line: 2, .. }));
        let err = assemble("PREC 4\nADD 9 m:0,m:1 -> m:2\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::Parse { line: 2, .. }));
        let err = assemble("PREC 4\nNOT 0 m:0 -> d:7\n", &cfg).unwrap_err();
        assert!(matches!(err, AsmError::Parse { line: 2, .. }));
    }

    #[test]
    fn write_and_sep_directives() {
        let cfg = MacroConfig::default();
        let text = "PREC 2\nSEP off\nWRITE 1 m:5 0x1f\nSUB 1 m:5,m:6 -> m:7\nSEP on\nSUB 1 m:5,m:6 -> m:8\n";
        let p = assemble(text, &cfg).unwrap();
        assert_eq!(p.steps.len(), 3);
        assert!(!p.steps[0].op.separator);
        assert!(!p.steps[1].op.separator);
        assert!(p.steps[2].op.separator);
        assert_eq!(p.steps[0].imm.as_ref().unwrap().len(), cfg.lanes());
    }

    #[test]
    fn arity_mismatch_rejected() {
        let cfg = MacroConfig::default();
        assert!(assemble("PREC 4\nADD 0 m:0 -> m:2\n", &cfg).is_err());
        assert!(assemble("PREC 4\nNOT 0 m:0,m:1 -> m:2\n", &cfg).is_err());
    }

    #[test]
    fn spaced_source_lists_parse() {
        let cfg = MacroConfig::default();
        let a = assemble("PREC 4\nXOR 2 m:1, m:2 -> m:3\n", &cfg).unwrap();
        let b = assemble("PREC 4\nXOR 2 m:1,m:2 -> m:3\n", &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disassemble_round_trip() {
        let cfg = MacroConfig::default();
        let text = "PREC 8\nVDD 0.7\nWRITE 0 m:1 0b1011\nSEP off\nMULT 0 m:1,m:2 -> m:3\nSEP on\nADD 0 m:1,m:2 -> d:1\n";
        let p = assemble(text, &cfg).unwrap();
        let round = assemble(&disassemble(&p), &cfg).unwrap();
        assert_eq!(p, round);
    }
}
