//! Word-level golden reference: plain integer arithmetic and bitwise logic
//! over packed lane words. Deliberately shares no computation with the
//! bit-level datapath it checks; only the opcode vocabulary and the lane
//! packing convention are common.

use thiserror::Error;

use crate::ypath::LogicOp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// A vector of unsigned words of a common bit width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordVector {
    pub words: Vec<u64>,
    pub width: u32,
}

impl WordVector {
    /// Panics if any word exceeds the width; out-of-range words are caller bugs.
    pub fn new(words: Vec<u64>, width: u32) -> Self {
        assert!((1..=32).contains(&width), "word width out of range");
        let mask = mask(width);
        assert!(words.iter().all(|w| *w <= mask), "word exceeds 2^width - 1");
        Self { words, width }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn mask(width: u32) -> u64 {
    (1u64 << width) - 1
}

fn check_shapes(a: &WordVector, b: &WordVector) -> Result<(), OracleError> {
    if a.len() != b.len() || a.width != b.width {
        return Err(OracleError::ShapeMismatch(format!(
            "{} x {}-bit vs {} x {}-bit",
            a.len(),
            a.width,
            b.len(),
            b.width
        )));
    }
    Ok(())
}

/// Per-word bitwise logic, masked to the width. `Not` uses only `a`; `b` must
/// still match shapes so the call is total over well-formed inputs.
pub fn ref_logic(op: LogicOp, a: &WordVector, b: &WordVector) -> Result<WordVector, OracleError> {
    check_shapes(a, b)?;
    let m = mask(a.width);
    let words = a
        .words
        .iter()
        .zip(&b.words)
        .map(|(&x, &y)| {
            (match op {
                LogicOp::And => x & y,
                LogicOp::Nand => !(x & y),
                LogicOp::Or => x | y,
                LogicOp::Nor => !(x | y),
                LogicOp::Xor => x ^ y,
                LogicOp::Xnor => !(x ^ y),
                LogicOp::Not => !x,
            }) & m
        })
        .collect();
    Ok(WordVector { words, width: a.width })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    AddSh,
    Shl,
    Mult,
}

/// Word-level arithmetic. Add and subtract reduce modulo `2^width`; shift and
/// add-and-shift reduce modulo `2^out_width`; multiply requires
/// `out_width == 2 * width` and produces the full product.
pub fn ref_arith(
    op: ArithOp,
    a: &WordVector,
    b: &WordVector,
    width: u32,
    out_width: u32,
) -> Result<WordVector, OracleError> {
    check_shapes(a, b)?;
    if a.width != width {
        return Err(OracleError::ShapeMismatch(format!("operands are {}-bit, expected {width}", a.width)));
    }
    let ok = match op {
        ArithOp::Add | ArithOp::Sub => out_width == width,
        ArithOp::Mult => out_width == 2 * width,
        ArithOp::AddSh | ArithOp::Shl => out_width >= width,
    };
    if !ok {
        return Err(OracleError::ShapeMismatch(format!("{op:?} cannot produce {out_width}-bit results from {width}-bit operands")));
    }
    let m_out = mask(out_width);
    let words = a
        .words
        .iter()
        .zip(&b.words)
        .map(|(&x, &y)| {
            (match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x.wrapping_sub(y),
                ArithOp::AddSh => (x + y) << 1,
                ArithOp::Shl => x << 1,
                ArithOp::Mult => x * y,
            }) & m_out
        })
        .collect();
    Ok(WordVector { words, width: out_width })
}

/// Second multiplication route: explicit partial-product generation and
/// summation. Used to cross-check `ref_arith(Mult, ..)` against itself.
pub fn schoolbook_mult(a: u64, b: u64, width: u32) -> u64 {
    let mut acc = 0u64;
    for bit in 0..width {
        if b >> bit & 1 == 1 {
            acc += a << bit;
        }
    }
    acc & mask(2 * width)
}

/// Packs words into a lane vector, one word per `group_width`-lane group
/// starting at the group's LSB lane; the rest of each group is zero.
pub fn pack_lanes(v: &WordVector, group_width: u32, lane_count: usize) -> Result<Vec<bool>, OracleError> {
    if group_width < v.width || lane_count != v.len() * group_width as usize {
        return Err(OracleError::ShapeMismatch(format!(
            "{} x {}-bit words do not tile {lane_count} lanes in {group_width}-lane groups",
            v.len(),
            v.width
        )));
    }
    let mut lanes = vec![false; lane_count];
    for (g, &w) in v.words.iter().enumerate() {
        for bit in 0..v.width {
            lanes[g * group_width as usize + bit as usize] = w >> bit & 1 == 1;
        }
    }
    Ok(lanes)
}

/// Reads one `width`-bit word from the bottom of each `group_width`-lane group.
pub fn unpack_lanes(lanes: &[bool], width: u32, group_width: u32) -> Result<WordVector, OracleError> {
    let gw = group_width as usize;
    if gw == 0 || width > group_width || lanes.len() % gw != 0 {
        return Err(OracleError::ShapeMismatch(format!(
            "{} lanes do not tile into {group_width}-lane groups of {width}-bit words",
            lanes.len()
        )));
    }
    let words = lanes
        .chunks(gw)
        .map(|group| (0..width as usize).map(|i| (group[i] as u64) << i).sum())
        .collect();
    Ok(WordVector { words, width })
}
