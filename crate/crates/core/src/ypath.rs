//! Per-column peripheral datapath: logic decode from the sense rails, the
//! transmission-gate full adder, the segmented carry chain, and write-back
//! routing with its flip-flop state.
//!
//! Dual-row activation yields the rails `x = A AND B` and `y = NOR(A, B)`,
//! which reconstruct everything else:
//!
//! ```text
//! XNOR = x | y          XOR = !x & !y
//! sum  = cin ? (x | y) : (!x & !y)      // cin selects XNOR vs XOR
//! cout = cin ? !y : x                   // cin(A|B) + !cin(A&B)
//! ```
//!
//! Carries ripple lane-to-lane but never across a word-group boundary, which
//! is what makes the 2/4/8-bit precision reconfiguration a pure segmentation
//! choice. Shift and add-and-shift reuse the same lane-to-lane propagation
//! path, with the vacated group LSB filled with zero.

use crate::array::SenseResult;
use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicOp {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
}

impl LogicOp {
    pub const ALL: [LogicOp; 7] = [
        LogicOp::And,
        LogicOp::Nand,
        LogicOp::Or,
        LogicOp::Nor,
        LogicOp::Xor,
        LogicOp::Xnor,
        LogicOp::Not,
    ];
}

/// Decodes one logic result from the sense rails. `Not` expects rails from a
/// single-row activation (`x = A`, `y = !A`); everything else expects dual-row
/// rails.
pub fn decode_logic(op: LogicOp, x: bool, y: bool) -> bool {
    match op {
        LogicOp::And => x,
        LogicOp::Nand => !x,
        LogicOp::Nor => y,
        LogicOp::Or => !y,
        LogicOp::Xor => !x && !y,
        LogicOp::Xnor => x || y,
        LogicOp::Not => y,
    }
}

/// Full-adder cell over the dual-row rails: returns `(sum, carry_out)`.
pub fn fa_eval(x: bool, y: bool, c_in: bool) -> (bool, bool) {
    let sum = if c_in { x || y } else { !x && !y };
    let c_out = if c_in { !y } else { x };
    (sum, c_out)
}

/// Ripple-carry evaluation over dual-row rails, segmented into
/// `segment_width`-lane word groups. Within a segment the carry ripples from
/// the lowest lane upward; it never crosses into the next segment. Returns the
/// per-lane sums and the captured carry-out of each segment.
pub fn carry_chain(sense: &SenseResult, segment_width: usize, carry_in: bool) -> (Vec<bool>, Vec<bool>) {
    carry_chain_with(sense, segment_width, carry_in, fa_eval)
}

/// Same as [`carry_chain`] but with a pluggable adder cell. This is the fault
/// injection seam: equivalence suites use it to prove they would catch a
/// defective carry function.
pub fn carry_chain_with<F>(
    sense: &SenseResult,
    segment_width: usize,
    carry_in: bool,
    fa: F,
) -> (Vec<bool>, Vec<bool>)
where
    F: Fn(bool, bool, bool) -> (bool, bool),
{
    let lanes = sense.lanes();
    assert!(segment_width > 0 && lanes % segment_width == 0, "lanes must tile into segments");
    let mut sums = Vec::with_capacity(lanes);
    let mut segment_carries = Vec::with_capacity(lanes / segment_width);
    for base in (0..lanes).step_by(segment_width) {
        let mut carry = carry_in;
        for lane in base..base + segment_width {
            let (s, c) = fa(sense.x[lane], sense.y[lane], carry);
            sums.push(s);
            carry = c;
        }
        segment_carries.push(carry);
    }
    (sums, segment_carries)
}

/// Write-back source selection for one lane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaneRoute {
    /// Decoded logic output.
    LogicOut(LogicOp),
    /// Full-adder sum, unshifted.
    FASum,
    /// The sensed data propagated one lane left (vacated lane gets 0).
    ShiftPass,
    /// Full-adder sum propagated one lane left (vacated lane gets 0).
    AddShift,
}

/// Flip-flop state of the column peripherals.
///
/// `prop_ff` mirrors, per lane, the value most recently released onto the
/// write-back path; during a multiply it therefore tracks the running
/// accumulator, which is what a zero multiplier bit writes back (shifted).
/// `mult_ff` holds one shift register per word group, loaded reversed so the
/// multiplier is consumed most-significant-bit first; its length always equals
/// the operand precision. `carry_status` captures each group's carry-out and
/// is rewritten every add cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YPathState {
    pub prop_ff: Vec<bool>,
    pub mult_ff: Vec<Vec<bool>>,
    pub carry_status: Vec<bool>,
}

impl YPathState {
    pub fn new(lanes: usize) -> Self {
        Self { prop_ff: vec![false; lanes], mult_ff: Vec::new(), carry_status: Vec::new() }
    }

    /// Fresh state at the start of a macro-op.
    pub fn clear_for_op(&mut self) {
        self.prop_ff.iter_mut().for_each(|b| *b = false);
        self.mult_ff.clear();
        self.carry_status.clear();
    }

    /// Loads one multiplier word per group from sensed lane data. Group `g`'s
    /// word occupies the low `precision` lanes of its `group_width`-lane group;
    /// the register is filled MSB-first so shifting consumes `b[N-1]` down to
    /// `b[0]`.
    pub fn load_multiplier(&mut self, lanes: &[bool], precision: usize, group_width: usize) {
        assert!(group_width >= precision && lanes.len() % group_width == 0);
        self.mult_ff.clear();
        for base in (0..lanes.len()).step_by(group_width) {
            let reg: Vec<bool> = (0..precision).rev().map(|bit| lanes[base + bit]).collect();
            self.mult_ff.push(reg);
        }
    }

    pub fn multiplier_loaded(&self) -> bool {
        !self.mult_ff.is_empty()
    }

    /// Pops the next multiplier bit of one group; the register shifts and
    /// keeps its length by filling with zero.
    fn consume_mult_bit(&mut self, group: usize) -> bool {
        let reg = &mut self.mult_ff[group];
        let bit = reg.remove(0);
        reg.push(false);
        bit
    }
}

/// Selects what each lane writes back and updates the flip-flop state.
///
/// All lanes of a word group must share one route; a disagreement is a
/// [`SimError::RouteMismatch`]. When a multiplier is loaded, `FASum` and
/// `AddShift` are gated per group by the group's current multiplier bit: a 0
/// bit substitutes the propagation flip-flops (the running accumulator) for
/// the adder output, which realises "add nothing, still shift".
pub fn route_writeback(
    routes: &[LaneRoute],
    sums: &[bool],
    sense: &SenseResult,
    state: &mut YPathState,
    group_width: usize,
) -> Result<Vec<bool>, SimError> {
    let lanes = routes.len();
    assert!(group_width > 0, "group width must be nonzero");
    if lanes % group_width != 0 {
        return Err(SimError::GeometryMismatch { lanes, width: group_width });
    }
    assert_eq!(sense.lanes(), lanes, "sense width must match the routed lanes");
    assert_eq!(state.prop_ff.len(), lanes, "flip-flop bank width must match the routed lanes");
    let gated = state.multiplier_loaded();
    if gated {
        assert_eq!(state.mult_ff.len(), lanes / group_width, "one multiplier register per group");
    }

    let mut wb = vec![false; lanes];
    for (group, base) in (0..lanes).step_by(group_width).enumerate() {
        let route = routes[base];
        if routes[base..base + group_width].iter().any(|r| *r != route) {
            return Err(SimError::RouteMismatch { group });
        }
        match route {
            LaneRoute::LogicOut(op) => {
                for i in base..base + group_width {
                    wb[i] = decode_logic(op, sense.x[i], sense.y[i]);
                }
            }
            LaneRoute::FASum => {
                let take_sum = !gated || state.consume_mult_bit(group);
                for i in base..base + group_width {
                    wb[i] = if take_sum { sums[i] } else { state.prop_ff[i] };
                }
            }
            LaneRoute::ShiftPass => {
                for i in base + 1..base + group_width {
                    wb[i] = sense.x[i - 1];
                }
            }
            LaneRoute::AddShift => {
                let take_sum = !gated || state.consume_mult_bit(group);
                for i in base + 1..base + group_width {
                    wb[i] = if take_sum { sums[i - 1] } else { state.prop_ff[i - 1] };
                }
            }
        }
    }
    state.prop_ff.copy_from_slice(&wb);
    Ok(wb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{lanes_from_u64, lanes_to_u128};
    use proptest::prelude::*;

    fn rails(a: bool, b: bool) -> (bool, bool) {
        (a && b, !(a || b))
    }

    fn dual_sense(a: u64, b: u64, lanes: usize) -> SenseResult {
        let av = lanes_from_u64(a, lanes);
        let bv = lanes_from_u64(b, lanes);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..lanes {
            let (xi, yi) = rails(av[i], bv[i]);
            x.push(xi);
            y.push(yi);
        }
        SenseResult { x, y }
    }

    fn single_sense(a: u64, lanes: usize) -> SenseResult {
        let av = lanes_from_u64(a, lanes);
        SenseResult { x: av.clone(), y: av.iter().map(|&v| !v).collect() }
    }

    #[test]
    fn decode_logic_examples() {
        // A=0, B=1 gives rails (0, 0); AND decodes to 0.
        let (x, y) = rails(false, true);
        assert!(!decode_logic(LogicOp::And, x, y));
        // XOR of equal operands is 0.
        for v in [false, true] {
            let (x, y) = rails(v, v);
            assert!(!decode_logic(LogicOp::Xor, x, y));
        }
    }

    // Every logic op, every operand pair, against direct boolean evaluation.
    #[test]
    fn decode_logic_exhaustive() {
        for a in [false, true] {
            for b in [false, true] {
                let (x, y) = rails(a, b);
                assert_eq!(decode_logic(LogicOp::And, x, y), a & b);
                assert_eq!(decode_logic(LogicOp::Nand, x, y), !(a & b));
                assert_eq!(decode_logic(LogicOp::Or, x, y), a | b);
                assert_eq!(decode_logic(LogicOp::Nor, x, y), !(a | b));
                assert_eq!(decode_logic(LogicOp::Xor, x, y), a ^ b);
                assert_eq!(decode_logic(LogicOp::Xnor, x, y), !(a ^ b));
                assert_eq!(decode_logic(LogicOp::Not, a, !a), !a);
            }
        }
    }

    #[test]
    fn fa_eval_examples() {
        // 1 + 1 + 0 = 10
        let (x, y) = rails(true, true);
        assert_eq!(fa_eval(x, y, false), (false, true));
        // 1 + 0 + 1 = 10
        let (x, y) = rails(true, false);
        assert_eq!(fa_eval(x, y, true), (false, true));
    }

    // All 8 (A, B, cin) combinations against an independently computed adder.
    #[test]
    fn fa_eval_exhaustive() {
        for a in [false, true] {
            for b in [false, true] {
                for cin in [false, true] {
                    let (x, y) = rails(a, b);
                    let total = a as u8 + b as u8 + cin as u8;
                    assert_eq!(fa_eval(x, y, cin), (total & 1 == 1, total >= 2), "a={a} b={b} cin={cin}");
                }
            }
        }
    }

    #[test]
    fn carry_chain_single_segment() {
        // 1010 + 1011 = 0101 carry 1
        let sense = dual_sense(0b1010, 0b1011, 4);
        let (sums, carries) = carry_chain(&sense, 4, false);
        assert_eq!(lanes_to_u128(&sums), 0b0101);
        assert_eq!(carries, vec![true]);
    }

    #[test]
    fn carry_never_crosses_segments() {
        // two 4-bit segments: 1111|1111 + 0001|0001 -> 0000|0000, both carries set
        let sense = dual_sense(0b1111_1111, 0b0001_0001, 8);
        let (sums, carries) = carry_chain(&sense, 4, false);
        assert_eq!(lanes_to_u128(&sums), 0);
        assert_eq!(carries, vec![true, true]);
    }

    #[test]
    fn route_add_shift_in_six_lane_group() {
        // 0000 + 1010 written back shifted: 10100
        let sense = dual_sense(0b0000, 0b1010, 6);
        let (sums, _) = carry_chain(&sense, 6, false);
        let mut state = YPathState::new(6);
        let wb = route_writeback(&[LaneRoute::AddShift; 6], &sums, &sense, &mut state, 6).unwrap();
        assert_eq!(lanes_to_u128(&wb), 0b010100);
        assert_eq!(state.prop_ff, wb);
    }

    #[test]
    fn route_shift_pass() {
        let sense = single_sense(0b0001, 4);
        let mut state = YPathState::new(4);
        let wb = route_writeback(&[LaneRoute::ShiftPass; 4], &[], &sense, &mut state, 4).unwrap();
        assert_eq!(lanes_to_u128(&wb), 0b0010);
    }

    #[test]
    fn shift_twice_multiplies_by_four() {
        for val in 0..16u64 {
            let mut cur = val;
            for _ in 0..2 {
                let sense = single_sense(cur, 6);
                let mut state = YPathState::new(6);
                let wb =
                    route_writeback(&[LaneRoute::ShiftPass; 6], &[], &sense, &mut state, 6).unwrap();
                cur = lanes_to_u128(&wb) as u64;
            }
            assert_eq!(cur, (val * 4) % 64);
        }
    }

    #[test]
    fn route_mismatch_detected() {
        let sense = dual_sense(0, 0, 4);
        let mut routes = [LaneRoute::FASum; 4];
        routes[2] = LaneRoute::ShiftPass;
        let mut state = YPathState::new(4);
        let err = route_writeback(&routes, &[false; 4], &sense, &mut state, 4).unwrap_err();
        assert_eq!(err, SimError::RouteMismatch { group: 0 });
    }

    #[test]
    fn multiplier_gating_selects_ff_path() {
        const LANES: usize = 4;
        let lanes = LANES;
        let sense = dual_sense(0b0011, 0b0101, lanes);
        let (sums, _) = carry_chain(&sense, lanes, false);
        let mut state = YPathState::new(lanes);
        // group word = 0b01: first consumed bit is 0, then 1
        state.load_multiplier(&lanes_from_u64(0b01, lanes), 2, lanes);
        state.prop_ff = lanes_from_u64(0b1100, lanes);
        let wb =
            route_writeback(&[LaneRoute::AddShift; LANES], &sums, &sense, &mut state, lanes).unwrap();
        // bit 0: the flip-flop contents were shifted, not the sums
        assert_eq!(lanes_to_u128(&wb), 0b1000);
        let wb2 =
            route_writeback(&[LaneRoute::FASum; LANES], &sums, &sense, &mut state, lanes).unwrap();
        // bit 1: the adder output passes through unshifted
        assert_eq!(lanes_to_u128(&wb2), lanes_to_u128(&sums));
    }

    #[test]
    fn multiplier_register_keeps_its_length() {
        // two 8-lane product groups; each multiplier word sits in its group's low half
        let mut state = YPathState::new(16);
        state.load_multiplier(&lanes_from_u64(0b1011 << 8 | 0b0001, 16), 4, 8);
        assert_eq!(state.mult_ff.len(), 2);
        assert_eq!(state.mult_ff[0], vec![false, false, false, true]); // 0001, MSB first
        assert_eq!(state.mult_ff[1], vec![true, false, true, true]); // 1011, MSB first
        state.consume_mult_bit(1);
        assert_eq!(state.mult_ff[1].len(), 4);
        assert_eq!(state.mult_ff[1], vec![false, true, true, false]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // Random packed operands at every precision agree with per-word
        // modular addition computed directly on integers.
        #[test]
        fn segmented_add_matches_word_arithmetic(a in any::<u64>(), b in any::<u64>(), c in any::<bool>()) {
            let lanes = 32;
            for width in [2usize, 4, 8] {
                let sense = dual_sense(a, b, lanes);
                let (sums, carries) = carry_chain(&sense, width, c);
                for (g, base) in (0..lanes).step_by(width).enumerate() {
                    let mask = (1u64 << width) - 1;
                    let wa = (a >> base) & mask;
                    let wb = (b >> base) & mask;
                    let total = wa + wb + c as u64;
                    let got: u64 = (0..width).map(|i| (sums[base + i] as u64) << i).sum();
                    prop_assert_eq!(got, total & mask);
                    prop_assert_eq!(carries[g], total > mask);
                }
            }
        }

        // Perturbing the operands of one segment never changes any other
        // segment's sums or carry.
        #[test]
        fn segments_are_isolated(a in any::<u32>(), b in any::<u32>(), delta in any::<u8>(), seg in 0usize..4) {
            let lanes = 32;
            let width = 8;
            let sense = dual_sense(a as u64, b as u64, lanes);
            let (sums, carries) = carry_chain(&sense, width, false);
            let a2 = (a as u64) ^ ((delta as u64) << (seg * width));
            let sense2 = dual_sense(a2, b as u64, lanes);
            let (sums2, carries2) = carry_chain(&sense2, width, false);
            for g in 0..lanes / width {
                if g != seg {
                    prop_assert_eq!(&sums[g * width..(g + 1) * width], &sums2[g * width..(g + 1) * width]);
                    prop_assert_eq!(carries[g], carries2[g]);
                }
            }
        }

        // Add-and-shift equals ((a + b) * 2) mod 2^w on random operands.
        #[test]
        fn add_shift_matches_formula(a in 0u64..64, b in 0u64..64) {
            let w = 6;
            let sense = dual_sense(a, b, w);
            let (sums, _) = carry_chain(&sense, w, false);
            let mut state = YPathState::new(w);
            let wb = route_writeback(&[LaneRoute::AddShift; 6], &sums, &sense, &mut state, w).unwrap();
            prop_assert_eq!(lanes_to_u128(&wb) as u64, ((a + b) * 2) % (1 << w));
        }
    }
}
