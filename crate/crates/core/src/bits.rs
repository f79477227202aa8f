//! Lane-vector helpers. Lane 0 is always the least-significant (rightmost) bit
//! of any textual or numeric representation.

/// Converts the low `len` bits of `value` into a lane vector.
pub fn lanes_from_u64(value: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| i < 64 && (value >> i) & 1 == 1).collect()
}

/// Interprets a lane vector as an unsigned integer (lane 0 = bit 0).
/// Lanes beyond bit 127 must be zero.
pub fn lanes_to_u128(lanes: &[bool]) -> u128 {
    let mut v = 0u128;
    for (i, &b) in lanes.iter().enumerate() {
        if b {
            assert!(i < 128, "lane vector too wide for a u128");
            v |= 1 << i;
        }
    }
    v
}

/// Hex rendering with a `0x` prefix; one digit per started nibble.
pub fn lanes_to_hex(lanes: &[bool]) -> String {
    let nibbles = lanes.len().div_ceil(4).max(1);
    let mut s = String::with_capacity(2 + nibbles);
    s.push_str("0x");
    for n in (0..nibbles).rev() {
        let mut d = 0u8;
        for k in 0..4 {
            let lane = n * 4 + k;
            if lane < lanes.len() && lanes[lane] {
                d |= 1 << k;
            }
        }
        s.push(char::from_digit(d as u32, 16).unwrap());
    }
    s
}

/// Binary rendering with a `0b` prefix, padded to the full lane count.
pub fn lanes_to_binary(lanes: &[bool]) -> String {
    let mut s = String::with_capacity(2 + lanes.len());
    s.push_str("0b");
    for &b in lanes.iter().rev() {
        s.push(if b { '1' } else { '0' });
    }
    s
}

/// Parses a `0x…` hex, `0b…` binary, or bare value into `len` lanes.
/// Bare tokens consisting only of `0`/`1` are read as binary, anything else as hex.
pub fn parse_lane_value(token: &str, len: usize) -> Result<Vec<bool>, String> {
    let (digits, radix) = if let Some(rest) = token.strip_prefix("0x").or_else(|| token.strip_prefix("0X")) {
        (rest, 16)
    } else if let Some(rest) = token.strip_prefix("0b").or_else(|| token.strip_prefix("0B")) {
        (rest, 2)
    } else if token.bytes().all(|b| b == b'0' || b == b'1') && !token.is_empty() {
        (token, 2)
    } else {
        (token, 16)
    };
    if digits.is_empty() {
        return Err(format!("empty value `{token}`"));
    }
    let bits_per_digit = if radix == 16 { 4 } else { 1 };
    let mut lanes = vec![false; len];
    for (pos, ch) in digits.chars().rev().enumerate() {
        let d = ch
            .to_digit(radix)
            .ok_or_else(|| format!("bad digit `{ch}` in value `{token}`"))?;
        for k in 0..bits_per_digit {
            if d >> k & 1 == 1 {
                let lane = pos * bits_per_digit + k;
                if lane >= len {
                    return Err(format!("value `{token}` does not fit in {len} lanes"));
                }
                lanes[lane] = true;
            }
        }
    }
    Ok(lanes)
}
