//! Exact evaluation of the middle-third Cantor function.
//!
//! A finite double is a dyadic rational `m / 2^k`, so its ternary digits can
//! be produced exactly with integer arithmetic. Digits before the first `1`
//! map to binary digits `d / 2`; a `1` terminates the expansion with a final
//! binary `1`.

use num_bigint::BigUint;

/// Ternary digits examined after the first non-zero digit.
pub const SIGNIFICANT_DIGITS: u32 = 64;

/// `2^-e` for `0 <= e <= 1022`.
fn exp2_neg(e: u32) -> f64 {
    debug_assert!(e <= 1022);
    f64::from_bits(((1023 - e) as u64) << 52)
}

struct Expansion {
    /// Output binary digits after the leading zeros.
    bits: u128,
    significant: u32,
    leading_zeros: u32,
}

impl Expansion {
    fn value(&self) -> f64 {
        // bits < 2^64: one rounding here, then exact power-of-two scaling.
        (self.bits as f64) * exp2_neg(self.leading_zeros + self.significant)
    }
}

/// Shared digit loop; `next_digit` multiplies the remainder by three and
/// returns the integer part.
fn expand(mut next_digit: impl FnMut() -> u8) -> Expansion {
    let mut out = Expansion {
        bits: 0,
        significant: 0,
        leading_zeros: 0,
    };
    loop {
        let d = next_digit();
        if out.significant == 0 && d == 0 {
            out.leading_zeros += 1;
            continue;
        }
        out.significant += 1;
        out.bits = (out.bits << 1) | u128::from(d != 0);
        if d == 1 || out.significant == SIGNIFICANT_DIGITS {
            return out;
        }
    }
}

/// The Cantor function on `[0, 1]`, clamped outside.
pub fn cantor_function(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let raw = x.to_bits();
    let biased = ((raw >> 52) & 0x7ff) as u32;
    let fraction = raw & ((1u64 << 52) - 1);
    let (mantissa, k) = if biased == 0 {
        (fraction, 1074)
    } else {
        (fraction | (1u64 << 52), 1075 - biased)
    };
    let shift = mantissa.trailing_zeros().min(k);
    let mantissa = mantissa >> shift;
    let k = k - shift;

    let expansion = if k <= 124 {
        let mask = (1u128 << k) - 1;
        let mut rem = u128::from(mantissa);
        expand(|| {
            rem *= 3;
            let d = (rem >> k) as u8;
            rem &= mask;
            d
        })
    } else {
        let modulus = BigUint::from(1u8) << k;
        let mut rem = BigUint::from(mantissa);
        expand(|| {
            rem *= 3u8;
            let d = &rem >> k;
            rem %= &modulus;
            d.to_u32_digits().first().copied().unwrap_or(0) as u8
        })
    };
    expansion.value()
}
