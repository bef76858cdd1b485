//! The harmonic family's limiting series.

use num::bigint::BigUint;
use num::ToPrimitive;

/// Terms computed exactly; every later term is below 1e-100, far under the
/// 1e-12 reporting threshold, so the partial sum is returned unchanged.
pub const T_EXACT_TERMS: u32 = 8;

/// Partial sums of `sum 1/(t_i - 1)` with `t_1 = 2` and
/// `t_{i+1} = t_i (t_i - 1) + 1`, the limit being about 1.69103.
///
/// The `t_i` are computed with exact integers; they grow doubly
/// exponentially, so terms beyond [`T_EXACT_TERMS`] are not evaluated (the
/// remainder after even five terms is below 1e-12).
pub fn t_infinity(terms: u32) -> f64 {
    let mut t = BigUint::from(2u32);
    let mut sum = 0.0f64;
    for _ in 0..terms.min(T_EXACT_TERMS) {
        let denom = &t - 1u32;
        sum += 1.0 / denom.to_f64().expect("t_i fits in f64 range");
        t = &t * &denom + 1u32;
    }
    sum
}
