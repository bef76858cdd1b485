//! Exact interval classification for HA, HM, and RHM item classes.
//!
//! Every interval is half-open `(lo, hi]`: an item whose size hits a boundary
//! exactly belongs to the interval whose right endpoint it hits. Membership
//! is decided by integer cross-multiplication.

use crate::seq::Size;

/// Which of the two intervals of a Harmonic Match class an item came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Small,
    Large,
}

/// A Harmonic Match class: pair `i < K` holds small interval
/// `(1/(i+2), 1/(i+1)]` and large interval `(i/(i+1), (i+1)/(i+2)]`;
/// pair `K` holds `(0, 1/(K+1)]` and `(K/(K+1), 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HmClass {
    pub index: u32,
    pub side: Side,
}

/// RHM's four groups of class-1 items, or the HM class (K = 19) outside
/// `(1/3, 2/3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhmGroup {
    /// `(1/3, 37/96]`
    A,
    /// `(37/96, 1/2]`
    B,
    /// `(1/2, 59/96]`
    C,
    /// `(59/96, 2/3]`
    D,
    Other(u32),
}

/// Harmonic class of `x`: the `i` with `x` in `(1/(i+1), 1/i]` for `i < K`,
/// else `K`.
pub fn ha_class(x: Size, d: u64, k: u32) -> u32 {
    debug_assert!(x.0 >= 1 && x.0 <= d && k >= 1);
    let q = d / x.0; // x lies in (1/(q+1), 1/q]
    q.min(u64::from(k)) as u32
}

/// Harmonic Match class and side of `x`.
pub fn hm_class(x: Size, d: u64, k: u32) -> HmClass {
    debug_assert!(x.0 >= 1 && x.0 <= d && k >= 1);
    if x.is_large(d) {
        if x.0 == d {
            return HmClass { index: k, side: Side::Large };
        }
        // x in (i/(i+1), (i+1)/(i+2)]  <=>  i = ceil((2x - d) / (d - x))
        let num = u128::from(2 * x.0 - d);
        let gap = u128::from(d - x.0);
        let i = num.div_ceil(gap).min(u128::from(k));
        HmClass { index: i as u32, side: Side::Large }
    } else {
        // x in (1/(q+1), 1/q] with q = floor(d / x) >= 2, i.e. pair q - 1.
        let q = d / x.0;
        let i = (q - 1).min(u64::from(k));
        HmClass { index: i as u32, side: Side::Small }
    }
}

/// RHM group of `x`; items outside `(1/3, 2/3]` map to their HM class with
/// K = 19.
pub fn rhm_group(x: Size, d: u64) -> RhmGroup {
    if x.gt_frac(1, 3, d) && x.le_frac(2, 3, d) {
        if x.le_frac(37, 96, d) {
            RhmGroup::A
        } else if x.le_frac(1, 2, d) {
            RhmGroup::B
        } else if x.le_frac(59, 96, d) {
            RhmGroup::C
        } else {
            RhmGroup::D
        }
    } else {
        RhmGroup::Other(hm_class(x, d, 19).index)
    }
}
