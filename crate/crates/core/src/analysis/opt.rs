//! Exact optimum by bin completion over item subsets.

use std::collections::HashMap;

use crate::seq::Sequence;

use super::AnalysisError;

/// Default cap on the exact search (kept so the worst case stays around a
/// second); overridable through [`opt_bruteforce_capped`].
pub const OPT_MAX_ITEMS: usize = 16;

/// Exact minimum number of bins for `s`.
pub fn opt_bruteforce(s: &Sequence) -> Result<u64, AnalysisError> {
    opt_bruteforce_capped(s, OPT_MAX_ITEMS)
}

/// Exact minimum number of bins, refusing sequences longer than `cap`.
///
/// Memoized search over the set of unpacked items: each level fills one bin
/// with a maximal feasible subset containing the lowest-indexed unpacked
/// item. Restricting to maximal subsets is safe: moving an item into the
/// bin of the lowest-indexed item never increases the bin count.
pub fn opt_bruteforce_capped(s: &Sequence, cap: usize) -> Result<u64, AnalysisError> {
    let n = s.len();
    if n > cap {
        return Err(AnalysisError::TooManyItems { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let sizes: Vec<u64> = s.items.clone();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo: HashMap<u32, u64> = HashMap::new();
    Ok(solve(full, &sizes, s.denom, &mut memo))
}

fn solve(mask: u32, sizes: &[u64], d: u64, memo: &mut HashMap<u32, u64>) -> u64 {
    if mask == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let first = mask.trailing_zeros() as usize;
    let rest: Vec<usize> = (first + 1..sizes.len()).filter(|&i| mask & (1 << i) != 0).collect();
    let mut best = u64::MAX;
    let mut skipped = Vec::with_capacity(rest.len());
    complete(
        0,
        1u32 << first,
        d - sizes[first],
        &rest,
        sizes,
        d,
        mask,
        &mut skipped,
        &mut best,
        memo,
    );
    memo.insert(mask, best);
    best
}

/// Enumerates maximal feasible completions of the current bin and recurses.
#[allow(clippy::too_many_arguments)]
fn complete(
    pos: usize,
    chosen: u32,
    room: u64,
    rest: &[usize],
    sizes: &[u64],
    d: u64,
    mask: u32,
    skipped: &mut Vec<usize>,
    best: &mut u64,
    memo: &mut HashMap<u32, u64>,
) {
    if pos == rest.len() {
        if skipped.iter().any(|&i| sizes[i] <= room) {
            return; // not maximal
        }
        let sub = 1 + solve(mask & !chosen, sizes, d, memo);
        if sub < *best {
            *best = sub;
        }
        return;
    }
    let i = rest[pos];
    if sizes[i] <= room {
        complete(pos + 1, chosen | (1 << i), room - sizes[i], rest, sizes, d, mask, skipped, best, memo);
    }
    skipped.push(i);
    complete(pos + 1, chosen, room, rest, sizes, d, mask, skipped, best, memo);
    skipped.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(items: &[u64]) -> Sequence {
        Sequence::new(1000, items.to_vec()).unwrap()
    }

    #[test]
    fn pigeonhole_on_three_halves() {
        assert_eq!(opt_bruteforce(&seq(&[500, 500, 500])).unwrap(), 2);
    }

    #[test]
    fn pairs_up_complements() {
        assert_eq!(opt_bruteforce(&seq(&[600, 400, 700, 300])).unwrap(), 2);
    }

    #[test]
    fn empty_sequence() {
        assert_eq!(opt_bruteforce(&seq(&[])).unwrap(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let s = seq(&[10; 17]);
        assert_eq!(
            opt_bruteforce(&s).unwrap_err(),
            AnalysisError::TooManyItems { n: 17, cap: 16 }
        );
        assert_eq!(opt_bruteforce_capped(&s, 17).unwrap(), 1);
    }

    #[test]
    fn matches_exhaustive_small_cases() {
        // Cross-check against a direct first-fit-over-permutations oracle on
        // a few fixed instances.
        let cases: &[(&[u64], u64)] = &[
            (&[501, 501, 501], 3),
            (&[500, 500, 1, 999], 2),
            (&[250, 250, 250, 250], 1),
            (&[600, 600, 400, 400], 2),
            // Total 2001 units cannot fit two bins.
            (&[334, 334, 334, 333, 333, 333], 3),
        ];
        for &(items, want) in cases {
            assert_eq!(opt_bruteforce(&seq(items)).unwrap(), want, "items {items:?}");
        }
    }
}
