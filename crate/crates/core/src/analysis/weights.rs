//! Per-item weighting functions and the exact maximum bin-weight search.
//!
//! Weights upper-bound the packer's cost per item; the maximum total weight
//! that fits in one bin then upper-bounds the competitive ratio. The search
//! over bin compositions is exact over a finite candidate set: within each
//! weight class the weight is constant, so extremal bins take items either
//! at a class's right endpoint (attained) or just above its left endpoint
//! (one grid unit `1/resolution` above), with any leftover space filled by
//! last-class mass at its fixed density 20/19.

use crate::classify::{rhm_group, RhmGroup};
use crate::seq::Size;
use crate::{rat, Rat};

use super::AnalysisError;

/// The two weightings used in the RHM analysis, keyed by the final shape of
/// the class-1 packing (no c-bin vs. no a1-bin).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightCase {
    Case1,
    Case2,
}

/// Exact weight of one item.
///
/// Both cases: small items of class k (2..=18) weigh `1/(k+1)`; a small item
/// x of class 19 weighs `20x/19`; d items and anything larger than 2/3 weigh
/// 1. Class-1 groups differ: Case 1 gives a, b weight 4/7 and c weight 0;
/// Case 2 gives a, b, c weights 3/7, 1/2, 1.
pub fn weight(case: WeightCase, x: Size, d: u64) -> Rat {
    match rhm_group(x, d) {
        RhmGroup::A => match case {
            WeightCase::Case1 => rat(4, 7),
            WeightCase::Case2 => rat(3, 7),
        },
        RhmGroup::B => match case {
            WeightCase::Case1 => rat(4, 7),
            WeightCase::Case2 => rat(1, 2),
        },
        RhmGroup::C => match case {
            WeightCase::Case1 => rat(0, 1),
            WeightCase::Case2 => rat(1, 1),
        },
        RhmGroup::D => rat(1, 1),
        RhmGroup::Other(_) if x.gt_frac(2, 3, d) => rat(1, 1),
        RhmGroup::Other(k) if k <= 18 => rat(1, i128::from(k) + 1),
        RhmGroup::Other(_) => rat(20 * i128::from(x.0), 19 * i128::from(d)),
    }
}

/// Density of the residual fill: class-19 small items weigh 20x/19, so any
/// leftover space converts to weight at exactly 20/19 per unit.
fn fluid_density() -> Rat {
    rat(20, 19)
}

/// One item of the extremal bin reported by [`max_bin_weight`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessItem {
    pub label: String,
    /// Size used by the search (a realizable item size).
    pub size: Rat,
    /// The interval endpoint this size approaches as the resolution grows.
    pub limit_size: Rat,
    pub weight: Rat,
}

/// A feasible bin composition achieving the reported maximum weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightWitness {
    pub items: Vec<WitnessItem>,
    /// Leftover space filled with class-19 items at density 20/19.
    pub residual: Rat,
    pub total_size: Rat,
    pub total_weight: Rat,
}

impl WeightWitness {
    /// Total weight of the same composition with every item at its interval
    /// endpoint and the residual refilled; the supremum this witness
    /// approaches.
    pub fn limit_weight(&self) -> Rat {
        let size: Rat = self.items.iter().map(|i| i.limit_size).sum();
        let weight: Rat = self.items.iter().map(|i| i.weight).sum();
        weight + (rat(1, 1) - size) * fluid_density()
    }
}

struct Atom {
    label: String,
    lo: Rat,
    hi: Rat,
    weight: Rat,
}

fn atoms(case: WeightCase) -> Vec<Atom> {
    let (wa, wb, wc) = match case {
        WeightCase::Case1 => (rat(4, 7), rat(4, 7), rat(0, 1)),
        WeightCase::Case2 => (rat(3, 7), rat(1, 2), rat(1, 1)),
    };
    let mut out = vec![
        Atom { label: "a".into(), lo: rat(1, 3), hi: rat(37, 96), weight: wa },
        Atom { label: "b".into(), lo: rat(37, 96), hi: rat(1, 2), weight: wb },
        Atom { label: "c".into(), lo: rat(1, 2), hi: rat(59, 96), weight: wc },
        Atom { label: "d".into(), lo: rat(59, 96), hi: rat(2, 3), weight: rat(1, 1) },
        Atom { label: "large".into(), lo: rat(2, 3), hi: rat(1, 1), weight: rat(1, 1) },
    ];
    for k in 2i128..=18 {
        out.push(Atom {
            label: format!("class-{k} small"),
            lo: rat(1, k + 2),
            hi: rat(1, k + 1),
            weight: rat(1, k + 1),
        });
    }
    out
}

#[derive(Clone)]
struct Cand {
    atom: usize,
    size: Rat,
    limit_size: Rat,
    weight: Rat,
    density: Rat,
}

/// Branch-and-bound over multisets of candidate items, residual filled at
/// `fluid` per unit of leftover space. Returns the best value, the chosen
/// candidate indices, and the leftover.
fn search(cands: &[Cand], fluid: Rat) -> (Rat, Vec<usize>, Rat) {
    // Suffix bound: best density still reachable from position i onward.
    let mut suffix = vec![fluid; cands.len() + 1];
    for i in (0..cands.len()).rev() {
        suffix[i] = suffix[i + 1].max(cands[i].density);
    }
    let mut best = (rat(0, 1), Vec::new(), rat(1, 1));
    let mut stack = Vec::new();
    fn dfs(
        pos: usize,
        rem: Rat,
        w: Rat,
        cands: &[Cand],
        suffix: &[Rat],
        fluid: Rat,
        stack: &mut Vec<usize>,
        best: &mut (Rat, Vec<usize>, Rat),
    ) {
        let filled = w + rem * fluid;
        if filled > best.0 {
            *best = (filled, stack.clone(), rem);
        }
        if pos == cands.len() || w + rem * suffix[pos] <= best.0 {
            return;
        }
        for j in pos..cands.len() {
            if cands[j].size <= rem {
                stack.push(j);
                dfs(j, rem - cands[j].size, w + cands[j].weight, cands, suffix, fluid, stack, best);
                stack.pop();
            }
        }
    }
    dfs(0, rat(1, 1), rat(0, 1), cands, &suffix, fluid, &mut stack, &mut best);
    best
}

/// Maximum total weight of any set of items that fits in one bin, with a
/// witness composition. The search is exact on its candidate grid; the true
/// supremum exceeds the returned value by at most
/// `(max density) * (items per bin) / resolution`, and the witness's
/// [`WeightWitness::limit_weight`] evaluates the supremum of its own
/// composition exactly.
pub fn max_bin_weight(
    case: WeightCase,
    resolution: u64,
) -> Result<(Rat, WeightWitness), AnalysisError> {
    // The narrowest class, (1/20, 1/19], has width 1/380; a coarser grid
    // cannot place a size strictly inside every class.
    if resolution < 381 {
        return Err(AnalysisError::ResolutionTooCoarse { resolution });
    }
    let eps = rat(1, i128::from(resolution));
    let atom_list = atoms(case);
    let mut cands = Vec::new();
    for (i, atom) in atom_list.iter().enumerate() {
        if atom.weight == rat(0, 1) {
            continue; // never helps: dropping it frees space for the fluid
        }
        let min_size = atom.lo + eps;
        debug_assert!(min_size <= atom.hi);
        for (size, limit) in [(min_size, atom.lo), (atom.hi, atom.hi)] {
            cands.push(Cand {
                atom: i,
                size,
                limit_size: limit,
                weight: atom.weight,
                density: atom.weight / size,
            });
        }
    }
    cands.sort_by(|p, q| q.density.cmp(&p.density).then(p.size.cmp(&q.size)));
    let (value, picks, residual) = search(&cands, fluid_density());
    let items: Vec<WitnessItem> = picks
        .iter()
        .map(|&j| {
            let cand = &cands[j];
            WitnessItem {
                label: atom_list[cand.atom].label.clone(),
                size: cand.size,
                limit_size: cand.limit_size,
                weight: cand.weight,
            }
        })
        .collect();
    let total_size: Rat = items.iter().map(|i| i.size).sum::<Rat>() + residual;
    let total_weight: Rat = items.iter().map(|i| i.weight).sum::<Rat>() + residual * fluid_density();
    debug_assert_eq!(total_weight, value);
    Ok((value, WeightWitness { items, residual, total_size, total_weight }))
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn weight_examples() {
        // A c item under Case 2.
        assert_eq!(weight(WeightCase::Case2, Size(550), 1000), rat(1, 1));
        // A class-2 small item.
        assert_eq!(weight(WeightCase::Case1, Size(300), 1000), rat(1, 3));
        // A class-19 small item of size exactly 1/20: (20/19)(1/20) = 1/19.
        assert_eq!(weight(WeightCase::Case2, Size(50), 1000), rat(1, 19));
        // Group weights that differ between the cases.
        assert_eq!(weight(WeightCase::Case1, Size(360), 1000), rat(4, 7));
        assert_eq!(weight(WeightCase::Case2, Size(360), 1000), rat(3, 7));
        assert_eq!(weight(WeightCase::Case1, Size(400), 1000), rat(4, 7));
        assert_eq!(weight(WeightCase::Case2, Size(400), 1000), rat(1, 2));
        assert_eq!(weight(WeightCase::Case1, Size(550), 1000), rat(0, 1));
        assert_eq!(weight(WeightCase::Case2, Size(620), 1000), rat(1, 1));
        assert_eq!(weight(WeightCase::Case1, Size(700), 1000), rat(1, 1));
    }

    #[test]
    fn zero_weighting_searches_to_zero() {
        let (value, picks, residual) = search(&[], rat(0, 1));
        assert_eq!(value, rat(0, 1));
        assert!(picks.is_empty());
        assert_eq!(residual, rat(1, 1));
    }

    #[test]
    fn case2_maximum_is_the_paper_bin() {
        let (value, witness) = max_bin_weight(WeightCase::Case2, 192_000).unwrap();
        let bound = rat(373, 228);
        assert!(value <= bound);
        assert!(value > bound - rat(1, 1000));
        assert_eq!(witness.limit_weight(), bound);
        // c + class-2 + class-3 just above their left endpoints, residual
        // 1/20 of class-19 mass.
        let labels: Vec<&str> = witness.items.iter().map(|i| i.label.as_str()).collect();
        assert_eq!(labels, ["c", "class-2 small", "class-3 small"]);
        assert!(witness.total_size <= rat(1, 1));
    }

    #[test]
    fn case1_maximum_stays_below_paper_bound() {
        let (value, witness) = max_bin_weight(WeightCase::Case1, 192_000).unwrap();
        assert!(value <= rat(163, 100));
        // The extremal Case-1 bin: d + a + residual, approaching
        // 1 + 4/7 + (5/96)(20/19) = 5191/3192.
        assert_eq!(witness.limit_weight(), rat(5191, 3192));
        assert!(witness.total_size <= rat(1, 1));
    }

    #[test]
    fn coarse_resolution_is_rejected() {
        assert_eq!(
            max_bin_weight(WeightCase::Case2, 380).unwrap_err(),
            AnalysisError::ResolutionTooCoarse { resolution: 380 }
        );
    }
}
