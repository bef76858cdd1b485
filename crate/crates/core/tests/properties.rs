//! Property tests for the library invariants: classification partitions,
//! packer contracts, the provable inequalities at small scale, RRM state
//! accounting, weighting bounds, and generator behavior.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use binpack::algorithms::{MbfPacker, RrmPacker};
use binpack::analysis::{max_bin_weight, opt_bruteforce, weight, WeightCase};
use binpack::generators::{
    builtin_set_instances, bps_table, generate, lookup_instance, DistKind, DistributionSpec, Seed,
};
use binpack::{
    ha_class, hm_class, lower_bound, make_packer, rat, rhm_group, run, waste, AlgorithmId,
    Packer, Rat, RhmGroup, Sequence, Side, Size,
};

const D20: u64 = 1 << 20;

fn uniform_seq(rng: &mut ChaCha8Rng, n: usize, d: u64) -> Sequence {
    Sequence::new(d, (0..n).map(|_| rng.random_range(1..=d)).collect()).unwrap()
}

/// Uniform over the two intervals of HM class `i` (equal lengths, so a fair
/// coin picks the side).
fn class_seq(rng: &mut ChaCha8Rng, n: usize, d: u64, k: u32, class: u32) -> Sequence {
    let bounds = |p: u64, q: u64| (u128::from(p) * u128::from(d) / u128::from(q)) as u64;
    let (small_lo, small_hi, large_lo, large_hi) = if class < k {
        let i = u64::from(class);
        (bounds(1, i + 2), bounds(1, i + 1), bounds(i, i + 1), bounds(i + 1, i + 2))
    } else {
        let kk = u64::from(k);
        (0, bounds(1, kk + 1), bounds(kk, kk + 1), d)
    };
    let items = (0..n)
        .map(|_| {
            if rng.random::<bool>() {
                rng.random_range(small_lo + 1..=small_hi)
            } else {
                rng.random_range(large_lo + 1..=large_hi)
            }
        })
        .collect();
    Sequence::new(d, items).unwrap()
}

fn class1_seq(rng: &mut ChaCha8Rng, n: usize, d: u64) -> Sequence {
    class_seq(rng, n, d, 19, 1)
}

fn cost_of(id: &str, s: &Sequence) -> u64 {
    let id: AlgorithmId = id.parse().unwrap();
    let mut p = make_packer(&id, s.denom).unwrap();
    run(&mut *p, s).unwrap().cost()
}

proptest! {
    /// Every size falls in exactly one HA class and one HM class, membership
    /// checked by cross-multiplication against the interval bounds.
    #[test]
    fn classification_partitions(num in 1u64..=D20, k in 1u32..=25) {
        let x = Size(num);
        let ha = ha_class(x, D20, k);
        prop_assert!(ha >= 1 && ha <= k);
        if ha < k {
            prop_assert!(x.gt_frac(1, u64::from(ha) + 1, D20) && x.le_frac(1, u64::from(ha), D20));
        } else {
            prop_assert!(x.gt_frac(1, u64::from(k) + 1, D20) || k == ha);
        }

        let hm = hm_class(x, D20, k);
        prop_assert!(hm.index >= 1 && hm.index <= k);
        prop_assert_eq!(hm.side == Side::Large, x.is_large(D20));
        let i = u64::from(hm.index);
        match hm.side {
            Side::Small if hm.index < k => {
                prop_assert!(x.gt_frac(1, i + 2, D20) && x.le_frac(1, i + 1, D20));
            }
            Side::Small => prop_assert!(x.le_frac(1, i + 1, D20)),
            Side::Large if hm.index < k => {
                prop_assert!(x.gt_frac(i, i + 1, D20) && x.le_frac(i + 1, i + 2, D20));
            }
            Side::Large => prop_assert!(x.gt_frac(i, i + 1, D20)),
        }
    }

    /// The RHM groups tile (1/3, 2/3] and defer to HM classes elsewhere.
    #[test]
    fn rhm_groups_partition(num in 1u64..=D20) {
        let x = Size(num);
        let in_range = x.gt_frac(1, 3, D20) && x.le_frac(2, 3, D20);
        match rhm_group(x, D20) {
            RhmGroup::A => prop_assert!(in_range && x.le_frac(37, 96, D20)),
            RhmGroup::B => prop_assert!(x.gt_frac(37, 96, D20) && x.le_frac(1, 2, D20)),
            RhmGroup::C => prop_assert!(x.is_large(D20) && x.le_frac(59, 96, D20)),
            RhmGroup::D => prop_assert!(x.gt_frac(59, 96, D20) && in_range),
            RhmGroup::Other(k) => {
                prop_assert!(!in_range);
                prop_assert_eq!(k, hm_class(x, D20, 19).index);
                prop_assert!(k >= 2);
            }
        }
    }

    /// An a item and a c item always share a bin: max a + max c = 1.
    #[test]
    fn a_plus_c_always_fits(a_off in 0u64..=((37 * D20 / 96) - (D20 / 3 + 1)),
                            c_off in 0u64..=((59 * D20 / 96) - (D20 / 2 + 1))) {
        let a = D20 / 3 + 1 + a_off;
        let c = D20 / 2 + 1 + c_off;
        prop_assert_eq!(rhm_group(Size(a), D20), RhmGroup::A);
        prop_assert_eq!(rhm_group(Size(c), D20), RhmGroup::C);
        prop_assert!(a + c <= D20);
    }
}

#[test]
fn packers_respect_cost_and_waste_contracts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let general = ["nf", "ff", "bf", "mbf", "om:20", "ha:20", "hm:20", "hmm:20", "rhm", "ss"];
    for trial in 0..25 {
        let s = uniform_seq(&mut rng, 60, 1000);
        for id in general {
            let algo: AlgorithmId = id.parse().unwrap();
            let mut p = make_packer(&algo, s.denom).unwrap();
            let packing = run(&mut *p, &s).unwrap();
            assert!(packing.cost() >= lower_bound(&s), "{id} beat the lower bound");
            let w = waste(&packing, &s).unwrap();
            assert!(w >= rat(0, 1), "{id} negative waste");
            // Determinism, bin by bin.
            let mut q = make_packer(&algo, s.denom).unwrap();
            assert_eq!(run(&mut *q, &s).unwrap(), packing, "{id} not deterministic");
        }
        // Domain-restricted packers on in-domain sequences.
        let class = trial % 19 + 1;
        let s = class_seq(&mut rng, 60, D20, 19, class);
        for id in [format!("rom:{class}"), "rrm".to_string()] {
            if id == "rrm" && class != 1 {
                continue;
            }
            let algo: AlgorithmId = id.parse().unwrap();
            let mut p = make_packer(&algo, s.denom).unwrap();
            let packing = run(&mut *p, &s).unwrap();
            assert!(packing.cost() >= lower_bound(&s));
            assert!(waste(&packing, &s).unwrap() >= rat(0, 1));
        }
    }
}

#[test]
fn hm_never_beats_nor_loses_to_ha_of_next_order() {
    // Theorem: cost(HM_K, s) <= cost(HA_{K+1}, s), every sequence.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let s = uniform_seq(&mut rng, 200, D20);
        for k in [2u32, 5, 19] {
            let hm = cost_of(&format!("hm:{k}"), &s);
            let ha = cost_of(&format!("ha:{}", k + 1), &s);
            assert!(hm <= ha, "K={k}: HM {hm} > HA {ha}");
        }
    }
}

#[test]
fn deletion_monotonicity_small_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let s = uniform_seq(&mut rng, 25, D20);
        for id in ["ha:20", "mbf", "hmm:20"] {
            let full = cost_of(id, &s);
            for i in 0..s.len() {
                let reduced = cost_of(id, &s.without(i));
                assert!(reduced <= full, "{id}: removing item {i} raised cost");
            }
        }
    }
}

#[test]
fn rom_and_rrm_never_exceed_mbf() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for trial in 0..40u32 {
        let class = trial % 19 + 1;
        let s = class_seq(&mut rng, 150, D20, 19, class);
        assert!(cost_of(&format!("rom:{class}"), &s) <= cost_of("mbf", &s));

        let s = class1_seq(&mut rng, 150, D20);
        assert!(cost_of("rrm", &s) <= cost_of("mbf", &s));
    }
}

#[test]
fn rrm_single_set_is_contained_in_mbfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let s = class1_seq(&mut rng, 120, D20);
        let mut rrm = RrmPacker::new(D20);
        let mut mbf = MbfPacker::new(D20);
        for x in s.sizes() {
            rrm.step(x).unwrap();
            mbf.step(x).unwrap();
            let mbf_set: std::collections::HashSet<usize> =
                mbf.unmatched_large_indices().into_iter().collect();
            for idx in rrm.unmatched_large_indices() {
                assert!(mbf_set.contains(&idx), "item {idx} single in RRM but not in MBF");
            }
        }
    }
}

/// RRM bookkeeping, checked after every step: the registry bounds, the
/// red/blue cap, and the exact accounting identity
/// `2 N_red + N_blue = n_a + n_b1 + N_a2` (with `n_a` counting the a items
/// in red or blue bins), which pins `2 N_red + N_blue` into
/// `[n_a + n_b1, n_a + n_b1 + 1]`.
#[test]
fn rrm_counters_hold_stepwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..25 {
        let s = class1_seq(&mut rng, 300, D20);
        let mut p = RrmPacker::new(D20);
        for x in s.sizes() {
            p.step(x).unwrap();
            let c = *p.counters();
            assert!(c.n_a2 <= 1);
            assert!(c.n_b <= 1);
            assert!(!(c.n_c > 0 && c.n_a1 > 0));
            assert!(c.n_red() <= 3 * c.n_blue() + 3);
            assert_eq!(c.n_ab, 0);
            assert_eq!(
                2 * c.n_red() + c.n_blue(),
                c.items_a_redblue + c.items_b1 + c.n_a2
            );
            assert_eq!(c.items_b1, c.n_bc);
            assert_eq!(c.items_a, c.items_a_redblue + c.items_a_in_d);
        }
        // Final-packing identity: counting a and b1 items over the bins.
        let c = *p.counters();
        assert_eq!(
            c.items_a_redblue + c.items_b1,
            2 * c.n_aa + c.n_ac + c.n_a1 + c.n_a2 + c.n_bc
        );
    }
}

/// The per-case weighting upper-bounds RHM's cost up to the paper's
/// additive constants (22 for Case 1, 23 for Case 2), keyed on the final
/// class-1 packing shape.
#[test]
fn weighting_bounds_rhm_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut saw_case1 = false;
    let mut saw_case2 = false;
    for trial in 0..6 {
        let s = if trial % 3 == 2 {
            // Skew toward small items so Case 1 (a1-bins, no c-bins) shows up.
            let items = (0..10_000)
                .map(|_| rng.random_range(1..=(D20 * 3 / 5)))
                .collect();
            Sequence::new(D20, items).unwrap()
        } else {
            uniform_seq(&mut rng, 10_000, D20)
        };
        let mut p = binpack::algorithms::RhmPacker::new(D20);
        for x in s.sizes() {
            p.step(x).unwrap();
        }
        let counters = *p.rrm_counters();
        let cost = p.finish().cost();
        let (case, constant) = if counters.n_a1 == 0 {
            saw_case2 = true;
            (WeightCase::Case2, 23)
        } else {
            assert_eq!(counters.n_c, 0, "c-bins and a1-bins never coexist");
            saw_case1 = true;
            (WeightCase::Case1, 22)
        };
        let total: Rat = s.sizes().map(|x| weight(case, x, D20)).sum();
        let bound = total + rat(constant, 1);
        assert!(
            rat(cost as i128, 1) <= bound,
            "cost {cost} exceeds weight bound {bound} in {case:?}"
        );
    }
    assert!(saw_case1 && saw_case2, "both weighting cases should be exercised");
}

#[test]
fn packers_never_beat_the_exact_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..40 {
        let s = uniform_seq(&mut rng, 10, 100);
        let opt = opt_bruteforce(&s).unwrap();
        assert!(opt >= lower_bound(&s));
        for id in ["nf", "ff", "bf", "mbf", "om:20", "ha:20", "hm:20", "hmm:20", "rhm", "ss"] {
            assert!(cost_of(id, &s) >= opt, "{id} beat the optimum");
        }
    }
}

#[test]
fn weight_search_quick_sanity() {
    let (value, witness) = max_bin_weight(WeightCase::Case2, 1000).unwrap();
    assert!(value <= rat(373, 228));
    assert!(witness.total_size <= rat(1, 1));
    assert_eq!(witness.limit_weight(), rat(373, 228));
}

#[test]
fn generated_sizes_stay_in_range() {
    for spec in builtin_set_instances() {
        let n = 1_000_000;
        let s = generate(&spec, n, Seed { master: 99, trial_index: 0 }).unwrap();
        assert_eq!(s.len(), n);
        assert!(
            s.items.iter().all(|&v| v >= spec.lo && v <= spec.hi),
            "{} out of range",
            spec.name
        );
    }
}

#[test]
fn discrete_uniform_mean_is_centred() {
    let spec = lookup_instance("DU2").unwrap();
    let n = 100_000;
    let s = generate(&spec, n, Seed { master: 5, trial_index: 1 }).unwrap();
    let mean = s.total() as f64 / n as f64;
    let expect = (spec.lo + spec.hi) as f64 / 2.0;
    let sigma = (((spec.hi - spec.lo + 1).pow(2) - 1) as f64 / 12.0).sqrt() / (n as f64).sqrt();
    assert!((mean - expect).abs() <= 3.0 * sigma, "mean {mean} vs {expect} (3s = {})", 3.0 * sigma);
}

/// The Zipf sampler weights sizes by i^(-theta); its empirical mean must
/// match the mean computed from the same normalization sums.
#[test]
fn zipf_mean_matches_its_table() {
    let spec = lookup_instance("ZIPF1").unwrap();
    let (lo, hi, theta) = match spec.kind {
        DistKind::Zipf { theta } => (spec.lo, spec.hi, theta),
        _ => unreachable!(),
    };
    let weights: Vec<f64> = (lo..=hi).map(|i| (i as f64).powf(-theta)).collect();
    let norm: f64 = weights.iter().sum();
    let mean_expect: f64 = (lo..=hi)
        .zip(&weights)
        .map(|(i, w)| i as f64 * w)
        .sum::<f64>()
        / norm;
    let var: f64 = (lo..=hi)
        .zip(&weights)
        .map(|(i, w)| (i as f64 - mean_expect).powi(2) * w)
        .sum::<f64>()
        / norm;
    let n = 1_000_000;
    let s = generate(&spec, n, Seed { master: 2, trial_index: 0 }).unwrap();
    let mean = s.total() as f64 / n as f64;
    let tol = 4.0 * (var / n as f64).sqrt();
    assert!(
        (mean - mean_expect).abs() <= tol,
        "zipf mean {mean} vs table mean {mean_expect} (tol {tol})"
    );
}

/// Reconstructing the BPS table: empirical frequencies follow the drawn
/// weights.
#[test]
fn bps_frequencies_follow_the_table() {
    let spec = lookup_instance("BPSD1").unwrap();
    let seed = Seed { master: 3, trial_index: 7 };
    let table = bps_table(&spec, seed).unwrap();
    let total: f64 = table.iter().map(|&(_, w)| w).sum();
    let n = 200_000;
    let s = generate(&spec, n, seed).unwrap();
    let mut counts = std::collections::HashMap::new();
    for &v in &s.items {
        *counts.entry(v).or_insert(0u64) += 1;
    }
    // Every drawn value is a support point.
    let support: std::collections::HashSet<u64> = table.iter().map(|&(v, _)| v).collect();
    assert!(counts.keys().all(|v| support.contains(v)));
    let l1: f64 = table
        .iter()
        .map(|&(v, w)| {
            let emp = *counts.get(&v).unwrap_or(&0) as f64 / n as f64;
            (emp - w / total).abs()
        })
        .sum();
    assert!(l1 < 0.02, "L1 distance {l1} between table and empirical law");
}

#[test]
fn sortd_equals_sorted_uniform_for_offline_algorithms() {
    let spec = DistributionSpec {
        name: "sortd-small".into(),
        e: 1000,
        lo: 1,
        hi: 1000,
        kind: DistKind::Sortd,
    };
    let s = generate(&spec, 500, Seed { master: 8, trial_index: 0 }).unwrap();
    assert!(s.items.windows(2).all(|w| w[0] >= w[1]));
    // First-fit-decreasing style guarantee: FFD cost within 3/2 of optimum's
    // size bound.
    let cost = cost_of("ff", &s);
    let lb = lower_bound(&s);
    assert!(cost as f64 <= 1.5 * lb as f64 + 1.0);
}
