mod common;

use common::*;
use posat::family::{all_subsets, SetFamily, Subset};
use posat::saturation::{greedy_saturate, is_saturated, CheckMode, TieRule};
use posat::search::{sat_star_no_extremes, SearchOptions};
use posat::structure::{
    cover_bound_check, decompose, nested_sequence, validate_b_witnesses, verify_invariants,
    CheckStatus,
};
use posat::PatternPoset;

const FULL: CheckMode = CheckMode::Full { certificate: false };

fn saturated_families(n: usize) -> Vec<SetFamily> {
    let d = PatternPoset::diamond();
    let universe: Vec<Subset> = all_subsets(n).collect();
    (0u32..1 << universe.len())
        .map(|bits| {
            SetFamily::from_sets(
                n,
                (0..universe.len())
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| universe[i]),
            )
            .unwrap()
        })
        .filter(|f| is_saturated(f, &d, FULL).unwrap().is_saturated())
        .collect()
}

fn assert_no_failures(f: &SetFamily) {
    let report = verify_invariants(f);
    assert!(report.vacuous.is_none(), "{f:?}: {:?}", report.vacuous);
    if let Some(c) = report.failures().next() {
        panic!("{} failed on {f:?}: {:?}", c.id, c.status);
    }
    let d = decompose(f).unwrap();
    assert_eq!(validate_b_witnesses(f, &d), Ok(()));
}

#[test]
fn every_small_saturated_family_passes() {
    let counts: Vec<usize> = (1..=4)
        .map(|n| {
            let fams = saturated_families(n);
            fams.iter().for_each(assert_no_failures);
            fams.len()
        })
        .collect();
    assert_eq!(counts, vec![1, 4, 21, 467]);
}

#[test]
fn greedy_families_pass() {
    let d = PatternPoset::diamond();
    for n in 5..=7 {
        for seed in 0..8 {
            let f =
                greedy_saturate(&SetFamily::new(n).unwrap(), &d, TieRule::Shuffle(seed)).unwrap();
            assert_no_failures(&f);
        }
    }
}

#[test]
fn extreme_free_minimum_passes_every_check() {
    let m = sat_star_no_extremes(4, &PatternPoset::diamond(), SearchOptions::default()).unwrap();
    for f in m.families() {
        let report = verify_invariants(&f);
        assert!(!report.has_failure());
        let applicable = report
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Pass)
            .count();
        assert!(applicable > 5, "{f:?}");
    }
}

#[test]
fn unsaturated_input_is_vacuous() {
    let f = SetFamily::from_lists(3, [vec![1]]).unwrap();
    let report = verify_invariants(&f);
    assert!(report.vacuous.is_some());
    assert!(report.checks.is_empty());
}

#[test]
fn nested_sequence_covers_support() {
    let mut rng = rng(21);
    for _ in 0..200 {
        let f = random_family(&mut rng, 6, 8);
        let a = f.filter(|s| !s.is_empty()).minimal_sets();
        if a.is_empty() {
            continue;
        }
        let seq = nested_sequence(&a).unwrap();
        assert_eq!(seq.union_of_classes(), a.support(), "{a:?}");
        assert_eq!(seq.families[0], a);
        for i in 0..seq.len() {
            assert!(seq.classes[i].contains(seq.singletons[i]));
            assert!(seq.families[i].support().contains(seq.singletons[i]));
        }
        assert!(seq.families.windows(2).all(|w| w[1].len() < w[0].len()));
    }
}

#[test]
fn cover_bound_small_instances() {
    // oracle for the hypothesis: every h-subset contains a listed set
    let n = 4;
    let nonempty: Vec<Subset> = all_subsets(n).filter(|s| !s.is_empty()).collect();
    for k in 0..=2 {
        for_each_combination(nonempty.len(), k, |idx| {
            let sets: Vec<Subset> = idx.iter().map(|&i| nonempty[i]).collect();
            for h in 1..=n {
                let r = cover_bound_check(n, &sets, h).unwrap();
                let holds = (0u64..16)
                    .filter(|m| m.count_ones() as usize == h)
                    .all(|m| sets.iter().any(|s| s.mask() & !m == 0));
                assert_eq!(r.hypothesis_holds, holds);
                assert!(r.ok);
            }
        });
    }
}
