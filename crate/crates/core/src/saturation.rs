//! Freeness and saturation checks, certificates, and greedy completion.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{all_subsets, subsets_of_size, SetFamily, Subset};
use crate::induced::{find_copy, find_copy_using, Embedding};
use crate::pattern::PatternPoset;

/// Largest ground size accepted by exhaustive (`2^n`) scans.
pub const FULL_SCAN_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NotFree,
    FreeNotSaturated,
    Saturated,
}

impl Verdict {
    /// Exit code used by the `check` command.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Saturated => 0,
            Verdict::FreeNotSaturated => 2,
            Verdict::NotFree => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Test every missing set. With `certificate`, keep the copy found for each.
    Full { certificate: bool },
    /// Test `samples` missing sets drawn uniformly without replacement.
    Spot { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// A copy of the pattern inside the family.
    Copy(Embedding),
    /// A missing set whose addition creates no copy.
    Completable(Subset),
    /// Missing sets paired with a copy through each. Complete only for
    /// `Full { certificate: true }`; a sample in spot mode.
    Certificate(Vec<(Subset, Embedding)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    pub verdict: Verdict,
    pub evidence: Evidence,
    /// `true` when every missing set was examined (or a definitive
    /// counterexample was found).
    pub exhaustive: bool,
    pub missing_total: u64,
    pub missing_checked: u64,
}

impl SaturationReport {
    pub fn is_saturated(&self) -> bool {
        self.verdict == Verdict::Saturated
    }

    pub fn to_json(&self, pattern: &str) -> Value {
        let evidence = match &self.evidence {
            Evidence::Copy(e) => json!({ "kind": "copy", "witness": e.to_json(pattern) }),
            Evidence::Completable(s) => {
                json!({ "kind": "completable", "set": s.elements().collect::<Vec<_>>() })
            }
            Evidence::Certificate(entries) => json!({
                "kind": "certificate",
                "entries": entries
                    .iter()
                    .map(|(s, e)| json!({
                        "added": s.elements().collect::<Vec<_>>(),
                        "witness": e.to_json(pattern),
                    }))
                    .collect::<Vec<_>>(),
            }),
        };
        json!({
            "verdict": self.verdict,
            "exhaustive": self.exhaustive,
            "missing_total": self.missing_total,
            "missing_checked": self.missing_checked,
            "evidence": evidence,
        })
    }
}

/// `Ok(())` if `f` has no induced copy of `pattern`, otherwise the first copy.
pub fn is_free(f: &SetFamily, pattern: &PatternPoset) -> std::result::Result<(), Embedding> {
    match find_copy(f, pattern) {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

/// Decides freeness and saturation of `f`.
///
/// Full mode scans the missing sets layer by layer in canonical order, in
/// parallel within a layer; the reported counterexample is always the
/// canonically first one regardless of thread count.
pub fn is_saturated(
    f: &SetFamily,
    pattern: &PatternPoset,
    mode: CheckMode,
) -> Result<SaturationReport> {
    let n = f.n();
    if matches!(mode, CheckMode::Full { .. }) && n > FULL_SCAN_CAP {
        return Err(Error::OverCap {
            what: "full saturation scan",
            n,
            cap: FULL_SCAN_CAP,
        });
    }
    let missing_total = if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - f.len() as u64
    };
    if let Some(copy) = find_copy(f, pattern) {
        return Ok(SaturationReport {
            verdict: Verdict::NotFree,
            evidence: Evidence::Copy(copy),
            exhaustive: true,
            missing_total,
            missing_checked: 0,
        });
    }
    let through = |s: Subset| find_copy_using(f, s, pattern).expect("s is missing from f");
    match mode {
        CheckMode::Full { certificate } => {
            let mut entries = Vec::new();
            let mut checked = 0u64;
            for k in 0..=n {
                let layer: Vec<Subset> =
                    subsets_of_size(n, k).filter(|s| !f.contains(*s)).collect();
                if certificate {
                    let found: Vec<Option<Embedding>> =
                        layer.par_iter().map(|&s| through(s)).collect();
                    for (s, e) in layer.iter().zip(found) {
                        checked += 1;
                        match e {
                            Some(e) => entries.push((*s, e)),
                            None => return Ok(completable(*s, missing_total, checked)),
                        }
                    }
                } else {
                    let bad = layer.par_iter().position_first(|&s| through(s).is_none());
                    if let Some(at) = bad {
                        return Ok(completable(
                            layer[at],
                            missing_total,
                            checked + at as u64 + 1,
                        ));
                    }
                    checked += layer.len() as u64;
                }
            }
            Ok(SaturationReport {
                verdict: Verdict::Saturated,
                evidence: Evidence::Certificate(entries),
                exhaustive: true,
                missing_total,
                missing_checked: checked,
            })
        }
        CheckMode::Spot { samples, seed } => {
            let sample = sample_missing(f, samples, seed);
            let exhaustive = sample.len() as u64 == missing_total;
            let mut entries = Vec::with_capacity(sample.len());
            for (i, s) in sample.iter().enumerate() {
                match through(*s) {
                    Some(e) => entries.push((*s, e)),
                    None => return Ok(completable(*s, missing_total, i as u64 + 1)),
                }
            }
            Ok(SaturationReport {
                verdict: Verdict::Saturated,
                evidence: Evidence::Certificate(entries),
                exhaustive,
                missing_total,
                missing_checked: sample.len() as u64,
            })
        }
    }
}

fn completable(s: Subset, missing_total: u64, checked: u64) -> SaturationReport {
    SaturationReport {
        verdict: Verdict::FreeNotSaturated,
        evidence: Evidence::Completable(s),
        exhaustive: true,
        missing_total,
        missing_checked: checked,
    }
}

/// Up to `samples` distinct missing sets, sorted canonically.
fn sample_missing(f: &SetFamily, samples: usize, seed: u64) -> Vec<Subset> {
    let n = f.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = n <= 20;
    let total = if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - f.len() as u64
    };
    let mut out: Vec<Subset> = if small && samples as u64 >= total / 2 {
        let mut all: Vec<Subset> = f.missing().collect();
        all.shuffle(&mut rng);
        all.truncate(samples);
        all
    } else {
        let full = crate::family::full_mask(n);
        let mut seen = std::collections::HashSet::new();
        while (seen.len() as u64) < (samples as u64).min(total) {
            let s = Subset(rng.gen::<u64>() & full);
            if !f.contains(s) {
                seen.insert(s);
            }
        }
        seen.into_iter().collect()
    };
    out.sort_by(|a, b| a.canonical_cmp(*b));
    out
}

/// Order in which [`greedy_saturate`] offers candidate sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    Canonical,
    Reverse,
    Shuffle(u64),
}

/// Extends a free family to a saturated one by offering every missing set
/// once, in the given order, and keeping each that leaves the family free.
///
/// One pass suffices: a set rejected earlier still closes a copy once more
/// sets are added.
pub fn greedy_saturate(f: &SetFamily, pattern: &PatternPoset, order: TieRule) -> Result<SetFamily> {
    let n = f.n();
    if n > FULL_SCAN_CAP {
        return Err(Error::OverCap {
            what: "greedy saturation",
            n,
            cap: FULL_SCAN_CAP,
        });
    }
    if find_copy(f, pattern).is_some() {
        return Err(Error::NotFree);
    }
    let mut candidates: Vec<Subset> = f.missing().collect();
    match order {
        TieRule::Canonical => {}
        TieRule::Reverse => candidates.reverse(),
        TieRule::Shuffle(seed) => candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    let mut g = f.clone();
    for s in candidates {
        if find_copy_using(&g, s, pattern)?.is_none() {
            g.insert(s)?;
        }
    }
    Ok(g)
}

/// `{{i}, {1,j}, {2,j} : i ∈ [n], 3 ≤ j ≤ n} ∪ {∅, [n]}`, a
/// `Q_3`-saturated family of size `3n - 2`.
pub fn q3_construction(n: usize) -> Result<SetFamily> {
    if n < 2 {
        return Err(Error::Range(format!(
            "the Q3 construction needs n >= 2, got {n}"
        )));
    }
    let mut sets = vec![Subset::EMPTY, Subset::full(n)];
    sets.extend((1..=n).map(Subset::singleton));
    for j in 3..=n {
        sets.push(Subset::singleton(1).with(j));
        sets.push(Subset::singleton(2).with(j));
    }
    SetFamily::from_sets(n, sets)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub family: SetFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    /// Constructions verified saturated in full mode.
    pub entries: Vec<CatalogEntry>,
    /// Constructions that failed verification, with the reason.
    pub rejected: Vec<(&'static str, String)>,
}

/// Known saturated constructions for `pattern`, each verified before it is
/// emitted: the maximal chain, `∅` with singletons and `[n]` with
/// co-singletons for the diamond, and the `3n - 2` family for `Q_3`.
pub fn upper_bound_catalog(n: usize, pattern: &PatternPoset) -> Result<Catalog> {
    if n > FULL_SCAN_CAP {
        return Err(Error::OverCap {
            what: "catalog verification",
            n,
            cap: FULL_SCAN_CAP,
        });
    }
    let mut candidates: Vec<(&'static str, Result<SetFamily>)> = Vec::new();
    if pattern.is_isomorphic(&PatternPoset::diamond()) {
        candidates.push(("maximal-chain", SetFamily::maximal_chain(n)));
        candidates.push(("empty-and-singletons", SetFamily::empty_and_singletons(n)));
        candidates.push((
            "full-and-co-singletons",
            SetFamily::full_and_co_singletons(n),
        ));
    }
    if pattern.is_isomorphic(&PatternPoset::hypercube(3)?) {
        candidates.push(("q3-construction", q3_construction(n)));
    }
    let mut catalog = Catalog::default();
    for (name, family) in candidates {
        let family = match family {
            Ok(f) => f,
            Err(e) => {
                catalog.rejected.push((name, e.to_string()));
                continue;
            }
        };
        let report = is_saturated(&family, pattern, CheckMode::Full { certificate: false })?;
        if report.is_saturated() {
            catalog.entries.push(CatalogEntry { name, family });
        } else {
            catalog
                .rejected
                .push((name, format!("verdict {:?}", report.verdict)));
        }
    }
    Ok(catalog)
}

/// All subsets not in `f`, each paired with whether adding it creates a copy.
/// Exhaustive helper for small ground sets.
pub fn completion_profile(f: &SetFamily, pattern: &PatternPoset) -> Vec<(Subset, bool)> {
    all_subsets(f.n())
        .filter(|s| !f.contains(*s))
        .map(|s| {
            (
                s,
                find_copy_using(f, s, pattern).expect("missing").is_some(),
            )
        })
        .collect()
}
