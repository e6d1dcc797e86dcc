//! Exact computation of `sat*(n, P)` for small `n`.
//!
//! The search walks size layers of `P`-free families. Layer `s + 1` is
//! produced from layer `s` by adding every member that keeps the family
//! free; since freeness is hereditary every free family of size `s + 1`
//! arises this way. With symmetry reduction each layer holds one canonical
//! representative per orbit; without it, families are grown by members
//! larger than their current maximum so each labelled family appears once.
//! A family is saturated exactly when it has no free one-set extension, so
//! the extension scan that builds the next layer also decides saturation.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::canon::{canonical_form, canonical_form_of, CanonicalForm};
use crate::error::{Error, Result};
use crate::family::{all_subsets, FamilyJson, SetFamily, Subset};
use crate::induced::find_copy_using;
use crate::pattern::PatternPoset;
use crate::saturation::{is_saturated, q3_construction, CheckMode, Verdict};

pub const EXACT_CAP: usize = 6;
pub const CLASSIFY_CAP: usize = 5;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub symmetry: bool,
    /// Largest layer examined. `None` picks `n + 2` for the diamond and
    /// `2^n` otherwise.
    pub size_cap: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry: true,
            size_cap: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exact,
    Classify,
    NoExtremes,
    Q3Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// `value` is the exact minimum.
    Exact,
    /// No saturated family up to the cap; `lower_bound` is `cap + 1`.
    LowerBound,
    /// The free families ran out before any was saturated.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerStats {
    pub size: usize,
    /// Families examined in this layer (orbit representatives when
    /// symmetry reduction is on).
    pub candidates: u64,
    pub extensions_tested: u64,
    pub saturated: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    MaximalChain,
    EmptyAndSingletons,
    FullAndCoSingletons,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchManifest {
    pub tool_version: String,
    pub n: usize,
    pub pattern: String,
    pub mode: SearchMode,
    pub symmetry: bool,
    pub size_cap: usize,
    pub status: SearchStatus,
    pub value: Option<usize>,
    pub lower_bound: usize,
    pub nodes: u64,
    pub extensions_tested: u64,
    pub layers: Vec<LayerStats>,
    /// Canonical representatives of the saturated families of size `value`.
    pub result_families: Vec<FamilyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result_tags: Option<Vec<Vec<FamilyTag>>>,
    pub wall_time_ms: u64,
}

impl SearchManifest {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }

    /// JSON without the wall-time field, for reproducibility comparisons.
    pub fn to_comparable_json(&self) -> Value {
        let mut v = self.to_json();
        v.as_object_mut().expect("object").remove("wall_time_ms");
        v
    }

    pub fn families(&self) -> Vec<SetFamily> {
        self.result_families
            .iter()
            .map(|j| SetFamily::from_json(j).expect("manifest holds valid families"))
            .collect()
    }

    pub fn witness(&self) -> Option<SetFamily> {
        self.families().into_iter().next()
    }
}

struct Outcome {
    status: SearchStatus,
    value: Option<usize>,
    lower_bound: usize,
    layers: Vec<LayerStats>,
    families: Vec<CanonicalForm>,
}

struct NodeResult {
    saturated: bool,
    tested: u64,
    children: Vec<Vec<u64>>,
}

fn default_cap(n: usize, pattern: &PatternPoset) -> usize {
    if pattern.is_isomorphic(&PatternPoset::diamond()) {
        n + 2
    } else {
        1 << n
    }
}

/// Extends `members` (canonically sorted) by every free addition. In
/// symmetry mode children are canonical keys; otherwise only additions
/// after the current maximum within `universe` are kept.
fn expand(
    n: usize,
    members: &[Subset],
    pattern: &PatternPoset,
    universe: &[Subset],
    symmetry: bool,
) -> NodeResult {
    let f = SetFamily::from_sorted_unchecked(n, members.to_vec());
    let mut saturated = true;
    let mut tested = 0u64;
    let mut children = Vec::new();
    let last = members.last().copied();
    for s in all_subsets(n) {
        if f.contains(s) {
            continue;
        }
        tested += 1;
        let free = find_copy_using(&f, s, pattern)
            .expect("s is missing")
            .is_none();
        if !free {
            continue;
        }
        saturated = false;
        if universe.binary_search_by(|u| u.canonical_cmp(s)).is_err() {
            continue;
        }
        if symmetry {
            let mut next = members.to_vec();
            let at = next.binary_search_by(|u| u.canonical_cmp(s)).unwrap_err();
            next.insert(at, s);
            children.push(canonical_form_of(n, &next).key().to_vec());
        } else if last.is_none_or(|l| l.canonical_cmp(s).is_lt()) {
            let mut next = members.to_vec();
            next.push(s);
            children.push(next.iter().map(|m| m.mask()).collect());
        }
    }
    NodeResult {
        saturated,
        tested,
        children,
    }
}

fn layered(
    n: usize,
    pattern: &PatternPoset,
    universe: &[Subset],
    symmetry: bool,
    cap: usize,
) -> Outcome {
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    let mut layers = Vec::new();
    for size in 0..=cap {
        let results: Vec<NodeResult> = layer
            .par_iter()
            .map(|keys| {
                let members: Vec<Subset> = keys.iter().map(|&m| Subset(m)).collect();
                expand(n, &members, pattern, universe, symmetry)
            })
            .collect();
        let saturated: Vec<&Vec<u64>> = layer
            .iter()
            .zip(&results)
            .filter(|(_, r)| r.saturated)
            .map(|(k, _)| k)
            .collect();
        layers.push(LayerStats {
            size,
            candidates: layer.len() as u64,
            extensions_tested: results.iter().map(|r| r.tested).sum(),
            saturated: saturated.len() as u64,
        });
        if !saturated.is_empty() {
            let mut families: Vec<CanonicalForm> = saturated
                .iter()
                .map(|keys| {
                    canonical_form_of(n, &keys.iter().map(|&m| Subset(m)).collect::<Vec<_>>())
                })
                .collect();
            families.sort();
            families.dedup();
            return Outcome {
                status: SearchStatus::Exact,
                value: Some(size),
                lower_bound: size,
                layers,
                families,
            };
        }
        if size == cap {
            break;
        }
        let mut next: Vec<Vec<u64>> = results.into_iter().flat_map(|r| r.children).collect();
        next.par_sort_unstable();
        next.dedup();
        if next.is_empty() {
            return Outcome {
                status: SearchStatus::Infeasible,
                value: None,
                lower_bound: size + 1,
                layers,
                families: Vec::new(),
            };
        }
        layer = next;
    }
    Outcome {
        status: SearchStatus::LowerBound,
        value: None,
        lower_bound: cap + 1,
        layers,
        families: Vec::new(),
    }
}

fn run(
    n: usize,
    pattern: &PatternPoset,
    opts: SearchOptions,
    mode: SearchMode,
    exclude_extremes: bool,
) -> Result<SearchManifest> {
    if n == 0 {
        return Err(Error::GroundSize(0));
    }
    let start = Instant::now();
    let cap = opts
        .size_cap
        .unwrap_or_else(|| default_cap(n, pattern))
        .min(1 << n);
    let full = Subset::full(n);
    let universe: Vec<Subset> = all_subsets(n)
        .filter(|&s| !exclude_extremes || (s != Subset::EMPTY && s != full))
        .collect();
    let outcome = layered(n, pattern, &universe, opts.symmetry, cap);
    for form in &outcome.families {
        let f = form.family();
        let report = is_saturated(&f, pattern, CheckMode::Full { certificate: false })?;
        if report.verdict != Verdict::Saturated {
            return Err(Error::Internal(format!(
                "search result {f:?} re-validated as {:?}",
                report.verdict
            )));
        }
        if exclude_extremes && (f.contains_empty() || f.contains_full()) {
            return Err(Error::Internal(format!(
                "search result {f:?} contains an extreme set"
            )));
        }
    }
    let result_tags = (mode == SearchMode::Classify).then(|| {
        outcome
            .families
            .iter()
            .map(|c| tags_of(&c.family()))
            .collect()
    });
    Ok(SearchManifest {
        tool_version: TOOL_VERSION.to_string(),
        n,
        pattern: pattern.keyword(),
        mode,
        symmetry: opts.symmetry,
        size_cap: cap,
        status: outcome.status,
        value: outcome.value,
        lower_bound: outcome.lower_bound,
        nodes: outcome.layers.iter().map(|l| l.candidates).sum(),
        extensions_tested: outcome.layers.iter().map(|l| l.extensions_tested).sum(),
        layers: outcome.layers,
        result_families: outcome
            .families
            .iter()
            .map(|c| c.family().to_json())
            .collect(),
        result_tags,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Smallest saturated family size, proved layer by layer.
pub fn sat_star_exact(
    n: usize,
    pattern: &PatternPoset,
    opts: SearchOptions,
) -> Result<SearchManifest> {
    if n > EXACT_CAP {
        return Err(Error::OverCap {
            what: "exact search",
            n,
            cap: EXACT_CAP,
        });
    }
    run(n, pattern, opts, SearchMode::Exact, false)
}

/// Every minimum saturated family up to relabeling, each tagged.
pub fn classify_minimum(
    n: usize,
    pattern: &PatternPoset,
    opts: SearchOptions,
) -> Result<SearchManifest> {
    if n > CLASSIFY_CAP {
        return Err(Error::OverCap {
            what: "classification",
            n,
            cap: CLASSIFY_CAP,
        });
    }
    run(n, pattern, opts, SearchMode::Classify, false)
}

/// Smallest saturated family containing neither `∅` nor `[n]`.
pub fn sat_star_no_extremes(
    n: usize,
    pattern: &PatternPoset,
    opts: SearchOptions,
) -> Result<SearchManifest> {
    if n > CLASSIFY_CAP {
        return Err(Error::OverCap {
            what: "extreme-free search",
            n,
            cap: CLASSIFY_CAP,
        });
    }
    let opts = SearchOptions {
        size_cap: Some(opts.size_cap.unwrap_or(1 << n)),
        ..opts
    };
    run(n, pattern, opts, SearchMode::NoExtremes, true)
}

/// Named shapes a family matches up to relabeling; `[Other]` if none.
pub fn tags_of(f: &SetFamily) -> Vec<FamilyTag> {
    let n = f.n();
    let key = canonical_form(f);
    let named = [
        (FamilyTag::MaximalChain, SetFamily::maximal_chain(n)),
        (
            FamilyTag::EmptyAndSingletons,
            SetFamily::empty_and_singletons(n),
        ),
        (
            FamilyTag::FullAndCoSingletons,
            SetFamily::full_and_co_singletons(n),
        ),
    ];
    let tags: Vec<FamilyTag> = named
        .into_iter()
        .filter(|(_, g)| g.as_ref().is_ok_and(|g| canonical_form(g) == key))
        .map(|(t, _)| t)
        .collect();
    if tags.is_empty() {
        vec![FamilyTag::Other]
    } else {
        tags
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Q3Probe {
    pub tool_version: String,
    pub n: usize,
    pub family: FamilyJson,
    pub size: usize,
    pub expected_size: usize,
    pub verdict: Verdict,
    /// Exact search result, run where feasible (`n = 4`).
    pub exact: Option<SearchManifest>,
    /// Whether the construction size equals the exact minimum.
    pub construction_optimal: Option<bool>,
}

/// Builds the `3n - 2` construction, checks it, and at `n = 4` compares it
/// with the exact minimum.
pub fn q3_probe(n: usize, opts: SearchOptions) -> Result<Q3Probe> {
    if !(4..=6).contains(&n) {
        return Err(Error::Range(format!("q3 probe needs 4 <= n <= 6, got {n}")));
    }
    let q3 = PatternPoset::hypercube(3)?;
    let family = q3_construction(n)?;
    let verdict = is_saturated(&family, &q3, CheckMode::Full { certificate: false })?.verdict;
    let expected_size = 3 * n - 2;
    let exact = if n == 4 {
        let opts = SearchOptions {
            size_cap: Some(opts.size_cap.unwrap_or(expected_size)),
            ..opts
        };
        let mut m = run(n, &q3, opts, SearchMode::Q3Probe, false)?;
        m.wall_time_ms = 0;
        Some(m)
    } else {
        None
    };
    let construction_optimal = exact
        .as_ref()
        .and_then(|m| m.value)
        .map(|v| v == family.len() && verdict == Verdict::Saturated);
    Ok(Q3Probe {
        tool_version: TOOL_VERSION.to_string(),
        n,
        size: family.len(),
        family: family.to_json(),
        expected_size,
        verdict,
        exact,
        construction_optimal,
    })
}
