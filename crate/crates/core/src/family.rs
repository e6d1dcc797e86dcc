//! Subsets of `[n]` and families of them.
//!
//! Element `i` of `[n] = {1, ..., n}` is stored at bit `i - 1`. A
//! [`SetFamily`] keeps its members duplicate-free and sorted by cardinality,
//! then by mask value; every constructor and mutator restores that order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// `[n]` itself.
    pub fn full(n: usize) -> Subset {
        Subset(full_mask(n))
    }

    pub fn singleton(i: usize) -> Subset {
        debug_assert!((1..=MAX_GROUND).contains(&i));
        Subset(1 << (i - 1))
    }

    /// Builds a subset from 1-based elements, checking they lie in `[n]`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Result<Subset> {
        let mut mask = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset(mask))
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> (i - 1) & 1 == 1
    }

    #[inline]
    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_strict_subset(self, other: Subset) -> bool {
        self.0 != other.0 && self.is_subset(other)
    }

    #[inline]
    pub fn comparable(self, other: Subset) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << (i - 1))
    }

    #[inline]
    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << (i - 1)))
    }

    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & full_mask(n))
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut x = self.0;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let t = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(t + 1)
        })
    }

    /// Canonical member order: cardinality first, then mask value.
    #[inline]
    pub fn canonical_cmp(self, other: Subset) -> Ordering {
        (self.len(), self.0).cmp(&(other.len(), other.0))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All subsets of `[n]` in canonical order (cardinality, then value).
/// Intended for the small ground sets where `2^n` is enumerable.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n < 64, "cannot enumerate 2^{n} subsets");
    (0..=n).flat_map(move |k| subsets_of_size(n, k))
}

/// The `k`-subsets of `[n]` in increasing mask order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    let limit = 1u64 << n;
    let mut next = if k > n { limit } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = next;
        if cur == 0 {
            done = true;
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            next = (((r ^ cur) >> 2) / c) | r;
            if next >= limit || r == 0 {
                done = true;
            }
        }
        Some(Subset(cur))
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(n: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(SetFamily {
            n,
            members: Vec::new(),
        })
    }

    /// Builds a family from arbitrary subsets, dropping duplicates.
    pub fn from_sets<I: IntoIterator<Item = Subset>>(n: usize, sets: I) -> Result<Self> {
        check_ground(n)?;
        let full = full_mask(n);
        let mut members: Vec<Subset> = sets.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| s.0 & !full != 0) {
            let element = 64 - (bad.0 & !full).leading_zeros() as usize;
            return Err(Error::ElementOutOfRange { element, n });
        }
        members.sort_by(|a, b| a.canonical_cmp(*b));
        members.dedup();
        Ok(SetFamily { n, members })
    }

    /// Builds a family from lists of 1-based elements.
    pub fn from_lists<L, I>(n: usize, lists: L) -> Result<Self>
    where
        L: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        check_ground(n)?;
        let sets = lists
            .into_iter()
            .map(|l| Subset::from_elements(n, l))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sets(n, sets)
    }

    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<Subset>) -> Self {
        debug_assert!(members
            .windows(2)
            .all(|w| w[0].canonical_cmp(w[1]) == Ordering::Less));
        SetFamily { n, members }
    }

    /// The full power set of `[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        if n > 24 {
            return Err(Error::OverCap {
                what: "power set",
                n,
                cap: 24,
            });
        }
        check_ground(n)?;
        Ok(SetFamily {
            n,
            members: all_subsets(n).collect(),
        })
    }

    /// `∅ ⊂ {1} ⊂ {1,2} ⊂ … ⊂ [n]`.
    pub fn maximal_chain(n: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(SetFamily {
            n,
            members: (0..=n).map(|k| Subset(full_mask(k))).collect(),
        })
    }

    /// `∅` together with all singletons.
    pub fn empty_and_singletons(n: usize) -> Result<Self> {
        check_ground(n)?;
        Self::from_sets(
            n,
            std::iter::once(Subset::EMPTY).chain((1..=n).map(Subset::singleton)),
        )
    }

    /// `[n]` together with all complements of singletons.
    pub fn full_and_co_singletons(n: usize) -> Result<Self> {
        Ok(Self::empty_and_singletons(n)?.complement())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied()
    }

    /// Position of `s` in canonical order, or where it would be inserted.
    pub fn position(&self, s: Subset) -> std::result::Result<usize, usize> {
        self.members.binary_search_by(|m| m.canonical_cmp(s))
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.position(s).is_ok()
    }

    /// Inserts `s`; returns `false` if it was already present.
    pub fn insert(&mut self, s: Subset) -> Result<bool> {
        if s.0 & !full_mask(self.n) != 0 {
            let element = 64 - (s.0 & !full_mask(self.n)).leading_zeros() as usize;
            return Err(Error::ElementOutOfRange { element, n: self.n });
        }
        match self.position(s) {
            Ok(_) => Ok(false),
            Err(at) => {
                self.members.insert(at, s);
                Ok(true)
            }
        }
    }

    pub fn remove(&mut self, s: Subset) -> bool {
        match self.position(s) {
            Ok(at) => {
                self.members.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    /// `self ∪ {s}` as a new family.
    pub fn with(&self, s: Subset) -> Result<Self> {
        let mut g = self.clone();
        g.insert(s)?;
        Ok(g)
    }

    pub fn contains_empty(&self) -> bool {
        self.members.first() == Some(&Subset::EMPTY)
    }

    pub fn contains_full(&self) -> bool {
        self.members.last() == Some(&Subset::full(self.n))
    }

    /// Family of complements `{[n] \ F : F ∈ self}`.
    pub fn complement(&self) -> Self {
        let n = self.n;
        let mut members: Vec<Subset> = self.members.iter().map(|s| s.complement(n)).collect();
        members.sort_by(|a, b| a.canonical_cmp(*b));
        SetFamily { n, members }
    }

    /// Members with no strict subset in the family.
    pub fn minimal_sets(&self) -> Self {
        // canonical order is a linear extension of inclusion, so only earlier
        // members can lie strictly below a given one
        let mut out: Vec<Subset> = Vec::new();
        for &s in &self.members {
            if !out.iter().any(|m| m.is_strict_subset(s)) {
                out.push(s);
            }
        }
        SetFamily {
            n: self.n,
            members: out,
        }
    }

    /// Members with no strict superset in the family.
    pub fn maximal_sets(&self) -> Self {
        let mut out: Vec<Subset> = Vec::new();
        for &s in self.members.iter().rev() {
            if !out.iter().any(|m| s.is_strict_subset(*m)) {
                out.push(s);
            }
        }
        out.reverse();
        SetFamily {
            n: self.n,
            members: out,
        }
    }

    pub fn is_antichain(&self) -> bool {
        self.members
            .iter()
            .enumerate()
            .all(|(i, a)| self.members[i + 1..].iter().all(|b| !a.comparable(*b)))
    }

    pub fn is_chain(&self) -> bool {
        self.members.windows(2).all(|w| w[0].is_subset(w[1]))
    }

    /// Union of all members.
    pub fn support(&self) -> Subset {
        Subset(self.members.iter().fold(0, |acc, s| acc | s.0))
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &SetFamily) -> Self {
        SetFamily {
            n: self.n,
            members: self
                .members
                .iter()
                .copied()
                .filter(|s| !other.contains(*s))
                .collect(),
        }
    }

    pub fn union(&self, other: &SetFamily) -> Self {
        let mut members = self.members.clone();
        members.extend(other.iter());
        members.sort_by(|a, b| a.canonical_cmp(*b));
        members.dedup();
        SetFamily { n: self.n, members }
    }

    pub fn intersection(&self, other: &SetFamily) -> Self {
        SetFamily {
            n: self.n,
            members: self
                .members
                .iter()
                .copied()
                .filter(|s| other.contains(*s))
                .collect(),
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(Subset) -> bool) -> Self {
        SetFamily {
            n: self.n,
            members: self.members.iter().copied().filter(|&s| keep(s)).collect(),
        }
    }

    /// Subsets of `[n]` not in the family, in canonical order.
    pub fn missing(&self) -> impl Iterator<Item = Subset> + '_ {
        all_subsets(self.n).filter(move |s| !self.contains(*s))
    }

    /// Text serialization: `n=<n>` header, one set per line, `-` for `∅`.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for s in &self.members {
            out.push_str(&set_line(*s));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            n: self.n,
            sets: self
                .members
                .iter()
                .map(|s| s.elements().collect())
                .collect(),
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Self> {
        Self::from_lists(json.n, json.sets.iter().map(|s| s.iter().copied()))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} ", self.n)?;
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elements())
    }
}

/// JSON mirror of the text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

pub(crate) fn set_line(s: Subset) -> String {
    if s.is_empty() {
        "-".to_string()
    } else {
        s.elements()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Result of parsing a family file.
#[derive(Debug, Clone)]
pub struct ParsedFamily {
    pub family: SetFamily,
    /// Non-fatal problems (duplicate lines in lenient mode).
    pub warnings: Vec<String>,
}

/// Parses the text format, merging duplicate sets with a warning.
pub fn parse_family(text: &str) -> Result<SetFamily> {
    parse_family_with(text, false).map(|p| p.family)
}

/// Parses the text format. With `strict`, a duplicate set is an error.
pub fn parse_family_with(text: &str, strict: bool) -> Result<ParsedFamily> {
    let mut n: Option<usize> = None;
    let mut sets: Vec<Subset> = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let Some(n) = n else {
            let value = l
                .strip_prefix("n=")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("expected header `n=<int>`, found `{l}`"),
                })?;
            if !(1..=MAX_GROUND).contains(&value) {
                return Err(Error::Parse {
                    line,
                    message: format!("ground size {value} out of range 1..={MAX_GROUND}"),
                });
            }
            n = Some(value);
            continue;
        };
        let set = if l == "-" {
            Subset::EMPTY
        } else {
            let mut elements = Vec::new();
            for tok in l.split(',') {
                let tok = tok.trim();
                let e: usize = tok.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{tok}` is not an element"),
                })?;
                if e == 0 || e > n {
                    return Err(Error::Parse {
                        line,
                        message: format!("element {e} out of range 1..={n}"),
                    });
                }
                elements.push(e);
            }
            Subset::from_elements(n, elements)?
        };
        if !seen.insert(set) {
            if strict {
                return Err(Error::DuplicateSet { line });
            }
            warnings.push(format!("line {line}: duplicate set {set} ignored"));
            continue;
        }
        sets.push(set);
    }
    let n = n.ok_or(Error::Parse {
        line: 1,
        message: "missing `n=<int>` header".into(),
    })?;
    Ok(ParsedFamily {
        family: SetFamily::from_sets(n, sets)?,
        warnings,
    })
}

fn check_ground(n: usize) -> Result<()> {
    if (1..=MAX_GROUND).contains(&n) {
        Ok(())
    } else {
        Err(Error::GroundSize(n))
    }
}
