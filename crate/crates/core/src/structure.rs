//! Structural decomposition of diamond-saturated families and instance
//! checks of the bounds such families satisfy.
//!
//! Notation used throughout, for a diamond-free family `F` over `[n]`:
//!
//! * `A`: minimal members of `F`; `W`: elements in no member of `A`;
//!   `m_A`: largest cardinality in `A`.
//! * `B0`: sets `X ⊆ [n]` that are the bottom of a diamond whose other three
//!   points are members of `F`; `B1`: maximal sets of `B0`; `B`: members of
//!   `B1` contained in no member of `A`.
//! * `G(B)`: members of `F` that are a middle point of such a diamond over
//!   some bottom in `B`.
//! * `X`, `Y0`, `Y1`, `Y`, `H(Y)`, `W̄`: the order-dual notions (maximal
//!   members, tops of diamonds, minimal tops, tops containing no member of
//!   `X`, middles under those tops, elements in every maximal member).

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{all_subsets, full_mask, subsets_of_size, SetFamily, Subset};
use crate::induced::{find_diamond, validate_embedding, Embedding};
use crate::pattern::PatternPoset;
use crate::saturation::{is_saturated, CheckMode};

/// Ground-size cap for the `2^n` scans behind `B0` and `Y0`.
pub const DECOMPOSE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub n: usize,
    pub a: SetFamily,
    pub b0: SetFamily,
    pub b1: SetFamily,
    pub b: SetFamily,
    /// One diamond `[B, C, D, E]` with `C, D, E ∈ F` for each member of `b`.
    pub b_witnesses: Vec<Embedding>,
    pub gb: SetFamily,
    pub w: Subset,
    pub m_a: usize,
    pub x: SetFamily,
    pub y0: SetFamily,
    pub y1: SetFamily,
    pub y: SetFamily,
    pub hy: SetFamily,
    pub w_bar: Subset,
    /// `∅ ∉ F` and `[n] ∉ F`.
    pub extremes_absent: bool,
}

/// Incomparable member pairs `(C, D)` with a common upper bound in `F`
/// (`upper == true`) or a common lower bound (`upper == false`).
fn bounded_pairs(f: &SetFamily, upper: bool) -> Vec<(Subset, Subset)> {
    let m = f.members();
    let mut out = Vec::new();
    for (i, &c) in m.iter().enumerate() {
        for &d in &m[i + 1..] {
            if c.comparable(d) {
                continue;
            }
            let bounded = if upper {
                let u = c.union(d);
                m.iter().any(|e| u.is_subset(*e))
            } else {
                let l = c.intersection(d);
                m.iter().any(|e| e.is_subset(l))
            };
            if bounded {
                out.push((c, d));
            }
        }
    }
    out
}

/// Is `bottom` the minimum of a diamond with middles `p`, some `q`, and a
/// top, all in `F`?
fn middle_over(f: &SetFamily, bottom: Subset, p: Subset) -> bool {
    bottom.is_strict_subset(p)
        && f.iter().any(|q| {
            bottom.is_strict_subset(q)
                && !q.comparable(p)
                && f.iter().any(|r| p.union(q).is_subset(r))
        })
}

/// Dual of [`middle_over`]: `p` is a middle point of a diamond topped by `top`.
fn middle_under(f: &SetFamily, top: Subset, p: Subset) -> bool {
    p.is_strict_subset(top)
        && f.iter().any(|q| {
            q.is_strict_subset(top)
                && !q.comparable(p)
                && f.iter().any(|r| r.is_subset(p.intersection(q)))
        })
}

/// Computes the decomposition of a diamond-free family.
pub fn decompose(f: &SetFamily) -> Result<Decomposition> {
    let n = f.n();
    if n > DECOMPOSE_CAP {
        return Err(Error::OverCap {
            what: "decomposition",
            n,
            cap: DECOMPOSE_CAP,
        });
    }
    if find_diamond(f).is_some() {
        return Err(Error::NotFree);
    }
    let a = f.minimal_sets();
    let x = f.maximal_sets();

    // B0 is the down-closure of the intersections C ∩ D over Λ-pairs;
    // only the maximal intersections matter for the scan.
    let lambda_pairs = bounded_pairs(f, true);
    let meets = SetFamily::from_sets(n, lambda_pairs.iter().map(|(c, d)| c.intersection(*d)))?
        .maximal_sets();
    let b0 = SetFamily::from_sorted_unchecked(
        n,
        all_subsets(n)
            .filter(|s| meets.iter().any(|m| s.is_subset(m)))
            .collect(),
    );
    let b1 = b0.maximal_sets();
    let b = b1.filter(|s| !a.iter().any(|m| s.is_subset(m)));
    let b_witnesses = b
        .iter()
        .map(|bot| {
            let (c, d) = lambda_pairs
                .iter()
                .copied()
                .find(|(c, d)| bot.is_subset(c.intersection(*d)))
                .expect("every member of B0 lies under some Λ-pair");
            let top = f
                .iter()
                .find(|e| c.union(d).is_subset(*e))
                .expect("Λ-pair has a top");
            Embedding::new(vec![bot, c, d, top])
        })
        .collect();
    let gb = f.filter(|p| b.iter().any(|bot| middle_over(f, bot, p)));
    let w = Subset(full_mask(n) & !a.support().mask());
    let m_a = a.iter().map(Subset::len).max().unwrap_or(0);

    let v_pairs = bounded_pairs(f, false);
    let joins = SetFamily::from_sets(n, v_pairs.iter().map(|(c, d)| c.union(*d)))?.minimal_sets();
    let y0 = SetFamily::from_sorted_unchecked(
        n,
        all_subsets(n)
            .filter(|s| joins.iter().any(|m| m.is_subset(*s)))
            .collect(),
    );
    let y1 = y0.minimal_sets();
    let y = y1.filter(|s| !x.iter().any(|m| m.is_subset(s)));
    let hy = f.filter(|p| y.iter().any(|top| middle_under(f, top, p)));
    let w_bar = Subset(x.iter().fold(full_mask(n), |acc, s| acc & s.mask()));

    Ok(Decomposition {
        n,
        a,
        b0,
        b1,
        b,
        b_witnesses,
        gb,
        w,
        m_a,
        x,
        y0,
        y1,
        y,
        hy,
        w_bar,
        extremes_absent: !f.contains_empty() && !f.contains_full(),
    })
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        let fam = |f: &SetFamily| f.to_json().sets;
        let set = |s: Subset| s.elements().collect::<Vec<_>>();
        json!({
            "n": self.n,
            "extremes_absent": self.extremes_absent,
            "A": fam(&self.a),
            "B0_size": self.b0.len(),
            "B1": fam(&self.b1),
            "B": fam(&self.b),
            "GB": fam(&self.gb),
            "W": set(self.w),
            "mA": self.m_a,
            "X": fam(&self.x),
            "Y0_size": self.y0.len(),
            "Y1": fam(&self.y1),
            "Y": fam(&self.y),
            "HY": fam(&self.hy),
            "Wbar": set(self.w_bar),
        })
    }
}

/// Family of members of `g` containing element `i`.
pub fn f_of(i: usize, g: &SetFamily) -> Result<SetFamily> {
    if i == 0 || i > g.n() {
        return Err(Error::ElementOutOfRange {
            element: i,
            n: g.n(),
        });
    }
    Ok(g.filter(|s| s.contains(i)))
}

/// Elements of `[n]` contained in no member of `g`.
pub fn w_of(g: &SetFamily) -> Subset {
    Subset(full_mask(g.n()) & !g.support().mask())
}

/// The peeling sequence of an antichain.
///
/// Starting from `families[0]` = the input, step `i` picks the element
/// `singletons[i]` whose incidence family is inclusion-minimal (smallest
/// element on ties), records the class of elements with the same incidence
/// family, and removes that incidence family. The sequence stops once no
/// element is covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NestedSequence {
    pub singletons: Vec<usize>,
    pub classes: Vec<Subset>,
    pub families: Vec<SetFamily>,
}

impl NestedSequence {
    pub fn len(&self) -> usize {
        self.singletons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singletons.is_empty()
    }

    pub fn union_of_classes(&self) -> Subset {
        Subset(self.classes.iter().fold(0, |acc, c| acc | c.mask()))
    }
}

pub fn nested_sequence(antichain: &SetFamily) -> Result<NestedSequence> {
    if antichain.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !antichain.is_antichain() {
        return Err(Error::Range("nested sequence needs an antichain".into()));
    }
    let n = antichain.n();
    let mut seq = NestedSequence {
        singletons: Vec::new(),
        classes: Vec::new(),
        families: Vec::new(),
    };
    let mut cur = antichain.clone();
    loop {
        let covered = cur.support();
        if covered.is_empty() {
            break;
        }
        // incidence of each covered element as a bitset over member indices
        let words = cur.len().div_ceil(64);
        let incidence: Vec<(usize, Vec<u64>)> = covered
            .elements()
            .map(|j| {
                let mut bits = vec![0u64; words];
                for (idx, s) in cur.iter().enumerate() {
                    if s.contains(j) {
                        bits[idx / 64] |= 1 << (idx % 64);
                    }
                }
                (j, bits)
            })
            .collect();
        let strictly_inside =
            |x: &[u64], y: &[u64]| x != y && x.iter().zip(y).all(|(a, b)| a & !b == 0);
        let (pick, pick_bits) = incidence
            .iter()
            .find(|(_, fj)| {
                !incidence
                    .iter()
                    .any(|(_, other)| strictly_inside(other, fj))
            })
            .expect("finite nonempty set of incidence families has a minimal one");
        let class = incidence
            .iter()
            .filter(|(_, fj)| fj == pick_bits)
            .fold(Subset::EMPTY, |acc, (j, _)| acc.with(*j));
        let next = cur.filter(|s| !s.contains(*pick));
        seq.singletons.push(*pick);
        seq.classes.push(class);
        seq.families.push(cur);
        cur = next;
        debug_assert!(seq.families.last().map(|f| f.n()) == Some(n));
    }
    Ok(seq)
}

/// Outcome of [`cover_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverBound {
    /// Every `h`-subset of `[n]` contains one of the sets.
    pub hypothesis_holds: bool,
    pub k: usize,
    /// `n - h + 1`.
    pub bound: usize,
    pub ok: bool,
}

/// If every `h`-subset of `[n]` contains one of the `k` nonempty `sets`,
/// then `k >= n - h + 1`. Checks the hypothesis exhaustively.
pub fn cover_bound_check(n: usize, sets: &[Subset], h: usize) -> Result<CoverBound> {
    if n == 0 || n > DECOMPOSE_CAP {
        return Err(Error::OverCap {
            what: "cover bound check",
            n,
            cap: DECOMPOSE_CAP,
        });
    }
    if h == 0 || h > n {
        return Err(Error::Range(format!("h = {h} must lie in 1..={n}")));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = sets.iter().find(|s| s.mask() & !full_mask(n) != 0) {
        return Err(Error::Range(format!("set {bad} is not a subset of [{n}]")));
    }
    let hypothesis_holds = subsets_of_size(n, h).all(|big| sets.iter().any(|s| s.is_subset(big)));
    let k = sets.len();
    let bound = n - h + 1;
    Ok(CoverBound {
        hypothesis_holds,
        k,
        bound,
        ok: !hypothesis_holds || k >= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail {
        evidence: Value,
    },
    #[serde(rename = "n/a")]
    NotApplicable {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub statement: &'static str,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    /// Set when the input is not diamond-saturated; no checks are run then.
    pub vacuous: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub decomposition: Option<Decomposition>,
    pub nested: Option<NestedSequence>,
}

impl InvariantReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::Fail { .. }))
    }

    pub fn has_failure(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn status(&self, id: &str) -> Option<&CheckStatus> {
        self.checks.iter().find(|c| c.id == id).map(|c| &c.status)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vacuous": self.vacuous,
            "decomposition": self.decomposition.as_ref().map(Decomposition::to_json),
            "nested": self.nested,
            "lemmas": self.checks,
        })
    }
}

fn sets_json(sets: &[Subset]) -> Value {
    json!(sets
        .iter()
        .map(|s| s.elements().collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn set_json(s: Subset) -> Value {
    json!(s.elements().collect::<Vec<_>>())
}

struct Checker<'a> {
    f: &'a SetFamily,
    d: &'a Decomposition,
    nested: Option<&'a NestedSequence>,
    dual_nested: Option<&'a NestedSequence>,
}

type Outcome = std::result::Result<(), Value>;

impl Checker<'_> {
    fn n(&self) -> usize {
        self.f.n()
    }

    /// Minimal and maximal members: some pair is incomparable.
    fn min_max_incomparable(&self) -> Outcome {
        let found = self
            .d
            .a
            .iter()
            .any(|a| self.d.x.iter().any(|x| !a.comparable(x)));
        found
            .then_some(())
            .ok_or_else(|| json!({ "A": self.d.a.to_json().sets, "X": self.d.x.to_json().sets }))
    }

    /// `A ∩ B = ∅` and `A ∪ B` is a maximal antichain; dually for `X`, `Y`.
    fn c2_saturated(&self) -> Outcome {
        for (name, low, high) in [("A,B", &self.d.a, &self.d.b), ("X,Y", &self.d.x, &self.d.y)] {
            let common = low.intersection(high);
            if !common.is_empty() {
                return Err(json!({ "pair": name, "overlap": common.to_json().sets }));
            }
            let union = low.union(high);
            if !union.is_antichain() {
                return Err(json!({ "pair": name, "reason": "union is not an antichain" }));
            }
            if let Some(s) = all_subsets(self.n())
                .find(|s| !union.contains(*s) && union.iter().all(|m| !m.comparable(*s)))
            {
                return Err(json!({ "pair": name, "addable": set_json(s) }));
            }
        }
        Ok(())
    }

    /// For `i ∈ W`, `A ∈ A` there is `S ∈ F` with `A ⊆ S`, `i ∉ S`, `S ∪ {i} ∈ F`.
    fn w_extension(&self) -> Outcome {
        for i in self.d.w.elements() {
            for a in self.d.a.iter() {
                let ok = self
                    .f
                    .iter()
                    .any(|s| a.is_subset(s) && !s.contains(i) && self.f.contains(s.with(i)));
                if !ok {
                    return Err(json!({ "i": i, "A": set_json(a) }));
                }
            }
        }
        Ok(())
    }

    /// Each `A ∈ A` has `|A|` members of size `>= |A|`; each `X ∈ X` has
    /// `n - |X|` members of size `<= |X|`.
    fn size_counts(&self) -> Outcome {
        for a in self.d.a.iter() {
            let count = self.f.iter().filter(|s| s.len() >= a.len()).count();
            if count < a.len() {
                return Err(json!({ "A": set_json(a), "count": count }));
            }
        }
        for x in self.d.x.iter() {
            let count = self.f.iter().filter(|s| s.len() <= x.len()).count();
            if count < self.n() - x.len() {
                return Err(json!({ "X": set_json(x), "count": count }));
            }
        }
        Ok(())
    }

    /// Each `Y ∈ Y` has `n - |Y|` members of size `<= |Y|`.
    fn size_counts_y(&self) -> Outcome {
        for y in self.d.y.iter() {
            let count = self.f.iter().filter(|s| s.len() <= y.len()).count();
            if count < self.n() - y.len() {
                return Err(json!({ "Y": set_json(y), "count": count }));
            }
        }
        Ok(())
    }

    /// `B ∈ B`, `i ∉ B`: some member `X` has `i ∈ X ⊆ B ∪ {i}`; dually for `Y`.
    fn singleton_extension(&self) -> Outcome {
        let n = self.n();
        for b in self.d.b.iter() {
            for i in b.complement(n).elements() {
                if !self
                    .f
                    .iter()
                    .any(|x| x.contains(i) && x.is_subset(b.with(i)))
                {
                    return Err(json!({ "B": set_json(b), "i": i }));
                }
            }
        }
        for c in self.d.y.iter() {
            for i in c.elements() {
                if !self
                    .f
                    .iter()
                    .any(|y| !y.contains(i) && c.without(i).is_subset(y))
                {
                    return Err(json!({ "Y": set_json(c), "i": i }));
                }
            }
        }
        Ok(())
    }

    fn disjoint(&self, pairs: &[(&str, &SetFamily, &SetFamily)]) -> Outcome {
        for (name, p, q) in pairs {
            let common = p.intersection(q);
            if !common.is_empty() {
                return Err(json!({ "pair": name, "overlap": common.to_json().sets }));
            }
        }
        Ok(())
    }

    fn classes_cover(&self) -> Outcome {
        let n = self.n();
        for (side, seq, w) in [
            ("A", self.nested, self.d.w),
            ("X", self.dual_nested, self.d.w_bar),
        ] {
            let Some(seq) = seq else { continue };
            let classes = &seq.classes;
            for (i, c) in classes.iter().enumerate() {
                if classes[i + 1..]
                    .iter()
                    .any(|d| !c.intersection(*d).is_empty())
                {
                    return Err(json!({ "side": side, "reason": "classes overlap" }));
                }
            }
            let want = Subset(full_mask(n) & !w.mask());
            if seq.union_of_classes() != want {
                return Err(
                    json!({ "side": side, "union": set_json(seq.union_of_classes()), "expected": set_json(want) }),
                );
            }
        }
        Ok(())
    }

    /// Members of the `j`-th peeled family miss every earlier class.
    fn classes_avoid_later(&self) -> Outcome {
        for (side, seq) in [("A", self.nested), ("X", self.dual_nested)] {
            let Some(seq) = seq else { continue };
            for (j, fam) in seq.families.iter().enumerate() {
                for t in fam.iter() {
                    if let Some(l) = (0..j).find(|&l| !seq.classes[l].intersection(t).is_empty()) {
                        return Err(
                            json!({ "side": side, "j": j + 1, "l": l + 1, "T": set_json(t) }),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// For each `i` some `X_i ∈ A` meets `A_1 ∪ … ∪ A_i` exactly in `A_i`.
    fn class_representatives(&self) -> Outcome {
        for (side, seq, family) in [
            ("A", self.nested, &self.d.a),
            ("X", self.dual_nested, &self.d.x.complement()),
        ] {
            let Some(seq) = seq else { continue };
            let mut prefix = Subset::EMPTY;
            for (i, &class) in seq.classes.iter().enumerate() {
                prefix = prefix.union(class);
                if !family.iter().any(|x| x.intersection(prefix) == class) {
                    return Err(json!({ "side": side, "i": i + 1, "class": set_json(class) }));
                }
            }
        }
        Ok(())
    }

    fn generator_bound(&self) -> Outcome {
        let n = self.n() as i64;
        let lhs = self.d.a.union(&self.d.gb).len() as i64;
        let rhs = n + 1 - self.d.m_a as i64 - self.d.w.len() as i64;
        if lhs < rhs {
            return Err(json!({ "side": "A", "size": lhs, "bound": rhs }));
        }
        let co_max = self
            .d
            .x
            .iter()
            .map(|x| n - x.len() as i64)
            .max()
            .unwrap_or(0);
        let lhs = self.d.x.union(&self.d.hy).len() as i64;
        let rhs = n + 1 - co_max - self.d.w_bar.len() as i64;
        if lhs < rhs {
            return Err(json!({ "side": "X", "size": lhs, "bound": rhs }));
        }
        Ok(())
    }

    /// With `W ≠ ∅`: `|A| + |{G ∈ G(B) : W ⊆ G}| >= n + 1 - |W|`, and dually.
    fn generator_bound_w(&self) -> Outcome {
        let n = self.n() as i64;
        if !self.d.w.is_empty() {
            let w = self.d.w;
            let lhs =
                (self.d.a.len() + self.d.gb.iter().filter(|g| w.is_subset(*g)).count()) as i64;
            let rhs = n + 1 - w.len() as i64;
            if lhs < rhs {
                return Err(json!({ "side": "A", "size": lhs, "bound": rhs }));
            }
        }
        if !self.d.w_bar.is_empty() {
            let wb = self.d.w_bar;
            let lhs = (self.d.x.len()
                + self
                    .d
                    .hy
                    .iter()
                    .filter(|h| h.intersection(wb).is_empty())
                    .count()) as i64;
            let rhs = n + 1 - wb.len() as i64;
            if lhs < rhs {
                return Err(json!({ "side": "X", "size": lhs, "bound": rhs }));
            }
        }
        Ok(())
    }
}

const STATEMENTS: &[(&str, &str)] = &[
    (
        "extreme-member-size",
        "if ∅ or [n] is a member then |F| >= n+1",
    ),
    (
        "min-max-incomparable",
        "some minimal member is incomparable to some maximal member",
    ),
    (
        "minimal-bottoms-c2-saturated",
        "A ∩ B = ∅ and A ∪ B is C2-saturated (dually X, Y)",
    ),
    (
        "uncovered-element-extension",
        "for i ∈ W, A ∈ A: some S ∈ F has A ⊆ S, S ∪ {i} ∈ F",
    ),
    (
        "size-counts",
        "each A ∈ A has |A| members of size >= |A| (dually for X)",
    ),
    (
        "top-size-counts",
        "each Y ∈ Y has n - |Y| members of size <= |Y|",
    ),
    (
        "bottom-singleton-extension",
        "for B ∈ B, i ∉ B: some member X has i ∈ X ⊆ B ∪ {i} (dually for Y)",
    ),
    ("generators-avoid-extremes", "G(B) ∩ A = ∅ and H(Y) ∩ X = ∅"),
    ("classes-cover", "the classes partition [n] \\ W"),
    (
        "classes-avoid-later",
        "members of the j-th peeled family miss every earlier class",
    ),
    (
        "class-representatives",
        "some X_i ∈ A has X_i ∩ (A_1 ∪ … ∪ A_i) = A_i",
    ),
    (
        "generator-bound",
        "|A ∪ G(B)| >= n+1-m_A-|W| (dually for X ∪ H(Y))",
    ),
    (
        "generator-bound-w",
        "W ≠ ∅: |A ∪ {G ∈ G(B): W ⊆ G}| >= n+1-|W| (dually)",
    ),
    ("minimal-maximal-disjoint", "|F| < 3n/2 implies A ∩ X = ∅"),
    (
        "extremes-avoid-opposite-generators",
        "A ∩ H(Y) = ∅ and X ∩ G(B) = ∅",
    ),
    ("generators-disjoint", "|F| <= n implies G(B) ∩ H(Y) = ∅"),
    ("size-lower-bound", "|F| >= n+1"),
];

fn statement(id: &'static str) -> &'static str {
    STATEMENTS
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, s)| *s)
        .unwrap_or("")
}

/// Runs every structural check on `f`.
///
/// The input must be diamond-saturated; otherwise the report is vacuous.
/// Checks whose hypotheses fail report `n/a`. A `fail` on a saturated input
/// means either a bug in this crate or a counterexample to the statement.
pub fn verify_invariants(f: &SetFamily) -> InvariantReport {
    let vacuous = |reason: String| InvariantReport {
        vacuous: Some(reason),
        checks: Vec::new(),
        decomposition: None,
        nested: None,
    };
    let n = f.n();
    if n > DECOMPOSE_CAP {
        return vacuous(format!("n = {n} exceeds cap {DECOMPOSE_CAP}"));
    }
    let diamond = PatternPoset::diamond();
    match is_saturated(f, &diamond, CheckMode::Full { certificate: false }) {
        Ok(r) if r.is_saturated() => {}
        Ok(r) => return vacuous(format!("family is not diamond-saturated ({:?})", r.verdict)),
        Err(e) => return vacuous(e.to_string()),
    }
    let d = decompose(f).expect("saturated family is diamond-free and within cap");
    let extremes_absent = d.extremes_absent;
    let nested = if extremes_absent {
        nested_sequence(&d.a).ok()
    } else {
        None
    };
    let dual_nested = if extremes_absent {
        nested_sequence(&d.x.complement()).ok()
    } else {
        None
    };
    let checker = Checker {
        f,
        d: &d,
        nested: nested.as_ref(),
        dual_nested: dual_nested.as_ref(),
    };

    let mut checks = Vec::new();
    let mut push = |id: &'static str, status: CheckStatus| {
        checks.push(Check {
            id,
            statement: statement(id),
            status,
        });
    };
    let run = |o: Outcome| match o {
        Ok(()) => CheckStatus::Pass,
        Err(evidence) => CheckStatus::Fail { evidence },
    };
    let na = |reason: &str| CheckStatus::NotApplicable {
        reason: reason.to_string(),
    };
    let standing = "∅ or [n] is a member";

    push(
        "extreme-member-size",
        if extremes_absent {
            na("neither ∅ nor [n] is a member")
        } else if f.len() > n {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail {
                evidence: json!({ "size": f.len() }),
            }
        },
    );
    let gated = |o: &dyn Fn() -> Outcome| {
        if extremes_absent {
            run(o())
        } else {
            na(standing)
        }
    };
    push(
        "min-max-incomparable",
        gated(&|| checker.min_max_incomparable()),
    );
    push(
        "minimal-bottoms-c2-saturated",
        gated(&|| checker.c2_saturated()),
    );
    push(
        "uncovered-element-extension",
        if !extremes_absent {
            na(standing)
        } else if d.w.is_empty() {
            na("W is empty")
        } else {
            run(checker.w_extension())
        },
    );
    push("size-counts", gated(&|| checker.size_counts()));
    push("top-size-counts", gated(&|| checker.size_counts_y()));
    push(
        "bottom-singleton-extension",
        gated(&|| checker.singleton_extension()),
    );
    push(
        "generators-avoid-extremes",
        gated(&|| checker.disjoint(&[("G(B),A", &d.gb, &d.a), ("H(Y),X", &d.hy, &d.x)])),
    );
    push("classes-cover", gated(&|| checker.classes_cover()));
    push(
        "classes-avoid-later",
        gated(&|| checker.classes_avoid_later()),
    );
    push(
        "class-representatives",
        gated(&|| checker.class_representatives()),
    );
    push("generator-bound", gated(&|| checker.generator_bound()));
    push(
        "generator-bound-w",
        if !extremes_absent {
            na(standing)
        } else if d.w.is_empty() && d.w_bar.is_empty() {
            na("W and W̄ are empty")
        } else {
            run(checker.generator_bound_w())
        },
    );
    push(
        "minimal-maximal-disjoint",
        if !extremes_absent {
            na(standing)
        } else if 2 * f.len() >= 3 * n {
            na("|F| >= 3n/2")
        } else {
            run(checker.disjoint(&[("A,X", &d.a, &d.x)]))
        },
    );
    push(
        "extremes-avoid-opposite-generators",
        gated(&|| checker.disjoint(&[("A,H(Y)", &d.a, &d.hy), ("X,G(B)", &d.x, &d.gb)])),
    );
    push(
        "generators-disjoint",
        if !extremes_absent {
            na(standing)
        } else if f.len() > n {
            na("|F| > n")
        } else {
            run(checker.disjoint(&[("G(B),H(Y)", &d.gb, &d.hy)]))
        },
    );
    push(
        "size-lower-bound",
        if f.len() > n {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail {
                evidence: json!({ "size": f.len(), "family": sets_json(f.members()) }),
            }
        },
    );

    InvariantReport {
        vacuous: None,
        checks,
        decomposition: Some(d),
        nested,
    }
}

/// Re-validates every stored `B` witness as a diamond in `F ∪ {B}`.
pub fn validate_b_witnesses(f: &SetFamily, d: &Decomposition) -> std::result::Result<(), String> {
    let diamond = PatternPoset::diamond();
    if d.b_witnesses.len() != d.b.len() {
        return Err("witness count differs from |B|".into());
    }
    for (bot, e) in d.b.iter().zip(&d.b_witnesses) {
        if e.image(0) != bot {
            return Err(format!("witness for {bot} has bottom {}", e.image(0)));
        }
        let mut host: Vec<Subset> = f.members().to_vec();
        host.push(bot);
        validate_embedding(&host, &diamond, e)?;
        if !e.images()[1..].iter().all(|s| f.contains(*s)) {
            return Err(format!(
                "witness for {bot} uses a non-member above the bottom"
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists.iter().map(|l| l.iter().copied())).unwrap()
    }

    fn set(l: &[usize]) -> Subset {
        Subset::from_elements(20, l.iter().copied()).unwrap()
    }

    #[test]
    fn chain_decomposition() {
        let d = decompose(&SetFamily::maximal_chain(3).unwrap()).unwrap();
        assert!(d.b0.is_empty() && d.b.is_empty() && d.gb.is_empty());
        assert_eq!(d.a, fam(3, &[&[]]));
        assert_eq!(d.w, Subset::full(3));
        assert!(!d.extremes_absent);
    }

    #[test]
    fn unsaturated_free_family() {
        let d = decompose(&fam(3, &[&[1], &[2], &[1, 3], &[2, 3]])).unwrap();
        assert_eq!(d.a, fam(3, &[&[1], &[2]]));
        assert_eq!(d.w, set(&[3]));
        assert_eq!(d.m_a, 1);
    }

    #[test]
    fn decompose_rejects_diamond() {
        assert_eq!(
            decompose(&SetFamily::power_set(2).unwrap()),
            Err(Error::NotFree)
        );
    }

    #[test]
    fn f_and_w_examples() {
        let g = fam(3, &[&[1, 2], &[1, 3]]);
        assert_eq!(f_of(1, &g).unwrap(), g);
        assert_eq!(f_of(2, &g).unwrap(), fam(3, &[&[1, 2]]));
        assert!(f_of(4, &g).is_err());
        assert!(f_of(0, &g).is_err());
        assert_eq!(w_of(&g), Subset::EMPTY);
        assert_eq!(w_of(&fam(3, &[&[1]])), set(&[2, 3]));
    }

    #[test]
    fn nested_examples() {
        let s = nested_sequence(&fam(3, &[&[1, 2], &[1, 3]])).unwrap();
        assert_eq!(s.singletons, vec![2, 1]);
        assert_eq!(s.classes, vec![set(&[2]), set(&[1, 3])]);
        assert_eq!(
            s.families,
            vec![fam(3, &[&[1, 2], &[1, 3]]), fam(3, &[&[1, 3]])]
        );
        assert_eq!(s.union_of_classes(), Subset::full(3));

        let s = nested_sequence(&fam(2, &[&[1]])).unwrap();
        assert_eq!(s.singletons, vec![1]);
        assert_eq!(s.classes, vec![set(&[1])]);
        assert_eq!(s.union_of_classes(), set(&[1]));

        assert_eq!(
            nested_sequence(&SetFamily::new(3).unwrap()),
            Err(Error::EmptyInput)
        );
        assert!(nested_sequence(&fam(2, &[&[1], &[1, 2]])).is_err());
    }

    #[test]
    fn cover_bound_examples() {
        let r = cover_bound_check(3, &[set(&[1]), set(&[2]), set(&[3])], 2).unwrap();
        assert_eq!(
            r,
            CoverBound {
                hypothesis_holds: true,
                k: 3,
                bound: 2,
                ok: true
            }
        );
        let r = cover_bound_check(3, &[set(&[1]), set(&[2])], 2).unwrap();
        assert_eq!(
            r,
            CoverBound {
                hypothesis_holds: true,
                k: 2,
                bound: 2,
                ok: true
            }
        );
        let r = cover_bound_check(3, &[set(&[1, 2])], 2).unwrap();
        assert!(!r.hypothesis_holds && r.ok);
        assert_eq!(
            cover_bound_check(3, &[Subset::EMPTY], 2),
            Err(Error::EmptyInput)
        );
        assert!(cover_bound_check(3, &[set(&[1])], 0).is_err());
        assert!(cover_bound_check(3, &[set(&[1])], 4).is_err());
    }

    #[test]
    fn verifier_gates_on_extremes() {
        let r = verify_invariants(&SetFamily::maximal_chain(4).unwrap());
        assert!(r.vacuous.is_none());
        assert!(!r.has_failure());
        assert_eq!(r.status("extreme-member-size"), Some(&CheckStatus::Pass));
        assert!(matches!(
            r.status("min-max-incomparable"),
            Some(CheckStatus::NotApplicable { .. })
        ));

        let r = verify_invariants(&SetFamily::empty_and_singletons(3).unwrap());
        assert_eq!(r.status("extreme-member-size"), Some(&CheckStatus::Pass));
        assert_eq!(r.status("size-lower-bound"), Some(&CheckStatus::Pass));
    }

    #[test]
    fn verifier_vacuous_on_unsaturated() {
        let r = verify_invariants(&fam(3, &[&[1], &[2], &[1, 3], &[2, 3]]));
        assert!(r.vacuous.is_some());
        assert!(r.checks.is_empty());
    }
}
