//! Finite pattern posets.
//!
//! A [`PatternPoset`] on `k` points stores its order relation as one `u16`
//! row per point: bit `b` of `rows[a]` is set iff `a <= b`.
//!
//! Every constructor uses a fixed labeling:
//!
//! * `chain(k)`: point `i` is the `i`-th smallest.
//! * `diamond()`: `0` bottom, `1` and `2` the incomparable middles, `3` top.
//! * `hypercube(k)`: point `x` is the subset of `[k]` with bitmask `x`.
//!   `hypercube(2)` therefore coincides with `diamond()` label for label.
//! * `v()`: `0` bottom, `1` and `2` above it.
//! * `lambda()`: `0` top, `1` and `2` below it (the transpose of `v()`).
//! * `antichain(k)`: no strict relations.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_PATTERN_SIZE: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternPoset {
    rows: Vec<u16>,
}

/// First violated poset axiom found by [`PatternPoset::validate_rows`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Reflexivity { a: usize },
    Antisymmetry { a: usize, b: usize },
    Transitivity { a: usize, b: usize, c: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Reflexivity { a } => write!(f, "reflexivity fails at point {a}"),
            Violation::Antisymmetry { a, b } => {
                write!(f, "antisymmetry fails: {a} <= {b} and {b} <= {a}")
            }
            Violation::Transitivity { a, b, c } => {
                write!(
                    f,
                    "transitivity fails: {a} <= {b} <= {c} but not {a} <= {c}"
                )
            }
        }
    }
}

impl PatternPoset {
    /// Builds a poset from a boolean relation matrix, rejecting anything that
    /// is not a partial order.
    pub fn from_matrix(leq: &[Vec<bool>]) -> Result<Self> {
        let k = leq.len();
        check_size(k)?;
        let mut rows = vec![0u16; k];
        for (a, row) in leq.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidPoset(format!(
                    "row {a} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (b, &x) in row.iter().enumerate() {
                if x {
                    rows[a] |= 1 << b;
                }
            }
        }
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<u16>) -> Result<Self> {
        check_size(rows.len())?;
        if let Some(v) = Self::validate_rows(&rows) {
            return Err(Error::InvalidPoset(v.to_string()));
        }
        Ok(PatternPoset { rows })
    }

    /// Checks reflexivity, then antisymmetry, then transitivity and reports
    /// the first violation.
    pub fn validate_rows(rows: &[u16]) -> Option<Violation> {
        let k = rows.len();
        let leq = |a: usize, b: usize| rows[a] >> b & 1 == 1;
        for a in 0..k {
            if !leq(a, a) {
                return Some(Violation::Reflexivity { a });
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                if leq(a, b) && leq(b, a) {
                    return Some(Violation::Antisymmetry { a, b });
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                if !leq(a, b) {
                    continue;
                }
                for c in 0..k {
                    if leq(b, c) && !leq(a, c) {
                        return Some(Violation::Transitivity { a, b, c });
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        match Self::validate_rows(&self.rows) {
            None => Ok(()),
            Some(v) => Err(v),
        }
    }

    pub fn chain(k: usize) -> Result<Self> {
        check_size(k)?;
        let rows = (0..k)
            .map(|a| (((1u32 << k) - 1) & !((1u32 << a) - 1)) as u16)
            .collect();
        Self::from_rows(rows)
    }

    pub fn diamond() -> Self {
        PatternPoset {
            rows: vec![0b1111, 0b1010, 0b1100, 0b1000],
        }
    }

    pub fn hypercube(k: usize) -> Result<Self> {
        if !(1..=4).contains(&k) {
            return Err(Error::HypercubeDimension(k));
        }
        let size = 1usize << k;
        let rows = (0..size)
            .map(|a| {
                (0..size)
                    .filter(|&b| a & !b == 0)
                    .fold(0u16, |acc, b| acc | 1 << b)
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn v() -> Self {
        PatternPoset {
            rows: vec![0b111, 0b010, 0b100],
        }
    }

    pub fn lambda() -> Self {
        PatternPoset {
            rows: vec![0b001, 0b011, 0b101],
        }
    }

    pub fn antichain(k: usize) -> Result<Self> {
        check_size(k)?;
        Self::from_rows((0..k).map(|a| 1u16 << a).collect())
    }

    /// Order-reversed poset on the same points.
    pub fn dual(&self) -> Self {
        let k = self.size();
        let rows = (0..k)
            .map(|a| {
                (0..k)
                    .filter(|&b| self.leq(b, a))
                    .fold(0u16, |acc, b| acc | 1 << b)
            })
            .collect();
        PatternPoset { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Row `a` of the relation as a bitmask over points.
    pub fn row(&self, a: usize) -> u16 {
        self.rows[a]
    }

    /// Number of `true` entries of the relation matrix, reflexive ones included.
    pub fn relation_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn minimal_points(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&a| (0..self.size()).all(|b| !self.lt(b, a)))
            .collect()
    }

    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&a| (0..self.size()).all(|b| !self.lt(a, b)))
            .collect()
    }

    /// A linear extension: repeatedly take the smallest-labelled point whose
    /// strict predecessors have all been placed. For every constructor in
    /// this module this is the identity order except for `lambda()`.
    pub fn linear_extension(&self) -> Vec<usize> {
        let k = self.size();
        let mut placed = 0u32;
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            let next = (0..k)
                .find(|&a| {
                    placed >> a & 1 == 0 && (0..k).all(|b| !self.lt(b, a) || placed >> b & 1 == 1)
                })
                .expect("acyclic relation always has a minimal unplaced point");
            placed |= 1 << next;
            order.push(next);
        }
        order
    }

    /// Relabeling `phi` with `other.leq(phi[a], phi[b]) == self.leq(a, b)`,
    /// found by backtracking.
    pub fn find_relabeling(&self, other: &PatternPoset) -> Option<Vec<usize>> {
        let k = self.size();
        if k != other.size() || self.relation_count() != other.relation_count() {
            return None;
        }
        fn rec(p: &PatternPoset, q: &PatternPoset, phi: &mut Vec<usize>, used: &mut u32) -> bool {
            let a = phi.len();
            if a == p.size() {
                return true;
            }
            for t in 0..q.size() {
                if *used >> t & 1 == 1 {
                    continue;
                }
                let ok = (0..a)
                    .all(|b| p.leq(a, b) == q.leq(t, phi[b]) && p.leq(b, a) == q.leq(phi[b], t))
                    && p.leq(a, a) == q.leq(t, t);
                if ok {
                    phi.push(t);
                    *used |= 1 << t;
                    if rec(p, q, phi, used) {
                        return true;
                    }
                    *used &= !(1 << t);
                    phi.pop();
                }
            }
            false
        }
        let mut phi = Vec::with_capacity(k);
        let mut used = 0u32;
        rec(self, other, &mut phi, &mut used).then_some(phi)
    }

    pub fn is_isomorphic(&self, other: &PatternPoset) -> bool {
        self.find_relabeling(other).is_some()
    }

    /// Text form: `poset k` followed by `k` rows of `0`/`1`.
    pub fn to_text(&self) -> String {
        let k = self.size();
        let mut out = format!("poset {k}\n");
        for a in 0..k {
            for b in 0..k {
                out.push(if self.leq(a, b) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `poset k` header".into(),
        })?;
        let k: usize = header
            .strip_prefix("poset")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: hline,
                message: format!("expected `poset k`, found `{header}`"),
            })?;
        check_size(k)?;
        let mut rows = Vec::with_capacity(k);
        for (line, l) in lines {
            if rows.len() == k {
                return Err(Error::Parse {
                    line,
                    message: "extra row".into(),
                });
            }
            if l.len() != k {
                return Err(Error::Parse {
                    line,
                    message: format!("row has {} characters, expected {k}", l.len()),
                });
            }
            let mut row = 0u16;
            for (b, c) in l.chars().enumerate() {
                match c {
                    '1' => row |= 1 << b,
                    '0' => {}
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: format!("unexpected character `{c}`"),
                        })
                    }
                }
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse {
                line: hline,
                message: format!("expected {k} rows, found {}", rows.len()),
            });
        }
        Self::from_rows(rows)
    }

    /// Named patterns: `chain:k`, `diamond`, `qk:k`, `v`, `lambda`, `antichain:k`.
    pub fn from_keyword(word: &str) -> Result<Self> {
        let (name, arg) = match word.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (word, None),
        };
        let count = |arg: Option<&str>| -> Result<usize> {
            arg.and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Range(format!("pattern `{word}` needs a numeric size")))
        };
        match (name.trim(), arg) {
            ("diamond", None) => Ok(Self::diamond()),
            ("v", None) => Ok(Self::v()),
            ("lambda", None) => Ok(Self::lambda()),
            ("chain", a) => Self::chain(count(a)?),
            ("qk", a) => Self::hypercube(count(a)?),
            ("antichain", a) => Self::antichain(count(a)?),
            _ => Err(Error::Range(format!("unknown pattern keyword `{word}`"))),
        }
    }

    /// Whether this is the diamond with its canonical labeling.
    pub fn is_diamond(&self) -> bool {
        *self == Self::diamond()
    }

    /// Keyword of a named pattern isomorphic to this one, else `"custom"`.
    pub fn keyword(&self) -> String {
        let k = self.size();
        let mut named: Vec<(String, Self)> = vec![
            ("diamond".into(), Self::diamond()),
            ("v".into(), Self::v()),
            ("lambda".into(), Self::lambda()),
        ];
        named.extend(Self::chain(k).ok().map(|p| (format!("chain:{k}"), p)));
        named.extend(
            Self::antichain(k)
                .ok()
                .map(|p| (format!("antichain:{k}"), p)),
        );
        if k.is_power_of_two() {
            let d = k.trailing_zeros() as usize;
            named.extend(Self::hypercube(d).ok().map(|p| (format!("qk:{d}"), p)));
        }
        named
            .into_iter()
            .find(|(_, p)| p.is_isomorphic(self))
            .map_or_else(|| "custom".to_string(), |(name, _)| name)
    }
}

impl fmt::Debug for PatternPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PatternPoset({:?})",
            self.to_text().lines().skip(1).collect::<Vec<_>>()
        )
    }
}

fn check_size(k: usize) -> Result<()> {
    if (1..=MAX_PATTERN_SIZE).contains(&k) {
        Ok(())
    } else {
        Err(Error::PatternSize(k))
    }
}
