//! Induced-copy detection.
//!
//! An [`Embedding`] maps each pattern point to a distinct set such that
//! `a <= b` in the pattern iff `image(a) ⊆ image(b)`. Incomparable points
//! must therefore land on incomparable sets.
//!
//! When several copies exist the detectors return the lexicographically
//! first one: points are taken in the pattern's
//! [`linear_extension`](PatternPoset::linear_extension) order and each is
//! given the earliest possible member in canonical family order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{SetFamily, Subset};
use crate::pattern::PatternPoset;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    images: Vec<Subset>,
}

impl Embedding {
    pub fn new(images: Vec<Subset>) -> Self {
        Embedding { images }
    }

    /// Image of each pattern point, indexed by point.
    pub fn images(&self) -> &[Subset] {
        &self.images
    }

    pub fn image(&self, point: usize) -> Subset {
        self.images[point]
    }

    pub fn uses(&self, s: Subset) -> bool {
        self.images.contains(&s)
    }

    /// Member index of each image within `host`, if all images are members.
    pub fn member_indices(&self, host: &SetFamily) -> Option<Vec<usize>> {
        self.images.iter().map(|&s| host.position(s).ok()).collect()
    }

    pub fn to_json(&self, pattern: &str) -> WitnessJson {
        WitnessJson {
            pattern: pattern.to_string(),
            map: self
                .images
                .iter()
                .enumerate()
                .map(|(point, s)| WitnessPoint {
                    point,
                    set: s.elements().collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub pattern: String,
    pub map: Vec<WitnessPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub point: usize,
    pub set: Vec<usize>,
}

/// Re-checks an embedding against the definition: every image lies in
/// `host`, images are pairwise distinct, and order is preserved and
/// reflected for every ordered pair of points.
pub fn validate_embedding(
    host: &[Subset],
    pattern: &PatternPoset,
    e: &Embedding,
) -> std::result::Result<(), String> {
    let k = pattern.size();
    if e.images.len() != k {
        return Err(format!(
            "embedding has {} images for {k} points",
            e.images.len()
        ));
    }
    for (a, s) in e.images.iter().enumerate() {
        if !host.contains(s) {
            return Err(format!("image {s} of point {a} is not in the host family"));
        }
    }
    for a in 0..k {
        for b in 0..k {
            if a != b && e.images[a] == e.images[b] {
                return Err(format!("points {a} and {b} share image {}", e.images[a]));
            }
            let want = pattern.leq(a, b);
            let got = e.images[a].is_subset(e.images[b]);
            if want != got {
                return Err(format!(
                    "points {a},{b}: pattern says {want}, images {} ⊆ {} is {got}",
                    e.images[a], e.images[b]
                ));
            }
        }
    }
    Ok(())
}

/// Strict inclusion relations among a list of sets, as one bit row per set.
pub(crate) struct Relations {
    len: usize,
    words: usize,
    above: Vec<u64>,
    below: Vec<u64>,
    incomparable: Vec<u64>,
}

impl Relations {
    pub fn new(members: &[Subset]) -> Self {
        let len = members.len();
        let words = len.div_ceil(64).max(1);
        let mut above = vec![0u64; len * words];
        let mut below = vec![0u64; len * words];
        let mut incomparable = vec![0u64; len * words];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i + 1) {
                let (wi, bi) = (j / 64, 1u64 << (j % 64));
                let (wj, bj) = (i / 64, 1u64 << (i % 64));
                if a.is_subset(b) {
                    above[i * words + wi] |= bi;
                    below[j * words + wj] |= bj;
                } else if b.is_subset(a) {
                    below[i * words + wi] |= bi;
                    above[j * words + wj] |= bj;
                } else {
                    incomparable[i * words + wi] |= bi;
                    incomparable[j * words + wj] |= bj;
                }
            }
        }
        Relations {
            len,
            words,
            above,
            below,
            incomparable,
        }
    }

    #[inline]
    pub fn above(&self, i: usize) -> &[u64] {
        &self.above[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn below(&self, i: usize) -> &[u64] {
        &self.below[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn incomparable(&self, i: usize) -> &[u64] {
        &self.incomparable[i * self.words..(i + 1) * self.words]
    }

    fn all(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.words];
        for i in 0..self.len {
            v[i / 64] |= 1 << (i % 64);
        }
        v
    }
}

#[inline]
fn and_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

#[inline]
fn first_common(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter().zip(b).enumerate().find_map(|(w, (x, y))| {
        let z = x & y;
        (z != 0).then(|| w * 64 + z.trailing_zeros() as usize)
    })
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let t = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + t)
        })
    })
}

/// Backtracking matcher over a fixed host list.
struct Matcher<'a> {
    members: &'a [Subset],
    rel: Relations,
    pattern: &'a PatternPoset,
    order: Vec<usize>,
    required: Option<usize>,
    assignment: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(members: &'a [Subset], pattern: &'a PatternPoset, required: Option<usize>) -> Self {
        Matcher {
            members,
            rel: Relations::new(members),
            pattern,
            order: pattern.linear_extension(),
            required,
            assignment: vec![usize::MAX; pattern.size()],
        }
    }

    fn run(mut self) -> Option<Embedding> {
        if self.members.len() < self.pattern.size() {
            return None;
        }
        if self.extend(0, false) {
            let images = self.assignment.iter().map(|&i| self.members[i]).collect();
            Some(Embedding { images })
        } else {
            None
        }
    }

    /// Can the required member still be placed at some unassigned point?
    fn required_placeable(&self, depth: usize, req: usize) -> bool {
        let s = self.members[req];
        self.order[depth..].iter().any(|&q| {
            self.order[..depth].iter().all(|&r| {
                let t = self.members[self.assignment[r]];
                self.pattern.leq(r, q) == t.is_subset(s) && self.pattern.leq(q, r) == s.is_subset(t)
            })
        })
    }

    fn extend(&mut self, depth: usize, required_used: bool) -> bool {
        if depth == self.order.len() {
            return self.required.is_none() || required_used;
        }
        if let Some(req) = self.required {
            if !required_used && !self.required_placeable(depth, req) {
                return false;
            }
        }
        let q = self.order[depth];
        let mut cand = self.rel.all();
        for &r in &self.order[..depth] {
            let img = self.assignment[r];
            let row = if self.pattern.lt(r, q) {
                self.rel.above(img)
            } else if self.pattern.lt(q, r) {
                self.rel.below(img)
            } else {
                self.rel.incomparable(img)
            };
            and_into(&mut cand, row);
        }
        for i in ones(&cand).collect::<Vec<_>>() {
            self.assignment[q] = i;
            if self.extend(depth + 1, required_used || Some(i) == self.required) {
                return true;
            }
        }
        self.assignment[q] = usize::MAX;
        false
    }
}

/// First induced copy of `pattern` in `f`, if any.
pub fn find_induced(f: &SetFamily, pattern: &PatternPoset) -> Option<Embedding> {
    Matcher::new(f.members(), pattern, None).run()
}

/// First induced copy of `pattern` in `f ∪ {s}` whose image contains `s`.
pub fn find_induced_using(
    f: &SetFamily,
    s: Subset,
    pattern: &PatternPoset,
) -> Result<Option<Embedding>> {
    let (host, at) = host_with(f, s)?;
    Ok(Matcher::new(&host, pattern, Some(at)).run())
}

fn host_with(f: &SetFamily, s: Subset) -> Result<(Vec<Subset>, usize)> {
    match f.position(s) {
        Ok(_) => Err(Error::AlreadyMember(s)),
        Err(at) => {
            let mut host = Vec::with_capacity(f.len() + 1);
            host.extend_from_slice(&f.members()[..at]);
            host.push(s);
            host.extend_from_slice(&f.members()[at..]);
            Ok((host, at))
        }
    }
}

/// Diamond search on a host list. Witnesses are `(bottom, middle, middle,
/// top)` and lexicographically first, matching [`find_induced`] on
/// [`PatternPoset::diamond`].
fn diamond_in(members: &[Subset], required: Option<usize>) -> Option<Embedding> {
    if members.len() < 4 {
        return None;
    }
    let rel = Relations::new(members);
    for b in 0..members.len() {
        for c in ones(rel.above(b)) {
            // middles must be incomparable and both above b
            let mut mids: Vec<u64> = rel.above(b).to_vec();
            and_into(&mut mids, rel.incomparable(c));
            for d in ones(&mids) {
                let top = match required {
                    Some(r) if r != b && r != c && r != d => {
                        let ok = rel.above(c)[r / 64] >> (r % 64) & 1 == 1
                            && rel.above(d)[r / 64] >> (r % 64) & 1 == 1;
                        ok.then_some(r)
                    }
                    _ => first_common(rel.above(c), rel.above(d)),
                };
                if let Some(e) = top {
                    return Some(Embedding {
                        images: vec![members[b], members[c], members[d], members[e]],
                    });
                }
            }
        }
    }
    None
}

/// Specialized diamond detector; same contract as
/// `find_induced(f, &PatternPoset::diamond())`.
pub fn find_diamond(f: &SetFamily) -> Option<Embedding> {
    diamond_in(f.members(), None)
}

/// Diamond through `s` in `f ∪ {s}`.
pub fn find_diamond_using(f: &SetFamily, s: Subset) -> Result<Option<Embedding>> {
    let (host, at) = host_with(f, s)?;
    Ok(diamond_in(&host, Some(at)))
}

/// Dispatches to the diamond detector when the pattern is the canonically
/// labelled diamond, otherwise to the generic matcher.
pub fn find_copy(f: &SetFamily, pattern: &PatternPoset) -> Option<Embedding> {
    if pattern.is_diamond() {
        find_diamond(f)
    } else {
        find_induced(f, pattern)
    }
}

/// Like [`find_copy`] for copies through a set outside `f`.
pub fn find_copy_using(
    f: &SetFamily,
    s: Subset,
    pattern: &PatternPoset,
) -> Result<Option<Embedding>> {
    if pattern.is_diamond() {
        find_diamond_using(f, s)
    } else {
        find_induced_using(f, s, pattern)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists.iter().map(|l| l.iter().copied())).unwrap()
    }

    fn sets(lists: &[&[usize]]) -> Vec<Subset> {
        lists
            .iter()
            .map(|l| Subset::from_elements(8, l.iter().copied()).unwrap())
            .collect()
    }

    #[test]
    fn power_set_of_two_is_a_diamond() {
        let f = SetFamily::power_set(2).unwrap();
        let want = sets(&[&[], &[1], &[2], &[1, 2]]);
        let d = PatternPoset::diamond();
        assert_eq!(find_induced(&f, &d).unwrap().images(), &want[..]);
        assert_eq!(find_diamond(&f).unwrap().images(), &want[..]);
    }

    #[test]
    fn chain_has_no_diamond() {
        let f = SetFamily::maximal_chain(3).unwrap();
        assert_eq!(find_induced(&f, &PatternPoset::diamond()), None);
        assert_eq!(find_diamond(&f), None);
    }

    #[test]
    fn no_common_top() {
        let f = fam(3, &[&[1], &[2], &[1, 3], &[2, 3]]);
        assert_eq!(find_diamond(&f), None);
        assert_eq!(find_induced(&f, &PatternPoset::diamond()), None);
    }

    #[test]
    fn using_examples() {
        let d = PatternPoset::diamond();
        let want = sets(&[&[], &[1], &[2], &[1, 2]]);
        let f = fam(2, &[&[], &[1], &[2]]);
        let s = Subset::full(2);
        assert_eq!(
            find_induced_using(&f, s, &d).unwrap().unwrap().images(),
            &want[..]
        );
        assert_eq!(
            find_diamond_using(&f, s).unwrap().unwrap().images(),
            &want[..]
        );

        let chain = fam(3, &[&[], &[1], &[1, 2]]);
        let two = Subset::singleton(2);
        assert_eq!(
            find_induced_using(&chain, two, &d)
                .unwrap()
                .unwrap()
                .images(),
            &want[..]
        );
        assert_eq!(
            find_diamond_using(&chain, two).unwrap().unwrap().images(),
            &want[..]
        );

        assert_eq!(
            find_induced_using(&chain, Subset::EMPTY, &d),
            Err(Error::AlreadyMember(Subset::EMPTY))
        );
    }

    #[test]
    fn using_ignores_copies_avoiding_the_new_set() {
        // the power set of {1,2} already holds a diamond; {3} joins none
        let f = SetFamily::power_set(2).unwrap();
        let f = SetFamily::from_sets(3, f.iter()).unwrap();
        let s = Subset::singleton(3);
        assert_eq!(
            find_induced_using(&f, s, &PatternPoset::diamond()).unwrap(),
            None
        );
        assert_eq!(find_diamond_using(&f, s).unwrap(), None);
    }

    #[test]
    fn required_top_is_not_replaced_by_earlier_top() {
        // ∅,{1},{2} with tops {1,2} (member) and s = {1,2,3}
        let f = fam(3, &[&[], &[1], &[2], &[1, 2]]);
        let s = Subset::full(3);
        let e = find_diamond_using(&f, s).unwrap().unwrap();
        assert_eq!(e.image(3), s);
        assert_eq!(
            e,
            find_induced_using(&f, s, &PatternPoset::diamond())
                .unwrap()
                .unwrap()
        );
    }

    #[test]
    fn validator_rejects_bad_maps() {
        let host = sets(&[&[], &[1], &[2], &[1, 2]]);
        let d = PatternPoset::diamond();
        assert!(validate_embedding(&host, &d, &Embedding::new(host.clone())).is_ok());
        let swapped = Embedding::new(vec![host[1], host[0], host[2], host[3]]);
        assert!(validate_embedding(&host, &d, &swapped).is_err());
        let repeated = Embedding::new(vec![host[0], host[1], host[1], host[3]]);
        assert!(validate_embedding(&host, &d, &repeated).is_err());
        let foreign = Embedding::new(sets(&[&[], &[1], &[3], &[1, 3]]));
        assert!(validate_embedding(&host, &d, &foreign).is_err());
    }

    #[test]
    fn lambda_uses_linear_extension() {
        let f = fam(2, &[&[1], &[2], &[1, 2]]);
        let e = find_induced(&f, &PatternPoset::lambda()).unwrap();
        assert_eq!(e.images(), &sets(&[&[1, 2], &[1], &[2]])[..]);
        assert!(validate_embedding(f.members(), &PatternPoset::lambda(), &e).is_ok());
    }

    #[test]
    fn witness_json() {
        let f = SetFamily::power_set(2).unwrap();
        let e = find_diamond(&f).unwrap();
        let json = serde_json::to_string(&e.to_json("diamond")).unwrap();
        assert_eq!(
            json,
            r#"{"pattern":"diamond","map":[{"point":0,"set":[]},{"point":1,"set":[1]},{"point":2,"set":[2]},{"point":3,"set":[1,2]}]}"#
        );
    }

    #[test]
    fn large_host_crosses_word_boundary() {
        // 70 singletons-and-pairs plus one top: diamonds need members past index 64
        let n = 12;
        let mut f = SetFamily::new(n).unwrap();
        for s in crate::family::subsets_of_size(n, 2).take(70) {
            f.insert(s).unwrap();
        }
        assert_eq!(find_diamond(&f), None);
        let s = Subset::full(n);
        let e = find_diamond_using(&f, Subset::singleton(12).without(12)).unwrap();
        assert_eq!(e, None);
        f.insert(Subset::EMPTY).unwrap();
        let e = find_diamond_using(&f, s).unwrap().unwrap();
        assert_eq!(
            e,
            find_induced_using(&f, s, &PatternPoset::diamond())
                .unwrap()
                .unwrap()
        );
        assert!(
            validate_embedding(f.with(s).unwrap().members(), &PatternPoset::diamond(), &e).is_ok()
        );
    }
}
