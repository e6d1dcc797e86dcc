//! Brute-force reference implementations shared by the integration tests.
//! None of these reuse library search code; they only use the plain data
//! types.

#![allow(dead_code)]

use posat::family::{all_subsets, SetFamily, Subset};
use posat::PatternPoset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Induced copy by trying injective tuples point by point in label order,
/// checking every pair against the definition.
pub fn oracle_find(members: &[Subset], p: &PatternPoset) -> Option<Vec<Subset>> {
    let k = p.size();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    fn rec(members: &[Subset], p: &PatternPoset, chosen: &mut Vec<usize>) -> bool {
        let a = chosen.len();
        if a == p.size() {
            return true;
        }
        for i in 0..members.len() {
            if chosen.contains(&i) {
                continue;
            }
            let fits = chosen.iter().enumerate().all(|(b, &j)| {
                members[i].is_subset(members[j]) == p.leq(a, b)
                    && members[j].is_subset(members[i]) == p.leq(b, a)
            });
            if fits {
                chosen.push(i);
                if rec(members, p, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(members, p, &mut chosen).then(|| chosen.iter().map(|&i| members[i]).collect())
}

/// Definition check of a claimed copy: distinct members, order preserved
/// and reflected.
pub fn is_copy(members: &[Subset], p: &PatternPoset, images: &[Subset]) -> bool {
    if images.len() != p.size() || !images.iter().all(|s| members.contains(s)) {
        return false;
    }
    for a in 0..images.len() {
        for b in 0..images.len() {
            if a != b && images[a] == images[b] {
                return false;
            }
            if images[a].is_subset(images[b]) != p.leq(a, b) {
                return false;
            }
        }
    }
    true
}

pub fn oracle_free(f: &SetFamily, p: &PatternPoset) -> bool {
    oracle_find(f.members(), p).is_none()
}

/// Free, and every missing subset of `[n]` completes a copy.
pub fn oracle_saturated(f: &SetFamily, p: &PatternPoset) -> bool {
    if !oracle_free(f, p) {
        return false;
    }
    all_subsets(f.n()).filter(|s| !f.contains(*s)).all(|s| {
        let mut host = f.members().to_vec();
        host.push(s);
        oracle_find(&host, p).is_some()
    })
}

/// Every labelled poset on `k` points.
pub fn all_posets(k: usize) -> Vec<PatternPoset> {
    let off: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u32..(1 << off.len()) {
        let mut rows: Vec<u16> = (0..k).map(|a| 1 << a).collect();
        for (i, &(a, b)) in off.iter().enumerate() {
            if bits >> i & 1 == 1 {
                rows[a] |= 1 << b;
            }
        }
        if PatternPoset::validate_rows(&rows).is_none() {
            out.push(PatternPoset::from_rows(rows).unwrap());
        }
    }
    out
}

/// One labelled poset per isomorphism class on `k` points.
pub fn poset_classes(k: usize) -> Vec<PatternPoset> {
    let mut reps: Vec<PatternPoset> = Vec::new();
    for p in all_posets(k) {
        if !reps.iter().any(|r| r.is_isomorphic(&p)) {
            reps.push(p);
        }
    }
    reps
}

pub fn random_family(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> SetFamily {
    let len = rng.gen_range(0..=max_len.min(1 << n));
    let sets: Vec<Subset> = (0..len)
        .map(|_| Subset(rng.gen_range(0..1u64 << n)))
        .collect();
    SetFamily::from_sets(n, sets).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cover pairs of the inclusion order on `members` by the cubic definition.
pub fn oracle_covers(members: &[Subset]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..members.len() {
        for j in 0..members.len() {
            if !members[i].is_strict_subset(members[j]) {
                continue;
            }
            let between = (0..members.len()).any(|m| {
                members[i].is_strict_subset(members[m]) && members[m].is_strict_subset(members[j])
            });
            if !between {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every saturated family drawn from `universe` of the smallest size that
/// has one, by enumerating subfamilies in size order. `None` if no
/// subfamily of `universe` is saturated.
pub fn oracle_minimum_saturated(
    n: usize,
    universe: &[Subset],
    p: &PatternPoset,
) -> Option<(usize, Vec<SetFamily>)> {
    for size in 0..=universe.len() {
        let mut found = Vec::new();
        for_each_combination(universe.len(), size, |idx| {
            let f = SetFamily::from_sets(n, idx.iter().map(|&i| universe[i])).unwrap();
            if oracle_saturated(&f, p) {
                found.push(f);
            }
        });
        if !found.is_empty() {
            return Some((size, found));
        }
    }
    None
}

pub fn for_each_combination(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return;
    }
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Relabeling-invariant key by trying every permutation of `[n]`.
pub fn oracle_orbit_key(f: &SetFamily) -> Vec<u64> {
    let n = f.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut img: Vec<u64> = f
            .iter()
            .map(|s| s.elements().fold(0u64, |acc, e| acc | 1 << p[e - 1]))
            .collect();
        img.sort_unstable_by_key(|&m| (m.count_ones(), m));
        let key: Vec<(u32, u64)> = img.iter().map(|&m| (m.count_ones(), m)).collect();
        let better = best
            .as_ref()
            .is_none_or(|b| key < b.iter().map(|&m| (m.count_ones(), m)).collect::<Vec<_>>());
        if better {
            best = Some(img);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == p.len() {
        visit(p);
        return;
    }
    for i in at..p.len() {
        p.swap(at, i);
        permute(p, at + 1, visit);
        p.swap(at, i);
    }
}
