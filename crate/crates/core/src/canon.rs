//! Relabeling-invariant keys for set families.
//!
//! The key of a family is the lexicographically smallest canonically sorted
//! image of the family over a set of ground-set permutations. For `n <= 8`
//! that set is all `n!` permutations. Above 8 the elements are first split
//! into cells by an isomorphism-invariant refinement and only permutations
//! that map cells onto their own position blocks are tried; since the cells
//! are computed invariantly this is still exact, just cheaper when cells
//! are small.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::family::{SetFamily, Subset};

pub const BRUTE_FORCE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    key: Vec<u64>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The canonical representative of the orbit.
    pub fn family(&self) -> SetFamily {
        SetFamily::from_sets(self.n, self.key.iter().map(|&m| Subset(m)))
            .expect("key holds valid subsets")
    }

    pub fn key(&self) -> &[u64] {
        &self.key
    }
}

/// Permutation tables for one ground size: `image[p * 2^n + mask]`.
struct PermTable {
    count: usize,
    size: usize,
    image: Vec<u8>,
}

fn perm_table(n: usize) -> &'static PermTable {
    static TABLES: [OnceLock<PermTable>; BRUTE_FORCE_CAP + 1] =
        [const { OnceLock::new() }; BRUTE_FORCE_CAP + 1];
    TABLES[n].get_or_init(|| {
        let perms = permutations(n);
        let size = 1usize << n;
        let mut image = Vec::with_capacity(perms.len() * size);
        for p in &perms {
            for mask in 0..size {
                let mut out = 0u8;
                for (bit, &to) in p.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        out |= 1 << to;
                    }
                }
                image.push(out);
            }
        }
        PermTable {
            count: perms.len(),
            size,
            image,
        }
    })
}

/// Steps `p` to its lexicographic successor; false once `p` was the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..n)
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

#[inline]
fn sort_key(m: u64) -> (u32, u64) {
    (m.count_ones(), m)
}

fn sort_canonical(v: &mut [u64]) {
    v.sort_unstable_by_key(|&m| sort_key(m));
}

fn cmp_images(a: &[u64], b: &[u64]) -> Ordering {
    a.iter()
        .map(|&m| sort_key(m))
        .cmp(b.iter().map(|&m| sort_key(m)))
}

pub fn canonical_form(f: &SetFamily) -> CanonicalForm {
    canonical_form_of(f.n(), f.members())
}

pub(crate) fn canonical_form_of(n: usize, members: &[Subset]) -> CanonicalForm {
    let key = if n <= BRUTE_FORCE_CAP {
        brute_force(n, members)
    } else {
        refined(n, members)
    };
    CanonicalForm { n, key }
}

fn brute_force(n: usize, members: &[Subset]) -> Vec<u64> {
    let table = perm_table(n);
    let mut best: Vec<u64> = members.iter().map(|s| s.mask()).collect();
    sort_canonical(&mut best);
    let mut scratch = vec![0u64; members.len()];
    for p in 0..table.count {
        let row = &table.image[p * table.size..(p + 1) * table.size];
        for (dst, s) in scratch.iter_mut().zip(members) {
            *dst = row[s.mask() as usize] as u64;
        }
        sort_canonical(&mut scratch);
        if cmp_images(&scratch, &best) == Ordering::Less {
            best.copy_from_slice(&scratch);
        }
    }
    best
}

/// Ordered partition of the ground set by an invariant refined until stable.
fn element_cells(n: usize, members: &[Subset]) -> Vec<Vec<usize>> {
    // initial colour: how many members of each size contain the element
    let mut colour: Vec<u64> = (1..=n)
        .map(|i| {
            let mut profile = vec![0u64; n + 1];
            for s in members.iter().filter(|s| s.contains(i)) {
                profile[s.len()] += 1;
            }
            hash_seq(&profile)
        })
        .collect();
    loop {
        let distinct_before = count_distinct(&colour);
        let next: Vec<u64> = (1..=n)
            .map(|i| {
                let mut seen: Vec<u64> = members
                    .iter()
                    .filter(|s| s.contains(i))
                    .map(|s| {
                        let mut inner: Vec<u64> = s.elements().map(|e| colour[e - 1]).collect();
                        inner.sort_unstable();
                        hash_seq(&inner)
                    })
                    .collect();
                seen.sort_unstable();
                hash_seq(&[colour[i - 1], hash_seq(&seen)])
            })
            .collect();
        if count_distinct(&next) == distinct_before {
            break;
        }
        colour = next;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| colour[i]);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match cells.last_mut() {
            Some(cell) if colour[cell[0]] == colour[i] => cell.push(i),
            _ => cells.push(vec![i]),
        }
    }
    cells
}

fn count_distinct(v: &[u64]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

fn hash_seq(v: &[u64]) -> u64 {
    // FNV-1a over the words; deterministic across runs and platforms
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in v {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn refined(n: usize, members: &[Subset]) -> Vec<u64> {
    let cells = element_cells(n, members);
    // target positions: cell c occupies a contiguous block
    let mut block_start = Vec::with_capacity(cells.len());
    let mut pos = 0;
    for c in &cells {
        block_start.push(pos);
        pos += c.len();
    }
    let mut assignment = vec![0usize; n];
    let mut best: Option<Vec<u64>> = None;
    let mut scratch = vec![0u64; members.len()];
    let mut cell_perms: Vec<Vec<usize>> = cells.iter().map(|c| (0..c.len()).collect()).collect();
    loop {
        for (c, cell) in cells.iter().enumerate() {
            for (k, &e) in cell.iter().enumerate() {
                assignment[e] = block_start[c] + cell_perms[c][k];
            }
        }
        for (dst, s) in scratch.iter_mut().zip(members) {
            *dst = s
                .elements()
                .fold(0u64, |acc, e| acc | 1 << assignment[e - 1]);
        }
        sort_canonical(&mut scratch);
        if best
            .as_ref()
            .is_none_or(|b| cmp_images(&scratch, b) == Ordering::Less)
        {
            best = Some(scratch.clone());
        }
        // odometer: a cell that wraps around resets to identity and carries
        let mut c = 0;
        loop {
            if c == cells.len() {
                return best.unwrap_or_default();
            }
            if next_permutation(&mut cell_perms[c]) {
                break;
            }
            cell_perms[c].sort_unstable();
            c += 1;
        }
    }
}

/// Applies a permutation of `1..=n` (given 0-based, `perm[i]` = image of
/// element `i + 1`) to every member.
pub fn relabel(f: &SetFamily, perm: &[usize]) -> SetFamily {
    SetFamily::from_sets(
        f.n(),
        f.iter()
            .map(|s| Subset(s.elements().fold(0u64, |acc, e| acc | 1 << perm[e - 1]))),
    )
    .expect("permutation keeps sets inside [n]")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists.iter().map(|l| l.iter().copied())).unwrap()
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[5], vec![2, 1, 0]);
    }

    #[test]
    fn isomorphic_families_share_keys() {
        let f = fam(4, &[&[1], &[1, 2], &[3, 4]]);
        let g = fam(4, &[&[4], &[2, 4], &[1, 3]]);
        assert_eq!(canonical_form(&f), canonical_form(&g));
        let h = fam(4, &[&[1], &[2, 3], &[3, 4]]);
        assert_ne!(canonical_form(&f), canonical_form(&h));
    }

    #[test]
    fn all_chains_collapse() {
        let chain = SetFamily::maximal_chain(5).unwrap();
        let key = canonical_form(&chain);
        let g = relabel(&chain, &[4, 2, 0, 3, 1]);
        assert_ne!(g, chain);
        assert_eq!(canonical_form(&g), key);
        assert_eq!(canonical_form(&key.family()), key);
    }

    #[test]
    fn refined_regime_matches_orbits() {
        let f = fam(10, &[&[1, 2], &[3], &[4, 5, 6], &[1, 2, 3, 10]]);
        let g = relabel(&f, &[9, 8, 7, 6, 5, 4, 3, 2, 1, 0]);
        assert_eq!(canonical_form(&f), canonical_form(&g));
        let h = fam(10, &[&[1, 2], &[3], &[4, 5, 6], &[1, 2, 4, 10]]);
        assert_ne!(canonical_form(&f), canonical_form(&h));
    }
}
