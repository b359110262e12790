//! Brute-force oracles that work on raw twice-values and share no code
//! with the library's contour algorithms.

#![allow(dead_code)]

use std::collections::HashMap;

pub fn diam(block: &[i64]) -> i64 {
    (block.iter().max().unwrap() - block.iter().min().unwrap()) / 2
}

pub fn dist(a: &[i64], b: &[i64]) -> i64 {
    a.iter().flat_map(|x| b.iter().map(move |y| (x - y).abs())).min().unwrap() / 2
}

pub fn separated(a: &[i64], b: &[i64], m: f64, alpha: f64) -> bool {
    dist(a, b) as f64 > m * (diam(a).min(diam(b)) as f64).powf(alpha)
}

/// Calls `visit` on every set partition of `items` into even blocks whose
/// blocks are pairwise separated. Partial blocks that already fail the
/// separation test are pruned: adding points only shrinks distances and
/// grows diameters.
pub fn separated_even_partitions(items: &[i64], m: f64, a: f64, visit: &mut dyn FnMut(&[Vec<i64>]) -> bool) {
    let mut blocks: Vec<Vec<i64>> = Vec::new();
    recurse(items, 0, m, a, &mut blocks, visit);
}

/// Returns false once `visit` asks to stop.
fn recurse(items: &[i64], i: usize, m: f64, a: f64, blocks: &mut Vec<Vec<i64>>, visit: &mut dyn FnMut(&[Vec<i64>]) -> bool) -> bool {
    let odd = blocks.iter().filter(|b| b.len() % 2 == 1).count();
    if odd > items.len() - i {
        return true;
    }
    if i == items.len() {
        return visit(blocks);
    }
    let x = items[i];
    for k in 0..blocks.len() {
        blocks[k].push(x);
        let ok = (0..blocks.len()).all(|j| j == k || separated(&blocks[k], &blocks[j], m, a));
        if ok && !recurse(items, i + 1, m, a, blocks, visit) {
            blocks[k].pop();
            return false;
        }
        blocks[k].pop();
    }
    blocks.push(vec![x]);
    let ok = (0..blocks.len() - 1).all(|j| separated(&blocks[blocks.len() - 1], &blocks[j], m, a));
    let keep_going = !ok || recurse(items, i + 1, m, a, blocks, visit);
    blocks.pop();
    keep_going
}

/// The full definition: no decomposition into two or more even blocks that
/// are pairwise separated.
pub fn irreducible_by_definition(gamma: &[i64], m: f64, a: f64) -> bool {
    let mut found = false;
    separated_even_partitions(gamma, m, a, &mut |blocks| {
        if blocks.len() >= 2 {
            found = true;
            return false;
        }
        true
    });
    !found
}

/// Every valid (M,a)-partition of `flips`, each as sorted blocks in sorted order.
pub fn valid_partitions(flips: &[i64], m: f64, a: f64, memo: &mut HashMap<Vec<i64>, bool>) -> Vec<Vec<Vec<i64>>> {
    let mut candidates = Vec::new();
    separated_even_partitions(flips, m, a, &mut |blocks| {
        candidates.push(blocks.to_vec());
        true
    });
    let mut out = Vec::new();
    for mut blocks in candidates {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        let all_irreducible = blocks.iter().all(|b| {
            if let Some(&v) = memo.get(b) {
                return v;
            }
            let v = irreducible_by_definition(b, m, a);
            memo.insert(b.clone(), v);
            v
        });
        if all_irreducible {
            blocks.sort();
            out.push(blocks);
        }
    }
    out
}

/// Even subsets (non-empty, at most `cap` elements) of `pool`, which must be sorted.
pub fn even_subsets(pool: &[i64], cap: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    fn go(pool: &[i64], from: usize, cap: usize, buf: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if !buf.is_empty() && buf.len() % 2 == 0 {
            out.push(buf.clone());
        }
        if buf.len() == cap {
            return;
        }
        for i in from..pool.len() {
            buf.push(pool[i]);
            go(pool, i + 1, cap, buf, out);
            buf.pop();
        }
    }
    go(pool, 0, cap, &mut buf, &mut out);
    out
}

/// Flip sets with first flip at 1/2, `|γ| ≤ cap`, diameter ≤ `max_diam`.
pub fn anchored_sets(cap: usize, max_diam: i64) -> Vec<Vec<i64>> {
    let pool: Vec<i64> = (1..=max_diam).map(|d| 2 * d + 1).collect();
    let mut out = Vec::new();
    let mut buf = vec![1i64];
    fn go(pool: &[i64], from: usize, cap: usize, buf: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if buf.len() % 2 == 0 {
            out.push(buf.clone());
        }
        if buf.len() == cap {
            return;
        }
        for i in from..pool.len() {
            buf.push(pool[i]);
            go(pool, i + 1, cap, buf, out);
            buf.pop();
        }
    }
    go(&pool, 0, cap, &mut buf, &mut out);
    out
}

#[test]
fn oracle_sanity() {
    // two far pairs split; two near pairs do not
    assert!(!irreducible_by_definition(&[1, 3, 11, 13], 2.0, 1.5));
    assert!(irreducible_by_definition(&[1, 3, 5, 7], 2.0, 1.5));
    assert!(irreducible_by_definition(&[1, 3], 2.0, 1.5));
    let mut memo = HashMap::new();
    assert_eq!(valid_partitions(&[1, 3, 11, 13], 2.0, 1.5, &mut memo), vec![vec![vec![1, 3], vec![11, 13]]]);
    assert_eq!(even_subsets(&[1, 3, 5, 7], 4).len(), 7);
    assert_eq!(anchored_sets(2, 5).len(), 5);
}
