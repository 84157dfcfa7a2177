//! Independent oracles shared by the integration suites. Nothing here goes
//! through the library's clone search, point encoding, or enumeration.

#![allow(dead_code)]

use std::collections::HashMap;

use eqdomain::Semigroup;
use rand::Rng;

/// Every `n×n` table over `0..n`, filtered by a direct associativity check.
pub fn brute_force_tables(n: usize) -> Vec<Vec<u8>> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut t = vec![0u8; cells];
            for slot in t.iter_mut().rev() {
                *slot = (code % n) as u8;
                code /= n;
            }
            t
        })
        .filter(|t| {
            let at = |x: usize, y: usize| t[x * n + y] as usize;
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| at(at(x, y), z) == at(x, at(y, z)))))
        })
        .collect()
}

/// All points of `S^k` in lexicographic order.
pub fn all_points(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut points = vec![vec![]];
    for _ in 0..k {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    points
}

pub fn in_m3(p: &[usize]) -> bool {
    p[0] == p[1] || p[0] == p[2]
}

pub fn in_m4(p: &[usize]) -> bool {
    p[0] == p[1] || p[2] == p[3]
}

/// Closure of `member` (indexed like [`all_points`]) from every raw word of
/// length `1..=max_len`: words are never deduplicated, and every pair of words
/// that agree on the set contributes its equality set. Pairs within an
/// agreement class are covered through the class's first word, since
/// equality is transitive.
pub fn naive_closure(s: &Semigroup, k: usize, member: &[bool], max_len: usize) -> Vec<bool> {
    let n = s.order();
    let points = all_points(n, k);
    assert_eq!(points.len(), member.len());
    let inside: Vec<usize> = (0..points.len()).filter(|&i| member[i]).collect();
    let mut closure = vec![true; points.len()];
    let mut first_by_key: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    let mut level: Vec<Vec<u8>> =
        (0..k).map(|v| points.iter().map(|p| p[v] as u8).collect()).collect();
    for len in 1..=max_len {
        for values in &level {
            let key: Vec<u8> = inside.iter().map(|&i| values[i]).collect();
            match first_by_key.get(&key) {
                None => {
                    first_by_key.insert(key, values.clone());
                }
                Some(first) => {
                    for (i, c) in closure.iter_mut().enumerate() {
                        *c &= first[i] == values[i];
                    }
                }
            }
        }
        if len == max_len {
            break;
        }
        let points = &points;
        level = level
            .iter()
            .flat_map(|w| {
                (0..k).map(move |v| {
                    w.iter().zip(points).map(|(&x, p)| s.mul(x as usize, p[v]) as u8).collect()
                })
            })
            .collect();
    }
    closure
}

/// A random subset of `S^k`, with density drawn per call so that both sparse
/// and dense sets show up.
pub fn random_membership(rng: &mut impl Rng, size: usize) -> Vec<bool> {
    let density: f64 = rng.random_range(0.0..1.0);
    (0..size).map(|_| rng.random_bool(density)).collect()
}
