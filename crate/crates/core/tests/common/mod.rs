//! Independent brute-force oracles over letter strings. Nothing here goes
//! through the library's symplectic or code machinery.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Product of two letters up to phase.
pub fn letter_mul(a: char, b: char) -> char {
    match (a, b) {
        ('I', c) | (c, 'I') => c,
        (x, y) if x == y => 'I',
        ('X', 'Y') | ('Y', 'X') => 'Z',
        ('Y', 'Z') | ('Z', 'Y') => 'X',
        ('X', 'Z') | ('Z', 'X') => 'Y',
        _ => panic!("bad letters {a}{b}"),
    }
}

pub fn mul(a: &str, b: &str) -> String {
    a.chars().zip(b.chars()).map(|(x, y)| letter_mul(x, y)).collect()
}

pub fn anticommutes(a: &str, b: &str) -> bool {
    a.chars().zip(b.chars()).filter(|&(x, y)| x != 'I' && y != 'I' && x != y).count() % 2 == 1
}

pub fn weight(a: &str) -> usize {
    a.chars().filter(|&c| c != 'I').count()
}

pub fn all_strings(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|s| LETTERS.iter().map(move |&l| format!("{s}{l}"))).collect();
    }
    out
}

/// Every product of a subset of `gens`, duplicates kept.
pub fn span(gens: &[String]) -> Vec<String> {
    let n = gens.first().map_or(0, |g| g.len());
    (0..1usize << gens.len())
        .map(|mask| {
            (0..gens.len())
                .filter(|i| mask >> i & 1 == 1)
                .fold("I".repeat(n), |acc, i| mul(&acc, &gens[i]))
        })
        .collect()
}

pub fn random_string(r: &mut StdRng, n: usize) -> String {
    (0..n).map(|_| LETTERS[r.gen_range(0..4)]).collect()
}

/// Minimum weight of a non-identity string commuting with every generator.
pub fn dual_distance(n: usize, gens: &[String]) -> Option<usize> {
    all_strings(n)
        .into_iter()
        .filter(|s| weight(s) > 0 && gens.iter().all(|g| !anticommutes(s, g)))
        .map(|s| weight(&s))
        .min()
}

/// Every `t` columns show each of the `4^t` letter tuples equally often.
pub fn has_strength(rows: &[String], t: usize) -> bool {
    let n = rows[0].len();
    if t > n {
        return false;
    }
    let cells = 4usize.pow(t as u32);
    if rows.len() % cells != 0 {
        return false;
    }
    let want = rows.len() / cells;
    column_subsets(n, t).iter().all(|cols| {
        let mut count = vec![0usize; cells];
        for r in rows {
            let chars: Vec<char> = r.chars().collect();
            let idx = cols
                .iter()
                .fold(0, |acc, &c| acc * 4 + LETTERS.iter().position(|&l| l == chars[c]).unwrap());
            count[idx] += 1;
        }
        count.iter().all(|&k| k == want)
    })
}

pub fn strength(rows: &[String]) -> usize {
    let n = rows[0].len();
    (0..=n).rev().find(|&t| has_strength(rows, t)).unwrap()
}

pub fn column_subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == t)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Least `e` with `base^e ≥ v`.
pub fn ceil_log(base: usize, v: usize) -> usize {
    let mut e = 0;
    let mut p = 1usize;
    while p < v {
        p *= base;
        e += 1;
    }
    e
}
