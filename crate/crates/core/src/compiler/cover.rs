//! Minimum generator subsets that detect every unwanted term.

use serde::{Deserialize, Serialize};

use crate::field::PauliString;
use crate::{Error, Result};

/// Above this many candidates the cover is greedy.
pub const EXACT_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    /// Indices into the candidate list, ascending.
    pub chosen: Vec<usize>,
    pub generators: Vec<PauliString>,
    pub exact: bool,
    /// Proven lower bound on the optimum; equals `chosen.len()` when exact.
    pub lower_bound: usize,
}

impl Cover {
    pub fn gap(&self) -> usize {
        self.chosen.len() - self.lower_bound
    }
}

type Bits = Vec<u64>;

fn covers_of(candidates: &[PauliString], terms: &[PauliString]) -> Vec<Bits> {
    let words = terms.len().div_ceil(64);
    candidates
        .iter()
        .map(|c| {
            let mut b = vec![0u64; words];
            for (j, t) in terms.iter().enumerate() {
                if c.anticommutes(t) {
                    b[j / 64] |= 1 << (j % 64);
                }
            }
            b
        })
        .collect()
}

fn first_uncovered(covered: &Bits, n: usize) -> impl Iterator<Item = usize> + '_ {
    (0..n).filter(move |&j| covered[j / 64] >> (j % 64) & 1 == 0)
}

fn or(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

/// Smallest candidate subset such that every term anticommutes with a chosen
/// generator. Among optimal covers the one with the least total weight wins,
/// then the lexicographically least index list.
pub fn min_cover(candidates: &[PauliString], h_perp: &[PauliString]) -> Result<Cover> {
    for t in h_perp {
        if let Some(c) = candidates.iter().find(|c| c.len() != t.len()) {
            return Err(Error::LengthMismatch(c.len(), t.len()));
        }
        if !candidates.iter().any(|c| c.anticommutes(t)) {
            return Err(Error::Infeasible(t.clone()));
        }
    }
    let covers = covers_of(candidates, h_perp);
    let chosen = if candidates.len() <= EXACT_LIMIT {
        exact(candidates, &covers, h_perp.len())
    } else {
        greedy(candidates, &covers, h_perp.len())
    };
    let exact = candidates.len() <= EXACT_LIMIT;
    let lower_bound = if exact { chosen.len() } else { lower_bound(&covers, h_perp.len()) };
    Ok(Cover {
        generators: chosen.iter().map(|&i| candidates[i].clone()).collect(),
        chosen,
        exact,
        lower_bound,
    })
}

fn exact(candidates: &[PauliString], covers: &[Bits], n: usize) -> Vec<usize> {
    let words = n.div_ceil(64);
    for k in 0..=candidates.len() {
        let mut found: Vec<Vec<usize>> = Vec::new();
        branch(covers, n, &vec![0u64; words], &mut Vec::new(), k, &mut found);
        if !found.is_empty() {
            for f in found.iter_mut() {
                f.sort();
            }
            found.sort();
            found.dedup();
            let weight = |s: &Vec<usize>| s.iter().map(|&i| candidates[i].weight()).sum::<usize>();
            return found.into_iter().min_by_key(|s| (weight(s), s.clone())).unwrap();
        }
    }
    unreachable!("feasibility was checked")
}

/// Branches on the uncovered term with the fewest remaining covers.
fn branch(covers: &[Bits], n: usize, covered: &Bits, cur: &mut Vec<usize>, left: usize, found: &mut Vec<Vec<usize>>) {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for j in first_uncovered(covered, n) {
        let options: Vec<usize> = (0..covers.len())
            .filter(|&i| covers[i][j / 64] >> (j % 64) & 1 == 1 && !cur.contains(&i))
            .collect();
        if best.as_ref().is_none_or(|(c, _)| options.len() < *c) {
            best = Some((options.len(), options));
        }
    }
    let Some((_, options)) = best else {
        found.push(cur.clone());
        return;
    };
    if left == 0 {
        return;
    }
    for i in options {
        cur.push(i);
        branch(covers, n, &or(covered, &covers[i]), cur, left - 1, found);
        cur.pop();
    }
}

fn count_new(cover: &Bits, covered: &Bits) -> u32 {
    cover.iter().zip(covered).map(|(c, d)| (c & !d).count_ones()).sum()
}

fn greedy(candidates: &[PauliString], covers: &[Bits], n: usize) -> Vec<usize> {
    let words = n.div_ceil(64);
    let mut covered = vec![0u64; words];
    let mut chosen = Vec::new();
    while first_uncovered(&covered, n).next().is_some() {
        let i = (0..covers.len())
            .filter(|i| !chosen.contains(i))
            .max_by_key(|&i| {
                (count_new(&covers[i], &covered), std::cmp::Reverse(candidates[i].weight()), std::cmp::Reverse(i))
            })
            .unwrap();
        covered = or(&covered, &covers[i]);
        chosen.push(i);
    }
    // Drop members made redundant by later picks.
    let mut k = 0;
    while k < chosen.len() {
        let rest: Vec<usize> = chosen.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &i)| i).collect();
        let union = rest.iter().fold(vec![0u64; words], |acc, &i| or(&acc, &covers[i]));
        if first_uncovered(&union, n).next().is_none() {
            chosen.remove(k);
        } else {
            k += 1;
        }
    }
    chosen.sort();
    chosen
}

fn lower_bound(covers: &[Bits], n: usize) -> usize {
    let max = covers.iter().map(|c| c.iter().map(|w| w.count_ones() as usize).sum::<usize>()).max().unwrap_or(0);
    if n == 0 {
        0
    } else {
        n.div_ceil(max.max(1))
    }
}
