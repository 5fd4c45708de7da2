//! Codes tailored to exchange and chirality couplings, and the `PG(2, 2)`
//! assignment search for three-generator exchange codes.

use std::collections::BTreeSet;

use super::{AdditiveCode, Alphabet};
use crate::field::{PauliString, F4};
use crate::{Error, Result};

/// Six-generator candidate pool on four colours.
pub const CHIRALITY_CANDIDATES: [&str; 6] = ["XXZY", "XZXZ", "ZXXZ", "ZZYX", "ZYZY", "YZZY"];
pub const CHIRALITY_4: [&str; 4] = ["XXZY", "XZXZ", "ZZYX", "ZYZY"];
pub const CHIRALITY_5: [&str; 4] = ["ZXXZY", "YZXXZ", "YZZYX", "XYZZY"];

pub fn chirality_candidates() -> AdditiveCode {
    AdditiveCode::from_strs(&CHIRALITY_CANDIDATES, Alphabet::F4).expect("independent rows")
}

/// Terms a spin-qubit code must detect on a complete `chi`-colour quotient:
/// on-site letters, `XX/YY/ZZ` on every pair, and the six chirality terms on
/// every triple.
pub fn spin_targets(chi: usize, chirality: bool) -> Vec<PauliString> {
    let mut out = Vec::new();
    for c in 0..chi {
        for l in ['X', 'Y', 'Z'] {
            out.push(PauliString::single(chi, c, l).unwrap());
        }
    }
    for i in 0..chi {
        for j in i + 1..chi {
            for l in ['X', 'Y', 'Z'] {
                let mut p = PauliString::identity(chi);
                p.set(i, l).unwrap();
                p.set(j, l).unwrap();
                out.push(p);
            }
        }
    }
    if chirality {
        for i in 0..chi {
            for j in i + 1..chi {
                for k in j + 1..chi {
                    for perm in ["XYZ", "YZX", "ZXY", "XZY", "ZYX", "YXZ"] {
                        let mut p = PauliString::identity(chi);
                        for (s, l) in [i, j, k].into_iter().zip(perm.chars()) {
                            p.set(s, l).unwrap();
                        }
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn detects_all(code: &AdditiveCode, targets: &[PauliString]) -> Option<PauliString> {
    targets
        .iter()
        .find(|t| code.generators.iter().all(|g| !g.anticommutes(t)))
        .cloned()
}

/// The four- and five-colour chirality codes, each checked against on-site,
/// exchange and chirality terms on the complete quotient.
pub fn chirality_expand() -> Result<(AdditiveCode, AdditiveCode)> {
    let four = AdditiveCode::from_strs(&CHIRALITY_4, Alphabet::F4)?;
    let five = AdditiveCode::from_strs(&CHIRALITY_5, Alphabet::F4)?;
    for code in [&four, &five] {
        if let Some(t) = detects_all(code, &spin_targets(code.n, true)) {
            return Err(Error::Verification(format!("chirality code misses {t}")));
        }
    }
    Ok((four, five))
}

/// Points `P1..P7` of `PG(2, 2)` as 3-bit vectors, bit `r` ↔ coordinate `r + 1`.
pub const PG22_POINTS: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

fn point_index(v: u8) -> usize {
    PG22_POINTS.iter().position(|&p| p == v).expect("nonzero vector") + 1
}

/// `table[a][b]` is the index of `P_a + P_b` (1-based); 0 on the diagonal.
pub fn pg22_sum_table() -> [[usize; 7]; 7] {
    let mut t = [[0usize; 7]; 7];
    for a in 0..7 {
        for b in 0..7 {
            if a != b {
                t[a][b] = point_index(PG22_POINTS[a] ^ PG22_POINTS[b]);
            }
        }
    }
    t
}

/// Cell `(P_a, P_b, P_a + P_b)` with 1-based indices.
pub type Cell = (usize, usize, usize);

/// Printed five-cell assignment.
pub const PRINTED_ASSIGNMENT: [Cell; 5] = [(1, 2, 4), (2, 3, 6), (3, 4, 7), (4, 6, 5), (5, 7, 2)];

#[derive(Clone, Debug)]
pub struct SudokuReport {
    pub table: [[usize; 7]; 7],
    /// Number of valid assignments of each size `0..=7`.
    pub counts_by_size: Vec<usize>,
    pub max_size: usize,
    pub max_example: Vec<Cell>,
    /// Orbits of five-cell assignments under `GL(3, 2)` and transposition.
    pub orbits_of_five: usize,
    pub assignment: Vec<Cell>,
    pub inclusion_maximal: bool,
    pub orbit_size: usize,
    pub orbit_canonical: bool,
    pub code: AdditiveCode,
}

/// Distinct rows, distinct columns, distinct entries.
pub fn assignment_valid(cells: &[Cell]) -> bool {
    let t = pg22_sum_table();
    let (mut rs, mut cs, mut es) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    cells.iter().all(|&(a, b, c)| {
        (1..=7).contains(&a)
            && (1..=7).contains(&b)
            && a != b
            && t[a - 1][b - 1] == c
            && rs.insert(a)
            && cs.insert(b)
            && es.insert(c)
    })
}

fn enumerate_all() -> Vec<Vec<Cell>> {
    let t = pg22_sum_table();
    let mut out = Vec::new();
    fn rec(a: usize, t: &[[usize; 7]; 7], used_b: u8, used_c: u8, cur: &mut Vec<Cell>, out: &mut Vec<Vec<Cell>>) {
        if a == 7 {
            out.push(cur.clone());
            return;
        }
        rec(a + 1, t, used_b, used_c, cur, out);
        for b in 0..7 {
            let c = t[a][b];
            if b != a && used_b >> b & 1 == 0 && used_c >> (c - 1) & 1 == 0 {
                cur.push((a + 1, b + 1, c));
                rec(a + 1, t, used_b | 1 << b, used_c | 1 << (c - 1), cur, out);
                cur.pop();
            }
        }
    }
    rec(0, &t, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// Point permutations induced by the 168 invertible 3×3 binary matrices.
fn gl32_permutations() -> Vec<[usize; 8]> {
    let mut out = Vec::new();
    for cols in 0u32..1 << 9 {
        let c = [(cols & 7) as u8, (cols >> 3 & 7) as u8, (cols >> 6 & 7) as u8];
        let apply = |v: u8| (0..3).fold(0u8, |acc, r| if v >> r & 1 == 1 { acc ^ c[r] } else { acc });
        let images: BTreeSet<u8> = (1u8..8).map(apply).collect();
        if images.len() == 7 && !images.contains(&0) {
            let mut perm = [0usize; 8];
            for (i, &p) in PG22_POINTS.iter().enumerate() {
                perm[i + 1] = point_index(apply(p));
            }
            out.push(perm);
        }
    }
    out
}

fn canonical(cells: &[Cell]) -> Vec<Cell> {
    let mut v = cells.to_vec();
    v.sort();
    v
}

fn orbit(cells: &[Cell], perms: &[[usize; 8]]) -> BTreeSet<Vec<Cell>> {
    let mut out = BTreeSet::new();
    for p in perms {
        for transpose in [false, true] {
            let img: Vec<Cell> = cells
                .iter()
                .map(|&(a, b, c)| {
                    let (a, b) = if transpose { (b, a) } else { (a, b) };
                    (p[a], p[b], p[c])
                })
                .collect();
            out.insert(canonical(&img));
        }
    }
    out
}

/// Column `i` of the code is `P_a + P_b·ω` read row by row.
pub fn assignment_code(cells: &[Cell]) -> Result<AdditiveCode> {
    let gens = (0..3)
        .map(|r| {
            let v: Vec<F4> = cells
                .iter()
                .map(|&(a, b, _)| {
                    F4::from_bits(PG22_POINTS[a - 1] >> r & 1 == 1, PG22_POINTS[b - 1] >> r & 1 == 1)
                })
                .collect();
            PauliString::from_f4(&v)
        })
        .collect();
    AdditiveCode::new(cells.len(), gens, Alphabet::F4)
}

/// Exhaustive search over the `PG(2, 2)` sum table. Reports the size
/// distribution and the orbit structure, and returns the printed five-cell
/// assignment (validated, inclusion-maximal, least in its orbit) with its code.
pub fn pg22_sudoku_search() -> Result<SudokuReport> {
    let all = enumerate_all();
    let mut counts_by_size = vec![0usize; 8];
    for a in &all {
        counts_by_size[a.len()] += 1;
    }
    let max_size = (0..8).rev().find(|&k| counts_by_size[k] > 0).unwrap();
    let max_example = all.iter().find(|a| a.len() == max_size).cloned().unwrap();

    let perms = gl32_permutations();
    debug_assert_eq!(perms.len(), 168);
    let mut seen: BTreeSet<Vec<Cell>> = BTreeSet::new();
    let mut orbits_of_five = 0;
    for a in all.iter().filter(|a| a.len() == 5) {
        let c = canonical(a);
        if seen.contains(&c) {
            continue;
        }
        orbits_of_five += 1;
        seen.extend(orbit(&c, &perms));
    }

    let assignment = PRINTED_ASSIGNMENT.to_vec();
    if !assignment_valid(&assignment) {
        return Err(Error::Verification("printed assignment violates the sum table".into()));
    }
    let inclusion_maximal = !all
        .iter()
        .any(|a| a.len() == 6 && assignment.iter().all(|c| a.contains(c)));
    let orb = orbit(&assignment, &perms);
    let orbit_canonical = orb.iter().next() == Some(&canonical(&assignment));
    Ok(SudokuReport {
        table: pg22_sum_table(),
        counts_by_size,
        max_size,
        max_example,
        orbits_of_five,
        code: assignment_code(&assignment)?,
        assignment,
        inclusion_maximal,
        orbit_size: orb.len(),
        orbit_canonical,
    })
}
