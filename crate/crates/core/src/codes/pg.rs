//! Projective-geometry constructions: point sets over GF(4), cap sets, the
//! hexacode, and line spreads over GF(2) read as GF(4) columns.

use super::{AdditiveCode, Alphabet};
use crate::field::{PauliString, F4};
use crate::{Error, Result};

/// Projective point as a normalised vector (first nonzero entry is 1).
pub type Point = Vec<F4>;

/// Points of `PG(n, q)` for `q ∈ {2, 4}`, in lexicographic order of their
/// normalised representatives.
pub fn pg_points(n: usize, q: usize) -> Result<Vec<Point>> {
    let scalars: &[F4] = match q {
        2 => &F4::ALL[..2],
        4 => &F4::ALL,
        _ => return Err(Error::Unsupported(format!("PG over GF({q})"))),
    };
    let dim = n + 1;
    let mut out = Vec::new();
    // leading zeros, then a 1, then free coordinates
    for lead in (0..dim).rev() {
        let free = dim - lead - 1;
        let count = scalars.len().pow(free as u32);
        for k in 0..count {
            let mut v = vec![F4::ZERO; dim];
            v[lead] = F4::ONE;
            let mut r = k;
            for i in (lead + 1..dim).rev() {
                v[i] = scalars[r % scalars.len()];
                r /= scalars.len();
            }
            out.push(v);
        }
    }
    Ok(out)
}

pub fn normalize(v: &[F4]) -> Option<Point> {
    let lead = *v.iter().find(|e| **e != F4::ZERO)?;
    let inv = F4::ALL[1..].iter().copied().find(|&s| s * lead == F4::ONE).unwrap();
    Some(v.iter().map(|&e| e * inv).collect())
}

fn combine(a: F4, p: &[F4], b: F4, q: &[F4]) -> Vec<F4> {
    p.iter().zip(q).map(|(&x, &y)| a * x + b * y).collect()
}

/// True iff `r` lies on the line through `p` and `q` (over GF(4)).
pub fn collinear(p: &[F4], q: &[F4], r: &[F4]) -> bool {
    let target = normalize(r);
    F4::ALL.iter().any(|&a| {
        F4::ALL
            .iter()
            .any(|&b| (a, b) != (F4::ZERO, F4::ZERO) && normalize(&combine(a, p, b, q)) == target)
    })
}

/// No three points collinear.
pub fn is_cap(points: &[Point]) -> bool {
    let k = points.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                if collinear(&points[i], &points[j], &points[l]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Hexacode generator matrix `[I | A]` over GF(4).
pub fn hexacode_matrix() -> Vec<Vec<F4>> {
    let (o, i, w) = (F4::ZERO, F4::ONE, F4::W);
    vec![vec![i, o, o, i, i, w], vec![o, i, o, i, w, i], vec![o, o, i, w, i, i]]
}

/// Additive generators `rows ∪ ω·rows` of an F4-linear matrix.
fn linear_span_generators(rows: &[Vec<F4>]) -> Vec<PauliString> {
    let mut gens: Vec<PauliString> = rows.iter().map(|r| PauliString::from_f4(r)).collect();
    gens.extend(rows.iter().map(|r| {
        let s: Vec<F4> = r.iter().map(|&e| e * F4::W).collect();
        PauliString::from_f4(&s)
    }));
    gens
}

/// The self-dual hexacode as an additive code (6 generators on 6 columns).
pub fn hexacode() -> AdditiveCode {
    AdditiveCode::new(6, linear_span_generators(&hexacode_matrix()), Alphabet::F4)
        .expect("hexacode rows are independent")
}

/// Cap in `PG(n, 4)`: the hexacode columns for `n = 2`, greedy otherwise.
pub fn cap_set(n: usize) -> Result<Vec<Point>> {
    if n == 2 {
        let m = hexacode_matrix();
        let cols: Vec<Point> =
            (0..6).map(|c| normalize(&[m[0][c], m[1][c], m[2][c]]).unwrap()).collect();
        return Ok(cols);
    }
    let mut cap: Vec<Point> = Vec::new();
    for p in pg_points(n, 4)? {
        let ok = (0..cap.len()).all(|i| (i + 1..cap.len()).all(|j| !collinear(&cap[i], &cap[j], &p)));
        if ok {
            cap.push(p);
        }
    }
    Ok(cap)
}

/// Decoupling code whose dual has the given points as check-matrix columns.
///
/// Generators are the rows of the `(n+1) × χ` point matrix and their ω-multiples,
/// so `|G| = 4^{n+1}` and the dual distance is at least 3.
pub fn linear_pg_code(n: usize, columns: &[Point]) -> Result<AdditiveCode> {
    for (i, p) in columns.iter().enumerate() {
        if p.len() != n + 1 {
            return Err(Error::LengthMismatch(p.len(), n + 1));
        }
        if columns[..i].iter().any(|q| normalize(q) == normalize(p)) {
            return Err(Error::Invalid(format!("repeated projective point in column {}", i + 1)));
        }
    }
    let rows: Vec<Vec<F4>> = (0..=n).map(|r| columns.iter().map(|p| p[r]).collect()).collect();
    AdditiveCode::spanned_by(columns.len(), &linear_span_generators(&rows), Alphabet::F4)
}

/// Smallest `n` with `(4^{n+1} − 1)/3 ≥ points`.
fn pg4_dimension(points: usize) -> usize {
    let mut n = 0;
    while (4usize.pow(n as u32 + 1) - 1) / 3 < points {
        n += 1;
    }
    n
}

/// Linear PG code on the first `chi` points of the smallest adequate `PG(n, 4)`.
pub fn linear_pg_for(chi: usize) -> Result<AdditiveCode> {
    let n = pg4_dimension(chi);
    let pts = pg_points(n, 4)?;
    linear_pg_code(n, &pts[..chi])
}

/// Replaces each column by its three nonzero scalar multiples.
pub fn heisenberg_expand(code: &AdditiveCode) -> AdditiveCode {
    let mut gens: Vec<PauliString> = Vec::with_capacity(code.dimension());
    for g in &code.generators {
        let mut v = Vec::with_capacity(3 * code.n);
        for c in 0..code.n {
            let e = g.f4(c);
            v.extend([e, e * F4::W, e * F4::W2]);
        }
        gens.push(PauliString::from_f4(&v));
    }
    AdditiveCode { n: 3 * code.n, alphabet: Alphabet::F4, generators: gens }
}

/// Expansion of a code scaled per column, kept to `chi` columns.
pub fn heisenberg_expand_to(code: &AdditiveCode, chi: usize) -> Result<AdditiveCode> {
    heisenberg_expand(code).truncate(chi)
}

/// Linear PG code on `⌈χ/3⌉` points expanded to `χ` columns.
pub fn linear_pg_mod(chi: usize) -> Result<AdditiveCode> {
    let pts = chi.div_ceil(3);
    heisenberg_expand_to(&linear_pg_for(pts)?, chi)
}

/// Line of `PG(h−1, 2)` through points `p < q` with `p ⊕ q > q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line {
    pub p: u32,
    pub q: u32,
}

impl Line {
    pub fn new(a: u32, b: u32) -> Result<Line> {
        if a == 0 || b == 0 || a == b {
            return Err(Error::Invalid("a line needs two distinct nonzero points".into()));
        }
        let mut pts = [a, b, a ^ b];
        pts.sort();
        Ok(Line { p: pts[0], q: pts[1] })
    }

    pub fn points(&self) -> [u32; 3] {
        [self.p, self.q, self.p ^ self.q]
    }

    fn mask(&self) -> u128 {
        self.points().iter().fold(0u128, |m, &x| m | 1 << x)
    }
}

/// Two lines meet trivially (their planes span four dimensions).
pub fn lines_skew(a: &Line, b: &Line) -> bool {
    a.mask() & b.mask() == 0
}

/// Bit `r` of a point is the entry of generator row `r`.
fn bits_of(v: &[u8]) -> u32 {
    v.iter().enumerate().fold(0, |acc, (r, &b)| acc | (b as u32) << r)
}

/// Five pairwise skew lines of `PG(3, 2)` as (first, second) column pairs.
pub fn spread_pg32() -> Vec<(u32, u32)> {
    [
        ([1, 0, 0, 0], [0, 1, 0, 0]),
        ([0, 0, 1, 0], [0, 0, 0, 1]),
        ([1, 1, 0, 1], [0, 1, 1, 0]),
        ([1, 0, 1, 0], [0, 1, 0, 1]),
        ([1, 1, 1, 0], [0, 1, 1, 1]),
    ]
    .iter()
    .map(|(p, q)| (bits_of(p), bits_of(q)))
    .collect()
}

/// Column `c` carries `p_r + q_r·ω` in generator row `r`.
pub fn line_code(h: usize, columns: &[(u32, u32)]) -> Result<AdditiveCode> {
    let gens = (0..h)
        .map(|r| {
            let v: Vec<F4> = columns
                .iter()
                .map(|&(p, q)| F4::from_bits(p >> r & 1 == 1, q >> r & 1 == 1))
                .collect();
            PauliString::from_f4(&v)
        })
        .collect();
    AdditiveCode::new(columns.len(), gens, Alphabet::F4)
}

/// Generator count for the additive PG family: the smaller of the least even
/// `h` with `2^h ≥ 3χ+1` and the least odd `h` with `2^h ≥ 3χ+5`.
pub fn add_pg_dimension(chi: usize) -> usize {
    parity_rule(3 * chi + 1, 3 * chi + 5)
}

/// As [`add_pg_dimension`] for `⌈χ/3⌉` lines expanded by scalars.
pub fn add_pg_mod_dimension(chi: usize) -> usize {
    parity_rule(chi + 1, chi + 5)
}

fn parity_rule(even_bound: usize, odd_bound: usize) -> usize {
    let even = (2..).step_by(2).find(|&h| 1usize << h >= even_bound).unwrap();
    let odd = (1..).step_by(2).find(|&h| 1usize << h >= odd_bound).unwrap();
    even.min(odd)
}

/// Depth-first search for `count` pairwise skew lines in `PG(h−1, 2)`.
pub fn partial_spread(h: usize, count: usize) -> Option<Vec<Line>> {
    assert!(h <= 7, "point masks are limited to PG(6, 2)");
    let mut lines: Vec<Line> = Vec::new();
    for a in 1u32..1 << h {
        for b in a + 1..1 << h {
            if (a ^ b) > b {
                lines.push(Line { p: a, q: b });
            }
        }
    }
    fn dfs(lines: &[Line], start: usize, used: u128, need: usize, acc: &mut Vec<Line>, budget: &mut u64) -> bool {
        if need == 0 {
            return true;
        }
        for i in start..lines.len() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let m = lines[i].mask();
            if used & m == 0 {
                acc.push(lines[i]);
                if dfs(lines, i + 1, used | m, need - 1, acc, budget) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    let mut budget = 20_000_000u64;
    dfs(&lines, 0, 0, count, &mut acc, &mut budget).then_some(acc)
}

/// Additive code on `chi` columns from a partial spread; dual distance 3.
pub fn additive_pg_code(chi: usize) -> Result<AdditiveCode> {
    if chi == 5 {
        return line_code(4, &spread_pg32());
    }
    lines_code_with(add_pg_dimension(chi), chi)
}

fn lines_code_with(h: usize, count: usize) -> Result<AdditiveCode> {
    let lines = partial_spread(h, count).ok_or_else(|| {
        Error::Verification(format!("no {count} pairwise skew lines found in PG({}, 2)", h - 1))
    })?;
    let cols: Vec<(u32, u32)> = lines.iter().map(|l| (l.p, l.q)).collect();
    line_code(h, &cols)
}

/// `⌈χ/3⌉` skew lines expanded by scalars and cut to `chi` columns.
pub fn additive_pg_mod(chi: usize) -> Result<AdditiveCode> {
    let h = add_pg_mod_dimension(chi);
    heisenberg_expand_to(&lines_code_with(h, chi.div_ceil(3))?, chi)
}
