//! First-order Reed–Muller codes and their Pauli substitutions.
//!
//! Column `j` of `RM(1, m)` evaluates at the point whose binary expansion is
//! `2^m − 1 − j`, with `x₁` as the most significant bit.

use super::{AdditiveCode, Alphabet};
use crate::field::PauliString;
use crate::{Error, Result};

/// `⌈log₂ v⌉` for `v ≥ 1`.
pub fn ceil_log2(v: usize) -> usize {
    assert!(v >= 1);
    (usize::BITS - (v - 1).leading_zeros()) as usize
}

/// Coordinate `x_i` (1-based) of the point evaluated at column `j`.
fn coord(m: usize, j: usize, i: usize) -> bool {
    let point = (1usize << m) - 1 - j;
    point >> (m - i) & 1 == 1
}

fn row_from(cols: usize, f: impl Fn(usize) -> char) -> PauliString {
    let s: String = (0..cols).map(f).collect();
    s.parse().expect("letters are valid")
}

/// Binary `RM(1, m)`: constant row then `x₁ … x_m`, as X-type strings.
pub fn rm_code(m: usize) -> AdditiveCode {
    assert!(m >= 1, "RM(1, m) needs m ≥ 1");
    let len = 1 << m;
    let mut gens = vec![row_from(len, |_| 'X')];
    for i in 1..=m {
        gens.push(row_from(len, |j| if coord(m, j, i) { 'X' } else { 'I' }));
    }
    AdditiveCode::new(len, gens, Alphabet::F2).expect("RM rows are independent")
}

/// Letter of generator `i` (0 = constant row) at column `j`.
fn universal_letter(m: usize, i: usize, j: usize) -> char {
    if i == 0 {
        return 'X';
    }
    let bit = coord(m, j, i);
    if i == m {
        if bit { 'Y' } else { 'Z' }
    } else if i == 1 {
        if bit { 'X' } else { 'Z' }
    } else if bit {
        'X'
    } else {
        'I'
    }
}

/// Pauli substitution of `RM(1, m)` kept on the first `chi` columns.
///
/// Ones become `X` (or `Y` on the last row), zeros become `I` (or `Z` on the
/// first and last coordinate rows). Every column then carries `X` from the
/// constant row and a different letter from the last row.
pub fn rm_universal(m: usize, chi: usize) -> Result<AdditiveCode> {
    if m == 0 || chi == 0 || chi > 1 << m {
        return Err(Error::Invalid(format!("rm_universal needs 1 ≤ χ ≤ 2^m, got χ={chi}, m={m}")));
    }
    let gens = (0..=m).map(|i| row_from(chi, |j| universal_letter(m, i, j))).collect();
    let code = AdditiveCode::new(chi, gens, Alphabet::F4)?;
    debug_assert!(column_rule_holds(&code));
    Ok(code)
}

/// `rm_universal` with the smallest admissible `m`.
pub fn rm_universal_for(chi: usize) -> Result<AdditiveCode> {
    rm_universal(ceil_log2(chi.max(2)), chi)
}

/// Drops the constant generator and the all-zero column.
pub fn rm_punctured(m: usize, chi: usize) -> Result<AdditiveCode> {
    if m == 0 || chi == 0 || chi > (1 << m) - 1 {
        return Err(Error::Invalid(format!(
            "rm_punctured needs 1 ≤ χ ≤ 2^m − 1, got χ={chi}, m={m}"
        )));
    }
    let gens = (1..=m).map(|i| row_from(chi, |j| universal_letter(m, i, j))).collect();
    AdditiveCode::new(chi, gens, Alphabet::F4)
}

pub fn rm_punctured_for(chi: usize) -> Result<AdditiveCode> {
    rm_punctured(ceil_log2(chi + 1), chi)
}

/// Every column shows at least two distinct non-identity letters.
pub fn column_rule_holds(code: &AdditiveCode) -> bool {
    (0..code.n).all(|j| {
        let mut seen: Vec<char> = code
            .generators
            .iter()
            .map(|g| g.letter(j))
            .filter(|&c| c != 'I')
            .collect();
        seen.sort();
        seen.dedup();
        seen.len() >= 2
    })
}

fn global_z(chi: usize) -> PauliString {
    row_from(chi, |_| 'Z')
}

/// X-type punctured `RM(1, m)` plus a global `Z` row, for bounded control.
/// Targets on-site terms and `ZZ`.
pub fn bounded_rm(chi: usize) -> Result<AdditiveCode> {
    let m = ceil_log2(chi + 1);
    let mut gens: Vec<PauliString> =
        (1..=m).map(|i| row_from(chi, |j| if coord(m, j, i) { 'X' } else { 'I' })).collect();
    gens.push(global_z(chi));
    AdditiveCode::new(chi, gens, Alphabet::F4)
}

/// X-type full `RM(1, m)` plus a global `Z` row. Targets on-site terms and
/// Z-type strings up to weight three.
pub fn bounded_rm_zzz(chi: usize) -> Result<AdditiveCode> {
    let m = ceil_log2(chi.max(2));
    let mut gens = rm_code(m).truncate(chi)?.generators;
    gens.push(global_z(chi));
    AdditiveCode::new(chi, gens, Alphabet::F4)
}

/// Closed-form length of the bounded sequence from [`bounded_rm`].
pub fn bounded_rm_length(chi: usize) -> usize {
    let g = ceil_log2(chi + 1) + 1;
    (1 << g) * g
}
