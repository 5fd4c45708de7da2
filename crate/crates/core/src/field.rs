//! GF(4) arithmetic, phase-free Pauli strings and GF(2) linear algebra.
//!
//! A site letter is stored as the symplectic pair `(x, z)`; the GF(4) view is
//! `x + z·ω` with `I → 0`, `X → 1`, `Z → ω`, `Y → 1 + ω`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Element `a + b·ω` of GF(4), packed as `a | b << 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F4(u8);

impl F4 {
    pub const ZERO: F4 = F4(0);
    pub const ONE: F4 = F4(1);
    pub const W: F4 = F4(2);
    pub const W2: F4 = F4(3);
    pub const ALL: [F4; 4] = [F4::ZERO, F4::ONE, F4::W, F4::W2];

    pub fn from_bits(a: bool, b: bool) -> F4 {
        F4(a as u8 | (b as u8) << 1)
    }

    /// Coefficient of 1.
    pub fn a(self) -> bool {
        self.0 & 1 == 1
    }

    /// Coefficient of ω.
    pub fn b(self) -> bool {
        self.0 & 2 == 2
    }

    /// Frobenius map `u ↦ u²`, which is also the Hermitian conjugate.
    pub fn square(self) -> F4 {
        self * self
    }

    pub fn from_pauli(letter: char) -> Result<F4> {
        match letter {
            'I' => Ok(F4::ZERO),
            'X' => Ok(F4::ONE),
            'Z' => Ok(F4::W),
            'Y' => Ok(F4::W2),
            other => Err(Error::Parse(format!("not a Pauli letter: {other:?}"))),
        }
    }

    pub fn to_pauli(self) -> char {
        LETTERS[self.0 as usize]
    }
}

impl Add for F4 {
    type Output = F4;
    fn add(self, rhs: F4) -> F4 {
        F4(self.0 ^ rhs.0)
    }
}

impl Mul for F4 {
    type Output = F4;
    // (a + bω)(c + dω) = (ac + bd) + (ad + bc + bd)ω, using ω² = ω + 1
    fn mul(self, rhs: F4) -> F4 {
        let (a, b) = (self.a(), self.b());
        let (c, d) = (rhs.a(), rhs.b());
        F4::from_bits((a & c) ^ (b & d), (a & d) ^ (b & c) ^ (b & d))
    }
}

impl fmt::Display for F4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["0", "1", "w", "1+w"][self.0 as usize])
    }
}

impl FromStr for F4 {
    type Err = Error;
    fn from_str(s: &str) -> Result<F4> {
        match s.trim() {
            "0" => Ok(F4::ZERO),
            "1" => Ok(F4::ONE),
            "w" => Ok(F4::W),
            "1+w" | "w+1" => Ok(F4::W2),
            other => Err(Error::Parse(format!("not a GF(4) literal: {other:?}"))),
        }
    }
}

/// Letters indexed by the packed `(x, z)` bits.
const LETTERS: [char; 4] = ['I', 'X', 'Z', 'Y'];

/// Ordering rank used for lexicographic comparison: I < X < Y < Z.
fn letter_rank(x: bool, z: bool) -> u8 {
    match (x, z) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

/// Trace-Hermitian form `Σ uᵢvᵢ² + vᵢuᵢ²`, returned as a bit.
pub fn trace_hermitian_inner(u: &[F4], v: &[F4]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    let s = u
        .iter()
        .zip(v)
        .fold(F4::ZERO, |acc, (&a, &b)| acc + a * b.square() + b * a.square());
    debug_assert!(!s.b(), "trace form must land in GF(2)");
    Ok(s.a())
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

/// Phase-free Pauli operator on `n` sites in binary symplectic form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { n, x: vec![0; words(n)], z: vec![0; words(n)] }
    }

    pub fn from_letters(s: &str) -> Result<Self> {
        let letters: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = PauliString::identity(letters.len());
        for (i, &c) in letters.iter().enumerate() {
            p.set(i, c)?;
        }
        Ok(p)
    }

    /// Single letter `letter` on `site`, identity elsewhere.
    pub fn single(n: usize, site: usize, letter: char) -> Result<Self> {
        let mut p = PauliString::identity(n);
        p.set(site, letter)?;
        Ok(p)
    }

    pub fn from_f4(v: &[F4]) -> Self {
        let mut p = PauliString::identity(v.len());
        for (i, e) in v.iter().enumerate() {
            p.set_bits(i, e.a(), e.b());
        }
        p
    }

    pub fn from_bits(xs: &[bool], zs: &[bool]) -> Result<Self> {
        if xs.len() != zs.len() {
            return Err(Error::LengthMismatch(xs.len(), zs.len()));
        }
        let mut p = PauliString::identity(xs.len());
        for i in 0..xs.len() {
            p.set_bits(i, xs[i], zs[i]);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_bit(&self, i: usize) -> bool {
        self.x[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn z_bit(&self, i: usize) -> bool {
        self.z[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set_bits(&mut self, i: usize, x: bool, z: bool) {
        assert!(i < self.n, "site {i} out of range for length {}", self.n);
        let (w, b) = (i / 64, i % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | (x as u64) << b;
        self.z[w] = (self.z[w] & !(1 << b)) | (z as u64) << b;
    }

    pub fn set(&mut self, i: usize, letter: char) -> Result<()> {
        let e = F4::from_pauli(letter)?;
        self.set_bits(i, e.a(), e.b());
        Ok(())
    }

    pub fn letter(&self, i: usize) -> char {
        LETTERS[self.x_bit(i) as usize | (self.z_bit(i) as usize) << 1]
    }

    pub fn f4(&self, i: usize) -> F4 {
        F4::from_bits(self.x_bit(i), self.z_bit(i))
    }

    pub fn to_f4(&self) -> Vec<F4> {
        (0..self.n).map(|i| self.f4(i)).collect()
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Sites carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.x_bit(i) || self.z_bit(i)).collect()
    }

    /// True when every site is `I` or `Z`.
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    pub fn is_x_type(&self) -> bool {
        self.z.iter().all(|&w| w == 0)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Phase-free product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        PauliString {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Symplectic inner product; true iff the operators anticommute.
    pub fn symplectic_inner(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.anticommutes(other))
    }

    /// Panics on length mismatch; use [`symplectic_inner`](Self::symplectic_inner)
    /// for checked access.
    pub fn anticommutes(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "Pauli string length mismatch");
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= (self.x[w] & other.z[w]).count_ones() ^ (self.z[w] & other.x[w]).count_ones();
        }
        acc & 1 == 1
    }

    /// True iff sites `i` of both strings anticommute as single-qubit Paulis.
    pub fn anticommutes_at(&self, other: &Self, i: usize) -> bool {
        (self.x_bit(i) & other.z_bit(i)) ^ (self.z_bit(i) & other.x_bit(i))
    }

    /// Restriction to the listed sites, in the order given.
    pub fn project(&self, sites: &[usize]) -> Self {
        let mut p = PauliString::identity(sites.len());
        for (j, &i) in sites.iter().enumerate() {
            p.set_bits(j, self.x_bit(i), self.z_bit(i));
        }
        p
    }

    /// Embeds a local string on `sites` into an `n`-site register.
    pub fn embed(&self, n: usize, sites: &[usize]) -> Result<Self> {
        if sites.len() != self.n {
            return Err(Error::LengthMismatch(sites.len(), self.n));
        }
        let mut p = PauliString::identity(n);
        for (j, &i) in sites.iter().enumerate() {
            if i >= n {
                return Err(Error::Invalid(format!("site {i} outside register of {n}")));
            }
            p.set_bits(i, self.x_bit(j), self.z_bit(j));
        }
        Ok(p)
    }

    /// Multiplies site `i` by the GF(4) scalar `s`.
    pub fn scale_site(&mut self, i: usize, s: F4) {
        let e = self.f4(i) * s;
        self.set_bits(i, e.a(), e.b());
    }

    /// The `(x | z)` row as a bit vector of length `2n`.
    pub fn symplectic_row(&self) -> BitVec {
        let mut v = BitVec::zeros(2 * self.n);
        for i in 0..self.n {
            v.set(i, self.x_bit(i));
            v.set(self.n + i, self.z_bit(i));
        }
        v
    }

    pub fn from_symplectic_row(v: &BitVec) -> Self {
        let n = v.len() / 2;
        let mut p = PauliString::identity(n);
        for i in 0..n {
            p.set_bits(i, v.get(i), v.get(n + i));
        }
        p
    }
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.n, rhs.n, "Pauli string length mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in 0..self.n.min(other.n) {
            let a = letter_rank(self.x_bit(i), self.z_bit(i));
            let b = letter_rank(other.x_bit(i), other.z_bit(i));
            match a.cmp(&b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.n.cmp(&other.n)
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n).map(|i| self.letter(i)).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PauliString::from_letters(s)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PauliString::from_letters(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a list of literals; panics on malformed input (intended for constants).
pub fn paulis(list: &[&str]) -> Vec<PauliString> {
    list.iter()
        .map(|s| PauliString::from_letters(s).expect("valid Pauli literal"))
        .collect()
}

/// The block form `Ω = [[0, I], [I, 0]]` on `2n` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        SymplecticForm { n }
    }

    /// `Ω v`: swaps the x and z halves.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), 2 * self.n);
        let mut out = BitVec::zeros(2 * self.n);
        for i in 0..self.n {
            out.set(i, v.get(self.n + i));
            out.set(self.n + i, v.get(i));
        }
        out
    }

    /// `uᵀ Ω v`.
    pub fn pair(&self, u: &BitVec, v: &BitVec) -> bool {
        u.dot(&self.apply(v))
    }
}

/// Dense GF(2) vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitVec {
    len: usize,
    w: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, w: vec![0; words(len)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.w[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        let (w, k) = (i / 64, i % 64);
        self.w[w] = (self.w[w] & !(1 << k)) | (b as u64) << k;
    }

    pub fn xor_assign(&mut self, o: &BitVec) {
        for (a, b) in self.w.iter_mut().zip(&o.w) {
            *a ^= b;
        }
    }

    pub fn dot(&self, o: &BitVec) -> bool {
        self.w.iter().zip(&o.w).map(|(a, b)| (a & b).count_ones()).sum::<u32>() & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    fn first_one(&self) -> Option<usize> {
        self.w
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, x)| i * 64 + x.trailing_zeros() as usize)
    }
}

/// Row-reduced echelon basis of the row space, with pivot columns.
pub fn echelon(rows: &[BitVec]) -> (Vec<BitVec>, Vec<usize>) {
    let mut basis: Vec<BitVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        if let Some(p) = v.first_one() {
            for b in basis.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            basis.push(v);
            pivots.push(p);
        }
    }
    (basis, pivots)
}

pub fn rank(rows: &[BitVec]) -> usize {
    echelon(rows).0.len()
}

/// True iff `v` lies in the span of `rows`.
pub fn in_span(rows: &[BitVec], v: &BitVec) -> bool {
    let (basis, pivots) = echelon(rows);
    let mut v = v.clone();
    for (b, &p) in basis.iter().zip(&pivots) {
        if v.get(p) {
            v.xor_assign(b);
        }
    }
    v.is_zero()
}

/// Basis of `{v : rows·v = 0}` over GF(2), for vectors of length `ncols`.
pub fn nullspace(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let (basis, pivots) = echelon(rows);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(ncols);
        v.set(free, true);
        for (b, &p) in basis.iter().zip(&pivots) {
            if b.get(free) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}

/// Symplectic rows of a Pauli list.
pub fn symplectic_rows(ps: &[PauliString]) -> Vec<BitVec> {
    ps.iter().map(PauliString::symplectic_row).collect()
}

/// GF(2) rank of a set of Pauli strings in `(x | z)` form.
pub fn pauli_rank(ps: &[PauliString]) -> usize {
    rank(&symplectic_rows(ps))
}

/// Basis of all strings commuting with every element of `ps`.
pub fn commutant(n: usize, ps: &[PauliString]) -> Vec<PauliString> {
    // v commutes with h iff (z_h | x_h) · (x_v | z_v) = 0
    let form = SymplecticForm::new(n);
    let rows: Vec<BitVec> = ps.iter().map(|p| form.apply(&p.symplectic_row())).collect();
    nullspace(&rows, 2 * n).iter().map(PauliString::from_symplectic_row).collect()
}

/// All `4ⁿ` strings on `n` sites, in counting order.
pub fn all_paulis(n: usize) -> impl Iterator<Item = PauliString> {
    assert!(n <= 16, "exhaustive enumeration limited to 16 sites");
    (0u64..1 << (2 * n)).map(move |k| {
        let mut p = PauliString::identity(n);
        for i in 0..n {
            let e = (k >> (2 * i)) & 3;
            p.set_bits(i, e & 1 == 1, e & 2 == 2);
        }
        p
    })
}
