//! Additive codes over GF(4), their duals, and the orthogonal arrays they induce.

pub mod pg;
pub mod rm;
pub mod spin;

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::device::subsets;
use crate::field::{self, PauliString};
use crate::{Error, Result};

/// Largest generator count we enumerate exhaustively.
pub const MAX_ENUM_DIM: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// Binary code stored as X-type strings.
    F2,
    F4,
}

impl Alphabet {
    pub fn letters(self) -> Vec<char> {
        match self {
            Alphabet::F2 => vec!['I', 'X'],
            Alphabet::F4 => vec!['I', 'X', 'Y', 'Z'],
        }
    }
}

/// Additive code given by GF(2)-independent generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveCode {
    pub n: usize,
    pub alphabet: Alphabet,
    pub generators: Vec<PauliString>,
}

impl AdditiveCode {
    pub fn new(n: usize, generators: Vec<PauliString>, alphabet: Alphabet) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::LengthMismatch(g.len(), n));
        }
        if alphabet == Alphabet::F2 && generators.iter().any(|g| !g.is_x_type()) {
            return Err(Error::Invalid("binary codes are stored as X-type strings".into()));
        }
        if field::pauli_rank(&generators) != generators.len() {
            return Err(Error::Dependent);
        }
        Ok(AdditiveCode { n, alphabet, generators })
    }

    pub fn from_strs(rows: &[&str], alphabet: Alphabet) -> Result<Self> {
        let gens = rows.iter().map(|r| r.parse()).collect::<Result<Vec<PauliString>>>()?;
        let n = gens.first().map_or(0, |g| g.len());
        AdditiveCode::new(n, gens, alphabet)
    }

    /// Keeps a maximal independent prefix-greedy subset of `generators`.
    pub fn spanned_by(n: usize, generators: &[PauliString], alphabet: Alphabet) -> Result<Self> {
        let mut kept: Vec<PauliString> = Vec::new();
        for g in generators {
            let mut trial = kept.clone();
            trial.push(g.clone());
            if field::pauli_rank(&trial) == trial.len() {
                kept = trial;
            }
        }
        AdditiveCode::new(n, kept, alphabet)
    }

    /// Number of generators, `log₂|C|`.
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    /// Sequence length `L = |C|` when the code is used as a decoupling group.
    pub fn size(&self) -> u128 {
        1u128 << self.dimension()
    }

    pub fn codewords(&self) -> Result<Vec<PauliString>> {
        let m = self.dimension();
        if m > MAX_ENUM_DIM {
            return Err(Error::TooLarge(format!("2^{m} codewords")));
        }
        Ok((0u64..1 << m).map(|k| self.combination(k)).collect())
    }

    /// Product of the generators selected by the bits of `k`.
    pub fn combination(&self, k: u64) -> PauliString {
        let mut p = PauliString::identity(self.n);
        for (i, g) in self.generators.iter().enumerate() {
            if k >> i & 1 == 1 {
                p = &p * g;
            }
        }
        p
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        p.len() == self.n
            && field::in_span(&field::symplectic_rows(&self.generators), &p.symplectic_row())
    }

    /// True iff `p` pairs trivially with every generator (for F2: binary dot product).
    pub fn is_orthogonal(&self, p: &PauliString) -> bool {
        match self.alphabet {
            Alphabet::F4 => self.generators.iter().all(|g| !g.anticommutes(p)),
            Alphabet::F2 => self
                .generators
                .iter()
                .all(|g| (0..self.n).filter(|&i| g.x_bit(i) && p.x_bit(i)).count() % 2 == 0),
        }
    }

    /// Trace-Hermitian dual (binary dual for F2 codes).
    pub fn dual(&self) -> AdditiveCode {
        let gens = match self.alphabet {
            Alphabet::F4 => field::commutant(self.n, &self.generators),
            Alphabet::F2 => {
                let rows: Vec<field::BitVec> = self
                    .generators
                    .iter()
                    .map(|g| {
                        let mut v = field::BitVec::zeros(self.n);
                        for i in 0..self.n {
                            v.set(i, g.x_bit(i));
                        }
                        v
                    })
                    .collect();
                field::nullspace(&rows, self.n)
                    .iter()
                    .map(|v| {
                        let xs: Vec<bool> = (0..self.n).map(|i| v.get(i)).collect();
                        PauliString::from_bits(&xs, &vec![false; self.n]).unwrap()
                    })
                    .collect()
            }
        };
        AdditiveCode { n: self.n, alphabet: self.alphabet, generators: gens }
    }

    /// Minimum weight of a nonzero codeword; `None` for the zero code.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self.codewords()?.iter().skip(1).map(PauliString::weight).min())
    }

    /// Minimum weight of a nonzero dual codeword; `None` when the dual is `{0}`.
    pub fn dual_distance(&self) -> Result<Option<usize>> {
        let dual_dim = match self.alphabet {
            Alphabet::F4 => 2 * self.n - self.dimension(),
            Alphabet::F2 => self.n - self.dimension(),
        };
        if dual_dim <= 20 {
            return self.dual().min_distance();
        }
        // weight-ordered search over candidate dual words
        let letters: &[char] = match self.alphabet {
            Alphabet::F4 => &['X', 'Y', 'Z'],
            Alphabet::F2 => &['X'],
        };
        let mut budget: u64 = 50_000_000;
        for w in 1..=self.n {
            for sites in subsets(self.n, w) {
                let combos = (letters.len() as u64).pow(w as u32);
                budget = budget.checked_sub(combos).ok_or_else(|| {
                    Error::TooLarge("dual distance search exceeded budget".into())
                })?;
                for k in 0..combos {
                    let mut p = PauliString::identity(self.n);
                    let mut r = k;
                    for &s in &sites {
                        p.set(s, letters[(r % letters.len() as u64) as usize])?;
                        r /= letters.len() as u64;
                    }
                    if self.is_orthogonal(&p) {
                        return Ok(Some(w));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Rows are all codewords; strength is `d⊥ − 1`, then checked exhaustively.
    pub fn to_orthogonal_array(&self) -> Result<OrthogonalArray> {
        let rows = self.codewords()?;
        let strength = match self.dual_distance()? {
            Some(d) => d - 1,
            None => self.n,
        };
        let oa = OrthogonalArray { rows, alphabet: self.alphabet.letters(), strength };
        if !verify_oa_strength(&oa, strength) {
            return Err(Error::Verification(format!("array fails claimed strength {strength}")));
        }
        Ok(oa)
    }

    /// Restriction to the first `chi` columns.
    pub fn truncate(&self, chi: usize) -> Result<AdditiveCode> {
        let cols: Vec<usize> = (0..chi.min(self.n)).collect();
        let gens: Vec<PauliString> = self.generators.iter().map(|g| g.project(&cols)).collect();
        AdditiveCode::new(cols.len(), gens, self.alphabet)
    }

    /// Generator rows as letter strings.
    pub fn rows(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

/// `L × χ` array of letters whose rows serve as decoupling frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalArray {
    pub rows: Vec<PauliString>,
    pub alphabet: Vec<char>,
    pub strength: usize,
}

impl OrthogonalArray {
    pub fn runs(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Occurrences of each letter in column `c`.
    pub fn column_counts(&self, c: usize) -> BTreeMap<char, usize> {
        let mut m = BTreeMap::new();
        for r in &self.rows {
            *m.entry(r.letter(c)).or_insert(0) += 1;
        }
        m
    }

    /// Largest `k` for which the array is uniform on every `k` columns.
    pub fn max_strength(&self) -> usize {
        let mut k = 0;
        while k < self.columns() && verify_oa_strength(self, k + 1) {
            k += 1;
        }
        k
    }

    /// CSV with colour ids `1..=χ` as header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record((1..=self.columns()).map(|c| c.to_string()))?;
        for r in &self.rows {
            wr.write_record((0..r.len()).map(|i| r.letter(i).to_string()))?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Every `k`-column projection contains each tuple of `S^k` equally often.
pub fn verify_oa_strength(oa: &OrthogonalArray, k: usize) -> bool {
    let s = oa.alphabet.len();
    let l = oa.runs();
    let Some(cells) = s.checked_pow(k as u32) else { return false };
    if k > oa.columns() || l % cells != 0 {
        return false;
    }
    let index: BTreeMap<char, usize> = oa.alphabet.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for cols in subsets(oa.columns(), k) {
        let mut counts = vec![0usize; cells];
        for r in &oa.rows {
            let mut key = 0;
            for &c in &cols {
                match index.get(&r.letter(c)) {
                    Some(&i) => key = key * s + i,
                    None => return false,
                }
            }
            counts[key] += 1;
        }
        if counts.iter().any(|&x| x != l / cells) {
            return false;
        }
    }
    true
}
