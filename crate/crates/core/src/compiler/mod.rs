//! Detection verdicts for Pauli decoupling groups and selective synthesis.

pub mod bounded;
pub mod cover;
pub mod scaling;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::AdditiveCode;
use crate::device::{subsets, Model, QuotientGraph};
use crate::field::{self, PauliString};
use crate::{Error, Result};

pub use bounded::{bounded_support, check_bounded, BoundedFailure, BoundedVerdict};
pub use cover::{min_cover, Cover};

/// Largest group whose elements are ever listed explicitly.
pub const MAX_GROUP_DIM: usize = 24;

/// Group of Pauli frames generated by independent strings on `chi` sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DDGroup {
    pub chi: usize,
    pub generators: Vec<PauliString>,
}

impl DDGroup {
    pub fn new(chi: usize, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.len() != chi {
                return Err(Error::LengthMismatch(g.len(), chi));
            }
        }
        if field::pauli_rank(&generators) != generators.len() {
            return Err(Error::Dependent);
        }
        Ok(DDGroup { chi, generators })
    }

    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let gens = rows.iter().map(|r| r.parse()).collect::<Result<Vec<PauliString>>>()?;
        let chi = gens.first().map_or(0, |g| g.len());
        DDGroup::new(chi, gens)
    }

    pub fn from_code(code: &AdditiveCode) -> Self {
        DDGroup { chi: code.n, generators: code.generators.clone() }
    }

    pub fn trivial(chi: usize) -> Self {
        DDGroup { chi, generators: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn size(&self) -> usize {
        1 << self.generators.len()
    }

    /// Product of the generators selected by the bits of `k`.
    pub fn element(&self, k: usize) -> PauliString {
        let mut p = PauliString::identity(self.chi);
        for (i, g) in self.generators.iter().enumerate() {
            if k >> i & 1 == 1 {
                p = &p * g;
            }
        }
        p
    }

    /// All `2^m` elements, element `k` as in [`DDGroup::element`].
    pub fn elements(&self) -> Result<Vec<PauliString>> {
        if self.rank() > MAX_GROUP_DIM {
            return Err(Error::TooLarge(format!("group of rank {}", self.rank())));
        }
        Ok((0..self.size()).map(|k| self.element(k)).collect())
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        let rows = field::symplectic_rows(&self.generators);
        field::in_span(&rows, &p.symplectic_row())
    }

    /// Same group, possibly different generators.
    pub fn same_group(&self, other: &DDGroup) -> bool {
        self.chi == other.chi
            && self.rank() == other.rank()
            && other.generators.iter().all(|g| self.contains(g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Preserve,
    Suppress,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub pauli: PauliString,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<f64>,
    pub role: Role,
}

/// Pauli terms on `n` sites, unique by string.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TermSet {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl TermSet {
    pub fn new(n: usize) -> Self {
        TermSet { n, terms: Vec::new() }
    }

    /// Adds a term; a repeated string accumulates its coefficient and keeps the first role.
    pub fn push(&mut self, pauli: PauliString, coeff: Option<f64>, role: Role) -> Result<()> {
        if pauli.len() != self.n {
            return Err(Error::LengthMismatch(pauli.len(), self.n));
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.pauli == pauli) {
            t.coeff = match (t.coeff, coeff) {
                (Some(a), Some(b)) => Some(a + b),
                (a, b) => a.or(b),
            };
            return Ok(());
        }
        self.terms.push(Term { pauli, coeff, role });
        Ok(())
    }

    pub fn from_paulis(n: usize, ps: &[PauliString], coeff: Option<f64>, role: Role) -> Result<Self> {
        let mut ts = TermSet::new(n);
        for p in ps {
            ts.push(p.clone(), coeff, role)?;
        }
        Ok(ts)
    }

    pub fn with_role(&self, role: Role) -> Vec<PauliString> {
        self.terms.iter().filter(|t| t.role == role).map(|t| t.pauli.clone()).collect()
    }

    pub fn paulis(&self) -> Vec<PauliString> {
        self.terms.iter().map(|t| t.pauli.clone()).collect()
    }

    /// Rejects duplicate strings left by direct construction or deserialisation.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for t in &self.terms {
            if t.pauli.len() != self.n {
                return Err(Error::LengthMismatch(t.pauli.len(), self.n));
            }
            if !seen.insert(&t.pauli) {
                return Err(Error::Invalid(format!("duplicate term {}", t.pauli)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Suppressed,
    Preserved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// Index into the generator list and the generator itself.
    Anticommutes { generator: usize, pauli: PauliString },
    /// Commutes with every generator, so the term lies in the dual code.
    Commutant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermVerdict {
    pub term: PauliString,
    pub status: Status,
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Role>,
}

impl TermVerdict {
    pub fn meets_expectation(&self) -> bool {
        match self.expected {
            Some(Role::Suppress) => self.status == Status::Suppressed,
            Some(Role::Preserve) => self.status == Status::Preserved,
            None => true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub generators: Vec<PauliString>,
    pub terms: Vec<TermVerdict>,
}

impl Verdict {
    /// Every checked term is suppressed.
    pub fn is_universal(&self) -> bool {
        self.terms.iter().all(|t| t.status == Status::Suppressed)
    }

    /// Every term with a role ends up with the matching status.
    pub fn passes(&self) -> bool {
        self.terms.iter().all(TermVerdict::meets_expectation)
    }

    /// First term violating its role, or the first preserved term when no roles are set.
    pub fn counterexample(&self) -> Option<&TermVerdict> {
        self.terms.iter().find(|t| match t.expected {
            None => t.status == Status::Preserved,
            Some(_) => !t.meets_expectation(),
        })
    }

    pub fn preserved(&self) -> Vec<PauliString> {
        self.terms
            .iter()
            .filter(|t| t.status == Status::Preserved)
            .map(|t| t.term.clone())
            .collect()
    }

    pub fn status_of(&self, p: &PauliString) -> Option<Status> {
        self.terms.iter().find(|t| &t.term == p).map(|t| t.status)
    }
}

/// The first generator anticommuting with `t`, if any.
pub fn suppresses<'a>(g: &'a DDGroup, t: &PauliString) -> Result<Option<(usize, &'a PauliString)>> {
    if t.len() != g.chi {
        return Err(Error::LengthMismatch(t.len(), g.chi));
    }
    Ok(g.generators.iter().enumerate().find(|(_, gen)| gen.anticommutes(t)))
}

/// `(−1)^{⟨e, t⟩}` for every element `e` in [`DDGroup::elements`] order.
pub fn twirl_sign_profile(g: &DDGroup, t: &PauliString) -> Result<Vec<i8>> {
    if t.len() != g.chi {
        return Err(Error::LengthMismatch(t.len(), g.chi));
    }
    Ok(g.elements()?.iter().map(|e| if e.anticommutes(t) { -1 } else { 1 }).collect())
}

fn classify(g: &DDGroup, t: &PauliString, expected: Option<Role>) -> TermVerdict {
    match g.generators.iter().position(|gen| gen.anticommutes(t)) {
        Some(i) => TermVerdict {
            term: t.clone(),
            status: Status::Suppressed,
            witness: Witness::Anticommutes { generator: i, pauli: g.generators[i].clone() },
            expected,
        },
        None => TermVerdict {
            term: t.clone(),
            status: Status::Preserved,
            witness: Witness::Commutant,
            expected,
        },
    }
}

/// Classifies every term; order is preserved.
pub fn check_terms(g: &DDGroup, terms: &[PauliString]) -> Result<Verdict> {
    if let Some(t) = terms.iter().find(|t| t.len() != g.chi) {
        return Err(Error::LengthMismatch(t.len(), g.chi));
    }
    let terms = terms.par_iter().map(|t| classify(g, t, None)).collect();
    Ok(Verdict { generators: g.generators.clone(), terms })
}

/// Classifies a term set, recording each term's role as the expectation.
pub fn check_term_set(g: &DDGroup, ts: &TermSet) -> Result<Verdict> {
    if ts.n != g.chi {
        return Err(Error::LengthMismatch(ts.n, g.chi));
    }
    let terms = ts.terms.par_iter().map(|t| classify(g, &t.pauli, Some(t.role))).collect();
    Ok(Verdict { generators: g.generators.clone(), terms })
}

/// Colour sets of size `2..=k` whose pairs all appear in some quotient hyperedge.
pub fn cliques(q: &QuotientGraph, k: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![vec![false; q.chi]; q.chi];
    for cols in q.edges.keys() {
        for (i, &a) in cols.iter().enumerate() {
            for &b in &cols[i + 1..] {
                adj[a - 1][b - 1] = true;
                adj[b - 1][a - 1] = true;
            }
        }
    }
    let mut out = Vec::new();
    for size in 2..=k.min(q.chi) {
        for s in subsets(q.chi, size) {
            if s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| adj[a][b])) {
                out.push(s);
            }
        }
    }
    out
}

/// Terms of weight at most `k` on the quotient, plus all on-site letters.
///
/// With no models the quotient's own hyperedge terms are used. Otherwise every
/// model contributes its terms on every clique of at most `k` colours.
pub fn quotient_terms(q: &QuotientGraph, k: usize, models: &[Model]) -> Result<Vec<PauliString>> {
    let mut out: BTreeSet<PauliString> = BTreeSet::new();
    for c in 0..q.chi {
        for l in ['X', 'Y', 'Z'] {
            out.insert(PauliString::single(q.chi, c, l)?);
        }
    }
    if models.is_empty() {
        out.extend(q.terms());
    } else {
        for s in cliques(q, k) {
            for m in models {
                for t in m.local_terms(s.len())? {
                    out.insert(t.embed(q.chi, &s)?);
                }
            }
        }
    }
    Ok(out.into_iter().filter(|t| t.weight() <= k).collect())
}

/// Checks every term of weight `≤ k` on the quotient.
pub fn check_universal(g: &DDGroup, q: &QuotientGraph, k: usize, models: &[Model]) -> Result<Verdict> {
    if q.chi != g.chi {
        return Err(Error::LengthMismatch(q.chi, g.chi));
    }
    check_terms(g, &quotient_terms(q, k, models)?)
}

/// Basis of all strings commuting with every preserved term.
pub fn selective_nullspace(n: usize, h_par: &[PauliString]) -> Result<Vec<PauliString>> {
    if let Some(t) = h_par.iter().find(|t| t.len() != n) {
        return Err(Error::LengthMismatch(t.len(), n));
    }
    Ok(field::commutant(n, h_par))
}
