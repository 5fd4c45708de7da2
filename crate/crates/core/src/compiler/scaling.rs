//! Sequence length versus number of colours for every code family.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::rm::{bounded_rm_length, ceil_log2, rm_punctured_for, rm_universal_for};
use crate::codes::{pg, spin, AdditiveCode};
use crate::device::{Model, QuotientGraph};
use crate::field::PauliString;
use crate::{Error, Result};

use super::quotient_terms;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    ModRm,
    Rm,
    LinPgD3,
    LinPgD4,
    AddPgD3,
    ModLinPgD3,
    ModLinPgD4,
    ModAddPgD3,
}

/// Colour counts with a known cap for the three-local linear family.
pub const LIN_PG_D4_CHI: [usize; 3] = [6, 17, 41];
/// Colour counts for the doubled-cap chirality family.
pub const MOD_LIN_PG_D4_CHI: [usize; 4] = [5, 12, 34, 82];

impl Family {
    pub const ALL: [Family; 8] = [
        Family::ModRm,
        Family::Rm,
        Family::LinPgD3,
        Family::LinPgD4,
        Family::AddPgD3,
        Family::ModLinPgD3,
        Family::ModLinPgD4,
        Family::ModAddPgD3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ModRm => "mod-rm",
            Family::Rm => "rm",
            Family::LinPgD3 => "lin-pg-d3",
            Family::LinPgD4 => "lin-pg-d4",
            Family::AddPgD3 => "add-pg-d3",
            Family::ModLinPgD3 => "mod-lin-pg-d3",
            Family::ModLinPgD4 => "mod-lin-pg-d4",
            Family::ModAddPgD3 => "mod-add-pg-d3",
        }
    }

    /// Whether the family is compatible with bounded-strength control.
    pub fn bounded(self) -> bool {
        !matches!(self, Family::ModLinPgD3 | Family::ModLinPgD4 | Family::ModAddPgD3)
    }

    /// Number of generators, hence `L = 2^gens` for bang-bang control.
    pub fn generator_count(self, chi: usize) -> Result<usize> {
        if chi == 0 {
            return Err(Error::Unsupported("zero colours".into()));
        }
        let log4_ceil = |v: usize| {
            let mut e = 0;
            while 4usize.pow(e as u32) < v {
                e += 1;
            }
            e
        };
        Ok(match self {
            Family::ModRm => ceil_log2(chi + 1),
            Family::Rm => ceil_log2(chi.max(2)) + 1,
            Family::LinPgD3 => 2 * log4_ceil(3 * chi + 1),
            Family::LinPgD4 => match LIN_PG_D4_CHI.iter().position(|&c| c == chi) {
                Some(i) => 6 + 2 * i,
                None => return Err(unsupported(self, chi)),
            },
            Family::AddPgD3 => pg::add_pg_dimension(chi),
            Family::ModLinPgD3 => 2 * log4_ceil(chi + 1),
            Family::ModLinPgD4 => match MOD_LIN_PG_D4_CHI.iter().position(|&c| c == chi) {
                Some(i) => 4 + 2 * i,
                None => return Err(unsupported(self, chi)),
            },
            Family::ModAddPgD3 => pg::add_pg_mod_dimension(chi),
        })
    }

    pub fn supports(self, chi: usize) -> bool {
        self.generator_count(chi).is_ok()
    }

    /// Builds the family's code on `chi` colours.
    pub fn construct(self, chi: usize) -> Result<AdditiveCode> {
        match self {
            Family::ModRm => rm_punctured_for(chi),
            Family::Rm => rm_universal_for(chi),
            Family::LinPgD3 => pg::linear_pg_for(chi),
            Family::LinPgD4 => match chi {
                6 => pg::linear_pg_code(2, &pg::cap_set(2)?),
                _ => Err(unsupported(self, chi)),
            },
            Family::AddPgD3 => pg::additive_pg_code(chi),
            Family::ModLinPgD3 => pg::linear_pg_mod(chi),
            Family::ModLinPgD4 => match chi {
                5 => Ok(spin::chirality_expand()?.1),
                _ => Err(unsupported(self, chi)),
            },
            Family::ModAddPgD3 => pg::additive_pg_mod(chi),
        }
    }

    /// Terms the family must suppress on the complete `chi`-colour quotient.
    pub fn targets(self, chi: usize) -> Result<Vec<PauliString>> {
        let (k, models): (usize, Vec<Model>) = match self {
            Family::ModRm => (2, vec![Model::ZType]),
            Family::Rm => (3, vec![Model::ZType]),
            Family::LinPgD3 | Family::AddPgD3 => (2, vec![Model::All]),
            Family::LinPgD4 => (3, vec![Model::All]),
            Family::ModLinPgD3 | Family::ModAddPgD3 => (2, vec![Model::Heisenberg]),
            Family::ModLinPgD4 => (3, vec![Model::Heisenberg, Model::Chirality]),
        };
        let q = QuotientGraph::complete(chi, &[2], &Model::ZType)?;
        quotient_terms(&q, k, &models)
    }
}

fn unsupported(f: Family, chi: usize) -> Error {
    Error::Unsupported(format!("{} has no construction at χ={chi}", f.name()))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub family: Family,
    pub chi: usize,
    pub generators: usize,
    /// Bang-bang length `2^generators`.
    pub length: u128,
    /// Eulerian Cayley-cycle length when the family allows bounded control.
    pub bounded_length: Option<u128>,
    /// Linear reference `4χ`.
    pub baseline: usize,
}

/// One row per `(family, χ)` with a defined generator count; unsupported
/// colour counts of the three-local families are skipped.
pub fn scaling_table(families: &[Family], chis: impl IntoIterator<Item = usize> + Clone) -> Vec<ScalingRow> {
    let mut rows = Vec::new();
    for &f in families {
        for chi in chis.clone() {
            let Ok(m) = f.generator_count(chi) else { continue };
            let length = 1u128 << m;
            // The RM families add a global Z generator for bounded control.
            let bounded_length = f.bounded().then(|| match f {
                Family::ModRm => bounded_rm_length(chi) as u128,
                Family::Rm => (length << 1) * (m as u128 + 1),
                _ => length * m as u128,
            });
            rows.push(ScalingRow { family: f, chi, generators: m, length, bounded_length, baseline: 4 * chi });
        }
    }
    rows
}

pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["family", "chi", "generators", "L", "L_bounded", "baseline_4chi"])?;
    for r in rows {
        out.write_record([
            r.family.name().to_string(),
            r.chi.to_string(),
            r.generators.to_string(),
            r.length.to_string(),
            r.bounded_length.map(|b| b.to_string()).unwrap_or_default(),
            r.baseline.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
