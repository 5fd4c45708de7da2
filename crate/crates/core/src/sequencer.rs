//! Frame orderings, Cayley-graph walks and schedule export.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::compiler::{bounded, DDGroup};
use crate::device::{lift, Coloring};
use crate::field::PauliString;
use crate::kitaev;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    BangBang,
    Bounded,
}

/// A decoupling cycle on `chi` sites.
///
/// Slot `j` evolves freely (or under the active rotation) in frame
/// `frames[j]`; `interpulse[j] = frames[j+1]·frames[j]` with wraparound. In
/// bounded mode `labels[j]` names the generator rotated during slot `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub mode: Mode,
    #[serde(rename = "colors")]
    pub chi: usize,
    #[serde(rename = "L")]
    pub cycle_length: usize,
    pub frames: Vec<PauliString>,
    pub interpulse: Vec<PauliString>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<usize>,
    #[serde(default)]
    pub generators: Vec<PauliString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifted: Option<BTreeMap<usize, String>>,
    #[serde(default = "one")]
    pub lambda: usize,
}

fn one() -> usize {
    1
}

fn interpulses(frames: &[PauliString]) -> Vec<PauliString> {
    (0..frames.len()).map(|j| &frames[(j + 1) % frames.len()] * &frames[j]).collect()
}

impl Schedule {
    fn bang_bang(chi: usize, frames: Vec<PauliString>, generators: Vec<PauliString>) -> Self {
        Schedule {
            mode: Mode::BangBang,
            chi,
            cycle_length: frames.len(),
            interpulse: interpulses(&frames),
            frames,
            labels: Vec::new(),
            generators,
            lifted: None,
            lambda: 1,
        }
    }

    /// Product of all interpulse operations, which is the identity for a closed cycle.
    pub fn net_pulse(&self) -> PauliString {
        self.interpulse.iter().fold(PauliString::identity(self.chi), |acc, p| &acc * p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let s: Schedule = serde_json::from_str(s)?;
        if s.frames.len() != s.cycle_length || s.interpulse.len() != s.cycle_length {
            return Err(Error::Invalid("schedule length disagrees with its frames".into()));
        }
        Ok(s)
    }

    /// Frames as letter rows, one column per colour.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record((1..=self.chi).map(|c| c.to_string()))?;
        for f in &self.frames {
            out.write_record(f.to_string().chars().map(String::from))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Lifted frames, one column per physical qubit.
    pub fn write_lifted_csv<W: Write>(&self, w: W) -> Result<()> {
        let lifted = self.lifted.as_ref().ok_or_else(|| Error::Invalid("schedule is not lifted".into()))?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(lifted.keys().map(|q| q.to_string()))?;
        let cols: Vec<Vec<char>> = lifted.values().map(|s| s.chars().collect()).collect();
        for j in 0..self.cycle_length {
            out.write_record(cols.iter().map(|c| c[j].to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn export<W: Write>(&self, format: &str, mut w: W) -> Result<()> {
        match format {
            "json" => {
                w.write_all(self.to_json()?.as_bytes())?;
                Ok(())
            }
            "csv" => self.write_csv(w),
            "lifted-csv" => self.write_lifted_csv(w),
            other => Err(Error::Unsupported(format!("schedule format {other:?}"))),
        }
    }
}

/// Reflected Gray order: element `i` is the product of the generators at the
/// set bits of `i ⊕ (i >> 1)`.
pub fn gray_order(g: &DDGroup) -> Result<Vec<PauliString>> {
    if g.rank() > crate::compiler::MAX_GROUP_DIM {
        return Err(Error::TooLarge(format!("group of rank {}", g.rank())));
    }
    Ok((0..g.size()).map(|i| g.element(i ^ (i >> 1))).collect())
}

pub fn emit_bang_bang(g: &DDGroup, coloring: Option<&Coloring>) -> Result<Schedule> {
    let s = Schedule::bang_bang(g.chi, gray_order(g)?, g.generators.clone());
    match coloring {
        Some(c) => lift(&s, c),
        None => Ok(s),
    }
}

/// One traversal step: leave `from` along generator `label`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: usize,
    pub label: usize,
}

/// Directed Cayley graph, edge `v → γ·v` for every generator `γ`.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub vertices: Vec<PauliString>,
    pub generators: Vec<PauliString>,
    /// `succ[v][j]` is the vertex reached from `v` along generator `j`.
    pub succ: Vec<Vec<usize>>,
}

impl CayleyGraph {
    pub fn new(g: &DDGroup, gamma: &[PauliString]) -> Result<Self> {
        let vertices = g.elements()?;
        let index: BTreeMap<&PauliString, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut succ = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let row = gamma
                .iter()
                .map(|r| {
                    index
                        .get(&(r * v))
                        .copied()
                        .ok_or_else(|| Error::Invalid(format!("rotation {r} lies outside the group")))
                })
                .collect::<Result<Vec<_>>>()?;
            succ.push(row);
        }
        let graph = CayleyGraph { vertices, generators: gamma.to_vec(), succ };
        if graph.reachable_from(0).len() != graph.vertices.len() {
            return Err(Error::Invalid("the rotation set does not generate the group".into()));
        }
        Ok(graph)
    }

    fn reachable_from(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.succ[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Hierholzer circuit through every labeled edge, starting at the identity.
    pub fn eulerian_circuit(&self) -> Vec<Step> {
        let mut next = vec![0usize; self.vertices.len()];
        let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
        let mut circuit: Vec<Step> = Vec::new();
        let mut parents: Vec<usize> = vec![0];
        while let Some(&(v, _)) = stack.last() {
            if next[v] < self.generators.len() {
                let j = next[v];
                next[v] += 1;
                stack.push((self.succ[v][j], Some(j)));
                parents.push(v);
            } else {
                let (_, label) = stack.pop().unwrap();
                let from = parents.pop().unwrap();
                if let Some(label) = label {
                    circuit.push(Step { from, label });
                }
            }
        }
        circuit.reverse();
        circuit
    }
}

pub fn cayley_cycle(g: &DDGroup, gamma: &[PauliString]) -> Result<(CayleyGraph, Vec<Step>)> {
    let graph = CayleyGraph::new(g, gamma)?;
    let walk = graph.eulerian_circuit();
    Ok((graph, walk))
}

/// Bounded-control schedule along an Eulerian Cayley cycle. Refuses unless the
/// bounded check passes for the given targets and preserved terms.
pub fn emit_bounded(
    g: &DDGroup,
    gamma: &[PauliString],
    targets: &[PauliString],
    preserve: &[PauliString],
    coloring: Option<&Coloring>,
) -> Result<(Schedule, bounded::BoundedVerdict)> {
    let verdict = bounded::check_bounded(g, gamma, targets, preserve)?;
    if let Some(f) = verdict.failures.first() {
        return Err(Error::Verification(format!(
            "bounded control leaks {} from {} ({} failures)",
            f.element,
            f.term,
            verdict.failures.len()
        )));
    }
    let (graph, walk) = cayley_cycle(g, gamma)?;
    let frames: Vec<PauliString> = walk.iter().map(|s| graph.vertices[s.from].clone()).collect();
    let s = Schedule {
        mode: Mode::Bounded,
        chi: g.chi,
        cycle_length: walk.len(),
        interpulse: walk.iter().map(|s| gamma[s.label].clone()).collect(),
        labels: walk.iter().map(|s| s.label).collect(),
        frames,
        generators: gamma.to_vec(),
        lifted: None,
        lambda: 1,
    };
    let s = match coloring {
        Some(c) => lift(&s, c)?,
        None => s,
    };
    Ok((s, verdict))
}

/// Blocks of the bang-bang cycle of `g`, each conjugated by one of `conjugators`.
pub fn conjugated_cycle(g: &DDGroup, conjugators: &[PauliString]) -> Result<Schedule> {
    let inner = gray_order(g)?;
    let frames = conjugators.iter().flat_map(|p| inner.iter().map(move |f| p * f)).collect();
    Ok(Schedule::bang_bang(g.chi, frames, g.generators.clone()))
}

/// Twelve-slot cycle: the `⟨W1, W2⟩` frames conjugated by `X`, `Y`, `Z` on the
/// flipped sublattice.
pub fn kitaev_cycle() -> Result<Schedule> {
    let inst = kitaev::instance()?;
    let g = DDGroup::new(kitaev::SITES, inst.w[..2].to_vec())?;
    conjugated_cycle(&g, &inst.conjugators)
}

/// Three strings `L_S` (one letter `L` on a site set `S`) such that every
/// preserved term commutes with exactly one of them, so that averaging the
/// three conjugations flips the sign of each preserved term. Smallest `S` first.
pub fn sign_flip_conjugators(n: usize, preserve: &[PauliString]) -> Option<[PauliString; 3]> {
    if n > 20 || preserve.is_empty() {
        return None;
    }
    let mut masks: Vec<u32> = (1u32..1 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    masks.into_iter().find_map(|mask| {
        let ps = ['X', 'Y', 'Z'].map(|l| {
            let mut p = PauliString::identity(n);
            for i in (0..n).filter(|i| mask >> i & 1 == 1) {
                p.set(i, l).expect("valid letter");
            }
            p
        });
        preserve
            .iter()
            .all(|t| ps.iter().filter(|p| !p.anticommutes(t)).count() == 1)
            .then_some(ps)
    })
}
