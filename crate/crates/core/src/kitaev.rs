//! Folded six-site honeycomb instance: isotropic exchange on the nine edges of
//! `K₃,₃` engineered into Kitaev couplings.
//!
//! Sites are 0-based here; `{0, 3, 4}` is the conjugated sublattice.

use crate::compiler::{bounded, DDGroup, Role, TermSet};
use crate::field::{self, PauliString};
use crate::{Error, Result};

pub const SITES: usize = 6;
pub const SUBLATTICE_A: [usize; 3] = [0, 3, 4];
pub const SUBLATTICE_B: [usize; 3] = [1, 2, 5];

pub const W1: &str = "ZXZXII";
pub const W2: &str = "IIXZXZ";
pub const W3: &str = "XZIIZX";
/// Fourth kernel operator as printed; it fails to commute with the labeled terms.
pub const W4_PRINTED: &str = "IYXIXY";

pub type Edge = (usize, usize);

/// The nine sublattice-crossing pairs, each with the smaller site first.
pub fn edges() -> Vec<Edge> {
    let mut out: Vec<Edge> = SUBLATTICE_A
        .iter()
        .flat_map(|&a| SUBLATTICE_B.iter().map(move |&b| (a.min(b), a.max(b))))
        .collect();
    out.sort();
    out
}

pub fn bond(e: Edge, letter: char) -> PauliString {
    let mut p = PauliString::identity(SITES);
    p.set(e.0, letter).expect("valid letter");
    p.set(e.1, letter).expect("valid letter");
    p
}

pub fn printed_w() -> [PauliString; 3] {
    [W1, W2, W3].map(|s| s.parse().expect("valid literal"))
}

/// All edge labelings in which every site meets one bond of each letter and
/// the given operators commute with every labeled bond.
pub fn consistent_labelings(ops: &[PauliString]) -> Vec<Vec<(Edge, char)>> {
    let es = edges();
    let letters = ['X', 'Y', 'Z'];
    let mut out = Vec::new();
    for code in 0..3usize.pow(es.len() as u32) {
        let labels: Vec<(Edge, char)> = es
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, letters[code / 3usize.pow(i as u32) % 3]))
            .collect();
        let per_site_ok = (0..SITES).all(|s| {
            let mut seen: Vec<char> =
                labels.iter().filter(|((a, b), _)| *a == s || *b == s).map(|&(_, l)| l).collect();
            seen.sort();
            seen == letters
        });
        if per_site_ok && labels.iter().all(|&(e, l)| ops.iter().all(|w| !w.anticommutes(&bond(e, l)))) {
            out.push(labels);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct KitaevInstance {
    pub labeling: Vec<(Edge, char)>,
    pub w: [PauliString; 4],
    pub conjugators: [PauliString; 3],
}

/// Derives the labeling from W1..W3 and completes the kernel basis.
///
/// The fourth operator is the kernel element outside `⟨W1, W2, W3⟩` that makes
/// the bounded check pass, agrees with the printed string on the most sites,
/// and is lexicographically least among those.
pub fn instance() -> Result<KitaevInstance> {
    let w3 = printed_w();
    let mut found = consistent_labelings(&w3);
    if found.len() != 1 {
        return Err(Error::Verification(format!("{} labelings fit W1..W3", found.len())));
    }
    let labeling = found.remove(0);
    let h_par: Vec<PauliString> = labeling.iter().map(|&(e, l)| bond(e, l)).collect();
    let h_perp = unlabeled(&labeling);
    let kernel = field::commutant(SITES, &h_par);
    let kernel_group = DDGroup::new(SITES, kernel)?;
    let base = DDGroup::new(SITES, w3.to_vec())?;
    let printed: PauliString = W4_PRINTED.parse()?;
    let agree = |p: &PauliString| (0..SITES).filter(|&i| p.letter(i) == printed.letter(i)).count();
    let mut best: Option<(usize, PauliString)> = None;
    for p in kernel_group.elements()? {
        if base.contains(&p) {
            continue;
        }
        let mut gens = w3.to_vec();
        gens.push(p.clone());
        let g = DDGroup::new(SITES, gens.clone())?;
        if !bounded::check_bounded(&g, &gens, &h_perp, &h_par)?.passed() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((score, q)) => agree(&p) > *score || (agree(&p) == *score && p < *q),
        };
        if better {
            best = Some((agree(&p), p));
        }
    }
    let (_, w4) = best.ok_or_else(|| Error::Verification("no bounded-safe fourth kernel operator".into()))?;
    let [a, b, c] = w3;
    Ok(KitaevInstance {
        labeling,
        w: [a, b, c, w4],
        conjugators: ['X', 'Y', 'Z'].map(|l| {
            let mut p = PauliString::identity(SITES);
            for s in SUBLATTICE_A {
                p.set(s, l).expect("valid letter");
            }
            p
        }),
    })
}

fn unlabeled(labeling: &[(Edge, char)]) -> Vec<PauliString> {
    labeling
        .iter()
        .flat_map(|&(e, l)| ['X', 'Y', 'Z'].into_iter().filter(move |&m| m != l).map(move |m| bond(e, m)))
        .collect()
}

impl KitaevInstance {
    /// The nine Kitaev bonds.
    pub fn h_parallel(&self) -> Vec<PauliString> {
        self.labeling.iter().map(|&(e, l)| bond(e, l)).collect()
    }

    /// The eighteen non-Kitaev exchange bonds.
    pub fn h_perp(&self) -> Vec<PauliString> {
        unlabeled(&self.labeling)
    }

    pub fn wp(&self) -> PauliString {
        &self.w[0] * &self.w[1]
    }

    /// `J/4 (XX + YY + ZZ)` on every edge, Kitaev bonds tagged preserve.
    pub fn h_analog(&self, j: f64) -> TermSet {
        let mut ts = TermSet::new(SITES);
        for &(e, l) in &self.labeling {
            for m in ['X', 'Y', 'Z'] {
                let role = if m == l { Role::Preserve } else { Role::Suppress };
                ts.push(bond(e, m), Some(j / 4.0), role).expect("six-site bond");
            }
        }
        ts
    }

    /// `−J/4` on every Kitaev bond.
    pub fn h_comb(&self, j: f64) -> TermSet {
        TermSet::from_paulis(SITES, &self.h_parallel(), Some(-j / 4.0), Role::Preserve).expect("six-site bond")
    }

    /// Terms tagged for the selective search: Kitaev bonds preserved, the rest suppressed.
    pub fn selective_terms(&self) -> TermSet {
        let mut ts = TermSet::from_paulis(SITES, &self.h_parallel(), None, Role::Preserve).expect("six-site bond");
        for p in self.h_perp() {
            ts.push(p, None, Role::Suppress).expect("six-site bond");
        }
        ts
    }
}
