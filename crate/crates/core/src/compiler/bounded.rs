//! Bounded-strength control: generators are switched on as simultaneous
//! single-qubit rotations, so while `γ` is active a term `t` can acquire any
//! mixture of `t` and `γ` applied on a subset of the sites where they
//! anticommute locally.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::DDGroup;
use crate::field::{self, PauliString};
use crate::{Error, Result};

/// Sites where `a` and `b` carry distinct non-identity letters.
fn local_anticommuting_sites(a: &PauliString, b: &PauliString) -> Vec<usize> {
    (0..a.len()).filter(|&i| a.anticommutes_at(b, i)).collect()
}

/// Strings reachable from `t` by one rotation under any generator in `gamma`.
pub fn bounded_support(t: &PauliString, gamma: &[PauliString]) -> Result<Vec<PauliString>> {
    let mut out: BTreeSet<PauliString> = BTreeSet::new();
    out.insert(t.clone());
    for g in gamma {
        if g.len() != t.len() {
            return Err(Error::LengthMismatch(g.len(), t.len()));
        }
        let sites = local_anticommuting_sites(t, g);
        if sites.len() > 20 {
            return Err(Error::TooLarge(format!("{} rotated sites", sites.len())));
        }
        for mask in 1u32..1 << sites.len() {
            let mut p = t.clone();
            for (k, &s) in sites.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    p.set_bits(s, p.x_bit(s) ^ g.x_bit(s), p.z_bit(s) ^ g.z_bit(s));
                }
            }
            out.insert(p);
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedFailure {
    /// The target or preserved term.
    pub term: PauliString,
    /// Closure element that survives the twirl (or the preserved term itself when it is suppressed).
    pub element: PauliString,
    pub preserved_term: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedVerdict {
    pub generators: Vec<PauliString>,
    pub checked: usize,
    pub failures: Vec<BoundedFailure>,
}

impl BoundedVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Target terms must have every closure element suppressed by `g` or lying in
/// `preserve`. Preserved terms must survive, and their other closure elements
/// must again be suppressed or preserved.
pub fn check_bounded(
    g: &DDGroup,
    gamma: &[PauliString],
    targets: &[PauliString],
    preserve: &[PauliString],
) -> Result<BoundedVerdict> {
    let span = DDGroup { chi: g.chi, generators: gamma.to_vec() };
    if field::pauli_rank(gamma) != g.rank() || !g.generators.iter().all(|x| span.contains(x)) {
        return Err(Error::Invalid("the rotation set does not generate the group".into()));
    }
    let keep: BTreeSet<&PauliString> = preserve.iter().collect();
    let detected = |p: &PauliString| g.generators.iter().any(|x| x.anticommutes(p));
    let mut failures = Vec::new();
    let mut record = |term: &PauliString, element: PauliString, preserved_term: bool| {
        failures.push(BoundedFailure { term: term.clone(), element, preserved_term })
    };
    for t in targets {
        for e in bounded_support(t, gamma)? {
            if !detected(&e) && !keep.contains(&e) {
                record(t, e, false);
            }
        }
    }
    for p in preserve {
        if detected(p) {
            record(p, p.clone(), true);
            continue;
        }
        for e in bounded_support(p, gamma)? {
            if &e != p && !detected(&e) && !keep.contains(&e) {
                record(p, e, true);
            }
        }
    }
    Ok(BoundedVerdict {
        generators: gamma.to_vec(),
        checked: targets.len() + preserve.len(),
        failures,
    })
}

/// [`check_bounded`] with the group's own generators as the rotation set.
pub fn check_bounded_group(g: &DDGroup, targets: &[PauliString], preserve: &[PauliString]) -> Result<BoundedVerdict> {
    check_bounded(g, &g.generators, targets, preserve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rm;
    use crate::compiler::quotient_terms;
    use crate::device::{Model, QuotientGraph};
    use crate::field::paulis;
    use proptest::prelude::*;

    #[test]
    fn z_under_x_rotates_to_y() {
        let s = bounded_support(&"Z".parse().unwrap(), &paulis(&["X"])).unwrap();
        assert_eq!(s, paulis(&["Y", "Z"]));
    }

    #[test]
    fn commuting_term_is_fixed() {
        let s = bounded_support(&"XX".parse().unwrap(), &paulis(&["XI", "IX"])).unwrap();
        assert_eq!(s, paulis(&["XX"]));
    }

    #[test]
    fn rotation_is_sitewise() {
        let s = bounded_support(&"ZZ".parse().unwrap(), &paulis(&["XX"])).unwrap();
        assert_eq!(s, paulis(&["YY", "YZ", "ZY", "ZZ"]));
    }

    fn z_targets(chi: usize, k: usize) -> Vec<PauliString> {
        let q = QuotientGraph::complete(chi, &(2..=k).collect::<Vec<_>>(), &Model::ZType).unwrap();
        quotient_terms(&q, k, &[]).unwrap()
    }

    #[test]
    fn binary_rm_needs_global_z() {
        let x_only = DDGroup::from_code(&rm::rm_code(3).truncate(6).unwrap());
        let targets = z_targets(6, 3);
        assert!(!check_bounded_group(&x_only, &targets, &[]).unwrap().passed());
        let with_z = DDGroup::from_code(&rm::bounded_rm_zzz(6).unwrap());
        assert!(check_bounded_group(&with_z, &targets, &[]).unwrap().passed());
    }

    #[test]
    fn punctured_bounded_rm_passes_zz() {
        for chi in [6, 7] {
            let g = DDGroup::from_code(&rm::bounded_rm(chi).unwrap());
            assert!(check_bounded_group(&g, &z_targets(chi, 2), &[]).unwrap().passed(), "χ={chi}");
        }
    }

    #[test]
    fn substituted_rm_fails_bounded() {
        let plain = DDGroup::from_code(&rm::rm_universal(3, 6).unwrap());
        assert!(!check_bounded_group(&plain, &z_targets(6, 3), &[]).unwrap().passed());
    }

    #[test]
    fn non_generating_set_rejected() {
        let g = DDGroup::from_strs(&["XI", "IX"]).unwrap();
        assert!(check_bounded(&g, &paulis(&["XI"]), &[], &[]).is_err());
    }

    #[test]
    fn empty_rotation_set_reduces_to_detection() {
        let g = DDGroup::trivial(2);
        let v = check_bounded(&g, &[], &paulis(&["ZZ"]), &[]).unwrap();
        assert_eq!(v.failures.len(), 1);
    }

    proptest! {
        #[test]
        fn closure_reaches_fixpoint_after_one_pass(t in "[IXYZ]{4}", g in "[IXYZ]{4}") {
            let t: PauliString = t.parse().unwrap();
            let g: PauliString = g.parse().unwrap();
            let once = bounded_support(&t, std::slice::from_ref(&g)).unwrap();
            let mut twice = BTreeSet::new();
            for e in &once {
                twice.extend(bounded_support(e, std::slice::from_ref(&g)).unwrap());
            }
            prop_assert_eq!(once, twice.into_iter().collect::<Vec<_>>());
        }
    }
}
