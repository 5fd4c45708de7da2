//! Construction choice per target, verification and schedule emission.

use std::fs;
use std::path::Path;

use twirlc_core::codes::rm::{bounded_rm, bounded_rm_zzz};
use twirlc_core::codes::{pg, spin, AdditiveCode, Alphabet};
use twirlc_core::compiler::bounded::BoundedVerdict;
use twirlc_core::compiler::cover::EXACT_LIMIT;
use twirlc_core::compiler::scaling::Family;
use twirlc_core::compiler::{
    check_bounded, check_term_set, check_terms, min_cover, quotient_terms, selective_nullspace, DDGroup, Role,
    TermSet, Verdict,
};
use twirlc_core::device::{lift, Model, QuotientGraph};
use twirlc_core::field::PauliString;
use twirlc_core::sequencer::{conjugated_cycle, emit_bang_bang, emit_bounded, sign_flip_conjugators, Schedule};
use twirlc_core::{io, Error};

use crate::commands::{load, Loaded};
use crate::{CmdResult, CompileArgs, Failure, ModeArg, Target, EXIT_COUNTEREXAMPLE, EXIT_INFEASIBLE, EXIT_IO};

pub fn run(a: &CompileArgs) -> CmdResult {
    let l = load(&a.device)?;
    let q = l.quotient()?;
    if q.chi == 0 {
        return Err(Failure::new(EXIT_IO, "device has no vertices"));
    }
    fs::create_dir_all(&a.out)?;
    match a.target {
        Target::Selective => selective(a, &l, &q),
        t => tabulated(a, t, &l, &q),
    }
}

fn target_terms(t: Target) -> (usize, Vec<Model>) {
    match t {
        Target::Universal2 => (2, vec![Model::All]),
        Target::Universal3 => (3, vec![Model::All]),
        Target::Zz => (2, vec![Model::ZType]),
        Target::Zzz => (3, vec![Model::ZType]),
        Target::Heisenberg => (2, vec![Model::Heisenberg]),
        Target::Chirality => (3, vec![Model::Heisenberg, Model::Chirality]),
        Target::Selective => unreachable!("selective terms come from files"),
    }
}

fn cap_code(chi: usize) -> twirlc_core::Result<AdditiveCode> {
    let cap = pg::cap_set(2)?;
    if chi > cap.len() {
        return Err(Error::Unsupported(format!("no three-local cap code on {chi} colours")));
    }
    pg::linear_pg_code(2, &cap[..chi])
}

type Candidate = (String, twirlc_core::Result<AdditiveCode>);

fn family(f: Family, chi: usize) -> Candidate {
    (f.name().to_string(), f.construct(chi))
}

/// Constructions tried for a target, in order of preference on ties.
fn candidates(t: Target, chi: usize, mode: ModeArg) -> Vec<Candidate> {
    let bounded = mode == ModeArg::Bounded;
    match t {
        Target::Universal2 => vec![family(Family::LinPgD3, chi), family(Family::AddPgD3, chi)],
        Target::Universal3 => vec![("lin-pg-d4".into(), cap_code(chi))],
        Target::Zz if bounded => vec![("rm-bounded".into(), bounded_rm(chi))],
        Target::Zz => vec![family(Family::ModRm, chi)],
        Target::Zzz if bounded => vec![("rm-bounded".into(), bounded_rm_zzz(chi))],
        Target::Zzz => vec![family(Family::Rm, chi)],
        Target::Heisenberg => vec![
            ("pg22-assignment".into(), spin::assignment_code(&spin::PRINTED_ASSIGNMENT).and_then(|c| fit(c, chi))),
            family(Family::ModLinPgD3, chi),
            family(Family::ModAddPgD3, chi),
        ],
        Target::Chirality => vec![
            ("chirality".into(), chirality_code(chi)),
            ("lin-pg-d4".into(), cap_code(chi)),
        ],
        Target::Selective => Vec::new(),
    }
}

/// Keeps the first `chi` columns of a code with at least that many.
fn fit(code: AdditiveCode, chi: usize) -> twirlc_core::Result<AdditiveCode> {
    if chi > code.n {
        return Err(Error::Unsupported(format!("code has only {} columns", code.n)));
    }
    code.truncate(chi)
}

fn chirality_code(chi: usize) -> twirlc_core::Result<AdditiveCode> {
    match chi {
        4 => AdditiveCode::from_strs(&spin::CHIRALITY_4, Alphabet::F4),
        5 => AdditiveCode::from_strs(&spin::CHIRALITY_5, Alphabet::F4),
        _ => Err(Error::Unsupported(format!("no chirality code on {chi} colours"))),
    }
}

struct Checked {
    name: String,
    group: DDGroup,
    verdict: Verdict,
    bounded: Option<BoundedVerdict>,
}

impl Checked {
    fn passed(&self) -> bool {
        self.verdict.passes()
            && self.verdict.counterexample().is_none()
            && self.bounded.as_ref().map_or(true, BoundedVerdict::passed)
    }
}

fn write_json<T: serde::Serialize + ?Sized>(dir: &Path, name: &str, v: &T) -> CmdResult {
    Ok(io::write(&dir.join(name), &serde_json::to_string_pretty(v)?)?)
}

fn write_schedule(dir: &Path, s: &Schedule) -> CmdResult {
    io::write(&dir.join("schedule.json"), &s.to_json()?)?;
    let mut csv = Vec::new();
    s.export("csv", &mut csv)?;
    io::write(&dir.join("schedule.csv"), &String::from_utf8_lossy(&csv))?;
    if s.lifted.is_some() {
        let mut lifted = Vec::new();
        s.export("lifted-csv", &mut lifted)?;
        io::write(&dir.join("lifted.csv"), &String::from_utf8_lossy(&lifted))?;
    }
    Ok(())
}

fn write_checked(dir: &Path, c: &Checked) -> CmdResult {
    write_json(dir, "group.json", &c.group)?;
    write_json(dir, "verdict.json", &c.verdict)?;
    if let Some(b) = &c.bounded {
        write_json(dir, "bounded.json", b)?;
    }
    Ok(())
}

fn failure_for(c: &Checked) -> Failure {
    if let Some(t) = c.verdict.counterexample() {
        return Failure::new(EXIT_COUNTEREXAMPLE, format!("{}: {} is not suppressed", c.name, t.term));
    }
    match c.bounded.as_ref().and_then(|b| b.failures.first()) {
        Some(f) => Failure::new(
            EXIT_COUNTEREXAMPLE,
            format!("{}: bounded control leaves {} from {}", c.name, f.element, f.term),
        ),
        None => Failure::new(EXIT_COUNTEREXAMPLE, format!("{}: verification failed", c.name)),
    }
}

fn tabulated(a: &CompileArgs, t: Target, l: &Loaded, q: &QuotientGraph) -> CmdResult {
    let (k, models) = target_terms(t);
    let targets = quotient_terms(q, k, &models)?;
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    for (name, code) in candidates(t, q.chi, a.mode) {
        let code = match code {
            Ok(c) => c,
            Err(e) => {
                skipped.push(format!("{name}: {e}"));
                continue;
            }
        };
        let group = DDGroup::from_code(&code);
        let verdict = check_terms(&group, &targets)?;
        let bounded = match a.mode {
            ModeArg::Bb => None,
            ModeArg::Bounded => Some(check_bounded(&group, &group.generators, &targets, &[])?),
        };
        checked.push(Checked { name, group, verdict, bounded });
    }
    let Some(first) = checked.first() else {
        return Err(Failure::new(EXIT_INFEASIBLE, format!("no construction applies: {}", skipped.join("; "))));
    };
    let Some(best) = checked.iter().filter(|c| c.passed()).min_by_key(|c| c.group.rank()) else {
        write_checked(&a.out, first)?;
        return Err(failure_for(first));
    };
    write_checked(&a.out, best)?;
    let s = match a.mode {
        ModeArg::Bb => emit_bang_bang(&best.group, Some(&l.coloring))?,
        ModeArg::Bounded => emit_bounded(&best.group, &best.group.generators, &targets, &[], Some(&l.coloring))?.0,
    };
    write_schedule(&a.out, &s)?;
    eprintln!(
        "{}: {} generators, L = {}, {} terms suppressed",
        best.name,
        best.group.rank(),
        s.cycle_length,
        best.verdict.terms.len()
    );
    Ok(())
}

fn read_terms(path: &Path, n: usize, role: Role) -> Result<TermSet, Failure> {
    let ts = io::parse_hamiltonian(&io::read(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?)?;
    if ts.n != n {
        return Err(Failure::new(EXIT_IO, format!("{}: {} sites, quotient has {n}", path.display(), ts.n)));
    }
    let mut out = TermSet::new(n);
    for t in ts.terms {
        out.push(t.pauli, t.coeff, role)?;
    }
    Ok(out)
}

/// Kernel elements offered to the cover: the whole kernel group when small, else a basis.
fn kernel_candidates(n: usize, h_par: &[PauliString]) -> twirlc_core::Result<(Vec<PauliString>, Vec<PauliString>)> {
    let basis = selective_nullspace(n, h_par)?;
    let kernel = DDGroup::new(n, basis.clone())?;
    let mut pool = if kernel.size() - 1 <= EXACT_LIMIT {
        kernel.elements()?.into_iter().filter(|p| !p.is_identity()).collect()
    } else {
        basis.clone()
    };
    pool.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
    Ok((pool, basis))
}

fn selective(a: &CompileArgs, l: &Loaded, q: &QuotientGraph) -> CmdResult {
    let n = q.chi;
    let preserve_path = a
        .preserve
        .as_deref()
        .ok_or_else(|| Failure::new(EXIT_IO, "the selective target needs --preserve"))?;
    let mut terms = read_terms(preserve_path, n, Role::Preserve)?;
    let h_par = terms.paulis();
    let suppress: Vec<PauliString> = match &a.suppress {
        Some(p) => read_terms(p, n, Role::Suppress)?.paulis(),
        None => q.terms().into_iter().filter(|t| !h_par.contains(t)).collect(),
    };
    for t in &suppress {
        if h_par.contains(t) {
            return Err(Failure::new(EXIT_IO, format!("{t} is both preserved and suppressed")));
        }
        terms.push(t.clone(), None, Role::Suppress)?;
    }
    let (pool, basis) = kernel_candidates(n, &h_par)?;
    let cover = min_cover(&pool, &suppress)?;
    let group = DDGroup::new(n, cover.generators.clone())?;
    let verdict = check_term_set(&group, &terms)?;
    let mut out = Checked { name: "selective".into(), group, verdict, bounded: None };
    write_json(&a.out, "cover.json", &cover)?;
    if !out.verdict.passes() {
        write_checked(&a.out, &out)?;
        return Err(failure_for(&out));
    }

    let s = match a.mode {
        ModeArg::Bb => {
            let flip = terms.terms.iter().filter(|t| t.role == Role::Preserve).all(|t| t.coeff.is_some_and(|c| c < 0.0));
            match flip.then(|| sign_flip_conjugators(n, &h_par)).flatten() {
                Some(conj) => lift(&conjugated_cycle(&out.group, &conj)?, &l.coloring)?,
                None => emit_bang_bang(&out.group, Some(&l.coloring))?,
            }
        }
        ModeArg::Bounded => {
            // Grow the rotation set with kernel basis elements until the bounded check passes.
            let mut gamma = out.group.generators.clone();
            let mut extra = basis.iter();
            loop {
                let g = DDGroup::new(n, gamma.clone())?;
                let b = check_bounded(&g, &gamma, &suppress, &h_par)?;
                let passed = b.passed();
                out.group = g;
                out.bounded = Some(b);
                if passed {
                    break;
                }
                let next = extra.by_ref().find(|p| DDGroup::new(n, [gamma.clone(), vec![(*p).clone()]].concat()).is_ok());
                match next {
                    Some(p) => gamma.push(p.clone()),
                    None => {
                        write_checked(&a.out, &out)?;
                        return Err(failure_for(&out));
                    }
                }
            }
            out.verdict = check_term_set(&out.group, &terms)?;
            emit_bounded(&out.group, &gamma, &suppress, &h_par, Some(&l.coloring))?.0
        }
    };
    write_checked(&a.out, &out)?;
    write_schedule(&a.out, &s)?;
    eprintln!(
        "selective: {} generators from a {}-dimensional kernel, L = {}",
        out.group.rank(),
        basis.len(),
        s.cycle_length
    );
    Ok(())
}
