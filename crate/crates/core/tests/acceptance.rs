//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use twirlc_core::codes::rm::{bounded_rm, bounded_rm_length, rm_code, rm_punctured, rm_punctured_for, rm_universal, rm_universal_for};
use twirlc_core::codes::{pg, spin, verify_oa_strength, AdditiveCode, Alphabet};
use twirlc_core::compiler::scaling::{scaling_table, Family};
use twirlc_core::compiler::{
    check_bounded, check_terms, check_universal, min_cover, quotient_terms, selective_nullspace, suppresses,
    DDGroup, Role, TermSet,
};
use twirlc_core::device::{quotient, Model, QuotientGraph};
use twirlc_core::field::{self, PauliString};
use twirlc_core::sequencer::{cayley_cycle, emit_bang_bang, emit_bounded};
use twirlc_core::sim::{build_hamiltonian, first_order_twirl, kitaev_verify, log_space, stroboscopic_error};
use twirlc_core::{io, kitaev, DenseOperator};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ps(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn strs(ps: &[PauliString]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn bits(rows: Vec<String>) -> Vec<String> {
    rows.iter().map(|r| r.chars().map(|c| if c == 'I' { '0' } else { '1' }).collect()).collect()
}

fn criterion_1() -> Check {
    let code = AdditiveCode::from_strs(&["XIX", "XYZ", "YIY", "YZX"], Alphabet::F4).unwrap();
    let oa = code.to_orthogonal_array().unwrap();
    ensure!(oa.runs() == 16 && oa.columns() == 3, "shape {}x{}", oa.runs(), oa.columns());
    ensure!(verify_oa_strength(&oa, 2), "library check rejects strength 2");
    let rows = strs(&oa.rows);
    ensure!(strength(&rows) == 2, "oracle strength {}", strength(&rows));
    for c in 0..3 {
        for l in LETTERS {
            let k = rows.iter().filter(|r| r.chars().nth(c) == Some(l)).count();
            ensure!(k == 4, "column {c} letter {l} appears {k} times");
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    let mut r = rng(0x5eed);
    let mut checked = 0;
    while checked < 200 {
        let n = r.gen_range(1..=4);
        let k = r.gen_range(1..=2 * n);
        let gens: Vec<String> = (0..k).map(|_| random_string(&mut r, n)).collect();
        let Ok(code) = AdditiveCode::from_strs(&gens.iter().map(|s| s.as_str()).collect::<Vec<_>>(), Alphabet::F4)
        else {
            continue;
        };
        let rows = span(&gens);
        let t = strength(&rows);
        let oracle = dual_distance(n, &gens);
        let lib = code.dual_distance().unwrap();
        ensure!(lib == oracle, "{gens:?}: dual distance {lib:?} vs oracle {oracle:?}");
        let expect = oracle.map_or(n, |d| d - 1);
        ensure!(t == expect, "{gens:?}: strength {t} vs d⊥−1 = {expect}");
        ensure!(!has_strength(&rows, t + 1), "{gens:?}: strength exceeds {t}");
        let oa = code.to_orthogonal_array().unwrap();
        ensure!(oa.strength == t && oa.max_strength() == t, "{gens:?}: library strength {}", oa.strength);
        checked += 1;
    }
    Ok(())
}

fn criterion_3() -> Check {
    ensure!(
        bits(rm_code(3).rows()) == ["11111111", "11110000", "11001100", "10101010"],
        "RM(1,3) rows {:?}",
        rm_code(3).rows()
    );
    let u = rm_universal(3, 8).unwrap().rows();
    ensure!(u == ["XXXXXXXX", "XXXXZZZZ", "XXIIXXII", "YZYZYZYZ"], "universal rows {u:?}");
    let p = rm_punctured(3, 7).unwrap().rows();
    ensure!(p == ["XXXXZZZ", "XXIIXXI", "YZYZYZY"], "punctured rows {p:?}");

    let dev = io::bundled_device("heavy_hex").unwrap();
    let q = quotient(&dev, &io::bundled_coloring("heavy_hex").unwrap()).unwrap();
    ensure!(q.chi == 6, "heavy-hex quotient has {} colours", q.chi);

    let uni = rm_universal_for(6).unwrap();
    ensure!(uni.size() == 16, "universal size {}", uni.size());
    let g = DDGroup::from_code(&uni);
    let v = check_universal(&g, &q, 3, &[Model::ZType]).unwrap();
    ensure!(v.is_universal(), "universal RM misses {:?}", v.counterexample().map(|t| t.term.to_string()));
    let targets = quotient_terms(&q, 3, &[Model::ZType]).unwrap();
    ensure!(targets.len() == 18 + 15 + 20, "{} targets", targets.len());
    let gs = strs(&g.generators);
    for t in &targets {
        ensure!(gs.iter().any(|x| anticommutes(x, &t.to_string())), "oracle: {t} undetected");
    }

    let pun = rm_punctured_for(6).unwrap();
    ensure!(pun.size() == 8, "punctured size {}", pun.size());
    let g = DDGroup::from_code(&pun);
    let v = check_universal(&g, &q, 2, &[Model::ZType]).unwrap();
    ensure!(v.is_universal(), "punctured RM misses {:?}", v.counterexample().map(|t| t.term.to_string()));
    let v3 = check_universal(&g, &q, 3, &[Model::ZType]).unwrap();
    let ce = v3.counterexample().ok_or("punctured RM has no weight-3 counterexample")?;
    let t = ce.term.to_string();
    ensure!(ce.term.is_z_type() && weight(&t) == 3, "counterexample {t}");
    ensure!(strs(&g.generators).iter().all(|x| !anticommutes(x, &t)), "oracle: {t} is detected");
    Ok(())
}

fn criterion_4() -> Check {
    let spread = pg::line_code(4, &pg::spread_pg32()).unwrap();
    ensure!(spread.dimension() == 4 && spread.n == 5, "spread code {}x{}", spread.dimension(), spread.n);
    let oa = spread.to_orthogonal_array().unwrap();
    let rows = strs(&oa.rows);
    ensure!(oa.runs() == 16 && strength(&rows) == 2, "spread OA strength {}", strength(&rows));

    let ex = pg::heisenberg_expand(&spread);
    let want = ["XZYIIIXZYXZYXZY", "ZYXIIIYXZZYXYXZ", "IIIXZYZYXXZYYXZ", "IIIZYXXZYZYXZYX"];
    ensure!(ex.rows() == want, "expanded rows {:?}", ex.rows());
    let g = DDGroup::from_code(&ex);
    let pairs = QuotientGraph::complete(15, &[2], &Model::Heisenberg).unwrap();
    ensure!(pairs.edges.len() == 105, "{} pairs", pairs.edges.len());
    let v = check_universal(&g, &pairs, 2, &[Model::Heisenberg]).unwrap();
    ensure!(v.is_universal(), "expansion misses {:?}", v.counterexample().map(|t| t.term.to_string()));
    let gs = strs(&g.generators);
    for t in spin::spin_targets(15, false) {
        ensure!(gs.iter().any(|x| anticommutes(x, &t.to_string())), "oracle: {t} undetected");
    }

    let tri = quotient(&io::bundled_device("trilinear").unwrap(), &io::bundled_coloring("trilinear").unwrap())
        .unwrap();
    ensure!(tri.chi == 4, "trilinear quotient has {} colours", tri.chi);
    let (four, five) = spin::chirality_expand().unwrap();
    let g4 = DDGroup::from_code(&four);
    ensure!(g4.size() == 16, "four-colour group size {}", g4.size());
    let v = check_universal(&g4, &tri, 3, &[]).unwrap();
    ensure!(v.terms.len() == 12 + 18 + 24, "{} trilinear terms", v.terms.len());
    ensure!(v.is_universal(), "chirality code misses {:?}", v.counterexample().map(|t| t.term.to_string()));
    let tri_all = check_universal(&g4, &tri, 3, &[Model::All]).unwrap();
    ensure!(!tri_all.is_universal(), "tailored code is unexpectedly 3-universal");

    let g5 = DDGroup::from_code(&five);
    ensure!(g5.size() == 16, "five-colour group size {}", g5.size());
    let k5 = QuotientGraph::complete(5, &[3], &Model::ZType).unwrap();
    let v = check_universal(&g5, &k5, 3, &[Model::Heisenberg, Model::Chirality]).unwrap();
    ensure!(v.is_universal(), "five-colour code misses {:?}", v.counterexample().map(|t| t.term.to_string()));
    for (g, n) in [(&g4, 4), (&g5, 5)] {
        let gs = strs(&g.generators);
        for t in spin::spin_targets(n, true) {
            ensure!(gs.iter().any(|x| anticommutes(x, &t.to_string())), "oracle: {t} undetected");
        }
    }

    let cap = pg::cap_set(2).unwrap();
    let uni = DDGroup::from_code(&pg::linear_pg_code(2, &cap[..4]).unwrap());
    ensure!(uni.size() == 64, "universal 3-local size {}", uni.size());
    let v = check_universal(&uni, &tri, 3, &[Model::All]).unwrap();
    ensure!(v.is_universal(), "cap code misses {:?}", v.counterexample().map(|t| t.term.to_string()));
    ensure!(
        emit_bang_bang(&g4, None).unwrap().cycle_length == 16 && emit_bang_bang(&uni, None).unwrap().cycle_length == 64,
        "schedule lengths"
    );
    Ok(())
}

fn criterion_5() -> Check {
    let rep = spin::pg22_sudoku_search().unwrap();
    ensure!(rep.code.dimension() == 3 && rep.code.n == 5, "code {}x{}", rep.code.dimension(), rep.code.n);
    ensure!(rep.code.rows() == ["XIZXY", "ZXZYZ", "IZXZY"], "rows {:?}", rep.code.rows());
    ensure!(rep.assignment == spin::PRINTED_ASSIGNMENT, "assignment {:?}", rep.assignment);
    ensure!(rep.orbit_canonical, "assignment is not the orbit representative");
    ensure!(rep.inclusion_maximal, "assignment extends to six cells");
    for chi in [4, 5] {
        let code = rep.code.truncate(chi).unwrap();
        let g = DDGroup::from_code(&code);
        let v = check_terms(&g, &spin::spin_targets(chi, false)).unwrap();
        ensure!(v.is_universal(), "χ={chi} misses {:?}", v.counterexample().map(|t| t.term.to_string()));
        let gs = strs(&g.generators);
        for t in spin::spin_targets(chi, false) {
            ensure!(gs.iter().any(|x| anticommutes(x, &t.to_string())), "oracle: {t} undetected at χ={chi}");
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let inst = kitaev::instance().unwrap();
    let h_par = inst.h_parallel();
    let h_perp = inst.h_perp();
    let basis = selective_nullspace(kitaev::SITES, &h_par).unwrap();
    ensure!(basis.len() == 4, "nullspace dimension {}", basis.len());
    let rows = field::symplectic_rows(&basis);
    for w in &inst.w {
        ensure!(field::in_span(&rows, &w.symplectic_row()), "{w} outside the nullspace");
        ensure!(strs(&h_par).iter().all(|t| !anticommutes(t, &w.to_string())), "oracle: {w} disturbs a bond");
    }
    let cover = min_cover(&inst.w, &h_perp).unwrap();
    ensure!(cover.chosen.len() == 2 && cover.exact, "cover {:?}", cover.chosen);
    let chosen = DDGroup::new(6, cover.generators.clone()).unwrap();
    let pair = DDGroup::new(6, inst.w[..2].to_vec()).unwrap();
    let selective = inst.selective_terms();
    let a = twirlc_core::compiler::check_term_set(&chosen, &selective).unwrap();
    let b = twirlc_core::compiler::check_term_set(&pair, &selective).unwrap();
    ensure!(a.passes() && b.passes(), "cover verdicts fail");
    let sa: Vec<_> = a.terms.iter().map(|t| t.status).collect();
    let sb: Vec<_> = b.terms.iter().map(|t| t.status).collect();
    ensure!(sa == sb, "cover verdicts differ from (W1, W2)");

    let all4 = DDGroup::new(6, inst.w.to_vec()).unwrap();
    for k in 2..4 {
        let v = check_bounded(&all4, &inst.w[..k], &h_perp, &h_par);
        ensure!(v.map_or(true, |v| !v.passed()), "bounded control passes with {k} generators");
    }
    let v = check_bounded(&all4, &inst.w, &h_perp, &h_par).unwrap();
    ensure!(v.passed(), "bounded control fails with four generators: {:?}", v.failures.first());
    let sub = DDGroup::new(6, inst.w[..3].to_vec()).unwrap();
    let v = check_bounded(&sub, &inst.w[..3], &h_perp, &h_par).unwrap();
    ensure!(!v.passed(), "three-generator group passes bounded control");
    Ok(())
}

fn random_hamiltonian(n: usize, terms: &[PauliString], seed: u64) -> DenseOperator<f64> {
    let mut r = rng(seed);
    let mut ts = TermSet::new(n);
    for t in terms {
        ts.push(t.clone(), Some(r.gen_range(-1.0..1.0)), Role::Suppress).unwrap();
    }
    build_hamiltonian(&ts).unwrap()
}

fn slope_in_window(g: &DDGroup, h: &DenseOperator<f64>, name: &str) -> Check {
    let s = emit_bang_bang(g, None).unwrap();
    let rep = stroboscopic_error(&s, h, &log_space(1e-3, 1e-1, 7)).unwrap();
    let slope = rep.slope.ok_or(format!("{name}: no slope"))?;
    ensure!((1.8..=2.2).contains(&slope), "{name}: slope {slope:.3}, residuals {:?}", rep.residuals);
    Ok(())
}

fn criterion_7() -> Check {
    let mut r = rng(7);
    let mut groups: Vec<DDGroup> = vec![
        DDGroup::from_strs(&["X", "Y"]).unwrap(),
        DDGroup::from_strs(&["XIX", "XYZ", "YIY", "YZX"]).unwrap(),
        DDGroup::from_strs(&["XIX", "ZZY"]).unwrap(),
        DDGroup::from_strs(&spin::CHIRALITY_4).unwrap(),
        DDGroup::from_strs(&["XIZXY", "ZXZYZ", "IZXZY"]).unwrap(),
        DDGroup::from_code(&pg::line_code(4, &pg::spread_pg32()).unwrap()),
    ];
    while groups.len() < 9 {
        let n = 2 + groups.len() % 4;
        let gens: Vec<PauliString> = (0..3).map(|_| ps(&random_string(&mut r, n))).collect();
        if let Ok(g) = DDGroup::new(n, gens) {
            groups.push(g);
        }
    }
    for g in &groups {
        let gs = strs(&g.generators);
        for p in field::all_paulis(g.chi) {
            let h = DenseOperator::<f64>::from_pauli(&p, 1.0).unwrap();
            let tw = first_order_twirl(g, &h).unwrap();
            let symbolic = suppresses(g, &p).unwrap().is_some();
            ensure!(symbolic == gs.iter().any(|x| anticommutes(x, &p.to_string())), "oracle disagrees on {p}");
            let want = if symbolic { DenseOperator::zeros(g.chi).unwrap() } else { h.clone() };
            let err = (&tw - &want).max_abs();
            ensure!(err <= 1e-12, "twirl of {p} under {gs:?} off by {err:e}");
        }
    }

    let xy4 = DDGroup::from_strs(&["X", "Y"]).unwrap();
    let h1 = random_hamiltonian(1, &[ps("X"), ps("Y"), ps("Z")], 11);
    slope_in_window(&xy4, &h1, "XY4")?;

    let fig = DDGroup::from_strs(&["XIX", "XYZ", "YIY", "YZX"]).unwrap();
    let two_local: Vec<PauliString> = field::all_paulis(3).filter(|p| (1..=2).contains(&p.weight())).collect();
    slope_in_window(&fig, &random_hamiltonian(3, &two_local, 12), "Fig. 4b group")?;

    let chir = DDGroup::from_strs(&spin::CHIRALITY_4).unwrap();
    slope_in_window(&chir, &random_hamiltonian(4, &spin::spin_targets(4, true), 13), "chirality group")?;

    let k = kitaev_verify().unwrap();
    ensure!(k.passed(1e-12), "kitaev check {k:?}");
    Ok(())
}

fn criterion_8() -> Check {
    let mut groups: Vec<DDGroup> = vec![DDGroup::from_strs(&["XIX", "XYZ", "YIY", "YZX"]).unwrap()];
    for f in Family::ALL {
        for chi in 2..=8 {
            if let Ok(code) = f.construct(chi) {
                groups.push(DDGroup::from_code(&code));
            }
        }
    }
    for chi in [6, 7] {
        groups.push(DDGroup::from_code(&bounded_rm(chi).unwrap()));
    }
    for g in &groups {
        let (graph, walk) = cayley_cycle(g, &g.generators).unwrap();
        let want = g.size() * g.rank();
        ensure!(walk.len() == want, "{:?}: cycle {} vs {want}", strs(&g.generators), walk.len());
        ensure!(graph.vertices.len() == g.size(), "vertex count");
    }

    for chi in [6, 7] {
        let m = ceil_log(2, chi + 1);
        let formula = (1usize << (m + 1)) * (m + 1);
        ensure!(bounded_rm_length(chi) == formula && formula == 64, "χ={chi}: closed form {}", bounded_rm_length(chi));
        let g = DDGroup::from_code(&bounded_rm(chi).unwrap());
        let targets = quotient_terms(&QuotientGraph::complete(chi, &[2], &Model::ZType).unwrap(), 2, &[Model::ZType]).unwrap();
        let (s, _) = emit_bounded(&g, &g.generators, &targets, &[], None).map_err(|e| format!("χ={chi}: {e}"))?;
        ensure!(s.cycle_length == formula, "χ={chi}: bounded schedule {}", s.cycle_length);
    }

    let inst = kitaev::instance().unwrap();
    let g = DDGroup::new(6, inst.w.to_vec()).unwrap();
    let (s, _) = emit_bounded(&g, &inst.w, &inst.h_perp(), &inst.h_parallel(), None).map_err(|e| e.to_string())?;
    ensure!(s.cycle_length == 64, "Kitaev slices {}", s.cycle_length);
    Ok(())
}

fn oracle_generators(f: Family, chi: usize) -> Option<usize> {
    let parity = |even_bound: usize, odd_bound: usize| {
        let even = (1..).map(|k| 2 * k).find(|&h| 1usize << h >= even_bound).unwrap();
        let odd = (0..).map(|k| 2 * k + 1).find(|&h| 1usize << h >= odd_bound).unwrap();
        even.min(odd)
    };
    let table = |pairs: &[(usize, usize)]| pairs.iter().find(|p| p.0 == chi).map(|p| p.1);
    match f {
        Family::ModRm => Some(ceil_log(2, chi + 1)),
        Family::Rm => Some(ceil_log(2, chi.max(2)) + 1),
        Family::LinPgD3 => Some(2 * ceil_log(4, 3 * chi + 1)),
        Family::LinPgD4 => table(&[(6, 6), (17, 8), (41, 10)]),
        Family::AddPgD3 => Some(parity(3 * chi + 1, 3 * chi + 5)),
        Family::ModLinPgD3 => Some(2 * ceil_log(4, chi + 1)),
        Family::ModLinPgD4 => table(&[(5, 4), (12, 6), (34, 8), (82, 10)]),
        Family::ModAddPgD3 => Some(parity(chi + 1, chi + 5)),
    }
}

fn criterion_9() -> Check {
    let rows = scaling_table(&Family::ALL, 2..=64);
    for f in Family::ALL {
        for chi in 2..=64 {
            let row = rows.iter().find(|r| r.family == f && r.chi == chi);
            match (oracle_generators(f, chi), row) {
                (None, None) => {}
                (Some(m), Some(r)) => {
                    ensure!(r.generators == m && r.length == 1u128 << m, "{f} χ={chi}: {} vs {m}", r.generators)
                }
                (want, got) => return Err(format!("{f} χ={chi}: oracle {want:?} vs row {:?}", got.map(|r| r.generators))),
            }
        }
    }
    let mut built = 0;
    for f in Family::ALL {
        for chi in 2..=8 {
            let Some(m) = oracle_generators(f, chi) else { continue };
            let code = match f.construct(chi) {
                Ok(c) => c,
                Err(_) if matches!(f, Family::LinPgD4 | Family::ModLinPgD4) => continue,
                Err(e) => return Err(format!("{f} χ={chi}: {e}")),
            };
            ensure!(code.size() == 1u128 << m && code.n == chi, "{f} χ={chi}: size {}", code.size());
            let g = DDGroup::from_code(&code);
            let v = check_terms(&g, &f.targets(chi).unwrap()).unwrap();
            ensure!(v.is_universal(), "{f} χ={chi} misses {:?}", v.counterexample().map(|t| t.term.to_string()));
            built += 1;
        }
    }
    ensure!(built >= 6 * 7, "only {built} constructions");
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 9] = [
        ("four-generator OA(16,3,4,2)", criterion_1, Duration::from_secs(1)),
        ("strength equals dual distance minus one", criterion_2, Duration::from_secs(30)),
        ("Reed-Muller tables and heavy-hex suppression", criterion_3, Duration::from_secs(5)),
        ("spin-qubit spread, expansion and chirality codes", criterion_4, Duration::from_secs(10)),
        ("PG(2,2) assignment code", criterion_5, Duration::from_secs(10)),
        ("selective Kitaev search", criterion_6, Duration::from_secs(5)),
        ("dense-matrix oracle", criterion_7, Duration::from_secs(300)),
        ("bounded-strength cycle lengths", criterion_8, Duration::from_secs(5)),
        ("scaling table", criterion_9, Duration::from_secs(30)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let took = start.elapsed();
        let outcome = outcome.and_then(|_| {
            if took <= *budget {
                Ok(())
            } else {
                Err(format!("took {took:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
