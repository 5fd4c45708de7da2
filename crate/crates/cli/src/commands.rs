use std::io::Write;
use std::path::Path;

use twirlc_core::compiler::scaling::{scaling_table, write_scaling_csv, Family};
use twirlc_core::compiler::{check_bounded, check_terms, check_universal, quotient_terms, DDGroup};
use twirlc_core::device::{self, color as dsatur, quotient, validate_coloring, Coloring, DeviceGraph, Hyperedge, Model, QuotientGraph};
use twirlc_core::sequencer::{Mode, Schedule};
use twirlc_core::sim::{build_hamiltonian, kitaev_verify, stroboscopic_error};
use twirlc_core::{io, Error};

use crate::{
    plot, CmdResult, ColorArgs, DeviceArgs, Failure, ModeArg, ScalingArgs, SimulateArgs, VerifyArgs,
    EXIT_COUNTEREXAMPLE, EXIT_INFEASIBLE, EXIT_IO,
};

pub struct Loaded {
    pub graph: DeviceGraph,
    pub coloring: Coloring,
    pub model: Option<Model>,
}

impl Loaded {
    pub fn quotient(&self) -> Result<QuotientGraph, Failure> {
        Ok(quotient(&self.graph, &self.coloring)?)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    io::read(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, contents: &str) -> CmdResult {
    match path {
        Some(p) => Ok(io::write(p, contents)?),
        None => match writeln!(std::io::stdout().lock(), "{contents}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn complete_graph(n: usize, model: Model) -> Result<DeviceGraph, Failure> {
    let edges: Vec<Vec<usize>> = device::subsets(n, 2);
    Ok(DeviceGraph::uniform((0..n).collect(), &edges, model)?)
}

fn with_model(g: DeviceGraph, m: &Model) -> Result<DeviceGraph, Failure> {
    let edges = g
        .hyperedges
        .iter()
        .map(|h| Hyperedge::new(h.sites.clone(), m.clone()))
        .collect::<twirlc_core::Result<Vec<_>>>()?;
    Ok(DeviceGraph::new(g.vertices, edges, g.onsite)?)
}

pub fn load(a: &DeviceArgs) -> Result<Loaded, Failure> {
    let model = a.model.as_deref().map(|m| Model::parse(m, None)).transpose()?;
    let path = Path::new(&a.device);
    let (graph, default_coloring) = if path.is_file() {
        (io::parse_device(&read(path)?, model.as_ref())?, None)
    } else if let Some(n) = a.device.strip_prefix("complete:") {
        let n: usize = n.parse().map_err(|_| Failure::new(EXIT_IO, format!("bad vertex count in {:?}", a.device)))?;
        let g = complete_graph(n, model.clone().unwrap_or(Model::All))?;
        let c = Coloring::new((0..n).map(|v| (v, v + 1)).collect());
        (g, Some(c))
    } else {
        let g = io::bundled_device(&a.device)
            .map_err(|_| Failure::new(EXIT_IO, format!("{}: no such file or bundled device", a.device)))?;
        let g = match &model {
            Some(m) => with_model(g, m)?,
            None => g,
        };
        (g, io::bundled_coloring(&a.device).ok())
    };
    let coloring = match (&a.coloring, &a.seed_order, default_coloring) {
        (Some(p), _, _) => io::parse_coloring(&read(p)?)?,
        (None, Some(p), _) => {
            let order: Vec<usize> = serde_json::from_str(&read(p)?)?;
            dsatur(&graph, Some(&order))
        }
        (None, None, Some(c)) => c,
        (None, None, None) => dsatur(&graph, None),
    };
    Ok(Loaded { graph, coloring, model })
}

pub fn color(a: &ColorArgs) -> CmdResult {
    let l = load(&a.device)?;
    let ok = validate_coloring(&l.graph, &l.coloring);
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&l.coloring)?)?;
    eprintln!("{} colours on {} vertices", l.coloring.num_colors(), l.graph.vertices.len());
    if !ok {
        return Err(Failure::new(EXIT_COUNTEREXAMPLE, "colouring leaves a hyperedge with repeated colours"));
    }
    Ok(())
}

pub fn read_group(path: &Path) -> Result<DDGroup, Failure> {
    let g: DDGroup = serde_json::from_str(&read(path)?)?;
    Ok(DDGroup::new(g.chi, g.generators)?)
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let l = load(&a.device)?;
    let q = l.quotient()?;
    let g = read_group(&a.group)?;
    let models: Vec<Model> = l.model.iter().cloned().collect();
    let verdict = check_universal(&g, &q, a.k, &models)?;
    let bounded = match a.mode {
        ModeArg::Bb => None,
        ModeArg::Bounded => Some(check_bounded(&g, &g.generators, &quotient_terms(&q, a.k, &models)?, &[])?),
    };
    let body = match &bounded {
        None => serde_json::to_string_pretty(&verdict)?,
        Some(b) => serde_json::to_string_pretty(&serde_json::json!({ "verdict": verdict, "bounded": b }))?,
    };
    emit(a.out.as_deref(), &body)?;
    if let Some(t) = verdict.counterexample() {
        return Err(Failure::new(EXIT_COUNTEREXAMPLE, format!("{} commutes with every generator", t.term)));
    }
    if let Some(f) = bounded.as_ref().and_then(|b| b.failures.first()) {
        return Err(Failure::new(
            EXIT_COUNTEREXAMPLE,
            format!("bounded control leaves {} from {}", f.element, f.term),
        ));
    }
    eprintln!("{} terms suppressed", verdict.terms.len());
    Ok(())
}

pub fn scaling(a: &ScalingArgs) -> CmdResult {
    let families: Vec<Family> = if a.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        a.families.iter().map(|f| f.parse()).collect::<twirlc_core::Result<_>>()?
    };
    if a.chi_min == 0 || a.chi_min > a.chi_max {
        return Err(Failure::new(EXIT_IO, format!("empty colour range {}..={}", a.chi_min, a.chi_max)));
    }
    let rows = scaling_table(&families, a.chi_min..=a.chi_max);
    let mut buf = Vec::new();
    write_scaling_csv(&rows, &mut buf)?;
    emit(a.out.as_deref(), String::from_utf8_lossy(&buf).trim_end())?;
    if let Some(p) = &a.plot {
        io::write(p, &plot::svg(&rows))?;
    }
    for r in rows.iter().filter(|r| r.chi <= a.check_upto) {
        let code = match r.family.construct(r.chi) {
            Ok(c) => c,
            Err(Error::Unsupported(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        if code.size() != r.length || code.n != r.chi {
            return Err(Failure::new(
                EXIT_COUNTEREXAMPLE,
                format!("{} at χ={}: built {} frames, table says {}", r.family, r.chi, code.size(), r.length),
            ));
        }
        let v = check_terms(&DDGroup::from_code(&code), &r.family.targets(r.chi)?)?;
        if let Some(t) = v.counterexample() {
            return Err(Failure::new(EXIT_COUNTEREXAMPLE, format!("{} at χ={} misses {}", r.family, r.chi, t.term)));
        }
    }
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> CmdResult {
    if a.kitaev {
        let check = kitaev_verify()?;
        emit(a.out.as_deref(), &serde_json::to_string_pretty(&check)?)?;
        if !check.passed(1e-12) {
            return Err(Failure::new(EXIT_COUNTEREXAMPLE, "Kitaev engineering check failed"));
        }
        return Ok(());
    }
    let (Some(sp), Some(hp)) = (&a.schedule, &a.hamiltonian) else {
        return Err(Failure::new(EXIT_IO, "--schedule and --hamiltonian are required"));
    };
    let s = Schedule::from_json(&read(sp)?)?;
    if s.mode != Mode::BangBang {
        return Err(Failure::new(EXIT_INFEASIBLE, "only bang-bang schedules can be simulated"));
    }
    let ts = io::parse_hamiltonian(&read(hp)?)?;
    let h = build_hamiltonian::<f64>(&ts)?;
    if a.deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Failure::new(EXIT_IO, "slot lengths must be positive"));
    }
    let report = stroboscopic_error(&s, &h, &a.deltas)?;
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    match report.slope {
        Some(s) => eprintln!("slope {s:.3}, {} terms kept", report.coefficients.len()),
        None => eprintln!("no slope: residuals vanish"),
    }
    Ok(())
}
