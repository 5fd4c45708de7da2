//! Interaction hypergraphs, colourings, expansion and quotient graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::field::PauliString;
use crate::sequencer::Schedule;
use crate::{Error, Result};

/// Which Pauli terms a hyperedge may carry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Every non-identity string supported inside the hyperedge.
    All,
    /// Non-identity strings over `{I, Z}`.
    ZType,
    /// `XX`, `YY`, `ZZ` on every pair inside the hyperedge.
    Heisenberg,
    /// The six terms of `σᵢ·(σⱼ×σₖ)` on every triple inside the hyperedge.
    Chirality,
    /// Per-site letter sets; the identity product is excluded.
    Custom(Vec<Vec<char>>),
}

impl Model {
    pub fn parse(name: &str, alphabet: Option<Vec<Vec<char>>>) -> Result<Model> {
        match name.to_ascii_lowercase().as_str() {
            "all" => Ok(Model::All),
            "z" | "z-type" | "ztype" => Ok(Model::ZType),
            "heisenberg" => Ok(Model::Heisenberg),
            "chirality" => Ok(Model::Chirality),
            "custom" => alphabet
                .map(Model::Custom)
                .ok_or_else(|| Error::Parse("custom model needs an alphabet".into())),
            other => Err(Error::Parse(format!("unknown model {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::All => "all",
            Model::ZType => "Z",
            Model::Heisenberg => "heisenberg",
            Model::Chirality => "chirality",
            Model::Custom(_) => "custom",
        }
    }

    /// Terms on `arity` local sites.
    pub fn local_terms(&self, arity: usize) -> Result<Vec<PauliString>> {
        let mut out = Vec::new();
        match self {
            Model::All => {
                if arity > 8 {
                    return Err(Error::TooLarge(format!("{arity}-site full alphabet")));
                }
                out.extend(crate::field::all_paulis(arity).filter(|p| !p.is_identity()));
            }
            Model::ZType => {
                for mask in 1u32..1 << arity {
                    let mut p = PauliString::identity(arity);
                    for i in (0..arity).filter(|i| mask >> i & 1 == 1) {
                        p.set(i, 'Z')?;
                    }
                    out.push(p);
                }
            }
            Model::Heisenberg => {
                for i in 0..arity {
                    for j in i + 1..arity {
                        for c in ['X', 'Y', 'Z'] {
                            let mut p = PauliString::identity(arity);
                            p.set(i, c)?;
                            p.set(j, c)?;
                            out.push(p);
                        }
                    }
                }
            }
            Model::Chirality => {
                for i in 0..arity {
                    for j in i + 1..arity {
                        for k in j + 1..arity {
                            for perm in ["XYZ", "YZX", "ZXY", "XZY", "ZYX", "YXZ"] {
                                let mut p = PauliString::identity(arity);
                                for (site, c) in [i, j, k].into_iter().zip(perm.chars()) {
                                    p.set(site, c)?;
                                }
                                out.push(p);
                            }
                        }
                    }
                }
            }
            Model::Custom(alph) => {
                if alph.len() != arity {
                    return Err(Error::LengthMismatch(alph.len(), arity));
                }
                let mut acc = vec![PauliString::identity(arity)];
                for (i, letters) in alph.iter().enumerate() {
                    let mut next = Vec::new();
                    for p in &acc {
                        for &c in letters {
                            let mut q = p.clone();
                            q.set(i, c)?;
                            next.push(q);
                        }
                    }
                    acc = next;
                }
                out.extend(acc.into_iter().filter(|p| !p.is_identity()));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The same model after reordering sites by `perm` (new site `j` is old site `perm[j]`).
    pub fn permuted(&self, perm: &[usize]) -> Model {
        match self {
            Model::Custom(a) => Model::Custom(perm.iter().map(|&i| a[i].clone()).collect()),
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hyperedge {
    pub sites: Vec<usize>,
    pub model: Model,
}

impl Hyperedge {
    pub fn new(sites: Vec<usize>, model: Model) -> Result<Self> {
        let mut order: Vec<usize> = (0..sites.len()).collect();
        order.sort_by_key(|&i| sites[i]);
        let sorted: Vec<usize> = order.iter().map(|&i| sites[i]).collect();
        if sorted.len() < 2 || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("hyperedge needs ≥2 distinct sites: {sites:?}")));
        }
        Ok(Hyperedge { sites: sorted, model: model.permuted(&order) })
    }
}

/// Interaction hypergraph with per-hyperedge models and on-site noise.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeviceGraph {
    pub vertices: Vec<usize>,
    pub hyperedges: Vec<Hyperedge>,
    pub onsite: BTreeMap<usize, Vec<char>>,
}

impl DeviceGraph {
    /// Builds a graph; vertices without an on-site entry get `X, Y, Z`.
    pub fn new(
        vertices: Vec<usize>,
        hyperedges: Vec<Hyperedge>,
        onsite: BTreeMap<usize, Vec<char>>,
    ) -> Result<Self> {
        let vset: BTreeSet<usize> = vertices.iter().copied().collect();
        for e in &hyperedges {
            if let Some(v) = e.sites.iter().find(|v| !vset.contains(v)) {
                return Err(Error::Invalid(format!("hyperedge uses unknown vertex {v}")));
            }
        }
        let mut onsite = onsite;
        for &v in &vset {
            onsite.entry(v).or_insert_with(|| vec!['X', 'Y', 'Z']);
        }
        let mut hyperedges = hyperedges;
        hyperedges.sort();
        hyperedges.dedup();
        Ok(DeviceGraph { vertices: vset.into_iter().collect(), hyperedges, onsite })
    }

    /// Graph where every hyperedge of `edges` carries `model`.
    pub fn uniform(vertices: Vec<usize>, edges: &[Vec<usize>], model: Model) -> Result<Self> {
        let hs = edges
            .iter()
            .map(|e| Hyperedge::new(e.clone(), model.clone()))
            .collect::<Result<Vec<_>>>()?;
        DeviceGraph::new(vertices, hs, BTreeMap::new())
    }

    pub fn locality(&self) -> usize {
        self.hyperedges.iter().map(|e| e.sites.len()).max().unwrap_or(1)
    }

    pub fn two_section(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for e in &self.hyperedges {
            for (i, &a) in e.sites.iter().enumerate() {
                for &b in &e.sites[i + 1..] {
                    out.insert((a.min(b), a.max(b)));
                }
            }
        }
        out
    }

    fn adjacency(&self) -> BTreeMap<usize, BTreeSet<usize>> {
        let mut adj: BTreeMap<usize, BTreeSet<usize>> =
            self.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for (a, b) in self.two_section() {
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        adj
    }
}

/// Vertex → colour in `1..=χ`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: BTreeMap<usize, usize>,
}

impl Coloring {
    pub fn new(assignment: BTreeMap<usize, usize>) -> Self {
        Coloring { assignment }
    }

    pub fn color(&self, v: usize) -> Option<usize> {
        self.assignment.get(&v).copied()
    }

    /// χ: the largest colour id in use.
    pub fn num_colors(&self) -> usize {
        self.assignment.values().copied().max().unwrap_or(0)
    }

    pub fn classes(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&v, &c) in &self.assignment {
            out.entry(c).or_default().push(v);
        }
        out
    }
}

/// DSATUR on the 2-section. Ties break on degree, then on position in
/// `seed_order` (ascending vertex id by default).
pub fn color(g: &DeviceGraph, seed_order: Option<&[usize]>) -> Coloring {
    let adj = g.adjacency();
    let rank: BTreeMap<usize, usize> = match seed_order {
        Some(order) => {
            let mut r: BTreeMap<usize, usize> =
                order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let base = order.len();
            for (k, &v) in g.vertices.iter().enumerate() {
                r.entry(v).or_insert(base + k);
            }
            r
        }
        None => g.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
    };
    let mut assignment: BTreeMap<usize, usize> = BTreeMap::new();
    let mut neighbour_colors: BTreeMap<usize, BTreeSet<usize>> =
        g.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
    while assignment.len() < g.vertices.len() {
        let v = *g
            .vertices
            .iter()
            .filter(|v| !assignment.contains_key(v))
            .max_by(|a, b| {
                let ka = (neighbour_colors[a].len(), adj[a].len());
                let kb = (neighbour_colors[b].len(), adj[b].len());
                ka.cmp(&kb).then(rank[b].cmp(&rank[a]))
            })
            .expect("uncoloured vertex remains");
        let used = &neighbour_colors[&v];
        let c = (1..).find(|c| !used.contains(c)).unwrap();
        assignment.insert(v, c);
        for u in &adj[&v] {
            neighbour_colors.get_mut(u).unwrap().insert(c);
        }
    }
    Coloring { assignment }
}

/// True iff every vertex is coloured and every hyperedge is rainbow.
pub fn validate_coloring(g: &DeviceGraph, c: &Coloring) -> bool {
    first_violation(g, c).is_none()
}

fn first_violation(g: &DeviceGraph, c: &Coloring) -> Option<Vec<usize>> {
    if let Some(&v) = g.vertices.iter().find(|v| c.color(**v).is_none()) {
        return Some(vec![v]);
    }
    g.hyperedges
        .iter()
        .find(|e| {
            let cs: BTreeSet<usize> = e.sites.iter().map(|&v| c.color(v).unwrap()).collect();
            cs.len() != e.sites.len()
        })
        .map(|e| e.sites.clone())
}

fn require_valid(g: &DeviceGraph, c: &Coloring) -> Result<()> {
    match first_violation(g, c) {
        Some(e) => Err(Error::InvalidColoring(e)),
        None => Ok(()),
    }
}

/// Hyperedge sites and model rewritten in ascending colour order.
fn colour_ordered(e: &Hyperedge, c: &Coloring) -> (Vec<usize>, Model) {
    let mut order: Vec<usize> = (0..e.sites.len()).collect();
    order.sort_by_key(|&i| c.color(e.sites[i]).unwrap());
    let colours = order.iter().map(|&i| c.color(e.sites[i]).unwrap()).collect();
    (colours, e.model.permuted(&order))
}

/// Adds every rainbow vertex tuple whose colour tuple already carries a model.
pub fn expand(g: &DeviceGraph, c: &Coloring) -> Result<DeviceGraph> {
    require_valid(g, c)?;
    let recorded: BTreeSet<(Vec<usize>, Model)> =
        g.hyperedges.iter().map(|e| colour_ordered(e, c)).collect();
    let classes = c.classes();
    let mut edges = g.hyperedges.clone();
    for (colours, model) in recorded {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for col in &colours {
            let members = classes.get(col).cloned().unwrap_or_default();
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    members.iter().map(move |&v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            edges.push(Hyperedge::new(t, model.clone())?);
        }
    }
    DeviceGraph::new(g.vertices.clone(), edges, g.onsite.clone())
}

/// Colour classes collapsed to single sites (site `k` is colour `k + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuotientGraph {
    pub chi: usize,
    /// Sorted colour tuple → merged local terms in colour order.
    pub edges: BTreeMap<Vec<usize>, BTreeSet<PauliString>>,
    /// Colour → merged on-site letters.
    pub onsite: BTreeMap<usize, BTreeSet<char>>,
}

impl QuotientGraph {
    /// Complete quotient on `chi` colours: every `arity`-subset carries `model`.
    pub fn complete(chi: usize, arities: &[usize], model: &Model) -> Result<Self> {
        let mut edges = BTreeMap::new();
        for &k in arities {
            for subset in subsets(chi, k) {
                let colours: Vec<usize> = subset.iter().map(|c| c + 1).collect();
                let terms: BTreeSet<PauliString> = model.local_terms(k)?.into_iter().collect();
                edges.insert(colours, terms);
            }
        }
        let onsite = (1..=chi).map(|c| (c, ['X', 'Y', 'Z'].into_iter().collect())).collect();
        Ok(QuotientGraph { chi, edges, onsite })
    }

    /// Adds `model` terms on every existing hyperedge (and sub-tuples of size ≥ 2).
    pub fn with_model(&self, model: &Model) -> Result<Self> {
        let mut q = self.clone();
        for (cols, terms) in q.edges.iter_mut() {
            terms.extend(model.local_terms(cols.len())?);
        }
        Ok(q)
    }

    /// Every term as a `chi`-site string: hyperedge terms plus on-site letters.
    pub fn terms(&self) -> Vec<PauliString> {
        let mut out: BTreeSet<PauliString> = BTreeSet::new();
        for (cols, terms) in &self.edges {
            let sites: Vec<usize> = cols.iter().map(|c| c - 1).collect();
            for t in terms {
                out.insert(t.embed(self.chi, &sites).expect("colour within range"));
            }
        }
        for (&c, letters) in &self.onsite {
            for &l in letters {
                out.insert(PauliString::single(self.chi, c - 1, l).expect("valid letter"));
            }
        }
        out.into_iter().collect()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn quotient(g: &DeviceGraph, c: &Coloring) -> Result<QuotientGraph> {
    require_valid(g, c)?;
    let mut edges: BTreeMap<Vec<usize>, BTreeSet<PauliString>> = BTreeMap::new();
    for e in &g.hyperedges {
        let (colours, model) = colour_ordered(e, c);
        edges.entry(colours).or_default().extend(model.local_terms(e.sites.len())?);
    }
    let mut onsite: BTreeMap<usize, BTreeSet<char>> = BTreeMap::new();
    for (&v, letters) in &g.onsite {
        onsite.entry(c.color(v).unwrap()).or_default().extend(letters.iter().copied());
    }
    Ok(QuotientGraph { chi: c.num_colors(), edges, onsite })
}

/// Broadcasts a colour-level schedule to every physical qubit.
pub fn lift(s: &Schedule, c: &Coloring) -> Result<Schedule> {
    let mut lifted = BTreeMap::new();
    for (&v, &col) in &c.assignment {
        if col == 0 || col > s.chi {
            return Err(Error::Invalid(format!(
                "vertex {v} has colour {col} but the schedule covers {} colours",
                s.chi
            )));
        }
        lifted.insert(v, s.frames.iter().map(|f| f.letter(col - 1)).collect::<String>());
    }
    let mut out = s.clone();
    out.lifted = Some(lifted);
    Ok(out)
}
