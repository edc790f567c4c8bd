//! Planar diagram (PD) codes, framed links, diagram families, Wirtinger
//! presentations and Legendrian front invariants.
//!
//! PD convention: each crossing lists its four edge labels counterclockwise,
//! starting from the incoming under-strand. For the right-handed trefoil
//! (closure of the 2-braid `s1^3`, edges numbered along the knot)
//! this gives `[[6,4,1,3],[4,2,5,1],[2,6,3,5]]`.
//!
//! A crossing `[a,b,c,d]` is positive when the over-strand runs from `d` to `b`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::{GroupPresentation, Word};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("edge {0} appears {1} times in the crossings (expected 2)")]
    EdgeMultiplicity(u32, usize),
    #[error("edge {0} has no component label")]
    MissingComponent(u32),
    #[error("component labels must be exactly 1..={0}, found {1:?}")]
    ComponentLabels(usize, Vec<usize>),
    #[error("edges of one strand carry different component labels ({0} and {1})")]
    ComponentClash(usize, usize),
    #[error("component {0} is not a single closed strand")]
    ComponentNotConnected(usize),
    #[error("under-strand orientations are inconsistent along component {0}")]
    OrientationInconsistent(usize),
    #[error("diagram is disconnected")]
    DisconnectedDiagram,
    #[error("{got} framings given for {expected} components")]
    FramingCount { got: usize, expected: usize },
    #[error("family parameter must be positive, got {0}")]
    BadFamilyParameter(i64),
    #[error("front: down-up cusp difference {0} is odd")]
    OddCuspParity(i64),
    #[error("front: {up} up + {down} down cusps do not match {right} right cusps")]
    CuspCountMismatch { right: i64, up: i64, down: i64 },
    #[error("front: crossing signs must be +1 or -1, got {0}")]
    BadCrossingSign(i64),
    #[error("front {0} carries no framing")]
    MissingFraming(usize),
    #[error(transparent)]
    Json(#[from] JsonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid JSON: {0}")]
pub struct JsonError(pub String);

impl From<serde_json::Error> for DiagramError {
    fn from(e: serde_json::Error) -> Self {
        DiagramError::Json(JsonError(e.to_string()))
    }
}

/// Oriented data of one crossing derived from the PD code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub under_in: u32,
    pub under_out: u32,
    pub over_in: u32,
    pub over_out: u32,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDCode {
    crossings: Vec<[u32; 4]>,
    components: BTreeMap<u32, usize>,
    oriented: Vec<Crossing>,
    // edges of each component in traversal order
    strands: Vec<Vec<u32>>,
}

impl PDCode {
    /// Validates the code and derives orientations. Edges listed in
    /// `components` but absent from every crossing are crossingless loops.
    pub fn new(crossings: Vec<[u32; 4]>, components: BTreeMap<u32, usize>) -> Result<Self, DiagramError> {
        let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (s, &e) in x.iter().enumerate() {
                occ.entry(e).or_default().push((c, s));
            }
        }
        for (&e, v) in &occ {
            if v.len() != 2 {
                return Err(DiagramError::EdgeMultiplicity(e, v.len()));
            }
            if !components.contains_key(&e) {
                return Err(DiagramError::MissingComponent(e));
            }
        }
        let labels: BTreeSet<usize> = components.values().copied().collect();
        let mu = labels.len();
        if labels != (1..=mu).collect() {
            return Err(DiagramError::ComponentLabels(mu, labels.into_iter().collect()));
        }

        // walk every strand cycle
        let mut seen: HashSet<u32> = HashSet::new();
        let mut strands: Vec<Option<Vec<u32>>> = vec![None; mu];
        // (crossing, slot) -> true if the edge leaves the crossing there
        let mut leaves: HashMap<(usize, usize), bool> = HashMap::new();
        for &e0 in components.keys() {
            if seen.contains(&e0) {
                continue;
            }
            let comp = components[&e0];
            let Some(o) = occ.get(&e0) else {
                seen.insert(e0);
                if strands[comp - 1].replace(vec![e0]).is_some() {
                    return Err(DiagramError::ComponentNotConnected(comp));
                }
                continue;
            };
            // tentative direction: e0 leaves at its first occurrence
            let start = o[0];
            let mut edges = Vec::new();
            let mut passes = Vec::new(); // (crossing, in slot, out slot)
            let mut out_at = start;
            loop {
                let (c, s) = out_at;
                let e = crossings[c][s];
                seen.insert(e);
                if components[&e] != comp {
                    return Err(DiagramError::ComponentClash(comp, components[&e]));
                }
                edges.push(e);
                let other = occ[&e].iter().copied().find(|&p| p != out_at).unwrap_or(out_at);
                let (c2, s2) = other;
                let next = (c2, (s2 + 2) % 4);
                passes.push((c2, s2, next.1));
                if next == start {
                    break;
                }
                out_at = next;
            }
            let forward = passes.iter().filter(|p| p.1 == 0).count();
            let backward = passes.iter().filter(|p| p.1 == 2).count();
            let reverse = match (forward, backward) {
                (_, 0) if forward > 0 => false,
                (0, _) if backward > 0 => true,
                (0, 0) => {
                    // only over-passes: orientation is not recorded in the code;
                    // follow increasing labels from the smallest edge
                    let k = edges.len();
                    let i = (0..k).min_by_key(|&i| edges[i]).unwrap();
                    edges[(i + 1) % k] > edges[(i + k - 1) % k]
                }
                _ => return Err(DiagramError::OrientationInconsistent(comp)),
            };
            for &(c, si, so) in &passes {
                let (si, so) = if reverse { (so, si) } else { (si, so) };
                leaves.insert((c, so), true);
                leaves.insert((c, si), false);
            }
            if reverse {
                // traversal order runs against the orientation
                edges.reverse();
            }
            if strands[comp - 1].replace(edges).is_some() {
                return Err(DiagramError::ComponentNotConnected(comp));
            }
        }
        let strands: Vec<Vec<u32>> = strands
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or(DiagramError::ComponentNotConnected(i + 1)))
            .collect::<Result<_, _>>()?;

        let oriented = crossings
            .iter()
            .enumerate()
            .map(|(c, x)| {
                let over_from_d = !leaves[&(c, 3)];
                Crossing {
                    under_in: x[0],
                    under_out: x[2],
                    over_in: if over_from_d { x[3] } else { x[1] },
                    over_out: if over_from_d { x[1] } else { x[3] },
                    sign: if over_from_d { 1 } else { -1 },
                }
            })
            .collect();
        Ok(Self { crossings, components, oriented, strands })
    }

    /// Components are assigned by strand tracing, numbered by smallest edge.
    pub fn from_crossings(crossings: Vec<[u32; 4]>) -> Result<Self, DiagramError> {
        let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (s, &e) in x.iter().enumerate() {
                occ.entry(e).or_default().push((c, s));
            }
        }
        for (&e, v) in &occ {
            if v.len() != 2 {
                return Err(DiagramError::EdgeMultiplicity(e, v.len()));
            }
        }
        let mut components = BTreeMap::new();
        let mut next = 1;
        for &e0 in occ.keys() {
            if components.contains_key(&e0) {
                continue;
            }
            let start = occ[&e0][0];
            let mut at = start;
            loop {
                let e = crossings[at.0][at.1];
                components.insert(e, next);
                let other = occ[&e].iter().copied().find(|&p| p != at).unwrap_or(at);
                at = (other.0, (other.1 + 2) % 4);
                if at == start {
                    break;
                }
            }
            next += 1;
        }
        Self::new(crossings, components)
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn oriented_crossings(&self) -> &[Crossing] {
        &self.oriented
    }

    pub fn components(&self) -> &BTreeMap<u32, usize> {
        &self.components
    }

    pub fn component_of(&self, edge: u32) -> usize {
        self.components[&edge]
    }

    pub fn num_components(&self) -> usize {
        self.strands.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Edges of component `k` (1-based) in orientation order.
    pub fn strand(&self, k: usize) -> &[u32] {
        &self.strands[k - 1]
    }

    pub fn writhe(&self) -> i64 {
        self.oriented.iter().map(|c| c.sign as i64).sum()
    }

    /// Linking number of components `i != j` (1-based).
    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        let s: i64 = self
            .oriented
            .iter()
            .filter(|c| {
                let a = self.component_of(c.under_in);
                let b = self.component_of(c.over_in);
                (a == i && b == j) || (a == j && b == i)
            })
            .map(|c| c.sign as i64)
            .sum();
        s / 2
    }

    /// Writhe of the self-crossings of component `k`.
    pub fn self_writhe(&self, k: usize) -> i64 {
        self.oriented
            .iter()
            .filter(|c| self.component_of(c.under_in) == k && self.component_of(c.over_in) == k)
            .map(|c| c.sign as i64)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let mu = self.num_components();
        let mut parent: Vec<usize> = (0..mu).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for c in &self.oriented {
            let a = find(&mut parent, self.component_of(c.under_in) - 1);
            let b = find(&mut parent, self.component_of(c.over_in) - 1);
            parent[a] = b;
        }
        (0..mu).map(|x| find(&mut parent, x)).collect::<BTreeSet<_>>().len() <= 1
    }

    /// Same diagram with every crossing switched.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .oriented
            .iter()
            .zip(&self.crossings)
            .map(|(o, x)| {
                // the old over-strand becomes the under-strand; rotate so it starts first
                if o.over_in == x[1] {
                    [x[1], x[2], x[3], x[0]]
                } else {
                    [x[3], x[0], x[1], x[2]]
                }
            })
            .collect();
        Self::new(crossings, self.components.clone()).expect("mirror of a valid code is valid")
    }

    pub fn to_json_value(&self) -> PDJson {
        PDJson {
            pd: self.crossings.clone(),
            components: Some(self.components.iter().map(|(e, c)| (e.to_string(), *c)).collect()),
            framings: None,
        }
    }
}

/// `{"pd":[[1,4,2,3],...],"components":{"1":1,...},"framings":[0,-1]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDJson {
    pub pd: Vec<[u32; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framings: Option<Vec<i64>>,
}

impl PDJson {
    pub fn to_pd(&self) -> Result<PDCode, DiagramError> {
        match &self.components {
            None => PDCode::from_crossings(self.pd.clone()),
            Some(m) => {
                let mut comps = BTreeMap::new();
                for (k, &v) in m {
                    let e: u32 = k
                        .trim()
                        .parse()
                        .map_err(|_| DiagramError::Json(JsonError(format!("bad edge label {k:?}"))))?;
                    comps.insert(e, v);
                }
                PDCode::new(self.pd.clone(), comps)
            }
        }
    }

    pub fn to_framed_link(&self) -> Result<FramedLink, DiagramError> {
        let pd = self.to_pd()?;
        let framings = self.framings.clone().unwrap_or_else(|| vec![0; pd.num_components()]);
        FramedLink::new(pd, framings)
    }
}

impl std::str::FromStr for PDCode {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw: PDJson = serde_json::from_str(s)?;
        raw.to_pd()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedLink {
    pub pd: PDCode,
    pub framings: Vec<i64>,
}

impl FramedLink {
    pub fn new(pd: PDCode, framings: Vec<i64>) -> Result<Self, DiagramError> {
        if framings.len() != pd.num_components() {
            return Err(DiagramError::FramingCount { got: framings.len(), expected: pd.num_components() });
        }
        Ok(Self { pd, framings })
    }

    /// Framings on the diagonal, pairwise linking numbers off it.
    pub fn linking_matrix(&self) -> crate::matrix::IntMatrix {
        let mu = self.pd.num_components();
        let mut q = crate::matrix::IntMatrix::zeros(mu, mu);
        for i in 0..mu {
            q[(i, i)] = self.framings[i];
            for j in 0..i {
                let lk = self.pd.linking_number(i + 1, j + 1);
                q[(i, j)] = lk;
                q[(j, i)] = lk;
            }
        }
        q
    }
}

// ---------------------------------------------------------------------------
// Diagram families, built from cap / crossing / cup events read top to bottom.

#[derive(Debug, Clone, Copy)]
enum Event {
    /// New arc occupying positions `i, i+1`.
    Cap(usize),
    /// Joins positions `i, i+1`.
    Cup(usize),
    /// Positions `i, i+1` swap; `true` puts the strand moving right-to-left
    /// on top, which is a positive crossing when both strands run downward.
    Cross(usize, bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Port {
    Bend(usize, u8),
    // corners: 0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right
    Cross(usize, u8),
}

impl Port {
    fn through(self) -> Port {
        match self {
            Port::Bend(b, s) => Port::Bend(b, 1 - s),
            Port::Cross(c, k) => Port::Cross(c, 3 - k),
        }
    }
}

fn build_diagram(events: &[Event]) -> PDCode {
    let mut links: HashMap<Port, Port> = HashMap::new();
    let mut slots: Vec<Port> = Vec::new();
    let mut caps = Vec::new();
    let mut over: Vec<bool> = Vec::new();
    let mut bends = 0;
    let link = |a: Port, b: Port, links: &mut HashMap<Port, Port>| {
        links.insert(a, b);
        links.insert(b, a);
    };
    for ev in events {
        match *ev {
            Event::Cap(i) => {
                caps.push(bends);
                slots.insert(i, Port::Bend(bends, 1));
                slots.insert(i, Port::Bend(bends, 0));
                bends += 1;
            }
            Event::Cup(i) => {
                link(slots[i], Port::Bend(bends, 0), &mut links);
                link(slots[i + 1], Port::Bend(bends, 1), &mut links);
                slots.drain(i..i + 2);
                bends += 1;
            }
            Event::Cross(i, tr_over) => {
                let c = over.len();
                over.push(tr_over);
                link(slots[i], Port::Cross(c, 0), &mut links);
                link(slots[i + 1], Port::Cross(c, 1), &mut links);
                slots[i] = Port::Cross(c, 2);
                slots[i + 1] = Port::Cross(c, 3);
            }
        }
    }
    assert!(slots.is_empty(), "unclosed strands in diagram events");

    let mut label: HashMap<Port, u32> = HashMap::new();
    let mut incoming: HashSet<Port> = HashSet::new();
    let mut components = BTreeMap::new();
    let mut visited: HashSet<Port> = HashSet::new();
    let mut next_label = 1u32;
    let mut comp = 0usize;
    for &b in &caps {
        let start = Port::Bend(b, 0);
        if visited.contains(&start) {
            continue;
        }
        comp += 1;
        // crossing visits: (in port, out port)
        let mut visits = Vec::new();
        let mut q = start;
        loop {
            visited.insert(q);
            let p = links[&q];
            visited.insert(p);
            if let Port::Cross(..) = p {
                visits.push((p, p.through()));
            }
            q = p.through();
            if q == start {
                break;
            }
        }
        let k = visits.len() as u32;
        if k == 0 {
            components.insert(next_label, comp);
            next_label += 1;
            continue;
        }
        for j in 0..visits.len() {
            let e = next_label + j as u32;
            label.insert(visits[j].1, e);
            let (nin, _) = visits[(j + 1) % visits.len()];
            label.insert(nin, e);
            incoming.insert(nin);
            components.insert(e, comp);
        }
        next_label += k;
    }
    // counterclockwise corner order: top-right, top-left, bottom-left, bottom-right
    const CCW: [u8; 4] = [1, 0, 2, 3];
    let crossings = over
        .iter()
        .enumerate()
        .map(|(c, &tr_over)| {
            let under = if tr_over { [0u8, 3] } else { [1u8, 2] };
            let uin = *under
                .iter()
                .find(|&&k| incoming.contains(&Port::Cross(c, k)))
                .expect("under-strand has an incoming end");
            let start = CCW.iter().position(|&k| k == uin).unwrap();
            let mut x = [0u32; 4];
            for (i, slot) in x.iter_mut().enumerate() {
                *slot = label[&Port::Cross(c, CCW[(start + i) % 4])];
            }
            x
        })
        .collect();
    PDCode::new(crossings, components).expect("family diagrams are valid")
}

/// Clasp handedness of the twist-knot family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clasp {
    /// `n = 1` is the figure-eight knot; `Delta = n t - (2n+1) + n t^-1`.
    #[default]
    Standard,
    /// `n = 1` is a trefoil; `Delta = n t - (2n-1) + n t^-1`.
    Alternate,
}

/// Twist knot with `n` full twists and a clasp (`2n + 2` crossings).
pub fn twist_knot(n: i64) -> Result<PDCode, DiagramError> {
    twist_knot_with_clasp(n, Clasp::Standard)
}

pub fn twist_knot_with_clasp(n: i64, clasp: Clasp) -> Result<PDCode, DiagramError> {
    if n < 1 {
        return Err(DiagramError::BadFamilyParameter(n));
    }
    // 4-plat: twist region s2^(2n), then the clasp s1^-1 s2 (or s1 s2^-1)
    let mut ev = vec![Event::Cap(0), Event::Cap(2)];
    ev.extend((0..2 * n).map(|_| Event::Cross(1, true)));
    let std = clasp == Clasp::Standard;
    ev.push(Event::Cross(0, !std));
    ev.push(Event::Cross(1, std));
    ev.extend([Event::Cup(2), Event::Cup(0)]);
    Ok(build_diagram(&ev))
}

/// The `(2, 2n)` torus link: closure of the 2-braid `s1^(2n)`, both
/// components oriented along the braid.
pub fn torus_link_2_2n(n: i64) -> Result<PDCode, DiagramError> {
    if n < 1 {
        return Err(DiagramError::BadFamilyParameter(n));
    }
    Ok(two_braid_closure(2 * n as usize))
}

/// Closure of the 2-braid `s1^k` (a knot for odd `k`).
pub fn two_braid_closure(k: usize) -> PDCode {
    let mut ev = vec![Event::Cap(0), Event::Cap(1)];
    ev.extend((0..k).map(|_| Event::Cross(0, true)));
    ev.extend([Event::Cup(1), Event::Cup(0)]);
    build_diagram(&ev)
}

pub fn unknot() -> PDCode {
    build_diagram(&[Event::Cap(0), Event::Cup(0)])
}

pub fn trefoil() -> PDCode {
    two_braid_closure(3)
}

pub fn hopf_link() -> PDCode {
    two_braid_closure(2)
}

/// Two-component unlink drawn with one circle passing over the other twice.
pub fn split_unlink() -> PDCode {
    build_diagram(&[
        Event::Cap(0),
        Event::Cap(2),
        Event::Cross(1, true),
        Event::Cross(1, false),
        Event::Cup(2),
        Event::Cup(0),
    ])
}

// ---------------------------------------------------------------------------
// Wirtinger presentation

#[derive(Debug, Clone)]
pub struct Wirtinger {
    pub group: GroupPresentation,
    /// Image of each generator (a meridian) in the component variables.
    pub coloring: Vec<LaurentPoly>,
    /// Component (1-based) of each generator.
    pub generator_component: Vec<usize>,
    pub variables: Vec<String>,
}

/// Component variable names: `t` for a knot, `t1, t2, ...` otherwise.
pub fn component_variables(mu: usize) -> Vec<String> {
    if mu == 1 {
        vec!["t".to_string()]
    } else {
        (1..=mu).map(|i| format!("t{i}")).collect()
    }
}

/// One generator per arc (edges joined through over-passes), one relator per crossing.
pub fn wirtinger(pd: &PDCode) -> Result<Wirtinger, DiagramError> {
    if !pd.is_connected() {
        return Err(DiagramError::DisconnectedDiagram);
    }
    let edges: Vec<u32> = pd.components().keys().copied().collect();
    let index: HashMap<u32, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for c in pd.oriented_crossings() {
        let a = find(&mut parent, index[&c.over_in]);
        let b = find(&mut parent, index[&c.over_out]);
        let (lo, hi) = (a.min(b), a.max(b));
        parent[hi] = lo;
    }
    let mut arc_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut arc = vec![0; edges.len()];
    for i in 0..edges.len() {
        let r = find(&mut parent, i);
        let n = arc_of_root.len();
        arc[i] = *arc_of_root.entry(r).or_insert(n);
    }
    let narcs = arc_of_root.len();
    let mut generator_component = vec![0; narcs];
    for (i, &e) in edges.iter().enumerate() {
        generator_component[arc[i]] = pd.component_of(e);
    }
    let gen = |e: u32| Word::generator(arc[index[&e]]);
    let relators = pd
        .oriented_crossings()
        .iter()
        .map(|c| {
            let o = gen(c.over_in);
            let (x_in, x_out) = (gen(c.under_in), gen(c.under_out));
            let conj = if c.sign > 0 {
                o.concat(&x_in).concat(&o.inverse())
            } else {
                o.inverse().concat(&x_in).concat(&o)
            };
            conj.concat(&x_out.inverse())
        })
        .collect();
    let names = (1..=narcs).map(|i| format!("x{i}")).collect();
    let variables = component_variables(pd.num_components());
    let coloring = generator_component
        .iter()
        .map(|&k| LaurentPoly::var(&variables, k - 1))
        .collect();
    Ok(Wirtinger {
        group: GroupPresentation::new(names, relators).expect("relators use known arcs"),
        coloring,
        generator_component,
        variables,
    })
}

// ---------------------------------------------------------------------------
// Legendrian fronts

/// Combinatorial summary of one component of a Legendrian front.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianFront {
    /// Signs of the self-crossings.
    pub crossings: Vec<i64>,
    pub right_cusps: i64,
    pub up_cusps: i64,
    pub down_cusps: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LegendrianInvariants {
    pub tb: i64,
    pub rot: i64,
}

impl LegendrianFront {
    /// Standard unknot front: two cusps, no crossings.
    pub fn unknot() -> Self {
        Self { crossings: vec![], right_cusps: 1, up_cusps: 1, down_cusps: 1, framing: None }
    }

    pub fn with_framing(mut self, framing: i64) -> Self {
        self.framing = Some(framing);
        self
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().sum()
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        if let Some(&s) = self.crossings.iter().find(|&&s| s != 1 && s != -1) {
            return Err(DiagramError::BadCrossingSign(s));
        }
        let diff = self.down_cusps - self.up_cusps;
        if diff % 2 != 0 {
            return Err(DiagramError::OddCuspParity(diff));
        }
        if self.right_cusps < 1
            || self.up_cusps < 0
            || self.down_cusps < 0
            || self.up_cusps + self.down_cusps != 2 * self.right_cusps
        {
            return Err(DiagramError::CuspCountMismatch {
                right: self.right_cusps,
                up: self.up_cusps,
                down: self.down_cusps,
            });
        }
        Ok(())
    }

    /// `tb = writhe - #right cusps`, `rot = (#down - #up) / 2`.
    pub fn invariants(&self) -> Result<LegendrianInvariants, DiagramError> {
        self.validate()?;
        Ok(LegendrianInvariants {
            tb: self.writhe() - self.right_cusps,
            rot: (self.down_cusps - self.up_cusps) / 2,
        })
    }

    /// Add a zig-zag; `positive` adds two down cusps, otherwise two up cusps.
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut f = self.clone();
        f.right_cusps += 1;
        if positive {
            f.down_cusps += 2;
        } else {
            f.up_cusps += 2;
        }
        f
    }

    pub fn switch_crossings(&self) -> Self {
        let mut f = self.clone();
        f.crossings.iter_mut().for_each(|s| *s = -*s);
        f
    }
}

pub fn legendrian_invariants(fronts: &[LegendrianFront]) -> Result<Vec<LegendrianInvariants>, DiagramError> {
    fronts.iter().map(LegendrianFront::invariants).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinComponent {
    pub tb: i64,
    pub framing: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinReport {
    pub components: Vec<SteinComponent>,
    /// 0-based indices of components with framing != tb - 1.
    pub offending: Vec<usize>,
}

impl SteinReport {
    pub fn passes(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Checks that every 2-handle framing equals `tb - 1`.
pub fn stein_framing_check(fronts: &[LegendrianFront]) -> Result<SteinReport, DiagramError> {
    let mut components = Vec::new();
    let mut offending = Vec::new();
    for (i, f) in fronts.iter().enumerate() {
        let framing = f.framing.ok_or(DiagramError::MissingFraming(i))?;
        let tb = f.invariants()?.tb;
        let ok = framing == tb - 1;
        if !ok {
            offending.push(i);
        }
        components.push(SteinComponent { tb, framing, ok });
    }
    Ok(SteinReport { components, offending })
}
