//! Half-edge ribbon graphs: permutations s0 (vertices), s1 (edges), s2 = s1 s0^-1 (faces).

use std::collections::VecDeque;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::rational::Q;

pub type Dart = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

/// Cycles of `p`, each starting at its least element, ordered by that element.
pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut c = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            c.push(j);
            j = p[j];
        }
        out.push(c);
    }
    out
}

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

/// Builds a permutation of `0..n` from disjoint cycles; unlisted points are fixed.
pub fn from_cycles(n: usize, cyc: &[&[usize]]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for c in cyc {
        for k in 0..c.len() {
            p[c[k]] = c[(k + 1) % c.len()];
        }
    }
    p
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn orbit_labels(n: usize, cyc: &[Vec<usize>]) -> Vec<usize> {
    let mut lab = vec![0; n];
    for (k, c) in cyc.iter().enumerate() {
        for &d in c {
            lab[d] = k;
        }
    }
    lab
}

/// Checks every axiom and reports all violations at once.
pub fn validate_graph(s0: &[usize], s1: &[usize]) -> std::result::Result<(), Vec<Violation>> {
    let mut v = structural_violations(s0, s1);
    if v.is_empty() {
        let k = component_count(s0, s1);
        if k != 1 {
            v.push(Violation::Disconnected(k));
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

fn structural_violations(s0: &[usize], s1: &[usize]) -> Vec<Violation> {
    let n = s0.len();
    let mut v = Vec::new();
    if n == 0 || n % 2 == 1 || s1.len() != n {
        v.push(Violation::DartCount(n.max(s1.len())));
        return v;
    }
    if !is_permutation(s0) {
        v.push(Violation::NotPermutation { which: "s0", n });
    }
    if !is_permutation(s1) {
        v.push(Violation::NotPermutation { which: "s1", n });
        return v;
    }
    for d in 0..n {
        if s1[d] == d {
            v.push(Violation::FixedPoint(d));
        } else if s1[s1[d]] != d {
            v.push(Violation::NotInvolution(d));
        }
    }
    v
}

fn component_count(s0: &[usize], s1: &[usize]) -> usize {
    let n = s0.len();
    let mut comp = vec![usize::MAX; n];
    let mut k = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = k;
        while let Some(d) = stack.pop() {
            for e in [s0[d], s1[d]] {
                if comp[e] == usize::MAX {
                    comp[e] = k;
                    stack.push(e);
                }
            }
        }
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    s0: Vec<Dart>,
    s1: Vec<Dart>,
    s0_inv: Vec<Dart>,
    s2: Vec<Dart>,
    s2_inv: Vec<Dart>,
    vertices: Vec<Vec<Dart>>,
    edges: Vec<[Dart; 2]>,
    faces: Vec<Vec<Dart>>,
    vertex_of: Vec<usize>,
    edge_of: Vec<usize>,
    face_of: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Topology {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub genus: u32,
    pub n: usize,
}

impl RibbonGraph {
    /// A connected ribbon graph; all axioms are checked.
    pub fn new(s0: Vec<Dart>, s1: Vec<Dart>) -> Result<Self> {
        validate_graph(&s0, &s1).map_err(Error::InvalidGraph)?;
        Ok(Self::build(s0, s1))
    }

    /// Like [`RibbonGraph::new`] but connectivity is not required (cut surfaces).
    pub fn new_allow_disconnected(s0: Vec<Dart>, s1: Vec<Dart>) -> Result<Self> {
        let v = structural_violations(&s0, &s1);
        if !v.is_empty() {
            return Err(Error::InvalidGraph(v));
        }
        Ok(Self::build(s0, s1))
    }

    pub fn from_cycles(n: usize, s0: &[&[usize]], s1: &[&[usize]]) -> Result<Self> {
        Self::new(from_cycles(n, s0), from_cycles(n, s1))
    }

    fn build(s0: Vec<Dart>, s1: Vec<Dart>) -> Self {
        let n = s0.len();
        let s0_inv = inverse(&s0);
        let s2 = compose(&s1, &s0_inv);
        let s2_inv = inverse(&s2);
        debug_assert!((0..n).all(|d| s0[s1[s2[d]]] == d));
        let vertices = cycles(&s0);
        let faces = cycles(&s2);
        let mut edges: Vec<[Dart; 2]> = (0..n).filter(|&d| d < s1[d]).map(|d| [d, s1[d]]).collect();
        edges.sort();
        let mut edge_of = vec![0; n];
        for (k, e) in edges.iter().enumerate() {
            edge_of[e[0]] = k;
            edge_of[e[1]] = k;
        }
        let vertex_of = orbit_labels(n, &vertices);
        let face_of = orbit_labels(n, &faces);
        RibbonGraph {
            s0,
            s1,
            s0_inv,
            s2,
            s2_inv,
            vertices,
            edges,
            faces,
            vertex_of,
            edge_of,
            face_of,
        }
    }

    pub fn n_darts(&self) -> usize {
        self.s0.len()
    }
    pub fn s0(&self, d: Dart) -> Dart {
        self.s0[d]
    }
    pub fn s0_inv(&self, d: Dart) -> Dart {
        self.s0_inv[d]
    }
    pub fn s1(&self, d: Dart) -> Dart {
        self.s1[d]
    }
    pub fn s2(&self, d: Dart) -> Dart {
        self.s2[d]
    }
    pub fn s2_inv(&self, d: Dart) -> Dart {
        self.s2_inv[d]
    }
    pub fn s0_perm(&self) -> &[Dart] {
        &self.s0
    }
    pub fn s1_perm(&self) -> &[Dart] {
        &self.s1
    }
    pub fn s2_perm(&self) -> &[Dart] {
        &self.s2
    }
    pub fn vertices(&self) -> &[Vec<Dart>] {
        &self.vertices
    }
    /// Edges as sorted dart pairs, indexed by their least dart.
    pub fn edges(&self) -> &[[Dart; 2]] {
        &self.edges
    }
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }
    pub fn vertex_of(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }
    pub fn edge_of(&self, d: Dart) -> usize {
        self.edge_of[d]
    }
    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertices.iter().map(|c| c.len()).collect()
    }

    /// Vertex degree histogram: `mu[i]` vertices of degree `i`.
    pub fn decoration(&self) -> Vec<usize> {
        let mut mu = vec![0; self.n_darts() + 1];
        for c in &self.vertices {
            mu[c.len()] += 1;
        }
        while mu.len() > 1 && *mu.last().unwrap() == 0 {
            mu.pop();
        }
        mu
    }

    pub fn topology(&self) -> Result<Topology> {
        let (v, e, f) = (self.vertices.len(), self.edges.len(), self.faces.len());
        let chi = v as i64 - e as i64 + f as i64;
        if chi.rem_euclid(2) != 0 {
            return Err(Error::OddEuler);
        }
        let k = self.components().len() as i64;
        let genus = (2 * k - chi) / 2;
        if genus < 0 {
            return Err(Error::OddEuler);
        }
        Ok(Topology { v, e, f, genus: genus as u32, n: f })
    }

    /// Dart sets of the connected components, ordered by least dart.
    pub fn components(&self) -> Vec<Vec<Dart>> {
        let n = self.n_darts();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<Dart>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let k = out.len();
            let mut stack = vec![start];
            comp[start] = k;
            let mut ds = vec![start];
            while let Some(d) = stack.pop() {
                for e in [self.s0[d], self.s1[d]] {
                    if comp[e] == usize::MAX {
                        comp[e] = k;
                        stack.push(e);
                        ds.push(e);
                    }
                }
            }
            ds.sort();
            out.push(ds);
        }
        out
    }

    /// The subgraph on a union of components, relabelled to `0..darts.len()` in the given order.
    pub fn restrict(&self, darts: &[Dart]) -> Result<RibbonGraph> {
        let mut idx = vec![usize::MAX; self.n_darts()];
        for (k, &d) in darts.iter().enumerate() {
            idx[d] = k;
        }
        let map = |p: &[usize]| -> Result<Vec<usize>> {
            darts
                .iter()
                .map(|&d| match idx[p[d]] {
                    usize::MAX => Err(Error::Internal("restriction is not a union of components".into())),
                    k => Ok(k),
                })
                .collect()
        };
        RibbonGraph::new_allow_disconnected(map(&self.s0)?, map(&self.s1)?)
    }

    /// Conjugates by the relabelling `d -> pi[d]`.
    pub fn relabel(&self, pi: &[usize]) -> RibbonGraph {
        let n = self.n_darts();
        let mut s0 = vec![0; n];
        let mut s1 = vec![0; n];
        for d in 0..n {
            s0[pi[d]] = pi[self.s0[d]];
            s1[pi[d]] = pi[self.s1[d]];
        }
        RibbonGraph::build(s0, s1)
    }
}

/// Sign map on darts normalized so that the least dart of each component is positive.
pub fn detect_orientation(g: &RibbonGraph) -> Option<Vec<Sign>> {
    let n = g.n_darts();
    let mut eps: Vec<Option<Sign>> = vec![None; n];
    for start in 0..n {
        if eps[start].is_some() {
            continue;
        }
        eps[start] = Some(Sign::Pos);
        let mut stack = vec![start];
        while let Some(d) = stack.pop() {
            let s = eps[d].unwrap();
            for (e, t) in [(g.s2(d), s), (g.s2_inv(d), s), (g.s1(d), s.flip())] {
                match eps[e] {
                    None => {
                        eps[e] = Some(t);
                        stack.push(e);
                    }
                    Some(u) if u != t => return None,
                    _ => {}
                }
            }
        }
    }
    Some(eps.into_iter().map(Option::unwrap).collect())
}

/// Both orientations of a connected orientable graph, normalized one first.
pub fn orientations(g: &RibbonGraph) -> Vec<Vec<Sign>> {
    match detect_orientation(g) {
        None => Vec::new(),
        Some(e) => {
            let f = e.iter().map(|s| s.flip()).collect();
            vec![e, f]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    pub graph: RibbonGraph,
    pub eps: Vec<Sign>,
}

impl OrientedGraph {
    pub fn new(graph: RibbonGraph, eps: Vec<Sign>) -> Result<Self> {
        if eps.len() != graph.n_darts() {
            return Err(Error::NotOrientable);
        }
        for d in 0..graph.n_darts() {
            if eps[graph.s2(d)] != eps[d] || eps[graph.s1(d)] == eps[d] {
                return Err(Error::NotOrientable);
            }
        }
        Ok(OrientedGraph { graph, eps })
    }

    pub fn detect(graph: RibbonGraph) -> Result<Self> {
        let eps = detect_orientation(&graph).ok_or(Error::NotOrientable)?;
        Ok(OrientedGraph { graph, eps })
    }

    pub fn sign(&self, d: Dart) -> Sign {
        self.eps[d]
    }
    pub fn face_sign(&self, f: usize) -> Sign {
        self.eps[self.graph.faces()[f][0]]
    }
    /// The positive dart of an edge.
    pub fn pos_dart(&self, edge: usize) -> Dart {
        let [a, b] = self.graph.edges()[edge];
        if self.eps[a] == Sign::Pos {
            a
        } else {
            b
        }
    }
    pub fn positive_darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (0..self.graph.n_darts()).filter(|&d| self.eps[d] == Sign::Pos)
    }
    pub fn reversed(&self) -> OrientedGraph {
        OrientedGraph { graph: self.graph.clone(), eps: self.eps.iter().map(|s| s.flip()).collect() }
    }
    pub fn face_counts(&self) -> (usize, usize) {
        let p = (0..self.graph.faces().len()).filter(|&f| self.face_sign(f) == Sign::Pos).count();
        (p, self.graph.faces().len() - p)
    }
}

/// An oriented graph whose faces carry labels `1..n+` (positive) and `1..n-` (negative).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelledGraph {
    pub og: OrientedGraph,
    pub labels: Vec<usize>,
}

impl LabelledGraph {
    pub fn new(og: OrientedGraph, labels: Vec<usize>) -> Result<Self> {
        let (np, nm) = og.face_counts();
        if labels.len() != og.graph.faces().len() {
            return Err(Error::ProfileMismatch("one label per face required".into()));
        }
        for (sign, n) in [(Sign::Pos, np), (Sign::Neg, nm)] {
            let mut seen: Vec<usize> = (0..labels.len()).filter(|&f| og.face_sign(f) == sign).map(|f| labels[f]).collect();
            seen.sort();
            if seen != (1..=n).collect::<Vec<_>>() {
                return Err(Error::ProfileMismatch(format!("{sign} labels must be 1..{n}")));
            }
        }
        Ok(LabelledGraph { og, labels })
    }

    /// Labels faces of each sign in order of least dart.
    pub fn with_default_labels(og: OrientedGraph) -> Self {
        let mut next = [0usize; 2];
        let labels = (0..og.graph.faces().len())
            .map(|f| {
                let k = (og.face_sign(f) == Sign::Neg) as usize;
                next[k] += 1;
                next[k]
            })
            .collect();
        LabelledGraph { og, labels }
    }

    pub fn graph(&self) -> &RibbonGraph {
        &self.og.graph
    }

    /// `(g, n+, n-)`.
    pub fn directed_type(&self) -> Result<(u32, usize, usize)> {
        let t = self.graph().topology()?;
        let (p, m) = self.og.face_counts();
        Ok((t.genus, p, m))
    }

    /// Face index carrying `(sign, label)`.
    pub fn face_with(&self, sign: Sign, label: usize) -> Option<usize> {
        (0..self.labels.len()).find(|&f| self.og.face_sign(f) == sign && self.labels[f] == label)
    }

    pub fn relabel(&self, pi: &[usize]) -> LabelledGraph {
        let graph = self.og.graph.relabel(pi);
        let n = pi.len();
        let mut eps = vec![Sign::Pos; n];
        for d in 0..n {
            eps[pi[d]] = self.og.eps[d];
        }
        let mut labels = vec![0; graph.faces().len()];
        for d in 0..n {
            labels[graph.face_of(pi[d])] = self.labels[self.og.graph.face_of(d)];
        }
        LabelledGraph { og: OrientedGraph { graph, eps }, labels }
    }
}

/// Positive rational length per edge (indexed like [`RibbonGraph::edges`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric(pub Vec<Q>);

impl Metric {
    pub fn new(g: &RibbonGraph, m: Vec<Q>) -> Result<Self> {
        if m.len() != g.edges().len() {
            return Err(Error::Parse(format!("metric needs {} edge lengths", g.edges().len())));
        }
        if m.iter().any(|x| !x.is_positive()) {
            return Err(Error::NonIntegralInput("edge lengths must be positive".into()));
        }
        Ok(Metric(m))
    }
    pub fn ones(g: &RibbonGraph) -> Self {
        Metric(vec![crate::rational::q(1); g.edges().len()])
    }
    pub fn scaled(&self, t: &Q) -> Self {
        Metric(self.0.iter().map(|x| x * t).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFace {
    pub cycle: Vec<Dart>,
    pub sign: Sign,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProfile {
    pub faces: Vec<BoundaryFace>,
    pub lengths: Vec<Q>,
}

impl BoundaryProfile {
    /// Lengths of the faces with the given sign, ordered by label.
    pub fn signed_lengths(&self, sign: Sign) -> Vec<Q> {
        let mut v: Vec<(usize, Q)> = self
            .faces
            .iter()
            .zip(&self.lengths)
            .filter(|(f, _)| f.sign == sign)
            .map(|(f, l)| (f.label, l.clone()))
            .collect();
        v.sort_by_key(|x| x.0);
        v.into_iter().map(|x| x.1).collect()
    }
}

pub fn boundary_lengths(lg: &LabelledGraph, m: &Metric) -> Result<BoundaryProfile> {
    let g = lg.graph();
    let mut faces = Vec::new();
    let mut lengths = Vec::new();
    let mut residue = Q::zero();
    for (f, cyc) in g.faces().iter().enumerate() {
        let l: Q = cyc.iter().map(|&d| &m.0[g.edge_of(d)]).sum();
        let sign = lg.og.face_sign(f);
        match sign {
            Sign::Pos => residue += &l,
            Sign::Neg => residue -= &l,
        }
        faces.push(BoundaryFace { cycle: cyc.clone(), sign, label: lg.labels[f] });
        lengths.push(l);
    }
    if !residue.is_zero() {
        return Err(Error::ResidueViolation(crate::rational::fmt_q(&residue)));
    }
    Ok(BoundaryProfile { faces, lengths })
}

fn encode_from(lg: &LabelledGraph, base: Dart) -> Option<Vec<u8>> {
    let g = lg.graph();
    let n = g.n_darts();
    let mut new_of = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    new_of[base] = 0;
    order.push(base);
    queue.push_back(base);
    while let Some(d) = queue.pop_front() {
        for e in [g.s0(d), g.s1(d)] {
            if new_of[e] == usize::MAX {
                new_of[e] = order.len();
                order.push(e);
                queue.push_back(e);
            }
        }
    }
    if order.len() != n {
        return None;
    }
    let mut out = Vec::with_capacity(4 + 13 * n);
    out.extend_from_slice(&(n as u32).to_be_bytes());
    for &d in &order {
        out.extend_from_slice(&(new_of[g.s0(d)] as u32).to_be_bytes());
        out.extend_from_slice(&(new_of[g.s1(d)] as u32).to_be_bytes());
        out.push((lg.og.eps[d] == Sign::Neg) as u8);
        out.extend_from_slice(&(lg.labels[g.face_of(d)] as u32).to_be_bytes());
    }
    Some(out)
}

/// Isomorphism invariant of a connected oriented labelled graph.
pub fn canonical_key(lg: &LabelledGraph) -> Vec<u8> {
    (0..lg.graph().n_darts())
        .filter_map(|b| encode_from(lg, b))
        .min()
        .unwrap_or_default()
}

/// Order of the group of sign- and label-preserving automorphisms.
pub fn automorphism_order(lg: &LabelledGraph) -> usize {
    let Some(reference) = encode_from(lg, 0) else { return 1 };
    (0..lg.graph().n_darts())
        .filter(|&b| encode_from(lg, b).as_ref() == Some(&reference))
        .count()
}

/// JSON graph format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub darts: usize,
    pub s0: Vec<usize>,
    pub s1: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<LabelsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<std::collections::BTreeMap<String, [i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelsJson {
    pub pos: std::collections::BTreeMap<String, usize>,
    pub neg: std::collections::BTreeMap<String, usize>,
}

impl GraphJson {
    pub fn from_labelled(lg: &LabelledGraph) -> Self {
        let g = lg.graph();
        let mut labels = LabelsJson::default();
        for (f, cyc) in g.faces().iter().enumerate() {
            let key = cyc[0].to_string();
            match lg.og.face_sign(f) {
                Sign::Pos => labels.pos.insert(key, lg.labels[f]),
                Sign::Neg => labels.neg.insert(key, lg.labels[f]),
            };
        }
        GraphJson {
            darts: g.n_darts(),
            s0: g.s0_perm().to_vec(),
            s1: g.s1_perm().to_vec(),
            labels: Some(labels),
            m: None,
            vertices: None,
        }
    }

    pub fn with_metric(mut self, g: &RibbonGraph, m: &Metric) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (k, e) in g.edges().iter().enumerate() {
            let x = &m.0[k];
            let num = i64::try_from(x.numer()).map_err(|_| Error::Parse("metric value too large".into()))?;
            let den = i64::try_from(x.denom()).map_err(|_| Error::Parse("metric value too large".into()))?;
            map.insert(e[0].to_string(), [num, den]);
        }
        self.m = Some(map);
        Ok(self)
    }

    /// Parses and validates; labels default to least-dart order when absent.
    pub fn to_labelled(&self) -> Result<LabelledGraph> {
        if self.s0.len() != self.darts || self.s1.len() != self.darts {
            return Err(Error::Parse("s0/s1 length must equal darts".into()));
        }
        let g = RibbonGraph::new(self.s0.clone(), self.s1.clone())?;
        let og = OrientedGraph::detect(g)?;
        let Some(lab) = &self.labels else {
            return Ok(LabelledGraph::with_default_labels(og));
        };
        let parse_key = |k: &String| -> Result<usize> {
            let d: usize = k.parse().map_err(|_| Error::Parse(format!("bad face key {k:?}")))?;
            if d >= self.darts {
                return Err(Error::Parse(format!("face key {d} out of range")));
            }
            Ok(d)
        };
        let og = match lab.pos.keys().next() {
            Some(k) if og.sign(parse_key(k)?) == Sign::Neg => og.reversed(),
            _ => og,
        };
        let mut labels = vec![0; og.graph.faces().len()];
        for (sign, map) in [(Sign::Pos, &lab.pos), (Sign::Neg, &lab.neg)] {
            for (k, &label) in map {
                let d = parse_key(k)?;
                let f = og.graph.face_of(d);
                if og.face_sign(f) != sign {
                    return Err(Error::ProfileMismatch(format!("face of dart {d} has the wrong sign")));
                }
                labels[f] = label;
            }
        }
        LabelledGraph::new(og, labels)
    }

    pub fn metric(&self, g: &RibbonGraph) -> Result<Option<Metric>> {
        let Some(map) = &self.m else { return Ok(None) };
        let mut m = vec![None; g.edges().len()];
        for (k, &[num, den]) in map {
            let d: usize = k.parse().map_err(|_| Error::Parse(format!("bad edge key {k:?}")))?;
            if d >= g.n_darts() || den == 0 {
                return Err(Error::Parse(format!("bad metric entry {k:?}")));
            }
            m[g.edge_of(d)] = Some(crate::rational::qr(num, den));
        }
        let m = m
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse("metric must cover every edge".into()))?;
        Metric::new(g, m).map(Some)
    }
}

/// The test graphs used throughout: the pant `Q`, the torus `T` and `G11`.
pub mod samples {
    use super::*;

    pub fn pant() -> RibbonGraph {
        RibbonGraph::from_cycles(4, &[&[0, 1, 2, 3]], &[&[0, 1], &[2, 3]]).unwrap()
    }
    pub fn torus() -> RibbonGraph {
        RibbonGraph::from_cycles(4, &[&[0, 2, 1, 3]], &[&[0, 1], &[2, 3]]).unwrap()
    }
    pub fn g11() -> RibbonGraph {
        RibbonGraph::from_cycles(
            8,
            &[&[0, 1, 2, 3], &[4, 5, 6, 7]],
            &[&[0, 4], &[1, 5], &[2, 6], &[3, 7]],
        )
        .unwrap()
    }
    pub fn labelled(g: RibbonGraph) -> LabelledGraph {
        LabelledGraph::with_default_labels(OrientedGraph::detect(g).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use crate::rational::q;

    #[test]
    fn validation() {
        assert!(validate_graph(pant().s0_perm(), pant().s1_perm()).is_ok());
        let e = validate_graph(&[1, 2, 3, 0], &[0, 1, 2, 3]).unwrap_err();
        assert!(e.iter().all(|v| matches!(v, Violation::FixedPoint(_))));
        let s0 = from_cycles(8, &[&[0, 1, 2, 3], &[4, 5, 6, 7]]);
        let s1 = from_cycles(8, &[&[0, 1], &[2, 3], &[4, 5], &[6, 7]]);
        assert_eq!(validate_graph(&s0, &s1).unwrap_err(), vec![Violation::Disconnected(2)]);
        assert!(matches!(validate_graph(&[0, 0], &[1, 0]).unwrap_err()[0], Violation::NotPermutation { .. }));
        assert!(matches!(validate_graph(&[0, 1, 2], &[1, 2, 0]).unwrap_err()[0], Violation::DartCount(3)));
    }

    #[test]
    fn topologies() {
        let t = |g: RibbonGraph| {
            let t = g.topology().unwrap();
            (t.v, t.e, t.f, t.genus, t.n)
        };
        assert_eq!(t(pant()), (1, 2, 3, 0, 3));
        assert_eq!(t(torus()), (1, 2, 1, 1, 1));
        assert_eq!(t(g11()), (2, 4, 2, 1, 2));
        assert_eq!(pant().faces(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(g11().faces(), &[vec![0, 7, 2, 5], vec![1, 4, 3, 6]]);
        for g in [pant(), torus(), g11()] {
            for d in 0..g.n_darts() {
                assert_eq!(g.s0(g.s1(g.s2(d))), d);
            }
        }
    }

    #[test]
    fn orientation() {
        use Sign::*;
        assert_eq!(detect_orientation(&pant()).unwrap(), vec![Pos, Neg, Pos, Neg]);
        assert!(detect_orientation(&torus()).is_none());
        let og = OrientedGraph::detect(g11()).unwrap();
        assert_eq!(og.face_sign(0), Pos);
        assert_eq!(og.face_sign(1), Neg);
        assert_eq!(orientations(&g11()).len(), 2);
    }

    #[test]
    fn lengths() {
        let lg = labelled(pant());
        let m = Metric(vec![q(2), q(5)]);
        let p = boundary_lengths(&lg, &m).unwrap();
        assert_eq!(p.lengths, vec![q(7), q(2), q(5)]);
        let lg = labelled(g11());
        let p = boundary_lengths(&lg, &Metric::ones(lg.graph())).unwrap();
        assert_eq!(p.lengths, vec![q(4), q(4)]);
    }

    #[test]
    fn automorphisms_and_keys() {
        assert_eq!(automorphism_order(&labelled(pant())), 1);
        assert_eq!(automorphism_order(&labelled(g11())), 4);
        let lg = labelled(g11());
        let swap: Vec<usize> = (0..8).map(|d| (d + 4) % 8).collect();
        assert_eq!(canonical_key(&lg), canonical_key(&lg.relabel(&swap)));
        let q = labelled(pant());
        let rev = LabelledGraph::with_default_labels(q.og.reversed());
        assert_ne!(canonical_key(&q), canonical_key(&rev));
    }

    #[test]
    fn json_round_trip() {
        let lg = labelled(g11());
        let j = GraphJson::from_labelled(&lg).with_metric(lg.graph(), &Metric::ones(lg.graph())).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_labelled().unwrap(), lg);
        assert_eq!(back.metric(lg.graph()).unwrap().unwrap(), Metric::ones(lg.graph()));
    }
}
