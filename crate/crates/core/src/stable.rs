//! Directed stable graphs: components with genus and signed boundary slots.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::rational::q;
use crate::ribbon::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    Edge,
    Leg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub sign: Sign,
    pub kind: SlotKind,
    /// Edge id for edge ends, boundary label for legs.
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub genus: u32,
    pub slots: Vec<Slot>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedStableGraph {
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StableViolation {
    #[error("edge {0} joins slots of equal sign")]
    SignViolation(usize),
    #[error("edge {0} does not have exactly two ends")]
    UnpairedEdge(usize),
    #[error("component {0} lacks a positive or a negative slot")]
    DirectionViolation(usize),
    #[error("component {0} is unstable")]
    Unstable(usize),
    #[error("underlying graph is disconnected")]
    Disconnected,
    #[error("{0} legs are not labelled 1..n")]
    LegLabels(Sign),
}

impl DirectedStableGraph {
    /// `(from, to)` per edge id: from the component holding the negative end.
    pub fn edges(&self) -> BTreeMap<usize, (usize, usize)> {
        let mut ends: BTreeMap<usize, [Option<usize>; 2]> = BTreeMap::new();
        for (c, comp) in self.components.iter().enumerate() {
            for s in comp.slots.iter().filter(|s| s.kind == SlotKind::Edge) {
                let e = ends.entry(s.label).or_default();
                e[(s.sign == Sign::Pos) as usize] = Some(c);
            }
        }
        ends.into_iter().filter_map(|(k, [a, b])| Some((k, (a?, b?)))).collect()
    }

    pub fn legs(&self, sign: Sign) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(c, comp)| comp.slots.iter().filter(move |s| s.kind == SlotKind::Leg && s.sign == sign).map(move |s| (s.label, c)))
            .collect();
        v.sort();
        v
    }

    pub fn genus(&self) -> u32 {
        let e = self.edges().len() as i64;
        let k = self.components.len() as i64;
        (self.components.iter().map(|c| c.genus as i64).sum::<i64>() + e - k + 1) as u32
    }

    /// Isomorphism-invariant form: components sorted with edges renamed canonically.
    pub fn canonical(&self) -> DirectedStableGraph {
        let k = self.components.len();
        let mut best: Option<DirectedStableGraph> = None;
        let mut perm: Vec<usize> = (0..k).collect();
        if k > 8 {
            return self.clone();
        }
        loop {
            let mut at = vec![0; k];
            for (p, &i) in perm.iter().enumerate() {
                at[i] = p;
            }
            let mut edges: Vec<(usize, usize, usize)> = self.edges().into_iter().map(|(e, (a, b))| (at[a], at[b], e)).collect();
            edges.sort();
            let rename: BTreeMap<usize, usize> = edges.iter().enumerate().map(|(n, &(_, _, e))| (e, n)).collect();
            let mut out = Vec::new();
            for &i in &perm {
                let c = &self.components[i];
                let mut slots: Vec<Slot> = c.slots.clone();
                for s in slots.iter_mut().filter(|s| s.kind == SlotKind::Edge) {
                    s.label = rename[&s.label];
                }
                slots.sort();
                out.push(Component { genus: c.genus, slots });
            }
            let cand = DirectedStableGraph { components: out };
            let key = serde_json::to_string(&cand).unwrap_or_default();
            if best.as_ref().is_none_or(|b| key < serde_json::to_string(b).unwrap_or_default()) {
                best = Some(cand);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for (c, comp) in self.components.iter().enumerate() {
            let legs = |sign| comp.slots.iter().filter(|x| x.kind == SlotKind::Leg && x.sign == sign).map(|x| x.label.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(s, "  c{c} [label=\"({}; +{}; -{})\"];", comp.genus, legs(Sign::Pos), legs(Sign::Neg));
        }
        for (e, (a, b)) in self.edges() {
            let _ = writeln!(s, "  c{a} -> c{b} [label=\"e{e}\"];");
        }
        s.push_str("}\n");
        s
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn validate_stable(sg: &DirectedStableGraph) -> Result<(), Vec<StableViolation>> {
    let mut v = Vec::new();
    let mut ends: BTreeMap<usize, Vec<Sign>> = BTreeMap::new();
    for (c, comp) in sg.components.iter().enumerate() {
        for s in comp.slots.iter().filter(|s| s.kind == SlotKind::Edge) {
            ends.entry(s.label).or_default().push(s.sign);
        }
        if !comp.slots.iter().any(|s| s.sign == Sign::Pos) || !comp.slots.iter().any(|s| s.sign == Sign::Neg) {
            v.push(StableViolation::DirectionViolation(c));
        }
        if 2 * comp.genus as i64 - 2 + comp.slots.len() as i64 <= 0 {
            v.push(StableViolation::Unstable(c));
        }
    }
    for (e, signs) in &ends {
        if signs.len() != 2 {
            v.push(StableViolation::UnpairedEdge(*e));
        } else if signs[0] == signs[1] {
            v.push(StableViolation::SignViolation(*e));
        }
    }
    for sign in [Sign::Pos, Sign::Neg] {
        let labels: Vec<usize> = sg.legs(sign).into_iter().map(|x| x.0).collect();
        if labels != (1..=labels.len()).collect::<Vec<_>>() {
            v.push(StableViolation::LegLabels(sign));
        }
    }
    if !sg.components.is_empty() {
        let mut adj = vec![Vec::new(); sg.components.len()];
        for (_, (a, b)) in sg.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            v.push(StableViolation::Disconnected);
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub degenerate: bool,
    pub bounded: bool,
    /// For bridges: coefficients `(sign, label, coefficient)` of the linear form giving the edge length.
    pub constant: Option<Vec<(Sign, usize, i64)>>,
}

impl EdgeClass {
    pub fn name(&self) -> &'static str {
        if self.degenerate {
            "degenerate"
        } else if self.constant.is_some() {
            "constant"
        } else if self.bounded {
            "bounded"
        } else {
            "unbounded-nonconstant"
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub dim: usize,
    /// Coordinates: edges in id order, then positive legs, then negative legs (by label).
    pub extremal_rays: Vec<Vec<i64>>,
    pub edge_classes: BTreeMap<usize, EdgeClass>,
    pub expected_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arc {
    Edge(usize),
    Leg(usize),
    Return,
}

/// Simple directed cycles of a small multigraph given as arcs `(from, to, tag)`.
fn simple_cycles(nodes: usize, arcs: &[(usize, usize, Arc)]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for start in 0..nodes {
        let mut path: Vec<usize> = Vec::new();
        let mut on = vec![false; nodes];
        on[start] = true;
        dfs(start, start, arcs, &mut on, &mut path, &mut out);
    }
    out
}

fn dfs(start: usize, at: usize, arcs: &[(usize, usize, Arc)], on: &mut Vec<bool>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    for (k, &(a, b, _)) in arcs.iter().enumerate() {
        if a != at || b < start {
            continue;
        }
        if b == start {
            let mut c = path.clone();
            c.push(k);
            out.push(c);
        } else if !on[b] {
            on[b] = true;
            path.push(k);
            dfs(start, b, arcs, on, path, out);
            path.pop();
            on[b] = false;
        }
    }
}

pub fn cone_analysis(sg: &DirectedStableGraph) -> ConeReport {
    let k = sg.components.len();
    let (src, sink) = (k, k + 1);
    let edges = sg.edges();
    let pos = sg.legs(Sign::Pos);
    let neg = sg.legs(Sign::Neg);
    let edge_ids: Vec<usize> = edges.keys().copied().collect();
    let coord_of_edge: BTreeMap<usize, usize> = edge_ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut arcs = Vec::new();
    for (&e, &(a, b)) in &edges {
        arcs.push((a, b, Arc::Edge(coord_of_edge[&e])));
    }
    for (i, &(_, c)) in pos.iter().enumerate() {
        arcs.push((src, c, Arc::Leg(edge_ids.len() + i)));
    }
    for (i, &(_, c)) in neg.iter().enumerate() {
        arcs.push((c, sink, Arc::Leg(edge_ids.len() + pos.len() + i)));
    }
    arcs.push((sink, src, Arc::Return));
    let ncoord = edge_ids.len() + pos.len() + neg.len();
    let cycles = simple_cycles(k + 2, &arcs);
    let mut rays: Vec<Vec<i64>> = cycles
        .iter()
        .map(|c| {
            let mut v = vec![0; ncoord];
            for &a in c {
                if let Arc::Edge(i) | Arc::Leg(i) = arcs[a].2 {
                    v[i] += 1;
                }
            }
            v
        })
        .collect();
    rays.sort();
    rays.dedup();
    let m: linalg::Matrix = rays.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let dim = linalg::rank(&m);

    let absolute: Vec<&Vec<usize>> = cycles.iter().filter(|c| c.iter().all(|&a| matches!(arcs[a].2, Arc::Edge(_)))).collect();
    let mut classes = BTreeMap::new();
    for (&e, &(a, b)) in &edges {
        let i = coord_of_edge[&e];
        let degenerate = !rays.iter().any(|r| r[i] > 0);
        let bounded = !absolute.iter().any(|c| c.iter().any(|&x| matches!(arcs[x].2, Arc::Edge(j) if j == i)));
        let constant = bridge_side(k, &edges, e).map(|side| {
            let _ = (a, b);
            let mut form = Vec::new();
            for &(l, c) in &pos {
                if side[c] {
                    form.push((Sign::Pos, l, 1));
                }
            }
            for &(l, c) in &neg {
                if side[c] {
                    form.push((Sign::Neg, l, -1));
                }
            }
            form
        });
        classes.insert(e, EdgeClass { degenerate, bounded, constant });
    }
    let expected_dim = (edges.len() + pos.len() + neg.len()).saturating_sub(k);
    ConeReport { dim, extremal_rays: rays, edge_classes: classes, expected_dim }
}

/// If `e` is a bridge, the components on the side of its negative end (its source).
fn bridge_side(k: usize, edges: &BTreeMap<usize, (usize, usize)>, e: usize) -> Option<Vec<bool>> {
    let (a, b) = edges[&e];
    let mut side = vec![false; k];
    side[a] = true;
    let mut stack = vec![a];
    while let Some(c) = stack.pop() {
        for (&f, &(x, y)) in edges {
            if f == e {
                continue;
            }
            for (u, w) in [(x, y), (y, x)] {
                if u == c && !side[w] {
                    side[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    if side[b] {
        None
    } else {
        Some(side)
    }
}

/// Acyclicity (no cycle of edge arcs) and a topological order of components.
pub fn is_acyclic(sg: &DirectedStableGraph) -> (bool, Vec<usize>) {
    let k = sg.components.len();
    let mut indeg = vec![0; k];
    let edges = sg.edges();
    for &(_, b) in edges.values() {
        indeg[b] += 1;
    }
    let mut order = Vec::new();
    let mut ready: std::collections::BTreeSet<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
    while let Some(&c) = ready.iter().next() {
        ready.remove(&c);
        order.push(c);
        for &(a, b) in edges.values() {
            if a == c {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(b);
                }
            }
        }
    }
    (order.len() == k, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slot(sign: Sign, kind: SlotKind, label: usize) -> Slot {
        Slot { sign, kind, label }
    }
    use Sign::*;
    use SlotKind::*;

    fn pant() -> DirectedStableGraph {
        DirectedStableGraph { components: vec![Component { genus: 0, slots: vec![slot(Pos, Leg, 1), slot(Neg, Leg, 1), slot(Neg, Leg, 2)] }] }
    }

    #[test]
    fn pant_cone() {
        let sg = pant();
        assert!(validate_stable(&sg).is_ok());
        let r = cone_analysis(&sg);
        assert_eq!(r.dim, 2);
        assert_eq!(r.extremal_rays, vec![vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(r.expected_dim, 2);
        assert_eq!(is_acyclic(&sg), (true, vec![0]));
    }

    #[test]
    fn violations() {
        let bad = DirectedStableGraph {
            components: vec![
                Component { genus: 0, slots: vec![slot(Pos, Leg, 1), slot(Neg, Edge, 0), slot(Neg, Leg, 1)] },
                Component { genus: 0, slots: vec![slot(Neg, Edge, 0), slot(Pos, Leg, 2), slot(Pos, Leg, 3)] },
            ],
        };
        let v = validate_stable(&bad).unwrap_err();
        assert!(v.contains(&StableViolation::SignViolation(0)));
        let dir = DirectedStableGraph { components: vec![Component { genus: 1, slots: vec![slot(Pos, Leg, 1)] }] };
        assert!(validate_stable(&dir).unwrap_err().contains(&StableViolation::DirectionViolation(0)));
    }

    #[test]
    fn bridge_is_constant() {
        let sg = DirectedStableGraph {
            components: vec![
                Component { genus: 0, slots: vec![slot(Pos, Leg, 1), slot(Neg, Leg, 1), slot(Neg, Edge, 0)] },
                Component { genus: 0, slots: vec![slot(Pos, Edge, 0), slot(Pos, Leg, 2), slot(Neg, Leg, 2)] },
            ],
        };
        assert!(validate_stable(&sg).is_ok());
        let r = cone_analysis(&sg);
        let c = &r.edge_classes[&0];
        assert_eq!(c.constant, Some(vec![(Pos, 1, 1), (Neg, 1, -1)]));
        assert!(c.bounded && !c.degenerate);
        assert_eq!(c.name(), "constant");
        assert_eq!(r.dim, r.expected_dim);
    }

    #[test]
    fn degenerate_blob() {
        // c3 and c2 exchange two edges; c2 feeds c1 which has the only external legs.
        let sg = DirectedStableGraph {
            components: vec![
                Component { genus: 0, slots: vec![slot(Pos, Edge, 2), slot(Pos, Leg, 1), slot(Neg, Leg, 1)] },
                Component { genus: 0, slots: vec![slot(Neg, Edge, 0), slot(Pos, Edge, 1), slot(Neg, Edge, 2)] },
                Component { genus: 1, slots: vec![slot(Pos, Edge, 0), slot(Neg, Edge, 1)] },
            ],
        };
        assert!(validate_stable(&sg).is_ok());
        let r = cone_analysis(&sg);
        assert!(r.edge_classes[&2].degenerate);
        assert!(!r.edge_classes[&0].bounded);
        assert_eq!((r.dim, r.expected_dim), (2, 2));
        assert!(!is_acyclic(&sg).0);
    }

    #[test]
    fn two_cycle_is_not_acyclic() {
        let sg = DirectedStableGraph {
            components: vec![
                Component { genus: 0, slots: vec![slot(Pos, Leg, 1), slot(Neg, Edge, 0), slot(Pos, Edge, 1)] },
                Component { genus: 0, slots: vec![slot(Pos, Edge, 0), slot(Neg, Edge, 1), slot(Neg, Leg, 1)] },
            ],
        };
        assert!(!is_acyclic(&sg).0);
    }
}
