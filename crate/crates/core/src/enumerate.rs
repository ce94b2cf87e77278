//! Exhaustive generation of oriented 4-valent ribbon graphs, Hurwitz-type counts, and
//! brute-force cell volumes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{interpolate, q, qfact, Q};
use crate::ribbon::{automorphism_order, canonical_key, GraphJson, LabelledGraph, OrientedGraph, RibbonGraph, Sign};
use crate::volumes::check_stable;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub graph: LabelledGraph,
    pub aut: usize,
}

#[derive(Clone, Debug)]
pub struct GraphCatalog {
    pub g: u32,
    pub n_plus: usize,
    pub n_minus: usize,
    pub entries: Vec<CatalogEntry>,
}

impl GraphCatalog {
    pub fn n_vertices(&self) -> usize {
        2 * self.g as usize + self.n_plus + self.n_minus - 2
    }

    /// `Σ 1/aut`.
    pub fn mass(&self) -> Q {
        self.entries.iter().map(|e| Q::one() / q(e.aut as i64)).sum()
    }

    pub fn to_json(&self) -> CatalogJson {
        CatalogJson {
            r#type: (self.g, self.n_plus, self.n_minus),
            entries: self.entries.iter().map(|e| EntryJson { graph: GraphJson::from_labelled(&e.graph), aut: e.aut }).collect(),
        }
    }

    pub fn from_json(j: &CatalogJson) -> Result<Self> {
        let (g, n_plus, n_minus) = j.r#type;
        let entries = j
            .entries
            .iter()
            .map(|e| Ok(CatalogEntry { graph: e.graph.to_labelled()?, aut: e.aut }))
            .collect::<Result<_>>()?;
        Ok(GraphCatalog { g, n_plus, n_minus, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogJson {
    pub r#type: (u32, usize, usize),
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub graph: GraphJson,
    pub aut: usize,
}

/// The fixed vertex rotation `(4k 4k+1 4k+2 4k+3)` with even darts positive.
fn standard_s0(v: usize) -> Vec<usize> {
    (0..4 * v).map(|d| if d % 4 == 3 { d - 3 } else { d + 1 }).collect()
}

fn standard_eps(v: usize) -> Vec<Sign> {
    (0..4 * v).map(|d| if d % 2 == 0 { Sign::Pos } else { Sign::Neg }).collect()
}

struct Search<'a> {
    s0: &'a [usize],
    budget: [usize; 2],
}

impl Search<'_> {
    /// Closed face through `d` under the partial `s1`, if any.
    fn closed(&self, s1: &[usize], d: usize) -> Option<Vec<usize>> {
        let mut cyc = vec![d];
        let mut x = d;
        loop {
            // s2 = s1 s0^-1
            let prev = if x.is_multiple_of(4) { x + 3 } else { x - 1 };
            let y = s1[prev];
            if y == usize::MAX {
                return None;
            }
            if y == d {
                return Some(cyc);
            }
            cyc.push(y);
            x = y;
        }
    }

    fn run(&self, s1: &mut Vec<usize>, pos: &[usize], i: usize, counts: [usize; 2], out: &mut Vec<Vec<usize>>) {
        if i == pos.len() {
            out.push(s1.clone());
            return;
        }
        let p = pos[i];
        for m in (1..s1.len()).step_by(2) {
            if s1[m] != usize::MAX {
                continue;
            }
            s1[p] = m;
            s1[m] = p;
            let mut c = counts;
            let mut ok = true;
            for d in [self.s0[p], self.s0[m]] {
                if self.closed(s1, d).is_some() {
                    let k = (d % 2 == 1) as usize;
                    c[k] += 1;
                    ok &= c[k] <= self.budget[k];
                }
            }
            if ok {
                self.run(s1, pos, i + 1, c, out);
            }
            s1[p] = usize::MAX;
            s1[m] = usize::MAX;
        }
    }
}

/// All oriented 4-valent graphs of type `(g, n+, n-)` with labelled boundaries, up to isomorphism.
pub fn enumerate_graphs(g: u32, n_plus: usize, n_minus: usize) -> Result<GraphCatalog> {
    check_stable(g, n_plus, n_minus)?;
    let v = 2 * g as usize + n_plus + n_minus - 2;
    let n = 4 * v;
    let s0 = standard_s0(v);
    let eps = standard_eps(v);
    let pos: Vec<usize> = (0..n).step_by(2).collect();
    let search = Search { s0: &s0, budget: [n_plus, n_minus] };

    let mut shapes: Vec<(Vec<u8>, LabelledGraph)> = (1..n)
        .step_by(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m0| {
            let mut s1 = vec![usize::MAX; n];
            s1[0] = m0;
            s1[m0] = 0;
            let mut counts = [0usize; 2];
            let mut ok = true;
            for d in [s0[0], s0[m0]] {
                if search.closed(&s1, d).is_some() {
                    let k = (d % 2 == 1) as usize;
                    counts[k] += 1;
                    ok &= counts[k] <= search.budget[k];
                }
            }
            let mut raw = Vec::new();
            if ok {
                search.run(&mut s1, &pos, 1, counts, &mut raw);
            }
            let mut seen = HashMap::new();
            for s1 in raw {
                let Ok(graph) = RibbonGraph::new(s0.clone(), s1) else { continue };
                let Ok(og) = OrientedGraph::new(graph, eps.clone()) else { continue };
                if og.face_counts() != (n_plus, n_minus) || og.graph.topology().ok().map(|t| t.genus) != Some(g) {
                    continue;
                }
                let nf = og.graph.faces().len();
                let blank = LabelledGraph { og, labels: vec![0; nf] };
                seen.entry(canonical_key(&blank)).or_insert(blank);
            }
            seen.into_iter().collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    shapes.sort_by(|a, b| a.0.cmp(&b.0));
    shapes.dedup_by(|a, b| a.0 == b.0);

    let mut entries: Vec<(Vec<u8>, CatalogEntry)> = shapes
        .par_iter()
        .map(|(_, blank)| {
            let og = &blank.og;
            let pf: Vec<usize> = (0..og.graph.faces().len()).filter(|&f| og.face_sign(f) == Sign::Pos).collect();
            let nf: Vec<usize> = (0..og.graph.faces().len()).filter(|&f| og.face_sign(f) == Sign::Neg).collect();
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for pp in (1..=n_plus).permutations(n_plus) {
                for pm in (1..=n_minus).permutations(n_minus) {
                    let mut labels = vec![0; pf.len() + nf.len()];
                    for (k, &f) in pf.iter().enumerate() {
                        labels[f] = pp[k];
                    }
                    for (k, &f) in nf.iter().enumerate() {
                        labels[f] = pm[k];
                    }
                    let lg = LabelledGraph { og: og.clone(), labels };
                    let key = canonical_key(&lg);
                    if seen.insert(key.clone()) {
                        let aut = automorphism_order(&lg);
                        out.push((key, CatalogEntry { graph: lg, aut }));
                    }
                }
            }
            out
        })
        .flatten()
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(GraphCatalog { g, n_plus, n_minus, entries: entries.into_iter().map(|(_, e)| e).collect() })
}

/// Cache file name for a catalog: content hash of the type and crate version.
pub fn cache_key(g: u32, n_plus: usize, n_minus: usize) -> String {
    let mut h = Sha256::new();
    h.update(format!("catalog:{g}:{n_plus}:{n_minus}:{}", env!("CARGO_PKG_VERSION")));
    hex::encode(h.finalize())
}

/// `enumerate_graphs` with an optional on-disk JSON cache.
pub fn catalog_cached(g: u32, n_plus: usize, n_minus: usize, cache_dir: Option<&Path>) -> Result<GraphCatalog> {
    let Some(dir) = cache_dir else { return enumerate_graphs(g, n_plus, n_minus) };
    let path = dir.join(format!("{}.json", cache_key(g, n_plus, n_minus)));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(j) = serde_json::from_str::<CatalogJson>(&text) {
            if j.r#type == (g, n_plus, n_minus) {
                return GraphCatalog::from_json(&j);
            }
        }
    }
    let cat = enumerate_graphs(g, n_plus, n_minus)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&path, serde_json::to_string(&cat.to_json())?)?;
    Ok(cat)
}

/// Number of edges on each positive boundary, by label.
pub fn positive_profile(lg: &LabelledGraph) -> Vec<usize> {
    let (np, _) = lg.og.face_counts();
    (1..=np).map(|l| lg.graph().faces()[lg.face_with(Sign::Pos, l).unwrap()].len()).collect()
}

/// `Σ 1/aut` over one-negative-boundary graphs whose positive boundary `i` has `alpha_i` edges.
pub fn hurwitz_count(g: u32, alpha: &[usize]) -> Result<Q> {
    let n = alpha.len();
    if alpha.contains(&0) || alpha.iter().sum::<usize>() as i64 != 4 * g as i64 - 2 + 2 * n as i64 {
        return Err(Error::ProfileMismatch(format!("profile {alpha:?} does not sum to 4g-2+2n")));
    }
    let cat = enumerate_graphs(g, n, 1)?;
    Ok(hurwitz_table(&cat).remove(alpha).unwrap_or_else(Q::zero))
}

/// All nonzero Hurwitz-type counts of a one-negative-boundary catalog.
pub fn hurwitz_table(cat: &GraphCatalog) -> BTreeMap<Vec<usize>, Q> {
    let mut t = BTreeMap::new();
    for e in &cat.entries {
        *t.entry(positive_profile(&e.graph)).or_insert_with(Q::zero) += Q::one() / q(e.aut as i64);
    }
    t
}

/// `Σ_α ∏ L_i^{α_i-1}/(α_i-1)! · h(α)`.
pub fn hurwitz_reconstruction(table: &BTreeMap<Vec<usize>, Q>, n: usize) -> Poly {
    let mut p = Poly::zero(n);
    for (alpha, h) in table {
        let den: Q = alpha.iter().map(|&a| qfact(a as u32 - 1)).product();
        p.add_term(alpha.iter().map(|&a| a as u32 - 1).collect(), h / den);
    }
    p
}

/// Cell volume of a one-negative-boundary graph as a monomial in `L_1..L_n+`.
pub fn cell_volume_symbolic(lg: &LabelledGraph) -> Poly {
    let alpha = positive_profile(lg);
    let den: Q = alpha.iter().map(|&a| qfact(a as u32 - 1)).product();
    Poly::monomial(alpha.iter().map(|&a| a as u32 - 1).collect(), Q::one() / den)
}

/// `∏ x_i^{α_i-1}/(α_i-1)!`.
pub fn cell_volume_one_negative(lg: &LabelledGraph, x: &[Q]) -> Q {
    cell_volume_symbolic(lg).eval(x)
}

/// Integer metrics `m >= 1` with boundary sums `target` (indexed by face).
pub fn count_metrics(og: &OrientedGraph, target: &[i64]) -> u128 {
    let g = &og.graph;
    let edges: Vec<(usize, usize)> = (0..g.edges().len())
        .map(|e| {
            let a = og.pos_dart(e);
            (g.face_of(a), g.face_of(g.s1(a)))
        })
        .collect();
    let mut last = vec![usize::MAX; target.len()];
    for (k, &(f, h)) in edges.iter().enumerate() {
        last[f] = k;
        last[h] = k;
    }
    let mut states: HashMap<Vec<i64>, u128> = HashMap::from([(target.to_vec(), 1)]);
    for (k, &(f, h)) in edges.iter().enumerate() {
        let mut next: HashMap<Vec<i64>, u128> = HashMap::new();
        for (r, c) in states {
            let (lo, hi) = match (last[f] == k, last[h] == k) {
                (true, true) if r[f] != r[h] => continue,
                (true, _) => (r[f], r[f]),
                (_, true) => (r[h], r[h]),
                _ => (1, r[f].min(r[h]) - 1),
            };
            for m in lo.max(1)..=hi.min(r[f]).min(r[h]) {
                let mut s = r.clone();
                s[f] -= m;
                s[h] -= m;
                *next.entry(s).or_insert(0) += c;
            }
        }
        states = next;
    }
    states.into_iter().filter(|(r, _)| r.iter().all(|&x| x == 0)).map(|(_, c)| c).sum()
}

/// Leading Ehrhart coefficient of the strictly positive metric count with boundary `t·L`.
pub fn cell_volume_ehrhart(lg: &LabelledGraph, l_plus: &[i64], l_minus: &[i64]) -> Result<Q> {
    let og = &lg.og;
    let (np, nm) = og.face_counts();
    if l_plus.len() != np || l_minus.len() != nm {
        return Err(Error::ProfileMismatch("boundary vector length".into()));
    }
    if l_plus.iter().chain(l_minus).any(|&x| x <= 0) || l_plus.iter().sum::<i64>() != l_minus.iter().sum::<i64>() {
        return Err(Error::NonIntegralInput("lengths must be positive integers with equal signed sums".into()));
    }
    let nf = og.graph.faces().len();
    let target: Vec<i64> = (0..nf)
        .map(|f| match og.face_sign(f) {
            Sign::Pos => l_plus[lg.labels[f] - 1],
            Sign::Neg => l_minus[lg.labels[f] - 1],
        })
        .collect();
    let d = og.graph.edges().len() - (nf - 1);
    let ts: Vec<i64> = (1..=d as i64 + 3).collect();
    let counts: Vec<Q> = ts
        .par_iter()
        .map(|&t| {
            let tt: Vec<i64> = target.iter().map(|x| x * t).collect();
            Q::from_integer(count_metrics(og, &tt).into())
        })
        .collect();
    if counts.iter().all(|c| c.is_zero()) {
        return Err(Error::EmptyCell);
    }
    let xs: Vec<Q> = ts.iter().map(|&t| q(t)).collect();
    let c = interpolate(&xs[..d + 1], &counts[..d + 1]);
    for k in d + 1..xs.len() {
        if crate::rational::horner(&c, &xs[k]) != counts[k] {
            return Err(Error::Internal(format!("lattice count is not polynomial of degree {d} in t")));
        }
    }
    Ok(c[d].clone())
}

/// `Σ cell/aut` over the catalog at an integral point.
pub fn volume_oracle(cat: &GraphCatalog, l_plus: &[i64], l_minus: &[i64]) -> Result<Q> {
    if l_plus.len() != cat.n_plus || l_minus.len() != cat.n_minus {
        return Err(Error::ProfileMismatch("boundary vector length".into()));
    }
    if l_plus.iter().chain(l_minus).any(|&x| x <= 0) || l_plus.iter().sum::<i64>() != l_minus.iter().sum::<i64>() {
        return Err(Error::NonIntegralInput("lengths must be positive integers with equal signed sums".into()));
    }
    let x: Vec<Q> = l_plus.iter().map(|&v| q(v)).collect();
    let mut total = Q::zero();
    for e in &cat.entries {
        let cell = if cat.n_minus == 1 {
            cell_volume_one_negative(&e.graph, &x)
        } else {
            match cell_volume_ehrhart(&e.graph, l_plus, l_minus) {
                Err(Error::EmptyCell) => Q::zero(),
                r => r?,
            }
        };
        debug_assert!(!cell.is_negative());
        total += cell / q(e.aut as i64);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;
    use crate::ribbon::samples;

    #[test]
    fn small_catalogs() {
        for t in [(0, 1, 2), (0, 2, 1)] {
            let c = enumerate_graphs(t.0, t.1, t.2).unwrap();
            assert_eq!(c.entries.len(), 1);
            assert_eq!(c.entries[0].aut, 1);
        }
        assert_eq!(enumerate_graphs(1, 1, 1).unwrap().mass(), qr(1, 4));
        assert!(matches!(enumerate_graphs(0, 1, 1), Err(Error::UnstableType { .. })));
    }

    #[test]
    fn hurwitz() {
        assert_eq!(hurwitz_count(0, &[1, 1]).unwrap(), q(1));
        assert_eq!(hurwitz_count(0, &[2, 1, 1]).unwrap(), q(1));
        assert_eq!(hurwitz_count(1, &[4]).unwrap(), qr(1, 4));
        assert!(matches!(hurwitz_count(1, &[3]), Err(Error::ProfileMismatch(_))));
    }

    #[test]
    fn ehrhart() {
        let q_ = samples::labelled(samples::pant());
        let (np, nm) = q_.og.face_counts();
        assert_eq!((np, nm), (1, 2));
        assert_eq!(cell_volume_ehrhart(&q_, &[5], &[2, 3]).unwrap(), q(1));
        let g11 = samples::labelled(samples::g11());
        assert_eq!(cell_volume_ehrhart(&g11, &[4], &[4]).unwrap(), qr(64, 6));
        assert!(cell_volume_ehrhart(&g11, &[4], &[5]).is_err());
        let c = enumerate_graphs(1, 1, 1).unwrap();
        assert_eq!(volume_oracle(&c, &[6], &[6]).unwrap(), q(9));
        let c = enumerate_graphs(0, 2, 2).unwrap();
        assert_eq!(volume_oracle(&c, &[3, 1], &[2, 2]).unwrap(), q(3));
    }
}
