//! Cutting an oriented ribbon graph along a simple multicurve.
//!
//! Each edge band carrying `y` strands splits into `y + 1` strips. A strip that ends in
//! a vertex corner continues into the neighbouring band; following the middle strip from
//! every vertex slot yields the new edge pairing `s1'`, while darts and `s0` are kept.

use num_traits::Zero;

use crate::curves::{corner, sorted_bands, step, Curve, MultiCurve, Step};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::ribbon::{Dart, Metric, OrientedGraph, RibbonGraph, Sign};

/// What a face of a (possibly cut) graph is glued to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceTag {
    /// An original boundary of the surface.
    Leg { sign: Sign, label: usize },
    /// One side of cut curve `id`.
    Curve { id: usize, sign: Sign },
}

impl FaceTag {
    pub fn sign(&self) -> Sign {
        match *self {
            FaceTag::Leg { sign, .. } | FaceTag::Curve { sign, .. } => sign,
        }
    }
}

/// Tags from boundary labels.
pub fn leg_tags(og: &OrientedGraph, labels: &[usize]) -> Vec<FaceTag> {
    (0..og.graph.faces().len()).map(|f| FaceTag::Leg { sign: og.face_sign(f), label: labels[f] }).collect()
}

#[derive(Clone, Debug)]
pub struct Cut {
    /// Same darts, same `s0`, new `s1`; usually disconnected.
    pub og: OrientedGraph,
    /// Tag per face of the cut graph; curve ids index `curves`.
    pub tags: Vec<FaceTag>,
    pub metric: Option<Metric>,
    /// The merged components that were cut along.
    pub curves: Vec<Curve>,
    /// For each negative dart `x` of the cut graph, the turns taken in the original graph
    /// while following the strip from `x` to `s1'(x)`.
    pub strips: Vec<Vec<Step>>,
}

struct Bands {
    y: Vec<usize>,
    p_exit: Vec<usize>,
    q_entry: Vec<usize>,
}

/// Cuts `og` along `mc`. `tags` label the faces of `og`; curve tags of the result are
/// `Curve { id: curve_offset + k }` for the k-th merged component.
pub fn cut(og: &OrientedGraph, tags: &[FaceTag], metric: Option<&Metric>, mc: &MultiCurve, curve_offset: usize) -> Result<Cut> {
    if let Some(why) = crate::curves::simplicity_failure(og, mc) {
        return Err(Error::NotSimple(why));
    }
    let mc = mc.merged();
    let cs = &mc.components;
    let g = &og.graph;
    let n = g.n_darts();
    let sorted = sorted_bands(og, cs);
    let prev = |k: usize, i: usize| cs[k].steps[(i + cs[k].len() - 1) % cs[k].len()];
    let bands = Bands {
        y: sorted.iter().map(|b| b.len()).collect(),
        p_exit: sorted.iter().map(|b| b.iter().filter(|&&(k, i)| cs[k].steps[i] == Step::Plus).count()).collect(),
        q_entry: sorted.iter().map(|b| b.iter().filter(|&&(k, i)| prev(k, i) == Step::Plus).count()).collect(),
    };
    for (e, b) in sorted.iter().enumerate() {
        let p = bands.p_exit[e];
        let q = bands.q_entry[e];
        if b[..p].iter().any(|&(k, i)| cs[k].steps[i] != Step::Plus) || b[..q].iter().any(|&(k, i)| prev(k, i) != Step::Plus) {
            return Err(Error::NotSimple(format!("strand order in edge {e} is inconsistent with its corners")));
        }
    }

    let mut s1 = vec![usize::MAX; n];
    let mut strips = vec![Vec::new(); n];
    let mut lengths: Vec<Q> = vec![Q::zero(); n];
    let limit = 4 * n * (1 + bands.y.iter().sum::<usize>());
    for x in 0..n {
        let (partner, turns, len) = follow_strip(og, &bands, metric, x, limit)?;
        s1[x] = partner;
        if og.sign(x) == Sign::Neg {
            strips[x] = turns;
        }
        lengths[x] = len;
    }
    for x in 0..n {
        if s1[s1[x]] != x || s1[x] == x || og.sign(s1[x]) == og.sign(x) {
            return Err(Error::Internal(format!("strip pairing is not an edge involution at dart {x}")));
        }
    }
    let graph = RibbonGraph::new_allow_disconnected(g.s0_perm().to_vec(), s1)?;
    let new_og = OrientedGraph::new(graph, og.eps.clone()).map_err(|_| Error::Internal("cut lost orientation".into()))?;

    let tag_of_corner = |x: Dart| -> FaceTag {
        match og.sign(x) {
            Sign::Pos => {
                let e = g.edge_of(x);
                match bands.p_exit[e] {
                    0 => tags[g.face_of(x)],
                    p => FaceTag::Curve { id: curve_offset + sorted[e][p - 1].0, sign: Sign::Pos },
                }
            }
            Sign::Neg => {
                let f = g.s0_inv(x);
                let e = g.edge_of(f);
                let p = bands.p_exit[e];
                if p == bands.y[e] {
                    tags[g.face_of(x)]
                } else {
                    FaceTag::Curve { id: curve_offset + sorted[e][p].0, sign: Sign::Neg }
                }
            }
        }
    };
    let mut new_tags = Vec::with_capacity(new_og.graph.faces().len());
    for cyc in new_og.graph.faces() {
        let t = tag_of_corner(cyc[0]);
        if cyc.iter().any(|&d| tag_of_corner(d) != t) {
            return Err(Error::Internal("face of the cut graph sees two different boundaries".into()));
        }
        new_tags.push(t);
    }
    let mut sorted_tags = new_tags.clone();
    sorted_tags.sort();
    if sorted_tags.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotAdmissible("a boundary of the cut graph is split".into()));
    }
    let expected = tags.len() + 2 * cs.len();
    if new_tags.len() != expected {
        return Err(Error::NotAdmissible(format!("cut produced {} boundaries, expected {expected}", new_tags.len())));
    }

    let new_metric = match metric {
        None => None,
        Some(m) => {
            let ml: Vec<Q> = new_og.graph.edges().iter().map(|e| lengths[e[0]].clone()).collect();
            for (k, e) in new_og.graph.edges().iter().enumerate() {
                if lengths[e[1]] != ml[k] {
                    return Err(Error::Internal("strip lengths disagree at the two ends".into()));
                }
            }
            let m2 = Metric(ml);
            for (f, cyc) in new_og.graph.faces().iter().enumerate() {
                if let FaceTag::Curve { id, .. } = new_tags[f] {
                    let l: Q = cyc.iter().map(|&d| &m2.0[new_og.graph.edge_of(d)]).sum();
                    let want = crate::curves::component_length(m, og, &cs[id - curve_offset]);
                    if l != want {
                        return Err(Error::Internal(format!("new boundary of curve {id} has length {l}, curve has {want}")));
                    }
                }
            }
            Some(m2)
        }
    };
    if new_og.graph.decoration() != g.decoration() {
        return Err(Error::NotAdmissible("decoration changed".into()));
    }
    Ok(Cut { og: new_og, tags: new_tags, metric: new_metric, curves: cs.clone(), strips })
}

/// Follows the middle strip leaving vertex slot `x` until it reaches another slot.
fn follow_strip(og: &OrientedGraph, b: &Bands, metric: Option<&Metric>, x: Dart, limit: usize) -> Result<(Dart, Vec<Step>, Q)> {
    let g = &og.graph;
    let mut turns = Vec::new();
    let mut len = Q::zero();
    let mut band = g.edge_of(x);
    let toward_neg = og.sign(x) == Sign::Pos;
    let mut idx = if toward_neg { b.p_exit[band] } else { b.q_entry[band] };
    for _ in 0..limit {
        if let Some(m) = metric {
            len += &m.0[band];
        }
        let a = og.pos_dart(band);
        let ya = b.y[band];
        if toward_neg {
            let w = g.s1(a);
            let q = b.q_entry[band];
            if idx == q {
                return Ok((w, turns, len));
            }
            if idx < q {
                band = g.edge_of(g.s0(w));
            } else {
                band = g.edge_of(g.s0_inv(w));
                idx = b.y[band] + idx - ya;
            }
        } else {
            let p = b.p_exit[band];
            if idx == p {
                return Ok((a, turns, len));
            }
            let (s, d) = if idx < p { (Step::Plus, g.s0_inv(a)) } else { (Step::Minus, g.s0(a)) };
            debug_assert_eq!(d, corner(og, a, s));
            debug_assert_eq!(g.s1(d), step(og, a, s));
            turns.push(s);
            band = g.edge_of(d);
            if idx > p {
                idx = b.y[band] + idx - ya;
            }
        }
    }
    Err(Error::NotSimple(format!("strip from dart {x} does not close (annular region)")))
}

/// Rewrites a word on the cut graph as a word on the original graph.
pub fn expand_word(orig: &OrientedGraph, cut_og: &OrientedGraph, strips: &[Vec<Step>], word: &[(Dart, Step)]) -> Result<Vec<(Dart, Step)>> {
    let mut out = Vec::new();
    let n = word.len();
    for (i, &(e, s)) in word.iter().enumerate() {
        out.push((e, s));
        let x = corner(cut_og, e, s);
        let mut d = orig.graph.s1(x);
        for &t in &strips[x] {
            out.push((d, t));
            d = step(orig, d, t);
        }
        if d != word[(i + 1) % n].0 {
            return Err(Error::Internal("strip expansion does not reconnect".into()));
        }
    }
    Ok(out)
}

/// Composes strip data: `inner` expresses the current graph in terms of the original,
/// `outer` expresses a further cut in terms of the current graph.
pub fn compose_strips(current: &OrientedGraph, inner: &[Vec<Step>], outer: &[Vec<Step>]) -> Vec<Vec<Step>> {
    let n = current.graph.n_darts();
    let mut out = vec![Vec::new(); n];
    for x in 0..n {
        if current.sign(x) != Sign::Neg {
            continue;
        }
        let mut acc = inner[x].clone();
        let mut a = current.graph.s1(x);
        for &t in &outer[x] {
            acc.push(t);
            let d = corner(current, a, t);
            acc.extend(inner[d].iter().copied());
            a = current.graph.s1(d);
        }
        out[x] = acc;
    }
    out
}
