//! Vertex curves, bounded pants and the acyclic decomposition into one-vertex pieces.

use num_bigint::BigInt;

use crate::curves::{step, Curve, MultiCurve, Step};
use crate::error::{Error, Result};
use crate::rational::q;
use crate::ribbon::{Dart, LabelledGraph, OrientedGraph, Sign};
use crate::stable::{Component, DirectedStableGraph, Slot, SlotKind};
use crate::surgery::{self, Cut, FaceTag};

/// Alternating sum of edge vectors around `v`, starting at its least positive dart.
pub fn xi_plus(og: &OrientedGraph, v: usize) -> Result<Vec<BigInt>> {
    let g = &og.graph;
    let cyc = &g.vertices()[v];
    if cyc.len() % 2 == 1 {
        return Err(Error::OddDegree(v));
    }
    let start = cyc.iter().position(|&d| og.sign(d) == Sign::Pos).ok_or(Error::OddDegree(v))?;
    let mut x = vec![BigInt::from(0); g.edges().len()];
    for i in 0..cyc.len() {
        let d = cyc[(start + i) % cyc.len()];
        if i % 2 == 0 {
            x[g.edge_of(d)] += 1;
        } else {
            x[g.edge_of(d)] -= 1;
        }
    }
    Ok(x)
}

/// The boundary-following curves around `v`: from every positive dart, step by `s-`
/// at darts of `v` and by `s+` elsewhere; loops running only along a negative
/// boundary at `v` are dropped.
pub fn gamma_plus(og: &OrientedGraph, v: usize) -> Result<MultiCurve> {
    let g = &og.graph;
    let comp_vertices = {
        let comps = g.components();
        let c = comps.iter().find(|c| c.contains(&g.vertices()[v][0])).cloned().unwrap_or_default();
        let mut vs: Vec<usize> = c.iter().map(|&d| g.vertex_of(d)).collect();
        vs.sort();
        vs.dedup();
        vs.len()
    };
    if comp_vertices < 2 {
        return Err(Error::SingleVertex);
    }
    let n = g.n_darts();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let starts: Vec<Dart> = g.vertices()[v].iter().copied().filter(|&d| og.sign(d) == Sign::Pos).collect();
    for s in starts {
        if seen[s] {
            continue;
        }
        let mut steps = Vec::new();
        let mut d = s;
        loop {
            if steps.len() > n {
                return Err(Error::Internal("vertex walk does not close".into()));
            }
            seen[d] = true;
            let t = if g.vertex_of(d) == v { Step::Minus } else { Step::Plus };
            steps.push(t);
            d = step(og, d, t);
            if d == s {
                break;
            }
        }
        if steps.iter().all(|&t| t == Step::Minus) {
            continue;
        }
        out.push(Curve::from_steps(og, s, &steps)?);
    }
    Ok(MultiCurve::new(out))
}

/// Components of a cut graph as a stable graph, plus each component's dart set.
pub fn stable_graph_of(cut_og: &OrientedGraph, tags: &[FaceTag]) -> Result<(DirectedStableGraph, Vec<Vec<Dart>>)> {
    let g = &cut_og.graph;
    let comps = g.components();
    let mut out = Vec::new();
    for darts in &comps {
        let sub = g.restrict(darts)?;
        let genus = sub.topology()?.genus;
        let mut faces: Vec<usize> = darts.iter().map(|&d| g.face_of(d)).collect();
        faces.sort();
        faces.dedup();
        let slots = faces
            .iter()
            .map(|&f| match tags[f] {
                FaceTag::Leg { sign, label } => Slot { sign, kind: SlotKind::Leg, label },
                FaceTag::Curve { id, sign } => Slot { sign, kind: SlotKind::Edge, label: id },
            })
            .collect();
        out.push(Component { genus, slots });
    }
    Ok((DirectedStableGraph { components: out }, comps))
}

#[derive(Clone, Debug)]
pub struct CutAlong {
    pub cut: Cut,
    pub stable: DirectedStableGraph,
    pub component_darts: Vec<Vec<Dart>>,
}

/// Cuts a labelled graph along a simple multicurve and records the stable graph.
pub fn cut_along(lg: &LabelledGraph, metric: Option<&crate::ribbon::Metric>, mc: &MultiCurve) -> Result<CutAlong> {
    let tags = surgery::leg_tags(&lg.og, &lg.labels);
    let cut = surgery::cut(&lg.og, &tags, metric, mc, 0)?;
    let (stable, component_darts) = stable_graph_of(&cut.og, &cut.tags)?;
    for (k, comp) in stable.components.iter().enumerate() {
        let sub = cut.og.graph.restrict(&component_darts[k])?;
        if 2 * comp.genus as i64 - 2 + comp.slots.len() as i64 <= 0 || sub.vertices().is_empty() {
            return Err(Error::NotAdmissible(format!("component {k} is unstable")));
        }
    }
    Ok(CutAlong { cut, stable, component_darts })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PantsGluing {
    /// 1: (+i, +j, -c); 2: (+i, -j, -c); 3: (+i, -c1, -c2) non-separating; 4: separating.
    pub kind: u8,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

/// Classifies the bounded pant cut off by `gamma_plus(v)`.
pub fn bounded_pants_classify(lg: &LabelledGraph, v: usize) -> Result<PantsGluing> {
    let g = lg.graph();
    if let Some(w) = (0..g.vertices().len()).find(|&w| g.vertices()[w].len() != 4) {
        return Err(Error::NotFourValent(w));
    }
    let mc = gamma_plus(&lg.og, v)?;
    let ca = cut_along(lg, None, &mc)?;
    let c0 = ca.component_darts.iter().position(|ds| ds.contains(&g.vertices()[v][0])).ok_or_else(|| Error::Internal("vertex lost".into()))?;
    let comp = &ca.stable.components[c0];
    let sub = ca.cut.og.graph.restrict(&ca.component_darts[c0])?;
    if comp.genus != 0 || comp.slots.len() != 3 || sub.vertices().len() != 1 {
        return Err(Error::NotAdmissible(format!("piece at vertex {v} is not a one-vertex pant")));
    }
    let legs = |sign| -> Vec<usize> {
        let mut l: Vec<usize> = comp.slots.iter().filter(|s| s.kind == SlotKind::Leg && s.sign == sign).map(|s| s.label).collect();
        l.sort();
        l
    };
    let ends: Vec<&Slot> = comp.slots.iter().filter(|s| s.kind == SlotKind::Edge).collect();
    if ends.iter().any(|s| s.sign != Sign::Neg) {
        return Err(Error::NotAdmissible("pant is not glued along negative boundaries".into()));
    }
    let (positive, negative) = (legs(Sign::Pos), legs(Sign::Neg));
    let kind = match (positive.len(), negative.len(), ends.len()) {
        (2, 0, 1) => 1,
        (1, 1, 1) => 2,
        (1, 0, 2) if ca.stable.components.len() == 2 => 3,
        (1, 0, 2) if ca.stable.components.len() == 3 => 4,
        _ => return Err(Error::NotAdmissible(format!("unexpected pant at vertex {v}"))),
    };
    Ok(PantsGluing { kind, positive, negative })
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// The decomposing multicurve, as words on the input graph.
    pub curves: MultiCurve,
    pub stable: DirectedStableGraph,
    /// The vertex of each stable component.
    pub component_vertex: Vec<usize>,
    /// The final cut graph (same darts and `s0` as the input).
    pub cut_graph: OrientedGraph,
}

/// Peels vertices in the given order: the piece around `order[0]` is cut off first by
/// its vertex curves, then the same is done inside the remainder, and so on.
pub fn acyclic_decompose(lg: &LabelledGraph, order: &[usize]) -> Result<Decomposition> {
    let g = lg.graph();
    let nv = g.vertices().len();
    let mut check = order.to_vec();
    check.sort();
    if check != (0..nv).collect::<Vec<_>>() {
        return Err(Error::Parse(format!("vertex order must be a permutation of 0..{nv}")));
    }
    let orig = &lg.og;
    let mut current = orig.clone();
    let mut tags = surgery::leg_tags(orig, &lg.labels);
    let mut strips: Vec<Vec<Step>> = vec![Vec::new(); g.n_darts()];
    let mut curves: Vec<Curve> = Vec::new();
    for &v in order {
        let mc = match gamma_plus(&current, v) {
            Ok(mc) => mc,
            Err(Error::SingleVertex) => continue,
            Err(e) => return Err(e),
        };
        let cut = surgery::cut(&current, &tags, None, &mc, curves.len())?;
        for c in &cut.curves {
            let word = surgery::expand_word(orig, &current, &strips, &c.word())?;
            curves.push(Curve::new(orig, &word, q(1))?);
        }
        strips = surgery::compose_strips(&current, &strips, &cut.strips);
        current = cut.og;
        tags = cut.tags;
    }
    let (stable, comps) = stable_graph_of(&current, &tags)?;
    let component_vertex = comps
        .iter()
        .map(|ds| {
            let mut vs: Vec<usize> = ds.iter().map(|&d| current.graph.vertex_of(d)).collect();
            vs.sort();
            vs.dedup();
            if vs.len() == 1 {
                Ok(vs[0])
            } else {
                Err(Error::Internal("decomposition left a piece with several vertices".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition { curves: MultiCurve::new(curves), stable, component_vertex, cut_graph: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::curve_vectors;
    use crate::ribbon::samples::*;
    use crate::ribbon::Metric;
    use crate::stable::{is_acyclic, validate_stable};

    #[test]
    fn xi_plus_on_g11() {
        let lg = labelled(g11());
        let u = xi_plus(&lg.og, 0).unwrap();
        let v = xi_plus(&lg.og, 1).unwrap();
        assert_eq!(u, [1, -1, 1, -1].map(BigInt::from).to_vec());
        assert!(u.iter().zip(&v).all(|(a, b)| a + b == BigInt::from(0)));
        let p = labelled(pant());
        assert_eq!(xi_plus(&p.og, 0).unwrap(), vec![BigInt::from(0); 2]);
    }

    #[test]
    fn gamma_plus_on_g11() {
        let lg = labelled(g11());
        let mc = gamma_plus(&lg.og, 0).unwrap();
        assert_eq!(mc.components.len(), 2);
        let v = curve_vectors(&lg.og, &mc).unwrap();
        assert_eq!(v.x, [1, -1, 1, -1].map(q).to_vec());
        assert_eq!(v.y, [1, 1, 1, 1].map(q).to_vec());
        assert!(v.simple);
        assert_eq!(crate::curves::curve_length(&Metric::ones(lg.graph()), &lg.og, &mc).unwrap(), q(4));
        assert!(matches!(gamma_plus(&labelled(pant()).og, 0), Err(Error::SingleVertex)));
    }

    #[test]
    fn gamma_plus_reversed() {
        let lg = labelled(g11());
        let rev = lg.og.reversed();
        let a = curve_vectors(&lg.og, &gamma_plus(&lg.og, 1).unwrap()).unwrap();
        let b = curve_vectors(&rev, &gamma_plus(&rev, 1).unwrap()).unwrap();
        assert_eq!(a.y, b.y);
        assert_eq!(a.x, b.x.iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn cut_g11() {
        let lg = labelled(g11());
        let mc = gamma_plus(&lg.og, 0).unwrap();
        let m = Metric::ones(lg.graph());
        let ca = cut_along(&lg, Some(&m), &mc).unwrap();
        assert!(validate_stable(&ca.stable).is_ok());
        assert_eq!(ca.stable.components.len(), 2);
        let c0 = &ca.stable.components[0];
        assert_eq!(c0.genus, 0);
        assert!(c0.slots.contains(&Slot { sign: Sign::Pos, kind: SlotKind::Leg, label: 1 }));
        assert_eq!(c0.slots.iter().filter(|s| s.kind == SlotKind::Edge && s.sign == Sign::Neg).count(), 2);
        assert_eq!(ca.stable.edges().values().copied().collect::<Vec<_>>(), vec![(0, 1), (0, 1)]);
        assert_eq!(bounded_pants_classify(&lg, 0).unwrap().kind, 3);
        let cut0 = cut_along(&lg, Some(&m), &MultiCurve::default()).unwrap();
        assert_eq!(cut0.stable.components.len(), 1);
        assert_eq!(cut0.cut.og, lg.og);
    }

    #[test]
    fn decompose_g11() {
        let lg = labelled(g11());
        let d = acyclic_decompose(&lg, &[0, 1]).unwrap();
        assert_eq!(d.curves.word_set(), gamma_plus(&lg.og, 0).unwrap().word_set());
        let (ok, order) = is_acyclic(&d.stable);
        assert!(ok);
        let verts: Vec<usize> = order.iter().map(|&c| d.component_vertex[c]).collect();
        assert_eq!(verts, vec![0, 1]);
        let p = labelled(pant());
        let d = acyclic_decompose(&p, &[0]).unwrap();
        assert!(d.curves.components.is_empty());
        assert_eq!(d.stable.components.len(), 1);
    }
}
