//! Admissible curves as cyclic words of s+/s- steps on positive darts.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, Q};
use crate::ribbon::{Dart, Metric, OrientedGraph, Sign};

/// `+` is `s2`, `-` is `s1 s2^-1 s1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::Plus => "+",
            Step::Minus => "-",
        })
    }
}

pub fn step(og: &OrientedGraph, e: Dart, s: Step) -> Dart {
    let g = &og.graph;
    match s {
        Step::Plus => g.s1(g.s0_inv(e)),
        Step::Minus => g.s1(g.s0(e)),
    }
}

/// The negative dart passed through when stepping from `e`.
pub fn corner(og: &OrientedGraph, e: Dart, s: Step) -> Dart {
    match s {
        Step::Plus => og.graph.s0_inv(e),
        Step::Minus => og.graph.s0(e),
    }
}

/// One closed curve: `darts[i]` is left by `steps[i]`, reaching `darts[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    pub darts: Vec<Dart>,
    pub steps: Vec<Step>,
    pub weight: Q,
}

impl Curve {
    pub fn new(og: &OrientedGraph, word: &[(Dart, Step)], weight: Q) -> Result<Self> {
        let c = Curve { darts: word.iter().map(|w| w.0).collect(), steps: word.iter().map(|w| w.1).collect(), weight };
        c.check(og)?;
        Ok(c)
    }

    /// Builds a curve from a start dart and step sequence.
    pub fn from_steps(og: &OrientedGraph, start: Dart, steps: &[Step]) -> Result<Self> {
        let mut darts = Vec::with_capacity(steps.len());
        let mut d = start;
        for &s in steps {
            darts.push(d);
            d = step(og, d, s);
        }
        let c = Curve { darts, steps: steps.to_vec(), weight: q(1) };
        c.check(og)?;
        Ok(c)
    }

    fn check(&self, og: &OrientedGraph) -> Result<()> {
        let n = self.darts.len();
        if n == 0 || self.steps.len() != n {
            return Err(Error::InvalidStep { pos: 0, reason: "empty word".into() });
        }
        if !self.weight.is_positive() {
            return Err(Error::InvalidStep { pos: 0, reason: "weight must be positive".into() });
        }
        for i in 0..n {
            let d = self.darts[i];
            if d >= og.graph.n_darts() {
                return Err(Error::InvalidStep { pos: i, reason: format!("dart {d} out of range") });
            }
            if og.sign(d) != Sign::Pos {
                return Err(Error::InvalidStep { pos: i, reason: format!("dart {d} is negative") });
            }
            let next = step(og, d, self.steps[i]);
            if next != self.darts[(i + 1) % n] {
                return Err(Error::InvalidStep {
                    pos: i,
                    reason: format!("s{} of {d} is {next}, not {}", self.steps[i], self.darts[(i + 1) % n]),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn word(&self) -> Vec<(Dart, Step)> {
        self.darts.iter().copied().zip(self.steps.iter().copied()).collect()
    }

    /// The least rotation of the word, as a representative of the cyclic word.
    pub fn canonical_word(&self) -> Vec<(Dart, Step)> {
        let w = self.word();
        (0..w.len())
            .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    pub fn is_peripheral(&self) -> bool {
        self.steps.iter().all(|&s| s == self.steps[0])
    }

    pub fn is_proper_power(&self) -> bool {
        let n = self.len();
        (1..n).any(|p| n.is_multiple_of(p) && (0..n).all(|i| self.darts[i] == self.darts[(i + p) % n] && self.steps[i] == self.steps[(i + p) % n]))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiCurve {
    pub components: Vec<Curve>,
}

impl MultiCurve {
    pub fn new(components: Vec<Curve>) -> Self {
        MultiCurve { components }
    }

    /// Merges repeated cyclic words into one component with the summed weight.
    pub fn merged(&self) -> MultiCurve {
        let mut out: Vec<(Vec<(Dart, Step)>, Curve)> = Vec::new();
        for c in &self.components {
            let key = c.canonical_word();
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some((_, existing)) => existing.weight += &c.weight,
                None => out.push((key, c.clone())),
            }
        }
        MultiCurve { components: out.into_iter().map(|x| x.1).collect() }
    }

    /// Components as a sorted list of cyclic words, for set comparison.
    pub fn word_set(&self) -> Vec<Vec<(Dart, Step)>> {
        let mut v: Vec<_> = self.merged().components.iter().map(|c| c.canonical_word()).collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveVectors {
    /// Twist vector per edge.
    pub x: Vec<Q>,
    /// Traversal counts per edge.
    pub y: Vec<Q>,
    /// Corner counts per dart: strands hugging the corner between `e` and `s0^-1 e`.
    pub z: Vec<Q>,
    pub simple: bool,
}

pub fn curve_vectors(og: &OrientedGraph, mc: &MultiCurve) -> Result<CurveVectors> {
    let g = &og.graph;
    let mut x = vec![Q::zero(); g.edges().len()];
    let mut y = vec![Q::zero(); g.edges().len()];
    let mut z = vec![Q::zero(); g.n_darts()];
    for c in &mc.components {
        c.check(og)?;
        let n = c.len();
        for i in 0..n {
            let e = c.darts[i];
            let k = g.edge_of(e);
            y[k] += &c.weight;
            match (c.steps[(i + n - 1) % n], c.steps[i]) {
                (Step::Plus, Step::Minus) => x[k] += &c.weight,
                (Step::Minus, Step::Plus) => x[k] -= &c.weight,
                _ => {}
            }
            match c.steps[i] {
                Step::Plus => z[e] += &c.weight,
                Step::Minus => z[g.s0(e)] += &c.weight,
            }
        }
    }
    let simple = is_simple(og, mc) && in_k(og, &x);
    Ok(CurveVectors { x, y, z, simple })
}

/// Like [`curve_vectors`] but fails with `NotSimple` for non-simple input.
pub fn simple_curve_vectors(og: &OrientedGraph, mc: &MultiCurve) -> Result<CurveVectors> {
    let v = curve_vectors(og, mc)?;
    if !v.simple {
        return Err(Error::NotSimple(simplicity_failure(og, mc).unwrap_or_else(|| "twist vector not in K".into())));
    }
    Ok(v)
}

pub fn curve_length(m: &Metric, og: &OrientedGraph, mc: &MultiCurve) -> Result<Q> {
    let v = curve_vectors(og, mc)?;
    Ok(linalg::dot(&m.0, &v.y))
}

/// Length of a single component (weight ignored).
pub fn component_length(m: &Metric, og: &OrientedGraph, c: &Curve) -> Q {
    c.darts.iter().map(|&d| &m.0[og.graph.edge_of(d)]).sum()
}

/// Boundary length differentials: one row per face, one column per edge.
pub fn boundary_forms(og: &OrientedGraph) -> linalg::Matrix {
    let g = &og.graph;
    g.faces()
        .iter()
        .map(|cyc| {
            let mut row = vec![Q::zero(); g.edges().len()];
            for &d in cyc {
                row[g.edge_of(d)] += q(1);
            }
            row
        })
        .collect()
}

pub fn in_k(og: &OrientedGraph, x: &[Q]) -> bool {
    linalg::mat_vec(&boundary_forms(og), x).iter().all(|v| v.is_zero())
}

pub fn is_simple(og: &OrientedGraph, mc: &MultiCurve) -> bool {
    simplicity_failure(og, mc).is_none()
}

type Strand = (usize, usize);

fn fwd(c: &Curve, i: usize, k: usize) -> Step {
    c.steps[(i + k) % c.len()]
}

fn bwd(c: &Curve, i: usize, k: usize) -> Step {
    let n = c.len();
    c.steps[(i + n * (k / n + 1) - 1 - k % n) % n]
}

/// Transverse order of two strands in the same edge band (positive side first),
/// read from future turns and from past entries.
fn strand_orders(cs: &[Curve], a: Strand, b: Strand) -> (Ordering, Ordering) {
    let (ca, cb) = (&cs[a.0], &cs[b.0]);
    let horizon = ca.len() + cb.len();
    let first_diff = |f: &dyn Fn(&Curve, usize, usize) -> Step| {
        (0..horizon)
            .map(|k| f(ca, a.1, k).cmp(&f(cb, b.1, k)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    };
    (first_diff(&fwd), first_diff(&bwd))
}

/// Reason the multicurve fails to be simple, if it does.
pub fn simplicity_failure(og: &OrientedGraph, mc: &MultiCurve) -> Option<String> {
    let mc = mc.merged();
    let cs = &mc.components;
    for (k, c) in cs.iter().enumerate() {
        if c.is_peripheral() {
            return Some(format!("component {k} is peripheral"));
        }
        if c.is_proper_power() {
            return Some(format!("component {k} is a proper power"));
        }
    }
    let mut bands: Vec<Vec<Strand>> = vec![Vec::new(); og.graph.edges().len()];
    for (k, c) in cs.iter().enumerate() {
        for (i, &d) in c.darts.iter().enumerate() {
            bands[og.graph.edge_of(d)].push((k, i));
        }
    }
    for (e, band) in bands.iter().enumerate() {
        for (p, &a) in band.iter().enumerate() {
            for &b in &band[p + 1..] {
                let (f, r) = strand_orders(cs, a, b);
                let crossing = match (f, r) {
                    (Ordering::Equal, Ordering::Equal) => a.0 == b.0,
                    (Ordering::Equal, _) | (_, Ordering::Equal) => true,
                    (f, r) => f != r,
                };
                if crossing {
                    return Some(format!("strands of components {} and {} cross in edge {e}", a.0, b.0));
                }
            }
        }
    }
    None
}

/// Strands of each edge band sorted from the positive face side to the negative one.
pub(crate) fn sorted_bands(og: &OrientedGraph, cs: &[Curve]) -> Vec<Vec<Strand>> {
    let mut bands: Vec<Vec<Strand>> = vec![Vec::new(); og.graph.edges().len()];
    for (k, c) in cs.iter().enumerate() {
        for i in 0..c.len() {
            bands[og.graph.edge_of(c.darts[i])].push((k, i));
        }
    }
    for band in bands.iter_mut() {
        band.sort_by(|&a, &b| strand_orders(cs, a, b).0);
    }
    bands
}

/// JSON form `{components: [{word: [[dart, "+"|"-"], ...], weight}]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiCurveJson {
    pub components: Vec<CurveJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub word: Vec<(Dart, Step)>,
    #[serde(with = "crate::rational::serde_q")]
    pub weight: Q,
}

impl MultiCurveJson {
    pub fn from_multicurve(mc: &MultiCurve) -> Self {
        MultiCurveJson {
            components: mc.components.iter().map(|c| CurveJson { word: c.word(), weight: c.weight.clone() }).collect(),
        }
    }
    pub fn to_multicurve(&self, og: &OrientedGraph) -> Result<MultiCurve> {
        let cs = self.components.iter().map(|c| Curve::new(og, &c.word, c.weight.clone())).collect::<Result<_>>()?;
        Ok(MultiCurve::new(cs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::samples::*;

    fn g11() -> OrientedGraph {
        labelled(crate::ribbon::samples::g11()).og
    }

    #[test]
    fn single_twisted_curve_on_g11() {
        let og = g11();
        let c = Curve::new(&og, &[(0, Step::Minus), (5, Step::Plus)], q(1)).unwrap();
        let v = curve_vectors(&og, &MultiCurve::new(vec![c])).unwrap();
        assert_eq!(v.x, vec![q(1), q(-1), q(0), q(0)]);
        assert_eq!(v.y, vec![q(1), q(1), q(0), q(0)]);
        assert!(v.simple);
    }

    #[test]
    fn bad_steps_rejected() {
        let og = g11();
        assert!(matches!(Curve::new(&og, &[(0, Step::Plus), (5, Step::Plus)], q(1)), Err(Error::InvalidStep { .. })));
        assert!(matches!(Curve::new(&og, &[(1, Step::Plus)], q(1)), Err(Error::InvalidStep { .. })));
    }

    #[test]
    fn empty_multicurve() {
        let og = g11();
        let v = curve_vectors(&og, &MultiCurve::default()).unwrap();
        assert!(v.x.iter().chain(&v.y).all(|x| x.is_zero()));
        assert!(v.simple);
    }

    #[test]
    fn pant_words_are_never_simple() {
        let og = labelled(pant()).og;
        for len in 1..=6usize {
            for bits in 0..(1u32 << len) {
                let steps: Vec<Step> = (0..len).map(|k| if bits >> k & 1 == 1 { Step::Minus } else { Step::Plus }).collect();
                for start in og.positive_darts().collect::<Vec<_>>() {
                    if let Ok(c) = Curve::from_steps(&og, start, &steps) {
                        assert!(!curve_vectors(&og, &MultiCurve::new(vec![c])).unwrap().simple);
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let og = g11();
        let c = Curve::new(&og, &[(0, Step::Minus), (5, Step::Plus)], q(3)).unwrap();
        let mc = MultiCurve::new(vec![c]);
        let s = serde_json::to_string(&MultiCurveJson::from_multicurve(&mc)).unwrap();
        assert_eq!(s, r#"{"components":[{"word":[[0,"-"],[5,"+"]],"weight":"3/1"}]}"#);
        let back: MultiCurveJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_multicurve(&og).unwrap(), mc);
    }
}
