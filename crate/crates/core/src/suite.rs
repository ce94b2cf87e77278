//! The verification suite: oracle agreement, graph-level invariants, identities and the
//! cut-and-join residual, one report per criterion.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{Curve, MultiCurve, Step};
use crate::decompose::{acyclic_decompose, bounded_pants_classify, cut_along, gamma_plus};
use crate::enumerate::{enumerate_graphs, hurwitz_reconstruction, hurwitz_table, volume_oracle, GraphCatalog};
use crate::error::{Error, Result};
use crate::identities::{cut_and_join_residual, identity_checks, random_point, t_monomial, CutJoinVariant, Finding};
use crate::poly::Poly;
use crate::rational::{fmt_q, q, qr, Q};
use crate::ribbon::LabelledGraph;
use crate::stable::is_acyclic;
use crate::symplectic::{hamiltonian_check, kernel_matches_vertex_span, linear_data, pairing};
use crate::volumes::{f_polynomial, z_evaluate};

/// Types checked against the enumeration oracle.
pub const ORACLE_TYPES: [(u32, usize, usize); 7] = [(0, 2, 1), (0, 1, 2), (0, 2, 2), (0, 3, 1), (0, 1, 3), (1, 1, 1), (1, 2, 1)];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
}

impl CriterionReport {
    fn new(id: u32, title: &str, failures: Vec<String>, detail: String) -> Self {
        CriterionReport { id, title: title.into(), passed: failures.is_empty(), detail, findings: failures }
    }

    pub fn line(&self) -> String {
        format!("criterion {} [{}] {}: {}", self.id, if self.passed { "PASS" } else { "FAIL" }, self.title, self.detail)
    }
}

fn catalogs(types: &[(u32, usize, usize)]) -> Result<Vec<GraphCatalog>> {
    types.iter().map(|&(g, p, m)| enumerate_graphs(g, p, m)).collect()
}

/// Integral boundary points with entries in `1..=max` satisfying the residue condition.
pub fn integral_points(np: usize, nm: usize, max: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut out = Vec::new();
    let plus: Vec<Vec<i64>> = (0..np).map(|_| 1..=max).multi_cartesian_product().collect();
    let minus: Vec<Vec<i64>> = (0..nm).map(|_| 1..=max).multi_cartesian_product().collect();
    for p in &plus {
        let s: i64 = p.iter().sum();
        for m in &minus {
            if m.iter().sum::<i64>() == s {
                out.push((p.clone(), m.clone()));
            }
        }
    }
    out
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Base volumes: `Z_{0,2,1} = Z_{0,1,2} = 1` by recursion and by the oracle.
pub fn criterion_base(seed: u64) -> Result<CriterionReport> {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(np, nm) in &[(2usize, 1usize), (1, 2)] {
        let cat = enumerate_graphs(0, np, nm)?;
        for _ in 0..10 {
            let (lp, lm) = random_point(&mut rng, np, nm);
            let z = z_evaluate(0, &lp, &lm)?;
            if z != q(1) {
                bad.push(format!("Z_(0,{np},{nm}) = {} by recursion", fmt_q(&z)));
            }
        }
        for (lp, lm) in integral_points(np, nm, 8) {
            let v = volume_oracle(&cat, &lp, &lm)?;
            if v != q(1) {
                bad.push(format!("Z_(0,{np},{nm})({lp:?}|{lm:?}) = {} by oracle", fmt_q(&v)));
            }
        }
    }
    Ok(CriterionReport::new(1, "base volumes", bad, "recursion at 10 rational points and oracle at all integral points <= 8, exact".into()))
}

/// Closed forms for `F_{0,2}, F_{0,3}, F_{0,4}, F_{1,1}` by all four routes.
pub fn criterion_closed_forms(seed: u64) -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let forms: Vec<(u32, usize, Poly)> = vec![
        (0, 2, Poly::one(2)),
        (0, 3, Poly::linear(&[q(1), q(1), q(1)])),
        (0, 4, Poly::linear(&[q(1), q(1), q(1), q(1)]).pow(2)),
        (1, 1, Poly::monomial(vec![3], qr(1, 24))),
    ];
    for (g, n, want) in forms {
        let name = format!("F_({g},{n})");
        if f_polynomial(g, n)? != want {
            bad.push(format!("{name}: recursion gives {}", f_polynomial(g, n)?));
        }
        for _ in 0..10 {
            let (lp, lm) = random_point(&mut rng, n, 1);
            let z = z_evaluate(g, &lp, &lm)?;
            if z != want.eval(&lp) {
                bad.push(format!("{name}: z_evaluate {} at {lp:?}", fmt_q(&z)));
            }
        }
        let cat = enumerate_graphs(g, n, 1)?;
        let pts = integral_points(n, 1, 6);
        let step = (pts.len() / 6).max(1);
        let mut used = 0;
        for (lp, lm) in pts.iter().step_by(step) {
            used += 1;
            let v = volume_oracle(&cat, lp, lm)?;
            if v != want.eval(&qs(lp)) {
                bad.push(format!("{name}: oracle {} at {lp:?}", fmt_q(&v)));
            }
        }
        if used < 5 {
            bad.push(format!("{name}: only {used} oracle points"));
        }
        let rebuilt = hurwitz_reconstruction(&hurwitz_table(&cat), n);
        if rebuilt != want {
            bad.push(format!("{name}: Hurwitz reconstruction {rebuilt}"));
        }
    }
    Ok(CriterionReport::new(2, "closed forms", bad, "recursion, 10 rational points, >= 5 oracle points and Hurwitz reconstruction each, exact".into()))
}

/// `z_evaluate = volume_oracle` on all integral points `<= 8` (`>= 3` points for `(1,2,1)`).
pub fn criterion_oracle(max: i64) -> Result<CriterionReport> {
    let mut bad = Vec::new();
    let mut total = 0usize;
    for &(g, np, nm) in &ORACLE_TYPES {
        let cat = enumerate_graphs(g, np, nm)?;
        let mut pts = integral_points(np, nm, max);
        if (g, np, nm) == (1, 2, 1) {
            pts = vec![(vec![1, 2], vec![3]), (vec![3, 4], vec![7]), (vec![5, 2], vec![7]), (vec![6, 6], vec![12])];
        }
        total += pts.len();
        let errs: Vec<String> = pts
            .par_iter()
            .map(|(lp, lm)| -> Result<Option<String>> {
                let z = z_evaluate(g, &qs(lp), &qs(lm))?;
                let o = volume_oracle(&cat, lp, lm)?;
                Ok((z != o).then(|| format!("({g},{np},{nm}) at {lp:?}|{lm:?}: recursion {}, oracle {}", fmt_q(&z), fmt_q(&o))))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        bad.extend(errs);
    }
    Ok(CriterionReport::new(3, "oracle equivalence", bad, format!("{total} integral points over {} types, exact", ORACLE_TYPES.len())))
}

fn graphs_of(types: &[(u32, usize, usize)]) -> Result<Vec<((u32, usize, usize), LabelledGraph)>> {
    Ok(catalogs(types)?
        .into_iter()
        .flat_map(|c| {
            let t = (c.g, c.n_plus, c.n_minus);
            c.entries.into_iter().map(move |e| (t, e.graph))
        })
        .collect())
}

/// Every vertex yields a bounded pant; their number is `2g-2+n+ + n-`.
pub fn criterion_pants(types: &[(u32, usize, usize)]) -> Result<CriterionReport> {
    let graphs = graphs_of(types)?;
    let mut bad = Vec::new();
    for (k, ((g, np, nm), lg)) in graphs.iter().enumerate() {
        let nv = lg.graph().vertices().len();
        let mut count = 0;
        for v in 0..nv {
            match bounded_pants_classify(lg, v) {
                Ok(_) => count += 1,
                Err(Error::SingleVertex) if nv == 1 => count += 1,
                Err(e) => bad.push(format!("({g},{np},{nm}) graph {k} vertex {v}: {e}")),
            }
        }
        if count as i64 != 2 * *g as i64 - 2 + (*np + *nm) as i64 {
            bad.push(format!("({g},{np},{nm}) graph {k}: {count} bounded pants"));
        }
    }
    Ok(CriterionReport::new(4, "recursion counting identity", bad, format!("{} graphs, every vertex", graphs.len())))
}

/// Acyclic decomposition for every graph and vertex order, stable under dart relabelling.
pub fn criterion_decomposition(types: &[(u32, usize, usize)], seed: u64) -> Result<CriterionReport> {
    let graphs = graphs_of(types)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut runs = 0;
    for (k, (t, lg)) in graphs.iter().enumerate() {
        let g = lg.graph();
        let nv = g.vertices().len();
        let n = g.n_darts();
        for order in (0..nv).permutations(nv) {
            runs += 1;
            let tag = format!("{t:?} graph {k} order {order:?}");
            let d = match acyclic_decompose(lg, &order) {
                Ok(d) => d,
                Err(e) => {
                    bad.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            let cut = &d.cut_graph.graph;
            if cut.vertices().len() != nv || d.stable.components.len() != nv {
                bad.push(format!("{tag}: {} components", d.stable.components.len()));
            }
            let (acyclic, _) = is_acyclic(&d.stable);
            if !acyclic {
                bad.push(format!("{tag}: stable graph has a cycle"));
            }
            let pos = |c: usize| order.iter().position(|&v| v == d.component_vertex[c]).unwrap();
            if d.stable.edges().values().any(|&(a, b)| pos(a) >= pos(b)) {
                bad.push(format!("{tag}: an edge runs against the order"));
            }
            if d.stable.components.iter().any(|c| c.genus != 0 || c.slots.len() != 3) {
                bad.push(format!("{tag}: a component is not a pant"));
            }
            let mut pi: Vec<usize> = (0..n).collect();
            pi.shuffle(&mut rng);
            let relabelled = lg.relabel(&pi);
            let rg = relabelled.graph();
            let new_order: Vec<usize> = order.iter().map(|&v| rg.vertex_of(pi[g.vertices()[v][0]])).collect();
            match acyclic_decompose(&relabelled, &new_order) {
                Ok(d2) if d2.stable.canonical() == d.stable.canonical() && d2.curves.components.len() == d.curves.components.len() => {}
                Ok(_) => bad.push(format!("{tag}: relabelling changes the decomposition")),
                Err(e) => bad.push(format!("{tag}: relabelled: {e}")),
            }
        }
    }
    Ok(CriterionReport::new(5, "acyclic decomposition", bad, format!("{} graphs, {runs} vertex orders, relabelled once each", graphs.len())))
}

/// `rank dl = n-1`, `dim K = 4g-3+n`, `dim Ĥ = V-1`, `dim W = E+1`, `ker Ω|K = Ĥ`.
pub fn criterion_linear_algebra(types: &[(u32, usize, usize)]) -> Result<CriterionReport> {
    let graphs = graphs_of(types)?;
    let mut bad = Vec::new();
    for (k, ((g, np, nm), lg)) in graphs.iter().enumerate() {
        let og = &lg.og;
        let n = np + nm;
        let (v, e) = (og.graph.vertices().len(), og.graph.edges().len());
        let ld = linear_data(og)?;
        let pd = pairing(og, &ld)?;
        let got = (ld.rank_dl, ld.dim_k(), ld.dim_h_hat(), ld.dim_w());
        let want = (n - 1, 4 * *g as usize + n - 3, v - 1, e + 1);
        if got != want {
            bad.push(format!("({g},{np},{nm}) graph {k}: (rank, K, H, W) = {got:?}, expected {want:?}"));
        }
        if !kernel_matches_vertex_span(&ld, &pd) {
            bad.push(format!("({g},{np},{nm}) graph {k}: kernel of the pairing differs from the vertex span"));
        }
    }
    Ok(CriterionReport::new(6, "linear-algebra dimensions", bad, format!("{} graphs", graphs.len())))
}

/// Simple admissible single curves given by step words of length `<= max_len`.
pub fn admissible_curves(lg: &LabelledGraph, max_len: usize) -> Vec<MultiCurve> {
    let og = &lg.og;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in og.positive_darts() {
        for len in 2..=max_len {
            for bits in 0u32..(1 << len) {
                let steps: Vec<Step> = (0..len).map(|i| if (bits >> i) & 1 == 0 { Step::Plus } else { Step::Minus }).collect();
                let Ok(c) = Curve::from_steps(og, start, &steps) else { continue };
                if c.is_peripheral() || c.is_proper_power() || !seen.insert(c.canonical_word()) {
                    continue;
                }
                let mc = MultiCurve::new(vec![c]);
                if crate::curves::is_simple(og, &mc) && crate::curves::in_k(og, &crate::curves::curve_vectors(og, &mc).map(|v| v.x).unwrap_or_default()) && cut_along(lg, None, &mc).is_ok() {
                    out.push(mc);
                }
            }
        }
    }
    out
}

/// Hamiltonian identity for all vertex curves and a random sample of admissible curves.
pub fn criterion_hamiltonian(types: &[(u32, usize, usize)], samples: usize, seed: u64) -> Result<CriterionReport> {
    let graphs = graphs_of(types)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut vertex_curves = 0;
    let mut pool = Vec::new();
    for (k, (t, lg)) in graphs.iter().enumerate() {
        for v in 0..lg.graph().vertices().len() {
            match gamma_plus(&lg.og, v) {
                Ok(mc) => {
                    vertex_curves += 1;
                    if !hamiltonian_check(&lg.og, &mc)? {
                        bad.push(format!("{t:?} graph {k}: vertex {v} curve fails"));
                    }
                }
                Err(Error::SingleVertex) => {}
                Err(e) => return Err(e),
            }
        }
        for mc in admissible_curves(lg, 6) {
            pool.push((k, *t, mc));
        }
    }
    pool.shuffle(&mut rng);
    let mut used = 0;
    for (k, t, mut mc) in pool.into_iter().take(samples) {
        mc.components[0].weight = q(rng.gen_range(1..=5));
        used += 1;
        if !hamiltonian_check(&graphs[k].1.og, &mc)? {
            bad.push(format!("{t:?} graph {k}: curve {:?} fails", mc.components[0].word()));
        }
    }
    if used < samples {
        bad.push(format!("only {used} admissible curves available"));
    }
    Ok(CriterionReport::new(7, "Hamiltonian identity", bad, format!("{vertex_curves} vertex curves, {used} random admissible curves")))
}

/// The identity suite for all types up to `depth`.
pub fn criterion_identities(depth: u32, samples: usize, seed: u64) -> Result<(CriterionReport, Vec<Finding>)> {
    let findings = identity_checks(depth, samples, seed)?;
    let bad: Vec<String> = findings.iter().filter(|f| !f.ok).map(|f| format!("{} {:?}: {}", f.check, f.r#type, f.witness.clone().unwrap_or_default())).collect();
    let types: BTreeSet<_> = findings.iter().map(|f| f.r#type).collect();
    let r = CriterionReport::new(8, "identity suite", bad, format!("{} checks over {} types, depth {depth}", findings.len(), types.len()));
    Ok((r, findings))
}

/// Residual report of the cut-and-join equation. Passing means the report is complete;
/// nonzero coefficients of the stated form are listed as findings.
pub fn criterion_cut_and_join(max_weight: u32) -> Result<CriterionReport> {
    let body = cut_and_join_residual(max_weight, CutJoinVariant::Body);
    let raised = cut_and_join_residual(max_weight, CutJoinVariant::Raised);
    let show = |r: &[(Vec<u32>, Q)]| r.iter().map(|(e, c)| format!("{}·{}", fmt_q(c), t_monomial(e))).collect::<Vec<_>>();
    let mut findings: Vec<String> = show(&body).into_iter().map(|s| format!("body residual term {s}")).collect();
    findings.extend(show(&raised).into_iter().map(|s| format!("raised-index residual term {s}")));
    let detail = format!(
        "weight <= {max_weight}: {} nonzero residual terms with t_(i+j-3), {} with t_(i+j+3)",
        body.len(),
        raised.len()
    );
    let complete = body.iter().chain(&raised).all(|(_, c)| !c.is_zero());
    Ok(CriterionReport { id: 9, title: "cut-and-join residual".into(), passed: complete, detail, findings })
}

/// Types among [`ORACLE_TYPES`] with at most `max_vertices` vertices.
pub fn graph_types(max_vertices: u32) -> Vec<(u32, usize, usize)> {
    ORACLE_TYPES.iter().copied().filter(|&(g, p, m)| 2 * g as usize + p + m - 2 <= max_vertices as usize).collect()
}

/// Runs every criterion with the given identity depth.
pub fn run_all(depth: u32, seed: u64) -> Result<(Vec<CriterionReport>, Vec<Finding>)> {
    let types = graph_types(depth.min(3));
    let mut out = vec![criterion_base(seed)?, criterion_closed_forms(seed)?, criterion_oracle(8)?];
    out.push(criterion_pants(&types)?);
    out.push(criterion_decomposition(&types, seed)?);
    out.push(criterion_linear_algebra(&types)?);
    out.push(criterion_hamiltonian(&types, 20, seed)?);
    let (r, findings) = criterion_identities(depth, 3, seed)?;
    out.push(r);
    out.push(criterion_cut_and_join(6)?);
    Ok((out, findings))
}
