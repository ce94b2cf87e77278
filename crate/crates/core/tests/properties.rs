use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;

use ribvol::curves::boundary_forms;
use ribvol::enumerate::{enumerate_graphs, volume_oracle, GraphCatalog};
use ribvol::linalg;
use ribvol::poly::Poly;
use ribvol::rational::{q, qr, Q};
use ribvol::ribbon::{automorphism_order, boundary_lengths, canonical_key, GraphJson, LabelledGraph, Metric, Sign};
use ribvol::symplectic::{linear_data, omega_bar, omega_bar_boundaries, omega_bar_faces, omega_bar_vertices, omega_bar_xy, x_of_z};
use ribvol::volumes::{f_polynomial, z_degree, z_evaluate};

fn catalogs() -> &'static Vec<GraphCatalog> {
    static CATS: OnceLock<Vec<GraphCatalog>> = OnceLock::new();
    CATS.get_or_init(|| {
        [(0, 2, 1), (0, 2, 2), (0, 3, 1), (1, 1, 1), (1, 2, 1), (0, 1, 3)]
            .iter()
            .map(|&(g, p, m)| enumerate_graphs(g, p, m).unwrap())
            .collect()
    })
}

fn any_graph() -> impl Strategy<Value = LabelledGraph> {
    let cats = catalogs();
    (0..cats.len(), any::<prop::sample::Index>()).prop_map(move |(c, i)| {
        let e = &cats[c].entries;
        e[i.index(e.len())].graph.clone()
    })
}

fn with_perm(lg: LabelledGraph) -> impl Strategy<Value = (LabelledGraph, Vec<usize>)> {
    let n = lg.graph().n_darts();
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |p| (lg.clone(), p))
}

fn ratio() -> impl Strategy<Value = Q> {
    (1i64..40, 1i64..6).prop_map(|(a, b)| qr(a, b))
}

/// Boundary lengths with `n_minus` negative entries, the last one fixed by the residue condition.
fn point(np: usize, nm: usize) -> impl Strategy<Value = (Vec<Q>, Vec<Q>)> {
    (prop::collection::vec(ratio(), np), prop::collection::vec(ratio(), nm - 1)).prop_filter_map("residue", move |(lp, mut lm)| {
        let last = lp.iter().sum::<Q>() - lm.iter().sum::<Q>();
        if last <= Q::zero() {
            return None;
        }
        lm.push(last);
        Some((lp, lm))
    })
}

fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..6, 1i64..4), 0..5).prop_map(move |ts| {
        let mut p = Poly::zero(nvars);
        for (e, a, b) in ts {
            p.add_term(e, qr(a, b));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poly_ring_ops_commute_with_evaluation(a in small_poly(3), b in small_poly(3), x in prop::collection::vec(-4i64..5, 3)) {
        let x: Vec<Q> = x.into_iter().map(q).collect();
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn poly_json_round_trip(a in small_poly(4)) {
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back = Poly::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn poly_permutation_is_invertible(a in small_poly(3), p in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let mut inv = vec![0; 3];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        prop_assert_eq!(a.permute(&p).permute(&inv), a);
    }

    #[test]
    fn relabelling_preserves_invariants((lg, pi) in any_graph().prop_flat_map(with_perm)) {
        let r = lg.relabel(&pi);
        prop_assert_eq!(canonical_key(&r), canonical_key(&lg));
        prop_assert_eq!(automorphism_order(&r), automorphism_order(&lg));
        prop_assert_eq!(r.directed_type().unwrap(), lg.directed_type().unwrap());
        let ld = (linear_data(&lg.og).unwrap(), linear_data(&r.og).unwrap());
        prop_assert_eq!((ld.0.dim_k(), ld.0.dim_h_hat(), ld.0.dim_w()), (ld.1.dim_k(), ld.1.dim_h_hat(), ld.1.dim_w()));
    }

    #[test]
    fn graph_json_round_trip(lg in any_graph()) {
        let text = serde_json::to_string(&GraphJson::from_labelled(&lg)).unwrap();
        let back = serde_json::from_str::<GraphJson>(&text).unwrap().to_labelled().unwrap();
        prop_assert_eq!(canonical_key(&back), canonical_key(&lg));
        prop_assert_eq!(back, lg);
    }

    #[test]
    fn metrics_satisfy_residue_and_boundary_forms(lg in any_graph(), seed in prop::collection::vec(ratio(), 16)) {
        let g = lg.graph();
        let m = Metric::new(g, seed[..g.edges().len()].to_vec()).unwrap();
        let b = boundary_lengths(&lg, &m).unwrap();
        let (p, n) = (b.signed_lengths(Sign::Pos), b.signed_lengths(Sign::Neg));
        prop_assert_eq!(p.iter().sum::<Q>(), n.iter().sum::<Q>());
        let forms = boundary_forms(&lg.og);
        let vals = linalg::mat_vec(&forms, &m.0);
        let mut lengths = b.lengths.clone();
        lengths.sort();
        let mut got: Vec<Q> = vals.iter().map(|v| if *v < Q::zero() { -v } else { v.clone() }).collect();
        got.sort();
        prop_assert!(got.iter().all(|v| lengths.contains(v)));
    }

    #[test]
    fn pairing_variants_agree_on_corner_space(lg in any_graph(), c in prop::collection::vec((-3i64..4, -3i64..4), 16)) {
        let og = &lg.og;
        let ld = linear_data(og).unwrap();
        let n = og.graph.n_darts();
        let mut z1 = vec![Q::zero(); n];
        let mut z2 = vec![Q::zero(); n];
        for (b, (u, v)) in ld.w_basis.iter().zip(&c) {
            for d in 0..n {
                z1[d] += &b[d] * q(*u);
                z2[d] += &b[d] * q(*v);
            }
        }
        let w = omega_bar(og, &z1, &z2);
        prop_assert_eq!(omega_bar(og, &z2, &z1), -w.clone());
        prop_assert_eq!(omega_bar_faces(og, &z1, &z2), w.clone());
        prop_assert_eq!(omega_bar_xy(og, &z1, &z2), w.clone());
        prop_assert_eq!(omega_bar_boundaries(og, &z1, &z2), w.clone());
        prop_assert_eq!(omega_bar_vertices(og, &z1, &z2), w);
        prop_assert_eq!(x_of_z(og, &z1).len(), og.graph.edges().len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn z_is_symmetric_within_signs((lp, lm) in point(3, 2)) {
        let v = z_evaluate(0, &lp, &lm).unwrap();
        let lp2 = vec![lp[2].clone(), lp[0].clone(), lp[1].clone()];
        let lm2 = vec![lm[1].clone(), lm[0].clone()];
        prop_assert_eq!(z_evaluate(0, &lp2, &lm2).unwrap(), v);
    }

    #[test]
    fn z_time_inversion((lp, lm) in point(2, 3)) {
        prop_assert_eq!(z_evaluate(0, &lp, &lm).unwrap(), z_evaluate(0, &lm, &lp).unwrap());
    }

    #[test]
    fn z_homogeneity((lp, lm) in point(2, 2), t in ratio()) {
        let d = z_degree(0, 2, 2);
        let v = z_evaluate(0, &lp, &lm).unwrap();
        let s = |v: &[Q]| v.iter().map(|x| x * &t).collect::<Vec<_>>();
        prop_assert_eq!(z_evaluate(0, &s(&lp), &s(&lm)).unwrap(), v * num_traits::pow(t.clone(), d as usize));
    }

    #[test]
    fn z_nonnegative_in_genus_one((lp, lm) in point(2, 1)) {
        prop_assert!(z_evaluate(1, &lp, &lm).unwrap() >= Q::zero());
    }

    #[test]
    fn one_negative_boundary_reduces_to_f((lp, lm) in point(3, 1)) {
        prop_assert_eq!(z_evaluate(0, &lp, &lm).unwrap(), f_polynomial(0, 3).unwrap().eval(&lp));
    }

    #[test]
    fn z_matches_oracle_at_integral_points(lp in prop::collection::vec(1i64..7, 2), a in 1i64..12) {
        let s: i64 = lp.iter().sum();
        prop_assume!(a < s);
        let lm = vec![a, s - a];
        let cat = &catalogs()[1];
        let want = volume_oracle(cat, &lp, &lm).unwrap();
        let lpq: Vec<Q> = lp.iter().map(|&x| q(x)).collect();
        let lmq: Vec<Q> = lm.iter().map(|&x| q(x)).collect();
        prop_assert_eq!(z_evaluate(0, &lpq, &lmq).unwrap(), want);
    }
}

#[test]
fn f_polynomials_are_symmetric() {
    for (g, n) in [(0, 5), (1, 3), (2, 2)] {
        let f = f_polynomial(g, n).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(i, j);
                assert_eq!(f.permute(&p), f, "F_({g},{n}) under ({i} {j})");
            }
        }
    }
}
