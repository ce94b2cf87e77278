//! Edge spaces of an oriented graph: boundary forms, the kernel K, the vertex span,
//! the corner space W and the pairing on K.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::curves::{boundary_forms, simple_curve_vectors, MultiCurve};
use crate::decompose::xi_plus;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{q, qr, Q};
use crate::ribbon::{OrientedGraph, Sign};

#[derive(Clone, Debug)]
pub struct LinearData {
    pub n_edges: usize,
    pub boundary_forms: Matrix,
    pub rank_dl: usize,
    pub k_basis: Vec<Vec<BigInt>>,
    pub h_hat_basis: Vec<Vec<BigInt>>,
    /// Basis of corner vectors, indexed by dart.
    pub w_basis: Vec<Vec<Q>>,
}

impl LinearData {
    pub fn dim_k(&self) -> usize {
        self.k_basis.len()
    }
    pub fn dim_h_hat(&self) -> usize {
        self.h_hat_basis.len()
    }
    pub fn dim_w(&self) -> usize {
        self.w_basis.len()
    }
    pub fn is_irreducible(&self) -> bool {
        self.k_basis.is_empty()
    }
}

/// Linear constraints cutting out W: `z_a + z_{s0 a} = z_{s1 a} + z_{s0 s1 a}`.
pub fn w_constraints(og: &OrientedGraph) -> Matrix {
    let g = &og.graph;
    let n = g.n_darts();
    (0..n)
        .map(|a| {
            let mut r = vec![Q::zero(); n];
            r[a] += q(1);
            r[g.s0(a)] += q(1);
            r[g.s1(a)] -= q(1);
            r[g.s0(g.s1(a))] -= q(1);
            r
        })
        .collect()
}

/// Twist vector of a corner vector: `x_[a] = z_{s2^-1 a} - z_a` for the positive dart `a`.
pub fn x_of_z(og: &OrientedGraph, z: &[Q]) -> Vec<Q> {
    let g = &og.graph;
    (0..g.edges().len())
        .map(|k| {
            let a = og.pos_dart(k);
            &z[g.s2_inv(a)] - &z[a]
        })
        .collect()
}

/// Traversal vector of a corner vector: `y_[a] = z_a + z_{s0 a}`.
pub fn y_of_z(og: &OrientedGraph, z: &[Q]) -> Vec<Q> {
    let g = &og.graph;
    (0..g.edges().len())
        .map(|k| {
            let a = og.pos_dart(k);
            &z[a] + &z[g.s0(a)]
        })
        .collect()
}

fn x_matrix(og: &OrientedGraph) -> Matrix {
    let n = og.graph.n_darts();
    let cols: Vec<Vec<Q>> = (0..n)
        .map(|d| {
            let mut e = vec![Q::zero(); n];
            e[d] = q(1);
            x_of_z(og, &e)
        })
        .collect();
    linalg::transpose(&cols, og.graph.edges().len())
}

pub fn linear_data(og: &OrientedGraph) -> Result<LinearData> {
    let g = &og.graph;
    let ne = g.edges().len();
    let dl = boundary_forms(og);
    let rank_dl = linalg::rank(&dl);
    let k_basis: Vec<Vec<BigInt>> = linalg::nullspace(&dl, ne).iter().map(|v| linalg::primitive(v)).collect();
    let xis: Vec<Vec<Q>> = (0..g.vertices().len()).map(|v| xi_plus(og, v).map(|x| linalg::to_q(&x))).collect::<Result<_>>()?;
    let mut h = xis.clone();
    let piv = linalg::rref(&mut h);
    let h_hat_basis = h[..piv.len()].iter().map(|v| linalg::primitive(v)).collect();
    let w_basis = linalg::nullspace(&w_constraints(og), g.n_darts());
    Ok(LinearData { n_edges: ne, boundary_forms: dl, rank_dl, k_basis, h_hat_basis, w_basis })
}

/// `½ Σ_e (z1_e z2_{s0 e} - z1_{s0 e} z2_e)`.
pub fn omega_bar(og: &OrientedGraph, z1: &[Q], z2: &[Q]) -> Q {
    let g = &og.graph;
    let s: Q = (0..g.n_darts()).map(|e| &z1[e] * &z2[g.s0(e)] - &z1[g.s0(e)] * &z2[e]).sum();
    s * qr(1, 2)
}

/// The face-successor variant `-½ Σ_e z1_e ∧ z2_{s2 e}`.
pub fn omega_bar_faces(og: &OrientedGraph, z1: &[Q], z2: &[Q]) -> Q {
    let g = &og.graph;
    let s: Q = (0..g.n_darts()).map(|e| &z1[e] * &z2[g.s2(e)] - &z1[g.s2(e)] * &z2[e]).sum();
    -s * qr(1, 2)
}

/// `-½ Σ_edges (x1 y2 - x2 y1)`.
pub fn omega_bar_xy(og: &OrientedGraph, z1: &[Q], z2: &[Q]) -> Q {
    let (x1, y1, x2, y2) = (x_of_z(og, z1), y_of_z(og, z1), x_of_z(og, z2), y_of_z(og, z2));
    let s: Q = (0..x1.len()).map(|k| &x1[k] * &y2[k] - &x2[k] * &y1[k]).sum();
    -s * qr(1, 2)
}

/// `-½ Σ_β ω_β`, with `ω_β = Σ_{i<j} x_{β_i} ∧ x_{β_j}` over the darts of each face.
pub fn omega_bar_boundaries(og: &OrientedGraph, z1: &[Q], z2: &[Q]) -> Q {
    let g = &og.graph;
    let (x1, x2) = (x_of_z(og, z1), x_of_z(og, z2));
    let mut s = Q::zero();
    for f in g.faces() {
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                let (a, b) = (g.edge_of(f[i]), g.edge_of(f[j]));
                s += &x1[a] * &x2[b] - &x2[a] * &x1[b];
            }
        }
    }
    -s * qr(1, 2)
}

/// `-½ Σ_v ω̂_v`, with `ω̂_v = Σ_{i<j} (-1)^{i+j} y_{v_i} ∧ y_{v_j}` around each vertex.
pub fn omega_bar_vertices(og: &OrientedGraph, z1: &[Q], z2: &[Q]) -> Q {
    let g = &og.graph;
    let (y1, y2) = (y_of_z(og, z1), y_of_z(og, z2));
    let mut s = Q::zero();
    for v in g.vertices() {
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let (a, b) = (g.edge_of(v[i]), g.edge_of(v[j]));
                let t = &y1[a] * &y2[b] - &y2[a] * &y1[b];
                if (i + j) % 2 == 0 {
                    s += t;
                } else {
                    s -= t;
                }
            }
        }
    }
    -s * qr(1, 2)
}

/// A corner vector with the given twist vector.
pub fn lift(og: &OrientedGraph, ld: &LinearData, x: &[Q]) -> Result<Vec<Q>> {
    let xm = x_matrix(og);
    let bt = linalg::transpose(&ld.w_basis, og.graph.n_darts());
    let a: Matrix = xm.iter().map(|row| (0..ld.w_basis.len()).map(|j| linalg::dot(row, &ld.w_basis[j])).collect()).collect();
    let c = linalg::solve(&a, x).ok_or_else(|| Error::Internal("twist vector has no corner lift".into()))?;
    Ok(linalg::mat_vec(&bt, &c))
}

#[derive(Clone, Debug)]
pub struct PairingData {
    /// Antisymmetric matrix on the K basis.
    pub omega: Matrix,
    pub lifts: Vec<Vec<Q>>,
}

impl PairingData {
    /// Kernel of Omega as vectors in edge coordinates.
    pub fn kernel(&self, ld: &LinearData) -> Vec<Vec<Q>> {
        let k = ld.k_basis.len();
        linalg::nullspace(&self.omega, k)
            .iter()
            .map(|c| (0..ld.n_edges).map(|e| (0..k).map(|i| &c[i] * Q::from_integer(ld.k_basis[i][e].clone())).sum()).collect())
            .collect()
    }
}

pub fn pairing(og: &OrientedGraph, ld: &LinearData) -> Result<PairingData> {
    let lifts = ld.k_basis.iter().map(|k| lift(og, ld, &linalg::to_q(k))).collect::<Result<Vec<_>>>()?;
    let omega = lifts.iter().map(|a| lifts.iter().map(|b| omega_bar(og, a, b)).collect()).collect();
    Ok(PairingData { omega, lifts })
}

/// Checks `Ω(x(c), ξ) = Σ_e y_e(c) ξ_e` for every basis vector ξ of K.
pub fn hamiltonian_check(og: &OrientedGraph, mc: &MultiCurve) -> Result<bool> {
    let v = simple_curve_vectors(og, mc)?;
    let ld = linear_data(og)?;
    let pd = pairing(og, &ld)?;
    for (k, z) in ld.k_basis.iter().zip(&pd.lifts) {
        let lhs = omega_bar(og, &v.z, z);
        let rhs = linalg::dot(&v.y, &linalg::to_q(k));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the kernel of Omega on K is exactly the vertex span.
pub fn kernel_matches_vertex_span(ld: &LinearData, pd: &PairingData) -> bool {
    let ker = pd.kernel(ld);
    let h: Vec<Vec<Q>> = ld.h_hat_basis.iter().map(|v| linalg::to_q(v)).collect();
    ker.len() == h.len() && ker.iter().all(|v| linalg::in_span(&h, v)) && h.iter().all(|v| linalg::in_span(&ker, v))
}

/// Counts of positive and negative faces.
pub fn sign_profile(og: &OrientedGraph) -> (usize, usize) {
    let f = og.graph.faces().len();
    let p = (0..f).filter(|&i| og.face_sign(i) == Sign::Pos).count();
    (p, f - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{curve_vectors, Curve, Step};
    use crate::decompose::gamma_plus;
    use crate::ribbon::samples::*;

    #[test]
    fn pant_is_irreducible() {
        let og = labelled(pant()).og;
        let ld = linear_data(&og).unwrap();
        assert!(ld.is_irreducible());
        assert!(pairing(&og, &ld).unwrap().omega.is_empty());
    }

    #[test]
    fn g11_dimensions_and_kernel() {
        let og = labelled(g11()).og;
        let ld = linear_data(&og).unwrap();
        assert_eq!((ld.dim_k(), ld.dim_h_hat(), ld.rank_dl, ld.dim_w()), (3, 1, 1, 5));
        let pd = pairing(&og, &ld).unwrap();
        assert!(kernel_matches_vertex_span(&ld, &pd));
        assert_eq!(ld.h_hat_basis[0], [1, -1, 1, -1].map(BigInt::from).to_vec());
    }

    #[test]
    fn word_corners_satisfy_constraints() {
        let og = labelled(g11()).og;
        let c = Curve::new(&og, &[(0, Step::Minus), (5, Step::Plus)], q(1)).unwrap();
        let v = curve_vectors(&og, &MultiCurve::new(vec![c])).unwrap();
        assert!(linalg::mat_vec(&w_constraints(&og), &v.z).iter().all(|x| x.is_zero()));
        assert_eq!(x_of_z(&og, &v.z), v.x);
        assert_eq!(y_of_z(&og, &v.z), v.y);
    }

    #[test]
    fn hamiltonian_on_g11() {
        let og = labelled(g11()).og;
        assert!(hamiltonian_check(&og, &gamma_plus(&og, 0).unwrap()).unwrap());
        assert!(hamiltonian_check(&og, &MultiCurve::default()).unwrap());
        let c = Curve::new(&og, &[(0, Step::Minus), (5, Step::Plus)], q(1)).unwrap();
        assert!(hamiltonian_check(&og, &MultiCurve::new(vec![c])).unwrap());
    }

    #[test]
    fn pairing_variants_agree() {
        let og = labelled(g11()).og;
        let ld = linear_data(&og).unwrap();
        let w = &ld.w_basis;
        for (i, a) in w.iter().enumerate() {
            for b in &w[i..] {
                let v = omega_bar(&og, a, b);
                assert_eq!(omega_bar_faces(&og, a, b), v);
                assert_eq!(omega_bar_xy(&og, a, b), v);
                assert_eq!(omega_bar_boundaries(&og, a, b), v);
                assert_eq!(omega_bar_vertices(&og, a, b), v);
            }
        }
    }
}
