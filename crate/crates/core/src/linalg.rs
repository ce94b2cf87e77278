//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let t = &m[r][k] * &f;
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of `{v : m v = 0}`, with `cols` unknowns.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -a[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Some `x` with `m x = b`, if one exists.
pub fn solve(m: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix = m.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let pivots = rref(&mut a);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][cols].clone();
    }
    Some(x)
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| dot(r, v)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rescales to a primitive integer vector with positive leading entry.
pub fn primitive(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| x.signum());
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

pub fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// True when `v` lies in the row span of `basis`.
pub fn in_span(basis: &[Vec<Q>], v: &[Q]) -> bool {
    let mut m: Matrix = basis.to_vec();
    let r = rank(&m);
    m.push(v.to_vec());
    rank(&m) == r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn qm(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn kernel_and_solve() {
        let m = qm(&[&[1, 1, 1, 1], &[1, 1, 1, 1]]);
        assert_eq!(rank(&m), 1);
        let k = nullspace(&m, 4);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
        let x = solve(&m, &[q(4), q(4)]).unwrap();
        assert_eq!(mat_vec(&m, &x), vec![q(4), q(4)]);
        assert!(solve(&m, &[q(4), q(5)]).is_none());
        assert_eq!(primitive(&[q(0), q(-2), q(4)]), vec![0.into(), 1.into(), BigInt::from(-2)]);
    }
}
