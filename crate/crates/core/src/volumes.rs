//! The volume recursions: `F_{g,n}` (one negative boundary) as polynomials, its
//! coefficient table, and `Z_{g,n+,n-}` evaluated pointwise.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{fmt_q, horner, interpolate, q, qfact, qr, Q};

pub fn check_stable(g: u32, n_plus: usize, n_minus: usize) -> Result<()> {
    if n_plus == 0 || n_minus == 0 || 2 * g as i64 - 2 + (n_plus + n_minus) as i64 <= 0 {
        return Err(Error::UnstableType { g, n_plus, n_minus });
    }
    Ok(())
}

/// Degree of `F_{g,n}`.
pub fn f_degree(g: u32, n: usize) -> u32 {
    4 * g + n as u32 - 2
}

/// Degree of `Z_{g,n+,n-}`.
pub fn z_degree(g: u32, n_plus: usize, n_minus: usize) -> u32 {
    4 * g + (n_plus + n_minus) as u32 - 3
}

fn f_memo() -> &'static Mutex<HashMap<(u32, usize), Poly>> {
    static M: OnceLock<Mutex<HashMap<(u32, usize), Poly>>> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// `F_{g,n}(L_1..L_n)`.
pub fn f_polynomial(g: u32, n: usize) -> Result<Poly> {
    check_stable(g, n, 1)?;
    if let Some(p) = f_memo().lock().unwrap().get(&(g, n)) {
        return Ok(p.clone());
    }
    let p = f_compute(g, n)?;
    if p.homogeneous_degree().is_some_and(|d| d != f_degree(g, n)) {
        return Err(Error::Internal(format!("F_{{{g},{n}}} has the wrong degree")));
    }
    f_memo().lock().unwrap().insert((g, n), p.clone());
    Ok(p)
}

fn f_compute(g: u32, n: usize) -> Result<Poly> {
    if (g, n) == (0, 2) {
        return Ok(Poly::one(2));
    }
    let mut acc = Poly::zero(n);
    if n >= 2 && check_stable(g, n - 1, 1).is_ok() {
        let sub = f_polynomial(g, n - 1)?;
        for i in 0..n {
            for j in i + 1..n {
                let mut pair = vec![Q::zero(); n];
                pair[i] = q(1);
                pair[j] = q(1);
                let pair = Poly::linear(&pair);
                let mut images = vec![pair.clone()];
                images.extend((0..n).filter(|&k| k != i && k != j).map(|k| Poly::var(n, k)));
                acc = &acc + &(&pair * &sub.compose(&images));
            }
        }
    }
    if g >= 1 {
        let sub = f_polynomial(g - 1, n + 1)?;
        let mut half = Poly::zero(n);
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            for (e, c) in sub.terms() {
                let (a, b) = (e[0], e[1]);
                let w = qfact(a + 1) * qfact(b + 1) / qfact(a + b + 3);
                let mut f = vec![0; n];
                f[i] = a + b + 3;
                for (k, &o) in others.iter().enumerate() {
                    f[o] = e[k + 2];
                }
                half.add_term(f, c * w);
            }
        }
        acc = &acc + &half.scale(&qr(1, 2));
    }
    Ok(acc.scale(&(Q::one() / q(2 * g as i64 - 1 + n as i64))))
}

fn c_memo() -> &'static Mutex<HashMap<Vec<u32>, Q>> {
    static M: OnceLock<Mutex<HashMap<Vec<u32>, Q>>> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// Genus of the coefficient `c(alpha)`, if `|alpha| = 4g - 2 + n` has a solution.
pub fn coefficient_genus(alpha: &[u32]) -> Option<u32> {
    let n = alpha.len() as i64;
    let s = alpha.iter().map(|&a| a as i64).sum::<i64>();
    let t = s + 2 - n;
    (t >= 0 && t % 4 == 0).then_some((t / 4) as u32)
}

/// `c(alpha)` from the coefficient recursion alone (no polynomials involved).
pub fn coefficient(alpha: &[u32]) -> Q {
    let mut key = alpha.to_vec();
    key.sort_unstable();
    if let Some(c) = c_memo().lock().unwrap().get(&key) {
        return c.clone();
    }
    let c = coefficient_compute(&key);
    c_memo().lock().unwrap().insert(key, c.clone());
    c
}

fn coefficient_compute(alpha: &[u32]) -> Q {
    let n = alpha.len();
    let Some(g) = coefficient_genus(alpha) else { return Q::zero() };
    if check_stable(g, n, 1).is_err() {
        return Q::zero();
    }
    if (g, n) == (0, 2) {
        return if alpha == [0, 0] { q(1) } else { Q::zero() };
    }
    let mut acc = Q::zero();
    for i in 0..n {
        for j in i + 1..n {
            let s = alpha[i] + alpha[j];
            if s == 0 {
                continue;
            }
            let mut beta = vec![s - 1];
            beta.extend((0..n).filter(|&k| k != i && k != j).map(|k| alpha[k]));
            acc += qfact(s) / (qfact(alpha[i]) * qfact(alpha[j])) * coefficient(&beta);
        }
    }
    let mut half = Q::zero();
    for i in 0..n {
        if alpha[i] < 3 {
            continue;
        }
        for x1 in 0..=alpha[i] - 3 {
            let x2 = alpha[i] - 3 - x1;
            let mut beta = vec![x1, x2];
            beta.extend((0..n).filter(|&k| k != i).map(|k| alpha[k]));
            half += qfact(x1 + 1) * qfact(x2 + 1) / qfact(alpha[i]) * coefficient(&beta);
        }
    }
    (acc + half * qr(1, 2)) / q(2 * g as i64 - 1 + n as i64)
}

/// All weak compositions of `total` into `n` parts, sorted ascending (partitions).
pub fn sorted_exponents(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, n: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut a = min;
        while a * n as u32 <= total {
            cur.push(a);
            rec(total - a, n - 1, a, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    rec(total, n, 0, &mut Vec::new(), &mut out);
    out
}

/// The coefficient table of `F_{g,n}` indexed by sorted exponent vectors.
pub fn coefficient_table(g: u32, n: usize) -> Result<Vec<(Vec<u32>, Q)>> {
    check_stable(g, n, 1)?;
    Ok(sorted_exponents(f_degree(g, n), n).into_iter().map(|a| {
        let c = coefficient(&a);
        (a, c)
    }).collect())
}

/// Reading of the factor `[L_i+ - L_j-]` in the pant term gluing one positive and one negative boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TypeTwoFactor {
    /// `[·]+`: the term vanishes when `L_i+ <= L_j-`.
    #[default]
    PositivePart,
    /// Signed: when `L_i+ < L_j-` the glued boundary is negative of length `L_j- - L_i+`
    /// and the term enters with the negative factor.
    Signed,
}

/// Evaluator for `Z_{g,n+,n-}` with a memo on type and point.
#[derive(Default)]
pub struct ZEngine {
    type_two: TypeTwoFactor,
    memo: Mutex<HashMap<(u32, Vec<Q>, Vec<Q>), Q>>,
}

pub fn engine() -> &'static ZEngine {
    static E: OnceLock<ZEngine> = OnceLock::new();
    E.get_or_init(ZEngine::default)
}

/// `Z_{g,n+,n-}(L+ | L-)`.
pub fn z_evaluate(g: u32, l_plus: &[Q], l_minus: &[Q]) -> Result<Q> {
    engine().evaluate(g, l_plus, l_minus)
}

/// Signed subset sums of `plus` (counted +) and `minus` (counted -).
fn signed_subset_sums(plus: &[Q], minus: &[Q]) -> Vec<Q> {
    let all: Vec<Q> = plus.iter().cloned().chain(minus.iter().map(|x| -x)).collect();
    let mut sums = vec![Q::zero()];
    for v in &all {
        let more: Vec<Q> = sums.iter().map(|s| s + v).collect();
        sums.extend(more);
    }
    sums.sort();
    sums.dedup();
    sums
}

/// Exact integral of a piecewise polynomial of degree `deg` on `[a, b]`, given candidate breakpoints.
pub fn integrate_piecewise(f: &dyn Fn(&Q) -> Result<Q>, a: &Q, b: &Q, breaks: &[Q], deg: u32) -> Result<Q> {
    let mut pts: Vec<Q> = breaks.iter().filter(|x| *x > a && *x < b).cloned().collect();
    pts.push(a.clone());
    pts.push(b.clone());
    pts.sort();
    pts.dedup();
    let mut total = Q::zero();
    for w in pts.windows(2) {
        total += integrate_piece(f, &w[0], &w[1], deg, 0)?;
    }
    Ok(total)
}

fn integrate_piece(f: &dyn Fn(&Q) -> Result<Q>, a: &Q, b: &Q, deg: u32, depth: u32) -> Result<Q> {
    let h = b - a;
    let m = deg as i64 + 2;
    let ts: Vec<Q> = (1..m).map(|k| qr(k, m)).collect();
    let ys: Vec<Q> = ts.iter().map(|t| f(&(a + &h * t))).collect::<Result<_>>()?;
    let c = interpolate(&ts, &ys);
    let ok = [qr(1, 2 * m), qr(2 * m - 1, 2 * m)].iter().try_fold(true, |ok, t| -> Result<bool> { Ok(ok && f(&(a + &h * t))? == horner(&c, t)) })?;
    if !ok {
        if depth >= 24 {
            return Err(Error::Internal(format!("integrand is not polynomial on [{}, {}]", fmt_q(a), fmt_q(b))));
        }
        let mid = (a + b) * qr(1, 2);
        return Ok(integrate_piece(f, a, &mid, deg, depth + 1)? + integrate_piece(f, &mid, b, deg, depth + 1)?);
    }
    let integral: Q = c.iter().enumerate().map(|(k, ck)| ck / q(k as i64 + 1)).sum();
    Ok(integral * h)
}

impl ZEngine {
    pub fn new(type_two: TypeTwoFactor) -> Self {
        ZEngine { type_two, memo: Mutex::default() }
    }

    pub fn evaluate(&self, g: u32, l_plus: &[Q], l_minus: &[Q]) -> Result<Q> {
        check_stable(g, l_plus.len(), l_minus.len())?;
        if l_plus.iter().chain(l_minus).any(|x| !x.is_positive()) {
            return Err(Error::NonIntegralInput("boundary lengths must be positive".into()));
        }
        let r: Q = l_plus.iter().sum::<Q>() - l_minus.iter().sum::<Q>();
        if !r.is_zero() {
            return Err(Error::ResidueViolation(fmt_q(&r)));
        }
        self.z(g, l_plus, l_minus)
    }

    fn z(&self, g: u32, lp: &[Q], lm: &[Q]) -> Result<Q> {
        let (np, nm) = (lp.len(), lm.len());
        if check_stable(g, np, nm).is_err() || lp.iter().chain(lm).any(|x| !x.is_positive()) {
            return Ok(Q::zero());
        }
        if g == 0 && ((np, nm) == (2, 1) || (np, nm) == (1, 2)) {
            return Ok(q(1));
        }
        let mut sp = lp.to_vec();
        let mut sm = lm.to_vec();
        sp.sort();
        sm.sort();
        let key = (g, sp, sm);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let (_, sp, sm) = &key;
        let v = self.z_compute(g, sp, sm)?;
        self.memo.lock().unwrap().insert(key.clone(), v.clone());
        Ok(v)
    }

    fn z_compute(&self, g: u32, lp: &[Q], lm: &[Q]) -> Result<Q> {
        let (np, nm) = (lp.len(), lm.len());
        let without = |v: &[Q], i: usize| -> Vec<Q> { v.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| x.clone()).collect() };
        let mut total = Q::zero();

        // pant (+i, -j, -c)
        if nm >= 2 {
            for i in 0..np {
                for j in 0..nm {
                    let d = &lp[i] - &lm[j];
                    if d.is_positive() {
                        let mut p = vec![d.clone()];
                        p.extend(without(lp, i));
                        total += &d * self.z(g, &p, &without(lm, j))?;
                    } else if d.is_negative() && self.type_two == TypeTwoFactor::Signed {
                        let mut m = vec![-&d];
                        m.extend(without(lm, j));
                        total += &d * self.z(g, &without(lp, i), &m)?;
                    }
                }
            }
        }

        // pant (+i, +j, -c)
        for i in 0..np {
            for j in i + 1..np {
                let s = &lp[i] + &lp[j];
                let mut p = vec![s.clone()];
                p.extend((0..np).filter(|&k| k != i && k != j).map(|k| lp[k].clone()));
                total += &s * self.z(g, &p, lm)?;
            }
        }

        // pant (+i, -c1, -c2), non-separating
        if g >= 1 {
            let mut half = Q::zero();
            for i in 0..np {
                let l = lp[i].clone();
                let rest = without(lp, i);
                let sums = signed_subset_sums(&rest, lm);
                let breaks: Vec<Q> = sums.iter().flat_map(|s| [s.clone(), -s, &l - s, &l + s]).collect();
                let deg = z_degree(g - 1, np + 1, nm) + 2;
                let f = |x: &Q| -> Result<Q> {
                    let mut p = vec![x.clone(), &l - x];
                    p.extend(rest.iter().cloned());
                    Ok(self.z(g - 1, &p, lm)? * x * (&l - x))
                };
                half += integrate_piecewise(&f, &Q::zero(), &l, &breaks, deg)?;
            }
            total += half * qr(1, 2);
        }

        // pant (+i, -c1, -c2), separating
        let mut half = Q::zero();
        for i in 0..np {
            let rest: Vec<Q> = without(lp, i);
            let (rp, rm) = (rest.len(), nm);
            for mp in 0u32..(1 << rp) {
                for mm in 1u32..(1 << rm) - 1 {
                    let pick = |v: &[Q], mask: u32, side: bool| -> Vec<Q> {
                        v.iter().enumerate().filter(|&(k, _)| ((mask >> k) & 1 == 1) == side).map(|(_, x)| x.clone()).collect()
                    };
                    let (p1, p2) = (pick(&rest, mp, true), pick(&rest, mp, false));
                    let (m1, m2) = (pick(lm, mm, true), pick(lm, mm, false));
                    let x1 = m1.iter().sum::<Q>() - p1.iter().sum::<Q>();
                    let x2 = m2.iter().sum::<Q>() - p2.iter().sum::<Q>();
                    if !x1.is_positive() || !x2.is_positive() {
                        continue;
                    }
                    for g1 in 0..=g {
                        let g2 = g - g1;
                        let mut a = vec![x1.clone()];
                        a.extend(p1.iter().cloned());
                        let mut b = vec![x2.clone()];
                        b.extend(p2.iter().cloned());
                        let za = self.z(g1, &a, &m1)?;
                        if za.is_zero() {
                            continue;
                        }
                        half += &x1 * &x2 * za * self.z(g2, &b, &m2)?;
                    }
                }
            }
        }
        total += half * qr(1, 2);

        let chi = 2 * g as i64 - 2 + (np + nm) as i64;
        Ok(total / q(chi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(f_polynomial(0, 2).unwrap(), Poly::one(2));
        assert_eq!(f_polynomial(0, 3).unwrap(), Poly::linear(&[q(1), q(1), q(1)]));
        assert_eq!(f_polynomial(0, 4).unwrap(), Poly::linear(&vec![q(1); 4]).pow(2));
        assert_eq!(f_polynomial(1, 1).unwrap(), Poly::monomial(vec![3], qr(1, 24)));
        assert!(matches!(f_polynomial(0, 1), Err(Error::UnstableType { .. })));
    }

    #[test]
    fn coefficients() {
        assert_eq!(coefficient(&[0, 0]), q(1));
        assert_eq!(coefficient(&[3]), qr(1, 24));
        assert_eq!(coefficient(&[1, 0, 0]), q(1));
        assert_eq!(q(2) * qr(1, 24), qr(1, 2) * qr(1, 6) * coefficient(&[0, 0]));
        for (g, n) in [(0, 5), (1, 2), (1, 3), (2, 1)] {
            let f = f_polynomial(g, n).unwrap();
            for (a, c) in coefficient_table(g, n).unwrap() {
                assert_eq!(f.coeff(&a), c, "g={g} n={n} alpha={a:?}");
            }
        }
    }

    #[test]
    fn z_values() {
        assert_eq!(z_evaluate(0, &[q(2), q(3)], &[q(5)]).unwrap(), q(1));
        assert_eq!(z_evaluate(1, &[q(6)], &[q(6)]).unwrap(), q(9));
        assert_eq!(z_evaluate(0, &[q(3), q(1)], &[q(2), q(2)]).unwrap(), q(3));
        assert_eq!(z_evaluate(0, &[q(3), q(3)], &[q(2), q(4)]).unwrap(), q(4));
        assert!(matches!(z_evaluate(0, &[q(1), q(1)], &[q(3), q(3)]), Err(Error::ResidueViolation(_))));
        assert!(matches!(z_evaluate(0, &[q(1)], &[q(1)]), Err(Error::UnstableType { .. })));
    }

    #[test]
    fn z_matches_f() {
        let pts = [[q(1), qr(3, 2), q(4)], [qr(7, 3), qr(1, 5), q(2)]];
        for p in &pts {
            let l: Q = p.iter().sum();
            assert_eq!(z_evaluate(0, p, std::slice::from_ref(&l)).unwrap(), f_polynomial(0, 3).unwrap().eval(p));
            assert_eq!(z_evaluate(1, p, &[l]).unwrap(), f_polynomial(1, 3).unwrap().eval(p));
        }
    }
}
