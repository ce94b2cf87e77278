//! Identity checks on the volume polynomials and functions, and the cut-and-join residual.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{fmt_q, horner, interpolate, q, qfact, qr, Q};
use crate::volumes::{coefficient, coefficient_table, f_degree, f_polynomial, z_degree, z_evaluate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub r#type: (u32, usize, usize),
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Finding {
    fn new(check: &str, t: (u32, usize, usize), witness: Option<String>) -> Self {
        Finding { check: check.into(), r#type: t, ok: witness.is_none(), witness }
    }
}

/// Newline-delimited JSON.
pub fn to_ndjson(findings: &[Finding]) -> String {
    findings.iter().map(|f| serde_json::to_string(f).unwrap() + "\n").collect()
}

/// Stable directed types with `1 <= 2g-2+n+ + n- <= depth`.
pub fn types_up_to(depth: u32) -> Vec<(u32, usize, usize)> {
    let mut out = Vec::new();
    for g in 0..=depth / 2 + 1 {
        for np in 1..=depth as usize + 2 {
            for nm in 1..=depth as usize + 2 {
                let chi = 2 * g as i64 - 2 + (np + nm) as i64;
                if chi >= 1 && chi <= depth as i64 {
                    out.push((g, np, nm));
                }
            }
        }
    }
    out
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    qr(rng.gen_range(1..=40), rng.gen_range(1..=7))
}

/// A random rational point on the residue hyperplane.
pub fn random_point(rng: &mut ChaCha8Rng, np: usize, nm: usize) -> (Vec<Q>, Vec<Q>) {
    let lp: Vec<Q> = (0..np).map(|_| random_q(rng)).collect();
    let w: Vec<Q> = (0..nm).map(|_| random_q(rng)).collect();
    let (sp, sw): (Q, Q) = (lp.iter().sum(), w.iter().sum());
    let lm = w.iter().map(|x| x * &sp / &sw).collect();
    (lp, lm)
}

fn show(lp: &[Q], lm: &[Q]) -> String {
    let f = |v: &[Q]| v.iter().map(fmt_q).collect::<Vec<_>>().join(",");
    format!("({} | {})", f(lp), f(lm))
}

/// Smallest nonzero absolute signed subset sum of `(L+, -L-)`.
fn wall_gap(lp: &[Q], lm: &[Q]) -> Q {
    let all: Vec<Q> = lp.iter().cloned().chain(lm.iter().map(|x| -x)).collect();
    let mut best: Option<Q> = None;
    for mask in 1u32..(1 << all.len()) {
        let s: Q = (0..all.len()).filter(|k| (mask >> k) & 1 == 1).map(|k| &all[k]).sum();
        if !s.is_zero() && best.as_ref().is_none_or(|b| s.abs() < *b) {
            best = Some(s.abs());
        }
    }
    best.unwrap_or_else(Q::one)
}

/// Polynomial through `f` on `(0, eps]` (sign of `eps` picks the side), verified at two extra samples.
fn one_sided(f: &dyn Fn(&Q) -> Result<Q>, eps: &Q, deg: u32) -> Result<Vec<Q>> {
    let m = deg as i64 + 1;
    let ts: Vec<Q> = (1..=m).map(|k| eps * qr(k, m)).collect();
    let ys: Vec<Q> = ts.iter().map(f).collect::<Result<_>>()?;
    let c = interpolate(&ts, &ys);
    for t in [eps * qr(1, 2 * m + 1), eps * qr(2 * m - 1, 2 * m)] {
        if f(&t)? != horner(&c, &t) {
            return Err(Error::Internal("sampled path is not polynomial near the wall".into()));
        }
    }
    Ok(c)
}

fn check_string_symbolic(g: u32, n: usize) -> Result<Option<String>> {
    let big = f_polynomial(g, n + 1)?.drop_var_at_zero(0);
    let rhs = &Poly::linear(&vec![q(1); n]) * &f_polynomial(g, n)?;
    Ok((big != rhs).then(|| format!("F(0,L) = {big}, (ΣL)F(L) = {rhs}")))
}

fn check_dilaton(g: u32, n: usize) -> Result<Option<String>> {
    let lhs = f_polynomial(g, n + 1)?.partial(0).drop_var_at_zero(0);
    let rhs = f_polynomial(g, n)?.scale(&q(2 * g as i64 + n as i64 - 1));
    Ok((lhs != rhs).then(|| format!("∂F/∂L1(0,L) = {lhs}, expected {rhs}")))
}

fn check_string_pointwise(g: u32, lp: &[Q], lm: &[Q]) -> Result<Option<String>> {
    let eps = wall_gap(lp, lm) / q(4);
    let deg = z_degree(g, lp.len() + 1, lm.len());
    let f = |t: &Q| -> Result<Q> {
        let mut p = vec![t.clone()];
        p.extend(lp.iter().cloned());
        let mut m = lm.to_vec();
        m[0] += t;
        z_evaluate(g, &p, &m)
    };
    let limit = one_sided(&f, &eps, deg)?[0].clone();
    let rhs = lm.iter().sum::<Q>() * z_evaluate(g, lp, lm)?;
    Ok((limit != rhs).then(|| format!("at {}: Z(0,..) = {}, (ΣL-)Z = {}", show(lp, lm), fmt_q(&limit), fmt_q(&rhs))))
}

fn sub_poly(n: usize, idx: &[usize], p: &Poly) -> Poly {
    let images: Vec<Poly> = idx.iter().map(|&k| Poly::var(n, k)).collect();
    p.compose(&images)
}

fn sum_of(n: usize, idx: &[usize]) -> Poly {
    let mut c = vec![Q::zero(); n];
    for &k in idx {
        c[k] = q(1);
    }
    Poly::linear(&c)
}

/// `(n-1)F_{0,n}` from pairs, and from removing one leaf or splitting in two.
fn check_sphere_dual(n: usize) -> Result<Option<String>> {
    let lhs = f_polynomial(0, n)?.scale(&q(n as i64 - 1));
    let sub = f_polynomial(0, n - 1)?;
    let mut pairs = Poly::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let s = sum_of(n, &[i, j]);
            let mut images = vec![s.clone()];
            images.extend((0..n).filter(|&k| k != i && k != j).map(|k| Poly::var(n, k)));
            pairs = &pairs + &(&s * &sub.compose(&images));
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let mut splits = Poly::zero(n);
    for j in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let w = &sum_of(n, &all) - &Poly::var(n, j);
        splits = &splits + &(&w * &sub_poly(n, &rest, &sub));
    }
    let mut half = Poly::zero(n);
    for mask in 1u32..(1 << n) - 1 {
        let a: Vec<usize> = (0..n).filter(|k| (mask >> k) & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|k| (mask >> k) & 1 == 0).collect();
        if a.len() < 2 || b.len() < 2 {
            continue;
        }
        let fa = sub_poly(n, &a, &f_polynomial(0, a.len())?);
        let fb = sub_poly(n, &b, &f_polynomial(0, b.len())?);
        half = &half + &(&(&sum_of(n, &a) * &sum_of(n, &b)) * &(&fa * &fb));
    }
    splits = &splits + &half.scale(&qr(1, 2));
    let mut bad = Vec::new();
    if pairs != lhs {
        bad.push(format!("pair form gives {pairs}"));
    }
    if splits != lhs {
        bad.push(format!("split form gives {splits}"));
    }
    Ok((!bad.is_empty()).then(|| format!("(n-1)F = {lhs}; {}", bad.join("; "))))
}

fn check_coefficients(g: u32, n: usize) -> Result<Option<String>> {
    let f = f_polynomial(g, n)?;
    let mut rebuilt = Poly::zero(n);
    for (alpha, c) in coefficient_table(g, n)? {
        let mut perms: Vec<Vec<u32>> = itertools::Itertools::permutations(alpha.iter().copied(), n).collect();
        perms.sort();
        perms.dedup();
        for p in perms {
            rebuilt.add_term(p, c.clone());
        }
    }
    Ok((rebuilt != f).then(|| format!("coefficient table rebuilds {rebuilt}, polynomial is {f}")))
}

fn check_homogeneity_f(g: u32, n: usize) -> Result<Option<String>> {
    let d = f_polynomial(g, n)?.homogeneous_degree();
    Ok((d != Some(f_degree(g, n)) && !f_polynomial(g, n)?.is_zero()).then(|| format!("degree {d:?}, expected {}", f_degree(g, n))))
}

/// Left and right limits of `Z_{0,2,2}((a+s, b) | (a, b+s))` at `s = 0`.
pub fn continuity_witness(a: &Q, b: &Q) -> Result<Option<String>> {
    let f = |s: &Q| z_evaluate(0, &[a + s, b.clone()], &[a.clone(), b + s]);
    let eps = wall_gap(&[a.clone(), b.clone()], &[a.clone(), b.clone()]) / q(4);
    let deg = z_degree(0, 2, 2);
    let right = one_sided(&f, &eps, deg)?;
    let left = one_sided(&f, &-&eps, deg)?;
    let at = f(&Q::zero())?;
    Ok((right[0] != left[0] || right[0] != at).then(|| {
        format!("a={}, b={}: left {}, right {}, value {}", fmt_q(a), fmt_q(b), fmt_q(&left[0]), fmt_q(&right[0]), fmt_q(&at))
    }))
}

/// All identity checks for types up to `depth`; `samples` random points per type.
pub fn identity_checks(depth: u32, samples: usize, seed: u64) -> Result<Vec<Finding>> {
    let types = types_up_to(depth);
    let mut findings: Vec<Finding> = types
        .par_iter()
        .map(|&t| -> Result<Vec<Finding>> {
            let (g, np, nm) = t;
            let mut out = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7 * g as u64 + 131 * np as u64 + 977 * nm as u64));
            let deg = z_degree(g, np, nm);
            let mut w: [Option<String>; 6] = Default::default();
            for _ in 0..samples {
                let (lp, lm) = random_point(&mut rng, np, nm);
                let z = z_evaluate(g, &lp, &lm)?;
                if w[0].is_none() && z.is_negative() {
                    w[0] = Some(format!("Z{} = {}", show(&lp, &lm), fmt_q(&z)));
                }
                let s = qr(5, 3);
                let sp: Vec<Q> = lp.iter().map(|x| x * &s).collect();
                let sm: Vec<Q> = lm.iter().map(|x| x * &s).collect();
                if w[1].is_none() && z_evaluate(g, &sp, &sm)? != &z * num_traits::pow(s.clone(), deg as usize) {
                    w[1] = Some(format!("Z(tL) != t^{deg} Z(L) at {}", show(&lp, &lm)));
                }
                let zi = z_evaluate(g, &lm, &lp)?;
                if w[2].is_none() && zi != z {
                    w[2] = Some(format!("Z{} = {}, reversed {}", show(&lp, &lm), fmt_q(&z), fmt_q(&zi)));
                }
                let rp: Vec<Q> = lp.iter().rev().cloned().collect();
                let rm: Vec<Q> = lm.iter().rev().cloned().collect();
                if w[3].is_none() && z_evaluate(g, &rp, &rm)? != z {
                    w[3] = Some(format!("not symmetric at {}", show(&lp, &lm)));
                }
                if nm == 1 {
                    let f = f_polynomial(g, np)?.eval(&lp);
                    if w[4].is_none() && f != z {
                        w[4] = Some(format!("Z{} = {}, F = {}", show(&lp, &lm), fmt_q(&z), fmt_q(&f)));
                    }
                }
                if w[5].is_none() && np >= 2 && crate::volumes::check_stable(g, np - 1, nm).is_ok() {
                    let (sp, sm) = random_point(&mut rng, np - 1, nm);
                    w[5] = check_string_pointwise(g, &sp, &sm)?;
                }
            }
            for (k, name) in ["nonnegativity", "homogeneity", "time_inversion", "symmetry"].iter().enumerate() {
                out.push(Finding::new(name, t, w[k].take()));
            }
            if nm == 1 {
                out.push(Finding::new("evaluator_agreement", t, w[4].take()));
            }
            if np >= 2 && crate::volumes::check_stable(g, np - 1, nm).is_ok() {
                out.push(Finding::new("string", t, w[5].take()));
            }
            if nm == 1 {
                out.push(Finding::new("coefficient_recursion", t, check_coefficients(g, np)?));
                out.push(Finding::new("homogeneity_polynomial", t, check_homogeneity_f(g, np)?));
                if np >= 2 && crate::volumes::check_stable(g, np - 1, 1).is_ok() {
                    out.push(Finding::new("string_polynomial", t, check_string_symbolic(g, np - 1)?));
                    out.push(Finding::new("dilaton", t, check_dilaton(g, np - 1)?));
                }
                if g == 0 && np >= 3 {
                    out.push(Finding::new("sphere_dual", t, check_sphere_dual(np)?));
                }
            }
            if t == (0, 2, 2) {
                for _ in 0..samples.max(1) {
                    let (a, b) = (random_q(&mut rng), random_q(&mut rng));
                    if let Some(w) = continuity_witness(&a, &b)? {
                        out.push(Finding::new("continuity", t, Some(w)));
                        break;
                    }
                }
                if out.last().is_none_or(|f| f.check != "continuity") {
                    out.push(Finding::new("continuity", t, None));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    findings.sort_by(|a, b| (a.r#type, &a.check).cmp(&(b.r#type, &b.check)));
    Ok(findings)
}

/// Number of `t` variables used by [`psi_series`] at a given cutoff.
pub fn psi_vars(cutoff: u32) -> usize {
    cutoff as usize + 2
}

/// `ψ(t) = Σ_μ ∏(i!)^{μ(i)} t^μ / ∏μ(i)! · c(μ)` truncated to `|μ| <= cutoff`.
pub fn psi_series(cutoff: u32) -> Poly {
    let nv = psi_vars(cutoff);
    let mut psi = Poly::zero(nv);
    for total in 0..=cutoff {
        for n in 1..=total as usize + 2 {
            let shift = total as i64 + 2 - n as i64;
            if shift < 0 || shift % 4 != 0 {
                continue;
            }
            let g = (shift / 4) as u32;
            if crate::volumes::check_stable(g, n, 1).is_err() {
                continue;
            }
            for alpha in crate::volumes::sorted_exponents(total, n) {
                let c = coefficient(&alpha);
                if c.is_zero() {
                    continue;
                }
                let mut mu = vec![0u32; nv];
                for &a in &alpha {
                    mu[a as usize] += 1;
                }
                let num: Q = alpha.iter().map(|&a| qfact(a)).product();
                let den: Q = mu.iter().map(|&m| qfact(m)).product();
                psi.add_term(mu, num / den * c);
            }
        }
    }
    psi
}

/// `|μ| = Σ i μ(i)`.
pub fn weight(mu: &[u32]) -> u32 {
    mu.iter().enumerate().map(|(i, &m)| i as u32 * m).sum()
}

/// Index of the `t` variable multiplying `∂²ψ/∂t_i∂t_j` in the genus-reducing term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CutJoinVariant {
    /// `t_{i+j-3}`.
    Body,
    /// `t_{i+j+3}`.
    Raised,
}

/// `Σ(i+1)t_i ∂ψ/∂t_i - Σ(i+j)t_i t_j ∂ψ/∂t_{i+j-1} - Σ(i+1)(j+1)t_k ∂²ψ/∂t_i∂t_j - t_0²`
/// with `k` per `variant`, restricted to monomials of weight `<= max_weight`.
pub fn cut_and_join_residual(max_weight: u32, variant: CutJoinVariant) -> Vec<(Vec<u32>, Q)> {
    let cutoff = max_weight + 3;
    let psi = psi_series(cutoff);
    let nv = psi_vars(cutoff) + 6;
    let psi = psi.compose(&(0..psi.nvars()).map(|i| Poly::var(nv, i)).collect::<Vec<_>>());
    let t = |i: usize| Poly::var(nv, i);
    let mut res = Poly::zero(nv);
    for i in 0..nv {
        res = &res + &(&t(i) * &psi.partial(i)).scale(&q(i as i64 + 1));
    }
    for i in 0..nv {
        for j in 0..nv {
            if i + j >= 1 && i + j - 1 < nv {
                res = &res - &(&(&t(i) * &t(j)) * &psi.partial(i + j - 1)).scale(&q((i + j) as i64));
            }
            let k = match variant {
                CutJoinVariant::Body if i + j >= 3 => Some(i + j - 3),
                CutJoinVariant::Raised => Some(i + j + 3),
                _ => None,
            };
            if let Some(k) = k.filter(|&k| k < nv) {
                let d2 = psi.partial(i).partial(j);
                if !d2.is_zero() {
                    res = &res - &(&t(k) * &d2).scale(&q(((i + 1) * (j + 1)) as i64));
                }
            }
        }
    }
    res = &res - &t(0).pow(2);
    res.terms()
        .iter()
        .filter(|(e, _)| weight(e) <= max_weight)
        .map(|(e, c)| {
            let mut e = e.clone();
            while e.len() > 1 && e.last() == Some(&0) {
                e.pop();
            }
            (e, c.clone())
        })
        .collect()
}

/// `t0^2·t3` style monomial name.
pub fn t_monomial(mu: &[u32]) -> String {
    let parts: Vec<String> = mu
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(i, &m)| if m == 1 { format!("t{i}") } else { format!("t{i}^{m}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_identities() {
        assert_eq!(check_string_symbolic(0, 3).unwrap(), None);
        assert_eq!(check_dilaton(0, 3).unwrap(), None);
        assert_eq!(check_dilaton(1, 1).unwrap(), None);
        for n in 3..=6 {
            assert_eq!(check_sphere_dual(n).unwrap(), None);
        }
        assert_eq!(check_coefficients(1, 2).unwrap(), None);
    }

    #[test]
    fn time_inversion_example() {
        assert_eq!(z_evaluate(0, &[q(2), q(2)], &[q(3), q(1)]).unwrap(), q(3));
    }

    #[test]
    fn continuity_and_string() {
        assert_eq!(continuity_witness(&qr(7, 3), &qr(11, 5)).unwrap(), None);
        assert_eq!(check_string_pointwise(0, &[qr(7, 2), qr(5, 3)], &[qr(13, 6), q(3)]).unwrap(), None);
    }

    #[test]
    fn psi_lowest_order() {
        let psi = psi_series(0);
        assert_eq!(psi.terms().len(), 1);
        assert_eq!(psi.coeff(&[2, 0]), qr(1, 2));
        let r = cut_and_join_residual(4, CutJoinVariant::Raised);
        assert!(r.is_empty(), "{r:?}");
        assert!(!cut_and_join_residual(0, CutJoinVariant::Body).is_empty());
    }
}
