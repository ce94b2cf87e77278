//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{parse_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }
    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }
    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Q::one())
    }
    pub fn monomial(exp: Vec<u32>, c: Q) -> Self {
        let mut p = Poly::zero(exp.len());
        p.add_term(exp, c);
        p
    }
    /// `Σ c_i L_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, exp: &[u32]) -> Q {
        self.terms.get(exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Q) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    /// Total degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `L_i -> images[i]` (all images share one variable count).
    pub fn compose(&self, images: &[Poly]) -> Poly {
        let m = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(m), p.clone()]).collect();
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Sets variable `i` to zero and removes it.
    pub fn drop_var_at_zero(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                let mut f = e.clone();
                f.remove(i);
                out.add_term(f, c.clone());
            }
        }
        out
    }

    /// Permutes variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.nvars];
            for i in 0..self.nvars {
                f[perm[i]] = e[i];
            }
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: (1..=self.nvars).map(|i| format!("L{i}")).collect(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| TermJson { exp: e.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Poly> {
        let n = j.vars.len();
        let mut p = Poly::zero(n);
        for t in &j.terms {
            if t.exp.len() != n {
                return Err(Error::Parse("exponent length differs from variable count".into()));
            }
            p.add_term(t.exp.clone(), parse_q(&format!("{}/{}", t.num, t.den))?);
        }
        Ok(p)
    }

    /// Terms by descending degree, then descending exponent vector.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let (da, db) = (a.0.iter().sum::<u32>(), b.0.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("L{}", i + 1) } else { format!("L{}^{p}", i + 1) })
                .collect();
            let a = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let coef = if a.denom().is_one() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            match (mono.is_empty(), a.is_one()) {
                (true, _) => f.write_str(&coef)?,
                (false, true) => f.write_str(&mono.join("·"))?,
                (false, false) => write!(f, "{coef}·{}", mono.join("·"))?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// `{"vars": [...], "terms": [{"exp": [...], "num": "..", "den": ".."}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn arithmetic_and_display() {
        let l = Poly::linear(&[q(1), q(1), q(1)]);
        let sq = l.pow(2);
        assert_eq!(sq.homogeneous_degree(), Some(2));
        assert_eq!(sq.eval(&[q(1), q(2), q(3)]), q(36));
        assert_eq!(l.to_string(), "L1 + L2 + L3");
        assert_eq!(Poly::monomial(vec![3], qr(1, 24)).to_string(), "1/24·L1^3");
        assert_eq!((&l - &l).to_string(), "0");
        let p = Poly::from_json(&sq.to_json()).unwrap();
        assert_eq!(p, sq);
        assert_eq!(sq.partial(0).drop_var_at_zero(0), Poly::linear(&[q(2), q(2)]));
    }

    #[test]
    fn composition() {
        let p = Poly::monomial(vec![2, 1], q(3));
        let x = Poly::linear(&[q(1), q(1)]);
        let y = Poly::var(2, 1);
        let c = p.compose(&[x, y]);
        assert_eq!(c.eval(&[q(2), q(5)]), q(3 * 49 * 5));
    }
}
