//! Sparse multivariate polynomials over an effective coefficient ring.
//!
//! `Poly` stores a map from exponent tuples to nonzero coefficients, keyed by
//! the lexicographic order with x1 greatest, so the last map entry is the
//! leading term. The representation is canonical: equal polynomials have
//! identical term maps.

use super::coeff::{Coeff, CoeffRing};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial ring descriptor: coefficient ring plus variable count.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Ring {
    pub coeff: CoeffRing,
    pub nvars: usize,
}

impl Ring {
    pub fn new(coeff: CoeffRing, nvars: usize) -> Self {
        Ring { coeff, nvars }
    }

    /// The same coefficient ring with `extra` additional trailing variables.
    pub fn extended(&self, extra: usize) -> Ring {
        Ring { coeff: self.coeff, nvars: self.nvars + extra }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{} vars]", self.coeff, self.nvars)
    }
}

/// Sparse multivariate polynomial. No zero coefficients are ever stored and
/// every exponent tuple has length exactly `ring.nvars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    // ---- Constructors ----

    pub fn zero(ring: Ring) -> Self {
        Poly { ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: Ring) -> Self {
        Poly::constant(ring, ring.coeff.one())
    }

    pub fn constant(ring: Ring, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(ring.nvars), c);
        }
        Poly { ring, terms }
    }

    pub fn from_i64(ring: Ring, v: i64) -> Self {
        Poly::constant(ring, ring.coeff.from_i64(v))
    }

    pub fn variable(ring: Ring, i: usize) -> Self {
        assert!(i < ring.nvars, "variable {i} out of range for {ring}");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.nvars, i), ring.coeff.one());
        Poly { ring, terms }
    }

    pub fn monomial(ring: Ring, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.nvars(), ring.nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring, terms }
    }

    pub fn from_terms(ring: Ring, it: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Poly::zero(ring);
        for (m, c) in it {
            p.add_term(&m, &c);
        }
        p
    }

    // ---- Basic queries ----

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_unit() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    /// The constant coefficient (zero if absent).
    pub fn constant_coeff(&self) -> Coeff {
        self.terms
            .get(&Monomial::unit(self.ring.nvars))
            .cloned()
            .unwrap_or_else(|| self.ring.coeff.zero())
    }

    /// Is this a unit of the polynomial ring (an invertible constant)?
    pub fn is_unit(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.ring.coeff.is_unit(&self.constant_coeff())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.coeff.zero())
    }

    /// Leading (lex-greatest) monomial, if nonzero.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.values().next_back()
    }

    /// True iff the polynomial is nonzero and its lex-leading coefficient is
    /// the ring unit 1.
    pub fn is_lex_monic(&self) -> bool {
        self.leading_coeff().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Degree in one variable (0 for the zero polynomial).
    pub fn deg_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    // ---- Arithmetic ----

    fn assert_same_ring(&self, other: &Poly) {
        assert_eq!(self.ring, other.ring, "polynomial ring mismatch");
    }

    fn add_term(&mut self, m: &Monomial, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        let ring = self.ring;
        match self.terms.get_mut(m) {
            Some(existing) => {
                let sum = ring.coeff.add(existing, c);
                if sum.is_zero() {
                    self.terms.remove(m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.coeff.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_ring(other);
        let mut out = Poly::zero(self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(&m1.mul(m2), &self.ring.coeff.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut out = Poly::zero(self.ring);
        for (m, a) in &self.terms {
            out.add_term(m, &self.ring.coeff.mul(a, c));
        }
        out
    }

    /// Multiply by a single term c * m.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut out = Poly::zero(self.ring);
        for (m1, c1) in &self.terms {
            out.add_term(&m1.mul(m), &self.ring.coeff.mul(c1, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scale so the lex-leading coefficient becomes 1. Field coefficients
    /// only; `None` for the zero polynomial or a non-unit leading
    /// coefficient over the integers.
    pub fn monic_scaled(&self) -> Option<(Poly, Coeff)> {
        let lc = self.leading_coeff()?;
        let inv = self.ring.coeff.inv(lc)?;
        Some((self.mul_coeff(&inv), inv))
    }

    /// Exact quotient self/divisor, if divisor divides self in the ring.
    /// Multivariate lex division: exact divisibility guarantees the leading
    /// coefficient divisions succeed at every step over a domain.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        self.assert_same_ring(divisor);
        if divisor.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.ring);
        let dm = divisor.leading_monomial().unwrap().clone();
        let dc = divisor.leading_coeff().unwrap().clone();
        while !rem.is_zero() {
            let lm = rem.leading_monomial().unwrap().clone();
            let lc = rem.leading_coeff().unwrap().clone();
            let qm = lm.try_div(&dm)?;
            let qc = self.ring.coeff.exact_div(&lc, &dc)?;
            let t = Poly::monomial(self.ring, qm, qc);
            quot = quot.add(&t);
            rem = rem.sub(&divisor.mul(&t));
        }
        Some(quot)
    }

    // ---- Variable manipulation ----

    /// Lift to a ring with additional trailing variables.
    pub fn extended(&self, extra: usize) -> Poly {
        let ring = self.ring.extended(extra);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.extended(extra), c.clone()))
            .collect();
        Poly { ring, terms }
    }

    /// Drop trailing variables; every term must be free of them.
    pub fn truncated(&self, new_nvars: usize) -> Result<Poly> {
        assert!(new_nvars <= self.ring.nvars);
        let ring = Ring::new(self.ring.coeff, new_nvars);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[new_nvars..].iter().any(|&e| e > 0) {
                return Err(Error::Internal(format!(
                    "cannot truncate: term uses a variable past {new_nvars}"
                )));
            }
            terms.insert(Monomial::from_exponents(&m.0[..new_nvars]), c.clone());
        }
        Ok(Poly { ring, terms })
    }

    /// Substitute polynomials for selected variables. Unlisted variables map
    /// to themselves. All images must share one target ring which has at
    /// least as many variables as needed to express the unmapped ones.
    pub fn substitute(&self, images: &[(usize, Poly)]) -> Poly {
        let target = images
            .first()
            .map(|(_, p)| p.ring)
            .unwrap_or(self.ring);
        for (_, p) in images {
            assert_eq!(p.ring, target, "substitution images disagree on ring");
        }
        assert!(target.nvars >= self.ring.nvars || {
            // allowed when every removed variable is being substituted away
            (target.nvars..self.ring.nvars).all(|v| images.iter().any(|(i, _)| *i == v))
        });
        let mut power_cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for v in 0..self.ring.nvars {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let base = power_cache
                    .entry((v, e))
                    .or_insert_with(|| match images.iter().find(|(i, _)| *i == v) {
                        Some((_, img)) => img.pow(e),
                        None => Poly::variable(target, v).pow(e),
                    })
                    .clone();
                term = term.mul(&base);
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate one variable at a constant of the same ring.
    pub fn eval_var(&self, var: usize, value: &Poly) -> Poly {
        self.substitute(&[(var, value.clone())])
    }

    /// View as a univariate polynomial in `var`: map from exponent to the
    /// coefficient polynomial (with `var` cleared), ascending.
    pub fn univariate_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let mut stripped = m.0.to_vec();
            stripped[var] = 0;
            out.entry(e)
                .or_insert_with(|| Poly::zero(self.ring))
                .add_term(&Monomial(stripped.into_boxed_slice()), c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Leading coefficient as a univariate polynomial in `var` (zero poly
    /// for zero input).
    pub fn leading_coeff_in(&self, var: usize) -> Poly {
        let uni = self.univariate_in(var);
        match uni.iter().next_back() {
            Some((_, c)) => c.clone(),
            None => Poly::zero(self.ring),
        }
    }

    /// Monic as a univariate polynomial in `var`: leading coefficient there
    /// is the constant 1.
    pub fn is_monic_in(&self, var: usize) -> bool {
        self.leading_coeff_in(var).is_one()
    }

    /// Division with remainder by a divisor monic in `var`: returns (q, rem)
    /// with self = q * divisor + rem and deg_var(rem) < deg_var(divisor).
    pub fn monic_div_rem_in(&self, divisor: &Poly, var: usize) -> (Poly, Poly) {
        assert!(divisor.is_monic_in(var), "divisor must be monic in the chosen variable");
        let ring = self.ring;
        let d = divisor.deg_in(var);
        let mut rem = self.clone();
        let mut quot = Poly::zero(ring);
        let yv = Poly::variable(ring, var);
        while rem.deg_in(var) >= d && !rem.is_zero() {
            let e = rem.deg_in(var);
            let lead = rem.univariate_in(var).remove(&e).unwrap_or_else(|| Poly::zero(ring));
            if lead.is_zero() {
                break;
            }
            let q = lead.mul(&yv.pow(e - d));
            quot = quot.add(&q);
            rem = rem.sub(&q.mul(divisor));
        }
        (quot, rem)
    }

    /// Map F_p coefficients or reduce integer coefficients into the given
    /// coefficient ring (used for checks modulo a prime).
    pub fn map_coeff_ring(&self, target: CoeffRing) -> Result<Poly> {
        let ring = Ring::new(target, self.ring.nvars);
        let mut out = Poly::zero(ring);
        for (m, c) in &self.terms {
            let mapped = match c {
                Coeff::Int(v) => target.from_bigint(v),
                Coeff::Fp(v) => target.from_i64(*v as i64),
                Coeff::Rat(_) => {
                    return Err(Error::UnsupportedRing(
                        "cannot reduce rational coefficients modulo a prime".into(),
                    ))
                }
            };
            out.add_term(m, &mapped);
        }
        Ok(out)
    }

    // ---- Text format ----

    /// Parse the certificate text format: `+`/`-` separated terms, each a
    /// `*`-separated list of an optional coefficient and `xK^e` factors.
    pub fn parse(ring: Ring, text: &str) -> Result<Poly> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        if cleaned == "0" {
            return Ok(Poly::zero(ring));
        }
        let mut out = Poly::zero(ring);
        let mut pieces: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        let mut chars = cleaned.chars().peekable();
        match chars.peek() {
            Some('+') => {
                chars.next();
            }
            Some('-') => {
                sign = -1;
                chars.next();
            }
            _ => {}
        }
        let mut prev: Option<char> = None;
        for c in chars {
            // a sign directly after ':' belongs to a modular residue token
            if (c == '+' || c == '-') && prev != Some(':') {
                pieces.push((sign, std::mem::take(&mut cur)));
                sign = if c == '-' { -1 } else { 1 };
                prev = None;
                continue;
            }
            cur.push(c);
            prev = Some(c);
        }
        pieces.push((sign, cur));
        for (s, term) in pieces {
            let (m, c) = Self::parse_term(ring, &term, s)?;
            out.add_term(&m, &c);
        }
        Ok(out)
    }

    fn parse_term(ring: Ring, term: &str, sign: i64) -> Result<(Monomial, Coeff)> {
        if term.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let mut coeff = ring.coeff.one();
        let mut expo = vec![0u32; ring.nvars];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in term {term}")));
            }
            if let Some(varpart) = factor.strip_prefix('x') {
                let (idx_str, exp_str) = match varpart.split_once('^') {
                    Some((i, e)) => (i, Some(e)),
                    None => (varpart, None),
                };
                let idx: usize = idx_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable {factor}")))?;
                if idx == 0 || idx > ring.nvars {
                    return Err(Error::Parse(format!(
                        "variable x{idx} out of range 1..{}",
                        ring.nvars
                    )));
                }
                let e: u32 = match exp_str {
                    Some(s) => s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor}")))?,
                    None => 1,
                };
                expo[idx - 1] = expo[idx - 1]
                    .checked_add(e)
                    .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
            } else {
                coeff = ring.coeff.mul(&coeff, &ring.coeff.parse(factor)?);
            }
        }
        if sign < 0 {
            coeff = ring.coeff.neg(&coeff);
        }
        Ok((Monomial(expo.into_boxed_slice()), coeff))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let c_str = self.ring.coeff.format(c);
            let (neg, mag) = match c_str.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, c_str),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = (0..self.ring.nvars)
                .filter(|&v| m.exponent(v) > 0)
                .map(|v| {
                    let e = m.exponent(v);
                    if e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{}", v + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5x2() -> Ring {
        Ring::new(CoeffRing::prime_field(5).unwrap(), 2)
    }

    #[test]
    fn canonical_representation() {
        let r = f5x2();
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        let p = x1.add(&x2).sub(&x1);
        assert_eq!(p, x2);
        let q = x1.mul_coeff(&r.coeff.from_i64(5));
        assert!(q.is_zero());
    }

    #[test]
    fn is_lex_monic_examples() {
        let r = f5x2();
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        // x1 + x2^7: leading monomial x1, coefficient 1
        assert!(x1.add(&x2.pow(7)).is_lex_monic());
        let z1 = Ring::new(CoeffRing::integers(), 1);
        let two_x = Poly::variable(z1, 0).mul_coeff(&z1.coeff.from_i64(2));
        assert!(!two_x.is_lex_monic());
        assert!(!Poly::zero(z1).is_lex_monic());
    }

    #[test]
    fn exact_division() {
        let r = f5x2();
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        let a = x1.add(&x2);
        let b = x1.sub(&x2);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.add(&Poly::one(r)).exact_div(&a), None);
        let z1 = Ring::new(CoeffRing::integers(), 1);
        let two = Poly::from_i64(z1, 2);
        let x = Poly::variable(z1, 0);
        assert_eq!(x.mul_coeff(&z1.coeff.from_i64(6)).exact_div(&two), Some(x.mul_coeff(&z1.coeff.from_i64(3))));
        assert_eq!(x.exact_div(&two), None);
    }

    #[test]
    fn univariate_view_and_monic_in() {
        let r = f5x2();
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        // x1*x2^2 + x2^2 + 3: in x2 the leading coefficient is x1 + 1
        let p = x1.mul(&x2.pow(2)).add(&x2.pow(2)).add(&Poly::from_i64(r, 3));
        assert_eq!(p.deg_in(1), 2);
        assert_eq!(p.leading_coeff_in(1), x1.add(&Poly::one(r)));
        assert!(!p.is_monic_in(1));
        assert!(x2.pow(3).add(&x1).is_monic_in(1));
    }

    #[test]
    fn substitution_with_cache() {
        let r = f5x2();
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        let p = x1.pow(2).add(&x2);
        // x1 -> x2 + 1
        let img = x2.add(&Poly::one(r));
        let q = p.substitute(&[(0, img.clone())]);
        assert_eq!(q, img.pow(2).add(&x2));
    }

    #[test]
    fn text_round_trip() {
        let r = f5x2();
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        let p = x1.pow(2).mul(&x2).mul_coeff(&r.coeff.from_i64(3)).add(&x2.pow(7)).sub(&Poly::one(r));
        let text = p.to_string();
        let back = Poly::parse(r, &text).unwrap();
        assert_eq!(back, p);
        // whitespace is insignificant and p:residue coefficients parse
        let q = Poly::parse(r, " 5:8 * x1 ^ 2 + 2").unwrap();
        assert_eq!(q, x1.pow(2).mul_coeff(&r.coeff.from_i64(3)).add(&Poly::from_i64(r, 2)));
        let rq = Ring::new(CoeffRing::rationals(), 1);
        let h = Poly::parse(rq, "1/2*x1 - 3").unwrap();
        assert_eq!(Poly::parse(rq, &h.to_string()).unwrap(), h);
    }
}
