//! Deterministic candidate streams for the certified coefficient searches.
//!
//! The existence proofs behind the searches are not constructive, so the
//! searches enumerate small ring elements in a fixed order and accept the
//! first candidate whose certificate checks. Exhausting a cap is a reported
//! error, never a wrong answer.

use crate::polyring::{Monomial, Poly, Ring};

/// Caps for the enumeration searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchCfg {
    /// Maximum number of candidates tried per search site.
    pub candidate_cap: usize,
    /// Maximum exponent tried when hunting a minimal power (of x1, or of a
    /// divisibility exponent).
    pub power_cap: u32,
}

impl Default for SearchCfg {
    fn default() -> Self {
        SearchCfg { candidate_cap: 5000, power_cap: 64 }
    }
}

fn constant_pool(ring: Ring, cap: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    if ring.coeff.is_field() && ring.coeff.modulus() != 0 {
        let p = ring.coeff.modulus().min(cap as u64);
        for v in 0..p {
            out.push(Poly::from_i64(ring, v as i64));
        }
    } else {
        out.push(Poly::zero(ring));
        let mut h = 1i64;
        while out.len() + 2 <= cap && h <= 8 {
            out.push(Poly::from_i64(ring, h));
            out.push(Poly::from_i64(ring, -h));
            h += 1;
        }
    }
    out
}

fn monomials_of_degree(nvars_total: usize, vars: &[usize], deg: u32) -> Vec<Monomial> {
    if deg == 0 {
        return vec![Monomial::unit(nvars_total)];
    }
    let mut out = Vec::new();
    let lower = monomials_of_degree(nvars_total, vars, deg - 1);
    for m in lower {
        for &v in vars {
            let mut e = m.0.to_vec();
            e[v] += 1;
            let cand = Monomial::from_exponents(&e);
            if !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// A deterministic stream of polynomials in the given variables: constants
/// first, then all coefficient combinations on monomials of total degree 1,
/// then degree 2, capped at `cap` entries.
pub fn poly_candidates(ring: Ring, vars: &[usize], cap: usize) -> Vec<Poly> {
    let consts = constant_pool(ring, cap);
    let mut out: Vec<Poly> = consts.clone();
    out.truncate(cap);
    for deg in 1..=8u32 {
        if out.len() >= cap {
            break;
        }
        let new_monos = monomials_of_degree(ring.nvars, vars, deg);
        // combinations: one new monomial with a nonzero coefficient from the
        // pool, plus any previously emitted polynomial as the tail
        let base: Vec<Poly> = out.clone();
        for m in &new_monos {
            for c in consts.iter().skip(1) {
                let head = Poly::monomial(ring, m.clone(), c.constant_coeff());
                for tail in &base {
                    out.push(head.add(tail));
                    if out.len() >= cap {
                        return out;
                    }
                }
            }
        }
    }
    out
}

fn compositions(total: usize, parts: usize, limit: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        if total <= limit {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for first in 0..=total.min(limit) {
        prefix.push(first);
        compositions(total - first, parts - 1, limit, prefix, out);
        prefix.pop();
    }
}

/// Graded enumeration of coefficient vectors: tuples over the single-value
/// stream, ordered by total index sum so that all-zero comes first and small
/// perturbations come early. Deterministic and duplicate-free.
pub struct VectorCandidates {
    singles: Vec<Poly>,
    len: usize,
    total: usize,
    buffer: std::collections::VecDeque<Vec<usize>>,
    emitted: usize,
    cap: usize,
}

impl VectorCandidates {
    pub fn new(singles: Vec<Poly>, len: usize, cap: usize) -> Self {
        VectorCandidates {
            singles,
            len,
            total: 0,
            buffer: std::collections::VecDeque::new(),
            emitted: 0,
            cap,
        }
    }
}

impl Iterator for VectorCandidates {
    type Item = Vec<Poly>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.emitted >= self.cap || self.singles.is_empty() || self.len == 0 {
            return None;
        }
        loop {
            if let Some(comp) = self.buffer.pop_front() {
                self.emitted += 1;
                return Some(comp.iter().map(|&i| self.singles[i].clone()).collect());
            }
            let limit = self.singles.len() - 1;
            if self.total > limit * self.len {
                return None;
            }
            let mut tuples = Vec::new();
            compositions(self.total, self.len, limit, &mut Vec::new(), &mut tuples);
            self.buffer.extend(tuples);
            self.total += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::CoeffRing;

    #[test]
    fn constants_come_first() {
        let r = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let c = poly_candidates(r, &[0], 100);
        assert!(c[0].is_zero());
        assert_eq!(c[1], Poly::one(r));
        assert_eq!(c.len(), 100);
        // degree-1 polynomials appear after the constants
        assert!(c.iter().any(|p| p.deg_in(0) == 1));
    }

    #[test]
    fn vector_stream_starts_at_zero_and_is_deterministic() {
        let r = Ring::new(CoeffRing::prime_field(3).unwrap(), 1);
        let singles = poly_candidates(r, &[0], 9);
        let a: Vec<Vec<Poly>> = VectorCandidates::new(singles.clone(), 2, 30).collect();
        let b: Vec<Vec<Poly>> = VectorCandidates::new(singles, 2, 30).collect();
        assert_eq!(a, b);
        assert!(a[0].iter().all(|p| p.is_zero()));
        assert_eq!(a.len(), 30);
        // no duplicates in the prefix
        for i in 0..a.len() {
            for j in 0..i {
                assert_ne!(a[i], a[j], "duplicate candidate at {i} and {j}");
            }
        }
    }
}
