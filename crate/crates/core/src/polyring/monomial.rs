//! Monomials as exponent tuples with the lexicographic order, x1 greatest.

use crate::error::{Error, Result};
use std::cmp::Ordering;

/// An exponent tuple of fixed length (one slot per variable).
///
/// The derived `Ord` on the boxed slice is exactly the paper's lexicographic
/// order with x1 greatest: tuples compare position by position and the first
/// strict difference decides.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(pub Box<[u32]>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0u32; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range {nvars}");
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(e.to_vec().into_boxed_slice())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise quotient, if `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        assert_eq!(self.0.len(), other.0.len());
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out.into_boxed_slice()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Extend the tuple with zero exponents for `extra` new trailing
    /// variables (which are least in the lex order).
    pub fn extended(&self, extra: usize) -> Monomial {
        let mut e = self.0.to_vec();
        e.extend(std::iter::repeat(0).take(extra));
        Monomial(e.into_boxed_slice())
    }
}

/// Compare two exponent tuples in the lexicographic order with x1 greatest.
///
/// Returns `Greater` iff there is a position m with equal exponents before m
/// and a strictly larger exponent at m in the first tuple.
pub fn lex_compare(m1: &[u32], m2: &[u32]) -> Result<Ordering> {
    if m1.len() != m2.len() {
        return Err(Error::LengthMismatch { left: m1.len(), right: m2.len() });
    }
    Ok(m1.cmp(m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_compare_examples() {
        // x1 beats any power of x2
        assert_eq!(lex_compare(&[1, 0], &[0, 5]).unwrap(), Ordering::Greater);
        assert_eq!(lex_compare(&[2, 3], &[2, 3]).unwrap(), Ordering::Equal);
        assert_eq!(lex_compare(&[0, 2], &[0, 1]).unwrap(), Ordering::Greater);
        assert!(lex_compare(&[1, 0], &[1]).is_err());
    }

    #[test]
    fn lex_compare_is_a_total_order() {
        // antisymmetry, transitivity and totality on random pairs
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..5);
            let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let ab = lex_compare(&a, &b).unwrap();
            let ba = lex_compare(&b, &a).unwrap();
            assert_eq!(ab, ba.reverse());
            if ab == Ordering::Equal {
                assert_eq!(a, b);
            }
            let bc = lex_compare(&b, &c).unwrap();
            if ab == Ordering::Less && bc == Ordering::Less {
                assert_eq!(lex_compare(&a, &c).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn division_and_lcm() {
        let a = Monomial::from_exponents(&[2, 1]);
        let b = Monomial::from_exponents(&[1, 1]);
        assert_eq!(a.try_div(&b), Some(Monomial::from_exponents(&[1, 0])));
        assert_eq!(b.try_div(&a), None);
        assert_eq!(a.lcm(&b), a);
    }
}
