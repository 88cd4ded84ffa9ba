//! Index bookkeeping for split orthogonal groups: basis vectors are ordered
//! e_1, ..., e_r, (e_0 in the odd case), e_{-r}, ..., e_{-1}, and this
//! ordering is used for every row and column layout in the crate.

use crate::error::{Error, Result};
use crate::polyring::Ring;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Even split orthogonal group O(2r, R) or odd O(2r+1, R).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// A signed basis index: 1..r, -r..-1, and 0 only in the odd case.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct OrthoIndex(pub i32);

impl OrthoIndex {
    pub fn value(&self) -> i32 {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn neg(&self) -> OrthoIndex {
        OrthoIndex(-self.0)
    }

    pub fn abs(&self) -> i32 {
        self.0.abs()
    }
}

impl fmt::Display for OrthoIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rank and parity of the ambient group; owns the index-to-position layout.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Shape {
    pub r: usize,
    pub parity: Parity,
}

impl Shape {
    pub fn new(r: usize, parity: Parity) -> Self {
        Shape { r, parity }
    }

    pub fn dim(&self) -> usize {
        match self.parity {
            Parity::Even => 2 * self.r,
            Parity::Odd => 2 * self.r + 1,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    /// Odd-parity work requires characteristic != 2; the short-root formulas
    /// degenerate otherwise.
    pub fn check_ring(&self, ring: Ring) -> Result<()> {
        if self.is_odd() && ring.coeff.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        Ok(())
    }

    pub fn valid_index(&self, idx: OrthoIndex) -> bool {
        let v = idx.0;
        if v == 0 {
            return self.is_odd();
        }
        (1..=self.r as i32).contains(&v.abs())
    }

    /// Position of an index in the basis ordering 1..r, (0), -r..-1.
    pub fn pos(&self, idx: OrthoIndex) -> usize {
        debug_assert!(self.valid_index(idx), "index {idx} invalid for rank {}", self.r);
        let r = self.r as i32;
        let mid = if self.is_odd() { 1 } else { 0 };
        match idx.0 {
            v if v > 0 => (v - 1) as usize,
            0 => self.r,
            v => (r + mid as i32 + (r + v)) as usize,
        }
    }

    pub fn index_at(&self, pos: usize) -> OrthoIndex {
        let r = self.r;
        let mid = if self.is_odd() { 1 } else { 0 };
        debug_assert!(pos < self.dim());
        if pos < r {
            OrthoIndex(pos as i32 + 1)
        } else if self.is_odd() && pos == r {
            OrthoIndex(0)
        } else {
            let off = pos - r - mid;
            OrthoIndex(-(r as i32) + off as i32)
        }
    }

    /// All indices in the basis ordering.
    pub fn indices(&self) -> Vec<OrthoIndex> {
        (0..self.dim()).map(|p| self.index_at(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        for &parity in &[Parity::Even, Parity::Odd] {
            let shape = Shape::new(3, parity);
            let idxs = shape.indices();
            let want: Vec<i32> = match parity {
                Parity::Even => vec![1, 2, 3, -3, -2, -1],
                Parity::Odd => vec![1, 2, 3, 0, -3, -2, -1],
            };
            assert_eq!(idxs.iter().map(|i| i.0).collect::<Vec<_>>(), want);
            for (p, idx) in idxs.iter().enumerate() {
                assert_eq!(shape.pos(*idx), p);
            }
        }
    }

    #[test]
    fn index_validity() {
        let even = Shape::new(3, Parity::Even);
        assert!(!even.valid_index(OrthoIndex(0)));
        assert!(even.valid_index(OrthoIndex(-3)));
        assert!(!even.valid_index(OrthoIndex(4)));
        let odd = Shape::new(3, Parity::Odd);
        assert!(odd.valid_index(OrthoIndex(0)));
    }
}
