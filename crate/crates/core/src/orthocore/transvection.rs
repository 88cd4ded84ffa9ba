//! Elementary orthogonal transvections and words of them.
//!
//! Long root: T_{i,j}(xi) = T_{-j,-i}(-xi) = e + xi e_{i,j} - xi e_{-j,-i}
//! for i != +-j, j != 0. Short root (odd case only):
//! T_{i,0}(xi) = e + 2 xi e_{i,0} - xi e_{0,-i} - xi^2 e_{i,-i}.
//!
//! Long transvections are stored in the canonical representative of the
//! pair {(i,j), (-j,-i)}: the one with the lexicographically smaller
//! (|i|, |j|, sign data). Zero-parameter factors are dropped from words.

use super::index::{OrthoIndex, Parity, Shape};
use super::matrix::OrthoMatrix;
use super::vector::OrthoVector;
use crate::error::{Error, Result};
use crate::polyring::{Poly, Ring};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransvectionKind {
    Long,
    Short,
}

/// One elementary orthogonal transvection T_{i,j}(xi); j = 0 encodes the
/// short root kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transvection {
    i: OrthoIndex,
    j: OrthoIndex,
    xi: Poly,
}

fn canonical_key(i: OrthoIndex, j: OrthoIndex) -> (i32, i32, bool, bool) {
    (i.abs(), j.abs(), i.value() < 0, j.value() < 0)
}

impl Transvection {
    /// A long root transvection; canonicalizes over T_{i,j} = T_{-j,-i}(-xi).
    pub fn long(i: OrthoIndex, j: OrthoIndex, xi: Poly) -> Result<Self> {
        if i.is_zero() || j.is_zero() || i == j || i == j.neg() {
            return Err(Error::InvalidIndex(format!(
                "long transvection needs i != +-j and nonzero indices, got ({i},{j})"
            )));
        }
        let (mi, mj) = (j.neg(), i.neg());
        if canonical_key(mi, mj) < canonical_key(i, j) {
            Ok(Transvection { i: mi, j: mj, xi: xi.neg() })
        } else {
            Ok(Transvection { i, j, xi })
        }
    }

    /// A short root transvection T_{i,0}(xi), odd parity only.
    pub fn short(i: OrthoIndex, xi: Poly) -> Result<Self> {
        if i.is_zero() {
            return Err(Error::InvalidIndex("short transvection needs i != 0".into()));
        }
        Ok(Transvection { i, j: OrthoIndex(0), xi })
    }

    pub fn kind(&self) -> TransvectionKind {
        if self.j.is_zero() {
            TransvectionKind::Short
        } else {
            TransvectionKind::Long
        }
    }

    pub fn i(&self) -> OrthoIndex {
        self.i
    }

    pub fn j(&self) -> OrthoIndex {
        self.j
    }

    pub fn xi(&self) -> &Poly {
        &self.xi
    }

    pub fn inverse(&self) -> Transvection {
        Transvection { i: self.i, j: self.j, xi: self.xi.neg() }
    }

    pub fn is_trivial(&self) -> bool {
        self.xi.is_zero()
    }

    fn check_shape(&self, shape: Shape) -> Result<()> {
        if !shape.valid_index(self.i) || self.i.abs() > shape.r as i32 {
            return Err(Error::InvalidIndex(format!("index {} outside rank {}", self.i, shape.r)));
        }
        match self.kind() {
            TransvectionKind::Long => {
                if !shape.valid_index(self.j) {
                    return Err(Error::InvalidIndex(format!(
                        "index {} outside rank {}",
                        self.j, shape.r
                    )));
                }
            }
            TransvectionKind::Short => {
                if !shape.is_odd() {
                    return Err(Error::InvalidIndex(
                        "short transvections exist only in odd parity".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The transvection as an explicit orthogonal matrix.
    pub fn matrix(&self, shape: Shape, ring: Ring) -> Result<OrthoMatrix> {
        self.check_shape(shape)?;
        let mut m = OrthoMatrix::identity(shape, ring)?;
        match self.kind() {
            TransvectionKind::Long => {
                m.set(self.i, self.j, m.get(self.i, self.j).add(&self.xi));
                let (mi, mj) = (self.j.neg(), self.i.neg());
                m.set(mi, mj, m.get(mi, mj).sub(&self.xi));
            }
            TransvectionKind::Short => {
                let two_xi = self.xi.mul_coeff(&ring.coeff.from_i64(2));
                m.set(self.i, OrthoIndex(0), two_xi);
                m.set(OrthoIndex(0), self.i.neg(), self.xi.neg());
                m.set(self.i, self.i.neg(), self.xi.mul(&self.xi).neg());
            }
        }
        Ok(m)
    }

    /// Left action on a column: b := T b, in place.
    pub fn apply_to_vector(&self, v: &mut OrthoVector) -> Result<()> {
        self.check_shape(v.shape())?;
        match self.kind() {
            TransvectionKind::Long => {
                let bj = v.get(self.j).clone();
                let bmi = v.get(self.i.neg()).clone();
                let new_i = v.get(self.i).add(&self.xi.mul(&bj));
                let new_mj = v.get(self.j.neg()).sub(&self.xi.mul(&bmi));
                v.set(self.i, new_i);
                v.set(self.j.neg(), new_mj);
            }
            TransvectionKind::Short => {
                let ring = v.ring();
                let b0 = v.get(OrthoIndex(0)).clone();
                let bmi = v.get(self.i.neg()).clone();
                let two = ring.coeff.from_i64(2);
                let new_i = v
                    .get(self.i)
                    .add(&self.xi.mul(&b0).mul_coeff(&two))
                    .sub(&self.xi.mul(&self.xi).mul(&bmi));
                let new_0 = b0.sub(&self.xi.mul(&bmi));
                v.set(self.i, new_i);
                v.set(OrthoIndex(0), new_0);
            }
        }
        Ok(())
    }

    /// Left action on a matrix: M := T M (row operations), in place.
    pub fn apply_to_matrix(&self, m: &mut OrthoMatrix) -> Result<()> {
        self.check_shape(m.shape())?;
        let shape = m.shape();
        let d = shape.dim();
        match self.kind() {
            TransvectionKind::Long => {
                let (ri, rj) = (shape.pos(self.i), shape.pos(self.j));
                let (rmj, rmi) = (shape.pos(self.j.neg()), shape.pos(self.i.neg()));
                for c in 0..d {
                    let a = m.get_pos(rj, c).clone();
                    let b = m.get_pos(rmi, c).clone();
                    let new_i = m.get_pos(ri, c).add(&self.xi.mul(&a));
                    let new_mj = m.get_pos(rmj, c).sub(&self.xi.mul(&b));
                    m.set_pos(ri, c, new_i);
                    m.set_pos(rmj, c, new_mj);
                }
            }
            TransvectionKind::Short => {
                let ring = m.ring();
                let two = ring.coeff.from_i64(2);
                let (ri, r0, rmi) = (
                    shape.pos(self.i),
                    shape.pos(OrthoIndex(0)),
                    shape.pos(self.i.neg()),
                );
                for c in 0..d {
                    let a0 = m.get_pos(r0, c).clone();
                    let ami = m.get_pos(rmi, c).clone();
                    let new_i = m
                        .get_pos(ri, c)
                        .add(&self.xi.mul(&a0).mul_coeff(&two))
                        .sub(&self.xi.mul(&self.xi).mul(&ami));
                    let new_0 = a0.sub(&self.xi.mul(&ami));
                    m.set_pos(ri, c, new_i);
                    m.set_pos(r0, c, new_0);
                }
            }
        }
        Ok(())
    }

    /// Map the parameter through a ring transformation.
    pub fn map_xi<F: Fn(&Poly) -> Poly>(&self, f: F) -> Transvection {
        Transvection { i: self.i, j: self.j, xi: f(&self.xi) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": match self.kind() { TransvectionKind::Long => "long", TransvectionKind::Short => "short" },
            "i": self.i.value(),
            "j": self.j.value(),
            "xi": self.xi.to_string(),
        })
    }

    pub fn from_json(ring: Ring, v: &serde_json::Value) -> Result<Transvection> {
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| Error::Parse("transvection kind missing".into()))?;
        let i = v
            .get("i")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Parse("transvection index i missing".into()))?;
        let j = v
            .get("j")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Parse("transvection index j missing".into()))?;
        let xi_text = v
            .get("xi")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::Parse("transvection parameter missing".into()))?;
        let xi = Poly::parse(ring, xi_text)?;
        match kind {
            "long" => Transvection::long(OrthoIndex(i as i32), OrthoIndex(j as i32), xi),
            "short" => {
                if j != 0 {
                    return Err(Error::Parse("short transvection must have j = 0".into()));
                }
                Transvection::short(OrthoIndex(i as i32), xi)
            }
            other => Err(Error::Parse(format!("unknown transvection kind {other}"))),
        }
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{}]({})", self.i, self.j, self.xi)
    }
}

/// A finite product of elementary transvections. Factors are stored in
/// product order: the leftmost factor is applied last to a column.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Word {
    factors: Vec<Transvection>,
}

impl Word {
    pub fn empty() -> Self {
        Word { factors: Vec::new() }
    }

    /// Build from product order, dropping zero-parameter factors.
    pub fn new(factors: Vec<Transvection>) -> Self {
        Word { factors: factors.into_iter().filter(|t| !t.is_trivial()).collect() }
    }

    pub fn factors(&self) -> &[Transvection] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reversed order with negated parameters; same length.
    pub fn inverse(&self) -> Word {
        Word { factors: self.factors.iter().rev().map(|t| t.inverse()).collect() }
    }

    /// The word that applies `self` first and then `later`.
    pub fn then(&self, later: &Word) -> Word {
        let mut factors = later.factors.clone();
        factors.extend(self.factors.iter().cloned());
        Word { factors }
    }

    /// Apply to a column without materializing the product matrix:
    /// rightmost factor first.
    pub fn apply(&self, v: &OrthoVector) -> Result<OrthoVector> {
        let mut out = v.clone();
        for t in self.factors.iter().rev() {
            t.apply_to_vector(&mut out)?;
        }
        Ok(out)
    }

    /// Apply to a matrix by row operations, rightmost factor first.
    pub fn apply_to_matrix(&self, m: &OrthoMatrix) -> Result<OrthoMatrix> {
        let mut out = m.clone();
        for t in self.factors.iter().rev() {
            t.apply_to_matrix(&mut out)?;
        }
        Ok(out)
    }

    /// The product matrix.
    pub fn to_matrix(&self, shape: Shape, ring: Ring) -> Result<OrthoMatrix> {
        let id = OrthoMatrix::identity(shape, ring)?;
        self.apply_to_matrix(&id)
    }

    /// Map all parameters through a ring transformation (a ring morphism
    /// turns a valid word into a valid word).
    pub fn map_xi<F: Fn(&Poly) -> Poly>(&self, f: F) -> Word {
        Word::new(self.factors.iter().map(|t| t.map_xi(&f)).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.factors.iter().map(|t| t.to_json()).collect())
    }

    pub fn from_json(ring: Ring, v: &serde_json::Value) -> Result<Word> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("word must be a JSON array".into()))?;
        let factors = arr
            .iter()
            .map(|t| Transvection::from_json(ring, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(factors))
    }

    /// Validate all factors against a shape (index ranges, parity).
    pub fn check_shape(&self, shape: Shape) -> Result<()> {
        for t in &self.factors {
            t.check_shape(shape)?;
        }
        Ok(())
    }
}

/// Parity marker re-export used by callers constructing words.
pub fn short_allowed(parity: Parity) -> bool {
    parity == Parity::Odd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::CoeffRing;

    fn setup() -> (Shape, Ring) {
        (Shape::new(3, Parity::Even), Ring::new(CoeffRing::prime_field(5).unwrap(), 1))
    }

    #[test]
    fn canonicalization_matches_the_mirror_identity() {
        let (shape, ring) = setup();
        let x = Poly::variable(ring, 0);
        let a = Transvection::long(OrthoIndex(1), OrthoIndex(2), x.clone()).unwrap();
        let b = Transvection::long(OrthoIndex(-2), OrthoIndex(-1), x.neg()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matrix(shape, ring).unwrap(), b.matrix(shape, ring).unwrap());
        // and the matrices of both presentations agree for every pair
        let c = Transvection::long(OrthoIndex(3), OrthoIndex(-2), x.clone()).unwrap();
        let d = Transvection::long(OrthoIndex(2), OrthoIndex(-3), x.neg()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn zero_parameter_is_identity() {
        let (shape, ring) = setup();
        let t = Transvection::long(OrthoIndex(1), OrthoIndex(2), Poly::zero(ring)).unwrap();
        assert_eq!(t.matrix(shape, ring).unwrap(), OrthoMatrix::identity(shape, ring).unwrap());
        assert!(Word::new(vec![t]).is_empty());
    }

    #[test]
    fn column_action_matches_matrix_action() {
        let (shape, ring) = setup();
        let e2 = OrthoVector::basis(shape, ring, OrthoIndex(2)).unwrap();
        let t = Transvection::long(OrthoIndex(1), OrthoIndex(2), Poly::from_i64(ring, 3)).unwrap();
        let via_matrix = t.matrix(shape, ring).unwrap().apply(&e2).unwrap();
        let w = Word::new(vec![t]);
        let via_action = w.apply(&e2).unwrap();
        assert_eq!(via_matrix, via_action);
        // T_{1,2}(3) e_2 = e_2 + 3 e_1
        let mut want = e2.clone();
        want.set(OrthoIndex(1), Poly::from_i64(ring, 3));
        assert_eq!(via_action, want);
    }

    #[test]
    fn short_root_action_on_e0() {
        let shape = Shape::new(2, Parity::Odd);
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let x = Poly::variable(ring, 0);
        let t = Transvection::short(OrthoIndex(1), x.clone()).unwrap();
        let e0 = OrthoVector::basis(shape, ring, OrthoIndex(0)).unwrap();
        let got = t.matrix(shape, ring).unwrap().apply(&e0).unwrap();
        // T_{1,0}(xi) e_0 = e_0 + 2 xi e_1
        let mut want = e0;
        want.set(OrthoIndex(1), x.mul_coeff(&ring.coeff.from_i64(2)));
        assert_eq!(got, want);
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let (_, ring) = setup();
        let a = Transvection::long(OrthoIndex(1), OrthoIndex(2), Poly::from_i64(ring, 2)).unwrap();
        let b = Transvection::long(OrthoIndex(3), OrthoIndex(1), Poly::from_i64(ring, 4)).unwrap();
        let w = Word::new(vec![a.clone(), b.clone()]);
        let inv = w.inverse();
        assert_eq!(inv.factors()[0], b.inverse());
        assert_eq!(inv.factors()[1], a.inverse());
        assert!(Word::empty().inverse().is_empty());
    }

    #[test]
    fn word_json_round_trip() {
        let (_, ring) = setup();
        let x = Poly::variable(ring, 0);
        let w = Word::new(vec![
            Transvection::long(OrthoIndex(1), OrthoIndex(-2), x.clone()).unwrap(),
            Transvection::long(OrthoIndex(2), OrthoIndex(3), x.pow(2).add(&Poly::one(ring))).unwrap(),
        ]);
        let j = w.to_json();
        let back = Word::from_json(ring, &j).unwrap();
        assert_eq!(back, w);
    }
}
