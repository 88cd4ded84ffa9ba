//! Columns of the split orthogonal module: the quadratic and bilinear forms
//! and the isotropic-unimodular test with its Bezout certificate.

use super::index::{OrthoIndex, Shape};
use crate::error::{Error, Result};
use crate::polyring::{bezout_combination, Poly, Ring};

/// A column vector indexed 1..r, (0), -r..-1 over a polynomial ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrthoVector {
    shape: Shape,
    ring: Ring,
    entries: Vec<Poly>,
}

impl OrthoVector {
    pub fn zero(shape: Shape, ring: Ring) -> Result<Self> {
        shape.check_ring(ring)?;
        Ok(OrthoVector {
            shape,
            ring,
            entries: vec![Poly::zero(ring); shape.dim()],
        })
    }

    /// The basis column e_idx.
    pub fn basis(shape: Shape, ring: Ring, idx: OrthoIndex) -> Result<Self> {
        if !shape.valid_index(idx) {
            return Err(Error::InvalidIndex(format!("basis index {idx} for rank {}", shape.r)));
        }
        let mut v = OrthoVector::zero(shape, ring)?;
        v.set(idx, Poly::one(ring));
        Ok(v)
    }

    pub fn from_entries(shape: Shape, ring: Ring, entries: Vec<Poly>) -> Result<Self> {
        shape.check_ring(ring)?;
        if entries.len() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for dimension {}",
                entries.len(),
                shape.dim()
            )));
        }
        for e in &entries {
            if e.ring() != ring {
                return Err(Error::RingMismatch("entry ring differs".into()));
            }
        }
        Ok(OrthoVector { shape, ring, entries })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn get(&self, idx: OrthoIndex) -> &Poly {
        &self.entries[self.shape.pos(idx)]
    }

    pub fn set(&mut self, idx: OrthoIndex, p: Poly) {
        assert_eq!(p.ring(), self.ring);
        let pos = self.shape.pos(idx);
        self.entries[pos] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    /// Entries at the given indices, in the given order.
    pub fn row(&self, idxs: &[OrthoIndex]) -> Vec<Poly> {
        idxs.iter().map(|i| self.get(*i).clone()).collect()
    }

    /// Map every entry through a ring transformation.
    pub fn map<F: Fn(&Poly) -> Poly>(&self, ring: Ring, f: F) -> Result<OrthoVector> {
        OrthoVector::from_entries(self.shape, ring, self.entries.iter().map(f).collect())
    }

    pub fn try_map<F: Fn(&Poly) -> Result<Poly>>(&self, ring: Ring, f: F) -> Result<OrthoVector> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        OrthoVector::from_entries(self.shape, ring, entries)
    }

    // ---- Forms ----

    /// The split quadratic form: sum of x_i x_{-i}, plus x_0^2 in the odd
    /// case.
    pub fn quad_form(&self) -> Poly {
        let mut q = Poly::zero(self.ring);
        for i in 1..=self.shape.r as i32 {
            q = q.add(&self.get(OrthoIndex(i)).mul(self.get(OrthoIndex(-i))));
        }
        if self.shape.is_odd() {
            let x0 = self.get(OrthoIndex(0));
            q = q.add(&x0.mul(x0));
        }
        q
    }

    /// The associated symmetric bilinear form
    /// Q(x,y) = q(x+y) - q(x) - q(y) = 2 x_0 y_0 + sum(x_i y_{-i} + x_{-i} y_i).
    pub fn bilinear_form(&self, other: &OrthoVector) -> Result<Poly> {
        if self.shape != other.shape || self.ring != other.ring {
            return Err(Error::ShapeMismatch("bilinear form operands differ".into()));
        }
        let mut q = Poly::zero(self.ring);
        for i in 1..=self.shape.r as i32 {
            let (pi, ni) = (OrthoIndex(i), OrthoIndex(-i));
            q = q.add(&self.get(pi).mul(other.get(ni)));
            q = q.add(&self.get(ni).mul(other.get(pi)));
        }
        if self.shape.is_odd() {
            let two = Poly::from_i64(self.ring, 2);
            q = q.add(&two.mul(&self.get(OrthoIndex(0)).mul(other.get(OrthoIndex(0)))));
        }
        Ok(q)
    }

    /// The unimodularity row for the isotropic-unimodular test: the entries
    /// in basis order, with 2*b_0 in place of b_0 in the odd case.
    pub fn unimodularity_row(&self) -> Vec<Poly> {
        self.shape
            .indices()
            .iter()
            .map(|idx| {
                if idx.is_zero() {
                    self.get(*idx).mul_coeff(&self.ring.coeff.from_i64(2))
                } else {
                    self.get(*idx).clone()
                }
            })
            .collect()
    }

    /// q(b) = 0 exactly and the unimodularity row generates the unit ideal,
    /// certified by Bezout cofactors (in basis order).
    pub fn is_isotropic_unimodular(&self) -> Result<Option<Vec<Poly>>> {
        if !self.quad_form().is_zero() {
            return Ok(None);
        }
        bezout_combination(self.ring, &self.unimodularity_row())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthocore::index::Parity;
    use crate::polyring::CoeffRing;

    fn setup(r: usize, parity: Parity) -> (Shape, Ring) {
        (Shape::new(r, parity), Ring::new(CoeffRing::prime_field(5).unwrap(), 1))
    }

    #[test]
    fn quad_form_examples() {
        let (s, ring) = setup(3, Parity::Even);
        let e1 = OrthoVector::basis(s, ring, OrthoIndex(1)).unwrap();
        assert!(e1.quad_form().is_zero());
        let mut hyp = OrthoVector::zero(s, ring).unwrap();
        hyp.set(OrthoIndex(1), Poly::one(ring));
        hyp.set(OrthoIndex(-1), Poly::one(ring));
        assert!(hyp.quad_form().is_one());
        let (s2, ring) = setup(2, Parity::Odd);
        let mut v = OrthoVector::zero(s2, ring).unwrap();
        v.set(OrthoIndex(0), Poly::from_i64(ring, 3));
        assert_eq!(v.quad_form(), Poly::from_i64(ring, 9 % 5));
    }

    #[test]
    fn bilinear_examples() {
        let (s, ring) = setup(3, Parity::Even);
        let e1 = OrthoVector::basis(s, ring, OrthoIndex(1)).unwrap();
        let em1 = OrthoVector::basis(s, ring, OrthoIndex(-1)).unwrap();
        let e2 = OrthoVector::basis(s, ring, OrthoIndex(2)).unwrap();
        assert!(e1.bilinear_form(&em1).unwrap().is_one());
        assert!(e1.bilinear_form(&e2).unwrap().is_zero());
    }

    #[test]
    fn polarization_identity_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &parity in &[Parity::Even, Parity::Odd] {
            let (s, ring) = setup(3, parity);
            for _ in 0..50 {
                let entries: Vec<Poly> = (0..s.dim())
                    .map(|_| Poly::from_i64(ring, rng.gen_range(0..5)))
                    .collect();
                let x = OrthoVector::from_entries(s, ring, entries).unwrap();
                // Q(x, x) = 2 q(x)
                let lhs = x.bilinear_form(&x).unwrap();
                let rhs = x.quad_form().mul_coeff(&ring.coeff.from_i64(2));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ium_examples() {
        let (s, ring) = setup(3, Parity::Even);
        let e1 = OrthoVector::basis(s, ring, OrthoIndex(1)).unwrap();
        assert!(e1.is_isotropic_unimodular().unwrap().is_some());
        let zero = OrthoVector::zero(s, ring).unwrap();
        assert!(zero.is_isotropic_unimodular().unwrap().is_none());
    }

    #[test]
    fn odd_char_two_rejected() {
        let s = Shape::new(3, Parity::Odd);
        let ring = Ring::new(CoeffRing::prime_field(2).unwrap(), 1);
        assert_eq!(OrthoVector::zero(s, ring).unwrap_err(), Error::CharacteristicTwo);
        let even = Shape::new(3, Parity::Even);
        assert!(OrthoVector::zero(even, ring).is_ok());
    }
}
