//! Matrices over the orthogonal index layout, plain square matrices for the
//! GL(r) and Theta(r) machinery, the antidiagonal transpose, and the exact
//! orthogonality test.

use super::index::{OrthoIndex, Shape};
use super::vector::OrthoVector;
use crate::error::{Error, Result};
use crate::polyring::resultant::determinant;
use crate::polyring::{Poly, Ring};

/// A square matrix indexed by the orthogonal basis ordering.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrthoMatrix {
    shape: Shape,
    ring: Ring,
    /// row-major by basis positions
    entries: Vec<Poly>,
}

impl OrthoMatrix {
    pub fn identity(shape: Shape, ring: Ring) -> Result<Self> {
        shape.check_ring(ring)?;
        let d = shape.dim();
        let mut entries = vec![Poly::zero(ring); d * d];
        for i in 0..d {
            entries[i * d + i] = Poly::one(ring);
        }
        Ok(OrthoMatrix { shape, ring, entries })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn get(&self, i: OrthoIndex, j: OrthoIndex) -> &Poly {
        let d = self.shape.dim();
        &self.entries[self.shape.pos(i) * d + self.shape.pos(j)]
    }

    pub fn set(&mut self, i: OrthoIndex, j: OrthoIndex, p: Poly) {
        assert_eq!(p.ring(), self.ring);
        let d = self.shape.dim();
        let pos = self.shape.pos(i) * d + self.shape.pos(j);
        self.entries[pos] = p;
    }

    pub fn get_pos(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row * self.shape.dim() + col]
    }

    pub fn set_pos(&mut self, row: usize, col: usize, p: Poly) {
        let d = self.shape.dim();
        self.entries[row * d + col] = p;
    }

    pub fn mul(&self, other: &OrthoMatrix) -> Result<OrthoMatrix> {
        if self.shape != other.shape || self.ring != other.ring {
            return Err(Error::ShapeMismatch("matrix product shapes differ".into()));
        }
        let d = self.shape.dim();
        let mut out = OrthoMatrix {
            shape: self.shape,
            ring: self.ring,
            entries: vec![Poly::zero(self.ring); d * d],
        };
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[k * d + j];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.entries[i * d + j].add(&a.mul(b));
                    out.entries[i * d + j] = cur;
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column.
    pub fn apply(&self, v: &OrthoVector) -> Result<OrthoVector> {
        if self.shape != v.shape() || self.ring != v.ring() {
            return Err(Error::ShapeMismatch("matrix/vector shapes differ".into()));
        }
        let d = self.shape.dim();
        let mut entries = vec![Poly::zero(self.ring); d];
        for i in 0..d {
            let mut acc = Poly::zero(self.ring);
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&v.entries()[k]));
            }
            entries[i] = acc;
        }
        OrthoVector::from_entries(self.shape, self.ring, entries)
    }

    pub fn column(&self, j: OrthoIndex) -> OrthoVector {
        let d = self.shape.dim();
        let jp = self.shape.pos(j);
        let entries = (0..d).map(|i| self.entries[i * d + jp].clone()).collect();
        OrthoVector::from_entries(self.shape, self.ring, entries).expect("column shape")
    }

    /// Transpose with respect to the antidiagonal: positions reverse, so
    /// (g~)_{i,j} = g_{sigma(j), sigma(i)} with sigma the order reversal.
    pub fn antidiagonal_transpose(&self) -> OrthoMatrix {
        let d = self.shape.dim();
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.entries[i * d + j] = self.entries[(d - 1 - j) * d + (d - 1 - i)].clone();
            }
        }
        out
    }

    /// Exact orthogonality: every column g e_i has q(g e_i) = q(e_i) and all
    /// pairs satisfy Q(g e_i, g e_j) = Q(e_i, e_j) as polynomial identities.
    pub fn is_orthogonal(&self) -> Result<bool> {
        let idxs = self.shape.indices();
        let cols: Vec<OrthoVector> = idxs.iter().map(|i| self.column(*i)).collect();
        for (k, idx) in idxs.iter().enumerate() {
            let basis = OrthoVector::basis(self.shape, self.ring, *idx)?;
            if cols[k].quad_form() != basis.quad_form() {
                return Ok(false);
            }
        }
        for a in 0..idxs.len() {
            for b in (a + 1)..idxs.len() {
                let ea = OrthoVector::basis(self.shape, self.ring, idxs[a])?;
                let eb = OrthoVector::basis(self.shape, self.ring, idxs[b])?;
                if cols[a].bilinear_form(&cols[b])? != ea.bilinear_form(&eb)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A plain 1-based square matrix over a polynomial ring, used for GL(r),
/// Theta(r) and the mu machinery.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SquareMatrix {
    n: usize,
    ring: Ring,
    entries: Vec<Poly>,
}

impl SquareMatrix {
    pub fn zero(n: usize, ring: Ring) -> Self {
        SquareMatrix { n, ring, entries: vec![Poly::zero(ring); n * n] }
    }

    pub fn identity(n: usize, ring: Ring) -> Self {
        let mut m = SquareMatrix::zero(n, ring);
        for i in 0..n {
            m.entries[i * n + i] = Poly::one(ring);
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::ShapeMismatch("non-square row lengths".into()));
            }
        }
        Ok(SquareMatrix { n, ring, entries: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// 1-based access, matching the written conventions.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.ring(), self.ring);
        let pos = (i - 1) * self.n + (j - 1);
        self.entries[pos] = p;
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!((self.n, self.ring), (other.n, other.ring));
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        SquareMatrix { n: self.n, ring: self.ring, entries }
    }

    pub fn neg(&self) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            ring: self.ring,
            entries: self.entries.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!((self.n, self.ring), (other.n, other.ring));
        let n = self.n;
        let mut out = SquareMatrix::zero(n, self.ring);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.entries[i * n + j].add(&a.mul(b));
                    out.entries[i * n + j] = cur;
                }
            }
        }
        out
    }

    /// Matrix times column (0-based slice of length n).
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Poly::zero(self.ring);
                for k in 0..self.n {
                    let a = &self.entries[i * self.n + k];
                    if !a.is_zero() {
                        acc = acc.add(&a.mul(&v[k]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn antidiagonal_transpose(&self) -> SquareMatrix {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.entries[(n - 1 - j) * n + (n - 1 - i)].clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.entries[j * n + i].clone();
            }
        }
        out
    }

    pub fn det(&self) -> Poly {
        let rows: Vec<Vec<Poly>> = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        determinant(self.ring, &rows)
    }

    /// Inverse over the ring: the determinant must be a unit (an invertible
    /// constant). Certified by an exact g * g^{-1} = 1 check.
    pub fn inverse(&self) -> Result<SquareMatrix> {
        let det = self.det();
        if !det.is_unit() {
            return Err(Error::NotInvertible(format!("determinant {det} is not a unit")));
        }
        let det_inv = self
            .ring
            .coeff
            .inv(&det.constant_coeff())
            .ok_or_else(|| Error::NotInvertible("unit inverse failed".into()))?;
        let n = self.n;
        let mut adj = SquareMatrix::zero(n, self.ring);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<Poly>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| self.entries[r * n + c].clone())
                            .collect()
                    })
                    .collect();
                let mut cof = determinant(self.ring, &minor);
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                // adjugate transposes the cofactor matrix
                adj.entries[j * n + i] = cof.mul_coeff(&det_inv);
            }
        }
        let check = self.mul(&adj);
        if check != SquareMatrix::identity(n, self.ring) {
            return Err(Error::Internal("inverse verification failed".into()));
        }
        Ok(adj)
    }

    pub fn is_identity(&self) -> bool {
        *self == SquareMatrix::identity(self.n, self.ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthocore::index::Parity;
    use crate::polyring::CoeffRing;

    #[test]
    fn antidiagonal_transpose_examples() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        // e_{1,2} in a plain 3x3 goes to e_{2,3}
        let mut m = SquareMatrix::zero(3, ring);
        m.set(1, 2, Poly::one(ring));
        let t = m.antidiagonal_transpose();
        assert!(t.get(2, 3).is_one());
        assert_eq!(t.entries.iter().filter(|p| !p.is_zero()).count(), 1);
        // involution on a random matrix
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut g = SquareMatrix::zero(4, ring);
        for i in 1..=4 {
            for j in 1..=4 {
                g.set(i, j, Poly::from_i64(ring, rng.gen_range(0..5)));
            }
        }
        assert_eq!(g.antidiagonal_transpose().antidiagonal_transpose(), g);
        let id = SquareMatrix::identity(4, ring);
        assert_eq!(id.antidiagonal_transpose(), id);
    }

    #[test]
    fn antidiagonal_transpose_is_an_antihomomorphism() {
        use rand::{Rng, SeedableRng};
        let ring = Ring::new(CoeffRing::prime_field(7).unwrap(), 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let mut a = SquareMatrix::zero(3, ring);
            let mut b = SquareMatrix::zero(3, ring);
            for i in 1..=3 {
                for j in 1..=3 {
                    a.set(i, j, Poly::from_i64(ring, rng.gen_range(0..7)));
                    b.set(i, j, Poly::from_i64(ring, rng.gen_range(0..7)));
                }
            }
            assert_eq!(
                a.mul(&b).antidiagonal_transpose(),
                b.antidiagonal_transpose().mul(&a.antidiagonal_transpose())
            );
        }
    }

    #[test]
    fn identity_is_orthogonal() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        for &parity in &[Parity::Even, Parity::Odd] {
            let shape = Shape::new(3, parity);
            let id = OrthoMatrix::identity(shape, ring).unwrap();
            assert!(id.is_orthogonal().unwrap());
        }
    }

    #[test]
    fn uncompensated_unit_is_not_orthogonal() {
        // e + e_{1,2} alone fails Q(g e_2, g e_{-1}) = Q(e_2, e_{-1})
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Even);
        let mut g = OrthoMatrix::identity(shape, ring).unwrap();
        g.set(OrthoIndex(1), OrthoIndex(2), Poly::one(ring));
        assert!(!g.is_orthogonal().unwrap());
    }

    #[test]
    fn inverse_certified() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let x = Poly::variable(ring, 0);
        let mut g = SquareMatrix::identity(3, ring);
        g.set(1, 2, x.clone());
        g.set(2, 3, x.pow(2).add(&Poly::one(ring)));
        let inv = g.inverse().unwrap();
        assert!(g.mul(&inv).is_identity());
        assert!(inv.mul(&g).is_identity());
        // x on the diagonal is not invertible over the polynomial ring
        let mut bad = SquareMatrix::identity(2, ring);
        bad.set(1, 1, x);
        assert!(bad.inverse().is_err());
    }
}
