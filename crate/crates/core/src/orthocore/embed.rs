//! GL(r) transvections and the hyperbolic embedding
//! H: GL(r,R) -> O(2r,R), g |-> diag(g, (g^{-1})~) (central 1 in the odd
//! case). H takes t_{i,j}(xi) to the long orthogonal transvection
//! T_{i,j}(xi), so GL words embed factor by factor.

use super::index::{OrthoIndex, Shape};
use super::matrix::{OrthoMatrix, SquareMatrix};
use super::transvection::{Transvection, Word};
use crate::error::{Error, Result};
use crate::polyring::{Poly, Ring};

/// An elementary GL(r) transvection t_{i,j}(xi) = e + xi e_{i,j}, 1-based
/// indices, i != j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GlTransvection {
    pub i: usize,
    pub j: usize,
    pub xi: Poly,
}

impl GlTransvection {
    pub fn new(i: usize, j: usize, xi: Poly) -> Result<Self> {
        if i == 0 || j == 0 || i == j {
            return Err(Error::InvalidIndex(format!(
                "GL transvection needs distinct 1-based indices, got ({i},{j})"
            )));
        }
        Ok(GlTransvection { i, j, xi })
    }

    pub fn inverse(&self) -> GlTransvection {
        GlTransvection { i: self.i, j: self.j, xi: self.xi.neg() }
    }

    pub fn is_trivial(&self) -> bool {
        self.xi.is_zero()
    }
}

/// A product of GL transvections in product order (leftmost applied last).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GlWord {
    factors: Vec<GlTransvection>,
}

impl GlWord {
    pub fn empty() -> Self {
        GlWord { factors: Vec::new() }
    }

    pub fn new(factors: Vec<GlTransvection>) -> Self {
        GlWord { factors: factors.into_iter().filter(|t| !t.is_trivial()).collect() }
    }

    pub fn factors(&self) -> &[GlTransvection] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn then(&self, later: &GlWord) -> GlWord {
        let mut factors = later.factors.clone();
        factors.extend(self.factors.iter().cloned());
        GlWord { factors }
    }

    pub fn inverse(&self) -> GlWord {
        GlWord { factors: self.factors.iter().rev().map(|t| t.inverse()).collect() }
    }

    /// Apply to a plain column, rightmost factor first: b_i += xi b_j.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let mut out = v.to_vec();
        for t in self.factors.iter().rev() {
            let add = t.xi.mul(&out[t.j - 1]);
            out[t.i - 1] = out[t.i - 1].add(&add);
        }
        out
    }

    pub fn product(&self, r: usize, ring: Ring) -> SquareMatrix {
        let mut m = SquareMatrix::identity(r, ring);
        for t in self.factors.iter().rev() {
            // row operation: row_i += xi * row_j
            for c in 1..=r {
                let add = t.xi.mul(m.get(t.j, c));
                let cur = m.get(t.i, c).add(&add);
                m.set(t.i, c, cur);
            }
        }
        m
    }

    /// The word for g~ (antidiagonal transpose): reversed order with
    /// indices (i,j) -> (r+1-j, r+1-i), parameters unchanged.
    pub fn antidiagonal_transpose(&self, r: usize) -> GlWord {
        GlWord {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|t| GlTransvection { i: r + 1 - t.j, j: r + 1 - t.i, xi: t.xi.clone() })
                .collect(),
        }
    }

    pub fn map_xi<F: Fn(&Poly) -> Poly>(&self, f: F) -> GlWord {
        GlWord::new(
            self.factors
                .iter()
                .map(|t| GlTransvection { i: t.i, j: t.j, xi: f(&t.xi) })
                .collect(),
        )
    }
}

/// Hyperbolic embedding of an invertible r x r matrix: block diagonal
/// (g, (g^{-1})~), extended by a central 1 in odd parity. The inverse is
/// certified by an exact g g^{-1} = 1 check.
pub fn hyperbolic_embed(g: &SquareMatrix, shape: Shape) -> Result<OrthoMatrix> {
    let r = shape.r;
    if g.size() != r {
        return Err(Error::ShapeMismatch(format!(
            "hyperbolic embedding of a {} x {} matrix into rank {}",
            g.size(),
            g.size(),
            r
        )));
    }
    let ring = g.ring();
    let inv_t = g.inverse()?.antidiagonal_transpose();
    let mut out = OrthoMatrix::identity(shape, ring)?;
    for a in 1..=r {
        for b in 1..=r {
            // top block g on positive indices
            out.set(OrthoIndex(a as i32), OrthoIndex(b as i32), g.get(a, b).clone());
            // bottom block (g^{-1})~ on negative indices, in the order
            // -r..-1; plain (a, b) sits at (-(r+1-a), -(r+1-b))
            out.set(
                OrthoIndex(-((r + 1 - a) as i32)),
                OrthoIndex(-((r + 1 - b) as i32)),
                inv_t.get(a, b).clone(),
            );
        }
    }
    Ok(out)
}

/// Embed a GL word factor by factor: t_{i,j}(xi) -> T_{i,j}(xi). Same
/// length; the product equals the hyperbolic embedding of the GL product.
pub fn embed_gl_word(w: &GlWord, shape: Shape) -> Result<Word> {
    let r = shape.r;
    let mut factors = Vec::with_capacity(w.len());
    for t in w.factors() {
        if t.i > r || t.j > r {
            return Err(Error::InvalidIndex(format!(
                "GL index ({}, {}) outside rank {r}",
                t.i, t.j
            )));
        }
        factors.push(Transvection::long(
            OrthoIndex(t.i as i32),
            OrthoIndex(t.j as i32),
            t.xi.clone(),
        )?);
    }
    Ok(Word::new(factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthocore::index::Parity;
    use crate::polyring::CoeffRing;

    fn setup() -> (Shape, Ring) {
        (Shape::new(3, Parity::Even), Ring::new(CoeffRing::prime_field(5).unwrap(), 1))
    }

    #[test]
    fn identity_embeds_to_identity() {
        let (shape, ring) = setup();
        let id = SquareMatrix::identity(3, ring);
        assert_eq!(
            hyperbolic_embed(&id, shape).unwrap(),
            OrthoMatrix::identity(shape, ring).unwrap()
        );
    }

    #[test]
    fn gl_transvection_embeds_to_orthogonal_transvection() {
        let (shape, ring) = setup();
        let x = Poly::variable(ring, 0);
        let t = GlTransvection::new(1, 2, x.clone()).unwrap();
        let g = GlWord::new(vec![t]).product(3, ring);
        let embedded = hyperbolic_embed(&g, shape).unwrap();
        let direct = Transvection::long(OrthoIndex(1), OrthoIndex(2), x)
            .unwrap()
            .matrix(shape, ring)
            .unwrap();
        assert_eq!(embedded, direct);
    }

    #[test]
    fn unit_diagonal_example() {
        // diag(u,1,1) embeds to diag(u,1,1,1,1,u^{-1})
        let (shape, ring) = setup();
        let u = Poly::from_i64(ring, 2);
        let mut g = SquareMatrix::identity(3, ring);
        g.set(1, 1, u);
        let h = hyperbolic_embed(&g, shape).unwrap();
        assert_eq!(*h.get(OrthoIndex(1), OrthoIndex(1)), Poly::from_i64(ring, 2));
        assert_eq!(*h.get(OrthoIndex(-1), OrthoIndex(-1)), Poly::from_i64(ring, 3));
        for i in [2, 3, -3, -2] {
            assert!(h.get(OrthoIndex(i), OrthoIndex(i)).is_one());
        }
        assert!(h.is_orthogonal().unwrap());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        use rand::{Rng, SeedableRng};
        let (shape, ring) = setup();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let mut mk = |len: usize| {
                let factors = (0..len)
                    .map(|_| {
                        let i = rng.gen_range(1..=3);
                        let j = loop {
                            let j = rng.gen_range(1..=3);
                            if j != i {
                                break j;
                            }
                        };
                        GlTransvection::new(i, j, Poly::from_i64(ring, rng.gen_range(0..5))).unwrap()
                    })
                    .collect();
                GlWord::new(factors)
            };
            let (wa, wb) = (mk(4), mk(4));
            let (ga, gb) = (wa.product(3, ring), wb.product(3, ring));
            let lhs = hyperbolic_embed(&ga.mul(&gb), shape).unwrap();
            let rhs = hyperbolic_embed(&ga, shape)
                .unwrap()
                .mul(&hyperbolic_embed(&gb, shape).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            assert!(lhs.is_orthogonal().unwrap());
        }
    }

    #[test]
    fn embedded_word_matches_embedded_product() {
        use rand::{Rng, SeedableRng};
        let (shape, ring) = setup();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let factors: Vec<GlTransvection> = (0..rng.gen_range(0..6))
                .map(|_| {
                    let i = rng.gen_range(1..=3);
                    let j = loop {
                        let j = rng.gen_range(1..=3);
                        if j != i {
                            break j;
                        }
                    };
                    GlTransvection::new(i, j, Poly::from_i64(ring, rng.gen_range(0..5))).unwrap()
                })
                .collect();
            let w = GlWord::new(factors);
            let embedded = embed_gl_word(&w, shape).unwrap();
            assert_eq!(embedded.len(), w.len());
            let lhs = embedded.to_matrix(shape, ring).unwrap();
            let rhs = hyperbolic_embed(&w.product(3, ring), shape).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn antidiagonal_transpose_word_matches_matrix() {
        use rand::{Rng, SeedableRng};
        let ring = Ring::new(CoeffRing::prime_field(7).unwrap(), 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let factors: Vec<GlTransvection> = (0..5)
                .map(|_| {
                    let i = rng.gen_range(1..=4);
                    let j = loop {
                        let j = rng.gen_range(1..=4);
                        if j != i {
                            break j;
                        }
                    };
                    GlTransvection::new(i, j, Poly::from_i64(ring, rng.gen_range(0..7))).unwrap()
                })
                .collect();
            let w = GlWord::new(factors);
            let lhs = w.antidiagonal_transpose(4).product(4, ring);
            let rhs = w.product(4, ring).antidiagonal_transpose();
            assert_eq!(lhs, rhs);
        }
    }
}
