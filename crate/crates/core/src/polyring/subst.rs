//! Variable changes: the normalization substitution that turns a lex-monic
//! polynomial into one monic in the last variable, and the shift that
//! replaces the last variable y by y + s^m z with a fresh z.

use super::poly::{Poly, Ring};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which way to apply a [`VariableChange`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Forward,
    Backward,
}

/// The invertible change of variables x_i = y_i + y_n^(K^(n-i)) for i < n,
/// x_n = y_n, acting on the first `active` variables of a ring. Backward
/// substitutes y_i = x_i - x_n^(K^(n-i)) and inverts forward exactly.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VariableChange {
    /// Strictly larger than the degree of the polynomial being normalized.
    pub k: u32,
    /// Number of active variables n; the change is the identity when n <= 1.
    pub active: usize,
}

impl VariableChange {
    pub fn identity(active: usize) -> Self {
        VariableChange { k: 1, active }
    }

    pub fn is_identity(&self) -> bool {
        self.active <= 1
    }

    fn exponent_for(&self, i: usize) -> Result<u32> {
        // K^(n - i) with 1-based i; here i is 0-based so n - i - 1 + 1
        let power = (self.active - 1 - i) as u32;
        let mut acc: u32 = 1;
        for _ in 0..power {
            acc = acc
                .checked_mul(self.k)
                .ok_or_else(|| Error::Internal("normalization exponent overflow".into()))?;
        }
        Ok(acc)
    }

    pub fn apply(&self, dir: Direction, f: &Poly) -> Result<Poly> {
        if self.is_identity() {
            return Ok(f.clone());
        }
        let ring = f.ring();
        if self.active > ring.nvars {
            return Err(Error::ShapeMismatch(format!(
                "variable change on {} active variables, ring has {}",
                self.active, ring.nvars
            )));
        }
        let last = Poly::variable(ring, self.active - 1);
        let mut images = Vec::new();
        for i in 0..self.active - 1 {
            let xi = Poly::variable(ring, i);
            let shift = last.pow(self.exponent_for(i)?);
            let image = match dir {
                Direction::Forward => xi.add(&shift),
                Direction::Backward => xi.sub(&shift),
            };
            images.push((i, image));
        }
        Ok(f.substitute(&images))
    }

    pub fn forward(&self, f: &Poly) -> Result<Poly> {
        self.apply(Direction::Forward, f)
    }

    pub fn backward(&self, f: &Poly) -> Result<Poly> {
        self.apply(Direction::Backward, f)
    }
}

/// Normalize a lex-monic polynomial: returns the change with K = deg f + 1
/// and the image of f, monic as a univariate polynomial in the last active
/// variable. n = 1 is the identity change.
pub fn normalize_variables(f: &Poly) -> Result<(VariableChange, Poly)> {
    normalize_variables_in(f, f.ring().nvars)
}

/// Same, treating only the first `active` variables as live. Entries must
/// not use the variables past `active`.
pub fn normalize_variables_in(f: &Poly, active: usize) -> Result<(VariableChange, Poly)> {
    if !f.is_lex_monic() {
        return Err(Error::NotLexMonic(format!("normalize_variables on {f}")));
    }
    for v in active..f.ring().nvars {
        if f.uses_var(v) {
            return Err(Error::ShapeMismatch(format!(
                "polynomial uses inactive variable x{}",
                v + 1
            )));
        }
    }
    if active <= 1 {
        return Ok((VariableChange::identity(active), f.clone()));
    }
    let k = u32::try_from(f.total_degree() + 1)
        .map_err(|_| Error::Internal("degree too large to normalize".into()))?;
    let change = VariableChange { k, active };
    let image = change.forward(f)?;
    if !image.is_monic_in(active - 1) {
        return Err(Error::Internal(format!(
            "normalization failed to produce a monic image for {f}"
        )));
    }
    Ok((change, image))
}

/// Replace the last variable y of f's ring by y + s^m * z where z is the
/// fresh variable with index `new_var` (>= nvars). The divisor s must not
/// involve y. Specializing z := 0 recovers f.
pub fn shift_last_variable(f: &Poly, s: &Poly, m: u32, new_var: usize) -> Result<Poly> {
    let ring = f.ring();
    if ring.nvars == 0 {
        return Err(Error::ShapeMismatch("no variable to shift".into()));
    }
    let y = ring.nvars - 1;
    if s.ring() != ring {
        return Err(Error::RingMismatch("shift divisor in a different ring".into()));
    }
    if s.uses_var(y) {
        return Err(Error::ShapeMismatch(
            "shift divisor involves the shifted variable".into(),
        ));
    }
    if new_var < ring.nvars {
        return Err(Error::ShapeMismatch(format!(
            "fresh variable index {new_var} collides with existing variables"
        )));
    }
    let ext = Ring::new(ring.coeff, new_var + 1);
    let extra = ext.nvars - ring.nvars;
    let y_ext = Poly::variable(ext, y);
    let z_ext = Poly::variable(ext, new_var);
    let image = y_ext.add(&s.extended(extra).pow(m).mul(&z_ext));
    Ok(f.extended(extra).substitute(&[(y, image)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::coeff::CoeffRing;

    fn f5(n: usize) -> Ring {
        Ring::new(CoeffRing::prime_field(5).unwrap(), n)
    }

    #[test]
    fn normalize_x1_in_two_vars() {
        // f = x1, K = 2: image is y1 + y2^2, monic in y2
        let r = f5(2);
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        let (change, image) = normalize_variables(&x1).unwrap();
        assert_eq!(change.k, 2);
        assert_eq!(image, x1.add(&x2.pow(2)));
        assert!(image.is_monic_in(1));
        assert_eq!(change.backward(&image).unwrap(), x1);
    }

    #[test]
    fn normalize_is_identity_in_one_var() {
        let r = f5(1);
        let f = Poly::variable(r, 0).pow(3);
        let (change, image) = normalize_variables(&f).unwrap();
        assert!(change.is_identity());
        assert_eq!(image, f);
    }

    #[test]
    fn normalize_product() {
        // f = x1*x2, K = 3: image is (y1 + y2^3) y2 = y1 y2 + y2^4
        let r = f5(2);
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        let f = x1.mul(&x2);
        let (change, image) = normalize_variables(&f).unwrap();
        assert_eq!(change.k, 3);
        assert_eq!(image, x1.mul(&x2).add(&x2.pow(4)));
        assert!(image.is_monic_in(1));
        assert_eq!(change.backward(&image).unwrap(), f);
    }

    #[test]
    fn normalize_round_trip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let r = f5(3);
        for _ in 0..100 {
            // random polynomial, then scale to lex-monic over the field
            let mut f = Poly::zero(r);
            for _ in 0..rng.gen_range(1..6) {
                let e: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
                let c = r.coeff.from_i64(rng.gen_range(0..5));
                f = f.add(&Poly::monomial(r, super::super::monomial::Monomial::from_exponents(&e), c));
            }
            if f.is_zero() {
                continue;
            }
            let (f, _) = f.monic_scaled().unwrap();
            let (change, image) = normalize_variables(&f).unwrap();
            assert!(image.is_monic_in(2), "not monic in last var: {image}");
            assert_eq!(change.backward(&image).unwrap(), f);
            assert_eq!(change.forward(&f).unwrap(), image);
        }
    }

    #[test]
    fn shift_examples() {
        let r = f5(1);
        let y = Poly::variable(r, 0);
        let one = Poly::one(r);
        // f = y, s = 1, m = 0: y + z
        let shifted = shift_last_variable(&y, &one, 0, 1).unwrap();
        let ext = f5(2);
        assert_eq!(shifted, Poly::variable(ext, 0).add(&Poly::variable(ext, 1)));
        // f = y^2: binomial expansion with s = 2, m = 3
        let s = Poly::from_i64(r, 2);
        let f = y.pow(2);
        let shifted = shift_last_variable(&f, &s, 3, 1).unwrap();
        let ye = Poly::variable(ext, 0);
        let ze = Poly::variable(ext, 1);
        let sm = Poly::from_i64(ext, 2).pow(3);
        let expect = ye.add(&sm.mul(&ze)).pow(2);
        assert_eq!(shifted, expect);
        // specializing z := 0 recovers f
        let back = shifted.eval_var(1, &Poly::zero(ext)).truncated(1).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn shift_rejects_divisor_using_y() {
        let r = f5(1);
        let y = Poly::variable(r, 0);
        assert!(shift_last_variable(&y, &y, 1, 1).is_err());
    }
}
