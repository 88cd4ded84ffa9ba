//! Certified ideal operations: lex-monic combinations, radical containment
//! via the Rabinowitsch trick, and Bezout cofactors for the unit ideal.
//!
//! Every positive answer carries explicit cofactors that replay to an exact
//! polynomial identity, so callers can re-check certificates independently
//! of the Groebner engine that produced them.

use super::groebner::groebner_basis_in;
use super::poly::{Poly, Ring};
use super::zlattice;
use crate::error::{Error, Result};

/// Witness that an ideal contains a lexicographically monic polynomial:
/// combination = sum(cofactors[i] * gens[i]) and combination is lex-monic.
#[derive(Clone, Debug)]
pub struct MonicWitness {
    pub cofactors: Vec<Poly>,
    pub combination: Poly,
}

impl MonicWitness {
    /// Replay the defining identity exactly.
    pub fn verify(&self, gens: &[Poly]) -> bool {
        if gens.len() != self.cofactors.len() {
            return false;
        }
        let mut acc = Poly::zero(self.combination.ring());
        for (c, g) in self.cofactors.iter().zip(gens.iter()) {
            acc = acc.add(&c.mul(g));
        }
        acc == self.combination && self.combination.is_lex_monic()
    }
}

/// If the ideal generated by `gens` contains a lex-monic polynomial, return
/// cofactors f_i with sum(f_i * gens_i) lex-monic; otherwise None.
///
/// Over a field any nonzero ideal qualifies (scale a reduced-basis element);
/// over the integers the question is decided on the degree-truncated
/// coefficient lattice, one variable only.
pub fn ideal_contains_lex_monic(ring: Ring, gens: &[Poly]) -> Result<Option<MonicWitness>> {
    if ring.coeff.is_field() {
        let gb = groebner_basis_in(ring, gens)?;
        // deterministic pick: the basis element with the smallest leading
        // monomial (reduced bases have distinct leading monomials)
        let best = gb
            .basis
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.leading_monomial().cmp(&b.leading_monomial()));
        match best {
            Some((i, combination)) => {
                let witness = MonicWitness {
                    cofactors: gb.cofactors[i].clone(),
                    combination: combination.clone(),
                };
                debug_assert!(witness.verify(gens));
                Ok(Some(witness))
            }
            None => Ok(None),
        }
    } else {
        match zlattice::z_monic_witness(gens, ring)? {
            Some((cofactors, combination)) => {
                let witness = MonicWitness { cofactors, combination };
                debug_assert!(witness.verify(gens));
                Ok(Some(witness))
            }
            None => Ok(None),
        }
    }
}

/// Rabinowitsch data for one target polynomial g: in the ring with one extra
/// variable T, 1 = sum(cofactors[i] * base_i) + cofactors[last] * (1 - T*g).
#[derive(Clone, Debug)]
pub struct RabinowitschData {
    pub target: Poly,
    /// Cofactors in the extended ring, over base generators then the
    /// auxiliary polynomial 1 - T*target.
    pub cofactors: Vec<Poly>,
}

/// Certificate that every target generator lies in the radical of the base
/// ideal, one Rabinowitsch identity per target.
#[derive(Clone, Debug)]
pub struct RadicalCertificate {
    pub per_target: Vec<RabinowitschData>,
}

impl RadicalCertificate {
    /// Replay every stored identity exactly.
    pub fn verify(&self, base: &[Poly]) -> bool {
        for data in &self.per_target {
            let ring = data.target.ring();
            let ext = ring.extended(1);
            let t_var = Poly::variable(ext, ring.nvars);
            let aux = Poly::one(ext).sub(&t_var.mul(&data.target.extended(1)));
            let mut gens: Vec<Poly> = base.iter().map(|b| b.extended(1)).collect();
            gens.push(aux);
            if gens.len() != data.cofactors.len() {
                return false;
            }
            let mut acc = Poly::zero(ext);
            for (c, g) in data.cofactors.iter().zip(gens.iter()) {
                acc = acc.add(&c.mul(g));
            }
            if !acc.is_one() {
                return false;
            }
        }
        true
    }
}

/// True (with certificate) iff every target generator lies in the radical of
/// the ideal generated by `base`: for each target g, 1 lies in
/// <base, 1 - T*g> in one extra variable. Field coefficients only.
pub fn radical_contains(
    ring: Ring,
    target: &[Poly],
    base: &[Poly],
) -> Result<Option<RadicalCertificate>> {
    if !ring.coeff.is_field() {
        return Err(Error::UnsupportedRing(
            "radical containment requires field coefficients".into(),
        ));
    }
    let ext = ring.extended(1);
    let t_var = Poly::variable(ext, ring.nvars);
    let mut per_target = Vec::new();
    for g in target {
        let aux = Poly::one(ext).sub(&t_var.mul(&g.extended(1)));
        let mut gens: Vec<Poly> = base.iter().map(|b| b.extended(1)).collect();
        gens.push(aux);
        let gb = groebner_basis_in(ext, &gens)?;
        match gb.contains_with_cofactors(&Poly::one(ext)) {
            Some(cofactors) => per_target.push(RabinowitschData { target: g.clone(), cofactors }),
            None => return Ok(None),
        }
    }
    let cert = RadicalCertificate { per_target };
    debug_assert!(cert.verify(base));
    Ok(Some(cert))
}

/// Cofactors t_i with sum(t_i * elems_i) = 1, or None when the elements do
/// not generate the unit ideal.
pub fn bezout_combination(ring: Ring, elems: &[Poly]) -> Result<Option<Vec<Poly>>> {
    let cof = if ring.coeff.is_field() {
        let gb = groebner_basis_in(ring, elems)?;
        gb.contains_with_cofactors(&Poly::one(ring))
    } else {
        zlattice::z_bezout(elems, ring)?
    };
    if let Some(c) = &cof {
        let mut acc = Poly::zero(ring);
        for (t, e) in c.iter().zip(elems.iter()) {
            acc = acc.add(&t.mul(e));
        }
        if !acc.is_one() {
            return Err(Error::Internal("bezout cofactors do not sum to 1".into()));
        }
    }
    Ok(cof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::coeff::CoeffRing;

    fn f5(n: usize) -> Ring {
        Ring::new(CoeffRing::prime_field(5).unwrap(), n)
    }

    #[test]
    fn monic_witness_over_f5() {
        let r = f5(1);
        let x1 = Poly::variable(r, 0);
        // {x1}: already lex-monic
        let w = ideal_contains_lex_monic(r, &[x1.clone()]).unwrap().unwrap();
        assert!(w.verify(&[x1.clone()]));
        assert_eq!(w.combination, x1);
        // {2*x1}: scaled by the unit inverse 3 (3*2 = 1 in F_5)
        let g = x1.mul_coeff(&r.coeff.from_i64(2));
        let w = ideal_contains_lex_monic(r, &[g.clone()]).unwrap().unwrap();
        assert!(w.verify(&[g.clone()]));
        assert_eq!(w.combination, x1);
        assert_eq!(w.cofactors[0], Poly::from_i64(r, 3));
        // zero ideal: none
        assert!(ideal_contains_lex_monic(r, &[]).unwrap().is_none());
    }

    #[test]
    fn monic_witness_over_z() {
        let z = Ring::new(CoeffRing::integers(), 1);
        let x = Poly::variable(z, 0);
        let g1 = x.mul_coeff(&z.coeff.from_i64(2)).add(&Poly::one(z));
        let gens = vec![g1, x];
        let w = ideal_contains_lex_monic(z, &gens).unwrap().unwrap();
        assert!(w.verify(&gens));
        assert!(w.combination.is_one());
    }

    #[test]
    fn radical_examples() {
        let r = f5(2);
        let x1 = Poly::variable(r, 0);
        let x2 = Poly::variable(r, 1);
        // x1 in sqrt(<x1^2>)
        let cert = radical_contains(r, &[x1.clone()], &[x1.pow(2)]).unwrap().unwrap();
        assert!(cert.verify(&[x1.pow(2)]));
        // x1 not in sqrt(<x2>)
        assert!(radical_contains(r, &[x1.clone()], &[x2.clone()]).unwrap().is_none());
        // empty target is vacuously contained
        let cert = radical_contains(r, &[], &[x2]).unwrap().unwrap();
        assert!(cert.per_target.is_empty());
    }

    #[test]
    fn bezout_examples() {
        let r = f5(1);
        let x = Poly::variable(r, 0);
        let one = Poly::one(r);
        assert!(bezout_combination(r, &[one.clone()]).unwrap().is_some());
        let elems = vec![x.clone(), one.sub(&x)];
        let cof = bezout_combination(r, &elems).unwrap().unwrap();
        let acc = cof[0].mul(&elems[0]).add(&cof[1].mul(&elems[1]));
        assert!(acc.is_one());
        assert!(bezout_combination(r, &[x]).unwrap().is_none());
    }
}
