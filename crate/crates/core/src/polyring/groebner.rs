//! Buchberger's algorithm over field coefficients, lex order, with cofactor
//! tracking so every basis element and every normal form comes with an
//! explicit combination of the original generators.

use super::monomial::Monomial;
use super::poly::{Poly, Ring};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
struct Item {
    poly: Poly,
    /// poly == sum of cof[j] * gens[j]
    cof: Vec<Poly>,
}

/// A reduced lex Gröbner basis together with cofactor rows expressing each
/// basis element in the original generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    gens: Vec<Poly>,
    pub basis: Vec<Poly>,
    /// cofactors[i][j]: basis[i] = sum_j cofactors[i][j] * gens[j]
    pub cofactors: Vec<Vec<Poly>>,
}

/// Compute the reduced lex Gröbner basis of the ideal generated by `gens`.
/// Field coefficients only; the integer case lives in `zlattice`.
pub fn groebner_basis(gens: &[Poly]) -> Result<GroebnerBasis> {
    let ring = match gens.first() {
        Some(g) => g.ring(),
        None => {
            return Err(Error::Internal(
                "groebner_basis needs at least the ring; pass a zero polynomial for the zero ideal"
                    .into(),
            ))
        }
    };
    groebner_basis_in(ring, gens)
}

/// Same as [`groebner_basis`] but with an explicit ring, so the empty
/// generator list (zero ideal) is representable.
pub fn groebner_basis_in(ring: Ring, gens: &[Poly]) -> Result<GroebnerBasis> {
    if !ring.coeff.is_field() {
        return Err(Error::UnsupportedRing(format!(
            "Groebner bases require field coefficients, got {}",
            ring.coeff
        )));
    }
    for g in gens {
        if g.ring() != ring {
            return Err(Error::RingMismatch("generators in different rings".into()));
        }
    }

    let mut items: Vec<Item> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut cof = vec![Poly::zero(ring); gens.len()];
        let (monic, scale) = g.monic_scaled().expect("nonzero over a field");
        cof[j] = Poly::constant(ring, scale);
        items.push(Item { poly: monic, cof });
    }

    // pair queue ordered by lcm of leading monomials (normal strategy)
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    for i in 0..items.len() {
        for j in 0..i {
            pairs.insert(pair_key(&items, i, j));
        }
    }

    while let Some((_, i, j)) = pairs.pop_first().map(|(k, i, j)| (k, i, j)) {
        let (fi, fj) = (&items[i], &items[j]);
        let lti = fi.poly.leading_monomial().unwrap();
        let ltj = fj.poly.leading_monomial().unwrap();
        let lcm = lti.lcm(ltj);
        // Buchberger's coprimality criterion
        if lcm == lti.mul(ltj) {
            continue;
        }
        let ui = lcm.try_div(lti).unwrap();
        let uj = lcm.try_div(ltj).unwrap();
        let one = ring.coeff.one();
        let mut s = fi.poly.mul_term(&ui, &one).sub(&fj.poly.mul_term(&uj, &one));
        let mut scof: Vec<Poly> = fi
            .cof
            .iter()
            .zip(fj.cof.iter())
            .map(|(a, b)| a.mul_term(&ui, &one).sub(&b.mul_term(&uj, &one)))
            .collect();
        reduce_full(&items, &mut s, &mut scof);
        if s.is_zero() {
            continue;
        }
        let (monic, scale) = s.monic_scaled().unwrap();
        let c = Poly::constant(ring, scale);
        let cof = scof.iter().map(|p| p.mul(&c)).collect();
        items.push(Item { poly: monic, cof });
        let new = items.len() - 1;
        for k in 0..new {
            pairs.insert(pair_key(&items, new, k));
        }
    }

    // inter-reduce to the unique reduced basis
    loop {
        let mut changed = false;
        let mut k = 0;
        while k < items.len() {
            let mut item = items.remove(k);
            let before = item.poly.clone();
            reduce_full(&items, &mut item.poly, &mut item.cof);
            if item.poly.is_zero() {
                changed = true;
                continue;
            }
            if item.poly != before {
                changed = true;
            }
            let (monic, scale) = item.poly.monic_scaled().unwrap();
            if !scale.is_one() {
                let c = Poly::constant(ring, scale);
                item.cof = item.cof.iter().map(|p| p.mul(&c)).collect();
                item.poly = monic;
            }
            items.insert(k, item);
            k += 1;
        }
        if !changed {
            break;
        }
    }
    items.sort_by(|a, b| {
        a.poly
            .leading_monomial()
            .cmp(&b.poly.leading_monomial())
    });

    Ok(GroebnerBasis {
        ring,
        gens: gens.to_vec(),
        basis: items.iter().map(|it| it.poly.clone()).collect(),
        cofactors: items.into_iter().map(|it| it.cof).collect(),
    })
}

fn pair_key(items: &[Item], i: usize, j: usize) -> (Monomial, usize, usize) {
    let lcm = items[i]
        .poly
        .leading_monomial()
        .unwrap()
        .lcm(items[j].poly.leading_monomial().unwrap());
    (lcm, i.max(j), i.min(j))
}

/// Fully reduce `f` (head and tail) by the items, updating `cof` so that the
/// invariant original_f = f + sum(q * item) is preserved through
/// cof_new = cof_old - q * item_cof.
fn reduce_full(items: &[Item], f: &mut Poly, cof: &mut [Poly]) {
    if items.is_empty() {
        return;
    }
    let ring = f.ring();
    let mut result = Poly::zero(ring);
    while !f.is_zero() {
        let lm = f.leading_monomial().unwrap().clone();
        let lc = f.leading_coeff().unwrap().clone();
        let mut reduced = false;
        for item in items {
            let ltm = item.poly.leading_monomial().unwrap();
            if let Some(q) = lm.try_div(ltm) {
                // item is monic, so the quotient coefficient is lc itself
                *f = f.sub(&item.poly.mul_term(&q, &lc));
                for (c, ic) in cof.iter_mut().zip(item.cof.iter()) {
                    *c = c.sub(&ic.mul_term(&q, &lc));
                }
                reduced = true;
                break;
            }
        }
        if !reduced {
            let t = Poly::monomial(ring, lm.clone(), lc.clone());
            result = result.add(&t);
            *f = f.sub(&t);
        }
    }
    *f = result;
}

impl GroebnerBasis {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Normal form of `f` modulo the basis.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        self.normal_form_with_cofactors(f).0
    }

    /// Normal form plus cofactors over the ORIGINAL generators:
    /// f = nf + sum(cof[j] * gens[j]).
    pub fn normal_form_with_cofactors(&self, f: &Poly) -> (Poly, Vec<Poly>) {
        let ring = self.ring;
        let items: Vec<Item> = self
            .basis
            .iter()
            .zip(self.cofactors.iter())
            .map(|(p, c)| Item { poly: p.clone(), cof: c.clone() })
            .collect();
        let mut nf = f.clone();
        // cof starts at zero; reduce_full subtracts q * item_cof, so negate.
        let mut cof = vec![Poly::zero(ring); self.gens.len()];
        reduce_full(&items, &mut nf, &mut cof);
        (nf, cof.into_iter().map(|p| p.neg()).collect())
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// If f lies in the ideal, cofactors h with f = sum(h[j] * gens[j]).
    pub fn contains_with_cofactors(&self, f: &Poly) -> Option<Vec<Poly>> {
        let (nf, cof) = self.normal_form_with_cofactors(f);
        if nf.is_zero() {
            Some(cof)
        } else {
            None
        }
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }
}
