//! Variable elimination: rounds of (choose maximal ideals, prepare, shift)
//! followed by a Bezout specialization of the shift indeterminates, plus the
//! base-case reduction to e_1 over a 0-dimensional coefficient ring.

pub mod maxideals;
pub mod prepare;
pub mod shift;

pub use maxideals::{choose_max_ideals, fp_irreducible_factors, BaseKind, MaxIdeal};
pub use prepare::{avoids_ideal, prepare_add, ElimContext, PrepareOutcome};
pub use shift::{add_to_y, shift_budget, ShiftOutcome};

use crate::enumeration::SearchCfg;
use crate::error::{Error, Result};
use crate::orthocore::{OrthoIndex, OrthoVector, Parity, Transvection, Word};
use crate::polyring::{bezout_combination, Poly, Ring};

/// Per-round budget of Proposition-level accounting:
/// r(r-1)/2 + ceil((r-1)/2) + 8r-2 (even) resp. 9r-2 (odd).
pub fn round_budget(r: usize, parity: Parity) -> usize {
    let common = r * (r - 1) / 2 + (r - 1).div_ceil(2);
    match parity {
        Parity::Even => common + 8 * r - 2,
        Parity::Odd => common + 9 * r - 2,
    }
}

/// Data retained from one elimination round.
#[derive(Clone, Debug)]
pub struct EliminationRound {
    pub ideals: Vec<MaxIdeal>,
    pub prepare: PrepareOutcome,
    pub shift: ShiftOutcome,
    pub z_var: usize,
}

/// Bezout cofactors over the base ring for the powers s_i^{m_i}.
fn base_bezout(ctx: &ElimContext, powers: &[Poly]) -> Result<Option<Vec<Poly>>> {
    bezout_combination(ctx.ring, powers)
}

/// Eliminate the variable y from an isotropic unimodular column whose entry
/// at -2 is monic in y. Returns a word over the ambient ring and the
/// resulting column, which involves neither y nor any later variable.
///
/// Rounds run until the collected s_i^{m_i} generate the unit ideal of B --
/// one round when B is a field (s is then a unit), at most delta + 1 in
/// general -- and the shift indeterminates z_i are specialized to -y t_i,
/// which evaluates the final column at y = 0.
pub fn kill_variable(
    col: &OrthoVector,
    ctx: &ElimContext,
    cfg: &SearchCfg,
) -> Result<(Word, OrthoVector, Vec<EliminationRound>)> {
    let shape = col.shape();
    let ring = ctx.ring;
    let r = shape.r;
    let y = ctx.y;
    if r < 3 {
        return Err(Error::RankTooSmall { r, required: 3 });
    }
    for v in (y + 1)..ring.nvars {
        for idx in shape.indices() {
            if col.get(idx).uses_var(v) {
                return Err(Error::ShapeMismatch(format!(
                    "column uses variable x{} past the eliminated one",
                    v + 1
                )));
            }
        }
    }
    // a column constant in y needs no work
    if shape.indices().iter().all(|i| !col.get(*i).uses_var(y)) {
        return Ok((Word::empty(), col.clone(), Vec::new()));
    }
    if !col.get(OrthoIndex(-2)).is_monic_in(y) {
        return Err(Error::NotLexMonic(format!("entry -2 is not monic in x{}", y + 1)));
    }
    if col.is_isotropic_unimodular()?.is_none() {
        return Err(Error::NotIsotropicUnimodular("kill_variable input".into()));
    }

    let delta = ctx.kind.delta();
    let mut rounds: Vec<EliminationRound> = Vec::new();
    let mut s_list: Vec<Poly> = Vec::new();
    let mut cur = col.clone();
    let mut bezout = None;
    for round_idx in 0..=delta {
        let ideals = choose_max_ideals(ctx.kind, ring, &s_list)?;
        let prepare = prepare_add(&cur, ctx, &ideals, cfg)?;
        let z_var = ring.nvars + round_idx;
        let shift = add_to_y(&prepare.column, ctx, &prepare.s, &prepare.cofactors, cfg, z_var)?;
        cur = prepare.column.clone();
        s_list.push(prepare.s.clone());
        rounds.push(EliminationRound { ideals, prepare, shift, z_var });
        let powers: Vec<Poly> = rounds
            .iter()
            .map(|rd| rd.prepare.s.pow(rd.shift.m))
            .collect();
        if let Some(t) = base_bezout(ctx, &powers)? {
            bezout = Some(t);
            break;
        }
    }
    let bezout = bezout.ok_or_else(|| Error::SearchCapExceeded {
        phase: format!("kill_variable rounds (delta = {delta})"),
        cap: delta + 1,
    })?;

    // assemble the chain over the ring extended by all z variables
    let nrounds = rounds.len();
    let ext = Ring::new(ring.coeff, ring.nvars + nrounds);
    let y_ext = Poly::variable(ext, y);
    let mut total = Word::empty();
    let mut theta_shift = Poly::zero(ext);
    for rd in &rounds {
        let lift_amb = |p: &Poly| p.extended(ext.nvars - ring.nvars);
        let shift_ring_extra = ext.nvars - (rd.z_var + 1);
        let prep_word = rd.prepare.word.map_xi(lift_amb);
        let shift_word = rd.shift.word.map_xi(|p| p.extended(shift_ring_extra));
        let (prep_word, shift_word) = if theta_shift.is_zero() {
            (prep_word, shift_word)
        } else {
            let image = y_ext.add(&theta_shift);
            let sigma = |p: &Poly| p.substitute(&[(y, image.clone())]);
            (prep_word.map_xi(sigma), shift_word.map_xi(sigma))
        };
        total = total.then(&prep_word).then(&shift_word);
        let z_i = Poly::variable(ext, rd.z_var);
        theta_shift = theta_shift.add(&lift_amb(&rd.prepare.s).pow(rd.shift.m).mul(&z_i));
    }

    // specialize z_i := -y t_i, killing y + sum(s_i^{m_i} z_i)
    let images: Vec<(usize, Poly)> = rounds
        .iter()
        .zip(bezout.iter())
        .map(|(rd, t)| {
            let t_ext = t.extended(ext.nvars - ring.nvars);
            (rd.z_var, y_ext.mul(&t_ext).neg())
        })
        .collect();
    let specialize = |p: &Poly| -> Result<Poly> {
        p.substitute(&images).truncated(ring.nvars)
    };
    let mut final_factors = Vec::with_capacity(total.len());
    for t in total.factors() {
        let xi = specialize(t.xi())?;
        final_factors.push(t.map_xi(|_| xi.clone()));
    }
    let final_word = Word::new(final_factors);

    // exact verification: the specialized word must carry the input to the
    // last prepared column evaluated at y = 0
    let expected = cur.try_map(ring, |p| Ok(p.eval_var(y, &Poly::zero(ring))))?;
    let got = final_word.apply(col)?;
    if got != expected {
        return Err(Error::Internal("specialized elimination word missed its target".into()));
    }
    for idx in shape.indices() {
        if got.get(idx).uses_var(y) {
            return Err(Error::Internal("eliminated variable survived".into()));
        }
    }
    let budget = rounds.len() * round_budget(r, shape.parity);
    if final_word.len() > budget {
        return Err(Error::Internal(format!(
            "elimination used {} transvections over {} rounds, budget {budget}",
            final_word.len(),
            rounds.len()
        )));
    }
    Ok((final_word, got, rounds))
}

/// Base budget: 8r-8 even, 9r-8 odd (first entry to 1 within 6r-6 resp.
/// 7r-7, then 2r-2 resp. 2r-1 clearing transvections).
pub fn base_budget(r: usize, parity: Parity) -> usize {
    match parity {
        Parity::Even => 8 * r - 8,
        Parity::Odd => 9 * r - 8,
    }
}

/// Reduce an isotropic unimodular column over a 0-dimensional coefficient
/// ring (a field here) to e_1. The last entry is verified to vanish, not
/// forced: once the rest is cleared, isotropy makes it zero.
pub fn base_reduce(col: &OrthoVector) -> Result<Word> {
    let shape = col.shape();
    let ring = col.ring();
    let r = shape.r;
    if !ring.coeff.is_field() {
        return Err(Error::UnsupportedRing(
            "base reduction requires a 0-dimensional (field) coefficient ring".into(),
        ));
    }
    for idx in shape.indices() {
        if !col.get(idx).is_constant() {
            return Err(Error::UnsupportedRing(
                "base reduction requires a column over the coefficient ring".into(),
            ));
        }
    }
    if col.is_isotropic_unimodular()?.is_none() {
        return Err(Error::NotIsotropicUnimodular("base_reduce input".into()));
    }

    let one = Poly::one(ring);
    let mut cur = col.clone();
    let mut word = Word::empty();
    let emit = |t: Transvection, cur: &mut OrthoVector, word: &mut Word| -> Result<()> {
        let frag = Word::new(vec![t]);
        *cur = frag.apply(cur)?;
        *word = word.then(&frag);
        Ok(())
    };

    // phase 1: make the first entry equal to 1
    if cur.get(OrthoIndex(1)) != &one {
        let mids: Vec<i32> = (2..=r as i32).chain((2..=r as i32).map(|j| -j)).collect();
        let mut pivot = mids.iter().copied().find(|&j| !cur.get(OrthoIndex(j)).is_zero());
        if pivot.is_none() {
            // create a usable entry at position 2
            if !cur.get(OrthoIndex(1)).is_zero() {
                emit(
                    Transvection::long(OrthoIndex(2), OrthoIndex(1), one.clone())?,
                    &mut cur,
                    &mut word,
                )?;
            } else if shape.is_odd() && !cur.get(OrthoIndex(0)).is_zero() {
                emit(Transvection::short(OrthoIndex(2), one.clone())?, &mut cur, &mut word)?;
            } else if !cur.get(OrthoIndex(-1)).is_zero() {
                emit(
                    Transvection::long(OrthoIndex(2), OrthoIndex(-1), one.clone())?,
                    &mut cur,
                    &mut word,
                )?;
            } else {
                return Err(Error::Internal("unimodular column with no usable entry".into()));
            }
            pivot = Some(2);
        }
        let j = pivot.unwrap();
        let bj = cur.get(OrthoIndex(j)).constant_coeff();
        let b1 = cur.get(OrthoIndex(1)).constant_coeff();
        let xi = ring.coeff.mul(
            &ring.coeff.sub(&ring.coeff.one(), &b1),
            &ring.coeff.inv(&bj).ok_or_else(|| Error::Internal("pivot not invertible".into()))?,
        );
        emit(
            Transvection::long(OrthoIndex(1), OrthoIndex(j), Poly::constant(ring, xi))?,
            &mut cur,
            &mut word,
        )?;
    }
    if cur.get(OrthoIndex(1)) != &one {
        return Err(Error::Internal("failed to normalize the first entry".into()));
    }
    let first_phase = word.len();
    let first_budget = match shape.parity {
        Parity::Even => 6 * r - 6,
        Parity::Odd => 7 * r - 7,
    };
    if first_phase > first_budget {
        return Err(Error::Internal("first-entry phase exceeded its budget".into()));
    }

    // phase 2: clear entries from 2 to -2 off b_1 = 1
    for j in (2..=r as i32).chain((2..=r as i32).rev().map(|j| -j)) {
        let v = cur.get(OrthoIndex(j)).clone();
        if !v.is_zero() {
            emit(
                Transvection::long(OrthoIndex(j), OrthoIndex(1), v.neg())?,
                &mut cur,
                &mut word,
            )?;
        }
    }
    if shape.is_odd() {
        let v0 = cur.get(OrthoIndex(0)).clone();
        if !v0.is_zero() {
            emit(Transvection::short(OrthoIndex(-1), v0)?, &mut cur, &mut word)?;
        }
    }

    // the -1 entry must vanish on its own because the column stays isotropic
    let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1))?;
    if cur != e1 {
        return Err(Error::Internal(
            "base reduction did not land on e_1 (the -1 entry failed to vanish)".into(),
        ));
    }
    if word.len() > base_budget(r, shape.parity) {
        return Err(Error::Internal("base reduction exceeded its budget".into()));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthocore::Shape;
    use crate::polyring::CoeffRing;
    use rand::{Rng, SeedableRng};

    fn random_constant_orbit(
        shape: Shape,
        ring: Ring,
        rng: &mut rand_chacha::ChaCha8Rng,
        len: usize,
    ) -> OrthoVector {
        let r = shape.r as i32;
        let p = ring.coeff.modulus() as i64;
        let mut col = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
        for _ in 0..len {
            let xi = Poly::from_i64(ring, rng.gen_range(0..p));
            let t = if shape.is_odd() && rng.gen_bool(0.3) {
                let i = loop {
                    let i = rng.gen_range(-r..=r);
                    if i != 0 {
                        break i;
                    }
                };
                Transvection::short(OrthoIndex(i), xi).unwrap()
            } else {
                let (i, j) = loop {
                    let i = rng.gen_range(-r..=r);
                    let j = rng.gen_range(-r..=r);
                    if i != 0 && j != 0 && i != j && i != -j {
                        break (i, j);
                    }
                };
                Transvection::long(OrthoIndex(i), OrthoIndex(j), xi).unwrap()
            };
            let mut next = col.clone();
            t.apply_to_vector(&mut next).unwrap();
            col = next;
        }
        col
    }

    #[test]
    fn base_reduce_e1_is_empty() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 0);
        let shape = Shape::new(3, Parity::Even);
        let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
        assert!(base_reduce(&e1).unwrap().is_empty());
    }

    #[test]
    fn base_reduce_random_orbits() {
        let ring = Ring::new(CoeffRing::prime_field(7).unwrap(), 0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
        for &parity in &[Parity::Even, Parity::Odd] {
            for r in [3usize, 4] {
                let shape = Shape::new(r, parity);
                for _ in 0..60 {
                    let col = random_constant_orbit(shape, ring, &mut rng, 10);
                    let w = base_reduce(&col).unwrap();
                    assert!(w.len() <= base_budget(r, parity));
                    let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
                    assert_eq!(w.apply(&col).unwrap(), e1);
                }
            }
        }
    }

    #[test]
    fn kill_variable_univariate_field() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Even);
        let ctx = ElimContext::new(ring, 0).unwrap();
        let cfg = SearchCfg::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(103);
        let y = Poly::variable(ring, 0);
        for trial in 0..10 {
            // orbit column with entry -2 forced monic in y
            let mut col = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
            for _ in 0..5 {
                let (i, j) = loop {
                    let i = rng.gen_range(-3..=3i32);
                    let j = rng.gen_range(-3..=3i32);
                    if i != 0 && j != 0 && i != j && i != -j {
                        break (i, j);
                    }
                };
                let xi = Poly::from_i64(ring, rng.gen_range(0..5))
                    .add(&y.mul_coeff(&ring.coeff.from_i64(rng.gen_range(0..5))));
                let t = Transvection::long(OrthoIndex(i), OrthoIndex(j), xi).unwrap();
                let mut next = col.clone();
                t.apply_to_vector(&mut next).unwrap();
                col = next;
            }
            if !col.get(OrthoIndex(-2)).is_monic_in(0) {
                let b1 = col.get(OrthoIndex(1)).clone();
                let mut fixed = false;
                for k in 0..24 {
                    let xi = y.pow(k);
                    if col.get(OrthoIndex(-2)).add(&xi.mul(&b1)).is_monic_in(0) {
                        let t = Transvection::long(OrthoIndex(-2), OrthoIndex(1), xi).unwrap();
                        let mut next = col.clone();
                        t.apply_to_vector(&mut next).unwrap();
                        col = next;
                        fixed = true;
                        break;
                    }
                }
                if !fixed {
                    continue;
                }
            }
            let (w, out, rounds) = kill_variable(&col, &ctx, &cfg)
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert!(rounds.len() <= 1, "field base needs one round");
            for idx in shape.indices() {
                assert!(!out.get(idx).uses_var(0), "y survived in {}", out.get(idx));
            }
            assert_eq!(w.apply(&col).unwrap(), out);
            assert!(w.len() <= round_budget(3, Parity::Even));
            assert!(out.is_isotropic_unimodular().unwrap().is_some());
        }
    }
}
