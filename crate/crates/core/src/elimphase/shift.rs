//! The shift step of an elimination round: a word over the extended ring
//! B[y][z] carrying b(y) to b(y + s^m z), of length at most
//! r(r-1)/2 + 8r-4 (even) resp. r(r-1)/2 + 9r-5 (odd).
//!
//! Construction: a GL(r) word (mu step with the v column divisible by s^k z,
//! then r-1 addition fixes) moves the top block to b^+(y + s^m z) and is
//! congruent to the identity modulo s^k z; it enters through the hyperbolic
//! embedding. Odd parity then fixes the middle entry by short transvections
//! T_{-i,0}. The bottom block differs from its target by something divisible
//! by s^k, so a Theta matrix solves the difference and enters through the
//! unipotent word. Every intermediate equality is checked exactly.

use super::prepare::ElimContext;
use crate::enumeration::SearchCfg;
use crate::error::{Error, Result};
use crate::orthocore::{
    embed_gl_word, mu_word, solve_theta_with_cofactors, GlTransvection, GlWord, OrthoIndex,
    OrthoVector, Parity, Transvection, Word,
};
use crate::polyring::{Poly, Ring};

/// Result of one shift step.
#[derive(Clone, Debug)]
pub struct ShiftOutcome {
    /// Word over the ring extended by z (variable index `z_var`); applying
    /// it to the lifted input column gives `shifted`.
    pub word: Word,
    /// The exponent m = k + 2.
    pub m: u32,
    /// The divisibility exponent used by the Theta solve.
    pub k: u32,
    /// The lifted input with y replaced by y + s^m z.
    pub shifted: OrthoVector,
}

/// Budget for the shift word.
pub fn shift_budget(r: usize, parity: Parity) -> usize {
    let base = r * (r - 1) / 2 + 8 * r - 4;
    match parity {
        Parity::Even => base,
        Parity::Odd => base + (r - 1),
    }
}

/// Build the shift word for the column (entries over B[y]) with round
/// element s in B and cofactors over (b_1, .., b_{r-1}).
pub fn add_to_y(
    col: &OrthoVector,
    ctx: &ElimContext,
    s: &Poly,
    cofactors: &[Poly],
    cfg: &SearchCfg,
    z_var: usize,
) -> Result<ShiftOutcome> {
    let shape = col.shape();
    let r = shape.r;
    let ring = ctx.ring;
    let y = ctx.y;
    if r < 3 {
        return Err(Error::RankTooSmall { r, required: 3 });
    }
    if cofactors.len() != r - 1 {
        return Err(Error::ShapeMismatch("cofactors must cover b_1 .. b_{r-1}".into()));
    }
    if s.is_zero() || !ctx.in_base(s) {
        return Err(Error::ShapeMismatch("round element must be a nonzero element of B".into()));
    }
    if z_var < ring.nvars {
        return Err(Error::ShapeMismatch("fresh variable index collides".into()));
    }
    let ext = Ring::new(ring.coeff, z_var + 1);
    let extra = ext.nvars - ring.nvars;
    let lift = |p: &Poly| p.extended(extra);
    let col_e = col.map(ext, lift)?;
    let s_e = lift(s);
    let a_e: Vec<Poly> = cofactors.iter().map(lift).collect();
    let y_e = Poly::variable(ext, y);
    let z_e = Poly::variable(ext, z_var);

    let mut last_err = Error::Internal("shift construction never attempted".into());
    for k in 1..=cfg.power_cap.min(4) {
        let m = k + 2;
        let shift_image = y_e.add(&s_e.pow(m).mul(&z_e));
        let sigma = |p: &Poly| p.substitute(&[(y, shift_image.clone())]);
        let shifted = col_e.map(ext, |p| sigma(p))?;
        match build_word(&col_e, &shifted, &s_e, &a_e, k, &sigma)? {
            Ok(word) => {
                let budget = shift_budget(r, shape.parity);
                if word.len() > budget {
                    return Err(Error::Internal(format!(
                        "shift word has {} factors, budget {budget}",
                        word.len()
                    )));
                }
                // full exactness check over B[y][z]
                let replay = word.apply(&col_e)?;
                if replay != shifted {
                    return Err(Error::Internal("shift word replay mismatch".into()));
                }
                return Ok(ShiftOutcome { word, m, k, shifted });
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// One attempt at exponent k; inner errors that should trigger a retry are
/// returned in the inner Result.
#[allow(clippy::too_many_arguments)]
fn build_word(
    col_e: &OrthoVector,
    shifted: &OrthoVector,
    s_e: &Poly,
    a_e: &[Poly],
    k: u32,
    sigma: &dyn Fn(&Poly) -> Poly,
) -> Result<std::result::Result<Word, Error>> {
    let shape = col_e.shape();
    let r = shape.r;
    let ext = col_e.ring();

    let b_plus: Vec<Poly> = (1..=r as i32).map(|i| col_e.get(OrthoIndex(i)).clone()).collect();
    let b_plus_shift: Vec<Poly> =
        (1..=r as i32).map(|i| shifted.get(OrthoIndex(i)).clone()).collect();
    let a_shift: Vec<Poly> = a_e.iter().map(|p| sigma(p)).collect();

    // mu parameters: u = (1 - b_r) a, v = (b'(y+s^m z) - b'(y)) / s^2
    let one = Poly::one(ext);
    let lead = one.sub(&b_plus[r - 1]);
    let u: Vec<Poly> = a_e.iter().map(|a| lead.mul(a)).collect();
    let s2 = s_e.mul(s_e);
    let mut v = Vec::with_capacity(r - 1);
    for i in 0..r - 1 {
        let diff = b_plus_shift[i].sub(&b_plus[i]);
        match diff.exact_div(&s2) {
            Some(q) => v.push(q),
            None => {
                return Ok(Err(Error::FactorizationFailure(
                    "top-block difference not divisible by s^2".into(),
                )))
            }
        }
    }
    let glw = match mu_word(&u, s_e, &v) {
        Ok(w) => w,
        Err(e) => return Ok(Err(e)),
    };
    let after_mu = glw.apply(&b_plus);
    for i in 0..r - 1 {
        if after_mu[i] != b_plus_shift[i] {
            return Ok(Err(Error::Internal("mu step missed the shifted top block".into())));
        }
    }
    // last-entry fix: coefficients rho * a_i(y+s^m z), divisible by s^k z
    let rho = match b_plus_shift[r - 1].sub(&after_mu[r - 1]).exact_div(s_e) {
        Some(q) => q,
        None => {
            return Ok(Err(Error::FactorizationFailure(
                "last-entry difference not divisible by s".into(),
            )))
        }
    };
    let mut fix = Vec::with_capacity(r - 1);
    for (i, a) in a_shift.iter().enumerate() {
        fix.push(GlTransvection { i: r, j: i + 1, xi: rho.mul(a) });
    }
    let gl_total = glw.then(&GlWord::new(fix));
    if gl_total.apply(&b_plus) != b_plus_shift {
        return Ok(Err(Error::Internal("GL shift word failed to move the top block".into())));
    }
    if gl_total.len() > 8 * r - 4 {
        return Ok(Err(Error::FactorizationFailure(format!(
            "GL shift word has {} factors, bound {}",
            gl_total.len(),
            8 * r - 4
        ))));
    }

    let mut word = embed_gl_word(&gl_total, shape)?;
    let mut cur = word.apply(col_e)?;

    // odd parity: create b_0(y + s^m z) by short transvections T_{-i,0}
    if shape.parity == Parity::Odd {
        let target0 = shifted.get(OrthoIndex(0)).clone();
        let diff0 = target0.sub(cur.get(OrthoIndex(0)));
        if !diff0.is_zero() {
            let c = match diff0.exact_div(s_e) {
                Some(q) => q.neg(),
                None => {
                    return Ok(Err(Error::FactorizationFailure(
                        "middle difference not divisible by s".into(),
                    )))
                }
            };
            let mut mids = Vec::with_capacity(r - 1);
            for (i, a) in a_shift.iter().enumerate().take(r - 1) {
                mids.push(Transvection::short(OrthoIndex(-((i + 1) as i32)), c.mul(a))?);
            }
            let mid_word = Word::new(mids);
            cur = mid_word.apply(&cur)?;
            word = word.then(&mid_word);
            if cur.get(OrthoIndex(0)) != &target0 {
                return Ok(Err(Error::Internal("middle fix missed its target".into())));
            }
        }
    }

    // bottom fix through Theta: delta = target bottom - current bottom
    let mut delta = Vec::with_capacity(r);
    for j in (1..=r as i32).rev() {
        delta.push(shifted.get(OrthoIndex(-j)).sub(cur.get(OrthoIndex(-j))));
    }
    let mut c_full = a_shift.clone();
    c_full.push(Poly::zero(ext));
    let theta = match solve_theta_with_cofactors(&b_plus_shift, &delta, s_e, &c_full, k) {
        Ok(t) => t,
        Err(e) => return Ok(Err(e)),
    };
    let theta_word = theta.unipotent_word(shape)?;
    let done = theta_word.apply(&cur)?;
    if &done != shifted {
        return Ok(Err(Error::Internal("bottom fix missed the shifted column".into())));
    }
    Ok(Ok(word.then(&theta_word)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimphase::maxideals::choose_max_ideals;
    use crate::elimphase::prepare::{prepare_add, ElimContext};
    use crate::orthocore::Shape;
    use crate::polyring::CoeffRing;
    use rand::{Rng, SeedableRng};

    fn orbit_with_monic(
        shape: Shape,
        ring: Ring,
        y: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> OrthoVector {
        // start from e_1, plant a monic entry at -2, then mix with
        // transvections that never touch row -2 (i != -2, j != 2)
        let r = shape.r as i32;
        let p = ring.coeff.modulus() as i64;
        let yv = Poly::variable(ring, y);
        let mut col = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
        let monic = yv.pow(2).add(&yv.mul_coeff(&ring.coeff.from_i64(rng.gen_range(0..p))));
        let plant = Transvection::long(OrthoIndex(-2), OrthoIndex(1), monic).unwrap();
        let mut next = col.clone();
        plant.apply_to_vector(&mut next).unwrap();
        col = next;
        for _ in 0..5 {
            let (i, j) = loop {
                let i = rng.gen_range(-r..=r);
                let j = rng.gen_range(-r..=r);
                if i != 0 && j != 0 && i != j && i != -j && i != -2 && j != 2 {
                    break (i, j);
                }
            };
            let xi = Poly::from_i64(ring, rng.gen_range(0..p))
                .add(&yv.mul_coeff(&ring.coeff.from_i64(rng.gen_range(0..p))));
            let t = Transvection::long(OrthoIndex(i), OrthoIndex(j), xi).unwrap();
            let mut next = col.clone();
            t.apply_to_vector(&mut next).unwrap();
            col = next;
        }
        assert!(col.get(OrthoIndex(-2)).is_monic_in(y), "test column setup failed");
        col
    }

    #[test]
    fn shift_word_is_exact_over_f5() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Even);
        let ctx = ElimContext::new(ring, 0).unwrap();
        let cfg = SearchCfg::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(83);
        for _ in 0..10 {
            let col = orbit_with_monic(shape, ring, 0, &mut rng);
            let ideals = choose_max_ideals(ctx.kind, ring, &[]).unwrap();
            let prep = prepare_add(&col, &ctx, &ideals, &cfg).unwrap();
            let out = add_to_y(&prep.column, &ctx, &prep.s, &prep.cofactors, &cfg, 1).unwrap();
            assert!(out.word.len() <= shift_budget(3, Parity::Even));
            assert_eq!(out.m, out.k + 2);
            // specializing z := 0 recovers the input
            let ext = out.shifted.ring();
            let back = out
                .shifted
                .try_map(ring, |p| p.eval_var(1, &Poly::zero(ext)).truncated(1))
                .unwrap();
            assert_eq!(back, prep.column);
        }
    }

    #[test]
    fn shift_word_odd_parity() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Odd);
        let ctx = ElimContext::new(ring, 0).unwrap();
        let cfg = SearchCfg::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(89);
        for _ in 0..6 {
            let col = orbit_with_monic(shape, ring, 0, &mut rng);
            let prep = prepare_add(&col, &ctx, &[], &cfg).unwrap();
            let out = add_to_y(&prep.column, &ctx, &prep.s, &prep.cofactors, &cfg, 1).unwrap();
            assert!(out.word.len() <= shift_budget(3, Parity::Odd));
        }
    }
}
