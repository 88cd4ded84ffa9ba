//! Preparation step of a variable-elimination round: a handful of
//! transvections (at most ceil((r-1)/2)+2, one more in odd parity) after
//! which b_1 is monic in y, b_{-2} stays monic, and the row
//! (b_1, .., b_{r-1}) is unimodular modulo every supplied maximal ideal.
//! The round element s is then the resultant res_y(b_1, f) for the proof's
//! combination f, with explicit cofactors certifying s in <b_1, .., b_{r-1}>
//! and avoidance of every ideal.

use super::maxideals::{fp_divides, fp_ext_gcd, BaseKind, MaxIdeal};
use crate::enumeration::{poly_candidates, SearchCfg};
use crate::error::{Error, Result};
use crate::orthocore::{OrthoIndex, OrthoVector, Parity, Transvection, Word};
use crate::polyring::{
    bezout_combination, resultant_with_cofactors, Coeff, CoeffRing, Poly, Ring,
};
use num_traits::Zero;

/// Context for one elimination round.
#[derive(Clone, Copy, Debug)]
pub struct ElimContext {
    /// Ambient ring of the column entries.
    pub ring: Ring,
    /// Index of the variable y being eliminated; entries use only variables
    /// 0..=y.
    pub y: usize,
    /// Classification of B = C[x_0..x_{y-1}].
    pub kind: BaseKind,
}

impl ElimContext {
    pub fn new(ring: Ring, y: usize) -> Result<Self> {
        let kind = BaseKind::classify(ring, y)?;
        Ok(ElimContext { ring, y, kind })
    }

    /// Variables of B[y], for candidate generation.
    pub fn by_vars(&self) -> Vec<usize> {
        (0..=self.y).collect()
    }

    /// Is the polynomial an element of B (no y, no later variables)?
    pub fn in_base(&self, p: &Poly) -> bool {
        (self.y..self.ring.nvars).all(|v| !p.uses_var(v))
    }
}

/// Row unimodularity modulo one maximal ideal of B, checked in B[y] with
/// the ideal generator adjoined (or coefficients reduced, over Z).
pub fn row_unimodular_mod(ctx: &ElimContext, ideal: &MaxIdeal, row: &[Poly]) -> Result<bool> {
    match ideal {
        MaxIdeal::Zero => Ok(bezout_combination(ctx.ring, row)?.is_some()),
        MaxIdeal::PolyGen(pi) => {
            let mut gens = row.to_vec();
            gens.push(pi.clone());
            Ok(bezout_combination(ctx.ring, &gens)?.is_some())
        }
        MaxIdeal::IntPrime(p) => {
            let fp = CoeffRing::prime_field(*p)?;
            let mapped = row
                .iter()
                .map(|g| g.map_coeff_ring(fp))
                .collect::<Result<Vec<_>>>()?;
            Ok(bezout_combination(Ring::new(fp, ctx.ring.nvars), &mapped)?.is_some())
        }
    }
}

fn row_unimodular_all(ctx: &ElimContext, ideals: &[MaxIdeal], row: &[Poly]) -> Result<bool> {
    for ideal in ideals {
        if !row_unimodular_mod(ctx, ideal, row)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cofactors with sum(c_j row_j) = 1 modulo the ideal, as ambient-ring
/// polynomials.
fn bezout_mod(ctx: &ElimContext, ideal: &MaxIdeal, row: &[Poly]) -> Result<Option<Vec<Poly>>> {
    match ideal {
        MaxIdeal::Zero => bezout_combination(ctx.ring, row),
        MaxIdeal::PolyGen(pi) => {
            let mut gens = row.to_vec();
            gens.push(pi.clone());
            Ok(bezout_combination(ctx.ring, &gens)?.map(|mut c| {
                c.truncate(row.len());
                c
            }))
        }
        MaxIdeal::IntPrime(p) => {
            let fp = CoeffRing::prime_field(*p)?;
            let fring = Ring::new(fp, ctx.ring.nvars);
            let mapped = row
                .iter()
                .map(|g| g.map_coeff_ring(fp))
                .collect::<Result<Vec<_>>>()?;
            match bezout_combination(fring, &mapped)? {
                Some(c) => Ok(Some(
                    c.iter()
                        .map(|g| g.map_coeff_ring(CoeffRing::integers()))
                        .collect::<Result<Vec<_>>>()?,
                )),
                None => Ok(None),
            }
        }
    }
}

/// Does s avoid (lie outside) the maximal ideal?
pub fn avoids_ideal(ctx: &ElimContext, ideal: &MaxIdeal, s: &Poly) -> Result<bool> {
    match ideal {
        MaxIdeal::Zero => Ok(!s.is_zero()),
        MaxIdeal::PolyGen(pi) => {
            let t = match ctx.kind {
                BaseKind::FpUnivariate { t } => t,
                _ => return Err(Error::Internal("polynomial ideal outside F_p[t]".into())),
            };
            Ok(!fp_divides(pi, s, t))
        }
        MaxIdeal::IntPrime(p) => {
            if !s.is_constant() {
                return Err(Error::Internal("integer avoidance of a nonconstant".into()));
            }
            match s.constant_coeff() {
                Coeff::Int(v) => Ok(!(v % p).is_zero()),
                _ => Err(Error::Internal("integer coefficient expected".into())),
            }
        }
    }
}

/// CRT multipliers lambda_i = 1 mod P_i, 0 mod P_j (i != j).
fn crt_multipliers(ctx: &ElimContext, ideals: &[MaxIdeal]) -> Result<Vec<Poly>> {
    if ideals.len() <= 1 {
        return Ok(vec![Poly::one(ctx.ring)]);
    }
    let mut out = Vec::with_capacity(ideals.len());
    for (i, ideal) in ideals.iter().enumerate() {
        match ideal {
            MaxIdeal::Zero => {
                return Err(Error::Internal("zero ideal cannot appear with others".into()))
            }
            MaxIdeal::IntPrime(p) => {
                let mut m = 1i64;
                for (j, other) in ideals.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let MaxIdeal::IntPrime(q) = other else {
                        return Err(Error::Internal("mixed ideal kinds".into()));
                    };
                    m *= *q as i64;
                }
                // inverse of m modulo p
                let mp = m.rem_euclid(*p as i64) as u64;
                let mut inv = 1u64;
                let mut base = mp % p;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        inv = inv * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                out.push(Poly::from_i64(ctx.ring, m * inv as i64));
            }
            MaxIdeal::PolyGen(pi) => {
                let t = match ctx.kind {
                    BaseKind::FpUnivariate { t } => t,
                    _ => return Err(Error::Internal("polynomial ideal outside F_p[t]".into())),
                };
                let mut m = Poly::one(ctx.ring);
                for (j, other) in ideals.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let MaxIdeal::PolyGen(q) = other else {
                        return Err(Error::Internal("mixed ideal kinds".into()));
                    };
                    m = m.mul(q);
                }
                let (g, u, _) = fp_ext_gcd(&m, pi, t)?;
                if !g.is_one() {
                    return Err(Error::Internal("CRT moduli are not coprime".into()));
                }
                out.push(m.mul(&u));
            }
        }
    }
    Ok(out)
}

/// One prepared round: the emitted word, the column after it, the element
/// s in B, and cofactors over (b_1, .., b_{r-1}) at the post column.
#[derive(Clone, Debug)]
pub struct PrepareOutcome {
    pub word: Word,
    pub column: OrthoVector,
    pub s: Poly,
    pub cofactors: Vec<Poly>,
}

/// Look for a low-height element of B inside the row ideal that avoids all
/// the maximal ideals: cheap round elements keep the later substitution
/// y -> y + s^m z small. Certified by Groebner (or lattice) cofactors.
fn small_round_element(
    row: &[Poly],
    ctx: &ElimContext,
    ideals: &[MaxIdeal],
    cfg: &SearchCfg,
) -> Result<Option<(Poly, Vec<Poly>)>> {
    let ring = ctx.ring;
    let base_vars: Vec<usize> = (0..ctx.y).collect();
    let membership: Box<dyn Fn(&Poly) -> Result<Option<Vec<Poly>>>> = if ring.coeff.is_field() {
        let gb = crate::polyring::groebner_basis_in(ring, row)?;
        Box::new(move |sigma: &Poly| Ok(gb.contains_with_cofactors(sigma)))
    } else {
        let row = row.to_vec();
        Box::new(move |sigma: &Poly| crate::polyring::zlattice::z_contains(&row, sigma, ring))
    };
    let cap = cfg.candidate_cap.min(200);
    for sigma in crate::enumeration::poly_candidates(ring, &base_vars, cap) {
        if sigma.is_zero() {
            continue;
        }
        let mut ok = true;
        for ideal in ideals {
            if !avoids_ideal(ctx, ideal, &sigma)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        if let Some(cof) = membership(&sigma)? {
            return Ok(Some((sigma, cof)));
        }
    }
    Ok(None)
}

/// The proof's round element: s = res_y(b_1, f) for the CRT-combined
/// coprimality witness f, taken modulo b_1 first to keep the Sylvester
/// matrix small (reducing f by b_1 leaves the ideal <b_1, f> and the
/// coprimality modulo every P_i unchanged).
fn resultant_round_element(
    row: &[Poly],
    ctx: &ElimContext,
    ideals: &[MaxIdeal],
    y: usize,
) -> Result<(Poly, Vec<Poly>)> {
    let ring = ctx.ring;
    let b1 = row[0].clone();
    let len = row.len();
    let mut per_ideal = Vec::new();
    for ideal in ideals {
        let c = bezout_mod(ctx, ideal, row)?.ok_or_else(|| {
            Error::Internal(format!(
                "prepared row is not unimodular modulo {}",
                ideal.describe()
            ))
        })?;
        per_ideal.push(c);
    }
    let lambdas = crt_multipliers(ctx, ideals)?;
    let mut c = vec![Poly::zero(ring); len];
    for (lambda, ci) in lambdas.iter().zip(per_ideal.iter()) {
        for (acc, cj) in c.iter_mut().zip(ci.iter()) {
            *acc = acc.add(&lambda.mul(cj));
        }
    }
    let mut f = Poly::zero(ring);
    for j in 1..len {
        f = f.add(&c[j].mul(&row[j]));
    }
    // f mod b_1: same ideal, same coprimality, smaller degree in y
    let (q_div, f_red) = f.monic_div_rem_in(&b1, y);
    let (s, p_cof, q_cof) = resultant_with_cofactors(&b1, &f_red, y)?;
    // s = p b_1 + q f_red = (p - q q_div) b_1 + q f
    let mut cof = vec![Poly::zero(ring); len];
    cof[0] = p_cof.sub(&q_cof.mul(&q_div));
    for j in 1..len {
        cof[j] = q_cof.mul(&c[j]);
    }
    Ok((s, cof))
}

fn row_excluding(col: &OrthoVector, excluded: &[i32]) -> Vec<Poly> {
    col.shape()
        .indices()
        .into_iter()
        .filter(|i| !excluded.contains(&i.value()))
        .map(|i| col.get(i).clone())
        .collect()
}

fn positives_and_tail(col: &OrthoVector, from: i32) -> Vec<Poly> {
    // (b_1, .., b_r, b_{-r}, .., b_{-from}); empty tail when from > r
    let r = col.shape().r as i32;
    let mut out: Vec<Poly> = (1..=r).map(|i| col.get(OrthoIndex(i)).clone()).collect();
    let mut j = -r;
    while j <= -from {
        out.push(col.get(OrthoIndex(j)).clone());
        j += 1;
    }
    out
}

/// Search a single transvection parameter so that the accept row becomes
/// unimodular modulo every ideal.
fn search_single<F>(
    col: &OrthoVector,
    ctx: &ElimContext,
    ideals: &[MaxIdeal],
    cfg: &SearchCfg,
    phase: &str,
    build: F,
    accept: impl Fn(&OrthoVector) -> Vec<Poly>,
) -> Result<(Word, OrthoVector)>
where
    F: Fn(&Poly) -> Result<Option<Transvection>>,
{
    for cand in poly_candidates(ctx.ring, &ctx.by_vars(), cfg.candidate_cap) {
        let Some(t) = build(&cand)? else { continue };
        let frag = Word::new(vec![t]);
        let moved = frag.apply(col)?;
        if row_unimodular_all(ctx, ideals, &accept(&moved))? {
            return Ok((frag, moved));
        }
    }
    Err(Error::SearchCapExceeded { phase: phase.into(), cap: cfg.candidate_cap })
}

/// Run the preparation steps and extract (s, cofactors).
///
/// Requires r >= 3, b_{-2} monic in y, and an ideal list from
/// `choose_max_ideals` (an empty list, for a field base, is treated as the
/// zero ideal).
pub fn prepare_add(
    col: &OrthoVector,
    ctx: &ElimContext,
    ideals: &[MaxIdeal],
    cfg: &SearchCfg,
) -> Result<PrepareOutcome> {
    let shape = col.shape();
    let ring = ctx.ring;
    let r = shape.r;
    let y = ctx.y;
    if r < 3 {
        return Err(Error::RankTooSmall { r, required: 3 });
    }
    if !col.get(OrthoIndex(-2)).is_monic_in(y) {
        return Err(Error::NotLexMonic(format!("entry -2 is not monic in x{}", y + 1)));
    }
    let ideals: Vec<MaxIdeal> = if ideals.is_empty() {
        vec![MaxIdeal::Zero]
    } else {
        ideals.to_vec()
    };

    let mut cur = col.clone();
    let mut total = Word::empty();
    let budget = (r - 1).div_ceil(2) + 2 + usize::from(shape.parity == Parity::Odd);

    // Step 0 (odd only): one short transvection T_{1,0}
    if shape.parity == Parity::Odd {
        let already = row_unimodular_all(&ctx.clone(), &ideals, &row_excluding(&cur, &[0]))?;
        if !already {
            let (frag, moved) = search_single(
                &cur,
                ctx,
                &ideals,
                cfg,
                "prepare S0",
                |xi| Ok(Some(Transvection::short(OrthoIndex(1), xi.clone())?)),
                |c| row_excluding(c, &[0]),
            )?;
            total = total.then(&frag);
            cur = moved;
        }
    }

    // Step 1: T_{1,-2}(xi~ + y^K b_{-2}) makes b_1 monic in y and the row
    // without b_{-1} unimodular
    {
        let already = cur.get(OrthoIndex(1)).is_monic_in(y)
            && row_unimodular_all(ctx, &ideals, &row_excluding(&cur, &[0, -1]))?;
        if !already {
            let bm2 = cur.get(OrthoIndex(-2)).clone();
            let b1 = cur.get(OrthoIndex(1)).clone();
            let yvar = Poly::variable(ring, y);
            let power_cap = cfg.power_cap;
            let (frag, moved) = search_single(
                &cur,
                ctx,
                &ideals,
                cfg,
                "prepare S1",
                |xi_tilde| {
                    // minimal K making b_1 + (xi~ + y^K b_{-2}) b_{-2} monic in y
                    for k in 0..=power_cap {
                        let xi = xi_tilde.add(&yvar.pow(k).mul(&bm2));
                        if b1.add(&xi.mul(&bm2)).is_monic_in(y) {
                            return Ok(Some(Transvection::long(
                                OrthoIndex(1),
                                OrthoIndex(-2),
                                xi,
                            )?));
                        }
                    }
                    Ok(None)
                },
                |c| row_excluding(c, &[0, -1]),
            )?;
            total = total.then(&frag);
            cur = moved;
        }
    }
    if !cur.get(OrthoIndex(1)).is_monic_in(y) {
        return Err(Error::Internal("prepare S1 left b_1 non-monic".into()));
    }

    // Step 2 (r even only): T_{-3,-2}
    if r % 2 == 0 {
        let already = row_unimodular_all(ctx, &ideals, &row_excluding(&cur, &[0, -1, -2]))?;
        if !already {
            let (frag, moved) = search_single(
                &cur,
                ctx,
                &ideals,
                cfg,
                "prepare S2",
                |xi| Ok(Some(Transvection::long(OrthoIndex(-3), OrthoIndex(-2), xi.clone())?)),
                |c| row_excluding(c, &[0, -1, -2]),
            )?;
            total = total.then(&frag);
            cur = moved;
        }
    }

    // Step 3: pairs of exclusions via T_{i-1, -(i-2)}
    {
        let start = if r % 2 == 0 { 5 } else { 4 };
        let mut i = start;
        while i <= r + 1 {
            let from = i as i32;
            let already = row_unimodular_all(ctx, &ideals, &positives_and_tail(&cur, from))?;
            if !already {
                let (frag, moved) = search_single(
                    &cur,
                    ctx,
                    &ideals,
                    cfg,
                    &format!("prepare S3 (i={i})"),
                    |xi| {
                        Ok(Some(Transvection::long(
                            OrthoIndex((i - 1) as i32),
                            OrthoIndex(-((i - 2) as i32)),
                            xi.clone(),
                        )?))
                    },
                    |c| positives_and_tail(c, from),
                )?;
                total = total.then(&frag);
                cur = moved;
            }
            i += 2;
        }
    }

    // Step 4: T_{r-1, r} towards (b_1, .., b_{r-1})
    let first_rows: Vec<Poly> = (1..r as i32)
        .map(|i| cur.get(OrthoIndex(i)).clone())
        .collect();
    {
        let already = row_unimodular_all(ctx, &ideals, &first_rows)?;
        if !already {
            let (frag, moved) = search_single(
                &cur,
                ctx,
                &ideals,
                cfg,
                "prepare S4",
                |xi| {
                    Ok(Some(Transvection::long(
                        OrthoIndex((r - 1) as i32),
                        OrthoIndex(r as i32),
                        xi.clone(),
                    )?))
                },
                |c| (1..r as i32).map(|i| c.get(OrthoIndex(i)).clone()).collect(),
            )?;
            total = total.then(&frag);
            cur = moved;
        }
    }

    if total.len() > budget {
        return Err(Error::Internal(format!(
            "prepare used {} transvections, budget {budget}",
            total.len()
        )));
    }
    if !cur.get(OrthoIndex(-2)).is_monic_in(y) {
        return Err(Error::Internal("prepare broke monicity of b_{-2}".into()));
    }

    // extract s with certified cofactors
    let row: Vec<Poly> = (1..r as i32).map(|i| cur.get(OrthoIndex(i)).clone()).collect();
    let b1 = row[0].clone();
    let (s, cofactors) = if b1.deg_in(y) == 0 {
        // b_1 monic of y-degree 0 is the constant 1
        if !b1.is_one() {
            return Err(Error::Internal("monic degree-0 b_1 is not 1".into()));
        }
        let mut cof = vec![Poly::zero(ring); r - 1];
        cof[0] = Poly::one(ring);
        (Poly::one(ring), cof)
    } else if let Some(found) = small_round_element(&row, ctx, &ideals, cfg)? {
        found
    } else {
        resultant_round_element(&row, ctx, &ideals, y)?
    };

    // certificates: s in B, s = sum(cofactors_j b_j), avoidance per ideal
    if !ctx.in_base(&s) {
        return Err(Error::Internal("round element s is not in the base ring".into()));
    }
    let mut acc = Poly::zero(ring);
    for (a, b) in cofactors.iter().zip(row.iter()) {
        acc = acc.add(&a.mul(b));
    }
    if acc != s {
        return Err(Error::Internal("cofactor identity for s failed".into()));
    }
    for ideal in &ideals {
        if !avoids_ideal(ctx, ideal, &s)? {
            return Err(Error::Internal(format!(
                "round element does not avoid {}",
                ideal.describe()
            )));
        }
    }
    Ok(PrepareOutcome { word: total, column: cur, s, cofactors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimphase::maxideals::choose_max_ideals;
    use crate::orthocore::Shape;
    use crate::polyring::CoeffRing;
    use rand::{Rng, SeedableRng};

    fn orbit_column_with_monic(
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
    fn field_base_round() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Even);
        let ctx = ElimContext::new(ring, 0).unwrap();
        let cfg = SearchCfg::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..15 {
            let col = orbit_column_with_monic(shape, ring, 0, &mut rng);
            let ideals = choose_max_ideals(ctx.kind, ring, &[]).unwrap();
            let out = prepare_add(&col, &ctx, &ideals, &cfg).unwrap();
            assert!(out.word.len() <= 3);
            assert!(out.column.get(OrthoIndex(1)).is_monic_in(0));
            assert!(!out.s.is_zero());
            assert!(ctx.in_base(&out.s));
            // replay the word
            assert_eq!(out.word.apply(&col).unwrap(), out.column);
        }
    }

    #[test]
    fn fp_t_base_round() {
        // F_7[t][y]: rank 4 even, eliminate y = variable 1
        let ring = Ring::new(CoeffRing::prime_field(7).unwrap(), 2);
        let shape = Shape::new(4, Parity::Even);
        let ctx = ElimContext::new(ring, 1).unwrap();
        let cfg = SearchCfg::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(73);
        let col = orbit_column_with_monic(shape, ring, 1, &mut rng);
        let ideals = choose_max_ideals(ctx.kind, ring, &[]).unwrap();
        let out = prepare_add(&col, &ctx, &ideals, &cfg).unwrap();
        assert!(out.word.len() <= 4);
        assert!(out.column.get(OrthoIndex(1)).is_monic_in(1));
        assert!(ctx.in_base(&out.s));
        // avoidance of (t) means s is nonzero mod t
        assert!(avoids_ideal(&ctx, &ideals[0], &out.s).unwrap());
    }

    #[test]
    fn odd_parity_budget() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Odd);
        let ctx = ElimContext::new(ring, 0).unwrap();
        let cfg = SearchCfg::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(79);
        for _ in 0..10 {
            let col = orbit_column_with_monic(shape, ring, 0, &mut rng);
            let out = prepare_add(&col, &ctx, &[], &cfg).unwrap();
            assert!(out.word.len() <= 4, "odd budget is ceil((r-1)/2)+3 = 4");
        }
    }
}
