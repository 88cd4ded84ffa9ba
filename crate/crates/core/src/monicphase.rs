//! The monic phase: transform an isotropic unimodular column by elementary
//! transvections so that its entry at index -2 becomes lexicographically
//! monic, within 11r-7 (even) resp. 12r-8 (odd) factors.
//!
//! The phase runs the step sequence S1..S5 (S0 prepended in odd parity),
//! each step certified independently so a failure localizes:
//!
//!   S0 (odd, <= r-1 short transvections): row without b_0 becomes
//!      unimodular in the monic localization.
//!   S1 (<= r-1): row without b_1 becomes unimodular there.
//!   S2 (<= r-1): b_1 and the negative entries together reach a lex-monic
//!      combination; the additions are premultiplied by a minimal power of
//!      x1 so that a lex-monic witness survives.
//!   S3 (<= 7r-3): the hyperbolically embedded, antidiagonally transposed
//!      mu word makes the row (b_1, b_{-r}, .., b_{-2}) unimodular there.
//!   S4 (<= r-1): same for (b_1, b_{-r}, .., b_{-3}).
//!   S5 (<= r-1): b_{-2} itself becomes lex-monic.
//!
//! "Unimodular in the localization at lex-monic denominators" is exactly
//! "the ideal of the row contains a lex-monic polynomial", so every step
//! accepts through `ideal_contains_lex_monic` and records its witness.

use crate::enumeration::{poly_candidates, SearchCfg, VectorCandidates};
use crate::error::{Error, Result};
use crate::orthocore::{
    embed_gl_word, mu_word, OrthoIndex, OrthoVector, Parity, Transvection, Word,
};
use crate::polyring::{ideal_contains_lex_monic, MonicWitness, Poly};

/// Step labels as serialized in certificates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepLabel {
    S0,
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl StepLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepLabel::S0 => "S0",
            StepLabel::S1 => "S1",
            StepLabel::S2 => "S2",
            StepLabel::S3 => "S3",
            StepLabel::S4 => "S4",
            StepLabel::S5 => "S5",
        }
    }
}

/// Certificate attached to one step of the trace.
#[derive(Clone, Debug)]
pub enum StepCertificate {
    /// The step's check row admits this lex-monic combination (gens are the
    /// row entries at the snapshot, in the recorded index order).
    LocalizedUnimodular { row: Vec<OrthoIndex>, witness: MonicWitness },
    /// The target entry itself is lex-monic at the snapshot.
    LexMonicEntry(OrthoIndex),
}

/// One executed step: label, emitted word fragment, the column right after
/// the fragment, and the step certificate.
#[derive(Clone, Debug)]
pub struct MonicStep {
    pub label: StepLabel,
    pub fragment: Word,
    pub snapshot: OrthoVector,
    pub certificate: StepCertificate,
}

/// Full trace of a monic phase run. Concatenated fragments applied to the
/// input reproduce each snapshot; per-step budgets are enforced at build
/// time.
#[derive(Clone, Debug, Default)]
pub struct MonicPhaseTrace {
    pub steps: Vec<MonicStep>,
}

impl MonicPhaseTrace {
    /// Replay all fragments over the given input and check every snapshot.
    pub fn verify(&self, input: &OrthoVector) -> Result<bool> {
        let mut col = input.clone();
        for step in &self.steps {
            col = step.fragment.apply(&col)?;
            if col != step.snapshot {
                return Ok(false);
            }
            match &step.certificate {
                StepCertificate::LocalizedUnimodular { row, witness } => {
                    let gens = col.row(row);
                    if !witness.verify(&gens) {
                        return Ok(false);
                    }
                }
                StepCertificate::LexMonicEntry(idx) => {
                    if !col.get(*idx).is_lex_monic() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Per-step budget in transvections.
pub fn step_budget(label: StepLabel, r: usize) -> usize {
    match label {
        StepLabel::S3 => 7 * r - 3,
        _ => r - 1,
    }
}

/// Phase budget: 11r-7 even, 12r-8 odd.
pub fn phase_budget(r: usize, parity: Parity) -> usize {
    match parity {
        Parity::Even => 11 * r - 7,
        Parity::Odd => 12 * r - 8,
    }
}

/// Configuration for the searches inside the phase.
#[derive(Clone, Copy, Debug, Default)]
pub struct MonicPhaseCfg {
    pub search: SearchCfg,
    /// Number of leading ring variables the column actually lives in; the
    /// candidate streams draw from these. Zero means all ring variables.
    pub active_vars: usize,
}

impl MonicPhaseCfg {
    fn vars(&self, col: &OrthoVector) -> Vec<usize> {
        let n = if self.active_vars == 0 { col.ring().nvars } else { self.active_vars };
        (0..n).collect()
    }
}

fn check_row_witness(col: &OrthoVector, row: &[OrthoIndex]) -> Result<Option<MonicWitness>> {
    ideal_contains_lex_monic(col.ring(), &col.row(row))
}

/// All indices except the listed ones, in basis order.
fn row_excluding(col: &OrthoVector, excluded: &[i32]) -> Vec<OrthoIndex> {
    col.shape()
        .indices()
        .into_iter()
        .filter(|i| !excluded.contains(&i.value()))
        .collect()
}

/// Generic AFSR-style search step: try coefficient vectors c, apply the
/// transvections T_{rows[k], pivot}(s * c_k), and accept the first choice
/// making the check row unimodular in the localization.
pub fn step_unimodularize(
    col: &OrthoVector,
    rows: &[OrthoIndex],
    pivot: OrthoIndex,
    check_row: &[OrthoIndex],
    constraint: Option<&Poly>,
    cfg: &MonicPhaseCfg,
    phase: &str,
) -> Result<(Word, MonicWitness)> {
    if let Some(w) = check_row_witness(col, check_row)? {
        return Ok((Word::empty(), w));
    }
    let ring = col.ring();
    let singles = poly_candidates(ring, &cfg.vars(col), cfg.search.candidate_cap);
    for cand in VectorCandidates::new(singles, rows.len(), cfg.search.candidate_cap) {
        let mut factors = Vec::with_capacity(rows.len());
        for (row, c) in rows.iter().zip(cand.iter()) {
            let xi = match constraint {
                Some(s) => c.mul(s),
                None => c.clone(),
            };
            factors.push(Transvection::long(*row, pivot, xi)?);
        }
        let frag = Word::new(factors);
        let moved = frag.apply(col)?;
        if let Some(w) = check_row_witness(&moved, check_row)? {
            return Ok((frag, w));
        }
    }
    Err(Error::SearchCapExceeded { phase: phase.into(), cap: cfg.search.candidate_cap })
}

/// Short-root variant for the odd case: transvections T_{rows[k], 0}(c_k).
pub fn step_short_root_fix(
    col: &OrthoVector,
    cfg: &MonicPhaseCfg,
) -> Result<(Word, MonicWitness)> {
    let r = col.shape().r as i32;
    let check_row = row_excluding(col, &[0]);
    if let Some(w) = check_row_witness(col, &check_row)? {
        return Ok((Word::empty(), w));
    }
    let ring = col.ring();
    let rows: Vec<OrthoIndex> = (2..=r).map(OrthoIndex).collect();
    let singles = poly_candidates(ring, &cfg.vars(col), cfg.search.candidate_cap);
    for cand in VectorCandidates::new(singles, rows.len(), cfg.search.candidate_cap) {
        let mut factors = Vec::with_capacity(rows.len());
        for (row, c) in rows.iter().zip(cand.iter()) {
            factors.push(Transvection::short(*row, c.clone())?);
        }
        let frag = Word::new(factors);
        let moved = frag.apply(col)?;
        if let Some(w) = check_row_witness(&moved, &check_row)? {
            return Ok((frag, w));
        }
    }
    Err(Error::SearchCapExceeded { phase: "monic S0".into(), cap: cfg.search.candidate_cap })
}

/// Monic-lift step: find a lex-monic combination of the witness-row entries,
/// premultiply by the minimal power of x1 that keeps the target combination
/// lex-monic, and add it into the target entry through T_{target, i}(x1^L f_i)
/// for the transvection sources only (the remaining witness entries stay in
/// the ideal that certifies the postcondition).
pub fn step_monic_lift(
    col: &OrthoVector,
    witness_row: &[OrthoIndex],
    transvection_sources: &[OrthoIndex],
    target: OrthoIndex,
    post_row: Option<&[OrthoIndex]>,
    cfg: &MonicPhaseCfg,
    phase: &str,
) -> Result<(Word, StepCertificate)> {
    let ring = col.ring();
    let done = |c: &OrthoVector| -> Result<Option<StepCertificate>> {
        match post_row {
            Some(row) => Ok(check_row_witness(c, row)?.map(|w| {
                StepCertificate::LocalizedUnimodular { row: row.to_vec(), witness: w }
            })),
            None => Ok(if c.get(target).is_lex_monic() {
                Some(StepCertificate::LexMonicEntry(target))
            } else {
                None
            }),
        }
    };
    if let Some(cert) = done(col)? {
        return Ok((Word::empty(), cert));
    }
    let witness = check_row_witness(col, witness_row)?.ok_or_else(|| {
        Error::SearchCapExceeded { phase: format!("{phase}: no lex-monic witness"), cap: 0 }
    })?;
    // minimal L with target + x1^L * combination lex-monic
    let x1 = Poly::variable(ring, 0);
    let mut chosen = None;
    for l in 0..=cfg.search.power_cap {
        let lifted = col.get(target).add(&x1.pow(l).mul(&witness.combination));
        if lifted.is_lex_monic() {
            chosen = Some(l);
            break;
        }
    }
    let l = chosen.ok_or_else(|| Error::SearchCapExceeded {
        phase: format!("{phase}: x1 power"),
        cap: cfg.search.power_cap as usize,
    })?;
    let shift = x1.pow(l);
    let mut factors = Vec::new();
    for src in transvection_sources {
        let k = witness_row
            .iter()
            .position(|i| i == src)
            .ok_or_else(|| Error::Internal("transvection source outside witness row".into()))?;
        let f = witness.cofactors[k].mul(&shift);
        factors.push(Transvection::long(target, *src, f)?);
    }
    let frag = Word::new(factors);
    let moved = frag.apply(col)?;
    match done(&moved)? {
        Some(cert) => Ok((frag, cert)),
        None => Err(Error::Internal(format!("{phase}: lift postcondition failed"))),
    }
}

/// The mu mixing step: with a witness that (b_1, b_{-r}, .., b_{-1}) is
/// unimodular in the localization, build u from b_i g_1 over the common
/// lex-monic denominator s and search small v until the embedded word
/// H(mu(u,s,v)~) makes (b_1, b_{-r}, .., b_{-2}) unimodular there.
pub fn step_mu_mix(col: &OrthoVector, cfg: &MonicPhaseCfg) -> Result<(Word, MonicWitness)> {
    let shape = col.shape();
    let ring = col.ring();
    let r = shape.r;
    let mut check_row = vec![OrthoIndex(1)];
    for j in (2..=r as i32).rev() {
        check_row.push(OrthoIndex(-j));
    }
    if let Some(w) = check_row_witness(col, &check_row)? {
        return Ok((Word::empty(), w));
    }
    // witness row (b_1, b_{-r}, .., b_{-1})
    let mut wit_row = vec![OrthoIndex(1)];
    for j in (1..=r as i32).rev() {
        wit_row.push(OrthoIndex(-j));
    }
    let witness = check_row_witness(col, &wit_row)?.ok_or_else(|| Error::SearchCapExceeded {
        phase: "monic S3: no localization witness".into(),
        cap: 0,
    })?;
    let s = witness.combination.clone();
    let g1 = witness.cofactors[0].clone();
    // u = (u_r, .., u_2) with u_i = b_i g_1
    let u: Vec<Poly> = (2..=r as i32)
        .rev()
        .map(|i| col.get(OrthoIndex(i)).mul(&g1))
        .collect();
    let singles = poly_candidates(ring, &cfg.vars(col), cfg.search.candidate_cap);
    for v in VectorCandidates::new(singles, r - 1, cfg.search.candidate_cap) {
        let glw = mu_word(&u, &s, &v)?;
        let frag = embed_gl_word(&glw.antidiagonal_transpose(r), shape)?;
        let moved = frag.apply(col)?;
        if let Some(w) = check_row_witness(&moved, &check_row)? {
            return Ok((frag, w));
        }
    }
    Err(Error::SearchCapExceeded { phase: "monic S3".into(), cap: cfg.search.candidate_cap })
}

/// Run the monic phase. Returns the word (product order), the transformed
/// column, and the per-step trace. Requires an isotropic unimodular column
/// and r >= max(3, D+2).
pub fn make_monic(
    b: &OrthoVector,
    cfg: &MonicPhaseCfg,
) -> Result<(Word, OrthoVector, MonicPhaseTrace)> {
    let shape = b.shape();
    let ring = b.ring();
    let r = shape.r;
    let required = 3usize.max(ring.coeff.declared_dim() as usize + 2);
    if r < required {
        return Err(Error::RankTooSmall { r, required });
    }
    if b.is_isotropic_unimodular()?.is_none() {
        return Err(Error::NotIsotropicUnimodular("make_monic input".into()));
    }
    if b.get(OrthoIndex(-2)).is_lex_monic() {
        return Ok((Word::empty(), b.clone(), MonicPhaseTrace::default()));
    }

    let mut col = b.clone();
    let mut trace = MonicPhaseTrace::default();
    let mut total = Word::empty();
    let push = |label: StepLabel,
                    frag: Word,
                    cert: StepCertificate,
                    col: &mut OrthoVector,
                    total: &mut Word,
                    trace: &mut MonicPhaseTrace|
     -> Result<()> {
        if frag.len() > step_budget(label, r) {
            return Err(Error::Internal(format!(
                "step {} used {} transvections, budget {}",
                label.as_str(),
                frag.len(),
                step_budget(label, r)
            )));
        }
        *col = frag.apply(col)?;
        *total = total.then(&frag);
        trace.steps.push(MonicStep { label, fragment: frag, snapshot: col.clone(), certificate: cert });
        Ok(())
    };

    if shape.is_odd() {
        let (frag, w) = step_short_root_fix(&col, cfg)?;
        let row = row_excluding(&col, &[0]);
        push(StepLabel::S0, frag, StepCertificate::LocalizedUnimodular { row, witness: w }, &mut col, &mut total, &mut trace)?;
    }

    // S1: transvections T_{i,1}(c_i), i = 2..r; check row drops b_1 (and b_0)
    {
        let rows: Vec<OrthoIndex> = (2..=r as i32).map(OrthoIndex).collect();
        let check = row_excluding(&col, &[0, 1]);
        let (frag, w) = step_unimodularize(&col, &rows, OrthoIndex(1), &check, None, cfg, "monic S1")?;
        push(StepLabel::S1, frag, StepCertificate::LocalizedUnimodular { row: check, witness: w }, &mut col, &mut total, &mut trace)?;
    }

    // S2: lift a lex-monic combination of everything but b_1 into b_1
    {
        let witness_row = row_excluding(&col, &[0, 1]);
        let sources: Vec<OrthoIndex> = (2..=r as i32).map(OrthoIndex).collect();
        let mut post = vec![OrthoIndex(1)];
        for j in (1..=r as i32).rev() {
            post.push(OrthoIndex(-j));
        }
        let (frag, cert) = step_monic_lift(
            &col,
            &witness_row,
            &sources,
            OrthoIndex(1),
            Some(&post),
            cfg,
            "monic S2",
        )?;
        push(StepLabel::S2, frag, cert, &mut col, &mut total, &mut trace)?;
    }

    // S3: mu mixing towards (b_1, b_{-r}, .., b_{-2})
    {
        let (frag, w) = step_mu_mix(&col, cfg)?;
        let mut row = vec![OrthoIndex(1)];
        for j in (2..=r as i32).rev() {
            row.push(OrthoIndex(-j));
        }
        push(StepLabel::S3, frag, StepCertificate::LocalizedUnimodular { row, witness: w }, &mut col, &mut total, &mut trace)?;
    }

    // S4: transvections T_{i,-2}(c_i) for i = 1, -r, .., -3
    {
        let mut rows = vec![OrthoIndex(1)];
        for j in (3..=r as i32).rev() {
            rows.push(OrthoIndex(-j));
        }
        let check = rows.clone();
        let (frag, w) =
            step_unimodularize(&col, &rows, OrthoIndex(-2), &check, None, cfg, "monic S4")?;
        push(StepLabel::S4, frag, StepCertificate::LocalizedUnimodular { row: check, witness: w }, &mut col, &mut total, &mut trace)?;
    }

    // S5: lift a lex-monic combination of (b_1, b_{-r}, .., b_{-3}) into b_{-2}
    {
        let mut witness_row = vec![OrthoIndex(1)];
        for j in (3..=r as i32).rev() {
            witness_row.push(OrthoIndex(-j));
        }
        let sources = witness_row.clone();
        let (frag, cert) = step_monic_lift(
            &col,
            &witness_row,
            &sources,
            OrthoIndex(-2),
            None,
            cfg,
            "monic S5",
        )?;
        push(StepLabel::S5, frag, cert, &mut col, &mut total, &mut trace)?;
    }

    if !col.get(OrthoIndex(-2)).is_lex_monic() {
        return Err(Error::Internal("monic phase finished without a lex-monic entry".into()));
    }
    if total.len() > phase_budget(r, shape.parity) {
        return Err(Error::Internal(format!(
            "monic phase used {} transvections, budget {}",
            total.len(),
            phase_budget(r, shape.parity)
        )));
    }
    if col.quad_form() != b.quad_form() {
        return Err(Error::Internal("monic phase broke isotropy".into()));
    }
    Ok((total, col, trace))
}
