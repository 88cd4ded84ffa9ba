//! The full reduction pipeline: per-variable (make monic, normalize, kill
//! variable) rounds, the base reduction, matrix mode, the bound calculator
//! and the seeded instance generator.

use crate::elimphase::{base_reduce, kill_variable, ElimContext};
use crate::enumeration::SearchCfg;
use crate::error::{Error, Result};
use crate::monicphase::{make_monic, MonicPhaseCfg, StepLabel};
use crate::orthocore::{OrthoIndex, OrthoMatrix, OrthoVector, Parity, Shape, Transvection, Word};
use crate::polyring::{normalize_variables_in, CoeffKind, Poly, Ring, VariableChange};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reduction target: a single column or a whole matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Column,
    Matrix,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Column => "column",
            Mode::Matrix => "matrix",
        }
    }
}

/// The explicit bound N for the requested mode and parity.
///
/// Column, even:  n(11r-7) + (nD + r(r-1)/2)(r(r-1)/2 + ceil((r-1)/2) + 8r-2) + 8r-8
/// Column, odd:   n(12r-8) + (nD + r(r-1)/2)(r(r-1)/2 + ceil((r-1)/2) + 9r-2) + 9r-8
/// Matrix mode replaces the tail by 10r-10 resp. 11r-9.
pub fn compute_bound(n: u64, d: u64, r: u64, parity: Parity, mode: Mode) -> Result<u64> {
    let required = 3u64.max(d + 2);
    if r < required {
        return Err(Error::RankTooSmall { r: r as usize, required: required as usize });
    }
    let rr = r * (r - 1) / 2;
    let half = (r - 1).div_ceil(2);
    let (head, per_round, tail) = match parity {
        Parity::Even => (
            n * (11 * r - 7),
            rr + half + 8 * r - 2,
            match mode {
                Mode::Column => 8 * r - 8,
                Mode::Matrix => 10 * r - 10,
            },
        ),
        Parity::Odd => (
            n * (12 * r - 8),
            rr + half + 9 * r - 2,
            match mode {
                Mode::Column => 9 * r - 8,
                Mode::Matrix => 11 * r - 9,
            },
        ),
    };
    Ok(head + (n * d + rr) * per_round + tail)
}

/// Per-phase length accounting, serialized into certificates.
#[derive(Clone, Debug)]
pub enum PhaseRecord {
    MakeMonic { variable: usize, length: usize, steps: Vec<(StepLabel, usize)> },
    Normalize { variable: usize, k: u32 },
    KillVariable { variable: usize, length: usize, rounds: Vec<RoundRecord> },
    BaseReduce { length: usize },
    ClearFirstRow { length: usize },
}

/// Round data kept for the certificate.
#[derive(Clone, Debug)]
pub struct RoundRecord {
    pub s: String,
    pub m: u32,
    pub ideals: Vec<String>,
    pub prepare_length: usize,
    pub shift_length: usize,
}

/// Outcome of a column reduction, before certificate packaging.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    pub word: Word,
    pub output: OrthoVector,
    pub phases: Vec<PhaseRecord>,
}

/// Outcome of a matrix reduction.
#[derive(Clone, Debug)]
pub struct MatrixReduction {
    pub word: Word,
    pub output: OrthoMatrix,
    pub phases: Vec<PhaseRecord>,
}

/// Pipeline configuration: search caps shared by all phases.
#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineCfg {
    pub search: SearchCfg,
}

fn check_effective_ring(ring: Ring) -> Result<()> {
    match ring.coeff.kind() {
        CoeffKind::PrimeField => {
            if ring.nvars > 2 {
                return Err(Error::UnsupportedRing(
                    "end-to-end reduction over F_p supports at most 2 variables".into(),
                ));
            }
            Ok(())
        }
        CoeffKind::Rationals => {
            if ring.nvars > 1 {
                return Err(Error::UnsupportedRing(
                    "end-to-end reduction over Q supports at most 1 variable".into(),
                ));
            }
            Ok(())
        }
        CoeffKind::Integers => Err(Error::UnsupportedRing(
            "the coefficient ring Z is not 0-dimensional; the base case is not effective".into(),
        )),
    }
}

/// Translate a word found after the recorded variable changes back to the
/// original coordinates.
fn to_original(w: &Word, changes: &[VariableChange]) -> Result<Word> {
    let mut out = w.clone();
    for ch in changes.iter().rev() {
        let mut factors = Vec::with_capacity(out.len());
        for t in out.factors() {
            let xi = ch.backward(t.xi())?;
            factors.push(t.map_xi(|_| xi.clone()));
        }
        out = Word::new(factors);
    }
    Ok(out)
}

/// Reduce an isotropic unimodular column to e_1 within the column bound.
pub fn reduce_column(b: &OrthoVector, cfg: &PipelineCfg) -> Result<ColumnReduction> {
    let shape = b.shape();
    let ring = b.ring();
    check_effective_ring(ring)?;
    let required = 3usize.max(ring.coeff.declared_dim() as usize + 2);
    if shape.r < required {
        return Err(Error::RankTooSmall { r: shape.r, required });
    }
    if b.is_isotropic_unimodular()?.is_none() {
        return Err(Error::NotIsotropicUnimodular("reduce_column input".into()));
    }

    let mut col = b.clone();
    let mut word = Word::empty();
    let mut changes: Vec<VariableChange> = Vec::new();
    let mut phases = Vec::new();

    loop {
        // highest variable still occurring anywhere in the column
        let h = (0..ring.nvars)
            .rev()
            .find(|&v| shape.indices().iter().any(|i| col.get(*i).uses_var(v)));
        let Some(h) = h else { break };

        // make entry -2 lexicographically monic in the active variables
        let mcfg = MonicPhaseCfg { search: cfg.search, active_vars: h + 1 };
        let (w_mm, next, trace) = make_monic(&col, &mcfg)?;
        col = next;
        word = to_original(&w_mm, &changes)?.then_after(&word);
        phases.push(PhaseRecord::MakeMonic {
            variable: h,
            length: w_mm.len(),
            steps: trace.steps.iter().map(|s| (s.label, s.fragment.len())).collect(),
        });

        // change variables so the entry becomes monic in x_{h+1}
        let (change, _) = normalize_variables_in(col.get(OrthoIndex(-2)), h + 1)?;
        if !change.is_identity() {
            col = col.try_map(ring, |p| change.forward(p))?;
        }
        phases.push(PhaseRecord::Normalize { variable: h, k: change.k });
        changes.push(change);

        // eliminate the variable
        let ctx = ElimContext::new(ring, h)?;
        let (w_kv, next, rounds) = kill_variable(&col, &ctx, &cfg.search)?;
        col = next;
        word = to_original(&w_kv, &changes)?.then_after(&word);
        phases.push(PhaseRecord::KillVariable {
            variable: h,
            length: w_kv.len(),
            rounds: rounds
                .iter()
                .map(|rd| RoundRecord {
                    s: rd.prepare.s.to_string(),
                    m: rd.shift.m,
                    ideals: rd.ideals.iter().map(|i| i.describe()).collect(),
                    prepare_length: rd.prepare.word.len(),
                    shift_length: rd.shift.word.len(),
                })
                .collect(),
        });
    }

    // Stein base case over the now-constant column
    let w_base = base_reduce(&col)?;
    col = w_base.apply(&col)?;
    word = to_original(&w_base, &changes)?.then_after(&word);
    phases.push(PhaseRecord::BaseReduce { length: w_base.len() });

    // final verification against the original input
    let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1))?;
    if col != e1 {
        return Err(Error::Internal("pipeline did not land on e_1".into()));
    }
    let replay = word.apply(b)?;
    if replay != e1 {
        return Err(Error::Internal("translated word does not reduce the input".into()));
    }
    let bound = compute_bound(
        ring.nvars as u64,
        ring.coeff.declared_dim(),
        shape.r as u64,
        shape.parity,
        Mode::Column,
    )?;
    if (word.len() as u64) > bound {
        return Err(Error::Internal(format!(
            "column reduction used {} transvections, bound {bound}",
            word.len()
        )));
    }
    Ok(ColumnReduction { word, output: e1, phases })
}

/// Reduce an orthogonal matrix to the subgroup fixing e_1 and e_{-1}:
/// column-reduce the first column, then clear the middle of the last
/// column; orthogonality forces the rest.
pub fn reduce_matrix(g: &OrthoMatrix, cfg: &PipelineCfg) -> Result<MatrixReduction> {
    let shape = g.shape();
    let ring = g.ring();
    if !g.is_orthogonal()? {
        return Err(Error::NotOrthogonal("reduce_matrix input".into()));
    }
    let first = g.column(OrthoIndex(1));
    if first.is_isotropic_unimodular()?.is_none() {
        return Err(Error::NotIsotropicUnimodular(
            "first column of an orthogonal matrix must be isotropic unimodular".into(),
        ));
    }
    let col_red = reduce_column(&first, cfg)?;
    let mut word = col_red.word.clone();
    let mut phases = col_red.phases.clone();
    let mut h = word.apply_to_matrix(g)?;

    // with the first column e_1, the -1 row is automatically e_{-1}^t;
    // clear the middle entries of the last column
    let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1))?;
    if h.column(OrthoIndex(1)) != e1 {
        return Err(Error::Internal("matrix first column did not reduce".into()));
    }
    let mut clear = Vec::new();
    for idx in shape.indices() {
        let v = idx.value();
        if v == 1 || v == -1 || v == 0 {
            continue;
        }
        let entry = h.get(idx, OrthoIndex(-1)).clone();
        if !entry.is_zero() {
            clear.push(Transvection::long(idx, OrthoIndex(-1), entry.neg())?);
        }
    }
    if shape.is_odd() {
        let mid = h.get(OrthoIndex(0), OrthoIndex(-1)).clone();
        if !mid.is_zero() {
            clear.push(Transvection::short(OrthoIndex(1), mid)?);
        }
    }
    let clear_word = Word::new(clear);
    let clear_budget = match shape.parity {
        Parity::Even => 2 * shape.r - 2,
        Parity::Odd => 2 * shape.r - 1,
    };
    if clear_word.len() > clear_budget {
        return Err(Error::Internal("first-row clearing exceeded its budget".into()));
    }
    h = clear_word.apply_to_matrix(&h)?;
    word = clear_word.then_after(&word);
    phases.push(PhaseRecord::ClearFirstRow { length: clear_word.len() });

    verify_reduced_shape(&h)?;
    let bound = compute_bound(
        ring.nvars as u64,
        ring.coeff.declared_dim(),
        shape.r as u64,
        shape.parity,
        Mode::Matrix,
    )?;
    if (word.len() as u64) > bound {
        return Err(Error::Internal(format!(
            "matrix reduction used {} transvections, bound {bound}",
            word.len()
        )));
    }
    Ok(MatrixReduction { word, output: h, phases })
}

/// Check the residual block structure: rows and columns at 1 and -1 are
/// elementary, and the middle block is orthogonal of rank r-1.
pub fn verify_reduced_shape(h: &OrthoMatrix) -> Result<()> {
    let shape = h.shape();
    let ring = h.ring();
    let one = Poly::one(ring);
    for idx in shape.indices() {
        for (a, b) in [(OrthoIndex(1), idx), (idx, OrthoIndex(1)), (OrthoIndex(-1), idx), (idx, OrthoIndex(-1))] {
            let want_one = a == b;
            let entry = h.get(a, b);
            if want_one && entry != &one {
                return Err(Error::Internal("reduced matrix diagonal entry is not 1".into()));
            }
            if !want_one && (a.abs() == 1 || b.abs() == 1) && !entry.is_zero() {
                return Err(Error::Internal(format!(
                    "reduced matrix has a nonzero entry at ({a},{b})"
                )));
            }
        }
    }
    if !residual_block(h)?.is_orthogonal()? {
        return Err(Error::NotOrthogonal("residual block".into()));
    }
    Ok(())
}

/// Extract the middle block of a reduced matrix as a rank r-1 orthogonal
/// matrix (same parity).
pub fn residual_block(h: &OrthoMatrix) -> Result<OrthoMatrix> {
    let shape = h.shape();
    let ring = h.ring();
    let inner = Shape::new(shape.r - 1, shape.parity);
    let mut out = OrthoMatrix::identity(inner, ring)?;
    let shrink = |i: OrthoIndex| OrthoIndex(i.value() - i.value().signum());
    for a in shape.indices() {
        if a.abs() == 1 {
            continue;
        }
        for b in shape.indices() {
            if b.abs() == 1 {
                continue;
            }
            out.set(shrink(a), shrink(b), h.get(a, b).clone());
        }
    }
    Ok(out)
}

/// Configuration for random instance generation.
#[derive(Clone, Copy, Debug)]
pub struct InstanceCfg {
    pub length: usize,
    pub max_degree: u32,
    pub seed: u64,
}

/// A deterministic pseudo-random word of the given length, with parameters
/// of bounded degree; applying it to e_1 gives an isotropic unimodular
/// column (the orbit of e_1 stays inside IUm).
pub fn random_word(shape: Shape, ring: Ring, cfg: &InstanceCfg) -> Result<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = shape.r as i32;
    let mut factors = Vec::with_capacity(cfg.length);
    while factors.len() < cfg.length {
        let xi = random_poly(ring, cfg.max_degree, &mut rng);
        if xi.is_zero() {
            continue;
        }
        let t = if shape.is_odd() && rng.gen_bool(0.25) {
            let i = loop {
                let i = rng.gen_range(-r..=r);
                if i != 0 {
                    break i;
                }
            };
            Transvection::short(OrthoIndex(i), xi)?
        } else {
            let (i, j) = loop {
                let i = rng.gen_range(-r..=r);
                let j = rng.gen_range(-r..=r);
                if i != 0 && j != 0 && i != j && i != -j {
                    break (i, j);
                }
            };
            Transvection::long(OrthoIndex(i), OrthoIndex(j), xi)?
        };
        factors.push(t);
    }
    Ok(Word::new(factors))
}

fn random_poly(ring: Ring, max_degree: u32, rng: &mut ChaCha8Rng) -> Poly {
    let hi = match ring.coeff.kind() {
        CoeffKind::PrimeField => ring.coeff.modulus() as i64,
        _ => 4,
    };
    let mut p = Poly::from_i64(ring, rng.gen_range(0..hi));
    for v in 0..ring.nvars {
        for e in 1..=max_degree {
            if rng.gen_bool(0.5) {
                let c = ring.coeff.from_i64(rng.gen_range(0..hi));
                p = p.add(&Poly::variable(ring, v).pow(e).mul_coeff(&c));
            }
        }
    }
    p
}

/// Seeded random instance: a word applied to e_1. Always isotropic
/// unimodular; identical seeds give identical columns.
pub fn random_instance(shape: Shape, ring: Ring, cfg: &InstanceCfg) -> Result<OrthoVector> {
    let w = random_word(shape, ring, cfg)?;
    let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1))?;
    w.apply(&e1)
}

/// Seeded random orthogonal matrix: the product of a random word.
pub fn random_matrix(shape: Shape, ring: Ring, cfg: &InstanceCfg) -> Result<OrthoMatrix> {
    let w = random_word(shape, ring, cfg)?;
    w.to_matrix(shape, ring)
}

impl Word {
    /// The word equal to `later` applied after `self` -- sugar used by the
    /// pipeline to append phases.
    pub fn then_after(&self, earlier: &Word) -> Word {
        earlier.then(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::CoeffRing;

    #[test]
    fn bound_formula_instances() {
        // (n=1, D=0, r=3): 26 + 3*26 + 16 = 120 even column
        assert_eq!(compute_bound(1, 0, 3, Parity::Even, Mode::Column).unwrap(), 120);
        // odd column: 28 + 3*29 + 19 = 134
        assert_eq!(compute_bound(1, 0, 3, Parity::Odd, Mode::Column).unwrap(), 134);
        // even matrix: +10r-10 tail
        assert_eq!(compute_bound(1, 0, 3, Parity::Even, Mode::Matrix).unwrap(), 124);
        // (n=2, D=0, r=4) even column: 74 + 6*38 + 24 = 326
        assert_eq!(compute_bound(2, 0, 4, Parity::Even, Mode::Column).unwrap(), 326);
        // rank below threshold
        assert!(compute_bound(1, 0, 2, Parity::Even, Mode::Column).is_err());
        assert!(compute_bound(1, 2, 3, Parity::Even, Mode::Column).is_err());
    }

    #[test]
    fn bound_monotone_and_mode_gap() {
        for r in 3..=8u64 {
            for n in 0..=4u64 {
                for d in 0..=2u64 {
                    if r < 3.max(d + 2) {
                        continue;
                    }
                    for &parity in &[Parity::Even, Parity::Odd] {
                        let col = compute_bound(n, d, r, parity, Mode::Column).unwrap();
                        let mat = compute_bound(n, d, r, parity, Mode::Matrix).unwrap();
                        let gap = match parity {
                            Parity::Even => 2 * r - 2,
                            Parity::Odd => 2 * r - 1,
                        };
                        assert_eq!(mat - col, gap);
                        if n < 4 {
                            let next = compute_bound(n + 1, d, r, parity, Mode::Column).unwrap();
                            assert!(next >= col);
                        }
                        if d < 2 && r >= d + 3 {
                            let next = compute_bound(n, d + 1, r, parity, Mode::Column).unwrap();
                            assert!(next >= col);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_e1_is_empty() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Even);
        let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
        let red = reduce_column(&e1, &PipelineCfg::default()).unwrap();
        assert!(red.word.is_empty());
    }

    #[test]
    fn reduce_random_columns_univariate() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let cfg = PipelineCfg::default();
        for &parity in &[Parity::Even, Parity::Odd] {
            let shape = Shape::new(3, parity);
            let bound = compute_bound(1, 0, 3, parity, Mode::Column).unwrap();
            for seed in 0..8 {
                let icfg = InstanceCfg { length: 8, max_degree: 1, seed };
                let b = random_instance(shape, ring, &icfg).unwrap();
                let red = reduce_column(&b, &cfg)
                    .unwrap_or_else(|e| panic!("{parity:?} seed {seed}: {e}"));
                assert!((red.word.len() as u64) <= bound);
                let e1 = OrthoVector::basis(shape, ring, OrthoIndex(1)).unwrap();
                assert_eq!(red.word.apply(&b).unwrap(), e1);
            }
        }
    }

    #[test]
    fn reduce_random_matrix() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let shape = Shape::new(3, Parity::Even);
        let cfg = PipelineCfg::default();
        let icfg = InstanceCfg { length: 10, max_degree: 1, seed: 5 };
        let g = random_matrix(shape, ring, &icfg).unwrap();
        let red = reduce_matrix(&g, &cfg).unwrap();
        let bound = compute_bound(1, 0, 3, Parity::Even, Mode::Matrix).unwrap();
        assert!((red.word.len() as u64) <= bound);
        verify_reduced_shape(&red.output).unwrap();
        let beta = residual_block(&red.output).unwrap();
        assert!(beta.is_orthogonal().unwrap());
    }
}
