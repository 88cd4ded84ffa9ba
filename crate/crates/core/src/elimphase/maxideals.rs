//! Effective maximal-ideal collections for the variable-elimination rounds.
//!
//! The induction over the Bass-Serre dimension needs, per round, a finite
//! set of maximal ideals of B such that avoiding them drops the dimension.
//! Effective base rings are fields (empty collection; avoidance means
//! nonzero, hence a unit), the integers and F_p[t] (one ideal in the first
//! round, then the maximal ideals containing the tracked elements, computed
//! by integer or univariate polynomial factorization).

use crate::error::{Error, Result};
use crate::polyring::{Coeff, CoeffKind, Monomial, Poly, Ring};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Classification of the base ring B = C[vars below y].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseKind {
    /// B is a field (F_p or Q): Bass-Serre dimension 0.
    Field,
    /// B = Z: dimension 1.
    Integers,
    /// B = F_p[t] with t the given ambient variable: dimension 1.
    FpUnivariate { t: usize },
}

impl BaseKind {
    pub fn delta(&self) -> usize {
        match self {
            BaseKind::Field => 0,
            BaseKind::Integers | BaseKind::FpUnivariate { .. } => 1,
        }
    }

    /// Classify the base ring of C[x_0..x_{y-1}] for eliminating variable y.
    pub fn classify(ring: Ring, y: usize) -> Result<BaseKind> {
        match (ring.coeff.kind(), y) {
            (CoeffKind::PrimeField | CoeffKind::Rationals, 0) => Ok(BaseKind::Field),
            (CoeffKind::Integers, 0) => Ok(BaseKind::Integers),
            (CoeffKind::PrimeField, 1) => Ok(BaseKind::FpUnivariate { t: 0 }),
            _ => Err(Error::UnsupportedRing(format!(
                "base ring {} with {} polynomial variables is not effective here",
                ring.coeff, y
            ))),
        }
    }
}

/// A maximal ideal of the base ring, as generator data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MaxIdeal {
    /// The zero ideal of a field.
    Zero,
    /// (p) in the integers.
    IntPrime(u64),
    /// (pi(t)) in F_p[t]; the generator is irreducible and lives in the
    /// ambient ring using only the variable t.
    PolyGen(Poly),
}

impl MaxIdeal {
    pub fn describe(&self) -> String {
        match self {
            MaxIdeal::Zero => "(0)".into(),
            MaxIdeal::IntPrime(p) => format!("({p})"),
            MaxIdeal::PolyGen(g) => format!("({g})"),
        }
    }
}

// ---- dense univariate helpers over F_p ----

fn to_dense(p: &Poly, var: usize) -> Vec<u64> {
    let d = p.deg_in(var) as usize;
    let mut out = vec![0u64; d + 1];
    for (m, c) in p.terms() {
        let Coeff::Fp(v) = c else { unreachable!("F_p poly expected") };
        out[m.exponent(var) as usize] = *v;
    }
    out
}

fn from_dense(ring: Ring, var: usize, coeffs: &[u64]) -> Poly {
    let mut p = Poly::zero(ring);
    for (e, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut expo = vec![0u32; ring.nvars];
        expo[var] = e as u32;
        p = p.add(&Poly::monomial(ring, Monomial::from_exponents(&expo), ring.coeff.from_i64(c as i64)));
    }
    p
}

fn dense_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn dense_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn dense_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    dense_trim(&mut r);
    let db = dense_deg(b).expect("division by zero polynomial");
    let lb_inv = mod_inv(b[db], p);
    while let Some(dr) = dense_deg(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lb_inv % p;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            let pos = dr - db + i;
            r[pos] = (r[pos] + p - sub) % p;
        }
        dense_trim(&mut r);
    }
    r
}

fn dense_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    dense_trim(&mut x);
    dense_trim(&mut y);
    while !y.is_empty() {
        let r = dense_rem(&x, &y, p);
        x = y;
        y = r;
    }
    // make monic
    if let Some(d) = dense_deg(&x) {
        let inv = mod_inv(x[d], p);
        for c in x.iter_mut() {
            *c = *c * inv % p;
        }
    }
    x
}

fn dense_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn dense_derivative(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() - 1];
    for (e, &c) in a.iter().enumerate().skip(1) {
        out[e - 1] = c * (e as u64 % p) % p;
    }
    dense_trim(&mut out);
    out
}

fn dense_exact_div(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    dense_trim(&mut r);
    let db = dense_deg(b).expect("division by zero");
    let lb_inv = mod_inv(b[db], p);
    let mut q = vec![0u64; r.len()];
    while let Some(dr) = dense_deg(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lb_inv % p;
        q[dr - db] = factor;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            let pos = dr - db + i;
            r[pos] = (r[pos] + p - sub) % p;
        }
        dense_trim(&mut r);
    }
    assert!(r.is_empty(), "exact division had a remainder");
    dense_trim(&mut q);
    q
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// x^e mod f, dense.
fn dense_pow_x_mod(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = dense_rem(&[0, 1], f, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = dense_rem(&dense_mul(&acc, &base, p), f, p);
        }
        base = dense_rem(&dense_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn berlekamp_squarefree(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = dense_deg(f).expect("nonzero");
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Q matrix: row i = x^{i p} mod f
    let mut q = vec![vec![0u64; n]; n];
    for (i, row) in q.iter_mut().enumerate() {
        let xe = dense_pow_x_mod(i as u64 * p, f, p);
        for (j, c) in xe.iter().enumerate() {
            row[j] = *c;
        }
    }
    // B = Q - I, kernel over F_p (row reduce the transpose)
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    // solve v B = 0 for row vectors v <=> B^t v^t = 0
    let mut mat = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            mat[i][j] = q[j][i];
        }
    }
    let kernel = nullspace(&mat, p);
    if kernel.len() <= 1 {
        return vec![f.to_vec()];
    }
    // split with a non-constant kernel element
    let v = kernel
        .iter()
        .find(|v| dense_deg(v).map(|d| d >= 1).unwrap_or(false))
        .expect("kernel dimension > 1 has a nonconstant element");
    for c in 0..p {
        let mut shifted = v.clone();
        if shifted.is_empty() {
            shifted = vec![0];
        }
        shifted[0] = (shifted[0] + p - c) % p;
        dense_trim(&mut shifted);
        if shifted.is_empty() {
            continue;
        }
        let g = dense_gcd(f, &shifted, p);
        let dg = dense_deg(&g).unwrap_or(0);
        if dg >= 1 && dg < n {
            let h = dense_exact_div(f, &g, p);
            let mut out = berlekamp_squarefree(&g, p);
            out.extend(berlekamp_squarefree(&h, p));
            return out;
        }
    }
    vec![f.to_vec()]
}

fn nullspace(mat: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut m: Vec<Vec<u64>> = mat.to_vec();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, pr);
        let inv = mod_inv(m[rank][col], p);
        for c in 0..cols {
            m[rank][c] = m[rank][c] * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..cols {
                    let sub = factor * m[rank][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (rank_row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - m[rank_row][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Monic irreducible factors (distinct) of a nonzero univariate f over F_p.
pub fn fp_irreducible_factors(f: &Poly, var: usize) -> Result<Vec<Poly>> {
    let ring = f.ring();
    let p = ring.coeff.modulus();
    if p == 0 {
        return Err(Error::UnsupportedRing("factorization needs F_p coefficients".into()));
    }
    for v in 0..ring.nvars {
        if v != var && f.uses_var(v) {
            return Err(Error::UnsupportedRing("factorization input is not univariate".into()));
        }
    }
    let mut dense = to_dense(f, var);
    dense_trim(&mut dense);
    if dense.is_empty() {
        return Err(Error::UnsupportedRing("cannot factor the zero polynomial".into()));
    }
    // make monic, then strip repeated factors via gcd with the derivative
    let d = dense_deg(&dense).unwrap();
    let inv = mod_inv(dense[d], p);
    for c in dense.iter_mut() {
        *c = *c * inv % p;
    }
    let mut factors: Vec<Vec<u64>> = Vec::new();
    let mut work = dense;
    loop {
        let Some(dw) = dense_deg(&work) else { break };
        if dw == 0 {
            break;
        }
        let der = dense_derivative(&work, p);
        let sqfree = if der.is_empty() {
            // perfect p-th power: x^p -> x substitution
            let mut reduced = Vec::new();
            for (e, &c) in work.iter().enumerate() {
                if c != 0 {
                    let q = e / p as usize;
                    if reduced.len() <= q {
                        reduced.resize(q + 1, 0);
                    }
                    reduced[q] = c;
                }
            }
            work = reduced;
            continue;
        } else {
            let g = dense_gcd(&work, &der, p);
            dense_exact_div(&work, &g, p)
        };
        for irr in berlekamp_squarefree(&sqfree, p) {
            if !factors.contains(&irr) {
                factors.push(irr);
            }
        }
        work = dense_exact_div(&work, &sqfree, p);
    }
    Ok(factors.into_iter().map(|f| from_dense(ring, var, &f)).collect())
}

/// Does pi divide s in F_p[t]? Both must use only the variable `var`.
pub fn fp_divides(pi: &Poly, s: &Poly, var: usize) -> bool {
    let p = pi.ring().coeff.modulus();
    if s.is_zero() {
        return true;
    }
    let rem = dense_rem(&to_dense(s, var), &to_dense(pi, var), p);
    rem.is_empty()
}

/// Extended euclid in F_p[t]: returns (g, u, v) with u*a + v*b = g and g
/// monic (or zero). Inputs and outputs use only the variable `var`.
pub fn fp_ext_gcd(a: &Poly, b: &Poly, var: usize) -> Result<(Poly, Poly, Poly)> {
    let ring = a.ring();
    let p = ring.coeff.modulus();
    if p == 0 {
        return Err(Error::UnsupportedRing("extended gcd needs F_p coefficients".into()));
    }
    let mut r0 = to_dense(a, var);
    let mut r1 = to_dense(b, var);
    dense_trim(&mut r0);
    dense_trim(&mut r1);
    let (mut u0, mut u1) = (vec![1u64], Vec::new());
    let (mut v0, mut v1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        // r0 = q r1 + rem
        let (q, rem) = dense_div_rem(&r0, &r1, p);
        let next_u = dense_sub(&u0, &dense_mul(&q, &u1, p), p);
        let next_v = dense_sub(&v0, &dense_mul(&q, &v1, p), p);
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = next_u;
        v0 = v1;
        v1 = next_v;
    }
    // normalize to a monic gcd
    if let Some(d) = dense_deg(&r0) {
        let inv = mod_inv(r0[d], p);
        for c in r0.iter_mut() {
            *c = *c * inv % p;
        }
        for c in u0.iter_mut() {
            *c = *c * inv % p;
        }
        for c in v0.iter_mut() {
            *c = *c * inv % p;
        }
    }
    Ok((
        from_dense(ring, var, &r0),
        from_dense(ring, var, &u0),
        from_dense(ring, var, &v0),
    ))
}

fn dense_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    dense_trim(&mut out);
    out
}

fn dense_div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    dense_trim(&mut r);
    let db = dense_deg(b).expect("division by zero");
    let lb_inv = mod_inv(b[db], p);
    let mut q = vec![0u64; r.len().max(1)];
    while let Some(dr) = dense_deg(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lb_inv % p;
        q[dr - db] = factor;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            let pos = dr - db + i;
            r[pos] = (r[pos] + p - sub) % p;
        }
        dense_trim(&mut r);
    }
    dense_trim(&mut q);
    (q, r)
}

fn int_value(p: &Poly) -> Result<BigInt> {
    if !p.is_constant() {
        return Err(Error::UnsupportedRing("expected an integer constant".into()));
    }
    match p.constant_coeff() {
        Coeff::Int(v) => Ok(v),
        _ => Err(Error::UnsupportedRing("expected integer coefficients".into())),
    }
}

fn trial_division(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u64);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.to_u64_digits().1[0]);
            while (&n % &d).is_zero() {
                n = &n / &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        let digits = n.to_u64_digits().1;
        if digits.len() > 1 {
            // outside the supported range; the tracked contents stay small
            // in practice, so report rather than mis-factor
            return out;
        }
        out.push(digits[0]);
    }
    out
}

/// The finite maximal-ideal collection for one elimination round.
///
/// With nothing tracked: a field contributes the empty list (any nonzero
/// element is a unit), while Z and F_p[t] contribute one arbitrary maximal
/// ideal, which forces the chosen element to be nonzero and hence drops the
/// Bass-Serre dimension. With tracked elements: the maximal ideals
/// containing all of them, from factorization of the gcd.
pub fn choose_max_ideals(kind: BaseKind, ring: Ring, tracked: &[Poly]) -> Result<Vec<MaxIdeal>> {
    match kind {
        BaseKind::Field => Ok(Vec::new()),
        BaseKind::Integers => {
            if tracked.is_empty() {
                return Ok(vec![MaxIdeal::IntPrime(2)]);
            }
            let mut g = BigInt::zero();
            for t in tracked {
                g = num_integer::Integer::gcd(&g, &int_value(t)?);
            }
            if g.is_zero() {
                return Err(Error::Internal("tracked integer content is zero".into()));
            }
            Ok(trial_division(&g).into_iter().map(MaxIdeal::IntPrime).collect())
        }
        BaseKind::FpUnivariate { t } => {
            if tracked.is_empty() {
                return Ok(vec![MaxIdeal::PolyGen(Poly::variable(ring, t))]);
            }
            let p = ring.coeff.modulus();
            let mut g: Vec<u64> = Vec::new();
            for trk in tracked {
                for v in 0..ring.nvars {
                    if v != t && trk.uses_var(v) {
                        return Err(Error::UnsupportedRing(
                            "tracked element is not in the base ring".into(),
                        ));
                    }
                }
                g = if g.is_empty() {
                    let mut d = to_dense(trk, t);
                    dense_trim(&mut d);
                    d
                } else {
                    dense_gcd(&g, &to_dense(trk, t), p)
                };
            }
            if g.is_empty() {
                return Err(Error::Internal("tracked polynomial content is zero".into()));
            }
            if dense_deg(&g) == Some(0) {
                // unit content: the quotient is the zero ring, nothing to avoid
                return Ok(Vec::new());
            }
            let gp = from_dense(ring, t, &g);
            Ok(fp_irreducible_factors(&gp, t)?.into_iter().map(MaxIdeal::PolyGen).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::CoeffRing;

    #[test]
    fn field_gives_empty_collection() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let kind = BaseKind::classify(ring, 0).unwrap();
        assert_eq!(kind, BaseKind::Field);
        assert!(choose_max_ideals(kind, ring, &[]).unwrap().is_empty());
    }

    #[test]
    fn integer_content_six() {
        let ring = Ring::new(CoeffRing::integers(), 1);
        let kind = BaseKind::Integers;
        let ideals = choose_max_ideals(kind, ring, &[Poly::from_i64(ring, 6)]).unwrap();
        assert_eq!(ideals, vec![MaxIdeal::IntPrime(2), MaxIdeal::IntPrime(3)]);
    }

    #[test]
    fn fp_t_content_factors() {
        // F_3[t], content t^2 + t = t(t+1): ideals (t), (t+1)
        let ring = Ring::new(CoeffRing::prime_field(3).unwrap(), 2);
        let t = Poly::variable(ring, 0);
        let kind = BaseKind::classify(ring, 1).unwrap();
        let content = t.pow(2).add(&t);
        let ideals = choose_max_ideals(kind, ring, &[content]).unwrap();
        let mut gens: Vec<String> = ideals
            .iter()
            .map(|i| match i {
                MaxIdeal::PolyGen(g) => g.to_string(),
                _ => unreachable!(),
            })
            .collect();
        gens.sort();
        assert_eq!(gens, vec!["x1", "x1 + 1"]);
    }

    #[test]
    fn berlekamp_splits_products() {
        let ring = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let t = Poly::variable(ring, 0);
        // (t^2 + 2)(t + 1)^2: distinct irreducible factors t^2+2 and t+1
        let f = t.pow(2).add(&Poly::from_i64(ring, 2)).mul(&t.add(&Poly::one(ring)).pow(2));
        let mut factors: Vec<String> =
            fp_irreducible_factors(&f, 0).unwrap().iter().map(|p| p.to_string()).collect();
        factors.sort();
        assert_eq!(factors, vec!["x1 + 1", "x1^2 + 2"]);
        // t^2 + 1 factors over F_5 as (t+2)(t+3)
        let g = t.pow(2).add(&Poly::one(ring));
        let mut fs: Vec<String> =
            fp_irreducible_factors(&g, 0).unwrap().iter().map(|p| p.to_string()).collect();
        fs.sort();
        assert_eq!(fs, vec!["x1 + 2", "x1 + 3"]);
        // t^2 + 2 is irreducible over F_5
        let h = t.pow(2).add(&Poly::from_i64(ring, 2));
        assert_eq!(fp_irreducible_factors(&h, 0).unwrap().len(), 1);
    }

    #[test]
    fn round_one_collections() {
        let zring = Ring::new(CoeffRing::integers(), 1);
        assert_eq!(
            choose_max_ideals(BaseKind::Integers, zring, &[]).unwrap(),
            vec![MaxIdeal::IntPrime(2)]
        );
        let fring = Ring::new(CoeffRing::prime_field(7).unwrap(), 2);
        let ideals = choose_max_ideals(BaseKind::FpUnivariate { t: 0 }, fring, &[]).unwrap();
        assert_eq!(ideals, vec![MaxIdeal::PolyGen(Poly::variable(fring, 0))]);
    }
}
