//! Ideal computations in Z[x] via Hermite normal forms of degree-truncated
//! coefficient lattices.
//!
//! A combination sum(h_i * g_i) with deg <= d and deg h_i <= d - deg g_i is a
//! Z-linear combination of the shifted rows x^j * g_i. Row-style HNF with a
//! tracked unimodular transform turns membership and monic-element questions
//! into pivot inspection, with cofactors read off the transform. The
//! truncation degree is raised until the pivot table stabilizes; a cap keeps
//! the procedure honest (an exhausted cap is an error, never a wrong answer).

use super::coeff::{Coeff, CoeffRing};
use super::monomial::Monomial;
use super::poly::{Poly, Ring};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn check_z_univariate(gens: &[Poly], ring: Ring) -> Result<()> {
    if ring.coeff != CoeffRing::integers() {
        return Err(Error::UnsupportedRing("zlattice requires integer coefficients".into()));
    }
    for g in gens {
        if g.ring() != ring {
            return Err(Error::RingMismatch("generators in different rings".into()));
        }
        for v in 1..ring.nvars {
            if g.uses_var(v) {
                return Err(Error::UnsupportedRing(
                    "integer-coefficient ideal computations are restricted to one variable".into(),
                ));
            }
        }
    }
    Ok(())
}

fn int_coeff(c: &Coeff) -> BigInt {
    match c {
        Coeff::Int(v) => v.clone(),
        _ => unreachable!("checked integer ring"),
    }
}

/// Coefficient vector of a univariate integer polynomial, columns ordered
/// by descending degree d..=0.
fn coeff_row(g: &Poly, shift: u32, d: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); d as usize + 1];
    for (m, c) in g.terms() {
        let e = if g.ring().nvars == 0 { 0 } else { m.exponent(0) } + shift;
        row[(d - e) as usize] = int_coeff(c);
    }
    row
}

fn row_to_poly(ring: Ring, row: &[BigInt], d: u32) -> Poly {
    let mut p = Poly::zero(ring);
    for (col, v) in row.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let e = d - col as u32;
        let m = if ring.nvars == 0 {
            assert_eq!(e, 0);
            Monomial::unit(0)
        } else {
            let mut expo = vec![0u32; ring.nvars];
            expo[0] = e;
            Monomial::from_exponents(&expo)
        };
        p = p.add(&Poly::monomial(ring, m, ring.coeff.from_bigint(v)));
    }
    p
}

/// Row-style HNF: returns (H, U) with H = U * A, H in row echelon form with
/// positive pivots and entries above each pivot reduced modulo it.
fn hnf_with_transform(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut r = vec![BigInt::zero(); rows];
            r[i] = BigInt::one();
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // euclidean elimination in this column below pivot_row
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !h[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if h[i][col].abs() < h[b][col].abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut any_left = false;
            for i in (pivot_row + 1)..rows {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = div_round(&h[i][col], &h[pivot_row][col]);
                if !q.is_zero() {
                    for c in 0..cols {
                        let t = &h[pivot_row][c] * &q;
                        h[i][c] -= t;
                    }
                    for c in 0..rows {
                        let t = &u[pivot_row][c] * &q;
                        u[i][c] -= t;
                    }
                }
                if !h[i][col].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            for c in 0..cols {
                h[pivot_row][c] = -h[pivot_row][c].clone();
            }
            for c in 0..rows {
                u[pivot_row][c] = -u[pivot_row][c].clone();
            }
        }
        // reduce the entries above the pivot
        for i in 0..pivot_row {
            let q = num_integer::Integer::div_floor(&h[i][col], &h[pivot_row][col]);
            if !q.is_zero() {
                for c in 0..cols {
                    let t = &h[pivot_row][c] * &q;
                    h[i][c] -= t;
                }
                for c in 0..rows {
                    let t = &u[pivot_row][c] * &q;
                    u[i][c] -= t;
                }
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer quotient keeps the euclidean descent fast
    let (q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (a.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

struct Truncation {
    d: u32,
    h: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    tags: Vec<(usize, u32)>,
    /// (degree, pivot value, row index) per pivot
    pivots: Vec<(u32, BigInt, usize)>,
}

fn truncate_at(gens: &[Poly], ring: Ring, d: u32) -> Truncation {
    let mut rows = Vec::new();
    let mut tags = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let dg = if ring.nvars == 0 { 0 } else { g.deg_in(0) };
        for j in 0..=(d - dg) {
            rows.push(coeff_row(g, j, d));
            tags.push((i, j));
        }
    }
    let (h, u) = hnf_with_transform(&rows);
    let mut pivots = Vec::new();
    for (ri, row) in h.iter().enumerate() {
        if let Some(col) = row.iter().position(|v| !v.is_zero()) {
            pivots.push((d - col as u32, row[col].clone(), ri));
        }
    }
    Truncation { d, h, u, tags, pivots }
}

/// Cofactors over the generators for row `ri` of the truncation.
fn cofactors_for_row(t: &Truncation, gens: &[Poly], ring: Ring, ri: usize) -> Vec<Poly> {
    let mut cof = vec![Poly::zero(ring); gens.len()];
    for (k, coeff) in t.u[ri].iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let (gen_idx, shift) = t.tags[k];
        let m = if ring.nvars == 0 {
            assert_eq!(shift, 0);
            Monomial::unit(0)
        } else {
            let mut expo = vec![0u32; ring.nvars];
            expo[0] = shift;
            Monomial::from_exponents(&expo)
        };
        let term = Poly::monomial(ring, m, ring.coeff.from_bigint(coeff));
        cof[gen_idx] = cof[gen_idx].add(&term);
    }
    cof
}

const TRUNCATION_SLACK_CAP: u32 = 24;

fn stabilized_truncation(gens: &[Poly], ring: Ring) -> Result<Option<Truncation>> {
    check_z_univariate(gens, ring)?;
    if gens.iter().all(|g| g.is_zero()) {
        return Ok(None);
    }
    let base = gens
        .iter()
        .map(|g| if ring.nvars == 0 { 0 } else { g.deg_in(0) })
        .max()
        .unwrap_or(0);
    let mut prev: Option<Truncation> = None;
    for slack in 0..=TRUNCATION_SLACK_CAP {
        let cur = truncate_at(gens, ring, base + slack);
        if let Some(p) = &prev {
            // stable once the pivot table below the new top degree repeats
            let prev_table: Vec<(u32, BigInt)> =
                p.pivots.iter().map(|(deg, v, _)| (*deg, v.clone())).collect();
            let cur_table: Vec<(u32, BigInt)> = cur
                .pivots
                .iter()
                .filter(|(deg, _, _)| *deg <= p.d)
                .map(|(deg, v, _)| (*deg, v.clone()))
                .collect();
            if prev_table == cur_table {
                return Ok(Some(cur));
            }
        }
        prev = Some(cur);
    }
    Err(Error::SearchCapExceeded {
        phase: "zlattice truncation stabilization".into(),
        cap: TRUNCATION_SLACK_CAP as usize,
    })
}

/// Search for a lex-monic element of the ideal: a pivot row with pivot
/// value 1. Returns (cofactors, combination).
pub fn z_monic_witness(gens: &[Poly], ring: Ring) -> Result<Option<(Vec<Poly>, Poly)>> {
    let Some(t) = stabilized_truncation(gens, ring)? else {
        return Ok(None);
    };
    // prefer the lowest-degree monic representative; deterministic
    let hit = t
        .pivots
        .iter()
        .filter(|(_, v, _)| v.is_one())
        .min_by_key(|(deg, _, _)| *deg);
    match hit {
        Some((_, _, ri)) => {
            let combination = row_to_poly(ring, &t.h[*ri], t.d);
            let cof = cofactors_for_row(&t, gens, ring, *ri);
            Ok(Some((cof, combination)))
        }
        None => Ok(None),
    }
}

/// Cofactors certifying 1 in the ideal, if the constant 1 is reachable.
pub fn z_bezout(gens: &[Poly], ring: Ring) -> Result<Option<Vec<Poly>>> {
    let Some(t) = stabilized_truncation(gens, ring)? else {
        return Ok(None);
    };
    for (deg, v, ri) in &t.pivots {
        if *deg == 0 && v.is_one() {
            // echelon row with pivot in the constant column IS the constant 1
            return Ok(Some(cofactors_for_row(&t, gens, ring, *ri)));
        }
    }
    Ok(None)
}

/// Ideal membership of `h` with cofactors, by reduction against the
/// stabilized truncation rows.
pub fn z_contains(gens: &[Poly], h: &Poly, ring: Ring) -> Result<Option<Vec<Poly>>> {
    check_z_univariate(std::slice::from_ref(h), ring)?;
    if h.is_zero() {
        return Ok(Some(vec![Poly::zero(ring); gens.len()]));
    }
    let hdeg = if ring.nvars == 0 { 0 } else { h.deg_in(0) };
    let base = gens
        .iter()
        .map(|g| if ring.nvars == 0 { 0 } else { g.deg_in(0) })
        .max()
        .unwrap_or(0)
        .max(hdeg);
    for slack in 0..=TRUNCATION_SLACK_CAP {
        let d = base + slack;
        let t = truncate_at(gens, ring, d);
        let mut target = coeff_row(h, 0, d);
        let mut combo = vec![Poly::zero(ring); gens.len()];
        for (_, _, ri) in &t.pivots {
            let col = t.h[*ri].iter().position(|v| !v.is_zero()).unwrap();
            if target[col].is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&target[col], &t.h[*ri][col]);
            if !r.is_zero() {
                continue;
            }
            for c in 0..target.len() {
                let s = &t.h[*ri][c] * &q;
                target[c] -= s;
            }
            let cof = cofactors_for_row(&t, gens, ring, *ri);
            let qp = Poly::constant(ring, ring.coeff.from_bigint(&q));
            for (acc, c) in combo.iter_mut().zip(cof.iter()) {
                *acc = acc.add(&c.mul(&qp));
            }
        }
        if target.iter().all(|v| v.is_zero()) {
            return Ok(Some(combo));
        }
    }
    Ok(None)
}

/// A generating set whose leading terms cover the ideal's leading terms up
/// to the stabilization degree: the pivot rows of the stabilized truncation,
/// with shift-redundant rows dropped.
pub fn z_groebner(gens: &[Poly], ring: Ring) -> Result<Vec<Poly>> {
    let Some(t) = stabilized_truncation(gens, ring)? else {
        return Ok(Vec::new());
    };
    let mut polys: Vec<Poly> = Vec::new();
    // ascending degree; keep a pivot row only if its leading coefficient
    // strictly divides what shifts of earlier rows already give
    let mut rows: Vec<(u32, BigInt, usize)> = t.pivots.clone();
    rows.sort_by_key(|(deg, _, _)| *deg);
    let mut best_lc: Option<BigInt> = None;
    for (_, v, ri) in rows {
        let keep = match &best_lc {
            None => true,
            Some(b) => (b % &v).is_zero() && b != &v,
        };
        if keep {
            best_lc = Some(v.clone());
            polys.push(row_to_poly(ring, &t.h[ri], t.d));
        }
    }
    Ok(polys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> Ring {
        Ring::new(CoeffRing::integers(), 1)
    }

    #[test]
    fn bezout_two_x_plus_one_and_x() {
        // 1 = 1*(2x+1) - 2*x
        let r = z1();
        let x = Poly::variable(r, 0);
        let g1 = x.mul_coeff(&r.coeff.from_i64(2)).add(&Poly::one(r));
        let gens = vec![g1.clone(), x.clone()];
        let cof = z_bezout(&gens, r).unwrap().expect("unit ideal");
        let acc = cof[0].mul(&gens[0]).add(&cof[1].mul(&gens[1]));
        assert!(acc.is_one());
    }

    #[test]
    fn monic_witness_examples() {
        let r = z1();
        let x = Poly::variable(r, 0);
        // <2x> contains no monic polynomial
        let none = z_monic_witness(&[x.mul_coeff(&r.coeff.from_i64(2))], r).unwrap();
        assert!(none.is_none());
        // <2x+1, x> contains 1
        let g1 = x.mul_coeff(&r.coeff.from_i64(2)).add(&Poly::one(r));
        let (cof, combo) = z_monic_witness(&[g1.clone(), x.clone()], r).unwrap().unwrap();
        assert!(combo.is_lex_monic());
        let acc = cof[0].mul(&g1).add(&cof[1].mul(&x));
        assert_eq!(acc, combo);
    }

    #[test]
    fn membership_with_cofactors() {
        let r = z1();
        let x = Poly::variable(r, 0);
        let g = x.pow(2).add(&Poly::from_i64(r, 2));
        let target = g.mul(&x).add(&g.mul_coeff(&r.coeff.from_i64(5)));
        let cof = z_contains(&[g.clone()], &target, r).unwrap().expect("member");
        assert_eq!(cof[0].mul(&g), target);
        assert!(z_contains(&[g.clone()], &x, r).unwrap().is_none());
    }

    #[test]
    fn groebner_pivots() {
        let r = z1();
        let x = Poly::variable(r, 0);
        // <2, x> : pivot table is {2, x}
        let basis = z_groebner(&[Poly::from_i64(r, 2), x.clone()], r).unwrap();
        assert_eq!(basis.len(), 2);
    }
}
