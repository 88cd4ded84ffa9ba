//! Resultants via Sylvester matrices, with cofactor extraction from the
//! adjugate so that res(f, g) = p*f + q*g comes with explicit p and q.

use super::poly::{Poly, Ring};
use crate::error::{Error, Result};

/// Fraction-free Bareiss determinant over an integral domain.
pub fn determinant(ring: Ring, mat: &[Vec<Poly>]) -> Poly {
    let n = mat.len();
    if n == 0 {
        return Poly::one(ring);
    }
    let mut a: Vec<Vec<Poly>> = mat.to_vec();
    let mut sign = false;
    let mut prev = Poly::one(ring);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(ring),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over a domain");
            }
        }
        for row in a.iter_mut().take(n).skip(k + 1) {
            row[k] = Poly::zero(ring);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

fn minor(mat: &[Vec<Poly>], skip_row: usize, skip_col: usize) -> Vec<Vec<Poly>> {
    mat.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// Coefficients of f as a univariate polynomial in `var`, descending from
/// the given formal degree.
fn descending_coeffs(f: &Poly, var: usize, formal_deg: u32) -> Vec<Poly> {
    let uni = f.univariate_in(var);
    (0..=formal_deg)
        .rev()
        .map(|e| uni.get(&e).cloned().unwrap_or_else(|| Poly::zero(f.ring())))
        .collect()
}

fn sylvester(f: &Poly, g: &Poly, var: usize) -> Result<(Vec<Vec<Poly>>, u32, u32)> {
    let ring = f.ring();
    if g.ring() != ring {
        return Err(Error::RingMismatch("resultant operands in different rings".into()));
    }
    let d = f.deg_in(var);
    if d == 0 {
        return Err(Error::ShapeMismatch(
            "resultant requires positive degree in the chosen variable".into(),
        ));
    }
    let e = g.deg_in(var);
    let size = (d + e) as usize;
    let fc = descending_coeffs(f, var, d);
    let gc = descending_coeffs(g, var, e);
    let mut mat = vec![vec![Poly::zero(ring); size]; size];
    for i in 0..e as usize {
        for (j, c) in fc.iter().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..d as usize {
        for (j, c) in gc.iter().enumerate() {
            mat[e as usize + i][i + j] = c.clone();
        }
    }
    Ok((mat, d, e))
}

/// Sylvester-matrix resultant of f and g with respect to `var`. The result
/// does not involve `var` and lies in the ideal <f, g>.
///
/// Conventions: f must have positive degree d in `var`; a constant g gives
/// g^d; a zero g gives 0.
pub fn resultant(f: &Poly, g: &Poly, var: usize) -> Result<Poly> {
    let ring = f.ring();
    let d = f.deg_in(var);
    if d == 0 {
        return Err(Error::ShapeMismatch(
            "resultant requires positive degree in the chosen variable".into(),
        ));
    }
    if g.is_zero() {
        return Ok(Poly::zero(ring));
    }
    if g.deg_in(var) == 0 {
        // degenerate Sylvester block: res = g^d when f is monic in var;
        // in general lc(f)^0 * g^d with the convention e = 0
        return Ok(g.pow(d));
    }
    let (mat, _, _) = sylvester(f, g, var)?;
    Ok(determinant(ring, &mat))
}

/// Resultant together with cofactors: res = p*f + q*g with p, q polynomial
/// in `var` of degrees < deg g and < deg f. Extracted from the last row of
/// the adjugate of the Sylvester matrix.
pub fn resultant_with_cofactors(f: &Poly, g: &Poly, var: usize) -> Result<(Poly, Poly, Poly)> {
    let ring = f.ring();
    let d = f.deg_in(var);
    if d == 0 {
        return Err(Error::ShapeMismatch(
            "resultant requires positive degree in the chosen variable".into(),
        ));
    }
    if g.is_zero() {
        return Ok((Poly::zero(ring), Poly::zero(ring), Poly::zero(ring)));
    }
    if g.deg_in(var) == 0 {
        // res = g^d = (g^(d-1)) * g
        return Ok((g.pow(d), Poly::zero(ring), g.pow(d - 1)));
    }
    let (mat, d, e) = sylvester(f, g, var)?;
    let size = (d + e) as usize;
    let res = determinant(ring, &mat);
    // last row of adj(S): entry k is the (k, size-1) cofactor
    let y = Poly::variable(ring, var);
    let mut p = Poly::zero(ring);
    let mut q = Poly::zero(ring);
    for k in 0..size {
        let cof = determinant(ring, &minor(&mat, k, size - 1));
        let signed = if (k + size - 1) % 2 == 0 { cof } else { cof.neg() };
        if signed.is_zero() {
            continue;
        }
        // row k of S carries y^(e-1-k) * f for k < e, else y^(d-1-(k-e)) * g
        if k < e as usize {
            p = p.add(&signed.mul(&y.pow(e - 1 - k as u32)));
        } else {
            q = q.add(&signed.mul(&y.pow(d - 1 - (k as u32 - e))));
        }
    }
    let check = p.mul(f).add(&q.mul(g));
    if check != res {
        return Err(Error::Internal("resultant cofactor identity failed".into()));
    }
    Ok((res, p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::coeff::CoeffRing;

    #[test]
    fn linear_resultant_oracle() {
        // res(y - a, y - b) by the 2x2 Sylvester determinant: a - b
        let r = Ring::new(CoeffRing::rationals(), 3); // a, b, y with y last
        let a = Poly::variable(r, 0);
        let b = Poly::variable(r, 1);
        let y = Poly::variable(r, 2);
        let res = resultant(&y.sub(&a), &y.sub(&b), 2).unwrap();
        assert_eq!(res, a.sub(&b));
    }

    #[test]
    fn constant_g_gives_power() {
        let r = Ring::new(CoeffRing::prime_field(5).unwrap(), 1);
        let y = Poly::variable(r, 0);
        let f = y.pow(3).add(&y); // monic of degree 3
        let c = Poly::from_i64(r, 2);
        assert_eq!(resultant(&f, &c, 0).unwrap(), c.pow(3));
    }

    #[test]
    fn quadratic_example() {
        // res(y^2 + 1, y) = 1 over the rationals
        let r = Ring::new(CoeffRing::rationals(), 1);
        let y = Poly::variable(r, 0);
        let res = resultant(&y.pow(2).add(&Poly::one(r)), &y, 0).unwrap();
        assert!(res.is_one());
    }

    #[test]
    fn swap_sign_and_reduction_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let r = Ring::new(CoeffRing::prime_field(7).unwrap(), 1);
        let y = Poly::variable(r, 0);
        for _ in 0..40 {
            let df = rng.gen_range(1..4);
            let dg = rng.gen_range(1..4);
            let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng, deg: u32, monic: bool| {
                let mut p = if monic {
                    y.pow(deg)
                } else {
                    loop {
                        let lc = rng.gen_range(1..7);
                        if lc != 0 {
                            break y.pow(deg).mul_coeff(&r.coeff.from_i64(lc));
                        }
                    }
                };
                for e in 0..deg {
                    p = p.add(&y.pow(e).mul_coeff(&r.coeff.from_i64(rng.gen_range(0..7))));
                }
                p
            };
            let f = rand_poly(&mut rng, df, true);
            let g = rand_poly(&mut rng, dg, false);
            // res(f, g) = (-1)^(deg f * deg g) res(g, f)
            let fg = resultant(&f, &g, 0).unwrap();
            let gf = resultant(&g, &f, 0).unwrap();
            let expect = if (df * dg) % 2 == 0 { gf.clone() } else { gf.neg() };
            assert_eq!(fg, expect);
            // res(f, g + h*f) = res(f, g) for monic f, when degrees stay put
            let h = Poly::from_i64(r, rng.gen_range(0..7));
            let g2 = g.add(&h.mul(&f));
            let fg2 = resultant(&f, &g2, 0).unwrap();
            assert_eq!(fg2, fg);
        }
    }

    #[test]
    fn cofactor_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let r = Ring::new(CoeffRing::prime_field(5).unwrap(), 2); // t and y
        let t = Poly::variable(r, 0);
        let y = Poly::variable(r, 1);
        for _ in 0..20 {
            let mut f = y.pow(2);
            let mut g = y.mul_coeff(&r.coeff.from_i64(rng.gen_range(1..5)));
            for e in 0..2 {
                f = f.add(&y.pow(e).mul(&t.pow(rng.gen_range(0..2))).mul_coeff(&r.coeff.from_i64(rng.gen_range(0..5))));
                g = g.add(&y.pow(0).mul(&t.pow(rng.gen_range(0..2))).mul_coeff(&r.coeff.from_i64(rng.gen_range(0..5))));
            }
            let (res, p, q) = resultant_with_cofactors(&f, &g, 1).unwrap();
            assert_eq!(p.mul(&f).add(&q.mul(&g)), res);
            assert_eq!(res.deg_in(1), 0, "resultant must not involve y");
        }
    }
}
