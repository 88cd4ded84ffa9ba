//! Coefficient rings: prime fields F_p, the rationals and the integers.
//!
//! `CoeffRing` is the ring descriptor carried by every polynomial; `Coeff`
//! is one element. All arithmetic goes through the descriptor so that F_p
//! residues stay canonical (in `0..p`) and variants never mix.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which coefficient ring a polynomial lives over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffKind {
    PrimeField,
    Rationals,
    Integers,
}

/// Descriptor of an effective coefficient ring.
///
/// `declared_dim` is 0 for the fields and 1 for the integers; the reduction
/// bounds take the symbol D from here.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CoeffRing {
    kind: CoeffKind,
    /// Prime modulus; only meaningful for `PrimeField` (0 otherwise).
    modulus: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl CoeffRing {
    /// The prime field F_p. The modulus must be prime and small enough that
    /// products fit in a u64 without overflow.
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedRing(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::UnsupportedRing(format!(
                "prime modulus {p} exceeds the 2^31 arithmetic limit"
            )));
        }
        Ok(CoeffRing { kind: CoeffKind::PrimeField, modulus: p })
    }

    pub fn rationals() -> Self {
        CoeffRing { kind: CoeffKind::Rationals, modulus: 0 }
    }

    pub fn integers() -> Self {
        CoeffRing { kind: CoeffKind::Integers, modulus: 0 }
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    /// Prime modulus for F_p; 0 for the other rings.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Krull dimension as declared for the bound formulas: 0 for fields,
    /// 1 for the integers.
    pub fn declared_dim(&self) -> u64 {
        match self.kind {
            CoeffKind::PrimeField | CoeffKind::Rationals => 0,
            CoeffKind::Integers => 1,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind {
            CoeffKind::PrimeField => self.modulus,
            _ => 0,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, CoeffKind::PrimeField | CoeffKind::Rationals)
    }

    // ---- Element constructors ----

    pub fn zero(&self) -> Coeff {
        match self.kind {
            CoeffKind::PrimeField => Coeff::Fp(0),
            CoeffKind::Rationals => Coeff::Rat(BigRational::zero()),
            CoeffKind::Integers => Coeff::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        match self.kind {
            CoeffKind::PrimeField => Coeff::Fp(1 % self.modulus),
            CoeffKind::Rationals => Coeff::Rat(BigRational::one()),
            CoeffKind::Integers => Coeff::Int(BigInt::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self.kind {
            CoeffKind::PrimeField => {
                let p = self.modulus as i128;
                let r = ((v as i128 % p) + p) % p;
                Coeff::Fp(r as u64)
            }
            CoeffKind::Rationals => Coeff::Rat(BigRational::from(BigInt::from(v))),
            CoeffKind::Integers => Coeff::Int(BigInt::from(v)),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self.kind {
            CoeffKind::PrimeField => {
                let p = BigInt::from(self.modulus);
                let mut r = v % &p;
                if r.is_negative() {
                    r += &p;
                }
                let digits = r.to_u64_digits().1;
                Coeff::Fp(if digits.is_empty() { 0 } else { digits[0] })
            }
            CoeffKind::Rationals => Coeff::Rat(BigRational::from(v.clone())),
            CoeffKind::Integers => Coeff::Int(v.clone()),
        }
    }

    fn check(&self, a: &Coeff) -> &Self {
        let ok = matches!(
            (self.kind, a),
            (CoeffKind::PrimeField, Coeff::Fp(_))
                | (CoeffKind::Rationals, Coeff::Rat(_))
                | (CoeffKind::Integers, Coeff::Int(_))
        );
        assert!(ok, "coefficient variant does not match ring {:?}", self.kind);
        self
    }

    // ---- Arithmetic ----

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.check(a).check(b);
        match (a, b) {
            (Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x + y) % self.modulus),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.check(a);
        match a {
            Coeff::Fp(x) => Coeff::Fp(if *x == 0 { 0 } else { self.modulus - x }),
            Coeff::Rat(x) => Coeff::Rat(-x),
            Coeff::Int(x) => Coeff::Int(-x),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.check(a).check(b);
        match (a, b) {
            (Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp(x * y % self.modulus),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse, for units only.
    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        self.check(a);
        match a {
            Coeff::Fp(x) => {
                if *x == 0 {
                    None
                } else {
                    Some(Coeff::Fp(mod_pow(*x, self.modulus - 2, self.modulus)))
                }
            }
            Coeff::Rat(x) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Coeff::Rat(x.recip()))
                }
            }
            Coeff::Int(x) => {
                if x.abs().is_one() {
                    Some(Coeff::Int(x.clone()))
                } else {
                    None
                }
            }
        }
    }

    pub fn is_unit(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Fp(x) => *x != 0,
            Coeff::Rat(x) => !x.is_zero(),
            Coeff::Int(x) => x.abs().is_one(),
        }
    }

    /// Exact quotient a/b, when it exists in the ring.
    pub fn exact_div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.check(a).check(b);
        match (a, b) {
            (Coeff::Fp(_), Coeff::Fp(y)) => {
                if *y == 0 {
                    None
                } else {
                    Some(self.mul(a, &self.inv(b)?))
                }
            }
            (Coeff::Rat(x), Coeff::Rat(y)) => {
                if y.is_zero() {
                    None
                } else {
                    Some(Coeff::Rat(x / y))
                }
            }
            (Coeff::Int(x), Coeff::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = num_integer::Integer::div_rem(x, y);
                if r.is_zero() {
                    Some(Coeff::Int(q))
                } else {
                    None
                }
            }
            _ => unreachable!(),
        }
    }

    // ---- Text format ----

    /// Format a coefficient in the certificate text format. F_p residues and
    /// integers print as decimal; rationals print as `a/b` when the
    /// denominator is not 1.
    pub fn format(&self, a: &Coeff) -> String {
        match a {
            Coeff::Fp(x) => x.to_string(),
            Coeff::Int(x) => x.to_string(),
            Coeff::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
        }
    }

    /// Parse a coefficient token: decimal integer, `a/b` over the rationals
    /// or `p:residue` over F_p (the prefix must match the ring's modulus).
    pub fn parse(&self, tok: &str) -> Result<Coeff> {
        let tok = tok.trim();
        if let Some((p_str, res_str)) = tok.split_once(':') {
            if self.kind != CoeffKind::PrimeField {
                return Err(Error::Parse(format!(
                    "modular coefficient {tok} in a non-F_p ring"
                )));
            }
            let p: u64 = p_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {tok}")))?;
            if p != self.modulus {
                return Err(Error::Parse(format!(
                    "coefficient modulus {p} does not match ring modulus {}",
                    self.modulus
                )));
            }
            let res: i64 = res_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad residue in {tok}")))?;
            return Ok(self.from_i64(res));
        }
        if let Some((num_str, den_str)) = tok.split_once('/') {
            if self.kind != CoeffKind::Rationals {
                return Err(Error::Parse(format!(
                    "fractional coefficient {tok} outside the rationals"
                )));
            }
            let num: BigInt = num_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {tok}")))?;
            let den: BigInt = den_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {tok}")))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(Coeff::Rat(BigRational::new(num, den)));
        }
        let v: BigInt = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {tok}")))?;
        Ok(self.from_bigint(&v))
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CoeffKind::PrimeField => write!(f, "F_{}", self.modulus),
            CoeffKind::Rationals => write!(f, "Q"),
            CoeffKind::Integers => write!(f, "Z"),
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// One element of a coefficient ring. The variant must match the ring kind;
/// the descriptor's methods enforce that.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coeff {
    Fp(u64),
    Rat(BigRational),
    Int(BigInt),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Fp(x) => *x == 0,
            Coeff::Rat(x) => x.is_zero(),
            Coeff::Int(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Fp(x) => *x == 1,
            Coeff::Rat(x) => x.is_one(),
            Coeff::Int(x) => x.is_one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(CoeffRing::prime_field(6).is_err());
        assert!(CoeffRing::prime_field(1).is_err());
        assert!(CoeffRing::prime_field(5).is_ok());
    }

    #[test]
    fn fp_arithmetic_is_canonical() {
        let f5 = CoeffRing::prime_field(5).unwrap();
        let a = f5.from_i64(-3);
        assert_eq!(a, Coeff::Fp(2));
        let b = f5.from_i64(4);
        assert_eq!(f5.add(&a, &b), Coeff::Fp(1));
        assert_eq!(f5.mul(&a, &b), Coeff::Fp(3));
        assert_eq!(f5.inv(&Coeff::Fp(2)), Some(Coeff::Fp(3)));
        assert_eq!(f5.inv(&Coeff::Fp(0)), None);
    }

    #[test]
    fn integer_units() {
        let z = CoeffRing::integers();
        assert!(z.is_unit(&z.from_i64(-1)));
        assert!(!z.is_unit(&z.from_i64(2)));
        assert_eq!(z.exact_div(&z.from_i64(6), &z.from_i64(3)), Some(z.from_i64(2)));
        assert_eq!(z.exact_div(&z.from_i64(7), &z.from_i64(3)), None);
    }

    #[test]
    fn coefficient_text_round_trip() {
        let f5 = CoeffRing::prime_field(5).unwrap();
        assert_eq!(f5.parse("5:8").unwrap(), Coeff::Fp(3));
        assert_eq!(f5.parse("3").unwrap(), Coeff::Fp(3));
        assert!(f5.parse("7:1").is_err());
        let q = CoeffRing::rationals();
        let half = q.parse("1/2").unwrap();
        assert_eq!(q.format(&half), "1/2");
        assert_eq!(q.format(&q.from_i64(-4)), "-4");
    }
}
