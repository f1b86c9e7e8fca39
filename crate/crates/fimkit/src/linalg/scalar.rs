use crate::error::{FimError, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// The coefficient field: exact rationals or a prime field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

/// A field element. Prime-field values are stored reduced mod p; the
/// modulus lives in the enclosing [`FieldSpec`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(FimError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(x))),
            FieldSpec::Prime(p) => {
                let r = x.rem_euclid(*p as i64) as u64;
                Scalar::Mod(r)
            }
        }
    }

    /// Parses an integer or `a/b` coefficient literal.
    pub fn parse_coeff(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let n: i64 = num
            .parse()
            .map_err(|e| FimError::Parse(format!("bad coefficient {s:?}: {e}")))?;
        match den {
            None => Ok(self.from_i64(n)),
            Some(d) => {
                let d: i64 = d
                    .parse()
                    .map_err(|e| FimError::Parse(format!("bad coefficient {s:?}: {e}")))?;
                if d == 0 {
                    return Err(FimError::Parse(format!("zero denominator in {s:?}")));
                }
                self.div(&self.from_i64(n), &self.from_i64(d))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    /// Whether the scalar's representation belongs to this field. Arithmetic
    /// panics on mismatched kinds, so boundary layers validate with this.
    pub fn compatible(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (FieldSpec::Rational, Scalar::Rat(_)) | (FieldSpec::Prime(_), Scalar::Mod(_))
        )
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod((x + p - y) % p)
            }
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar kind does not match field"),
        }
    }

    /// Multiplicative inverse; for prime fields by Fermat's little theorem.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(FimError::DimMismatch("inverse of zero".into()));
        }
        Ok(match (self, a) {
            (FieldSpec::Rational, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod(mod_pow(*x, p - 2, *p)),
            _ => panic!("scalar kind does not match field"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => x.to_string(),
        }
    }

    /// Exact integer value when the scalar is a non-negative rational
    /// integer; used for dimension counts read off rational computations.
    pub fn as_usize(&self, a: &Scalar) -> Option<usize> {
        match a {
            Scalar::Rat(x) => {
                if x.denom().is_one() && !x.numer().is_negative() {
                    use num::ToPrimitive;
                    x.numer().to_usize()
                } else {
                    None
                }
            }
            Scalar::Mod(x) => usize::try_from(*x).ok(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FieldSpec {
    type Err = FimError;

    /// Parses `Q` or `Fp:p`.
    fn from_str(s: &str) -> Result<FieldSpec> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(p) = t.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|e| FimError::Parse(format!("bad prime in {s:?}: {e}")))?;
            return FieldSpec::prime(p);
        }
        Err(FimError::Parse(format!(
            "field must be Q or Fp:p, got {s:?}"
        )))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => write!(f, "{x}"),
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}
