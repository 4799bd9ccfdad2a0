//! Exact scalars: residues modulo a prime and arbitrary-precision rationals.
//!
//! Every higher structure in the crate is a finite-dimensional vector space
//! over a [`PrimeField`], and all of its arithmetic bottoms out here.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type BigRat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported range (< 2^32)")]
    PrimeTooLarge(u64),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// A single coordinate. `Mod` values are always reduced into `0..p`;
/// `Rat` values are kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u64),
    Rat(Box<BigRat>),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

/// The prime field underlying a presentation: 𝔽_p or ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeField {
    Fp(u64),
    Rationals,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn finite(p: u64) -> Result<Self, ScalarError> {
        if p >= 1 << 32 {
            return Err(ScalarError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(PrimeField::Fp(p))
    }

    /// 0 for ℚ.
    pub fn characteristic(&self) -> u64 {
        match self {
            PrimeField::Fp(p) => *p,
            PrimeField::Rationals => 0,
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match self {
            PrimeField::Fp(p) => Some(*p),
            PrimeField::Rationals => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PrimeField::Fp(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            PrimeField::Fp(_) => Scalar::Mod(0),
            PrimeField::Rationals => Scalar::Rat(Box::new(BigRat::zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            PrimeField::Fp(p) => Scalar::Mod(v.rem_euclid(*p as i64) as u64),
            PrimeField::Rationals => Scalar::Rat(Box::new(BigRat::from_integer(BigInt::from(v)))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            PrimeField::Fp(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Mod(r.to_u64().unwrap_or(0))
            }
            PrimeField::Rationals => Scalar::Rat(Box::new(BigRat::from_integer(v.clone()))),
        }
    }

    /// Maps a rational into this field; over 𝔽_p the denominator must be a unit.
    pub fn from_rational(&self, v: &BigRat) -> Result<Scalar, ScalarError> {
        match self {
            PrimeField::Fp(_) => {
                let n = self.from_bigint(v.numer());
                let d = self.from_bigint(v.denom());
                self.div(&n, &d)
            }
            PrimeField::Rationals => Ok(Scalar::Rat(Box::new(v.clone()))),
        }
    }

    /// The `i`-th element in the fixed enumeration order `0, 1, …, p-1`.
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            PrimeField::Fp(p) => Scalar::Mod(i % p),
            PrimeField::Rationals => self.from_i64(i as i64),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (PrimeField::Fp(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                let s = x + y;
                Scalar::Mod(if s >= *p { s - p } else { s })
            }
            (PrimeField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() + y.as_ref()))
            }
            _ => mixed(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (PrimeField::Fp(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(if x >= y { x - y } else { p - (y - x) })
            }
            (PrimeField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() - y.as_ref()))
            }
            _ => mixed(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (PrimeField::Fp(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            (PrimeField::Rationals, Scalar::Rat(x)) => Scalar::Rat(Box::new(-x.as_ref())),
            _ => mixed(),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (PrimeField::Fp(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % p),
            (PrimeField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(x.as_ref() * y.as_ref()))
            }
            _ => mixed(),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        if self.is_zero(a) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match (self, a) {
            (PrimeField::Fp(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, p - 2, *p)),
            (PrimeField::Rationals, Scalar::Rat(x)) => Scalar::Rat(Box::new(x.recip())),
            _ => mixed(),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Parses decimal integers and `p/q` rationals.
    pub fn parse(&self, s: &str) -> Result<Scalar, ScalarError> {
        let t = s.trim();
        let r = if let Some((n, d)) = t.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| ScalarError::Parse(s.to_string()))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| ScalarError::Parse(s.to_string()))?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            BigRat::new(n, d)
        } else {
            BigRat::from_integer(BigInt::from_str(t).map_err(|_| ScalarError::Parse(s.to_string()))?)
        };
        self.from_rational(&r)
    }

    /// Canonical signed representative for display: residues above p/2 print negative.
    pub fn to_signed_string(&self, a: &Scalar) -> String {
        match (self, a) {
            (PrimeField::Fp(p), Scalar::Mod(x)) if *x > p / 2 => {
                alloc::format!("-{}", p - x)
            }
            _ => a.to_string(),
        }
    }

    /// Lifts a scalar to a rational (residues lift to their representative in `0..p`).
    pub fn to_rational(&self, a: &Scalar) -> BigRat {
        match a {
            Scalar::Mod(v) => BigRat::from_integer(BigInt::from(*v)),
            Scalar::Rat(r) => r.as_ref().clone(),
        }
    }
}

#[cold]
fn mixed() -> ! {
    panic!("scalar from a different prime field")
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

// Vector helpers. Elements of every structure in the crate are flat coordinate
// vectors over the prime field.

pub fn vec_zero(k: &PrimeField, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| k.zero()).collect()
}

pub fn vec_add(k: &PrimeField, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

pub fn vec_sub(k: &PrimeField, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| k.sub(x, y)).collect()
}

pub fn vec_neg(k: &PrimeField, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| k.neg(x)).collect()
}

pub fn vec_scale(k: &PrimeField, s: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| k.mul(s, x)).collect()
}

pub fn vec_add_assign(k: &PrimeField, a: &mut [Scalar], b: &[Scalar]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = k.add(x, y);
    }
}

pub fn vec_is_zero(k: &PrimeField, a: &[Scalar]) -> bool {
    a.iter().all(|x| k.is_zero(x))
}

pub fn unit_vec(k: &PrimeField, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec_zero(k, n);
    v[i] = k.one();
    v
}

/// The `idx`-th vector of `𝔽_p^n` in little-endian base-p order.
pub fn vec_at(k: &PrimeField, n: usize, mut idx: u128) -> Vec<Scalar> {
    let p = k.order().expect("enumeration needs a finite prime field") as u128;
    (0..n)
        .map(|_| {
            let d = (idx % p) as u64;
            idx /= p;
            Scalar::Mod(d)
        })
        .collect()
}

/// Inverse of [`vec_at`].
pub fn vec_index(k: &PrimeField, v: &[Scalar]) -> u128 {
    let p = k.order().expect("enumeration needs a finite prime field") as u128;
    v.iter().rev().fold(0u128, |acc, s| match s {
        Scalar::Mod(d) => acc * p + *d as u128,
        Scalar::Rat(_) => mixed(),
    })
}

/// `p^n` when it fits in a `u128`.
pub fn count_vectors(k: &PrimeField, n: usize) -> Option<u128> {
    let p = k.order()? as u128;
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}
