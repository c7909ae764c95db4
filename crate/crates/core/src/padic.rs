//! Truncated p-adic integers used as tree labels.
//!
//! A [`PAdicLabel`] holds the first `K` base-`p` digits of a p-adic integer,
//! least significant power first. Digit 0 is the coarsest level of the
//! hierarchy and is compared first by [`PAdicLabel::distance`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

/// Largest supported prime.
pub const MAX_PRIME: u32 = 97;
/// Largest supported truncation depth.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not a prime in 2..={MAX_PRIME}")]
    NotPrime(u32),
    #[error("depth {0} outside 1..={MAX_DEPTH}")]
    InvalidDepth(usize),
    #[error("digit {digit} at index {index} is not below p = {p}")]
    InvalidDigit { index: usize, digit: u32, p: u32 },
    #[error("{n} does not fit in {depth} base-{p} digits")]
    OverflowDepth { n: u128, p: u32, depth: usize },
    #[error("labels live in different spaces: (p={p1}, K={k1}) vs (p={p2}, K={k2})")]
    MismatchedField {
        p1: u32,
        k1: usize,
        p2: u32,
        k2: usize,
    },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u32) -> Result<(), PadicError> {
    if p <= MAX_PRIME && is_prime(p) {
        Ok(())
    } else {
        Err(PadicError::NotPrime(p))
    }
}

fn check_depth(depth: usize) -> Result<(), PadicError> {
    if (1..=MAX_DEPTH).contains(&depth) {
        Ok(())
    } else {
        Err(PadicError::InvalidDepth(depth))
    }
}

/// A p-adic integer truncated to `K` digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PAdicLabel {
    p: u32,
    digits: Vec<u8>,
}

impl PAdicLabel {
    pub fn new(p: u32, digits: Vec<u8>) -> Result<Self, PadicError> {
        check_prime(p)?;
        check_depth(digits.len())?;
        if let Some((index, &d)) = digits.iter().enumerate().find(|(_, &d)| u32::from(d) >= p) {
            return Err(PadicError::InvalidDigit {
                index,
                digit: u32::from(d),
                p,
            });
        }
        Ok(Self { p, digits })
    }

    pub fn zero(p: u32, depth: usize) -> Result<Self, PadicError> {
        Self::new(p, vec![0; depth])
    }

    /// Base-`p` expansion of `n`; fails if `n >= p^depth`.
    pub fn from_integer(n: u128, p: u32, depth: usize) -> Result<Self, PadicError> {
        check_prime(p)?;
        check_depth(depth)?;
        let base = u128::from(p);
        let mut rest = n;
        let mut digits = Vec::with_capacity(depth);
        for _ in 0..depth {
            digits.push((rest % base) as u8);
            rest /= base;
        }
        if rest != 0 {
            return Err(PadicError::OverflowDepth { n, p, depth });
        }
        Ok(Self { p, digits })
    }

    /// Label of the `index`-th depth-`K` ball; no range checks beyond debug asserts.
    pub(crate) fn from_index_unchecked(index: u64, p: u32, depth: usize) -> Self {
        let base = u64::from(p);
        let mut rest = index;
        let digits = (0..depth)
            .map(|_| {
                let d = (rest % base) as u8;
                rest /= base;
                d
            })
            .collect();
        debug_assert_eq!(rest, 0);
        Self { p, digits }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The first `len` digits, i.e. the node of the tree at level `len - 1`.
    pub fn prefix(&self, len: usize) -> &[u8] {
        &self.digits[..len]
    }

    /// `Σ digit_k p^k`.
    pub fn value(&self) -> BigUint {
        let p = BigUint::from(self.p);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &p + BigUint::from(d))
    }

    /// Index of the first nonzero digit, `None` for the zero label.
    pub fn valuation(&self) -> Option<u32> {
        self.digits.iter().position(|&d| d != 0).map(|v| v as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn norm(&self) -> PNorm {
        PNorm {
            base: self.p,
            valuation: self.valuation(),
        }
    }

    fn same_space(&self, other: &Self) -> Result<(), PadicError> {
        if self.p == other.p && self.depth() == other.depth() {
            Ok(())
        } else {
            Err(PadicError::MismatchedField {
                p1: self.p,
                k1: self.depth(),
                p2: other.p,
                k2: other.depth(),
            })
        }
    }

    /// Index of the first differing digit, `None` if the labels coincide.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>, PadicError> {
        self.same_space(other)?;
        Ok(self
            .digits
            .iter()
            .zip(&other.digits)
            .position(|(a, b)| a != b))
    }

    /// `|x - y|_p` on truncated integers.
    pub fn distance(&self, other: &Self) -> Result<PNorm, PadicError> {
        let first = self.first_difference(other)?;
        Ok(PNorm {
            base: self.p,
            valuation: first.map(|j| j as u32),
        })
    }
}

impl fmt::Display for PAdicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]_{}", self.p)
    }
}

#[derive(Serialize, Deserialize)]
struct LabelRepr {
    p: u32,
    digits: Vec<u32>,
}

impl Serialize for PAdicLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LabelRepr {
            p: self.p,
            digits: self.digits.iter().map(|&d| u32::from(d)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = LabelRepr::deserialize(d)?;
        let digits = repr
            .digits
            .iter()
            .enumerate()
            .map(|(index, &digit)| {
                u8::try_from(digit).map_err(|_| PadicError::InvalidDigit {
                    index,
                    digit,
                    p: repr.p,
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        PAdicLabel::new(repr.p, digits).map_err(D::Error::custom)
    }
}

/// An exact p-adic norm: either `0` or `p^(-v)`.
///
/// Equality and ordering compare the rational values, so `1` is equal across
/// primes.
#[derive(Debug, Clone, Copy)]
pub struct PNorm {
    base: u32,
    valuation: Option<u32>,
}

impl PNorm {
    pub const fn zero(p: u32) -> Self {
        Self {
            base: p,
            valuation: None,
        }
    }

    pub const fn power(p: u32, valuation: u32) -> Self {
        Self {
            base: p,
            valuation: Some(valuation),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    pub fn valuation(&self) -> Option<u32> {
        self.valuation
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn numerator(&self) -> BigUint {
        if self.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        }
    }

    pub fn denominator(&self) -> BigUint {
        match self.valuation {
            None | Some(0) => BigUint::one(),
            Some(v) => Pow::pow(BigUint::from(self.base), v),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.valuation {
            None => 0.0,
            Some(v) => f64::from(self.base).powi(-(v as i32)),
        }
    }
}

impl PartialEq for PNorm {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PNorm {}

impl PartialOrd for PNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.valuation, other.valuation) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) if self.base == other.base => b.cmp(&a),
            (Some(_), Some(_)) => other.denominator().cmp(&self.denominator()),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "0"),
            Some(0) => write!(f, "1"),
            Some(v) => write!(f, "{}^-{}", self.base, v),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct NormRepr {
    num: u32,
    den: Box<RawValue>,
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let den = RawValue::from_string(self.denominator().to_string())
            .map_err(serde::ser::Error::custom)?;
        NormRepr {
            num: u32::from(!self.is_zero()),
            den,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PNorm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = NormRepr::deserialize(d)?;
        let den: BigUint = repr
            .den
            .get()
            .parse()
            .map_err(|_| D::Error::custom("den must be a positive integer"))?;
        match repr.num {
            0 if den.is_one() => Ok(PNorm::zero(1)),
            0 => Err(D::Error::custom("zero norm must have den 1")),
            1 => prime_power(&den)
                .map(|(p, v)| PNorm::power(p, v))
                .ok_or_else(|| D::Error::custom("den must be a prime power")),
            _ => Err(D::Error::custom("num must be 0 or 1")),
        }
    }
}

/// Splits `n` into `p^v`; `1` maps to `(1, 0)`.
fn prime_power(n: &BigUint) -> Option<(u32, u32)> {
    if n.is_one() {
        return Some((1, 0));
    }
    let p = (2..=MAX_PRIME).find(|&p| (n % p).is_zero())?;
    let mut rest = n.clone();
    let mut v = 0;
    while (&rest % p).is_zero() {
        rest /= p;
        v += 1;
    }
    rest.is_one().then_some((p, v))
}
