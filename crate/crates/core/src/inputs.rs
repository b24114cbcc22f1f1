//! Two-party inputs: bit vectors, promises, and the functions computed on them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A fixed-length bit string, indexed from 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(vec![false; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }

    /// Parses a string of `0`/`1` characters, e.g. `"101"`.
    pub fn from_binary_str(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Hex encoding, most significant bit first: bit 0 is the high bit of the
    /// first hex digit. The tail is zero-padded to a whole digit.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.0.len().div_ceil(4));
        for chunk in self.0.chunks(4) {
            let mut nibble = 0u8;
            for (k, &bit) in chunk.iter().enumerate() {
                if bit {
                    nibble |= 8 >> k;
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self, InputError> {
        if hex.len() != len.div_ceil(4) {
            return Err(InputError::HexLength { expected: len.div_ceil(4), found: hex.len() });
        }
        let mut bits = Vec::with_capacity(len);
        for c in hex.chars() {
            let nibble = c.to_digit(16).ok_or(InputError::HexDigit(c))?;
            for k in 0..4 {
                if bits.len() < len {
                    bits.push(nibble & (8 >> k) != 0);
                } else if nibble & (8 >> k) != 0 {
                    return Err(InputError::HexPadding);
                }
            }
        }
        Ok(BitVector(bits))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Promise {
    /// The inputs never intersect.
    Disjoint,
    /// `Σ xᵢyᵢ ∈ {0, 1}`.
    UniqueIntersection,
    /// `Σ xᵢyᵢ ∈ {0, k}`.
    KIntersectOrDisjoint { k: usize },
}

impl Promise {
    pub fn admits(&self, intersection: usize) -> bool {
        match *self {
            Promise::Disjoint => intersection == 0,
            Promise::UniqueIntersection => intersection <= 1,
            Promise::KIntersectOrDisjoint { k } => intersection == 0 || intersection == k,
        }
    }

    /// Intersection size on the intersecting side, if that side exists.
    pub fn intersecting_size(&self) -> Option<usize> {
        match *self {
            Promise::Disjoint => None,
            Promise::UniqueIntersection => Some(1),
            Promise::KIntersectOrDisjoint { k } => Some(k),
        }
    }
}

impl fmt::Display for Promise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Promise::Disjoint => f.write_str("disjoint"),
            Promise::UniqueIntersection => f.write_str("unique-intersection"),
            Promise::KIntersectOrDisjoint { k } => write!(f, "{k}-intersect-or-disjoint"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Disjoint,
    Intersecting,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("inputs have different lengths ({x} and {y})")]
    LengthMismatch { x: usize, y: usize },
    #[error("promise {promise} violated: inputs intersect in {intersection} coordinates")]
    PromiseViolation { promise: Promise, intersection: usize },
    #[error("promise {promise} is infeasible for N = {n}")]
    Infeasible { promise: Promise, n: usize },
    #[error("expected {expected} hex digits, found {found}")]
    HexLength { expected: usize, found: usize },
    #[error("invalid hex digit {0:?}")]
    HexDigit(char),
    #[error("nonzero padding bits in hex encoding")]
    HexPadding,
}

/// Alice's input `x`, Bob's input `y`, and the promise they satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromisePair {
    x: BitVector,
    y: BitVector,
    promise: Promise,
}

impl PromisePair {
    pub fn new(x: BitVector, y: BitVector, promise: Promise) -> Result<Self, InputError> {
        if x.len() != y.len() {
            return Err(InputError::LengthMismatch { x: x.len(), y: y.len() });
        }
        let intersection = intersection_size(&x, &y);
        if !promise.admits(intersection) {
            return Err(InputError::PromiseViolation { promise, intersection });
        }
        Ok(PromisePair { x, y, promise })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &BitVector {
        &self.x
    }

    pub fn y(&self) -> &BitVector {
        &self.y
    }

    pub fn promise(&self) -> Promise {
        self.promise
    }

    /// Whether `xⱼ = yⱼ = 1`.
    pub fn both(&self, j: usize) -> bool {
        self.x.get(j) && self.y.get(j)
    }

    pub fn intersection_size(&self) -> usize {
        intersection_size(&self.x, &self.y)
    }

    pub fn side(&self) -> Side {
        if self.intersection_size() == 0 {
            Side::Disjoint
        } else {
            Side::Intersecting
        }
    }

    /// Coordinates where both inputs are set, ascending.
    pub fn intersection(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.both(j)).collect()
    }

    pub fn into_parts(self) -> (BitVector, BitVector, Promise) {
        (self.x, self.y, self.promise)
    }
}

pub fn intersection_size(x: &BitVector, y: &BitVector) -> usize {
    x.bits().iter().zip(y.bits()).filter(|(&a, &b)| a && b).count()
}

/// `DISJ(x, y) = ¬ ⋁ᵢ (xᵢ ∧ yᵢ)`.
pub fn disj(x: &BitVector, y: &BitVector) -> bool {
    !x.bits().iter().zip(y.bits()).any(|(&a, &b)| a && b)
}

/// `INTER_k(x, y) = 1` iff `Σ xᵢyᵢ ≥ k`.
pub fn inter_k(x: &BitVector, y: &BitVector, k: usize) -> bool {
    intersection_size(x, y) >= k
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_binary_str(s).unwrap()
    }

    #[test]
    fn hex_is_msb_first() {
        assert_eq!(bv("1000").to_hex(), "8");
        assert_eq!(bv("101").to_hex(), "a");
        assert_eq!(bv("000011111").to_hex(), "0f8");
        assert_eq!(BitVector::from_hex("a", 3).unwrap(), bv("101"));
        assert_eq!(BitVector::from_hex("b", 3), Err(InputError::HexPadding));
        assert!(BitVector::from_hex("ab", 3).is_err());
    }

    #[test]
    fn promises_enforced() {
        assert!(PromisePair::new(bv("110"), bv("011"), Promise::UniqueIntersection).is_ok());
        assert_eq!(
            PromisePair::new(bv("111"), bv("011"), Promise::UniqueIntersection),
            Err(InputError::PromiseViolation { promise: Promise::UniqueIntersection, intersection: 2 })
        );
        assert!(PromisePair::new(bv("111"), bv("011"), Promise::KIntersectOrDisjoint { k: 2 }).is_ok());
        assert!(PromisePair::new(bv("100"), bv("100"), Promise::KIntersectOrDisjoint { k: 2 }).is_err());
        assert!(PromisePair::new(bv("100"), bv("100"), Promise::Disjoint).is_err());
        assert!(PromisePair::new(bv("10"), bv("100"), Promise::Disjoint).is_err());
    }

    #[test]
    fn disj_and_inter() {
        assert!(disj(&bv("1010"), &bv("0101")));
        assert!(!disj(&bv("1010"), &bv("0110")));
        assert!(inter_k(&bv("1110"), &bv("0111"), 2));
        assert!(!inter_k(&bv("1110"), &bv("0111"), 3));
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..70)) {
            let v = BitVector::from_bits(bits);
            let hex = v.to_hex();
            prop_assert_eq!(BitVector::from_hex(&hex, v.len()).unwrap(), v);
        }
    }
}
