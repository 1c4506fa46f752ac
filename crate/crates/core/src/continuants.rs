//! Continuants, minus continued fractions and word reconstruction.
//!
//! The continuant of a word `x_1..x_r` follows the minus-sign recurrence
//! `K_0 = 1`, `K_1 = x_1`, `K_i = x_i K_{i-1} - K_{i-2}`. For words with
//! every entry at least 2 the sequence is strictly increasing, which makes
//! the last two terms an injective code of the word.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational numbers, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A nonempty sequence of integers, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<BigUint>);

impl Word {
    pub fn new(entries: Vec<BigUint>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidWord(
                "word must have at least one entry".into(),
            ));
        }
        let two = BigUint::from(2u32);
        if let Some((i, x)) = entries.iter().enumerate().find(|(_, x)| **x < two) {
            return Err(Error::InvalidWord(format!(
                "entry {} is {x}, entries must be at least 2",
                i + 1
            )));
        }
        Ok(Word(entries))
    }

    pub fn from_u64s(entries: &[u64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `len` entries, or `None` if that would be empty or too long.
    pub fn prefix(&self, len: usize) -> Option<Word> {
        (len >= 1 && len <= self.0.len()).then(|| Word(self.0[..len].to_vec()))
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|x| u64::try_from(x).ok()).collect()
    }

    pub fn into_entries(self) -> Vec<BigUint> {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Parses comma-separated decimal entries, e.g. `2,3,4`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigUint>()
                    .map_err(|_| Error::InvalidWord(format!("cannot parse entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(entries)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The pair `(K_r, K_{r-1})` of consecutive continuants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuantPair {
    hi: BigUint,
    lo: BigUint,
}

impl ContinuantPair {
    /// Wraps an arbitrary pair. Whether it actually comes from a word is
    /// decided by [`reconstruct_word`].
    pub fn new(hi: BigUint, lo: BigUint) -> Self {
        ContinuantPair { hi, lo }
    }

    pub fn hi(&self) -> &BigUint {
        &self.hi
    }

    pub fn lo(&self) -> &BigUint {
        &self.lo
    }

    /// `hi * lo`.
    pub fn product(&self) -> BigUint {
        &self.hi * &self.lo
    }
}

impl fmt::Display for ContinuantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.hi, self.lo)
    }
}

/// Parses `hi,lo`.
impl FromStr for ContinuantPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected a pair `hi,lo`, got {s:?}"));
        let (hi, lo) = s.split_once(',').ok_or_else(bad)?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        Ok(ContinuantPair::new(hi, lo))
    }
}

/// Returns `[K_0, K_1, ..., K_r]`, so index `i` holds `K_i`.
pub fn continuant_sequence(word: &Word) -> Vec<BigUint> {
    let mut seq = Vec::with_capacity(word.len() + 1);
    seq.push(BigUint::one());
    let mut prev = BigUint::zero(); // K_{-1}
    for x in word.entries() {
        let last = seq.last().expect("nonempty");
        // x >= 2 and prev < last keep this nonnegative.
        let next = x * last - &prev;
        prev = last.clone();
        seq.push(next);
    }
    seq
}

/// `K_r` of the whole word.
pub fn continuant(word: &Word) -> BigUint {
    continuant_pair(word).hi
}

pub fn continuant_pair(word: &Word) -> ContinuantPair {
    let mut hi = BigUint::one();
    let mut lo = BigUint::zero();
    for x in word.entries() {
        let next = x * &hi - &lo;
        lo = std::mem::replace(&mut hi, next);
    }
    ContinuantPair { hi, lo }
}

/// Exact value of `[x_r, ..., x_1]_-`, evaluated from the inside out in
/// rational arithmetic.
pub fn minus_cf(word: &Word) -> Rational {
    let mut entries = word.entries().iter().map(|x| BigInt::from(x.clone()));
    let mut num = entries.next().expect("nonempty word");
    let mut den = BigInt::one();
    // x - den/num, kept unreduced until the end.
    for x in entries {
        let next = x * &num - den;
        den = std::mem::replace(&mut num, next);
    }
    Rational::new(num, den)
}

/// Recovers the unique word whose continuant pair is `pair`.
///
/// Peels one digit at a time: `x = ceil(hi / lo)`, then
/// `(hi, lo) <- (lo, x * lo - hi)`, until `lo` reaches zero. The pair is
/// accepted only if this ends at `(1, 0)` with every digit at least 2.
pub fn reconstruct_word(pair: &ContinuantPair) -> Result<Word> {
    if pair.hi.is_zero() {
        return Err(Error::NotAContinuantPair(
            "first component must be positive".into(),
        ));
    }
    let mut hi = pair.hi.clone();
    let mut lo = pair.lo.clone();
    let mut digits = Vec::new();
    let two = BigUint::from(2u32);
    while !lo.is_zero() {
        let x = Integer::div_ceil(&hi, &lo);
        if x < two {
            return Err(Error::NotAContinuantPair(format!(
                "digit {x} < 2 at ({hi}, {lo})"
            )));
        }
        // x * lo >= hi by the choice of x, and x * lo - hi < lo.
        let next_lo = &x * &lo - &hi;
        if next_lo >= lo {
            return Err(Error::NotAContinuantPair(format!(
                "monotonicity violated at ({hi}, {lo})"
            )));
        }
        digits.push(x);
        hi = std::mem::replace(&mut lo, next_lo);
    }
    if !hi.is_one() {
        return Err(Error::NotAContinuantPair(format!(
            "terminated at ({hi}, 0) instead of (1, 0)"
        )));
    }
    if digits.is_empty() {
        return Err(Error::NotAContinuantPair(
            "(1, 0) encodes the empty word".into(),
        ));
    }
    digits.reverse();
    Word::new(digits)
}
