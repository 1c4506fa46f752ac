//! Experiment driver: walk a whole word family, verify every identity on
//! each word, and aggregate the divisor and tree-count spectra.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::factorize;
use crate::constructions::{
    blocks_of, build_multigraph, build_simple_graph, pad_graph, ConstructionParams,
};
use crate::continuants::{continuant_pair, reconstruct_word, Rational, Word};
use crate::decimal;
use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::tree_count::{
    enumeration_subsets, tau_enumerate, tau_kirchhoff, DEFAULT_ENUMERATION_BUDGET,
};

pub const DEFAULT_WORD_BUDGET: u64 = 1_000_000;

/// Label attached to the lower-bound estimate in reports.
pub const LOWER_BOUND_NOTE: &str = "asymptotic, not asserted";

/// All words of length `m` over `{2, ..., q+1}`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct WordFamily {
    q: u64,
    next: Option<Vec<u64>>,
}

impl WordFamily {
    pub fn new(m: usize, q: u32) -> Result<Self> {
        if m < 3 || q < 1 {
            return Err(Error::InvalidParams(format!(
                "word family needs m >= 3 and q >= 1, got m = {m}, q = {q}"
            )));
        }
        Ok(WordFamily {
            q: u64::from(q),
            next: Some(vec![2; m]),
        })
    }

    /// `q^m`.
    pub fn cardinality(m: usize, q: u32) -> BigUint {
        BigUint::from(q).pow(m as u32)
    }
}

impl Iterator for WordFamily {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let top = self.q + 1;
        // Odometer increment, last position fastest.
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            if succ[i] < top {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 2;
        }
        Some(Word::from_u64s(&current).expect("entries are >= 2"))
    }
}

pub fn enumerate_words(m: usize, q: u32) -> Result<WordFamily> {
    WordFamily::new(m, q)
}

/// `D_w = K_m(w) K_{m-1}(w_1..w_{m-1})`.
pub fn compute_divisor(word: &Word) -> Result<BigUint> {
    if word.len() < 2 {
        return Err(Error::InvalidWord(format!(
            "divisor needs a word of length >= 2, got {}",
            word.len()
        )));
    }
    Ok(continuant_pair(word).product())
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Pad `G_w` with this many pendant vertices and check the count is kept.
    pub pad: Option<usize>,
    /// Cross-check Kirchhoff against enumeration when `C(E, V-1)` is at most this.
    pub enumeration_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            pad: None,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

/// Outcome of each identity checked on a word. `None` means not checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFlags {
    /// `tau(H_w) = D_w`.
    pub multigraph_identity: bool,
    /// `D_w | tau(G_w)`.
    pub divisibility: bool,
    /// `det M = det A det B det R = tau(G_w)`.
    pub factorization: bool,
    /// Padding keeps `tau(G_w)`.
    pub padding: Option<bool>,
    /// The root cofactor has the twin block structure.
    pub block_zero_pattern: bool,
    /// The continuant pair decodes back to the word.
    pub reconstruction: bool,
    /// Enumeration agrees with Kirchhoff on every graph small enough to try.
    pub enumeration: Option<bool>,
}

impl VerificationFlags {
    pub fn all_ok(&self) -> bool {
        self.multigraph_identity
            && self.divisibility
            && self.factorization
            && self.padding != Some(false)
            && self.block_zero_pattern
            && self.reconstruction
            && self.enumeration != Some(false)
    }

    /// `name=value` pairs joined by commas; unchecked flags read `skip`.
    pub fn summary(&self) -> String {
        let b = |x: bool| if x { "true" } else { "false" };
        let o = |x: Option<bool>| x.map_or("skip", b);
        format!(
            "multigraph_identity={},divisibility={},factorization={},padding={},\
             block_zero_pattern={},reconstruction={},enumeration={}",
            b(self.multigraph_identity),
            b(self.divisibility),
            b(self.factorization),
            o(self.padding),
            b(self.block_zero_pattern),
            b(self.reconstruction),
            o(self.enumeration),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub word: Word,
    pub m: usize,
    pub q: u32,
    /// Vertex count of `G_w`.
    pub n: usize,
    #[serde(with = "decimal::biguint")]
    pub k_m: BigUint,
    #[serde(with = "decimal::biguint")]
    pub k_m_minus_1: BigUint,
    #[serde(with = "decimal::biguint")]
    pub d_w: BigUint,
    #[serde(with = "decimal::biguint")]
    pub tau_multigraph: BigUint,
    #[serde(with = "decimal::biguint")]
    pub tau_simple: BigUint,
    #[serde(with = "decimal::bigint_opt")]
    pub det_r: Option<BigInt>,
    pub flags: VerificationFlags,
}

/// Checks every identity of the construction on one word.
///
/// A failed identity shows up as a false flag; errors are reserved for
/// problems that prevent the check from running at all.
pub fn verify_word(
    params: &ConstructionParams,
    opts: &VerifyOptions,
) -> Result<VerificationRecord> {
    let word = params.word();
    let pair = continuant_pair(word);
    let d_w = pair.product();
    let reconstruction = reconstruct_word(&pair).as_ref() == Ok(word);

    let h = build_multigraph(word)?;
    let tau_multigraph = tau_kirchhoff(&h)?.value;

    let g = build_simple_graph(params)?;
    let tau_simple = tau_kirchhoff(&g)?.value;
    let divisibility = !d_w.is_zero() && (&tau_simple % &d_w).is_zero();

    let (block_zero_pattern, factorization, det_r) = match blocks_of(&g, params) {
        Ok(blocks) => {
            let det_m = blocks.cofactor.det()?;
            let det_r = blocks.r.det()?;
            let product = blocks.a.det()? * blocks.b.det()? * &det_r;
            let ok = det_m == product && det_m == BigInt::from(tau_simple.clone());
            (true, ok, Some(det_r))
        }
        Err(Error::Inconsistent(_)) => (false, false, None),
        Err(e) => return Err(e),
    };

    let padding = match opts.pad {
        Some(extra) => {
            let padded = pad_graph(&g, g.vertex_count() + extra)?;
            Some(tau_kirchhoff(&padded)?.value == tau_simple)
        }
        None => None,
    };

    let mut enumeration = None;
    for (graph, expected) in [(&h, &tau_multigraph), (&g, &tau_simple)] {
        if let Some(agrees) = enumeration_check(graph, expected, opts.enumeration_budget)? {
            enumeration = Some(enumeration.unwrap_or(true) && agrees);
        }
    }

    Ok(VerificationRecord {
        word: word.clone(),
        m: params.m(),
        q: params.q(),
        n: params.vertex_count(),
        flags: VerificationFlags {
            multigraph_identity: tau_multigraph == d_w,
            divisibility,
            factorization,
            padding,
            block_zero_pattern,
            reconstruction,
            enumeration,
        },
        k_m: pair.hi().clone(),
        k_m_minus_1: pair.lo().clone(),
        d_w,
        tau_multigraph,
        tau_simple,
        det_r,
    })
}

fn enumeration_check(graph: &MultiGraph, expected: &BigUint, budget: u64) -> Result<Option<bool>> {
    if enumeration_subsets(graph) > BigUint::from(budget) {
        return Ok(None);
    }
    Ok(Some(&tau_enumerate(graph, budget)?.value == expected))
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Exponent in the informational lower bound.
    pub eta: Rational,
    /// Largest family size `q^m` that will be walked.
    pub word_budget: u64,
    pub verify: VerifyOptions,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            eta: Rational::new(1.into(), 10.into()),
            word_budget: DEFAULT_WORD_BUDGET,
            verify: VerifyOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub m: usize,
    pub q: u32,
    pub n: usize,
    pub eta: String,
    pub total_words: u64,
    pub distinct_pairs: u64,
    pub distinct_divisors: u64,
    pub distinct_tree_counts: u64,
    pub max_divisor_fiber: u64,
    /// Fiber size -> number of divisor values with a fiber of that size.
    pub divisor_fiber_histogram: BTreeMap<u64, u64>,
    /// Smallest `sigma0(D)` among observed divisor values.
    pub min_divisor_sigma0: u64,
    /// Largest `sigma0(tau)` among observed tree counts.
    pub max_tree_count_sigma0: u64,
    pub pairs_injective: bool,
    pub reconstruction_ok: bool,
    pub sigma0_bound_satisfied: bool,
    /// `distinct_tree_counts * max_tree_count_sigma0 >= distinct_divisors`.
    pub count_chaining_satisfied: bool,
    pub all_records_verified: bool,
    /// Exact rational, `p/q`.
    pub informational_lower_bound: String,
    pub informational_lower_bound_approx: f64,
    pub lower_bound_note: String,
    /// Sorted numerically, rendered in decimal.
    pub divisor_values: Vec<String>,
    pub tree_count_values: Vec<String>,
    pub records: Vec<VerificationRecord>,
}

impl SpectrumReport {
    /// Every record verified and every aggregate check passed.
    pub fn all_ok(&self) -> bool {
        self.all_records_verified
            && self.pairs_injective
            && self.reconstruction_ok
            && self.sigma0_bound_satisfied
            && self.count_chaining_satisfied
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize") + "\n"
    }

    pub fn to_csv(&self) -> String {
        records_to_csv(&self.records)
    }
}

/// One row per record: `word;K_m;K_m_minus_1;D_w;tau;flags`.
pub fn records_to_csv(records: &[VerificationRecord]) -> String {
    let mut w = csv::WriterBuilder::new()
        .delimiter(b';')
        .from_writer(Vec::new());
    w.write_record(["word", "K_m", "K_m_minus_1", "D_w", "tau", "flags"])
        .expect("in-memory write");
    for r in records {
        w.write_record([
            r.word.to_string(),
            r.k_m.to_string(),
            r.k_m_minus_1.to_string(),
            r.d_w.to_string(),
            r.tau_simple.to_string(),
            r.flags.summary(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Walks `W_{m,q}`, verifies every word, and aggregates the spectra.
///
/// A divisor fiber larger than the divisor count of its value is a hard
/// [`Error::FiberBound`]; every other failed check is reported through the
/// flags of the returned report.
pub fn run_spectrum(m: usize, q: u32, opts: &SpectrumOptions) -> Result<SpectrumReport> {
    let family = enumerate_words(m, q)?;
    let total = WordFamily::cardinality(m, q);
    if total > BigUint::from(opts.word_budget) {
        return Err(Error::BudgetExceeded(format!(
            "{total} words exceed the word budget of {}",
            opts.word_budget
        )));
    }
    let lower_bound = lower_bound_estimate(m, q, &opts.eta)?;

    let words: Vec<Word> = family.collect();
    let records = words
        .into_par_iter()
        .map(|word| verify_word(&ConstructionParams::new(m, q, word)?, &opts.verify))
        .collect::<Result<Vec<_>>>()?;

    let pairs: HashSet<(&BigUint, &BigUint)> =
        records.iter().map(|r| (&r.k_m, &r.k_m_minus_1)).collect();
    let mut fibers: BTreeMap<&BigUint, u64> = BTreeMap::new();
    for r in &records {
        *fibers.entry(&r.d_w).or_default() += 1;
    }
    let mut histogram = BTreeMap::new();
    for &size in fibers.values() {
        *histogram.entry(size).or_default() += 1;
    }

    let divisor_sigma0 = fibers
        .par_iter()
        .map(|(&d, &size)| Ok((d, size, factorize(d)?.divisor_count())))
        .collect::<Result<Vec<_>>>()?;
    if let Some((d, size, s)) = divisor_sigma0.iter().find(|(_, size, s)| size > s) {
        return Err(Error::FiberBound(format!(
            "{size} words share D = {d}, which has only {s} divisors"
        )));
    }

    // Factor each distinct tree count as D * (tau / D) using a representative
    // word; both halves are much smaller than tau.
    let mut representatives: BTreeMap<&BigUint, &BigUint> = BTreeMap::new();
    for r in &records {
        representatives.entry(&r.tau_simple).or_insert(&r.d_w);
    }
    let tree_sigma0 = representatives
        .par_iter()
        .map(|(&tau, &d)| tree_count_divisors(tau, d))
        .collect::<Result<Vec<_>>>()?;

    let total_words = records.len() as u64;
    let distinct_divisors = fibers.len() as u64;
    let distinct_tree_counts = representatives.len() as u64;
    let max_tree_count_sigma0 = tree_sigma0.iter().copied().max().unwrap_or(1);
    let tree_counts: BTreeSet<&BigUint> = representatives.keys().copied().collect();

    Ok(SpectrumReport {
        m,
        q,
        n: 4 * m + q as usize - 1,
        eta: opts.eta.to_string(),
        total_words,
        distinct_pairs: pairs.len() as u64,
        distinct_divisors,
        distinct_tree_counts,
        max_divisor_fiber: fibers.values().copied().max().unwrap_or(0),
        divisor_fiber_histogram: histogram,
        min_divisor_sigma0: divisor_sigma0.iter().map(|t| t.2).min().unwrap_or(0),
        max_tree_count_sigma0,
        pairs_injective: pairs.len() as u64 == total_words,
        reconstruction_ok: records.iter().all(|r| r.flags.reconstruction),
        sigma0_bound_satisfied: true,
        count_chaining_satisfied: distinct_tree_counts * max_tree_count_sigma0 >= distinct_divisors,
        all_records_verified: records.iter().all(|r| r.flags.all_ok()),
        informational_lower_bound: lower_bound.to_string(),
        informational_lower_bound_approx: ratio_to_f64(&lower_bound),
        lower_bound_note: LOWER_BOUND_NOTE.to_string(),
        divisor_values: fibers.keys().map(|d| d.to_string()).collect(),
        tree_count_values: tree_counts.iter().map(|t| t.to_string()).collect(),
        records,
    })
}

fn tree_count_divisors(tau: &BigUint, d: &BigUint) -> Result<u64> {
    let f = if !d.is_zero() && (tau % d).is_zero() {
        factorize(d)?.merged(&factorize(&(tau / d))?)
    } else {
        factorize(tau)?
    };
    Ok(f.divisor_count())
}

/// A certified lower bound on `q^m / ((q+1)^(2 eta m) * N^(eta N))` with
/// `N = 4m + q - 1`.
///
/// With `eta = a/b` the denominator is the `b`-th root of the integer
/// `Y = (q+1)^(2ma) N^(Na)`; it is rounded up to a multiple of `10^-12`,
/// so the returned value never exceeds the true one.
pub fn lower_bound_estimate(m: usize, q: u32, eta: &Rational) -> Result<Rational> {
    if m < 3 || q < 1 {
        return Err(Error::InvalidParams(format!(
            "need m >= 3 and q >= 1, got m = {m}, q = {q}"
        )));
    }
    if !eta.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let too_big = || Error::InvalidArgument(format!("eta = {eta} is too unwieldy to evaluate"));
    let a = eta.numer().to_u32().ok_or_else(too_big)?;
    let b = eta.denom().to_u32().ok_or_else(too_big)?;
    let n = 4 * m as u32 + q - 1;
    let e1 = (2 * m as u32).checked_mul(a).ok_or_else(too_big)?;
    let e2 = n.checked_mul(a).ok_or_else(too_big)?;
    let y = BigUint::from(q + 1).pow(e1) * BigUint::from(n).pow(e2);

    let scale = BigUint::from(10u32).pow(12);
    let scaled = y * scale.pow(b);
    let mut root = scaled.nth_root(b);
    if root.pow(b) < scaled {
        root += 1u32;
    }
    let numerator = BigUint::from(q).pow(m as u32) * scale;
    Ok(BigRational::new(numerator.into(), root.into()))
}

fn ratio_to_f64(x: &Rational) -> f64 {
    // Shift both parts down to 60 bits before dividing.
    let shift = |v: &BigInt| v.bits().saturating_sub(60);
    let (p, q) = (x.numer(), x.denom());
    let s = shift(p).max(shift(q));
    let pf = (p >> s).to_f64().unwrap_or(f64::NAN);
    let qf = (q >> s).to_f64().unwrap_or(f64::NAN);
    if qf == 0.0 {
        return 0.0;
    }
    pf / qf
}

impl VerificationRecord {
    /// Quotient `tau(G_w) / D_w` when it is exact.
    pub fn cofactor_quotient(&self) -> Option<BigUint> {
        let (quot, rem) = self.tau_simple.div_rem(&self.d_w);
        rem.is_zero().then_some(quot)
    }
}
