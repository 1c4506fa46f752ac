//! Seeded fuzz suites over the library invariants, runnable outside the
//! test harness (e.g. from the command line on a fresh machine).

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arithmetic::{factorize, sigma0};
use crate::constructions::{build_multigraph, build_simple_graph, pad_graph, ConstructionParams};
use crate::continuants::{continuant, continuant_pair, minus_cf, reconstruct_word, Rational, Word};
use crate::error::Result;
use crate::graph::MultiGraph;
use crate::linalg::{tridiagonal_matrix, two_copy_identity_sides, IntMatrix};
use crate::spectrum::enumerate_words;
use crate::tree_count::{tau_enumerate, tau_kirchhoff, tau_kirchhoff_at};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    /// First failing case, if any.
    pub failure: Option<String>,
}

/// Case counts per suite.
#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub words: usize,
    pub matrices: usize,
    pub graphs: usize,
    pub integers: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 1,
            words: 2000,
            matrices: 1000,
            graphs: 200,
            integers: 100_000,
        }
    }
}

type Check = Result<Option<String>>;

fn suite(
    name: &'static str,
    cases: usize,
    mut case: impl FnMut(usize) -> Check,
) -> Result<SuiteOutcome> {
    for i in 0..cases {
        if let Some(msg) = case(i)? {
            return Ok(SuiteOutcome {
                name,
                cases: i + 1,
                passed: false,
                failure: Some(msg),
            });
        }
    }
    Ok(SuiteOutcome {
        name,
        cases,
        passed: true,
        failure: None,
    })
}

fn random_word(rng: &mut impl Rng, max_len: usize, max_entry: u64) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::from_u64s(
        &(0..len)
            .map(|_| rng.gen_range(2..=max_entry))
            .collect::<Vec<_>>(),
    )
    .expect("entries >= 2")
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9..=9)))
}

/// Random connected multigraph: a random spanning tree plus a few extra
/// edges, multiplicities in `1..=3`, kept small enough to enumerate.
pub fn random_connected_multigraph(rng: &mut impl Rng, max_vertices: usize) -> MultiGraph {
    loop {
        let n = rng.gen_range(2..=max_vertices);
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=3)));
        }
        for _ in 0..rng.gen_range(0..=n) {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                edges.push((u, v, rng.gen_range(1..=3)));
            }
        }
        let g = MultiGraph::plain(n, &edges).expect("valid edges");
        if g.edges().all(|(_, _, m)| m <= 3)
            && crate::tree_count::enumeration_subsets(&g) <= BigUint::from(200_000u32)
        {
            return g;
        }
    }
}

/// Runs every suite with the given configuration.
pub fn run_selftest(cfg: &SelftestConfig) -> Result<Vec<SuiteOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    out.push(suite("continuant_roundtrip", cfg.words, |_| {
        let word = random_word(&mut rng, 200, 1_000_000);
        let pair = continuant_pair(&word);
        if !pair.hi().gcd(pair.lo()).is_one() {
            return Ok(Some(format!("pair {pair} of {word} not coprime")));
        }
        if minus_cf(&word) != Rational::new(pair.hi().clone().into(), pair.lo().clone().into()) {
            return Ok(Some(format!("continued fraction mismatch for {word}")));
        }
        Ok((reconstruct_word(&pair)? != word).then(|| format!("roundtrip failed for {word}")))
    })?);

    out.push(suite("tridiagonal_determinant", cfg.words / 10, |_| {
        let word = random_word(&mut rng, 30, 50);
        let det = tridiagonal_matrix(&word).det()?;
        Ok((det != BigInt::from(continuant(&word))).then(|| format!("det mismatch for {word}")))
    })?);

    out.push(suite("two_copy_identity", cfg.matrices, |_| {
        let (s, t) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = random_matrix(&mut rng, s, s);
        let e = random_matrix(&mut rng, s, t);
        let g = random_matrix(&mut rng, t, s);
        let h = random_matrix(&mut rng, t, t);
        let (lhs, rhs) = two_copy_identity_sides(&a, &e, &g, &h)?;
        Ok((lhs != rhs).then(|| format!("{lhs} != {rhs} for A = {a:?}")))
    })?);

    out.push(suite("kirchhoff_vs_enumeration", cfg.graphs, |_| {
        let g = random_connected_multigraph(&mut rng, 8);
        let k = tau_kirchhoff(&g)?.value;
        let e = tau_enumerate(&g, 200_000)?.value;
        if k != e {
            return Ok(Some(format!(
                "kirchhoff {k} != enumeration {e} on {}",
                g.encode()
            )));
        }
        for v in 1..g.vertex_count() {
            if tau_kirchhoff_at(&g, v)?.value != k {
                return Ok(Some(format!("cofactor at {v} differs on {}", g.encode())));
            }
        }
        Ok(None)
    })?);

    let small_words: Vec<(u32, Word)> = (1..=4u32)
        .flat_map(|q| enumerate_words(3, q).expect("valid").map(move |w| (q, w)))
        .collect();
    out.push(suite("multigraph_identity", small_words.len(), |i| {
        let word = &small_words[i].1;
        let tau = tau_kirchhoff(&build_multigraph(word)?)?.value;
        let d = continuant_pair(word).product();
        Ok((tau != d).then(|| format!("tau(H) = {tau} but D = {d} for {word}")))
    })?);

    out.push(suite("padding", small_words.len(), |i| {
        let (q, word) = &small_words[i];
        let g = build_simple_graph(&ConstructionParams::for_word(*q, word.clone())?)?;
        let tau = tau_kirchhoff(&g)?.value;
        let extra = i % 11;
        let padded = tau_kirchhoff(&pad_graph(&g, g.vertex_count() + extra)?)?.value;
        Ok((padded != tau).then(|| format!("padding by {extra} changed tau for {word}")))
    })?);

    out.push(suite("sigma0_vs_scan", cfg.integers as usize, |i| {
        let n = i as u64 + 1;
        let scan = (1..=n.sqrt())
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| if d * d == n { 1 } else { 2 })
            .sum::<u64>();
        let s = sigma0(&BigUint::from(n))?;
        Ok((s != scan).then(|| format!("sigma0({n}) = {s}, scan gives {scan}")))
    })?);

    out.push(suite(
        "factorization_product",
        cfg.integers as usize / 10,
        |_| {
            let n = BigUint::from(rng.gen_range(1..=1_000_000_000_000u64));
            let f = factorize(&n)?;
            Ok((f.product() != n)
                .then(|| format!("factorization of {n} multiplies to {}", f.product())))
        },
    )?);

    Ok(out)
}
