//! Integer factorization and the divisor-count function.
//!
//! Trial division by every prime below 10^6, then Miller-Rabin and
//! Pollard's rho (Brent's variant) on whatever cofactor remains.
//! Primality is certified for cofactors below 2^64 (fixed witness set) and
//! probabilistic above.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Clone, Copy, Debug)]
pub struct FactorOptions {
    /// Seeds the polynomial constants and random witnesses.
    pub seed: u64,
    /// Rho iterations allowed per split before giving up.
    pub max_rho_iterations: u64,
    /// Extra random Miller-Rabin rounds for cofactors above 2^64.
    pub extra_rounds: u32,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            seed: 0x5eed_cafe,
            max_rho_iterations: 1 << 28,
            extra_rounds: 16,
        }
    }
}

/// Prime-exponent pairs with strictly increasing primes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization(Vec<(BigUint, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.0
    }

    pub fn product(&self) -> BigUint {
        self.0.iter().map(|(p, e)| p.pow(*e)).product()
    }

    /// Number of positive divisors.
    pub fn divisor_count(&self) -> u64 {
        self.0.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// Factorization of the product of `self` and `other`.
    pub fn merged(&self, other: &Factorization) -> Factorization {
        let mut exps: std::collections::BTreeMap<&BigUint, u32> = Default::default();
        for (p, e) in self.0.iter().chain(&other.0) {
            *exps.entry(p).or_default() += e;
        }
        Factorization(exps.into_iter().map(|(p, e)| (p.clone(), e)).collect())
    }

    fn from_primes(mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut out: Vec<(BigUint, u32)> = Vec::new();
        for p in primes {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        Factorization(out)
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                for j in (i * i..n).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        primes
    })
}

pub fn factorize(n: &BigUint) -> Result<Factorization> {
    factorize_with(n, &FactorOptions::default())
}

pub fn factorize_with(n: &BigUint, opts: &FactorOptions) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factorize 0".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        let p64 = u64::from(p);
        if let Some(r) = rest.to_u64() {
            if p64 * p64 > r {
                break;
            }
        }
        while (&rest % p).is_zero() {
            rest /= p;
            primes.push(BigUint::from(p));
        }
    }
    if !rest.is_one() {
        let bound = u64::from(TRIAL_DIVISION_BOUND);
        // No factor below the bound, so anything under its square is prime.
        if rest.to_u64().is_some_and(|r| r < bound * bound) {
            primes.push(rest);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            split_large(rest, opts, &mut rng, &mut primes)?;
        }
    }
    Ok(Factorization::from_primes(primes))
}

/// Factors `n`, which has no prime factor below the trial-division bound.
fn split_large(
    n: BigUint,
    opts: &FactorOptions,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<BigUint>,
) -> Result<()> {
    let mut stack = vec![n];
    while let Some(n) = stack.pop() {
        if n.is_one() {
            continue;
        }
        if is_probable_prime(&n, opts.extra_rounds, rng) {
            out.push(n);
            continue;
        }
        if let Some(r) = n.sqrt().pow(2).eq(&n).then(|| n.sqrt()) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = match n.to_u64() {
            Some(small) => rho_u64(small, opts.max_rho_iterations, rng).map(BigUint::from),
            None => rho_big(&n, opts.max_rho_iterations, rng),
        }
        .ok_or_else(|| {
            Error::FactorizationFailed(format!(
                "no split of {n} within {} rho iterations",
                opts.max_rho_iterations
            ))
        })?;
        stack.push(&n / &d);
        stack.push(d);
    }
    Ok(())
}

/// Number of positive divisors of `n`.
pub fn sigma0(n: &BigUint) -> Result<u64> {
    Ok(factorize(n)?.divisor_count())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    WITNESSES.iter().all(|&a| {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

/// Miller-Rabin; exact below 2^64, probabilistic above.
pub fn is_probable_prime(n: &BigUint, extra_rounds: u32, rng: &mut impl Rng) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let two = BigUint::from(2u32);
    let witness = |a: &BigUint| {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    WITNESSES.iter().all(|&a| witness(&BigUint::from(a)))
        && (0..extra_rounds).all(|_| witness(&rng.gen_biguint_range(&two, &n_minus_1)))
}

/// Brent's cycle finding on `x -> x^2 + c mod n`, with products of
/// differences batched between gcds.
fn rho_u64(n: u64, max_iters: u64, rng: &mut impl Rng) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    let mut spent = 0;
    while spent < max_iters {
        let c = rng.gen_range(1..n);
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = rng.gen_range(0..n);
        let (mut x, mut ys) = (y, y);
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        while g == 1 && spent < max_iters {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
        }
        if g == n {
            // The batch overshot; replay it one step at a time.
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, max_iters: u64, rng: &mut impl Rng) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let mut spent = 0;
    while spent < max_iters {
        let c = rng.gen_biguint_range(&one, n);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = rng.gen_biguint_below(n);
        let (mut x, mut ys) = (y.clone(), y.clone());
        let (mut r, mut q, mut g) = (1u64, one.clone(), one.clone());
        while g.is_one() && spent < max_iters {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: u64) -> Vec<(u64, u32)> {
        factorize(&BigUint::from(n))
            .unwrap()
            .factors()
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    fn divisor_scan(n: u64) -> u64 {
        let mut count = 0;
        let mut d = 1;
        while d * d <= n {
            if n.is_multiple_of(d) {
                count += if d * d == n { 1 } else { 2 };
            }
            d += 1;
        }
        count
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(fac(12), vec![(2, 2), (3, 1)]);
        assert_eq!(fac(1), vec![]);
        assert_eq!(fac(168), vec![(2, 3), (3, 1), (7, 1)]);
        assert!(factorize(&BigUint::zero()).is_err());
    }

    #[test]
    fn sigma0_examples() {
        assert_eq!(sigma0(&1u32.into()).unwrap(), 1);
        assert_eq!(sigma0(&12u32.into()).unwrap(), 6);
        assert_eq!(sigma0(&17u32.into()).unwrap(), 2);
    }

    #[test]
    fn sigma0_matches_scan_small() {
        for n in 1..=20_000u64 {
            assert_eq!(sigma0(&n.into()).unwrap(), divisor_scan(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes_and_prime_powers() {
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(fac(p * q), vec![(p, 1), (q, 1)]);
        assert_eq!(fac(p * p), vec![(p, 2)]);
        let big_p = 4_294_967_311u64; // smallest prime above 2^32
        let n = BigUint::from(big_p) * BigUint::from(big_p) * BigUint::from(q);
        let f = factorize(&n).unwrap();
        assert_eq!(f.product(), n);
        assert_eq!(f.divisor_count(), 6);
        // Mersenne prime 2^61 - 1 times 2^31 - 1
        let m61 = (1u64 << 61) - 1;
        let m31 = (1u64 << 31) - 1;
        let n = BigUint::from(m61) * BigUint::from(m31);
        assert_eq!(factorize(&n).unwrap().divisor_count(), 4);
    }

    #[test]
    fn sigma0_of_distinct_prime_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let primes = small_primes();
        for _ in 0..200 {
            let p = primes[rng.gen_range(0..primes.len())];
            let q = primes[rng.gen_range(0..primes.len())];
            if p == q {
                continue;
            }
            let n = BigUint::from(p) * BigUint::from(q);
            assert_eq!(sigma0(&n).unwrap(), 4);
        }
    }

    #[test]
    fn primality() {
        assert!(!is_prime_u64(0) && !is_prime_u64(1));
        assert!(is_prime_u64(2) && is_prime_u64(37) && is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m127, 8, &mut rng));
        assert!(!is_probable_prime(&(&m127 * 3u32), 8, &mut rng));
    }

    #[test]
    fn rho_gives_up_within_budget() {
        let opts = FactorOptions {
            max_rho_iterations: 1,
            ..Default::default()
        };
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        assert!(matches!(
            factorize_with(&n, &opts),
            Err(Error::FactorizationFailed(_))
        ));
    }
}
