//! Seeded pool of fixed-width random words backing `rand_uniform(k)`.
//!
//! Two modes are supported. In [`RngMode::Full`] every word is an independent
//! uniform draw. In [`RngMode::DWise`] the word stream is derived from
//! `f(0), f(1), ...` for a random polynomial `f` of degree `d - 1` over the
//! prime field `GF(p)`, `p` the smallest prime above `2^62`. Values of `2^62`
//! or more are skipped and the rest are truncated to their low `w` bits, so
//! the whole stream is determined by `d` field elements.
//!
//! The field is fixed and wide rather than just above `2^w`: a polynomial
//! over `GF(p)` repeats with period `p`, and a solve draws far more than `p`
//! words when `p` is close to the matrix side.
//!
//! The base generator is ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64`. Its output is specified bit-for-bit and does not depend on
//! platform endianness or word size, so a given seed yields the same pool on
//! every target.
//!
//! The pool extends itself on demand. In d-wise mode extension keeps
//! evaluating the same polynomial at further points; the low-randomness
//! accounting therefore only covers the words consumed by one successful run.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_DWISE_D: u32 = 8;

const CHUNK: usize = 4096;
const MAX_WORD_BITS: u32 = 62;
const FIELD_BITS: u32 = 62;
/// Smallest prime above `2^62`.
pub const DWISE_PRIME: u64 = (1 << FIELD_BITS) + 135;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RandomError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("independence degree must be an even number >= 2, got {0}")]
    BadDegree(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RngMode {
    Full,
    DWise { d: u32 },
}

impl RngMode {
    pub fn dwise(d: u32) -> Result<Self, RandomError> {
        if d < 2 || !d.is_multiple_of(2) {
            return Err(RandomError::BadDegree(d));
        }
        Ok(RngMode::DWise { d })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RngMode::Full => "full",
            RngMode::DWise { .. } => "dwise",
        }
    }
}

/// Evaluation state of the polynomial behind a d-wise stream.
#[derive(Debug, Clone)]
struct PolyStream {
    /// Highest-degree coefficient first.
    coeffs: Vec<u64>,
    prime: u64,
    next_x: u64,
}

impl PolyStream {
    fn next_value(&mut self) -> u64 {
        let v = eval_poly(&self.coeffs, self.next_x, self.prime);
        self.next_x += 1;
        v
    }
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Source {
    Full(ChaCha8Rng),
    DWise(PolyStream),
}

#[derive(Debug, Clone)]
pub struct RandomPool {
    seed: u64,
    mode: RngMode,
    word_bits: u32,
    words: Vec<u64>,
    cursor: usize,
    source: Source,
}

impl RandomPool {
    /// Creates a pool able to serve `rand_uniform(k)` for every `k <= max_k`.
    pub fn new(seed: u64, max_k: usize, mode: RngMode) -> Self {
        assert!(max_k >= 1, "max_k must be positive");
        let word_bits = ceil_log2(max_k as u64).max(1);
        assert!(word_bits <= MAX_WORD_BITS, "max_k too large");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let source = match mode {
            RngMode::Full => Source::Full(rng),
            RngMode::DWise { d } => {
                let prime = DWISE_PRIME;
                let coeffs = (0..d).map(|_| rng.gen_range(0..prime)).collect();
                Source::DWise(PolyStream {
                    coeffs,
                    prime,
                    next_x: 0,
                })
            }
        };
        RandomPool {
            seed,
            mode,
            word_bits,
            words: Vec::new(),
            cursor: 0,
            source,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> RngMode {
        self.mode
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    /// Number of words consumed so far.
    pub fn words_used(&self) -> u64 {
        self.cursor as u64
    }

    /// Field prime of a d-wise pool.
    pub fn prime(&self) -> Option<u64> {
        match &self.source {
            Source::Full(_) => None,
            Source::DWise(p) => Some(p.prime),
        }
    }

    fn extend(&mut self) {
        let mask = (1u64 << self.word_bits) - 1;
        self.words.reserve(CHUNK);
        match &mut self.source {
            Source::Full(rng) => {
                for _ in 0..CHUNK {
                    self.words.push(rng.next_u64() & mask);
                }
            }
            Source::DWise(poly) => {
                let target = self.words.len() + CHUNK;
                while self.words.len() < target {
                    let v = poly.next_value();
                    if v < 1 << FIELD_BITS {
                        self.words.push(v & mask);
                    }
                }
            }
        }
    }

    /// Next `w`-bit word of the pool.
    pub fn next_word(&mut self) -> u64 {
        if self.cursor == self.words.len() {
            self.extend();
        }
        let w = self.words[self.cursor];
        self.cursor += 1;
        w
    }

    /// Uniform integer in `1..=k` by rejection: keep the `ceil(log2 k)` low
    /// bits of the next word, accept if below `k`.
    pub fn rand_uniform(&mut self, k: usize) -> usize {
        assert!(k >= 1, "k must be positive");
        let bits = ceil_log2(k as u64);
        assert!(
            bits <= self.word_bits,
            "k = {k} exceeds pool range 2^{}",
            self.word_bits
        );
        let mask = if bits == 0 { 0 } else { (1u64 << bits) - 1 };
        loop {
            let b = self.next_word() & mask;
            if b < k as u64 {
                return b as usize + 1;
            }
        }
    }

    #[cfg(test)]
    fn with_words(word_bits: u32, words: Vec<u64>) -> Self {
        let mut pool = RandomPool::new(0, 1 << word_bits, RngMode::Full);
        pool.words = words;
        pool
    }
}

/// `ceil(log2 k)`, with `ceil_log2(1) == 0`.
pub fn ceil_log2(k: u64) -> u32 {
    assert!(k >= 1);
    64 - (k - 1).leading_zeros()
}

/// Evaluates the polynomial (highest-degree coefficient first) at `x` mod `p`.
pub fn eval_poly(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let x = x % p;
    coeffs
        .iter()
        .fold(0, |acc, &c| (mul_mod(acc, x, p) + c % p) % p)
}

/// Draws `d` coefficients uniformly from `GF(p)` and returns
/// `f(0), ..., f(count - 1)`.
pub fn gen_dwise(seed: u64, count: usize, prime: u64, d: u32) -> Result<Vec<u64>, RandomError> {
    if !is_prime(prime) {
        return Err(RandomError::NotPrime(prime));
    }
    RngMode::dwise(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..prime)).collect();
    Ok(eval_dwise(&coeffs, count, prime))
}

/// `f(0), ..., f(count - 1)` for fixed coefficients.
pub fn eval_dwise(coeffs: &[u64], count: usize, prime: u64) -> Vec<u64> {
    (0..count as u64)
        .map(|x| eval_poly(coeffs, x, prime))
        .collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
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
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_bits_configuration() {
        assert_eq!(RandomPool::new(7, 1, RngMode::Full).word_bits(), 1);
        assert_eq!(RandomPool::new(7, 1000, RngMode::Full).word_bits(), 10);
        assert_eq!(RandomPool::new(7, 1024, RngMode::Full).word_bits(), 10);
        assert_eq!(RandomPool::new(7, 1025, RngMode::Full).word_bits(), 11);
    }

    #[test]
    fn same_seed_same_words() {
        for mode in [RngMode::Full, RngMode::DWise { d: 8 }] {
            let mut a = RandomPool::new(7, 1000, mode);
            let mut b = RandomPool::new(7, 1000, mode);
            let wa: Vec<u64> = (0..10_000).map(|_| a.next_word()).collect();
            let wb: Vec<u64> = (0..10_000).map(|_| b.next_word()).collect();
            assert_eq!(wa, wb);
            assert!(wa.iter().all(|&w| w < 1024));
            let mut c = RandomPool::new(8, 1000, mode);
            let wc: Vec<u64> = (0..10_000).map(|_| c.next_word()).collect();
            assert_ne!(wa, wc);
        }
    }

    #[test]
    fn rand_one_consumes_one_word() {
        let mut pool = RandomPool::new(3, 16, RngMode::Full);
        assert_eq!(pool.rand_uniform(1), 1);
        assert_eq!(pool.words_used(), 1);
    }

    #[test]
    fn rand_maps_low_bits_plus_one() {
        let mut pool = RandomPool::with_words(4, vec![0b1101]);
        assert_eq!(pool.rand_uniform(8), 6);
        assert_eq!(pool.words_used(), 1);
    }

    #[test]
    fn rand_rejects_out_of_range() {
        let mut pool = RandomPool::with_words(4, vec![0b0111, 0b1001]);
        assert_eq!(pool.rand_uniform(3), 2);
        assert_eq!(pool.words_used(), 2);
    }

    #[test]
    #[should_panic(expected = "exceeds pool range")]
    fn rand_beyond_pool_range_panics() {
        RandomPool::new(0, 4, RngMode::Full).rand_uniform(5);
    }

    #[test]
    fn pool_extends_past_first_chunk() {
        let mut pool = RandomPool::new(1, 100, RngMode::DWise { d: 4 });
        for _ in 0..3 * CHUNK + 5 {
            let v = pool.rand_uniform(100);
            assert!((1..=100).contains(&v));
        }
        assert!(pool.words_used() >= 3 * CHUNK as u64 + 5);
    }

    #[test]
    fn dwise_field_is_wide() {
        assert_eq!(next_prime(1 << FIELD_BITS), DWISE_PRIME);
        let pool = RandomPool::new(0, 1000, RngMode::DWise { d: 8 });
        assert_eq!(pool.prime(), Some(DWISE_PRIME));
        assert_eq!(RandomPool::new(0, 1, RngMode::Full).prime(), None);
    }

    #[test]
    fn dwise_stream_does_not_cycle_on_small_ranges() {
        let mut pool = RandomPool::new(4, 3, RngMode::DWise { d: 8 });
        let words: Vec<u64> = (0..64).map(|_| pool.next_word()).collect();
        assert!(words.iter().all(|&w| w < 4));
        assert_ne!(words[..16], words[16..32]);
    }

    #[test]
    fn dwise_zero_coefficients() {
        assert_eq!(eval_dwise(&[0, 0, 0, 0], 6, 7), vec![0; 6]);
    }

    #[test]
    fn dwise_hand_evaluated() {
        assert_eq!(eval_dwise(&[1, 1], 2, 2), vec![1, 0]);
        assert_eq!(eval_dwise(&[2, 3], 4, 5), vec![3, 0, 2, 4]);
    }

    #[test]
    fn gen_dwise_checks_configuration() {
        assert_eq!(gen_dwise(1, 4, 6, 2), Err(RandomError::NotPrime(6)));
        assert_eq!(gen_dwise(1, 4, 5, 3), Err(RandomError::BadDegree(3)));
        let a = gen_dwise(9, 50, 101, 4).unwrap();
        assert_eq!(a, gen_dwise(9, 50, 101, 4).unwrap());
        assert!(a.iter().all(|&v| v < 101));
    }

    #[test]
    fn pairwise_independence_exhaustive() {
        let p = 5;
        for x1 in 0..p {
            for x2 in 0..p {
                if x1 == x2 {
                    continue;
                }
                let mut seen = [[0u32; 5]; 5];
                for a1 in 0..p {
                    for a0 in 0..p {
                        let f = |x| eval_poly(&[a1, a0], x, p) as usize;
                        seen[f(x1)][f(x2)] += 1;
                    }
                }
                assert!(seen.iter().flatten().all(|&c| c == 1));
            }
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert_eq!(next_prime(1 << 16), 65537);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1000), 10);
        assert_eq!(ceil_log2(1 << 40), 40);
    }
}
