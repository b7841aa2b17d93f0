//! Elementary number theory on machine words: Kronecker symbols, primality,
//! segmented sieving, squarefree tests and modular square roots.
//!
//! Everything here is exact integer arithmetic. Products that may exceed
//! 64 bits are carried out in `u128`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error(
        "{0} is not a fundamental discriminant: need d squarefree with d = 3 (mod 4), \
         or d = 4k with k squarefree and k = 1, 2 (mod 4)"
    )]
    NotFundamental(u64),
    #[error("kronecker symbol (0|0) is undefined")]
    KroneckerUndefined,
    #[error("invalid prime range [{lo}, {hi})")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("prime range of width {width} exceeds the sieve capacity of {limit}")]
    Capacity { width: u64, limit: u64 },
}

/// The absolute value `d = |disc(K)|` of the discriminant of an imaginary
/// quadratic field `K = Q(sqrt(-d))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalDiscriminant(u64);

impl FundamentalDiscriminant {
    pub fn new(d: u64) -> Result<Self, ArithError> {
        if is_fundamental(d) {
            Ok(Self(d))
        } else {
            Err(ArithError::NotFundamental(d))
        }
    }

    /// Skips validation; callers must already know `d` is fundamental.
    pub(crate) fn new_unchecked(d: u64) -> Self {
        debug_assert!(is_fundamental(d), "{d}");
        Self(d)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `-d` as a signed integer.
    #[inline]
    pub fn negated(self) -> i64 {
        -(self.0 as i64)
    }
}

impl TryFrom<u64> for FundamentalDiscriminant {
    type Error = ArithError;

    fn try_from(d: u64) -> Result<Self, Self::Error> {
        Self::new(d)
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// True iff `-d` is the discriminant of an imaginary quadratic field.
pub fn is_fundamental(d: u64) -> bool {
    // -d must fit in an i64 for the character computations downstream.
    if d < 3 || d > i64::MAX as u64 {
        return false;
    }
    match d % 4 {
        3 => is_squarefree(d),
        0 => {
            let k = d / 4;
            matches!(k % 4, 1 | 2) && is_squarefree(k)
        }
        _ => false,
    }
}

/// True iff no square of a prime divides `n`.
///
/// Trial division removes every prime up to the cube root of `n`; what is
/// left has at most two prime factors, so it is squarefree unless it is a
/// perfect square.
pub fn is_squarefree(n: u64) -> bool {
    debug_assert!(n >= 1);
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p).saturating_mul(p) <= n {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m == 1 {
        return true;
    }
    let r = isqrt(m);
    r * r != m
}

/// Floor of the square root of `n`.
#[inline]
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Jacobi symbol `(a|n)` for odd `n > 0`.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n & 1 == 1);
    a %= n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(a|n)` for `n > 0`.
fn kronecker_pos(a: i128, n: u64) -> i8 {
    debug_assert!(n > 0);
    let tz = n.trailing_zeros();
    let odd = n >> tz;
    let mut sign = 1i8;
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a|2) is +1 for a = 1, 7 (mod 8) and -1 for a = 3, 5 (mod 8).
        if tz & 1 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -1;
        }
    }
    let a_red = a.rem_euclid(odd as i128) as u64;
    sign * jacobi(a_red, odd)
}

/// Kronecker symbol `(a|n)`, the standard extension of the Jacobi symbol to
/// all integers `n`.
pub fn kronecker(a: i64, n: i64) -> Result<i8, ArithError> {
    if n == 0 {
        return match a.unsigned_abs() {
            0 => Err(ArithError::KroneckerUndefined),
            1 => Ok(1),
            _ => Ok(0),
        };
    }
    let mut sign = 1i8;
    // (a|-1) is the sign of a.
    if n < 0 && a < 0 {
        sign = -1;
    }
    Ok(sign * kronecker_pos(a as i128, n.unsigned_abs()))
}

/// The quadratic character `chi_d(m) = (-d|m)` attached to `Q(sqrt(-d))`.
#[inline]
pub fn chi(d: FundamentalDiscriminant, m: u64) -> i8 {
    debug_assert!(m >= 1);
    kronecker_pos(-(d.get() as i128), m)
}

/// One full period `chi_d(0), ..., chi_d(d - 1)` of the character.
pub fn chi_table(d: FundamentalDiscriminant) -> Vec<i8> {
    let n = d.get();
    let mut out = Vec::with_capacity(n as usize);
    out.push(0);
    out.extend((1..n).map(|m| chi(d, m)));
    out
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

// Witness set proven sufficient for every n < 2^64 (Jim Sinclair).
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic Miller-Rabin, exact on the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &base in &MR_BASES {
        let a = base % n;
        if a == 0 {
            continue;
        }
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

/// Square root of `a` modulo an odd prime `p` by Tonelli-Shanks.
///
/// Returns the smaller of the two roots, or `None` when `a` is a
/// non-residue. The non-residue used internally is the smallest one, so the
/// result is reproducible.
pub fn sqrt_mod(a: i64, p: u64) -> Option<u64> {
    debug_assert!(p > 2 && p & 1 == 1);
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return Some(0);
    }
    if jacobi(a, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p).find(|&z| jacobi(z, p) == -1)?;
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

/// The half-open interval `[lo, hi)` of a prime sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self, ArithError> {
        if lo == 0 || lo > hi {
            return Err(ArithError::InvalidRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> u64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_size: u64,
    pub max_segments: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_size: 1 << 16,
            max_segments: 1 << 14,
        }
    }
}

/// Base primes are sieved up to this bound; past it candidates are tested
/// individually with Miller-Rabin.
const BASE_PRIME_LIMIT: u64 = 1 << 24;

/// Primes `p` with `lo <= p < hi`, in increasing order.
pub fn sieve_primes(range: PrimeRange) -> Result<Vec<u64>, ArithError> {
    sieve_primes_with(range, SieveConfig::default())
}

pub fn sieve_primes_with(range: PrimeRange, cfg: SieveConfig) -> Result<Vec<u64>, ArithError> {
    let limit = cfg.segment_size.saturating_mul(cfg.max_segments);
    if range.width() > limit {
        return Err(ArithError::Capacity {
            width: range.width(),
            limit,
        });
    }
    let primes = PrimeIter::with_segment(range.lo, cfg.segment_size);
    let mut out = Vec::new();
    for p in primes {
        if p >= range.hi {
            break;
        }
        out.push(p);
    }
    Ok(out)
}

/// Simple sieve of Eratosthenes for `[2, n]`.
fn small_primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Unbounded ascending iterator over the primes `>= lo`, sieving one
/// segment at a time so memory stays proportional to the segment size.
#[derive(Debug, Clone)]
pub struct PrimeIter {
    next_lo: u64,
    segment_size: u64,
    base: Vec<u64>,
    base_limit: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl PrimeIter {
    pub fn starting_at(lo: u64) -> Self {
        Self::with_segment(lo, SieveConfig::default().segment_size)
    }

    pub fn with_segment(lo: u64, segment_size: u64) -> Self {
        Self {
            next_lo: lo.max(2),
            segment_size: segment_size.max(64),
            base: Vec::new(),
            base_limit: 0,
            buf: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) -> bool {
        let lo = self.next_lo;
        if lo == u64::MAX {
            return false;
        }
        let hi = lo.saturating_add(self.segment_size);
        self.next_lo = hi;
        self.buf.clear();
        self.pos = 0;

        let root = isqrt(hi - 1);
        if root > BASE_PRIME_LIMIT {
            self.buf.extend((lo..hi).filter(|&n| is_prime(n)));
            return true;
        }
        if root > self.base_limit {
            // Grow geometrically so repeated extensions stay cheap.
            let new_limit = (root * 2).clamp(1024, BASE_PRIME_LIMIT);
            self.base = small_primes_upto(new_limit);
            self.base_limit = new_limit;
        }

        let width = (hi - lo) as usize;
        let mut composite = vec![false; width];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let first = (p * p).max(lo.div_ceil(p) * p);
            let mut j = (first - lo) as usize;
            while j < width {
                composite[j] = true;
                j += p as usize;
            }
        }
        self.buf.extend(
            composite
                .iter()
                .enumerate()
                .filter(|&(_, &c)| !c)
                .map(|(i, _)| lo + i as u64),
        );
        true
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.buf.len() {
            if !self.fill() {
                return None;
            }
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}
