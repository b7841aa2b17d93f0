//! Positive-definite binary quadratic forms `a x^2 + b x y + c y^2` of
//! discriminant `-d`.
//!
//! Reduced forms of discriminant `-d` are in bijection with the ideal class
//! group of `Q(sqrt(-d))`, so counting them gives the class number. The
//! principal form stands for the trivial class: a prime `p` that splits in
//! `K` has principal prime factors (and so splits completely in the Hilbert
//! class field) exactly when the principal form represents `p`.

use std::fmt;

use thiserror::Error;

use crate::arith::{chi, is_prime, isqrt, sqrt_mod, FundamentalDiscriminant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} is ramified in Q(sqrt(-{d}))")]
    Ramified { d: u64, p: u64 },
    #[error("{p} is inert in Q(sqrt(-{d}))")]
    Inert { d: u64, p: u64 },
    #[error("expected an odd prime, got {0}")]
    EvenPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryQuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, FormError> {
        let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
        if a <= 0 || disc >= 0 || -disc > i64::MAX as i128 {
            return Err(FormError::NotPositiveDefinite { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    /// Construction for callers that already know the form is valid.
    fn raw(a: i64, b: i64, c: i64) -> Self {
        debug_assert!(Self::new(a, b, c).is_ok(), "({a}, {b}, {c})");
        Self { a, b, c }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn coefficients(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    /// `b^2 - 4ac`, always negative.
    pub fn discriminant(&self) -> i64 {
        (self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128) as i64
    }

    /// `d` such that the discriminant is `-d`.
    pub fn d(&self) -> u64 {
        self.discriminant().unsigned_abs()
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The unique reduced form properly equivalent to `self` (Gauss
    /// reduction).
    pub fn reduce(&self) -> Self {
        let d = self.d() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            // Translate b into (-a, a].
            if b <= -a || b > a {
                let two_a = 2 * a;
                let mut r = b.rem_euclid(two_a);
                if r > a {
                    r -= two_a;
                }
                b = r;
                c = (b * b + d) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            } else {
                break;
            }
        }
        if a == c && b < 0 {
            b = -b;
        }
        Self::raw(a as i64, b as i64, c as i64)
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A certificate `f(x, y) = value` for the principal form `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepresentationWitness {
    pub x: i64,
    pub y: i64,
    pub value: u64,
}

/// Reduced representative of the principal class: `x^2 + (d/4) y^2` or
/// `x^2 + x y + ((1 + d)/4) y^2`.
pub fn principal_form(d: FundamentalDiscriminant) -> BinaryQuadraticForm {
    let d = d.get();
    if d.is_multiple_of(4) {
        BinaryQuadraticForm::raw(1, 0, (d / 4) as i64)
    } else {
        BinaryQuadraticForm::raw(1, 1, ((d + 1) / 4) as i64)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Walks every reduced form of discriminant `-d`, calling `emit(a, b, c)`.
///
/// `b` runs over `0..=isqrt(d/3)` with the parity of `d`; each factorisation
/// `(b^2 + d)/4 = a c` with `b <= a <= c` gives `(a, b, c)` and, off the
/// boundary `b = 0`, `b = a`, `a = c`, also `(a, -b, c)`.
fn for_each_reduced(d: u64, mut emit: impl FnMut(u64, i64, u64)) {
    let bmax = isqrt(d / 3);
    let mut b = d & 1;
    while b <= bmax {
        let m = (b * b + d) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m.is_multiple_of(a) {
                let c = m / a;
                debug_assert_eq!(gcd(gcd(a, b), c), 1, "imprimitive form for d = {d}");
                emit(a, b as i64, c);
                if b != 0 && b != a && a != c {
                    emit(a, -(b as i64), c);
                }
            }
            a += 1;
        }
        b += 2;
    }
}

/// All reduced forms of discriminant `-d`, sorted by `(a, b, c)`.
pub fn reduced_forms(d: FundamentalDiscriminant) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    for_each_reduced(d.get(), |a, b, c| {
        out.push(BinaryQuadraticForm::raw(a as i64, b, c as i64))
    });
    out.sort_unstable();
    out
}

/// The class number `h(-d)`.
pub fn class_number(d: FundamentalDiscriminant) -> u64 {
    let mut h = 0;
    for_each_reduced(d.get(), |_, _, _| h += 1);
    h
}

/// Searches for `(x, y)` with `f(x, y) = p` for the principal form `f`,
/// with `y >= 1` minimal. Primality of `p` is not checked.
fn principal_witness(d: u64, p: u64) -> Option<RepresentationWitness> {
    if d.is_multiple_of(4) {
        // x^2 + k y^2 = p
        let k = d / 4;
        (1..=isqrt(p / k)).find_map(|y| {
            let r = p - k * y * y;
            let x = isqrt(r);
            (x * x == r).then_some(RepresentationWitness {
                x: x as i64,
                y: y as i64,
                value: p,
            })
        })
    } else {
        // (2x + y)^2 + d y^2 = 4p
        let four_p = 4 * p as u128;
        let ymax = isqrt((four_p / d as u128).min(u64::MAX as u128) as u64);
        (1..=ymax).find_map(|y| {
            let r = four_p - d as u128 * y as u128 * y as u128;
            let u = isqrt(r as u64);
            (u as u128 * u as u128 == r && (u ^ y) & 1 == 0).then(|| RepresentationWitness {
                x: (u as i64 - y as i64) / 2,
                y: y as i64,
                value: p,
            })
        })
    }
}

/// A witness that the principal form represents the prime `p`, if it does.
///
/// The witness has minimal `y >= 1`, and for that `y` the larger of the two
/// possible `x`, which is the least nonnegative one whenever one exists.
pub fn represents_prime_principally(
    d: FundamentalDiscriminant,
    p: u64,
) -> Result<Option<RepresentationWitness>, FormError> {
    if !is_prime(p) {
        return Err(FormError::NotPrime(p));
    }
    if d.get().is_multiple_of(p) {
        return Err(FormError::Ramified { d: d.get(), p });
    }
    Ok(principal_witness(d.get(), p))
}

/// Whether the prime `p` splits completely in the Hilbert class field of
/// `Q(sqrt(-d))`.
pub fn splits_completely(d: FundamentalDiscriminant, p: u64) -> bool {
    splitting_witness(d, p).is_some()
}

/// Like [`splits_completely`], returning the representation certificate.
pub fn splitting_witness(d: FundamentalDiscriminant, p: u64) -> Option<RepresentationWitness> {
    debug_assert!(is_prime(p), "{p} is not prime");
    if d.get().is_multiple_of(p) {
        return None;
    }
    let w = principal_witness(d.get(), p);
    debug_assert!(w.is_none() || chi(d, p) == 1);
    w
}

/// Independent splitting test: build a form `(p, b, c)` of discriminant
/// `-d` from a square root of `-d` modulo `4p`, reduce it, and compare with
/// the principal form.
pub fn splits_completely_via_reduction(
    d: FundamentalDiscriminant,
    p: u64,
) -> Result<bool, FormError> {
    if p.is_multiple_of(2) {
        return Err(FormError::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(FormError::NotPrime(p));
    }
    let dv = d.get();
    if dv.is_multiple_of(p) {
        return Err(FormError::Ramified { d: dv, p });
    }
    let Some(mut b) = sqrt_mod(d.negated(), p) else {
        return Err(FormError::Inert { d: dv, p });
    };
    // b must have the parity of d so that b^2 + d = 0 (mod 4).
    if (b ^ dv) & 1 == 1 {
        b = p - b;
    }
    let num = b as u128 * b as u128 + dv as u128;
    debug_assert_eq!(num % (4 * p as u128), 0);
    let c = (num / (4 * p as u128)) as i64;
    let form = BinaryQuadraticForm::new(p as i64, b as i64, c)?;
    Ok(form.reduce() == principal_form(d))
}
