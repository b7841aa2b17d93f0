//! Search drivers: the least prime splitting completely in the Hilbert
//! class field of a given field, scans over ranges of discriminants, and
//! assembly of the full table of split primes.
//!
//! Scans count reduced forms for a whole range of discriminants at once,
//! split into chunks that run in parallel on the ambient rayon pool. Chunk
//! results are concatenated in `d` order, so output does not depend on the
//! number of workers.

use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::{self, AnalyticError};
use crate::arith::{is_fundamental, FundamentalDiscriminant, PrimeIter};
use crate::cache::{self, ClassNumberCache};
use crate::fixture::{self, TableFixtureRow};
use crate::forms::{splits_completely, splitting_witness, RepresentationWitness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("no completely split prime for d = {d} below the ceiling {ceiling}")]
    SearchLimit { d: u64, ceiling: u64 },
    #[error("d = {0} is too small, need d > 16")]
    TooSmall(u64),
    #[error("scan bound {bound} exceeds the configured limit {limit}")]
    Capacity { bound: u64, limit: u64 },
    #[error("scan bound {0} is below 16")]
    BoundTooSmall(u64),
    #[error("no fundamental discriminant up to {bound} has class number {h}")]
    NoDiscriminant { h: u64, bound: u64 },
    #[error("the embedded table only covers h <= {max}, requested {requested}")]
    FixtureRange { requested: u64, max: u64 },
    #[error("prime {p} < d/4 splits completely for d = {d}")]
    ParanoidViolation { d: u64, p: u64 },
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// The split-prime search gives up past `ceiling_factor * d`.
    pub ceiling_factor: u64,
    /// Largest discriminant bound accepted by the scans.
    pub scan_limit: u64,
    /// Discriminants per parallel scan chunk.
    pub chunk_size: u64,
    /// Also confirm that no prime below `d/4` splits completely.
    pub paranoid: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            ceiling_factor: 100,
            scan_limit: 20_000_000,
            chunk_size: 1 << 16,
            paranoid: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitPrimeRecord {
    pub d: FundamentalDiscriminant,
    pub h: u64,
    pub p: u64,
    pub witness: RepresentationWitness,
    pub ratio: f64,
    /// Set when the paranoid check ran and found no smaller split prime.
    pub verified_no_smaller: bool,
}

/// The least prime splitting completely in the Hilbert class field of
/// `Q(sqrt(-d))`.
pub fn smallest_split_prime(
    d: FundamentalDiscriminant,
    cfg: &SearchConfig,
) -> Result<SplitPrimeRecord, SearchError> {
    smallest_split_prime_cached(d, cfg, None)
}

pub fn smallest_split_prime_cached(
    d: FundamentalDiscriminant,
    cfg: &SearchConfig,
    cache: Option<&ClassNumberCache>,
) -> Result<SplitPrimeRecord, SearchError> {
    let dv = d.get();
    if dv <= 16 {
        return Err(SearchError::TooSmall(dv));
    }
    let h = cache::class_number(cache, d);
    let ceiling = dv.saturating_mul(cfg.ceiling_factor);
    // A completely split prime is represented by the principal form, so
    // it is at least d/4.
    let floor = dv.div_ceil(4);

    let (p, witness) = PrimeIter::starting_at(floor)
        .take_while(|&p| p <= ceiling)
        .find_map(|p| splitting_witness(d, p).map(|w| (p, w)))
        .ok_or(SearchError::SearchLimit { d: dv, ceiling })?;

    if cfg.paranoid {
        if let Some(q) = PrimeIter::starting_at(2)
            .take_while(|&q| q < floor)
            .find(|&q| splits_completely(d, q))
        {
            return Err(SearchError::ParanoidViolation { d: dv, p: q });
        }
    }

    Ok(SplitPrimeRecord {
        d,
        h,
        p,
        witness,
        ratio: analytic::ratio(p, d, h)?,
        verified_no_smaller: cfg.paranoid,
    })
}

/// Counts reduced forms `(a, b, c)` of discriminant `-d` for every `d` in
/// `[lo, hi)`, by walking `a`, `b` and then all `c` landing in the range.
///
/// For non-fundamental `d` the count includes imprimitive forms.
pub fn count_reduced_forms(lo: u64, hi: u64) -> Vec<u32> {
    let mut counts = vec![0u32; hi.saturating_sub(lo) as usize];
    if hi <= lo {
        return counts;
    }
    let mut a = 1u64;
    // Every reduced form has d >= 3a^2.
    while 3 * a * a < hi {
        let four_a = 4 * a;
        for b in 0..=a {
            let b2 = b * b;
            let c_lo = a.max((lo + b2).div_ceil(four_a));
            let c_hi = (hi - 1 + b2) / four_a;
            let mut c = c_lo;
            while c <= c_hi {
                // (a, b, c) always; (a, -b, c) off the boundary.
                let twin = b != 0 && b != a && c != a;
                counts[(four_a * c - b2 - lo) as usize] += 1 + twin as u32;
                c += 1;
            }
        }
        a += 1;
    }
    counts
}

/// Class numbers of every fundamental discriminant in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNumberTable {
    lo: u64,
    /// `h(-d)` at index `d - lo`; zero for non-fundamental `d`.
    h: Vec<u32>,
}

impl ClassNumberTable {
    pub fn build(
        lo: u64,
        hi: u64,
        cfg: &SearchConfig,
        cache: Option<&ClassNumberCache>,
    ) -> Result<Self, SearchError> {
        if hi > cfg.scan_limit {
            return Err(SearchError::Capacity {
                bound: hi,
                limit: cfg.scan_limit,
            });
        }
        let lo = lo.max(1);
        let end = hi + 1;
        let chunk = cfg.chunk_size.max(1);
        let starts: Vec<u64> = (lo..end).step_by(chunk as usize).collect();
        let parts: Vec<Vec<u32>> = starts
            .par_iter()
            .map(|&s| {
                let e = (s + chunk).min(end);
                if let Some(cached) = cache.and_then(|c| cached_chunk(c, s, e)) {
                    return cached;
                }
                let mut counts = count_reduced_forms(s, e);
                for (i, h) in counts.iter_mut().enumerate() {
                    if !is_fundamental(s + i as u64) {
                        *h = 0;
                    }
                }
                counts
            })
            .collect();
        let h: Vec<u32> = parts.concat();
        if let Some(c) = cache {
            c.extend(
                h.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, &v)| (lo + i as u64, v as u64)),
            );
        }
        Ok(Self { lo, h })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn get(&self, d: u64) -> Option<u64> {
        let i = d.checked_sub(self.lo)? as usize;
        self.h.get(i).copied().filter(|&h| h != 0).map(u64::from)
    }

    /// `(d, h)` for every fundamental `d` in the table, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (FundamentalDiscriminant, u64)> + '_ {
        self.h
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0)
            .map(|(i, &h)| {
                (
                    FundamentalDiscriminant::new_unchecked(self.lo + i as u64),
                    h as u64,
                )
            })
    }

    pub fn max_discriminant(&self, h: u64) -> Option<FundamentalDiscriminant> {
        let i = self.h.iter().rposition(|&v| v != 0 && v as u64 == h)?;
        Some(FundamentalDiscriminant::new_unchecked(self.lo + i as u64))
    }
}

fn cached_chunk(cache: &ClassNumberCache, s: u64, e: u64) -> Option<Vec<u32>> {
    (s..e)
        .map(|d| {
            if is_fundamental(d) {
                cache.get(d).map(|h| h as u32)
            } else {
                Some(0)
            }
        })
        .collect()
}

/// The largest fundamental `d <= bound` with class number `h`.
pub fn max_discriminant_for_class_number(
    h: u64,
    bound: u64,
    cfg: &SearchConfig,
) -> Result<Option<FundamentalDiscriminant>, SearchError> {
    Ok(ClassNumberTable::build(3, bound, cfg, None)?.max_discriminant(h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    MaxDiscPerH,
    MinXStatistic,
}

impl ScanKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanKind::MaxDiscPerH => "max-disc-per-h",
            ScanKind::MinXStatistic => "min-x-statistic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanValue {
    Real(f64),
    Integer(u64),
}

/// One record-holder from a discriminant scan. `key` is the class number
/// of `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub kind: ScanKind,
    pub key: u64,
    pub d: FundamentalDiscriminant,
    pub value: ScanValue,
}

/// Every new running minimum of `x_d` as `d` walks the fundamental
/// discriminants in `[16, bound]`; the last record is the global minimum.
pub fn scan_min_x(
    bound: u64,
    cfg: &SearchConfig,
    cache: Option<&ClassNumberCache>,
) -> Result<Vec<ScanRecord>, SearchError> {
    if bound < 16 {
        return Err(SearchError::BoundTooSmall(bound));
    }
    let table = ClassNumberTable::build(16, bound, cfg, cache)?;
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for (d, h) in table.iter() {
        let x = analytic::x_statistic(d, h)?;
        if x < best {
            best = x;
            out.push(ScanRecord {
                kind: ScanKind::MinXStatistic,
                key: h,
                d,
                value: ScanValue::Real(x),
            });
        }
    }
    Ok(out)
}

/// For each `h` in `1..=hmax`, the largest fundamental `d <= bound` with
/// that class number; `value` is how many such `d` the range holds.
pub fn scan_max_disc(
    hmax: u64,
    bound: u64,
    cfg: &SearchConfig,
    cache: Option<&ClassNumberCache>,
) -> Result<Vec<ScanRecord>, SearchError> {
    let table = ClassNumberTable::build(3, bound, cfg, cache)?;
    let mut counts = vec![0u64; hmax as usize + 1];
    for (_, h) in table.iter() {
        if h <= hmax {
            counts[h as usize] += 1;
        }
    }
    Ok((1..=hmax)
        .filter_map(|h| {
            table.max_discriminant(h).map(|d| ScanRecord {
                kind: ScanKind::MaxDiscPerH,
                key: h,
                d,
                value: ScanValue::Integer(counts[h as usize]),
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscSource {
    /// Discriminants from the embedded table.
    Fixture,
    /// Largest discriminant per class number up to the bound.
    Scan { bound: u64 },
}

/// One freshly computed record per `h` in `1..=hmax`.
pub fn build_table(
    hmax: u64,
    source: DiscSource,
    cfg: &SearchConfig,
    cache: Option<&ClassNumberCache>,
) -> Result<Vec<SplitPrimeRecord>, SearchError> {
    let discs: Vec<FundamentalDiscriminant> = match source {
        DiscSource::Fixture => {
            let rows = fixture::table1();
            if hmax > rows.len() as u64 {
                return Err(SearchError::FixtureRange {
                    requested: hmax,
                    max: rows.len() as u64,
                });
            }
            rows[..hmax as usize]
                .iter()
                .map(|r: &TableFixtureRow| {
                    FundamentalDiscriminant::new(r.d).expect("fixture d is fundamental")
                })
                .collect()
        }
        DiscSource::Scan { bound } => {
            let table = ClassNumberTable::build(3, bound, cfg, cache)?;
            (1..=hmax)
                .map(|h| {
                    table
                        .max_discriminant(h)
                        .ok_or(SearchError::NoDiscriminant { h, bound })
                })
                .collect::<Result<_, _>>()?
        }
    };
    discs
        .par_iter()
        .map(|&d| smallest_split_prime_cached(d, cfg, cache))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::chi;
    use crate::forms::class_number;

    fn fd(d: u64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    #[test]
    fn split_prime_examples() {
        let cfg = SearchConfig::default();
        let r = smallest_split_prime(fd(163), &cfg).unwrap();
        assert_eq!((r.h, r.p), (1, 41));
        assert_eq!((r.witness.x, r.witness.y), (0, 1));
        assert!((r.ratio - 4.1557).abs() < 5e-5);
        assert!(!r.verified_no_smaller);
        assert_eq!(smallest_split_prime(fd(10627), &cfg).unwrap().p, 2657);
        assert_eq!(smallest_split_prime(fd(2383747), &cfg).unwrap().p, 595939);
        assert_eq!(
            smallest_split_prime(fd(15), &cfg),
            Err(SearchError::TooSmall(15))
        );
    }

    #[test]
    fn search_limit() {
        let cfg = SearchConfig {
            ceiling_factor: 0,
            ..SearchConfig::default()
        };
        assert_eq!(
            smallest_split_prime(fd(163), &cfg),
            Err(SearchError::SearchLimit { d: 163, ceiling: 0 })
        );
    }

    #[test]
    fn paranoid_small_discriminants() {
        let cfg = SearchConfig {
            paranoid: true,
            ..SearchConfig::default()
        };
        for d in (17..=10_000).filter(|&d| is_fundamental(d)) {
            let r = smallest_split_prime(fd(d), &cfg).unwrap();
            assert!(r.verified_no_smaller);
            assert!(4 * r.p >= d);
            assert_eq!(chi(r.d, r.p), 1);
        }
    }

    #[test]
    fn bulk_counts_match_per_discriminant() {
        let counts = count_reduced_forms(3, 20_000);
        for (i, &h) in counts.iter().enumerate() {
            let d = 3 + i as u64;
            if is_fundamental(d) {
                assert_eq!(h as u64, class_number(fd(d)), "d = {d}");
            }
        }
        // an offset window
        let lo = 1_000_003;
        let w = count_reduced_forms(lo, lo + 500);
        for (i, &h) in w.iter().enumerate() {
            let d = lo + i as u64;
            if is_fundamental(d) {
                assert_eq!(h as u64, class_number(fd(d)), "d = {d}");
            }
        }
        assert!(count_reduced_forms(10, 10).is_empty());
    }

    #[test]
    fn table_chunking_is_invisible() {
        let small = SearchConfig {
            chunk_size: 97,
            ..SearchConfig::default()
        };
        let a = ClassNumberTable::build(3, 5000, &small, None).unwrap();
        let b = ClassNumberTable::build(3, 5000, &SearchConfig::default(), None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(163), Some(1));
        assert_eq!(a.get(12), None);
        assert_eq!(a.get(2), None);
    }

    #[test]
    fn max_discriminant_examples() {
        let cfg = SearchConfig::default();
        assert_eq!(
            max_discriminant_for_class_number(1, 20_000, &cfg),
            Ok(Some(fd(163)))
        );
        assert_eq!(
            max_discriminant_for_class_number(2, 20_000, &cfg),
            Ok(Some(fd(427)))
        );
        assert_eq!(
            max_discriminant_for_class_number(10, 20_000, &cfg),
            Ok(Some(fd(13843)))
        );
        assert_eq!(max_discriminant_for_class_number(90, 100, &cfg), Ok(None));
        assert!(matches!(
            max_discriminant_for_class_number(1, u64::MAX, &cfg),
            Err(SearchError::Capacity { .. })
        ));
    }

    #[test]
    fn min_x_records_strictly_decrease() {
        let recs = scan_min_x(20_000, &SearchConfig::default(), None).unwrap();
        assert!(!recs.is_empty());
        let vals: Vec<f64> = recs
            .iter()
            .map(|r| match r.value {
                ScanValue::Real(x) => x,
                ScanValue::Integer(_) => unreachable!(),
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(*vals.last().unwrap() > 0.0);
        assert_eq!(recs[0].d, fd(19));
        assert_eq!(
            scan_min_x(15, &SearchConfig::default(), None),
            Err(SearchError::BoundTooSmall(15))
        );
    }

    #[test]
    fn max_disc_scan() {
        let recs = scan_max_disc(10, 20_000, &SearchConfig::default(), None).unwrap();
        let ds: Vec<u64> = recs.iter().map(|r| r.d.get()).collect();
        assert_eq!(
            ds,
            [163, 427, 907, 1555, 2683, 3763, 5923, 6307, 10627, 13843]
        );
        // the nine imaginary quadratic fields of class number one
        assert_eq!(recs[0].value, ScanValue::Integer(9));
    }

    #[test]
    fn build_table_sources() {
        let cfg = SearchConfig::default();
        let one = build_table(1, DiscSource::Fixture, &cfg, None).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].h, one[0].d.get(), one[0].p), (1, 163, 41));
        assert_eq!((one[0].witness.x, one[0].witness.y), (0, 1));
        assert!(matches!(
            build_table(100, DiscSource::Fixture, &cfg, None),
            Err(SearchError::FixtureRange {
                requested: 100,
                max: 99
            })
        ));
        assert!(matches!(
            build_table(50, DiscSource::Scan { bound: 1000 }, &cfg, None),
            Err(SearchError::NoDiscriminant { bound: 1000, .. })
        ));
    }

    #[test]
    fn cache_is_filled_by_scans() {
        let cache = ClassNumberCache::new();
        let cfg = SearchConfig::default();
        let cold = scan_min_x(5000, &cfg, Some(&cache)).unwrap();
        assert_eq!(cache.get(163), Some(1));
        let warm = scan_min_x(5000, &cfg, Some(&cache)).unwrap();
        assert_eq!(cold, warm);
    }
}
