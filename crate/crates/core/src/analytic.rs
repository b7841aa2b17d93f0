//! Floating-point side: `L(1, chi_d)` from the class number formula and
//! from its Dirichlet series, the extreme-value statistic
//! `x_d = L(1, chi_d) log log d`, and the lower bound for the least split
//! prime together with the ratio `p / bound`.
//!
//! All logarithms are natural.

use std::f64::consts::PI;

use thiserror::Error;

use crate::arith::{chi_table, FundamentalDiscriminant};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// `e^gamma`.
pub const EXP_EULER_GAMMA: f64 = 1.781_072_417_990_197_985_236_504_103_107;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("d = {d} is below the minimum {min} for this quantity")]
    DiscriminantTooSmall { d: u64, min: u64 },
    #[error("log|D| = {0} must exceed e")]
    LogDiscTooSmall(f64),
    #[error("class number must be positive")]
    ZeroClassNumber,
    #[error("series needs at least d = {d} terms, got {terms}")]
    TooFewTerms { d: u64, terms: u64 },
    #[error("x = {0} must be positive")]
    NonPositive(f64),
}

/// `L(1, chi_d) = pi h / sqrt(d)`, valid when the unit group is `{+1, -1}`.
pub fn l_one_exact(d: FundamentalDiscriminant, h: u64) -> Result<f64, AnalyticError> {
    if d.get() <= 4 {
        return Err(AnalyticError::DiscriminantTooSmall { d: d.get(), min: 5 });
    }
    if h == 0 {
        return Err(AnalyticError::ZeroClassNumber);
    }
    Ok(PI * h as f64 / (d.get() as f64).sqrt())
}

/// Dirichlet series `sum chi_d(n)/n` truncated after whole periods of the
/// character, plus the mean of the partial sums over one further period.
///
/// The plain truncation after `N` terms is off by roughly `h / N`; averaging
/// the partial sums across a period cancels that leading term, leaving an
/// error well inside `d / N`.
pub fn l_one_series(d: FundamentalDiscriminant, terms: u64) -> Result<f64, AnalyticError> {
    let dv = d.get();
    if terms < dv {
        return Err(AnalyticError::TooFewTerms { d: dv, terms });
    }
    let table = chi_table(d);
    let periods = terms / dv;

    let mut sum = 0.0f64;
    for k in 0..periods {
        let base = (k * dv) as f64;
        let block: f64 = table
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| c as f64 / (base + r as f64))
            .sum();
        // r = 0 of the next block is n = (k + 1) d, where chi vanishes.
        sum += block;
    }

    let base = (periods * dv) as f64;
    let mut partial = 0.0f64;
    let mut acc = 0.0f64;
    for (r, &c) in table.iter().enumerate().skip(1) {
        if c != 0 {
            partial += c as f64 / (base + r as f64);
        }
        acc += partial;
    }
    Ok(sum + acc / dv as f64)
}

/// `x_d = L(1, chi_d) log log d`.
pub fn x_statistic(d: FundamentalDiscriminant, h: u64) -> Result<f64, AnalyticError> {
    if d.get() < 16 {
        return Err(AnalyticError::DiscriminantTooSmall {
            d: d.get(),
            min: 16,
        });
    }
    let l = l_one_exact(d, h)?;
    Ok(l * (d.get() as f64).ln().ln())
}

/// `pi^2 / (6 e^gamma)`, the limiting value of `x_d` along the family of
/// fields with unusually small `L(1, chi_d)`.
pub fn chowla_threshold() -> f64 {
    PI * PI / (6.0 * EXP_EULER_GAMMA)
}

/// `(3 e^gamma / (2 pi))^2`.
fn bound_constant() -> f64 {
    let k = 3.0 * EXP_EULER_GAMMA / (2.0 * PI);
    k * k
}

/// `g(y) = y log(2 log y) / log y`, increasing for `y > e`.
pub fn growth(y: f64) -> f64 {
    let ly = y.ln();
    y * (2.0 * ly).ln() / ly
}

/// Lower bound for the least prime splitting completely in a field with
/// `log|D| = log_disc`: `(3 e^gamma / (2 pi))^2 g(log|D|)^2`.
pub fn bound_function(log_disc: f64) -> Result<f64, AnalyticError> {
    if log_disc.is_nan() || log_disc <= std::f64::consts::E {
        return Err(AnalyticError::LogDiscTooSmall(log_disc));
    }
    let g = growth(log_disc);
    Ok(bound_constant() * g * g)
}

/// `log|D_H| = h log d` for the Hilbert class field `H`.
pub fn log_disc(d: FundamentalDiscriminant, h: u64) -> f64 {
    h as f64 * (d.get() as f64).ln()
}

/// `p / bound_function(h log d)`.
pub fn ratio(p: u64, d: FundamentalDiscriminant, h: u64) -> Result<f64, AnalyticError> {
    if h == 0 {
        return Err(AnalyticError::ZeroClassNumber);
    }
    Ok(p as f64 / bound_function(log_disc(d, h))?)
}

/// `f_d(x) = x sqrt(d) log d / (pi log log d)`; `f_d(x_d) = h log d`.
pub fn f_d(x: f64, d: FundamentalDiscriminant) -> Result<f64, AnalyticError> {
    if d.get() < 16 {
        return Err(AnalyticError::DiscriminantTooSmall {
            d: d.get(),
            min: 16,
        });
    }
    if x.is_nan() || x <= 0.0 {
        return Err(AnalyticError::NonPositive(x));
    }
    let dv = d.get() as f64;
    Ok(x * dv.sqrt() * dv.ln() / (PI * dv.ln().ln()))
}

/// Rounds half away from zero to 4 decimals, the precision of the
/// published ratios.
pub fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

#[derive(Debug, Clone, PartialEq)]
pub struct LValueReport {
    pub d: FundamentalDiscriminant,
    pub h: u64,
    pub l_exact: f64,
    pub l_series: f64,
    /// `None` when `d < 16`.
    pub x_d: Option<f64>,
}

impl LValueReport {
    pub const DEFAULT_TERMS: u64 = 1_000_000;

    pub fn compute(d: FundamentalDiscriminant, h: u64, terms: u64) -> Result<Self, AnalyticError> {
        let l_exact = l_one_exact(d, h)?;
        let l_series = l_one_series(d, terms.max(d.get()))?;
        let x_d = (d.get() >= 16).then(|| l_exact * (d.get() as f64).ln().ln());
        Ok(Self {
            d,
            h,
            l_exact,
            l_series,
            x_d,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub d: FundamentalDiscriminant,
    pub h: u64,
    pub log_disc: f64,
    pub bound: f64,
    pub p: Option<u64>,
    pub ratio: Option<f64>,
}

impl BoundReport {
    pub fn compute(
        d: FundamentalDiscriminant,
        h: u64,
        p: Option<u64>,
    ) -> Result<Self, AnalyticError> {
        if h == 0 {
            return Err(AnalyticError::ZeroClassNumber);
        }
        let log_disc = log_disc(d, h);
        let bound = bound_function(log_disc)?;
        Ok(Self {
            d,
            h,
            log_disc,
            bound,
            p,
            ratio: p.map(|p| p as f64 / bound),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_fundamental;
    use crate::forms::class_number;

    fn fd(d: u64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    // Reference values below were evaluated with 30-digit arithmetic.
    const L_163: f64 = 0.246_068_527_552_960_24;
    const L_427: f64 = 0.304_064_648_633_882_55;
    const X_163: f64 = 0.400_603_090_846_316_7;
    const BOUND_163: f64 = 9.866_038_853_987_92;
    const THRESHOLD: f64 = 0.923_563_831_674_181_4;
    const L_3: f64 = 0.604_599_788_078_072_6;

    #[test]
    fn constants() {
        assert!((EULER_GAMMA.exp() - EXP_EULER_GAMMA).abs() < 1e-15);
        assert!((chowla_threshold() - THRESHOLD).abs() < 1e-12);
        assert!((chowla_threshold() - 0.9235646).abs() < 1e-6);
        assert!(chowla_threshold() < 1.0 && chowla_threshold() > 0.9);
    }

    #[test]
    fn l_exact_examples() {
        assert!((l_one_exact(fd(163), 1).unwrap() - L_163).abs() < 1e-15);
        assert!((l_one_exact(fd(427), 2).unwrap() - L_427).abs() < 1e-15);
        assert_eq!(
            l_one_exact(fd(4), 1),
            Err(AnalyticError::DiscriminantTooSmall { d: 4, min: 5 })
        );
        assert_eq!(l_one_exact(fd(7), 0), Err(AnalyticError::ZeroClassNumber));
    }

    #[test]
    fn l_exact_inverts_to_class_number() {
        for d in (5..3000).filter(|&d| is_fundamental(d)) {
            let d = fd(d);
            let h = class_number(d);
            let l = l_one_exact(d, h).unwrap();
            assert_eq!(((d.get() as f64).sqrt() * l / PI).round() as u64, h);
        }
    }

    #[test]
    fn l_series_examples() {
        let s = l_one_series(fd(163), 1_000_000).unwrap();
        assert!((s - L_163).abs() < 1e-3, "{s}");
        let s = l_one_series(fd(427), 1_000_000).unwrap();
        assert!((s - L_427).abs() < 1e-3, "{s}");
        // d = 3 has six units; the series still converges to pi/(3 sqrt 3)
        let s = l_one_series(fd(3), 100_000).unwrap();
        assert!((s - L_3).abs() < 1e-6, "{s}");
        assert_eq!(
            l_one_series(fd(163), 100),
            Err(AnalyticError::TooFewTerms { d: 163, terms: 100 })
        );
    }

    #[test]
    fn l_series_is_much_better_than_truncation() {
        for d in [1555u64, 3763, 9907] {
            let d = fd(d);
            let exact = l_one_exact(d, class_number(d)).unwrap();
            let s = l_one_series(d, 100 * d.get()).unwrap();
            assert!((s - exact).abs() < 1e-6, "d = {d}: {s} vs {exact}");
        }
    }

    #[test]
    fn x_statistic_examples() {
        assert!((x_statistic(fd(163), 1).unwrap() - X_163).abs() < 1e-14);
        assert!(x_statistic(fd(19), 1).unwrap() > 0.0);
        assert_eq!(
            x_statistic(fd(15), 2),
            Err(AnalyticError::DiscriminantTooSmall { d: 15, min: 16 })
        );
    }

    #[test]
    fn bound_and_ratio() {
        let b = bound_function(163f64.ln()).unwrap();
        assert!((b - BOUND_163).abs() < 1e-12);
        assert!((41.0 / b - 4.1557).abs() < 5e-5);
        assert!((107.0 / bound_function(2.0 * 427f64.ln()).unwrap() - 2.4287).abs() < 5e-5);
        assert!((ratio(41, fd(163), 1).unwrap() - 4.1557).abs() < 5e-5);
        assert!((ratio(595939, fd(2383747), 98).unwrap() - 2.9359).abs() < 5e-5);
        assert!((ratio(370159, fd(1480627), 99).unwrap() - 1.9012).abs() < 5e-5);
        assert!(bound_function(std::f64::consts::E).is_err());
        assert!(bound_function(f64::NAN).is_err());
        assert_eq!(ratio(41, fd(163), 0), Err(AnalyticError::ZeroClassNumber));
    }

    #[test]
    fn f_d_identity() {
        for (d, h) in [(163u64, 1u64), (427, 2)] {
            let d = fd(d);
            let x = x_statistic(d, h).unwrap();
            let lhs = f_d(x, d).unwrap();
            let rhs = log_disc(d, h);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
        assert!(f_d(1.0, fd(163)).unwrap() < f_d(2.0, fd(163)).unwrap());
        assert!(f_d(0.0, fd(163)).is_err());
        assert!(f_d(1.0, fd(11)).is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round4(4.155_669_829), 4.1557);
        assert_eq!(round4(2.000_05), 2.0001);
        assert_eq!(round4(-2.000_05), -2.0001);
    }

    #[test]
    fn reports() {
        let r = LValueReport::compute(fd(163), 1, 1_000_000).unwrap();
        assert!((r.l_exact - L_163).abs() < 1e-15);
        assert!((r.l_series - r.l_exact).abs() < 1e-3);
        assert!((r.x_d.unwrap() - X_163).abs() < 1e-14);
        assert_eq!(LValueReport::compute(fd(11), 1, 1000).unwrap().x_d, None);

        let b = BoundReport::compute(fd(163), 1, Some(41)).unwrap();
        assert!((b.bound - BOUND_163).abs() < 1e-12);
        assert!((b.ratio.unwrap() - 4.1557).abs() < 5e-5);
        assert!(BoundReport::compute(fd(163), 0, None).is_err());
    }
}
