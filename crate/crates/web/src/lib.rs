//! Browser bindings for the static demo page in `www/`.
//!
//! Each export takes plain numbers and returns a JSON string; failures come
//! back as `{"error": "..."}` so the page needs no exception handling.

use hcf_core::analytic::{self, round4};
use hcf_core::forms::{self, principal_form};
use hcf_core::search::{self, ClassNumberTable, ScanValue, SearchConfig};
use hcf_core::FundamentalDiscriminant;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest bound the scan export accepts; keeps the page responsive.
pub const MAX_SCAN_BOUND: u64 = 500_000;

/// Largest discriminant accepted for explicit class-group listing.
pub const MAX_FORMS_D: u64 = 50_000_000;

#[derive(Serialize)]
struct Failure {
    error: String,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&Failure { error }),
    }
    .expect("plain data serialises")
}

fn discriminant(d: f64) -> Result<FundamentalDiscriminant, String> {
    if !(d.is_finite() && d >= 0.0 && d.fract() == 0.0 && d <= 9.0e15) {
        return Err(format!("{d} is not a positive integer"));
    }
    FundamentalDiscriminant::new(d as u64).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct ClassGroup {
    pub d: u64,
    pub h: u64,
    pub principal: [i64; 3],
    pub forms: Vec<[i64; 3]>,
}

pub fn class_group_of(d: f64) -> Result<ClassGroup, String> {
    let d = discriminant(d)?;
    if d.get() > MAX_FORMS_D {
        return Err(format!("d must be at most {MAX_FORMS_D}"));
    }
    let forms: Vec<[i64; 3]> = forms::reduced_forms(d)
        .into_iter()
        .map(|f| [f.a(), f.b(), f.c()])
        .collect();
    let p = principal_form(d);
    Ok(ClassGroup {
        d: d.get(),
        h: forms.len() as u64,
        principal: [p.a(), p.b(), p.c()],
        forms,
    })
}

#[derive(Debug, Serialize)]
pub struct SplitPrime {
    pub d: u64,
    pub h: u64,
    pub p: u64,
    pub witness_x: i64,
    pub witness_y: i64,
    pub log_disc: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn split_prime_of(d: f64) -> Result<SplitPrime, String> {
    let d = discriminant(d)?;
    if d.get() > MAX_FORMS_D {
        return Err(format!("d must be at most {MAX_FORMS_D}"));
    }
    let rec =
        search::smallest_split_prime(d, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let log_disc = analytic::log_disc(d, rec.h);
    Ok(SplitPrime {
        d: d.get(),
        h: rec.h,
        p: rec.p,
        witness_x: rec.witness.x,
        witness_y: rec.witness.y,
        log_disc,
        bound: analytic::bound_function(log_disc).map_err(|e| e.to_string())?,
        ratio: round4(rec.ratio),
    })
}

#[derive(Debug, Serialize)]
pub struct XScan {
    pub bound: u64,
    pub threshold: f64,
    /// Every fundamental `d` in `[16, bound]` with its `x_d`.
    pub d: Vec<u64>,
    pub x: Vec<f64>,
    /// Running minima, as `(d, h, x_d)`.
    pub records: Vec<(u64, u64, f64)>,
}

pub fn x_scan_of(bound: f64) -> Result<XScan, String> {
    if !(bound.is_finite() && bound >= 16.0 && bound <= MAX_SCAN_BOUND as f64) {
        return Err(format!("bound must lie in [16, {MAX_SCAN_BOUND}]"));
    }
    let bound = bound as u64;
    let cfg = SearchConfig::default();
    let table = ClassNumberTable::build(16, bound, &cfg, None).map_err(|e| e.to_string())?;
    let mut ds = Vec::new();
    let mut xs = Vec::new();
    for (d, h) in table.iter() {
        ds.push(d.get());
        xs.push(analytic::x_statistic(d, h).map_err(|e| e.to_string())?);
    }
    let records = search::scan_min_x(bound, &cfg, None)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| match r.value {
            ScanValue::Real(x) => (r.d.get(), r.key, x),
            ScanValue::Integer(n) => (r.d.get(), r.key, n as f64),
        })
        .collect();
    Ok(XScan {
        bound,
        threshold: analytic::chowla_threshold(),
        d: ds,
        x: xs,
        records,
    })
}

/// Reduced forms of discriminant `-d` (the class group's elements).
#[wasm_bindgen]
pub fn class_group(d: f64) -> String {
    to_json(class_group_of(d))
}

/// Least prime splitting completely in the Hilbert class field, with ratio.
#[wasm_bindgen]
pub fn split_prime(d: f64) -> String {
    to_json(split_prime_of(d))
}

/// `x_d` over all fundamental `d <= bound` plus the running-minimum records.
#[wasm_bindgen]
pub fn x_scan(bound: f64) -> String {
    to_json(x_scan_of(bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_group_json() {
        let g = class_group_of(23.0).unwrap();
        assert_eq!(g.h, 3);
        assert_eq!(g.forms, vec![[1, 1, 6], [2, -1, 3], [2, 1, 3]]);
        assert_eq!(g.principal, [1, 1, 6]);
        assert!(class_group(12.0).contains("\"error\""));
        assert!(class_group(-3.0).contains("\"error\""));
        assert!(class_group(2.5).contains("\"error\""));
    }

    #[test]
    fn split_prime_json() {
        let s = split_prime_of(163.0).unwrap();
        assert_eq!((s.h, s.p, s.witness_x, s.witness_y), (1, 41, 0, 1));
        assert_eq!(s.ratio, 4.1557);
        let v: serde_json::Value = serde_json::from_str(&split_prime(427.0)).unwrap();
        assert_eq!(v["p"], 107);
        assert!(split_prime(7.0).contains("too small"));
    }

    #[test]
    fn x_scan_json() {
        let s = x_scan_of(2000.0).unwrap();
        assert_eq!(s.d.len(), s.x.len());
        assert_eq!(s.d[0], 19);
        assert_eq!(s.records.last().unwrap().0, 163);
        assert!(x_scan(10.0).contains("\"error\""));
        assert!(x_scan(1e9).contains("\"error\""));
    }
}
