//! The published table of least completely split primes, compiled into the
//! crate so verification works without any files on disk.

use std::sync::OnceLock;

use thiserror::Error;

const TABLE1_CSV: &str = include_str!("../data/table1.csv");

pub const TABLE_HEADER: &str = "h,d,p,ratio";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing header {TABLE_HEADER:?}")]
    Header,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFixtureRow {
    pub h: u64,
    pub d: u64,
    pub p: u64,
    /// The ratio exactly as printed, four decimals.
    pub ratio_4dp: String,
}

impl TableFixtureRow {
    pub fn ratio(&self) -> f64 {
        self.ratio_4dp.parse().expect("validated at parse time")
    }
}

/// Parses `h,d,p,ratio` CSV (header required, LF or CRLF line endings).
pub fn parse_table_csv(text: &str) -> Result<Vec<TableFixtureRow>, FixtureError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == TABLE_HEADER => {}
        _ => return Err(FixtureError::Header),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| FixtureError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = line.split(',').collect();
        let [h, d, p, ratio] = fields[..] else {
            return Err(err("expected 4 fields"));
        };
        let int = |s: &str| s.parse::<u64>().map_err(|e| err(&e.to_string()));
        ratio.parse::<f64>().map_err(|e| err(&e.to_string()))?;
        rows.push(TableFixtureRow {
            h: int(h)?,
            d: int(d)?,
            p: int(p)?,
            ratio_4dp: ratio.to_string(),
        });
    }
    Ok(rows)
}

/// All 99 rows, `h = 1..=99` in order.
pub fn table1() -> &'static [TableFixtureRow] {
    static ROWS: OnceLock<Vec<TableFixtureRow>> = OnceLock::new();
    ROWS.get_or_init(|| parse_table_csv(TABLE1_CSV).expect("embedded table is well formed"))
}

pub fn table1_row(h: u64) -> Option<&'static TableFixtureRow> {
    table1().get(h.checked_sub(1)? as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_fundamental;

    #[test]
    fn embedded_table_shape() {
        let rows = table1();
        assert_eq!(rows.len(), 99);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.h, i as u64 + 1);
            assert!(is_fundamental(r.d), "d = {}", r.d);
            assert_eq!(r.ratio_4dp.split('.').nth(1).map(str::len), Some(4));
        }
        assert_eq!(
            table1_row(1),
            Some(&TableFixtureRow {
                h: 1,
                d: 163,
                p: 41,
                ratio_4dp: "4.1557".into()
            })
        );
        let r50 = table1_row(50).unwrap();
        assert_eq!((r50.d, r50.p, r50.ratio()), (389467, 97367, 2.0743));
        let r98 = table1_row(98).unwrap();
        assert_eq!(
            (r98.d, r98.p, r98.ratio_4dp.as_str()),
            (2383747, 595939, "2.9359")
        );
        assert_eq!(table1_row(0), None);
        assert_eq!(table1_row(100), None);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_table_csv("x\n"), Err(FixtureError::Header));
        assert!(matches!(
            parse_table_csv("h,d,p,ratio\n1,2,3\n"),
            Err(FixtureError::Parse { line: 2, .. })
        ));
        assert!(parse_table_csv("h,d,p,ratio\r\n1,163,41,4.1557\r\n").is_ok());
    }
}
