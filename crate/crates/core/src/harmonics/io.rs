//! Plain-text `l,m,value` serialization of spectral fields.

use std::fs;
use std::path::Path;

use super::SpectralField;
use crate::error::{Error, Result};

const HEADER: &str = "l,m,value";

impl SpectralField {
    /// One row per coefficient, sorted by `(l, m)`, 17 significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(32 * self.coeffs().len() + 16);
        out.push_str(HEADER);
        out.push('\n');
        for (l, m, c) in self.iter() {
            out.push_str(&format!("{l},{m},{c:.16e}\n"));
        }
        out
    }

    /// Parses the CSV form. Missing rows are zero; `lmax` is the largest
    /// degree present.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line == HEADER) {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected 'l,m,value', got '{line}'", lineno + 1));
            let mut parts = line.split(',');
            let (l, m, v) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(m), Some(v), None) => (l, m, v),
                _ => return Err(bad()),
            };
            let l: usize = l.trim().parse().map_err(|_| bad())?;
            let m: i64 = m.trim().parse().map_err(|_| bad())?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            if l == 0 || m.unsigned_abs() as usize > l {
                return Err(Error::Parse(format!("line {}: invalid (l, m) = ({l}, {m})", lineno + 1)));
            }
            rows.push((l, m, v));
        }
        let lmax = rows.iter().map(|r| r.0).max().unwrap_or(1);
        let mut f = SpectralField::zeros(lmax);
        for (l, m, v) in rows {
            f.set(l, m, v);
        }
        Ok(f)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let mut f = SpectralField::zeros(4);
        f.set(1, 0, 1.0 / 3.0);
        f.set(2, -2, -std::f64::consts::PI * 1e-17);
        f.set(4, 3, 123456.789e10);
        let back = SpectralField::from_csv_str(&f.to_csv_string()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(SpectralField::from_csv_str("l,m,value\n2,3,1.0\n").is_err());
        assert!(SpectralField::from_csv_str("1,0\n").is_err());
        assert!(SpectralField::from_csv_str("0,0,1.0\n").is_err());
    }

    #[test]
    fn rows_are_sorted() {
        let f = SpectralField::single(2, 2, -1);
        let text = f.to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "l,m,value");
        assert!(lines[1].starts_with("1,-1,"));
        assert!(lines[8].starts_with("2,2,"));
    }
}
