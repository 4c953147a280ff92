//! Serialisation helpers: complex numbers as `[re, im]`, flag literals,
//! CSV tables and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use tempfile::NamedTempFile;

use crate::error::{AppError, Result};

/// A complex number serialised as the two-element array `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx(pub Complex64);

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx(z)
    }
}

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(deserializer)?;
        Ok(Cx(Complex64::new(re, im)))
    }
}

/// Parse a comma-separated list of finite reals.
pub fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| AppError::Usage(format!("malformed number {part:?} in {text:?}")))
        })
        .collect()
}

/// Parse exactly `N` comma-separated finite reals.
pub fn parse_fixed<const N: usize>(text: &str) -> Result<[f64; N]> {
    let values = parse_reals(text)?;
    values.try_into().map_err(|v: Vec<f64>| {
        AppError::Usage(format!("expected {N} comma-separated numbers, got {} in {text:?}", v.len()))
    })
}

/// Parse a complex literal `a,b` meaning `a + ib`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let [re, im] = parse_fixed::<2>(text)?;
    Ok(Complex64::new(re, im))
}

/// Parse a sheet signature literal such as `+,-,+` (also accepts `1,-1`).
pub fn parse_signs(text: &str) -> Result<Vec<i8>> {
    text.split(',')
        .map(|part| match part.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(AppError::Usage(format!("malformed sign {other:?} in {text:?}; use + or -"))),
        })
        .collect()
}

/// Render a sheet signature as `+,-,+`.
pub fn format_signs(signs: &[i8]) -> String {
    signs.iter().map(|s| if *s > 0 { "+" } else { "-" }).collect::<Vec<_>>().join(",")
}

/// Serialise rows as CSV with a header line.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer.into_inner().map_err(|e| AppError::io("<csv buffer>", e.into_error()))
}

/// Pretty JSON followed by a newline.
pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Write `bytes` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| AppError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| AppError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| AppError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| AppError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip_as_pairs() {
        let z = Cx(Complex64::new(0.5, -1.25));
        let text = serde_json::to_string(&z).unwrap();
        assert_eq!(text, "[0.5,-1.25]");
        assert_eq!(serde_json::from_str::<Cx>(&text).unwrap(), z);
    }

    #[test]
    fn literals_are_validated() {
        assert_eq!(parse_complex("0.5, 1.0").unwrap(), Complex64::new(0.5, 1.0));
        assert!(parse_complex("0.5").is_err());
        assert!(parse_complex("0.5,x").is_err());
        assert!(parse_complex("0.5,1,2").is_err());
        assert!(parse_complex("nan,1").is_err());
        assert_eq!(parse_signs("+,-").unwrap(), vec![1, -1]);
        assert!(parse_signs("+,0").is_err());
        assert_eq!(format_signs(&[1, -1, 1]), "+,-,+");
    }

    #[test]
    fn atomic_write_replaces_the_target() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("out.json");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"second");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
