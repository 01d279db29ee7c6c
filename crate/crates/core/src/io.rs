//! Matrix files.
//!
//! A matrix file is a small TOML document:
//!
//! ```text
//! n = 2
//! field = "rational"
//! flags = ["real-symmetric", "hermitian"]
//! entries = [
//!   ["1", "1/2"],
//!   ["1/2", "1"],
//! ]
//! ```
//!
//! Entries are strings in the scalar syntax, rows use 1-based order as
//! written. Exact matrices serialize canonically, so parse followed by
//! serialize reproduces the file byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

const FLAG_REAL_SYMMETRIC: &str = "real-symmetric";
const FLAG_HERMITIAN: &str = "hermitian";

/// Serialized form of a [`Matrix`], shared by matrix files and findings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecord {
    pub n: usize,
    pub field: String,
    #[serde(default)]
    pub flags: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixRecord {
    pub fn from_matrix(a: &Matrix) -> Self {
        let mut flags = Vec::new();
        if a.flags().real_symmetric {
            flags.push(FLAG_REAL_SYMMETRIC.to_string());
        }
        if a.flags().hermitian {
            flags.push(FLAG_HERMITIAN.to_string());
        }
        MatrixRecord {
            n: a.n(),
            field: a.field().name().to_string(),
            flags,
            entries: (0..a.n())
                .map(|i| a.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    /// Validates shape, field, entry syntax and every claimed flag.
    pub fn to_matrix(&self) -> Result<Matrix> {
        let field: Field = self.field.parse()?;
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::parse(format!(
                "`entries` must be {} rows of {} scalars",
                self.n, self.n
            )));
        }
        let entries = self
            .entries
            .iter()
            .flatten()
            .map(|s| s.parse::<Scalar>())
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = entries.iter().find(|e| e.field().join(field).ok() != Some(field)) {
            return Err(Error::parse(format!("entry `{bad}` is not a {field} scalar")));
        }
        let a = Matrix::new(self.n, field, entries)?;
        for flag in &self.flags {
            let holds = match flag.as_str() {
                FLAG_REAL_SYMMETRIC => a.is_real_symmetric(),
                FLAG_HERMITIAN => a.is_hermitian(),
                other => return Err(Error::parse(format!("unknown flag `{other}`"))),
            };
            if !holds {
                return Err(Error::parse(format!("matrix does not satisfy its `{flag}` flag")));
            }
        }
        Ok(a)
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let record: MatrixRecord =
        toml::from_str(text).map_err(|e| Error::parse(format!("matrix file: {}", e.message())))?;
    record.to_matrix()
}

fn quoted(items: &[String]) -> String {
    let items: Vec<String> = items.iter().map(|s| format!("\"{s}\"")).collect();
    format!("[{}]", items.join(", "))
}

pub fn serialize_matrix(a: &Matrix) -> String {
    let record = MatrixRecord::from_matrix(a);
    let mut out = format!(
        "n = {}\nfield = \"{}\"\nflags = {}\n",
        record.n,
        record.field,
        quoted(&record.flags)
    );
    if record.entries.is_empty() {
        out.push_str("entries = []\n");
    } else {
        out.push_str("entries = [\n");
        for row in &record.entries {
            out.push_str("  ");
            out.push_str(&quoted(row));
            out.push_str(",\n");
        }
        out.push_str("]\n");
    }
    out
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &Matrix) -> Result<()> {
    std::fs::write(path, serialize_matrix(a))?;
    Ok(())
}

/// Hex SHA-256 of the canonical serialization.
pub fn matrix_hash(a: &Matrix) -> String {
    content_hash(serialize_matrix(a).as_bytes())
}

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::{random_psd, GramKind};

    #[test]
    fn serialize_format() {
        let a = Matrix::parse_rows(&[vec!["1", "1/2"], vec!["1/2", "1"]]).unwrap();
        let text = serialize_matrix(&a);
        assert_eq!(
            text,
            "n = 2\nfield = \"rational\"\nflags = [\"real-symmetric\", \"hermitian\"]\nentries = [\n  [\"1\", \"1/2\"],\n  [\"1/2\", \"1\"],\n]\n"
        );
        assert_eq!(parse_matrix(&text).unwrap(), a);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for kind in [GramKind::RealSymmetric, GramKind::Hermitian] {
            let a = random_psd(4, kind, 5, 11);
            let text = serialize_matrix(&a);
            assert_eq!(serialize_matrix(&parse_matrix(&text).unwrap()), text);
        }
        let empty = serialize_matrix(&Matrix::empty(Field::Rational));
        assert_eq!(serialize_matrix(&parse_matrix(&empty).unwrap()), empty);
        let f = Matrix::parse_rows(&[vec!["0.1", "2.5e-7"], vec!["-3.0", "1e300"]]).unwrap();
        assert_eq!(parse_matrix(&serialize_matrix(&f)).unwrap(), f);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let bad = [
            "n = 2\nfield = \"rational\"\nentries = [[\"1\"]]\n",
            "n = 1\nfield = \"rational\"\nentries = [[\"x\"]]\n",
            "n = 1\nfield = \"ring\"\nentries = [[\"1\"]]\n",
            "n = 1\nfield = \"rational\"\nentries = [[\"1.5\"]]\n",
            "n = 2\nfield = \"rational\"\nflags = [\"hermitian\"]\nentries = [[\"1\", \"2\"], [\"3\", \"4\"]]\n",
            "not toml at all [",
        ];
        for text in bad {
            assert!(matches!(parse_matrix(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = random_psd(3, GramKind::RealSymmetric, 4, 1);
        assert_eq!(matrix_hash(&a), matrix_hash(&a.clone()));
        assert_ne!(matrix_hash(&a), matrix_hash(&random_psd(3, GramKind::RealSymmetric, 4, 2)));
        assert_eq!(matrix_hash(&a).len(), 64);
    }
}
