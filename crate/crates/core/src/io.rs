//! JSON file formats for algebras, bilinear maps and posets.
//!
//! Rationals are written as `[numerator, denominator]` integer pairs. An
//! integer that fits in `i64` is a JSON number, anything larger is a decimal
//! string. Tensor indices in files are 0-based; poset elements are 1-based.

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraError, Element, FiniteAlgebra};
use crate::bider::{BiderError, BilinearMap};
use crate::linalg::Rational;
use crate::triangular::{Poset, PosetError, TriangularAlgebra, TriangularError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("{0}")]
    Invalid(String),
    #[error("invalid algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("invalid triangular split: {0}")]
    Triangular(#[from] TriangularError),
    #[error("invalid poset: {0}")]
    Poset(#[from] PosetError),
    #[error("invalid map: {0}")]
    Map(#[from] BiderError),
    #[error("algebra has no idempotent_e; a triangular algebra is required")]
    NotTriangular,
    #[error("map fingerprint {found} does not match algebra fingerprint {expected}")]
    Fingerprint { expected: String, found: String },
}

/// An integer serialized as a JSON number when it fits in `i64`, else as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse().map(JsonInt).map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

fn to_pair(r: &Rational) -> [JsonInt; 2] {
    [JsonInt(r.numer()), JsonInt(r.denom())]
}

fn from_pair(num: &JsonInt, den: &JsonInt) -> Result<Rational, IoError> {
    Rational::from_bigints(num.0.clone(), den.0.clone())
        .map_err(|e| IoError::Invalid(format!("bad rational {}/{}: {e}", num.0, den.0)))
}

fn index(v: &JsonInt, what: &str) -> Result<usize, IoError> {
    usize::try_from(&v.0).map_err(|_| IoError::Invalid(format!("{what} index {} is not a valid index", v.0)))
}

/// Serialized form of a finite algebra, optionally with its triangular idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub schema_version: u32,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// `[i, j, k, num, den]`: coefficient of `b_k` in `b_i b_j`.
    pub structure_constants: Vec<[JsonInt; 5]>,
    pub unit: Vec<[JsonInt; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent_e: Option<Vec<[JsonInt; 2]>>,
}

impl AlgebraFile {
    pub fn from_algebra(alg: &FiniteAlgebra, e: Option<&Element>) -> Self {
        AlgebraFile {
            schema_version: SCHEMA_VERSION,
            dim: alg.dim(),
            basis_labels: alg.labels().to_vec(),
            structure_constants: alg
                .structure_constants()
                .map(|(i, j, k, c)| {
                    let [n, d] = to_pair(c);
                    [JsonInt(i.into()), JsonInt(j.into()), JsonInt(k.into()), n, d]
                })
                .collect(),
            unit: alg.unit_coords().iter().map(to_pair).collect(),
            idempotent_e: e.map(|e| e.coords().iter().map(to_pair).collect()),
        }
    }

    pub fn from_triangular(t: &TriangularAlgebra) -> Self {
        Self::from_algebra(t.algebra(), Some(t.e()))
    }

    /// Rebuilds and revalidates the algebra, returning it with the idempotent if present.
    pub fn to_algebra(&self) -> Result<(FiniteAlgebra, Option<Element>), IoError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(IoError::Schema(self.schema_version));
        }
        if self.basis_labels.len() != self.dim {
            return Err(IoError::Invalid(format!(
                "{} labels for dimension {}",
                self.basis_labels.len(),
                self.dim
            )));
        }
        let consts = self
            .structure_constants
            .iter()
            .map(|[i, j, k, n, d]| {
                Ok((
                    index(i, "structure")?,
                    index(j, "structure")?,
                    index(k, "structure")?,
                    from_pair(n, d)?,
                ))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let coords = |v: &[[JsonInt; 2]]| -> Result<Vec<Rational>, IoError> {
            v.iter().map(|[n, d]| from_pair(n, d)).collect()
        };
        let alg = FiniteAlgebra::new(self.basis_labels.clone(), consts, coords(&self.unit)?)?;
        let e = match &self.idempotent_e {
            None => None,
            Some(v) => Some(alg.element(coords(v)?)?),
        };
        Ok((alg, e))
    }

    pub fn to_triangular(&self) -> Result<TriangularAlgebra, IoError> {
        match self.to_algebra()? {
            (alg, Some(e)) => Ok(TriangularAlgebra::new(alg, e)?),
            (_, None) => Err(IoError::NotTriangular),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    /// SHA-256 of the compact serialization, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        hex_digest(serde_json::to_string(self).expect("plain data serializes").as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::from_json(&read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        write(path, &self.to_json())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialized bilinear map, bound to an algebra file by fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub schema_version: u32,
    pub algebra_fingerprint: String,
    /// `[i, j, k, num, den]`: coefficient of `b_k` in `phi(b_i, b_j)`.
    pub coeffs: Vec<[JsonInt; 5]>,
}

impl MapFile {
    pub fn from_map(phi: &BilinearMap, algebra: &AlgebraFile) -> Self {
        MapFile {
            schema_version: SCHEMA_VERSION,
            algebra_fingerprint: algebra.fingerprint(),
            coeffs: phi
                .entries()
                .map(|(i, j, k, c)| {
                    let [n, d] = to_pair(c);
                    [JsonInt(i.into()), JsonInt(j.into()), JsonInt(k.into()), n, d]
                })
                .collect(),
        }
    }

    /// Checks the fingerprint against `file` and rebuilds the map on `alg`,
    /// which must be the algebra loaded from `file`.
    pub fn to_map(&self, file: &AlgebraFile, alg: &FiniteAlgebra) -> Result<BilinearMap, IoError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(IoError::Schema(self.schema_version));
        }
        let expected = file.fingerprint();
        if self.algebra_fingerprint != expected {
            return Err(IoError::Fingerprint {
                expected,
                found: self.algebra_fingerprint.clone(),
            });
        }
        let entries = self
            .coeffs
            .iter()
            .map(|[i, j, k, n, d]| {
                Ok((index(i, "map")?, index(j, "map")?, index(k, "map")?, from_pair(n, d)?))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(BilinearMap::from_entries(alg, entries)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::from_json(&read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        write(path, &self.to_json())
    }
}

/// A poset given by its size and covering pairs `[x, y]` meaning `x <= y`,
/// with elements numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
}

impl PosetFile {
    pub fn to_poset(&self) -> Result<Poset, IoError> {
        let pairs = self
            .covers
            .iter()
            .map(|&[x, y]| {
                if x == 0 || y == 0 {
                    Err(IoError::Invalid("poset elements are numbered from 1".into()))
                } else {
                    Ok((x - 1, y - 1))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poset::from_relations(self.size, &pairs)?)
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Ok(serde_json::from_str(&read(path)?)?)
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bider::make_extremal;
    use crate::linalg::q;
    use crate::triangular::upper_triangular;

    #[test]
    fn algebra_round_trip() {
        let t = upper_triangular(3, 2).unwrap();
        let file = AlgebraFile::from_triangular(&t);
        let back = AlgebraFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let t2 = back.to_triangular().unwrap();
        assert_eq!(t2.algebra(), t.algebra());
        assert_eq!(t2.e().coords(), t.e().coords());
        assert_eq!(back.fingerprint(), file.fingerprint());
    }

    #[test]
    fn map_round_trip_and_fingerprint() {
        let t = upper_triangular(3, 2).unwrap();
        let a = t.algebra();
        let file = AlgebraFile::from_triangular(&t);
        let phi = make_extremal(&t, &a.basis(2).scale(&Rational::new(-7, 3))).unwrap();
        let mf = MapFile::from_json(&MapFile::from_map(&phi, &file).to_json()).unwrap();
        assert_eq!(mf.to_map(&file, a).unwrap(), phi);

        let other = AlgebraFile::from_triangular(&upper_triangular(3, 1).unwrap());
        assert!(matches!(mf.to_map(&other, a), Err(IoError::Fingerprint { .. })));
    }

    #[test]
    fn big_integers_become_strings() {
        let big = Rational::from_bigints(BigInt::from(i64::MAX) * 4 + 1, BigInt::from(3)).unwrap();
        let s = serde_json::to_string(&to_pair(&big)).unwrap();
        assert_eq!(s, format!("[\"{}\",3]", BigInt::from(i64::MAX) * 4 + 1));
        let back: [JsonInt; 2] = serde_json::from_str(&s).unwrap();
        assert_eq!(from_pair(&back[0], &back[1]).unwrap(), big);
    }

    #[test]
    fn loading_revalidates() {
        let t = upper_triangular(2, 1).unwrap();
        let mut file = AlgebraFile::from_triangular(&t);
        // Break associativity: E11 E11 = E11 + E12.
        file.structure_constants
            .push([JsonInt(0.into()), JsonInt(0.into()), JsonInt(1.into()), JsonInt(1.into()), JsonInt(1.into())]);
        assert!(matches!(file.to_algebra(), Err(IoError::Algebra(_))));

        let mut file = AlgebraFile::from_triangular(&t);
        file.idempotent_e = Some(vec![to_pair(&q(1)), to_pair(&q(0)), to_pair(&q(1))]);
        assert!(matches!(file.to_triangular(), Err(IoError::Triangular(_))));

        let mut file = AlgebraFile::from_triangular(&t);
        file.schema_version = 9;
        assert!(matches!(file.to_algebra(), Err(IoError::Schema(9))));
        assert!(AlgebraFile::from_json("{").is_err());
    }

    #[test]
    fn poset_file() {
        let p: PosetFile = serde_json::from_str(r#"{"size": 3, "covers": [[1, 2], [2, 3]]}"#).unwrap();
        let poset = p.to_poset().unwrap();
        assert!(poset.leq(0, 2));
        let bad = PosetFile {
            size: 2,
            covers: vec![[0, 1]],
        };
        assert!(bad.to_poset().is_err());
    }
}
