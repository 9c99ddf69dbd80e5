//! Self-contained JSON forms of fields, codes, transforms and certificates.
//! Elements are coefficient lists over GF(p), constant term first.

use std::io::Write;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{max_field_bound, Elem, Field};
use crate::grs::{EvaluationPoint, EvaluationSet, GrsCode, ScalingVector};
use crate::linalg::Matrix;
use crate::mobius::{MobiusTransform, TransportCertificate};

fn malformed<E: std::fmt::Display>(e: E) -> Error {
    Error::Descriptor(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescriptor {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

impl FieldDescriptor {
    pub fn of(field: &Field) -> Self {
        FieldDescriptor {
            p: field.p(),
            m: field.m(),
            modulus: field.modulus().iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        if self.modulus.len() != self.m as usize + 1 {
            return Err(malformed(format!(
                "modulus has {} coefficients, expected {}",
                self.modulus.len(),
                self.m + 1
            )));
        }
        Field::from_modulus(self.p, &self.modulus, max_field_bound()).map_err(malformed)
    }
}

pub fn elem_to_json(field: &Field, e: Elem) -> Vec<u64> {
    field.coeffs(e)
}

pub fn elem_from_json(field: &Field, coeffs: &[u64]) -> Result<Elem> {
    if coeffs.len() != field.m() as usize {
        return Err(malformed(format!(
            "element has {} coefficients, expected {}",
            coeffs.len(),
            field.m()
        )));
    }
    field.from_coeffs(coeffs).map_err(malformed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PointDescriptor {
    Finite { coeffs: Vec<u64> },
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
    pub points: Vec<PointDescriptor>,
    pub scaling: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<Vec<Vec<u64>>>>,
    #[serde(default)]
    pub provenance: Value,
}

impl CodeDescriptor {
    pub fn of(code: &GrsCode, with_matrix: bool) -> Self {
        let f = code.field();
        let points = code
            .points()
            .points()
            .iter()
            .map(|p| match p {
                EvaluationPoint::Finite(a) => PointDescriptor::Finite {
                    coeffs: elem_to_json(f, *a),
                },
                EvaluationPoint::Infinity => PointDescriptor::Infinity,
            })
            .collect();
        let generator = with_matrix.then(|| {
            let g = code.generator();
            (0..g.rows())
                .map(|i| g.row(i).iter().map(|&e| elem_to_json(f, e)).collect())
                .collect()
        });
        CodeDescriptor {
            field: FieldDescriptor::of(f),
            n: code.n(),
            k: code.k(),
            points,
            scaling: code.scaling().entries().iter().map(|&e| elem_to_json(f, e)).collect(),
            generator,
            provenance: code.provenance().clone(),
        }
    }

    /// Rebuilds the code. A stored generator is taken verbatim so that a
    /// tampered file can be detected by verification.
    pub fn to_code(&self) -> Result<GrsCode> {
        let f = self.field.to_field()?;
        if self.points.len() != self.n || self.scaling.len() != self.n {
            return Err(malformed(format!(
                "n = {} but {} points and {} scalings",
                self.n,
                self.points.len(),
                self.scaling.len()
            )));
        }
        let pts = self
            .points
            .iter()
            .map(|p| match p {
                PointDescriptor::Finite { coeffs } => elem_from_json(&f, coeffs).map(EvaluationPoint::Finite),
                PointDescriptor::Infinity => Ok(EvaluationPoint::Infinity),
            })
            .collect::<Result<Vec<_>>>()?;
        let pts = EvaluationSet::new(&f, pts).map_err(malformed)?;
        let v = self
            .scaling
            .iter()
            .map(|c| elem_from_json(&f, c))
            .collect::<Result<Vec<_>>>()?;
        let v = ScalingVector::new(&f, v).map_err(malformed)?;
        let prov = self.provenance.clone();
        match &self.generator {
            None => GrsCode::new(&f, self.k, pts, v, prov).map_err(malformed),
            Some(rows) => {
                if rows.len() != self.k || rows.iter().any(|r| r.len() != self.n) {
                    return Err(malformed("generator shape does not match k x n"));
                }
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|c| elem_from_json(&f, c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                GrsCode::with_generator(&f, self.k, pts, v, Matrix::from_rows(rows), prov)
                    .map_err(malformed)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformDescriptor {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub d: Vec<u64>,
}

impl TransformDescriptor {
    /// Canonical form.
    pub fn of(field: &Field, g: &MobiusTransform) -> Self {
        let [a, b, c, d] = g.canonical().map(|e| elem_to_json(field, e));
        TransformDescriptor { a, b, c, d }
    }

    pub fn to_transform(&self, field: &Field) -> Result<MobiusTransform> {
        let e = |c: &Vec<u64>| elem_from_json(field, c);
        MobiusTransform::new(field, e(&self.a)?, e(&self.b)?, e(&self.c)?, e(&self.d)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDescriptor {
    pub original: CodeDescriptor,
    pub transform: TransformDescriptor,
    pub transported: CodeDescriptor,
    pub multipliers: Vec<Vec<u64>>,
}

impl CertificateDescriptor {
    pub fn of(cert: &TransportCertificate, with_matrix: bool) -> Self {
        let f = cert.original.field();
        CertificateDescriptor {
            original: CodeDescriptor::of(&cert.original, with_matrix),
            transform: TransformDescriptor::of(f, &cert.transform),
            transported: CodeDescriptor::of(&cert.transported, with_matrix),
            multipliers: cert.multipliers.iter().map(|&e| elem_to_json(f, e)).collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(malformed)
}

pub fn read_code(path: &Path) -> Result<GrsCode> {
    read_json::<CodeDescriptor>(path)?.to_code()
}

/// Writes via a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfdual::extended_code;

    fn sample_code() -> GrsCode {
        let f = Field::new(3, 2).unwrap();
        let one = f.one();
        let a = EvaluationSet::finite(&f, vec![f.zero(), one, f.neg(one)]).unwrap();
        extended_code(&f, &a, serde_json::json!({"kind": "lemma3"})).unwrap()
    }

    #[test]
    fn field_roundtrip() {
        let f = Field::new(5, 2).unwrap();
        let d = FieldDescriptor::of(&f);
        assert_eq!(d.modulus.len(), 3);
        assert_eq!(d.to_field().unwrap(), f);
        let bad = FieldDescriptor {
            modulus: vec![0, 0, 1],
            ..d
        };
        assert!(matches!(bad.to_field(), Err(Error::Descriptor(_))));
    }

    #[test]
    fn code_roundtrip_with_and_without_matrix() {
        let c = sample_code();
        for with in [true, false] {
            let d = CodeDescriptor::of(&c, with);
            let text = to_json(&d).unwrap();
            let back: CodeDescriptor = serde_json::from_str(&text).unwrap();
            assert_eq!(back, d);
            let c2 = back.to_code().unwrap();
            assert_eq!(c2.generator(), c.generator());
            assert!(c2.generator_consistent());
        }
    }

    #[test]
    fn json_layout() {
        let text = serde_json::to_string(&CodeDescriptor::of(&sample_code(), false)).unwrap();
        assert!(text.starts_with(r#"{"field":{"p":3,"m":2,"modulus":[2,1,1]},"n":4,"k":2,"points":[{"kind":"finite","coeffs":[0,0]}"#));
        assert!(text.contains(r#"{"kind":"infinity"}"#));
        assert!(!text.contains("generator"));
    }

    #[test]
    fn malformed_inputs() {
        let mut d = CodeDescriptor::of(&sample_code(), true);
        d.n = 5;
        assert!(matches!(d.to_code(), Err(Error::Descriptor(_))));
        let mut d = CodeDescriptor::of(&sample_code(), true);
        d.points[1] = d.points[0].clone();
        assert!(matches!(d.to_code(), Err(Error::Descriptor(_))));
        let mut d = CodeDescriptor::of(&sample_code(), true);
        d.scaling[0] = vec![7, 0];
        assert!(matches!(d.to_code(), Err(Error::Descriptor(_))));
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"{}\n").unwrap();
        write_atomic(&p, b"[]\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "[]\n");
    }
}
