//! JSON file formats for matrices, subspaces and algebras.

use bjnear::numkit::matrix_from_row_major;
use bjnear::{AlgebraSpec, ComplexMatrix, Field, SubspaceBasis, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `{"n": 2, "entries": [[re, im], ...]}` or `{"n": 2, "real_entries": [...]}`,
/// row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_entries: Option<Vec<f64>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.nrows();
        let mut entries = Vec::with_capacity(n * m.ncols());
        for i in 0..n {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixDoc {
            n,
            entries: Some(entries),
            real_entries: None,
        }
    }

    pub fn to_matrix(&self, context: &str) -> Result<ComplexMatrix, CliError> {
        let n = self.n;
        if n == 0 {
            return Err(CliError::parse(context, "n must be at least 1"));
        }
        let values: Vec<C64> = match (&self.entries, &self.real_entries) {
            (Some(e), None) => e.iter().map(|&[re, im]| C64::new(re, im)).collect(),
            (None, Some(r)) => r.iter().map(|&re| C64::new(re, 0.0)).collect(),
            (Some(_), Some(_)) => {
                return Err(CliError::parse(
                    context,
                    "give either entries or real_entries, not both",
                ))
            }
            (None, None) => {
                return Err(CliError::parse(context, "missing entries or real_entries"))
            }
        };
        let key = if self.entries.is_some() {
            "entries"
        } else {
            "real_entries"
        };
        if values.len() != n * n {
            return Err(CliError::parse(
                context,
                format!(
                    "{key}: expected {} values for n = {n}, found {}",
                    n * n,
                    values.len()
                ),
            ));
        }
        if let Some(pos) = values
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(CliError::parse(
                context,
                format!("{key}[{pos}]: non-finite value"),
            ));
        }
        matrix_from_row_major(n, n, &values).map_err(|e| CliError::parse(context, e.to_string()))
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    parse_matrix_in(text, "matrix")
}

fn parse_matrix_in(text: &str, context: &str) -> Result<ComplexMatrix, CliError> {
    let doc: MatrixDoc =
        serde_json::from_str(text).map_err(|e| CliError::parse(context, e.to_string()))?;
    doc.to_matrix(context)
}

pub fn serialize_matrix(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixDoc::from_matrix(m)).expect("matrix documents always serialise")
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FieldTag {
    Real,
    Complex,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Span {
    Keyword(String),
    Matrices(Vec<MatrixDoc>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceDoc {
    n: usize,
    field: FieldTag,
    #[serde(default)]
    span: Option<Span>,
    #[serde(default)]
    traceless: bool,
}

/// `{"n", "field": "real"|"complex", "span": [matrix, ...]}`. The span may
/// also be one of the keywords `"traceless"`, `"diagonal"` or `"scalars"`,
/// and `"traceless": true` is accepted as a shorthand.
pub fn parse_subspace(text: &str) -> Result<SubspaceBasis, CliError> {
    let doc: SubspaceDoc =
        serde_json::from_str(text).map_err(|e| CliError::parse("subspace", e.to_string()))?;
    let field = match doc.field {
        FieldTag::Real => Field::Real,
        FieldTag::Complex => Field::Complex,
    };
    let n = doc.n;
    if n == 0 {
        return Err(CliError::parse("subspace", "n must be at least 1"));
    }
    let keyword = match (&doc.span, doc.traceless) {
        (None, true) => "traceless".to_string(),
        (Some(_), true) => {
            return Err(CliError::parse(
                "subspace",
                "give either span or traceless, not both",
            ))
        }
        (None, false) => return Err(CliError::parse("subspace", "missing span")),
        (Some(Span::Keyword(k)), false) => k.clone(),
        (Some(Span::Matrices(ms)), false) => {
            let mut spanning = Vec::with_capacity(ms.len());
            for (i, m) in ms.iter().enumerate() {
                let ctx = format!("subspace span[{i}]");
                if m.n != n {
                    return Err(CliError::parse(
                        &ctx,
                        format!("matrix has n = {}, subspace has n = {n}", m.n),
                    ));
                }
                spanning.push(m.to_matrix(&ctx)?);
            }
            return Ok(SubspaceBasis::orthonormalize(&spanning, field, n)?);
        }
    };
    match keyword.as_str() {
        "traceless" => Ok(SubspaceBasis::traceless(n, field)?),
        "diagonal" => Ok(SubspaceBasis::diagonal(n, field)),
        "scalars" => Ok(SubspaceBasis::orthonormalize(
            &[bjnear::numkit::identity(n)],
            field,
            n,
        )?),
        other => Err(CliError::parse(
            "subspace",
            format!("unknown span keyword '{other}' (expected traceless, diagonal or scalars)"),
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    n: usize,
    #[serde(default)]
    blocks: Option<Vec<usize>>,
    #[serde(default)]
    unitary: Option<MatrixDoc>,
    #[serde(default)]
    scalars: bool,
}

/// `{"n", "blocks": [n_1, ...], "unitary": matrix?}` or `{"n", "scalars": true}`.
pub fn parse_algebra(text: &str) -> Result<AlgebraSpec, CliError> {
    let doc: AlgebraDoc =
        serde_json::from_str(text).map_err(|e| CliError::parse("algebra", e.to_string()))?;
    match (doc.scalars, doc.blocks, doc.unitary) {
        (true, None, None) => Ok(AlgebraSpec::scalars(doc.n)?),
        (true, _, _) => Err(CliError::parse(
            "algebra",
            "scalars cannot be combined with blocks or unitary",
        )),
        (false, None, _) => Err(CliError::parse(
            "algebra",
            "missing blocks (or \"scalars\": true)",
        )),
        (false, Some(sizes), unitary) => {
            let total: usize = sizes.iter().sum();
            if total != doc.n {
                return Err(CliError::parse(
                    "algebra",
                    format!("block sizes sum to {total}, expected n = {}", doc.n),
                ));
            }
            match unitary {
                None => Ok(AlgebraSpec::blocks(&sizes)?),
                Some(u) => {
                    if u.n != doc.n {
                        return Err(CliError::parse(
                            "algebra unitary",
                            format!("matrix has n = {}, algebra has n = {}", u.n, doc.n),
                        ));
                    }
                    let u = u.to_matrix("algebra unitary")?;
                    Ok(AlgebraSpec::conjugated(&sizes, u)?)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_shorthand() {
        let m = parse_matrix(r#"{"n":2,"real_entries":[0,1,1,0]}"#).unwrap();
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn complex_entry() {
        let m = parse_matrix(r#"{"n":1,"entries":[[0,1]]}"#).unwrap();
        assert_eq!(m[(0, 0)], C64::new(0.0, 1.0));
    }

    #[test]
    fn length_mismatch_names_expected_count() {
        let err = parse_matrix(r#"{"n":2,"real_entries":[1,2,3]}"#).unwrap_err();
        assert!(err.to_string().contains("expected 4"), "{err}");
    }

    #[test]
    fn subspace_keywords() {
        let s = parse_subspace(r#"{"n":3,"field":"complex","span":"traceless"}"#).unwrap();
        assert_eq!(s.dim(), 8);
        let s = parse_subspace(r#"{"n":3,"field":"real","traceless":true}"#).unwrap();
        assert_eq!(s.dim(), 16);
        let s = parse_subspace(r#"{"n":1,"field":"complex","span":[{"n":1,"real_entries":[2]}]}"#)
            .unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn algebra_block_sum_checked() {
        assert!(parse_algebra(r#"{"n":3,"blocks":[2,2]}"#).is_err());
        assert_eq!(
            parse_algebra(r#"{"n":3,"blocks":[1,1,1]}"#).unwrap().dim(),
            3
        );
        assert!(parse_algebra(r#"{"n":3,"scalars":true}"#)
            .unwrap()
            .is_scalars());
    }
}
