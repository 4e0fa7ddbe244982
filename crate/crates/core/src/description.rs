//! JSON description files for algebras and their filtrations.
//!
//! ```json
//! {"field": {"kind": "Q"}, "dim": 2, "basis": ["1", "t"], "unit": [1, 0],
//!  "mul": [[1, 1, [[1, 1]]], [1, 2, [[2, 1]]], [2, 1, [[2, 1]]]],
//!  "filtration": [[[1, 0]], [[1, 0], [0, 1]]]}
//! ```
//!
//! Indices in `mul` are 1-based; only nonzero products need to be listed.
//! Scalars are `"num/den"` strings or integers.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::StructureAlgebra;
use crate::filtration::{FilteredAlgebra, GradedError};
use crate::scalar::{Field, FieldDescriptor, FieldError, Scalar};
use crate::subspace::{zero_vector, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptionError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

fn invalid(path: impl Into<String>, message: impl ToString) -> DescriptionError {
    DescriptionError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

/// One `mul` row: 1-based (i, j) and the terms (k, c) of eᵢeⱼ.
type MulRow = (usize, usize, Vec<(usize, Value)>);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescription {
    field: Option<Value>,
    dim: usize,
    basis: Option<Vec<String>>,
    unit: Option<Vec<Value>>,
    #[serde(default)]
    mul: Vec<MulRow>,
    filtration: Option<Vec<Vec<Vec<Value>>>>,
}

#[derive(Serialize)]
struct OutDescription {
    field: FieldDescriptor,
    dim: usize,
    basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit: Option<Vec<Value>>,
    mul: Vec<MulRow>,
    filtration: Vec<Vec<Vec<Value>>>,
}

fn parse_field(v: &Value) -> Result<Field, DescriptionError> {
    let field = match v {
        Value::String(s) => s.parse::<Field>(),
        other => {
            let desc: FieldDescriptor =
                serde_json::from_value(other.clone()).map_err(|e| invalid("field", e))?;
            Field::from_descriptor(desc)
        }
    };
    field.map_err(|e| invalid("field", e))
}

fn scalar(field: Field, v: &Value, path: impl Fn() -> String) -> Result<Scalar, DescriptionError> {
    Scalar::from_json(field, v).map_err(|e: FieldError| invalid(path(), e))
}

fn vector(field: Field, dim: usize, vs: &[Value], path: &str) -> Result<Vector, DescriptionError> {
    if vs.len() != dim {
        return Err(invalid(
            path,
            format!("expected {dim} coordinates, got {}", vs.len()),
        ));
    }
    vs.iter()
        .enumerate()
        .map(|(k, v)| scalar(field, v, || format!("{path}[{k}]")))
        .collect()
}

/// Parses a description. With `field_override`, every constant is read in
/// that field instead (integers and fractions are reduced mod p).
pub fn parse(
    text: &str,
    field_override: Option<Field>,
) -> Result<FilteredAlgebra, DescriptionError> {
    let raw: RawDescription = serde_json::from_str(text).map_err(|e| DescriptionError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let declared = match &raw.field {
        Some(v) => parse_field(v)?,
        None => Field::Rationals,
    };
    let field = field_override.unwrap_or(declared);
    let dim = raw.dim;
    if dim == 0 {
        return Err(invalid("dim", "must be positive"));
    }
    let names = match raw.basis {
        Some(names) if names.len() != dim => {
            return Err(invalid(
                "basis",
                format!("expected {dim} names, got {}", names.len()),
            ))
        }
        Some(names) => names,
        None => (1..=dim).map(|i| format!("e{i}")).collect(),
    };
    let unit = raw
        .unit
        .as_ref()
        .map(|u| vector(field, dim, u, "unit"))
        .transpose()?;
    let mut products = Vec::with_capacity(raw.mul.len());
    for (r, (i, j, terms)) in raw.mul.iter().enumerate() {
        let path = format!("mul[{r}]");
        for index in [*i, *j] {
            if index == 0 || index > dim {
                return Err(invalid(&path, format!("index {index} outside 1..={dim}")));
            }
        }
        let mut v = zero_vector(field, dim);
        for (t, (k, c)) in terms.iter().enumerate() {
            if *k == 0 || *k > dim {
                return Err(invalid(
                    format!("{path}.terms[{t}]"),
                    format!("index {k} outside 1..={dim}"),
                ));
            }
            let c = scalar(field, c, || format!("{path}.terms[{t}]"))?;
            v[k - 1] = v[k - 1].add(&c);
        }
        products.push((i - 1, j - 1, v));
    }
    let algebra = StructureAlgebra::new_unchecked(field, names, products, unit)
        .map_err(|e| invalid("mul", e))?;
    match raw.filtration {
        None => Ok(FilteredAlgebra::trivial(algebra)),
        Some(stages) => {
            let stages = stages
                .iter()
                .enumerate()
                .map(|(s, vs)| {
                    vs.iter()
                        .enumerate()
                        .map(|(k, v)| vector(field, dim, v, &format!("filtration[{s}][{k}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            if stages.is_empty() {
                return Err(invalid("filtration", "needs at least one stage"));
            }
            Ok(FilteredAlgebra::from_spanning(algebra, stages)?)
        }
    }
}

/// Writes the description of a filtered algebra, listing the echelon basis
/// of each stage.
pub fn to_json(fa: &FilteredAlgebra) -> Value {
    serde_json::to_value(describe(fa)).expect("descriptions serialize")
}

/// Pretty-printed description with keys in schema order.
pub fn to_string_pretty(fa: &FilteredAlgebra) -> String {
    serde_json::to_string_pretty(&describe(fa)).expect("descriptions serialize")
}

fn describe(fa: &FilteredAlgebra) -> OutDescription {
    let alg = fa.algebra();
    let json_vec = |v: &[Scalar]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
    let mul = alg
        .nonzero_products()
        .map(|(i, j, terms)| {
            (
                i + 1,
                j + 1,
                terms.iter().map(|(k, c)| (k + 1, c.to_json())).collect(),
            )
        })
        .collect();
    OutDescription {
        field: alg.field().descriptor(),
        dim: alg.dim(),
        basis: alg.names().to_vec(),
        unit: alg.unit().map(|u| json_vec(u)),
        mul,
        filtration: fa
            .chain()
            .iter()
            .map(|s| s.basis().iter().map(|v| json_vec(v)).collect())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn builtins_round_trip() {
        for field in [Field::Rationals, Field::prime(3).unwrap()] {
            for (name, fa) in builtins::catalogue(field) {
                let text = to_string_pretty(&fa);
                assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), to_json(&fa));
                let back = parse(&text, None).unwrap();
                assert_eq!(back.algebra(), fa.algebra(), "{name}");
                assert_eq!(back.chain(), fa.chain(), "{name}");
            }
        }
    }

    #[test]
    fn minimal_description() {
        let text = r#"{"dim": 2, "mul": [[1, 1, [[1, "1/2"]]]]}"#;
        let fa = parse(text, None).unwrap();
        assert_eq!(fa.algebra().names(), ["e1", "e2"]);
        assert_eq!(fa.top(), 0);
        let e1 = fa.algebra().basis_element(0);
        assert_eq!(
            fa.algebra().mul(&e1, &e1)[0],
            Field::Rationals.parse("1/2").unwrap()
        );
    }

    #[test]
    fn field_override_reduces_constants() {
        let text = r#"{"field": {"kind": "Q"}, "dim": 1, "mul": [[1, 1, [[1, 7]]]]}"#;
        let fa = parse(text, Some(Field::prime(5).unwrap())).unwrap();
        let e = fa.algebra().basis_element(0);
        assert_eq!(fa.algebra().mul(&e, &e)[0].to_string(), "2");
        let text = r#"{"field": "GF:7", "dim": 1, "mul": [[1, 1, [[1, "1/7"]]]]}"#;
        assert!(matches!(
            parse(text, None),
            Err(DescriptionError::Invalid { .. })
        ));
    }

    #[test]
    fn truncated_input_reports_location() {
        let text = "{\n  \"dim\": 2,\n  \"mul\": [[1, 1";
        match parse(text, None) {
            Err(DescriptionError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_path() {
        let text = r#"{"dim": 2, "mul": [[1, 3, []]]}"#;
        let err = parse(text, None).unwrap_err();
        assert_eq!(err.to_string(), "mul[0]: index 3 outside 1..=2");
        let text = r#"{"dim": 2, "filtration": [[[1]]]}"#;
        let err = parse(text, None).unwrap_err();
        assert_eq!(
            err.to_string(),
            "filtration[0][0]: expected 2 coordinates, got 1"
        );
    }
}
