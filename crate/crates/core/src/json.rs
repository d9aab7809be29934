//! Reading matrix spaces, Lie algebras, representations and certificates from
//! JSON values. Every error names the offending field by its JSON pointer.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Representation};
use crate::linalg::{Mat, Subspace};
use crate::scalar::{Field, Scalar};
use crate::space::{CompressionCertificate, MatrixSpace};

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

fn child(pointer: &str, key: impl std::fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{key}")
}

pub fn as_object<'a>(v: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(pointer, "expected an object"))
}

fn field_of<'a>(obj: &'a Map<String, Value>, key: &str, pointer: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(&child(pointer, key), "missing required field"))
}

fn as_array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(pointer, "expected an array"))
}

pub fn as_usize(v: &Value, pointer: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(pointer, "expected a non-negative integer"))
}

/// The optional `"field"` entry of `obj`; `Q` when absent.
pub fn parse_field(obj: &Map<String, Value>, pointer: &str) -> Result<Field> {
    match obj.get("field") {
        None => Ok(Field::Rational),
        Some(Value::String(s)) => s
            .parse()
            .map_err(|e: Error| schema(&child(pointer, "field"), e.to_string())),
        Some(_) => Err(schema(
            &child(pointer, "field"),
            "expected a string such as \"Q\" or \"Fp:101\"",
        )),
    }
}

/// A scalar written as a string (`"3"`, `"-1/2"`, `"4 mod 7"`) or an integer.
pub fn parse_scalar(field: Field, v: &Value, pointer: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse_scalar(s).map_err(|e| schema(pointer, e.to_string())),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.from_i64(i)),
            None => Err(schema(
                pointer,
                format!("{n} is not an integer; write fractions as strings"),
            )),
        },
        _ => Err(schema(pointer, "expected a scalar string")),
    }
}

fn parse_vector(field: Field, v: &Value, len: usize, pointer: &str) -> Result<Vec<Scalar>> {
    let items = as_array(v, pointer)?;
    if items.len() != len {
        return Err(schema(
            pointer,
            format!("expected {len} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_scalar(field, x, &child(pointer, i)))
        .collect()
}

/// A `rows x cols` matrix given either flat in row-major order or as a list of rows.
pub fn parse_matrix(field: Field, v: &Value, rows: usize, cols: usize, pointer: &str) -> Result<Mat> {
    let items = as_array(v, pointer)?;
    let data = if items.first().is_some_and(Value::is_array) {
        if items.len() != rows {
            return Err(schema(pointer, format!("expected {rows} rows, found {}", items.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in items.iter().enumerate() {
            data.extend(parse_vector(field, row, cols, &child(pointer, i))?);
        }
        data
    } else {
        parse_vector(field, v, rows * cols, pointer)?
    };
    Mat::from_flat(field, rows, cols, data).map_err(|e| schema(pointer, e.to_string()))
}

/// `{"field", "rows", "cols", "basis": [matrix, ...]}`.
pub fn parse_matrix_space(v: &Value, pointer: &str) -> Result<MatrixSpace> {
    let obj = as_object(v, pointer)?;
    let field = parse_field(obj, pointer)?;
    let rows = as_usize(field_of(obj, "rows", pointer)?, &child(pointer, "rows"))?;
    let cols = as_usize(field_of(obj, "cols", pointer)?, &child(pointer, "cols"))?;
    if rows == 0 || cols == 0 {
        return Err(schema(pointer, "rows and cols must be positive"));
    }
    let basis_ptr = child(pointer, "basis");
    let basis = as_array(field_of(obj, "basis", pointer)?, &basis_ptr)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(field, m, rows, cols, &child(&basis_ptr, i)))
        .collect::<Result<Vec<_>>>()?;
    MatrixSpace::new(basis).map_err(|e| schema(&basis_ptr, e.to_string()))
}

/// `{"field"?, "dim", "brackets": [{"i", "j", "coeffs"}]}` with 1-based indices.
pub fn parse_lie_algebra(v: &Value, pointer: &str) -> Result<LieAlgebra> {
    let obj = as_object(v, pointer)?;
    let field = parse_field(obj, pointer)?;
    let dim = as_usize(field_of(obj, "dim", pointer)?, &child(pointer, "dim"))?;
    if dim == 0 {
        return Err(schema(&child(pointer, "dim"), "must be positive"));
    }
    let list_ptr = child(pointer, "brackets");
    let list = match obj.get("brackets") {
        None => Vec::new(),
        Some(b) => as_array(b, &list_ptr)?.clone(),
    };
    let mut brackets = Vec::with_capacity(list.len());
    for (n, b) in list.iter().enumerate() {
        let ptr = child(&list_ptr, n);
        let o = as_object(b, &ptr)?;
        let index = |key: &str| -> Result<usize> {
            let i = as_usize(field_of(o, key, &ptr)?, &child(&ptr, key))?;
            if i == 0 || i > dim {
                return Err(schema(&child(&ptr, key), format!("index {i} outside 1..={dim}")));
            }
            Ok(i - 1)
        };
        let (i, j) = (index("i")?, index("j")?);
        if i == j {
            return Err(schema(&ptr, "a basis element brackets to zero with itself"));
        }
        let coeffs = parse_vector(field, field_of(o, "coeffs", &ptr)?, dim, &child(&ptr, "coeffs"))?;
        brackets.push((i, j, coeffs));
    }
    LieAlgebra::new(field, dim, brackets).map_err(|e| schema(&list_ptr, e.to_string()))
}

/// `{"algebra": <object or path>, "dimV", "rho": [matrix, ...]}`. A string
/// `"algebra"` is handed to `resolve`, which loads the referenced document.
pub fn parse_representation(
    v: &Value,
    pointer: &str,
    resolve: &dyn Fn(&str) -> Result<Value>,
) -> Result<Representation> {
    let obj = as_object(v, pointer)?;
    let alg_ptr = child(pointer, "algebra");
    let algebra = match field_of(obj, "algebra", pointer)? {
        Value::String(path) => {
            let doc = resolve(path).map_err(|e| schema(&alg_ptr, e.to_string()))?;
            parse_lie_algebra(&doc, "").map_err(|e| match e {
                Error::Schema { pointer, message } => schema(&alg_ptr, format!("in {path} at {pointer}: {message}")),
                other => other,
            })?
        }
        inline => parse_lie_algebra(inline, &alg_ptr)?,
    };
    let dim_v = as_usize(field_of(obj, "dimV", pointer)?, &child(pointer, "dimV"))?;
    if dim_v == 0 {
        return Err(schema(&child(pointer, "dimV"), "must be positive"));
    }
    let rho_ptr = child(pointer, "rho");
    let rho = as_array(field_of(obj, "rho", pointer)?, &rho_ptr)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(algebra.field(), m, dim_v, dim_v, &child(&rho_ptr, i)))
        .collect::<Result<Vec<_>>>()?;
    Representation::new(algebra, rho).map_err(|e| schema(&rho_ptr, e.to_string()))
}

fn parse_subspace(field: Field, ambient: usize, v: &Value, pointer: &str) -> Result<Subspace> {
    let vectors = as_array(v, pointer)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_vector(field, x, ambient, &child(pointer, i)))
        .collect::<Result<Vec<_>>>()?;
    Subspace::from_vectors(field, ambient, vectors).map_err(|e| schema(pointer, e.to_string()))
}

/// A serialized [`CompressionCertificate`] for a space with `rows x cols`
/// matrices. Claimed `k1`, `k2`, `rank` are kept as written so that
/// verification can reject inconsistent claims.
pub fn parse_certificate(v: &Value, pointer: &str, rows: usize, cols: usize) -> Result<CompressionCertificate> {
    let obj = as_object(v, pointer)?;
    let field = parse_field(obj, pointer)?;
    let num = |key: &str| as_usize(field_of(obj, key, pointer)?, &child(pointer, key));
    Ok(CompressionCertificate {
        k1: num("k1")?,
        k2: num("k2")?,
        rank: num("rank")?,
        field,
        v_prime: parse_subspace(
            field,
            cols,
            field_of(obj, "v_prime", pointer)?,
            &child(pointer, "v_prime"),
        )?,
        w_prime: parse_subspace(
            field,
            rows,
            field_of(obj, "w_prime", pointer)?,
            &child(pointer, "w_prime"),
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::fixtures;
    use crate::space::{detect_compression_rank2, fixtures as spaces, DEFAULT_RETRIES};
    use serde_json::json;

    fn no_paths(_: &str) -> Result<Value> {
        Err(Error::BadRepresentation("no files here".into()))
    }

    #[test]
    fn matrix_space_roundtrip() {
        let v = json!({"field": "Q", "rows": 3, "cols": 3, "basis": [
            ["0","1","0","-1","0","0","0","0","0"],
            [[0,0,1],[0,0,0],[-1,0,0]],
            ["0","0","0","0","0","1","0","-1","0"]]});
        assert_eq!(parse_matrix_space(&v, "").unwrap(), spaces::skew3(Field::Rational));
    }

    #[test]
    fn errors_carry_pointers() {
        let v = json!({"rows": 1, "cols": 2, "basis": [["1", "1/0"]]});
        match parse_matrix_space(&v, "") {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/basis/0/1"),
            other => panic!("unexpected {other:?}"),
        }
        let v = json!({"field": "Fp:4", "rows": 1, "cols": 1, "basis": [["1"]]});
        assert!(matches!(parse_matrix_space(&v, ""), Err(Error::Schema { pointer, .. }) if pointer == "/field"));
        let v = json!({"rows": 1, "basis": []});
        assert!(matches!(parse_matrix_space(&v, ""), Err(Error::Schema { pointer, .. }) if pointer == "/cols"));
        let v = json!({"rows": 1, "cols": 1, "basis": [["1"], ["2"]]});
        assert!(matches!(parse_matrix_space(&v, ""), Err(Error::Schema { pointer, .. }) if pointer == "/basis"));
    }

    #[test]
    fn lie_algebra_and_representation() {
        let v = json!({"dim": 3, "brackets": [
            {"i": 3, "j": 1, "coeffs": ["1", "0", "0"]},
            {"i": 3, "j": 2, "coeffs": ["0", "1", "0"]}]});
        let g = parse_lie_algebra(&v, "").unwrap();
        assert_eq!(g, fixtures::scaling3(Field::Rational));
        let back = serde_json::to_value(&g).unwrap();
        assert_eq!(parse_lie_algebra(&back, "").unwrap(), g);

        let r = json!({"algebra": v, "dimV": 1, "rho": [["0"], ["0"], ["1"]]});
        let pi = parse_representation(&r, "", &no_paths).unwrap();
        assert_eq!(pi.dim_v, 1);
        let r = json!({"algebra": "missing.json", "dimV": 1, "rho": [["1"]]});
        assert!(
            matches!(parse_representation(&r, "", &no_paths), Err(Error::Schema { pointer, .. }) if pointer == "/algebra")
        );
        let bad = json!({"dim": 2, "brackets": [{"i": 1, "j": 3, "coeffs": ["1", "0"]}]});
        assert!(
            matches!(parse_lie_algebra(&bad, ""), Err(Error::Schema { pointer, .. }) if pointer == "/brackets/0/j")
        );
    }

    #[test]
    fn certificate_roundtrip() {
        for f in [Field::Rational, Field::Prime(5)] {
            let s = spaces::bordered(f, 4);
            let cert = detect_compression_rank2(&s, 0, DEFAULT_RETRIES).unwrap().unwrap();
            let v = serde_json::to_value(&cert).unwrap();
            assert_eq!(parse_certificate(&v, "", 4, 4).unwrap(), cert);
        }
    }
}
