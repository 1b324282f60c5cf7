//! JSON encoding of exact values and schema-checked parsing of inputs.
//!
//! Rationals are `"p/q"` strings (integers may also be given as JSON
//! integers on input). Parse errors carry a JSON pointer to the offending
//! value.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::linalg::{ColVec, Mat, Rat, RowVec};
use crate::moment::Quad;
use crate::parabolic::{ComponentIndex, ParabolicContext};

/// A failure surfaced to the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// The input does not match the expected schema.
    Schema { pointer: String, message: String },
    /// A domain error, with the input location when one is known.
    Domain {
        error: Error,
        pointer: Option<String>,
    },
}

impl CliError {
    fn schema(pointer: &str, message: impl Into<String>) -> Self {
        CliError::Schema {
            pointer: pointer.to_string(),
            message: message.into(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Schema { .. } => "SchemaError",
            CliError::Domain { error, .. } => error.name(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Schema { pointer, message } => {
                json!({ "error": self.name(), "pointer": pointer, "message": message })
            }
            CliError::Domain { error, pointer } => {
                let mut v = json!({ "error": self.name(), "message": error.to_string() });
                if let Some(p) = pointer {
                    v["pointer"] = json!(p);
                }
                v
            }
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { pointer, message } => write!(f, "{pointer}: {message}"),
            CliError::Domain {
                error,
                pointer: Some(p),
            } => write!(f, "{p}: {error}"),
            CliError::Domain {
                error,
                pointer: None,
            } => write!(f, "{error}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Domain {
            error,
            pointer: None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn rat_to_json(x: &Rat) -> Value {
    Value::String(x.to_string())
}

pub fn rats_to_json(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat_to_json).collect())
}

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|r| rats_to_json(m.row(r))).collect())
}

pub fn quad_to_json(q: &Quad) -> Value {
    json!({
        "r": mat_to_json(q.r()),
        "s": mat_to_json(q.s()),
        "i": rats_to_json(q.i()),
        "j": rats_to_json(q.j()),
    })
}

fn child(pointer: &str, key: impl fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{key}")
}

/// The object at `pointer`, or a schema error.
pub fn as_object<'a>(v: &'a Value, pointer: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| CliError::schema(pointer, "expected an object"))
}

/// The field `key` of `obj`, or a schema error naming it.
pub fn field<'a>(obj: &'a Map<String, Value>, pointer: &str, key: &str) -> CliResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| CliError::schema(&child(pointer, key), "missing required field"))
}

pub fn parse_rat(v: &Value, pointer: &str) -> CliResult<Rat> {
    match v {
        Value::String(s) => Rat::from_str(s.trim())
            .map_err(|_| CliError::schema(pointer, format!("{s:?} is not a rational \"p/q\""))),
        Value::Number(num) => match num.as_i64() {
            Some(k) => Ok(Rat::from_integer(k.into())),
            None => Err(CliError::schema(
                pointer,
                "non-integer numbers are not exact; use a \"p/q\" string",
            )),
        },
        _ => Err(CliError::schema(pointer, "expected a rational")),
    }
}

fn parse_array<'a>(v: &'a Value, pointer: &str, len: Option<usize>) -> CliResult<&'a Vec<Value>> {
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::schema(pointer, "expected an array"))?;
    match len {
        Some(n) if arr.len() != n => Err(CliError::schema(
            pointer,
            format!("expected {n} entries, found {}", arr.len()),
        )),
        _ => Ok(arr),
    }
}

pub fn parse_rats(v: &Value, pointer: &str, len: Option<usize>) -> CliResult<Vec<Rat>> {
    parse_array(v, pointer, len)?
        .iter()
        .enumerate()
        .map(|(k, x)| parse_rat(x, &child(pointer, k)))
        .collect()
}

pub fn parse_usizes(v: &Value, pointer: &str, len: Option<usize>) -> CliResult<Vec<usize>> {
    parse_array(v, pointer, len)?
        .iter()
        .enumerate()
        .map(|(k, x)| {
            x.as_u64().map(|u| u as usize).ok_or_else(|| {
                CliError::schema(&child(pointer, k), "expected a non-negative integer")
            })
        })
        .collect()
}

/// A square `n x n` matrix given as an array of rows.
pub fn parse_mat(v: &Value, pointer: &str, n: usize) -> CliResult<Mat> {
    let rows = parse_array(v, pointer, Some(n))?
        .iter()
        .enumerate()
        .map(|(k, row)| parse_rats(row, &child(pointer, k), Some(n)))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Mat::from_rows(rows).expect("rows were checked to have equal length"))
}

/// The context fields `alpha` (required), `n` and `allow_conjecture`.
pub fn parse_context(v: &Value) -> CliResult<ParabolicContext> {
    let obj = as_object(v, "")?;
    let alpha = parse_usizes(field(obj, "", "alpha")?, "/alpha", None)?;
    let sum: usize = alpha.iter().sum();
    let n = match obj.get("n") {
        Some(x) => x
            .as_u64()
            .map(|u| u as usize)
            .ok_or_else(|| CliError::schema("/n", "expected a non-negative integer"))?,
        None => sum,
    };
    let allow = match obj.get("allow_conjecture") {
        Some(x) => x
            .as_bool()
            .ok_or_else(|| CliError::schema("/allow_conjecture", "expected a boolean"))?,
        None => false,
    };
    ParabolicContext::new(n, &alpha, allow).map_err(|error| CliError::Domain {
        error,
        pointer: Some("/alpha".into()),
    })
}

/// A matrix field that must lie in a region; region errors point at the cell.
pub fn parse_region_mat(
    ctx: &ParabolicContext,
    obj: &Map<String, Value>,
    key: &str,
    region: crate::parabolic::Region,
) -> CliResult<Mat> {
    let pointer = child("", key);
    let m = parse_mat(field(obj, "", key)?, &pointer, ctx.n())?;
    ctx.check_region(&m, region).map_err(|error| {
        let cell = match &error {
            Error::NotInRegion { row, col, .. } => Some(child(&child(&pointer, row - 1), col - 1)),
            _ => None,
        };
        CliError::Domain {
            error,
            pointer: cell,
        }
    })?;
    Ok(m)
}

pub fn parse_quad(ctx: &ParabolicContext, v: &Value) -> CliResult<Quad> {
    use crate::parabolic::Region;
    let obj = as_object(v, "")?;
    let r = parse_region_mat(ctx, obj, "r", Region::P)?;
    let s = parse_region_mat(ctx, obj, "s", Region::PStar)?;
    let i = ColVec(parse_rats(field(obj, "", "i")?, "/i", Some(ctx.n()))?);
    let j = RowVec(parse_rats(field(obj, "", "j")?, "/j", Some(ctx.n()))?);
    Ok(Quad::new(ctx, r, s, i, j)?)
}

pub fn parse_index(
    ctx: &ParabolicContext,
    obj: &Map<String, Value>,
    key: &str,
) -> CliResult<ComponentIndex> {
    let pointer = child("", key);
    let a = ComponentIndex(parse_usizes(
        field(obj, "", key)?,
        &pointer,
        Some(ctx.num_blocks()),
    )?);
    if !a.fits(ctx.alpha()) {
        return Err(CliError::schema(
            &pointer,
            format!("must satisfy 0 <= a <= {:?}", ctx.alpha()),
        ));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::parabolic::Region;

    #[test]
    fn rationals_round_trip() {
        assert_eq!(rat_to_json(&ratio(-3, 6)), json!("-1/2"));
        assert_eq!(rat_to_json(&rat(4)), json!("4"));
        assert_eq!(parse_rat(&json!("-1/2"), "/x").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat(&json!(7), "/x").unwrap(), rat(7));
        assert_eq!(parse_rat(&json!("6/4"), "/x").unwrap(), ratio(3, 2));
    }

    #[test]
    fn floats_and_garbage_are_rejected_with_paths() {
        let err = parse_rats(&json!(["1", 0.5]), "/i", None).unwrap_err();
        assert!(matches!(err, CliError::Schema { ref pointer, .. } if pointer == "/i/1"));
        let err = parse_mat(&json!([["1", "x"], ["0", "1"]]), "/r", 2).unwrap_err();
        assert!(matches!(err, CliError::Schema { ref pointer, .. } if pointer == "/r/0/1"));
        let err = parse_mat(&json!([["1", "2"]]), "/r", 2).unwrap_err();
        assert!(matches!(err, CliError::Schema { ref pointer, .. } if pointer == "/r"));
        assert_eq!(err.name(), "SchemaError");
    }

    #[test]
    fn context_errors() {
        assert!(matches!(
            parse_context(&json!({})),
            Err(CliError::Schema { ref pointer, .. }) if pointer == "/alpha"
        ));
        let err = parse_context(&json!({ "alpha": [1, 1, 1, 1, 1, 1] })).unwrap_err();
        assert_eq!(err.name(), "TooManyBlocks");
        let ctx = parse_context(&json!({ "alpha": [1, 1, 1, 1, 1, 1], "allow_conjecture": true }))
            .unwrap();
        assert!(ctx.is_conjecture_regime());
        assert_eq!(
            parse_context(&json!({ "n": 4, "alpha": [1, 2] }))
                .unwrap_err()
                .name(),
            "BadComposition"
        );
    }

    #[test]
    fn region_errors_point_at_the_cell() {
        let ctx = ParabolicContext::new(2, &[1, 1], false).unwrap();
        let input = json!({
            "r": [["1", "0"], ["1", "1"]],
            "s": [["0", "0"], ["0", "0"]],
            "i": ["0", "0"],
            "j": ["0", "0"],
        });
        let err = parse_quad(&ctx, &input).unwrap_err();
        assert_eq!(err.name(), "NotInP");
        assert_eq!(
            err,
            CliError::Domain {
                error: Error::NotInRegion {
                    region: Region::P,
                    row: 2,
                    col: 1
                },
                pointer: Some("/r/1/0".into()),
            }
        );
    }

    #[test]
    fn matrices_encode_as_rows_of_strings() {
        let m = Mat::from_rows(vec![vec![ratio(1, 2), rat(0)], vec![rat(-3), rat(1)]]).unwrap();
        assert_eq!(mat_to_json(&m), json!([["1/2", "0"], ["-3", "1"]]));
        assert_eq!(parse_mat(&mat_to_json(&m), "", 2).unwrap(), m);
    }
}
