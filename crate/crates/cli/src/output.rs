//! Errors with exit codes, input loading and JSON output.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::ser::Formatter;
use serde_json::Value;

use sak_core::bhc::BhcError;
use sak_core::chern::ChernError;
use sak_core::chow::ChowError;
use sak_core::heights::HeightError;
use sak_core::linalg::LinalgError;
use sak_core::semiabelian::SemiabelianError;

/// Exit codes: 2 schema, 3 invariant, 4 I/O, 10 to 15 by module.
#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Invariant(String),
    Io(String),
    Module {
        code: i32,
        module: &'static str,
        message: String,
    },
}

pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_LINALG: i32 = 10;
pub const EXIT_SEMIABELIAN: i32 = 11;
pub const EXIT_CHOW: i32 = 12;
pub const EXIT_HEIGHTS: i32 = 13;
pub const EXIT_CHERN: i32 = 14;
pub const EXIT_BHC: i32 = 15;

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Io(_) => EXIT_IO,
            CliError::Module { code, .. } => *code,
        }
    }

    pub fn invariant(e: impl fmt::Display) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Module { module, message, .. } => write!(f, "{module} error: {message}"),
        }
    }
}

macro_rules! module_error {
    ($ty:ty, $code:expr, $name:literal) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Module {
                    code: $code,
                    module: $name,
                    message: e.to_string(),
                }
            }
        }
    };
}

module_error!(LinalgError, EXIT_LINALG, "linalg");
module_error!(SemiabelianError, EXIT_SEMIABELIAN, "semiabelian");
module_error!(ChowError, EXIT_CHOW, "chow");
module_error!(HeightError, EXIT_HEIGHTS, "heights");
module_error!(ChernError, EXIT_CHERN, "chern");
module_error!(BhcError, EXIT_BHC, "bhc");

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(format!("{origin}: {e}")))
}

/// Compact JSON with `", "` and `": "` separators.
struct Spaced;

impl Formatter for Spaced {
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// Keys come out sorted because `Value` objects are ordered maps.
pub fn render(v: &Value) -> String {
    use serde::Serialize;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
    v.serialize(&mut ser).expect("serializing a Value cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn emit(v: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = render(v);
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_spaced() {
        let v = serde_json::json!({"b": [1, 2], "a": {"y": true, "x": null}});
        assert_eq!(render(&v), r#"{"a": {"x": null, "y": true}, "b": [1, 2]}"#);
    }

    #[test]
    fn schema_errors_carry_position() {
        let e = parse_json::<Vec<i64>>("[1,\n 2,,]", "in.json").unwrap_err();
        assert_eq!(e.code(), EXIT_SCHEMA);
        assert!(e.to_string().contains("line 2"), "{e}");
    }
}
