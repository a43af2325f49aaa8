//! Ring files: a small TOML document.
//!
//! ```toml
//! field = "Q"            # or "F5", "F7", ...
//! vars = ["x", "y", "z", "w"]
//! relations = ["x^3 + y^3 + z^3 + w^3"]
//! assert_smooth_proj = true   # optional
//! ```
//!
//! A `weights` array is accepted only when every weight is 1.

use std::path::Path;

use gradop::field::{FieldSpec, PrimeField, Rationals};
use gradop::polyring::{parse_poly_with, RingSpec};
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingFile {
    #[serde(default = "default_field")]
    field: String,
    vars: Vec<String>,
    #[serde(default)]
    relations: Vec<toml::Spanned<String>>,
    #[serde(default)]
    assert_smooth_proj: bool,
    weights: Option<Vec<i64>>,
}

fn default_field() -> String {
    "Q".into()
}

pub enum AnyRing {
    Q(RingSpec<Rationals>),
    P(RingSpec<PrimeField>),
}

impl AnyRing {
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyRing::Q(s) => s.field_spec(),
            AnyRing::P(s) => s.field_spec(),
        }
    }
}

/// Run `$body` with `$s` bound to the concrete ring.
#[macro_export]
macro_rules! with_ring {
    ($ring:expr, $s:ident => $body:expr) => {
        match $ring {
            $crate::ringfile::AnyRing::Q($s) => $body,
            $crate::ringfile::AnyRing::P($s) => $body,
        }
    };
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn build<F: gradop::field::Field>(
    field: F,
    file: &RingFile,
    src: &str,
    name: &str,
) -> Result<RingSpec<F>, CliError> {
    let mut polys = Vec::new();
    for (i, rel) in file.relations.iter().enumerate() {
        let p = parse_poly_with(rel.get_ref(), &field, &file.vars).map_err(|e| {
            // span starts at the opening quote
            let at = rel.span().start + 1 + e.position().unwrap_or(0);
            let (line, col) = line_col(src, at);
            CliError::Input(format!("{name}:{line}:{col}: relation {}: {e}", i + 1))
        })?;
        polys.push(p);
    }
    RingSpec::from_polys(field, file.vars.clone(), polys)
        .map(|s| s.with_smooth_assertion(file.assert_smooth_proj))
        .map_err(|e| CliError::Input(format!("{name}: {e}")))
}

pub fn parse_ring(src: &str, name: &str) -> Result<AnyRing, CliError> {
    let file: RingFile = toml::from_str(src).map_err(|e| {
        let loc = e.span().map(|s| line_col(src, s.start));
        match loc {
            Some((line, col)) => CliError::Input(format!("{name}:{line}:{col}: {}", e.message())),
            None => CliError::Input(format!("{name}: {}", e.message())),
        }
    })?;
    if let Some(w) = &file.weights {
        if w.len() != file.vars.len() {
            return Err(CliError::Input(format!("{name}: {} weights for {} variables", w.len(), file.vars.len())));
        }
        if w.iter().any(|&x| x != 1) {
            return Err(CliError::Input(format!(
                "{name}: non-standard weights {w:?} are not supported; only rings generated in degree 1 are handled"
            )));
        }
    }
    let spec: FieldSpec = file.field.parse().map_err(|e| CliError::Input(format!("{name}: {e}")))?;
    match spec {
        FieldSpec::Rationals => Ok(AnyRing::Q(build(Rationals, &file, src, name)?)),
        FieldSpec::PrimeField(p) => {
            let f = PrimeField::new(p).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
            Ok(AnyRing::P(build(f, &file, src, name)?))
        }
    }
}

pub fn load_ring(path: &Path) -> Result<AnyRing, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_ring(&src, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_fermat() {
        let r = parse_ring("field = \"F5\"\nvars = [\"x\",\"y\"]\nrelations = [\"x^3+y^3\"]\n", "t").unwrap();
        assert_eq!(r.field_spec(), FieldSpec::PrimeField(5));
    }

    #[test]
    fn relation_errors_have_line_and_column() {
        let src = "vars = [\"x\",\"y\"]\nrelations = [\"x^2 + y\"]\n";
        let CliError::Input(msg) = parse_ring(src, "r.ring").err().unwrap() else { panic!() };
        assert!(msg.starts_with("r.ring:2:"), "{msg}");
        assert!(msg.contains("inhomogeneous"), "{msg}");

        let src = "vars = [\"x\",\"y\"]\nrelations = [\"x^2 + q^2\"]\n";
        let CliError::Input(msg) = parse_ring(src, "r.ring").err().unwrap() else { panic!() };
        assert!(msg.starts_with("r.ring:2:21:"), "{msg}");
    }

    #[test]
    fn syntax_and_weights() {
        let CliError::Input(msg) = parse_ring("vars = [\"x\"\n", "a").err().unwrap() else { panic!() };
        assert!(msg.starts_with("a:"), "{msg}");
        let src = "vars = [\"x\",\"y\"]\nweights = [1, 2]\n";
        let CliError::Input(msg) = parse_ring(src, "a").err().unwrap() else { panic!() };
        assert!(msg.contains("weights"));
        assert!(parse_ring("vars = [\"x\",\"y\"]\nweights = [1, 1]\n", "a").is_ok());
    }
}
