//! Instance files: flat `key = value` TOML, one instance per file.
//!
//! ```toml
//! f = "x^2"
//! g = "1"
//! h = "x"
//! alpha = 0.5
//! a = 0
//! b = 1
//! ```

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

/// Every field is optional; command-line flags fill in or override what the file gives.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub id: Option<String>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub h: Option<String>,
    #[serde(default, deserialize_with = "number")]
    pub alpha: Option<f64>,
    #[serde(default, deserialize_with = "number")]
    pub q: Option<f64>,
    #[serde(default, deserialize_with = "number")]
    pub a: Option<f64>,
    #[serde(default, deserialize_with = "number")]
    pub b: Option<f64>,
    #[serde(default, deserialize_with = "number")]
    pub at: Option<f64>,
    pub side: Option<String>,
    pub check: Option<String>,
    /// Chain flavour for `hh-chain`: classical, fejer or fractional.
    pub mode: Option<String>,
    #[serde(default, deserialize_with = "number")]
    pub tol: Option<f64>,
    pub budget: Option<u64>,
}

/// TOML keeps integers and floats apart; `a = 0` should still be a number.
fn number<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        Int(i64),
        Float(f64),
    }
    Ok(Option::<Num>::deserialize(d)?.map(|n| match n {
        Num::Int(i) => i as f64,
        Num::Float(x) => x,
    }))
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Fields set in `other` replace ours.
    pub fn overridden_by(self, other: InstanceFile) -> Self {
        Self {
            id: other.id.or(self.id),
            f: other.f.or(self.f),
            g: other.g.or(self.g),
            h: other.h.or(self.h),
            alpha: other.alpha.or(self.alpha),
            q: other.q.or(self.q),
            a: other.a.or(self.a),
            b: other.b.or(self.b),
            at: other.at.or(self.at),
            side: other.side.or(self.side),
            check: other.check.or(self.check),
            mode: other.mode.or(self.mode),
            tol: other.tol.or(self.tol),
            budget: other.budget.or(self.budget),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_floats() {
        let f = InstanceFile::parse("f = \"x^2\"\na = 0\nb = 1.5\nalpha = 1\nbudget = 1000\n").unwrap();
        assert_eq!(f.f.as_deref(), Some("x^2"));
        assert_eq!((f.a, f.b, f.alpha), (Some(0.0), Some(1.5), Some(1.0)));
        assert_eq!(f.budget, Some(1000));
        assert_eq!(f.g, None);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(InstanceFile::parse("f = \"x\"\nbeta = 2\n").is_err());
        assert!(InstanceFile::parse("f = 3\n").is_err());
    }

    #[test]
    fn override_order() {
        let file = InstanceFile { f: Some("x".into()), alpha: Some(0.5), ..Default::default() };
        let flags = InstanceFile { alpha: Some(2.0), ..Default::default() };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.f.as_deref(), Some("x"));
        assert_eq!(merged.alpha, Some(2.0));
    }
}
