//! JSON code specifications: `{"field": {"p", "m", "modulus"?}, "chain", "d"}`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::poly::CartesianSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub field: FieldSpec,
    pub chain: Vec<u32>,
    pub d: usize,
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn build(&self) -> Result<Arc<CartesianSet>> {
        let ctx = FieldCtx::new(self.field.p, self.field.m, self.field.modulus.as_deref())?;
        CartesianSet::new(Arc::new(ctx), self.chain.clone())
    }

    /// The spec of `set` at degree `d`, with the modulus spelled out.
    pub fn of(set: &CartesianSet, d: usize) -> Self {
        let ctx = set.ctx();
        CodeSpec {
            field: FieldSpec { p: ctx.characteristic(), m: ctx.degree(), modulus: Some(ctx.modulus().to_vec()) },
            chain: set.chain().to_vec(),
            d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let spec = CodeSpec::from_json(r#"{"field": {"p": 2, "m": 2}, "chain": [1, 2], "d": 2}"#).unwrap();
        let set = spec.build().unwrap();
        assert_eq!(set.sizes(), vec![2, 4]);
        let full = CodeSpec::of(&set, 2);
        assert_eq!(full.field.modulus.as_deref(), Some(&[1, 1, 1][..]));
        let again = CodeSpec::from_json(&serde_json::to_string(&full).unwrap()).unwrap();
        assert_eq!(again, full);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(CodeSpec::from_json("{\"field\": 3"), Err(Error::Spec(_))));
        assert!(matches!(CodeSpec::from_json(r#"{"field": {"p": 2, "m": 2}, "chain": [1, 2]}"#), Err(Error::Spec(_))));
        let bad_chain = CodeSpec::from_json(r#"{"field": {"p": 2, "m": 4}, "chain": [2, 1], "d": 1}"#).unwrap();
        assert!(matches!(bad_chain.build(), Err(Error::InvalidChain(_))));
    }
}
