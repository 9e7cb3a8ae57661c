//! JSON encoding of symbols.
//!
//! ```json
//! {"p":2, "d":3, "symbol":[{"exp":0, "matrix":[[0,0,1],[0,1,0],[1,0,0]]}]}
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::laurent::LaurentMat;
use super::matrix::Mat;
use super::scalar::{is_prime, Scalar};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub exp: i64,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDoc {
    pub p: u32,
    pub d: usize,
    pub symbol: Vec<SymbolTerm>,
}

impl SymbolDoc {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let doc: SymbolDoc = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    /// Shape and range checks that do not depend on the scalar type.
    pub fn validate(&self) -> Result<(), Error> {
        if !is_prime(self.p) {
            return Err(Error::Invalid(format!("modulus {} is not prime", self.p)));
        }
        if self.d == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &self.symbol {
            if !seen.insert(t.exp) {
                return Err(Error::Invalid(format!("duplicate exponent {}", t.exp)));
            }
            if t.matrix.len() != self.d || t.matrix.iter().any(|r| r.len() != self.d) {
                return Err(Error::Invalid(format!(
                    "coefficient at exponent {} is not {}x{}",
                    t.exp, self.d, self.d
                )));
            }
            if t.matrix.iter().flatten().any(|&v| v < 0 || v >= self.p as i64) {
                return Err(Error::Invalid(format!(
                    "coefficient at exponent {} has an entry outside [0, {})",
                    t.exp, self.p
                )));
            }
        }
        Ok(())
    }

    pub fn to_symbol<S: Scalar>(&self) -> Result<LaurentMat<S>, Error> {
        self.validate()?;
        if self.p != S::MODULUS {
            return Err(Error::ModulusMismatch {
                expected: S::MODULUS,
                found: self.p,
            });
        }
        Ok(LaurentMat::from_terms(
            self.d,
            self.symbol
                .iter()
                .map(|t| (t.exp, Mat::from_rows(&t.matrix))),
        ))
    }

    pub fn from_symbol<S: Scalar>(f: &LaurentMat<S>) -> Self {
        SymbolDoc {
            p: S::MODULUS,
            d: f.dim(),
            symbol: f
                .terms()
                .map(|(e, m)| SymbolTerm {
                    exp: e,
                    matrix: m
                        .to_rows()
                        .into_iter()
                        .map(|r| r.into_iter().map(i64::from).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol documents always serialise")
    }
}
