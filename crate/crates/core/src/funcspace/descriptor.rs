//! Serializable descriptor grammar for radial functions.
//!
//! Descriptors are nested records `{"family": name, "params": [...],
//! "args": [subdescriptors]}` and cover the input families used in spec
//! files. Parameters are plain doubles, so serialization round-trips
//! bit-exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::RadialFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<Descriptor>,
}

impl Descriptor {
    pub fn leaf(family: &str, params: &[f64]) -> Self {
        Descriptor {
            family: family.to_string(),
            params: params.to_vec(),
            args: Vec::new(),
        }
    }

    pub fn node(family: &str, params: &[f64], args: Vec<Descriptor>) -> Self {
        Descriptor {
            family: family.to_string(),
            params: params.to_vec(),
            args,
        }
    }

    fn expect_params(&self, n: usize) -> Result<()> {
        if self.params.len() != n {
            return Err(Error::spec(format!(
                "family '{}' takes {} parameter(s), got {}",
                self.family,
                n,
                self.params.len()
            )));
        }
        Ok(())
    }

    fn expect_args(&self, n: usize) -> Result<()> {
        if self.args.len() != n {
            return Err(Error::spec(format!(
                "family '{}' takes {} argument(s), got {}",
                self.family,
                n,
                self.args.len()
            )));
        }
        Ok(())
    }

    /// Build the function this descriptor denotes, validating family
    /// invariants (integer monomial powers, positive sech powers, ...).
    pub fn build(&self) -> Result<RadialFunction> {
        match self.family.as_str() {
            "constant" => {
                self.expect_params(1)?;
                self.expect_args(0)?;
                Ok(RadialFunction::constant(self.params[0]))
            }
            "monomial" => {
                self.expect_params(2)?;
                self.expect_args(0)?;
                let power = self.params[1];
                if power.fract() != 0.0 || power.abs() > i32::MAX as f64 {
                    return Err(Error::spec(format!(
                        "monomial power must be an integer, got {power}"
                    )));
                }
                Ok(RadialFunction::monomial(self.params[0], power as i32))
            }
            "gauss" => {
                self.expect_params(2)?;
                self.expect_args(0)?;
                Ok(RadialFunction::gauss(self.params[0], self.params[1]))
            }
            "scaled_tanh" => {
                self.expect_params(2)?;
                self.expect_args(0)?;
                Ok(RadialFunction::scaled_tanh(self.params[0], self.params[1]))
            }
            "sech_pow" => {
                self.expect_params(2)?;
                self.expect_args(0)?;
                let power = self.params[1];
                if power.fract() != 0.0 || power < 1.0 || power > i32::MAX as f64 {
                    return Err(Error::spec(format!(
                        "sech_pow power must be a positive integer, got {power}"
                    )));
                }
                Ok(RadialFunction::sech_pow(self.params[0], power as i32))
            }
            "sum" => {
                self.expect_params(0)?;
                if self.args.is_empty() {
                    return Err(Error::spec("sum needs at least one argument"));
                }
                let parts = self
                    .args
                    .iter()
                    .map(|a| a.build())
                    .collect::<Result<Vec<_>>>()?;
                Ok(RadialFunction::sum(parts))
            }
            "product" => {
                self.expect_params(0)?;
                if self.args.len() < 2 {
                    return Err(Error::spec("product needs at least two arguments"));
                }
                let mut parts = self.args.iter().map(|a| a.build());
                let first = parts.next().unwrap()?;
                parts.try_fold(first, |acc, p| Ok(RadialFunction::product(acc, p?)))
            }
            "scale" => {
                self.expect_params(1)?;
                self.expect_args(1)?;
                Ok(RadialFunction::scale(self.params[0], self.args[0].build()?))
            }
            "shift" => {
                self.expect_params(1)?;
                self.expect_args(1)?;
                RadialFunction::shift(self.params[0], self.args[0].build()?)
            }
            other => Err(Error::spec(format!("unknown function family '{other}'"))),
        }
    }
}
