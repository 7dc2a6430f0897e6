use serde::{Deserialize, Serialize};

use crate::polyforms::{infer_nvars, poly_parse};

use super::{mf_validate, MatrixFactorization, MfError, PolyMatrix};

/// File form of a factorization: `{"f": …, "A": [[…]], "B": [[…]], "nvars": …}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfJson {
    pub f: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
}

impl MfJson {
    fn strings(&self) -> impl Iterator<Item = &String> {
        std::iter::once(&self.f).chain(self.a.iter().flatten()).chain(self.b.iter().flatten())
    }

    /// Parses and validates. The variable count is `nvars` if given, else the
    /// field of the same name, else the smallest count covering every entry.
    pub fn to_factorization(&self, nvars: Option<usize>) -> Result<MatrixFactorization, MfError> {
        let nvars = nvars
            .or(self.nvars)
            .unwrap_or_else(|| self.strings().map(|s| infer_nvars(s)).max().unwrap_or(0));
        let parse = |m: &[Vec<String>]| -> Result<PolyMatrix, MfError> {
            m.iter()
                .map(|row| row.iter().map(|s| Ok(poly_parse(s, nvars)?)).collect())
                .collect()
        };
        mf_validate(parse(&self.a)?, parse(&self.b)?, poly_parse(&self.f, nvars)?)
    }
}

impl From<&MatrixFactorization> for MfJson {
    fn from(mf: &MatrixFactorization) -> Self {
        let show = |m: &PolyMatrix| m.iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect();
        MfJson { f: mf.f().to_string(), a: show(mf.a()), b: show(mf.b()), nvars: Some(mf.nvars()) }
    }
}

impl MatrixFactorization {
    pub fn from_json_str(text: &str, nvars: Option<usize>) -> Result<Self, MfError> {
        let raw: MfJson = serde_json::from_str(text).map_err(|e| MfError::Json(e.to_string()))?;
        raw.to_factorization(nvars)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&MfJson::from(self)).expect("serializable")
    }
}
