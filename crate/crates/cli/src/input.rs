use std::fs;
use std::path::Path;

use qbf::format::{read_operator, Kind, OracleKind};
use qbf::Operator64;

use crate::report::{sha256_hex, InputDigest};
use crate::CliError;

pub struct Loaded {
    pub operator: Operator64,
    pub digest: InputDigest,
}

pub fn load(path: &Path, kind: Kind, oracle: OracleKind) -> Result<Loaded, CliError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {shown}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Input(format!("{shown} is not UTF-8 text")))?;
    let operator = read_operator::<f64>(&text, kind, oracle).map_err(|e| CliError::Input(format!("{shown}: {e}")))?;
    Ok(Loaded { operator, digest: InputDigest { path: shown, sha256: sha256_hex(&bytes) } })
}
