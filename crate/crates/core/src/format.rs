//! Text formats for operators: Pauli spectra, dense matrices and truth
//! tables, with detection by header.
//!
//! ```text
//! # spectrum
//! n=2
//! XZ  0.25
//!
//! # dense, one row per line
//! dense n=1
//! (0, 0) (1, 0)
//! (1, 0) (0, 0)
//!
//! # truth table, index = big-endian input
//! 0001
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex;
use serde::Serialize;

use crate::build::{bit_oracle, phase_oracle, TruthTable};
use crate::error::{Error, Result};
use crate::pauli::{fourier_transform, inverse_fourier, DenseOperator, Spectrum};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Auto,
    Dense,
    Spectrum,
    Truth,
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Kind::Auto),
            "dense" => Ok(Kind::Dense),
            "spectrum" => Ok(Kind::Spectrum),
            "truth" => Ok(Kind::Truth),
            other => Err(Error::Parse { line: 0, message: format!("unknown input kind '{other}'") }),
        }
    }
}

/// How a truth table becomes an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleKind {
    #[default]
    Phase,
    Bit,
}

fn first_content_line(text: &str) -> Option<&str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty())
}

/// Detects the format from the first non-comment line.
pub fn detect(text: &str) -> Result<Kind> {
    let line = first_content_line(text).ok_or(Error::Parse { line: 0, message: "empty input".into() })?;
    if line.starts_with("dense") {
        Ok(Kind::Dense)
    } else if line.starts_with("n=") {
        Ok(Kind::Spectrum)
    } else if line.chars().all(|c| c == '0' || c == '1') {
        Ok(Kind::Truth)
    } else {
        Err(Error::Parse { line: 0, message: format!("cannot detect format from '{line}'") })
    }
}

pub fn write_dense<T: Real>(f: &DenseOperator<T>) -> String {
    let mut out = format!("dense n={}\n", f.n());
    let d = f.dim();
    for r in 0..d {
        let row: Vec<String> = (0..d).map(|c| {
            let z = f.get(r, c);
            format!("({}, {})", z.re, z.im)
        }).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_dense<T: Real>(text: &str) -> Result<DenseOperator<T>> {
    let mut n: Option<usize> = None;
    let mut data = Vec::new();
    let mut rows = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        if n.is_none() {
            let rest = line.strip_prefix("dense").ok_or_else(|| err("expected 'dense n=<qubits>' header".into()))?;
            let k = rest.trim().strip_prefix("n=").ok_or_else(|| err("expected 'n=<qubits>' after 'dense'".into()))?;
            let k: usize = k.trim().parse().map_err(|_| err(format!("bad qubit count '{k}'")))?;
            if k > crate::pauli::MAX_DENSE_QUBITS {
                return Err(Error::QubitCeiling { n: k, ceiling: crate::pauli::MAX_DENSE_QUBITS });
            }
            n = Some(k);
            continue;
        }
        let dim = 1usize << n.unwrap();
        let mut count = 0;
        let mut rest = line;
        while let Some(open) = rest.find('(') {
            let close = rest[open..].find(')').ok_or_else(|| err("unclosed '('".into()))? + open;
            let inner = &rest[open + 1..close];
            let (re, im) = inner.split_once(',').ok_or_else(|| err(format!("expected (re, im), got '({inner})'")))?;
            let re: T = re.trim().parse().map_err(|_| err(format!("bad number '{}'", re.trim())))?;
            let im: T = im.trim().parse().map_err(|_| err(format!("bad number '{}'", im.trim())))?;
            data.push(Complex::new(re, im));
            count += 1;
            rest = &rest[close + 1..];
        }
        if !rest.trim().is_empty() {
            return Err(err(format!("unexpected text '{}'", rest.trim())));
        }
        if count != dim {
            return Err(err(format!("row has {count} entries, expected {dim}")));
        }
        rows += 1;
    }
    let n = n.ok_or(Error::Parse { line: 0, message: "missing 'dense n=<qubits>' header".into() })?;
    if rows != 1 << n {
        return Err(Error::Parse { line: 0, message: format!("{rows} rows, expected {}", 1usize << n) });
    }
    DenseOperator::from_entries(n, data)
}

pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    let line = first_content_line(text).ok_or(Error::Parse { line: 0, message: "empty truth table".into() })?;
    line.parse()
}

/// Reads any supported format as a dense operator.
pub fn read_operator<T: Real>(text: &str, kind: Kind, oracle: OracleKind) -> Result<DenseOperator<T>> {
    let kind = if kind == Kind::Auto { detect(text)? } else { kind };
    match kind {
        Kind::Dense => parse_dense(text),
        Kind::Spectrum => Ok(inverse_fourier(&text.parse::<Spectrum<T>>()?)),
        Kind::Truth => {
            let t = parse_truth_table(text)?;
            Ok(match oracle {
                OracleKind::Phase => phase_oracle(&t),
                OracleKind::Bit => bit_oracle(&t),
            })
        }
        Kind::Auto => unreachable!(),
    }
}

/// Reads any supported format as a Pauli spectrum.
pub fn read_spectrum<T: Real>(text: &str, kind: Kind, oracle: OracleKind) -> Result<Spectrum<T>> {
    let kind = if kind == Kind::Auto { detect(text)? } else { kind };
    if kind == Kind::Spectrum {
        return text.parse();
    }
    Ok(fourier_transform(&read_operator::<T>(text, kind, oracle)?))
}
