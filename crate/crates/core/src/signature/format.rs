//! Line-oriented text form of a signature:
//!
//! ```text
//! sig k=<arity> p=<int> q=<0..7> zero=<0|1>
//! row <bits> = <bit>
//! diag <k values in 0..3>
//! cross <j> <l>
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{AffineSignature, ExactScalar, QuadraticPhase};
use crate::f2::{BitVec, F2Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

impl fmt::Display for AffineSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.scalar();
        writeln!(
            f,
            "sig k={} p={} q={} zero={}",
            self.arity(),
            s.p(),
            s.q(),
            self.is_zero() as u8
        )?;
        let sup = self.support();
        for (i, row) in sup.constraints().row_slice().iter().enumerate() {
            writeln!(f, "row {} = {}", row, sup.rhs().get(i) as u8)?;
        }
        f.write_str("diag")?;
        for d in self.phase().diag_values() {
            write!(f, " {d}")?;
        }
        writeln!(f)?;
        for j in 0..self.arity() {
            for l in self.phase().cross_row(j).iter_ones().filter(|&l| l > j) {
                writeln!(f, "cross {j} {l}")?;
            }
        }
        Ok(())
    }
}

fn key_value<'a>(tok: &'a str, key: &str, line: usize) -> Result<&'a str, FormatError> {
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=<value>, found {tok:?}")))
}

fn parse_num<T: FromStr>(s: &str, line: usize, what: &str) -> Result<T, FormatError> {
    s.parse()
        .map_err(|_| err(line, format!("invalid {what} {s:?}")))
}

impl FromStr for AffineSignature {
    type Err = FormatError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| err(1, "empty signature"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "sig" {
            return Err(err(
                hline,
                "expected `sig k=<arity> p=<int> q=<0..7> zero=<0|1>`",
            ));
        }
        let k: usize = parse_num(key_value(toks[1], "k", hline)?, hline, "arity")?;
        let p: i32 = parse_num(key_value(toks[2], "p", hline)?, hline, "p")?;
        let q: u8 = parse_num(key_value(toks[3], "q", hline)?, hline, "q")?;
        if q > 7 {
            return Err(err(hline, format!("q={q} out of range 0..7")));
        }
        let zero = match key_value(toks[4], "zero", hline)? {
            "0" => false,
            "1" => true,
            other => return Err(err(hline, format!("zero must be 0 or 1, found {other:?}"))),
        };

        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut diag: Option<Vec<u8>> = None;
        let mut cross = F2Matrix::zeros(k, k);
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "row" => {
                    if toks.len() != 4 || toks[2] != "=" {
                        return Err(err(ln, "expected `row <bits> = <bit>`"));
                    }
                    let bits: BitVec = toks[1].parse().map_err(|e| err(ln, format!("{e}")))?;
                    if bits.len() != k {
                        return Err(err(
                            ln,
                            format!("row has {} bits, arity is {k}", bits.len()),
                        ));
                    }
                    let b = match toks[3] {
                        "0" => false,
                        "1" => true,
                        other => {
                            return Err(err(ln, format!("rhs must be 0 or 1, found {other:?}")))
                        }
                    };
                    rows.push(bits);
                    rhs.push(b);
                }
                "diag" => {
                    if diag.is_some() {
                        return Err(err(ln, "duplicate diag line"));
                    }
                    let vals = toks[1..]
                        .iter()
                        .map(|t| match parse_num::<u8>(t, ln, "diag value")? {
                            v @ 0..=3 => Ok(v),
                            v => Err(err(ln, format!("diag value {v} out of range 0..3"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if vals.len() != k {
                        return Err(err(
                            ln,
                            format!("diag has {} values, arity is {k}", vals.len()),
                        ));
                    }
                    diag = Some(vals);
                }
                "cross" => {
                    if toks.len() != 3 {
                        return Err(err(ln, "expected `cross <j> <l>`"));
                    }
                    let j: usize = parse_num(toks[1], ln, "variable index")?;
                    let l: usize = parse_num(toks[2], ln, "variable index")?;
                    if j >= k || l >= k || j == l {
                        return Err(err(ln, format!("bad cross pair ({j}, {l}) for arity {k}")));
                    }
                    if cross.get(j, l) {
                        return Err(err(ln, format!("duplicate cross pair ({j}, {l})")));
                    }
                    cross.set(j, l, true);
                    cross.set(l, j, true);
                }
                other => return Err(err(ln, format!("unknown record {other:?}"))),
            }
        }
        let diag = diag.ok_or_else(|| err(hline, "missing diag line"))?;
        if zero {
            return Ok(AffineSignature::zero(k));
        }
        let phase = QuadraticPhase::from_parts(diag, cross);
        Ok(AffineSignature::from_parts(
            ExactScalar::new(p, q as i64),
            &F2Matrix::from_rows(k, rows),
            &BitVec::from_bools(&rhs),
            phase,
        ))
    }
}
