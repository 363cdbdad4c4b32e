//! Parsing of list/range flags and the JSON shapes shared by subcommands.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use serde_json::{json, Value};

use word_measures::{LaurentSeries, RationalFnOfN};

use crate::CliError;

/// `A..B` (inclusive on both ends).
pub fn parse_range(text: &str) -> Result<RangeInclusive<u64>, CliError> {
    let bad = || CliError::Usage(format!("expected a range A..B, got '{text}'"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(CliError::Usage(format!("range '{text}' must satisfy 1 <= A <= B")));
    }
    Ok(a..=b)
}

/// Comma-separated non-negative integers.
pub fn parse_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("expected comma-separated integers, got '{text}'")))
        })
        .collect()
}

fn ints(coeffs: &[BigInt]) -> Value {
    Value::Array(coeffs.iter().map(|c| json!(c.to_string())).collect())
}

/// `{num, den, n_min}` for `f / scale`, coefficients low degree first.
pub fn rational_fn(f: &RationalFnOfN, scale: &BigInt) -> Value {
    let den = f.denominator().scale(scale);
    json!({
        "num": ints(f.numerator().coeffs()),
        "den": ints(den.coeffs()),
        "n_min": f.n_min(),
    })
}

/// `{e0, coeffs, order}`: coefficient `i` multiplies `N^(e0 - i)`.
pub fn laurent(series: &LaurentSeries) -> Value {
    json!({
        "e0": series.e0,
        "coeffs": series.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "order": series.order(),
    })
}

/// Writes `content` to `path`, or to `out` when `path` is `-`.
pub fn write_target(out: &mut impl Write, path: &str, content: &str) -> Result<(), CliError> {
    if path == "-" {
        out.write_all(content.as_bytes())?;
    } else {
        fs::write(path, content)?;
    }
    Ok(())
}
