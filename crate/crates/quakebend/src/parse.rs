//! Text formats used by the command-line tools: slopes as `p/q`, words in the
//! marked generators, and CSV rows of complex shear triples.

use crate::ptorus::{Slope, Word};
use crate::shearbend::ComplexShears;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("bad slope {0:?}: expected p/q, p, or the symbol inf")]
    BadSlope(String),
    #[error("slope 0/0 is not a slope")]
    ZeroZero,
    #[error("bad letter {0:?}: words are spelled with X, x, Y, y")]
    BadLetter(char),
    #[error("bad number {0:?}")]
    BadNumber(String),
    #[error("expected {expected} comma-separated fields, found {found}")]
    BadArity { expected: usize, found: usize },
}

/// Parses `p/q`, a bare integer `p`, or `inf` (= 1/0).  The sign is carried
/// by the numerator.
pub fn parse_slope(text: &str) -> Result<Slope, ParseError> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("inf") || text == "1/0" {
        return Ok(Slope::infinity());
    }
    let bad = || ParseError::BadSlope(text.to_string());
    // reduce in i128 so i64::MIN inputs cannot overflow abs() or the division
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (
            p.trim().parse::<i64>().map_err(|_| bad())? as i128,
            q.trim().parse::<i64>().map_err(|_| bad())? as i128,
        ),
        None => (text.parse::<i64>().map_err(|_| bad())? as i128, 1),
    };
    if p == 0 && q == 0 {
        return Err(ParseError::ZeroZero);
    }
    let g = gcd(p, q);
    let (p, q) = (
        i64::try_from(p / g).map_err(|_| bad())?,
        i64::try_from(q / g).map_err(|_| bad())?,
    );
    Slope::new(p, q).map_err(|_| bad())
}

/// Parses a word over the marked generators: `X`/`x` for the first generator
/// and its inverse, `Y`/`y` for the second.  `e` (alone) is the identity.
/// The result is freely reduced.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let text = text.trim();
    if text == "e" || text.is_empty() {
        return Ok(Word::identity());
    }
    let mut letters = Vec::with_capacity(text.len());
    for c in text.chars() {
        letters.push(match c {
            'X' => 1,
            'x' => -1,
            'Y' => 2,
            'y' => -2,
            other => return Err(ParseError::BadLetter(other)),
        });
    }
    Ok(Word::new(letters))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn parse_fields(text: &str, expected: usize) -> Result<Vec<f64>, ParseError> {
    let fields: Vec<&str> = text.trim().split(',').collect();
    if fields.len() != expected {
        return Err(ParseError::BadArity { expected, found: fields.len() });
    }
    fields
        .iter()
        .map(|f| {
            let f = f.trim();
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::BadNumber(f.to_string()))
        })
        .collect()
}

/// Parses one shear-triple CSV row `re1,im1,re2,im2,re3,im3`.
pub fn parse_shear_row(text: &str) -> Result<ComplexShears, ParseError> {
    let v = parse_fields(text, 6)?;
    Ok(ComplexShears::new(
        Complex64::new(v[0], v[1]),
        Complex64::new(v[2], v[3]),
        Complex64::new(v[4], v[5]),
    ))
}

/// Parses one trace-triple CSV row `x_re,x_im,y_re,y_im,z_re,z_im`.
pub fn parse_trace_row(text: &str) -> Result<crate::ptorus::TraceTriple, ParseError> {
    let v = parse_fields(text, 6)?;
    Ok(crate::ptorus::TraceTriple {
        x: Complex64::new(v[0], v[1]),
        y: Complex64::new(v[2], v[3]),
        z: Complex64::new(v[4], v[5]),
    })
}

/// Parses a comma-separated table of real branch weights.
pub fn parse_weight_table(text: &str) -> Result<Vec<f64>, ParseError> {
    let fields: Vec<&str> = text.trim().split(',').collect();
    parse_fields(text, fields.len())
}
