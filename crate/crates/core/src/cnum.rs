//! Complex scalar helpers: the working type, relative comparisons and the
//! `re`, `re+imi`, `re-imi` text form used on the command line.

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `|x - y| / max(|x|, |y|, 1e-30)`.
pub fn rel_error(x: C64, y: C64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1e-30)
}

/// `x / y` without forming `|y|^2`, which overflows for `|y|` above about 1e154.
pub fn cdiv(x: C64, y: C64) -> C64 {
    let s = y.norm();
    (x / s) * (y / s).conj()
}

pub fn approx_eq(x: C64, y: C64, tol: f64) -> bool {
    rel_error(x, y) <= tol
}

/// Formats with the shortest round-tripping decimal for each part.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        return format!("{}", z.re);
    }
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_complex(text: &str) -> Result<C64> {
    let err = || Error::ParseComplex(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| c(re, 0.0)).map_err(|_| err());
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| err())?;
            (re, parse_imag(&body[i..]).ok_or_else(err)?)
        }
        None => (0.0, parse_imag(body).ok_or_else(err)?),
    };
    Ok(c(re, im))
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse::<f64>().ok(),
    }
}

/// Comma-separated list of complex numbers; the empty string is the empty list.
pub fn parse_complex_list(text: &str) -> Result<Vec<C64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_complex).collect()
}

pub fn to_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}
