//! The digit-literal grammar:
//! `digits:<comma list>;tail:(zeros|max|periodic:<comma list>|seeded:<int>)`.
//! Points may also be plain reals in `[0, 1]`.

use salem_core::{DigitString, Tail};

use crate::Failure;

pub enum PointArg {
    Real(f64),
    Digits(DigitString),
}

pub fn parse_point(text: &str, q: u32) -> Result<PointArg, Failure> {
    if text.starts_with("digits:") {
        return Ok(PointArg::Digits(parse_digit_literal(text, q)?));
    }
    let v: f64 = text
        .parse()
        .map_err(|_| Failure::point(format!("cannot parse point {text:?}")))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Failure::point(format!("point {v} outside [0, 1]")));
    }
    Ok(PointArg::Real(v))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u32>, Failure> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Failure::point(format!("bad {what} digit {part:?}")))
        })
        .collect()
}

pub fn parse_digit_literal(text: &str, q: u32) -> Result<DigitString, Failure> {
    let (digits_part, tail_part) = text
        .split_once(';')
        .ok_or_else(|| Failure::point("expected `digits:...;tail:...`".to_string()))?;
    let digits_body = digits_part
        .strip_prefix("digits:")
        .ok_or_else(|| Failure::point("literal must start with `digits:`".to_string()))?;
    let tail_body = tail_part
        .strip_prefix("tail:")
        .ok_or_else(|| Failure::point("second part must start with `tail:`".to_string()))?;
    let prefix = parse_list(digits_body, "prefix")?;
    let tail = if tail_body == "zeros" {
        Tail::Zeros
    } else if tail_body == "max" {
        Tail::MaxDigits
    } else if let Some(pattern) = tail_body.strip_prefix("periodic:") {
        let pat = parse_list(pattern, "pattern")?;
        Tail::Periodic(pat)
    } else if let Some(seed) = tail_body.strip_prefix("seeded:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Failure::point(format!("bad seed {seed:?}")))?;
        Tail::Seeded(seed)
    } else {
        return Err(Failure::point(format!("unknown tail {tail_body:?}")));
    };
    DigitString::new(q, prefix, tail).map_err(|e| Failure::point(e.to_string()))
}
