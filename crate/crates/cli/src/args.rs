//! Value parsers for flags.

use belyi_core::elliptic::PointQ;
use belyi_core::exact::{parse_rational, Rational};

use crate::Failure;

/// Integers given as `5`, `-3..3` (inclusive) or a comma list of either.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSet(pub Vec<i64>);

pub fn parse_int_set(s: &str) -> Result<IntSet, String> {
    parse_ints(s).map(IntSet)
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = split_range(part) {
            let a: i64 = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
            let b: i64 = b.parse().map_err(|_| format!("bad range end {b:?}"))?;
            if b < a {
                return Err(format!("empty range {part}"));
            }
            if b - a > 10_000 {
                return Err(format!("range {part} is too long"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("not an integer: {part:?}"))?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn split_range(s: &str) -> Option<(&str, &str)> {
    // the start may be negative, so search after the first character
    let i = s.get(1..)?.find("..")? + 1;
    Some((&s[..i], &s[i + 2..]))
}

pub fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// `u,v` with rational coordinates.
pub fn parse_point(s: &str) -> Result<PointQ, String> {
    let (u, v) = s.split_once(',').ok_or_else(|| format!("expected u,v but got {s:?}"))?;
    Ok(PointQ::new(parse_rat(u)?, parse_rat(v)?))
}

pub fn nonneg(values: &[i64], flag: &str) -> Result<Vec<usize>, Failure> {
    values
        .iter()
        .map(|&x| usize::try_from(x).map_err(|_| Failure::usage(format!("{flag} must be nonnegative, got {x}"))))
        .collect()
}
