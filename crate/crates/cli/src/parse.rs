//! Text inputs: polynomial specs, `a,b` pairs and matrix files.

use std::path::Path;

use splitcount::linalg::text::parse_matrix;
use splitcount::{Error, IntegerMatrix, Result, SplitPolySpec};

/// Parses products of `(x-1)^a` and `(x+1)^b` in any order.
///
/// Exponents of 1 may be omitted, whitespace and `*` between factors are
/// ignored, and a repeated factor adds to its multiplicity. With `n` given,
/// the degree must match.
pub fn parse_poly(text: &str, n: Option<usize>) -> Result<SplitPolySpec> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let (mut a, mut b) = (0usize, 0usize);
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (slot, tail) = if let Some(t) = rest.strip_prefix("(x-1)") {
            (&mut a, t)
        } else if let Some(t) = rest.strip_prefix("(x+1)") {
            (&mut b, t)
        } else {
            return Err(Error::Parse(format!("expected (x-1) or (x+1) at {rest:?}")));
        };
        let (exp, tail) = match tail.strip_prefix('^') {
            Some(t) => {
                let t = t.strip_prefix('{').unwrap_or(t);
                let digits = t.chars().take_while(char::is_ascii_digit).count();
                if digits == 0 {
                    return Err(Error::Parse(format!("missing exponent at {tail:?}")));
                }
                let exp: usize = t[..digits].parse().map_err(|_| Error::Parse(format!("bad exponent {:?}", &t[..digits])))?;
                let t = &t[digits..];
                (exp, t.strip_prefix('}').unwrap_or(t))
            }
            None => (1, tail),
        };
        *slot += exp;
        rest = tail;
    }
    finish(a, b, n)
}

/// Parses `a,b`.
pub fn parse_split(text: &str, n: Option<usize>) -> Result<SplitPolySpec> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(Error::Parse(format!("expected a,b but got {text:?}")));
    };
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplicity {s:?}")));
    finish(num(a)?, num(b)?, n)
}

fn finish(a: usize, b: usize, n: Option<usize>) -> Result<SplitPolySpec> {
    let spec = SplitPolySpec::new(a, b)?;
    match n {
        Some(n) if n != spec.n() => Err(Error::DimensionMismatch(format!("--n {n} but {spec} has degree {}", spec.n()))),
        _ => Ok(spec),
    }
}

pub fn read_matrix(path: &Path) -> std::result::Result<IntegerMatrix, crate::CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io(path.display().to_string(), e))?;
    Ok(parse_matrix(&text)?)
}
