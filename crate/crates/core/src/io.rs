//! Point files and decimal formatting.

use std::io::{Read, Write};
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::arith::BigInterval;
use crate::kernel::{Cx, PointSource};
use crate::surface::ExactPoint;
use crate::{Error, Result};

/// Parses `p/q`, a decimal like `-0.125`, or scientific notation, exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') {
        return Rational::from_str(s).map_err(|e| Error::Parse(format!("{s}: {e}")));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(s.to_string()))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(s.to_string()));
    }
    let digits = format!("{int}{frac}");
    let num = Integer::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| Error::Parse(s.to_string()))?;
    let scale = exp - frac.len() as i64;
    let mut q = Rational::from(num);
    if scale >= 0 {
        q *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        q /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Decimal string with `digits` fractional digits, rounded half to even.
pub fn rational_to_decimal(q: &Rational, digits: usize) -> String {
    let scaled = Rational::from(q * Integer::from(Integer::u_pow_u(10, digits as u32)));
    let floor = Integer::from(scaled.floor_ref());
    let frac = scaled - Rational::from(&floor);
    let half = Rational::from((1, 2));
    let n = match frac.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    };
    let neg = n < 0;
    let mut s = n.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// Coordinates of `p` as decimal strings.
pub fn decimal_pair(p: &ExactPoint, digits: usize) -> (String, String) {
    match p.as_rational() {
        Some((x, y)) => (rational_to_decimal(x, digits), rational_to_decimal(y, digits)),
        None => {
            let bits = (digits as f64 * 3.33) as u32 + 64;
            let z: Cx<BigInterval> = p.at(bits);
            (
                rational_to_decimal(&z.re.mid_rational(bits), digits),
                rational_to_decimal(&z.im.mid_rational(bits), digits),
            )
        }
    }
}

/// Reads a CSV with header `x,y`.
pub fn read_points<R: Read>(r: R) -> Result<Vec<ExactPoint>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let ix = headers.iter().position(|h| h == "x").ok_or_else(|| Error::Parse("missing column x".into()))?;
    let iy = headers.iter().position(|h| h == "y").ok_or_else(|| Error::Parse("missing column y".into()))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let x = parse_rational(rec.get(ix).unwrap_or(""))?;
        let y = parse_rational(rec.get(iy).unwrap_or(""))?;
        out.push(ExactPoint::rational(x, y));
    }
    Ok(out)
}

pub fn read_points_file(path: &std::path::Path) -> Result<Vec<ExactPoint>> {
    read_points(std::fs::File::open(path)?)
}

/// Writes `x,y` rows; exact `p/q` when `exact` and the point is rational.
pub fn write_points<W: Write>(w: W, pts: &[ExactPoint], digits: usize, exact: bool) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["x", "y"]).map_err(|e| Error::Parse(e.to_string()))?;
    for p in pts {
        let (x, y) = match (exact, p.as_rational()) {
            (true, Some((x, y))) => (x.to_string(), y.to_string()),
            _ => decimal_pair(p, digits),
        };
        wr.write_record([x, y]).map_err(|e| Error::Parse(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_points_file(path: &std::path::Path, pts: &[ExactPoint], digits: usize, exact: bool) -> Result<()> {
    write_points(std::fs::File::create(path)?, pts, digits, exact)
}
