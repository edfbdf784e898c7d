//! Parsers for the textual argument forms: windows, points, regions, slopes.

use locgen_core::generate::{Phase, Real};
use locgen_core::{Point, Region};

/// `WxH[@x,y]` (2D, default anchor at the origin) or `a..b` (1D, inclusive).
pub fn parse_window(s: &str) -> Result<Region, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
        if b < a {
            return Err(format!("empty window `{s}`"));
        }
        return Ok(Region::rect(1, a, b, 0, 0));
    }
    let (size, anchor) = match s.split_once('@') {
        Some((size, at)) => (size, parse_point(at)?),
        None => (s, Point::ORIGIN),
    };
    let (w, h) = size
        .split_once('x')
        .ok_or_else(|| format!("window `{s}` is neither WxH nor a..b"))?;
    let w: i64 = w.parse().map_err(|_| format!("bad width `{w}`"))?;
    let h: i64 = h.parse().map_err(|_| format!("bad height `{h}`"))?;
    if w < 1 || h < 1 {
        return Err(format!("degenerate window `{s}`"));
    }
    Ok(Region::rect(2, anchor.x, anchor.x + w - 1, anchor.y, anchor.y + h - 1))
}

/// `x,y`, or a single integer for a 1D point.
pub fn parse_point(s: &str) -> Result<Point, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad coordinate `{t}` in `{s}`")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x] => Ok(Point::d1(*x)),
        [x, y] => Ok(Point::new(*x, *y)),
        _ => Err(format!("bad point `{s}`")),
    }
}

/// `x,y;x,y;...`.
pub fn parse_points(s: &str) -> Result<Vec<Point>, String> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_point).collect()
}

/// Named regions: `q:N`, `s:N`, `diamond:K`, `rect:WxH`, `cells:x,y;...`,
/// each optionally followed by `@x,y`. `dim` is the lattice dimension.
pub fn parse_region(s: &str, dim: u8) -> Result<Region, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("region `{s}` needs a `kind:` prefix"))?;
    let (arg, at) = match rest.split_once('@') {
        Some((a, at)) => (a, parse_point(at)?),
        None => (rest, Point::ORIGIN),
    };
    let num = || arg.parse::<i64>().map_err(|_| format!("bad size `{arg}`"));
    let r = match kind {
        "q" => Region::q(num()?, dim),
        "s" => Region::s(num()?, dim),
        "diamond" if dim == 2 => Region::diamond(num()?),
        "rect" => parse_window(arg)?,
        "cells" => Region::from_points(dim, parse_points(arg)?).map_err(|e| e.to_string())?,
        _ => return Err(format!("unknown region kind `{kind}`")),
    };
    if r.is_empty() {
        return Err(format!("region `{s}` is empty"));
    }
    Ok(r.translate(at))
}

/// `silver`, `golden` or a rational `p/q`.
pub fn parse_alpha(s: &str, bits: u32) -> Result<Real, String> {
    match s {
        "silver" => Ok(Real::silver(bits)),
        "golden" => Ok(Real::golden(bits)),
        _ => {
            let (n, d) = parse_ratio(s)?;
            Ok(Real::ratio(n, d))
        }
    }
}

/// `p/q` or an integer.
pub fn parse_ratio(s: &str) -> Result<(i64, i64), String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
    let d: i64 = d.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
    if d == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok((n, d))
}

/// Phase `c + m*alpha` from a rational constant and an integer coefficient.
pub fn phase(constant: &str, alpha_coeff: i64) -> Result<Phase, String> {
    let (n, d) = parse_ratio(constant)?;
    let mut p = Phase::affine(0, alpha_coeff);
    p.constant = Phase::rational(n, d).constant;
    Ok(p)
}

/// A word of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<u8>, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(format!("bad bit `{c}` in `{s}`")),
        })
        .collect()
}

/// Comma-separated positive integers (block vectors).
pub fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad integer `{t}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(parse_window("3x2").unwrap(), Region::rect(2, 0, 2, 0, 1));
        assert_eq!(parse_window("2x2@-1,5").unwrap(), Region::rect(2, -1, 0, 5, 6));
        assert_eq!(parse_window("-2..3").unwrap().len(), 6);
        assert!(parse_window("0x5").is_err());
        assert!(parse_window("5x0").is_err());
        assert!(parse_window("3..1").is_err());
        assert!(parse_window("3by2").is_err());
    }

    #[test]
    fn regions() {
        assert_eq!(
            parse_region("diamond:1@5,0", 2).unwrap(),
            Region::diamond(1).translate(Point::new(5, 0))
        );
        assert_eq!(parse_region("q:1", 2).unwrap().len(), 9);
        assert_eq!(parse_region("cells:0,0;2,0", 2).unwrap().len(), 2);
        assert!(parse_region("blob:1", 2).is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_ratio("3/4").unwrap(), (3, 4));
        assert_eq!(parse_ratio("-2").unwrap(), (-2, 1));
        assert!(parse_ratio("1/0").is_err());
        assert_eq!(parse_bits("0110").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_point("4,1").unwrap(), Point::new(4, 1));
    }
}
