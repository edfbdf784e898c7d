//! Plain-text tile set and pattern files.
//!
//! Tile sets hold one tile per line as `N E S W` colour ids. Pattern files
//! start with `dim=1` or `dim=2` and list `x [y] symbol` per line. Both allow
//! `#` comments and blank lines.

use thiserror::Error;

use crate::lattice::{Pattern, Point, Symbol, WangTile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `dim=` header")]
    MissingHeader,
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Yields `(1-based line number, content)` with comments and blanks removed.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn parse_tileset(text: &str) -> Result<Vec<WangTile>, FormatError> {
    let mut tiles = Vec::new();
    for (ln, l) in content_lines(text) {
        let v: Vec<u8> = l
            .split_whitespace()
            .map(|t| t.parse::<u8>().map_err(|_| err(ln, format!("bad colour `{t}`"))))
            .collect::<Result<_, _>>()?;
        if v.len() != 4 {
            return Err(err(ln, format!("expected 4 colours, found {}", v.len())));
        }
        tiles.push(WangTile::new(v[0], v[1], v[2], v[3]));
    }
    Ok(tiles)
}

pub fn write_tileset(tiles: &[WangTile]) -> String {
    tiles
        .iter()
        .map(|t| format!("{} {} {} {}\n", t.n, t.e, t.s, t.w))
        .collect()
}

pub fn parse_pattern(text: &str) -> Result<Pattern, FormatError> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or(FormatError::MissingHeader)?;
    let dim: u8 = match head.replace(' ', "").as_str() {
        "dim=1" => 1,
        "dim=2" => 2,
        _ => return Err(err(ln, format!("bad header `{head}`"))),
    };
    let mut cells = Vec::new();
    for (ln, l) in lines {
        let v: Vec<i64> = l
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| err(ln, format!("bad integer `{t}`"))))
            .collect::<Result<_, _>>()?;
        let (p, s) = match (dim, v.as_slice()) {
            (1, [x, s]) => (Point::d1(*x), *s),
            (2, [x, y, s]) => (Point::new(*x, *y), *s),
            _ => return Err(err(ln, format!("expected {} fields", dim + 1))),
        };
        if s < 0 {
            return Err(err(ln, "negative symbol"));
        }
        cells.push((p, s as Symbol));
    }
    Pattern::from_cells(dim, cells).map_err(|e| err(0, e.to_string()))
}

pub fn write_pattern(p: &Pattern) -> String {
    let mut out = format!("dim={}\n", p.dim());
    for (q, s) in p.iter() {
        if p.dim() == 1 {
            out.push_str(&format!("{} {}\n", q.x, s));
        } else {
            out.push_str(&format!("{} {} {}\n", q.x, q.y, s));
        }
    }
    out
}
