use thiserror::Error;

use crate::lattice::{Alphabet, Pattern, Point, WangTile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("pattern is empty")]
    Empty,
    #[error("grey-level output needs a 2-symbol alphabet, got {0}")]
    NotBinary(usize),
    #[error("alphabet has no tile meaning")]
    NotTiles,
    #[error("scale must be positive")]
    BadScale,
}

fn bounds(p: &Pattern) -> Result<(Point, Point), RenderError> {
    p.domain().bbox().ok_or(RenderError::Empty)
}

/// One text row per lattice row, top row first; `.` marks cells outside the domain.
pub fn render_text(p: &Pattern, alphabet: &Alphabet) -> String {
    let Some((lo, hi)) = p.domain().bbox() else {
        return String::new();
    };
    let width = alphabet.labels().iter().map(|l| l.len()).max().unwrap_or(1);
    let mut out = String::new();
    for y in (lo.y..=hi.y).rev() {
        let row: Vec<String> = (lo.x..=hi.x)
            .map(|x| match p.get(Point::new(x, y)) {
                Some(s) => format!("{:>width$}", alphabet.label(s)),
                None => format!("{:>width$}", "."),
            })
            .collect();
        let sep = if width > 1 { " " } else { "" };
        out.push_str(&row.join(sep));
        out.push('\n');
    }
    out
}

/// A one-dimensional word as a single line of labels.
pub fn render_word(word: &[u32], alphabet: &Alphabet) -> String {
    let sep = if alphabet.labels().iter().any(|l| l.len() > 1) {
        " "
    } else {
        ""
    };
    let v: Vec<&str> = word.iter().map(|s| alphabet.label(*s)).collect();
    format!("{}\n", v.join(sep))
}

/// Binary PGM (`P5`): symbol 0 is white, symbol 1 black, `scale` pixels per cell.
pub fn render_pgm(p: &Pattern, alphabet: &Alphabet, scale: usize) -> Result<Vec<u8>, RenderError> {
    if alphabet.size() != 2 {
        return Err(RenderError::NotBinary(alphabet.size()));
    }
    if scale == 0 {
        return Err(RenderError::BadScale);
    }
    let (lo, hi) = bounds(p)?;
    let (w, h) = ((hi.x - lo.x + 1) as usize, (hi.y - lo.y + 1) as usize);
    let mut out = format!("P5\n{} {}\n255\n", w * scale, h * scale).into_bytes();
    for py in 0..h * scale {
        let y = hi.y - (py / scale) as i64;
        for px in 0..w * scale {
            let x = lo.x + (px / scale) as i64;
            out.push(match p.get(Point::new(x, y)) {
                Some(1) => 0,
                Some(_) => 255,
                None => 128,
            });
        }
    }
    Ok(out)
}

const PALETTE: [[u8; 3]; 6] = [
    [255, 255, 255],
    [0, 0, 0],
    [214, 39, 40],
    [31, 119, 180],
    [44, 160, 44],
    [255, 127, 14],
];

fn colour(c: u8) -> [u8; 3] {
    PALETTE[c as usize % PALETTE.len()]
}

fn tile_pixel(t: &WangTile, px: usize, py: usize, s: usize) -> [u8; 3] {
    let band = (s / 4).max(1);
    let (dn, ds, dw, de) = (py, s - 1 - py, px, s - 1 - px);
    let m = dn.min(ds).min(dw).min(de);
    if m >= band {
        return [255, 255, 255];
    }
    let c = if m == dn {
        t.n
    } else if m == ds {
        t.s
    } else if m == dw {
        t.w
    } else {
        t.e
    };
    colour(c)
}

/// Binary PPM (`P6`) of a Wang tiling, each tile an `s`x`s` block with coloured edge bands.
pub fn render_ppm(p: &Pattern, alphabet: &Alphabet, s: usize) -> Result<Vec<u8>, RenderError> {
    let tiles = alphabet.wang_tiles().ok_or(RenderError::NotTiles)?;
    if s == 0 {
        return Err(RenderError::BadScale);
    }
    let (lo, hi) = bounds(p)?;
    let (w, h) = ((hi.x - lo.x + 1) as usize, (hi.y - lo.y + 1) as usize);
    let mut out = format!("P6\n{} {}\n255\n", w * s, h * s).into_bytes();
    for py in 0..h * s {
        let y = hi.y - (py / s) as i64;
        for px in 0..w * s {
            let x = lo.x + (px / s) as i64;
            let rgb = match p.get(Point::new(x, y)) {
                Some(sym) => tile_pixel(&tiles[sym as usize], px % s, py % s, s),
                None => [128, 128, 128],
            };
            out.extend_from_slice(&rgb);
        }
    }
    Ok(out)
}
