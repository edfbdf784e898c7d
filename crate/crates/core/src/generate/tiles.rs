use std::collections::{BTreeMap, VecDeque};

use super::{BitSource, GenerateError, LocalRule};
use crate::catalog::{corner_tiles, even_tiles};
use crate::lattice::{Pattern, Point, Region, Symbol, WangTile};

fn even_index(t: WangTile) -> Symbol {
    even_tiles().iter().position(|u| *u == t).expect("even tile") as Symbol
}

fn wires_tile(b00: u8, b10: u8, b01: u8, b11: u8) -> WangTile {
    WangTile::new(b01 ^ b11, b10 ^ b11, b00 ^ b10, b00 ^ b01)
}

/// The wires construction as a local rule on bits (corners of the unit square).
pub fn wires_rule() -> LocalRule {
    let offs = vec![Point::new(0, 0), Point::new(1, 0), Point::new(0, 1), Point::new(1, 1)];
    LocalRule::from_fn(2, 8, offs, |s| {
        even_index(wires_tile(s[0] as u8, s[1] as u8, s[2] as u8, s[3] as u8))
    })
}

pub(super) fn wires_cell(bits: &BitSource, p: Point) -> Symbol {
    let b = |dx, dy| u8::from(bits.bit(p + Point::new(dx, dy)));
    even_index(wires_tile(b(0, 0), b(1, 0), b(0, 1), b(1, 1)))
}

/// Tiles each cell with the even tile whose edges are the XORs of the bits
/// at its corners. The result uses [`even_tiles`] symbol order.
pub fn wires(bits: &BitSource, window: &Region) -> Pattern {
    let mut out = Pattern::new(2);
    for p in window.iter() {
        out.set(p, wires_cell(bits, p));
    }
    out
}

/// Recovers corner bits from a tiling over `tiles`.
///
/// Each connected component is anchored at its least corner, which gets
/// `anchor_bit`. Fails if the edge XOR constraints are inconsistent.
pub fn wires_invert(pat: &Pattern, tiles: &[WangTile], anchor_bit: bool) -> Result<Pattern, GenerateError> {
    // Edges of the corner graph: (corner, corner, required xor, cell).
    let mut adj: BTreeMap<Point, Vec<(Point, u8, Point)>> = BTreeMap::new();
    for (c, s) in pat.iter() {
        let t = *tiles
            .get(s as usize)
            .ok_or(GenerateError::UnknownTile { at: c, symbol: s })?;
        let p00 = c;
        let p10 = c + Point::new(1, 0);
        let p01 = c + Point::new(0, 1);
        let p11 = c + Point::new(1, 1);
        for (a, b, x) in [(p00, p10, t.s), (p01, p11, t.n), (p00, p01, t.w), (p10, p11, t.e)] {
            if x > 1 {
                return Err(GenerateError::UnknownTile { at: c, symbol: s });
            }
            adj.entry(a).or_default().push((b, x, c));
            adj.entry(b).or_default().push((a, x, c));
        }
    }
    let mut bit: BTreeMap<Point, u8> = BTreeMap::new();
    let corners: Vec<Point> = adj.keys().copied().collect();
    for start in corners {
        if bit.contains_key(&start) {
            continue;
        }
        bit.insert(start, u8::from(anchor_bit));
        let mut q = VecDeque::from([start]);
        while let Some(a) = q.pop_front() {
            let ba = bit[&a];
            for &(b, x, cell) in &adj[&a] {
                match bit.get(&b) {
                    Some(&bb) if bb != ba ^ x => return Err(GenerateError::ParityObstruction(cell)),
                    Some(_) => {}
                    None => {
                        bit.insert(b, ba ^ x);
                        q.push_back(b);
                    }
                }
            }
        }
    }
    Ok(Pattern::from_cells(2, bit.into_iter().map(|(p, b)| (p, b as Symbol))).expect("distinct"))
}

/// The corner tile with lower edge `x` and left edge `y`, as a symbol of [`corner_tiles`].
pub fn corner_tile(x: u8, y: u8) -> Symbol {
    let s = (2 * x + y) as Symbol;
    debug_assert_eq!(corner_tiles()[s as usize].s, x);
    s
}

pub(super) fn corners_cell(k: u8, l: u8, a: &BitSource, b: &BitSource, p: Point) -> Symbol {
    let x = ((a.bit1(p.x) as i64 + l as i64 + p.y).rem_euclid(2)) as u8;
    let y = ((b.bit1(p.y) as i64 + k as i64 + p.x).rem_euclid(2)) as u8;
    corner_tile(x, y)
}

/// Corner tiling from column bits `a` and row bits `b`.
pub fn corners(k: u8, l: u8, a: &BitSource, b: &BitSource, window: &Region) -> Pattern {
    let mut out = Pattern::new(2);
    for p in window.iter() {
        out.set(p, corners_cell(k, l, a, b, p));
    }
    out
}
