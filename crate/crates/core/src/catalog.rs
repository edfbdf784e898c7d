//! Named shift spaces used throughout the tools and tests.

use crate::lattice::{lower_wang, Alphabet, Pattern, Point, SftSpec, Symbol, WangTile};

pub const WHITE: Symbol = 0;
pub const BLACK: Symbol = 1;

/// Domino tile ids inside [`domino_tiles`].
pub const V_TOP: Symbol = 0;
pub const V_BOTTOM: Symbol = 1;
pub const H_LEFT: Symbol = 2;
pub const H_RIGHT: Symbol = 3;

fn pat2(cells: &[((i64, i64), Symbol)]) -> Pattern {
    Pattern::from_cells(2, cells.iter().map(|((x, y), s)| (Point::new(*x, *y), *s))).unwrap()
}

fn bw() -> Alphabet {
    Alphabet::new(vec!["W".into(), "B".into()]).unwrap()
}

/// Full shift on `k` symbols.
pub fn fullshift(k: usize, dim: u8) -> SftSpec {
    SftSpec::new(&format!("fullshift{k}"), dim, Alphabet::numeric(k), vec![]).unwrap()
}

/// Two stacked black cells force black to the right of the lower one.
pub fn triangles() -> SftSpec {
    let f = pat2(&[((0, 0), BLACK), ((0, 1), BLACK), ((1, 0), WHITE)]);
    SftSpec::new("triangles", 2, bw(), vec![f]).unwrap()
}

/// Proper 2-colouring of the grid.
pub fn checkerboard() -> SftSpec {
    let mut f = Vec::new();
    for s in [WHITE, BLACK] {
        f.push(pat2(&[((0, 0), s), ((1, 0), s)]));
        f.push(pat2(&[((0, 0), s), ((0, 1), s)]));
    }
    SftSpec::new("checkerboard", 2, bw(), f).unwrap()
}

/// Black may not be followed by white, read left to right.
pub fn x_zbar(dim: u8) -> SftSpec {
    let f = Pattern::from_cells(dim, [(Point::d1(0), BLACK), (Point::d1(1), WHITE)]).unwrap();
    SftSpec::new(if dim == 1 { "xzbar1d" } else { "xzbar" }, dim, bw(), vec![f]).unwrap()
}

/// Symbols `{0,1,2}`: no 1 above 0, and only 2 may follow 2 horizontally.
pub fn stacks() -> SftSpec {
    let f = vec![
        pat2(&[((0, 0), 0), ((0, 1), 1)]),
        pat2(&[((0, 0), 2), ((1, 0), 0)]),
        pat2(&[((0, 0), 2), ((1, 0), 1)]),
    ];
    SftSpec::new("stacks", 2, Alphabet::numeric(3), f).unwrap()
}

/// Binary words without `11`.
pub fn golden_mean() -> SftSpec {
    let f = Pattern::word(0, &[1, 1]);
    SftSpec::new("golden-mean", 1, Alphabet::numeric(2), vec![f]).unwrap()
}

/// The eight binary tiles with an even number of 1-edges, in mask order.
pub fn even_tiles() -> Vec<WangTile> {
    ["0000", "1111", "1100", "0110", "0011", "1001", "1010", "0101"]
        .iter()
        .map(|s| WangTile::from_bits(s).unwrap())
        .collect()
}

/// All sixteen binary tiles, ordered by their `NESW` bit string.
pub fn all_binary_tiles() -> Vec<WangTile> {
    (0..16u8)
        .map(|m| WangTile::new(m >> 3 & 1, m >> 2 & 1, m >> 1 & 1, m & 1))
        .collect()
}

/// Corner tiles indexed by `2*x + y` where `x` is the lower edge and `y` the left edge.
pub fn corner_tiles() -> Vec<WangTile> {
    let mut v = Vec::new();
    for x in 0..2u8 {
        for y in 0..2u8 {
            v.push(WangTile::new(1 - x, 1 - y, x, y));
        }
    }
    v
}

pub fn domino_tiles() -> Vec<WangTile> {
    vec![
        WangTile::new(0, 0, 1, 0),
        WangTile::new(1, 0, 0, 0),
        WangTile::new(0, 1, 0, 0),
        WangTile::new(0, 0, 0, 1),
    ]
}

pub fn wires() -> SftSpec {
    lower_wang("wires", &even_tiles())
}

pub fn corners() -> SftSpec {
    lower_wang("corners", &corner_tiles())
}

pub fn dominoes() -> SftSpec {
    lower_wang("dominoes", &domino_tiles())
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "triangles",
    "checkerboard",
    "xzbar",
    "xzbar1d",
    "stacks",
    "golden-mean",
    "wires",
    "corners",
    "dominoes",
    "fullshift2",
    "fullshift2-1d",
];

pub fn by_name(name: &str) -> Option<SftSpec> {
    Some(match name {
        "triangles" => triangles(),
        "checkerboard" => checkerboard(),
        "xzbar" => x_zbar(2),
        "xzbar1d" => x_zbar(1),
        "stacks" => stacks(),
        "golden-mean" => golden_mean(),
        "wires" => wires(),
        "corners" => corners(),
        "dominoes" => dominoes(),
        "fullshift2" => fullshift(2, 2),
        "fullshift2-1d" => fullshift(2, 1),
        _ => return None,
    })
}
