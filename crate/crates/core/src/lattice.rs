//! Points, regions, patterns, alphabets and SFT definitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Symbol identifier inside an [`Alphabet`].
pub type Symbol = u32;

/// A lattice point. One-dimensional points keep `y == 0`.
///
/// Ordering is row-major: first `y`, then `x`. This is the cell order used
/// for canonical output everywhere in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub const fn d1(x: i64) -> Self {
        Point { x, y: 0 }
    }

    /// Chebyshev norm.
    pub fn norm(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist(self, other: Point) -> i64 {
        (self - other).norm()
    }
}

impl Ord for Point {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(o.y, o.x))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Point> for i64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension must be 1 or 2, got {0}")]
    BadDimension(u8),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),
    #[error("point {0} is not one-dimensional")]
    NotOneDimensional(Point),
    #[error("patterns disagree at {0}")]
    Conflict(Point),
    #[error("symbol {symbol} at {at} is outside an alphabet of size {size}")]
    AlphabetMismatch { at: Point, symbol: Symbol, size: usize },
    #[error("region is empty")]
    EmptyRegion,
    #[error("alphabet must have between 1 and {max} symbols, got {got}")]
    AlphabetSize { got: usize, max: usize },
}

fn check_dim(d: u8) -> Result<(), LatticeError> {
    if d == 1 || d == 2 {
        Ok(())
    } else {
        Err(LatticeError::BadDimension(d))
    }
}

/// Which family of cubes: `Q_n = [-n, n]^d` or `S_n = [0, n-1]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeKind {
    Centered,
    Anchored,
}

/// A finite set of lattice points of a fixed dimension.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Region {
    dim: u8,
    cells: BTreeSet<Point>,
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region{}{:?}", self.dim, self.cells)
    }
}

impl Region {
    pub fn empty(dim: u8) -> Self {
        Region {
            dim,
            cells: BTreeSet::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(dim: u8, pts: I) -> Result<Self, LatticeError> {
        check_dim(dim)?;
        let cells: BTreeSet<Point> = pts.into_iter().collect();
        if dim == 1 {
            if let Some(p) = cells.iter().find(|p| p.y != 0) {
                return Err(LatticeError::NotOneDimensional(*p));
            }
        }
        Ok(Region { dim, cells })
    }

    pub fn cube(n: i64, kind: CubeKind, dim: u8) -> Result<Self, LatticeError> {
        check_dim(dim)?;
        let (lo, hi) = match kind {
            CubeKind::Centered => (-n, n),
            CubeKind::Anchored => (0, n - 1),
        };
        Ok(Self::rect(dim, lo, hi, lo, hi))
    }

    /// `Q_n` centred at `c`.
    pub fn q(n: i64, dim: u8) -> Self {
        Self::cube(n, CubeKind::Centered, dim).expect("dimension")
    }

    /// `S_n` anchored at the origin.
    pub fn s(n: i64, dim: u8) -> Self {
        Self::cube(n, CubeKind::Anchored, dim).expect("dimension")
    }

    /// Axis-aligned box `[x0, x1] x [y0, y1]` (the y range is ignored in 1D).
    pub fn rect(dim: u8, x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        let mut cells = BTreeSet::new();
        let (y0, y1) = if dim == 1 { (0, 0) } else { (y0, y1) };
        for y in y0..=y1 {
            for x in x0..=x1 {
                cells.insert(Point::new(x, y));
            }
        }
        Region { dim, cells }
    }

    /// Diamond `{p : |p.x| + |p.y| <= k}`.
    pub fn diamond(k: i64) -> Self {
        let mut cells = BTreeSet::new();
        for y in -k..=k {
            let w = k - y.abs();
            for x in -w..=w {
                cells.insert(Point::new(x, y));
            }
        }
        Region { dim: 2, cells }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.cells.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.cells.iter().copied()
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.cells
    }

    pub fn insert(&mut self, p: Point) {
        debug_assert!(self.dim == 2 || p.y == 0);
        self.cells.insert(p);
    }

    /// Chebyshev dilation by `r`.
    pub fn neighborhood(&self, r: i64) -> Region {
        let mut cells = BTreeSet::new();
        let dy = if self.dim == 1 { 0 } else { r };
        for p in &self.cells {
            for y in -dy..=dy {
                for x in -r..=r {
                    cells.insert(*p + Point::new(x, y));
                }
            }
        }
        Region { dim: self.dim, cells }
    }

    pub fn translate(&self, v: Point) -> Region {
        Region {
            dim: self.dim,
            cells: self.cells.iter().map(|p| *p + v).collect(),
        }
    }

    pub fn union(&self, other: &Region) -> Region {
        Region {
            dim: self.dim.max(other.dim),
            cells: self.cells.union(&other.cells).copied().collect(),
        }
    }

    pub fn difference(&self, other: &Region) -> Region {
        Region {
            dim: self.dim,
            cells: self.cells.difference(&other.cells).copied().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.cells.is_disjoint(&other.cells)
    }

    pub fn diam(&self) -> i64 {
        let mut d = 0;
        for a in &self.cells {
            for b in &self.cells {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Minimal Chebyshev distance between two regions; `None` if either is empty.
    pub fn distance(&self, other: &Region) -> Option<i64> {
        let mut best: Option<i64> = None;
        for a in &self.cells {
            for b in &other.cells {
                let d = a.dist(*b);
                best = Some(best.map_or(d, |m| m.min(d)));
            }
        }
        best
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bbox(&self) -> Option<(Point, Point)> {
        let mut it = self.cells.iter();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        Some((lo, hi))
    }

    pub fn rows(&self) -> impl Iterator<Item = i64> + '_ {
        let ys: BTreeSet<i64> = self.cells.iter().map(|p| p.y).collect();
        ys.into_iter()
    }
}

/// A finite partial assignment of symbols to lattice points.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Pattern {
    dim: u8,
    cells: BTreeMap<Point, Symbol>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern{}{{", self.dim)?;
        for (i, (p, s)) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p:?}:{s}")?;
        }
        write!(f, "}}")
    }
}

impl Pattern {
    pub fn new(dim: u8) -> Self {
        Pattern {
            dim,
            cells: BTreeMap::new(),
        }
    }

    pub fn from_cells<I: IntoIterator<Item = (Point, Symbol)>>(dim: u8, it: I) -> Result<Self, LatticeError> {
        check_dim(dim)?;
        let mut pat = Pattern::new(dim);
        for (p, s) in it {
            if dim == 1 && p.y != 0 {
                return Err(LatticeError::NotOneDimensional(p));
            }
            if let Some(old) = pat.cells.insert(p, s) {
                if old != s {
                    return Err(LatticeError::Conflict(p));
                }
            }
        }
        Ok(pat)
    }

    /// A one-dimensional word placed at `start..start+len`.
    pub fn word(start: i64, syms: &[Symbol]) -> Self {
        Pattern {
            dim: 1,
            cells: syms
                .iter()
                .enumerate()
                .map(|(i, s)| (Point::d1(start + i as i64), *s))
                .collect(),
        }
    }

    /// Constant pattern on a region.
    pub fn constant(region: &Region, s: Symbol) -> Self {
        Pattern {
            dim: region.dim,
            cells: region.iter().map(|p| (p, s)).collect(),
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, p: Point) -> Option<Symbol> {
        self.cells.get(&p).copied()
    }

    pub fn set(&mut self, p: Point, s: Symbol) {
        self.cells.insert(p, s);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, Symbol)> + '_ {
        self.cells.iter().map(|(p, s)| (*p, *s))
    }

    pub fn domain(&self) -> Region {
        Region {
            dim: self.dim,
            cells: self.cells.keys().copied().collect(),
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.cells.values().copied().collect()
    }

    /// `sigma^p`: the result has domain `dom - p` and value `self(p + q)` at `q`.
    pub fn shift(&self, p: Point) -> Pattern {
        Pattern {
            dim: self.dim,
            cells: self.cells.iter().map(|(q, s)| (*q - p, *s)).collect(),
        }
    }

    /// Places the pattern at offset `p` (the inverse of [`Pattern::shift`]).
    pub fn translate(&self, p: Point) -> Pattern {
        self.shift(-p)
    }

    pub fn restrict(&self, region: &Region) -> Pattern {
        Pattern {
            dim: self.dim,
            cells: self
                .cells
                .iter()
                .filter(|(p, _)| region.contains(**p))
                .map(|(p, s)| (*p, *s))
                .collect(),
        }
    }

    /// Union of two patterns; fails on the first cell where they disagree.
    pub fn union(&self, other: &Pattern) -> Result<Pattern, LatticeError> {
        let mut out = self.clone();
        out.dim = self.dim.max(other.dim);
        for (p, s) in &other.cells {
            match out.cells.get(p) {
                Some(t) if t != s => return Err(LatticeError::Conflict(*p)),
                _ => {
                    out.cells.insert(*p, *s);
                }
            }
        }
        Ok(out)
    }

    /// Whether `self` agrees with `other` on every cell of `self`.
    pub fn is_sub_pattern_of(&self, other: &Pattern) -> bool {
        self.cells.iter().all(|(p, s)| other.get(*p) == Some(*s))
    }

    /// Whether `self` shifted by `t` is a sub-pattern of `other`.
    pub fn occurs_at(&self, other: &Pattern, t: Point) -> bool {
        self.cells.iter().all(|(p, s)| other.get(*p + t) == Some(*s))
    }
}

/// Free-function form of [`Pattern::union`].
pub fn pattern_union(a: &Pattern, b: &Pattern) -> Result<Pattern, LatticeError> {
    a.union(b)
}

/// Free-function form of [`Pattern::shift`].
pub fn shift_pattern(p: &Pattern, by: Point) -> Pattern {
    p.shift(by)
}

/// A Wang tile given by its edge colours.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WangTile {
    pub n: u8,
    pub e: u8,
    pub s: u8,
    pub w: u8,
}

impl WangTile {
    pub const fn new(n: u8, e: u8, s: u8, w: u8) -> Self {
        WangTile { n, e, s, w }
    }

    /// Parses four binary digits `NESW`, e.g. `"1100"`.
    pub fn from_bits(s: &str) -> Option<Self> {
        let b: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<Vec<u8>>>()?;
        if b.len() != 4 {
            return None;
        }
        Some(WangTile::new(b[0], b[1], b[2], b[3]))
    }

    pub fn label(&self) -> String {
        format!("{}{}{}{}", self.n, self.e, self.s, self.w)
    }
}

impl fmt::Debug for WangTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Maximum alphabet the search engine supports.
pub const MAX_ALPHABET: usize = 64;

/// A finite alphabet with printable labels and optional tile meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    tiles: Option<Vec<WangTile>>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Result<Self, LatticeError> {
        if labels.is_empty() {
            return Err(LatticeError::AlphabetSize {
                got: 0,
                max: usize::MAX,
            });
        }
        Ok(Alphabet { labels, tiles: None })
    }

    /// Alphabet `{0, .., k-1}` labelled by decimal ids.
    pub fn numeric(k: usize) -> Self {
        Alphabet {
            labels: (0..k).map(|i| i.to_string()).collect(),
            tiles: None,
        }
    }

    pub fn tiles(tiles: &[WangTile]) -> Self {
        Alphabet {
            labels: tiles.iter().map(|t| t.label()).collect(),
            tiles: Some(tiles.to_vec()),
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, s: Symbol) -> &str {
        &self.labels[s as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn symbol_of(&self, label: &str) -> Option<Symbol> {
        self.labels.iter().position(|l| l == label).map(|i| i as Symbol)
    }

    pub fn wang_tiles(&self) -> Option<&[WangTile]> {
        self.tiles.as_deref()
    }
}

/// A subshift of finite type: dimension, alphabet and a finite forbidden set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftSpec {
    pub name: String,
    pub dim: u8,
    pub alphabet: Alphabet,
    pub forbidden: Vec<Pattern>,
}

impl SftSpec {
    pub fn new(name: &str, dim: u8, alphabet: Alphabet, forbidden: Vec<Pattern>) -> Result<Self, LatticeError> {
        check_dim(dim)?;
        for f in &forbidden {
            if f.dim() != dim {
                return Err(LatticeError::DimensionMismatch(f.dim(), dim));
            }
            check_symbols(f, alphabet.size())?;
        }
        let mut forbidden = forbidden;
        forbidden.sort();
        forbidden.dedup();
        Ok(SftSpec {
            name: name.to_string(),
            dim,
            alphabet,
            forbidden,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.size()
    }

    /// Largest diameter among forbidden patterns (0 if none).
    pub fn max_diam(&self) -> i64 {
        self.forbidden.iter().map(|f| f.domain().diam()).max().unwrap_or(0)
    }

    /// Largest extent along x of any forbidden pattern, counted in cells.
    pub fn max_span(&self) -> i64 {
        self.forbidden
            .iter()
            .filter_map(|f| f.domain().bbox())
            .map(|(lo, hi)| (hi.x - lo.x + 1).max(hi.y - lo.y + 1))
            .max()
            .unwrap_or(1)
    }
}

fn check_symbols(p: &Pattern, size: usize) -> Result<(), LatticeError> {
    for (at, s) in p.iter() {
        if s as usize >= size {
            return Err(LatticeError::AlphabetMismatch { at, symbol: s, size });
        }
    }
    Ok(())
}

/// True iff no translate of a forbidden pattern lies inside `pat`.
pub fn locally_admissible(pat: &Pattern, spec: &SftSpec) -> Result<bool, LatticeError> {
    if pat.dim() != spec.dim {
        return Err(LatticeError::DimensionMismatch(pat.dim(), spec.dim));
    }
    check_symbols(pat, spec.alphabet_size())?;
    Ok(first_violation(pat, spec).is_none())
}

/// First `(forbidden index, offset)` at which a forbidden pattern occurs in `pat`.
pub fn first_violation(pat: &Pattern, spec: &SftSpec) -> Option<(usize, Point)> {
    for (i, f) in spec.forbidden.iter().enumerate() {
        let Some((anchor, _)) = f.iter().next() else {
            continue;
        };
        for (p, _) in pat.iter() {
            let t = p - anchor;
            if f.occurs_at(pat, t) {
                return Some((i, t));
            }
        }
    }
    None
}

/// The nearest-neighbour SFT of a Wang tile set.
pub fn lower_wang(name: &str, tiles: &[WangTile]) -> SftSpec {
    let mut forbidden = Vec::new();
    for (i, a) in tiles.iter().enumerate() {
        for (j, b) in tiles.iter().enumerate() {
            let (i, j) = (i as Symbol, j as Symbol);
            if a.e != b.w {
                forbidden.push(Pattern::from_cells(2, [(Point::new(0, 0), i), (Point::new(1, 0), j)]).unwrap());
            }
            if a.n != b.s {
                forbidden.push(Pattern::from_cells(2, [(Point::new(0, 0), i), (Point::new(0, 1), j)]).unwrap());
            }
        }
    }
    SftSpec::new(name, 2, Alphabet::tiles(tiles), forbidden).expect("well-formed tile SFT")
}

/// Floor division that rounds toward negative infinity.
pub fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Non-negative remainder matching [`div_floor`].
pub fn mod_floor(a: i64, b: i64) -> i64 {
    a - b * div_floor(a, b)
}
