//! Configuration generators: finite descriptors, local rules and the
//! tile constructions built from bit fields.

mod render;
mod sturmian;
mod tiles;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::catalog::{self, BLACK, H_LEFT, H_RIGHT, V_BOTTOM, V_TOP, WHITE};
use crate::fold::Completion;
use crate::lattice::{locally_admissible, LatticeError, Pattern, Point, Region, SftSpec, Symbol};

pub use render::{render_pgm, render_ppm, render_text, render_word, RenderError};
pub use sturmian::{separation_map, sturmian, Phase, Real, SturmianConvention};
pub use tiles::{corner_tile, corners, wires, wires_invert, wires_rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("ill-formed descriptor: {0}")]
    IllFormedDescriptor(String),
    #[error("input pattern is missing cell {0}")]
    InsufficientInputDomain(Point),
    #[error("parity obstruction around cell {0}")]
    ParityObstruction(Point),
    #[error("symbol {symbol} at {at} is not a known tile")]
    UnknownTile { at: Point, symbol: Symbol },
    #[error("interval too wide to decide the floor at index {0}")]
    PrecisionInsufficient(i64),
    #[error("position {pos} needs more than {have} prefix symbols")]
    RangeExceedsPrefix { pos: i64, have: usize },
    #[error("empty window")]
    EmptyWindow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// splitmix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based hash of a seed, a channel and a lattice point.
pub fn cell_hash(seed: u64, channel: u64, p: Point) -> u64 {
    mix64(mix64(mix64(seed ^ channel.rotate_left(32)) ^ p.x as u64) ^ p.y as u64)
}

/// A deterministic field of bits indexed by lattice points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BitSource {
    Seeded(u64),
    Explicit { bits: BTreeMap<Point, bool>, default: bool },
}

impl BitSource {
    pub fn bit(&self, p: Point) -> bool {
        match self {
            BitSource::Seeded(seed) => cell_hash(*seed, 0, p) & 1 == 1,
            BitSource::Explicit { bits, default } => bits.get(&p).copied().unwrap_or(*default),
        }
    }

    pub fn bit1(&self, i: i64) -> u8 {
        u8::from(self.bit(Point::d1(i)))
    }

    /// Explicit source from a 0/1 pattern, `default` elsewhere.
    pub fn from_pattern(p: &Pattern, default: bool) -> Self {
        BitSource::Explicit {
            bits: p.iter().map(|(q, s)| (q, s != 0)).collect(),
            default,
        }
    }
}

/// A sliding block code: `out(p) = table[in(p + offsets)]`.
///
/// The table is indexed in mixed radix with the first offset least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    pub in_alphabet: usize,
    pub out_alphabet: usize,
    pub offsets: Vec<Point>,
    pub table: Vec<Symbol>,
}

impl LocalRule {
    pub fn from_fn(
        in_alphabet: usize,
        out_alphabet: usize,
        offsets: Vec<Point>,
        f: impl Fn(&[Symbol]) -> Symbol,
    ) -> Self {
        let n = in_alphabet.pow(offsets.len() as u32);
        let mut buf = vec![0; offsets.len()];
        let table = (0..n)
            .map(|mut idx| {
                for b in buf.iter_mut() {
                    *b = (idx % in_alphabet) as Symbol;
                    idx /= in_alphabet;
                }
                f(&buf)
            })
            .collect();
        LocalRule {
            in_alphabet,
            out_alphabet,
            offsets,
            table,
        }
    }

    pub fn identity(k: usize) -> Self {
        Self::from_fn(k, k, vec![Point::ORIGIN], |s| s[0])
    }

    pub fn constant(k: usize, s: Symbol) -> Self {
        LocalRule {
            in_alphabet: k,
            out_alphabet: k,
            offsets: vec![],
            table: vec![s],
        }
    }

    pub fn eval(&self, inputs: &[Symbol]) -> Symbol {
        let idx = inputs
            .iter()
            .rev()
            .fold(0usize, |acc, s| acc * self.in_alphabet + *s as usize);
        self.table[idx]
    }
}

/// Applies a local rule on `window`; every needed input cell must be present.
pub fn apply_rule(rule: &LocalRule, input: &Pattern, window: &Region) -> Result<Pattern, GenerateError> {
    let mut out = Pattern::new(window.dim());
    let mut buf = Vec::with_capacity(rule.offsets.len());
    for p in window.iter() {
        buf.clear();
        for o in &rule.offsets {
            let q = p + *o;
            buf.push(input.get(q).ok_or(GenerateError::InsufficientInputDomain(q))?);
        }
        out.set(p, rule.eval(&buf));
    }
    Ok(out)
}

/// Row content of a [`ConfigDescriptor::StackedRows`] configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowState {
    White,
    Black,
    /// White strictly left of the column, black from it on.
    BlackFrom(i64),
}

/// Finite description of an infinite configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConfigDescriptor {
    Constant(Symbol),
    /// Doubly periodic (or, in one dimension, periodic) folded configuration.
    LatticePeriodic(Completion),
    /// Folded configuration with at least one clamped axis.
    Folded(Completion),
    /// Black triangles with legs of length `r + 1`, tips at multiples of `v`.
    TriangleRamification {
        r: i64,
        v: Point,
    },
    /// Vertical-domino diamonds of radius `r` with top tips at multiples of `v`.
    DominoRamification {
        r: i64,
        v: Point,
    },
    CheckerboardPhase(u8),
    WiresFromBits(BitSource),
    CornersConfig {
        k: u8,
        l: u8,
        a: BitSource,
        b: BitSource,
    },
    StackedRows {
        rows: BTreeMap<i64, RowState>,
        default: RowState,
    },
    Patched {
        base: Box<ConfigDescriptor>,
        patch: Pattern,
    },
}

fn ill(msg: impl Into<String>) -> GenerateError {
    GenerateError::IllFormedDescriptor(msg.into())
}

/// Leg length of triangle `T` in a triangle ramification of radius `r`.
pub fn triangle_leg(r: i64) -> i64 {
    r + 1
}

fn in_triangle(q: Point, s: i64) -> bool {
    -s <= q.x && q.x <= 0 && 0 <= q.y && q.y <= -q.x
}

/// Multiples `lambda` with `p - lambda*v` possibly within distance `reach` of the origin.
fn lambda_range(p: Point, v: Point, reach: i64) -> std::ops::RangeInclusive<i64> {
    use crate::lattice::div_floor;
    let (c, d) = if v.y != 0 { (p.y, v.y) } else { (p.x, v.x) };
    let (c, d) = if d < 0 { (-c, -d) } else { (c, d) };
    div_floor(c - reach, d)..=div_floor(c + reach, d) + 1
}

struct DominoRow {
    // (left, right) inclusive intervals covered by diamonds, sorted.
    spans: Vec<(i64, i64)>,
}

fn domino_row(r: i64, v: Point, j: i64) -> DominoRow {
    let mut spans = Vec::new();
    for lam in lambda_range(Point::new(0, j), v, 2 * r + 2) {
        let jj = j - lam * v.y;
        let c = 2 * jj + 2 * r + 1;
        if c.abs() > 2 * r + 1 {
            continue;
        }
        let w = (2 * r + 1 - c.abs()) / 2;
        spans.push((lam * v.x - w, lam * v.x + w));
    }
    spans.sort();
    DominoRow { spans }
}

fn domino_cell(r: i64, v: Point, p: Point) -> Symbol {
    let row = domino_row(r, v, p.y);
    for lam in lambda_range(p, v, 2 * r + 2) {
        let q = p - lam * v;
        if 2 * q.x.abs() + (2 * q.y + 2 * r + 1).abs() <= 2 * r + 1 {
            let lo = -2 * r - 1 + q.x.abs();
            return if (q.y - lo) % 2 == 0 { V_BOTTOM } else { V_TOP };
        }
    }
    let spans = &row.spans;
    if spans.is_empty() || p.x < spans[0].0 {
        let d = spans.first().map_or(p.x.rem_euclid(2) + 1, |s| s.0 - p.x);
        return if d % 2 == 1 { H_RIGHT } else { H_LEFT };
    }
    let mut prev_right = spans[0].1;
    for s in &spans[1..] {
        if p.x < s.0 {
            break;
        }
        prev_right = s.1;
    }
    let d = p.x - prev_right;
    if d % 2 == 1 {
        H_LEFT
    } else {
        H_RIGHT
    }
}

fn stacked_cell(rows: &BTreeMap<i64, RowState>, default: RowState, p: Point) -> Symbol {
    match rows.get(&p.y).copied().unwrap_or(default) {
        RowState::White => WHITE,
        RowState::Black => BLACK,
        RowState::BlackFrom(t) => {
            if p.x >= t {
                BLACK
            } else {
                WHITE
            }
        }
    }
}

impl ConfigDescriptor {
    /// Checks structural preconditions.
    pub fn validate(&self) -> Result<(), GenerateError> {
        match self {
            ConfigDescriptor::TriangleRamification { r, v } => {
                if *r < 0 {
                    return Err(ill("negative radius"));
                }
                if v.norm() < r + 2 {
                    return Err(ill(format!("|v| = {} is below r + 2 = {}", v.norm(), r + 2)));
                }
                let s = triangle_leg(*r);
                let tri = Region::rect(2, -s, 0, 0, s);
                let window = tri.neighborhood(2);
                let pat = self.eval_region(&window);
                if !locally_admissible(&pat, &catalog::triangles())? {
                    return Err(ill("neighbouring triangles interact"));
                }
                Ok(())
            }
            ConfigDescriptor::DominoRamification { r, v } => {
                if *r < 0 {
                    return Err(ill("negative radius"));
                }
                if v.y == 0 {
                    return Err(ill("v must have a vertical component"));
                }
                for j in 0..v.y.abs() {
                    let row = domino_row(*r, *v, j);
                    for w in row.spans.windows(2) {
                        let gap = w[1].0 - w[0].1 - 1;
                        if gap < 0 {
                            return Err(ill(format!("diamonds overlap in row {j}")));
                        }
                        if gap % 2 == 1 {
                            return Err(ill(format!("odd gap in row {j}")));
                        }
                    }
                }
                Ok(())
            }
            ConfigDescriptor::CheckerboardPhase(p) if *p > 1 => Err(ill("phase must be 0 or 1")),
            ConfigDescriptor::CornersConfig { k, l, .. } if *k > 1 || *l > 1 => Err(ill("k and l must be bits")),
            ConfigDescriptor::LatticePeriodic(c) if !c.fold.is_periodic() => {
                Err(ill("lattice descriptor with clamped axis"))
            }
            ConfigDescriptor::LatticePeriodic(c) | ConfigDescriptor::Folded(c) if c.values.len() != c.fold.size() => {
                Err(ill("fold size mismatch"))
            }
            ConfigDescriptor::Patched { base, .. } => base.validate(),
            _ => Ok(()),
        }
    }

    /// Value at one cell. Assumes [`ConfigDescriptor::validate`] passed.
    pub fn eval(&self, p: Point) -> Symbol {
        match self {
            ConfigDescriptor::Constant(s) => *s,
            ConfigDescriptor::LatticePeriodic(c) | ConfigDescriptor::Folded(c) => c.eval(p),
            ConfigDescriptor::TriangleRamification { r, v } => {
                let s = triangle_leg(*r);
                let hit = lambda_range(p, *v, s + 1).any(|lam| in_triangle(p - lam * *v, s));
                if hit {
                    BLACK
                } else {
                    WHITE
                }
            }
            ConfigDescriptor::DominoRamification { r, v } => domino_cell(*r, *v, p),
            ConfigDescriptor::CheckerboardPhase(ph) => ((p.x + p.y + *ph as i64).rem_euclid(2)) as Symbol,
            ConfigDescriptor::WiresFromBits(bits) => tiles::wires_cell(bits, p),
            ConfigDescriptor::CornersConfig { k, l, a, b } => tiles::corners_cell(*k, *l, a, b, p),
            ConfigDescriptor::StackedRows { rows, default } => stacked_cell(rows, *default, p),
            ConfigDescriptor::Patched { base, patch } => patch.get(p).unwrap_or_else(|| base.eval(p)),
        }
    }

    fn eval_region(&self, window: &Region) -> Pattern {
        let mut out = Pattern::new(window.dim());
        for p in window.iter() {
            out.set(p, self.eval(p));
        }
        out
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        match self {
            ConfigDescriptor::Constant(s) => format!("constant {s}"),
            ConfigDescriptor::LatticePeriodic(c) => format!("periodic {:?}", c.fold.periods()),
            ConfigDescriptor::Folded(c) => {
                format!("folded shear={:?} axes={:?}", c.fold.shear, c.fold.axes)
            }
            ConfigDescriptor::TriangleRamification { r, v } => format!("triangles r={r} v={v}"),
            ConfigDescriptor::DominoRamification { r, v } => format!("domino diamonds r={r} v={v}"),
            ConfigDescriptor::CheckerboardPhase(p) => format!("checkerboard phase {p}"),
            ConfigDescriptor::WiresFromBits(_) => "wires from bits".into(),
            ConfigDescriptor::CornersConfig { k, l, .. } => format!("corners k={k} l={l}"),
            ConfigDescriptor::StackedRows { rows, .. } => {
                format!("stacked rows ({} explicit)", rows.len())
            }
            ConfigDescriptor::Patched { base, patch } => {
                format!("{} patched on {} cells", base.summary(), patch.len())
            }
        }
    }
}

/// Evaluates a descriptor on a finite window.
pub fn descriptor_eval(d: &ConfigDescriptor, window: &Region) -> Result<Pattern, GenerateError> {
    d.validate()?;
    Ok(d.eval_region(window))
}

/// The subshift a descriptor is meant to live in, when it is tied to one.
pub fn native_spec(d: &ConfigDescriptor) -> Option<SftSpec> {
    Some(match d {
        ConfigDescriptor::TriangleRamification { .. } => catalog::triangles(),
        ConfigDescriptor::DominoRamification { .. } => catalog::dominoes(),
        ConfigDescriptor::CheckerboardPhase(_) => catalog::checkerboard(),
        ConfigDescriptor::WiresFromBits(_) => catalog::wires(),
        ConfigDescriptor::CornersConfig { .. } => catalog::corners(),
        ConfigDescriptor::StackedRows { .. } => catalog::x_zbar(2),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn admissible_on_q(d: &ConfigDescriptor, n: i64) -> bool {
        let spec = native_spec(d).unwrap();
        let p = descriptor_eval(d, &Region::q(n, 2)).unwrap();
        locally_admissible(&p, &spec).unwrap()
    }

    #[test]
    fn native_descriptors_are_admissible_on_q20() {
        let mut rows = BTreeMap::new();
        rows.insert(0, RowState::BlackFrom(3));
        rows.insert(2, RowState::Black);
        let ds = vec![
            ConfigDescriptor::TriangleRamification {
                r: 2,
                v: Point::new(4, 1),
            },
            ConfigDescriptor::TriangleRamification {
                r: 0,
                v: Point::new(2, 1),
            },
            ConfigDescriptor::TriangleRamification {
                r: 3,
                v: Point::new(5, 1),
            },
            ConfigDescriptor::DominoRamification {
                r: 0,
                v: Point::new(0, 2),
            },
            ConfigDescriptor::DominoRamification {
                r: 1,
                v: Point::new(1, 3),
            },
            ConfigDescriptor::DominoRamification {
                r: 2,
                v: Point::new(2, 4),
            },
            ConfigDescriptor::DominoRamification {
                r: 2,
                v: Point::new(-3, 5),
            },
            ConfigDescriptor::CheckerboardPhase(0),
            ConfigDescriptor::CheckerboardPhase(1),
            ConfigDescriptor::WiresFromBits(BitSource::Seeded(3)),
            ConfigDescriptor::CornersConfig {
                k: 1,
                l: 0,
                a: BitSource::Seeded(1),
                b: BitSource::Seeded(2),
            },
            ConfigDescriptor::StackedRows {
                rows,
                default: RowState::White,
            },
        ];
        for d in &ds {
            assert!(admissible_on_q(d, 20), "{}", d.summary());
        }
    }

    #[test]
    fn ramifications_are_v_periodic() {
        for d in [
            ConfigDescriptor::TriangleRamification {
                r: 2,
                v: Point::new(4, 1),
            },
            ConfigDescriptor::DominoRamification {
                r: 2,
                v: Point::new(2, 4),
            },
        ] {
            let v = match d {
                ConfigDescriptor::TriangleRamification { v, .. } | ConfigDescriptor::DominoRamification { v, .. } => v,
                _ => unreachable!(),
            };
            for p in Region::q(12, 2).iter() {
                assert_eq!(d.eval(p), d.eval(p + v));
            }
        }
    }

    #[test]
    fn triangle_shape() {
        let d = ConfigDescriptor::TriangleRamification {
            r: 1,
            v: Point::new(3, 1),
        };
        // Leg 2: columns -2..0 with heights 3, 2, 1.
        for (x, h) in [(-2, 3), (-1, 2), (0, 1)] {
            for y in 0..h {
                assert_eq!(d.eval(Point::new(x, y)), BLACK);
            }
            assert_eq!(d.eval(Point::new(x, h)), WHITE);
        }
        assert_eq!(d.eval(Point::new(0, -1)), WHITE);
    }

    #[test]
    fn domino_tip_is_top_half() {
        let d = ConfigDescriptor::DominoRamification {
            r: 2,
            v: Point::new(2, 4),
        };
        assert_eq!(d.eval(Point::ORIGIN), V_TOP);
        assert_eq!(d.eval(Point::new(0, -5)), V_BOTTOM);
        assert_eq!(d.eval(Point::new(2, -3)), V_BOTTOM);
        assert_eq!(d.eval(Point::new(2, -2)), V_TOP);
        assert_eq!(d.eval(Point::new(3, -2)), H_LEFT);
        assert_eq!(d.eval(Point::new(4, -2)), H_RIGHT);
    }

    #[test]
    fn ill_formed_descriptors() {
        assert!(descriptor_eval(
            &ConfigDescriptor::TriangleRamification {
                r: 2,
                v: Point::new(3, 0)
            },
            &Region::q(1, 2)
        )
        .is_err());
        assert!(descriptor_eval(
            &ConfigDescriptor::DominoRamification {
                r: 1,
                v: Point::new(1, 2)
            },
            &Region::q(1, 2)
        )
        .is_err());
        assert!(descriptor_eval(
            &ConfigDescriptor::DominoRamification {
                r: 1,
                v: Point::new(2, 0)
            },
            &Region::q(1, 2)
        )
        .is_err());
        assert!(descriptor_eval(&ConfigDescriptor::CheckerboardPhase(2), &Region::q(1, 2)).is_err());
    }

    #[test]
    fn apply_rule_needs_inputs() {
        let rule = wires_rule();
        let input = Pattern::constant(&Region::rect(2, 0, 1, 0, 1), 0);
        let out = apply_rule(&rule, &input, &Region::rect(2, 0, 0, 0, 0)).unwrap();
        assert_eq!(out.get(Point::ORIGIN), Some(0));
        assert!(matches!(
            apply_rule(&rule, &input, &Region::rect(2, 0, 1, 0, 0)),
            Err(GenerateError::InsufficientInputDomain(_))
        ));
    }

    #[test]
    fn local_rule_indexing() {
        let r = LocalRule::from_fn(3, 3, vec![Point::ORIGIN, Point::d1(1)], |s| (s[0] + 2 * s[1]) % 3);
        assert_eq!(r.eval(&[1, 2]), 2);
        assert_eq!(LocalRule::identity(4).eval(&[3]), 3);
        assert_eq!(LocalRule::constant(2, 1).eval(&[]), 1);
    }

    #[test]
    fn checkerboard_phase_matches_parity() {
        let d = ConfigDescriptor::CheckerboardPhase(0);
        assert_eq!(d.eval(Point::new(3, 4)), 1);
        assert!(admissible_on_q(&d, 3));
        let _ = catalog::checkerboard();
    }
}
