//! Census of the nonempty sets of even bicolor Wang tiles up to symmetry.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::catalog::even_tiles;
use crate::lattice::{lower_wang, Pattern, Point, Region, SftSpec, Symbol, WangTile};
use crate::search::{window_problem, Budget, Solve, DEFAULT_BUDGET};
use crate::verify::{certify, Certificate, VerifyError, VerifyOptions};

/// A set of even tiles; tile `i` of [`even_tiles`] is bit `7 - i`, so numeric
/// order agrees with the lexicographic order of the printed bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvenTileset(pub u8);

impl EvenTileset {
    pub fn contains(self, i: usize) -> bool {
        self.0 >> (7 - i) & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        (0..8).filter(|&i| self.contains(i)).collect()
    }

    pub fn tiles(self) -> Vec<WangTile> {
        let all = even_tiles();
        self.indices().into_iter().map(|i| all[i]).collect()
    }

    pub fn bits(self) -> String {
        format!("{:08b}", self.0)
    }

    pub fn from_bits(s: &str) -> Option<Self> {
        if s.len() != 8 {
            return None;
        }
        u8::from_str_radix(s, 2).ok().map(EvenTileset)
    }

    pub fn spec(self) -> SftSpec {
        lower_wang(&format!("even-{}", self.bits()), &self.tiles())
    }

    fn permute(self, perm: &[usize; 8]) -> EvenTileset {
        let mut m = 0u8;
        for i in self.indices() {
            m |= 1 << (7 - perm[i]);
        }
        EvenTileset(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// Quarter turn of the plane.
    Rotate90,
    /// Reflection exchanging east and west.
    Mirror,
    /// Exchanges the two colours everywhere.
    ColorSwap,
    /// Exchanges the two colours on horizontal edges only.
    AxisSwap,
}

pub const GENERATORS: [Generator; 4] = [
    Generator::Rotate90,
    Generator::Mirror,
    Generator::ColorSwap,
    Generator::AxisSwap,
];

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Rotate90 => "rotate90",
            Generator::Mirror => "mirror",
            Generator::ColorSwap => "color_swap",
            Generator::AxisSwap => "axis_swap",
        }
    }

    pub fn apply(self, t: WangTile) -> WangTile {
        match self {
            Generator::Rotate90 => WangTile::new(t.w, t.n, t.e, t.s),
            Generator::Mirror => WangTile::new(t.n, t.w, t.s, t.e),
            Generator::ColorSwap => WangTile::new(1 - t.n, 1 - t.e, 1 - t.s, 1 - t.w),
            Generator::AxisSwap => WangTile::new(1 - t.n, t.e, 1 - t.s, t.w),
        }
    }

    fn permutation(self) -> [usize; 8] {
        let tiles = even_tiles();
        let mut p = [0; 8];
        for (i, t) in tiles.iter().enumerate() {
            let img = self.apply(*t);
            p[i] = tiles.iter().position(|u| *u == img).expect("even tiles are closed");
        }
        p
    }
}

/// Group of tile permutations generated by a subset of [`GENERATORS`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub generators: Vec<Generator>,
    pub elements: Vec<[usize; 8]>,
}

impl SymmetryGroup {
    pub fn new(generators: &[Generator]) -> Self {
        let gens: Vec<[usize; 8]> = generators.iter().map(|g| g.permutation()).collect();
        let id = [0, 1, 2, 3, 4, 5, 6, 7];
        let mut seen = BTreeSet::from([id]);
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for g in &gens {
                let mut c = [0; 8];
                for i in 0..8 {
                    c[i] = g[e[i]];
                }
                if seen.insert(c) {
                    frontier.push(c);
                }
            }
        }
        SymmetryGroup {
            generators: generators.to_vec(),
            elements: seen.into_iter().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self) -> String {
        if self.generators.is_empty() {
            return "trivial".into();
        }
        self.generators.iter().map(|g| g.name()).collect::<Vec<_>>().join("+")
    }

    pub fn orbit(&self, t: EvenTileset) -> BTreeSet<EvenTileset> {
        self.elements.iter().map(|p| t.permute(p)).collect()
    }

    /// Orbit representatives (least masks) of the 255 nonempty sets, with orbit sizes.
    pub fn orbits(&self) -> Vec<(EvenTileset, usize)> {
        let mut done = [false; 256];
        let mut out = Vec::new();
        for m in 1..=255u8 {
            if done[m as usize] {
                continue;
            }
            let orb = self.orbit(EvenTileset(m));
            for t in &orb {
                done[t.0 as usize] = true;
            }
            out.push((*orb.iter().next().unwrap(), orb.len()));
        }
        out
    }
}

/// Least mask in the orbit of `t`.
pub fn canonical_form(t: EvenTileset, g: &SymmetryGroup) -> EvenTileset {
    *g.orbit(t).iter().next().unwrap()
}

/// Every group generated by a subset of [`GENERATORS`] with the given orbit
/// count; largest group first, ties broken by fewer generators.
pub fn groups_with_orbit_count(count: usize) -> Vec<SymmetryGroup> {
    let mut out: Vec<SymmetryGroup> = (0u8..16)
        .map(|m| {
            let gens: Vec<Generator> = (0..4).filter(|i| m >> i & 1 == 1).map(|i| GENERATORS[i]).collect();
            SymmetryGroup::new(&gens)
        })
        .filter(|g| g.orbits().len() == count)
        .collect();
    out.sort_by_key(|g| (std::cmp::Reverse(g.order()), g.generators.len(), g.generators.clone()));
    out
}

/// Expected number of classes.
pub const EXPECTED_CLASSES: usize = 36;

/// The group used by `--auto-group`.
pub fn auto_group() -> Option<SymmetryGroup> {
    groups_with_orbit_count(EXPECTED_CLASSES).into_iter().next()
}

/// Usability of each tile of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileUsage {
    /// `(tile index in even_tiles order, certificate)`.
    pub usable: Vec<(usize, Certificate)>,
    pub unusable: Vec<(usize, Certificate)>,
    pub unknown: Vec<(usize, Certificate)>,
}

fn options(window_n: i64, period_bound: i64) -> VerifyOptions {
    VerifyOptions {
        max_n: window_n,
        period_bound,
        budget: DEFAULT_BUDGET,
    }
}

pub fn unused_tiles(t: EvenTileset, window_n: i64, period_bound: i64) -> Result<TileUsage, VerifyError> {
    let spec = t.spec();
    let mut usage = TileUsage {
        usable: vec![],
        unusable: vec![],
        unknown: vec![],
    };
    for (sym, idx) in t.indices().into_iter().enumerate() {
        let pi = Pattern::from_cells(2, [(Point::ORIGIN, sym as Symbol)])?;
        let c = certify(&pi, &spec, &options(window_n, period_bound))?;
        if c.proves_valid() {
            usage.usable.push((idx, c));
        } else if c.proves_invalid() {
            usage.unusable.push((idx, c));
        } else {
            usage.unknown.push((idx, c));
        }
    }
    Ok(usage)
}

/// `InvalidWindow` if `Q_{window_n}` cannot be tiled, a completion if some
/// tile is usable, otherwise `Unknown`.
pub fn is_empty_tileset(t: EvenTileset, window_n: i64, period_bound: i64) -> Result<Certificate, VerifyError> {
    let spec = t.spec();
    let window = Region::q(window_n, 2);
    let wp = window_problem(&spec, &window, &Pattern::new(2))?;
    match wp.csp.solve(&mut Budget::new(DEFAULT_BUDGET)) {
        Solve::Unsat => return Ok(Certificate::InvalidWindow { window }),
        Solve::Exhausted => {
            return Ok(Certificate::Unknown {
                explored: format!("budget exhausted on Q_{window_n}"),
            })
        }
        Solve::Sat(_) => {}
    }
    let usage = unused_tiles(t, window_n, period_bound)?;
    Ok(match usage.usable.into_iter().next() {
        Some((_, c)) => c,
        None => Certificate::Unknown {
            explored: format!("Q_{window_n} tileable, no usable tile certified"),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every tile occurs in some tiling.
    Minimal(TileUsage),
    Empty(Certificate),
    UnusedTiles(TileUsage),
    Unknown(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Minimal(_) => "minimal",
            Verdict::Empty(_) => "empty",
            Verdict::UnusedTiles(_) => "unused-tile",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_nonminimal(&self) -> bool {
        matches!(self, Verdict::Empty(_) | Verdict::UnusedTiles(_))
    }

    pub fn summary(&self) -> String {
        let label = |i: usize| even_tiles()[i].label();
        match self {
            Verdict::Minimal(u) => {
                let periodic = u
                    .usable
                    .iter()
                    .filter(|(_, c)| matches!(c, Certificate::PeriodicCompletion(_)))
                    .count();
                format!(
                    "usable={} periodic={} descriptor={}",
                    u.usable.len(),
                    periodic,
                    u.usable.len() - periodic
                )
            }
            Verdict::Empty(c) => match c {
                Certificate::InvalidWindow { window } => format!("INVALID_WINDOW cells={}", window.len()),
                other => other.tag().to_string(),
            },
            Verdict::UnusedTiles(u) => {
                let names: Vec<String> = u.unusable.iter().map(|(i, _)| label(*i)).collect();
                format!("unused={} usable={}", names.join(","), u.usable.len())
            }
            Verdict::Unknown(s) => s.clone(),
        }
    }
}

/// Static class-membership metadata for known tilesets (not computed).
pub fn class_tag(t: EvenTileset, verdict: &Verdict) -> &'static str {
    if verdict.is_nonminimal() {
        return "non-minimal";
    }
    match t.bits().as_str() {
        // All eight tiles: the wires subshift.
        "11111111" => "L0",
        // 1100, 0110, 0011, 1001: the corners subshift.
        "00111100" => "L0",
        _ => "unassigned",
    }
}

/// Reference totals among the minimal classes.
pub const REFERENCE_L0: usize = 13;
pub const REFERENCE_NOT_L0: usize = 8;
pub const REFERENCE_NOT_L1: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub representative: EvenTileset,
    pub orbit_size: usize,
    pub verdict: Verdict,
    /// Budgets at which the verdict was reached.
    pub window_n: i64,
    pub period_bound: i64,
    pub tag: &'static str,
}

/// Largest budget reached by doubling before giving up.
pub const ESCALATION_CAP: i64 = 12;

fn classify_one(t: EvenTileset, window_n: i64, period_bound: i64) -> Result<(Verdict, i64, i64), VerifyError> {
    let (mut n, mut pb) = (window_n, period_bound);
    loop {
        let spec = t.spec();
        let wp = window_problem(&spec, &Region::q(n, 2), &Pattern::new(2))?;
        let verdict = match wp.csp.solve(&mut Budget::new(DEFAULT_BUDGET)) {
            Solve::Unsat => Verdict::Empty(Certificate::InvalidWindow {
                window: Region::q(n, 2),
            }),
            Solve::Exhausted => Verdict::Unknown(format!("budget exhausted on Q_{n}")),
            Solve::Sat(_) => {
                let u = unused_tiles(t, n, pb)?;
                if !u.unknown.is_empty() {
                    Verdict::Unknown(format!("{} tiles undecided", u.unknown.len()))
                } else if u.usable.is_empty() {
                    Verdict::Unknown("no usable tile but Q_n tileable".into())
                } else if u.unusable.is_empty() {
                    Verdict::Minimal(u)
                } else {
                    Verdict::UnusedTiles(u)
                }
            }
        };
        if !matches!(verdict, Verdict::Unknown(_)) || (n >= ESCALATION_CAP && pb >= ESCALATION_CAP) {
            return Ok((verdict, n, pb));
        }
        n = (n * 2).min(ESCALATION_CAP);
        pb = (pb * 2).min(ESCALATION_CAP);
    }
}

/// Classifies every orbit under `g`; reports are ordered by representative.
pub fn classify_even(g: &SymmetryGroup, window_n: i64, period_bound: i64) -> Result<Vec<ClassReport>, VerifyError> {
    g.orbits()
        .into_par_iter()
        .map(|(t, size)| {
            let (verdict, n, pb) = classify_one(t, window_n, period_bound)?;
            let tag = class_tag(t, &verdict);
            Ok(ClassReport {
                representative: t,
                orbit_size: size,
                verdict,
                window_n: n,
                period_bound: pb,
                tag,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusTotals {
    pub classes: usize,
    pub nonminimal: usize,
    pub empty: usize,
    pub unused: usize,
    pub remaining: usize,
    pub unknown: usize,
}

pub fn totals(reports: &[ClassReport]) -> CensusTotals {
    let count = |f: &dyn Fn(&Verdict) -> bool| reports.iter().filter(|r| f(&r.verdict)).count();
    let empty = count(&|v| matches!(v, Verdict::Empty(_)));
    let unused = count(&|v| matches!(v, Verdict::UnusedTiles(_)));
    let unknown = count(&|v| matches!(v, Verdict::Unknown(_)));
    CensusTotals {
        classes: reports.len(),
        nonminimal: empty + unused,
        empty,
        unused,
        remaining: reports.len() - empty - unused,
        unknown,
    }
}

/// Fixed-column table, or tab-separated values when `tsv` is set.
pub fn render_report(g: &SymmetryGroup, reports: &[ClassReport], tsv: bool) -> String {
    let t = totals(reports);
    let mut out = format!("# group {} order={}\n", g.name(), g.order());
    if tsv {
        out.push_str("mask\torbit\tverdict\tcertificate\ttag\n");
    } else {
        out.push_str(&format!(
            "{:<8}  {:>5}  {:<11}  {:<40}  {}\n",
            "mask", "orbit", "verdict", "certificate", "tag"
        ));
    }
    for r in reports {
        let (m, v, c) = (r.representative.bits(), r.verdict.name(), r.verdict.summary());
        if tsv {
            out.push_str(&format!("{m}\t{}\t{v}\t{c}\t{}\n", r.orbit_size, r.tag));
        } else {
            out.push_str(&format!("{m:<8}  {:>5}  {v:<11}  {c:<40}  {}\n", r.orbit_size, r.tag));
        }
    }
    out.push_str(&format!(
        "# empty={} unused={} unknown={} reference: L0={REFERENCE_L0} notL0={REFERENCE_NOT_L0} notL1={REFERENCE_NOT_L1}\n",
        t.empty, t.unused, t.unknown
    ));
    out.push_str(&format!(
        "classes={} nonminimal={} remaining={}\n",
        t.classes, t.nonminimal, t.remaining
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> SymmetryGroup {
        SymmetryGroup::new(&GENERATORS)
    }

    #[test]
    fn generators_preserve_matching() {
        // Two tiles that match horizontally still match after any generator
        // applied to the whole tiling (rotation moves the pair to a column).
        for g in GENERATORS {
            for t in even_tiles() {
                let u = g.apply(t);
                assert_eq!((u.n + u.e + u.s + u.w) % 2, 0);
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let g = full();
        assert_eq!(canonical_form(EvenTileset(0xff), &g), EvenTileset(0xff));
        // {0000} and {1111} form one orbit under colour swap.
        assert_eq!(
            canonical_form(EvenTileset(0x80), &g),
            canonical_form(EvenTileset(0x40), &g)
        );
        assert_eq!(g.orbits().iter().map(|o| o.1).sum::<usize>(), 255);
    }

    #[test]
    fn dihedral_and_colour_groups_do_not_give_36() {
        for m in 0u8..8 {
            let gens: Vec<Generator> = (0..3).filter(|i| m >> i & 1 == 1).map(|i| GENERATORS[i]).collect();
            assert_ne!(SymmetryGroup::new(&gens).orbits().len(), 36);
        }
        let g = auto_group().unwrap();
        assert_eq!(g.orbits().len(), 36);
        assert_eq!(g.order(), 32);
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let g = full();
        for m in 1..=255u8 {
            let c = canonical_form(EvenTileset(m), &g);
            assert_eq!(canonical_form(c, &g), c);
            for p in &g.elements {
                assert_eq!(canonical_form(EvenTileset(m).permute(p), &g), c);
            }
        }
    }

    #[test]
    fn small_tilesets() {
        let all = EvenTileset(0xff);
        assert!(is_empty_tileset(all, 4, 4).unwrap().proves_valid());
        let u = unused_tiles(all, 4, 4).unwrap();
        assert_eq!(u.usable.len(), 8);
        assert!(is_empty_tileset(EvenTileset(0x40), 4, 4).unwrap().proves_valid());
        // {1100} alone cannot stack vertically.
        let c = EvenTileset::from_bits("00100000").unwrap();
        assert!(is_empty_tileset(c, 2, 2).unwrap().proves_invalid());
    }
}
