//! Finite descriptions of infinite configurations by folding the plane onto a box.
//!
//! A [`Fold`] applies a unimodular shear `M` and then maps each transformed
//! axis either periodically (`t mod len`) or by clamping into
//! `[origin, origin + len - 1]`. The configuration `x(p) = values[var(p)]`
//! is therefore periodic along periodic axes and eventually constant along
//! clamped ones, so local admissibility can be decided on finitely many
//! anchors.

use crate::lattice::{mod_floor, Pattern, Point, SftSpec, Symbol};

/// How one transformed axis is folded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Periodic(i64),
    Clamped { len: i64, origin: i64 },
}

impl Axis {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> i64 {
        match *self {
            Axis::Periodic(l) => l,
            Axis::Clamped { len, .. } => len,
        }
    }

    fn local(&self, t: i64) -> i64 {
        match *self {
            Axis::Periodic(l) => mod_floor(t, l),
            Axis::Clamped { len, origin } => (t - origin).clamp(0, len - 1),
        }
    }

    /// Transformed anchor range that covers every distinct placement of a
    /// pattern whose transformed offsets lie in `[cmin, cmax]`.
    fn anchor_range(&self, cmin: i64, cmax: i64) -> (i64, i64) {
        match *self {
            Axis::Periodic(l) => (0, l - 1),
            Axis::Clamped { len, origin } => (origin - cmax, origin + len - 1 - cmin),
        }
    }
}

/// Unimodular shears tried by the completion search (identity first).
pub const SHEARS: [[[i64; 2]; 2]; 5] = [
    [[1, 0], [0, 1]],
    [[1, 1], [0, 1]],
    [[1, -1], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, 0], [-1, 1]],
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fold {
    pub dim: u8,
    pub shear: [[i64; 2]; 2],
    pub axes: [Axis; 2],
}

fn inverse(m: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    debug_assert!(det == 1 || det == -1);
    [[m[1][1] * det, -m[0][1] * det], [-m[1][0] * det, m[0][0] * det]]
}

fn apply(m: [[i64; 2]; 2], p: Point) -> Point {
    Point::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)
}

impl Fold {
    pub fn new(dim: u8, shear: [[i64; 2]; 2], a: Axis, b: Axis) -> Self {
        let b = if dim == 1 { Axis::Periodic(1) } else { b };
        Fold {
            dim,
            shear,
            axes: [a, b],
        }
    }

    pub fn size(&self) -> usize {
        (self.axes[0].len() * self.axes[1].len()) as usize
    }

    pub fn transform(&self, p: Point) -> Point {
        apply(self.shear, p)
    }

    pub fn untransform(&self, q: Point) -> Point {
        apply(inverse(self.shear), q)
    }

    pub fn var(&self, p: Point) -> usize {
        let q = self.transform(p);
        let u = self.axes[0].local(q.x);
        let v = self.axes[1].local(q.y);
        (v * self.axes[0].len() + u) as usize
    }

    pub fn is_periodic(&self) -> bool {
        self.axes.iter().all(|a| matches!(a, Axis::Periodic(_)))
    }

    /// Transformed anchors covering every distinct placement of `offsets`.
    pub fn anchors(&self, offsets: &[Point]) -> Vec<Point> {
        let t: Vec<Point> = offsets.iter().map(|c| self.transform(*c)).collect();
        let (ux0, ux1) = (
            t.iter().map(|q| q.x).min().unwrap_or(0),
            t.iter().map(|q| q.x).max().unwrap_or(0),
        );
        let (vy0, vy1) = (
            t.iter().map(|q| q.y).min().unwrap_or(0),
            t.iter().map(|q| q.y).max().unwrap_or(0),
        );
        let (u0, u1) = self.axes[0].anchor_range(ux0, ux1);
        let (v0, v1) = self.axes[1].anchor_range(vy0, vy1);
        let mut out = Vec::new();
        for v in v0..=v1 {
            for u in u0..=u1 {
                out.push(self.untransform(Point::new(u, v)));
            }
        }
        out
    }

    /// Period vectors of the folded configuration.
    pub fn periods(&self) -> Vec<Point> {
        let inv = inverse(self.shear);
        let mut out = Vec::new();
        if let Axis::Periodic(a) = self.axes[0] {
            out.push(apply(inv, Point::new(a, 0)));
        }
        if self.dim == 2 {
            if let Axis::Periodic(b) = self.axes[1] {
                out.push(apply(inv, Point::new(0, b)));
            }
        }
        out
    }

    /// One representative lattice point per variable.
    pub fn representatives(&self) -> Vec<Point> {
        let (a, b) = (self.axes[0].len(), self.axes[1].len());
        let base = |ax: &Axis| match *ax {
            Axis::Periodic(_) => 0,
            Axis::Clamped { origin, .. } => origin,
        };
        let (bu, bv) = (base(&self.axes[0]), base(&self.axes[1]));
        let mut out = Vec::with_capacity(self.size());
        for v in 0..b {
            for u in 0..a {
                out.push(self.untransform(Point::new(bu + u, bv + v)));
            }
        }
        out
    }
}

/// A folded configuration: a [`Fold`] plus one symbol per box cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Completion {
    pub fold: Fold,
    pub values: Vec<Symbol>,
}

impl Completion {
    pub fn eval(&self, p: Point) -> Symbol {
        self.values[self.fold.var(p)]
    }

    /// The pattern on one fundamental domain (box cells pulled back by the shear).
    pub fn fundamental(&self) -> Pattern {
        let reps = self.fold.representatives();
        Pattern::from_cells(self.fold.dim, reps.into_iter().map(|p| (p, self.eval(p)))).expect("distinct")
    }

    /// Independent check that no forbidden pattern occurs anywhere.
    pub fn is_admissible(&self, spec: &SftSpec) -> bool {
        for f in &spec.forbidden {
            let cells: Vec<(Point, Symbol)> = f.iter().collect();
            let offs: Vec<Point> = cells.iter().map(|c| c.0).collect();
            for t in self.fold.anchors(&offs) {
                if cells.iter().all(|&(c, s)| self.eval(t + c) == s) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the configuration extends `pat`.
    pub fn extends(&self, pat: &Pattern) -> bool {
        pat.iter().all(|(p, s)| self.eval(p) == s)
    }
}
