//! Certificates of validity and invalidity for finite patterns, and the
//! derived checks: independence of regions, weak mixing offsets, grafts and
//! ramification witnesses.

use rayon::prelude::*;
use thiserror::Error;

use crate::fold::{Axis, Completion, Fold, SHEARS};
use crate::formats::write_pattern;
use crate::generate::{descriptor_eval, ConfigDescriptor, GenerateError};
use crate::lattice::{locally_admissible, LatticeError, Pattern, Point, Region, SftSpec};
use crate::search::{check_alphabet, full_mask, window_problem, Budget, Csp, Solve, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("margin {margin} is below the largest forbidden diameter {needed}")]
    MarginTooSmall { margin: i64, needed: i64 },
    #[error("regions overlap")]
    Overlap,
    #[error("base configuration violates the rules near {0}")]
    InvalidBase(Point),
}

/// Outcome of an attempt to decide whether a pattern is valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// No admissible filling of this window extends the pattern.
    InvalidWindow {
        window: Region,
    },
    /// A periodic configuration extending the pattern.
    PeriodicCompletion(Completion),
    /// A configuration given by a finite descriptor extending the pattern.
    DescriptorWitness(ConfigDescriptor),
    Unknown {
        explored: String,
    },
}

impl Certificate {
    pub fn proves_valid(&self) -> bool {
        matches!(
            self,
            Certificate::PeriodicCompletion(_) | Certificate::DescriptorWitness(_)
        )
    }

    pub fn proves_invalid(&self) -> bool {
        matches!(self, Certificate::InvalidWindow { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Certificate::InvalidWindow { .. } => "INVALID_WINDOW",
            Certificate::PeriodicCompletion(_) => "PERIODIC_COMPLETION",
            Certificate::DescriptorWitness(_) => "DESCRIPTOR_WITNESS",
            Certificate::Unknown { .. } => "UNKNOWN",
        }
    }

    /// Process exit status: proved valid 0, refuted 1, unknown 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Certificate::PeriodicCompletion(_) | Certificate::DescriptorWitness(_) => 0,
            Certificate::InvalidWindow { .. } => 1,
            Certificate::Unknown { .. } => 2,
        }
    }

    /// The configuration witnessing validity, if any.
    pub fn descriptor(&self) -> Option<ConfigDescriptor> {
        match self {
            Certificate::PeriodicCompletion(c) => Some(ConfigDescriptor::LatticePeriodic(c.clone())),
            Certificate::DescriptorWitness(d) => Some(d.clone()),
            _ => None,
        }
    }

    /// Plain-text report; `subject` is the pattern the certificate is about.
    pub fn report(&self, subject: &Pattern) -> String {
        let mut out = format!("VERDICT {}\n", self.tag());
        match self {
            Certificate::InvalidWindow { window } => {
                if let Some((lo, hi)) = window.bbox() {
                    out.push_str(&format!(
                        "window {}..{} {}..{} cells={}\n",
                        lo.x,
                        hi.x,
                        lo.y,
                        hi.y,
                        window.len()
                    ));
                }
                out.push_str(&write_pattern(subject));
            }
            Certificate::PeriodicCompletion(c) => {
                for v in c.fold.periods() {
                    out.push_str(&format!("period {} {}\n", v.x, v.y));
                }
                out.push_str(&write_pattern(&c.fundamental()));
            }
            Certificate::DescriptorWitness(d) => {
                out.push_str(&format!("descriptor {}\n", d.summary()));
                let shown = match d {
                    ConfigDescriptor::Folded(c) => c.fundamental(),
                    _ => {
                        let dom = subject.domain().neighborhood(1);
                        descriptor_eval(d, &dom).unwrap_or_default()
                    }
                };
                out.push_str(&write_pattern(&shown));
            }
            Certificate::Unknown { explored } => {
                out.push_str(&format!("explored {explored}\n"));
            }
        }
        out
    }
}

/// Search limits shared by the certificate producers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest `n` for invalidity windows `Q_n + c`.
    pub max_n: i64,
    /// Largest box side tried by the completion search.
    pub period_bound: i64,
    /// Node budget per proof attempt.
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 6,
            period_bound: 8,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Result of [`enumerate_admissible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub patterns: Vec<Pattern>,
    /// Set when the node budget ran out before the enumeration finished.
    pub partial: bool,
}

/// All patterns on `f` that extend to a locally admissible filling of
/// `window`, in lexicographic order of their symbols in cell order.
pub fn enumerate_admissible(
    f: &Region,
    spec: &SftSpec,
    window: &Region,
    budget: &mut Budget,
) -> Result<Enumeration, VerifyError> {
    let w = window.union(f);
    let wp = window_problem(spec, &w, &Pattern::new(spec.dim))?;
    let cells: Vec<Point> = f.iter().collect();
    let proj: Vec<usize> = cells.iter().map(|p| wp.index[p]).collect();
    let mut patterns = Vec::new();
    let complete = wp.csp.enumerate_projected(&proj, budget, &mut |syms| {
        patterns.push(Pattern::from_cells(spec.dim, cells.iter().copied().zip(syms.iter().copied())).unwrap());
    });
    Ok(Enumeration {
        patterns,
        partial: !complete,
    })
}

fn center_and_radius(dom: &Region) -> (Point, i64) {
    match dom.bbox() {
        None => (Point::ORIGIN, 0),
        Some((lo, hi)) => {
            let c = Point::new(
                crate::lattice::div_floor(lo.x + hi.x, 2),
                crate::lattice::div_floor(lo.y + hi.y, 2),
            );
            let r = (c.x - lo.x).max(hi.x - c.x).max(c.y - lo.y).max(hi.y - c.y);
            (c, r)
        }
    }
}

fn invalid_in(
    pi: &Pattern,
    spec: &SftSpec,
    n_lo: i64,
    n_hi: i64,
    budget: &mut Budget,
) -> Result<Option<Certificate>, VerifyError> {
    let (c, _) = center_and_radius(&pi.domain());
    for n in n_lo..=n_hi {
        let window = Region::q(n, spec.dim).translate(c);
        let wp = window_problem(spec, &window, pi)?;
        match wp.csp.solve(budget) {
            Solve::Unsat => {
                return Ok(Some(Certificate::InvalidWindow {
                    window: window.union(&pi.domain()),
                }))
            }
            Solve::Sat(_) => {}
            Solve::Exhausted => {
                return Ok(Some(Certificate::Unknown {
                    explored: format!("budget exhausted at n={n}"),
                }));
            }
        }
    }
    Ok(None)
}

/// Looks for the least `n <= max_n` such that no admissible filling of
/// `Q_n + c` (centred on the pattern's bounding box) extends `pi`.
pub fn prove_invalid(pi: &Pattern, spec: &SftSpec, max_n: i64, budget: u64) -> Result<Certificate, VerifyError> {
    check_alphabet(spec)?;
    if !locally_admissible(pi, spec)? {
        return Ok(Certificate::InvalidWindow { window: pi.domain() });
    }
    let (_, r) = center_and_radius(&pi.domain());
    let mut b = Budget::new(budget);
    match invalid_in(pi, spec, r.min(max_n), max_n, &mut b)? {
        Some(c) => Ok(c),
        None => Ok(Certificate::Unknown {
            explored: format!("windows up to n={max_n} are fillable"),
        }),
    }
}

fn fold_csp(pi: &Pattern, spec: &SftSpec, fold: &Fold) -> Option<Csp> {
    let k = spec.alphabet_size();
    let mut domains = vec![full_mask(k); fold.size()];
    for (p, s) in pi.iter() {
        let d = &mut domains[fold.var(p)];
        *d &= 1u64 << s;
        if *d == 0 {
            return None;
        }
    }
    let mut csp = Csp::new(domains, vec![0; fold.size()]);
    for f in &spec.forbidden {
        let cells: Vec<(Point, u32)> = f.iter().collect();
        let offs: Vec<Point> = cells.iter().map(|c| c.0).collect();
        for t in fold.anchors(&offs) {
            csp.add_nogood(cells.iter().map(|&(c, s)| (fold.var(t + c) as u32, s as u8)).collect());
        }
    }
    Some(csp)
}

enum FoldTry {
    Found(Completion),
    No,
    Exhausted,
}

fn try_fold(pi: &Pattern, spec: &SftSpec, fold: Fold, budget: &mut Budget) -> FoldTry {
    let Some(csp) = fold_csp(pi, spec, &fold) else {
        return FoldTry::No;
    };
    match csp.solve(budget) {
        Solve::Sat(values) => {
            let c = Completion { fold, values };
            if c.is_admissible(spec) && c.extends(pi) {
                FoldTry::Found(c)
            } else {
                debug_assert!(false, "completion failed its own check");
                FoldTry::No
            }
        }
        Solve::Unsat => FoldTry::No,
        Solve::Exhausted => FoldTry::Exhausted,
    }
}

fn sizes(bound: i64, dim: u8) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for a in 1..=bound {
        if dim == 1 {
            v.push((a, 1));
            continue;
        }
        for b in 1..=bound {
            v.push((a, b));
        }
    }
    v.sort_by_key(|&(a, b)| (a.max(b), a * b, a, b));
    v
}

fn transformed_range(pi: &Pattern, shear: [[i64; 2]; 2], axis: usize) -> (i64, i64) {
    let probe = Fold::new(2, shear, Axis::Periodic(1), Axis::Periodic(1));
    let ts: Vec<i64> = pi
        .iter()
        .map(|(p, _)| {
            let q = probe.transform(p);
            if axis == 0 {
                q.x
            } else {
                q.y
            }
        })
        .collect();
    (
        ts.iter().copied().min().unwrap_or(0),
        ts.iter().copied().max().unwrap_or(0),
    )
}

fn axis_options(kind_clamped: bool, len: i64, range: (i64, i64)) -> Vec<Axis> {
    if !kind_clamped {
        return vec![Axis::Periodic(len)];
    }
    (range.0 - len + 1..=range.1)
        .map(|origin| Axis::Clamped { len, origin })
        .collect()
}

/// Searches for a folded configuration extending `pi` by increasing box
/// side. At each side, doubly periodic folds (under a few unimodular
/// shears) come before folds that are eventually constant along one or
/// both axes.
pub fn prove_valid_periodic(
    pi: &Pattern,
    spec: &SftSpec,
    period_bound: i64,
    budget: u64,
) -> Result<Certificate, VerifyError> {
    check_alphabet(spec)?;
    if pi.dim() != spec.dim {
        return Err(LatticeError::DimensionMismatch(pi.dim(), spec.dim).into());
    }
    if !locally_admissible(pi, spec)? {
        return Ok(Certificate::Unknown {
            explored: "pattern is not locally admissible".into(),
        });
    }
    let mut b = Budget::new(budget);
    let shears: &[[[i64; 2]; 2]] = if spec.dim == 1 { &SHEARS[..1] } else { &SHEARS[..] };
    let modes: &[(bool, bool)] = if spec.dim == 1 {
        &[(false, false), (true, false)]
    } else {
        &[(false, false), (true, false), (false, true), (true, true)]
    };
    let all_sizes = sizes(period_bound.max(1), spec.dim);
    for side in 1..=period_bound.max(1) {
        for &(ca, cb) in modes {
            for &shear in shears {
                for &(a, bb) in all_sizes.iter().filter(|s| s.0.max(s.1) == side) {
                    let ra = transformed_range(pi, shear, 0);
                    let rb = transformed_range(pi, shear, 1);
                    for ax in axis_options(ca, a, ra) {
                        for bx in axis_options(cb, bb, rb) {
                            let fold = Fold::new(spec.dim, shear, ax, bx);
                            match try_fold(pi, spec, fold, &mut b) {
                                FoldTry::Found(c) => {
                                    return Ok(if c.fold.is_periodic() {
                                        Certificate::PeriodicCompletion(c)
                                    } else {
                                        Certificate::DescriptorWitness(ConfigDescriptor::Folded(c))
                                    });
                                }
                                FoldTry::No => {}
                                FoldTry::Exhausted => {
                                    return Ok(Certificate::Unknown {
                                        explored: format!("budget exhausted at box {a}x{bb}"),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Certificate::Unknown {
        explored: format!("no completion with box sides <= {period_bound}"),
    })
}

/// Decides a pattern both ways: a cheap invalidity window, then a
/// completion, then larger invalidity windows.
pub fn certify(pi: &Pattern, spec: &SftSpec, opts: &VerifyOptions) -> Result<Certificate, VerifyError> {
    check_alphabet(spec)?;
    if !locally_admissible(pi, spec)? {
        return Ok(Certificate::InvalidWindow { window: pi.domain() });
    }
    let (_, r) = center_and_radius(&pi.domain());
    let first = (r + 1).min(opts.max_n);
    let mut b = Budget::new(opts.budget);
    if let Some(c) = invalid_in(pi, spec, first, first, &mut b)? {
        if c.proves_invalid() {
            return Ok(c);
        }
    }
    let pos = prove_valid_periodic(pi, spec, opts.period_bound, opts.budget)?;
    if pos.proves_valid() {
        return Ok(pos);
    }
    let neg = prove_invalid(pi, spec, opts.max_n, opts.budget)?;
    if neg.proves_invalid() {
        return Ok(neg);
    }
    Ok(Certificate::Unknown {
        explored: format!("{}; {}", explored(&pos), explored(&neg)),
    })
}

fn explored(c: &Certificate) -> String {
    match c {
        Certificate::Unknown { explored } => explored.clone(),
        other => other.tag().to_string(),
    }
}

/// Options for [`independent`] and [`weak_mixing_offset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependenceOptions {
    /// Candidate patterns on `F` must extend to `N(F, margin)`.
    pub margin: i64,
    pub verify: VerifyOptions,
}

impl Default for IndependenceOptions {
    fn default() -> Self {
        IndependenceOptions {
            margin: 2,
            verify: VerifyOptions::default(),
        }
    }
}

/// Certified valid patterns on a region.
#[derive(Debug, Clone)]
pub struct ValidPatterns {
    pub valid: Vec<(Pattern, Certificate)>,
    /// Candidates that could be neither certified nor refuted.
    pub unknown: Vec<Pattern>,
    pub partial: bool,
}

pub fn valid_patterns(f: &Region, spec: &SftSpec, opts: &IndependenceOptions) -> Result<ValidPatterns, VerifyError> {
    let mut budget = Budget::new(opts.verify.budget);
    let en = enumerate_admissible(f, spec, &f.neighborhood(opts.margin), &mut budget)?;
    let results: Vec<Result<(Pattern, Certificate), VerifyError>> = en
        .patterns
        .into_par_iter()
        .map(|p| certify(&p, spec, &opts.verify).map(|c| (p, c)))
        .collect();
    let mut out = ValidPatterns {
        valid: Vec::new(),
        unknown: Vec::new(),
        partial: en.partial,
    };
    for r in results {
        let (p, c) = r?;
        if c.proves_valid() {
            out.valid.push((p, c));
        } else if !c.proves_invalid() {
            out.unknown.push(p);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Independence {
    Independent {
        pairs: usize,
    },
    /// Both patterns are valid, their union is not.
    Correlated {
        f: Pattern,
        g: Pattern,
        f_cert: Certificate,
        g_cert: Certificate,
        joint: Certificate,
    },
    Unknown {
        reason: String,
    },
}

impl Independence {
    pub fn tag(&self) -> &'static str {
        match self {
            Independence::Independent { .. } => "INDEPENDENT",
            Independence::Correlated { .. } => "CORRELATED",
            Independence::Unknown { .. } => "UNKNOWN",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Independence::Independent { .. } => 0,
            Independence::Correlated { .. } => 1,
            Independence::Unknown { .. } => 2,
        }
    }
}

/// Whether every valid pattern on `f` and every valid pattern on `g` occur together.
pub fn independent(
    f: &Region,
    g: &Region,
    spec: &SftSpec,
    opts: &IndependenceOptions,
) -> Result<Independence, VerifyError> {
    if !f.is_disjoint(g) {
        return Err(VerifyError::Overlap);
    }
    let vf = valid_patterns(f, spec, opts)?;
    let vg = valid_patterns(g, spec, opts)?;
    let pairs: Vec<(usize, usize)> = (0..vf.valid.len())
        .flat_map(|i| (0..vg.valid.len()).map(move |j| (i, j)))
        .collect();
    let joint: Vec<Result<Certificate, VerifyError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let u = vf.valid[i].0.union(&vg.valid[j].0)?;
            certify(&u, spec, &opts.verify)
        })
        .collect();
    let mut unknown = None;
    for (k, r) in joint.into_iter().enumerate() {
        let c = r?;
        if c.proves_invalid() {
            let (i, j) = pairs[k];
            return Ok(Independence::Correlated {
                f: vf.valid[i].0.clone(),
                g: vg.valid[j].0.clone(),
                f_cert: vf.valid[i].1.clone(),
                g_cert: vg.valid[j].1.clone(),
                joint: c,
            });
        }
        if !c.proves_valid() && unknown.is_none() {
            unknown = Some(format!("pair {k} undecided"));
        }
    }
    if vf.partial || vg.partial {
        return Ok(Independence::Unknown {
            reason: "enumeration hit the node budget".into(),
        });
    }
    if !vf.unknown.is_empty() || !vg.unknown.is_empty() {
        return Ok(Independence::Unknown {
            reason: format!("{} undecided patterns", vf.unknown.len() + vg.unknown.len()),
        });
    }
    match unknown {
        Some(reason) => Ok(Independence::Unknown { reason }),
        None => Ok(Independence::Independent { pairs: pairs.len() }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakMix {
    Found { offset: Point },
    NotFound { tried: Vec<(Point, &'static str)> },
}

/// First candidate `p` (skipping overlapping ones) such that `region` and
/// `region + p` are certified independent.
pub fn weak_mixing_offset(
    spec: &SftSpec,
    region: &Region,
    candidates: &[Point],
    opts: &IndependenceOptions,
) -> Result<WeakMix, VerifyError> {
    let mut tried = Vec::new();
    for &p in candidates {
        let g = region.translate(p);
        if !region.is_disjoint(&g) {
            tried.push((p, "OVERLAP"));
            continue;
        }
        let v = independent(region, &g, spec, opts)?;
        if matches!(v, Independence::Independent { .. }) {
            return Ok(WeakMix::Found { offset: p });
        }
        tried.push((p, v.tag()));
    }
    Ok(WeakMix::NotFound { tried })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraftOutcome {
    /// No admissible filling of `N(p + F, r)` fits between the pattern and
    /// the surrounding configuration inside `window`.
    Refuted {
        window: Region,
    },
    /// The graft works on the window; the witness is the patched configuration.
    Confirmed {
        witness: ConfigDescriptor,
    },
    Unknown,
}

impl GraftOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            GraftOutcome::Refuted { .. } => "REFUTED",
            GraftOutcome::Confirmed { .. } => "CONFIRMED",
            GraftOutcome::Unknown => "UNKNOWN",
        }
    }
}

/// Tries to place `pi` (a pattern on `F`) at `p` inside `x`, changing `x`
/// only on `N(p + F, r)`, checked on a window `margin` cells wider.
pub fn can_graft(
    x: &ConfigDescriptor,
    pi: &Pattern,
    p: Point,
    r: i64,
    spec: &SftSpec,
    margin: Option<i64>,
    budget: u64,
) -> Result<GraftOutcome, VerifyError> {
    let need = spec.max_diam();
    let margin = margin.unwrap_or(need + 2);
    if margin < need {
        return Err(VerifyError::MarginTooSmall { margin, needed: need });
    }
    let placed = pi.translate(p);
    let n = placed.domain().neighborhood(r);
    let window = n.neighborhood(margin);
    let outer = window.difference(&n);
    let base = descriptor_eval(x, &outer)?;
    if let Some((_, t)) = crate::lattice::first_violation(&base, spec) {
        return Err(VerifyError::InvalidBase(t));
    }
    let fixed = base.union(&placed)?;
    let wp = window_problem(spec, &window, &fixed)?;
    match wp.csp.solve(&mut Budget::new(budget)) {
        Solve::Unsat => Ok(GraftOutcome::Refuted { window }),
        Solve::Sat(vals) => {
            let filled = wp.pattern(spec.dim, &vals).restrict(&n);
            Ok(GraftOutcome::Confirmed {
                witness: ConfigDescriptor::Patched {
                    base: Box::new(x.clone()),
                    patch: filled,
                },
            })
        }
        Solve::Exhausted => Ok(GraftOutcome::Unknown),
    }
}

/// A candidate witness that a configuration is finitely ramified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationWitness {
    pub x: ConfigDescriptor,
    pub f: Region,
    pub r: i64,
    pub v: Point,
    pub u: Point,
    pub beta: i64,
    /// Grid half-width: `lambda` in `[-k, k]`, `mu` in `[1, k]`.
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamificationVerdict {
    Pass,
    Fail { lambda: i64, mu: i64 },
    Inconclusive { lambda: i64, mu: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationReport {
    pub cells: Vec<(i64, i64, GraftOutcome)>,
    pub verdict: RamificationVerdict,
}

impl RamificationReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            RamificationVerdict::Pass => 0,
            RamificationVerdict::Fail { .. } => 1,
            RamificationVerdict::Inconclusive { .. } => 2,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (l, m, o) in &self.cells {
            out.push_str(&format!("lambda={l} mu={m} {}\n", o.tag()));
        }
        match self.verdict {
            RamificationVerdict::Pass => out.push_str("PASS\n"),
            RamificationVerdict::Fail { lambda, mu } => out.push_str(&format!("FAIL lambda={lambda} mu={mu}\n")),
            RamificationVerdict::Inconclusive { lambda, mu } => {
                out.push_str(&format!("UNKNOWN lambda={lambda} mu={mu}\n"))
            }
        }
        out
    }
}

/// For every `lambda` in `[-k, k]` and `mu` in `[1, k]`, the pattern of `x`
/// on `F` at `lambda*beta*v + mu*beta*u` must not be graftable at `lambda*beta*v`.
pub fn verify_ramification(
    w: &RamificationWitness,
    spec: &SftSpec,
    margin: Option<i64>,
) -> Result<RamificationReport, VerifyError> {
    let mut cells = Vec::new();
    let mut verdict = RamificationVerdict::Pass;
    for mu in 1..=w.k {
        for lambda in -w.k..=w.k {
            let target = (lambda * w.beta) * w.v;
            let source = target + (mu * w.beta) * w.u;
            let pi = descriptor_eval(&w.x, &w.f.translate(source))?.shift(source);
            let out = can_graft(&w.x, &pi, target, w.r, spec, margin, DEFAULT_BUDGET)?;
            match (&out, &verdict) {
                (
                    GraftOutcome::Confirmed { .. },
                    RamificationVerdict::Pass | RamificationVerdict::Inconclusive { .. },
                ) => {
                    verdict = RamificationVerdict::Fail { lambda, mu };
                }
                (GraftOutcome::Unknown, RamificationVerdict::Pass) => {
                    verdict = RamificationVerdict::Inconclusive { lambda, mu };
                }
                _ => {}
            }
            cells.push((lambda, mu, out));
        }
    }
    Ok(RamificationReport { cells, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Naive oracle: does any assignment of the window extend `pi` admissibly?
    pub(crate) fn brute_extendable(pi: &Pattern, spec: &SftSpec, window: &Region) -> bool {
        let free: Vec<Point> = window.iter().filter(|p| pi.get(*p).is_none()).collect();
        let k = spec.alphabet_size() as u64;
        let total = k.pow(free.len() as u32);
        for mut code in 0..total {
            let mut pat = pi.clone();
            for p in &free {
                pat.set(*p, (code % k) as u32);
                code /= k;
            }
            if locally_admissible(&pat, spec).unwrap() {
                return true;
            }
        }
        false
    }

    fn p2(cells: &[((i64, i64), u32)]) -> Pattern {
        Pattern::from_cells(2, cells.iter().map(|((x, y), s)| (Point::new(*x, *y), *s))).unwrap()
    }

    #[test]
    fn inadmissible_pattern_is_its_own_window() {
        let spec = catalog::triangles();
        let pi = p2(&[((0, 0), 1), ((0, 1), 1), ((1, 0), 0)]);
        assert_eq!(
            prove_invalid(&pi, &spec, 3, DEFAULT_BUDGET).unwrap(),
            Certificate::InvalidWindow { window: pi.domain() }
        );
    }

    #[test]
    fn xzbar_black_then_white_is_invalid() {
        let spec = catalog::x_zbar(1);
        let pi = Pattern::from_cells(1, [(Point::d1(0), 1), (Point::d1(5), 0)]).unwrap();
        let c = prove_invalid(&pi, &spec, 4, DEFAULT_BUDGET).unwrap();
        assert!(c.proves_invalid());
        let Certificate::InvalidWindow { window } = c else {
            unreachable!()
        };
        assert!(!brute_extendable(&pi, &spec, &window));
    }

    #[test]
    fn periodic_completions() {
        let spec = catalog::triangles();
        let pi = Pattern::constant(&Region::q(1, 2), 0);
        let Certificate::PeriodicCompletion(c) = prove_valid_periodic(&pi, &spec, 4, DEFAULT_BUDGET).unwrap() else {
            panic!()
        };
        assert_eq!(c.fold.periods(), vec![Point::new(1, 0), Point::new(0, 1)]);

        let dom = catalog::dominoes();
        let pi = p2(&[((0, 0), catalog::H_LEFT)]);
        let Certificate::PeriodicCompletion(c) = prove_valid_periodic(&pi, &dom, 4, DEFAULT_BUDGET).unwrap() else {
            panic!()
        };
        assert_eq!(c.fold.periods(), vec![Point::new(2, 0), Point::new(0, 1)]);
    }

    #[test]
    fn step_needs_a_clamped_completion() {
        let spec = catalog::x_zbar(1);
        let pi = Pattern::word(0, &[0, 1]);
        let c = prove_valid_periodic(&pi, &spec, 4, DEFAULT_BUDGET).unwrap();
        let Certificate::DescriptorWitness(d) = c else {
            panic!("{c:?}")
        };
        for x in -10..10 {
            assert_eq!(d.eval(Point::d1(x)), u32::from(x >= 1));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let spec = catalog::golden_mean();
        let f = Region::rect(1, 0, 2, 0, 0);
        let en = enumerate_admissible(&f, &spec, &f.neighborhood(1), &mut Budget::default()).unwrap();
        let words: Vec<Vec<u32>> = en.patterns.iter().map(|p| p.symbols()).collect();
        assert_eq!(
            words,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![1, 0, 0],
                vec![1, 0, 1]
            ]
        );
        assert!(!en.partial);
    }

    #[test]
    fn margin_below_diameter() {
        let spec = catalog::triangles();
        let x = ConfigDescriptor::Constant(0);
        let pi = p2(&[((0, 0), 0)]);
        assert_eq!(
            can_graft(&x, &pi, Point::ORIGIN, 1, &spec, Some(0), DEFAULT_BUDGET),
            Err(VerifyError::MarginTooSmall { margin: 0, needed: 1 })
        );
    }

    #[test]
    fn fullshift_regions_are_independent() {
        let spec = catalog::fullshift(2, 2);
        let f = Region::q(0, 2);
        let g = f.translate(Point::new(1, 0));
        assert!(matches!(
            independent(&f, &g, &spec, &IndependenceOptions::default()).unwrap(),
            Independence::Independent { pairs: 4 }
        ));
    }

    #[test]
    fn xzbar_cells_on_a_row_are_correlated() {
        let spec = catalog::x_zbar(1);
        let f = Region::from_points(1, [Point::d1(0)]).unwrap();
        let g = Region::from_points(1, [Point::d1(5)]).unwrap();
        let v = independent(&f, &g, &spec, &IndependenceOptions::default()).unwrap();
        let Independence::Correlated {
            f: a,
            g: b,
            f_cert,
            g_cert,
            ..
        } = v
        else {
            panic!()
        };
        assert_eq!((a.symbols(), b.symbols()), (vec![1], vec![0]));
        assert!(f_cert.proves_valid() && g_cert.proves_valid());
    }
}
