//! Recodings between presentations (higher power blocks, intertwining) and
//! input windows of finite functions.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::formats::content_lines;
use crate::generate::LocalRule;
use crate::lattice::{div_floor, Alphabet, LatticeError, Pattern, Point, Region, SftSpec, Symbol, MAX_ALPHABET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecodeError {
    #[error("block vector entries must be positive and match the dimension")]
    BadBlockVector,
    #[error("domain is not a union of whole blocks (cell {0:?})")]
    MisalignedDomain(Point),
    #[error("part {part} has no value at {at:?}")]
    InsufficientPartDomain { part: usize, at: Point },
    #[error("expected {expected} parts, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("recoded alphabet has {0} symbols")]
    AlphabetTooLarge(u128),
    #[error("exhaustive search over {0} assignments exceeds the budget")]
    BudgetExceeded(u128),
    #[error("output index {0} out of range")]
    NoSuchOutput(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Block sizes `a`; the block `R_a` is `[0,a_1-1] x ... x [0,a_d-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVector {
    a: Vec<i64>,
}

impl BlockVector {
    pub fn new(a: &[i64]) -> Result<Self, RecodeError> {
        if a.is_empty() || a.len() > 2 || a.iter().any(|&x| x < 1) {
            return Err(RecodeError::BadBlockVector);
        }
        Ok(BlockVector { a: a.to_vec() })
    }

    pub fn dim(&self) -> u8 {
        self.a.len() as u8
    }

    fn ay(&self) -> i64 {
        self.a.get(1).copied().unwrap_or(1)
    }

    /// `|R_a|`.
    pub fn volume(&self) -> usize {
        self.a.iter().product::<i64>() as usize
    }

    /// Cells of `R_a` in lattice order; this order also indexes parts and block digits.
    pub fn cells(&self) -> Vec<Point> {
        let mut v: Vec<Point> = (0..self.ay())
            .flat_map(|y| (0..self.a[0]).map(move |x| Point::new(x, y)))
            .collect();
        v.sort();
        v
    }

    pub fn region(&self) -> Region {
        Region::from_points(self.dim(), self.cells()).expect("valid")
    }

    /// `a * q`, componentwise.
    pub fn scale(&self, q: Point) -> Point {
        Point::new(self.a[0] * q.x, self.ay() * q.y)
    }

    /// Splits `p` as `a q + r` with `r` in `R_a`.
    pub fn split(&self, p: Point) -> (Point, Point) {
        let q = Point::new(div_floor(p.x, self.a[0]), div_floor(p.y, self.ay()));
        (q, p - self.scale(q))
    }

    fn index_of(&self, r: Point) -> usize {
        (r.y * self.a[0] + r.x) as usize
    }
}

fn check_dim(pi_dim: u8, a: &BlockVector) -> Result<(), RecodeError> {
    if pi_dim != a.dim() {
        return Err(RecodeError::BadBlockVector);
    }
    Ok(())
}

/// `F_a`: the block at `a q` becomes one symbol (first cell least significant).
pub fn higher_power_pattern(pi: &Pattern, a: &BlockVector, k: usize) -> Result<Pattern, RecodeError> {
    check_dim(pi.dim(), a)?;
    let mut blocks: BTreeMap<Point, Vec<Option<Symbol>>> = BTreeMap::new();
    for (p, s) in pi.iter() {
        let (q, r) = a.split(p);
        blocks.entry(q).or_insert_with(|| vec![None; a.volume()])[a.index_of(r)] = Some(s);
    }
    let mut out = Pattern::new(pi.dim());
    for (q, digits) in blocks {
        let mut code: u64 = 0;
        for (i, d) in digits.iter().enumerate().rev() {
            let d = d.ok_or(RecodeError::MisalignedDomain(a.scale(q) + a.cells()[i]))?;
            code = code * k as u64 + d as u64;
        }
        out.set(q, code as Symbol);
    }
    Ok(out)
}

/// Inverse of [`higher_power_pattern`].
pub fn unblock_pattern(pi: &Pattern, a: &BlockVector, k: usize) -> Result<Pattern, RecodeError> {
    check_dim(pi.dim(), a)?;
    let cells = a.cells();
    let mut out = Pattern::new(pi.dim());
    for (q, s) in pi.iter() {
        let mut code = s as u64;
        for r in &cells {
            out.set(a.scale(q) + *r, (code % k as u64) as Symbol);
            code /= k as u64;
        }
    }
    Ok(out)
}

const FORBIDDEN_CAP: u128 = 1 << 20;

/// Higher power presentation of `spec`: for each forbidden pattern and each
/// placement inside a block, every filling of the touched blocks is forbidden.
pub fn higher_power_sft(spec: &SftSpec, a: &BlockVector) -> Result<SftSpec, RecodeError> {
    check_dim(spec.dim, a)?;
    let k = spec.alphabet_size();
    let size = (k as u128).checked_pow(a.volume() as u32).unwrap_or(u128::MAX);
    if size > MAX_ALPHABET as u128 {
        return Err(RecodeError::AlphabetTooLarge(size));
    }
    let mut forbidden = Vec::new();
    let mut total: u128 = 0;
    for f in &spec.forbidden {
        let Some((lo, _)) = f.domain().bbox() else { continue };
        let base = f.shift(lo);
        for t in a.cells() {
            let placed = base.translate(t);
            let blocks: BTreeSet<Point> = placed.iter().map(|(p, _)| a.split(p).0).collect();
            let free: Vec<Point> = blocks
                .iter()
                .flat_map(|q| a.cells().into_iter().map(move |r| a.scale(*q) + r))
                .filter(|p| placed.get(*p).is_none())
                .collect();
            let count = (k as u128).pow(free.len() as u32);
            total += count;
            if total > FORBIDDEN_CAP {
                return Err(RecodeError::BudgetExceeded(total));
            }
            for mut code in 0..count as u64 {
                let mut full = placed.clone();
                for p in &free {
                    full.set(*p, (code % k as u64) as Symbol);
                    code /= k as u64;
                }
                forbidden.push(higher_power_pattern(&full, a, k)?);
            }
        }
    }
    let labels: Vec<String> = (0..size).map(|i| i.to_string()).collect();
    Ok(SftSpec::new(
        &format!("{}^{:?}", spec.name, a.a),
        spec.dim,
        Alphabet::new(labels)?,
        forbidden,
    )?)
}

/// `psi_a`: the output at `a q + r` is the value of part `r` at `q`.
pub fn intertwine(parts: &[Pattern], a: &BlockVector, window: &Region) -> Result<Pattern, RecodeError> {
    if parts.len() != a.volume() {
        return Err(RecodeError::PartCount {
            expected: a.volume(),
            got: parts.len(),
        });
    }
    let mut out = Pattern::new(a.dim());
    for p in window.iter() {
        let (q, r) = a.split(p);
        let i = a.index_of(r);
        let s = parts[i]
            .get(q)
            .ok_or(RecodeError::InsufficientPartDomain { part: i, at: q })?;
        out.set(p, s);
    }
    Ok(out)
}

/// Inverse of [`intertwine`]: part `r` at `q` reads the input at `a q + r`.
pub fn unintertwine(pi: &Pattern, a: &BlockVector) -> Result<Vec<Pattern>, RecodeError> {
    check_dim(pi.dim(), a)?;
    let mut parts = vec![Pattern::new(a.dim()); a.volume()];
    for (p, s) in pi.iter() {
        let (q, r) = a.split(p);
        parts[a.index_of(r)].set(q, s);
    }
    Ok(parts)
}

/// A total function `A^E -> B^O` given by its truth table.
///
/// Assignments are indexed in mixed radix with the first input cell least
/// significant; each row lists the output symbols in `outputs` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFunction {
    pub dim: u8,
    pub alphabet: usize,
    pub inputs: Vec<Point>,
    pub outputs: Vec<Point>,
    pub table: Vec<Vec<Symbol>>,
}

const ASSIGNMENT_BUDGET: u128 = 1 << 24;

fn assignment_count(k: usize, n: usize) -> Result<usize, RecodeError> {
    let c = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if c > ASSIGNMENT_BUDGET {
        return Err(RecodeError::BudgetExceeded(c));
    }
    Ok(c as usize)
}

fn decode(mut idx: usize, k: usize, buf: &mut [Symbol]) {
    for b in buf.iter_mut() {
        *b = (idx % k) as Symbol;
        idx /= k;
    }
}

impl FiniteFunction {
    pub fn from_fn(
        dim: u8,
        alphabet: usize,
        inputs: Vec<Point>,
        outputs: Vec<Point>,
        f: impl Fn(&[Symbol]) -> Vec<Symbol>,
    ) -> Result<Self, RecodeError> {
        let n = assignment_count(alphabet, inputs.len())?;
        let mut buf = vec![0; inputs.len()];
        let table = (0..n)
            .map(|i| {
                decode(i, alphabet, &mut buf);
                f(&buf)
            })
            .collect();
        Ok(FiniteFunction {
            dim,
            alphabet,
            inputs,
            outputs,
            table,
        })
    }

    /// A local rule applied at each output cell, read off the input cells `inputs`.
    pub fn from_rule(rule: &LocalRule, dim: u8, inputs: Vec<Point>, outputs: Vec<Point>) -> Result<Self, RecodeError> {
        let pos: BTreeMap<Point, usize> = inputs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut reads = Vec::new();
        for q in &outputs {
            let mut r = Vec::new();
            for o in &rule.offsets {
                let c = *q + *o;
                r.push(*pos.get(&c).ok_or(RecodeError::Lattice(LatticeError::EmptyRegion))?);
            }
            reads.push(r);
        }
        Self::from_fn(dim, rule.in_alphabet, inputs, outputs, |s| {
            reads
                .iter()
                .map(|r| rule.eval(&r.iter().map(|&i| s[i]).collect::<Vec<_>>()))
                .collect()
        })
    }

    pub fn eval(&self, assignment: &[Symbol]) -> &[Symbol] {
        let idx = assignment
            .iter()
            .rev()
            .fold(0usize, |acc, s| acc * self.alphabet + *s as usize);
        &self.table[idx]
    }
}

/// Input cells on which output `q` essentially depends: changing that cell
/// alone can change the output.
pub fn input_window(f: &FiniteFunction, q: usize) -> Result<Region, RecodeError> {
    if q >= f.outputs.len() {
        return Err(RecodeError::NoSuchOutput(q));
    }
    let k = f.alphabet;
    let n = assignment_count(k, f.inputs.len())?;
    let cells: Vec<Point> = (0..f.inputs.len())
        .into_par_iter()
        .filter(|&e| {
            let stride = k.pow(e as u32);
            (0..n).any(|idx| {
                let digit = (idx / stride) % k;
                let base = idx - digit * stride;
                (0..k).any(|d| f.table[base + d * stride][q] != f.table[idx][q])
            })
        })
        .map(|e| f.inputs[e])
        .collect();
    Ok(Region::from_points(f.dim, cells)?)
}

/// Largest input window over all output cells.
pub fn narrowness_radius(f: &FiniteFunction) -> Result<usize, RecodeError> {
    let mut r = 0;
    for q in 0..f.outputs.len() {
        r = r.max(input_window(f, q)?.len());
    }
    Ok(r)
}

fn parse_cells(toks: &[&str], dim: &mut Option<u8>) -> Option<Vec<Point>> {
    toks.iter()
        .map(|t| {
            let v: Vec<i64> = t.split(',').map(|c| c.trim().parse().ok()).collect::<Option<_>>()?;
            let d = v.len() as u8;
            if !(1..=2).contains(&d) || dim.is_some_and(|x| x != d) {
                return None;
            }
            *dim = Some(d);
            Some(Point::new(v[0], v.get(1).copied().unwrap_or(0)))
        })
        .collect()
}

/// Reads a truth table: `inputs <cells>`, `outputs <cells>`, optional
/// `alphabet <k>` (default 2), then one `<inputs> : <outputs>` line per assignment.
pub fn parse_truth_table(text: &str) -> Result<FiniteFunction, RecodeError> {
    let err = |line, msg: String| RecodeError::Parse { line, msg };
    let mut dim = None;
    let (mut inputs, mut outputs, mut alphabet) = (None, None, 2usize);
    let mut rows: BTreeMap<usize, Vec<Symbol>> = BTreeMap::new();
    for (ln, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "inputs" => inputs = Some(parse_cells(&toks[1..], &mut dim).ok_or_else(|| err(ln, "bad cell".into()))?),
            "outputs" => outputs = Some(parse_cells(&toks[1..], &mut dim).ok_or_else(|| err(ln, "bad cell".into()))?),
            "alphabet" => {
                alphabet = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|&k| (1..=MAX_ALPHABET).contains(&k))
                    .ok_or_else(|| err(ln, "bad alphabet size".into()))?
            }
            _ => {
                let (ins, outs) = (inputs.as_ref(), outputs.as_ref());
                let (Some(ins), Some(outs)) = (ins, outs) else {
                    return Err(err(ln, "row before `inputs`/`outputs`".into()));
                };
                let (lhs, rhs) = l.split_once(':').ok_or_else(|| err(ln, "missing `:`".into()))?;
                let num = |s: &str| -> Result<Vec<Symbol>, RecodeError> {
                    s.split_whitespace()
                        .map(|t| t.parse::<Symbol>().ok().filter(|&v| (v as usize) < alphabet))
                        .collect::<Option<_>>()
                        .ok_or_else(|| err(ln, format!("bad symbols `{s}`")))
                };
                let a = num(lhs)?;
                let b = num(rhs)?;
                if a.len() != ins.len() || b.len() != outs.len() {
                    return Err(err(ln, "row length mismatch".into()));
                }
                let idx = a.iter().rev().fold(0usize, |acc, s| acc * alphabet + *s as usize);
                if rows.insert(idx, b).is_some() {
                    return Err(err(ln, "duplicate assignment".into()));
                }
            }
        }
    }
    let inputs = inputs.ok_or_else(|| err(0, "missing `inputs`".into()))?;
    let outputs = outputs.ok_or_else(|| err(0, "missing `outputs`".into()))?;
    let n = assignment_count(alphabet, inputs.len())?;
    if rows.len() != n {
        return Err(err(0, format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(FiniteFunction {
        dim: dim.unwrap_or(1),
        alphabet,
        inputs,
        outputs,
        table: rows.into_values().collect(),
    })
}

pub fn write_truth_table(f: &FiniteFunction) -> String {
    let cell = |p: &Point| {
        if f.dim == 1 {
            p.x.to_string()
        } else {
            format!("{},{}", p.x, p.y)
        }
    };
    let mut out = String::new();
    out.push_str(&format!(
        "inputs {}\n",
        f.inputs.iter().map(cell).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "outputs {}\n",
        f.outputs.iter().map(cell).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("alphabet {}\n", f.alphabet));
    let mut buf = vec![0; f.inputs.len()];
    for (i, row) in f.table.iter().enumerate() {
        decode(i, f.alphabet, &mut buf);
        let l: Vec<String> = buf.iter().map(|s| s.to_string()).collect();
        let r: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("{} : {}\n", l.join(" "), r.join(" ")));
    }
    out
}

/// Outcome of the exhaustive narrow-image check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowImageCensus {
    pub functions: u64,
    pub max_radius: u32,
    /// Largest image size seen for each radius.
    pub max_image: Vec<u32>,
    pub violations: u64,
}

/// Checks `|im f| <= 2^{r(r+1)/2}` for every function from binary inputs on
/// `support` cells to nondecreasing 0/1 words of length `len`.
pub fn narrow_image_census(support: u32, len: u32) -> NarrowImageCensus {
    assert!(support <= 4 && len < 16);
    let n_in = 1usize << support;
    let words: Vec<u16> = (0..=len).map(|z| ((1u16 << len) - 1) & !((1u16 << z) - 1)).collect();
    let base = words.len() as u64;
    let total = base.pow(n_in as u32);
    let per: Vec<(u32, u32, bool)> = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let mut f = [0u16; 16];
            for v in f.iter_mut().take(n_in) {
                *v = words[(code % base) as usize];
                code /= base;
            }
            let mut deps = [0u32; 16];
            for e in 0..support {
                let mut diff = 0u16;
                for a in 0..n_in {
                    diff |= f[a] ^ f[a ^ (1 << e)];
                }
                for (j, d) in deps.iter_mut().enumerate().take(len as usize) {
                    *d += u32::from(diff >> j & 1);
                }
            }
            let r = deps.iter().copied().max().unwrap_or(0);
            let mut img: Vec<u16> = f[..n_in].to_vec();
            img.sort_unstable();
            img.dedup();
            let im = img.len() as u32;
            (r, im, u64::from(im) <= 1u64 << (r * (r + 1) / 2))
        })
        .collect();
    let max_radius = per.iter().map(|p| p.0).max().unwrap_or(0);
    let mut max_image = vec![0; max_radius as usize + 1];
    for &(r, im, _) in &per {
        max_image[r as usize] = max_image[r as usize].max(im);
    }
    NarrowImageCensus {
        functions: total,
        max_radius,
        max_image,
        violations: per.iter().filter(|p| !p.2).count() as u64,
    }
}
