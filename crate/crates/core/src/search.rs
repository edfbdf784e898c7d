//! Finite-domain backtracking search used by every certificate producer.
//!
//! Domains are bitmasks over at most 64 symbols. Constraints are nogoods,
//! i.e. conjunctions of `var = symbol` literals that may not all hold; they
//! come from placing forbidden patterns inside a finite window. Search does
//! unit propagation to a fixpoint, picks the variable with the fewest
//! remaining values (ties: closest to a fixed cell, then lowest index) and
//! tries values in ascending order.

use std::collections::HashMap;

use crate::lattice::{LatticeError, Pattern, Point, Region, SftSpec, Symbol, MAX_ALPHABET};

/// Default node budget for a single search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Counts search nodes across calls; once empty, searches report exhaustion.
#[derive(Debug, Clone)]
pub struct Budget {
    remaining: u64,
    used: u64,
}

impl Budget {
    pub fn new(nodes: u64) -> Self {
        Budget {
            remaining: nodes,
            used: 0,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining == 0
    }

    fn tick(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        self.used += 1;
        true
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    Sat(Vec<Symbol>),
    Unsat,
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct Csp {
    domains: Vec<u64>,
    nogoods: Vec<Vec<(u32, u8)>>,
    watch: Vec<Vec<u32>>,
    priority: Vec<u32>,
}

fn single(d: u64) -> bool {
    d != 0 && d & (d - 1) == 0
}

impl Csp {
    pub fn new(domains: Vec<u64>, priority: Vec<u32>) -> Self {
        assert_eq!(domains.len(), priority.len());
        let n = domains.len();
        Csp {
            domains,
            nogoods: Vec::new(),
            watch: vec![Vec::new(); n],
            priority,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn num_nogoods(&self) -> usize {
        self.nogoods.len()
    }

    /// Adds a nogood unless one of its literals is already impossible.
    pub fn add_nogood(&mut self, mut lits: Vec<(u32, u8)>) {
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].0 == w[1].0 {
                // Same variable with two different values can never hold.
                return;
            }
        }
        if lits.iter().any(|&(v, s)| self.domains[v as usize] & (1u64 << s) == 0) {
            return;
        }
        let id = self.nogoods.len() as u32;
        for &(v, _) in &lits {
            self.watch[v as usize].push(id);
        }
        self.nogoods.push(lits);
    }

    fn propagate(&self, dom: &mut [u64], queue: &mut Vec<u32>) -> bool {
        while let Some(v) = queue.pop() {
            for &ng in &self.watch[v as usize] {
                let mut open: Option<(u32, u8)> = None;
                let mut n_open = 0;
                let mut dead = false;
                for &(u, s) in &self.nogoods[ng as usize] {
                    let d = dom[u as usize];
                    let bit = 1u64 << s;
                    if d & bit == 0 {
                        dead = true;
                        break;
                    }
                    if d != bit {
                        n_open += 1;
                        if n_open > 1 {
                            break;
                        }
                        open = Some((u, s));
                    }
                }
                if dead || n_open > 1 {
                    continue;
                }
                match open {
                    None => return false,
                    Some((u, s)) => {
                        let d = &mut dom[u as usize];
                        *d &= !(1u64 << s);
                        if *d == 0 {
                            return false;
                        }
                        queue.push(u);
                    }
                }
            }
        }
        true
    }

    fn root(&self) -> Option<Vec<u64>> {
        let mut dom = self.domains.clone();
        if dom.contains(&0) {
            return None;
        }
        let mut queue: Vec<u32> = (0..dom.len() as u32).collect();
        self.propagate(&mut dom, &mut queue).then_some(dom)
    }

    fn pick(&self, dom: &[u64]) -> Option<usize> {
        let mut best: Option<(u32, u32, usize)> = None;
        for (i, d) in dom.iter().enumerate() {
            if single(*d) {
                continue;
            }
            let key = (d.count_ones(), self.priority[i], i);
            if !matches!(best, Some(b) if key >= b) {
                best = Some(key);
            }
        }
        best.map(|b| b.2)
    }

    fn dfs(&self, dom: Vec<u64>, budget: &mut Budget) -> Solve {
        let Some(v) = self.pick(&dom) else {
            return Solve::Sat(dom.iter().map(|d| d.trailing_zeros()).collect());
        };
        let mut bits = dom[v];
        while bits != 0 {
            let s = bits.trailing_zeros();
            bits &= bits - 1;
            if !budget.tick() {
                return Solve::Exhausted;
            }
            let mut d2 = dom.clone();
            d2[v] = 1u64 << s;
            let mut q = vec![v as u32];
            if !self.propagate(&mut d2, &mut q) {
                continue;
            }
            match self.dfs(d2, budget) {
                Solve::Unsat => {}
                other => return other,
            }
        }
        Solve::Unsat
    }

    pub fn solve(&self, budget: &mut Budget) -> Solve {
        match self.root() {
            None => Solve::Unsat,
            Some(dom) => self.dfs(dom, budget),
        }
    }

    /// Visits every assignment of `proj` that extends to a full solution, in
    /// lexicographic order of `proj`. Returns `false` if the budget ran out.
    pub fn enumerate_projected(&self, proj: &[usize], budget: &mut Budget, visit: &mut dyn FnMut(&[Symbol])) -> bool {
        let Some(dom) = self.root() else { return true };
        let mut cur = Vec::with_capacity(proj.len());
        self.enum_rec(dom, proj, 0, &mut cur, budget, visit)
    }

    fn enum_rec(
        &self,
        dom: Vec<u64>,
        proj: &[usize],
        k: usize,
        cur: &mut Vec<Symbol>,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&[Symbol]),
    ) -> bool {
        if k == proj.len() {
            return match self.dfs(dom, budget) {
                Solve::Sat(_) => {
                    visit(cur);
                    true
                }
                Solve::Unsat => true,
                Solve::Exhausted => false,
            };
        }
        let v = proj[k];
        let mut bits = dom[v];
        while bits != 0 {
            let s = bits.trailing_zeros();
            bits &= bits - 1;
            if !budget.tick() {
                return false;
            }
            let mut d2 = dom.clone();
            d2[v] = 1u64 << s;
            let mut q = vec![v as u32];
            if !self.propagate(&mut d2, &mut q) {
                continue;
            }
            cur.push(s);
            let ok = self.enum_rec(d2, proj, k + 1, cur, budget, visit);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// A search problem over the cells of a finite window.
#[derive(Debug, Clone)]
pub struct WindowProblem {
    pub cells: Vec<Point>,
    pub index: HashMap<Point, usize>,
    pub csp: Csp,
}

impl WindowProblem {
    pub fn pattern(&self, dim: u8, values: &[Symbol]) -> Pattern {
        Pattern::from_cells(dim, self.cells.iter().copied().zip(values.iter().copied())).expect("distinct cells")
    }
}

pub fn full_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

pub fn check_alphabet(spec: &SftSpec) -> Result<(), LatticeError> {
    if spec.alphabet_size() > MAX_ALPHABET {
        return Err(LatticeError::AlphabetSize {
            got: spec.alphabet_size(),
            max: MAX_ALPHABET,
        });
    }
    Ok(())
}

/// Builds the CSP "fill `window` so that it is locally admissible and agrees
/// with `fixed`". Cells of `fixed` outside the window are included as well.
pub fn window_problem(spec: &SftSpec, window: &Region, fixed: &Pattern) -> Result<WindowProblem, LatticeError> {
    check_alphabet(spec)?;
    let k = spec.alphabet_size();
    let mut cells: Vec<Point> = window.iter().collect();
    for (p, _) in fixed.iter() {
        if !window.contains(p) {
            cells.push(p);
        }
    }
    cells.sort();
    let index: HashMap<Point, usize> = cells.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut domains = vec![full_mask(k); cells.len()];
    for (p, s) in fixed.iter() {
        if s as usize >= k {
            return Err(LatticeError::AlphabetMismatch {
                at: p,
                symbol: s,
                size: k,
            });
        }
        domains[index[&p]] = 1u64 << s;
    }
    let fixed_pts: Vec<Point> = fixed.iter().map(|(p, _)| p).collect();
    let priority: Vec<u32> = cells
        .iter()
        .map(|c| {
            fixed_pts
                .iter()
                .map(|f| c.dist(*f))
                .min()
                .unwrap_or(0)
                .min(u32::MAX as i64) as u32
        })
        .collect();
    let mut csp = Csp::new(domains, priority);
    for f in &spec.forbidden {
        let lits: Vec<(Point, Symbol)> = f.iter().collect();
        let Some(&(anchor, _)) = lits.first() else {
            continue;
        };
        for c in &cells {
            let t = *c - anchor;
            let mut ng = Vec::with_capacity(lits.len());
            let mut inside = true;
            for &(q, s) in &lits {
                match index.get(&(q + t)) {
                    Some(&i) => ng.push((i as u32, s as u8)),
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if inside {
                csp.add_nogood(ng);
            }
        }
    }
    Ok(WindowProblem { cells, index, csp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn pigeonhole_is_unsat() {
        // Three variables over two values, pairwise different.
        let mut csp = Csp::new(vec![0b11; 3], vec![0; 3]);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            for s in 0..2 {
                csp.add_nogood(vec![(a, s), (b, s)]);
            }
        }
        assert_eq!(csp.solve(&mut Budget::default()), Solve::Unsat);
    }

    #[test]
    fn first_solution_is_lexicographically_least() {
        let csp = Csp::new(vec![0b111; 2], vec![0; 2]);
        assert_eq!(csp.solve(&mut Budget::default()), Solve::Sat(vec![0, 0]));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut csp = Csp::new(vec![0b11; 20], vec![0; 20]);
        // Force every branch to fail late: last variable has no value.
        csp.add_nogood(vec![(19, 0)]);
        csp.add_nogood(vec![(19, 1)]);
        assert_eq!(csp.solve(&mut Budget::new(5)), Solve::Unsat);
        let mut csp = Csp::new(vec![0b11; 12], vec![0; 12]);
        for a in 0..12u32 {
            // Parity-style constraint that unit propagation cannot see early.
            csp.add_nogood(vec![(a, 1), ((a + 1) % 12, 1), ((a + 2) % 12, 1)]);
        }
        csp.add_nogood((0..12u32).map(|v| (v, 0)).collect());
        assert!(matches!(csp.solve(&mut Budget::new(1)), Solve::Exhausted));
    }

    #[test]
    fn projected_enumeration_checks_extension() {
        // Checkerboard row of 3 with cell 0 free: both colourings extend.
        let spec = catalog::checkerboard();
        let w = Region::rect(2, 0, 2, 0, 0);
        let wp = window_problem(&spec, &w, &Pattern::new(2)).unwrap();
        let mut seen = Vec::new();
        assert!(wp
            .csp
            .enumerate_projected(&[0], &mut Budget::default(), &mut |s| seen.push(s.to_vec())));
        assert_eq!(seen, vec![vec![0], vec![1]]);
    }
}
