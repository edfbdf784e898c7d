//! One-dimensional pipeline: vertex shifts, graph powers, the least
//! transitive power, condensation and the two-stage walk generator.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::formats::content_lines;
use crate::generate::cell_hash;
use crate::lattice::{div_floor, locally_admissible, Pattern, Point, SftSpec, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OnedimError {
    #[error("word length {n} is below the longest forbidden pattern ({need})")]
    NTooSmall { n: usize, need: usize },
    #[error("subshift is not one-dimensional")]
    NotOneDimensional,
    #[error("too many words to enumerate ({0})")]
    TooLarge(u128),
    #[error("no transitive power up to {0}")]
    NotFoundWithinCap(u64),
    #[error("graph is not transitive")]
    NotTransitive,
    #[error("the graph has no bi-infinite walk")]
    EmptyLanguage,
    #[error("block descriptor is not a walk in the condensation")]
    IllFormedDescriptor,
    #[error("walk count overflow for k = {0}")]
    Overflow(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Directed graph on `0..n` with a bitset adjacency matrix (loops allowed).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DirectedGraph({}, {:?})", self.n, self.edges())
    }
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        DirectedGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.rows[u * self.words + v / 64] |= 1u64 << (v % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn has_loop(&self, u: usize) -> bool {
        self.has_edge(u, u)
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.successors(u).map(move |v| (u, v)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Boolean product: an edge `u -> w` whenever `u -> v` here and `v -> w` in `other`.
    pub fn compose(&self, other: &DirectedGraph) -> DirectedGraph {
        assert_eq!(self.n, other.n);
        let mut out = DirectedGraph::new(self.n);
        for u in 0..self.n {
            for v in self.successors(u) {
                for w in 0..self.words {
                    out.rows[u * self.words + w] |= other.rows[v * self.words + w];
                }
            }
        }
        out
    }

    /// Vertices reachable from `u` by a nonempty walk.
    fn reach(&self, u: usize) -> Vec<u64> {
        let mut seen = vec![0u64; self.words];
        let mut q: VecDeque<usize> = self.successors(u).collect();
        for &v in &q {
            seen[v / 64] |= 1 << (v % 64);
        }
        while let Some(v) = q.pop_front() {
            for w in self.successors(v) {
                if seen[w / 64] >> (w % 64) & 1 == 0 {
                    seen[w / 64] |= 1 << (w % 64);
                    q.push_back(w);
                }
            }
        }
        seen
    }

    /// Length of the shortest cycle through `u`, if any.
    fn girth_at(&self, u: usize) -> Option<u64> {
        let mut dist = vec![u64::MAX; self.n];
        let mut q = VecDeque::new();
        for v in self.successors(u) {
            if v == u {
                return Some(1);
            }
            dist[v] = 1;
            q.push_back(v);
        }
        while let Some(v) = q.pop_front() {
            for w in self.successors(v) {
                if w == u {
                    return Some(dist[v] + 1);
                }
                if dist[w] == u64::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        None
    }
}

/// `G^k`: an edge for every walk of length exactly `k`.
pub fn power_graph(g: &DirectedGraph, k: u64) -> DirectedGraph {
    assert!(k >= 1, "power must be positive");
    let mut result: Option<DirectedGraph> = None;
    let mut base = g.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.compose(&base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = base.compose(&base);
        }
    }
    result.expect("k >= 1")
}

/// Every pair joined by a nonempty walk is joined by an edge.
pub fn is_transitive(g: &DirectedGraph) -> bool {
    (0..g.n).all(|u| {
        let r = g.reach(u);
        r.iter().zip(g.row(u)).all(|(a, b)| a & !b == 0)
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common multiple of the shortest cycle lengths through each vertex.
pub fn cycle_lcm(g: &DirectedGraph) -> u64 {
    let mut l: u64 = 1;
    for u in 0..g.n {
        if let Some(c) = g.girth_at(u) {
            l = (l / gcd(l, c)).saturating_mul(c);
        }
    }
    l
}

/// Default search cap `2 * lcm * |V|^2`, clipped to `10^4`.
pub fn default_cap(g: &DirectedGraph) -> u64 {
    let n = g.n as u64;
    2u64.saturating_mul(cycle_lcm(g)).saturating_mul(n * n).clamp(1, 10_000)
}

/// Least `k >= 1` such that `G^k` is transitive.
pub fn transitive_power(g: &DirectedGraph, cap: Option<u64>) -> Result<u64, OnedimError> {
    let cap = cap.unwrap_or_else(|| default_cap(g));
    let mut p = g.clone();
    for k in 1..=cap {
        if is_transitive(&p) {
            return Ok(k);
        }
        p = p.compose(g);
    }
    Err(OnedimError::NotFoundWithinCap(cap))
}

/// The power produced by the constructive argument: first the cycle lcm
/// (so every vertex on a circuit gets a loop), then a bound on the
/// lengths at which reachability between two vertices stabilises.
pub fn constructive_power(g: &DirectedGraph) -> u64 {
    let k1 = cycle_lcm(g);
    let h = power_graph(g, k1);
    let n = g.n;
    let m = 4 * n + 4;
    let mut member = vec![vec![false; m + 1]; n * n];
    let mut p = h.clone();
    for t in 1..=m {
        for u in 0..n {
            for v in 0..n {
                member[u * n + v][t] = p.has_edge(u, v);
            }
        }
        p = p.compose(&h);
    }
    let mut k2 = 1;
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let row = &member[u * n + v];
            let k = if row[m] {
                let mut t = m;
                while t > 1 && row[t - 1] {
                    t -= 1;
                }
                t
            } else {
                (1..=m).rev().find(|&t| row[t]).unwrap_or(0)
            };
            k2 = k2.max(k as u64);
        }
    }
    k1.saturating_mul(k2)
}

/// Strongly connected components collapsed to a DAG (with loops kept).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub dag: DirectedGraph,
    pub component: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Condensation {
    /// `f_C`: identity on `C`, otherwise cyclic by vertex id.
    pub fn representative(&self, c: usize, v: usize) -> usize {
        let m = &self.members[c];
        if self.component[v] == c {
            v
        } else {
            m[v % m.len()]
        }
    }
}

fn tarjan(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, g.successors(root).collect(), 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, succ, i)) = call.last_mut() {
            let v = *v;
            if *i < succ.len() {
                let w = succ[*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, g.successors(w).collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Condensation of a transitive graph; component ids follow least members.
pub fn condensation(g: &DirectedGraph) -> Result<Condensation, OnedimError> {
    if !is_transitive(g) {
        return Err(OnedimError::NotTransitive);
    }
    let members = tarjan(g);
    let mut component = vec![0; g.n];
    for (c, m) in members.iter().enumerate() {
        for &v in m {
            component[v] = c;
        }
    }
    let mut dag = DirectedGraph::new(members.len());
    for (u, v) in g.edges() {
        let (a, b) = (component[u], component[v]);
        if a != b || members[a].iter().any(|&w| g.has_loop(w)) {
            dag.add_edge(a, b);
        }
    }
    Ok(Condensation {
        dag,
        component,
        members,
    })
}

/// An element of `X_H` for an acyclic-with-loops `H`: labels and the first
/// position of every block after the first (which extends to `-inf`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockDescriptor {
    pub labels: Vec<usize>,
    pub starts: Vec<i64>,
}

impl BlockDescriptor {
    pub fn label_at(&self, n: i64) -> usize {
        let i = self.starts.partition_point(|&s| s <= n);
        self.labels[i]
    }

    pub fn is_walk_in(&self, h: &DirectedGraph) -> bool {
        let n = self.labels.len();
        if !h.has_loop(self.labels[0]) || !h.has_loop(self.labels[n - 1]) {
            return false;
        }
        for i in 0..n.saturating_sub(1) {
            if !h.has_edge(self.labels[i], self.labels[i + 1])
                || self.starts[i] >= *self.starts.get(i + 1).unwrap_or(&i64::MAX)
            {
                return false;
            }
        }
        for i in 1..n.saturating_sub(1) {
            if self.starts[i] - self.starts[i - 1] > 1 && !h.has_loop(self.labels[i]) {
                return false;
            }
        }
        true
    }
}

fn chain_to_loop(h: &DirectedGraph, c: usize, forward: bool) -> Option<Vec<usize>> {
    // BFS from `c` along (reversed) edges until a looped vertex.
    let n = h.num_vertices();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::from([c]);
    seen[c] = true;
    while let Some(v) = q.pop_front() {
        if h.has_loop(v) {
            let mut path = vec![v];
            let mut w = v;
            while w != c {
                w = prev[w];
                path.push(w);
            }
            path.pop();
            if forward {
                path.reverse();
            }
            return Some(path);
        }
        let next: Vec<usize> = if forward {
            h.successors(v).collect()
        } else {
            (0..n).filter(|&u| h.has_edge(u, v)).collect()
        };
        for w in next {
            if !seen[w] {
                seen[w] = true;
                prev[w] = v;
                q.push_back(w);
            }
        }
    }
    None
}

/// All elements of `X_H` distinguishable on `start..=end`, with at most
/// `max_blocks` blocks visible there, in lexicographic order of labels.
pub fn enumerate_block_descriptors(h: &DirectedGraph, start: i64, end: i64, max_blocks: usize) -> Vec<BlockDescriptor> {
    let n = h.num_vertices();
    let left: Vec<Option<Vec<usize>>> = (0..n).map(|c| chain_to_loop(h, c, false)).collect();
    let right: Vec<Option<Vec<usize>>> = (0..n).map(|c| chain_to_loop(h, c, true)).collect();
    let mut out = Vec::new();
    if end < start {
        return out;
    }
    let len = (end - start + 1) as usize;
    let mut word = Vec::with_capacity(len);
    fn rec(
        h: &DirectedGraph,
        right: &[Option<Vec<usize>>],
        len: usize,
        blocks: usize,
        max_blocks: usize,
        word: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if word.len() == len {
            if right[*word.last().unwrap()].is_some() {
                out.push(word.clone());
            }
            return;
        }
        let cur = *word.last().unwrap();
        let mut next: Vec<usize> = h.successors(cur).collect();
        next.sort_unstable();
        for d in next {
            let nb = blocks + usize::from(d != cur);
            if nb > max_blocks || right[d].is_none() {
                continue;
            }
            word.push(d);
            rec(h, right, len, nb, max_blocks, word, out);
            word.pop();
        }
    }
    let mut words = Vec::new();
    for c in 0..n {
        if left[c].is_none() || right[c].is_none() || max_blocks == 0 {
            continue;
        }
        word.push(c);
        rec(h, &right, len, 1, max_blocks, &mut word, &mut words);
        word.pop();
    }
    for w in words {
        let mut labels = left[w[0]].clone().unwrap();
        let mut starts: Vec<i64> = Vec::new();
        let hidden = labels.len() as i64;
        for i in 1..labels.len() {
            starts.push(start - hidden + i as i64);
        }
        labels.push(w[0]);
        if hidden > 0 {
            starts.push(start);
        }
        for (i, c) in w.iter().enumerate().skip(1) {
            if *c != w[i - 1] {
                labels.push(*c);
                starts.push(start + i as i64);
            }
        }
        for (i, c) in right[w[len - 1]].clone().unwrap().into_iter().enumerate() {
            labels.push(c);
            starts.push(end + 1 + i as i64);
        }
        out.push(BlockDescriptor { labels, starts });
    }
    out
}

/// Symbol stream feeding both generator stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolStream {
    Seeded(u64),
    Explicit {
        first: BTreeMap<i64, u64>,
        second: BTreeMap<i64, u64>,
    },
}

impl SymbolStream {
    fn first(&self, n: i64) -> u64 {
        match self {
            SymbolStream::Seeded(s) => cell_hash(*s, 1, Point::d1(n)),
            SymbolStream::Explicit { first, .. } => first.get(&n).copied().unwrap_or(0),
        }
    }

    fn second(&self, n: i64) -> u64 {
        match self {
            SymbolStream::Seeded(s) => cell_hash(*s, 2, Point::d1(n)),
            SymbolStream::Explicit { second, .. } => second.get(&n).copied().unwrap_or(0),
        }
    }
}

/// Walks of `k` vertices in `g`, ranked lexicographically.
struct WalkCounter<'a> {
    g: &'a DirectedGraph,
    k: usize,
    // all[j][w]: walks with j+1 vertices starting at w.
    all: Vec<Vec<u128>>,
}

impl<'a> WalkCounter<'a> {
    fn new(g: &'a DirectedGraph, k: usize) -> Result<Self, OnedimError> {
        let all = Self::table(g, k, &vec![true; g.num_vertices()])?;
        Ok(WalkCounter { g, k, all })
    }

    fn table(g: &DirectedGraph, k: usize, last: &[bool]) -> Result<Vec<Vec<u128>>, OnedimError> {
        let n = g.num_vertices();
        let mut t = vec![last.iter().map(|&b| u128::from(b)).collect::<Vec<_>>()];
        for j in 1..k {
            let mut row = vec![0u128; n];
            for (w, cell) in row.iter_mut().enumerate() {
                for x in g.successors(w) {
                    *cell = cell.checked_add(t[j - 1][x]).ok_or(OnedimError::Overflow(k as u64))?;
                }
            }
            t.push(row);
        }
        Ok(t)
    }

    fn total(&self) -> u128 {
        self.all[self.k - 1].iter().sum()
    }

    fn unrank(&self, table: &[Vec<u128>], first: Option<usize>, mut idx: u128) -> Vec<usize> {
        let mut walk = Vec::with_capacity(self.k);
        let mut cands: Vec<usize> = match first {
            Some(u) => vec![u],
            None => (0..self.g.num_vertices()).collect(),
        };
        for rem in (0..self.k).rev() {
            let mut chosen = None;
            for &c in &cands {
                let cnt = table[rem][c];
                if idx < cnt {
                    chosen = Some(c);
                    break;
                }
                idx -= cnt;
            }
            let c = chosen.expect("rank in range");
            walk.push(c);
            cands = self.g.successors(c).collect();
        }
        walk
    }

    /// `f_{u,v}`: identity on walks from `u` whose last vertex steps to `v`,
    /// otherwise the `(s mod |Sigma_{u,v}|)`-th such walk.
    fn select(&self, u: usize, v: usize, s: u64) -> Result<Vec<usize>, OnedimError> {
        let total = self.total();
        let walk = self.unrank(&self.all, None, s as u128 % total);
        if walk[0] == u && self.g.has_edge(walk[self.k - 1], v) {
            return Ok(walk);
        }
        let preds: Vec<bool> = (0..self.g.num_vertices()).map(|w| self.g.has_edge(w, v)).collect();
        let t = Self::table(self.g, self.k, &preds)?;
        let size = t[self.k - 1][u];
        if size == 0 {
            return Err(OnedimError::NotTransitive);
        }
        Ok(self.unrank(&t, Some(u), s as u128 % size))
    }
}

/// Generates `y` on `start..=end` from a block descriptor over the
/// condensation of `G^k` and a symbol stream.
pub fn generate_walk(
    g: &DirectedGraph,
    k: u64,
    cond: &Condensation,
    desc: &BlockDescriptor,
    stream: &SymbolStream,
    start: i64,
    end: i64,
) -> Result<Vec<usize>, OnedimError> {
    if g.num_vertices() == 0 {
        return Err(OnedimError::EmptyLanguage);
    }
    if desc.labels.is_empty()
        || desc.labels.len() != desc.starts.len() + 1
        || desc.labels.iter().any(|&c| c >= cond.members.len())
        || !desc.is_walk_in(&cond.dag)
    {
        return Err(OnedimError::IllFormedDescriptor);
    }
    let kk = k as i64;
    let q0 = div_floor(start, kk);
    let q1 = div_floor(end, kk);
    let n = g.num_vertices() as u64;
    let x: Vec<usize> = (q0..=q1 + 1)
        .map(|m| cond.representative(desc.label_at(m), (stream.first(m) % n) as usize))
        .collect();
    let counter = WalkCounter::new(g, k as usize)?;
    let mut y = Vec::new();
    for (i, m) in (q0..=q1).enumerate() {
        let block = counter.select(x[i], x[i + 1], stream.second(m))?;
        for (j, v) in block.into_iter().enumerate() {
            let pos = m * kk + j as i64;
            if (start..=end).contains(&pos) {
                y.push(v);
            }
        }
    }
    Ok(y)
}

/// Seed-driven convenience: least transitive power, condensation and a
/// seed-chosen block descriptor.
pub fn walk_from_seed(g: &DirectedGraph, seed: u64, start: i64, end: i64) -> Result<(u64, Vec<usize>), OnedimError> {
    let k = transitive_power(g, None)?;
    let gk = power_graph(g, k);
    let cond = condensation(&gk)?;
    let kk = k as i64;
    let (q0, q1) = (div_floor(start, kk), div_floor(end, kk) + 1);
    let descs = enumerate_block_descriptors(&cond.dag, q0, q1, cond.members.len());
    if descs.is_empty() {
        return Err(OnedimError::EmptyLanguage);
    }
    let pick = (crate::generate::mix64(seed) % descs.len() as u64) as usize;
    let y = generate_walk(g, k, &cond, &descs[pick], &SymbolStream::Seeded(seed), start, end)?;
    Ok((k, y))
}

/// Vertex shift presentation of a one-dimensional SFT by words of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexShift {
    pub graph: DirectedGraph,
    pub words: Vec<Vec<Symbol>>,
}

pub fn to_vertex_shift(spec: &SftSpec, n: usize) -> Result<VertexShift, OnedimError> {
    if spec.dim != 1 {
        return Err(OnedimError::NotOneDimensional);
    }
    let need = spec.max_span() as usize;
    if n < need || n == 0 {
        return Err(OnedimError::NTooSmall { n, need: need.max(1) });
    }
    let k = spec.alphabet_size();
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > 1 << 22 {
        return Err(OnedimError::TooLarge(count));
    }
    let mut words = Vec::new();
    for mut code in 0..count as u64 {
        let mut w = vec![0 as Symbol; n];
        for i in (0..n).rev() {
            w[i] = (code % k as u64) as Symbol;
            code /= k as u64;
        }
        if locally_admissible(&Pattern::word(0, &w), spec).unwrap_or(false) {
            words.push(w);
        }
    }
    let index: BTreeMap<Vec<Symbol>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let mut graph = DirectedGraph::new(words.len());
    for (i, w) in words.iter().enumerate() {
        for b in 0..k as Symbol {
            let mut next = w[1..].to_vec();
            next.push(b);
            if let Some(&j) = index.get(&next) {
                let mut full = w.clone();
                full.push(b);
                if locally_admissible(&Pattern::word(0, &full), spec).unwrap_or(false) {
                    graph.add_edge(i, j);
                }
            }
        }
    }
    Ok(VertexShift { graph, words })
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph, OnedimError> {
    let err = |line, msg: String| OnedimError::Parse { line, msg };
    let mut g: Option<DirectedGraph> = None;
    for (ln, l) in content_lines(text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        match t.as_slice() {
            ["vertices", n] => {
                if g.is_some() {
                    return Err(err(ln, "duplicate `vertices` line".into()));
                }
                let n: usize = n.parse().map_err(|_| err(ln, format!("bad count `{n}`")))?;
                g = Some(DirectedGraph::new(n));
            }
            ["edge", u, v] => {
                let gr = g.as_mut().ok_or_else(|| err(ln, "`edge` before `vertices`".into()))?;
                let u: usize = u.parse().map_err(|_| err(ln, format!("bad vertex `{u}`")))?;
                let v: usize = v.parse().map_err(|_| err(ln, format!("bad vertex `{v}`")))?;
                if u >= gr.n || v >= gr.n {
                    return Err(err(ln, format!("edge {u} {v} out of range")));
                }
                gr.add_edge(u, v);
            }
            _ => return Err(err(ln, format!("unrecognised line `{l}`"))),
        }
    }
    g.ok_or_else(|| err(0, "missing `vertices` line".into()))
}

pub fn write_graph(g: &DirectedGraph) -> String {
    let mut out = format!("vertices {}\n", g.n);
    for (u, v) in g.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}
