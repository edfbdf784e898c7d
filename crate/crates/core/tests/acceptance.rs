//! End-to-end acceptance checks. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::time::Instant;

use locgen_core::catalog::{self, corner_tiles, even_tiles, BLACK, H_LEFT, H_RIGHT, V_BOTTOM, V_TOP, WHITE};
use locgen_core::classify::{self, Verdict};
use locgen_core::generate::{
    corners, sturmian, wires, wires_invert, wires_rule, BitSource, ConfigDescriptor, Phase, Real, SturmianConvention,
};
use locgen_core::lattice::locally_admissible;
use locgen_core::onedim::{
    condensation, enumerate_block_descriptors, generate_walk, power_graph, to_vertex_shift, transitive_power,
    walk_from_seed, DirectedGraph, OnedimError, SymbolStream,
};
use locgen_core::recode::{
    higher_power_sft, input_window, intertwine, narrow_image_census, narrowness_radius, unintertwine, BlockVector,
    FiniteFunction,
};
use locgen_core::search::DEFAULT_BUDGET;
use locgen_core::verify::{
    certify, independent, prove_invalid, verify_ramification, weak_mixing_offset, Certificate, GraftOutcome,
    IndependenceOptions, RamificationVerdict, RamificationWitness, VerifyOptions, WeakMix,
};
use locgen_core::{Alphabet, Pattern, Point, Region, SftSpec, Symbol, WangTile};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn fail(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

/// Edge matching checked directly on tile colours.
fn edges_match(p: &Pattern, tiles: &[WangTile]) -> bool {
    p.iter().all(|(q, s)| {
        let t = tiles[s as usize];
        let right = p.get(q + Point::new(1, 0)).map_or(true, |r| tiles[r as usize].w == t.e);
        let up = p.get(q + Point::new(0, 1)).map_or(true, |u| tiles[u as usize].s == t.n);
        right && up
    })
}

fn c1_wires() -> Outcome {
    let tiles = even_tiles();
    let window = Region::rect(2, 0, 63, 0, 63);
    for seed in 0..100 {
        let src = BitSource::Seeded(seed);
        let pat = wires(&src, &window);
        ensure!(pat.len() == 64 * 64, "seed {seed}: window not filled");
        ensure!(edges_match(&pat, &tiles), "seed {seed}: edge mismatch");
        let odd = pat.iter().find(|(_, s)| {
            let t = tiles[*s as usize];
            (t.n + t.e + t.s + t.w) % 2 == 1
        });
        ensure!(odd.is_none(), "seed {seed}: odd tile at {:?}", odd);

        let anchor = src.bit(Point::ORIGIN);
        let bits = wires_invert(&pat, &tiles, anchor).map_err(fail)?;
        ensure!(bits.len() == 65 * 65, "seed {seed}: {} corner bits", bits.len());
        ensure!(
            bits.iter().all(|(p, b)| (b == 1) == src.bit(p)),
            "seed {seed}: bits differ"
        );
        let flipped = wires_invert(&pat, &tiles, !anchor).map_err(fail)?;
        ensure!(
            flipped.iter().all(|(p, b)| (b == 1) != src.bit(p)),
            "seed {seed}: not the complement"
        );
        for b in [&bits, &flipped] {
            ensure!(
                wires(&BitSource::from_pattern(b, false), &window) == pat,
                "seed {seed}: round trip differs"
            );
        }
    }
    Ok("100 seeds, 64x64, admissible, even, inverted up to complement".into())
}

fn c2_corners() -> Outcome {
    let tiles = corner_tiles();
    let window = Region::rect(2, 0, 1, 0, 1);
    let cells: Vec<Point> = window.iter().collect();
    let mut brute = BTreeSet::new();
    for code in 0..4u32.pow(4) {
        let p = Pattern::from_cells(2, cells.iter().enumerate().map(|(i, &q)| (q, (code >> (2 * i)) & 3))).unwrap();
        if edges_match(&p, &tiles) {
            brute.insert(p);
        }
    }
    let bit_source = |v: u32| BitSource::Explicit {
        bits: (0..2).map(|i| (Point::d1(i), (v >> i) & 1 == 1)).collect(),
        default: false,
    };
    let mut image = BTreeSet::new();
    for k in 0..2 {
        for l in 0..2 {
            for a in 0..4 {
                for b in 0..4 {
                    image.insert(corners(k, l, &bit_source(a), &bit_source(b), &window));
                }
            }
        }
    }
    ensure!(!brute.is_empty(), "no admissible 2x2 patterns");
    ensure!(
        image == brute,
        "image {} patterns, admissible {}",
        image.len(),
        brute.len()
    );
    Ok(format!("image = admissible = {} patterns", brute.len()))
}

fn triangle_witness(r: i64) -> RamificationWitness {
    let v = Point::new(r + 2, 1);
    RamificationWitness {
        x: ConfigDescriptor::TriangleRamification { r, v },
        f: Region::q(0, 2),
        r,
        v,
        u: Point::new(0, -1),
        beta: 1,
        k: 2,
    }
}

fn all_refuted(cells: &[(i64, i64, GraftOutcome)]) -> bool {
    cells.iter().all(|(_, _, o)| matches!(o, GraftOutcome::Refuted { .. }))
}

fn c3_triangles() -> Outcome {
    let spec = catalog::triangles();
    let opts = VerifyOptions {
        max_n: 6,
        period_bound: 8,
        budget: DEFAULT_BUDGET,
    };
    for r in 1..=4 {
        let column = Pattern::from_cells(2, (0..=r).map(|k| (Point::new(-r, k), BLACK))).unwrap();
        let with = |s: Symbol| {
            let mut p = column.clone();
            p.set(Point::ORIGIN, s);
            p
        };
        match prove_invalid(&with(WHITE), &spec, r + 2, DEFAULT_BUDGET).map_err(fail)? {
            Certificate::InvalidWindow { window } => {
                let q = Region::q(r + 2, 2);
                ensure!(
                    window.iter().all(|p| q.contains(p)),
                    "r={r}: window outside Q_{}",
                    r + 2
                );
            }
            other => return Err(format!("r={r}: column with white cell gave {}", other.tag())),
        }
        let ok = certify(&with(BLACK), &spec, &opts).map_err(fail)?;
        ensure!(ok.proves_valid(), "r={r}: column with black cell gave {}", ok.tag());
    }
    for r in 0..=3 {
        let rep = verify_ramification(&triangle_witness(r), &spec, None).map_err(fail)?;
        ensure!(rep.verdict == RamificationVerdict::Pass, "r={r}: {:?}", rep.verdict);
        ensure!(all_refuted(&rep.cells), "r={r}: a graft was not refuted");
    }
    let cb = RamificationWitness {
        x: ConfigDescriptor::CheckerboardPhase(0),
        f: Region::q(0, 2),
        r: 1,
        v: Point::new(3, 1),
        u: Point::new(1, 0),
        beta: 1,
        k: 2,
    };
    let rep = verify_ramification(&cb, &catalog::checkerboard(), None).map_err(fail)?;
    ensure!(
        matches!(rep.verdict, RamificationVerdict::Fail { mu: 2, .. }),
        "checkerboard: {:?}",
        rep.verdict
    );
    let mu1: Vec<_> = rep.cells.iter().filter(|c| c.1 == 1).cloned().collect();
    ensure!(all_refuted(&mu1), "checkerboard: a mu=1 graft succeeded");
    Ok(format!(
        "correlation r=1..4, ramification r=0..3 PASS, checkerboard {:?}",
        rep.verdict
    ))
}

fn c4_dominoes() -> Outcome {
    let spec = catalog::dominoes();
    for r in 0..=2 {
        let v = Point::new(r, r + 2);
        let w = RamificationWitness {
            x: ConfigDescriptor::DominoRamification { r, v },
            f: Region::q(0, 2),
            r,
            v,
            u: Point::new(-1, 1),
            beta: 1,
            k: 2,
        };
        let rep = verify_ramification(&w, &spec, None).map_err(fail)?;
        ensure!(rep.verdict == RamificationVerdict::Pass, "r={r}: {:?}", rep.verdict);
        ensure!(all_refuted(&rep.cells), "r={r}: a graft was not refuted");
    }

    let d1 = Region::diamond(1);
    let ind = independent(
        &d1,
        &d1.translate(Point::new(5, 0)),
        &spec,
        &IndependenceOptions::default(),
    )
    .map_err(fail)?;
    ensure!(ind.tag() == "INDEPENDENT", "D_1 vs (5,0)+D_1: {}", ind.tag());

    // A row of vertical halves, bottom halves at both ends, forces the tip above its centre.
    let opts = VerifyOptions {
        max_n: 6,
        period_bound: 10,
        budget: DEFAULT_BUDGET,
    };
    for k in 1..=3i64 {
        let row: Vec<(Point, Symbol)> = (-k..=k)
            .map(|i| (Point::new(i, 0), if (i + k) % 2 == 0 { V_BOTTOM } else { V_TOP }))
            .collect();
        let tip = Point::new(0, k + 1);
        for t in [V_TOP, V_BOTTOM, H_LEFT, H_RIGHT] {
            let mut p = Pattern::from_cells(2, row.iter().copied()).unwrap();
            p.set(tip, t);
            if t == V_TOP {
                let c = certify(&p, &spec, &opts).map_err(fail)?;
                ensure!(c.proves_valid(), "H_{k} with top-half tip: {}", c.tag());
            } else {
                let c = prove_invalid(&p, &spec, k + 2, DEFAULT_BUDGET).map_err(fail)?;
                ensure!(c.proves_invalid(), "H_{k} with tip {t}: {}", c.tag());
            }
        }
    }
    Ok("ramification r=0..2 PASS, D_1 independent at distance 5, H_1..H_3 wrong tips invalid".into())
}

fn c5_weak_mixing() -> Outcome {
    let cands: Vec<Point> = (1..=6).map(|j| Point::new(0, j)).collect();
    let opts = IndependenceOptions::default();
    let mut found = Vec::new();
    for m in 1..=2 {
        let s = Region::s(m, 2);
        match weak_mixing_offset(&catalog::stacks(), &s, &cands, &opts).map_err(fail)? {
            WeakMix::Found { offset } => {
                ensure!(offset == Point::new(0, m + 1), "stacks m={m}: offset {:?}", offset);
            }
            other => return Err(format!("stacks m={m}: {other:?}")),
        }
        match weak_mixing_offset(&catalog::x_zbar(2), &s, &cands, &opts).map_err(fail)? {
            WeakMix::Found { offset } => {
                let rows: BTreeSet<i64> = s.rows().collect();
                let moved = s.translate(offset);
                ensure!(
                    moved.rows().all(|y| !rows.contains(&y)),
                    "xzbar m={m}: offset {:?} shares a row",
                    offset
                );
                found.push(offset.y);
            }
            other => return Err(format!("xzbar m={m}: {other:?}")),
        }
    }
    Ok(format!("stacks (0,2),(0,3); xzbar (0,{}),(0,{})", found[0], found[1]))
}

fn graph_from_mask(n: usize, mask: u32) -> DirectedGraph {
    let mut g = DirectedGraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if mask >> (u * n + v) & 1 == 1 {
                g.add_edge(u, v);
            }
        }
    }
    g
}

type Matrix = Vec<Vec<bool>>;

fn matrix(g: &DirectedGraph) -> Matrix {
    let n = g.num_vertices();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|m| a[i][m] && b[m][j])).collect())
        .collect()
}

fn transitive(a: &Matrix) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|m| !(a[i][m] && a[m][j]) || a[i][j])))
}

fn golden_words(len: usize) -> BTreeSet<Vec<Symbol>> {
    (0..1u32 << len)
        .filter(|w| w & (w >> 1) == 0)
        .map(|w| (0..len).map(|i| w >> i & 1).collect())
        .collect()
}

fn c6_onedim() -> Outcome {
    let mut graphs = 0;
    for n in 1..=4usize {
        for mask in 0..1u32 << (n * n) {
            let g = graph_from_mask(n, mask);
            let k = transitive_power(&g, None).map_err(|e| format!("n={n} mask={mask:#x}: {e}"))?;
            let base = matrix(&g);
            let mut p = base.clone();
            for j in 1..k {
                ensure!(
                    !transitive(&p),
                    "n={n} mask={mask:#x}: G^{j} already transitive, reported {k}"
                );
                p = mul(&p, &base);
            }
            ensure!(transitive(&p), "n={n} mask={mask:#x}: G^{k} not transitive");
            ensure!(matrix(&power_graph(&g, k)) == p, "n={n} mask={mask:#x}: power mismatch");
            graphs += 1;
        }
    }
    let two = graph_from_mask(2, 0b0110);
    ensure!(
        transitive_power(&two, None) == Ok(2),
        "2-cycle: {:?}",
        transitive_power(&two, None)
    );

    let mut walks = 0;
    for n in 1..=4usize {
        let step = if n == 4 { 37 } else { 1 };
        for mask in (0..1u32 << (n * n)).step_by(step) {
            let g = graph_from_mask(n, mask);
            let base = matrix(&g);
            let mut p = base.clone();
            for _ in 1..n {
                p = mul(&p, &base);
            }
            let has_cycle = p.iter().flatten().any(|&b| b);
            for seed in 0..3 {
                match walk_from_seed(&g, seed, -7, 12) {
                    Ok((_, y)) => {
                        ensure!(has_cycle, "mask {mask:#x}: walk on an acyclic graph");
                        ensure!(y.len() == 20, "mask {mask:#x}: walk length {}", y.len());
                        ensure!(
                            y.windows(2).all(|w| g.has_edge(w[0], w[1])),
                            "mask {mask:#x}: non-edge emitted"
                        );
                        walks += 1;
                    }
                    Err(OnedimError::EmptyLanguage) => ensure!(!has_cycle, "mask {mask:#x}: language reported empty"),
                    Err(e) => return Err(format!("n={n} mask={mask:#x}: {e}")),
                }
            }
        }
    }

    // Golden mean shift through its vertex shift on words of length 2.
    let vs = to_vertex_shift(&catalog::golden_mean(), 2).map_err(fail)?;
    let g = &vs.graph;
    let n = g.num_vertices() as u64;
    let k = transitive_power(g, None).map_err(fail)?;
    let cond = condensation(&power_graph(g, k)).map_err(fail)?;
    let kk = k as i64;
    for len in 1..=6usize {
        let steps = len.saturating_sub(1).max(1);
        let end = steps as i64 - 1;
        let q1 = end / kk;
        let descs = enumerate_block_descriptors(&cond.dag, 0, q1 + 1, cond.members.len());
        let firsts = n.pow(q1 as u32 + 2);
        let per_block = n.pow(k as u32);
        let seconds = per_block.pow(q1 as u32 + 1);
        let mut produced = BTreeSet::new();
        for d in &descs {
            for fc in 0..firsts {
                let first: BTreeMap<i64, u64> = (0..=q1 + 1).map(|m| (m, fc / n.pow(m as u32) % n)).collect();
                for sc in 0..seconds {
                    let second: BTreeMap<i64, u64> = (0..=q1)
                        .map(|m| (m, sc / per_block.pow(m as u32) % per_block))
                        .collect();
                    let stream = SymbolStream::Explicit {
                        first: first.clone(),
                        second,
                    };
                    let y = generate_walk(g, k, &cond, d, &stream, 0, end).map_err(fail)?;
                    let mut word = vs.words[y[0]].clone();
                    for &v in &y[1..] {
                        word.push(*vs.words[v].last().unwrap());
                    }
                    word.truncate(len);
                    produced.insert(word);
                }
            }
        }
        let expected = golden_words(len);
        ensure!(
            produced == expected,
            "length {len}: produced {} of {} words",
            produced.len(),
            expected.len()
        );
    }
    Ok(format!(
        "{graphs} graphs, {walks} walks, golden mean surjective up to length 6 (k={k})"
    ))
}

fn random_spec(rng: &mut StdRng, idx: usize) -> SftSpec {
    let k = rng.gen_range(2..=3usize);
    let count = rng.gen_range(1..=3);
    let forbidden = (0..count)
        .map(|_| {
            let len = rng.gen_range(2..=3);
            let syms: Vec<Symbol> = (0..len).map(|_| rng.gen_range(0..k as Symbol)).collect();
            Pattern::word(0, &syms)
        })
        .collect();
    SftSpec::new(&format!("random{idx}"), 1, Alphabet::numeric(k), forbidden).unwrap()
}

fn avoids(word: &[Symbol], forbidden: &[Vec<Symbol>]) -> bool {
    forbidden
        .iter()
        .all(|f| f.len() > word.len() || word.windows(f.len()).all(|w| w != f.as_slice()))
}

fn all_words(k: usize, len: usize) -> impl Iterator<Item = Vec<Symbol>> {
    (0..k.pow(len as u32)).map(move |mut c| {
        (0..len)
            .map(|_| {
                let d = (c % k) as Symbol;
                c /= k;
                d
            })
            .collect()
    })
}

fn c7_recode() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for idx in 0..20 {
        let spec = random_spec(&mut rng, idx);
        let k = spec.alphabet_size();
        let forbidden: Vec<Vec<Symbol>> = spec
            .forbidden
            .iter()
            .map(|f| f.iter().map(|(_, s)| s).collect())
            .collect();
        for a in 1..=3usize {
            let hp = higher_power_sft(&spec, &BlockVector::new(&[a as i64]).unwrap()).map_err(fail)?;
            let big = hp.alphabet_size();
            ensure!(big == k.pow(a as u32), "spec {idx}, a={a}: {big} block symbols");
            for m in 1..=8 / a {
                let mut decoded = BTreeSet::new();
                for sw in all_words(big, m) {
                    let pat = Pattern::word(0, &sw);
                    if locally_admissible(&pat, &hp).map_err(fail)? {
                        let w: Vec<Symbol> = sw
                            .iter()
                            .flat_map(|&s| (0..a).map(move |j| (s as usize / k.pow(j as u32) % k) as Symbol))
                            .collect();
                        decoded.insert(w);
                    }
                }
                let expected: BTreeSet<Vec<Symbol>> = all_words(k, a * m).filter(|w| avoids(w, &forbidden)).collect();
                ensure!(decoded == expected, "spec {idx}, a={a}, {m} blocks: languages differ");
            }
        }
    }

    for trial in 0..100 {
        let two_d = trial % 2 == 1;
        let ax = rng.gen_range(1..=3i64);
        let ay = rng.gen_range(1..=3i64);
        let (a, dim) = if two_d {
            (BlockVector::new(&[ax, ay]).unwrap(), 2)
        } else {
            (BlockVector::new(&[ax]).unwrap(), 1)
        };
        let (bw, bh) = (rng.gen_range(1..=4i64), if two_d { rng.gen_range(1..=3i64) } else { 1 });
        let (qx, qy) = (
            rng.gen_range(-3..=3i64),
            if two_d { rng.gen_range(-3..=3i64) } else { 0 },
        );
        let lo = a.scale(Point::new(qx, qy));
        let hi = a.scale(Point::new(qx + bw, qy + bh)) - Point::new(1, if two_d { 1 } else { 0 });
        let window = Region::rect(dim, lo.x, hi.x, lo.y, hi.y);
        let pi = Pattern::from_cells(dim, window.iter().map(|p| (p, rng.gen_range(0..4)))).unwrap();

        let parts = unintertwine(&pi, &a).map_err(fail)?;
        let offsets = a.cells();
        ensure!(parts.len() == offsets.len(), "trial {trial}: {} parts", parts.len());
        for (part, &r) in parts.iter().zip(&offsets) {
            for (q, s) in part.iter() {
                ensure!(
                    pi.get(a.scale(q) + r) == Some(s),
                    "trial {trial}: part {:?} at {:?}",
                    r,
                    q
                );
            }
            ensure!(part.len() * offsets.len() == pi.len(), "trial {trial}: part size");
        }
        ensure!(
            intertwine(&parts, &a, &window).map_err(fail)? == pi,
            "trial {trial}: not inverse"
        );

        let p = Point::new(rng.gen_range(-3..=3), if two_d { rng.gen_range(-3..=3) } else { 0 });
        let shifted = unintertwine(&pi.shift(a.scale(p)), &a).map_err(fail)?;
        for (s, t) in shifted.iter().zip(&parts) {
            ensure!(*s == t.shift(p), "trial {trial}: shift relation fails for {:?}", p);
        }
    }
    Ok("20 random specs x a=1..3 equal up to length 8; 100 intertwine round trips".into())
}

fn c8_narrow() -> Outcome {
    let ins: Vec<Point> = Region::rect(2, 0, 2, 0, 2).iter().collect();
    let outs: Vec<Point> = Region::rect(2, 0, 1, 0, 1).iter().collect();
    let f = FiniteFunction::from_rule(&wires_rule(), 2, ins, outs.clone()).map_err(fail)?;
    for (i, &q) in outs.iter().enumerate() {
        let w = input_window(&f, i).map_err(fail)?;
        let corners = Region::rect(2, q.x, q.x + 1, q.y, q.y + 1);
        ensure!(w == corners, "output {:?}: window {:?}", q, w.points());
    }
    ensure!(narrowness_radius(&f).map_err(fail)? == 4, "wires radius");

    // Every function from 3 binary inputs to nondecreasing 0/1 words of length 6.
    let (support, len) = (3u32, 6u32);
    let words: Vec<u8> = (0..=len).map(|z| ((1u16 << len) - (1u16 << z)) as u8).collect();
    let base = words.len() as u64;
    let inputs = 1usize << support;
    let mut max_image: BTreeMap<u32, u32> = BTreeMap::new();
    let mut total = 0u64;
    for mut code in 0..base.pow(inputs as u32) {
        let mut table = [0u8; 8];
        for v in table.iter_mut() {
            *v = words[(code % base) as usize];
            code /= base;
        }
        let mut radius = 0;
        for j in 0..len {
            let window = (0..support)
                .filter(|&e| (0..inputs).any(|x| (table[x] ^ table[x ^ (1 << e)]) >> j & 1 == 1))
                .count() as u32;
            radius = radius.max(window);
        }
        let image = table.iter().collect::<BTreeSet<_>>().len() as u32;
        ensure!(
            image <= 1 << (radius * (radius + 1) / 2),
            "image {image} exceeds bound at radius {radius}"
        );
        let e = max_image.entry(radius).or_default();
        *e = (*e).max(image);
        total += 1;
    }
    let census = narrow_image_census(support, len);
    ensure!(
        census.violations == 0,
        "library census reports {} violations",
        census.violations
    );
    ensure!(
        census.functions == total,
        "library census saw {} functions, expected {total}",
        census.functions
    );
    for (&r, &m) in &max_image {
        ensure!(
            census.max_image.get(r as usize) == Some(&m),
            "radius {r}: max image {m} vs {:?}",
            census.max_image
        );
    }
    Ok(format!(
        "wires windows are corners; {total} functions within bound, max image by radius {:?}",
        max_image
    ))
}

fn c9_census() -> Outcome {
    let group = classify::auto_group().ok_or("no symmetry group with 36 orbits")?;
    let reports = classify::classify_even(&group, 6, 6).map_err(fail)?;
    let t = classify::totals(&reports);
    ensure!(t.classes == 36, "{} classes", t.classes);
    ensure!(t.unknown == 0, "{} unknown verdicts", t.unknown);
    ensure!(
        (t.nonminimal, t.empty, t.unused, t.remaining) == (8, 2, 6, 28),
        "totals {:?}",
        t
    );
    ensure!(
        reports.iter().map(|r| r.orbit_size).sum::<usize>() == 255,
        "orbits do not cover 255 tilesets"
    );
    for r in &reports {
        let mask = r.representative.bits();
        match &r.verdict {
            Verdict::Empty(c) => ensure!(c.proves_invalid(), "{mask}: empty without refutation"),
            Verdict::Minimal(u) | Verdict::UnusedTiles(u) => {
                ensure!(u.unknown.is_empty(), "{mask}: unresolved tiles");
                ensure!(
                    u.usable.iter().all(|(_, c)| c.proves_valid()),
                    "{mask}: usable tile without witness"
                );
                ensure!(
                    u.unusable.iter().all(|(_, c)| c.proves_invalid()),
                    "{mask}: unusable tile without refutation"
                );
                let minimal = matches!(r.verdict, Verdict::Minimal(_));
                ensure!(minimal == u.unusable.is_empty(), "{mask}: verdict disagrees with usage");
            }
            Verdict::Unknown(why) => return Err(format!("{mask}: unknown ({why})")),
        }
    }
    Ok(format!(
        "group {} order {}: classes=36 nonminimal=8 (empty=2 unused=6) remaining=28",
        group.name(),
        group.order()
    ))
}

fn c10_sturmian() -> Outcome {
    let cases = [
        ("silver", Real::silver(256), 2f64.sqrt() - 1.0),
        ("golden", Real::golden(256), (5f64.sqrt() - 1.0) / 2.0),
    ];
    let mut freqs = Vec::new();
    for (name, alpha, value) in &cases {
        let w = sturmian(alpha, &Phase::zero(), 0, 99_999, SturmianConvention::Lower).map_err(fail)?;
        ensure!(w.len() == 100_000, "{name}: {} symbols", w.len());
        let freq = w.iter().filter(|&&s| s == 1).count() as f64 / 1e5;
        ensure!((freq - value).abs() <= 1e-2, "{name}: frequency {freq} vs {value}");
        freqs.push(freq);

        // With x = c + m*alpha the only integer crossing in view is at n = -m.
        for m in -5..=5i64 {
            for c in -2..=2i64 {
                let ph = Phase::affine(c, m);
                let lower = sturmian(alpha, &ph, -20, 20, SturmianConvention::Lower).map_err(fail)?;
                let upper = sturmian(alpha, &ph, -20, 20, SturmianConvention::Upper).map_err(fail)?;
                let diff: Vec<i64> = (0..lower.len())
                    .filter(|&i| lower[i] != upper[i])
                    .map(|i| i as i64 - 20)
                    .collect();
                ensure!(diff == vec![-m - 1, -m], "{name} x={c}+{m}a: differences at {diff:?}");
                let at = (-m - 1 + 20) as usize;
                ensure!(
                    lower[at..at + 2] == [1, 0] && upper[at..at + 2] == [0, 1],
                    "{name} x={c}+{m}a: not 10 vs 01"
                );
            }
        }
    }
    Ok(format!(
        "frequencies {:.5} and {:.5}; single 10/01 swap at each crossing",
        freqs[0], freqs[1]
    ))
}

fn main() {
    let checks: Vec<(&str, fn() -> Outcome)> = vec![
        ("wires correctness", c1_wires),
        ("corners surjectivity", c2_corners),
        ("triangles obstructions", c3_triangles),
        ("domino suite", c4_dominoes),
        ("weak-mixing offsets", c5_weak_mixing),
        ("1D pipeline", c6_onedim),
        ("recoding oracles", c7_recode),
        ("narrow functions", c8_narrow),
        ("classification census", c9_census),
        ("sturmian generator", c10_sturmian),
    ];
    let results: Vec<(Outcome, f64)> = checks
        .par_iter()
        .map(|(_, f)| {
            let t = Instant::now();
            let r = panic::catch_unwind(f).unwrap_or_else(|e| {
                Err(e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into()))
            });
            (r, t.elapsed().as_secs_f64())
        })
        .collect();
    let mut failed = 0;
    for (i, ((name, _), (r, secs))) in checks.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
