use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use locgen_core::catalog;
use locgen_core::classify::{self, Generator as SymGen, SymmetryGroup, GENERATORS};
use locgen_core::formats::{parse_pattern, parse_tileset, write_pattern};
use locgen_core::generate::{
    corners, descriptor_eval, mix64, render_pgm, render_ppm, render_text, separation_map, sturmian, wires, wires_rule,
    BitSource, ConfigDescriptor, GenerateError, LocalRule, SturmianConvention,
};
use locgen_core::onedim::{self, DirectedGraph, OnedimError};
use locgen_core::recode::{self, BlockVector, FiniteFunction};
use locgen_core::search::DEFAULT_BUDGET;
use locgen_core::verify::{
    can_graft, certify, independent, verify_ramification, weak_mixing_offset, GraftOutcome, Independence,
    IndependenceOptions, RamificationWitness, VerifyOptions, WeakMix,
};
use locgen_core::{lower_wang, Alphabet, Pattern, Point, Region, SftSpec};

use crate::args::{parse_alpha, parse_bits, parse_ints, parse_point, parse_points, parse_region, parse_window, phase};
use crate::{
    ClassifyArgs, Command, Convention, GenArgs, Generator, GraphCmd, Limits, OutFormat, RecodeCmd, RenderArgs,
    RenderFormat, SpecSource, TableFormat, VerifyKind, WitnessArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Exit code plus a one-line verdict for the manifest.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub summary: String,
}

impl Outcome {
    pub fn new(code: i32, summary: impl Into<String>) -> Self {
        Outcome {
            code,
            summary: summary.into(),
        }
    }
}

type Res = Result<Outcome, CliError>;

pub fn run(cmd: &Command) -> Res {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Verify { kind } => verify(kind),
        Command::Graph1d { cmd } => graph1d(cmd),
        Command::Recode { cmd } => recode_cmd(cmd),
        Command::Classify(a) => classify_cmd(a),
        Command::Render(a) => render(a),
    }
}

pub fn manifest(argv: &[String], cmd: &Command, out: &Outcome, wall: Duration) -> String {
    let seed = match cmd {
        Command::Gen(a) => a.seed.to_string(),
        Command::Graph1d {
            cmd: GraphCmd::Walk { seed, .. },
        } => seed.to_string(),
        _ => "none".into(),
    };
    let limits = |l: &Limits| format!("max_n={} period_bound={} budget={}", l.max_n, l.period_bound, l.budget);
    let budgets = match cmd {
        Command::Verify { kind } => match kind {
            VerifyKind::Validity { limits: l, .. }
            | VerifyKind::Independence { limits: l, .. }
            | VerifyKind::Weakmix { limits: l, .. } => limits(l),
            _ => format!("budget={DEFAULT_BUDGET}"),
        },
        Command::Classify(a) => format!("window_n={} period_bound={}", a.window_n, a.period_bound),
        _ => "none".into(),
    };
    format!(
        "tool locgen {}\ncommand {}\nseed {seed}\nbudgets {budgets}\nwall_ms {}\nexit {}\nverdict {}\n",
        env!("CARGO_PKG_VERSION"),
        argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" "),
        wall.as_millis(),
        out.code,
        out.summary
    )
}

fn emit(bytes: &[u8], output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, bytes).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes).and_then(|_| s.flush()).map_err(input)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_pattern(path: &Path) -> Result<Pattern, CliError> {
    parse_pattern(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<DirectedGraph, CliError> {
    onedim::parse_graph(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn named_spec(name: &str) -> Result<SftSpec, CliError> {
    catalog::by_name(name).ok_or_else(|| {
        usage(format!(
            "unknown subshift `{name}` (known: {})",
            catalog::NAMES.join(", ")
        ))
    })
}

fn load_spec(src: &SpecSource) -> Result<SftSpec, CliError> {
    match (&src.spec, &src.tiles) {
        (Some(name), _) => named_spec(name),
        (None, Some(path)) => {
            let tiles = parse_tileset(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
            if tiles.is_empty() {
                return Err(input(format!("{}: no tiles", path.display())));
            }
            Ok(lower_wang("tiles", &tiles))
        }
        (None, None) => Err(usage("one of --spec or --tiles is required")),
    }
}

fn point_arg(s: &Option<String>, default: Point) -> Result<Point, CliError> {
    s.as_deref()
        .map(parse_point)
        .transpose()
        .map_err(usage)
        .map(|p| p.unwrap_or(default))
}

fn gen_error(e: GenerateError) -> CliError {
    match e {
        GenerateError::IllFormedDescriptor(_) => usage(e.to_string()),
        other => input(other),
    }
}

fn gen(a: &GenArgs) -> Res {
    let one_d = matches!(a.generator, Generator::Sturmian | Generator::Separation);
    let default = if one_d { "0..63" } else { "16x16" };
    let window = parse_window(a.window.as_deref().unwrap_or(default)).map_err(usage)?;
    if a.generator != Generator::Constant && one_d != (window.dim() == 1) {
        return Err(usage(format!(
            "generator {:?} needs a {} window",
            a.generator,
            if one_d { "1D a..b" } else { "2D WxH" }
        )));
    }
    if a.k > 1 || a.l > 1 {
        return Err(usage("--k and --l are bits"));
    }
    let (lo, hi) = window.bbox().expect("nonempty window");
    let descriptor = |d: ConfigDescriptor, spec: SftSpec| -> Result<(Pattern, Alphabet), CliError> {
        d.validate().map_err(gen_error)?;
        Ok((descriptor_eval(&d, &window).map_err(gen_error)?, spec.alphabet))
    };
    let (pat, alphabet) = match a.generator {
        Generator::Wires => (wires(&BitSource::Seeded(a.seed), &window), catalog::wires().alphabet),
        Generator::Corners => {
            let (ra, rb) = (BitSource::Seeded(a.seed), BitSource::Seeded(mix64(a.seed)));
            (corners(a.k, a.l, &ra, &rb, &window), catalog::corners().alphabet)
        }
        Generator::Triangles => {
            let v = point_arg(&a.v, Point::new(a.r + 2, 1))?;
            descriptor(
                ConfigDescriptor::TriangleRamification { r: a.r, v },
                catalog::triangles(),
            )?
        }
        Generator::Dominoes => {
            let v = point_arg(&a.v, Point::new(a.r, a.r + 2))?;
            descriptor(ConfigDescriptor::DominoRamification { r: a.r, v }, catalog::dominoes())?
        }
        Generator::Checkerboard => {
            let parity: u8 = a
                .phase
                .parse()
                .ok()
                .filter(|p| *p < 2)
                .ok_or_else(|| usage("checkerboard --phase is 0 or 1"))?;
            descriptor(ConfigDescriptor::CheckerboardPhase(parity), catalog::checkerboard())?
        }
        Generator::Constant => {
            let spec = load_spec(&a.source)?;
            if spec.dim != window.dim() {
                return Err(usage(format!("subshift `{}` is {}-dimensional", spec.name, spec.dim)));
            }
            if a.symbol as usize >= spec.alphabet_size() {
                return Err(usage(format!("symbol {} outside the alphabet", a.symbol)));
            }
            (Pattern::constant(&window, a.symbol), spec.alphabet)
        }
        Generator::Sturmian => {
            let alpha = parse_alpha(&a.alpha, a.bits).map_err(usage)?;
            let ph = phase(&a.phase, a.alpha_coeff).map_err(usage)?;
            let conv = match a.convention {
                Convention::Lower => SturmianConvention::Lower,
                Convention::Upper => SturmianConvention::Upper,
            };
            match sturmian(&alpha, &ph, lo.x, hi.x, conv) {
                Ok(w) => (word(lo.x, &w), Alphabet::numeric(2)),
                Err(e @ GenerateError::PrecisionInsufficient(_)) => {
                    eprintln!("{e}");
                    return Ok(Outcome::new(2, e.to_string()));
                }
                Err(e) => return Err(gen_error(e)),
            }
        }
        Generator::Separation => {
            let prefix =
                parse_bits(a.prefix.as_deref().ok_or_else(|| usage("--prefix is required"))?).map_err(usage)?;
            let w = separation_map(&prefix, lo.x, hi.x).map_err(gen_error)?;
            (word(lo.x, &w), Alphabet::numeric(2))
        }
    };
    write_rendered(&pat, &alphabet, a.out, a.scale, a.output.as_deref())?;
    Ok(Outcome::new(0, format!("generated {} cells", pat.len())))
}

fn word(start: i64, w: &[u8]) -> Pattern {
    Pattern::word(start, &w.iter().map(|&b| u32::from(b)).collect::<Vec<_>>())
}

fn write_rendered(
    pat: &Pattern,
    alphabet: &Alphabet,
    out: OutFormat,
    scale: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let bytes = match out {
        OutFormat::Text => render_text(pat, alphabet).into_bytes(),
        OutFormat::Pattern => write_pattern(pat).into_bytes(),
        OutFormat::Pgm => render_pgm(pat, alphabet, scale).map_err(|e| usage(e.to_string()))?,
        OutFormat::Ppm => render_ppm(pat, alphabet, scale).map_err(|e| usage(e.to_string()))?,
    };
    emit(&bytes, output)
}

fn verify_options(l: &Limits) -> VerifyOptions {
    VerifyOptions {
        max_n: l.max_n,
        period_bound: l.period_bound,
        budget: l.budget,
    }
}

fn witness(w: &WitnessArgs, k: i64) -> Result<(RamificationWitness, SftSpec), CliError> {
    let r = w.r;
    let (x, v0, u0) = match w.spec.as_str() {
        "triangles" => {
            let v = point_arg(&w.v, Point::new(r + 2, 1))?;
            (ConfigDescriptor::TriangleRamification { r, v }, v, Point::new(0, -1))
        }
        "dominoes" => {
            let v = point_arg(&w.v, Point::new(r, r + 2))?;
            (ConfigDescriptor::DominoRamification { r, v }, v, Point::new(-1, 1))
        }
        "checkerboard" => {
            let v = point_arg(&w.v, Point::new(3, 1))?;
            (ConfigDescriptor::CheckerboardPhase(0), v, Point::new(1, 0))
        }
        other => {
            return Err(usage(format!(
                "no ramification witness for `{other}` (triangles, dominoes, checkerboard)"
            )))
        }
    };
    x.validate().map_err(gen_error)?;
    let u = point_arg(&w.u, u0)?;
    let f = parse_region(&w.f, 2).map_err(usage)?;
    let spec = named_spec(&w.spec)?;
    Ok((
        RamificationWitness {
            x,
            f,
            r,
            v: v0,
            u,
            beta: w.beta,
            k,
        },
        spec,
    ))
}

fn graft_cell(
    w: &RamificationWitness,
    spec: &SftSpec,
    margin: Option<i64>,
    lambda: i64,
    mu: i64,
) -> Result<GraftOutcome, CliError> {
    let target = (lambda * w.beta) * w.v;
    let source = target + (mu * w.beta) * w.u;
    let pi = descriptor_eval(&w.x, &w.f.translate(source))
        .map_err(gen_error)?
        .shift(source);
    can_graft(&w.x, &pi, target, w.r, spec, margin, DEFAULT_BUDGET).map_err(input)
}

fn verify(kind: &VerifyKind) -> Res {
    match kind {
        VerifyKind::Validity {
            source,
            pattern,
            limits,
        } => {
            let spec = load_spec(source)?;
            let pi = load_pattern(pattern)?;
            let c = certify(&pi, &spec, &verify_options(limits)).map_err(input)?;
            emit(c.report(&pi).as_bytes(), None)?;
            Ok(Outcome::new(c.exit_code(), c.tag()))
        }
        VerifyKind::Independence {
            source,
            f,
            g,
            margin,
            limits,
        } => {
            let spec = load_spec(source)?;
            let fr = parse_region(f, spec.dim).map_err(usage)?;
            let gr = parse_region(g, spec.dim).map_err(usage)?;
            if !fr.is_disjoint(&gr) {
                return Err(usage("regions overlap"));
            }
            let opts = IndependenceOptions {
                margin: *margin,
                verify: verify_options(limits),
            };
            let res = independent(&fr, &gr, &spec, &opts).map_err(input)?;
            let mut out = format!("VERDICT {}\n", res.tag());
            match &res {
                Independence::Independent { pairs } => out.push_str(&format!("pairs {pairs}\n")),
                Independence::Correlated { f, g, joint, .. } => {
                    out.push_str("# pattern on F\n");
                    out.push_str(&write_pattern(f));
                    out.push_str("# pattern on G\n");
                    out.push_str(&write_pattern(g));
                    out.push_str("# joint certificate\n");
                    out.push_str(&joint.report(&f.union(g).expect("disjoint")));
                }
                Independence::Unknown { reason } => out.push_str(&format!("reason {reason}\n")),
            }
            emit(out.as_bytes(), None)?;
            Ok(Outcome::new(res.exit_code(), res.tag()))
        }
        VerifyKind::Weakmix {
            source,
            region,
            candidates,
            margin,
            limits,
        } => {
            let spec = load_spec(source)?;
            let r = parse_region(region, spec.dim).map_err(usage)?;
            let cands = match candidates {
                Some(c) => parse_points(c).map_err(usage)?,
                None => (1..=6)
                    .map(|j| if spec.dim == 1 { Point::d1(j) } else { Point::new(0, j) })
                    .collect(),
            };
            let opts = IndependenceOptions {
                margin: *margin,
                verify: verify_options(limits),
            };
            match weak_mixing_offset(&spec, &r, &cands, &opts).map_err(input)? {
                WeakMix::Found { offset } => {
                    emit(
                        format!("VERDICT FOUND\noffset {} {}\n", offset.x, offset.y).as_bytes(),
                        None,
                    )?;
                    Ok(Outcome::new(0, format!("offset {},{}", offset.x, offset.y)))
                }
                WeakMix::NotFound { tried } => {
                    let mut out = String::from("VERDICT NOT_FOUND\n");
                    for (p, tag) in tried {
                        out.push_str(&format!("tried {} {} {tag}\n", p.x, p.y));
                    }
                    emit(out.as_bytes(), None)?;
                    Ok(Outcome::new(2, "no offset certified"))
                }
            }
        }
        VerifyKind::Graft {
            witness: wa,
            lambda,
            mu,
        } => {
            let (w, spec) = witness(wa, 2)?;
            let o = graft_cell(&w, &spec, wa.margin, *lambda, *mu)?;
            let mut out = format!("lambda={lambda} mu={mu} {}\n", o.tag());
            match &o {
                GraftOutcome::Refuted { window } => out.push_str(&format!("window cells={}\n", window.len())),
                GraftOutcome::Confirmed {
                    witness: ConfigDescriptor::Patched { patch, .. },
                } => {
                    out.push_str("# patch\n");
                    out.push_str(&write_pattern(patch));
                }
                _ => {}
            }
            emit(out.as_bytes(), None)?;
            let code = match o {
                GraftOutcome::Refuted { .. } => 0,
                GraftOutcome::Confirmed { .. } => 1,
                GraftOutcome::Unknown => 2,
            };
            Ok(Outcome::new(code, format!("lambda={lambda} mu={mu} {}", o.tag())))
        }
        VerifyKind::Ramification { witness: wa, big_k } => {
            if *big_k < 1 {
                return Err(usage("--K must be at least 1"));
            }
            let (w, spec) = witness(wa, *big_k)?;
            let rep = verify_ramification(&w, &spec, wa.margin).map_err(input)?;
            let text = rep.render();
            emit(text.as_bytes(), None)?;
            Ok(Outcome::new(
                rep.exit_code(),
                text.lines().last().unwrap_or("").to_string(),
            ))
        }
    }
}

fn onedim_error(e: OnedimError) -> CliError {
    match e {
        OnedimError::NTooSmall { .. } | OnedimError::NotOneDimensional => usage(e.to_string()),
        other => input(other),
    }
}

fn graph1d(cmd: &GraphCmd) -> Res {
    match cmd {
        GraphCmd::Power { graph, k } => {
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            let g = load_graph(graph)?;
            emit(onedim::write_graph(&onedim::power_graph(&g, *k)).as_bytes(), None)?;
            Ok(Outcome::new(0, format!("power {k}")))
        }
        GraphCmd::Transitive { graph, cap } => {
            let g = load_graph(graph)?;
            match onedim::transitive_power(&g, *cap) {
                Ok(k) => {
                    let text = format!("k={k}\nconstructive={}\n", onedim::constructive_power(&g));
                    emit(text.as_bytes(), None)?;
                    Ok(Outcome::new(0, format!("k={k}")))
                }
                Err(OnedimError::NotFoundWithinCap(c)) => {
                    emit(format!("k=none cap={c}\n").as_bytes(), None)?;
                    Ok(Outcome::new(2, format!("no transitive power up to {c}")))
                }
                Err(e) => Err(onedim_error(e)),
            }
        }
        GraphCmd::Condense { graph, k } => {
            let g = load_graph(graph)?;
            let k = match k {
                Some(0) => return Err(usage("--k must be at least 1")),
                Some(k) => *k,
                None => onedim::transitive_power(&g, None).map_err(onedim_error)?,
            };
            let c = onedim::condensation(&onedim::power_graph(&g, k)).map_err(|e| usage(format!("G^{k}: {e}")))?;
            let mut out = format!("k={k}\ncomponents={}\n", c.members.len());
            for (i, m) in c.members.iter().enumerate() {
                let ids: Vec<String> = m.iter().map(|v| v.to_string()).collect();
                let lp = if c.dag.has_loop(i) { " loop" } else { "" };
                out.push_str(&format!("component {i}: {}{lp}\n", ids.join(" ")));
            }
            for (a, b) in c.dag.edges() {
                if a != b {
                    out.push_str(&format!("edge {a} {b}\n"));
                }
            }
            emit(out.as_bytes(), None)?;
            Ok(Outcome::new(0, format!("{} components", c.members.len())))
        }
        GraphCmd::Walk { graph, seed, window } => {
            let g = load_graph(graph)?;
            let w = parse_window(window).map_err(usage)?;
            if w.dim() != 1 {
                return Err(usage("walk windows are 1D (a..b)"));
            }
            let (lo, hi) = w.bbox().expect("nonempty");
            match onedim::walk_from_seed(&g, *seed, lo.x, hi.x) {
                Ok((_, y)) => {
                    let ids: Vec<String> = y.iter().map(|v| v.to_string()).collect();
                    emit(format!("{}\n", ids.join(" ")).as_bytes(), None)?;
                    Ok(Outcome::new(0, format!("walk of {} vertices", y.len())))
                }
                Err(OnedimError::EmptyLanguage) => {
                    emit(b"EMPTY_LANGUAGE\n", None)?;
                    Ok(Outcome::new(1, "no bi-infinite walk"))
                }
                Err(e) => Err(onedim_error(e)),
            }
        }
        GraphCmd::VertexShift { spec, n } => {
            let s = named_spec(spec)?;
            let vs = onedim::to_vertex_shift(&s, *n).map_err(onedim_error)?;
            let mut out = String::new();
            for (i, w) in vs.words.iter().enumerate() {
                let labels: Vec<&str> = w.iter().map(|x| s.alphabet.label(*x)).collect();
                out.push_str(&format!("# vertex {i} = {}\n", labels.join("")));
            }
            out.push_str(&onedim::write_graph(&vs.graph));
            emit(out.as_bytes(), None)?;
            Ok(Outcome::new(0, format!("{} vertices", vs.words.len())))
        }
    }
}

fn block_vector(a: &str) -> Result<BlockVector, CliError> {
    BlockVector::new(&parse_ints(a).map_err(usage)?).map_err(|e| usage(e.to_string()))
}

fn recode_cmd(cmd: &RecodeCmd) -> Res {
    match cmd {
        RecodeCmd::Block {
            a,
            pattern,
            alphabet,
            source,
        } => {
            let bv = block_vector(a)?;
            if let Some(path) = pattern {
                let pi = load_pattern(path)?;
                let k = alphabet.unwrap_or_else(|| pi.symbols().into_iter().max().map_or(1, |m| m as usize + 1));
                let b = recode::higher_power_pattern(&pi, &bv, k).map_err(input)?;
                emit(write_pattern(&b).as_bytes(), None)?;
                return Ok(Outcome::new(0, format!("{} blocks", b.len())));
            }
            let spec = load_spec(source)?;
            let hp = recode::higher_power_sft(&spec, &bv).map_err(input)?;
            let mut out = format!("symbols={} forbidden={}\n", hp.alphabet_size(), hp.forbidden.len());
            for f in &hp.forbidden {
                out.push_str("# forbidden\n");
                out.push_str(&write_pattern(f));
            }
            emit(out.as_bytes(), None)?;
            Ok(Outcome::new(0, format!("{} forbidden patterns", hp.forbidden.len())))
        }
        RecodeCmd::Intertwine {
            a,
            window,
            inverse,
            files,
        } => {
            let bv = block_vector(a)?;
            if *inverse {
                let [path] = files.as_slice() else {
                    return Err(usage("--inverse takes exactly one pattern file"));
                };
                let parts = recode::unintertwine(&load_pattern(path)?, &bv).map_err(input)?;
                let mut out = String::new();
                for (i, (p, r)) in parts.iter().zip(bv.cells()).enumerate() {
                    out.push_str(&format!("# part {i} offset {} {}\n", r.x, r.y));
                    out.push_str(&write_pattern(p));
                }
                emit(out.as_bytes(), None)?;
                return Ok(Outcome::new(0, format!("{} parts", parts.len())));
            }
            let w = parse_window(window.as_deref().ok_or_else(|| usage("--window is required"))?).map_err(usage)?;
            let parts: Vec<Pattern> = files.iter().map(|p| load_pattern(p)).collect::<Result<_, _>>()?;
            let out = recode::intertwine(&parts, &bv, &w).map_err(input)?;
            emit(write_pattern(&out).as_bytes(), None)?;
            Ok(Outcome::new(0, format!("{} cells", out.len())))
        }
        RecodeCmd::Window { table, rule } => {
            let f = match (table, rule.as_deref()) {
                (Some(path), _) => recode::parse_truth_table(&read(path)?).map_err(input)?,
                (None, Some("wires")) => {
                    let ins: Vec<Point> = Region::rect(2, 0, 2, 0, 2).iter().collect();
                    let outs: Vec<Point> = Region::rect(2, 0, 1, 0, 1).iter().collect();
                    FiniteFunction::from_rule(&wires_rule(), 2, ins, outs).map_err(input)?
                }
                (None, Some(name @ ("identity" | "constant"))) => {
                    let rule = if name == "identity" {
                        LocalRule::identity(2)
                    } else {
                        LocalRule::constant(2, 0)
                    };
                    FiniteFunction::from_rule(&rule, 1, vec![Point::d1(0), Point::d1(1)], vec![Point::d1(0)])
                        .map_err(input)?
                }
                (None, Some(other)) => return Err(usage(format!("unknown rule `{other}`"))),
                (None, None) => return Err(usage("one of --table or --rule is required")),
            };
            let cell = |p: &Point| {
                if f.dim == 1 {
                    p.x.to_string()
                } else {
                    format!("{},{}", p.x, p.y)
                }
            };
            let mut out = String::new();
            let mut radius = 0;
            for (i, q) in f.outputs.iter().enumerate() {
                let w = recode::input_window(&f, i).map_err(input)?;
                radius = radius.max(w.len());
                let cells: Vec<String> = w.iter().map(|p| cell(&p)).collect();
                out.push_str(&format!(
                    "output {} window {} size={}\n",
                    cell(q),
                    cells.join(";"),
                    w.len()
                ));
            }
            out.push_str(&format!("radius={radius}\n"));
            emit(out.as_bytes(), None)?;
            Ok(Outcome::new(0, format!("radius={radius}")))
        }
    }
}

fn classify_cmd(a: &ClassifyArgs) -> Res {
    let group = match &a.group {
        Some(list) => {
            let mut gens = Vec::new();
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let g: SymGen = *GENERATORS
                    .iter()
                    .find(|g| g.name() == name)
                    .ok_or_else(|| usage(format!("unknown generator `{name}`")))?;
                gens.push(g);
            }
            SymmetryGroup::new(&gens)
        }
        None => match classify::auto_group() {
            Some(g) => g,
            None => {
                eprintln!("no generator subset yields {} classes", classify::EXPECTED_CLASSES);
                return Ok(Outcome::new(2, "no matching group"));
            }
        },
    };
    if a.window_n < 1 || a.period_bound < 1 {
        return Err(usage("budgets must be positive"));
    }
    let reports = classify::classify_even(&group, a.window_n, a.period_bound).map_err(input)?;
    let text = classify::render_report(&group, &reports, a.format == TableFormat::Tsv);
    emit(text.as_bytes(), None)?;
    let t = classify::totals(&reports);
    let summary = format!(
        "classes={} nonminimal={} remaining={}",
        t.classes, t.nonminimal, t.remaining
    );
    Ok(Outcome::new(if t.unknown == 0 { 0 } else { 2 }, summary))
}

fn render(a: &RenderArgs) -> Res {
    let spec = load_spec(&a.source)?;
    let pi = load_pattern(&a.pattern)?;
    let out = match a.format {
        RenderFormat::Text => OutFormat::Text,
        RenderFormat::Pgm => OutFormat::Pgm,
        RenderFormat::Ppm => OutFormat::Ppm,
    };
    if let Some(s) = pi.symbols().into_iter().find(|s| *s as usize >= spec.alphabet_size()) {
        return Err(input(format!("symbol {s} outside the alphabet of `{}`", spec.name)));
    }
    write_rendered(&pi, &spec.alphabet, out, a.scale, a.output.as_deref())?;
    Ok(Outcome::new(0, format!("rendered {} cells", pi.len())))
}
