//! `fockpath` command line.
//!
//! Exit codes: 0 success, 1 verification failure or internal error,
//! 2 usage error or a pair outside the closed formula's scope.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockpath_core::closedform::{v_decomposition_with_count, MoveSpec};
use fockpath_core::latticepath::{render_path, RenderFormat};
use fockpath_core::{
    bijective, branching_coefficient, detect_move, enumerate_latticed, enumerate_wellnested,
    sign_sequence_of, CanonicalBasis, LatticedPath, LaurentPolynomial, Partition, PosSet,
    SignSequence, Step, WellNestedCollection,
};
use serde_json::{json, Value};

use crate::cache::OracleCache;
use crate::json::{partition_to_json, poly_to_json, set_to_json};
use crate::sweeps::{self, subsets, SweepReport};

#[derive(Debug, Parser)]
#[command(name = "fockpath", version, about = "v-decomposition numbers of same-residue moves via latticed paths")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// d_{row,col}(v) from the closed formula.
    Decomp(DecompArgs),
    /// All same-residue moves out of a partition, with their values.
    Moves(MovesArgs),
    /// Latticed paths of a sign sequence, or well-nested collections.
    Paths(PathsArgs),
    /// A canonical basis vector G(mu) computed by elimination.
    Oracle(OracleArgs),
    /// Run a verification sweep.
    Verify(VerifyArgs),
    /// Draw one latticed path.
    Render(RenderArgs),
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    Partition::from_str(s).map_err(|e| e.to_string())
}

fn parse_set(s: &str) -> Result<PosSet, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| format!("not an integer: {x:?}")))
        .collect()
}

#[derive(Debug, Args)]
pub struct DecompArgs {
    #[arg(long)]
    pub e: usize,
    /// Column partition (must be e-regular), e.g. 3,1.
    #[arg(long, value_parser = parse_partition)]
    pub col: Partition,
    /// Row partition; alternatively give --r, --a and --b.
    #[arg(long, value_parser = parse_partition, conflicts_with_all = ["r", "a", "b"])]
    pub row: Option<Partition>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Columns of added nodes.
    #[arg(long, value_parser = parse_set)]
    pub a: Option<PosSet>,
    /// Columns of removed nodes.
    #[arg(long, value_parser = parse_set)]
    pub b: Option<PosSet>,
    /// Also draw every well-nested collection.
    #[arg(long)]
    pub show_paths: bool,
}

#[derive(Debug, Args)]
pub struct MovesArgs {
    #[arg(long)]
    pub e: usize,
    #[arg(long, value_parser = parse_partition)]
    pub lambda: Partition,
    /// Only this residue.
    #[arg(long)]
    pub r: Option<usize>,
    /// List branching coefficients (|A| = |B| + 1) instead.
    #[arg(long)]
    pub branching: bool,
    /// Include zero values.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// Positions of + signs.
    #[arg(long, value_parser = parse_set, default_value = "")]
    pub plus: PosSet,
    /// Positions of - signs.
    #[arg(long, value_parser = parse_set, default_value = "")]
    pub minus: PosSet,
}

impl SeqArgs {
    fn sequence(&self) -> Result<SignSequence, Failure> {
        SignSequence::new(self.plus.clone(), self.minus.clone()).map_err(usage)
    }
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Openers; with --b lists well-nested collections.
    #[arg(long, value_parser = parse_set)]
    pub a: Option<PosSet>,
    #[arg(long, value_parser = parse_set)]
    pub b: Option<PosSet>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub e: usize,
    #[arg(long, value_parser = parse_partition)]
    pub mu: Partition,
    /// Cache directory (default: $FOCKPATH_CACHE, or none).
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Formula,
    Branching,
    Shape,
    Consistency,
    Bijection,
}

pub const MAX_N_CAP: usize = 14;
pub const MAX_POSITIONS_CAP: usize = 10;
pub const SAMPLES_CAP: usize = 1_000_000;
pub const SAMPLE_POSITIONS_CAP: usize = 16;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub kind: VerifyKind,
    /// Single e; default is the standard set for the sweep.
    #[arg(long)]
    pub e: Option<usize>,
    /// Largest |λ| (at most 14).
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Exhaustive bijection sweep size (at most 10).
    #[arg(long, default_value_t = 8)]
    pub max_positions: usize,
    /// Random bijection instances.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Largest random instance (at most 16).
    #[arg(long, default_value_t = 12)]
    pub sample_positions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Ascii,
    Svg,
}

impl From<FormatArg> for RenderFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ascii => RenderFormat::Ascii,
            FormatArg::Svg => RenderFormat::Svg,
        }
    }
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Flattened positions (both ends of each flattened pair).
    #[arg(long, value_parser = parse_set, default_value = "")]
    pub flat: PosSet,
    #[arg(long, value_enum, default_value = "ascii")]
    pub format: FormatArg,
    /// Dotted/dashed outline of the unflattened path.
    #[arg(long)]
    pub overlay: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Mismatch,
    Internal(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn internal(e: impl ToString) -> Failure {
    Failure::Internal(e.to_string())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let res = run(&cli, &mut out);
    print!("{out}");
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

pub fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    match &cli.command {
        Command::Decomp(a) => decomp(a, cli.json, out),
        Command::Moves(a) => moves(a, cli.json, out),
        Command::Paths(a) => paths(a, cli.json, out),
        Command::Oracle(a) => oracle(a, cli.json, out),
        Command::Verify(a) => verify(a, cli.json, out),
        Command::Render(a) => render(a, out),
    }
}

fn fmt_set(s: &PosSet) -> String {
    let v: Vec<String> = s.iter().map(i64::to_string).collect();
    format!("{{{}}}", v.join(","))
}

fn step_string(p: &LatticedPath) -> String {
    p.steps()
        .iter()
        .map(|s| match s.1 {
            Step::Up => '/',
            Step::Down => '\\',
            Step::Flat => '_',
        })
        .collect()
}

fn collection_json(w: &WellNestedCollection) -> Value {
    let paths: Vec<Value> = w
        .paths
        .iter()
        .map(|(a, p)| json!({ "from": a, "to": w.pairs[a], "norm": p.norm(), "steps": step_string(p) }))
        .collect();
    json!({ "norm": w.norm(), "paths": paths })
}

fn write_collection(out: &mut String, w: &WellNestedCollection) {
    let _ = writeln!(out, "norm {}", w.norm());
    for (a, p) in &w.paths {
        let _ = writeln!(out, "  {a} -> {}: norm {}", w.pairs[a], p.norm());
        for line in render_path(p, true, RenderFormat::Ascii).lines() {
            let _ = writeln!(out, "    {line}");
        }
    }
}

fn decomp(args: &DecompArgs, as_json: bool, out: &mut String) -> Result<(), Failure> {
    let col = &args.col;
    if !col.is_e_regular(args.e) {
        return Err(usage(format!("column {col} is not {}-regular", args.e)));
    }
    let m = match &args.row {
        Some(row) => detect_move(col, row, args.e)
            .map_err(usage)?
            .ok_or_else(|| usage(format!("row {row} and column {col} differ by more than a same-residue move: not covered by closed formula")))?,
        None => {
            let r = args.r.ok_or_else(|| usage("give --row, or --r with --a/--b"))?;
            let a = args.a.clone().unwrap_or_default();
            let b = args.b.clone().unwrap_or_default();
            if a.len() != b.len() {
                return Err(usage("a same-size move needs |A| = |B|"));
            }
            MoveSpec::new(col.clone(), args.e, r, a, b).map_err(usage)?
        }
    };
    let row = m.target().map_err(internal)?;
    let (poly, count) = v_decomposition_with_count(&m).map_err(internal)?;
    let collections = if args.show_paths && bijective(&m.a, &m.b) {
        enumerate_wellnested(&m.sign_sequence(), &m.a, &m.b).map_err(internal)?
    } else {
        Vec::new()
    };
    if as_json {
        let mut v = json!({
            "lambda": partition_to_json(&row),
            "mu": partition_to_json(col),
            "e": m.e,
            "r": m.r,
            "A": set_to_json(&m.a),
            "B": set_to_json(&m.b),
            "poly": poly_to_json(&poly),
            "paths": count,
        });
        if args.show_paths {
            v["collections"] = collections.iter().map(collection_json).collect();
        }
        let _ = writeln!(out, "{v}");
    } else {
        let _ = writeln!(out, "d[{row}; {col}] = {poly}");
        let _ = writeln!(out, "e = {}, r = {}, A = {}, B = {}", m.e, m.r, fmt_set(&m.a), fmt_set(&m.b));
        let _ = writeln!(out, "paths: {count}");
        for w in &collections {
            write_collection(out, w);
        }
    }
    Ok(())
}

fn moves(args: &MovesArgs, as_json: bool, out: &mut String) -> Result<(), Failure> {
    let e = args.e;
    let residues: Vec<usize> = match args.r {
        Some(r) if r < e => vec![r],
        Some(r) => return Err(usage(format!("residue {r} is not below e = {e}"))),
        None => (0..e).collect(),
    };
    let lambda = &args.lambda;
    let mut rows = Vec::new();
    for r in residues {
        let t = sign_sequence_of(lambda, e, r).map_err(usage)?;
        for a in subsets(t.minus()) {
            for b in subsets(t.plus()) {
                let poly = if args.branching {
                    if a.len() != b.len() + 1 || !fockpath_core::onto(&a, &b) {
                        continue;
                    }
                    branching_coefficient(lambda, e, r, &a, &b).map_err(internal)?
                } else {
                    if a.len() != b.len() || (a.is_empty() && r > 0) {
                        continue;
                    }
                    let m = MoveSpec::new(lambda.clone(), e, r, a.clone(), b.clone()).map_err(internal)?;
                    v_decomposition_with_count(&m).map_err(internal)?.0
                };
                if poly.is_zero() && !args.all {
                    continue;
                }
                let m = MoveSpec::new(lambda.clone(), e, r, a.clone(), b.clone()).map_err(internal)?;
                rows.push((m.target().map_err(internal)?, r, a.clone(), b, poly));
            }
        }
    }
    for (target, r, a, b, poly) in &rows {
        if as_json {
            let v = json!({
                "target": partition_to_json(target), "r": r,
                "A": set_to_json(a), "B": set_to_json(b), "poly": poly_to_json(poly),
            });
            let _ = writeln!(out, "{v}");
        } else {
            let _ = writeln!(out, "{target}\tr={r}\tA={}\tB={}\t{poly}", fmt_set(a), fmt_set(b));
        }
    }
    Ok(())
}

fn paths(args: &PathsArgs, as_json: bool, out: &mut String) -> Result<(), Failure> {
    let t = args.seq.sequence()?;
    match (&args.a, &args.b) {
        (None, None) => {
            let all = enumerate_latticed(&t);
            for p in &all {
                if as_json {
                    let flat: Vec<[i64; 2]> = p.flattened().iter().map(|&(x, y)| [x, y]).collect();
                    let _ = writeln!(out, "{}", json!({ "norm": p.norm(), "steps": step_string(p), "flattened": flat }));
                } else {
                    let _ = writeln!(out, "norm {}", p.norm());
                    out.push_str(&render_path(p, true, RenderFormat::Ascii));
                }
            }
            if !as_json {
                let _ = writeln!(out, "{} latticed paths", all.len());
            }
        }
        (a, b) => {
            let a = a.clone().unwrap_or_default();
            let b = b.clone().unwrap_or_default();
            let all = enumerate_wellnested(&t, &a, &b).map_err(usage)?;
            for w in &all {
                if as_json {
                    let _ = writeln!(out, "{}", collection_json(w));
                } else {
                    write_collection(out, w);
                }
            }
            if !as_json {
                let poly: LaurentPolynomial = all.iter().map(|w| LaurentPolynomial::v_pow(w.norm())).sum();
                let _ = writeln!(out, "{} well-nested collections, generating function {poly}", all.len());
            }
        }
    }
    Ok(())
}

fn oracle(args: &OracleArgs, as_json: bool, out: &mut String) -> Result<(), Failure> {
    let mut cb = CanonicalBasis::new(args.e).map_err(usage)?;
    if !args.mu.is_e_regular(args.e) {
        return Err(usage(format!("{} is not {}-regular", args.mu, args.e)));
    }
    if let Some(cache) = OracleCache::resolve(args.cache.as_deref()) {
        if let crate::cache::CacheStatus::Recomputed(err) = cache.fill(&mut cb, args.mu.size()).map_err(internal)? {
            eprintln!("warning: {err}; recomputed");
        }
    }
    let g = cb.get(&args.mu).map_err(internal)?;
    if as_json {
        let terms: Vec<Value> = g
            .terms()
            .rev()
            .map(|(l, c)| json!({ "lambda": partition_to_json(l), "poly": poly_to_json(c) }))
            .collect();
        let _ = writeln!(out, "{}", json!({ "e": args.e, "mu": partition_to_json(&args.mu), "terms": terms }));
    } else {
        for (l, c) in g.terms().rev() {
            let _ = writeln!(out, "{l}\t{c}");
        }
    }
    Ok(())
}

/// The default `(e, max n)` list of a sweep.
fn sweep_plan(kind: VerifyKind, e: Option<usize>, max_n: Option<usize>) -> Result<Vec<(usize, usize)>, Failure> {
    let defaults: &[(usize, usize)] = match kind {
        VerifyKind::Formula | VerifyKind::Branching | VerifyKind::Shape => &[(2, 12), (3, 10), (4, 9)],
        VerifyKind::Consistency => &[(2, 10), (3, 10)],
        VerifyKind::Bijection => &[],
    };
    let plan: Vec<(usize, usize)> = match e {
        Some(e) => {
            if e < 2 {
                return Err(usage("e must be at least 2"));
            }
            let n = max_n.or(defaults.iter().find(|d| d.0 == e).map(|d| d.1)).unwrap_or(8);
            vec![(e, n)]
        }
        None => defaults.iter().map(|&(e, n)| (e, max_n.unwrap_or(n))).collect(),
    };
    if let Some(&(_, n)) = plan.iter().find(|p| p.1 > MAX_N_CAP) {
        return Err(usage(format!("--max-n {n} exceeds the cap {MAX_N_CAP}")));
    }
    Ok(plan)
}

fn report(out: &mut String, as_json: bool, name: &str, e: usize, n: usize, rep: &SweepReport) {
    if as_json {
        let v = json!({
            "sweep": name, "e": e, "max_n": n, "checked": rep.checked,
            "headline": rep.headline, "failures": rep.failures,
        });
        let _ = writeln!(out, "{v}");
    } else {
        let _ = writeln!(
            out,
            "{name} e={e} n<={n}: {} checked ({} in scope), {} mismatches",
            rep.checked,
            rep.headline,
            rep.failures.len()
        );
        for f in &rep.failures {
            let _ = writeln!(out, "  {f}");
        }
    }
}

fn verify(args: &VerifyArgs, as_json: bool, out: &mut String) -> Result<(), Failure> {
    let cache = OracleCache::resolve(args.cache.as_deref());
    let mut ok = true;
    if args.kind == VerifyKind::Bijection {
        if args.max_positions > MAX_POSITIONS_CAP {
            return Err(usage(format!("--max-positions exceeds the cap {MAX_POSITIONS_CAP}")));
        }
        if args.samples > SAMPLES_CAP || args.sample_positions > SAMPLE_POSITIONS_CAP {
            return Err(usage(format!("sampling budget exceeds {SAMPLES_CAP} instances of {SAMPLE_POSITIONS_CAP} positions")));
        }
        let rep = sweeps::bijection_sweep(args.max_positions, args.samples, args.sample_positions, args.seed)
            .map_err(internal)?;
        if as_json {
            for r in &rep.records {
                let _ = writeln!(out, "{}", r.to_json());
            }
        } else {
            let _ = writeln!(
                out,
                "bijection: {} exhaustive (<= {} positions) + {} sampled (<= {} positions, seed {})",
                rep.exhaustive(),
                args.max_positions,
                rep.sampled(),
                args.sample_positions,
                args.seed
            );
            let _ = writeln!(out, "norm multiset mismatches: {}", rep.multiset_failures().count());
            let _ = writeln!(out, "construction failures: {}", rep.construction_failures().count());
            for r in rep.multiset_failures().chain(rep.construction_failures()) {
                let _ = writeln!(out, "  {}", r.to_json());
            }
        }
        return if rep.ok() { Ok(()) } else { Err(Failure::Mismatch) };
    }
    for (e, n) in sweep_plan(args.kind, args.e, args.max_n)? {
        let (name, rep) = match args.kind {
            VerifyKind::Formula => ("formula", sweeps::formula_sweep(e, n, cache.as_ref())),
            VerifyKind::Branching => ("branching", sweeps::branching_sweep(e, n, cache.as_ref())),
            VerifyKind::Shape => ("shape", sweeps::shape_sweep(e, n)),
            VerifyKind::Consistency => ("consistency", sweeps::consistency_sweep(e, n)),
            VerifyKind::Bijection => unreachable!(),
        };
        let rep = rep.map_err(internal)?;
        ok &= rep.ok();
        report(out, as_json, name, e, n, &rep);
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn render(args: &RenderArgs, out: &mut String) -> Result<(), Failure> {
    let t = args.seq.sequence()?;
    if t.is_empty() {
        return Err(usage("empty sign sequence"));
    }
    let path = LatticedPath::from_flat_positions(t, &args.flat).map_err(usage)?;
    let drawing = render_path(&path, args.overlay, args.format.into());
    match &args.out {
        Some(file) => std::fs::write(file, drawing).map_err(|e| internal(format!("{}: {e}", file.display())))?,
        None => out.push_str(&drawing),
    }
    Ok(())
}
