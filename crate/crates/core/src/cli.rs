//! Command-line front end. Reports are deterministic JSON; exit status is 0
//! on success, 1 on a negative domain verdict, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num::complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::angle::Angle;
use crate::blaschke::{extract_tree, quasi_pcf_witness, BlaschkeError, BlaschkeProduct, BlaschkeSchemeFile, Marking, ProductFile};
use crate::hypgeom::{build_spine, HPoint};
use crate::lamination::{
    equivalence_classes, parallel_test, pullback_lamination, Lamination, LaminationError, LaminationFile, ParallelOutcome,
};
use crate::mating::{hubbard_is_simplicial, lamination_of, mateability, HubbardTree, MatingError, Outcome};
use crate::svg::{lamination_svg, mating_svg, spine_svg};
use crate::treedyn::{
    convex_hull_subtree, dual_lamination, is_md_eigenvector, markov_degree_matrices, solve_eigen_md,
    spectral_radius_rational, thurston_matrix, CurveCover, SchemeFile, TreeMapFile, Verdict,
};
use crate::treesphere::{validate_tree_of_spheres, TreeOfSpheresFile};

#[derive(Debug, Parser)]
#[command(name = "qpcf", version, about = "Laminations, tree maps, Blaschke products, trees of spheres and matings")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG picture here (laminations, matings, spines).
    #[arg(long, global = true)]
    pub render: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mapping schemes.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Ribbon tree maps.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Invariant laminations.
    #[command(subcommand)]
    Lam(LamCmd),
    /// Blaschke products and their schemes.
    #[command(subcommand)]
    Blaschke(BlaschkeCmd),
    /// Trees of spheres.
    #[command(subcommand)]
    Spheres(SpheresCmd),
    /// Decide mateability of two laminations or Hubbard trees.
    Mate {
        /// Lamination or tree-map file.
        #[arg(long)]
        plus: PathBuf,
        /// Lamination or tree-map file; reflected before comparison.
        #[arg(long)]
        minus: PathBuf,
        #[arg(long, alias = "depth", default_value_t = 8, value_parser = depth_parser())]
        max_depth: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchemeCmd {
    /// Check minimality and hyperbolicity; report the total degree.
    Validate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Markov and degree matrices, `Mv = Dv`, spectral radius, reduced subtree.
    Analyze {
        file: PathBuf,
        /// Vertices whose convex hull is reduced (default: the marked set).
        #[arg(long, value_delimiter = ',')]
        keep: Vec<usize>,
        /// Curve-cover data for a Thurston matrix.
        #[arg(long)]
        cover: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LamCmd {
    /// Add `--depth` generations of preimage leaves using the file's portrait.
    Pullback {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = depth_parser())]
        depth: u32,
    },
    /// Equivalence classes of endpoints.
    Classes {
        file: PathBuf,
    },
    /// Parallel test at generation `--depth`, with a certificate when parallel.
    Parallel {
        plus: PathBuf,
        minus: PathBuf,
        #[arg(long, default_value_t = 0, value_parser = depth_parser())]
        depth: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum BlaschkeCmd {
    /// Evaluate `f(z)`; `--z re,im`.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Boundary marking `η(t)` at comma-separated angles `p/q`.
    Mark {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        angles: Vec<Angle>,
    },
    /// Quasi-invariant forest of a Blaschke scheme.
    Tree {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0, value_parser = positive_parser)]
        cluster_gap: f64,
        /// Recurrence bound on critical orbits.
        #[arg(long, default_value_t = 1.0, value_parser = positive_parser)]
        bound: f64,
        #[arg(long, default_value_t = 32)]
        max_l: usize,
        #[arg(long, default_value_t = 32)]
        max_q: usize,
    },
    /// Geodesic spine through points `{ "points": [[x, y], …] }`.
    Spine {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-3, value_parser = positive_parser)]
        attach_radius: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpheresCmd {
    /// Structural, degree and tangent-compatibility checks.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9, value_parser = tol_parser)]
        tol: f64,
    },
}

fn depth_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(0..=64)
}

fn tol_parser(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (0, 1)"))
    }
}

fn positive_parser(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} is not a positive number"))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Input(String),
}

/// A finished run: the report and whether the verdict was negative.
pub struct Report {
    pub value: Value,
    pub negative: bool,
    pub svg: Option<String>,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, negative: false, svg: None }
    }

    fn verdict(value: Value, negative: bool) -> Self {
        Report { value, negative, svg: None }
    }

    fn with_svg(mut self, svg: String) -> Self {
        self.svg = Some(svg);
        self
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse(path, &read_text(path)?)
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// A lamination file, or a Hubbard tree map whose dual lamination is used.
fn read_lamination(path: &Path) -> Result<Lamination, CliError> {
    let text = read_text(path)?;
    let v: Value = parse(path, &text)?;
    if v.get("trees").is_some() {
        let h = HubbardTree::from_file(&parse(path, &text)?).map_err(input)?;
        lamination_of(&h, 0).map_err(input)
    } else {
        parse::<LaminationFile>(path, &text)?.into_lamination().map_err(input)
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match &cfg.command {
        Command::Scheme(SchemeCmd::Validate { file }) => {
            let f: SchemeFile = read_json(file)?;
            let s = f.to_scheme().map_err(input)?;
            Ok(match s.validate() {
                Ok(degree) => Report::ok(json!({ "valid": true, "degree": degree, "vertices": s.len() })),
                Err(e) => Report::verdict(json!({ "valid": false, "error": e.to_string() }), true),
            })
        }
        Command::Tree(TreeCmd::Analyze { file, keep, cover }) => tree_analyze(file, keep, cover.as_deref()),
        Command::Lam(cmd) => lam(cmd),
        Command::Blaschke(cmd) => blaschke(cmd),
        Command::Spheres(SpheresCmd::Validate { file, tol }) => {
            let f: TreeOfSpheresFile = read_json(file)?;
            let ts = f.to_spheres().map_err(input)?;
            let r = validate_tree_of_spheres(&ts, *tol).map_err(input)?;
            let negative = !r.pass;
            Ok(Report::verdict(serde_json::to_value(r).expect("serializable"), negative))
        }
        Command::Mate { plus, minus, max_depth } => {
            let lp = read_lamination(plus)?;
            let lm = read_lamination(minus)?;
            let svg = mating_svg(&lp, &lm);
            let report = match mateability(&lp, &lm, *max_depth) {
                Ok(v) => {
                    let negative = v.outcome == Outcome::Obstructed;
                    Report::verdict(serde_json::to_value(v).expect("serializable"), negative)
                }
                Err(MatingError::DepthExhausted { max_depth, report }) => Report::verdict(
                    json!({ "outcome": "DepthExhausted", "depth": max_depth, "stabilization": report }),
                    true,
                ),
                Err(e) => return Err(input(e)),
            };
            Ok(report.with_svg(svg))
        }
    }
}

fn tree_analyze(file: &Path, keep: &[usize], cover: Option<&Path>) -> Result<Report, CliError> {
    let f: TreeMapFile = read_json(file)?;
    let t = f.to_map().map_err(input)?;
    let e = markov_degree_matrices(&t).map_err(input)?;
    let v = solve_eigen_md(&e);
    let verified = v.as_ref().map(|v| is_md_eigenvector(&e, v));
    let lambda = spectral_radius_rational(&e.d_inv_m()).map_err(input)?;
    let lambda_m = spectral_radius_rational(&e.m_rational()).map_err(input)?;
    let mut out = json!({
        "M": e.m,
        "D": e.d,
        "eigenvector": v.map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "eigenvector_verified": verified,
        "lambda": lambda,
        "lambda_M": lambda_m,
        "simplicial": hubbard_is_simplicial(&t),
    });
    let keep: std::collections::BTreeSet<usize> =
        if keep.is_empty() { t.marked().clone() } else { keep.iter().copied().collect() };
    if !keep.is_empty() {
        let r = convex_hull_subtree(&t, &keep).map_err(input)?;
        out["reduced"] = serde_json::to_value(r).expect("serializable");
    }
    if t.trees().iter().all(|tr| tr.anchor.is_some()) && t.is_simplicial() && t.num_edges() > 0 {
        if let Ok(dl) = dual_lamination(&t) {
            let laminations: Vec<Value> = (0..t.trees().len())
                .filter_map(|i| dl.lamination(i).ok())
                .map(|l| serde_json::to_value(LaminationFile::from_lamination(&l)).expect("serializable"))
                .collect();
            out["dual_laminations"] = json!(laminations);
        }
    }
    let mut negative = false;
    if let Some(path) = cover {
        let c: CurveCover = read_json(path)?;
        let r = thurston_matrix(&c).map_err(input)?;
        negative = r.verdict == Verdict::Obstructed;
        out["thurston"] = json!({
            "matrix": r.matrix.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "lambda": r.lambda,
            "verdict": r.verdict,
            "exact_unit_eigenvalue": r.exact_unit_eigenvalue,
        });
    }
    Ok(Report::verdict(out, negative))
}

fn lam(cmd: &LamCmd) -> Result<Report, CliError> {
    match cmd {
        LamCmd::Pullback { file, depth } => {
            let l = read_lamination(file)?;
            let p = l.portrait().cloned().ok_or(LaminationError::MissingPortrait(l.degree())).map_err(input)?;
            let out = pullback_lamination(&l, &p, *depth).map_err(input)?;
            let svg = lamination_svg(&out);
            Ok(Report::ok(serde_json::to_value(LaminationFile::from_lamination(&out)).expect("serializable")).with_svg(svg))
        }
        LamCmd::Classes { file } => {
            let l = read_lamination(file)?;
            let c = equivalence_classes(&l);
            Ok(Report::ok(json!({ "classes": c.classes() })).with_svg(lamination_svg(&l)))
        }
        LamCmd::Parallel { plus, minus, depth } => {
            let grow = |l: Lamination| -> Result<Lamination, CliError> {
                match (l.portrait().cloned(), *depth) {
                    (_, 0) => Ok(l),
                    (Some(p), d) => pullback_lamination(&l, &p, d).map_err(input),
                    (None, _) if l.is_empty() => Ok(l),
                    (None, _) => Err(input(LaminationError::MissingPortrait(l.degree()))),
                }
            };
            let lp = grow(read_lamination(plus)?)?;
            let lm = grow(read_lamination(minus)?)?;
            let d = lp.depth().max(lm.depth());
            let svg = mating_svg(&lp, &lm);
            let report = match parallel_test(&lp, &lm, d) {
                Ok(ParallelOutcome::Parallel(cert)) => {
                    Report::verdict(json!({ "outcome": "Parallel", "certificate": cert, "depth": d }), true)
                }
                Ok(ParallelOutcome::NonParallel(r)) => {
                    Report::ok(json!({ "outcome": "NonParallel", "stabilization": r, "depth": d }))
                }
                Err(LaminationError::DepthInsufficient { depth, report }) => Report::verdict(
                    json!({ "outcome": "DepthInsufficient", "stabilization": report, "depth": depth }),
                    true,
                ),
                Err(e) => return Err(input(e)),
            };
            Ok(report.with_svg(svg))
        }
    }
}

#[derive(Deserialize)]
struct PointsFile {
    points: Vec<Vec<f64>>,
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| input(format!("--z {s:?}: {e}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(input(format!("--z {s:?}: expected re,im"))),
    }
}

fn product(file: &Path) -> Result<BlaschkeProduct, CliError> {
    let f: ProductFile = read_json(file)?;
    BlaschkeProduct::new(f.zeros.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).map_err(input)
}

fn blaschke(cmd: &BlaschkeCmd) -> Result<Report, CliError> {
    match cmd {
        BlaschkeCmd::Eval { file, z } => {
            let f = product(file)?;
            let z = parse_complex(z)?;
            let w = f.eval(z).map_err(input)?;
            let crit: Vec<Value> = f.critical_points().map_err(input)?.into_iter().map(c_json).collect();
            Ok(Report::ok(json!({
                "degree": f.degree(),
                "z": c_json(z),
                "value": c_json(w),
                "critical_points": crit,
            })))
        }
        BlaschkeCmd::Mark { file, angles } => {
            let f = product(file)?;
            let m = match Marking::new(f) {
                Ok(m) => m,
                Err(e @ BlaschkeError::NotExpanding(_)) => {
                    return Ok(Report::verdict(json!({ "expanding": false, "error": e.to_string() }), true))
                }
                Err(e) => return Err(input(e)),
            };
            let mut values = Vec::new();
            for t in angles {
                let eta = m.eval(t);
                values.push(json!({ "angle": t, "eta": c_json(eta) }));
            }
            let x0 = m.product().continued_fixed_point();
            Ok(Report::ok(json!({
                "expanding": true,
                "fixed_point": c_json(Complex64::from_polar(1.0, std::f64::consts::TAU * x0)),
                "values": values,
            })))
        }
        BlaschkeCmd::Tree { file, cluster_gap, bound, max_l, max_q } => {
            let f: BlaschkeSchemeFile = read_json(file)?;
            let fs = f.to_scheme().map_err(input)?;
            let witness = match quasi_pcf_witness(|_| fs.clone(), *bound, 0..1, *max_l, *max_q) {
                Ok(mut w) => w.remove(0),
                Err(e @ BlaschkeError::NoWitnessWithinBounds { .. }) => {
                    return Ok(Report::verdict(json!({ "quasi_pcf": false, "error": e.to_string() }), true))
                }
                Err(e) => return Err(input(e)),
            };
            let t = extract_tree(&fs, &witness, *cluster_gap).map_err(input)?;
            let forests: Vec<Value> = t
                .forests
                .iter()
                .map(|vf| {
                    json!({
                        "vertex": fs.scheme().name(vf.vertex),
                        "clusters": vf.clusters.iter().map(|c| json!({
                            "representative": c_json(c.representative),
                            "members": c.members,
                            "degree": c.degree,
                            "marked": c.marked,
                        })).collect::<Vec<_>>(),
                        "spine": vf.spine.to_file(),
                    })
                })
                .collect();
            let map: Vec<Value> = t.map.iter().map(|(&(a, v), &(b, w))| json!([[a, v], [b, w]])).collect();
            let mut report =
                Report::ok(json!({ "witness": witness, "forests": forests, "map": map, "constants": t.report }));
            if let Some(first) = t.forests.first() {
                report = report.with_svg(spine_svg(&first.spine));
            }
            Ok(report)
        }
        BlaschkeCmd::Spine { file, attach_radius } => {
            let f: PointsFile = read_json(file)?;
            let pts = f.points.iter().map(|p| HPoint::from_slice(p)).collect::<Result<Vec<_>, _>>().map_err(input)?;
            let s = build_spine(&pts, *attach_radius).map_err(input)?;
            let svg = spine_svg(&s);
            Ok(Report::ok(json!({ "spine": s.to_file(), "input_map": s.input_map })).with_svg(svg))
        }
    }
}

/// Parses `args` (program name first), runs, writes the report to `--out`
/// or `stdout`, and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let text = serde_json::to_string_pretty(&report.value).expect("serializable") + "\n";
    let written = match &cfg.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    let rendered = match (&cfg.render, &report.svg) {
        (Some(p), Some(svg)) => std::fs::write(p, svg).map_err(|e| format!("{}: {e}", p.display())),
        (Some(_), None) => Err("this subcommand has nothing to render".into()),
        _ => Ok(()),
    };
    if let Err(e) = written.and(rendered) {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    i32::from(report.negative)
}
