//! Command-line front end. Every command writes deterministic text to the
//! given sink; files (SVG, JSON) are written only when asked for.
//!
//! Exit codes: 0 success, 1 computation refused (unbounded, undefined, …),
//! 2 usage or invalid input, 3 cap exceeded, 4 internal invariant violated.

pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::circlespace::{self, inner_product, rational_to_string, Circle, DescartesQuadruple};
use crate::contfrac::{self, Real, ZarembaConvention};
use crate::error::{Error, Result};
use crate::hyperbolic::{self, UhsPoint};
use crate::obstructions;
use crate::packing;
use crate::quadforms::{self, BinaryQF};
use crate::schmidt;

use config::Config;
use svg::{ColorScheme, RenderSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::NotDescartes(_) | Error::NotReduced(_) => EXIT_USAGE,
        Error::CapExceeded { .. } | Error::Overflow(_) => EXIT_CAP,
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_REFUSED,
    }
}

#[derive(Parser, Debug)]
#[command(name = "apollonian", version, about = "Integral Apollonian packings, Schmidt arrangements and friends")]
struct Cli {
    /// key = value file with defaults (n, window, width, stroke, color, depth, max-curv, h)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Curvature orbits, types and drawings of a packing
    #[command(subcommand)]
    Packing(PackingCmd),
    /// The Schmidt arrangement of Q(i)
    #[command(subcommand)]
    Schmidt(SchmidtCmd),
    /// Continued fractions
    #[command(subcommand)]
    Cf(CfCmd),
    /// Binary quadratic forms
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Residue graphs of a packing
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Roots of quadratics in the upper half plane
    #[command(subcommand)]
    Starscape(StarscapeCmd),
    /// Hyperbolic distances
    #[command(subcommand)]
    Hyperbolic(HyperbolicCmd),
}

#[derive(clap::Args, Debug, Clone)]
struct RenderArgs {
    /// x0,y0,x1,y1
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    stroke: Option<f64>,
    /// mono, curvature or residue:M
    #[arg(long)]
    color: Option<String>,
}

#[derive(Subcommand, Debug)]
enum PackingCmd {
    /// CSV `curvature,count` up to N, or JSON circles with --geometry
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        geometry: bool,
        /// x0,y0,x1,y1 (geometry only)
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Type, characters and obstruction families
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        root: String,
    },
    /// CSV `curvature,family` of admissible curvatures that do not occur
    Missing {
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        #[arg(long)]
        n: Option<i64>,
    },
    /// SVG of the circles with curvature ≤ N meeting the window
    Render {
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        #[arg(long)]
        n: Option<i64>,
        #[command(flatten)]
        render: RenderArgs,
        #[arg(long)]
        svg: PathBuf,
        /// also write the circles as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Re-check a JSON circle file written by `render`
    Audit {
        #[arg(long)]
        json: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum SchmidtCmd {
    /// SVG of Schmidt circles with reduced curvature ≤ K
    Render {
        #[arg(long = "max-curv")]
        max_curv: Option<i64>,
        #[command(flatten)]
        render: RenderArgs,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CfCmd {
    /// Expand a number: 17/5, -2.75, sqrt(7), quad(1,-1,-1), pi, phi
    Expand {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        depth: Option<usize>,
        /// also list convergents
        #[arg(long)]
        convergents: bool,
    },
    /// CSV of q ≤ N that are not denominators with all quotients ≤ Z
    Zaremba {
        #[arg(long)]
        z: u64,
        #[arg(long)]
        n: Option<u64>,
        /// let either expansion of a rational count
        #[arg(long)]
        any_expansion: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FormsCmd {
    /// Reduce a,b,c (definite or indefinite)
    Reduce {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Reduced representatives of discriminant D < 0
    ClassNumber {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Fundamental solution of X² − DY² = 4
    Pell {
        #[arg(long)]
        disc: i64,
    },
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// Residue graph mod M of a packing
    Modn {
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        spectrum: bool,
    },
}

#[derive(Subcommand, Debug)]
enum StarscapeCmd {
    /// CSV `re,im,disc` on stdout, or SVG with --svg
    Render {
        #[arg(long)]
        h: Option<i64>,
        #[command(flatten)]
        render: RenderArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum HyperbolicCmd {
    /// Distance between x,y points (plane) or a,b,c points (space)
    Dist {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

/// Parse `argv` (including the program name) and run. Output goes to `out`,
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version land here too, with exit code 0
            let text = e.render().to_string();
            if e.exit_code() == 0 {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    let cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => Config::default(),
    };
    let mut buf = Vec::new();
    match dispatch(cli.cmd, &cfg, &mut buf, err) {
        Ok(()) => {
            if out.write_all(&buf).is_err() {
                return EXIT_REFUSED;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = out.write_all(&buf);
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::invalid(format!("i/o: {e}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(s: &str, len: usize, what: &str) -> Result<Vec<T>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != len {
        return Err(Error::invalid(format!("{what}: expected {len} comma-separated values, got {s:?}")));
    }
    parts.iter().map(|p| p.parse::<T>().map_err(|_| Error::invalid(format!("{what}: cannot parse {p:?}")))).collect()
}

fn parse_window(s: &str) -> Result<[f64; 4]> {
    let v = parse_list::<f64>(s, 4, "window")?;
    let w = [v[0], v[1], v[2], v[3]];
    packing::Window::new(w[0], w[1], w[2], w[3])?;
    Ok(w)
}

/// A Descartes quadruple, reduced to its root (noted on `err` if it moved).
fn parse_root(s: &str, err: &mut dyn Write) -> Result<[i64; 4]> {
    let v = parse_list::<i64>(s, 4, "root")?;
    let quad = [v[0], v[1], v[2], v[3]];
    let dq = DescartesQuadruple::from_i64(quad)?;
    let mut root = packing::reduce_to_root(&dq)?.to_i64().ok_or(Error::Overflow("root"))?;
    root.sort();
    let mut sorted = quad;
    sorted.sort();
    if root != sorted {
        let _ = writeln!(err, "note: reduced {quad:?} to root {root:?}");
    }
    Ok(root)
}

fn window_or_config(flag: &Option<String>, cfg: &Config) -> Result<Option<[f64; 4]>> {
    match flag.as_deref().or(cfg.raw("window")) {
        Some(w) => parse_window(w).map(Some),
        None => Ok(None),
    }
}

fn render_spec(args: &RenderArgs, cfg: &Config, default_window: Option<[f64; 4]>) -> Result<RenderSpec> {
    let window = window_or_config(&args.window, cfg)?
        .or(default_window)
        .ok_or_else(|| Error::invalid("--window x0,y0,x1,y1 is required here"))?;
    let width = cfg.pick(args.width, "width", 800u32)?;
    let stroke = cfg.pick(args.stroke, "stroke", 0.5f64)?;
    let color: ColorScheme = match args.color.as_deref().or(cfg.raw("color")) {
        Some(c) => c.parse()?,
        None => ColorScheme::Monochrome,
    };
    RenderSpec::new(window, width, stroke, color)
}

fn dispatch(cmd: Cmd, cfg: &Config, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Cmd::Packing(p) => packing_cmd(p, cfg, out, err),
        Cmd::Schmidt(SchmidtCmd::Render { max_curv, render, svg: svg_path, json }) => {
            let k = cfg.pick(max_curv, "max-curv", 10i64)?;
            let view = render_spec(&render, cfg, None)?;
            let [x0, y0, x1, y1] = view.window;
            let circles = schmidt::schmidt_circles(&packing::Window::new(x0, y0, x1, y1)?, k)?;
            write_file(&svg_path, &svg::render_circles(&view, &circles, 2.0))?;
            if let Some(j) = json {
                write_file(&j, &circles_json(&circles)?)?;
            }
            writeln!(out, "circles,{}", circles.len()).map_err(io_err)
        }
        Cmd::Cf(c) => cf_cmd(c, cfg, out),
        Cmd::Forms(f) => forms_cmd(f, out),
        Cmd::Graph(GraphCmd::Modn { root, m, spectrum }) => {
            let root = parse_root(&root, err)?;
            let g = obstructions::residue_orbit(root, m)?;
            let w = |out: &mut Vec<u8>, k: &str, v: String| writeln!(out, "{k},{v}").map_err(io_err);
            w(out, "modulus", m.to_string())?;
            w(out, "vertices", g.len().to_string())?;
            w(out, "components", g.component_count().to_string())?;
            w(out, "connected", g.is_connected().to_string())?;
            w(out, "residues", g.residues().iter().map(i64::to_string).collect::<Vec<_>>().join(" "))?;
            if spectrum {
                let gap = obstructions::spectral_gap(&g)?;
                w(out, "top_multiplicity", gap.top_multiplicity.to_string())?;
                w(out, "lambda1", format!("{:.12}", gap.lambda1))?;
            }
            Ok(())
        }
        Cmd::Starscape(StarscapeCmd::Render { h, render, svg: svg_path }) => {
            let h = cfg.pick(h, "h", 10i64)?;
            let view = render_spec(&render, cfg, Some([-1.5, 0.0, 1.5, 1.5]))?;
            let [x0, y0, x1, y1] = view.window;
            let pts = hyperbolic::starscape_points(h, hyperbolic::Window { x0, x1, y0, y1 })?;
            let pts: Vec<(f64, f64, i64)> = pts
                .iter()
                .map(|(z, d)| {
                    let c = z.to_complex();
                    (c.re, c.im, *d)
                })
                .collect();
            match svg_path {
                Some(p) => {
                    write_file(&p, &svg::render_points(&view, &pts))?;
                    writeln!(out, "points,{}", pts.len()).map_err(io_err)
                }
                None => {
                    writeln!(out, "re,im,disc").map_err(io_err)?;
                    for (x, y, d) in pts {
                        writeln!(out, "{x:.12},{y:.12},{d}").map_err(io_err)?;
                    }
                    Ok(())
                }
            }
        }
        Cmd::Hyperbolic(HyperbolicCmd::Dist { a, b }) => {
            let pa: Vec<f64> = a.split(',').map(|x| x.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| Error::invalid(format!("bad point {a:?}")))?;
            let pb: Vec<f64> = b.split(',').map(|x| x.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| Error::invalid(format!("bad point {b:?}")))?;
            let d = match (pa.as_slice(), pb.as_slice()) {
                ([x1, y1], [x2, y2]) => hyperbolic::dist_uhp(Complex64::new(*x1, *y1), Complex64::new(*x2, *y2))?,
                ([a1, b1, c1], [a2, b2, c2]) => {
                    hyperbolic::dist_uhs(&UhsPoint { a: *a1, b: *b1, c: *c1 }, &UhsPoint { a: *a2, b: *b2, c: *c2 })?
                }
                _ => return Err(Error::invalid("points must both be x,y or both be a,b,c")),
            };
            writeln!(out, "{d:.15}").map_err(io_err)
        }
    }
}

fn circles_json(circles: &[Circle]) -> Result<String> {
    serde_json::to_string_pretty(circles).map_err(|e| Error::invariant(format!("json: {e}")))
}

/// Bounding box of the outer circle, or a strip window for line roots.
fn default_packing_window(seed: &[Circle; 4]) -> Option<[f64; 4]> {
    let outer = seed.iter().find(|c| c.p.is_negative())?;
    let (cx, cy, r) = outer.center_radius_f64()?;
    let m = 0.02 * r;
    Some([cx - r - m, cy - r - m, cx + r + m, cy + r + m])
}

fn packing_cmd(cmd: PackingCmd, cfg: &Config, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<()> {
    match cmd {
        PackingCmd::Enumerate { root, n, geometry, window } => {
            let root = parse_root(&root, err)?;
            let n = cfg.pick(n, "n", 1000i64)?;
            if geometry {
                let seed = packing::root_circles(root)?;
                let w = window_or_config(&window, cfg)?
                    .or_else(|| default_packing_window(&seed))
                    .ok_or_else(|| Error::invalid("--window is required for packings bounded by lines"))?;
                let circles = packing::enumerate_geometry(&seed, n, &packing::Window::new(w[0], w[1], w[2], w[3])?)?;
                writeln!(out, "{}", circles_json(&circles)?).map_err(io_err)
            } else {
                let orbit = packing::enumerate(root, n)?;
                writeln!(out, "curvature,count").map_err(io_err)?;
                for (k, c) in orbit.multiset() {
                    writeln!(out, "{k},{c}").map_err(io_err)?;
                }
                Ok(())
            }
        }
        PackingCmd::Classify { root } => {
            let root = parse_root(&root, err)?;
            let t = obstructions::packing_type(root)?;
            let fams = obstructions::obstruction_families(&t)?;
            writeln!(out, "root {root:?}").map_err(io_err)?;
            writeln!(out, "type ({}, {})", t.n, t.k).map_err(io_err)?;
            writeln!(out, "chi2 {}", t.chi2).map_err(io_err)?;
            match t.chi4 {
                Some(c) => writeln!(out, "chi4 {c}"),
                None => writeln!(out, "chi4 undefined"),
            }
            .map_err(io_err)?;
            let fams: Vec<String> = fams.iter().map(ToString::to_string).collect();
            writeln!(out, "families {}", if fams.is_empty() { "none".into() } else { fams.join(", ") }).map_err(io_err)?;
            writeln!(out, "row {t}").map_err(io_err)
        }
        PackingCmd::Missing { root, n } => {
            let root = parse_root(&root, err)?;
            let n = cfg.pick(n, "n", 1000i64)?;
            let rep = obstructions::missing_curvatures(root, n)?;
            writeln!(out, "curvature,family").map_err(io_err)?;
            for k in &rep.missing {
                let fam = rep.families.iter().find(|f| f.contains(*k)).map_or("sporadic".to_string(), ToString::to_string);
                writeln!(out, "{k},{fam}").map_err(io_err)?;
            }
            Ok(())
        }
        PackingCmd::Render { root, n, render, svg: svg_path, json } => {
            let root = parse_root(&root, err)?;
            let n = cfg.pick(n, "n", 200i64)?;
            let seed = packing::root_circles(root)?;
            let view = render_spec(&render, cfg, default_packing_window(&seed))?;
            let [x0, y0, x1, y1] = view.window;
            let circles = packing::enumerate_geometry(&seed, n, &packing::Window::new(x0, y0, x1, y1)?)?;
            write_file(&svg_path, &svg::render_circles(&view, &circles, 1.0))?;
            if let Some(j) = json {
                write_file(&j, &circles_json(&circles)?)?;
            }
            writeln!(out, "circles,{}", circles.len()).map_err(io_err)
        }
        PackingCmd::Audit { json } => {
            let text = std::fs::read_to_string(&json).map_err(|e| Error::invalid(format!("cannot read {}: {e}", json.display())))?;
            let circles: Vec<Circle> = serde_json::from_str(&text).map_err(|e| Error::invalid(format!("json: {e}")))?;
            let audit = audit_circles(&circles)?;
            writeln!(out, "circles,{}", circles.len()).map_err(io_err)?;
            writeln!(out, "tangent_pairs,{}", audit.tangent_pairs).map_err(io_err)?;
            writeln!(out, "descartes_quadruples,{}", audit.quadruples).map_err(io_err)?;
            writeln!(out, "schmidt,{}", audit.schmidt).map_err(io_err)?;
            Ok(())
        }
    }
}

struct Audit {
    tangent_pairs: usize,
    quadruples: usize,
    schmidt: usize,
}

/// Every record must be a normalised circle with integral curvature, no two
/// may cross, and every four mutually tangent ones must satisfy Descartes.
fn audit_circles(circles: &[Circle]) -> Result<Audit> {
    let one = circlespace::q(1);
    let n = circles.len();
    for c in circles {
        if c.self_norm() != one {
            return Err(Error::invariant(format!("not a normalised circle: {c}")));
        }
        if !c.p.is_integer() {
            return Err(Error::invariant(format!("non-integral curvature {}", rational_to_string(&c.p))));
        }
    }
    let mut nbr: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tangent_pairs = 0;
    for i in 0..n {
        for j in i + 1..n {
            let ip = inner_product(&circles[i], &circles[j]);
            if ip.abs() < one {
                return Err(Error::invariant(format!("{} and {} cross", circles[i], circles[j])));
            }
            if ip == -one.clone() {
                nbr[i].push(j);
                tangent_pairs += 1;
            }
        }
    }
    let mut quadruples = 0;
    for a in 0..n {
        for &b in &nbr[a] {
            for &c in nbr[b].iter().filter(|&&c| nbr[a].contains(&c)) {
                for &d in nbr[c].iter().filter(|&&d| nbr[a].contains(&d) && nbr[b].contains(&d)) {
                    let ks = [a, b, c, d].map(|i| circles[i].p.to_integer());
                    if !circlespace::descartes_form(&ks).is_zero() {
                        return Err(Error::invariant(format!("Descartes form fails on curvatures {ks:?}")));
                    }
                    quadruples += 1;
                }
            }
        }
    }
    let schmidt = circles.iter().filter(|c| schmidt::is_schmidt_circle(c)).count();
    Ok(Audit { tangent_pairs, quadruples, schmidt })
}

fn cf_cmd(cmd: CfCmd, cfg: &Config, out: &mut Vec<u8>) -> Result<()> {
    match cmd {
        CfCmd::Expand { x, depth, convergents } => {
            let depth = cfg.pick(depth, "depth", 20usize)?;
            let real = Real::parse(&x)?;
            let cf = contfrac::cf_expand(&real, depth)?;
            writeln!(out, "{cf}").map_err(io_err)?;
            if let Some(alt) = cf.alternate() {
                writeln!(out, "{alt}").map_err(io_err)?;
            }
            if convergents {
                for c in contfrac::convergents(&cf, depth + 1) {
                    writeln!(out, "{}", rational_to_string(&c)).map_err(io_err)?;
                }
            }
            Ok(())
        }
        CfCmd::Zaremba { z, n, any_expansion } => {
            let n = cfg.pick(n, "n", 10_000u64)?;
            let conv = if any_expansion { ZarembaConvention::AnyExpansion } else { ZarembaConvention::Canonical };
            let missing = contfrac::zaremba_missing(z, n, conv)?;
            writeln!(out, "denominator").map_err(io_err)?;
            for q in missing {
                writeln!(out, "{q}").map_err(io_err)?;
            }
            Ok(())
        }
    }
}

fn forms_cmd(cmd: FormsCmd, out: &mut Vec<u8>) -> Result<()> {
    match cmd {
        FormsCmd::Reduce { form } => {
            let v = parse_list::<i64>(&form, 3, "form")?;
            let f = BinaryQF::new(v[0], v[1], v[2]);
            let d = f.discriminant();
            if d.is_negative() {
                let (g, m) = quadforms::reduce_definite(&f)?;
                writeln!(out, "{g}").map_err(io_err)?;
                writeln!(out, "matrix [[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1]).map_err(io_err)
            } else {
                let g = quadforms::reduce_indefinite(&f)?;
                writeln!(out, "{g}").map_err(io_err)?;
                let cycle = quadforms::indefinite_cycle(&g)?;
                writeln!(out, "cycle {}", cycle.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).map_err(io_err)
            }
        }
        FormsCmd::ClassNumber { disc } => {
            let reps = quadforms::class_reps(disc)?;
            writeln!(out, "h {}", reps.len()).map_err(io_err)?;
            for r in reps {
                writeln!(out, "{r}").map_err(io_err)?;
            }
            Ok(())
        }
        FormsCmd::Pell { disc } => {
            let (x, y) = quadforms::pell(disc)?;
            writeln!(out, "{x},{y}").map_err(io_err)
        }
    }
}
