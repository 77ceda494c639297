use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minlor::curvature::{curvature_from_jets, curvature_from_triples};
use minlor::equivalence::{mobius_apply_quadruple, same_solution};
use minlor::export::{self, fmt_f64};
use minlor::motions::{apply_motion, motion_from_spinors};
use minlor::nullcurve::{reparametrize_natural_from, NaturalParameter, DEFAULT_GRID_N};
use minlor::pdeverify::{self, verify_grids, ScalarGrid};
use minlor::{
    examples, CanonicalPair, Error, Generator, Interval, Mat2, MinimalSurface, Mobius, NullCurve, Quadruple, Region,
    Sign, Vec4, WeierstrassTriple,
};

const EXIT_FAIL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "minlor", version, about = "Minimal Lorentz surfaces in neutral 4-space")]
#[command(args_override_self = true)]
struct Cli {
    /// Plain-text key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for grid commands.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate, sample and verify one of the example surfaces.
    Example(ExampleArgs),
    /// Sample positions, E and curvatures of a surface to CSV (and optionally OBJ).
    Surface(SurfaceArgs),
    /// Write a (K, kappa) grid to CSV.
    Curvature(CurvatureArgs),
    /// Check the natural equations on a surface or on a CSV grid.
    Verify(VerifyArgs),
    /// Decide whether two quadruples give the same (K, kappa) field.
    Equiv(EquivArgs),
    /// Build the motion induced by a pair of SL(2) matrices.
    Motion(MotionArgs),
    /// Reparametrize a Weierstrass triple by its natural parameter.
    Reparam(ReparamArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ExampleName {
    M1,
    M2,
    M3,
    Enneper,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(value_enum)]
    name: ExampleName,
    #[arg(long, default_value_t = 1.0)]
    k1: f64,
    #[arg(long, default_value_t = 1.0)]
    l1: f64,
    #[arg(long, default_value_t = 1.0)]
    k2: f64,
    #[arg(long, default_value_t = 1.0)]
    l2: f64,
    /// u0,u1,v0,v1 (defaults depend on the example)
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Finite-difference step for verification.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, default_value_t = pdeverify::DEFAULT_TOL)]
    tol: f64,
    /// Samples per axis for the surface and curvature CSVs.
    #[arg(long, default_value_t = 31)]
    n: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Also write an OBJ projection.
    #[arg(long)]
    obj: bool,
    /// Coordinate (1-4) dropped in the OBJ projection.
    #[arg(long, default_value_t = 3)]
    drop: usize,
}

#[derive(Args, Debug, Clone)]
struct GenArgs {
    /// f of the first generator; omit for a natural pair (g1, h1, omega1).
    #[arg(long, allow_hyphen_values = true)]
    f1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g1: String,
    #[arg(long, allow_hyphen_values = true)]
    h1: String,
    #[arg(long, allow_hyphen_values = true)]
    f2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g2: String,
    #[arg(long, allow_hyphen_values = true)]
    h2: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    omega1: i8,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    omega2: i8,
    /// Parameter interval of the first generator, a,b.
    #[arg(long, default_value = "-10,10", allow_hyphen_values = true)]
    dom1: String,
    #[arg(long, default_value = "-10,10", allow_hyphen_values = true)]
    dom2: String,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[command(flatten)]
    gens: GenArgs,
    #[arg(long, allow_hyphen_values = true)]
    region: String,
    #[arg(long, default_value_t = 31)]
    nu: usize,
    #[arg(long, default_value_t = 31)]
    nv: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    obj: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    drop: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum PathKind {
    Auto,
    Jets,
    Triples,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[command(flatten)]
    gens: GenArgs,
    #[arg(long, allow_hyphen_values = true)]
    region: String,
    #[arg(long, default_value_t = 31)]
    nu: usize,
    #[arg(long, default_value_t = 31)]
    nv: usize,
    /// Formula path; auto uses the canonical form when both generators are natural.
    #[arg(long, value_enum, default_value_t = PathKind::Auto)]
    path: PathKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    gens: Option<GenArgs>,
    /// CSV with columns u,v,K,kappa and optionally E.
    #[arg(long, conflicts_with_all = ["g1", "h1", "g2", "h2"])]
    input: Option<PathBuf>,
    /// Sign used when the input has no E column.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<i8>,
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, default_value_t = pdeverify::DEFAULT_TOL)]
    tol: f64,
    /// Per-point residual CSV.
    #[arg(long)]
    residuals: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EquivArgs {
    /// g1,h1,g2,h2
    #[arg(long, allow_hyphen_values = true)]
    qa: String,
    #[arg(long, allow_hyphen_values = true)]
    qb: Option<String>,
    /// a1,b1,c1,d1,a2,b2,c2,d2 applied to qa when qb is absent.
    #[arg(long, allow_hyphen_values = true)]
    mobius: Option<String>,
    #[arg(long, default_value = "-10,10", allow_hyphen_values = true)]
    dom1: String,
    #[arg(long, default_value = "-10,10", allow_hyphen_values = true)]
    dom2: String,
    #[arg(long, allow_hyphen_values = true)]
    region: String,
    #[arg(long, default_value_t = 21)]
    n: usize,
    #[arg(long, default_value_t = minlor::equivalence::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    delta: i8,
}

#[derive(Args, Debug)]
struct MotionArgs {
    /// a,b,c,d of B1 (row-major)
    #[arg(long, allow_hyphen_values = true)]
    b1: String,
    #[arg(long, allow_hyphen_values = true)]
    b2: String,
    /// Report the isometry and determinant defects; exit 3 above 1e-12.
    #[arg(long)]
    check: bool,
    /// x1,x2,x3,x4 to map.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
}

#[derive(Args, Debug)]
struct ReparamArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    #[arg(long, allow_hyphen_values = true)]
    h: String,
    #[arg(long, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    t1: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_N)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::Input(msg.into()))
}

fn floats(text: &str, n: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| input_err(format!("{what}: expected {n} comma-separated numbers, got `{text}`")))?;
    if vals.len() != n || vals.iter().any(|x| !x.is_finite()) {
        return Err(input_err(format!("{what}: expected {n} finite numbers, got `{text}`")));
    }
    Ok(vals)
}

fn interval(text: &str, what: &str) -> Result<Interval, Failure> {
    let v = floats(text, 2, what)?;
    Ok(Interval::new(v[0], v[1])?)
}

fn region(text: &str) -> Result<Region, Failure> {
    let v = floats(text, 4, "region")?;
    Ok(Region::new(v[0], v[1], v[2], v[3])?)
}

fn sign(x: i8, what: &str) -> Result<Sign, Failure> {
    match x {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(input_err(format!("{what} must be 1 or -1"))),
    }
}

fn generator(f: &Option<String>, g: &str, h: &str, omega: i8, dom: Interval) -> Result<Generator, Failure> {
    Ok(match f {
        Some(f) => Generator::Triple(WeierstrassTriple::parse(f, g, h, dom)?),
        None => Generator::Canonical(CanonicalPair::parse(g, h, sign(omega, "omega")?, dom)?),
    })
}

fn build_surface(a: &GenArgs) -> Result<MinimalSurface, Failure> {
    let g1 = generator(&a.f1, &a.g1, &a.h1, a.omega1, interval(&a.dom1, "dom1")?)?;
    let g2 = generator(&a.f2, &a.g2, &a.h2, a.omega2, interval(&a.dom2, "dom2")?)?;
    Ok(MinimalSurface::new(g1, g2)?)
}

fn writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn positive(x: f64, what: &str) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(input_err(format!("{what} must be positive and finite")))
    }
}

fn obj_axis(drop: usize) -> Result<usize, Failure> {
    if (1..=4).contains(&drop) {
        Ok(drop - 1)
    } else {
        Err(input_err("--drop must be 1, 2, 3 or 4"))
    }
}

fn cmd_example(a: &ExampleArgs) -> CmdResult {
    positive(a.h, "--h")?;
    positive(a.tol, "--tol")?;
    let (default_region, tag) = match a.name {
        ExampleName::M1 => ("0.35,0.65,0.35,0.65", "m1"),
        ExampleName::M2 => ("0.35,0.65,0.35,0.65", "m2"),
        ExampleName::M3 => ("0.8,1.2,-0.2,0.2", "m3"),
        ExampleName::Enneper => ("0.35,0.65,0.35,0.65", "enneper"),
    };
    let r = region(a.region.as_deref().unwrap_or(default_region))?;
    let s = match a.name {
        ExampleName::M1 => examples::m1()?,
        ExampleName::M2 => examples::m2()?,
        ExampleName::M3 => examples::m3()?,
        ExampleName::Enneper => {
            if a.k1 == a.k2 || a.l1 == a.l2 {
                return Err(Error::Audit(format!(
                    "E vanishes on the line t1 = t2: g1 = g2 or h1 = h2 there (k1={}, l1={}, k2={}, l2={})",
                    a.k1, a.l1, a.k2, a.l2
                ))
                .into());
            }
            examples::pair(a.k1, a.l1, a.k2, a.l2, r.center())?
        }
    };
    let audit_n = a.n.max(21) | 1;
    s.audit_region(&r, audit_n)?;
    let n = a.n.max(1);
    let samples = s.sample_grid(&r, n, n, true)?;
    fs::create_dir_all(&a.out_dir)?;
    let file = |ext: &str| a.out_dir.join(format!("{tag}_{ext}"));
    export::write_surface_csv(&mut BufWriter::new(File::create(file("surface.csv"))?), &samples)?;
    export::write_curvature_csv(&mut BufWriter::new(File::create(file("curvature.csv"))?), &samples)?;
    if a.obj {
        export::write_obj(&mut BufWriter::new(File::create(file("surface.obj"))?), &samples, n, n, obj_axis(a.drop)?)?;
    }
    let v = pdeverify::verify_surface(&s, &r, a.h, a.tol)?;
    let mut report = Vec::new();
    writeln!(report, "surface={tag}")?;
    writeln!(report, "type={}", s.classify())?;
    writeln!(report, "renumbered={}", s.renumbered())?;
    export::write_report(&mut report, &v.report, Some(v.pass))?;
    fs::write(file("report.txt"), &report)?;
    io::stdout().write_all(&report)?;
    if v.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_surface(a: &SurfaceArgs) -> CmdResult {
    let s = build_surface(&a.gens)?;
    let r = region(&a.region)?;
    let samples = s.sample_grid(&r, a.nu, a.nv, true)?;
    let mut w = writer(&a.out)?;
    export::write_surface_csv(&mut w, &samples)?;
    w.flush()?;
    if let Some(p) = &a.obj {
        export::write_obj(&mut BufWriter::new(File::create(p)?), &samples, a.nu, a.nv, obj_axis(a.drop)?)?;
    }
    Ok(())
}

fn cmd_curvature(a: &CurvatureArgs) -> CmdResult {
    let s = build_surface(&a.gens)?;
    let r = region(&a.region)?;
    let mut samples = s.sample_grid(&r, a.nu, a.nv, false)?;
    if a.path != PathKind::Auto {
        for p in samples.iter_mut().filter(|p| !p.singular) {
            let c = match a.path {
                PathKind::Jets => curvature_from_jets(&s.gen1().jet(p.t1)?, &s.gen2().jet(p.t2)?)?,
                _ => curvature_from_triples(s.gen1(), s.gen2(), p.t1, p.t2)?,
            };
            p.k = c.k;
            p.kappa = c.kappa;
        }
    }
    let mut w = writer(&a.out)?;
    export::write_curvature_csv(&mut w, &samples)?;
    w.flush()?;
    Ok(())
}

/// Grids `(K, κ, E?)` read from a CSV with header naming `u, v, K, kappa` and optionally `E`.
fn read_grid_csv(path: &Path) -> Result<(ScalarGrid, ScalarGrid, Option<ScalarGrid>), Failure> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| input_err("empty input"))?.split(',').map(str::trim).collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (cu, cv, ck, ckap) = match (col("u"), col("v"), col("K"), col("kappa")) {
        (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
        _ => return Err(input_err("input header must contain u, v, K, kappa")),
    };
    let ce = col("E");
    let mut rows: BTreeMap<(i64, i64), [f64; 3]> = BTreeMap::new();
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for (n, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |c: usize| -> Result<f64, Failure> {
            let s = cells.get(c).ok_or_else(|| input_err(format!("row {}: missing column", n + 2)))?;
            s.parse::<f64>().map_err(|_| input_err(format!("row {}: bad number `{s}`", n + 2)))
        };
        let (u, v) = (get(cu)?, get(cv)?);
        if !(u.is_finite() && v.is_finite()) {
            return Err(input_err(format!("row {}: non-finite coordinate", n + 2)));
        }
        us.push(u);
        vs.push(v);
        let e = match ce {
            Some(c) => get(c)?,
            None => f64::NAN,
        };
        rows.insert((u.to_bits() as i64, v.to_bits() as i64), [get(ck)?, get(ckap)?, e]);
    }
    let axis = |xs: &mut Vec<f64>| {
        xs.sort_by(f64::total_cmp);
        xs.dedup();
    };
    axis(&mut us);
    axis(&mut vs);
    let (nu, nv) = (us.len(), vs.len());
    if nu < pdeverify::MIN_AXIS || nv < pdeverify::MIN_AXIS || rows.len() != nu * nv {
        return Err(input_err(format!("input is not a complete grid of at least 5x5 points ({} rows)", rows.len())));
    }
    let step = |xs: &[f64]| -> Result<f64, Failure> {
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
            return Err(input_err("grid spacing is not uniform"));
        }
        Ok(h)
    };
    let (du, dv) = (step(&us)?, step(&vs)?);
    let mut k = Vec::with_capacity(nu * nv);
    let mut kap = Vec::with_capacity(nu * nv);
    let mut e = Vec::with_capacity(nu * nv);
    for &u in &us {
        for &v in &vs {
            let [a, b, c] = rows[&(u.to_bits() as i64, v.to_bits() as i64)];
            k.push(a);
            kap.push(b);
            e.push(c);
        }
    }
    let mask: Vec<bool> = k.iter().zip(&kap).map(|(a, b)| a.is_finite() && b.is_finite()).collect();
    let grid = |vals: Vec<f64>| ScalarGrid::new(us[0], vs[0], du, dv, nu, nv, vals, mask.clone());
    let e = if ce.is_some() { Some(grid(e)?) } else { None };
    Ok((grid(k)?, grid(kap)?, e))
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    positive(a.tol, "--tol")?;
    let v = match (&a.input, &a.gens) {
        (Some(path), _) => {
            let (k, kappa, e) = read_grid_csv(path)?;
            let e = match (e, a.delta) {
                (_, Some(d)) => {
                    let d = sign(d, "--delta")?.value();
                    ScalarGrid { values: vec![d; k.values.len()], ..k.clone() }
                }
                (Some(e), None) => e,
                (None, None) => return Err(input_err("input has no E column; pass --delta")),
            };
            verify_grids(&k, &kappa, &e, a.tol)?
        }
        (None, Some(g)) => {
            positive(a.h, "--h")?;
            let s = build_surface(g)?;
            let r = region(a.region.as_deref().ok_or_else(|| input_err("--region is required"))?)?;
            pdeverify::verify_surface(&s, &r, a.h, a.tol)?
        }
        (None, None) => return Err(input_err("pass generators or --input")),
    };
    if let Some(p) = &a.residuals {
        export::write_residual_csv(&mut BufWriter::new(File::create(p)?), &v.points)?;
    }
    let mut out = io::stdout().lock();
    export::write_report(&mut out, &v.report, Some(v.pass))?;
    if v.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn quadruple(text: &str, dom1: Interval, dom2: Interval) -> Result<Quadruple, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    let [g1, h1, g2, h2] = parts[..] else {
        return Err(input_err(format!("quadruple needs four comma-separated expressions, got `{text}`")));
    };
    Ok(Quadruple::parse([g1, h1, g2, h2], dom1, dom2)?)
}

fn cmd_equiv(a: &EquivArgs) -> CmdResult {
    positive(a.tol, "--tol")?;
    let (d1, d2) = (interval(&a.dom1, "dom1")?, interval(&a.dom2, "dom2")?);
    let qa = quadruple(&a.qa, d1, d2)?;
    let qb = match (&a.qb, &a.mobius) {
        (Some(q), None) => quadruple(q, d1, d2)?,
        (None, Some(m)) => {
            let c = floats(m, 8, "--mobius")?;
            let m1 = Mobius::new(c[0], c[1], c[2], c[3])?;
            let m2 = Mobius::new(c[4], c[5], c[6], c[7])?;
            mobius_apply_quadruple(&qa, &m1, &m2)?
        }
        _ => return Err(input_err("pass exactly one of --qb or --mobius")),
    };
    let r = region(&a.region)?;
    let cmp = same_solution(&qa, &qb, sign(a.delta, "--delta")?, &r, a.n, a.n, a.tol)?;
    println!("same={}", cmp.same);
    println!("max_rel_diff={}", fmt_f64(cmp.max_rel_diff));
    println!("compared={}", cmp.compared);
    println!("mask_mismatch={}", cmp.mask_mismatch);
    if cmp.same {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_motion(a: &MotionArgs) -> CmdResult {
    let mat = |s: &str, what: &str| -> Result<Mat2, Failure> {
        let v = floats(s, 4, what)?;
        Ok(Mat2::new(v[0], v[1], v[2], v[3]))
    };
    let m = motion_from_spinors(&mat(&a.b1, "--b1")?, &mat(&a.b2, "--b2")?)?;
    for row in &m.a {
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        println!("A={}", cells.join(","));
    }
    if let Some(p) = &a.point {
        let x = floats(p, 4, "--point")?;
        let y = apply_motion(&m, Vec4::new(x[0], x[1], x[2], x[3]));
        println!("image={}", y.0.map(fmt_f64).join(","));
    }
    if a.check {
        let iso = m.isometry_defect();
        let det = (m.det() - 1.0).abs();
        println!("isometry_defect={}", fmt_f64(iso));
        println!("det_defect={}", fmt_f64(det));
        let ok = iso <= 1e-12 && det <= 1e-12;
        println!("pass={ok}");
        if !ok {
            return Err(Failure::Verification);
        }
    }
    Ok(())
}

fn cmd_reparam(a: &ReparamArgs) -> CmdResult {
    let dom = Interval::new(a.t0, a.t1)?;
    let tr = WeierstrassTriple::parse(&a.f, &a.g, &a.h, dom)?;
    let pair = reparametrize_natural_from(&tr, a.t0, a.n, None)?;
    let param = NaturalParameter::new(&tr, a.t0, dom, a.n, None)?;
    let mut w = writer(&a.out)?;
    writeln!(w, "# omega={} s_max={}", pair.omega.value(), fmt_f64(pair.domain.max))?;
    writeln!(w, "s,t,g,dg,h,dh")?;
    for s in pair.domain.grid(a.n) {
        let t = param.t_of(s)?;
        let cells = [s, t, pair.g.eval(s)?, pair.g.eval_derivative(s)?, pair.h.eval(s)?, pair.h.eval_derivative(s)?];
        writeln!(w, "{}", cells.map(fmt_f64).join(","))?;
    }
    w.flush()?;
    let worst = pair.domain.grid(1000).map(|s| pair.to_triple().alpha_pp_sq(s).map(|v| (v.abs() - 1.0).abs()));
    let mut m = 0.0_f64;
    for x in worst {
        m = m.max(x?);
    }
    eprintln!("natural-parameter defect max||alpha''^2|-1| = {}", fmt_f64(m));
    Ok(())
}

const SUBCOMMANDS: [&str; 7] = ["example", "surface", "curvature", "verify", "equiv", "motion", "reparam"];
const GLOBAL_KEYS: [&str; 1] = ["threads"];

/// Splices `--key=value` entries from the config file into `argv` so that
/// command-line flags, which come later, override them.
fn apply_config(argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or_else(|| input_err("--config needs a path"))?,
    };
    let text = fs::read_to_string(&path).map_err(|e| input_err(format!("cannot read config `{path}`: {e}")))?;
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| input_err(format!("config line {}: expected key=value", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        let flag = match v {
            "true" => format!("--{k}"),
            "false" => continue,
            _ => format!("--{k}={v}"),
        };
        if GLOBAL_KEYS.contains(&k) {
            global.push(flag);
        } else {
            local.push(flag);
        }
    }
    let mut out = argv;
    let sub = out.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    match sub {
        Some(i) => {
            // positional arguments of `example` must stay in place
            let at = if out[i] == "example" && out.get(i + 1).is_some_and(|a| !a.starts_with('-')) { i + 2 } else { i + 1 };
            out.splice(at..at, local);
            out.splice(1..1, global);
        }
        None => out.splice(1..1, global.into_iter().chain(local)).for_each(drop),
    }
    Ok(out)
}

fn run(argv: Vec<String>) -> CmdResult {
    let argv = apply_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid usage").trim_start_matches("error: ");
            return Err(Failure::Lib(Error::Input(first.to_string())));
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(input_err("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| input_err(format!("thread pool: {e}")))?;
    }
    match &cli.cmd {
        Cmd::Example(a) => cmd_example(a),
        Cmd::Surface(a) => cmd_surface(a),
        Cmd::Curvature(a) => cmd_curvature(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Equiv(a) => cmd_equiv(a),
        Cmd::Motion(a) => cmd_motion(a),
        Cmd::Reparam(a) => cmd_reparam(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Lib(e)) => {
            let msg = e.to_string().replace('"', "'");
            eprintln!("error: kind={} message=\"{}\"", e.kind(), msg);
            ExitCode::from(EXIT_FAIL)
        }
    }
}
