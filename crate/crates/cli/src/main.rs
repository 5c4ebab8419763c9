//! Command-line front end: curve sampling, the closed-curve table,
//! self-intersection enumeration, Dirichlet solving, and cross-check suites.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use helastica::closed;
use helastica::dirichlet::{self, AssembleOutcome, DirichletProblem, SolveConfig};
use helastica::elastica::{
    hyperbolic_distance, CurveState, HyperbolicPoint, OrbitlikeCurve, SpecialCurve, WavelikeCurve,
    WavelikeEnclosure,
};
use helastica::error::Error as CoreError;
use helastica::fundamental::{
    rotation_delta_theta, solve_k_for_rotation, OrbitlikeSystem, WavelikeSystem,
};
use helastica::oracle::{self, IntegrationConfig};
use helastica::special;

#[derive(Parser)]
#[command(
    name = "helastica",
    version,
    about = "Elastic curves in the hyperbolic plane: sampling, closed-curve tables, \
             self-intersections, and the Dirichlet boundary problem"
)]
struct Cli {
    /// Output format (defaults: csv for sample/table/intersections, json for
    /// dirichlet/verify; svg only for sample and intersections)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Residual tolerance of the Dirichlet solver
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker thread count (falls back to HELASTICA_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a curve as s,gamma1,gamma2,phi,kappa rows (or an SVG figure)
    Sample(SampleArgs),
    /// All closed curves with denominator n up to a bound
    Table {
        /// largest denominator n to include
        #[arg(long, default_value_t = 20)]
        max_n: u32,
    },
    /// Self-intersections of the closed curve with rotation number m/n
    Intersections {
        /// rotation number as m/n, e.g. 2/3
        #[arg(value_parser = parse_ratio)]
        ratio: (u32, u32),
    },
    /// Solve the Dirichlet boundary problem for orbitlike curves
    Dirichlet(DirichletArgs),
    /// Run cross-check suites and emit a JSON report
    Verify {
        /// all, special, fundamental, elastica, closed, dirichlet, or oracle
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Orbitlike,
    Wavelike,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum, default_value_t = Family::Orbitlike)]
    family: Family,

    /// Modulus as a decimal, or a rotation target m/n (orbitlike only)
    #[arg(long, default_value = "0.8", value_parser = parse_k_spec)]
    k: KSpec,

    /// Curvature phase s*
    #[arg(long, default_value_t = 0.0)]
    s_star: f64,

    /// Initial state "x1,x2,phi" imposed at the start of the range
    #[arg(long, default_value = "0,1,0", value_parser = parse_start)]
    start: StartState,

    /// Arclength range "s0:s1"; defaults to one curvature period, or the full
    /// loop when k is a rotation target
    #[arg(long, value_parser = parse_range)]
    range: Option<SampleRange>,

    /// Number of samples (0 emits the header only)
    #[arg(long, default_value_t = 1000)]
    count: usize,
}

#[derive(Args)]
struct DirichletArgs {
    #[arg(long, allow_hyphen_values = true)]
    a1: f64,
    #[arg(long)]
    a2: f64,
    #[arg(long, allow_hyphen_values = true)]
    b1: f64,
    #[arg(long)]
    b2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_b: f64,
    #[arg(long, default_value_t = 0.02)]
    k_min: f64,
    #[arg(long, default_value_t = 0.998)]
    k_max: f64,
    /// Largest |l| tried for the branch integer
    #[arg(long, default_value_t = 40)]
    l_max: i64,
    /// Seed-grid resolution in the modulus direction
    #[arg(long, default_value_t = 40)]
    grid: usize,
}

#[derive(Clone)]
enum KSpec {
    Value(f64),
    Rotation(u32, u32),
}

#[derive(Clone, Copy)]
struct StartState {
    x1: f64,
    x2: f64,
    phi: f64,
}

#[derive(Clone, Copy)]
struct SampleRange {
    s0: f64,
    s1: f64,
}

fn parse_k_spec(raw: &str) -> Result<KSpec, String> {
    let raw = raw.trim();
    if let Some((m_str, n_str)) = raw.split_once('/') {
        let m: u32 = m_str
            .trim()
            .parse()
            .map_err(|_| format!("bad rotation target `{raw}`: m must be a positive integer"))?;
        let n: u32 = n_str
            .trim()
            .parse()
            .map_err(|_| format!("bad rotation target `{raw}`: n must be a positive integer"))?;
        if m == 0 || n == 0 {
            return Err(format!("bad rotation target `{raw}`: m and n must be nonzero"));
        }
        Ok(KSpec::Rotation(m, n))
    } else {
        let v: f64 = raw
            .parse()
            .map_err(|_| format!("bad modulus `{raw}`: expected a decimal or m/n"))?;
        Ok(KSpec::Value(v))
    }
}

fn parse_ratio(raw: &str) -> Result<(u32, u32), String> {
    match parse_k_spec(raw)? {
        KSpec::Rotation(m, n) => Ok((m, n)),
        KSpec::Value(_) => Err(format!("expected a rational m/n, got `{raw}`")),
    }
}

fn parse_start(raw: &str) -> Result<StartState, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("bad start `{raw}`: expected x1,x2,phi"));
    }
    let mut vals = [0.0f64; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("bad start `{raw}`: `{part}` is not a number"))?;
    }
    Ok(StartState {
        x1: vals[0],
        x2: vals[1],
        phi: vals[2],
    })
}

fn parse_range(raw: &str) -> Result<SampleRange, String> {
    let (a, b) = raw
        .split_once(':')
        .ok_or_else(|| format!("bad range `{raw}`: expected s0:s1"))?;
    let s0: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range `{raw}`: `{a}` is not a number"))?;
    let s1: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range `{raw}`: `{b}` is not a number"))?;
    if !(s1 > s0) {
        return Err(format!("bad range `{raw}`: need s1 > s0"));
    }
    Ok(SampleRange { s0, s1 })
}

struct Failure {
    code: i32,
    message: String,
}

fn invalid<S: Into<String>>(msg: S) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

fn numeric_failure<S: Into<String>>(msg: S) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Numerical(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        numeric_failure(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("HELASTICA_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = threads {
        if n > 0 {
            // a failure here just means a pool already exists
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    if let Err(f) = run(&cli) {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let format = resolve_format(cli)?;
    let (payload, post) = match &cli.command {
        Command::Sample(args) => (cmd_sample(args, format)?, None),
        Command::Table { max_n } => (cmd_table(*max_n, format)?, None),
        Command::Intersections { ratio } => (cmd_intersections(ratio.0, ratio.1, format)?, None),
        Command::Dirichlet(args) => (cmd_dirichlet(args, cli.tol)?, None),
        Command::Verify { suite } => {
            let (payload, failures) = cmd_verify(suite)?;
            let post = (failures > 0)
                .then(|| numeric_failure(format!("{failures} verification check(s) failed")));
            (payload, post)
        }
    };
    emit(cli, &payload)?;
    match post {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn resolve_format(cli: &Cli) -> Result<Format, Failure> {
    let default = match cli.command {
        Command::Sample(_) | Command::Table { .. } | Command::Intersections { .. } => Format::Csv,
        Command::Dirichlet(_) | Command::Verify { .. } => Format::Json,
    };
    let fmt = cli.format.unwrap_or(default);
    match (&cli.command, fmt) {
        (Command::Table { .. }, Format::Svg) => Err(invalid(
            "svg output is only valid for the sample and intersections commands",
        )),
        (Command::Dirichlet(_) | Command::Verify { .. }, Format::Svg) => Err(invalid(
            "svg output is only valid for the sample and intersections commands",
        )),
        (Command::Dirichlet(_), Format::Csv) => {
            Err(invalid("the dirichlet command reports json only"))
        }
        (Command::Verify { .. }, Format::Csv) => {
            Err(invalid("the verify command reports json only"))
        }
        _ => Ok(fmt),
    }
}

fn emit(cli: &Cli, payload: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, payload.as_bytes())?,
        None => std::io::stdout().lock().write_all(payload.as_bytes())?,
    }
    Ok(())
}

/// 17 significant digits; the fixed width keeps byte-identical reruns.
fn ff(x: f64) -> String {
    format!("{x:.16e}")
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| numeric_failure(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| numeric_failure(e.to_string()))
}

enum AnyCurve {
    Orbit(OrbitlikeCurve),
    Wave(WavelikeCurve),
}

impl AnyCurve {
    fn evaluate(&self, s: f64) -> CurveState {
        match self {
            AnyCurve::Orbit(c) => c.evaluate(s),
            AnyCurve::Wave(c) => c.evaluate(s),
        }
    }
}

fn cmd_sample(args: &SampleArgs, format: Format) -> Result<String, Failure> {
    let k = match (&args.k, args.family) {
        (KSpec::Value(v), _) => *v,
        (KSpec::Rotation(m, n), Family::Orbitlike) => closed::solve_k_mn(*m, *n)?,
        (KSpec::Rotation(..), Family::Wavelike) => {
            return Err(invalid(
                "a rotation target m/n selects a closed orbitlike curve; \
                 wavelike curves take a decimal modulus",
            ))
        }
    };
    let loops = match &args.k {
        KSpec::Rotation(_, n) => *n as f64,
        KSpec::Value(_) => 1.0,
    };
    let point = HyperbolicPoint::new(args.start.x1, args.start.x2);

    let (curve, period) = match args.family {
        Family::Orbitlike => {
            let system = OrbitlikeSystem::new(k, args.s_star)?;
            let period = system.period();
            let s0 = args.range.map_or(0.0, |r| r.s0);
            let curve = OrbitlikeCurve::fit(system, point, args.start.phi, s0)?;
            (AnyCurve::Orbit(curve), period)
        }
        Family::Wavelike => {
            let system = WavelikeSystem::new(k, args.s_star)?;
            let period = system.period();
            let s0 = args.range.map_or(0.0, |r| r.s0);
            let curve = WavelikeCurve::fit(system, point, args.start.phi, s0)?;
            (AnyCurve::Wave(curve), period)
        }
    };
    let range = args.range.unwrap_or(SampleRange {
        s0: 0.0,
        // one κ-period by default; the n-fold cover closes a rational target
        s1: loops * period,
    });

    let count = args.count;
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let s = if count == 1 {
            range.s0
        } else {
            range.s0 + (range.s1 - range.s0) * i as f64 / (count - 1) as f64
        };
        samples.push((s, curve.evaluate(s)));
    }

    match format {
        Format::Csv => {
            let mut out = String::from("s,gamma1,gamma2,phi,kappa\n");
            for (s, st) in &samples {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    ff(*s),
                    ff(st.gamma1),
                    ff(st.gamma2),
                    ff(st.phi),
                    ff(st.kappa)
                ));
            }
            Ok(out)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                s: f64,
                gamma1: f64,
                gamma2: f64,
                phi: f64,
                kappa: f64,
            }
            let rows: Vec<Row> = samples
                .iter()
                .map(|(s, st)| Row {
                    s: *s,
                    gamma1: st.gamma1,
                    gamma2: st.gamma2,
                    phi: st.phi,
                    kappa: st.kappa,
                })
                .collect();
            to_json(&rows)
        }
        Format::Svg => {
            let pts: Vec<(f64, f64)> = samples.iter().map(|(_, st)| (st.gamma1, st.gamma2)).collect();
            let mut scene = SvgScene::new();
            scene.add_enclosure(&curve);
            scene.polylines.push(pts);
            Ok(scene.render())
        }
    }
}

fn cmd_table(max_n: u32, format: Format) -> Result<String, Failure> {
    if max_n < 3 {
        return Err(invalid("no closed curve exists below n = 3"));
    }
    let records = closed::table(max_n)?;
    match format {
        Format::Csv => {
            let mut out = String::from("n,m,k,willmore,length,intersections\n");
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    r.m,
                    ff(r.k_mn),
                    ff(r.willmore_w),
                    ff(r.length_l),
                    r.selfint_s
                ));
            }
            Ok(out)
        }
        Format::Json => to_json(&records),
        Format::Svg => unreachable!("rejected in resolve_format"),
    }
}

fn cmd_intersections(m: u32, n: u32, format: Format) -> Result<String, Failure> {
    let points = closed::self_intersections(m, n)?;
    match format {
        Format::Csv => {
            let mut out = String::from("l,p,s,partner_s,x1,x2\n");
            for q in &points {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    q.l,
                    q.p,
                    ff(q.s),
                    ff(q.partner_s),
                    ff(q.point.x1),
                    ff(q.point.x2)
                ));
            }
            Ok(out)
        }
        Format::Json => to_json(&points),
        Format::Svg => {
            let curve = closed::canonical_curve(m, n)?;
            let length = closed::closed_curve_record(m, n)?.length_l;
            let count = 512 * n as usize;
            let pts: Vec<(f64, f64)> = (0..=count)
                .map(|i| {
                    let st = curve.evaluate(length * i as f64 / count as f64);
                    (st.gamma1, st.gamma2)
                })
                .collect();
            let mut scene = SvgScene::new();
            scene.add_enclosure(&AnyCurve::Orbit(curve));
            scene.polylines.push(pts);
            for q in &points {
                scene.dots.push((q.point.x1, q.point.x2));
            }
            Ok(scene.render())
        }
    }
}

#[derive(Serialize)]
struct SolutionOut {
    #[serde(flatten)]
    solution: dirichlet::DirichletSolution,
    /// [s, gamma1, gamma2] along the solution, 257 samples over [0, L]
    path: Vec<[f64; 3]>,
}

fn cmd_dirichlet(args: &DirichletArgs, tol: Option<f64>) -> Result<String, Failure> {
    if !(args.k_min > 0.0 && args.k_min < args.k_max && args.k_max < 1.0) {
        return Err(invalid("need 0 < k-min < k-max < 1"));
    }
    if args.grid < 2 {
        return Err(invalid("grid must be at least 2"));
    }
    if args.l_max < 1 {
        return Err(invalid("l-max must be at least 1"));
    }
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(invalid("tol must be positive"));
        }
    }
    let problem = DirichletProblem::new(args.a1, args.a2, args.b1, args.b2, args.phi_a, args.phi_b)?;
    let config = SolveConfig {
        k_min: args.k_min,
        k_max: args.k_max,
        k_count: args.grid,
        s_star_count: (args.grid * 2 / 5).max(4),
        l_max: args.l_max,
        tol: tol.unwrap_or(1e-10),
        ..SolveConfig::default()
    };
    let solutions = dirichlet::solve(&problem, &config)?;
    let out = solutions
        .iter()
        .map(|sol| {
            let curve = sol.curve()?;
            let path = (0..=256)
                .map(|i| {
                    let s = sol.length * i as f64 / 256.0;
                    let st = curve.evaluate(s);
                    [s, st.gamma1, st.gamma2]
                })
                .collect();
            Ok(SolutionOut {
                solution: sol.clone(),
                path,
            })
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    to_json(&out)
}

// ---------------------------------------------------------------------------
// SVG rendering

struct SvgScene {
    polylines: Vec<Vec<(f64, f64)>>,
    /// center, radius, dashed?
    circles: Vec<(f64, f64, f64, bool)>,
    /// world-space line segments (cone rays, boundary marks)
    segments: Vec<((f64, f64), (f64, f64))>,
    dots: Vec<(f64, f64)>,
    /// bounding region of the enclosure; unioned with the samples
    frame: Option<(f64, f64, f64, f64)>,
    /// apex and slope of an unbounded cone bound, rendered last
    cone: Option<(f64, f64)>,
}

impl SvgScene {
    fn new() -> Self {
        SvgScene {
            polylines: Vec::new(),
            circles: Vec::new(),
            segments: Vec::new(),
            dots: Vec::new(),
            frame: None,
            cone: None,
        }
    }

    fn add_enclosure(&mut self, curve: &AnyCurve) {
        match curve {
            AnyCurve::Orbit(c) => {
                let e = c.enclosure();
                self.circles.push((
                    e.outer_center.x1,
                    e.outer_center.x2,
                    e.outer_radius,
                    false,
                ));
                self.circles.push((
                    e.inner_center.x1,
                    e.inner_center.x2,
                    e.inner_radius,
                    true,
                ));
                self.frame = Some((
                    e.outer_center.x1 - e.outer_radius,
                    e.outer_center.x1 + e.outer_radius,
                    (e.outer_center.x2 - e.outer_radius).min(0.0),
                    e.outer_center.x2 + e.outer_radius,
                ));
            }
            AnyCurve::Wave(c) => match c.enclosure() {
                WavelikeEnclosure::Band {
                    upper_center,
                    lower_center_x2,
                    radius,
                    boundary_limits,
                } => {
                    self.circles
                        .push((upper_center.x1, upper_center.x2, radius, false));
                    self.circles
                        .push((upper_center.x1, lower_center_x2, radius, true));
                    for x in boundary_limits {
                        self.dots.push((x, 0.0));
                    }
                    self.frame = Some((
                        upper_center.x1 - radius,
                        upper_center.x1 + radius,
                        0.0,
                        upper_center.x2 + radius,
                    ));
                }
                WavelikeEnclosure::Cone { apex_x1, slope } => {
                    self.dots.push((apex_x1, 0.0));
                    // rays drawn after the sample bbox is known
                    self.frame = Some((apex_x1, apex_x1, 0.0, 0.0));
                    self.cone = Some((apex_x1, slope));
                }
            },
        }
    }

    fn render(mut self) -> String {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        let mut grow = |x: f64, y: f64| {
            if x.is_finite() && y.is_finite() {
                xmin = xmin.min(x);
                xmax = xmax.max(x);
                ymin = ymin.min(y);
                ymax = ymax.max(y);
            }
        };
        if let Some((x0, x1, y0, y1)) = self.frame {
            grow(x0, y0);
            grow(x1, y1);
        }
        for line in &self.polylines {
            for &(x, y) in line {
                grow(x, y);
            }
        }
        for &(x, y) in &self.dots {
            grow(x, y);
        }
        drop(grow);
        if !xmin.is_finite() {
            (xmin, xmax, ymin, ymax) = (-1.0, 1.0, -1.0, 1.0);
        }
        if xmax - xmin < 1e-9 {
            xmin -= 0.5;
            xmax += 0.5;
        }
        if ymax - ymin < 1e-9 {
            ymin -= 0.5;
            ymax += 0.5;
        }
        let margin = 0.05 * (xmax - xmin).max(ymax - ymin);
        xmin -= margin;
        xmax += margin;
        ymin -= margin;
        ymax += margin;

        if let Some((apex, slope)) = self.cone {
            self.segments
                .push(((apex, 0.0), (apex + slope * ymax, ymax)));
            self.segments
                .push(((apex, 0.0), (apex - slope * ymax, ymax)));
        }

        let scale = 900.0 / (xmax - xmin).max(ymax - ymin);
        let w = (xmax - xmin) * scale;
        let h = (ymax - ymin) * scale;
        let px = |x: f64| (x - xmin) * scale;
        let py = |y: f64| h - (y - ymin) * scale;

        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             <rect x=\"0\" y=\"0\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"#ffffff\"/>\n"
        );
        if ymin < 0.0 && ymax > 0.0 {
            svg.push_str(&format!(
                "<line x1=\"0\" y1=\"{0:.2}\" x2=\"{w:.2}\" y2=\"{0:.2}\" \
                 stroke=\"#999999\" stroke-width=\"1\"/>\n",
                py(0.0)
            ));
        }
        for &(cx, cy, r, dashed) in &self.circles {
            let dash = if dashed { " stroke-dasharray=\"6 5\"" } else { "" };
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" \
                 stroke=\"#888888\" stroke-width=\"1\"{dash}/>\n",
                px(cx),
                py(cy),
                r * scale
            ));
        }
        for &((x0, y0), (x1, y1)) in &self.segments {
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"#888888\" stroke-width=\"1\"/>\n",
                px(x0),
                py(y0),
                px(x1),
                py(y1)
            ));
        }
        for line in &self.polylines {
            let mut points = String::new();
            for &(x, y) in line {
                points.push_str(&format!("{:.2},{:.2} ", px(x), py(y)));
            }
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fd0\" \
                 stroke-width=\"1.6\"/>\n",
                points.trim_end()
            ));
        }
        for &(x, y) in &self.dots {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.2\" fill=\"#c43131\"/>\n",
                px(x),
                py(y)
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize)]
struct CheckReport {
    suite: &'static str,
    check: &'static str,
    status: &'static str,
    detail: String,
}

struct Check {
    suite: &'static str,
    name: &'static str,
    run: fn() -> Result<(), String>,
}

const SUITES: [&str; 6] = [
    "special",
    "fundamental",
    "elastica",
    "closed",
    "dirichlet",
    "oracle",
];

fn cmd_verify(suite: &str) -> Result<(String, usize), Failure> {
    let suite = if suite == "special-functions" {
        "special"
    } else {
        suite
    };
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(invalid(format!(
            "unknown suite `{suite}`; valid: all, {}",
            SUITES.join(", ")
        )));
    }
    let checks = verify_checks();
    let mut reports = Vec::new();
    let mut failures = 0usize;
    for check in checks.iter().filter(|c| suite == "all" || c.suite == suite) {
        let report = match (check.run)() {
            Ok(()) => CheckReport {
                suite: check.suite,
                check: check.name,
                status: "pass",
                detail: String::new(),
            },
            Err(msg) => {
                failures += 1;
                CheckReport {
                    suite: check.suite,
                    check: check.name,
                    status: "fail",
                    detail: msg,
                }
            }
        };
        reports.push(report);
    }
    Ok((to_json(&reports)?, failures))
}

fn verify_checks() -> Vec<Check> {
    vec![
        Check {
            suite: "special",
            name: "legendre_relation",
            run: check_legendre_relation,
        },
        Check {
            suite: "special",
            name: "jacobi_pythagorean",
            run: check_jacobi_pythagorean,
        },
        Check {
            suite: "special",
            name: "inverse_round_trip",
            run: check_inverse_round_trip,
        },
        Check {
            suite: "special",
            name: "zeta_periodicity",
            run: check_zeta_periodicity,
        },
        Check {
            suite: "fundamental",
            name: "rotation_number_monotone",
            run: check_rotation_monotone,
        },
        Check {
            suite: "fundamental",
            name: "trefoil_rotation",
            run: check_trefoil_rotation,
        },
        Check {
            suite: "fundamental",
            name: "orbitlike_frame_identities",
            run: check_orbitlike_frame_identities,
        },
        Check {
            suite: "fundamental",
            name: "wavelike_frame_identities",
            run: check_wavelike_frame_identities,
        },
        Check {
            suite: "elastica",
            name: "orbitlike_frame_ode",
            run: check_orbitlike_frame_ode,
        },
        Check {
            suite: "elastica",
            name: "wavelike_frame_ode",
            run: check_wavelike_frame_ode,
        },
        Check {
            suite: "elastica",
            name: "enclosure_touch",
            run: check_enclosure_touch,
        },
        Check {
            suite: "elastica",
            name: "circular_special_curve",
            run: check_circular_special_curve,
        },
        Check {
            suite: "closed",
            name: "trefoil_record",
            run: check_trefoil_record,
        },
        Check {
            suite: "closed",
            name: "trefoil_intersections",
            run: check_trefoil_intersections,
        },
        Check {
            suite: "closed",
            name: "trefoil_winding",
            run: check_trefoil_winding,
        },
        Check {
            suite: "dirichlet",
            name: "sigma_invariant",
            run: check_sigma_invariant,
        },
        Check {
            suite: "dirichlet",
            name: "symmetry_breaking_case",
            run: check_symmetry_breaking_case,
        },
        Check {
            suite: "oracle",
            name: "curvature_first_integral",
            run: check_curvature_first_integral,
        },
        Check {
            suite: "oracle",
            name: "circular_frame_closure",
            run: check_circular_frame_closure,
        },
        Check {
            suite: "oracle",
            name: "orbitlike_vs_integration",
            run: check_orbitlike_vs_integration,
        },
    ]
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn core_err(e: CoreError) -> String {
    e.to_string()
}

fn check_legendre_relation() -> Result<(), String> {
    for &k in &[0.1f64, 0.5, 0.9, 0.99] {
        let kp = (1.0 - k * k).sqrt();
        let (big_k, big_e) = special::complete_k_e(k).map_err(core_err)?;
        let (big_kp, big_ep) = special::complete_k_e(kp).map_err(core_err)?;
        let lhs = big_e * big_kp + big_ep * big_k - big_k * big_kp;
        let err = (lhs - std::f64::consts::FRAC_PI_2).abs();
        ensure(
            err <= 1e-12,
            format!("Legendre relation off by {err:.3e} at k = {k}"),
        )?;
    }
    Ok(())
}

fn check_jacobi_pythagorean() -> Result<(), String> {
    for &k in &[0.3, 0.8, 0.9999] {
        for &u in &[-3.7, 0.4, 12.3] {
            let (sn, cn, dn) = special::jacobi_sn_cn_dn(u, k).map_err(core_err)?;
            let e1 = (sn * sn + cn * cn - 1.0).abs();
            let e2 = (dn * dn + k * k * sn * sn - 1.0).abs();
            ensure(
                e1 <= 1e-13 && e2 <= 1e-13,
                format!("Jacobi identities off by ({e1:.3e}, {e2:.3e}) at k = {k}, u = {u}"),
            )?;
        }
    }
    Ok(())
}

fn check_inverse_round_trip() -> Result<(), String> {
    let k = 0.8;
    for &u in &[0.2, 0.9, 1.9] {
        let (sn, _, dn) = special::jacobi_sn_cn_dn(u, k).map_err(core_err)?;
        let u_dn = special::inverse_dn(dn, k).map_err(core_err)?;
        let u_sn = special::inverse_sn(sn, k).map_err(core_err)?;
        ensure(
            (u_dn - u).abs() <= 1e-11 && (u_sn - u).abs() <= 1e-11,
            format!(
                "inverse round trip at u = {u}: dn gave {u_dn}, sn gave {u_sn}"
            ),
        )?;
    }
    Ok(())
}

fn check_zeta_periodicity() -> Result<(), String> {
    let m = special::EllipticModulus::new(0.7).map_err(core_err)?;
    for &z in &[0.3, 1.1] {
        let a = special::jacobi_zeta(z + 2.0 * m.big_k, &m);
        let b = special::jacobi_zeta(z, &m);
        ensure(
            (a - b).abs() <= 1e-12,
            format!("zeta periodicity off by {:.3e} at z = {z}", (a - b).abs()),
        )?;
        let odd = (special::jacobi_zeta(-z, &m) + b).abs();
        ensure(odd <= 1e-12, format!("zeta parity off by {odd:.3e}"))?;
    }
    Ok(())
}

fn check_rotation_monotone() -> Result<(), String> {
    let mut prev = f64::INFINITY;
    for i in 0..50 {
        let k = 0.05 + 0.90 * i as f64 / 49.0;
        let d = rotation_delta_theta(k).map_err(core_err)?;
        ensure(
            d < prev,
            format!("rotation number not strictly decreasing at k = {k}"),
        )?;
        ensure(
            d > std::f64::consts::PI && d < std::f64::consts::SQRT_2 * std::f64::consts::PI,
            format!("rotation number {d} outside (π, √2π) at k = {k}"),
        )?;
        prev = d;
    }
    Ok(())
}

fn check_trefoil_rotation() -> Result<(), String> {
    let target = 4.0 * std::f64::consts::PI / 3.0;
    let d = rotation_delta_theta(0.9362).map_err(core_err)?;
    ensure(
        (d - target).abs() <= 5e-4,
        format!("Δθ(0.9362) = {d}, expected {target} within 5e-4"),
    )?;
    let k = solve_k_for_rotation(target).map_err(core_err)?;
    let back = rotation_delta_theta(k).map_err(core_err)?;
    ensure(
        (back - target).abs() <= 1e-12,
        format!("rotation solve round trip off by {:.3e}", (back - target).abs()),
    )
}

fn check_orbitlike_frame_identities() -> Result<(), String> {
    let sys = OrbitlikeSystem::new(0.8, 0.0).map_err(core_err)?;
    let mu = sys.mu;
    for i in 0..41 {
        let s = -3.0 + 10.0 * i as f64 / 40.0;
        let f = sys.frame(s);
        let quad = (f.kappa * f.kappa - mu) / (f.kappa * f.kappa);
        let e1 = (f.w1 * f.w1 + f.w2 * f.w2 - quad).abs();
        let wron = f.w1 * f.w2_prime - f.w2 * f.w1_prime;
        let e2 = (wron - mu.sqrt() / 2.0).abs();
        let radius = quad.sqrt();
        let e3 = (f.w2 - radius * f.theta.cos()).abs() + (f.w1 + radius * f.theta.sin()).abs();
        ensure(
            e1 <= 1e-10 && e2 <= 1e-10 && e3 <= 1e-10,
            format!("orbitlike frame identities off by ({e1:.3e}, {e2:.3e}, {e3:.3e}) at s = {s}"),
        )?;
    }
    Ok(())
}

fn check_wavelike_frame_identities() -> Result<(), String> {
    let sys = WavelikeSystem::new(0.8, 0.0).map_err(core_err)?;
    let mu = sys.mu;
    for i in 0..41 {
        let s = -3.0 + 10.0 * i as f64 / 40.0;
        let f = sys.frame(s);
        let want = f.kappa * f.kappa - mu;
        let e1 = (f.w_hat2 * f.w_hat2 - f.w_hat1 * f.w_hat1 - want).abs();
        ensure(
            e1 <= 1e-10 * (1.0 + want.abs()),
            format!("wavelike frame identity off by {e1:.3e} at s = {s}"),
        )?;
    }
    Ok(())
}

fn frame_ode_residual(
    eval: &dyn Fn(f64) -> CurveState,
    s: f64,
) -> (f64, f64, f64) {
    let h = 1e-5;
    let a = eval(s - h);
    let b = eval(s + h);
    let c = eval(s);
    let d1 = (b.gamma1 - a.gamma1) / (2.0 * h);
    let d2 = (b.gamma2 - a.gamma2) / (2.0 * h);
    // difference of angles, immune to branch cuts of atan2
    let mut dphi_step = b.phi - a.phi;
    dphi_step -= std::f64::consts::TAU * (dphi_step / std::f64::consts::TAU).round();
    let dphi = dphi_step / (2.0 * h);
    (
        d1 - c.gamma2 * c.phi.cos(),
        d2 - c.gamma2 * c.phi.sin(),
        dphi + c.phi.cos() - c.kappa,
    )
}

fn check_frame_ode(eval: &dyn Fn(f64) -> CurveState, span: f64) -> Result<(), String> {
    for i in 0..17 {
        let s = span * i as f64 / 16.0;
        let st = eval(s);
        let scale = 1.0 + st.gamma2.abs();
        let (r1, r2, r3) = frame_ode_residual(eval, s);
        ensure(
            r1.abs() <= 1e-6 * scale && r2.abs() <= 1e-6 * scale && r3.abs() <= 1e-6,
            format!(
                "frame equations off by ({:.3e}, {:.3e}, {:.3e}) at s = {s}",
                r1, r2, r3
            ),
        )?;
    }
    Ok(())
}

fn check_orbitlike_frame_ode() -> Result<(), String> {
    let sys = OrbitlikeSystem::new(0.8, 0.3).map_err(core_err)?;
    let period = sys.period();
    let curve = OrbitlikeCurve::fit(sys, HyperbolicPoint::new(0.2, 1.1), 0.4, 0.0)
        .map_err(core_err)?;
    check_frame_ode(&|s| curve.evaluate(s), period)
}

fn check_wavelike_frame_ode() -> Result<(), String> {
    let sys = WavelikeSystem::new(0.8, 0.2).map_err(core_err)?;
    let period = sys.period();
    let curve = WavelikeCurve::fit(sys, HyperbolicPoint::new(0.1, 0.9), -0.3, 0.5)
        .map_err(core_err)?;
    check_frame_ode(&|s| curve.evaluate(s), period)
}

fn check_enclosure_touch() -> Result<(), String> {
    let sys = OrbitlikeSystem::new(0.8, 0.0).map_err(core_err)?;
    let period = sys.period();
    let curve =
        OrbitlikeCurve::fit(sys, HyperbolicPoint::new(0.0, 1.0), 0.0, 0.0).map_err(core_err)?;
    let enc = curve.enclosure();
    // curvature max at s = 0 touches the outer circle, min at s = period/2 the inner
    let at_max = curve.evaluate(0.0);
    let at_min = curve.evaluate(period / 2.0);
    let d_outer = ((at_max.gamma1 - enc.outer_center.x1).powi(2)
        + (at_max.gamma2 - enc.outer_center.x2).powi(2))
    .sqrt();
    let d_inner = ((at_min.gamma1 - enc.inner_center.x1).powi(2)
        + (at_min.gamma2 - enc.inner_center.x2).powi(2))
    .sqrt();
    let e_outer = (d_outer - enc.outer_radius).abs() / enc.outer_radius;
    let e_inner = (d_inner - enc.inner_radius).abs() / enc.inner_radius;
    ensure(
        e_outer <= 1e-9 && e_inner <= 1e-9,
        format!("enclosure touch off by ({e_outer:.3e}, {e_inner:.3e})"),
    )
}

fn check_circular_special_curve() -> Result<(), String> {
    let curve = SpecialCurve::Circular;
    let start = curve.evaluate(0.0);
    let end = curve.evaluate(2.0 * std::f64::consts::PI);
    let gap = ((end.gamma1 - start.gamma1).powi(2) + (end.gamma2 - start.gamma2).powi(2)).sqrt();
    ensure(gap <= 1e-12, format!("period-2π closure gap {gap:.3e}"))?;
    for i in 0..9 {
        let s = 2.0 * std::f64::consts::PI * i as f64 / 9.0;
        let st = curve.evaluate(s);
        ensure(
            (st.kappa - std::f64::consts::SQRT_2).abs() <= 1e-15 && st.gamma2 > 0.0,
            format!("state at s = {s} violates κ ≡ √2 in the upper half plane"),
        )?;
    }
    check_frame_ode(&|s| curve.evaluate(s), 2.0 * std::f64::consts::PI)
}

fn check_trefoil_record() -> Result<(), String> {
    let r = closed::closed_curve_record(2, 3).map_err(core_err)?;
    ensure(
        (r.k_mn - 0.9362).abs() <= 5e-5,
        format!("k_{{2,3}} = {}", r.k_mn),
    )?;
    ensure(
        (r.willmore_w - 39.96).abs() <= 0.01,
        format!("trefoil energy {}", r.willmore_w),
    )?;
    ensure(
        (r.length_l - 15.77).abs() <= 0.01,
        format!("trefoil length {}", r.length_l),
    )?;
    ensure(r.selfint_s == 3, format!("trefoil count {}", r.selfint_s))
}

fn check_trefoil_intersections() -> Result<(), String> {
    let points = closed::self_intersections(2, 3).map_err(core_err)?;
    ensure(points.len() == 3, format!("expected 3, got {}", points.len()))?;
    let curve = closed::canonical_curve(2, 3).map_err(core_err)?;
    for q in &points {
        let a = curve.evaluate(q.s);
        let b = curve.evaluate(q.partner_s);
        let d = hyperbolic_distance(
            HyperbolicPoint::new(a.gamma1, a.gamma2),
            HyperbolicPoint::new(b.gamma1, b.gamma2),
        )
        .map_err(core_err)?;
        ensure(
            d <= 1e-8,
            format!("pair ({}, {}) separated by {d:.3e}", q.s, q.partner_s),
        )?;
        let at_point = hyperbolic_distance(HyperbolicPoint::new(a.gamma1, a.gamma2), q.point)
            .map_err(core_err)?;
        ensure(
            at_point <= 1e-8,
            format!("reported point off the curve by {at_point:.3e}"),
        )?;
    }
    Ok(())
}

fn check_trefoil_winding() -> Result<(), String> {
    let w = closed::winding_number(2, 3).map_err(core_err)?;
    ensure(w == 2, format!("winding number {w}, expected 2"))
}

fn check_sigma_invariant() -> Result<(), String> {
    let problem = DirichletProblem::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0).map_err(core_err)?;
    let k = 0.8;
    let outcome = dirichlet::assemble(&problem, 0.0, k, 3).map_err(core_err)?;
    let a = match outcome {
        AssembleOutcome::Feasible(a) => a,
        AssembleOutcome::Infeasible(r) => {
            return Err(format!("assembly infeasible: {r:?}"));
        }
    };
    let sys = OrbitlikeSystem::new(k, 0.0).map_err(core_err)?;
    let kappa0 = sys.kappa(0.0);
    let mu = sys.mu;
    let a3_expected = (2.0 * kappa0 - kappa0 * kappa0) / (2.0 * mu);
    ensure(
        (a.a3 - a3_expected).abs() <= 1e-12 * a3_expected.abs(),
        format!("a3 = {}, expected {a3_expected}", a.a3),
    )?;
    ensure(a.b3.abs() <= 1e-9, format!("b3 = {}, expected 0", a.b3))?;
    let lhs = a.sigma.sigma1 * a.sigma.sigma1 + a.sigma.sigma2 * a.sigma.sigma2;
    let rhs = (kappa0 * kappa0 - mu) * a.a3 * a.a3;
    ensure(
        (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
        format!("σ quadratic {lhs} vs {rhs}"),
    )?;
    ensure(
        a.residual_r1.abs() <= 1e-10,
        format!("closed-data residual {:.3e}", a.residual_r1),
    )
}

fn check_symmetry_breaking_case() -> Result<(), String> {
    let record = closed::closed_curve_record(2, 3).map_err(core_err)?;
    let broken = dirichlet::symmetry_breaking_family(2, 3, 0.2, 1.0).map_err(core_err)?;
    ensure(
        broken.residual_r1.abs() <= 1e-10 && broken.residual_r2 <= 1e-10,
        format!(
            "residuals ({:.3e}, {:.3e})",
            broken.residual_r1, broken.residual_r2
        ),
    )?;
    ensure(!broken.symmetric, "s* = 0.2 should break the symmetry")?;
    ensure(
        (broken.length - record.length_l).abs() <= 1e-6 * record.length_l,
        format!("length {} vs closed {}", broken.length, record.length_l),
    )?;
    let straight = dirichlet::symmetry_breaking_family(2, 3, 0.0, 1.0).map_err(core_err)?;
    ensure(straight.symmetric, "s* = 0 should give the symmetric curve")
}

fn check_curvature_first_integral() -> Result<(), String> {
    let sys = OrbitlikeSystem::new(0.8, 0.0).map_err(core_err)?;
    let span = 10.0 * sys.period();
    let cfg = IntegrationConfig::default();
    let sol = oracle::integrate_curvature(sys.kappa(0.0), sys.kappa_prime(0.0), 0.0, span, &cfg)
        .map_err(core_err)?;
    let drift = (sol.mu_at(span) - sys.mu).abs();
    ensure(drift <= 1e-9, format!("first integral drifted by {drift:.3e}"))?;
    let (kappa_end, _) = sol.eval(span);
    let gap = (kappa_end - sys.kappa(span)).abs();
    ensure(gap <= 1e-8, format!("κ after 10 periods off by {gap:.3e}"))
}

fn check_circular_frame_closure() -> Result<(), String> {
    let cfg = IntegrationConfig::default();
    let span = 2.0 * std::f64::consts::PI;
    let sol = oracle::integrate_frame(
        |_| std::f64::consts::SQRT_2,
        0.0,
        1.0,
        0.0,
        0.0,
        span,
        &cfg,
    )
    .map_err(core_err)?;
    let (g1, g2, _) = sol.eval(span);
    let gap = (g1.powi(2) + (g2 - 1.0).powi(2)).sqrt();
    ensure(gap <= 1e-9, format!("closure gap {gap:.3e}"))?;
    let (m1, m2, _) = sol.eval(1.7);
    let reference = SpecialCurve::Circular.evaluate(1.7);
    let mid_gap = ((m1 - reference.gamma1).powi(2) + (m2 - reference.gamma2).powi(2)).sqrt();
    ensure(
        mid_gap <= 1e-9,
        format!("mid-curve gap to the closed form {mid_gap:.3e}"),
    )
}

fn check_orbitlike_vs_integration() -> Result<(), String> {
    let sys = OrbitlikeSystem::new(0.8, 0.3).map_err(core_err)?;
    let span = 2.0 * sys.period();
    let curve = OrbitlikeCurve::fit(sys, HyperbolicPoint::new(0.2, 1.1), 0.4, 0.0)
        .map_err(core_err)?;
    let cfg = IntegrationConfig::default();
    let sol = oracle::integrate_frame(|s| curve.kappa(s), 0.2, 1.1, 0.4, 0.0, span, &cfg)
        .map_err(core_err)?;
    let (g1, g2, phi) = sol.eval(span);
    let st = curve.evaluate(span);
    let pos_gap = ((g1 - st.gamma1).powi(2) + (g2 - st.gamma2).powi(2)).sqrt();
    let angle_gap = ((phi.cos() - st.phi.cos()).powi(2) + (phi.sin() - st.phi.sin()).powi(2)).sqrt();
    ensure(
        pos_gap <= 1e-8 && angle_gap <= 1e-8,
        format!("formula vs integration gaps ({pos_gap:.3e}, {angle_gap:.3e})"),
    )
}
