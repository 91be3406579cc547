//! Command dispatcher behind the `quiverdt` binary.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit code
//! together with whatever should go to stdout and stderr, so the whole CLI can
//! be exercised in tests without spawning processes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use quiverdt::dt::{admissible_tuples, dt_invariant, dt_record, dt_report, hn_check, wall_crossing_solve};
use quiverdt::fixture::{parse_fixture, parse_rep_literal, quiver_fixture, render_fixture, render_rep_literal, FixtureSpec};
use quiverdt::framed::{build_framed, build_hat_quiver, hat_dim_vectors, FRAMING_VERTEX};
use quiverdt::hall::{hall_product, tilde_a, HallElement};
use quiverdt::lattice::GradingLattice;
use quiverdt::qtorus::{integrate_i, integrate_ieq, integrate_ipsi, QTorusSeries};
use quiverdt::quiver::{
    check_homogeneous, check_positive_on_cycles, nongeneric_witness, parse_rational, rational_string,
};
use quiverdt::{Budget, DimVector, Error, Field, RepContext, StabilityParam, WeightFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "quiverdt", version, about = "Exact finite-field invariants of quivers with potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    I,
    Ieq,
    Ipsi,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Fixture file describing the quiver, potential, weights and stabilities.
    pub fixture: PathBuf,
    /// Field order; defaults to the first field declared in the fixture, else 2.
    #[arg(long)]
    pub q: Option<u32>,
    /// A stability label from the fixture or comma-separated rationals.
    #[arg(long)]
    pub theta: Option<String>,
    /// Componentwise truncation bound, comma-separated; defaults to all ones.
    #[arg(long)]
    pub bound: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = Budget::default().max_points)]
    pub max_points: u64,
    #[arg(long, default_value_t = Budget::default().max_group)]
    pub max_group: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homogeneity, positivity on cycles, primitivity and genericity.
    Check(Common),
    /// Semistable point counts and stack counts up to the bound.
    Count(Common),
    /// Invariants from point counts up to the bound.
    Dt(Common),
    /// Hall product of representation classes, left to right.
    Hall {
        #[command(flatten)]
        common: Common,
        /// Representation literal such as `dim=1,1 x=[1]`; repeat for a product.
        #[arg(long = "rep", required = true)]
        reps: Vec<String>,
    },
    /// Integrates the semistable elements up to the bound.
    Integrate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MapKind::I)]
        map: MapKind,
        /// Restrict to one dimension vector instead of everything below the bound.
        #[arg(long)]
        dim: Option<String>,
    },
    /// Checks the slope-ordered factorization degree by degree.
    VerifyHn(Common),
    /// Compares the wall-crossing formula with the direct count.
    Wallcross(Common),
    /// Builds the level-graded quiver of a framed quiver.
    Hat {
        #[command(flatten)]
        common: Common,
        /// Framing arrow `name:src->dst[=weight]`, one endpoint `*`.
        #[arg(long = "frame")]
        frames: Vec<String>,
        /// Dimension vector on the unframed vertices.
        #[arg(long)]
        dim: String,
        /// Stability value at the framing vertex.
        #[arg(long, default_value = "0")]
        theta_star: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Count(_) => "count",
            Command::Dt(_) => "dt",
            Command::Hall { .. } => "hall",
            Command::Integrate { .. } => "integrate",
            Command::VerifyHn(_) => "verify-hn",
            Command::Wallcross(_) => "wallcross",
            Command::Hat { .. } => "hat",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Check(c) | Command::Count(c) | Command::Dt(c) | Command::VerifyHn(c) | Command::Wallcross(c) => c,
            Command::Hall { common, .. } | Command::Integrate { common, .. } | Command::Hat { common, .. } => common,
        }
    }
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Plain rows for `--format table`.
#[derive(Default)]
struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
        for row in &self.rows {
            out += &line(row);
        }
        out
    }
}

struct Report {
    results: Vec<Value>,
    table: Table,
    /// Printed verbatim instead of the table when set.
    text: Option<String>,
    verified: bool,
}

impl Report {
    fn new(table: Table) -> Self {
        Report {
            results: Vec::new(),
            table,
            text: None,
            verified: true,
        }
    }
}

struct Session {
    spec: FixtureSpec,
    ctx: RepContext,
    theta: StabilityParam,
    bound: DimVector,
    budget: Budget,
}

fn load(common: &Common) -> Res<Session> {
    let text = std::fs::read_to_string(&common.fixture)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", common.fixture.display())))?;
    let spec = parse_fixture(&text)?;
    let field = match common.q {
        Some(q) => match spec.fields.iter().find(|f| f.q == q) {
            Some(decl) => decl.build()?,
            None => Field::new(q)?,
        },
        None => match spec.fields.first() {
            Some(decl) => decl.build()?,
            None => Field::new(2)?,
        },
    };
    let n = spec.quiver.num_vertices();
    let theta = match &common.theta {
        Some(t) => match spec.stability(t) {
            Some(theta) => theta.clone(),
            None => StabilityParam::parse(t)?,
        },
        None => spec
            .stability("main")
            .or_else(|| spec.stabilities.first().map(|(_, t)| t))
            .cloned()
            .unwrap_or_else(|| StabilityParam::zero(n)),
    };
    if theta.len() != n {
        return Err(Failure::Usage(format!("stability has {} entries, quiver has {n} vertices", theta.len())));
    }
    let bound = match &common.bound {
        Some(b) => DimVector::parse(b)?,
        None => DimVector(vec![1; n]),
    };
    if bound.len() != n {
        return Err(Failure::Usage(format!("bound has {} entries, quiver has {n} vertices", bound.len())));
    }
    let budget = Budget {
        max_points: common.max_points,
        max_group: common.max_group,
    };
    let ctx = RepContext::new(spec.quiver.clone(), field, budget);
    Ok(Session {
        spec,
        ctx,
        theta,
        bound,
        budget,
    })
}

fn quiver_hash(spec: &FixtureSpec) -> String {
    Sha256::digest(render_fixture(spec).as_bytes())
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn nonzero_below(bound: &DimVector) -> Vec<DimVector> {
    bound.sub_vectors().into_iter().filter(|a| !a.is_zero()).collect()
}

fn check(s: &Session) -> Res<Report> {
    let mut r = Report::new(Table::new(&["check", "pass", "detail"]));
    let q = &s.spec.quiver;
    let (pass, detail, value) = match check_homogeneous(q, &s.spec.potential, &s.spec.weights) {
        Ok(Some(d)) => (true, format!("weight {d}"), json!({"check": "homogeneous", "pass": true, "weight": d})),
        Ok(None) => (true, "zero potential".into(), json!({"check": "homogeneous", "pass": true, "weight": null})),
        Err(e) => (false, e.to_string(), json!({"check": "homogeneous", "pass": false, "reason": e.to_string()})),
    };
    r.table.push(vec!["homogeneous".into(), pass.to_string(), detail]);
    r.results.push(value);

    match check_positive_on_cycles(q, &s.spec.weights) {
        Ok(()) => {
            r.table.push(vec!["positive".into(), "true".into(), String::new()]);
            r.results.push(json!({"check": "positive", "pass": true}));
        }
        Err(c) => {
            let names = q.path_names(&c);
            r.table.push(vec!["positive".into(), "false".into(), format!("zero-weight cycle {names}")]);
            r.results.push(json!({"check": "positive", "pass": false, "witness": names}));
        }
    }

    match GradingLattice::new(q, &s.spec.potential).check_primitive() {
        Some(g) => {
            let detail = q.arrows().iter().zip(&g).map(|(a, v)| format!("{}={v}", a.name)).collect::<Vec<_>>().join(" ");
            r.table.push(vec!["primitive".into(), "true".into(), detail]);
            r.results.push(json!({"check": "primitive", "pass": true, "witness": g}));
        }
        None => {
            r.table.push(vec!["primitive".into(), "false".into(), String::new()]);
            r.results.push(json!({"check": "primitive", "pass": false}));
        }
    }

    for a in nonzero_below(&s.bound) {
        let witness = nongeneric_witness(&s.theta, &a)?;
        let detail = witness.as_ref().map(|w| format!("{a}: same slope as {w}")).unwrap_or_else(|| a.to_string());
        r.table.push(vec!["generic".into(), witness.is_none().to_string(), detail]);
        r.results.push(json!({"check": "generic", "alpha": a, "pass": witness.is_none(), "witness": witness}));
    }
    Ok(r)
}

fn count(s: &Session) -> Res<Report> {
    let mut r = Report::new(Table::new(&["alpha", "semistable", "w=0", "#GL", "stack", "stack w=0"]));
    for a in nonzero_below(&s.bound) {
        let rec = dt_record(&s.ctx, &s.spec.potential, &a, &s.theta)?;
        r.table.push(vec![
            a.to_string(),
            rec.semistable.to_string(),
            rec.semistable_w0.to_string(),
            rec.gl_order.clone(),
            rational_string(&rec.stack),
            rational_string(&rec.stack_w0),
        ]);
        r.results.push(json!({
            "alpha": a,
            "semistable": rec.semistable,
            "semistable_w0": rec.semistable_w0,
            "gl_order": rec.gl_order,
            "stack": rational_string(&rec.stack),
            "stack_w0": rational_string(&rec.stack_w0),
        }));
    }
    Ok(r)
}

fn dt(s: &Session) -> Res<Report> {
    let mut r = Report::new(Table::new(&["alpha", "semistable", "w=0", "#GL", "T", "A"]));
    let report = dt_report(&s.ctx, &s.spec.potential, &s.theta, &s.bound)?;
    for rec in &report.records {
        r.table.push(vec![
            rec.alpha.to_string(),
            rec.semistable.to_string(),
            rec.semistable_w0.to_string(),
            rec.gl_order.clone(),
            rec.tits.to_string(),
            rec.value.to_string(),
        ]);
        r.results.push(serde_json::to_value(rec).expect("records serialize"));
    }
    Ok(r)
}

fn hall(s: &Session, reps: &[String]) -> Res<Report> {
    let mut r = Report::new(Table::new(&["class", "coefficient"]));
    let mut acc = HallElement::unit(&s.ctx);
    for lit in reps {
        let m = parse_rep_literal(&s.spec.quiver, s.ctx.field(), lit)?;
        acc = hall_product(&s.ctx, &acc, &HallElement::class(&s.ctx, &m)?)?;
    }
    for (m, c) in acc.iter() {
        let lit = render_rep_literal(&s.spec.quiver, m);
        r.table.push(vec![lit.clone(), rational_string(c)]);
        r.results.push(json!({"class": lit, "coefficient": rational_string(c)}));
    }
    Ok(r)
}

fn series_report(series: &QTorusSeries, label: &str) -> Report {
    let mut r = Report::new(Table::new(&["alpha", "coefficient"]));
    for (a, c) in series.terms() {
        r.table.push(vec![a.to_string(), c.to_string()]);
    }
    let mut value = serde_json::to_value(series).expect("series serialize");
    value["map"] = json!(label);
    r.results.push(value);
    r
}

fn integrate(s: &Session, map: MapKind, dim: Option<&str>) -> Res<Report> {
    let dims = match dim {
        Some(d) => {
            let d = DimVector::parse(d)?;
            if !d.le(&s.bound) || d.len() != s.bound.len() {
                return Err(Failure::Usage(format!("dimension {d} is not below the bound {}", s.bound)));
            }
            vec![d]
        }
        None => s.bound.sub_vectors(),
    };
    let mut f = HallElement::zero();
    for a in &dims {
        f = f.add(&tilde_a(&s.ctx, a, &s.theta)?);
    }
    let w = &s.spec.potential;
    let (series, label) = match map {
        MapKind::I => (integrate_i(&s.ctx, &f, &s.bound)?, "i"),
        MapKind::Ieq => (integrate_ieq(&s.ctx, &f, w, &s.spec.weights, &s.bound)?, "ieq"),
        MapKind::Ipsi => (integrate_ipsi(&s.ctx, &f, w, &s.bound)?, "ipsi"),
    };
    Ok(series_report(&series, label))
}

fn verify_hn(s: &Session) -> Res<Report> {
    let mut r = Report::new(Table::new(&["alpha", "full", "product", "equal"]));
    let report = hn_check(&s.ctx, &s.spec.potential, &s.theta, &s.bound)?;
    for d in &report.degrees {
        r.table.push(vec![d.alpha.to_string(), d.full.to_string(), d.product.to_string(), d.equal.to_string()]);
    }
    r.verified = report.pass;
    r.results.push(serde_json::to_value(&report).expect("report serializes"));
    Ok(r)
}

fn wallcross(s: &Session) -> Res<Report> {
    let mut r = Report::new(Table::new(&["alpha", "tuples", "direct", "wall-crossing", "equal"]));
    let w = &s.spec.potential;
    for a in nonzero_below(&s.bound) {
        let direct = dt_invariant(&s.ctx, w, &a, &s.theta)?;
        let wc = wall_crossing_solve(&s.ctx, w, &a, &s.theta)?;
        let tuples = admissible_tuples(&a, &s.theta).len();
        let equal = direct == wc;
        r.verified &= equal;
        r.table.push(vec![a.to_string(), tuples.to_string(), direct.to_string(), wc.to_string(), equal.to_string()]);
        r.results.push(json!({
            "alpha": a,
            "tuples": tuples,
            "direct": direct,
            "wall_crossing": wc,
            "equal": equal,
        }));
    }
    Ok(r)
}

/// `name:src->dst` with an optional `=weight`.
fn parse_frame(text: &str) -> Res<(String, String, String, u64)> {
    let bad = || Failure::Usage(format!("framing arrow `{text}` is not of the form name:src->dst[=weight]"));
    let (name, rest) = text.split_once(':').ok_or_else(bad)?;
    let (ends, weight) = match rest.split_once('=') {
        Some((e, w)) => (e, w.trim().parse::<u64>().map_err(|_| bad())?),
        None => (rest, 1),
    };
    let (src, dst) = ends.split_once("->").ok_or_else(bad)?;
    let (name, src, dst) = (name.trim(), src.trim(), dst.trim());
    if name.is_empty() || src.is_empty() || dst.is_empty() {
        return Err(bad());
    }
    Ok((name.into(), src.into(), dst.into(), weight))
}

fn hat(s: &Session, frames: &[String], dim: &str, theta_star: &str) -> Res<Report> {
    let mut arrows = Vec::new();
    let mut wt = s.spec.weights.0.clone();
    for f in frames {
        let (name, src, dst, w) = parse_frame(f)?;
        arrows.push((name, src, dst));
        wt.push(w);
    }
    let framed = build_framed(&s.spec.quiver, &arrows)?;
    let a = DimVector::parse(dim)?;
    let mut theta = s.theta.clone();
    theta.0.push(parse_rational(theta_star)?);
    let hat = build_hat_quiver(&framed, &WeightFunction(wt), &a, &theta)?;
    let acyclic = hat.quiver.check_acyclic();
    let dims = hat_dim_vectors(&hat, &framed, &a).len();
    let text = quiver_fixture(&hat.quiver, Some(&hat.weights), "hat", &hat.theta);
    let mut r = Report::new(Table::default());
    r.verified = acyclic.is_ok();
    r.results.push(json!({
        "framing_vertex": FRAMING_VERTEX,
        "levels": hat.levels,
        "vertices": hat.quiver.num_vertices(),
        "arrows": hat.quiver.num_arrows(),
        "acyclic": acyclic.is_ok(),
        "hat_dim_vectors": dims,
        "fixture": text,
    }));
    r.text = Some(text);
    Ok(r)
}

fn execute(command: &Command) -> Res<Outcome> {
    let common = command.common();
    let s = load(common)?;
    let report = match command {
        Command::Check(_) => check(&s)?,
        Command::Count(_) => count(&s)?,
        Command::Dt(_) => dt(&s)?,
        Command::Hall { reps, .. } => hall(&s, reps)?,
        Command::Integrate { map, dim, .. } => integrate(&s, *map, dim.as_deref())?,
        Command::VerifyHn(_) => verify_hn(&s)?,
        Command::Wallcross(_) => wallcross(&s)?,
        Command::Hat {
            frames, dim, theta_star, ..
        } => hat(&s, frames, dim, theta_star)?,
    };
    let stdout = match common.format {
        Format::Json => {
            let doc = json!({
                "meta": {
                    "command": command.name(),
                    "quiver_hash": quiver_hash(&s.spec),
                    "q": s.ctx.q(),
                    "theta": s.theta.to_strings(),
                    "bound": s.bound,
                    "budgets": {"max_points": s.budget.max_points, "max_group": s.budget.max_group},
                },
                "results": report.results,
            });
            serde_json::to_string_pretty(&doc).expect("json output") + "\n"
        }
        Format::Table => match report.text {
            Some(t) => t,
            None => report.table.render(),
        },
    };
    let (code, stderr) = if report.verified {
        (EXIT_OK, String::new())
    } else {
        (EXIT_VERIFY, "verification failed\n".to_string())
    };
    Ok(Outcome { code, stdout, stderr })
}

/// Runs the CLI on `args`, which include the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => outcome,
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Lib(e)) => Outcome {
            code: if matches!(e, Error::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_USAGE },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
