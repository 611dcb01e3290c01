//! Command-line front end. Every invocation writes exactly one JSON document.
//!
//! Exit status: 0 on success (including informational reports), 1 when a
//! check fails or an internal invariant breaks, 2 on rejected input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::analytic::{check_cor_j, check_prop_j, check_siegel_d, check_siegel_global, CheckOptions};
use crate::bounds::{self, PlaceKind, SplitCartanBound, SplitCartanOrbit};
use crate::cusps::{runge_condition, CuspLayout};
use crate::error::Error;
use crate::gl2::{unit_galois_group, UnitLabel};
use crate::group_spec::GroupSpec;
use crate::report;
use crate::runge::{runge_unit, verify_runge_unit};

#[derive(Debug, Parser)]
#[command(name = "runge-kit", version, about = "Cusps, Siegel-unit divisors, Runge units and height bounds for modular curves")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON document here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GroupArgs {
    /// Group spec: a file path, or inline JSON starting with '{'.
    #[arg(long, conflicts_with = "split_cartan")]
    pub group: Option<String>,
    /// Diagonal subgroup mod the odd prime p, with H_K = (Z/pZ)^×.
    #[arg(long, value_name = "P")]
    pub split_cartan: Option<u32>,
    /// Expected level; must agree with the group.
    #[arg(long)]
    pub level: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometric cusps of X_G with their widths.
    Cusps(GroupArgs),
    /// Galois orbits of cusps over K.
    Orbits {
        #[command(flatten)]
        group: GroupArgs,
        /// Also evaluate the Runge condition for s places.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Divisors of the units w_a on X_G.
    Divisors {
        #[command(flatten)]
        group: GroupArgs,
        /// Only this label, given as numerators "k1,k2" of (k1/N, k2/N).
        #[arg(long, value_delimiter = ',')]
        label: Option<Vec<i64>>,
    },
    /// Construct and verify a Runge unit for a set of cusp orbits.
    RungeUnit {
        #[command(flatten)]
        group: GroupArgs,
        /// Galois-orbit indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sigma: Vec<usize>,
        #[arg(long)]
        s: Option<usize>,
        /// Bound for S consisting of infinite places only.
        #[arg(long)]
        infinite_only: bool,
    },
    /// Evaluate an explicit height bound.
    Bound(BoundArgs),
    /// Numerically certify an analytic estimate.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "thm-1.1")]
    Thm11,
    #[value(name = "thm-1.2")]
    Thm12,
    Refined,
    SplitCartan,
    X0Plus,
    IsogenyGap,
    Rho,
    X0Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Place {
    Infinite,
    FiniteCoprime,
    FiniteDividing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    SingleRational,
    TwoRational,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    /// Optional group; supplies N, |G| and |G′|.
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long)]
    pub group_order: Option<u64>,
    #[arg(long)]
    pub gprime_order: Option<u64>,
    #[arg(long)]
    pub s: Option<u32>,
    /// Exponent budget B (decimal integer).
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub infinite_only: bool,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long = "case", value_enum)]
    pub shape: Option<Shape>,
    /// Split Cartan cusp orbits (0 = c_∞, 1 = c_0, 2 = the rest); selects the case.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<usize>>,
    #[arg(long)]
    pub h_prime: Option<f64>,
    #[arg(long)]
    pub delta: Option<u64>,
    #[arg(long, value_enum)]
    pub place: Option<Place>,
    /// The prime p | N for --place finite-dividing.
    #[arg(long)]
    pub prime: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    PropJ,
    CorJ,
    SiegelD,
    SiegelGlobal,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::analytic::DEFAULT_TERMS)]
    pub terms: usize,
    /// Re-evaluate the worst point with multiprecision arithmetic.
    #[arg(long)]
    pub hi_prec: bool,
    #[arg(long, default_value_t = crate::analytic::hiprec::DEFAULT_BITS)]
    pub hi_prec_bits: usize,
}

/// Why a run did not succeed.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad input; `position` is (line, column) for malformed JSON.
    Input { message: String, position: Option<(usize, usize)> },
    /// A mathematical invariant broke.
    Invariant { message: String },
    /// The computation completed but its check failed; the payload is the report.
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if matches!(e, Error::Invariant(_) | Error::RankDeficient { .. }) {
            Failure::Invariant { message: e.to_string() }
        } else {
            Failure::Input { message: e.to_string(), position: None }
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Input { message: msg.into(), position: None })
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input { .. } => 2,
            Failure::Invariant { .. } | Failure::Check(_) => 1,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Input { message, position } => {
                let mut e = json!({"kind": "input", "message": message});
                if let Some((line, column)) = position {
                    e["line"] = json!(line);
                    e["column"] = json!(column);
                }
                json!({"schema": report::SCHEMA, "error": e})
            }
            Failure::Invariant { message } => {
                json!({"schema": report::SCHEMA, "error": {"kind": "invariant", "message": message}})
            }
            Failure::Check(v) => v.clone(),
        }
    }
}

fn load_group(args: &GroupArgs) -> Result<Option<GroupSpec>, Failure> {
    let spec = match (&args.group, args.split_cartan) {
        (Some(_), Some(_)) => return bad("--group and --split-cartan are mutually exclusive"),
        (None, Some(p)) => {
            if p < 3 || !bounds::is_prime(u64::from(p)) {
                return bad(format!("--split-cartan needs an odd prime, got {p}"));
            }
            GroupSpec::split_cartan(p)
        }
        (Some(g), None) => {
            let (text, source) = if g.trim_start().starts_with('{') {
                (g.clone(), "inline".to_string())
            } else {
                let text = fs::read_to_string(g)
                    .map_err(|e| Failure::Input { message: format!("cannot read {g}: {e}"), position: None })?;
                (text, g.clone())
            };
            GroupSpec::parse(&text).map_err(|e| Failure::Input {
                message: format!("malformed group spec ({source}): {e}"),
                position: Some((e.line(), e.column())),
            })?
        }
        (None, None) => return Ok(None),
    };
    if let Some(level) = args.level {
        if level != spec.level {
            return Err(Error::LevelMismatch { expected: level, found: spec.level }.into());
        }
    }
    Ok(Some(spec))
}

fn require_group(args: &GroupArgs) -> Result<GroupSpec, Failure> {
    match load_group(args)? {
        Some(s) => Ok(s),
        None => bad("a group is required: pass --group or --split-cartan"),
    }
}

fn cusps_cmd(args: &GroupArgs) -> Result<Value, Failure> {
    let spec = require_group(args)?;
    let (g, h) = spec.build()?;
    let layout = CuspLayout::new(&g, &h)?;
    Ok(json!({"level": spec.level, "group_order": g.order(), "cusps": report::cusps(&layout)}))
}

fn orbits_cmd(args: &GroupArgs, s: Option<usize>) -> Result<Value, Failure> {
    let spec = require_group(args)?;
    let (g, h) = spec.build()?;
    let layout = CuspLayout::new(&g, &h)?;
    let mut out = json!({
        "level": spec.level,
        "galois": h.elements(),
        "cusps": report::cusps(&layout),
        "orbits": report::orbits(&layout),
    });
    if let Some(s) = s {
        out["runge_condition"] = serde_json::to_value(runge_condition(&g, &h, s)?).expect("serializable");
    }
    Ok(out)
}

fn divisors_cmd(args: &GroupArgs, label: Option<&[i64]>) -> Result<Value, Failure> {
    let spec = require_group(args)?;
    let curve = spec.curve()?;
    let labels: Vec<UnitLabel> = match label {
        Some(&[k1, k2]) => vec![UnitLabel::from_i64(spec.level, k1, k2)?],
        Some(_) => return bad("--label takes exactly two integers"),
        None => curve.labels().to_vec(),
    };
    let mut list = Vec::with_capacity(labels.len());
    for a in &labels {
        list.push(report::labelled_divisor(a, &curve.div_w(a)?));
    }
    Ok(json!({
        "group": report::group_summary(&curve),
        "cusps": report::cusps(curve.layout()),
        "orbits": report::orbits(curve.layout()),
        "divisors": list,
    }))
}

fn runge_unit_cmd(args: &GroupArgs, sigma: &[usize], s: Option<usize>, infinite_only: bool) -> Result<Value, Failure> {
    let spec = require_group(args)?;
    let curve = spec.curve()?;
    let unit = runge_unit(&curve, sigma, s)?;
    let check = verify_runge_unit(&curve, &unit);
    let bound = bounds::bound_refined(curve.level(), curve.g_prime().order() as u64, &unit.budget_b, infinite_only)?;
    let mut out = report::runge_unit(&curve, &unit, bound.value, &check);
    out["group"] = report::group_summary(&curve);
    out["infinite_only"] = json!(infinite_only);
    if args.split_cartan.is_some() {
        let orbits = unit.sigma.iter().map(|&i| SplitCartanOrbit::from_index(i)).collect::<Result<Vec<_>, _>>()?;
        let case = bounds::split_cartan_case(&orbits)?;
        let sc = bounds::bound_split_cartan(curve.level(), case.bound_shape())?;
        out["split_cartan"] = json!({"case": case, "bound": sc.value});
    }
    if check.pass {
        Ok(out)
    } else {
        Err(Failure::Check(report::document("runge-unit", out)))
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, theorem: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input { message: format!("--{flag} is required for {theorem}"), position: None })
}

fn merge(flag: &str, given: Option<u64>, derived: Option<u64>) -> Result<Option<u64>, Failure> {
    match (given, derived) {
        (Some(a), Some(b)) if a != b => bad(format!("--{flag} {a} disagrees with the group ({b})")),
        (a, b) => Ok(a.or(b)),
    }
}

fn bound_cmd(a: &BoundArgs) -> Result<Value, Failure> {
    let (mut level, mut g_order, mut gp_order) = (a.group.level, a.group_order, a.gprime_order);
    if let Some(spec) = load_group(&a.group)? {
        let (g, h) = spec.build()?;
        level = Some(spec.level);
        g_order = merge("group-order", g_order, Some(g.order() as u64))?;
        gp_order = merge("gprime-order", gp_order, Some(unit_galois_group(&g, &h)?.order() as u64))?;
    }
    let name = a.theorem.to_possible_value().expect("named").get_name().to_string();
    let report = match a.theorem {
        Theorem::Thm11 => bounds::bound_theorem_1_1(need(level, "level", &name)?, need(g_order, "group-order", &name)?)?,
        Theorem::Thm12 => bounds::bound_theorem_1_2(
            need(level, "level", &name)?,
            need(g_order, "group-order", &name)?,
            need(a.s, "s", &name)?,
            a.infinite_only,
        )?,
        Theorem::Refined => {
            let b_text = a.b.as_deref().ok_or_else(|| Failure::Input {
                message: format!("--b is required for {name}"),
                position: None,
            })?;
            let b: BigInt = b_text.parse().or_else(|_| bad(format!("--b must be an integer, got {b_text}")))?;
            bounds::bound_refined(need(level, "level", &name)?, need(gp_order, "gprime-order", &name)?, &b, a.infinite_only)?
        }
        Theorem::SplitCartan => {
            let p = need(a.p.or(a.group.split_cartan), "p", &name)?;
            let shape = match (&a.sigma, a.shape) {
                (Some(_), Some(_)) => return bad("give either --case or --sigma, not both"),
                (Some(sigma), None) => {
                    let orbits = sigma.iter().map(|&i| SplitCartanOrbit::from_index(i)).collect::<Result<Vec<_>, _>>()?;
                    bounds::split_cartan_case(&orbits)?.bound_shape()
                }
                (None, Some(Shape::SingleRational)) => SplitCartanBound::SingleRational,
                (None, Some(Shape::TwoRational)) => SplitCartanBound::TwoRational,
                (None, None) => return bad("--case or --sigma is required for split-cartan"),
            };
            let mut r = bounds::bound_split_cartan(p, shape)?;
            if let Some(sigma) = &a.sigma {
                let orbits = sigma.iter().map(|&i| SplitCartanOrbit::from_index(i)).collect::<Result<Vec<_>, _>>()?;
                r.inputs.insert("unit_case".into(), json!(bounds::split_cartan_case(&orbits)?));
            }
            r
        }
        Theorem::X0Plus => bounds::bound_x0_plus(need(a.p, "p", &name)?)?,
        Theorem::X0Chain => bounds::x0_plus_chain(need(a.p, "p", &name)?)?,
        Theorem::IsogenyGap => {
            let h = need(a.h_prime, "h-prime", &name)?;
            let delta = need(a.delta, "delta", &name)?;
            let v = bounds::isogeny_height_gap(h, delta)?;
            return Ok(json!({
                "theorem_tag": "isogeny-gap",
                "inputs": {"h_prime": h, "delta": delta},
                "value": v,
            }));
        }
        Theorem::Rho => {
            let n = need(level, "level", &name)?;
            let kind = match need(a.place, "place", &name)? {
                Place::Infinite => PlaceKind::Infinite,
                Place::FiniteCoprime => PlaceKind::FiniteCoprime,
                Place::FiniteDividing => PlaceKind::FiniteDividing(need(a.prime, "prime", &name)?),
            };
            let v = bounds::rho(n, kind)?;
            let mut inputs = BTreeMap::new();
            inputs.insert("level", json!(n));
            inputs.insert("place", json!(a.place.and_then(|p| p.to_possible_value()).map(|p| p.get_name().to_string())));
            if let PlaceKind::FiniteDividing(p) = kind {
                inputs.insert("prime", json!(p));
            }
            return Ok(json!({"theorem_tag": "rho", "inputs": inputs, "value": v}));
        }
    };
    Ok(serde_json::to_value(report).expect("serializable"))
}

fn verify_cmd(a: &VerifyArgs) -> Result<Value, Failure> {
    let opts = CheckOptions { samples: a.samples, seed: a.seed, terms: a.terms, hi_prec: a.hi_prec, hi_prec_bits: a.hi_prec_bits };
    let level = || a.level.ok_or_else(|| Failure::Input { message: "--level is required for this check".into(), position: None });
    let report = match a.check {
        Check::PropJ => check_prop_j(&opts)?,
        Check::CorJ => check_cor_j(&opts)?,
        Check::SiegelD => check_siegel_d(level()?, &opts)?,
        Check::SiegelGlobal => check_siegel_global(level()?, &opts)?,
    };
    let pass = report.pass || report.informational;
    let v = serde_json::to_value(&report).expect("serializable");
    if pass {
        Ok(v)
    } else {
        Err(Failure::Check(report::document("verify", v)))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cusps(_) => "cusps",
        Command::Orbits { .. } => "orbits",
        Command::Divisors { .. } => "divisors",
        Command::RungeUnit { .. } => "runge-unit",
        Command::Bound(_) => "bound",
        Command::Verify(_) => "verify",
    }
}

/// Dispatch a parsed configuration. Returns the exit status and the JSON document.
pub fn run(config: &RunConfig) -> (i32, Value) {
    let result = match &config.command {
        Command::Cusps(g) => cusps_cmd(g),
        Command::Orbits { group, s } => orbits_cmd(group, *s),
        Command::Divisors { group, label } => divisors_cmd(group, label.as_deref()),
        Command::RungeUnit { group, sigma, s, infinite_only } => runge_unit_cmd(group, sigma, *s, *infinite_only),
        Command::Bound(b) => bound_cmd(b),
        Command::Verify(v) => verify_cmd(v),
    };
    match result {
        Ok(v) => (0, report::document(command_name(&config.command), v)),
        Err(f) => (f.exit_code(), f.to_json()),
    }
}

/// Render a document the way the binary prints it.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// Parse arguments, run, and write the document. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let (code, doc) = run(&config);
    let text = render(&doc);
    let written = match &config.output {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("runge-kit: cannot write output: {e}");
        return 2;
    }
    if code != 0 {
        if let Some(msg) = doc.pointer("/error/message").and_then(Value::as_str) {
            eprintln!("runge-kit: {msg}");
        }
    }
    code
}
