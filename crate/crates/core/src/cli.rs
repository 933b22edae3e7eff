//! Command-line frontend. [`run`] does all the work and returns the exit
//! code with the rendered output, so it can be driven from tests.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::admissibility::AdmissibilityError;
use crate::existence::{self, AnalysisStatus, ExistenceError, ExistenceVerdict, ImprimitiveReport, Status};
use crate::ffcover::{self, FfError, FiniteField};
use crate::hurwitz::{self, Bounds, HurwitzError, HurwitzTuple};
use crate::permgroup::{self, PermError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BOUND: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tamecover", version, about = "Existence of tame branched covers of the projective line")]
pub struct Cli {
    /// Emit a single JSON document.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide existence for prime p and ramification indices.
    Decide {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        ram: Vec<u64>,
    },
    /// List all Hurwitz factorizations up to simultaneous conjugation.
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        ram: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        max_d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Pure-braid orbit of the tuple in a file.
    Orbit {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Build a factorization whose partial products are cycles.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        ram: Vec<u64>,
    },
    /// Block-system non-existence test for the tuple in a file.
    Analyze {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        file: PathBuf,
    },
    /// Ramification of a rational map over F_{p^k}.
    VerifyMap {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: Option<String>,
        /// name=value, the value a constant expression in z, g and integers.
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Run built-in checks.
    SelfTest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub command: String,
    pub status: String,
    pub payload: Payload,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Decide(ExistenceVerdict),
    Enumerate { d: usize, lengths: Vec<usize>, classes: Vec<String> },
    Orbit(OrbitPayload),
    Construct(ConstructPayload),
    Analyze(ImprimitiveReport),
    VerifyMap(MapPayload),
    SelfTest { checks: Vec<CheckResult> },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPayload {
    pub degree: usize,
    pub tuple: String,
    pub cycle_types: Vec<Vec<usize>>,
    pub raw_orbit_size: usize,
    /// Conjugacy classes met by the orbit, canonical representatives.
    pub classes: Vec<String>,
    pub normal_form: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructPayload {
    pub verdict: ExistenceVerdict,
    pub tuple: Option<String>,
    pub partial_lengths: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub point: String,
    pub value: String,
    pub index: u64,
    pub tame: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapPayload {
    pub field: String,
    pub modulus: String,
    pub map: String,
    pub degree: usize,
    pub separable: bool,
    pub entries: Vec<MapEntry>,
    /// `None` when some ramification is wild or the map is inseparable.
    pub riemann_hurwitz: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<HurwitzError> for Failure {
    fn from(e: HurwitzError) -> Self {
        let code = match e {
            HurwitzError::StateOverflow(_) | HurwitzError::DegreeBound { .. } | HurwitzError::PointsBound { .. } => {
                EXIT_BOUND
            }
            HurwitzError::BaseCase(..) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ExistenceError> for Failure {
    fn from(e: ExistenceError) -> Self {
        match e {
            ExistenceError::Hurwitz(h) => h.into(),
            other => Failure::input(other),
        }
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Self {
        Failure::input(e)
    }
}

impl From<FfError> for Failure {
    fn from(e: FfError) -> Self {
        Failure::input(e)
    }
}

impl From<AdmissibilityError> for Failure {
    fn from(e: AdmissibilityError) -> Self {
        Failure::input(e)
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code and everything to print on stdout.
pub fn run<I, T>(args: I) -> (u8, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return (e.exit_code() as u8, e.render().to_string()),
    };
    let name = command_name(&cli.command);
    match execute(&cli.command) {
        Ok((response, code)) => (code, render(&response, cli.json)),
        Err(f) => {
            let response = Response {
                command: name.into(),
                status: "ERROR".into(),
                payload: Payload::Error { message: f.message.clone() },
                diagnostics: Vec::new(),
            };
            (f.code, render(&response, cli.json))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decide { .. } => "decide",
        Command::Enumerate { .. } => "enumerate",
        Command::Orbit { .. } => "orbit",
        Command::Construct { .. } => "construct",
        Command::Analyze { .. } => "analyze",
        Command::VerifyMap { .. } => "verify-map",
        Command::SelfTest => "self-test",
    }
}

fn read_tuple(path: &PathBuf) -> Result<HurwitzTuple, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(HurwitzTuple::from_file_str(&text)?)
}

fn require_valid(t: &HurwitzTuple) -> Result<(), Failure> {
    let v = t.validate(None);
    if v.is_valid() {
        Ok(())
    } else {
        Err(Failure::input(format!("not a Hurwitz factorization: {}", v.diagnostics.join("; "))))
    }
}

fn execute(command: &Command) -> Result<(Response, u8), Failure> {
    let name = command_name(command).to_string();
    let ok = |status: String, payload: Payload, diagnostics: Vec<String>| {
        Ok((Response { command: name.clone(), status, payload, diagnostics }, EXIT_OK))
    };
    match command {
        Command::Decide { p, ram } => {
            let v = existence::decide(*p, ram);
            if v.status == Status::Invalid {
                return Err(Failure::input(format!("invalid input: {}", v.reason)));
            }
            ok(v.status.to_string(), Payload::Decide(v), Vec::new())
        }
        Command::Enumerate { d, ram, max_d, max_states } => {
            let bounds = Bounds { max_degree: *max_d, max_states: *max_states, ..Bounds::default() };
            let classes = hurwitz::enumerate(*d, ram, &bounds)?;
            let classes: Vec<String> = classes.iter().map(|c| c.representative().to_string()).collect();
            ok(format!("{} classes", classes.len()), Payload::Enumerate { d: *d, lengths: ram.clone(), classes }, Vec::new())
        }
        Command::Orbit { file, max_states } => {
            let t = read_tuple(file)?;
            require_valid(&t)?;
            let classes = hurwitz::pure_braid_orbit_classes(&t, *max_states)?;
            let raw = hurwitz::pure_braid_orbit(&t, *max_states)?;
            let normal_form = if t.cycle_lengths().is_some() {
                hurwitz::cycle_partial_normalform(&t, *max_states)?.map(|n| n.to_string())
            } else {
                None
            };
            let payload = OrbitPayload {
                degree: t.degree(),
                tuple: t.to_string(),
                cycle_types: t.perms().iter().map(|g| g.cycle_type().nontrivial()).collect(),
                raw_orbit_size: raw.len(),
                classes: classes.iter().map(|c| c.representative().to_string()).collect(),
                normal_form,
            };
            ok(format!("{} classes", payload.classes.len()), Payload::Orbit(payload), Vec::new())
        }
        Command::Construct { p, ram } => {
            let verdict = existence::decide(*p, ram);
            if verdict.status == Status::Invalid {
                return Err(Failure::input(format!("invalid input: {}", verdict.reason)));
            }
            let tuple = verdict.certificate.as_ref().map(|t| t.to_string());
            let partial_lengths = verdict.certificate.as_ref().and_then(|t| t.partial_cycle_lengths());
            let mut diagnostics = Vec::new();
            if verdict.status == Status::Exists && tuple.is_none() {
                diagnostics.push(format!("no certificate above degree {}", existence::CERTIFICATE_MAX_DEGREE));
            }
            let status = verdict.status.to_string();
            ok(status, Payload::Construct(ConstructPayload { verdict, tuple, partial_lengths }), diagnostics)
        }
        Command::Analyze { p, file } => {
            let t = read_tuple(file)?;
            require_valid(&t)?;
            let report = existence::analyze_monodromy(&t, *p)?;
            ok(report.status.to_string(), Payload::Analyze(report), Vec::new())
        }
        Command::VerifyMap { p, k, num, den, params } => {
            let field = FiniteField::new(*p, *k)?;
            let mut values = HashMap::new();
            for spec in params {
                let (key, value) =
                    spec.split_once('=').ok_or_else(|| Failure::input(format!("--param {spec:?}: expected name=value")))?;
                let key = key.trim();
                if key.is_empty() || ["x", "z", "g"].contains(&key) || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Failure::input(format!("--param {spec:?}: bad name")));
                }
                values.insert(key.to_string(), field.parse_element(value, &HashMap::new())?);
            }
            let map = ffcover::parse_map(&field, num, den.as_deref(), &values)?;
            let payload = verify_map(&field, &map)?;
            let status = if payload.separable { "SEPARABLE" } else { "INSEPARABLE" };
            ok(status.into(), Payload::VerifyMap(payload), Vec::new())
        }
        Command::SelfTest => {
            let checks = self_test();
            let passed = checks.iter().all(|c| c.passed);
            let response = Response {
                command: name.clone(),
                status: if passed { "PASS" } else { "FAIL" }.into(),
                payload: Payload::SelfTest { checks },
                diagnostics: Vec::new(),
            };
            Ok((response, if passed { EXIT_OK } else { EXIT_INTERNAL }))
        }
    }
}

fn verify_map(field: &FiniteField, map: &ffcover::RationalMap) -> Result<MapPayload, Failure> {
    if map.is_constant() {
        return Err(Failure::input("map is constant"));
    }
    let modulus = ffcover::Poly::new(&ffcover::FiniteField::new(field.p(), 1)?, field.modulus().to_vec());
    let mut payload = MapPayload {
        field: format!("F_{}", field.order()),
        modulus: modulus.to_string().replace('x', "z"),
        map: map.to_string(),
        degree: map.degree(),
        separable: map.is_separable(),
        entries: Vec::new(),
        riemann_hurwitz: None,
    };
    if !payload.separable {
        return Ok(payload);
    }
    let report = map.ram_report()?;
    payload.entries = report
        .entries
        .iter()
        .map(|e| MapEntry { point: e.point.format(field), value: e.value.format(field), index: e.index, tame: e.tame })
        .collect();
    payload.riemann_hurwitz = ffcover::tame_rh_check(&report, map.degree() as u64, field).ok();
    Ok(payload)
}

fn self_test() -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool| checks.push(CheckResult { name: name.into(), passed });
    let v = existence::decide(3, &[2, 2, 2, 2]);
    check(
        "decide p=3 (2,2,2,2) exists",
        v.status == Status::Exists && v.certificate.map(|t| t.to_string()).as_deref() == Some("(1 2)(1 2)(2 3)(2 3)"),
    );
    check("decide p=5 (4,4,4,4,3) does not exist", existence::decide(5, &[4, 4, 4, 4, 3]).status == Status::NotExists);
    check("decide p=5 (3,7,9) exists", existence::decide(5, &[3, 7, 9]).status == Status::Exists);
    let bounds = Bounds::default();
    let count = |d, e: &[usize]| hurwitz::enumerate(d, e, &bounds).map(|c| c.len()).ok();
    check("enumerate d=3 (2,2,2,2) gives 4", count(3, &[2, 2, 2, 2]) == Some(4));
    check("enumerate d=4 (4,2,2,2) gives 4", count(4, &[4, 2, 2, 2]) == Some(4));
    check("enumerate d=3 (2,2,3) gives 1", count(3, &[2, 2, 3]) == Some(1));
    check(
        "single orbit d=3 (2,2,2,2)",
        hurwitz::single_orbit_check(3, &[2, 2, 2, 2], &bounds).is_ok_and(|c| c.single_orbit),
    );
    let s10 = HurwitzTuple::parse(10, &["(1,3,5,8,2,4,6,7)", "(10,8,6,4,9,7,5,3)", "(10,3,1,9,4,2)(7,8)"]);
    check(
        "analyze degree-10 genus-1 tuple at p=5",
        s10.is_ok_and(|t| existence::analyze_monodromy(&t, 5).is_ok_and(|r| r.status == AnalysisStatus::NotExists)),
    );
    check(
        "A_5 monodromy for p=5 (3,3,3,3)",
        existence::monodromy_class_of_certificate(5, &[3, 3, 3, 3])
            .is_ok_and(|c| c.tag == permgroup::GroupTag::Alternating && c.order == 60),
    );
    let cubic = FiniteField::new(3, 2).ok().and_then(|f| {
        let params = HashMap::from([("u".to_string(), f.primitive())]);
        let m = ffcover::parse_map(&f, "x^3+(1+u)*x^2", Some("(-u-1)*x-u"), &params).ok()?;
        let r = m.ram_report().ok()?;
        Some(r.entries.len() == 4 && r.entries.iter().all(|e| e.index == 2))
    });
    check("degree-3 map over F_9 has four simple ramification points", cubic == Some(true));
    checks
}

fn render(r: &Response, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(r).expect("responses serialize");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    let w = &mut out;
    match &r.payload {
        Payload::Decide(v) => {
            let _ = writeln!(w, "{}", v.status);
            render_verdict(w, v);
        }
        Payload::Enumerate { d, lengths, classes } => {
            let _ = writeln!(w, "{} classes for d={d} lengths {}", classes.len(), join(lengths));
            for c in classes {
                let _ = writeln!(w, "{c}");
            }
        }
        Payload::Orbit(o) => {
            let _ = writeln!(w, "tuple: {}", o.tuple);
            let types: Vec<String> = o.cycle_types.iter().map(|t| format!("({})", join(t))).collect();
            let _ = writeln!(w, "cycle types: {}", types.join(" "));
            let _ = writeln!(w, "raw pure-braid orbit: {} tuples", o.raw_orbit_size);
            let _ = writeln!(w, "conjugacy classes in orbit: {}", o.classes.len());
            for c in &o.classes {
                let _ = writeln!(w, "  {c}");
            }
            match &o.normal_form {
                Some(n) => {
                    let _ = writeln!(w, "cycle partial products: {n}");
                }
                None => {
                    let _ = writeln!(w, "cycle partial products: none found");
                }
            }
        }
        Payload::Construct(c) => {
            let _ = writeln!(w, "{}", c.verdict.status);
            let _ = writeln!(w, "reason: {}", c.verdict.reason);
            if let Some(t) = &c.tuple {
                let _ = writeln!(w, "tuple: {t}");
            }
            if let Some(l) = &c.partial_lengths {
                let _ = writeln!(w, "partial product lengths: {}", join(l));
            }
        }
        Payload::Analyze(a) => {
            let _ = writeln!(w, "{}", a.status);
            let _ = writeln!(w, "degree {} genus {} p={}", a.degree, a.genus, a.p);
            let _ = writeln!(w, "{:<6} {:<8} {:<20} {:<13} {:<7} verdict", "block", "induced", "lengths", "regime", "genus0");
            for (i, s) in a.systems.iter().enumerate() {
                let regime = match s.regime {
                    existence::Regime::AllBelowP => "all-below-p",
                    existence::Regime::ThreePoint => "three-point",
                    existence::Regime::OutOfScope => "out-of-scope",
                };
                let verdict = match s.verdict {
                    existence::SystemVerdict::Admissible => "admissible",
                    existence::SystemVerdict::Inadmissible => "INADMISSIBLE",
                    existence::SystemVerdict::NotEvaluated => "-",
                };
                let mark = if a.witness == Some(i) { " <- witness" } else { "" };
                let _ = writeln!(
                    w,
                    "{:<6} {:<8} {:<20} {:<13} {:<7} {verdict}{mark}",
                    s.block_size,
                    s.induced_degree,
                    format!("({})", join(&s.lengths)),
                    regime,
                    if s.genus_zero { "yes" } else { "no" },
                );
            }
            if let Some(i) = a.witness {
                let s = &a.systems[i];
                let _ = writeln!(w, "witness blocks: {}", s.system);
                let _ = writeln!(w, "induced: {}", s.induced.join(" "));
            }
        }
        Payload::VerifyMap(m) => {
            let _ = writeln!(w, "{}", r.status);
            let _ = writeln!(w, "field {} (modulus {})", m.field, m.modulus);
            let _ = writeln!(w, "map {} of degree {}", m.map, m.degree);
            for e in &m.entries {
                let tame = if e.tame { "tame" } else { "wild" };
                let _ = writeln!(w, "  e={} at {} -> {} ({tame})", e.index, e.point, e.value);
            }
            match m.riemann_hurwitz {
                Some(true) => {
                    let _ = writeln!(w, "Riemann-Hurwitz: all ramification accounted for");
                }
                Some(false) => {
                    let _ = writeln!(w, "Riemann-Hurwitz: ramification not all rational over {}", m.field);
                }
                None => {}
            }
        }
        Payload::SelfTest { checks } => {
            for c in checks {
                let _ = writeln!(w, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            let _ = writeln!(w, "{}", r.status);
        }
        Payload::Error { message } => {
            let _ = writeln!(w, "error: {message}");
        }
    }
    for d in &r.diagnostics {
        let _ = writeln!(w, "note: {d}");
    }
    out
}

fn render_verdict(w: &mut String, v: &ExistenceVerdict) {
    let _ = writeln!(w, "reason: {}", v.reason);
    if let Some(d) = v.degree {
        let _ = writeln!(w, "degree: {d}");
    }
    if let Some(t) = &v.certificate {
        let _ = writeln!(w, "certificate: {t}");
    }
    if let Some(w_) = &v.witness {
        let _ = writeln!(w, "witness: {w_}");
    }
    let _ = writeln!(w, "note: {}", v.note);
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
