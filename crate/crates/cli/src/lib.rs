//! Command-line front end: parses workspace files, runs one operation and
//! reports the result as a table, JSON or DOT.
//!
//! Exit codes: 0 success or property holds, 1 property fails, 2 input or
//! usage error, 3 a size cap was exceeded.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use joinframe::format::{dot_ideals, dot_poset, spec_label_sets, Workspace};
use joinframe::frames::{is_frame_generating, Method};
use joinframe::random::Ratio;
use joinframe::speclattices::{jf_join, jf_meet, jf_top, jfplus_join, jfplus_meet, uminus};
use joinframe::verify::{verify_theorems, VerifyConfig, VerifyReport};
use joinframe::{ElemSet, Error, IdealLattice, JoinSpec, Limits, Poset, PosetMap};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "joinframe", version, about = "Join-specifications, their ideal lattices and frame-generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "jf")]
    Jf,
    #[value(name = "jf+")]
    JfPlus,
}

#[derive(Debug, Args)]
struct Input {
    /// Workspace file (text grammar, or JSON when the name ends in `.json`).
    file: PathBuf,
    /// Largest accepted poset.
    #[arg(long)]
    max_n: Option<usize>,
    /// Largest ideal lattice materialised.
    #[arg(long)]
    max_ideals: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct WithSpec {
    #[command(flatten)]
    input: Input,
    /// Declared join-specification, or one of B, Uinf, Uall.
    #[arg(long)]
    spec: String,
}

#[derive(Debug, Args)]
struct WithSet {
    #[command(flatten)]
    target: WithSpec,
    /// Elements separated by spaces or commas.
    #[arg(long)]
    set: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a workspace and summarise it.
    Validate(Input),
    /// Smallest ideal containing a set.
    Closure(WithSet),
    /// The one-step operator on a set.
    Upsilon(WithSet),
    /// List the ideal lattice.
    Ideals(WithSpec),
    /// Decide frame-generation.
    FrameGenerating {
        #[command(flatten)]
        target: WithSpec,
        /// 1, 4, 5, 7, 10 or all.
        #[arg(long, default_value = "5")]
        method: String,
    },
    /// The maximal specification with the same closure, or membership of a set.
    Uplus {
        #[command(flatten)]
        target: WithSpec,
        #[arg(long)]
        set: Option<String>,
    },
    /// The largest frame-generating specification inside.
    Uminus(WithSpec),
    /// Meet of frame-generating specifications.
    Meet(Combine),
    /// Join of frame-generating specifications.
    Join(Combine),
    /// Top of the lattice of frame-generating specifications.
    Top(Input),
    /// Whether a specification equals its maximal extension.
    Maximal(WithSpec),
    /// Lift a poset map to the ideal lattices.
    Lift {
        #[command(flatten)]
        input: Input,
        /// Codomain workspace.
        codomain: PathBuf,
        /// Assignment such as `a:d,b:d`.
        #[arg(long)]
        map: String,
        /// Domain specification.
        #[arg(long, default_value = "Uall")]
        spec: String,
        /// Codomain specification.
        #[arg(long, default_value = "Uall")]
        cod_spec: String,
    },
    /// Check the laws on seeded and exhaustive instances.
    Verify(VerifyArgs),
    /// Export the poset, workspace or an ideal lattice.
    Export {
        #[command(flatten)]
        input: Input,
        /// Export this specification's ideal lattice instead of the poset.
        #[arg(long)]
        spec: Option<String>,
    },
}

#[derive(Debug, Args)]
struct Combine {
    #[command(flatten)]
    input: Input,
    /// Comma-separated specification names.
    #[arg(long)]
    specs: String,
    #[arg(long = "in", value_enum, default_value = "jf")]
    family: Family,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Smallest random poset size (defaults to --n).
    #[arg(long)]
    min_n: Option<usize>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "1/2")]
    edge_prob: String,
    /// Comma-separated law names (default: all).
    #[arg(long)]
    laws: Option<String>,
    #[arg(long, default_value_t = 4)]
    exhaustive_n: usize,
    #[arg(long, default_value_t = 4)]
    spec_members: usize,
    /// Skip the worked-example instances.
    #[arg(long)]
    no_fixtures: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

enum Failure {
    Property(String),
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::TooManyElements { .. } => Failure::Cap(e.to_string()),
            Error::Invariant(_) => Failure::Property(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Text printed plus whether the checked property holds.
struct Report {
    text: String,
    holds: bool,
}

impl Report {
    fn ok(text: String) -> Report {
        Report { text, holds: true }
    }
}

type Run = std::result::Result<Report, Failure>;

/// Runs one command line (`argv[0]` is the program name).
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> Output {
    let args: Vec<&str> = argv.iter().map(|s| s.as_ref()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Output { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) => Output { code: if r.holds { EXIT_OK } else { EXIT_PROPERTY }, stdout: r.text, stderr: String::new() },
        Err(Failure::Property(m)) => Output { code: EXIT_PROPERTY, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Input(m)) => Output { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Cap(m)) => Output { code: EXIT_CAP, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn limits(input: &Input) -> Limits {
    let mut l = Limits::default();
    if let Some(n) = input.max_n {
        l.max_elements = n;
    }
    if let Some(m) = input.max_ideals {
        l.max_ideals = m;
    }
    l
}

fn load_path(path: &Path, limits: Limits) -> std::result::Result<Workspace, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let ws = if path.extension().is_some_and(|x| x == "json") {
        let ws = Workspace::from_json(&text)?;
        if ws.poset().len() > limits.max_elements {
            return Err(Error::TooManyElements { size: ws.poset().len(), cap: limits.max_elements }.into());
        }
        ws
    } else {
        Workspace::parse_with(&text, limits)?
    };
    Ok(ws.with_source(path.display().to_string()))
}

fn load(input: &Input) -> std::result::Result<Workspace, Failure> {
    load_path(&input.file, limits(input))
}

fn require(format: Format, allowed: &[Format]) -> std::result::Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let name = format!("{format:?}").to_lowercase();
        Err(Failure::Input(format!("format `{name}` is not available for this command")))
    }
}

fn labels(p: &Poset, s: &ElemSet) -> Value {
    Value::from(s.iter().map(|i| p.label(i).to_string()).collect::<Vec<_>>())
}

fn spec_value(u: &JoinSpec) -> Value {
    json!({ "members": u.len(), "sets": spec_label_sets(u) })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serialises") + "\n"
}

fn dispatch(command: Command) -> Run {
    match command {
        Command::Validate(input) => validate(&input),
        Command::Closure(a) => set_op(&a, |u, s| u.gamma(s)),
        Command::Upsilon(a) => set_op(&a, |u, s| u.upsilon(s)),
        Command::Ideals(a) => ideals(&a),
        Command::FrameGenerating { target, method } => frame_gen(&target, &method),
        Command::Uplus { target, set } => uplus(&target, set.as_deref()),
        Command::Uminus(a) => {
            require(a.input.format, &[Format::Table, Format::Json])?;
            let ws = load(&a.input)?;
            let u = ws.spec(&a.spec)?;
            spec_result(a.input.format, &format!("{}-", a.spec), &uminus(&u))
        }
        Command::Meet(c) => combine(&c, true),
        Command::Join(c) => combine(&c, false),
        Command::Top(input) => {
            require(input.format, &[Format::Table, Format::Json])?;
            let ws = load(&input)?;
            spec_result(input.format, "top", &jf_top(ws.poset().clone())?)
        }
        Command::Maximal(a) => maximal(&a),
        Command::Lift { input, codomain, map, spec, cod_spec } => lift(&input, &codomain, &map, &spec, &cod_spec),
        Command::Verify(v) => verify(&v),
        Command::Export { input, spec } => export(&input, spec.as_deref()),
    }
}

fn validate(input: &Input) -> Run {
    require(input.format, &[Format::Table, Format::Json])?;
    let ws = load(input)?;
    let p = ws.poset();
    if input.format == Format::Json {
        let specs: Vec<Value> =
            ws.specs().iter().map(|s| json!({ "name": s.name, "line": s.line, "members": s.spec.len() })).collect();
        return Ok(Report::ok(pretty(&json!({
            "elements": p.len(),
            "covers": p.covers().len(),
            "joinspecs": specs,
        }))));
    }
    let mut out = format!("poset: {} elements, {} covers\n", p.len(), p.covers().len());
    for s in ws.specs() {
        out += &format!("joinspec {} (line {}): {} members\n", s.name, s.line, s.spec.len());
    }
    Ok(Report::ok(out))
}

fn set_op(a: &WithSet, op: impl Fn(&JoinSpec, &ElemSet) -> ElemSet) -> Run {
    let input = &a.target.input;
    require(input.format, &[Format::Table, Format::Json])?;
    let ws = load(input)?;
    let u = ws.spec(&a.target.spec)?;
    let p = ws.poset();
    let s = p.parse_set(&a.set)?;
    let r = op(&u, &s);
    Ok(Report::ok(match input.format {
        Format::Json => pretty(&json!({ "input": labels(p, &s), "result": labels(p, &r) })),
        _ => format!("{}\n", p.format_set(&r)),
    }))
}

fn ideals(a: &WithSpec) -> Run {
    let ws = load(&a.input)?;
    let u = ws.spec(&a.spec)?;
    let lat = IdealLattice::new(&u)?;
    let p = ws.poset();
    Ok(Report::ok(match a.input.format {
        Format::Json => {
            let ideals: Vec<Value> = lat.ideals().iter().map(|s| labels(p, s)).collect();
            let covers: Vec<Value> = lat.covers().into_iter().map(|(x, y)| json!([x, y])).collect();
            pretty(&json!({ "count": lat.len(), "ideals": ideals, "covers": covers }))
        }
        Format::Dot => dot_ideals(&lat),
        Format::Table | Format::Text => {
            let mut out = String::new();
            for s in lat.ideals() {
                out += &p.format_set(&s);
                out.push('\n');
            }
            out + &format!("{} ideals\n", lat.len())
        }
    }))
}

fn frame_gen(a: &WithSpec, method: &str) -> Run {
    require(a.input.format, &[Format::Table, Format::Json])?;
    let methods: Vec<Method> = if method == "all" { Method::ALL.to_vec() } else { vec![method.parse()?] };
    let ws = load(&a.input)?;
    let u = ws.spec(&a.spec)?;
    let p = ws.poset();
    let report = is_frame_generating(&u, &methods)?;
    let text = if a.input.format == Format::Json {
        let per: serde_json::Map<String, Value> =
            report.methods.iter().map(|(m, v)| (m.to_string(), Value::from(*v))).collect();
        let witness = report
            .witness
            .map(|w| json!({ "set": labels(p, &w.set), "point": p.label(w.point) }))
            .unwrap_or(Value::Null);
        pretty(&json!({ "frame_generating": report.verdict, "methods": per, "witness": witness }))
    } else {
        let mut out = String::new();
        for (m, v) in &report.methods {
            out += &format!("method {m}: {v}\n");
        }
        out += &format!("frame-generating: {}\n", report.verdict);
        if let Some(w) = report.witness {
            out += &format!("witness: S = {}, p = {}\n", p.format_set(&w.set), p.label(w.point));
        }
        out
    };
    Ok(Report { text, holds: report.verdict })
}

fn spec_result(format: Format, name: &str, u: &JoinSpec) -> Run {
    Ok(Report::ok(match format {
        Format::Json => pretty(&json!({ "name": name, "spec": spec_value(u) })),
        _ => format!("{name} = {u}\n"),
    }))
}

fn uplus(a: &WithSpec, set: Option<&str>) -> Run {
    require(a.input.format, &[Format::Table, Format::Json])?;
    let ws = load(&a.input)?;
    let u = ws.spec(&a.spec)?;
    let Some(set) = set else {
        return spec_result(a.input.format, &format!("{}+", a.spec), &u.uplus()?);
    };
    let p = ws.poset();
    let t = p.parse_set(set)?;
    let member = u.in_uplus(&t);
    let text = match a.input.format {
        Format::Json => pretty(&json!({ "set": labels(p, &t), "member": member })),
        _ => format!("{} in {}+: {member}\n", p.format_set(&t), a.spec),
    };
    Ok(Report { text, holds: member })
}

fn combine(c: &Combine, meet: bool) -> Run {
    require(c.input.format, &[Format::Table, Format::Json])?;
    let ws = load(&c.input)?;
    let names: Vec<&str> = c.specs.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let specs = names.iter().map(|n| ws.spec(n)).collect::<joinframe::Result<Vec<_>>>()?;
    let out = match (c.family, meet) {
        (Family::Jf, true) => jf_meet(&specs),
        (Family::Jf, false) => jf_join(&specs),
        (Family::JfPlus, true) => jfplus_meet(&specs),
        (Family::JfPlus, false) => jfplus_join(&specs),
    }?;
    let op = if meet { "meet" } else { "join" };
    spec_result(c.input.format, &format!("{op}({})", names.join(",")), &out)
}

fn maximal(a: &WithSpec) -> Run {
    require(a.input.format, &[Format::Table, Format::Json])?;
    let ws = load(&a.input)?;
    let u = ws.spec(&a.spec)?;
    let p = ws.poset();
    let plus = u.uplus()?;
    let missing = plus.members().find(|t| !u.contains(t));
    let text = match a.input.format {
        Format::Json => pretty(&json!({
            "maximal": missing.is_none(),
            "witness": missing.map(|t| labels(p, &t)).unwrap_or(Value::Null),
        })),
        _ => match missing {
            None => "maximal: true\n".to_string(),
            Some(t) => format!("maximal: false\nwitness: {} is in {}+ but not in {}\n", p.format_set(&t), a.spec, a.spec),
        },
    };
    Ok(Report { text, holds: missing.is_none() })
}

fn lift(input: &Input, codomain: &Path, map: &str, spec: &str, cod_spec: &str) -> Run {
    require(input.format, &[Format::Table, Format::Json])?;
    let dom_ws = load(input)?;
    let cod_ws = load_path(codomain, limits(input))?;
    let pairs = map
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            pair.split_once(':')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| Failure::Input(format!("map entry `{pair}` is not of the form a:b")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let (dp, cp): (&Arc<Poset>, &Arc<Poset>) = (dom_ws.poset(), cod_ws.poset());
    let f = PosetMap::from_pairs(dp.clone(), cp.clone(), &pairs)?;
    let (up, uq) = (dom_ws.spec(spec)?, cod_ws.spec(cod_spec)?);
    if !f.is_u_morphism(&up)? {
        return Ok(Report { text: format!("map is not a {spec}-morphism\n"), holds: false });
    }
    let (ld, lc) = (IdealLattice::new(&up)?, IdealLattice::new(&uq)?);
    let lifted = joinframe::morphisms::lift(&f, &ld, &lc)?;
    let continuous = joinframe::morphisms::continuity_check(&f, &ld, &lc)?;
    let meet_failure = lifted.binary_meet_failure();
    let rows: Vec<(ElemSet, ElemSet)> = (0..ld.len()).map(|i| (ld.ideal(i), lc.ideal(lifted.apply(i)))).collect();
    let flags = [
        ("monotone", f.is_monotone()),
        ("embedding", f.is_embedding()),
        ("continuous", continuous),
        ("preserves_joins", lifted.preserves_joins()),
        ("preserves_binary_meets", meet_failure.is_none()),
        ("injective", lifted.is_injective()),
        ("surjective", lifted.is_surjective()),
        ("order_embedding", lifted.is_embedding()),
    ];
    let text = if input.format == Format::Json {
        let map: Vec<Value> = rows.iter().map(|(a, b)| json!([labels(dp, a), labels(cp, b)])).collect();
        let mut obj = serde_json::Map::new();
        obj.insert("lift".into(), Value::from(map));
        for (k, v) in flags {
            obj.insert(k.into(), Value::from(v));
        }
        if let Some((x, y)) = meet_failure {
            obj.insert("meet_witness".into(), json!([labels(dp, &ld.ideal(x)), labels(dp, &ld.ideal(y))]));
        }
        pretty(&Value::Object(obj))
    } else {
        let mut out = String::new();
        for (a, b) in &rows {
            out += &format!("{} -> {}\n", dp.format_set(a), cp.format_set(b));
        }
        for (k, v) in flags {
            out += &format!("{}: {v}\n", k.replace('_', " "));
        }
        if let Some((x, y)) = meet_failure {
            out += &format!("meet witness: {} and {}\n", dp.format_set(&ld.ideal(x)), dp.format_set(&ld.ideal(y)));
        }
        out
    };
    Ok(Report::ok(text))
}

fn verify_config(v: &VerifyArgs) -> std::result::Result<VerifyConfig, Failure> {
    let edge_prob: Ratio = v.edge_prob.parse()?;
    let laws = v
        .laws
        .as_deref()
        .map(|l| l.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default();
    Ok(VerifyConfig {
        n: v.n,
        min_n: v.min_n.unwrap_or(v.n),
        samples: v.samples,
        seed: v.seed,
        edge_prob,
        laws,
        exhaustive_n: v.exhaustive_n,
        spec_members: v.spec_members,
        fixtures: !v.no_fixtures,
    })
}

fn report_json(r: &VerifyReport) -> Value {
    let laws: Vec<Value> = r
        .laws
        .iter()
        .map(|l| {
            json!({
                "name": l.name,
                "suite": l.suite.to_string(),
                "pass": l.pass,
                "fail": l.fail,
                "skip": l.skip,
                "failure": l.failure.as_ref().map(|f| json!({
                    "instance": f.instance,
                    "message": f.message,
                    "poset": f.poset,
                    "u": f.u,
                    "v": f.v,
                })),
            })
        })
        .collect();
    let observations: serde_json::Map<String, Value> =
        r.observations.iter().map(|(k, (h, t))| (k.to_string(), json!({ "holds": h, "total": t }))).collect();
    let c = &r.config;
    json!({
        "config": {
            "n": c.n, "min_n": c.min_n, "samples": c.samples, "seed": c.seed,
            "edge_prob": c.edge_prob.to_string(), "exhaustive_n": c.exhaustive_n,
            "spec_members": c.spec_members, "fixtures": c.fixtures,
        },
        "instances": {
            "fixtures": r.fixture_instances,
            "exhaustive": r.exhaustive_instances,
            "exhaustive_posets": r.exhaustive_posets,
            "random": r.random_instances,
        },
        "laws": laws,
        "observations": observations,
        "all_pass": r.all_pass(),
    })
}

fn verify(v: &VerifyArgs) -> Run {
    require(v.format, &[Format::Table, Format::Json])?;
    let report = verify_theorems(&verify_config(v)?)?;
    let text = match v.format {
        Format::Json => pretty(&report_json(&report)),
        _ => report.render(),
    };
    Ok(Report { text, holds: report.all_pass() })
}

fn export(input: &Input, spec: Option<&str>) -> Run {
    let ws = load(input)?;
    let text = match (spec, input.format) {
        (None, Format::Json) => ws.to_json(),
        (None, Format::Text) => ws.to_text(),
        (None, Format::Dot) => dot_poset(ws.poset()),
        (Some(name), Format::Dot) => dot_ideals(&IdealLattice::new(&ws.spec(name)?)?),
        (None, Format::Table) => return Err(Error::Unsupported("table of a workspace".into()).into()),
        (Some(_), f) => {
            let name = format!("{f:?}").to_lowercase();
            return Err(Error::Unsupported(format!("{name} of an ideal lattice")).into());
        }
    };
    Ok(Report::ok(text))
}
