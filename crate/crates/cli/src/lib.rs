//! Command-line front end: each subcommand loads a `.sd` module, resolves
//! named declarations and hands them to one core operation.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value as Json};
use superdelta::brackets::{higher_bracket, jacobiator, linfty_check, LinftyReport};
use superdelta::dsl::{as_function, load, render_density, render_item, render_op, render_poly, Diagnostic, Item, Module};
use superdelta::geom::{
    bracket_from_operator, canonical_pencil, classify_square, coordinate_bracket, jacobi_report, lb_data,
    master_discrepancy, pencil_bracket, BracketMatrix, CoordChange, LogVolume, SquareLevel, VBracketData,
};
use superdelta::{Density, Error, Grading, Op, Order, Parity, Poly, Rational, Weight};

pub const CONVENTIONS: &str = include_str!("conventions.txt");

#[derive(Parser, Debug)]
#[command(name = "superdelta", version, about = "Exact graded differential operators on superdomains")]
pub struct Cli {
    /// Print the frozen sign conventions and exit.
    #[arg(long)]
    pub conventions: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply an operator to an element.
    Apply(Selectors),
    /// Bracket of two elements, from an operator or a tensor.
    Bracket(Selectors),
    /// Canonical pencil of a bracket datum.
    Pencil(Selectors),
    /// Formal adjoint of an operator, or pencil adjoint if it contains W.
    Adjoint(Selectors),
    /// Higher derived bracket of an odd operator.
    Derived(Selectors),
    /// Jacobiator of the derived brackets.
    Jacobiator(Selectors),
    /// Order of the square and the Jacobi level of an odd operator.
    Classify(Selectors),
    /// Master discrepancy H between two log-volumes.
    Master(Selectors),
    /// Push an object through a declared coordinate map.
    Transform(Selectors),
    /// The four Jacobi expressions of a bracket datum.
    Report(Selectors),
}

#[derive(Args, Debug, Default, Clone)]
pub struct Selectors {
    /// Input module.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long)]
    pub bracket: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub sigma0: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    /// Comma-separated element expressions.
    #[arg(long)]
    pub args: Option<String>,
    /// Density weight, an integer or a fraction `p/q`.
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Coordinate map for `transform`.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub json: bool,
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub result: String,
    pub parity: Grading,
    pub order: Option<u32>,
    pub extra: Map<String, Json>,
}

impl Output {
    fn new(result: String, parity: Grading) -> Self {
        Output { result, parity, order: None, extra: Map::new() }
    }

    fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.extra.insert(key.into(), value.into());
        self
    }

    pub fn to_json(&self) -> Json {
        json!({
            "result": self.result,
            "parity": parity_name(self.parity),
            "order": self.order,
            "extra": self.extra,
        })
    }

    /// The result line followed by one `key: value` line per extra field.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.result);
        for (k, v) in &self.extra {
            match v {
                Json::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        out
    }
}

pub fn parity_name(g: Grading) -> &'static str {
    match g {
        Grading::Homogeneous(Parity::Even) => "even",
        Grading::Homogeneous(Parity::Odd) => "odd",
        Grading::Inhomogeneous => "inhomogeneous",
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse { diagnostic: Diagnostic, source: String, origin: String },
    Math(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse { .. } => 2,
            Failure::Math(_) => 3,
        }
    }

    pub fn message(&self, color: bool) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}\n"),
            Failure::Parse { diagnostic, source, origin } => {
                format!("{origin}:{}\n{}", diagnostic.pos, diagnostic.render(source, color))
            }
            Failure::Math(e) => format!("error: {e}\n"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message(false).trim_end())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

/// Everything a command printed, with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (including the program name). Diagnostics are
/// colored when `SUPERDELTA_COLOR=1`.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let color = std::env::var("SUPERDELTA_COLOR").map(|v| v == "1").unwrap_or(false);
    run_with(argv, color)
}

pub fn run_with<I, S>(argv: I, color: bool) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    if cli.conventions {
        return Outcome { code: 0, stdout: CONVENTIONS.to_string(), stderr: String::new() };
    }
    let Some(command) = cli.command else {
        return Outcome { code: 1, stdout: String::new(), stderr: "usage error: no subcommand given\n".into() };
    };
    let json_mode = selectors(&command).json;
    match execute(&command) {
        Ok(out) => {
            let stdout = if json_mode { format!("{}\n", out.to_json()) } else { out.to_text() };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(f) => Outcome { code: f.exit_code(), stdout: String::new(), stderr: f.message(color) },
    }
}

fn selectors(c: &Command) -> &Selectors {
    match c {
        Command::Apply(s)
        | Command::Bracket(s)
        | Command::Pencil(s)
        | Command::Adjoint(s)
        | Command::Derived(s)
        | Command::Jacobiator(s)
        | Command::Classify(s)
        | Command::Master(s)
        | Command::Transform(s)
        | Command::Report(s) => s,
    }
}

/// Loads the input module and runs the subcommand.
pub fn execute(c: &Command) -> Res<Output> {
    let sel = selectors(c);
    let origin = sel.input.display().to_string();
    let source = std::fs::read_to_string(&sel.input).map_err(|e| usage(format!("cannot read `{origin}`: {e}")))?;
    let module = load(&source).map_err(|diagnostic| Failure::Parse { diagnostic, source: source.clone(), origin })?;
    let ctx = Ctx { m: &module, sel };
    match c {
        Command::Apply(_) => ctx.apply(),
        Command::Bracket(_) => ctx.bracket(),
        Command::Pencil(_) => ctx.pencil(),
        Command::Adjoint(_) => ctx.adjoint(),
        Command::Derived(_) => ctx.derived(),
        Command::Jacobiator(_) => ctx.jacobiator(),
        Command::Classify(_) => ctx.classify(),
        Command::Master(_) => ctx.master(),
        Command::Transform(_) => ctx.transform(),
        Command::Report(_) => ctx.report(),
    }
}

/// CLI name of a classification level.
pub fn level_name(level: SquareLevel) -> &'static str {
    match level {
        SquareLevel::Le0 => "Jacobi_1",
        SquareLevel::Le1 => "Jacobi_2",
        SquareLevel::Le2 => "Jacobi_3",
        SquareLevel::Le3 => "none",
    }
}

fn order_value(o: Order) -> Option<u32> {
    match o {
        Order::Zero => None,
        Order::Finite(k) => Some(k),
    }
}

fn op_output(d: &Op) -> Output {
    let mut out = Output::new(render_op(d), d.parity_of());
    out.order = order_value(d.order_of());
    out
}

fn poly_output(f: &Poly) -> Output {
    Output::new(render_poly(f), f.parity_of())
}

fn density_output(d: &Density) -> Output {
    Output::new(render_density(d), d.parity_of())
}

struct Ctx<'a> {
    m: &'a Module,
    sel: &'a Selectors,
}

impl Ctx<'_> {
    fn item(&self, flag: &str, name: &Option<String>) -> Res<Option<&Item>> {
        let Some(name) = name else { return Ok(None) };
        self.m
            .get(name)
            .map(Some)
            .ok_or_else(|| usage(format!("--{flag}: no declaration named `{name}`")))
    }

    fn wrong_kind(flag: &str, want: &str, name: &Option<String>, got: &Item) -> Failure {
        let name = name.as_deref().unwrap_or_default();
        let kind = got.kind_name();
        let article = if kind.starts_with(['a', 'e', 'o']) { "an" } else { "a" };
        usage(format!("--{flag} expects {want}, but `{name}` is {article} {kind}"))
    }

    fn required<'b>(&self, flag: &str, name: &'b Option<String>) -> Res<&'b Option<String>> {
        match name {
            Some(_) => Ok(name),
            None => Err(usage(format!("--{flag} is required"))),
        }
    }

    fn op(&self) -> Res<&Op> {
        let name = self.required("op", &self.sel.op)?;
        match self.item("op", name)?.unwrap() {
            Item::Operator(d) => Ok(d),
            other => Err(Self::wrong_kind("op", "an operator", name, other)),
        }
    }

    fn tensor(&self) -> Res<Option<&BracketMatrix<Rational>>> {
        match self.item("bracket", &self.sel.bracket)? {
            None => Ok(None),
            Some(Item::Tensor(s)) => Ok(Some(s)),
            Some(other) => Err(Self::wrong_kind("bracket", "a tensor", &self.sel.bracket, other)),
        }
    }

    fn required_tensor(&self) -> Res<&BracketMatrix<Rational>> {
        self.required("bracket", &self.sel.bracket)?;
        Ok(self.tensor()?.unwrap())
    }

    fn volume(&self, flag: &str, name: &Option<String>) -> Res<Option<&LogVolume<Rational>>> {
        match self.item(flag, name)? {
            None => Ok(None),
            Some(Item::Volume(v)) => Ok(Some(v)),
            Some(other) => Err(Self::wrong_kind(flag, "a density", name, other)),
        }
    }

    fn map(&self) -> Res<&CoordChange<Rational>> {
        let name = self.required("map", &self.sel.map)?;
        match self.item("map", name)?.unwrap() {
            Item::Map(m) => Ok(m),
            other => Err(Self::wrong_kind("map", "a map", name, other)),
        }
    }

    /// Bracket datum from `--bracket` with either `--sigma` or `--gamma`/`--theta`.
    fn data(&self) -> Res<VBracketData<Rational>> {
        let s = self.required_tensor()?;
        if let Some(sigma) = self.volume("sigma", &self.sel.sigma)? {
            if self.sel.gamma.is_some() || self.sel.theta.is_some() {
                return Err(usage("--sigma cannot be combined with --gamma or --theta"));
            }
            return Ok(lb_data(s, sigma)?);
        }
        let chart = s.chart();
        let gamma = match self.item("gamma", &self.sel.gamma)? {
            None => vec![Poly::zero(chart); chart.dim()],
            Some(Item::Vector(g)) => g.clone(),
            Some(other) => return Err(Self::wrong_kind("gamma", "a vector", &self.sel.gamma, other)),
        };
        let theta = match self.item("theta", &self.sel.theta)? {
            None => Poly::zero(chart),
            Some(Item::Element(e)) => as_function(e)
                .ok_or_else(|| usage(format!("--theta expects a function, `{}` has a weight", self.sel.theta.as_deref().unwrap())))?,
            Some(other) => return Err(Self::wrong_kind("theta", "an element", &self.sel.theta, other)),
        };
        Ok(VBracketData::new(s.clone(), gamma, theta)?)
    }

    fn args(&self) -> Res<Vec<Density>> {
        let src = self.sel.args.as_deref().unwrap_or("");
        self.m.element_list(src).map_err(|diagnostic| Failure::Parse {
            diagnostic,
            source: src.to_string(),
            origin: "--args".into(),
        })
    }

    fn function_args(&self) -> Res<Vec<Poly>> {
        self.args()?
            .iter()
            .map(|d| {
                as_function(d).ok_or_else(|| {
                    Failure::Math(Error::Precondition("bracket arguments must be functions (weight 0)".into()))
                })
            })
            .collect()
    }

    fn arity(&self, n: usize) -> Res<Vec<Density>> {
        let args = self.args()?;
        if args.len() != n {
            return Err(usage(format!("--args: expected {n} elements, found {}", args.len())));
        }
        Ok(args)
    }

    fn weight(&self) -> Res<Option<Weight>> {
        self.sel
            .weight
            .as_deref()
            .map(|w| w.trim().parse::<Weight>().map_err(|_| usage(format!("--weight: `{w}` is not a rational number"))))
            .transpose()
    }

    fn apply(&self) -> Res<Output> {
        let d = self.op()?;
        let psi = self.arity(1)?.remove(0);
        Ok(density_output(&d.apply(&psi)?))
    }

    fn bracket(&self) -> Res<Output> {
        let args = self.arity(2)?;
        if let Some(s) = self.tensor()? {
            if self.sel.op.is_some() {
                return Err(usage("give either --op or --bracket"));
            }
            let f = self.function_args()?;
            return Ok(poly_output(&coordinate_bracket(s, &f[0], &f[1])?));
        }
        let d = self.op()?;
        if d.is_weight_free() {
            let f = self.function_args()?;
            Ok(poly_output(&bracket_from_operator(d, &f[0], &f[1])?))
        } else {
            Ok(density_output(&pencil_bracket(d, &args[0], &args[1])?))
        }
    }

    fn pencil(&self) -> Res<Output> {
        let p = canonical_pencil(&self.data()?);
        Ok(match self.weight()? {
            None => op_output(&p),
            Some(w) => op_output(&p.specialize(&w)).with("weight", w.to_string()),
        })
    }

    fn adjoint(&self) -> Res<Output> {
        let d = self.op()?;
        let a = if d.is_weight_free() { d.formal_adjoint() } else { d.pencil_adjoint() };
        let same = &a == d;
        Ok(op_output(&a).with("self_adjoint", same))
    }

    fn derived(&self) -> Res<Output> {
        let d = self.op()?;
        Ok(poly_output(&higher_bracket(d, &self.function_args()?)?))
    }

    fn jacobiator(&self) -> Res<Output> {
        let d = self.op()?;
        let args = self.function_args()?;
        if let Some(n) = self.sel.n {
            if n != args.len() {
                return Err(usage(format!("--n {n} does not match the {} arguments given", args.len())));
            }
        }
        Ok(poly_output(&jacobiator(d, &args)?))
    }

    fn classify(&self) -> Res<Output> {
        let d = self.op()?;
        let c = classify_square(d)?;
        let l = linfty_check(d, self.sel.n.unwrap_or(3))?;
        let mut out = Output::new(level_name(c.level).to_string(), d.parity_of())
            .with("level", level_name(c.level))
            .with("order_of_square", c.square_order.to_string())
            .with("jacobi1", c.jacobi1)
            .with("jacobi2", c.jacobi2)
            .with("jacobi3", c.jacobi3)
            .with("consistent", c.consistent)
            .with("linfty", linfty_json(&l));
        out.order = order_value(c.square_order);
        Ok(out)
    }

    fn master(&self) -> Res<Output> {
        let s = self.required_tensor()?;
        self.required("sigma0", &self.sel.sigma0)?;
        self.required("sigma", &self.sel.sigma)?;
        let s0 = self.volume("sigma0", &self.sel.sigma0)?.unwrap();
        let s1 = self.volume("sigma", &self.sel.sigma)?.unwrap();
        let h = master_discrepancy(s, s0, s1)?;
        let holds = h.is_zero();
        Ok(poly_output(&h).with("master_equation", if holds { "holds" } else { "fails" }))
    }

    fn transform(&self) -> Res<Output> {
        let phi = self.map()?;
        let given = [&self.sel.op, &self.sel.bracket, &self.sel.sigma, &self.sel.args];
        if given.iter().filter(|g| g.is_some()).count() != 1 {
            return Err(usage("transform needs exactly one of --op, --bracket, --sigma, --args"));
        }
        let chart_name = &self.m.chart_name;
        if self.sel.op.is_some() {
            Ok(op_output(&phi.push_op(self.op()?)?))
        } else if let Some(s) = self.tensor()? {
            let pushed = phi.push_tensor(s)?;
            let parity = Grading::Homogeneous(pushed.parity());
            let name = self.sel.bracket.as_deref().unwrap();
            Ok(Output::new(render_item(name, chart_name, &Item::Tensor(pushed)), parity))
        } else if let Some(v) = self.volume("sigma", &self.sel.sigma)? {
            let pushed = phi.push_log_volume(v)?;
            let parity = pushed.sigma().parity_of();
            let name = self.sel.sigma.as_deref().unwrap();
            Ok(Output::new(render_item(name, chart_name, &Item::Volume(pushed)), parity))
        } else {
            let f = self.function_args()?;
            if f.len() != 1 {
                return Err(usage(format!("--args: expected 1 element, found {}", f.len())));
            }
            Ok(poly_output(&phi.push_poly(&f[0])?))
        }
    }

    fn report(&self) -> Res<Output> {
        let data = self.data()?;
        let r = jacobi_report(&data)?;
        let slots: Vec<String> = r.slots().iter().map(|s| render_poly(s)).collect();
        Ok(Output::new(slots.join(", "), Grading::Homogeneous(data.parity()))
            .with("all_vanish", r.all_vanish())
            .with("ss", slots[0].clone())
            .with("sg", slots[1].clone())
            .with("st_gg", slots[2].clone())
            .with("gt", slots[3].clone()))
    }
}

fn linfty_json(l: &LinftyReport<Rational>) -> Json {
    let arities: Vec<Json> = l
        .arities
        .iter()
        .map(|a| {
            let witness = a.witness.as_ref().map(|w| {
                json!({
                    "args": w.args.iter().map(render_poly).collect::<Vec<_>>(),
                    "value": render_poly(&w.value),
                })
            });
            json!({ "n": a.n, "tuples": a.tuples, "exhaustive": a.exhaustive, "witness": witness })
        })
        .collect();
    json!({
        "square_order": l.square_order.to_string(),
        "identities_hold": l.identities_hold(),
        "sharp": l.sharp(),
        "is_linfty": l.is_linfty(),
        "arities": arities,
    })
}
