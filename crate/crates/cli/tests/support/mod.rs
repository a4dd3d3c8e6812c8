//! Golden, adapter, exit-code and schema checks for the command line.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use serde_json::Value as Json;
use superdelta::brackets::{higher_bracket, jacobiator};
use superdelta::dsl::{as_function, load, render_density, render_item, render_op, render_poly, Item, Module};
use superdelta::geom::{
    bracket_from_operator, canonical_pencil, coordinate_bracket, jacobi_report, lb_data, master_discrepancy,
    pencil_bracket, VBracketData,
};
use superdelta::{Op, Weight};
use superdelta_cli::{run_with, Outcome};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

/// Runs a command line given as one string, resolving `--input` against the
/// fixture directory.
pub fn cli(line: &str) -> Outcome {
    let mut argv = vec!["superdelta".to_string()];
    let mut words = line.split_whitespace();
    while let Some(w) = words.next() {
        argv.push(w.to_string());
        if w == "--input" {
            argv.push(fixture(words.next().unwrap()));
        }
    }
    run_with(argv, false)
}

pub struct Golden {
    pub command: String,
    pub stdout: String,
}

pub fn goldens() -> Vec<Golden> {
    let text = std::fs::read_to_string(fixtures().join("golden.txt")).unwrap();
    let mut out: Vec<Golden> = Vec::new();
    for line in text.lines() {
        if let Some(cmd) = line.strip_prefix("$ ") {
            out.push(Golden { command: cmd.to_string(), stdout: String::new() });
        } else if let Some(g) = out.last_mut() {
            g.stdout.push_str(line);
            g.stdout.push('\n');
        }
    }
    out
}

pub const SUBCOMMANDS: [&str; 10] =
    ["apply", "bracket", "pencil", "adjoint", "derived", "jacobiator", "classify", "master", "transform", "report"];

pub const FIXTURES: [&str; 4] = ["bv.sd", "lb.sd", "pencil.sd", "master.sd"];

/// Every golden block reproduces byte for byte; returns the number checked.
pub fn check_goldens() -> Result<usize, String> {
    let all = goldens();
    for sub in SUBCOMMANDS {
        if !all.iter().any(|g| g.command.starts_with(&format!("{sub} "))) {
            return Err(format!("no golden for `{sub}`"));
        }
    }
    for f in FIXTURES {
        if !all.iter().any(|g| g.command.contains(&format!("--input {f}"))) {
            return Err(format!("no golden on `{f}`"));
        }
    }
    for g in &all {
        let out = cli(&g.command);
        if out.code != 0 || out.stdout != g.stdout {
            return Err(format!("`{}`: exit {}\n{}{}", g.command, out.code, out.stdout, out.stderr));
        }
    }
    Ok(all.len())
}

fn module(name: &str) -> Module {
    load(&std::fs::read_to_string(fixtures().join(name)).unwrap()).unwrap()
}

fn op<'a>(m: &'a Module, name: &str) -> &'a Op {
    match m.get(name) {
        Some(Item::Operator(d)) => d,
        _ => panic!("{name} is not an operator"),
    }
}

fn first_line(line: &str) -> String {
    cli(line).stdout.lines().next().unwrap_or_default().to_string()
}

/// The first line of text output equals the rendering of the matching core
/// call; returns the number of subcommands covered.
pub fn check_adapters() -> Result<usize, String> {
    let bv = module("bv.sd");
    let pencil = module("pencil.sd");
    let lb = module("lb.sd");
    let master = module("master.sd");
    let elems = |m: &Module, s: &str| m.element_list(s).unwrap();
    let funs = |m: &Module, s: &str| elems(m, s).iter().map(|d| as_function(d).unwrap()).collect::<Vec<_>>();
    let tensor = |m: &Module| match m.get("S") {
        Some(Item::Tensor(s)) => s.clone(),
        _ => unreachable!(),
    };
    let volume = |m: &Module, n: &str| match m.get(n) {
        Some(Item::Volume(v)) => v.clone(),
        _ => unreachable!(),
    };
    let map = match lb.get("phi") {
        Some(Item::Map(m)) => m.clone(),
        _ => unreachable!(),
    };
    let data = {
        let gamma = match pencil.get("gamma") {
            Some(Item::Vector(g)) => g.clone(),
            _ => unreachable!(),
        };
        let theta = as_function(&elems(&pencil, "theta")[0]).unwrap();
        VBracketData::new(tensor(&pencil), gamma, theta).unwrap()
    };
    let w: Weight = Weight::new(1, 2);
    let f = funs(&bv, "f, g");
    let p = op(&pencil, "P");
    let pairs: Vec<(&str, String)> = vec![
        ("apply --input bv.sd --op Delta --args f*g", render_density(&op(&bv, "Delta").apply(&elems(&bv, "f*g")[0]).unwrap())),
        ("bracket --input bv.sd --op Delta --args f,g", render_poly(&bracket_from_operator(op(&bv, "Delta"), &f[0], &f[1]).unwrap())),
        (
            "bracket --input pencil.sd --op P --args half,chi",
            render_density(&pencil_bracket(p, &elems(&pencil, "half")[0], &elems(&pencil, "chi")[0]).unwrap()),
        ),
        (
            "bracket --input lb.sd --bracket S --args f,x*xi",
            render_poly(&{
                let a = funs(&lb, "f, x*xi");
                coordinate_bracket(&tensor(&lb), &a[0], &a[1]).unwrap()
            }),
        ),
        ("pencil --input pencil.sd --bracket S --gamma gamma --theta theta", render_op(&canonical_pencil(&data))),
        (
            "pencil --input pencil.sd --bracket S --gamma gamma --theta theta --weight 1/2",
            render_op(&canonical_pencil(&data).specialize(&w)),
        ),
        (
            "pencil --input lb.sd --bracket S --sigma sigma",
            render_op(&canonical_pencil(&lb_data(&tensor(&lb), &volume(&lb, "sigma")).unwrap())),
        ),
        ("adjoint --input pencil.sd --op P", render_op(&p.pencil_adjoint())),
        ("adjoint --input bv.sd --op Curved", render_op(&op(&bv, "Curved").formal_adjoint())),
        ("derived --input bv.sd --op Delta --args x,xi", render_poly(&higher_bracket(op(&bv, "Delta"), &funs(&bv, "x, xi")).unwrap())),
        ("jacobiator --input bv.sd --op Curved --args x,x", render_poly(&jacobiator(op(&bv, "Curved"), &funs(&bv, "x, x")).unwrap())),
        (
            "classify --input bv.sd --op Curved",
            superdelta_cli::level_name(superdelta::geom::classify_square(op(&bv, "Curved")).unwrap().level).to_string(),
        ),
        (
            "master --input master.sd --bracket S --sigma0 flat --sigma curved",
            render_poly(&master_discrepancy(&tensor(&master), &volume(&master, "flat"), &volume(&master, "curved")).unwrap()),
        ),
        (
            "transform --input lb.sd --map phi --bracket S",
            render_item("S", "C", &Item::Tensor(map.push_tensor(&tensor(&lb)).unwrap())),
        ),
        (
            "transform --input lb.sd --map phi --sigma sigma",
            render_item("sigma", "C", &Item::Volume(map.push_log_volume(&volume(&lb, "sigma")).unwrap())),
        ),
        ("transform --input lb.sd --map phi --args f", render_poly(&map.push_poly(&funs(&lb, "f")[0]).unwrap())),
        (
            "report --input pencil.sd --bracket S --gamma gamma --theta theta",
            jacobi_report(&data).unwrap().slots().iter().map(|s| render_poly(s)).collect::<Vec<_>>().join(", "),
        ),
    ];
    let mut covered = std::collections::BTreeSet::new();
    for (line, want) in &pairs {
        let got = first_line(line);
        if &got != want {
            return Err(format!("`{line}`: cli printed `{got}`, core renders `{want}`"));
        }
        covered.insert(line.split_whitespace().next().unwrap());
    }
    if covered.len() != SUBCOMMANDS.len() {
        return Err(format!("adapter checks cover only {covered:?}"));
    }
    Ok(covered.len())
}

/// Each exit code is produced exactly by its class of failure.
pub fn check_exit_codes() -> Result<usize, String> {
    let cases: Vec<(&str, i32, &str)> = vec![
        ("derived --input bv.sd --op Delta --args x,xi", 0, ""),
        ("--conventions", 0, ""),
        ("--version", 0, ""),
        ("--help", 0, ""),
        ("", 1, "no subcommand"),
        ("frobnicate --input bv.sd", 1, "unrecognized subcommand"),
        ("derived --op Delta", 1, "--input"),
        ("derived --input missing.sd --op Delta", 1, "cannot read"),
        ("derived --input bv.sd", 1, "--op is required"),
        ("derived --input bv.sd --op Nope", 1, "no declaration named `Nope`"),
        ("derived --input bv.sd --op f", 1, "is an element"),
        ("jacobiator --input bv.sd --op Delta --args x,x --n 3", 1, "does not match"),
        ("apply --input bv.sd --op Delta --args x,xi", 1, "expected 1 elements"),
        ("pencil --input bv.sd --bracket S", 1, "no declaration named `S`"),
        ("pencil --input pencil.sd --bracket S --weight half", 1, "not a rational"),
        ("transform --input lb.sd --map phi", 1, "exactly one of"),
        ("pencil --input bad.sd --bracket S", 2, "5:12"),
        ("derived --input bv.sd --op Delta --args x+", 2, "syntax error"),
        ("derived --input bv.sd --op Delta --args y", 2, "scope error"),
        ("apply --input bv.sd --op Delta --args d(x)", 2, "only allowed in operators"),
        ("classify --input pencil.sd --op P", 3, "precondition violated"),
        ("classify --input bv.sd --op Even", 3, ""),
        ("derived --input pencil.sd --op P --args x", 3, "precondition violated"),
        ("derived --input bv.sd --op Delta --args f,half", 2, "undeclared name"),
        ("derived --input pencil.sd --op Odd --args x*t", 3, "weight 0"),
        ("report --input master.sd --bracket Even", 1, "no declaration"),
        ("classify --input bv.sd --op Cubic", 3, "order too high"),
    ];
    for (line, code, needle) in &cases {
        let out = cli(line);
        let text = format!("{}{}", out.stdout, out.stderr);
        if out.code != *code || !text.contains(needle) {
            return Err(format!("`{line}`: exit {} (wanted {code}), output:\n{text}", out.code));
        }
        if (out.code == 0) != out.stderr.is_empty() {
            return Err(format!("`{line}`: stderr must be empty exactly on success"));
        }
    }
    Ok(cases.len())
}

pub fn schema() -> Json {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/output.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// JSON output of every golden command validates against the shipped schema,
/// parses back to the same value and agrees with the text result line.
pub fn check_schema() -> Result<usize, String> {
    let schema = schema();
    let validator = jsonschema::JSONSchema::compile(&schema).map_err(|e| e.to_string())?;
    let bad = serde_json::json!({"result": 1, "parity": "none", "order": -1, "extra": {}});
    if validator.is_valid(&bad) {
        return Err("schema accepts a malformed object".into());
    }
    let mut n = 0;
    for g in goldens() {
        let out = cli(&format!("{} --json", g.command));
        let value: Json = serde_json::from_str(&out.stdout).map_err(|e| format!("`{}`: {e}", g.command))?;
        if let Err(errors) = validator.validate(&value) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            return Err(format!("`{}`: {}", g.command, msgs.join("; ")));
        }
        let again: Json = serde_json::from_str(&value.to_string()).unwrap();
        if again != value || value["result"].as_str() != g.stdout.lines().next() {
            return Err(format!("`{}`: JSON and text disagree", g.command));
        }
        n += 1;
    }
    Ok(n)
}
