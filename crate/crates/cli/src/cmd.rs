use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use cellgreen::algebra::SymbolDoc;
use cellgreen::automata::{builtin, builtin_minpoly, parse_automaton, AutomatonDef, LinearCA};
use cellgreen::green::green_row;
use cellgreen::obstruct::{replay_final_argument, search_pi, PointCloud};
use cellgreen::propb::{check_b, max_margins, word_coverage, BSpec};
use cellgreen::subst::{
    builtin_system, builtin_system_names, check_assertion_i, check_assertion_ii, check_assertion_iii,
    SubstSystem,
};
use cellgreen::xp::{render_sample, render_spacetime, sample_xp, XpSample};
use cellgreen::{Error, Gf2, Gf3, Gf5, Gf7, Result, Scalar};
use num_rational::Ratio;

use crate::{CaArgs, Cli, Command, Format, Outcome, SubstOp, Which};

const WORD_EXHAUSTIVE_LIMIT: u128 = 1 << 16;

/// Runs `$body` with `$S` bound to the scalar type of field size `$p`.
macro_rules! with_field {
    ($p:expr, $S:ident => $body:expr) => {
        match $p {
            2 => { type $S = Gf2; $body }
            3 => { type $S = Gf3; $body }
            5 => { type $S = Gf5; $body }
            7 => { type $S = Gf7; $body }
            p => Err(Error::OutOfRange(format!("p = {p}; supported fields are 2, 3, 5, 7"))),
        }
    };
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let out = |o: &Option<PathBuf>| Sink::new(o.as_deref(), cli.out_dir.as_deref());
    match &cli.command {
        Command::Render { ca, rows, mirror, out: o } => {
            let p = field_of(ca)?;
            let pgm = with_field!(p, S => render_spacetime(&load_ca::<S>(&ca.ca)?.linear()?, *rows, *mirror))?;
            out(o).write(&pgm.to_bytes())?;
            Ok(Outcome::True)
        }
        Command::Green { ca, y, to, out: o } => {
            let p = field_of(ca)?;
            let to = to.unwrap_or(*y);
            if to < *y {
                return Err(Error::OutOfRange(format!("--to {to} is below --y {y}")));
            }
            let text = with_field!(p, S => green_text::<S>(&ca.ca, *y, to))?;
            out(o).write(text.as_bytes())?;
            Ok(Outcome::True)
        }
        Command::Propb { ca, x, y, l, r, coverage, trials, budget, out: o } => {
            let p = field_of(ca)?;
            let spec = BSpec::new(*x, *y, *l, *r);
            let cov = coverage.then_some((*trials, cli.seed));
            let (doc, holds) = with_field!(p, S => propb_doc::<S>(&ca.ca, spec, *budget, cov))?;
            out(o).write(json_line(&doc).as_bytes())?;
            Ok(if holds { Outcome::True } else { Outcome::False })
        }
        Command::Xp { ca, n, k, y_max, format, mirror, out: o } => {
            let p = field_of(ca)?;
            let y_max = y_max.unwrap_or_else(|| XpSample::default_y_max(p, *n));
            let s = with_field!(p, S => sample_xp(&load_ca::<S>(&ca.ca)?.linear()?, p, *n, *k, y_max))?;
            let format = format.unwrap_or_else(|| guess_format(o.as_deref()));
            let bytes = match format {
                Format::Json => format!("{}\n", s.to_json()).into_bytes(),
                Format::Csv => s.to_csv().into_bytes(),
                Format::Pgm => render_sample(&s, *mirror).to_bytes(),
            };
            out(o).write(&bytes)?;
            Ok(Outcome::True)
        }
        Command::Subst { op } => subst(op, cli),
        Command::Obstruct { f, g, n, k, tol, search, denom_bound, out: o } => {
            let (doc, obstruction) = obstruct_doc(f, g, *n, *k, *tol, search.then_some(*denom_bound))?;
            out(o).write(format!("{}\n", serde_json::to_string_pretty(&doc)?).as_bytes())?;
            Ok(if obstruction { Outcome::True } else { Outcome::False })
        }
    }
}

/// Output target: a file (relative paths resolved against the output
/// directory) or standard output.
struct Sink(Option<PathBuf>);

impl Sink {
    fn new(out: Option<&Path>, dir: Option<&Path>) -> Self {
        Sink(out.map(|o| match dir {
            Some(d) if o.is_relative() => d.join(o),
            _ => o.to_path_buf(),
        }))
    }

    fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.0 {
            Some(path) => {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent)?;
                }
                fs::write(path, bytes)?;
            }
            None => std::io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }
}

fn guess_format(out: Option<&Path>) -> Format {
    match out.and_then(Path::extension).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("pgm") => Format::Pgm,
        _ => Format::Json,
    }
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

fn field_of(ca: &CaArgs) -> Result<u32> {
    if Path::new(&ca.ca).is_file() {
        let doc = SymbolDoc::parse(&fs::read_to_string(&ca.ca)?)?;
        return match ca.p {
            Some(p) if p != doc.p => Err(Error::ModulusMismatch { expected: p, found: doc.p }),
            _ => Ok(doc.p),
        };
    }
    Ok(ca.p.unwrap_or(2))
}

/// Loads an automaton from a symbol file or an expression and runs the
/// self-checks of every builtin it mentions.
fn load_ca<S: Scalar>(spec: &str) -> Result<AutomatonDef<S>> {
    if Path::new(spec).is_file() {
        let doc = SymbolDoc::parse(&fs::read_to_string(spec)?)?;
        return Ok(AutomatonDef::Linear(LinearCA::new(doc.to_symbol::<S>()?)));
    }
    let a = parse_automaton::<S>(spec)?;
    self_check::<S>(spec)?;
    Ok(a)
}

fn mentioned(expr: &str) -> Vec<&str> {
    let mut v: Vec<&str> = expr
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|w| !w.is_empty())
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn self_check<S: Scalar>(expr: &str) -> Result<()> {
    for name in mentioned(expr) {
        if let Some(m) = builtin_minpoly::<S>(name) {
            let f = builtin::<S>(name)?.linear()?;
            if !m.annihilates(f.symbol()) {
                return Err(Error::Invalid(format!("builtin `{name}` fails its minimal polynomial")));
            }
        }
        if S::MODULUS == 2 {
            let table = match name {
                "gamma" => Some("gamma"),
                "gamma_inv" => Some("omega"),
                _ => None,
            };
            if let Some(t) = table {
                builtin_system(t)?;
            }
        }
    }
    Ok(())
}

fn green_text<S: Scalar>(ca: &str, y: u64, to: u64) -> Result<String> {
    let f = load_ca::<S>(ca)?.linear()?;
    let mut text = String::new();
    let first = green_row(&f, y);
    let rows = std::iter::successors(Some(first), |r| Some(r.advance(f.symbol())));
    for row in rows.take((to - y + 1) as usize) {
        text.push_str(&serde_json::to_string(&row.to_doc())?);
        text.push('\n');
    }
    Ok(text)
}

fn propb_doc<S: Scalar>(ca: &str, spec: BSpec, budget: u128, coverage: Option<(usize, u64)>) -> Result<(Value, bool)> {
    let a = load_ca::<S>(ca)?;
    let holds = check_b(&a, &spec, budget)?;
    let mut doc = json!({ "ca": ca, "p": S::MODULUS, "spec": spec, "holds": holds });
    if let Some(f) = a.as_linear() {
        doc["max_margins"] = json!(max_margins(&green_row(f, spec.y), spec.x));
        if let Some((trials, seed)) = coverage.filter(|_| holds) {
            doc["word_coverage"] = json!(word_coverage(f, &spec, trials, WORD_EXHAUSTIVE_LIMIT, seed)?);
        }
    }
    Ok((doc, holds))
}

fn load_system(name: &str) -> Result<(SubstSystem, Option<&'static str>)> {
    if builtin_system_names().contains(&name) {
        let l = builtin_system(name)?;
        return Ok((l.system, Some(l.automaton)));
    }
    if Path::new(name).is_file() {
        return Ok((SubstSystem::from_json(&fs::read_to_string(name)?)?, None));
    }
    Err(Error::Invalid(format!(
        "`{name}` is neither a builtin table ({}) nor a file",
        builtin_system_names().join(", ")
    )))
}

fn subst(op: &SubstOp, cli: &Cli) -> Result<Outcome> {
    match op {
        SubstOp::Expand { sys, depth, x_lo, x_hi, out } => {
            let (s, _) = load_system(&sys.system)?;
            let grid = s.expand(*depth);
            let keys = (0..grid.height() as u64).flat_map(|y| grid.row(y).keys().copied().collect::<Vec<_>>());
            let (lo, hi) = keys.fold((0, 0), |(a, b), x| (a.min(x), b.max(x)));
            let text = grid.render(&s, x_lo.unwrap_or(lo), x_hi.unwrap_or(hi));
            Sink::new(out.as_deref(), cli.out_dir.as_deref()).write(text.as_bytes())?;
            Ok(Outcome::True)
        }
        SubstOp::Cell { sys, x, y, depth } => {
            let (s, _) = load_system(&sys.system)?;
            let state = s.cell(*x, *y, *depth)?;
            println!("{}", json!({ "x": x, "y": y, "depth": depth, "state": s.state_name(state) }));
            Ok(Outcome::True)
        }
        SubstOp::Verify { sys, ca, depth } => {
            let (s, own) = load_system(&sys.system)?;
            let name = ca.as_deref().or(own).ok_or_else(|| Error::Invalid("--ca is required for table files".into()))?;
            let f = load_ca::<Gf2>(name)?.linear()?;
            let report = s.verify_against_green(&f, *depth)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.ok() { Outcome::True } else { Outcome::False })
        }
        SubstOp::Scc { sys } => {
            let (s, _) = load_system(&sys.system)?;
            let g = s.transition_graph();
            let names = |cs: Vec<Vec<u64>>| -> Vec<Vec<String>> {
                cs.into_iter().map(|c| c.into_iter().map(|x| s.state_name(x)).collect()).collect()
            };
            let doc = json!({
                "states": g.len(),
                "states_with_zero": g.len_with_zero(),
                "components": names(g.components()),
                "cyclic_components": names(g.cyclic_components()),
            });
            println!("{doc}");
            Ok(Outcome::True)
        }
        SubstOp::Assert { system, which, n } => {
            let table = |default: &str| -> Result<SubstSystem> { Ok(load_system(system.as_deref().unwrap_or(default))?.0) };
            let mut reports = Vec::new();
            if matches!(which, Which::I | Which::All) {
                reports.push(check_assertion_i(&table("gamma")?, 1 << (*n).min(30)));
            }
            if matches!(which, Which::Ii | Which::All) {
                reports.push(check_assertion_ii(&table("gamma")?, *n));
            }
            if matches!(which, Which::Iii | Which::All) {
                reports.push(check_assertion_iii(&table("omega")?, *n));
            }
            let holds = reports.iter().all(|r| r.holds);
            println!("{}", serde_json::to_string_pretty(&reports)?);
            Ok(if holds { Outcome::True } else { Outcome::False })
        }
    }
}

/// Point cloud for an automaton name and whether it comes from a table cover.
fn cloud_for(name: &str, n: u32, k: u32) -> Result<(PointCloud, bool)> {
    let cover = |t: &str| -> Result<PointCloud> { Ok(PointCloud::from_cover(&builtin_system(t)?.system, n)) };
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    Ok(match compact.as_str() {
        "gamma" => (cover("gamma")?, true),
        "gamma_inv" => (cover("omega")?, true),
        "dual(gamma)" => (cover("omega")?.mirrored(), true),
        "dual(gamma_inv)" => (cover("gamma")?.mirrored(), true),
        _ => {
            let f = load_ca::<Gf2>(name)?.linear()?;
            (PointCloud::from(&sample_xp(&f, 2, n, k, XpSample::default_y_max(2, n))?), false)
        }
    })
}

fn obstruct_doc(f: &str, g: &str, n: u32, k: u32, tol: i64, search: Option<i64>) -> Result<(Value, bool)> {
    self_check::<Gf2>(f)?;
    self_check::<Gf2>(g)?;
    let (cf, tf) = cloud_for(f, n, k)?;
    let (cg, tg) = cloud_for(g, n, k)?;
    let induction = tf && tg && {
        let gamma = builtin_system("gamma")?.system;
        let omega = builtin_system("omega")?.system;
        let m = n.max(3);
        check_assertion_i(&gamma, 1 << m).holds
            && check_assertion_ii(&gamma, m).holds
            && check_assertion_iii(&omega, m).holds
    };
    let verdict = replay_final_argument([f, g], &cf, &cg, tol, induction)?;
    let obstruction = verdict.obstruction;
    let mut doc: Value = serde_json::to_value(&verdict)?;
    doc["depth"] = json!(n);
    if let Some(bound) = search {
        let maps = search_pi(&cf, &cg, bound, Ratio::new(tol, cg.scale));
        doc["search"] = json!({ "denom_bound": bound, "maps": maps });
    }
    Ok((doc, obstruction))
}
