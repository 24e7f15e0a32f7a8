use std::fmt::Write as _;
use std::sync::Arc;

use crate::classify::{Options, ProblemSpec};
use crate::error::{Error, Position, Result};
use crate::field::{Field, RatFunc};
use crate::skew::{affine_coefficients, FieldPresentation, SkewDerivation, SkewEndo, SkewPair};

use super::expr::{eval_ratfunc, parse_expr};

/// A parsed problem file: the spec plus the names of declared constants.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub constant_names: Vec<String>,
}

impl ProblemFile {
    /// Same field, twist, derivation, constants and options.
    pub fn same_as(&self, other: &ProblemFile) -> bool {
        self.spec.pair.same_as(&other.spec.pair)
            && self.spec.pair.constants() == other.spec.pair.constants()
            && self.constant_names == other.constant_names
            && self.spec.options == other.spec.options
    }
}

struct Entry {
    value: String,
    key_pos: Position,
    value_pos: Position,
}

const RESERVED: [&str; 2] = ["X", "inv"];

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Entries in file order.
fn split_lines(text: &str) -> Result<Vec<(String, Entry)>> {
    let mut out: Vec<(String, Entry)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let key_col = content.len() - content.trim_start().len() + 1;
        let Some(colon) = content.find(':') else {
            return Err(Error::Parse { pos: Position { line, column: key_col }, msg: "expected `key: value`".into() });
        };
        let key = content[..colon].trim().to_string();
        let rest = &content[colon + 1..];
        let value_col = colon + 2 + (rest.len() - rest.trim_start().len());
        let key_pos = Position { line, column: key_col };
        if out.iter().any(|(k, _)| *k == key) {
            return Err(Error::Parse { pos: key_pos, msg: format!("duplicate key `{key}`") });
        }
        let value_pos = Position { line, column: value_col };
        out.push((key, Entry { value: rest.trim().to_string(), key_pos, value_pos }));
    }
    Ok(out)
}

fn parse_field(e: &Entry) -> Result<Field> {
    let parts: Vec<&str> = e.value.split_whitespace().collect();
    match parts[..] {
        ["Q"] => Ok(Field::Rational),
        ["Fp", p] => {
            let p: u64 = p.parse().map_err(|_| Error::Parse { pos: e.value_pos, msg: format!("bad characteristic `{p}`") })?;
            Field::prime(p)
        }
        _ => Err(Error::Parse { pos: e.value_pos, msg: "field must be `Q` or `Fp <prime>`".into() }),
    }
}

fn parse_vars(e: &Entry) -> Result<Vec<String>> {
    let mut vars: Vec<String> = Vec::new();
    let mut col = e.value_pos.column;
    for piece in e.value.split(',') {
        let name = piece.trim();
        let pos = Position { line: e.value_pos.line, column: col + (piece.len() - piece.trim_start().len()) };
        if !is_ident(name) {
            return Err(Error::Parse { pos, msg: format!("`{name}` is not a variable name") });
        }
        if RESERVED.contains(&name) {
            return Err(Error::Parse { pos, msg: format!("`{name}` is reserved") });
        }
        if vars.iter().any(|v| v == name) {
            return Err(Error::Parse { pos, msg: format!("variable `{name}` declared twice") });
        }
        vars.push(name.to_string());
        col += piece.len() + 1;
    }
    Ok(vars)
}

fn parse_bool(e: &Entry) -> Result<bool> {
    match e.value.as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Parse { pos: e.value_pos, msg: "expected true or false".into() }),
    }
}

fn parse_num<T: std::str::FromStr>(e: &Entry) -> Result<T> {
    e.value.parse().map_err(|_| Error::Parse { pos: e.value_pos, msg: format!("expected a number, found `{}`", e.value) })
}

fn apply_option(opts: &mut Options, name: &str, e: &Entry) -> Result<()> {
    match name {
        "orbit_bound" => opts.orbit_bound = parse_num(e)?,
        "window" => opts.window = parse_num(e)?,
        "word_length" => opts.word_length = parse_num(e)?,
        "tower_depth" => opts.tower_depth = Some(parse_num(e)?),
        "certify" => opts.certify = parse_bool(e)?,
        "max_nilpotent_power" => opts.max_nilpotent_power = parse_num(e)?,
        "max_words" => opts.limits.max_words = parse_num(e)?,
        "max_terms" => opts.limits.max_terms = parse_num(e)?,
        "max_bits" => opts.limits.max_bits = parse_num(e)?,
        _ => return Err(Error::Parse { pos: e.key_pos, msg: format!("unknown option `{name}`") }),
    }
    Ok(())
}

/// `(v - beta)/alpha` for `sigma(v) = alpha*v + beta`.
fn affine_inverse(pres: &FieldPresentation, img: &RatFunc, i: usize) -> Option<RatFunc> {
    let (alpha, beta) = affine_coefficients(img, i)?;
    let ainv = alpha.inv().ok()?;
    Some(pres.generator(i).sub(&RatFunc::constant(pres.ring(), beta)).scale(&ainv))
}

/// Parses the line-oriented `key: value` format and runs every structural
/// check on the resulting pair.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let entries = split_lines(text)?;
    let lookup = |k: &str| entries.iter().find(|(key, _)| key == k).map(|(_, e)| e);
    let field_e = lookup("field")
        .ok_or(Error::Parse { pos: Position { line: 1, column: 1 }, msg: "missing `field`".into() })?;
    let field = parse_field(field_e)?;
    let vars_e = lookup("vars").ok_or(Error::Parse { pos: Position { line: 1, column: 1 }, msg: "missing `vars`".into() })?;
    let vars = parse_vars(vars_e)?;
    let pres = FieldPresentation::new(field, vars.clone())?;
    let ring = pres.ring().clone();
    let eval = |e: &Entry| -> Result<RatFunc> { eval_ratfunc(&parse_expr(&e.value, e.value_pos.line, e.value_pos.column, false)?, &ring) };

    let mut sigma: Vec<Option<RatFunc>> = vec![None; vars.len()];
    let mut sigma_inv: Vec<Option<RatFunc>> = vec![None; vars.len()];
    let mut delta: Vec<Option<RatFunc>> = vec![None; vars.len()];
    let mut constants: Vec<(String, RatFunc)> = Vec::new();
    let mut options = Options::default();

    for (key, e) in &entries {
        if key == "field" || key == "vars" {
            continue;
        }
        let Some((head, name)) = key.split_once('.') else {
            return Err(Error::Parse { pos: e.key_pos, msg: format!("unknown key `{key}`") });
        };
        let var_slot = |slot: &str| -> Result<usize> {
            pres.ring().var_index(slot).ok_or_else(|| Error::UndeclaredVariable { name: slot.to_string(), pos: e.key_pos })
        };
        match head {
            "sigma" => sigma[var_slot(name)?] = Some(eval(e)?),
            "sigma_inv" => sigma_inv[var_slot(name)?] = Some(eval(e)?),
            "delta" => delta[var_slot(name)?] = Some(eval(e)?),
            "E" => {
                if !is_ident(name) {
                    return Err(Error::Parse { pos: e.key_pos, msg: format!("bad constant name `{name}`") });
                }
                constants.push((name.to_string(), eval(e)?));
            }
            "option" => apply_option(&mut options, name, e)?,
            _ => return Err(Error::Parse { pos: e.key_pos, msg: format!("unknown key `{key}`") }),
        }
    }

    let gens = pres.generators();
    let images: Vec<RatFunc> = sigma.iter().zip(&gens).map(|(s, g)| s.clone().unwrap_or_else(|| g.clone())).collect();
    let mut inverse = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        let inv = match (&sigma[i], &sigma_inv[i]) {
            (_, Some(f)) => f.clone(),
            (None, None) => gens[i].clone(),
            (Some(_), None) => affine_inverse(&pres, &images[i], i).ok_or_else(|| {
                Error::BadPresentation(format!("sigma_inv.{} is required when sigma.{} is not affine", vars[i], vars[i]))
            })?,
        };
        inverse.push(inv);
    }
    let endo = Arc::new(SkewEndo::new(&pres, images, inverse)?);
    let zero = RatFunc::zero(&ring);
    let dimgs: Vec<RatFunc> = delta.into_iter().map(|d| d.unwrap_or_else(|| zero.clone())).collect();
    let der = SkewDerivation::new(endo, dimgs)?;
    let (constant_names, constant_values): (Vec<String>, Vec<RatFunc>) = constants.into_iter().unzip();
    let pair = Arc::new(SkewPair::new(der, constant_values)?);
    Ok(ProblemFile { spec: ProblemSpec { pair, options }, constant_names })
}

/// Canonical text that [`parse_problem`] reads back to the same problem.
pub fn print_problem(pf: &ProblemFile) -> String {
    let pair = &pf.spec.pair;
    let pres = pair.presentation();
    let mut out = String::new();
    match pres.field() {
        Field::Rational => out.push_str("field: Q\n"),
        Field::Prime(p) => writeln!(out, "field: Fp {p}").unwrap(),
    }
    writeln!(out, "vars: {}", pres.vars().join(", ")).unwrap();
    let gens = pres.generators();
    for (i, v) in pres.vars().iter().enumerate() {
        if pair.sigma().images()[i] != gens[i] {
            writeln!(out, "sigma.{v}: {}", pair.sigma().images()[i]).unwrap();
            writeln!(out, "sigma_inv.{v}: {}", pair.sigma().inverse_images()[i]).unwrap();
        }
    }
    for (i, v) in pres.vars().iter().enumerate() {
        let d = &pair.delta().images()[i];
        if !d.is_zero() {
            writeln!(out, "delta.{v}: {d}").unwrap();
        }
    }
    for (name, e) in pf.constant_names.iter().zip(pair.constants()) {
        writeln!(out, "E.{name}: {e}").unwrap();
    }
    let o = &pf.spec.options;
    let d = Options::default();
    if o.orbit_bound != d.orbit_bound {
        writeln!(out, "option.orbit_bound: {}", o.orbit_bound).unwrap();
    }
    if o.window != d.window {
        writeln!(out, "option.window: {}", o.window).unwrap();
    }
    if o.word_length != d.word_length {
        writeln!(out, "option.word_length: {}", o.word_length).unwrap();
    }
    if let Some(t) = o.tower_depth {
        writeln!(out, "option.tower_depth: {t}").unwrap();
    }
    if o.certify != d.certify {
        writeln!(out, "option.certify: {}", o.certify).unwrap();
    }
    if o.max_nilpotent_power != d.max_nilpotent_power {
        writeln!(out, "option.max_nilpotent_power: {}", o.max_nilpotent_power).unwrap();
    }
    if o.limits.max_words != d.limits.max_words {
        writeln!(out, "option.max_words: {}", o.limits.max_words).unwrap();
    }
    if o.limits.max_terms != d.limits.max_terms {
        writeln!(out, "option.max_terms: {}", o.limits.max_terms).unwrap();
    }
    if o.limits.max_bits != d.limits.max_bits {
        writeln!(out, "option.max_bits: {}", o.limits.max_bits).unwrap();
    }
    out
}
