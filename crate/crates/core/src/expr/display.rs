use std::fmt::{self, Write};

use num::{One, Signed};

use super::{Component, Expr, FieldSystem, JetVar, Monomial, Rational};

/// Prints an expression in the model-file surface syntax.
pub struct ExprDisplay<'a> {
    pub expr: &'a Expr,
    pub system: &'a FieldSystem,
}

impl Expr {
    pub fn display<'a>(&'a self, system: &'a FieldSystem) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, system }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `name[i,j]` with one-based fiber indices.
pub fn format_component(system: &FieldSystem, c: Component) -> String {
    let name = &system.field(c.field).name;
    let tuple = system.fiber_tuple(c.field, c.fiber);
    let idx: Vec<String> = tuple.iter().map(|t| (t + 1).to_string()).collect();
    format!("{}[{}]", name, idx.join(","))
}

/// `name[i,j;λ μ]` with one-based indices; the jet part is omitted for `|Λ| = 0`.
pub fn format_jet_var(system: &FieldSystem, v: &JetVar) -> String {
    let name = &system.field(v.field).name;
    let tuple = system.fiber_tuple(v.field, v.fiber);
    let mut out = String::new();
    out.push_str(name);
    out.push('[');
    for (k, t) in tuple.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}", t + 1);
    }
    if !v.multi_index.is_zero() {
        out.push(';');
        let entries: Vec<String> = v.multi_index.entries().iter().map(|e| (e + 1).to_string()).collect();
        out.push_str(&entries.join(" "));
    }
    out.push(']');
    out
}

fn push_power(out: &mut Vec<String>, base: String, k: u32) {
    if k == 1 {
        out.push(base);
    } else {
        out.push(format!("{base}^{k}"));
    }
}

fn factors(system: &FieldSystem, m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (dir, &k) in m.base_exponents().iter().enumerate() {
        if k > 0 {
            push_power(&mut out, format!("x[{}]", dir + 1), k as u32);
        }
    }
    for (v, k) in m.even_part() {
        push_power(&mut out, format_jet_var(system, v), *k);
    }
    for v in m.odd_part() {
        out.push(format_jet_var(system, v));
    }
    out
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.expr.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let fs = factors(self.system, m);
            if fs.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{} * ", format_rational(&abs))?;
                }
                f.write_str(&fs.join(" * "))?;
            }
        }
        Ok(())
    }
}
