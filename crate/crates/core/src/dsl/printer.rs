use std::fmt::Write;

use super::document::{Definition, ModelDocument};
use crate::expr::{format_component, format_rational, Component, Expr, FieldRole, FieldSystem, Parity};

/// Canonical text of a document; `parse(print(doc)) == doc`.
pub fn print(doc: &ModelDocument) -> String {
    let sys = &doc.system;
    let mut out = String::new();
    let _ = writeln!(out, "base dim {}", sys.base_dim());
    for (_, decl) in sys.fields() {
        let shape: Vec<String> = decl.shape.iter().map(usize::to_string).collect();
        let kw = match decl.role {
            FieldRole::Dynamic => "field",
            FieldRole::Ghost => "ghost",
            FieldRole::Parameter => "param",
        };
        let _ = write!(out, "{kw} {}[{}]", decl.name, shape.join(","));
        if decl.role == FieldRole::Dynamic && decl.parity == Parity::Odd {
            out.push_str(" odd");
        }
        if let Some(p) = decl.ghost_for {
            let _ = write!(out, " for {}", sys.field(p).name);
        }
        out.push('\n');
    }
    for b in &doc.bindings {
        out.push_str(&print_definition(sys, &b.name, &b.definition));
    }
    out
}

fn block(out: &mut String, sys: &FieldSystem, comps: impl IntoIterator<Item = (Component, Expr)>) {
    for (c, e) in comps {
        let _ = writeln!(out, "  {} => {}", format_component(sys, c), e.display(sys));
    }
    out.push_str("}\n");
}

/// One definition as a statement, newline-terminated.
pub fn print_definition(sys: &FieldSystem, name: &str, def: &Definition) -> String {
    let mut out = String::new();
    match def {
        Definition::Algebra(alg) => {
            let m = alg.dim();
            let _ = writeln!(out, "algebra {name}[{m}] {{");
            for ((r, p, q), v) in alg.independent_constants() {
                let _ = writeln!(out, "  c[{},{},{}] = {}", r + 1, p + 1, q + 1, format_rational(&v));
            }
            for p in 0..m {
                for q in p..m {
                    match alg.kappa(p, q) {
                        Some(k) if !num::Zero::is_zero(k) => {
                            let _ = writeln!(out, "  k[{},{}] = {}", p + 1, q + 1, format_rational(k));
                        }
                        _ => {}
                    }
                }
            }
            out.push_str("}\n");
        }
        Definition::Lagrangian(l) => {
            let _ = writeln!(out, "lagrangian {name} = {}", l.value().display(sys));
        }
        Definition::Expr(e) => {
            let _ = writeln!(out, "expr {name} = {}", e.display(sys));
        }
        Definition::Generator(v) => {
            let _ = writeln!(out, "generator {name} {{");
            block(&mut out, sys, v.components().iter().map(|(c, e)| (*c, e.clone())));
        }
        Definition::Gauge(g) => {
            let _ = writeln!(out, "gauge {name} {{");
            let comps = g.evaluate_on_fields(sys, Some).expect("generator over this system");
            block(&mut out, sys, comps);
        }
        Definition::Brst(b) => {
            let _ = writeln!(out, "brst {name} {{");
            block(&mut out, sys, b.field().components().iter().map(|(c, e)| (*c, e.clone())));
        }
    }
    out
}
