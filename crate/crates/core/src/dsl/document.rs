use crate::brst::BrstCandidate;
use crate::expr::{Expr, FieldSystem};
use crate::jetcalc::{GeneralizedVectorField, HorizontalDensity};
use crate::models::LieAlgebraData;
use crate::symmetry::GaugeGenerator;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    Algebra(LieAlgebraData),
    Lagrangian(HorizontalDensity),
    Expr(Expr),
    Generator(GeneralizedVectorField),
    Gauge(GaugeGenerator),
    Brst(BrstCandidate),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefinitionKind {
    Algebra,
    Lagrangian,
    Expr,
    Generator,
    Gauge,
    Brst,
}

impl DefinitionKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DefinitionKind::Algebra => "algebra",
            DefinitionKind::Lagrangian => "lagrangian",
            DefinitionKind::Expr => "expr",
            DefinitionKind::Generator => "generator",
            DefinitionKind::Gauge => "gauge",
            DefinitionKind::Brst => "brst",
        }
    }
}

impl Definition {
    pub fn kind(&self) -> DefinitionKind {
        match self {
            Definition::Algebra(_) => DefinitionKind::Algebra,
            Definition::Lagrangian(_) => DefinitionKind::Lagrangian,
            Definition::Expr(_) => DefinitionKind::Expr,
            Definition::Generator(_) => DefinitionKind::Generator,
            Definition::Gauge(_) => DefinitionKind::Gauge,
            Definition::Brst(_) => DefinitionKind::Brst,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub definition: Definition,
}

/// A parsed model file: the field system and its named definitions in
/// source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDocument {
    pub system: FieldSystem,
    pub bindings: Vec<Binding>,
}

impl ModelDocument {
    pub fn new(system: FieldSystem) -> Self {
        ModelDocument {
            system,
            bindings: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, definition: Definition) {
        self.bindings.push(Binding {
            name: name.into(),
            definition,
        });
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.bindings.iter().find(|b| b.name == name).map(|b| &b.definition)
    }

    pub fn of_kind(&self, kind: DefinitionKind) -> impl Iterator<Item = &Binding> {
        self.bindings.iter().filter(move |b| b.definition.kind() == kind)
    }

    /// The binding called `name`, or the only binding of this kind when no
    /// name is given.
    pub fn select(&self, kind: DefinitionKind, name: Option<&str>) -> Result<&Binding, String> {
        match name {
            Some(n) => self
                .of_kind(kind)
                .find(|b| b.name == n)
                .ok_or_else(|| format!("no {} named `{n}`", kind.keyword())),
            None => {
                let mut it = self.of_kind(kind);
                match (it.next(), it.next()) {
                    (Some(b), None) => Ok(b),
                    (None, _) => Err(format!("the document defines no {}", kind.keyword())),
                    (Some(_), Some(_)) => Err(format!("several {} definitions; choose one by name", kind.keyword())),
                }
            }
        }
    }
}
