//! Differential operators of the variational calculus on jet coordinates:
//! total and partial derivatives, prolongation of generalized vector fields,
//! the graded Euler–Lagrange operator and the first variational formula at
//! density level.

use std::collections::{BTreeMap, HashMap};

use num::BigInt;
use thiserror::Error;

use crate::expr::{Component, Expr, ExprError, FieldSystem, JetVar, MultiIndex, Parity, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("base direction {direction} out of range for base dimension {dim}")]
    DirectionOutOfRange { direction: usize, dim: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("component {0:?} has mixed parity")]
    MixedComponent(Component),
    #[error("derivation parity is not uniform across components")]
    NonUniformParity,
    #[error("a Lagrangian density must be even")]
    OddDensity,
}

fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// `d_λ f` without range checks; `direction` must be below the base dimension.
pub fn dtot(f: &Expr, direction: usize) -> Expr {
    f.map_monomials(|m, c, out| {
        if let Some((k, rest)) = m.base_partial(direction) {
            out.add_term(rest, c * int(k));
        }
        for v in m.variables() {
            let (k, rest) = m.left_partial(v).expect("variable occurs in monomial");
            if let Some((prod, negate)) = rest.times_var(&v.raised(direction)) {
                let coef = c * int(if negate { -k } else { k });
                out.add_term(prod, coef);
            }
        }
    })
}

/// `d_Λ f` as a composition of single total derivatives.
pub fn dtot_multi(f: &Expr, multi_index: &MultiIndex) -> Expr {
    multi_index
        .entries()
        .into_iter()
        .fold(f.clone(), |acc, dir| dtot(&acc, dir))
}

/// Total derivative `d_λ f = ∂_λ f + Σ s^A_{λ+Λ} ∂^Λ_A f` (zero-based `λ`).
pub fn total_derivative(system: &FieldSystem, f: &Expr, direction: usize) -> Result<Expr, JetError> {
    if direction >= system.base_dim() {
        return Err(JetError::DirectionOutOfRange {
            direction,
            dim: system.base_dim(),
        });
    }
    system.validate(f)?;
    Ok(dtot(f, direction))
}

pub fn total_derivative_multi(system: &FieldSystem, f: &Expr, multi_index: &MultiIndex) -> Result<Expr, JetError> {
    if multi_index.dim() != system.base_dim() {
        return Err(ExprError::BaseDimMismatch {
            expected: system.base_dim(),
            found: multi_index.dim(),
        }
        .into());
    }
    system.validate(f)?;
    Ok(dtot_multi(f, multi_index))
}

/// Partial derivative; graded left derivative for odd `v`.
pub fn partial(f: &Expr, v: &JetVar) -> Expr {
    f.left_partial(v)
}

/// A generalized vector field `υ = υ^A ∂_A` on a declared subset of
/// components, generating the vertical derivation `ϑ = Σ d_Λ υ^A ∂^Λ_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedVectorField {
    components: BTreeMap<Component, Expr>,
    parity: Parity,
}

impl GeneralizedVectorField {
    /// Builds a field, inferring its derivation parity `[υ^A] + [s^A]`.
    /// Zero components are dropped; an all-zero field is even.
    pub fn new(system: &FieldSystem, components: BTreeMap<Component, Expr>) -> Result<Self, JetError> {
        let mut parity = None;
        for (c, e) in &components {
            system.validate(e)?;
            if e.is_zero() {
                continue;
            }
            let p = e.parity().ok_or(JetError::MixedComponent(*c))? + system.component_parity(*c);
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return Err(JetError::NonUniformParity),
                _ => {}
            }
        }
        let components = components.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        Ok(GeneralizedVectorField {
            components,
            parity: parity.unwrap_or(Parity::Even),
        })
    }

    /// Like [`GeneralizedVectorField::new`] but with a prescribed parity,
    /// which also fixes the parity of an all-zero field.
    pub fn with_parity(
        system: &FieldSystem,
        components: BTreeMap<Component, Expr>,
        parity: Parity,
    ) -> Result<Self, JetError> {
        let mut out = Self::new(system, components)?;
        if out.components.is_empty() {
            out.parity = parity;
        } else if out.parity != parity {
            return Err(JetError::NonUniformParity);
        }
        Ok(out)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn components(&self) -> &BTreeMap<Component, Expr> {
        &self.components
    }

    /// `υ^A`, zero when uncovered.
    pub fn component(&self, c: Component) -> Option<&Expr> {
        self.components.get(&c)
    }

    /// Highest jet order appearing in any component.
    pub fn order(&self) -> usize {
        self.components.values().map(Expr::jet_order).max().unwrap_or(0)
    }

    pub fn prolongation(&self) -> Prolongation<'_> {
        Prolongation {
            field: self,
            cache: HashMap::new(),
        }
    }
}

/// The prolonged derivation `ϑ` with memoized `d_Λ υ^A`.
pub struct Prolongation<'a> {
    field: &'a GeneralizedVectorField,
    cache: HashMap<(Component, MultiIndex), Expr>,
}

impl Prolongation<'_> {
    /// `d_Λ υ^A`, or `None` if `A` is not covered.
    pub fn jet_component(&mut self, c: Component, mi: &MultiIndex) -> Option<Expr> {
        let base = self.field.components.get(&c)?;
        if mi.is_zero() {
            return Some(base.clone());
        }
        if let Some(e) = self.cache.get(&(c, mi.clone())) {
            return Some(e.clone());
        }
        let dir = mi.first_direction().expect("nonzero multi-index");
        let lower = self.jet_component(c, &mi.lowered(dir).expect("direction occurs"))?;
        let e = dtot(&lower, dir);
        self.cache.insert((c, mi.clone()), e.clone());
        Some(e)
    }

    /// `ϑ(f) = Σ_{A,Λ} d_Λ(υ^A) · ∂^Λ_A f`.
    pub fn apply(&mut self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for v in f.variables() {
            if let Some(dv) = self.jet_component(v.component(), &v.multi_index) {
                let p = f.left_partial(&v);
                out += &dv * &p;
            }
        }
        out
    }
}

/// `ϑ(f)` for the prolongation of `field`.
pub fn prolong_apply(field: &GeneralizedVectorField, f: &Expr) -> Expr {
    field.prolongation().apply(f)
}

/// The coefficient `𝓛` of a horizontal density `𝓛 ω`; always even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalDensity {
    value: Expr,
}

impl HorizontalDensity {
    pub fn new(system: &FieldSystem, value: Expr) -> Result<Self, JetError> {
        system.validate(&value)?;
        if value.parity() != Some(Parity::Even) {
            return Err(JetError::OddDensity);
        }
        Ok(HorizontalDensity { value })
    }

    pub fn value(&self) -> &Expr {
        &self.value
    }
}

/// Euler–Lagrange expressions `E_A`, one per declared field component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerResult {
    pub components: BTreeMap<Component, Expr>,
}

impl EulerResult {
    pub fn get(&self, c: Component) -> &Expr {
        &self.components[&c]
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Expr::is_zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Component, &Expr)> {
        self.components.iter().filter(|(_, e)| !e.is_zero())
    }
}

/// `E_A(f) = Σ_Λ (-1)^{|Λ|} d_Λ(∂^Λ_A f)` for any expression, with left
/// partials for odd components.
pub fn euler_operator(system: &FieldSystem, f: &Expr) -> EulerResult {
    let mut components: BTreeMap<Component, Expr> =
        system.components().into_iter().map(|c| (c, Expr::zero())).collect();
    for v in f.variables() {
        let p = dtot_multi(&f.left_partial(&v), &v.multi_index);
        let slot = components.entry(v.component()).or_default();
        if v.order() % 2 == 0 {
            *slot += p;
        } else {
            *slot -= &p;
        }
    }
    EulerResult { components }
}

pub fn euler_lagrange(system: &FieldSystem, lagrangian: &HorizontalDensity) -> EulerResult {
    euler_operator(system, lagrangian.value())
}

/// A horizontal current `σ = σ^λ ω_λ`, stored by base direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCurrent {
    pub components: Vec<Expr>,
}

impl BoundaryCurrent {
    pub fn zero(base_dim: usize) -> Self {
        BoundaryCurrent {
            components: vec![Expr::zero(); base_dim],
        }
    }

    /// `Σ_λ d_λ σ^λ`.
    pub fn divergence(&self) -> Expr {
        let mut out = Expr::zero();
        for (dir, s) in self.components.iter().enumerate() {
            out += dtot(s, dir);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn add(&self, other: &BoundaryCurrent) -> BoundaryCurrent {
        BoundaryCurrent {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Density-level first variational formula:
/// `ϑ(𝓛) = Σ_A υ^A E_A + Σ_λ d_λ σ^λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variation {
    /// `ϑ(𝓛)`.
    pub action: Expr,
    /// `Σ_A υ^A · E_A`.
    pub contraction: Expr,
    pub boundary: BoundaryCurrent,
}

impl Variation {
    /// `ϑ(𝓛) - contraction - div σ`; identically zero.
    pub fn residual(&self) -> Expr {
        &(&self.action - &self.contraction) - &self.boundary.divergence()
    }
}

/// Splits `ϑ(𝓛)` by repeated integration by parts. Each term
/// `d_Λ(υ^A) · f` with `Λ = λ + Λ'` (λ the first direction of `Λ`) becomes
/// `d_λ(d_Λ'(υ^A) · f) - d_Λ'(υ^A) · d_λ f` until no derivatives remain on `υ`.
pub fn decompose_variation(
    system: &FieldSystem,
    field: &GeneralizedVectorField,
    lagrangian: &HorizontalDensity,
) -> Variation {
    let l = lagrangian.value();
    let mut prolong = field.prolongation();
    let action = prolong.apply(l);
    let mut boundary = BoundaryCurrent::zero(system.base_dim());
    for v in l.variables() {
        let c = v.component();
        if field.component(c).is_none() {
            continue;
        }
        let mut q = l.left_partial(&v);
        let mut mi = v.multi_index.clone();
        let mut negative = false;
        while let Some(dir) = mi.first_direction() {
            let lower = mi.lowered(dir).expect("direction occurs");
            let piece = &prolong.jet_component(c, &lower).expect("covered") * &q;
            if negative {
                boundary.components[dir] -= &piece;
            } else {
                boundary.components[dir] += piece;
            }
            q = dtot(&q, dir);
            negative = !negative;
            mi = lower;
        }
    }
    let euler = euler_lagrange(system, lagrangian);
    let mut contraction = Expr::zero();
    for (c, u) in field.components() {
        contraction += u * euler.get(*c);
    }
    Variation {
        action,
        contraction,
        boundary,
    }
}
