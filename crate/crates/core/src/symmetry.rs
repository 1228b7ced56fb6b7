//! Variational and gauge symmetries, trivial gauge symmetries, and bounded
//! on-shell reduction.
//!
//! `d_H`-exactness of a density is decided by the Euler-kernel criterion:
//! a polynomial density is a total divergence iff every Euler–Lagrange
//! expression of it vanishes. When a symmetry holds, an explicit current is
//! searched for with a bounded linear ansatz.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use thiserror::Error;

use crate::expr::{Component, Expr, ExprError, FieldRole, FieldSystem, JetVar, Monomial, MultiIndex, Parity};
use crate::jetcalc::{
    decompose_variation, dtot, dtot_multi, euler_lagrange, euler_operator, BoundaryCurrent, GeneralizedVectorField,
    HorizontalDensity, JetError,
};
use crate::linsolve::solve_combination;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("component {0:?} is not linear in parameter jets")]
    NotLinear(Component),
    #[error("gauge coefficients may only depend on dynamic fields")]
    ForeignCoefficient,
    #[error("{0:?} is not a dynamic field component")]
    NotDynamic(Component),
    #[error("{0:?} is not a parameter component")]
    NotParameter(Component),
    #[error("the Lagrangian depends on gauge parameters or ghosts")]
    ParameterInLagrangian,
    #[error("trivial-symmetry coefficients violate graded antisymmetry at {0:?}")]
    Antisymmetry(TrivialKey),
}

/// Index of a gauge coefficient `υ^{i,Λ}_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaugeKey {
    pub target: Component,
    pub parameter: Component,
    pub multi_index: MultiIndex,
}

/// A gauge generator `υ = Σ υ^{i,Λ}_r ξ^r_Λ ∂_i`, linear in parameter jets by
/// construction: only the coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeGenerator {
    coefficients: BTreeMap<GaugeKey, Expr>,
}

fn depends_only_on_dynamic(system: &FieldSystem, e: &Expr) -> bool {
    e.variables().iter().all(|v| system.role(v.field) == FieldRole::Dynamic)
}

impl GaugeGenerator {
    pub fn new(system: &FieldSystem, coefficients: BTreeMap<GaugeKey, Expr>) -> Result<Self, SymmetryError> {
        for (k, e) in &coefficients {
            system.validate(e)?;
            system.base_var(k.target)?;
            system.base_var(k.parameter)?;
            if system.role(k.target.field) != FieldRole::Dynamic {
                return Err(SymmetryError::NotDynamic(k.target));
            }
            if system.role(k.parameter.field) != FieldRole::Parameter {
                return Err(SymmetryError::NotParameter(k.parameter));
            }
            if !depends_only_on_dynamic(system, e) {
                return Err(SymmetryError::ForeignCoefficient);
            }
        }
        Ok(GaugeGenerator {
            coefficients: coefficients.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
        })
    }

    /// Reads coefficients off component expressions that are linear in the
    /// parameter jets, e.g. `a[1] => xi[1;1] + y[1] * xi[1]`.
    pub fn from_components(
        system: &FieldSystem,
        components: &BTreeMap<Component, Expr>,
    ) -> Result<Self, SymmetryError> {
        let mut coefficients = BTreeMap::new();
        for (&target, e) in components {
            system.validate(e)?;
            let is_param = |v: &JetVar| system.role(v.field) == FieldRole::Parameter;
            for (key, coef) in e.collect_by(is_param) {
                let var = match (key.even_part(), key.odd_part(), key.base_exponents()) {
                    ([(v, 1)], [], []) => v.clone(),
                    _ => return Err(SymmetryError::NotLinear(target)),
                };
                coefficients.insert(
                    GaugeKey {
                        target,
                        parameter: var.component(),
                        multi_index: var.multi_index.clone(),
                    },
                    coef,
                );
            }
        }
        Self::new(system, coefficients)
    }

    pub fn coefficients(&self) -> &BTreeMap<GaugeKey, Expr> {
        &self.coefficients
    }

    /// Highest parameter jet order `m`.
    pub fn max_parameter_order(&self) -> usize {
        self.coefficients.keys().map(|k| k.multi_index.order()).max().unwrap_or(0)
    }

    pub fn targets(&self) -> BTreeSet<Component> {
        self.coefficients.keys().map(|k| k.target).collect()
    }

    /// `υ^i = Σ υ^{i,Λ}_r d_Λ(ζ^r)` for parameter values `ζ` (missing ones are 0).
    pub fn evaluate(&self, values: &BTreeMap<Component, Expr>) -> BTreeMap<Component, Expr> {
        let mut out: BTreeMap<Component, Expr> = BTreeMap::new();
        for (k, coef) in &self.coefficients {
            if let Some(z) = values.get(&k.parameter) {
                let dz = dtot_multi(z, &k.multi_index);
                *out.entry(k.target).or_default() += coef * &dz;
            }
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Substitutes, for each parameter component, the jet variables of a
    /// replacement field component: `υ^i = Σ υ^{i,Λ}_r w(r)_Λ`.
    pub fn evaluate_on_fields(
        &self,
        system: &FieldSystem,
        replacement: impl Fn(Component) -> Option<Component>,
    ) -> Result<BTreeMap<Component, Expr>, ExprError> {
        let mut out: BTreeMap<Component, Expr> = BTreeMap::new();
        for (k, coef) in &self.coefficients {
            let Some(w) = replacement(k.parameter) else {
                continue;
            };
            let var = system.jet_var(w, k.multi_index.clone())?;
            *out.entry(k.target).or_default() += coef * &Expr::var(var);
        }
        out.retain(|_, e| !e.is_zero());
        Ok(out)
    }

    /// The generalized vector field on `Y × V`, parameters kept even.
    pub fn expand(&self, system: &FieldSystem) -> Result<GeneralizedVectorField, SymmetryError> {
        let comps = self.evaluate_on_fields(system, Some)?;
        Ok(GeneralizedVectorField::new(system, comps)?)
    }
}

/// Result of a variational-symmetry test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryVerdict {
    pub holds: bool,
    /// A current with `ϑ(𝓛) = Σ d_λ J^λ`, when the bounded search finds one.
    pub current: Option<BoundaryCurrent>,
    /// Nonzero Euler–Lagrange expressions of `ϑ(𝓛)`; empty iff `holds`.
    pub euler_residuals: BTreeMap<Component, Expr>,
    /// `ϑ(𝓛)`.
    pub action: Expr,
}

/// Decides whether `ϑ(𝓛)` is a total divergence.
pub fn is_variational_symmetry(
    system: &FieldSystem,
    field: &GeneralizedVectorField,
    lagrangian: &HorizontalDensity,
) -> SymmetryVerdict {
    let variation = decompose_variation(system, field, lagrangian);
    let euler_residuals: BTreeMap<Component, Expr> = euler_operator(system, &variation.action)
        .components
        .into_iter()
        .filter(|(_, e)| !e.is_zero())
        .collect();
    let holds = euler_residuals.is_empty();
    let current = if holds {
        find_divergence_potential(system, &variation.contraction).map(|tau| variation.boundary.add(&tau))
    } else {
        None
    };
    SymmetryVerdict {
        holds,
        current,
        euler_residuals,
        action: variation.action,
    }
}

/// Gauge-symmetry test: parameters are treated as even fields of `Y × V`.
pub fn is_gauge_symmetry(
    system: &FieldSystem,
    generator: &GaugeGenerator,
    lagrangian: &HorizontalDensity,
) -> Result<SymmetryVerdict, SymmetryError> {
    if !depends_only_on_dynamic(system, lagrangian.value()) {
        return Err(SymmetryError::ParameterInLagrangian);
    }
    let field = generator.expand(system)?;
    Ok(is_variational_symmetry(system, &field, lagrangian))
}

/// Monomials `m'` with `d_λ m'` containing `m`, obtained by lowering one
/// jet variable of `m` by `λ` (or raising `x^λ` for jet-free monomials).
fn lowered_monomials(m: &Monomial, dir: usize, base_dim: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for v in m.variables() {
        let Some(lower) = v.multi_index.lowered(dir) else {
            continue;
        };
        let (_, rest) = m.left_partial(v).expect("variable occurs");
        if let Some((lowered, _)) = rest.times_var(&v.with_multi_index(lower)) {
            out.push(lowered);
        }
    }
    if m.jet_degree() == 0 {
        let mut exps = vec![0u16; base_dim];
        exps[dir] = 1;
        if let Some((raised, _)) = m.mul(&Monomial::from_base_exponents(&exps)) {
            out.push(raised);
        }
    }
    out
}

/// Bounded search for `τ` with `f = Σ_λ d_λ τ^λ`. The ansatz is spanned by
/// monomials one integration step below those of `f`, widened once by the
/// monomials the first ansatz produces.
pub fn find_divergence_potential(system: &FieldSystem, f: &Expr) -> Option<BoundaryCurrent> {
    let n = system.base_dim();
    if f.is_zero() {
        return Some(BoundaryCurrent::zero(n));
    }
    let mut seeds: BTreeSet<Monomial> = f.terms().map(|(m, _)| m.clone()).collect();
    let mut ansatz: BTreeSet<(usize, Monomial)> = BTreeSet::new();
    for _round in 0..2 {
        for m in &seeds {
            for dir in 0..n {
                for lower in lowered_monomials(m, dir, n) {
                    ansatz.insert((dir, lower));
                }
            }
        }
        let candidates: Vec<(usize, Monomial)> = ansatz.iter().cloned().collect();
        let images: Vec<Vec<Expr>> = candidates
            .iter()
            .map(|(dir, m)| vec![dtot(&Expr::term(num::One::one(), m.clone()), *dir)])
            .collect();
        if let Some(sol) = solve_combination(std::slice::from_ref(f), &images) {
            let mut current = BoundaryCurrent::zero(n);
            for ((dir, m), x) in candidates.iter().zip(&sol.values) {
                if !x.is_zero() {
                    current.components[*dir].add_term(m.clone(), x.clone());
                }
            }
            return Some(current);
        }
        seeds = images.iter().flat_map(|img| img[0].terms().map(|(m, _)| m.clone())).collect();
    }
    None
}

/// Index of a trivial-symmetry coefficient `T^{j,i,Λ}_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrivialKey {
    pub j: Component,
    pub i: Component,
    pub parameter: Component,
    pub multi_index: MultiIndex,
}

/// Builds `υ^{i,Λ}_r = Σ_j T^{j,i,Λ}_r E_j`. Requires graded antisymmetry
/// `T^{i,j,Λ}_r = -(-1)^{[i][j]} T^{j,i,Λ}_r`, which makes `Σ_i υ^i E_i`
/// vanish identically.
pub fn trivial_gauge_symmetry(
    system: &FieldSystem,
    coefficients: &BTreeMap<TrivialKey, Expr>,
    lagrangian: &HorizontalDensity,
) -> Result<GaugeGenerator, SymmetryError> {
    for (k, t) in coefficients {
        if t.is_zero() {
            continue;
        }
        let swapped = TrivialKey {
            j: k.i,
            i: k.j,
            ..k.clone()
        };
        let sign_flip = system.component_parity(k.i).koszul(system.component_parity(k.j));
        let expected = if sign_flip { t.clone() } else { -t };
        let partner = coefficients.get(&swapped).cloned().unwrap_or_default();
        if partner != expected || t.parity() != Some(Parity::Even) {
            return Err(SymmetryError::Antisymmetry(k.clone()));
        }
    }
    let euler = euler_lagrange(system, lagrangian);
    let mut out: BTreeMap<GaugeKey, Expr> = BTreeMap::new();
    for (k, t) in coefficients {
        for c in [k.i, k.j] {
            if system.role(c.field) != FieldRole::Dynamic {
                return Err(SymmetryError::NotDynamic(c));
            }
        }
        let key = GaugeKey {
            target: k.i,
            parameter: k.parameter,
            multi_index: k.multi_index.clone(),
        };
        *out.entry(key).or_default() += t * euler.get(k.j);
    }
    GaugeGenerator::new(system, out)
}

/// `Σ_i υ^i · E_i` for a gauge generator with parameters kept even.
pub fn gauge_contraction(
    system: &FieldSystem,
    generator: &GaugeGenerator,
    lagrangian: &HorizontalDensity,
) -> Result<Expr, SymmetryError> {
    let field = generator.expand(system)?;
    let euler = euler_lagrange(system, lagrangian);
    let mut out = Expr::zero();
    for (c, u) in field.components() {
        out += u * euler.get(*c);
    }
    Ok(out)
}

/// Outcome of a bounded on-shell reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OnShellVerdict {
    /// `f = Σ M^{i,Λ} · d_Λ(E_i)` with the exhibited multipliers.
    ZeroOnShell {
        witness: BTreeMap<(Component, MultiIndex), Expr>,
    },
    /// No combination within the bounds; not a disproof.
    NotFoundWithinBounds,
}

impl OnShellVerdict {
    pub fn is_zero_on_shell(&self) -> bool {
        matches!(self, OnShellVerdict::ZeroOnShell { .. })
    }
}

/// Every monomial of degree at most `max_degree` in `vars` (odd variables
/// at most once), including `1`.
pub fn monomials_up_to(vars: &[JetVar], max_degree: usize) -> Vec<Monomial> {
    fn rec(vars: &[JetVar], start: usize, left: usize, cur: &Monomial, out: &mut Vec<Monomial>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for k in start..vars.len() {
            let v = &vars[k];
            // Odd variables cannot repeat, so move past them.
            let next = if v.is_odd() { k + 1 } else { k };
            if let Some((m, _)) = cur.times_var(v) {
                rec(vars, next, left - 1, &m, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(vars, 0, max_degree, &Monomial::one(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Jet variables of the given fields' components up to `max_order`.
pub fn jet_variables(system: &FieldSystem, fields: &BTreeSet<crate::expr::FieldId>, max_order: usize) -> Vec<JetVar> {
    let mis = MultiIndex::all_up_to(system.base_dim(), max_order);
    let mut out = Vec::new();
    for c in system.components() {
        if !fields.contains(&c.field) {
            continue;
        }
        for mi in &mis {
            out.push(system.jet_var(c, mi.clone()).expect("valid by construction"));
        }
    }
    out.sort();
    out
}

/// Searches multipliers `M^{i,Λ}` (jet order ≤ `jet_bound`, degree ≤
/// `degree_bound`, `|Λ| ≤ jet_bound`) with `f = Σ M^{i,Λ} d_Λ(E_i)`.
pub fn reduce_on_shell(
    system: &FieldSystem,
    f: &Expr,
    lagrangian: &HorizontalDensity,
    jet_bound: usize,
    degree_bound: usize,
) -> OnShellVerdict {
    let euler = euler_lagrange(system, lagrangian);
    let mut fields: BTreeSet<_> = f.variables().iter().map(|v| v.field).collect();
    fields.extend(lagrangian.value().variables().iter().map(|v| v.field));
    let vars = jet_variables(system, &fields, jet_bound);
    let multipliers = monomials_up_to(&vars, degree_bound);
    let mut keys = Vec::new();
    let mut images = Vec::new();
    for (c, e) in euler.nonzero() {
        for mi in MultiIndex::all_up_to(system.base_dim(), jet_bound) {
            let de = dtot_multi(e, &mi);
            for m in &multipliers {
                let img = &Expr::term(num::One::one(), m.clone()) * &de;
                if img.is_zero() {
                    continue;
                }
                keys.push((*c, mi.clone(), m.clone()));
                images.push(vec![img]);
            }
        }
    }
    match solve_combination(std::slice::from_ref(f), &images) {
        Some(sol) => {
            let mut witness: BTreeMap<(Component, MultiIndex), Expr> = BTreeMap::new();
            for ((c, mi, m), x) in keys.into_iter().zip(sol.values) {
                if !x.is_zero() {
                    witness.entry((c, mi)).or_default().add_term(m, x);
                }
            }
            OnShellVerdict::ZeroOnShell { witness }
        }
        None => OnShellVerdict::NotFoundWithinBounds,
    }
}

/// `Σ M^{i,Λ} · d_Λ(E_i)` for a witness.
pub fn expand_on_shell_witness(
    system: &FieldSystem,
    lagrangian: &HorizontalDensity,
    witness: &BTreeMap<(Component, MultiIndex), Expr>,
) -> Expr {
    let euler = euler_lagrange(system, lagrangian);
    let mut out = Expr::zero();
    for ((c, mi), m) in witness {
        out += m * &dtot_multi(euler.get(*c), mi);
    }
    out
}

#[cfg(test)]
mod tests;
