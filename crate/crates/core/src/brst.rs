//! Ghost substitution, BRST nilpotency checks and the structure-function
//! solver for quadratic ghost actions.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use thiserror::Error;

use crate::expr::{Component, Expr, ExprError, FieldDecl, FieldId, FieldRole, FieldSystem, JetVar, Parity, Rational};
use crate::jetcalc::{GeneralizedVectorField, JetError};
use crate::linsolve::solve_combination;
use crate::symmetry::{jet_variables, monomials_up_to, GaugeGenerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrstError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("no ghost field declared for parameter `{0}`")]
    MissingGhost(String),
    #[error("{0:?} is not a dynamic field component")]
    NotDynamic(Component),
    #[error("{0:?} is not a ghost component")]
    NotGhost(Component),
    #[error("component {0:?} does not raise ghost degree by one")]
    GhostDegree(Component),
    #[error("a BRST candidate must be odd")]
    EvenCandidate,
}

/// Ghost component replacing parameter component `r`.
pub fn ghost_component(system: &FieldSystem, parameter: Component) -> Result<Component, BrstError> {
    let ghost = system
        .ghost_for_parameter(parameter.field)
        .ok_or_else(|| BrstError::MissingGhost(system.field(parameter.field).name.clone()))?;
    Ok(Component {
        field: ghost,
        fiber: parameter.fiber,
    })
}

/// Replaces every parameter jet `ξ^r_Λ` by the ghost jet `c^r_Λ`:
/// `υ^i = Σ υ^{i,Λ}_r c^r_Λ`, an odd derivation.
pub fn ghostify(system: &FieldSystem, generator: &GaugeGenerator) -> Result<GeneralizedVectorField, BrstError> {
    let mut ghosts = BTreeMap::new();
    for k in generator.coefficients().keys() {
        ghosts.insert(k.parameter, ghost_component(system, k.parameter)?);
    }
    let comps = generator.evaluate_on_fields(system, |r| ghosts.get(&r).copied())?;
    Ok(GeneralizedVectorField::with_parity(system, comps, Parity::Odd)?)
}

/// `s = υ^i ∂_i + u^r ∂_r`, odd and of ghost degree one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrstCandidate {
    field: GeneralizedVectorField,
}

impl BrstCandidate {
    pub fn new(
        system: &FieldSystem,
        dynamic: BTreeMap<Component, Expr>,
        ghost: BTreeMap<Component, Expr>,
    ) -> Result<Self, BrstError> {
        let mut all = BTreeMap::new();
        for (c, e) in dynamic {
            if system.role(c.field) != FieldRole::Dynamic {
                return Err(BrstError::NotDynamic(c));
            }
            all.insert(c, e);
        }
        for (c, e) in ghost {
            if system.role(c.field) != FieldRole::Ghost {
                return Err(BrstError::NotGhost(c));
            }
            all.insert(c, e);
        }
        for (c, e) in &all {
            system.validate(e)?;
            let target = u32::from(system.role(c.field) == FieldRole::Ghost);
            if e.terms().any(|(m, _)| system.ghost_degree_of(m) != target + 1) {
                return Err(BrstError::GhostDegree(*c));
            }
        }
        let field = GeneralizedVectorField::new(system, all)?;
        if field.parity() != Parity::Odd && !field.components().is_empty() {
            return Err(BrstError::EvenCandidate);
        }
        let field = GeneralizedVectorField::with_parity(system, field.components().clone(), Parity::Odd)?;
        Ok(BrstCandidate { field })
    }

    /// A ghostified generator completed by the ghost action `u`.
    pub fn from_generator(
        system: &FieldSystem,
        generator: &GaugeGenerator,
        ghost: BTreeMap<Component, Expr>,
    ) -> Result<Self, BrstError> {
        let dynamic = ghostify(system, generator)?.components().clone();
        Self::new(system, dynamic, ghost)
    }

    pub fn field(&self) -> &GeneralizedVectorField {
        &self.field
    }

    pub fn component(&self, c: Component) -> Option<&Expr> {
        self.field.component(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    /// `ϑ(υ^A)` for every covered component, zero entries included.
    pub residuals: BTreeMap<Component, Expr>,
}

impl NilpotencyReport {
    pub fn nonzero(&self) -> impl Iterator<Item = (&Component, &Expr)> {
        self.residuals.iter().filter(|(_, e)| !e.is_zero())
    }
}

/// Evaluates `ϑ(υ^A)` on every covered component; the candidate is nilpotent
/// iff all vanish.
pub fn check_nilpotent(candidate: &BrstCandidate) -> NilpotencyReport {
    let mut prolong = candidate.field.prolongation();
    let residuals: BTreeMap<Component, Expr> = candidate
        .field
        .components()
        .iter()
        .map(|(c, e)| (*c, prolong.apply(e)))
        .collect();
    NilpotencyReport {
        nilpotent: residuals.values().all(Expr::is_zero),
        residuals,
    }
}

/// Key of a quadratic structure-function coefficient: target ghost and an
/// ordered pair of ghost jets (`first < second`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey {
    pub target: Component,
    pub first: JetVar,
    pub second: JetVar,
}

/// Quadratic structure functions `u^r = Σ u^{r}_{(2)ab} c^a c^b`, summed over
/// all ordered pairs of ghost jets with `u_{(2)}` antisymmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFunctions {
    /// `u^r_{(2)ab}` for `a < b`; `u_{(2)ba} = -u_{(2)ab}`.
    pub u2: BTreeMap<PairKey, Expr>,
    pub solution_space_dim: usize,
    /// Generalized Jacobi residuals `s(u^r)` for the representative.
    pub jacobi_residuals: BTreeMap<Component, Expr>,
}

impl StructureFunctions {
    /// `u_{(2)ab}` for any order of `a`, `b`.
    pub fn coefficient(&self, target: Component, a: &JetVar, b: &JetVar) -> Expr {
        if a == b {
            return Expr::zero();
        }
        let (first, second, flip) = if a < b { (a, b, false) } else { (b, a, true) };
        let key = PairKey {
            target,
            first: first.clone(),
            second: second.clone(),
        };
        let v = self.u2.get(&key).cloned().unwrap_or_default();
        if flip {
            -&v
        } else {
            v
        }
    }

    /// Re-expansion `u^r = Σ_{a<b} 2 u_{(2)ab} c^a c^b`.
    pub fn expand(&self) -> BTreeMap<Component, Expr> {
        let two = Rational::from_integer(2.into());
        let mut out: BTreeMap<Component, Expr> = BTreeMap::new();
        for (k, v) in &self.u2 {
            let pair = &Expr::var(k.first.clone()) * &Expr::var(k.second.clone());
            *out.entry(k.target).or_default() += &(v * &pair) * &two;
        }
        out
    }

    pub fn jacobi_holds(&self) -> bool {
        self.jacobi_residuals.values().all(Expr::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureSolution {
    Solved(StructureFunctions),
    /// The gauge transformations do not close into the quadratic ansatz.
    Infeasible,
}

/// Bounds on the structure-function ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct AnsatzBounds {
    /// Jet order of dynamic-field variables in the coefficients.
    pub jet_bound: usize,
    /// Polynomial degree of the coefficients in those variables.
    pub degree_bound: usize,
}

/// Solves `s(υ^i) = 0` for a ghost action `u^r` quadratic in ghost jets of
/// order at most the generator's parameter order, then evaluates `s(u^r)`.
pub fn solve_structure_functions(
    system: &FieldSystem,
    generator: &GaugeGenerator,
    bounds: AnsatzBounds,
) -> Result<StructureSolution, BrstError> {
    let ghosted = ghostify(system, generator)?;
    let ghost_comps: BTreeSet<Component> = generator
        .coefficients()
        .keys()
        .map(|k| ghost_component(system, k.parameter))
        .collect::<Result<_, _>>()?;
    let ghost_fields: BTreeSet<FieldId> = ghost_comps.iter().map(|c| c.field).collect();
    let order = generator.max_parameter_order();
    let ghost_vars: Vec<JetVar> = jet_variables(system, &ghost_fields, order)
        .into_iter()
        .filter(|v| ghost_comps.contains(&v.component()))
        .collect();
    let dynamic_fields: BTreeSet<FieldId> = system
        .fields()
        .filter(|(_, d)| d.role == FieldRole::Dynamic)
        .map(|(id, _)| id)
        .collect();
    let coefficient_basis = monomials_up_to(&jet_variables(system, &dynamic_fields, bounds.jet_bound), bounds.degree_bound);

    let targets: Vec<(Component, Expr)> = ghosted.components().iter().map(|(c, e)| (*c, e.clone())).collect();
    let mut known = ghosted.prolongation();
    let rhs: Vec<Expr> = targets.iter().map(|(_, e)| -&known.apply(e)).collect();

    let mut keys = Vec::new();
    let mut images = Vec::new();
    for &r in &ghost_comps {
        for (ai, a) in ghost_vars.iter().enumerate() {
            for b in &ghost_vars[ai + 1..] {
                let pair = &Expr::var(a.clone()) * &Expr::var(b.clone());
                for m in &coefficient_basis {
                    let basis = &Expr::term(Rational::one(), m.clone()) * &pair;
                    let single = GeneralizedVectorField::with_parity(system, BTreeMap::from([(r, basis)]), Parity::Odd)?;
                    let mut p = single.prolongation();
                    keys.push((
                        PairKey {
                            target: r,
                            first: a.clone(),
                            second: b.clone(),
                        },
                        m.clone(),
                    ));
                    images.push(targets.iter().map(|(_, e)| p.apply(e)).collect::<Vec<_>>());
                }
            }
        }
    }
    let Some(sol) = solve_combination(&rhs, &images) else {
        return Ok(StructureSolution::Infeasible);
    };
    let half = Rational::new(1.into(), 2.into());
    let mut u2: BTreeMap<PairKey, Expr> = BTreeMap::new();
    for ((key, m), x) in keys.into_iter().zip(sol.values) {
        if !x.is_zero() {
            u2.entry(key).or_default().add_term(m, x * &half);
        }
    }
    let mut functions = StructureFunctions {
        u2,
        solution_space_dim: sol.nullity,
        jacobi_residuals: BTreeMap::new(),
    };
    let u = functions.expand();
    let mut full = ghosted.components().clone();
    for &r in &ghost_comps {
        full.insert(r, u.get(&r).cloned().unwrap_or_default());
    }
    let full = GeneralizedVectorField::with_parity(system, full, Parity::Odd)?;
    let mut p = full.prolongation();
    functions.jacobi_residuals = ghost_comps
        .iter()
        .map(|&r| (r, p.apply(&u.get(&r).cloned().unwrap_or_default())))
        .collect();
    Ok(StructureSolution::Solved(functions))
}

/// Commutator of a generator with itself over two parameter copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    /// The input system extended by the copies `η` (named `<param>_eta`).
    pub system: FieldSystem,
    /// Parameter component of `ξ` to its copy in `η`.
    pub copies: BTreeMap<Component, Component>,
    /// `Σ_Σ [d_Σ υ^i(ξ) ∂^Σ_i υ^j(η) − (ξ↔η)]` per component `j`.
    pub components: BTreeMap<Component, Expr>,
    /// The same, split by the bilinear parameter monomial `ξ_Λ η_Σ`.
    pub by_pair: BTreeMap<(JetVar, JetVar), BTreeMap<Component, Expr>>,
}

pub fn extract_bracket(system: &FieldSystem, generator: &GaugeGenerator) -> Result<Bracket, BrstError> {
    let mut extended = system.clone();
    let params: BTreeSet<FieldId> = generator.coefficients().keys().map(|k| k.parameter.field).collect();
    let mut field_copies = BTreeMap::new();
    for &p in &params {
        let decl = system.field(p);
        let copy = extended.declare(FieldDecl {
            name: format!("{}_eta", decl.name),
            ghost_for: None,
            ..decl.clone()
        })?;
        field_copies.insert(p, copy);
    }
    let mut copies = BTreeMap::new();
    for c in system.components() {
        if let Some(&copy) = field_copies.get(&c.field) {
            copies.insert(c, Component { field: copy, ..c });
        }
    }
    let xi = GeneralizedVectorField::new(&extended, generator.evaluate_on_fields(&extended, Some)?)?;
    let eta = GeneralizedVectorField::new(
        &extended,
        generator.evaluate_on_fields(&extended, |r| copies.get(&r).copied())?,
    )?;
    let mut pxi = xi.prolongation();
    let mut peta = eta.prolongation();
    let mut components = BTreeMap::new();
    for c in generator.targets() {
        let ue = eta.component(c).cloned().unwrap_or_default();
        let ux = xi.component(c).cloned().unwrap_or_default();
        let b = &pxi.apply(&ue) - &peta.apply(&ux);
        if !b.is_zero() {
            components.insert(c, b);
        }
    }
    let copy_fields: BTreeSet<FieldId> = field_copies.values().copied().collect();
    let mut by_pair: BTreeMap<(JetVar, JetVar), BTreeMap<Component, Expr>> = BTreeMap::new();
    for (c, e) in &components {
        let is_param = |v: &JetVar| params.contains(&v.field) || copy_fields.contains(&v.field);
        for (key, coef) in e.collect_by(is_param) {
            let vars: Vec<&JetVar> = key.variables().collect();
            let (x, y) = match vars.as_slice() {
                [a, b] if params.contains(&a.field) => ((*a).clone(), (*b).clone()),
                [a, b] => ((*b).clone(), (*a).clone()),
                _ => unreachable!("bracket terms are bilinear in the two copies"),
            };
            by_pair.entry((x, y)).or_default().insert(*c, coef);
        }
    }
    Ok(Bracket {
        system: extended,
        copies,
        components,
        by_pair,
    })
}
