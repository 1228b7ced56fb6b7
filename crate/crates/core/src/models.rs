//! Built-in gauge models: Lie algebra data, the bracket of sections of
//! `T_G P`, principal connections with their gauge generator, the Yang–Mills
//! Lagrangian and the Yang–Mills BRST candidate.

use std::collections::BTreeMap;

use num::{One, Zero};
use thiserror::Error;

use crate::brst::{BrstCandidate, BrstError};
use crate::expr::{Component, Expr, ExprError, FieldId, FieldSystem, Parity, Rational};
use crate::jetcalc::{HorizontalDensity, JetError};
use crate::symmetry::{GaugeGenerator, SymmetryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("structure constants are not antisymmetric at ({r}, {p}, {q})")]
    NotAntisymmetric { r: usize, p: usize, q: usize },
    #[error("invariant metric is not symmetric at ({p}, {q})")]
    MetricNotSymmetric { p: usize, q: usize },
    #[error("invariant metric is not ad-invariant")]
    MetricNotInvariant,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("the Yang-Mills Lagrangian needs an invariant metric")]
    MissingMetric,
    #[error("section has {found} components, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("section components may depend on base coordinates only")]
    NotASection,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Brst(#[from] BrstError),
}

/// Structure constants `c^r_{pq}` of an `m`-dimensional Lie algebra in a
/// fixed basis, with an optional invariant metric `κ_{pq}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    constants: Vec<Rational>,
    metric: Option<Vec<Rational>>,
}

impl LieAlgebraData {
    /// Validates antisymmetry, and symmetry plus ad-invariance of `κ`.
    /// Missing entries are zero.
    pub fn new(
        dim: usize,
        constants: &BTreeMap<(usize, usize, usize), Rational>,
        metric: Option<&BTreeMap<(usize, usize), Rational>>,
    ) -> Result<Self, ModelError> {
        let check = |i: usize| {
            if i < dim {
                Ok(())
            } else {
                Err(ModelError::IndexOutOfRange { index: i, dim })
            }
        };
        let mut c = vec![Rational::zero(); dim * dim * dim];
        for (&(r, p, q), v) in constants {
            check(r)?;
            check(p)?;
            check(q)?;
            c[(r * dim + p) * dim + q] = v.clone();
        }
        let metric = match metric {
            Some(k) => {
                let mut out = vec![Rational::zero(); dim * dim];
                for (&(p, q), v) in k {
                    check(p)?;
                    check(q)?;
                    out[p * dim + q] = v.clone();
                }
                Some(out)
            }
            None => None,
        };
        let data = LieAlgebraData {
            dim,
            constants: c,
            metric,
        };
        data.validate()?;
        Ok(data)
    }

    /// Like [`LieAlgebraData::new`], filling `c^r_{qp} = -c^r_{pq}` for every
    /// listed entry.
    pub fn antisymmetrized(
        dim: usize,
        constants: &BTreeMap<(usize, usize, usize), Rational>,
        metric: Option<&BTreeMap<(usize, usize), Rational>>,
    ) -> Result<Self, ModelError> {
        let mut full = constants.clone();
        for (&(r, p, q), v) in constants {
            let swapped = full.entry((r, q, p)).or_insert_with(|| -v);
            if *swapped != -v {
                return Err(ModelError::NotAntisymmetric { r, p, q });
            }
        }
        Self::new(dim, &full, metric)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let m = self.dim;
        for r in 0..m {
            for p in 0..m {
                for q in 0..m {
                    if self.c(r, p, q) != &-self.c(r, q, p) {
                        return Err(ModelError::NotAntisymmetric { r, p, q });
                    }
                }
            }
        }
        if let Some(k) = &self.metric {
            for p in 0..m {
                for q in 0..m {
                    if k[p * m + q] != k[q * m + p] {
                        return Err(ModelError::MetricNotSymmetric { p, q });
                    }
                }
            }
            // f_{rpq} = κ_{rs} c^s_{pq} must be totally antisymmetric; with
            // antisymmetry in (p, q) it suffices that f_{rpq} = -f_{prq}.
            let f = |r: usize, p: usize, q: usize| -> Rational {
                (0..m).map(|s| &k[r * m + s] * self.c(s, p, q)).sum()
            };
            for r in 0..m {
                for p in 0..m {
                    for q in 0..m {
                        if f(r, p, q) != -f(p, r, q) {
                            return Err(ModelError::MetricNotInvariant);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `su(2)` with `c^r_{pq} = ε_{rpq}` and `κ = δ`.
    pub fn su2() -> Self {
        let mut c = BTreeMap::new();
        for (r, p, q) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c.insert((r, p, q), Rational::one());
        }
        Self::antisymmetrized(3, &c, Some(&identity(3))).expect("su(2) data")
    }

    /// The abelian algebra of dimension `m` with `κ = δ`.
    pub fn abelian(m: usize) -> Self {
        Self::new(m, &BTreeMap::new(), Some(&identity(m))).expect("abelian data")
    }

    /// `g ⊕ h`; the metric is block diagonal when both are present.
    pub fn direct_sum(&self, other: &LieAlgebraData) -> Self {
        let (a, b) = (self.dim, other.dim);
        let m = a + b;
        let mut c = BTreeMap::new();
        for r in 0..m {
            for p in 0..m {
                for q in 0..m {
                    let v = if r < a && p < a && q < a {
                        self.c(r, p, q).clone()
                    } else if r >= a && p >= a && q >= a {
                        other.c(r - a, p - a, q - a).clone()
                    } else {
                        continue;
                    };
                    if !v.is_zero() {
                        c.insert((r, p, q), v);
                    }
                }
            }
        }
        let metric = match (self.metric(), other.metric()) {
            (Some(_), Some(_)) => {
                let mut k = BTreeMap::new();
                for p in 0..a {
                    for q in 0..a {
                        k.insert((p, q), self.kappa(p, q).unwrap().clone());
                    }
                }
                for p in 0..b {
                    for q in 0..b {
                        k.insert((p + a, q + a), other.kappa(p, q).unwrap().clone());
                    }
                }
                Some(k)
            }
            _ => None,
        };
        Self::new(m, &c, metric.as_ref()).expect("direct sum of valid algebras")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^r_{pq}` (zero-based).
    pub fn c(&self, r: usize, p: usize, q: usize) -> &Rational {
        &self.constants[(r * self.dim + p) * self.dim + q]
    }

    pub fn kappa(&self, p: usize, q: usize) -> Option<&Rational> {
        self.metric.as_ref().map(|k| &k[p * self.dim + q])
    }

    pub fn metric(&self) -> Option<&[Rational]> {
        self.metric.as_deref()
    }

    /// Nonzero `c^r_{pq}` with `p < q`.
    pub fn independent_constants(&self) -> Vec<((usize, usize, usize), Rational)> {
        let mut out = Vec::new();
        for r in 0..self.dim {
            for p in 0..self.dim {
                for q in p + 1..self.dim {
                    let v = self.c(r, p, q);
                    if !v.is_zero() {
                        out.push(((r, p, q), v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(Zero::is_zero)
    }
}

fn identity(m: usize) -> BTreeMap<(usize, usize), Rational> {
    (0..m).map(|p| ((p, p), Rational::one())).collect()
}

/// `Σ_s (c^s_{pq} c^t_{sr} + c^s_{qr} c^t_{sp} + c^s_{rp} c^t_{sq}) = 0` for all `p, q, r, t`.
pub fn check_jacobi(algebra: &LieAlgebraData) -> bool {
    let m = algebra.dim;
    let c = |r, p, q| algebra.c(r, p, q);
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for t in 0..m {
                    let sum: Rational = (0..m)
                        .map(|s| c(s, p, q) * c(t, s, r) + c(s, q, r) * c(t, s, p) + c(s, r, p) * c(t, s, q))
                        .sum();
                    if !sum.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A section `u = u^λ ∂_λ + u^r e_r` of `T_G P` with polynomial
/// `x`-dependence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub horizontal: Vec<Expr>,
    pub vertical: Vec<Expr>,
}

impl Section {
    pub fn zero(base_dim: usize, algebra_dim: usize) -> Self {
        Section {
            horizontal: vec![Expr::zero(); base_dim],
            vertical: vec![Expr::zero(); algebra_dim],
        }
    }

    fn check(&self, base_dim: usize, algebra_dim: usize) -> Result<(), ModelError> {
        for (expected, part) in [(base_dim, &self.horizontal), (algebra_dim, &self.vertical)] {
            if part.len() != expected {
                return Err(ModelError::DimensionMismatch {
                    expected,
                    found: part.len(),
                });
            }
            if part.iter().any(|e| !e.variables().is_empty()) {
                return Err(ModelError::NotASection);
            }
        }
        Ok(())
    }
}

/// The bracket of sections of `T_G P`.
pub fn tgp_bracket(
    algebra: &LieAlgebraData,
    base_dim: usize,
    u: &Section,
    v: &Section,
) -> Result<Section, ModelError> {
    u.check(base_dim, algebra.dim)?;
    v.check(base_dim, algebra.dim)?;
    // u^μ ∂_μ f
    let along = |w: &Section, f: &Expr| -> Expr {
        let mut out = Expr::zero();
        for (mu, wm) in w.horizontal.iter().enumerate() {
            out += wm * &f.base_partial(mu);
        }
        out
    };
    let horizontal = (0..base_dim)
        .map(|l| &along(u, &v.horizontal[l]) - &along(v, &u.horizontal[l]))
        .collect();
    let vertical = (0..algebra.dim)
        .map(|r| {
            let mut out = &along(u, &v.vertical[r]) - &along(v, &u.vertical[r]);
            for p in 0..algebra.dim {
                for q in 0..algebra.dim {
                    let c = algebra.c(r, p, q);
                    if !c.is_zero() {
                        out += (&u.vertical[p] * &v.vertical[q]).scale(c);
                    }
                }
            }
            out
        })
        .collect();
    Ok(Section { horizontal, vertical })
}

/// Principal connections `a^r_λ` on an `n`-dimensional base with gauge
/// parameters `ξ^r`, optionally vector fields `τ^λ`, and their ghosts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionModel {
    pub base_dim: usize,
    pub algebra: LieAlgebraData,
    pub include_diffeo_ghosts: bool,
}

/// The field system of a [`ConnectionModel`] with handles to its fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSystem {
    pub system: FieldSystem,
    pub model: ConnectionModel,
    /// `a[r, λ]`.
    pub a: FieldId,
    pub xi: FieldId,
    pub tau: Option<FieldId>,
    /// Ghosts `c^r` for `ξ^r`.
    pub ghost: FieldId,
    /// Ghosts `c^λ` for `τ^λ`.
    pub diffeo_ghost: Option<FieldId>,
}

impl ConnectionModel {
    pub fn new(base_dim: usize, algebra: LieAlgebraData, include_diffeo_ghosts: bool) -> Self {
        ConnectionModel {
            base_dim,
            algebra,
            include_diffeo_ghosts,
        }
    }

    /// Fields in declaration order: `a[m,n]`, `xi[m]`, `tau[n]`, `c[m]`,
    /// `cv[n]` (the last pair only with diffeomorphism ghosts).
    pub fn build(&self) -> Result<ConnectionSystem, ModelError> {
        let (n, m) = (self.base_dim, self.algebra.dim);
        let mut system = FieldSystem::new(n)?;
        let a = system.add_dynamic("a", &[m, n], Parity::Even)?;
        let xi = system.add_parameter("xi", &[m])?;
        let tau = if self.include_diffeo_ghosts {
            Some(system.add_parameter("tau", &[n])?)
        } else {
            None
        };
        let ghost = system.add_ghost("c", &[m], Some(xi))?;
        let diffeo_ghost = match tau {
            Some(t) => Some(system.add_ghost("cv", &[n], Some(t))?),
            None => None,
        };
        Ok(ConnectionSystem {
            system,
            model: self.clone(),
            a,
            xi,
            tau,
            ghost,
            diffeo_ghost,
        })
    }
}

impl ConnectionSystem {
    pub fn base_dim(&self) -> usize {
        self.model.base_dim
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.model.algebra
    }

    pub fn a_component(&self, r: usize, lambda: usize) -> Component {
        self.system.component(self.a, &[r, lambda]).expect("index in range")
    }

    /// `a^r_{λ;Λ}` with the jet directions `dirs`.
    pub fn a(&self, r: usize, lambda: usize, dirs: &[usize]) -> Expr {
        self.system.var_expr(self.a, &[r, lambda], dirs).expect("index in range")
    }

    fn var(&self, field: FieldId, k: usize, dirs: &[usize]) -> Expr {
        self.system.var_expr(field, &[k], dirs).expect("index in range")
    }

    /// `δa^r_λ` at parameters `ξ` (jets of `xi_field`) and `τ` (jets of
    /// `tau_field`).
    fn connection_variation(&self, r: usize, lambda: usize, xi_field: FieldId, tau_field: Option<FieldId>) -> Expr {
        let (n, m) = (self.base_dim(), self.algebra().dim());
        let mut e = self.var(xi_field, r, &[lambda]);
        for p in 0..m {
            for q in 0..m {
                let c = self.algebra().c(r, p, q);
                if !c.is_zero() {
                    e += (&self.a(p, lambda, &[]) * &self.var(xi_field, q, &[])).scale(c);
                }
            }
        }
        if let Some(t) = tau_field {
            for mu in 0..n {
                e -= &self.a(r, mu, &[]) * &self.var(t, mu, &[lambda]);
                e -= &self.var(t, mu, &[]) * &self.a(r, lambda, &[mu]);
            }
        }
        e
    }

    /// The components of the model's gauge transformation, keyed by `a^r_λ`.
    pub fn generator_components(&self) -> BTreeMap<Component, Expr> {
        let mut out = BTreeMap::new();
        for r in 0..self.algebra().dim() {
            for l in 0..self.base_dim() {
                out.insert(self.a_component(r, l), self.connection_variation(r, l, self.xi, self.tau));
            }
        }
        out
    }
}

/// `δa^r_λ = c^r_{pq} a^p_λ ξ^q + ξ^r_λ - a^r_μ τ^μ_λ - τ^μ a^r_{λ;μ}`, the
/// `τ` terms present with diffeomorphism ghosts.
pub fn connection_generator(model: &ConnectionSystem) -> GaugeGenerator {
    GaugeGenerator::from_components(&model.system, &model.generator_components())
        .expect("connection generator is linear in its parameters")
}

/// `F^r_{λμ} = a^r_{μ;λ} - a^r_{λ;μ} + c^r_{pq} a^p_λ a^q_μ`.
pub fn field_strength(model: &ConnectionSystem, r: usize, lambda: usize, mu: usize) -> Expr {
    let m = model.algebra().dim();
    let mut f = &model.a(r, mu, &[lambda]) - &model.a(r, lambda, &[mu]);
    for p in 0..m {
        for q in 0..m {
            let c = model.algebra().c(r, p, q);
            if !c.is_zero() {
                f += (&model.a(p, lambda, &[]) * &model.a(q, mu, &[])).scale(c);
            }
        }
    }
    f
}

/// `𝓛 = -1/4 κ_{pq} F^p_{λμ} F^q_{λμ}` with a flat Euclidean base metric.
pub fn yang_mills_lagrangian(model: &ConnectionSystem) -> Result<HorizontalDensity, ModelError> {
    let algebra = model.algebra();
    if algebra.metric().is_none() {
        return Err(ModelError::MissingMetric);
    }
    let (n, m) = (model.base_dim(), algebra.dim());
    let quarter = Rational::new((-1).into(), 4.into());
    let mut l = Expr::zero();
    for lambda in 0..n {
        for mu in 0..n {
            if lambda == mu {
                continue;
            }
            let fs: Vec<Expr> = (0..m).map(|r| field_strength(model, r, lambda, mu)).collect();
            for p in 0..m {
                for q in 0..m {
                    let k = algebra.kappa(p, q).expect("metric present");
                    if !k.is_zero() {
                        l += (&fs[p] * &fs[q]).scale(&(k * &quarter));
                    }
                }
            }
        }
    }
    Ok(HorizontalDensity::new(&model.system, l)?)
}

/// The Yang–Mills BRST candidate with the usual `-1/2` in `s c^r`.
pub fn yang_mills_brst(model: &ConnectionSystem) -> Result<BrstCandidate, ModelError> {
    yang_mills_brst_with_coefficient(model, &Rational::new((-1).into(), 2.into()))
}

/// `s a^r_λ` from the connection generator, `s c^r = k c^r_{pq} c^p c^q
/// (- c^μ c^r_μ)`, `s c^λ = c^λ_μ c^μ`.
pub fn yang_mills_brst_with_coefficient(
    model: &ConnectionSystem,
    k: &Rational,
) -> Result<BrstCandidate, ModelError> {
    let (n, m) = (model.base_dim(), model.algebra().dim());
    let mut dynamic = BTreeMap::new();
    for r in 0..m {
        for l in 0..n {
            dynamic.insert(
                model.a_component(r, l),
                model.connection_variation(r, l, model.ghost, model.diffeo_ghost),
            );
        }
    }
    let mut ghost = BTreeMap::new();
    for r in 0..m {
        let mut e = Expr::zero();
        for p in 0..m {
            for q in 0..m {
                let c = model.algebra().c(r, p, q);
                if !c.is_zero() {
                    e += (&model.var(model.ghost, p, &[]) * &model.var(model.ghost, q, &[])).scale(&(c * k));
                }
            }
        }
        if let Some(cv) = model.diffeo_ghost {
            for mu in 0..n {
                e -= &model.var(cv, mu, &[]) * &model.var(model.ghost, r, &[mu]);
            }
        }
        ghost.insert(model.system.component(model.ghost, &[r])?, e);
    }
    if let Some(cv) = model.diffeo_ghost {
        for l in 0..n {
            let mut e = Expr::zero();
            for mu in 0..n {
                e += &model.var(cv, l, &[mu]) * &model.var(cv, mu, &[]);
            }
            ghost.insert(model.system.component(cv, &[l])?, e);
        }
    }
    Ok(BrstCandidate::new(&model.system, dynamic, ghost)?)
}
