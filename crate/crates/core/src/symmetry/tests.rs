use proptest::prelude::*;

use super::*;
use crate::expr::{FieldId, Rational};
use crate::jetcalc::prolong_apply;
use crate::sample::{SampleShape, Sampler};

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

struct Maxwell {
    sys: FieldSystem,
    a: FieldId,
    xi: FieldId,
}

impl Maxwell {
    fn new() -> Self {
        let mut sys = FieldSystem::new(2).unwrap();
        let a = sys.add_dynamic("a", &[2], Parity::Even).unwrap();
        let xi = sys.add_parameter("xi", &[1]).unwrap();
        Maxwell { sys, a, xi }
    }

    fn a(&self, k: usize, dirs: &[usize]) -> Expr {
        self.sys.var_expr(self.a, &[k], dirs).unwrap()
    }

    fn xi(&self, dirs: &[usize]) -> Expr {
        self.sys.var_expr(self.xi, &[0], dirs).unwrap()
    }

    fn lagrangian(&self) -> HorizontalDensity {
        let f = &self.a(1, &[0]) - &self.a(0, &[1]);
        HorizontalDensity::new(&self.sys, (&f * &f).scale(&-half())).unwrap()
    }

    fn generator(&self, comps: [Expr; 2]) -> Result<GaugeGenerator, SymmetryError> {
        let [c0, c1] = comps;
        let map = BTreeMap::from([
            (self.sys.component(self.a, &[0]).unwrap(), c0),
            (self.sys.component(self.a, &[1]).unwrap(), c1),
        ]);
        GaugeGenerator::from_components(&self.sys, &map)
    }
}

fn scalar(n: usize) -> (FieldSystem, FieldId) {
    let mut sys = FieldSystem::new(n).unwrap();
    let y = sys.add_dynamic("y", &[1], Parity::Even).unwrap();
    (sys, y)
}

#[test]
fn maxwell_gauge_symmetry_holds() {
    let m = Maxwell::new();
    let g = m.generator([m.xi(&[0]), m.xi(&[1])]).unwrap();
    assert_eq!(g.max_parameter_order(), 1);
    let verdict = is_gauge_symmetry(&m.sys, &g, &m.lagrangian()).unwrap();
    assert!(verdict.holds);
    assert!(verdict.action.is_zero());
    assert!(verdict.euler_residuals.is_empty());
    let current = verdict.current.expect("current for an exact action");
    assert_eq!(current.divergence(), verdict.action);
}

#[test]
fn broken_maxwell_generator_fails() {
    let m = Maxwell::new();
    let g = m.generator([&m.xi(&[]) * &m.a(0, &[]), &m.xi(&[]) * &m.a(1, &[])]).unwrap();
    let verdict = is_gauge_symmetry(&m.sys, &g, &m.lagrangian()).unwrap();
    assert!(!verdict.holds);
    assert!(verdict.current.is_none());
    assert!(!verdict.euler_residuals.is_empty());
}

#[test]
fn nonlinear_generators_are_rejected() {
    let m = Maxwell::new();
    let sq = &m.xi(&[]) * &m.xi(&[]);
    assert!(matches!(m.generator([sq, Expr::zero()]), Err(SymmetryError::NotLinear(_))));
    assert!(matches!(
        m.generator([&m.xi(&[]) + &Expr::one(), Expr::zero()]),
        Err(SymmetryError::NotLinear(_))
    ));
}

#[test]
fn parameters_in_lagrangian_are_rejected() {
    let m = Maxwell::new();
    let g = m.generator([m.xi(&[0]), m.xi(&[1])]).unwrap();
    let l = HorizontalDensity::new(&m.sys, &m.xi(&[]) * &m.a(0, &[])).unwrap();
    assert_eq!(is_gauge_symmetry(&m.sys, &g, &l), Err(SymmetryError::ParameterInLagrangian));
}

#[test]
fn variational_symmetry_examples() {
    let (sys, y) = scalar(1);
    let yc = sys.component(y, &[0]).unwrap();
    let yv = |d: &[usize]| sys.var_expr(y, &[0], d).unwrap();

    let shift = GeneralizedVectorField::new(&sys, BTreeMap::from([(yc, Expr::one())])).unwrap();
    let l = HorizontalDensity::new(&sys, &yv(&[]) * &yv(&[])).unwrap();
    let verdict = is_variational_symmetry(&sys, &shift, &l);
    assert!(!verdict.holds);
    assert_eq!(verdict.euler_residuals[&yc], Expr::int(2));

    let translation = GeneralizedVectorField::new(&sys, BTreeMap::from([(yc, yv(&[0]))])).unwrap();
    let l = HorizontalDensity::new(&sys, (&yv(&[]) * &yv(&[])).scale(&half())).unwrap();
    let verdict = is_variational_symmetry(&sys, &translation, &l);
    assert!(verdict.holds);
    let current = verdict.current.unwrap();
    assert_eq!(current.divergence(), &yv(&[]) * &yv(&[0]));
    assert_eq!(current.components[0], (&yv(&[]) * &yv(&[])).scale(&half()));
}

#[test]
fn divergence_potentials_for_explicit_x_dependence() {
    let (sys, y) = scalar(2);
    // d_1(x^1 y) = y + x^1 y_1
    let target = &Expr::base_coordinate(0) * &sys.var_expr(y, &[0], &[]).unwrap();
    let f = dtot(&target, 0);
    let current = find_divergence_potential(&sys, &f).unwrap();
    assert_eq!(current.divergence(), f);
    assert!(find_divergence_potential(&sys, &sys.var_expr(y, &[0], &[]).unwrap()).is_none());
}

fn two_fields() -> (FieldSystem, [Component; 2], Component) {
    let mut sys = FieldSystem::new(1).unwrap();
    let y = sys.add_dynamic("y", &[2], Parity::Even).unwrap();
    let xi = sys.add_parameter("xi", &[1]).unwrap();
    (
        sys.clone(),
        [sys.component(y, &[0]).unwrap(), sys.component(y, &[1]).unwrap()],
        sys.component(xi, &[0]).unwrap(),
    )
}

fn trivial_key(j: Component, i: Component, r: Component, mi: MultiIndex) -> TrivialKey {
    TrivialKey {
        j,
        i,
        parameter: r,
        multi_index: mi,
    }
}

#[test]
fn trivial_gauge_symmetry_examples() {
    let (sys, [y1, y2], xi) = two_fields();
    let yv = |c: Component, d: &[usize]| {
        Expr::var(sys.jet_var(c, MultiIndex::from_entries(1, d).unwrap()).unwrap())
    };
    let l = HorizontalDensity::new(
        &sys,
        &(&yv(y1, &[0]) * &yv(y1, &[0])).scale(&half()) + &(&yv(y1, &[]) * &yv(y2, &[]).pow(2)),
    )
    .unwrap();
    let zero = trivial_gauge_symmetry(&sys, &BTreeMap::new(), &l).unwrap();
    assert!(zero.coefficients().is_empty());

    let mi0 = MultiIndex::zero(1);
    let t = BTreeMap::from([
        (trivial_key(y1, y2, xi, mi0.clone()), Expr::one()),
        (trivial_key(y2, y1, xi, mi0.clone()), -&Expr::one()),
    ]);
    let g = trivial_gauge_symmetry(&sys, &t, &l).unwrap();
    let e = euler_lagrange(&sys, &l);
    let comps = g.evaluate_on_fields(&sys, Some).unwrap();
    let xiv = Expr::var(sys.base_var(xi).unwrap());
    assert_eq!(comps[&y2], e.get(y1) * &xiv);
    assert_eq!(comps[&y1], -&(e.get(y2) * &xiv));
    assert!(gauge_contraction(&sys, &g, &l).unwrap().is_zero());

    // T^{1,2,(1)} = y^1 is also a gauge symmetry.
    let mi1 = MultiIndex::from_entries(1, &[0]).unwrap();
    let t = BTreeMap::from([
        (trivial_key(y1, y2, xi, mi1.clone()), yv(y1, &[])),
        (trivial_key(y2, y1, xi, mi1), -&yv(y1, &[])),
    ]);
    let g = trivial_gauge_symmetry(&sys, &t, &l).unwrap();
    assert!(is_gauge_symmetry(&sys, &g, &l).unwrap().holds);

    let bad = BTreeMap::from([(trivial_key(y1, y2, xi, mi0.clone()), Expr::one())]);
    assert!(matches!(
        trivial_gauge_symmetry(&sys, &bad, &l),
        Err(SymmetryError::Antisymmetry(_))
    ));
    let diagonal = BTreeMap::from([(trivial_key(y1, y1, xi, mi0), Expr::one())]);
    assert!(trivial_gauge_symmetry(&sys, &diagonal, &l).is_err());
}

#[test]
fn on_shell_examples() {
    let (sys, y) = scalar(1);
    let yv = |d: &[usize]| sys.var_expr(y, &[0], d).unwrap();
    let yc = sys.component(y, &[0]).unwrap();
    let l = HorizontalDensity::new(&sys, (&yv(&[0]) * &yv(&[0])).scale(&half())).unwrap();
    let e = euler_lagrange(&sys, &l).get(yc).clone();

    match reduce_on_shell(&sys, &e, &l, 0, 0) {
        OnShellVerdict::ZeroOnShell { witness } => {
            assert_eq!(witness[&(yc, MultiIndex::zero(1))], Expr::one());
        }
        other => panic!("expected a witness, got {other:?}"),
    }

    let f = &(&yv(&[]) * &dtot(&e, 0)) + &(&yv(&[0]) * &e);
    match reduce_on_shell(&sys, &f, &l, 1, 1) {
        OnShellVerdict::ZeroOnShell { witness } => {
            assert_eq!(expand_on_shell_witness(&sys, &l, &witness), f);
        }
        other => panic!("expected a witness, got {other:?}"),
    }
    assert_eq!(
        reduce_on_shell(&sys, &Expr::one(), &l, 2, 2),
        OnShellVerdict::NotFoundWithinBounds
    );
}

#[test]
fn monomial_enumeration_counts() {
    let mut sys = FieldSystem::new(1).unwrap();
    let y = sys.add_dynamic("y", &[1], Parity::Even).unwrap();
    let c = sys.add_ghost("c", &[1], None).unwrap();
    let vars = vec![
        sys.base_var(sys.component(y, &[0]).unwrap()).unwrap(),
        sys.base_var(sys.component(c, &[0]).unwrap()).unwrap(),
    ];
    // 1, y, c, y^2, y c (c^2 vanishes)
    assert_eq!(monomials_up_to(&vars, 2).len(), 5);
}

fn mixed_system() -> FieldSystem {
    let mut sys = FieldSystem::new(2).unwrap();
    sys.add_dynamic("u", &[2], Parity::Even).unwrap();
    sys.add_dynamic("psi", &[1], Parity::Odd).unwrap();
    sys
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn divergences_pass_the_euler_kernel_test(seed in any::<u64>()) {
        let sys = mixed_system();
        let mut s = Sampler::new(&sys, seed).with_shape(SampleShape { max_order: 1, max_degree: 2, max_terms: 3, ..Default::default() });
        let mut f = Expr::zero();
        for dir in 0..2 {
            f += dtot(&s.expr_with_parity(Parity::Even), dir);
        }
        prop_assert!(euler_operator(&sys, &f).is_zero());
        if let Some(current) = find_divergence_potential(&sys, &f) {
            prop_assert_eq!(current.divergence(), f);
        }
    }

    #[test]
    fn verdict_currents_are_exact(seed in any::<u64>()) {
        let sys = mixed_system();
        let mut s = Sampler::new(&sys, seed).with_shape(SampleShape { max_order: 1, max_degree: 2, max_terms: 3, ..Default::default() });
        let v = s.vector_field(&sys.components(), Parity::Even);
        let l = HorizontalDensity::new(&sys, s.expr_with_parity(Parity::Even)).unwrap();
        let verdict = is_variational_symmetry(&sys, &v, &l);
        prop_assert_eq!(verdict.holds, verdict.euler_residuals.is_empty());
        prop_assert_eq!(&verdict.action, &prolong_apply(&v, l.value()));
        if let Some(current) = verdict.current {
            prop_assert_eq!(current.divergence(), verdict.action);
        }
    }

    #[test]
    fn trivial_symmetries_have_zero_contraction(seed in any::<u64>()) {
        let (sys, ys, xi) = two_fields();
        let mut s = Sampler::new(&sys, seed).with_fields(&[ys[0].field]).with_shape(SampleShape { max_order: 1, max_degree: 2, max_terms: 3, ..Default::default() });
        let l = HorizontalDensity::new(&sys, s.expr()).unwrap();
        let mut t = BTreeMap::new();
        for mi in MultiIndex::all_up_to(1, 1) {
            let e = s.expr();
            t.insert(trivial_key(ys[0], ys[1], xi, mi.clone()), e.clone());
            t.insert(trivial_key(ys[1], ys[0], xi, mi), -&e);
        }
        let g = trivial_gauge_symmetry(&sys, &t, &l).unwrap();
        prop_assert!(gauge_contraction(&sys, &g, &l).unwrap().is_zero());
    }

    #[test]
    fn on_shell_witnesses_reexpand(seed in any::<u64>()) {
        let (sys, y) = scalar(1);
        let yv = |d: &[usize]| sys.var_expr(y, &[0], d).unwrap();
        let mut s = Sampler::new(&sys, seed).with_shape(SampleShape { max_order: 1, max_degree: 1, max_terms: 2, ..Default::default() });
        let l = HorizontalDensity::new(&sys, &(&yv(&[0]) * &yv(&[0])).scale(&half()) + &yv(&[]).pow(3)).unwrap();
        let e = euler_lagrange(&sys, &l).get(sys.component(y, &[0]).unwrap()).clone();
        let f = &(&s.expr() * &e) + &(&s.expr() * &dtot(&e, 0));
        match reduce_on_shell(&sys, &f, &l, 1, 1) {
            OnShellVerdict::ZeroOnShell { witness } => prop_assert_eq!(expand_on_shell_witness(&sys, &l, &witness), f),
            OnShellVerdict::NotFoundWithinBounds => prop_assert!(false, "membership by construction"),
        }
    }
}
